//! Finite-model workbench for intuitionistic modal logics interpreted over
//! pre-ordered neighborhood frames.
//!
//! A frame is a finite partially ordered set of worlds together with a
//! neighborhood family at each world; valuations are persistent (up-closed).
//! On top of the forcing semantics the crate provides a catalog of Hilbert
//! systems, bounded countermodel search, and a derivation checker.
//!
//! Everything is a pure function over immutable inputs; all operations are
//! safe to call from multiple threads.

pub mod conditions;
pub mod formula;
pub mod gen;
pub mod logics;
pub mod model;
pub mod parse;
pub mod proof;
pub mod scheme;
pub mod search;
pub mod semantics;

pub use conditions::{check_conditions, CondFlag, CondVerdict, FrameClass};
pub use formula::{Formula, ModalOp};
pub use logics::{logic_spec, LogicId, LogicSpec, RuleId};
pub use model::{Model, WorldSet, MAX_WORLDS};
pub use parse::{parse, ParseError};
pub use proof::{
    check_derivation, derivation_from_json, Derivation, DerivationLoadError, Justification, Line,
    ProofError, ProofErrorKind,
};
pub use scheme::{Assignment, Scheme};
pub use search::{
    enumerate_models, find_countermodel, run_experiment, ExperimentReport, SearchConfig,
    SearchError, SearchMode, SearchOutcome, EXHAUSTIVE_BOUND, EXPERIMENT_NAMES,
};
pub use semantics::{
    check_persistence, check_rule_soundness, extension, forces, rule_conclusion,
    subformula_extensions, Extension, PersistenceVerdict, RuleSoundness, SemanticsError,
};
