//! Bounded validity checking: enumerate or sample models of a frame
//! class, decide validity at the bound, and return canonical first
//! countermodels.
//!
//! "Valid at bound" means true at every world of every model up to the
//! configured world count — it is never a claim about larger models.

mod enumerate;
pub mod experiments;
pub mod report;
mod sample;

pub use enumerate::EXHAUSTIVE_BOUND;
pub use experiments::{run_experiment, ExperimentReport, EXPERIMENT_NAMES};
pub use report::{experiment_json, search_report, ExperimentJson, Report, ReportStats};

use crate::conditions::{class_holds, FrameClass};
use crate::formula::Formula;
use crate::model::{Model, WorldSet, MAX_WORLDS};
use crate::semantics::{
    eval_arena_into, subformula_extensions, CodeFams, Extension, FormulaArena,
};
use enumerate::RawEnumeration;
use sample::{sampled_model, SampledIter};

/// How models are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every model up to the bound, in canonical order.
    Exhaustive,
    /// `count` seeded random models.
    Sampled { seed: u64, count: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub min_worlds: usize,
    pub max_worlds: usize,
    pub frame_class: FrameClass,
    /// Valuation atoms; `None` takes the atoms of the query formula.
    pub atoms: Option<Vec<String>>,
    pub mode: SearchMode,
    /// Worker threads for sampled scans (exhaustive scans are serial).
    /// The outcome is identical for every worker count.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            min_worlds: 1,
            max_worlds: 2,
            frame_class: FrameClass::EMPTY,
            atoms: None,
            mode: SearchMode::Exhaustive,
            workers: 1,
        }
    }
}

impl SearchConfig {
    pub fn exhaustive(max_worlds: usize) -> SearchConfig {
        SearchConfig {
            max_worlds,
            ..SearchConfig::default()
        }
    }

    pub fn sampled(max_worlds: usize, seed: u64, count: u64) -> SearchConfig {
        SearchConfig {
            max_worlds,
            mode: SearchMode::Sampled { seed, count },
            ..SearchConfig::default()
        }
    }

    pub fn with_class(mut self, class: FrameClass) -> SearchConfig {
        self.frame_class = class;
        self
    }

    pub fn with_atoms(mut self, atoms: &[&str]) -> SearchConfig {
        self.atoms = Some(atoms.iter().map(|s| s.to_string()).collect());
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.min_worlds == 0 {
            return Err(SearchError::ZeroWorlds);
        }
        if self.min_worlds > self.max_worlds {
            return Err(SearchError::EmptyRange {
                min: self.min_worlds,
                max: self.max_worlds,
            });
        }
        match self.mode {
            SearchMode::Exhaustive if self.max_worlds > EXHAUSTIVE_BOUND => {
                Err(SearchError::ExhaustiveBound(self.max_worlds))
            }
            _ if self.max_worlds > MAX_WORLDS => Err(SearchError::TooManyWorlds(self.max_worlds)),
            _ => Ok(()),
        }
    }

    fn atoms_for(&self, f: &Formula) -> Vec<String> {
        match &self.atoms {
            Some(atoms) => atoms.clone(),
            None => f.atoms(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("min_worlds must be at least 1")]
    ZeroWorlds,
    #[error("min_worlds {min} exceeds max_worlds {max}")]
    EmptyRange { min: usize, max: usize },
    #[error("exhaustive enumeration is limited to {EXHAUSTIVE_BOUND} worlds (got {0}); use sampled mode")]
    ExhaustiveBound(usize),
    #[error("world bound {0} exceeds the {MAX_WORLDS}-world limit")]
    TooManyWorlds(usize),
    #[error("unknown experiment '{0}' (expected one of {})", EXPERIMENT_NAMES.join(", "))]
    UnknownExperiment(String),
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

/// Result of a bounded validity search.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    ValidAtBound {
        models_checked: u64,
    },
    Countermodel {
        model: Model,
        /// Index of the first refuting world.
        witness: usize,
        /// Extensions of every distinct subformula on the countermodel.
        extensions: Vec<Extension>,
        models_checked: u64,
    },
}

impl SearchOutcome {
    pub fn models_checked(&self) -> u64 {
        match self {
            SearchOutcome::ValidAtBound { models_checked }
            | SearchOutcome::Countermodel { models_checked, .. } => *models_checked,
        }
    }

    pub fn is_valid_at_bound(&self) -> bool {
        matches!(self, SearchOutcome::ValidAtBound { .. })
    }
}

/// Stream of models drawn per the config, in canonical order for
/// exhaustive mode and in index order for sampled mode.
pub struct ModelStream(StreamInner);

enum StreamInner {
    Exhaustive(Box<RawEnumeration>),
    Sampled(SampledIter),
}

impl Iterator for ModelStream {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        match &mut self.0 {
            StreamInner::Exhaustive(raw) => {
                if raw.next_raw() {
                    Some(raw.make_model())
                } else {
                    None
                }
            }
            StreamInner::Sampled(iter) => iter.next(),
        }
    }
}

/// Stream every model for the config. `atoms` must be set in the config
/// (there is no query formula to default from).
pub fn enumerate_models(cfg: &SearchConfig) -> Result<ModelStream, SearchError> {
    cfg.validate()?;
    let atoms = cfg.atoms.clone().unwrap_or_default();
    Ok(ModelStream(match cfg.mode {
        SearchMode::Exhaustive => StreamInner::Exhaustive(Box::new(RawEnumeration::new(
            cfg.frame_class,
            atoms,
            cfg.min_worlds,
            cfg.max_worlds,
        ))),
        SearchMode::Sampled { seed, count } => StreamInner::Sampled(SampledIter {
            seed,
            count,
            next: 0,
            min_n: cfg.min_worlds,
            max_n: cfg.max_worlds,
            class: cfg.frame_class,
            atoms,
        }),
    }))
}

fn least_missing(ext: WorldSet, n: usize) -> usize {
    (0..n).find(|&w| !ext.contains(w)).expect("some world refutes")
}

/// Re-validate a countermodel end to end before returning it.
fn self_check(
    f: &Formula,
    m: &Model,
    witness: usize,
    class: FrameClass,
) -> Result<(), SearchError> {
    if let Some(v) = m.validate().first() {
        return Err(SearchError::SelfCheck(format!(
            "countermodel fails validation: {v}"
        )));
    }
    if !class_holds(m, class) {
        return Err(SearchError::SelfCheck(
            "countermodel leaves its frame class".to_string(),
        ));
    }
    let ext = crate::semantics::extension(m, f)
        .map_err(|e| SearchError::SelfCheck(e.to_string()))?;
    if ext.worlds.contains(witness) {
        return Err(SearchError::SelfCheck(format!(
            "witness world {} does not refute",
            m.world_name(witness)
        )));
    }
    Ok(())
}

fn countermodel_outcome(
    f: &Formula,
    m: Model,
    class: FrameClass,
    models_checked: u64,
) -> Result<SearchOutcome, SearchError> {
    let ext = crate::semantics::extension(&m, f)
        .map_err(|e| SearchError::SelfCheck(e.to_string()))?;
    let witness = least_missing(ext.worlds, m.n_worlds());
    self_check(f, &m, witness, class)?;
    let extensions =
        subformula_extensions(&m, f).map_err(|e| SearchError::SelfCheck(e.to_string()))?;
    Ok(SearchOutcome::Countermodel {
        model: m,
        witness,
        extensions,
        models_checked,
    })
}

/// Search the configured model space for a world refuting `f`. Returns
/// the canonically first countermodel, or validity at the bound.
pub fn find_countermodel(f: &Formula, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let atoms = cfg.atoms_for(f);
    let mut arena = FormulaArena::new();
    let root = arena.intern(f) as usize;
    match cfg.mode {
        SearchMode::Exhaustive => {
            let mut raw = RawEnumeration::new(
                cfg.frame_class,
                atoms,
                cfg.min_worlds,
                cfg.max_worlds,
            );
            let mut ext = Vec::with_capacity(arena.len());
            let mut codes = Vec::new();
            let mut atom_ext = Vec::new();
            let mut checked = 0u64;
            while raw.next_raw() {
                checked += 1;
                let n = raw.n();
                raw.codes_into(&mut codes);
                raw.atom_exts_into(&mut atom_ext);
                eval_arena_into(n, raw.up(), &CodeFams(&codes), &atom_ext, &arena, &mut ext);
                if ext[root] != WorldSet::full(n) {
                    return countermodel_outcome(f, raw.make_model(), cfg.frame_class, checked);
                }
            }
            Ok(SearchOutcome::ValidAtBound {
                models_checked: checked,
            })
        }
        SearchMode::Sampled { seed, count } => {
            sampled_search(f, cfg, &arena, root, seed, count, &atoms)
        }
    }
}

/// Block size for parallel sampled scans. Results are merged per block,
/// so the first hit is the least sample index regardless of worker count.
const SAMPLE_BLOCK: u64 = 4096;

fn eval_sample(
    f_arena: &FormulaArena,
    root: usize,
    m: &Model,
    scratch: &mut Vec<WorldSet>,
) -> bool {
    let atom_ext: Vec<WorldSet> = f_arena
        .atoms()
        .iter()
        .map(|a| m.valuation_of(a))
        .collect();
    eval_arena_into(
        m.n_worlds(),
        m.order_masks(),
        m,
        &atom_ext,
        f_arena,
        scratch,
    );
    scratch[root] == WorldSet::full(m.n_worlds())
}

#[allow(clippy::too_many_arguments)]
fn sampled_search(
    f: &Formula,
    cfg: &SearchConfig,
    arena: &FormulaArena,
    root: usize,
    seed: u64,
    count: u64,
    atoms: &[String],
) -> Result<SearchOutcome, SearchError> {
    let workers = cfg.workers.max(1);
    let scan = |from: u64, to: u64| -> Option<u64> {
        let mut scratch = Vec::new();
        (from..to).find(|&idx| {
            let m = sampled_model(
                seed,
                idx,
                cfg.min_worlds,
                cfg.max_worlds,
                cfg.frame_class,
                atoms,
            );
            !eval_sample(arena, root, &m, &mut scratch)
        })
    };
    let mut start = 0u64;
    while start < count {
        let end = (start + SAMPLE_BLOCK).min(count);
        let hit = if workers == 1 || end - start < 2 {
            scan(start, end)
        } else {
            let per = (end - start).div_ceil(workers as u64);
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..workers as u64)
                    .map(|k| {
                        let lo = start + k * per;
                        let hi = (lo + per).min(end);
                        s.spawn(move || if lo < hi { scan(lo, hi) } else { None })
                    })
                    .collect();
                handles
                    .into_iter()
                    .filter_map(|h| h.join().expect("search worker panicked"))
                    .min()
            })
        };
        if let Some(idx) = hit {
            let m = sampled_model(
                seed,
                idx,
                cfg.min_worlds,
                cfg.max_worlds,
                cfg.frame_class,
                atoms,
            );
            return countermodel_outcome(f, m, cfg.frame_class, idx + 1);
        }
        start = end;
    }
    Ok(SearchOutcome::ValidAtBound {
        models_checked: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::CondFlag;
    use crate::parse::parse;

    fn class(flags: &[CondFlag]) -> FrameClass {
        FrameClass::of(flags)
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::exhaustive(4);
        assert_eq!(
            find_countermodel(&parse("p").unwrap(), &cfg).unwrap_err(),
            SearchError::ExhaustiveBound(4)
        );
        cfg.min_worlds = 3;
        cfg.max_worlds = 2;
        assert!(matches!(
            find_countermodel(&parse("p").unwrap(), &cfg).unwrap_err(),
            SearchError::EmptyRange { .. }
        ));
        let cfg = SearchConfig::sampled(17, 1, 10);
        assert_eq!(
            find_countermodel(&parse("p").unwrap(), &cfg).unwrap_err(),
            SearchError::TooManyWorlds(17)
        );
    }

    #[test]
    fn enumeration_counts_via_public_stream() {
        let cfg = SearchConfig::exhaustive(1).with_atoms(&["p"]);
        assert_eq!(enumerate_models(&cfg).unwrap().count(), 8);
    }

    /// Hand evaluation: with one world, the only way to refute
    /// `box p -> dia p` is V(p) = {w} with both {w} and {} in the family.
    /// That model has family code 3 and is reached after the 7 earlier
    /// (family, valuation) combinations.
    #[test]
    fn one_world_bridge_countermodel() {
        let f = parse("box p -> dia p").unwrap();
        let cfg = SearchConfig::exhaustive(1)
            .with_class(class(&[CondFlag::CBox, CondFlag::CDia]));
        match find_countermodel(&f, &cfg).unwrap() {
            SearchOutcome::Countermodel {
                model,
                witness,
                models_checked,
                ..
            } => {
                assert_eq!(model.n_worlds(), 1);
                assert_eq!(model.nbhd(0), &[WorldSet::EMPTY, WorldSet(1)]);
                assert_eq!(model.valuation_of("p"), WorldSet(1));
                assert_eq!(witness, 0);
                assert_eq!(models_checked, 8);
            }
            other => panic!("expected countermodel, got {other:?}"),
        }
    }

    #[test]
    fn ntax_is_valid_at_bound_two() {
        let f = parse("W p -> ~p").unwrap();
        let cfg = SearchConfig::exhaustive(2).with_class(class(&[CondFlag::C1]));
        let out = find_countermodel(&f, &cfg).unwrap();
        assert!(out.is_valid_at_bound(), "got {out:?}");
        // Excluded middle, by contrast, has a 2-chain countermodel.
        let f = parse("p | ~p").unwrap();
        let cfg = SearchConfig::exhaustive(2).with_class(class(&[CondFlag::C1]));
        let out = find_countermodel(&f, &cfg).unwrap();
        assert!(!out.is_valid_at_bound());
    }

    #[test]
    fn countermodel_extensions_are_reported() {
        let f = parse("box p -> dia p").unwrap();
        let cfg = SearchConfig::exhaustive(1)
            .with_class(class(&[CondFlag::CBox, CondFlag::CDia]));
        match find_countermodel(&f, &cfg).unwrap() {
            SearchOutcome::Countermodel { extensions, .. } => {
                let texts: Vec<String> = extensions
                    .iter()
                    .map(|e| format!("{} = {:?}", e.formula, e.worlds))
                    .collect();
                assert_eq!(
                    texts,
                    vec![
                        "p = WorldSet(1)",
                        "box p = WorldSet(1)",
                        "dia p = WorldSet(0)",
                        "box p -> dia p = WorldSet(0)",
                    ]
                );
            }
            other => panic!("expected countermodel, got {other:?}"),
        }
    }

    #[test]
    fn sampled_outcome_is_worker_invariant() {
        // Excluded middle fails on any chain whose valuation is a proper
        // up-set, so the sampled stream hits a countermodel early.
        let f = parse("p | ~p").unwrap();
        let base = SearchConfig::sampled(4, 42, 50_000);
        let one = find_countermodel(&f, &base).unwrap();
        for workers in [2, 3, 8] {
            let mut cfg = base.clone();
            cfg.workers = workers;
            let multi = find_countermodel(&f, &cfg).unwrap();
            match (&one, &multi) {
                (
                    SearchOutcome::Countermodel {
                        model: a,
                        witness: wa,
                        models_checked: ca,
                        ..
                    },
                    SearchOutcome::Countermodel {
                        model: b,
                        witness: wb,
                        models_checked: cb,
                        ..
                    },
                ) => {
                    assert_eq!(a.to_raw(), b.to_raw());
                    assert_eq!(wa, wb);
                    assert_eq!(ca, cb);
                }
                _ => panic!("expected countermodels"),
            }
        }
    }

    #[test]
    fn sampled_valid_counts_all_models() {
        // p -> p is valid everywhere.
        let f = parse("p -> p").unwrap();
        let cfg = SearchConfig::sampled(3, 9, 1000);
        match find_countermodel(&f, &cfg).unwrap() {
            SearchOutcome::ValidAtBound { models_checked } => {
                assert_eq!(models_checked, 1000)
            }
            other => panic!("expected valid, got {other:?}"),
        }
    }
}
