//! Forcing semantics over pre-ordered neighborhood models.
//!
//! Extensions are computed bottom-up over a hash-consed arena, so shared
//! subformulas are evaluated once per model. With `ext` the extension map,
//! `up(w)` the order up-set and `N_w` the neighborhood family:
//!
//! ```text
//! ext(false)    = {}
//! ext(q)        = V(q)                      (empty when q is unassigned)
//! ext(f & g)    = ext(f) /\ ext(g)
//! ext(f | g)    = ext(f) \/ ext(g)
//! ext(f -> g)   = { w : up(w) /\ ext(f) subset ext(g) }
//! ext(W f)      = ext(~f)  /\ { w : ext(f) in N_w }
//! ext(box f)    = ext(f)   /\ { w : ext(f) in N_w }
//! ext(dia f)    = ext(f)   /\ { w : -ext(f) not in N_w }
//! ext(bbox f)   = ext(f)   /\ { w : -ext(f) in N_w }
//! ext(bullet f) = ext(f)   /\ { w : ext(f) not in N_w }
//! ext(N f)      = ext(f)   /\ { w : ext(~f) in N_w }
//! ```

use crate::formula::{Formula, ModalOp};
use crate::logics::RuleId;
use crate::model::{family_contains, Model, WorldSet};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
}

fn ensure_valid(m: &Model) -> Result<(), SemanticsError> {
    match m.validate().first() {
        None => Ok(()),
        Some(v) => Err(SemanticsError::InvalidModel(v.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Bottom,
    Atom(u32),
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Modal(ModalOp, u32),
}

/// Hash-consed formula store. Node ids are topologically ordered: children
/// always precede parents, so a single forward sweep evaluates everything.
#[derive(Default)]
pub struct FormulaArena {
    nodes: Vec<Node>,
    memo: HashMap<Node, u32>,
    atoms: Vec<String>,
    atom_index: HashMap<String, u32>,
}

impl FormulaArena {
    pub fn new() -> FormulaArena {
        FormulaArena::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Atom names seen so far, in first-occurrence order.
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn intern(&mut self, f: &Formula) -> u32 {
        let node = match f {
            Formula::Bottom => Node::Bottom,
            Formula::Atom(name) => Node::Atom(self.intern_atom(name)),
            Formula::And(l, r) => Node::And(self.intern(l), self.intern(r)),
            Formula::Or(l, r) => Node::Or(self.intern(l), self.intern(r)),
            Formula::Imp(l, r) => Node::Imp(self.intern(l), self.intern(r)),
            Formula::Modal(op, b) => Node::Modal(*op, self.intern(b)),
        };
        if let Some(&id) = self.memo.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.memo.insert(node, id);
        id
    }

    fn intern_atom(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.atom_index.get(name) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(name.to_string());
        self.atom_index.insert(name.to_string(), i);
        i
    }

    /// Rebuild the AST of a node.
    pub fn to_formula(&self, id: u32) -> Formula {
        match self.nodes[id as usize] {
            Node::Bottom => Formula::Bottom,
            Node::Atom(a) => Formula::Atom(self.atoms[a as usize].clone()),
            Node::And(l, r) => Formula::and(self.to_formula(l), self.to_formula(r)),
            Node::Or(l, r) => Formula::or(self.to_formula(l), self.to_formula(r)),
            Node::Imp(l, r) => Formula::imp(self.to_formula(l), self.to_formula(r)),
            Node::Modal(op, b) => Formula::modal(op, self.to_formula(b)),
        }
    }
}

/// Neighborhood membership test, abstracted so enumeration can evaluate
/// on compact family encodings without building a [`Model`].
pub(crate) trait NbhdLookup {
    fn member(&self, w: usize, set: WorldSet) -> bool;
}

impl NbhdLookup for Model {
    fn member(&self, w: usize, set: WorldSet) -> bool {
        family_contains(self.nbhd(w), set)
    }
}

/// Families as bitmask codes: bit `s` of `codes[w]` says whether the
/// subset with world-mask `s` belongs to the family at `w`. Only usable
/// while `2^n` fits the code width.
pub(crate) struct CodeFams<'a>(pub &'a [u16]);

impl NbhdLookup for CodeFams<'_> {
    fn member(&self, w: usize, set: WorldSet) -> bool {
        (self.0[w] >> set.0) & 1 == 1
    }
}

/// `{ w : up(w) /\ a subset b }` — the implication clause.
fn imp_ext(n: usize, up: &[WorldSet], a: WorldSet, b: WorldSet) -> WorldSet {
    let bad = a.diff(b);
    let mut out = WorldSet::EMPTY;
    for w in 0..n {
        if up[w].inter(bad).is_empty() {
            out.insert(w);
        }
    }
    out
}

/// Worlds whose family contains `set`.
fn member_worlds<L: NbhdLookup>(n: usize, nb: &L, set: WorldSet) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for w in 0..n {
        if nb.member(w, set) {
            out.insert(w);
        }
    }
    out
}

/// Evaluate every arena node, writing one extension per node id into
/// `out`. Inputs are trusted; this is the hot path under enumeration.
pub(crate) fn eval_arena_into<L: NbhdLookup>(
    n: usize,
    up: &[WorldSet],
    nb: &L,
    atom_ext: &[WorldSet],
    arena: &FormulaArena,
    out: &mut Vec<WorldSet>,
) {
    out.clear();
    for node in &arena.nodes {
        let e = match *node {
            Node::Bottom => WorldSet::EMPTY,
            Node::Atom(a) => atom_ext[a as usize],
            Node::And(l, r) => out[l as usize].inter(out[r as usize]),
            Node::Or(l, r) => out[l as usize].union(out[r as usize]),
            Node::Imp(l, r) => imp_ext(n, up, out[l as usize], out[r as usize]),
            Node::Modal(op, b) => {
                let body: WorldSet = out[b as usize];
                match op {
                    ModalOp::W => imp_ext(n, up, body, WorldSet::EMPTY)
                        .inter(member_worlds(n, nb, body)),
                    ModalOp::Box => body.inter(member_worlds(n, nb, body)),
                    ModalOp::Dia => {
                        let comp = body.complement(n);
                        body.inter(member_worlds(n, nb, comp).complement(n))
                    }
                    ModalOp::BlackBox => {
                        let comp = body.complement(n);
                        body.inter(member_worlds(n, nb, comp))
                    }
                    ModalOp::Bullet => body.inter(member_worlds(n, nb, body).complement(n)),
                    ModalOp::Nop => {
                        let neg = imp_ext(n, up, body, WorldSet::EMPTY);
                        body.inter(member_worlds(n, nb, neg))
                    }
                }
            }
        };
        out.push(e);
    }
}

/// Evaluate every arena node on `m`; the result is indexed by node id.
/// The model is trusted to be valid.
pub fn eval_arena(m: &Model, arena: &FormulaArena) -> Vec<WorldSet> {
    let atom_ext: Vec<WorldSet> = arena
        .atoms
        .iter()
        .map(|name| m.valuation_of(name))
        .collect();
    let mut ext = Vec::with_capacity(arena.len());
    eval_arena_into(m.n_worlds(), m.order_masks(), m, &atom_ext, arena, &mut ext);
    ext
}

/// A formula together with the worlds forcing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub formula: Formula,
    pub worlds: WorldSet,
}

/// The worlds of `m` forcing `f`.
pub fn extension(m: &Model, f: &Formula) -> Result<Extension, SemanticsError> {
    ensure_valid(m)?;
    let mut arena = FormulaArena::new();
    let root = arena.intern(f);
    let ext = eval_arena(m, &arena);
    Ok(Extension {
        formula: f.clone(),
        worlds: ext[root as usize],
    })
}

/// Does the named world force `f`?
pub fn forces(m: &Model, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let w = m
        .world_index(world)
        .ok_or_else(|| SemanticsError::UnknownWorld(world.to_string()))?;
    Ok(extension(m, f)?.worlds.contains(w))
}

/// Extensions of all distinct subformulas of `f`, bottom-up (children before
/// parents, first occurrence only).
pub fn subformula_extensions(
    m: &Model,
    f: &Formula,
) -> Result<Vec<Extension>, SemanticsError> {
    ensure_valid(m)?;
    let mut arena = FormulaArena::new();
    arena.intern(f);
    let ext = eval_arena(m, &arena);
    Ok((0..arena.len())
        .map(|i| Extension {
            formula: arena.to_formula(i as u32),
            worlds: ext[i],
        })
        .collect())
}

/// Verdict of [`check_persistence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PersistenceVerdict {
    Holds,
    /// `subformula` is forced at `lower` but not at the order-larger
    /// `upper`. The first failing subformula bottom-up is reported, with
    /// its least world pair.
    Violation {
        subformula: Formula,
        lower: usize,
        upper: usize,
    },
}

/// Check that the extension of every subformula of `f` is an up-set.
pub fn check_persistence(m: &Model, f: &Formula) -> Result<PersistenceVerdict, SemanticsError> {
    ensure_valid(m)?;
    let mut arena = FormulaArena::new();
    arena.intern(f);
    let ext = eval_arena(m, &arena);
    for (i, &e) in ext.iter().enumerate() {
        if let Some((lower, upper)) = up_set_defect(m, e) {
            return Ok(PersistenceVerdict::Violation {
                subformula: arena.to_formula(i as u32),
                lower,
                upper,
            });
        }
    }
    Ok(PersistenceVerdict::Holds)
}

/// Least `(w, v)` with `w` in the set, `w <= v`, and `v` outside it.
pub fn up_set_defect(m: &Model, s: WorldSet) -> Option<(usize, usize)> {
    for w in s.iter() {
        for v in m.up(w).iter() {
            if !s.contains(v) {
                return Some((w, v));
            }
        }
    }
    None
}

/// Shape error when forming a rule's conclusion from premise instances.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleShapeError {
    #[error("{rule} expects {expected} premise(s), got {got}")]
    WrongArity {
        rule: RuleId,
        expected: usize,
        got: usize,
    },
    #[error("{rule} premise has the wrong shape: expected {expected}")]
    BadShape { rule: RuleId, expected: &'static str },
}

/// Build the conclusion a rule derives from the given premise instances.
/// `op` selects the operator rewritten by `RE`; `WN` and the `BK` rule fix
/// their own operators.
pub fn rule_conclusion(
    rule: RuleId,
    op: ModalOp,
    premises: &[Formula],
) -> Result<Formula, RuleShapeError> {
    let arity = |expected: usize| -> Result<(), RuleShapeError> {
        if premises.len() == expected {
            Ok(())
        } else {
            Err(RuleShapeError::WrongArity {
                rule,
                expected,
                got: premises.len(),
            })
        }
    };
    match rule {
        RuleId::Mp => {
            arity(2)?;
            match &premises[1] {
                Formula::Imp(l, r) if **l == premises[0] => Ok((**r).clone()),
                _ => Err(RuleShapeError::BadShape {
                    rule,
                    expected: "second premise 'f -> g' with 'f' the first premise",
                }),
            }
        }
        RuleId::Re => {
            arity(1)?;
            match &premises[0] {
                Formula::And(l, r) => match (&**l, &**r) {
                    (Formula::Imp(a, b), Formula::Imp(b2, a2)) if a == a2 && b == b2 => {
                        Ok(Formula::iff(
                            Formula::modal(op, (**a).clone()),
                            Formula::modal(op, (**b).clone()),
                        ))
                    }
                    _ => Err(RuleShapeError::BadShape {
                        rule,
                        expected: "premise '(f -> g) & (g -> f)'",
                    }),
                },
                _ => Err(RuleShapeError::BadShape {
                    rule,
                    expected: "premise '(f -> g) & (g -> f)'",
                }),
            }
        }
        RuleId::Wn => {
            arity(1)?;
            match &premises[0] {
                Formula::Imp(a, b) => Ok(Formula::imp(
                    Formula::and(
                        Formula::modal(ModalOp::W, (**a).clone()),
                        Formula::not((**b).clone()),
                    ),
                    Formula::modal(ModalOp::W, (**b).clone()),
                )),
                _ => Err(RuleShapeError::BadShape {
                    rule,
                    expected: "premise 'f -> g'",
                }),
            }
        }
        RuleId::BkRule => {
            arity(1)?;
            match &premises[0] {
                Formula::Imp(a, b) => {
                    let a = (**a).clone();
                    let b = (**b).clone();
                    Ok(Formula::imp(
                        Formula::and(Formula::circ(a.clone()), a),
                        Formula::and(Formula::circ(b.clone()), b),
                    ))
                }
                _ => Err(RuleShapeError::BadShape {
                    rule,
                    expected: "premise 'f -> g'",
                }),
            }
        }
    }
}

/// Verdict of [`check_rule_soundness`] on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSoundness {
    SoundHere,
    /// Premises are globally true but the conclusion fails at this world.
    UnsoundHere { world: usize },
}

impl fmt::Display for RuleSoundness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSoundness::SoundHere => f.write_str("sound here"),
            RuleSoundness::UnsoundHere { world } => {
                write!(f, "unsound here (conclusion fails at world #{world})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleCheckError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Shape(#[from] RuleShapeError),
}

/// Is the rule truth-preserving on this single model: do globally true
/// premise instances force a globally true conclusion?
pub fn check_rule_soundness(
    m: &Model,
    rule: RuleId,
    op: ModalOp,
    premises: &[Formula],
) -> Result<RuleSoundness, RuleCheckError> {
    ensure_valid(m)?;
    let conclusion = rule_conclusion(rule, op, premises)?;
    let full = m.full_set();
    let mut arena = FormulaArena::new();
    let premise_ids: Vec<u32> = premises.iter().map(|p| arena.intern(p)).collect();
    let conclusion_id = arena.intern(&conclusion);
    let ext = eval_arena(m, &arena);
    let premises_true = premise_ids.iter().all(|&id| ext[id as usize] == full);
    if !premises_true {
        return Ok(RuleSoundness::SoundHere);
    }
    match ext[conclusion_id as usize].complement(m.n_worlds()).iter().next() {
        None => Ok(RuleSoundness::SoundHere),
        Some(world) => Ok(RuleSoundness::UnsoundHere { world }),
    }
}
