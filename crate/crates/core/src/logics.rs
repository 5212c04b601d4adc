//! The catalog of supported logics.
//!
//! Each logic bundles a set of axiom schemes, inference rules, the modal
//! operators it speaks about, and the frame class its models are drawn
//! from. Every logic except `BK` extends a fixed nine-scheme basis for the
//! intuitionistic propositional connectives.

use crate::conditions::{CondFlag, FrameClass};
use crate::formula::ModalOp;
use crate::scheme::Scheme;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Identifier of a catalog logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicId {
    W,
    Wc,
    Mw,
    Mwc,
    A,
    B,
    C,
    D,
    Bk,
}

impl LogicId {
    pub const ALL: [LogicId; 9] = [
        LogicId::W,
        LogicId::Wc,
        LogicId::Mw,
        LogicId::Mwc,
        LogicId::A,
        LogicId::B,
        LogicId::C,
        LogicId::D,
        LogicId::Bk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::W => "W",
            LogicId::Wc => "WC",
            LogicId::Mw => "MW",
            LogicId::Mwc => "MWC",
            LogicId::A => "A",
            LogicId::B => "B",
            LogicId::C => "C",
            LogicId::D => "D",
            LogicId::Bk => "BK",
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic '{0}' (expected one of W, WC, MW, MWC, A, B, C, D, BK)")]
pub struct UnknownLogic(pub String);

impl FromStr for LogicId {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<LogicId, UnknownLogic> {
        LogicId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownLogic(s.to_string()))
    }
}

/// Identifier of an inference rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    /// From `f` and `f -> g` infer `g`.
    Mp,
    /// From `(f -> g) & (g -> f)` infer the same equivalence under the
    /// logic's modal operator.
    Re,
    /// From `f -> g` infer `(W f & ~g) -> W g`.
    Wn,
    /// From `f -> g` infer `(circ f & f) -> (circ g & g)`.
    BkRule,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::Mp => "MP",
            RuleId::Re => "RE",
            RuleId::Wn => "WN",
            RuleId::BkRule => "BKRULE",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named axiom scheme.
#[derive(Clone, Debug)]
pub struct Axiom {
    pub name: &'static str,
    pub scheme: Scheme,
}

fn axiom(name: &'static str, source: &str) -> Axiom {
    let scheme = Scheme::parse(source)
        .unwrap_or_else(|e| panic!("bad builtin scheme {name}: {e}"));
    Axiom { name, scheme }
}

/// A logic: operators, axiom schemes, rules, and its frame class.
#[derive(Clone, Debug)]
pub struct LogicSpec {
    pub id: LogicId,
    /// Modal operators in the logic's language.
    pub operators: Vec<ModalOp>,
    /// Schemes beyond the shared propositional basis (all of them for `BK`,
    /// which does not include that basis).
    pub axioms: Vec<Axiom>,
    pub rules: Vec<RuleId>,
    /// Frame conditions the logic's models satisfy.
    pub frame_class: FrameClass,
}

impl LogicSpec {
    /// The operator rewritten by this logic's `RE` rule.
    pub fn primary_op(&self) -> ModalOp {
        self.operators[0]
    }

    pub fn has_rule(&self, rule: RuleId) -> bool {
        self.rules.contains(&rule)
    }

    /// Resolve an axiom name against this logic's schemes, then against the
    /// shared propositional basis (for logics that include it).
    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        if let Some(ax) = self.axioms.iter().find(|a| a.name == name) {
            return Some(ax);
        }
        if self.includes_propositional_basis() {
            return ipc_basis().iter().find(|a| a.name == name);
        }
        None
    }

    pub fn includes_propositional_basis(&self) -> bool {
        self.id != LogicId::Bk
    }

    /// Every scheme whose instances should be valid on the logic's frame
    /// class: the named extras plus the propositional basis when included.
    pub fn all_axioms(&self) -> Vec<&Axiom> {
        let mut out: Vec<&Axiom> = Vec::new();
        if self.includes_propositional_basis() {
            out.extend(ipc_basis());
        }
        out.extend(self.axioms.iter());
        out
    }
}

/// The nine-scheme propositional basis shared by all catalog logics
/// except `BK`.
pub fn ipc_basis() -> &'static [Axiom] {
    static BASIS: OnceLock<Vec<Axiom>> = OnceLock::new();
    BASIS.get_or_init(|| {
        vec![
            axiom("ipc1", "A -> (B -> A)"),
            axiom("ipc2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
            axiom("ipc3", "A & B -> A"),
            axiom("ipc4", "A & B -> B"),
            axiom("ipc5", "A -> (B -> (A & B))"),
            axiom("ipc6", "A -> A | B"),
            axiom("ipc7", "B -> A | B"),
            axiom("ipc8", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
            axiom("ipc9", "false -> A"),
        ]
    })
}

/// Look up a catalog logic.
pub fn logic_spec(id: LogicId) -> &'static LogicSpec {
    static CATALOG: OnceLock<Vec<LogicSpec>> = OnceLock::new();
    let catalog = CATALOG.get_or_init(|| {
        let ntax = || axiom("ntax", "W A -> ~A");
        let wcax = || axiom("wcax", "(W A & W B) -> W (A & B)");
        vec![
            LogicSpec {
                id: LogicId::W,
                operators: vec![ModalOp::W],
                axioms: vec![ntax()],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::C1]),
            },
            LogicSpec {
                id: LogicId::Wc,
                operators: vec![ModalOp::W],
                axioms: vec![ntax(), wcax()],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::C1, CondFlag::Cap]),
            },
            LogicSpec {
                id: LogicId::Mw,
                operators: vec![ModalOp::W],
                axioms: vec![ntax()],
                rules: vec![RuleId::Mp, RuleId::Re, RuleId::Wn],
                frame_class: FrameClass::of(&[CondFlag::C1, CondFlag::Sup]),
            },
            LogicSpec {
                id: LogicId::Mwc,
                operators: vec![ModalOp::W],
                axioms: vec![ntax(), wcax()],
                rules: vec![RuleId::Mp, RuleId::Re, RuleId::Wn],
                frame_class: FrameClass::of(&[CondFlag::C1, CondFlag::Sup, CondFlag::Cap]),
            },
            LogicSpec {
                id: LogicId::A,
                operators: vec![ModalOp::Box],
                axioms: vec![axiom("tbox", "box A -> A")],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::CBox]),
            },
            LogicSpec {
                id: LogicId::B,
                operators: vec![ModalOp::Dia],
                axioms: vec![axiom("tdia", "dia A -> A")],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::CDia]),
            },
            LogicSpec {
                id: LogicId::C,
                operators: vec![ModalOp::BlackBox],
                axioms: vec![axiom("tbsq", "bbox A -> A")],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::CBsq]),
            },
            LogicSpec {
                id: LogicId::D,
                operators: vec![ModalOp::Bullet],
                axioms: vec![axiom("tblt", "bullet A -> A")],
                rules: vec![RuleId::Mp, RuleId::Re],
                frame_class: FrameClass::of(&[CondFlag::CBlt]),
            },
            LogicSpec {
                id: LogicId::Bk,
                operators: vec![ModalOp::Bullet],
                axioms: vec![
                    axiom("circ_top", "circ (false -> false)"),
                    axiom("tblt", "bullet A -> A"),
                    axiom("circ_cap", "(circ A & circ B) -> circ (A & B)"),
                ],
                rules: vec![RuleId::Mp, RuleId::BkRule],
                frame_class: FrameClass::EMPTY,
            },
        ]
    });
    catalog.iter().find(|l| l.id == id).expect("catalog covers every id")
}
