//! Hilbert-style derivation checking.
//!
//! A derivation is a numbered list of formulas, each justified as a stated
//! premise, an axiom instance, or the result of one of the logic's rules
//! applied to earlier lines. Checking is purely syntactic: axiom lines must
//! match their scheme, rule lines must reproduce the rule's conclusion
//! shape exactly.
//!
//! Modus ponens may be applied anywhere. The congruence-style rules (`RE`,
//! `WN`, `BKRULE`) may only cite lines whose justification chain never
//! touches a premise: applying them under open assumptions is unsound, so
//! the checker enforces the theorems-only discipline.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::formula::Formula;
use crate::logics::{logic_spec, LogicId, RuleId};
use crate::parse::{parse, ParseError};
use crate::scheme::{is_metavariable, Assignment};
use crate::semantics::rule_conclusion;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// The k-th stated premise, 1-based.
    Premise(usize),
    /// An axiom of the logic (or of the shared propositional basis), with
    /// an optional explicit metavariable assignment. Without one, the line
    /// must match the scheme by unification.
    Axiom {
        name: String,
        assignment: Option<Assignment>,
    },
    /// Modus ponens: the second cited line is `first -> this`.
    Mp(usize, usize),
    /// Extensionality over the logic's operator, from a biconditional line.
    Re(usize),
    /// The false-belief necessitation rule, from an implication line.
    Wn(usize),
    /// The bk congruence rule, from an implication line.
    BkRule(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    /// 1-based position; must equal the line's place in the list.
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub logic: LogicId,
    pub premises: Vec<Formula>,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProofErrorKind {
    #[error("expected line number {expected}")]
    BadLineNumber { expected: usize },
    #[error("cited line {0} is not strictly earlier")]
    ForwardReference(usize),
    #[error("premise index {index} is out of range ({available} premises)")]
    BadPremiseIndex { index: usize, available: usize },
    #[error("formula differs from premise {0}")]
    PremiseMismatch(usize),
    #[error("unknown axiom '{name}' in logic {logic}")]
    UnknownAxiom { name: String, logic: LogicId },
    #[error("formula is not an instance of axiom {name} ({scheme})")]
    SchemeMismatch { name: String, scheme: String },
    #[error("assignment leaves metavariable {0} unbound")]
    UnboundMetavariable(char),
    #[error("rule {rule} is not part of logic {logic}")]
    RuleNotInLogic { rule: RuleId, logic: LogicId },
    #[error("line {major} must be 'line {minor} -> this line'")]
    MpMismatch { minor: usize, major: usize },
    #[error("{0}")]
    BadRulePremise(String),
    #[error("rule conclusion would be {expected}")]
    WrongConclusion { expected: String },
    #[error("rule applied to premise-dependent line")]
    PremiseDependentLine,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    pub line: usize,
    pub kind: ProofErrorKind,
}

/// Verify every line of a derivation. On success the last line is a
/// consequence of the premises in the derivation's logic.
pub fn check_derivation(d: &Derivation) -> Result<(), ProofError> {
    let spec = logic_spec(d.logic);
    // premise_free[i]: line i+1 never depends on a stated premise.
    let mut premise_free: Vec<bool> = Vec::with_capacity(d.lines.len());

    for (pos, line) in d.lines.iter().enumerate() {
        let n = pos + 1;
        let fail = |kind: ProofErrorKind| -> Result<(), ProofError> {
            Err(ProofError { line: n, kind })
        };
        if line.index != n {
            fail(ProofErrorKind::BadLineNumber { expected: n })?;
        }
        let cite = |i: usize| -> Result<usize, ProofError> {
            if i == 0 || i >= n {
                Err(ProofError {
                    line: n,
                    kind: ProofErrorKind::ForwardReference(i),
                })
            } else {
                Ok(i - 1)
            }
        };
        let theorem_rule = |rule: RuleId, i: usize| -> Result<usize, ProofError> {
            if !spec.has_rule(rule) {
                return Err(ProofError {
                    line: n,
                    kind: ProofErrorKind::RuleNotInLogic {
                        rule,
                        logic: d.logic,
                    },
                });
            }
            let p = cite(i)?;
            if !premise_free[p] {
                return Err(ProofError {
                    line: n,
                    kind: ProofErrorKind::PremiseDependentLine,
                });
            }
            Ok(p)
        };
        let conclude = |rule: RuleId, p: usize| -> Result<(), ProofError> {
            let expected = rule_conclusion(rule, spec.primary_op(), &[d.lines[p].formula.clone()])
                .map_err(|e| ProofError {
                    line: n,
                    kind: ProofErrorKind::BadRulePremise(e.to_string()),
                })?;
            if expected != line.formula {
                return Err(ProofError {
                    line: n,
                    kind: ProofErrorKind::WrongConclusion {
                        expected: expected.to_string(),
                    },
                });
            }
            Ok(())
        };

        let free = match &line.justification {
            Justification::Premise(k) => {
                let k = *k;
                if k == 0 || k > d.premises.len() {
                    fail(ProofErrorKind::BadPremiseIndex {
                        index: k,
                        available: d.premises.len(),
                    })?;
                }
                if d.premises[k - 1] != line.formula {
                    fail(ProofErrorKind::PremiseMismatch(k))?;
                }
                false
            }
            Justification::Axiom { name, assignment } => {
                let ax = spec.axiom(name).ok_or_else(|| ProofError {
                    line: n,
                    kind: ProofErrorKind::UnknownAxiom {
                        name: name.clone(),
                        logic: d.logic,
                    },
                })?;
                let matched = match assignment {
                    Some(asg) => {
                        let inst = ax.scheme.instantiate(asg).map_err(|e| ProofError {
                            line: n,
                            kind: ProofErrorKind::UnboundMetavariable(e.0),
                        })?;
                        inst == line.formula
                    }
                    None => ax.scheme.match_against(&line.formula).is_some(),
                };
                if !matched {
                    fail(ProofErrorKind::SchemeMismatch {
                        name: name.clone(),
                        scheme: ax.scheme.to_string(),
                    })?;
                }
                true
            }
            Justification::Mp(i, j) => {
                let pi = cite(*i)?;
                let pj = cite(*j)?;
                match &d.lines[pj].formula {
                    Formula::Imp(a, b)
                        if **a == d.lines[pi].formula && **b == line.formula => {}
                    _ => fail(ProofErrorKind::MpMismatch {
                        minor: *i,
                        major: *j,
                    })?,
                }
                premise_free[pi] && premise_free[pj]
            }
            Justification::Re(i) => {
                let p = theorem_rule(RuleId::Re, *i)?;
                conclude(RuleId::Re, p)?;
                true
            }
            Justification::Wn(i) => {
                let p = theorem_rule(RuleId::Wn, *i)?;
                conclude(RuleId::Wn, p)?;
                true
            }
            Justification::BkRule(i) => {
                let p = theorem_rule(RuleId::BkRule, *i)?;
                conclude(RuleId::BkRule, p)?;
                true
            }
        };
        premise_free.push(free);
    }
    Ok(())
}

/// Problems turning text into a [`Derivation`]; distinct from check errors
/// so callers can map them to input-error handling.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DerivationLoadError {
    #[error("invalid derivation JSON: {0}")]
    Json(String),
    #[error("unknown logic '{0}'")]
    Logic(String),
    #[error("premise {index}: {err}")]
    BadPremise { index: usize, err: ParseError },
    #[error("line {n}: {err}")]
    BadFormula { n: usize, err: ParseError },
    #[error("line {n}: justification must name exactly one of premise, axiom, mp, re, wn, bkrule")]
    BadJustification { n: usize },
    #[error("line {n}: 'assign' is only meaningful with 'axiom'")]
    StrayAssignment { n: usize },
    #[error("line {n}: '{key}' is not a metavariable (single letter A-Z)")]
    BadMetavariable { n: usize, key: String },
    #[error("line {n}: binding for {key}: {err}")]
    BadBinding { n: usize, key: String, err: ParseError },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    logic: String,
    #[serde(default)]
    premises: Vec<String>,
    lines: Vec<RawLine>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    n: usize,
    f: String,
    by: RawBy,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBy {
    #[serde(default)]
    premise: Option<usize>,
    #[serde(default)]
    axiom: Option<String>,
    #[serde(default)]
    assign: Option<BTreeMap<String, String>>,
    #[serde(default)]
    mp: Option<[usize; 2]>,
    #[serde(default)]
    re: Option<usize>,
    #[serde(default)]
    wn: Option<usize>,
    #[serde(default)]
    bkrule: Option<usize>,
}

/// Parse the on-disk derivation format:
/// `{"logic": "WC", "premises": [], "lines": [{"n": 1, "f": "...", "by": {...}}]}`
/// where `by` is one of `{"premise": k}`, `{"axiom": name, "assign": {...}?}`,
/// `{"mp": [i, j]}`, `{"re": i}`, `{"wn": i}`, `{"bkrule": i}`.
pub fn derivation_from_json(text: &str) -> Result<Derivation, DerivationLoadError> {
    let raw: RawDerivation =
        serde_json::from_str(text).map_err(|e| DerivationLoadError::Json(e.to_string()))?;
    let logic: LogicId = raw
        .logic
        .parse()
        .map_err(|_| DerivationLoadError::Logic(raw.logic.clone()))?;

    let mut premises = Vec::with_capacity(raw.premises.len());
    for (i, text) in raw.premises.iter().enumerate() {
        premises.push(parse(text).map_err(|err| DerivationLoadError::BadPremise {
            index: i + 1,
            err,
        })?);
    }

    let mut lines = Vec::with_capacity(raw.lines.len());
    for raw_line in &raw.lines {
        let n = raw_line.n;
        let formula =
            parse(&raw_line.f).map_err(|err| DerivationLoadError::BadFormula { n, err })?;
        let by = &raw_line.by;
        let tags = [
            by.premise.is_some(),
            by.axiom.is_some(),
            by.mp.is_some(),
            by.re.is_some(),
            by.wn.is_some(),
            by.bkrule.is_some(),
        ];
        if tags.iter().filter(|&&t| t).count() != 1 {
            return Err(DerivationLoadError::BadJustification { n });
        }
        if by.assign.is_some() && by.axiom.is_none() {
            return Err(DerivationLoadError::StrayAssignment { n });
        }
        let justification = if let Some(k) = by.premise {
            Justification::Premise(k)
        } else if let Some(name) = &by.axiom {
            let assignment = match &by.assign {
                None => None,
                Some(map) => {
                    let mut asg = Assignment::new();
                    for (key, value) in map {
                        if !is_metavariable(key) {
                            return Err(DerivationLoadError::BadMetavariable {
                                n,
                                key: key.clone(),
                            });
                        }
                        let f = parse(value).map_err(|err| DerivationLoadError::BadBinding {
                            n,
                            key: key.clone(),
                            err,
                        })?;
                        asg.insert(key.chars().next().unwrap(), f);
                    }
                    Some(asg)
                }
            };
            Justification::Axiom {
                name: name.clone(),
                assignment,
            }
        } else if let Some([i, j]) = by.mp {
            Justification::Mp(i, j)
        } else if let Some(i) = by.re {
            Justification::Re(i)
        } else if let Some(i) = by.wn {
            Justification::Wn(i)
        } else {
            Justification::BkRule(by.bkrule.unwrap())
        };
        lines.push(Line {
            index: n,
            formula,
            justification,
        });
    }
    Ok(Derivation {
        logic,
        premises,
        lines,
    })
}
