//! Axiom schemes: formulas whose leaves may be metavariables.
//!
//! A metavariable is a single uppercase letter written where an atom could
//! stand; it binds a whole formula. `W` and `N` are operator keywords and
//! cannot serve as metavariables.

use crate::formula::Formula;
use crate::parse::{parse_allowing_metavariables, ParseError};
use std::collections::BTreeMap;
use std::fmt;

/// True for atom names that denote metavariables (one ASCII uppercase letter).
pub fn is_metavariable(name: &str) -> bool {
    let mut chars = name.chars();
    matches!((chars.next(), chars.next()), (Some('A'..='Z'), None))
}

/// An assignment of formulas to metavariables.
pub type Assignment = BTreeMap<char, Formula>;

/// Instantiation failure: the scheme uses a metavariable the assignment lacks.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no binding for metavariable '{0}'")]
pub struct MissingBinding(pub char);

/// A formula template over metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    template: Formula,
    metavariables: Vec<char>,
}

impl Scheme {
    /// Parse a scheme; metavariables are permitted in atom position.
    pub fn parse(text: &str) -> Result<Scheme, ParseError> {
        Ok(Scheme::from_template(parse_allowing_metavariables(text)?))
    }

    /// Wrap an already-built template. Uppercase single-letter atoms become
    /// the scheme's metavariables.
    pub fn from_template(template: Formula) -> Scheme {
        let mut metavariables = Vec::new();
        collect_metavariables(&template, &mut metavariables);
        metavariables.sort();
        metavariables.dedup();
        Scheme {
            template,
            metavariables,
        }
    }

    pub fn template(&self) -> &Formula {
        &self.template
    }

    /// Distinct metavariables, sorted.
    pub fn metavariables(&self) -> &[char] {
        &self.metavariables
    }

    pub fn arity(&self) -> usize {
        self.metavariables.len()
    }

    /// Replace each metavariable with its assigned formula.
    pub fn instantiate(&self, assignment: &Assignment) -> Result<Formula, MissingBinding> {
        substitute(&self.template, assignment)
    }

    /// Match `f` against the scheme: find the unique assignment with
    /// `instantiate(assignment) == f`, if any. Repeated metavariables must
    /// bind equal subformulas.
    pub fn match_against(&self, f: &Formula) -> Option<Assignment> {
        let mut assignment = Assignment::new();
        if unify(&self.template, f, &mut assignment) {
            Some(assignment)
        } else {
            None
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.template.fmt(f)
    }
}

fn collect_metavariables(f: &Formula, out: &mut Vec<char>) {
    match f {
        Formula::Bottom => {}
        Formula::Atom(name) => {
            if is_metavariable(name) {
                out.push(name.chars().next().unwrap());
            }
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            collect_metavariables(l, out);
            collect_metavariables(r, out);
        }
        Formula::Modal(_, b) => collect_metavariables(b, out),
    }
}

fn substitute(template: &Formula, assignment: &Assignment) -> Result<Formula, MissingBinding> {
    Ok(match template {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(name) => {
            if is_metavariable(name) {
                let v = name.chars().next().unwrap();
                assignment.get(&v).cloned().ok_or(MissingBinding(v))?
            } else {
                Formula::Atom(name.clone())
            }
        }
        Formula::And(l, r) => {
            Formula::and(substitute(l, assignment)?, substitute(r, assignment)?)
        }
        Formula::Or(l, r) => Formula::or(substitute(l, assignment)?, substitute(r, assignment)?),
        Formula::Imp(l, r) => {
            Formula::imp(substitute(l, assignment)?, substitute(r, assignment)?)
        }
        Formula::Modal(op, b) => Formula::modal(*op, substitute(b, assignment)?),
    })
}

fn unify(template: &Formula, f: &Formula, assignment: &mut Assignment) -> bool {
    match (template, f) {
        (Formula::Atom(name), _) if is_metavariable(name) => {
            let v = name.chars().next().unwrap();
            match assignment.get(&v) {
                Some(bound) => bound == f,
                None => {
                    assignment.insert(v, f.clone());
                    true
                }
            }
        }
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom(a), Formula::Atom(b)) => a == b,
        (Formula::And(l1, r1), Formula::And(l2, r2))
        | (Formula::Or(l1, r1), Formula::Or(l2, r2))
        | (Formula::Imp(l1, r1), Formula::Imp(l2, r2)) => {
            unify(l1, l2, assignment) && unify(r1, r2, assignment)
        }
        (Formula::Modal(op1, b1), Formula::Modal(op2, b2)) => {
            op1 == op2 && unify(b1, b2, assignment)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn assignment(pairs: &[(char, &str)]) -> Assignment {
        pairs
            .iter()
            .map(|(v, text)| (*v, parse(text).unwrap()))
            .collect()
    }

    #[test]
    fn instantiates_ntax() {
        let s = Scheme::parse("W A -> ~A").unwrap();
        assert_eq!(s.arity(), 1);
        let f = s.instantiate(&assignment(&[('A', "p & q")])).unwrap();
        assert_eq!(f.to_string(), "W (p & q) -> ~(p & q)");
    }

    #[test]
    fn missing_binding_is_an_error() {
        let s = Scheme::parse("A -> (B -> A)").unwrap();
        assert_eq!(
            s.instantiate(&assignment(&[('A', "p")])),
            Err(MissingBinding('B'))
        );
    }

    #[test]
    fn matches_back_what_it_instantiates() {
        let s = Scheme::parse("(W A & W B) -> W (A & B)").unwrap();
        let sigma = assignment(&[('A', "p"), ('B', "~q")]);
        let f = s.instantiate(&sigma).unwrap();
        assert_eq!(s.match_against(&f), Some(sigma));
    }

    #[test]
    fn repeated_metavariables_must_agree() {
        let s = Scheme::parse("A -> A").unwrap();
        assert!(s.match_against(&parse("p -> p").unwrap()).is_some());
        assert!(s.match_against(&parse("p -> q").unwrap()).is_none());
    }

    #[test]
    fn metavariables_bind_whole_formulas() {
        let s = Scheme::parse("W A -> ~A").unwrap();
        let sigma = s
            .match_against(&parse("W (p | q) -> ~(p | q)").unwrap())
            .unwrap();
        assert_eq!(sigma[&'A'], parse("p | q").unwrap());
        // Shape mismatch: consequent is not the negation of the boxed part.
        assert!(s.match_against(&parse("W p -> ~q").unwrap()).is_none());
    }

    #[test]
    fn zero_arity_scheme_matches_by_equality() {
        let s = Scheme::parse("~ bullet (false -> false)").unwrap();
        assert_eq!(s.arity(), 0);
        assert_eq!(
            s.match_against(&parse("~ bullet (false -> false)").unwrap()),
            Some(Assignment::new())
        );
        assert!(s.match_against(&parse("~ bullet p").unwrap()).is_none());
    }

    #[test]
    fn circ_in_schemes_desugars() {
        let s = Scheme::parse("(circ A & circ B) -> circ (A & B)").unwrap();
        let f = s.instantiate(&assignment(&[('A', "p"), ('B', "q")])).unwrap();
        assert_eq!(f.to_string(), "~bullet p & ~bullet q -> ~bullet (p & q)");
    }
}
