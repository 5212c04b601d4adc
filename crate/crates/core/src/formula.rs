//! Formula AST for a propositional language with one layer of modal
//! operators, plus the ASCII renderer.
//!
//! Negation is not a node: `~f` is sugar for `f -> false`, and the circle
//! operator `circ f` is sugar for `~ bullet f`. The renderer prints
//! `Imp(f, Bottom)` back as `~f`, so parsing and rendering are mutually
//! inverse on ASTs.

use std::fmt;

/// Modal operator keywords, one token each in the concrete syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalOp {
    /// `W` — holds where the argument is refuted but its extension is a neighborhood.
    W,
    /// `box`
    Box,
    /// `dia`
    Dia,
    /// `bbox` — the "black box".
    BlackBox,
    /// `bullet`
    Bullet,
    /// `N`
    Nop,
}

impl ModalOp {
    pub const ALL: [ModalOp; 6] = [
        ModalOp::W,
        ModalOp::Box,
        ModalOp::Dia,
        ModalOp::BlackBox,
        ModalOp::Bullet,
        ModalOp::Nop,
    ];

    /// Concrete-syntax keyword.
    pub fn keyword(self) -> &'static str {
        match self {
            ModalOp::W => "W",
            ModalOp::Box => "box",
            ModalOp::Dia => "dia",
            ModalOp::BlackBox => "bbox",
            ModalOp::Bullet => "bullet",
            ModalOp::Nop => "N",
        }
    }
}

impl fmt::Display for ModalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A formula. Atom names are lowercase identifiers; a single uppercase
/// letter names a metavariable and only appears inside [`crate::scheme::Scheme`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bottom,
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Modal(ModalOp, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn modal(op: ModalOp, f: Formula) -> Formula {
        Formula::Modal(op, Box::new(f))
    }

    /// `~f`, i.e. `f -> false`.
    pub fn not(f: Formula) -> Formula {
        Formula::imp(f, Formula::Bottom)
    }

    /// `circ f`, i.e. `~ bullet f`.
    pub fn circ(f: Formula) -> Formula {
        Formula::not(Formula::modal(ModalOp::Bullet, f))
    }

    /// `f <-> g` encoded as `(f -> g) & (g -> f)`.
    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::and(Formula::imp(f.clone(), g.clone()), Formula::imp(g, f))
    }

    /// True when this node renders as a negation.
    pub fn is_not(&self) -> bool {
        matches!(self, Formula::Imp(_, r) if **r == Formula::Bottom)
    }

    /// All subformulas in post-order (children first, the formula itself last).
    /// Repeated structure is reported once per occurrence position collapsed
    /// to its first appearance.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Bottom | Formula::Atom(_) => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
            Formula::Modal(_, b) => b.collect_subformulas(out),
        }
        if !out.iter().any(|g| *g == self) {
            out.push(self);
        }
    }

    /// Atom names occurring in the formula, sorted and deduplicated.
    /// Metavariables (single uppercase letters) are excluded.
    pub fn atoms(&self) -> Vec<String> {
        let mut names = Vec::new();
        self.collect_atoms(&mut names);
        names.sort();
        names.dedup();
        names
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Bottom => {}
            Formula::Atom(name) => {
                if !crate::scheme::is_metavariable(name) {
                    out.push(name.clone());
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            Formula::Modal(_, b) => b.collect_atoms(out),
        }
    }

    /// Modal operators occurring in the formula.
    pub fn operators(&self) -> Vec<ModalOp> {
        let mut ops = Vec::new();
        self.collect_operators(&mut ops);
        ops.sort();
        ops.dedup();
        ops
    }

    fn collect_operators(&self, out: &mut Vec<ModalOp>) {
        match self {
            Formula::Bottom | Formula::Atom(_) => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_operators(out);
                r.collect_operators(out);
            }
            Formula::Modal(op, b) => {
                out.push(*op);
                b.collect_operators(out);
            }
        }
    }

    /// Replace every atom by `rename(atom)`, leaving structure untouched.
    pub fn rename_atoms(&self, rename: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(name) => Formula::Atom(rename(name)),
            Formula::And(l, r) => Formula::and(l.rename_atoms(rename), r.rename_atoms(rename)),
            Formula::Or(l, r) => Formula::or(l.rename_atoms(rename), r.rename_atoms(rename)),
            Formula::Imp(l, r) => Formula::imp(l.rename_atoms(rename), r.rename_atoms(rename)),
            Formula::Modal(op, b) => Formula::modal(*op, b.rename_atoms(rename)),
        }
    }

    // Binding strength for the renderer: 4 atoms, 3 prefix operators,
    // 2 conjunction, 1 disjunction, 0 implication. `~`-shaped implications
    // count as prefix operators.
    fn prec(&self) -> u8 {
        match self {
            Formula::Bottom | Formula::Atom(_) => 4,
            Formula::Modal(..) => 3,
            Formula::Imp(..) if self.is_not() => 3,
            Formula::And(..) => 2,
            Formula::Or(..) => 1,
            Formula::Imp(..) => 0,
        }
    }

    fn render_into(&self, min_prec: u8, out: &mut String) {
        if self.prec() < min_prec {
            out.push('(');
            self.render_into(0, out);
            out.push(')');
            return;
        }
        match self {
            Formula::Bottom => out.push_str("false"),
            Formula::Atom(name) => out.push_str(name),
            Formula::And(l, r) => {
                l.render_into(2, out);
                out.push_str(" & ");
                r.render_into(3, out);
            }
            Formula::Or(l, r) => {
                l.render_into(1, out);
                out.push_str(" | ");
                r.render_into(2, out);
            }
            Formula::Imp(l, _) if self.is_not() => {
                out.push('~');
                l.render_into(3, out);
            }
            Formula::Imp(l, r) => {
                l.render_into(1, out);
                out.push_str(" -> ");
                r.render_into(0, out);
            }
            Formula::Modal(op, b) => {
                out.push_str(op.keyword());
                out.push(' ');
                b.render_into(3, out);
            }
        }
    }
}

/// The renderer: `parse(&f.to_string())` rebuilds `f` exactly.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(0, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn renders_negation_sugar() {
        assert_eq!(Formula::not(p()).to_string(), "~p");
        assert_eq!(Formula::not(Formula::and(p(), q())).to_string(), "~(p & q)");
        assert_eq!(Formula::circ(p()).to_string(), "~bullet p");
    }

    #[test]
    fn renders_precedence() {
        let f = Formula::imp(
            Formula::modal(ModalOp::W, p()),
            Formula::not(Formula::and(p(), q())),
        );
        assert_eq!(f.to_string(), "W p -> ~(p & q)");

        assert_eq!(
            Formula::imp(Formula::imp(p(), q()), p()).to_string(),
            "(p -> q) -> p"
        );
        assert_eq!(
            Formula::imp(p(), Formula::imp(q(), p())).to_string(),
            "p -> q -> p"
        );
        assert_eq!(
            Formula::or(p(), Formula::and(q(), p())).to_string(),
            "p | q & p"
        );
        assert_eq!(
            Formula::and(p(), Formula::or(q(), p())).to_string(),
            "p & (q | p)"
        );
        assert_eq!(
            Formula::modal(ModalOp::Box, Formula::and(p(), q())).to_string(),
            "box (p & q)"
        );
    }

    #[test]
    fn associativity_survives_round_trip() {
        // Left-nested conjunction flattens; right-nested needs parens.
        let left = Formula::and(Formula::and(p(), q()), p());
        assert_eq!(left.to_string(), "p & q & p");
        assert_eq!(parse(&left.to_string()).unwrap(), left);

        let right = Formula::and(p(), Formula::and(q(), p()));
        assert_eq!(right.to_string(), "p & (q & p)");
        assert_eq!(parse(&right.to_string()).unwrap(), right);
    }

    #[test]
    fn subformulas_post_order() {
        let f = parse("W p -> ~p").unwrap();
        let subs: Vec<String> = f.subformulas().iter().map(|g| g.to_string()).collect();
        assert_eq!(subs, vec!["p", "W p", "false", "~p", "W p -> ~p"]);
    }

    #[test]
    fn atoms_sorted_unique() {
        let f = parse("q & p -> W q | ~r").unwrap();
        assert_eq!(f.atoms(), vec!["p", "q", "r"]);
    }
}
