//! Random formulas and scheme assignments for sweeps and property tests.
//!
//! All generation is driven by a caller-supplied RNG, so sweeps seeded
//! from a fixed value reproduce exactly.

use crate::formula::{Formula, ModalOp};
use crate::scheme::Assignment;
use rand::Rng;

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> Formula {
    if atoms.is_empty() || rng.gen_range(0..8) == 0 {
        Formula::Bottom
    } else {
        Formula::Atom(atoms[rng.gen_range(0..atoms.len())].to_string())
    }
}

/// Random formula over `atoms` and `ops` with at most `depth` nested
/// connectives.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[&str],
    ops: &[ModalOp],
    depth: usize,
) -> Formula {
    if depth == 0 {
        return leaf(rng, atoms);
    }
    let kinds = if ops.is_empty() { 5 } else { 6 };
    match rng.gen_range(0..kinds) {
        0 => leaf(rng, atoms),
        1 => Formula::and(
            random_formula(rng, atoms, ops, depth - 1),
            random_formula(rng, atoms, ops, depth - 1),
        ),
        2 => Formula::or(
            random_formula(rng, atoms, ops, depth - 1),
            random_formula(rng, atoms, ops, depth - 1),
        ),
        3 => Formula::imp(
            random_formula(rng, atoms, ops, depth - 1),
            random_formula(rng, atoms, ops, depth - 1),
        ),
        4 => Formula::not(random_formula(rng, atoms, ops, depth - 1)),
        _ => Formula::modal(
            ops[rng.gen_range(0..ops.len())],
            random_formula(rng, atoms, ops, depth - 1),
        ),
    }
}

/// Bind each metavariable to an independent random formula.
pub fn random_assignment<R: Rng + ?Sized>(
    rng: &mut R,
    metavariables: &[char],
    atoms: &[&str],
    ops: &[ModalOp],
    depth: usize,
) -> Assignment {
    metavariables
        .iter()
        .map(|&v| (v, random_formula(rng, atoms, ops, depth)))
        .collect()
}

/// Fixed pool of instantiation bodies over the given atoms and operators:
/// the atoms, `false`, and one formula per connective. Exhaustive sweeps
/// instantiate schemes with every tuple drawn from this pool.
pub fn instance_pool(atoms: &[&str], ops: &[ModalOp]) -> Vec<Formula> {
    let mut pool: Vec<Formula> = atoms
        .iter()
        .map(|a| Formula::Atom(a.to_string()))
        .collect();
    pool.push(Formula::Bottom);
    if let Some(first) = atoms.first() {
        let p = || Formula::Atom(first.to_string());
        pool.push(Formula::not(p()));
        if let Some(second) = atoms.get(1) {
            let q = || Formula::Atom(second.to_string());
            pool.push(Formula::and(p(), q()));
            pool.push(Formula::or(p(), q()));
            pool.push(Formula::imp(p(), q()));
        }
        for &op in ops {
            pool.push(Formula::modal(op, p()));
        }
    }
    pool
}

/// Every assignment of pool members to the given metavariables, in
/// odometer order (first metavariable slowest).
pub fn pool_assignments(metavariables: &[char], pool: &[Formula]) -> Vec<Assignment> {
    let mut out = Vec::new();
    let k = metavariables.len();
    if k == 0 {
        out.push(Assignment::new());
        return out;
    }
    let mut idx = vec![0usize; k];
    loop {
        out.push(
            metavariables
                .iter()
                .zip(&idx)
                .map(|(&v, &i)| (v, pool[i].clone()))
                .collect(),
        );
        let mut d = k;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < pool.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}
