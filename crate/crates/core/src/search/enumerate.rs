//! Exhaustive enumeration of models at small world counts.
//!
//! The canonical order is frozen so that "first countermodel" is a stable,
//! golden-testable output:
//!
//! 1. world count ascending (fewest worlds first);
//! 2. partial orders by ascending strict-pair bitmask (the discrete order
//!    is id 0); bit `a*(n-1) + b'` encodes `a < b`, pairs listed with `a`
//!    outermost;
//! 3. neighborhood families by ascending per-world family code (bit `s`
//!    of the code says the subset with world-mask `s` is in the family),
//!    world 0 varying slowest;
//! 4. valuations by ascending up-set mask per atom, first atom slowest.
//!
//! Per-world frame conditions filter each world's candidate codes up
//! front; order-pair conditions prune family tuples as soon as both
//! worlds are assigned.

use crate::conditions::{pair_witness, per_world_witness, CondFlag, FrameClass};
use crate::model::{Family, Model, WorldSet};
use std::collections::BTreeMap;

/// Largest world count enumerated exhaustively.
pub const EXHAUSTIVE_BOUND: usize = 3;

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * (n - 1) + if b > a { b - 1 } else { b }
}

/// Decode a strict-pair mask into reflexive up-sets; `None` when the
/// relation is not a partial order.
fn poset_from_mask(n: usize, mask: u64) -> Option<Vec<WorldSet>> {
    let mut up = vec![WorldSet::EMPTY; n];
    for a in 0..n {
        up[a].insert(a);
        for b in 0..n {
            if b != a && (mask >> pair_index(n, a, b)) & 1 == 1 {
                if (mask >> pair_index(n, b, a)) & 1 == 1 {
                    return None; // antisymmetry
                }
                up[a].insert(b);
            }
        }
    }
    for a in 0..n {
        for b in up[a].iter() {
            if !up[b].is_subset_of(up[a]) {
                return None; // transitivity
            }
        }
    }
    Some(up)
}

/// Ascending masks of the up-closed world sets of `up`.
fn up_set_masks(n: usize, up: &[WorldSet]) -> Vec<u16> {
    (0..1u16 << n)
        .filter(|&s| {
            let set = WorldSet(s);
            set.iter().all(|w| up[w].is_subset_of(set))
        })
        .collect()
}

/// Family per code: bit `s` set means subset-mask `s` belongs.
fn family_table(n: usize) -> Vec<Family> {
    let subsets = 1usize << n;
    (0..1u32 << subsets)
        .map(|code| {
            (0..subsets)
                .filter(|&s| (code >> s) & 1 == 1)
                .map(|s| WorldSet(s as u16))
                .collect()
        })
        .collect()
}

/// Streams every model at `min_n..=max_n` worlds over the given atoms
/// whose frame satisfies `class`, in canonical order. Worlds are named
/// `w0, w1, ...`.
pub(crate) struct RawEnumeration {
    class: FrameClass,
    pair_flags: Vec<CondFlag>,
    atoms: Vec<String>,
    min_n: usize,
    max_n: usize,

    n: usize,
    names: Vec<String>,
    decoded: Vec<Family>,
    allowed: Vec<Vec<u32>>,
    poset_mask: u64,
    up: Vec<WorldSet>,
    upsets: Vec<u16>,
    fam_pos: Vec<usize>,
    val_pos: Vec<usize>,

    started: bool,
    done: bool,
}

impl RawEnumeration {
    pub(crate) fn new(
        class: FrameClass,
        atoms: Vec<String>,
        min_n: usize,
        max_n: usize,
    ) -> RawEnumeration {
        RawEnumeration {
            pair_flags: class.iter().filter(|f| !f.is_per_world()).collect(),
            class,
            atoms,
            min_n,
            max_n,
            n: 0,
            names: Vec::new(),
            decoded: Vec::new(),
            allowed: Vec::new(),
            poset_mask: 0,
            up: Vec::new(),
            upsets: Vec::new(),
            fam_pos: Vec::new(),
            val_pos: Vec::new(),
            started: false,
            done: false,
        }
    }

    /// Advance to the next model. Returns false when exhausted.
    pub(crate) fn next_raw(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            let mut n = self.min_n;
            loop {
                if n > self.max_n {
                    self.done = true;
                    return false;
                }
                if self.enter_n(n) {
                    return true;
                }
                n += 1;
            }
        }
        if self.advance_valuation() {
            return true;
        }
        if self.next_family_tuple() {
            self.reset_valuations();
            return true;
        }
        if self.advance_poset() {
            return true;
        }
        let mut n = self.n + 1;
        loop {
            if n > self.max_n {
                self.done = true;
                return false;
            }
            if self.enter_n(n) {
                return true;
            }
            n += 1;
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn up(&self) -> &[WorldSet] {
        &self.up
    }

    /// Current family codes, one per world.
    pub(crate) fn codes_into(&self, out: &mut Vec<u16>) {
        out.clear();
        for w in 0..self.n {
            out.push(self.allowed[w][self.fam_pos[w]] as u16);
        }
    }

    /// Current atom extensions, in `atoms` order.
    pub(crate) fn atom_exts_into(&self, out: &mut Vec<WorldSet>) {
        out.clear();
        for &pos in &self.val_pos {
            out.push(WorldSet(self.upsets[pos]));
        }
    }

    /// Materialize the current model.
    pub(crate) fn make_model(&self) -> Model {
        let nbhd: Vec<Family> = (0..self.n)
            .map(|w| self.decoded[self.allowed[w][self.fam_pos[w]] as usize].clone())
            .collect();
        let valuation: BTreeMap<String, WorldSet> = self
            .atoms
            .iter()
            .zip(&self.val_pos)
            .map(|(a, &pos)| (a.clone(), WorldSet(self.upsets[pos])))
            .collect();
        Model::from_parts(self.names.clone(), self.up.clone(), nbhd, valuation)
    }

    fn enter_n(&mut self, n: usize) -> bool {
        self.n = n;
        self.names = (0..n).map(|w| format!("w{w}")).collect();
        self.decoded = family_table(n);
        self.allowed = (0..n)
            .map(|w| {
                (0..self.decoded.len() as u32)
                    .filter(|&code| {
                        self.class
                            .iter()
                            .filter(|f| f.is_per_world())
                            .all(|f| per_world_witness(f, n, w, &self.decoded[code as usize]).is_none())
                    })
                    .collect()
            })
            .collect();
        self.fam_pos = vec![0; n];
        self.val_pos = vec![0; self.atoms.len()];
        if self.allowed.iter().any(|a| a.is_empty()) {
            return false;
        }
        self.poset_mask = 0;
        let last = 1u64 << (n * (n - 1));
        while self.poset_mask < last {
            if self.try_poset() {
                return true;
            }
            self.poset_mask += 1;
        }
        false
    }

    fn advance_poset(&mut self) -> bool {
        let last = 1u64 << (self.n * (self.n - 1));
        loop {
            self.poset_mask += 1;
            if self.poset_mask >= last {
                return false;
            }
            if self.try_poset() {
                return true;
            }
        }
    }

    /// Set up the current poset candidate and its first family tuple.
    fn try_poset(&mut self) -> bool {
        match poset_from_mask(self.n, self.poset_mask) {
            None => false,
            Some(up) => {
                self.upsets = up_set_masks(self.n, &up);
                self.up = up;
                if !self.fill_families() {
                    return false;
                }
                self.reset_valuations();
                true
            }
        }
    }

    fn family_of(&self, d: usize) -> &[WorldSet] {
        &self.decoded[self.allowed[d][self.fam_pos[d]] as usize]
    }

    /// Do the order-pair conditions hold between world `d` and every
    /// earlier world? (Reflexive pairs hold trivially for all flags.)
    fn pair_ok(&self, d: usize) -> bool {
        for a in 0..d {
            for &flag in &self.pair_flags {
                if self.up[a].contains(d)
                    && pair_witness(flag, self.n, a, d, self.family_of(a), self.family_of(d))
                        .is_some()
                {
                    return false;
                }
                if self.up[d].contains(a)
                    && pair_witness(flag, self.n, d, a, self.family_of(d), self.family_of(a))
                        .is_some()
                {
                    return false;
                }
            }
        }
        true
    }

    /// Move `fam_pos[d]` forward to the first candidate passing the pair
    /// checks against worlds `0..d`.
    fn settle(&mut self, d: usize) -> bool {
        while self.fam_pos[d] < self.allowed[d].len() {
            if self.pair_ok(d) {
                return true;
            }
            self.fam_pos[d] += 1;
        }
        false
    }

    /// Find the least valid assignment of depths `d..n`, treating
    /// `fam_pos[d]` as the starting candidate and backtracking as needed.
    fn complete_from(&mut self, mut d: usize) -> bool {
        loop {
            if self.settle(d) {
                d += 1;
                if d == self.n {
                    return true;
                }
                self.fam_pos[d] = 0;
            } else {
                if d == 0 {
                    return false;
                }
                d -= 1;
                self.fam_pos[d] += 1;
            }
        }
    }

    fn fill_families(&mut self) -> bool {
        for p in self.fam_pos.iter_mut() {
            *p = 0;
        }
        self.complete_from(0)
    }

    fn next_family_tuple(&mut self) -> bool {
        let last = self.n - 1;
        self.fam_pos[last] += 1;
        self.complete_from(last)
    }

    fn reset_valuations(&mut self) {
        for p in self.val_pos.iter_mut() {
            *p = 0;
        }
    }

    fn advance_valuation(&mut self) -> bool {
        let mut d = self.val_pos.len();
        while d > 0 {
            d -= 1;
            self.val_pos[d] += 1;
            if self.val_pos[d] < self.upsets.len() {
                return true;
            }
            self.val_pos[d] = 0;
        }
        false
    }
}
