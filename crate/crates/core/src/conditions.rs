//! Frame-condition flags and their checkers.
//!
//! Each flag is a closure property of the neighborhood assignment, possibly
//! relative to the order. Checkers return the lexicographically least
//! counterwitness (scanning worlds in index order, sets in mask order), so
//! verdicts are deterministic and relabelling-stable.

use crate::model::{family_contains, Model, ModelError, WorldSet};
use std::collections::BTreeMap;
use std::fmt;

/// A single frame condition.
///
/// In the comments below `w <= v` ranges over ordered pairs, `X`, `Y` over
/// subsets of the world set, and `-X` is the complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CondFlag {
    /// `[w <= v, X in N_w, v not in X] => X in N_v`
    C1,
    /// `[w <= v, X in N_w] => X in N_v`
    C2,
    /// `X, Y in N_w => X & Y in N_w`
    Cap,
    /// `X in N_w, X subset Y => Y in N_w`
    Sup,
    /// `Y in N_w, Y subset X, w not in X => X in N_w`
    NegSup,
    /// `[w <= v, v in X, X in N_w] => X in N_v`
    CBox,
    /// `[w <= v, v in X, -X not in N_w] => -X not in N_v`
    CDia,
    /// `[w <= v, v in X, -X in N_w] => -X in N_v`
    CBsq,
    /// `[w <= v, v in X, X not in N_w] => X not in N_v`
    CBlt,
    /// `[w <= v, v in X, Y in N_w, Y subset -X] => Y in N_v`
    Cn,
    /// `X in N_w => -X not in N_w`
    Cons,
}

impl CondFlag {
    pub const ALL: [CondFlag; 11] = [
        CondFlag::C1,
        CondFlag::C2,
        CondFlag::Cap,
        CondFlag::Sup,
        CondFlag::NegSup,
        CondFlag::CBox,
        CondFlag::CDia,
        CondFlag::CBsq,
        CondFlag::CBlt,
        CondFlag::Cn,
        CondFlag::Cons,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CondFlag::C1 => "C1",
            CondFlag::C2 => "C2",
            CondFlag::Cap => "CAP",
            CondFlag::Sup => "SUP",
            CondFlag::NegSup => "NEGSUP",
            CondFlag::CBox => "CBOX",
            CondFlag::CDia => "CDIA",
            CondFlag::CBsq => "CBSQ",
            CondFlag::CBlt => "CBLT",
            CondFlag::Cn => "CN",
            CondFlag::Cons => "CONS",
        }
    }

    /// True when the condition constrains a single world's family; such
    /// conditions can be checked before any order pair is considered.
    pub fn is_per_world(self) -> bool {
        matches!(
            self,
            CondFlag::Cap | CondFlag::Sup | CondFlag::NegSup | CondFlag::Cons
        )
    }
}

impl fmt::Display for CondFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of [`CondFlag`]s; the frame class they carve out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrameClass(u16);

impl FrameClass {
    pub const EMPTY: FrameClass = FrameClass(0);

    pub fn of(flags: &[CondFlag]) -> FrameClass {
        let mut c = FrameClass::EMPTY;
        for &f in flags {
            c.insert(f);
        }
        c
    }

    pub fn insert(&mut self, flag: CondFlag) {
        self.0 |= 1 << flag as u16;
    }

    pub fn contains(self, flag: CondFlag) -> bool {
        self.0 & (1 << flag as u16) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = CondFlag> {
        CondFlag::ALL.into_iter().filter(move |&f| self.contains(f))
    }

    /// Parse a comma-separated flag list; empty input or `none` is the
    /// empty class.
    pub fn parse(text: &str) -> Result<FrameClass, UnknownFlag> {
        let text = text.trim();
        if text.is_empty() || text == "none" {
            return Ok(FrameClass::EMPTY);
        }
        let mut class = FrameClass::EMPTY;
        for part in text.split(',') {
            let part = part.trim();
            let flag = CondFlag::ALL
                .into_iter()
                .find(|f| f.name() == part)
                .ok_or_else(|| UnknownFlag(part.to_string()))?;
            class.insert(flag);
        }
        Ok(class)
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<&str> = self.iter().map(|flag| flag.name()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown frame condition '{0}'")]
pub struct UnknownFlag(pub String);

/// Counterwitness to a condition: the worlds and sets instantiating the
/// failed implication, in the order they appear in the condition text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondWitness {
    pub worlds: Vec<usize>,
    pub sets: Vec<WorldSet>,
}

impl CondWitness {
    pub fn render(&self, m: &Model) -> String {
        let worlds: Vec<&str> = self.worlds.iter().map(|&w| m.world_name(w)).collect();
        let sets: Vec<String> = self.sets.iter().map(|&s| m.render_set(s)).collect();
        format!("worlds ({}); sets {}", worlds.join(", "), sets.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondVerdict {
    Holds,
    Fails(CondWitness),
}

impl CondVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CondVerdict::Holds)
    }
}

/// Subsets of `mask`, in increasing numeric order, starting at the empty set.
pub(crate) fn subsets_of(mask: WorldSet) -> impl Iterator<Item = WorldSet> {
    let m = mask.0;
    let mut cur = Some(0u16);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = {
            let next = s.wrapping_sub(m) & m;
            if next == 0 {
                None
            } else {
                Some(next)
            }
        };
        Some(WorldSet(s))
    })
}

/// Check a per-world condition at world `w`. Returns the least witness.
pub(crate) fn per_world_witness(
    flag: CondFlag,
    n: usize,
    w: usize,
    fam: &[WorldSet],
) -> Option<CondWitness> {
    let full = WorldSet::full(n);
    match flag {
        CondFlag::Cap => {
            for (i, &x) in fam.iter().enumerate() {
                for &y in &fam[i..] {
                    if !family_contains(fam, x.inter(y)) {
                        return Some(CondWitness {
                            worlds: vec![w],
                            sets: vec![x, y],
                        });
                    }
                }
            }
            None
        }
        CondFlag::Sup => {
            for &x in fam {
                for extra in subsets_of(full.diff(x)) {
                    let y = x.union(extra);
                    if !family_contains(fam, y) {
                        return Some(CondWitness {
                            worlds: vec![w],
                            sets: vec![x, y],
                        });
                    }
                }
            }
            None
        }
        CondFlag::NegSup => {
            let allowed = full.diff(WorldSet::singleton(w));
            for &y in fam {
                if y.contains(w) {
                    continue; // no superset avoiding w exists
                }
                for extra in subsets_of(allowed.diff(y)) {
                    let x = y.union(extra);
                    if !family_contains(fam, x) {
                        return Some(CondWitness {
                            worlds: vec![w],
                            sets: vec![y, x],
                        });
                    }
                }
            }
            None
        }
        CondFlag::Cons => {
            for &x in fam {
                if family_contains(fam, x.complement(n)) {
                    return Some(CondWitness {
                        worlds: vec![w],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        _ => None,
    }
}

/// Check an order-pair condition for `w <= v` (callers skip `w == v`, where
/// all pair conditions hold trivially). Returns the least witness.
pub(crate) fn pair_witness(
    flag: CondFlag,
    n: usize,
    w: usize,
    v: usize,
    fam_w: &[WorldSet],
    fam_v: &[WorldSet],
) -> Option<CondWitness> {
    let full = WorldSet::full(n);
    match flag {
        CondFlag::C1 => {
            for &x in fam_w {
                if !x.contains(v) && !family_contains(fam_v, x) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::C2 => {
            for &x in fam_w {
                if !family_contains(fam_v, x) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::CBox => {
            for &x in fam_w {
                if x.contains(v) && !family_contains(fam_v, x) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::CDia => {
            for x in subsets_of(full) {
                if !x.contains(v) {
                    continue;
                }
                let z = x.complement(n);
                if !family_contains(fam_w, z) && family_contains(fam_v, z) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::CBsq => {
            for x in subsets_of(full) {
                if !x.contains(v) {
                    continue;
                }
                let z = x.complement(n);
                if family_contains(fam_w, z) && !family_contains(fam_v, z) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::CBlt => {
            for x in subsets_of(full) {
                if !x.contains(v) {
                    continue;
                }
                if !family_contains(fam_w, x) && family_contains(fam_v, x) {
                    return Some(CondWitness {
                        worlds: vec![w, v],
                        sets: vec![x],
                    });
                }
            }
            None
        }
        CondFlag::Cn => {
            for x in subsets_of(full) {
                if !x.contains(v) {
                    continue;
                }
                for &y in fam_w {
                    if y.inter(x).is_empty() && !family_contains(fam_v, y) {
                        return Some(CondWitness {
                            worlds: vec![w, v],
                            sets: vec![x, y],
                        });
                    }
                }
            }
            None
        }
        _ => None,
    }
}

fn flag_witness(m: &Model, flag: CondFlag) -> Option<CondWitness> {
    let n = m.n_worlds();
    if flag.is_per_world() {
        for w in 0..n {
            if let Some(witness) = per_world_witness(flag, n, w, m.nbhd(w)) {
                return Some(witness);
            }
        }
    } else {
        for w in 0..n {
            for v in m.up(w).iter() {
                if v == w {
                    continue;
                }
                if let Some(witness) = pair_witness(flag, n, w, v, m.nbhd(w), m.nbhd(v)) {
                    return Some(witness);
                }
            }
        }
    }
    None
}

/// Evaluate every flag in `class` on a valid model.
pub fn check_conditions(
    m: &Model,
    class: FrameClass,
) -> Result<BTreeMap<CondFlag, CondVerdict>, ModelError> {
    let violations = m.validate();
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations[0].to_string()));
    }
    let mut out = BTreeMap::new();
    for flag in class.iter() {
        let verdict = match flag_witness(m, flag) {
            None => CondVerdict::Holds,
            Some(w) => CondVerdict::Fails(w),
        };
        out.insert(flag, verdict);
    }
    Ok(out)
}

/// True when every flag in `class` holds on `m` (which must be valid).
pub fn class_holds(m: &Model, class: FrameClass) -> bool {
    class.iter().all(|flag| flag_witness(m, flag).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Family, Model};
    use std::collections::BTreeMap;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn model(names_: &[&str], up: Vec<WorldSet>, nbhd: Vec<Family>) -> Model {
        Model::from_parts(names(names_), up, nbhd, BTreeMap::new())
    }

    #[test]
    fn powerset_family_satisfies_monotone_flags() {
        let m = model(
            &["w"],
            vec![WorldSet(0b1)],
            vec![vec![WorldSet(0b0), WorldSet(0b1)]],
        );
        let class = FrameClass::of(&[
            CondFlag::C1,
            CondFlag::C2,
            CondFlag::Cap,
            CondFlag::Sup,
            CondFlag::CBox,
        ]);
        let verdicts = check_conditions(&m, class).unwrap();
        assert!(verdicts.values().all(|v| v.holds()));
        // ...but not CONS: the empty set and the full set are complements.
        let verdicts = check_conditions(&m, FrameClass::of(&[CondFlag::Cons])).unwrap();
        assert_eq!(
            verdicts[&CondFlag::Cons],
            CondVerdict::Fails(CondWitness {
                worlds: vec![0],
                sets: vec![WorldSet(0b0)],
            })
        );
    }

    #[test]
    fn cap_failure_reports_least_pair() {
        // Three discrete worlds a, b, c; N_c = {{a}, {b}}.
        let m = model(
            &["a", "b", "c"],
            vec![WorldSet(0b001), WorldSet(0b010), WorldSet(0b100)],
            vec![vec![], vec![], vec![WorldSet(0b001), WorldSet(0b010)]],
        );
        let verdicts = check_conditions(&m, FrameClass::of(&[CondFlag::Cap])).unwrap();
        match &verdicts[&CondFlag::Cap] {
            CondVerdict::Fails(w) => {
                assert_eq!(w.worlds, vec![2]);
                assert_eq!(w.sets, vec![WorldSet(0b001), WorldSet(0b010)]);
                assert_eq!(w.render(&m), "worlds (c); sets {a}, {b}");
            }
            v => panic!("expected failure, got {v:?}"),
        }
        // C1 holds trivially on a discrete order.
        assert!(class_holds(&m, FrameClass::of(&[CondFlag::C1])));
    }

    #[test]
    fn chain_with_full_set_neighborhoods_is_well_behaved() {
        let m = crate::model::tests::chain_model();
        let class = FrameClass::of(&[CondFlag::C1, CondFlag::CBox, CondFlag::CDia]);
        let verdicts = check_conditions(&m, class).unwrap();
        assert!(verdicts.values().all(|v| v.holds()), "{verdicts:?}");
    }

    #[test]
    fn c1_failure_has_pair_witness() {
        // w <= v, N_w = {{w}}, N_v = {}: X = {w} misses v and is not in N_v.
        let m = model(
            &["w", "v"],
            vec![WorldSet(0b11), WorldSet(0b10)],
            vec![vec![WorldSet(0b01)], vec![]],
        );
        let verdicts = check_conditions(&m, FrameClass::of(&[CondFlag::C1])).unwrap();
        assert_eq!(
            verdicts[&CondFlag::C1],
            CondVerdict::Fails(CondWitness {
                worlds: vec![0, 1],
                sets: vec![WorldSet(0b01)],
            })
        );
    }

    #[test]
    fn c2_implies_c1_on_two_world_models() {
        // Brute force over every 2-world poset and neighborhood assignment.
        let posets: [(WorldSet, WorldSet); 3] = [
            (WorldSet(0b01), WorldSet(0b10)),
            (WorldSet(0b11), WorldSet(0b10)),
            (WorldSet(0b01), WorldSet(0b11)),
        ];
        let all_sets = [WorldSet(0b00), WorldSet(0b01), WorldSet(0b10), WorldSet(0b11)];
        for (u0, u1) in posets {
            for fam0_bits in 0u32..16 {
                for fam1_bits in 0u32..16 {
                    let decode = |bits: u32| -> Family {
                        all_sets
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| bits & (1 << i) != 0)
                            .map(|(_, &s)| s)
                            .collect()
                    };
                    let m = model(&["a", "b"], vec![u0, u1], vec![decode(fam0_bits), decode(fam1_bits)]);
                    if class_holds(&m, FrameClass::of(&[CondFlag::C2])) {
                        assert!(
                            class_holds(&m, FrameClass::of(&[CondFlag::C1])),
                            "C2 held but C1 failed on {m:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn negsup_checks_only_supersets_avoiding_the_world() {
        // N_w = {{}} over two worlds: supersets of {} avoiding w are {} and {v}.
        let m = model(
            &["w", "v"],
            vec![WorldSet(0b01), WorldSet(0b10)],
            vec![vec![WorldSet(0b00)], vec![]],
        );
        let verdicts = check_conditions(&m, FrameClass::of(&[CondFlag::NegSup])).unwrap();
        assert_eq!(
            verdicts[&CondFlag::NegSup],
            CondVerdict::Fails(CondWitness {
                worlds: vec![0],
                sets: vec![WorldSet(0b00), WorldSet(0b10)],
            })
        );
        // Adding {v} fixes it.
        let m = model(
            &["w", "v"],
            vec![WorldSet(0b01), WorldSet(0b10)],
            vec![vec![WorldSet(0b00), WorldSet(0b10)], vec![]],
        );
        assert!(class_holds(&m, FrameClass::of(&[CondFlag::NegSup])));
    }

    #[test]
    fn cn_matches_its_reduced_form() {
        // CN is equivalent to C1: compare verdict presence on a sweep of
        // 2-world models.
        let posets: [(WorldSet, WorldSet); 3] = [
            (WorldSet(0b01), WorldSet(0b10)),
            (WorldSet(0b11), WorldSet(0b10)),
            (WorldSet(0b01), WorldSet(0b11)),
        ];
        let all_sets = [WorldSet(0b00), WorldSet(0b01), WorldSet(0b10), WorldSet(0b11)];
        for (u0, u1) in posets {
            for fam0_bits in 0u32..16 {
                for fam1_bits in 0u32..16 {
                    let decode = |bits: u32| -> Family {
                        all_sets
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| bits & (1 << i) != 0)
                            .map(|(_, &s)| s)
                            .collect()
                    };
                    let m = model(&["a", "b"], vec![u0, u1], vec![decode(fam0_bits), decode(fam1_bits)]);
                    assert_eq!(
                        class_holds(&m, FrameClass::of(&[CondFlag::Cn])),
                        class_holds(&m, FrameClass::of(&[CondFlag::C1])),
                    );
                }
            }
        }
    }

    #[test]
    fn class_parsing_round_trips() {
        let class = FrameClass::parse("C1,CAP").unwrap();
        assert!(class.contains(CondFlag::C1));
        assert!(class.contains(CondFlag::Cap));
        assert_eq!(class.to_string(), "C1,CAP");
        assert_eq!(FrameClass::parse("").unwrap(), FrameClass::EMPTY);
        assert_eq!(FrameClass::parse("none").unwrap(), FrameClass::EMPTY);
        assert_eq!(FrameClass::EMPTY.to_string(), "none");
        assert!(FrameClass::parse("C3").is_err());
        let all = FrameClass::of(&CondFlag::ALL);
        assert_eq!(FrameClass::parse(&all.to_string()).unwrap(), all);
    }

    #[test]
    fn verdicts_commute_with_relabelling() {
        let m = model(
            &["w", "v"],
            vec![WorldSet(0b11), WorldSet(0b10)],
            vec![vec![WorldSet(0b01)], vec![]],
        );
        let p = m.permute(&[1, 0]);
        for flag in CondFlag::ALL {
            assert_eq!(
                class_holds(&m, FrameClass::of(&[flag])),
                class_holds(&p, FrameClass::of(&[flag])),
                "{flag} verdict changed under relabelling"
            );
        }
    }

    #[test]
    fn rejects_invalid_models() {
        let m = model(&["w"], vec![WorldSet::EMPTY], vec![vec![]]);
        assert!(check_conditions(&m, FrameClass::EMPTY).is_err());
    }
}
