//! Finite models: a partially ordered set of named worlds, a neighborhood
//! family at each world, and a persistent valuation.
//!
//! Worlds are indices into a name table; sets of worlds are bit masks
//! ([`WorldSet`]), so the model size is capped at [`MAX_WORLDS`]. Families
//! are kept sorted by mask value and deduplicated.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap imposed by the 16-bit set representation.
pub const MAX_WORLDS: usize = 16;

/// A set of worlds as a bit mask; bit `i` is world `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(pub u16);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= MAX_WORLDS);
        if n == 16 {
            WorldSet(u16::MAX)
        } else {
            WorldSet((1u16 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1 << w)
    }

    pub fn contains(self, w: usize) -> bool {
        self.0 & (1 << w) != 0
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1 << w;
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn inter(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn diff(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    /// Complement relative to the full set of `n` worlds.
    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet::full(n).diff(self)
    }

    pub fn is_subset_of(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member worlds in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }
}

/// A neighborhood family: a set of world-sets, sorted and deduplicated.
pub type Family = Vec<WorldSet>;

/// Membership test against a sorted family.
pub fn family_contains(family: &[WorldSet], set: WorldSet) -> bool {
    family.binary_search(&set).is_ok()
}

/// Insert preserving sortedness; no-op if already present.
pub fn family_insert(family: &mut Family, set: WorldSet) {
    if let Err(i) = family.binary_search(&set) {
        family.insert(i, set);
    }
}

/// A structural defect reported by [`Model::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive { world: String },
    NotAntisymmetric { lower: String, upper: String },
    NotTransitive { w: String, v: String, u: String },
    NeighborhoodOutOfRange { world: String },
    ValuationOutOfRange { atom: String },
    ValuationNotUpSet { atom: String, lower: String, upper: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { world } => write!(f, "order not reflexive at {world}"),
            Violation::NotAntisymmetric { lower, upper } => {
                write!(f, "order not antisymmetric: {lower} <= {upper} <= {lower}")
            }
            Violation::NotTransitive { w, v, u } => {
                write!(f, "order not transitive: {w} <= {v} <= {u} but not {w} <= {u}")
            }
            Violation::NeighborhoodOutOfRange { world } => {
                write!(f, "neighborhood of {world} mentions an unknown world")
            }
            Violation::ValuationOutOfRange { atom } => {
                write!(f, "valuation of {atom} mentions an unknown world")
            }
            Violation::ValuationNotUpSet { atom, lower, upper } => {
                write!(f, "valuation not an up-set: atom {atom}, witness ({lower}, {upper})")
            }
        }
    }
}

/// Model construction / deserialization failure.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world name '{0}'")]
    DuplicateWorld(String),
    #[error("unknown world '{world}' in {field}")]
    UnknownWorld { field: String, world: String },
    #[error("order saturation failed: cycle between '{lower}' and '{upper}'")]
    OrderCycle { lower: String, upper: String },
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// A finite pre-ordered neighborhood model.
///
/// `up[w]` is the up-set mask `{v : w <= v}` of the reflexive-transitive
/// order and always includes `w` itself when the model is valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    names: Vec<String>,
    up: Vec<WorldSet>,
    nbhd: Vec<Family>,
    valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    /// Assemble a model from raw parts without checking invariants; run
    /// [`Model::validate`] to test them.
    pub fn from_parts(
        names: Vec<String>,
        up: Vec<WorldSet>,
        nbhd: Vec<Family>,
        valuation: BTreeMap<String, WorldSet>,
    ) -> Model {
        assert_eq!(names.len(), up.len());
        assert_eq!(names.len(), nbhd.len());
        let mut nbhd = nbhd;
        for family in &mut nbhd {
            family.sort();
            family.dedup();
        }
        Model {
            names,
            up,
            nbhd,
            valuation,
        }
    }

    pub fn n_worlds(&self) -> usize {
        self.names.len()
    }

    pub fn full_set(&self) -> WorldSet {
        WorldSet::full(self.n_worlds())
    }

    pub fn world_names(&self) -> &[String] {
        &self.names
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `{v : w <= v}`, including `w`.
    pub fn up(&self, w: usize) -> WorldSet {
        self.up[w]
    }

    pub fn order_masks(&self) -> &[WorldSet] {
        &self.up
    }

    /// `{v : v <= w}`, including `w`.
    pub fn down(&self, w: usize) -> WorldSet {
        let mut d = WorldSet::EMPTY;
        for v in 0..self.n_worlds() {
            if self.up[v].contains(w) {
                d.insert(v);
            }
        }
        d
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w].contains(v)
    }

    pub fn nbhd(&self, w: usize) -> &[WorldSet] {
        &self.nbhd[w]
    }

    pub fn neighborhoods(&self) -> &[Family] {
        &self.nbhd
    }

    /// Extension of an atom; unassigned atoms are empty.
    pub fn valuation_of(&self, atom: &str) -> WorldSet {
        self.valuation.get(atom).copied().unwrap_or(WorldSet::EMPTY)
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// Smallest up-closed superset of `s`.
    pub fn up_closure(&self, s: WorldSet) -> WorldSet {
        let mut c = WorldSet::EMPTY;
        for w in s.iter() {
            c = c.union(self.up[w]);
        }
        c
    }

    pub fn is_up_set(&self, s: WorldSet) -> bool {
        self.up_closure(s) == s
    }

    /// Check the structural invariants: the order is a partial order, all
    /// masks stay within range, and every atom's extension is an up-set.
    /// The returned list is empty exactly when the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n_worlds();
        let full = self.full_set();
        for w in 0..n {
            if !self.up[w].contains(w) {
                out.push(Violation::NotReflexive {
                    world: self.names[w].clone(),
                });
            }
            if !self.up[w].is_subset_of(full) {
                out.push(Violation::NeighborhoodOutOfRange {
                    world: self.names[w].clone(),
                });
            }
        }
        for w in 0..n {
            for v in self.up[w].iter() {
                if v != w && self.up[v].contains(w) && w < v {
                    out.push(Violation::NotAntisymmetric {
                        lower: self.names[w].clone(),
                        upper: self.names[v].clone(),
                    });
                }
                if !self.up[v].is_subset_of(self.up[w]) {
                    let u = self.up[v].diff(self.up[w]).iter().next().unwrap();
                    out.push(Violation::NotTransitive {
                        w: self.names[w].clone(),
                        v: self.names[v].clone(),
                        u: self.names[u].clone(),
                    });
                }
            }
        }
        for (w, family) in self.nbhd.iter().enumerate() {
            if family.iter().any(|x| !x.is_subset_of(full)) {
                out.push(Violation::NeighborhoodOutOfRange {
                    world: self.names[w].clone(),
                });
            }
        }
        for (atom, &ext) in &self.valuation {
            if !ext.is_subset_of(full) {
                out.push(Violation::ValuationOutOfRange { atom: atom.clone() });
                continue;
            }
            'atom: for w in ext.iter() {
                for v in self.up[w].iter() {
                    if !ext.contains(v) {
                        out.push(Violation::ValuationNotUpSet {
                            atom: atom.clone(),
                            lower: self.names[w].clone(),
                            upper: self.names[v].clone(),
                        });
                        break 'atom;
                    }
                }
            }
        }
        out
    }

    /// Apply a world permutation: world `w` of the result is world
    /// `perm[w]` of `self`. Used for relabelling tests.
    pub fn permute(&self, perm: &[usize]) -> Model {
        let n = self.n_worlds();
        assert_eq!(perm.len(), n);
        // old index -> new index
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let remap = |s: WorldSet| {
            let mut t = WorldSet::EMPTY;
            for w in s.iter() {
                t.insert(inv[w]);
            }
            t
        };
        let names = perm.iter().map(|&old| self.names[old].clone()).collect();
        let up = perm.iter().map(|&old| remap(self.up[old])).collect();
        let nbhd = perm
            .iter()
            .map(|&old| {
                let mut family: Family = self.nbhd[old].iter().map(|&x| remap(x)).collect();
                family.sort();
                family
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(a, &s)| (a.clone(), remap(s)))
            .collect();
        Model::from_parts(names, up, nbhd, valuation)
    }

    /// Render a world set with the model's names, e.g. `{w, v}`.
    pub fn render_set(&self, s: WorldSet) -> String {
        let names: Vec<&str> = s.iter().map(|w| self.names[w].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Multi-line text description: worlds, non-reflexive order pairs,
    /// families, valuation.
    pub fn describe(&self) -> String {
        let n = self.n_worlds();
        let mut out = format!("worlds: {}\n", self.names.join(", "));
        let mut pairs = Vec::new();
        for w in 0..n {
            for v in self.up[w].iter() {
                if v != w {
                    pairs.push(format!("{} <= {}", self.names[w], self.names[v]));
                }
            }
        }
        if pairs.is_empty() {
            out.push_str("order: discrete\n");
        } else {
            out.push_str(&format!("order: {}\n", pairs.join(", ")));
        }
        for w in 0..n {
            let sets: Vec<String> = self.nbhd[w].iter().map(|&s| self.render_set(s)).collect();
            out.push_str(&format!("nbhd[{}]: {{{}}}\n", self.names[w], sets.join(", ")));
        }
        for (atom, &s) in &self.valuation {
            out.push_str(&format!("V({atom}) = {}\n", self.render_set(s)));
        }
        out
    }

    pub fn to_raw(&self) -> RawModel {
        let n = self.n_worlds();
        let set_names = |s: WorldSet| -> Vec<String> {
            s.iter().map(|w| self.names[w].clone()).collect()
        };
        let mut order = Vec::new();
        for w in 0..n {
            for v in self.up[w].iter() {
                if v != w {
                    order.push((self.names[w].clone(), self.names[v].clone()));
                }
            }
        }
        RawModel {
            worlds: self.names.clone(),
            order,
            nbhd: self
                .names
                .iter()
                .enumerate()
                .map(|(w, name)| {
                    (
                        name.clone(),
                        self.nbhd[w].iter().map(|&x| set_names(x)).collect(),
                    )
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(a, &s)| (a.clone(), set_names(s)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let raw: RawModel =
            serde_json::from_str(text).map_err(|e| ModelError::Invalid(e.to_string()))?;
        raw.into_model()
    }
}

/// Reflexive-transitive closure of the given order pairs over `n` worlds.
/// Fails when the closure would identify two distinct worlds (a cycle).
/// On success `result[w]` is the up-set mask of `w`, reflexive included.
pub fn saturate_order(
    n: usize,
    pairs: &[(usize, usize)],
) -> Result<Vec<WorldSet>, (usize, usize)> {
    let mut up = vec![WorldSet::EMPTY; n];
    for (w, item) in up.iter_mut().enumerate() {
        item.insert(w);
    }
    for &(w, v) in pairs {
        up[w].insert(v);
    }
    // Warshall over masks: grow up[w] until stable.
    let mut changed = true;
    while changed {
        changed = false;
        for w in 0..n {
            let mut grown = up[w];
            for v in up[w].iter() {
                grown = grown.union(up[v]);
            }
            if grown != up[w] {
                up[w] = grown;
                changed = true;
            }
        }
    }
    for w in 0..n {
        for v in up[w].iter() {
            if v != w && up[v].contains(w) {
                return Err((w.min(v), w.max(v)));
            }
        }
    }
    Ok(up)
}

/// On-disk model shape. Order pairs omit reflexive edges (they are implied)
/// and the stored relation is saturated on load; worlds missing from `nbhd`
/// get an empty family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModel {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub nbhd: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl RawModel {
    pub fn into_model(self) -> Result<Model, ModelError> {
        let n = self.worlds.len();
        if n == 0 {
            return Err(ModelError::Invalid("model needs at least one world".into()));
        }
        if n > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(n));
        }
        let mut index = BTreeMap::new();
        for (i, name) in self.worlds.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        let resolve = |field: &str, name: &str| -> Result<usize, ModelError> {
            index.get(name).copied().ok_or_else(|| ModelError::UnknownWorld {
                field: field.to_string(),
                world: name.to_string(),
            })
        };

        let mut pairs = Vec::new();
        for (a, b) in &self.order {
            pairs.push((resolve("order", a)?, resolve("order", b)?));
        }
        let up = saturate_order(n, &pairs).map_err(|(w, v)| ModelError::OrderCycle {
            lower: self.worlds[w].clone(),
            upper: self.worlds[v].clone(),
        })?;

        let mut nbhd = vec![Family::new(); n];
        for (world, sets) in &self.nbhd {
            let w = resolve("nbhd", world)?;
            for set in sets {
                let mut mask = WorldSet::EMPTY;
                for name in set {
                    mask.insert(resolve("nbhd", name)?);
                }
                family_insert(&mut nbhd[w], mask);
            }
        }

        let mut valuation = BTreeMap::new();
        for (atom, worlds) in &self.valuation {
            let mut mask = WorldSet::EMPTY;
            for name in worlds {
                mask.insert(resolve("valuation", name)?);
            }
            valuation.insert(atom.clone(), mask);
        }

        Ok(Model::from_parts(self.worlds, up, nbhd, valuation))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    /// Two-world chain w <= v with both neighborhoods {{w,v}} and V(p) = {v}.
    pub(crate) fn chain_model() -> Model {
        Model::from_parts(
            names(&["w", "v"]),
            vec![WorldSet(0b11), WorldSet(0b10)],
            vec![vec![WorldSet(0b11)], vec![WorldSet(0b11)]],
            BTreeMap::from([("p".to_string(), WorldSet(0b10))]),
        )
    }

    #[test]
    fn empty_single_world_model_is_valid() {
        let m = Model::from_parts(
            names(&["w"]),
            vec![WorldSet(0b1)],
            vec![vec![]],
            BTreeMap::new(),
        );
        assert_eq!(m.validate(), vec![]);
    }

    #[test]
    fn chain_model_is_valid() {
        assert_eq!(chain_model().validate(), vec![]);
    }

    #[test]
    fn non_up_set_valuation_is_reported() {
        let m = Model::from_parts(
            names(&["w", "v"]),
            vec![WorldSet(0b11), WorldSet(0b10)],
            vec![vec![], vec![]],
            BTreeMap::from([("p".to_string(), WorldSet(0b01))]),
        );
        assert_eq!(
            m.validate(),
            vec![Violation::ValuationNotUpSet {
                atom: "p".into(),
                lower: "w".into(),
                upper: "v".into(),
            }]
        );
    }

    #[test]
    fn missing_reflexive_bit_is_reported() {
        let m = Model::from_parts(
            names(&["w"]),
            vec![WorldSet::EMPTY],
            vec![vec![]],
            BTreeMap::new(),
        );
        assert!(m
            .validate()
            .contains(&Violation::NotReflexive { world: "w".into() }));
    }

    #[test]
    fn saturation_closes_transitively() {
        // w <= v, v <= u.
        let up = saturate_order(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(up, vec![WorldSet(0b111), WorldSet(0b110), WorldSet(0b100)]);
    }

    #[test]
    fn saturation_detects_cycles() {
        assert_eq!(saturate_order(2, &[(0, 1), (1, 0)]), Err((0, 1)));
    }

    #[test]
    fn json_round_trip() {
        let m = chain_model();
        let m2 = Model::from_json(&m.to_json()).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn json_load_resolves_names_and_saturates() {
        let text = r#"{
            "worlds": ["w", "v", "u"],
            "order": [["w", "v"], ["v", "u"]],
            "nbhd": { "w": [["w", "v"], []] },
            "valuation": { "p": ["u"] }
        }"#;
        let m = Model::from_json(text).unwrap();
        assert_eq!(m.validate(), vec![]);
        assert!(m.leq(0, 2), "order must be saturated");
        assert_eq!(m.nbhd(0), &[WorldSet::EMPTY, WorldSet(0b011)]);
        assert_eq!(m.nbhd(1), &[] as &[WorldSet]);
        assert_eq!(m.valuation_of("p"), WorldSet(0b100));
        assert_eq!(m.valuation_of("unassigned"), WorldSet::EMPTY);
    }

    #[test]
    fn json_load_rejects_unknown_worlds() {
        let text = r#"{ "worlds": ["w"], "order": [["w", "x"]] }"#;
        match Model::from_json(text) {
            Err(ModelError::UnknownWorld { field, world }) => {
                assert_eq!(field, "order");
                assert_eq!(world, "x");
            }
            other => panic!("expected UnknownWorld, got {other:?}"),
        }
        let text = r#"{ "worlds": ["w"], "valuation": { "p": ["y"] } }"#;
        assert!(matches!(
            Model::from_json(text),
            Err(ModelError::UnknownWorld { .. })
        ));
    }

    #[test]
    fn json_load_rejects_cycles() {
        let text = r#"{ "worlds": ["w", "v"], "order": [["w", "v"], ["v", "w"]] }"#;
        assert!(matches!(
            Model::from_json(text),
            Err(ModelError::OrderCycle { .. })
        ));
    }

    #[test]
    fn permutation_relabels_consistently() {
        let m = chain_model().permute(&[1, 0]);
        assert_eq!(m.world_names(), &["v".to_string(), "w".to_string()]);
        assert_eq!(m.validate(), vec![]);
        // "w" is now index 1 and still sits below "v" at index 0.
        assert!(m.leq(1, 0));
        assert_eq!(m.valuation_of("p"), WorldSet(0b01));
    }

    #[test]
    fn up_closure_and_up_sets() {
        let m = chain_model();
        assert_eq!(m.up_closure(WorldSet(0b01)), WorldSet(0b11));
        assert!(m.is_up_set(WorldSet(0b10)));
        assert!(!m.is_up_set(WorldSet(0b01)));
        assert!(m.is_up_set(WorldSet::EMPTY));
    }
}
