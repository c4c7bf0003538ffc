//! Finite topological groupoids, relation groupoids `R(ψ)`, orbit spaces and
//! the predicates that separate principal, étale and Fell-type groupoids.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finspace::{classify_map, quotient_space, FinSpace, PointSet, SpaceError, SpaceMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{0}` is used as a unit but is not one")]
    NotAUnit(String),
    #[error("unit `{0}` must be its own range, source and inverse")]
    BadUnit(String),
    #[error("composite {a}·{b} is missing although s({a}) = r({b})")]
    MissingComposite { a: String, b: String },
    #[error("composite {a}·{b} is given but s({a}) != r({b})")]
    NotComposable { a: String, b: String },
    #[error("composite {a}·{b} is given twice")]
    DuplicateComposite { a: String, b: String },
    #[error("composite {a}·{b} has the wrong range or source")]
    CompositeEnds { a: String, b: String },
    #[error("unit law fails for `{0}`")]
    UnitLaw(String),
    #[error("inverse law fails for `{0}`")]
    InverseLaw(String),
    #[error("associativity fails on ({a}·{b})·{c}")]
    Associativity { a: String, b: String, c: String },
    #[error("{0} is not continuous")]
    Discontinuous(&'static str),
    #[error("groupoid is not principal: `{a}` and `{b}` have the same range and source")]
    NonPrincipal { a: String, b: String },
    #[error("map is not surjective: `{0}` has empty fibre")]
    NotSurjective(String),
}

/// A finite topological groupoid. Morphisms are the points of a [`FinSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FinGroupoidJson", into = "FinGroupoidJson")]
pub struct FinGroupoid {
    space: FinSpace,
    units: Vec<usize>,
    unit_pos: Vec<Option<usize>>,
    range: Vec<usize>,
    source: Vec<usize>,
    inverse: Vec<usize>,
    /// `compose[a]` lists `(b, ab)` sorted by `b`.
    compose: Vec<Vec<(usize, usize)>>,
    pair_offset: Vec<usize>,
}

impl FinGroupoid {
    /// Builds and validates a groupoid. `range`, `source` and `inverse` map
    /// morphism positions to morphism positions; `compose` lists `(a, b, ab)`.
    pub fn new(
        space: FinSpace,
        units: Vec<usize>,
        range: Vec<usize>,
        source: Vec<usize>,
        inverse: Vec<usize>,
        compose: Vec<(usize, usize, usize)>,
    ) -> Result<Self, GroupoidError> {
        let n = space.len();
        let unknown = |i: usize| GroupoidError::UnknownMorphism(format!("#{i}"));
        if range.len() != n || source.len() != n || inverse.len() != n {
            return Err(unknown(range.len().min(source.len()).min(inverse.len())));
        }
        for &i in units.iter().chain(&range).chain(&source).chain(&inverse) {
            if i >= n {
                return Err(unknown(i));
            }
        }
        let mut unit_pos = vec![None; n];
        let mut units = units;
        units.sort_unstable();
        units.dedup();
        for (k, &u) in units.iter().enumerate() {
            unit_pos[u] = Some(k);
        }
        let name = |i: usize| space.name(i).to_string();
        for &u in &units {
            if range[u] != u || source[u] != u || inverse[u] != u {
                return Err(GroupoidError::BadUnit(name(u)));
            }
        }
        for a in 0..n {
            for e in [range[a], source[a]] {
                if unit_pos[e].is_none() {
                    return Err(GroupoidError::NotAUnit(name(e)));
                }
            }
        }
        let mut table: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &(a, b, ab) in &compose {
            if a >= n || b >= n || ab >= n {
                return Err(unknown(a.max(b).max(ab)));
            }
            if source[a] != range[b] {
                return Err(GroupoidError::NotComposable { a: name(a), b: name(b) });
            }
            if range[ab] != range[a] || source[ab] != source[b] {
                return Err(GroupoidError::CompositeEnds { a: name(a), b: name(b) });
            }
            table[a].push((b, ab));
        }
        for (a, row) in table.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(GroupoidError::DuplicateComposite { a: name(a), b: name(w[0].0) });
            }
        }
        let mut pair_offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for row in &table {
            pair_offset.push(total);
            total += row.len();
        }
        pair_offset.push(total);
        let g = Self { space, units, unit_pos, range, source, inverse, compose: table, pair_offset };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GroupoidError> {
        let n = self.len();
        let name = |i: usize| self.name(i).to_string();
        for a in 0..n {
            for b in 0..n {
                if self.source[a] == self.range[b] && self.compose(a, b).is_none() {
                    return Err(GroupoidError::MissingComposite { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..n {
            if self.compose(self.range[a], a) != Some(a) || self.compose(a, self.source[a]) != Some(a) {
                return Err(GroupoidError::UnitLaw(name(a)));
            }
            let inv = self.inverse[a];
            if self.inverse[inv] != a
                || self.compose(a, inv) != Some(self.range[a])
                || self.compose(inv, a) != Some(self.source[a])
            {
                return Err(GroupoidError::InverseLaw(name(a)));
            }
        }
        if let Some((a, b, c)) = self.associativity_failure() {
            return Err(GroupoidError::Associativity { a: name(a), b: name(b), c: name(c) });
        }
        self.check_continuity()
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        for (a, b, ab) in self.composable_pairs() {
            for &(c, bc) in &self.compose[b] {
                let left = self.compose(ab, c);
                let right = self.compose(a, bc);
                if left.is_none() || left != right {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    fn check_continuity(&self) -> Result<(), GroupoidError> {
        let s = &self.space;
        let maps: [(&'static str, &[usize]); 3] =
            [("range map", &self.range), ("source map", &self.source), ("inversion", &self.inverse)];
        for (what, f) in maps {
            for a in 0..self.len() {
                if !s.min_open(a).ones().all(|b| s.min_open(f[a]).contains(f[b])) {
                    return Err(GroupoidError::Discontinuous(what));
                }
            }
        }
        // G^(2) carries the subspace topology of G×G, whose minimal open at
        // (a,b) is the set of composable pairs in U_a × U_b.
        for (a, b, ab) in self.composable_pairs() {
            for a2 in s.min_open(a).ones() {
                for b2 in s.min_open(b).ones() {
                    if let Some(c) = self.compose(a2, b2) {
                        if !s.min_open(ab).contains(c) {
                            return Err(GroupoidError::Discontinuous("composition"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The groupoid whose morphisms are the points of `space`, all of them units.
    pub fn unit_groupoid(space: FinSpace) -> Self {
        let n = space.len();
        let all: Vec<usize> = (0..n).collect();
        let compose = (0..n).map(|u| (u, u, u)).collect();
        Self::new(space, all.clone(), all.clone(), all.clone(), all, compose).expect("unit groupoid is valid")
    }

    /// The same groupoid with the morphism topology replaced.
    pub fn with_topology(&self, space: FinSpace) -> Result<Self, GroupoidError> {
        if space.names() != self.space.names() {
            let bad = space
                .names()
                .iter()
                .find(|n| self.space.index_of(n).is_none())
                .cloned()
                .unwrap_or_default();
            return Err(GroupoidError::UnknownMorphism(bad));
        }
        Self::new(
            space,
            self.units.clone(),
            self.range.clone(),
            self.source.clone(),
            self.inverse.clone(),
            self.composable_pairs().collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn name(&self, a: usize) -> &str {
        self.space.name(a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.space.index_of(name)
    }

    pub fn range(&self, a: usize) -> usize {
        self.range[a]
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Unit morphisms, in increasing position.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit_pos[a].is_some()
    }

    /// Position of a unit morphism within [`Self::units`].
    pub fn unit_position(&self, a: usize) -> Option<usize> {
        self.unit_pos[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let row = &self.compose[a];
        row.binary_search_by_key(&b, |&(x, _)| x).ok().map(|i| row[i].1)
    }

    /// Index of a composable pair; cocycle values are stored in this order.
    pub fn pair_index(&self, a: usize, b: usize) -> Option<usize> {
        let row = &self.compose[a];
        row.binary_search_by_key(&b, |&(x, _)| x).ok().map(|i| self.pair_offset[a] + i)
    }

    pub fn num_pairs(&self) -> usize {
        self.pair_offset[self.len()]
    }

    /// All composable pairs `(a, b, ab)` in pair-index order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.compose.iter().enumerate().flat_map(|(a, row)| row.iter().map(move |&(b, ab)| (a, b, ab)))
    }

    /// Morphisms `b` with `s(a) = r(b)`, paired with the composite `ab`.
    pub fn composable_with(&self, a: usize) -> &[(usize, usize)] {
        &self.compose[a]
    }

    /// `r⁻¹(u)` in increasing order.
    pub fn range_fibre(&self, u: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.range[a] == u).collect()
    }

    /// `s⁻¹(u)` in increasing order.
    pub fn source_fibre(&self, u: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.source[a] == u).collect()
    }

    /// The unit space with its subspace topology. Point `k` is `units()[k]`.
    pub fn unit_space(&self) -> FinSpace {
        self.space.subspace(&self.space.set_of(self.units.iter().copied())).0
    }

    /// The range map as a map onto the unit space.
    pub fn range_map(&self) -> SpaceMap {
        let assignment = self.range.iter().map(|&u| self.unit_pos[u].expect("range is a unit")).collect();
        SpaceMap::new(self.space.clone(), self.unit_space(), assignment).expect("range lands in units")
    }

    pub fn source_map(&self) -> SpaceMap {
        let assignment = self.source.iter().map(|&u| self.unit_pos[u].expect("source is a unit")).collect();
        SpaceMap::new(self.space.clone(), self.unit_space(), assignment).expect("source lands in units")
    }

    /// First pair of distinct morphisms with the same range and source.
    pub fn principal_failure(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for a in 0..self.len() {
            if let Some(&b) = seen.get(&(self.range[a], self.source[a])) {
                return Some((b, a));
            }
            seen.insert((self.range[a], self.source[a]), a);
        }
        None
    }

    pub fn is_principal(&self) -> bool {
        self.principal_failure().is_none()
    }

    pub fn is_etale(&self) -> bool {
        classify_map(&self.range_map()).local_homeomorphism
    }
}

/// Wire form of a [`FinGroupoid`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinGroupoidJson {
    pub morphisms: Vec<String>,
    pub min_open: BTreeMap<String, Vec<String>>,
    pub units: Vec<String>,
    pub range: BTreeMap<String, String>,
    pub source: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    pub inverse: BTreeMap<String, String>,
}

impl TryFrom<FinGroupoidJson> for FinGroupoid {
    type Error = GroupoidError;

    fn try_from(json: FinGroupoidJson) -> Result<Self, Self::Error> {
        let space = FinSpace::try_from(crate::finspace::FinSpaceJson {
            points: json.morphisms,
            min_open: json.min_open,
        })?;
        let idx = |name: &str| space.index_of(name).ok_or_else(|| GroupoidError::UnknownMorphism(name.to_string()));
        let lookup = |table: &BTreeMap<String, String>| -> Result<Vec<usize>, GroupoidError> {
            for key in table.keys() {
                idx(key)?;
            }
            space
                .names()
                .iter()
                .map(|m| {
                    let target = table.get(m).ok_or_else(|| GroupoidError::UnknownMorphism(m.clone()))?;
                    idx(target)
                })
                .collect()
        };
        let range = lookup(&json.range)?;
        let source = lookup(&json.source)?;
        let inverse = lookup(&json.inverse)?;
        let units = json.units.iter().map(|u| idx(u)).collect::<Result<Vec<_>, _>>()?;
        let compose = json
            .compose
            .iter()
            .map(|[a, b, c]| Ok((idx(a)?, idx(b)?, idx(c)?)))
            .collect::<Result<Vec<_>, GroupoidError>>()?;
        FinGroupoid::new(space, units, range, source, inverse, compose)
    }
}

impl From<FinGroupoid> for FinGroupoidJson {
    fn from(g: FinGroupoid) -> Self {
        let name = |i: usize| g.name(i).to_string();
        let table = |f: &[usize]| (0..g.len()).map(|a| (name(a), name(f[a]))).collect();
        let compose = g.composable_pairs().map(|(a, b, ab)| [name(a), name(b), name(ab)]).collect();
        let units = g.units.iter().map(|&u| name(u)).collect();
        let range = table(&g.range);
        let source = table(&g.source);
        let inverse = table(&g.inverse);
        let space_json: crate::finspace::FinSpaceJson = g.space.into();
        FinGroupoidJson {
            morphisms: space_json.points,
            min_open: space_json.min_open,
            units,
            range,
            source,
            compose,
            inverse,
        }
    }
}

/// A groupoid given either by a quotient map (as `R(ψ)`) or explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidInput {
    Relation { psi: SpaceMap },
    Explicit(FinGroupoid),
}

impl GroupoidInput {
    pub fn into_groupoid(self) -> Result<FinGroupoid, GroupoidError> {
        match self {
            GroupoidInput::Relation { psi } => Ok(build_relation_groupoid(&psi)?.groupoid),
            GroupoidInput::Explicit(g) => Ok(g),
        }
    }
}

/// `R(ψ) = {(y,z) : ψ(y) = ψ(z)}` with the subspace topology of `Y×Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationGroupoid {
    pub groupoid: FinGroupoid,
    pub psi: SpaceMap,
    /// Morphism `m` is the pair `pairs[m]`, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl RelationGroupoid {
    pub fn base(&self) -> &FinSpace {
        self.psi.dom()
    }

    pub fn morphism(&self, y: usize, z: usize) -> Option<usize> {
        self.lookup.get(&(y, z)).copied()
    }

    /// The unit morphism `(y,y)`.
    pub fn unit_at(&self, y: usize) -> usize {
        self.lookup[&(y, y)]
    }
}

pub fn build_relation_groupoid(psi: &SpaceMap) -> Result<RelationGroupoid, GroupoidError> {
    let y = psi.dom();
    if let Some(x) = (0..psi.cod().len()).find(|&x| psi.fibre(x).count_ones(..) == 0) {
        return Err(GroupoidError::NotSurjective(psi.cod().name(x).to_string()));
    }
    let mut pairs = Vec::new();
    for a in 0..y.len() {
        for b in 0..y.len() {
            if psi.apply(a) == psi.apply(b) {
                pairs.push((a, b));
            }
        }
    }
    let lookup: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let names = pairs.iter().map(|&(a, b)| format!("({},{})", y.name(a), y.name(b))).collect();
    let sets = pairs
        .iter()
        .map(|&(a, b)| {
            let mut s = PointSet::with_capacity(pairs.len());
            for a2 in y.min_open(a).ones() {
                for b2 in y.min_open(b).ones() {
                    if let Some(&m) = lookup.get(&(a2, b2)) {
                        s.insert(m);
                    }
                }
            }
            s
        })
        .collect();
    let space = FinSpace::from_sets(names, sets)?;
    let units: Vec<usize> = (0..y.len()).map(|a| lookup[&(a, a)]).collect();
    let range = pairs.iter().map(|&(a, _)| lookup[&(a, a)]).collect();
    let source = pairs.iter().map(|&(_, b)| lookup[&(b, b)]).collect();
    let inverse = pairs.iter().map(|&(a, b)| lookup[&(b, a)]).collect();
    let mut compose = Vec::new();
    for (m, &(a, b)) in pairs.iter().enumerate() {
        for c in 0..y.len() {
            if let Some(&k) = lookup.get(&(b, c)) {
                compose.push((m, k, lookup[&(a, c)]));
            }
        }
    }
    let groupoid = FinGroupoid::new(space, units, range, source, inverse, compose)?;
    Ok(RelationGroupoid { groupoid, psi: psi.clone(), pairs, lookup })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpace {
    /// `G^(0)/G` with the quotient topology.
    pub space: FinSpace,
    /// The quotient map from the unit space (see [`FinGroupoid::unit_space`]).
    pub q: SpaceMap,
    /// Orbits as lists of unit positions.
    pub orbits: Vec<Vec<usize>>,
    /// Whether `q` is open; only filled in for étale groupoids, where it must be.
    pub q_open_when_etale: Option<bool>,
}

pub fn orbit_space(g: &FinGroupoid) -> OrbitSpace {
    let units = g.unit_space();
    let mut block_of = vec![usize::MAX; units.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (k, &u) in g.units().iter().enumerate() {
        if block_of[k] != usize::MAX {
            continue;
        }
        // [u] = r(s⁻¹(u))
        let mut orbit: Vec<usize> = g
            .source_fibre(u)
            .into_iter()
            .map(|a| g.unit_position(g.range(a)).expect("unit"))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &p in &orbit {
            block_of[p] = orbits.len();
        }
        orbits.push(orbit);
    }
    let (space, q) = quotient_space(&units, &orbits).expect("orbits partition the unit space");
    let q_open_when_etale = g.is_etale().then(|| q.is_open_map());
    OrbitSpace { space, q, orbits, q_open_when_etale }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    /// False when the clause's hypothesis does not hold and it was skipped.
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMapReport {
    pub clauses: Vec<Clause>,
}

impl OrbitMapReport {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| !c.applicable || c.holds)
    }
}

/// Compares `X` with the orbit space of `R(ψ)` through `h(x) = ψ⁻¹(x)`.
pub fn orbit_map_check(psi: &SpaceMap) -> Result<OrbitMapReport, GroupoidError> {
    let rel = build_relation_groupoid(psi)?;
    let g = &rel.groupoid;
    let orbits = orbit_space(g);
    let x = psi.cod();
    let y = psi.dom();
    // The unit (y,y) sits at unit position y, because units are listed in
    // increasing morphism order and (y,y) < (y',y') whenever y < y'.
    let unit_pos_of_point: Vec<usize> = (0..y.len()).map(|p| g.unit_position(rel.unit_at(p)).expect("unit")).collect();
    let mut h = vec![usize::MAX; x.len()];
    let mut well_defined = true;
    for p in 0..y.len() {
        let o = orbits.q.apply(unit_pos_of_point[p]);
        let target = &mut h[psi.apply(p)];
        if *target == usize::MAX {
            *target = o;
        } else if *target != o {
            well_defined = false;
        }
    }
    let mut clauses = vec![Clause { name: "h is well defined".into(), applicable: true, holds: well_defined }];
    let h_map = SpaceMap::new(x.clone(), orbits.space.clone(), h).ok();
    let bijective = h_map.as_ref().is_some_and(|h| h.is_surjective() && h.is_injective_on(&x.full_set()));
    clauses.push(Clause { name: "h is a bijection".into(), applicable: true, holds: bijective });
    let factors = h_map
        .as_ref()
        .is_some_and(|h| (0..y.len()).all(|p| h.apply(psi.apply(p)) == orbits.q.apply(unit_pos_of_point[p])));
    clauses.push(Clause { name: "h after psi equals the orbit map".into(), applicable: true, holds: factors });
    let props = classify_map(psi);
    let h_props = h_map.as_ref().map(classify_map);
    clauses.push(Clause {
        name: "h is open when psi is continuous".into(),
        applicable: props.continuous,
        holds: h_props.is_some_and(|p| p.open_map),
    });
    clauses.push(Clause {
        name: "h is a homeomorphism when psi is a quotient map".into(),
        applicable: props.quotient,
        holds: bijective && h_props.is_some_and(|p| p.open_map && p.continuous),
    });
    Ok(OrbitMapReport { clauses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidProperties {
    pub principal: bool,
    pub etale: bool,
    pub cartan_literal: bool,
    pub cartan_trace: Vec<String>,
}

pub fn groupoid_properties(g: &FinGroupoid) -> GroupoidProperties {
    let units = g.unit_space();
    let mut trace = Vec::new();
    let mut cartan = true;
    for (k, &u) in g.units().iter().enumerate() {
        // N = minimal open of u in the unit space; s⁻¹(N) ∩ r⁻¹(N) is a
        // finite subset of G, so its closure is compact.
        let nbhd: Vec<usize> = units.min_open(k).ones().map(|p| g.units()[p]).collect();
        let in_n = |e: usize| nbhd.contains(&e);
        let wandering: Vec<usize> = (0..g.len()).filter(|&a| in_n(g.source(a)) && in_n(g.range(a))).collect();
        let closure = g.space().closure(&g.space().set_of(wandering.iter().copied()));
        let compact = g.space().is_compact(&closure);
        cartan &= compact;
        trace.push(format!(
            "unit {}: neighbourhood of {} units, {} morphisms between them, closure of {} is compact: {compact}",
            g.name(u),
            nbhd.len(),
            wandering.len(),
            closure.count_ones(..)
        ));
    }
    GroupoidProperties { principal: g.is_principal(), etale: g.is_etale(), cartan_literal: cartan, cartan_trace: trace }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FellReport {
    pub is_fell_model: bool,
    pub r_times_s_bijective: bool,
    pub r_times_s_continuous: bool,
    pub r_times_s_open: bool,
    /// The morphism whose minimal open set has non-open image.
    pub witness_morphism: Option<String>,
    /// That minimal open set.
    pub witness: Option<Vec<String>>,
}

/// Tests whether `r×s : G → R(q)` is a homeomorphism, where `q` is the orbit map.
pub fn fell_check(g: &FinGroupoid) -> Result<FellReport, GroupoidError> {
    if let Some((a, b)) = g.principal_failure() {
        return Err(GroupoidError::NonPrincipal { a: g.name(a).to_string(), b: g.name(b).to_string() });
    }
    let orbits = orbit_space(g);
    let rq = build_relation_groupoid(&orbits.q)?;
    let assignment = (0..g.len())
        .map(|a| {
            let r = g.unit_position(g.range(a)).expect("unit");
            let s = g.unit_position(g.source(a)).expect("unit");
            rq.morphism(r, s).expect("r(a) and s(a) share an orbit")
        })
        .collect();
    let rs = SpaceMap::new(g.space().clone(), rq.groupoid.space().clone(), assignment)?;
    let props = classify_map(&rs);
    let bijective = props.surjective && rs.is_injective_on(&g.space().full_set());
    let witness_morphism =
        (0..g.len()).find(|&a| !rq.groupoid.space().is_open(&rs.image(g.space().min_open(a))));
    Ok(FellReport {
        is_fell_model: bijective && props.continuous && props.open_map,
        r_times_s_bijective: bijective,
        r_times_s_continuous: props.continuous,
        r_times_s_open: props.open_map,
        witness_morphism: witness_morphism.map(|a| g.name(a).to_string()),
        witness: witness_morphism.map(|a| g.space().set_names(g.space().min_open(a))),
    })
}
