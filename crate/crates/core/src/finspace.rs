//! Finite topological spaces encoded by minimal open neighbourhoods.
//!
//! A finite topology is determined by the smallest open set `U_x` around each
//! point `x`; the open sets are exactly the unions of these. Every predicate in
//! this module works on the minimal opens directly, and only
//! [`FinSpace::open_sets`] enumerates the (possibly exponential) open-set
//! lattice.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A subset of the points of a [`FinSpace`], indexed by point position.
pub type PointSet = FixedBitSet;

/// Largest space for which the open-set lattice is enumerated.
pub const OPEN_SET_ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("no minimal open set given for `{0}`")]
    MissingMinOpen(String),
    #[error("point `{0}` is not contained in its own minimal open set")]
    NotReflexive(String),
    #[error("`{inner}` lies in U({outer}) but U({inner}) is not contained in U({outer})")]
    Incoherent { outer: String, inner: String },
    #[error("open-set enumeration is capped at {cap} points, space has {size}")]
    EnumerationCap { size: usize, cap: usize },
    #[error("no image assigned to `{0}`")]
    MissingAssignment(String),
    #[error("`{point}` is sent to `{target}`, which is not a point of the codomain")]
    OutsideCodomain { point: String, target: String },
    #[error("partition blocks overlap at `{0}`")]
    OverlappingPartition(String),
    #[error("partition does not cover `{0}`")]
    IncompletePartition(String),
    #[error("partition contains an empty block")]
    EmptyBlock,
    #[error("cover element {0} is not open")]
    CoverNotOpen(usize),
    #[error("cover element {0} is not Hausdorff as a subspace")]
    CoverNotHausdorff(usize),
    #[error("cover does not contain `{0}`")]
    CoverNotExhaustive(String),
}

/// A finite topological space.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FinSpaceJson", into = "FinSpaceJson")]
pub struct FinSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
    min_open: Vec<PointSet>,
}

/// Wire form of a [`FinSpace`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinSpaceJson {
    pub points: Vec<String>,
    pub min_open: BTreeMap<String, Vec<String>>,
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (i, name) in self.names.iter().enumerate() {
            map.entry(name, &self.set_names(&self.min_open[i]));
        }
        map.finish()
    }
}

impl FinSpace {
    /// Builds a space from point names and, for each point, the positions of
    /// the points in its minimal open set.
    pub fn new(names: Vec<String>, min_open: Vec<Vec<usize>>) -> Result<Self, SpaceError> {
        let n = names.len();
        let sets = min_open
            .into_iter()
            .map(|members| {
                let mut set = PointSet::with_capacity(n);
                for m in members {
                    if m >= n {
                        return Err(SpaceError::UnknownPoint(format!("#{m}")));
                    }
                    set.insert(m);
                }
                Ok(set)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_sets(names, sets)
    }

    /// Builds a space from minimal open sets given as bitsets.
    pub fn from_sets(names: Vec<String>, min_open: Vec<PointSet>) -> Result<Self, SpaceError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(SpaceError::DuplicatePoint(name.clone()));
            }
        }
        if min_open.len() != names.len() {
            let missing = names.get(min_open.len()).cloned().unwrap_or_default();
            return Err(SpaceError::MissingMinOpen(missing));
        }
        let n = names.len();
        let min_open: Vec<PointSet> = min_open
            .into_iter()
            .map(|mut s| {
                s.grow(n);
                s
            })
            .collect();
        for (x, ux) in min_open.iter().enumerate() {
            if ux.len() > n || ux.ones().any(|y| y >= n) {
                return Err(SpaceError::UnknownPoint(format!("#{}", ux.len())));
            }
            if !ux.contains(x) {
                return Err(SpaceError::NotReflexive(names[x].clone()));
            }
            for y in ux.ones() {
                if !min_open[y].is_subset(ux) {
                    return Err(SpaceError::Incoherent {
                        outer: names[x].clone(),
                        inner: names[y].clone(),
                    });
                }
            }
        }
        Ok(Self { names, index, min_open })
    }

    /// Builds a space from `(point, minimal open)` pairs written with names.
    pub fn from_named(spec: &[(&str, &[&str])]) -> Result<Self, SpaceError> {
        let names: Vec<String> = spec.iter().map(|(p, _)| p.to_string()).collect();
        let lookup: HashMap<&str, usize> = spec.iter().enumerate().map(|(i, (p, _))| (*p, i)).collect();
        let sets = spec
            .iter()
            .map(|(_, members)| {
                members
                    .iter()
                    .map(|m| lookup.get(m).copied().ok_or_else(|| SpaceError::UnknownPoint(m.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(names, sets)
    }

    pub fn discrete<S: ToString>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let sets = (0..names.len()).map(|i| vec![i]).collect();
        Self::new(names, sets).expect("discrete topology is always valid")
    }

    pub fn indiscrete<S: ToString>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let all: Vec<usize> = (0..names.len()).collect();
        let sets = vec![all; names.len()];
        Self::new(names, sets).expect("indiscrete topology is always valid")
    }

    /// The Sierpiński space `{a, b}` whose only nontrivial open set is `{a}`.
    pub fn sierpinski() -> Self {
        Self::from_named(&[("a", &["a"]), ("b", &["a", "b"])]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn min_open(&self, x: usize) -> &PointSet {
        &self.min_open[x]
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, points: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = self.empty_set();
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn set_of_names(&self, names: &[&str]) -> Result<PointSet, SpaceError> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.index_of(n).ok_or_else(|| SpaceError::UnknownPoint(n.to_string()))?);
        }
        Ok(s)
    }

    pub fn set_names(&self, set: &PointSet) -> Vec<String> {
        set.ones().map(|i| self.names[i].clone()).collect()
    }

    /// `set` is open iff it contains the minimal open of each of its points.
    pub fn is_open(&self, set: &PointSet) -> bool {
        set.ones().all(|x| self.min_open[x].is_subset(set))
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.is_open(&self.complement(set))
    }

    pub fn complement(&self, set: &PointSet) -> PointSet {
        let mut c = self.full_set();
        c.difference_with(set);
        c
    }

    /// Smallest open set containing `set`.
    pub fn open_hull(&self, set: &PointSet) -> PointSet {
        let mut hull = self.empty_set();
        for x in set.ones() {
            hull.union_with(&self.min_open[x]);
        }
        hull
    }

    /// `y` lies in the closure of `set` iff every neighbourhood of `y` meets it.
    pub fn closure(&self, set: &PointSet) -> PointSet {
        self.set_of((0..self.len()).filter(|&y| !self.min_open[y].is_disjoint(set)))
    }

    pub fn interior(&self, set: &PointSet) -> PointSet {
        self.set_of(set.ones().filter(|&x| self.min_open[x].is_subset(set)))
    }

    pub fn is_neighbourhood_of(&self, set: &PointSet, x: usize) -> bool {
        self.min_open[x].is_subset(set)
    }

    /// Every subset of a finite space is compact: any open cover is finite.
    pub fn is_compact(&self, _set: &PointSet) -> bool {
        true
    }

    /// Enumerates every open set, including the empty set.
    pub fn open_sets(&self) -> Result<Vec<PointSet>, SpaceError> {
        if self.len() > OPEN_SET_ENUMERATION_CAP {
            return Err(SpaceError::EnumerationCap { size: self.len(), cap: OPEN_SET_ENUMERATION_CAP });
        }
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut sets = vec![self.empty_set()];
        seen.insert(self.empty_set());
        for ux in &self.min_open {
            let current = sets.len();
            for i in 0..current {
                let mut u = sets[i].clone();
                u.union_with(ux);
                if seen.insert(u.clone()) {
                    sets.push(u);
                }
            }
        }
        sets.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        Ok(sets)
    }

    /// The subspace on `set`, together with the positions (in `self`) of its points.
    pub fn subspace(&self, set: &PointSet) -> (FinSpace, Vec<usize>) {
        let members: Vec<usize> = set.ones().collect();
        let mut local = vec![usize::MAX; self.len()];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        let sets = members
            .iter()
            .map(|&m| self.min_open[m].ones().filter(|y| set.contains(*y)).map(|y| local[y]).collect())
            .collect();
        let sub = FinSpace::new(names, sets).expect("subspace of a valid space is valid");
        (sub, members)
    }

    /// Distinct points have disjoint open neighbourhoods. The minimal opens are
    /// the smallest neighbourhoods, so testing them is exhaustive.
    pub fn is_hausdorff(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| self.min_open[x].is_disjoint(&self.min_open[y])))
    }

    pub fn is_hausdorff_subset(&self, set: &PointSet) -> bool {
        self.subspace(set).0.is_hausdorff()
    }

    /// Every point has a Hausdorff neighbourhood. Subspaces of Hausdorff spaces
    /// are Hausdorff, so the minimal neighbourhood decides it.
    pub fn is_locally_hausdorff(&self) -> bool {
        (0..self.len()).all(|x| self.is_hausdorff_subset(&self.min_open[x]))
    }

    /// All singletons are closed.
    pub fn is_t1(&self) -> bool {
        (0..self.len()).all(|x| self.is_closed(&self.set_of([x])))
    }

    pub fn is_discrete(&self) -> bool {
        self.min_open.iter().all(|u| u.count_ones(..) == 1)
    }

    /// Product topology; point `(a, b)` sits at position `a * other.len() + b`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let mut names = Vec::with_capacity(self.len() * m);
        let mut sets = Vec::with_capacity(self.len() * m);
        for a in 0..self.len() {
            for b in 0..m {
                names.push(format!("({},{})", self.names[a], other.names[b]));
                let mut s = PointSet::with_capacity(self.len() * m);
                for x in self.min_open[a].ones() {
                    for y in other.min_open[b].ones() {
                        s.insert(x * m + y);
                    }
                }
                sets.push(s);
            }
        }
        FinSpace::from_sets(names, sets).expect("product of valid spaces is valid")
    }
}

impl TryFrom<FinSpaceJson> for FinSpace {
    type Error = SpaceError;

    fn try_from(json: FinSpaceJson) -> Result<Self, Self::Error> {
        let lookup: HashMap<&str, usize> = json.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        for key in json.min_open.keys() {
            if !lookup.contains_key(key.as_str()) {
                return Err(SpaceError::UnknownPoint(key.clone()));
            }
        }
        let sets = json
            .points
            .iter()
            .map(|p| {
                let members = json.min_open.get(p).ok_or_else(|| SpaceError::MissingMinOpen(p.clone()))?;
                members
                    .iter()
                    .map(|m| lookup.get(m.as_str()).copied().ok_or_else(|| SpaceError::UnknownPoint(m.clone())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        FinSpace::new(json.points, sets)
    }
}

impl From<FinSpace> for FinSpaceJson {
    fn from(space: FinSpace) -> Self {
        let min_open = (0..space.len())
            .map(|x| (space.names[x].clone(), space.set_names(&space.min_open[x])))
            .collect();
        FinSpaceJson { points: space.names, min_open }
    }
}

/// A function between the underlying sets of two finite spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceMapJson", into = "SpaceMapJson")]
pub struct SpaceMap {
    dom: FinSpace,
    cod: FinSpace,
    assignment: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceMapJson {
    pub dom: FinSpace,
    pub cod: FinSpace,
    pub assignment: BTreeMap<String, String>,
}

impl SpaceMap {
    pub fn new(dom: FinSpace, cod: FinSpace, assignment: Vec<usize>) -> Result<Self, SpaceError> {
        if assignment.len() < dom.len() {
            return Err(SpaceError::MissingAssignment(dom.name(assignment.len()).to_string()));
        }
        if let Some((x, &t)) = assignment.iter().enumerate().find(|(_, &t)| t >= cod.len()) {
            return Err(SpaceError::OutsideCodomain { point: dom.name(x).to_string(), target: format!("#{t}") });
        }
        Ok(Self { dom, cod, assignment })
    }

    pub fn from_names(dom: FinSpace, cod: FinSpace, pairs: &[(&str, &str)]) -> Result<Self, SpaceError> {
        let mut assignment = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let xi = dom.index_of(x).ok_or_else(|| SpaceError::UnknownPoint(x.to_string()))?;
            let yi = cod
                .index_of(y)
                .ok_or_else(|| SpaceError::OutsideCodomain { point: x.to_string(), target: y.to_string() })?;
            assignment[xi] = yi;
        }
        if let Some(x) = assignment.iter().position(|&t| t == usize::MAX) {
            return Err(SpaceError::MissingAssignment(dom.name(x).to_string()));
        }
        Self::new(dom, cod, assignment)
    }

    pub fn identity(space: FinSpace) -> Self {
        let assignment = (0..space.len()).collect();
        Self { dom: space.clone(), cod: space, assignment }
    }

    pub fn dom(&self) -> &FinSpace {
        &self.dom
    }

    pub fn cod(&self) -> &FinSpace {
        &self.cod
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn image(&self, set: &PointSet) -> PointSet {
        self.cod.set_of(set.ones().map(|x| self.assignment[x]))
    }

    pub fn preimage(&self, set: &PointSet) -> PointSet {
        self.dom.set_of((0..self.dom.len()).filter(|&x| set.contains(self.assignment[x])))
    }

    pub fn fibre(&self, y: usize) -> PointSet {
        self.dom.set_of((0..self.dom.len()).filter(|&x| self.assignment[x] == y))
    }

    pub fn is_surjective(&self) -> bool {
        self.image(&self.dom.full_set()).count_ones(..) == self.cod.len()
    }

    pub fn is_injective_on(&self, set: &PointSet) -> bool {
        self.image(set).count_ones(..) == set.count_ones(..)
    }

    pub fn is_continuous(&self) -> bool {
        (0..self.dom.len()).all(|x| self.image(self.dom.min_open(x)).is_subset(self.cod.min_open(self.assignment[x])))
    }

    /// Images of unions are unions of images, so minimal opens suffice.
    pub fn is_open_map(&self) -> bool {
        (0..self.dom.len()).all(|x| self.cod.is_open(&self.image(self.dom.min_open(x))))
    }

    /// The finest topology on the codomain's points making this map continuous.
    pub fn final_topology(&self) -> FinSpace {
        let sets = (0..self.cod.len())
            .map(|target| {
                let mut v = self.cod.set_of([target]);
                loop {
                    let hull = self.dom.open_hull(&self.preimage(&v));
                    let mut grown = v.clone();
                    grown.union_with(&self.image(&hull));
                    if grown == v {
                        break v;
                    }
                    v = grown;
                }
            })
            .collect();
        FinSpace::from_sets(self.cod.names.clone(), sets).expect("final topology is a topology")
    }

    /// Whether `self|set` is a homeomorphism onto an open subset of the codomain.
    pub fn is_open_embedding_on(&self, set: &PointSet) -> bool {
        if !self.is_injective_on(set) {
            return false;
        }
        let image = self.image(set);
        if !self.cod.is_open(&image) {
            return false;
        }
        // A bijection of finite spaces is a homeomorphism iff it matches
        // minimal opens of the two subspaces.
        set.ones().all(|y| {
            let mut local = self.dom.min_open(y).clone();
            local.intersect_with(set);
            let mut target = self.cod.min_open(self.assignment[y]).clone();
            target.intersect_with(&image);
            self.image(&local) == target
        })
    }

    pub fn compose(&self, outer: &SpaceMap) -> SpaceMap {
        let assignment = self.assignment.iter().map(|&y| outer.assignment[y]).collect();
        SpaceMap { dom: self.dom.clone(), cod: outer.cod.clone(), assignment }
    }
}

impl TryFrom<SpaceMapJson> for SpaceMap {
    type Error = SpaceError;

    fn try_from(json: SpaceMapJson) -> Result<Self, Self::Error> {
        for key in json.assignment.keys() {
            if json.dom.index_of(key).is_none() {
                return Err(SpaceError::UnknownPoint(key.clone()));
            }
        }
        let pairs: Vec<(&str, &str)> = json.assignment.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        SpaceMap::from_names(json.dom, json.cod, &pairs)
    }
}

impl From<SpaceMap> for SpaceMapJson {
    fn from(map: SpaceMap) -> Self {
        let assignment = (0..map.dom.len())
            .map(|x| (map.dom.name(x).to_string(), map.cod.name(map.assignment[x]).to_string()))
            .collect();
        SpaceMapJson { dom: map.dom, cod: map.cod, assignment }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapProperties {
    pub continuous: bool,
    pub open_map: bool,
    pub surjective: bool,
    pub quotient: bool,
    pub local_homeomorphism: bool,
}

/// Classifies a map between finite spaces.
///
/// The local-homeomorphism test only inspects the minimal neighbourhood of each
/// point: if some open `V` around `x` restricts to a homeomorphism onto an open
/// set, so does `U_x ⊆ V`.
pub fn classify_map(f: &SpaceMap) -> MapProperties {
    let surjective = f.is_surjective();
    let quotient = surjective && f.final_topology().min_open == f.cod.min_open;
    let local_homeomorphism = (0..f.dom.len()).all(|x| f.is_open_embedding_on(f.dom.min_open(x)));
    MapProperties {
        continuous: f.is_continuous(),
        open_map: f.is_open_map(),
        surjective,
        quotient,
        local_homeomorphism,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceProperties {
    pub hausdorff: bool,
    pub locally_hausdorff: bool,
    pub t1: bool,
    pub discrete: bool,
}

pub fn space_properties(s: &FinSpace) -> SpaceProperties {
    SpaceProperties {
        hausdorff: s.is_hausdorff(),
        locally_hausdorff: s.is_locally_hausdorff(),
        t1: s.is_t1(),
        discrete: s.is_discrete(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCompactnessTrace {
    pub holds: bool,
    /// Every nonempty open subset that was checked for local compactness.
    pub open_subsets: Vec<Vec<String>>,
    /// False when the space exceeded the enumeration cap and only the
    /// pointwise neighbourhood-basis check ran.
    pub enumerated: bool,
    pub notes: Vec<String>,
}

/// Checks that every point has a neighbourhood basis of compact sets, through
/// the equivalent statement that every open subset is locally compact.
pub fn check_local_local_compactness(s: &FinSpace) -> LocalCompactnessTrace {
    let mut notes = Vec::new();
    // Pointwise: {U_x} alone is a neighbourhood basis at x, and U_x is compact.
    let basis_ok = (0..s.len()).all(|x| s.is_compact(s.min_open(x)) && s.is_neighbourhood_of(s.min_open(x), x));
    notes.push(format!("minimal opens form compact neighbourhood bases at all {} points: {basis_ok}", s.len()));
    match s.open_sets() {
        Ok(opens) => {
            let mut open_subsets = Vec::new();
            let mut all_lc = true;
            for w in opens.iter().filter(|w| w.count_ones(..) > 0) {
                // Each x in W has the compact neighbourhood U_x ⊆ W inside W.
                let lc = w.ones().all(|x| s.min_open(x).is_subset(w) && s.is_compact(s.min_open(x)));
                all_lc &= lc;
                open_subsets.push(s.set_names(w));
            }
            notes.push(format!(
                "{} nonempty open subsets enumerated, all locally compact: {all_lc}",
                open_subsets.len()
            ));
            notes.push(format!("equivalence checked: basis condition {basis_ok} <=> open subsets {all_lc}"));
            LocalCompactnessTrace { holds: basis_ok && all_lc, open_subsets, enumerated: true, notes }
        }
        Err(e) => {
            notes.push(format!("open-subset side skipped: {e}"));
            LocalCompactnessTrace { holds: basis_ok, open_subsets: Vec::new(), enumerated: false, notes }
        }
    }
}

fn block_name(space: &FinSpace, block: &[usize]) -> String {
    if block.len() == 1 {
        space.name(block[0]).to_string()
    } else {
        let inner: Vec<&str> = block.iter().map(|&p| space.name(p)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Collapses each block of `partition` to a point and gives the result the
/// final topology.
pub fn quotient_space(y: &FinSpace, partition: &[Vec<usize>]) -> Result<(FinSpace, SpaceMap), SpaceError> {
    let mut assignment = vec![usize::MAX; y.len()];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(SpaceError::EmptyBlock);
        }
        for &p in block {
            if p >= y.len() {
                return Err(SpaceError::UnknownPoint(format!("#{p}")));
            }
            if assignment[p] != usize::MAX {
                return Err(SpaceError::OverlappingPartition(y.name(p).to_string()));
            }
            assignment[p] = b;
        }
    }
    if let Some(p) = assignment.iter().position(|&b| b == usize::MAX) {
        return Err(SpaceError::IncompletePartition(y.name(p).to_string()));
    }
    let names: Vec<String> = partition.iter().map(|b| block_name(y, b)).collect();
    let scratch = FinSpace::discrete(&names);
    let provisional = SpaceMap::new(y.clone(), scratch, assignment.clone())?;
    let x = provisional.final_topology();
    let psi = SpaceMap::new(y.clone(), x.clone(), assignment)?;
    Ok((x, psi))
}

pub fn quotient_space_named(y: &FinSpace, partition: &[&[&str]]) -> Result<(FinSpace, SpaceMap), SpaceError> {
    let blocks = partition
        .iter()
        .map(|b| {
            b.iter()
                .map(|n| y.index_of(n).ok_or_else(|| SpaceError::UnknownPoint(n.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    quotient_space(y, &blocks)
}

/// Resolves `x` by the disjoint union of an open cover by Hausdorff subsets.
/// Point `p` of cover element `i` becomes `p@i`.
pub fn hausdorff_cover_resolution(x: &FinSpace, cover: &[Vec<usize>]) -> Result<(FinSpace, SpaceMap), SpaceError> {
    let mut covered = x.empty_set();
    let mut members = Vec::with_capacity(cover.len());
    for (i, element) in cover.iter().enumerate() {
        let mut set = x.empty_set();
        for &p in element {
            if p >= x.len() {
                return Err(SpaceError::UnknownPoint(format!("#{p}")));
            }
            set.insert(p);
        }
        if !x.is_open(&set) {
            return Err(SpaceError::CoverNotOpen(i));
        }
        if !x.is_hausdorff_subset(&set) {
            return Err(SpaceError::CoverNotHausdorff(i));
        }
        covered.union_with(&set);
        members.push(set.ones().collect::<Vec<_>>());
    }
    if let Some(p) = x.complement(&covered).ones().next() {
        return Err(SpaceError::CoverNotExhaustive(x.name(p).to_string()));
    }
    let mut names = Vec::new();
    let mut assignment = Vec::new();
    let mut position = HashMap::new();
    for (i, element) in members.iter().enumerate() {
        for &p in element {
            position.insert((i, p), names.len());
            names.push(format!("{}@{}", x.name(p), i));
            assignment.push(p);
        }
    }
    let mut sets = Vec::with_capacity(names.len());
    for (i, element) in members.iter().enumerate() {
        for &p in element {
            sets.push(
                x.min_open(p)
                    .ones()
                    .filter_map(|q| position.get(&(i, q)).copied())
                    .collect::<Vec<_>>(),
            );
        }
    }
    let y = FinSpace::new(names, sets)?;
    let psi = SpaceMap::new(y.clone(), x.clone(), assignment)?;
    Ok((y, psi))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HausdorffCoreReport {
    pub core: Vec<String>,
    pub core_is_open: bool,
    pub core_is_hausdorff: bool,
    /// For each core point, the closed Hausdorff neighbourhood found for it.
    pub witnesses: BTreeMap<String, Vec<String>>,
}

impl HausdorffCoreReport {
    pub fn holds(&self) -> bool {
        self.core_is_open && self.core_is_hausdorff
    }
}

/// The set of points that have a closed Hausdorff neighbourhood.
///
/// Any closed neighbourhood of `x` contains the closure of `U_x`, and
/// Hausdorffness passes to subspaces, so `x` qualifies exactly when
/// `closure(U_x)` is Hausdorff.
pub fn closed_hausdorff_core(x: &FinSpace) -> (PointSet, HausdorffCoreReport) {
    let mut core = x.empty_set();
    let mut witnesses = BTreeMap::new();
    for p in 0..x.len() {
        let n = x.closure(x.min_open(p));
        debug_assert!(x.is_closed(&n) && x.is_neighbourhood_of(&n, p));
        if x.is_hausdorff_subset(&n) {
            core.insert(p);
            witnesses.insert(x.name(p).to_string(), x.set_names(&n));
        }
    }
    let report = HausdorffCoreReport {
        core: x.set_names(&core),
        core_is_open: x.is_open(&core),
        core_is_hausdorff: x.is_hausdorff_subset(&core),
        witnesses,
    };
    (core, report)
}
