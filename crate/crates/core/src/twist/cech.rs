//! Alternating Čech 2-cocycles on finite covers, with constant values on each
//! triple overlap, and the doubled-cover groupoid they twist.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cocycle::TwoCocycle;
use super::modlin::{self, ModSolution};
use super::TwistError;
use crate::finspace::{classify_map, FinSpace, SpaceMap};
use crate::groupoid::{build_relation_groupoid, FinGroupoid, RelationGroupoid};

pub type Triple = (u32, u32, u32);

/// A finite cover with a `Z_n`-valued function on ordered index triples.
///
/// Values may be given on any ordering of a triple; the others follow by the
/// sign of the permutation. [`verify_cech`] checks that given values agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechData {
    n: u64,
    points: Vec<String>,
    indices: Vec<u32>,
    cover: Vec<BTreeSet<usize>>,
    lambda: BTreeMap<Triple, u64>,
}

/// Wire form. `points` defaults to the union of the cover sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CechJson {
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    pub cover: BTreeMap<u32, Vec<String>>,
    pub lambda: Vec<(u32, u32, u32, i64)>,
}

fn residue(v: i64, n: u64) -> u64 {
    v.rem_euclid(n as i64) as u64
}

/// The six orderings of `(i,j,k)` with their signs.
fn permutations((i, j, k): Triple) -> [(Triple, bool); 6] {
    [
        ((i, j, k), true),
        ((j, k, i), true),
        ((k, i, j), true),
        ((j, i, k), false),
        ((i, k, j), false),
        ((k, j, i), false),
    ]
}

fn sorted((i, j, k): Triple) -> (Triple, bool) {
    let mut v = [i, j, k];
    let mut even = true;
    for a in 0..3 {
        for b in 0..2 - a {
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                even = !even;
            }
        }
    }
    ((v[0], v[1], v[2]), even)
}

impl CechData {
    pub fn new(
        n: u64,
        points: Vec<String>,
        cover: Vec<(u32, Vec<usize>)>,
        lambda: Vec<(Triple, i64)>,
    ) -> Result<Self, TwistError> {
        if n == 0 {
            return Err(TwistError::BadModulus);
        }
        let mut by_index: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
        for (i, members) in cover {
            if by_index.contains_key(&i) {
                return Err(TwistError::InvalidCech(format!("cover index {i} given twice")));
            }
            for &p in &members {
                if p >= points.len() {
                    return Err(TwistError::InvalidCech(format!("cover set {i} names unknown point #{p}")));
                }
            }
            by_index.insert(i, members.into_iter().collect());
        }
        let covered: BTreeSet<usize> = by_index.values().flatten().copied().collect();
        if let Some(p) = (0..points.len()).find(|p| !covered.contains(p)) {
            return Err(TwistError::InvalidCech(format!("point `{}` is not covered", points[p])));
        }
        let mut table = BTreeMap::new();
        for ((i, j, k), v) in lambda {
            for idx in [i, j, k] {
                if !by_index.contains_key(&idx) {
                    return Err(TwistError::UnknownIndex(idx));
                }
            }
            if table.insert((i, j, k), residue(v, n)).is_some() {
                return Err(TwistError::InvalidCech(format!("lambda({i},{j},{k}) given twice")));
            }
        }
        let (indices, cover) = by_index.into_iter().unzip();
        Ok(Self { n, points, indices, cover, lambda: table })
    }

    pub fn from_json(json: &CechJson) -> Result<Self, TwistError> {
        let points: Vec<String> = match &json.points {
            Some(p) => p.clone(),
            None => json.cover.values().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
        };
        let lookup: HashMap<&str, usize> = points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let cover = json
            .cover
            .iter()
            .map(|(&i, members)| {
                let members = members
                    .iter()
                    .map(|m| {
                        lookup
                            .get(m.as_str())
                            .copied()
                            .ok_or_else(|| TwistError::InvalidCech(format!("unknown point `{m}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((i, members))
            })
            .collect::<Result<Vec<_>, TwistError>>()?;
        let lambda = json.lambda.iter().map(|&(i, j, k, v)| ((i, j, k), v)).collect();
        Self::new(json.n, points, cover, lambda)
    }

    pub fn to_json(&self) -> CechJson {
        let cover = self
            .indices
            .iter()
            .zip(&self.cover)
            .map(|(&i, set)| (i, set.iter().map(|&p| self.points[p].clone()).collect()))
            .collect();
        let lambda = self.lambda.iter().map(|(&(i, j, k), &v)| (i, j, k, v as i64)).collect();
        CechJson { n: self.n, points: Some(self.points.clone()), cover, lambda }
    }

    /// The boundary of the tetrahedron: points are the four 2-faces of
    /// `{1,2,3,4}`, `U_i` holds the faces containing `i`, and
    /// `λ(1,2,3) = v` with every other sorted triple 0.
    pub fn tetrahedron_boundary(n: u64, v: i64) -> Self {
        let faces = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
        let points = faces.iter().map(|f| f.iter().map(|x| x.to_string()).collect::<String>()).collect();
        let cover = (1..=4u32)
            .map(|i| (i, (0..4).filter(|&p| faces[p].contains(&i)).collect()))
            .collect();
        let lambda = faces
            .iter()
            .map(|f| ((f[0], f[1], f[2]), if *f == [1, 2, 3] { v } else { 0 }))
            .collect();
        Self::new(n, points, cover, lambda).expect("valid cover")
    }

    /// `λ = δμ` on the same cover: `λ_ijk = μ_jk - μ_ik + μ_ij` on sorted
    /// triples with nonempty overlap.
    pub fn coboundary_of(&self, mu: &BTreeMap<(u32, u32), i64>) -> Self {
        let m = |i: u32, j: u32| mu.get(&(i, j)).copied().unwrap_or(0);
        let lambda = self
            .sorted_triples()
            .into_iter()
            .map(|(i, j, k)| ((i, j, k), m(j, k) - m(i, k) + m(i, j)))
            .collect();
        Self { lambda: BTreeMap::new(), ..self.clone() }.with_lambda(lambda)
    }

    /// Same cover and modulus, new lambda entries.
    pub fn with_lambda(&self, lambda: Vec<(Triple, i64)>) -> Self {
        let n = self.n;
        Self { lambda: lambda.into_iter().map(|(t, v)| (t, residue(v, n))).collect(), ..self.clone() }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn cover_set(&self, i: u32) -> Option<&BTreeSet<usize>> {
        self.indices.binary_search(&i).ok().map(|k| &self.cover[k])
    }

    pub fn raw(&self) -> &BTreeMap<Triple, u64> {
        &self.lambda
    }

    /// Points lying in every listed cover set.
    pub fn overlap(&self, idx: &[u32]) -> BTreeSet<usize> {
        let mut sets = idx.iter().map(|&i| self.cover_set(i).expect("known index"));
        let first = sets.next().cloned().unwrap_or_default();
        sets.fold(first, |acc, s| acc.intersection(s).copied().collect())
    }

    pub fn sorted_triples(&self) -> Vec<Triple> {
        let ix = &self.indices;
        let mut out = Vec::new();
        for a in 0..ix.len() {
            for b in a + 1..ix.len() {
                for c in b + 1..ix.len() {
                    if !self.overlap(&[ix[a], ix[b], ix[c]]).is_empty() {
                        out.push((ix[a], ix[b], ix[c]));
                    }
                }
            }
        }
        out
    }

    /// `λ(i,j,k)` extended to all orderings by sign; 0 on repeated indices.
    pub fn value(&self, i: u32, j: u32, k: u32) -> Result<u64, TwistError> {
        if i == j || j == k || i == k {
            return Ok(0);
        }
        let (s, _) = sorted((i, j, k));
        let base = permutations(s).into_iter().find_map(|(p, even)| {
            self.lambda.get(&p).map(|&v| if even { v } else { (self.n - v) % self.n })
        });
        match base {
            Some(v) => {
                let (_, even) = sorted((i, j, k));
                Ok(if even { v } else { (self.n - v) % self.n })
            }
            None if self.overlap(&[i, j, k]).is_empty() => Ok(0),
            None => Err(TwistError::MissingTriple(s.0, s.1, s.2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechReport {
    pub valid: bool,
    /// Given orderings that disagree with the sign rule.
    pub antisymmetry_violations: Vec<Triple>,
    /// Triples with a repeated index and a nonzero value.
    pub repeated_index_violations: Vec<Triple>,
    /// Sorted quadruples with nonempty overlap where `δλ != 0`.
    pub cocycle_violations: Vec<(u32, u32, u32, u32)>,
}

pub fn verify_cech(c: &CechData) -> Result<CechReport, TwistError> {
    let n = c.n;
    let mut antisymmetry_violations = Vec::new();
    for t in c.sorted_triples() {
        let v = c.value(t.0, t.1, t.2)?;
        for (p, even) in permutations(t) {
            if let Some(&given) = c.lambda.get(&p) {
                let expected = if even { v } else { (n - v) % n };
                if given != expected {
                    antisymmetry_violations.push(p);
                }
            }
        }
    }
    let repeated_index_violations: Vec<Triple> = c
        .lambda
        .iter()
        .filter(|(&(i, j, k), &v)| (i == j || j == k || i == k) && v != 0)
        .map(|(&t, _)| t)
        .collect();
    let ix = &c.indices;
    let mut cocycle_violations = Vec::new();
    for a in 0..ix.len() {
        for b in a + 1..ix.len() {
            for d in b + 1..ix.len() {
                for e in d + 1..ix.len() {
                    let (i, j, k, l) = (ix[a], ix[b], ix[d], ix[e]);
                    if c.overlap(&[i, j, k, l]).is_empty() {
                        continue;
                    }
                    let delta = c.value(j, k, l)? + n - c.value(i, k, l)? + c.value(i, j, l)? + n - c.value(i, j, k)?;
                    if delta % n != 0 {
                        cocycle_violations.push((i, j, k, l));
                    }
                }
            }
        }
    }
    Ok(CechReport {
        valid: antisymmetry_violations.is_empty()
            && cocycle_violations.is_empty()
            && repeated_index_violations.is_empty(),
        antisymmetry_violations,
        repeated_index_violations,
        cocycle_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CechCoboundary {
    /// `μ_ij` for `i < j` with `λ = δμ`.
    Coboundary(BTreeMap<(u32, u32), u64>),
    /// Weights `w` on sorted triples such that `Σ w_ijk (δμ)_ijk = 0` for
    /// every `μ` while `Σ w_ijk λ_ijk = pairing != 0`.
    NotCoboundary { certificate: BTreeMap<Triple, u64>, pairing: u64 },
}

impl CechCoboundary {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CechCoboundary::Coboundary(_))
    }
}

struct CoboundarySystem {
    pairs: Vec<(u32, u32)>,
    triples: Vec<Triple>,
    matrix: Vec<Vec<u64>>,
}

fn coboundary_system(c: &CechData) -> CoboundarySystem {
    let n = c.n;
    let ix = &c.indices;
    let mut pairs = Vec::new();
    for a in 0..ix.len() {
        for b in a + 1..ix.len() {
            if !c.overlap(&[ix[a], ix[b]]).is_empty() {
                pairs.push((ix[a], ix[b]));
            }
        }
    }
    let col: HashMap<(u32, u32), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let triples = c.sorted_triples();
    let matrix = triples
        .iter()
        .map(|&(i, j, k)| {
            let mut row = vec![0u64; pairs.len()];
            for (p, coeff) in [((j, k), 1), ((i, k), n - 1), ((i, j), 1)] {
                row[col[&p]] = (row[col[&p]] + coeff) % n;
            }
            row
        })
        .collect();
    CoboundarySystem { pairs, triples, matrix }
}

/// Decides whether `λ` is the coboundary of constants `μ_ij` on the nonempty
/// pairwise overlaps. This is cohomology of the nerve with constant
/// coefficients, not of the sheaf of germs of circle-valued functions.
pub fn cech_is_coboundary(c: &CechData) -> Result<CechCoboundary, TwistError> {
    let report = verify_cech(c)?;
    if !report.valid {
        return Err(TwistError::InvalidCech("lambda is not an alternating cocycle".into()));
    }
    let sys = coboundary_system(c);
    let rhs = sys
        .triples
        .iter()
        .map(|&(i, j, k)| c.value(i, j, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match modlin::solve_mod(&sys.matrix, sys.pairs.len(), &rhs, c.n) {
        ModSolution::Solved(mu) => CechCoboundary::Coboundary(sys.pairs.into_iter().zip(mu).collect()),
        ModSolution::Inconsistent(w) => {
            let pairing = w.iter().zip(&rhs).fold(0u64, |acc, (&a, &b)| (acc + a * b) % c.n);
            CechCoboundary::NotCoboundary { certificate: sys.triples.into_iter().zip(w).collect(), pairing }
        }
    })
}

/// Number of nerve cohomology classes: alternating cocycles modulo coboundaries.
pub fn nerve_class_count(c: &CechData) -> u128 {
    let n = c.n;
    let sys = coboundary_system(c);
    let ix = &c.indices;
    // δ on triples, one row per sorted quadruple with nonempty overlap.
    let tcol: HashMap<Triple, usize> = sys.triples.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut rows = Vec::new();
    for a in 0..ix.len() {
        for b in a + 1..ix.len() {
            for d in b + 1..ix.len() {
                for e in d + 1..ix.len() {
                    let (i, j, k, l) = (ix[a], ix[b], ix[d], ix[e]);
                    if c.overlap(&[i, j, k, l]).is_empty() {
                        continue;
                    }
                    let mut row = vec![0u64; sys.triples.len()];
                    for (t, coeff) in [((j, k, l), 1), ((i, k, l), n - 1), ((i, j, l), 1), ((i, j, k), n - 1)] {
                        row[tcol[&t]] = (row[tcol[&t]] + coeff) % n;
                    }
                    rows.push(row);
                }
            }
        }
    }
    let cochains = (n as u128).pow(sys.triples.len() as u32);
    let cocycles = cochains / modlin::diagonalize(&rows, sys.triples.len(), n).image_size();
    let coboundaries = modlin::diagonalize(&sys.matrix, sys.pairs.len(), n).image_size();
    cocycles / coboundaries
}

/// The groupoid model of a Čech cocycle: a fresh point `*` is added to the
/// first cover set `U_f`, index 0 is added as a second copy of `U_f`, and
/// `Y = ⊔ U_i × {i}` is glued along `(s,i) ~ (s,j)` for `s != *`.
#[derive(Debug, Clone)]
pub struct DoubledCover {
    pub cech: CechData,
    /// The first (smallest) cover index, which index 0 copies.
    pub first: u32,
    /// Extended point names: the original points, then `*` last.
    pub points: Vec<String>,
    /// Cover indices including 0, increasing.
    pub indices: Vec<u32>,
    /// `Y` point `p` is `(points[y_points[p].0], y_points[p].1)`.
    pub y_points: Vec<(usize, u32)>,
    pub relation: RelationGroupoid,
    pub groupoid: Arc<FinGroupoid>,
    y_lookup: HashMap<(usize, u32), usize>,
}

impl DoubledCover {
    pub fn new(c: &CechData) -> Result<Self, TwistError> {
        if let Some(&i) = c.indices.iter().find(|&&i| i == 0) {
            return Err(TwistError::ReservedIndex(i));
        }
        let first = *c.indices.first().ok_or_else(|| TwistError::InvalidCech("empty cover".into()))?;
        let mut star = "*".to_string();
        while c.points.contains(&star) {
            star.push('*');
        }
        let star_pos = c.points.len();
        let mut points = c.points.clone();
        points.push(star);
        let mut indices = vec![0];
        indices.extend_from_slice(&c.indices);
        let mut y_points = Vec::new();
        for &i in &indices {
            let base = if i == 0 { first } else { i };
            let mut members: Vec<usize> = c.cover_set(base).expect("known").iter().copied().collect();
            if base == first {
                members.push(star_pos);
            }
            for s in members {
                y_points.push((s, i));
            }
        }
        let y_lookup: HashMap<(usize, u32), usize> = y_points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let y_names: Vec<String> = y_points.iter().map(|&(s, i)| format!("({},{})", points[s], i)).collect();
        let y = FinSpace::discrete(&y_names);
        // X: the original points, then the two copies of *.
        let mut x_names: Vec<String> = c.points.clone();
        x_names.push(format!("({},0)", points[star_pos]));
        x_names.push(format!("({},{})", points[star_pos], first));
        let assignment = y_points
            .iter()
            .map(|&(s, i)| match (s == star_pos, i) {
                (false, _) => s,
                (true, 0) => star_pos,
                (true, _) => star_pos + 1,
            })
            .collect();
        let psi = SpaceMap::new(y.clone(), FinSpace::discrete(&x_names), assignment)?;
        let x = psi.final_topology();
        let psi = SpaceMap::new(y, x, psi.assignment().to_vec())?;
        let props = classify_map(&psi);
        if !(props.quotient && props.local_homeomorphism) {
            return Err(TwistError::InvalidCech("doubled cover map is not a quotient local homeomorphism".into()));
        }
        let relation = build_relation_groupoid(&psi)?;
        let groupoid = Arc::new(relation.groupoid.clone());
        Ok(Self { cech: c.clone(), first, points, indices, y_points, relation, groupoid, y_lookup })
    }

    pub fn star(&self) -> usize {
        self.points.len() - 1
    }

    pub fn y_index(&self, s: usize, i: u32) -> Option<usize> {
        self.y_lookup.get(&(s, i)).copied()
    }

    /// The morphism `((s,i),(s,j))`.
    pub fn arrow(&self, s: usize, i: u32, j: u32) -> Option<usize> {
        self.relation.morphism(self.y_index(s, i)?, self.y_index(s, j)?)
    }

    /// `λ` on the extended cover, with index 0 read as the first index.
    pub fn extended_value(&self, i: u32, j: u32, k: u32) -> Result<u64, TwistError> {
        let f = |x: u32| if x == 0 { self.first } else { x };
        self.cech.value(f(i), f(j), f(k))
    }

    /// The point `s` and the index pair `(i, j)` of a morphism `((s,i),(s,j))`.
    pub fn decompose(&self, arrow: usize) -> (usize, u32, u32) {
        let (a, b) = self.relation.pairs[arrow];
        let (s, i) = self.y_points[a];
        let (_, j) = self.y_points[b];
        (s, i, j)
    }
}

/// `σ(((s,i),(s,j)), ((s,j),(s,k))) = -λ_ijk` on the doubled-cover groupoid.
pub fn cech_to_groupoid_cocycle(c: &CechData, doubled: &DoubledCover) -> Result<TwoCocycle, TwistError> {
    if c != &doubled.cech {
        return Err(TwistError::Mismatch);
    }
    let g = doubled.groupoid.clone();
    let mut entries = Vec::with_capacity(g.num_pairs());
    for (a, b, _) in g.composable_pairs() {
        let (_, i, j) = doubled.decompose(a);
        let (_, j2, k) = doubled.decompose(b);
        debug_assert_eq!(j, j2);
        entries.push((a, b, -(doubled.extended_value(i, j, k)? as i64)));
    }
    TwoCocycle::from_table(g, c.n, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::cocycle::{are_cohomologous, verify_two_cocycle};

    #[test]
    fn zero_lambda_is_valid_and_a_coboundary() {
        let c = CechData::tetrahedron_boundary(3, 0);
        assert!(verify_cech(&c).unwrap().valid);
        match cech_is_coboundary(&c).unwrap() {
            CechCoboundary::Coboundary(mu) => assert!(mu.values().all(|&v| v == 0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tetrahedron_class_is_nonzero() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let report = verify_cech(&c).unwrap();
        assert!(report.valid && report.cocycle_violations.is_empty());
        match cech_is_coboundary(&c).unwrap() {
            CechCoboundary::NotCoboundary { certificate, pairing } => {
                assert_ne!(pairing, 0);
                // The certificate is a nonzero multiple of the signed face sum.
                let w = |t: Triple| certificate[&t];
                let k = w((1, 2, 3));
                assert_ne!(k, 0);
                assert_eq!(w((1, 2, 4)), (3 - k) % 3);
                assert_eq!(w((1, 3, 4)), k);
                assert_eq!(w((2, 3, 4)), (3 - k) % 3);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(nerve_class_count(&c), 3);
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let mut entries: Vec<(Triple, i64)> = c.raw().iter().map(|(&t, &v)| (t, v as i64)).collect();
        entries.push(((2, 1, 3), 1));
        let bad = c.with_lambda(entries);
        let report = verify_cech(&bad).unwrap();
        assert!(!report.valid);
        assert!(!report.antisymmetry_violations.is_empty());
    }

    #[test]
    fn missing_triple_is_an_error() {
        let c = CechData::tetrahedron_boundary(3, 1).with_lambda(vec![((1, 2, 3), 1)]);
        assert_eq!(verify_cech(&c), Err(TwistError::MissingTriple(1, 2, 4)));
    }

    #[test]
    fn coboundary_recovers_a_witness() {
        let base = CechData::tetrahedron_boundary(5, 0);
        let mu: BTreeMap<(u32, u32), i64> =
            [((1, 2), 3), ((1, 3), 1), ((1, 4), 4), ((2, 3), 2), ((2, 4), 0), ((3, 4), 1)].into_iter().collect();
        let c = base.coboundary_of(&mu);
        assert!(verify_cech(&c).unwrap().valid);
        match cech_is_coboundary(&c).unwrap() {
            CechCoboundary::Coboundary(found) => {
                let found: BTreeMap<(u32, u32), i64> = found.into_iter().map(|(k, v)| (k, v as i64)).collect();
                assert_eq!(base.coboundary_of(&found).raw(), c.raw());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doubled_cover_cocycle() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let d = DoubledCover::new(&c).unwrap();
        assert_eq!(d.first, 1);
        let sigma = cech_to_groupoid_cocycle(&c, &d).unwrap();
        assert!(verify_two_cocycle(&sigma).valid);
        assert!(!sigma.is_trivial());
        // Nonzero entries only over the face 123, with index 0 standing for 1.
        let face = c.points().iter().position(|p| p == "123").unwrap();
        for (k, (a, b, _)) in d.groupoid.composable_pairs().enumerate() {
            if sigma.values()[k] != 0 {
                let (s, i, j) = d.decompose(a);
                let (_, _, l) = d.decompose(b);
                assert_eq!(s, face);
                let mapped: BTreeSet<u32> = [i, j, l].into_iter().map(|x| if x == 0 { 1 } else { x }).collect();
                assert_eq!(mapped, [1, 2, 3].into_iter().collect());
            }
        }
        let trivial = cech_to_groupoid_cocycle(&CechData::tetrahedron_boundary(3, 0), &DoubledCover::new(&CechData::tetrahedron_boundary(3, 0)).unwrap()).unwrap();
        assert!(trivial.is_trivial());
    }

    #[test]
    fn cohomologous_lambdas_give_cohomologous_twists() {
        let c = CechData::tetrahedron_boundary(4, 1);
        let mu: BTreeMap<(u32, u32), i64> = [((1, 2), 1), ((2, 3), 3), ((1, 4), 2)].into_iter().collect();
        let delta = c.coboundary_of(&mu);
        let sum: Vec<(Triple, i64)> = c
            .sorted_triples()
            .into_iter()
            .map(|(i, j, k)| ((i, j, k), (c.value(i, j, k).unwrap() + delta.value(i, j, k).unwrap()) as i64))
            .collect();
        let shifted = c.with_lambda(sum);
        let d1 = DoubledCover::new(&c).unwrap();
        let d2 = DoubledCover::new(&shifted).unwrap();
        let s1 = cech_to_groupoid_cocycle(&c, &d1).unwrap();
        let s2 = cech_to_groupoid_cocycle(&shifted, &d2).unwrap();
        // Same groupoid up to the Arc; rebuild s2 on d1's groupoid.
        let s2 = TwoCocycle::from_fn(d1.groupoid.clone(), 4, |a, b| s2.value(a, b) as i64);
        assert!(are_cohomologous(&s1, &s2).unwrap().is_some());
    }

    #[test]
    fn index_zero_is_reserved() {
        let c = CechData::new(2, vec!["p".into()], vec![(0, vec![0])], vec![]).unwrap();
        assert_eq!(DoubledCover::new(&c).unwrap_err(), TwistError::ReservedIndex(0));
    }

    #[test]
    fn json_round_trip() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = CechData::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
