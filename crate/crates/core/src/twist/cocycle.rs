use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::modlin::{self, ModSolution};
use super::TwistError;
use crate::finspace::FinSpace;
use crate::groupoid::{FinGroupoid, GroupoidError};

/// A 2-cocycle with values in `Z_n`, one residue per composable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCocycle {
    groupoid: Arc<FinGroupoid>,
    n: u64,
    values: Vec<u64>,
}

/// Wire form: `{"n": 4, "table": [["a", "b", 1], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCocycleJson {
    pub n: u64,
    pub table: Vec<(String, String, i64)>,
}

fn residue(v: i64, n: u64) -> u64 {
    v.rem_euclid(n as i64) as u64
}

impl TwoCocycle {
    pub fn trivial(groupoid: Arc<FinGroupoid>, n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let values = vec![0; groupoid.num_pairs()];
        Self { groupoid, n, values }
    }

    /// Fills the table from `f(a, b)` over all composable pairs. No cocycle
    /// check is made; see [`verify_two_cocycle`].
    pub fn from_fn(groupoid: Arc<FinGroupoid>, n: u64, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let values = groupoid.composable_pairs().map(|(a, b, _)| residue(f(a, b), n)).collect();
        Self { groupoid, n, values }
    }

    /// Builds a table that must list every composable pair exactly once.
    pub fn from_table(groupoid: Arc<FinGroupoid>, n: u64, entries: &[(usize, usize, i64)]) -> Result<Self, TwistError> {
        if n == 0 {
            return Err(TwistError::BadModulus);
        }
        let g = &groupoid;
        let names = |a: usize, b: usize| (g.name(a).to_string(), g.name(b).to_string());
        let mut values = vec![None; g.num_pairs()];
        for &(a, b, v) in entries {
            let (an, bn) = names(a, b);
            let k = g.pair_index(a, b).ok_or(TwistError::NotComposable { a: an.clone(), b: bn.clone() })?;
            if values[k].replace(residue(v, n)).is_some() {
                return Err(TwistError::DuplicateEntry { a: an, b: bn });
            }
        }
        if let Some((a, b, _)) = g.composable_pairs().zip(&values).find(|(_, v)| v.is_none()).map(|(p, _)| p) {
            let (a, b) = names(a, b);
            return Err(TwistError::MissingEntry { a, b });
        }
        let values = values.into_iter().map(|v| v.expect("checked")).collect();
        Ok(Self { groupoid, n, values })
    }

    pub fn from_json(groupoid: Arc<FinGroupoid>, json: &TwoCocycleJson) -> Result<Self, TwistError> {
        let idx = |m: &str| groupoid.index_of(m).ok_or_else(|| TwistError::UnknownMorphism(m.to_string()));
        let entries = json
            .table
            .iter()
            .map(|(a, b, v)| Ok((idx(a)?, idx(b)?, *v)))
            .collect::<Result<Vec<_>, TwistError>>()?;
        Self::from_table(groupoid.clone(), json.n, &entries)
    }

    pub fn to_json(&self) -> TwoCocycleJson {
        let g = &self.groupoid;
        let table = g
            .composable_pairs()
            .zip(&self.values)
            .map(|((a, b, _), &v)| (g.name(a).to_string(), g.name(b).to_string(), v as i64))
            .collect();
        TwoCocycleJson { n: self.n, table }
    }

    pub fn groupoid(&self) -> &Arc<FinGroupoid> {
        &self.groupoid
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `σ(a, b)`; panics if the pair is not composable.
    pub fn value(&self, a: usize, b: usize) -> u64 {
        self.values[self.groupoid.pair_index(a, b).expect("composable pair")]
    }

    /// Values in pair-index order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `-σ`, the conjugate twist.
    pub fn negated(&self) -> Self {
        let n = self.n;
        Self { values: self.values.iter().map(|&v| (n - v) % n).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TwistError> {
        self.same_setting(other)?;
        let n = self.n;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % n).collect(), ..self.clone() })
    }

    /// The same table with `delta` added at `(a, b)`.
    pub fn perturbed(&self, a: usize, b: usize, delta: i64) -> Self {
        let mut out = self.clone();
        let k = self.groupoid.pair_index(a, b).expect("composable pair");
        out.values[k] = residue(out.values[k] as i64 + delta, self.n);
        out
    }

    fn same_setting(&self, other: &Self) -> Result<(), TwistError> {
        if self.n != other.n || !(Arc::ptr_eq(&self.groupoid, &other.groupoid) || self.groupoid == other.groupoid) {
            return Err(TwistError::Mismatch);
        }
        Ok(())
    }
}

/// A `Z_n`-valued function on morphisms that vanishes on units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCochain {
    groupoid: Arc<FinGroupoid>,
    n: u64,
    values: Vec<u64>,
}

impl OneCochain {
    pub fn new(groupoid: Arc<FinGroupoid>, n: u64, values: Vec<i64>) -> Result<Self, TwistError> {
        if n == 0 {
            return Err(TwistError::BadModulus);
        }
        assert_eq!(values.len(), groupoid.len(), "one value per morphism");
        let values: Vec<u64> = values.into_iter().map(|v| residue(v, n)).collect();
        if let Some(&u) = groupoid.units().iter().find(|&&u| values[u] != 0) {
            return Err(TwistError::NonzeroOnUnit(groupoid.name(u).to_string()));
        }
        Ok(Self { groupoid, n, values })
    }

    pub fn zero(groupoid: Arc<FinGroupoid>, n: u64) -> Self {
        let len = groupoid.len();
        Self { groupoid, n, values: vec![0; len] }
    }

    pub fn value(&self, a: usize) -> u64 {
        self.values[a]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub valid: bool,
    /// Triples `(a, b, c)` where the cocycle identity fails.
    pub cocycle_violations: Vec<[String; 3]>,
    /// Pairs `(r(g), g)` or `(g, s(g))` with a nonzero value.
    pub normalization_violations: Vec<[String; 2]>,
}

/// Composable triples `(a, b, c)` where
/// `σ(a,b) + σ(ab,c) ≢ σ(b,c) + σ(a,bc)`.
pub fn cocycle_violations(sigma: &TwoCocycle) -> Vec<(usize, usize, usize)> {
    let g = sigma.groupoid();
    let n = sigma.n;
    let mut out = Vec::new();
    for (a, b, ab) in g.composable_pairs() {
        for &(c, bc) in g.composable_with(b) {
            let lhs = (sigma.value(a, b) + sigma.value(ab, c)) % n;
            let rhs = (sigma.value(b, c) + sigma.value(a, bc)) % n;
            if lhs != rhs {
                out.push((a, b, c));
            }
        }
    }
    out
}

pub fn verify_two_cocycle(sigma: &TwoCocycle) -> CocycleReport {
    let g = sigma.groupoid();
    let name = |a: usize| g.name(a).to_string();
    let cocycle_violations: Vec<[String; 3]> =
        cocycle_violations(sigma).into_iter().map(|(a, b, c)| [name(a), name(b), name(c)]).collect();
    let mut normalization_violations = Vec::new();
    for a in 0..g.len() {
        for (x, y) in [(g.range(a), a), (a, g.source(a))] {
            if sigma.value(x, y) != 0 && !normalization_violations.contains(&[name(x), name(y)]) {
                normalization_violations.push([name(x), name(y)]);
            }
        }
    }
    CocycleReport {
        valid: cocycle_violations.is_empty() && normalization_violations.is_empty(),
        cocycle_violations,
        normalization_violations,
    }
}

/// `δb(a, b) = b(a) + b(b) - b(ab)`.
pub fn coboundary_twist(b: &OneCochain) -> TwoCocycle {
    let n = b.n;
    TwoCocycle::from_fn(b.groupoid.clone(), n, |x, y| {
        let xy = b.groupoid.compose(x, y).expect("composable");
        b.values[x] as i64 + b.values[y] as i64 - b.values[xy] as i64
    })
}

/// Finds `b` with `σ₁ = σ₂ + δb`, if one exists.
pub fn are_cohomologous(s1: &TwoCocycle, s2: &TwoCocycle) -> Result<Option<OneCochain>, TwistError> {
    s1.same_setting(s2)?;
    let g = s1.groupoid();
    let n = s1.n;
    let unknowns: Vec<usize> = (0..g.len()).filter(|&a| !g.is_unit(a)).collect();
    let mut column = vec![usize::MAX; g.len()];
    for (j, &a) in unknowns.iter().enumerate() {
        column[a] = j;
    }
    let mut matrix = Vec::with_capacity(g.num_pairs());
    let mut rhs = Vec::with_capacity(g.num_pairs());
    for ((a, b, ab), k) in g.composable_pairs().zip(0..) {
        let mut row = vec![0u64; unknowns.len()];
        for (m, coeff) in [(a, 1), (b, 1), (ab, n - 1)] {
            if column[m] != usize::MAX {
                row[column[m]] = (row[column[m]] + coeff) % n;
            }
        }
        matrix.push(row);
        rhs.push((s1.values[k] + n - s2.values[k]) % n);
    }
    match modlin::solve_mod(&matrix, unknowns.len(), &rhs, n) {
        ModSolution::Solved(x) => {
            let mut values = vec![0i64; g.len()];
            for (j, &a) in unknowns.iter().enumerate() {
                values[a] = x[j] as i64;
            }
            Ok(Some(OneCochain::new(g.clone(), n, values)?))
        }
        ModSolution::Inconsistent(_) => Ok(None),
    }
}

fn extension_name(z: u64, name: &str) -> String {
    format!("({z},{name})")
}

/// Composable triples of `G` over which some triple of `G^σ` fails to
/// associate, found by multiplying out every choice of `Z_n` labels.
pub fn extension_associativity_failures(sigma: &TwoCocycle) -> Vec<(usize, usize, usize)> {
    let g = sigma.groupoid();
    let n = sigma.n;
    let mul = |(w, a): (u64, usize), (z, b): (u64, usize)| ((w + z + sigma.value(a, b)) % n, g.compose(a, b).expect("composable"));
    let mut out = Vec::new();
    for (a, b, _) in g.composable_pairs() {
        for &(c, _) in g.composable_with(b) {
            let fails = (0..n).any(|w| {
                (0..n).any(|z| (0..n).any(|y| mul(mul((w, a), (z, b)), (y, c)) != mul((w, a), mul((z, b), (y, c)))))
            });
            if fails {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// `G^σ = Z_n × G` with `(w,a)(z,b) = (w+z+σ(a,b), ab)`; morphism `(z,a)`
/// sits at position `z·|G| + a` and is named `(z,a)`.
pub fn extension_groupoid(sigma: &TwoCocycle) -> Result<FinGroupoid, GroupoidError> {
    let g = sigma.groupoid();
    let n = sigma.n;
    let m = g.len();
    let at = |z: u64, a: usize| z as usize * m + a;
    let mut names = Vec::with_capacity(n as usize * m);
    let mut sets = Vec::with_capacity(n as usize * m);
    for z in 0..n {
        for a in 0..m {
            names.push(extension_name(z, g.name(a)));
            sets.push(g.space().min_open(a).ones().map(|b| at(z, b)).collect::<Vec<_>>());
        }
    }
    let space = FinSpace::new(names, sets)?;
    let units = g.units().iter().map(|&u| at(0, u)).collect();
    let mut range = Vec::with_capacity(space.len());
    let mut source = Vec::with_capacity(space.len());
    let mut inverse = Vec::with_capacity(space.len());
    for z in 0..n {
        for a in 0..m {
            range.push(at(0, g.range(a)));
            source.push(at(0, g.source(a)));
            let inv = g.inverse(a);
            inverse.push(at((2 * n - z - sigma.value(a, inv)) % n, inv));
        }
    }
    let mut compose = Vec::new();
    for (a, b, ab) in g.composable_pairs() {
        let s = sigma.value(a, b);
        for w in 0..n {
            for z in 0..n {
                compose.push((at(w, a), at(z, b), at((w + z + s) % n, ab)));
            }
        }
    }
    FinGroupoid::new(space, units, range, source, inverse, compose)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::SpaceMap;
    use crate::groupoid::build_relation_groupoid;

    fn pair_groupoid(k: usize) -> Arc<FinGroupoid> {
        let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let psi = SpaceMap::new(FinSpace::discrete(&names), FinSpace::discrete(&["*"]), vec![0; k]).unwrap();
        Arc::new(build_relation_groupoid(&psi).unwrap().groupoid)
    }

    fn idx(g: &FinGroupoid, name: &str) -> usize {
        g.index_of(name).unwrap()
    }

    #[test]
    fn trivial_cocycle_is_valid() {
        assert!(verify_two_cocycle(&TwoCocycle::trivial(pair_groupoid(3), 5)).valid);
    }

    #[test]
    fn coboundary_example_on_pair_groupoid() {
        let g = pair_groupoid(2);
        let mut values = vec![0; g.len()];
        values[idx(&g, "(1,2)")] = 1;
        values[idx(&g, "(2,1)")] = 3;
        let b = OneCochain::new(g.clone(), 4, values).unwrap();
        let sigma = coboundary_twist(&b);
        assert_eq!(sigma.value(idx(&g, "(1,2)"), idx(&g, "(2,1)")), 0);
        assert!(verify_two_cocycle(&sigma).valid);
        assert!(coboundary_twist(&OneCochain::zero(g, 4)).is_trivial());
    }

    #[test]
    fn cochain_nonzero_on_unit_is_rejected() {
        let g = pair_groupoid(2);
        let mut values = vec![0; g.len()];
        values[idx(&g, "(1,1)")] = 2;
        assert!(matches!(OneCochain::new(g, 4, values), Err(TwistError::NonzeroOnUnit(_))));
    }

    #[test]
    fn perturbation_is_reported() {
        let g = pair_groupoid(2);
        let (a, b) = (idx(&g, "(1,2)"), idx(&g, "(2,1)"));
        let sigma = TwoCocycle::trivial(g.clone(), 3).perturbed(a, b, 1);
        let report = verify_two_cocycle(&sigma);
        assert!(!report.valid);
        assert!(report.cocycle_violations.iter().any(|t| t[0] == "(1,2)" && t[1] == "(2,1)"));
    }

    #[test]
    fn missing_table_entry() {
        let g = pair_groupoid(2);
        let err = TwoCocycle::from_table(g, 3, &[(0, 0, 0)]).unwrap_err();
        assert!(matches!(err, TwistError::MissingEntry { .. }));
    }

    #[test]
    fn cohomologous_to_itself_with_zero_witness() {
        let g = pair_groupoid(3);
        let sigma = TwoCocycle::trivial(g, 6);
        let b = are_cohomologous(&sigma, &sigma).unwrap().unwrap();
        assert!(b.values().iter().all(|&v| v == 0));
    }

    #[test]
    fn extension_of_trivial_twist_is_direct_product() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::trivial(g.clone(), 2);
        let ext = extension_groupoid(&sigma).unwrap();
        assert_eq!(ext.len(), 8);
        let a = ext.index_of("(1,(1,2))").unwrap();
        let b = ext.index_of("(1,(2,1))").unwrap();
        assert_eq!(ext.name(ext.compose(a, b).unwrap()), "(0,(1,1))");
    }

    #[test]
    fn broken_cocycle_breaks_extension() {
        let g = pair_groupoid(3);
        let (a, b) = (idx(&g, "(1,2)"), idx(&g, "(2,3)"));
        let sigma = TwoCocycle::trivial(g, 3).perturbed(a, b, 1);
        let err = extension_groupoid(&sigma).unwrap_err();
        assert!(matches!(err, GroupoidError::Associativity { .. } | GroupoidError::UnitLaw(_) | GroupoidError::InverseLaw(_)));
        assert_eq!(extension_associativity_failures(&sigma), cocycle_violations(&sigma));
    }

    #[test]
    fn json_round_trip() {
        let g = pair_groupoid(2);
        let sigma = TwoCocycle::from_fn(g.clone(), 5, |a, b| (a * 3 + b) as i64);
        let back = TwoCocycle::from_json(g, &sigma.to_json()).unwrap();
        assert_eq!(back, sigma);
    }
}
