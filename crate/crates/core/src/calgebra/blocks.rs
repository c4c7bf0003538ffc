//! Orbit-block decomposition of the twisted algebra of a principal relation
//! groupoid over a discrete space.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::element::{convolve, induced_rep, involute, reduced_norm, AlgebraElement};
use super::matrix::CMatrix;
use super::{zeta, AlgebraError, STRUCTURAL_TOL};
use crate::groupoid::RelationGroupoid;
use crate::twist::{are_cohomologous, verify_two_cocycle, OneCochain, TwoCocycle};

/// `f ↦ (M_O)_O` with `M_O[i,j] = f((y_i,y_j)) ζ^{b(y_i,y_j)}`, where the
/// `y_i` enumerate the orbit `O` and `σ = δb`. Without a witness `b` the
/// blocks carry the twisted product `(MN)_ik = Σ_j M_ij N_jk ζ^{σ(ij,jk)}`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    sigma: Arc<TwoCocycle>,
    relation: RelationGroupoid,
    /// Orbits as increasing lists of base points.
    pub orbits: Vec<Vec<usize>>,
    /// Base point `y` is entry `position[y].1` of orbit `position[y].0`.
    position: Vec<(usize, usize)>,
    pub witness: Option<OneCochain>,
    pub report: BlockReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub n: u64,
    pub block_dims: Vec<usize>,
    pub labels: Vec<String>,
    pub untwisted: bool,
    pub dimension_sum: usize,
    pub morphisms: usize,
    pub dimension_conserved: bool,
    /// Point masses go to distinct matrix units times a phase.
    pub bijective: bool,
    pub multiplicative_deviation: f64,
    pub involution_deviation: f64,
    /// Block image against `Ind_(y,y)` after the diagonal change of basis;
    /// absent for twisted blocks.
    pub induced_equivalence_deviation: Option<f64>,
    /// `|‖f‖_r - max_O ‖M_O‖|` on the all-ones element and its square.
    pub norm_deviation: f64,
    pub is_isomorphism: bool,
}

impl BlockReport {
    /// `M2 ⊕ C ⊕ C` style summary.
    pub fn summary(&self) -> String {
        self.labels.join(" ⊕ ")
    }
}

pub fn block_decompose(r: &RelationGroupoid, sigma: Arc<TwoCocycle>) -> Result<BlockDecomposition, AlgebraError> {
    if !r.base().is_discrete() {
        return Err(AlgebraError::NonDiscrete);
    }
    if **sigma.groupoid() != r.groupoid {
        return Err(AlgebraError::Mismatch);
    }
    if !verify_two_cocycle(&sigma).valid {
        return Err(AlgebraError::InvalidCocycle);
    }
    let psi = &r.psi;
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut position = vec![(0, 0); r.base().len()];
    for x in 0..psi.cod().len() {
        let fibre: Vec<usize> = psi.fibre(x).ones().collect();
        for (k, &y) in fibre.iter().enumerate() {
            position[y] = (orbits.len(), k);
        }
        orbits.push(fibre);
    }
    let trivial = TwoCocycle::trivial(sigma.groupoid().clone(), sigma.n());
    let witness = are_cohomologous(&sigma, &trivial)?;
    let mut d = BlockDecomposition {
        sigma,
        relation: r.clone(),
        orbits,
        position,
        witness,
        report: BlockReport {
            n: 0,
            block_dims: vec![],
            labels: vec![],
            untwisted: false,
            dimension_sum: 0,
            morphisms: 0,
            dimension_conserved: false,
            bijective: false,
            multiplicative_deviation: 0.0,
            involution_deviation: 0.0,
            induced_equivalence_deviation: None,
            norm_deviation: 0.0,
            is_isomorphism: false,
        },
    };
    d.report = d.verify();
    Ok(d)
}

impl BlockDecomposition {
    pub fn cocycle(&self) -> &Arc<TwoCocycle> {
        &self.sigma
    }

    pub fn relation(&self) -> &RelationGroupoid {
        &self.relation
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// Block index and matrix position of the morphism `(y,z)`.
    pub fn locate(&self, a: usize) -> (usize, usize, usize) {
        let (y, z) = self.relation.pairs[a];
        let (o, i) = self.position[y];
        (o, i, self.position[z].1)
    }

    fn phase(&self, a: usize) -> Complex64 {
        match &self.witness {
            Some(b) => zeta(self.sigma.n(), b.value(a) as i64),
            None => Complex64::new(1.0, 0.0),
        }
    }

    fn arrow(&self, o: usize, i: usize, j: usize) -> usize {
        let orbit = &self.orbits[o];
        self.relation.morphism(orbit[i], orbit[j]).expect("same orbit")
    }

    /// The image of `f` in block `o`.
    pub fn block_image(&self, o: usize, f: &AlgebraElement) -> CMatrix {
        let k = self.orbits[o].len();
        CMatrix::from_fn(k, k, |i, j| {
            let a = self.arrow(o, i, j);
            f.coeff(a) * self.phase(a)
        })
    }

    pub fn apply(&self, f: &AlgebraElement) -> Vec<CMatrix> {
        (0..self.orbits.len()).map(|o| self.block_image(o, f)).collect()
    }

    /// Product in block `o`: ordinary when untwisted, else twisted by `σ`.
    pub fn block_product(&self, o: usize, m: &CMatrix, p: &CMatrix) -> CMatrix {
        if self.witness.is_some() {
            return m * p;
        }
        let k = self.orbits[o].len();
        let n = self.sigma.n();
        CMatrix::from_fn(k, k, |i, l| {
            (0..k)
                .map(|j| {
                    let s = self.sigma.value(self.arrow(o, i, j), self.arrow(o, j, l));
                    m[(i, j)] * p[(j, l)] * zeta(n, s as i64)
                })
                .sum()
        })
    }

    /// Involution in block `o`.
    pub fn block_adjoint(&self, o: usize, m: &CMatrix) -> CMatrix {
        if self.witness.is_some() {
            return m.adjoint();
        }
        let k = self.orbits[o].len();
        let n = self.sigma.n();
        CMatrix::from_fn(k, k, |i, j| {
            let s = self.sigma.value(self.arrow(o, i, j), self.arrow(o, j, i));
            m[(j, i)].conj() * zeta(n, -(s as i64))
        })
    }

    /// `max_O ‖M_O‖`. For twisted blocks this is the norm of the induced
    /// representation at the first point of the orbit.
    pub fn norm(&self, f: &AlgebraElement) -> f64 {
        (0..self.orbits.len())
            .map(|o| {
                if self.witness.is_some() {
                    self.block_image(o, f).operator_norm()
                } else {
                    let u = self.relation.unit_at(self.orbits[o][0]);
                    induced_rep(u, f).expect("unit").matrix.operator_norm()
                }
            })
            .fold(0.0, f64::max)
    }

    fn verify(&self) -> BlockReport {
        let g = self.sigma.groupoid();
        let dims = self.block_dims();
        let dimension_sum: usize = dims.iter().map(|k| k * k).sum();
        let labels = dims
            .iter()
            .map(|&k| match (k, self.witness.is_some()) {
                (1, _) => "C".to_string(),
                (k, true) => format!("M{k}"),
                (k, false) => format!("twisted matrix block ({k})"),
            })
            .collect();
        let masses: Vec<AlgebraElement> =
            (0..g.len()).map(|a| AlgebraElement::point_mass(self.sigma.clone(), a)).collect();
        let images: Vec<CMatrix> = (0..g.len())
            .map(|a| {
                let (o, _, _) = self.locate(a);
                self.block_image(o, &masses[a])
            })
            .collect();

        // Each point mass lands on one matrix unit of its own block, with a
        // phase, and no two share a unit.
        let mut seen = std::collections::HashSet::new();
        let mut bijective = dimension_sum == g.len();
        for a in 0..g.len() {
            let (o, i, j) = self.locate(a);
            let m = &images[a];
            let single = (0..m.rows())
                .flat_map(|p| (0..m.cols()).map(move |q| (p, q)))
                .all(|(p, q)| ((p, q) == (i, j)) == (m[(p, q)].norm() > 0.5));
            bijective &= single && (m[(i, j)].norm() - 1.0).abs() < STRUCTURAL_TOL && seen.insert((o, i, j));
        }

        // Products of point masses from different orbits vanish on both sides,
        // so only pairs inside one orbit need a matrix comparison.
        let mut mult: f64 = 0.0;
        for a in 0..g.len() {
            let (o, _, _) = self.locate(a);
            for c in 0..g.len() {
                let prod = convolve(&masses[a], &masses[c]).expect("same algebra");
                if self.locate(c).0 != o {
                    mult = mult.max(prod.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max));
                    continue;
                }
                let lhs = self.block_image(o, &prod);
                let rhs = self.block_product(o, &images[a], &images[c]);
                mult = mult.max(lhs.max_abs_diff(&rhs));
            }
        }
        let mut inv: f64 = 0.0;
        for a in 0..g.len() {
            let (o, _, _) = self.locate(a);
            let lhs = self.block_image(o, &involute(&masses[a]));
            inv = inv.max(lhs.max_abs_diff(&self.block_adjoint(o, &images[a])));
        }

        // Ind at (y,y) is D·M_O·D⁻¹ with D = diag(ζ^{-b(z,y)}) over z ∈ O.
        let mut equiv: f64 = 0.0;
        let orbits = if self.witness.is_some() { &self.orbits[..] } else { &[] };
        for (o, orbit) in orbits.iter().enumerate() {
            for &y in orbit {
                let u = self.relation.unit_at(y);
                let d: Vec<Complex64> = orbit
                    .iter()
                    .map(|&z| self.phase(self.relation.morphism(z, y).expect("same orbit")).conj())
                    .collect();
                for a in orbit.iter().flat_map(|&p| orbit.iter().map(move |&q| (p, q))) {
                    let f = &masses[self.relation.morphism(a.0, a.1).expect("same orbit")];
                    let ind = induced_rep(u, f).expect("unit");
                    // Basis of s⁻¹(u) is ordered like the orbit.
                    let m = self.block_image(o, f);
                    let k = orbit.len();
                    let conj = CMatrix::from_fn(k, k, |i, j| d[i] * m[(i, j)] * d[j].conj());
                    equiv = equiv.max(ind.matrix.max_abs_diff(&conj));
                }
            }
        }

        let ones = AlgebraElement::from_coeffs(self.sigma.clone(), vec![Complex64::new(1.0, 0.0); g.len()]);
        let square = convolve(&involute(&ones), &ones).expect("same algebra");
        let norm_deviation = [ones, square]
            .iter()
            .map(|f| (reduced_norm(f) - self.norm(f)).abs())
            .fold(0.0, f64::max);

        let dimension_conserved = dimension_sum == g.len();
        BlockReport {
            n: self.sigma.n(),
            block_dims: dims,
            labels,
            untwisted: self.witness.is_some(),
            dimension_sum,
            morphisms: g.len(),
            dimension_conserved,
            bijective,
            multiplicative_deviation: mult,
            involution_deviation: inv,
            induced_equivalence_deviation: self.witness.as_ref().map(|_| equiv),
            norm_deviation,
            is_isomorphism: dimension_conserved
                && bijective
                && mult < STRUCTURAL_TOL
                && inv < STRUCTURAL_TOL
                && equiv < STRUCTURAL_TOL
                && norm_deviation < super::ACCUMULATED_TOL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{FinSpace, SpaceMap};
    use crate::groupoid::build_relation_groupoid;

    fn relation(assignment: Vec<usize>, targets: &[&str]) -> RelationGroupoid {
        let names: Vec<String> = (1..=assignment.len()).map(|i| i.to_string()).collect();
        let psi = SpaceMap::new(FinSpace::discrete(&names), FinSpace::discrete(targets), assignment).unwrap();
        build_relation_groupoid(&psi).unwrap()
    }

    #[test]
    fn two_plus_one_points() {
        let r = relation(vec![0, 0, 1], &["*", "**"]);
        let sigma = Arc::new(TwoCocycle::trivial(Arc::new(r.groupoid.clone()), 1));
        let d = block_decompose(&r, sigma.clone()).unwrap();
        assert_eq!(d.report.summary(), "M2 ⊕ C");
        assert!(d.report.is_isomorphism, "{:?}", d.report);
        let a = r.groupoid.index_of("(1,2)").unwrap();
        let images = d.apply(&AlgebraElement::point_mass(sigma, a));
        assert_eq!(images[0], CMatrix::unit(2, 0, 1, Complex64::new(1.0, 0.0)));
        assert_eq!(images[1], CMatrix::zeros(1, 1));
    }

    #[test]
    fn unit_groupoid_is_commutative() {
        let r = relation(vec![0, 1, 2], &["a", "b", "c"]);
        let sigma = Arc::new(TwoCocycle::trivial(Arc::new(r.groupoid.clone()), 2));
        let d = block_decompose(&r, sigma).unwrap();
        assert_eq!(d.report.labels, vec!["C", "C", "C"]);
        assert!(d.report.is_isomorphism);
    }

    #[test]
    fn nontrivial_coboundary_untwists() {
        let r = relation(vec![0, 0, 0], &["*"]);
        let g = Arc::new(r.groupoid.clone());
        let b = OneCochain::new(g.clone(), 4, (0..9).map(|a| if g.is_unit(a) { 0 } else { a as i64 }).collect()).unwrap();
        let sigma = Arc::new(crate::twist::coboundary_twist(&b));
        let d = block_decompose(&r, sigma).unwrap();
        assert!(d.report.untwisted && d.report.is_isomorphism, "{:?}", d.report);
    }

    #[test]
    fn rejects_non_discrete_base() {
        let psi = SpaceMap::new(FinSpace::sierpinski(), FinSpace::discrete(&["*"]), vec![0, 0]).unwrap();
        let r = build_relation_groupoid(&psi).unwrap();
        let sigma = Arc::new(TwoCocycle::trivial(Arc::new(r.groupoid.clone()), 1));
        assert_eq!(block_decompose(&r, sigma).unwrap_err(), AlgebraError::NonDiscrete);
    }
}
