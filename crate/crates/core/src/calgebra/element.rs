use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use super::{zeta, AlgebraError};
use crate::groupoid::FinGroupoid;
use crate::twist::TwoCocycle;

/// A function on the morphisms of a groupoid, multiplied by twisted
/// convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    cocycle: Arc<TwoCocycle>,
    coeffs: Vec<Complex64>,
}

/// Wire form: `{"coeffs": [["(1,2)", 1.0, 0.0], ...]}`; absent morphisms are 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraElementJson {
    pub coeffs: Vec<(String, f64, f64)>,
}

impl AlgebraElement {
    pub fn zero(cocycle: Arc<TwoCocycle>) -> Self {
        let len = cocycle.groupoid().len();
        Self { cocycle, coeffs: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn from_coeffs(cocycle: Arc<TwoCocycle>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), cocycle.groupoid().len(), "one coefficient per morphism");
        Self { cocycle, coeffs }
    }

    /// The characteristic function of a single morphism.
    pub fn point_mass(cocycle: Arc<TwoCocycle>, a: usize) -> Self {
        let mut f = Self::zero(cocycle);
        f.coeffs[a] = Complex64::new(1.0, 0.0);
        f
    }

    /// `Σ_u χ_u`, the unit of the algebra.
    pub fn identity(cocycle: Arc<TwoCocycle>) -> Self {
        let mut f = Self::zero(cocycle.clone());
        for &u in cocycle.groupoid().units() {
            f.coeffs[u] = Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn from_json(cocycle: Arc<TwoCocycle>, json: &AlgebraElementJson) -> Result<Self, AlgebraError> {
        let mut f = Self::zero(cocycle);
        for (name, re, im) in &json.coeffs {
            let a = f.groupoid().index_of(name).ok_or_else(|| AlgebraError::UnknownMorphism(name.clone()))?;
            f.coeffs[a] += Complex64::new(*re, *im);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> AlgebraElementJson {
        let g = self.groupoid();
        AlgebraElementJson {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() != 0.0)
                .map(|(a, c)| (g.name(a).to_string(), c.re, c.im))
                .collect(),
        }
    }

    pub fn cocycle(&self) -> &Arc<TwoCocycle> {
        &self.cocycle
    }

    pub fn groupoid(&self) -> &FinGroupoid {
        self.cocycle.groupoid()
    }

    pub fn coeff(&self, a: usize) -> Complex64 {
        self.coeffs[a]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn set(&mut self, a: usize, c: Complex64) {
        self.coeffs[a] = c;
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.cocycle, &other.cocycle) || self.cocycle == other.cocycle {
            Ok(())
        } else {
            Err(AlgebraError::Mismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { cocycle: self.cocycle.clone(), coeffs })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { cocycle: self.cocycle.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&a| self.coeffs[a].norm() != 0.0).collect()
    }
}

/// `(f*g)(α) = Σ_{r(β)=r(α)} f(β) g(β⁻¹α) ζ^{σ(β, β⁻¹α)}`.
///
/// Each term is indexed by the composable pair `(β, β⁻¹α)`, so the sum runs
/// over pairs whose first entry lies in the support of `f`.
pub fn convolve(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    f.check_same(g)?;
    let sigma = &f.cocycle;
    let groupoid = sigma.groupoid();
    let n = sigma.n();
    let mut out = AlgebraElement::zero(sigma.clone());
    for b in f.support() {
        let x = f.coeffs[b];
        for &(c, bc) in groupoid.composable_with(b) {
            let y = g.coeffs[c];
            if y.norm() != 0.0 {
                out.coeffs[bc] += x * y * zeta(n, sigma.value(b, c) as i64);
            }
        }
    }
    Ok(out)
}

/// `f*(α) = conj(f(α⁻¹)) · ζ^{-σ(α, α⁻¹)}`.
pub fn involute(f: &AlgebraElement) -> AlgebraElement {
    let sigma = &f.cocycle;
    let g = sigma.groupoid();
    let coeffs = (0..g.len())
        .map(|a| {
            let inv = g.inverse(a);
            f.coeffs[inv].conj() * zeta(sigma.n(), -(sigma.value(a, inv) as i64))
        })
        .collect();
    AlgebraElement { cocycle: sigma.clone(), coeffs }
}

/// `Ind_u(f)` on `ℓ²(s⁻¹(u))`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedRep {
    pub unit: usize,
    /// `s⁻¹(u)` in increasing order.
    pub basis: Vec<usize>,
    pub matrix: CMatrix,
}

/// Builds `Ind_u(f)` column by column, applying
/// `(Ind_u(f)ξ)(α) = Σ_{r(β)=r(α)} f(β) ξ(β⁻¹α) ζ^{σ(β, β⁻¹α)}`
/// to each point mass `ξ = e_{α'}`.
pub fn induced_rep(u: usize, f: &AlgebraElement) -> Result<InducedRep, AlgebraError> {
    let sigma = &f.cocycle;
    let g = sigma.groupoid();
    if u >= g.len() || !g.is_unit(u) {
        return Err(AlgebraError::NotAUnit(if u < g.len() { g.name(u).to_string() } else { format!("#{u}") }));
    }
    let basis = g.source_fibre(u);
    let n = sigma.n();
    let mut matrix = CMatrix::zeros(basis.len(), basis.len());
    for (col, &a_prime) in basis.iter().enumerate() {
        for (row, &alpha) in basis.iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            for beta in g.range_fibre(g.range(alpha)) {
                let rest = g.compose(g.inverse(beta), alpha).expect("r(β) = r(α)");
                if rest == a_prime {
                    sum += f.coeffs[beta] * zeta(n, sigma.value(beta, rest) as i64);
                }
            }
            matrix[(row, col)] = sum;
        }
    }
    Ok(InducedRep { unit: u, basis, matrix })
}

/// `M[α, α'] = f(αα'⁻¹) ζ^{σ(αα'⁻¹, α')}`, the closed form of [`induced_rep`].
pub fn induced_rep_closed_form(u: usize, f: &AlgebraElement) -> Result<InducedRep, AlgebraError> {
    let sigma = &f.cocycle;
    let g = sigma.groupoid();
    if u >= g.len() || !g.is_unit(u) {
        return Err(AlgebraError::NotAUnit(format!("#{u}")));
    }
    let basis = g.source_fibre(u);
    let matrix = CMatrix::from_fn(basis.len(), basis.len(), |i, j| {
        let (alpha, alpha_prime) = (basis[i], basis[j]);
        let gamma = g.compose(alpha, g.inverse(alpha_prime)).expect("same source");
        f.coeffs[gamma] * zeta(sigma.n(), sigma.value(gamma, alpha_prime) as i64)
    });
    Ok(InducedRep { unit: u, basis, matrix })
}

/// Unit orbits of a groupoid, each listed as increasing unit morphisms.
pub fn unit_orbits(g: &FinGroupoid) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut orbits = Vec::new();
    for &u in g.units() {
        if seen[u] {
            continue;
        }
        let mut orbit: Vec<usize> = g.source_fibre(u).into_iter().map(|a| g.range(a)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &v in &orbit {
            seen[v] = true;
        }
        orbits.push(orbit);
    }
    orbits
}

/// `‖f‖_r = max_u ‖Ind_u(f)‖`, taking one unit per orbit: induced
/// representations at units of the same orbit are unitarily equivalent.
pub fn reduced_norm(f: &AlgebraElement) -> f64 {
    unit_orbits(f.groupoid())
        .iter()
        .map(|orbit| induced_rep(orbit[0], f).expect("unit").matrix.operator_norm())
        .fold(0.0, f64::max)
}

/// The same maximum taken over every unit.
pub fn reduced_norm_all_units(f: &AlgebraElement) -> f64 {
    f.groupoid()
        .units()
        .iter()
        .map(|&u| induced_rep(u, f).expect("unit").matrix.operator_norm())
        .fold(0.0, f64::max)
}
