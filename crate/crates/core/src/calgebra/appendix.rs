//! Equivariant functions on the extension groupoid `G^σ = Z_n × G` against
//! the twisted algebra of `G`.
//!
//! An equivariant `F` satisfies `F(z,α) = ζ^z F(0,α)` and is stored by its
//! `z = 0` slice. Convolution on `G^σ` is untwisted and averaged over `Z_n`:
//! `(F*H)(x) = (1/n) Σ_{r(y)=r(x)} F(y) H(y⁻¹x)`, with `F*(x) = conj F(x⁻¹)`.
//! The slice map `ρ(F) = F(0,·)` should then be a *-isomorphism onto the
//! algebra twisted by `-σ`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::element::{convolve, induced_rep, involute, AlgebraElement};
use super::matrix::CMatrix;
use super::{zeta, AlgebraError, STRUCTURAL_TOL};
use crate::groupoid::FinGroupoid;
use crate::twist::{extension_groupoid, verify_two_cocycle, TwoCocycle};

pub const MAX_EXTENSION_SIZE: usize = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AppendixOptions {
    /// Compare against `σ` instead of `-σ` (fault injection).
    pub drop_conjugation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixReport {
    pub n: u64,
    pub morphisms: usize,
    pub extension_morphisms: usize,
    /// `"conjugate"` or, under fault injection, `"original"`.
    pub compared_cocycle: String,
    /// Slice and equivariant extension are mutually inverse.
    pub rho_bijective: bool,
    /// Products and adjoints of equivariant functions stay equivariant.
    pub equivariance_preserved: bool,
    pub rho_multiplicative_deviation: f64,
    pub rho_involution_deviation: f64,
    /// First composable pair where `ρ` fails to be multiplicative.
    pub first_failing_pair: Option<(String, String)>,
    /// `L^u` against `Ind_u(ρ·)` under `U(g) = g(0,·)`, over all units.
    pub induced_equivalence_deviation: f64,
    /// Whether the fault run can differ at all: some `2σ(a,b) != 0`.
    pub fault_detectable: bool,
    /// Composable pair exposing the fault run, when it fails.
    pub fault_detected_at: Option<(String, String)>,
    pub holds: bool,
}

struct Extension {
    base: Arc<FinGroupoid>,
    n: u64,
    /// Untwisted algebra of `G^σ`.
    algebra: Arc<TwoCocycle>,
}

impl Extension {
    fn at(&self, z: u64, a: usize) -> usize {
        z as usize * self.base.len() + a
    }

    fn extend(&self, slice: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.algebra.clone());
        for z in 0..self.n {
            for a in 0..self.base.len() {
                out.set(self.at(z, a), zeta(self.n, z as i64) * slice.coeff(a));
            }
        }
        out
    }

    fn slice(&self, f: &AlgebraElement, target: &Arc<TwoCocycle>) -> AlgebraElement {
        let coeffs = (0..self.base.len()).map(|a| f.coeff(self.at(0, a))).collect();
        AlgebraElement::from_coeffs(target.clone(), coeffs)
    }

    fn is_equivariant(&self, f: &AlgebraElement) -> bool {
        (0..self.n).all(|z| {
            (0..self.base.len()).all(|a| {
                (f.coeff(self.at(z, a)) - zeta(self.n, z as i64) * f.coeff(self.at(0, a))).norm() < STRUCTURAL_TOL
            })
        })
    }

    fn product(&self, f: &AlgebraElement, h: &AlgebraElement) -> AlgebraElement {
        convolve(f, h).expect("same algebra").scale(Complex64::new(1.0 / self.n as f64, 0.0))
    }
}

struct Comparison {
    multiplicative: f64,
    involution: f64,
    failing_pair: Option<(usize, usize)>,
    induced: f64,
    equivariant: bool,
}

fn compare(ext: &Extension, target: &Arc<TwoCocycle>) -> Result<Comparison, AlgebraError> {
    let g = &ext.base;
    let slices: Vec<AlgebraElement> = (0..g.len()).map(|a| AlgebraElement::point_mass(target.clone(), a)).collect();
    let lifts: Vec<AlgebraElement> = slices.iter().map(|s| ext.extend(s)).collect();
    let mut multiplicative: f64 = 0.0;
    let mut failing_pair = None;
    let mut equivariant = true;
    for a in 0..g.len() {
        for c in 0..g.len() {
            let prod = ext.product(&lifts[a], &lifts[c]);
            equivariant &= ext.is_equivariant(&prod);
            let dev = ext.slice(&prod, target).max_abs_diff(&convolve(&slices[a], &slices[c])?);
            if dev >= STRUCTURAL_TOL && failing_pair.is_none() {
                failing_pair = Some((a, c));
            }
            multiplicative = multiplicative.max(dev);
        }
    }
    let mut involution: f64 = 0.0;
    for a in 0..g.len() {
        let adj = involute(&lifts[a]);
        equivariant &= ext.is_equivariant(&adj);
        involution = involution.max(ext.slice(&adj, target).max_abs_diff(&involute(&slices[a])));
    }

    // H_u has orthonormal basis E_α = extend(δ_α), α ∈ s⁻¹(u), and
    // [L^u(F)]_{α,α'} = (F*E_α')(0,α).
    let mut induced: f64 = 0.0;
    for &u in g.units() {
        for a in 0..g.len() {
            let ind = induced_rep(u, &slices[a])?;
            let k = ind.basis.len();
            let columns: Vec<AlgebraElement> =
                ind.basis.iter().map(|&b| ext.product(&lifts[a], &lifts[b])).collect();
            for col in &columns {
                // F*E_α' stays inside H_u.
                let leaked = (0..g.len())
                    .filter(|&b| g.source(b) != u)
                    .map(|b| col.coeff(ext.at(0, b)).norm())
                    .fold(0.0, f64::max);
                induced = induced.max(leaked);
            }
            let l = CMatrix::from_fn(k, k, |i, j| columns[j].coeff(ext.at(0, ind.basis[i])));
            induced = induced.max(l.max_abs_diff(&ind.matrix));
        }
    }
    Ok(Comparison { multiplicative, involution, failing_pair, induced, equivariant })
}

pub fn appendix_a_suite(
    g: &Arc<FinGroupoid>,
    sigma: &TwoCocycle,
    options: AppendixOptions,
) -> Result<AppendixReport, AlgebraError> {
    if **sigma.groupoid() != **g {
        return Err(AlgebraError::Mismatch);
    }
    if !g.is_principal() {
        return Err(AlgebraError::NonPrincipal);
    }
    if !g.space().is_discrete() {
        return Err(AlgebraError::NonDiscrete);
    }
    let size = sigma.n() as usize * g.len();
    if size > MAX_EXTENSION_SIZE {
        return Err(AlgebraError::SizeCap { what: "|Z_n × G|", size, cap: MAX_EXTENSION_SIZE });
    }
    if !verify_two_cocycle(sigma).valid {
        return Err(AlgebraError::InvalidCocycle);
    }
    let n = sigma.n();
    let extended = Arc::new(extension_groupoid(sigma)?);
    let ext = Extension { base: g.clone(), n, algebra: Arc::new(TwoCocycle::trivial(extended.clone(), 1)) };

    let conjugate = Arc::new(sigma.negated());
    let original = Arc::new(sigma.clone());
    let (main_target, compared) =
        if options.drop_conjugation { (&original, "original") } else { (&conjugate, "conjugate") };

    let rho_bijective = (0..g.len()).all(|a| {
        let slice = AlgebraElement::point_mass(main_target.clone(), a);
        let lift = ext.extend(&slice);
        ext.is_equivariant(&lift) && ext.slice(&lift, main_target) == slice
    });
    let main = compare(&ext, main_target)?;
    let fault = compare(&ext, &original)?;
    let fault_detectable = sigma.values().iter().any(|&v| (2 * v) % n != 0);
    let name = |(a, c): (usize, usize)| (g.name(a).to_string(), g.name(c).to_string());
    let holds = rho_bijective
        && main.equivariant
        && main.multiplicative < STRUCTURAL_TOL
        && main.involution < STRUCTURAL_TOL
        && main.induced < STRUCTURAL_TOL;
    Ok(AppendixReport {
        n,
        morphisms: g.len(),
        extension_morphisms: extended.len(),
        compared_cocycle: compared.to_string(),
        rho_bijective,
        equivariance_preserved: main.equivariant,
        rho_multiplicative_deviation: main.multiplicative,
        rho_involution_deviation: main.involution,
        first_failing_pair: main.failing_pair.map(name),
        induced_equivalence_deviation: main.induced,
        fault_detectable,
        fault_detected_at: fault.failing_pair.map(name),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{FinSpace, SpaceMap};
    use crate::groupoid::build_relation_groupoid;
    use crate::twist::{coboundary_twist, OneCochain};

    fn pair(k: usize) -> Arc<FinGroupoid> {
        let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let psi = SpaceMap::new(FinSpace::discrete(&names), FinSpace::discrete(&["*"]), vec![0; k]).unwrap();
        Arc::new(build_relation_groupoid(&psi).unwrap().groupoid)
    }

    #[test]
    fn trivial_twist_on_two_points() {
        let g = pair(2);
        let sigma = TwoCocycle::trivial(g.clone(), 2);
        let r = appendix_a_suite(&g, &sigma, AppendixOptions::default()).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.rho_multiplicative_deviation, 0.0);
        assert!(!r.fault_detectable);
    }

    #[test]
    fn coboundary_on_three_points() {
        let g = pair(3);
        let values = (0..g.len()).map(|a| if g.is_unit(a) { 0 } else { (a * 3 + 1) as i64 }).collect();
        let sigma = coboundary_twist(&OneCochain::new(g.clone(), 4, values).unwrap());
        let r = appendix_a_suite(&g, &sigma, AppendixOptions::default()).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.induced_equivalence_deviation < 1e-12);
        assert!(r.fault_detectable);
        assert!(r.fault_detected_at.is_some());

        let faulty = appendix_a_suite(&g, &sigma, AppendixOptions { drop_conjugation: true }).unwrap();
        assert!(!faulty.holds);
        assert!(faulty.first_failing_pair.is_some());
    }
}
