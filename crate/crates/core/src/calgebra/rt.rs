//! The algebra `A(U,λ)` of a Čech-twisted cover: at each point `s`, matrices
//! indexed by the cover sets containing `s`, with product
//! `(fg)_il(s) = Σ_j ζ^{-λ_ijl} f_ij(s) g_jl(s)` and `(f*)_ij = conj f_ji`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::element::{convolve, induced_rep, involute, AlgebraElement};
use super::matrix::CMatrix;
use super::{zeta, AlgebraError, STRUCTURAL_TOL};
use crate::twist::{
    cech_is_coboundary, cech_to_groupoid_cocycle, verify_cech, verify_two_cocycle, CechCoboundary, CechData,
    DoubledCover, Triple,
};

pub const MAX_RT_POINTS: usize = 32;
/// Cover sets containing a single point.
pub const MAX_RT_FIBRE: usize = 8;

#[derive(Debug, Clone)]
pub struct RtModel {
    cech: CechData,
    /// `I_s`: the cover indices containing point `s`, increasing.
    fibres: Vec<Vec<u32>>,
    /// `λ` on positions of `I_s`, flattened `k×k×k`.
    lambda: Vec<Vec<u64>>,
}

/// One `|I_s|×|I_s|` matrix per point.
#[derive(Debug, Clone, PartialEq)]
pub struct RtElement {
    pub blocks: Vec<CMatrix>,
}

impl RtElement {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }
}

impl RtModel {
    pub fn new(c: &CechData) -> Result<Self, AlgebraError> {
        if !verify_cech(c)?.valid {
            return Err(AlgebraError::InvalidModel("lambda is not an alternating Čech cocycle".into()));
        }
        let fibres: Vec<Vec<u32>> = (0..c.points().len())
            .map(|s| c.indices().iter().copied().filter(|&i| c.cover_set(i).expect("known").contains(&s)).collect())
            .collect();
        let mut lambda = Vec::with_capacity(fibres.len());
        for fibre in &fibres {
            let mut table = Vec::with_capacity(fibre.len().pow(3));
            for &i in fibre {
                for &j in fibre {
                    for &k in fibre {
                        table.push(c.value(i, j, k)?);
                    }
                }
            }
            lambda.push(table);
        }
        Ok(Self { cech: c.clone(), fibres, lambda })
    }

    pub fn cech(&self) -> &CechData {
        &self.cech
    }

    pub fn fibre(&self, s: usize) -> &[u32] {
        &self.fibres[s]
    }

    fn lam(&self, s: usize, a: usize, b: usize, c: usize) -> u64 {
        let k = self.fibres[s].len();
        self.lambda[s][(a * k + b) * k + c]
    }

    fn position(&self, s: usize, i: u32) -> Option<usize> {
        self.fibres[s].binary_search(&i).ok()
    }

    /// `Σ_s |I_s|²`.
    pub fn dimension(&self) -> usize {
        self.fibres.iter().map(|f| f.len() * f.len()).sum()
    }

    pub fn zero(&self) -> RtElement {
        RtElement { blocks: self.fibres.iter().map(|f| CMatrix::zeros(f.len(), f.len())).collect() }
    }

    /// The element with `f_ij(s) = 1` and all other entries 0.
    pub fn unit(&self, s: usize, i: u32, j: u32) -> Option<RtElement> {
        let (a, b) = (self.position(s, i)?, self.position(s, j)?);
        let mut f = self.zero();
        f.blocks[s][(a, b)] = Complex64::new(1.0, 0.0);
        Some(f)
    }

    pub fn product(&self, f: &RtElement, g: &RtElement) -> RtElement {
        let n = self.cech.n();
        let blocks = (0..self.fibres.len())
            .map(|s| {
                let k = self.fibres[s].len();
                let (x, y) = (&f.blocks[s], &g.blocks[s]);
                CMatrix::from_fn(k, k, |i, l| {
                    (0..k).map(|j| x[(i, j)] * y[(j, l)] * zeta(n, -(self.lam(s, i, j, l) as i64))).sum()
                })
            })
            .collect();
        RtElement { blocks }
    }

    pub fn adjoint(&self, f: &RtElement) -> RtElement {
        RtElement { blocks: f.blocks.iter().map(CMatrix::adjoint).collect() }
    }

    /// `π_{i,s}(f)_jk = ζ^{-λ_ijk} f_jk(s)` on `ℓ²(I_s)`.
    pub fn pi(&self, i: u32, s: usize, f: &RtElement) -> Option<CMatrix> {
        let a = self.position(s, i)?;
        let k = self.fibres[s].len();
        let n = self.cech.n();
        Some(CMatrix::from_fn(k, k, |j, l| f.blocks[s][(j, l)] * zeta(n, -(self.lam(s, a, j, l) as i64))))
    }

    /// `sup_{i,s} ‖π_{i,s}(f)‖`.
    pub fn norm(&self, f: &RtElement) -> f64 {
        let mut best: f64 = 0.0;
        for s in 0..self.fibres.len() {
            for &i in &self.fibres[s] {
                best = best.max(self.pi(i, s, f).expect("i ∈ I_s").operator_norm());
            }
        }
        best
    }

    /// Checks the *-algebra axioms and the representations `π_{i,s}` on
    /// matrix units.
    pub fn verify(&self) -> RtAxioms {
        let n = self.cech.n();
        let mut product: f64 = 0.0;
        let mut assoc: f64 = 0.0;
        let mut inv: f64 = 0.0;
        let mut rep: f64 = 0.0;
        let mut unit_norm: f64 = 0.0;
        for s in 0..self.fibres.len() {
            let fibre = &self.fibres[s];
            let k = fibre.len();
            let e = |a: usize, b: usize| self.unit(s, fibre[a], fibre[b]).expect("in fibre");
            for a in 0..k {
                for b in 0..k {
                    let x = e(a, b);
                    inv = inv.max(self.adjoint(&self.adjoint(&x)).max_abs_diff(&x));
                    unit_norm = unit_norm.max((self.norm(&x) - 1.0).abs());
                    for &i in fibre {
                        let lhs = self.pi(i, s, &self.adjoint(&x)).expect("i ∈ I_s");
                        rep = rep.max(lhs.max_abs_diff(&self.pi(i, s, &x).expect("i ∈ I_s").adjoint()));
                    }
                    for c in 0..k {
                        for d in 0..k {
                            let y = e(c, d);
                            let xy = self.product(&x, &y);
                            // E_ab E_cd = δ_bc ζ^{-λ_abd} E_ad.
                            let mut expected = self.zero();
                            if b == c {
                                expected.blocks[s][(a, d)] = zeta(n, -(self.lam(s, a, b, d) as i64));
                            }
                            product = product.max(xy.max_abs_diff(&expected));
                            let yx_star = self.product(&self.adjoint(&y), &self.adjoint(&x));
                            inv = inv.max(self.adjoint(&xy).max_abs_diff(&yx_star));
                            if b != c {
                                // Both sides of the remaining checks vanish
                                // once the product above is zero.
                                continue;
                            }
                            for &i in fibre {
                                let lhs = self.pi(i, s, &xy).expect("i ∈ I_s");
                                let rhs = &self.pi(i, s, &x).expect("i ∈ I_s") * &self.pi(i, s, &y).expect("i ∈ I_s");
                                rep = rep.max(lhs.max_abs_diff(&rhs));
                            }
                            for f in 0..k {
                                let z = e(d, f);
                                let left = self.product(&xy, &z);
                                let right = self.product(&x, &self.product(&y, &z));
                                assoc = assoc.max(left.max_abs_diff(&right));
                            }
                        }
                    }
                }
            }
        }
        RtAxioms {
            product_deviation: product,
            associativity_deviation: assoc,
            involution_deviation: inv,
            representation_deviation: rep,
            unit_norm_deviation: unit_norm,
            holds: [product, assoc, inv, rep, unit_norm].iter().all(|&d| d < STRUCTURAL_TOL),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RtAxioms {
    /// Products of matrix units against their closed form.
    pub product_deviation: f64,
    pub associativity_deviation: f64,
    pub involution_deviation: f64,
    /// `π_{i,s}` multiplicative and *-preserving.
    pub representation_deviation: f64,
    /// `|‖E_ij(s)‖ - 1|`.
    pub unit_norm_deviation: f64,
    pub holds: bool,
}

/// Comparison of the doubled-cover groupoid algebra with `A(V,λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubledRtReport {
    pub star: String,
    pub first_index: u32,
    pub morphisms: usize,
    pub cocycle_valid: bool,
    /// `π₀(f) = f((*,0),(*,0))` is multiplicative, *-preserving and nonzero.
    pub pi0_character: bool,
    pub kernel_dimension: usize,
    pub target_dimension: usize,
    pub target_axioms: RtAxioms,
    pub phi_bijective: bool,
    pub phi_multiplicative_deviation: f64,
    pub phi_involution_deviation: f64,
    /// `π_{i,s}∘φ` against `Ind_(s,i)` under `e_((s,j),(s,i)) ↦ e_j`.
    pub induced_match_deviation: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RtReport {
    pub n: u64,
    pub points: usize,
    pub indices: Vec<u32>,
    /// `|I_s|` per point name.
    pub block_dims: BTreeMap<String, usize>,
    pub dimension: usize,
    pub axioms: RtAxioms,
    pub twist_class: String,
    pub certificate: Option<BTreeMap<String, u64>>,
    pub doubled: DoubledRtReport,
    pub holds: bool,
}

fn triple_key((i, j, k): Triple) -> String {
    format!("{i},{j},{k}")
}

/// The cover `V`: `V_0` a copy of `U_f` and `V_f = U_f ∪ {*}`, over the
/// original points followed by `*`, with `λ` read through `0 ↦ f`.
fn doubled_target(dc: &DoubledCover) -> Result<CechData, AlgebraError> {
    let c = &dc.cech;
    let star = dc.star();
    let cover: Vec<(u32, Vec<usize>)> = dc
        .indices
        .iter()
        .map(|&i| {
            let base = if i == 0 { dc.first } else { i };
            let mut set: Vec<usize> = c.cover_set(base).expect("known").iter().copied().collect();
            if i == dc.first {
                set.push(star);
            }
            (i, set)
        })
        .collect();
    let v = CechData::new(c.n(), dc.points.clone(), cover, vec![])?;
    let lambda = v
        .sorted_triples()
        .into_iter()
        .map(|(i, j, k)| Ok(((i, j, k), dc.extended_value(i, j, k)? as i64)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(v.with_lambda(lambda))
}

fn doubled_report(c: &CechData) -> Result<DoubledRtReport, AlgebraError> {
    let dc = DoubledCover::new(c)?;
    let sigma = Arc::new(cech_to_groupoid_cocycle(c, &dc)?);
    let g = dc.groupoid.clone();
    let cocycle_valid = verify_two_cocycle(&sigma).valid;
    let star = dc.star();
    let base = dc.arrow(star, 0, 0).expect("(*,0) exists");
    let masses: Vec<AlgebraElement> = (0..g.len()).map(|a| AlgebraElement::point_mass(sigma.clone(), a)).collect();

    let pi0 = |f: &AlgebraElement| f.coeff(base);
    let mut pi0_character = pi0(&AlgebraElement::identity(sigma.clone())).norm() > 0.5;
    for a in 0..g.len() {
        pi0_character &= (pi0(&involute(&masses[a])) - pi0(&masses[a]).conj()).norm() < STRUCTURAL_TOL;
        for c2 in 0..g.len() {
            let prod = convolve(&masses[a], &masses[c2])?;
            pi0_character &= (pi0(&prod) - pi0(&masses[a]) * pi0(&masses[c2])).norm() < STRUCTURAL_TOL;
        }
    }

    let target = RtModel::new(&doubled_target(&dc)?)?;
    let target_axioms = target.verify();
    let phi = |f: &AlgebraElement| -> RtElement {
        let mut out = target.zero();
        for s in 0..dc.points.len() {
            let fibre = target.fibre(s);
            for (a, &i) in fibre.iter().enumerate() {
                for (b, &j) in fibre.iter().enumerate() {
                    out.blocks[s][(a, b)] = f.coeff(dc.arrow(s, i, j).expect("both copies exist"));
                }
            }
        }
        out
    };
    let kernel: Vec<usize> = (0..g.len()).filter(|&a| a != base).collect();
    let images: Vec<RtElement> = (0..g.len()).map(|a| phi(&masses[a])).collect();

    let mut positions = std::collections::HashSet::new();
    let mut phi_bijective = kernel.len() == target.dimension();
    for &a in &kernel {
        let (s, i, j) = dc.decompose(a);
        let fibre = target.fibre(s);
        let at = (s, fibre.binary_search(&i).ok(), fibre.binary_search(&j).ok());
        let unit = match at {
            (s, Some(p), Some(q)) => target.unit(s, fibre[p], fibre[q]),
            _ => None,
        };
        phi_bijective &= unit.as_ref() == Some(&images[a]) && positions.insert(at);
    }

    let mut mult: f64 = 0.0;
    let mut inv: f64 = 0.0;
    let mut induced: f64 = 0.0;
    for &a in &kernel {
        inv = inv.max(phi(&involute(&masses[a])).max_abs_diff(&target.adjoint(&images[a])));
        for &c2 in &kernel {
            let lhs = phi(&convolve(&masses[a], &masses[c2])?);
            mult = mult.max(lhs.max_abs_diff(&target.product(&images[a], &images[c2])));
        }
    }
    for s in 0..dc.points.len() {
        let fibre = target.fibre(s).to_vec();
        for &i in &fibre {
            let u = dc.arrow(s, i, i).expect("unit");
            for &a in &kernel {
                let ind = induced_rep(u, &masses[a])?;
                let perm: Vec<usize> = fibre
                    .iter()
                    .map(|&j| {
                        let xi = dc.arrow(s, j, i).expect("same point");
                        ind.basis.iter().position(|&b| b == xi).expect("in fibre")
                    })
                    .collect();
                let pi = target.pi(i, s, &images[a]).expect("i ∈ I_s").permuted(&perm);
                induced = induced.max(ind.matrix.max_abs_diff(&pi));
            }
        }
    }

    let holds = cocycle_valid
        && pi0_character
        && target_axioms.holds
        && phi_bijective
        && mult < STRUCTURAL_TOL
        && inv < STRUCTURAL_TOL
        && induced < STRUCTURAL_TOL;
    Ok(DoubledRtReport {
        star: dc.points[star].clone(),
        first_index: dc.first,
        morphisms: g.len(),
        cocycle_valid,
        pi0_character,
        kernel_dimension: kernel.len(),
        target_dimension: target.dimension(),
        target_axioms,
        phi_bijective,
        phi_multiplicative_deviation: mult,
        phi_involution_deviation: inv,
        induced_match_deviation: induced,
        holds,
    })
}

pub fn build_rt_model(c: &CechData) -> Result<(RtModel, RtReport), AlgebraError> {
    let points = c.points().len();
    if points > MAX_RT_POINTS {
        return Err(AlgebraError::SizeCap { what: "number of base points", size: points, cap: MAX_RT_POINTS });
    }
    let model = RtModel::new(c)?;
    if let Some(size) = model.fibres.iter().map(Vec::len).max().filter(|&k| k > MAX_RT_FIBRE) {
        return Err(AlgebraError::SizeCap { what: "cover sets through one point", size, cap: MAX_RT_FIBRE });
    }
    let axioms = model.verify();
    let (twist_class, certificate) = match cech_is_coboundary(c)? {
        CechCoboundary::Coboundary(_) => ("coboundary".to_string(), None),
        CechCoboundary::NotCoboundary { certificate, .. } => (
            "nontrivial twist certified".to_string(),
            Some(certificate.into_iter().map(|(t, w)| (triple_key(t), w)).collect()),
        ),
    };
    let doubled = doubled_report(c)?;
    let report = RtReport {
        n: c.n(),
        points,
        indices: c.indices().to_vec(),
        block_dims: (0..points).map(|s| (c.points()[s].clone(), model.fibres[s].len())).collect(),
        dimension: model.dimension(),
        holds: axioms.holds && doubled.holds,
        axioms,
        twist_class,
        certificate,
        doubled,
    };
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untwisted_tetrahedron_is_four_copies_of_m3() {
        let (model, report) = build_rt_model(&CechData::tetrahedron_boundary(3, 0)).unwrap();
        assert!(report.block_dims.values().all(|&k| k == 3));
        assert_eq!(model.dimension(), 36);
        assert_eq!(report.twist_class, "coboundary");
        assert!(report.holds, "{report:?}");
    }

    #[test]
    fn twisted_tetrahedron() {
        let (_, report) = build_rt_model(&CechData::tetrahedron_boundary(3, 1)).unwrap();
        assert!(report.axioms.holds);
        assert_eq!(report.twist_class, "nontrivial twist certified");
        assert!(report.certificate.is_some());
        let d = &report.doubled;
        assert!(d.pi0_character && d.phi_bijective && d.holds, "{d:?}");
        assert_eq!(d.kernel_dimension, d.target_dimension);
    }

    #[test]
    fn single_entry_has_norm_one() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let model = RtModel::new(&c).unwrap();
        let f = model.unit(0, 1, 2).unwrap();
        assert!((model.norm(&f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twisted_product_carries_the_phase() {
        let c = CechData::tetrahedron_boundary(3, 1);
        let model = RtModel::new(&c).unwrap();
        // Point "123": E_12 E_23 = ζ^{-1} E_13.
        let p = model.product(&model.unit(0, 1, 2).unwrap(), &model.unit(0, 2, 3).unwrap());
        let expected = zeta(3, -1);
        assert!((p.blocks[0][(0, 2)] - expected).norm() < 1e-15);
    }
}
