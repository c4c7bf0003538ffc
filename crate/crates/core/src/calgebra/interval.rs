//! The doubled interval model: `N` sheets over `m` levels, glued at every
//! level except the top one.

use std::sync::Arc;

use serde::Serialize;

use super::blocks::{block_decompose, BlockDecomposition};
use super::element::{convolve, induced_rep, involute, AlgebraElement};
use super::matrix::CMatrix;
use super::{AlgebraError, STRUCTURAL_TOL};
use crate::finspace::{quotient_space, FinSpace};
use crate::groupoid::{build_relation_groupoid, RelationGroupoid};
use crate::twist::TwoCocycle;

pub const MAX_INTERVAL_POINTS: usize = 64;

#[derive(Debug, Clone)]
pub struct DoubledIntervalModel {
    pub levels: usize,
    pub sheets: usize,
    pub relation: RelationGroupoid,
    pub blocks: BlockDecomposition,
    pub report: DoubledIntervalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubledIntervalReport {
    pub levels: usize,
    pub sheets: usize,
    /// `(m-1)·N² + N`.
    pub dimension: usize,
    pub rho_block_dims: Vec<usize>,
    pub rho_bijective: bool,
    pub rho_multiplicative: bool,
    pub rho_involutive: bool,
    /// Largest entrywise gap between `Ind_(t,i)` and the conjugated block.
    pub unitary_equivalence_deviation: f64,
    /// Block sizes of [`block_decompose`] agree with those of `ρ`.
    pub matches_orbit_blocks: bool,
    pub holds: bool,
}

/// Base point index of `(t, i)`, with `t < m` and `i < N`.
fn point(sheets: usize, t: usize, i: usize) -> usize {
    t * sheets + i
}

pub fn build_doubled_model(levels: usize, sheets: usize) -> Result<DoubledIntervalModel, AlgebraError> {
    if levels < 2 || sheets < 1 {
        return Err(AlgebraError::InvalidModel(format!("need m >= 2 and N >= 1, got m={levels}, N={sheets}")));
    }
    let size = levels * sheets;
    if size > MAX_INTERVAL_POINTS {
        return Err(AlgebraError::SizeCap { what: "m·N", size, cap: MAX_INTERVAL_POINTS });
    }
    let names: Vec<String> =
        (0..levels).flat_map(|t| (1..=sheets).map(move |i| format!("(t{t},{i})"))).collect();
    let y = FinSpace::discrete(&names);
    let top = levels - 1;
    let mut classes: Vec<Vec<usize>> = (0..top).map(|t| (0..sheets).map(|i| point(sheets, t, i)).collect()).collect();
    classes.extend((0..sheets).map(|i| vec![point(sheets, top, i)]));
    let (_, psi) = quotient_space(&y, &classes)?;
    let relation = build_relation_groupoid(&psi)?;
    let g = Arc::new(relation.groupoid.clone());
    let sigma = Arc::new(TwoCocycle::trivial(g.clone(), 1));
    let blocks = block_decompose(&relation, sigma.clone())?;

    // ρ: blocks 0..top are M_N (one per glued level), then N copies of C.
    let rho_dims: Vec<usize> = (0..top).map(|_| sheets).chain((0..sheets).map(|_| 1)).collect();
    let locate = |a: usize| -> (usize, usize, usize) {
        let (p, q) = relation.pairs[a];
        let (t, i, j) = (p / sheets, p % sheets, q % sheets);
        if t < top {
            (t, i, j)
        } else {
            (top + i, 0, 0)
        }
    };
    let rho = |f: &AlgebraElement| -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = rho_dims.iter().map(|&k| CMatrix::zeros(k, k)).collect();
        for a in 0..g.len() {
            let (b, i, j) = locate(a);
            out[b][(i, j)] += f.coeff(a);
        }
        out
    };
    let masses: Vec<AlgebraElement> = (0..g.len()).map(|a| AlgebraElement::point_mass(sigma.clone(), a)).collect();
    let images: Vec<Vec<CMatrix>> = masses.iter().map(&rho).collect();

    let dimension = top * sheets * sheets + sheets;
    let mut units = std::collections::HashSet::new();
    let rho_bijective = g.len() == dimension
        && rho_dims.iter().map(|k| k * k).sum::<usize>() == dimension
        && (0..g.len()).all(|a| units.insert(locate(a)));
    // Trivial twist and 0/1 coefficients: both sides are computed exactly.
    let mut rho_multiplicative = true;
    for a in 0..g.len() {
        for c in 0..g.len() {
            let lhs = rho(&convolve(&masses[a], &masses[c])?);
            let rhs: Vec<CMatrix> = images[a].iter().zip(&images[c]).map(|(x, y)| x * y).collect();
            rho_multiplicative &= lhs == rhs;
        }
    }
    let rho_involutive =
        (0..g.len()).all(|a| rho(&involute(&masses[a])) == images[a].iter().map(CMatrix::adjoint).collect::<Vec<_>>());

    // Ind_(t,i) against ε_t∘ρ under e_j ↦ ξ_j = e_((t,j),(t,i)).
    let mut deviation: f64 = 0.0;
    for t in 0..levels {
        for i in 0..sheets {
            let u = relation.unit_at(point(sheets, t, i));
            for f in &masses {
                let ind = induced_rep(u, f)?;
                let (block, k) = if t < top { (t, sheets) } else { (top + i, 1) };
                let perm: Vec<usize> = (0..k)
                    .map(|j| {
                        let y = if t < top { point(sheets, t, j) } else { point(sheets, t, i) };
                        let xi = relation.morphism(y, point(sheets, t, i)).expect("glued");
                        ind.basis.iter().position(|&b| b == xi).expect("in fibre")
                    })
                    .collect();
                let conjugated = rho(f)[block].permuted(&perm);
                deviation = deviation.max(ind.matrix.max_abs_diff(&conjugated));
            }
        }
    }

    let mut orbit_dims = blocks.block_dims();
    orbit_dims.sort_unstable();
    let mut sorted_rho = rho_dims.clone();
    sorted_rho.sort_unstable();
    let matches_orbit_blocks = orbit_dims == sorted_rho && blocks.report.is_isomorphism;
    let holds = rho_bijective
        && rho_multiplicative
        && rho_involutive
        && deviation < STRUCTURAL_TOL
        && matches_orbit_blocks;
    let report = DoubledIntervalReport {
        levels,
        sheets,
        dimension,
        rho_block_dims: rho_dims,
        rho_bijective,
        rho_multiplicative,
        rho_involutive,
        unitary_equivalence_deviation: deviation,
        matches_orbit_blocks,
        holds,
    };
    Ok(DoubledIntervalModel { levels, sheets, relation, blocks, report })
}
