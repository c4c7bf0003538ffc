//! Exhaustive and seeded random inputs for the property and acceptance suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finspace::{quotient_space, FinSpace, SpaceMap};
use crate::graphfell::DirectedGraph;
use crate::groupoid::{build_relation_groupoid, RelationGroupoid};
use crate::twist::{coboundary_twist, OneCochain, TwoCocycle};

pub const SEED_VAR: &str = "GROUPOIDLAB_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed;

/// The seed from `GROUPOIDLAB_SEED`, or [`DEFAULT_SEED`] when unset or
/// unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// The space whose minimal opens are the down-sets of the preorder
/// `le[x][y]` (`y ≤ x` means `y ∈ U_x`), closed transitively first.
pub fn space_from_relation(mut le: Vec<Vec<bool>>) -> FinSpace {
    let n = le.len();
    for (x, row) in le.iter_mut().enumerate() {
        row[x] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    let sets = (0..n).map(|x| (0..n).filter(|&y| le[x][y]).collect()).collect();
    FinSpace::new(point_names(n), sets).expect("transitive closure is coherent")
}

/// Every topology on `n` labelled points (one per preorder).
pub fn all_spaces(n: usize) -> Vec<FinSpace> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << off.len()) {
        let mut le = vec![vec![false; n]; n];
        for (b, &(i, j)) in off.iter().enumerate() {
            le[i][j] = mask >> b & 1 == 1;
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|k| !le[i][k] || (0..n).all(|j| !le[k][j] || i == j || le[i][j])));
        if transitive {
            out.push(space_from_relation(le));
        }
    }
    out
}

/// Set partitions of `0..n` as lists of blocks, by restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, code: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let blocks = code.iter().copied().max().map_or(0, |m| m + 1);
            let mut p = vec![Vec::new(); blocks];
            for (x, &b) in code.iter().enumerate() {
                p[b].push(x);
            }
            out.push(p);
            return;
        }
        let limit = code.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=limit {
            code.push(b);
            go(i + 1, n, code, out);
            code.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every quotient map out of every space with `n` points.
pub fn all_quotient_maps(n: usize) -> Vec<SpaceMap> {
    let partitions = set_partitions(n);
    let mut out = Vec::new();
    for y in all_spaces(n) {
        for p in &partitions {
            out.push(quotient_space(&y, p).expect("valid partition").1);
        }
    }
    out
}

/// A random space: each ordered pair is related with probability `density`,
/// then closed transitively.
pub fn random_space<R: Rng>(rng: &mut R, n: usize, density: f64) -> FinSpace {
    let le = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect();
    space_from_relation(le)
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<usize>> {
    let blocks = rng.gen_range(1..=n.max(1));
    let mut labels: Vec<usize> = (0..n).map(|i| if i < blocks { i } else { rng.gen_range(0..blocks) }).collect();
    labels.shuffle(rng);
    let mut p = vec![Vec::new(); blocks];
    for (x, b) in labels.into_iter().enumerate() {
        p[b].push(x);
    }
    p.retain(|b| !b.is_empty());
    p
}

/// `R(ψ)` for a random surjection of a discrete space with `1..=max_points`
/// points, and a random coboundary twist over `Z_n`, `2 ≤ n ≤ max_n`.
pub fn random_twisted_relation<R: Rng>(
    rng: &mut R,
    max_points: usize,
    max_n: u64,
) -> (RelationGroupoid, Arc<TwoCocycle>) {
    let k = rng.gen_range(1..=max_points);
    let y = FinSpace::discrete(&point_names(k));
    let (_, psi) = quotient_space(&y, &random_partition(rng, k)).expect("valid partition");
    let r = build_relation_groupoid(&psi).expect("surjective");
    let g = Arc::new(r.groupoid.clone());
    let n = rng.gen_range(2..=max_n);
    let b = random_cochain(rng, &g, n);
    (r, Arc::new(coboundary_twist(&b)))
}

pub fn random_cochain<R: Rng>(rng: &mut R, g: &Arc<crate::groupoid::FinGroupoid>, n: u64) -> OneCochain {
    let values = (0..g.len()).map(|a| if g.is_unit(a) { 0 } else { rng.gen_range(0..n as i64) }).collect();
    OneCochain::new(g.clone(), n, values).expect("zero on units")
}

/// A random acyclic graph on `n` vertices: each edge runs from a higher to
/// a lower index, and parallel edges are allowed.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, edges: usize) -> DirectedGraph {
    let vertices = (0..n).map(|i| format!("x{i}")).collect();
    let mut list = Vec::new();
    if n >= 2 {
        for k in 0..edges {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            list.push((format!("e{k}"), a.min(b), a.max(b)));
        }
    }
    DirectedGraph::new(vertices, list).expect("valid graph")
}

/// Every simple graph on `n` vertices whose edges run from higher to lower
/// index. Each simple acyclic graph is isomorphic to one of these.
pub fn ordered_simple_dags(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r + 1..n).map(move |s| (r, s))).collect();
    (0u64..(1u64 << slots.len())).map(move |mask| {
        let vertices = (0..n).map(|i| format!("x{i}")).collect();
        let edges = slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(b, &(r, s))| (format!("e{b}"), r, s))
            .collect();
        DirectedGraph::new(vertices, edges).expect("valid graph")
    })
}

/// Ordered graphs on `n` vertices with every edge multiplicity in `0..=max`.
pub fn ordered_multi_dags(n: usize, max: usize) -> Vec<DirectedGraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r + 1..n).map(move |s| (r, s))).collect();
    let total = (max + 1).pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut edges = Vec::new();
            for &(r, s) in &slots {
                for _ in 0..code % (max + 1) {
                    edges.push((format!("e{}", edges.len()), r, s));
                }
                code /= max + 1;
            }
            DirectedGraph::new((0..n).map(|i| format!("x{i}")).collect(), edges).expect("valid graph")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_of_topologies_and_partitions() {
        let counts: Vec<usize> = (0..=4).map(|n| all_spaces(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        let bell: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn random_generation_is_reproducible() {
        let a = random_space(&mut rng(7), 5, 0.3);
        let b = random_space(&mut rng(7), 5, 0.3);
        assert_eq!(a, b);
        let p = random_partition(&mut rng(3), 6);
        assert_eq!(p.iter().map(Vec::len).sum::<usize>(), 6);
    }

    #[test]
    fn dag_enumerations() {
        assert_eq!(ordered_simple_dags(4).count(), 64);
        assert_eq!(ordered_multi_dags(3, 2).len(), 27);
    }
}
