//! Linear systems over `Z/nZ` for arbitrary (possibly composite) `n`.
//!
//! The coefficient matrix is diagonalised by unimodular row and column
//! operations, `D = U·A·V`. Each diagonal equation `d·y = c` is then solved
//! separately, and an unsolvable one yields a row vector `w` with `w·A = 0`
//! but `w·b != 0`, which certifies that no solution exists.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModSolution {
    Solved(Vec<u64>),
    /// `w` with `w·A ≡ 0` and `w·b ≢ 0 (mod n)`.
    Inconsistent(Vec<u64>),
}

#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub n: u64,
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<u64>,
    /// The row operations applied to the `left` matrix passed in: `U` itself
    /// when that was the identity, `U·b` when it was a right-hand side.
    pub u: Vec<Vec<u64>>,
    /// `k×k`, applied on the right.
    pub v: Vec<Vec<u64>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn md(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Replaces rows (or columns) `p`, `q` of a vector pair by
/// `(s·p + t·q, -b/g·p + a/g·q)`, a unimodular change.
fn combine(p: &mut [u64], q: &mut [u64], coeff: [i128; 4], n: u64) {
    let [s, t, x, y] = coeff;
    for (a, b) in p.iter_mut().zip(q.iter_mut()) {
        let (va, vb) = (*a as i128, *b as i128);
        *a = md(s * va + t * vb, n);
        *b = md(x * va + y * vb, n);
    }
}

fn coefficients(a: u64, b: u64) -> [i128; 4] {
    // A plain subtraction when the pivot divides the entry keeps the pivot
    // row and column fixed, which the elimination loop relies on to stop.
    if b % a == 0 {
        return [1, 0, -((b / a) as i128), 1];
    }
    let (g, s, t) = ext_gcd(a as i128, b as i128);
    [s, t, -(b as i128) / g, (a as i128) / g]
}

fn column(m: &[Vec<u64>], j: usize) -> Vec<u64> {
    m.iter().map(|r| r[j]).collect()
}

fn set_column(m: &mut [Vec<u64>], j: usize, c: &[u64]) {
    for (r, &x) in m.iter_mut().zip(c) {
        r[j] = x;
    }
}

fn identity(k: usize, n: u64) -> Vec<Vec<u64>> {
    (0..k).map(|i| (0..k).map(|j| u64::from(i == j) % n).collect()).collect()
}

pub fn diagonalize(a: &[Vec<u64>], cols: usize, n: u64) -> Diagonalization {
    diagonalize_with(a, cols, n, identity(a.len(), n))
}

/// Diagonalises `a`, applying every row operation to `left` as well.
pub fn diagonalize_with(a: &[Vec<u64>], cols: usize, n: u64, left: Vec<Vec<u64>>) -> Diagonalization {
    assert!(n >= 1, "modulus must be positive");
    let rows = a.len();
    assert_eq!(left.len(), rows, "left factor needs one row per equation");
    let mut d: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % n).collect()).collect();
    let mut u = left;
    let mut v = identity(cols, n);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Pivot: the nonzero entry with the smallest gcd with n.
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gcd(x, n);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let c = coefficients(d[t][t], d[i][t]);
                    let (top, rest) = d.split_at_mut(i);
                    combine(&mut top[t], &mut rest[0], c, n);
                    let (top, rest) = u.split_at_mut(i);
                    combine(&mut top[t], &mut rest[0], c, n);
                }
            }
            let mut touched = false;
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let c = coefficients(d[t][t], d[t][j]);
                    let (mut ct, mut cj) = (column(&d, t), column(&d, j));
                    combine(&mut ct, &mut cj, c, n);
                    set_column(&mut d, t, &ct);
                    set_column(&mut d, j, &cj);
                    let (mut vt, mut vj) = (column(&v, t), column(&v, j));
                    combine(&mut vt, &mut vj, c, n);
                    set_column(&mut v, t, &vt);
                    set_column(&mut v, j, &vj);
                    touched = true;
                }
            }
            if !touched || (t + 1..rows).all(|i| d[i][t] == 0) {
                break;
            }
        }
        if d[t][t] == 0 {
            break;
        }
        diag.push(d[t][t]);
    }
    Diagonalization { n, rows, cols, diag, u, v }
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn dot(a: &[u64], b: &[u64], n: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + mul_mod(x, y, n)) % n)
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (_, s, _) = ext_gcd(a as i128, m as i128);
    md(s, m)
}

impl Diagonalization {
    /// Solves `A·x = b`, given `c = U·b` from the diagonalisation. On failure
    /// returns the index of the offending diagonal row.
    fn solve_transformed(&self, c: &[u64]) -> Result<Vec<u64>, usize> {
        let n = self.n;
        let mut y = vec![0u64; self.cols];
        for (t, &ct) in c.iter().enumerate() {
            match self.diag.get(t) {
                Some(&dt) => {
                    let g = gcd(dt, n);
                    if ct % g != 0 {
                        return Err(t);
                    }
                    let m = n / g;
                    y[t] = mul_mod((ct / g) % m, inverse_mod((dt / g) % m, m), m);
                }
                None if ct != 0 => return Err(t),
                None => {}
            }
        }
        Ok(self.v.iter().map(|row| dot(row, &y, n)).collect())
    }

    /// Requires `u` to hold the full row transformation (see [`diagonalize`]).
    pub fn solve(&self, b: &[u64]) -> ModSolution {
        let n = self.n;
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let c: Vec<u64> = self.u.iter().map(|row| dot(row, b, n)).collect();
        match self.solve_transformed(&c) {
            Ok(x) => ModSolution::Solved(x),
            Err(t) => ModSolution::Inconsistent(self.certificate(t)),
        }
    }

    fn certificate(&self, t: usize) -> Vec<u64> {
        let n = self.n;
        match self.diag.get(t) {
            Some(&dt) => {
                let scale = n / gcd(dt, n);
                self.u[t].iter().map(|&x| mul_mod(x, scale, n)).collect()
            }
            None => self.u[t].clone(),
        }
    }

    /// Number of elements in the image of `x ↦ A·x`.
    pub fn image_size(&self) -> u128 {
        self.diag.iter().map(|&d| (self.n / gcd(d, self.n)) as u128).product()
    }
}

/// Solves `A·x ≡ b (mod n)` where `A` has `cols` columns.
pub fn solve_mod(a: &[Vec<u64>], cols: usize, b: &[u64], n: u64) -> ModSolution {
    // Carry only b through the row operations; the full transformation is
    // rebuilt when a certificate is needed.
    let column = b.iter().map(|&x| vec![x % n]).collect();
    let d = diagonalize_with(a, cols, n, column);
    let c: Vec<u64> = d.u.iter().map(|r| r[0]).collect();
    match d.solve_transformed(&c) {
        Ok(x) => ModSolution::Solved(x),
        Err(_) => diagonalize(a, cols, n).solve(b),
    }
}

pub fn apply(a: &[Vec<u64>], x: &[u64], n: u64) -> Vec<u64> {
    a.iter().map(|row| dot(row, x, n)).collect()
}

/// `w·A`, for checking certificates.
pub fn apply_left(w: &[u64], a: &[Vec<u64>], cols: usize, n: u64) -> Vec<u64> {
    (0..cols).map(|j| a.iter().zip(w).fold(0, |acc, (row, &wi)| (acc + mul_mod(wi, row[j], n)) % n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &[Vec<u64>], cols: usize, b: &[u64], n: u64) -> bool {
        match solve_mod(a, cols, b, n) {
            ModSolution::Solved(x) => {
                assert_eq!(apply(a, &x, n), b.iter().map(|v| v % n).collect::<Vec<_>>());
                true
            }
            ModSolution::Inconsistent(w) => {
                assert!(apply_left(&w, a, cols, n).iter().all(|&v| v == 0));
                assert_ne!(dot(&w, b, n), 0);
                false
            }
        }
    }

    fn brute_force(a: &[Vec<u64>], cols: usize, b: &[u64], n: u64) -> bool {
        let total = (n as usize).pow(cols as u32);
        (0..total).any(|mut code| {
            let x: Vec<u64> = (0..cols)
                .map(|_| {
                    let v = (code % n as usize) as u64;
                    code /= n as usize;
                    v
                })
                .collect();
            apply(a, &x, n) == b.iter().map(|v| v % n).collect::<Vec<_>>()
        })
    }

    #[test]
    fn composite_modulus() {
        // 2x ≡ 1 (mod 4) has no solution; 2x ≡ 2 does.
        assert!(!check(&[vec![2]], 1, &[1], 4));
        assert!(check(&[vec![2]], 1, &[2], 4));
        // 4x + 6y ≡ 2 (mod 12)
        assert!(check(&[vec![4, 6]], 2, &[2], 12));
        assert!(!check(&[vec![4, 6]], 2, &[1], 12));
    }

    #[test]
    fn zero_rows_need_zero_right_side() {
        assert!(check(&[vec![0, 0], vec![1, 1]], 2, &[0, 3], 5));
        assert!(!check(&[vec![0, 0], vec![1, 1]], 2, &[1, 3], 5));
    }

    #[test]
    fn image_size_of_zero_and_identity() {
        assert_eq!(diagonalize(&[vec![0, 0]], 2, 6).image_size(), 1);
        assert_eq!(diagonalize(&[vec![1, 0], vec![0, 1]], 2, 6).image_size(), 36);
        assert_eq!(diagonalize(&[vec![2, 0], vec![0, 3]], 2, 6).image_size(), 6);
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(
            n in 2u64..7,
            rows in 1usize..4,
            cols in 1usize..4,
            seed in proptest::collection::vec(0u64..1000, 12),
            rhs in proptest::collection::vec(0u64..1000, 3),
        ) {
            let a: Vec<Vec<u64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j] % n).collect()).collect();
            let b: Vec<u64> = rhs[..rows].iter().map(|v| v % n).collect();
            prop_assert_eq!(check(&a, cols, &b, n), brute_force(&a, cols, &b, n));
        }
    }
}
