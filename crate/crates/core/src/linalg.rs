//! Small dense integer and rational linear algebra: Smith and Hermite normal
//! forms, kernels, inverses and strict feasibility of homogeneous systems.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{int, Rational};

pub type IMat = Vec<Vec<i64>>;
pub type QMat = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn imat_mul(a: &IMat, b: &IMat, inner: usize, cols: usize) -> IMat {
    a.iter().map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect()).collect()
}

pub fn imat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

pub fn dot_iq(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| if *x == 0 { s } else { s + y * int(*x) })
}

pub fn to_q(m: &IMat) -> QMat {
    m.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|r| (0..cols).map(|j| r.iter().zip(b).fold(Rational::zero(), |s, (x, row)| s + x * &row[j])).collect()).collect()
}

pub fn qmat_vec(a: &QMat, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|r| dot_q(r, v)).collect()
}

/// Row-reduced echelon form; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &m[r][k] * &f;
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn q_rank(m: &QMat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn i_rank(m: &IMat) -> usize {
    q_rank(&to_q(m))
}

/// Inverse of a square rational matrix.
pub fn q_inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the rational null space `{x : m x = 0}`.
pub fn q_kernel(m: &QMat, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Smith normal form `U · M · V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub v: IMat,
    pub v_inv: IMat,
    /// Nonzero invariant factors, each dividing the next.
    pub diag: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
}

pub fn snf(m: &IMat, cols: usize) -> Snf {
    let rows = m.len();
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pick the smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let f = a[i][t].div_euclid(a[t][t]);
            if f != 0 {
                for k in 0..cols {
                    a[i][k] -= f * a[t][k];
                }
                for k in 0..rows {
                    u[i][k] -= f * u[t][k];
                }
            }
            if a[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let f = a[t][j].div_euclid(a[t][t]);
            if f != 0 {
                for r in a.iter_mut() {
                    r[j] -= f * r[t];
                }
                for r in v.iter_mut() {
                    r[j] -= f * r[t];
                }
            }
            if a[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility of the trailing block
        let p = a[t][t];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
        if let Some(i) = bad {
            for k in 0..cols {
                a[t][k] += a[i][k];
            }
            for k in 0..rows {
                u[t][k] += u[i][k];
            }
            continue;
        }
        if p < 0 {
            for k in 0..cols {
                a[t][k] = -a[t][k];
            }
            for k in 0..rows {
                u[t][k] = -u[t][k];
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }
    let vq = q_inverse(&to_q(&v)).expect("unimodular");
    let v_inv = vq.iter().map(|r| r.iter().map(|x| x.to_integer().try_into().expect("small entries")).collect()).collect();
    Snf { u, v, v_inv, diag, rows, cols }
}

/// Basis (as vectors) of the integer kernel `{x ∈ Z^cols : m x = 0}`.
pub fn int_kernel(m: &IMat, cols: usize) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return (0..cols).map(|i| (0..cols).map(|j| i64::from(i == j)).collect()).collect();
    }
    let s = snf(m, cols);
    let r = s.diag.len();
    (r..cols).map(|j| s.v.iter().map(|row| row[j]).collect()).collect()
}

/// Row Hermite normal form with positive pivots and reduced entries above
/// pivots; zero rows removed.
pub fn hnf_rows(m: &IMat, cols: usize) -> IMat {
    let mut a: IMat = m.iter().filter(|r| r.iter().any(|x| *x != 0)).cloned().collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| a[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c] != 0 {
                    let f = a[i][c].div_euclid(a[r][c]);
                    for k in 0..cols {
                        a[i][k] -= f * a[r][k];
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = a[i][c].div_euclid(a[r][c]);
            if f != 0 {
                for k in 0..cols {
                    a[i][k] -= f * a[r][k];
                }
            }
        }
        r += 1;
    }
    a.retain(|row| row.iter().any(|x| *x != 0));
    a
}

/// Integer rows spanning `span_Q(m) ∩ Z^cols`, in Hermite normal form.
pub fn saturate_rows(m: &IMat, cols: usize) -> IMat {
    let ker = int_kernel(m, cols);
    if ker.is_empty() {
        return identity(cols);
    }
    let ann = int_kernel(&ker, cols);
    hnf_rows(&ann, cols)
}

/// Primitive integer multiple of a rational vector with the same direction.
pub fn primitive(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| if g.is_zero() { 0 } else { (x / &g).try_into().expect("small entries") }).collect()
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, x| acc.gcd(x))
}

/// Orients a nonzero vector so its first nonzero entry is positive.
pub fn orient(v: &mut [i64]) -> i64 {
    match v.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => {
            for y in v.iter_mut() {
                *y = -*y;
            }
            -1
        }
        _ => 1,
    }
}

fn normalize_row(r: &mut [Rational]) {
    if let Some(m) = r.iter().map(Signed::abs).filter(|x| !x.is_zero()).max() {
        for x in r.iter_mut() {
            *x /= &m;
        }
    }
}

/// Fourier–Motzkin elimination of the last variable from `rows · x > 0`.
fn fm_step(rows: &[Vec<Rational>], k: usize) -> Vec<Vec<Rational>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r[k].is_positive() {
            pos.push(r);
        } else if r[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r[..k].to_vec());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = -n[k].clone();
            let b = p[k].clone();
            let mut row: Vec<Rational> = (0..k).map(|i| &p[i] * &a + &n[i] * &b).collect();
            normalize_row(&mut row);
            out.push(row);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A rational point with `rows · x > 0` componentwise, or `None`.
pub fn strict_interior(rows: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let mut levels: Vec<Vec<Vec<Rational>>> = Vec::with_capacity(dim + 1);
    let mut cur: Vec<Vec<Rational>> = rows.to_vec();
    for r in cur.iter_mut() {
        normalize_row(r);
    }
    cur.sort();
    cur.dedup();
    for k in (0..dim).rev() {
        levels.push(cur.clone());
        cur = fm_step(&cur, k);
    }
    if !cur.is_empty() {
        // every remaining row reads 0 > 0
        return None;
    }
    // back substitution, choosing each coordinate strictly inside its bounds
    let mut x: Vec<Rational> = Vec::with_capacity(dim);
    for k in 0..dim {
        let sys = &levels[dim - 1 - k];
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for r in sys {
            let rest = dot_q(&r[..k], &x);
            if r[k].is_zero() {
                continue;
            }
            let bound = -rest / &r[k];
            if r[k].is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        let v = match (lo, hi) {
            (Some(l), Some(h)) => {
                debug_assert!(l < h);
                (l + h) / int(2)
            }
            (Some(l), None) => l.floor() + Rational::one(),
            (None, Some(h)) => h.ceil() - Rational::one(),
            (None, None) => Rational::zero(),
        };
        x.push(v);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn smith_form_diagonalizes() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = snf(&m, 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let d = imat_mul(&imat_mul(&s.u, &m, 3, 3), &s.v, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j], if i == j { s.diag[i] } else { 0 });
            }
        }
        assert_eq!(imat_mul(&s.v, &s.v_inv, 3, 3), identity(3));
    }

    #[test]
    fn kernels_and_saturation() {
        let m = vec![vec![2, 4]];
        assert_eq!(int_kernel(&m, 2).len(), 1);
        assert_eq!(saturate_rows(&m, 2), vec![vec![1, 2]]);
        assert_eq!(hnf_rows(&vec![vec![0, 2], vec![1, 3]], 2), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn strict_feasibility() {
        let rows = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(-1, 1), rat(1, 1)]];
        let x = strict_interior(&rows, 2).unwrap();
        assert!(rows.iter().all(|r| dot_q(r, &x) > Rational::zero()));
        let bad = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(-1, 1), rat(-1, 1)]];
        assert!(strict_interior(&bad, 2).is_none());
    }
}
