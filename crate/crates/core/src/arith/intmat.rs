//! Dense integer matrices: row Hermite normal form with transform, integer
//! kernels, integer linear solves and Smith invariant factors.
//!
//! Matrices are plain `Vec<Vec<BigInt>>` in row-major order. All routines are
//! exact; nothing here rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, ncols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `x * A` for a row vector `x`.
pub fn vec_mat(x: &[BigInt], a: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); ncols];
    for (xi, row) in x.iter().zip(a) {
        if xi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += xi * r;
        }
    }
    out
}

fn row_axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Result of [`hnf_with_transform`]: `transform * input = hnf`, with the
/// nonzero rows of `hnf` first, in echelon order.
#[derive(Debug, Clone)]
pub struct HnfResult {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Row Hermite normal form. Pivots are positive and every entry above a pivot
/// lies in `[0, pivot)`.
pub fn hnf_with_transform(a: &[Vec<BigInt>], ncols: usize) -> HnfResult {
    let m = a.len();
    let mut h: IntMatrix = a.to_vec();
    let mut u = identity(m);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero |entry| in this column at or below r
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h[i][col].is_zero()
                    && best.is_none_or(|b| h[i][col].abs() < h[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut done = true;
            for i in (r + 1)..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                let (src_h, src_u) = (h[r].clone(), u[r].clone());
                row_axpy(&mut h[i], &q, &src_h);
                row_axpy(&mut u[i], &q, &src_u);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[r][col].is_zero() {
            if h[r][col].is_negative() {
                for x in h[r].iter_mut() {
                    *x = -&*x;
                }
                for x in u[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let (src_h, src_u) = (h[r].clone(), u[r].clone());
            for i in 0..r {
                let q = h[i][col].div_floor(&src_h[col]);
                if !q.is_zero() {
                    row_axpy(&mut h[i], &q, &src_h);
                    row_axpy(&mut u[i], &q, &src_u);
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    HnfResult { hnf: h, transform: u, rank: r, pivots }
}

/// Nonzero rows of the row HNF.
pub fn hnf(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let res = hnf_with_transform(a, ncols);
    res.hnf.into_iter().take(res.rank).collect()
}

/// Basis (in HNF) of `{x ∈ Z^m : x A = 0}` where `A` has `m` rows.
pub fn left_kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let m = a.len();
    let res = hnf_with_transform(a, ncols);
    let gens: IntMatrix = res.transform.into_iter().skip(res.rank).collect();
    hnf(&gens, m)
}

/// Basis (in HNF) of `{x ∈ Z^n : A x = 0}` where `A` has `ncols = n` columns.
pub fn kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let at = transpose(a, ncols);
    left_kernel(&at, a.len())
}

/// Integer solution of `x A = b`, if one exists.
pub fn solve_left(a: &[Vec<BigInt>], ncols: usize, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != ncols {
        return Err(dim_err(format!("right-hand side has {} entries, expected {ncols}", b.len())));
    }
    let m = a.len();
    let res = hnf_with_transform(a, ncols);
    let mut y = vec![BigInt::zero(); m];
    let mut rest = b.to_vec();
    for (k, &p) in res.pivots.iter().enumerate() {
        let (q, rem) = rest[p].div_rem(&res.hnf[k][p]);
        if !rem.is_zero() {
            return Ok(None);
        }
        row_axpy(&mut rest, &q, &res.hnf[k]);
        y[k] = q;
    }
    if rest.iter().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    Ok(Some(vec_mat(&y, &res.transform, m)))
}

/// Integer solution of `A x = b`, if one exists.
pub fn solve_right(a: &[Vec<BigInt>], ncols: usize, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.len() {
        return Err(dim_err("right-hand side length differs from row count"));
    }
    let at = transpose(a, ncols);
    solve_left(&at, a.len(), b)
}

/// Nonzero Smith invariant factors `d_1 | d_2 | ...`.
pub fn invariant_factors(a: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut m: IntMatrix = a.to_vec();
    let nrows = m.len();
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < nrows.min(ncols) {
        // pick smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in (t + 1)..nrows {
            if !m[i][t].is_zero() {
                let q = m[i][t].div_floor(&m[t][t]);
                let src = m[t].clone();
                row_axpy(&mut m[i], &q, &src);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..ncols {
            if !m[t][j].is_zero() {
                let q = m[t][j].div_floor(&m[t][t]);
                for i in 0..nrows {
                    let v = &q * &m[i][t];
                    m[i][j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility condition on the trailing block
        let pivot = m[t][t].clone();
        let mut bad_row = None;
        'outer: for i in (t + 1)..nrows {
            for j in (t + 1)..ncols {
                if !(&m[i][j] % &pivot).is_zero() {
                    bad_row = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad_row {
            let src = m[i].clone();
            for (x, s) in m[t].iter_mut().zip(&src) {
                *x += s;
            }
            continue;
        }
        out.push(pivot.abs());
        t += 1;
    }
    out
}

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
