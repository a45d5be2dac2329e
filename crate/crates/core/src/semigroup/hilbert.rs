//! Hilbert bases of lattice monoids `H ∩ ℕ^r`.
//!
//! The monoid lives in the pointed cone `C = (H ⊗ ℝ) ∩ ℝ^r_{≥0}`. Every
//! irreducible element lies in the half-open zonotope spanned by the primitive
//! extreme rays of `C`, so coordinates are bounded by the coordinatewise sum
//! of those rays. Inside that box a graded search runs over the points that
//! dominate no nonzero lattice point; a point one step above such a layer is
//! irreducible exactly when it lies in `H`.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::lattice::IntegerLattice;
use crate::arith::intmat;
use crate::error::{Error, Result};

/// Primitive generators of the extreme rays of `(H ⊗ ℝ) ∩ ℝ^r_{≥0}`.
pub fn extreme_rays(h: &IntegerLattice) -> Vec<Vec<BigInt>> {
    let r = h.ambient();
    let basis = h.basis();
    if basis.is_empty() {
        return Vec::new();
    }
    let support: Vec<usize> = (0..r).filter(|&j| basis.iter().any(|row| !row[j].is_zero())).collect();
    let s = support.len();
    let mut rays = Vec::new();
    for mask in 1u64..(1u64 << s) {
        let inside: Vec<usize> = (0..s).filter(|&t| mask >> t & 1 == 1).map(|t| support[t]).collect();
        let outside: Vec<usize> = (0..r).filter(|j| !inside.contains(j)).collect();
        let restricted: Vec<Vec<BigInt>> =
            basis.iter().map(|row| outside.iter().map(|&j| row[j].clone()).collect()).collect();
        let ker = intmat::left_kernel(&restricted, outside.len());
        if ker.len() != 1 {
            continue;
        }
        let v = intmat::vec_mat(&ker[0], basis, r);
        if inside.iter().any(|&j| v[j].is_zero()) {
            continue;
        }
        let positive = inside.iter().all(|&j| v[j].is_positive());
        let negative = inside.iter().all(|&j| v[j].is_negative());
        if positive {
            rays.push(v);
        } else if negative {
            rays.push(v.into_iter().map(|x| -x).collect());
        }
    }
    rays.sort();
    rays
}

struct SmallLattice {
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl SmallLattice {
    fn new(h: &IntegerLattice) -> Result<Self> {
        let rows = h
            .basis_i128()
            .ok_or_else(|| Error::Invalid("lattice entries too large for monoid search".into()))?;
        let pivots = rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        Ok(Self { rows, pivots })
    }

    fn contains(&self, y: &[i64]) -> bool {
        let mut rest: Vec<i128> = y.iter().map(|&x| x as i128).collect();
        let mut col = 0;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if rest[col..p].iter().any(|&x| x != 0) {
                return false;
            }
            if rest[p] % row[p] != 0 {
                return false;
            }
            let q = rest[p] / row[p];
            if q != 0 {
                for (o, b) in rest.iter_mut().zip(row) {
                    *o -= q * b;
                }
            }
            col = p + 1;
        }
        rest.iter().all(|&x| x == 0)
    }
}

/// Irreducible elements of `H ∩ ℕ^n` whose coordinates stay within `caps`.
fn graded_search(h: &IntegerLattice, caps: &[i64]) -> Result<Vec<Vec<i64>>> {
    let lat = SmallLattice::new(h)?;
    let n = caps.len();
    let mut found = Vec::new();
    let mut layer: HashSet<Vec<i64>> = HashSet::new();
    layer.insert(vec![0; n]);
    while !layer.is_empty() {
        let mut next = HashSet::new();
        for x in &layer {
            let last = x.iter().rposition(|&c| c > 0).unwrap_or(0);
            for j in last..n {
                if x[j] >= caps[j] {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                let mut free_below = true;
                for i in 0..n {
                    if i == j || y[i] == 0 {
                        continue;
                    }
                    y[i] -= 1;
                    let ok = layer.contains(&y);
                    y[i] += 1;
                    if !ok {
                        free_below = false;
                        break;
                    }
                }
                if !free_below {
                    continue;
                }
                if lat.contains(&y) {
                    found.push(y);
                } else {
                    next.insert(y);
                }
            }
        }
        layer = next;
    }
    found.sort();
    Ok(found)
}

fn ray_caps(h: &IntegerLattice) -> Result<Vec<i64>> {
    let mut caps = vec![0i64; h.ambient()];
    for ray in extreme_rays(h) {
        for (c, x) in caps.iter_mut().zip(&ray) {
            let x = x.to_i64().ok_or_else(|| Error::Invalid("extreme ray too large".into()))?;
            *c = c.checked_add(x).ok_or_else(|| Error::Invalid("extreme ray too large".into()))?;
        }
    }
    Ok(caps)
}

fn to_big(v: Vec<i64>) -> Vec<BigInt> {
    v.into_iter().map(BigInt::from).collect()
}

/// The minimal generating set of the monoid `H ∩ ℕ^r`, sorted
/// lexicographically. Empty when the monoid is `{0}`.
pub fn try_hilbert_basis(h: &IntegerLattice) -> Result<Vec<Vec<BigInt>>> {
    let caps = ray_caps(h)?;
    Ok(graded_search(h, &caps)?.into_iter().map(to_big).collect())
}

/// Panics only when lattice entries exceed 64 bits.
pub fn hilbert_basis(h: &IntegerLattice) -> Vec<Vec<BigInt>> {
    try_hilbert_basis(h).expect("Hilbert basis search")
}

/// One coordinate of the slicing recursion: `L` projects onto `g·ℤ` in
/// its first coordinate (via the row `ell`) and contains `period·e₀`.
struct Level {
    g: i128,
    ell: Vec<i128>,
    period: Option<i128>,
    rows: Vec<Vec<i128>>,
}

impl Level {
    /// Canonical representative of `p + L` for the level lattice `L`.
    fn reduce(&self, p: &[i128]) -> Vec<i128> {
        let mut v = p.to_vec();
        for row in &self.rows {
            let Some(c) = row.iter().position(|&x| x != 0) else { continue };
            let q = v[c].div_euclid(row[c]);
            if q != 0 {
                v.iter_mut().zip(row).for_each(|(a, b)| *a -= q * b);
            }
        }
        v
    }
}

fn slicing_plan(h: &IntegerLattice) -> Result<Vec<Level>> {
    let too_big = || Error::Invalid("lattice entries too large for monoid search".into());
    let mut lat = h.clone();
    let mut levels = Vec::new();
    for k in 0..h.ambient() {
        let amb = h.ambient() - k;
        let rows = lat.basis_i128().ok_or_else(too_big)?;
        let (g, ell, rest) = match rows.first() {
            Some(row) if row[0] != 0 => (row[0], row.clone(), &rows[1..]),
            _ => (0, vec![0; amb], &rows[..]),
        };
        let axis = lat.intersect(&IntegerLattice::coordinate(amb, &[0]))?;
        let period = match axis.basis().first() {
            Some(row) => Some(row[0].abs().to_i128().ok_or_else(too_big)?),
            None => None,
        };
        levels.push(Level { g, ell, period, rows: rows.clone() });
        let next: Vec<Vec<BigInt>> = rest.iter().map(|row| row[1..].iter().map(|&x| BigInt::from(x)).collect()).collect();
        lat = IntegerLattice::from_generators(amb - 1, &next)?;
    }
    Ok(levels)
}

type SliceMemo = HashMap<Vec<i128>, Rc<Vec<Vec<i128>>>>;

/// Minimal points within `caps` of the coset through `p` of the level-`k`
/// lattice. A minimal point restricts to a minimal point of its slice
/// `x₀ = t`, and `t` can stay below the period of `e₀`. Slices come in
/// increasing `t`, so a later point never dominates an earlier one.
fn slice_minimal(levels: &[Level], k: usize, p: &[i128], caps: &[i128], memo: &mut [SliceMemo]) -> Rc<Vec<Vec<i128>>> {
    let n = levels.len();
    if k == n {
        return Rc::new(vec![Vec::new()]);
    }
    let lv = &levels[k];
    let p = lv.reduce(p);
    let full = lv.rows.len() == n - k;
    if full {
        if let Some(hit) = memo[k].get(&p) {
            return hit.clone();
        }
    }
    let mut max_t = caps[k];
    if let Some(m) = lv.period {
        max_t = max_t.min(m - 1);
    }
    let p0 = p[0];
    let out = if k + 1 == n {
        let t = if lv.g > 0 { p0.rem_euclid(lv.g) } else { p0 };
        if (0..=max_t).contains(&t) {
            vec![vec![t]]
        } else {
            Vec::new()
        }
    } else if k + 2 == n && levels[k + 1].g == 0 && lv.g > 0 {
        // the last coordinate moves along a line as t steps by g
        let (t0, step) = (p0.rem_euclid(lv.g), lv.g);
        let j0 = (t0 - p0) / step;
        let (u0, du) = (p[1] + j0 * lv.ell[1], lv.ell[1]);
        let last_cap = caps[k + 1];
        let fits = |j: i128| t0 + j * step <= max_t && (0..=last_cap).contains(&(u0 + j * du));
        let mut pts = Vec::new();
        if du > 0 {
            let j = if u0 >= 0 { 0 } else { (-u0 + du - 1) / du };
            if fits(j) {
                pts.push(vec![t0 + j * step, u0 + j * du]);
            }
        } else if du == 0 {
            if fits(0) {
                pts.push(vec![t0, u0]);
            }
        } else {
            let mut j = 0;
            while t0 + j * step <= max_t && u0 + j * du >= 0 {
                if fits(j) {
                    pts.push(vec![t0 + j * step, u0 + j * du]);
                }
                j += 1;
            }
        }
        pts
    } else {
        let mut ts = Vec::new();
        if lv.g > 0 {
            let mut t = p0.rem_euclid(lv.g);
            while t <= max_t {
                ts.push(t);
                t += lv.g;
            }
        } else if (0..=max_t).contains(&p0) {
            ts.push(p0);
        }
        let mut out: Vec<Vec<i128>> = Vec::new();
        let mut q = p.clone();
        for t in ts {
            if lv.g > 0 {
                let c = (t - p0) / lv.g;
                q.iter_mut().zip(p.iter().zip(&lv.ell)).for_each(|(x, (a, b))| *x = a + c * b);
            }
            let sub = slice_minimal(levels, k + 1, &q[1..], caps, memo);
            let before = out.len();
            for v in sub.iter() {
                if !out[..before].iter().any(|m| m[1..].iter().zip(v).all(|(a, b)| a <= b)) {
                    let mut w = Vec::with_capacity(v.len() + 1);
                    w.push(t);
                    w.extend_from_slice(v);
                    out.push(w);
                }
            }
            if out.iter().any(|m| m[1..].iter().all(|&x| x == 0)) {
                break;
            }
        }
        out
    };
    let out = Rc::new(out);
    if full {
        memo[k].insert(p, out.clone());
    }
    out
}

/// Coordinate caps for the minimal points of `(γ + H) ∩ ℕ^r`. In the
/// homogenized cone of `H × {0} + ℤ(γ, 1)` a point at height one is a convex
/// combination of the vertices `w/d` (rays `w` of height `d > 0`) plus a
/// combination of the height-zero rays, and a minimal point uses each of
/// those with coefficient below one.
fn minimal_point_caps(gamma: &[BigInt], h: &IntegerLattice) -> Result<Vec<i128>> {
    let r = h.ambient();
    let mut gens: Vec<Vec<BigInt>> = h
        .basis()
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.push(BigInt::zero());
            v
        })
        .collect();
    let mut top = gamma.to_vec();
    top.push(BigInt::from(1));
    gens.push(top);
    let lifted = IntegerLattice::from_generators(r + 1, &gens)?;
    let too_big = || Error::Invalid("offset too large for monoid search".into());
    let mut vertex_cap = vec![0i128; r];
    let mut ray_cap = vec![0i128; r];
    for w in extreme_rays(&lifted) {
        let d = w[r].to_i128().ok_or_else(too_big)?;
        for j in 0..r {
            let x = w[j].to_i128().ok_or_else(too_big)?;
            if d > 0 {
                vertex_cap[j] = vertex_cap[j].max(x.div_euclid(d));
            } else {
                ray_cap[j] += x;
            }
        }
    }
    Ok((0..r).map(|j| vertex_cap[j] + ray_cap[j]).collect())
}

/// The ≼-minimal elements of `(γ + H) ∩ ℕ^r`, sorted.
pub fn minimal_points(gamma: &[BigInt], h: &IntegerLattice) -> Result<Vec<Vec<BigInt>>> {
    let r = h.ambient();
    if gamma.len() != r {
        return Err(crate::error::dim_err("offset length differs from lattice rank"));
    }
    let levels = slicing_plan(h)?;
    let caps = if levels.iter().all(|l| l.period.is_some()) {
        vec![i128::MAX; r]
    } else {
        minimal_point_caps(gamma, h)?
    };
    let too_big = || Error::Invalid("offset too large for monoid search".into());
    let g: Vec<i128> = gamma.iter().map(|x| x.to_i128().ok_or_else(too_big)).collect::<Result<_>>()?;
    let mut memo = vec![HashMap::new(); r];
    let mut found = (*slice_minimal(&levels, 0, &g, &caps, &mut memo)).clone();
    found.sort();
    Ok(found.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
}
