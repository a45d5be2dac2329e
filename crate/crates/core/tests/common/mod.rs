//! Seeded instance generators shared by the oracle and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use returnset::arith::{Field, MatrixK, QuadElem, VectorK};
use returnset::orbit::{orbit_point, OrbitProblem};

pub const Q: Field = Field::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn qv(v: &[i64]) -> VectorK {
    v.iter().map(|&x| QuadElem::from_int(Q, x)).collect()
}

fn small_vec(rng: &mut ChaCha8Rng, g: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..g).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn nonzero(rng: &mut ChaCha8Rng, choices: &[i64]) -> i64 {
    *choices.choose(rng).expect("nonempty choices")
}

/// A product of a few elementary integer matrices, so det = ±1.
pub fn unimodular(rng: &mut ChaCha8Rng, g: usize) -> MatrixK {
    let mut m = MatrixK::identity(Q, g);
    for _ in 0..(2 * g) {
        let i = rng.gen_range(0..g);
        let j = rng.gen_range(0..g);
        if i == j {
            continue;
        }
        let mut e = MatrixK::identity(Q, g);
        e.set(i, j, QuadElem::from_int(Q, rng.gen_range(-2..=2)));
        m = m.mul(&e).expect("square");
    }
    if rng.gen_bool(0.3) {
        let mut d = MatrixK::identity(Q, g);
        d.set(0, 0, QuadElem::from_int(Q, -1));
        m = m.mul(&d).expect("square");
    }
    m
}

fn conj(p: &MatrixK, pinv: &MatrixK, m: &MatrixK) -> MatrixK {
    p.mul(m).and_then(|x| x.mul(pinv)).expect("square")
}

fn random_tuple(rng: &mut ChaCha8Rng, r: usize, hi: u64) -> Vec<i64> {
    (0..r).map(|_| rng.gen_range(0..=hi) as i64).collect()
}

fn point_at(p: &OrbitProblem, t: &[i64]) -> VectorK {
    orbit_point(p, t).expect("nonnegative tuple")
}

/// `J = P D P⁻¹` with targets spanned by eigenvectors: some eigen-coordinates
/// are pinned, the others free.
pub fn diagonalizable(rng: &mut ChaCha8Rng) -> OrbitProblem {
    let g = rng.gen_range(2..=3);
    let r = rng.gen_range(1..=2);
    let p = unimodular(rng, g);
    let pinv = p.inverse().expect("unimodular");
    let eig = [-3, -2, -1, 1, 2, 3];
    let js: Vec<MatrixK> = (0..r)
        .map(|_| {
            let mut d = MatrixK::zeros(Q, g, g);
            for k in 0..g {
                d.set(k, k, QuadElem::from_int(Q, nonzero(rng, &eig)));
            }
            conj(&p, &pinv, &d)
        })
        .collect();
    let y0 = small_vec(rng, g, -2, 3);
    let u0 = p.mul_vec(&qv(&y0)).expect("dims");
    let probe = OrbitProblem::new(Q, js.clone(), u0.clone(), vec![QuadElem::zero(Q); g], Vec::new()).expect("valid");
    let t = random_tuple(rng, r, 4);
    let y_t = pinv.mul_vec(&point_at(&probe, &t)).expect("dims");
    let pinned: Vec<bool> = loop {
        let s: Vec<bool> = (0..g).map(|_| rng.gen_bool(0.5)).collect();
        if s.iter().any(|&b| b) {
            break s;
        }
    };
    let reachable = rng.gen_bool(0.7);
    let mut ystar = vec![QuadElem::zero(Q); g];
    let mut basis = Vec::new();
    for k in 0..g {
        if pinned[k] {
            ystar[k] = if reachable { y_t[k].clone() } else { QuadElem::from_int(Q, rng.gen_range(-9..=9)) };
        } else {
            basis.push(p.column(k));
        }
    }
    let v0 = p.mul_vec(&ystar).expect("dims");
    OrbitProblem::new(Q, js, u0, v0, basis).expect("valid")
}

fn shift(g: usize) -> MatrixK {
    let mut n = MatrixK::zeros(Q, g, g);
    for i in 0..g - 1 {
        n.set(i, i + 1, QuadElem::one(Q));
    }
    n
}

/// `Jᵢ = aᵢ I + bᵢ N + cᵢ N²` with `N` a conjugated 3×3 shift; the target
/// is a line through the origin.
pub fn line(rng: &mut ChaCha8Rng) -> OrbitProblem {
    let g = 3;
    let r = rng.gen_range(1..=2);
    let q = unimodular(rng, g);
    let qinv = q.inverse().expect("unimodular");
    let n = conj(&q, &qinv, &shift(g));
    let n2 = n.mul(&n).expect("square");
    let js: Vec<MatrixK> = (0..r)
        .map(|i| {
            let a = nonzero(rng, &[-3, -2, -1, 1, 2, 3]);
            let b = if i == 0 { nonzero(rng, &[-2, -1, 1, 2]) } else { rng.gen_range(-2..=2) };
            let c = rng.gen_range(-1..=1);
            MatrixK::scalar(&QuadElem::from_int(Q, a), g)
                .add(&n.scale(&QuadElem::from_int(Q, b)))
                .and_then(|m| m.add(&n2.scale(&QuadElem::from_int(Q, c))))
                .expect("square")
        })
        .collect();
    let u0 = loop {
        let v = small_vec(rng, g, -2, 2);
        if v.iter().any(|&x| x != 0) {
            break qv(&v);
        }
    };
    let probe = OrbitProblem::new(Q, js.clone(), u0.clone(), vec![QuadElem::zero(Q); g], Vec::new()).expect("valid");
    let w = if rng.gen_bool(0.6) {
        point_at(&probe, &random_tuple(rng, r, 3))
    } else {
        loop {
            let v = small_vec(rng, g, -2, 2);
            if v.iter().any(|&x| x != 0) {
                break qv(&v);
            }
        }
    };
    OrbitProblem::new(Q, js, u0, vec![QuadElem::zero(Q); g], vec![w]).expect("valid")
}

/// `Jᵢ = aᵢ I + bᵢ N` with `N = x yᵀ`, `yᵀx = 0`, a rank-one nilpotent.
pub fn two_by_two(rng: &mut ChaCha8Rng) -> OrbitProblem {
    let r = rng.gen_range(1..=2);
    let (p, q) = loop {
        let p = rng.gen_range(-2i64..=2);
        let q = rng.gen_range(-2i64..=2);
        if p != 0 || q != 0 {
            break (p, q);
        }
    };
    let n = MatrixK::from_i64(Q, &[vec![-p * q, p * p], vec![-q * q, p * q]]);
    let js: Vec<MatrixK> = (0..r)
        .map(|i| {
            let a = nonzero(rng, &[-3, -2, -1, 1, 2, 3]);
            let b = if i == 0 { nonzero(rng, &[-2, -1, 1, 2]) } else { rng.gen_range(-2..=2) };
            MatrixK::scalar(&QuadElem::from_int(Q, a), 2).add(&n.scale(&QuadElem::from_int(Q, b))).expect("square")
        })
        .collect();
    let u0 = qv(&small_vec(rng, 2, -3, 3));
    let probe = OrbitProblem::new(Q, js.clone(), u0.clone(), qv(&[0, 0]), Vec::new()).expect("valid");
    let hit = point_at(&probe, &random_tuple(rng, r, 4));
    let (v0, basis) = match rng.gen_range(0..4) {
        0 => (hit, Vec::new()),
        1 => (qv(&small_vec(rng, 2, -6, 6)), Vec::new()),
        2 => (hit, vec![qv(&small_vec(rng, 2, -2, 2))]),
        _ => (qv(&small_vec(rng, 2, -6, 6)), vec![qv(&small_vec(rng, 2, -2, 2))]),
    };
    let basis = basis.into_iter().filter(|w| w.iter().any(|x| !x.is_zero())).collect();
    OrbitProblem::new(Q, js, u0, v0, basis).expect("valid")
}

fn cycle(g: usize) -> MatrixK {
    let mut m = MatrixK::zeros(Q, g, g);
    for i in 0..g {
        m.set((i + 1) % g, i, QuadElem::one(Q));
    }
    m
}

/// Signed or doubled powers of a 5-cycle and a point target.
pub fn point(rng: &mut ChaCha8Rng) -> OrbitProblem {
    let g = 5;
    let r = rng.gen_range(1..=2);
    let c = cycle(g);
    let js: Vec<MatrixK> = (0..r)
        .map(|_| {
            let k = rng.gen_range(0..g as u64);
            let s = nonzero(rng, &[-2, -1, 1, 1, 2]);
            c.pow(k).expect("square").scale(&QuadElem::from_int(Q, s))
        })
        .collect();
    let u0 = qv(&small_vec(rng, g, -2, 2));
    let probe = OrbitProblem::new(Q, js.clone(), u0.clone(), vec![QuadElem::zero(Q); g], Vec::new()).expect("valid");
    let v0 = if rng.gen_bool(0.75) { point_at(&probe, &random_tuple(rng, r, 6)) } else { qv(&small_vec(rng, g, -2, 2)) };
    OrbitProblem::new(Q, js, u0, v0, Vec::new()).expect("valid")
}

pub type Generator = fn(&mut ChaCha8Rng) -> OrbitProblem;

pub const PATHS: [(&str, Generator); 4] =
    [("diagonalizable", diagonalizable), ("line", line), ("2x2", two_by_two), ("point", point)];

/// A lattice given by linearly independent generators, with membership
/// decided by Cramer's rule on a nonsingular minor. Independent of the
/// library's normal forms.
#[derive(Debug, Clone)]
pub struct BruteLattice {
    pub r: usize,
    pub gens: Vec<Vec<i64>>,
    cols: Vec<usize>,
    det: i128,
    adj: Vec<Vec<i128>>,
}

fn det(m: &[Vec<i128>]) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << r)).filter(|m| m.count_ones() as usize == k).map(|m| (0..r).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

impl BruteLattice {
    pub fn new(r: usize, gens: Vec<Vec<i64>>) -> Option<BruteLattice> {
        let k = gens.len();
        for cols in subsets(r, k) {
            let m: Vec<Vec<i128>> = gens.iter().map(|g| cols.iter().map(|&c| g[c] as i128).collect()).collect();
            let d = det(&m);
            if d == 0 {
                continue;
            }
            // adj[j][i] = cofactor(i, j), so c = x_S · adj / d solves c · M = x_S.
            let mut adj = vec![vec![0i128; k]; k];
            for i in 0..k {
                for j in 0..k {
                    let minor: Vec<Vec<i128>> = m
                        .iter()
                        .enumerate()
                        .filter(|&(a, _)| a != i)
                        .map(|(_, row)| row.iter().enumerate().filter(|&(b, _)| b != j).map(|(_, &x)| x).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    adj[j][i] = s * det(&minor);
                }
            }
            return Some(BruteLattice { r, gens, cols, det: d, adj });
        }
        None
    }

    pub fn random(rng: &mut ChaCha8Rng, r: usize, max_k: usize, entry: i64) -> BruteLattice {
        loop {
            let k = rng.gen_range(0..=max_k.min(r));
            let gens: Vec<Vec<i64>> = (0..k).map(|_| small_vec(rng, r, -entry, entry)).collect();
            if let Some(l) = BruteLattice::new(r, gens) {
                return l;
            }
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let k = self.gens.len();
        let mut c = vec![0i128; k];
        for (j, cj) in c.iter_mut().enumerate() {
            let num: i128 = self.cols.iter().enumerate().map(|(i, &col)| x[col] as i128 * self.adj[i][j]).sum();
            if num % self.det != 0 {
                return false;
            }
            *cj = num / self.det;
        }
        (0..self.r).all(|t| self.gens.iter().zip(&c).map(|(g, &cj)| g[t] as i128 * cj).sum::<i128>() == x[t] as i128)
    }

    pub fn lattice(&self) -> returnset::semigroup::IntegerLattice {
        returnset::semigroup::IntegerLattice::from_i64(self.r, &self.gens).expect("valid generators")
    }
}

/// `offset + (H ∩ ℕ^r)` in brute-force form.
#[derive(Debug, Clone)]
pub struct BruteCell {
    pub offset: Vec<i64>,
    pub h: BruteLattice,
}

impl BruteCell {
    pub fn random(rng: &mut ChaCha8Rng, r: usize) -> BruteCell {
        BruteCell { offset: small_vec(rng, r, 0, 5), h: BruteLattice::random(rng, r, r, 3) }
    }

    pub fn contains(&self, t: &[i64]) -> bool {
        let d: Vec<i64> = t.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        d.iter().all(|&x| x >= 0) && self.h.contains(&d)
    }

    pub fn cell(&self) -> returnset::semigroup::CosetCell {
        returnset::semigroup::CosetCell::from_i64(&self.offset, &self.h.gens).expect("valid cell")
    }
}

pub fn brute_set(rng: &mut ChaCha8Rng, r: usize, max_cells: usize) -> Vec<BruteCell> {
    let n = rng.gen_range(1..=max_cells);
    (0..n).map(|_| BruteCell::random(rng, r)).collect()
}

pub fn to_set(r: usize, cells: &[BruteCell]) -> returnset::semigroup::ClassCSet {
    returnset::semigroup::ClassCSet::from_cells(r, cells.iter().map(BruteCell::cell).collect())
}

pub fn in_brute(cells: &[BruteCell], t: &[i64]) -> bool {
    cells.iter().any(|c| c.contains(t))
}

/// Every tuple of `0..=b` per coordinate.
pub fn box_points(bounds: &[u64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|p| (0..=b as i64).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn as_u64(t: &[i64]) -> Vec<u64> {
    t.iter().map(|&x| x as u64).collect()
}

/// Calls `f` on every tuple of the box in lexicographic order.
pub fn for_each_point(bounds: &[u64], mut f: impl FnMut(&[i64])) {
    let r = bounds.len();
    let mut t = vec![0i64; r];
    loop {
        f(&t);
        let mut k = r;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if (t[k] as u64) < bounds[k] {
                t[k] += 1;
                break;
            }
            t[k] = 0;
        }
    }
}

fn compare(name: &str, got: &std::collections::BTreeSet<Vec<u64>>, bounds: &[u64], oracle: impl Fn(&[i64]) -> bool) -> Result<(), String> {
    let mut count = 0usize;
    let mut err = None;
    for_each_point(bounds, |t| {
        if err.is_some() {
            return;
        }
        if oracle(t) {
            count += 1;
            if !got.contains(&as_u64(t)) {
                err = Some(format!("{name}: missing {t:?}"));
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if count != got.len() {
        let extra = got.iter().find(|t| !oracle(&t.iter().map(|&x| x as i64).collect::<Vec<_>>()));
        return Err(format!("{name}: spurious {extra:?}"));
    }
    Ok(())
}

/// One randomized instance of the class-C algebra against pointwise
/// definitions: intersect, slice, positive_part, and refine_mod.
pub fn classc_instance(rng: &mut ChaCha8Rng, r: usize, bound: u64) -> Result<(), String> {
    use num_bigint::BigInt;
    use returnset::semigroup::classc::{positive_part, refine_mod};
    let bounds = vec![bound; r];
    let fmt = |e: returnset::Error| e.to_string();
    let a = brute_set(rng, r, 2);
    let b = brute_set(rng, r, 2);
    let (sa, sb) = (to_set(r, &a), to_set(r, &b));

    let inter = sa.intersect(&sb).map_err(fmt)?.box_enumerate(&bounds).map_err(fmt)?;
    compare("intersect", &inter, &bounds, |t| in_brute(&a, t) && in_brute(&b, t))?;

    let union = sa.union(&sb).map_err(fmt)?.box_enumerate(&bounds).map_err(fmt)?;
    compare("union", &union, &bounds, |t| in_brute(&a, t) || in_brute(&b, t))?;

    if r >= 2 {
        let i = rng.gen_range(0..r);
        let v = rng.gen_range(0..=8i64);
        let sl = sa.slice(i, &BigInt::from(v)).map_err(fmt)?.box_enumerate(&bounds[1..]).map_err(fmt)?;
        compare("slice", &sl, &bounds[1..], |t| {
            let mut full = t.to_vec();
            full.insert(i, v);
            in_brute(&a, &full)
        })?;
    }

    let h = BruteLattice::random(rng, r, r, 3);
    let gamma = small_vec(rng, r, -5, 5);
    let gb: Vec<BigInt> = gamma.iter().map(|&x| BigInt::from(x)).collect();
    let pp = positive_part(&gb, &h.lattice()).map_err(fmt)?.box_enumerate(&bounds).map_err(fmt)?;
    compare("positive_part", &pp, &bounds, |t| {
        let d: Vec<i64> = t.iter().zip(&gamma).map(|(x, g)| x - g).collect();
        h.contains(&d)
    })?;

    let n = rng.gen_range(1..=3u64);
    let cell = &a[0];
    let refined = refine_mod(&cell.cell(), n).map_err(fmt)?;
    let rb = refined.box_enumerate(&bounds).map_err(fmt)?;
    compare("refine_mod", &rb, &bounds, |t| cell.contains(t))?;
    Ok(())
}

/// A random lattice with entries up to 5 against its Hilbert basis: every
/// basis vector lies in `H ∩ ℕ^r`, no basis vector dominates another, and
/// every monoid point of the box is an ℕ-combination of the basis.
pub fn hilbert_instance(rng: &mut ChaCha8Rng, r: usize, bound: u64) -> Result<(), String> {
    let h = BruteLattice::random(rng, r, r, 5);
    let basis: Vec<Vec<i64>> = returnset::semigroup::hilbert::try_hilbert_basis(&h.lattice())
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|b| b.iter().map(|x| i64::try_from(x).expect("small entries")).collect())
        .collect();
    for b in &basis {
        if b.iter().any(|&x| x < 0) || b.iter().all(|&x| x == 0) || !h.contains(b) {
            return Err(format!("{:?}: {b:?} is not a nonzero monoid element", h.gens));
        }
        if let Some(c) = basis.iter().find(|c| *c != b && c.iter().zip(b).all(|(x, y)| x <= y)) {
            return Err(format!("{:?}: {b:?} is reducible by {c:?}", h.gens));
        }
    }
    let side = bound as usize + 1;
    let index = |t: &[i64]| t.iter().fold(0usize, |acc, &x| acc * side + x as usize);
    let mut reach = vec![false; side.pow(r as u32)];
    let mut err = None;
    for_each_point(&vec![bound; r], |t| {
        if err.is_some() {
            return;
        }
        let ok = t.iter().all(|&x| x == 0)
            || basis.iter().any(|b| {
                let d: Vec<i64> = t.iter().zip(b).map(|(x, y)| x - y).collect();
                d.iter().all(|&x| x >= 0) && reach[index(&d)]
            });
        reach[index(t)] = ok;
        if !ok && h.contains(t) {
            err = Some(format!("{:?}: {t:?} is not generated by {basis:?}", h.gens));
        }
    });
    err.map_or(Ok(()), Err)
}

/// Hits of the problem on the box by repeated multiplication, with the
/// target tested by a rank comparison.
pub fn brute_hits(p: &OrbitProblem, bounds: &[u64]) -> std::collections::BTreeSet<Vec<u64>> {
    let g = p.g;
    let base = MatrixK::from_columns(p.field, g, &p.v_basis).rank();
    let on_target = |x: &VectorK| {
        let d: VectorK = x.iter().zip(&p.v0).map(|(a, b)| a - b).collect();
        let mut cols = p.v_basis.clone();
        cols.push(d);
        MatrixK::from_columns(p.field, g, &cols).rank() == base
    };
    let mut out = std::collections::BTreeSet::new();
    let mut stack = vec![(0usize, p.u0.clone(), Vec::new())];
    while let Some((k, x, t)) = stack.pop() {
        if k == bounds.len() {
            if on_target(&x) {
                out.insert(t);
            }
            continue;
        }
        let mut y = x;
        for n in 0..=bounds[k] {
            let mut tn = t.clone();
            tn.push(n);
            stack.push((k + 1, y.clone(), tn));
            y = p.j[k].mul_vec(&y).expect("dims");
        }
    }
    out
}

/// `P J P⁻¹` for every map, with the start, target point, and directions
/// moved by `P`.
pub fn conjugate(p: &OrbitProblem, q: &MatrixK) -> OrbitProblem {
    let qinv = q.inverse().expect("invertible");
    let js = p.j.iter().map(|j| conj(q, &qinv, j)).collect();
    let mv = |v: &VectorK| q.mul_vec(v).expect("dims");
    OrbitProblem::new(p.field, js, mv(&p.u0), mv(&p.v0), p.v_basis.iter().map(mv).collect()).expect("valid")
}
