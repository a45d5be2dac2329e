//! Finite unions of cells `γ + (H ∩ ℕ^r)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::hilbert::{extreme_rays, minimal_points};
use super::lattice::IntegerLattice;
use crate::error::{dim_err, Error, Result};
use crate::json::{bigint_from_json, bigint_to_json};

/// The set `offset + (lattice ∩ ℕ^r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetCell {
    lattice: IntegerLattice,
    offset: Vec<BigInt>,
}

impl CosetCell {
    pub fn new(offset: Vec<BigInt>, lattice: IntegerLattice) -> Result<Self> {
        if offset.len() != lattice.ambient() {
            return Err(dim_err("cell offset length differs from lattice rank"));
        }
        if offset.iter().any(|x| x.is_negative()) {
            return Err(Error::Domain("cell offset must be nonnegative".into()));
        }
        Ok(Self { lattice, offset })
    }

    pub fn from_i64(offset: &[i64], gens: &[Vec<i64>]) -> Result<Self> {
        let lattice = IntegerLattice::from_i64(offset.len(), gens)?;
        Self::new(offset.iter().map(|&x| BigInt::from(x)).collect(), lattice)
    }

    pub fn offset(&self) -> &[BigInt] {
        &self.offset
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.offset.len()
    }

    pub fn contains(&self, t: &[BigInt]) -> bool {
        if t.len() != self.offset.len() {
            return false;
        }
        let diff: Vec<BigInt> = t.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        diff.iter().all(|x| !x.is_negative()) && self.lattice.contains(&diff)
    }
}

/// A finite union of cells in ℕ^r. The empty list is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassCSet {
    rank: usize,
    cells: Vec<CosetCell>,
}

impl ClassCSet {
    pub fn empty(rank: usize) -> Self {
        Self { rank, cells: Vec::new() }
    }

    /// All of ℕ^r.
    pub fn full(rank: usize) -> Self {
        let cell = CosetCell { lattice: IntegerLattice::full(rank), offset: vec![BigInt::zero(); rank] };
        Self { rank, cells: vec![cell] }
    }

    pub fn singleton(point: Vec<BigInt>) -> Result<Self> {
        let rank = point.len();
        Ok(Self::from_cells(rank, vec![CosetCell::new(point, IntegerLattice::zero(rank))?]))
    }

    pub fn from_cells(rank: usize, cells: Vec<CosetCell>) -> Self {
        let mut s = Self { rank, cells };
        s.normalize();
        s
    }

    pub fn from_cell(cell: CosetCell) -> Self {
        Self::from_cells(cell.rank(), vec![cell])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cells(&self) -> &[CosetCell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Drops cells covered by a sibling and sorts the rest.
    fn normalize(&mut self) {
        let mut cells = std::mem::take(&mut self.cells);
        cells.sort();
        cells.dedup();
        let mut lattices: Vec<&IntegerLattice> = Vec::new();
        let ids: Vec<usize> = cells
            .iter()
            .map(|c| match lattices.iter().position(|l| **l == c.lattice) {
                Some(i) => i,
                None => {
                    lattices.push(&c.lattice);
                    lattices.len() - 1
                }
            })
            .collect();
        // contains[a][b]: lattice a contains lattice b
        let contains: Vec<Vec<bool>> =
            lattices.iter().map(|a| lattices.iter().map(|b| a.contains_lattice(b)).collect()).collect();
        let mut keep = vec![true; cells.len()];
        for i in 0..cells.len() {
            for j in 0..cells.len() {
                if i == j || !keep[j] || !contains[ids[j]][ids[i]] {
                    continue;
                }
                if cells[j].offset.iter().zip(&cells[i].offset).all(|(a, b)| a <= b) && cells[j].contains(&cells[i].offset) {
                    keep[i] = false;
                    break;
                }
            }
        }
        self.cells = cells.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    }

    pub fn member(&self, t: &[BigInt]) -> bool {
        self.cells.iter().any(|c| c.contains(t))
    }

    pub fn member_u64(&self, t: &[u64]) -> bool {
        let b: Vec<BigInt> = t.iter().map(|&x| BigInt::from(x)).collect();
        self.member(&b)
    }

    pub fn union(&self, other: &ClassCSet) -> Result<ClassCSet> {
        self.check_rank(other)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(Self::from_cells(self.rank, cells))
    }

    pub fn union_all(rank: usize, sets: impl IntoIterator<Item = ClassCSet>) -> Result<ClassCSet> {
        let mut cells = Vec::new();
        for s in sets {
            if s.rank != rank {
                return Err(dim_err("union of sets of different rank"));
            }
            cells.extend(s.cells);
        }
        Ok(Self::from_cells(rank, cells))
    }

    pub fn intersect(&self, other: &ClassCSet) -> Result<ClassCSet> {
        self.check_rank(other)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                cells.extend(intersect_cells(a, b)?.cells);
            }
        }
        Ok(Self::from_cells(self.rank, cells))
    }

    /// `{ x + v : x ∈ A }` for a nonnegative vector `v`.
    pub fn shift(&self, v: &[BigInt]) -> Result<ClassCSet> {
        if v.len() != self.rank {
            return Err(dim_err("shift vector length differs from rank"));
        }
        let cells = self
            .cells
            .iter()
            .map(|c| CosetCell::new(c.offset.iter().zip(v).map(|(a, b)| a + b).collect(), c.lattice.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cells(self.rank, cells))
    }

    /// Points of A with `x_i = a`, with coordinate `i` (0-based) removed.
    pub fn slice(&self, i: usize, a: &BigInt) -> Result<ClassCSet> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        if a.is_negative() {
            return Ok(Self::empty(self.rank - 1));
        }
        let others: Vec<usize> = (0..self.rank).filter(|&j| j != i).collect();
        let mut offset = vec![BigInt::zero(); self.rank];
        offset[i] = a.clone();
        let plane = ClassCSet::from_cell(CosetCell::new(offset, IntegerLattice::coordinate(self.rank, &others))?);
        let cut = self.intersect(&plane)?;
        let mut cells = Vec::new();
        for c in cut.cells {
            let mut off = c.offset.clone();
            off.remove(i);
            cells.push(CosetCell::new(off, c.lattice.delete_coordinate(i)?)?);
        }
        Ok(Self::from_cells(self.rank - 1, cells))
    }

    /// Embeds A into rank r+1 on the hyperplane `x_i = a`.
    pub fn insert_coordinate(&self, i: usize, a: &BigInt) -> Result<ClassCSet> {
        if i > self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank + 1 });
        }
        let mut cells = Vec::new();
        for c in &self.cells {
            let mut off = c.offset.clone();
            off.insert(i, a.clone());
            cells.push(CosetCell::new(off, c.lattice.insert_coordinate(i)?)?);
        }
        Ok(Self::from_cells(self.rank + 1, cells))
    }

    /// Every member inside the box `0..=bound[j]`, sorted.
    pub fn box_enumerate(&self, bound: &[u64]) -> Result<BTreeSet<Vec<u64>>> {
        if bound.len() != self.rank {
            return Err(dim_err("box bound length differs from rank"));
        }
        let mut out = BTreeSet::new();
        for c in &self.cells {
            enumerate_cell(c, bound, &mut out)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "offset": c.offset.iter().map(bigint_to_json).collect::<Vec<_>>(),
                    "basis": c.lattice.basis().iter()
                        .map(|r| r.iter().map(bigint_to_json).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "rank": self.rank, "cells": cells })
    }

    pub fn from_json(v: &Value) -> Result<ClassCSet> {
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("class-C set needs an integer \"rank\"".into()))? as usize;
        let cells_v = v
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("class-C set needs a \"cells\" array".into()))?;
        let mut cells = Vec::new();
        for (k, c) in cells_v.iter().enumerate() {
            let ctx = |what: &str| Error::Invalid(format!("cells[{k}]: {what}"));
            let offset = c
                .get("offset")
                .and_then(Value::as_array)
                .ok_or_else(|| ctx("missing \"offset\""))?
                .iter()
                .map(bigint_from_json)
                .collect::<Result<Vec<_>>>()?;
            let basis = c
                .get("basis")
                .and_then(Value::as_array)
                .ok_or_else(|| ctx("missing \"basis\""))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| ctx("basis rows must be arrays"))?
                        .iter()
                        .map(bigint_from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if offset.len() != rank || basis.iter().any(|r| r.len() != rank) {
                return Err(ctx("length differs from rank"));
            }
            let lattice = IntegerLattice::from_hnf(rank, basis).map_err(|e| ctx(&e.to_string()))?;
            cells.push(CosetCell::new(offset, lattice).map_err(|e| ctx(&e.to_string()))?);
        }
        Ok(Self::from_cells(rank, cells))
    }

    fn check_rank(&self, other: &ClassCSet) -> Result<()> {
        if self.rank != other.rank {
            return Err(dim_err(format!("sets of rank {} and {}", self.rank, other.rank)));
        }
        Ok(())
    }
}

/// `(γ + H) ∩ ℕ^r` as minimal offsets plus `H ∩ ℕ^r`.
pub fn positive_part(gamma: &[BigInt], h: &IntegerLattice) -> Result<ClassCSet> {
    let r = h.ambient();
    if gamma.len() != r {
        return Err(dim_err("offset length differs from lattice rank"));
    }
    // With H ∩ ℕ^r = {0} every cell is a single point.
    let lattice = if extreme_rays(h).is_empty() { IntegerLattice::zero(r) } else { h.clone() };
    let cells = minimal_points(gamma, h)?
        .into_iter()
        .map(|b| CosetCell::new(b, lattice.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassCSet::from_cells(r, cells))
}

/// `(γ1 + H1 ∩ ℕ^r) ∩ (γ2 + H2 ∩ ℕ^r)`.
pub fn intersect_cells(a: &CosetCell, b: &CosetCell) -> Result<ClassCSet> {
    let r = a.rank();
    if b.rank() != r {
        return Err(dim_err("cells of different rank"));
    }
    let Some(common) = coset_intersection(&a.offset, &a.lattice, &b.offset, &b.lattice)? else {
        return Ok(ClassCSet::empty(r));
    };
    let (gamma, h) = common;
    let mu: Vec<BigInt> = a.offset.iter().zip(&b.offset).map(|(x, y)| x.max(y).clone()).collect();
    let rel: Vec<BigInt> = gamma.iter().zip(&mu).map(|(g, m)| g - m).collect();
    positive_part(&rel, &h)?.shift(&mu)
}

/// `(γ1 + H1) ∩ (γ2 + H2)` over ℤ^r as a coset `γ + (H1 ∩ H2)`.
pub fn coset_intersection(
    g1: &[BigInt],
    h1: &IntegerLattice,
    g2: &[BigInt],
    h2: &IntegerLattice,
) -> Result<Option<(Vec<BigInt>, IntegerLattice)>> {
    let r = h1.ambient();
    let diff: Vec<BigInt> = g2.iter().zip(g1).map(|(a, b)| a - b).collect();
    let mut stacked = h1.basis().clone();
    stacked.extend(h2.basis().iter().cloned());
    let sol = if stacked.is_empty() {
        if diff.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        }
    } else {
        crate::arith::intmat::solve_left(&stacked, r, &diff)?
    };
    let Some(x) = sol else { return Ok(None) };
    let k = h1.rank();
    let step = crate::arith::intmat::vec_mat(&x[..k], h1.basis(), r);
    let gamma: Vec<BigInt> = g1.iter().zip(&step).map(|(a, b)| a + b).collect();
    Ok(Some((gamma, h1.intersect(h2)?)))
}

/// Splits a cell along the classes of `H / N·H`.
///
/// Every minimal point of a class is `∑ cⱼbⱼ` over the Hilbert basis with
/// `0 ≤ cⱼ < N` (otherwise subtract `N·bⱼ`), and a partial sum dominating
/// another of its class can never complete to a minimal point, so the sums
/// are built one basis vector at a time keeping only minimal ones per class.
pub fn refine_mod(cell: &CosetCell, n: u64) -> Result<ClassCSet> {
    if n == 0 {
        return Err(Error::Domain("refinement modulus must be positive".into()));
    }
    let r = cell.rank();
    let nh = cell.lattice.scale(&BigInt::from(n))?;
    let too_big = || Error::Invalid("lattice entries too large to refine".into());
    let rows = nh.basis_i128().ok_or_else(too_big)?;
    let pivots: Vec<usize> = rows.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    let reduce = |v: &[i128]| -> Vec<i128> {
        let mut out = v.to_vec();
        for (row, &p) in rows.iter().zip(&pivots) {
            let q = out[p].div_euclid(row[p]);
            if q != 0 {
                for (o, x) in out.iter_mut().zip(row) {
                    *o -= q * x;
                }
            }
        }
        out
    };
    let hb: Vec<Vec<i128>> = super::hilbert::try_hilbert_basis(&cell.lattice)?
        .iter()
        .map(|v| v.iter().map(|x| x.to_i128().ok_or_else(too_big)).collect())
        .collect::<Result<_>>()?;
    let zero = vec![0i128; r];
    let mut classes: BTreeMap<Vec<i128>, Vec<Vec<i128>>> = BTreeMap::new();
    classes.insert(reduce(&zero), vec![zero]);
    for b in &hb {
        let mut next: BTreeMap<Vec<i128>, Vec<Vec<i128>>> = BTreeMap::new();
        for pts in classes.values() {
            for z in pts {
                let mut w = z.clone();
                for _ in 0..n {
                    next.entry(reduce(&w)).or_default().push(w.clone());
                    for (x, y) in w.iter_mut().zip(b) {
                        *x += y;
                    }
                }
            }
        }
        classes = next.into_iter().map(|(k, v)| (k, super::minimal_elements(&v))).collect();
    }
    let mut cells = Vec::new();
    for pts in classes.into_values() {
        for m in pts {
            let off = m.iter().zip(&cell.offset).map(|(a, b)| BigInt::from(*a) + b).collect();
            cells.push(CosetCell::new(off, nh.clone())?);
        }
    }
    Ok(ClassCSet::from_cells(r, cells))
}

fn enumerate_cell(c: &CosetCell, bound: &[u64], out: &mut BTreeSet<Vec<u64>>) -> Result<()> {
    let r = c.rank();
    let mut upper = Vec::with_capacity(r);
    for (b, o) in bound.iter().zip(&c.offset) {
        let o = o.to_i128().unwrap_or(i128::MAX);
        let room = *b as i128 - o;
        if room < 0 {
            return Ok(());
        }
        upper.push(room);
    }
    let rows = c
        .lattice
        .basis_i128()
        .ok_or_else(|| Error::Invalid("lattice entries too large to enumerate".into()))?;
    let pivots: Vec<usize> = rows.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    let offset: Vec<u64> = c.offset.iter().map(|x| x.to_u64().unwrap()).collect();
    let mut acc = vec![0i128; r];
    descend(&rows, &pivots, &upper, 0, &mut acc, &offset, out);
    Ok(())
}

// Depth-first over HNF coefficients. After fixing rows 0..k, the coordinates
// before the next pivot are final and must already be in range.
fn descend(
    rows: &[Vec<i128>],
    pivots: &[usize],
    upper: &[i128],
    k: usize,
    acc: &mut Vec<i128>,
    offset: &[u64],
    out: &mut BTreeSet<Vec<u64>>,
) {
    let r = upper.len();
    let settled_to = if k < rows.len() { pivots[k] } else { r };
    let settled_from = if k == 0 { 0 } else { pivots[k - 1] };
    for j in settled_from..settled_to {
        if acc[j] < 0 || acc[j] > upper[j] {
            return;
        }
    }
    if k == rows.len() {
        out.insert(acc.iter().zip(offset).map(|(&a, &o)| a as u64 + o).collect());
        return;
    }
    let row = &rows[k];
    let p = pivots[k];
    let piv = row[p];
    // acc[p] + c·piv ∈ [0, upper[p]]
    let lo = div_ceil(-acc[p], piv);
    let hi = div_floor(upper[p] - acc[p], piv);
    for c in lo..=hi {
        for (a, b) in acc.iter_mut().zip(row) {
            *a += c * b;
        }
        descend(rows, pivots, upper, k + 1, acc, offset, out);
        for (a, b) in acc.iter_mut().zip(row) {
            *a -= c * b;
        }
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// The unit vector `e_i` of ℤ^r.
pub fn unit_vector(r: usize, i: usize) -> Vec<BigInt> {
    (0..r).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }).collect()
}
