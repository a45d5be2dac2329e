//! Box search, greedy cell growth, and symbolic checks of the cells.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::eval::Evaluator;
use super::{big, finalize, OrbitProblem, Raw, SolutionSet, Status};
use crate::arith::matrix::{dot, vec_sub, vectors_rank};
use crate::arith::VectorK;
use crate::semigroup::hilbert::try_hilbert_basis;
use crate::semigroup::{ClassCSet, CosetCell, IntegerLattice};
use crate::Result;

const MAX_CANDIDATES: usize = 64;
const MAX_CHECK_POINTS: u64 = 300_000;

fn box_size(bounds: &[u64]) -> u64 {
    bounds.iter().map(|&b| b + 1).product()
}

fn leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Covers the hits by cells `τ + (L ∩ ℕ^r)`, taking the smallest uncovered
/// hit as `τ` and adding a direction to `L` only if its double stays in the
/// box and the grown cell meets nothing but hits.
fn grow_cells(hits: &BTreeSet<Vec<u64>>, bounds: &[u64]) -> Result<ClassCSet> {
    let r = bounds.len();
    let mut uncovered = hits.clone();
    let mut cells = Vec::new();
    while let Some(tau) = uncovered.iter().next().cloned() {
        let mut cands: Vec<&Vec<u64>> = hits.iter().filter(|h| **h != tau && leq(&tau, h)).collect();
        cands.sort_by_key(|h| (h.iter().sum::<u64>(), (*h).clone()));
        let offset = big(&tau);
        let mut lattice = IntegerLattice::zero(r);
        let mut cell = CosetCell::new(offset.clone(), lattice.clone())?;
        let mut tried = 0;
        for h in cands {
            let d: Vec<BigInt> = h.iter().zip(&tau).map(|(x, y)| BigInt::from(x - y)).collect();
            if lattice.contains(&d) {
                continue;
            }
            tried += 1;
            if tried > MAX_CANDIDATES {
                break;
            }
            if !h.iter().zip(&tau).zip(bounds).all(|((x, y), b)| 2 * x - y <= *b) {
                continue;
            }
            let grown = lattice.sum(&IntegerLattice::from_generators(r, &[d])?)?;
            let trial = CosetCell::new(offset.clone(), grown.clone())?;
            let covered = ClassCSet::from_cell(trial.clone()).box_enumerate(bounds)?;
            if covered.is_subset(hits) {
                lattice = grown;
                cell = trial;
            }
        }
        for t in ClassCSet::from_cell(cell.clone()).box_enumerate(bounds)? {
            uncovered.remove(&t);
        }
        cells.push(cell);
    }
    Ok(ClassCSet::from_cells(r, cells))
}

pub(crate) fn conjecture_raw(problem: &OrbitProblem, bounds: &[u64]) -> Result<Raw> {
    let eval = Evaluator::new(problem)?;
    let mut bounds = bounds.to_vec();
    let mut fail = String::new();
    let mut answer = ClassCSet::empty(problem.r());
    for round in 0..2 {
        let check: Vec<u64> = bounds.iter().map(|b| 2 * b).collect();
        if round > 0 && box_size(&check) > MAX_CHECK_POINTS {
            break;
        }
        let hits = eval.hits(&bounds);
        answer = grow_cells(&hits, &bounds)?;
        let truth = eval.hits(&check);
        let claimed = answer.box_enumerate(&check)?;
        if truth == claimed {
            return Ok((answer, Status::Conjectured { bounds: check, box_checked: true }));
        }
        if let Some(m) = truth.difference(&claimed).next() {
            fail = format!("no class-C pattern fits: tuple {m:?} is a hit outside the conjectured cells on box {check:?}");
        } else if let Some(s) = claimed.difference(&truth).next() {
            fail = format!("no class-C pattern fits: conjectured tuple {s:?} is not a hit on box {check:?}");
        }
        bounds = check;
    }
    Ok((answer, Status::Partial(fail)))
}

/// Conjectures a class-C answer from a box of hits and certifies what it
/// can: the doubled box is compared against brute force and each cell is
/// checked symbolically with [`cell_preserves_target`].
pub fn conjecture_and_verify(problem: &OrbitProblem, bounds: &[u64]) -> Result<SolutionSet> {
    problem.validate()?;
    if bounds.len() != problem.r() {
        return Err(crate::error::dim_err("box rank differs from r"));
    }
    let (answer, status) = conjecture_raw(problem, bounds)?;
    finalize(problem, answer, status)
}

/// Proves `γ + (H ∩ ℕ^r) ⊆ E` when it holds: with `p` the orbit point at
/// `γ` and `Mₕ = ∏ Jᵢ^{hᵢ}` over the Hilbert basis, the points
/// `{ M p : M in the generated monoid }` span the affine space `p + D`,
/// where `D` is the smallest `Mₕ`-stable space containing every `Mₕp − p`.
/// The cell lies in `E` iff `p` is in the target and `D ⊆ 𝒱`.
pub fn cell_preserves_target(problem: &OrbitProblem, cell: &CosetCell) -> Result<bool> {
    let Some(offset) = cell.offset().iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() else {
        return Ok(false);
    };
    let p = problem.power(&offset)?.mul_vec(&problem.u0)?;
    if !problem.in_target(&p) {
        return Ok(false);
    }
    let Ok(gens) = try_hilbert_basis(cell.lattice()) else { return Ok(false) };
    let mut mats = Vec::new();
    for h in &gens {
        let Some(e) = h.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() else { return Ok(false) };
        mats.push(problem.power(&e)?);
    }
    let rows = problem.constraints().rows;
    let mut span: Vec<VectorK> = Vec::new();
    let mut queue: Vec<VectorK> = Vec::new();
    let consider = |v: VectorK, span: &mut Vec<VectorK>, queue: &mut Vec<VectorK>| -> bool {
        if rows.iter().any(|nu| !dot(nu, &v).is_zero()) {
            return false;
        }
        let mut test = span.clone();
        test.push(v.clone());
        if vectors_rank(problem.field, &test, problem.g) > span.len() {
            span.push(v.clone());
            queue.push(v);
        }
        true
    };
    for m in &mats {
        if !consider(vec_sub(&m.mul_vec(&p)?, &p), &mut span, &mut queue) {
            return Ok(false);
        }
    }
    while let Some(v) = queue.pop() {
        for m in &mats {
            if !consider(m.mul_vec(&v)?, &mut span, &mut queue) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
