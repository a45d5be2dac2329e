//! Line and point targets. The solutions in ℤ^r form one coset of a
//! stabilizer subgroup, so a box of hits and a symbolically checked
//! lattice hull determine the answer.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::eval::Evaluator;
use super::{big, default_bounds, parallel, OrbitProblem, Raw, Status};
use crate::arith::VectorK;
use crate::semigroup::classc::positive_part;
use crate::semigroup::{ClassCSet, IntegerLattice};
use crate::Result;

fn stabilizes(problem: &OrbitProblem, h: &[BigInt], anchor: &VectorK, same: &dyn Fn(&VectorK, &VectorK) -> bool) -> Result<bool> {
    let Some(e) = h.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>() else { return Ok(false) };
    let x = problem.power(&e)?.mul_vec(anchor)?;
    Ok(same(&x, anchor))
}

fn coset_search(problem: &OrbitProblem, anchor: &VectorK, same: &dyn Fn(&VectorK, &VectorK) -> bool) -> Result<Raw> {
    let r = problem.r();
    let eval = Evaluator::new(problem)?;
    let stab_eval = Evaluator::new(&problem.with_start(anchor.clone()))?;
    let base = default_bounds(r);
    let mut last = ClassCSet::empty(r);
    let mut reason = String::new();
    for scale in [1u64, 2] {
        let bounds: Vec<u64> = base.iter().map(|b| b * scale).collect();
        let hits = eval.hits(&bounds);
        let Some(first) = hits.iter().next().cloned() else {
            return Ok((ClassCSet::empty(r), Status::Conjectured { bounds, box_checked: true }));
        };
        let a = big(&first);
        let mut gens: Vec<Vec<BigInt>> = hits.iter().map(|h| big(h).iter().zip(&a).map(|(x, y)| x - y).collect()).collect();
        gens.extend(stab_eval.hits(&bounds).iter().map(|s| big(s)));
        let lattice = IntegerLattice::from_generators(r, &gens)?;
        let mut sound = true;
        for b in lattice.basis() {
            if !stabilizes(problem, b, anchor, same)? {
                sound = false;
                break;
            }
        }
        if !sound {
            reason = format!("hull basis failed the stabilizer check on box {bounds:?}");
            continue;
        }
        let candidate = positive_part(&a, &lattice)?;
        if candidate.box_enumerate(&bounds)? == hits {
            return Ok((candidate, Status::Conjectured { bounds, box_checked: true }));
        }
        reason = format!("coset hull disagrees with the hits on box {bounds:?}");
        last = candidate;
    }
    Ok((last, Status::Partial(reason)))
}

/// `v₀ = 0` and `𝒱 = span(w)`.
pub(crate) fn solve_line(problem: &OrbitProblem, w: &VectorK) -> Result<Raw> {
    if problem.u0.iter().all(|x| x.is_zero()) {
        return Ok((ClassCSet::full(problem.r()), Status::Exact));
    }
    coset_search(problem, w, &|x, w| parallel(x, w))
}

/// `𝒱 = 0`, target `β = v₀`.
pub(crate) fn solve_point_target(problem: &OrbitProblem) -> Result<Raw> {
    let beta = problem.v0.clone();
    coset_search(problem, &beta, &|x, b| x == b)
}
