//! Two-dimensional non-semisimple families `B Jᵢ B⁻¹ = aᵢ [[1, cᵢ], [0, 1]]`.
//!
//! With `u₁ = B u₀ = (δ₁, δ₂)` and `s(n) = ∑ cᵢnᵢ`, the orbit in the new
//! coordinates is `A(n)·(δ₁ + s(n)δ₂, δ₂)` where `A(n) = ∏ aᵢ^{nᵢ}`, so a
//! constraint row `w` reads `A(n)·(P + Q s(n)) = β`.

use super::equations::{solve_linear_diophantine, solve_mixed, solve_multiplicative};
use super::{OrbitProblem, Raw, Status};
use crate::arith::matrix::dot;
use crate::arith::{MatrixK, QuadElem};
use crate::semigroup::ClassCSet;
use crate::Result;

/// `None` when a row lands outside the supported equation shapes.
pub(crate) fn solve_2x2(problem: &OrbitProblem, b: &MatrixK, a: &[QuadElem], c: &[QuadElem]) -> Result<Option<Raw>> {
    let r = problem.r();
    let f = problem.field;
    let binv = b.inverse().expect("change of basis is invertible");
    let u1 = b.mul_vec(&problem.u0)?;
    let d2 = &u1[1];
    let cons = problem.constraints();
    let mut answer = ClassCSet::full(r);
    for (nu, beta) in cons.rows.iter().zip(&cons.rhs) {
        let w = MatrixK::from_rows(f, 2, std::slice::from_ref(nu)).mul(&binv)?.row(0).to_vec();
        let p = dot(&w, &u1);
        let q = &w[0] * d2;
        let set = if q.is_zero() {
            match (p.is_zero(), beta.is_zero()) {
                (true, true) => ClassCSet::full(r),
                (true, false) | (false, true) => ClassCSet::empty(r),
                (false, false) => solve_multiplicative(a, &beta.div(&p)?)?,
            }
        } else if beta.is_zero() {
            solve_linear_diophantine(c, &(-&p).div(&q)?)?
        } else {
            if a.iter().any(|x| !x.is_integral()) {
                return Ok(None);
            }
            solve_mixed(a, c, &p.div(&q)?, &beta.div(&q)?)?
        };
        answer = answer.intersect(&set)?;
        if answer.is_empty() {
            break;
        }
    }
    Ok(Some((answer, Status::Exact)))
}
