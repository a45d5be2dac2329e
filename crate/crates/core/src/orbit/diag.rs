//! Simultaneously diagonalizable maps: each constraint row becomes an
//! exponential polynomial `∑_χ C_χ χ(n) = β` in the joint characters.

use std::collections::BTreeMap;

use super::conjecture::conjecture_raw;
use super::equations::solve_multiplicative;
use super::{default_bounds, OrbitProblem, Raw, Status};
use crate::arith::matrix::dot;
use crate::arith::{MatrixK, QuadElem, VectorK};
use crate::semigroup::ClassCSet;
use crate::Result;

enum RowShape {
    Solved(ClassCSet),
    Open,
}

fn classify(terms: &[(Vec<QuadElem>, QuadElem)], beta: &QuadElem, r: usize) -> Result<RowShape> {
    let trivial = |chi: &[QuadElem]| chi.iter().all(QuadElem::is_one);
    let set = match terms {
        [] => {
            if beta.is_zero() {
                ClassCSet::full(r)
            } else {
                ClassCSet::empty(r)
            }
        }
        [(chi, c)] if trivial(chi) => {
            if c == beta {
                ClassCSet::full(r)
            } else {
                ClassCSet::empty(r)
            }
        }
        [(chi, c)] => {
            if beta.is_zero() {
                ClassCSet::empty(r)
            } else {
                solve_multiplicative(chi, &beta.div(c)?)?
            }
        }
        [(c0, k0), (chi, c)] | [(chi, c), (c0, k0)] if trivial(c0) && !trivial(chi) => {
            let rest = beta - k0;
            if rest.is_zero() {
                ClassCSet::empty(r)
            } else {
                solve_multiplicative(chi, &rest.div(c)?)?
            }
        }
        [(chi1, c1), (chi2, c2)] if beta.is_zero() => {
            let ratio = chi1.iter().zip(chi2).map(|(x, y)| x.div(y)).collect::<Result<Vec<_>>>()?;
            solve_multiplicative(&ratio, &(-c2).div(c1)?)?
        }
        _ => return Ok(RowShape::Open),
    };
    Ok(RowShape::Solved(set))
}

/// `P⁻¹ Jᵢ P = diag(eigenvalues[i])`.
pub(crate) fn solve_diagonalizable(problem: &OrbitProblem, p: &MatrixK, eigenvalues: &[Vec<QuadElem>]) -> Result<Raw> {
    let r = problem.r();
    let g = problem.g;
    let f = problem.field;
    let pinv = p.inverse().expect("eigenbasis is invertible");
    let u1 = pinv.mul_vec(&problem.u0)?;
    let v1 = pinv.mul_vec(&problem.v0)?;
    let vb1: Vec<VectorK> = problem.v_basis.iter().map(|v| pinv.mul_vec(v)).collect::<Result<_>>()?;
    // In eigencoordinates the reduced row echelon annihilator respects the
    // joint eigenspaces whenever the target does.
    let rows = if vb1.is_empty() {
        MatrixK::identity(f, g).data().to_vec()
    } else {
        MatrixK::from_rows(f, g, &vb1).kernel()
    };

    let mut answer = ClassCSet::full(r);
    let mut status = Status::Exact;
    for nu in rows {
        let beta = dot(&nu, &v1);
        let mut grouped: BTreeMap<Vec<QuadElem>, QuadElem> = BTreeMap::new();
        for j in 0..g {
            let coeff = &nu[j] * &u1[j];
            if coeff.is_zero() {
                continue;
            }
            let chi: Vec<QuadElem> = eigenvalues.iter().map(|e| e[j].clone()).collect();
            let slot = grouped.entry(chi).or_insert_with(|| QuadElem::zero(f));
            *slot = &*slot + &coeff;
        }
        let terms: Vec<(Vec<QuadElem>, QuadElem)> = grouped.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let set = match classify(&terms, &beta, r)? {
            RowShape::Solved(s) => s,
            RowShape::Open => {
                let row = MatrixK::from_rows(f, g, std::slice::from_ref(&nu)).mul(&pinv)?.row(0).to_vec();
                let sub = problem.with_constraints(&[row], &[beta])?.expect("a single nonzero row is consistent");
                let (s, st) = conjecture_raw(&sub, &default_bounds(r))?;
                status = status.combine(st);
                s
            }
        };
        answer = answer.intersect(&set)?;
        if answer.is_empty() && matches!(status, Status::Exact) {
            break;
        }
    }
    Ok((answer, status))
}
