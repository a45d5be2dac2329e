//! Reduction to invertible maps through eventual images.
//!
//! For `nᵢ ≥ Nᵢ` the orbit lives in `W = im ∏ Jᵢ^{Nᵢ}`, on which every `Jᵢ`
//! is invertible; tuples with some `nᵢ < Nᵢ` are handled by fixing that
//! coordinate and recursing on one fewer map.

use num_bigint::BigInt;

use super::{default_bounds, solve_raw, OrbitProblem, Raw, Status};
use crate::arith::{MatrixK, VectorK};
use crate::semigroup::ClassCSet;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Boundary {
    /// The fixed coordinate and its value.
    pub index: usize,
    pub value: u64,
    pub problem: OrbitProblem,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    /// Stabilization step `Nᵢ` of each map (zero for invertible ones).
    pub steps: Vec<u64>,
    /// Basis of the common stabilized image, as columns.
    pub image_basis: Vec<VectorK>,
    /// The restricted problem; `None` when the target misses the image.
    pub reduced: Option<OrbitProblem>,
    pub boundary: Vec<Boundary>,
}

fn stabilization_step(m: &MatrixK) -> Result<u64> {
    let mut k = 0u64;
    let mut p = MatrixK::identity(m.field(), m.rows());
    let mut rank = m.rows();
    loop {
        let next = p.mul(m)?;
        let nr = next.rank();
        if nr == rank {
            return Ok(k);
        }
        p = next;
        rank = nr;
        k += 1;
    }
}

pub fn eventual_image_reduce(problem: &OrbitProblem) -> Result<Reduction> {
    let f = problem.field;
    let g = problem.g;
    let steps = problem.j.iter().map(stabilization_step).collect::<Result<Vec<_>>>()?;
    let exps: Vec<i64> = steps.iter().map(|&s| s as i64).collect();
    let s = problem.power(&exps)?;
    let (_, pivots) = s.rref();
    let basis: Vec<VectorK> = pivots.iter().map(|&c| s.column(c)).collect();
    let k = basis.len();
    let wb = MatrixK::from_columns(f, g, &basis);

    let mut js = Vec::new();
    for m in &problem.j {
        let mw = m.mul(&wb)?;
        let cols = (0..k)
            .map(|c| Ok(wb.solve(&mw.column(c))?.expect("image is invariant")))
            .collect::<Result<Vec<_>>>()?;
        js.push(MatrixK::from_columns(f, k, &cols));
    }
    let start = wb.solve(&s.mul_vec(&problem.u0)?)?.expect("start lies in the image");
    let c = problem.constraints();
    let rows: Vec<VectorK> = c.rows.iter().map(|nu| MatrixK::from_rows(f, g, std::slice::from_ref(nu)).mul(&wb).map(|m| m.row(0).to_vec())).collect::<Result<_>>()?;
    let restricted = MatrixK::from_rows(f, k, &rows);
    let reduced = restricted.solve(&c.rhs)?.map(|v0| OrbitProblem { field: f, g: k, j: js, u0: start, v0, v_basis: restricted.kernel() });

    let mut boundary = Vec::new();
    for (i, &n) in steps.iter().enumerate() {
        let mut others = problem.j.clone();
        others.remove(i);
        let mut u = problem.u0.clone();
        for value in 0..n {
            boundary.push(Boundary {
                index: i,
                value,
                problem: OrbitProblem { j: others.clone(), u0: u.clone(), ..problem.clone() },
            });
            u = problem.j[i].mul_vec(&u)?;
        }
    }
    Ok(Reduction { steps, image_basis: basis, reduced, boundary })
}

pub(crate) fn solve_by_reduction(problem: &OrbitProblem) -> Result<Raw> {
    let r = problem.r();
    let red = eventual_image_reduce(problem)?;
    let (tail, status) = match &red.reduced {
        Some(p) => solve_raw(p)?,
        None => (ClassCSet::empty(r), Status::Exact),
    };
    let shift: Vec<BigInt> = red.steps.iter().map(|&s| BigInt::from(s)).collect();
    let mut out = tail.shift(&shift)?;
    let mut statuses = vec![status];
    for b in &red.boundary {
        let (part, st) = solve_raw(&b.problem)?;
        out = out.union(&part.insert_coordinate(b.index, &BigInt::from(b.value))?)?;
        statuses.push(st);
    }
    let partial: Vec<String> =
        statuses.iter().filter_map(|s| if let Status::Partial(m) = s { Some(m.clone()) } else { None }).collect();
    let status = if !partial.is_empty() {
        Status::Partial(partial.join("; "))
    } else if statuses.iter().all(|s| matches!(s, Status::Exact)) {
        Status::Exact
    } else {
        let bounds = default_bounds(r).iter().zip(&red.steps).map(|(b, s)| b + s).collect();
        Status::Conjectured { bounds, box_checked: false }
    };
    Ok((out, status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::solve;

    #[test]
    fn projection_stabilizes_after_one_step() {
        let p = OrbitProblem::from_i64(&[vec![vec![1, 0], vec![0, 0]]], &[1, 1], &[1, 0], &[]).unwrap();
        let red = eventual_image_reduce(&p).unwrap();
        assert_eq!(red.steps, vec![1]);
        assert_eq!(red.image_basis.len(), 1);
        assert!(red.image_basis[0][1].is_zero());
        let s = solve(&p).unwrap();
        assert!(s.certificate.is_exact());
        assert!(!s.answer.member_u64(&[0]));
        assert!(s.answer.member_u64(&[1]) && s.answer.member_u64(&[7]));
    }

    #[test]
    fn invertible_maps_reduce_to_themselves() {
        let p = OrbitProblem::from_i64(&[vec![vec![2, 0], vec![0, 3]]], &[1, 1], &[4, 9], &[]).unwrap();
        let red = eventual_image_reduce(&p).unwrap();
        assert_eq!(red.steps, vec![0]);
        assert!(red.boundary.is_empty());
        assert_eq!(red.reduced.unwrap().g, 2);
    }

    #[test]
    fn complementary_projections_collapse_the_image() {
        let p = OrbitProblem::from_i64(
            &[vec![vec![2, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 3]]],
            &[1, 1],
            &[0, 0],
            &[vec![1, 0]],
        )
        .unwrap();
        let red = eventual_image_reduce(&p).unwrap();
        assert_eq!(red.steps, vec![1, 1]);
        assert!(red.image_basis.is_empty());
        assert_eq!(red.boundary.iter().map(|b| (b.index, b.value)).collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);
        let s = solve(&p).unwrap();
        let rep = crate::orbit::verify_solution_set(&p, &s.answer, &[10, 10]).unwrap();
        assert!(rep.ok(), "{}", rep.describe());
    }
}
