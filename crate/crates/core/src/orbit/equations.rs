//! The three scalar equation shapes left after a 2×2 or diagonal change of
//! coordinates: `∑ cᵢnᵢ = B`, `∏ aᵢ^{nᵢ} = A`, and
//! `∏ aᵢ^{nᵢ}·(A + ∑ cᵢnᵢ) = B`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::factor::{divisors, factor};
use crate::arith::intmat::{kernel, solve_right};
use crate::arith::{mult_equation_solve, QuadElem};
use crate::semigroup::classc::{coset_intersection, positive_part};
use crate::semigroup::{ClassCSet, IntegerLattice};
use crate::{Error, Result};

fn join_field(xs: &[&QuadElem]) -> Result<crate::arith::Field> {
    xs.iter()
        .try_fold(crate::arith::Field::Rational, |f, x| f.join(x.field()))
        .ok_or_else(|| Error::Invalid("elements from different fields".into()))
}

/// Integer solutions of `∑ cᵢnᵢ = b` over ℤ^r as a coset, splitting into
/// the rational and the `√−d` parts.
pub(crate) fn linear_coset(c: &[QuadElem], b: &QuadElem) -> Result<Option<(Vec<BigInt>, IntegerLattice)>> {
    let r = c.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let part = |x: &QuadElem, k: usize| if k == 0 { x.x().clone() } else { x.y().clone() };
    for k in 0..2 {
        let coeffs: Vec<BigRational> = c.iter().map(|x| part(x, k)).collect();
        let t = part(b, k);
        let den = coeffs.iter().chain(std::iter::once(&t)).fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = BigRational::from_integer(den);
        rows.push(coeffs.iter().map(|q| (q * &scale).to_integer()).collect::<Vec<_>>());
        rhs.push((&t * &scale).to_integer());
    }
    if r == 0 {
        return Ok(rhs.iter().all(Zero::is_zero).then(|| (Vec::new(), IntegerLattice::zero(0))));
    }
    let Some(p) = solve_right(&rows, r, &rhs)? else { return Ok(None) };
    let h = IntegerLattice::from_generators(r, &kernel(&rows, r))?;
    Ok(Some((p, h)))
}

/// `{ n ∈ ℕ^r : ∑ cᵢnᵢ = B }`, solved exactly.
pub fn solve_linear_diophantine(c: &[QuadElem], b: &QuadElem) -> Result<ClassCSet> {
    match linear_coset(c, b)? {
        Some((p, h)) => positive_part(&p, &h),
        None => Ok(ClassCSet::empty(c.len())),
    }
}

/// `{ n ∈ ℕ^r : ∏ aᵢ^{nᵢ} = t }`.
pub(crate) fn solve_multiplicative(a: &[QuadElem], t: &QuadElem) -> Result<ClassCSet> {
    if t.is_zero() {
        return Ok(ClassCSet::empty(a.len()));
    }
    match mult_equation_solve(a, t)? {
        Some((p, h)) => positive_part(&p, &h),
        None => Ok(ClassCSet::empty(a.len())),
    }
}

/// `{ n ∈ ℕ^r : ∏ aᵢ^{nᵢ} · (A + ∑ cᵢnᵢ) = B }` for nonzero `aᵢ` that are
/// algebraic integers.
///
/// With `c`, `A`, `B` scaled to be integral, the product `D = ∏ aᵢ^{nᵢ}`
/// divides `B` and is supported on the primes of the `aᵢ`; each such `D`
/// leaves a multiplicative and a linear equation to intersect.
pub fn solve_mixed(a: &[QuadElem], c: &[QuadElem], big_a: &QuadElem, big_b: &QuadElem) -> Result<ClassCSet> {
    let r = a.len();
    if c.len() != r {
        return Err(crate::error::dim_err("a and c have different lengths"));
    }
    if a.iter().any(QuadElem::is_zero) {
        return Err(Error::Domain("solve_mixed needs nonzero aᵢ".into()));
    }
    if a.iter().any(|x| !x.is_integral()) {
        return Err(Error::Domain("solve_mixed needs integral aᵢ".into()));
    }
    let mut all: Vec<&QuadElem> = a.iter().chain(c).collect();
    all.push(big_a);
    all.push(big_b);
    let field = join_field(&all)?;
    if big_b.is_zero() {
        // A product of nonzero aᵢ never vanishes.
        return solve_linear_diophantine(c, &-big_a);
    }
    field.require_factorization()?;
    let a: Vec<QuadElem> = a.iter().map(|x| x.promote(field)).collect();
    let m = c.iter().chain([big_a, big_b]).fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()));
    let m = BigRational::from_integer(m);
    let c: Vec<QuadElem> = c.iter().map(|x| x.promote(field).scale(&m)).collect();
    let big_a = big_a.promote(field).scale(&m);
    let big_b = big_b.promote(field).scale(&m);

    let mut support = std::collections::BTreeSet::new();
    for x in &a {
        support.extend(factor(x)?.primes().cloned());
    }
    let mut out = ClassCSet::empty(r);
    for dv in divisors(&big_b)? {
        if !factor(&dv)?.primes().all(|p| support.contains(p)) {
            continue;
        }
        let Some((p1, h1)) = mult_equation_solve(&a, &dv)? else { continue };
        let rest = &big_b.div(&dv)? - &big_a;
        let Some((p2, h2)) = linear_coset(&c, &rest)? else { continue };
        if let Some((gamma, h)) = coset_intersection(&p1, &h1, &p2, &h2)? {
            out = out.union(&positive_part(&gamma, &h)?)?;
        }
    }
    Ok(out)
}
