//! Unique factorization in ℤ and in the rings of integers of the
//! class-number-one imaginary quadratic fields, and multiplicative relations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::intfactor::{exact_sqrt, factor_integer, legendre, sqrt_mod_prime};
use super::intmat;
use super::quad::{Field, QuadElem};
use crate::error::{Error, Result};
use crate::semigroup::IntegerLattice;

/// `ζ^unit · ∏ π^e` with `ζ` the field's unit generator and `π` canonical
/// primes. Exponents may be negative for non-integral elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredElement {
    pub field: Field,
    pub unit: u32,
    pub exponents: BTreeMap<QuadElem, BigInt>,
}

impl FactoredElement {
    pub fn reconstruct(&self) -> Result<QuadElem> {
        let mut acc = QuadElem::unit_generator(self.field).pow(self.unit as i64)?;
        for (p, e) in &self.exponents {
            acc = &acc * &p.pow_big(e)?;
        }
        Ok(acc)
    }

    pub fn primes(&self) -> impl Iterator<Item = &QuadElem> {
        self.exponents.keys()
    }
}

fn associate_key(a: &QuadElem) -> (BigRational, BigRational, bool, bool) {
    (a.x().abs(), a.y().abs(), a.x().is_negative(), a.y().is_negative())
}

/// The associate of `a` with the smallest `(|x|, |y|, x < 0, y < 0)`.
pub fn canonical_associate(a: &QuadElem) -> QuadElem {
    let field = a.field();
    let z = QuadElem::unit_generator(field);
    let mut best = a.clone();
    let mut cur = a.clone();
    for _ in 1..field.units_order() {
        cur = &cur * &z;
        if associate_key(&cur) < associate_key(&best) {
            best = cur.clone();
        }
    }
    best
}

/// An integral element of norm `p`, if one exists.
fn element_of_norm(p: &BigInt, field: Field) -> Option<QuadElem> {
    let d = BigInt::from(field.d());
    let half = field.half_integral();
    // with ω half-integral the norm form is (X² + dY²)/4 with X ≡ Y (mod 2)
    let target = if half { p * 4 } else { p.clone() };
    let make = |x: BigInt, y: BigInt| {
        if half {
            QuadElem::new(field, BigRational::new(x, 2.into()), BigRational::new(y, 2.into()))
        } else {
            QuadElem::new(field, BigRational::from_integer(x), BigRational::from_integer(y))
        }
    };
    if p < &BigInt::from(1_000_000) || (&d % p).is_zero() || p == &BigInt::from(2) {
        let mut y = BigInt::zero();
        while &d * &y * &y <= target {
            let rest = &target - &d * &y * &y;
            if let Some(x) = exact_sqrt(&rest) {
                if !half || (&x - &y).is_even() {
                    return Some(make(x, y.clone()));
                }
            }
            y += 1;
        }
        return None;
    }
    if legendre(&(-&d), p) != 1 {
        return None;
    }
    let mut r0 = sqrt_mod_prime(&(-&d), p)?;
    let (mut a, mut b, limit) = if half {
        if r0.is_even() {
            r0 = p - &r0;
        }
        (p * 2, r0, Roots::sqrt(&(p * 4)))
    } else {
        (p.clone(), r0, Roots::sqrt(p))
    };
    while b > limit {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = &target - &b * &b;
    if (&rest % &d).is_zero() {
        if let Some(y) = exact_sqrt(&(&rest / &d)) {
            if !half || (&b - &y).is_even() {
                return Some(make(b, y));
            }
        }
    }
    None
}

/// Canonical primes of the ring of integers lying over the rational prime `p`.
pub fn primes_above(p: &BigInt, field: Field) -> Vec<QuadElem> {
    if field == Field::Rational {
        return vec![QuadElem::from_bigint(field, p.clone())];
    }
    match element_of_norm(p, field) {
        None => vec![canonical_associate(&QuadElem::from_bigint(field, p.clone()))],
        Some(pi) => {
            let a = canonical_associate(&pi);
            let b = canonical_associate(&pi.conj());
            if a == b {
                vec![a]
            } else {
                let mut v = vec![a, b];
                v.sort();
                v
            }
        }
    }
}

fn unit_index(u: &QuadElem) -> Result<u32> {
    let field = u.field();
    let z = QuadElem::unit_generator(field);
    let mut cur = QuadElem::one(field);
    for k in 0..field.units_order() {
        if &cur == u {
            return Ok(k);
        }
        cur = &cur * &z;
    }
    Err(Error::Domain(format!("{u} is not a root of unity")))
}

fn factor_integral(a: &QuadElem) -> Result<FactoredElement> {
    let field = a.field();
    let norm = a.norm().to_integer();
    let mut rem = a.clone();
    let mut exponents = BTreeMap::new();
    for (p, _) in factor_integer(&norm) {
        for pi in primes_above(&p, field) {
            let mut e = 0i64;
            loop {
                let quo = rem.div(&pi)?;
                if !quo.is_integral() {
                    break;
                }
                rem = quo;
                e += 1;
            }
            if e > 0 {
                exponents.insert(pi, BigInt::from(e));
            }
        }
    }
    let unit = unit_index(&rem)?;
    Ok(FactoredElement { field, unit, exponents })
}

/// Factorization of a nonzero element of `K`.
pub fn factor(a: &QuadElem) -> Result<FactoredElement> {
    let field = a.field();
    field.require_factorization()?;
    if a.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    if a.is_integral() {
        return factor_integral(a);
    }
    let m = QuadElem::from_bigint(field, a.denominator());
    let mut top = factor_integral(&(&m * a))?;
    let bottom = factor_integral(&m)?;
    let w = field.units_order();
    top.unit = (top.unit + w - bottom.unit % w) % w;
    for (p, e) in bottom.exponents {
        let entry = top.exponents.entry(p).or_insert_with(BigInt::zero);
        *entry -= e;
    }
    top.exponents.retain(|_, e| !e.is_zero());
    Ok(top)
}

/// Every divisor of an integral element, unit multiples included.
pub fn divisors(a: &QuadElem) -> Result<Vec<QuadElem>> {
    let f = factor(a)?;
    if f.exponents.values().any(|e| e.is_negative()) {
        return Err(Error::Domain("divisors of a non-integral element".into()));
    }
    let field = a.field();
    let mut out = vec![QuadElem::one(field)];
    for (p, e) in &f.exponents {
        let e = e.to_u32().ok_or_else(|| Error::Domain("exponent too large".into()))?;
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for base in &out {
            let mut cur = base.clone();
            for _ in 0..=e {
                next.push(cur.clone());
                cur = &cur * p;
            }
        }
        out = next;
    }
    let z = QuadElem::unit_generator(field);
    let mut all = Vec::new();
    for dv in out {
        let mut cur = dv;
        for _ in 0..field.units_order() {
            all.push(cur.clone());
            cur = &cur * &z;
        }
    }
    all.sort();
    all.dedup();
    Ok(all)
}

/// Prime-exponent rows plus the unit character, over a shared prime list.
struct RelationSystem {
    primes: Vec<QuadElem>,
    rows: Vec<Vec<BigInt>>,
}

impl RelationSystem {
    fn new(a: &[QuadElem], extra: Option<&FactoredElement>) -> Result<(Self, Vec<FactoredElement>)> {
        let facs: Vec<FactoredElement> = a.iter().map(factor).collect::<Result<_>>()?;
        let field = a.first().map(|x| x.field()).unwrap_or(Field::Rational);
        let mut primes: BTreeSet<QuadElem> = facs.iter().flat_map(|f| f.primes().cloned()).collect();
        if let Some(x) = extra {
            primes.extend(x.primes().cloned());
        }
        let primes: Vec<QuadElem> = primes.into_iter().collect();
        let w = field.units_order();
        let mut rows = Vec::new();
        for f in &facs {
            let mut row: Vec<BigInt> =
                primes.iter().map(|p| f.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)).collect();
            row.push(BigInt::from(f.unit));
            rows.push(row);
        }
        let mut wrow = vec![BigInt::zero(); primes.len()];
        wrow.push(BigInt::from(w));
        rows.push(wrow);
        Ok((Self { primes, rows }, facs))
    }

    fn cols(&self) -> usize {
        self.primes.len() + 1
    }
}

fn check_nonzero(a: &[QuadElem]) -> Result<()> {
    if a.iter().any(|x| x.is_zero()) {
        return Err(Error::Domain("multiplicative relations of zero".into()));
    }
    Ok(())
}

/// `{ n ∈ ℤ^r : ∏ aᵢ^{nᵢ} = 1 }`.
pub fn mult_relation_lattice(a: &[QuadElem]) -> Result<IntegerLattice> {
    check_nonzero(a)?;
    let r = a.len();
    if r == 0 {
        return Ok(IntegerLattice::zero(0));
    }
    let (sys, _) = RelationSystem::new(a, None)?;
    let ker = intmat::left_kernel(&sys.rows, sys.cols());
    let gens: Vec<Vec<BigInt>> = ker.into_iter().map(|v| v[..r].to_vec()).collect();
    IntegerLattice::from_generators(r, &gens)
}

/// All `n ∈ ℤ^r` with `∏ aᵢ^{nᵢ} = target`, as a particular solution and
/// the relation lattice.
pub fn mult_equation_solve(a: &[QuadElem], target: &QuadElem) -> Result<Option<(Vec<BigInt>, IntegerLattice)>> {
    check_nonzero(a)?;
    if target.is_zero() {
        return Err(Error::Domain("a product of nonzero elements is never zero".into()));
    }
    let r = a.len();
    if r == 0 {
        return Ok(if target.is_one() { Some((Vec::new(), IntegerLattice::zero(0))) } else { None });
    }
    let field = a
        .iter()
        .try_fold(target.field(), |f, x| f.join(x.field()))
        .ok_or_else(|| Error::Invalid("elements from different fields".into()))?;
    let a: Vec<QuadElem> = a.iter().map(|x| x.promote(field)).collect();
    let a = &a[..];
    let ft = factor(&target.promote(field))?;
    let (sys, _) = RelationSystem::new(a, Some(&ft))?;
    let mut rhs: Vec<BigInt> =
        sys.primes.iter().map(|p| ft.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)).collect();
    rhs.push(BigInt::from(ft.unit));
    let Some(z) = intmat::solve_left(&sys.rows, sys.cols(), &rhs)? else {
        return Ok(None);
    };
    let particular = z[..r].to_vec();
    Ok(Some((particular, mult_relation_lattice(a)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(x: i64, y: i64) -> QuadElem {
        QuadElem::from_ints(Field::ImagQuadratic(1), x, y)
    }

    #[test]
    fn rational_factorization() {
        let f = factor(&QuadElem::from_int(Field::Rational, -12)).unwrap();
        assert_eq!(f.unit, 1);
        let e: Vec<(i64, i64)> = f
            .exponents
            .iter()
            .map(|(p, e)| (p.x().to_integer().to_i64().unwrap(), e.to_i64().unwrap()))
            .collect();
        assert_eq!(e, vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn gaussian_factorizations() {
        let f = factor(&gauss(3, 4)).unwrap();
        assert_eq!(f.exponents.len(), 1);
        let (p, e) = f.exponents.iter().next().unwrap();
        assert_eq!(e, &BigInt::from(2));
        assert_eq!(p.norm(), BigRational::from_integer(5.into()));
        assert_eq!(f.reconstruct().unwrap(), gauss(3, 4));

        let f = factor(&gauss(2, 0)).unwrap();
        let (p, e) = f.exponents.iter().next().unwrap();
        assert_eq!(p.norm(), BigRational::from_integer(2.into()));
        assert_eq!(e, &BigInt::from(2));
        assert_eq!(f.reconstruct().unwrap(), gauss(2, 0));
    }

    #[test]
    fn primes_in_each_field() {
        for d in [1u64, 2, 3, 7, 11, 19, 43, 67, 163] {
            let k = Field::ImagQuadratic(d);
            for p in [2u32, 3, 5, 7, 11, 13, 163, 1_000_003] {
                let p = BigInt::from(p);
                let ps = primes_above(&p, k);
                let total: BigRational = ps.iter().map(|x| x.norm()).product();
                let base = BigRational::from_integer(p.clone());
                // split: p·p̄ has norm p²; ramified or inert: single prime of norm p or p²
                if ps.len() == 2 {
                    assert_eq!(total, &base * &base);
                } else {
                    assert!(total == base || total == &base * &base);
                }
                for x in &ps {
                    assert!(x.is_integral());
                }
            }
        }
    }

    #[test]
    fn non_integral_factorization() {
        let k = Field::ImagQuadratic(7);
        let a = QuadElem::new(k, BigRational::new(3.into(), 4.into()), BigRational::new((-5).into(), 6.into()));
        let f = factor(&a).unwrap();
        assert_eq!(f.reconstruct().unwrap(), a);
    }

    #[test]
    fn relation_lattices() {
        let q = |n| QuadElem::from_int(Field::Rational, n);
        let l = mult_relation_lattice(&[q(2), q(4)]).unwrap();
        assert_eq!(l, IntegerLattice::from_i64(2, &[vec![2, -1]]).unwrap());
        assert_eq!(mult_relation_lattice(&[q(2), q(3)]).unwrap().rank(), 0);
        let l = mult_relation_lattice(&[gauss(0, 1), gauss(-1, 0)]).unwrap();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let v = vec![BigInt::from(a), BigInt::from(b)];
                assert_eq!(l.contains(&v), (a + 2 * b).rem_euclid(4) == 0, "{a} {b}");
            }
        }
    }

    #[test]
    fn equation_solving() {
        let q = |n| QuadElem::from_int(Field::Rational, n);
        let (p, l) = mult_equation_solve(&[q(2), q(4)], &q(8)).unwrap().unwrap();
        assert_eq!(&p[0] + &p[1] * 2, BigInt::from(3));
        assert_eq!(l.rank(), 1);
        assert!(mult_equation_solve(&[q(2)], &q(3)).unwrap().is_none());
        let (p, l) = mult_equation_solve(&[gauss(0, 1)], &gauss(1, 0)).unwrap().unwrap();
        assert!(l.contains(&p));
        assert_eq!(l, IntegerLattice::from_i64(1, &[vec![4]]).unwrap());
        assert!(mult_equation_solve(&[q(2)], &q(0)).is_err());
        assert!(mult_equation_solve(&[q(-1)], &q(-1)).unwrap().is_some());
    }

    #[test]
    fn divisor_lists() {
        let ds = divisors(&QuadElem::from_int(Field::Rational, 12)).unwrap();
        assert_eq!(ds.len(), 12);
        let ds = divisors(&gauss(2, 0)).unwrap();
        // units times 1, (1+i), (1+i)²
        assert_eq!(ds.len(), 12);
    }
}
