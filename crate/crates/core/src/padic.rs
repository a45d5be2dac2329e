//! Fixed-precision p-adic numbers with the exponential and logarithm on
//! `pℤ_p` and `1 + pℤ_p` for odd `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::{Error, Result};

/// Default absolute precision in digits.
pub const DEFAULT_PRECISION: u32 = 12;

/// `p^v · unit`, known modulo `p^prec`. The unit is reduced modulo
/// `p^(prec − v)`; zero is stored with `v = prec` and unit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNum {
    p: u64,
    prec: u32,
    val: i64,
    unit: BigInt,
}

fn ppow(p: u64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), e.max(0) as usize)
}

/// `v_p(n)` and the cofactor, for nonzero `n`.
fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    (v, m)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !crate::arith::intfactor::is_prime(&BigInt::from(p)) {
        return Err(Error::Domain(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

impl PadicNum {
    pub fn zero(p: u64, prec: u32) -> PadicNum {
        PadicNum { p, prec, val: prec as i64, unit: BigInt::zero() }
    }

    pub fn one(p: u64, prec: u32) -> PadicNum {
        PadicNum::from_int(p, prec, &BigInt::one())
    }

    pub fn from_int(p: u64, prec: u32, n: &BigInt) -> PadicNum {
        PadicNum::from_rational(p, prec, &BigRational::from_integer(n.clone())).expect("integers are p-adic integers")
    }

    /// Image of a rational number. Fails only for `p` not prime.
    pub fn from_rational(p: u64, prec: u32, q: &BigRational) -> Result<PadicNum> {
        check_prime(p)?;
        if q.is_zero() {
            return Ok(PadicNum::zero(p, prec));
        }
        let (vn, un) = split_p(q.numer(), p);
        let (vd, ud) = split_p(q.denom(), p);
        Ok(PadicNum::from_parts(p, prec, vn - vd, un * inverse_mod(&ud, &ppow(p, prec as i64 + vd - vn))))
    }

    /// Normalizes `p^v · u` at absolute precision `prec`.
    fn from_parts(p: u64, prec: u32, val: i64, u: BigInt) -> PadicNum {
        if u.is_zero() || val >= prec as i64 {
            return PadicNum::zero(p, prec);
        }
        let (extra, u) = split_p(&u, p);
        let val = val + extra;
        if val >= prec as i64 {
            return PadicNum::zero(p, prec);
        }
        let unit = u.mod_floor(&ppow(p, prec as i64 - val));
        if unit.is_zero() {
            return PadicNum::zero(p, prec);
        }
        PadicNum { p, prec, val, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Valuation; equals the precision for zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Representative in `[0, p^prec)` for p-adic integers.
    pub fn residue(&self) -> Option<BigInt> {
        if self.val < 0 {
            return None;
        }
        Some((&self.unit * ppow(self.p, self.val)).mod_floor(&ppow(self.p, self.prec as i64)))
    }

    /// `self` as an exact rational `p^v · unit` with the canonical unit.
    pub fn to_rational(&self) -> BigRational {
        if self.val >= 0 {
            BigRational::from_integer(&self.unit * ppow(self.p, self.val))
        } else {
            BigRational::new(self.unit.clone(), ppow(self.p, -self.val))
        }
    }

    fn same_prime(&self, o: &PadicNum) -> Result<()> {
        if self.p != o.p {
            return Err(Error::Domain(format!("mixing {}-adic and {}-adic numbers", self.p, o.p)));
        }
        Ok(())
    }

    pub fn add(&self, o: &PadicNum) -> Result<PadicNum> {
        self.same_prime(o)?;
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return Ok(PadicNum::from_parts(o.p, prec, o.val, o.unit.clone()));
        }
        if o.is_zero() {
            return Ok(PadicNum::from_parts(self.p, prec, self.val, self.unit.clone()));
        }
        let v = self.val.min(o.val);
        let u = &self.unit * ppow(self.p, self.val - v) + &o.unit * ppow(self.p, o.val - v);
        Ok(PadicNum::from_parts(self.p, prec, v, u))
    }

    pub fn neg(&self) -> PadicNum {
        PadicNum::from_parts(self.p, self.prec, self.val, -&self.unit)
    }

    pub fn sub(&self, o: &PadicNum) -> Result<PadicNum> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PadicNum) -> Result<PadicNum> {
        self.same_prime(o)?;
        // An error of p^N in one factor becomes p^(N + v) after multiplying
        // by the other.
        let prec = (self.prec as i64 + o.val).min(o.prec as i64 + self.val).max(0) as u32;
        if self.is_zero() || o.is_zero() {
            return Ok(PadicNum::zero(self.p, prec));
        }
        Ok(PadicNum::from_parts(self.p, prec, self.val + o.val, &self.unit * &o.unit))
    }

    /// Division keeps the smaller relative precision, so dividing by a
    /// multiple of `p` lowers the absolute precision.
    pub fn div(&self, o: &PadicNum) -> Result<PadicNum> {
        self.same_prime(o)?;
        if o.is_zero() {
            return Err(Error::Domain("p-adic division by zero at this precision".into()));
        }
        let val = self.val - o.val;
        if self.is_zero() {
            let prec = (self.prec as i64 - o.val).max(0) as u32;
            return Ok(PadicNum::zero(self.p, prec));
        }
        let rel = (self.prec as i64 - self.val).min(o.prec as i64 - o.val);
        let prec = (val + rel).max(0) as u32;
        let m = ppow(self.p, rel);
        Ok(PadicNum::from_parts(self.p, prec, val, &self.unit * inverse_mod(&o.unit, &m)))
    }

    pub fn pow(&self, e: u64) -> Result<PadicNum> {
        let mut acc = PadicNum::one(self.p, self.prec);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Agreement modulo `p^min(prec)`.
    pub fn eq_at_precision(&self, o: &PadicNum) -> bool {
        self.p == o.p && self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "precision": self.prec,
            "valuation": self.val,
            "unit": crate::json::bigint_to_json(&self.unit),
        })
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        match self.val {
            0 => write!(f, "{} + O({}^{})", self.unit, self.p, self.prec),
            v => write!(f, "{}^{}·{} + O({}^{})", self.p, v, self.unit, self.p, self.prec),
        }
    }
}

fn floor_log(p: u64, k: u64) -> i64 {
    let mut e = 0;
    let mut t = k;
    while t >= p {
        t /= p;
        e += 1;
    }
    e
}

/// `log(x) = ∑_{k≥1} (−1)^{k+1} (x−1)^k / k` on `1 + pℤ_p`.
pub fn plog(x: &PadicNum) -> Result<PadicNum> {
    let p = x.p;
    check_prime(p)?;
    let z = x.sub(&PadicNum::one(p, x.prec))?;
    let n = x.prec as i64;
    if z.is_zero() {
        return Ok(PadicNum::zero(p, x.prec));
    }
    let v = z.val;
    if v < 1 {
        return Err(Error::Domain(format!("plog needs x ≡ 1 mod {p}")));
    }
    // v((x−1)^k / k) ≥ k·v − ⌊log_p k⌋, which never decreases in k.
    let zr = z.to_rational();
    let mut sum = BigRational::zero();
    let mut power = zr.clone();
    let mut k = 1u64;
    while (k as i64) * v - floor_log(p, k) < n {
        let term = &power / BigRational::from_integer(BigInt::from(k));
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &zr;
        k += 1;
    }
    PadicNum::from_rational(p, x.prec, &sum)
}

/// `exp(x) = ∑ x^k / k!` on `pℤ_p`.
pub fn pexp(x: &PadicNum) -> Result<PadicNum> {
    let p = x.p;
    check_prime(p)?;
    if x.is_zero() {
        return Ok(PadicNum::one(p, x.prec));
    }
    let v = x.val;
    if v < 1 {
        return Err(Error::Domain(format!("pexp needs v_{p}(x) ≥ 1")));
    }
    // v(x^k / k!) ≥ k·v − (k−1)/(p−1), increasing in k.
    let n = x.prec as i64;
    let pm1 = p as i64 - 1;
    let xr = x.to_rational();
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k = 0i64;
    while k * v * pm1 - (k - 1).max(0) < n * pm1 {
        sum += &term;
        k += 1;
        term = term * &xr / BigRational::from_integer(BigInt::from(k));
    }
    PadicNum::from_rational(p, x.prec, &sum)
}

/// Outcome of comparing logarithms at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogVerdict {
    /// The two sides differ modulo `p^N`, so the exact equation fails.
    Unequal,
    /// The sides agree modulo `p^N`; this is consistent with equality but
    /// does not prove it.
    Tied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub exact: bool,
    pub log_side: LogVerdict,
    pub lhs: PadicNum,
    /// `None` when `y ∉ 1 + pℤ_p`: the product of the `xᵢ^{nᵢ}` always lies
    /// there, so the log side is decided without a logarithm of `y`.
    pub rhs: Option<PadicNum>,
}

impl ReductionReport {
    /// The log side never contradicts exact arithmetic.
    pub fn consistent(&self) -> bool {
        !(self.exact && self.log_side == LogVerdict::Unequal)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact,
            "log_side": match self.log_side { LogVerdict::Unequal => "unequal", LogVerdict::Tied => "tied_at_precision" },
            "consistent": self.consistent(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.as_ref().map(PadicNum::to_json),
        })
    }
}

fn one_mod_p(q: &BigRational, p: u64) -> bool {
    let bp = BigInt::from(p);
    if (q.denom() % &bp).is_zero() {
        return false;
    }
    ((q.numer() - q.denom()) % &bp).is_zero()
}

/// Tests `∏ xᵢ^{nᵢ} = y` exactly and through `∑ nᵢ log xᵢ = log y` at
/// precision `prec`. The `xᵢ` must lie in `1 + pℤ_p`.
pub fn torus_linear_reduction(xs: &[BigRational], y: &BigRational, n: &[i64], p: u64, prec: u32) -> Result<ReductionReport> {
    check_prime(p)?;
    if xs.len() != n.len() {
        return Err(crate::error::dim_err("bases and exponents differ in length"));
    }
    if let Some(bad) = xs.iter().find(|q| !one_mod_p(q, p)) {
        return Err(Error::Domain(format!("{bad} is not in 1 + {p}ℤ_{p}")));
    }
    let mut prod = BigRational::one();
    for (x, &e) in xs.iter().zip(n) {
        let pw = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
        prod *= if e < 0 { pw.recip() } else { pw };
    }
    let exact = prod == *y;
    let mut lhs = PadicNum::zero(p, prec);
    for (x, &e) in xs.iter().zip(n) {
        let l = plog(&PadicNum::from_rational(p, prec, x)?)?;
        lhs = lhs.add(&l.mul(&PadicNum::from_int(p, prec, &BigInt::from(e)))?)?;
    }
    if !one_mod_p(y, p) {
        return Ok(ReductionReport { exact, log_side: LogVerdict::Unequal, lhs, rhs: None });
    }
    let rhs = plog(&PadicNum::from_rational(p, prec, y)?)?;
    let log_side = if lhs.eq_at_precision(&rhs) { LogVerdict::Tied } else { LogVerdict::Unequal };
    Ok(ReductionReport { exact, log_side, lhs, rhs: Some(rhs) })
}

/// A rational as a p-adic number, or an error naming the offending value.
pub fn parse_padic(s: &str, p: u64, prec: u32) -> Result<PadicNum> {
    let q = crate::json::parse_rational(s)?;
    PadicNum::from_rational(p, prec, &q)
}
