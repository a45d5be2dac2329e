//! Elements of ℚ and of imaginary quadratic fields ℚ(√−d).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{rational_from_json, rational_to_json};

/// Imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// ℚ(√−d) with `d ≥ 1` squarefree.
    ImagQuadratic(u64),
}

fn squarefree(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

impl Field {
    pub fn imag(d: u64) -> Result<Field> {
        if d == 0 || !squarefree(d) {
            return Err(Error::Domain(format!("d = {d} must be a positive squarefree integer")));
        }
        Ok(Field::ImagQuadratic(d))
    }

    pub fn d(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::ImagQuadratic(d) => *d,
        }
    }

    /// `ω = (1 + √−d)/2` when `d ≡ 3 (mod 4)`, else `√−d`.
    pub fn half_integral(&self) -> bool {
        matches!(self, Field::ImagQuadratic(d) if d % 4 == 3)
    }

    pub fn has_class_number_one(&self) -> bool {
        match self {
            Field::Rational => true,
            Field::ImagQuadratic(d) => CLASS_NUMBER_ONE.contains(d),
        }
    }

    pub fn require_factorization(&self) -> Result<()> {
        if self.has_class_number_one() {
            Ok(())
        } else {
            Err(Error::UnsupportedField(format!("ℚ(√−{}) does not have class number one", self.d())))
        }
    }

    /// Order of the group of roots of unity.
    pub fn units_order(&self) -> u32 {
        match self {
            Field::ImagQuadratic(1) => 4,
            Field::ImagQuadratic(3) => 6,
            _ => 2,
        }
    }

    /// The smallest field containing both, if there is one.
    pub fn join(self, other: Field) -> Option<Field> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Some(f),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Field::Rational => json!({"kind": "rational"}),
            Field::ImagQuadratic(d) => json!({"kind": "imag_quadratic", "d": d}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Field> {
        match v.get("kind").and_then(Value::as_str) {
            Some("rational") => Ok(Field::Rational),
            Some("imag_quadratic") => {
                let d = v
                    .get("d")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Invalid("field needs a positive integer \"d\"".into()))?;
                Field::imag(d)
            }
            _ => Err(Error::Invalid("field \"kind\" must be \"rational\" or \"imag_quadratic\"".into())),
        }
    }
}

/// `x + y·√−d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem {
    field: Field,
    x: BigRational,
    y: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadElem {
    pub fn new(field: Field, x: BigRational, y: BigRational) -> QuadElem {
        if field == Field::Rational {
            assert!(y.is_zero(), "rational element with nonzero √−d part");
        }
        QuadElem { field, x, y }
    }

    pub fn rational(field: Field, x: BigRational) -> QuadElem {
        QuadElem { field, x, y: BigRational::zero() }
    }

    pub fn from_int(field: Field, n: i64) -> QuadElem {
        QuadElem::rational(field, q(n))
    }

    pub fn from_bigint(field: Field, n: BigInt) -> QuadElem {
        QuadElem::rational(field, BigRational::from_integer(n))
    }

    pub fn from_ints(field: Field, x: i64, y: i64) -> QuadElem {
        QuadElem::new(field, q(x), q(y))
    }

    pub fn zero(field: Field) -> QuadElem {
        QuadElem::from_int(field, 0)
    }

    pub fn one(field: Field) -> QuadElem {
        QuadElem::from_int(field, 1)
    }

    /// The generator `ω` of the ring of integers over ℤ.
    pub fn omega(field: Field) -> QuadElem {
        match field {
            Field::Rational => QuadElem::one(field),
            _ if field.half_integral() => QuadElem::new(field, BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())),
            _ => QuadElem::from_ints(field, 0, 1),
        }
    }

    /// A generator of the roots of unity: `i`, `(1+√−3)/2`, or `−1`.
    pub fn unit_generator(field: Field) -> QuadElem {
        match field {
            Field::ImagQuadratic(1) => QuadElem::from_ints(field, 0, 1),
            Field::ImagQuadratic(3) => QuadElem::omega(field),
            _ => QuadElem::from_int(field, -1),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    /// Reinterprets the element in a larger field.
    pub fn promote(&self, field: Field) -> QuadElem {
        match self.field.join(field) {
            Some(f) if f == field => QuadElem { field, x: self.x.clone(), y: self.y.clone() },
            _ => panic!("cannot move {:?} element into {:?}", self.field, field),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    fn d_rat(&self) -> BigRational {
        q(self.field.d() as i64)
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { field: self.field, x: self.x.clone(), y: -&self.y }
    }

    /// `x² + d·y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x + self.d_rat() * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        &self.x * q(2)
    }

    /// Coordinates `(a, b)` with `self = a + b·ω`.
    pub fn ring_coords(&self) -> (BigRational, BigRational) {
        if self.field.half_integral() {
            (&self.x - &self.y, &self.y * q(2))
        } else {
            (self.x.clone(), self.y.clone())
        }
    }

    pub fn from_ring_coords(field: Field, a: BigRational, b: BigRational) -> QuadElem {
        if field.half_integral() {
            let half = &b / q(2);
            QuadElem { field, x: a + &half, y: half }
        } else if field == Field::Rational {
            QuadElem::rational(field, a + b)
        } else {
            QuadElem { field, x: a, y: b }
        }
    }

    pub fn is_integral(&self) -> bool {
        let (a, b) = self.ring_coords();
        a.is_integer() && b.is_integer()
    }

    /// Least positive integer `m` with `m·self` integral.
    pub fn denominator(&self) -> BigInt {
        let (a, b) = self.ring_coords();
        a.denom().lcm(b.denom())
    }

    pub fn scale(&self, k: &BigRational) -> QuadElem {
        QuadElem { field: self.field, x: &self.x * k, y: &self.y * k }
    }

    pub fn inv(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let n = self.norm();
        Ok(QuadElem { field: self.field, x: &self.x / &n, y: -&self.y / &n })
    }

    pub fn div(&self, other: &QuadElem) -> Result<QuadElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<QuadElem> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = QuadElem::one(self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn pow_big(&self, n: &BigInt) -> Result<QuadElem> {
        let small = n.to_i64().ok_or_else(|| Error::Domain("exponent too large".into()))?;
        self.pow(small)
    }

    /// Integer part pair when the element lies in ℤ[√−d] with integer
    /// coordinates.
    pub fn int_pair(&self) -> Option<(BigInt, BigInt)> {
        if self.x.is_integer() && self.y.is_integer() {
            Some((self.x.to_integer(), self.y.to_integer()))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        if self.field == Field::Rational {
            return rational_to_json(&self.x);
        }
        json!({"x": rational_to_json(&self.x), "y": rational_to_json(&self.y), "d": self.field.d()})
    }

    /// Accepts `{"x","y","d"}` objects, rational strings and integers.
    pub fn from_json(v: &Value, field: Field) -> Result<QuadElem> {
        match v {
            Value::Object(m) => {
                let x = m.get("x").map(rational_from_json).transpose()?.unwrap_or_else(BigRational::zero);
                let y = m.get("y").map(rational_from_json).transpose()?.unwrap_or_else(BigRational::zero);
                if let Some(d) = m.get("d") {
                    let d = d.as_u64().ok_or_else(|| Error::Invalid("\"d\" must be a positive integer".into()))?;
                    if !y.is_zero() && field != Field::ImagQuadratic(d) {
                        return Err(Error::Invalid(format!("element over ℚ(√−{d}) in a problem over {field:?}")));
                    }
                }
                if field == Field::Rational && !y.is_zero() {
                    return Err(Error::Invalid("nonzero √−d part in a rational problem".into()));
                }
                Ok(QuadElem { field, x, y })
            }
            _ => Ok(QuadElem::rational(field, rational_from_json(v)?)),
        }
    }
}

fn joined(a: &QuadElem, b: &QuadElem) -> Field {
    a.field
        .join(b.field)
        .unwrap_or_else(|| panic!("mixing elements of {:?} and {:?}", a.field, b.field))
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        QuadElem { field: joined(self, o), x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        QuadElem { field: joined(self, o), x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        let field = joined(self, o);
        let d = q(field.d() as i64);
        QuadElem {
            field,
            x: &self.x * &o.x - d * &self.y * &o.y,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { field: self.field, x: -&self.x, y: -&self.y }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        &self + &o
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        &self - &o
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        &self * &o
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let d = self.field.d();
        if self.x.is_zero() {
            write!(f, "{}·√−{d}", self.y)
        } else if self.y.is_negative() {
            write!(f, "{} − {}·√−{d}", self.x, -&self.y)
        } else {
            write!(f, "{} + {}·√−{d}", self.x, self.y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let k = Field::imag(1).unwrap();
        let a = QuadElem::from_ints(k, 2, 1);
        assert_eq!(&a * &a, QuadElem::from_ints(k, 3, 4));
        assert_eq!(a.norm(), q(5));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.pow(-2).unwrap(), QuadElem::from_ints(k, 3, 4).inv().unwrap());
    }

    #[test]
    fn integrality_with_half_basis() {
        let k = Field::imag(3).unwrap();
        let w = QuadElem::omega(k);
        assert!(w.is_integral());
        assert_eq!(w.pow(6).unwrap(), QuadElem::one(k));
        let half = QuadElem::new(k, BigRational::new(1.into(), 2.into()), BigRational::zero());
        assert!(!half.is_integral());
        assert_eq!(half.denominator(), BigInt::from(2));
        let (a, b) = w.ring_coords();
        assert_eq!(QuadElem::from_ring_coords(k, a, b), w);
    }

    #[test]
    fn field_validation() {
        assert!(Field::imag(4).is_err());
        assert!(Field::imag(5).unwrap().require_factorization().is_err());
        assert_eq!(Field::from_json(&json!({"kind": "imag_quadratic", "d": 7})).unwrap(), Field::ImagQuadratic(7));
    }

    #[test]
    fn json_forms() {
        let k = Field::imag(2).unwrap();
        let a = QuadElem::new(k, BigRational::new(1.into(), 3.into()), q(-2));
        let v = a.to_json();
        assert_eq!(QuadElem::from_json(&v, k).unwrap(), a);
        assert_eq!(QuadElem::from_json(&json!(5), k).unwrap(), QuadElem::from_int(k, 5));
        assert_eq!(QuadElem::from_json(&json!("-1/2"), Field::Rational).unwrap().x(), &BigRational::new((-1).into(), 2.into()));
        assert!(QuadElem::from_json(&json!({"x": 1, "y": 1, "d": 2}), Field::Rational).is_err());
    }
}
