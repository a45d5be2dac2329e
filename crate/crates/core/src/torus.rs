//! Monomial endomorphisms of the torus `G_m^g` acting on points with
//! rational coordinates, stored as sign and prime exponents.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::factor::{factor, FactoredElement};
use crate::arith::intmat::{identity, mat_mul, IntMatrix};
use crate::arith::{Field, MatrixK, QuadElem, VectorK};
use crate::json::{bigint_from_json, bigint_to_json, rational_from_json, rational_to_json};
use crate::orbit::OrbitProblem;
use crate::{Error, Result};

/// `(x₁,…,x_g) ↦ (∏ⱼ xⱼ^{M₁ⱼ}, …, ∏ⱼ xⱼ^{M_gⱼ})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    m: IntMatrix,
}

impl MonomialMap {
    pub fn new(m: IntMatrix) -> Result<MonomialMap> {
        let g = m.len();
        if m.iter().any(|r| r.len() != g) {
            return Err(crate::error::dim_err("exponent matrix must be square"));
        }
        Ok(MonomialMap { m })
    }

    pub fn from_i64(m: &[Vec<i64>]) -> MonomialMap {
        MonomialMap::new(crate::arith::intmat::to_big(m)).expect("square literal")
    }

    pub fn identity(g: usize) -> MonomialMap {
        MonomialMap { m: identity(g) }
    }

    pub fn g(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn to_json(&self) -> Value {
        json!({
            "g": self.g(),
            "M": self.m.iter().map(|r| r.iter().map(bigint_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<MonomialMap> {
        let rows = v
            .get("M")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("map needs an 'M' array".into()))?;
        let m = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?
                    .iter()
                    .map(bigint_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<IntMatrix>>()?;
        let map = MonomialMap::new(m)?;
        if let Some(g) = v.get("g") {
            if g.as_u64() != Some(map.g() as u64) {
                return Err(crate::error::dim_err("'g' differs from the matrix size"));
            }
        }
        Ok(map)
    }
}

/// `a ∘ b`, whose exponent matrix is the product `A·B`.
pub fn compose(a: &MonomialMap, b: &MonomialMap) -> Result<MonomialMap> {
    if a.g() != b.g() {
        return Err(crate::error::dim_err("composing maps on tori of different dimension"));
    }
    let g = a.g();
    Ok(MonomialMap { m: mat_mul(&a.m, &b.m, g, g) })
}

/// The linear action on logarithms, which is the exponent matrix itself.
pub fn log_jacobian(map: &MonomialMap) -> IntMatrix {
    map.m.clone()
}

/// A point of `G_m^g(ℚ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    coords: Vec<FactoredElement>,
}

impl TorusPoint {
    pub fn from_rationals(xs: &[BigRational]) -> Result<TorusPoint> {
        let coords = xs
            .iter()
            .map(|x| {
                if x.is_zero() {
                    return Err(Error::Domain("torus coordinates must be nonzero".into()));
                }
                factor(&QuadElem::rational(Field::Rational, x.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint { coords })
    }

    pub fn from_i64_ratios(xs: &[(i64, i64)]) -> Result<TorusPoint> {
        let qs: Vec<BigRational> = xs.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect();
        TorusPoint::from_rationals(&qs)
    }

    pub fn g(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FactoredElement] {
        &self.coords
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coords.iter().map(|c| c.reconstruct().expect("rational reconstruction").x().clone()).collect()
    }

    fn primes(&self) -> BTreeSet<QuadElem> {
        self.coords.iter().flat_map(|c| c.primes().cloned()).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.to_rationals().iter().map(rational_to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<TorusPoint> {
        let xs = v
            .as_array()
            .ok_or_else(|| Error::Invalid("point must be an array of rationals".into()))?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?;
        TorusPoint::from_rationals(&xs)
    }
}

pub fn apply(map: &MonomialMap, point: &TorusPoint) -> Result<TorusPoint> {
    if map.g() != point.g() {
        return Err(crate::error::dim_err("map and point dimensions differ"));
    }
    let coords = map
        .m
        .iter()
        .map(|row| {
            let mut unit = BigInt::zero();
            let mut exponents: BTreeMap<QuadElem, BigInt> = BTreeMap::new();
            for (e, c) in row.iter().zip(&point.coords) {
                unit += e * BigInt::from(c.unit);
                for (p, k) in &c.exponents {
                    *exponents.entry(p.clone()).or_insert_with(BigInt::zero) += e * k;
                }
            }
            exponents.retain(|_, k| !k.is_zero());
            let unit = (unit % 2u32).abs().to_u32().expect("parity");
            FactoredElement { field: Field::Rational, unit, exponents }
        })
        .collect();
    Ok(TorusPoint { coords })
}

/// `{ x : ∏ⱼ xⱼ^{χⱼ} = c }` for each row `(χ, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTarget {
    rows: Vec<(Vec<BigInt>, BigRational)>,
}

impl CharacterTarget {
    pub fn new(rows: Vec<(Vec<BigInt>, BigRational)>) -> Result<CharacterTarget> {
        if rows.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::Domain("character values must be nonzero".into()));
        }
        if let Some((chi, _)) = rows.first() {
            if rows.iter().any(|(x, _)| x.len() != chi.len()) {
                return Err(crate::error::dim_err("characters of different lengths"));
            }
        }
        Ok(CharacterTarget { rows })
    }

    /// The coordinate conditions `x_i = c`.
    pub fn coordinates(g: usize, fixed: &[(usize, BigRational)]) -> Result<CharacterTarget> {
        let rows = fixed
            .iter()
            .map(|(i, c)| {
                if *i >= g {
                    return Err(Error::IndexOutOfRange { index: *i, rank: g });
                }
                let mut chi = vec![BigInt::zero(); g];
                chi[*i] = BigInt::one();
                Ok((chi, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        CharacterTarget::new(rows)
    }

    pub fn rows(&self) -> &[(Vec<BigInt>, BigRational)] {
        &self.rows
    }

    pub fn contains(&self, point: &TorusPoint) -> Result<bool> {
        for (chi, c) in &self.rows {
            if character_value(chi, point)? != *c {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|(chi, c)| json!({"chi": chi.iter().map(bigint_to_json).collect::<Vec<_>>(), "c": rational_to_json(c)}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<CharacterTarget> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Invalid("target must be an array of {chi, c} rows".into()))?
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let chi = row
                    .get("chi")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid(format!("target[{k}] needs 'chi'")))?
                    .iter()
                    .map(bigint_from_json)
                    .collect::<Result<Vec<_>>>()?;
                let c = rational_from_json(row.get("c").ok_or_else(|| Error::Invalid(format!("target[{k}] needs 'c'")))?)?;
                Ok((chi, c))
            })
            .collect::<Result<Vec<_>>>()?;
        CharacterTarget::new(rows)
    }
}

fn character_value(chi: &[BigInt], point: &TorusPoint) -> Result<BigRational> {
    if chi.len() != point.g() {
        return Err(crate::error::dim_err("character and point dimensions differ"));
    }
    let mut acc = BigRational::one();
    for (e, x) in chi.iter().zip(point.to_rationals()) {
        let k = e.to_i64().ok_or_else(|| Error::Domain("character exponent too large".into()))?;
        let pw = num_traits::pow(x, k.unsigned_abs() as usize);
        acc *= if k < 0 { pw.recip() } else { pw };
    }
    Ok(acc)
}

fn check_commuting(maps: &[MonomialMap]) -> Result<()> {
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            if compose(&maps[i], &maps[j])? != compose(&maps[j], &maps[i])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

/// Sign parities and prime-exponent columns of a point, all transformed by
/// the exponent matrix.
#[derive(Clone)]
struct ExpState {
    columns: Vec<Vec<BigInt>>,
}

struct Compiled {
    /// Per row, the required value of `χ·column` for each tracked column.
    rows: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// All tuples of the box with `∏ mapsᵢ^{nᵢ}(α)` in the target, computed on
/// exponent vectors so coordinates never have to be formed.
pub fn return_set_enumerate(
    maps: &[MonomialMap],
    alpha: &TorusPoint,
    target: &CharacterTarget,
    bounds: &[u64],
) -> Result<BTreeSet<Vec<u64>>> {
    let g = alpha.g();
    if maps.iter().any(|m| m.g() != g) || target.rows.iter().any(|(chi, _)| chi.len() != g) {
        return Err(crate::error::dim_err("maps, point, and target must share g"));
    }
    if bounds.len() != maps.len() {
        return Err(crate::error::dim_err("box rank differs from the number of maps"));
    }
    check_commuting(maps)?;
    let primes: Vec<QuadElem> = alpha.primes().into_iter().collect();
    // Column 0 holds sign parities, then one column per prime.
    let mut columns = vec![alpha.coords.iter().map(|c| BigInt::from(c.unit)).collect::<Vec<_>>()];
    for p in &primes {
        columns.push(alpha.coords.iter().map(|c| c.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)).collect());
    }
    let mut rows = Vec::new();
    for (chi, c) in &target.rows {
        let fc = factor(&QuadElem::rational(Field::Rational, c.clone()))?;
        if fc.primes().any(|p| !primes.contains(p)) {
            return Ok(BTreeSet::new());
        }
        let mut want = vec![BigInt::from(fc.unit)];
        want.extend(primes.iter().map(|p| fc.exponents.get(p).cloned().unwrap_or_else(BigInt::zero)));
        rows.push((chi.clone(), want));
    }
    let compiled = Compiled { rows };
    let mut out = BTreeSet::new();
    let mut n = vec![0u64; bounds.len()];
    walk(maps, &compiled, 0, ExpState { columns }, &mut n, bounds, &mut out);
    Ok(out)
}

fn satisfied(c: &Compiled, s: &ExpState) -> bool {
    c.rows.iter().all(|(chi, want)| {
        s.columns.iter().zip(want).enumerate().all(|(k, (col, w))| {
            let dot: BigInt = chi.iter().zip(col).map(|(a, b)| a * b).sum();
            if k == 0 {
                (dot - w) % 2u32 == BigInt::zero()
            } else {
                dot == *w
            }
        })
    })
}

fn walk(
    maps: &[MonomialMap],
    c: &Compiled,
    level: usize,
    mut s: ExpState,
    n: &mut Vec<u64>,
    bounds: &[u64],
    out: &mut BTreeSet<Vec<u64>>,
) {
    if level == bounds.len() {
        if satisfied(c, &s) {
            out.insert(n.clone());
        }
        return;
    }
    for v in 0..=bounds[level] {
        n[level] = v;
        if v == bounds[level] {
            walk(maps, c, level + 1, s, n, bounds, out);
            break;
        }
        walk(maps, c, level + 1, s.clone(), n, bounds, out);
        for col in s.columns.iter_mut() {
            *col = mat_vec(&maps[level].m, col);
        }
        for x in s.columns[0].iter_mut() {
            *x = ((&*x % 2u32) + 2u32) % 2u32;
        }
    }
    n[level] = 0;
}

/// The same question as a linear orbit problem over ℚ on the prime-exponent
/// vectors, one block of `g` coordinates per prime of `α`. Needs positive
/// coordinates and positive character values; `None` when a value involves
/// a prime the orbit never reaches.
pub fn to_orbit_problem(maps: &[MonomialMap], alpha: &TorusPoint, target: &CharacterTarget) -> Result<Option<OrbitProblem>> {
    let g = alpha.g();
    if alpha.coords.iter().any(|c| c.unit != 0) || target.rows.iter().any(|(_, c)| c.is_negative()) {
        return Err(Error::Domain("the linear model needs positive coordinates and values".into()));
    }
    let primes: Vec<QuadElem> = alpha.primes().into_iter().collect();
    let k = primes.len();
    let f = Field::Rational;
    let big = |x: &BigInt| QuadElem::from_bigint(f, x.clone());
    let js = maps
        .iter()
        .map(|m| {
            let mut blk = MatrixK::zeros(f, g * k, g * k);
            for b in 0..k {
                for i in 0..g {
                    for j in 0..g {
                        blk.set(b * g + i, b * g + j, big(&m.m[i][j]));
                    }
                }
            }
            blk
        })
        .collect::<Vec<_>>();
    let mut u0: VectorK = Vec::new();
    for p in &primes {
        u0.extend(alpha.coords.iter().map(|c| big(&c.exponents.get(p).cloned().unwrap_or_default())));
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (chi, c) in &target.rows {
        let fc = factor(&QuadElem::rational(f, c.clone()))?;
        if fc.primes().any(|p| !primes.contains(p)) {
            return Ok(None);
        }
        for (b, p) in primes.iter().enumerate() {
            let mut row = vec![QuadElem::zero(f); g * k];
            for j in 0..g {
                row[b * g + j] = big(&chi[j]);
            }
            rows.push(row);
            rhs.push(big(&fc.exponents.get(p).cloned().unwrap_or_default()));
        }
    }
    let base = OrbitProblem::new(f, js, u0.clone(), vec![QuadElem::zero(f); g * k], Vec::new())?;
    base.with_constraints(&rows, &rhs)
}

/// `(2n − m)² − 3m`, which vanishes exactly on the line example's return set.
pub fn condition_polynomial_61(m: i64, n: i64) -> i128 {
    let d = 2 * n as i128 - m as i128;
    d * d - 3 * m as i128
}

/// `(2n − m)² − 6n`, the analogue for the non-automorphism example.
pub fn condition_polynomial_62(m: i64, n: i64) -> i128 {
    let d = 2 * n as i128 - m as i128;
    d * d - 6 * n as i128
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    pub values: Vec<u64>,
    pub gaps: Vec<u64>,
}

impl GapWitness {
    /// Every gap at least as large as the one before.
    pub fn nondecreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn to_json(&self) -> Value {
        json!({"values": self.values, "gaps": self.gaps})
    }
}

/// Sorted distinct values of coordinate `i` and their consecutive gaps.
/// Growing gaps are evidence, not proof, that a set is not class-C.
pub fn gap_witness<'a>(s: impl IntoIterator<Item = &'a Vec<u64>>, i: usize) -> Result<GapWitness> {
    let mut values = BTreeSet::new();
    for t in s {
        let x = *t.get(i).ok_or(Error::IndexOutOfRange { index: i, rank: t.len() })?;
        values.insert(x);
    }
    if values.is_empty() {
        return Err(Error::Domain("gap witness of an empty set".into()));
    }
    let values: Vec<u64> = values.into_iter().collect();
    let gaps = values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(GapWitness { values, gaps })
}

/// Schur–Cohn: all roots of `∑ cₖ zᵏ` (constant first) lie in `|z| < 1`.
pub fn roots_inside_unit_disk(coeffs: &[BigInt]) -> bool {
    let mut c: Vec<BigInt> = coeffs.to_vec();
    if c.last().is_some_and(Zero::is_zero) || c.is_empty() || c.iter().all(Zero::is_zero) {
        return false;
    }
    while c.len() > 1 {
        let n = c.len() - 1;
        if c[n].abs() <= c[0].abs() {
            return false;
        }
        let next: Vec<BigInt> = (0..n).map(|j| &c[n] * &c[j + 1] - &c[0] * &c[n - 1 - j]).collect();
        let g = next.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        c = if g.is_zero() { next } else { next.into_iter().map(|x| x / &g).collect() };
        if c.last().is_some_and(Zero::is_zero) {
            return false;
        }
    }
    true
}

/// Integer characteristic polynomial `det(X·I − M)`, constant first.
pub fn char_poly(m: &IntMatrix) -> Vec<BigInt> {
    let g = m.len();
    let mk = MatrixK::new(Field::Rational, m.iter().map(|r| r.iter().map(|x| QuadElem::from_bigint(Field::Rational, x.clone())).collect()).collect())
        .expect("square");
    if g == 0 {
        return vec![BigInt::one()];
    }
    mk.char_poly().expect("square").iter().map(|c| c.x().to_integer()).collect()
}

/// Every eigenvalue of the exponent matrix has absolute value above one,
/// decided exactly on the reversed characteristic polynomial.
pub fn expanding_check(map: &MonomialMap) -> bool {
    let mut rev = char_poly(&map.m);
    rev.reverse();
    roots_inside_unit_disk(&rev)
}

/// The line example: `Φ(x,y,z) = (xy⁻¹, yz⁻², z)`, `Ψ(x,y,z) = (xy², yz⁴, z)`,
/// start `(2, 9, 3)`, target `x = 2, z = 3`.
pub fn line_example() -> (Vec<MonomialMap>, TorusPoint, CharacterTarget) {
    let phi = MonomialMap::from_i64(&[vec![1, -1, 0], vec![0, 1, -2], vec![0, 0, 1]]);
    let psi = MonomialMap::from_i64(&[vec![1, 2, 0], vec![0, 1, 4], vec![0, 0, 1]]);
    let alpha = TorusPoint::from_i64_ratios(&[(2, 1), (9, 1), (3, 1)]).expect("nonzero");
    let target = CharacterTarget::coordinates(3, &[(0, BigRational::from_integer(2.into())), (2, BigRational::from_integer(3.into()))])
        .expect("valid target");
    (vec![phi, psi], alpha, target)
}

/// The non-automorphism example: `Φ(x,y,z) = (x²y⁻¹, y²z⁻², z²)`,
/// `Ψ(x,y,z) = (x²y², y²z⁴, z²)`, start `(1, 1/3, 9)`, target `x = 1`.
pub fn noninvertible_example() -> (Vec<MonomialMap>, TorusPoint, CharacterTarget) {
    let phi = MonomialMap::from_i64(&[vec![2, -1, 0], vec![0, 2, -2], vec![0, 0, 2]]);
    let psi = MonomialMap::from_i64(&[vec![2, 2, 0], vec![0, 2, 4], vec![0, 0, 2]]);
    let alpha = TorusPoint::from_i64_ratios(&[(1, 1), (1, 3), (9, 1)]).expect("nonzero");
    let target = CharacterTarget::coordinates(3, &[(0, BigRational::one())]).expect("valid target");
    (vec![phi, psi], alpha, target)
}
