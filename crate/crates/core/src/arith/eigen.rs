//! Roots of characteristic polynomials in K and the joint eigenstructure of a
//! commuting family.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::factor::divisors;
use super::matrix::{MatrixK, VectorK};
use super::quad::{Field, QuadElem, CLASS_NUMBER_ONE};
use crate::error::{Error, Result};

pub fn poly_eval(coeffs: &[QuadElem], x: &QuadElem) -> QuadElem {
    let mut acc = QuadElem::zero(x.field());
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Quotient of `p` by `(X − root)`, assuming the division is exact.
fn deflate(coeffs: &[QuadElem], root: &QuadElem) -> Vec<QuadElem> {
    let n = coeffs.len() - 1;
    let mut out = vec![QuadElem::zero(root.field()); n];
    let mut carry = QuadElem::zero(root.field());
    for k in (1..=n).rev() {
        carry = &(&carry * root) + &coeffs[k];
        out[k - 1] = carry.clone();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootsOutcome {
    /// Distinct roots with multiplicities; the polynomial splits over K.
    Split(Vec<(QuadElem, usize)>),
    /// Splits after passing to this imaginary quadratic field.
    Extend(Field),
    Unsupported(String),
}

/// Roots with multiplicity, and the leftover factor.
type RootSplit = (Vec<(QuadElem, usize)>, Vec<QuadElem>);

/// Roots in K of a polynomial over K (coefficients constant-first).
fn roots_in_field(coeffs: &[QuadElem], field: Field) -> Result<RootSplit> {
    let mut p: Vec<QuadElem> = coeffs.iter().map(|c| c.promote(field)).collect();
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    let lead = p.last().unwrap().clone();
    p = p.iter().map(|c| c.div(&lead)).collect::<Result<_>>()?;
    let mut roots: Vec<(QuadElem, usize)> = Vec::new();
    let push = |roots: &mut Vec<(QuadElem, usize)>, x: QuadElem| {
        if let Some(e) = roots.iter_mut().find(|(r, _)| *r == x) {
            e.1 += 1;
        } else {
            roots.push((x, 1));
        }
    };
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        push(&mut roots, QuadElem::zero(field));
    }
    if p.len() > 1 {
        // X ↦ X/m scaling makes the monic polynomial integral
        let n = p.len() - 1;
        let m = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
        let mq = QuadElem::from_bigint(field, m.clone());
        let mut scaled = Vec::with_capacity(n + 1);
        for (k, c) in p.iter().enumerate() {
            scaled.push(c * &mq.pow((n - k) as i64)?);
        }
        let mut cands = divisors(&scaled[0])?;
        cands.sort_by(|a, b| a.norm().cmp(&b.norm()).then(a.cmp(b)));
        let minv = mq.inv()?;
        for c in cands {
            while scaled.len() > 1 && poly_eval(&scaled, &c).is_zero() {
                scaled = deflate(&scaled, &c);
                push(&mut roots, &c * &minv);
            }
            if scaled.len() == 1 {
                break;
            }
        }
        // undo the scaling on the leftover factor
        let deg = scaled.len() - 1;
        p = scaled
            .iter()
            .enumerate()
            .map(|(k, c)| c * &minv.pow((deg - k) as i64).unwrap())
            .collect();
    }
    Ok((roots, p))
}

fn squarefree_part(n: &BigInt) -> BigInt {
    let mut out = BigInt::one();
    for (p, e) in super::intfactor::factor_integer(n) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    out
}

pub fn polynomial_roots(coeffs: &[QuadElem]) -> Result<RootsOutcome> {
    let field = coeffs.iter().fold(Field::Rational, |f, c| f.join(c.field()).expect("mixed fields"));
    if field == Field::Rational || field.has_class_number_one() {
        let (roots, rest) = roots_in_field(coeffs, field)?;
        if rest.len() == 1 {
            return Ok(RootsOutcome::Split(roots));
        }
        if field != Field::Rational {
            return Ok(RootsOutcome::Unsupported("eigenvalues outside the working field".into()));
        }
        // a quadratic leftover tells us which field to try
        if rest.len() == 3 {
            let (b, c) = (rest[1].x(), rest[0].x());
            let disc: BigRational = b * b - c * BigRational::from_integer(4.into());
            if !disc.is_negative() {
                return Ok(RootsOutcome::Unsupported("real irrational eigenvalues".into()));
            }
            let n = -(disc.numer() * disc.denom());
            let d = squarefree_part(&n);
            let ext = Field::imag(num_traits::ToPrimitive::to_u64(&d).unwrap_or(0).max(1))?;
            if !ext.has_class_number_one() {
                return Ok(RootsOutcome::Unsupported(format!("eigenvalues in ℚ(√−{d}), class number > 1")));
            }
            return Ok(RootsOutcome::Extend(ext));
        }
        for d in CLASS_NUMBER_ONE {
            let ext = Field::ImagQuadratic(d);
            let (_, rest2) = roots_in_field(&rest, ext)?;
            if rest2.len() == 1 {
                return Ok(RootsOutcome::Extend(ext));
            }
        }
        return Ok(RootsOutcome::Unsupported("eigenvalues outside every supported quadratic field".into()));
    }
    Ok(RootsOutcome::Unsupported(format!("ℚ(√−{}) does not have class number one", field.d())))
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenStructure {
    /// `P⁻¹ Jᵢ P = diag(eigenvalues[i])`.
    Diagonalizable { p: MatrixK, eigenvalues: Vec<Vec<QuadElem>> },
    /// `B Jᵢ B⁻¹ = aᵢ · [[1, cᵢ], [0, 1]]`.
    TwoByTwoUnipotent { b: MatrixK, a: Vec<QuadElem>, c: Vec<QuadElem> },
    Unsupported(String),
}

pub fn check_commuting(js: &[MatrixK]) -> Result<()> {
    for i in 0..js.len() {
        for j in (i + 1)..js.len() {
            if !js[i].commutes_with(&js[j])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

fn intersect_with_kernel(w: &MatrixK, a: &MatrixK) -> Result<MatrixK> {
    let aw = a.mul(w)?;
    let ker = aw.kernel();
    let cols: Vec<VectorK> = ker.iter().map(|c| w.mul_vec(c)).collect::<Result<_>>()?;
    Ok(MatrixK::from_columns(w.field(), w.rows(), &cols))
}

fn eigenvalue_on(j: &MatrixK, v: &[QuadElem]) -> Result<QuadElem> {
    let jv = j.mul_vec(v)?;
    let k = v.iter().position(|x| !x.is_zero()).expect("nonzero eigenvector");
    jv[k].div(&v[k])
}

/// Joint eigenstructure of a commuting family, possibly over a quadratic
/// extension of the common field (returned alongside).
pub fn common_eigenstructure(js: &[MatrixK]) -> Result<(Field, EigenStructure)> {
    check_commuting(js)?;
    let mut field = js.iter().fold(Field::Rational, |f, m| f.join(m.field()).expect("mixed fields"));
    let g = js.first().map_or(0, MatrixK::rows);
    let mut all_roots = Vec::new();
    let mut promoted: Vec<MatrixK> = js.iter().map(|m| m.promote(field)).collect();
    let mut i = 0;
    while i < promoted.len() {
        match polynomial_roots(&promoted[i].char_poly()?)? {
            RootsOutcome::Split(r) => {
                all_roots.push(r);
                i += 1;
            }
            RootsOutcome::Extend(ext) => {
                field = ext;
                promoted = js.iter().map(|m| m.promote(field)).collect();
                all_roots.clear();
                i = 0;
            }
            RootsOutcome::Unsupported(why) => return Ok((field, EigenStructure::Unsupported(why))),
        }
    }
    let mut spaces = vec![MatrixK::identity(field, g)];
    let mut diagonalizable = true;
    'outer: for (j, roots) in promoted.iter().zip(&all_roots) {
        let mut next = Vec::new();
        for w in &spaces {
            let mut dim = 0;
            for (lam, _) in roots {
                let shifted = j.sub(&MatrixK::scalar(lam, g))?;
                let piece = intersect_with_kernel(w, &shifted)?;
                if piece.cols() > 0 {
                    dim += piece.cols();
                    next.push(piece);
                }
            }
            if dim < w.cols() {
                diagonalizable = false;
                break 'outer;
            }
        }
        spaces = next;
    }
    if diagonalizable {
        let cols: Vec<VectorK> = spaces.iter().flat_map(|w| (0..w.cols()).map(|c| w.column(c)).collect::<Vec<_>>()).collect();
        let p = MatrixK::from_columns(field, g, &cols);
        let mut eigenvalues = Vec::new();
        for j in &promoted {
            eigenvalues.push(cols.iter().map(|c| eigenvalue_on(j, c)).collect::<Result<Vec<_>>>()?);
        }
        let pinv = p.inverse().ok_or_else(|| Error::Domain("eigenvector matrix is singular".into()))?;
        for (j, ev) in promoted.iter().zip(&eigenvalues) {
            let d = pinv.mul(j)?.mul(&p)?;
            let mut want = MatrixK::zeros(field, g, g);
            for (k, e) in ev.iter().enumerate() {
                want.set(k, k, e.clone());
            }
            if d != want {
                return Err(Error::Domain("diagonalization failed verification".into()));
            }
        }
        return Ok((field, EigenStructure::Diagonalizable { p, eigenvalues }));
    }
    if g != 2 {
        return Ok((field, EigenStructure::Unsupported("not simultaneously diagonalizable".into())));
    }
    two_by_two(&promoted).map(|s| (field, s))
}

fn two_by_two(js: &[MatrixK]) -> Result<EigenStructure> {
    let field = js[0].field();
    let half = QuadElem::rational(field, BigRational::new(1.into(), 2.into()));
    let lambdas: Vec<QuadElem> = js.iter().map(|j| &j.trace() * &half).collect();
    let Some(l) = js
        .iter()
        .zip(&lambdas)
        .position(|(j, lam)| !j.sub(&MatrixK::scalar(lam, 2)).map(|m| m.is_zero()).unwrap_or(true))
    else {
        return Ok(EigenStructure::Unsupported("no non-scalar member".into()));
    };
    let nil = js[l].sub(&MatrixK::scalar(&lambdas[l], 2))?;
    let ker = nil.kernel();
    if ker.len() != 1 {
        return Ok(EigenStructure::Unsupported("unexpected kernel dimension".into()));
    }
    let e1 = ker[0].clone();
    let e2 = if e1[1].is_zero() {
        vec![QuadElem::zero(field), QuadElem::one(field)]
    } else {
        vec![QuadElem::one(field), QuadElem::zero(field)]
    };
    let cmat = MatrixK::from_columns(field, 2, &[e1, e2]);
    let b = cmat.inverse().ok_or_else(|| Error::Domain("singular change of basis".into()))?;
    let mut a = Vec::new();
    let mut c = Vec::new();
    for (j, lam) in js.iter().zip(&lambdas) {
        if lam.is_zero() {
            return Ok(EigenStructure::Unsupported("singular member in the unipotent case".into()));
        }
        let t = b.mul(j)?.mul(&cmat)?;
        let ci = t.get(0, 1).div(lam)?;
        let one = QuadElem::one(field);
        let zero = QuadElem::zero(field);
        let want = MatrixK::new(field, vec![vec![one.clone(), ci.clone()], vec![zero, one]])?.scale(lam);
        if t != want {
            return Ok(EigenStructure::Unsupported("members are not of the form a·(I + c·N)".into()));
        }
        a.push(lam.clone());
        c.push(ci);
    }
    Ok(EigenStructure::TwoByTwoUnipotent { b, a, c })
}
