//! Dense matrices and vectors over ℚ or ℚ(√−d).

use std::fmt;

use num_rational::BigRational;
use serde_json::Value;

use super::quad::{Field, QuadElem};
use crate::error::{dim_err, Error, Result};

pub type VectorK = Vec<QuadElem>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixK {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<QuadElem>>,
}

pub fn zero_vector(field: Field, n: usize) -> VectorK {
    vec![QuadElem::zero(field); n]
}

pub fn vec_is_zero(v: &[QuadElem]) -> bool {
    v.iter().all(QuadElem::is_zero)
}

pub fn vec_sub(a: &[QuadElem], b: &[QuadElem]) -> VectorK {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[QuadElem], b: &[QuadElem]) -> VectorK {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[QuadElem], c: &QuadElem) -> VectorK {
    a.iter().map(|x| x * c).collect()
}

pub fn dot(a: &[QuadElem], b: &[QuadElem]) -> QuadElem {
    let field = a.first().map(|x| x.field()).unwrap_or(Field::Rational);
    a.iter().zip(b).fold(QuadElem::zero(field), |acc, (x, y)| &acc + &(x * y))
}

impl MatrixK {
    pub fn new(field: Field, data: Vec<Vec<QuadElem>>) -> Result<MatrixK> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(dim_err("ragged matrix rows"));
        }
        let data = data.into_iter().map(|r| r.into_iter().map(|x| x.promote(field)).collect()).collect();
        Ok(MatrixK { field, rows, cols, data })
    }

    pub fn from_i64(field: Field, data: &[Vec<i64>]) -> MatrixK {
        let d = data.iter().map(|r| r.iter().map(|&x| QuadElem::from_int(field, x)).collect()).collect();
        MatrixK::new(field, d).expect("rectangular literal")
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> MatrixK {
        MatrixK { field, rows, cols, data: vec![zero_vector(field, cols); rows] }
    }

    pub fn identity(field: Field, n: usize) -> MatrixK {
        let mut m = MatrixK::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = QuadElem::one(field);
        }
        m
    }

    pub fn scalar(c: &QuadElem, n: usize) -> MatrixK {
        let mut m = MatrixK::zeros(c.field(), n, n);
        for i in 0..n {
            m.data[i][i] = c.clone();
        }
        m
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[VectorK]) -> MatrixK {
        let mut m = MatrixK::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i][j] = c[i].promote(field);
            }
        }
        m
    }

    /// Rows given explicitly, with the column count fixed even when empty.
    pub fn from_rows(field: Field, cols: usize, rows: &[VectorK]) -> MatrixK {
        let mut m = MatrixK::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..cols {
                m.data[i][j] = r[j].promote(field);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadElem {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadElem) {
        self.data[i][j] = v.promote(self.field);
    }

    pub fn row(&self, i: usize) -> &[QuadElem] {
        &self.data[i]
    }

    pub fn data(&self) -> &[Vec<QuadElem>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> VectorK {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn promote(&self, field: Field) -> MatrixK {
        MatrixK {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(|x| x.promote(field)).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| vec_is_zero(r))
    }

    pub fn mul(&self, o: &MatrixK) -> Result<MatrixK> {
        if self.cols != o.rows {
            return Err(dim_err(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let field = self.field.join(o.field).ok_or_else(|| Error::Invalid("matrices over different fields".into()))?;
        let mut out = MatrixK::zeros(field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if !o.data[k][j].is_zero() {
                        out.data[i][j] = &out.data[i][j] + &(a * &o.data[k][j]);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[QuadElem]) -> Result<VectorK> {
        if v.len() != self.cols {
            return Err(dim_err("matrix-vector size mismatch"));
        }
        Ok(self.data.iter().map(|r| dot(r, v)).collect())
    }

    pub fn add(&self, o: &MatrixK) -> Result<MatrixK> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &MatrixK) -> Result<MatrixK> {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &MatrixK, f: impl Fn(&QuadElem, &QuadElem) -> QuadElem) -> Result<MatrixK> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(dim_err("matrix shapes differ"));
        }
        let field = self.field.join(o.field).ok_or_else(|| Error::Invalid("matrices over different fields".into()))?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
            .collect();
        Ok(MatrixK { field, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &QuadElem) -> MatrixK {
        let field = self.field.join(c.field()).expect("scalar from a different field");
        MatrixK {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| vec_scale(r, c)).collect(),
        }
    }

    pub fn transpose(&self) -> MatrixK {
        let data = (0..self.cols).map(|j| self.column(j)).collect();
        MatrixK { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    pub fn pow(&self, mut e: u64) -> Result<MatrixK> {
        if !self.is_square() {
            return Err(dim_err("power of a non-square matrix"));
        }
        let mut acc = MatrixK::identity(self.field, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// `self^e` for a signed exponent, through the inverse when negative.
    pub fn pow_signed(&self, e: i64) -> Result<MatrixK> {
        if e >= 0 {
            return self.pow(e as u64);
        }
        let inv = self.inverse().ok_or_else(|| Error::Domain("negative power of a singular matrix".into()))?;
        inv.pow(e.unsigned_abs())
    }

    pub fn commutes_with(&self, o: &MatrixK) -> Result<bool> {
        Ok(self.mul(o)? == o.mul(self)?)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (MatrixK, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.data[i][c].is_zero()) else { continue };
            m.data.swap(r, p);
            let inv = m.data[r][c].inv().expect("nonzero pivot");
            m.data[r] = vec_scale(&m.data[r], &inv);
            for i in 0..m.rows {
                if i != r && !m.data[i][c].is_zero() {
                    let f = m.data[i][c].clone();
                    let sub = vec_scale(&m.data[r], &f);
                    m.data[i] = vec_sub(&m.data[i], &sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : self·v = 0 }`.
    pub fn kernel(&self) -> Vec<VectorK> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(self.field, self.cols);
                v[f] = QuadElem::one(self.field);
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -&m.data[k][f];
                }
                v
            })
            .collect()
    }

    /// Basis of the row space of the left annihilator `{ ν : ν·self = 0 }`.
    pub fn left_kernel(&self) -> Vec<VectorK> {
        self.transpose().kernel()
    }

    pub fn inverse(&self) -> Option<MatrixK> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = MatrixK::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = QuadElem::one(self.field);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = r.data.iter().map(|row| row[n..].to_vec()).collect();
        Some(MatrixK { field: self.field, rows: n, cols: n, data })
    }

    pub fn det(&self) -> Result<QuadElem> {
        if !self.is_square() {
            return Err(dim_err("determinant of a non-square matrix"));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = QuadElem::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.data[i][c].is_zero()) else {
                return Ok(QuadElem::zero(self.field));
            };
            if p != c {
                m.data.swap(p, c);
                det = -det;
            }
            det = &det * &m.data[c][c];
            let inv = m.data[c][c].inv()?;
            for i in (c + 1)..n {
                if !m.data[i][c].is_zero() {
                    let f = &m.data[i][c] * &inv;
                    let sub = vec_scale(&m.data[c], &f);
                    m.data[i] = vec_sub(&m.data[i], &sub);
                }
            }
        }
        Ok(det)
    }

    pub fn trace(&self) -> QuadElem {
        (0..self.rows.min(self.cols)).fold(QuadElem::zero(self.field), |acc, i| &acc + &self.data[i][i])
    }

    /// Coefficients of `det(X·I − self)`, constant term first.
    pub fn char_poly(&self) -> Result<Vec<QuadElem>> {
        if !self.is_square() {
            return Err(dim_err("characteristic polynomial of a non-square matrix"));
        }
        // Faddeev–LeVerrier
        let n = self.rows;
        let f = self.field;
        let mut coeffs = vec![QuadElem::zero(f); n + 1];
        coeffs[n] = QuadElem::one(f);
        let mut m = MatrixK::zeros(f, n, n);
        for k in 1..=n {
            let cprev = coeffs[n - k + 1].clone();
            m = self.mul(&m)?.add(&MatrixK::scalar(&cprev, n))?;
            let am = self.mul(&m)?;
            let ck = am.trace().scale(&BigRational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = ck;
        }
        Ok(coeffs)
    }

    /// Solves `self · x = b`, returning any particular solution.
    pub fn solve(&self, b: &[QuadElem]) -> Result<Option<VectorK>> {
        if b.len() != self.rows {
            return Err(dim_err("right-hand side length differs from row count"));
        }
        let mut aug = MatrixK::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].promote(self.field);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vector(self.field, self.cols);
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r.data[k][self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.data.iter().map(|r| Value::Array(r.iter().map(QuadElem::to_json).collect())).collect())
    }

    pub fn from_json(v: &Value, field: Field) -> Result<MatrixK> {
        let rows = v.as_array().ok_or_else(|| Error::Invalid("matrix must be an array of rows".into()))?;
        let data = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?
                    .iter()
                    .map(|x| QuadElem::from_json(x, field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixK::new(field, data)
    }
}

pub fn vector_from_json(v: &Value, field: Field) -> Result<VectorK> {
    v.as_array()
        .ok_or_else(|| Error::Invalid("vector must be an array".into()))?
        .iter()
        .map(|x| QuadElem::from_json(x, field))
        .collect()
}

pub fn vector_to_json(v: &[QuadElem]) -> Value {
    Value::Array(v.iter().map(QuadElem::to_json).collect())
}

/// Rank of a family of vectors.
pub fn vectors_rank(field: Field, vs: &[VectorK], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let data: Vec<Vec<QuadElem>> = vs.to_vec();
    MatrixK { field, rows: vs.len(), cols: dim, data }.rank()
}

impl fmt::Display for MatrixK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(", "))?;
        }
        write!(f, "]")
    }
}
