//! Return sets `E = { n ∈ ℕ^r : J₁^{n₁}⋯J_r^{n_r} u₀ ∈ v₀ + 𝒱 }` for
//! commuting matrices over ℚ or an imaginary quadratic field.

mod conjecture;
mod diag;
pub mod equations;
mod eval;
mod reduce;
mod search;
mod twobytwo;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::eigen::{check_commuting, common_eigenstructure, EigenStructure};
use crate::arith::matrix::{vector_from_json, vector_to_json, vectors_rank};
use crate::arith::{Field, MatrixK, QuadElem, VectorK};
use crate::error::dim_err;
use crate::semigroup::ClassCSet;
use crate::{Error, Result};

pub use conjecture::{cell_preserves_target, conjecture_and_verify};
pub use equations::{solve_linear_diophantine, solve_mixed};
pub use eval::{orbit_point, Evaluator};
pub use reduce::{eventual_image_reduce, Reduction};

/// Largest per-coordinate bound used for box searches when nothing else
/// is requested.
pub const DEFAULT_BOUND: u64 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitProblem {
    pub field: Field,
    pub g: usize,
    pub j: Vec<MatrixK>,
    pub u0: VectorK,
    pub v0: VectorK,
    pub v_basis: Vec<VectorK>,
}

/// The target as linear constraints `rows · x = rhs`.
#[derive(Debug, Clone)]
pub(crate) struct Constraints {
    pub rows: Vec<VectorK>,
    pub rhs: Vec<QuadElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Exact,
    VerifiedConjecture { bounds: Vec<u64>, verified_cells: Vec<bool> },
    Partial(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub answer: ClassCSet,
    pub certificate: Certificate,
}

/// Internal status before box and cell checks are attached.
#[derive(Debug, Clone)]
pub(crate) enum Status {
    Exact,
    Conjectured { bounds: Vec<u64>, box_checked: bool },
    Partial(String),
}

impl Status {
    fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Partial(a), Status::Partial(b)) => Status::Partial(format!("{a}; {b}")),
            (Status::Partial(a), _) | (_, Status::Partial(a)) => Status::Partial(a),
            (Status::Exact, Status::Exact) => Status::Exact,
            (Status::Conjectured { bounds, .. }, Status::Exact) | (Status::Exact, Status::Conjectured { bounds, .. }) => {
                Status::Conjectured { bounds, box_checked: false }
            }
            (Status::Conjectured { bounds: a, .. }, Status::Conjectured { bounds: b, .. }) => {
                let bounds = a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect();
                Status::Conjectured { bounds, box_checked: false }
            }
        }
    }
}

pub(crate) type Raw = (ClassCSet, Status);

/// Per-coordinate bound keeping a box search near twenty thousand points.
pub fn default_bounds(r: usize) -> Vec<u64> {
    let mut b = DEFAULT_BOUND;
    while b > 1 && (b + 1).checked_pow(r as u32).is_none_or(|n| n > 20_000) {
        b -= 1;
    }
    vec![b; r]
}

pub(crate) fn parallel(x: &[QuadElem], w: &[QuadElem]) -> bool {
    let Some(k) = w.iter().position(|c| !c.is_zero()) else {
        return x.iter().all(QuadElem::is_zero);
    };
    let t = x[k].div(&w[k]).expect("nonzero pivot");
    x.iter().zip(w).all(|(a, b)| *a == &t * b)
}

impl OrbitProblem {
    /// Builds and validates a problem; every entry is promoted to `field`.
    pub fn new(field: Field, j: Vec<MatrixK>, u0: VectorK, v0: VectorK, v_basis: Vec<VectorK>) -> Result<Self> {
        let g = u0.len();
        let pv = |v: VectorK| v.into_iter().map(|x| x.promote(field)).collect::<VectorK>();
        let p = OrbitProblem {
            field,
            g,
            j: j.into_iter().map(|m| m.promote(field)).collect(),
            u0: pv(u0),
            v0: pv(v0),
            v_basis: v_basis.into_iter().map(pv).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Integer literals over ℚ.
    pub fn from_i64(j: &[Vec<Vec<i64>>], u0: &[i64], v0: &[i64], v_basis: &[Vec<i64>]) -> Result<Self> {
        let f = Field::Rational;
        let vec = |v: &[i64]| v.iter().map(|&x| QuadElem::from_int(f, x)).collect::<VectorK>();
        OrbitProblem::new(
            f,
            j.iter().map(|m| MatrixK::from_i64(f, m)).collect(),
            vec(u0),
            vec(v0),
            v_basis.iter().map(|v| vec(v)).collect(),
        )
    }

    pub fn r(&self) -> usize {
        self.j.len()
    }

    pub fn validate(&self) -> Result<()> {
        if let Field::ImagQuadratic(_) = self.field {
            self.field.require_factorization()?;
        }
        let g = self.g;
        if self.u0.len() != g || self.v0.len() != g {
            return Err(dim_err("u0 and v0 must have length g"));
        }
        for (i, m) in self.j.iter().enumerate() {
            if m.rows() != g || m.cols() != g {
                return Err(dim_err(format!("J{i} is not {g}×{g}")));
            }
        }
        if self.v_basis.iter().any(|v| v.len() != g) {
            return Err(dim_err("target basis vectors must have length g"));
        }
        if vectors_rank(self.field, &self.v_basis, g) != self.v_basis.len() {
            return Err(Error::DependentBasis);
        }
        check_commuting(&self.j)
    }

    pub(crate) fn constraints(&self) -> Constraints {
        let rows = if self.v_basis.is_empty() {
            MatrixK::identity(self.field, self.g).data().to_vec()
        } else {
            MatrixK::from_rows(self.field, self.g, &self.v_basis).kernel()
        };
        let rhs = rows.iter().map(|r| crate::arith::matrix::dot(r, &self.v0)).collect();
        Constraints { rows, rhs }
    }

    pub fn in_target(&self, x: &[QuadElem]) -> bool {
        let c = self.constraints();
        c.rows.iter().zip(&c.rhs).all(|(r, b)| crate::arith::matrix::dot(r, x) == *b)
    }

    /// Same dynamics with the target `rows · x = rhs`; `None` if that
    /// system has no solution.
    pub(crate) fn with_constraints(&self, rows: &[VectorK], rhs: &[QuadElem]) -> Result<Option<OrbitProblem>> {
        let m = MatrixK::from_rows(self.field, self.g, rows);
        let Some(v0) = m.solve(rhs)? else { return Ok(None) };
        let v_basis = m.kernel();
        Ok(Some(OrbitProblem { v0, v_basis, ..self.clone() }))
    }

    pub(crate) fn with_start(&self, u0: VectorK) -> OrbitProblem {
        OrbitProblem { u0, ..self.clone() }
    }

    pub(crate) fn promote(&self, field: Field) -> OrbitProblem {
        let pv = |v: &VectorK| v.iter().map(|x| x.promote(field)).collect::<VectorK>();
        OrbitProblem {
            field,
            g: self.g,
            j: self.j.iter().map(|m| m.promote(field)).collect(),
            u0: pv(&self.u0),
            v0: pv(&self.v0),
            v_basis: self.v_basis.iter().map(pv).collect(),
        }
    }

    /// `∏ Jᵢ^{nᵢ}` for a signed exponent tuple.
    pub fn power(&self, n: &[i64]) -> Result<MatrixK> {
        if n.len() != self.r() {
            return Err(dim_err("exponent tuple length differs from r"));
        }
        let mut acc = MatrixK::identity(self.field, self.g);
        for (m, &e) in self.j.iter().zip(n) {
            if e != 0 {
                acc = acc.mul(&m.pow_signed(e)?)?;
            }
        }
        Ok(acc)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = match v.get("field") {
            Some(f) => Field::from_json(f)?,
            None => Field::Rational,
        };
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Invalid(format!("missing field '{k}'")));
        let j = get("J")?
            .as_array()
            .ok_or_else(|| Error::Invalid("'J' must be an array of matrices".into()))?
            .iter()
            .enumerate()
            .map(|(i, m)| MatrixK::from_json(m, field).map_err(|e| Error::Invalid(format!("J[{i}]: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let u0 = vector_from_json(get("u0")?, field).map_err(|e| Error::Invalid(format!("u0: {e}")))?;
        let v0 = vector_from_json(get("v0")?, field).map_err(|e| Error::Invalid(format!("v0: {e}")))?;
        let vb = match v.get("V") {
            Some(vs) => vs
                .as_array()
                .ok_or_else(|| Error::Invalid("'V' must be an array of vectors".into()))?
                .iter()
                .enumerate()
                .map(|(i, x)| vector_from_json(x, field).map_err(|e| Error::Invalid(format!("V[{i}]: {e}"))))
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        if let Some(g) = v.get("g") {
            if g.as_u64() != Some(u0.len() as u64) {
                return Err(dim_err("'g' differs from the length of u0"));
            }
        }
        OrbitProblem::new(field, j, u0, v0, vb)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "g": self.g,
            "J": self.j.iter().map(MatrixK::to_json).collect::<Vec<_>>(),
            "u0": vector_to_json(&self.u0),
            "v0": vector_to_json(&self.v0),
            "V": self.v_basis.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
        })
    }
}

impl Certificate {
    pub fn is_exact(&self) -> bool {
        matches!(self, Certificate::Exact)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Exact => json!("exact"),
            Certificate::VerifiedConjecture { bounds, verified_cells } => {
                json!({"verified_box": bounds, "verified_cells": verified_cells})
            }
            Certificate::Partial(reason) => json!({"partial": reason}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if v.as_str() == Some("exact") {
            return Ok(Certificate::Exact);
        }
        if let Some(reason) = v.get("partial") {
            return Ok(Certificate::Partial(reason.as_str().unwrap_or_default().to_string()));
        }
        if let Some(b) = v.get("verified_box") {
            let bounds = serde_json::from_value(b.clone()).map_err(|e| Error::Invalid(format!("certificate box: {e}")))?;
            let verified_cells = match v.get("verified_cells") {
                Some(c) => serde_json::from_value(c.clone())
                    .map_err(|e| Error::Invalid(format!("certificate verified_cells: {e}")))?,
                None => Vec::new(),
            };
            return Ok(Certificate::VerifiedConjecture { bounds, verified_cells });
        }
        Err(Error::Invalid("certificate must be \"exact\", {\"verified_box\": ..} or {\"partial\": ..}".into()))
    }
}

impl SolutionSet {
    pub fn to_json(&self) -> Value {
        let mut v = self.answer.to_json();
        v["certificate"] = self.certificate.to_json();
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let answer = ClassCSet::from_json(v)?;
        let certificate = match v.get("certificate") {
            Some(c) => Certificate::from_json(c)?,
            None => Certificate::Partial("no certificate supplied".into()),
        };
        Ok(SolutionSet { answer, certificate })
    }
}

/// Solves the problem, choosing the strongest available method.
pub fn solve(problem: &OrbitProblem) -> Result<SolutionSet> {
    problem.validate()?;
    let (answer, status) = solve_raw(problem)?;
    finalize(problem, answer, status)
}

/// Attaches the box and per-cell checks to a conjectured answer.
pub(crate) fn finalize(problem: &OrbitProblem, answer: ClassCSet, status: Status) -> Result<SolutionSet> {
    let certificate = match status {
        Status::Exact => Certificate::Exact,
        Status::Partial(reason) => Certificate::Partial(reason),
        Status::Conjectured { bounds, box_checked } => {
            let report = if box_checked { None } else { Some(verify_solution_set(problem, &answer, &bounds)?) };
            let flags = answer.cells().iter().map(|c| cell_preserves_target(problem, c)).collect::<Result<Vec<_>>>()?;
            match report {
                Some(rep) if !rep.ok() => Certificate::Partial(format!("box check failed: {}", rep.describe())),
                _ if flags.iter().all(|&f| f) => Certificate::VerifiedConjecture { bounds, verified_cells: flags },
                _ => Certificate::Partial(format!(
                    "{} of {} cells could not be verified symbolically",
                    flags.iter().filter(|f| !**f).count(),
                    flags.len()
                )),
            }
        }
    };
    Ok(SolutionSet { answer, certificate })
}

pub(crate) fn solve_raw(problem: &OrbitProblem) -> Result<Raw> {
    let r = problem.r();
    let c = problem.constraints();
    if c.rows.is_empty() {
        return Ok((ClassCSet::full(r), Status::Exact));
    }
    if r == 0 {
        let set = if problem.in_target(&problem.u0) { ClassCSet::full(0) } else { ClassCSet::empty(0) };
        return Ok((set, Status::Exact));
    }
    if problem.j.iter().any(|m| m.inverse().is_none()) {
        return reduce::solve_by_reduction(problem);
    }
    let (field, structure) = common_eigenstructure(&problem.j)?;
    let problem = &problem.promote(field);
    let dim_v = problem.v_basis.len();
    match structure {
        EigenStructure::Diagonalizable { p, eigenvalues } => {
            return diag::solve_diagonalizable(problem, &p, &eigenvalues);
        }
        EigenStructure::TwoByTwoUnipotent { b, a, c } if dim_v <= 1 => {
            if let Some(raw) = twobytwo::solve_2x2(problem, &b, &a, &c)? {
                return Ok(raw);
            }
        }
        _ => {}
    }
    if dim_v == 1 && problem.v0.iter().all(QuadElem::is_zero) {
        return search::solve_line(problem, &problem.v_basis[0]);
    }
    if dim_v == 0 {
        return search::solve_point_target(problem);
    }
    conjecture::conjecture_raw(problem, &default_bounds(r))
}

/// Generators `∏ Jᵢ^{nᵢ} u₀` with `0 ≤ nᵢ < g`; by Cayley–Hamilton they
/// span the same group as the whole orbit.
pub fn orbit_span(problem: &OrbitProblem) -> Result<Vec<VectorK>> {
    let r = problem.r();
    let top = problem.g.max(1) as u64 - 1;
    let mut out: Vec<VectorK> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut n = vec![0u64; r];
    loop {
        let e: Vec<i64> = n.iter().map(|&x| x as i64).collect();
        let v = problem.power(&e)?.mul_vec(&problem.u0)?;
        if seen.insert(v.clone()) {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == r {
                return Ok(out);
            }
            if n[k] < top {
                n[k] += 1;
                break;
            }
            n[k] = 0;
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub bounds: Vec<u64>,
    pub checked: u64,
    /// A tuple of `E` the answer leaves out.
    pub missed: Option<Vec<u64>>,
    /// A tuple the answer claims that is not in `E`.
    pub spurious: Option<Vec<u64>>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.missed.is_none() && self.spurious.is_none()
    }

    pub fn describe(&self) -> String {
        match (&self.missed, &self.spurious) {
            (None, None) => format!("all {} tuples agree", self.checked),
            (Some(m), _) => format!("missed tuple {m:?}"),
            (None, Some(s)) => format!("spurious tuple {s:?}"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "box": self.bounds,
            "checked": self.checked,
            "missed": self.missed,
            "spurious": self.spurious,
        })
    }
}

/// Compares `answer` with exact evaluation on every tuple of the box and
/// reports the lexicographically first disagreement of each kind.
pub fn verify_solution_set(problem: &OrbitProblem, answer: &ClassCSet, bounds: &[u64]) -> Result<VerifyReport> {
    if bounds.len() != problem.r() || answer.rank() != problem.r() {
        return Err(dim_err("box, answer, and problem ranks differ"));
    }
    let hits = Evaluator::new(problem)?.hits(bounds);
    let claimed = answer.box_enumerate(bounds)?;
    let missed = hits.difference(&claimed).next().cloned();
    let spurious = claimed.difference(&hits).next().cloned();
    let checked = bounds.iter().map(|&b| b + 1).product();
    Ok(VerifyReport { bounds: bounds.to_vec(), checked, missed, spurious })
}

pub(crate) fn big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
