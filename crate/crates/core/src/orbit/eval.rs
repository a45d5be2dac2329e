//! Exact brute-force evaluation of the orbit on a box.
//!
//! Entries are cleared of denominators once, so the inner loop works with
//! pairs `a + b√−d` of integers and a running scale factor.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::OrbitProblem;
use crate::arith::{QuadElem, VectorK};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Gi {
    a: BigInt,
    b: BigInt,
}

impl Gi {
    fn zero() -> Gi {
        Gi { a: BigInt::zero(), b: BigInt::zero() }
    }

    fn mul_add(&mut self, x: &Gi, y: &Gi, d: &BigInt) {
        self.a += &x.a * &y.a - d * &x.b * &y.b;
        self.b += &x.a * &y.b + &x.b * &y.a;
    }

    fn scaled(&self, s: &BigInt) -> Gi {
        Gi { a: &self.a * s, b: &self.b * s }
    }
}

fn lcm_den(xs: &[&QuadElem]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.x().denom()).lcm(x.y().denom()))
}

fn to_gi(x: &QuadElem, m: &BigInt) -> Gi {
    let (a, b) = x.scale(&m.clone().into()).int_pair().expect("denominators cleared");
    Gi { a, b }
}

/// Evaluates the orbit at every tuple of a box and tests the target.
#[derive(Debug, Clone)]
pub struct Evaluator {
    d: BigInt,
    mats: Vec<Vec<Vec<Gi>>>,
    scales: Vec<BigInt>,
    start: Vec<Gi>,
    rows: Vec<Vec<Gi>>,
    rhs: Vec<Gi>,
}

impl Evaluator {
    pub fn new(problem: &OrbitProblem) -> Result<Evaluator> {
        problem.validate()?;
        let d = BigInt::from(problem.field.d());
        let mut mats = Vec::new();
        let mut scales = Vec::new();
        for m in &problem.j {
            let entries: Vec<&QuadElem> = m.data().iter().flatten().collect();
            let s = lcm_den(&entries);
            mats.push(m.data().iter().map(|row| row.iter().map(|x| to_gi(x, &s)).collect()).collect());
            scales.push(s);
        }
        let mu = lcm_den(&problem.u0.iter().collect::<Vec<_>>());
        let start = problem.u0.iter().map(|x| to_gi(x, &mu)).collect();
        // ν·x(n) = β becomes D·(Lν)·X = (D·L·m_u·β)·S(n).
        let c = problem.constraints();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (nu, beta) in c.rows.iter().zip(&c.rhs) {
            let l = lcm_den(&nu.iter().collect::<Vec<_>>());
            let target = beta.scale(&(&l * &mu).into());
            let dd = lcm_den(&[&target]);
            rows.push(nu.iter().map(|x| to_gi(x, &(&l * &dd))).collect());
            rhs.push(to_gi(&target, &dd));
        }
        Ok(Evaluator { d, mats, scales, start, rows, rhs })
    }

    fn apply(&self, i: usize, x: &[Gi]) -> Vec<Gi> {
        self.mats[i]
            .iter()
            .map(|row| {
                let mut acc = Gi::zero();
                for (m, v) in row.iter().zip(x) {
                    acc.mul_add(m, v, &self.d);
                }
                acc
            })
            .collect()
    }

    fn check(&self, x: &[Gi], s: &BigInt) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, b)| {
            let mut acc = Gi::zero();
            for (nu, v) in row.iter().zip(x) {
                acc.mul_add(nu, v, &self.d);
            }
            acc == b.scaled(s)
        })
    }

    /// All tuples `0 ≤ nᵢ ≤ bounds[i]` landing in the target.
    pub fn hits(&self, bounds: &[u64]) -> BTreeSet<Vec<u64>> {
        assert_eq!(bounds.len(), self.mats.len(), "box rank differs from r");
        let mut out = BTreeSet::new();
        let mut n = vec![0u64; bounds.len()];
        self.walk(0, self.start.clone(), BigInt::one(), &mut n, bounds, &mut out);
        out
    }

    fn walk(&self, level: usize, mut x: Vec<Gi>, mut s: BigInt, n: &mut Vec<u64>, bounds: &[u64], out: &mut BTreeSet<Vec<u64>>) {
        if level == bounds.len() {
            if self.check(&x, &s) {
                out.insert(n.clone());
            }
            return;
        }
        for v in 0..=bounds[level] {
            n[level] = v;
            if v == bounds[level] {
                self.walk(level + 1, x, s, n, bounds, out);
                break;
            }
            self.walk(level + 1, x.clone(), s.clone(), n, bounds, out);
            x = self.apply(level, &x);
            s *= &self.scales[level];
        }
        n[level] = 0;
    }
}

/// `∏ Jᵢ^{nᵢ} u₀` for a signed tuple, through exact inverses.
pub fn orbit_point(problem: &OrbitProblem, n: &[i64]) -> Result<VectorK> {
    problem.power(n)?.mul_vec(&problem.u0)
}
