use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::intmat::{self, IntMatrix};
use crate::error::{dim_err, Error, Result};

/// A subgroup of ℤ^r, stored by its row Hermite normal form. Equal lattices
/// have identical `basis` matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerLattice {
    ambient: usize,
    basis: IntMatrix,
}

impl IntegerLattice {
    /// Lattice generated by arbitrary integer rows.
    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient) {
            return Err(dim_err(format!("generator of length {} in ambient rank {ambient}", g.len())));
        }
        Ok(Self { ambient, basis: intmat::hnf(gens, ambient) })
    }

    pub fn from_i64(ambient: usize, gens: &[Vec<i64>]) -> Result<Self> {
        Self::from_generators(ambient, &intmat::to_big(gens))
    }

    /// Accepts `basis` only if it already is in row Hermite normal form.
    pub fn from_hnf(ambient: usize, basis: IntMatrix) -> Result<Self> {
        let l = Self::from_generators(ambient, &basis)?;
        if l.basis != basis {
            return Err(Error::Invalid("lattice basis is not in Hermite normal form".into()));
        }
        Ok(l)
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: intmat::identity(ambient) }
    }

    /// The lattice spanned by the unit vectors `e_j` for `j` in `coords`.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let gens: IntMatrix = coords
            .iter()
            .map(|&j| (0..ambient).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self { ambient, basis: intmat::hnf(&gens, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    fn pivot(row: &[BigInt]) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")
    }

    /// Canonical representative of `v + H`: pivot coordinates land in
    /// `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for row in &self.basis {
            let p = Self::pivot(row);
            let q = out[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (o, r) in out.iter_mut().zip(row) {
                    *o -= &q * r;
                }
            }
        }
        out
    }

    /// Coefficients `c` with `c · basis = v`, if `v` lies in the lattice.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        let mut col = 0usize;
        for row in &self.basis {
            let p = Self::pivot(row);
            if rest[col..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (o, b) in rest.iter_mut().zip(row) {
                *o -= &q * b;
            }
            coeffs.push(q);
            col = p + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn intersect(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        self.check_same(other)?;
        if self.basis.is_empty() || other.basis.is_empty() {
            return Ok(Self::zero(self.ambient));
        }
        let k = self.basis.len();
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().cloned());
        let ker = intmat::left_kernel(&stacked, self.ambient);
        let gens: IntMatrix = ker
            .iter()
            .map(|c| intmat::vec_mat(&c[..k], &self.basis, self.ambient))
            .collect();
        Self::from_generators(self.ambient, &gens)
    }

    pub fn sum(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        self.check_same(other)?;
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::from_generators(self.ambient, &gens)
    }

    /// `N · H`. A positive multiple of an HNF basis is still in HNF.
    pub fn scale(&self, n: &BigInt) -> Result<IntegerLattice> {
        if n <= &BigInt::zero() {
            return Err(Error::Domain("lattice scale factor must be positive".into()));
        }
        let basis = self.basis.iter().map(|r| r.iter().map(|x| x * n).collect()).collect();
        Ok(Self { ambient: self.ambient, basis })
    }

    /// Image under deleting coordinate `i`.
    pub fn delete_coordinate(&self, i: usize) -> Result<IntegerLattice> {
        self.check_index(i)?;
        let gens: IntMatrix = self
            .basis
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect())
            .collect();
        Self::from_generators(self.ambient - 1, &gens)
    }

    /// Image under the embedding that inserts a zero coordinate at `i`.
    pub fn insert_coordinate(&self, i: usize) -> Result<IntegerLattice> {
        if i > self.ambient {
            return Err(Error::IndexOutOfRange { index: i, rank: self.ambient + 1 });
        }
        let gens: IntMatrix = self
            .basis
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.insert(i, BigInt::zero());
                v
            })
            .collect();
        Self::from_generators(self.ambient + 1, &gens)
    }

    /// Index `[ℤ^r : H]` when H has full rank.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() != self.ambient {
            return None;
        }
        Some(self.basis.iter().enumerate().map(|(k, r)| r[k].clone()).product())
    }

    /// Small-integer copy of the basis, when every entry fits.
    pub fn basis_i128(&self) -> Option<Vec<Vec<i128>>> {
        use num_traits::ToPrimitive;
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
            .collect()
    }

    fn check_same(&self, other: &IntegerLattice) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(dim_err(format!("lattices in ranks {} and {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.ambient {
            return Err(Error::IndexOutOfRange { index: i, rank: self.ambient });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonical_basis() {
        let a = IntegerLattice::from_i64(2, &[vec![2, 0], vec![1, 1]]).unwrap();
        let b = IntegerLattice::from_i64(2, &[vec![1, 1], vec![3, 1], vec![0, 2]]).unwrap();
        assert_eq!(a, b);
        assert!(IntegerLattice::from_hnf(2, intmat::to_big(&[vec![2, 0], vec![1, 1]])).is_err());
        assert!(IntegerLattice::from_hnf(2, intmat::to_big(&[vec![1, 1], vec![0, 2]])).is_ok());
    }

    #[test]
    fn intersection_is_lcm() {
        let a = IntegerLattice::from_i64(2, &[vec![2, 0]]).unwrap();
        let b = IntegerLattice::from_i64(2, &[vec![3, 0]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), IntegerLattice::from_i64(2, &[vec![6, 0]]).unwrap());
        let c = IntegerLattice::from_i64(2, &[vec![0, 1]]).unwrap();
        assert_eq!(a.intersect(&c).unwrap().rank(), 0);
    }

    #[test]
    fn membership_and_reduce() {
        let h = IntegerLattice::from_i64(3, &[vec![1, 1, 0], vec![0, 3, 1]]).unwrap();
        assert!(h.contains(&big(&[2, 5, 1])));
        assert!(!h.contains(&big(&[2, 5, 2])));
        let r1 = h.reduce(&big(&[7, -4, 9]));
        let r2 = h.reduce(&big(&[6, -5, 9]));
        assert_eq!(r1, r2);
    }

    #[test]
    fn coordinate_surgery() {
        let h = IntegerLattice::from_i64(3, &[vec![2, 0, 1], vec![0, 1, 1]]).unwrap();
        let d = h.delete_coordinate(2).unwrap();
        assert_eq!(d, IntegerLattice::from_i64(2, &[vec![2, 0], vec![0, 1]]).unwrap());
        let e = d.insert_coordinate(1).unwrap();
        assert!(e.contains(&big(&[2, 0, 0])));
        assert!(!e.contains(&big(&[0, 1, 0])));
    }
}
