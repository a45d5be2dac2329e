//! Combinatorics of ℕ^r: the product order, minimal elements, Hilbert bases of
//! lattice monoids and finite unions of lattice-semigroup cosets.

pub mod classc;
pub mod hilbert;
pub mod lattice;

pub use classc::{ClassCSet, CosetCell};
pub use hilbert::hilbert_basis;
pub use lattice::IntegerLattice;

use crate::error::{dim_err, Result};

/// A point of ℕ^r. Coordinates are kept as big integers so offsets never
/// overflow; box enumeration works with `Vec<u64>`.
pub type Tuple = Vec<num_bigint::BigInt>;

/// `a ≼ b` in the product order.
pub fn leq<T: PartialOrd>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(dim_err(format!("tuples of length {} and {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).all(|(x, y)| x <= y))
}

fn leq_unchecked<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The ≼-minimal elements of a finite set, in lexicographic order.
pub fn minimal_elements<T: Ord + Clone>(s: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut sorted: Vec<Vec<T>> = s.to_vec();
    sorted.sort();
    sorted.dedup();
    // anything below an element precedes it lexicographically
    let mut out: Vec<Vec<T>> = Vec::new();
    for x in sorted {
        if !out.iter().any(|m| leq_unchecked(m, &x)) {
            out.push(x);
        }
    }
    out.sort();
    out
}
