//! Quadratic-form invariants over the rationals and formal function
//! fields: Hilbert symbols, signed determinant, Hasse/Witt invariants,
//! ideal-filtration membership, Witt equivalence, constructive Pfister
//! decompositions, the generic trivial-discriminant family, and the
//! 3-fold Pfister-number lower bound.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use thiserror::Error;

pub mod form;
pub mod generic;
pub mod hilbert;
pub mod pfister;
pub mod sqclass;

pub use form::{
    hasse_witt, in_power_i, is_witt_trivial, signature_at_infinity, signed_det,
    signed_det_formal, witt_clifford_invariant, witt_equivalent, BrauerTwo, Entry, QForm,
};
pub use generic::{generic_qn, verify_generic_qn, FormalBrauer, GenericQnReport};
pub use hilbert::{hilbert_symbol, relevant_places, Place};
pub use pfister::{pfister_decompose_1, pfister_decompose_2, PfisterExpr};
pub use sqclass::{FormalClass, SqClass};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WittError {
    #[error("quadratic forms cannot have zero entries")]
    ZeroEntry,
    #[error("entry too large to factor exactly")]
    EntryTooLarge,
    #[error("operation requires rational entries")]
    FormalEntry,
    #[error("form is not of even dimension (not in I)")]
    NotInI1,
    #[error("form is not in I² (odd dimension or nontrivial signed determinant)")]
    NotInI2,
    #[error("dimension {0} out of range for this family")]
    BadDimension(u32),
    #[error("verified identity failed: {0} (internal error)")]
    VerificationFailed(&'static str),
}

/// Lower bound for the number of 3-fold Pfister forms needed for an
/// n-dimensional class in I³: `(2^{(n+4)/4} − n − 2)/7` as an exact
/// rational when `4 | n`; for `n ≡ 2 (mod 4)` the power of two is replaced
/// by its integer floor `⌊2^{(n+4)/4}⌋`, a slightly weaker but exact bound.
/// Nonpositive (vacuous) for `n ≤ 10`.
pub fn pfister3_lower_bound(n: u64) -> Result<BigRational, WittError> {
    if n < 2 || n % 2 != 0 {
        return Err(WittError::BadDimension(n as u32));
    }
    let numerator = if n % 4 == 0 {
        BigInt::from(2).pow(((n + 4) / 4) as u32)
    } else {
        // ⌊2^{(n+4)/4}⌋ = ⌊√(2^{(n+4)/2})⌋.
        BigInt::from(2).pow(((n + 4) / 2) as u32).sqrt()
    };
    Ok(BigRational::new(
        numerator - BigInt::from(n) - BigInt::from(2),
        BigInt::from(7),
    ))
}
