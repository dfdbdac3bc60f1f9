//! The finite 2-group sitting over the diagonal torus inside the spin
//! group, realised by exact sign calculus on signed index subsets.
//!
//! Basis blades multiply by the relations `e_i² = −1` and
//! `e_i e_j = −e_j e_i` for `i ≠ j`; the sign of a product is computed from
//! an exact interleave-transposition count, guarded by an independent
//! token-rewriting oracle in [`oracle`].

use std::collections::HashMap;

use thiserror::Error;

use crate::exec;
use crate::group::{self, FiniteGroup, GroupError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(u32, u32),
    #[error("subset has odd cardinality")]
    OddSubset,
    #[error("n = {0} outside the supported range {1}..={2}")]
    BadDimension(u32, u32, u32),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `±e_I` for a sorted subset `I ⊆ {1..n}`, stored as a sign and a bitmask
/// (bit `i-1` set ⇔ `i ∈ I`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedSubset {
    pub sign: i8,
    pub bits: u32,
}

impl SignedSubset {
    pub fn basis(indices: &[u32], n: u32) -> Result<SignedSubset, CliffordError> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > n {
                return Err(CliffordError::IndexOutOfRange(i, n));
            }
            bits |= 1 << (i - 1);
        }
        Ok(SignedSubset { sign: 1, bits })
    }

    pub fn identity() -> SignedSubset {
        SignedSubset { sign: 1, bits: 0 }
    }

    pub fn neg(self) -> SignedSubset {
        SignedSubset {
            sign: -self.sign,
            bits: self.bits,
        }
    }

    pub fn indices(&self) -> Vec<u32> {
        (0..32).filter(|&b| self.bits >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn label(&self) -> String {
        let s = if self.sign > 0 { "+" } else { "-" };
        if self.bits == 0 {
            format!("{s}1")
        } else {
            let idx: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
            format!("{s}e{{{}}}", idx.join(","))
        }
    }
}

/// Product in the Clifford algebra of `−(x_1² + ⋯ + x_n²)`: the index set
/// is the symmetric difference, the sign is
/// `x.sign · y.sign · (−1)^t · (−1)^{|x ∩ y|}` with `t` the exact count of
/// transpositions needed to interleave the two sorted index lists.
pub fn clifford_mul(
    x: SignedSubset,
    y: SignedSubset,
    n: u32,
) -> Result<SignedSubset, CliffordError> {
    let mask = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
    if x.bits & !mask != 0 {
        return Err(CliffordError::IndexOutOfRange(32, n));
    }
    if y.bits & !mask != 0 {
        return Err(CliffordError::IndexOutOfRange(32, n));
    }
    let mut t = 0u32;
    let mut yb = y.bits;
    while yb != 0 {
        let b = yb.trailing_zeros();
        // x-indices strictly above the y-index at bit position b.
        t += (x.bits >> (b + 1)).count_ones();
        yb &= yb - 1;
    }
    let squares = (x.bits & y.bits).count_ones();
    let parity = (t + squares) & 1;
    let sign = x.sign * y.sign * if parity == 1 { -1 } else { 1 };
    Ok(SignedSubset {
        sign,
        bits: x.bits ^ y.bits,
    })
}

/// `[e_I, e_J] = (−1)^{|I ∩ J|}` for even subsets.
pub fn commutator_pairing(i_bits: u32, j_bits: u32) -> Result<i8, CliffordError> {
    if i_bits.count_ones() % 2 != 0 || j_bits.count_ones() % 2 != 0 {
        return Err(CliffordError::OddSubset);
    }
    Ok(if (i_bits & j_bits).count_ones() % 2 == 1 {
        -1
    } else {
        1
    })
}

/// Independent token-rewriting implementation: products are expanded as
/// words of generators and bubble-rewritten with `e_i e_j = −e_j e_i` and
/// `e_i e_i = −1`. Used only to cross-check [`clifford_mul`].
pub mod oracle {
    use super::SignedSubset;

    pub fn token_mul(x: SignedSubset, y: SignedSubset) -> SignedSubset {
        let mut word: Vec<u32> = x.indices();
        word.extend(y.indices());
        let mut sign = x.sign * y.sign;
        'rewrite: loop {
            for i in 0..word.len().saturating_sub(1) {
                if word[i] == word[i + 1] {
                    word.drain(i..=i + 1);
                    sign = -sign;
                    continue 'rewrite;
                }
                if word[i] > word[i + 1] {
                    word.swap(i, i + 1);
                    sign = -sign;
                    continue 'rewrite;
                }
            }
            break;
        }
        let mut bits = 0u32;
        for &i in &word {
            bits |= 1 << (i - 1);
        }
        SignedSubset { sign, bits }
    }
}

const GAMMA_MIN_N: u32 = 2;
const GAMMA_MAX_N: u32 = 16;

/// Element coding for the realised table group.
struct GammaCoding {
    n: u32,
    masks: Vec<u32>,
    rank: HashMap<u32, usize>,
}

impl GammaCoding {
    fn new(n: u32, even_only: bool) -> GammaCoding {
        let masks: Vec<u32> = (0u32..1 << n)
            .filter(|m| !even_only || m.count_ones() % 2 == 0)
            .collect();
        let rank = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        GammaCoding { n, masks, rank }
    }

    fn encode(&self, x: SignedSubset) -> usize {
        let sign_bit = usize::from(x.sign < 0);
        sign_bit * self.masks.len() + self.rank[&x.bits]
    }

    fn decode(&self, idx: usize) -> SignedSubset {
        let half = self.masks.len();
        SignedSubset {
            sign: if idx >= half { -1 } else { 1 },
            bits: self.masks[idx % half],
        }
    }
}

/// Realises the group `{±e_I}` as a Cayley table: even subsets only gives
/// the order-`2^n` group over the special-orthogonal diagonal, all subsets
/// the order-`2^{n+1}` preimage of the full diagonal in the pin group.
pub fn gamma_group(n: u32, even_only: bool) -> Result<FiniteGroup, CliffordError> {
    if !(GAMMA_MIN_N..=GAMMA_MAX_N).contains(&n) {
        return Err(CliffordError::BadDimension(n, GAMMA_MIN_N, GAMMA_MAX_N));
    }
    let coding = GammaCoding::new(n, even_only);
    let total = 2 * coding.masks.len();
    if total as u64 > group::MAX_ORDER {
        return Err(CliffordError::Group(GroupError::OrderCapExceeded(
            total as u64,
        )));
    }
    let table: Vec<u32> = exec::map_range(total * total, |cell| {
        let (i, j) = (cell / total, cell % total);
        let prod = clifford_mul(coding.decode(i), coding.decode(j), n)
            .expect("masks stay in range");
        coding.encode(prod) as u32
    });
    let labels: Vec<String> = (0..total).map(|i| coding.decode(i).label()).collect();
    Ok(FiniteGroup::from_table(table, labels)?)
}

/// Isomorphism type of the center, by residue of `n` mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterType {
    Z2,
    Z4,
    Z2xZ2,
}

impl CenterType {
    /// Invariant factors of the corresponding abelian group.
    pub fn invariant_factors(self) -> Vec<u64> {
        match self {
            CenterType::Z2 => vec![2],
            CenterType::Z4 => vec![4],
            CenterType::Z2xZ2 => vec![2, 2],
        }
    }
}

pub fn gamma_center_type(n: u32) -> CenterType {
    if n % 2 == 1 {
        CenterType::Z2
    } else if n % 4 == 2 {
        CenterType::Z4
    } else {
        CenterType::Z2xZ2
    }
}

/// Closed form for the essential dimension of the even gamma group:
/// `2^{(n−1)/2}` for odd `n`, `2^{(n−2)/2}` for `n ≡ 2 (mod 4)`, and
/// `2^{(n−2)/2} + 1` when 4 divides `n`.
pub fn ed_gamma(n: u32) -> u64 {
    assert!(n >= 2, "gamma group needs n >= 2");
    if n % 2 == 1 {
        1 << ((n - 1) / 2)
    } else if n % 4 == 2 {
        1 << ((n - 2) / 2)
    } else {
        (1 << ((n - 2) / 2)) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(indices: &[u32], n: u32) -> SignedSubset {
        SignedSubset::basis(indices, n).unwrap()
    }

    #[test]
    fn identity_and_squares() {
        let x = e(&[1, 3], 4);
        assert_eq!(clifford_mul(SignedSubset::identity(), x, 4).unwrap(), x);
        assert_eq!(clifford_mul(x, SignedSubset::identity(), 4).unwrap(), x);
        // e_1 · e_1 = −1.
        let e1 = e(&[1], 4);
        assert_eq!(
            clifford_mul(e1, e1, 4).unwrap(),
            SignedSubset::identity().neg()
        );
    }

    #[test]
    fn worked_product() {
        // e_{1,2} · e_{1,3} = +e_{2,3}.
        let a = e(&[1, 2], 4);
        let b = e(&[1, 3], 4);
        assert_eq!(clifford_mul(a, b, 4).unwrap(), e(&[2, 3], 4));
        // Anticommutation: e_1 e_2 = −e_2 e_1.
        let p = clifford_mul(e(&[1], 4), e(&[2], 4), 4).unwrap();
        let q = clifford_mul(e(&[2], 4), e(&[1], 4), 4).unwrap();
        assert_eq!(p, q.neg());
    }

    #[test]
    fn matches_token_oracle_exhaustively() {
        for n in 1..=5u32 {
            for xb in 0..1u32 << n {
                for yb in 0..1u32 << n {
                    for (sx, sy) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
                        let x = SignedSubset { sign: sx, bits: xb };
                        let y = SignedSubset { sign: sy, bits: yb };
                        assert_eq!(
                            clifford_mul(x, y, n).unwrap(),
                            oracle::token_mul(x, y),
                            "mismatch at n={n} x={xb:b} y={yb:b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn index_range_enforced() {
        assert!(matches!(
            SignedSubset::basis(&[5], 4),
            Err(CliffordError::IndexOutOfRange(5, 4))
        ));
        let too_big = SignedSubset { sign: 1, bits: 1 << 10 };
        assert!(clifford_mul(too_big, SignedSubset::identity(), 4).is_err());
    }

    #[test]
    fn pairing_formula() {
        assert_eq!(commutator_pairing(0b0011, 0b1100).unwrap(), 1);
        // I = {1,2}, J = {2,3}: one common index.
        assert_eq!(commutator_pairing(0b0011, 0b0110).unwrap(), -1);
        assert_eq!(commutator_pairing(0b0011, 0b0011).unwrap(), 1);
        assert!(matches!(
            commutator_pairing(0b0001, 0b0011),
            Err(CliffordError::OddSubset)
        ));
    }

    #[test]
    fn pairing_matches_four_fold_product() {
        let n = 6u32;
        let even: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() % 2 == 0).collect();
        for &i in &even {
            for &j in &even {
                let x = SignedSubset { sign: 1, bits: i };
                let y = SignedSubset { sign: 1, bits: j };
                let xy = clifford_mul(x, y, n).unwrap();
                // x⁻¹ = ±x with the sign fixed by x·x = ±1.
                let xx = clifford_mul(x, x, n).unwrap();
                let x_inv = if xx.sign == 1 { x } else { x.neg() };
                let yy = clifford_mul(y, y, n).unwrap();
                let y_inv = if yy.sign == 1 { y } else { y.neg() };
                let comm =
                    clifford_mul(clifford_mul(xy, x_inv, n).unwrap(), y_inv, n).unwrap();
                assert_eq!(comm.bits, 0);
                assert_eq!(comm.sign, commutator_pairing(i, j).unwrap());
            }
        }
    }

    #[test]
    fn gamma_small_orders() {
        let g2 = gamma_group(2, true).unwrap();
        assert_eq!(g2.order(), 4);
        assert_eq!(g2.exponent(), 4); // cyclic of order 4

        let g3 = gamma_group(3, true).unwrap();
        assert_eq!(g3.order(), 8);
        // Q8: six elements of order 4.
        assert_eq!((0..8).filter(|&x| g3.order_of(x) == 4).count(), 6);

        let full3 = gamma_group(3, false).unwrap();
        assert_eq!(full3.order(), 16);
    }

    #[test]
    fn gamma_center_cases() {
        for n in 2..=9u32 {
            let g = gamma_group(n, true).unwrap();
            assert_eq!(g.order() as u64, 1 << n);
            let c = g.center();
            let inv = {
                let (cg, _) = c.as_group();
                cg.abelian_invariants().unwrap().invariant_factors
            };
            assert_eq!(
                inv,
                gamma_center_type(n).invariant_factors(),
                "center type at n = {n}"
            );
            let d = g.derived_subgroup();
            if n == 2 {
                // G_2 = {±1, ±e_{12}} is cyclic of order 4, hence abelian.
                assert!(d.is_trivial());
            } else {
                assert_eq!(d.order(), 2);
                assert_eq!(d.members(), &[0, (g.order() / 2) as u32]);
            }
        }
    }

    #[test]
    fn gamma_quotient_by_eta_is_extraspecial() {
        for n in [4u32, 8] {
            let g = gamma_group(n, true).unwrap();
            let c = g.center();
            // η: central element other than ±1 (±1 have bitmask 0).
            let minus_one = g.order() / 2; // sign bit set, empty mask
            let eta = c
                .members()
                .iter()
                .map(|&m| m as usize)
                .find(|&m| m != g.identity() && m != minus_one)
                .unwrap();
            let eta_sub = g.subgroup_from(g.generated([eta])).unwrap();
            let (q, _) = g.quotient(&eta_sub).unwrap();
            assert_eq!(q.order() as u64, 1u64 << (n - 1));
            let qc = q.center();
            assert_eq!(qc.order(), 2);
            assert_eq!(q.derived_subgroup().members(), qc.members());
            let (quot, _) = q.quotient(&qc).unwrap();
            assert_eq!(quot.exponent(), 2);
        }
    }

    #[test]
    fn ed_gamma_closed_forms() {
        assert_eq!(ed_gamma(5), 4);
        assert_eq!(ed_gamma(6), 4);
        assert_eq!(ed_gamma(8), 9);
        assert_eq!(ed_gamma(9), 16);
    }
}
