//! Hilbert symbols over the completions of the rationals, by the classical
//! explicit formulas, with an exhaustive local solubility oracle for
//! cross-checking.

use std::collections::BTreeSet;
use std::fmt;

use super::sqclass::SqClass;
use crate::util::pow_mod;

/// A place of the rationals: a prime (2 included) or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Places where any of the given classes can ramify: 2, ∞ and every prime
/// appearing in a class.
pub fn relevant_places(classes: &[&SqClass]) -> BTreeSet<Place> {
    let mut out: BTreeSet<Place> = [Place::Prime(2), Place::Infinity].into_iter().collect();
    for c in classes {
        for &p in c.primes() {
            out.insert(Place::Prime(p));
        }
    }
    out
}

fn legendre(unit: u64, p: u64) -> i8 {
    debug_assert!(p % 2 == 1 && unit % p != 0);
    if pow_mod(unit, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `ε(u) = (u−1)/2 mod 2` for odd `u` given mod 8.
fn eps(u_mod8: u64) -> u32 {
    ((u_mod8 % 4) / 2) as u32
}

/// `ω(u) = (u²−1)/8 mod 2` for odd `u` given mod 8.
fn omega(u_mod8: u64) -> u32 {
    u32::from(u_mod8 == 3 || u_mod8 == 5)
}

/// Hilbert symbol `(a, b)` at a place: `+1` iff `z² = ax² + by²` has a
/// nontrivial solution over the completion.
pub fn hilbert_symbol(a: &SqClass, b: &SqClass, place: Place) -> i8 {
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let alpha = u32::from(a.has_odd_valuation(2));
            let beta = u32::from(b.has_odd_valuation(2));
            let u = a.unit_mod8();
            let v = b.unit_mod8();
            let exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if exponent % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let alpha = u32::from(a.has_odd_valuation(p));
            let beta = u32::from(b.has_odd_valuation(p));
            let u = a.unit_residue_mod(p);
            let v = b.unit_residue_mod(p);
            let mut sym = 1i8;
            if beta == 1 {
                sym *= legendre(u, p);
            }
            if alpha == 1 {
                sym *= legendre(v, p);
            }
            if alpha == 1 && beta == 1 && (p - 1) / 2 % 2 == 1 {
                sym = -sym;
            }
            sym
        }
    }
}

/// Independent local-solubility oracles, used only to cross-check
/// [`hilbert_symbol`].
pub mod oracle {
    /// Exhaustive search for a primitive solution of `z² = ax² + by²`
    /// modulo `p³` for an odd prime `p`. A primitive solution mod `p³`
    /// lifts to the p-adics for square-free `a`, `b`, so this decides the
    /// symbol. Any primitive solution can be scaled so that one coordinate
    /// equals 1, which keeps the search quadratic in `p³` per pivot.
    pub fn solvable_mod_p3(a: i64, b: i64, p: u64) -> bool {
        assert!(p % 2 == 1, "oracle covers odd primes");
        let m = (p * p * p) as i64;
        let am = a.rem_euclid(m);
        let bm = b.rem_euclid(m);
        let mut is_square = vec![false; m as usize];
        for z in 0..m {
            is_square[(z * z % m) as usize] = true;
        }
        // Pivot x = 1: a + b·y² must be a square mod p³.
        for y in 0..m {
            if is_square[((am + bm * y % m * y) % m) as usize] {
                return true;
            }
        }
        // Pivot y = 1: a·x² + b must be a square mod p³.
        for x in 0..m {
            if is_square[((bm + am * x % m * x) % m) as usize] {
                return true;
            }
        }
        // Pivot z = 1: 1 − a·x² must be of the form b·y².
        let mut b_square = vec![false; m as usize];
        for y in 0..m {
            b_square[(bm * y % m * y % m) as usize] = true;
        }
        for x in 0..m {
            let need = (1 - am * x % m * x % m).rem_euclid(m);
            if b_square[need as usize] {
                return true;
            }
        }
        false
    }

    /// Real-place solubility: fails only for two negative coefficients.
    pub fn solvable_at_infinity(a: i64, b: i64) -> bool {
        a > 0 || b > 0
    }

    /// Small integer isotropy search for a diagonal form; a found vector
    /// certifies isotropy (the converse is not decided by the search).
    pub fn search_isotropic(entries: &[i64], height: i64) -> Option<Vec<i64>> {
        let dim = entries.len();
        let mut x = vec![-height; dim];
        loop {
            if x.iter().any(|&c| c != 0) {
                let val: i128 = entries
                    .iter()
                    .zip(&x)
                    .map(|(&a, &c)| a as i128 * (c as i128) * (c as i128))
                    .sum();
                if val == 0 {
                    return Some(x);
                }
            }
            let mut pos = 0;
            loop {
                if pos == dim {
                    return None;
                }
                x[pos] += 1;
                if x[pos] <= height {
                    break;
                }
                x[pos] = -height;
                pos += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(n: i64) -> SqClass {
        SqClass::from_integer(n).unwrap()
    }

    #[test]
    fn frozen_values() {
        // (1, b) is always split.
        for b in [2i64, -3, 7, 30] {
            for place in [Place::Infinity, Place::Prime(2), Place::Prime(5)] {
                assert_eq!(hilbert_symbol(&cls(1), &cls(b), place), 1);
            }
        }
        // (−1, −1) fails exactly at 2 and ∞.
        assert_eq!(hilbert_symbol(&cls(-1), &cls(-1), Place::Infinity), -1);
        assert_eq!(hilbert_symbol(&cls(-1), &cls(-1), Place::Prime(2)), -1);
        assert_eq!(hilbert_symbol(&cls(-1), &cls(-1), Place::Prime(3)), 1);
        // (2, 5) at 5: 2 is a non-residue mod 5.
        assert_eq!(hilbert_symbol(&cls(2), &cls(5), Place::Prime(5)), -1);
    }

    #[test]
    fn matches_oracle_small_range() {
        // Narrow sweep here; the full |a|,|b| ≤ 50, p ≤ 13 sweep runs in the
        // verification suite.
        for p in [3u64, 5] {
            for a in -6i64..=6 {
                for b in -6i64..=6 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let sym = hilbert_symbol(&cls(a), &cls(b), Place::Prime(p));
                    let oracle = oracle::solvable_mod_p3(a, b, p);
                    assert_eq!(sym == 1, oracle, "(a,b,p) = ({a},{b},{p})");
                }
            }
        }
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                if a == 0 || b == 0 {
                    continue;
                }
                assert_eq!(
                    hilbert_symbol(&cls(a), &cls(b), Place::Infinity) == 1,
                    oracle::solvable_at_infinity(a, b)
                );
            }
        }
    }

    #[test]
    fn product_formula_sample() {
        for (a, b) in [(3i64, 5i64), (-7, 15), (30, -42), (2, 2), (-1, 6)] {
            let (ca, cb) = (cls(a), cls(b));
            let prod: i32 = relevant_places(&[&ca, &cb])
                .into_iter()
                .map(|pl| hilbert_symbol(&ca, &cb, pl) as i32)
                .product();
            assert_eq!(prod, 1, "product formula at ({a},{b})");
        }
    }

    #[test]
    fn hilbert_a_minus_a() {
        for a in [2i64, -3, 5, -30, 7] {
            let ca = cls(a);
            let na = ca.neg();
            for pl in relevant_places(&[&ca]) {
                assert_eq!(hilbert_symbol(&ca, &na, pl), 1);
            }
        }
    }

    #[test]
    fn isotropy_search_finds_hyperbolic() {
        assert!(oracle::search_isotropic(&[1, -1], 3).is_some());
        assert!(oracle::search_isotropic(&[2, 3, -5], 5).is_some());
        assert_eq!(oracle::search_isotropic(&[1, 1, 1], 6), None);
    }
}
