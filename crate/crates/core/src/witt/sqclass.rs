//! Square classes: rational ones as (sign, odd-exponent prime set), formal
//! ones as exponent vectors over F₂ with basis `{−1, a_1, b_1, a_2, b_2, …}`.

use std::collections::BTreeSet;
use std::fmt;

use super::WittError;

/// Square class of a nonzero rational number, in lowest form: the sign and
/// the set of primes occurring with odd exponent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SqClass {
    negative: bool,
    primes: BTreeSet<u64>,
}

impl fmt::Debug for SqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SqClass({})", self.representative())
    }
}

impl fmt::Display for SqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

const FACTOR_BOUND: i64 = 1_000_000_000_000;

fn factor_squarefree(mut n: u64) -> Result<BTreeSet<u64>, WittError> {
    let mut out = BTreeSet::new();
    let mut d = 2u64;
    while d * d <= n && d <= 1_000_000 {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e % 2 == 1 {
                out.insert(d);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if n > 1_000_000_000_000 {
            return Err(WittError::EntryTooLarge);
        }
        // Remaining cofactor is prime (no divisor below min(√n, 10^6)).
        out.insert(n);
    }
    Ok(out)
}

impl SqClass {
    pub fn one() -> SqClass {
        SqClass {
            negative: false,
            primes: BTreeSet::new(),
        }
    }

    pub fn minus_one() -> SqClass {
        SqClass {
            negative: true,
            primes: BTreeSet::new(),
        }
    }

    pub fn from_integer(n: i64) -> Result<SqClass, WittError> {
        if n == 0 {
            return Err(WittError::ZeroEntry);
        }
        if n.unsigned_abs() > FACTOR_BOUND as u64 {
            return Err(WittError::EntryTooLarge);
        }
        Ok(SqClass {
            negative: n < 0,
            primes: factor_squarefree(n.unsigned_abs())?,
        })
    }

    /// Class of `num/den`; same as the class of `num·den`.
    pub fn from_ratio(num: i64, den: i64) -> Result<SqClass, WittError> {
        if den == 0 {
            return Err(WittError::ZeroEntry);
        }
        Ok(SqClass::from_integer(num)?.mul(&SqClass::from_integer(den)?))
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn is_minus_one(&self) -> bool {
        self.negative && self.primes.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn has_odd_valuation(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn mul(&self, other: &SqClass) -> SqClass {
        SqClass {
            negative: self.negative ^ other.negative,
            primes: self
                .primes
                .symmetric_difference(&other.primes)
                .copied()
                .collect(),
        }
    }

    pub fn neg(&self) -> SqClass {
        SqClass {
            negative: !self.negative,
            primes: self.primes.clone(),
        }
    }

    /// Inverse equals the class itself (everything is 2-torsion).
    pub fn inv(&self) -> SqClass {
        self.clone()
    }

    /// Square-free integer representative.
    pub fn representative(&self) -> i128 {
        let mag: i128 = self.primes.iter().map(|&p| p as i128).product();
        if self.negative {
            -mag
        } else {
            mag
        }
    }

    /// Unit part modulo an odd prime `p` (assumes `p` removed), as a residue.
    pub fn unit_residue_mod(&self, p: u64) -> u64 {
        let mut acc = if self.negative { p - 1 } else { 1 } % p;
        for &q in &self.primes {
            if q != p {
                acc = acc * (q % p) % p;
            }
        }
        acc
    }

    /// Odd unit part modulo 8 (assumes the prime 2 removed).
    pub fn unit_mod8(&self) -> u64 {
        let mut acc: u64 = if self.negative { 7 } else { 1 };
        for &q in &self.primes {
            if q != 2 {
                acc = acc * (q % 8) % 8;
            }
        }
        acc
    }
}

/// Index of a formal variable: `a_i ↔ 2(i−1)`, `b_i ↔ 2(i−1)+1`.
pub type Var = u32;

pub fn var_a(i: u32) -> Var {
    debug_assert!(i >= 1);
    2 * (i - 1)
}

pub fn var_b(i: u32) -> Var {
    debug_assert!(i >= 1);
    2 * (i - 1) + 1
}

pub fn var_name(v: Var) -> String {
    let pair = v / 2 + 1;
    if v % 2 == 0 {
        format!("a{pair}")
    } else {
        format!("b{pair}")
    }
}

/// Formal square-class monomial over `{−1} ∪ {a_i, b_i}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalClass {
    pub negative: bool,
    pub vars: BTreeSet<Var>,
}

impl fmt::Debug for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalClass({self})")
    }
}

impl fmt::Display for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.negative {
            parts.push("-1".into());
        }
        parts.extend(self.vars.iter().map(|&v| var_name(v)));
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl FormalClass {
    pub fn one() -> FormalClass {
        FormalClass {
            negative: false,
            vars: BTreeSet::new(),
        }
    }

    pub fn var(v: Var) -> FormalClass {
        FormalClass {
            negative: false,
            vars: [v].into_iter().collect(),
        }
    }

    pub fn mul(&self, other: &FormalClass) -> FormalClass {
        FormalClass {
            negative: self.negative ^ other.negative,
            vars: self
                .vars
                .symmetric_difference(&other.vars)
                .copied()
                .collect(),
        }
    }

    pub fn neg(&self) -> FormalClass {
        FormalClass {
            negative: !self.negative,
            vars: self.vars.clone(),
        }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.vars.is_empty()
    }

    /// Substitutes rational classes for the variables.
    pub fn specialize(&self, assign: &[SqClass]) -> SqClass {
        let mut acc = if self.negative {
            SqClass::minus_one()
        } else {
            SqClass::one()
        };
        for &v in &self.vars {
            acc = acc.mul(&assign[v as usize]);
        }
        acc
    }
}
