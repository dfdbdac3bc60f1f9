//! Finite groups as dense Cayley tables, with the constructors and
//! structural queries the rest of the crate builds on.
//!
//! Every group is immutable after construction and validated on the way in:
//! Latin-square, identity and inverse checks always run, and associativity is
//! checked exhaustively up to order 512 (sampled deterministically above
//! that, where the constructors are correct by construction).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exec;
use crate::util::{self, is_prime, SplitMix64};

/// Hard cap on group order; dense tables above this are rejected rather than
/// silently degraded.
pub const MAX_ORDER: u64 = 1 << 16;

const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("requested order {0} exceeds the cap 2^16")]
    OrderCapExceeded(u64),
    #[error("subgroup is not normal in the parent group")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("invalid Cayley data: {0}")]
    InvalidTable(String),
    #[error("parameter `{0}` = {1} must be prime")]
    NotPrime(&'static str, u64),
    #[error("bad constructor parameter: {0}")]
    BadParameter(String),
}

struct GroupInner {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    labels: Vec<String>,
    inverses: Vec<u32>,
    elem_orders: Vec<u32>,
}

/// A finite group given by its full multiplication table.
///
/// Cheap to clone (the table is shared behind an `Arc`).
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupInner>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order())
    }
}

impl FiniteGroup {
    /// Builds a group from raw data, running the full validity checks.
    pub fn from_table(
        table: Vec<u32>,
        labels: Vec<String>,
    ) -> Result<FiniteGroup, GroupError> {
        let order = labels.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty element set".into()));
        }
        if order as u64 > MAX_ORDER {
            return Err(GroupError::OrderCapExceeded(order as u64));
        }
        if table.len() != order * order {
            return Err(GroupError::InvalidTable(format!(
                "table has {} cells, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(GroupError::InvalidTable(format!(
                "cell value {bad} out of range"
            )));
        }

        // Latin-square property, both directions.
        let latin = exec::all_range(order, |i| {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for j in 0..order {
                row[table[i * order + j] as usize] = true;
                col[table[j * order + i] as usize] = true;
            }
            row.iter().all(|&b| b) && col.iter().all(|&b| b)
        });
        if !latin {
            return Err(GroupError::InvalidTable("not a Latin square".into()));
        }

        // Two-sided identity.
        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|j| {
                    table[e * order + j] as usize == j && table[j * order + e] as usize == j
                })
            })
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;

        // Two-sided inverses.
        let mut inverses = vec![u32::MAX; order];
        for i in 0..order {
            match (0..order)
                .find(|&j| table[i * order + j] as usize == identity
                    && table[j * order + i] as usize == identity)
            {
                Some(j) => inverses[i] = j as u32,
                None => {
                    return Err(GroupError::InvalidTable(format!(
                        "element {i} has no two-sided inverse"
                    )))
                }
            }
        }

        // Associativity: exhaustive at small orders, deterministic sample above.
        let assoc_ok = if order <= EXHAUSTIVE_ASSOC_LIMIT {
            exec::all_range(order, |i| {
                (0..order).all(|j| {
                    let ij = table[i * order + j] as usize;
                    (0..order).all(|k| {
                        let jk = table[j * order + k] as usize;
                        table[ij * order + k] == table[i * order + jk]
                    })
                })
            })
        } else {
            let mut rng = SplitMix64(0xa55_0c1a7ed);
            (0..200_000).all(|_| {
                let i = rng.below(order as u64) as usize;
                let j = rng.below(order as u64) as usize;
                let k = rng.below(order as u64) as usize;
                let ij = table[i * order + j] as usize;
                let jk = table[j * order + k] as usize;
                table[ij * order + k] == table[i * order + jk]
            })
        };
        if !assoc_ok {
            return Err(GroupError::InvalidTable("multiplication not associative".into()));
        }

        let mut elem_orders = vec![0u32; order];
        for i in 0..order {
            let mut x = i;
            let mut k = 1u32;
            while x != identity {
                x = table[x * order + i] as usize;
                k += 1;
            }
            elem_orders[i] = k;
        }

        Ok(FiniteGroup(Arc::new(GroupInner {
            order,
            table,
            identity,
            labels,
            inverses,
            elem_orders,
        })))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.0.table[i * self.0.order + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.0.inverses[i] as usize
    }

    pub fn pow(&self, g: usize, e: i64) -> usize {
        let n = self.order_of(g) as i64;
        let mut e = e.rem_euclid(n) as u64;
        let mut base = g;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn order_of(&self, g: usize) -> u32 {
        self.0.elem_orders[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.0.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Raw row-major table; the independent verification oracles work on
    /// this directly instead of going through the accessors.
    pub fn raw_table(&self) -> &[u32] {
        &self.0.table
    }

    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gh = self.mul(g, h);
        let inv = self.mul(self.inv(g), self.inv(h));
        self.mul(gh, inv)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        exec::all_range(n, |i| (i..n).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1u64, |acc, g| util::lcm(acc, self.order_of(g) as u64))
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        util::is_power_of(self.order() as u64, p)
    }

    /// The unique prime dividing the order, when the group is a nontrivial
    /// p-group.
    pub fn p_group_prime(&self) -> Option<u64> {
        let f = util::factor(self.order() as u64);
        match f.as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    pub fn center(&self) -> Subgroup {
        let n = self.order();
        let members: Vec<u32> = (0..n)
            .filter(|&g| (0..n).all(|h| self.mul(g, h) == self.mul(h, g)))
            .map(|g| g as u32)
            .collect();
        Subgroup {
            parent: self.clone(),
            members,
        }
    }

    /// Subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut gens = BTreeSet::new();
        for g in 0..n {
            for h in 0..n {
                gens.insert(self.commutator(g, h) as u32);
            }
        }
        let members = self.generated(gens.iter().map(|&g| g as usize));
        Subgroup {
            parent: self.clone(),
            members,
        }
    }

    /// Closure of a generating set, sorted by element index.
    pub fn generated<I: IntoIterator<Item = usize>>(&self, gens: I) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        seen[self.identity()] = true;
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(self.identity());
        let gens: Vec<usize> = gens.into_iter().collect();
        for &g in &gens {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order())
            .filter(|&i| seen[i])
            .map(|i| i as u32)
            .collect()
    }

    pub fn subgroup_from(&self, members: Vec<u32>) -> Result<Subgroup, GroupError> {
        let sg = Subgroup {
            parent: self.clone(),
            members,
        };
        if !sg.is_valid() {
            return Err(GroupError::InvalidTable(
                "member list is not a subgroup".into(),
            ));
        }
        Ok(sg)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            parent: self.clone(),
            members: vec![self.identity() as u32],
        }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            parent: self.clone(),
            members: (0..self.order() as u32).collect(),
        }
    }

    /// Quotient by a normal subgroup, plus the projection map
    /// (element index → coset index).
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>), GroupError> {
        assert!(Arc::ptr_eq(&self.0, &n.parent.0), "subgroup of a different group");
        if !n.is_normal() {
            return Err(GroupError::NotNormal);
        }
        let ord = self.order();
        // Canonical coset representative: smallest member of gN.
        let mut rep = vec![u32::MAX; ord];
        for g in 0..ord {
            let mut best = u32::MAX;
            for &m in &n.members {
                best = best.min(self.mul(g, m as usize) as u32);
            }
            rep[g] = best;
        }
        let mut reps: Vec<u32> = rep.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        reps.sort_unstable();
        let coset_of_rep: HashMap<u32, u32> = reps
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i as u32))
            .collect();
        let projection: Vec<u32> = (0..ord).map(|g| coset_of_rep[&rep[g]]).collect();
        let q = reps.len();
        let table: Vec<u32> = exec::map_range(q * q, |cell| {
            let (i, j) = (cell / q, cell % q);
            projection[self.mul(reps[i] as usize, reps[j] as usize)]
        });
        let labels: Vec<String> = reps
            .iter()
            .map(|&r| format!("[{}]", self.label(r as usize)))
            .collect();
        let quotient = FiniteGroup::from_table(table, labels)?;
        Ok((quotient, projection))
    }

    /// Abelian basis with invariant-factor orders `d_1, d_2, …` (`d_{i+1}`
    /// divides `d_i`), such that the group is the internal direct sum of the
    /// cyclic subgroups generated by the returned elements. The direct-sum
    /// property is verified by enumeration before returning.
    pub fn abelian_basis(&self) -> Result<Vec<(usize, u64)>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        if self.order() == 1 {
            return Ok(Vec::new());
        }
        // Primary decomposition, greedy basis per prime, then CRT merge.
        let mut per_prime: Vec<Vec<(usize, u64)>> = Vec::new();
        for (p, _) in util::factor(self.order() as u64) {
            let members: Vec<u32> = (0..self.order())
                .filter(|&g| util::is_power_of(self.order_of(g) as u64, p))
                .map(|g| g as u32)
                .collect();
            let part = self.subgroup_from(members)?;
            per_prime.push(self.p_primary_basis(&part));
        }
        let rank = per_prime.iter().map(|b| b.len()).max().unwrap_or(0);
        let mut basis = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut elem = self.identity();
            let mut ord = 1u64;
            for part in &per_prime {
                if let Some(&(g, m)) = part.get(i) {
                    elem = self.mul(elem, g);
                    ord *= m;
                }
            }
            basis.push((elem, ord));
        }
        // Direct-sum check: the mixed-radix products must enumerate the
        // whole group without repetition.
        let mut seen = vec![false; self.order()];
        let total: u64 = basis.iter().map(|&(_, m)| m).product();
        assert_eq!(
            total,
            self.order() as u64,
            "abelian basis orders do not multiply to the group order"
        );
        let mut stack = vec![(self.identity(), 0usize)];
        let mut count = 0usize;
        while let Some((acc, depth)) = stack.pop() {
            if depth == basis.len() {
                assert!(!seen[acc], "abelian basis is not a direct sum");
                seen[acc] = true;
                count += 1;
                continue;
            }
            let (g, m) = basis[depth];
            let mut cur = acc;
            for _ in 0..m {
                stack.push((cur, depth + 1));
                cur = self.mul(cur, g);
            }
        }
        assert_eq!(count, self.order());
        Ok(basis)
    }

    /// Greedy basis of an abelian p-subgroup: repeatedly split off a cyclic
    /// factor of maximal order in the current quotient.
    fn p_primary_basis(&self, part: &Subgroup) -> Vec<(usize, u64)> {
        let mut basis: Vec<(usize, u64)> = Vec::new();
        let mut span: HashSet<u32> = HashSet::new();
        span.insert(self.identity() as u32);
        let members = &part.members;
        while span.len() < members.len() {
            // Order of each coset g·S: least k > 0 with g^k in the span.
            let mut best: Option<(u64, usize)> = None;
            for &gm in members {
                let g = gm as usize;
                if span.contains(&(g as u32)) {
                    continue;
                }
                // Smallest k > 0 with g^k in the span.
                let mut x = g;
                let mut k = 1u64;
                while !span.contains(&(x as u32)) {
                    x = self.mul(x, g);
                    k += 1;
                }
                let coset_order = k;
                match best {
                    None => best = Some((coset_order, g)),
                    Some((bo, bg)) => {
                        if coset_order > bo || (coset_order == bo && g < bg) {
                            best = Some((coset_order, g));
                        }
                    }
                }
            }
            let (m, g) = best.expect("non-exhausted span must leave cosets");
            // Lift: an element of the coset g·span whose order in the group
            // equals the coset order m. Existence is the classical purity
            // argument; a failure here means the greedy choice was wrong.
            let lift = span
                .iter()
                .map(|&s| self.mul(g, s as usize))
                .find(|&x| self.order_of(x) as u64 == m)
                .expect("maximal coset must contain an order-matching lift");
            basis.push((lift, m));
            let gens: Vec<usize> = basis.iter().map(|&(e, _)| e).collect();
            span = self.generated(gens).into_iter().collect();
        }
        basis.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        basis
    }

    /// Invariant-factor decomposition `d_1 | …`-style (each `d_{i+1}`
    /// divides `d_i`) of an abelian group.
    pub fn abelian_invariants(&self) -> Result<AbelianInvariants, GroupError> {
        let basis = self.abelian_basis()?;
        let factors: Vec<u64> = basis.iter().map(|&(_, m)| m).collect();
        Ok(AbelianInvariants {
            invariant_factors: factors.clone(),
            rank: factors.len(),
        })
    }

    /// Hypothesis of the central-cyclic-commutator theorem: `G` is a
    /// p-group, `[G,G]` is contained in the center and is cyclic.
    pub fn is_theorem_hypothesis(&self, p: u64) -> bool {
        if !is_prime(p) || !self.is_p_group(p) {
            return false;
        }
        let derived = self.derived_subgroup();
        let center = self.center();
        derived.is_contained_in(&center) && derived.is_cyclic()
    }
}

/// A subgroup, held as a sorted member list of the parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<u32>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order={})", self.members.len())
    }
}

impl Subgroup {
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&(g as u32)).is_ok()
    }

    pub fn is_valid(&self) -> bool {
        let g = &self.parent;
        if self.members.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.members.iter().any(|&m| m as usize >= g.order()) {
            return false;
        }
        if !self.contains(g.identity()) {
            return false;
        }
        self.members.iter().all(|&a| {
            self.contains(g.inv(a as usize))
                && self
                    .members
                    .iter()
                    .all(|&b| self.contains(g.mul(a as usize, b as usize)))
        })
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|x| {
            self.members.iter().all(|&m| {
                let conj = g.mul(g.mul(x, m as usize), g.inv(x));
                self.contains(conj)
            })
        })
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.members.len() as u32;
        self.members
            .iter()
            .any(|&m| self.parent.order_of(m as usize) == n)
    }

    /// Smallest-index member of maximal order; `None` only for a corrupt
    /// empty subgroup.
    pub fn max_order_generator(&self) -> Option<usize> {
        self.members
            .iter()
            .map(|&m| m as usize)
            .max_by(|&a, &b| {
                self.parent
                    .order_of(a)
                    .cmp(&self.parent.order_of(b))
                    .then(b.cmp(&a))
            })
    }

    pub fn is_contained_in(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m as usize))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Re-index the subgroup as a standalone group; returns the group and
    /// the map from new indices back to parent indices.
    pub fn as_group(&self) -> (FiniteGroup, Vec<u32>) {
        let g = &self.parent;
        let n = self.members.len();
        let back: HashMap<u32, u32> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = g.mul(self.members[i] as usize, self.members[j] as usize) as u32;
                table[i * n + j] = back[&prod];
            }
        }
        let labels = self
            .members
            .iter()
            .map(|&m| g.label(m as usize).to_string())
            .collect();
        let grp = FiniteGroup::from_table(table, labels)
            .expect("subgroup table must be a valid group");
        (grp, self.members.clone())
    }
}

/// Invariant factors of a finite abelian group, largest first, each factor
/// divisible by the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub invariant_factors: Vec<u64>,
    pub rank: usize,
}

impl AbelianInvariants {
    pub fn group_order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Which extraspecial flavour to build: for odd `p` the exponent-`p` and
/// exponent-`p²` types, for `p = 2` the dihedral ("+") and quaternion ("−")
/// central-product types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraspecialKind {
    ExpP,
    ExpP2,
    TwoD,
    TwoQ,
}

fn check_order(order: u64) -> Result<(), GroupError> {
    if order == 0 || order > MAX_ORDER {
        Err(GroupError::OrderCapExceeded(order))
    } else {
        Ok(())
    }
}

/// Trivial group.
pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_table(vec![0], vec!["1".into()]).unwrap()
}

/// Cyclic group of order `n`, elements labelled `g^i`.
pub fn cyclic(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter("cyclic order must be positive".into()));
    }
    check_order(n)?;
    let n = n as usize;
    let table = exec::map_range(n * n, |cell| ((cell / n + cell % n) % n) as u32);
    let labels = (0..n).map(|i| format!("g^{i}")).collect();
    FiniteGroup::from_table(table, labels)
}

/// Direct product; element `(x, y)` has index `x·|H| + y`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let order = g.order() as u64 * h.order() as u64;
    check_order(order)?;
    let (n, m) = (g.order(), h.order());
    let total = n * m;
    let table = exec::map_range(total * total, |cell| {
        let (i, j) = (cell / total, cell % total);
        let (x1, y1) = (i / m, i % m);
        let (x2, y2) = (j / m, j % m);
        (g.mul(x1, x2) * m + h.mul(y1, y2)) as u32
    });
    let mut labels = Vec::with_capacity(total);
    for x in 0..n {
        for y in 0..m {
            labels.push(format!("({},{})", g.label(x), h.label(y)));
        }
    }
    FiniteGroup::from_table(table, labels)
}

/// Dihedral group of order `2n`: rotations `r^i`, reflections `s·r^i`.
pub fn dihedral(n: u64) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter("dihedral parameter must be positive".into()));
    }
    check_order(2 * n)?;
    let n = n as usize;
    let total = 2 * n;
    let idx = |refl: usize, i: usize| (refl * n + i) as u32;
    let mut table = vec![0u32; total * total];
    for a in 0..total {
        for b in 0..total {
            let (ra, ia) = (a / n, a % n);
            let (rb, ib) = (b / n, b % n);
            // s·r^i · s·r^j = r^{j-i}; r^i · s·r^j = s·r^{j-i}; etc.
            let cell = match (ra, rb) {
                (0, 0) => idx(0, (ia + ib) % n),
                (0, 1) => idx(1, (ib + n - ia) % n),
                (1, 0) => idx(1, (ia + ib) % n),
                (1, 1) => idx(0, (ib + n - ia) % n),
                _ => unreachable!(),
            };
            table[a * total + b] = cell;
        }
    }
    let mut labels = Vec::with_capacity(total);
    for i in 0..n {
        labels.push(format!("r^{i}"));
    }
    for i in 0..n {
        labels.push(format!("s*r^{i}"));
    }
    FiniteGroup::from_table(table, labels)
}

/// The quaternion group of order 8.
pub fn q8() -> FiniteGroup {
    // Elements 1, -1, i, -i, j, -j, k, -k.
    let labels: Vec<String> = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // Represent x as (sign, axis) with axis in {1, i, j, k}.
    let to = |sign: usize, axis: usize| (axis * 2 + sign) as u32;
    let from = |e: usize| (e % 2, e / 2);
    let mut table = vec![0u32; 64];
    // Multiplication of units: axis table with sign corrections.
    // axis codes: 0 = 1, 1 = i, 2 = j, 3 = k.
    let axis_mul = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) => (0, x),
            (x, 0) => (0, x),
            (1, 1) | (2, 2) | (3, 3) => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    for a in 0..8 {
        for b in 0..8 {
            let (s1, x1) = from(a);
            let (s2, x2) = from(b);
            let (s3, x3) = axis_mul(x1, x2);
            table[a * 8 + b] = to((s1 + s2 + s3) % 2, x3);
        }
    }
    FiniteGroup::from_table(table, labels).expect("hand-built Q8 table is valid")
}

/// Heisenberg group over Z/p: unitriangular 3×3 matrices, order p³.
/// For odd `p` this is the exponent-p extraspecial group of order p³;
/// `heisenberg(2)` is the dihedral group of order 8.
pub fn heisenberg(p: u64) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime("p", p));
    }
    check_order(p * p * p)?;
    let p = p as usize;
    let total = p * p * p;
    let enc = |a: usize, b: usize, c: usize| ((a * p + b) * p + c) as u32;
    let table = exec::map_range(total * total, |cell| {
        let (x, y) = (cell / total, cell % total);
        let (a1, b1, c1) = (x / (p * p), (x / p) % p, x % p);
        let (a2, b2, c2) = (y / (p * p), (y / p) % p, y % p);
        enc(
            (a1 + a2) % p,
            (b1 + b2) % p,
            (c1 + c2 + a1 * b2) % p,
        )
    });
    let mut labels = Vec::with_capacity(total);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                labels.push(format!("({a},{b},{c})"));
            }
        }
    }
    FiniteGroup::from_table(table, labels)
}

/// Natural semidirect product `C_{p^r} ⋊ C_{p^s}` for odd `p`, where the
/// acting factor is the unique order-`p^s` subgroup of `Aut(C_{p^r})`.
/// Elements are pairs `x^i·y^j` with `y x y⁻¹ = x^u`, `u = (1+p)^{p^{r-1-s}}`.
pub fn semidirect_cyclic(p: u64, r: u32, s: u32) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime("p", p));
    }
    if p == 2 {
        return Err(GroupError::BadParameter(
            "semidirect_cyclic requires an odd prime (Aut(C_{2^r}) has no unique order-2^s subgroup)"
                .into(),
        ));
    }
    if r == 0 || s == 0 || s > r - 1 {
        return Err(GroupError::BadParameter(format!(
            "need 1 <= s <= r-1, got r={r}, s={s}"
        )));
    }
    let pr = p.checked_pow(r).ok_or(GroupError::OrderCapExceeded(u64::MAX))?;
    let ps = p.checked_pow(s).ok_or(GroupError::OrderCapExceeded(u64::MAX))?;
    let order = pr
        .checked_mul(ps)
        .ok_or(GroupError::OrderCapExceeded(u64::MAX))?;
    check_order(order)?;
    // Generator of the unique subgroup of order p^s in (Z/p^r)*.
    let u = util::pow_mod(1 + p, p.pow(r - 1 - s), pr);
    let pr_us = pr as usize;
    let ps_us = ps as usize;
    let total = pr_us * ps_us;
    // Precompute u^j mod p^r.
    let mut upow = vec![1u64; ps_us];
    for j in 1..ps_us {
        upow[j] = upow[j - 1] * u % pr;
    }
    let table = exec::map_range(total * total, |cell| {
        let (x, y) = (cell / total, cell % total);
        let (i1, j1) = (x / ps_us, x % ps_us);
        let (i2, j2) = (y / ps_us, y % ps_us);
        let i = (i1 as u64 + upow[j1] * i2 as u64) % pr;
        let j = (j1 + j2) % ps_us;
        (i as usize * ps_us + j) as u32
    });
    let mut labels = Vec::with_capacity(total);
    for i in 0..pr_us {
        for j in 0..ps_us {
            labels.push(format!("x^{i}*y^{j}"));
        }
    }
    FiniteGroup::from_table(table, labels)
}

/// Central product `G ∘ H`: quotient of `G × H` by the anti-diagonal of the
/// given central order-p elements.
fn central_product(
    g: &FiniteGroup,
    h: &FiniteGroup,
    zg: usize,
    zh: usize,
) -> Result<FiniteGroup, GroupError> {
    let prod = direct_product(g, h)?;
    let m = h.order();
    let gen = zg * m + h.inv(zh);
    let members = prod.generated([gen]);
    let n = prod.subgroup_from(members)?;
    let (q, _) = prod.quotient(&n)?;
    Ok(q)
}

/// Picks a non-identity element of the (order-p cyclic) center.
fn central_generator(g: &FiniteGroup) -> usize {
    let c = g.center();
    *c.members()
        .iter()
        .find(|&&m| m as usize != g.identity())
        .expect("extraspecial factor must have nontrivial center") as usize
}

/// Extraspecial group of order `p^{2m+1}`, built as an iterated central
/// product of the two order-p³ groups.
pub fn extraspecial(p: u64, m: u32, kind: ExtraspecialKind) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime("p", p));
    }
    if m == 0 {
        return Err(GroupError::BadParameter("extraspecial needs m >= 1".into()));
    }
    let order = (p as u128).pow(2 * m + 1);
    if order > MAX_ORDER as u128 {
        return Err(GroupError::OrderCapExceeded(u64::MAX));
    }
    let base = match kind {
        ExtraspecialKind::ExpP | ExtraspecialKind::ExpP2 => {
            if p == 2 {
                return Err(GroupError::BadParameter(
                    "exponent-p/p² kinds require odd p; use the D/Q kinds for p = 2".into(),
                ));
            }
            match kind {
                ExtraspecialKind::ExpP => heisenberg(p)?,
                _ => semidirect_cyclic(p, 2, 1)?,
            }
        }
        ExtraspecialKind::TwoD | ExtraspecialKind::TwoQ => {
            if p != 2 {
                return Err(GroupError::BadParameter(
                    "D/Q kinds are the p = 2 extraspecial types".into(),
                ));
            }
            match kind {
                ExtraspecialKind::TwoQ => q8(),
                _ => dihedral(4)?,
            }
        }
    };
    // Remaining factors are the "default" type so the kind determines the
    // isomorphism class: exponent-p (odd) resp. dihedral (p = 2).
    let filler = if p == 2 { dihedral(4)? } else { heisenberg(p)? };
    let mut acc = base;
    for _ in 1..m {
        let zg = central_generator(&acc);
        let zh = central_generator(&filler);
        acc = central_product(&acc, &filler, zg, zh)?;
    }
    Ok(acc)
}

/// The base non-abelian group of order p³ used in the quotient-gap family:
/// quaternion for p = 2, Heisenberg for odd p.
pub fn jly_base(p: u64) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime("p", p));
    }
    if p == 2 {
        Ok(q8())
    } else {
        heisenberg(p)
    }
}

/// Direct power `Γ^n` of the order-p³ base group.
pub fn jly_group(p: u64, n: u32) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter("jly needs n >= 1".into()));
    }
    let order = (p as u128).pow(3 * n);
    if order > MAX_ORDER as u128 {
        return Err(GroupError::OrderCapExceeded(u64::MAX));
    }
    let base = jly_base(p)?;
    let mut acc = base.clone();
    for _ in 1..n {
        acc = direct_product(&acc, &base)?;
    }
    Ok(acc)
}

/// `Γ^n / H_n`, where `H_n` is the subgroup of the center `C^n` of tuples
/// with product 1. Built directly on normal forms so the intermediate
/// `Γ^n` table is never materialised; the result has order `p^{2n+1}`.
pub fn jly_quotient(p: u64, n: u32) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadParameter("jly needs n >= 1".into()));
    }
    let order = (p as u128).pow(2 * n + 1);
    if order > MAX_ORDER as u128 {
        return Err(GroupError::OrderCapExceeded(u64::MAX));
    }
    let gamma = jly_base(p)?;
    let g3 = gamma.order();
    let center = gamma.center();
    assert_eq!(center.order() as u64, p, "order-p³ base must have center of order p");

    // Coset representatives of Γ/C: smallest member of each coset.
    let mut rep_of = vec![0u32; g3];
    for g in 0..g3 {
        let mut best = u32::MAX;
        for &c in center.members() {
            best = best.min(gamma.mul(g, c as usize) as u32);
        }
        rep_of[g] = best;
    }
    let mut reps: Vec<u32> = rep_of.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    reps.sort_unstable();
    let rep_index: HashMap<u32, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let t = reps.len(); // p²

    let n = n as usize;
    let total = t.pow((n - 1) as u32) * g3;
    let decode = |mut e: usize| -> (Vec<usize>, usize) {
        let last = e % g3;
        e /= g3;
        let mut firsts = vec![0usize; n - 1];
        for slot in (0..n - 1).rev() {
            firsts[slot] = e % t;
            e /= t;
        }
        (firsts, last)
    };
    let encode = |firsts: &[usize], last: usize| -> usize {
        let mut e = 0usize;
        for &f in firsts {
            e = e * t + f;
        }
        e * g3 + last
    };

    let table = exec::map_range(total * total, |cell| {
        let (x, y) = (cell / total, cell % total);
        let (fx, lx) = decode(x);
        let (fy, ly) = decode(y);
        let mut out = vec![0usize; n - 1];
        let mut spill = gamma.identity();
        for i in 0..n - 1 {
            let prod = gamma.mul(reps[fx[i]] as usize, reps[fy[i]] as usize);
            let rep = rep_of[prod] as usize;
            let c = gamma.mul(gamma.inv(rep), prod);
            out[i] = rep_index[&(rep as u32)];
            spill = gamma.mul(spill, c);
        }
        let last = gamma.mul(gamma.mul(lx, ly), spill);
        encode(&out, last) as u32
    });
    let labels: Vec<String> = (0..total)
        .map(|e| {
            let (firsts, last) = decode(e);
            let mut parts: Vec<String> = firsts
                .iter()
                .map(|&f| gamma.label(reps[f] as usize).to_string())
                .collect();
            parts.push(gamma.label(last).to_string());
            format!("({})", parts.join("|"))
        })
        .collect();
    FiniteGroup::from_table(table, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute-force center: works on the raw table only.
    fn brute_center(g: &FiniteGroup) -> Vec<u32> {
        let n = g.order();
        let t = g.raw_table();
        let mut out = Vec::new();
        for a in 0..n {
            let mut central = true;
            for b in 0..n {
                if t[a * n + b] != t[b * n + a] {
                    central = false;
                    break;
                }
            }
            if central {
                out.push(a as u32);
            }
        }
        out
    }

    /// Independent brute-force derived subgroup: repeated full product
    /// passes over the raw table until the commutator set closes.
    fn brute_derived(g: &FiniteGroup) -> Vec<u32> {
        let n = g.order();
        let t = g.raw_table();
        // Inverses by row scan.
        let mut id = usize::MAX;
        for e in 0..n {
            if (0..n).all(|j| t[e * n + j] as usize == j) {
                id = e;
                break;
            }
        }
        let mut inv = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                if t[a * n + b] as usize == id {
                    inv[a] = b;
                }
            }
        }
        let mut set = vec![false; n];
        set[id] = true;
        for a in 0..n {
            for b in 0..n {
                let ab = t[a * n + b] as usize;
                let c = t[ab * n + inv[a]] as usize;
                let c = t[c * n + inv[b]] as usize;
                set[c] = true;
            }
        }
        loop {
            let mut grew = false;
            for a in 0..n {
                if !set[a] {
                    continue;
                }
                for b in 0..n {
                    if !set[b] {
                        continue;
                    }
                    let ab = t[a * n + b] as usize;
                    if !set[ab] {
                        set[ab] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        (0..n).filter(|&i| set[i]).map(|i| i as u32).collect()
    }

    #[test]
    fn cyclic_basics() {
        let g = cyclic(27).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 27);
        assert_eq!(g.center().order(), 27);
        assert!(g.derived_subgroup().is_trivial());
    }

    #[test]
    fn q8_structure() {
        let g = q8();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        let c = g.center();
        assert_eq!(c.order(), 2);
        let d = g.derived_subgroup();
        assert_eq!(d.members(), c.members());
        assert_eq!(c.members(), brute_center(&g).as_slice());
        assert_eq!(d.members(), brute_derived(&g).as_slice());
        assert!(g.is_theorem_hypothesis(2));
    }

    #[test]
    fn dihedral_structure() {
        // Order 16 dihedral: derived subgroup is <r²> of order 4.
        let g = dihedral(8).unwrap();
        assert_eq!(g.order(), 16);
        let d = g.derived_subgroup();
        assert_eq!(d.order(), 4);
        assert!(d.is_cyclic());
        assert_eq!(d.members(), brute_derived(&g).as_slice());
        // D8 (order 16) fails the central-commutator hypothesis: r² is not
        // central. D4 (order 8) satisfies it.
        assert!(!g.is_theorem_hypothesis(2));
        assert!(dihedral(4).unwrap().is_theorem_hypothesis(2));
        // dihedral(3) = S3 is not a 3-group.
        assert!(!dihedral(3).unwrap().is_theorem_hypothesis(3));
    }

    #[test]
    fn heisenberg_structure() {
        for p in [3u64, 5] {
            let g = heisenberg(p).unwrap();
            assert_eq!(g.order() as u64, p * p * p);
            assert_eq!(g.exponent(), p);
            assert_eq!(g.center().order() as u64, p);
            assert_eq!(g.center().members(), brute_center(&g).as_slice());
            assert_eq!(g.derived_subgroup().order() as u64, p);
            assert!(g.is_theorem_hypothesis(p));
        }
    }

    #[test]
    fn semidirect_structure() {
        let g = semidirect_cyclic(3, 2, 1).unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert_eq!(g.center().order(), 3);
        assert_eq!(g.exponent(), 9);
        // s <= r/2 cases satisfy the hypothesis.
        let h = semidirect_cyclic(3, 4, 2).unwrap();
        assert_eq!(h.order(), 729);
        assert!(h.is_theorem_hypothesis(3));
        assert_eq!(h.center().order(), 9);
        // s > r/2: derived subgroup is not central.
        let bad = semidirect_cyclic(3, 3, 2).unwrap();
        assert!(!bad.is_theorem_hypothesis(3));
    }

    #[test]
    fn quotient_q8_is_klein() {
        let g = q8();
        let c = g.center();
        let (q, proj) = g.quotient(&c).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        // Projection is a homomorphism with kernel C.
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(
                    proj[g.mul(a, b)],
                    q.mul(proj[a] as usize, proj[b] as usize) as u32
                );
            }
        }
        let kernel: Vec<u32> = (0..8).filter(|&x| proj[x] == 0).map(|x| x as u32).collect();
        assert_eq!(kernel, c.members());
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let g = dihedral(3).unwrap(); // S3
        // <s> has order 2 and is not normal.
        let s = g.subgroup_from(g.generated([3usize])).unwrap();
        assert_eq!(s.order(), 2);
        assert!(matches!(g.quotient(&s), Err(GroupError::NotNormal)));
    }

    #[test]
    fn abelian_invariants_examples() {
        let c12 = cyclic(12).unwrap();
        assert_eq!(c12.abelian_invariants().unwrap().invariant_factors, vec![12]);

        let c2 = cyclic(2).unwrap();
        let c4 = cyclic(4).unwrap();
        let g = direct_product(&c2, &c4).unwrap();
        let inv = g.abelian_invariants().unwrap();
        assert_eq!(inv.invariant_factors, vec![4, 2]);
        assert_eq!(inv.rank, 2);

        let klein = direct_product(&c2, &cyclic(2).unwrap()).unwrap();
        assert_eq!(klein.abelian_invariants().unwrap().invariant_factors, vec![2, 2]);

        let c6 = direct_product(&c2, &cyclic(3).unwrap()).unwrap();
        assert_eq!(c6.abelian_invariants().unwrap().invariant_factors, vec![6]);

        assert!(matches!(
            q8().abelian_invariants(),
            Err(GroupError::NotAbelian)
        ));
    }

    #[test]
    fn extraspecial_small() {
        let e = extraspecial(3, 1, ExtraspecialKind::ExpP).unwrap();
        assert_eq!(e.order(), 27);
        assert_eq!(e.exponent(), 3);
        assert_eq!(e.center().order(), 3);

        let e2 = extraspecial(3, 1, ExtraspecialKind::ExpP2).unwrap();
        assert_eq!(e2.order(), 27);
        assert_eq!(e2.exponent(), 9);

        let q = extraspecial(2, 1, ExtraspecialKind::TwoQ).unwrap();
        assert_eq!(q.order(), 8);
        assert_eq!(q.exponent(), 4);
        // Q-type of order 8 is Q8: six elements of order 4.
        let order4 = (0..8).filter(|&g| q.order_of(g) == 4).count();
        assert_eq!(order4, 6);

        let e32 = extraspecial(2, 2, ExtraspecialKind::TwoD).unwrap();
        assert_eq!(e32.order(), 32);
        assert_eq!(e32.center().order(), 2);
        assert_eq!(e32.derived_subgroup().order(), 2);
        let (quot, _) = e32.quotient(&e32.center()).unwrap();
        assert_eq!(quot.exponent(), 2);
        assert_eq!(quot.order(), 16);
    }

    #[test]
    fn extraspecial_order_grid() {
        for (p, m) in [(3u64, 2u32), (5, 1)] {
            for kind in [ExtraspecialKind::ExpP, ExtraspecialKind::ExpP2] {
                let g = extraspecial(p, m, kind).unwrap();
                assert_eq!(g.order() as u64, p.pow(2 * m + 1));
                assert_eq!(g.center().order() as u64, p);
                assert!(g.is_theorem_hypothesis(p));
            }
        }
        for kind in [ExtraspecialKind::TwoD, ExtraspecialKind::TwoQ] {
            let g = extraspecial(2, 2, kind).unwrap();
            assert_eq!(g.order(), 32);
            assert!(g.is_theorem_hypothesis(2));
        }
    }

    #[test]
    fn jly_quotient_is_extraspecial() {
        for (p, n) in [(2u64, 2u32), (3, 2)] {
            let q = jly_quotient(p, n).unwrap();
            assert_eq!(q.order() as u64, p.pow(2 * n + 1));
            let c = q.center();
            assert_eq!(c.order() as u64, p);
            assert_eq!(q.derived_subgroup().members(), c.members());
            let (quot, _) = q.quotient(&c).unwrap();
            assert_eq!(quot.exponent(), p);
        }
    }

    #[test]
    fn jly_group_order() {
        let g = jly_group(2, 2).unwrap();
        assert_eq!(g.order(), 64);
        assert_eq!(g.center().order(), 4);
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            cyclic(MAX_ORDER + 1),
            Err(GroupError::OrderCapExceeded(_))
        ));
        assert!(matches!(
            jly_group(3, 5),
            Err(GroupError::OrderCapExceeded(_))
        ));
    }

    #[test]
    fn generated_subgroup_closure() {
        let g = q8();
        // <i> has order 4.
        let members = g.generated([2usize]);
        assert_eq!(members.len(), 4);
        let sg = g.subgroup_from(members).unwrap();
        assert!(sg.is_valid());
        assert!(sg.is_cyclic());
    }

    #[test]
    fn abelian_basis_is_direct_sum() {
        let g = direct_product(
            &direct_product(&cyclic(4).unwrap(), &cyclic(2).unwrap()).unwrap(),
            &cyclic(9).unwrap(),
        )
        .unwrap();
        let basis = g.abelian_basis().unwrap();
        let orders: Vec<u64> = basis.iter().map(|&(_, m)| m).collect();
        assert_eq!(orders, vec![36, 2]);
    }
}
