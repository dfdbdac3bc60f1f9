//! The commutator pairing on `A = G/C(G)` valued in the cyclic group
//! `[G,G]`, its reduction to a hyperbolic basis with invariant factors, and
//! Lagrangian extraction.
//!
//! This is the engine behind both the essential-dimension lower bound
//! (the product `d_1⋯d_r` bounds the index of the connecting Brauer class)
//! and the minimal faithful representation (induced from a character of the
//! Lagrangian preimage).

use std::collections::HashSet;

use thiserror::Error;

use crate::exec;
use crate::group::{FiniteGroup, Subgroup};
use crate::util::{gcd, SplitMix64};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("group does not satisfy the central-cyclic-commutator hypothesis for p = {0}")]
    HypothesisFailed(u64),
    #[error("symplectic reduction failed: {0} (internal invariant violation)")]
    ReductionFailed(&'static str),
    #[error("|A| = {0} is not the square of the invariant-factor product {1}")]
    NotASquare(u64, u64),
}

/// Finite abelian group `A` carrying an alternating nondegenerate pairing
/// into a cyclic group `Z` with a distinguished generator `z`; pairing
/// values are stored as exponents of `z`.
pub struct SymplecticModule {
    group: FiniteGroup,
    a: FiniteGroup,
    proj: Vec<u32>,
    lift: Vec<u32>,
    z_members: Vec<u32>,
    z_gen: usize,
    z_order: u64,
    omega: Vec<u32>,
}

/// Hyperbolic basis data: pairs `(a_i, a_{r+i})` of `A`-element indices and
/// invariant factors `d_1, …, d_r` with `d_{i+1} | d_i` and `d_r > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicDecomposition {
    pub pairs: Vec<(usize, usize)>,
    pub invariants: Vec<u64>,
}

impl SymplecticModule {
    /// The quotient group `A = G / C(G)`.
    pub fn quotient_group(&self) -> &FiniteGroup {
        &self.a
    }

    pub fn original_group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Projection `G → A` as an index map.
    pub fn projection(&self) -> &[u32] {
        &self.proj
    }

    /// The chosen section `A → G` (smallest member of each coset).
    pub fn section(&self) -> &[u32] {
        &self.lift
    }

    /// Order of the value group `Z = [G,G]`.
    pub fn z_order(&self) -> u64 {
        self.z_order
    }

    /// Chosen generator of `Z`, as a `G` element index.
    pub fn z_generator(&self) -> usize {
        self.z_gen
    }

    /// Pairing exponent: `ω(a, b) = z^omega_exp(a, b)`.
    #[inline]
    pub fn omega_exp(&self, a: usize, b: usize) -> u64 {
        self.omega[a * self.a.order() + b] as u64
    }

    /// Order of the pairing value `ω(a, b)` inside `Z`.
    pub fn pairing_order(&self, a: usize, b: usize) -> u64 {
        self.z_order / gcd(self.omega_exp(a, b), self.z_order)
    }

    /// Recomputes the full pairing table through an arbitrary section
    /// (used to confirm representative-independence).
    pub fn recompute_with_section(&self, section: &[u32]) -> Vec<u32> {
        let n = self.a.order();
        assert_eq!(section.len(), n);
        for (coset, &g) in section.iter().enumerate() {
            assert_eq!(self.proj[g as usize] as usize, coset, "not a section");
        }
        let dlog = discrete_log_table(&self.group, self.z_gen, self.z_order, &self.z_members);
        exec::map_range(n * n, |cell| {
            let (x, y) = (cell / n, cell % n);
            let c = self
                .group
                .commutator(section[x] as usize, section[y] as usize);
            dlog[&(c as u32)]
        })
    }
}

fn discrete_log_table(
    g: &FiniteGroup,
    z_gen: usize,
    z_order: u64,
    z_members: &[u32],
) -> std::collections::HashMap<u32, u32> {
    let mut map = std::collections::HashMap::new();
    let mut cur = g.identity();
    for e in 0..z_order {
        map.insert(cur as u32, e as u32);
        cur = g.mul(cur, z_gen);
    }
    assert_eq!(cur, g.identity());
    for &m in z_members {
        assert!(map.contains_key(&m), "generator does not span [G,G]");
    }
    map
}

/// Builds the commutator form of a group satisfying the hypothesis:
/// `A = G/C(G)`, `Z = [G,G]` with generator the smallest-index element of
/// maximal order, `ω(ā, b̄) = aba⁻¹b⁻¹`.
///
/// Well-definedness (independence of coset representatives), the
/// alternating and skew properties, nondegeneracy, and bilinearity are all
/// verified before returning (bilinearity exhaustively up to |A| = 512 and
/// on basis generators plus a deterministic sample above).
pub fn commutator_form(g: &FiniteGroup, p: u64) -> Result<SymplecticModule, SymplecticError> {
    if !g.is_theorem_hypothesis(p) {
        return Err(SymplecticError::HypothesisFailed(p));
    }
    let center = g.center();
    let (a, proj) = g
        .quotient(&center)
        .expect("center is always normal");
    let n_a = a.order();
    let mut lift = vec![u32::MAX; n_a];
    for elem in 0..g.order() {
        let coset = proj[elem] as usize;
        if lift[coset] == u32::MAX {
            lift[coset] = elem as u32;
        }
    }

    let derived = g.derived_subgroup();
    let z_gen = derived
        .max_order_generator()
        .expect("derived subgroup is nonempty");
    let z_order = derived.order() as u64;
    assert_eq!(
        g.order_of(z_gen) as u64,
        z_order,
        "derived subgroup must be cyclic under the hypothesis"
    );
    let dlog = discrete_log_table(g, z_gen, z_order, derived.members());

    let omega: Vec<u32> = exec::map_range(n_a * n_a, |cell| {
        let (x, y) = (cell / n_a, cell % n_a);
        let c = g.commutator(lift[x] as usize, lift[y] as usize);
        dlog[&(c as u32)]
    });

    let module = SymplecticModule {
        group: g.clone(),
        a,
        proj,
        lift,
        z_members: derived.members().to_vec(),
        z_gen,
        z_order,
        omega,
    };
    verify_module(&module)?;
    Ok(module)
}

fn verify_module(m: &SymplecticModule) -> Result<(), SymplecticError> {
    let n_a = m.a.order();
    let n = m.z_order;
    let g = &m.group;

    // Well-definedness: the pairing through *any* representatives matches
    // the table. This is an exhaustive sweep over G × G.
    let dlog = discrete_log_table(g, m.z_gen, m.z_order, &m.z_members);
    let ng = g.order();
    let well_defined = exec::all_range(ng * ng, |cell| {
        let (x, y) = (cell / ng, cell % ng);
        let c = g.commutator(x, y) as u32;
        dlog[&c] as u64 == m.omega_exp(m.proj[x] as usize, m.proj[y] as usize)
    });
    if !well_defined {
        return Err(SymplecticError::ReductionFailed(
            "pairing depends on coset representatives",
        ));
    }

    // Alternating and skew.
    for x in 0..n_a {
        if m.omega_exp(x, x) != 0 {
            return Err(SymplecticError::ReductionFailed("form is not alternating"));
        }
    }
    let skew = exec::all_range(n_a * n_a, |cell| {
        let (x, y) = (cell / n_a, cell % n_a);
        (m.omega_exp(x, y) + m.omega_exp(y, x)) % n == 0
    });
    if !skew {
        return Err(SymplecticError::ReductionFailed("form is not skew"));
    }

    // Bilinearity.
    let bilinear_at = |x: usize, y: usize, c: usize| -> bool {
        let xy = m.a.mul(x, y);
        (m.omega_exp(x, c) + m.omega_exp(y, c)) % n == m.omega_exp(xy, c)
    };
    let bilinear = if n_a <= 512 {
        exec::all_range(n_a * n_a, |cell| {
            let (x, y) = (cell / n_a, cell % n_a);
            (0..n_a).all(|c| bilinear_at(x, y, c))
        })
    } else {
        let basis = m
            .a
            .abelian_basis()
            .expect("A = G/C(G) is abelian under the hypothesis");
        let gens: Vec<usize> = basis.iter().map(|&(e, _)| e).collect();
        let on_gens = exec::all_range(n_a * n_a, |cell| {
            let (x, y) = (cell / n_a, cell % n_a);
            gens.iter().all(|&c| bilinear_at(x, y, c))
        });
        let mut rng = SplitMix64(0x0b111_ea51);
        let sampled = (0..1 << 22).all(|_| {
            let x = rng.below(n_a as u64) as usize;
            let y = rng.below(n_a as u64) as usize;
            let c = rng.below(n_a as u64) as usize;
            bilinear_at(x, y, c)
        });
        on_gens && sampled
    };
    if !bilinear {
        return Err(SymplecticError::ReductionFailed("form is not bilinear"));
    }

    // Nondegeneracy: trivial kernel (this is where quotienting by the full
    // center pays off).
    let nondegenerate = exec::all_range(n_a, |x| {
        x == m.a.identity() || (0..n_a).any(|y| m.omega_exp(x, y) != 0)
    });
    if !nondegenerate {
        return Err(SymplecticError::ReductionFailed("form has nontrivial kernel"));
    }
    Ok(())
}

/// Greedy symplectic reduction: repeatedly pick the pair with pairing value
/// of maximal order in `Z` (ties by lexicographic element index), normalise
/// it to pair exactly to `z^{n/d}`, and split off the orthogonal
/// complement. All structure invariants are re-verified on the output.
pub fn symplectic_basis(
    m: &SymplecticModule,
) -> Result<HyperbolicDecomposition, SymplecticError> {
    let a = &m.a;
    let n = m.z_order;
    let mut current: Vec<u32> = (0..a.order() as u32).collect();
    let mut pairs = Vec::new();
    let mut invariants = Vec::new();

    while current.len() > 1 {
        let s = current.len();
        // Flattened pair scan: minimise gcd(e, n) ⇔ maximise pairing order.
        let best = exec::min_by_key(s * s, |cell| {
            let (i, j) = (cell / s, cell % s);
            let e = m.omega_exp(current[i] as usize, current[j] as usize);
            (gcd(e, n), current[i], current[j])
        })
        .expect("scan over nonempty range");
        let (bi, bj) = (best / s, best % s);
        let (x, y) = (current[bi] as usize, current[bj] as usize);
        let e = m.omega_exp(x, y);
        if e == 0 {
            return Err(SymplecticError::ReductionFailed(
                "form vanishes on a nontrivial complement",
            ));
        }
        let d = n / gcd(e, n);
        // Normalise the second element so ω(x, y') = z^{n/d} exactly.
        let u = e / (n / d);
        debug_assert_eq!(gcd(u, d), 1);
        let v = mod_inverse(u, d);
        let y_norm = a.pow(y, v as i64);
        debug_assert_eq!(m.omega_exp(x, y_norm), n / d);

        pairs.push((x, y_norm));
        invariants.push(d);

        let next: Vec<u32> = current
            .iter()
            .copied()
            .filter(|&w| {
                m.omega_exp(w as usize, x) == 0 && m.omega_exp(w as usize, y_norm) == 0
            })
            .collect();
        if (next.len() as u64) * d * d != s as u64 {
            return Err(SymplecticError::ReductionFailed(
                "orthogonal complement has the wrong order",
            ));
        }
        current = next;
    }

    let decomposition = HyperbolicDecomposition { pairs, invariants };
    verify_decomposition(m, &decomposition)?;
    Ok(decomposition)
}

fn mod_inverse(u: u64, d: u64) -> u64 {
    // Extended Euclid; d ≥ 1 and gcd(u, d) = 1.
    if d == 1 {
        return 0;
    }
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r) = (d as i64, (u % d) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "u must be invertible mod d");
    t.rem_euclid(d as i64) as u64
}

/// Checks the five structure properties of a hyperbolic decomposition by
/// direct pairing evaluation.
pub fn verify_decomposition(
    m: &SymplecticModule,
    dec: &HyperbolicDecomposition,
) -> Result<(), SymplecticError> {
    let a = &m.a;
    let n = m.z_order;
    let r = dec.pairs.len();
    if dec.invariants.len() != r {
        return Err(SymplecticError::ReductionFailed("pair/invariant length mismatch"));
    }

    // (a) divisibility chain, d_r > 1.
    for w in dec.invariants.windows(2) {
        if w[0] % w[1] != 0 {
            return Err(SymplecticError::ReductionFailed("divisibility chain broken"));
        }
    }
    if let Some(&last) = dec.invariants.last() {
        if last <= 1 {
            return Err(SymplecticError::ReductionFailed("trivial invariant factor"));
        }
    }

    for (i, (&(x, y), &d)) in dec.pairs.iter().zip(&dec.invariants).enumerate() {
        // (b) ⟨x, y⟩ ≅ (Z/d)².
        if a.order_of(x) as u64 != d || a.order_of(y) as u64 != d {
            return Err(SymplecticError::ReductionFailed("basis element order mismatch"));
        }
        let span_x: HashSet<u32> = a.generated([x]).into_iter().collect();
        let span_y: HashSet<u32> = a.generated([y]).into_iter().collect();
        if span_x.intersection(&span_y).count() != 1 {
            return Err(SymplecticError::ReductionFailed("pair generators intersect"));
        }
        if a.generated([x, y]).len() as u64 != d * d {
            return Err(SymplecticError::ReductionFailed("pair span has wrong order"));
        }
        // (d) ω(a_i, a_{r+i}) = z^{n/d_i}.
        if m.omega_exp(x, y) != n / d {
            return Err(SymplecticError::ReductionFailed("pairing value not normalised"));
        }
        // (c) orthogonality across blocks.
        for (j, &(x2, y2)) in dec.pairs.iter().enumerate() {
            if i == j {
                continue;
            }
            for &(u, v) in &[(x, x2), (x, y2), (y, x2), (y, y2)] {
                if m.omega_exp(u, v) != 0 {
                    return Err(SymplecticError::ReductionFailed("blocks are not orthogonal"));
                }
            }
        }
    }

    // (e) A = A_1 ⊕ ⋯ ⊕ A_r: mixed-radix enumeration of the spans hits
    // every element exactly once.
    let expected: u64 = dec.invariants.iter().map(|&d| d * d).product();
    if expected != a.order() as u64 {
        return Err(SymplecticError::ReductionFailed("block orders do not fill A"));
    }
    let mut seen = vec![false; a.order()];
    let mut stack = vec![(a.identity(), 0usize)];
    while let Some((acc, block)) = stack.pop() {
        if block == r {
            if seen[acc] {
                return Err(SymplecticError::ReductionFailed("blocks are not independent"));
            }
            seen[acc] = true;
            continue;
        }
        let (x, y) = dec.pairs[block];
        let d = dec.invariants[block];
        let mut xe = a.identity();
        for _ in 0..d {
            let mut cur = a.mul(acc, xe);
            for _ in 0..d {
                stack.push((cur, block + 1));
                cur = a.mul(cur, y);
            }
            xe = a.mul(xe, x);
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(SymplecticError::ReductionFailed("blocks do not span A"));
    }
    Ok(())
}

/// `√|A| = d_1⋯d_r`, with the complete-square postcondition asserted.
pub fn sqrt_order(m: &SymplecticModule) -> Result<u64, SymplecticError> {
    let dec = symplectic_basis(m)?;
    let prod: u64 = dec.invariants.iter().product();
    if prod * prod != m.a.order() as u64 {
        return Err(SymplecticError::NotASquare(m.a.order() as u64, prod));
    }
    Ok(prod)
}

/// The Lagrangian generated by the first basis elements `a_1, …, a_r`;
/// isotropy and the order `∏ d_i` are verified before returning.
pub fn lagrangian(
    m: &SymplecticModule,
    dec: &HyperbolicDecomposition,
) -> Result<Subgroup, SymplecticError> {
    let a = &m.a;
    let gens: Vec<usize> = dec.pairs.iter().map(|&(x, _)| x).collect();
    let members = a.generated(gens);
    let expected: u64 = dec.invariants.iter().product();
    if members.len() as u64 != expected {
        return Err(SymplecticError::ReductionFailed("Lagrangian has wrong order"));
    }
    for &x in &members {
        for &y in &members {
            if m.omega_exp(x as usize, y as usize) != 0 {
                return Err(SymplecticError::ReductionFailed("Lagrangian is not isotropic"));
            }
        }
    }
    Ok(a.subgroup_from(members).expect("generated set is a subgroup"))
}

/// Test-and-verification oracle: the maximal order of an isotropic subgroup,
/// found by breadth-first growth over isotropic subgroups. Exponential in
/// the worst case; intended for |A| ≤ 256.
pub fn max_isotropic_order(m: &SymplecticModule) -> u64 {
    let a = &m.a;
    let n_a = a.order();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDequeOf = std::collections::VecDeque::new();
    let trivial = vec![a.identity() as u32];
    seen.insert(trivial.clone());
    queue.push_back(trivial);
    let mut best = 1u64;
    while let Some(members) = queue.pop_front() {
        best = best.max(members.len() as u64);
        for cand in 0..n_a {
            if members.binary_search(&(cand as u32)).is_ok() {
                continue;
            }
            // Extending stays isotropic iff cand pairs trivially with the
            // current subgroup (ω(cand, cand) = 0 holds automatically).
            if members
                .iter()
                .any(|&x| m.omega_exp(cand, x as usize) != 0)
            {
                continue;
            }
            let mut gens: Vec<usize> = members.iter().map(|&x| x as usize).collect();
            gens.push(cand);
            let grown = a.generated(gens);
            // The subgroup generated by an isotropic set that pairwise
            // pairs to zero is isotropic by bilinearity; re-check cheaply.
            if grown
                .iter()
                .any(|&x| grown.iter().any(|&y| m.omega_exp(x as usize, y as usize) != 0))
            {
                continue;
            }
            if seen.insert(grown.clone()) {
                queue.push_back(grown);
            }
        }
    }
    best
}

type VecDequeOf = std::collections::VecDeque<Vec<u32>>;
