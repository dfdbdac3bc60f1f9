//! Minimal faithful representations as exact monomial data.
//!
//! A monomial matrix is stored as a (permutation, exponent-vector) pair: the
//! matrix with `ζ_e^{exps[j]}` in row `perm[j]` of column `j`. Equality and
//! composition are integer operations mod `e`, so faithfulness checks are
//! exact - no root of unity is ever evaluated.

use std::collections::HashMap;

use thiserror::Error;

use crate::exec;
use crate::group::{FiniteGroup, GroupError, Subgroup};
use crate::symplectic::{self, SymplecticError};
use crate::util::SplitMix64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("group does not satisfy the central-cyclic-commutator hypothesis for p = {0}")]
    HypothesisFailed(u64),
    #[error("no character extension exists (root order {0} too small)")]
    NotExtendable(u64),
    #[error("domain is not abelian")]
    NotAbelian,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// A linear character of a subgroup `H`, valued in `⟨ζ_e⟩`; `values[i]` is
/// the exponent for the `i`-th member of the domain.
#[derive(Debug, Clone)]
pub struct Character {
    domain: Subgroup,
    values: Vec<u64>,
    e: u64,
}

impl Character {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn root_order(&self) -> u64 {
        self.e
    }

    /// Exponent at a parent-group element index; `None` outside the domain.
    pub fn value(&self, parent_elem: usize) -> Option<u64> {
        self.domain
            .members()
            .binary_search(&(parent_elem as u32))
            .ok()
            .map(|i| self.values[i])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Faithful character of a cyclic subgroup: the chosen generator maps to
    /// `ζ_e^{e/|H|}`.
    pub fn faithful_on_cyclic(domain: &Subgroup, e: u64) -> Result<Character, RepError> {
        let h = domain.order() as u64;
        if e % h != 0 {
            return Err(RepError::NotExtendable(e));
        }
        if !domain.is_cyclic() {
            return Err(RepError::NotAbelian);
        }
        let gen = domain.max_order_generator().expect("nonempty subgroup");
        let g = domain.parent();
        let step = e / h;
        let mut values = vec![0u64; domain.order()];
        let mut cur = g.identity();
        for k in 0..h {
            let pos = domain
                .members()
                .binary_search(&(cur as u32))
                .expect("powers stay in the subgroup");
            values[pos] = k * step % e;
            cur = g.mul(cur, gen);
        }
        let chi = Character {
            domain: domain.clone(),
            values,
            e,
        };
        chi.assert_multiplicative();
        Ok(chi)
    }

    fn assert_multiplicative(&self) {
        let g = self.domain.parent();
        let members = self.domain.members();
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                let ab = g.mul(a as usize, b as usize);
                let pos = members.binary_search(&(ab as u32)).expect("closed");
                assert_eq!(
                    (self.values[i] + self.values[j]) % self.e,
                    self.values[pos],
                    "character is not multiplicative"
                );
            }
        }
    }
}

/// Every linear character of `H` with values in `⟨ζ_e⟩` (characters of the
/// abelianisation, pulled back), in a deterministic order.
pub fn linear_characters(h: &Subgroup, e: u64) -> Result<Vec<Character>, RepError> {
    let (hg, _to_parent) = h.as_group();
    let derived = hg.derived_subgroup();
    let (hab, proj) = hg.quotient(&derived).expect("derived subgroup is normal");
    let basis = hab.abelian_basis().expect("abelianisation is abelian");
    for &(_, m) in &basis {
        if e % m != 0 {
            return Err(RepError::NotExtendable(e));
        }
    }
    // Coordinates of each Hab element in the basis, by enumeration.
    let mut coords: Vec<Vec<u64>> = vec![Vec::new(); hab.order()];
    let mut stack = vec![(hab.identity(), vec![0u64; basis.len()], 0usize)];
    while let Some((acc, cs, depth)) = stack.pop() {
        if depth == basis.len() {
            coords[acc] = cs;
            continue;
        }
        let (gen, m) = basis[depth];
        let mut cur = acc;
        for k in 0..m {
            let mut next = cs.clone();
            next[depth] = k;
            stack.push((cur, next, depth + 1));
            cur = hab.mul(cur, gen);
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0u64; basis.len()];
    loop {
        // Character exponents: generator j maps to ζ_e^{choice_j · e/m_j}.
        let values: Vec<u64> = (0..h.order())
            .map(|i| {
                let hab_elem = proj[i] as usize;
                coords[hab_elem]
                    .iter()
                    .zip(&basis)
                    .zip(&choice)
                    .map(|((&x, &(_, m)), &k)| x * (k * (e / m) % e) % e)
                    .sum::<u64>()
                    % e
            })
            .collect();
        let chi = Character {
            domain: h.clone(),
            values,
            e,
        };
        chi.assert_multiplicative();
        out.push(chi);
        // Mixed-radix increment.
        let mut pos = 0;
        loop {
            if pos == basis.len() {
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < basis[pos].1 {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Extends a character defined on `Z ≤ H` to all of the abelian subgroup
/// `H`, choosing the lexicographically smallest valid value vector.
pub fn extend_character(
    h: &Subgroup,
    z: &Subgroup,
    chi_z: &Character,
    e: u64,
) -> Result<Character, RepError> {
    if !z.is_contained_in(h) {
        return Err(RepError::NotAbelian);
    }
    let (hg, _) = h.as_group();
    if !hg.is_abelian() {
        return Err(RepError::NotAbelian);
    }
    let candidates = linear_characters(h, e)?;
    let restricts = |chi: &Character| -> bool {
        z.members().iter().all(|&m| {
            let lhs = chi.value(m as usize).expect("Z inside H");
            let rhs = chi_z.value(m as usize).expect("Z is the domain") * (e / chi_z.e) % e;
            lhs == rhs
        })
    };
    candidates
        .into_iter()
        .filter(restricts)
        .min_by(|a, b| a.values.cmp(&b.values))
        .ok_or(RepError::NotExtendable(e))
}

/// One monomial matrix: column `j` carries `ζ_e^{exps[j]}` in row `perm[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<u32>,
    pub exps: Vec<u64>,
}

impl MonomialMatrix {
    pub fn identity(degree: usize) -> MonomialMatrix {
        MonomialMatrix {
            perm: (0..degree as u32).collect(),
            exps: vec![0; degree],
        }
    }

    pub fn is_identity(&self, e: u64) -> bool {
        self.perm.iter().enumerate().all(|(j, &i)| i as usize == j)
            && self.exps.iter().all(|&x| x % e == 0)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &MonomialMatrix, e: u64) -> MonomialMatrix {
        let degree = self.perm.len();
        let mut perm = vec![0u32; degree];
        let mut exps = vec![0u64; degree];
        for j in 0..degree {
            let mid = other.perm[j] as usize;
            perm[j] = self.perm[mid];
            exps[j] = (self.exps[mid] + other.exps[j]) % e;
        }
        MonomialMatrix { perm, exps }
    }
}

/// An exact monomial representation: an image matrix for every element.
#[derive(Debug, Clone)]
pub struct MonomialRep {
    pub degree: usize,
    pub e: u64,
    pub images: Vec<MonomialMatrix>,
}

impl MonomialRep {
    pub fn image(&self, g: usize) -> &MonomialMatrix {
        &self.images[g]
    }

    /// Homomorphism property: exhaustive over all pairs up to order 512,
    /// generator products plus a deterministic sample above.
    pub fn verify_multiplicative(&self, g: &FiniteGroup) -> bool {
        let n = g.order();
        assert_eq!(self.images.len(), n);
        if !self.images[g.identity()].is_identity(self.e) {
            return false;
        }
        let check = |x: usize, y: usize| -> bool {
            self.images[g.mul(x, y)] == self.images[x].compose(&self.images[y], self.e)
        };
        if n <= 512 {
            exec::all_range(n * n, |cell| check(cell / n, cell % n))
        } else {
            let gens = small_generating_set(g);
            let on_gens = exec::all_range(n, |x| gens.iter().all(|&s| check(x, s) && check(s, x)));
            let mut rng = SplitMix64(0x7e57ab1e);
            let sampled = (0..100_000).all(|_| {
                check(rng.below(n as u64) as usize, rng.below(n as u64) as usize)
            });
            on_gens && sampled
        }
    }
}

/// Greedy small generating set.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span_size = 1usize;
    while span_size < g.order() {
        let span: Vec<u32> = g.generated(gens.iter().copied());
        let span_set: std::collections::HashSet<u32> = span.iter().copied().collect();
        // Element extending the span the most (ties to smallest index).
        let cand = (0..g.order())
            .filter(|&x| !span_set.contains(&(x as u32)))
            .max_by_key(|&x| {
                let mut with = gens.clone();
                with.push(x);
                let size = g.generated(with).len();
                (size, usize::MAX - x)
            })
            .expect("non-spanning set leaves elements");
        gens.push(cand);
        span_size = g.generated(gens.iter().copied()).len();
    }
    gens
}

/// Induction of a linear character along `H ≤ G` with the smallest-member
/// coset transversal; degree is the index `[G:H]`.
pub fn induce_monomial(
    g: &FiniteGroup,
    h: &Subgroup,
    chi: &Character,
) -> Result<MonomialRep, RepError> {
    let n = g.order();
    let e = chi.e;
    // Left cosets xH, represented by their smallest member, sorted.
    let mut coset_rep = vec![u32::MAX; n];
    for x in 0..n {
        let mut best = u32::MAX;
        for &m in h.members() {
            best = best.min(g.mul(x, m as usize) as u32);
        }
        coset_rep[x] = best;
    }
    let mut reps: Vec<u32> = coset_rep.to_vec();
    reps.sort_unstable();
    reps.dedup();
    let coset_index: HashMap<u32, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let degree = reps.len();

    let images: Vec<MonomialMatrix> = exec::map_range(n, |x| {
        let mut perm = vec![0u32; degree];
        let mut exps = vec![0u64; degree];
        for j in 0..degree {
            let w = g.mul(x, reps[j] as usize);
            let i = coset_index[&coset_rep[w]];
            let hh = g.mul(g.inv(reps[i] as usize), w);
            perm[j] = i as u32;
            exps[j] = chi.value(hh).expect("t_i^{-1} g t_j lands in H");
        }
        MonomialMatrix { perm, exps }
    });
    let rep = MonomialRep { degree, e, images };
    assert!(
        rep.verify_multiplicative(g),
        "induced images must form a representation"
    );
    Ok(rep)
}

/// Kernel of a monomial representation by exhaustive image comparison.
pub fn rep_kernel(rep: &MonomialRep, g: &FiniteGroup) -> Subgroup {
    let members: Vec<u32> = (0..g.order())
        .filter(|&x| rep.images[x].is_identity(rep.e))
        .map(|x| x as u32)
        .collect();
    g.subgroup_from(members)
        .expect("representation kernel is a subgroup")
}

/// Direct sum with a one-dimensional character block.
fn direct_sum_with_character(
    rep: &MonomialRep,
    g: &FiniteGroup,
    chi: &Character,
) -> MonomialRep {
    assert_eq!(rep.e, chi.e);
    let degree = rep.degree + 1;
    let images: Vec<MonomialMatrix> = (0..g.order())
        .map(|x| {
            let base = &rep.images[x];
            let mut perm: Vec<u32> = base.perm.clone();
            perm.push(rep.degree as u32);
            let mut exps = base.exps.clone();
            exps.push(chi.value(x).expect("character defined on all of G"));
            MonomialMatrix { perm, exps }
        })
        .collect();
    MonomialRep {
        degree,
        e: rep.e,
        images,
    }
}

/// The maximal cyclic subgroup of the center containing the derived
/// subgroup: smallest-index central element of maximal order whose span
/// contains `[G,G]`.
fn max_cyclic_over_derived(g: &FiniteGroup) -> Subgroup {
    let center = g.center();
    let derived = g.derived_subgroup();
    let mut best: Option<(u32, usize)> = None;
    for &c in center.members() {
        let c = c as usize;
        let span = g.generated([c]);
        let contains = derived
            .members()
            .iter()
            .all(|&d| span.binary_search(&d).is_ok());
        if contains {
            let ord = g.order_of(c);
            match best {
                None => best = Some((ord, c)),
                Some((bo, bc)) => {
                    if ord > bo || (ord == bo && c < bc) {
                        best = Some((ord, c));
                    }
                }
            }
        }
    }
    let (_, gen) = best.expect("identity span always contains a trivial derived subgroup");
    g.subgroup_from(g.generated([gen]))
        .expect("cyclic span is a subgroup")
}

/// A complement `W` with `C(G) = Z ⊕ W`; greedy construction verified
/// before returning.
fn central_complement(g: &FiniteGroup, z: &Subgroup) -> Subgroup {
    let center = g.center();
    let z_set: std::collections::HashSet<u32> = z.members().iter().copied().collect();
    let mut w_gens: Vec<usize> = Vec::new();
    loop {
        let w_members = g.generated(w_gens.iter().copied());
        if w_members.len() * z.order() == center.order() {
            let w = g.subgroup_from(w_members).expect("span is a subgroup");
            // Z ∩ W must be trivial.
            let inter = w
                .members()
                .iter()
                .filter(|&&m| z_set.contains(&m))
                .count();
            assert_eq!(inter, 1, "complement intersects Z nontrivially");
            return w;
        }
        // Candidates: central elements x with ⟨W, x⟩ still meeting Z only
        // in the identity; take maximal order, smallest index.
        let mut best: Option<(u32, usize)> = None;
        for &c in center.members() {
            let c = c as usize;
            if w_members.binary_search(&(c as u32)).is_ok() {
                continue;
            }
            let mut gens = w_gens.clone();
            gens.push(c);
            let grown = g.generated(gens);
            let meets_z = grown
                .iter()
                .any(|&m| m as usize != g.identity() && z_set.contains(&m));
            if meets_z {
                continue;
            }
            let ord = g.order_of(c);
            match best {
                None => best = Some((ord, c)),
                Some((bo, bc)) => {
                    if ord > bo || (ord == bo && c < bc) {
                        best = Some((ord, c));
                    }
                }
            }
        }
        let (_, pick) =
            best.expect("a complement of a maximal cyclic central subgroup must exist");
        w_gens.push(pick);
    }
}

/// Minimal faithful representation of a p-group with central cyclic
/// commutator: degree `√|G/C(G)| + rank C(G) − 1`, built by stripping
/// cyclic central summands down to a cyclic center and then inducing from
/// the Lagrangian preimage. Faithfulness is verified by direct kernel
/// computation.
pub fn minimal_faithful_rep(g: &FiniteGroup, p: u64) -> Result<MonomialRep, RepError> {
    if !g.is_theorem_hypothesis(p) {
        return Err(RepError::HypothesisFailed(p));
    }
    let e = g.exponent().max(1);
    let rep = build_rep(g, p, e)?;
    assert!(
        rep_kernel(&rep, g).is_trivial(),
        "constructed representation must be faithful"
    );
    Ok(rep)
}

fn build_rep(g: &FiniteGroup, p: u64, e: u64) -> Result<MonomialRep, RepError> {
    if g.order() == 1 {
        // Degree-0 representation of the trivial group: faithful vacuously.
        return Ok(MonomialRep {
            degree: 0,
            e,
            images: vec![MonomialMatrix {
                perm: vec![],
                exps: vec![],
            }],
        });
    }
    let z = max_cyclic_over_derived(g);
    let w = central_complement(g, &z);

    if w.is_trivial() {
        // Cyclic center: induce from the Lagrangian preimage.
        let m = symplectic::commutator_form(g, p)?;
        let dec = symplectic::symplectic_basis(&m)?;
        let lagr = symplectic::lagrangian(&m, &dec)?;
        let lagr_set: std::collections::HashSet<u32> =
            lagr.members().iter().copied().collect();
        let preimage: Vec<u32> = (0..g.order())
            .filter(|&x| lagr_set.contains(&m.projection()[x]))
            .map(|x| x as u32)
            .collect();
        let h = g.subgroup_from(preimage)?;
        let center = g.center();
        let chi_c = Character::faithful_on_cyclic(&center, e)?;
        let chi = extend_character(&h, &center, &chi_c, e)?;
        return induce_monomial(g, &h, &chi);
    }

    // Strip a maximal cyclic summand of W.
    let w_gen = w
        .max_order_generator()
        .expect("nontrivial complement has elements");
    let h_w = g.subgroup_from(g.generated([w_gen]))?;
    let (gbar, proj) = g.quotient(&h_w)?;
    let inner = build_rep(&gbar, p, e)?;
    let pulled = MonomialRep {
        degree: inner.degree,
        e,
        images: (0..g.order())
            .map(|x| inner.images[proj[x] as usize].clone())
            .collect(),
    };

    // Character of G faithful on the stripped summand: project to the
    // abelian quotient G/Z, where W embeds, and extend a faithful
    // character of the image of H_w.
    let (b, proj_b) = g.quotient(&z)?;
    let wb = proj_b[w_gen] as usize;
    assert_eq!(
        b.order_of(wb),
        g.order_of(w_gen),
        "W must project isomorphically into G/Z"
    );
    let wb_sub = b.subgroup_from(b.generated([wb]))?;
    let chi_wb = Character::faithful_on_cyclic(&wb_sub, e)?;
    let psi = extend_character(&b.full_subgroup(), &wb_sub, &chi_wb, e)?;
    let chi_g = Character {
        domain: g.full_subgroup(),
        values: (0..g.order())
            .map(|x| psi.value(proj_b[x] as usize).expect("full domain"))
            .collect(),
        e,
    };
    chi_g.assert_multiplicative();
    assert_eq!(
        h_w.members()
            .iter()
            .filter(|&&m| chi_g.value(m as usize) == Some(0))
            .count(),
        1,
        "character must be faithful on the stripped summand"
    );

    Ok(direct_sum_with_character(&pulled, g, &chi_g))
}

/// Exhaustive small-order minimality oracle: no faithful monomial
/// representation induced from a linear character of any subgroup has
/// degree below `formula_degree`. Intended for |G| ≤ 32.
pub fn no_smaller_induced_rep(g: &FiniteGroup, formula_degree: usize) -> bool {
    let e = g.exponent().max(1);
    for members in all_subgroups(g) {
        let h = g.subgroup_from(members).expect("enumerated subgroups are valid");
        let degree = g.order() / h.order();
        if degree >= formula_degree {
            continue;
        }
        let chars = match linear_characters(&h, e) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for chi in chars {
            let rep = induce_monomial(g, &h, &chi).expect("induction is total");
            if rep_kernel(&rep, g).is_trivial() {
                return false;
            }
        }
    }
    true
}

/// All subgroups by breadth-first closure growth; exponential in general,
/// intended for small orders.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    let mut queue: std::collections::VecDeque<Vec<u32>> = std::collections::VecDeque::new();
    let trivial = vec![g.identity() as u32];
    seen.insert(trivial.clone());
    queue.push_back(trivial);
    while let Some(members) = queue.pop_front() {
        for x in 0..g.order() {
            if members.binary_search(&(x as u32)).is_ok() {
                continue;
            }
            let mut gens: Vec<usize> = members.iter().map(|&m| m as usize).collect();
            gens.push(x);
            let grown = g.generated(gens);
            if seen.insert(grown.clone()) {
                queue.push_back(grown);
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort();
    out
}
