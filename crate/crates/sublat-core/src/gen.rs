//! Lattice generators: concept lattices of formal contexts, seeded random
//! sampling, and isomorph-free exhaustive enumeration of small lattices.

use crate::algebra::Universe;
use crate::lattice::{
    lattice_from_poset, FiniteLattice, LatticeError, Poset, LABEL_POOL, LATTICE_OPS,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// A formal context: objects in rows, attributes in columns, one incidence
/// bit per cell.
#[derive(Debug, Clone)]
pub struct FormalContext {
    rows: Vec<u16>,
    attributes: usize,
}

impl FormalContext {
    /// Builds a context from per-object attribute masks. Both dimensions
    /// are capped at 12; the concept count is exponential in them.
    pub fn new(rows: Vec<u16>, attributes: usize) -> FormalContext {
        assert!(attributes <= 12, "attribute count capped at 12");
        assert!(rows.len() <= 12, "object count capped at 12");
        assert!(
            rows.iter().all(|&r| r >> attributes == 0),
            "incidence bits outside the attribute range"
        );
        FormalContext { rows, attributes }
    }

    pub fn objects(&self) -> usize {
        self.rows.len()
    }

    pub fn attributes(&self) -> usize {
        self.attributes
    }

    pub fn incident(&self, object: usize, attribute: usize) -> bool {
        self.rows[object] >> attribute & 1 == 1
    }
}

/// Labels n machine-generated elements from the shared pool.
fn pool_universe(n: usize) -> Result<Universe, LatticeError> {
    if n > LABEL_POOL.len() {
        return Err(LatticeError::TooLarge(n));
    }
    Ok(Universe::new(LABEL_POOL.chars().take(n).collect(), &LATTICE_OPS)
        .expect("pool labels are valid"))
}

/// The lattice of formal concepts of `ctx`, ordered by extent inclusion.
/// Always a lattice; fails with TooLarge when the concept count exceeds
/// what the element label pool can name.
pub fn concept_lattice(ctx: &FormalContext) -> Result<FiniteLattice, LatticeError> {
    // Distinct extents are in bijection with concepts: each extent is the
    // set of objects sharing some attribute set, and its intent is forced.
    let mut extents: BTreeSet<u16> = BTreeSet::new();
    for intent in 0..1u32 << ctx.attributes {
        let mut extent: u16 = 0;
        for (object, &row) in ctx.rows.iter().enumerate() {
            if row as u32 & intent == intent {
                extent |= 1 << object;
            }
        }
        extents.insert(extent);
        if extents.len() > LABEL_POOL.len() {
            return Err(LatticeError::TooLarge(extents.len()));
        }
    }
    let mut sorted: Vec<u16> = extents.into_iter().collect();
    sorted.sort_by_key(|&e| (e.count_ones(), e));
    let n = sorted.len();
    let universe = pool_universe(n)?;
    let mut up = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if sorted[i] & !sorted[j] == 0 {
                up[i] |= 1 << j;
            }
        }
    }
    lattice_from_poset(Poset::from_up_masks(universe, up))
}

/// Samples a random lattice of roughly `n_hint` elements (at most 16),
/// deterministically per seed: random formal contexts are drawn and the
/// concept lattice closest to the requested size wins, with an exact hit
/// returned immediately.
pub fn random_lattice(n_hint: usize, seed: u64) -> FiniteLattice {
    assert!((1..=16).contains(&n_hint), "size hint must be in 1..=16");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, FiniteLattice)> = None;
    for _ in 0..64 {
        let g = rng.gen_range(3..=7);
        let m = rng.gen_range(3..=7);
        let density = rng.gen_range(0.30..0.65);
        let rows: Vec<u16> = (0..g)
            .map(|_| (0..m).fold(0u16, |row, a| row | (u16::from(rng.gen_bool(density)) << a)))
            .collect();
        let Ok(lattice) = concept_lattice(&FormalContext::new(rows, m)) else {
            continue;
        };
        let diff = lattice.n().abs_diff(n_hint);
        if diff == 0 {
            return lattice;
        }
        if best.as_ref().map_or(true, |(d, _)| diff < *d) {
            best = Some((diff, lattice));
        }
    }
    match best {
        Some((_, lattice)) => lattice,
        // Vanishingly unlikely (all draws overflowed the pool), but keep
        // the no-error contract honest.
        None => crate::lattice::chain(n_hint),
    }
}

/// Bounds for exhaustive enumeration: lattices of up to `max_n` elements
/// (at most 8), optionally stopping after `max_count` results.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_n: usize,
    pub max_count: Option<usize>,
}

/// Height of each element: the length of a longest chain strictly below it.
fn heights(down: &[u64]) -> Vec<usize> {
    let n = down.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| down[i].count_ones());
    let mut height = vec![0usize; n];
    for &i in &order {
        for j in 0..n {
            if j != i && down[i] >> j & 1 == 1 {
                height[i] = height[i].max(height[j] + 1);
            }
        }
    }
    height
}

/// Canonical form of a poset on up to 8 elements, given as down-set masks:
/// the lexicographically smallest packed order matrix over all
/// permutations that respect the (height, down-degree, up-degree)
/// invariant classes. Isomorphic posets agree on the invariant multiset,
/// so they receive the same canonical form.
fn canonical_form(down: &[u64]) -> u64 {
    let n = down.len();
    debug_assert!(n <= 8);
    let height = heights(down);
    let mut up_size = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if down[j] >> i & 1 == 1 {
                up_size[i] += 1;
            }
        }
    }
    let key = |i: usize| (height[i], down[i].count_ones(), up_size[i]);
    let mut base: Vec<usize> = (0..n).collect();
    base.sort_by_key(|&i| key(i));
    // Runs of equal invariants; only permutations within runs can realize
    // an isomorphism.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || key(base[i]) != key(base[start]) {
            runs.push((start, i));
            start = i;
        }
    }
    let leq = |x: usize, y: usize| down[y] >> x & 1;
    let pack = |perm: &[usize]| {
        let mut bits: u64 = 0;
        for i in 0..n {
            for j in 0..n {
                bits = bits << 1 | leq(perm[i], perm[j]);
            }
        }
        bits
    };
    let mut best = u64::MAX;
    fn permute_runs(
        run: usize,
        runs: &[(usize, usize)],
        perm: &mut Vec<usize>,
        best: &mut u64,
        pack: &dyn Fn(&[usize]) -> u64,
    ) {
        if run == runs.len() {
            *best = (*best).min(pack(perm));
            return;
        }
        let (lo, hi) = runs[run];
        let mut idx: Vec<usize> = (lo..hi).collect();
        permute_slice(&mut idx, 0, &mut |arrangement| {
            let saved: Vec<usize> = (lo..hi).map(|i| perm[i]).collect();
            let reordered: Vec<usize> = arrangement.iter().map(|&i| saved[i - lo]).collect();
            perm[lo..hi].copy_from_slice(&reordered);
            permute_runs(run + 1, runs, perm, best, pack);
            perm[lo..hi].copy_from_slice(&saved);
        });
        fn permute_slice(idx: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
            if k == idx.len() {
                visit(idx);
                return;
            }
            for i in k..idx.len() {
                idx.swap(k, i);
                permute_slice(idx, k + 1, visit);
                idx.swap(k, i);
            }
        }
    }
    let mut perm = base.clone();
    permute_runs(0, &runs, &mut perm, &mut best, &pack);
    best
}

/// Whether the strict down-set `d` admits a new maximal element: it must be
/// downward closed, and for every existing element y the set d ∩ ↓y needs a
/// greatest element (the meet of the new element with y).
fn extension_is_meet_closed(down: &[u64], d: u64) -> bool {
    let n = down.len();
    for x in 0..n {
        if d >> x & 1 == 1 && down[x] & !d != 0 {
            return false;
        }
    }
    for y in 0..n {
        let m = d & down[y];
        if m == 0 {
            return false;
        }
        let mut has_greatest = false;
        let mut bits = m;
        while bits != 0 {
            let z = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if m & !down[z] == 0 {
                has_greatest = true;
                break;
            }
        }
        if !has_greatest {
            return false;
        }
    }
    true
}

/// Exhaustively enumerates finite lattices up to isomorphism, one
/// representative per class, sizes ascending.
///
/// Lattices are grown as meet-semilattices, adding one maximal element per
/// step (its strict down-set must be meet-closed in the sense above);
/// a meet-semilattice is a lattice exactly when its maximal element is
/// unique. Canonical forms reject isomorphic duplicates at every level.
pub fn enumerate_lattices(budget: &EnumerationBudget) -> Vec<FiniteLattice> {
    assert!(
        (1..=8).contains(&budget.max_n),
        "exhaustive enumeration is capped at 8 elements"
    );
    let mut results = Vec::new();
    let mut level: Vec<Vec<u64>> = vec![vec![1]];
    if !emit_if_lattice(&level[0], &mut results, budget.max_count) {
        return results;
    }
    for size in 1..budget.max_n {
        let mut seen = BTreeSet::new();
        let mut next: Vec<Vec<u64>> = Vec::new();
        for semilattice in &level {
            for d in 1..1u64 << size {
                if !extension_is_meet_closed(semilattice, d) {
                    continue;
                }
                let mut extended = semilattice.clone();
                extended.push(d | 1 << size);
                if seen.insert(canonical_form(&extended)) {
                    next.push(extended);
                }
            }
        }
        for semilattice in &next {
            if !emit_if_lattice(semilattice, &mut results, budget.max_count) {
                return results;
            }
        }
        level = next;
    }
    results
}

/// Appends the semilattice when it has a unique maximal element (and is
/// therefore a lattice); returns false once the result cap is reached.
fn emit_if_lattice(down: &[u64], results: &mut Vec<FiniteLattice>, cap: Option<usize>) -> bool {
    if let Some(cap) = cap {
        if results.len() >= cap {
            return false;
        }
    }
    let n = down.len();
    let maxima = (0..n)
        .filter(|&i| (0..n).all(|j| j == i || down[j] >> i & 1 == 0))
        .count();
    if maxima == 1 {
        let universe = pool_universe(n).expect("at most 8 labels");
        let mut up = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if down[j] >> i & 1 == 1 {
                    up[i] |= 1 << j;
                }
            }
        }
        let lattice = lattice_from_poset(Poset::from_up_masks(universe, up))
            .expect("meet-semilattice with greatest element is a lattice");
        results.push(lattice);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        count_sublattices, is_isomorphic, lattice_from_covers, verify_lattice_axioms,
        PosetSpec,
    };

    #[test]
    fn co_identity_context_gives_the_boolean_cube() {
        // Object k holds every attribute except k: all eight extent
        // combinations close, giving the 8-element boolean lattice.
        let ctx = FormalContext::new(vec![0b110, 0b101, 0b011], 3);
        let l = concept_lattice(&ctx).unwrap();
        assert_eq!(l.n(), 8);
        assert!(verify_lattice_axioms(&l));
        assert_eq!(count_sublattices(&l).unwrap(), 73);
    }

    #[test]
    fn identity_context_gives_the_diamond() {
        let ctx = FormalContext::new(vec![0b001, 0b010, 0b100], 3);
        let l = concept_lattice(&ctx).unwrap();
        assert_eq!(l.n(), 5);
        let diamond =
            lattice_from_covers(&PosetSpec::new("oiabc", "oa ob oc ai bi ci").unwrap()).unwrap();
        assert!(is_isomorphic(l.poset(), diamond.poset()));
    }

    #[test]
    fn degenerate_contexts() {
        let full = FormalContext::new(vec![0b111; 3], 3);
        assert_eq!(concept_lattice(&full).unwrap().n(), 1);
        let empty = FormalContext::new(vec![0; 3], 3);
        let l = concept_lattice(&empty).unwrap();
        assert_eq!(l.n(), 2);
        assert!(verify_lattice_axioms(&l));
    }

    #[test]
    fn oversized_concept_sets_are_rejected() {
        // Co-identity on 7 objects closes to 2^7 = 128 concepts.
        let rows: Vec<u16> = (0..7).map(|k| 0b111_1111 ^ (1 << k)).collect();
        let ctx = FormalContext::new(rows, 7);
        assert!(matches!(concept_lattice(&ctx), Err(LatticeError::TooLarge(_))));
    }

    #[test]
    fn random_lattices_are_deterministic_and_valid() {
        for seed in 0..40u64 {
            let a = random_lattice(10, seed);
            let b = random_lattice(10, seed);
            assert_eq!(a.labels(), b.labels());
            assert_eq!(a.covers(), b.covers());
            assert!(verify_lattice_axioms(&a));
        }
        let near = random_lattice(10, 7);
        assert!(near.n() >= 2);
    }

    #[test]
    fn enumeration_counts_match_the_known_sequence() {
        let budget = EnumerationBudget { max_n: 8, max_count: None };
        let lattices = enumerate_lattices(&budget);
        let mut per_size = [0usize; 9];
        for l in &lattices {
            per_size[l.n()] += 1;
            assert!(verify_lattice_axioms(l));
        }
        assert_eq!(per_size[1..], [1, 1, 1, 2, 5, 15, 53, 222]);
    }

    #[test]
    fn enumeration_respects_the_count_cap() {
        let budget = EnumerationBudget { max_n: 6, max_count: Some(4) };
        assert_eq!(enumerate_lattices(&budget).len(), 4);
    }

    #[test]
    fn enumerated_lattices_are_pairwise_non_isomorphic() {
        let budget = EnumerationBudget { max_n: 6, max_count: None };
        let lattices = enumerate_lattices(&budget);
        for (i, a) in lattices.iter().enumerate() {
            for b in &lattices[i + 1..] {
                if a.n() == b.n() {
                    assert!(!is_isomorphic(a.poset(), b.poset()));
                }
            }
        }
    }

    /// Independent oracle: every strict order on indices compatible with
    /// their numeric order (a linear extension always exists, so every
    /// isomorphism class appears), filtered to lattices and deduplicated
    /// by the same canonical form.
    fn brute_force_lattice_classes(n: usize) -> BTreeSet<u64> {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut classes = BTreeSet::new();
        'relation: for mask in 0..1u64 << pairs.len() {
            let mut down = vec![0u64; n];
            for i in 0..n {
                down[i] |= 1 << i;
            }
            for (bit, &(i, j)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    down[j] |= 1 << i;
                }
            }
            // Transitivity.
            for i in 0..n {
                for j in 0..n {
                    if i != j && down[j] >> i & 1 == 1 && down[j] | down[i] != down[j] {
                        continue 'relation;
                    }
                }
            }
            // Every pair needs a greatest lower and least upper bound.
            let up: Vec<u64> = (0..n)
                .map(|i| (0..n).fold(0u64, |m, j| m | u64::from(down[j] >> i & 1) << j))
                .collect();
            for x in 0..n {
                for y in 0..n {
                    let lower = down[x] & down[y];
                    let upper = up[x] & up[y];
                    if !(0..n).any(|z| lower >> z & 1 == 1 && lower & !down[z] == 0)
                        || !(0..n).any(|z| upper >> z & 1 == 1 && upper & !up[z] == 0)
                    {
                        continue 'relation;
                    }
                }
            }
            classes.insert(canonical_form(&down));
        }
        classes
    }

    #[test]
    fn enumeration_agrees_with_the_brute_force_oracle() {
        let budget = EnumerationBudget { max_n: 5, max_count: None };
        let lattices = enumerate_lattices(&budget);
        for n in 1..=5 {
            let oracle = brute_force_lattice_classes(n);
            let generated: BTreeSet<u64> = lattices
                .iter()
                .filter(|l| l.n() == n)
                .map(|l| {
                    let down: Vec<u64> =
                        (0..n).map(|i| l.poset().down_mask(i)).collect();
                    canonical_form(&down)
                })
                .collect();
            assert_eq!(generated, oracle, "size {}", n);
        }
    }
}
