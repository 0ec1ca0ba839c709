//! Randomized invariants for the counting engine and the script format.

use proptest::prelude::*;
use sublat_core::{
    count_subuniverses, enumerate_subuniverses, induced_weak_subalgebra, is_closed, parse_script,
    render_script, sigma, Constraint, Job, PartialAlgebra, Script, Settings, Universe,
};

const POOL: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
const OPS: [char; 2] = ['+', '*'];

fn universe(n: usize) -> Universe {
    let labels: Vec<char> = POOL.chars().take(n).collect();
    Universe::new(labels, &OPS).unwrap()
}

fn constraints_from(raw: &[(usize, usize, usize, bool)], n: usize) -> Vec<Constraint> {
    raw.iter()
        .map(|&(x, y, z, star)| Constraint {
            x: x % n,
            op: if star { '*' } else { '+' },
            y: y % n,
            z: z % n,
        })
        .collect()
}

fn raw_constraints(max_len: usize) -> impl Strategy<Value = Vec<(usize, usize, usize, bool)>> {
    prop::collection::vec((0usize..64, 0usize..64, 0usize..64, any::<bool>()), 0..max_len)
}

proptest! {
    /// The count only depends on the constraint set's semantics, so
    /// reordering and repeating constraints must not change it.
    #[test]
    fn count_ignores_constraint_order_and_duplicates(
        n in 1usize..=10,
        raw in raw_constraints(24),
        perm_seed in any::<u64>(),
    ) {
        let cons = constraints_from(&raw, n);
        let base = PartialAlgebra::new(universe(n), cons.clone(), OPS.to_vec());
        let expected = count_subuniverses(&base).unwrap();

        let mut shuffled = cons.clone();
        let mut state = perm_seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut doubled = shuffled.clone();
        doubled.extend(cons.iter().copied());

        let reordered = PartialAlgebra::new(universe(n), shuffled, OPS.to_vec());
        let repeated = PartialAlgebra::new(universe(n), doubled, OPS.to_vec());
        prop_assert_eq!(count_subuniverses(&reordered).unwrap(), expected);
        prop_assert_eq!(count_subuniverses(&repeated).unwrap(), expected);
    }

    /// Counting and enumerating are two different sweeps over the same
    /// predicate; they must agree, and every enumerated mask must be closed.
    #[test]
    fn enumeration_matches_count(n in 1usize..=10, raw in raw_constraints(20)) {
        let alg = PartialAlgebra::new(universe(n), constraints_from(&raw, n), OPS.to_vec());
        let listed = enumerate_subuniverses(&alg).unwrap();
        prop_assert_eq!(listed.len() as u64, count_subuniverses(&alg).unwrap());
        prop_assert!(listed.iter().all(|&s| is_closed(&alg, s)));
        prop_assert!(listed.windows(2).all(|w| w[0] < w[1]));
    }

    /// Dropping to a subset of the universe keeps only the constraints that
    /// stay fully inside, so closure gets easier and sigma can only grow.
    #[test]
    fn sigma_grows_under_induced_weak_subalgebras(
        n in 2usize..=12,
        raw in raw_constraints(30),
        subset_bits in any::<u64>(),
    ) {
        let alg = PartialAlgebra::new(universe(n), constraints_from(&raw, n), OPS.to_vec());
        let subset = {
            let m = subset_bits & alg.universe().full_mask();
            if m == 0 { 1 } else { m }
        };
        let sub = induced_weak_subalgebra(&alg, subset).unwrap();
        prop_assert!(sigma(&alg, 8).unwrap() <= sigma(&sub, 8).unwrap());
    }
}

proptest! {
    // The parallel sweep kicks in past 16 elements; a few cases with a
    // sequential reference count are enough to pin the partition down.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn partitioned_count_matches_sequential_reference(raw in raw_constraints(24)) {
        let n = 17usize;
        let alg = PartialAlgebra::new(universe(n), constraints_from(&raw, n), OPS.to_vec());
        let reference = (0..1u64 << n).filter(|&s| is_closed(&alg, s)).count() as u64;
        prop_assert_eq!(count_subuniverses(&alg).unwrap(), reference);
        prop_assert_eq!(count_subuniverses(&alg).unwrap(), reference);
    }
}

fn label_set() -> impl Strategy<Value = Vec<char>> {
    prop::collection::btree_set(0usize..POOL.len(), 1..12)
        .prop_map(|idx| idx.into_iter().map(|i| POOL.as_bytes()[i] as char).collect())
}

fn job_strategy(ops: &'static [char]) -> impl Strategy<Value = Job> {
    (
        "[A-Za-z][A-Za-z0-9./]{0,12}",
        label_set(),
        raw_constraints(16),
        prop::collection::vec("[a-z0-9. ]{0,10}", 0..3),
    )
        .prop_map(move |(name, mut labels, raw, case_labels)| {
            // The alternate symbol set contains 'v', which the pool also
            // offers as a label; element labels may never collide with an
            // operation symbol, so drop offenders up front.
            labels.retain(|c| !ops.contains(c));
            if labels.is_empty() {
                labels.push('a');
            }
            let n = labels.len();
            let elements = Universe::new(labels, ops).unwrap();
            let constraints = raw
                .iter()
                .map(|&(x, y, z, star)| Constraint {
                    x: x % n,
                    op: ops[if star { 1 } else { 0 }],
                    y: y % n,
                    z: z % n,
                })
                .collect();
            Job {
                name,
                declared_size: n,
                elements,
                constraints,
                case_labels,
                source_span: (0, 0),
            }
        })
}

fn script_strategy() -> impl Strategy<Value = Script> {
    (any::<bool>(), -20i64..=20, prop::bool::ANY)
        .prop_flat_map(|(verbose, subtrahend, alt_ops)| {
            let ops: &'static [char] = if alt_ops { &['^', 'v'] } else { &OPS };
            let jobs = prop::collection::vec(job_strategy(ops), 0..4);
            (Just(verbose), Just(subtrahend), Just(ops), jobs)
        })
        .prop_map(|(verbose, subtrahend, ops, jobs)| Script {
            settings: Settings { verbose, subtrahend, op_symbols: ops.to_vec() },
            jobs,
        })
}

proptest! {
    /// Rendering a script and parsing it back must reproduce the settings
    /// and every job field except the source span.
    #[test]
    fn render_then_parse_roundtrips(script in script_strategy()) {
        let parsed = parse_script(&render_script(&script)).unwrap();
        prop_assert_eq!(parsed.settings.verbose, script.settings.verbose);
        prop_assert_eq!(parsed.settings.subtrahend, script.settings.subtrahend);
        prop_assert_eq!(&parsed.settings.op_symbols, &script.settings.op_symbols);
        prop_assert_eq!(parsed.jobs.len(), script.jobs.len());
        for (got, want) in parsed.jobs.iter().zip(&script.jobs) {
            prop_assert_eq!(&got.name, &want.name);
            prop_assert_eq!(got.declared_size, want.declared_size);
            prop_assert_eq!(&got.elements, &want.elements);
            prop_assert_eq!(&got.constraints, &want.constraints);
            prop_assert_eq!(&got.case_labels, &want.case_labels);
        }
    }
}
