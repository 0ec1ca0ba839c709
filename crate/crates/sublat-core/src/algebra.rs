//! Finite binary partial algebras and exact subuniverse counting.
//!
//! An algebra is a set of at most 64 labeled elements together with a list of
//! constraints `x∘y=z`. A subset is a subuniverse when it is closed under
//! every constraint: whenever it contains x and y it also contains z. The
//! empty set always counts; callers interested in sublattices subtract one.

use crate::dyadic::DyadicValue;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Characters that can never serve as element labels: the constraint syntax
/// and the script format claim them.
pub const RESERVED_CHARS: &[char] = &['=', '(', ')', ';', ',', '\\', ' ', '%'];

/// Largest universe the subset masks support.
pub const MAX_UNIVERSE: usize = 64;

/// Largest universe `count_subuniverses` will sweep (2^32 masks).
pub const MAX_COUNT_UNIVERSE: usize = 32;

/// Largest universe `enumerate_subuniverses` will materialize.
pub const MAX_ENUMERATE_UNIVERSE: usize = 24;

/// A subset of the universe, one bit per element; only the low n bits may be set.
pub type SubsetMask = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("universe has {n} elements, above the supported bound {bound}")]
    UniverseTooLarge { n: usize, bound: usize },
    #[error("universe must have at least one element")]
    EmptyUniverse,
    #[error("duplicate element label '{0}'")]
    DuplicateLabel(char),
    #[error("label '{0}' is reserved or collides with an operation symbol")]
    ReservedLabel(char),
    #[error("unknown element label '{0}'")]
    UnknownLabel(char),
    #[error("subset must be nonempty")]
    EmptySubset,
}

/// One element name. Labels are case-sensitive single characters; operation
/// symbols and syntax characters are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Label(pub char);

impl Label {
    pub fn validate(ch: char, op_symbols: &[char]) -> Result<Label, AlgebraError> {
        if RESERVED_CHARS.contains(&ch) || op_symbols.contains(&ch) || ch.is_whitespace() {
            return Err(AlgebraError::ReservedLabel(ch));
        }
        Ok(Label(ch))
    }
}

/// Ordered, duplicate-free element list with a stable index per label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Universe {
    labels: Vec<char>,
}

impl Universe {
    pub fn new(labels: Vec<char>, op_symbols: &[char]) -> Result<Universe, AlgebraError> {
        if labels.is_empty() {
            return Err(AlgebraError::EmptyUniverse);
        }
        if labels.len() > MAX_UNIVERSE {
            return Err(AlgebraError::UniverseTooLarge { n: labels.len(), bound: MAX_UNIVERSE });
        }
        for (i, &ch) in labels.iter().enumerate() {
            Label::validate(ch, op_symbols)?;
            if labels[..i].contains(&ch) {
                return Err(AlgebraError::DuplicateLabel(ch));
            }
        }
        Ok(Universe { labels })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> char {
        self.labels[index]
    }

    pub fn index_of(&self, ch: char) -> Option<usize> {
        self.labels.iter().position(|&c| c == ch)
    }

    /// The full subset: all n bits set.
    pub fn full_mask(&self) -> SubsetMask {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }
}

/// One constraint `x∘y=z`, stored by element index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub x: usize,
    pub op: char,
    pub y: usize,
    pub z: usize,
}

/// A binary partial algebra: a universe plus constraints. Duplicate
/// constraints and multi-valued pairs (same x∘y with different z) are allowed;
/// each listed result is then required independently.
#[derive(Debug, Clone, Serialize)]
pub struct PartialAlgebra {
    universe: Universe,
    constraints: Vec<Constraint>,
    op_symbols: Vec<char>,
}

impl PartialAlgebra {
    pub fn new(
        universe: Universe,
        constraints: Vec<Constraint>,
        op_symbols: Vec<char>,
    ) -> PartialAlgebra {
        debug_assert!(constraints
            .iter()
            .all(|c| c.x < universe.n() && c.y < universe.n() && c.z < universe.n()));
        PartialAlgebra { universe, constraints, op_symbols }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.n()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn op_symbols(&self) -> &[char] {
        &self.op_symbols
    }

    /// Precompiled closure rules: `s` is closed iff for every (pair, result),
    /// `s & pair == pair` implies `s & result != 0`.
    fn compiled(&self) -> Vec<(SubsetMask, SubsetMask)> {
        self.constraints
            .iter()
            .map(|c| ((1u64 << c.x) | (1u64 << c.y), 1u64 << c.z))
            .collect()
    }
}

fn mask_is_closed(rules: &[(SubsetMask, SubsetMask)], s: SubsetMask) -> bool {
    rules.iter().all(|&(pair, result)| s & pair != pair || s & result != 0)
}

/// True iff `s` contains the result of every constraint whose two arguments
/// it contains. Total on valid inputs; the empty and full sets are always closed.
pub fn is_closed(alg: &PartialAlgebra, s: SubsetMask) -> bool {
    debug_assert_eq!(s & !alg.universe().full_mask(), 0);
    mask_is_closed(&alg.compiled(), s)
}

fn count_range(rules: &[(SubsetMask, SubsetMask)], range: std::ops::Range<u64>) -> u64 {
    range.filter(|&s| mask_is_closed(rules, s)).count() as u64
}

/// Exact number of closed subsets among all 2^n, the empty set included.
///
/// The sweep fans out over disjoint mask ranges when the universe is large
/// enough to pay for it; the partition never changes the sum, so the result
/// is deterministic and safe to request from concurrent callers.
pub fn count_subuniverses(alg: &PartialAlgebra) -> Result<u64, AlgebraError> {
    let n = alg.n();
    if n > MAX_COUNT_UNIVERSE {
        return Err(AlgebraError::UniverseTooLarge { n, bound: MAX_COUNT_UNIVERSE });
    }
    let rules = alg.compiled();
    let total = 1u64 << n;
    if n <= 16 {
        return Ok(count_range(&rules, 0..total));
    }
    // 256 equal chunks; each chunk counted independently and summed.
    let chunks = 256u64;
    let chunk_size = total / chunks;
    Ok((0..chunks)
        .into_par_iter()
        .map(|i| count_range(&rules, i * chunk_size..(i + 1) * chunk_size))
        .sum())
}

/// sigma(A) = |Sub(A)| * 2^(subtrahend - n), exact, never rounded.
pub fn sigma(alg: &PartialAlgebra, subtrahend: i64) -> Result<DyadicValue, AlgebraError> {
    let count = count_subuniverses(alg)?;
    Ok(DyadicValue::from_count(count, subtrahend - alg.n() as i64))
}

/// All closed subsets in ascending mask order. Exponential output, so the
/// universe bound is tighter than for counting.
pub fn enumerate_subuniverses(alg: &PartialAlgebra) -> Result<Vec<SubsetMask>, AlgebraError> {
    let n = alg.n();
    if n > MAX_ENUMERATE_UNIVERSE {
        return Err(AlgebraError::UniverseTooLarge { n, bound: MAX_ENUMERATE_UNIVERSE });
    }
    let rules = alg.compiled();
    Ok((0..1u64 << n).filter(|&s| mask_is_closed(&rules, s)).collect())
}

/// The maximal induced weak partial subalgebra on `subset`: the universe
/// shrinks to the chosen labels (original order kept) and exactly those
/// constraints with x, y, z all inside survive, reindexed.
pub fn induced_weak_subalgebra(
    alg: &PartialAlgebra,
    subset: SubsetMask,
) -> Result<PartialAlgebra, AlgebraError> {
    if subset == 0 {
        return Err(AlgebraError::EmptySubset);
    }
    debug_assert_eq!(subset & !alg.universe().full_mask(), 0);
    let mut new_index = vec![usize::MAX; alg.n()];
    let mut labels = Vec::new();
    for i in 0..alg.n() {
        if subset & (1 << i) != 0 {
            new_index[i] = labels.len();
            labels.push(alg.universe().label(i));
        }
    }
    let constraints = alg
        .constraints()
        .iter()
        .filter(|c| {
            subset & (1 << c.x) != 0 && subset & (1 << c.y) != 0 && subset & (1 << c.z) != 0
        })
        .map(|c| Constraint { x: new_index[c.x], op: c.op, y: new_index[c.y], z: new_index[c.z] })
        .collect();
    let universe = Universe::new(labels, alg.op_symbols())?;
    Ok(PartialAlgebra::new(universe, constraints, alg.op_symbols().to_vec()))
}
