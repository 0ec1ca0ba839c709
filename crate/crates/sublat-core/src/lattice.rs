//! Finite posets and lattices: construction from cover edges, join/meet
//! tables, duals, ordinal sums, order-embedding search, and the checks the
//! planarity criterion is built from.

use crate::algebra::{AlgebraError, Constraint, PartialAlgebra, Universe};
use crate::dyadic::DyadicValue;
use thiserror::Error;

/// Operation symbols used when a lattice is viewed as a binary algebra.
pub const LATTICE_OPS: [char; 2] = ['+', '*'];

/// Label pool for machine-chosen element names, in assignment order.
pub(crate) const LABEL_POOL: &str =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("cover relation has a cycle through '{0}'")]
    CyclicCovers(char),
    #[error("not a lattice: '{a}' and '{b}' have no {bound}")]
    NotALattice { a: char, b: char, bound: &'static str },
    #[error("cover edge uses undeclared element '{0}'")]
    UnknownCoverLabel(char),
    #[error("bad cover token \"{0}\" (expected two element labels)")]
    BadCoverToken(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("no stored cover data for {0}")]
    NotTranscribed(String),
    #[error("planarity catalog incomplete for lattices of {0} elements")]
    CatalogIncomplete(usize),
    #[error("element pool exhausted at {0} elements")]
    TooLarge(usize),
    #[error("sharpness witness requires at least nine elements, got {0}")]
    WitnessTooSmall(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Input description of a poset: element labels plus (lower, upper) cover
/// pairs. The edge-list form uses two-character tokens `xy` meaning
/// "y covers x".
#[derive(Debug, Clone)]
pub struct PosetSpec {
    pub universe: Universe,
    pub covers: Vec<(char, char)>,
}

impl PosetSpec {
    pub fn new(labels: &str, edges: &str) -> Result<PosetSpec, LatticeError> {
        let universe = Universe::new(labels.chars().collect(), &LATTICE_OPS)?;
        let mut covers = Vec::new();
        for token in edges.split_whitespace() {
            let pair: Vec<char> = token.chars().collect();
            if pair.len() != 2 {
                return Err(LatticeError::BadCoverToken(token.to_string()));
            }
            covers.push((pair[0], pair[1]));
        }
        for &(a, b) in &covers {
            for ch in [a, b] {
                if universe.index_of(ch).is_none() {
                    return Err(LatticeError::UnknownCoverLabel(ch));
                }
            }
        }
        Ok(PosetSpec { universe, covers })
    }

    pub fn poset(&self) -> Result<Poset, LatticeError> {
        let n = self.universe.n();
        let index = |ch| self.universe.index_of(ch).unwrap();
        let edges: Vec<(usize, usize)> =
            self.covers.iter().map(|&(a, b)| (index(a), index(b))).collect();
        let up = close_upward(n, &edges);
        for i in 0..n {
            for j in 0..n {
                if i != j && up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(LatticeError::CyclicCovers(self.universe.label(i)));
                }
            }
        }
        Ok(Poset::from_up_masks(self.universe.clone(), up))
    }
}

/// Reflexive-transitive closure of cover edges, as up-set masks.
fn close_upward(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    let mut up: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in edges {
            let merged = up[a] | up[b];
            if merged != up[a] {
                up[a] = merged;
                changed = true;
            }
        }
    }
    up
}

/// A finite poset with precomputed up-sets, down-sets, and the transitive
/// reduction of its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    universe: Universe,
    up: Vec<u64>,
    down: Vec<u64>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds from validated up-set masks (reflexive, antisymmetric,
    /// transitive). Covers are recomputed as the transitive reduction, so
    /// redundant input edges never survive construction.
    pub(crate) fn from_up_masks(universe: Universe, up: Vec<u64>) -> Poset {
        let n = universe.n();
        let mut down = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if up[j] >> i & 1 == 1 {
                    down[i] |= 1 << j;
                }
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || up[x] >> y & 1 == 0 {
                    continue;
                }
                let between = up[x] & down[y] & !(1u64 << x) & !(1u64 << y);
                if between == 0 {
                    covers.push((x, y));
                }
            }
        }
        covers.sort_unstable();
        Poset { universe, up, down, covers }
    }

    pub fn n(&self) -> usize {
        self.universe.n()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn labels(&self) -> &[char] {
        self.universe.labels()
    }

    pub fn label(&self, index: usize) -> char {
        self.universe.label(index)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Mask of elements ≥ x, including x.
    pub fn up_mask(&self, x: usize) -> u64 {
        self.up[x]
    }

    /// Mask of elements ≤ x, including x.
    pub fn down_mask(&self, x: usize) -> u64 {
        self.down[x]
    }

    /// Cover pairs (lower, upper) of the transitive reduction, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn dual(&self) -> Poset {
        Poset {
            universe: self.universe.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            covers: {
                let mut covers: Vec<(usize, usize)> =
                    self.covers.iter().map(|&(a, b)| (b, a)).collect();
                covers.sort_unstable();
                covers
            },
        }
    }
}

/// A finite lattice: a poset together with total join and meet tables and
/// its top and bottom elements.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    poset: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FiniteLattice {
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn universe(&self) -> &Universe {
        self.poset.universe()
    }

    pub fn labels(&self) -> &[char] {
        self.poset.labels()
    }

    pub fn label(&self, index: usize) -> char {
        self.poset.label(index)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n() + y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }
}

/// Builds a lattice from cover edges. Fails with a witness pair if some two
/// elements lack a least upper bound or a greatest lower bound.
pub fn lattice_from_covers(spec: &PosetSpec) -> Result<FiniteLattice, LatticeError> {
    lattice_from_poset(spec.poset()?)
}

pub(crate) fn lattice_from_poset(poset: Poset) -> Result<FiniteLattice, LatticeError> {
    let n = poset.n();
    let mut join = vec![0usize; n * n];
    let mut meet = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            join[x * n + y] = bound_of(&poset, x, y, true)?;
            meet[x * n + y] = bound_of(&poset, x, y, false)?;
        }
    }
    let top = (0..n)
        .find(|&i| poset.up_mask(i) == 1 << i)
        .expect("a finite lattice has a top");
    let bottom = (0..n)
        .find(|&i| poset.down_mask(i) == 1 << i)
        .expect("a finite lattice has a bottom");
    Ok(FiniteLattice { poset, join, meet, top, bottom })
}

/// Least upper bound (`upper`) or greatest lower bound of {x, y}; an error
/// names the witness pair when the bound does not exist or is not unique.
fn bound_of(poset: &Poset, x: usize, y: usize, upper: bool) -> Result<usize, LatticeError> {
    let common = if upper {
        poset.up_mask(x) & poset.up_mask(y)
    } else {
        poset.down_mask(x) & poset.down_mask(y)
    };
    let mut found = None;
    let mut bits = common;
    while bits != 0 {
        let z = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let covers_all = if upper {
            common & !poset.up_mask(z) == 0
        } else {
            common & !poset.down_mask(z) == 0
        };
        if covers_all {
            found = Some(z);
            break;
        }
    }
    found.ok_or(LatticeError::NotALattice {
        a: poset.label(x),
        b: poset.label(y),
        bound: if upper { "least upper bound" } else { "greatest lower bound" },
    })
}

/// The lattice as a binary partial algebra: one join and one meet constraint
/// per unordered incomparable pair. Comparable pairs are omitted because
/// their joins and meets are already members of any subset containing both.
pub fn full_algebra(lattice: &FiniteLattice) -> PartialAlgebra {
    let n = lattice.n();
    let mut constraints = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if lattice.poset.comparable(x, y) {
                continue;
            }
            constraints.push(Constraint { x, op: '+', y, z: lattice.join(x, y) });
            constraints.push(Constraint { x, op: '*', y, z: lattice.meet(x, y) });
        }
    }
    PartialAlgebra::new(lattice.universe().clone(), constraints, LATTICE_OPS.to_vec())
}

/// Number of sublattices: closed subsets minus the empty one.
pub fn count_sublattices(lattice: &FiniteLattice) -> Result<u64, AlgebraError> {
    Ok(crate::algebra::count_subuniverses(&full_algebra(lattice))? - 1)
}

/// The relative subuniverse count of the lattice as a binary algebra.
pub fn lattice_sigma(lattice: &FiniteLattice) -> Result<DyadicValue, AlgebraError> {
    crate::algebra::sigma(&full_algebra(lattice), 8)
}

/// Order-theoretic dual: the same elements with all comparabilities
/// reversed; join and meet swap roles.
pub fn dual(lattice: &FiniteLattice) -> FiniteLattice {
    FiniteLattice {
        poset: lattice.poset.dual(),
        join: lattice.meet.clone(),
        meet: lattice.join.clone(),
        top: lattice.bottom,
        bottom: lattice.top,
    }
}

/// Stacks `upper` entirely above `lower`: within each part the order is
/// unchanged, and every element of `lower` lies below every element of
/// `upper`. Label clashes in `upper` are renamed deterministically from the
/// shared pool. Fails only when the combined universe cannot be labeled.
pub fn ordinal_sum(
    lower: &FiniteLattice,
    upper: &FiniteLattice,
) -> Result<FiniteLattice, LatticeError> {
    let mut used: Vec<char> = lower.labels().to_vec();
    let originals: Vec<char> = upper.labels().to_vec();
    let mut renamed = Vec::with_capacity(originals.len());
    for &ch in &originals {
        if !used.contains(&ch) {
            used.push(ch);
            renamed.push(ch);
            continue;
        }
        let fresh = LABEL_POOL
            .chars()
            .find(|c| !used.contains(c) && !originals.contains(c))
            .ok_or_else(|| LatticeError::TooLarge(lower.n() + upper.n()))?;
        used.push(fresh);
        renamed.push(fresh);
    }
    let labels: String = used.iter().collect();
    let mut edges = String::new();
    for &(a, b) in lower.covers() {
        edges.push(lower.label(a));
        edges.push(lower.label(b));
        edges.push(' ');
    }
    for &(a, b) in upper.covers() {
        edges.push(renamed[a]);
        edges.push(renamed[b]);
        edges.push(' ');
    }
    edges.push(lower.label(lower.top()));
    edges.push(renamed[upper.bottom()]);
    lattice_from_covers(&PosetSpec::new(&labels, &edges)?)
}

/// A k-element chain, labeled from the pool.
pub fn chain(k: usize) -> FiniteLattice {
    assert!(k >= 1 && k <= 62, "chain length out of labeling range");
    let labels: String = LABEL_POOL.chars().take(k).collect();
    let chars: Vec<char> = labels.chars().collect();
    let mut edges = String::new();
    for w in chars.windows(2) {
        edges.push(w[0]);
        edges.push(w[1]);
        edges.push(' ');
    }
    lattice_from_covers(&PosetSpec::new(&labels, &edges).unwrap())
        .expect("a chain is a lattice")
}

/// An injective map from a source structure's indices into a target's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<usize>,
}

/// Checks that `phi` is injective and preserves and reflects order:
/// x ≤ y in the source iff φ(x) ≤ φ(y) in the target.
pub fn is_order_embedding(phi: &Embedding, source: &Poset, target: &Poset) -> bool {
    let n = source.n();
    if phi.map.len() != n || phi.map.iter().any(|&t| t >= target.n()) {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && phi.map[x] == phi.map[y] {
                return false;
            }
            if source.leq(x, y) != target.leq(phi.map[x], phi.map[y]) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive search for an order-embedding of `pattern` into `target`.
/// Returns the first embedding in a deterministic candidate order, or None
/// after the search space is exhausted, so absence is a proof.
pub fn is_subposet(pattern: &Poset, target: &Poset) -> Option<Embedding> {
    let pn = pattern.n();
    let tn = target.n();
    if pn > tn {
        return None;
    }
    // Most-constrained pattern elements first; candidates must have at
    // least as many elements above and below as the pattern element does.
    let mut order: Vec<usize> = (0..pn).collect();
    let weight = |v: usize| {
        pattern.up_mask(v).count_ones() + pattern.down_mask(v).count_ones()
    };
    order.sort_by_key(|&v| std::cmp::Reverse(weight(v)));

    let mut phi = vec![usize::MAX; pn];
    let mut used = vec![false; tn];
    fn extend(
        depth: usize,
        order: &[usize],
        pattern: &Poset,
        target: &Poset,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let p = order[depth];
        for t in 0..target.n() {
            if used[t]
                || pattern.up_mask(p).count_ones() > target.up_mask(t).count_ones()
                || pattern.down_mask(p).count_ones() > target.down_mask(t).count_ones()
            {
                continue;
            }
            let consistent = order[..depth].iter().all(|&q| {
                pattern.leq(p, q) == target.leq(t, phi[q])
                    && pattern.leq(q, p) == target.leq(phi[q], t)
            });
            if !consistent {
                continue;
            }
            phi[p] = t;
            used[t] = true;
            if extend(depth + 1, order, pattern, target, phi, used) {
                return true;
            }
            phi[p] = usize::MAX;
            used[t] = false;
        }
        false
    }
    if extend(0, &order, pattern, target, &mut phi, &mut used) {
        let embedding = Embedding { map: phi };
        debug_assert!(is_order_embedding(&embedding, pattern, target));
        Some(embedding)
    } else {
        None
    }
}

/// Checks whether `phi` is an order-embedding of lattice `source` into
/// lattice `target` that additionally maps the join of any two elements
/// covered by a common upper neighbour to the join of their images, and
/// dually for meets of two elements covering a common lower neighbour.
pub fn is_two_embedding(
    phi: &Embedding,
    source: &FiniteLattice,
    target: &FiniteLattice,
) -> bool {
    if !is_order_embedding(phi, source.poset(), target.poset()) {
        return false;
    }
    let n = source.n();
    for u in 0..n {
        let lower: Vec<usize> = source
            .covers()
            .iter()
            .filter(|&&(_, up)| up == u)
            .map(|&(lo, _)| lo)
            .collect();
        for (i, &v) in lower.iter().enumerate() {
            for &w in &lower[i + 1..] {
                if target.join(phi.map[v], phi.map[w]) != phi.map[u] {
                    return false;
                }
            }
        }
        let upper: Vec<usize> = source
            .covers()
            .iter()
            .filter(|&&(lo, _)| lo == u)
            .map(|&(_, up)| up)
            .collect();
        for (i, &v) in upper.iter().enumerate() {
            for &w in &upper[i + 1..] {
                if target.meet(phi.map[v], phi.map[w]) != phi.map[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Scans all three-element antichains and checks that in each the join of
/// all three equals the join of some two. Returns a violating antichain if
/// one exists, None otherwise.
pub fn antichain_condition(lattice: &FiniteLattice) -> Option<[usize; 3]> {
    let n = lattice.n();
    for a in 0..n {
        for b in a + 1..n {
            if lattice.poset.comparable(a, b) {
                continue;
            }
            for c in b + 1..n {
                if lattice.poset.comparable(a, c) || lattice.poset.comparable(b, c) {
                    continue;
                }
                let all = lattice.join(lattice.join(a, b), c);
                if all != lattice.join(a, b)
                    && all != lattice.join(a, c)
                    && all != lattice.join(b, c)
                {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Isomorphism via embedding search both ways; for equal sizes an
/// order-embedding is a bijection, so two of them certify isomorphism.
pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    a.n() == b.n() && is_subposet(a, b).is_some() && is_subposet(b, a).is_some()
}

/// Exhaustive check of the lattice axioms on the join/meet tables, plus
/// their compatibility with the order. Intended for tests; quadratic to
/// cubic in the element count.
pub fn verify_lattice_axioms(lattice: &FiniteLattice) -> bool {
    let n = lattice.n();
    for x in 0..n {
        for y in 0..n {
            if lattice.join(x, y) != lattice.join(y, x)
                || lattice.meet(x, y) != lattice.meet(y, x)
                || lattice.join(x, lattice.meet(x, y)) != x
                || lattice.meet(x, lattice.join(x, y)) != x
                || (lattice.leq(x, y) != (lattice.join(x, y) == y))
            {
                return false;
            }
            for z in 0..n {
                if lattice.join(lattice.join(x, y), z) != lattice.join(x, lattice.join(y, z))
                    || lattice.meet(lattice.meet(x, y), z)
                        != lattice.meet(x, lattice.meet(y, z))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Parses the two-line lattice text format:
/// `elements: <labels>` and `covers: <xy xy …>` (token `xy` = y covers x).
pub fn parse_lattice_text(text: &str) -> Result<PosetSpec, LatticeError> {
    let mut elements: Option<String> = None;
    let mut covers: Option<String> = None;
    for (num, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("elements:") {
            if elements.replace(rest.trim().to_string()).is_some() {
                return Err(LatticeError::Format {
                    line: num + 1,
                    msg: "duplicate elements line".into(),
                });
            }
        } else if let Some(rest) = trimmed.strip_prefix("covers:") {
            if covers.replace(rest.trim().to_string()).is_some() {
                return Err(LatticeError::Format {
                    line: num + 1,
                    msg: "duplicate covers line".into(),
                });
            }
        } else {
            return Err(LatticeError::Format {
                line: num + 1,
                msg: format!("expected \"elements:\" or \"covers:\", got \"{}\"", trimmed),
            });
        }
    }
    let elements = elements.ok_or(LatticeError::Format {
        line: 0,
        msg: "missing elements line".into(),
    })?;
    let covers = covers.ok_or(LatticeError::Format {
        line: 0,
        msg: "missing covers line".into(),
    })?;
    PosetSpec::new(&elements, &covers)
}

/// Renders a poset in the two-line text format; covers come from the
/// transitive reduction in sorted order, so the output is canonical.
pub fn render_lattice_text(poset: &Poset) -> String {
    let labels: String = poset.labels().iter().collect();
    let covers = poset
        .covers()
        .iter()
        .map(|&(a, b)| format!("{}{}", poset.label(a), poset.label(b)))
        .collect::<Vec<_>>()
        .join(" ");
    format!("elements: {}\ncovers: {}\n", labels, covers)
}
