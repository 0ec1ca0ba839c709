//! Exact subuniverse counting for finite binary partial algebras, the
//! batch job format that drives it, and a finite-lattice toolkit with a
//! forbidden-subposet planarity criterion.
//!
//! The central quantity is the relative subuniverse count
//! σ(A) = |Sub(A)|·2^(8−|A|), an exact dyadic rational. Lattices enter as
//! binary algebras (join and meet on incomparable pairs), where σ(L) > 83
//! forces planarity; the catalog module carries the forbidden-subposet
//! machinery behind that bound, and the generators supply the exhaustive
//! and randomized test lattices used to exercise it.

pub mod algebra;
pub mod catalog;
pub mod dyadic;
pub mod gen;
pub mod lattice;
pub mod script;

pub use algebra::{
    count_subuniverses, enumerate_subuniverses, induced_weak_subalgebra, is_closed, sigma,
    AlgebraError, Constraint, Label, PartialAlgebra, SubsetMask, Universe, MAX_COUNT_UNIVERSE,
    MAX_ENUMERATE_UNIVERSE, MAX_UNIVERSE,
};
pub use catalog::{
    is_planar, kr_member, sharpness_witness, CatalogEntry, KRName, Planarity,
    CATALOG_DECISIVE_LIMIT,
};
pub use dyadic::DyadicValue;
pub use gen::{
    concept_lattice, enumerate_lattices, random_lattice, EnumerationBudget, FormalContext,
};
pub use lattice::{
    antichain_condition, chain, count_sublattices, dual, full_algebra, is_isomorphic,
    is_order_embedding, is_subposet, is_two_embedding, lattice_from_covers, lattice_sigma,
    ordinal_sum, parse_lattice_text, render_lattice_text, verify_lattice_axioms, Embedding,
    FiniteLattice, LatticeError, Poset, PosetSpec,
};
pub use script::{
    format_result, parse_script, render_script, run_script, summarize_results, verify_script,
    Job, JobResult, ParseErrorKind, Script, ScriptError, Settings, VerificationSummary,
};
