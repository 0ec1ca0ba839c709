//! Shared helpers for the benchmark targets: fixture loading and a few
//! standard lattices, so each bench file stays focused on its measurements.

use std::path::PathBuf;
use sublat_core::{kr_member, FiniteLattice, KRName};

/// Absolute path to a file under the workspace `fixtures/` directory.
pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {}", path.display(), e))
}

pub fn member_lattice(name: KRName) -> FiniteLattice {
    kr_member(name).unwrap().lattice().unwrap().clone()
}
