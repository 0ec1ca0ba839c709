//! The Kelly–Rival catalog and the planarity decision built on it.
//!
//! A finite lattice is planar exactly when no member of the Kelly–Rival
//! list (the families A_n, E_n, dual E_n, F_n, G_n, H_n together with B, C,
//! D and their duals) occurs in it as a subposet. The catalog stores the
//! members small enough to matter for lattices of up to twelve elements,
//! generates A_n outright for any index the label alphabet can express,
//! and refuses — rather than guesses — a planarity verdict that would
//! depend on a member it does not hold.

use crate::lattice::{
    chain, dual, is_subposet, lattice_from_covers, ordinal_sum, Embedding, FiniteLattice,
    LatticeError, Poset, PosetSpec,
};
use std::fmt;

/// Names of catalog members: the Kelly–Rival families (A, E, F, G, H carry
/// an index; B, C, D do not) plus the auxiliary posets and lattices used by
/// the surrounding theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KRName {
    A(u32),
    B,
    DualB,
    C,
    DualC,
    D,
    DualD,
    E(u32),
    DualE(u32),
    F(u32),
    G(u32),
    H(u32),
    K5,
    Fence8,
    Crown8,
    EncapsulatedLadder,
    H0Plus,
}

impl fmt::Display for KRName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRName::A(n) => write!(f, "A_{}", n),
            KRName::B => write!(f, "B"),
            KRName::DualB => write!(f, "dual B"),
            KRName::C => write!(f, "C"),
            KRName::DualC => write!(f, "dual C"),
            KRName::D => write!(f, "D"),
            KRName::DualD => write!(f, "dual D"),
            KRName::E(n) => write!(f, "E_{}", n),
            KRName::DualE(n) => write!(f, "dual E_{}", n),
            KRName::F(n) => write!(f, "F_{}", n),
            KRName::G(n) => write!(f, "G_{}", n),
            KRName::H(n) => write!(f, "H_{}", n),
            KRName::K5 => write!(f, "K_5"),
            KRName::Fence8 => write!(f, "fence_8"),
            KRName::Crown8 => write!(f, "crown_8"),
            KRName::EncapsulatedLadder => write!(f, "encapsulated 2-ladder"),
            KRName::H0Plus => write!(f, "H_0^+"),
        }
    }
}

/// A catalog member: most are lattices, but the fences and crowns are only
/// posets.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Lattice(FiniteLattice),
    OrderOnly(Poset),
}

impl CatalogEntry {
    pub fn poset(&self) -> &Poset {
        match self {
            CatalogEntry::Lattice(l) => l.poset(),
            CatalogEntry::OrderOnly(p) => p,
        }
    }

    pub fn lattice(&self) -> Option<&FiniteLattice> {
        match self {
            CatalogEntry::Lattice(l) => Some(l),
            CatalogEntry::OrderOnly(_) => None,
        }
    }
}

/// Stored cover data, one `(labels, edges)` pair per transcribed member.
/// Edge token `xy` means y covers x.
const A0_COVERS: (&str, &str) = ("oiabcABC", "oa ob oc Ai Bi Ci aB aC bA bC cA cB");
const B_COVERS: (&str, &str) = ("oiabcdefg", "oa ob oc od ae be bf bg cf dg ei fi gi");
const C_COVERS: (&str, &str) = ("oiabcdefg", "ai bi ci da db eb ec fb gd ge og of");
const D_COVERS: (&str, &str) = ("oiabcdefg", "oa ob ac ae ad be cf dg ef eg fi gi");
const E0_COVERS: (&str, &str) = ("oiabcdefg", "ai bi ci db ea ed fd fc gb oe of og");
const E1_COVERS: (&str, &str) =
    ("oiabcdefghj", "ai bi ca da ei fb fc gc gd hd he ja of og oh oj");
const F0_COVERS: (&str, &str) = ("oiabcdefg", "ai bi ca da eb ec fe fd gc of og");
const F1_COVERS: (&str, &str) =
    ("oiabcdefghj", "oa od ab ac ah be bf cf cg dg ei fj gj hj ji");
const G0_COVERS: (&str, &str) =
    ("oiabcdefghj", "oa ob ac ad ag bd ce de df eh ej fj gj hi ji");
const H0_COVERS: (&str, &str) = ("oiabcdefgh", "oa ob oc ad bd be bh cg df dg eg fi gi hi");
const K5_COVERS: (&str, &str) =
    ("oiabcdefghjk", "oa ob oj bc bd ce cf df eg fg fh gk hk ai ji ki");
const LADDER_COVERS: (&str, &str) = ("oiabcdefgj", "oa od ab ac be bf cf cg dg ei fj gj ji");
const FENCE8_COVERS: (&str, &str) = ("abcdefgh", "ab cb cd ed ef gf gh");
const CROWN8_COVERS: (&str, &str) = ("abcdefgh", "ab cb cd ed ef gf gh ah");

fn stored_lattice(data: (&str, &str)) -> FiniteLattice {
    lattice_from_covers(&PosetSpec::new(data.0, data.1).expect("stored labels are valid"))
        .expect("stored cover data describes a lattice")
}

/// A_n for any index the label alphabet accommodates: bottom, top, and a
/// cyclically arranged middle layer of n+3 atoms and n+3 coatoms in which
/// atom k lies below coatoms k and k+1. A_0 is the eight-element boolean
/// lattice; the middle layer of A_n is a (2n+6)-crown.
fn a_family(n: u32) -> Result<FiniteLattice, LatticeError> {
    const ATOMS: &str = "abcdefghjklmnpqrstuvwxyz";
    const COATOMS: &str = "ABCDEFGHJKLMNPQRSTUVWXYZ";
    let m = n as usize + 3;
    if m > ATOMS.len() {
        return Err(LatticeError::TooLarge(2 * m + 2));
    }
    let atoms: Vec<char> = ATOMS.chars().take(m).collect();
    let coatoms: Vec<char> = COATOMS.chars().take(m).collect();
    let mut labels = String::from("oi");
    labels.extend(&atoms);
    labels.extend(&coatoms);
    let mut edges = String::new();
    for k in 0..m {
        edges.push_str(&format!(
            "o{} {}{} {}{} {}i ",
            atoms[k],
            atoms[k],
            coatoms[k],
            atoms[k],
            coatoms[(k + 1) % m],
            coatoms[k]
        ));
    }
    lattice_from_covers(&PosetSpec::new(&labels, &edges)?)
}

/// Retrieves a catalog member, building duals and A_n on demand. Family
/// indices beyond the stored data fail with NotTranscribed.
pub fn kr_member(name: KRName) -> Result<CatalogEntry, LatticeError> {
    let lat = |l: FiniteLattice| Ok(CatalogEntry::Lattice(l));
    match name {
        KRName::A(0) => lat(stored_lattice(A0_COVERS)),
        KRName::A(n) => lat(a_family(n)?),
        KRName::B => lat(stored_lattice(B_COVERS)),
        KRName::DualB => lat(dual(&stored_lattice(B_COVERS))),
        KRName::C => lat(stored_lattice(C_COVERS)),
        KRName::DualC => lat(dual(&stored_lattice(C_COVERS))),
        KRName::D => lat(stored_lattice(D_COVERS)),
        KRName::DualD => lat(dual(&stored_lattice(D_COVERS))),
        KRName::E(0) => lat(stored_lattice(E0_COVERS)),
        KRName::E(1) => lat(stored_lattice(E1_COVERS)),
        KRName::DualE(0) => lat(dual(&stored_lattice(E0_COVERS))),
        KRName::DualE(1) => lat(dual(&stored_lattice(E1_COVERS))),
        KRName::F(0) => lat(stored_lattice(F0_COVERS)),
        KRName::F(1) => lat(stored_lattice(F1_COVERS)),
        KRName::G(0) => lat(stored_lattice(G0_COVERS)),
        KRName::H(0) => lat(stored_lattice(H0_COVERS)),
        KRName::K5 => lat(stored_lattice(K5_COVERS)),
        KRName::EncapsulatedLadder => lat(stored_lattice(LADDER_COVERS)),
        KRName::Fence8 => Ok(CatalogEntry::OrderOnly(
            PosetSpec::new(FENCE8_COVERS.0, FENCE8_COVERS.1)?.poset()?,
        )),
        KRName::Crown8 => Ok(CatalogEntry::OrderOnly(
            PosetSpec::new(CROWN8_COVERS.0, CROWN8_COVERS.1)?.poset()?,
        )),
        KRName::E(_) | KRName::DualE(_) | KRName::F(_) | KRName::G(_) | KRName::H(_)
        | KRName::H0Plus => Err(LatticeError::NotTranscribed(name.to_string())),
    }
}

/// Largest lattice size at which the planarity decision is complete.
///
/// The transcribed E and F members grow by two elements per index step, so
/// E_2 and F_2 have thirteen elements; and every G_n, H_n with n ≥ 1
/// properly contains the twelve-element lattice K_5, hence also has at
/// least thirteen elements. A_n is generated for every index, so the first
/// member the catalog cannot produce has thirteen elements.
pub const CATALOG_DECISIVE_LIMIT: usize = 12;

/// The transcribed forbidden-list members in ascending size order,
/// including duals of the non-selfdual ones. A_n for n ≥ 3 is appended by
/// the caller as sizes demand; the fences, crowns, K_5, and the ladder are
/// auxiliary and deliberately absent.
fn forbidden_members() -> Vec<KRName> {
    vec![
        KRName::A(0),
        KRName::B,
        KRName::DualB,
        KRName::C,
        KRName::DualC,
        KRName::D,
        KRName::DualD,
        KRName::E(0),
        KRName::DualE(0),
        KRName::F(0),
        KRName::A(1),
        KRName::H(0),
        KRName::E(1),
        KRName::DualE(1),
        KRName::F(1),
        KRName::G(0),
        KRName::A(2),
    ]
}

/// Planarity verdict; non-planarity always carries the member found and an
/// order-embedding of it as the certificate.
#[derive(Debug, Clone)]
pub enum Planarity {
    Planar,
    NonPlanar { member: KRName, embedding: Embedding },
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar)
    }
}

/// Decides planarity by exhaustive forbidden-subposet search.
///
/// Any member found yields NonPlanar with a certificate, whatever the
/// lattice's size. A Planar verdict, by contrast, is only issued while the
/// catalog provably covers every member that could fit; beyond
/// CATALOG_DECISIVE_LIMIT elements the decision is refused instead.
pub fn is_planar(lattice: &FiniteLattice) -> Result<Planarity, LatticeError> {
    let n = lattice.n();
    let mut names: Vec<KRName> = forbidden_members();
    let mut k = 3;
    while 2 * (k as usize) + 8 <= n && (k as usize) + 3 <= 24 {
        names.push(KRName::A(k));
        k += 1;
    }
    names.sort_by_key(|name| match kr_member(*name) {
        Ok(entry) => entry.poset().n(),
        Err(_) => usize::MAX,
    });
    for name in names {
        let entry = kr_member(name)?;
        if entry.poset().n() > n {
            continue;
        }
        if let Some(embedding) = is_subposet(entry.poset(), lattice.poset()) {
            return Ok(Planarity::NonPlanar { member: name, embedding });
        }
    }
    if n > CATALOG_DECISIVE_LIMIT {
        Err(LatticeError::CatalogIncomplete(n))
    } else {
        Ok(Planarity::Planar)
    }
}

/// The n-element lattice showing the subuniverse bound for planarity is
/// tight: F_0 with an (n−9)-element chain stacked on top. It has exactly
/// 166·2^(n−9) subuniverses and is never planar.
pub fn sharpness_witness(n: usize) -> Result<FiniteLattice, LatticeError> {
    if n < 9 {
        return Err(LatticeError::WitnessTooSmall(n));
    }
    let f0 = stored_lattice(F0_COVERS);
    if n == 9 {
        return Ok(f0);
    }
    ordinal_sum(&f0, &chain(n - 9))
}
