//! M-equivalence classes of roots and the existence test for invariant
//! generalized almost complex structures.
//!
//! Two roots are M-equivalent when their coroot pairings against every root
//! agree mod 2. Pairings against the simple roots already decide this, since
//! every coroot is an integral combination of simple coroots.

use crate::error::{Error, Result};
use crate::rootsys::{FlagSpec, Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MClass {
    pub representative: Root,
    pub members: Vec<Root>,
}

impl MClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ExistenceReport {
    pub flag: FlagSpec,
    pub classes: Vec<MClass>,
    pub admits_gacs: bool,
    pub gm2: bool,
}

/// Parities of `2⟨γ,α⟩/⟨γ,γ⟩` over γ ∈ Σ, packed into bits.
pub fn signature(rs: &RootSystem, alpha: &Root) -> u64 {
    let mut s = 0u64;
    for (i, g) in rs.simple_roots().iter().enumerate() {
        if rs.coroot_pairing(g, alpha).rem_euclid(2) == 1 {
            s |= 1 << i;
        }
    }
    s
}

pub fn m_equivalent(rs: &RootSystem, alpha: &Root, beta: &Root) -> Result<bool> {
    for r in [alpha, beta] {
        if !rs.is_root(r) {
            return Err(Error::NotARoot(r.to_string()));
        }
    }
    Ok(signature(rs, alpha) == signature(rs, beta))
}

/// The congruence checked against every root rather than only Σ.
pub fn m_equivalent_over_all_roots(rs: &RootSystem, alpha: &Root, beta: &Root) -> bool {
    rs.all_roots()
        .iter()
        .all(|g| (rs.coroot_pairing(g, alpha) - rs.coroot_pairing(g, beta)).rem_euclid(2) == 0)
}

/// Partition of Π⁻\⟨Θ⟩⁻; classes ordered by their first member.
pub fn compute_classes(fs: &FlagSpec) -> Vec<MClass> {
    let rs = fs.root_system();
    let mut sigs: Vec<u64> = Vec::new();
    let mut classes: Vec<Vec<Root>> = Vec::new();
    for r in fs.complement_roots() {
        let s = signature(rs, r);
        match sigs.iter().position(|&t| t == s) {
            Some(k) => classes[k].push(r.clone()),
            None => {
                sigs.push(s);
                classes.push(vec![r.clone()]);
            }
        }
    }
    classes
        .into_iter()
        .map(|members| MClass { representative: members[0].clone(), members })
        .collect()
}

pub fn decide_existence(fs: &FlagSpec) -> ExistenceReport {
    let classes = compute_classes(fs);
    let admits_gacs = classes.iter().all(|c| c.len() % 2 == 0);
    let gm2 = fs.is_maximal() && admits_gacs && classes.iter().any(|c| c.len() == 2);
    ExistenceReport { flag: fs.clone(), classes, admits_gacs, gm2 }
}
