//! Atom profiles and the boundary-chain machinery of AGP lattices.
//!
//! With the atoms `a_1, ..., a_n` listed left to right, `At(u)` is the set of
//! indices `i` with `a_i ≤ u`. In an AGP lattice it is always an interval of
//! `1..=n`; the filters `M_k`, `M_{k,k'}` and ideals `J_k` built from it give
//! the decomposition `L = J_k ∪ M_k`, and the joins `a_1 ∨ a_k` trace the left
//! boundary.

use std::fmt;

use thiserror::Error;

use crate::lattice::{ElementSet, FiniteLattice};
use crate::planar::{boundaries, check_left_right_inequality, is_maximal_chain, Realizer};
use crate::report::{CheckRecord, VerifyReport};
use crate::Violation;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AgpError {
    #[error("At({element}) = {indices:?} is not an interval")]
    NotAnInterval { element: usize, indices: Vec<usize> },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} atoms, found {found}")]
    WrongAtomCount { expected: usize, found: usize },
    #[error("lattice is not generated by its atoms")]
    NotAtomGenerated,
    #[error("invalid realizer: {0}")]
    Realizer(String),
}

/// The atoms listed left to right under a fixed realizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomOrder {
    seq: Vec<usize>,
}

impl AtomOrder {
    /// Atoms sorted by their position in the realizer's first extension,
    /// which is the left-right order on the antichain of atoms.
    pub fn from_realizer(lattice: &FiniteLattice, realizer: &Realizer) -> Self {
        let (p1, _) = realizer.positions();
        let mut seq = lattice.atoms().to_vec();
        seq.sort_by_key(|&a| p1[a]);
        AtomOrder { seq }
    }

    pub fn atoms(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// The atom `a_i`, 1-based.
    pub fn atom(&self, i: usize) -> usize {
        self.seq[i - 1]
    }

    /// Bitmask of `At(u)`: bit `i - 1` set iff `a_i ≤ u`.
    pub fn mask(&self, lattice: &FiniteLattice, u: usize) -> u64 {
        self.seq
            .iter()
            .enumerate()
            .filter(|&(_, &a)| lattice.leq(a, u))
            .fold(0, |m, (i, _)| m | (1 << i))
    }
}

/// `At(u)` as an interval `[lo, hi]` of `1..=n`, or empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomProfile {
    Empty,
    Interval { lo: usize, hi: usize },
}

impl AtomProfile {
    pub fn contains(&self, i: usize) -> bool {
        matches!(*self, AtomProfile::Interval { lo, hi } if lo <= i && i <= hi)
    }

    fn from_mask(mask: u64) -> Option<AtomProfile> {
        if mask == 0 {
            return Some(AtomProfile::Empty);
        }
        let lo = mask.trailing_zeros() as usize;
        let hi = 63 - mask.leading_zeros() as usize;
        let width = hi - lo + 1;
        let full = if width == 64 { u64::MAX } else { ((1u64 << width) - 1) << lo };
        (mask == full).then_some(AtomProfile::Interval { lo: lo + 1, hi: hi + 1 })
    }
}

impl fmt::Display for AtomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomProfile::Empty => write!(f, "∅"),
            AtomProfile::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// `At(u)`; fails when the index set has a gap.
pub fn atom_profile(lattice: &FiniteLattice, ord: &AtomOrder, u: usize) -> Result<AtomProfile, AgpError> {
    let mask = ord.mask(lattice, u);
    AtomProfile::from_mask(mask).ok_or_else(|| AgpError::NotAnInterval {
        element: u,
        indices: mask_indices(mask),
    })
}

/// Every `At(u)` is an interval.
pub fn check_profile_intervals(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<(), Violation> {
    for u in 0..lattice.len() {
        if let Err(AgpError::NotAnInterval { indices, .. }) = atom_profile(lattice, ord, u) {
            let mut witness = vec![u];
            witness.extend(indices.iter().map(|&i| ord.atom(i)));
            return Err(Violation::new(format!("At({u}) = {indices:?} has a gap"), witness));
        }
    }
    Ok(())
}

/// Monotonicity `x ≤ y ⇒ At(x) ⊆ At(y)` and the meet law
/// `At(u ∧ v) = At(u) ∩ At(v)`.
pub fn check_profile_laws(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<(), Violation> {
    let n = lattice.len();
    let masks: Vec<u64> = (0..n).map(|u| ord.mask(lattice, u)).collect();
    for x in 0..n {
        for y in 0..n {
            if lattice.leq(x, y) && masks[x] & !masks[y] != 0 {
                return Err(Violation::new("At is not monotone", vec![x, y]));
            }
            let m = lattice.meet(x, y);
            if masks[m] != masks[x] & masks[y] {
                return Err(Violation::new("At(u ∧ v) differs from At(u) ∩ At(v)", vec![x, y, m]));
            }
        }
    }
    Ok(())
}

fn check_range(ord: &AtomOrder, k: usize) -> Result<(), AgpError> {
    if k == 0 || k > ord.len() {
        return Err(AgpError::IndexOutOfRange { index: k, n: ord.len() });
    }
    Ok(())
}

/// `M_{k,k'} = {0} ∪ ⋃{↑a_i : k ≤ i ≤ k'}`.
pub fn sublattice_mkk(lattice: &FiniteLattice, ord: &AtomOrder, k: usize, k2: usize) -> Result<ElementSet, AgpError> {
    check_range(ord, k)?;
    check_range(ord, k2)?;
    let mut set = ElementSet::from_elements(lattice.len(), [lattice.bottom()]);
    for i in k..=k2 {
        set.union_with(lattice.up_set(ord.atom(i)));
    }
    Ok(set)
}

/// `M_k = {0} ∪ ⋃{↑a_i : k ≤ i ≤ n}`.
pub fn sublattice_mk(lattice: &FiniteLattice, ord: &AtomOrder, k: usize) -> Result<ElementSet, AgpError> {
    sublattice_mkk(lattice, ord, k, ord.len())
}

/// `J_k = ↓(a_1 ∨ ... ∨ a_{k-1})`; `J_1 = {0}`.
pub fn ideal_jk(lattice: &FiniteLattice, ord: &AtomOrder, k: usize) -> Result<ElementSet, AgpError> {
    check_range(ord, k)?;
    let top = lattice.join_all((1..k).map(|i| ord.atom(i)));
    Ok(lattice.down_set(top).clone())
}

/// `M_k` is a sublattice for every `k`.
pub fn verify_mk_closed(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<(), Violation> {
    for k in 1..=ord.len() {
        let set = sublattice_mk(lattice, ord, k).expect("k in range");
        if let Some((x, y)) = lattice.sublattice_witness(&set) {
            return Err(Violation::new(format!("M_{k} not closed"), vec![k, x, y]));
        }
    }
    Ok(())
}

/// `M_{k,k'}` is a sublattice for every `k < k'`.
pub fn verify_mkk_closed(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<(), Violation> {
    for k in 1..=ord.len() {
        for k2 in k + 1..=ord.len() {
            let set = sublattice_mkk(lattice, ord, k, k2).expect("k, k' in range");
            if let Some((x, y)) = lattice.sublattice_witness(&set) {
                return Err(Violation::new(format!("M_{{{k},{k2}}} not closed"), vec![k, k2, x, y]));
            }
        }
    }
    Ok(())
}

/// `L = J_k ∪ M_k` for every `k`.
pub fn verify_decomposition(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<(), Violation> {
    for k in 1..=ord.len() {
        let union = ideal_jk(lattice, ord, k)
            .expect("k in range")
            .union(&sublattice_mk(lattice, ord, k).expect("k in range"));
        if let Some(x) = (0..lattice.len()).find(|&x| !union.contains(x)) {
            return Err(Violation::new(format!("element outside J_{k} ∪ M_{k}"), vec![k, x]));
        }
    }
    Ok(())
}

/// `0, a_1, a_1 ∨ a_2, ..., a_1 ∨ a_n` with repeats collapsed.
pub fn boundary_chain(lattice: &FiniteLattice, ord: &AtomOrder) -> Vec<usize> {
    collapse(lattice, (1..=ord.len()).map(|k| lattice.join(ord.atom(1), ord.atom(k))))
}

/// `0, a_n, a_n ∨ a_{n-1}, ..., a_n ∨ a_1` with repeats collapsed.
pub fn right_boundary_chain(lattice: &FiniteLattice, ord: &AtomOrder) -> Vec<usize> {
    let n = ord.len();
    collapse(lattice, (1..=n).map(|k| lattice.join(ord.atom(n), ord.atom(n - k + 1))))
}

fn collapse(lattice: &FiniteLattice, joins: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut chain = vec![lattice.bottom()];
    for x in joins {
        if chain.last() != Some(&x) {
            chain.push(x);
        }
    }
    chain
}

/// Outcome of the boundary theorem for one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub chain: Vec<usize>,
    pub walk: Vec<usize>,
    pub monotone: bool,
    pub maximal: bool,
    pub matches_walk: bool,
    pub within_bound: bool,
}

impl BoundaryReport {
    pub fn holds(&self) -> bool {
        self.monotone && self.maximal && self.matches_walk && self.within_bound
    }
}

fn side_report(lattice: &FiniteLattice, chain: Vec<usize>, walk: Vec<usize>, n_atoms: usize) -> BoundaryReport {
    let monotone = chain.windows(2).all(|w| lattice.leq(w[0], w[1]));
    let maximal = is_maximal_chain(lattice, &chain);
    let mut a = chain.clone();
    let mut b = walk.clone();
    a.sort_unstable();
    b.sort_unstable();
    BoundaryReport {
        monotone,
        maximal,
        matches_walk: a == b,
        within_bound: chain.len() <= n_atoms + 1 && walk.len() <= n_atoms + 1,
        chain,
        walk,
    }
}

/// Left and right boundary-theorem reports against the realizer's walks.
pub fn verify_boundary_theorem(
    lattice: &FiniteLattice,
    ord: &AtomOrder,
    realizer: &Realizer,
) -> Result<(BoundaryReport, BoundaryReport), AgpError> {
    let walks = boundaries(lattice, realizer).map_err(|e| AgpError::Realizer(e.to_string()))?;
    let n = ord.len();
    Ok((
        side_report(lattice, boundary_chain(lattice, ord), walks.left_chain, n),
        side_report(lattice, right_boundary_chain(lattice, ord), walks.right_chain, n),
    ))
}

/// For an AGP lattice with exactly three atoms: `a_1 ∨ a_3 = 1`.
pub fn verify_lemma3(lattice: &FiniteLattice, ord: &AtomOrder) -> Result<bool, AgpError> {
    if ord.len() != 3 {
        return Err(AgpError::WrongAtomCount {
            expected: 3,
            found: ord.len(),
        });
    }
    if !lattice.is_atom_generated() {
        return Err(AgpError::NotAtomGenerated);
    }
    Ok(lattice.join(ord.atom(1), ord.atom(3)) == lattice.top())
}

fn record(report: &mut VerifyReport, check: &str, params: String, outcome: Result<(), Violation>) {
    report.push(CheckRecord::from_outcome(check, params, outcome));
}

/// Runs the whole AGP suite for `lattice` under `realizer`, optionally
/// repeating it on the mirror image.
pub fn verify_all(lattice: &FiniteLattice, realizer: &Realizer, with_mirror: bool) -> VerifyReport {
    let mut report = VerifyReport::default();
    suite(&mut report, lattice, realizer, "");
    if with_mirror {
        suite(&mut report, lattice, &realizer.reversed(), "mirror.");
    }
    report.finish();
    report
}

fn suite(report: &mut VerifyReport, lattice: &FiniteLattice, realizer: &Realizer, prefix: &str) {
    let name = |s: &str| format!("{prefix}{s}");
    if let Err(e) = realizer.validate(lattice.poset()) {
        record(report, &name("planar.realizer"), String::new(), Err(Violation::new(e.to_string(), vec![])));
        return;
    }
    record(report, &name("planar.realizer"), String::new(), Ok(()));
    let mut seed = lattice.atoms();
    seed.insert(lattice.bottom());
    let generated = lattice.generated_sublattice(&seed);
    let missing: Vec<usize> = (0..lattice.len()).filter(|&x| !generated.contains(x)).collect();
    record(
        report,
        &name("lattice.atom_generated"),
        String::new(),
        if missing.is_empty() { Ok(()) } else { Err(Violation::new("elements not generated by the atoms", missing)) },
    );
    record(report, &name("lemma1.left_right_inequality"), String::new(), check_left_right_inequality(lattice, realizer));

    let ord = AtomOrder::from_realizer(lattice, realizer);
    let n = ord.len();
    record(report, &name("lemma4.interval"), String::new(), check_profile_intervals(lattice, &ord));
    record(report, &name("lemma4.laws"), String::new(), check_profile_laws(lattice, &ord));

    for k in 1..=n {
        let set = sublattice_mk(lattice, &ord, k).expect("k in range");
        let outcome = match lattice.sublattice_witness(&set) {
            None => Ok(()),
            Some((x, y)) => Err(Violation::new("meet or join leaves M_k", vec![x, y])),
        };
        record(report, &name("lemma5.Mk_sublattice"), format!("k={k}"), outcome);
    }
    for k in 1..=n {
        for k2 in k + 1..=n {
            let set = sublattice_mkk(lattice, &ord, k, k2).expect("k, k' in range");
            let outcome = match lattice.sublattice_witness(&set) {
                None => Ok(()),
                Some((x, y)) => Err(Violation::new("meet or join leaves M_{k,k'}", vec![x, y])),
            };
            record(report, &name("cor6.Mkk_sublattice"), format!("k={k} k'={k2}"), outcome);
        }
    }
    for k in 1..=n {
        let union = ideal_jk(lattice, &ord, k)
            .expect("k in range")
            .union(&sublattice_mk(lattice, &ord, k).expect("k in range"));
        let outside: Vec<usize> = (0..lattice.len()).filter(|&x| !union.contains(x)).collect();
        let outcome = if outside.is_empty() { Ok(()) } else { Err(Violation::new("elements outside J_k ∪ M_k", outside)) };
        record(report, &name("lemma7.decomposition"), format!("k={k}"), outcome);
    }

    match verify_boundary_theorem(lattice, &ord, realizer) {
        Ok((left, right)) => {
            for (side, rep) in [("left", left), ("right", right)] {
                let params = format!("side={side}");
                let fail = |what: &str, w: &[usize]| Err(Violation::new(what, w.to_vec()));
                record(
                    report,
                    &name("thm8.chain_monotone"),
                    params.clone(),
                    if rep.monotone { Ok(()) } else { fail("joins a_1 ∨ a_k not increasing", &rep.chain) },
                );
                record(
                    report,
                    &name("thm8.maximal_chain"),
                    params.clone(),
                    if rep.maximal { Ok(()) } else { fail("chain is not maximal", &rep.chain) },
                );
                record(
                    report,
                    &name("thm8.equals_boundary"),
                    params.clone(),
                    if rep.matches_walk { Ok(()) } else { fail("chain differs from boundary walk", &rep.walk) },
                );
                record(
                    report,
                    &name("thm1.boundary_size"),
                    format!("{params} n={n}"),
                    if rep.within_bound { Ok(()) } else { fail("boundary longer than n + 1", &rep.walk) },
                );
            }
        }
        Err(e) => record(report, &name("thm8.boundary"), String::new(), Err(Violation::new(e.to_string(), vec![]))),
    }

    if n == 3 {
        let outcome = match verify_lemma3(lattice, &ord) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Violation::new("a_1 ∨ a_3 is not the top", ord.atoms().to_vec())),
            Err(e) => Err(Violation::new(e.to_string(), vec![])),
        };
        record(report, &name("lemma3.a1_join_a3_is_top"), String::new(), outcome);
    }
}
