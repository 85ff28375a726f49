//! Exhaustive enumeration of AGP lattices up to isomorphism.
//!
//! A finite lattice with at least two atoms is its meet-semilattice `S = L - {1}`
//! plus a new top above the (at least two) maximal elements of `S`. The
//! search grows `S` from `0` and the atoms by adding one new maximal element
//! at a time. The new element's down-set is an order ideal `D ≠ {0}` such that
//! `D ∩ ↓y` has a greatest element for every `y`, which keeps `S` a
//! meet-semilattice. Every down-closed subset of a meet-semilattice is one,
//! so each `S` is reached. Dimension at most two is hereditary and survives
//! adding a top, so it prunes every level. Levels are deduplicated by
//! canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::agp::verify_all;
use crate::canon::{canonical_form, canonical_labeling, CanonicalForm};
use crate::lattice::{FiniteLattice, Poset};
use crate::planar::{find_realizer, is_planar_poset};
use crate::report::{CheckRecord, VerifyReport};
use crate::Violation;

/// Default ceiling on `max_size` without an explicit override.
pub const DEFAULT_SIZE_GUARD: usize = 14;
/// Default number of candidate extensions the search may examine.
pub const DEFAULT_BUDGET: u64 = 20_000_000;
pub const BUDGET_ENV: &str = "AGPLAT_SEARCH_BUDGET";

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("search budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("max_size {max_size} exceeds the guard {guard}; raise the guard explicitly")]
    SizeGuard { max_size: usize, guard: usize },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub n_atoms: usize,
    pub max_size: usize,
    pub require_planar: bool,
    pub require_atom_generated: bool,
    pub size_guard: usize,
    pub budget: u64,
}

impl EnumSpec {
    pub fn new(n_atoms: usize, max_size: usize) -> Self {
        EnumSpec {
            n_atoms,
            max_size,
            require_planar: true,
            require_atom_generated: true,
            size_guard: DEFAULT_SIZE_GUARD,
            budget: budget_from_env(),
        }
    }

    fn validate(&self) -> Result<(), EnumError> {
        if self.n_atoms == 0 {
            return Err(EnumError::InvalidSpec("n_atoms must be at least 1".into()));
        }
        if self.max_size < self.n_atoms + 2 {
            return Err(EnumError::InvalidSpec(format!(
                "max_size must be at least n_atoms + 2 = {}",
                self.n_atoms + 2
            )));
        }
        if self.max_size > self.size_guard {
            return Err(EnumError::SizeGuard {
                max_size: self.max_size,
                guard: self.size_guard,
            });
        }
        if self.max_size > 64 {
            return Err(EnumError::InvalidSpec("max_size above 64 is not supported".into()));
        }
        Ok(())
    }
}

/// The budget from `AGPLAT_SEARCH_BUDGET`, or the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, Default)]
pub struct Census {
    /// Representatives in canonical labeling, ordered by (size, canonical form).
    pub lattices: Vec<FiniteLattice>,
    pub forms: Vec<CanonicalForm>,
    pub counts_by_size: BTreeMap<usize, usize>,
    pub candidates_examined: u64,
}

impl Census {
    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }
}

/// A meet-semilattice under construction: down-set masks including self.
#[derive(Clone, Debug)]
struct Semi {
    down: Vec<u64>,
}

impl Semi {
    fn len(&self) -> usize {
        self.down.len()
    }

    fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, &d) in self.down.iter().enumerate() {
            let below = d & !(1 << x);
            for y in bits(below) {
                let strictly_between = bits(below).any(|z| z != y && self.down[z] & (1 << y) != 0);
                if !strictly_between {
                    out.push((y, x));
                }
            }
        }
        out
    }

    fn poset(&self) -> Poset {
        Poset::from_relations(self.len(), &self.covers())
            .expect("semilattice masks are acyclic")
            .0
    }

    fn with(&self, ideal: u64) -> Semi {
        let x = self.len();
        let mut down = self.down.clone();
        down.push(ideal | (1 << x));
        Semi { down }
    }

    fn relabel(&self, perm: &[usize]) -> Semi {
        let mut down = vec![0u64; self.len()];
        for (x, &d) in self.down.iter().enumerate() {
            down[perm[x]] = bits(d).fold(0, |m, y| m | (1 << perm[y]));
        }
        Semi { down }
    }

    fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| !self.down.iter().enumerate().any(|(y, &d)| y != x && d & (1 << x) != 0))
            .collect()
    }

    /// Whether `ideal ∩ ↓y` has a greatest element for every `y`.
    fn meets_exist(&self, ideal: u64) -> bool {
        self.down.iter().all(|&dy| {
            let common = ideal & dy;
            bits(common).any(|z| self.down[z] == common)
        })
    }

    /// Adds a top and builds the lattice.
    fn complete(&self) -> FiniteLattice {
        let n = self.len();
        let mut pairs = self.covers();
        pairs.extend(self.maximal().into_iter().map(|m| (m, n)));
        FiniteLattice::from_covers(n + 1, &pairs).expect("semilattice plus top is a lattice")
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Order ideals generated by nonempty antichains, excluding `{0}`.
fn ideals(s: &Semi) -> Vec<u64> {
    let n = s.len();
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, u64, u64)> = vec![(0, 0, 0)];
    // (next index, antichain mask, generated ideal)
    while let Some((next, anti, ideal)) = stack.pop() {
        if anti != 0 && ideal != 1 {
            out.insert(ideal);
        }
        for x in next..n {
            let comparable = bits(anti).any(|y| s.down[x] & (1 << y) != 0 || s.down[y] & (1 << x) != 0);
            if !comparable {
                stack.push((x + 1, anti | (1 << x), ideal | s.down[x]));
            }
        }
    }
    out.into_iter().collect()
}

/// Canonical form plus a canonical representative that keeps the bottom at
/// index 0 (the ideal masks rely on it).
fn canonical(s: &Semi) -> (CanonicalForm, Semi) {
    let (form, perm) = canonical_labeling(&s.poset());
    let bottom = perm[0];
    let shifted: Vec<usize> = perm
        .iter()
        .map(|&p| match p.cmp(&bottom) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => p + 1,
            std::cmp::Ordering::Greater => p,
        })
        .collect();
    (form, s.relabel(&shifted))
}

pub fn enumerate(spec: &EnumSpec) -> Result<Census, EnumError> {
    spec.validate()?;
    let examined = AtomicU64::new(0);
    let mut census = Census::default();
    let mut found: BTreeMap<(usize, CanonicalForm), FiniteLattice> = BTreeMap::new();

    if spec.n_atoms == 1 {
        // The only lattice generated by a single atom (with 0 as empty join).
        let l = FiniteLattice::chain(2);
        found.insert((2, canonical_form(&l)), l);
    } else {
        let n = spec.n_atoms;
        let mut start = vec![1u64];
        start.extend((1..=n).map(|a| 1 | (1u64 << a)));
        let mut level: BTreeMap<CanonicalForm, Semi> = BTreeMap::new();
        let (form, semi) = canonical(&Semi { down: start });
        level.insert(form, semi);

        while !level.is_empty() {
            for semi in level.values() {
                if semi.maximal().len() < 2 {
                    continue;
                }
                let l = semi.complete();
                if spec.require_atom_generated && !l.is_atom_generated() {
                    continue;
                }
                let (form, perm) = canonical_labeling(l.poset());
                found.entry((l.len(), form)).or_insert_with(|| l.relabel(&perm));
            }
            if level.values().next().map_or(0, Semi::len) + 1 >= spec.max_size {
                break;
            }
            let children: Vec<Vec<(CanonicalForm, Semi)>> = level
                .values()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|semi| {
                    let mut out = Vec::new();
                    for ideal in ideals(semi) {
                        if examined.fetch_add(1, Ordering::Relaxed) >= spec.budget {
                            return Err(EnumError::BudgetExceeded { budget: spec.budget });
                        }
                        if !semi.meets_exist(ideal) {
                            continue;
                        }
                        let child = semi.with(ideal);
                        if spec.require_planar && !is_planar_poset(&child.poset()) {
                            continue;
                        }
                        out.push(canonical(&child));
                    }
                    Ok(out)
                })
                .collect::<Result<_, _>>()?;
            let mut next = BTreeMap::new();
            for (form, semi) in children.into_iter().flatten() {
                next.entry(form).or_insert(semi);
            }
            level = next;
        }
    }

    for ((size, form), lattice) in found {
        if spec.require_planar && find_realizer(&lattice).is_err() {
            continue;
        }
        if lattice.atoms().len() != spec.n_atoms || size > spec.max_size {
            continue;
        }
        *census.counts_by_size.entry(size).or_default() += 1;
        census.forms.push(form);
        census.lattices.push(lattice);
    }
    census.candidates_examined = examined.into_inner();
    Ok(census)
}

/// Runs the AGP suite, with mirror, on every census member.
pub fn verify_census(census: &Census) -> VerifyReport {
    let reports: Vec<VerifyReport> = census
        .lattices
        .par_iter()
        .map(|l| match find_realizer(l) {
            Ok(r) => verify_all(l, &r, true),
            Err(e) => {
                let mut rep = VerifyReport::default();
                rep.push(CheckRecord::fail("planar.realizer", "", Violation::new(e.to_string(), vec![])));
                rep
            }
        })
        .collect();
    let mut out = VerifyReport::default();
    for (i, rep) in reports.into_iter().enumerate() {
        out.absorb(&format!("lattice#{i}."), rep);
    }
    out
}
