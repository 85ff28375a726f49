//! Recovering `K_1` and the placement of `δ` by exhaustive search.
//!
//! `K_1` is identified among the four-atom AGP lattices of a given size by
//! a chain of constraints, each counted separately so that an empty result
//! names the first constraint nothing survives:
//!
//! 1. exactly two elements are not joins of atoms (`0` is the empty join);
//! 2. they are `b1 = (a1 ∨ a2) ∧ (a2 ∨ a3)` and `b2 = (a2 ∨ a3) ∧ (a3 ∨ a4)`;
//! 3. with `d1 = a1 ∨ a2`, `d2 = a3 ∨ a4`, `i = 1`, some `c` has
//!    `a1 ∨ c = d1 ∨ c = i` and `a4 ∨ c = d2 ∨ c = i`, and an automorphism
//!    reverses the atoms and fixes `c`;
//! 4. the six-element step extends it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    check_automorphism, core_extension, extend_mirror, insert_element, join_changes, meet_witness,
    mirror_automorphism, Anchors, Core, DeltaRule, KError, KFixture, NewElements, Role, ANCHOR_NAMES,
};
use crate::agp::AtomOrder;
use crate::canon::canonical_form;
use crate::doc::LatticeDoc;
use crate::enumerate::{enumerate, EnumSpec};
use crate::lattice::{ElementSet, FiniteLattice};
use crate::planar::{find_realizer, is_planar};

/// Number of lattices surviving each constraint at one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateStage {
    pub constraint: &'static str,
    pub survivors: usize,
}

/// A lattice that passed every constraint, with its anchors.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub lattice: FiniteLattice,
    pub names: BTreeMap<&'static str, usize>,
}

#[derive(Clone, Debug, Default)]
pub struct K1Search {
    /// Per size: the census size and the survivors after each constraint.
    pub stages: BTreeMap<usize, (usize, Vec<CandidateStage>)>,
    pub candidates: Vec<Candidate>,
}

impl K1Search {
    /// The first constraint with no survivors at `size`.
    pub fn tightest(&self, size: usize) -> Option<&'static str> {
        let (_, stages) = self.stages.get(&size)?;
        stages.iter().find(|s| s.survivors == 0).map(|s| s.constraint)
    }

    pub fn log(&self) -> Value {
        let sizes: Vec<Value> = self
            .stages
            .iter()
            .map(|(size, (census, stages))| {
                json!({
                    "size": size,
                    "census": census,
                    "stages": stages.iter().map(|s| json!({"constraint": s.constraint, "survivors": s.survivors})).collect::<Vec<_>>(),
                    "tightest_failing": self.tightest(*size),
                })
            })
            .collect();
        json!({ "sizes": sizes, "candidates": self.candidates.len() })
    }
}

const C1: &str = "exactly two elements are not joins of atoms";
const C2: &str = "the non-joins are b1 = (a1∨a2)∧(a2∨a3) and b2 = (a2∨a3)∧(a3∨a4)";
const C3: &str = "an element c with a1∨c = d1∨c = i = a4∨c = d2∨c, fixed by the atom-reversing automorphism";
const C4: &str = "the six-element step extends the lattice";

fn joins_of_atoms(l: &FiniteLattice, atoms: &[usize]) -> ElementSet {
    let mut out = ElementSet::new(l.len());
    for mask in 0u32..(1 << atoms.len()) {
        let members = atoms.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &a)| a);
        out.insert(l.join_all(members));
    }
    out
}

/// Runs the constraint chain over all four-atom AGP lattices of `size`
/// elements.
pub fn k1_candidates(size: usize) -> Result<(usize, Vec<CandidateStage>, Vec<Candidate>), KError> {
    let mut spec = EnumSpec::new(4, size);
    spec.size_guard = spec.size_guard.max(size);
    let census = enumerate(&spec).map_err(|e| KError::Fixture(e.to_string()))?;
    let pool: Vec<&FiniteLattice> = census.lattices.iter().filter(|l| l.len() == size).collect();
    let total = pool.len();

    let mut c1 = Vec::new();
    for l in pool {
        let r = find_realizer(l).expect("census members are planar");
        let ord = AtomOrder::from_realizer(l, &r);
        let atoms: Vec<usize> = ord.atoms().to_vec();
        let joins = joins_of_atoms(l, &atoms);
        if l.len() - joins.len() == 2 {
            c1.push((l, atoms, joins));
        }
    }

    let mut c2 = Vec::new();
    for (l, atoms, joins) in &c1 {
        let [a1, a2, a3, a4] = [atoms[0], atoms[1], atoms[2], atoms[3]];
        let b1 = l.meet(l.join(a1, a2), l.join(a2, a3));
        let b2 = l.meet(l.join(a2, a3), l.join(a3, a4));
        if b1 != b2 && !joins.contains(b1) && !joins.contains(b2) {
            c2.push((*l, atoms.clone(), b1, b2));
        }
    }

    let mut c3 = Vec::new();
    for (l, atoms, b1, b2) in &c2 {
        let Some(mirror) = mirror_automorphism(l, atoms) else {
            continue;
        };
        let [a1, a2, a3, a4] = [atoms[0], atoms[1], atoms[2], atoms[3]];
        let (d1, d2, top) = (l.join(a1, a2), l.join(a3, a4), l.top());
        for c in 0..l.len() {
            let ok = c != top
                && mirror[c] == c
                && [a1, d1, a4, d2].iter().all(|&x| l.join(x, c) == top);
            if ok {
                let names = BTreeMap::from([
                    ("0", l.bottom()),
                    ("a1", a1),
                    ("a2", a2),
                    ("a3", a3),
                    ("a4", a4),
                    ("b1", *b1),
                    ("b2", *b2),
                    ("d1", d1),
                    ("c", c),
                    ("d2", d2),
                    ("i", top),
                ]);
                c3.push((Candidate { lattice: (*l).clone(), names }, mirror.clone()));
            }
        }
    }

    let c3_count = c3.len();
    let c4: Vec<Candidate> = c3
        .into_par_iter()
        .filter(|(cand, mirror)| {
            let anchors = anchors_of(&cand.names);
            sixth_element_search(&cand.lattice, &anchors, mirror).map_or(false, |s| !s.survivors.is_empty())
        })
        .map(|(cand, _)| cand)
        .collect();

    let stages = vec![
        CandidateStage { constraint: C1, survivors: c1.len() },
        CandidateStage { constraint: C2, survivors: c2.len() },
        CandidateStage { constraint: C3, survivors: c3_count },
        CandidateStage { constraint: C4, survivors: c4.len() },
    ];
    Ok((total, stages, c4))
}

fn anchors_of(names: &BTreeMap<&'static str, usize>) -> Anchors {
    Anchors {
        d1: names["d1"],
        c: names["c"],
        d2: names["d2"],
        b1: names["b1"],
        b2: names["b2"],
    }
}

/// Searches sizes from 10 upward (at most 12) for `K_1` and returns the
/// fixture for the smallest size with a survivor, choosing the least
/// canonical form among survivors.
pub fn reconstruct_k1() -> Result<(KFixture, K1Search), KError> {
    let mut search = K1Search::default();
    for size in 10..=12 {
        let (total, stages, candidates) = k1_candidates(size)?;
        search.stages.insert(size, (total, stages));
        if !candidates.is_empty() {
            search.candidates = candidates;
            break;
        }
    }
    if search.candidates.is_empty() {
        let tightest = search.tightest(10).unwrap_or(C4).to_string();
        return Err(KError::NoCandidate { tightest });
    }
    let chosen = search
        .candidates
        .iter()
        .min_by_key(|c| canonical_form(&c.lattice))
        .expect("nonempty");
    let mut fixture = fixture_from_candidate(chosen, search.log())?;
    let sixth = resolve_sixth_element(&fixture)?;
    fixture.doc.meta = Some(json!({
        "reconstruction": search.log(),
        "sixth_element": sixth.log(),
    }));
    Ok((fixture, search))
}

/// Relabels so the named elements come first in the standard order and
/// writes the fixture document.
fn fixture_from_candidate(cand: &Candidate, log: Value) -> Result<KFixture, KError> {
    let l = &cand.lattice;
    let mut order: Vec<usize> = Vec::new();
    for name in ANCHOR_NAMES {
        let x = cand.names[name];
        if !order.contains(&x) {
            order.push(x);
        }
    }
    let rest: Vec<usize> = (0..l.len()).filter(|x| !order.contains(x)).collect();
    order.extend(rest);
    let mut perm = vec![0; l.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let relabeled = l.relabel(&perm);
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    for name in ANCHOR_NAMES {
        labels.entry(perm[cand.names[name]]).or_insert_with(|| name.to_string());
    }
    let realizer = find_realizer(&relabeled).expect("candidate is planar");
    let doc = LatticeDoc::from_lattice(&relabeled)
        .with_realizer(&relabeled, &realizer)
        .with_labels(labels)
        .with_meta(log);
    KFixture::from_doc(doc)
}

/// Outcome of placing `δ` over all antichain pairs.
#[derive(Clone, Debug, Default)]
pub struct SixthElementSearch {
    pub placements: usize,
    pub filters: Vec<(&'static str, usize)>,
    /// Surviving placements, by role when every cover has one.
    pub survivors: Vec<Result<DeltaRule, (Vec<usize>, Vec<usize>)>>,
    /// Survivors with `δ < φ`, the relation printed alongside the step.
    pub with_delta_below_phi: usize,
    /// Survivors where `δ = ε ∧ φ`.
    pub with_delta_meet: usize,
    /// Placements with `δ < φ` that are lattices at all, and how many of
    /// those pass each later filter.
    pub delta_below_phi_filters: Vec<(&'static str, usize)>,
}

impl SixthElementSearch {
    /// The unique surviving placement as a rule.
    pub fn rule(&self) -> Result<DeltaRule, KError> {
        match self.survivors.as_slice() {
            [Ok(rule)] => Ok(rule.clone()),
            [Err((a, b))] => Err(KError::SixthElement(format!("survivor {a:?} / {b:?} is not expressible in roles"))),
            [] => Err(KError::SixthElement("no placement survives".into())),
            many => Err(KError::SixthElement(format!("{} placements survive", many.len()))),
        }
    }

    pub fn log(&self) -> Value {
        json!({
            "placements": self.placements,
            "filters": self.filters.iter().map(|(f, n)| json!({"filter": f, "survivors": n})).collect::<Vec<_>>(),
            "survivors": self.survivors.iter().map(|s| match s {
                Ok(rule) => json!(rule.to_string()),
                Err((a, b)) => json!({"lower": a, "upper": b}),
            }).collect::<Vec<_>>(),
            "delta_below_phi": self.with_delta_below_phi,
            "delta_is_meet_of_epsilon_phi": self.with_delta_meet,
            "delta_below_phi_filters": self.delta_below_phi_filters.iter().map(|(f, n)| json!({"filter": f, "survivors": n})).collect::<Vec<_>>(),
        })
    }
}

const FILTERS: [&str; 7] = [
    "lattice",
    "planar",
    "four atoms and atom generated",
    "old meets preserved",
    "defining joins and meets of α, β, γ, ε, φ hold",
    "every changed join becomes α or β",
    "mirror symmetric",
];

fn antichains(l: &FiniteLattice, max_len: usize) -> Vec<Vec<usize>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    while let Some(a) = stack.pop() {
        if a.len() < max_len {
            let last = *a.last().expect("nonempty");
            for y in last + 1..n {
                if a.iter().all(|&x| !l.comparable(x, y)) {
                    let mut b = a.clone();
                    b.push(y);
                    stack.push(b);
                }
            }
        }
        out.push(a);
    }
    out.sort();
    out
}

fn roles_of(anchors: &Anchors, core: &Core) -> Vec<(usize, Role)> {
    vec![
        (anchors.d1, Role::D1),
        (anchors.c, Role::C),
        (anchors.d2, Role::D2),
        (anchors.b1, Role::B1),
        (anchors.b2, Role::B2),
        (core.alpha, Role::Alpha),
        (core.beta, Role::Beta),
        (core.gamma, Role::Gamma),
        (core.epsilon, Role::Epsilon),
        (core.phi, Role::Phi),
    ]
}

/// How many of the seven filters `next` passes, in order.
fn passes(prev: &FiniteLattice, anchors: &Anchors, core: &Core, next: &FiniteLattice, mirror: &[usize]) -> usize {
    if !is_planar(next) {
        return 1;
    }
    if next.atoms().len() != 4 || !next.is_atom_generated() {
        return 2;
    }
    if meet_witness(prev, next).is_some() {
        return 3;
    }
    let a = anchors;
    let defining = next.join(a.d1, a.c) == core.alpha
        && next.join(a.d2, a.c) == core.beta
        && next.meet(core.alpha, core.beta) == core.gamma
        && next.meet(a.d1, core.gamma) == core.epsilon
        && next.meet(core.gamma, a.d2) == core.phi
        && next.lt(a.b1, core.epsilon)
        && next.lt(core.epsilon, a.d1)
        && next.lt(a.b2, core.phi)
        && next.lt(core.phi, a.d2);
    if !defining {
        return 4;
    }
    if join_changes(prev, next).iter().any(|&(_, _, j)| j != core.alpha && j != core.beta) {
        return 5;
    }
    let new = NewElements {
        alpha: core.alpha,
        beta: core.beta,
        gamma: core.gamma,
        delta: core.phi + 1,
        epsilon: core.epsilon,
        phi: core.phi,
    };
    if check_automorphism(next, &extend_mirror(mirror, &new)).is_err() {
        return 6;
    }
    7
}

/// Tries every placement of `δ` as a new element with lower covers `A` and
/// upper covers `B` (antichains of at most three and two elements of the
/// five-element core extension, `A < B`) and applies the filters in order.
pub fn sixth_element_search(prev: &FiniteLattice, anchors: &Anchors, mirror: &[usize]) -> Result<SixthElementSearch, KError> {
    let core = core_extension(prev, anchors).map_err(|constraint| KError::ExtensionInconsistent { step: 1, constraint })?;
    let l = &core.lattice;
    let lows = antichains(l, 3);
    let highs = antichains(l, 2);
    let pairs: Vec<(&Vec<usize>, &Vec<usize>)> = lows
        .iter()
        .flat_map(|a| highs.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.iter().all(|&x| b.iter().all(|&y| l.lt(x, y))))
        .collect();

    let delta = core.phi + 1;
    let results: Vec<(usize, bool, bool, &Vec<usize>, &Vec<usize>)> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let next = insert_element(l, a, b).ok()?;
            let depth = passes(prev, anchors, &core, &next, mirror);
            let below_phi = next.lt(delta, core.phi);
            let is_meet = next.meet(core.epsilon, core.phi) == delta;
            Some((depth, below_phi, is_meet, a, b))
        })
        .collect();

    let mut search = SixthElementSearch {
        placements: pairs.len(),
        ..SixthElementSearch::default()
    };
    for (k, name) in FILTERS.iter().enumerate() {
        search.filters.push((name, results.iter().filter(|r| r.0 >= k + 1).count()));
        search
            .delta_below_phi_filters
            .push((name, results.iter().filter(|r| r.1 && r.0 >= k + 1).count()));
    }
    let roles = roles_of(anchors, &core);
    let role = |x: usize| roles.iter().find(|(y, _)| *y == x).map(|&(_, r)| r);
    for &(depth, below_phi, is_meet, a, b) in &results {
        if depth < FILTERS.len() {
            continue;
        }
        search.with_delta_below_phi += usize::from(below_phi);
        search.with_delta_meet += usize::from(is_meet);
        let lower: Option<Vec<Role>> = a.iter().map(|&x| role(x)).collect();
        let upper: Option<Vec<Role>> = b.iter().map(|&x| role(x)).collect();
        search.survivors.push(match (lower, upper) {
            (Some(mut lower), Some(mut upper)) => {
                lower.sort();
                upper.sort();
                Ok(DeltaRule { lower, upper })
            }
            _ => Err((a.clone(), b.clone())),
        });
    }
    Ok(search)
}

/// Runs [`sixth_element_search`] on the fixture's `K_1`.
pub fn resolve_sixth_element(fixture: &KFixture) -> Result<SixthElementSearch, KError> {
    let anchors = Anchors {
        d1: fixture.anchor("d1"),
        c: fixture.anchor("c"),
        d2: fixture.anchor("d2"),
        b1: fixture.anchor("b1"),
        b2: fixture.anchor("b2"),
    };
    sixth_element_search(&fixture.lattice, &anchors, &fixture.mirror()?)
}

/// Every anchor choice in `k` admitting a step: `c` fixed by the mirror,
/// `d1 ≠ d2 = mirror(d1)`, `b1 = d1 ∧ c` and `b2 = c ∧ d2`, together with
/// the surviving `δ` placements. Used to check that [`Anchors::advance`] is
/// the only way to continue.
pub fn anchor_search(k: &super::KLattice) -> Vec<(Anchors, Vec<DeltaRule>)> {
    let l = &k.lattice;
    let n = l.len();
    let tuples: Vec<Anchors> = (0..n)
        .filter(|&c| k.mirror[c] == c)
        .flat_map(|c| (0..n).map(move |d1| (c, d1)))
        .filter(|&(_, d1)| k.mirror[d1] != d1)
        .map(|(c, d1)| {
            let d2 = k.mirror[d1];
            Anchors {
                d1,
                c,
                d2,
                b1: l.meet(d1, c),
                b2: l.meet(c, d2),
            }
        })
        .collect();
    tuples
        .into_par_iter()
        .filter_map(|a| {
            let s = sixth_element_search(l, &a, &k.mirror).ok()?;
            let rules: Vec<DeltaRule> = s.survivors.into_iter().filter_map(Result::ok).collect();
            (!rules.is_empty()).then_some((a, rules))
        })
        .collect()
}
