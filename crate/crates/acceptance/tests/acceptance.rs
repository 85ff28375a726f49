//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p agplat-acceptance --test acceptance -- --nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use agplat::agp::{boundary_chain, right_boundary_chain, sublattice_mk, sublattice_mkk, ideal_jk, verify_all, AtomOrder};
use agplat::enumerate::{enumerate, EnumSpec};
use agplat::kfamily::{certify_theorem_size, construct_family, KFixture};
use agplat::planar::{check_left_right_inequality, find_realizer, is_planar};
use agplat::ElementSet;
use common::{brute_isomorphic, corpus, random_lattices, Oracle};
use rand::rngs::StdRng;
use rand::SeedableRng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, ok: String) -> Outcome {
    if problems.is_empty() {
        Outcome { pass: true, detail: ok }
    } else {
        let shown: Vec<&str> = problems.iter().take(5).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!("{} problem(s): {}", problems.len(), shown.join("; ")),
        }
    }
}

fn within(problems: &mut Vec<String>, start: Instant, limit: Duration) {
    let t = start.elapsed();
    if t > limit {
        problems.push(format!("took {t:.2?}, limit {limit:?}"));
    }
}

fn enumeration_counts() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let two = enumerate(&EnumSpec::new(2, 8)).expect("census");
    if two.len() != 1 || two.lattices[0].len() != 4 {
        problems.push(format!("2 atoms: {} lattices, sizes {:?}", two.len(), two.counts_by_size));
    }
    let three = enumerate(&EnumSpec::new(3, 10)).expect("census");
    if three.len() != 4 {
        problems.push(format!("3 atoms: {} lattices", three.len()));
    }
    for (i, a) in three.lattices.iter().enumerate() {
        for (j, b) in three.lattices.iter().enumerate().skip(i + 1) {
            if brute_isomorphic(a, b) {
                problems.push(format!("3 atoms: #{i} and #{j} are isomorphic"));
            }
        }
    }
    within(&mut problems, start, Duration::from_secs(10));
    outcome(problems, format!("1 and {} lattices in {:.2?}", three.len(), start.elapsed()))
}

fn three_atom_outer_join() -> Outcome {
    let mut problems = Vec::new();
    let three = enumerate(&EnumSpec::new(3, 12)).expect("census");
    for (i, l) in three.lattices.iter().enumerate() {
        let r = find_realizer(l).expect("planar");
        let ord = AtomOrder::from_realizer(l, &r);
        let o = Oracle::new(l);
        let top = (0..o.n).find(|&t| (0..o.n).all(|x| o.le[x][t]));
        if o.join(ord.atom(1), ord.atom(3)) != top {
            problems.push(format!("#{i}: a1 ∨ a3 is not the top"));
        }
    }
    outcome(problems, format!("{} lattices", three.len()))
}

fn boundaries(start: Instant) -> Outcome {
    let mut problems = Vec::new();
    for e in corpus() {
        let l = &e.lattice;
        let r = find_realizer(l).expect("corpus is planar");
        let ord = AtomOrder::from_realizer(l, &r);
        let o = Oracle::new(l);
        let left: BTreeSet<usize> = boundary_chain(l, &ord).into_iter().collect();
        let right: BTreeSet<usize> = right_boundary_chain(l, &ord).into_iter().collect();
        let (want_left, want_right) = (o.left_boundary(&r.ext1), o.right_boundary(&r.ext1));
        if want_left.len() > e.atoms + 1 || want_right.len() > e.atoms + 1 {
            problems.push(format!("{}: boundary longer than n+1", e.name));
        }
        if left != want_left {
            problems.push(format!("{}: left chain {:?} vs boundary {:?}", e.name, left, want_left));
        }
        if right != want_right {
            problems.push(format!("{}: right chain {:?} vs boundary {:?}", e.name, right, want_right));
        }
    }
    within(&mut problems, start, Duration::from_secs(60));
    outcome(problems, format!("{} lattices in {:.2?}", corpus().len(), start.elapsed()))
}

fn closed(o: &Oracle, s: &ElementSet) -> bool {
    let items = s.to_vec();
    items.iter().all(|&x| {
        items
            .iter()
            .all(|&y| s.contains(o.meet(x, y).unwrap()) && s.contains(o.join(x, y).unwrap()))
    })
}

fn section_suite() -> Outcome {
    let mut problems = Vec::new();
    let mut sets = 0usize;
    for e in corpus() {
        let l = &e.lattice;
        let r = find_realizer(l).expect("corpus is planar");
        let report = verify_all(l, &r, true);
        for f in report.failures() {
            if ["lemma4", "lemma5", "cor6", "lemma7"].iter().any(|p| f.check.trim_start_matches("mirror.").starts_with(p)) {
                problems.push(format!("{}: {} [{}]", e.name, f.check, f.params));
            }
        }
        let ord = AtomOrder::from_realizer(l, &r);
        let o = Oracle::new(l);
        let n = ord.len();
        for u in 0..l.len() {
            let at: Vec<usize> = (1..=n).filter(|&i| o.le[ord.atom(i)][u]).collect();
            if at.windows(2).any(|w| w[1] != w[0] + 1) {
                problems.push(format!("{}: At({u}) = {:?} is not an interval", e.name, at));
            }
        }
        for k in 1..=n {
            for k2 in k..=n {
                let s = sublattice_mkk(l, &ord, k, k2).expect("range");
                sets += 1;
                if !closed(&o, &s) {
                    problems.push(format!("{}: M_{{{k},{k2}}} not closed", e.name));
                }
            }
            let m = sublattice_mk(l, &ord, k).expect("range");
            let j = ideal_jk(l, &ord, k).expect("range");
            if m.union(&j).len() != l.len() {
                problems.push(format!("{}: J_{k} ∪ M_{k} misses elements", e.name));
            }
        }
    }
    outcome(problems, format!("{} lattices, {sets} sublattices", corpus().len()))
}

fn family_sizes() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let fx = KFixture::builtin();
    let fam = construct_family(&fx, 20).expect("family");
    let sizes: Vec<usize> = fam.iter().map(|k| k.lattice.len()).collect();
    if sizes[0] != 10 {
        problems.push(format!("|K_1| = {}, expected 10", sizes[0]));
    }
    if sizes[1] != 16 {
        problems.push(format!("|K_2| = {}, expected 16", sizes[1]));
    }
    let off: Vec<usize> = fam.iter().filter(|k| k.lattice.len() != 6 * k.n + 4).map(|k| k.n).collect();
    if !off.is_empty() {
        problems.push(format!("|K_n| ≠ 6n+4 for {} of 20 members (observed 6n+{})", off.len(), sizes[0] - 6));
    }
    for k in &fam {
        let l = &k.lattice;
        if l.atoms().len() != 4 {
            problems.push(format!("K_{} has {} atoms", k.n, l.atoms().len()));
        }
        if find_realizer(l).is_err() {
            problems.push(format!("K_{} is not planar", k.n));
        }
        if !l.is_atom_generated() {
            problems.push(format!("K_{} is not atom-generated", k.n));
        }
    }
    for k in [9, 10, 100] {
        match certify_theorem_size(&fx, k, 4) {
            Ok(c) if c.holds() && c.lattice.len() > k => {}
            Ok(c) => problems.push(format!("certificate for k={k} fails:\n{}", c.report.render_text())),
            Err(e) => problems.push(format!("certificate for k={k}: {e}")),
        }
    }
    within(&mut problems, start, Duration::from_secs(120));
    outcome(problems, format!("sizes {:?} in {:.2?}", &sizes[..3], start.elapsed()))
}

fn meet_preservation() -> Outcome {
    let mut problems = Vec::new();
    let fam = construct_family(&KFixture::builtin(), 10).expect("family");
    for w in fam.windows(2) {
        let (old, new) = (Oracle::new(&w[0].lattice), Oracle::new(&w[1].lattice));
        let step = w[1].steps.last().expect("step");
        let mut changed = Vec::new();
        for x in 0..old.n {
            for y in x + 1..old.n {
                if old.meet(x, y) != new.meet(x, y) {
                    problems.push(format!("K_{}: meet of {x}, {y} changed", w[1].n));
                }
                if old.join(x, y) != new.join(x, y) {
                    changed.push((x, y));
                }
            }
        }
        let mut recorded: Vec<(usize, usize)> = step.changed_joins.iter().chain(&step.mirror_joins).copied().collect();
        recorded.sort_unstable();
        if changed != recorded {
            problems.push(format!("K_{}: join changes {:?} vs recorded {:?}", w[1].n, changed, recorded));
        }
        let mirrored: BTreeSet<(usize, usize)> = step
            .changed_joins
            .iter()
            .map(|&(x, y)| {
                let (a, b) = (w[1].mirror[x], w[1].mirror[y]);
                (a.min(b), a.max(b))
            })
            .collect();
        if mirrored != step.mirror_joins.iter().copied().collect() {
            problems.push(format!("K_{}: mirror joins are not the mirror of the changed joins", w[1].n));
        }
    }
    outcome(problems, format!("{} steps", fam.len() - 1))
}

fn planarity_oracle() -> Outcome {
    let mut problems = Vec::new();
    let mut rng = StdRng::seed_from_u64(2024);
    let random = random_lattices(&mut rng, 50, 10);
    let small = corpus().iter().filter(|e| e.lattice.len() <= 12).map(|e| (e.name.clone(), e.lattice.clone()));
    let all: Vec<_> = small.chain(random.into_iter().enumerate().map(|(i, l)| (format!("random#{i}"), l))).collect();
    let mut non_planar = 0;
    for (name, l) in &all {
        let o = Oracle::new(l);
        let brute = o.brute_force_dim2();
        non_planar += usize::from(brute.is_none());
        if is_planar(l) != brute.is_some() {
            problems.push(format!("{name}: planarity disagrees"));
        }
        if let Ok(r) = find_realizer(l) {
            if !o.realizes(&r.ext1, &r.ext2) {
                problems.push(format!("{name}: returned pair is not a realizer"));
            }
        }
    }
    outcome(problems, format!("{} lattices, {non_planar} not planar", all.len()))
}

fn left_right_inequality() -> Outcome {
    let mut problems = Vec::new();
    for e in corpus() {
        let r = find_realizer(&e.lattice).expect("corpus is planar");
        for (side, realizer) in [("", r.clone()), ("mirror ", r.reversed())] {
            if let Err(v) = check_left_right_inequality(&e.lattice, &realizer) {
                problems.push(format!("{}: {side}{v}", e.name));
            }
        }
    }
    outcome(problems, format!("{} lattices, both orientations", corpus().len()))
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let results = [
        ("1 enumeration counts", enumeration_counts()),
        ("2 three-atom outer join is top", three_atom_outer_join()),
        ("3 boundary theorem on the corpus", boundaries(start)),
        ("4 atom profiles, M_k, M_{k,k'}, J_k", section_suite()),
        ("5 K-family sizes and size theorem", family_sizes()),
        ("6 meet preservation per step", meet_preservation()),
        ("7 planarity oracle equivalence", planarity_oracle()),
        ("8 left-right inequality", left_right_inequality()),
    ];
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
