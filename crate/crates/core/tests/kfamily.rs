mod common;

use agplat::kfamily::{
    anchor_search, certify_theorem_size, construct_family, k1_candidates, pad_atoms, reconstruct_k1,
    resolve_sixth_element, verify_member, verify_step, Anchors, DeltaRule, KFixture, Role, BUILTIN_K1,
};
use agplat::planar::find_realizer;
use common::Oracle;

#[test]
fn fixture_regenerates_byte_for_byte() {
    let (fixture, search) = reconstruct_k1().expect("search succeeds");
    assert_eq!(fixture.doc.to_json(), BUILTIN_K1);
    assert_eq!(search.candidates.len(), 1);
    assert_eq!(search.tightest(10), Some("exactly two elements are not joins of atoms"));
}

#[test]
fn no_ten_element_candidate() {
    let (census, stages, candidates) = k1_candidates(10).expect("census");
    assert_eq!(census, 8);
    assert_eq!(stages[0].survivors, 0);
    assert!(candidates.is_empty());
}

#[test]
fn k1_invariants() {
    let fx = KFixture::builtin();
    let l = &fx.lattice;
    let o = Oracle::new(l);
    assert_eq!(l.len(), 11);
    let a = |i: usize| fx.anchor(&format!("a{i}"));
    let (d1, c, d2, i, b1, b2) = (fx.anchor("d1"), fx.anchor("c"), fx.anchor("d2"), fx.anchor("i"), fx.anchor("b1"), fx.anchor("b2"));
    assert_eq!(o.atoms().len(), 4);
    assert!(o.atom_generated());
    assert_eq!(o.join(a(1), a(2)), Some(d1));
    assert_eq!(o.join(a(3), a(4)), Some(d2));
    assert_eq!(o.meet(d1, o.join(a(2), a(3)).unwrap()), Some(b1));
    assert_eq!(o.meet(o.join(a(2), a(3)).unwrap(), d2), Some(b2));
    for x in [a(1), d1, a(4), d2] {
        assert_eq!(o.join(x, c), Some(i));
    }
    assert_eq!(i, l.top());
    let mirror = fx.mirror().expect("mirror");
    assert_eq!(mirror[c], c);
    assert_eq!(mirror[d1], d2);
    // Exactly b1 and b2 are not joins of atoms.
    let atoms = o.atoms();
    let mut joins = std::collections::BTreeSet::new();
    for mask in 0u32..16 {
        let mut j = o.bottom();
        for (k, &at) in atoms.iter().enumerate() {
            if mask & (1 << k) != 0 {
                j = o.join(j, at).unwrap();
            }
        }
        joins.insert(j);
    }
    let missing: Vec<usize> = (0..11).filter(|x| !joins.contains(x)).collect();
    let mut want = vec![b1, b2];
    want.sort_unstable();
    assert_eq!(missing, want);
}

#[test]
fn sixth_element_is_unique() {
    let s = resolve_sixth_element(&KFixture::builtin()).expect("search");
    let rule = s.rule().expect("unique survivor");
    assert_eq!(
        rule,
        DeltaRule {
            lower: vec![Role::C, Role::Epsilon, Role::Phi],
            upper: vec![Role::Gamma],
        }
    );
    assert_eq!(s.with_delta_below_phi, 0);
    assert_eq!(s.with_delta_meet, 0);
    assert_eq!(s.placements, 347);
}

#[test]
fn sizes_follow_six_n_plus_five() {
    let fam = construct_family(&KFixture::builtin(), 20).expect("family");
    for k in &fam {
        assert_eq!(k.lattice.len(), 6 * k.n + 5);
        assert_eq!(k.lattice.atoms().len(), 4);
        assert!(k.lattice.is_atom_generated());
        assert!(find_realizer(&k.lattice).is_ok());
    }
}

#[test]
fn steps_verify_and_members_pass_the_suite() {
    let fam = construct_family(&KFixture::builtin(), 10).expect("family");
    for w in fam.windows(2) {
        let r = verify_step(&w[0], &w[1]);
        assert!(r.all_pass(), "{}", r.render_text());
    }
    for k in &fam {
        let r = verify_member(k);
        assert!(r.all_pass(), "{}", r.render_text());
    }
}

#[test]
fn step_preserves_meets_by_brute_force() {
    let fam = construct_family(&KFixture::builtin(), 6).expect("family");
    for w in fam.windows(2) {
        let (old, new) = (Oracle::new(&w[0].lattice), Oracle::new(&w[1].lattice));
        let step = w[1].steps.last().unwrap();
        let mut changed = Vec::new();
        for x in 0..old.n {
            for y in x + 1..old.n {
                assert_eq!(old.meet(x, y), new.meet(x, y));
                if old.join(x, y) != new.join(x, y) {
                    changed.push((x, y));
                }
            }
        }
        let mut recorded: Vec<(usize, usize)> = step.changed_joins.iter().chain(&step.mirror_joins).copied().collect();
        recorded.sort_unstable();
        assert_eq!(changed, recorded);
    }
}

#[test]
fn threading_is_unique_up_to_mirror() {
    let fam = construct_family(&KFixture::builtin(), 3).expect("family");
    for k in &fam[1..] {
        let found = anchor_search(k);
        let want = k.anchors;
        let mirrored = Anchors {
            d1: want.d2,
            d2: want.d1,
            b1: want.b2,
            b2: want.b1,
            ..want
        };
        assert_eq!(found.len(), 2, "K_{}", k.n);
        for (a, rules) in &found {
            assert!(*a == want || *a == mirrored);
            assert_eq!(rules, &vec![k.delta_rule.clone()]);
        }
    }
}

#[test]
fn size_theorem_certificates() {
    let fx = KFixture::builtin();
    for (k, member, size) in [(9, 1, 11), (10, 1, 11), (100, 16, 101)] {
        let cert = certify_theorem_size(&fx, k, 4).expect("certificate");
        assert!(cert.holds(), "{}", cert.report.render_text());
        assert_eq!(cert.member, member);
        assert_eq!(cert.lattice.len(), size);
    }
}

#[test]
fn padding_adds_atoms_and_keeps_generation() {
    let fam = construct_family(&KFixture::builtin(), 3).expect("family");
    for extra in 1..=2 {
        for k in &fam {
            let l = pad_atoms(k, extra).expect("padding");
            let o = Oracle::new(&l);
            assert_eq!(o.atoms().len(), 4 + extra);
            assert!(o.atom_generated());
            assert!(find_realizer(&l).is_ok());
        }
        let cert = certify_theorem_size(&KFixture::builtin(), 30, 4 + extra).expect("certificate");
        assert!(cert.holds());
        assert!(cert.lattice.len() > 30);
    }
}

#[test]
fn fixture_round_trips_and_rejects_garbage() {
    let fx = KFixture::builtin();
    let again = KFixture::read(fx.doc.to_json().as_bytes()).expect("parse");
    assert_eq!(again.lattice.covers(), fx.lattice.covers());
    assert!(KFixture::read(b"{\"version\":\"1\",\"n\":3,\"covers\":[[0,1],[1,2]]}").is_err());
    assert!(KFixture::read(b"not json").is_err());
}
