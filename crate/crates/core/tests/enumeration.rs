mod common;

use std::collections::BTreeMap;

use agplat::agp::{verify_lemma3, AtomOrder};
use agplat::canon::canonical_form;
use agplat::doc::{read_doc, write_doc};
use agplat::enumerate::{enumerate, verify_census, EnumError, EnumSpec};
use agplat::planar::find_realizer;
use agplat::LatticeDoc;
use common::{brute_isomorphic, Oracle};

fn census(atoms: usize, max: usize) -> agplat::Census {
    enumerate(&EnumSpec::new(atoms, max)).expect("census")
}

#[test]
fn one_atom_gives_the_two_element_chain() {
    let c = census(1, 10);
    assert_eq!(c.len(), 1);
    assert_eq!(c.lattices[0].len(), 2);
}

#[test]
fn two_atoms_give_only_the_square() {
    let c = census(2, 10);
    assert_eq!(c.len(), 1);
    let l = &c.lattices[0];
    assert_eq!(l.len(), 4);
    assert_eq!(l.atoms().len(), 2);
}

#[test]
fn three_atoms_give_four_lattices() {
    let c = census(3, 10);
    assert_eq!(c.len(), 4);
    let sizes: Vec<usize> = c.lattices.iter().map(|l| l.len()).collect();
    assert_eq!(sizes, vec![5, 6, 7, 8]);
    for (i, a) in c.lattices.iter().enumerate() {
        for b in &c.lattices[i + 1..] {
            assert!(!brute_isomorphic(a, b));
        }
    }
    assert_eq!(census(3, 12).len(), 4);
}

#[test]
fn four_atom_counts_by_size() {
    let c = census(4, 12);
    let want: BTreeMap<usize, usize> = [(6, 1), (7, 2), (8, 4), (9, 7), (10, 8), (11, 9), (12, 9)].into();
    assert_eq!(c.counts_by_size, want);
}

#[test]
fn members_are_agp_with_the_right_atom_count() {
    for atoms in 1..=4 {
        for l in &census(atoms, 11).lattices {
            let o = Oracle::new(l);
            assert!(o.is_lattice());
            assert_eq!(o.atoms().len(), atoms);
            assert!(o.atom_generated());
            assert!(o.brute_force_dim2().is_some());
        }
    }
}

#[test]
fn mirrored_realizers_are_valid() {
    // Swapping ext1 and ext2 draws the mirror image of the same lattice.
    let c = census(4, 11);
    for l in &c.lattices {
        let r = find_realizer(l).expect("planar");
        let m = r.reversed();
        assert!(m.validate(l.poset()).is_ok());
        let ord = AtomOrder::from_realizer(l, &m);
        assert_eq!(ord.len(), 4);
    }
}

#[test]
fn counts_grow_with_max_size() {
    let mut prev = 0;
    for max in 7..=12 {
        let c = census(4, max);
        assert!(c.len() >= prev);
        let smaller = census(4, max - 1);
        for f in &smaller.forms {
            assert!(c.forms.contains(f));
        }
        prev = c.len();
    }
}

#[test]
fn forms_are_distinct_and_match_lattices() {
    let c = census(4, 12);
    let mut forms = c.forms.clone();
    forms.sort();
    forms.dedup();
    assert_eq!(forms.len(), c.len());
    for (l, f) in c.lattices.iter().zip(&c.forms) {
        assert_eq!(&canonical_form(l), f);
        assert_eq!(l.bottom(), 0);
    }
}

#[test]
fn documents_round_trip_bit_exact() {
    for l in &census(4, 11).lattices {
        let r = find_realizer(l).expect("planar");
        let doc = LatticeDoc::from_lattice(l).with_realizer(l, &r);
        let bytes = write_doc(l, &doc);
        let (back, doc2) = read_doc(&bytes).expect("parse");
        assert_eq!(back.covers(), l.covers());
        assert_eq!(write_doc(&back, &doc2), bytes);
    }
}

#[test]
fn census_verification_passes() {
    for atoms in 1..=4 {
        let report = verify_census(&census(atoms, 11));
        assert!(report.all_pass(), "{}", report.render_text());
    }
}

#[test]
fn three_atom_join_of_outer_atoms_is_top() {
    for l in &census(3, 10).lattices {
        let r = find_realizer(l).expect("planar");
        let ord = AtomOrder::from_realizer(l, &r);
        assert!(verify_lemma3(l, &ord).expect("three atoms"));
        let o = Oracle::new(l);
        assert_eq!(o.join(ord.atom(1), ord.atom(3)), Some(l.top()));
    }
}

#[test]
fn guards_and_budget() {
    let err = enumerate(&EnumSpec::new(4, 15)).unwrap_err();
    assert!(matches!(err, EnumError::SizeGuard { max_size: 15, guard: 14 }));
    let mut spec = EnumSpec::new(4, 12);
    spec.budget = 10;
    assert!(matches!(enumerate(&spec), Err(EnumError::BudgetExceeded { budget: 10 })));
    assert!(matches!(enumerate(&EnumSpec::new(0, 5)), Err(EnumError::InvalidSpec(_))));
    assert!(matches!(enumerate(&EnumSpec::new(3, 4)), Err(EnumError::InvalidSpec(_))));
}
