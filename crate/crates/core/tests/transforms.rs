use std::collections::BTreeSet;

use grz_core::calculus::{Rule, System};
use grz_core::proofs::{Inversion, ProofStore, Side};
use grz_core::syntax::{f, seq};
use grz_core::transforms::{grz_schema_proof, inf_to_seq, FoldLimits};
use grz_core::Multiset;

#[test]
fn schema_proof_for_atom() {
    let p = grz_schema_proof(&f("p"));
    assert!(p.check().is_ok(), "{}", p.check());
    assert_eq!(p.nodes.len(), 10);
    assert_eq!(p.backlinks.len(), 1);
    assert_eq!(p.root(), &seq("[]([]( p -> []p) -> p) => p"));
    assert_eq!(p.local_height().unwrap(), 4);
}

#[test]
fn schema_proof_for_compound_formulas() {
    for a in ["p -> q", "[]p", "[](p -> []q) -> ~p", "false"] {
        let p = grz_schema_proof(&f(a));
        assert!(p.check().is_ok(), "{a}: {}", p.check());
    }
}

#[test]
fn ax_proof_is_cut_free_and_valid() {
    let store = ProofStore::new();
    for a in ["p", "[]p", "p -> []q", "[]([]p -> p)"] {
        let h = store.ax_proof(&Multiset::singleton(f("r")), &f(a), &Multiset::new());
        assert!(store.check_fragment(h, 6, System::Inf).is_ok(), "{a}");
        assert!(store.cutfree_to_depth(h, 6));
    }
}

#[test]
fn inversions_and_contractions_check() {
    let store = ProofStore::new();
    let h = store.load_cyclic(&grz_schema_proof(&f("p"))).unwrap();
    let w = store.wk(h, &Multiset::singleton(f("q")), &Multiset::singleton(f("p -> q")));
    assert_eq!(*store.sequent(w), seq("q, [](([](p -> []p)) -> p) => p, p -> q"));
    let i = store.invert(w, Inversion::IImp, &f("p -> q")).unwrap();
    assert!(store.check_fragment(i, 5, System::Inf).is_ok());
    let c = store.atomic_contract(i, Side::Right, &f("q")).unwrap_err();
    assert!(c.to_string().contains("no two copies"));
    let w2 = store.wk(i, &Multiset::new(), &Multiset::singleton(f("q")));
    let c = store.atomic_contract(w2, Side::Right, &f("q")).unwrap();
    assert_eq!(*store.sequent(c), *store.sequent(i));
    assert!(store.check_fragment(c, 5, System::Inf).is_ok());
    let w3 = store.wk(h, &Multiset::singleton(f("[]p -> q")), &Multiset::new());
    let w3 = store.wk(w3, &Multiset::singleton(f("[]p -> q")), &Multiset::new());
    let c = store.contract(w3, Side::Left, &f("[]p -> q")).unwrap();
    assert!(store.check_fragment(c, 5, System::InfCut).is_ok());
}

#[test]
fn inf_to_seq_of_schema() {
    let p = grz_schema_proof(&f("p"));
    let t = inf_to_seq(&p, &BTreeSet::new()).unwrap();
    assert!(t.check().is_ok(), "{}", t.check());
    assert_eq!(t.root.sequent, *p.root());
    assert_eq!(t.system, System::Seq);
}

#[test]
fn translation_round_trip_eliminates_cuts() {
    let store = ProofStore::new();
    let p = grz_schema_proof(&f("p"));
    let t = inf_to_seq(&p, &BTreeSet::new()).unwrap();
    let h = store.seq_to_inf(&t).unwrap();
    assert!(store.check_fragment(h, 4, System::InfCut).is_ok());
    assert!(!store.cutfree_to_depth(h, 3));
    let ce = store.ce(h);
    assert_eq!(*store.sequent(ce), *p.root());
    assert!(store.check_fragment(ce, 6, System::Inf).is_ok());
    assert!(store.cutfree_to_depth(ce, 6));
    let r = store.regularize(store.slim(ce), FoldLimits::default()).unwrap();
    assert!(r.check().is_ok(), "{}", r.check());
    assert!(!r.uses_cut());
}

#[test]
fn cut_on_implication_reduces() {
    // p ⇒ p→p, p cut against p→p, p ⇒ p
    let store = ProofStore::new();
    let a = f("p -> p");
    let pi = store.ax_proof(&Multiset::singleton(f("p")), &f("p"), &Multiset::new());
    let pi = store.node(seq("p => p -> p"), Rule::ImpR(a.clone()), vec![pi]);
    let pi = store.wk(pi, &Multiset::new(), &Multiset::singleton(f("p")));
    assert_eq!(*store.sequent(pi), seq("p => p -> p, p"));
    // τ : p→p, p ⇒ p  from the identity on p with p→p weakened in
    let tau = store.wk(
        store.ax_proof(&Multiset::new(), &f("p"), &Multiset::new()),
        &Multiset::singleton(a.clone()),
        &Multiset::new(),
    );
    let cut = store.cut(&a, pi, tau).unwrap();
    let ce = store.ce(cut);
    assert_eq!(*store.sequent(ce), seq("p => p"));
    assert!(store.check_fragment(ce, 3, System::Inf).is_ok());
    assert!(store.cutfree_to_depth(ce, 3));
}
