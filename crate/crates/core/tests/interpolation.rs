use std::collections::BTreeSet;

use grz_core::calculus::{Rule, System};
use grz_core::corpus::formulas_up_to;
use grz_core::interpolation::{interpolate, lyndon, Case, InterpolationError, Part, SplitSequent};
use grz_core::proofs::{CyclicProof, ProofNode};
use grz_core::prover::{decide, ProverConfig};
use grz_core::syntax::{f, seq};
use grz_core::{Formula, FormulaKind, Multiset, Sequent};

/// Signed atom occurrences, computed independently of the library.
fn signs(a: &Formula, positive: bool, pos: &mut BTreeSet<String>, neg: &mut BTreeSet<String>) {
    match a.kind() {
        FormulaKind::Bottom => {}
        FormulaKind::Atom(p) => {
            if positive {
                pos.insert(p.to_string());
            } else {
                neg.insert(p.to_string());
            }
        }
        FormulaKind::Implies(b, c) => {
            signs(b, !positive, pos, neg);
            signs(c, positive, pos, neg);
        }
        FormulaKind::Box(b) => signs(b, positive, pos, neg),
    }
}

fn pos_neg(a: &Formula) -> (BTreeSet<String>, BTreeSet<String>) {
    let (mut p, mut n) = (BTreeSet::new(), BTreeSet::new());
    signs(a, true, &mut p, &mut n);
    (p, n)
}

fn ms(xs: &[&str]) -> Multiset {
    xs.iter().map(|x| f(x)).collect()
}

fn cfg() -> ProverConfig {
    ProverConfig::default()
}

#[test]
fn axiom_cases() {
    let ax = |s: &str| CyclicProof {
        system: System::Inf,
        nodes: vec![ProofNode {
            sequent: seq(s),
            rule: Some(Rule::AxAtom(f("p"))),
            children: vec![],
        }],
        backlinks: Default::default(),
    };
    let none = BTreeSet::new();
    let p = ax("p => p");
    let r = interpolate(&p, &SplitSequent::new(ms(&["p"]), ms(&[]), ms(&[]), ms(&["p"])), &none, &none).unwrap();
    assert_eq!(r.interpolant, f("p"));
    let r = interpolate(&p, &SplitSequent::new(ms(&["p"]), ms(&[]), ms(&["p"]), ms(&[])), &none, &none).unwrap();
    assert_eq!(r.interpolant, f("false"));
    let r = interpolate(&p, &SplitSequent::new(ms(&[]), ms(&["p"]), ms(&[]), ms(&["p"])), &none, &none).unwrap();
    assert_eq!(r.interpolant, f("true"));
    let r = interpolate(&p, &SplitSequent::new(ms(&[]), ms(&["p"]), ms(&["p"]), ms(&[])), &none, &none).unwrap();
    assert_eq!(r.interpolant, f("~p"));
    let bad = interpolate(&p, &SplitSequent::new(ms(&["p"]), ms(&[]), ms(&[]), ms(&[])), &none, &none);
    assert!(matches!(bad, Err(InterpolationError::BadSplit { .. })));
}

#[test]
fn modal_example_from_two_boxes() {
    let v = decide(&seq("[]p, [](p -> q) => []q"), &cfg()).unwrap();
    let proof = v.proof().unwrap();
    let split = SplitSequent::new(ms(&["[]p", "[](p -> q)"]), ms(&[]), ms(&[]), ms(&["[]q"]));
    let none = BTreeSet::new();
    let r = interpolate(proof, &split, &none, &none).unwrap();
    let (p, n) = pos_neg(&r.interpolant);
    assert!(p.is_subset(&BTreeSet::from(["q".to_string()])), "{}", r.interpolant);
    assert!(n.is_subset(&BTreeSet::from(["p".to_string()])), "{}", r.interpolant);
    assert!(r.polarity_ok(&split));
    assert!(decide(&r.left_obligation, &cfg()).unwrap().is_proof());
    assert!(decide(&r.right_obligation, &cfg()).unwrap().is_proof());
    // □q on the second side: the modal step prefixes a box
    assert!(r.trace.iter().any(|t| t.case == Case::BoxFresh { part: Part::Second, diamond: false }));
}

#[test]
fn lyndon_examples() {
    let r = lyndon(&f("p"), &f("p"), &cfg()).unwrap();
    let (p, n) = pos_neg(&r.interpolant);
    assert!(p.is_subset(&BTreeSet::from(["p".to_string()])) && n.is_empty());
    let r = lyndon(&f("[]p & [](p -> q)"), &f("[]q"), &cfg()).unwrap();
    assert!(decide(&Sequent::new(ms(&["[]p & [](p -> q)"]), Multiset::singleton(r.interpolant.clone())), &cfg()).unwrap().is_proof());
    match lyndon(&f("p"), &f("q"), &cfg()) {
        Err(InterpolationError::NotTheorem { model, world }) => {
            assert_eq!(model.size(), 1);
            assert!(model.eval(world, &f("p")) && !model.eval(world, &f("q")));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn diamond_on_first_side() {
    // ◇ appears when the boxed succedent formula belongs to the first part
    let v = decide(&seq("[]p => []p, q"), &cfg()).unwrap();
    let split = SplitSequent::new(ms(&[]), ms(&["[]p"]), ms(&["[]p"]), ms(&["q"]));
    let none = BTreeSet::new();
    let r = interpolate(v.proof().unwrap(), &split, &none, &none).unwrap();
    assert!(r.polarity_ok(&split));
    let boxes: Vec<&Case> = r.trace.iter().map(|t| &t.case).filter(|c| matches!(c, Case::BoxFresh { .. })).collect();
    assert!(boxes.iter().all(|c| **c == Case::BoxFresh { part: Part::First, diamond: true }));
    assert!(decide(&r.left_obligation, &cfg()).unwrap().is_proof());
    assert!(decide(&r.right_obligation, &cfg()).unwrap().is_proof());
}

#[test]
fn combinators_follow_parts() {
    for (text, split) in [
        ("p -> q, p => q", SplitSequent::new(ms(&["p -> q"]), ms(&["p"]), ms(&[]), ms(&["q"]))),
        ("p -> q, p => q", SplitSequent::new(ms(&["p"]), ms(&["p -> q"]), ms(&[]), ms(&["q"]))),
    ] {
        let v = decide(&seq(text), &cfg()).unwrap();
        let none = BTreeSet::new();
        let r = interpolate(v.proof().unwrap(), &split, &none, &none).unwrap();
        for t in &r.trace {
            if let Case::ImpL { part, disjunction } = t.case {
                assert_eq!(disjunction, part == Part::First);
                let principal = Formula::implies(f("p"), f("q"));
                let in_first = t.split.gamma1.contains(&principal);
                assert_eq!(part == Part::First, in_first);
            }
        }
        assert!(r.polarity_ok(&split));
        assert!(decide(&r.left_obligation, &cfg()).unwrap().is_proof());
        assert!(decide(&r.right_obligation, &cfg()).unwrap().is_proof());
    }
}

#[test]
fn every_small_provable_implication() {
    let mut n = 0;
    for c in formulas_up_to(7, &["p", "q"], true) {
        let Some((a, b)) = c.as_implies() else { continue };
        if !decide(&Sequent::goal(c.clone()), &cfg()).unwrap().is_proof() {
            continue;
        }
        let r = lyndon(a, b, &cfg()).unwrap_or_else(|e| panic!("{c}: {e}"));
        let (ip, ineg) = pos_neg(&r.interpolant);
        let (ap, an) = pos_neg(a);
        let (bp, bn) = pos_neg(b);
        assert!(ip.is_subset(&ap) && ip.is_subset(&bp), "{c}: {}", r.interpolant);
        assert!(ineg.is_subset(&an) && ineg.is_subset(&bn), "{c}: {}", r.interpolant);
        n += 1;
    }
    assert!(n > 300, "only {n} implications");
}
