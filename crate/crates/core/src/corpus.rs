//! Test material: exhaustive formula enumeration and seeded random
//! finitary proofs with cuts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Rule, System};
use crate::proofs::{check_wf, ProofTree, WfProof};
use crate::prover::{search, ProverConfig};
use crate::syntax::{Formula, Multiset, Sequent};
use crate::transforms::inf_to_seq;

/// All formulas of AST size exactly `1..=max` over `atoms` (and `⊥` when
/// `bottom`), grouped by size: `out[k]` holds the formulas of size `k+1`.
pub fn formulas_by_size(max: usize, atoms: &[&str], bottom: bool) -> Vec<Vec<Formula>> {
    let mut by: Vec<Vec<Formula>> = Vec::with_capacity(max);
    for size in 1..=max {
        let mut cur = Vec::new();
        if size == 1 {
            cur.extend(atoms.iter().map(|a| Formula::atom(a)));
            if bottom {
                cur.push(Formula::bottom());
            }
        } else {
            cur.extend(by[size - 2].iter().map(|a| Formula::boxed(a.clone())));
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &by[left - 1] {
                    for b in &by[right - 1] {
                        cur.push(Formula::implies(a.clone(), b.clone()));
                    }
                }
            }
        }
        by.push(cur);
    }
    by
}

/// All formulas of AST size at most `max`, smallest first.
pub fn formulas_up_to(max: usize, atoms: &[&str], bottom: bool) -> Vec<Formula> {
    formulas_by_size(max, atoms, bottom).into_iter().flatten().collect()
}

/// Random formula of size at most `max` (at least 1).
pub fn random_formula(rng: &mut impl Rng, max: usize, atoms: &[&str]) -> Formula {
    if max <= 1 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..=atoms.len()) {
            i if i < atoms.len() => Formula::atom(atoms[i]),
            _ => Formula::bottom(),
        };
    }
    if max == 2 || rng.gen_ratio(1, 3) {
        return Formula::boxed(random_formula(rng, max - 1, atoms));
    }
    let left = rng.gen_range(1..max - 1);
    Formula::implies(
        random_formula(rng, left, atoms),
        random_formula(rng, max - 1 - left, atoms),
    )
}

/// Settings for [`random_cut_proofs`].
#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    /// Size bound for the random theorems proved first.
    pub formula_size: usize,
    /// Cuts inserted per proof.
    pub cuts: usize,
    pub atoms: Vec<String>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 7,
            count: 50,
            formula_size: 11,
            cuts: 4,
            atoms: vec!["p".into(), "q".into()],
        }
    }
}

/// Seeded random finitary proofs with cuts. Each starts from a proof of
/// a random theorem whose proof uses the box rule (found by search and translated to the finitary
/// calculus), and then gets cuts inserted at random nodes:
///
/// * on a formula of the succedent, against an identity axiom,
/// * on a formula of the antecedent, against an identity axiom,
/// * on an arbitrary formula, between two weakenings of the subproof,
/// * on a random theorem `C`, with the subproof weakened by `C` on the left.
///
/// Every output passes the finitary checker with cut.
pub fn random_cut_proofs(config: &CorpusConfig) -> Vec<WfProof> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let atoms: Vec<&str> = config.atoms.iter().map(String::as_str).collect();
    let prover = ProverConfig {
        max_nodes: 20_000,
        ..ProverConfig::default()
    };
    let mut out = Vec::with_capacity(config.count);
    let mut theorems: Vec<(Formula, ProofTree)> = Vec::new();
    let prove = |a: &Formula| -> Option<ProofTree> {
        let p = search(&Sequent::goal(a.clone()), &prover).ok()??;
        Some(inf_to_seq(&p, &Default::default()).ok()?.root)
    };
    while out.len() < config.count {
        let a = random_formula(&mut rng, config.formula_size, &atoms);
        if a.size() < 4 {
            continue;
        }
        let Some(mut tree) = prove(&a) else {
            continue;
        };
        if !uses_box(&tree) {
            continue;
        }
        theorems.push((a, tree.clone()));
        for _ in 0..config.cuts {
            let lemma = theorems.choose(&mut rng).cloned();
            tree = insert_cut(&mut rng, &tree, &atoms, lemma);
        }
        let proof = WfProof {
            system: System::SeqCut,
            root: tree,
        };
        debug_assert!(check_wf(&proof).is_ok(), "{}", check_wf(&proof));
        out.push(proof);
    }
    out
}

fn uses_box(t: &ProofTree) -> bool {
    matches!(t.rule, Rule::BoxGrz(_)) || t.children.iter().any(uses_box)
}

fn count_nodes(t: &ProofTree) -> usize {
    1 + t.children.iter().map(count_nodes).sum::<usize>()
}

/// Replaces the subproof at a random node by a cut deriving the same
/// sequent.
fn insert_cut(
    rng: &mut impl Rng,
    t: &ProofTree,
    atoms: &[&str],
    lemma: Option<(Formula, ProofTree)>,
) -> ProofTree {
    let target = rng.gen_range(0..count_nodes(t));
    let mut seen = 0;
    replace_at(t, target, &mut seen, &mut |sub| cut_over(rng, sub, atoms, lemma.clone()))
}

fn replace_at(
    t: &ProofTree,
    target: usize,
    seen: &mut usize,
    f: &mut dyn FnMut(&ProofTree) -> ProofTree,
) -> ProofTree {
    if *seen == target {
        *seen += count_nodes(t);
        return f(t);
    }
    *seen += 1;
    ProofTree {
        sequent: t.sequent.clone(),
        rule: t.rule.clone(),
        children: t.children.iter().map(|c| replace_at(c, target, seen, f)).collect(),
    }
}

fn cut_over(
    rng: &mut impl Rng,
    sub: &ProofTree,
    atoms: &[&str],
    lemma: Option<(Formula, ProofTree)>,
) -> ProofTree {
    let s = &sub.sequent;
    let none = Multiset::new();
    let cut = |c: Formula, left: ProofTree, right: ProofTree| ProofTree {
        sequent: s.clone(),
        rule: Rule::Cut(c),
        children: vec![left, right],
    };
    let succ: Vec<Formula> = s.succ.distinct().cloned().collect();
    let ant: Vec<Formula> = s.ant.distinct().cloned().collect();
    match rng.gen_range(0..4) {
        0 if !succ.is_empty() => {
            // Γ ⇒ Δ,C from π (C ∈ Δ);  C,Γ ⇒ Δ by identity
            let c = succ.choose(rng).expect("nonempty").clone();
            let left = sub.weaken(&none, &Multiset::singleton(c.clone()));
            let right = ProofTree::leaf(s.with_ant(c.clone()), Rule::AxGeneral(c.clone()));
            cut(c, left, right)
        }
        1 if !ant.is_empty() => {
            let c = ant.choose(rng).expect("nonempty").clone();
            let left = ProofTree::leaf(s.with_succ(c.clone()), Rule::AxGeneral(c.clone()));
            let right = sub.weaken(&Multiset::singleton(c.clone()), &none);
            cut(c, left, right)
        }
        3 if lemma.is_some() => {
            // ⇒ C is a theorem: Γ ⇒ Δ,C by its weakening
            let (c, proof) = lemma.expect("checked");
            let left = proof.weaken(&s.ant, &s.succ);
            let right = sub.weaken(&Multiset::singleton(c.clone()), &none);
            cut(c, left, right)
        }
        _ => {
            let c = random_formula(rng, 7, atoms);
            let left = sub.weaken(&none, &Multiset::singleton(c.clone()));
            let right = sub.weaken(&Multiset::singleton(c.clone()), &none);
            cut(c, left, right)
        }
    }
}
