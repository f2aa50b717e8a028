//! Translations between the finitary and the non-well-founded calculus.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::calculus::{Rule, System};
use crate::proofs::{CyclicProof, LazyProof, ProofNode, ProofStore, ProofTree, WfProof};
use crate::syntax::{star, Formula, Multiset, Sequent};

use super::fold::{FoldLimits, Folder};
use super::TransformError;

/// The cyclic proof of `□(□(A→□A)→A) ⇒ A`: with `F = □(□(A→□A)→A)`,
///
/// ```text
///   F ⇒ A            refl F
///   □(A→□A)→A, F ⇒ A  →L
///     A, F ⇒ A                      identity
///     F ⇒ □(A→□A), A               □
///       F ⇒ A→□A, A   →R  over  F, A ⇒ □A, A (identity)
///       F ⇒ A→□A      →R
///         A, F ⇒ □A   □
///           A, F ⇒ A  identity
///           F ⇒ A     back-link to the root
/// ```
/// For an atom `A` this is the 10-node proof with identity leaves.
pub fn grz_schema_proof(a: &Formula) -> CyclicProof {
    let store = ProofStore::new();
    let boxed_a = Formula::boxed(a.clone());
    let guard = Formula::grz_guard(a);
    let a_imp = Formula::implies(a.clone(), boxed_a.clone());
    let g = Formula::implies(guard.clone(), a.clone());
    let f = Formula::boxed(g.clone());
    let fs = Multiset::singleton(f.clone());
    let one = |x: &Formula| Multiset::singleton(x.clone());

    let mut nodes: Vec<ProofNode> = Vec::new();
    let push = |nodes: &mut Vec<ProofNode>, s: Sequent, r: Option<Rule>| {
        nodes.push(ProofNode {
            sequent: s,
            rule: r,
            children: Vec::new(),
        });
        nodes.len() - 1
    };
    let plug = |nodes: &mut Vec<ProofNode>, h: LazyProof| {
        let mut folder = Folder::new(&store, false, false, FoldLimits::default());
        let base = nodes.len();
        folder.visit(h, false).expect("identity proofs are finite");
        for mut n in folder.nodes {
            for c in &mut n.children {
                *c += base;
            }
            nodes.push(n);
        }
        base
    };

    let n0 = push(&mut nodes, Sequent::new(fs.clone(), one(a)), Some(Rule::Refl(f.clone())));
    let n1 = push(
        &mut nodes,
        Sequent::new(fs.clone().with(g.clone()), one(a)),
        Some(Rule::ImpL(g.clone())),
    );
    let n2 = plug(&mut nodes, store.ax_proof(&fs, a, &Multiset::new()));
    let n3 = push(
        &mut nodes,
        Sequent::new(fs.clone(), one(&guard).with(a.clone())),
        Some(Rule::BoxInf(guard.clone())),
    );
    let n4 = push(
        &mut nodes,
        Sequent::new(fs.clone(), one(&a_imp).with(a.clone())),
        Some(Rule::ImpR(a_imp.clone())),
    );
    let n5 = plug(&mut nodes, store.ax_proof(&fs, a, &one(&boxed_a)));
    let n6 = push(&mut nodes, Sequent::new(fs.clone(), one(&a_imp)), Some(Rule::ImpR(a_imp.clone())));
    let n7 = push(
        &mut nodes,
        Sequent::new(fs.clone().with(a.clone()), one(&boxed_a)),
        Some(Rule::BoxInf(boxed_a.clone())),
    );
    let n8 = plug(&mut nodes, store.ax_proof(&fs, a, &Multiset::new()));
    let n9 = push(&mut nodes, Sequent::new(fs, one(a)), None);
    nodes[n0].children = vec![n1];
    nodes[n1].children = vec![n2, n3];
    nodes[n3].children = vec![n4, n6];
    nodes[n4].children = vec![n5];
    nodes[n6].children = vec![n7];
    nodes[n7].children = vec![n8, n9];
    CyclicProof {
        system: System::Inf,
        nodes,
        backlinks: BTreeMap::from([(n9, n0)]),
    }
}

impl ProofStore {
    /// Translates a finitary proof (possibly with cuts) into an ∞-proof
    /// with cuts. Each Grz box step becomes a □ step over
    ///
    /// ```text
    ///   λ = cut_{□G}( □_{□G}(→R(wk_{∅,A} ξ), →R ξ),  wk_{□Π,∅}(grz_schema A) )
    /// ```
    /// where `G = □(A→□A) → A` and `ξ` translates the premise.
    pub fn seq_to_inf(&self, p: &WfProof) -> Result<LazyProof, TransformError> {
        let report = p.check();
        if !report.is_ok() {
            return Err(TransformError::Invalid(report));
        }
        if p.system.is_infinitary() {
            return Err(TransformError::WrongSystem(p.system));
        }
        let mut schemas = HashMap::new();
        self.seq_rec(&p.root, &mut schemas)
    }

    fn seq_rec(
        &self,
        t: &ProofTree,
        schemas: &mut HashMap<Formula, LazyProof>,
    ) -> Result<LazyProof, TransformError> {
        let s = &t.sequent;
        match &t.rule {
            Rule::AxGeneral(a) => {
                let gamma = s.ant.without(a).expect("checked axiom");
                let delta = s.succ.without(a).expect("checked axiom");
                Ok(self.ax_proof(&gamma, a, &delta))
            }
            Rule::AxAtom(_) | Rule::AxBottom => Ok(self.axiom(s.clone(), t.rule.clone())),
            Rule::BoxGrz(bx) => {
                let a = bx.as_box().expect("checked box rule");
                let xi = self.seq_rec(&t.children[0], schemas)?;
                let guard = Formula::grz_guard(a);
                let pi = t.children[0].sequent.ant.without(&guard).expect("checked box rule");
                let sigma = s.ant.difference(&pi);
                let lambda = s.succ.without(bx).expect("checked box rule");
                let g = Formula::implies(guard, a.clone());
                let bg = Formula::boxed(g.clone());
                let none = Multiset::new();
                let only_a = Multiset::singleton(a.clone());
                // □Π ⇒ □G, A
                let imp_wk = self.node(
                    Sequent::new(pi.clone(), Multiset::singleton(g.clone()).with(a.clone())),
                    Rule::ImpR(g.clone()),
                    vec![self.wk(xi, &none, &only_a)],
                );
                let imp = self.node(
                    Sequent::new(pi.clone(), Multiset::singleton(g.clone())),
                    Rule::ImpR(g.clone()),
                    vec![xi],
                );
                let boxed = self.node(
                    Sequent::new(pi.clone(), Multiset::singleton(bg.clone()).with(a.clone())),
                    Rule::BoxInf(bg.clone()),
                    vec![imp_wk, imp],
                );
                let schema = match schemas.get(a) {
                    Some(&h) => h,
                    None => {
                        let h = self
                            .load_cyclic(&grz_schema_proof(a))
                            .expect("schema proof is valid");
                        schemas.insert(a.clone(), h);
                        h
                    }
                };
                let lam = self.cut(&bg, boxed, self.wk(schema, &pi, &none))?;
                Ok(self.node(
                    s.clone(),
                    Rule::BoxInf(bx.clone()),
                    vec![self.wk(lam, &sigma, &lambda), lam],
                ))
            }
            rule => {
                let kids = t
                    .children
                    .iter()
                    .map(|c| self.seq_rec(c, schemas))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.node(s.clone(), rule.clone(), kids))
            }
        }
    }
}

/// Translates a cut-free cyclic proof of `Γ ⇒ Δ` into a finitary proof
/// of `Λ*, Γ ⇒ Δ`. At a □ step with principal `□A`: if `A ∈ Λ` the
/// conclusion follows from the left premise through `□(A→□A) ∈ Λ*`;
/// otherwise the Grz box rule is applied to the translation of the right
/// premise under `Λ ∪ {A}`.
pub fn inf_to_seq(p: &CyclicProof, lambda: &BTreeSet<Formula>) -> Result<WfProof, TransformError> {
    let report = p.check();
    if !report.is_ok() {
        return Err(TransformError::Invalid(report));
    }
    if p.system != System::Inf || p.uses_cut() {
        return Err(TransformError::HasCut(p.root().clone()));
    }
    let mut memo = HashMap::new();
    let root = inf_rec(p, 0, lambda, &mut memo);
    Ok(WfProof {
        system: System::Seq,
        root,
    })
}

fn inf_rec(
    p: &CyclicProof,
    node: usize,
    lambda: &BTreeSet<Formula>,
    memo: &mut HashMap<(usize, BTreeSet<Formula>), ProofTree>,
) -> ProofTree {
    if let Some(&target) = p.backlinks.get(&node) {
        return inf_rec(p, target, lambda, memo);
    }
    let key = (node, lambda.clone());
    if let Some(t) = memo.get(&key) {
        return t.clone();
    }
    let n = &p.nodes[node];
    let stars: Multiset = star(lambda).into_iter().collect();
    let sequent = n.sequent.weaken(&stars, &Multiset::new());
    let rule = n.rule.clone().expect("non-back-link node has a rule");
    let tree = match &rule {
        Rule::AxAtom(q) => ProofTree::leaf(sequent, Rule::AxGeneral(q.clone())),
        Rule::AxBottom => ProofTree::leaf(sequent, Rule::AxBottom),
        Rule::BoxInf(bx) => {
            let a = bx.as_box().expect("checked box rule");
            if lambda.contains(a) {
                // refl on □(A→□A), then →L: □A closes by identity, A comes
                // from the left premise
                let guard = Formula::grz_guard(a);
                let imp = Formula::implies(a.clone(), bx.clone());
                let left = inf_rec(p, n.children[0], lambda, memo)
                    .weaken(&Multiset::new(), &Multiset::singleton(bx.clone()));
                let with_imp = sequent.with_ant(imp.clone());
                let closed = ProofTree::leaf(
                    sequent.with_ant(bx.clone()),
                    Rule::AxGeneral(bx.clone()),
                );
                ProofTree {
                    sequent,
                    rule: Rule::Refl(guard),
                    children: vec![ProofTree {
                        sequent: with_imp,
                        rule: Rule::ImpL(imp),
                        children: vec![closed, left],
                    }],
                }
            } else {
                let mut wider = lambda.clone();
                wider.insert(a.clone());
                let right = inf_rec(p, n.children[1], &wider, memo);
                ProofTree {
                    sequent,
                    rule: Rule::BoxGrz(bx.clone()),
                    children: vec![right],
                }
            }
        }
        Rule::ImpL(_) | Rule::ImpR(_) | Rule::Refl(_) => ProofTree {
            sequent,
            rule: rule.clone(),
            children: n
                .children
                .iter()
                .map(|&c| inf_rec(p, c, lambda, memo))
                .collect(),
        },
        r => unreachable!("rule {r} in a cut-free infinitary proof"),
    };
    memo.insert(key, tree.clone());
    tree
}
