//! Shared fixtures for the contract, metric and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grz_core::calculus::{Rule, System};
use grz_core::corpus::formulas_up_to;
use grz_core::proofs::{is_right_premise, CyclicProof, Inversion, LazyProof, ProofStore, Side};
use grz_core::prover::{decide, ProverConfig};
use grz_core::syntax::{f, parse_sequent};
use grz_core::transforms::grz_schema_proof;
use grz_core::{Formula, Multiset, Sequent};

pub const MAX_NODES: usize = 6;
pub const MAX_DEPTH: usize = 8;

/// Distinct cut-free cyclic proofs with at most [`MAX_NODES`] nodes, found by
/// proving `⇒ A` for every `A` of size ≤ 7 and every sequent built from up to
/// three formulas of size ≤ 3 (repetitions allowed, so duplicated atoms occur).
pub fn small_proofs() -> Vec<CyclicProof> {
    let config = ProverConfig::default();
    let mut goals: Vec<Sequent> = formulas_up_to(7, &["p", "q"], true)
        .into_iter()
        .map(Sequent::goal)
        .collect();
    let small = formulas_up_to(3, &["p", "q"], true);
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            goals.push(Sequent::from_parts([a.clone()], [b.clone()]));
            goals.push(Sequent::from_parts([a.clone(), b.clone()], []));
            goals.push(Sequent::from_parts([], [a.clone(), b.clone()]));
            for c in &small {
                goals.push(Sequent::from_parts([a.clone(), b.clone()], [c.clone()]));
                goals.push(Sequent::from_parts([c.clone()], [a.clone(), b.clone()]));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in goals {
        let Ok(v) = decide(&g, &config) else { continue };
        let Some(p) = v.proof() else { continue };
        if p.nodes.len() <= MAX_NODES && seen.insert(p.to_json().to_string()) {
            out.push(p.clone());
        }
    }
    out
}

/// Cyclic proofs, which the small corpus cannot contain (the smallest has
/// ten nodes): schema proofs and proofs of Grz-axiom instances.
pub fn cyclic_supplement() -> Vec<CyclicProof> {
    let config = ProverConfig::default();
    let mut out = Vec::new();
    for a in ["p", "q", "[]p", "p -> q", "false", "[]p -> q"] {
        let a = f(a);
        out.push(grz_schema_proof(&a));
        let guard = Formula::grz_guard(&a);
        let ax = Formula::implies(Formula::boxed(Formula::implies(guard, a.clone())), Formula::boxed(a));
        let proof = decide(&Sequent::goal(ax), &config).unwrap();
        out.push(proof.proof().expect("theorem").clone());
    }
    for s in ["[](p -> []p), [](q -> p) => []p, q", "[]([]p -> q), [](q -> []p) => []p -> []q"] {
        if let Some(p) = decide(&parse_sequent(s).unwrap(), &config).unwrap().proof() {
            out.push(p.clone());
        }
    }
    out.retain(|p| !p.backlinks.is_empty());
    out
}

/// A proof of the same sequent as `h` that agrees with it up to (and
/// including) depth `n`, and carries a cut at every `n`-th right premise of
/// the box rule. At depth 0 the proof is replaced by a cut on `⊥`, or on a
/// succedent formula when `variant` is odd.
pub struct Mutator<'a> {
    store: &'a ProofStore,
    variant: usize,
    memo: HashMap<(LazyProof, usize), LazyProof>,
}

impl<'a> Mutator<'a> {
    pub fn new(store: &'a ProofStore, variant: usize) -> Self {
        Mutator {
            store,
            variant,
            memo: HashMap::new(),
        }
    }

    pub fn mutate(&mut self, h: LazyProof, n: usize) -> LazyProof {
        let h = self.store.resolve(h);
        if let Some(&m) = self.memo.get(&(h, n)) {
            return m;
        }
        let s = self.store;
        let out = if n == 0 {
            self.gadget(h)
        } else {
            let step = s.step(h);
            let premises = step
                .premises
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    if is_right_premise(&step.rule, k) {
                        self.mutate(c, n - 1)
                    } else {
                        self.mutate(c, n)
                    }
                })
                .collect();
            s.node((*s.sequent(h)).clone(), step.rule, premises)
        };
        self.memo.insert((h, n), out);
        out
    }

    fn gadget(&self, h: LazyProof) -> LazyProof {
        let s = self.store;
        let seq = (*s.sequent(h)).clone();
        let none = Multiset::new();
        let succ_formula = seq.succ.distinct().next().cloned();
        match succ_formula {
            Some(a) if self.variant % 2 == 1 => {
                // Γ ⇒ Δ,A from h;  A,Γ ⇒ Δ with A ∈ Δ by an identity proof
                let left = s.wk(h, &none, &Multiset::singleton(a.clone()));
                let rest = seq.succ.without(&a).expect("present");
                let right = s.ax_proof(&seq.ant, &a, &rest);
                s.cut(&a, left, right).expect("cut pair")
            }
            _ => {
                let bot = Formula::bottom();
                let left = s.wk(h, &none, &Multiset::singleton(bot.clone()));
                let right = s.axiom(seq.with_ant(bot.clone()), Rule::AxBottom);
                s.cut(&bot, left, right).expect("cut pair")
            }
        }
    }
}

/// A named unary transformer applied to a loaded proof.
pub struct Unary {
    pub name: String,
    pub height_contract: bool,
    pub apply: Box<dyn Fn(&ProofStore, LazyProof) -> LazyProof>,
}

/// Every unary transformer applicable to a proof of `s`: weakenings,
/// inversions on each eligible formula, and atomic contractions (after a
/// weakening that duplicates the atom).
pub fn unary_for(s: &Sequent) -> Vec<Unary> {
    let mut out = Vec::new();
    for (l, r) in [(vec!["q"], vec![]), (vec![], vec!["[]p"]), (vec!["p -> q"], vec!["p", "false"])] {
        let left: Multiset = l.iter().map(|x| f(x)).collect();
        let right: Multiset = r.iter().map(|x| f(x)).collect();
        out.push(Unary {
            name: format!("wk[{l:?};{r:?}]"),
            height_contract: true,
            apply: Box::new(move |st, h| st.wk(h, &left, &right)),
        });
    }
    let mut inv = |kind: Inversion, a: &Formula| {
        let a = a.clone();
        out.push(Unary {
            name: format!("{kind:?}[{a}]"),
            height_contract: true,
            apply: Box::new(move |st, h| st.invert(h, kind, &a).expect("applicable")),
        });
    };
    for a in s.ant.distinct() {
        if a.as_implies().is_some() {
            inv(Inversion::LiImp, a);
            inv(Inversion::RiImp, a);
        }
    }
    for a in s.succ.distinct() {
        if a.as_implies().is_some() {
            inv(Inversion::IImp, a);
        }
        if a.is_boxed() {
            inv(Inversion::LiBox, a);
        }
        if *a == Formula::bottom() {
            inv(Inversion::IBot, a);
        }
    }
    for (side, ms) in [(Side::Left, &s.ant), (Side::Right, &s.succ)] {
        for a in ms.distinct().filter(|a| a.is_atom()) {
            let a = a.clone();
            let one = Multiset::singleton(a.clone());
            let none = Multiset::new();
            out.push(Unary {
                name: format!("ac{side:?}[{a}]"),
                height_contract: true,
                apply: Box::new(move |st, h| {
                    let input = if ms_count(&st.sequent(h), side, &a) >= 2 {
                        h
                    } else if side == Side::Left {
                        st.wk(h, &one, &none)
                    } else {
                        st.wk(h, &none, &one)
                    };
                    st.atomic_contract(input, side, &a).expect("duplicate")
                }),
            });
        }
    }
    out
}

fn ms_count(s: &Sequent, side: Side, a: &Formula) -> usize {
    match side {
        Side::Left => s.ant.count(a),
        Side::Right => s.succ.count(a),
    }
}

/// Outcome of one contract run.
#[derive(Default, Debug)]
pub struct ContractStats {
    pub applications: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ContractStats {
    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// Checks one unary transformer on one input: validity and adequacy of
/// the output, non-expansiveness under mutation beyond depth `n` for every
/// `n ≤ MAX_DEPTH`, and the height contract.
pub fn check_unary(store: &ProofStore, t: &Unary, h: LazyProof, stats: &mut ContractStats) {
    stats.applications += 1;
    let out = (t.apply)(store, h);
    let root = store.sequent(out);
    if let Err((s, e)) = store.check_fragment(out, MAX_DEPTH, System::Inf) {
        stats.fail(format!("{} on {}: invalid step at {s}: {e}", t.name, store.sequent(h)));
        return;
    }
    if t.height_contract && store.local_height(out) > store.local_height(h) {
        stats.fail(format!(
            "{} on {}: height {} > {}",
            t.name,
            store.sequent(h),
            store.local_height(out),
            store.local_height(h)
        ));
    }
    for n in 1..=MAX_DEPTH {
        let mut m = Mutator::new(store, n);
        let mutated = m.mutate(h, n);
        let out2 = (t.apply)(store, mutated);
        stats.checks += 1;
        if *store.sequent(out2) != *root || !store.frag_eq(out, out2, n) {
            stats.fail(format!("{} on {}: expansive at depth {n}", t.name, store.sequent(h)));
        }
        if !store.cutfree_to_depth(out2, n) {
            stats.fail(format!("{} on {}: cut within depth {n}", t.name, store.sequent(h)));
        }
        if let Err((s, e)) = store.check_fragment(out2, n + 1, System::InfCut) {
            stats.fail(format!("{} on {}: mutated output invalid at {s}: {e}", t.name, store.sequent(h)));
        }
    }
}

pub const CUT_FORMULAS: [&str; 4] = ["p", "false", "p -> q", "[]p"];

/// Cut pairs `(π, τ)` on `a`: proofs of `Γ ⇒ Δ,a` and `a,Γ ⇒ Δ` for small
/// `Γ ⇒ Δ` where both are provable with small proofs, plus the weakening
/// pairs `(wk(π,∅,{a}), wk(π,{a},∅))` for every proof `π` of the corpus.
pub fn cut_pairs(store: &ProofStore, corpus: &[LazyProof], a: &Formula) -> Vec<(LazyProof, LazyProof)> {
    let config = ProverConfig::default();
    let none = Multiset::new();
    let one = Multiset::singleton(a.clone());
    let mut out: Vec<(LazyProof, LazyProof)> = corpus
        .iter()
        .map(|&h| (store.wk(h, &none, &one), store.wk(h, &one, &none)))
        .collect();
    let small = formulas_up_to(3, &["p", "q"], true);
    let mut contexts = vec![Sequent::from_parts([], [])];
    for x in &small {
        contexts.push(Sequent::from_parts([x.clone()], []));
        contexts.push(Sequent::from_parts([], [x.clone()]));
        for y in &small {
            contexts.push(Sequent::from_parts([x.clone()], [y.clone()]));
        }
    }
    for g in contexts {
        let left = decide(&g.with_succ(a.clone()), &config).ok().and_then(|v| v.proof().cloned());
        let right = decide(&g.with_ant(a.clone()), &config).ok().and_then(|v| v.proof().cloned());
        if let (Some(l), Some(r)) = (left, right) {
            if l.nodes.len() <= 2 * MAX_NODES && r.nodes.len() <= 2 * MAX_NODES {
                out.push((store.load_cyclic(&l).unwrap(), store.load_cyclic(&r).unwrap()));
            }
        }
    }
    out
}

/// Checks `re_a` on one cut pair: the output proves the cut result, is
/// valid and cut-free to depth `MAX_DEPTH`, and mutating both inputs beyond
/// depth `n` leaves its `n`-fragment unchanged and cut-free.
pub fn check_re(store: &ProofStore, a: &Formula, pi: LazyProof, tau: LazyProof, stats: &mut ContractStats) {
    stats.applications += 1;
    let out = store.re(a, pi, tau);
    let expected = store.sequent(pi).without_succ(a).expect("cut pair");
    let what = || format!("re[{a}] on {} / {}", store.sequent(pi), store.sequent(tau));
    if *store.sequent(out) != expected {
        stats.fail(format!("{}: wrong conclusion {}", what(), store.sequent(out)));
        return;
    }
    if let Err((s, e)) = store.check_fragment(out, MAX_DEPTH, System::Inf) {
        stats.fail(format!("{}: invalid step at {s}: {e}", what()));
        return;
    }
    for n in 1..=MAX_DEPTH {
        let mut m = Mutator::new(store, n);
        let (pi2, tau2) = (m.mutate(pi, n), m.mutate(tau, n));
        let out2 = store.re(a, pi2, tau2);
        stats.checks += 1;
        if !store.frag_eq(out, out2, n) {
            stats.fail(format!("{}: expansive at depth {n}", what()));
        }
        if !store.cutfree_to_depth(out2, n) {
            stats.fail(format!("{}: cut within depth {n}", what()));
        }
    }
}

/// Runs every contract over the corpus.
pub fn run_contracts(corpus: &[CyclicProof]) -> (ContractStats, ContractStats) {
    let store = ProofStore::new();
    let loaded: Vec<LazyProof> = corpus.iter().map(|p| store.load_cyclic(p).unwrap()).collect();
    let mut unary = ContractStats::default();
    for &h in &loaded {
        for t in unary_for(&store.sequent(h)) {
            check_unary(&store, &t, h, &mut unary);
        }
    }
    let mut re = ContractStats::default();
    for a in CUT_FORMULAS {
        let a = f(a);
        for (pi, tau) in cut_pairs(&store, &loaded, &a) {
            check_re(&store, &a, pi, tau, &mut re);
        }
    }
    (unary, re)
}

/// Seeded triples for the ultrametric check: proofs of one sequent drawn from
/// the corpus, mutations of it at random depths, and transformer outputs;
/// one in four triples mixes proofs of unrelated sequents.
pub fn metric_triples(
    store: &ProofStore,
    corpus: &[CyclicProof],
    count: usize,
    seed: u64,
) -> Vec<[LazyProof; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loaded: Vec<LazyProof> = corpus.iter().map(|p| store.load_cyclic(p).unwrap()).collect();
    let variants = |rng: &mut ChaCha8Rng, h: LazyProof| -> LazyProof {
        let n = rng.gen_range(0..6);
        Mutator::new(store, rng.gen_range(0..2)).mutate(h, n)
    };
    (0..count)
        .map(|_| {
            let base = *loaded.choose(&mut rng).expect("nonempty corpus");
            if rng.gen_ratio(1, 4) {
                [base, *loaded.choose(&mut rng).unwrap(), variants(&mut rng, base)]
            } else {
                [variants(&mut rng, base), variants(&mut rng, base), variants(&mut rng, base)]
            }
        })
        .collect()
}
