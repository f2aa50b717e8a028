//! Lyndon interpolants read off cut-free cyclic proofs.
//!
//! The root sequent is split into `Γ1,Γ2 ⇒ Δ1,Δ2` (as multisets, so the
//! split is per occurrence) and the interpolant is computed by recursion
//! over the proof, following back-links. Each side carries a set `Λj`;
//! `Λj*` are the formulas `□(A→□A)` for `A ∈ Λj` that the side may assume.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{Rule, System};
use crate::proofs::{CyclicProof, Report};
use crate::prover::{decide, KripkeModel, ProverConfig, ProverError, Verdict};
use crate::syntax::{polarity, star, Formula, Multiset, PolaritySets, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplitSequent {
    pub gamma1: Multiset,
    pub gamma2: Multiset,
    pub delta1: Multiset,
    pub delta2: Multiset,
}

impl SplitSequent {
    pub fn new(gamma1: Multiset, gamma2: Multiset, delta1: Multiset, delta2: Multiset) -> Self {
        SplitSequent {
            gamma1,
            gamma2,
            delta1,
            delta2,
        }
    }

    /// `Γ1 ⇒ Δ1`.
    pub fn first(&self) -> Sequent {
        Sequent::new(self.gamma1.clone(), self.delta1.clone())
    }

    /// `Γ2 ⇒ Δ2`.
    pub fn second(&self) -> Sequent {
        Sequent::new(self.gamma2.clone(), self.delta2.clone())
    }

    pub fn merged(&self) -> Sequent {
        Sequent::new(self.gamma1.union(&self.gamma2), self.delta1.union(&self.delta2))
    }

    /// Polarities the interpolant may use: positive atoms must be in
    /// `neg(Γ1⇒Δ1) ∩ pos(Γ2⇒Δ2)`, negative ones in
    /// `pos(Γ1⇒Δ1) ∩ neg(Γ2⇒Δ2)`.
    pub fn allowed(&self) -> PolaritySets {
        polarity(&self.first()).flipped().intersect(&polarity(&self.second()))
    }
}

/// Which part of the split a principal formula was taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    First,
    Second,
}

/// The case of the construction used at one proof node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Case {
    /// Axiom; the interpolant is `⊥`, `⊤`, `p` or `¬p`.
    Axiom { interpolant: Formula },
    ImpR { part: Part },
    /// `∨` for a principal formula from `Γ1`, `∧` from `Γ2`.
    ImpL { part: Part, disjunction: bool },
    Refl { part: Part },
    /// Box rule with `A ∈ Λj`: continue with the left premise.
    BoxKnown { part: Part },
    /// Box rule with `A ∉ Λj`: `◇` of the right premise's interpolant for
    /// `□A ∈ Δ1`, `□` for `□A ∈ Δ2`.
    BoxFresh { part: Part, diamond: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub node: usize,
    pub split: SplitSequent,
    #[serde(flatten)]
    pub case: Case,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationResult {
    pub interpolant: Formula,
    /// `Λ1*, Γ1 ⇒ Δ1, I`.
    pub left_obligation: Sequent,
    /// `Λ2*, I, Γ2 ⇒ Δ2`.
    pub right_obligation: Sequent,
    /// Cases applied, in the order first visited.
    #[serde(skip)]
    pub trace: Vec<TraceEntry>,
}

impl InterpolationResult {
    /// Whether the interpolant respects the polarities of `split`.
    pub fn polarity_ok(&self, split: &SplitSequent) -> bool {
        PolaritySets::of_formula(&self.interpolant).is_within(&split.allowed())
    }
}

#[derive(Debug, Error)]
pub enum InterpolationError {
    #[error("proof is not valid:\n{0}")]
    Invalid(Report),
    #[error("proof uses cut")]
    HasCut,
    #[error("split `{split}` does not match the root `{root}`")]
    BadSplit { split: Sequent, root: Sequent },
    #[error("not a theorem: countermodel of {} worlds", .model.size())]
    NotTheorem { model: KripkeModel, world: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

type Key = (usize, SplitSequent, BTreeSet<Formula>, BTreeSet<Formula>);

struct Interpolator<'a> {
    proof: &'a CyclicProof,
    memo: HashMap<Key, Formula>,
    active: HashSet<Key>,
    trace: Vec<TraceEntry>,
}

/// Interpolant for the split root of a cut-free cyclic proof.
pub fn interpolate(
    p: &CyclicProof,
    split: &SplitSequent,
    lambda1: &BTreeSet<Formula>,
    lambda2: &BTreeSet<Formula>,
) -> Result<InterpolationResult, InterpolationError> {
    let report = p.check();
    if !report.is_ok() {
        return Err(InterpolationError::Invalid(report));
    }
    if p.uses_cut() || p.system != System::Inf {
        return Err(InterpolationError::HasCut);
    }
    if split.merged() != *p.root() {
        return Err(InterpolationError::BadSplit {
            split: split.merged(),
            root: p.root().clone(),
        });
    }
    let mut it = Interpolator {
        proof: p,
        memo: HashMap::new(),
        active: HashSet::new(),
        trace: Vec::new(),
    };
    let i = it.go(0, split.clone(), lambda1.clone(), lambda2.clone());
    let stars = |l: &BTreeSet<Formula>| -> Multiset { star(l).into_iter().collect() };
    Ok(InterpolationResult {
        left_obligation: Sequent::new(
            stars(lambda1).union(&split.gamma1),
            split.delta1.clone().with(i.clone()),
        ),
        right_obligation: Sequent::new(
            stars(lambda2).union(&split.gamma2).with(i.clone()),
            split.delta2.clone(),
        ),
        interpolant: i,
        trace: it.trace,
    })
}

/// Moves one `from` occurrence of `x` out, puts `to` formulas in.
fn replace(m: &Multiset, x: &Formula, to: &[Formula]) -> Multiset {
    let mut out = m.without(x).expect("principal present in its part");
    for t in to {
        out = out.with(t.clone());
    }
    out
}

impl Interpolator<'_> {
    fn go(&mut self, node: usize, s: SplitSequent, l1: BTreeSet<Formula>, l2: BTreeSet<Formula>) -> Formula {
        let node = self.proof.backlinks.get(&node).copied().unwrap_or(node);
        let key = (node, s, l1, l2);
        if let Some(i) = self.memo.get(&key) {
            return i.clone();
        }
        // the measure (Sub∖Λ1, Sub∖Λ2, local height) decreases on every call
        assert!(self.active.insert(key.clone()), "interpolation revisits node {}", key.0);
        let (node, s, l1, l2) = key;
        let n = &self.proof.nodes[node];
        debug_assert_eq!(s.merged(), n.sequent);
        let rule = n.rule.clone().expect("back-links resolved above");
        let kids = n.children.clone();
        let (case, i) = match &rule {
            Rule::AxAtom(_) | Rule::AxBottom => {
                let i = axiom_interpolant(&s);
                (Case::Axiom { interpolant: i.clone() }, i)
            }
            Rule::ImpR(x) => {
                let (a, b) = x.as_implies().expect("implication");
                let part = if s.delta1.contains(x) { Part::First } else { Part::Second };
                let mut t = s.clone();
                match part {
                    Part::First => {
                        t.gamma1 = t.gamma1.with(a.clone());
                        t.delta1 = replace(&t.delta1, x, std::slice::from_ref(b));
                    }
                    Part::Second => {
                        t.gamma2 = t.gamma2.with(a.clone());
                        t.delta2 = replace(&t.delta2, x, std::slice::from_ref(b));
                    }
                }
                (Case::ImpR { part }, self.go(kids[0], t, l1.clone(), l2.clone()))
            }
            Rule::ImpL(x) => {
                let (a, b) = x.as_implies().expect("implication");
                let part = if s.gamma1.contains(x) { Part::First } else { Part::Second };
                let (mut t1, mut t2) = (s.clone(), s.clone());
                match part {
                    Part::First => {
                        t1.gamma1 = replace(&s.gamma1, x, std::slice::from_ref(b));
                        t2.gamma1 = replace(&s.gamma1, x, &[]);
                        t2.delta1 = s.delta1.clone().with(a.clone());
                    }
                    Part::Second => {
                        t1.gamma2 = replace(&s.gamma2, x, std::slice::from_ref(b));
                        t2.gamma2 = replace(&s.gamma2, x, &[]);
                        t2.delta2 = s.delta2.clone().with(a.clone());
                    }
                }
                let i1 = self.go(kids[0], t1, l1.clone(), l2.clone());
                let i2 = self.go(kids[1], t2, l1.clone(), l2.clone());
                let disjunction = part == Part::First;
                let i = if disjunction { Formula::or(i1, i2) } else { Formula::and(i1, i2) };
                (Case::ImpL { part, disjunction }, i)
            }
            Rule::Refl(x) => {
                let a = x.as_box().expect("boxed");
                let part = if s.gamma1.contains(x) { Part::First } else { Part::Second };
                let mut t = s.clone();
                match part {
                    Part::First => t.gamma1 = t.gamma1.with(a.clone()),
                    Part::Second => t.gamma2 = t.gamma2.with(a.clone()),
                }
                (Case::Refl { part }, self.go(kids[0], t, l1.clone(), l2.clone()))
            }
            Rule::BoxInf(x) => {
                let a = x.as_box().expect("boxed");
                let part = if s.delta1.contains(x) { Part::First } else { Part::Second };
                let known = match part {
                    Part::First => l1.contains(a),
                    Part::Second => l2.contains(a),
                };
                if known {
                    let mut t = s.clone();
                    match part {
                        Part::First => t.delta1 = replace(&s.delta1, x, std::slice::from_ref(a)),
                        Part::Second => t.delta2 = replace(&s.delta2, x, std::slice::from_ref(a)),
                    }
                    (Case::BoxKnown { part }, self.go(kids[0], t, l1.clone(), l2.clone()))
                } else {
                    // split the context by the antecedent parts, Γ1 first
                    let context = &self.proof.nodes[kids[1]].sequent.ant;
                    let (mut pi1, mut pi2) = (Multiset::new(), Multiset::new());
                    for (f, &k) in context.counts() {
                        let in1 = s.gamma1.count(f).min(k);
                        pi1.insert_n(f.clone(), in1);
                        pi2.insert_n(f.clone(), k - in1);
                    }
                    let only_a = Multiset::singleton(a.clone());
                    let (mut m1, mut m2) = (l1.clone(), l2.clone());
                    let t = match part {
                        Part::First => {
                            m1.insert(a.clone());
                            SplitSequent::new(pi1, pi2, only_a, Multiset::new())
                        }
                        Part::Second => {
                            m2.insert(a.clone());
                            SplitSequent::new(pi1, pi2, Multiset::new(), only_a)
                        }
                    };
                    let inner = self.go(kids[1], t, m1, m2);
                    let diamond = part == Part::First;
                    let i = if diamond { Formula::diamond(inner) } else { Formula::boxed(inner) };
                    (Case::BoxFresh { part, diamond }, i)
                }
            }
            r => unreachable!("rule {r} in a cut-free infinitary proof"),
        };
        self.trace.push(TraceEntry {
            node,
            split: s.clone(),
            case,
        });
        let key = (node, s, l1, l2);
        self.active.remove(&key);
        self.memo.insert(key, i.clone());
        i
    }
}

fn axiom_interpolant(s: &SplitSequent) -> Formula {
    if s.first().is_atomic_initial() {
        return Formula::bottom();
    }
    if s.second().is_atomic_initial() {
        return Formula::top();
    }
    if let Some(p) = s.gamma1.distinct().find(|p| p.is_atom() && s.delta2.contains(p)) {
        return p.clone();
    }
    let p = s
        .gamma2
        .distinct()
        .find(|p| p.is_atom() && s.delta1.contains(p))
        .expect("initial sequent");
    Formula::not(p.clone())
}

/// Lyndon interpolant of `A → B`: proves `A ⇒ B`, interpolates with
/// `A` on the first side and `B` on the second, then checks the
/// polarities and proves `A ⇒ C` and `C ⇒ B`.
pub fn lyndon(a: &Formula, b: &Formula, config: &ProverConfig) -> Result<InterpolationResult, InterpolationError> {
    let goal = Sequent::new(Multiset::singleton(a.clone()), Multiset::singleton(b.clone()));
    let proof = match decide(&goal, config)? {
        Verdict::Proof { proof } => proof,
        Verdict::Countermodel { model, world } => {
            return Err(InterpolationError::NotTheorem { model, world })
        }
    };
    let split = SplitSequent::new(
        Multiset::singleton(a.clone()),
        Multiset::new(),
        Multiset::new(),
        Multiset::singleton(b.clone()),
    );
    let r = interpolate(&proof, &split, &BTreeSet::new(), &BTreeSet::new())?;
    let c = PolaritySets::of_formula(&r.interpolant);
    let (pa, pb) = (PolaritySets::of_formula(a), PolaritySets::of_formula(b));
    if !c.pos.is_subset(&pa.pos) || !c.pos.is_subset(&pb.pos) {
        return Err(InterpolationError::Verification(format!(
            "positive atoms of `{}` not shared positively",
            r.interpolant
        )));
    }
    if !c.neg.is_subset(&pa.neg) || !c.neg.is_subset(&pb.neg) {
        return Err(InterpolationError::Verification(format!(
            "negative atoms of `{}` not shared negatively",
            r.interpolant
        )));
    }
    for ob in [&r.left_obligation, &r.right_obligation] {
        if !decide(ob, config)?.is_proof() {
            return Err(InterpolationError::Verification(format!("`{ob}` is not provable")));
        }
    }
    Ok(r)
}
