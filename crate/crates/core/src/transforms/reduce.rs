//! Cut reduction (`re_A`), cut elimination (`ce`), contraction and
//! slimming.
//!
//! Each operator is a lazy node whose expansion inspects only the last
//! rules of its inputs; recursive calls either shrink an input within its
//! main fragment or sit behind a right premise of the box rule. That is
//! the operational content of the fixed points the operators are defined
//! as, and it makes every finite fragment of the output computable.

use crate::calculus::{closing_axiom, Rule, System};
use crate::proofs::{Def, Inversion, LazyProof, ProofStore, Resolved, Side, Step};
use crate::syntax::{Formula, FormulaKind, Multiset, Sequent};

use super::TransformError;

/// `Γ ⇒ Δ` when `(π, τ)` proves `Γ ⇒ Δ,A` and `A,Γ ⇒ Δ`.
pub(crate) fn cut_result(pi: &Sequent, tau: &Sequent, a: &Formula) -> Option<Sequent> {
    let g = pi.without_succ(a)?;
    (tau.without_ant(a)? == g).then_some(g)
}

impl ProofStore {
    /// `re_A(π, τ)`: a proof of the cut result of a cut pair, and `π`
    /// itself for any other pair.
    pub fn re(&self, a: &Formula, pi: LazyProof, tau: LazyProof) -> LazyProof {
        let a2 = a.clone();
        self.intern(
            Def::Re {
                a: a.clone(),
                pi,
                tau,
            },
            move |s| {
                let (sp, st) = (s.sequent(pi), s.sequent(tau));
                cut_result(&sp, &st, &a2).unwrap_or_else(|| (*sp).clone())
            },
        )
    }

    /// An explicit cut on `a`; premises must form a cut pair.
    pub fn cut(&self, a: &Formula, pi: LazyProof, tau: LazyProof) -> Result<LazyProof, TransformError> {
        let (sp, st) = (self.sequent(pi), self.sequent(tau));
        let g = cut_result(&sp, &st, a).ok_or_else(|| {
            TransformError::NotCutPair(a.clone(), (*sp).clone(), (*st).clone())
        })?;
        Ok(self.node(g, Rule::Cut(a.clone()), vec![pi, tau]))
    }

    /// Cut elimination.
    pub fn ce(&self, pi: LazyProof) -> LazyProof {
        self.intern(Def::Ce(pi), move |s| (*s.sequent(pi)).clone())
    }

    /// `cl_A` / `cr_A`: removes one of two copies of `a` on `side`.
    pub fn contract(&self, pi: LazyProof, side: Side, a: &Formula) -> Result<LazyProof, TransformError> {
        let s = self.sequent(pi);
        match side {
            Side::Left => {
                let rest = s
                    .ant
                    .without(a)
                    .and_then(|m| m.without(a))
                    .ok_or_else(|| TransformError::NoDuplicate(a.clone(), (*s).clone()))?;
                let ax = self.ax_proof(&rest, a, &s.succ);
                Ok(self.re(a, ax, pi))
            }
            Side::Right => {
                let rest = s
                    .succ
                    .without(a)
                    .and_then(|m| m.without(a))
                    .ok_or_else(|| TransformError::NoDuplicate(a.clone(), (*s).clone()))?;
                let ax = self.ax_proof(&s.ant, a, &rest);
                Ok(self.re(a, pi, ax))
            }
        }
    }

    /// Rebuilds `pi` so that every right premise of the box rule has a
    /// set of boxed formulas on the left.
    pub fn slim(&self, pi: LazyProof) -> LazyProof {
        self.intern(Def::Slim(pi), move |s| (*s.sequent(pi)).clone())
    }

    /// Contracts duplicate antecedent formulas of `pi` down to a set.
    pub(crate) fn dedupe_left(&self, mut pi: LazyProof) -> LazyProof {
        let s = self.sequent(pi);
        for (f, &n) in s.ant.counts() {
            for _ in 1..n {
                pi = self
                    .contract(pi, Side::Left, f)
                    .expect("duplicate present by construction");
            }
        }
        pi
    }
}

fn axiom_step(s: &Sequent) -> Resolved {
    let rule = closing_axiom(s, System::Inf).unwrap_or_else(|| panic!("`{s}` is not initial"));
    Resolved::Step(Step {
        rule,
        premises: Vec::new(),
    })
}

pub(crate) fn expand_ce(store: &ProofStore, pi: LazyProof) -> Resolved {
    let step = store.step(pi);
    match &step.rule {
        Rule::Cut(a) => {
            let (l, r) = (store.ce(step.premises[0]), store.ce(step.premises[1]));
            Resolved::Alias(store.re(a, l, r))
        }
        _ => Resolved::Step(Step {
            premises: step.premises.iter().map(|&p| store.ce(p)).collect(),
            rule: step.rule,
        }),
    }
}

pub(crate) fn expand_slim(store: &ProofStore, pi: LazyProof) -> Resolved {
    let step = store.step(pi);
    let premises = match &step.rule {
        Rule::BoxInf(_) => vec![
            store.slim(step.premises[0]),
            store.slim(store.dedupe_left(step.premises[1])),
        ],
        _ => step.premises.iter().map(|&p| store.slim(p)).collect(),
    };
    Resolved::Step(Step {
        rule: step.rule,
        premises,
    })
}

pub(crate) fn expand_re(
    store: &ProofStore,
    this: LazyProof,
    a: &Formula,
    pi: LazyProof,
    tau: LazyProof,
) -> Resolved {
    let (sp, st) = (store.sequent(pi), store.sequent(tau));
    let Some(goal) = cut_result(&sp, &st, a) else {
        return Resolved::Alias(pi);
    };
    debug_assert_eq!(goal, *store.sequent(this));
    match a.kind() {
        FormulaKind::Bottom => Resolved::Alias(store.inv(pi, Inversion::IBot, a)),
        FormulaKind::Implies(b, c) => {
            // re_C(re_B(wk_{∅,C}(ri τ), i π), li τ)
            let ri = store.inv(tau, Inversion::RiImp, a);
            let wk = store.wk(ri, &Multiset::new(), &Multiset::singleton(c.clone()));
            let inner = store.re(b, wk, store.inv(pi, Inversion::IImp, a));
            Resolved::Alias(store.re(c, inner, store.inv(tau, Inversion::LiImp, a)))
        }
        FormulaKind::Atom(_) => {
            let step = store.step(pi);
            if step.rule.is_axiom() {
                if goal.is_atomic_initial() {
                    return axiom_step(&goal);
                }
                // π is initial only through a copy of p on the left
                return Resolved::Alias(
                    store
                        .atomic_contract(tau, Side::Left, a)
                        .expect("p occurs twice on the left of τ"),
                );
            }
            along_pi(store, a, &step, tau)
        }
        FormulaKind::Box(b) => {
            if goal.is_atomic_initial() {
                return axiom_step(&goal);
            }
            let step = store.step(pi);
            match &step.rule {
                Rule::BoxInf(x) if x == a => along_tau(store, a, b, pi, &step, tau, &goal),
                _ => along_pi(store, a, &step, tau),
            }
        }
    }
}

/// Cases driven by the last rule of `π` (its principal is not the cut
/// formula).
fn along_pi(store: &ProofStore, a: &Formula, step: &Step, tau: LazyProof) -> Resolved {
    let p = &step.premises;
    let none = Multiset::new;
    let premises = match &step.rule {
        Rule::ImpR(x) => vec![store.re(a, p[0], store.inv(tau, Inversion::IImp, x))],
        Rule::ImpL(x) => vec![
            store.re(a, p[0], store.inv(tau, Inversion::LiImp, x)),
            store.re(a, p[1], store.inv(tau, Inversion::RiImp, x)),
        ],
        Rule::Refl(x) => {
            let inner = x.as_box().expect("refl principal is boxed");
            vec![store.re(a, p[0], store.wk(tau, &Multiset::singleton(inner.clone()), &none()))]
        }
        Rule::Cut(x) => vec![
            store.re(a, p[0], store.wk(tau, &none(), &Multiset::singleton(x.clone()))),
            store.re(a, p[1], store.wk(tau, &Multiset::singleton(x.clone()), &none())),
        ],
        Rule::BoxInf(x) => vec![store.re(a, p[0], store.inv(tau, Inversion::LiBox, x)), p[1]],
        r => panic!("unexpected rule {r} in cut reduction"),
    };
    Resolved::Step(Step {
        rule: step.rule.clone(),
        premises,
    })
}

/// `π` ends in the box rule introducing the cut formula `□B`; proceed by
/// the last rule of `τ`.
fn along_tau(
    store: &ProofStore,
    a: &Formula,
    b: &Formula,
    pi: LazyProof,
    pi_step: &Step,
    tau: LazyProof,
    goal: &Sequent,
) -> Resolved {
    let u = |x: LazyProof, y: LazyProof| store.re(a, x, y);
    let none = Multiset::new;
    let step = store.step(tau);
    let t = &step.premises;
    let premises = match &step.rule {
        Rule::Refl(x) if x == a => {
            // re_B(π₀, u(wk_{B,∅} π, τ₀))
            let inner = u(store.wk(pi, &Multiset::singleton(b.clone()), &none()), t[0]);
            return Resolved::Alias(store.re(b, pi_step.premises[0], inner));
        }
        Rule::Refl(x) => {
            let c = x.as_box().expect("refl principal is boxed");
            vec![u(store.wk(pi, &Multiset::singleton(c.clone()), &none()), t[0])]
        }
        Rule::ImpR(x) => vec![u(store.inv(pi, Inversion::IImp, x), t[0])],
        Rule::ImpL(x) => vec![
            u(store.inv(pi, Inversion::LiImp, x), t[0]),
            u(store.inv(pi, Inversion::RiImp, x), t[1]),
        ],
        Rule::Cut(x) => vec![
            u(store.wk(pi, &none(), &Multiset::singleton(x.clone())), t[0]),
            u(store.wk(pi, &Multiset::singleton(x.clone()), &none()), t[1]),
        ],
        Rule::BoxInf(x) => {
            let c = x.as_box().expect("box principal is boxed");
            let left = u(store.inv(pi, Inversion::LiBox, x), t[0]);
            let ctx_tau = store.sequent(t[1]).ant.clone();
            if ctx_tau.is_sub(&goal.ant) {
                vec![left, t[1]]
            } else {
                // the right premise of τ uses □B: rebuild it over
                // π′ = □(wk(π₁), π₁) of □Π′∖□Π, □Π ⇒ □B, C
                let pi1 = pi_step.premises[1];
                let ctx_pi = store.sequent(pi1).ant.clone();
                let ctx_rest = ctx_tau.without(a).expect("□B in the context of τ");
                let extra = ctx_rest.difference(&ctx_pi);
                let joined = extra.union(&ctx_pi);
                let pi_prime = store.node(
                    Sequent::new(joined, Multiset::singleton(c.clone()).with(a.clone())),
                    Rule::BoxInf(a.clone()),
                    vec![store.wk(pi1, &extra, &Multiset::singleton(c.clone())), pi1],
                );
                let tau_w = store.wk(t[1], &ctx_pi.difference(&ctx_rest), &none());
                vec![left, u(pi_prime, tau_w)]
            }
        }
        r => panic!("unexpected rule {r} in cut reduction"),
    };
    Resolved::Step(Step {
        rule: step.rule.clone(),
        premises,
    })
}
