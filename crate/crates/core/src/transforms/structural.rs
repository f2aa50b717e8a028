//! Weakening, inversions, atomic contraction and identity proofs.

use crate::calculus::{closing_axiom, Rule, System};
use crate::proofs::{Def, Inversion, LazyProof, ProofStore, Resolved, Side, Step};
use crate::syntax::{Formula, FormulaKind, Multiset, Sequent};

use super::TransformError;

impl ProofStore {
    /// `wk_{Π,Σ}`: proof of `Π,Γ ⇒ Δ,Σ` from a proof of `Γ ⇒ Δ`.
    pub fn wk(&self, pi: LazyProof, left: &Multiset, right: &Multiset) -> LazyProof {
        if left.is_empty() && right.is_empty() {
            return pi;
        }
        // wk ∘ wk = wk of the sums
        let (pi, left, right) = match self.def(pi) {
            Def::Wk {
                pi: inner,
                left: l0,
                right: r0,
            } => (inner, l0.union(left), r0.union(right)),
            _ => (pi, left.clone(), right.clone()),
        };
        let (l, r) = (left.clone(), right.clone());
        self.intern(Def::Wk { pi, left, right }, move |s| s.sequent(pi).weaken(&l, &r))
    }

    /// One of the five inversions; `target` is the principal formula
    /// (`A→B`, `⊥` or `□A`) that must occur on the relevant side.
    pub fn invert(
        &self,
        pi: LazyProof,
        kind: Inversion,
        target: &Formula,
    ) -> Result<LazyProof, TransformError> {
        let s = self.sequent(pi);
        let out = inverted_sequent(&s, kind, target)
            .ok_or_else(|| TransformError::MissingFormula(target.clone(), (*s).clone()))?;
        Ok(self.intern(
            Def::Invert {
                pi,
                kind,
                target: target.clone(),
            },
            move |_| out,
        ))
    }

    /// Shorthand for inversions whose precondition is known to hold.
    pub(crate) fn inv(&self, pi: LazyProof, kind: Inversion, target: &Formula) -> LazyProof {
        self.invert(pi, kind, target)
            .unwrap_or_else(|e| panic!("internal inversion failed: {e}"))
    }

    /// `acl_p` / `acr_p`: removes one of two copies of the atom `p`.
    pub fn atomic_contract(
        &self,
        pi: LazyProof,
        side: Side,
        atom: &Formula,
    ) -> Result<LazyProof, TransformError> {
        if !atom.is_atom() {
            return Err(TransformError::NotAtomic(atom.clone()));
        }
        let s = self.sequent(pi);
        let ms = match side {
            Side::Left => &s.ant,
            Side::Right => &s.succ,
        };
        if ms.count(atom) < 2 {
            return Err(TransformError::NoDuplicate(atom.clone(), (*s).clone()));
        }
        let out = match side {
            Side::Left => s.without_ant(atom),
            Side::Right => s.without_succ(atom),
        }
        .expect("count checked");
        Ok(self.intern(
            Def::AtomContract {
                pi,
                side,
                atom: atom.clone(),
            },
            move |_| out,
        ))
    }

    /// Cut-free proof of `Γ, A ⇒ A, Δ` with atomic axioms only.
    pub fn ax_proof(&self, gamma: &Multiset, a: &Formula, delta: &Multiset) -> LazyProof {
        let out = Sequent::new(gamma.clone().with(a.clone()), delta.clone().with(a.clone()));
        self.intern(
            Def::AxProof {
                gamma: gamma.clone(),
                a: a.clone(),
                delta: delta.clone(),
            },
            move |_| out,
        )
    }
}

pub(crate) fn inverted_sequent(s: &Sequent, kind: Inversion, target: &Formula) -> Option<Sequent> {
    match kind {
        Inversion::LiImp => {
            let (_, b) = target.as_implies()?;
            Some(s.without_ant(target)?.with_ant(b.clone()))
        }
        Inversion::RiImp => {
            let (a, _) = target.as_implies()?;
            Some(s.without_ant(target)?.with_succ(a.clone()))
        }
        Inversion::IImp => {
            let (a, b) = target.as_implies()?;
            Some(s.without_succ(target)?.with_ant(a.clone()).with_succ(b.clone()))
        }
        Inversion::IBot => {
            if !target.is_bottom() {
                return None;
            }
            s.without_succ(target)
        }
        Inversion::LiBox => {
            let a = target.as_box()?;
            Some(s.without_succ(target)?.with_succ(a.clone()))
        }
    }
}

/// An atomic axiom closing `s`, keeping `old` when it still applies.
pub(crate) fn axiom_for(s: &Sequent, old: &Rule) -> Rule {
    let still = match old {
        Rule::AxBottom => s.ant.contains(&Formula::bottom()),
        Rule::AxAtom(p) => s.ant.contains(p) && s.succ.contains(p),
        _ => false,
    };
    if still {
        return old.clone();
    }
    closing_axiom(s, System::Inf).unwrap_or_else(|| panic!("`{s}` is not initial"))
}

pub(crate) fn expand_wk(store: &ProofStore, pi: LazyProof, left: &Multiset, right: &Multiset) -> Resolved {
    let step = store.step(pi);
    let premises = match &step.rule {
        Rule::BoxInf(_) => vec![store.wk(step.premises[0], left, right), step.premises[1]],
        Rule::BoxGrz(_) => step.premises.clone(),
        _ => step
            .premises
            .iter()
            .map(|&p| store.wk(p, left, right))
            .collect(),
    };
    Resolved::Step(Step {
        rule: step.rule,
        premises,
    })
}

pub(crate) fn expand_invert(
    store: &ProofStore,
    this: LazyProof,
    pi: LazyProof,
    kind: Inversion,
    target: &Formula,
) -> Resolved {
    let step = store.step(pi);
    let principal_hit = step.rule.principal() == Some(target);
    match (&step.rule, kind) {
        (Rule::ImpR(_), Inversion::IImp) if principal_hit => return Resolved::Alias(step.premises[0]),
        (Rule::ImpL(_), Inversion::LiImp) if principal_hit => return Resolved::Alias(step.premises[0]),
        (Rule::ImpL(_), Inversion::RiImp) if principal_hit => return Resolved::Alias(step.premises[1]),
        (Rule::BoxInf(_), Inversion::LiBox) if principal_hit => {
            return Resolved::Alias(step.premises[0])
        }
        _ => {}
    }
    if step.rule.is_axiom() {
        return Resolved::Step(Step {
            rule: axiom_for(&store.sequent(this), &step.rule),
            premises: Vec::new(),
        });
    }
    let premises = match &step.rule {
        Rule::BoxInf(_) => vec![store.inv(step.premises[0], kind, target), step.premises[1]],
        _ => step
            .premises
            .iter()
            .map(|&p| store.inv(p, kind, target))
            .collect(),
    };
    Resolved::Step(Step {
        rule: step.rule,
        premises,
    })
}

pub(crate) fn expand_atom_contract(
    store: &ProofStore,
    this: LazyProof,
    pi: LazyProof,
    side: Side,
    atom: &Formula,
) -> Resolved {
    let step = store.step(pi);
    if step.rule.is_axiom() {
        return Resolved::Step(Step {
            rule: axiom_for(&store.sequent(this), &step.rule),
            premises: Vec::new(),
        });
    }
    let ac = |p| {
        store
            .atomic_contract(p, side, atom)
            .unwrap_or_else(|e| panic!("internal contraction failed: {e}"))
    };
    let premises = match &step.rule {
        Rule::BoxInf(_) => vec![ac(step.premises[0]), step.premises[1]],
        _ => step.premises.iter().map(|&p| ac(p)).collect(),
    };
    Resolved::Step(Step {
        rule: step.rule,
        premises,
    })
}

pub(crate) fn expand_ax_proof(
    store: &ProofStore,
    gamma: &Multiset,
    a: &Formula,
    delta: &Multiset,
) -> Resolved {
    let step = match a.kind() {
        FormulaKind::Bottom => Step {
            rule: Rule::AxBottom,
            premises: Vec::new(),
        },
        FormulaKind::Atom(_) => Step {
            rule: Rule::AxAtom(a.clone()),
            premises: Vec::new(),
        },
        FormulaKind::Implies(b, c) => {
            // Γ,B→C,B ⇒ C,Δ by →L over the two smaller identities
            let mid = Sequent::new(
                gamma.clone().with(a.clone()).with(b.clone()),
                delta.clone().with(c.clone()),
            );
            let left = store.ax_proof(&gamma.clone().with(b.clone()), c, delta);
            let right = store.ax_proof(gamma, b, &delta.clone().with(c.clone()));
            Step {
                rule: Rule::ImpR(a.clone()),
                premises: vec![store.node(mid, Rule::ImpL(a.clone()), vec![left, right])],
            }
        }
        FormulaKind::Box(b) => {
            // refl, then □ with context {□B}; the right premise □B ⇒ B is
            // closed by refl over B,□B ⇒ B
            let mid = Sequent::new(
                gamma.clone().with(a.clone()).with(b.clone()),
                delta.clone().with(a.clone()),
            );
            let only = Multiset::singleton(a.clone());
            let left = store.ax_proof(&gamma.clone().with(a.clone()), b, delta);
            let inner = store.ax_proof(&only, b, &Multiset::new());
            let right = store.node(
                Sequent::new(only.clone(), Multiset::singleton(b.clone())),
                Rule::Refl(a.clone()),
                vec![inner],
            );
            Step {
                rule: Rule::Refl(a.clone()),
                premises: vec![store.node(mid, Rule::BoxInf(a.clone()), vec![left, right])],
            }
        }
    };
    Resolved::Step(step)
}
