//! Proof transformations: structural operations, cut elimination,
//! slimming, folding into cyclic proofs and the translations between the
//! finitary and the non-well-founded calculus.

mod fold;
mod reduce;
mod structural;
mod translate;

pub use fold::FoldLimits;
pub use translate::{grz_schema_proof, inf_to_seq};

use thiserror::Error;

use crate::calculus::System;
use crate::proofs::{Def, LazyProof, ProofStore, Report, Resolved, Step};
use crate::syntax::{Formula, Sequent};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("`{0}` does not occur where required in `{1}`")]
    MissingFormula(Formula, Sequent),
    #[error("`{0}` is not an atom")]
    NotAtomic(Formula),
    #[error("no two copies of `{0}` in `{1}`")]
    NoDuplicate(Formula, Sequent),
    #[error("`{1}` and `{2}` are not premises of a cut on `{0}`")]
    NotCutPair(Formula, Sequent, Sequent),
    #[error("cut in proof of `{0}`")]
    HasCut(Sequent),
    #[error("proof exceeds {0} nodes")]
    TooLarge(usize),
    #[error("proof is not valid:\n{0}")]
    Invalid(Report),
    #[error("operation not defined for proofs in {0:?}")]
    WrongSystem(System),
}

/// One level of expansion of a lazy definition.
pub(crate) fn expand(store: &ProofStore, def: &Def, this: LazyProof) -> Resolved {
    match def {
        Def::Node { rule, premises, .. } => Resolved::Step(Step {
            rule: rule.clone(),
            premises: premises.clone(),
        }),
        Def::Cyclic { proof, node } => {
            let p = store.cyclic(*proof);
            if let Some(&target) = p.backlinks.get(node) {
                return Resolved::Alias(store.cyclic_node(*proof, target));
            }
            let n = &p.nodes[*node];
            Resolved::Step(Step {
                rule: n.rule.clone().expect("validated proof"),
                premises: n
                    .children
                    .iter()
                    .map(|&c| store.cyclic_node(*proof, c))
                    .collect(),
            })
        }
        Def::AxProof { gamma, a, delta } => structural::expand_ax_proof(store, gamma, a, delta),
        Def::Wk { pi, left, right } => structural::expand_wk(store, *pi, left, right),
        Def::Invert { pi, kind, target } => {
            structural::expand_invert(store, this, *pi, *kind, target)
        }
        Def::AtomContract { pi, side, atom } => {
            structural::expand_atom_contract(store, this, *pi, *side, atom)
        }
        Def::Re { a, pi, tau } => reduce::expand_re(store, this, a, *pi, *tau),
        Def::Ce(pi) => reduce::expand_ce(store, *pi),
        Def::Slim(pi) => reduce::expand_slim(store, *pi),
    }
}
