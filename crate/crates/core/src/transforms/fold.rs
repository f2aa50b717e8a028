//! Turning lazy proofs into finite cyclic proofs.

use std::collections::{BTreeMap, HashMap};

use crate::calculus::{Rule, System};
use crate::proofs::{is_right_premise, CyclicProof, LazyProof, ProofNode, ProofStore};
use crate::syntax::Sequent;

use super::TransformError;

/// Limits for [`ProofStore::regularize`].
#[derive(Clone, Copy, Debug)]
pub struct FoldLimits {
    /// Maximum number of nodes in the produced cyclic proof.
    pub max_nodes: usize,
}

impl Default for FoldLimits {
    fn default() -> Self {
        FoldLimits { max_nodes: 2_000_000 }
    }
}

pub(crate) struct Folder<'a> {
    store: &'a ProofStore,
    pub(crate) nodes: Vec<ProofNode>,
    pub(crate) backlinks: BTreeMap<usize, usize>,
    on_path: HashMap<LazyProof, usize>,
    rp_on_path: HashMap<Sequent, usize>,
    by_sequent: bool,
    allow_cut: bool,
    limits: FoldLimits,
    pub(crate) saw_cut: bool,
}

impl<'a> Folder<'a> {
    pub(crate) fn new(store: &'a ProofStore, by_sequent: bool, allow_cut: bool, limits: FoldLimits) -> Self {
        Folder {
            store,
            nodes: Vec::new(),
            backlinks: BTreeMap::new(),
            on_path: HashMap::new(),
            rp_on_path: HashMap::new(),
            by_sequent,
            allow_cut,
            limits,
            saw_cut: false,
        }
    }

    /// Appends the subproof `h` and returns its node id. At a right
    /// premise, a repeat of an ancestor (same handle, or same right-premise
    /// sequent when folding by sequent) becomes a back-link leaf.
    pub(crate) fn visit(&mut self, h: LazyProof, right_premise: bool) -> Result<usize, TransformError> {
        let h = self.store.resolve(h);
        let sequent = (*self.store.sequent(h)).clone();
        if right_premise {
            let target = self.on_path.get(&h).copied().or_else(|| {
                self.by_sequent
                    .then(|| self.rp_on_path.get(&sequent).copied())
                    .flatten()
            });
            if let Some(t) = target {
                let id = self.push(sequent, None)?;
                self.backlinks.insert(id, t);
                return Ok(id);
            }
        }
        let step = self.store.step(h);
        if matches!(step.rule, Rule::Cut(_)) {
            if !self.allow_cut {
                return Err(TransformError::HasCut(sequent));
            }
            self.saw_cut = true;
        }
        let id = self.push(sequent.clone(), Some(step.rule.clone()))?;
        let fresh_handle = !self.on_path.contains_key(&h);
        if fresh_handle {
            self.on_path.insert(h, id);
        }
        let fresh_rp = right_premise && !self.rp_on_path.contains_key(&sequent);
        if fresh_rp {
            self.rp_on_path.insert(sequent.clone(), id);
        }
        let mut children = Vec::with_capacity(step.premises.len());
        for (k, &p) in step.premises.iter().enumerate() {
            children.push(self.visit(p, is_right_premise(&step.rule, k))?);
        }
        self.nodes[id].children = children;
        if fresh_handle {
            self.on_path.remove(&h);
        }
        if fresh_rp {
            self.rp_on_path.remove(&sequent);
        }
        Ok(id)
    }

    fn push(&mut self, sequent: Sequent, rule: Option<Rule>) -> Result<usize, TransformError> {
        if self.nodes.len() >= self.limits.max_nodes {
            return Err(TransformError::TooLarge(self.limits.max_nodes));
        }
        self.nodes.push(ProofNode {
            sequent,
            rule,
            children: Vec::new(),
        });
        Ok(self.nodes.len() - 1)
    }

    pub(crate) fn finish(self, system: System) -> CyclicProof {
        CyclicProof {
            system,
            nodes: self.nodes,
            backlinks: self.backlinks,
        }
    }
}

impl ProofStore {
    /// Folds a slim cut-free ∞-proof into a cyclic proof: walking leafward,
    /// the first right premise that repeats an ancestor right premise (or
    /// an ancestor handle) becomes a back-link. Fails on cuts and when the
    /// size limit is hit (which a slim proof with the subformula property
    /// cannot cause).
    pub fn regularize(&self, pi: LazyProof, limits: FoldLimits) -> Result<CyclicProof, TransformError> {
        let mut f = Folder::new(self, true, false, limits);
        f.visit(pi, false)?;
        let p = f.finish(System::Inf);
        debug_assert!(p.check().is_ok(), "{}", p.check());
        Ok(p)
    }

    /// Folds a lazy proof whose handle graph is finite, back-linking only
    /// on repeated handles, so the unravelling is unchanged. Cuts are kept.
    pub fn to_cyclic(&self, pi: LazyProof, limits: FoldLimits) -> Result<CyclicProof, TransformError> {
        let mut f = Folder::new(self, false, true, limits);
        f.visit(pi, false)?;
        let system = if f.saw_cut { System::InfCut } else { System::Inf };
        Ok(f.finish(system))
    }
}
