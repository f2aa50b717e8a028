//! Proof objects: finite trees, cyclic proofs, fragments and lazily
//! expanded ∞-proofs.

mod fragment;
mod graph;
mod store;

pub use fragment::{FragNode, Fragment};
pub use graph::{check_cyclic, check_wf, CyclicProof, ProofNode, ProofTree, Report, Violation, WfProof};
pub use store::{is_right_premise, Distance, Inversion, LazyProof, ProofStore, Side, Step};

pub(crate) use store::{Def, Resolved};

impl CyclicProof {
    /// The `n`-fragment of the unravelling.
    pub fn unravel(&self, n: usize) -> Result<Fragment, Report> {
        let store = ProofStore::new();
        let h = store.load_cyclic(self)?;
        Ok(store.fragment(h, n))
    }

    /// Local height of the unravelling.
    pub fn local_height(&self) -> Result<usize, Report> {
        let store = ProofStore::new();
        let h = store.load_cyclic(self)?;
        Ok(store.local_height(h))
    }
}
