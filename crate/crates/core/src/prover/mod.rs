//! Decision procedure: backward search for cyclic proofs, with a Kripke
//! model oracle supplying countermodels.

mod kripke;
mod search;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::proofs::CyclicProof;
use crate::syntax::Sequent;

pub use kripke::{eval, find_countermodel, KripkeModel, ModelError};

#[derive(Clone, Debug)]
pub struct ProverConfig {
    /// Nodes kept in the search tree at any moment.
    pub max_nodes: usize,
    /// Longest branch explored.
    pub max_depth: usize,
    /// Largest model the oracle enumerates after a failed search.
    pub max_model_size: usize,
    pub timeout: Option<Duration>,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            max_nodes: 2_000_000,
            max_depth: 100_000,
            max_model_size: 4,
            timeout: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Proof {
        #[serde(serialize_with = "proof_json")]
        proof: CyclicProof,
    },
    Countermodel { model: KripkeModel, world: usize },
}

fn proof_json<S: serde::Serializer>(p: &CyclicProof, s: S) -> Result<S::Ok, S::Error> {
    p.to_json().serialize(s)
}

impl Verdict {
    pub fn is_proof(&self) -> bool {
        matches!(self, Verdict::Proof { .. })
    }

    pub fn proof(&self) -> Option<&CyclicProof> {
        match self {
            Verdict::Proof { proof } => Some(proof),
            Verdict::Countermodel { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("resource limit reached: {limit}")]
    ResourceLimit { limit: String, partial: CyclicProof },
    #[error("search failed on `{0}` but no countermodel with at most {1} worlds exists")]
    NoCountermodel(Sequent, usize),
}

/// Decides `goal`: a cut-free cyclic proof, or a countermodel.
pub fn decide(goal: &Sequent, config: &ProverConfig) -> Result<Verdict, ProverError> {
    match search::Search::new(config).run(goal)? {
        Some(proof) => {
            debug_assert!(proof.check().is_ok(), "{}", proof.check());
            Ok(Verdict::Proof { proof })
        }
        None => match find_countermodel(goal, config.max_model_size) {
            Some((model, world)) => Ok(Verdict::Countermodel { model, world }),
            None => Err(ProverError::NoCountermodel(goal.clone(), config.max_model_size)),
        },
    }
}

/// Search only: `Some` proof or `None`, without consulting the oracle.
pub fn search(goal: &Sequent, config: &ProverConfig) -> Result<Option<CyclicProof>, ProverError> {
    search::Search::new(config).run(goal)
}
