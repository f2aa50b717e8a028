//! Backward proof search in the cut-free ∞-calculus.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::calculus::{backward, closing_axiom, Rule, System};
use crate::proofs::{CyclicProof, ProofNode};
use crate::syntax::{Formula, Multiset, Sequent};

use super::{ProverConfig, ProverError};

/// A right premise of the box rule seen on the current branch.
struct Seen {
    sequent: Sequent,
    node: usize,
}

pub(crate) struct Search<'a> {
    config: &'a ProverConfig,
    started: Instant,
    nodes: Vec<ProofNode>,
    backlinks: BTreeMap<usize, usize>,
    history: Vec<Seen>,
    steps: u64,
}

type Found = Result<bool, ProverError>;

impl<'a> Search<'a> {
    pub(crate) fn new(config: &'a ProverConfig) -> Self {
        Search {
            config,
            started: Instant::now(),
            nodes: Vec::new(),
            backlinks: BTreeMap::new(),
            history: Vec::new(),
            steps: 0,
        }
    }

    /// Runs the search; `Some` proof when the goal is provable.
    pub(crate) fn run(mut self, goal: &Sequent) -> Result<Option<CyclicProof>, ProverError> {
        if !self.prove(goal.clone(), &BTreeSet::new(), 0)? {
            return Ok(None);
        }
        Ok(Some(CyclicProof {
            system: System::Inf,
            nodes: self.nodes,
            backlinks: self.backlinks,
        }))
    }

    fn limit(&self, what: String) -> ProverError {
        ProverError::ResourceLimit {
            limit: what,
            partial: CyclicProof {
                system: System::Inf,
                nodes: self.nodes.clone(),
                backlinks: self.backlinks.clone(),
            },
        }
    }

    fn push(&mut self, sequent: Sequent, rule: Option<Rule>) -> Result<usize, ProverError> {
        if self.nodes.len() >= self.config.max_nodes {
            return Err(self.limit(format!("{} proof nodes", self.config.max_nodes)));
        }
        self.nodes.push(ProofNode {
            sequent,
            rule,
            children: Vec::new(),
        });
        Ok(self.nodes.len() - 1)
    }

    /// Drops everything created from `id` on (the failed attempt).
    fn undo(&mut self, id: usize) {
        self.nodes.truncate(id);
        self.backlinks.retain(|&leaf, _| leaf < id);
    }

    /// One-premise rule applied to `goal`, continuing in the same world.
    fn single(&mut self, goal: Sequent, rule: Rule, premise: Sequent, unfolded: &BTreeSet<Formula>, depth: usize) -> Found {
        let id = self.push(goal, Some(rule))?;
        if self.prove(premise, unfolded, depth + 1)? {
            self.nodes[id].children = vec![id + 1];
            Ok(true)
        } else {
            self.undo(id);
            Ok(false)
        }
    }

    /// `unfolded`: boxed formulas already unfolded by refl in this world.
    fn prove(&mut self, goal: Sequent, unfolded: &BTreeSet<Formula>, depth: usize) -> Found {
        self.steps += 1;
        if depth > self.config.max_depth {
            return Err(self.limit(format!("search depth {}", self.config.max_depth)));
        }
        if self.steps.is_multiple_of(1024) {
            if let Some(t) = self.config.timeout {
                if self.started.elapsed() > t {
                    return Err(self.limit(format!("timeout of {t:?}")));
                }
            }
        }
        if let Some(rule) = closing_axiom(&goal, System::Inf) {
            self.push(goal, Some(rule))?;
            return Ok(true);
        }
        // invertible propositional rules
        let imp_right = goal.succ.distinct().find(|a| a.as_implies().is_some()).cloned();
        if let Some(a) = imp_right {
            let rule = Rule::ImpR(a);
            let premise = backward(&rule, &goal).expect("applicable").remove(0);
            return self.single(goal, rule, premise, unfolded, depth);
        }
        let imp_left = goal.ant.distinct().find(|a| a.as_implies().is_some()).cloned();
        if let Some(a) = imp_left {
            let rule = Rule::ImpL(a);
            let premises = backward(&rule, &goal).expect("applicable");
            let id = self.push(goal, Some(rule))?;
            let mut children = Vec::with_capacity(2);
            for p in premises {
                children.push(self.nodes.len());
                if !self.prove(p, unfolded, depth + 1)? {
                    self.undo(id);
                    return Ok(false);
                }
            }
            self.nodes[id].children = children;
            return Ok(true);
        }
        let refl = goal
            .ant
            .distinct()
            .find(|b| b.is_boxed() && !unfolded.contains(*b))
            .cloned();
        if let Some(b) = refl {
            let rule = Rule::Refl(b.clone());
            let premise = backward(&rule, &goal).expect("applicable").remove(0);
            let mut more = unfolded.clone();
            more.insert(b);
            return self.single(goal, rule, premise, &more, depth);
        }
        // the box rule, one boxed succedent formula at a time
        let context: Multiset = goal.ant.boxed_part().to_set();
        let candidates: Vec<Formula> = goal.succ.distinct().filter(|a| a.is_boxed()).cloned().collect();
        for bx in candidates {
            let a = bx.as_box().expect("boxed").clone();
            let right = Sequent::new(context.clone(), Multiset::singleton(a.clone()));
            let left = goal
                .without_succ(&bx)
                .expect("present")
                .with_succ(a.clone());
            let id = self.push(goal.clone(), Some(Rule::BoxInf(bx.clone())))?;
            let right_id = self.nodes.len();
            let repeat = self
                .history
                .iter()
                .find(|s| s.sequent == right)
                .map(|s| s.node);
            let right_ok = match repeat {
                Some(target) => {
                    self.push(right, None)?;
                    self.backlinks.insert(right_id, target);
                    true
                }
                None => {
                    self.history.push(Seen {
                        sequent: right.clone(),
                        node: right_id,
                    });
                    let ok = self.prove(right, &BTreeSet::new(), depth + 1);
                    self.history.pop();
                    ok?
                }
            };
            if !right_ok {
                self.undo(id);
                continue;
            }
            let left_id = self.nodes.len();
            if !self.prove(left, unfolded, depth + 1)? {
                // the left premise is an inversion of the goal
                self.undo(id);
                return Ok(false);
            }
            self.nodes[id].children = vec![left_id, right_id];
            return Ok(true);
        }
        Ok(false)
    }
}
