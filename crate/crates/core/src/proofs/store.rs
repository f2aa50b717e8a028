//! Demand-driven ∞-proofs.
//!
//! A [`LazyProof`] is a handle into a [`ProofStore`]. Each handle is keyed
//! by the expression that defines it (an explicit rule node, a node of a
//! loaded cyclic proof, or a transformer applied to other handles), so
//! equal expressions share one handle and every expansion is computed at
//! most once. Regular proofs therefore become finite graphs of handles.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, MutexGuard};
use std::thread::{self, ThreadId};

use crate::calculus::{explain_step, Rule, RuleInstance, StepError, System};
use crate::syntax::{Formula, Multiset, Sequent};

use super::fragment::{FragNode, Fragment};
use super::graph::{CyclicProof, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LazyProof(pub(crate) u32);

impl LazyProof {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The last rule of a proof and the handles of its premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<LazyProof>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inversion {
    /// `Γ, A→B ⇒ Δ` to `Γ, B ⇒ Δ`
    LiImp,
    /// `Γ, A→B ⇒ Δ` to `Γ ⇒ A, Δ`
    RiImp,
    /// `Γ ⇒ A→B, Δ` to `Γ, A ⇒ B, Δ`
    IImp,
    /// `Γ ⇒ ⊥, Δ` to `Γ ⇒ Δ`
    IBot,
    /// `Γ ⇒ □A, Δ` to `Γ ⇒ A, Δ`
    LiBox,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Def {
    Node {
        sequent: Sequent,
        rule: Rule,
        premises: Vec<LazyProof>,
    },
    Cyclic {
        proof: usize,
        node: usize,
    },
    AxProof {
        gamma: Multiset,
        a: Formula,
        delta: Multiset,
    },
    Wk {
        pi: LazyProof,
        left: Multiset,
        right: Multiset,
    },
    Invert {
        pi: LazyProof,
        kind: Inversion,
        target: Formula,
    },
    AtomContract {
        pi: LazyProof,
        side: Side,
        atom: Formula,
    },
    Re {
        a: Formula,
        pi: LazyProof,
        tau: LazyProof,
    },
    Ce(LazyProof),
    Slim(LazyProof),
}

pub(crate) enum Resolved {
    Step(Step),
    Alias(LazyProof),
}

enum State {
    Pending,
    Busy(ThreadId),
    Done(Step),
    Alias(LazyProof),
}

struct Entry {
    def: Def,
    sequent: Arc<Sequent>,
    state: State,
}

#[derive(Default)]
struct Inner {
    entries: Vec<Entry>,
    index: HashMap<Def, LazyProof>,
    cyclics: Vec<Arc<CyclicProof>>,
}

/// Arena of lazily expanded proofs. Shareable across threads; the lock is
/// never held while a node is being expanded.
#[derive(Default)]
pub struct ProofStore {
    inner: Mutex<Inner>,
}

impl ProofStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Number of handles created so far.
    pub fn len(&self) -> usize {
        self.lock().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn intern(&self, def: Def, sequent: impl FnOnce(&Self) -> Sequent) -> LazyProof {
        if let Some(&h) = self.lock().index.get(&def) {
            return h;
        }
        let sequent = Arc::new(sequent(self));
        let mut inner = self.lock();
        if let Some(&h) = inner.index.get(&def) {
            return h;
        }
        let h = LazyProof(u32::try_from(inner.entries.len()).expect("proof store overflow"));
        inner.entries.push(Entry {
            def: def.clone(),
            sequent,
            state: State::Pending,
        });
        inner.index.insert(def, h);
        h
    }

    pub(crate) fn def(&self, h: LazyProof) -> Def {
        self.lock().entries[h.index()].def.clone()
    }

    pub(crate) fn cyclic(&self, id: usize) -> Arc<CyclicProof> {
        self.lock().cyclics[id].clone()
    }

    /// Conclusion of `h`; known without expanding it.
    pub fn sequent(&self, h: LazyProof) -> Arc<Sequent> {
        self.lock().entries[h.index()].sequent.clone()
    }

    /// Explicit rule node. Not validated; see [`ProofStore::check_fragment`].
    pub fn node(&self, sequent: Sequent, rule: Rule, premises: Vec<LazyProof>) -> LazyProof {
        let seq = sequent.clone();
        self.intern(
            Def::Node {
                sequent,
                rule,
                premises,
            },
            move |_| seq,
        )
    }

    /// Axiom node.
    pub fn axiom(&self, sequent: Sequent, rule: Rule) -> LazyProof {
        self.node(sequent, rule, Vec::new())
    }

    /// Loads a cyclic proof (after checking it); the handle denotes its
    /// unravelling.
    pub fn load_cyclic(&self, p: &CyclicProof) -> Result<LazyProof, Report> {
        p.validated()?;
        let id = {
            let mut inner = self.lock();
            match inner.cyclics.iter().position(|c| **c == *p) {
                Some(id) => id,
                None => {
                    inner.cyclics.push(Arc::new(p.clone()));
                    inner.cyclics.len() - 1
                }
            }
        };
        Ok(self.cyclic_node(id, 0))
    }

    pub(crate) fn cyclic_node(&self, proof: usize, node: usize) -> LazyProof {
        self.intern(Def::Cyclic { proof, node }, |s| {
            s.cyclic(proof).nodes[node].sequent.clone()
        })
    }

    /// Expands `h` (following delegations) and returns its last step.
    pub fn step(&self, h: LazyProof) -> Step {
        let h = self.resolve(h);
        match &self.lock().entries[h.index()].state {
            State::Done(step) => step.clone(),
            _ => unreachable!("resolved handle is expanded"),
        }
    }

    /// Canonical handle: `h` with all delegations followed. Two handles
    /// with the same canonical handle denote the same ∞-proof.
    pub fn resolve(&self, mut h: LazyProof) -> LazyProof {
        let mut hops = 0usize;
        loop {
            match self.force(h) {
                Some(next) => {
                    h = next;
                    hops += 1;
                    assert!(hops < 1 << 24, "delegation chain does not terminate");
                }
                None => return h,
            }
        }
    }

    /// Expands `h` one level. Returns the delegate if `h` is an alias.
    fn force(&self, h: LazyProof) -> Option<LazyProof> {
        let me = thread::current().id();
        let def = {
            let mut inner = self.lock();
            let e = &mut inner.entries[h.index()];
            match e.state {
                State::Done(_) => return None,
                State::Alias(next) => return Some(next),
                State::Busy(owner) if owner == me => {
                    panic!(
                        "unproductive recursion while expanding proof of {}",
                        e.sequent
                    )
                }
                _ => {}
            }
            e.state = State::Busy(me);
            e.def.clone()
        };
        let resolved = crate::transforms::expand(self, &def, h);
        let mut inner = self.lock();
        let e = &mut inner.entries[h.index()];
        match resolved {
            Resolved::Step(step) => {
                e.state = State::Done(step);
                None
            }
            Resolved::Alias(next) => {
                e.state = State::Alias(next);
                Some(next)
            }
        }
    }

    /// Conclusions of the premises of `step`.
    pub fn instance(&self, h: LazyProof) -> RuleInstance {
        let step = self.step(h);
        RuleInstance {
            rule: step.rule,
            conclusion: (*self.sequent(h)).clone(),
            premises: step
                .premises
                .iter()
                .map(|&p| (*self.sequent(p)).clone())
                .collect(),
        }
    }

    /// The `n`-fragment: every branch is cut at its `n`-th right premise
    /// of the box rule, which becomes an open leaf.
    pub fn fragment(&self, h: LazyProof, n: usize) -> Fragment {
        Fragment {
            depth: n,
            root: if n == 0 {
                FragNode::Open((*self.sequent(h)).clone())
            } else {
                self.frag_node(h, n)
            },
        }
    }

    fn frag_node(&self, h: LazyProof, left: usize) -> FragNode {
        let step = self.step(h);
        let children = step
            .premises
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if is_right_premise(&step.rule, k) {
                    if left == 1 {
                        FragNode::Open((*self.sequent(c)).clone())
                    } else {
                        self.frag_node(c, left - 1)
                    }
                } else {
                    self.frag_node(c, left)
                }
            })
            .collect();
        FragNode::Node {
            sequent: (*self.sequent(h)).clone(),
            rule: step.rule,
            children,
        }
    }

    /// Local height: longest branch of the main fragment.
    pub fn local_height(&self, h: LazyProof) -> usize {
        let mut memo = HashMap::new();
        self.height_rec(h, &mut memo)
    }

    fn height_rec(&self, h: LazyProof, memo: &mut HashMap<LazyProof, usize>) -> usize {
        let h = self.resolve(h);
        if let Some(&v) = memo.get(&h) {
            return v;
        }
        let step = self.step(h);
        let v = step
            .premises
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if is_right_premise(&step.rule, k) {
                    1
                } else {
                    1 + self.height_rec(c, memo)
                }
            })
            .max()
            .unwrap_or(0);
        memo.insert(h, v);
        v
    }

    /// `a ∼n b`: the `n`-fragments coincide (sequents and rule names).
    /// `∼0` relates any two proofs, whatever their conclusions.
    pub fn frag_eq(&self, a: LazyProof, b: LazyProof, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        if *self.sequent(a) != *self.sequent(b) {
            return false;
        }
        let mut memo = HashMap::new();
        self.frag_eq_rec(a, b, n, &mut memo)
    }

    fn frag_eq_rec(
        &self,
        a: LazyProof,
        b: LazyProof,
        left: usize,
        memo: &mut HashMap<(LazyProof, LazyProof, usize), bool>,
    ) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        if a == b {
            return true;
        }
        if let Some(&v) = memo.get(&(a, b, left)) {
            return v;
        }
        let (sa, sb) = (self.step(a), self.step(b));
        let mut eq = sa.rule.name() == sb.rule.name() && sa.premises.len() == sb.premises.len();
        if eq {
            for (k, (&x, &y)) in sa.premises.iter().zip(&sb.premises).enumerate() {
                if *self.sequent(x) != *self.sequent(y) {
                    eq = false;
                    break;
                }
                let ok = if is_right_premise(&sa.rule, k) {
                    left == 1 || self.frag_eq_rec(x, y, left - 1, memo)
                } else {
                    self.frag_eq_rec(x, y, left, memo)
                };
                if !ok {
                    eq = false;
                    break;
                }
            }
        }
        memo.insert((a, b, left), eq);
        eq
    }

    /// `inf {2^-n | a ∼n b}` over `n ≤ max_n`.
    pub fn distance(&self, a: LazyProof, b: LazyProof, max_n: usize) -> Distance {
        let mut m = 0;
        while m < max_n && self.frag_eq(a, b, m + 1) {
            m += 1;
        }
        Distance {
            exponent: m,
            bounded: m == max_n,
        }
    }

    /// No cut inside the `n`-fragment.
    pub fn cutfree_to_depth(&self, h: LazyProof, n: usize) -> bool {
        let mut bad = None;
        self.walk_fragment(h, n, &mut |_, step| {
            if matches!(step.rule, Rule::Cut(_)) {
                bad = Some(());
                false
            } else {
                true
            }
        });
        bad.is_none()
    }

    /// Checks every step inside the `n`-fragment against `system`.
    pub fn check_fragment(&self, h: LazyProof, n: usize, system: System) -> Result<(), (Sequent, StepError)> {
        let mut err = None;
        self.walk_fragment(h, n, &mut |node, step| {
            let inst = RuleInstance {
                rule: step.rule.clone(),
                conclusion: (*self.sequent(node)).clone(),
                premises: step
                    .premises
                    .iter()
                    .map(|&p| (*self.sequent(p)).clone())
                    .collect(),
            };
            match explain_step(&inst, system) {
                Ok(()) => true,
                Err(e) => {
                    err = Some((inst.conclusion, e));
                    false
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Visits every distinct (node, remaining depth) of the `n`-fragment
    /// once; stops when `visit` returns false.
    pub fn walk_fragment(
        &self,
        h: LazyProof,
        n: usize,
        visit: &mut dyn FnMut(LazyProof, &Step) -> bool,
    ) -> bool {
        let mut seen = HashSet::new();
        n == 0 || self.walk_rec(h, n, &mut seen, visit)
    }

    fn walk_rec(
        &self,
        h: LazyProof,
        left: usize,
        seen: &mut HashSet<(LazyProof, usize)>,
        visit: &mut dyn FnMut(LazyProof, &Step) -> bool,
    ) -> bool {
        let h = self.resolve(h);
        if !seen.insert((h, left)) {
            return true;
        }
        let step = self.step(h);
        if !visit(h, &step) {
            return false;
        }
        for (k, &c) in step.premises.iter().enumerate() {
            let next = if is_right_premise(&step.rule, k) {
                if left == 1 {
                    continue;
                }
                left - 1
            } else {
                left
            };
            if !self.walk_rec(c, next, seen, visit) {
                return false;
            }
        }
        true
    }
}

pub fn is_right_premise(rule: &Rule, index: usize) -> bool {
    matches!(rule, Rule::BoxInf(_)) && index == 1
}

/// `2^-exponent`; when `bounded` the true distance is at most that value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Distance {
    pub exponent: usize,
    pub bounded: bool,
}

impl Distance {
    pub fn value(self) -> f64 {
        0.5f64.powi(self.exponent as i32)
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = if self.bounded { "<= " } else { "" };
        write!(f, "{op}2^-{}", self.exponent)
    }
}
