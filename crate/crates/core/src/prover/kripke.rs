//! Finite Kripke models over reflexive partial orders, and a brute-force
//! countermodel search.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{sequent_to_formula, Formula, FormulaKind, Sequent};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("order relation must be {size}x{size}")]
    Shape { size: usize },
    #[error("order is not reflexive at world {0}")]
    NotReflexive(usize),
    #[error("order is not antisymmetric between worlds {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive on {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("valuation mentions world {0} outside the model")]
    BadWorld(usize),
}

/// A finite reflexive partial order with a valuation. Worlds are
/// `0..size`; `order[u][v]` means `v` is accessible from `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeModel {
    size: usize,
    order: Vec<Vec<bool>>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
}

impl KripkeModel {
    pub fn new(
        order: Vec<Vec<bool>>,
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModelError> {
        let size = order.len();
        if order.iter().any(|row| row.len() != size) {
            return Err(ModelError::Shape { size });
        }
        for u in 0..size {
            if !order[u][u] {
                return Err(ModelError::NotReflexive(u));
            }
            for v in 0..size {
                if u != v && order[u][v] && order[v][u] {
                    return Err(ModelError::NotAntisymmetric(u, v));
                }
                for w in 0..size {
                    if order[u][v] && order[v][w] && !order[u][w] {
                        return Err(ModelError::NotTransitive(u, v, w));
                    }
                }
            }
        }
        if let Some(&w) = valuation.values().flatten().find(|&&w| w >= size) {
            return Err(ModelError::BadWorld(w));
        }
        Ok(KripkeModel {
            size,
            order,
            valuation,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> &[Vec<bool>] {
        &self.order
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }

    pub fn sees(&self, u: usize, v: usize) -> bool {
        self.order[u][v]
    }

    /// Satisfaction of `a` at world `w`.
    pub fn eval(&self, w: usize, a: &Formula) -> bool {
        assert!(w < self.size, "world {w} outside a model of size {}", self.size);
        match a.kind() {
            FormulaKind::Bottom => false,
            FormulaKind::Atom(p) => self
                .valuation
                .get(&**p)
                .is_some_and(|ws| ws.contains(&w)),
            FormulaKind::Implies(b, c) => !self.eval(w, b) || self.eval(w, c),
            FormulaKind::Box(b) => (0..self.size).all(|v| !self.order[w][v] || self.eval(v, b)),
        }
    }

    /// Whether `w` falsifies the sequent read as a formula.
    pub fn falsifies(&self, w: usize, s: &Sequent) -> bool {
        !self.eval(w, &sequent_to_formula(s))
    }
}

/// Free-standing form of [`KripkeModel::eval`].
pub fn eval(m: &KripkeModel, w: usize, a: &Formula) -> bool {
    m.eval(w, a)
}

/// Truth sets as bitmasks; `up[w]` is the set of worlds seen from `w`.
fn ext(a: &Formula, up: &[u32], val: &BTreeMap<&str, u32>, all: u32) -> u32 {
    match a.kind() {
        FormulaKind::Bottom => 0,
        FormulaKind::Atom(p) => val.get(&**p).copied().unwrap_or(0),
        FormulaKind::Implies(b, c) => (!ext(b, up, val, all) | ext(c, up, val, all)) & all,
        FormulaKind::Box(b) => {
            let inner = ext(b, up, val, all);
            let mut out = 0;
            for (w, &u) in up.iter().enumerate() {
                if u & !inner == 0 {
                    out |= 1 << w;
                }
            }
            out
        }
    }
}

/// Reflexive partial orders on `n` worlds, up to isomorphism via a linear
/// extension: `u ≤ v` only when `u ≤ v` as numbers. Returned as up-sets.
fn frames(n: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut up: Vec<u32> = (0..n).map(|w| 1 << w).collect();
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                up[u] |= 1 << v;
            }
        }
        let transitive = (0..n).all(|u| {
            (0..n).all(|v| up[u] >> v & 1 == 0 || up[v] & !up[u] == 0)
        });
        if transitive {
            out.push(up);
        }
    }
    out
}

/// Smallest falsifying model of size at most `max_size`, with the world
/// that falsifies `goal`. Sizes are tried in increasing order.
pub fn find_countermodel(goal: &Sequent, max_size: usize) -> Option<(KripkeModel, usize)> {
    assert!(max_size <= 8, "model size {max_size} is out of reach for enumeration");
    let target = sequent_to_formula(goal);
    let atoms: Vec<String> = target.atoms().into_iter().map(|a| a.to_string()).collect();
    for n in 1..=max_size {
        let all = (1u32 << n) - 1;
        let bits = n * atoms.len();
        for up in frames(n) {
            for v in 0u64..(1u64 << bits) {
                let val: BTreeMap<&str, u32> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.as_str(), ((v >> (i * n)) as u32) & all))
                    .collect();
                let truth = ext(&target, &up, &val, all);
                if truth != all {
                    let w = (!truth & all).trailing_zeros() as usize;
                    let order = (0..n)
                        .map(|u| (0..n).map(|x| up[u] >> x & 1 == 1).collect())
                        .collect();
                    let valuation = val
                        .iter()
                        .map(|(a, &m)| {
                            (a.to_string(), (0..n).filter(|x| m >> x & 1 == 1).collect())
                        })
                        .collect();
                    let model = KripkeModel::new(order, valuation).expect("enumerated frames are posets");
                    debug_assert!(model.falsifies(w, goal));
                    return Some((model, w));
                }
            }
        }
    }
    None
}
