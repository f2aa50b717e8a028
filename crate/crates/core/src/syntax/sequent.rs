use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, FormulaKind, Multiset};

/// `Γ ⇒ Δ` with multiset sides.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub ant: Multiset,
    pub succ: Multiset,
}

impl Sequent {
    pub fn new(ant: Multiset, succ: Multiset) -> Self {
        Sequent { ant, succ }
    }

    /// `⇒ A`
    pub fn goal(a: Formula) -> Self {
        Sequent::new(Multiset::new(), Multiset::singleton(a))
    }

    pub fn from_parts<I, J>(ant: I, succ: J) -> Self
    where
        I: IntoIterator<Item = Formula>,
        J: IntoIterator<Item = Formula>,
    {
        Sequent::new(ant.into_iter().collect(), succ.into_iter().collect())
    }

    /// `Π,Γ ⇒ Δ,Σ`
    pub fn weaken(&self, pi: &Multiset, sigma: &Multiset) -> Sequent {
        Sequent::new(pi.union(&self.ant), self.succ.union(sigma))
    }

    pub fn with_ant(&self, f: Formula) -> Sequent {
        Sequent::new(self.ant.clone().with(f), self.succ.clone())
    }

    pub fn with_succ(&self, f: Formula) -> Sequent {
        Sequent::new(self.ant.clone(), self.succ.clone().with(f))
    }

    pub fn without_ant(&self, f: &Formula) -> Option<Sequent> {
        Some(Sequent::new(self.ant.without(f)?, self.succ.clone()))
    }

    pub fn without_succ(&self, f: &Formula) -> Option<Sequent> {
        Some(Sequent::new(self.ant.clone(), self.succ.without(f)?))
    }

    /// `⊥` on the left or a shared atom: initial in the ∞ calculus.
    pub fn is_atomic_initial(&self) -> bool {
        self.ant.contains(&Formula::bottom())
            || self
                .ant
                .distinct()
                .any(|f| f.is_atom() && self.succ.contains(f))
    }

    /// `⊥` on the left or any formula on both sides.
    pub fn is_general_initial(&self) -> bool {
        self.ant.contains(&Formula::bottom())
            || self.ant.distinct().any(|f| self.succ.contains(f))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.ant.iter().chain(self.succ.iter())
    }

    pub fn size(&self) -> usize {
        self.formulas().map(Formula::size).sum()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        subformulas(self)
            .iter()
            .filter_map(|f| f.atom_name().map(str::to_owned))
            .collect()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ant.is_empty(), self.succ.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {}", self.succ),
            (false, true) => write!(f, "{} =>", self.ant),
            (false, false) => write!(f, "{} => {}", self.ant, self.succ),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequent({self})")
    }
}

impl serde::Serialize for Sequent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Sequent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse_sequent(&text).map_err(serde::de::Error::custom)
    }
}

/// `Sub(Γ ⇒ Δ)`.
pub fn subformulas(s: &Sequent) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in s.ant.distinct().chain(s.succ.distinct()) {
        f.collect_subformulas(&mut out);
    }
    out
}

/// `Λ* = {□(A→□A) | A ∈ Λ}`.
pub fn star<'a, I: IntoIterator<Item = &'a Formula>>(lambda: I) -> BTreeSet<Formula> {
    lambda.into_iter().map(Formula::grz_guard).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolaritySets {
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl PolaritySets {
    pub fn of_formula(a: &Formula) -> Self {
        let mut p = PolaritySets::default();
        p.walk(a, true);
        p
    }

    fn walk(&mut self, a: &Formula, positive: bool) {
        match a.kind() {
            FormulaKind::Bottom => {}
            FormulaKind::Atom(name) => {
                let side = if positive { &mut self.pos } else { &mut self.neg };
                side.insert(name.to_string());
            }
            FormulaKind::Implies(l, r) => {
                self.walk(l, !positive);
                self.walk(r, positive);
            }
            FormulaKind::Box(b) => self.walk(b, positive),
        }
    }

    /// Polarities with signs swapped.
    pub fn flipped(self) -> Self {
        PolaritySets {
            pos: self.neg,
            neg: self.pos,
        }
    }

    pub fn is_within(&self, other: &PolaritySets) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    pub fn intersect(&self, other: &PolaritySets) -> PolaritySets {
        PolaritySets {
            pos: self.pos.intersection(&other.pos).cloned().collect(),
            neg: self.neg.intersection(&other.neg).cloned().collect(),
        }
    }
}

/// `pos(Γ⇒Δ) = pos(Δ) ∪ neg(Γ)`, dually for `neg`.
pub fn polarity(s: &Sequent) -> PolaritySets {
    let mut p = PolaritySets::default();
    for f in s.ant.distinct() {
        p.walk(f, false);
    }
    for f in s.succ.distinct() {
        p.walk(f, true);
    }
    p
}

fn fold_right(items: Vec<Formula>, op: fn(Formula, Formula) -> Formula, unit: Formula) -> Formula {
    let mut it = items.into_iter().rev();
    match it.next() {
        None => unit,
        Some(last) => it.fold(last, |acc, f| op(f, acc)),
    }
}

/// `⋀Γ → ⋁Δ`; folds are right-associative, `⋀∅ = ⊤`, `⋁∅ = ⊥`.
pub fn sequent_to_formula(s: &Sequent) -> Formula {
    let conj = fold_right(s.ant.iter().cloned().collect(), Formula::and, Formula::top());
    let disj = fold_right(s.succ.iter().cloned().collect(), Formula::or, Formula::bottom());
    Formula::implies(conj, disj)
}
