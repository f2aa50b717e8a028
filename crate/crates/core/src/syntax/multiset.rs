use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use super::Formula;

/// Finite multiset of formulas, kept in canonical (sorted) order with counts.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    counts: BTreeMap<Formula, usize>,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(f: Formula) -> Self {
        let mut m = Self::new();
        m.insert(f);
        m
    }

    pub fn insert(&mut self, f: Formula) {
        *self.counts.entry(f).or_insert(0) += 1;
    }

    pub fn insert_n(&mut self, f: Formula, n: usize) {
        if n > 0 {
            *self.counts.entry(f).or_insert(0) += n;
        }
    }

    pub fn with(mut self, f: Formula) -> Self {
        self.insert(f);
        self
    }

    /// Removes one occurrence; returns false when `f` was absent.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.counts.get_mut(f) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(f);
                true
            }
            None => false,
        }
    }

    pub fn without(&self, f: &Formula) -> Option<Self> {
        let mut m = self.clone();
        m.remove_one(f).then_some(m)
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.counts.get(f).copied().unwrap_or(0)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.counts.contains_key(f)
    }

    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct elements in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.counts.keys()
    }

    pub fn counts(&self) -> btree_map::Iter<'_, Formula, usize> {
        self.counts.iter()
    }

    /// Every occurrence, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.counts
            .iter()
            .flat_map(|(f, &n)| std::iter::repeat(f).take(n))
    }

    /// Sum of multiplicities.
    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (f, &n) in &other.counts {
            m.insert_n(f.clone(), n);
        }
        m
    }

    /// Truncated difference of multiplicities.
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let mut m = Multiset::new();
        for (f, &n) in &self.counts {
            let k = n.saturating_sub(other.count(f));
            m.insert_n(f.clone(), k);
        }
        m
    }

    /// Pointwise maximum of multiplicities.
    pub fn max_union(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (f, &n) in &other.counts {
            let c = m.counts.entry(f.clone()).or_insert(0);
            *c = (*c).max(n);
        }
        m
    }

    pub fn is_sub(&self, other: &Multiset) -> bool {
        self.counts.iter().all(|(f, &n)| other.count(f) >= n)
    }

    /// Underlying set, as a multiset with all multiplicities 1.
    pub fn to_set(&self) -> Multiset {
        Multiset {
            counts: self.counts.keys().map(|f| (f.clone(), 1)).collect(),
        }
    }

    pub fn is_set(&self) -> bool {
        self.counts.values().all(|&n| n == 1)
    }

    /// Sub-multiset of boxed formulas.
    pub fn boxed_part(&self) -> Multiset {
        Multiset {
            counts: self
                .counts
                .iter()
                .filter(|(f, _)| f.is_boxed())
                .map(|(f, &n)| (f.clone(), n))
                .collect(),
        }
    }

    pub fn all_boxed(&self) -> bool {
        self.counts.keys().all(Formula::is_boxed)
    }
}

impl FromIterator<Formula> for Multiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for f in iter {
            m.insert(f);
        }
        m
    }
}

impl<'a> FromIterator<&'a Formula> for Multiset {
    fn from_iter<I: IntoIterator<Item = &'a Formula>>(iter: I) -> Self {
        iter.into_iter().cloned().collect()
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl serde::Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
