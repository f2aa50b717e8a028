use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A modal formula over `⊥`, atoms, `→` and `□`.
///
/// Derived connectives (`¬`, `⊤`, `∧`, `∨`, `◇`) are constructor sugar and
/// never appear in the tree. Cloning is cheap; equality, ordering and hashing
/// are structural.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

struct Node {
    kind: FormulaKind,
    size: usize,
    hash: u64,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaKind {
    Bottom,
    Atom(Arc<str>),
    Implies(Formula, Formula),
    Box(Formula),
}

impl Formula {
    fn new(kind: FormulaKind) -> Self {
        let size = match &kind {
            FormulaKind::Bottom | FormulaKind::Atom(_) => 1,
            FormulaKind::Implies(a, b) => 1 + a.size() + b.size(),
            FormulaKind::Box(a) => 1 + a.size(),
        };
        let mut h = DefaultHasher::new();
        match &kind {
            FormulaKind::Bottom => 0u8.hash(&mut h),
            FormulaKind::Atom(name) => {
                1u8.hash(&mut h);
                name.hash(&mut h);
            }
            FormulaKind::Implies(a, b) => {
                2u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
            }
            FormulaKind::Box(a) => {
                3u8.hash(&mut h);
                a.0.hash.hash(&mut h);
            }
        }
        Formula(Arc::new(Node {
            kind,
            size,
            hash: h.finish(),
        }))
    }

    pub fn bottom() -> Self {
        Self::new(FormulaKind::Bottom)
    }

    pub fn atom(name: &str) -> Self {
        Self::new(FormulaKind::Atom(Arc::from(name)))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Self::new(FormulaKind::Implies(a, b))
    }

    pub fn boxed(a: Formula) -> Self {
        Self::new(FormulaKind::Box(a))
    }

    /// `¬A := A → ⊥`
    pub fn not(a: Formula) -> Self {
        Self::implies(a, Self::bottom())
    }

    /// `⊤ := ¬⊥`
    pub fn top() -> Self {
        Self::not(Self::bottom())
    }

    /// `A ∧ B := ¬(A → ¬B)`
    pub fn and(a: Formula, b: Formula) -> Self {
        Self::not(Self::implies(a, Self::not(b)))
    }

    /// `A ∨ B := ¬A → B`
    pub fn or(a: Formula, b: Formula) -> Self {
        Self::implies(Self::not(a), b)
    }

    /// `◇A := ¬□¬A`
    pub fn diamond(a: Formula) -> Self {
        Self::not(Self::boxed(Self::not(a)))
    }

    /// `□(A → □A)`, the side formula used when moving between calculi.
    pub fn grz_guard(a: &Formula) -> Self {
        Self::boxed(Self::implies(a.clone(), Self::boxed(a.clone())))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Bottom)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Atom(_))
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self.kind(), FormulaKind::Box(_))
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self.kind() {
            FormulaKind::Atom(name) => Some(name),
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self.kind() {
            FormulaKind::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<&Formula> {
        match self.kind() {
            FormulaKind::Box(a) => Some(a),
            _ => None,
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self.kind() {
            FormulaKind::Bottom | FormulaKind::Atom(_) => {}
            FormulaKind::Implies(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            FormulaKind::Box(a) => a.collect_subformulas(out),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .iter()
            .filter_map(|f| f.atom_name().map(str::to_owned))
            .collect()
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.kind.cmp(&other.0.kind)
    }
}

// Printing recognises the sugar patterns so that output stays readable;
// parsing the output rebuilds the identical tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Imp = 1,
    Or = 2,
    And = 3,
    Unary = 4,
}

enum View<'a> {
    Bottom,
    Top,
    Atom(&'a str),
    Not(&'a Formula),
    Box(&'a Formula),
    Diamond(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f.as_implies() {
        Some((a, b)) if b.is_bottom() => Some(a),
        _ => None,
    }
}

fn view(f: &Formula) -> View<'_> {
    match f.kind() {
        FormulaKind::Bottom => View::Bottom,
        FormulaKind::Atom(name) => View::Atom(name),
        FormulaKind::Box(a) => View::Box(a),
        FormulaKind::Implies(a, b) => {
            if b.is_bottom() {
                if a.is_bottom() {
                    return View::Top;
                }
                if let Some(inner) = a.as_box().and_then(negated) {
                    return View::Diamond(inner);
                }
                if let Some((x, y)) = a.as_implies() {
                    if let Some(y) = negated(y) {
                        return View::And(x, y);
                    }
                }
                return View::Not(a);
            }
            if let Some(x) = negated(a) {
                return View::Or(x, b);
            }
            View::Implies(a, b)
        }
    }
}

fn write_formula(f: &Formula, ctx: Prec, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (prec, body): (Prec, String) = match view(f) {
        View::Bottom => return out.write_str("false"),
        View::Top => return out.write_str("true"),
        View::Atom(name) => return out.write_str(name),
        View::Not(a) => (Prec::Unary, format!("~{}", Wrap(a, Prec::Unary))),
        View::Box(a) => (Prec::Unary, format!("[]{}", Wrap(a, Prec::Unary))),
        View::Diamond(a) => (Prec::Unary, format!("<>{}", Wrap(a, Prec::Unary))),
        // & and | are left-associative, -> is right-associative
        View::And(a, b) => (
            Prec::And,
            format!("{} & {}", Wrap(a, Prec::And), Wrap(b, Prec::Unary)),
        ),
        View::Or(a, b) => (
            Prec::Or,
            format!("{} | {}", Wrap(a, Prec::Or), Wrap(b, Prec::And)),
        ),
        View::Implies(a, b) => (
            Prec::Imp,
            format!("{} -> {}", Wrap(a, Prec::Or), Wrap(b, Prec::Imp)),
        ),
    };
    if prec < ctx {
        write!(out, "({body})")
    } else {
        out.write_str(&body)
    }
}

struct Wrap<'a>(&'a Formula, Prec);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self.0, self.1, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, Prec::Imp, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        crate::syntax::parse_formula(&text).map_err(serde::de::Error::custom)
    }
}
