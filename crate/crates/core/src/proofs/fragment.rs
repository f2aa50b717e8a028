use std::fmt;

use crate::calculus::Rule;
use crate::syntax::Sequent;

/// Finite approximation of an ∞-proof; open leaves mark the places where
/// a branch was cut at its `depth`-th right premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub depth: usize,
    pub root: FragNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FragNode {
    Node {
        sequent: Sequent,
        rule: Rule,
        children: Vec<FragNode>,
    },
    Open(Sequent),
}

impl FragNode {
    pub fn sequent(&self) -> &Sequent {
        match self {
            FragNode::Node { sequent, .. } | FragNode::Open(sequent) => sequent,
        }
    }

    pub fn children(&self) -> &[FragNode] {
        match self {
            FragNode::Node { children, .. } => children,
            FragNode::Open(_) => &[],
        }
    }

    pub fn rule(&self) -> Option<&Rule> {
        match self {
            FragNode::Node { rule, .. } => Some(rule),
            FragNode::Open(_) => None,
        }
    }

    /// Identity up to principal annotations: sequents and rule names.
    pub fn same_shape(&self, other: &FragNode) -> bool {
        match (self, other) {
            (FragNode::Open(a), FragNode::Open(b)) => a == b,
            (
                FragNode::Node {
                    sequent: a,
                    rule: ra,
                    children: ca,
                },
                FragNode::Node {
                    sequent: b,
                    rule: rb,
                    children: cb,
                },
            ) => {
                a == b
                    && ra.name() == rb.name()
                    && ca.len() == cb.len()
                    && ca.iter().zip(cb).all(|(x, y)| x.same_shape(y))
            }
            _ => false,
        }
    }

    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(FragNode::size).sum::<usize>()
    }

    pub fn contains_cut(&self) -> bool {
        matches!(self.rule(), Some(Rule::Cut(_))) || self.children().iter().any(FragNode::contains_cut)
    }

    pub fn open_leaves(&self) -> usize {
        match self {
            FragNode::Open(_) => 1,
            FragNode::Node { children, .. } => children.iter().map(FragNode::open_leaves).sum(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            FragNode::Open(s) => writeln!(f, "{pad}{s}  [open]"),
            FragNode::Node {
                sequent,
                rule,
                children,
            } => {
                writeln!(f, "{pad}{sequent}  [{rule}]")?;
                children.iter().try_for_each(|c| c.write(f, indent + 1))
            }
        }
    }
}

impl Fragment {
    /// Longest branch, counted in edges.
    pub fn height(&self) -> usize {
        self.root.height()
    }

    pub fn same_shape(&self, other: &Fragment) -> bool {
        self.root.same_shape(&other.root)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, 0)
    }
}
