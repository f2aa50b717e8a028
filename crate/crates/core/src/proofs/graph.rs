//! Finite proof objects: well-founded trees and cyclic proofs with
//! back-links, their checkers and their JSON / DOT encodings.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{explain_step, Rule, RuleInstance, RuleName, StepError, System};
use crate::syntax::{Formula, Sequent};

/// One node of a finite proof graph. `rule` is `None` exactly for
/// back-link leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub sequent: Sequent,
    pub rule: Option<Rule>,
    pub children: Vec<usize>,
}

/// Finite tree (root `0`) plus back-links from non-axiom leaves to
/// ancestors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicProof {
    pub system: System,
    pub nodes: Vec<ProofNode>,
    pub backlinks: BTreeMap<usize, usize>,
}

/// Finite proof tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub sequent: Sequent,
    pub rule: Rule,
    pub children: Vec<ProofTree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfProof {
    pub system: System,
    pub root: ProofTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("node {node}: {error}")]
    Step { node: usize, error: StepError },
    #[error("node {node}: leaf is neither an axiom nor a back-link")]
    OpenLeaf { node: usize },
    #[error("back-link {leaf} -> {target}: source is not a rule-free leaf")]
    BacklinkFromNonLeaf { leaf: usize, target: usize },
    #[error("back-link {leaf} -> {target}: target is not a proper ancestor")]
    BacklinkNotAncestor { leaf: usize, target: usize },
    #[error("back-link {leaf} -> {target}: sequents differ")]
    BacklinkSequentMismatch { leaf: usize, target: usize },
    #[error("back-link {leaf} -> {target}: no right premise of a box rule in between")]
    GuardViolation { leaf: usize, target: usize },
    #[error("malformed proof: {0}")]
    Structure(String),
}

impl Violation {
    /// Short kind tag, e.g. `guard_violation`.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Step {
                error: StepError::RuleNotInSystem(..),
                ..
            } => "rule_not_in_system",
            Violation::Step { .. } => "bad_step",
            Violation::OpenLeaf { .. } => "open_leaf",
            Violation::BacklinkFromNonLeaf { .. } => "backlink_from_non_leaf",
            Violation::BacklinkNotAncestor { .. } => "backlink_not_ancestor",
            Violation::BacklinkSequentMismatch { .. } => "backlink_sequent_mismatch",
            Violation::GuardViolation { .. } => "guard_violation",
            Violation::Structure(_) => "structure",
        }
    }
}

/// Checker result; empty means accepted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl CyclicProof {
    pub fn root(&self) -> &Sequent {
        &self.nodes[0].sequent
    }

    /// Parent of every node, after checking that the nodes form a tree
    /// rooted at 0.
    pub fn parents(&self) -> Result<Vec<Option<usize>>, String> {
        let n = self.nodes.len();
        if n == 0 {
            return Err("no nodes".into());
        }
        let mut parent = vec![None; n];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= n {
                    return Err(format!("node {i} has out-of-range child {c}"));
                }
                if c == 0 {
                    return Err(format!("node {i} points at the root"));
                }
                if parent[c].is_some() {
                    return Err(format!("node {c} has two parents"));
                }
                parent[c] = Some(i);
            }
        }
        // every node must reach the root
        for start in 1..n {
            let mut at = start;
            let mut steps = 0;
            while let Some(p) = parent[at] {
                at = p;
                steps += 1;
                if steps > n {
                    return Err(format!("node {start} lies on a cycle"));
                }
            }
            if at != 0 {
                return Err(format!("node {start} is unreachable from the root"));
            }
        }
        Ok(parent)
    }

    pub fn is_right_premise(&self, parent: &[Option<usize>], node: usize) -> bool {
        parent[node].is_some_and(|p| {
            matches!(self.nodes[p].rule, Some(Rule::BoxInf(_))) && self.nodes[p].children.get(1) == Some(&node)
        })
    }

    pub fn instance(&self, node: usize) -> Option<RuleInstance> {
        let n = &self.nodes[node];
        Some(RuleInstance {
            rule: n.rule.clone()?,
            conclusion: n.sequent.clone(),
            premises: n
                .children
                .iter()
                .map(|&c| self.nodes[c].sequent.clone())
                .collect(),
        })
    }

    pub fn uses_cut(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n.rule, Some(Rule::Cut(_))))
    }

    /// Checks every rule step, every leaf and every back-link.
    pub fn check(&self) -> Report {
        let mut out = Vec::new();
        let parent = match self.parents() {
            Ok(p) => p,
            Err(msg) => {
                return Report {
                    violations: vec![Violation::Structure(msg)],
                }
            }
        };
        for (i, node) in self.nodes.iter().enumerate() {
            match &node.rule {
                Some(_) => {
                    if let Some(error) = self
                        .instance(i)
                        .and_then(|inst| explain_step(&inst, self.system).err())
                    {
                        out.push(Violation::Step { node: i, error });
                    }
                }
                None => {
                    if !node.children.is_empty() {
                        out.push(Violation::Structure(format!(
                            "node {i} has children but no rule"
                        )));
                    } else if !self.backlinks.contains_key(&i) {
                        out.push(Violation::OpenLeaf { node: i });
                    }
                }
            }
        }
        for (&leaf, &target) in &self.backlinks {
            if leaf >= self.nodes.len() || target >= self.nodes.len() {
                out.push(Violation::Structure(format!(
                    "back-link {leaf} -> {target} out of range"
                )));
                continue;
            }
            let n = &self.nodes[leaf];
            if n.rule.is_some() || !n.children.is_empty() {
                out.push(Violation::BacklinkFromNonLeaf { leaf, target });
                continue;
            }
            // walk up from the leaf looking for the target
            let mut crossed = self.is_right_premise(&parent, leaf);
            let mut at = parent[leaf];
            let mut found = false;
            while let Some(a) = at {
                if a == target {
                    found = true;
                    break;
                }
                crossed |= self.is_right_premise(&parent, a);
                at = parent[a];
            }
            if !found {
                out.push(Violation::BacklinkNotAncestor { leaf, target });
                continue;
            }
            if n.sequent != self.nodes[target].sequent {
                out.push(Violation::BacklinkSequentMismatch { leaf, target });
            }
            if !crossed {
                out.push(Violation::GuardViolation { leaf, target });
            }
        }
        Report { violations: out }
    }

    /// Sanity check used by operations that require a valid input.
    pub fn validated(&self) -> Result<&Self, Report> {
        let r = self.check();
        if r.is_ok() {
            Ok(self)
        } else {
            Err(r)
        }
    }

    /// Graphviz rendering; back-links are dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let rule = n.rule.as_ref().map_or("backlink".to_string(), |r| r.name().to_string());
            let label = format!("{}\\n[{}]", n.sequent, rule).replace('"', "\\\"");
            let _ = writeln!(s, "  n{i} [label=\"{label}\"];");
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for (k, &c) in n.children.iter().enumerate() {
                let attr = match n.rule {
                    Some(Rule::BoxInf(_)) if k == 1 => " [label=\"right\"]",
                    _ => "",
                };
                let _ = writeln!(s, "  n{i} -> n{c}{attr};");
            }
        }
        for (leaf, target) in &self.backlinks {
            let _ = writeln!(s, "  n{leaf} -> n{target} [style=dashed, constraint=false];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| JsonNode {
                id,
                sequent: n.sequent.clone(),
                rule: n.rule.as_ref().map(Rule::name),
                principal: n.rule.as_ref().and_then(|r| r.principal().cloned()),
                children: n.children.clone(),
            })
            .collect();
        let doc = JsonProof {
            system: self.system,
            nodes,
            backlinks: self
                .backlinks
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        };
        serde_json::to_value(doc).expect("proof serialization is infallible")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<CyclicProof, String> {
        let doc: JsonProof = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let mut nodes: Vec<Option<ProofNode>> = vec![None; doc.nodes.len()];
        for n in doc.nodes {
            if n.id >= nodes.len() || nodes[n.id].is_some() {
                return Err(format!("bad or duplicate node id {}", n.id));
            }
            let rule = match n.rule {
                Some(name) => Some(Rule::from_parts(name, n.principal)?),
                None => None,
            };
            nodes[n.id] = Some(ProofNode {
                sequent: n.sequent,
                rule,
                children: n.children,
            });
        }
        let mut backlinks = BTreeMap::new();
        for (k, v) in doc.backlinks {
            let k: usize = k.parse().map_err(|_| format!("bad back-link key {k:?}"))?;
            backlinks.insert(k, v);
        }
        Ok(CyclicProof {
            system: doc.system,
            nodes: nodes.into_iter().map(Option::unwrap).collect(),
            backlinks,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    sequent: Sequent,
    rule: Option<RuleName>,
    #[serde(default)]
    principal: Option<Formula>,
    #[serde(default)]
    children: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct JsonProof {
    system: System,
    nodes: Vec<JsonNode>,
    #[serde(default)]
    backlinks: BTreeMap<String, usize>,
}

impl ProofTree {
    pub fn leaf(sequent: Sequent, rule: Rule) -> ProofTree {
        ProofTree {
            sequent,
            rule,
            children: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    /// `Π,Γ ⇒ Δ,Σ` throughout; the Grz box premise is context-free and
    /// stays as it is.
    pub fn weaken(&self, pi: &crate::Multiset, sigma: &crate::Multiset) -> ProofTree {
        if pi.is_empty() && sigma.is_empty() {
            return self.clone();
        }
        let children = match self.rule {
            Rule::BoxGrz(_) => self.children.clone(),
            _ => self.children.iter().map(|c| c.weaken(pi, sigma)).collect(),
        };
        ProofTree {
            sequent: self.sequent.weaken(pi, sigma),
            rule: self.rule.clone(),
            children,
        }
    }
}

impl WfProof {
    pub fn check(&self) -> Report {
        self.to_graph().check()
    }

    pub fn uses_cut(&self) -> bool {
        fn go(t: &ProofTree) -> bool {
            matches!(t.rule, Rule::Cut(_)) || t.children.iter().any(go)
        }
        go(&self.root)
    }

    /// Flat pre-order encoding without back-links.
    pub fn to_graph(&self) -> CyclicProof {
        fn go(t: &ProofTree, nodes: &mut Vec<ProofNode>) -> usize {
            let id = nodes.len();
            nodes.push(ProofNode {
                sequent: t.sequent.clone(),
                rule: Some(t.rule.clone()),
                children: Vec::new(),
            });
            let kids = t.children.iter().map(|c| go(c, nodes)).collect();
            nodes[id].children = kids;
            id
        }
        let mut nodes = Vec::new();
        go(&self.root, &mut nodes);
        CyclicProof {
            system: self.system,
            nodes,
            backlinks: BTreeMap::new(),
        }
    }

    pub fn from_graph(g: &CyclicProof) -> Result<WfProof, String> {
        if !g.backlinks.is_empty() {
            return Err("well-founded proofs have no back-links".into());
        }
        g.parents()?;
        fn go(g: &CyclicProof, i: usize) -> Result<ProofTree, String> {
            let n = &g.nodes[i];
            let rule = n
                .rule
                .clone()
                .ok_or_else(|| format!("node {i} has no rule"))?;
            Ok(ProofTree {
                sequent: n.sequent.clone(),
                rule,
                children: n
                    .children
                    .iter()
                    .map(|&c| go(g, c))
                    .collect::<Result<_, _>>()?,
            })
        }
        Ok(WfProof {
            system: g.system,
            root: go(g, 0)?,
        })
    }
}

/// Checks a cyclic proof (`check_cyclic`).
pub fn check_cyclic(p: &CyclicProof) -> Report {
    p.check()
}

/// Checks a well-founded proof (`check_wf`).
pub fn check_wf(p: &WfProof) -> Report {
    p.check()
}
