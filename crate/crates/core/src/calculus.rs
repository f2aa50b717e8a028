//! Rule schemas of the finitary calculus (`Seq`, with the Grz box rule)
//! and the non-well-founded calculus (`Inf`, with the two-premise box
//! rule), each optionally with cut.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Multiset, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    AxAtom,
    AxBottom,
    AxGeneral,
    ImpL,
    ImpR,
    Refl,
    BoxInf,
    BoxGrz,
    Cut,
}

impl RuleName {
    pub const ALL: [RuleName; 9] = [
        RuleName::AxAtom,
        RuleName::AxBottom,
        RuleName::AxGeneral,
        RuleName::ImpL,
        RuleName::ImpR,
        RuleName::Refl,
        RuleName::BoxInf,
        RuleName::BoxGrz,
        RuleName::Cut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::AxAtom => "ax_atom",
            RuleName::AxBottom => "ax_bottom",
            RuleName::AxGeneral => "ax_general",
            RuleName::ImpL => "imp_l",
            RuleName::ImpR => "imp_r",
            RuleName::Refl => "refl",
            RuleName::BoxInf => "box_inf",
            RuleName::BoxGrz => "box_grz",
            RuleName::Cut => "cut",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleName::AxAtom | RuleName::AxBottom | RuleName::AxGeneral => 0,
            RuleName::ImpR | RuleName::Refl | RuleName::BoxGrz => 1,
            RuleName::ImpL | RuleName::BoxInf | RuleName::Cut => 2,
        }
    }

    pub fn is_axiom(self) -> bool {
        self.arity() == 0
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

/// A rule together with its principal formula (the cut formula for `Cut`).
///
/// Principals are formula values: equal copies in a multiset are
/// interchangeable, so no occurrence index is needed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `Γ, p ⇒ p, Δ`
    AxAtom(Formula),
    /// `Γ, ⊥ ⇒ Δ`
    AxBottom,
    /// `Γ, A ⇒ A, Δ`
    AxGeneral(Formula),
    /// principal `A → B` on the left
    ImpL(Formula),
    /// principal `A → B` on the right
    ImpR(Formula),
    /// principal `□B` on the left
    Refl(Formula),
    /// principal `□A` on the right; premises `[Γ,□Π ⇒ A,Δ ; □Π ⇒ A]`
    BoxInf(Formula),
    /// principal `□A` on the right; premise `□Π, □(A→□A) ⇒ A`
    BoxGrz(Formula),
    /// cut formula `A`; premises `[Γ ⇒ Δ,A ; A,Γ ⇒ Δ]`
    Cut(Formula),
}

impl Rule {
    pub fn name(&self) -> RuleName {
        match self {
            Rule::AxAtom(_) => RuleName::AxAtom,
            Rule::AxBottom => RuleName::AxBottom,
            Rule::AxGeneral(_) => RuleName::AxGeneral,
            Rule::ImpL(_) => RuleName::ImpL,
            Rule::ImpR(_) => RuleName::ImpR,
            Rule::Refl(_) => RuleName::Refl,
            Rule::BoxInf(_) => RuleName::BoxInf,
            Rule::BoxGrz(_) => RuleName::BoxGrz,
            Rule::Cut(_) => RuleName::Cut,
        }
    }

    pub fn principal(&self) -> Option<&Formula> {
        match self {
            Rule::AxBottom => None,
            Rule::AxAtom(a)
            | Rule::AxGeneral(a)
            | Rule::ImpL(a)
            | Rule::ImpR(a)
            | Rule::Refl(a)
            | Rule::BoxInf(a)
            | Rule::BoxGrz(a)
            | Rule::Cut(a) => Some(a),
        }
    }

    /// Rebuilds a rule from its name and principal (as stored in JSON).
    pub fn from_parts(name: RuleName, principal: Option<Formula>) -> Result<Rule, String> {
        let need = || {
            principal
                .clone()
                .ok_or_else(|| format!("rule {name} needs a principal formula"))
        };
        Ok(match name {
            RuleName::AxBottom => Rule::AxBottom,
            RuleName::AxAtom => Rule::AxAtom(need()?),
            RuleName::AxGeneral => Rule::AxGeneral(need()?),
            RuleName::ImpL => Rule::ImpL(need()?),
            RuleName::ImpR => Rule::ImpR(need()?),
            RuleName::Refl => Rule::Refl(need()?),
            RuleName::BoxInf => Rule::BoxInf(need()?),
            RuleName::BoxGrz => Rule::BoxGrz(need()?),
            RuleName::Cut => Rule::Cut(need()?),
        })
    }

    pub fn is_axiom(&self) -> bool {
        self.name().is_axiom()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.principal() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum System {
    /// finitary calculus
    Seq,
    /// finitary calculus with cut
    SeqCut,
    /// non-well-founded calculus
    Inf,
    /// non-well-founded calculus with cut
    InfCut,
}

impl System {
    pub fn allows(self, rule: RuleName) -> bool {
        use RuleName::*;
        match rule {
            AxBottom | ImpL | ImpR | Refl => true,
            AxGeneral | BoxGrz => matches!(self, System::Seq | System::SeqCut),
            AxAtom | BoxInf => matches!(self, System::Inf | System::InfCut),
            Cut => matches!(self, System::SeqCut | System::InfCut),
        }
    }

    pub fn is_infinitary(self) -> bool {
        matches!(self, System::Inf | System::InfCut)
    }

    pub fn with_cut(self) -> System {
        match self {
            System::Seq | System::SeqCut => System::SeqCut,
            System::Inf | System::InfCut => System::InfCut,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Seq => "seq",
            System::SeqCut => "seq_cut",
            System::Inf => "inf",
            System::InfCut => "inf_cut",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("rule {0} is not part of the {1} system")]
    RuleNotInSystem(RuleName, System),
    #[error("{rule} expects {expected} premises, found {found}")]
    Arity {
        rule: RuleName,
        expected: usize,
        found: usize,
    },
    #[error("principal formula {0} is not of the required shape")]
    BadPrincipal(Formula),
    #[error("principal formula {0} does not occur in the conclusion")]
    PrincipalMissing(Formula),
    #[error("premise {index} should be `{expected}`, found `{found}`")]
    PremiseMismatch {
        index: usize,
        expected: Sequent,
        found: Sequent,
    },
    #[error("right premise `{0}` must be boxed formulas from the conclusion antecedent")]
    BoxContext(Sequent),
}

/// `Ok` iff `inst` is a correct instance of its rule in `system`.
pub fn explain_step(inst: &RuleInstance, system: System) -> Result<(), StepError> {
    let name = inst.rule.name();
    if !system.allows(name) {
        return Err(StepError::RuleNotInSystem(name, system));
    }
    if inst.premises.len() != name.arity() {
        return Err(StepError::Arity {
            rule: name,
            expected: name.arity(),
            found: inst.premises.len(),
        });
    }
    let c = &inst.conclusion;
    let expect = |index: usize, expected: Sequent| -> Result<(), StepError> {
        let found = &inst.premises[index];
        if *found == expected {
            Ok(())
        } else {
            Err(StepError::PremiseMismatch {
                index,
                expected,
                found: found.clone(),
            })
        }
    };
    match &inst.rule {
        Rule::AxBottom => {
            let bot = Formula::bottom();
            if !c.ant.contains(&bot) {
                return Err(StepError::PrincipalMissing(bot));
            }
        }
        Rule::AxAtom(p) | Rule::AxGeneral(p) => {
            if name == RuleName::AxAtom && !p.is_atom() {
                return Err(StepError::BadPrincipal(p.clone()));
            }
            if !(c.ant.contains(p) && c.succ.contains(p)) {
                return Err(StepError::PrincipalMissing(p.clone()));
            }
        }
        Rule::ImpL(imp) => {
            let (a, b) = imp
                .as_implies()
                .ok_or_else(|| StepError::BadPrincipal(imp.clone()))?;
            let rest = c
                .without_ant(imp)
                .ok_or_else(|| StepError::PrincipalMissing(imp.clone()))?;
            expect(0, rest.with_ant(b.clone()))?;
            expect(1, rest.with_succ(a.clone()))?;
        }
        Rule::ImpR(imp) => {
            let (a, b) = imp
                .as_implies()
                .ok_or_else(|| StepError::BadPrincipal(imp.clone()))?;
            let rest = c
                .without_succ(imp)
                .ok_or_else(|| StepError::PrincipalMissing(imp.clone()))?;
            expect(0, rest.with_ant(a.clone()).with_succ(b.clone()))?;
        }
        Rule::Refl(bx) => {
            let b = bx
                .as_box()
                .ok_or_else(|| StepError::BadPrincipal(bx.clone()))?;
            if !c.ant.contains(bx) {
                return Err(StepError::PrincipalMissing(bx.clone()));
            }
            expect(0, c.with_ant(b.clone()))?;
        }
        Rule::BoxInf(bx) => {
            let a = bx
                .as_box()
                .ok_or_else(|| StepError::BadPrincipal(bx.clone()))?;
            let rest = c
                .without_succ(bx)
                .ok_or_else(|| StepError::PrincipalMissing(bx.clone()))?;
            expect(0, rest.with_succ(a.clone()))?;
            let right = &inst.premises[1];
            check_box_context(c, &right.ant, right)?;
            expect(1, Sequent::new(right.ant.clone(), Multiset::singleton(a.clone())))?;
        }
        Rule::BoxGrz(bx) => {
            let a = bx
                .as_box()
                .ok_or_else(|| StepError::BadPrincipal(bx.clone()))?;
            if !c.succ.contains(bx) {
                return Err(StepError::PrincipalMissing(bx.clone()));
            }
            let prem = &inst.premises[0];
            let guard = Formula::grz_guard(a);
            let pi = prem
                .ant
                .without(&guard)
                .ok_or_else(|| StepError::BoxContext(prem.clone()))?;
            check_box_context(c, &pi, prem)?;
            expect(0, Sequent::new(pi.with(guard), Multiset::singleton(a.clone())))?;
        }
        Rule::Cut(a) => {
            expect(0, c.with_succ(a.clone()))?;
            expect(1, c.with_ant(a.clone()))?;
        }
    }
    Ok(())
}

fn check_box_context(c: &Sequent, pi: &Multiset, prem: &Sequent) -> Result<(), StepError> {
    if pi.all_boxed() && pi.is_sub(&c.ant) {
        Ok(())
    } else {
        Err(StepError::BoxContext(prem.clone()))
    }
}

pub fn check_step(inst: &RuleInstance, system: System) -> bool {
    explain_step(inst, system).is_ok()
}

/// Premises of a one-premise or two-premise rule applied backwards to
/// `goal`. For the box rules the context is all boxed antecedent formulas.
/// `None` if the principal does not fit.
pub fn backward(rule: &Rule, goal: &Sequent) -> Option<Vec<Sequent>> {
    match rule {
        Rule::AxBottom => goal.ant.contains(&Formula::bottom()).then(Vec::new),
        Rule::AxAtom(p) | Rule::AxGeneral(p) => {
            (goal.ant.contains(p) && goal.succ.contains(p)).then(Vec::new)
        }
        Rule::ImpL(imp) => {
            let (a, b) = imp.as_implies()?;
            let rest = goal.without_ant(imp)?;
            Some(vec![rest.with_ant(b.clone()), rest.with_succ(a.clone())])
        }
        Rule::ImpR(imp) => {
            let (a, b) = imp.as_implies()?;
            let rest = goal.without_succ(imp)?;
            Some(vec![rest.with_ant(a.clone()).with_succ(b.clone())])
        }
        Rule::Refl(bx) => {
            let b = bx.as_box()?;
            goal.ant.contains(bx).then(|| vec![goal.with_ant(b.clone())])
        }
        Rule::BoxInf(bx) => {
            let a = bx.as_box()?;
            let rest = goal.without_succ(bx)?;
            let right = Sequent::new(goal.ant.boxed_part(), Multiset::singleton(a.clone()));
            Some(vec![rest.with_succ(a.clone()), right])
        }
        Rule::BoxGrz(bx) => {
            let a = bx.as_box()?;
            if !goal.succ.contains(bx) {
                return None;
            }
            let ant = goal.ant.boxed_part().with(Formula::grz_guard(a));
            Some(vec![Sequent::new(ant, Multiset::singleton(a.clone()))])
        }
        Rule::Cut(a) => Some(vec![goal.with_succ(a.clone()), goal.with_ant(a.clone())]),
    }
}

/// Every rule instance with conclusion `goal`, one per distinct principal.
/// Cut is never enumerated: its instances are indexed by arbitrary formulas.
pub fn applicable_instances(goal: &Sequent, system: System) -> Vec<RuleInstance> {
    let mut rules = Vec::new();
    if goal.ant.contains(&Formula::bottom()) {
        rules.push(Rule::AxBottom);
    }
    for f in goal.ant.distinct().filter(|f| goal.succ.contains(f)) {
        if system.is_infinitary() {
            if f.is_atom() {
                rules.push(Rule::AxAtom(f.clone()));
            }
        } else {
            rules.push(Rule::AxGeneral(f.clone()));
        }
    }
    for f in goal.succ.distinct() {
        if f.as_implies().is_some() {
            rules.push(Rule::ImpR(f.clone()));
        }
    }
    for f in goal.ant.distinct() {
        if f.as_implies().is_some() {
            rules.push(Rule::ImpL(f.clone()));
        }
        if f.is_boxed() {
            rules.push(Rule::Refl(f.clone()));
        }
    }
    for f in goal.succ.distinct().filter(|f| f.is_boxed()) {
        rules.push(if system.is_infinitary() {
            Rule::BoxInf(f.clone())
        } else {
            Rule::BoxGrz(f.clone())
        });
    }
    rules
        .into_iter()
        .filter_map(|rule| {
            let premises = backward(&rule, goal)?;
            Some(RuleInstance {
                rule,
                conclusion: goal.clone(),
                premises,
            })
        })
        .collect()
}

/// Axiom rule closing `s` in `system`, preferring `⊥`.
pub fn closing_axiom(s: &Sequent, system: System) -> Option<Rule> {
    if s.ant.contains(&Formula::bottom()) {
        return Some(Rule::AxBottom);
    }
    let shared = s.ant.distinct().filter(|f| s.succ.contains(f));
    if system.is_infinitary() {
        shared.into_iter().find(|f| f.is_atom()).cloned().map(Rule::AxAtom)
    } else {
        // prefer the smallest shared formula
        shared.min_by_key(|f| f.size()).cloned().map(Rule::AxGeneral)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{f, seq};

    fn inst(rule: Rule, conclusion: &str, premises: &[&str]) -> RuleInstance {
        RuleInstance {
            rule,
            conclusion: seq(conclusion),
            premises: premises.iter().map(|s| seq(s)).collect(),
        }
    }

    #[test]
    fn refl_step() {
        let i = inst(Rule::Refl(f("[]q")), "r, []q => s", &["r, q, []q => s"]);
        assert!(check_step(&i, System::Inf));
        assert!(check_step(&i, System::Seq));
    }

    #[test]
    fn bottom_axiom() {
        let i = inst(Rule::AxBottom, "q, false => r", &[]);
        assert!(check_step(&i, System::Inf));
        let i = inst(Rule::AxBottom, "q => false", &[]);
        assert!(!check_step(&i, System::Inf));
    }

    #[test]
    fn box_inf_rejects_non_boxed_context() {
        let i = inst(
            Rule::BoxInf(f("[]p")),
            "q, []r => []p",
            &["q, []r => p", "q, []r => p"],
        );
        assert!(matches!(
            explain_step(&i, System::Inf),
            Err(StepError::BoxContext(_))
        ));
        let ok = inst(Rule::BoxInf(f("[]p")), "q, []r => []p", &["q, []r => p", "[]r => p"]);
        assert!(check_step(&ok, System::Inf));
        // empty context is a sub-multiset too
        let ok = inst(Rule::BoxInf(f("[]p")), "q, []r => []p", &["q, []r => p", "=> p"]);
        assert!(check_step(&ok, System::Inf));
    }

    #[test]
    fn system_membership() {
        let ax = inst(Rule::AxGeneral(f("[]p")), "[]p => []p", &[]);
        assert!(check_step(&ax, System::Seq));
        assert!(matches!(
            explain_step(&ax, System::Inf),
            Err(StepError::RuleNotInSystem(RuleName::AxGeneral, System::Inf))
        ));
        let cut = inst(Rule::Cut(f("p")), "=> q", &["=> q, p", "p => q"]);
        assert!(!check_step(&cut, System::Inf));
        assert!(check_step(&cut, System::InfCut));
    }

    #[test]
    fn box_grz_step() {
        let i = inst(Rule::BoxGrz(f("[]p")), "=> []p", &["[](p -> []p) => p"]);
        assert!(check_step(&i, System::Seq));
        let bad = inst(Rule::BoxGrz(f("[]p")), "=> []p", &["=> p"]);
        assert!(!check_step(&bad, System::Seq));
    }

    #[test]
    fn imp_rules() {
        let l = inst(Rule::ImpL(f("p -> q")), "p -> q, r => s", &["q, r => s", "r => p, s"]);
        assert!(check_step(&l, System::Inf));
        let swapped = inst(Rule::ImpL(f("p -> q")), "p -> q, r => s", &["r => p, s", "q, r => s"]);
        assert!(!check_step(&swapped, System::Inf));
        let r = inst(Rule::ImpR(f("p -> q")), "=> p -> q", &["p => q"]);
        assert!(check_step(&r, System::Inf));
    }

    #[test]
    fn instances_examples() {
        let found = applicable_instances(&seq("p => p"), System::Inf);
        assert!(found.iter().any(|i| i.rule == Rule::AxAtom(f("p"))));

        let found = applicable_instances(&seq("=> p -> q"), System::Inf);
        let imp_r: Vec<_> = found.iter().filter(|i| i.rule.name() == RuleName::ImpR).collect();
        assert_eq!(imp_r.len(), 1);
        assert_eq!(imp_r[0].premises, vec![seq("p => q")]);

        let found = applicable_instances(&seq("[]p => []p"), System::Inf);
        let names: Vec<_> = found.iter().map(|i| i.rule.name()).collect();
        assert!(names.contains(&RuleName::Refl));
        assert!(names.contains(&RuleName::BoxInf));
        // no compound axioms in the infinitary calculus
        assert!(!names.contains(&RuleName::AxGeneral));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RuleName::ALL {
            assert_eq!(r.as_str().parse::<RuleName>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.as_str()));
        }
    }
}
