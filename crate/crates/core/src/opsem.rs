//! Toplevel small-step reduction `c ▷ c'`.

use std::fmt;

use thiserror::Error;

use crate::name::Name;
use crate::subst::{free_vars, substitute, Substitution};
use crate::term::{Command, Side, Term};
use crate::types::Polarity;

/// The nine reduction rules, numbered as in the usual presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `⟨μα.c ‖ S⟩ ▷ c[S/α]`
    Mu,
    /// `⟨V ‖ μ̃x.c⟩ ▷ c[V/x]`
    MuTilde,
    /// `⟨() ‖ μ̃().c⟩ ▷ c`
    Unit,
    /// `⟨(V,W) ‖ μ̃(x,y).c⟩ ▷ c[V/x, W/y]`
    Tensor,
    /// `⟨ιᵢV ‖ μ̃[ι₁x₁.c₁ | ι₂x₂.c₂]⟩ ▷ cᵢ[V/xᵢ]`
    Sum,
    /// `⟨□V ‖ μ̃□x.c⟩ ▷ c[V/x]`
    Box,
    /// `⟨μ[x].c ‖ [V]⟩ ▷ c[V/x]`
    Not,
    /// `⟨μ(α,β).c ‖ (S,S')⟩ ▷ c[S/α, S'/β]`
    Par,
    /// `⟨μ{π₁α₁.c₁ | π₂α₂.c₂} ‖ πᵢS⟩ ▷ cᵢ[S/αᵢ]`
    With,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Mu,
        Rule::MuTilde,
        Rule::Unit,
        Rule::Tensor,
        Rule::Sum,
        Rule::Box,
        Rule::Not,
        Rule::Par,
        Rule::With,
    ];

    pub fn number(self) -> usize {
        Rule::ALL.iter().position(|r| *r == self).unwrap() + 1
    }

    pub fn label(self) -> &'static str {
        match self {
            Rule::Mu => "mu",
            Rule::MuTilde => "mu-tilde",
            Rule::Unit => "unit",
            Rule::Tensor => "tensor",
            Rule::Sum => "sum",
            Rule::Box => "box",
            Rule::Not => "not",
            Rule::Par => "par",
            Rule::With => "with",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Stepped(Rule, Command),
    /// The command is `⟨V ‖ tp⟩`.
    Terminal(Term),
    Stuck(String),
}

/// Whether `rule`'s left-hand side matches `c`.
pub fn rule_matches(rule: Rule, c: &Command) -> bool {
    let eps = c.polarity;
    match (rule, &c.left, &c.right) {
        (Rule::Mu, Term::Mu(a, _), s) => a.polarity() == eps && s.is_covalue(),
        (Rule::MuTilde, v, Term::MuTilde(x, _)) => x.polarity() == eps && v.is_value(),
        (Rule::Unit, Term::Unit, Term::MuTildeUnit(_)) => eps == Polarity::Modal,
        (Rule::Tensor, Term::Pair(..), Term::MuTildePair(..)) => true,
        (Rule::Sum, Term::Inj(..), Term::MuTildeMatch(..)) => true,
        (Rule::Box, Term::Boxed(_), Term::MuTildeBox(..)) => eps == Polarity::Modal,
        (Rule::Not, Term::MuNot(..), Term::Neg(_)) => eps == Polarity::Neg,
        (Rule::Par, Term::MuPar(..), Term::CoPair(..)) => eps == Polarity::Neg,
        (Rule::With, Term::MuWith(..), Term::Proj(..)) => eps == Polarity::Neg,
        _ => false,
    }
}

/// Every rule whose left-hand side matches. Determinism means this has at
/// most one element.
pub fn matching_rules(c: &Command) -> Vec<Rule> {
    Rule::ALL.into_iter().filter(|r| rule_matches(*r, c)).collect()
}

fn subst1_var(c: &Command, x: &Name, v: &Term) -> Command {
    let s = Substitution::new().var(x.clone(), v.clone()).expect("value by rule guard");
    substitute(c, &s)
}

fn subst1_covar(c: &Command, a: &Name, s: &Term) -> Command {
    let sigma = Substitution::new().covar(a.clone(), s.clone()).expect("co-value by rule guard");
    substitute(c, &sigma)
}

/// Contracts the redex of `rule`. Panics if the rule does not match.
pub fn contract(rule: Rule, c: &Command) -> Command {
    assert!(rule_matches(rule, c), "rule {rule} does not match {c}");
    match (&c.left, &c.right) {
        (Term::Mu(a, body), s) if rule == Rule::Mu => subst1_covar(body, &a.name, s),
        (v, Term::MuTilde(x, body)) if rule == Rule::MuTilde => subst1_var(body, &x.name, v),
        (Term::Unit, Term::MuTildeUnit(body)) => (**body).clone(),
        (Term::Pair(v, w), Term::MuTildePair(x, y, body)) => {
            let s = Substitution::new()
                .var(x.name.clone(), (**v).clone())
                .and_then(|s| s.var(y.name.clone(), (**w).clone()))
                .expect("values");
            substitute(body, &s)
        }
        (Term::Inj(i, v), Term::MuTildeMatch(x1, c1, x2, c2)) => match i {
            Side::First => subst1_var(c1, &x1.name, v),
            Side::Second => subst1_var(c2, &x2.name, v),
        },
        (Term::Boxed(v), Term::MuTildeBox(x, body)) => subst1_var(body, &x.name, v),
        (Term::MuNot(x, body), Term::Neg(v)) => subst1_var(body, &x.name, v),
        (Term::MuPar(a, b, body), Term::CoPair(s1, s2)) => {
            let s = Substitution::new()
                .covar(a.name.clone(), (**s1).clone())
                .and_then(|s| s.covar(b.name.clone(), (**s2).clone()))
                .expect("co-values");
            substitute(body, &s)
        }
        (Term::MuWith(a1, c1, a2, c2), Term::Proj(i, s)) => match i {
            Side::First => subst1_covar(c1, &a1.name, s),
            Side::Second => subst1_covar(c2, &a2.name, s),
        },
        _ => unreachable!("guarded by rule_matches"),
    }
}

pub fn step(c: &Command) -> StepResult {
    if let Some(rule) = Rule::ALL.into_iter().find(|r| rule_matches(*r, c)) {
        return StepResult::Stepped(rule, contract(rule, c));
    }
    match &c.right {
        Term::CoVar(a) if a.is_toplevel() && c.left.is_value() => {
            let fv = free_vars(&c.left);
            if fv.is_empty() {
                StepResult::Terminal(c.left.clone())
            } else {
                StepResult::Stuck(format!("open result {}", c.left))
            }
        }
        _ => StepResult::Stuck(format!("no rule applies to {c}")),
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RunError {
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: usize, last: Command },
}

/// Final state of a [`run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub steps: usize,
    pub result: StepResult,
    /// The last command reached.
    pub last: Command,
}

/// Steps until terminal or stuck, using at most `fuel` steps.
pub fn run(c: &Command, fuel: usize) -> Result<Outcome, RunError> {
    run_with(c, fuel, |_, _, _| {})
}

/// Like [`run`], calling `observe(before, rule, after)` on every step.
pub fn run_with(
    c: &Command,
    fuel: usize,
    mut observe: impl FnMut(&Command, Rule, &Command),
) -> Result<Outcome, RunError> {
    let mut cur = c.clone();
    let mut steps = 0;
    loop {
        match step(&cur) {
            StepResult::Stepped(rule, next) => {
                if steps == fuel {
                    return Err(RunError::FuelExhausted { steps, last: cur });
                }
                observe(&cur, rule, &next);
                cur = next;
                steps += 1;
            }
            done => return Ok(Outcome { steps, result: done, last: cur }),
        }
    }
}

/// The sequence of commands visited, starting with `c`.
pub fn trace(c: &Command, fuel: usize) -> Result<Vec<(Option<Rule>, Command)>, RunError> {
    let mut out = vec![(None, c.clone())];
    run_with(c, fuel, |_, r, next| out.push((Some(r), next.clone())))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Binder;
    use crate::types::Type;

    fn tp() -> Term {
        Term::covar("tp")
    }

    #[test]
    fn unit_rule() {
        let c = Command::new(
            Polarity::Modal,
            Term::Unit,
            Term::mu_tilde_unit(Command::new(Polarity::Modal, Term::Unit, tp())),
        );
        assert_eq!(
            step(&c),
            StepResult::Stepped(Rule::Unit, Command::new(Polarity::Modal, Term::Unit, tp()))
        );
    }

    #[test]
    fn box_runs_in_one_step() {
        let c = Command::new(
            Polarity::Modal,
            Term::boxed(Term::Unit),
            Term::mu_tilde_box(
                Binder::new("x", Type::Unit),
                Command::new(Polarity::Modal, Term::var("x"), tp()),
            ),
        );
        let out = run(&c, 10).unwrap();
        assert_eq!(out.steps, 1);
        assert_eq!(out.result, StepResult::Terminal(Term::Unit));
    }

    #[test]
    fn open_command_is_stuck() {
        let c = Command::new(Polarity::Modal, Term::var("x"), tp());
        let out = run(&c, 10).unwrap();
        assert_eq!(out.steps, 0);
        assert!(matches!(out.result, StepResult::Stuck(_)));
        let c = Command::new(Polarity::Modal, Term::Unit, Term::covar("a"));
        let out = run(&c, 10).unwrap();
        assert_eq!(out.steps, 0);
        assert!(matches!(out.result, StepResult::Stuck(_)));
    }

    #[test]
    fn fuel_is_respected() {
        let c = Command::new(
            Polarity::Modal,
            Term::Unit,
            Term::mu_tilde_unit(Command::new(Polarity::Modal, Term::Unit, tp())),
        );
        assert!(matches!(run(&c, 0), Err(RunError::FuelExhausted { steps: 0, .. })));
        assert_eq!(run(&c, 1).unwrap().steps, 1);
    }
}
