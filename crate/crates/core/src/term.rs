//! The stratified term grammar.
//!
//! Values, co-values, expressions and environments share the [`Term`] node
//! space; which classes a node inhabits is computed by [`classify`]. A binder
//! carries a full type and its polarity is always read off that type, so the
//! `μα⁺` / `μα⁻` (and `μ̃x⁺` / `μ̃x⁻`) variants are one constructor each.

use std::fmt;
use std::sync::Arc;

use crate::name::Name;
use crate::types::{Polarity, Type};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Binder {
    pub name: Name,
    pub ty: Type,
}

impl Binder {
    pub fn new(name: impl Into<Name>, ty: Type) -> Self {
        Binder { name: name.into(), ty }
    }

    pub fn polarity(&self) -> Polarity {
        self.ty.polarity()
    }
}

/// Injection / projection index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    // values
    Var(Name),
    Pair(Arc<Term>, Arc<Term>),
    Boxed(Arc<Term>),
    Unit,
    Inj(Side, Arc<Term>),
    /// `μ[x].c`
    MuNot(Binder, Arc<Command>),
    /// `μ{π₁α.c₁ | π₂β.c₂}`
    MuWith(Binder, Arc<Command>, Binder, Arc<Command>),
    /// `μ(α,β).c`
    MuPar(Binder, Binder, Arc<Command>),
    /// `μα.c`; a value when α is negative, an expression otherwise.
    Mu(Binder, Arc<Command>),
    // co-values
    CoVar(Name),
    Proj(Side, Arc<Term>),
    /// `μ̃□x.c`
    MuTildeBox(Binder, Arc<Command>),
    /// `[V]`
    Neg(Arc<Term>),
    CoPair(Arc<Term>, Arc<Term>),
    /// `μ̃().c`
    MuTildeUnit(Arc<Command>),
    /// `μ̃x.c`; a co-value when x is positive or modal, an environment otherwise.
    MuTilde(Binder, Arc<Command>),
    /// `μ̃(x,y).c`
    MuTildePair(Binder, Binder, Arc<Command>),
    /// `μ̃[ι₁x.c₁ | ι₂y.c₂]`
    MuTildeMatch(Binder, Arc<Command>, Binder, Arc<Command>),
}

/// `⟨left ‖ right⟩_ε`. The polarity is stored; typing checks that it agrees
/// with the cut type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Command {
    pub polarity: Polarity,
    pub left: Term,
    pub right: Term,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Class {
    Value,
    CoValue,
    Expression,
    Environment,
    Command,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Value => "value",
            Class::CoValue => "co-value",
            Class::Expression => "expression",
            Class::Environment => "environment",
            Class::Command => "command",
        })
    }
}

/// Set of syntactic classes a node belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ClassSet {
    pub value: bool,
    pub covalue: bool,
    pub expression: bool,
    pub environment: bool,
    pub command: bool,
}

impl ClassSet {
    pub fn contains(&self, class: Class) -> bool {
        match class {
            Class::Value => self.value,
            Class::CoValue => self.covalue,
            Class::Expression => self.expression,
            Class::Environment => self.environment,
            Class::Command => self.command,
        }
    }

    pub fn classes(&self) -> Vec<Class> {
        [Class::Value, Class::CoValue, Class::Expression, Class::Environment, Class::Command]
            .into_iter()
            .filter(|c| self.contains(*c))
            .collect()
    }
}

pub fn classify(term: &Term) -> ClassSet {
    let mut set = ClassSet::default();
    match term {
        Term::Mu(b, _) => {
            if b.polarity() == Polarity::Neg {
                set.value = true;
            }
            set.expression = true;
        }
        Term::MuTilde(b, _) => {
            if b.polarity().is_box_plus() {
                set.covalue = true;
            }
            set.environment = true;
        }
        t if t.is_producer_form() => {
            set.value = true;
            set.expression = true;
        }
        _ => {
            set.covalue = true;
            set.environment = true;
        }
    }
    set
}

pub fn classify_command(_: &Command) -> ClassSet {
    ClassSet { command: true, ..ClassSet::default() }
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }
    pub fn covar(name: impl Into<Name>) -> Term {
        Term::CoVar(name.into())
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Arc::new(a), Arc::new(b))
    }
    pub fn boxed(v: Term) -> Term {
        Term::Boxed(Arc::new(v))
    }
    pub fn inj(side: Side, v: Term) -> Term {
        Term::Inj(side, Arc::new(v))
    }
    pub fn proj(side: Side, s: Term) -> Term {
        Term::Proj(side, Arc::new(s))
    }
    pub fn neg(v: Term) -> Term {
        Term::Neg(Arc::new(v))
    }
    pub fn copair(a: Term, b: Term) -> Term {
        Term::CoPair(Arc::new(a), Arc::new(b))
    }
    pub fn mu(b: Binder, c: Command) -> Term {
        Term::Mu(b, Arc::new(c))
    }
    pub fn mu_not(b: Binder, c: Command) -> Term {
        Term::MuNot(b, Arc::new(c))
    }
    pub fn mu_par(a: Binder, b: Binder, c: Command) -> Term {
        Term::MuPar(a, b, Arc::new(c))
    }
    pub fn mu_with(a: Binder, c1: Command, b: Binder, c2: Command) -> Term {
        Term::MuWith(a, Arc::new(c1), b, Arc::new(c2))
    }
    pub fn mu_tilde(b: Binder, c: Command) -> Term {
        Term::MuTilde(b, Arc::new(c))
    }
    pub fn mu_tilde_box(b: Binder, c: Command) -> Term {
        Term::MuTildeBox(b, Arc::new(c))
    }
    pub fn mu_tilde_unit(c: Command) -> Term {
        Term::MuTildeUnit(Arc::new(c))
    }
    pub fn mu_tilde_pair(x: Binder, y: Binder, c: Command) -> Term {
        Term::MuTildePair(x, y, Arc::new(c))
    }
    pub fn mu_tilde_match(x: Binder, c1: Command, y: Binder, c2: Command) -> Term {
        Term::MuTildeMatch(x, Arc::new(c1), y, Arc::new(c2))
    }

    /// Constructor belongs to the producer side of the grammar.
    pub fn is_producer_form(&self) -> bool {
        matches!(
            self,
            Term::Var(_)
                | Term::Pair(..)
                | Term::Boxed(_)
                | Term::Unit
                | Term::Inj(..)
                | Term::MuNot(..)
                | Term::MuWith(..)
                | Term::MuPar(..)
                | Term::Mu(..)
        )
    }

    pub fn is_value(&self) -> bool {
        classify(self).value
    }
    pub fn is_covalue(&self) -> bool {
        classify(self).covalue
    }
    pub fn is_expression(&self) -> bool {
        classify(self).expression
    }
    pub fn is_environment(&self) -> bool {
        classify(self).environment
    }

    pub fn has_class(&self, class: Class) -> bool {
        classify(self).contains(class)
    }

    /// Number of nodes, commands included.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::CoVar(_) | Term::Unit => 1,
            Term::Pair(a, b) | Term::CoPair(a, b) => 1 + a.size() + b.size(),
            Term::Boxed(v) | Term::Inj(_, v) | Term::Proj(_, v) | Term::Neg(v) => 1 + v.size(),
            Term::MuNot(_, c)
            | Term::MuPar(_, _, c)
            | Term::Mu(_, c)
            | Term::MuTildeBox(_, c)
            | Term::MuTildeUnit(c)
            | Term::MuTilde(_, c)
            | Term::MuTildePair(_, _, c) => 1 + c.size(),
            Term::MuWith(_, c1, _, c2) | Term::MuTildeMatch(_, c1, _, c2) => {
                1 + c1.size() + c2.size()
            }
        }
    }

    /// Immediate sub-commands.
    pub fn commands(&self) -> Vec<&Command> {
        match self {
            Term::MuNot(_, c)
            | Term::MuPar(_, _, c)
            | Term::Mu(_, c)
            | Term::MuTildeBox(_, c)
            | Term::MuTildeUnit(c)
            | Term::MuTilde(_, c)
            | Term::MuTildePair(_, _, c) => vec![c],
            Term::MuWith(_, c1, _, c2) | Term::MuTildeMatch(_, c1, _, c2) => vec![c1, c2],
            _ => vec![],
        }
    }
}

impl Command {
    pub fn new(polarity: Polarity, left: Term, right: Term) -> Self {
        Command { polarity, left, right }
    }

    /// Checks the grammar stratification of the cut itself:
    /// `⟨t ‖ S⟩_⊞` or `⟨V ‖ e⟩_−`.
    pub fn stratification_error(&self) -> Option<(Class, &Term)> {
        if self.polarity.is_box_plus() {
            if !self.left.is_expression() {
                return Some((Class::Expression, &self.left));
            }
            if !self.right.is_covalue() {
                return Some((Class::CoValue, &self.right));
            }
        } else {
            if !self.left.is_value() {
                return Some((Class::Value, &self.left));
            }
            if !self.right.is_environment() {
                return Some((Class::Environment, &self.right));
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        1 + self.left.size() + self.right.size()
    }
}

/// A stratification violation found by [`check_well_formed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Malformed {
    pub expected: Class,
    pub found: Term,
}

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected a {}, found `{}`", self.expected, self.found)
    }
}

fn require(term: &Term, class: Class) -> Result<(), Malformed> {
    if term.has_class(class) {
        well_formed_term(term)
    } else {
        Err(Malformed { expected: class, found: term.clone() })
    }
}

fn well_formed_term(term: &Term) -> Result<(), Malformed> {
    match term {
        Term::Var(_) | Term::CoVar(_) | Term::Unit => Ok(()),
        Term::Pair(a, b) => {
            require(a, Class::Value)?;
            require(b, Class::Value)
        }
        Term::Boxed(v) | Term::Inj(_, v) | Term::Neg(v) => require(v, Class::Value),
        Term::CoPair(a, b) => {
            require(a, Class::CoValue)?;
            require(b, Class::CoValue)
        }
        Term::Proj(_, s) => require(s, Class::CoValue),
        _ => term.commands().into_iter().try_for_each(check_well_formed),
    }
}

/// Recursively verifies the grammar stratification.
pub fn check_well_formed(c: &Command) -> Result<(), Malformed> {
    if let Some((expected, found)) = c.stratification_error() {
        return Err(Malformed { expected, found: found.clone() });
    }
    well_formed_term(&c.left)?;
    well_formed_term(&c.right)
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
