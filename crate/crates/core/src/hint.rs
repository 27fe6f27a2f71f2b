//! Cheap syntactic type hints.
//!
//! Binders carry their types, so most nodes reveal their type without a
//! full check. The parser uses this to infer the polarity of each cut, and
//! the erasure uses it to recompute cut polarities after translation.

use crate::name::Name;
use crate::term::{Command, Term};
use crate::types::Type;

/// Types of the variables and covariables in scope, innermost last.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    vars: Vec<(Name, Type)>,
    covars: Vec<(Name, Type)>,
}

impl Scope {
    pub fn new() -> Self {
        Self::default()
    }

    /// A scope containing only `tp : ret`.
    pub fn toplevel(ret: Type) -> Self {
        let mut s = Scope::new();
        s.push_covar(Name::toplevel(), ret);
        s
    }

    pub fn push_var(&mut self, x: Name, ty: Type) {
        self.vars.push((x, ty));
    }

    pub fn push_covar(&mut self, a: Name, ty: Type) {
        self.covars.push((a, ty));
    }

    pub fn pop_var(&mut self) {
        self.vars.pop();
    }

    pub fn pop_covar(&mut self) {
        self.covars.pop();
    }

    pub fn var(&self, x: &Name) -> Option<&Type> {
        self.vars.iter().rev().find(|(n, _)| n == x).map(|(_, t)| t)
    }

    pub fn covar(&self, a: &Name) -> Option<&Type> {
        self.covars.iter().rev().find(|(n, _)| n == a).map(|(_, t)| t)
    }

    /// Depth of the innermost binding of `x` as a variable and as a
    /// covariable, for resolving which namespace a bare identifier uses.
    pub fn var_depth(&self, x: &Name) -> Option<usize> {
        self.vars.iter().rposition(|(n, _)| n == x)
    }

    pub fn covar_depth(&self, a: &Name) -> Option<usize> {
        self.covars.iter().rposition(|(n, _)| n == a)
    }

    pub fn var_len(&self) -> usize {
        self.vars.len()
    }

    pub fn covar_len(&self) -> usize {
        self.covars.len()
    }

    pub fn truncate(&mut self, vars: usize, covars: usize) {
        self.vars.truncate(vars);
        self.covars.truncate(covars);
    }
}

/// The type a node evidently has, if it can be read off without checking.
/// Injections and projections only reveal one component and give `None`.
pub fn hint_term(scope: &Scope, t: &Term) -> Option<Type> {
    Some(match t {
        Term::Var(x) => scope.var(x)?.clone(),
        Term::CoVar(a) => scope.covar(a)?.clone(),
        Term::Unit | Term::MuTildeUnit(_) => Type::Unit,
        Term::Pair(a, b) => Type::tensor(hint_term(scope, a)?, hint_term(scope, b)?),
        Term::CoPair(a, b) => Type::par(hint_term(scope, a)?, hint_term(scope, b)?),
        Term::Boxed(v) => Type::boxed(hint_term(scope, v)?),
        Term::Neg(v) => Type::not(hint_term(scope, v)?),
        Term::Inj(..) | Term::Proj(..) => return None,
        Term::MuNot(x, _) => Type::not(x.ty.clone()),
        Term::MuWith(a, _, b, _) => Type::with(a.ty.clone(), b.ty.clone()),
        Term::MuPar(a, b, _) => Type::par(a.ty.clone(), b.ty.clone()),
        Term::Mu(a, _) => a.ty.clone(),
        Term::MuTildeBox(x, _) => Type::boxed(x.ty.clone()),
        Term::MuTilde(x, _) => x.ty.clone(),
        Term::MuTildePair(x, y, _) => Type::tensor(x.ty.clone(), y.ty.clone()),
        Term::MuTildeMatch(x, _, y, _) => Type::sum(x.ty.clone(), y.ty.clone()),
    })
}

/// Hint for the type of a cut: the consumer side first, then the producer.
pub fn hint_cut(scope: &Scope, left: &Term, right: &Term) -> Option<Type> {
    hint_term(scope, right).or_else(|| hint_term(scope, left))
}

pub fn hint_command(scope: &Scope, c: &Command) -> Option<Type> {
    hint_cut(scope, &c.left, &c.right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Binder, Side};
    use crate::types::Polarity;

    #[test]
    fn reads_binder_types() {
        let c = Command::new(Polarity::Modal, Term::Unit, Term::covar("tp"));
        let t = Term::mu_tilde_box(Binder::new("x", Type::Unit), c);
        assert_eq!(hint_term(&Scope::new(), &t), Some(Type::boxed(Type::Unit)));
    }

    #[test]
    fn injections_have_no_hint() {
        let t = Term::inj(Side::First, Term::Unit);
        assert_eq!(hint_term(&Scope::new(), &t), None);
        let scope = Scope::toplevel(Type::sum(Type::Unit, Type::Unit));
        assert_eq!(
            hint_cut(&scope, &t, &Term::covar("tp")),
            Some(Type::sum(Type::Unit, Type::Unit))
        );
    }

    #[test]
    fn innermost_binding_wins() {
        let mut s = Scope::new();
        s.push_var(Name::new("x"), Type::Unit);
        s.push_var(Name::new("x"), Type::not(Type::Unit));
        assert_eq!(s.var(&Name::new("x")), Some(&Type::not(Type::Unit)));
        s.pop_var();
        assert_eq!(s.var(&Name::new("x")), Some(&Type::Unit));
    }
}
