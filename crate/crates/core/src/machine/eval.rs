//! Evaluation of values and co-values against a memory. Thunks are not
//! forced: negative variables and positive or modal covariables stay
//! symbolic.

use std::sync::Arc;

use crate::machine::memory::{Fault, Memory};
use crate::term::{Class, Term};
use crate::types::Polarity;

/// `M ⊢ V ⇓ V̄`.
pub fn eval_value(m: &Memory, v: &Term) -> Result<Term, Fault> {
    match v {
        Term::Var(x) => {
            let b = m.var(x).ok_or_else(|| Fault::UnboundVar(x.clone()))?;
            Ok(if b.polarity == Polarity::Neg { v.clone() } else { b.content.clone() })
        }
        Term::Unit => Ok(Term::Unit),
        Term::Pair(a, b) => Ok(Term::Pair(Arc::new(eval_value(m, a)?), Arc::new(eval_value(m, b)?))),
        Term::Inj(i, a) => Ok(Term::Inj(*i, Arc::new(eval_value(m, a)?))),
        Term::Boxed(a) => Ok(Term::Boxed(Arc::new(eval_value(m, a)?))),
        Term::MuNot(..) | Term::MuWith(..) | Term::MuPar(..) => Ok(v.clone()),
        Term::Mu(a, _) if a.polarity() == Polarity::Neg => Ok(v.clone()),
        _ => Err(Fault::ClassMismatch { expected: Class::Value, found: v.clone() }),
    }
}

/// `M ⊢ S ⇓ S̄`. The toplevel covariable is never in memory and stays
/// symbolic.
pub fn eval_covalue(m: &Memory, s: &Term) -> Result<Term, Fault> {
    match s {
        Term::CoVar(a) => match m.covar(a) {
            Some(b) if b.polarity == Polarity::Neg => Ok(b.content.clone()),
            Some(_) => Ok(s.clone()),
            None if a.is_toplevel() => Ok(s.clone()),
            None => Err(Fault::UnboundCovar(a.clone())),
        },
        Term::Proj(i, a) => Ok(Term::Proj(*i, Arc::new(eval_covalue(m, a)?))),
        Term::Neg(v) => Ok(Term::Neg(Arc::new(eval_value(m, v)?))),
        Term::CoPair(a, b) => Ok(Term::CoPair(Arc::new(eval_covalue(m, a)?), Arc::new(eval_covalue(m, b)?))),
        Term::MuTildeBox(..) | Term::MuTildeUnit(_) | Term::MuTildePair(..) | Term::MuTildeMatch(..) => {
            Ok(s.clone())
        }
        Term::MuTilde(x, _) if x.polarity().is_box_plus() => Ok(s.clone()),
        _ => Err(Fault::ClassMismatch { expected: Class::CoValue, found: s.clone() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::memory::Binding;
    use crate::name::Name;
    use crate::term::{Binder, Command};
    use crate::types::Type;

    #[test]
    fn negative_variables_stay_symbolic() {
        let neg = Type::not(Type::Unit);
        let thunk = Term::mu_not(
            Binder::new("z", Type::Unit),
            Command::new(Polarity::Modal, Term::var("z"), Term::covar("tp")),
        );
        let mut m = Memory::new();
        m.alloc(vec![Binding::var(Name::new("x"), Type::Unit, Term::Unit)]);
        m.alloc(vec![Binding::var(Name::new("y"), neg, thunk.clone())]);
        let v = eval_value(&m, &Term::pair(Term::var("x"), Term::var("y"))).unwrap();
        assert_eq!(v, Term::pair(Term::Unit, Term::var("y")));
        assert_eq!(eval_value(&m, &thunk).unwrap(), thunk);
    }

    #[test]
    fn positive_covariables_stay_symbolic() {
        let pos = Type::tensor(Type::Unit, Type::not(Type::Unit));
        let mut m = Memory::new();
        m.alloc(vec![Binding::covar(Name::new("a"), pos, Term::covar("tp"))]);
        assert_eq!(eval_covalue(&m, &Term::covar("a")).unwrap(), Term::covar("a"));
        assert!(eval_covalue(&m, &Term::covar("b")).is_err());
    }
}
