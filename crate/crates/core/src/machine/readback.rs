//! Reading a memory back as a substitution `[M]`.

use thiserror::Error;

use crate::machine::memory::{Kind, Memory};
use crate::name::Name;
use crate::subst::{free_vars, Substitution};
use crate::term::{Command, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("binding `{binding}` refers to `{name}`, which is not bound before it")]
pub struct Dangling {
    pub binding: Name,
    pub name: Name,
}

/// Folds the heap and then the stack, oldest binding first. Each binding's
/// content is read back against the bindings before it.
pub fn readback_substitution(m: &Memory) -> Result<Substitution, Dangling> {
    let mut sigma = Substitution::new();
    let mut vars: Vec<&Name> = Vec::new();
    let mut covars: Vec<&Name> = Vec::new();
    for b in m.bindings() {
        let fv = free_vars(&b.content);
        if let Some(n) = fv.vars.iter().find(|n| !vars.contains(n)) {
            return Err(Dangling { binding: b.name.clone(), name: n.clone() });
        }
        if let Some(n) = fv.covars.iter().find(|n| !n.is_toplevel() && !covars.contains(n)) {
            return Err(Dangling { binding: b.name.clone(), name: n.clone() });
        }
        let content = sigma.apply(&b.content);
        match b.kind {
            Kind::Var => {
                sigma.insert_var(b.name.clone(), content).expect("stored values are values");
                vars.push(&b.name);
            }
            Kind::CoVar => {
                sigma.insert_covar(b.name.clone(), content).expect("stored co-values are co-values");
                covars.push(&b.name);
            }
        }
    }
    Ok(sigma)
}

pub fn readback(m: &Memory, t: &Term) -> Result<Term, Dangling> {
    Ok(readback_substitution(m)?.apply(t))
}

pub fn readback_command(m: &Memory, c: &Command) -> Result<Command, Dangling> {
    Ok(readback_substitution(m)?.apply_command(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::memory::Binding;
    use crate::types::{Polarity, Type};

    #[test]
    fn reads_back_heap_variable() {
        let mut m = Memory::new();
        m.alloc(vec![Binding::var(Name::new("x"), Type::Unit, Term::Unit)]);
        let c = Command::new(Polarity::Modal, Term::var("x"), Term::covar("tp"));
        assert_eq!(
            readback_command(&m, &c).unwrap(),
            Command::new(Polarity::Modal, Term::Unit, Term::covar("tp"))
        );
    }

    #[test]
    fn chains_through_earlier_bindings() {
        let mut m = Memory::new();
        m.alloc(vec![Binding::var(Name::new("x"), Type::Unit, Term::Unit)]);
        m.alloc(vec![Binding::var(Name::new("y"), Type::Unit, Term::boxed(Term::var("x")))]);
        assert_eq!(readback(&m, &Term::var("y")).unwrap(), Term::boxed(Term::Unit));
    }

    #[test]
    fn rejects_forward_reference() {
        let mut m = Memory::new();
        m.alloc(vec![Binding::var(Name::new("y"), Type::Unit, Term::var("x"))]);
        m.alloc(vec![Binding::var(Name::new("x"), Type::Unit, Term::Unit)]);
        assert!(readback_substitution(&m).is_err());
    }
}
