//! Free names, capture-avoiding simultaneous substitution, and
//! alpha-equivalence.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::name::Name;
use crate::term::{Binder, Class, Command, Term};

/// Free variables and free covariables of a node. Variables and covariables
/// live in separate namespaces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeNames {
    pub vars: BTreeSet<Name>,
    pub covars: BTreeSet<Name>,
}

impl FreeNames {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.covars.is_empty()
    }

    pub fn extend(&mut self, other: FreeNames) {
        self.vars.extend(other.vars);
        self.covars.extend(other.covars);
    }
}

pub fn free_vars(term: &Term) -> FreeNames {
    let mut acc = FreeNames::default();
    collect_term(term, &mut Vec::new(), &mut Vec::new(), &mut acc);
    acc
}

pub fn free_vars_command(c: &Command) -> FreeNames {
    let mut acc = FreeNames::default();
    collect_command(c, &mut Vec::new(), &mut Vec::new(), &mut acc);
    acc
}

fn collect_command(c: &Command, vs: &mut Vec<Name>, cs: &mut Vec<Name>, acc: &mut FreeNames) {
    collect_term(&c.left, vs, cs, acc);
    collect_term(&c.right, vs, cs, acc);
}

fn under(
    vars: &[&Binder],
    covars: &[&Binder],
    c: &Command,
    vs: &mut Vec<Name>,
    cs: &mut Vec<Name>,
    acc: &mut FreeNames,
) {
    let (nv, nc) = (vs.len(), cs.len());
    vs.extend(vars.iter().map(|b| b.name.clone()));
    cs.extend(covars.iter().map(|b| b.name.clone()));
    collect_command(c, vs, cs, acc);
    vs.truncate(nv);
    cs.truncate(nc);
}

fn collect_term(t: &Term, vs: &mut Vec<Name>, cs: &mut Vec<Name>, acc: &mut FreeNames) {
    match t {
        Term::Var(x) => {
            if !vs.contains(x) {
                acc.vars.insert(x.clone());
            }
        }
        Term::CoVar(a) => {
            if !cs.contains(a) {
                acc.covars.insert(a.clone());
            }
        }
        Term::Unit => {}
        Term::Pair(a, b) | Term::CoPair(a, b) => {
            collect_term(a, vs, cs, acc);
            collect_term(b, vs, cs, acc);
        }
        Term::Boxed(v) | Term::Inj(_, v) | Term::Proj(_, v) | Term::Neg(v) => {
            collect_term(v, vs, cs, acc)
        }
        Term::MuNot(x, c) | Term::MuTildeBox(x, c) | Term::MuTilde(x, c) => {
            under(&[x], &[], c, vs, cs, acc)
        }
        Term::MuTildePair(x, y, c) => under(&[x, y], &[], c, vs, cs, acc),
        Term::MuTildeMatch(x, c1, y, c2) => {
            under(&[x], &[], c1, vs, cs, acc);
            under(&[y], &[], c2, vs, cs, acc);
        }
        Term::MuTildeUnit(c) => under(&[], &[], c, vs, cs, acc),
        Term::Mu(a, c) => under(&[], &[a], c, vs, cs, acc),
        Term::MuPar(a, b, c) => under(&[], &[a, b], c, vs, cs, acc),
        Term::MuWith(a, c1, b, c2) => {
            under(&[], &[a], c1, vs, cs, acc);
            under(&[], &[b], c2, vs, cs, acc);
        }
    }
}

/// Every name occurring anywhere in a command, bound or free.
pub fn all_names_command(c: &Command, out: &mut BTreeSet<Name>) {
    all_names_term(&c.left, out);
    all_names_term(&c.right, out);
}

pub fn all_names_term(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) | Term::CoVar(x) => {
            out.insert(x.clone());
        }
        Term::Unit => {}
        Term::Pair(a, b) | Term::CoPair(a, b) => {
            all_names_term(a, out);
            all_names_term(b, out);
        }
        Term::Boxed(v) | Term::Inj(_, v) | Term::Proj(_, v) | Term::Neg(v) => {
            all_names_term(v, out)
        }
        _ => {
            for b in binders(t) {
                out.insert(b.name.clone());
            }
            for c in t.commands() {
                all_names_command(c, out);
            }
        }
    }
}

fn binders(t: &Term) -> Vec<&Binder> {
    match t {
        Term::MuNot(x, _) | Term::MuTildeBox(x, _) | Term::MuTilde(x, _) | Term::Mu(x, _) => {
            vec![x]
        }
        Term::MuTildePair(x, y, _)
        | Term::MuTildeMatch(x, _, y, _)
        | Term::MuPar(x, y, _)
        | Term::MuWith(x, _, y, _) => vec![x, y],
        _ => vec![],
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("cannot substitute `{term}` for variable `{name}`: not a value")]
    NotAValue { name: Name, term: Term },
    #[error("cannot substitute `{term}` for covariable `{name}`: not a co-value")]
    NotACoValue { name: Name, term: Term },
}

/// A simultaneous substitution of values for variables and co-values for
/// covariables.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    vars: HashMap<Name, Term>,
    covars: HashMap<Name, Term>,
    range: FreeNames,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.covars.is_empty()
    }

    pub fn var(mut self, x: impl Into<Name>, v: Term) -> Result<Self, SubstError> {
        self.insert_var(x.into(), v)?;
        Ok(self)
    }

    pub fn covar(mut self, a: impl Into<Name>, s: Term) -> Result<Self, SubstError> {
        self.insert_covar(a.into(), s)?;
        Ok(self)
    }

    pub fn insert_var(&mut self, x: Name, v: Term) -> Result<(), SubstError> {
        if !v.has_class(Class::Value) {
            return Err(SubstError::NotAValue { name: x, term: v });
        }
        self.range.extend(free_vars(&v));
        self.vars.insert(x, v);
        Ok(())
    }

    pub fn insert_covar(&mut self, a: Name, s: Term) -> Result<(), SubstError> {
        if !s.has_class(Class::CoValue) {
            return Err(SubstError::NotACoValue { name: a, term: s });
        }
        self.range.extend(free_vars(&s));
        self.covars.insert(a, s);
        Ok(())
    }

    /// Unchecked insertion used for renamings, whose range is always a
    /// variable or covariable.
    fn rename_var(&mut self, x: Name, to: Name) {
        self.range.vars.insert(to.clone());
        self.vars.insert(x, Term::Var(to));
    }

    fn rename_covar(&mut self, a: Name, to: Name) {
        self.range.covars.insert(to.clone());
        self.covars.insert(a, Term::CoVar(to));
    }

    pub fn get_var(&self, x: &Name) -> Option<&Term> {
        self.vars.get(x)
    }

    pub fn get_covar(&self, a: &Name) -> Option<&Term> {
        self.covars.get(a)
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        subst_term(t, self)
    }

    pub fn apply_command(&self, c: &Command) -> Command {
        if self.is_empty() {
            return c.clone();
        }
        subst_command(c, self)
    }
}

/// `c[σ]`.
pub fn substitute(c: &Command, sigma: &Substitution) -> Command {
    sigma.apply_command(c)
}

pub fn substitute_term(t: &Term, sigma: &Substitution) -> Term {
    sigma.apply(t)
}

fn subst_command(c: &Command, s: &Substitution) -> Command {
    Command {
        polarity: c.polarity,
        left: subst_term(&c.left, s),
        right: subst_term(&c.right, s),
    }
}

/// Pushes the substitution under binders for the given variables and
/// covariables, renaming any binder that would capture a name from the
/// range. Returns the (possibly renamed) binders and the inner substitution.
fn enter(
    s: &Substitution,
    vars: &[&Binder],
    covars: &[&Binder],
    bodies: &[&Command],
) -> (Vec<Binder>, Vec<Binder>, Substitution) {
    let mut inner = s.clone();
    for b in vars {
        inner.vars.remove(&b.name);
    }
    for b in covars {
        inner.covars.remove(&b.name);
    }
    let mut out_vars = Vec::with_capacity(vars.len());
    let mut out_covars = Vec::with_capacity(covars.len());
    let mut body_free: Option<FreeNames> = None;
    let mut body_fv = || -> FreeNames {
        let mut acc = FreeNames::default();
        for c in bodies {
            acc.extend(free_vars_command(c));
        }
        acc
    };
    for b in vars {
        if inner.range.vars.contains(&b.name) {
            let fv = body_free.get_or_insert_with(&mut body_fv);
            let fresh = b.name.freshen(|n| {
                inner.range.vars.contains(n)
                    || fv.vars.contains(n)
                    || vars.iter().any(|o| &o.name == n)
            });
            inner.rename_var(b.name.clone(), fresh.clone());
            out_vars.push(Binder { name: fresh, ty: b.ty.clone() });
        } else {
            out_vars.push((*b).clone());
        }
    }
    for b in covars {
        if inner.range.covars.contains(&b.name) {
            let fv = body_free.get_or_insert_with(&mut body_fv);
            let fresh = b.name.freshen(|n| {
                inner.range.covars.contains(n)
                    || fv.covars.contains(n)
                    || covars.iter().any(|o| &o.name == n)
            });
            inner.rename_covar(b.name.clone(), fresh.clone());
            out_covars.push(Binder { name: fresh, ty: b.ty.clone() });
        } else {
            out_covars.push((*b).clone());
        }
    }
    (out_vars, out_covars, inner)
}

fn sub(c: &Command, s: &Substitution) -> Arc<Command> {
    Arc::new(if s.is_empty() { c.clone() } else { subst_command(c, s) })
}

fn subst_term(t: &Term, s: &Substitution) -> Term {
    match t {
        Term::Var(x) => s.vars.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::CoVar(a) => s.covars.get(a).cloned().unwrap_or_else(|| t.clone()),
        Term::Unit => Term::Unit,
        Term::Pair(a, b) => Term::Pair(Arc::new(subst_term(a, s)), Arc::new(subst_term(b, s))),
        Term::CoPair(a, b) => {
            Term::CoPair(Arc::new(subst_term(a, s)), Arc::new(subst_term(b, s)))
        }
        Term::Boxed(v) => Term::Boxed(Arc::new(subst_term(v, s))),
        Term::Inj(i, v) => Term::Inj(*i, Arc::new(subst_term(v, s))),
        Term::Proj(i, v) => Term::Proj(*i, Arc::new(subst_term(v, s))),
        Term::Neg(v) => Term::Neg(Arc::new(subst_term(v, s))),
        Term::MuNot(x, c) => {
            let (xs, _, inner) = enter(s, &[x], &[], &[c]);
            Term::MuNot(xs[0].clone(), sub(c, &inner))
        }
        Term::MuTildeBox(x, c) => {
            let (xs, _, inner) = enter(s, &[x], &[], &[c]);
            Term::MuTildeBox(xs[0].clone(), sub(c, &inner))
        }
        Term::MuTilde(x, c) => {
            let (xs, _, inner) = enter(s, &[x], &[], &[c]);
            Term::MuTilde(xs[0].clone(), sub(c, &inner))
        }
        Term::MuTildePair(x, y, c) => {
            let (xs, _, inner) = enter(s, &[x, y], &[], &[c]);
            Term::MuTildePair(xs[0].clone(), xs[1].clone(), sub(c, &inner))
        }
        Term::MuTildeMatch(x, c1, y, c2) => {
            let (xs, _, i1) = enter(s, &[x], &[], &[c1]);
            let (ys, _, i2) = enter(s, &[y], &[], &[c2]);
            Term::MuTildeMatch(xs[0].clone(), sub(c1, &i1), ys[0].clone(), sub(c2, &i2))
        }
        Term::MuTildeUnit(c) => Term::MuTildeUnit(sub(c, s)),
        Term::Mu(a, c) => {
            let (_, as_, inner) = enter(s, &[], &[a], &[c]);
            Term::Mu(as_[0].clone(), sub(c, &inner))
        }
        Term::MuPar(a, b, c) => {
            let (_, cs, inner) = enter(s, &[], &[a, b], &[c]);
            Term::MuPar(cs[0].clone(), cs[1].clone(), sub(c, &inner))
        }
        Term::MuWith(a, c1, b, c2) => {
            let (_, as_, i1) = enter(s, &[], &[a], &[c1]);
            let (_, bs, i2) = enter(s, &[], &[b], &[c2]);
            Term::MuWith(as_[0].clone(), sub(c1, &i1), bs[0].clone(), sub(c2, &i2))
        }
    }
}

/// Renames free occurrences of a single variable.
pub fn rename_var_in(c: &Command, from: &Name, to: &Name) -> Command {
    let mut s = Substitution::new();
    s.rename_var(from.clone(), to.clone());
    s.apply_command(c)
}

/// Renames free occurrences of a single covariable.
pub fn rename_covar_in(c: &Command, from: &Name, to: &Name) -> Command {
    let mut s = Substitution::new();
    s.rename_covar(from.clone(), to.clone());
    s.apply_command(c)
}

/// Builds a renaming substitution from name maps (no class checks needed).
pub fn renaming_substitution<'a>(
    vars: impl IntoIterator<Item = (&'a Name, &'a Name)>,
    covars: impl IntoIterator<Item = (&'a Name, &'a Name)>,
) -> Substitution {
    let mut s = Substitution::new();
    for (x, y) in vars {
        s.rename_var(x.clone(), y.clone());
    }
    for (a, b) in covars {
        s.rename_covar(a.clone(), b.clone());
    }
    s
}

// ---------------------------------------------------------------------------
// alpha-equivalence

#[derive(Default)]
struct AlphaEnv {
    left_vars: Vec<Name>,
    right_vars: Vec<Name>,
    left_covars: Vec<Name>,
    right_covars: Vec<Name>,
}

fn lookup(env: &[Name], n: &Name) -> Option<usize> {
    env.iter().rposition(|m| m == n)
}

fn same_occurrence(l: &[Name], r: &[Name], x: &Name, y: &Name) -> bool {
    match (lookup(l, x), lookup(r, y)) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_term(a, b, &mut AlphaEnv::default())
}

pub fn alpha_eq_command(a: &Command, b: &Command) -> bool {
    alpha_cmd(a, b, &mut AlphaEnv::default())
}

fn alpha_cmd(a: &Command, b: &Command, env: &mut AlphaEnv) -> bool {
    a.polarity == b.polarity && alpha_term(&a.left, &b.left, env) && alpha_term(&a.right, &b.right, env)
}

fn alpha_under(
    vars: &[(&Binder, &Binder)],
    covars: &[(&Binder, &Binder)],
    a: &Command,
    b: &Command,
    env: &mut AlphaEnv,
) -> bool {
    if vars.iter().chain(covars).any(|(x, y)| x.ty != y.ty) {
        return false;
    }
    let (lv, lc) = (env.left_vars.len(), env.left_covars.len());
    for (x, y) in vars {
        env.left_vars.push(x.name.clone());
        env.right_vars.push(y.name.clone());
    }
    for (x, y) in covars {
        env.left_covars.push(x.name.clone());
        env.right_covars.push(y.name.clone());
    }
    let ok = alpha_cmd(a, b, env);
    env.left_vars.truncate(lv);
    env.right_vars.truncate(lv);
    env.left_covars.truncate(lc);
    env.right_covars.truncate(lc);
    ok
}

fn alpha_term(a: &Term, b: &Term, env: &mut AlphaEnv) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => same_occurrence(&env.left_vars, &env.right_vars, x, y),
        (Term::CoVar(x), Term::CoVar(y)) => {
            same_occurrence(&env.left_covars, &env.right_covars, x, y)
        }
        (Term::Unit, Term::Unit) => true,
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) | (Term::CoPair(a1, a2), Term::CoPair(b1, b2)) => {
            alpha_term(a1, b1, env) && alpha_term(a2, b2, env)
        }
        (Term::Boxed(x), Term::Boxed(y)) | (Term::Neg(x), Term::Neg(y)) => alpha_term(x, y, env),
        (Term::Inj(i, x), Term::Inj(j, y)) | (Term::Proj(i, x), Term::Proj(j, y)) => {
            i == j && alpha_term(x, y, env)
        }
        (Term::MuNot(x, c), Term::MuNot(y, d))
        | (Term::MuTildeBox(x, c), Term::MuTildeBox(y, d))
        | (Term::MuTilde(x, c), Term::MuTilde(y, d)) => alpha_under(&[(x, y)], &[], c, d, env),
        (Term::MuTildePair(x1, x2, c), Term::MuTildePair(y1, y2, d)) => {
            alpha_under(&[(x1, y1), (x2, y2)], &[], c, d, env)
        }
        (Term::MuTildeMatch(x1, c1, x2, c2), Term::MuTildeMatch(y1, d1, y2, d2)) => {
            alpha_under(&[(x1, y1)], &[], c1, d1, env) && alpha_under(&[(x2, y2)], &[], c2, d2, env)
        }
        (Term::MuTildeUnit(c), Term::MuTildeUnit(d)) => alpha_cmd(c, d, env),
        (Term::Mu(x, c), Term::Mu(y, d)) => alpha_under(&[], &[(x, y)], c, d, env),
        (Term::MuPar(x1, x2, c), Term::MuPar(y1, y2, d)) => {
            alpha_under(&[], &[(x1, y1), (x2, y2)], c, d, env)
        }
        (Term::MuWith(x1, c1, x2, c2), Term::MuWith(y1, d1, y2, d2)) => {
            alpha_under(&[], &[(x1, y1)], c1, d1, env) && alpha_under(&[], &[(x2, y2)], c2, d2, env)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Polarity, Type};

    fn cut(pol: Polarity, l: Term, r: Term) -> Command {
        Command::new(pol, l, r)
    }

    #[test]
    fn free_vars_examples() {
        let c = cut(Polarity::Modal, Term::var("x"), Term::covar("a"));
        let fv = free_vars_command(&c);
        assert_eq!(fv.vars, [Name::new("x")].into());
        assert_eq!(fv.covars, [Name::new("a")].into());

        let t = Term::mu(Binder::new("a", Type::Unit), c);
        let fv = free_vars(&t);
        assert_eq!(fv.vars, [Name::new("x")].into());
        assert!(fv.covars.is_empty());

        let b = Term::boxed(Term::pair(Term::var("y"), Term::var("y")));
        let fv = free_vars(&b);
        assert_eq!(fv.vars, [Name::new("y")].into());
        assert!(fv.covars.is_empty());
    }

    #[test]
    fn direct_replacement() {
        let c = cut(Polarity::Modal, Term::var("x"), Term::covar("a"));
        let s = Substitution::new().var("x", Term::Unit).unwrap();
        assert_eq!(substitute(&c, &s), cut(Polarity::Modal, Term::Unit, Term::covar("a")));
    }

    #[test]
    fn shadowed_binder_is_untouched() {
        let inner = cut(Polarity::Modal, Term::var("x"), Term::covar("a"));
        let t = Term::mu(Binder::new("a", Type::Unit), inner);
        let c = cut(Polarity::Modal, t.clone(), Term::covar("b"));
        let s = Substitution::new().covar("a", Term::covar("z")).unwrap();
        assert_eq!(substitute(&c, &s), cut(Polarity::Modal, t, Term::covar("b")));
    }

    #[test]
    fn capture_is_avoided() {
        // (μ̃y.⟨x ‖ b⟩)[y/x] must rename the binder.
        let body = cut(Polarity::Modal, Term::var("x"), Term::covar("b"));
        let t = Term::mu_tilde(Binder::new("y", Type::Unit), body);
        let c = cut(Polarity::Modal, Term::Unit, t);
        let s = Substitution::new().var("x", Term::var("y")).unwrap();
        let out = substitute(&c, &s);
        match &out.right {
            Term::MuTilde(b, body) => {
                assert_ne!(b.name, Name::new("y"));
                assert_eq!(body.left, Term::var("y"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_values() {
        let e = Term::mu(
            Binder::new("a", Type::Unit),
            cut(Polarity::Modal, Term::Unit, Term::covar("a")),
        );
        assert!(matches!(
            Substitution::new().var("x", e),
            Err(SubstError::NotAValue { .. })
        ));
        let env = Term::mu_tilde(
            Binder::new("x", Type::not(Type::Unit)),
            cut(Polarity::Modal, Term::Unit, Term::covar("tp")),
        );
        assert!(matches!(
            Substitution::new().covar("a", env),
            Err(SubstError::NotACoValue { .. })
        ));
    }

    #[test]
    fn alpha_eq_ignores_binder_names() {
        let mk = |n: &str| {
            Term::mu_tilde(
                Binder::new(n, Type::Unit),
                cut(Polarity::Modal, Term::var(n), Term::covar("tp")),
            )
        };
        assert!(alpha_eq(&mk("x"), &mk("y")));
        let free = Term::mu_tilde(
            Binder::new("x", Type::Unit),
            cut(Polarity::Modal, Term::var("z"), Term::covar("tp")),
        );
        assert!(!alpha_eq(&mk("x"), &free));
    }

    #[test]
    fn alpha_eq_respects_binder_types() {
        let mk = |ty: Type| {
            Term::mu_tilde(Binder::new("x", ty), cut(Polarity::Modal, Term::Unit, Term::covar("tp")))
        };
        assert!(!alpha_eq(&mk(Type::Unit), &mk(Type::boxed(Type::Unit))));
    }
}
