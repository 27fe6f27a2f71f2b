//! Derived forms and the box erasure.
//!
//! Functions are `A -> B = ~A @ B`, shifts are `up A = A * 1` and
//! `down A = ~1 @ A`, booleans are `1 + 1`. The erasure sends `box A` to
//! `up A`, giving a box-free program that evaluates in lock step.

use std::collections::BTreeSet;

use crate::hint::{hint_command, Scope};
use crate::name::Name;
use crate::subst::{all_names_command, all_names_term};
use crate::term::{Binder, Command, Side, Term};
use crate::types::{Polarity, Type};
use crate::typing::TypingContext;

pub fn arrow(a: Type, b: Type) -> Type {
    Type::par(Type::not(a), b)
}

pub fn shift_up(a: Type) -> Type {
    Type::tensor(a, Type::Unit)
}

pub fn shift_down(a: Type) -> Type {
    Type::par(Type::not(Type::Unit), a)
}

pub fn bool_type() -> Type {
    Type::sum(Type::Unit, Type::Unit)
}

pub fn true_value() -> Term {
    Term::inj(Side::First, Term::Unit)
}

pub fn false_value() -> Term {
    Term::inj(Side::Second, Term::Unit)
}

/// `V · S = ([V], S)`.
pub fn cons(v: Term, s: Term) -> Term {
    Term::copair(Term::neg(v), s)
}

fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let n = Name::new(base);
    if avoid.contains(&n) {
        n.freshen(|m| avoid.contains(m))
    } else {
        n
    }
}

fn names_of_terms(ts: &[&Term]) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for t in ts {
        all_names_term(t, &mut out);
    }
    out.insert(Name::toplevel());
    out
}

fn names_of_command(c: &Command) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    all_names_command(c, &mut out);
    out.insert(Name::toplevel());
    out
}

/// `fun x:A => t` at return type `B`:
/// `μ(α:¬A, β:B).⟨μ[x:A].⟨t ‖ β⟩ ‖ α⟩`.
pub fn lambda(x: Binder, body: Term, ret: Type) -> Term {
    let mut avoid = names_of_terms(&[&body]);
    avoid.insert(x.name.clone());
    let a = fresh("a", &avoid);
    avoid.insert(a.clone());
    let k = fresh("k", &avoid);
    let arg_ty = x.ty.clone();
    let inner = Command::new(ret.polarity(), body, Term::covar(k.clone()));
    let call = Command::new(Polarity::Neg, Term::mu_not(x, inner), Term::covar(a.clone()));
    Term::mu_par(Binder::new(a, Type::not(arg_ty)), Binder::new(k, ret), call)
}

/// `t u` at return type `B`: `μβ:B.⟨t ‖ u · β⟩`.
pub fn apply(fun: Term, arg: Term, ret: Type) -> Term {
    let k = fresh("k", &names_of_terms(&[&fun, &arg]));
    let c = Command::new(Polarity::Neg, fun, cons(arg, Term::covar(k.clone())));
    Term::mu(Binder::new(k, ret), c)
}

/// `up V = (V, ())`.
pub fn up_value(v: Term) -> Term {
    Term::pair(v, Term::Unit)
}

/// `μ̃ up x.c = μ̃(x, u:1).c`.
pub fn up_match(x: Binder, body: Command) -> Term {
    let mut avoid = names_of_command(&body);
    avoid.insert(x.name.clone());
    let u = fresh("u", &avoid);
    Term::mu_tilde_pair(x, Binder::new(u, Type::Unit), body)
}

/// `μ down α.c = μ(β:¬1, α).c`.
pub fn down_mu(a: Binder, body: Command) -> Term {
    let mut avoid = names_of_command(&body);
    avoid.insert(a.name.clone());
    let b = fresh("b", &avoid);
    Term::mu_par(Binder::new(b, Type::not(Type::Unit)), a, body)
}

/// `down S = ([()], S)`.
pub fn down_covalue(s: Term) -> Term {
    cons(Term::Unit, s)
}

/// `if V then c1 else c2`, a match on `1 + 1`.
pub fn if_then_else(v: Term, then: Command, otherwise: Command) -> Command {
    let mut avoid = names_of_command(&then);
    all_names_command(&otherwise, &mut avoid);
    all_names_term(&v, &mut avoid);
    let u = fresh("u", &avoid);
    let m = Term::mu_tilde_match(
        Binder::new(u.clone(), Type::Unit),
        then,
        Binder::new(u, Type::Unit),
        otherwise,
    );
    Command::new(Polarity::Modal, v, m)
}

/// A derived form with its operands already elaborated.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SurfaceForm {
    Arrow(Type, Type),
    Lam { param: Binder, body: Term, ret: Type },
    App { fun: Term, arg: Term, ret: Type },
    Cons(Term, Term),
    ShiftUpType(Type),
    ShiftUpVal(Term),
    ShiftUpMatch(Binder, Command),
    ShiftDownType(Type),
    ShiftDownMu(Binder, Command),
    ShiftDownCoval(Term),
    Bool,
    True,
    False,
    If(Term, Command, Command),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elaborated {
    Type(Type),
    Term(Term),
    Command(Command),
}

impl SurfaceForm {
    pub fn elaborate(self) -> Elaborated {
        use Elaborated as E;
        match self {
            SurfaceForm::Arrow(a, b) => E::Type(arrow(a, b)),
            SurfaceForm::Lam { param, body, ret } => E::Term(lambda(param, body, ret)),
            SurfaceForm::App { fun, arg, ret } => E::Term(apply(fun, arg, ret)),
            SurfaceForm::Cons(v, s) => E::Term(cons(v, s)),
            SurfaceForm::ShiftUpType(a) => E::Type(shift_up(a)),
            SurfaceForm::ShiftUpVal(v) => E::Term(up_value(v)),
            SurfaceForm::ShiftUpMatch(x, c) => E::Term(up_match(x, c)),
            SurfaceForm::ShiftDownType(a) => E::Type(shift_down(a)),
            SurfaceForm::ShiftDownMu(a, c) => E::Term(down_mu(a, c)),
            SurfaceForm::ShiftDownCoval(s) => E::Term(down_covalue(s)),
            SurfaceForm::Bool => E::Type(bool_type()),
            SurfaceForm::True => E::Term(true_value()),
            SurfaceForm::False => E::Term(false_value()),
            SurfaceForm::If(v, c1, c2) => E::Command(if_then_else(v, c1, c2)),
        }
    }
}

/// `box A ↦ up A`, structurally.
pub fn erase_type(ty: &Type) -> Type {
    match ty {
        Type::Unit => Type::Unit,
        Type::Box(a) => shift_up(erase_type(a)),
        Type::Tensor(a, b) => Type::tensor(erase_type(a), erase_type(b)),
        Type::Sum(a, b) => Type::sum(erase_type(a), erase_type(b)),
        Type::With(a, b) => Type::with(erase_type(a), erase_type(b)),
        Type::Par(a, b) => Type::par(erase_type(a), erase_type(b)),
        Type::Not(a) => Type::not(erase_type(a)),
    }
}

fn erase_binder(b: &Binder) -> Binder {
    Binder::new(b.name.clone(), erase_type(&b.ty))
}

/// Erases a command. `scope` holds the original (unerased) types of the
/// names free in `c`; it is used to recompute positive cut polarities.
pub fn erase_command(scope: &mut Scope, c: &Command) -> Command {
    let polarity = if c.polarity == Polarity::Neg {
        Polarity::Neg
    } else {
        match hint_command(scope, c) {
            Some(ty) => erase_type(&ty).polarity(),
            None => c.polarity,
        }
    };
    Command::new(polarity, erase_term(scope, &c.left), erase_term(scope, &c.right))
}

fn under(scope: &mut Scope, vars: &[&Binder], covars: &[&Binder], c: &Command) -> Command {
    let (nv, nc) = (scope.var_len(), scope.covar_len());
    for b in vars {
        scope.push_var(b.name.clone(), b.ty.clone());
    }
    for b in covars {
        scope.push_covar(b.name.clone(), b.ty.clone());
    }
    let out = erase_command(scope, c);
    scope.truncate(nv, nc);
    out
}

pub fn erase_term(scope: &mut Scope, t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::CoVar(_) | Term::Unit => t.clone(),
        Term::Pair(a, b) => Term::pair(erase_term(scope, a), erase_term(scope, b)),
        Term::CoPair(a, b) => Term::copair(erase_term(scope, a), erase_term(scope, b)),
        Term::Boxed(v) => up_value(erase_term(scope, v)),
        Term::Inj(i, v) => Term::inj(*i, erase_term(scope, v)),
        Term::Proj(i, s) => Term::proj(*i, erase_term(scope, s)),
        Term::Neg(v) => Term::neg(erase_term(scope, v)),
        Term::MuNot(x, c) => Term::mu_not(erase_binder(x), under(scope, &[x], &[], c)),
        Term::MuWith(a, c1, b, c2) => Term::mu_with(
            erase_binder(a),
            under(scope, &[], &[a], c1),
            erase_binder(b),
            under(scope, &[], &[b], c2),
        ),
        Term::MuPar(a, b, c) => Term::mu_par(erase_binder(a), erase_binder(b), under(scope, &[], &[a, b], c)),
        Term::Mu(a, c) => Term::mu(erase_binder(a), under(scope, &[], &[a], c)),
        Term::MuTildeBox(x, c) => up_match(erase_binder(x), under(scope, &[x], &[], c)),
        Term::MuTildeUnit(c) => Term::mu_tilde_unit(under(scope, &[], &[], c)),
        Term::MuTilde(x, c) => Term::mu_tilde(erase_binder(x), under(scope, &[x], &[], c)),
        Term::MuTildePair(x, y, c) => {
            Term::mu_tilde_pair(erase_binder(x), erase_binder(y), under(scope, &[x, y], &[], c))
        }
        Term::MuTildeMatch(x, c1, y, c2) => Term::mu_tilde_match(
            erase_binder(x),
            under(scope, &[x], &[], c1),
            erase_binder(y),
            under(scope, &[y], &[], c2),
        ),
    }
}

/// `Γ ⫾ Θ ⊢ Δ ↦ Γ, up Θ ⊢ Δ` with every type erased.
pub fn erase_context(ctx: &TypingContext) -> TypingContext {
    let mut out = TypingContext::empty().with_debug(ctx.debug);
    for (x, t) in ctx.gamma() {
        out.push_gamma(x.clone(), erase_type(t));
    }
    for (x, t) in ctx.theta() {
        out.push_gamma(x.clone(), erase_type(t));
    }
    for (a, t) in ctx.delta() {
        out.push_delta(a.clone(), erase_type(t));
    }
    out
}

/// Scope of original types matching a typing context.
pub fn scope_of(ctx: &TypingContext) -> Scope {
    let mut s = Scope::new();
    for (x, t) in ctx.gamma().iter().chain(ctx.theta()) {
        s.push_var(x.clone(), t.clone());
    }
    for (a, t) in ctx.delta() {
        s.push_covar(a.clone(), t.clone());
    }
    s
}

/// Erases a closed program whose toplevel has type `ret`.
pub fn erase_program(c: &Command, ret: &Type) -> Command {
    erase_command(&mut Scope::toplevel(ret.clone()), c)
}
