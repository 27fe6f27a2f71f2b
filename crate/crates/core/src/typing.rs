//! Bidirectional checker for the five typing judgments.
//!
//! Contexts are shared between premises (an additive reading of the
//! rules); the structural renaming rules are admissible in this style.
//! Every `check_*` function takes an optional expected type and returns the
//! type it established.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::name::Name;
use crate::subst::{free_vars, renaming_substitution};
use crate::term::{Binder, Class, Command, Malformed, Side, Term};
use crate::types::{Polarity, Type};

/// `Γ ⫾ Θ ⊢ Δ`. The toplevel covariable `tp` lives in `Δ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingContext {
    gamma: IndexMap<Name, Type>,
    theta: IndexMap<Name, Type>,
    delta: IndexMap<Name, Type>,
    /// Also re-check boxed values in the pruned context.
    pub debug: bool,
}

impl TypingContext {
    /// `⋄ ⫾ ⋄ ⊢ tp : ret`.
    pub fn new(ret: Type) -> Self {
        let mut delta = IndexMap::new();
        delta.insert(Name::toplevel(), ret);
        TypingContext { delta, ..Self::default() }
    }

    /// A context with no bindings at all, not even `tp`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_debug(mut self, debug: bool) -> Self {
        self.debug = debug;
        self
    }

    pub fn gamma(&self) -> &IndexMap<Name, Type> {
        &self.gamma
    }

    pub fn theta(&self) -> &IndexMap<Name, Type> {
        &self.theta
    }

    pub fn delta(&self) -> &IndexMap<Name, Type> {
        &self.delta
    }

    pub fn ret(&self) -> Option<&Type> {
        self.delta.get(&Name::toplevel())
    }

    pub fn push_gamma(&mut self, x: Name, ty: Type) {
        self.theta.shift_remove(&x);
        self.gamma.shift_remove(&x);
        self.gamma.insert(x, ty);
    }

    pub fn push_theta(&mut self, x: Name, ty: Type) {
        self.gamma.shift_remove(&x);
        self.theta.shift_remove(&x);
        self.theta.insert(x, ty);
    }

    pub fn push_delta(&mut self, a: Name, ty: Type) {
        self.delta.shift_remove(&a);
        self.delta.insert(a, ty);
    }

    pub fn with_gamma(&self, x: &Name, ty: &Type) -> Self {
        let mut c = self.clone();
        c.push_gamma(x.clone(), ty.clone());
        c
    }

    pub fn with_theta(&self, x: &Name, ty: &Type) -> Self {
        let mut c = self.clone();
        c.push_theta(x.clone(), ty.clone());
        c
    }

    pub fn with_delta(&self, a: &Name, ty: &Type) -> Self {
        let mut c = self.clone();
        c.push_delta(a.clone(), ty.clone());
        c
    }

    /// `Γ_□ ⫾ Θ ⊢ ⋄`.
    pub fn pruned(&self) -> Self {
        TypingContext {
            gamma: self
                .gamma
                .iter()
                .filter(|(_, t)| t.polarity() == Polarity::Modal)
                .map(|(n, t)| (n.clone(), t.clone()))
                .collect(),
            theta: self.theta.clone(),
            delta: IndexMap::new(),
            debug: self.debug,
        }
    }

    /// True when every binding of `self` also appears, in the same zone and
    /// at the same type, in `other`.
    pub fn is_sub_context_of(&self, other: &TypingContext) -> bool {
        let sub = |a: &IndexMap<Name, Type>, b: &IndexMap<Name, Type>| {
            a.iter().all(|(n, t)| b.get(n) == Some(t))
        };
        sub(&self.gamma, &other.gamma)
            && sub(&self.theta, &other.theta)
            && sub(&self.delta, &other.delta)
    }
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zone = |m: &IndexMap<Name, Type>| {
            if m.is_empty() {
                "⋄".to_string()
            } else {
                m.iter().map(|(n, t)| format!("{n}:{t}")).collect::<Vec<_>>().join(", ")
            }
        };
        write!(f, "{} ⫾ {} ⊢ {}", zone(&self.gamma), zone(&self.theta), zone(&self.delta))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVar(Name),
    #[error("unbound covariable `{0}`")]
    UnboundCovar(Name),
    #[error("cut polarity mismatch: expected {expected}, found {found}")]
    PolarityMismatch { expected: Polarity, found: Polarity },
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: Type, found: Type },
    #[error("expected a {expected} type, found `{found}`")]
    ShapeMismatch { expected: &'static str, found: Type },
    #[error("cannot synthesize a type for `{0}`; add an annotation")]
    CannotSynthesize(Term),
    #[error("modal value captures the stack: {0}")]
    ModalCapture(String),
    #[error("malformed stratification: {0}")]
    Malformed(Malformed),
    #[error("`tp` is reserved and cannot be bound")]
    ReservedName,
}

/// A typing diagnostic, tagged with the rule that failed.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("[{rule}] {kind}")]
pub struct TypeError {
    pub rule: &'static str,
    pub kind: TypeErrorKind,
}

fn err<T>(rule: &'static str, kind: TypeErrorKind) -> Result<T, TypeError> {
    Err(TypeError { rule, kind })
}

fn malformed<T>(rule: &'static str, expected: Class, found: &Term) -> Result<T, TypeError> {
    err(rule, TypeErrorKind::Malformed(Malformed { expected, found: found.clone() }))
}

fn agree(rule: &'static str, found: Type, expected: Option<&Type>) -> Result<Type, TypeError> {
    match expected {
        Some(e) if *e != found => err(
            rule,
            TypeErrorKind::TypeMismatch { expected: e.clone(), found },
        ),
        _ => Ok(found),
    }
}

fn no_tp(rule: &'static str, b: &Binder) -> Result<(), TypeError> {
    if b.name.is_toplevel() {
        err(rule, TypeErrorKind::ReservedName)
    } else {
        Ok(())
    }
}

/// Splits an expected binary type, checking its connective.
fn expect_binary<'a>(
    rule: &'static str,
    expected: Option<&'a Type>,
    shape: &'static str,
    pick: fn(&Type) -> Option<(&Type, &Type)>,
) -> Result<Option<(&'a Type, &'a Type)>, TypeError> {
    match expected {
        None => Ok(None),
        Some(t) => match pick(t) {
            Some(parts) => Ok(Some(parts)),
            None => err(rule, TypeErrorKind::ShapeMismatch { expected: shape, found: t.clone() }),
        },
    }
}

fn tensor_parts(t: &Type) -> Option<(&Type, &Type)> {
    match t {
        Type::Tensor(a, b) => Some((a, b)),
        _ => None,
    }
}
fn sum_parts(t: &Type) -> Option<(&Type, &Type)> {
    match t {
        Type::Sum(a, b) => Some((a, b)),
        _ => None,
    }
}
fn with_parts(t: &Type) -> Option<(&Type, &Type)> {
    match t {
        Type::With(a, b) => Some((a, b)),
        _ => None,
    }
}
fn par_parts(t: &Type) -> Option<(&Type, &Type)> {
    match t {
        Type::Par(a, b) => Some((a, b)),
        _ => None,
    }
}

/// `Γ ⫾ Θ ⊢ V : A; Δ`.
pub fn check_value(ctx: &TypingContext, v: &Term, expected: Option<&Type>) -> Result<Type, TypeError> {
    match v {
        Term::Var(x) => {
            if let Some(t) = ctx.gamma.get(x) {
                agree("RAx", t.clone(), expected)
            } else if let Some(t) = ctx.theta.get(x) {
                agree("R□Ax", t.clone(), expected)
            } else {
                err("RAx", TypeErrorKind::UnboundVar(x.clone()))
            }
        }
        Term::Unit => agree("R𝟙", Type::Unit, expected),
        Term::Pair(a, b) => {
            let parts = expect_binary("R⊗", expected, "tensor", tensor_parts)?;
            require_class("R⊗", a, Class::Value)?;
            require_class("R⊗", b, Class::Value)?;
            let ta = check_value(ctx, a, parts.map(|p| p.0))?;
            let tb = check_value(ctx, b, parts.map(|p| p.1))?;
            Ok(Type::tensor(ta, tb))
        }
        Term::Boxed(inner) => {
            let a = match expected {
                None => None,
                Some(Type::Box(a)) => Some(&**a),
                Some(t) => {
                    return err("R□", TypeErrorKind::ShapeMismatch { expected: "box", found: t.clone() })
                }
            };
            require_class("R□", inner, Class::Value)?;
            modal_restriction(ctx, inner)?;
            let t = check_value(ctx, inner, a)?;
            if ctx.debug {
                let pruned = check_value(&ctx.pruned(), inner, Some(&t))?;
                debug_assert_eq!(pruned, t);
            }
            Ok(Type::boxed(t))
        }
        Term::Inj(i, inner) => {
            require_class("R⊕", inner, Class::Value)?;
            match expect_binary("R⊕", expected, "sum", sum_parts)? {
                None => err("R⊕", TypeErrorKind::CannotSynthesize(v.clone())),
                Some((a, b)) => {
                    let want = if *i == Side::First { a } else { b };
                    check_value(ctx, inner, Some(want))?;
                    Ok(Type::sum(a.clone(), b.clone()))
                }
            }
        }
        Term::MuNot(x, c) => {
            no_tp("R¬", x)?;
            check_command(&ctx.with_gamma(&x.name, &x.ty), c)?;
            agree("R¬", Type::not(x.ty.clone()), expected)
        }
        Term::MuWith(a, c1, b, c2) => {
            no_tp("R&", a)?;
            no_tp("R&", b)?;
            let t = Type::with(a.ty.clone(), b.ty.clone());
            if let Some(e) = expected {
                agree("R&", t.clone(), Some(e))?;
            }
            check_command(&ctx.with_delta(&a.name, &a.ty), c1)?;
            check_command(&ctx.with_delta(&b.name, &b.ty), c2)?;
            Ok(t)
        }
        Term::MuPar(a, b, c) => {
            no_tp("R⅋", a)?;
            no_tp("R⅋", b)?;
            let t = Type::par(a.ty.clone(), b.ty.clone());
            if let Some(e) = expected {
                agree("R⅋", t.clone(), Some(e))?;
            }
            let inner = ctx.with_delta(&a.name, &a.ty).with_delta(&b.name, &b.ty);
            check_command(&inner, c)?;
            Ok(t)
        }
        Term::Mu(a, c) if a.polarity() == Polarity::Neg => {
            no_tp("Rμ−", a)?;
            if let Some(e) = expected {
                agree("Rμ−", a.ty.clone(), Some(e))?;
            }
            check_command(&ctx.with_delta(&a.name, &a.ty), c)?;
            Ok(a.ty.clone())
        }
        _ => malformed("RV", Class::Value, v),
    }
}

fn require_class(rule: &'static str, t: &Term, class: Class) -> Result<(), TypeError> {
    if t.has_class(class) {
        Ok(())
    } else {
        malformed(rule, class, t)
    }
}

/// `Γ ⫾ Θ ⊢ t : A | Δ`.
pub fn check_expression(
    ctx: &TypingContext,
    t: &Term,
    expected: Option<&Type>,
) -> Result<Type, TypeError> {
    match t {
        Term::Mu(a, c) if a.polarity().is_box_plus() => {
            no_tp("Rμ⊞", a)?;
            if let Some(e) = expected {
                agree("Rμ⊞", a.ty.clone(), Some(e))?;
            }
            check_command(&ctx.with_delta(&a.name, &a.ty), c)?;
            Ok(a.ty.clone())
        }
        _ if t.is_value() => check_value(ctx, t, expected),
        _ => malformed("RV", Class::Expression, t),
    }
}

/// `Γ ⫾ Θ ; S : A ⊢ Δ`.
pub fn check_covalue(
    ctx: &TypingContext,
    s: &Term,
    expected: Option<&Type>,
) -> Result<Type, TypeError> {
    match s {
        Term::CoVar(a) => match ctx.delta.get(a) {
            Some(t) => agree("LAx", t.clone(), expected),
            None => err("LAx", TypeErrorKind::UnboundCovar(a.clone())),
        },
        Term::Proj(i, inner) => {
            require_class("L&", inner, Class::CoValue)?;
            match expect_binary("L&", expected, "with", with_parts)? {
                None => err("L&", TypeErrorKind::CannotSynthesize(s.clone())),
                Some((a, b)) => {
                    let want = if *i == Side::First { a } else { b };
                    check_covalue(ctx, inner, Some(want))?;
                    Ok(Type::with(a.clone(), b.clone()))
                }
            }
        }
        Term::MuTildeBox(x, c) => {
            no_tp("L□", x)?;
            let t = Type::boxed(x.ty.clone());
            if let Some(e) = expected {
                agree("L□", t.clone(), Some(e))?;
            }
            check_command(&ctx.with_theta(&x.name, &x.ty), c)?;
            Ok(t)
        }
        Term::Neg(v) => {
            require_class("L¬", v, Class::Value)?;
            let want = match expected {
                None => None,
                Some(Type::Not(a)) => Some(&**a),
                Some(t) => {
                    return err("L¬", TypeErrorKind::ShapeMismatch { expected: "negation", found: t.clone() })
                }
            };
            Ok(Type::not(check_value(ctx, v, want)?))
        }
        Term::CoPair(a, b) => {
            let parts = expect_binary("L⅋", expected, "par", par_parts)?;
            require_class("L⅋", a, Class::CoValue)?;
            require_class("L⅋", b, Class::CoValue)?;
            let ta = check_covalue(ctx, a, parts.map(|p| p.0))?;
            let tb = check_covalue(ctx, b, parts.map(|p| p.1))?;
            Ok(Type::par(ta, tb))
        }
        Term::MuTildeUnit(c) => {
            agree("L𝟙", Type::Unit, expected)?;
            check_command(ctx, c)?;
            Ok(Type::Unit)
        }
        Term::MuTilde(x, c) if x.polarity().is_box_plus() => {
            no_tp("Lμ̃⊞", x)?;
            if let Some(e) = expected {
                agree("Lμ̃⊞", x.ty.clone(), Some(e))?;
            }
            check_command(&ctx.with_gamma(&x.name, &x.ty), c)?;
            Ok(x.ty.clone())
        }
        Term::MuTildePair(x, y, c) => {
            no_tp("L⊗", x)?;
            no_tp("L⊗", y)?;
            let t = Type::tensor(x.ty.clone(), y.ty.clone());
            if let Some(e) = expected {
                agree("L⊗", t.clone(), Some(e))?;
            }
            let inner = ctx.with_gamma(&x.name, &x.ty).with_gamma(&y.name, &y.ty);
            check_command(&inner, c)?;
            Ok(t)
        }
        Term::MuTildeMatch(x, c1, y, c2) => {
            no_tp("L⊕", x)?;
            no_tp("L⊕", y)?;
            let t = Type::sum(x.ty.clone(), y.ty.clone());
            if let Some(e) = expected {
                agree("L⊕", t.clone(), Some(e))?;
            }
            check_command(&ctx.with_gamma(&x.name, &x.ty), c1)?;
            check_command(&ctx.with_gamma(&y.name, &y.ty), c2)?;
            Ok(t)
        }
        _ => malformed("LS", Class::CoValue, s),
    }
}

/// `Γ ⫾ Θ | e : A ⊢ Δ`.
pub fn check_environment(
    ctx: &TypingContext,
    e: &Term,
    expected: Option<&Type>,
) -> Result<Type, TypeError> {
    match e {
        Term::MuTilde(x, c) if x.polarity() == Polarity::Neg => {
            no_tp("Lμ̃−", x)?;
            if let Some(t) = expected {
                agree("Lμ̃−", x.ty.clone(), Some(t))?;
            }
            check_command(&ctx.with_gamma(&x.name, &x.ty), c)?;
            Ok(x.ty.clone())
        }
        _ if e.is_covalue() => check_covalue(ctx, e, expected),
        _ => malformed("LS", Class::Environment, e),
    }
}

fn cannot_synthesize(r: &Result<Type, TypeError>) -> bool {
    matches!(r, Err(TypeError { kind: TypeErrorKind::CannotSynthesize(_), .. }))
}

/// `c : (Γ ⫾ Θ ⊢ Δ)`. Returns the cut type.
pub fn check_command(ctx: &TypingContext, c: &Command) -> Result<Type, TypeError> {
    let rule = if c.polarity.is_box_plus() { "cut⊞" } else { "cut−" };
    if let Some((expected, found)) = c.stratification_error() {
        return malformed(rule, expected, found);
    }
    type Checker = fn(&TypingContext, &Term, Option<&Type>) -> Result<Type, TypeError>;
    let (left, right): (Checker, Checker) = if c.polarity.is_box_plus() {
        (check_expression, check_covalue)
    } else {
        (check_value, check_environment)
    };
    let r = right(ctx, &c.right, None);
    let ty = if cannot_synthesize(&r) {
        let l = left(ctx, &c.left, None)?;
        right(ctx, &c.right, Some(&l))?;
        l
    } else {
        let r = r?;
        let l = left(ctx, &c.left, None);
        if cannot_synthesize(&l) {
            left(ctx, &c.left, Some(&r))?;
        } else {
            let l = l?;
            if l != r {
                return if l.polarity() != r.polarity() {
                    err(rule, TypeErrorKind::PolarityMismatch { expected: l.polarity(), found: r.polarity() })
                } else {
                    err(rule, TypeErrorKind::TypeMismatch { expected: l, found: r })
                };
            }
        }
        r
    };
    if ty.polarity() != c.polarity {
        return err(rule, TypeErrorKind::PolarityMismatch { expected: c.polarity, found: ty.polarity() });
    }
    Ok(ty)
}

/// Checks that `v` only refers to modal data: no free covariables, and
/// every free variable lives in `Θ` or has a modal type in `Γ`.
pub fn modal_restriction(ctx: &TypingContext, v: &Term) -> Result<(), TypeError> {
    let fv = free_vars(v);
    if let Some(a) = fv.covars.iter().next() {
        return err("R□", TypeErrorKind::ModalCapture(format!("free covariable `{a}`")));
    }
    for x in &fv.vars {
        if ctx.theta.contains_key(x) {
            continue;
        }
        match ctx.gamma.get(x) {
            Some(t) if t.polarity() == Polarity::Modal => {}
            Some(t) => {
                return err(
                    "R□",
                    TypeErrorKind::ModalCapture(format!("`{x}` has non-modal type `{t}`")),
                )
            }
            None => return err("R□", TypeErrorKind::UnboundVar(x.clone())),
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RenamingError {
    #[error("renaming sends `{from}` to `{to}`, which is not bound at `{ty}` in the target {zone}")]
    NotPreserving { from: Name, to: Name, ty: Type, zone: &'static str },
}

/// A map between (co)variables; names not in the map are left alone.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    pub vars: BTreeMap<Name, Name>,
    pub covars: BTreeMap<Name, Name>,
}

impl Renaming {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(mut self, from: impl Into<Name>, to: impl Into<Name>) -> Self {
        self.vars.insert(from.into(), to.into());
        self
    }

    pub fn covar(mut self, from: impl Into<Name>, to: impl Into<Name>) -> Self {
        self.covars.insert(from.into(), to.into());
        self
    }

    fn image_var(&self, x: &Name) -> Name {
        self.vars.get(x).cloned().unwrap_or_else(|| x.clone())
    }

    fn image_covar(&self, a: &Name) -> Name {
        self.covars.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    /// Checks that the renaming is zone- and type-preserving from `from`
    /// into `to`.
    pub fn validate(&self, from: &TypingContext, to: &TypingContext) -> Result<(), RenamingError> {
        let zones = [
            (&from.gamma, &to.gamma, "Γ", false),
            (&from.theta, &to.theta, "Θ", false),
            (&from.delta, &to.delta, "Δ", true),
        ];
        for (src, dst, zone, co) in zones {
            for (x, ty) in src {
                let y = if co { self.image_covar(x) } else { self.image_var(x) };
                if dst.get(&y) != Some(ty) {
                    return Err(RenamingError::NotPreserving { from: x.clone(), to: y, ty: ty.clone(), zone });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, t: &Term) -> Term {
        renaming_substitution(&self.vars, &self.covars).apply(t)
    }

    pub fn apply_command(&self, c: &Command) -> Command {
        renaming_substitution(&self.vars, &self.covars).apply_command(c)
    }
}

/// Validates `θ` and renames free occurrences in `t`.
pub fn apply_renaming(
    theta: &Renaming,
    from: &TypingContext,
    to: &TypingContext,
    t: &Term,
) -> Result<Term, RenamingError> {
    theta.validate(from, to)?;
    Ok(theta.apply(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Type {
        Type::Unit
    }

    fn cut(p: Polarity, l: Term, r: Term) -> Command {
        Command::new(p, l, r)
    }

    #[test]
    fn smallest_program_checks() {
        let c = cut(
            Polarity::Modal,
            Term::Unit,
            Term::mu_tilde_unit(cut(Polarity::Modal, Term::Unit, Term::covar("tp"))),
        );
        assert_eq!(check_command(&TypingContext::new(unit()), &c), Ok(Type::Unit));
    }

    #[test]
    fn unbound_variable() {
        let c = cut(Polarity::Modal, Term::var("x"), Term::covar("tp"));
        let e = check_command(&TypingContext::new(unit()), &c).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::UnboundVar(Name::new("x")));
    }

    #[test]
    fn cut_polarity_mismatch() {
        let neg = Type::not(unit());
        let body = cut(Polarity::Modal, Term::Unit, Term::covar("tp"));
        let l = Term::mu(Binder::new("a", neg), body.clone());
        let r = Term::mu_tilde(Binder::new("x", unit()), body);
        for p in [Polarity::Neg, Polarity::Modal] {
            let e = check_command(&TypingContext::new(unit()), &cut(p, l.clone(), r.clone())).unwrap_err();
            assert!(matches!(e.kind, TypeErrorKind::PolarityMismatch { .. }), "{e}");
        }
    }

    #[test]
    fn stored_polarity_must_match() {
        let c = cut(Polarity::Pos, Term::Unit, Term::covar("tp"));
        let e = check_command(&TypingContext::new(unit()), &c).unwrap_err();
        assert_eq!(
            e.kind,
            TypeErrorKind::PolarityMismatch { expected: Polarity::Pos, found: Polarity::Modal }
        );
    }

    #[test]
    fn contraction_example() {
        let a = Type::tensor(unit(), Type::with(unit(), unit()));
        let ctx = TypingContext::new(unit()).with_gamma(&Name::new("z"), &a);
        let t = check_value(&ctx, &Term::pair(Term::var("z"), Term::var("z")), None).unwrap();
        assert_eq!(t, Type::tensor(a.clone(), a));
    }

    #[test]
    fn exchange_example() {
        let (a, b) = (unit(), Type::boxed(unit()));
        let ctx = TypingContext::new(unit())
            .with_theta(&Name::new("x"), &a)
            .with_theta(&Name::new("y"), &b);
        let t = check_value(&ctx, &Term::pair(Term::var("y"), Term::var("x")), None).unwrap();
        assert_eq!(t, Type::tensor(b, a));
    }

    #[test]
    fn box_rejects_positive_variable() {
        let a = Type::tensor(unit(), Type::with(unit(), unit()));
        let ctx = TypingContext::new(unit()).with_gamma(&Name::new("x"), &a);
        let e = check_value(&ctx, &Term::boxed(Term::var("x")), None).unwrap_err();
        assert_eq!(e.rule, "R□");
        assert!(matches!(e.kind, TypeErrorKind::ModalCapture(_)));
    }

    #[test]
    fn box_rejects_covariables() {
        let ctx = TypingContext::new(unit()).with_debug(true);
        let v = Term::mu_not(
            Binder::new("x", unit()),
            cut(Polarity::Modal, Term::var("x"), Term::covar("tp")),
        );
        assert!(check_value(&ctx, &v, None).is_ok());
        let e = check_value(&ctx, &Term::boxed(v), None).unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::ModalCapture(_)));
    }

    #[test]
    fn modal_restriction_cases() {
        let ctx = TypingContext::new(unit());
        assert!(modal_restriction(&ctx, &Term::boxed(Term::Unit)).is_ok());
        let ctx2 = ctx.with_theta(&Name::new("x"), &unit());
        assert!(modal_restriction(&ctx2, &Term::var("x")).is_ok());
        let ctx3 = ctx.with_gamma(&Name::new("x"), &Type::not(unit()));
        assert!(modal_restriction(&ctx3, &Term::var("x")).is_err());
    }

    #[test]
    fn injection_needs_expected_type() {
        let bool_ = Type::sum(unit(), unit());
        let ctx = TypingContext::new(bool_.clone());
        let v = Term::inj(Side::Second, Term::Unit);
        assert!(matches!(
            check_value(&ctx, &v, None).unwrap_err().kind,
            TypeErrorKind::CannotSynthesize(_)
        ));
        assert_eq!(check_command(&ctx, &cut(Polarity::Modal, v, Term::covar("tp"))), Ok(bool_));
    }

    #[test]
    fn renaming_examples() {
        let a = unit();
        let from = TypingContext::new(unit())
            .with_gamma(&Name::new("x"), &a)
            .with_gamma(&Name::new("y"), &a);
        let to = TypingContext::new(unit()).with_gamma(&Name::new("z"), &a);
        let theta = Renaming::new().var("x", "z").var("y", "z");
        let out = apply_renaming(&theta, &from, &to, &Term::pair(Term::var("x"), Term::var("y"))).unwrap();
        assert_eq!(out, Term::pair(Term::var("z"), Term::var("z")));

        let id = Renaming::new();
        let t = Term::pair(Term::var("x"), Term::Unit);
        assert_eq!(apply_renaming(&id, &from, &from, &t).unwrap(), t);

        let small = TypingContext::new(unit()).with_delta(&Name::new("a"), &a);
        let big = small.with_delta(&Name::new("b"), &Type::not(a.clone()));
        let s = Term::covar("a");
        assert_eq!(apply_renaming(&id, &small, &big, &s).unwrap(), s);
        assert!(check_covalue(&big, &s, None).is_ok());

        let bad = TypingContext::new(unit()).with_gamma(&Name::new("z"), &Type::not(a));
        assert!(theta.validate(&from, &bad).is_err());
    }
}
