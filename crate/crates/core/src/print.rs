//! Concrete-syntax printer. The output is accepted by [`crate::parse`] and
//! is stable under repeated printing.

use std::fmt;

use crate::term::{Binder, Command, Side, Term};
use crate::types::Type;

// Precedence levels, loosest first.
const PAR: u8 = 1;
const SUM: u8 = 2;
const WITH: u8 = 3;
const TENSOR: u8 = 4;
const PREFIX: u8 = 5;

fn write_type(f: &mut fmt::Formatter<'_>, ty: &Type, level: u8) -> fmt::Result {
    let (mine, op, a, b) = match ty {
        Type::Unit => return f.write_str("1"),
        Type::Box(a) | Type::Not(a) => {
            f.write_str(if matches!(ty, Type::Box(_)) { "box " } else { "~" })?;
            return write_type(f, a, PREFIX);
        }
        Type::Par(a, b) => (PAR, "@", a, b),
        Type::Sum(a, b) => (SUM, "+", a, b),
        Type::With(a, b) => (WITH, "&", a, b),
        Type::Tensor(a, b) => (TENSOR, "*", a, b),
    };
    let paren = mine < level;
    if paren {
        f.write_str("(")?;
    }
    write_type(f, a, mine)?;
    write!(f, " {op} ")?;
    write_type(f, b, mine + 1)?;
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, PAR)
    }
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

fn side(i: Side, first: &'static str, second: &'static str) -> &'static str {
    match i {
        Side::First => first,
        Side::Second => second,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::CoVar(x) => write!(f, "{x}"),
            Term::Unit => f.write_str("()"),
            Term::Pair(a, b) | Term::CoPair(a, b) => write!(f, "({a}, {b})"),
            Term::Boxed(v) => write!(f, "box {v}"),
            Term::Inj(i, v) => write!(f, "{} {v}", side(*i, "inl", "inr")),
            Term::Proj(i, s) => write!(f, "{} {s}", side(*i, "fst", "snd")),
            Term::Neg(v) => write!(f, "[{v}]"),
            Term::MuNot(x, c) => write!(f, "mu[{x}]. {c}"),
            Term::MuWith(a, c1, b, c2) => write!(f, "mu{{fst {a} -> {c1} | snd {b} -> {c2}}}"),
            Term::MuPar(a, b, c) => write!(f, "mu({a}, {b}). {c}"),
            Term::Mu(a, c) => write!(f, "mu {a}. {c}"),
            Term::MuTildeBox(x, c) => write!(f, "mu~box {x}. {c}"),
            Term::MuTildeUnit(c) => write!(f, "mu~(). {c}"),
            Term::MuTilde(x, c) => write!(f, "mu~{x}. {c}"),
            Term::MuTildePair(x, y, c) => write!(f, "mu~({x}, {y}). {c}"),
            Term::MuTildeMatch(x, c1, y, c2) => {
                write!(f, "mu~{{inl {x} -> {c1} | inr {y} -> {c2}}}")
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | {} >", self.left, self.right)
    }
}

/// Renders a command followed by its polarity, for traces and diagnostics.
pub fn with_polarity(c: &Command) -> String {
    format!("{c}_{}", c.polarity)
}
