//! Types and polarities.

use std::fmt;
use std::sync::Arc;

/// Evaluation-order tag carried by every type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Polarity {
    /// `+`: call-by-value, stack allocated.
    Pos,
    /// `-`: call-by-name.
    Neg,
    /// `□`: call-by-value, heap allocated.
    Modal,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Pos, Polarity::Neg, Polarity::Modal];

    /// `+` or `□`.
    pub fn is_box_plus(self) -> bool {
        matches!(self, Polarity::Pos | Polarity::Modal)
    }

    /// `+` or `-`.
    pub fn is_non_modal(self) -> bool {
        matches!(self, Polarity::Pos | Polarity::Neg)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Pos => "+",
            Polarity::Neg => "-",
            Polarity::Modal => "□",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Polarity of a strict pair or sum: modal only when both components are.
pub fn odot(a: Polarity, b: Polarity) -> Polarity {
    match (a, b) {
        (Polarity::Modal, Polarity::Modal) => Polarity::Modal,
        _ => Polarity::Pos,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Unit,
    Tensor(Arc<Type>, Arc<Type>),
    Sum(Arc<Type>, Arc<Type>),
    Box(Arc<Type>),
    Not(Arc<Type>),
    With(Arc<Type>, Arc<Type>),
    Par(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Arc::new(a), Arc::new(b))
    }
    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Arc::new(a), Arc::new(b))
    }
    pub fn boxed(a: Type) -> Type {
        Type::Box(Arc::new(a))
    }
    pub fn not(a: Type) -> Type {
        Type::Not(Arc::new(a))
    }
    pub fn with(a: Type, b: Type) -> Type {
        Type::With(Arc::new(a), Arc::new(b))
    }
    pub fn par(a: Type, b: Type) -> Type {
        Type::Par(Arc::new(a), Arc::new(b))
    }

    pub fn polarity(&self) -> Polarity {
        polarity_of(self)
    }
}

pub fn polarity_of(ty: &Type) -> Polarity {
    match ty {
        Type::Unit | Type::Box(_) => Polarity::Modal,
        Type::Not(_) | Type::With(..) | Type::Par(..) => Polarity::Neg,
        Type::Tensor(a, b) | Type::Sum(a, b) => odot(polarity_of(a), polarity_of(b)),
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarity_table() {
        assert_eq!(polarity_of(&Type::Unit), Polarity::Modal);
        let u = Type::Unit;
        assert_eq!(
            polarity_of(&Type::tensor(u.clone(), Type::with(u.clone(), u.clone()))),
            Polarity::Pos
        );
        assert_eq!(polarity_of(&Type::sum(u.clone(), u.clone())), Polarity::Modal);
        assert_eq!(polarity_of(&Type::boxed(Type::not(u.clone()))), Polarity::Modal);
        assert_eq!(polarity_of(&Type::par(Type::not(u.clone()), u)), Polarity::Neg);
    }

    #[test]
    fn odot_examples() {
        assert_eq!(odot(Polarity::Modal, Polarity::Modal), Polarity::Modal);
        assert_eq!(odot(Polarity::Modal, Polarity::Neg), Polarity::Pos);
        assert_eq!(odot(Polarity::Pos, Polarity::Pos), Polarity::Pos);
    }

    // One representative type per polarity, so every pair is exercised.
    fn rep(p: Polarity) -> Type {
        match p {
            Polarity::Modal => Type::Unit,
            Polarity::Neg => Type::not(Type::Unit),
            Polarity::Pos => Type::tensor(Type::Unit, Type::not(Type::Unit)),
        }
    }

    #[test]
    fn strict_connectives_agree_with_odot_on_all_pairs() {
        for a in Polarity::ALL {
            for b in Polarity::ALL {
                let expected = if a == Polarity::Modal && b == Polarity::Modal {
                    Polarity::Modal
                } else {
                    Polarity::Pos
                };
                assert_eq!(odot(a, b), expected);
                assert_eq!(polarity_of(&Type::tensor(rep(a), rep(b))), expected);
                assert_eq!(polarity_of(&Type::sum(rep(a), rep(b))), expected);
            }
        }
    }

    #[test]
    fn polarity_classes() {
        assert!(Polarity::Pos.is_box_plus() && Polarity::Modal.is_box_plus());
        assert!(!Polarity::Neg.is_box_plus());
        assert!(Polarity::Pos.is_non_modal() && Polarity::Neg.is_non_modal());
        assert!(!Polarity::Modal.is_non_modal());
    }
}
