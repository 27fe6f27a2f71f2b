//! Syntax, typing and evaluation for a polarised modal sequent calculus.

#![allow(clippy::result_large_err, clippy::should_implement_trait)]

pub mod hint;
pub mod machine;
pub mod name;
pub mod opsem;
pub mod parse;
pub mod print;
pub mod subst;
pub mod sugar;
pub mod term;
pub mod types;
pub mod typing;

pub use name::Name;
pub use term::{Binder, Class, Command, Side, Term};
pub use types::{odot, polarity_of, Polarity, Type};
