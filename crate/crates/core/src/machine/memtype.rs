//! Typing of memories: `M : Σ` and the context `⟦Σ⟧`.

use thiserror::Error;

use crate::machine::memory::{Binding, Kind, Memory};
use crate::name::Name;
use crate::types::{Polarity, Type};
use crate::typing::{check_covalue, check_value, TypeError, TypingContext};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MemTypeError {
    #[error("binding `{name}` is stored with polarity {stored} but has type `{ty}`")]
    Polarity { name: Name, stored: Polarity, ty: Type },
    #[error("stack binding `{name}` has modal polarity; modal variables belong on the heap")]
    ModalOnStack { name: Name },
    #[error("ill-typed binding `{name}`: {error}")]
    Binding { name: Name, error: TypeError },
}

/// `Σ = ⟨Σ_H ∥ Σ_S̄⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryTypeEnv {
    pub heap: Vec<(Name, Type)>,
    pub stack: Vec<Vec<(Kind, Name, Type)>>,
    pub ret: Type,
}

impl MemoryTypeEnv {
    /// `⟦Σ⟧`: heap variables into `Θ`, stack variables into `Γ`,
    /// covariables into `Δ`, plus `tp : R`.
    pub fn context(&self) -> TypingContext {
        let mut ctx = TypingContext::new(self.ret.clone());
        for (x, t) in &self.heap {
            ctx.push_theta(x.clone(), t.clone());
        }
        for frame in &self.stack {
            for (k, n, t) in frame {
                push(&mut ctx, *k, n, t);
            }
        }
        ctx
    }
}

fn push(ctx: &mut TypingContext, kind: Kind, n: &Name, t: &Type) {
    match kind {
        Kind::Var => ctx.push_gamma(n.clone(), t.clone()),
        Kind::CoVar => ctx.push_delta(n.clone(), t.clone()),
    }
}

fn check_polarity(b: &Binding) -> Result<(), MemTypeError> {
    if b.polarity != b.ty.polarity() {
        return Err(MemTypeError::Polarity { name: b.name.clone(), stored: b.polarity, ty: b.ty.clone() });
    }
    Ok(())
}

/// Rebuilds `Σ`, checking each heap value in the pruned context of the
/// memory before it and each stack entry in `⟦prefix⟧`.
pub fn type_memory(m: &Memory, ret: &Type) -> Result<MemoryTypeEnv, MemTypeError> {
    let mut ctx = TypingContext::new(ret.clone());
    let mut env = MemoryTypeEnv { heap: Vec::new(), stack: Vec::new(), ret: ret.clone() };
    for b in &m.heap {
        check_polarity(b)?;
        check_value(&ctx.pruned(), &b.content, Some(&b.ty))
            .map_err(|error| MemTypeError::Binding { name: b.name.clone(), error })?;
        ctx.push_theta(b.name.clone(), b.ty.clone());
        env.heap.push((b.name.clone(), b.ty.clone()));
    }
    for frame in &m.stack {
        let mut entries = Vec::new();
        for b in &frame.bindings {
            check_polarity(b)?;
            let checked = match b.kind {
                Kind::Var => {
                    if b.polarity == Polarity::Modal {
                        return Err(MemTypeError::ModalOnStack { name: b.name.clone() });
                    }
                    check_value(&ctx, &b.content, Some(&b.ty))
                }
                Kind::CoVar => check_covalue(&ctx, &b.content, Some(&b.ty)),
            };
            checked.map_err(|error| MemTypeError::Binding { name: b.name.clone(), error })?;
            entries.push((b.kind, b.name.clone(), b.ty.clone()));
        }
        for (k, n, t) in &entries {
            push(&mut ctx, *k, n, t);
        }
        env.stack.push(entries);
    }
    Ok(env)
}
