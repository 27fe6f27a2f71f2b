//! Heap and stack frames.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::name::Name;
use crate::term::{Class, Term};
use crate::types::{Polarity, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Var,
    CoVar,
}

/// `x^ε := V̄` or `α^ε := S̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: Name,
    pub kind: Kind,
    pub polarity: Polarity,
    pub ty: Type,
    pub content: Term,
}

impl Binding {
    pub fn var(name: Name, ty: Type, content: Term) -> Self {
        Binding { name, kind: Kind::Var, polarity: ty.polarity(), ty, content }
    }

    pub fn covar(name: Name, ty: Type, content: Term) -> Self {
        Binding { name, kind: Kind::CoVar, polarity: ty.polarity(), ty, content }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} := {}", self.name, self.polarity, self.content)
    }
}

/// One or two bindings allocated together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub bindings: Vec<Binding>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Fault {
    #[error("unbound variable `{0}`")]
    UnboundVar(Name),
    #[error("unbound covariable `{0}`")]
    UnboundCovar(Name),
    #[error("expected a {expected}, found `{found}`")]
    ClassMismatch { expected: Class, found: Term },
    #[error("cannot restrict at `{0}`: it is not on the stack")]
    RestrictMissing(Name),
    #[error("heap hygiene violated: {0}")]
    Hygiene(String),
    #[error("memory is ill-typed: {0}")]
    MemoryTyping(String),
    #[error("command is ill-typed in the memory context: {0}")]
    CommandTyping(String),
}

/// `⟨H ∥ S̄⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Memory {
    pub heap: Vec<Binding>,
    pub stack: Vec<Frame>,
}

impl Memory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    pub fn binding_count(&self) -> usize {
        self.heap.len() + self.stack.iter().map(|f| f.bindings.len()).sum::<usize>()
    }

    pub fn bindings(&self) -> impl Iterator<Item = &Binding> {
        self.heap.iter().chain(self.stack.iter().flat_map(|f| f.bindings.iter()))
    }

    fn lookup(&self, kind: Kind, name: &Name) -> Option<&Binding> {
        self.stack
            .iter()
            .rev()
            .flat_map(|f| f.bindings.iter().rev())
            .chain(self.heap.iter().rev())
            .find(|b| b.kind == kind && &b.name == name)
    }

    /// `M(x)` together with `ϖ(x)`.
    pub fn var(&self, x: &Name) -> Option<&Binding> {
        self.lookup(Kind::Var, x)
    }

    /// `M(α)` together with `ϖ(α)`.
    pub fn covar(&self, a: &Name) -> Option<&Binding> {
        self.lookup(Kind::CoVar, a)
    }

    /// `@α`: index of the stack frame holding `α`.
    pub fn frame_of(&self, kind: Kind, name: &Name) -> Option<usize> {
        self.stack
            .iter()
            .rposition(|f| f.bindings.iter().any(|b| b.kind == kind && &b.name == name))
    }

    pub fn heap_names(&self) -> BTreeSet<Name> {
        self.heap.iter().map(|b| b.name.clone()).collect()
    }

    /// `M[x₁ := …, x₂ := …]`: modal variables go to the heap, everything
    /// else into one new stack frame.
    pub fn alloc(&mut self, bindings: Vec<Binding>) {
        let mut frame = Vec::new();
        for b in bindings {
            if b.kind == Kind::Var && b.polarity == Polarity::Modal {
                self.heap.push(b);
            } else {
                frame.push(b);
            }
        }
        if !frame.is_empty() {
            self.stack.push(Frame { bindings: frame });
        }
    }

    /// Heap allocation regardless of polarity.
    pub fn alloc_heap(&mut self, b: Binding) {
        self.heap.push(b);
    }

    /// `M|@α`: drops the frame holding `α` and every later frame. On an
    /// empty stack this is the identity; otherwise `α` must be present.
    pub fn restrict(&self, a: &Name) -> Result<Memory, Fault> {
        if self.stack.is_empty() {
            return Ok(self.clone());
        }
        match self.frame_of(Kind::CoVar, a) {
            Some(i) => Ok(Memory { heap: self.heap.clone(), stack: self.stack[..i].to_vec() }),
            None => Err(Fault::RestrictMissing(a.clone())),
        }
    }
}

impl fmt::Display for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let heap: Vec<String> = self.heap.iter().map(|b| format!("({b})")).collect();
        let stack: Vec<String> = self
            .stack
            .iter()
            .map(|fr| {
                let bs: Vec<String> = fr.bindings.iter().map(|b| b.to_string()).collect();
                format!("({})", bs.join(", "))
            })
            .collect();
        let show = |v: Vec<String>| if v.is_empty() { "⋄".to_string() } else { v.join(", ") };
        write!(f, "⟨{} ∥ {}⟩", show(heap), show(stack))
    }
}
