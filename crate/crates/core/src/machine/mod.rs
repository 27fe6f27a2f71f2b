//! An abstract machine with an explicit heap and stack.
//!
//! Modal variables are allocated on the heap; other variables and all
//! covariables go on the stack, one frame per allocation. Returning to a
//! modal covariable drops every frame from the one holding it.

pub mod eval;
pub mod memory;
pub mod memtype;
pub mod readback;
pub mod trace;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::name::Name;
use crate::subst::{all_names_command, free_vars, rename_covar_in, rename_var_in};
use crate::term::{Binder, Class, Command, Side, Term};
use crate::types::{Polarity, Type};
use crate::typing::check_command;

pub use eval::{eval_covalue, eval_value};
pub use memory::{Binding, Fault, Frame, Kind, Memory};
pub use memtype::{type_memory, MemTypeError, MemoryTypeEnv};
pub use readback::{readback, readback_command, readback_substitution, Dangling};
pub use trace::TraceEntry;

/// The twelve command evaluation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MachineRule {
    EvalPos,
    EvalNeg,
    EvalBox,
    EvalMuNot,
    EvalMu,
    EvalMuTilde,
    EvalMuTildeTensor,
    EvalMuPar,
    EvalMuTildeSum,
    EvalMuWith,
    EvalMuTildeUnit,
    EvalMuTildeBox,
}

impl MachineRule {
    pub fn label(self) -> &'static str {
        match self {
            MachineRule::EvalPos => "Eval+",
            MachineRule::EvalNeg => "Eval-",
            MachineRule::EvalBox => "EvalBox",
            MachineRule::EvalMuNot => "EvalMuNot",
            MachineRule::EvalMu => "EvalMu",
            MachineRule::EvalMuTilde => "EvalMuTilde",
            MachineRule::EvalMuTildeTensor => "EvalMuTildeTensor",
            MachineRule::EvalMuPar => "EvalMuPar",
            MachineRule::EvalMuTildeSum => "EvalMuTildeSum",
            MachineRule::EvalMuWith => "EvalMuWith",
            MachineRule::EvalMuTildeUnit => "EvalMuTildeUnit",
            MachineRule::EvalMuTildeBox => "EvalMuTildeBox",
        }
    }

    /// Rules that only dereference or shrink, leaving the read-back
    /// command unchanged.
    pub fn is_administrative(self) -> bool {
        matches!(self, MachineRule::EvalPos | MachineRule::EvalNeg | MachineRule::EvalBox)
    }
}

impl fmt::Display for MachineRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineStep {
    Stepped(MachineRule),
    /// `⟨V ‖ tp⟩`; carries `V̄`.
    Terminal(Term),
    Stuck(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine fault at step {step}: {fault}")]
    Fault { step: usize, fault: Fault },
    #[error("machine stuck at step {step}: {reason}")]
    Stuck { step: usize, reason: String },
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: usize },
}

/// A memory and a command, plus instrumentation.
#[derive(Clone, Debug)]
pub struct Machine {
    pub memory: Memory,
    pub command: Command,
    pub ret: Type,
    /// Run memory typing and hygiene checks after every step.
    pub debug: bool,
    pub steps: usize,
    pub high_water: usize,
    used: BTreeSet<Name>,
}

impl Machine {
    pub fn new(command: Command, ret: Type) -> Self {
        Machine {
            memory: Memory::new(),
            command,
            ret,
            debug: false,
            steps: 0,
            high_water: 0,
            used: BTreeSet::new(),
        }
    }

    pub fn with_debug(mut self, debug: bool) -> Self {
        self.debug = debug;
        self
    }

    pub fn depth(&self) -> usize {
        self.memory.depth()
    }

    /// Picks a name for a binder about to be allocated: the binder's own
    /// name unless memory already used it.
    fn fresh(&self, name: &Name, avoid: &BTreeSet<Name>) -> Name {
        if !self.used.contains(name) && !name.is_toplevel() {
            return name.clone();
        }
        name.freshen(|n| self.used.contains(n) || avoid.contains(n))
    }

    /// Freshens the given binders of `body`, returning new names and the
    /// renamed body.
    fn freshen_binders(&self, vars: &[&Binder], covars: &[&Binder], body: &Command) -> (Vec<Name>, Vec<Name>, Command) {
        let mut avoid = BTreeSet::new();
        all_names_command(&self.command, &mut avoid);
        let mut body = body.clone();
        let mut vs = Vec::new();
        for b in vars {
            let n = self.fresh(&b.name, &avoid);
            if n != b.name {
                body = rename_var_in(&body, &b.name, &n);
            }
            avoid.insert(n.clone());
            vs.push(n);
        }
        let mut cs = Vec::new();
        for b in covars {
            let n = self.fresh(&b.name, &avoid);
            if n != b.name {
                body = rename_covar_in(&body, &b.name, &n);
            }
            avoid.insert(n.clone());
            cs.push(n);
        }
        (vs, cs, body)
    }

    fn commit(&mut self, bindings: Vec<Binding>, heap: bool, next: Command) {
        for b in &bindings {
            self.used.insert(b.name.clone());
        }
        if heap {
            for b in bindings {
                self.memory.alloc_heap(b);
            }
        } else {
            self.memory.alloc(bindings);
        }
        self.command = next;
    }

    fn bind_var(&mut self, x: &Binder, v: Term, body: &Command, heap: bool) {
        let (vs, _, body) = self.freshen_binders(&[x], &[], body);
        let b = Binding::var(vs[0].clone(), x.ty.clone(), v);
        self.commit(vec![b], heap, body);
    }

    fn bind_covar(&mut self, a: &Binder, s: Term, body: &Command) {
        let (_, cs, body) = self.freshen_binders(&[], &[a], body);
        let b = Binding::covar(cs[0].clone(), a.ty.clone(), s);
        self.commit(vec![b], false, body);
    }

    /// One transition `M ⊨ c ⇝ c' ⊣ M'`.
    pub fn step(&mut self) -> Result<MachineStep, Fault> {
        let outcome = self.step_inner()?;
        if let MachineStep::Stepped(_) = outcome {
            self.steps += 1;
            self.high_water = self.high_water.max(self.memory.depth());
            if self.debug {
                self.check_invariants()?;
            }
        }
        Ok(outcome)
    }

    fn step_inner(&mut self) -> Result<MachineStep, Fault> {
        let c = self.command.clone();
        let eps = c.polarity;
        use MachineRule::*;

        if let Term::Mu(a, body) = &c.left {
            if a.polarity() == eps && c.right.is_covalue() {
                let s = eval_covalue(&self.memory, &c.right)?;
                self.bind_covar(a, s, body);
                return Ok(MachineStep::Stepped(EvalMu));
            }
        }

        if let Term::CoVar(alpha) = &c.right {
            if c.left.is_value() {
                match self.memory.covar(alpha).map(|b| (b.polarity, b.content.clone())) {
                    Some((Polarity::Pos, s)) => {
                        self.command = Command::new(eps, c.left.clone(), s);
                        return Ok(MachineStep::Stepped(EvalPos));
                    }
                    Some((Polarity::Modal, s)) => {
                        if self.debug {
                            self.check_heap_only(&c.left)?;
                        }
                        self.memory = self.memory.restrict(alpha)?;
                        self.command = Command::new(eps, c.left.clone(), s);
                        return Ok(MachineStep::Stepped(EvalBox));
                    }
                    Some((Polarity::Neg, _)) => {}
                    None if alpha.is_toplevel() => {
                        return Ok(MachineStep::Terminal(eval_value(&self.memory, &c.left)?));
                    }
                    None => return Err(Fault::UnboundCovar(alpha.clone())),
                }
            }
        }

        match &c.right {
            Term::MuTilde(x, body) if x.polarity() == eps && c.left.is_value() => {
                let v = eval_value(&self.memory, &c.left)?;
                self.bind_var(x, v, body, false);
                return Ok(MachineStep::Stepped(EvalMuTilde));
            }
            Term::MuTildePair(x, y, body) if c.left.is_value() => {
                return match eval_value(&self.memory, &c.left)? {
                    Term::Pair(v, w) => {
                        let (vs, _, body) = self.freshen_binders(&[x, y], &[], body);
                        let bs = vec![
                            Binding::var(vs[0].clone(), x.ty.clone(), (*v).clone()),
                            Binding::var(vs[1].clone(), y.ty.clone(), (*w).clone()),
                        ];
                        self.commit(bs, false, body);
                        Ok(MachineStep::Stepped(EvalMuTildeTensor))
                    }
                    other => Ok(MachineStep::Stuck(format!("expected a pair, found {other}"))),
                };
            }
            Term::MuTildeMatch(x1, c1, x2, c2) if c.left.is_value() => {
                return match eval_value(&self.memory, &c.left)? {
                    Term::Inj(i, v) => {
                        let (x, body) = if i == Side::First { (x1, c1) } else { (x2, c2) };
                        self.bind_var(x, (*v).clone(), body, false);
                        Ok(MachineStep::Stepped(EvalMuTildeSum))
                    }
                    other => Ok(MachineStep::Stuck(format!("expected an injection, found {other}"))),
                };
            }
            Term::MuTildeUnit(body) if eps == Polarity::Modal && c.left.is_value() => {
                return match eval_value(&self.memory, &c.left)? {
                    Term::Unit => {
                        self.command = (**body).clone();
                        Ok(MachineStep::Stepped(EvalMuTildeUnit))
                    }
                    other => Ok(MachineStep::Stuck(format!("expected (), found {other}"))),
                };
            }
            Term::MuTildeBox(x, body) if eps == Polarity::Modal && c.left.is_value() => {
                return match eval_value(&self.memory, &c.left)? {
                    Term::Boxed(v) => {
                        if self.debug {
                            self.check_heap_only(&v)?;
                        }
                        self.bind_var(x, (*v).clone(), body, true);
                        Ok(MachineStep::Stepped(EvalMuTildeBox))
                    }
                    other => Ok(MachineStep::Stuck(format!("expected a box, found {other}"))),
                };
            }
            _ => {}
        }

        if eps == Polarity::Neg && c.right.is_covalue() {
            match &c.left {
                Term::MuNot(x, body) => {
                    return match eval_covalue(&self.memory, &c.right)? {
                        Term::Neg(v) => {
                            self.bind_var(x, (*v).clone(), body, false);
                            Ok(MachineStep::Stepped(EvalMuNot))
                        }
                        other => Ok(MachineStep::Stuck(format!("expected [V], found {other}"))),
                    };
                }
                Term::MuPar(a, b, body) => {
                    return match eval_covalue(&self.memory, &c.right)? {
                        Term::CoPair(s1, s2) => {
                            let (_, cs, body) = self.freshen_binders(&[], &[a, b], body);
                            let bs = vec![
                                Binding::covar(cs[0].clone(), a.ty.clone(), (*s1).clone()),
                                Binding::covar(cs[1].clone(), b.ty.clone(), (*s2).clone()),
                            ];
                            self.commit(bs, false, body);
                            Ok(MachineStep::Stepped(EvalMuPar))
                        }
                        other => Ok(MachineStep::Stuck(format!("expected (S, S'), found {other}"))),
                    };
                }
                Term::MuWith(a1, c1, a2, c2) => {
                    return match eval_covalue(&self.memory, &c.right)? {
                        Term::Proj(i, s) => {
                            let (a, body) = if i == Side::First { (a1, c1) } else { (a2, c2) };
                            self.bind_covar(a, (*s).clone(), body);
                            Ok(MachineStep::Stepped(EvalMuWith))
                        }
                        other => Ok(MachineStep::Stuck(format!("expected a projection, found {other}"))),
                    };
                }
                _ => {}
            }
        }

        if let Term::Var(x) = &c.left {
            if eps == Polarity::Neg {
                match self.memory.var(x) {
                    Some(b) if b.polarity == Polarity::Neg => {
                        self.command = Command::new(eps, b.content.clone(), c.right.clone());
                        return Ok(MachineStep::Stepped(EvalNeg));
                    }
                    Some(_) => {}
                    None => return Err(Fault::UnboundVar(x.clone())),
                }
            }
        }

        if !c.left.is_expression() {
            return Err(Fault::ClassMismatch { expected: Class::Expression, found: c.left.clone() });
        }
        Ok(MachineStep::Stuck(format!("no rule applies to {c}")))
    }

    /// The value refers only to the heap: no free covariables and every
    /// free variable heap-resident.
    fn check_heap_only(&self, v: &Term) -> Result<(), Fault> {
        let fv = free_vars(v);
        if let Some(a) = fv.covars.iter().next() {
            return Err(Fault::Hygiene(format!("modal value {v} mentions covariable `{a}`")));
        }
        let heap = self.memory.heap_names();
        if let Some(x) = fv.vars.iter().find(|x| !heap.contains(*x)) {
            return Err(Fault::Hygiene(format!("modal value {v} mentions stack variable `{x}`")));
        }
        Ok(())
    }

    /// Memory typing, command typing in `⟦Σ⟧`, and heap hygiene.
    pub fn check_invariants(&self) -> Result<MemoryTypeEnv, Fault> {
        let env = type_memory(&self.memory, &self.ret).map_err(|e| Fault::MemoryTyping(e.to_string()))?;
        check_command(&env.context(), &self.command).map_err(|e| Fault::CommandTyping(e.to_string()))?;
        let heap = self.memory.heap_names();
        for b in &self.memory.heap {
            let fv = free_vars(&b.content);
            if !fv.covars.is_empty() || fv.vars.iter().any(|x| !heap.contains(x)) {
                return Err(Fault::Hygiene(format!("heap binding {b} refers to the stack")));
            }
        }
        Ok(env)
    }

    pub fn snapshot(&self, rule: &str) -> TraceEntry {
        TraceEntry::snapshot(self.steps, rule, self.command.to_string(), &self.memory, self.high_water)
    }
}

/// Result of [`machine_run`].
#[derive(Clone, Debug)]
pub struct MachineRun {
    pub memory: Memory,
    /// `V̄` for the final `⟨V ‖ tp⟩`.
    pub value: Term,
    /// The final command.
    pub command: Command,
    pub rules: Vec<MachineRule>,
    /// Stack depth after each step, starting with the initial depth.
    pub depths: Vec<usize>,
    pub trace: Vec<TraceEntry>,
    pub high_water: usize,
}

impl MachineRun {
    pub fn steps(&self) -> usize {
        self.rules.len()
    }

    /// Number of `EvalBox` steps.
    pub fn eval_box_count(&self) -> usize {
        self.rules.iter().filter(|r| **r == MachineRule::EvalBox).count()
    }

    /// Maximal runs of consecutive `EvalBox` steps. A return that forwards
    /// through aliases of modal covariables counts once.
    pub fn shrink_events(&self) -> usize {
        let mut events = 0;
        let mut prev = false;
        for r in &self.rules {
            let cur = *r == MachineRule::EvalBox;
            if cur && !prev {
                events += 1;
            }
            prev = cur;
        }
        events
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub fuel: usize,
    pub debug: bool,
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { fuel: 100_000, debug: false, trace: false }
    }
}

/// Runs `c` from the empty memory until it reaches `⟨V ‖ tp⟩`.
pub fn machine_run(c: &Command, ret: &Type, opts: RunOptions) -> Result<MachineRun, MachineError> {
    let mut m = Machine::new(c.clone(), ret.clone()).with_debug(opts.debug);
    let mut rules = Vec::new();
    let mut depths = vec![m.depth()];
    let mut trace = Vec::new();
    if opts.trace {
        trace.push(m.snapshot("start"));
    }
    loop {
        let step = m.steps;
        match m.step().map_err(|fault| MachineError::Fault { step, fault })? {
            MachineStep::Stepped(rule) => {
                rules.push(rule);
                depths.push(m.depth());
                if opts.trace {
                    trace.push(m.snapshot(rule.label()));
                }
                if m.steps >= opts.fuel {
                    return Err(MachineError::FuelExhausted { steps: m.steps });
                }
            }
            MachineStep::Terminal(value) => {
                return Ok(MachineRun {
                    memory: m.memory,
                    value,
                    command: m.command,
                    rules,
                    depths,
                    trace,
                    high_water: m.high_water,
                })
            }
            MachineStep::Stuck(reason) => return Err(MachineError::Stuck { step, reason }),
        }
    }
}
