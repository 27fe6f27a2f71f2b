//! Differential running: operational semantics against the machine and
//! against the box erasure.

use serde::Serialize;

use lbox_core::machine::{
    machine_run, readback, readback_command, Machine, MachineRule, MachineStep, RunOptions,
};
use lbox_core::opsem::{self, StepResult};
use lbox_core::subst::{alpha_eq, alpha_eq_command, free_vars};
use lbox_core::sugar::{erase_context, erase_program, erase_term};
use lbox_core::hint::Scope;
use lbox_core::term::Command;
use lbox_core::types::Type;
use lbox_core::typing::{check_command, check_value, modal_restriction, TypingContext};

/// Step budget for one erased reduct to catch up with the original.
pub const ERASURE_CATCH_UP: usize = 8;

/// A property that failed, with an explanation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub property: &'static str,
    pub detail: String,
}

/// Outcome of [`differential_run`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct Verdict {
    pub opsem_value: Option<String>,
    pub opsem_steps: usize,
    pub machine_value: Option<String>,
    pub machine_steps: usize,
    pub eval_box: usize,
    pub shrink_events: usize,
    pub initial_depth: usize,
    pub final_depth: usize,
    pub high_water: usize,
    pub erased_value: Option<String>,
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, property: &'static str, detail: impl Into<String>) {
        self.failures.push(Failure { property, detail: detail.into() });
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        if self.ok() {
            format!("OK: V'[H] = V; shrinks={}", self.shrink_events)
        } else {
            let names: Vec<_> = self.failures.iter().map(|f| f.property).collect();
            format!("FAIL: {}", names.join(", "))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DiffOptions {
    pub fuel: usize,
    /// Also compare against the box erasure.
    pub erasure: bool,
    /// Type the memory after every machine step.
    pub memory_typing: bool,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions { fuel: 100_000, erasure: true, memory_typing: true }
    }
}

/// Runs `c` three ways and checks that the results agree, along with the
/// per-step invariants of each evaluator.
pub fn differential_run(c: &Command, ret: &Type, opts: DiffOptions) -> Verdict {
    let mut v = Verdict::default();
    let ctx = TypingContext::new(ret.clone());
    if let Err(e) = check_command(&ctx, c) {
        v.fail("typing", e.to_string());
        return v;
    }
    let value = check_opsem(c, &ctx, opts.fuel, &mut v);
    check_machine(c, ret, &ctx, value.as_ref(), opts, &mut v);
    if opts.erasure {
        check_erasure(c, ret, value.as_ref(), opts.fuel, &mut v);
    }
    v
}

fn check_opsem(c: &Command, ctx: &TypingContext, fuel: usize, v: &mut Verdict) -> Option<lbox_core::Term> {
    let mut sr = Vec::new();
    let mut overlaps = Vec::new();
    let observe = |before: &Command, _: opsem::Rule, after: &Command| {
        let rules = opsem::matching_rules(before);
        if rules.len() > 1 {
            overlaps.push(format!("{before} matches {rules:?}"));
        }
        if let Err(e) = check_command(ctx, after) {
            sr.push(format!("{before} ▷ {after}: {e}"));
        }
    };
    let out = match opsem::run_with(c, fuel, observe) {
        Ok(o) => o,
        Err(e) => {
            v.fail("evaluation", e.to_string());
            return None;
        }
    };
    for d in overlaps {
        v.fail("determinism", d);
    }
    for d in sr {
        v.fail("subject-reduction", d);
    }
    v.opsem_steps = out.steps;
    match out.result {
        StepResult::Terminal(val) => {
            if !free_vars(&val).is_empty() {
                v.fail("evaluation", format!("open result {val}"));
            }
            let ret = ctx.ret().cloned();
            if let Err(e) = check_value(ctx, &val, ret.as_ref()) {
                v.fail("evaluation", format!("result {val}: {e}"));
            } else if ret.is_some_and(|r| r.polarity() == lbox_core::Polarity::Modal) {
                if let Err(e) = modal_restriction(ctx, &val) {
                    v.fail("modal-restriction", format!("result {val}: {e}"));
                }
            }
            v.opsem_value = Some(val.to_string());
            Some(val)
        }
        StepResult::Stuck(r) => {
            v.fail("progress", format!("stuck after {} steps: {r}", out.steps));
            None
        }
        StepResult::Stepped(..) => unreachable!("run stops before a step"),
    }
}

fn check_machine(
    c: &Command,
    ret: &Type,
    ctx: &TypingContext,
    expected: Option<&lbox_core::Term>,
    opts: DiffOptions,
    v: &mut Verdict,
) {
    let mut m = Machine::new(c.clone(), ret.clone()).with_debug(opts.memory_typing);
    v.initial_depth = m.depth();
    let mut rules = Vec::new();
    // Read-back of the configuration before the current step.
    let mut before = match readback_command(&m.memory, &m.command) {
        Ok(c) => c,
        Err(e) => return v.fail("simulation", e.to_string()),
    };
    let mut stutter = 0usize;
    let mut stutter_budget = m.memory.binding_count();
    let value = loop {
        let old = m.memory.clone();
        let step = match m.step() {
            Ok(s) => s,
            Err(f) => {
                let prop = match f {
                    lbox_core::machine::Fault::MemoryTyping(_) => "memory-typing",
                    lbox_core::machine::Fault::CommandTyping(_) => "machine-subject-reduction",
                    lbox_core::machine::Fault::Hygiene(_) => "heap-hygiene",
                    _ => "machine-progress",
                };
                return v.fail(prop, format!("step {}: {f}", m.steps));
            }
        };
        match step {
            MachineStep::Stepped(rule) => {
                rules.push(rule);
                if rule == MachineRule::EvalBox {
                    check_restore(&old, &m, v);
                }
                let after = match readback_command(&m.memory, &m.command) {
                    Ok(c) => c,
                    Err(e) => return v.fail("simulation", e.to_string()),
                };
                if alpha_eq_command(&before, &after) {
                    if stutter == 0 {
                        stutter_budget = old.binding_count();
                    }
                    stutter += 1;
                    if stutter > stutter_budget {
                        v.fail("simulation", format!("stutter run of {stutter} exceeds {stutter_budget} bindings"));
                    }
                } else {
                    stutter = 0;
                    match opsem::step(&before) {
                        StepResult::Stepped(_, next) if alpha_eq_command(&next, &after) => {}
                        other => {
                            return v.fail(
                                "simulation",
                                format!("{rule}: read-back {before} went to {after}, opsem gives {other:?}"),
                            )
                        }
                    }
                }
                before = after;
                if m.steps >= opts.fuel {
                    return v.fail("machine-evaluation", "fuel exhausted");
                }
            }
            MachineStep::Terminal(val) => break val,
            MachineStep::Stuck(r) => return v.fail("machine-progress", r),
        }
    };
    v.machine_steps = rules.len();
    v.eval_box = rules.iter().filter(|r| **r == MachineRule::EvalBox).count();
    v.shrink_events = count_shrinks(&rules);
    v.final_depth = m.depth();
    v.high_water = m.high_water;
    let heap_fv = free_vars(&value);
    let heap = m.memory.heap_names();
    if !heap_fv.covars.is_empty() || heap_fv.vars.iter().any(|x| !heap.contains(x)) {
        v.fail("machine-evaluation", format!("result {value} refers to the stack"));
    }
    match readback(&m.memory, &value) {
        Ok(rb) => {
            v.machine_value = Some(rb.to_string());
            if let Some(e) = expected {
                if !alpha_eq(&rb, e) {
                    v.fail("machine-correctness", format!("machine gives {rb}, opsem gives {e}"));
                }
            }
        }
        Err(e) => v.fail("machine-correctness", e.to_string()),
    }
    let _ = ctx;
}

/// The return through a modal covariable leaves exactly the frames that
/// were below its own.
fn check_restore(old: &lbox_core::machine::Memory, m: &Machine, v: &mut Verdict) {
    let restored = &m.memory.stack;
    if restored.len() > old.stack.len() || old.stack[..restored.len()] != restored[..] || old.heap != m.memory.heap {
        v.fail("stackability", format!("EvalBox did not restore a prefix: {old} to {}", m.memory));
    }
}

/// Maximal runs of consecutive EvalBox steps.
pub fn count_shrinks(rules: &[MachineRule]) -> usize {
    let mut n = 0;
    let mut prev = false;
    for r in rules {
        let cur = *r == MachineRule::EvalBox;
        if cur && !prev {
            n += 1;
        }
        prev = cur;
    }
    n
}

fn check_erasure(c: &Command, ret: &Type, expected: Option<&lbox_core::Term>, fuel: usize, v: &mut Verdict) {
    let ctx = TypingContext::new(ret.clone());
    let ectx = erase_context(&ctx);
    let ec = erase_program(c, ret);
    if let Err(e) = check_command(&ectx, &ec) {
        return v.fail("erasure-typing", format!("{ec}: {e}"));
    }
    // Each original step is matched by one to ERASURE_CATCH_UP erased steps.
    let mut cur = c.clone();
    let mut ecur = ec.clone();
    for _ in 0..fuel {
        let next = match opsem::step(&cur) {
            StepResult::Stepped(_, n) => n,
            _ => break,
        };
        let target = erase_program(&next, ret);
        let mut reached = false;
        for _ in 0..ERASURE_CATCH_UP {
            match opsem::step(&ecur) {
                StepResult::Stepped(_, n) => ecur = n,
                _ => break,
            }
            if alpha_eq_command(&ecur, &target) {
                reached = true;
                break;
            }
        }
        if !reached {
            return v.fail("erasure-simulation", format!("{cur} ▷ {next}, but erasure reached {ecur}"));
        }
        cur = next;
    }
    match opsem::run(&ec, fuel) {
        Ok(out) => match out.result {
            StepResult::Terminal(val) => {
                v.erased_value = Some(val.to_string());
                if let Some(e) = expected {
                    let want = erase_term(&mut Scope::toplevel(ret.clone()), e);
                    if !alpha_eq(&val, &want) {
                        v.fail("erasure-evaluation", format!("erasure gives {val}, expected {want}"));
                    }
                }
            }
            other => v.fail("erasure-evaluation", format!("{other:?}")),
        },
        Err(e) => v.fail("erasure-evaluation", e.to_string()),
    }
}

/// Machine run with a full trace, for the golden stackability checks.
pub fn machine_trace(c: &Command, ret: &Type, fuel: usize) -> Result<lbox_core::machine::MachineRun, String> {
    machine_run(c, ret, RunOptions { fuel, debug: true, trace: true }).map_err(|e| e.to_string())
}
