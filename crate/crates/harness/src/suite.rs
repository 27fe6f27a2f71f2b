//! Property suites over the enumerated corpus and a seeded random sample.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use lbox_core::machine::{type_memory, Binding, Frame, Memory};
use lbox_core::name::Name;
use lbox_core::term::{Command, Term};
use lbox_core::types::Type;
use lbox_core::typing::{check_command, TypingContext};

use crate::diff::{differential_run, DiffOptions, Verdict};
use crate::enumerate::{enumerate_commands, return_types};
use crate::programs::GOLDEN;
use crate::sample::sample_commands;

/// Every property the suites report on, in report order.
pub const PROPERTIES: &[&str] = &[
    "determinism",
    "subject-reduction",
    "progress",
    "evaluation",
    "modal-restriction",
    "machine-progress",
    "machine-evaluation",
    "machine-correctness",
    "machine-subject-reduction",
    "memory-typing",
    "heap-hygiene",
    "simulation",
    "stackability",
    "erasure-typing",
    "erasure-simulation",
    "erasure-evaluation",
    "weakening",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Exhaustive corpus depth.
    pub depth: usize,
    /// Erasure is checked up to this depth.
    pub erasure_depth: usize,
    pub seed: u64,
    /// Random programs per return type.
    pub samples: usize,
    pub sample_depth: usize,
    pub fuel: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { depth: 4, erasure_depth: 3, seed: 0, samples: 200, sample_depth: 7, fuel: 100_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Smallest failing program and the reason it fails.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSize {
    pub ret: String,
    pub depth: usize,
    pub commands: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub corpus: Vec<CorpusSize>,
    pub sampled: usize,
    pub properties: Vec<PropertyReport>,
    /// Left out of JSON so reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.failures == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.corpus {
            writeln!(f, "corpus ret={} depth<={}: {} commands", c.ret, c.depth, c.commands)?;
        }
        writeln!(f, "sampled: {} commands", self.sampled)?;
        for p in &self.properties {
            let mark = if p.failures == 0 { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<26} {:>6} checked {:>4} failed", p.property, p.checked, p.failures)?;
            if let Some(w) = &p.witness {
                writeln!(f, "     witness: {w}")?;
            }
        }
        write!(f, "{} in {} ms", if self.ok() { "all properties hold" } else { "FAILURES" }, self.elapsed_ms)
    }
}

struct Item {
    ret: Type,
    command: Command,
    erasure: bool,
}

/// Smallest closed, well-typed sub-command of `c` (itself included) on
/// which `fails` still holds. Candidates are tried smallest first.
pub fn minimize(c: &Command, ret: &Type, fails: impl Fn(&Command) -> bool) -> Command {
    let ctx = TypingContext::new(ret.clone());
    let mut subs = Vec::new();
    collect_commands(c, &mut subs);
    subs.sort_by_key(|s| s.size());
    subs.into_iter()
        .find(|s| check_command(&ctx, s).is_ok() && fails(s))
        .unwrap_or_else(|| c.clone())
}

fn collect_commands(c: &Command, out: &mut Vec<Command>) {
    out.push(c.clone());
    for t in [&c.left, &c.right] {
        collect_in_term(t, out);
    }
}

fn collect_in_term(t: &Term, out: &mut Vec<Command>) {
    for c in t.commands() {
        collect_commands(c, out);
    }
    match t {
        Term::Pair(a, b) | Term::CoPair(a, b) => {
            collect_in_term(a, out);
            collect_in_term(b, out);
        }
        Term::Boxed(v) | Term::Inj(_, v) | Term::Proj(_, v) | Term::Neg(v) => collect_in_term(v, out),
        _ => {}
    }
}

/// Re-typing in a context with an extra unused variable and covariable.
fn weakening_holds(c: &Command, ret: &Type) -> bool {
    let ctx = TypingContext::new(ret.clone());
    let Ok(ty) = check_command(&ctx, c) else { return false };
    let wide = ctx
        .with_gamma(&Name::with_stamp("w", 9999), &Type::not(Type::Unit))
        .with_theta(&Name::with_stamp("m", 9999), &Type::Unit)
        .with_delta(&Name::with_stamp("k", 9999), &Type::Unit);
    check_command(&wide, c).ok() == Some(ty)
}

fn verdict(item: &Item, fuel: usize) -> Verdict {
    differential_run(&item.command, &item.ret, DiffOptions { fuel, erasure: item.erasure, memory_typing: true })
}

/// Builds the corpus, runs every property, and minimises failures.
pub fn property_suites(cfg: SuiteConfig) -> Report {
    let start = Instant::now();
    let mut items = Vec::new();
    let mut corpus = Vec::new();
    for ret in return_types() {
        let cs = enumerate_commands(cfg.depth, &ret);
        corpus.push(CorpusSize { ret: ret.to_string(), depth: cfg.depth, commands: cs.len() });
        for c in cs {
            let erasure = height(&c) <= cfg.erasure_depth;
            items.push(Item { ret: ret.clone(), command: c, erasure });
        }
    }
    let mut sampled = 0;
    for (i, ret) in return_types().into_iter().enumerate() {
        let cs = sample_commands(cfg.seed.wrapping_add(i as u64), cfg.samples, cfg.sample_depth, &ret);
        sampled += cs.len();
        items.extend(cs.into_iter().map(|c| Item { ret: ret.clone(), command: c, erasure: true }));
    }
    for (_, src) in GOLDEN {
        if let Ok(p) = lbox_core::parse::parse_program(src) {
            items.push(Item { ret: p.return_type(), command: p.command, erasure: true });
        }
    }

    let results: Vec<(Verdict, bool)> =
        items.par_iter().map(|it| (verdict(it, cfg.fuel), weakening_holds(&it.command, &it.ret))).collect();

    let mut counts: BTreeMap<&'static str, (usize, usize, Option<String>)> = BTreeMap::new();
    for (idx, (v, weak)) in results.iter().enumerate() {
        let item = &items[idx];
        for p in PROPERTIES {
            let applicable = !p.starts_with("erasure") || item.erasure;
            if !applicable {
                continue;
            }
            let entry = counts.entry(p).or_default();
            entry.0 += 1;
            let failed = if *p == "weakening" { !weak } else { v.failures.iter().any(|f| f.property == *p) };
            if failed {
                entry.1 += 1;
                if entry.2.is_none() {
                    entry.2 = Some(witness(item, p, cfg.fuel));
                }
            }
        }
    }
    let properties = PROPERTIES
        .iter()
        .map(|p| {
            let (checked, failures, witness) = counts.remove(p).unwrap_or_default();
            PropertyReport { property: p, checked, failures, witness }
        })
        .collect();
    Report { seed: cfg.seed, corpus, sampled, properties, elapsed_ms: start.elapsed().as_millis() }
}

fn witness(item: &Item, property: &'static str, fuel: usize) -> String {
    let fails = |c: &Command| {
        let it = Item { ret: item.ret.clone(), command: c.clone(), erasure: item.erasure };
        if property == "weakening" {
            !weakening_holds(c, &item.ret)
        } else {
            verdict(&it, fuel).failures.iter().any(|f| f.property == property)
        }
    };
    let small = minimize(&item.command, &item.ret, fails);
    let it = Item { ret: item.ret.clone(), command: small.clone(), erasure: item.erasure };
    let why = verdict(&it, fuel)
        .failures
        .into_iter()
        .find(|f| f.property == property)
        .map(|f| f.detail)
        .unwrap_or_default();
    format!("ret {}; {small}  ({why})", item.ret)
}

/// Tree height, matching the enumeration depth.
pub fn height(c: &Command) -> usize {
    1 + term_height(&c.left).max(term_height(&c.right))
}

fn term_height(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::CoVar(_) | Term::Unit => 0,
        Term::Pair(a, b) | Term::CoPair(a, b) => 1 + term_height(a).max(term_height(b)),
        Term::Boxed(v) | Term::Inj(_, v) | Term::Proj(_, v) | Term::Neg(v) => 1 + term_height(v),
        _ => 1 + t.commands().into_iter().map(height).max().unwrap_or(0),
    }
}

/// A memory whose stack frame refers to a binding allocated after it.
/// Memory typing must reject it.
pub fn forward_reference_memory() -> Memory {
    let mut m = Memory::new();
    m.stack.push(Frame { bindings: vec![Binding::var(Name::new("x"), Type::tensor(Type::Unit, Type::not(Type::Unit)), Term::pair(Term::Unit, Term::var("y")))] });
    m.stack.push(Frame {
        bindings: vec![Binding::var(
            Name::new("y"),
            Type::not(Type::Unit),
            Term::mu_not(
                lbox_core::Binder::new("z", Type::Unit),
                Command::new(lbox_core::Polarity::Modal, Term::var("z"), Term::covar("tp")),
            ),
        )],
    });
    m
}

/// `true` when memory typing rejects [`forward_reference_memory`].
pub fn forward_reference_rejected() -> bool {
    type_memory(&forward_reference_memory(), &Type::Unit).is_err()
}
