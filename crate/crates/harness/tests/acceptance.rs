//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always appear in the output. Set `LBOX_BLESS=1` to
//! rewrite the golden traces.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lbox_core::machine::{Machine, MachineRule, MachineStep};
use lbox_core::opsem::{self, Rule, StepResult};
use lbox_core::parse::parse_program;
use lbox_core::subst::alpha_eq_command;
use lbox_core::term::Term;
use lbox_harness::diff::machine_trace;
use lbox_harness::programs;
use lbox_harness::suite::{forward_reference_rejected, property_suites, Report, SuiteConfig};

/// Budget for the nine single-step golden tests.
const RULE_TIME_LIMIT: Duration = Duration::from_secs(1);
/// Budget for the full depth-4 sweep.
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(60);
const CORPUS_DEPTH: usize = 4;
const ERASURE_DEPTH: usize = 3;
const FUEL: usize = 100_000;
/// Expected frames above the baseline when the counterexample reaches `< y | a >`.
const COUNTEREXAMPLE_FRAMES: usize = 3;
const MODAL_CALL_SHRINKS: usize = 2;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Each rule program steps once, by its own rule, to the hand reduct.
fn rule_exactness() -> Outcome {
    let cases: [(&str, Rule, &str); 9] = [
        ("rule1_mu", Rule::Mu, "< inr () | mu~{inl x:1 -> < x | tp > | inr y:1 -> < () | tp >} >"),
        ("rule2_mutilde", Rule::MuTilde, "< box () | mu~box x:1. < x | tp > >"),
        ("rule3_unit", Rule::Unit, "< () | mu~x:1. < x | tp > >"),
        (
            "rule4_tensor",
            Rule::Tensor,
            "ret 1 + 1; < inl () | mu~{inl u:1 -> < inr () | tp > | inr w:1 -> < inl () | tp >} >",
        ),
        ("rule5_sum", Rule::Sum, "< () | mu~(). < () | tp > >"),
        ("rule6_box", Rule::Box, "< box () | mu~box z:1. < z | tp > >"),
        ("rule7_not", Rule::Not, "< ((), ()) | mu~(y:1, z:1). < y | tp > >"),
        ("rule8_par", Rule::Par, "< mu[x:1]. < x | tp > | [()] >"),
        ("rule9_with", Rule::With, "< () | mu~(). < () | tp > >"),
    ];
    let start = Instant::now();
    let mut bad = Vec::new();
    for (name, rule, reduct) in cases {
        let prog = programs::load(name).expect("golden program parses");
        let want = parse_program(reduct).expect("reduct parses").command;
        match opsem::step(&prog.command) {
            StepResult::Stepped(r, got) if r == rule && alpha_eq_command(&got, &want) => {}
            other => bad.push(format!("{name}: {other:?}")),
        }
    }
    let t = start.elapsed();
    if t >= RULE_TIME_LIMIT {
        bad.push(format!("took {t:?}"));
    }
    check(bad.is_empty(), if bad.is_empty() { format!("9/9 rules in {t:?}") } else { bad.join("; ") })
}

fn failures(report: &Report, props: &[&str]) -> (usize, usize, Vec<String>) {
    let mut checked = 0;
    let mut failed = 0;
    let mut witnesses = Vec::new();
    for p in props {
        let r = report.property(p).unwrap_or_else(|| panic!("property {p} missing"));
        checked = checked.max(r.checked);
        failed += r.failures;
        if let Some(w) = &r.witness {
            witnesses.push(format!("{p}: {w}"));
        }
    }
    (checked, failed, witnesses)
}

fn from_report(report: &Report, props: &[&str], extra: Option<String>) -> Outcome {
    let (checked, failed, witnesses) = failures(report, props);
    let mut detail = format!("{checked} programs, {failed} violations");
    if let Some(e) = &extra {
        detail.push_str(&format!(", {e}"));
    }
    for w in witnesses {
        detail.push_str(&format!("; {w}"));
    }
    check(failed == 0, detail)
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.trace.json"))
}

/// Compares the JSON trace with the stored golden one, byte for byte.
fn golden_trace(name: &str) -> Result<(), String> {
    let prog = programs::load(name).map_err(|e| e.to_string())?;
    let run = machine_trace(&prog.command, &prog.return_type(), FUEL)?;
    let json = serde_json::to_string_pretty(&run.trace).map_err(|e| e.to_string())? + "\n";
    let path = golden_path(name);
    if std::env::var_os("LBOX_BLESS").is_some() {
        std::fs::write(&path, &json).map_err(|e| e.to_string())?;
    }
    let stored = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored == json {
        Ok(())
    } else {
        Err(format!("{name} trace differs from {}", path.display()))
    }
}

fn stackability() -> Outcome {
    let mut bad = Vec::new();
    let mut notes = Vec::new();

    let call = programs::load("modal_call").expect("modal_call parses");
    match machine_trace(&call.command, &call.return_type(), FUEL) {
        Ok(run) => {
            let shrinks = run.shrink_events();
            let initial = run.depths[0];
            let last = *run.depths.last().unwrap_or(&initial);
            notes.push(format!("modal_call: {shrinks} shrink events, depth {initial} -> {last}"));
            if shrinks != MODAL_CALL_SHRINKS || last != initial {
                bad.push(format!("modal_call: expected {MODAL_CALL_SHRINKS} shrinks and depth {initial}"));
            }
        }
        Err(e) => bad.push(format!("modal_call: {e}")),
    }

    let cex = programs::load("counterexample").expect("counterexample parses");
    let mut m = Machine::new(cex.command.clone(), cex.return_type());
    let baseline = m.depth();
    let mut shrunk = false;
    let mut reached = None;
    for _ in 0..FUEL {
        let is_target = matches!(
            (&m.command.left, &m.command.right),
            (Term::Var(y), Term::CoVar(a)) if y.base() == "y" && a.base() == "a"
        );
        if is_target {
            reached = Some(m.depth() - baseline);
            break;
        }
        match m.step() {
            Ok(MachineStep::Stepped(r)) => shrunk |= r == MachineRule::EvalBox,
            other => {
                bad.push(format!("counterexample stopped early: {other:?}"));
                break;
            }
        }
    }
    match reached {
        Some(frames) => {
            notes.push(format!("counterexample: {frames} frames above baseline at < y | a >, shrink={shrunk}"));
            if frames != COUNTEREXAMPLE_FRAMES || shrunk {
                bad.push(format!(
                    "counterexample: expected {COUNTEREXAMPLE_FRAMES} frames and no shrink, got {frames} frames"
                ));
            }
        }
        None => bad.push("counterexample never reached < y | a >".into()),
    }

    for name in ["modal_call", "counterexample"] {
        if let Err(e) = golden_trace(name) {
            bad.push(e);
        }
    }
    if bad.is_empty() {
        check(true, notes.join("; ") + "; golden traces match")
    } else {
        check(false, format!("{} | {}", bad.join("; "), notes.join("; ")))
    }
}

fn main() -> ExitCode {
    let t = Instant::now();
    let report = property_suites(SuiteConfig {
        depth: CORPUS_DEPTH,
        erasure_depth: ERASURE_DEPTH,
        samples: 0,
        fuel: FUEL,
        ..SuiteConfig::default()
    });
    let sweep = t.elapsed();
    let sizes: Vec<String> = report.corpus.iter().map(|c| format!("{}:{}", c.ret, c.commands)).collect();
    println!("corpus depth<={CORPUS_DEPTH}: {}", sizes.join(", "));

    let criteria: Vec<(&str, Outcome)> = vec![
        ("rule-exactness", rule_exactness()),
        ("determinism", from_report(&report, &["determinism"], None)),
        ("subject-reduction", from_report(&report, &["subject-reduction"], None)),
        ("evaluation", {
            let mut o = from_report(
                &report,
                &["evaluation", "progress", "modal-restriction"],
                Some(format!("sweep {sweep:?}")),
            );
            if sweep >= SWEEP_TIME_LIMIT {
                o.ok = false;
            }
            o
        }),
        (
            "machine-correctness",
            from_report(&report, &["machine-correctness", "machine-evaluation", "machine-progress"], None),
        ),
        ("simulation", from_report(&report, &["simulation"], None)),
        ("stackability", stackability()),
        (
            "erasure",
            from_report(&report, &["erasure-typing", "erasure-simulation", "erasure-evaluation"], None),
        ),
        ("memory-typing", {
            let mut o = from_report(&report, &["memory-typing", "machine-subject-reduction"], None);
            let rejected = forward_reference_rejected();
            o.detail.push_str(&format!(", forward reference rejected: {rejected}"));
            o.ok &= rejected;
            o
        }),
    ];

    let mut all = true;
    for (i, (name, o)) in criteria.iter().enumerate() {
        println!("criterion {} {:<20} {} {}", i + 1, name, if o.ok { "PASS" } else { "FAIL" }, o.detail);
        all &= o.ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
