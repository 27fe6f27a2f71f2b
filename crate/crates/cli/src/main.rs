#![allow(clippy::result_large_err)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use lbox_core::machine::{machine_run, MachineError, Memory, RunOptions, TraceEntry};
use lbox_core::opsem::{self, RunError, StepResult};
use lbox_core::parse::{parse_program_with, parse_type, ParseError, SourceProgram};
use lbox_core::print::with_polarity;
use lbox_core::sugar::{erase_program, erase_type};
use lbox_core::typing::{check_command, TypeError, TypingContext};
use lbox_core::Type;
use lbox_harness::suite::{property_suites, SuiteConfig};
use lbox_harness::{differential_run, DiffOptions};

#[derive(Parser, Debug)]
#[command(name = "lbox", version, about = "Typecheck, run and test polarised modal sequent calculus programs")]
struct Cli {
    /// Step budget for every evaluator.
    #[arg(long, global = true, env = "LBOX_FUEL", default_value_t = 100_000)]
    fuel: usize,
    /// Print every step.
    #[arg(long, global = true)]
    trace: bool,
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Re-check boxed values and type the memory after every machine step.
    #[arg(long, global = true)]
    debug_typing: bool,
    /// Override the program's return type.
    #[arg(long, global = true, value_name = "T")]
    return_type: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and typecheck a program.
    Check { file: PathBuf },
    /// Run a program with the reduction semantics.
    Run { file: PathBuf },
    /// Run a program on the heap/stack machine.
    Machine { file: PathBuf },
    /// Run a program every way and compare the results.
    Diff { file: PathBuf },
    /// Print a program with all sugar expanded.
    Desugar { file: PathBuf },
    /// Print the box-free translation of a program.
    Erase { file: PathBuf },
    /// Run the property suites over the generated corpus.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive corpus depth.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Random programs per return type.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("--return-type: {0}")]
    ReturnType(ParseError),
    #[error("{path}: type error: {source}")]
    Type { path: String, source: TypeError },
    #[error("{0}")]
    Run(#[from] RunError),
    #[error("{0}")]
    Machine(#[from] MachineError),
    #[error("stuck after {steps} steps: {reason}")]
    Stuck { steps: usize, reason: String },
}

/// What a successful subcommand reports through the exit code.
enum Status {
    Ok,
    PropertyFailure,
}

struct Loaded {
    program: SourceProgram,
    ret: Type,
}

impl Cli {
    fn load(&self, file: &Path) -> Result<Loaded, CliError> {
        let path = file.display().to_string();
        let src = std::fs::read_to_string(file).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let over = match &self.return_type {
            Some(t) => Some(parse_type(t).map_err(CliError::ReturnType)?),
            None => None,
        };
        let program = parse_program_with(&src, over).map_err(|source| CliError::Parse { path: path.clone(), source })?;
        let ret = program.return_type();
        let ctx = TypingContext::new(ret.clone()).with_debug(self.debug_typing);
        check_command(&ctx, &program.command).map_err(|source| CliError::Type { path, source })?;
        Ok(Loaded { program, ret })
    }

    fn emit(&self, value: serde_json::Value) {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    }

    fn check(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        if self.json {
            self.emit(json!({ "ok": true, "ret": l.ret.to_string() }));
        } else {
            println!("ok: well-typed against tp : {}", l.ret);
        }
        Ok(Status::Ok)
    }

    fn run(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        let mut steps = Vec::new();
        let out = opsem::run_with(&l.program.command, self.fuel, |_, rule, next| {
            steps.push((rule, next.clone()));
        })?;
        if self.trace && !self.json {
            println!("0 start {}", with_polarity(&l.program.command));
            for (i, (rule, c)) in steps.iter().enumerate() {
                println!("{} {} {}", i + 1, rule, with_polarity(c));
            }
        }
        let value = match out.result {
            StepResult::Terminal(v) => v,
            StepResult::Stuck(reason) => return Err(CliError::Stuck { steps: out.steps, reason }),
            StepResult::Stepped(..) => unreachable!("run stops only at a normal form"),
        };
        if self.json {
            let mut doc = json!({ "value": value.to_string(), "steps": out.steps });
            if self.trace {
                doc["trace"] = steps
                    .iter()
                    .map(|(r, c)| json!({ "rule": r.label(), "command": c.to_string() }))
                    .collect();
            }
            self.emit(doc);
        } else {
            println!("{value}");
            println!("steps: {}", out.steps);
        }
        Ok(Status::Ok)
    }

    fn machine(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        let opts = RunOptions { fuel: self.fuel, debug: self.debug_typing, trace: self.trace };
        let run = machine_run(&l.program.command, &l.ret, opts)?;
        if self.json {
            let mut doc = json!({
                "value": run.value.to_string(),
                "steps": run.steps(),
                "rules": run.rules.iter().map(|r| r.label()).collect::<Vec<_>>(),
                "shrink_events": run.shrink_events(),
                "high_water": run.high_water,
                "final_depth": run.memory.depth(),
            });
            let cmd = run.command.to_string();
            let last = TraceEntry::snapshot(run.steps(), "end", cmd, &run.memory, run.high_water);
            doc["memory"] = json!({ "heap": last.heap, "stack": last.stack });
            if self.trace {
                doc["trace"] = serde_json::to_value(&run.trace).expect("trace serializes");
            }
            self.emit(doc);
            return Ok(Status::Ok);
        }
        if self.trace {
            for e in &run.trace {
                println!("{:>4} {:<18} depth={} {}", e.step, e.rule, e.depth, e.command_text);
            }
        }
        println!("{}", run.value);
        print_memory(&run.memory);
        println!("steps: {}, shrinks: {}, high water: {}", run.steps(), run.shrink_events(), run.high_water);
        Ok(Status::Ok)
    }

    fn diff(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        let opts = DiffOptions { fuel: self.fuel, ..DiffOptions::default() };
        let verdict = differential_run(&l.program.command, &l.ret, opts);
        if self.json {
            self.emit(serde_json::to_value(&verdict).expect("verdict serializes"));
        } else {
            println!("{}", verdict.summary());
            for f in &verdict.failures {
                println!("  {}: {}", f.property, f.detail);
            }
        }
        Ok(if verdict.ok() { Status::Ok } else { Status::PropertyFailure })
    }

    fn desugar(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        self.print_program(SourceProgram { ret: Some(l.ret), command: l.program.command });
        Ok(Status::Ok)
    }

    fn erase(&self, file: &Path) -> Result<Status, CliError> {
        let l = self.load(file)?;
        let command = erase_program(&l.program.command, &l.ret);
        self.print_program(SourceProgram { ret: Some(erase_type(&l.ret)), command });
        Ok(Status::Ok)
    }

    fn print_program(&self, p: SourceProgram) {
        if self.json {
            let ret = p.return_type().to_string();
            self.emit(json!({ "ret": ret, "command": p.command.to_string() }));
        } else {
            println!("{p}");
        }
    }

    fn suite(&self, seed: u64, depth: usize, samples: usize) -> Result<Status, CliError> {
        let cfg = SuiteConfig {
            seed,
            depth,
            erasure_depth: depth.min(SuiteConfig::default().erasure_depth),
            samples,
            fuel: self.fuel,
            ..SuiteConfig::default()
        };
        let report = property_suites(cfg);
        if self.json {
            self.emit(serde_json::to_value(&report).expect("report serializes"));
        } else {
            println!("{report}");
        }
        Ok(if report.ok() { Status::Ok } else { Status::PropertyFailure })
    }

    fn dispatch(&self) -> Result<Status, CliError> {
        match &self.command {
            Cmd::Check { file } => self.check(file),
            Cmd::Run { file } => self.run(file),
            Cmd::Machine { file } => self.machine(file),
            Cmd::Diff { file } => self.diff(file),
            Cmd::Desugar { file } => self.desugar(file),
            Cmd::Erase { file } => self.erase(file),
            Cmd::Suite { seed, depth, samples } => self.suite(*seed, *depth, *samples),
        }
    }
}

fn print_memory(m: &Memory) {
    println!("heap:");
    for b in &m.heap {
        println!("  {b}");
    }
    println!("stack ({} frames):", m.depth());
    for (i, f) in m.stack.iter().enumerate() {
        let items: Vec<String> = f.bindings.iter().map(|b| b.to_string()).collect();
        println!("  {i}: {}", items.join(", "));
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; status 2 is reserved for property failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.dispatch() {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
