use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosynth::components::{BuildOptions, ComponentSet};
use cosynth::io::{
    emit_automaton_file, emit_dot, parse_automaton_file, parse_instance, render_synthesis_report, render_trace,
    render_verification_report,
};
use cosynth::procedures::{procedure1_with, procedure2_with, ProcedureOptions};
use cosynth::simulate::simulate_run;
use cosynth::verify::{assemble_closed_loop, verify_closed_loop, EDIT_SLOT, SUPERVISOR_SLOT};
use cosynth::Automaton;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Co-synthesis of edit functions and supervisors for opacity.
#[derive(Parser)]
#[command(name = "cosynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the EC, SC, CE and intruder automata of an instance.
    Build {
        instance: PathBuf,
        #[command(flatten)]
        build: BuildFlags,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Synthesize a supervisor and an edit function.
    Synthesize {
        instance: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        procedure: u8,
        #[command(flatten)]
        build: BuildFlags,
        /// Require nonblockingness from the first synthesis step.
        #[arg(long)]
        strict_first_nonblocking: bool,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Check a supervisor/edit-function pair against an instance.
    Verify {
        instance: PathBuf,
        #[command(flatten)]
        pair: PairFiles,
        #[command(flatten)]
        build: BuildFlags,
    },
    /// Random walk through the closed loop.
    Simulate {
        instance: PathBuf,
        #[command(flatten)]
        pair: PairFiles,
        #[command(flatten)]
        build: BuildFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Print an automaton file as a Graphviz graph.
    Export {
        automaton: PathBuf,
        #[arg(long, default_value = "automaton")]
        name: String,
    },
}

#[derive(Args)]
struct BuildFlags {
    /// Forbid the edit function from deleting editable observations.
    #[arg(long)]
    no_delete: bool,
    /// Send observed non-editable events to q0 in the edit constraints.
    #[arg(long, conflicts_with = "no_delete")]
    pass_through_q0: bool,
}

impl BuildFlags {
    fn options(&self) -> BuildOptions {
        BuildOptions { no_delete: self.no_delete, pass_through_to_q0: self.pass_through_q0, ..BuildOptions::default() }
    }
}

#[derive(Args)]
struct PairFiles {
    #[arg(long)]
    supervisor: PathBuf,
    #[arg(long)]
    edit: PathBuf,
}

/// Failure with the exit code it maps to.
struct Fail(u8, String);

fn input<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> Fail + '_ {
    move |e| Fail(EXIT_INPUT, format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(input(path))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(input(path))
}

fn components(path: &Path, flags: &BuildFlags) -> Result<ComponentSet, Fail> {
    let inst = parse_instance(&read(path)?).map_err(input(path))?;
    ComponentSet::build(&inst, &flags.options()).map_err(input(path))
}

fn load_pair(pair: &PairFiles) -> Result<(Automaton, Automaton), Fail> {
    let load = |p: &Path| parse_automaton_file(&read(p)?).map_err(input(p));
    Ok((load(&pair.edit)?, load(&pair.supervisor)?))
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Build { instance, build, out } => {
            let cs = components(&instance, &build)?;
            fs::create_dir_all(&out).map_err(input(&out))?;
            for (name, a) in [("ec", &cs.ec), ("sc", &cs.sc), ("ce", &cs.ce), ("intruder", &cs.intruder.automaton)] {
                write(&out.join(format!("{name}.aut")), &emit_automaton_file(a))?;
            }
            Ok(())
        }
        Command::Synthesize { instance, procedure, build, strict_first_nonblocking, out } => {
            let cs = components(&instance, &build)?;
            let opts = ProcedureOptions { build: build.options(), strict_first_nonblocking };
            let result = if procedure == 1 { procedure1_with(&cs, &opts) } else { procedure2_with(&cs, &opts) };
            let report = render_synthesis_report(&result);
            fs::create_dir_all(&out).map_err(input(&out))?;
            write(&out.join("report.toml"), &report)?;
            print!("{report}");
            match result.pair() {
                Some((e, s)) => {
                    write(&out.join("supervisor.aut"), &emit_automaton_file(s))?;
                    write(&out.join("edit.aut"), &emit_automaton_file(e))
                }
                None => Err(Fail(EXIT_EMPTY, format!("synthesis failed at {}", result.failure.expect("empty result")))),
            }
        }
        Command::Verify { instance, pair, build } => {
            let cs = components(&instance, &build)?;
            let (e, s) = load_pair(&pair)?;
            let b = assemble_closed_loop(&cs, &e, &s);
            let report = verify_closed_loop(&b, &cs);
            print!("{}", render_verification_report(&report));
            if report.all_hold() {
                Ok(())
            } else {
                Err(Fail(EXIT_VERIFY_FAILED, "verification failed".into()))
            }
        }
        Command::Simulate { instance, pair, build, seed, steps } => {
            let cs = components(&instance, &build)?;
            let (e, s) = load_pair(&pair)?;
            let b = assemble_closed_loop(&cs, &e, &s);
            let mut parts = [&cs.plant; 7];
            parts[..5].copy_from_slice(&cs.parts());
            parts[EDIT_SLOT] = &e;
            parts[SUPERVISOR_SLOT] = &s;
            print!("{}", render_trace(&simulate_run(&b, &parts, seed, steps)));
            Ok(())
        }
        Command::Export { automaton, name } => {
            let a = parse_automaton_file(&read(&automaton)?).map_err(input(&automaton))?;
            print!("{}", emit_dot(&a, &name));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("cosynth: {msg}");
            ExitCode::from(code)
        }
    }
}
