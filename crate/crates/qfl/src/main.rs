//! Command-line front end for the labeling pipeline:
//! parse, compile, estimate, simulate, sample, verify, solve, export.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qfl::compiler::{compile_qfl, estimate_resources};
use qfl::error::Error;
use qfl::graph::{parse_dimacs, ColoringInstance};
use qfl::ir::Circuit;
use qfl::{search, sim, verify};

/// Fixed default seed so casual runs are reproducible.
const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "qfl",
    version,
    about = "Compile vertex-coloring instances into feasibility-labeling circuits, simulate, and verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Shared ancilla block, reset after every edge (fewer qubits).
    Reset,
    /// Fresh ancilla block per edge (shallower circuit).
    NoReset,
}

impl Mode {
    fn use_reset(self) -> bool {
        self == Mode::Reset
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum View {
    /// Full-width bitstrings.
    Full,
    /// Only the data bits, with the final label bit prepended.
    DataLabel,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an instance and write the circuit plus its layout sidecar.
    Compile {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
        #[arg(long, value_enum, default_value_t = Mode::Reset)]
        mode: Mode,
        /// Skip the Hadamard layer on the data qubits.
        #[arg(long)]
        no_prep: bool,
        /// Circuit output path (default: <instance stem>.circuit.txt).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Layout sidecar path (default: <instance stem>.layout.txt).
        #[arg(long)]
        layout_out: Option<PathBuf>,
    },
    /// Print the closed-form qubit/depth predictions for both modes.
    Estimate {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
    },
    /// Run the circuit exactly and print the nonzero basis states.
    Simulate {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
        #[arg(long, value_enum, default_value_t = Mode::Reset)]
        mode: Mode,
        #[arg(long)]
        no_prep: bool,
        #[arg(long, value_enum, default_value_t = View::Full)]
        view: View,
    },
    /// Sample measurement shots and write them as CSV.
    Sample {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
        #[arg(long, value_enum, default_value_t = Mode::Reset)]
        mode: Mode,
        #[arg(long, default_value_t = 20000)]
        shots: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = View::Full)]
        view: View,
        /// CSV output path (default: <instance stem>.counts.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification checks for an instance; nonzero exit on failure.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
        /// Also write the machine-readable summary.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Extract the feasible colorings, exactly or by sampled post-selection.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        colors: u32,
        #[arg(long, value_enum, default_value_t = Mode::Reset)]
        mode: Mode,
        /// Post-select sampled shots instead of exact readout.
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 20000)]
        shots: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// CSV output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a circuit file and re-emit it in canonical form.
    Export {
        circuit: PathBuf,
        /// Output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rewrite negative controls as X-conjugated positive controls.
        #[arg(long)]
        expand_negative_controls: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::ResourceLimit(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn load_instance(path: &Path, colors: u32) -> Result<ColoringInstance, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let (instance, report) = parse_dimacs(&text, colors)?;
    if report.edge_count_mismatch {
        eprintln!(
            "warning: header declares {} edges, {} remain after deduplication",
            report.declared_edges,
            instance.edge_count()
        );
    }
    Ok(instance)
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn derived_path(instance: &Path, suffix: &str) -> PathBuf {
    let stem = instance
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "circuit".into());
    instance.with_file_name(format!("{stem}.{suffix}"))
}

fn view_counts(
    counts: &std::collections::BTreeMap<u64, usize>,
    layout: &qfl::QubitLayout,
    width: usize,
    view: View,
) -> (Vec<sim::MeasurementRecord>, usize) {
    match view {
        View::Full => (sim::counts_to_records(counts, width), width),
        View::DataLabel => {
            let mut keep: Vec<usize> = (0..layout.data_qubits()).collect();
            if let Some(q) = layout.final_label() {
                keep.push(q);
            }
            let projected = sim::project_counts(counts, &keep);
            (sim::counts_to_records(&projected, keep.len()), keep.len())
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Compile {
            instance,
            colors,
            mode,
            no_prep,
            out,
            layout_out,
        } => {
            let inst = load_instance(&instance, colors)?;
            let (circuit, layout) = compile_qfl(&inst, mode.use_reset(), !no_prep)?;
            let estimate = estimate_resources(&inst, mode.use_reset());
            let report = circuit.depth_report();

            println!(
                "instance: n={} k={} g={} m={}",
                inst.vertex_count(),
                inst.color_count(),
                inst.edge_count(),
                inst.bits_per_vertex()
            );
            println!("qubits: {}", circuit.width());
            println!("gates: {}", circuit.len());
            for (kind, count) in report.kind_gate_counts() {
                let name = kind.map_or("unannotated", |k| k.name());
                println!("  {name}: {count}");
            }
            println!("predicted depth: {}", estimate.formula_depth);
            println!("stage depth sum: {}", report.formula_depth);
            println!("asap depth: {}", report.asap_depth);
            if circuit.width() > sim::sim_cap() {
                eprintln!(
                    "warning: width {} exceeds the simulation cap {}; dense runs will be refused",
                    circuit.width(),
                    sim::sim_cap()
                );
            }

            let circuit_path = out.unwrap_or_else(|| derived_path(&instance, "circuit.txt"));
            let layout_path = layout_out.unwrap_or_else(|| derived_path(&instance, "layout.txt"));
            write_text(&circuit_path, &circuit.to_text())?;
            write_text(&layout_path, &layout.to_sidecar())?;
            println!("wrote {} and {}", circuit_path.display(), layout_path.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Estimate { instance, colors } => {
            let inst = load_instance(&instance, colors)?;
            println!(
                "instance: n={} k={} g={} m={}",
                inst.vertex_count(),
                inst.color_count(),
                inst.edge_count(),
                inst.bits_per_vertex()
            );
            println!("mode      qubits  depth  per-edge (subtraction/or/and/reset)");
            for use_reset in [true, false] {
                let est = estimate_resources(&inst, use_reset);
                let reset_term = est
                    .per_edge
                    .reset
                    .map_or("-".to_string(), |r| r.to_string());
                println!(
                    "{:<9} {:<7} {:<6} {}/{}/{}/{}",
                    if use_reset { "reset" } else { "no-reset" },
                    est.qubits,
                    est.formula_depth,
                    est.per_edge.subtraction,
                    est.per_edge.or,
                    est.per_edge.and,
                    reset_term
                );
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate {
            instance,
            colors,
            mode,
            no_prep,
            view,
        } => {
            let inst = load_instance(&instance, colors)?;
            let (circuit, layout) = compile_qfl(&inst, mode.use_reset(), !no_prep)?;
            let state = sim::run(&circuit, None)?;
            let label_qubit = layout.final_label();
            let keep: Vec<usize> = match view {
                View::Full => (0..circuit.width()).collect(),
                View::DataLabel => {
                    let mut keep: Vec<usize> = (0..layout.data_qubits()).collect();
                    keep.extend(label_qubit);
                    keep
                }
            };

            println!("state probability label");
            let nonzero = state.nonzero_states();
            for &index in &nonzero {
                let mut projected = 0u64;
                for (i, &q) in keep.iter().enumerate() {
                    projected |= (index >> q & 1) << i;
                }
                let label = label_qubit
                    .map_or(' ', |q| if index >> q & 1 == 1 { '1' } else { '0' });
                println!(
                    "{} {:.10} {label}",
                    sim::bitstring(projected, keep.len()),
                    state.probability(index)
                );
            }
            println!("nonzero states: {}", nonzero.len());
            Ok(ExitCode::SUCCESS)
        }

        Command::Sample {
            instance,
            colors,
            mode,
            shots,
            seed,
            view,
            out,
        } => {
            if shots == 0 {
                return Err(Error::InvalidInstance("shots must be >= 1".into()));
            }
            let inst = load_instance(&instance, colors)?;
            let (circuit, layout) = compile_qfl(&inst, mode.use_reset(), true)?;
            let state = sim::run(&circuit, None)?;
            let counts = state.sample_counts(shots, seed);
            let (records, _) = view_counts(&counts, &layout, circuit.width(), view);
            let csv = sim::records_to_csv(&records);
            let path = out.unwrap_or_else(|| derived_path(&instance, "counts.csv"));
            write_text(&path, &csv)?;
            println!(
                "sampled {shots} shots (seed {seed}), {} distinct outcomes, wrote {}",
                records.len(),
                path.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            instance,
            colors,
            csv_out,
        } => {
            let inst = load_instance(&instance, colors)?;
            let name = instance
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "instance".into());
            let mut reports = vec![verify::check_so_reference_table()?];
            if (1..=4).contains(&inst.bits_per_vertex()) {
                reports.push(verify::check_label_matches_inequality(inst.bits_per_vertex())?);
            }
            reports.extend(verify::check_instance(&name, &inst)?);
            print!("{}", verify::reports_to_text(&reports));
            if let Some(path) = csv_out {
                write_text(&path, &verify::reports_to_csv(&reports))?;
            }
            if verify::all_passed(&reports) {
                println!("all {} checks passed", reports.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verification failed");
                Ok(ExitCode::FAILURE)
            }
        }

        Command::Solve {
            instance,
            colors,
            mode,
            sampled,
            shots,
            seed,
            out,
        } => {
            if sampled && shots == 0 {
                return Err(Error::InvalidInstance("shots must be >= 1".into()));
            }
            let inst = load_instance(&instance, colors)?;
            let solutions = if sampled {
                search::extract_feasible_sampled(&inst, shots, seed)?
            } else {
                search::extract_feasible_exact(&inst, mode.use_reset())?
            };
            let csv = search::solutions_to_csv(&inst, &solutions);
            match out {
                Some(path) => {
                    write_text(&path, &csv)?;
                    println!("{} solutions, wrote {}", solutions.assignments.len(), path.display());
                }
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Export {
            circuit,
            out,
            expand_negative_controls,
        } => {
            let text = fs::read_to_string(&circuit).map_err(|e| Error::Parse {
                line: 0,
                message: format!("cannot read {}: {e}", circuit.display()),
            })?;
            let mut parsed = Circuit::from_text(&text)?;
            if expand_negative_controls {
                parsed = parsed.expand_negative_controls();
            }
            let canonical = parsed.to_text();
            match out {
                Some(path) => write_text(&path, &canonical)?,
                None => print!("{canonical}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
