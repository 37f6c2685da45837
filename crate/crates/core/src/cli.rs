//! The `entropy-nand` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (one `error:` line on
//! stderr), 2 on a usage error. Machine-readable output goes to stdout.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::circuits::{
    evaluate_netlist, netlist_report, parse_expression, synthesize_nand_netlist, EvalMode, NandNetlist,
};
use crate::error::{Error, Result};
use crate::gates::{self, GateReadout, TruthTable};
use crate::network::{NetworkFile, ObservationNetwork};
use crate::patterns::{self, classify_pattern, enumerate_patterns};
use crate::thermo::{run_monte_carlo, ThermoConfig};
use crate::units::{transition_profile, ProfileMode};

#[derive(Debug, Parser)]
#[command(name = "entropy-nand", version, about = "Observation networks, entropy gates and their thermodynamic analog")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every observation pattern with N observations, up to isomorphism.
    Enumerate {
        /// Number of observations (1..=5).
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PatternFormat::Names)]
        format: PatternFormat,
    },
    /// Classify the network stored in a network JSON file.
    Classify {
        /// Network file: {"temperature", "elements": [{"id", "role"}], "edges": [{"observer", "observed", "order"}]}.
        #[arg(long)]
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassifyFormat::Text)]
        format: ClassifyFormat,
        /// Print the entropy ledger as CSV instead of the classification.
        #[arg(long)]
        ledger: bool,
    },
    /// Evaluate the two-observation gate. Prints 1 or 0 unless --trace is given.
    Gate {
        #[arg(long, value_enum, default_value_t = CliGateKind::Nand)]
        kind: CliGateKind,
        /// Two comma-separated bits, e.g. 1,0.
        #[arg(long, value_parser = parse_inputs)]
        inputs: (bool, bool),
        /// Print the full evaluation trace (json) or the entropy ledger (csv) instead of the bit.
        #[arg(long, value_enum)]
        trace: Option<TraceFormat>,
        /// Also write the gate network as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// NAND reads true while u is below this value; must lie in (0.5, 1].
        #[arg(long, default_value_t = 0.75)]
        nand_threshold: f64,
        /// NOR reads true while u is below this value; must lie in (0, 0.5].
        #[arg(long, default_value_t = 0.25)]
        nor_threshold: f64,
    },
    /// Exhaustively list the two-input truth tables reachable with N observations.
    Search {
        /// Number of observations (1..=3).
        #[arg(long)]
        n: usize,
        /// Maximum number of elements (3..=6).
        #[arg(long, default_value_t = 6)]
        budget: usize,
        /// Print all 16 tables as CSV with a reachable column.
        #[arg(long)]
        all: bool,
    },
    /// Lower a boolean expression (!, &, ^, |) to a NAND netlist.
    Synthesize {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Emit::Netlist)]
        emit: Emit,
        /// Temperature in kelvin for the energy budget in the report.
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
    },
    /// Evaluate a NAND netlist, for one assignment or over all assignments.
    EvalNetlist {
        /// Netlist text file (`inputs:` header, `gN = NAND(x, y)` lines, `outputs:` footer).
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        netlist: Option<PathBuf>,
        /// Synthesize this expression instead of reading a file.
        #[arg(long)]
        expr: Option<String>,
        /// Assignment such as a=1,b=0. Without it every assignment is printed as CSV.
        #[arg(long)]
        assign: Option<String>,
        #[arg(long, value_enum, default_value_t = CliEvalMode::Entropy)]
        mode: CliEvalMode,
    },
    /// Monte Carlo run of the heat-reservoir gate.
    Simulate {
        /// Config JSON; the abstract unit configuration is used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        report: ReportFormat,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config noise sigma.
        #[arg(long)]
        noise_sigma: Option<f64>,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        threads: u16,
    },
    /// Sample the entropy profile of a one-bit transition on [0, 1].
    Profile {
        #[arg(long, value_enum)]
        mode: CliProfileMode,
        /// Number of evenly spaced samples, at least 2.
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        samples: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PatternFormat {
    Names,
    Labels,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassifyFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliGateKind {
    Nand,
    Nor,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TraceFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Netlist,
    Dot,
    Report,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliEvalMode {
    Pure,
    Entropy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliProfileMode {
    Kronecker,
    #[value(alias = "binary-entropy")]
    Hp,
}

fn parse_bit(s: &str) -> std::result::Result<bool, String> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("`{other}` is not a bit (expected 0 or 1)")),
    }
}

fn parse_inputs(s: &str) -> std::result::Result<(bool, bool), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| "expected two bits such as 1,0".to_owned())?;
    Ok((parse_bit(a)?, parse_bit(b)?))
}

fn parse_assignment(s: &str) -> Result<BTreeMap<String, bool>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let (k, v) =
                pair.split_once('=').ok_or_else(|| Error::Domain(format!("assignment `{pair}` is not name=bit")))?;
            Ok((k.trim().to_owned(), parse_bit(v).map_err(Error::Domain)?))
        })
        .collect()
}

fn bit(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// Parses `argv` (including the program name) and runs the subcommand on the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

#[derive(Serialize)]
struct PatternRecord {
    kind: patterns::PatternKind,
    canonical_label: String,
    network: NetworkFile,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Enumerate { n, format } => {
            let found = enumerate_patterns(n)?;
            let records: Vec<PatternRecord> = found
                .iter()
                .map(|p| {
                    let class = classify_pattern(p)?;
                    Ok(PatternRecord {
                        kind: class.kind,
                        canonical_label: class.canonical_label.to_string(),
                        network: p.to_file(),
                    })
                })
                .collect::<Result<_>>()?;
            match format {
                PatternFormat::Names => {
                    for r in &records {
                        writeln!(out, "{}", r.kind)?;
                    }
                }
                PatternFormat::Labels => {
                    for r in &records {
                        writeln!(out, "{}\t{}", r.canonical_label, r.kind)?;
                    }
                }
                PatternFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&records)?)?,
                PatternFormat::Dot => {
                    for (p, r) in found.iter().zip(&records) {
                        write!(out, "{}", patterns::to_dot(p, Some(r.kind.name())))?;
                    }
                }
            }
        }
        Command::Classify { network, format, ledger } => {
            let net = ObservationNetwork::from_json(&fs::read_to_string(network)?)?;
            if ledger {
                write!(out, "{}", net.ledger_csv())?;
                return Ok(());
            }
            let class = classify_pattern(&net)?;
            match format {
                ClassifyFormat::Text => writeln!(out, "{}", class.kind)?,
                ClassifyFormat::Json => {
                    let v = serde_json::json!({
                        "kind": class.kind,
                        "canonical_label": class.canonical_label.to_string(),
                        "observations": net.observation_count(),
                        "weakly_connected": patterns::is_weakly_connected(&net),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
            }
        }
        Command::Gate { kind, inputs, trace, dot, nand_threshold, nor_threshold } => {
            let readout = GateReadout::new(GateReadout::default().normalization_max, nand_threshold, nor_threshold)?;
            let kind = match kind {
                CliGateKind::Nand => gates::GateKind::Nand,
                CliGateKind::Nor => gates::GateKind::Nor,
            };
            let (output, state) = gates::evaluate_with(inputs.0, inputs.1, kind, &readout);
            if let Some(path) = dot {
                let label = classify_pattern(&state.network)?.kind;
                fs::write(path, patterns::to_dot(&state.network, Some(label.name())))?;
            }
            match trace {
                None => writeln!(out, "{}", bit(output))?,
                Some(TraceFormat::Json) => writeln!(out, "{}", state.trace_json()?)?,
                Some(TraceFormat::Csv) => write!(out, "{}", state.network.ledger_csv())?,
            }
        }
        Command::Search { n, budget, all } => {
            let reach = gates::search_reachable_tables(n, budget)?;
            if all {
                writeln!(out, "table,bits,reachable")?;
                for t in (0..16).map(TruthTable) {
                    writeln!(out, "{},{},{}", t.name(), t.bits(), reach.contains(t))?;
                }
            } else {
                for t in reach.tables() {
                    writeln!(out, "{t}")?;
                }
            }
        }
        Command::Synthesize { expr, emit, temperature } => {
            let netlist = synthesize_nand_netlist(&parse_expression(&expr)?);
            match emit {
                Emit::Netlist => write!(out, "{netlist}")?,
                Emit::Dot => write!(out, "{}", netlist.to_dot())?,
                Emit::Report => {
                    let report = netlist_report(&netlist, temperature)?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
                }
            }
        }
        Command::EvalNetlist { netlist, expr, assign, mode } => {
            let netlist: NandNetlist = match (netlist, expr) {
                (Some(path), _) => fs::read_to_string(path)?.parse()?,
                (None, Some(expr)) => synthesize_nand_netlist(&parse_expression(&expr)?),
                (None, None) => unreachable!("clap requires one of --netlist and --expr"),
            };
            let mode = match mode {
                CliEvalMode::Pure => EvalMode::Pure,
                CliEvalMode::Entropy => EvalMode::Entropy,
            };
            let fmt_outputs = |v: Vec<bool>| v.into_iter().map(|b| bit(b).to_string()).collect::<Vec<_>>().join(",");
            match assign {
                Some(text) => {
                    let values = evaluate_netlist(&netlist, &parse_assignment(&text)?, mode)?;
                    writeln!(out, "{}", fmt_outputs(values))?;
                }
                None => {
                    let names = netlist.inputs().to_vec();
                    if names.len() > 16 {
                        return Err(Error::Unsupported(format!("{} inputs is too many to sweep", names.len())));
                    }
                    let outs: Vec<String> = (0..netlist.outputs().len()).map(|i| format!("out{i}")).collect();
                    writeln!(out, "{}", names.iter().chain(&outs).cloned().collect::<Vec<_>>().join(","))?;
                    for row in 0u32..(1 << names.len()) {
                        let assignment: BTreeMap<String, bool> = names
                            .iter()
                            .enumerate()
                            .map(|(i, n)| (n.clone(), row >> (names.len() - 1 - i) & 1 == 1))
                            .collect();
                        let values = evaluate_netlist(&netlist, &assignment, mode)?;
                        let ins: Vec<String> = names.iter().map(|n| bit(assignment[n]).to_string()).collect();
                        writeln!(out, "{},{}", ins.join(","), fmt_outputs(values))?;
                    }
                }
            }
        }
        Command::Simulate { config, trials, report, seed, noise_sigma, threads } => {
            let mut config = match config {
                Some(path) => ThermoConfig::from_json(&fs::read_to_string(path)?)?,
                None => ThermoConfig::default(),
            };
            if let Some(sigma) = noise_sigma {
                config.noise_sigma = sigma;
            }
            let seed = seed.unwrap_or(config.seed);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(usize::from(threads))
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            let result = pool.install(|| run_monte_carlo(&config, trials, seed))?;
            match report {
                ReportFormat::Csv => write!(out, "{}", result.to_csv())?,
                ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?,
            }
        }
        Command::Profile { mode, samples } => {
            let mode = match mode {
                CliProfileMode::Kronecker => ProfileMode::Kronecker,
                CliProfileMode::Hp => ProfileMode::BinaryEntropy,
            };
            writeln!(out, "t,entropy_nats")?;
            let last = f64::from(samples - 1);
            for i in 0..samples {
                let t = f64::from(i) / last;
                writeln!(out, "{t},{}", transition_profile(t, mode)?)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("entropy-nand").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn input_parsing() {
        assert_eq!(parse_inputs("1,0"), Ok((true, false)));
        assert_eq!(parse_inputs(" 0 , 1 "), Ok((false, true)));
        assert!(parse_inputs("1,2").is_err());
        assert!(parse_inputs("1").is_err());
        assert!(!parse_assignment("a=1, b=0").unwrap()["b"]);
        assert!(parse_assignment("a").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["gate", "--kind", "nand", "--inputs", "1,1"]).0, 0);
        assert_eq!(run_capture(&["gate", "--inputs", "1,2"]).0, 2);
        assert_eq!(run_capture(&["bogus"]).0, 2);
        assert_eq!(run_capture(&["gate", "--inputs", "1,1", "--unknown"]).0, 2);
        let (code, _, err) = run_capture(&["enumerate", "--n", "9"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
        assert_eq!(err.lines().count(), 1);
    }
}
