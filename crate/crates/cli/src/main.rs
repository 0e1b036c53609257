use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stacksort_core::{Error, MachineSpec, PatternSpec, Permutation};

mod commands;
mod report;

use report::{Exit, Report};

/// Default size limits for exhaustive scans over S_n.
const SINGLE_PASS_BOUND: usize = 9;
const QUADRATIC_BOUND: usize = 8;

#[derive(Parser)]
#[command(name = "stacksort", version, about = "Pattern-avoiding stack-sorting machines")]
struct Cli {
    /// Output format. Not every command supports csv or bfile.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Worker threads for exhaustive scans. Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Raise the scan size limit to this n (at most 10).
    #[arg(long, global = true, value_name = "N")]
    unsafe_n: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
    Bfile,
}

#[derive(Args, Clone)]
pub struct MachineArgs {
    /// Forbidden patterns, comma separated (e.g. 132 or 123,321).
    #[arg(long, required = true)]
    pattern: String,

    /// consecutive, classical, or vincular:<positions> (e.g. vincular:12).
    #[arg(long, default_value = "consecutive", value_parser = parse_mode)]
    mode: ModeArg,
}

#[derive(Clone, Debug)]
pub enum ModeArg {
    Consecutive,
    Classical,
    Vincular(Vec<usize>),
}

fn parse_mode(s: &str) -> Result<ModeArg, String> {
    match s {
        "consecutive" => Ok(ModeArg::Consecutive),
        "classical" => Ok(ModeArg::Classical),
        _ => {
            let Some(pos) = s.strip_prefix("vincular:") else {
                return Err(format!("unknown mode {s:?}"));
            };
            let digits: Vec<&str> = if pos.contains(',') {
                pos.split(',').collect()
            } else {
                pos.split("").filter(|t| !t.is_empty()).collect()
            };
            digits
                .iter()
                .map(|d| d.trim().parse::<usize>().map_err(|_| format!("bad adjacency position {d:?}")))
                .collect::<Result<_, _>>()
                .map(ModeArg::Vincular)
        }
    }
}

impl MachineArgs {
    fn spec(&self) -> Result<MachineSpec, Error> {
        let pats = self
            .pattern
            .split(',')
            .map(|tok| {
                let body: Permutation = tok.parse()?;
                match &self.mode {
                    ModeArg::Consecutive => PatternSpec::consecutive(body),
                    ModeArg::Classical => PatternSpec::classical(body),
                    ModeArg::Vincular(pos) => PatternSpec::vincular(body, pos),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        MachineSpec::new(pats)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConjectureName {
    FineTransform,
    GeneralPeriodic,
    #[value(name = "2n-4")]
    TwoNMinus4,
    FertilitySpectrum,
    VnLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    Sortable,
    MaxFertility,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the machine to each input (or to each line of stdin).
    Map {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        input: Vec<String>,
    },
    /// Show the push/pop sequence for one input.
    Trace {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        input: String,
        #[arg(long)]
        show_stack: bool,
    },
    /// Iterate the machine until a state repeats.
    Orbit {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        input: String,
    },
    /// Periodic points of the machine on S_n.
    Periodic {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        n: usize,
    },
    /// Steps needed to reach a periodic point, for one input or the maximum over S_n.
    Sd {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        input: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Preimages of a target permutation.
    Fiber {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        target: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Largest fiber over S_n and the targets attaining it.
    MaxFertility {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        n: usize,
    },
    /// Fiber sizes seen for all n up to n-max.
    Spectrum {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        n_max: usize,
    },
    /// Permutations of length n that the machine sorts.
    Sortable {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "list")]
        count_only: bool,
        #[arg(long)]
        list: bool,
    },
    /// Dyck path of a 132-machine-sortable permutation, or the inverse.
    Phi {
        #[arg(long, conflicts_with = "invert", required_unless_present = "invert")]
        perm: Option<String>,
        #[arg(long, value_name = "UD-WORD")]
        invert: Option<String>,
    },
    /// Whether the consecutive pattern's sortable set is a permutation class.
    ClassCheck {
        #[arg(long)]
        pattern: String,
        /// Also check closure by brute force up to this length.
        #[arg(long)]
        brute_n: Option<usize>,
    },
    /// Print a named integer sequence.
    Seq {
        /// catalan, motzkin, genmotzkin:<k>, fine, fine-transform, motzkin-diff, central-binomial
        #[arg(long)]
        name: String,
        #[arg(long)]
        upto: usize,
        /// Same as --format bfile.
        #[arg(long)]
        bfile: bool,
    },
    /// Check a conjecture for every size up to n.
    Conjecture {
        #[arg(long, value_enum)]
        name: ConjectureName,
        #[arg(long)]
        n: usize,
        /// Pattern for general-periodic (default 1234) and fertility-spectrum (default 132).
        #[arg(long)]
        pattern: Option<String>,
        /// Report elapsed_ms instead of null.
        #[arg(long)]
        timings: bool,
    },
    /// Recompute a reference table and compare it with the bundled values.
    Reproduce {
        #[arg(value_enum)]
        table: TableName,
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
}

pub struct Bounds {
    pub single: usize,
    pub quadratic: usize,
    pub overridden: bool,
}

impl Bounds {
    /// The limit for a conjecture whose default is `default`.
    pub fn or(&self, default: usize) -> usize {
        if self.overridden {
            self.single
        } else {
            default
        }
    }
}

fn run(cli: Cli) -> Result<Report, Error> {
    let bounds = Bounds {
        single: cli.unsafe_n.unwrap_or(SINGLE_PASS_BOUND),
        quadratic: cli.unsafe_n.unwrap_or(QUADRATIC_BOUND),
        overridden: cli.unsafe_n.is_some(),
    };
    use commands as c;
    match cli.command {
        Command::Map { machine, input } => c::map(&machine.spec()?, &input),
        Command::Trace { machine, input, show_stack } => c::trace(&machine.spec()?, &input.parse()?, show_stack),
        Command::Orbit { machine, input } => c::orbit(&machine.spec()?, &input.parse()?),
        Command::Periodic { machine, n } => c::periodic(&machine.spec()?, n, bounds.single),
        Command::Sd { machine, input, n } => {
            let spec = machine.spec()?;
            match input {
                Some(pi) => c::sd_one(&spec, &pi.parse()?, bounds.single),
                None => c::sd_max(&spec, n.expect("clap requires --input or --n"), bounds.single),
            }
        }
        Command::Fiber { machine, target, count_only } => {
            c::fiber(&machine.spec()?, &target.parse()?, count_only, bounds.single)
        }
        Command::MaxFertility { machine, n } => c::max_fertility(&machine.spec()?, n, bounds.single),
        Command::Spectrum { machine, n_max } => c::spectrum(&machine.spec()?, n_max, bounds.single),
        Command::Sortable { machine, n, list, .. } => c::sortable(&machine.spec()?, n, list, bounds.single),
        Command::Phi { perm, invert } => match (perm, invert) {
            (Some(p), _) => c::phi(&p.parse()?),
            (None, Some(w)) => c::phi_invert(&w.parse()?),
            (None, None) => unreachable!("clap requires --perm or --invert"),
        },
        Command::ClassCheck { pattern, brute_n } => c::class_check(&pattern.parse()?, brute_n, bounds.quadratic),
        Command::Seq { name, upto, .. } => c::seq(&name, upto),
        Command::Conjecture { name, n, pattern, timings } => {
            let pattern = pattern.map(|p| p.parse()).transpose()?;
            c::conjecture(name, n, pattern, timings, &bounds)
        }
        Command::Reproduce { table, n_max } => c::reproduce(table, n_max, bounds.single),
    }
}

fn fail(msg: impl std::fmt::Display, exit: Exit) -> ExitCode {
    eprintln!("stacksort: {msg}");
    ExitCode::from(exit as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { Exit::Usage } else { Exit::Ok };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut format = cli.format;
    if let Command::Seq { bfile: true, .. } = cli.command {
        format = Format::Bfile;
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return fail("--jobs must be at least 1", Exit::Usage);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            return fail(err, Exit::Internal);
        }
    }
    let report = match run(cli) {
        Ok(r) => r,
        Err(err @ Error::InvalidInput(_)) => return fail(err, Exit::Usage),
        Err(Error::Resource { n, bound }) => {
            return fail(
                format!("n = {n} exceeds the scan bound {bound}; pass --unsafe-n {n} to allow it"),
                Exit::Resource,
            )
        }
        Err(err @ Error::Internal(_)) => return fail(err, Exit::Internal),
    };
    let Some(text) = report.render(format) else {
        return fail(
            format!("--format {} is not available for this command", format.to_possible_value().unwrap().get_name()),
            Exit::Usage,
        );
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(Exit::Internal as u8);
    }
    ExitCode::from(report.exit as u8)
}
