use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cca::automata::{extended_neighbourhood, reduce_to_ca};
use cca::compile::{ca_to_cca, coloured_to_cca, margolus_cca, rca_to_rcca, AdditionRelation};
use cca::rule::{Alphabet, RuleTable, State};
use cca::search::find_global_map;
use cca::verify::{check_bijection, check_translation_commutative, invert_cca};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::format::{
    parse_block_file, parse_config, parse_rule_file, parse_schedule_file, parse_search_spec, serialize_rule_file,
    Automaton, FormatError, TrajectoryRecord,
};

#[derive(Debug, Parser)]
#[command(name = "cca", version, about = "Build, check and run closed cellular automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a rule file and report commutativity and reversibility.
    Check { rule: PathBuf },
    /// Evolve a configuration and print the trajectory.
    Run {
        rule: PathBuf,
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a construction into a closed automaton rule file.
    #[command(subcommand)]
    Compile(Compile),
    /// Write the inverse of a reversible closed automaton.
    Invert {
        rule: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the traditional automaton with the same global map.
    Reduce {
        rule: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search small closed automata for a target global map.
    Search {
        spec: PathBuf,
        /// Print every match as a rule file after the report.
        #[arg(long)]
        emit_matches: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Compile {
    /// Two-register simulation of a traditional automaton.
    CaToCca {
        rule: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reversible simulation from a rule and its inverse.
    RcaToRcca {
        forward: PathBuf,
        reverse: PathBuf,
        /// Bijection defining addition, as space-separated states.
        #[arg(long)]
        addition: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Margolus block automaton from two block rules.
    Margolus {
        /// `swap`, `identity` or a block file.
        #[arg(long, default_value = "swap")]
        u: String,
        #[arg(long, default_value = "identity")]
        v: String,
        /// Alphabet size for the built-in block rules.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Coloured automaton from a colour schedule file.
    Coloured {
        schedule: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    File { path: PathBuf, source: FormatError },

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{0}")]
    Rejected(String),
}

impl From<cca::Error> for CliError {
    fn from(e: cca::Error) -> Self {
        CliError::Format(FormatError::Model(e))
    }
}

impl CliError {
    /// 1 for usage errors, 3 when a search ceiling is hit, 2 for every
    /// other parse or validation failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::File { source: FormatError::Model(cca::Error::CeilingExceeded { .. }), .. }
            | CliError::Format(FormatError::Model(cca::Error::CeilingExceeded { .. })) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn in_file<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn load_rule(path: &Path, defer: bool) -> Result<Automaton, CliError> {
    in_file(path, parse_rule_file(&read(path)?, defer))
}

fn load_cca(path: &Path) -> Result<cca::automata::ClosedCa, CliError> {
    match load_rule(path, false)? {
        Automaton::Cca(c) => Ok(c),
        Automaton::Ca(_) => Err(CliError::Usage(format!("{}: expected a closed automaton", path.display()))),
    }
}

fn load_ca(path: &Path) -> Result<cca::automata::TraditionalCa, CliError> {
    match load_rule(path, false)? {
        Automaton::Ca(c) => Ok(c),
        Automaton::Cca(_) => Err(CliError::Usage(format!("{}: expected a traditional automaton", path.display()))),
    }
}

fn emit(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_report(a: &Automaton) -> Result<(String, bool), CliError> {
    let mut out = format!("kind {}\nalphabet {}\nneigh {}\n", a.kind(), a.alphabet(), a.neighbourhood());
    let Automaton::Cca(cca) = a else {
        return Ok((out, true));
    };
    let alphabet = cca.alphabet();
    let fmt = |states: &[State]| states.iter().map(|&s| alphabet.format_state(s)).collect::<Vec<_>>().join(" ");
    out += &format!("extended {}\n", extended_neighbourhood(cca.neighbourhood()));
    let report = check_translation_commutative(cca.interaction(), cca.neighbourhood(), alphabet)?;
    out += &format!("commutative {}\n", yes_no(report.ok));
    if let Some(w) = &report.witness {
        let region: Vec<String> = w.region.iter().map(|p| p.to_string()).collect();
        out += &format!("witness offset {}\n", w.offset);
        out += &format!("witness region {}\n", region.join(" "));
        out += &format!("witness assignment {}\n", fmt(&w.assignment));
        out += &format!("witness base-first {}\n", fmt(&w.base_first));
        out += &format!("witness offset-first {}\n", fmt(&w.offset_first));
    }
    let fi = check_bijection(cca.interaction())?;
    let gi = check_bijection(cca.update())?;
    out += &format!("interaction-bijective {}\nupdate-bijective {}\n", yes_no(fi), yes_no(gi));
    out += &format!("reversible {}\n", yes_no(report.ok && fi && gi));
    Ok((out, report.ok))
}

fn block_rule(spec: &str, q: usize) -> Result<RuleTable, CliError> {
    let alphabet = Alphabet::new(q)?;
    match spec {
        "swap" => Ok(RuleTable::from_fn(alphabet, 2, 2, |t| vec![t[1], t[0]])?),
        "identity" => Ok(RuleTable::identity(alphabet, 2)?),
        path => {
            let path = Path::new(path);
            in_file(path, parse_block_file(&read(path)?))
        }
    }
}

/// Runs one parsed command, writing its normal output to `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Check { rule } => {
            let a = load_rule(&rule, true)?;
            let (text, ok) = check_report(&a)?;
            emit(&text, None, stdout)?;
            if !ok {
                return Err(CliError::Rejected("interaction table is not translation commutative".into()));
            }
            Ok(())
        }
        Command::Run { rule, config, steps, output } => {
            let a = load_rule(&rule, false)?;
            let c0 = in_file(&config, parse_config(&read(&config)?, a.alphabet()))?;
            let mut configurations = vec![c0];
            for _ in 0..steps {
                let next = a.step(configurations.last().expect("nonempty"))?;
                configurations.push(next);
            }
            let record = TrajectoryRecord {
                kind: a.kind().to_string(),
                dims: configurations[0].lattice().dims().to_vec(),
                alphabet: a.alphabet().clone(),
                configurations,
            };
            emit(&record.to_string(), output.as_deref(), stdout)
        }
        Command::Compile(c) => {
            let (cca, out) = match c {
                Compile::CaToCca { rule, out } => (ca_to_cca(&load_ca(&rule)?)?, out),
                Compile::RcaToRcca { forward, reverse, addition, out } => {
                    let fwd = load_ca(&forward)?;
                    let rev = load_ca(&reverse)?;
                    let add = match addition {
                        None => AdditionRelation::identity(fwd.alphabet().size())?,
                        Some(text) => {
                            let bijection = text
                                .split(|c: char| c.is_whitespace() || c == ',')
                                .filter(|s| !s.is_empty())
                                .map(|s| {
                                    s.parse::<State>().map_err(|_| CliError::Usage(format!("bad addition state {s:?}")))
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            AdditionRelation::new(bijection)?
                        }
                    };
                    (rca_to_rcca(&fwd, &rev, &add)?, out)
                }
                Compile::Margolus { u, v, alphabet, out } => {
                    (margolus_cca(&block_rule(&u, alphabet)?, &block_rule(&v, alphabet)?)?, out)
                }
                Compile::Coloured { schedule, out } => {
                    let s = in_file(&schedule, parse_schedule_file(&read(&schedule)?))?;
                    (coloured_to_cca(&s)?.cca().clone(), out)
                }
            };
            emit(&serialize_rule_file(&Automaton::Cca(cca)), out.output.as_deref(), stdout)
        }
        Command::Invert { rule, output } => {
            let inv = invert_cca(&load_cca(&rule)?)?;
            emit(&serialize_rule_file(&Automaton::Cca(inv)), output.as_deref(), stdout)
        }
        Command::Reduce { rule, output } => {
            let ca = reduce_to_ca(&load_cca(&rule)?)?;
            emit(&serialize_rule_file(&Automaton::Ca(ca)), output.as_deref(), stdout)
        }
        Command::Search { spec, emit_matches } => {
            let spec = in_file(&spec, parse_search_spec(&read(&spec)?))?;
            let report = find_global_map(&spec)?;
            let mut text = format!("{report}\n");
            if emit_matches {
                for (i, m) in report.matches.iter().enumerate() {
                    text += &format!("# match {i}\n{}", serialize_rule_file(&Automaton::Cca(m.clone())));
                }
            }
            emit(&text, None, stdout)
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit code;
/// diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
