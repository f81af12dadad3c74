//! `kmq`: quantum roots and the affine Bruhat order of Kac-Moody root data
//! from the command line.

mod cache;
mod error;
mod input;
mod output;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kmq::affine::{default_budget, AffineSemigroup};
use kmq::quantum::{classify_sequence, construct_from_sequence, dynkin_sequence, is_quantum_by_length};
use kmq::roots;
use kmq::{Gcm, RootDatum};

use error::CliError;
use output::Format;
use report::*;
use verify::{Fixture, Status, Suite};

const AFTER_HELP: &str = "\
INPUT FORMATS:
  Matrix file (--gcm):  {\"labels\": [\"1\", \"2\"], \"matrix\": [[2, -1], [-1, 2]]}
                        labels are optional and default to \"1\", ..., \"n\".
  Element:              {\"coweight\": C, \"word\": [labels]}
                        C is {\"doubled\": [2n integers]} for coordinates in the
                        doubled datum, or {\"pairings\": [n integers]} for the
                        coweight with first block 0 and the given pairings
                        with the simple roots.  The word is read right to
                        left: [\"1\", \"2\"] is r_1 r_2.
  Sequence:             [[labels of I_1], [labels of I_2], ...]
  Element and sequence arguments may be given inline or as @path.

EXIT CODES:
  0 success, 1 invalid input or failed verification,
  2 cone certification budget exceeded, 3 co-covers not supported.";

#[derive(Parser)]
#[command(name = "kmq", version, about = "Quantum roots and the affine Bruhat order of Kac-Moody root data")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    /// Generalized Cartan matrix file.
    #[arg(long, global = true, value_name = "PATH")]
    gcm: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cone certification budget (greedy descent steps); defaults to
    /// 10 * (length gap + 16).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Directory caching quantum root sets by matrix hash.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Seed of the randomized verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Coroot height bound of `roots`.
    #[arg(long, global = true, value_name = "H", default_value_t = 6)]
    max_height: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the quantum roots with their sequences and classes.
    Quantum,
    /// Decide whether a Dynkin sequence is the sequence of a quantum root.
    Classify {
        /// JSON array of levels of labels.
        sequence: String,
    },
    /// List the covers of an element of the Weyl semi-group.
    Covers {
        /// Element, as JSON or @path.
        element: String,
    },
    /// List the co-covers of an element of the Weyl semi-group.
    Cocovers {
        /// Element, as JSON or @path.
        element: String,
        /// Search unsupported elements through coset elements of length at
        /// most this bound, marking the result partial.
        #[arg(long, value_name = "L")]
        bound: Option<usize>,
    },
    /// Print the cover graph of the interval [lower, upper].
    Interval {
        /// Lower element, as JSON or @path.
        lower: String,
        /// Upper element, as JSON or @path.
        upper: String,
    },
    /// List the positive real roots up to --max-height.
    Roots,
    /// Run a verification suite on --gcm, or on built-in matrices.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

/// Settings shared by every command.
struct RunConfig {
    gcm_path: Option<PathBuf>,
    format: Format,
    budget: Option<usize>,
    cache_dir: Option<PathBuf>,
    seed: u64,
    max_height: i64,
}

impl RunConfig {
    fn gcm(&self) -> Result<Gcm, CliError> {
        let path = self.gcm_path.as_ref().ok_or_else(|| CliError::Input("--gcm is required".into()))?;
        input::read_gcm(path)
    }

    fn budget(&self, gap: usize) -> usize {
        self.budget.unwrap_or_else(|| default_budget(gap))
    }

    fn semigroup<'a>(&self, d: &'a RootDatum, gap: usize) -> Result<AffineSemigroup<'a>, CliError> {
        let q = cache::quantum_roots(d, self.cache_dir.as_deref())?;
        Ok(AffineSemigroup::with_quantum_roots(d, self.budget(gap), q.into_iter().map(|(r, _)| r).collect()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let config = RunConfig {
        gcm_path: cli.gcm,
        format: cli.format,
        budget: cli.budget.map(|b| b as usize),
        cache_dir: cli.cache,
        seed: cli.seed,
        max_height: cli.max_height,
    };
    match run(&config, cli.command) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
            ExitCode::SUCCESS
        }
        Err((text, e)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
            eprintln!("kmq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs a command; on failure returns any output produced before it.
fn run(config: &RunConfig, command: Command) -> Result<String, (String, CliError)> {
    let plain = |r: Result<String, CliError>| r.map_err(|e| (String::new(), e));
    match command {
        Command::Quantum => plain(cmd_quantum(config)),
        Command::Classify { sequence } => plain(cmd_classify(config, &sequence)),
        Command::Covers { element } => plain(cmd_covers(config, &element)),
        Command::Cocovers { element, bound } => plain(cmd_cocovers(config, &element, bound)),
        Command::Interval { lower, upper } => plain(cmd_interval(config, &lower, &upper)),
        Command::Roots => plain(cmd_roots(config)),
        Command::Verify { suite } => cmd_verify(config, suite),
    }
}

fn cmd_quantum(config: &RunConfig) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let q = cache::quantum_roots(&d, config.cache_dir.as_deref())?;
    let mut rows = Vec::with_capacity(q.len());
    for (beta, word) in &q {
        let sequence = dynkin_sequence(beta);
        let classes = classify_sequence(&d, &sequence).map_err(|e| {
            CliError::Internal(format!("the sequence of quantum root {:?} was rejected: {e}", beta.coroot_coords()))
        })?;
        rows.push(QuantumRow {
            coroot: beta.coroot_coords().to_vec(),
            root: beta.root_coords().to_vec(),
            height: beta.height(),
            sequence: sequence_labels(&gcm, &sequence),
            classes: classes.iter().map(|c| ClassRow::new(&gcm, c)).collect(),
            word: input::labels_of(&gcm, word),
        });
    }
    Ok(output::rows(config.format, &rows))
}

fn cmd_classify(config: &RunConfig, arg: &str) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let seq = input::sequence(&gcm, arg)?;
    let report = match classify_sequence(&d, &seq) {
        Err(failure) => ClassifyReport::rejected(&gcm, &seq, &failure),
        Ok(classes) => {
            let rec = construct_from_sequence(&d, &seq).map_err(|e| CliError::Internal(e.to_string()))?;
            ClassifyReport {
                sequence: sequence_labels(&gcm, &seq),
                accepted: true,
                classes: classes.iter().map(|c| ClassRow::new(&gcm, c)).collect(),
                clause: None,
                reason: None,
                witness: Some(WitnessRow {
                    root: rec.root.root_coords().to_vec(),
                    coroot: rec.root.coroot_coords().to_vec(),
                    height: rec.root.height(),
                    word: input::labels_of(&gcm, &rec.witness_word),
                }),
            }
        }
    };
    Ok(output::object(config.format, &report))
}

fn cmd_covers(config: &RunConfig, arg: &str) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let g = config.semigroup(&d, 1)?;
    let x = input::element(&g, arg)?;
    let rows: Vec<CoverRow> =
        g.covers_with_reflections(&x)?.iter().map(|(y, refl)| CoverRow::new(&d, y, refl)).collect();
    Ok(output::rows(config.format, &rows))
}

fn cmd_cocovers(config: &RunConfig, arg: &str, bound: Option<usize>) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let g = config.semigroup(&d, 1)?;
    let y = input::element(&g, arg)?;
    let elements = match bound {
        None => g.cocovers(&y)?,
        Some(b) => {
            let set = g.cocovers_bounded(&y, b)?;
            if set.partial {
                eprintln!("kmq: partial result: co-covers through coset elements of length at most {b}");
            }
            set.elements
        }
    };
    let rows: Vec<ElementRow> = elements.iter().map(|x| ElementRow::new(&d, x)).collect();
    Ok(output::rows(config.format, &rows))
}

fn cmd_interval(config: &RunConfig, lower: &str, upper: &str) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let probe = config.semigroup(&d, 0)?;
    let x = input::element(&probe, lower)?;
    let y = input::element(&probe, upper)?;
    let gap = (y.length() - x.length()).max(0) as usize;
    let g = AffineSemigroup::with_quantum_roots(&d, config.budget(gap), probe.quantum_roots().to_vec());
    let iv = g.interval(&x, &y)?;
    let nodes: Vec<NodeRow> =
        iv.nodes.iter().enumerate().map(|(id, z)| NodeRow { id, element: ElementRow::new(&d, z) }).collect();
    if config.format == Format::Json {
        let report = IntervalReport { nodes, edges: iv.edges.iter().map(|&(a, b)| [a, b]).collect() };
        return Ok(output::object(Format::Json, &report));
    }
    let edges: Vec<EdgeRow> = iv.edges.iter().map(|&(from, to)| EdgeRow { from, to }).collect();
    let mut text = output::rows(config.format, &nodes);
    if !edges.is_empty() {
        text.push('\n');
        text.push_str(&output::rows(config.format, &edges));
    }
    Ok(text)
}

const ROOT_CAP: usize = 200_000;

fn cmd_roots(config: &RunConfig) -> Result<String, CliError> {
    let gcm = config.gcm()?;
    let d = RootDatum::doubled(&gcm);
    let all = roots::enumerate_real_roots(&d, config.max_height, ROOT_CAP)
        .map_err(|e| CliError::Input(format!("{e}; lower --max-height")))?;
    let rows: Vec<RootRow> =
        all.iter().map(|(beta, word)| RootRow::new(&gcm, beta, word, is_quantum_by_length(&d, beta))).collect();
    Ok(output::rows(config.format, &rows))
}

fn cmd_verify(config: &RunConfig, suite: Suite) -> Result<String, (String, CliError)> {
    let fixtures = match &config.gcm_path {
        Some(path) => {
            let gcm = config.gcm().map_err(|e| (String::new(), e))?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            vec![Fixture::new(name, &gcm)]
        }
        None => verify::builtin_fixtures(),
    };
    let opts = verify::Options { seed: config.seed, budget: config.budget, cache: config.cache_dir.clone() };
    let checks = verify::run(suite, &fixtures, &opts);
    let text = output::rows(config.format, &checks);
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    if failed > 0 {
        Err((text, CliError::VerifyFailed { failed, total: checks.len() }))
    } else {
        Ok(text)
    }
}
