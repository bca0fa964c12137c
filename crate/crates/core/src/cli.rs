//! Command-line surface.
//!
//! Each command produces one artifact (a cover, a report, a certificate, or a
//! CSV table) written to `--output` or stdout. A JSON run summary carrying the
//! fully resolved configuration goes to stdout when `--output` is set and to
//! stderr otherwise.
//!
//! Exit codes: 0 exact cover / success, 1 refuted or not exact, 2 input
//! error, 3 refutation rejected (`m >= n - 1`), 4 budgets exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::collision::{SearchConfig, SearchStrategy};
use crate::cover::{
    parse_cover, recursive_decomposition, serialize_cover, star_decomposition, verify_cover,
    CoverSpec, VerificationReport,
};
use crate::error::{GadgetError, WitnessError};
use crate::gadget::{
    build_gadgets, complement_components, contradiction_demo, edge_counts, edge_gap,
    BijectionMap, PartSizes,
};
use crate::sample::random_partial_partition;
use crate::witness::{find_pattern_collision, refute, RefuteConfig, Refutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "biclique-cert",
    version,
    about = "Construct, verify, and refute biclique covers of complete graphs"
)]
pub struct Cli {
    /// Seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Where to write the command's artifact (default: stdout).
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Star,
    Recursive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    /// Star decomposition without its last biclique.
    StarMinusLast,
    /// Random exact partitions with one biclique removed.
    RandomPartial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Birthday,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an optimal (n - 1 biclique) cover of K_n.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Star)]
        method: Method,
    },
    /// Check whether a cover file is an exact edge-disjoint cover.
    Verify { cover: PathBuf },
    /// Produce a refutation certificate for a cover with fewer than n - 1 bicliques.
    Refute {
        cover: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Gadget graph counts for part sizes, or the full demo against a cover.
    Gadget {
        #[arg(long, value_delimiter = ',', requires = "q", conflicts_with = "demo")]
        p: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',', requires = "p")]
        q: Option<Vec<u64>>,
        /// Cover file to run the contradiction demo on.
        #[arg(long, required_unless_present = "p")]
        demo: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The injection from K_{p,q} minus diagonal pairs into K_p + K_q.
    Bijection {
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        list_unhit: bool,
        /// Print every domain pair with its image.
        #[arg(long)]
        dump: bool,
    },
    /// Smallest label range with a pattern collision, per cover.
    Experiment {
        /// Inclusive range, e.g. 2..7.
        #[arg(long, default_value = "2..6")]
        n_range: NRange,
        #[arg(long, value_enum, default_value_t = Family::StarMinusLast)]
        family: Family,
        /// Covers per n for the random family.
        #[arg(long, default_value_t = 3)]
        covers: usize,
        /// Largest k^n searched before a row is marked capped.
        #[arg(long, default_value_t = 5_000_000)]
        cap: u64,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Birthday)]
    strategy: StrategyArg,
    /// Labelings examined per label range.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Largest coordinate bound for the kernel fallback.
    #[arg(long, default_value_t = 4)]
    kernel_bound: u64,
    /// Fixed label range k (default: escalate 2, 4, 8, ...).
    #[arg(long)]
    label_range: Option<u64>,
    /// Birthday search shards.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl SearchArgs {
    fn resolve(&self, seed: u64) -> RefuteConfig {
        RefuteConfig {
            search: SearchConfig {
                strategy: match self.strategy {
                    StrategyArg::Exhaustive => SearchStrategy::Exhaustive,
                    StrategyArg::Birthday => SearchStrategy::Birthday,
                },
                seed,
                budget: self.budget,
                workers: self.workers,
            },
            label_range: self.label_range,
            kernel_bound: self.kernel_bound,
            ..RefuteConfig::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
struct NRange {
    start: usize,
    end: usize,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad bound {x:?}: {e}"))
        };
        let (start, end) = (parse(a)?, parse(b)?);
        if start < 2 || start > end {
            return Err(format!("need 2 <= a <= b, got {start}..{end}"));
        }
        Ok(NRange { start, end })
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        let code = match e {
            WitnessError::Exhausted { .. } => EXIT_EXHAUSTED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Self {
        match e {
            GadgetError::Rejected { .. } => Failure { code: EXIT_REJECTED, message: e.to_string() },
            GadgetError::Witness(w) => w.into(),
            other => Failure::input(other),
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut session = Session { cli: &cli, stdout, stderr };
    match session.execute() {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(session.stderr, "error: {}", f.message);
            f.code
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Session<'_> {
    fn execute(&mut self) -> Result<i32, Failure> {
        match &self.cli.command {
            Command::Construct { n, method } => self.construct(*n, *method),
            Command::Verify { cover } => self.verify(cover),
            Command::Refute { cover, search } => self.refute(cover, search),
            Command::Gadget { p, q, demo, search } => match (p, q, demo) {
                (Some(p), Some(q), _) => self.gadget_sizes(p, q),
                (_, _, Some(path)) => self.gadget_demo(path, search),
                _ => Err(Failure::input("gadget needs --p and --q, or --demo")),
            },
            Command::Bijection { p, q, list_unhit, dump } => self.bijection(*p, *q, *list_unhit, *dump),
            Command::Experiment { n_range, family, covers, cap } => {
                self.experiment(*n_range, *family, *covers, *cap)
            }
        }
    }

    fn artifact(&mut self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.cli.output {
            Some(path) => fs::write(path, bytes)
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
            None => self
                .stdout
                .write_all(bytes)
                .map_err(|e| Failure::input(format!("cannot write output: {e}"))),
        }
    }

    fn summary(&mut self, value: serde_json::Value, text: String) {
        let rendered = match self.cli.format {
            Format::Json => format!("{value}\n"),
            Format::Text => text,
        };
        let target: &mut dyn Write = if self.cli.output.is_some() {
            &mut *self.stdout
        } else {
            &mut *self.stderr
        };
        let _ = target.write_all(rendered.as_bytes());
    }

    fn globals(&self) -> serde_json::Value {
        json!({
            "seed": self.cli.seed,
            "output": self.cli.output.as_ref().map(|p| p.display().to_string()),
            "format": self.cli.format,
        })
    }

    fn construct(&mut self, n: usize, method: Method) -> Result<i32, Failure> {
        let cover = match method {
            Method::Star => star_decomposition(n),
            Method::Recursive => recursive_decomposition(n),
        }
        .map_err(Failure::input)?;
        let report = verify_cover(&cover).map_err(Failure::input)?;
        self.artifact(&serialize_cover(&cover))?;
        self.summary(
            json!({
                "command": "construct",
                "config": { "n": n, "method": method, "global": self.globals() },
                "m": cover.len(),
                "exact_cover": report.is_exact_cover,
            }),
            format!("m: {}\nexact cover: {}\n", cover.len(), report.is_exact_cover),
        );
        Ok(EXIT_OK)
    }

    fn verify(&mut self, path: &Path) -> Result<i32, Failure> {
        let cover = read_cover(path)?;
        let report = verify_cover(&cover).map_err(Failure::input)?;
        let rendered = match self.cli.format {
            Format::Json => format!("{}\n", serde_json::to_string(&report).expect("serializable")),
            Format::Text => render_report(&report),
        };
        self.artifact(rendered.as_bytes())?;
        if self.cli.output.is_some() {
            self.summary(
                json!({
                    "command": "verify",
                    "config": { "cover": path.display().to_string(), "global": self.globals() },
                    "exact_cover": report.is_exact_cover,
                }),
                format!("exact cover: {}\n", report.is_exact_cover),
            );
        }
        Ok(if report.is_exact_cover { EXIT_OK } else { EXIT_NEGATIVE })
    }

    fn refute(&mut self, path: &Path, search: &SearchArgs) -> Result<i32, Failure> {
        let cover = read_cover(path)?;
        let config = search.resolve(self.cli.seed);
        let config_json = json!({
            "cover": path.display().to_string(),
            "refute": config,
            "global": self.globals(),
        });
        match refute(&cover, &config)? {
            Refutation::Rejected { m, n } => {
                let message = format!("no refutation attempted: m = {m} >= n - 1 = {}", n - 1);
                self.summary(
                    json!({ "command": "refute", "config": config_json, "outcome": "rejected", "message": message }),
                    format!("{message}\n"),
                );
                Ok(EXIT_REJECTED)
            }
            Refutation::Certificate(cert) => {
                debug_assert!(cert.check(&cover).unwrap_or(false));
                self.artifact(cert.to_json().as_bytes())?;
                let text = format!(
                    "refuted: defect {} > 0 with tau = {:?} ({:?} strategy)\n",
                    cert.defect,
                    cert.tau.tau(),
                    cert.strategy
                );
                self.summary(
                    json!({
                        "command": "refute",
                        "config": config_json,
                        "outcome": "refuted",
                        "certificate": cert,
                    }),
                    text,
                );
                Ok(EXIT_NEGATIVE)
            }
        }
    }

    fn gadget_sizes(&mut self, p: &[u64], q: &[u64]) -> Result<i32, Failure> {
        let sizes = PartSizes::new(p.to_vec(), q.to_vec())?;
        let counts = edge_counts(&sizes);
        let gadgets = build_gadgets(&sizes);
        let complements = complement_components(&sizes);
        let report = json!({
            "p": sizes.p(),
            "q": sizes.q(),
            "total": sizes.total(),
            "h_edges": gadgets.h_edges.len(),
            "h_prime_edges": gadgets.h_prime_edges.len(),
            "closed_form": { "h_edges": counts.h, "h_prime_edges": counts.h_prime },
            "gap": edge_gap(&sizes),
            "complement": {
                "cliques": complements.cliques,
                "clique_edges": complements.clique_edges(),
                "explicit_clique_edges": gadgets.h_complement().len(),
                "bicliques": complements.bicliques,
                "biclique_edges": complements.biclique_edges(),
                "explicit_biclique_edges": gadgets.h_prime_complement().len(),
                "accounting_holds": complements.accounting_holds(&sizes),
            },
        });
        let rendered = match self.cli.format {
            Format::Json => format!("{report}\n"),
            Format::Text => format!(
                "E_H={}\nE_H'={}\ngap={}\ncomplement clique edges={} (2*C(N,2) - E_H)\ncomplement biclique edges={} (N^2 - E_H')\n",
                gadgets.h_edges.len(),
                gadgets.h_prime_edges.len(),
                edge_gap(&sizes),
                complements.clique_edges(),
                complements.biclique_edges()
            ),
        };
        self.artifact(rendered.as_bytes())?;
        Ok(EXIT_OK)
    }

    fn gadget_demo(&mut self, path: &Path, search: &SearchArgs) -> Result<i32, Failure> {
        let cover = read_cover(path)?;
        let config = search.resolve(self.cli.seed);
        let report = contradiction_demo(&cover, &config)?;
        let rendered = match self.cli.format {
            Format::Json => format!(
                "{}\n",
                json!({
                    "config": { "cover": path.display().to_string(), "refute": config, "global": self.globals() },
                    "report": report,
                })
            ),
            Format::Text => report.to_string(),
        };
        self.artifact(rendered.as_bytes())?;
        Ok(EXIT_OK)
    }

    fn bijection(&mut self, p: i64, q: i64, list_unhit: bool, dump: bool) -> Result<i32, Failure> {
        if p < 1 || q < 1 {
            return Err(Failure::input(format!("p and q must be positive, got p = {p}, q = {q}")));
        }
        let map = BijectionMap::normalized(p as u64, q as u64)?;
        let unhit = map.unhit_edges();
        let (small, large) = (map.p, map.q);
        let verdict = if !map.equality_holds() {
            "strict inequality".to_string()
        } else if small == large {
            "equality holds (p=q)".to_string()
        } else {
            "equality holds (larger = smaller + 1)".to_string()
        };
        let label = |tag| map.caller_clique(tag);
        let rendered = match self.cli.format {
            Format::Json => {
                let mut report = json!({
                    "p": p,
                    "q": q,
                    "swapped": map.swapped,
                    "domain": map.domain_size(),
                    "image": map.image().len(),
                    "injective": map.is_injective(),
                    "unhit": unhit.len(),
                    "codomain": map.codomain_size(),
                    "equality": map.equality_holds(),
                    "verdict": verdict,
                });
                if list_unhit {
                    report["unhit_edges"] = unhit
                        .iter()
                        .map(|e| json!({ "clique": format!("K_{}", label(e.clique)), "edge": [e.a, e.b] }))
                        .collect();
                }
                if dump {
                    report["map"] = map
                        .entries
                        .iter()
                        .map(|((i, j), e)| {
                            json!({ "from": [i, j], "clique": format!("K_{}", label(e.clique)), "to": [e.a, e.b] })
                        })
                        .collect();
                }
                format!("{report}\n")
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "domain: {}", map.domain_size());
                let _ = writeln!(out, "image: {}", map.image().len());
                let _ = writeln!(out, "unhit: {}", unhit.len());
                let _ = writeln!(out, "{verdict}");
                if list_unhit {
                    for e in &unhit {
                        let _ = writeln!(out, "  K_{} {{{},{}}}", label(e.clique), e.a, e.b);
                    }
                }
                if dump {
                    for ((i, j), e) in &map.entries {
                        let _ = writeln!(out, "  ({i},{j}) -> K_{} {{{},{}}}", label(e.clique), e.a, e.b);
                    }
                }
                out
            }
        };
        self.artifact(rendered.as_bytes())?;
        Ok(EXIT_OK)
    }

    fn experiment(&mut self, range: NRange, family: Family, covers: usize, cap: u64) -> Result<i32, Failure> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cli.seed);
        let mut table = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Failure::input(format!("csv: {e}"));
        table
            .write_record(["n", "cover_id", "k_min", "labelings_examined"])
            .map_err(csv_err)?;
        let mut rows = 0usize;
        for n in range.start..=range.end {
            let family_covers: Vec<(String, CoverSpec)> = match family {
                Family::StarMinusLast => {
                    let star = star_decomposition(n).map_err(Failure::input)?;
                    vec![("star-minus-last".to_string(), star.truncated(n - 2))]
                }
                Family::RandomPartial => (0..covers)
                    .map(|i| (format!("random-partial-{i}"), random_partial_partition(n, &mut rng)))
                    .collect(),
            };
            for (id, cover) in family_covers {
                let (k_min, examined) = min_label_range(&cover, cap)?;
                let k_field = k_min.map_or_else(|| "capped".to_string(), |k| k.to_string());
                table
                    .write_record([n.to_string(), id, k_field, examined.to_string()])
                    .map_err(csv_err)?;
                rows += 1;
            }
        }
        let bytes = table.into_inner().map_err(|e| Failure::input(format!("csv: {e}")))?;
        self.artifact(&bytes)?;
        self.summary(
            json!({
                "command": "experiment",
                "config": {
                    "n_range": range,
                    "family": family,
                    "family_note": "cover family chosen for the experiment; no bound is claimed",
                    "covers": covers,
                    "cap": cap,
                    "global": self.globals(),
                },
                "rows": rows,
            }),
            format!("{rows} rows\n"),
        );
        Ok(EXIT_OK)
    }
}

/// Ascends `k = 2, 3, ...`, sweeping all of `[1, k]^n` exhaustively, until a
/// pattern collision appears or `k^n` exceeds `cap`.
fn min_label_range(cover: &CoverSpec, cap: u64) -> Result<(Option<u64>, u64), Failure> {
    let mut examined = 0u64;
    for k in 2u64.. {
        let space = u32::try_from(cover.n)
            .ok()
            .and_then(|n| k.checked_pow(n))
            .filter(|&s| s <= cap);
        let Some(space) = space else {
            return Ok((None, examined));
        };
        let config = SearchConfig {
            strategy: SearchStrategy::Exhaustive,
            budget: space,
            ..SearchConfig::default()
        };
        let outcome = find_pattern_collision(cover, k, &config)?;
        examined += outcome.examined;
        if outcome.collision.is_some() {
            return Ok((Some(k), examined));
        }
    }
    unreachable!("k ranges over all integers >= 2")
}

fn read_cover(path: &Path) -> Result<CoverSpec, Failure> {
    let bytes =
        fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_cover(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn render_report(report: &VerificationReport) -> String {
    let mut out = format!(
        "exact cover: {}\ntotal biclique edges: {}\n",
        report.is_exact_cover, report.total_biclique_edges
    );
    for e in &report.uncovered {
        let _ = writeln!(out, "uncovered {e}");
    }
    for c in &report.overcovered {
        let _ = writeln!(out, "overcovered {} x{}", c.edge, c.multiplicity);
    }
    out
}
