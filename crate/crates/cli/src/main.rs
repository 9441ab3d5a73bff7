use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use symlen_core::certificate::{verify_certificate, Certificate, Verdict};
use symlen_core::error::Error;
use symlen_core::experiment::{run_experiment, ExperimentConfig};
use symlen_core::frobenius::frobenius_push;
use symlen_core::parse::parse_tower;
use symlen_core::scenario::{decompose, Scenario};
use symlen_core::symbol::{SplitEvidence, SplitStatus, SplitStrategy};
use symlen_core::tower::FieldTower;

const GRAMMAR: &str = "\
TEXT FORMATS

Elements:
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? integer)?
    atom   := integer | name | '(' expr ')'
  Integers are read in the prime field. `g` is the generator of the constant
  field (e.g. `g+1` in F_4). Other names are base variables or tower
  generators. Example: (t^2+1)/(t+1)

Towers:
    GF(q)(t1,...) ; KIND name: lhs = rhs ; ...
  KIND is AS (name^p - name = a), ROOT (name^p = b) or ALG (monic minimal
  polynomial = 0). Example: GF(2)(t) ; AS i: i^2+i = 1/t ; ROOT s: s^2 = t

Symbols and expressions:
    [a, b)_p ⊗ [a', b')_p ⊗ ...
  `*` and `&` are accepted for ⊗, a trailing `^op` marks an opposite factor and
  `1` is the empty product.

Expression files (invariants): optional `tower: <tower>` line, then the
expression; lines starting with `#` are ignored.

Scenario files (bound, decompose), TOML:
    p = 2
    p_cyclic_reducible = false          # optional
    [hypothesis]
    hypothesis = \"split_by_p_extension\" # cyclic_deg | index | split_by_insep
    n = 3                               #   | split_by_p_extension | split_by_cyclic_p
    [data]                              # optional, needed by decompose
    tower = \"GF(2)(t) ; AS i: i^2+i = 1\"
    base = 0
    algebra = \"[1, t)_2\"
    cyclic = \"[s, t+1)_2\"               # cyclic data over the top level
    decomposition = \"...\"               # decomposition over the top level
    driver = \"cyclic-extension\"         # override the default driver
    search_bound = 4

Experiment configs, TOML: seed, trials, p, q, scenario (split_by_cyclic_p |
cyclic_reduction | cyclic_deg | index | symbols), degree_cap, symbols,
search_bound, record_runtime.

Certificates are JSON: {tower, steps: [{kind, level, before, after, witnesses}]}.

EXIT STATUS
    0 success, 2 unknown or not found within the search bounds, 1 error.";

#[derive(Parser)]
#[command(name = "symlen", version, about = "Symbol length of cyclic p-algebras over function fields", after_long_help = GRAMMAR)]
struct Cli {
    /// Norm-search degree bound D.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
    /// Largest total tower degree accepted.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    degree_budget: u64,
    /// Backend for the oracle checks of `invariants` and `splits`; `decompose` follows the tower.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Auto)]
    backend: Backend,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Auto,
    Univariate,
    Multivariate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Local invariants of the expression in a file.
    Invariants {
        file: PathBuf,
        /// Tower, unless the file names one.
        #[arg(long)]
        tower: Option<String>,
    },
    /// Decide whether a symbol splits.
    Splits {
        symbol: String,
        /// Defaults to GF(p)(t) with p from the symbol.
        #[arg(long)]
        tower: Option<String>,
    },
    /// Frobenius pushforward of a symbol down a chain of root steps.
    Frobenius {
        symbol: String,
        #[arg(long)]
        down: usize,
        #[arg(long)]
        tower: String,
    },
    /// Run the constructive driver for a scenario file.
    Decompose {
        file: PathBuf,
        /// Write the certificate (an array when there are several) here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Bound calculator for a scenario file.
    Bound { file: PathBuf },
    /// Replay a certificate file.
    Verify { file: PathBuf },
    /// Randomized experiment from a config file.
    Experiment {
        file: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for experiment.csv and summary.json; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Unknown(String),
    Error(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_search_exhausted() {
            Failure::Unknown(e.to_string())
        } else {
            Failure::Error(e.to_string())
        }
    }
}

type Run = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

/// `p` from the `_p` suffix of the first symbol.
fn subscript(symbol: &str) -> Option<u32> {
    let i = symbol.find(")_")?;
    let digits: String = symbol[i + 2..]
        .chars()
        .take_while(char::is_ascii_digit)
        .collect();
    digits.parse().ok()
}

impl Cli {
    fn tower(&self, src: &str) -> Result<FieldTower, Failure> {
        let t = parse_tower(src)?;
        let degree = t.degree(t.top(), 0) as u64;
        if degree > self.degree_budget {
            return Err(Failure::Error(format!(
                "tower degree {degree} exceeds the budget {}",
                self.degree_budget
            )));
        }
        if self.backend == Backend::Univariate && t.univariate_model(t.top()).is_err() {
            return Err(Failure::Error(
                "the univariate backend needs a rational top level over F_q(t)".into(),
            ));
        }
        Ok(t)
    }

    fn oracle(&self, t: &FieldTower, level: usize) -> bool {
        self.backend != Backend::Multivariate && t.univariate_model(level).is_ok()
    }

    fn run(&self) -> Run {
        match &self.command {
            Command::Invariants { file, tower } => self.invariants(file, tower.as_deref()),
            Command::Splits { symbol, tower } => self.splits(symbol, tower.as_deref()),
            Command::Frobenius {
                symbol,
                down,
                tower,
            } => self.frobenius(symbol, *down, tower),
            Command::Decompose { file, certificate } => {
                self.decompose(file, certificate.as_deref())
            }
            Command::Bound { file } => self.bound(file),
            Command::Verify { file } => self.verify(file),
            Command::Experiment { file, seed, out } => self.experiment(file, *seed, out.as_deref()),
        }
    }

    fn invariants(&self, file: &Path, tower: Option<&str>) -> Run {
        let src = read(file)?;
        let mut file_tower = None;
        let mut body = Vec::new();
        for line in src.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.strip_prefix("tower:") {
                Some(t) => file_tower = Some(t.trim().to_string()),
                None => body.push(line),
            }
        }
        let body = body.join(" ");
        let tsrc = match (file_tower, tower) {
            (Some(t), _) => t,
            (None, Some(t)) => t.to_string(),
            (None, None) => {
                let p = subscript(&body)
                    .ok_or_else(|| Failure::Error("no tower given and no `_p` subscript".into()))?;
                format!("GF({p})(t)")
            }
        };
        let t = self.tower(&tsrc)?;
        let e = t.parse_brauer(&body, None)?;
        if self.backend == Backend::Multivariate {
            return Err(Failure::Error(
                "invariants need the univariate backend".into(),
            ));
        }
        let v = t.expr_invariants(&e)?;
        Ok(match self.format {
            Format::Json => pretty(&v.to_json()),
            _ => v.to_string(),
        })
    }

    fn splits(&self, symbol: &str, tower: Option<&str>) -> Run {
        let tsrc = match tower {
            Some(t) => t.to_string(),
            None => format!(
                "GF({})(t)",
                subscript(symbol).ok_or_else(|| Failure::Error("missing `_p` subscript".into()))?
            ),
        };
        let t = self.tower(&tsrc)?;
        let e = t.parse_brauer(symbol, None)?;
        let s = match e.entries.as_slice() {
            [s] => s,
            _ => return Err(Failure::Error("expected a single symbol".into())),
        };
        let strategy = if self.oracle(&t, s.level()) {
            SplitStrategy::Both(self.bound)
        } else {
            SplitStrategy::NormSearch(self.bound)
        };
        let status = t.is_split(s, strategy)?;
        let (text, value) = match &status {
            SplitStatus::Split(SplitEvidence::Norm { tower, z }) => {
                let z = tower.display(z);
                (
                    format!("split: b = N(z) with z = {z}"),
                    json!({"status": "split", "witness": {"z": z, "tower": tower.describe()}}),
                )
            }
            SplitStatus::Split(SplitEvidence::TrivialA { c }) => {
                let c = t.display(c);
                (
                    format!("split: a = c^p - c with c = {c}"),
                    json!({"status": "split", "witness": {"c": c}}),
                )
            }
            SplitStatus::Split(SplitEvidence::ZeroInvariants) => (
                "split: all invariants vanish".into(),
                json!({"status": "split", "witness": "zero-invariants"}),
            ),
            SplitStatus::NonSplit {
                place,
                value,
                invariants,
            } => (
                format!("nonsplit: invariant {value}/{} at {place}", t.p()),
                json!({"status": "nonsplit", "place": place, "value": value, "invariants": invariants}),
            ),
            SplitStatus::Unknown { bound } => {
                let msg = format!("unknown: no norm witness up to degree {bound}");
                return Err(Failure::Unknown(match self.format {
                    Format::Json => pretty(&json!({"status": "unknown", "bound": bound})),
                    _ => msg,
                }));
            }
        };
        Ok(match self.format {
            Format::Json => pretty(&value),
            _ => text,
        })
    }

    fn frobenius(&self, symbol: &str, down: usize, tower: &str) -> Run {
        let t = self.tower(tower)?;
        let e = t.parse_brauer(symbol, None)?;
        let s = match e.entries.as_slice() {
            [s] => s,
            _ => return Err(Failure::Error("expected a single symbol".into())),
        };
        let pushed = frobenius_push(&t, s, down)?;
        let text = t.symbol_to_string(&pushed);
        Ok(match self.format {
            Format::Json => pretty(&json!({"symbol": text, "level": down})),
            _ => text,
        })
    }

    fn scenario(&self, file: &Path) -> Result<Scenario, Failure> {
        let s = Scenario::from_toml(&read(file)?)?;
        if let Some(d) = &s.data {
            self.tower(&d.tower)?;
        }
        Ok(s)
    }

    fn bound(&self, file: &Path) -> Run {
        let r = self.scenario(file)?.bound()?;
        Ok(match self.format {
            Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
            _ => {
                let mut lines = vec![r.summary()];
                lines.extend(r.annotations.iter().map(|a| format!("note: {a}")));
                lines.join("\n")
            }
        })
    }

    fn decompose(&self, file: &Path, cert_path: Option<&Path>) -> Run {
        let mut s = self.scenario(file)?;
        if let Some(d) = s.data.as_mut() {
            d.search_bound.get_or_insert(self.bound);
        }
        let o = decompose(&s)?;
        if let Some(path) = cert_path {
            let r = &o.result;
            let text = if r.sub_certificates.is_empty() {
                r.certificate.to_json()
            } else {
                let all: Vec<&Certificate> = std::iter::once(&r.certificate)
                    .chain(&r.sub_certificates)
                    .collect();
                serde_json::to_string_pretty(&all).expect("certificates serialize")
            };
            write(path, &text)?;
        }
        if !o.certified {
            return Err(Failure::Error("certificate verification failed".into()));
        }
        Ok(match self.format {
            Format::Json => pretty(&o.to_json()),
            _ => {
                let r = &o.result;
                let mut lines = vec![
                    format!("bound: {}", o.report.summary()),
                    format!("driver: {}", o.driver.id()),
                    format!("length: {}", r.reported_length),
                    format!("decomposition: {}", r.expr_string()),
                    format!(
                        "certificate: accepted ({} step(s), {} sub-certificate(s))",
                        r.certificate.steps.len(),
                        r.sub_certificates.len()
                    ),
                ];
                lines.extend(
                    r.assertions
                        .iter()
                        .map(|a| format!("assertion [{}]: {}", kind_label(a.kind), a.claim)),
                );
                lines.extend(r.log.iter().map(|l| format!("log: {l}")));
                lines.join("\n")
            }
        })
    }

    fn verify(&self, file: &Path) -> Run {
        let src = read(file)?;
        let certs: Vec<Certificate> = match Certificate::from_json(&src) {
            Ok(c) => vec![c],
            Err(_) => serde_json::from_str(&src)
                .map_err(|e| Failure::Error(format!("certificate JSON: {e}")))?,
        };
        for (i, c) in certs.iter().enumerate() {
            let which = if certs.len() > 1 {
                format!("certificate {i}: ")
            } else {
                String::new()
            };
            match verify_certificate(c) {
                Verdict::Accept => {}
                Verdict::Reject { step, reason } => {
                    return Err(Failure::Error(format!(
                        "{which}rejected at step {step}: {reason}"
                    )))
                }
                Verdict::Malformed { step, reason } => {
                    let at = step.map(|s| format!(" at step {s}")).unwrap_or_default();
                    return Err(Failure::Error(format!("{which}malformed{at}: {reason}")));
                }
            }
        }
        Ok(match self.format {
            Format::Json => pretty(&json!({"verdict": "accepted", "certificates": certs.len()})),
            _ => "accepted".into(),
        })
    }

    fn experiment(&self, file: &Path, seed: Option<u64>, out: Option<&Path>) -> Run {
        let mut cfg = ExperimentConfig::from_toml(&read(file)?)?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        let r = run_experiment(&cfg)?;
        let csv = r.to_csv();
        let summary = pretty(&r.summary());
        if let Some(dir) = out {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::Error(format!("{}: {e}", dir.display())))?;
            write(&dir.join("experiment.csv"), &csv)?;
            write(&dir.join("summary.json"), &summary)?;
        }
        if !r.all_within_bound() {
            return Err(Failure::Error("a trial exceeded its bound".into()));
        }
        Ok(match (self.format, out) {
            (Format::Json, _) => summary,
            (_, Some(dir)) => format!(
                "{} trial(s), {} failure(s); wrote {}",
                r.records.len(),
                r.failures().count(),
                dir.display()
            ),
            _ => csv.trim_end().to_string(),
        })
    }
}

fn kind_label(k: symlen_core::frobenius::CheckKind) -> &'static str {
    use symlen_core::frobenius::CheckKind::*;
    match k {
        OracleChecked => "oracle-checked",
        WitnessChecked => "witness-checked",
        Assumed => "assumed",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Unknown(msg)) => {
            println!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
