//! `fwforge`: derivations, comparisons, concretizations and spectral scans.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use config::ConfigFile;
use fwforge_core::comparator::diff_report;
use fwforge_core::concretizer::checks::{derive_electrostatic, verify_commutator};
use fwforge_core::eriksen::{self, EriksenPipeline};
use fwforge_core::ncalg::{parse_expr, Budget};
use fwforge_core::report::{Check, CheckReport};
use fwforge_core::stepwise::{self, derive_second_step, expand_static};
use fwforge_spectra::report::log_grid;
use fwforge_spectra::{
    amm_linearity_scan, compare_closed_form, eqprf_residual_scan, eqrel_check, Params, Particle, Representation,
    SpectralModel, SpectralReport,
};

#[derive(Parser, Debug)]
#[command(name = "fwforge", version, about = "Foldy–Wouthuysen derivation and verification engine")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive a transformed Hamiltonian and check it.
    Derive {
        #[arg(value_enum)]
        which: DeriveWhich,
    },
    /// Class-by-class difference of the Eriksen and iterative Hamiltonians.
    Compare,
    /// Evaluate abstract brackets on Dirac operators.
    Concretize {
        #[arg(value_enum)]
        which: ConcretizeWhich,
    },
    /// Landau-level spectra, scans and operator relations.
    Spectra {
        #[arg(value_enum)]
        which: SpectraWhich,
    },
    /// Expand an expression of the mini-language into a canonical word sum.
    Expand { expr: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DeriveWhich {
    Eriksen,
    Stepwise,
    SecondStep,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConcretizeWhich {
    Electrostatic,
    UniformField,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SpectraWhich {
    Run,
    AmmScan,
    EqprfScan,
    Eqrel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
    Both,
}

impl Format {
    fn parse(s: &str) -> Result<Format, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
struct Flags {
    /// Report file; the manifest goes to <out>.manifest.json [default: stdout, manifest on stderr]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format [default: text]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// `key = value` file with defaults for any flag; flags take precedence
    #[arg(long, global = true)]
    config: Option<String>,
    /// Maximum word length of the truncation budget [default: 8]
    #[arg(long = "max-len", global = true)]
    max_len: Option<usize>,
    /// Maximum number of E letters per word [default: 3]
    #[arg(long = "max-e", global = true)]
    max_e: Option<usize>,
    /// Highest power of hbar compared by `concretize electrostatic` [default: 2]
    #[arg(long = "hbar-max", global = true)]
    hbar_max: Option<i32>,
    /// spin0, spin12 or spin1 [default: spin1]
    #[arg(long, global = true)]
    particle: Option<String>,
    /// original, fw or fw_eqprf [default: original; spin0: fw]
    #[arg(long, global = true)]
    representation: Option<String>,
    /// Mass [default: 1]
    #[arg(long, global = true)]
    m: Option<f64>,
    /// Reduced Planck constant [default: 1]
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Signed charge [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    e: Option<f64>,
    /// Magnetic field along z, B >= 0 [default: 0.1]
    #[arg(long = "B", global = true)]
    b: Option<f64>,
    /// g-factor [default: 2; eqprf-scan: 2.5]
    #[arg(long, global = true)]
    g: Option<f64>,
    /// Number of Landau levels N [default: 256]
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// First scan value: g - 2 for amm-scan, |e|B for eqprf-scan [default: 0.001]
    #[arg(long = "scan-from", global = true)]
    scan_from: Option<f64>,
    /// Last scan value [default: 0.1]
    #[arg(long = "scan-to", global = true)]
    scan_to: Option<f64>,
    /// Number of geometric scan points [default: 7]
    #[arg(long = "scan-points", global = true)]
    scan_points: Option<usize>,
    /// Lowest positive interior levels used by the scans [default: 12]
    #[arg(long = "scan-levels", global = true)]
    scan_levels: Option<usize>,
}

/// Every setting after flags, config file and defaults are merged.
#[derive(Debug, Serialize)]
struct Effective {
    command: String,
    version: &'static str,
    config: Option<String>,
    out: Option<PathBuf>,
    format: Format,
    max_len: usize,
    max_e: usize,
    hbar_max: i32,
    particle: String,
    representation: String,
    m: f64,
    hbar: f64,
    e: f64,
    #[serde(rename = "B")]
    b: f64,
    g: f64,
    levels: usize,
    scan_from: f64,
    scan_to: f64,
    scan_points: usize,
    scan_levels: usize,
}

impl Effective {
    fn resolve(cli: &Cli) -> Result<Effective> {
        let f = &cli.flags;
        let cfg = match &f.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let command = command_name(&cli.command);
        let particle = cfg.resolve(f.particle.clone(), "particle", "spin1".to_string())?;
        let default_rep = if particle == "spin0" { "fw" } else { "original" };
        let default_g = if matches!(cli.command, Command::Spectra { which: SpectraWhich::EqprfScan }) {
            2.5
        } else {
            2.0
        };
        let out = match (&f.out, cfg.get("out")) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(p)) => Some(PathBuf::from(p)),
            _ => None,
        };
        let format = match (f.format, cfg.get("format")) {
            (Some(x), _) => x,
            (None, Some(s)) => Format::parse(s).map_err(|e| anyhow!("config key `format`: {e}"))?,
            _ => Format::Text,
        };
        Ok(Effective {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config: f.config.clone(),
            out,
            format,
            max_len: cfg.resolve(f.max_len, "max-len", 8)?,
            max_e: cfg.resolve(f.max_e, "max-e", 3)?,
            hbar_max: cfg.resolve(f.hbar_max, "hbar-max", 2)?,
            representation: cfg.resolve(f.representation.clone(), "representation", default_rep.to_string())?,
            particle,
            m: cfg.resolve(f.m, "m", 1.0)?,
            hbar: cfg.resolve(f.hbar, "hbar", 1.0)?,
            e: cfg.resolve(f.e, "e", 1.0)?,
            b: cfg.resolve(f.b, "B", 0.1)?,
            g: cfg.resolve(f.g, "g", default_g)?,
            levels: cfg.resolve(f.levels, "levels", 256)?,
            scan_from: cfg.resolve(f.scan_from, "scan-from", 1e-3)?,
            scan_to: cfg.resolve(f.scan_to, "scan-to", 1e-1)?,
            scan_points: cfg.resolve(f.scan_points, "scan-points", 7)?,
            scan_levels: cfg.resolve(f.scan_levels, "scan-levels", 12)?,
        })
    }

    fn budget(&self) -> Budget {
        Budget::new(self.max_len, self.max_e)
    }

    fn params(&self) -> Params {
        Params {
            m: self.m,
            hbar: self.hbar,
            e: self.e,
            b: self.b,
            g: self.g,
        }
    }

    fn model(&self) -> Result<SpectralModel> {
        let particle = match self.particle.as_str() {
            "spin0" => Particle::Spin0,
            "spin12" => Particle::Spin12,
            "spin1" => Particle::Spin1,
            other => return Err(anyhow!("unknown particle `{other}` (spin0, spin12, spin1)")),
        };
        let rep = match self.representation.as_str() {
            "original" => Representation::Original,
            "fw" => Representation::Fw,
            "fw_eqprf" => Representation::FwEqprf,
            other => return Err(anyhow!("unknown representation `{other}` (original, fw, fw_eqprf)")),
        };
        let model = SpectralModel::new(particle, rep, self.params(), self.levels);
        model.validate()?;
        Ok(model)
    }

    fn scan_values(&self) -> Vec<f64> {
        log_grid(self.scan_from, self.scan_to, self.scan_points)
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Derive { which } => format!("derive {}", value_name(*which)),
        Command::Compare => "compare".into(),
        Command::Concretize { which } => format!("concretize {}", value_name(*which)),
        Command::Spectra { which } => format!("spectra {}", value_name(*which)),
        Command::Expand { .. } => "expand".into(),
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Result of one command.
struct Outcome {
    json: serde_json::Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, text: String, passed: bool) -> Result<Outcome> {
        Ok(Outcome {
            json: serde_json::to_value(report)?,
            text,
            passed,
        })
    }
}

/// Threshold check on a numerical quantity.
#[derive(Debug, Serialize)]
struct NumericCheck {
    identity: String,
    value: f64,
    threshold: String,
    status: &'static str,
}

impl NumericCheck {
    fn new(identity: impl Into<String>, value: f64, threshold: impl Into<String>, ok: bool) -> NumericCheck {
        NumericCheck {
            identity: identity.into(),
            value,
            threshold: threshold.into(),
            status: if ok { "pass" } else { "fail" },
        }
    }

    fn report_only(mut self) -> NumericCheck {
        if self.status == "fail" {
            self.status = "reported";
        }
        self
    }

    fn passed(&self) -> bool {
        self.status != "fail"
    }
}

#[derive(Serialize)]
struct SpectraOutput<'a> {
    #[serde(flatten)]
    report: &'a SpectralReport,
    checks: Vec<NumericCheck>,
}

fn spectra_outcome(report: &SpectralReport, checks: Vec<NumericCheck>) -> Result<Outcome> {
    let mut text = report.to_text();
    for c in &checks {
        text += &format!("  [{:<8}] {} = {:.4e} ({})\n", c.status, c.identity, c.value, c.threshold);
    }
    let passed = checks.iter().all(NumericCheck::passed);
    Outcome::new(&SpectraOutput { report, checks }, text, passed)
}

fn run_spectra(which: SpectraWhich, cfg: &Effective) -> Result<Outcome> {
    match which {
        SpectraWhich::Run => {
            let model = cfg.model()?;
            let report = compare_closed_form(&model)?;
            let exact = match model.particle {
                Particle::Spin1 => model.representation == Representation::Fw || model.params.g == 2.0,
                _ => true,
            };
            let tol = if model.particle == Particle::Spin0 { 1e-10 } else { 1e-8 };
            let mut closed = NumericCheck::new(
                "max relative residual vs closed form",
                report.max_relative_residual,
                format!("< {tol:e}"),
                report.max_relative_residual < tol && report.unmatched.is_empty(),
            );
            if !exact {
                closed = closed.report_only();
            }
            let mut checks = vec![
                NumericCheck::new("interior eigenvalues", report.interior_count as f64, "> 0", report.interior_count > 0),
                closed,
                NumericCheck::new("max |Im| on interior", report.max_imag_abs, "< 1e-8", report.max_imag_abs < 1e-8),
            ];
            if model.is_hermitian_form() {
                checks.push(NumericCheck::new(
                    "hermiticity defect",
                    report.hermiticity_defect,
                    "< 1e-14",
                    report.hermiticity_defect < 1e-14,
                ));
            }
            spectra_outcome(&report, checks)
        }
        SpectraWhich::AmmScan => {
            let report = amm_linearity_scan(&cfg.params(), &cfg.scan_values(), cfg.levels, cfg.scan_levels)
                ?;
            let slope = report.scan.as_ref().map_or(f64::NAN, |s| s.fitted_slope);
            let checks = vec![NumericCheck::new(
                "log-log slope of residual vs g - 2",
                slope,
                "in [1.8, 2.2]",
                (1.8..=2.2).contains(&slope),
            )];
            spectra_outcome(&report, checks)
        }
        SpectraWhich::EqprfScan => {
            let report = eqprf_residual_scan(&cfg.params(), &cfg.scan_values(), cfg.levels, cfg.scan_levels)
                ?;
            let scan = report.scan.as_ref().expect("scan reports carry a scan");
            let monotone = scan.residuals.windows(2).all(|w| w[0] <= w[1]);
            let checks = vec![
                NumericCheck::new("log-log slope of residual vs |e|B", scan.fitted_slope, "> 3.5", scan.fitted_slope > 3.5),
                NumericCheck::new(
                    "residual decreases monotonically as B -> 0",
                    if monotone { 1.0 } else { 0.0 },
                    "= 1",
                    monotone,
                ),
            ];
            spectra_outcome(&report, checks)
        }
        SpectraWhich::Eqrel => {
            let report = eqrel_check(&cfg.params(), cfg.levels)?;
            Outcome::new(&report, report.to_text(), report.passed())
        }
    }
}

fn check_report(report: &CheckReport) -> Result<Outcome> {
    Outcome::new(report, report.to_text(), report.passed())
}

fn run(cli: &Cli, cfg: &Effective) -> Result<Outcome> {
    let budget = cfg.budget();
    match &cli.command {
        Command::Derive { which } => match which {
            DeriveWhich::Eriksen => check_report(&eriksen::derive_report(&budget)?),
            DeriveWhich::Stepwise => check_report(&stepwise::derive_report(&budget)?),
            DeriveWhich::SecondStep => {
                let (_, r) = derive_second_step(&budget)?;
                let mut report = CheckReport::new("derive second-step", Some(budget));
                report.extend(r.checks.iter().cloned());
                let difference = json!({
                    "terms": r.projection.terms.iter().map(|t| json!({
                        "class": [t.class.0, t.class.1],
                        "bracket_text": t.bracket_text(),
                        "coeff": t.coeff.to_string(),
                        "m_exp": t.m_exp,
                        "order": t.order,
                    })).collect::<Vec<_>>(),
                    "residual": r.projection.residual.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                });
                let mut text = report.to_text();
                text += "  second step - iterative:\n";
                for t in &r.projection.terms {
                    text += &format!(
                        "    ({},{}) {} m^{} {}  [order {}]\n",
                        t.class.0,
                        t.class.1,
                        t.coeff,
                        t.m_exp,
                        t.bracket_text(),
                        t.order
                    );
                }
                let mut json = serde_json::to_value(&report)?;
                json["difference"] = difference;
                Ok(Outcome {
                    json,
                    text,
                    passed: report.passed(),
                })
            }
        },
        Command::Compare => {
            let eriksen = EriksenPipeline::run(&budget)?.h_fw;
            let iterative = expand_static(&budget)?;
            let report = diff_report(&eriksen, &iterative, &budget);
            let low_identical = report.differences_at_least(2);
            let verdict = Check::flag("every class with a difference of order <= 1 is identical", low_identical);
            let mut json = serde_json::to_value(&report)?;
            json["checks"] = serde_json::to_value([&verdict])?;
            let mut text = report.to_text("eriksen", "iterative");
            text += &format!("  [{:<8}] {}\n", verdict.status.to_string(), verdict.identity);
            Ok(Outcome {
                json,
                text,
                passed: low_identical,
            })
        }
        Command::Concretize { which } => {
            let report = match which {
                ConcretizeWhich::Electrostatic => derive_electrostatic(cfg.hbar_max),
                ConcretizeWhich::UniformField => verify_commutator(),
            };
            Outcome::new(&report, report.to_text(), report.passed())
        }
        Command::Spectra { which } => run_spectra(*which, cfg),
        Command::Expand { expr } => {
            let parsed = parse_expr(expr).map_err(|e| anyhow!("{e}\n  {expr}\n  {}^", " ".repeat(e.offset())))?;
            let expanded = parsed.expand(&budget)?;
            let json = json!({
                "input": expr,
                "bracket": parsed.to_string(),
                "budget": budget,
                "terms": expanded.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "expanded": expanded.to_string(),
            });
            Ok(Outcome {
                json,
                text: format!("{expanded}\n"),
                passed: true,
            })
        }
    }
}

fn write_outputs(cfg: &Effective, outcome: &Outcome) -> Result<()> {
    let json = serde_json::to_string_pretty(&outcome.json)? + "\n";
    let manifest = serde_json::to_string_pretty(cfg)? + "\n";
    match &cfg.out {
        Some(path) => {
            let body = match cfg.format {
                Format::Text => outcome.text.clone(),
                Format::Json | Format::Both => json,
            };
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            if cfg.format == Format::Both {
                let txt = suffixed(path, ".txt");
                std::fs::write(&txt, &outcome.text).with_context(|| format!("writing {}", txt.display()))?;
            }
            let mpath = suffixed(path, ".manifest.json");
            std::fs::write(&mpath, manifest).with_context(|| format!("writing {}", mpath.display()))?;
        }
        None => {
            match cfg.format {
                Format::Text => print!("{}", outcome.text),
                Format::Json => print!("{json}"),
                Format::Both => print!("{}{json}", outcome.text),
            }
            eprint!("manifest: {}", manifest);
        }
    }
    Ok(())
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match Effective::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    // Exit 1 is reserved for failed checks; every other error is a usage error.
    match run(&cli, &cfg).and_then(|o| write_outputs(&cfg, &o).map(|_| o.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
