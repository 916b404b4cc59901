use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{read_text, SymbolFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Truncated associated matrix as a CSV dump
    Matrix,
    /// Gershgorin discs of the truncation
    Gershgorin,
    /// Eigenvalues of the truncation
    Eigs,
    /// Crone and Schur norm estimates
    Norm,
    /// Compactness / Riesz classification
    Classify,
    /// Asymptotic composition of two symbols
    Compose,
    /// Asymptotic adjoint symbol
    Adjoint,
    /// Apply the operator to sampled function values (--input)
    Apply,
    /// Discs, eigenvalues, norms and classification with cross-checks
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Matrix => "matrix",
            Command::Gershgorin => "gershgorin",
            Command::Eigs => "eigs",
            Command::Norm => "norm",
            Command::Classify => "classify",
            Command::Compose => "compose",
            Command::Adjoint => "adjoint",
            Command::Apply => "apply",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "toruspdo", version, about = "Periodic pseudo-differential operators as truncated matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Symbol file (JSON); repeat for `compose`
    #[arg(long = "symbol", global = true)]
    pub symbols: Vec<PathBuf>,

    /// Truncation window [-n, n]
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Frequency window [-K, K]
    #[arg(long = "K", global = true)]
    pub k_window: Option<usize>,

    /// Number of x samples (power of two)
    #[arg(long = "Q", global = true)]
    pub resolution: Option<usize>,

    /// Fourier window of the symbol in x
    #[arg(long = "M", global = true)]
    pub m_window: Option<usize>,

    #[arg(long = "expansion-order", global = true)]
    pub expansion_order: Option<usize>,

    #[arg(long = "max-power", global = true)]
    pub max_power: Option<usize>,

    #[arg(long = "tol-decay", global = true)]
    pub tol_decay: Option<f64>,

    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,

    /// Exit with status 2 when a verdict is UNDECIDED
    #[arg(long, global = true)]
    pub strict: bool,

    /// JSON file with default settings
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Function samples (CSV) or coefficients (JSON) for `apply`
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
}

/// Every field optional; used for config files and symbol-file windows.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSettings {
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k_window: Option<usize>,
    #[serde(rename = "Q")]
    pub resolution: Option<usize>,
    #[serde(rename = "M")]
    pub m_window: Option<usize>,
    #[serde(rename = "N")]
    pub expansion_order: Option<usize>,
    pub max_power: Option<usize>,
    pub tol_decay: Option<f64>,
    pub format: Option<OutputFormat>,
    pub strict: Option<bool>,
}

impl PartialSettings {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Json {
            context: path.display().to_string(),
            source,
        })
    }

    fn overlay(self, top: Self) -> Self {
        Self {
            n: top.n.or(self.n),
            k_window: top.k_window.or(self.k_window),
            resolution: top.resolution.or(self.resolution),
            m_window: top.m_window.or(self.m_window),
            expansion_order: top.expansion_order.or(self.expansion_order),
            max_power: top.max_power.or(self.max_power),
            tol_decay: top.tol_decay.or(self.tol_decay),
            format: top.format.or(self.format),
            strict: top.strict.or(self.strict),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub n: usize,
    #[serde(rename = "K")]
    pub k_window: usize,
    #[serde(rename = "Q")]
    pub resolution: usize,
    #[serde(rename = "M")]
    pub m_window: usize,
    #[serde(rename = "N")]
    pub expansion_order: usize,
    pub max_power: usize,
    pub tol_decay: f64,
    pub format: OutputFormat,
    pub strict: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            n: 32,
            k_window: 64,
            resolution: 1024,
            m_window: 32,
            expansion_order: 4,
            max_power: 16,
            tol_decay: 1e-3,
            format: OutputFormat::Json,
            strict: false,
        }
    }
}

impl Settings {
    fn from_partial(p: PartialSettings) -> Self {
        let d = Self::default();
        Self {
            n: p.n.unwrap_or(d.n),
            k_window: p.k_window.unwrap_or(d.k_window),
            resolution: p.resolution.unwrap_or(d.resolution),
            m_window: p.m_window.unwrap_or(d.m_window),
            expansion_order: p.expansion_order.unwrap_or(d.expansion_order),
            max_power: p.max_power.unwrap_or(d.max_power),
            tol_decay: p.tol_decay.unwrap_or(d.tol_decay),
            format: p.format.unwrap_or(d.format),
            strict: p.strict.unwrap_or(d.strict),
        }
    }

    /// Window coherence and parameter ranges, checked before any computation.
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(CliError::Config(m));
        if self.resolution < 2 || !self.resolution.is_power_of_two() {
            return err(format!("Q must be a power of two >= 2, got {}", self.resolution));
        }
        if self.resolution < 2 * (self.m_window + self.n) + 1 {
            return err(format!(
                "Q = {} is below 2(M+n)+1 = {}",
                self.resolution,
                2 * (self.m_window + self.n) + 1
            ));
        }
        if self.n > self.k_window {
            return err(format!("n = {} exceeds K = {}", self.n, self.k_window));
        }
        if self.k_window == 0 {
            return err("K must be >= 1".into());
        }
        if self.expansion_order == 0 || self.expansion_order > 20 {
            return err(format!("expansion order must be in 1..=20, got {}", self.expansion_order));
        }
        if self.max_power == 0 {
            return err("max-power must be >= 1".into());
        }
        if !(self.tol_decay > 0.0 && self.tol_decay.is_finite()) {
            return err(format!("tol-decay must be positive, got {}", self.tol_decay));
        }
        Ok(())
    }
}

/// A fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub symbols: Vec<(PathBuf, SymbolFile)>,
    pub settings: Settings,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    /// Precedence: flags, then the config file, then the first symbol file's
    /// `Q`/`K`, then the defaults.
    pub fn resolve(cli: Cli) -> Result<Self> {
        let symbols = cli
            .symbols
            .iter()
            .map(|p| Ok((p.clone(), SymbolFile::load(p)?)))
            .collect::<Result<Vec<_>>>()?;
        let from_symbol = symbols
            .first()
            .map(|(_, f)| PartialSettings { k_window: f.k, resolution: f.q, ..Default::default() })
            .unwrap_or_default();
        let from_config = match &cli.config {
            Some(p) => PartialSettings::load(p)?,
            None => PartialSettings::default(),
        };
        let from_flags = PartialSettings {
            n: cli.n,
            k_window: cli.k_window,
            resolution: cli.resolution,
            m_window: cli.m_window,
            expansion_order: cli.expansion_order,
            max_power: cli.max_power,
            tol_decay: cli.tol_decay,
            format: cli.format,
            strict: cli.strict.then_some(true),
        };
        let settings = Settings::from_partial(from_symbol.overlay(from_config).overlay(from_flags));
        settings.validate()?;
        let needed = match cli.command {
            Command::Compose => 2,
            _ => 1,
        };
        if symbols.len() != needed {
            return Err(CliError::Config(format!(
                "`{}` needs {needed} --symbol file(s), got {}",
                cli.command.name(),
                symbols.len()
            )));
        }
        if cli.command == Command::Apply && cli.input.is_none() {
            return Err(CliError::Config("`apply` needs --input".into()));
        }
        Ok(Self { command: cli.command, symbols, settings, out: cli.out, input: cli.input })
    }
}
