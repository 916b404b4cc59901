//! Symbol files, matrix dumps, function samples and coefficient files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toruspdo_core::apply::PeriodicFunction;
use toruspdo_core::assoc::{AssocMatrix, CoeffVector};
use toruspdo_core::expr::Expr;
use toruspdo_core::linalg::CMatrix;
use toruspdo_core::symbol::{Symbol, ToroidalGrid};

use crate::error::{CliError, Result};
use crate::json::{self, format_f64};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| CliError::Json { context: context.into(), source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolFileKind {
    ClosedForm,
    Multiplier,
    Sampled,
}

/// On-disk symbol description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub kind: SymbolFileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Column-major `[re, im]` pairs, `index = (k + K) Q + q`; sampled symbols only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl SymbolFile {
    pub fn load(path: &Path) -> Result<Self> {
        parse_json(&read_text(path)?, &path.display().to_string())
    }

    /// Build the symbol on the window `(K, Q)`.
    pub fn to_symbol(&self, k_window: usize, resolution: usize) -> Result<Symbol> {
        match self.kind {
            SymbolFileKind::ClosedForm | SymbolFileKind::Multiplier => {
                let src = self
                    .expr
                    .as_deref()
                    .ok_or_else(|| CliError::Format("symbol file needs an \"expr\" field".into()))?;
                let expr = Expr::parse(src)?;
                let multiplier = self.kind == SymbolFileKind::Multiplier;
                Ok(Symbol::from_expr(expr, multiplier, k_window, resolution)?)
            }
            SymbolFileKind::Sampled => {
                let samples = self
                    .samples
                    .as_ref()
                    .ok_or_else(|| CliError::Format("sampled symbol needs \"samples\"".into()))?;
                let (fq, fk) = match (self.q, self.k) {
                    (Some(q), Some(k)) => (q, k),
                    _ => return Err(CliError::Format("sampled symbol needs \"Q\" and \"K\"".into())),
                };
                if fq != resolution {
                    return Err(CliError::Config(format!(
                        "sampled symbol has Q={fq}, run asks for Q={resolution}"
                    )));
                }
                if k_window > fk {
                    return Err(CliError::Config(format!(
                        "sampled symbol has K={fk}, run asks for K={k_window}"
                    )));
                }
                let values = samples.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                let grid = ToroidalGrid::new(fq, fk, values)?.restrict(k_window)?;
                Ok(Symbol::sampled(grid)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixHeader {
    pub n: usize,
    #[serde(rename = "M")]
    pub band: usize,
    pub trusted_radius: Option<usize>,
}

/// `# {header}` line, then `j,k,re,im` for every entry in row-major order.
pub fn matrix_to_csv(matrix: &AssocMatrix) -> Result<String> {
    let header = MatrixHeader { n: matrix.n(), band: matrix.band(), trusted_radius: matrix.trusted_radius() };
    let header = serde_json::to_string(&header).map_err(|source| CliError::Json {
        context: "matrix header".into(),
        source,
    })?;
    let mut out = format!("# {header}\nj,k,re,im\n");
    for j in matrix.indices() {
        for k in matrix.indices() {
            let v = matrix.get(j, k);
            writeln!(out, "{j},{k},{},{}", format_f64(v.re), format_f64(v.im)).expect("String write");
        }
    }
    Ok(out)
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::Format(format!("line {line}: cannot parse {field:?} as a number")))
}

fn parse_index(field: &str, line: usize) -> Result<i64> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::Format(format!("line {line}: cannot parse {field:?} as an index")))
}

pub fn matrix_from_csv(text: &str) -> Result<AssocMatrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| CliError::Format("matrix dump must start with a '# {header}' line".into()))?;
    let header: MatrixHeader = parse_json(header, "matrix header")?;
    if lines.next().map(str::trim) != Some("j,k,re,im") {
        return Err(CliError::Format("expected column line j,k,re,im".into()));
    }
    let size = 2 * header.n + 1;
    let ni = header.n as i64;
    let mut entries = CMatrix::zeros(size, size);
    let mut data = entries.as_slice().to_vec();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(CliError::Format(format!("line {}: expected 4 fields", i + 3)));
        }
        let (j, k) = (parse_index(f[0], i + 3)?, parse_index(f[1], i + 3)?);
        if j.abs() > ni || k.abs() > ni {
            return Err(CliError::Format(format!("line {}: index outside window {}", i + 3, header.n)));
        }
        data[(j + ni) as usize * size + (k + ni) as usize] =
            Complex64::new(parse_f64(f[2], i + 3)?, parse_f64(f[3], i + 3)?);
    }
    entries = CMatrix::from_row_major(size, size, data)?;
    Ok(AssocMatrix::from_entries(header.n, header.band, header.trusted_radius, entries)?)
}

/// `Q,<Q>` line, then `q,re,im` rows.
pub fn function_to_csv(f: &PeriodicFunction) -> String {
    let mut out = format!("Q,{}\nq,re,im\n", f.resolution());
    for (q, v) in f.samples().iter().enumerate() {
        writeln!(out, "{q},{},{}", format_f64(v.re), format_f64(v.im)).expect("String write");
    }
    out
}

pub fn function_from_csv(text: &str) -> Result<PeriodicFunction> {
    let mut lines = text.lines();
    let resolution: usize = lines
        .next()
        .and_then(|l| l.trim().strip_prefix("Q,"))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| CliError::Format("function CSV must start with a 'Q,<n>' line".into()))?;
    if lines.next().map(str::trim) != Some("q,re,im") {
        return Err(CliError::Format("expected column line q,re,im".into()));
    }
    let mut samples = vec![Complex64::new(0.0, 0.0); resolution];
    let mut seen = vec![false; resolution];
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(CliError::Format(format!("line {}: expected 3 fields", i + 3)));
        }
        let q = parse_index(f[0], i + 3)?;
        if q < 0 || q as usize >= resolution {
            return Err(CliError::Format(format!("line {}: q={q} outside 0..{resolution}", i + 3)));
        }
        samples[q as usize] = Complex64::new(parse_f64(f[1], i + 3)?, parse_f64(f[2], i + 3)?);
        seen[q as usize] = true;
    }
    if let Some(q) = seen.iter().position(|s| !s) {
        return Err(CliError::Format(format!("missing sample q={q}")));
    }
    Ok(PeriodicFunction::from_samples(samples)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFile {
    pub n: usize,
    /// `[re, im]` for `k = -n ..= n`.
    pub coeffs: Vec<[f64; 2]>,
}

impl CoeffFile {
    pub fn from_vector(v: &CoeffVector) -> Self {
        Self { n: v.n(), coeffs: v.values().iter().map(|c| [c.re, c.im]).collect() }
    }

    pub fn to_vector(&self) -> Result<CoeffVector> {
        Ok(CoeffVector::new(self.n, self.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "coefficient file")
    }

    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

/// `q,k,re,im` rows of a sampled symbol, `k` outer.
pub fn grid_to_csv(grid: &ToroidalGrid) -> String {
    let mut out = format!("# Q={} K={}\nq,k,re,im\n", grid.resolution(), grid.k_window());
    for k in grid.ks() {
        for (q, v) in grid.column(k).iter().enumerate() {
            writeln!(out, "{q},{k},{},{}", format_f64(v.re), format_f64(v.im)).expect("String write");
        }
    }
    out
}
