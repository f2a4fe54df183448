//! JSON file formats for series and plants.
//!
//! A series file looks like
//!
//! ```json
//! {
//!   "version": 1,
//!   "nvars": 2,
//!   "terms": [
//!     { "exponents": [1, 1], "re": 1.0, "im": 0.0 }
//!   ]
//! }
//! ```
//!
//! A plant file carries numerator and denominator term lists plus an
//! optional Bezout witness pair:
//!
//! ```json
//! {
//!   "version": 1,
//!   "nvars": 2,
//!   "numerator": [ { "exponents": [1, 1], "re": 1.0, "im": 0.0 } ],
//!   "denominator": [
//!     { "exponents": [2, 2], "re": 1.0, "im": 0.0 },
//!     { "exponents": [0, 0], "re": -1.0, "im": 0.0 }
//!   ],
//!   "bezout": {
//!     "x": [ { "exponents": [1, 1], "re": 1.0, "im": 0.0 } ],
//!     "y": [ { "exponents": [0, 0], "re": -1.0, "im": 0.0 } ]
//!   }
//! }
//! ```
//!
//! Duplicate exponent tuples are rejected rather than summed: a file that
//! lists the same monomial twice is almost certainly a transcription
//! error, and the term index in the message points at it.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plant::CoprimenessEvidence;
use crate::series::Series;

pub const FORMAT_VERSION: u32 = 1;

/// One monomial: coefficient (re + i im) times the product of
/// variables raised to `exponents`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub version: u32,
    pub nvars: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BezoutRecord {
    pub x: Vec<TermRecord>,
    pub y: Vec<TermRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantFile {
    pub version: u32,
    pub nvars: usize,
    pub numerator: Vec<TermRecord>,
    pub denominator: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bezout: Option<BezoutRecord>,
}

fn check_version(version: u32) -> std::result::Result<(), String> {
    if version != FORMAT_VERSION {
        return Err(format!(
            "unsupported format version {version} (this build reads version {FORMAT_VERSION})"
        ));
    }
    Ok(())
}

/// Convert a term list under the declared dimension, rejecting duplicate
/// exponent tuples, wrong-length tuples, and non-finite coefficients.
/// `label` names the list ("terms", "numerator", ...) in messages.
fn terms_to_series(
    nvars: usize,
    terms: &[TermRecord],
    label: &str,
) -> std::result::Result<Series, String> {
    if nvars == 0 {
        return Err("nvars must be at least 1".to_string());
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        if t.exponents.len() != nvars {
            return Err(format!(
                "{label}[{i}]: exponent tuple has length {} but nvars is {nvars}",
                t.exponents.len()
            ));
        }
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(format!("{label}[{i}]: coefficient is not finite"));
        }
        if !seen.insert(t.exponents.clone()) {
            return Err(format!(
                "{label}[{i}]: duplicate exponent tuple {:?}",
                t.exponents
            ));
        }
        out.push((t.exponents.clone(), Complex64::new(t.re, t.im)));
    }
    Series::from_terms(nvars, out).map_err(|e| format!("{label}: {e}"))
}

fn series_to_terms(s: &Series) -> Vec<TermRecord> {
    s.terms()
        .map(|(exps, c)| TermRecord { exponents: exps.to_vec(), re: c.re, im: c.im })
        .collect()
}

impl SeriesFile {
    pub fn from_series(s: &Series) -> Self {
        SeriesFile { version: FORMAT_VERSION, nvars: s.nvars(), terms: series_to_terms(s) }
    }

    pub fn to_series(&self) -> std::result::Result<Series, String> {
        check_version(self.version)?;
        terms_to_series(self.nvars, &self.terms, "terms")
    }
}

impl PlantFile {
    /// Build a plant file from admitted factors. Witnesses are written
    /// back only when the plant was admitted through them.
    pub fn from_parts(num: &Series, den: &Series, evidence: &CoprimenessEvidence) -> Self {
        let bezout = match evidence {
            CoprimenessEvidence::Witnesses { x, y, .. } => Some(BezoutRecord {
                x: series_to_terms(x),
                y: series_to_terms(y),
            }),
            CoprimenessEvidence::SpectrumGap { .. } => None,
        };
        PlantFile {
            version: FORMAT_VERSION,
            nvars: num.nvars(),
            numerator: series_to_terms(num),
            denominator: series_to_terms(den),
            bezout,
        }
    }

    /// Parse into (numerator, denominator, optional witnesses).
    pub fn to_parts(&self) -> std::result::Result<(Series, Series, Option<(Series, Series)>), String> {
        check_version(self.version)?;
        let num = terms_to_series(self.nvars, &self.numerator, "numerator")?;
        let den = terms_to_series(self.nvars, &self.denominator, "denominator")?;
        let bezout = match &self.bezout {
            Some(b) => Some((
                terms_to_series(self.nvars, &b.x, "bezout.x")?,
                terms_to_series(self.nvars, &b.y, "bezout.y")?,
            )),
            None => None,
        };
        Ok((num, den, bezout))
    }
}

fn parse_error(path: &Path, message: impl ToString) -> Error {
    Error::Parse { path: path.display().to_string(), message: message.to_string() }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

pub fn load_series(path: &Path) -> Result<Series> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let file: SeriesFile = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    file.to_series().map_err(|m| parse_error(path, m))
}

pub fn save_series(path: &Path, s: &Series) -> Result<()> {
    let text = serde_json::to_string_pretty(&SeriesFile::from_series(s))
        .map_err(|e| parse_error(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_error(path, e))?;
    Ok(())
}

/// Load the raw parts of a plant file. Admission (witness verification or
/// the spectral fallback) happens in [`crate::plant::CoprimePlant::new`],
/// which needs a grid this module does not know about.
pub fn load_plant_parts(path: &Path) -> Result<(Series, Series, Option<(Series, Series)>)> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let file: PlantFile = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    file.to_parts().map_err(|m| parse_error(path, m))
}

pub fn save_plant(path: &Path, num: &Series, den: &Series, evidence: &CoprimenessEvidence) -> Result<()> {
    let text = serde_json::to_string_pretty(&PlantFile::from_parts(num, den, evidence))
        .map_err(|e| parse_error(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_error(path, e))?;
    Ok(())
}
