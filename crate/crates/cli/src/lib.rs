//! Shared pieces of the `tribo` command: word specifications, CSV output and
//! the claim registry behind `tribo verify`.

pub mod claims;

use std::fmt;
use std::str::FromStr;

use tribo_core::{Error, FactorIndex, Morphism, ScanConfig, Symbol, WordBuffer};

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CLAIM_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE: i32 = 3;
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        e if e.is_saturation() => exit::RESOURCE,
        Error::InvalidInput(_) | Error::Configuration(_) | Error::Range { .. } => exit::USAGE,
        _ => exit::CLAIM_FAILURE,
    }
}

/// `tribonacci` or `mbonacci:<m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordSpec {
    Tribonacci,
    MBonacci(usize),
}

impl WordSpec {
    pub fn alphabet_size(self) -> usize {
        match self {
            WordSpec::Tribonacci => 3,
            WordSpec::MBonacci(m) => m,
        }
    }

    pub fn morphism(self) -> tribo_core::Result<Morphism> {
        match self {
            WordSpec::Tribonacci => Ok(Morphism::tribonacci()),
            WordSpec::MBonacci(m) => Morphism::mbonacci(m),
        }
    }

    pub fn buffer(self, min_len: usize, max_len: usize) -> tribo_core::Result<WordBuffer> {
        let seed = Symbol::new(0, self.alphabet_size())?;
        WordBuffer::with_limit(self.morphism()?, seed, min_len, max_len)
    }

    /// An index grown as far as scans up to `n_max` may need.
    pub fn index(
        self,
        n_max: usize,
        max_len: usize,
        config: &ScanConfig,
    ) -> tribo_core::Result<FactorIndex> {
        let mut index = FactorIndex::new(self.buffer(1, max_len)?);
        index.prepare(n_max, config)?;
        Ok(index)
    }
}

impl FromStr for WordSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "tribonacci" {
            return Ok(WordSpec::Tribonacci);
        }
        let m = s
            .strip_prefix("mbonacci:")
            .and_then(|m| m.parse::<usize>().ok())
            .ok_or_else(|| format!("expected `tribonacci` or `mbonacci:<m>`, got `{s}`"))?;
        if !(2..=tribo_core::word::MAX_ALPHABET).contains(&m) {
            return Err(format!(
                "m must be between 2 and {}",
                tribo_core::word::MAX_ALPHABET
            ));
        }
        Ok(WordSpec::MBonacci(m))
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Tribonacci => f.write_str("tribonacci"),
            WordSpec::MBonacci(m) => write!(f, "mbonacci:{m}"),
        }
    }
}

/// Fixed 12-significant-digit decimal rendering used in every CSV column.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.trim_start_matches(['-', '0', '.']).is_empty() {
        "0".into()
    } else {
        s
    }
}

/// A CSV table with a header row, written with LF line endings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Table { out }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for field in fields {
            if !first {
                self.out.push(',');
            }
            self.out.push_str(field.as_ref());
            first = false;
        }
        self.out.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.out
    }

    pub fn into_string(self) -> String {
        self.out
    }
}
