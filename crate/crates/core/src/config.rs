//! Run configuration shared by the CLI subcommands.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "MODCALC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub threads: usize,
    pub seed: u64,
    pub max_p: u64,
    pub max_m: u32,
    pub max_q: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            threads: 1,
            seed: 1,
            max_p: 1_000_003,
            max_m: 63,
            max_q: 1 << 62,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    /// Thread count from the flag, else the environment, else one.
    pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
        if let Some(t) = flag {
            return Ok(t);
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={v} is not a thread count"))),
            Err(_) => Ok(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::InvalidArgument("thread count must be >= 1".into()));
        }
        if self.max_p == 0 || self.max_m == 0 || self.max_q == 0 {
            return Err(Error::InvalidArgument("guards must be positive".into()));
        }
        Ok(())
    }

    /// Rejects parameters beyond the configured guards.
    pub fn check_params(&self, p: u64, m: u32, q: Option<u64>) -> Result<()> {
        if p > self.max_p {
            return Err(Error::InvalidArgument(format!("p = {p} exceeds the guard {}", self.max_p)));
        }
        if m > self.max_m {
            return Err(Error::InvalidArgument(format!("m = {m} exceeds the guard {}", self.max_m)));
        }
        if let Some(q) = q {
            if q > self.max_q {
                return Err(Error::InvalidArgument(format!("q = {q} exceeds the guard {}", self.max_q)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert!(c.check_params(3, 3, Some(27)).is_ok());
        assert!(c.check_params(3, 64, None).is_err());
        let bad = RunConfig { threads: 0, ..RunConfig::default() };
        assert!(bad.validate().is_err());
        assert_eq!(RunConfig::resolve_threads(Some(4)).unwrap(), 4);
    }
}
