//! Command-line arguments and their validation into a [`CliConfig`].

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extsplash_core::gfq::prime_power;
use extsplash_core::verify::{self, CheckError, CheckId, RunOptions, DEFAULT_BUDGET};
use extsplash_core::{FieldSpec, FieldTower};

/// Largest q accepted unless `--max-q` says otherwise.
pub const DEFAULT_MAX_Q: u32 = 5;

pub const DEFAULT_Q: u32 = 3;

#[derive(Parser, Debug)]
#[command(name = "extsplash", version, about = "Exterior splashes of PG(2,q^3) in the Bruck-Bose representation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run checks and write their reports.
    Verify(VerifyArgs),
    /// Serialize one of the canonical objects.
    Dump {
        #[arg(value_enum)]
        what: DumpWhat,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build the two subplanes through the common subline of the canonical pair.
    Construct(CommonArgs),
    /// Enumerate every exterior splash and the spectrum of pairwise intersections.
    Census(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Order of the base field; defaults to 3, or to the q of `--field`.
    #[arg(long)]
    pub q: Option<u32>,
    /// Field spec, e.g. `q=4;cubic=1,0,10;quad=1,1;base=1,1`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the size of any single enumeration.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_Q)]
    pub max_q: u32,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Comma-separated check ids, or `all`. Defaults to every applicable
    /// check except the conjecture checks.
    #[arg(long)]
    pub checks: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DumpWhat {
    Subplane,
    Splash,
    Covers,
    Transversals,
    SpecialConics,
    Spread,
}

impl DumpWhat {
    pub fn as_str(self) -> &'static str {
        match self {
            DumpWhat::Subplane => "subplane",
            DumpWhat::Splash => "splash",
            DumpWhat::Covers => "covers",
            DumpWhat::Transversals => "transversals",
            DumpWhat::SpecialConics => "special-conics",
            DumpWhat::Spread => "spread",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    NotPrimePower(u32),
    QTooLarge { q: u32, max: u32 },
    QMismatch { q: u32, field: u32 },
    Field(String),
    Check(CheckError),
    Empty,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NotPrimePower(q) => write!(f, "q={} is not a prime power", q),
            ConfigError::QTooLarge { q, max } => write!(f, "q={} exceeds the maximum {}", q, max),
            ConfigError::QMismatch { q, field } => write!(f, "--q {} disagrees with the field spec (q={})", q, field),
            ConfigError::Field(e) => write!(f, "bad field spec: {}", e),
            ConfigError::Check(e) => write!(f, "{}", e),
            ConfigError::Empty => write!(f, "no checks selected"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub tower: Arc<FieldTower>,
    pub opts: RunOptions,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl CliConfig {
    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn field_text(&self) -> String {
        self.tower.spec().to_text().unwrap_or_default()
    }

    pub fn from_args(a: &CommonArgs) -> Result<CliConfig, ConfigError> {
        let spec = match &a.field {
            Some(text) => {
                let spec = FieldSpec::parse(text).map_err(|e| ConfigError::Field(e.to_string()))?;
                if let Some(q) = a.q {
                    if q != spec.q() {
                        return Err(ConfigError::QMismatch { q, field: spec.q() });
                    }
                }
                spec
            }
            None => {
                let q = a.q.unwrap_or(DEFAULT_Q);
                check_q(q, a.max_q)?;
                FieldSpec::default_for(q).map_err(|e| ConfigError::Field(e.to_string()))?
            }
        };
        check_q(spec.q(), a.max_q)?;
        let tower = FieldTower::new(spec).map_err(|e| ConfigError::Field(e.to_string()))?;
        Ok(CliConfig {
            tower: Arc::new(tower),
            opts: RunOptions { seed: a.seed, budget: a.budget },
            out: a.out.clone(),
            format: a.format,
        })
    }
}

fn check_q(q: u32, max: u32) -> Result<(), ConfigError> {
    if prime_power(q).is_none() {
        return Err(ConfigError::NotPrimePower(q));
    }
    if q > max {
        return Err(ConfigError::QTooLarge { q, max });
    }
    Ok(())
}

/// Resolve `--checks` at `q`. Unknown ids and unmet preconditions are
/// rejected here, before any check runs.
pub fn select_checks(sel: Option<&str>, q: u32) -> Result<Vec<CheckId>, ConfigError> {
    let ids = match sel.map(str::trim) {
        None => verify::default_checks(q),
        Some("all") => verify::applicable_checks(q),
        Some(list) => {
            let mut ids = Vec::new();
            for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id = CheckId::parse(part).map_err(ConfigError::Check)?;
                id.precondition(q).map_err(ConfigError::Check)?;
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
            ids.sort();
            ids
        }
    };
    if ids.is_empty() {
        return Err(ConfigError::Empty);
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(q: Option<u32>, field: Option<&str>) -> CommonArgs {
        CommonArgs {
            q,
            field: field.map(String::from),
            seed: 0,
            budget: DEFAULT_BUDGET,
            out: None,
            format: Format::Json,
            max_q: DEFAULT_MAX_Q,
        }
    }

    #[test]
    fn q_validation() {
        assert!(CliConfig::from_args(&common(Some(2), None)).is_ok());
        assert_eq!(CliConfig::from_args(&common(Some(6), None)).unwrap_err(), ConfigError::NotPrimePower(6));
        assert_eq!(CliConfig::from_args(&common(Some(7), None)).unwrap_err(), ConfigError::QTooLarge { q: 7, max: 5 });
        assert_eq!(CliConfig::from_args(&common(None, None)).unwrap().q(), 3);
    }

    #[test]
    fn field_override() {
        let alt = FieldSpec::admissible(3, 1).unwrap().to_text().unwrap();
        let cfg = CliConfig::from_args(&common(None, Some(&alt))).unwrap();
        assert_eq!(cfg.field_text(), alt);
        assert!(matches!(CliConfig::from_args(&common(Some(2), Some(&alt))), Err(ConfigError::QMismatch { .. })));
    }

    #[test]
    fn check_selection() {
        assert_eq!(select_checks(Some("all"), 2).unwrap().len(), 24);
        assert_eq!(select_checks(None, 3).unwrap().len(), 23);
        assert_eq!(select_checks(Some("C-5.1, C-2.3"), 3).unwrap(), vec![CheckId::C2_3, CheckId::C5_1]);
        assert!(matches!(select_checks(Some("C-3.2"), 3), Err(ConfigError::Check(CheckError::PreconditionUnmet { .. }))));
        assert!(matches!(select_checks(Some("C-7.7"), 3), Err(ConfigError::Check(CheckError::UnknownCheck(_)))));
    }
}
