use std::fmt;

use polardeg_core::catalog::CatalogError;
use polardeg_core::poly::PolyError;
use polardeg_core::{FormulaError, OracleError};

/// Exit codes are part of the command-line contract.
pub const EXIT_INCONSISTENT: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;
pub const EXIT_BUDGET: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, msg: msg.into() }
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        let code = match e {
            FormulaError::Inconsistent(_) | FormulaError::YomdinViolation { .. } => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } => CliError { code: EXIT_BUDGET, msg: e.to_string() },
            OracleError::Formula(inner) => inner.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::input(e.to_string())
    }
}
