//! Command-line front end: instance parsing, report schema and subcommands.

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use commands::{Format, OracleSettings, Span, TableName};
pub use error::{CliError, CliResult};
pub use instance::{parse_instance, read_instance};
pub use report::{compare_with_oracle, OracleAgreement, SolveReport};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "trilat/1";

/// Parses a number, also accepting `sqrt(x)`.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let v = match t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner.trim().parse::<f64>().map(f64::sqrt),
        None => t.parse::<f64>(),
    }
    .map_err(|e| format!("{t}: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{t}: not a finite number"))
    }
}

/// Parses `lo:hi`.
pub fn parse_span(text: &str) -> Result<Span, String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("{text}: expected lo:hi"))?;
    let span = Span { lo: parse_number(lo)?, hi: parse_number(hi)? };
    if span.lo > span.hi {
        return Err(format!("{text}: lo exceeds hi"));
    }
    Ok(span)
}
