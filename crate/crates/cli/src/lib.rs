//! Command line surface for `tricx`: the module file format, reports, the
//! randomized verification suites and the subcommands.

pub mod commands;
pub mod format;
pub mod report;
pub mod suites;

pub use commands::{execute, Command, Output, RandomKind, Side};
pub use report::Report;
pub use suites::{Suite, SuiteConfig};

/// Exit status when every check passes.
pub const EXIT_OK: i32 = 0;
/// Exit status when a check fails or an isomorphism search is inconclusive.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;

/// Parses `lo:hi`.
pub fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: i32 = lo.trim().parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
    let hi: i32 = hi.trim().parse().map_err(|_| format!("bad upper bound in `{s}`"))?;
    if lo > hi {
        return Err(format!("empty window `{s}`"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("-2:2"), Ok((-2, 2)));
        assert!(parse_window("2:-2").is_err());
        assert!(parse_window("3").is_err());
    }
}
