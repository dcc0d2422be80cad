//! Scenario files in, deterministic JSON reports out.

pub mod report;
pub mod scenario;

pub use report::{run, run_batch, Report, RunOptions};
pub use scenario::{parse_scenario, Analysis, ParseError, Scenario};

/// Environment variable for the default group-order cap.
pub const ENV_CAP_ORDER: &str = "TITS_CR_CAP_ORDER";
/// Environment variable for the default subspace-count cap.
pub const ENV_CAP_SUBSPACES: &str = "TITS_CR_CAP_SUBSPACES";

/// Exit status for a batch: 1 if any invariant failed, 2 if any scenario
/// could not be analyzed, 0 otherwise.
pub fn exit_status(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| !r.violations.is_empty()) {
        1
    } else if reports.iter().any(|r| r.error.is_some()) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(violations: &[&str], error: Option<&str>) -> Report {
        Report {
            id: "x".into(),
            value: serde_json::Value::Null,
            violations: violations.iter().map(|s| s.to_string()).collect(),
            error: error.map(str::to_string),
        }
    }

    #[test]
    fn violations_take_precedence_over_errors() {
        assert_eq!(exit_status(&[report(&[], None)]), 0);
        assert_eq!(exit_status(&[report(&[], Some("cap"))]), 2);
        assert_eq!(
            exit_status(&[report(&[], Some("cap")), report(&["oracle_agrees"], None)]),
            1
        );
    }
}
