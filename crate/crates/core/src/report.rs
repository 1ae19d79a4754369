//! The verification-ledger record and its renderers.
//!
//! The machine-first artifact is a JSON array of `IdentityCheckReport`
//! objects, one per catalog entry, sorted by id. The table renderer is a
//! separate read path over the same file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terminal status of an identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    /// Printed form holds at tolerance on all samples.
    #[serde(rename = "PASS")]
    Pass,
    /// Printed form fails but the derived corrected form holds.
    #[serde(rename = "CORRECTED")]
    Corrected,
    /// Neither form holds; diagnostics are in the corrected-form field.
    #[serde(rename = "FAIL")]
    Fail,
}

/// One row of the verification ledger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheckReport {
    pub id: String,
    #[serde(rename = "paperEq")]
    pub paper_eq: String,
    /// Deciding residual: printed-form residual for PASS/FAIL, corrected-form
    /// residual for CORRECTED.
    pub residual: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    /// Description of the corrected form (and the printed form's residual)
    /// when one was used, or failure diagnostics.
    #[serde(rename = "correctedForm")]
    pub corrected_form: Option<String>,
    pub samples: usize,
}

/// Serialize a ledger deterministically (sorted by id, pretty JSON).
pub fn to_json(reports: &[IdentityCheckReport]) -> Result<String> {
    let mut sorted: Vec<&IdentityCheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    serde_json::to_string_pretty(&sorted).map_err(|e| Error::ParseError(e.to_string()))
}

pub fn from_json(text: &str) -> Result<Vec<IdentityCheckReport>> {
    serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
}

/// Render the ledger as a fixed-width table, sorted by id.
pub fn render_table(reports: &[IdentityCheckReport]) -> String {
    let mut sorted: Vec<&IdentityCheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    out.push_str(&format!(
        "{:<22} {:<12} {:>12} {:>10} {:<9} {}\n",
        "id", "equation", "residual", "tol", "status", "notes"
    ));
    out.push_str(&"-".repeat(92));
    out.push('\n');
    for r in sorted {
        let status = match r.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Corrected => "CORRECTED",
            CheckStatus::Fail => "FAIL",
        };
        out.push_str(&format!(
            "{:<22} {:<12} {:>12.3e} {:>10.1e} {:<9} {}\n",
            r.id,
            r.paper_eq,
            r.residual,
            r.tolerance,
            status,
            r.corrected_form.as_deref().unwrap_or("")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(id: &str, status: CheckStatus) -> IdentityCheckReport {
        IdentityCheckReport {
            id: id.into(),
            paper_eq: "(9.9)".into(),
            residual: 1.2e-11,
            tolerance: 1e-8,
            status,
            corrected_form: match status {
                CheckStatus::Corrected => Some("denominator P+Q".into()),
                _ => None,
            },
            samples: 30,
        }
    }

    #[test]
    fn json_round_trip_and_status_names() {
        let reports = vec![sample("eq9.9", CheckStatus::Corrected)];
        let text = to_json(&reports).unwrap();
        assert!(text.contains("\"CORRECTED\""));
        assert!(text.contains("\"paperEq\""));
        assert!(text.contains("\"correctedForm\""));
        let back = from_json(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].status, CheckStatus::Corrected);
    }

    #[test]
    fn table_rendering() {
        let empty = render_table(&[]);
        assert!(empty.lines().count() == 2); // header + rule only
        let t = render_table(&[
            sample("b", CheckStatus::Pass),
            sample("a", CheckStatus::Corrected),
        ]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with('a'));
        assert!(lines[2].contains("denominator P+Q"));
    }

    #[test]
    fn serialization_is_deterministic() {
        let reports = vec![sample("z", CheckStatus::Pass), sample("a", CheckStatus::Fail)];
        assert_eq!(to_json(&reports).unwrap(), to_json(&reports).unwrap());
    }
}
