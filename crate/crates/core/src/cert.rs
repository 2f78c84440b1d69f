use std::fmt;

use serde::Serialize;

use crate::graded::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of an exact identity check. A failing certificate names the
/// offending input (`witness`) and the nonzero residual in canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl Certificate {
    pub fn pass(check: impl Into<String>) -> Self {
        Certificate {
            check: check.into(),
            status: Status::Pass,
            witness: None,
            residual: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Into<String>, residual: &Polynomial) -> Self {
        Certificate {
            check: check.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            residual: Some(residual.to_string()),
        }
    }

    /// Passes iff every `(witness, residual)` pair has a zero residual;
    /// otherwise reports the first nonzero one.
    pub fn from_residuals(
        check: impl Into<String>,
        residuals: impl IntoIterator<Item = (String, Polynomial)>,
    ) -> Self {
        let check = check.into();
        for (w, r) in residuals {
            if !r.is_zero() {
                return Certificate::fail(check, w, &r);
            }
        }
        Certificate::pass(check)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "{} {}", self.check, status)?;
        if let Some(w) = &self.witness {
            write!(f, " at {w}")?;
        }
        if let Some(r) = &self.residual {
            write!(f, ": {r}")?;
        }
        Ok(())
    }
}
