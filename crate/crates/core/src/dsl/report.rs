//! Report records and their text/JSON renderings.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub line: usize,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<Output>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    /// 0 if everything passed, 1 on any FAIL, 3 on any ERROR.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Error) > 0 {
            super::EXIT_SEMANTIC
        } else if self.count(Status::Fail) > 0 {
            super::EXIT_FAIL
        } else {
            super::EXIT_PASS
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}: {}: {}", r.line, r.command, r.status));
            if let Some(t) = r.timing_ms {
                out.push_str(&format!(" ({t:.3} ms)"));
            }
            out.push('\n');
            if let Some(m) = &r.message {
                out.push_str(&format!("  error: {m}\n"));
            }
            if let Some(w) = &r.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
            if let Some(res) = &r.residual {
                out.push_str(&format!("  residual: {res}\n"));
            }
            for o in &r.outputs {
                out.push_str(&format!("  {} = {}\n", o.name, o.value));
            }
        }
        out.push_str(&format!(
            "summary: {} PASS, {} FAIL, {} ERROR\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Error)
        ));
        out
    }
}
