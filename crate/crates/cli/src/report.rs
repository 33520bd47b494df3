//! Reports: named outputs followed by ordered verdicts, rendered as text or
//! JSON. Residuals are canonical polynomial renderings.

use std::fmt::Write as _;

use graded_core::report::Check;
use serde::Serialize;

/// Sign and normalization choices every command works under.
pub const CONVENTIONS: [&str; 4] = [
    "derivatives act from the left",
    "derived bracket [[s1,P],s2] = -1 * algebroid bracket",
    "Q(xi^c) = -1/2 C^c_ab xi^a xi^b",
    "jet coordinates a_r = D^r x / r!",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check_id: String,
    pub verdict: &'static str,
    pub residual: Option<String>,
    pub weights: Option<String>,
    pub detail: String,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

impl From<Check> for Verdict {
    fn from(c: Check) -> Self {
        Verdict {
            check_id: c.id,
            verdict: if c.passed { "PASS" } else { "FAIL" },
            residual: c.residual.map(|r| r.render()),
            weights: c.weight,
            detail: c.detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub conventions: Vec<String>,
    pub outputs: Vec<Output>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
            outputs: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn output(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.outputs.push(Output {
            name: name.into(),
            value: value.into(),
        });
    }

    pub fn check(&mut self, c: Check) {
        self.verdicts.push(c.into());
    }

    pub fn checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.verdicts.extend(cs.into_iter().map(Verdict::from));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for c in &self.conventions {
            let _ = writeln!(out, "convention: {c}");
        }
        for o in &self.outputs {
            let _ = writeln!(out, "{} = {}", o.name, o.value);
        }
        for v in &self.verdicts {
            let _ = write!(out, "{} {}", v.verdict, v.check_id);
            if let Some(w) = &v.weights {
                let _ = write!(out, " weight {w}");
            }
            if !v.detail.is_empty() {
                let _ = write!(out, ": {}", v.detail);
            }
            if let Some(r) = &v.residual {
                let _ = write!(out, " [residual {r}]");
            }
            out.push('\n');
        }
        let failed = self.verdicts.iter().filter(|v| !v.passed()).count();
        let _ = writeln!(out, "summary: {} passed, {failed} failed", self.verdicts.len() - failed);
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
