//! Machine-readable results of axiom and closure checks.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

/// Where and how the worst residual was achieved.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub detail: String,
}

/// Result of one named check: verdict, worst residual, witness, tolerance.
/// Composite checks carry their sub-checks in `parts`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<String>,
    pub verdict: Verdict,
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    /// Composite report: worst residual over parts, pass iff all parts pass.
    pub fn combine(name: impl Into<String>, tolerance: f64, parts: Vec<CheckReport>) -> CheckReport {
        let max_residual = parts.iter().map(|p| p.max_residual).fold(0.0, f64::max);
        let verdict = Verdict::from_bool(parts.iter().all(|p| p.verdict.is_pass()));
        let witness = parts
            .iter()
            .filter(|p| p.max_residual >= max_residual)
            .filter_map(|p| p.witness.clone())
            .next();
        CheckReport {
            name: name.into(),
            bracket: None,
            verdict,
            max_residual,
            tolerance,
            witness,
            notes: None,
            parts,
        }
    }

    pub fn with_bracket(mut self, bracket: &crate::bigtangent::Bracket) -> CheckReport {
        self.bracket = Some(bracket.label());
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> CheckReport {
        self.notes = Some(notes.into());
        self
    }

    /// Override the verdict (composite checks whose meaning is not
    /// "all parts pass", e.g. agreement checks).
    pub fn with_verdict(mut self, ok: bool) -> CheckReport {
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn part(&self, name: &str) -> Option<&CheckReport> {
        self.parts.iter().find(|p| p.name == name)
    }

    /// One line per report, indented by nesting depth.
    pub fn render_text(&self, indent: usize) -> String {
        let mut out = String::new();
        let pad = "  ".repeat(indent);
        let bracket = self
            .bracket
            .as_ref()
            .map(|b| format!(" [{}]", b))
            .unwrap_or_default();
        out.push_str(&format!(
            "{}{} {}{}: max_residual={:.3e} (tol {:.1e})",
            pad, self.verdict, self.name, bracket, self.max_residual, self.tolerance
        ));
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness {:?} {}", w.point, w.detail));
        }
        if let Some(n) = &self.notes {
            out.push_str(&format!("  -- {}", n));
        }
        out.push('\n');
        for p in &self.parts {
            out.push_str(&p.render_text(indent + 1));
        }
        out
    }
}

/// Accumulates the worst residual and its witness across sample points.
#[derive(Clone, Debug, Default)]
pub struct ResidualTracker {
    max: f64,
    witness: Option<Witness>,
}

impl ResidualTracker {
    pub fn new() -> ResidualTracker {
        ResidualTracker::default()
    }

    pub fn observe(&mut self, residual: f64, point: &[f64], detail: impl Into<String>) {
        if residual >= self.max {
            self.max = residual;
            self.witness = Some(Witness {
                point: point.to_vec(),
                detail: detail.into(),
            });
        }
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn into_report(self, name: impl Into<String>, tolerance: f64) -> CheckReport {
        CheckReport {
            name: name.into(),
            bracket: None,
            verdict: Verdict::from_bool(self.max < tolerance),
            max_residual: self.max,
            tolerance,
            witness: self.witness,
            notes: None,
            parts: Vec::new(),
        }
    }
}
