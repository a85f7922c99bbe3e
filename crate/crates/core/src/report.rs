//! Structured verdicts for certifications and audits.

use serde::Serialize;
use serde_json::Value;

/// Version of the JSON document layout emitted by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subject {
    pub sequence: String,
    pub property: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// The property holds at every index of the range.
    HoldsOnRange,
    /// The property fails at `index`; `witness` is an exact value that shows it.
    FirstViolation { index: i64, witness: String },
    /// The property holds on `[n, range end]` and not from any earlier index.
    Threshold { n: i64 },
    /// No stable behavior was found on the range.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub subject: Subject,
    pub verdict: Verdict,
    pub range: [i64; 2],
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl AnalysisReport {
    pub fn new(sequence: impl Into<String>, property: impl Into<String>, range: (i64, i64), verdict: Verdict) -> Self {
        AnalysisReport {
            subject: Subject { sequence: sequence.into(), property: property.into() },
            verdict,
            range: [range.0, range.1],
            notes: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::HoldsOnRange)
    }

    /// True unless the verdict records a violation or mixed behavior.
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::HoldsOnRange | Verdict::Threshold { .. })
    }

    pub fn first_violation(&self) -> Option<(i64, &str)> {
        match &self.verdict {
            Verdict::FirstViolation { index, witness } => Some((*index, witness)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let v = match &self.verdict {
            Verdict::HoldsOnRange => "holds".to_string(),
            Verdict::FirstViolation { index, witness } => format!("first violation at n={index} (witness {witness})"),
            Verdict::Threshold { n } => format!("holds from n={n}"),
            Verdict::Mixed => "mixed".to_string(),
        };
        format!(
            "{} / {} on [{}, {}]: {}",
            self.subject.sequence, self.subject.property, self.range[0], self.range[1], v
        )
    }
}
