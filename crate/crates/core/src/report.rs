//! Verdict reports shared by every checker, and the sampling configuration
//! used for parametric backends.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How much of the relevant domain a verdict inspected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive,
    Sampled(usize),
}

impl Coverage {
    /// The weaker of two coverages; sample counts add up.
    pub fn combine(self, other: Coverage) -> Coverage {
        match (self, other) {
            (Coverage::Exhaustive, Coverage::Exhaustive) => Coverage::Exhaustive,
            (Coverage::Sampled(a), Coverage::Sampled(b)) => Coverage::Sampled(a.max(b)),
            (Coverage::Sampled(a), _) | (_, Coverage::Sampled(a)) => Coverage::Sampled(a),
        }
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coverage::Exhaustive => write!(f, "exhaustive"),
            Coverage::Sampled(n) => write!(f, "verified on {n} samples"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub coverage: Coverage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>, coverage: Coverage) -> Self {
        Verdict { check: check.into(), passed: true, coverage, witness: None, note: None }
    }

    pub fn fail(check: impl Into<String>, coverage: Coverage, witness: Vec<String>) -> Self {
        Verdict { check: check.into(), passed: false, coverage, witness: Some(witness), note: None }
    }

    pub fn from_outcome(check: impl Into<String>, coverage: Coverage, witness: Option<Vec<String>>) -> Self {
        match witness {
            None => Verdict::pass(check, coverage),
            Some(w) => Verdict::fail(check, coverage, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), verdicts: Vec::new() }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn coverage(&self) -> Coverage {
        self.verdicts.iter().fold(Coverage::Exhaustive, |c, v| c.combine(v.coverage))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for v in &self.verdicts {
            write!(f, "  [{}] {} ({})", if v.passed { "PASS" } else { "FAIL" }, v.check, v.coverage)?;
            if let Some(w) = &v.witness {
                write!(f, " witness: ({})", w.join(", "))?;
            }
            if let Some(n) = &v.note {
                write!(f, " -- {n}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Deterministic sampling for parametric backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0x5eed, samples: 256 }
    }
}

impl SampleConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        SampleConfig { seed, samples }
    }

    /// A fresh generator; `stream` separates independent sub-checks so that
    /// their samples do not depend on evaluation order.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}
