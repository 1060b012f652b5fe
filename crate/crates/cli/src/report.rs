//! Serializable verification reports.

use std::collections::BTreeMap;

use kspectra_core::verify::{StepCampaign, Verdict, VerificationReport};
use kspectra_core::{CanonicalLabel, Family};
use serde::Serialize;

use crate::format::{sig12, to_graph6};

/// Settings that determine a verification run. The worker count is left
/// out on purpose: reports must not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub n_max: usize,
    pub gap_tol: f64,
    pub steps: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: VerifyConfig,
}

impl Provenance {
    pub fn new(config: VerifyConfig) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankJson {
    pub rank: usize,
    pub label: String,
    pub q1: f64,
    pub s1: usize,
    pub l: usize,
    /// Named family the class belongs to, if any.
    pub family: Option<&'static str>,
    pub graph6: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictJson {
    pub claim: &'static str,
    pub verdict: &'static str,
    pub gap: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepsJson {
    pub climbs: usize,
    pub longest_climb: usize,
    pub l_steps: usize,
    pub two_tip_steps: usize,
    pub branches: BTreeMap<String, usize>,
    pub failures: Vec<String>,
    pub min_gap: Option<f64>,
}

impl From<&StepCampaign> for StepsJson {
    fn from(c: &StepCampaign) -> Self {
        StepsJson {
            climbs: c.climbs,
            longest_climb: c.longest_climb,
            l_steps: c.l_steps,
            two_tip_steps: c.two_tip_steps,
            branches: c
                .two_tip_branches
                .iter()
                .map(|(b, &count)| (format!("{b:?}"), count))
                .collect(),
            failures: c.failures.clone(),
            min_gap: c.min_gap.map(sig12),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportJson {
    pub n: usize,
    pub k: usize,
    pub class_size: usize,
    pub min_gap: Option<f64>,
    pub verdicts: Vec<VerdictJson>,
    pub ranking: Vec<RankJson>,
    pub steps: Option<StepsJson>,
    pub provenance: Provenance,
}

/// One CSV row per isomorphism class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub label: String,
    pub q1: f64,
    pub s1: usize,
    pub l: usize,
    pub family: String,
    pub graph6: String,
}

/// Verdicts of a whole run, most severe first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Fail,
    Inconclusive,
    Pass,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// A verified grid point with the family each class belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOutcome {
    pub report: VerificationReport,
    pub steps: Option<StepCampaign>,
    pub families: BTreeMap<CanonicalLabel, Family>,
}

impl PointOutcome {
    pub fn status(&self) -> Status {
        let step_failed = self.steps.as_ref().is_some_and(|s| !s.failures.is_empty());
        if self.report.any(Verdict::Fail) || step_failed {
            Status::Fail
        } else if self.report.any(Verdict::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    fn family(&self, label: &CanonicalLabel) -> Option<&'static str> {
        self.families.get(label).map(|f| f.name())
    }

    pub fn to_json(&self, provenance: &Provenance) -> anyhow::Result<ReportJson> {
        let r = &self.report;
        let ranking = r
            .ranking
            .iter()
            .enumerate()
            .map(|(i, row)| {
                Ok(RankJson {
                    rank: i + 1,
                    label: row.label.to_hex(),
                    q1: sig12(row.q1),
                    s1: row.simplicial,
                    l: row.l,
                    family: self.family(&row.label),
                    graph6: to_graph6(&row.graph)?,
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(ReportJson {
            n: r.n,
            k: r.k,
            class_size: r.class_size,
            min_gap: r.min_gap.map(sig12),
            verdicts: r
                .verdicts
                .iter()
                .map(|v| VerdictJson {
                    claim: v.claim.name(),
                    verdict: v.verdict.name(),
                    gap: v.gap.map(sig12),
                    detail: v.detail.clone(),
                })
                .collect(),
            ranking,
            steps: self.steps.as_ref().map(StepsJson::from),
            provenance: provenance.clone(),
        })
    }

    pub fn csv_rows(&self) -> anyhow::Result<Vec<CsvRow>> {
        let r = &self.report;
        r.ranking
            .iter()
            .enumerate()
            .map(|(i, row)| {
                Ok(CsvRow {
                    n: r.n,
                    k: r.k,
                    rank: i + 1,
                    label: row.label.to_hex(),
                    q1: sig12(row.q1),
                    s1: row.simplicial,
                    l: row.l,
                    family: self.family(&row.label).unwrap_or("").to_string(),
                    graph6: to_graph6(&row.graph)?,
                })
            })
            .collect()
    }

    /// One line summarizing the point for the terminal.
    pub fn summary(&self) -> String {
        let r = &self.report;
        let mut line = format!(
            "n={:<2} k={} classes={:<5} {:<12}",
            r.n,
            r.k,
            r.class_size,
            self.status().name()
        );
        match r.min_gap {
            Some(g) => line.push_str(&format!(" min_gap={:.6e}", g)),
            None => line.push_str(" min_gap=-"),
        }
        for v in r.verdicts.iter().filter(|v| v.verdict != Verdict::Pass) {
            line.push_str(&format!(" {}={}", v.claim.name(), v.verdict.name()));
        }
        if let Some(s) = &self.steps {
            if !s.failures.is_empty() {
                line.push_str(&format!(" step-failures={}", s.failures.len()));
            }
        }
        line
    }
}

/// The most severe status, `Pass` for an empty run.
pub fn overall(outcomes: &[PointOutcome]) -> Status {
    outcomes.iter().map(PointOutcome::status).min().unwrap_or(Status::Pass)
}
