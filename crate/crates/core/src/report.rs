//! Structured outcomes of verification runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::hess::HessenbergFunction;
use crate::poly::Polynomial;

const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    NotAttempted,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::NotAttempted => "not-attempted",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trunc: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<usize>,
}

impl Params {
    pub fn n(n: usize) -> Self {
        Params {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn n_h(h: &HessenbergFunction) -> Self {
        Params {
            n: Some(h.n()),
            h: Some(h.values().to_vec()),
            ..Default::default()
        }
    }

    pub fn with_trunc(mut self, d: u32) -> Self {
        self.trunc = Some(d);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        if let Some(h) = &self.h {
            let v: Vec<String> = h.iter().map(|x| x.to_string()).collect();
            parts.push(format!("h=({})", v.join(",")));
        }
        if let Some(m) = self.m {
            parts.push(format!("m={m}"));
        }
        if let Some(d) = self.trunc {
            parts.push(format!("trunc={d}"));
        }
        if let Some(t) = self.trials {
            parts.push(format!("trials={t}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Membership of one element in an ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub element: String,
    pub reduced_to_zero: bool,
}

/// One named part of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub status: Status,
    /// number of individual identities or memberships examined
    pub checked: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl SubCheck {
    pub fn new(name: impl Into<String>) -> Self {
        SubCheck {
            name: name.into(),
            status: Status::Pass,
            checked: 0,
            witnesses: Vec::new(),
            reason: None,
        }
    }

    /// Count one identity whose two sides differ by `diff`.
    pub fn record(&mut self, diff: Polynomial, label: impl FnOnce() -> String) {
        self.record_bool(diff.is_zero(), || format!("{}: difference {}", label(), diff));
    }

    pub fn record_bool(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness.into());
        }
    }

    pub fn inconclusive(&mut self, reason: impl Into<String>) {
        if self.status != Status::Fail {
            self.status = Status::Inconclusive;
        }
        self.reason.get_or_insert_with(|| reason.into());
    }

    pub fn not_attempted(&mut self, reason: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::NotAttempted;
        }
        self.reason.get_or_insert_with(|| reason.into());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub params: Params,
    pub status: Status,
    pub subchecks: Vec<SubCheck>,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, params: Params) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            params,
            status: Status::Pass,
            subchecks: Vec::new(),
            witnesses: Vec::new(),
            reason: None,
            certificates: Vec::new(),
            data: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn push(&mut self, sub: SubCheck) {
        self.subchecks.push(sub);
    }

    pub fn not_attempted(&mut self, reason: impl Into<String>) {
        let mut s = SubCheck::new("all");
        s.not_attempted(reason);
        self.subchecks.push(s);
        self.settle();
    }

    pub fn insert_data(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    /// Fold the subchecks into the overall status, witnesses and reason.
    pub fn finish(mut self) -> Self {
        self.settle();
        self
    }

    fn settle(&mut self) {
        let statuses: Vec<Status> = self.subchecks.iter().map(|s| s.status).collect();
        self.status = if statuses.contains(&Status::Fail) {
            Status::Fail
        } else if statuses.contains(&Status::Inconclusive) {
            Status::Inconclusive
        } else if !statuses.is_empty() && statuses.iter().all(|s| *s == Status::NotAttempted) {
            Status::NotAttempted
        } else {
            Status::Pass
        };
        self.witnesses = self
            .subchecks
            .iter()
            .filter(|s| s.status == Status::Fail)
            .flat_map(|s| s.witnesses.iter().map(move |w| format!("[{}] {w}", s.name)))
            .take(MAX_WITNESSES)
            .collect();
        if self.status == Status::Fail && self.witnesses.is_empty() {
            self.witnesses.push("a subcheck failed without a recorded witness".into());
        }
        self.reason = self
            .subchecks
            .iter()
            .filter(|s| matches!(s.status, Status::Inconclusive | Status::NotAttempted))
            .find_map(|s| s.reason.clone().map(|r| format!("[{}] {r}", s.name)));
        if self.status == Status::Inconclusive && self.reason.is_none() {
            self.reason = Some("inconclusive without a recorded reason".into());
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut r = self.clone();
        if !with_timing {
            r.wall_time_ms = None;
        }
        serde_json::to_value(&r).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{:<13} {} {}", self.status.as_str(), self.check_id, self.params);
        if let Some(ms) = self.wall_time_ms {
            s.push_str(&format!(" [{ms} ms]"));
        }
        s.push('\n');
        for sub in &self.subchecks {
            s.push_str(&format!(
                "  {:<13} {} ({} checked)",
                sub.status.as_str(),
                sub.name,
                sub.checked
            ));
            if let Some(r) = &sub.reason {
                s.push_str(&format!(": {r}"));
            }
            s.push('\n');
            for w in &sub.witnesses {
                s.push_str(&format!("    witness: {w}\n"));
            }
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::from("\\begin{tabular}{lll}\n\\hline\n");
        s.push_str(&format!(
            "\\multicolumn{{3}}{{l}}{{\\texttt{{{}}} {} : {}}}\\\\\n\\hline\n",
            self.check_id,
            self.params,
            self.status.as_str()
        ));
        for sub in &self.subchecks {
            s.push_str(&format!(
                "{} & {} & {} \\\\\n",
                sub.name,
                sub.status.as_str(),
                sub.checked
            ));
        }
        s.push_str("\\hline\n\\end{tabular}\n");
        s
    }
}

/// Exit code for a batch: 0 all pass, 1 any fail, 2 any inconclusive without a fail.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Inconclusive) {
        2
    } else {
        0
    }
}
