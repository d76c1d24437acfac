use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub paper_ref: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<BTreeMap<String, usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    /// Left out unless asked for, so reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(suite: &str, inputs_digest: String) -> VerificationReport {
        VerificationReport { suite: suite.into(), inputs_digest, checks: Vec::new(), wall_time_ms: None }
    }

    pub fn pass(&mut self, id: &str, paper_ref: &str) -> &mut Check {
        self.push(Check { id: id.into(), paper_ref: paper_ref.into(), status: Status::Pass, witness: None, dims: None })
    }

    /// A failing check always carries its witness.
    pub fn fail(&mut self, id: &str, paper_ref: &str, witness: Value) -> &mut Check {
        self.push(Check {
            id: id.into(),
            paper_ref: paper_ref.into(),
            status: Status::Fail,
            witness: Some(witness),
            dims: None,
        })
    }

    /// `witness` is reported only if the check fails.
    pub fn outcome(&mut self, id: &str, paper_ref: &str, ok: bool, witness: Value) -> &mut Check {
        if ok {
            self.pass(id, paper_ref)
        } else {
            self.fail(id, paper_ref, witness)
        }
    }

    /// A probe reports what it found either way.
    pub fn probe(&mut self, id: &str, paper_ref: &str, ok: bool, found: Value) -> &mut Check {
        let c = self.outcome(id, paper_ref, ok, found.clone());
        c.witness = Some(found);
        c
    }

    fn push(&mut self, c: Check) -> &mut Check {
        assert!(self.checks.iter().all(|x| x.id != c.id), "duplicate check id {}", c.id);
        self.checks.push(c);
        self.checks.last_mut().expect("just pushed")
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        jetcalc::io::to_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = write!(out, "[{tag}] {}", c.id);
            if let Some(d) = &c.dims {
                let dims: Vec<String> = d.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, "  {}", dims.join(" "));
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
        }
        out
    }
}

impl Check {
    pub fn dim(&mut self, key: &str, value: usize) -> &mut Check {
        self.dims.get_or_insert_with(BTreeMap::new).insert(key.into(), value);
        self
    }
}

/// SHA-256 over the inputs, each prefixed by its role and length.
pub fn digest_inputs(inputs: &[(&str, &[u8])]) -> String {
    let mut h = Sha256::new();
    for (role, bytes) in inputs {
        h.update(role.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
