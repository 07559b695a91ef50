//! Suite reports: one item per identity, byte-stable JSON for fixed inputs
//! and seed.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub identity: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckItem {
    pub fn holds(identity: impl Into<String>) -> Self {
        CheckItem {
            identity: identity.into(),
            status: Status::Holds,
            witness: None,
        }
    }

    pub fn violated(identity: impl Into<String>, witness: serde_json::Value) -> Self {
        CheckItem {
            identity: identity.into(),
            status: Status::Violated,
            witness: Some(witness),
        }
    }

    pub fn of(identity: impl Into<String>, ok: bool, witness: Option<serde_json::Value>) -> Self {
        CheckItem {
            identity: identity.into(),
            status: if ok { Status::Holds } else { Status::Violated },
            witness: if ok { None } else { witness },
        }
    }

    pub fn info(identity: impl Into<String>, witness: serde_json::Value) -> Self {
        CheckItem {
            identity: identity.into(),
            status: Status::Info,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub items: Vec<CheckItem>,
    pub holds: usize,
    pub violated: usize,
    pub info: usize,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(
        suite: impl Into<String>,
        seed: u64,
        params: serde_json::Value,
        items: Vec<CheckItem>,
    ) -> Self {
        let holds = items.iter().filter(|i| i.status == Status::Holds).count();
        let violated = items.iter().filter(|i| i.status == Status::Violated).count();
        let info = items.iter().filter(|i| i.status == Status::Info).count();
        SuiteReport {
            suite: suite.into(),
            seed,
            params,
            items,
            holds,
            violated,
            info,
            passed: violated == 0,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} (seed {}): {} hold, {} violated, {} informational\n",
            self.suite, self.seed, self.holds, self.violated, self.info
        ));
        for item in &self.items {
            let tag = match item.status {
                Status::Holds => "ok",
                Status::Violated => "VIOLATED",
                Status::Info => "info",
            };
            out.push_str(&format!("  [{tag}] {}\n", item.identity));
            if let Some(witness) = &item.witness {
                if item.status != Status::Holds {
                    out.push_str(&format!("        {witness}\n"));
                }
            }
        }
        out
    }
}
