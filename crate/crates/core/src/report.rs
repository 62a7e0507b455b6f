//! Machine-readable verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    True,
    False,
    /// True because a quantifier ranged over an empty set.
    VacuousTrue,
    /// A cap or budget was reached before the question was settled.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::True | Verdict::VacuousTrue)
    }

    /// Process exit status for a run ending in this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::True | Verdict::VacuousTrue => 0,
            Verdict::False => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

/// One run's outcome. `result` carries computed data for operations that
/// are not yes/no questions (enumerations, orbit lists and the like).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub property: String,
    pub instance: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<Value>,
    pub budget_used: u64,
    pub caps: BTreeMap<String, u64>,
    pub convention_notes: Vec<String>,
}

// Null is stored as absent so a report survives a JSON round trip unchanged.
fn present(v: impl Serialize) -> Option<Value> {
    Some(serde_json::to_value(v).expect("serializable")).filter(|v| !v.is_null())
}

impl Report {
    pub fn new(property: impl Into<String>, instance: Value, verdict: Verdict) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            property: property.into(),
            instance,
            verdict,
            witness: None,
            counterexample: None,
            result: None,
            budget_used: 0,
            caps: BTreeMap::new(),
            convention_notes: Vec::new(),
        }
    }

    pub fn witness(mut self, w: impl Serialize) -> Report {
        self.witness = present(w);
        self
    }

    pub fn counterexample(mut self, c: impl Serialize) -> Report {
        self.counterexample = present(c);
        self
    }

    pub fn result(mut self, r: impl Serialize) -> Report {
        self.result = present(r);
        self
    }

    pub fn budget(mut self, used: u64) -> Report {
        self.budget_used = used;
        self
    }

    pub fn cap(mut self, name: &str, value: u64) -> Report {
        self.caps.insert(name.to_owned(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Report {
        self.convention_notes.push(note.into());
        self
    }
}
