use std::fmt::Write;

use fraisse_core::report::{Report, Verdict};

fn word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "TRUE",
        Verdict::False => "FALSE",
        Verdict::VacuousTrue => "VACUOUS_TRUE",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

/// Human-readable rendering of a machine report.
pub fn human(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", r.property, word(r.verdict));
    for (label, v) in [("witness", &r.witness), ("counterexample", &r.counterexample), ("result", &r.result)] {
        if let Some(v) = v.as_ref().filter(|v| !v.is_null()) {
            let _ = writeln!(s, "{label}: {}", serde_json::to_string_pretty(v).expect("serializable"));
        }
    }
    if r.budget_used > 0 {
        let _ = writeln!(s, "budget used: {}", r.budget_used);
    }
    if !r.caps.is_empty() {
        let caps: Vec<String> = r.caps.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "caps: {}", caps.join(", "));
    }
    for n in &r.convention_notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}
