use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use shallowq::sim::EmbeddingReport;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_data: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_ancilla: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_gates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_gates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_before: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_after: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ancillae_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_depth_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_kinds: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub method: String,
    pub verdict: String,
    pub subspace_preserved: bool,
    pub max_leakage: f64,
    pub max_block_deviation: f64,
    pub global_phase_applied: f64,
    pub tolerance: f64,
    pub states_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

impl From<&EmbeddingReport> for Verification {
    fn from(r: &EmbeddingReport) -> Self {
        Self {
            method: r.method.as_str().into(),
            verdict: if r.pass { "pass" } else { "fail" }.into(),
            subspace_preserved: r.subspace_preserved,
            max_leakage: r.max_leakage,
            max_block_deviation: r.max_block_deviation,
            global_phase_applied: r.global_phase_applied,
            tolerance: r.tolerance,
            states_checked: r.states_checked,
            seed: r.seed,
        }
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key:<20} {value}");
        };
        line("command", self.command.clone());
        if let Some(p) = &self.pass {
            line("pass", p.clone());
        }
        let fields = [
            ("width_data", self.width_data),
            ("width_ancilla", self.width_ancilla),
            ("input_gates", self.input_gates),
            ("output_gates", self.output_gates),
            ("depth_before", self.depth_before),
            ("depth", self.depth_after),
            ("ancillae_used", self.ancillae_used),
            ("claimed_depth_bound", self.claimed_depth_bound),
        ];
        for (key, value) in fields {
            if let Some(v) = value {
                line(key, v.to_string());
            }
        }
        if let Some(kinds) = &self.gate_kinds {
            for (kind, count) in kinds {
                line(&format!("gates[{kind}]"), count.to_string());
            }
        }
        if let Some(v) = &self.verification {
            line("verdict", format!("{} ({})", v.verdict, v.method));
            line("max_leakage", format!("{:e}", v.max_leakage));
            line("max_block_deviation", format!("{:e}", v.max_block_deviation));
            line("global_phase", format!("{:.12}", v.global_phase_applied));
            line("tolerance", format!("{:e}", v.tolerance));
        }
        for note in &self.notes {
            line("note", note.clone());
        }
        line("wall_time_ms", format!("{:.3}", self.wall_time_ms));
        out
    }
}
