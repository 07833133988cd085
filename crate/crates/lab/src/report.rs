//! Deterministic JSON reports. Identical configs must serialize to
//! byte-identical output, so every collection used here has a stable order.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
}

impl Assertion {
    pub fn new(name: &str, pass: bool) -> Self {
        Assertion { name: name.into(), pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub params: BTreeMap<String, String>,
    /// Headline failure estimate (scenario-specific: pooled or worst-case).
    pub p_hat: f64,
    pub ci95: [f64; 2],
    /// Bound the headline estimate is judged against.
    pub bound: f64,
    pub assertions: Vec<Assertion>,
    /// Per-code ensemble rows, where the scenario produces them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble_csv: Option<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn assertion(&self, name: &str) -> Option<bool> {
        self.assertions.iter().find(|a| a.name == name).map(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            scenario: "demo".into(),
            params: [("n".to_string(), "12".to_string())].into(),
            p_hat: 0.125,
            ci95: [0.1, 0.15],
            bound: 0.25,
            assertions: vec![Assertion::new("below-bound", true)],
            ensemble_csv: None,
        }
    }

    #[test]
    fn json_shape_is_stable() {
        let text = sample().to_json();
        assert_eq!(text, sample().to_json());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["scenario"], "demo");
        assert_eq!(v["p_hat"], 0.125);
        assert_eq!(v["assertions"][0]["pass"], true);
        assert!(v.get("ensemble_csv").is_none());
    }

    #[test]
    fn all_pass_reflects_assertions() {
        let mut r = sample();
        assert!(r.all_pass());
        r.assertions.push(Assertion::new("broken", false));
        assert!(!r.all_pass());
        assert_eq!(r.assertion("broken"), Some(false));
        assert_eq!(r.assertion("missing"), None);
    }
}
