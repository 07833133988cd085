//! Flat `key = value` experiment configuration.
//!
//! Unknown keys are errors (they are usually typos), values are validated
//! eagerly, and every scenario fills in its own defaults for keys the file
//! leaves out, so a config can be as short as `scenario = subspace-exact`.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::estimator::MessagePolicy;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` appears twice")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: cannot accept `{value}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Exact syndrome decoding of a random subspace source.
    SubspaceExact,
    /// Random-code ensemble against a random flat source, exhaustive per code.
    RandEnsemble,
    /// Flat source concentrated on codewords of the transmission code.
    LinearAdversarial,
    /// Decoder-to-distinguisher reduction against an expander-based source.
    PrgDistinguisher,
    /// Sketch-based decoder for arbitrary sampler images.
    HashDecoder,
    /// Describe/recover round trips with exact counting.
    ReconRoundtrip,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::SubspaceExact,
        Scenario::RandEnsemble,
        Scenario::LinearAdversarial,
        Scenario::PrgDistinguisher,
        Scenario::HashDecoder,
        Scenario::ReconRoundtrip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::SubspaceExact => "subspace-exact",
            Scenario::RandEnsemble => "rand-ensemble",
            Scenario::LinearAdversarial => "linear-adversarial",
            Scenario::PrgDistinguisher => "prg-distinguisher",
            Scenario::HashDecoder => "hash-decoder",
            Scenario::ReconRoundtrip => "recon-roundtrip",
        }
    }

    /// (n, k, m, c, source, decoder, trials) the scenario assumes when the
    /// config does not override them.
    fn defaults(&self) -> (usize, usize, usize, u32, &'static str, &'static str, u64) {
        match self {
            Scenario::SubspaceExact => (12, 8, 4, 0, "subspace", "subspace", 0),
            Scenario::RandEnsemble => (24, 10, 6, 0, "flat-random", "table", 100),
            Scenario::LinearAdversarial => (16, 8, 4, 0, "codeword-flat", "table", 0),
            Scenario::PrgDistinguisher => (24, 10, 8, 0, "prg", "table", 10_000),
            Scenario::HashDecoder => (32, 14, 8, 1, "flat-map", "hash", 64),
            Scenario::ReconRoundtrip => (10, 2, 3, 0, "flat-map", "oracle", 100),
        }
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| ConfigError::BadValue {
            key: "scenario".into(),
            value: s.into(),
            reason: format!("known scenarios: {}", Scenario::ALL.map(|sc| sc.name()).join(", ")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub c: u32,
    pub source: String,
    pub decoder: String,
    pub trials: u64,
    pub seed: u64,
    pub message_policy: MessagePolicy,
}

const KEYS: [&str; 10] =
    ["scenario", "n", "k", "m", "c", "source", "decoder", "trials", "seed", "message_policy"];

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

impl ExperimentConfig {
    /// Scenario defaults with everything else untouched.
    pub fn for_scenario(scenario: Scenario) -> Self {
        let (n, k, m, c, source, decoder, trials) = scenario.defaults();
        ExperimentConfig {
            scenario,
            n,
            k,
            m,
            c,
            source: source.into(),
            decoder: decoder.into(),
            trials,
            seed: 1,
            message_policy: MessagePolicy::All,
        }
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut seen: BTreeMap<&str, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::Malformed { line, text: stripped.into() });
            };
            let (key, value) = (key.trim(), value.trim().to_string());
            let Some(canonical) = KEYS.iter().find(|k| **k == key) else {
                return Err(ConfigError::UnknownKey { line, key: key.into() });
            };
            if seen.insert(canonical, (line, value)).is_some() {
                return Err(ConfigError::DuplicateKey { line, key: key.into() });
            }
        }
        let scenario: Scenario = seen
            .get("scenario")
            .ok_or(ConfigError::MissingKey { key: "scenario".into() })?
            .1
            .parse()?;
        let mut cfg = ExperimentConfig::for_scenario(scenario);
        for (key, (_, value)) in &seen {
            match *key {
                "scenario" => {}
                "n" => cfg.n = parse_num(key, value)?,
                "k" => cfg.k = parse_num(key, value)?,
                "m" => cfg.m = parse_num(key, value)?,
                "c" => cfg.c = parse_num(key, value)?,
                "source" => cfg.source = value.clone(),
                "decoder" => cfg.decoder = value.clone(),
                "trials" => cfg.trials = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "message_policy" => cfg.message_policy = value.parse()?,
                _ => unreachable!("key list is closed"),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, reason: String| {
            Err(ConfigError::BadValue { key: key.into(), value: String::new(), reason })
        };
        if self.n == 0 || self.n > 64 {
            return bad("n", format!("block length {} outside 1..=64", self.n));
        }
        if self.k == 0 || self.k >= self.n {
            return bad("k", format!("need 0 < k < n, got k={}, n={}", self.k, self.n));
        }
        if self.m > self.n {
            return bad("m", format!("need m <= n, got m={}, n={}", self.m, self.n));
        }
        match self.scenario {
            Scenario::SubspaceExact => {
                if self.m == 0 || self.m >= self.n {
                    return bad("m", "subspace dimension must satisfy 0 < m < n".into());
                }
                if self.k != self.n - self.m {
                    return bad(
                        "k",
                        format!("subspace scenario forces k = n - m = {}", self.n - self.m),
                    );
                }
            }
            Scenario::RandEnsemble => {
                if self.n - self.k < self.m {
                    return bad("m", "ensemble bound needs n - k >= m".into());
                }
                if self.trials == 0 {
                    return bad("trials", "need at least one code".into());
                }
            }
            Scenario::LinearAdversarial => {
                if self.m == 0 || self.m > self.k {
                    return bad("m", "codeword source needs 0 < m <= k".into());
                }
            }
            Scenario::PrgDistinguisher => {
                if self.m == 0 || self.m >= self.n || self.m > 20 {
                    return bad("m", "seed length must satisfy 0 < m < n and m <= 20".into());
                }
                if self.trials == 0 {
                    return bad("trials", "need at least one trial".into());
                }
            }
            Scenario::HashDecoder => {
                if self.m == 0 || self.m > 24 {
                    return bad("m", "seed length outside 1..=24".into());
                }
                if self.c == 0 {
                    return bad("c", "failure exponent c must be positive".into());
                }
                if self.trials == 0 {
                    return bad("trials", "need at least one message".into());
                }
            }
            Scenario::ReconRoundtrip => {
                if self.m == 0 || self.m > 8 {
                    return bad("m", "table seed length outside 1..=8".into());
                }
                if self.n > 16 {
                    return bad("n", "candidate scans need n <= 16 here".into());
                }
                if self.n - self.k < self.m {
                    return bad("m", "distinct syndromes need n - k >= m".into());
                }
                if self.trials == 0 {
                    return bad("trials", "need at least one table".into());
                }
            }
        }
        Ok(())
    }

    /// Deterministic parameter listing for reports.
    pub fn params(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("n".into(), self.n.to_string());
        map.insert("k".into(), self.k.to_string());
        map.insert("m".into(), self.m.to_string());
        map.insert("c".into(), self.c.to_string());
        map.insert("source".into(), self.source.clone());
        map.insert("decoder".into(), self.decoder.clone());
        map.insert("trials".into(), self.trials.to_string());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("message_policy".into(), self.message_policy.name().into());
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# ensemble sweep
scenario = rand-ensemble
n = 24
k = 10
m = 6
trials = 100
seed = 42
message_policy = all
";
        let cfg = ExperimentConfig::from_text(text).unwrap();
        assert_eq!(cfg.scenario, Scenario::RandEnsemble);
        assert_eq!((cfg.n, cfg.k, cfg.m), (24, 10, 6));
        assert_eq!(cfg.trials, 100);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = ExperimentConfig::from_text("scenario = subspace-exact\n").unwrap();
        assert_eq!(cfg.n, 12);
        assert_eq!(cfg.k, cfg.n - cfg.m);
    }

    #[test]
    fn errors_name_the_offending_key() {
        let err =
            ExperimentConfig::from_text("scenario = subspace-exact\nbogus = 3\n").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey { line: 2, key: "bogus".into() });

        let err =
            ExperimentConfig::from_text("scenario = rand-ensemble\nn = twelve\n").unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "n"));

        let err = ExperimentConfig::from_text("n = 12\n").unwrap_err();
        assert_eq!(err, ConfigError::MissingKey { key: "scenario".into() });

        let err = ExperimentConfig::from_text("scenario = nonesuch\n").unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "scenario"));

        let err = ExperimentConfig::from_text("scenario = rand-ensemble\nwhat even\n").unwrap_err();
        assert!(matches!(err, ConfigError::Malformed { line: 2, .. }));

        let err = ExperimentConfig::from_text("scenario = rand-ensemble\nseed = 1\nseed = 2\n")
            .unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateKey { line: 3, .. }));
    }

    #[test]
    fn range_validation_names_the_key() {
        let err = ExperimentConfig::from_text("scenario = rand-ensemble\nk = 24\n").unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "k"));
        let err = ExperimentConfig::from_text("scenario = subspace-exact\nk = 3\n").unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "k"));
        let err = ExperimentConfig::from_text("scenario = rand-ensemble\nm = 20\n").unwrap_err();
        assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "m"));
    }
}
