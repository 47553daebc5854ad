use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// The runnable experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    RigidityScan,
    FoldingCoeffs,
    ChaconLimits,
    KroneckerDemo,
    FockDemo,
    LampertiSpectrum,
    SemigroupSanity,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::RigidityScan,
        ExperimentKind::FoldingCoeffs,
        ExperimentKind::ChaconLimits,
        ExperimentKind::KroneckerDemo,
        ExperimentKind::FockDemo,
        ExperimentKind::LampertiSpectrum,
        ExperimentKind::SemigroupSanity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RigidityScan => "rigidity-scan",
            ExperimentKind::FoldingCoeffs => "folding-coeffs",
            ExperimentKind::ChaconLimits => "chacon-limits",
            ExperimentKind::KroneckerDemo => "kronecker-demo",
            ExperimentKind::FockDemo => "fock-demo",
            ExperimentKind::LampertiSpectrum => "lamperti-spectrum",
            ExperimentKind::SemigroupSanity => "semigroup-sanity",
        }
    }

    /// Short topic tag embedded in every report.
    pub fn anchor(self) -> &'static str {
        match self {
            ExperimentKind::RigidityScan => "rotation rigidity along continued-fraction denominators",
            ExperimentKind::FoldingCoeffs => "folding map Fourier coefficients",
            ExperimentKind::ChaconLimits => "Chacon weak limits at tower heights",
            ExperimentKind::KroneckerDemo => "unimodular matching and powers of multiplication operators",
            ExperimentKind::FockDemo => "symmetric Fock lifts and the cyclic-shift commutant",
            ExperimentKind::LampertiSpectrum => "Lamperti approximate eigenvectors on Rokhlin towers",
            ExperimentKind::SemigroupSanity => "closure of the weak limit semigroup",
        }
    }

    /// Accepted keys and their defaults.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            ExperimentKind::RigidityScan => &[
                ("rotation", "golden"),
                ("trunc", "64"),
                ("terms", "32"),
                ("n_max", "1000"),
                ("lambda_turns", "0"),
                ("tol", "1e-2"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::FoldingCoeffs => &[
                ("trunc", "16"),
                ("n_max", "25"),
                ("threshold", "1e-8"),
                ("tol", "1e-12"),
                ("quad_tol", "1e-10"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::ChaconLimits => &[
                ("stage_min", "4"),
                ("stage_max", "7"),
                ("offset", "6"),
                ("terms", "32"),
                ("min_exp", "-3"),
                ("max_exp", "3"),
                ("tol", "0.05"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::KroneckerDemo => &[
                ("lyapunov_instances", "200"),
                ("atoms", "512"),
                ("cells", "8"),
                ("pipeline_instances", "20"),
                ("pairs", "4"),
                ("eps", "0.05"),
                ("n_max", "1000000"),
                ("independence_bound", "20"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::FockDemo => &[
                ("unitaries", "20"),
                ("trunc", "3"),
                ("m_max", "4"),
                ("n_max", "8"),
                ("shift_min", "3"),
                ("shift_max", "8"),
                ("tol", "1e-9"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::LampertiSpectrum => &[
                ("roots", "12"),
                ("cycle_atoms", "1000"),
                ("tower_atoms", "20000"),
                ("random_f", "100"),
                ("tol", "1e-10"),
                ("l1_tol", "1e-12"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
            ExperimentKind::SemigroupSanity => &[
                ("trunc", "64"),
                ("terms", "32"),
                ("n_max", "1000"),
                ("stage_min", "4"),
                ("stage_max", "7"),
                ("offset", "6"),
                ("shift_m", "5"),
                ("tol", "1e-6"),
                ("rotation_tol", "1e-2"),
                ("chacon_tol", "0.05"),
                ("parallel", "false"),
                ("seed", "0"),
            ],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        ExperimentKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
            CliError::usage(format!("unknown experiment '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = parse_assignment(line).map_err(|m| CliError::usage(format!("config line {}: {m}", i + 1)))?;
        out.insert(k, v);
    }
    Ok(out)
}

/// Splits `key=value`, trimming both sides.
pub fn parse_assignment(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err("empty key".into());
    }
    Ok((k.to_string(), v.to_string()))
}

/// Validated experiment parameters with defaults filled in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    params: BTreeMap<String, String>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Rejects keys the experiment does not declare.
    pub fn new(kind: ExperimentKind, overrides: BTreeMap<String, String>, out_dir: impl AsRef<Path>) -> CliResult<Self> {
        let mut params: BTreeMap<String, String> =
            kind.defaults().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in overrides {
            match params.get_mut(&k) {
                Some(slot) => *slot = v,
                None => {
                    let keys: Vec<&str> = kind.defaults().iter().map(|(k, _)| *k).collect();
                    return Err(CliError::usage(format!(
                        "unknown key '{k}' for {kind} (accepted: {})",
                        keys.join(", ")
                    )));
                }
            }
        }
        let cfg = ExperimentConfig { kind, params, out_dir: out_dir.as_ref().to_path_buf() };
        cfg.u64("seed")?;
        cfg.bool("parallel")?;
        Ok(cfg)
    }

    pub fn defaults(kind: ExperimentKind, out_dir: impl AsRef<Path>) -> Self {
        Self::new(kind, BTreeMap::new(), out_dir).expect("defaults are valid")
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn raw(&self, key: &str) -> CliResult<&str> {
        self.params.get(key).map(String::as_str).ok_or_else(|| CliError::usage(format!("missing key '{key}'")))
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> CliResult<T> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| CliError::usage(format!("key '{key}': expected {what}, got '{raw}'")))
    }

    pub fn u64(&self, key: &str) -> CliResult<u64> {
        self.parsed(key, "a nonnegative integer")
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        self.parsed(key, "a nonnegative integer")
    }

    pub fn i64(&self, key: &str) -> CliResult<i64> {
        self.parsed(key, "an integer")
    }

    /// `default` when the experiment does not declare `key`.
    pub fn i64_or(&self, key: &str, default: i64) -> CliResult<i64> {
        if self.params.contains_key(key) {
            self.i64(key)
        } else {
            Ok(default)
        }
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        let v: f64 = self.parsed(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::usage(format!("key '{key}' must be finite")));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> CliResult<f64> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(CliError::usage(format!("key '{key}' must be positive")));
        }
        Ok(v)
    }

    pub fn bool(&self, key: &str) -> CliResult<bool> {
        self.parsed(key, "true or false")
    }

    pub fn seed(&self) -> u64 {
        self.u64("seed").expect("validated at construction")
    }

    pub fn parallel(&self) -> bool {
        self.bool("parallel").expect("validated at construction")
    }

    /// First 16 hex digits of SHA-256 over the experiment name and the
    /// sorted `key=value` pairs.
    pub fn param_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.kind.name().as_bytes());
        for (k, v) in &self.params {
            h.update(b"\n");
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
        }
        hex::encode(h.finalize())[..16].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let m = parse_config_text("# header\n\nn_max = 50 # inline\n trunc=8\n").unwrap();
        assert_eq!(m["n_max"], "50");
        assert_eq!(m["trunc"], "8");
        assert!(parse_config_text("oops").is_err());
    }

    #[test]
    fn unknown_key_is_usage_error() {
        let mut o = BTreeMap::new();
        o.insert("bogus".to_string(), "1".to_string());
        let e = ExperimentConfig::new(ExperimentKind::RigidityScan, o, "out").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn hash_depends_on_values_only() {
        let a = ExperimentConfig::defaults(ExperimentKind::FoldingCoeffs, "a");
        let b = ExperimentConfig::defaults(ExperimentKind::FoldingCoeffs, "b");
        assert_eq!(a.param_hash(), b.param_hash());
        assert_eq!(a.param_hash().len(), 16);
        let mut o = BTreeMap::new();
        o.insert("trunc".to_string(), "8".to_string());
        let c = ExperimentConfig::new(ExperimentKind::FoldingCoeffs, o, "a").unwrap();
        assert_ne!(a.param_hash(), c.param_hash());
    }

    #[test]
    fn names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert_eq!("nope".parse::<ExperimentKind>().unwrap_err().exit_code(), 2);
    }
}
