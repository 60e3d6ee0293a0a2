//! Flat key=value configuration for simulation grids. Sample sizes and
//! eigengaps are given symbolically so one file covers every dimension in
//! `p_list`.

use anyhow::{bail, Context, Result};
use conepower::cones::ConeSpec;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Symbolic sample-size rule, evaluated per dimension (ceiling where
/// fractional).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NRule {
    TenLogP,
    ThreeTenthsP,
    P,
    FiveP,
    TenP,
}

impl NRule {
    pub fn eval(&self, p: usize) -> usize {
        let pf = p as f64;
        match self {
            NRule::TenLogP => (10.0 * pf.ln()).ceil() as usize,
            NRule::ThreeTenthsP => (0.3 * pf).ceil() as usize,
            NRule::P => p,
            NRule::FiveP => 5 * p,
            NRule::TenP => 10 * p,
        }
    }
}

impl FromStr for NRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "10logp" => Ok(NRule::TenLogP),
            "0.3p" => Ok(NRule::ThreeTenthsP),
            "p" => Ok(NRule::P),
            "5p" => Ok(NRule::FiveP),
            "10p" => Ok(NRule::TenP),
            other => bail!("unknown n rule {other:?}; expected 10logp, 0.3p, p, 5p or 10p"),
        }
    }
}

impl fmt::Display for NRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NRule::TenLogP => "10logp",
            NRule::ThreeTenthsP => "0.3p",
            NRule::P => "p",
            NRule::FiveP => "5p",
            NRule::TenP => "10p",
        };
        write!(f, "{s}")
    }
}

/// Symbolic eigengap rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuRule {
    Half,
    LogP,
}

impl NuRule {
    pub fn eval(&self, p: usize) -> f64 {
        match self {
            NuRule::Half => 0.5,
            NuRule::LogP => (p as f64).ln(),
        }
    }
}

impl FromStr for NuRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0.5" => Ok(NuRule::Half),
            "logp" => Ok(NuRule::LogP),
            other => bail!("unknown nu rule {other:?}; expected 0.5 or logp"),
        }
    }
}

impl fmt::Display for NuRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuRule::Half => write!(f, "0.5"),
            NuRule::LogP => write!(f, "logp"),
        }
    }
}

/// Which planted vector the grid uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XbarKind {
    NonSparse,
    Sparse,
}

impl XbarKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            XbarKind::NonSparse => "nonsparse",
            XbarKind::Sparse => "sparse",
        }
    }
}

impl FromStr for XbarKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nonsparse" => Ok(XbarKind::NonSparse),
            "sparse" => Ok(XbarKind::Sparse),
            other => bail!("unknown xbar kind {other:?}; expected nonsparse or sparse"),
        }
    }
}

/// One simulation-grid configuration.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub p_list: Vec<usize>,
    pub n_rules: Vec<NRule>,
    pub nu_rules: Vec<NuRule>,
    pub xbar_kind: XbarKind,
    pub cone: ConeSpec,
    pub trials: usize,
    pub seed: u64,
    pub delta: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            p_list: vec![100],
            n_rules: vec![
                NRule::TenLogP,
                NRule::ThreeTenthsP,
                NRule::P,
                NRule::FiveP,
                NRule::TenP,
            ],
            nu_rules: vec![NuRule::Half, NuRule::LogP],
            xbar_kind: XbarKind::NonSparse,
            cone: ConeSpec::Monotone,
            trials: 20,
            seed: 0,
            delta: 1e-6,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_list.is_empty() {
            bail!("p_list must not be empty");
        }
        if self.n_rules.is_empty() || self.nu_rules.is_empty() {
            bail!("n_rules and nu_rules must not be empty");
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if !(self.delta > 0.0 && self.delta < std::f64::consts::SQRT_2) {
            bail!("delta must be in (0, √2), got {}", self.delta);
        }
        for &p in &self.p_list {
            for rule in &self.n_rules {
                let n = rule.eval(p);
                if n < 2 {
                    bail!("rule {rule} gives n = {n} < 2 at p = {p}");
                }
            }
        }
        Ok(())
    }
}

/// Parses a `key=value` file; `#` starts a comment line.
pub fn parse_config_str(text: &str) -> Result<GridConfig> {
    let mut cfg = GridConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("line {} is not key=value: {raw:?}", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "p_list" => {
                cfg.p_list = value
                    .split(',')
                    .map(|tok| tok.trim().parse::<usize>().context("bad p value"))
                    .collect::<Result<Vec<_>>>()?;
            }
            "n_rules" => {
                cfg.n_rules = value
                    .split(',')
                    .map(NRule::from_str)
                    .collect::<Result<Vec<_>>>()?;
            }
            "nu_rules" => {
                cfg.nu_rules = value
                    .split(',')
                    .map(NuRule::from_str)
                    .collect::<Result<Vec<_>>>()?;
            }
            "xbar" => cfg.xbar_kind = value.parse()?,
            "cone" => cfg.cone = value.parse::<ConeSpec>()?,
            "trials" => cfg.trials = value.parse().context("bad trials")?,
            "seed" => cfg.seed = value.parse().context("bad seed")?,
            "delta" => cfg.delta = value.parse().context("bad delta")?,
            other => bail!("unknown config key {other:?} on line {}", lineno + 1),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config_file(path: &Path) -> Result<GridConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    parse_config_str(&text)
}
