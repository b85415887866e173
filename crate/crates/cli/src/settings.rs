//! Layered settings: built-in defaults, then a `key = value` file, then flags.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use slsim::experiments::Axis;
use slsim::{GraphSource, SeedStrategy, SimConfig};

/// Every key a config file may set. `None` means "not given at this layer".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub graph: Option<GraphSource>,
    pub evidence_file: Option<PathBuf>,
    pub gamma: Option<f64>,
    pub tc_mu: Option<f64>,
    pub tc_std: Option<f64>,
    pub a_mu: Option<f64>,
    pub a_std: Option<f64>,
    pub originator_fraction: Option<f64>,
    pub originators: Option<usize>,
    pub seeding: Option<SeedStrategy>,
    pub propagator_w: Option<f64>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub n_pv: Option<u64>,
    pub n_pn: Option<u64>,
    pub n_cv: Option<u64>,
    pub n_cn: Option<u64>,
    pub replications: Option<usize>,
    pub axis1: Option<Axis>,
    pub axis2: Option<Axis>,
}

pub const KEYS: [&str; 20] = [
    "graph",
    "evidence",
    "gamma",
    "tc_mu",
    "tc_std",
    "a_mu",
    "a_std",
    "originator_fraction",
    "originators",
    "seeding",
    "propagator_w",
    "steps",
    "seed",
    "n_pv",
    "n_pn",
    "n_cv",
    "n_cn",
    "replications",
    "axis1",
    "axis2",
];

fn value<T>(key: &str, raw: &str) -> Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| anyhow!("bad value `{raw}` for `{key}`: {e}"))
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
    /// keys are errors.
    pub fn parse(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (key, val) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("line {lineno}: expected `key = value`"))?;
            if seen.contains(&key) {
                bail!("line {lineno}: `{key}` given twice");
            }
            s.set(key, val).with_context(|| format!("line {lineno}"))?;
            seen.push(key);
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        match key {
            "graph" => self.graph = Some(value(key, raw)?),
            "evidence" => self.evidence_file = Some(raw.into()),
            "gamma" => self.gamma = Some(value(key, raw)?),
            "tc_mu" => self.tc_mu = Some(value(key, raw)?),
            "tc_std" => self.tc_std = Some(value(key, raw)?),
            "a_mu" => self.a_mu = Some(value(key, raw)?),
            "a_std" => self.a_std = Some(value(key, raw)?),
            "originator_fraction" => self.originator_fraction = Some(value(key, raw)?),
            "originators" => self.originators = Some(value(key, raw)?),
            "seeding" => self.seeding = Some(value(key, raw)?),
            "propagator_w" => self.propagator_w = Some(value(key, raw)?),
            "steps" => self.steps = Some(value(key, raw)?),
            "seed" => self.seed = Some(value(key, raw)?),
            "n_pv" => self.n_pv = Some(value(key, raw)?),
            "n_pn" => self.n_pn = Some(value(key, raw)?),
            "n_cv" => self.n_cv = Some(value(key, raw)?),
            "n_cn" => self.n_cn = Some(value(key, raw)?),
            "replications" => self.replications = Some(value(key, raw)?),
            "axis1" => self.axis1 = Some(value(key, raw)?),
            "axis2" => self.axis2 = Some(value(key, raw)?),
            other => bail!("unknown key `{other}` (valid: {})", KEYS.join(", ")),
        }
        Ok(())
    }

    /// Keys set in `over` win; the rest fall back to `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            graph: over.graph.or(self.graph),
            evidence_file: over.evidence_file.or(self.evidence_file),
            gamma: over.gamma.or(self.gamma),
            tc_mu: over.tc_mu.or(self.tc_mu),
            tc_std: over.tc_std.or(self.tc_std),
            a_mu: over.a_mu.or(self.a_mu),
            a_std: over.a_std.or(self.a_std),
            originator_fraction: over.originator_fraction.or(self.originator_fraction),
            originators: over.originators.or(self.originators),
            seeding: over.seeding.or(self.seeding),
            propagator_w: over.propagator_w.or(self.propagator_w),
            steps: over.steps.or(self.steps),
            seed: over.seed.or(self.seed),
            n_pv: over.n_pv.or(self.n_pv),
            n_pn: over.n_pn.or(self.n_pn),
            n_cv: over.n_cv.or(self.n_cv),
            n_cn: over.n_cn.or(self.n_cn),
            replications: over.replications.or(self.replications),
            axis1: over.axis1.or(self.axis1),
            axis2: over.axis2.or(self.axis2),
        }
    }

    /// Writes the simulation keys that are set onto `cfg`.
    pub fn apply(&self, cfg: &mut SimConfig) {
        macro_rules! put {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })*
            };
        }
        put! {
            gamma => cfg.gamma,
            tc_mu => cfg.tc_mu,
            tc_std => cfg.tc_std,
            a_mu => cfg.a_mu,
            a_std => cfg.a_std,
            originator_fraction => cfg.originator_fraction,
            seeding => cfg.seeding,
            propagator_w => cfg.propagator_w,
            steps => cfg.steps,
            seed => cfg.seed,
            n_pv => cfg.evidence.n_pv,
            n_pn => cfg.evidence.n_pn,
            n_cv => cfg.evidence.n_cv,
            n_cn => cfg.evidence.n_cn,
        }
        if self.originators.is_some() {
            cfg.originator_count = self.originators;
        }
    }
}
