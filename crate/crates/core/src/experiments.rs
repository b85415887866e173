//! Two-axis parameter sweeps with replication averaging.
//!
//! Every run in a sweep is keyed by `(cell, replication)` and seeded from
//! that key alone, so results do not depend on the worker count or on the
//! order in which runs finish.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::network::{Graph, GraphStats};
use crate::rng::mix64;
use crate::sim::{simulate, SimConfig, StepMetrics};

/// A `SimConfig` field that a sweep axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SweepParam {
    NPv,
    NPn,
    NCv,
    NCn,
    TcMu,
    TcStd,
    AMu,
    AStd,
    Gamma,
    PropagatorW,
    OriginatorFraction,
    Steps,
}

impl SweepParam {
    pub const ALL: [SweepParam; 12] = [
        SweepParam::NPv,
        SweepParam::NPn,
        SweepParam::NCv,
        SweepParam::NCn,
        SweepParam::TcMu,
        SweepParam::TcStd,
        SweepParam::AMu,
        SweepParam::AStd,
        SweepParam::Gamma,
        SweepParam::PropagatorW,
        SweepParam::OriginatorFraction,
        SweepParam::Steps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NPv => "n_pv",
            SweepParam::NPn => "n_pn",
            SweepParam::NCv => "n_cv",
            SweepParam::NCn => "n_cn",
            SweepParam::TcMu => "tc_mu",
            SweepParam::TcStd => "tc_std",
            SweepParam::AMu => "a_mu",
            SweepParam::AStd => "a_std",
            SweepParam::Gamma => "gamma",
            SweepParam::PropagatorW => "propagator_w",
            SweepParam::OriginatorFraction => "originator_fraction",
            SweepParam::Steps => "steps",
        }
    }

    /// Writes `value` into `cfg`; count-valued fields need a non-negative integer.
    pub fn apply(self, cfg: &mut SimConfig, value: f64) -> Result<()> {
        let count = || -> Result<u64> {
            if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
                Ok(value as u64)
            } else {
                Err(Error::Config(format!(
                    "{} needs a non-negative integer, got {value}",
                    self.name()
                )))
            }
        };
        match self {
            SweepParam::NPv => cfg.evidence.n_pv = count()?,
            SweepParam::NPn => cfg.evidence.n_pn = count()?,
            SweepParam::NCv => cfg.evidence.n_cv = count()?,
            SweepParam::NCn => cfg.evidence.n_cn = count()?,
            SweepParam::TcMu => cfg.tc_mu = value,
            SweepParam::TcStd => cfg.tc_std = value,
            SweepParam::AMu => cfg.a_mu = value,
            SweepParam::AStd => cfg.a_std = value,
            SweepParam::Gamma => cfg.gamma = value,
            SweepParam::PropagatorW => cfg.propagator_w = value,
            SweepParam::OriginatorFraction => {
                cfg.originator_fraction = value;
                cfg.originator_count = None;
            }
            SweepParam::Steps => cfg.steps = count()? as usize,
        }
        Ok(())
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "npv" | "pv" => "n_pv",
            "npn" | "pn" => "n_pn",
            "ncv" | "cv" => "n_cv",
            "ncn" | "cn" => "n_cn",
            "tc" => "tc_mu",
            other => other,
        }
        .to_owned();
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::UnknownParameter(s.to_owned()))
    }
}

impl From<SweepParam> for String {
    fn from(p: SweepParam) -> String {
        p.name().to_owned()
    }
}

impl TryFrom<String> for SweepParam {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: SweepParam, values: impl IntoIterator<Item = f64>) -> Self {
        Axis {
            param,
            values: values.into_iter().collect(),
        }
    }

    /// Single-value axis.
    pub fn fixed(param: SweepParam, value: f64) -> Self {
        Axis::new(param, [value])
    }
}

/// Parses `name:v1,v2,...` (e.g. `n_cv:0,1000,2000`).
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, values) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("axis `{s}` must look like name:v1,v2,...")))?;
        let param = name.parse()?;
        let values = values
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad axis value `{v}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Axis { param, values })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.param)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub axis1: Axis,
    pub axis2: Axis,
    pub replications: usize,
}

impl SweepSpec {
    pub const FULL_REPLICATIONS: usize = 100;
    pub const DESK_REPLICATIONS: usize = 30;

    pub fn cell_count(&self) -> usize {
        self.axis1.values.len() * self.axis2.values.len()
    }

    /// Axis values of a row-major cell index (axis1 outer).
    pub fn cell_values(&self, cell: usize) -> (f64, f64) {
        let cols = self.axis2.values.len();
        (self.axis1.values[cell / cols], self.axis2.values[cell % cols])
    }

    /// Resolved configuration of a cell, without its per-run seed.
    pub fn cell_config(&self, cell: usize) -> Result<SimConfig> {
        let (v1, v2) = self.cell_values(cell);
        let mut cfg = self.base.clone();
        self.axis1.param.apply(&mut cfg, v1)?;
        self.axis2.param.apply(&mut cfg, v2)?;
        Ok(cfg)
    }

    /// Seed of replication `rep` in `cell`; injective over one sweep.
    pub fn run_seed(&self, cell: usize, rep: usize) -> u64 {
        mix64(self.base.seed).wrapping_add((cell * self.replications + rep) as u64)
    }

    /// Checks every cell's configuration before anything runs.
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.axis1.values.is_empty() || self.axis2.values.is_empty() {
            return Err(Error::Config("sweep axes need at least one value".into()));
        }
        if self.axis1.param == self.axis2.param {
            return Err(Error::Config(format!(
                "both axes vary `{}`",
                self.axis1.param
            )));
        }
        for cell in 0..self.cell_count() {
            self.cell_config(cell)?.validate()?;
        }
        Ok(())
    }
}

pub const PRESETS: [&str; 4] = ["valuable-sweep", "noisy-sweep", "tc-under-pv", "tc-under-cv"];

fn evidence_grid() -> Vec<f64> {
    (0..=6).map(|k| 1000.0 * k as f64).collect()
}

fn competence_grid() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75, 1.0]
}

/// Named sweep grids. Non-swept evidence classes stay at 1000 items each;
/// competence sweeps make competence homogeneous (`tc_std = 0`).
pub fn preset(name: &str) -> Result<SweepSpec> {
    let mut base = SimConfig::default();
    let (axis1, axis2) = match name {
        "valuable-sweep" => (
            Axis::new(SweepParam::NPv, evidence_grid()),
            Axis::new(SweepParam::NCv, evidence_grid()),
        ),
        "noisy-sweep" => (
            Axis::new(SweepParam::NPn, evidence_grid()),
            Axis::new(SweepParam::NCn, evidence_grid()),
        ),
        "tc-under-pv" => {
            base.tc_std = 0.0;
            (
                Axis::new(SweepParam::TcMu, competence_grid()),
                Axis::new(SweepParam::NPv, evidence_grid()),
            )
        }
        "tc-under-cv" => {
            base.tc_std = 0.0;
            (
                Axis::new(SweepParam::TcMu, competence_grid()),
                Axis::new(SweepParam::NCv, evidence_grid()),
            )
        }
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_owned(),
                valid: PRESETS.join(", "),
            })
        }
    };
    Ok(SweepSpec {
        base,
        axis1,
        axis2,
        replications: SweepSpec::FULL_REPLICATIONS,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single replication.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Summary { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub axis1_value: f64,
    pub axis2_value: f64,
    pub mean_b: Summary,
    pub mean_d: Summary,
    pub mean_u: Summary,
    pub frac_r: Summary,
    pub seeds: Vec<u64>,
}

impl SweepCell {
    fn aggregate(axis1_value: f64, axis2_value: f64, runs: &[(u64, StepMetrics)]) -> SweepCell {
        let pick = |f: fn(&StepMetrics) -> f64| {
            Summary::of(&runs.iter().map(|(_, m)| f(m)).collect::<Vec<_>>())
        };
        SweepCell {
            axis1_value,
            axis2_value,
            mean_b: pick(|m| m.mean_b),
            mean_d: pick(|m| m.mean_d),
            mean_u: pick(|m| m.mean_u),
            frac_r: pick(|m| m.frac_r),
            seeds: runs.iter().map(|(s, _)| *s).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis1: SweepParam,
    pub axis2: SweepParam,
    pub replications: usize,
    /// Row-major over (axis1, axis2).
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, axis1_value: f64, axis2_value: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.axis1_value == axis1_value && c.axis2_value == axis2_value)
    }

    /// `axis1_name,axis1_value,axis2_name,axis2_value,mean_b,std_b,mean_d,std_d,mean_u,std_u,frac_R,std_R,n_r`
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "axis1_name,axis1_value,axis2_name,axis2_value,mean_b,std_b,mean_d,std_d,mean_u,std_u,frac_R,std_R,n_r"
        )?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                self.axis1,
                c.axis1_value,
                self.axis2,
                c.axis2_value,
                sig9(c.mean_b.mean),
                sig9(c.mean_b.std),
                sig9(c.mean_d.mean),
                sig9(c.mean_d.std),
                sig9(c.mean_u.mean),
                sig9(c.mean_u.std),
                sig9(c.frac_r.mean),
                sig9(c.frac_r.std),
                c.seeds.len()
            )?;
        }
        Ok(())
    }
}

fn run_one(spec: &SweepSpec, g: &Graph, cell: usize, rep: usize) -> Result<(u64, StepMetrics)> {
    let mut cfg = spec.cell_config(cell)?;
    cfg.seed = spec.run_seed(cell, rep);
    let out = simulate(g, &cfg)?;
    Ok((cfg.seed, out.final_metrics()))
}

/// Runs every replication of one cell sequentially.
pub fn run_cell(spec: &SweepSpec, g: &Graph, cell: usize) -> Result<SweepCell> {
    spec.validate()?;
    let runs = (0..spec.replications)
        .map(|rep| run_one(spec, g, cell, rep))
        .collect::<Result<Vec<_>>>()?;
    let (v1, v2) = spec.cell_values(cell);
    Ok(SweepCell::aggregate(v1, v2, &runs))
}

/// Runs the full grid on `parallelism` worker threads.
pub fn run_sweep(spec: &SweepSpec, g: &Graph, parallelism: usize) -> Result<SweepResult> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.cell_count())
        .flat_map(|cell| (0..spec.replications).map(move |rep| (cell, rep)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let runs: Vec<(u64, StepMetrics)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(cell, rep)| run_one(spec, g, cell, rep))
            .collect::<Result<Vec<_>>>()
    })?;
    let cells = runs
        .chunks(spec.replications)
        .enumerate()
        .map(|(cell, chunk)| {
            let (v1, v2) = spec.cell_values(cell);
            SweepCell::aggregate(v1, v2, chunk)
        })
        .collect();
    Ok(SweepResult {
        axis1: spec.axis1.param,
        axis2: spec.axis2.param,
        replications: spec.replications,
        cells,
    })
}

/// Everything needed to reproduce a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub tool_version: String,
    pub preset: Option<String>,
    pub master_seed: u64,
    pub spec: SweepSpec,
    pub graph_source: String,
    pub graph_stats: GraphStats,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{GraphSource, SyntheticModel};

    fn small_graph() -> Graph {
        GraphSource::Synthetic {
            model: SyntheticModel::PreferentialAttachment { m: 2 },
            n: 30,
            seed: 3,
        }
        .load()
        .unwrap()
    }

    fn tiny_spec() -> SweepSpec {
        SweepSpec {
            base: SimConfig {
                steps: 5,
                evidence: crate::evidence::EvidenceMix::new(50, 50, 50, 50),
                ..Default::default()
            },
            axis1: Axis::new(SweepParam::NPv, [0.0, 100.0]),
            axis2: Axis::new(SweepParam::NCv, [0.0, 50.0, 100.0]),
            replications: 3,
        }
    }

    #[test]
    fn degenerate_sweep_equals_single_run() {
        let g = small_graph();
        let spec = SweepSpec {
            axis1: Axis::fixed(SweepParam::NPv, 50.0),
            axis2: Axis::fixed(SweepParam::Gamma, 0.05),
            replications: 1,
            ..tiny_spec()
        };
        let result = run_sweep(&spec, &g, 2).unwrap();
        assert_eq!(result.cells.len(), 1);
        let cell = &result.cells[0];
        let cfg = SimConfig { seed: cell.seeds[0], ..spec.cell_config(0).unwrap() };
        let m = simulate(&g, &cfg).unwrap().final_metrics();
        assert_eq!(cell.mean_b, Summary { mean: m.mean_b, std: 0.0 });
        assert_eq!(cell.mean_d.mean, m.mean_d);
        assert_eq!(cell.mean_u.mean, m.mean_u);
        assert_eq!(cell.frac_r.mean, m.frac_r);
    }

    #[test]
    fn result_is_independent_of_worker_count() {
        let g = small_graph();
        let spec = tiny_spec();
        let a = run_sweep(&spec, &g, 1).unwrap();
        let b = run_sweep(&spec, &g, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 6);
        assert!(a.cells.iter().all(|c| c.seeds.len() == 3));
        assert_eq!(a.cell(100.0, 50.0).unwrap().axis2_value, 50.0);
    }

    #[test]
    fn cells_rerun_from_recorded_seeds() {
        let g = small_graph();
        let spec = tiny_spec();
        let full = run_sweep(&spec, &g, 4).unwrap();
        for (cell, expected) in full.cells.iter().enumerate() {
            assert_eq!(&run_cell(&spec, &g, cell).unwrap(), expected);
            let b_plus = expected.mean_b.mean + expected.mean_d.mean + expected.mean_u.mean;
            assert!((b_plus - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn seeds_are_distinct() {
        let spec = SweepSpec { replications: 100, ..preset("valuable-sweep").unwrap() };
        let mut seen = std::collections::HashSet::new();
        for cell in 0..spec.cell_count() {
            for rep in 0..spec.replications {
                assert!(seen.insert(spec.run_seed(cell, rep)));
            }
        }
    }

    #[test]
    fn invalid_axes_fail_before_running() {
        assert!(matches!("n_xx".parse::<SweepParam>(), Err(Error::UnknownParameter(_))));
        assert!("bogus:1,2".parse::<Axis>().is_err());
        let g = small_graph();
        let spec = SweepSpec {
            axis1: Axis::new(SweepParam::Gamma, [0.1, 2.0]),
            ..tiny_spec()
        };
        assert!(run_sweep(&spec, &g, 1).is_err());
        let spec = SweepSpec {
            axis1: Axis::new(SweepParam::NPv, [1.5]),
            ..tiny_spec()
        };
        assert!(spec.validate().is_err());
        let spec = SweepSpec { replications: 0, ..tiny_spec() };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn axis_text_form() {
        let axis: Axis = "nCV:0,1000,2000".parse().unwrap();
        assert_eq!(axis, Axis::new(SweepParam::NCv, [0.0, 1000.0, 2000.0]));
        assert_eq!(axis.to_string(), "n_cv:0,1000,2000");
        assert_eq!("tc".parse::<SweepParam>().unwrap(), SweepParam::TcMu);
    }

    #[test]
    fn presets() {
        let p = preset("tc-under-pv").unwrap();
        assert_eq!(p.axis1.param, SweepParam::TcMu);
        assert_eq!(p.axis1.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(p.axis2.param, SweepParam::NPv);
        assert_eq!(p.base.tc_std, 0.0);
        let e = p.base.evidence;
        assert_eq!((e.n_pn, e.n_cv, e.n_cn), (1000, 1000, 1000));

        let p = preset("valuable-sweep").unwrap();
        assert_eq!((p.axis1.param, p.axis2.param), (SweepParam::NPv, SweepParam::NCv));
        assert_eq!((p.base.evidence.n_pn, p.base.evidence.n_cn), (1000, 1000));
        assert_eq!(p.cell_count(), 49);
        assert_eq!(p.replications, 100);

        assert_eq!(preset("tc-under-cv").unwrap().cell_count(), 35);
        assert_eq!(preset("noisy-sweep").unwrap().axis1.param, SweepParam::NPn);
        assert!(matches!(preset("bogus"), Err(Error::UnknownPreset { .. })));
    }

    #[test]
    fn csv_layout() {
        let g = small_graph();
        let spec = SweepSpec { replications: 2, ..tiny_spec() };
        let result = run_sweep(&spec, &g, 2).unwrap();
        let mut buf = Vec::new();
        result.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "axis1_name,axis1_value,axis2_name,axis2_value,mean_b,std_b,mean_d,std_d,mean_u,std_u,frac_R,std_R,n_r"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("n_pv,0,n_cv,0,"), "{first}");
        assert!(first.ends_with(",2"));
        assert_eq!(text.lines().count(), 7);
    }
}
