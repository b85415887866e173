//! Agent population and the propagation loop.
//!
//! A run seeds originators, who form a fixed opinion from the shared evidence
//! matrix, and near-vacuous propagators. Each step then has three phases:
//!
//! 1. every active agent, in a shuffled order, pushes its current opinion to
//!    all neighbors; a propagator receiving `w_j` discounts it by the cosine
//!    similarity of the two opinions and fuses it into its own with the
//!    consensus operator, immediately;
//! 2. propagator opinions decay toward uncertainty;
//! 3. SIR statuses are recomputed from the expected belief/disbelief.
//!
//! Only originators are active in the first step. An agent that received a
//! push becomes active from the next step on and stays active.

use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::evidence::{build_matrix, map_evidence, perceived_opinion, EvidenceMatrix, EvidenceMix};
use crate::format::sig9;
use crate::network::{originator_count, seed_originators, Graph, NodeId, SeedStrategy};
use crate::opinion::{
    adjust_base_rate, consensus, decay, discount, from_evidence, similarity, EvidenceCounts,
    Opinion,
};
use crate::rng::{self, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Originator,
    Propagator,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Originator => "originator",
            Role::Propagator => "propagator",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Susceptible,
    Infected,
    Recovered,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Susceptible => "S",
            Status::Infected => "I",
            Status::Recovered => "R",
        })
    }
}

/// Infected when expected belief exceeds one half, recovered when expected
/// disbelief does, susceptible on the `E_b = E_d = 0.5` boundary.
///
/// The two expectations are compared with each other rather than with 0.5:
/// they sum to one, so the regions are the same, but a symmetric opinion
/// cannot be pushed off the boundary by rounding in `b + a·u`.
pub fn classify_status(op: &Opinion) -> Status {
    let e = op.expectation();
    if e.belief > e.disbelief {
        Status::Infected
    } else if e.disbelief > e.belief {
        Status::Recovered
    } else {
        Status::Susceptible
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: NodeId,
    pub role: Role,
    pub opinion: Opinion,
    /// Topic competence.
    pub tc: f64,
    /// Sampled prior.
    pub a_raw: f64,
    /// Competence-adjusted prior; the opinion's base rate.
    pub a_adj: f64,
    pub status: Status,
}

impl Agent {
    /// A propagator starting from `(r, s, W) = (1, 1, w)`.
    pub fn propagator(id: NodeId, tc: f64, a_raw: f64, w: f64) -> Result<Self> {
        let a_adj = adjust_base_rate(a_raw, tc)?;
        let opinion = from_evidence(EvidenceCounts::new(1, 1, w), a_adj)?;
        Agent::with_opinion(id, Role::Propagator, opinion, tc, a_raw)
    }

    /// Agent holding `opinion`, re-based onto its competence-adjusted prior.
    pub fn with_opinion(id: NodeId, role: Role, opinion: Opinion, tc: f64, a_raw: f64) -> Result<Self> {
        let a_adj = adjust_base_rate(a_raw, tc)?;
        let opinion = opinion.with_base_rate(a_adj)?;
        Ok(Agent {
            id,
            role,
            opinion,
            tc,
            a_raw,
            a_adj,
            status: classify_status(&opinion),
        })
    }
}

/// Simulation parameters. Defaults follow the reference experiment setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Per-step opinion decay.
    pub gamma: f64,
    pub tc_mu: f64,
    pub tc_std: f64,
    pub a_mu: f64,
    pub a_std: f64,
    /// Share of nodes seeded as originators.
    pub originator_fraction: f64,
    /// Exact originator count; overrides `originator_fraction`.
    pub originator_count: Option<usize>,
    pub seeding: SeedStrategy,
    /// Uncertain-evidence mass `W` of a fresh propagator.
    pub propagator_w: f64,
    pub steps: usize,
    pub seed: u64,
    pub evidence: EvidenceMix,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            gamma: 0.05,
            tc_mu: 0.5,
            tc_std: 0.1,
            a_mu: 0.5,
            a_std: 0.1,
            originator_fraction: 0.01,
            originator_count: None,
            seeding: SeedStrategy::UniformRandom,
            propagator_w: 100.0,
            steps: 50,
            seed: 1,
            evidence: EvidenceMix::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        check_range("gamma", self.gamma, 0.0, 1.0)?;
        check_range("tc_mu", self.tc_mu, 0.0, 1.0)?;
        check_range("a_mu", self.a_mu, 0.0, 1.0)?;
        check_range("tc_std", self.tc_std, 0.0, f64::MAX)?;
        check_range("a_std", self.a_std, 0.0, f64::MAX)?;
        check_range("propagator_w", self.propagator_w, 1.0, f64::MAX)?;
        if !(self.originator_fraction > 0.0 && self.originator_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "originator_fraction must be in (0, 1], got {}",
                self.originator_fraction
            )));
        }
        if self.originator_count == Some(0) {
            return Err(Error::Config("originator count must be at least 1".into()));
        }
        if self.evidence.total() == 0 {
            return Err(Error::EmptyEvidence);
        }
        Ok(())
    }

    pub fn originators_for(&self, n: usize) -> usize {
        self.originator_count
            .unwrap_or_else(|| originator_count(n, self.originator_fraction))
    }
}

/// Rejection-samples `N(mu, std)` restricted to `[0, 1]`.
pub fn sample_truncated_normal<R: Rng + ?Sized>(mu: f64, std: f64, rng: &mut R) -> Result<f64> {
    check_range("mean", mu, 0.0, 1.0)?;
    if std == 0.0 {
        return Ok(mu);
    }
    let normal = Normal::new(mu, std).map_err(|e| Error::Config(e.to_string()))?;
    loop {
        let x = normal.sample(rng);
        if (0.0..=1.0).contains(&x) {
            return Ok(x);
        }
    }
}

/// Population aggregates after a step (or at initialization, `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    pub t: usize,
    /// Mean opinion over all agents.
    pub mean_b: f64,
    pub mean_d: f64,
    pub mean_u: f64,
    /// Status shares over propagators.
    pub frac_s: f64,
    pub frac_i: f64,
    pub frac_r: f64,
    /// Mean opinion over propagators only.
    pub prop_mean_b: f64,
    pub prop_mean_d: f64,
    pub prop_mean_u: f64,
}

/// What happened in one step; `senders` is the order agents pushed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub senders: Vec<NodeId>,
    pub newly_active: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    agents: Vec<Agent>,
    active: Vec<bool>,
}

impl Population {
    /// Samples competences and priors, seeds originators, and forms their
    /// opinions from `ev`. Deterministic in `cfg.seed`.
    pub fn init(g: &Graph, cfg: &SimConfig, ev: &EvidenceMatrix) -> Result<Self> {
        cfg.validate()?;
        let n = g.node_count();
        let mut rng = rng::stream(cfg.seed, rng::STREAM_POPULATION);

        let mut traits = Vec::with_capacity(n);
        for _ in 0..n {
            let tc = sample_truncated_normal(cfg.tc_mu, cfg.tc_std, &mut rng)?;
            let a = sample_truncated_normal(cfg.a_mu, cfg.a_std, &mut rng)?;
            traits.push((tc, a));
        }

        let count = cfg.originators_for(n);
        if count > n {
            return Err(Error::Config(format!(
                "{count} originators requested but the graph has {n} nodes"
            )));
        }
        let originators = seed_originators(g, count, cfg.seeding, &mut rng);

        let mut agents = Vec::with_capacity(n);
        for (id, &(tc, a_raw)) in traits.iter().enumerate() {
            agents.push(Agent::propagator(id, tc, a_raw, cfg.propagator_w)?);
        }
        let mut active = vec![false; n];
        for &id in &originators {
            let (tc, a_raw) = traits[id];
            let mut perception = rng::stream(cfg.seed, rng::STREAM_PERCEPTION_BASE + id as u64);
            let counts = map_evidence(tc, ev, &mut perception)?;
            let opinion = perceived_opinion(counts, adjust_base_rate(a_raw, tc)?)?;
            agents[id] = Agent::with_opinion(id, Role::Originator, opinion, tc, a_raw)?;
            active[id] = true;
        }
        Ok(Population { agents, active })
    }

    /// Population from explicit agents (IDs must equal their index) with the
    /// given agents initially active.
    pub fn from_agents(agents: Vec<Agent>, active: Vec<bool>) -> Result<Self> {
        if agents.len() != active.len() {
            return Err(Error::Config("agents and activity flags differ in length".into()));
        }
        if let Some(a) = agents.iter().enumerate().find(|(i, a)| a.id != *i) {
            return Err(Error::Config(format!("agent at index {} has id {}", a.0, a.1.id)));
        }
        Ok(Population { agents, active })
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn is_active(&self, id: NodeId) -> bool {
        self.active[id]
    }

    pub fn all_active(&self) -> bool {
        self.active.iter().all(|&a| a)
    }

    pub fn originators(&self) -> impl Iterator<Item = &Agent> {
        self.agents.iter().filter(|a| a.role == Role::Originator)
    }

    /// Runs one propagation/decay/classification step.
    pub fn step<R: Rng + ?Sized>(&mut self, g: &Graph, gamma: f64, rng: &mut R) -> StepReport {
        let n = self.agents.len();
        let mut senders: Vec<NodeId> = (0..n).filter(|&i| self.active[i]).collect();
        senders.shuffle(rng);

        let mut received = vec![false; n];
        for &j in &senders {
            let wj = self.agents[j].opinion;
            for &i in g.neighbors(j) {
                received[i] = true;
                let receiver = &mut self.agents[i];
                if receiver.role == Role::Originator {
                    continue;
                }
                let trust = similarity(&receiver.opinion, &wj);
                let incoming = discount(&wj, trust);
                if let Some(fused) = consensus(&receiver.opinion, &incoming) {
                    receiver.opinion = fused;
                }
            }
        }

        for agent in &mut self.agents {
            if agent.role == Role::Propagator {
                agent.opinion = decay(&agent.opinion, gamma);
            }
            agent.status = classify_status(&agent.opinion);
        }

        let mut newly_active = 0;
        for (flag, got) in self.active.iter_mut().zip(received) {
            if got && !*flag {
                *flag = true;
                newly_active += 1;
            }
        }
        StepReport {
            senders,
            newly_active,
        }
    }

    pub fn metrics(&self, t: usize) -> StepMetrics {
        let mut all = [0.0f64; 3];
        let mut prop = [0.0f64; 3];
        let mut status = [0usize; 3];
        let mut n_prop = 0usize;
        for agent in &self.agents {
            let o = &agent.opinion;
            let masses = [o.belief(), o.disbelief(), o.uncertainty()];
            for k in 0..3 {
                all[k] += masses[k];
            }
            if agent.role == Role::Propagator {
                n_prop += 1;
                for k in 0..3 {
                    prop[k] += masses[k];
                }
                status[agent.status as usize] += 1;
            }
        }
        // Without propagators, statuses fall back to the whole population.
        if n_prop == 0 {
            for agent in &self.agents {
                status[agent.status as usize] += 1;
            }
        }
        let n = self.agents.len().max(1) as f64;
        let n_status = status.iter().sum::<usize>().max(1) as f64;
        let np = n_prop.max(1) as f64;
        StepMetrics {
            t,
            mean_b: all[0] / n,
            mean_d: all[1] / n,
            mean_u: all[2] / n,
            frac_s: status[Status::Susceptible as usize] as f64 / n_status,
            frac_i: status[Status::Infected as usize] as f64 / n_status,
            frac_r: status[Status::Recovered as usize] as f64 / n_status,
            prop_mean_b: prop[0] / np,
            prop_mean_d: prop[1] / np,
            prop_mean_u: prop[2] / np,
        }
    }

    /// `id,role,tc,a_raw,a_adj,b,d,u,status`
    pub fn write_snapshot_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "id,role,tc,a_raw,a_adj,b,d,u,status")?;
        for a in &self.agents {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                a.id,
                a.role,
                sig9(a.tc),
                sig9(a.a_raw),
                sig9(a.a_adj),
                sig9(a.opinion.belief()),
                sig9(a.opinion.disbelief()),
                sig9(a.opinion.uncertainty()),
                a.status
            )?;
        }
        Ok(())
    }
}

/// Trajectory and end state of one simulation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Metrics of the freshly initialized population.
    pub initial: StepMetrics,
    /// One entry per step, `t = 1..=steps`.
    pub steps: Vec<StepMetrics>,
    pub population: Population,
    /// First step in which every agent pushed its opinion, if any.
    pub first_full_activation: Option<usize>,
}

impl RunOutput {
    /// Last step's metrics, or the initial ones for an empty horizon.
    pub fn final_metrics(&self) -> StepMetrics {
        self.steps.last().copied().unwrap_or(self.initial)
    }
}

/// Runs `cfg.steps` steps on an explicit evidence matrix.
pub fn run(g: &Graph, cfg: &SimConfig, ev: &EvidenceMatrix) -> Result<RunOutput> {
    let mut population = Population::init(g, cfg, ev)?;
    let initial = population.metrics(0);
    let mut schedule: SimRng = rng::stream(cfg.seed, rng::STREAM_SCHEDULE);
    let mut steps = Vec::with_capacity(cfg.steps);
    let mut first_full_activation = None;
    for t in 1..=cfg.steps {
        if first_full_activation.is_none() && population.all_active() {
            first_full_activation = Some(t);
        }
        population.step(g, cfg.gamma, &mut schedule);
        steps.push(population.metrics(t));
    }
    Ok(RunOutput {
        initial,
        steps,
        population,
        first_full_activation,
    })
}

/// Evidence matrix of `cfg.evidence`, shuffled by a stream of `cfg.seed`.
pub fn generate_evidence(cfg: &SimConfig) -> Result<EvidenceMatrix> {
    build_matrix(
        cfg.evidence,
        &mut rng::stream(cfg.seed, rng::STREAM_EVIDENCE),
    )
}

/// Builds the evidence matrix from `cfg.evidence` (seeded by `cfg.seed`) and runs.
pub fn simulate(g: &Graph, cfg: &SimConfig) -> Result<RunOutput> {
    cfg.validate()?;
    run(g, cfg, &generate_evidence(cfg)?)
}

/// `t,mean_b,mean_d,mean_u,frac_S,frac_I,frac_R`
pub fn write_metrics_csv<W: Write>(metrics: &[StepMetrics], mut out: W) -> Result<()> {
    writeln!(out, "t,mean_b,mean_d,mean_u,frac_S,frac_I,frac_R")?;
    for m in metrics {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            m.t,
            sig9(m.mean_b),
            sig9(m.mean_d),
            sig9(m.mean_u),
            sig9(m.frac_s),
            sig9(m.frac_i),
            sig9(m.frac_r)
        )?;
    }
    Ok(())
}
