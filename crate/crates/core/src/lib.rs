//! Agent-based simulation of uncertain opinions spreading over social graphs.
//!
//! Opinions are binomial subjective-logic opinions `(b, d, u, a)`. Seeded
//! originators perceive a mixed pro/con, valuable/noisy evidence pool through
//! their topic competence; propagators fuse neighbors' opinions weighted by
//! homophily and forget over time. Agents are classified susceptible,
//! infected (believe the false proposition) or recovered (disbelieve it).

pub mod error;
pub mod evidence;
pub mod experiments;
pub mod format;
pub mod network;
pub mod opinion;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use evidence::{EvidenceClass, EvidenceMatrix, EvidenceMix, PerceivedCounts};
pub use experiments::{preset, run_sweep, SweepParam, SweepResult, SweepSpec};
pub use network::{compute_stats, Graph, GraphSource, GraphStats, SeedStrategy};
pub use opinion::{EvidenceCounts, Expectation, Opinion};
pub use sim::{run, simulate, Agent, Population, Role, RunOutput, SimConfig, Status, StepMetrics};
