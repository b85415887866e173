//! Reference formulas on plain `(b, d, u)` tuples, written independently of
//! the library's operator code, plus shared scenario builders.
#![allow(dead_code)]

use slsim::sim::{Agent, Population, Role};
use slsim::{Graph, Opinion};

pub type Triple = (f64, f64, f64);

pub fn triple(o: &Opinion) -> Triple {
    (o.belief(), o.disbelief(), o.uncertainty())
}

pub fn cosine(x: Triple, y: Triple) -> f64 {
    let dot = x.0 * y.0 + x.1 * y.1;
    let nx = (x.0 * x.0 + x.1 * x.1).sqrt();
    let ny = (y.0 * y.0 + y.1 * y.1).sqrt();
    if nx == 0.0 || ny == 0.0 {
        0.0
    } else {
        dot / (nx * ny)
    }
}

pub fn discounted(w: Triple, s: f64) -> Triple {
    let b = s * w.0;
    let d = s * w.1;
    (b, d, 1.0 - b - d)
}

pub fn fused(x: Triple, y: Triple) -> Triple {
    let k = x.2 + y.2 - x.2 * y.2;
    let b = (x.0 * y.2 + y.0 * x.2) / k;
    let d = (x.1 * y.2 + y.1 * x.2) / k;
    (b, d, 1.0 - b - d)
}

pub fn decayed(w: Triple, g: f64) -> Triple {
    let b = w.0 * (1.0 - g);
    let d = w.1 * (1.0 - g);
    (b, d, 1.0 - b - d)
}

/// One receive event: similarity → discount → consensus.
pub fn receive(receiver: Triple, sender: Triple) -> Triple {
    fused(receiver, discounted(sender, cosine(receiver, sender)))
}

pub fn assert_close(got: Triple, want: Triple, tol: f64) {
    assert!(
        (got.0 - want.0).abs() <= tol && (got.1 - want.1).abs() <= tol && (got.2 - want.2).abs() <= tol,
        "{got:?} != {want:?} (tol {tol})"
    );
}

/// Star with an originator `(0.9, 0.05, 0.05)` at the hub and `leaves`
/// fresh `(1, 1, 100)` propagators; only the hub starts active.
pub fn star_scenario(leaves: usize) -> (Graph, Population) {
    let g = Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap();
    let hub = Opinion::new(0.9, 0.05, 0.05, 0.5).unwrap();
    let mut agents = vec![Agent::with_opinion(0, Role::Originator, hub, 0.5, 0.5).unwrap()];
    let mut active = vec![true];
    for id in 1..=leaves {
        agents.push(Agent::propagator(id, 0.5, 0.5, 100.0).unwrap());
        active.push(false);
    }
    (g, Population::from_agents(agents, active).unwrap())
}

/// Hand-evaluated leaf opinion after one step of the star scenario (γ = 0).
pub fn star_leaf_expected() -> Triple {
    let leaf = (1.0 / 102.0, 1.0 / 102.0, 100.0 / 102.0);
    receive(leaf, (0.9, 0.05, 0.05))
}
