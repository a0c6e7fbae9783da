//! The polynomial algebra `k[x₁..x_d]` as the path algebra of one vertex
//! with `d` loops modulo the commutator rules `x_j x_i ↦ x_i x_j` (`i < j`).

mod graphs;
mod moyal;
mod poisson;
mod poly;

use std::sync::Arc;

pub use graphs::{
    brute_force_graph_count, cochain_polys, enumerate_graphs, eval_graph, graph_operator, graphical_operator,
    graphical_star, BiDiffOperator, KGraph, Node, DEFAULT_GRAPH_CAP,
};
pub use moyal::{exponential_star, gauge_phi, moyal};
pub use poisson::{poisson_to_cochain, quantize_check, schouten_jacobi_check, JacobiReport, PoissonBivector};
pub use poly::{CommPoly, Exponents};

use crate::element::Element;
use crate::error::Result;
use crate::quiver::{Path, Quiver};
use crate::reduction::ReductionSystem;

/// The commutator system on arrows named `names`, ordered as given.
pub fn commutator_system(names: &[&str]) -> Result<ReductionSystem> {
    let arrows: Vec<(&str, &str, &str)> = names.iter().map(|n| (*n, "1", "1")).collect();
    let q = Arc::new(Quiver::new(&["1"], &arrows)?);
    let d = names.len() as u32;
    let mut pairs = Vec::new();
    for j in 0..d {
        for i in 0..j {
            pairs.push((Path::from_arrows(&[j, i]), Element::path(&q, Path::from_arrows(&[i, j]))));
        }
    }
    ReductionSystem::from_pairs(&q, pairs)
}

/// `x`, `y`, `z` for `d ≤ 3`, else `x1..xd`.
pub fn default_names(d: usize) -> Vec<String> {
    if d <= 3 {
        ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}

/// Commutator system with [`default_names`].
pub fn polynomial_system(d: usize) -> Result<ReductionSystem> {
    let names = default_names(d);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    commutator_system(&refs)
}
