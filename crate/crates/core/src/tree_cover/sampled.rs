//! Approximate optimal tree from a growing vertex sample.
//!
//! For a tree `T` and a vertex `u`, `y_u(T)` counts the tree edges whose tail
//! is reachable from `u`, so `W(T) = Σ_u y_u(T)`. Summing conditional passes
//! over the sampled groups gives `Σ_{u∈S} y_u(T)` for every candidate tree at
//! once, and `Ŵ(T) = N · Σ_{u∈S} y_u(T) / n` is an unbiased estimate of `W(T)`.
//!
//! Each `y_u / N` lies in `[0, 1]`, so Hoeffding bounds the estimate by
//! `|Ŵ − W| ≤ ε₁·N²` with probability `1 − δ₁`. The search stops as soon as
//! `2·ε₁·N² / (Ŵ − ε₁·N²) ≤ θ`; otherwise it consumes every group and
//! returns the exact optimum.

use rand::seq::SliceRandom;

use super::{best_parents, conditional_pass, GroupPartition, TreeCover};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::rng_from_seed;

/// `⌈ln(2/δ₁) / (2ε₁²)⌉`: samples needed for an `(ε₁, δ₁)` Hoeffding guarantee.
pub fn sample_size(eps1: f64, delta1: f64) -> u64 {
    ((2.0 / delta1).ln() / (2.0 * eps1 * eps1)).ceil() as u64
}

/// `ε₁ = sqrt(ln(2/δ₁) / (2n))`.
pub fn epsilon1(n: usize, delta1: f64) -> f64 {
    ((2.0 / delta1).ln() / (2.0 * n as f64)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingParams {
    pub theta: f64,
    pub delta: f64,
    pub group_size: usize,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            theta: 0.05,
            delta: 0.05,
            group_size: 1024,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleEstimate {
    /// Vertices sampled so far (`n`).
    pub samples: usize,
    /// Vertex count of the graph (`N`).
    pub total: usize,
    /// `|pred(v | S)|` for every vertex; the partial weight of every edge leaving `v`.
    pub partial: Vec<u64>,
    /// `Σ_{u∈S} y_u(T)` for the current tree.
    pub y_sum: u64,
    pub what: f64,
    pub eps1: f64,
    pub delta1: f64,
    pub theta: f64,
    pub delta: f64,
    pub groups_used: usize,
    /// True when the test fired before the sample was exhausted.
    pub stopped_early: bool,
}

impl SampleEstimate {
    /// Hoeffding half-width on `W`, in absolute units.
    pub fn error_bound(&self) -> f64 {
        let big_n = self.total as f64;
        self.eps1 * big_n * big_n
    }

    pub fn passes_test(&self) -> bool {
        let slack = self.error_bound();
        self.what > slack && 2.0 * slack / (self.what - slack) <= self.theta
    }
}

pub fn sampled_tree(g: &Dag, params: SamplingParams) -> Result<(TreeCover, SampleEstimate)> {
    let SamplingParams {
        theta,
        delta,
        group_size,
        seed,
    } = params;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (0, 1), got {theta}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if group_size == 0 {
        return Err(Error::InvalidParameter(
            "group_size must be at least 1".into(),
        ));
    }

    let big_n = g.n();
    let part = GroupPartition::with_group_size(big_n, group_size, seed);
    let mut order: Vec<usize> = (0..part.k()).collect();
    order.shuffle(&mut rng_from_seed(seed ^ 0x005e_ed0f_9a0c));

    let delta1 = delta / 2.0;
    let mut est = SampleEstimate {
        samples: 0,
        total: big_n,
        partial: vec![0; big_n],
        y_sum: 0,
        what: 0.0,
        eps1: f64::INFINITY,
        delta1,
        theta,
        delta,
        groups_used: 0,
        stopped_early: false,
    };
    let mut parents = vec![None; big_n];

    for &k in &order {
        if part.members[k].is_empty() {
            continue;
        }
        let counts = conditional_pass(g, &part.mask(k));
        est.partial
            .iter_mut()
            .zip(counts)
            .for_each(|(a, b)| *a += b);
        est.samples += part.members[k].len();
        est.groups_used += 1;

        parents = best_parents(g, &est.partial);
        est.y_sum = parents
            .iter()
            .flatten()
            .map(|&p| est.partial[p as usize])
            .sum();
        est.what = est.y_sum as f64 / est.samples as f64 * big_n as f64;
        est.eps1 = epsilon1(est.samples, delta1);
        if est.samples < big_n && est.passes_test() {
            est.stopped_early = true;
            break;
        }
    }

    // After the last group the partial counts are exact, and so is the tree.
    let tree = TreeCover::from_parents(parents, &est.partial);
    let tree = TreeCover {
        weight: est.what.round() as u64,
        ..tree
    };
    Ok((tree, est))
}

/// `y_u(T)` for each sampled `u`: tree edges whose tail `u` reaches.
pub fn tree_y_values(g: &Dag, tree: &TreeCover, sample: &[Vertex]) -> Vec<u64> {
    let mut child_count = vec![0u64; g.n()];
    for p in tree.parent.iter().flatten() {
        child_count[*p as usize] += 1;
    }
    let mut bfs = BfsScratch::new(g.n());
    sample
        .iter()
        .map(|&u| {
            bfs.run(g, u, u32::MAX, Direction::Forward)
                .iter()
                .map(|&x| child_count[x as usize])
                .sum()
        })
        .collect()
}

/// `Ŵ(T) = N · Σ_{u∈S} y_u(T) / n`.
pub fn estimate_tree_weight(g: &Dag, tree: &TreeCover, sample: &[Vertex]) -> f64 {
    let sum: u64 = tree_y_values(g, tree, sample).iter().sum();
    sum as f64 / sample.len() as f64 * g.n() as f64
}
