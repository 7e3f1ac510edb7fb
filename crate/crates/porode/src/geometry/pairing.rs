//! Selection of pore pairs whose interaction is estimated.

use serde::{Deserialize, Serialize};

use super::pore::{pore_surface_distance, Pore};
use crate::error::Result;

/// Unordered pair of pores with `i < j` (by id).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PorePair {
    /// Smaller pore id.
    pub i: u32,
    /// Larger pore id.
    pub j: u32,
    /// Minimum distance between the two boundaries.
    pub surface_distance: f64,
}

/// Rule deciding which pore pairs receive an interaction term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairPolicy {
    /// Pair every pore with its nearest neighbour, then drop pairs whose
    /// surface distance exceeds `cutoff_factor` × the mean equivalent
    /// diameter of the two pores.
    NearestNeighbor {
        /// Distance cutoff in units of the mean equivalent diameter.
        cutoff_factor: f64,
    },
    /// Every pair of pores, optionally filtered by the same distance cutoff.
    AllPairs {
        /// Optional distance cutoff in units of the mean equivalent diameter.
        cutoff_factor: Option<f64>,
    },
}

impl Default for PairPolicy {
    fn default() -> Self {
        PairPolicy::NearestNeighbor { cutoff_factor: 5.0 }
    }
}

fn within_cutoff(a: &Pore, b: &Pore, distance: f64, factor: Option<f64>) -> bool {
    match factor {
        None => true,
        Some(f) => distance <= f * 0.5 * (a.equivalent_diameter() + b.equivalent_diameter()),
    }
}

fn make_pair(a: &Pore, b: &Pore, d: f64) -> PorePair {
    PorePair {
        i: a.id().min(b.id()),
        j: a.id().max(b.id()),
        surface_distance: d,
    }
}

/// Applies `policy` to a pore set. The result is sorted by `(i, j)`, holds
/// each unordered pair once and does not depend on the order of `pores`.
pub fn select_interaction_pairs(pores: &[Pore], policy: PairPolicy) -> Result<Vec<PorePair>> {
    let mut sorted: Vec<&Pore> = pores.iter().collect();
    sorted.sort_by_key(|p| p.id());
    let n = sorted.len();
    let mut dist = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let d = pore_surface_distance(sorted[a], sorted[b])?;
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    let mut pairs = Vec::new();
    match policy {
        PairPolicy::NearestNeighbor { cutoff_factor } => {
            for a in 0..n {
                let nearest = (0..n)
                    .filter(|&b| b != a)
                    .min_by(|&x, &y| dist[a][x].total_cmp(&dist[a][y]).then(x.cmp(&y)));
                if let Some(b) = nearest {
                    if within_cutoff(sorted[a], sorted[b], dist[a][b], Some(cutoff_factor)) {
                        pairs.push(make_pair(sorted[a], sorted[b], dist[a][b]));
                    }
                }
            }
        }
        PairPolicy::AllPairs { cutoff_factor } => {
            for a in 0..n {
                for b in (a + 1)..n {
                    if within_cutoff(sorted[a], sorted[b], dist[a][b], cutoff_factor) {
                        pairs.push(make_pair(sorted[a], sorted[b], dist[a][b]));
                    }
                }
            }
        }
    }
    pairs.sort_by_key(|p| (p.i, p.j));
    pairs.dedup_by_key(|p| (p.i, p.j));
    Ok(pairs)
}
