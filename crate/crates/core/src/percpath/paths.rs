//! Exact maxima over the jump-path family `P_L`: sequences of distinct sites
//! of `B(L)` whose consecutive l1 gaps sum to at most `L`. Paths need not
//! start at the origin and a single site is a path.

use rustc_hash::FxHashMap;

use super::{ExactnessCaps, PercError, SiteField};
use crate::walkfield::{LatticeBox, Site};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JumpPath {
    pub vertices: Vec<Site>,
}

impl JumpPath {
    pub fn total_jump(&self) -> u32 {
        self.vertices.windows(2).map(|w| w[0].l1_dist(&w[1])).sum()
    }

    pub fn max_jump(&self) -> u32 {
        self.vertices
            .windows(2)
            .map(|w| w[0].l1_dist(&w[1]))
            .max()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Membership in `P_L`.
    pub fn is_member(&self, radius: u32) -> bool {
        let Some(first) = self.vertices.first() else {
            return true;
        };
        let b = LatticeBox::ball(first.dim(), radius);
        let mut sorted = self.vertices.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == self.vertices.len()
            && self.vertices.iter().all(|v| b.contains(v))
            && self.total_jump() <= radius
    }

    pub fn weight(&self, field: &SiteField) -> u32 {
        self.vertices.iter().filter(|v| field.get(v)).count() as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMax {
    pub weight: u32,
    pub path: JumpPath,
}

struct OpenSearch {
    dist: Vec<Vec<u32>>,
    visited: Vec<bool>,
    stack: Vec<usize>,
    best: u32,
    best_path: Vec<usize>,
    ceiling: u32,
}

impl OpenSearch {
    fn dfs(&mut self, cur: usize, budget: u32) {
        let weight = self.stack.len() as u32;
        if weight > self.best {
            self.best = weight;
            self.best_path = self.stack.clone();
        }
        if self.best >= self.ceiling {
            return;
        }
        let n = self.dist.len();
        let mut next: Vec<(u32, usize)> = (0..n)
            .filter(|&j| !self.visited[j] && self.dist[cur][j] <= budget)
            .map(|j| (self.dist[cur][j], j))
            .collect();
        // Each extra vertex costs at least one unit of budget.
        let bound = weight + (next.len() as u32).min(budget);
        if bound <= self.best {
            return;
        }
        next.sort_unstable();
        for (d, j) in next {
            self.visited[j] = true;
            self.stack.push(j);
            self.dfs(j, budget - d);
            self.stack.pop();
            self.visited[j] = false;
            if self.best >= self.ceiling {
                return;
            }
        }
    }
}

/// `X_L = max_{gamma in P_L} sum_{x in gamma} I_x`, exactly.
///
/// Only open sites are searched: dropping closed vertices from a path keeps
/// it in `P_L` (triangle inequality) without changing its weight.
pub fn max_path_weight(
    field: &SiteField,
    radius: u32,
    caps: &ExactnessCaps,
) -> Result<PathMax, PercError> {
    caps.check_path_radius(radius)?;
    let open = field.open_sites_within(radius);
    let n = open.len();
    if n == 0 {
        return Ok(PathMax {
            weight: 0,
            path: JumpPath::default(),
        });
    }
    let dist: Vec<Vec<u32>> = open
        .iter()
        .map(|a| open.iter().map(|b| a.l1_dist(b)).collect())
        .collect();
    let mut search = OpenSearch {
        dist,
        visited: vec![false; n],
        stack: Vec::new(),
        best: 0,
        best_path: Vec::new(),
        ceiling: (n as u32).min(radius + 1),
    };
    for start in 0..n {
        search.visited[start] = true;
        search.stack.push(start);
        search.dfs(start, radius);
        search.stack.pop();
        search.visited[start] = false;
        if search.best >= search.ceiling {
            break;
        }
    }
    Ok(PathMax {
        weight: search.best,
        path: JumpPath {
            vertices: search.best_path.iter().map(|&i| open[i]).collect(),
        },
    })
}

/// Ordered pairs `(a, b)` of `B(radius)` with `0 < |a - b|_1 <= radius`:
/// the hops a path in `P_radius` may take.
pub fn hop_pairs(dim: usize, radius: u32) -> Vec<(Site, Site)> {
    let b = LatticeBox::ball(dim, radius);
    let sites: Vec<Site> = b.iter().collect();
    let mut pairs = Vec::new();
    for a in &sites {
        for c in &sites {
            let d = a.l1_dist(c);
            if d > 0 && d <= radius {
                pairs.push((*a, *c));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPathMax {
    pub value: u64,
    pub path: JumpPath,
}

struct WeightedSearch<'a> {
    sites: Vec<Site>,
    weights: &'a FxHashMap<(Site, Site), u64>,
    visited: Vec<bool>,
    stack: Vec<usize>,
    best: u64,
    best_path: Vec<usize>,
    // Largest weight per unit of l1 distance, as a fraction.
    ratio: (u64, u64),
}

impl WeightedSearch<'_> {
    fn dfs(&mut self, cur: usize, value: u64, budget: u32) {
        if value > self.best {
            self.best = value;
            self.best_path = self.stack.clone();
        }
        let (num, den) = self.ratio;
        if (value as u128) * den as u128 + num as u128 * budget as u128
            <= self.best as u128 * den as u128
        {
            return;
        }
        for j in 0..self.sites.len() {
            let d = self.sites[cur].l1_dist(&self.sites[j]);
            if self.visited[j] || d == 0 || d > budget {
                continue;
            }
            let w = self.weights[&(self.sites[cur], self.sites[j])];
            self.visited[j] = true;
            self.stack.push(j);
            self.dfs(j, value + w, budget - d);
            self.stack.pop();
            self.visited[j] = false;
        }
    }
}

/// `max_{gamma in P_L} sum_i w(y_i, y_{i+1})` for nonnegative hop weights.
/// `weights` must cover every pair of [`hop_pairs`].
pub fn weighted_path_max(
    weights: &FxHashMap<(Site, Site), u64>,
    dim: usize,
    radius: u32,
    caps: &ExactnessCaps,
) -> Result<WeightedPathMax, PercError> {
    caps.check_weighted_radius(radius)?;
    let mut ratio = (0u64, 1u64);
    for (a, b) in hop_pairs(dim, radius) {
        let w = *weights
            .get(&(a, b))
            .ok_or(PercError::MissingWeight(a, b))?;
        let d = a.l1_dist(&b) as u64;
        if (w as u128) * (ratio.1 as u128) > (ratio.0 as u128) * (d as u128) {
            ratio = (w, d);
        }
    }
    let sites: Vec<Site> = LatticeBox::ball(dim, radius).iter().collect();
    let n = sites.len();
    let mut search = WeightedSearch {
        sites,
        weights,
        visited: vec![false; n],
        stack: Vec::new(),
        best: 0,
        best_path: Vec::new(),
        ratio,
    };
    for start in 0..n {
        search.visited[start] = true;
        search.stack.push(start);
        if search.best_path.is_empty() {
            search.best_path = vec![start];
        }
        search.dfs(start, 0, radius);
        search.stack.pop();
        search.visited[start] = false;
    }
    let vertices = search.best_path.iter().map(|&i| search.sites[i]).collect();
    Ok(WeightedPathMax {
        value: search.best,
        path: JumpPath { vertices },
    })
}
