//! Lattice animals: connected sets containing the origin.

use rustc_hash::FxHashSet;

use super::{max_path_weight, ExactnessCaps, JumpPath, PercError, SiteField};
use crate::walkfield::Site;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnimalMax {
    pub weight: u32,
    pub cells: Vec<Site>,
}

struct Redelmeier<'a> {
    field: &'a SiteField,
    max_cells: u32,
    seen: FxHashSet<Site>,
    animal: Vec<Site>,
    best: u32,
    best_cells: Vec<Site>,
}

impl Redelmeier<'_> {
    // Each connected set containing the root is produced exactly once: a
    // cell popped from `untried` stays in `seen` for the remaining siblings.
    fn extend(&mut self, mut untried: Vec<Site>, weight: u32) {
        while let Some(c) = untried.pop() {
            self.animal.push(c);
            let w = weight + self.field.get(&c) as u32;
            if w > self.best {
                self.best = w;
                self.best_cells = self.animal.clone();
            }
            let room = self.max_cells - self.animal.len() as u32;
            if room > 0 && w + room > self.best {
                let mut added = Vec::new();
                for nb in c.neighbors() {
                    if self.seen.insert(nb) {
                        added.push(nb);
                    }
                }
                let mut next = untried.clone();
                next.extend_from_slice(&added);
                self.extend(next, w);
                for nb in added {
                    self.seen.remove(&nb);
                }
            }
            self.animal.pop();
        }
    }
}

/// `N_L = max { X(A) : 0 in A, A connected, |A| <= L + 1 }`, exactly.
pub fn max_animal_weight(
    field: &SiteField,
    size_bound: u32,
    caps: &ExactnessCaps,
) -> Result<AnimalMax, PercError> {
    caps.check_animal_cells(size_bound + 1)?;
    let origin = Site::origin(field.dim());
    let mut search = Redelmeier {
        field,
        max_cells: size_bound + 1,
        seen: FxHashSet::default(),
        animal: Vec::new(),
        best: 0,
        best_cells: vec![origin],
    };
    search.seen.insert(origin);
    search.extend(vec![origin], 0);
    let mut cells = search.best_cells;
    cells.sort();
    Ok(AnimalMax {
        weight: search.best,
        cells,
    })
}

/// Connected set containing the origin and every vertex of `path`, built
/// from coordinate-wise lattice segments `0 -> y_1 -> ... -> y_l`.
pub fn animal_witness(dim: usize, path: &[Site]) -> Vec<Site> {
    let mut cur = Site::origin(dim);
    let mut cells = vec![cur];
    for target in path {
        for axis in 0..dim {
            while cur.coord(axis) != target.coord(axis) {
                let next = if cur.coord(axis) < target.coord(axis) {
                    cur.coord(axis) + 1
                } else {
                    cur.coord(axis) - 1
                };
                cur = cur.with_coord(axis, next);
                cells.push(cur);
            }
        }
    }
    cells.sort();
    cells.dedup();
    cells
}

pub fn is_connected(cells: &[Site]) -> bool {
    let Some(&start) = cells.first() else {
        return true;
    };
    let set: FxHashSet<Site> = cells.iter().copied().collect();
    let mut seen = FxHashSet::default();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for nb in c.neighbors() {
            if set.contains(&nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == set.len()
}

/// Comparison of `X_L` against `N_{(d+1)L}` on one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnimalBoundCheck {
    pub x_l: u32,
    pub path: JumpPath,
    /// `N_{(d+1)L}` when `exact`, otherwise the weight of an explicit animal
    /// of at most `(d+1)L + 1` cells, which is a lower bound on it.
    pub n_value: u32,
    pub exact: bool,
    pub animal_cells: usize,
    pub holds: bool,
}

/// Checks `X_L <= N_{(d+1)L}`.
///
/// When `(d+1)L + 1` cells fit the animal cap, `N` is computed exactly (the
/// field must then cover `B((d+1)L)`). Otherwise the witness animal through
/// the optimal path is built and validated; its weight bounds `N` from below.
pub fn xl_animal_check(
    field: &SiteField,
    radius: u32,
    caps: &ExactnessCaps,
) -> Result<AnimalBoundCheck, PercError> {
    let dim = field.dim();
    let best = max_path_weight(field, radius, caps)?;
    let big = (dim as u32 + 1) * radius;
    if caps.check_animal_cells(big + 1).is_ok() {
        if field.radius() < big {
            return Err(PercError::InvalidArgument(format!(
                "field radius {} does not cover B({big})",
                field.radius()
            )));
        }
        let n = max_animal_weight(field, big, caps)?;
        return Ok(AnimalBoundCheck {
            x_l: best.weight,
            holds: best.weight <= n.weight,
            path: best.path,
            n_value: n.weight,
            exact: true,
            animal_cells: n.cells.len(),
        });
    }
    let cells = animal_witness(dim, &best.path.vertices);
    let valid = cells.len() as u32 <= big + 1
        && cells.contains(&Site::origin(dim))
        && is_connected(&cells);
    let weight = cells.iter().filter(|c| field.get(c)).count() as u32;
    Ok(AnimalBoundCheck {
        x_l: best.weight,
        holds: valid && best.weight <= weight,
        path: best.path,
        n_value: weight,
        exact: false,
        animal_cells: cells.len(),
    })
}
