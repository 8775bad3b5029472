//! Lattice geometry and the keyed family of random walks `{S^x}` that one
//! sample point of the frog model consists of.

pub mod keyed;
mod site;
mod walk;

use std::sync::Arc;

use rustc_hash::FxHashSet;

pub use site::{LatticeBox, Site, SiteError, MAX_DIM};
pub use walk::{first_visits, hitting_time, walk_position, Hitting, Step, Walk, WalkKey};

/// Replaces the keys of a subset of sites with keys from another replica.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rekey {
    /// Exactly these sites draw from `replica`.
    Sites {
        sites: Arc<FxHashSet<Site>>,
        replica: u64,
    },
    /// Every site outside `center + [-radius, radius]^d` draws from `replica`.
    Outside {
        center: Site,
        radius: u32,
        replica: u64,
    },
}

impl Rekey {
    fn replica_for(&self, site: &Site) -> Option<u64> {
        match self {
            Rekey::Sites { sites, replica } => sites.contains(site).then_some(*replica),
            Rekey::Outside {
                center,
                radius,
                replica,
            } => (site.sup_dist(center) > *radius).then_some(*replica),
        }
    }
}

/// Fault injection for exercising the verification battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultHook {
    /// Batch hitting-time queries read a different replica than the
    /// trajectories stepped by the engine.
    CorruptHittingKeys,
}

/// One realization `omega` of the walk family: the walk at `x` is keyed by
/// `(master_seed, replica, x)` unless a rekey rule applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkField {
    master_seed: u64,
    replica: u64,
    dim: usize,
    rekeys: Vec<Rekey>,
    fault: Option<FaultHook>,
}

impl WalkField {
    pub fn new(master_seed: u64, replica: u64, dim: usize) -> Result<Self, SiteError> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(SiteError::BadDimension(dim));
        }
        Ok(WalkField {
            master_seed,
            replica,
            dim,
            rekeys: Vec::new(),
            fault: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    /// Copy of the field where the listed sites walk with fresh keys.
    pub fn resampled_at<I: IntoIterator<Item = Site>>(&self, sites: I, replica: u64) -> Self {
        let mut f = self.clone();
        f.rekeys.push(Rekey::Sites {
            sites: Arc::new(sites.into_iter().collect()),
            replica,
        });
        f
    }

    /// Copy of the field where every walk outside the box is rekeyed.
    pub fn resampled_outside(&self, center: Site, radius: u32, replica: u64) -> Self {
        let mut f = self.clone();
        f.rekeys.push(Rekey::Outside {
            center,
            radius,
            replica,
        });
        f
    }

    pub fn with_fault(mut self, fault: FaultHook) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn fault(&self) -> Option<FaultHook> {
        self.fault
    }

    /// Later rekey rules take precedence.
    pub fn key(&self, site: Site) -> WalkKey {
        let replica = self
            .rekeys
            .iter()
            .rev()
            .find_map(|r| r.replica_for(&site))
            .unwrap_or(self.replica);
        WalkKey::new(self.master_seed, replica, site)
    }

    pub fn walk(&self, site: Site) -> Walk {
        Walk::new(&self.key(site))
    }

    pub fn position(&self, site: Site, j: u64) -> Site {
        walk_position(&self.key(site), j)
    }

    /// `t(from, to)` truncated at `horizon`.
    pub fn hitting_time(&self, from: Site, to: Site, horizon: u64) -> Hitting {
        hitting_time(&self.query_key(from), to, horizon)
    }

    /// First visits of the walk from `from` inside `region` up to `horizon`.
    pub fn first_visits(
        &self,
        from: Site,
        horizon: u64,
        region: Option<&LatticeBox>,
    ) -> rustc_hash::FxHashMap<Site, u64> {
        first_visits(&self.query_key(from), horizon, region)
    }

    fn query_key(&self, site: Site) -> WalkKey {
        let mut key = self.key(site);
        if self.fault == Some(FaultHook::CorruptHittingKeys) {
            key.replica ^= 1;
        }
        key
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rekey_sites_changes_only_those_walks() {
        let f = WalkField::new(1, 0, 2).unwrap();
        let u = Site::new(&[1, 1]);
        let g = f.resampled_at([u], 99);
        assert_eq!(g.key(u).replica, 99);
        assert_eq!(g.key(Site::origin(2)), f.key(Site::origin(2)));
    }

    #[test]
    fn rekey_outside_box() {
        let f = WalkField::new(1, 0, 2)
            .unwrap()
            .resampled_outside(Site::origin(2), 3, 5);
        assert_eq!(f.key(Site::new(&[3, -3])).replica, 0);
        assert_eq!(f.key(Site::new(&[4, 0])).replica, 5);
    }

    #[test]
    fn bad_dimension_rejected() {
        assert!(WalkField::new(1, 0, 0).is_err());
        assert!(WalkField::new(1, 0, 5).is_err());
    }
}
