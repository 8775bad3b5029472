//! Frog-model passage times on a realized [`WalkField`](crate::walkfield::WalkField).
//!
//! `T(x, y)` is the infimum over chains `x = x_0, ..., x_k = y` of the summed
//! hitting times `t(x_{i-1}, x_i)`; the engine computes it as the activation
//! time of `y` when only the frog at `x` starts active.

mod derived;
mod engine;
mod horizon;
mod oracle;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::walkfield::{Site, SiteError};

pub use derived::{
    fourth_root_floor, removed_passage_time, spatial_average, subadditivity_check, t1, t2,
    SpatialAverage, SubadditivityWitness, T2Value,
};
pub use engine::{activation_table, passage_time, ActivationRecord, ActivationTable, PassageSample};
pub use horizon::{passage_time_adaptive, HorizonPolicy};
pub use oracle::{dijkstra_oracle, t2_by_sweep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrogError {
    #[error("destination not reached within horizon {horizon}")]
    NotReached { horizon: u64 },
    #[error("source {0} hosts a removed frog")]
    SourceMasked(Site),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Site(#[from] SiteError),
}

impl FrogError {
    pub fn is_not_reached(&self) -> bool {
        matches!(self, FrogError::NotReached { .. })
    }
}

/// Sites whose frogs are removed. A removed site may still end a chain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrogMask {
    removed: FxHashSet<Site>,
}

impl FrogMask {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_sites<I: IntoIterator<Item = Site>>(sites: I) -> Self {
        FrogMask {
            removed: sites.into_iter().collect(),
        }
    }

    pub fn single(site: Site) -> Self {
        Self::from_sites([site])
    }

    #[inline]
    pub fn contains(&self, site: &Site) -> bool {
        self.removed.contains(site)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn insert(&mut self, site: Site) -> bool {
        self.removed.insert(site)
    }

    /// Removed sites in lexicographic order.
    pub fn sites(&self) -> Vec<Site> {
        let mut v: Vec<_> = self.removed.iter().copied().collect();
        v.sort();
        v
    }
}
