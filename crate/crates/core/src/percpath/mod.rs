//! Site percolation: independent, synthetic `M`-dependent and frog-derived
//! indicator fields, with exact path and lattice-animal maxima and the
//! tessellation bound.

mod animals;
mod field;
mod paths;
mod tessellation;

use thiserror::Error;

use crate::frogcore::FrogError;
use crate::walkfield::Site;

pub use animals::{
    animal_witness, is_connected, max_animal_weight, xl_animal_check, AnimalBoundCheck, AnimalMax,
};
pub use field::{
    frog_indicator, gen_frog_indicator_field, gen_independent_field, gen_m_dependent_field,
    l1_ball_size, SiteField,
};
pub use paths::{
    hop_pairs, max_path_weight, weighted_path_max, JumpPath, PathMax, WeightedPathMax,
};
pub use tessellation::{
    group_count, group_indicator_field, group_offset, tess_box, tessellate,
    tessellation_bound_check, TessBox, Tessellation, TessellationReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PercError {
    #[error("{what} = {value} exceeds the exactness cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u32,
        cap: u32,
    },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("missing hop weight for {0} -> {1}")]
    MissingWeight(Site, Site),
    #[error("field parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Frog(#[from] FrogError),
}

/// Largest instances the exact searches accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactnessCaps {
    /// Largest `L` for [`max_path_weight`].
    pub path_radius: u32,
    /// Largest animal size `L + 1` for [`max_animal_weight`].
    pub animal_cells: u32,
    /// Largest `L` for [`weighted_path_max`].
    pub weighted_radius: u32,
}

impl Default for ExactnessCaps {
    fn default() -> Self {
        ExactnessCaps {
            path_radius: 8,
            animal_cells: 10,
            weighted_radius: 4,
        }
    }
}

impl ExactnessCaps {
    fn check(what: &'static str, value: u32, cap: u32) -> Result<(), PercError> {
        if value > cap {
            Err(PercError::CapExceeded { what, value, cap })
        } else {
            Ok(())
        }
    }

    pub fn check_path_radius(&self, l: u32) -> Result<(), PercError> {
        Self::check("path radius L", l, self.path_radius)
    }

    pub fn check_animal_cells(&self, cells: u32) -> Result<(), PercError> {
        Self::check("animal size L+1", cells, self.animal_cells)
    }

    pub fn check_weighted_radius(&self, l: u32) -> Result<(), PercError> {
        Self::check("weighted path radius L", l, self.weighted_radius)
    }
}
