//! Shifted-grid tessellation `B^M_{i,z} = 3M(w_i + 2z) + [0, 3M]^d`, with
//! `w_i` running over `{0,1}^d`, used to reduce `M`-dependent percolation to
//! independent group indicators.

use super::{max_path_weight, ExactnessCaps, PercError, SiteField};
use crate::walkfield::{LatticeBox, Site};

/// `w_i`: bit `k` of `group` is coordinate `k`.
pub fn group_offset(dim: usize, group: usize) -> Site {
    let coords: Vec<i32> = (0..dim).map(|k| ((group >> k) & 1) as i32).collect();
    Site::new(&coords)
}

pub fn group_count(dim: usize) -> usize {
    1 << dim
}

pub fn tess_box(m: u32, group: usize, z: Site) -> LatticeBox {
    let dim = z.dim();
    let w = group_offset(dim, group);
    let side = 3 * m as i32;
    let mut lo = z;
    let mut hi = z;
    for a in 0..dim {
        let l = side * (w.coord(a) + 2 * z.coord(a));
        lo = lo.with_coord(a, l);
        hi = hi.with_coord(a, l + side);
    }
    LatticeBox::from_corners(lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TessBox {
    pub group: usize,
    pub z: Site,
    pub bounds: LatticeBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tessellation {
    pub dim: usize,
    pub m: u32,
    /// `groups[i]` holds the boxes of group `i` meeting the region, ordered by `z`.
    pub groups: Vec<Vec<TessBox>>,
}

impl Tessellation {
    pub fn boxes_containing(&self, site: &Site) -> impl Iterator<Item = &TessBox> + '_ {
        let site = *site;
        self.groups
            .iter()
            .flatten()
            .filter(move |b| b.bounds.contains(&site))
    }

    pub fn box_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Range of `z` along one axis whose box meets `[lo, hi]`.
fn z_range(m: u32, w: i32, lo: i32, hi: i32) -> (i32, i32) {
    let side = 3 * m as i64;
    // side * (w + 2z) <= hi  and  side * (w + 2z) + side >= lo
    let zmax = floor_div(hi as i64 - side * w as i64, 2 * side);
    let zmin = ceil_div(lo as i64 - side - side * w as i64, 2 * side);
    (zmin as i32, zmax as i32)
}

/// Every box meeting `region`, grouped by `i`.
pub fn tessellate(m: u32, region: &LatticeBox) -> Result<Tessellation, PercError> {
    if m == 0 {
        return Err(PercError::InvalidArgument("tessellation needs M >= 1".into()));
    }
    let dim = region.dim();
    let mut groups = Vec::with_capacity(group_count(dim));
    for group in 0..group_count(dim) {
        let w = group_offset(dim, group);
        let mut zlo = Site::origin(dim);
        let mut zhi = Site::origin(dim);
        for a in 0..dim {
            let (a_lo, a_hi) = z_range(m, w.coord(a), region.lo().coord(a), region.hi().coord(a));
            zlo = zlo.with_coord(a, a_lo);
            zhi = zhi.with_coord(a, a_hi);
        }
        let boxes = LatticeBox::from_corners(zlo, zhi)
            .iter()
            .map(|z| TessBox {
                group,
                z,
                bounds: tess_box(m, group, z),
            })
            .collect();
        groups.push(boxes);
    }
    Ok(Tessellation { dim, m, groups })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TessellationReport {
    pub x_l: u32,
    /// `X^i_{L,M}` for each group.
    pub group_maxima: Vec<u32>,
    /// `ceil(L / 3M)`.
    pub projected_radius: u32,
    /// `(3M+1)^d * sum_i X^i_{L,M}`.
    pub bound: u64,
    pub holds: bool,
    /// Fraction of group indicators `Y^i_z` that are open.
    pub p_m_hat: f64,
    /// `(3M+1)^d q_M` when the field's density is known.
    pub p_m_bound: Option<f64>,
}

/// Group indicator field `Y^i_z = 1` iff some open site of `B(L)` lies in
/// `B^M_{i,z}`, over `z in B(ceil(L/3M))`.
pub fn group_indicator_field(field: &SiteField, radius: u32, m: u32, group: usize) -> SiteField {
    let projected = radius.div_ceil(3 * m);
    let ball = LatticeBox::ball(field.dim(), radius);
    SiteField::from_fn(field.dim(), projected, 0, field.seed(), |z| {
        let b = tess_box(m, group, z);
        if !b.intersects(&ball) {
            return false;
        }
        let open = b.iter().any(|x| ball.contains(&x) && field.get(&x));
        open
    })
}

/// Evaluates `X_L <= (3M+1)^d sum_i X^i_{L,M}` on one field.
pub fn tessellation_bound_check(
    field: &SiteField,
    radius: u32,
    m: u32,
    caps: &ExactnessCaps,
) -> Result<TessellationReport, PercError> {
    if m == 0 {
        return Err(PercError::InvalidArgument("tessellation needs M >= 1".into()));
    }
    let dim = field.dim();
    let x_l = max_path_weight(field, radius, caps)?.weight;
    let projected = radius.div_ceil(3 * m);
    let mut group_maxima = Vec::with_capacity(group_count(dim));
    let mut open_y = 0usize;
    let mut total_y = 0usize;
    for group in 0..group_count(dim) {
        let y = group_indicator_field(field, radius, m, group);
        open_y += y.count_open();
        total_y += y.region().len();
        group_maxima.push(max_path_weight(&y, projected, caps)?.weight);
    }
    let factor = (3 * m as u64 + 1).pow(dim as u32);
    let bound = factor * group_maxima.iter().map(|&x| x as u64).sum::<u64>();
    Ok(TessellationReport {
        x_l,
        group_maxima,
        projected_radius: projected,
        bound,
        holds: x_l as u64 <= bound,
        p_m_hat: open_y as f64 / total_y as f64,
        p_m_bound: field.density().map(|q| factor as f64 * q),
    })
}
