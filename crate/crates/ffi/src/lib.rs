//! C ABI for froglab.
//!
//! Fields are opaque handles created by `*_new` functions and released with
//! the matching `*_free`. Sites are passed as `int32_t` arrays of length `d`.
//! Every fallible call returns a [`FrogStatus`] and writes results through
//! out-pointers only on success.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use froglab::frogcore::{
    passage_time_adaptive, spatial_average, t1, t2, FrogError, FrogMask, HorizonPolicy,
};
use froglab::percpath::{
    gen_independent_field, gen_m_dependent_field, max_animal_weight, max_path_weight,
    ExactnessCaps, PercError, SiteField,
};
use froglab::walkfield::{Hitting, Site, WalkField};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrogStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Destination not reached within the horizon.
    NotReached = 3,
    /// Exact search refused: instance above the exactness cap.
    CapExceeded = 4,
    /// Caller buffer too small; the required length was written.
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque walk field handle.
pub struct FrogWalkField {
    inner: WalkField,
}

/// Opaque percolation field handle.
pub struct FrogSiteField {
    inner: SiteField,
}

/// Summary of one passage-time computation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrogPassage {
    pub value: u64,
    pub hops: u32,
    pub max_jump: u32,
    pub frontier_radius: u32,
}

fn frog_status(e: &FrogError) -> FrogStatus {
    match e {
        FrogError::NotReached { .. } => FrogStatus::NotReached,
        _ => FrogStatus::InvalidArgument,
    }
}

fn perc_status(e: &PercError) -> FrogStatus {
    match e {
        PercError::CapExceeded { .. } => FrogStatus::CapExceeded,
        PercError::Frog(f) => frog_status(f),
        _ => FrogStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), FrogStatus>>(f: F) -> FrogStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FrogStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => FrogStatus::Panic,
    }
}

unsafe fn site_arg(ptr: *const i32, dim: usize) -> Result<Site, FrogStatus> {
    if ptr.is_null() {
        return Err(FrogStatus::NullPointer);
    }
    let coords = std::slice::from_raw_parts(ptr, dim);
    Site::try_new(coords).map_err(|_| FrogStatus::InvalidArgument)
}

unsafe fn walk_ref<'a>(field: *const FrogWalkField) -> Result<&'a WalkField, FrogStatus> {
    field.as_ref().map(|f| &f.inner).ok_or(FrogStatus::NullPointer)
}

unsafe fn site_field_ref<'a>(field: *const FrogSiteField) -> Result<&'a SiteField, FrogStatus> {
    field.as_ref().map(|f| &f.inner).ok_or(FrogStatus::NullPointer)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), FrogStatus> {
    if out.is_null() {
        return Err(FrogStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn policy(horizon_cap: u64) -> HorizonPolicy {
    if horizon_cap == 0 {
        HorizonPolicy::default()
    } else {
        HorizonPolicy::adaptive(horizon_cap)
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn froglab_status_message(status: FrogStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FrogStatus::Ok => c"ok",
        FrogStatus::NullPointer => c"null pointer argument",
        FrogStatus::InvalidArgument => c"invalid argument",
        FrogStatus::NotReached => c"not reached within the horizon",
        FrogStatus::CapExceeded => c"instance exceeds the exactness cap",
        FrogStatus::BufferTooSmall => c"output buffer too small",
        FrogStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

#[no_mangle]
pub extern "C" fn froglab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_walkfield_new(
    master_seed: u64,
    replica: u64,
    dim: u32,
    out: *mut *mut FrogWalkField,
) -> FrogStatus {
    guard(|| {
        let inner = WalkField::new(master_seed, replica, dim as usize)
            .map_err(|_| FrogStatus::InvalidArgument)?;
        put(out, Box::into_raw(Box::new(FrogWalkField { inner })))
    })
}

/// # Safety
/// `field` must come from [`froglab_walkfield_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn froglab_walkfield_free(field: *mut FrogWalkField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Position of the walk started at `site` after `j` steps, written to
/// `out` (`d` values).
///
/// # Safety
/// `site` and `out` must point to `d` values.
#[no_mangle]
pub unsafe extern "C" fn froglab_walk_position(
    field: *const FrogWalkField,
    site: *const i32,
    j: u64,
    out: *mut i32,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let s = site_arg(site, f.dim())?;
        if out.is_null() {
            return Err(FrogStatus::NullPointer);
        }
        let p = f.position(s, j);
        std::ptr::copy_nonoverlapping(p.coords().as_ptr(), out, f.dim());
        Ok(())
    })
}

/// `t(from, to)` if at most `horizon`, else `NotReached`.
///
/// # Safety
/// `from` and `to` must point to `d` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_hitting_time(
    field: *const FrogWalkField,
    from: *const i32,
    to: *const i32,
    horizon: u64,
    out: *mut u64,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let (a, b) = (site_arg(from, f.dim())?, site_arg(to, f.dim())?);
        match f.hitting_time(a, b, horizon) {
            Hitting::Hit(t) => put(out, t),
            Hitting::NotHit { .. } => Err(FrogStatus::NotReached),
        }
    })
}

/// `T(source, destination)` with the frogs at `mask` (`mask_len` sites,
/// `d` values each) removed. `horizon_cap = 0` selects the default cap.
///
/// # Safety
/// Site pointers must point to `d` values, `mask` to `mask_len * d`
/// values (or be null when `mask_len = 0`); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_passage_time(
    field: *const FrogWalkField,
    source: *const i32,
    destination: *const i32,
    mask: *const i32,
    mask_len: usize,
    horizon_cap: u64,
    out: *mut FrogPassage,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let d = f.dim();
        let (s, t) = (site_arg(source, d)?, site_arg(destination, d)?);
        let mut m = FrogMask::empty();
        for k in 0..mask_len {
            if mask.is_null() {
                return Err(FrogStatus::NullPointer);
            }
            m.insert(site_arg(mask.add(k * d), d)?);
        }
        let p = passage_time_adaptive(f, s, t, &m, &policy(horizon_cap)).map_err(|e| frog_status(&e))?;
        put(
            out,
            FrogPassage {
                value: p.value,
                hops: p.hops() as u32,
                max_jump: p.max_jump,
                frontier_radius: p.frontier_radius,
            },
        )
    })
}

/// Genealogy of `T(source, destination)` as `len * d` coordinates. When
/// `capacity` (in sites) is too small, only `len` is written and
/// `BufferTooSmall` returned.
///
/// # Safety
/// `buf` must hold `capacity * d` values; `len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_genealogy(
    field: *const FrogWalkField,
    source: *const i32,
    destination: *const i32,
    horizon_cap: u64,
    buf: *mut i32,
    capacity: usize,
    len: *mut usize,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let d = f.dim();
        let (s, t) = (site_arg(source, d)?, site_arg(destination, d)?);
        let p = passage_time_adaptive(f, s, t, &FrogMask::empty(), &policy(horizon_cap))
            .map_err(|e| frog_status(&e))?;
        put(len, p.genealogy.len())?;
        if p.genealogy.len() > capacity {
            return Err(FrogStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(FrogStatus::NullPointer);
        }
        for (k, site) in p.genealogy.iter().enumerate() {
            std::ptr::copy_nonoverlapping(site.coords().as_ptr(), buf.add(k * d), d);
        }
        Ok(())
    })
}

/// `T_1(u, v)`.
///
/// # Safety
/// `u` and `v` must point to `d` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_t1(
    field: *const FrogWalkField,
    u: *const i32,
    v: *const i32,
    horizon_cap: u64,
    out: *mut u64,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let (a, b) = (site_arg(u, f.dim())?, site_arg(v, f.dim())?);
        let t = t1(f, a, b, &policy(horizon_cap)).map_err(|e| frog_status(&e))?;
        put(out, t)
    })
}

/// `T_2(u, v)`.
///
/// # Safety
/// `u` and `v` must point to `d` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_t2(
    field: *const FrogWalkField,
    u: *const i32,
    v: *const i32,
    horizon_cap: u64,
    out: *mut u64,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let (a, b) = (site_arg(u, f.dim())?, site_arg(v, f.dim())?);
        let t = t2(f, a, b, &policy(horizon_cap)).map_err(|e| frog_status(&e))?;
        put(out, t.value)
    })
}

/// `F_m` for displacement `x`, with `m` and the term count.
///
/// # Safety
/// `x` must point to `d` values; out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_spatial_average(
    field: *const FrogWalkField,
    x: *const i32,
    horizon_cap: u64,
    value: *mut f64,
    m: *mut u32,
    terms: *mut usize,
) -> FrogStatus {
    guard(|| {
        let f = walk_ref(field)?;
        let x = site_arg(x, f.dim())?;
        if value.is_null() || m.is_null() || terms.is_null() {
            return Err(FrogStatus::NullPointer);
        }
        let r = spatial_average(f, x, &policy(horizon_cap)).map_err(|e| frog_status(&e))?;
        put(value, r.value)?;
        put(m, r.m)?;
        put(terms, r.terms)
    })
}

/// I.i.d. Bernoulli(`p`) field on `B(radius)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_sitefield_independent(
    seed: u64,
    dim: u32,
    radius: u32,
    p: f64,
    out: *mut *mut FrogSiteField,
) -> FrogStatus {
    guard(|| {
        if !(1..=froglab::walkfield::MAX_DIM as u32).contains(&dim) {
            return Err(FrogStatus::InvalidArgument);
        }
        let inner = gen_independent_field(seed, dim as usize, radius, p).map_err(|e| perc_status(&e))?;
        put(out, Box::into_raw(Box::new(FrogSiteField { inner })))
    })
}

/// `M`-dependent field on `B(radius)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_sitefield_m_dependent(
    seed: u64,
    dim: u32,
    radius: u32,
    m: u32,
    p: f64,
    out: *mut *mut FrogSiteField,
) -> FrogStatus {
    guard(|| {
        if !(1..=froglab::walkfield::MAX_DIM as u32).contains(&dim) {
            return Err(FrogStatus::InvalidArgument);
        }
        let inner = gen_m_dependent_field(seed, dim as usize, radius, m, p).map_err(|e| perc_status(&e))?;
        put(out, Box::into_raw(Box::new(FrogSiteField { inner })))
    })
}

/// # Safety
/// `field` must come from a `froglab_sitefield_*` constructor and not be
/// used again.
#[no_mangle]
pub unsafe extern "C" fn froglab_sitefield_free(field: *mut FrogSiteField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Indicator at `site`; 0 outside the field's box.
///
/// # Safety
/// `site` must point to `d` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_sitefield_get(
    field: *const FrogSiteField,
    site: *const i32,
    out: *mut u8,
) -> FrogStatus {
    guard(|| {
        let f = site_field_ref(field)?;
        let s = site_arg(site, f.dim())?;
        put(out, f.get(&s) as u8)
    })
}

/// `X_L` under the default exactness caps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_max_path_weight(
    field: *const FrogSiteField,
    radius: u32,
    out: *mut u32,
) -> FrogStatus {
    guard(|| {
        let f = site_field_ref(field)?;
        let r = max_path_weight(f, radius, &ExactnessCaps::default()).map_err(|e| perc_status(&e))?;
        put(out, r.weight)
    })
}

/// `N_L` under the default exactness caps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn froglab_max_animal_weight(
    field: *const FrogSiteField,
    size_bound: u32,
    out: *mut u32,
) -> FrogStatus {
    guard(|| {
        let f = site_field_ref(field)?;
        let r = max_animal_weight(f, size_bound, &ExactnessCaps::default()).map_err(|e| perc_status(&e))?;
        put(out, r.weight)
    })
}
