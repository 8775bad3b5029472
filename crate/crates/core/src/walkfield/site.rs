//! Integer lattice points and axis-aligned boxes of `Z^d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("dimension {0} outside supported range 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse site from {0:?}")]
    Parse(String),
}

/// A point of `Z^d`, `1 <= d <= 4`.
///
/// Unused trailing coordinates are kept at zero, so the derived ordering is
/// the lexicographic order on the first `d` coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    coords: [i32; MAX_DIM],
    dim: u8,
}

impl Site {
    pub fn try_new(coords: &[i32]) -> Result<Self, SiteError> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(SiteError::BadDimension(coords.len()));
        }
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Site {
            coords: c,
            dim: coords.len() as u8,
        })
    }

    /// Panics when `coords.len()` is not in `1..=4`.
    pub fn new(coords: &[i32]) -> Self {
        Self::try_new(coords).expect("invalid site dimension")
    }

    pub fn origin(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "invalid site dimension");
        Site {
            coords: [0; MAX_DIM],
            dim: dim as u8,
        }
    }

    /// `sign * e_axis`.
    pub fn unit(dim: usize, axis: usize, sign: i32) -> Self {
        let mut s = Self::origin(dim);
        s.coords[axis] = sign;
        s
    }

    /// `n * e_1`.
    pub fn along_first_axis(dim: usize, n: i32) -> Self {
        let mut s = Self::origin(dim);
        s.coords[0] = n;
        s
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> i32 {
        self.coords[axis]
    }

    pub fn with_coord(mut self, axis: usize, value: i32) -> Self {
        debug_assert!(axis < self.dim());
        self.coords[axis] = value;
        self
    }

    #[inline]
    pub fn l1(&self) -> u32 {
        self.coords.iter().map(|c| c.unsigned_abs()).sum()
    }

    #[inline]
    pub fn l1_dist(&self, other: &Site) -> u32 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    }

    #[inline]
    pub fn sup_dist(&self, other: &Site) -> u32 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(0)
    }

    /// Move one unit in direction `dir in 0..2d`: axis `dir / 2`, positive
    /// when `dir` is even.
    #[inline]
    pub fn step(mut self, dir: u8) -> Self {
        let axis = (dir >> 1) as usize;
        if dir & 1 == 0 {
            self.coords[axis] += 1;
        } else {
            self.coords[axis] -= 1;
        }
        self
    }

    /// The `2d` nearest neighbours in direction order.
    pub fn neighbors(self) -> impl Iterator<Item = Site> {
        (0..2 * self.dim).map(move |dir| self.step(dir))
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<(), SiteError> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(SiteError::DimensionMismatch {
                expected,
                got: self.dim(),
            })
        }
    }

    /// Parses `"x,y"` / `"x y"` / `"(x, y)"`.
    pub fn parse(text: &str) -> Result<Self, SiteError> {
        let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SiteError::Parse(text.to_string()))?;
        Site::try_new(&coords).map_err(|_| SiteError::Parse(text.to_string()))
    }
}

impl Add for Site {
    type Output = Site;
    fn add(mut self, rhs: Site) -> Site {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..MAX_DIM {
            self.coords[i] += rhs.coords[i];
        }
        self
    }
}

impl Sub for Site {
    type Output = Site;
    fn sub(mut self, rhs: Site) -> Site {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..MAX_DIM {
            self.coords[i] -= rhs.coords[i];
        }
        self
    }
}

impl Neg for Site {
    type Output = Site;
    fn neg(mut self) -> Site {
        for c in self.coords.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The closed box `center + [-radius, radius]^d`. `B(n)` is
/// `LatticeBox::centered(Site::origin(d), n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeBox {
    lo: Site,
    hi: Site,
}

impl LatticeBox {
    pub fn centered(center: Site, radius: u32) -> Self {
        let r = radius as i32;
        let mut lo = center;
        let mut hi = center;
        for axis in 0..center.dim() {
            lo.coords[axis] -= r;
            hi.coords[axis] += r;
        }
        LatticeBox { lo, hi }
    }

    /// `B(radius)` around the origin.
    pub fn ball(dim: usize, radius: u32) -> Self {
        Self::centered(Site::origin(dim), radius)
    }

    /// Box with explicit inclusive corners; `lo <= hi` coordinatewise.
    pub fn from_corners(lo: Site, hi: Site) -> Self {
        debug_assert!(lo.coords().iter().zip(hi.coords()).all(|(a, b)| a <= b));
        LatticeBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> Site {
        self.lo
    }

    pub fn hi(&self) -> Site {
        self.hi
    }

    fn side(&self, axis: usize) -> usize {
        (self.hi.coords[axis] - self.lo.coords[axis] + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|a| self.side(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn contains(&self, site: &Site) -> bool {
        (0..self.dim()).all(|a| {
            let c = site.coords[a];
            c >= self.lo.coords[a] && c <= self.hi.coords[a]
        })
    }

    /// Dense row-major index, lexicographic order; `None` outside the box.
    #[inline]
    pub fn index_of(&self, site: &Site) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.dim() {
            let c = site.coords[a];
            if c < self.lo.coords[a] || c > self.hi.coords[a] {
                return None;
            }
            idx = idx * self.side(a) + (c - self.lo.coords[a]) as usize;
        }
        Some(idx)
    }

    pub fn site_at(&self, mut index: usize) -> Site {
        let mut s = self.lo;
        for a in (0..self.dim()).rev() {
            let side = self.side(a);
            s.coords[a] = self.lo.coords[a] + (index % side) as i32;
            index /= side;
        }
        s
    }

    /// Sites in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.len()).map(move |i| self.site_at(i))
    }

    /// Smallest l1 distance between a point of `self` and a point of `other`.
    pub fn l1_gap(&self, other: &LatticeBox) -> u32 {
        (0..self.dim())
            .map(|a| {
                let below = other.lo.coords[a] - self.hi.coords[a];
                let above = self.lo.coords[a] - other.hi.coords[a];
                below.max(above).max(0) as u32
            })
            .sum()
    }

    pub fn intersects(&self, other: &LatticeBox) -> bool {
        (0..self.dim()).all(|a| {
            self.lo.coords[a] <= other.hi.coords[a] && other.lo.coords[a] <= self.hi.coords[a]
        })
    }
}

impl PartialOrd for LatticeBox {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeBox {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.lo, self.hi).cmp(&(other.lo, other.hi))
    }
}
