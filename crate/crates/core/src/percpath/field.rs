use std::fmt::Write as _;

use super::PercError;
use crate::frogcore::{activation_table, FrogMask};
use crate::walkfield::keyed::{derive_seed, site_uniform};
use crate::walkfield::{LatticeBox, Site, WalkField};

const INDEPENDENT_TAG: u64 = 0x5045_5243_0000_0001;

/// Bernoulli site indicators `{I_x}` over `B(radius)`; sites outside the box
/// read as closed.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteField {
    dim: usize,
    radius: u32,
    dependence: u32,
    seed: u64,
    density: Option<f64>,
    region: LatticeBox,
    bits: Vec<bool>,
}

impl SiteField {
    /// All-closed field.
    pub fn closed(dim: usize, radius: u32, dependence: u32, seed: u64) -> Self {
        let region = LatticeBox::ball(dim, radius);
        SiteField {
            dim,
            radius,
            dependence,
            seed,
            density: Some(0.0),
            bits: vec![false; region.len()],
            region,
        }
    }

    pub fn from_fn<F: FnMut(Site) -> bool>(
        dim: usize,
        radius: u32,
        dependence: u32,
        seed: u64,
        mut open: F,
    ) -> Self {
        let mut f = Self::closed(dim, radius, dependence, seed);
        f.density = None;
        for (i, s) in f.region.iter().enumerate() {
            f.bits[i] = open(s);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Declared dependence range `M` (0 for independent fields).
    pub fn dependence(&self) -> u32 {
        self.dependence
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `p` for independent fields, `q_M` for dependent ones, when known.
    pub fn density(&self) -> Option<f64> {
        self.density
    }

    pub fn with_density(mut self, density: Option<f64>) -> Self {
        self.density = density;
        self
    }

    pub fn region(&self) -> &LatticeBox {
        &self.region
    }

    #[inline]
    pub fn get(&self, site: &Site) -> bool {
        self.region.index_of(site).is_some_and(|i| self.bits[i])
    }

    pub fn set(&mut self, site: &Site, open: bool) {
        let i = self
            .region
            .index_of(site)
            .expect("site outside field region");
        self.bits[i] = open;
    }

    pub fn count_open(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Open sites of `B(radius)` in lexicographic order.
    pub fn open_sites_within(&self, radius: u32) -> Vec<Site> {
        LatticeBox::ball(self.dim, radius)
            .iter()
            .filter(|s| self.get(s))
            .collect()
    }

    /// `d L M seed`, then one `x1 ... xd bit` line per site in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.bits.len() * (4 * self.dim + 2) + 32);
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.dim, self.radius, self.dependence, self.seed
        );
        for (s, bit) in self.region.iter().zip(&self.bits) {
            for c in s.coords() {
                let _ = write!(out, "{c} ");
            }
            out.push(if *bit { '1' } else { '0' });
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, PercError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| PercError::Parse("empty field file".into()))?;
        let h: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| PercError::Parse(format!("bad header {header:?}")))?;
        if h.len() != 4 || !(1..=crate::walkfield::MAX_DIM as u64).contains(&h[0]) {
            return Err(PercError::Parse(format!("bad header {header:?}")));
        }
        let (dim, radius) = (h[0] as usize, h[1] as u32);
        let mut field = Self::closed(dim, radius, h[2] as u32, h[3]);
        field.density = None;
        let region = field.region;
        let mut expected = region.iter();
        for (lineno, line) in lines.enumerate() {
            let toks: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| PercError::Parse(format!("line {}: {line:?}", lineno + 2)))?;
            let want = expected
                .next()
                .ok_or_else(|| PercError::Parse(format!("line {}: extra site", lineno + 2)))?;
            if toks.len() != dim + 1
                || toks[..dim]
                    .iter()
                    .zip(want.coords())
                    .any(|(a, b)| *a != *b as i64)
                || !(0..=1).contains(&toks[dim])
            {
                return Err(PercError::Parse(format!(
                    "line {}: expected site {want} with a 0/1 bit",
                    lineno + 2
                )));
            }
            field.set(&want, toks[dim] == 1);
        }
        if expected.next().is_some() {
            return Err(PercError::Parse("truncated field file".into()));
        }
        Ok(field)
    }
}

fn check_probability(p: f64) -> Result<(), PercError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(PercError::InvalidProbability(p))
    }
}

/// I.i.d. Bernoulli(`p`) indicators on `B(radius)`.
pub fn gen_independent_field(
    seed: u64,
    dim: usize,
    radius: u32,
    p: f64,
) -> Result<SiteField, PercError> {
    check_probability(p)?;
    let stream = derive_seed(INDEPENDENT_TAG, seed, 0);
    let f = SiteField::from_fn(dim, radius, 0, seed, |s| site_uniform(stream, &s) < p);
    Ok(f.with_density(Some(p)))
}

/// Number of sites in an l1 ball of radius `r` in `Z^d`.
pub fn l1_ball_size(dim: usize, r: u32) -> u64 {
    // Standard recursion over the last coordinate.
    fn count(dim: usize, r: i64) -> u64 {
        if r < 0 {
            return 0;
        }
        if dim == 0 {
            return 1;
        }
        (-r..=r).map(|c| count(dim - 1, r - c.abs())).sum()
    }
    count(dim, r as i64)
}

/// `M`-dependent field: `I_x = max_{|w - x|_1 <= floor(M/2)} J_w` for an
/// i.i.d. Bernoulli(`p`) field `J`. Windows of sites more than `M` apart are
/// disjoint, so those indicators are independent; `q_M = 1 - (1-p)^{|window|}`.
pub fn gen_m_dependent_field(
    seed: u64,
    dim: usize,
    radius: u32,
    m: u32,
    p: f64,
) -> Result<SiteField, PercError> {
    check_probability(p)?;
    if m == 0 {
        return gen_independent_field(seed, dim, radius, p);
    }
    let window = m / 2;
    let base = gen_independent_field(seed, dim, radius + window, p)?;
    let offsets: Vec<Site> = LatticeBox::ball(dim, window)
        .iter()
        .filter(|s| s.l1() <= window)
        .collect();
    let f = SiteField::from_fn(dim, radius, m, seed, |x| {
        offsets.iter().any(|o| base.get(&(x + *o)))
    });
    let q = 1.0 - (1.0 - p).powi(offsets.len() as i32);
    Ok(f.with_density(Some(q)))
}

/// `I_y = 1` iff some `z` with `|z - y|_1 <= M` has `T(y, z) = t(y, z) = M`
/// on the walk field. `I_y` only reads walks started within l1 distance `M`
/// of `y`.
pub fn gen_frog_indicator_field(
    walks: &WalkField,
    radius: u32,
    m: u32,
) -> Result<SiteField, PercError> {
    if m == 0 {
        return Err(PercError::InvalidArgument(
            "frog indicator field needs M >= 1".into(),
        ));
    }
    let dim = walks.dim();
    let empty = FrogMask::empty();
    let mut result = Ok(());
    let f = SiteField::from_fn(dim, radius, m, walks.master_seed(), |y| {
        if result.is_err() {
            return false;
        }
        match frog_indicator(walks, y, m, &empty) {
            Ok(b) => b,
            Err(e) => {
                result = Err(e);
                false
            }
        }
    });
    result?;
    Ok(f)
}

/// Single indicator `I_y` of [`gen_frog_indicator_field`].
pub fn frog_indicator(
    walks: &WalkField,
    y: Site,
    m: u32,
    mask: &FrogMask,
) -> Result<bool, PercError> {
    let horizon = m as u64;
    // Everything activated strictly before time M.
    let table = activation_table(walks, y, mask, horizon - 1)?;
    let visits = walks.first_visits(y, horizon, None);
    Ok(visits
        .iter()
        .any(|(z, &t)| t == horizon && !table.records.contains_key(z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_densities() {
        let f = gen_independent_field(1, 2, 5, 0.0).unwrap();
        assert_eq!(f.count_open(), 0);
        let f = gen_independent_field(1, 2, 5, 1.0).unwrap();
        assert_eq!(f.count_open(), 121);
        assert!(gen_independent_field(1, 2, 5, 1.5).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = gen_m_dependent_field(3, 2, 4, 2, 0.2).unwrap();
        let text = f.to_text();
        assert!(text.starts_with("2 4 2 3\n"));
        let g = SiteField::from_text(&text).unwrap();
        assert_eq!(g.to_text(), text);
        assert_eq!(g.bits, f.bits);
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(SiteField::from_text("").is_err());
        assert!(SiteField::from_text("2 0 0 1\n0 1 1\n").is_err());
        assert!(SiteField::from_text("2 0 0 1\n0 0 2\n").is_err());
        assert!(SiteField::from_text("2 1 0 1\n-1 -1 1\n").is_err());
        assert!(SiteField::from_text("2 0 0 1\n0 0 1\n").is_ok());
    }

    #[test]
    fn l1_balls() {
        assert_eq!(l1_ball_size(2, 0), 1);
        assert_eq!(l1_ball_size(2, 1), 5);
        assert_eq!(l1_ball_size(2, 2), 13);
        assert_eq!(l1_ball_size(3, 1), 7);
        assert_eq!(l1_ball_size(1, 3), 7);
    }

    #[test]
    fn m_dependent_density_descriptor() {
        let f = gen_m_dependent_field(1, 2, 3, 2, 0.1).unwrap();
        let q = f.density().unwrap();
        assert!((q - (1.0 - 0.9f64.powi(5))).abs() < 1e-12);
    }

    #[test]
    fn frog_indicator_is_always_open_for_m_one() {
        let w = WalkField::new(5, 0, 2).unwrap();
        let f = gen_frog_indicator_field(&w, 4, 1).unwrap();
        assert_eq!(f.count_open(), 81);
        assert!(gen_frog_indicator_field(&w, 4, 0).is_err());
    }
}
