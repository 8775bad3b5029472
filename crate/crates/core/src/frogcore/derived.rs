//! Quantities built from masked and shifted passage times on one field.

use super::{passage_time_adaptive, FrogError, FrogMask, HorizonPolicy, PassageSample};
use crate::walkfield::{LatticeBox, Site, WalkField};

/// `T^[z](source, destination)`: passage time without the frog at `z`.
///
/// `z` is excluded only as an intermediate chain vertex, so `z = source` and
/// `z = destination` leave `T` unchanged.
pub fn removed_passage_time(
    field: &WalkField,
    source: Site,
    destination: Site,
    z: Site,
    policy: &HorizonPolicy,
) -> Result<PassageSample, FrogError> {
    let mask = if z == source {
        FrogMask::empty()
    } else {
        FrogMask::single(z)
    };
    passage_time_adaptive(field, source, destination, &mask, policy)
}

/// `max_{|z - u|_1 = 1} T^[u](z, v) + 1`.
pub fn t1(field: &WalkField, u: Site, v: Site, policy: &HorizonPolicy) -> Result<u64, FrogError> {
    let mask = FrogMask::single(u);
    let mut worst = 0;
    for z in u.neighbors() {
        let t = passage_time_adaptive(field, z, v, &mask, policy)?.value;
        worst = worst.max(t);
    }
    Ok(worst + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct T2Value {
    pub value: u64,
    /// A removal attaining the supremum, `None` when no removal changes `T`.
    pub maximizer: Option<Site>,
}

/// `sup_z T^[z](u, v)`.
///
/// Removing a frog off the optimal chain leaves `T` unchanged, so only the
/// interior vertices of the engine's genealogy need to be tried.
pub fn t2(field: &WalkField, u: Site, v: Site, policy: &HorizonPolicy) -> Result<T2Value, FrogError> {
    let base = passage_time_adaptive(field, u, v, &FrogMask::empty(), policy)?;
    let mut best = T2Value {
        value: base.value,
        maximizer: None,
    };
    for &z in base.intermediates() {
        let t = removed_passage_time(field, u, v, z, policy)?.value;
        if t > best.value {
            best = T2Value {
                value: t,
                maximizer: Some(z),
            };
        }
    }
    Ok(best)
}

/// Largest `m` with `m^4 <= n`.
pub fn fourth_root_floor(n: u64) -> u32 {
    let mut m = (n as f64).powf(0.25) as u64;
    while m.pow(4) > n {
        m -= 1;
    }
    while (m + 1).pow(4) <= n {
        m += 1;
    }
    m as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialAverage {
    pub value: f64,
    pub sum: u64,
    pub m: u32,
    pub terms: usize,
}

/// `F_m = (1 / #B(m)) sum_{z in B(m)} T(z, z + x)` with `m = floor(|x|_1^{1/4})`,
/// all terms on the same field.
pub fn spatial_average(
    field: &WalkField,
    x: Site,
    policy: &HorizonPolicy,
) -> Result<SpatialAverage, FrogError> {
    x.ensure_dim(field.dim())?;
    if x.l1() < 1 {
        return Err(FrogError::InvalidArgument(
            "spatial average needs |x|_1 >= 1".into(),
        ));
    }
    let m = fourth_root_floor(x.l1() as u64);
    let ball = LatticeBox::ball(field.dim(), m);
    let mut sum = 0;
    for z in ball.iter() {
        sum += passage_time_adaptive(field, z, z + x, &FrogMask::empty(), policy)?.value;
    }
    let terms = ball.len();
    Ok(SpatialAverage {
        value: sum as f64 / terms as f64,
        sum,
        m,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubadditivityWitness {
    /// `T(0, x + y)`
    pub direct: u64,
    /// `T(0, x)`
    pub first_leg: u64,
    /// `T(x, x + y)`
    pub second_leg: u64,
    pub holds: bool,
}

/// Evaluates `T(0, x + y) <= T(0, x) + T(x, x + y)` on one field.
pub fn subadditivity_check(
    field: &WalkField,
    x: Site,
    y: Site,
    policy: &HorizonPolicy,
) -> Result<SubadditivityWitness, FrogError> {
    let o = Site::origin(field.dim());
    let empty = FrogMask::empty();
    let direct = passage_time_adaptive(field, o, x + y, &empty, policy)?.value;
    let first_leg = passage_time_adaptive(field, o, x, &empty, policy)?.value;
    let second_leg = passage_time_adaptive(field, x, x + y, &empty, policy)?.value;
    Ok(SubadditivityWitness {
        direct,
        first_leg,
        second_leg,
        holds: direct <= first_leg + second_leg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frogcore::t2_by_sweep;

    fn field(seed: u64) -> WalkField {
        WalkField::new(seed, 0, 2).unwrap()
    }

    #[test]
    fn fourth_roots() {
        assert_eq!(fourth_root_floor(16), 2);
        assert_eq!(fourth_root_floor(15), 1);
        assert_eq!(fourth_root_floor(1), 1);
        assert_eq!(fourth_root_floor(80), 2);
        assert_eq!(fourth_root_floor(81), 3);
        assert_eq!(fourth_root_floor(0), 0);
    }

    #[test]
    fn spatial_average_terms() {
        let f = field(2);
        let p = HorizonPolicy::default();
        let a = spatial_average(&f, Site::new(&[16, 0]), &p).unwrap();
        assert_eq!((a.m, a.terms), (2, 25));
        assert!(a.value >= 16.0);
        let b = spatial_average(&f, Site::new(&[8, 7]), &p).unwrap();
        assert_eq!((b.m, b.terms), (1, 9));
        assert!(spatial_average(&f, Site::origin(2), &p).is_err());
    }

    #[test]
    fn removal_off_chain_is_neutral() {
        let f = field(3);
        let p = HorizonPolicy::default();
        let o = Site::origin(2);
        let v = Site::new(&[4, 1]);
        let base = passage_time_adaptive(&f, o, v, &FrogMask::empty(), &p).unwrap();
        let far = Site::new(&[200, 200]);
        assert_eq!(removed_passage_time(&f, o, v, far, &p).unwrap().value, base.value);
        assert_eq!(removed_passage_time(&f, o, v, o, &p).unwrap().value, base.value);
        assert_eq!(removed_passage_time(&f, o, v, v, &p).unwrap().value, base.value);
    }

    #[test]
    fn t1_at_own_site() {
        let p = HorizonPolicy::default();
        for seed in 0..10 {
            let u = Site::new(&[1, 1]);
            assert!(t1(&field(seed), u, u, &p).unwrap() >= 2);
        }
    }

    #[test]
    fn t2_matches_sweep() {
        let p = HorizonPolicy::default();
        for seed in 0..6 {
            let f = field(seed);
            let u = Site::origin(2);
            let v = Site::new(&[3, 1]);
            let r = t2(&f, u, v, &p).unwrap();
            let base = passage_time_adaptive(&f, u, v, &FrogMask::empty(), &p).unwrap();
            assert!(r.value >= base.value);
            let s = t2_by_sweep(&f, u, v, base.value as u32 + 2, &p).unwrap();
            assert_eq!(r.value, s.value);
        }
    }

    #[test]
    fn subadditivity_degenerate_cases() {
        let f = field(9);
        let p = HorizonPolicy::default();
        let x = Site::new(&[3, -2]);
        let w = subadditivity_check(&f, x, Site::origin(2), &p).unwrap();
        assert!(w.holds);
        assert_eq!(w.second_leg, 0);
        assert_eq!(w.direct, w.first_leg);
        let w = subadditivity_check(&f, Site::origin(2), x, &p).unwrap();
        assert!(w.holds);
        assert_eq!(w.first_leg, 0);
    }
}
