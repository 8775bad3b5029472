use rustc_hash::FxHashMap;

use super::keyed::{absorb, mix64, site_hash, stream_word};
use super::site::{LatticeBox, Site};

const WALK_TAG: u64 = 0x5752_4B46_5244_0001;

/// Identifies one simple-random-walk trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkKey {
    pub master_seed: u64,
    pub replica: u64,
    pub site: Site,
}

impl WalkKey {
    pub fn new(master_seed: u64, replica: u64, site: Site) -> Self {
        WalkKey {
            master_seed,
            replica,
            site,
        }
    }

    pub fn stream_id(&self) -> u64 {
        let h = absorb(absorb(mix64(WALK_TAG), self.master_seed), self.replica);
        site_hash(h, &self.site)
    }
}

/// One step of a trajectory: `position = S_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub index: u64,
    pub position: Site,
}

/// Sequential cursor over a keyed walk.
///
/// For `2d` a power of two the direction of step `j` is read from
/// `log2(2d)`-bit chunks of word `j / per_word`; for `d = 3` each step consumes
/// one word via multiply-shift.
#[derive(Debug, Clone)]
pub struct Walk {
    position: Site,
    index: u64,
    stream: u64,
    word: u64,
    chunks_left: u32,
    next_word: u64,
    bits: u32,
    per_word: u32,
    directions: u8,
}

impl Walk {
    pub fn new(key: &WalkKey) -> Self {
        let dim = key.site.dim();
        let directions = (2 * dim) as u8;
        let (bits, per_word) = if directions.is_power_of_two() {
            let bits = directions.trailing_zeros();
            (bits, 64 / bits)
        } else {
            (0, 1)
        };
        Walk {
            position: key.site,
            index: 0,
            stream: key.stream_id(),
            word: 0,
            chunks_left: 0,
            next_word: 0,
            bits,
            per_word,
            directions,
        }
    }

    #[inline]
    pub fn position(&self) -> Site {
        self.position
    }

    /// Number of steps taken so far.
    #[inline]
    pub fn time(&self) -> u64 {
        self.index
    }

    #[inline]
    fn next_direction(&mut self) -> u8 {
        if self.bits == 0 {
            let w = stream_word(self.stream, self.next_word);
            self.next_word += 1;
            return ((w as u128 * self.directions as u128) >> 64) as u8;
        }
        if self.chunks_left == 0 {
            self.word = stream_word(self.stream, self.next_word);
            self.next_word += 1;
            self.chunks_left = self.per_word;
        }
        let dir = (self.word & ((1u64 << self.bits) - 1)) as u8;
        self.word >>= self.bits;
        self.chunks_left -= 1;
        dir
    }

    /// Take one step and return the new position.
    #[inline]
    pub fn advance(&mut self) -> Site {
        let dir = self.next_direction();
        self.position = self.position.step(dir);
        self.index += 1;
        self.position
    }

    pub fn advance_to(&mut self, j: u64) -> Site {
        while self.index < j {
            self.advance();
        }
        self.position
    }
}

impl Iterator for Walk {
    type Item = Step;

    /// Yields `S_1, S_2, ...`; `S_0` is [`Walk::position`] before the first call.
    fn next(&mut self) -> Option<Step> {
        let position = self.advance();
        Some(Step {
            index: self.index,
            position,
        })
    }
}

/// `S^site_j` for the key's site.
pub fn walk_position(key: &WalkKey, j: u64) -> Site {
    Walk::new(key).advance_to(j)
}

/// Outcome of a bounded hitting-time query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hitting {
    Hit(u64),
    NotHit { horizon: u64 },
}

impl Hitting {
    pub fn time(self) -> Option<u64> {
        match self {
            Hitting::Hit(t) => Some(t),
            Hitting::NotHit { .. } => None,
        }
    }
}

/// `min{j <= horizon : S_j = target}`.
pub fn hitting_time(key: &WalkKey, target: Site, horizon: u64) -> Hitting {
    let mut walk = Walk::new(key);
    if walk.position() == target {
        return Hitting::Hit(0);
    }
    // A walk needs at least |x - y|_1 steps, with matching parity.
    if (key.site.l1_dist(&target) as u64) > horizon {
        return Hitting::NotHit { horizon };
    }
    for j in 1..=horizon {
        if walk.advance() == target {
            return Hitting::Hit(j);
        }
    }
    Hitting::NotHit { horizon }
}

/// First-visit times within `horizon` of every site the walk reaches inside
/// `region` (or everywhere when `region` is `None`).
pub fn first_visits(
    key: &WalkKey,
    horizon: u64,
    region: Option<&LatticeBox>,
) -> FxHashMap<Site, u64> {
    let mut walk = Walk::new(key);
    let mut seen = FxHashMap::default();
    seen.insert(key.site, 0);
    for j in 1..=horizon {
        let p = walk.advance();
        if region.is_none_or(|r| r.contains(&p)) {
            seen.entry(p).or_insert(j);
        }
    }
    seen
}
