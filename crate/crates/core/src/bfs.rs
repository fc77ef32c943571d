//! Breadth-first exploration of the Cayley graph of `G_m`.
//!
//! Inside the ball of radius `R` every coordinate of `a^v t^k` is a triadic
//! rational with denominator dividing `3^R`, so elements are stored exactly
//! as `(k, v * 3^R)` in machine integers.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::formulas::{full_series_closed_form, CosetCensus};
use crate::group::{GroupElement, Token, TriadicRational, Word};
use crate::normal_form::spell;

/// Default memory budget when none is configured.
pub const DEFAULT_BUDGET_MB: u64 = 256;

/// Environment variable overriding the memory budget, in megabytes.
pub const BUDGET_ENV: &str = "HOROGROWTH_BUDGET_MB";

/// Radii beyond this overflow the fixed-point encoding.
const MAX_RADIUS: usize = 19;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BfsError {
    #[error("radius {radius} for m = {m} exceeds the budget ({reason})")]
    BudgetExceeded {
        m: usize,
        radius: usize,
        reason: String,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("word has {actual} letters but its coset is at distance {distance}; not a stem")]
    NotAStem { actual: usize, distance: usize },
    #[error("word is over {word} generators, expected {m}")]
    DimensionMismatch { word: usize, m: usize },
}

/// How large a ball may be explored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    /// The fixed radius table for `m <= 3`, a memory estimate beyond.
    Default,
    /// A memory cap in megabytes, applied to the estimated ball size.
    Megabytes(u64),
}

impl Budget {
    /// Reads the budget from the environment, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or(Budget::Default, Budget::Megabytes)
    }

    pub fn check(self, m: usize, radius: usize) -> Result<(), BfsError> {
        let exceeded = |reason: String| BfsError::BudgetExceeded { m, radius, reason };
        if m == 0 {
            return Err(BfsError::ZeroDimension);
        }
        if radius > MAX_RADIUS {
            return Err(exceeded(format!("radius above {MAX_RADIUS}")));
        }
        let fixed = match m {
            1 => Some(12),
            2 => Some(9),
            3 => Some(7),
            _ => None,
        };
        let mb = match (self, fixed) {
            (Budget::Default, Some(max)) => {
                return if radius <= max {
                    Ok(())
                } else {
                    Err(exceeded(format!("radius limit {max}")))
                };
            }
            (Budget::Default, None) => DEFAULT_BUDGET_MB,
            (Budget::Megabytes(mb), _) => mb,
        };
        let bytes = estimated_bytes(m, radius);
        if bytes > BigInt::from(mb) << 20 {
            return Err(exceeded(format!("estimated {} MB, limit {mb} MB", bytes >> 20)));
        }
        Ok(())
    }
}

/// Number of elements within distance `radius`.
pub fn ball_size(m: usize, radius: usize) -> BigInt {
    full_series_closed_form(m)
        .series_prefix(radius)
        .expect("growth series expands")
        .coeffs()
        .iter()
        .sum()
}

fn estimated_bytes(m: usize, radius: usize) -> BigInt {
    ball_size(m, radius) * (8 * m + 64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    tee: i32,
    scaled: Box<[i64]>,
}

/// Every element within distance `radius` of the identity, with its distance.
pub struct Ball {
    m: usize,
    radius: usize,
    pow3: Vec<i64>,
    dist: HashMap<Key, u8>,
}

impl Ball {
    pub fn explore(m: usize, radius: usize, budget: Budget) -> Result<Self, BfsError> {
        budget.check(m, radius)?;
        let pow3: Vec<i64> = (0..=2 * radius as u32).map(|k| 3i64.pow(k)).collect();
        let mut ball = Ball {
            m,
            radius,
            pow3,
            dist: HashMap::new(),
        };
        let origin = Key {
            tee: 0,
            scaled: vec![0; m].into(),
        };
        ball.dist.insert(origin.clone(), 0);
        let tokens = Token::all(m);
        let mut frontier = vec![origin];
        for d in 1..=radius {
            let mut next = Vec::new();
            for key in &frontier {
                for &tok in &tokens {
                    let k = ball.step(key, tok);
                    if !ball.dist.contains_key(&k) {
                        ball.dist.insert(k.clone(), d as u8);
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        Ok(ball)
    }

    // Right multiplication: a_i adds 3^tee to coordinate i, t raises tee.
    fn step(&self, key: &Key, tok: Token) -> Key {
        let mut k = key.clone();
        let place = || self.pow3[(self.radius as i32 + key.tee) as usize];
        match tok {
            Token::Gen(i) => k.scaled[i] += place(),
            Token::InvGen(i) => k.scaled[i] -= place(),
            Token::T => k.tee += 1,
            Token::TInv => k.tee -= 1,
        }
        k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    fn key_of(&self, g: &GroupElement) -> Option<Key> {
        if g.dim() != self.m || g.tee().unsigned_abs() as usize > self.radius {
            return None;
        }
        let scaled = g
            .coords()
            .iter()
            .map(|c| {
                let shift = (self.radius as u32).checked_sub(c.denom_exp())?;
                (c.numerator() * BigInt::from(3).pow(shift)).to_i64()
            })
            .collect::<Option<Box<[i64]>>>()?;
        Some(Key {
            tee: g.tee() as i32,
            scaled,
        })
    }

    fn element_of(&self, key: &Key) -> GroupElement {
        let coords = key
            .scaled
            .iter()
            .map(|&x| TriadicRational::new(BigInt::from(x), self.radius as u32))
            .collect();
        GroupElement::new(coords, key.tee as i64)
    }

    fn lattice_of(&self, key: &Key) -> Option<Vec<i64>> {
        let unit = self.pow3[self.radius];
        (key.tee == 0 && key.scaled.iter().all(|x| x % unit == 0))
            .then(|| key.scaled.iter().map(|x| x / unit).collect())
    }

    /// Distance of `g` from the identity, if it lies in the ball.
    pub fn distance(&self, g: &GroupElement) -> Option<usize> {
        self.key_of(g)
            .and_then(|k| self.dist.get(&k))
            .map(|&d| d as usize)
    }

    /// Every element with its distance, in no particular order.
    pub fn elements(&self) -> impl Iterator<Item = (GroupElement, usize)> + '_ {
        self.dist.iter().map(|(k, &d)| (self.element_of(k), d as usize))
    }

    /// Every horocyclic element `a^v` of the ball with its distance.
    pub fn horocyclic(&self) -> impl Iterator<Item = (Vec<i64>, usize)> + '_ {
        self.dist
            .iter()
            .filter_map(|(k, &d)| self.lattice_of(k).map(|v| (v, d as usize)))
    }

    pub fn spheres(&self) -> SphereCounts {
        let r = self.radius;
        let mut total = vec![0u64; r + 1];
        let mut horocyclic = vec![0u64; r + 1];
        let mut by_level: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
        for (k, &d) in &self.dist {
            let d = d as usize;
            total[d] += 1;
            if self.lattice_of(k).is_some() {
                horocyclic[d] += 1;
            }
            by_level
                .entry(k.tee.min(0) as i64)
                .or_insert_with(|| vec![0; r + 1])[d] += 1;
        }
        SphereCounts {
            m: self.m,
            radius: r,
            total,
            horocyclic,
            by_level,
        }
    }

    // Cosets of Z^m: tee and the coordinates modulo 3^tee, i.e. the scaled
    // coordinates modulo 3^(R + tee).
    fn coset_of(&self, key: &Key) -> Key {
        let modulus = self.pow3[(self.radius as i32 + key.tee) as usize];
        Key {
            tee: key.tee,
            scaled: key.scaled.iter().map(|x| x.rem_euclid(modulus)).collect(),
        }
    }

    fn coset_distances(&self) -> HashMap<Key, u8> {
        let mut best: HashMap<Key, u8> = HashMap::new();
        for (k, &d) in &self.dist {
            let c = self.coset_of(k);
            let e = best.entry(c).or_insert(d);
            *e = (*e).min(d);
        }
        best
    }

    /// Cosets of the horocyclic subgroup by level and distance.
    pub fn coset_census(&self) -> CosetCensus {
        let r = self.radius;
        let mut chi = vec![vec![BigInt::zero(); r + 1]; r + 1];
        for (c, d) in self.coset_distances() {
            let depth = (-c.tee.min(0)) as usize;
            chi[depth][d as usize] += 1;
        }
        CosetCensus::from_rows(self.m, r, chi)
    }

    /// `b(w, r)`: elements of `w Z^m` at distance `|w| + r`, for all `r`
    /// the ball can see.
    pub fn relative_growth(&self, stem: &Word) -> Result<Vec<u64>, BfsError> {
        if stem.dim() != self.m {
            return Err(BfsError::DimensionMismatch {
                word: stem.dim(),
                m: self.m,
            });
        }
        let len = stem.len();
        let mut key = Key {
            tee: 0,
            scaled: vec![0; self.m].into(),
        };
        for &tok in stem.tokens() {
            key = self.step(&key, tok);
        }
        let coset = self.coset_of(&key);
        let distance = self
            .dist
            .iter()
            .filter(|(k, _)| self.coset_of(k) == coset)
            .map(|(_, &d)| d as usize)
            .min()
            .unwrap_or(usize::MAX);
        if distance != len {
            return Err(BfsError::NotAStem {
                actual: len,
                distance,
            });
        }
        let mut counts = vec![0u64; self.radius - len + 1];
        for (k, &d) in &self.dist {
            if self.coset_of(k) == coset {
                counts[d as usize - len] += 1;
            }
        }
        Ok(counts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereCounts {
    pub m: usize,
    pub radius: usize,
    pub total: Vec<u64>,
    pub horocyclic: Vec<u64>,
    pub by_level: BTreeMap<i64, Vec<u64>>,
}

pub fn bfs_spheres(m: usize, radius: usize) -> Result<SphereCounts, BfsError> {
    Ok(Ball::explore(m, radius, Budget::from_env())?.spheres())
}

pub fn bfs_subgroup_spheres(m: usize, radius: usize) -> Result<Vec<u64>, BfsError> {
    Ok(bfs_spheres(m, radius)?.horocyclic)
}

/// Distance from the identity to `a^v`.
///
/// The normal form spells `a^v` in `L` letters, so only the ball of radius
/// `L - 1` needs searching: if `a^v` is not there, its distance is `L`.
pub fn element_distance(v: &[BigInt]) -> Result<usize, BfsError> {
    let target = GroupElement::lattice(v);
    let word = spell(v);
    assert_eq!(word.eval(), target, "normal form spells a^v");
    let Some(radius) = word.len().checked_sub(1) else {
        return Ok(0);
    };
    let ball = Ball::explore(v.len(), radius, Budget::from_env())?;
    Ok(ball.distance(&target).unwrap_or(word.len()))
}

pub fn coset_distance_census(m: usize, radius: usize) -> Result<CosetCensus, BfsError> {
    Ok(Ball::explore(m, radius, Budget::from_env())?.coset_census())
}

/// `b(stem, 0..=radius)`.
pub fn relative_growth(m: usize, stem: &Word, radius: usize) -> Result<Vec<u64>, BfsError> {
    let ball = Ball::explore(m, stem.len() + radius, Budget::from_env())?;
    ball.relative_growth(stem)
}

/// The sphere and census report as JSON.
#[derive(Serialize)]
pub struct BfsReport {
    pub m: usize,
    pub radius: usize,
    pub total: Vec<u64>,
    pub horocyclic: Vec<u64>,
    /// `chi(level, 0..=radius)` for levels `0, -1, ..., -radius`.
    #[serde(serialize_with = "levels_as_map")]
    pub chi: Vec<Vec<u64>>,
}

fn levels_as_map<S: serde::Serializer>(chi: &[Vec<u64>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(chi.len()))?;
    for (depth, col) in chi.iter().enumerate() {
        map.serialize_entry(&(-(depth as i64)).to_string(), col)?;
    }
    map.end()
}

impl BfsReport {
    pub fn from_ball(ball: &Ball) -> Self {
        let s = ball.spheres();
        let census = ball.coset_census();
        let chi = (0..=ball.radius as i64)
            .map(|depth| {
                let col = census.column(-depth);
                col.coeffs().iter().map(|c| c.to_u64().unwrap()).collect()
            })
            .collect();
        BfsReport {
            m: s.m,
            radius: s.radius,
            total: s.total,
            horocyclic: s.horocyclic,
            chi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{coset_census, full_series, relative_growth_series, subgroup_series};
    use crate::normal_form::word_length_i64;
    use std::collections::HashSet;

    fn ball(m: usize, r: usize) -> Ball {
        Ball::explore(m, r, Budget::Default).unwrap()
    }

    #[test]
    fn small_spheres() {
        assert_eq!(ball(1, 2).spheres().total, [1, 4, 12]);
        assert_eq!(ball(2, 2).spheres().total, [1, 6, 26]);
        for m in 1..=4 {
            assert_eq!(ball(m, 1).spheres().total, [1, 2 * m as u64 + 2]);
        }
    }

    // Independent of the fixed-point encoding: explore with the exact group law.
    #[test]
    fn fixed_point_matches_exact_law() {
        for (m, r) in [(1, 7), (2, 5)] {
            let mut seen: HashMap<GroupElement, usize> = HashMap::new();
            seen.insert(GroupElement::identity(m), 0);
            let mut frontier = vec![GroupElement::identity(m)];
            for d in 1..=r {
                let mut next = Vec::new();
                for g in &frontier {
                    for tok in Token::all(m) {
                        let h = g.step(tok);
                        if !seen.contains_key(&h) {
                            seen.insert(h.clone(), d);
                            next.push(h);
                        }
                    }
                }
                frontier = next;
            }
            let b = ball(m, r);
            assert_eq!(b.len(), seen.len());
            for (g, d) in &seen {
                assert_eq!(b.distance(g), Some(*d), "{g}");
            }
        }
    }

    #[test]
    fn subgroup_spheres() {
        assert_eq!(
            bfs_subgroup_spheres(1, 10).unwrap(),
            [1, 2, 2, 2, 4, 6, 8, 14, 20, 30, 48]
        );
        assert_eq!(
            bfs_subgroup_spheres(2, 8).unwrap(),
            [1, 4, 8, 12, 24, 52, 100, 196, 404]
        );
    }

    #[test]
    fn sphere_invariants() {
        let s = ball(2, 6).spheres();
        assert_eq!(s.total[0], 1);
        for n in 0..=6 {
            assert!(s.horocyclic[n] <= s.total[n]);
            let by_level: u64 = s.by_level.values().map(|v| v[n]).sum();
            assert_eq!(by_level, s.total[n]);
        }
    }

    #[test]
    fn spheres_match_growth_series() {
        for (m, r) in [(1, 10), (2, 7)] {
            let s = ball(m, r).spheres();
            let full = full_series(m).unwrap().series_prefix(r).unwrap();
            let sub = subgroup_series(m).series_prefix(r).unwrap();
            let as_u64 = |p: &crate::series::SeriesPrefix| -> Vec<u64> {
                p.coeffs().iter().map(|c| c.to_u64().unwrap()).collect()
            };
            assert_eq!(s.total, as_u64(&full), "m = {m}");
            assert_eq!(s.horocyclic, as_u64(&sub), "m = {m}");
        }
    }

    #[test]
    fn distances_match_word_length() {
        let b = ball(2, 8);
        let mut found = HashSet::new();
        for (v, d) in b.horocyclic() {
            assert_eq!(word_length_i64(&v), d, "{v:?}");
            found.insert(v);
        }
        for x in -60i64..=60 {
            for y in -60i64..=60 {
                if word_length_i64(&[x, y]) <= 8 {
                    assert!(found.contains(&vec![x, y]), "({x}, {y})");
                }
            }
        }
    }

    #[test]
    fn element_distance_examples() {
        let big = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        assert_eq!(element_distance(&big(&[6])).unwrap(), 4);
        assert_eq!(element_distance(&big(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(element_distance(&big(&[10, 16])).unwrap(), 10);
    }

    #[test]
    fn census_matches_stem_count() {
        let b1 = ball(1, 8).coset_census();
        let ints = |c: &CosetCensus, level: i64| c.column(level).to_i64s();
        assert_eq!(&ints(&b1, 0)[..4], [1, 1, 3, 7]);
        assert_eq!(&ints(&b1, -1)[1..5], [1, 0, 0, 2]);
        for (m, r) in [(1, 8), (2, 8)] {
            let bfs = ball(m, r).coset_census();
            assert_eq!(bfs, coset_census(m, r).unwrap(), "m = {m}");
            assert_eq!(bfs.get(-1, 1), BigInt::from(1));
        }
    }

    #[test]
    fn relative_growth_of_stems() {
        let b = ball(1, 8);
        let w = |s: &str| Word::parse(1, s).unwrap();
        let series = |n: usize| -> Vec<u64> {
            relative_growth_series(1, n)
                .series_prefix(6)
                .unwrap()
                .coeffs()
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect()
        };
        assert_eq!(b.relative_growth(&w("")).unwrap()[..7], series(0));
        assert_eq!(b.relative_growth(&w("t")).unwrap()[..7], series(0));
        assert_eq!(b.relative_growth(&w("T")).unwrap()[..7], series(1));
        assert_eq!(b.relative_growth(&w("T")).unwrap()[..6], [1, 4, 6, 6, 8, 14]);
        assert_eq!(b.relative_growth(&w("TT")).unwrap()[..7], series(2));
        assert!(matches!(
            b.relative_growth(&w("tT")),
            Err(BfsError::NotAStem { actual: 2, distance: 0 })
        ));
    }

    #[test]
    fn budget_policy() {
        assert!(Budget::Default.check(1, 12).is_ok());
        assert!(Budget::Default.check(1, 13).is_err());
        assert!(Budget::Default.check(2, 9).is_ok());
        assert!(Budget::Default.check(2, 10).is_err());
        assert!(Budget::Default.check(3, 7).is_ok());
        assert!(Budget::Default.check(3, 8).is_err());
        assert!(Budget::Default.check(4, 4).is_ok());
        assert!(Budget::Default.check(4, 12).is_err());
        assert!(Budget::Megabytes(1).check(2, 9).is_err());
        assert!(Budget::Megabytes(4096).check(1, 14).is_ok());
        assert!(Budget::Megabytes(1 << 40).check(1, 20).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = BfsReport::from_ball(&ball(1, 2));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"m":1,"radius":2,"total":[1,4,12],"horocyclic":[1,2,2],"chi":{"0":[1,1,3],"-1":[0,1,0],"-2":[0,0,1]}}"#
        );
    }
}
