//! Jordan profiles of nilpotent matrices and their combinatorics: size, the
//! p-th power map, p-adjacency moves and preimage enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on the size of profiles handed to enumeration routines.
pub const DEFAULT_SIZE_CAP: usize = 24;

/// Finite-support multiplicity sequence `(m_k)_{k>=1}`: `m_k` Jordan cells of
/// size `k`. Zero counts are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Debug)]
pub struct Profile(BTreeMap<usize, usize>);

impl Profile {
    pub fn new() -> Self {
        Profile(BTreeMap::new())
    }

    /// Builds a profile from `(size, count)` pairs. Size-0 cells and zero
    /// counts are dropped; repeated sizes accumulate.
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        let mut m = Profile::new();
        for (k, c) in pairs {
            m.add_cells(k, c);
        }
        m
    }

    /// Profile of the direct sum of cells with the given sizes.
    pub fn from_cells(cells: &[usize]) -> Self {
        Profile::from_counts(cells.iter().map(|&k| (k, 1)))
    }

    /// The profile `e_k` of a single cell (`e_0` is empty).
    pub fn unit(k: usize) -> Self {
        Profile::from_counts([(k, 1)])
    }

    pub fn get(&self, k: usize) -> usize {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending `(size, count)` pairs with positive counts.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    /// `S(m) = sum k * m_k`.
    pub fn size(&self) -> usize {
        self.iter().map(|(k, c)| k * c).sum()
    }

    /// Total number of cells.
    pub fn cell_count(&self) -> usize {
        self.0.values().sum()
    }

    /// Largest cell size, 0 for the empty profile.
    pub fn max_cell(&self) -> usize {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Cell sizes in decreasing order, repeated by multiplicity.
    pub fn cells(&self) -> Vec<usize> {
        self.iter().rev().flat_map(|(k, c)| std::iter::repeat(k).take(c)).collect()
    }

    pub fn add_cells(&mut self, k: usize, c: usize) {
        if k > 0 && c > 0 {
            *self.0.entry(k).or_insert(0) += c;
        }
    }

    /// Removes `c` cells of size `k`; `false` (and no change) when fewer exist.
    /// Size-0 cells are always removable.
    pub fn remove_cells(&mut self, k: usize, c: usize) -> bool {
        if k == 0 || c == 0 {
            return true;
        }
        match self.0.get_mut(&k) {
            Some(have) if *have >= c => {
                *have -= c;
                if *have == 0 {
                    self.0.remove(&k);
                }
                true
            }
            _ => false,
        }
    }

    pub fn plus(&self, other: &Profile) -> Profile {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_cells(k, c);
        }
        out
    }

    /// `self - other` when every count stays non-negative.
    pub fn checked_minus(&self, other: &Profile) -> Option<Profile> {
        let mut out = self.clone();
        other.iter().all(|(k, c)| out.remove_cells(k, c)).then_some(out)
    }

    /// Componentwise `self <= other`.
    pub fn is_subprofile_of(&self, other: &Profile) -> bool {
        self.iter().all(|(k, c)| other.get(k) >= c)
    }
}

impl fmt::Display for Profile {
    /// Canonical text form: `k:m_k` pairs by descending `k`, comma separated.
    /// The empty profile prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().rev().map(|(k, c)| format!("{k}:{c}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut m = Profile::new();
        if s.is_empty() || s == "{}" {
            return Ok(m);
        }
        for pair in s.split(',') {
            let bad = || Error::Parse(format!("malformed profile entry `{pair}` (expected k:count)"));
            let (k, c) = pair.split_once(':').ok_or_else(bad)?;
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            if k == 0 && c > 0 {
                return Err(Error::Parse("cell sizes must be positive".into()));
            }
            m.add_cells(k, c);
        }
        Ok(m)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, c) in self.iter().rev() {
            map.serialize_entry(&k.to_string(), &c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, usize>::deserialize(deserializer)?;
        let mut m = Profile::new();
        for (k, c) in raw {
            let k: usize = k.parse().map_err(serde::de::Error::custom)?;
            if k == 0 && c > 0 {
                return Err(serde::de::Error::custom("cell sizes must be positive"));
            }
            m.add_cells(k, c);
        }
        Ok(m)
    }
}

/// Signed difference of two profiles, an element of the free abelian group on
/// cell sizes.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ProfileDelta(BTreeMap<usize, i64>);

impl ProfileDelta {
    pub fn between(m: &Profile, other: &Profile) -> Self {
        let mut d = ProfileDelta::default();
        for (k, c) in m.iter() {
            d.add(k, c as i64);
        }
        for (k, c) in other.iter() {
            d.add(k, -(c as i64));
        }
        d
    }

    /// `e_k + e_l - e_{k+1} - e_{l-1}` with `e_0 = 0`.
    fn move_vector(k: usize, l: usize) -> Self {
        let mut d = ProfileDelta::default();
        d.add(k, 1);
        d.add(l, 1);
        d.add(k + 1, -1);
        d.add(l - 1, -1);
        d
    }

    fn add(&mut self, k: usize, v: i64) {
        if k == 0 || v == 0 {
            return;
        }
        let e = self.0.entry(k).or_insert(0);
        *e += v;
        if *e == 0 {
            self.0.remove(&k);
        }
    }

    fn negated(&self) -> Self {
        ProfileDelta(self.0.iter().map(|(&k, &v)| (k, -v)).collect())
    }

    pub fn get(&self, k: usize) -> i64 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `m -> m - e_k - e_l + e_{k+1} + e_{l-1}`: cells `k` and `l` become `k+1`, `l-1`.
    Forward,
    /// The inverse move: cells `k+1` and `l-1` become `k` and `l`.
    Backward,
}

/// A p-adjacency step, valid for the ambient `p` when
/// `p*a <= k < l <= p*(a+1)` and `l > k + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AdjacencyMove {
    pub a: usize,
    pub k: usize,
    pub l: usize,
    pub direction: Direction,
}

impl AdjacencyMove {
    pub fn check_window(&self, p: usize) -> Result<()> {
        let ok = p * self.a <= self.k && self.k < self.l && self.l <= p * (self.a + 1) && self.l > self.k + 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMove(format!(
                "(a,k,l)=({},{},{}) violates p*a <= k < k+1 < l <= p*(a+1) for p={p}",
                self.a, self.k, self.l
            )))
        }
    }

    /// Cell sizes consumed by the move, in the order `(first, second)`.
    pub fn consumed(&self) -> (usize, usize) {
        match self.direction {
            Direction::Forward => (self.k, self.l),
            Direction::Backward => (self.k + 1, self.l - 1),
        }
    }

    /// Cell sizes produced by the move.
    pub fn produced(&self) -> (usize, usize) {
        match self.direction {
            Direction::Forward => (self.k + 1, self.l - 1),
            Direction::Backward => (self.k, self.l),
        }
    }

    pub fn reversed(&self) -> AdjacencyMove {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        AdjacencyMove { direction, ..*self }
    }
}

impl fmt::Display for AdjacencyMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.k, self.l)
    }
}

/// Profile of `J_k^p`: with `k = p*a + r`, `r` cells of size `a+1` and
/// `p - r` cells of size `a` (size-0 cells dropped).
pub fn cell_power_profile(k: usize, p: usize) -> Profile {
    assert!(p > 0, "exponent must be positive");
    let (a, r) = (k / p, k % p);
    Profile::from_counts([(a + 1, r), (a, p - r)])
}

/// The power map `m^[p]`, the profile of `N^p` for any `N` with profile `m`:
/// `m^[p]_a = sum_{-p<j<p} (p - |j|) m_{pa+j}` for `a >= 1`.
pub fn profile_power(m: &Profile, p: usize) -> Profile {
    assert!(p > 0, "exponent must be positive");
    let mut out = Profile::new();
    let top = m.max_cell() / p + 1;
    for a in 1..=top {
        let centre = p * a;
        let mut total = 0;
        for idx in centre.saturating_sub(p - 1)..=centre + p - 1 {
            let weight = p - centre.abs_diff(idx);
            total += weight * m.get(idx);
        }
        out.add_cells(a, total);
    }
    out
}

/// Witness that `m` and `other` are distinct and p-adjacent, oriented so that
/// `apply_move(m, mv, p) == other`.
pub fn is_p_adjacent(m: &Profile, other: &Profile, p: usize) -> Option<AdjacencyMove> {
    let d = ProfileDelta::between(m, other);
    if d.is_zero() {
        return None;
    }
    let neg = d.negated();
    let support: Vec<usize> = d.support().collect();
    // l is always in the support; k is in the support or 0
    for &l in &support {
        for k in std::iter::once(0).chain(support.iter().copied()) {
            if l < k + 2 {
                continue;
            }
            let a = k / p;
            if l > p * (a + 1) {
                continue;
            }
            let v = ProfileDelta::move_vector(k, l);
            let direction = if v == d {
                Direction::Forward
            } else if v == neg {
                Direction::Backward
            } else {
                continue;
            };
            return Some(AdjacencyMove { a, k, l, direction });
        }
    }
    None
}

pub fn apply_move(m: &Profile, mv: &AdjacencyMove, p: usize) -> Result<Profile> {
    mv.check_window(p)?;
    let (c1, c2) = mv.consumed();
    let (p1, p2) = mv.produced();
    let mut out = m.clone();
    if !(out.remove_cells(c1, 1) && out.remove_cells(c2, 1)) {
        return Err(Error::InvalidMove(format!(
            "profile {m} lacks the cells ({c1},{c2}) consumed by move {mv}"
        )));
    }
    out.add_cells(p1, 1);
    out.add_cells(p2, 1);
    Ok(out)
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeCapExceeded { size, cap })
    } else {
        Ok(())
    }
}

/// All profiles of size `n` (integer partitions), in reverse lexicographic
/// order of their decreasing cell lists.
pub fn partitions(n: usize) -> Vec<Profile> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    fn rec(rem: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<Profile>) {
        if rem == 0 {
            out.push(Profile::from_cells(parts));
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            parts.push(part);
            rec(rem - part, part, parts, out);
            parts.pop();
        }
    }
    rec(n, n, &mut parts, &mut out);
    out
}

/// The set `{ m : S(m) = S(target), m^[p] = target }`, in reverse
/// lexicographic order.
pub fn enumerate_preimages(target: &Profile, p: usize, cap: usize) -> Result<Vec<Profile>> {
    assert!(p > 0, "exponent must be positive");
    let n = target.size();
    check_cap(n, cap)?;
    let mut out = Vec::new();
    let mut parts = Vec::new();
    // partial power profiles only grow, so any excess over the target prunes
    fn rec(
        rem: usize,
        max: usize,
        p: usize,
        acc: &Profile,
        target: &Profile,
        parts: &mut Vec<usize>,
        out: &mut Vec<Profile>,
    ) {
        if rem == 0 {
            if acc == target {
                out.push(Profile::from_cells(parts));
            }
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            let next = acc.plus(&cell_power_profile(part, p));
            if !next.is_subprofile_of(target) {
                continue;
            }
            parts.push(part);
            rec(rem - part, part, p, &next, target, parts, out);
            parts.pop();
        }
    }
    rec(n, n, p, &Profile::new(), target, &mut parts, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(s: &str) -> Profile {
        s.parse().unwrap()
    }

    /// Oracle: power map as the sum of the cell power profiles.
    fn power_by_cells(m: &Profile, p: usize) -> Profile {
        m.cells().iter().fold(Profile::new(), |acc, &k| acc.plus(&cell_power_profile(k, p)))
    }

    #[test]
    fn size_examples() {
        assert_eq!(Profile::new().size(), 0);
        assert_eq!(pr("3:1,1:2").size(), 5);
        assert_eq!(pr("2:2,1:2").size(), 6);
    }

    #[test]
    fn text_and_json_forms() {
        let m = pr("2:1, 4:1");
        assert_eq!(m.to_string(), "4:1,2:1");
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"4":1,"2":1}"#);
        assert_eq!(serde_json::from_str::<Profile>(r#"{"2":1,"4":1}"#).unwrap(), m);
        assert_eq!(pr(""), Profile::new());
        assert_eq!(pr("3:0"), Profile::new());
        assert!("3".parse::<Profile>().is_err());
        assert!("0:2".parse::<Profile>().is_err());
        assert!("a:1".parse::<Profile>().is_err());
    }

    #[test]
    fn cell_power_examples() {
        assert_eq!(cell_power_profile(5, 2), pr("3:1,2:1"));
        assert_eq!(cell_power_profile(4, 2), pr("2:2"));
        assert_eq!(cell_power_profile(1, 3), pr("1:1"));
        assert_eq!(cell_power_profile(0, 3), Profile::new());
    }

    #[test]
    fn power_examples() {
        assert_eq!(profile_power(&pr("3:1"), 2), pr("2:1,1:1"));
        assert_eq!(profile_power(&pr("3:1"), 2), cell_power_profile(3, 2));
        assert_eq!(profile_power(&Profile::new(), 3), Profile::new());
        assert_eq!(profile_power(&pr("6:1"), 2), pr("3:2"));
        assert_eq!(profile_power(&pr("4:1,2:1"), 2), pr("2:2,1:2"));
    }

    #[test]
    fn power_formula_matches_cell_expansion_exhaustively() {
        for n in 0..=10 {
            for m in partitions(n) {
                for p in 1..=5 {
                    let direct = profile_power(&m, p);
                    assert_eq!(direct, power_by_cells(&m, p), "m={m} p={p}");
                    assert_eq!(direct.size(), n);
                }
            }
        }
    }

    #[test]
    fn power_map_is_additive() {
        let all: Vec<Profile> = (0..=8).flat_map(partitions).collect();
        for p in 2..=4 {
            for m in all.iter().step_by(3) {
                for m2 in all.iter().step_by(5) {
                    let sum = m.plus(m2);
                    assert_eq!(profile_power(&sum, p), profile_power(m, p).plus(&profile_power(m2, p)));
                    assert_eq!(sum.size(), m.size() + m2.size());
                }
            }
        }
    }

    #[test]
    fn adjacency_examples() {
        let mv = is_p_adjacent(&pr("1:2"), &pr("2:1"), 2).unwrap();
        assert_eq!((mv.a, mv.k, mv.l), (0, 0, 2));
        assert_eq!(mv.direction, Direction::Backward);
        let mv = is_p_adjacent(&pr("5:1,3:1"), &pr("4:2"), 3).unwrap();
        assert_eq!((mv.a, mv.k, mv.l, mv.direction), (1, 3, 5, Direction::Forward));
        assert_eq!(is_p_adjacent(&pr("2:1"), &pr("2:1"), 2), None);
        // (k,l)=(2,5) needs a window of width p >= 5
        assert_eq!(is_p_adjacent(&pr("5:1,2:1"), &pr("4:1,3:1"), 3), None);
        assert!(is_p_adjacent(&pr("5:1,2:1"), &pr("4:1,3:1"), 5).is_some());
    }

    #[test]
    fn apply_move_examples() {
        let fwd = AdjacencyMove { a: 1, k: 2, l: 4, direction: Direction::Forward };
        assert_eq!(apply_move(&pr("4:1,2:1"), &fwd, 2).unwrap(), pr("3:2"));
        assert_eq!(apply_move(&pr("3:2"), &fwd.reversed(), 2).unwrap(), pr("4:1,2:1"));
        let zero = AdjacencyMove { a: 0, k: 0, l: 2, direction: Direction::Forward };
        assert_eq!(apply_move(&pr("2:1"), &zero, 2).unwrap(), pr("1:2"));
        assert!(matches!(apply_move(&pr("3:2"), &fwd, 2), Err(Error::InvalidMove(_))));
        let bad_window = AdjacencyMove { a: 0, k: 2, l: 4, direction: Direction::Forward };
        assert!(matches!(apply_move(&pr("4:1,2:1"), &bad_window, 2), Err(Error::InvalidMove(_))));
        let identity = AdjacencyMove { a: 0, k: 0, l: 1, direction: Direction::Forward };
        assert!(apply_move(&pr("1:1"), &identity, 2).is_err());
    }

    #[test]
    fn adjacency_round_trip_and_power_invariance() {
        for n in 1..=9 {
            let parts = partitions(n);
            for p in 2..=4 {
                for m in &parts {
                    for m2 in &parts {
                        if let Some(mv) = is_p_adjacent(m, m2, p) {
                            assert_eq!(&apply_move(m, &mv, p).unwrap(), m2);
                            assert_eq!(profile_power(m, p), profile_power(m2, p));
                            assert_eq!(is_p_adjacent(m2, m, p), Some(mv.reversed()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=12).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert_eq!(partitions(3), vec![pr("3:1"), pr("2:1,1:1"), pr("1:3")]);
    }

    #[test]
    fn preimage_examples() {
        let cap = DEFAULT_SIZE_CAP;
        assert_eq!(enumerate_preimages(&pr("1:2"), 2, cap).unwrap(), vec![pr("2:1"), pr("1:2")]);
        assert!(enumerate_preimages(&pr("2:1"), 2, cap).unwrap().is_empty());
        assert_eq!(enumerate_preimages(&pr("1:7"), 1, cap).unwrap(), vec![pr("1:7")]);
        assert_eq!(
            enumerate_preimages(&pr("1:25"), 2, cap),
            Err(Error::SizeCapExceeded { size: 25, cap })
        );
    }

    #[test]
    fn preimages_match_brute_force() {
        for n in 0..=10 {
            let parts = partitions(n);
            for p in 1..=4 {
                let mut targets: Vec<Profile> = parts.iter().map(|m| profile_power(m, p)).collect();
                targets.sort();
                targets.dedup();
                for t in targets {
                    let brute: Vec<Profile> =
                        parts.iter().filter(|m| profile_power(m, p) == t).cloned().collect();
                    assert_eq!(enumerate_preimages(&t, p, DEFAULT_SIZE_CAP).unwrap(), brute);
                }
            }
        }
    }
}
