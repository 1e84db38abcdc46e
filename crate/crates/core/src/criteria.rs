//! Existence criteria: p-th roots of nilpotent matrices and, more generally,
//! solvability of `f(X) = N` for analytic `f` described by the multiplicities
//! of its zeros.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{enumerate_preimages, profile_power, Profile};

/// Zero data of an analytic function: the finite multiplicities of its zeros
/// and whether some zero has infinite multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSpec {
    pub finite_multiplicities: Vec<usize>,
    pub has_infinite_zero: bool,
}

impl ZeroSpec {
    pub fn finite(mults: &[usize]) -> Self {
        ZeroSpec { finite_multiplicities: mults.to_vec(), has_infinite_zero: false }
    }

    pub fn with_infinite_zero(mut self) -> Self {
        self.has_infinite_zero = true;
        self
    }

    /// Parses a comma-separated multiplicity list such as `2,3`.
    pub fn parse_list(s: &str, has_infinite_zero: bool) -> Result<Self> {
        let mut finite = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("malformed zero multiplicity `{part}`")))?;
            if p == 0 {
                return Err(Error::Parse("zero multiplicities must be positive".into()));
            }
            finite.push(p);
        }
        Ok(ZeroSpec { finite_multiplicities: finite, has_infinite_zero })
    }
}

/// Generator `(p - r) e_a + r e_{a+1}` of the solvability semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub p: usize,
    pub a: usize,
    pub r: usize,
}

impl Generator {
    pub fn profile(&self) -> Profile {
        Profile::from_counts([(self.a, self.p - self.r), (self.a + 1, self.r)])
    }
}

/// Decomposition of a profile into semigroup generators. `unit_count` counts
/// the extra `e_1` generators contributed by a zero of infinite multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupWitness {
    pub generators: Vec<Generator>,
    pub unit_count: usize,
}

impl SemigroupWitness {
    pub fn total(&self) -> Profile {
        let mut m = Profile::new();
        for g in &self.generators {
            m = m.plus(&g.profile());
        }
        m.add_cells(1, self.unit_count);
        m
    }
}

/// Remainder criterion: for every `k` with `R_k = (sum_{j>k} m_j) mod p`
/// nonzero, `p - m_k <= R_k`.
pub fn has_pth_root(m: &Profile, p: usize) -> bool {
    assert!(p > 0, "exponent must be positive");
    let mut tail = 0usize;
    for k in (1..=m.max_cell()).rev() {
        let rem = tail % p;
        if rem != 0 && p > m.get(k) + rem {
            return false;
        }
        tail += m.get(k);
    }
    true
}

/// Greedy merge of the largest target cells into one root cell at a time.
fn greedy_root(m: &Profile, p: usize) -> Option<Profile> {
    let mut rest = m.clone();
    let mut root = Profile::new();
    while !rest.is_empty() {
        let s = rest.max_cell();
        let r = rest.get(s).min(p);
        rest.remove_cells(s, r);
        if !rest.remove_cells(s - 1, p - r) {
            return None;
        }
        root.add_cells(p * (s - 1) + r, 1);
    }
    Some(root)
}

/// A root profile `m'` with `m'^[p] = m`, when one exists.
pub fn find_root_profile(m: &Profile, p: usize, cap: usize) -> Result<Option<Profile>> {
    if !has_pth_root(m, p) {
        return Ok(None);
    }
    if let Some(root) = greedy_root(m, p) {
        if profile_power(&root, p) == *m {
            return Ok(Some(root));
        }
    }
    Ok(enumerate_preimages(m, p, cap)?.into_iter().next())
}

/// Forbidden-pattern test for functions with exactly one double and one
/// triple zero: false iff some `k, l >= 1` have `m_k = m_{k+2l} = 0` and
/// `m_{k+i} = 1` for `1 <= i <= 2l - 1`.
pub fn special_two_three(m: &Profile) -> bool {
    let top = m.max_cell();
    for k in 1..=top {
        if m.get(k) != 0 {
            continue;
        }
        // extend a run of singletons above k and look for a zero at odd length
        let mut i = 1;
        while m.get(k + i) == 1 {
            i += 1;
        }
        // m_{k+1..k+i-1} are all 1 and m_{k+i} != 1
        let run = i - 1;
        for l in 1..=run.div_ceil(2) {
            if 2 * l - 1 <= run && m.get(k + 2 * l) == 0 {
                return false;
            }
        }
    }
    true
}

/// Candidate generators bounded by `m`, ordered by decreasing `a`, then
/// increasing `p` and `r`; duplicates (as profiles) keep their first form.
fn candidate_generators(spec: &ZeroSpec, m: &Profile) -> Vec<(Generator, Profile)> {
    let mut ps = spec.finite_multiplicities.clone();
    ps.sort_unstable();
    ps.dedup();
    let mut out: Vec<(Generator, Profile)> = Vec::new();
    for a in (0..=m.max_cell()).rev() {
        for &p in &ps {
            for r in 0..=p {
                if a == 0 && r == 0 {
                    continue;
                }
                let g = Generator { p, a, r };
                let v = g.profile();
                if v.is_subprofile_of(m) && !out.iter().any(|(_, w)| *w == v) {
                    out.push((g, v));
                }
            }
        }
    }
    out
}

/// Decides whether `m` lies in the semigroup generated by the zero data of
/// `spec`, returning a minimal-length witness.
///
/// Dynamic programming over all sub-profiles of `m` (mixed-radix states, one
/// digit per cell size in the support of `m`).
pub fn is_f_solvable(spec: &ZeroSpec, m: &Profile, cap: usize) -> Result<Option<SemigroupWitness>> {
    let size = m.size();
    if size > cap {
        return Err(Error::SizeCapExceeded { size, cap });
    }
    let keys: Vec<usize> = m.iter().map(|(k, _)| k).collect();
    let radix: Vec<usize> = m.iter().map(|(_, c)| c + 1).collect();
    let mut stride = vec![1usize; keys.len()];
    for i in 1..keys.len() {
        stride[i] = stride[i - 1] * radix[i - 1];
    }
    let states: usize = radix.iter().product();
    let encode = |v: &Profile| -> usize { keys.iter().zip(&stride).map(|(&k, s)| v.get(k) * s).sum() };

    // generator deltas as (state offset, digit vector)
    struct Move {
        offset: usize,
        digits: Vec<usize>,
        source: Option<Generator>,
    }
    let mut moves: Vec<Move> = candidate_generators(spec, m)
        .into_iter()
        .map(|(g, v)| Move {
            offset: encode(&v),
            digits: keys.iter().map(|&k| v.get(k)).collect(),
            source: Some(g),
        })
        .collect();
    let unit = Profile::unit(1);
    if spec.has_infinite_zero && unit.is_subprofile_of(m) {
        moves.push(Move { offset: encode(&unit), digits: keys.iter().map(|&k| unit.get(k)).collect(), source: None });
    }

    let digits_of = |mut s: usize| -> Vec<usize> {
        radix
            .iter()
            .map(|&r| {
                let d = s % r;
                s /= r;
                d
            })
            .collect()
    };
    let fits = |mv: &Move, digits: &[usize]| mv.digits.iter().zip(digits).all(|(g, d)| g <= d);

    let mut best: Vec<Option<u32>> = vec![None; states];
    best[0] = Some(0);
    for s in 1..states {
        let digits = digits_of(s);
        best[s] = moves
            .iter()
            .filter(|mv| fits(mv, &digits))
            .filter_map(|mv| best[s - mv.offset].map(|c| c + 1))
            .min();
    }

    let top = states - 1;
    if best[top].is_none() {
        return Ok(None);
    }
    let mut witness = SemigroupWitness { generators: Vec::new(), unit_count: 0 };
    let mut s = top;
    while s != 0 {
        let digits = digits_of(s);
        let want = best[s].unwrap() - 1;
        let mv = moves
            .iter()
            .find(|mv| fits(mv, &digits) && best[s - mv.offset] == Some(want))
            .ok_or_else(|| Error::Internal("semigroup witness reconstruction failed".into()))?;
        match mv.source {
            Some(g) => witness.generators.push(g),
            None => witness.unit_count += 1,
        }
        s -= mv.offset;
    }
    if witness.total() != *m {
        return Err(Error::Internal("semigroup witness does not re-sum to the profile".into()));
    }
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{partitions, DEFAULT_SIZE_CAP};

    fn pr(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn solvable(mults: &[usize], m: &str) -> Option<SemigroupWitness> {
        is_f_solvable(&ZeroSpec::finite(mults), &pr(m), DEFAULT_SIZE_CAP).unwrap()
    }

    #[test]
    fn pth_root_examples() {
        assert!(!has_pth_root(&pr("2:1"), 2));
        assert!(has_pth_root(&pr("2:1,1:1"), 2));
        assert!(has_pth_root(&pr("1:5"), 3));
        assert!(has_pth_root(&Profile::new(), 2));
        assert!(has_pth_root(&pr("5:1"), 1));
    }

    #[test]
    fn root_profile_examples() {
        let cap = DEFAULT_SIZE_CAP;
        assert_eq!(find_root_profile(&pr("2:1,1:1"), 2, cap).unwrap(), Some(pr("3:1")));
        assert_eq!(find_root_profile(&pr("2:1"), 2, cap).unwrap(), None);
        assert_eq!(find_root_profile(&Profile::new(), 3, cap).unwrap(), Some(Profile::new()));
    }

    #[test]
    fn root_profiles_are_preimages() {
        for n in 0..=12 {
            for m in partitions(n) {
                for p in 1..=4 {
                    match find_root_profile(&m, p, DEFAULT_SIZE_CAP).unwrap() {
                        Some(root) => assert_eq!(profile_power(&root, p), m),
                        None => assert!(!has_pth_root(&m, p)),
                    }
                }
            }
        }
    }

    #[test]
    fn solvability_examples() {
        let w = solvable(&[2, 3], "3:1,2:1,1:1").unwrap();
        assert_eq!(
            w.generators,
            vec![Generator { p: 2, a: 2, r: 1 }, Generator { p: 2, a: 0, r: 1 }]
        );
        assert_eq!(w.unit_count, 0);
        assert!(solvable(&[2, 3], "2:1").is_none());
        let w = solvable(&[1], "5:2,3:1").unwrap();
        assert!(w.generators.iter().all(|g| g.p == 1));
        assert_eq!(w.total(), pr("5:2,3:1"));
        assert_eq!(solvable(&[2, 3], "").unwrap().generators, vec![]);
    }

    #[test]
    fn infinite_zero_supplies_unit_cells() {
        let spec = ZeroSpec::finite(&[]).with_infinite_zero();
        for n in 0..=15 {
            let w = is_f_solvable(&spec, &Profile::from_counts([(1, n)]), DEFAULT_SIZE_CAP).unwrap().unwrap();
            assert_eq!(w.unit_count, n);
        }
        assert!(is_f_solvable(&spec, &pr("2:1"), DEFAULT_SIZE_CAP).unwrap().is_none());
        assert!(is_f_solvable(&ZeroSpec::finite(&[]), &pr("1:1"), DEFAULT_SIZE_CAP).unwrap().is_none());
    }

    #[test]
    fn size_cap_is_enforced() {
        assert_eq!(
            is_f_solvable(&ZeroSpec::finite(&[2]), &pr("5:5"), 24),
            Err(Error::SizeCapExceeded { size: 25, cap: 24 })
        );
    }

    #[test]
    fn two_three_examples() {
        assert!(!special_two_three(&pr("2:1")));
        assert!(special_two_three(&pr("3:1,2:1,1:1")));
        assert!(special_two_three(&Profile::new()));
        assert!(special_two_three(&pr("1:1")));
        // k=1, l=2: m_1 = 0, m_2..m_4 = 1, m_5 = 0
        assert!(!special_two_three(&pr("4:1,3:1,2:1")));
        assert!(special_two_three(&pr("4:1,3:1,2:1,1:1")));
    }

    #[test]
    fn zero_spec_parsing() {
        let z = ZeroSpec::parse_list("2, 3", true).unwrap();
        assert_eq!(z.finite_multiplicities, vec![2, 3]);
        assert!(z.has_infinite_zero);
        assert!(ZeroSpec::parse_list("2,x", false).is_err());
        assert!(ZeroSpec::parse_list("0", false).is_err());
    }
}
