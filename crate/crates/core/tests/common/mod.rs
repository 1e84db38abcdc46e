//! Brute-force oracles shared by the integration tests. They work on plain
//! cell lists and never call the library's combinatorics.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nilpath::linalg::jordan_sum;
use nilpath::{Matrix, Profile, Scalar};
use num_traits::Zero;
use rand::Rng;

/// All partitions of `n` as weakly decreasing cell lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn sorted(mut cells: Vec<usize>) -> Vec<usize> {
    cells.retain(|&c| c > 0);
    cells.sort_unstable_by(|a, b| b.cmp(a));
    cells
}

/// `J_k^p` sends `e_i` to `e_{i-p}`, so the basis splits into `p` chains by
/// residue of the index mod `p`.
pub fn cell_power(k: usize, p: usize) -> Vec<usize> {
    sorted((0..p).map(|r| if r < k { (k - r).div_ceil(p) } else { 0 }).collect())
}

pub fn power(cells: &[usize], p: usize) -> Vec<usize> {
    sorted(cells.iter().flat_map(|&k| cell_power(k, p)).collect())
}

pub fn cells(m: &Profile) -> Vec<usize> {
    sorted(m.iter().flat_map(|(k, c)| std::iter::repeat(k).take(c)).collect())
}

pub fn profile(cells: &[usize]) -> Profile {
    let mut counts = BTreeMap::new();
    for &c in cells.iter().filter(|&&c| c > 0) {
        *counts.entry(c).or_insert(0) += 1;
    }
    Profile::from_counts(counts)
}

/// All p-th-root cell lists of `target`, by exhaustion over partitions.
pub fn preimages(target: &[usize], p: usize) -> Vec<Vec<usize>> {
    let n: usize = target.iter().sum();
    partitions(n).into_iter().filter(|m| power(m, p) == target).collect()
}

fn replace(cells: &[usize], remove: [usize; 2], add: [usize; 2]) -> Option<Vec<usize>> {
    let mut out = cells.to_vec();
    for r in remove.into_iter().filter(|&r| r > 0) {
        let idx = out.iter().position(|&c| c == r)?;
        out.remove(idx);
    }
    out.extend(add);
    Some(sorted(out))
}

/// Whether `b` arises from `a` by one p-adjacency move in either direction.
pub fn adjacent(a: &[usize], b: &[usize], p: usize) -> bool {
    let top = a.iter().chain(b).copied().max().unwrap_or(0) + p;
    for w in 0..=top / p {
        for k in p * w..=p * (w + 1) {
            for l in k + 2..=p * (w + 1) {
                let fwd = replace(a, [k, l], [k + 1, l - 1]);
                let bwd = replace(a, [k + 1, l - 1], [k, l]);
                if fwd.as_deref() == Some(b) || bwd.as_deref() == Some(b) {
                    return true;
                }
            }
        }
    }
    false
}

/// Random invertible integer matrix with entries in `[-3, 3]`.
pub fn random_conjugator<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect())
            .collect();
        let s = Matrix::from_rows(rows).unwrap();
        if n == 0 || !s.det().unwrap().is_zero() {
            return s;
        }
    }
}

/// Random nilpotent `n x n` matrix together with its intended cell list.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize) -> (Matrix, Vec<usize>) {
    let all = partitions(n);
    let cells = all[rng.gen_range(0..all.len())].clone();
    let s = random_conjugator(rng, n);
    let m = &(&s * &jordan_sum(&cells)) * &s.inverse().unwrap();
    (m, cells)
}

#[test]
fn oracle_self_checks() {
    assert_eq!(partitions(4).len(), 5);
    assert_eq!(partitions(12).len(), 77);
    assert_eq!(cell_power(5, 2), vec![3, 2]);
    assert_eq!(cell_power(1, 3), vec![1]);
    assert_eq!(power(&[4, 2], 2), vec![2, 2, 1, 1]);
    assert!(adjacent(&[4, 2], &[3, 3], 2));
    assert!(adjacent(&[1, 1], &[2], 2));
    assert!(!adjacent(&[4, 1], &[3, 2], 2));
}
