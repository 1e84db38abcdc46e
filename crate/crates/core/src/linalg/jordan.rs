//! Jordan cells, nilpotent profiles, deterministic Jordan bases and
//! similarity witnesses for nilpotent matrices.

use num_traits::One;

use super::matrix::{EchelonSpan, Matrix};
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::profile::Profile;

/// `J_k`: ones on the superdiagonal. `J_0` is the `0x0` matrix.
pub fn jordan_cell(k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 1..k {
        m.set(i - 1, i, Scalar::one());
    }
    m
}

/// Direct sum of Jordan cells with the given sizes, in the given order.
pub fn jordan_sum(sizes: &[usize]) -> Matrix {
    let blocks: Vec<Matrix> = sizes.iter().map(|&k| jordan_cell(k)).collect();
    Matrix::direct_sum(&blocks)
}

/// Canonical nilpotent matrix with profile `m`: cells in decreasing size.
pub fn jordan_model(m: &Profile) -> Matrix {
    jordan_sum(&m.cells())
}

/// Ranks `rank(M^k)` for `k = 0, 1, ...` up to and including the first zero.
/// Fails with `NotNilpotent` when `M^n != 0`.
fn power_ranks(m: &Matrix) -> Result<Vec<usize>> {
    let n = m.require_square()?;
    let mut ranks = vec![n];
    let mut pow = Matrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        if ranks.len() > n {
            return Err(Error::NotNilpotent);
        }
        pow = pow.try_mul(m)?;
        ranks.push(pow.rank());
    }
    Ok(ranks)
}

/// Jordan profile of a nilpotent matrix, from `m_k = r_{k-1} - 2 r_k + r_{k+1}`
/// with `r_k = rank(M^k)`.
pub fn nilpotent_profile(m: &Matrix) -> Result<Profile> {
    let mut ranks = power_ranks(m)?;
    ranks.push(0);
    let mut out = Profile::new();
    for k in 1..ranks.len() - 1 {
        let c = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        out.add_cells(k, c);
    }
    Ok(out)
}

/// `conjugator^-1 * N * conjugator` equals `jordan_sum(cell_sizes)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub conjugator: Matrix,
    pub cell_sizes: Vec<usize>,
}

impl JordanDecomposition {
    pub fn profile(&self) -> Profile {
        Profile::from_cells(&self.cell_sizes)
    }

    pub fn canonical_form(&self) -> Matrix {
        jordan_sum(&self.cell_sizes)
    }

    /// Reorders the cells so that one cell of each requested size sits at the
    /// end, in the requested order. Size-0 requests are satisfied by the empty
    /// cell. Returns `None` when the cells are not available.
    pub fn with_trailing_cells(&self, trailing: &[usize]) -> Option<JordanDecomposition> {
        let mut used = vec![false; self.cell_sizes.len()];
        let mut tail = Vec::new();
        for &size in trailing.iter().filter(|&&s| s > 0) {
            // the last unused cell of that size keeps the others in place
            let idx = (0..self.cell_sizes.len())
                .rev()
                .find(|&i| !used[i] && self.cell_sizes[i] == size)?;
            used[idx] = true;
            tail.push(idx);
        }
        let order: Vec<usize> = (0..self.cell_sizes.len()).filter(|&i| !used[i]).chain(tail).collect();
        let mut offsets = Vec::with_capacity(self.cell_sizes.len());
        let mut acc = 0;
        for &s in &self.cell_sizes {
            offsets.push(acc);
            acc += s;
        }
        let n = self.conjugator.rows();
        let mut cols = Vec::with_capacity(n);
        let mut sizes = Vec::with_capacity(order.len());
        for &i in &order {
            for c in offsets[i]..offsets[i] + self.cell_sizes[i] {
                cols.push(self.conjugator.col(c));
            }
            sizes.push(self.cell_sizes[i]);
        }
        Some(JordanDecomposition { conjugator: Matrix::from_columns(n, &cols), cell_sizes: sizes })
    }
}

/// Deterministic Jordan basis of a nilpotent matrix.
///
/// Chain tops are chosen level by level, from the longest chains down, by
/// scanning the RREF kernel basis of `M^j` and keeping the vectors that are
/// independent of `ker M^(j-1)` plus the images of the longer chains. Cells
/// come out in decreasing size.
pub fn jordan_basis(m: &Matrix) -> Result<JordanDecomposition> {
    let n = m.require_square()?;
    let depth = power_ranks(m)?.len() - 1;
    let mut powers = vec![Matrix::identity(n)];
    for j in 1..=depth {
        powers.push(powers[j - 1].try_mul(m)?);
    }
    // tops[j] holds chain tops of length j
    let mut tops: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); depth + 1];
    for level in (1..=depth).rev() {
        let mut span = EchelonSpan::new();
        for v in powers[level - 1].nullspace() {
            span.insert(&v);
        }
        for longer in level + 1..=depth {
            for v in &tops[longer] {
                span.insert(&powers[longer - level].mul_vec(v));
            }
        }
        for v in powers[level].nullspace() {
            if span.insert(&v) {
                tops[level].push(v);
            }
        }
    }
    let mut cols = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for level in (1..=depth).rev() {
        for v in &tops[level] {
            for e in (0..level).rev() {
                cols.push(powers[e].mul_vec(v));
            }
            sizes.push(level);
        }
    }
    if cols.len() != n {
        return Err(Error::Internal(format!("Jordan chains span {} of {n} dimensions", cols.len())));
    }
    Ok(JordanDecomposition { conjugator: Matrix::from_columns(n, &cols), cell_sizes: sizes })
}

/// Invertible `Q` with `Y = Q X Q^-1`, assembled from both Jordan bases.
pub fn similarity_witness(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch("similarity witness needs equal shapes".into()));
    }
    let jx = jordan_basis(x)?;
    let jy = jordan_basis(y)?;
    if jx.cell_sizes != jy.cell_sizes {
        return Err(Error::NotSimilar);
    }
    Ok(jy.conjugator.try_mul(&jx.conjugator.inverse()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(s: &str) -> Profile {
        s.parse().unwrap()
    }

    #[test]
    fn cells() {
        assert_eq!(jordan_cell(0), Matrix::empty());
        assert_eq!(jordan_cell(1), Matrix::zeros(1, 1));
        assert_eq!(jordan_cell(3), Matrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]));
        assert_eq!(jordan_sum(&[1, 2]), Matrix::from_ints(&[[0, 0, 0], [0, 0, 1], [0, 0, 0]]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(jordan_cell(3).rank(), 2);
        assert_eq!(Matrix::zeros(4, 4).rank(), 0);
        assert_eq!(jordan_sum(&[4, 2]).rank(), 4);
    }

    #[test]
    fn pow_example() {
        let sq = jordan_cell(3).pow(2).unwrap();
        assert_eq!(sq, Matrix::from_ints(&[[0, 0, 1], [0, 0, 0], [0, 0, 0]]));
    }

    #[test]
    fn profile_examples() {
        assert_eq!(nilpotent_profile(&jordan_cell(3)).unwrap(), pr("3:1"));
        assert_eq!(nilpotent_profile(&Matrix::zeros(3, 3)).unwrap(), pr("1:3"));
        assert_eq!(nilpotent_profile(&Matrix::empty()).unwrap(), Profile::new());
        let r = Matrix::from_ints(&[
            [1, 2, 0, -1, 0, 0],
            [0, 1, 1, 0, 2, 0],
            [1, 0, 1, 0, 0, 1],
            [0, 0, 0, 1, 0, 3],
            [2, 0, 0, 0, 1, 0],
            [0, 1, 0, 0, 0, 1],
        ]);
        let m = &(&r * &jordan_sum(&[4, 2])) * &r.inverse().unwrap();
        assert_eq!(nilpotent_profile(&m).unwrap(), pr("4:1,2:1"));
        assert_eq!(nilpotent_profile(&Matrix::identity(2)), Err(Error::NotNilpotent));
        assert!(matches!(nilpotent_profile(&Matrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn basis_examples() {
        let d = jordan_basis(&jordan_cell(3)).unwrap();
        assert!(d.conjugator.is_identity());
        assert_eq!(d.cell_sizes, vec![3]);
        let d = jordan_basis(&Matrix::zeros(2, 2)).unwrap();
        assert!(d.conjugator.is_identity());
        assert_eq!(d.cell_sizes, vec![1, 1]);

        let p = Matrix::from_ints(&[[1, 2, 0], [0, 1, 3], [1, 0, 1]]);
        let m = &(&p * &jordan_sum(&[2, 1])) * &p.inverse().unwrap();
        let d = jordan_basis(&m).unwrap();
        assert_eq!(d.cell_sizes, vec![2, 1]);
        let back = &(&d.conjugator.inverse().unwrap() * &m) * &d.conjugator;
        assert_eq!(back, jordan_sum(&[2, 1]));
        assert_eq!(jordan_basis(&Matrix::identity(1)), Err(Error::NotNilpotent));
    }

    #[test]
    fn trailing_cells_reorder() {
        let m = jordan_sum(&[4, 3, 2, 2, 1]);
        let d = jordan_basis(&m).unwrap();
        let t = d.with_trailing_cells(&[2, 4]).unwrap();
        assert_eq!(t.cell_sizes, vec![3, 2, 1, 2, 4]);
        let back = &(&t.conjugator.inverse().unwrap() * &m) * &t.conjugator;
        assert_eq!(back, t.canonical_form());
        assert_eq!(d.with_trailing_cells(&[0, 3]).unwrap().cell_sizes, vec![4, 2, 2, 1, 3]);
        assert!(d.with_trailing_cells(&[5, 1]).is_none());
        assert!(d.with_trailing_cells(&[3, 3]).is_none());
    }

    #[test]
    fn similarity_examples() {
        assert!(similarity_witness(&jordan_cell(3), &jordan_cell(3)).unwrap().is_identity());
        let x = jordan_sum(&[2, 1]);
        let r = Matrix::from_ints(&[[2, 1, 0], [0, 1, 1], [1, 0, 1]]);
        let y = &(&r * &x) * &r.inverse().unwrap();
        let q = similarity_witness(&x, &y).unwrap();
        assert_eq!(&(&q * &x) * &q.inverse().unwrap(), y);
        assert_eq!(similarity_witness(&jordan_cell(2), &Matrix::zeros(2, 2)), Err(Error::NotSimilar));
    }
}
