//! Local sections of kernels of constant-rank operators, and the local
//! cross-section `g` of the conjugation map `P -> P A P^-1` built from them.
//!
//! For a reference operator `u` of rank `r` and a kernel vector `x0`, choose a
//! domain basis `(e_1..e_r, kernel.., x0)` with the tail spanning `ker u`, and
//! a codomain basis `(u e_1, .., u e_r, f_{r+1}, ..)`. In these bases `u` is
//! `[[I_r, 0], [0, 0]]`. For nearby `v` with invertible top-left block
//! `A(v)`, the vector `f(v) = x0 - (e_1..e_r) A(v)^-1 C(v) e_last` is
//! annihilated by `v` whenever `rank v = r`, and `f(u) = x0`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::EchelonSpan;
use crate::linalg::{Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionData {
    /// The reference operator `u`.
    pub reference: Matrix,
    pub rank: usize,
    /// Designated kernel vector, `f(u) = x0`.
    pub x0: Vec<Scalar>,
    /// Domain basis as columns: `r` complement vectors, then the kernel basis
    /// ending in `x0`.
    pub domain_basis: Matrix,
    /// First `r` rows of the inverse codomain basis; maps `v e_j` to the
    /// top block of the matrix of `v`.
    pub codomain_rows: Matrix,
}

impl SectionData {
    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Complement vectors `e_1..e_r` of the domain basis.
    pub fn complement(&self) -> Vec<Vec<Scalar>> {
        (0..self.rank).map(|j| self.domain_basis.col(j)).collect()
    }

    /// Top blocks of the matrix of `v`: `A(v)` (r x r) and the last column of
    /// `C(v)`, given the images of the complement vectors and of `x0`.
    fn blocks(&self, images: &[Vec<Scalar>], x0_image: &[Scalar]) -> (Matrix, Vec<Scalar>) {
        let cols: Vec<Vec<Scalar>> = images.iter().map(|w| self.codomain_rows.mul_vec(w)).collect();
        let a = Matrix::from_columns(self.rank, &cols);
        (a, self.codomain_rows.mul_vec(x0_image))
    }

    /// `det A(v)` from the images of the complement vectors under `v`.
    pub fn block_det(&self, images: &[Vec<Scalar>]) -> Scalar {
        let cols: Vec<Vec<Scalar>> = images.iter().map(|w| self.codomain_rows.mul_vec(w)).collect();
        Matrix::from_columns(self.rank, &cols).det().expect("square block")
    }

    /// Evaluates the section given a way to apply `v` to vectors.
    pub fn eval_with<F>(&self, apply: F) -> Result<Vec<Scalar>>
    where
        F: Fn(&[Scalar]) -> Vec<Scalar>,
    {
        let complement = self.complement();
        let images: Vec<Vec<Scalar>> = complement.iter().map(|e| apply(e)).collect();
        let (a, c) = self.blocks(&images, &apply(&self.x0));
        let y = a
            .solve(&c)
            .map_err(|_| Error::OutsideNeighborhood("singular A-block".into()))?;
        let mut f = self.x0.clone();
        for (coef, e) in y.iter().zip(&complement) {
            if coef.is_zero() {
                continue;
            }
            for (fi, ei) in f.iter_mut().zip(e) {
                if !ei.is_zero() {
                    *fi -= &(coef * ei);
                }
            }
        }
        Ok(f)
    }
}

/// Builds the section data for `u` around the kernel vector `x0`.
pub fn section_setup(u: &Matrix, x0: &[Scalar]) -> Result<SectionData> {
    let d = u.require_square()?;
    if x0.len() != d {
        return Err(Error::DimensionMismatch("kernel vector length".into()));
    }
    if x0.iter().all(Zero::is_zero) || u.mul_vec(x0).iter().any(|e| !e.is_zero()) {
        return Err(Error::NotInKernel);
    }
    let mut span = EchelonSpan::new();
    span.insert(x0);
    let mut kernel_rest = Vec::new();
    for v in u.nullspace() {
        if span.insert(&v) {
            kernel_rest.push(v);
        }
    }
    let mut complement = Vec::new();
    for j in 0..d {
        let mut e = vec![Scalar::zero(); d];
        e[j] = Scalar::from_int(1);
        if span.insert(&e) {
            complement.push(e);
        }
    }
    let rank = complement.len();
    let mut domain = complement.clone();
    domain.extend(kernel_rest);
    domain.push(x0.to_vec());

    let mut codomain: Vec<Vec<Scalar>> = complement.iter().map(|e| u.mul_vec(e)).collect();
    let mut cspan = EchelonSpan::new();
    for c in &codomain {
        if !cspan.insert(c) {
            return Err(Error::Internal("images of the complement are dependent".into()));
        }
    }
    for j in 0..d {
        let mut e = vec![Scalar::zero(); d];
        e[j] = Scalar::from_int(1);
        if cspan.insert(&e) {
            codomain.push(e);
        }
    }
    let c_inv = Matrix::from_columns(d, &codomain).inverse()?;
    Ok(SectionData {
        reference: u.clone(),
        rank,
        x0: x0.to_vec(),
        domain_basis: Matrix::from_columns(d, &domain),
        codomain_rows: c_inv.block(0, 0, rank, d),
    })
}

/// `f(v)` for an operator given as a matrix. Fails with `OutsideNeighborhood`
/// when the `A(v)` block is singular.
pub fn section_eval(s: &SectionData, v: &Matrix) -> Result<Vec<Scalar>> {
    if v.rows() != s.dim() || v.cols() != s.dim() {
        return Err(Error::DimensionMismatch("operator dimension differs from the section".into()));
    }
    s.eval_with(|x| v.mul_vec(x))
}

/// `M -> B M - M A` on column-stacked `n x n` matrices, as an `n^2 x n^2` matrix.
pub fn conjugation_operator(b: &Matrix, a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut op = Matrix::zeros(n * n, n * n);
    // vec(B M) = (I kron B) vec(M), vec(M A) = (A^T kron I) vec(M)
    for col in 0..n {
        for i in 0..n {
            for j in 0..n {
                let bij = b.get(i, j);
                if !bij.is_zero() {
                    op.set(col * n + i, col * n + j, bij.clone());
                }
            }
        }
    }
    for c1 in 0..n {
        for c2 in 0..n {
            let a_c2_c1 = a.get(c2, c1);
            if a_c2_c1.is_zero() {
                continue;
            }
            for i in 0..n {
                let v = op.get(c1 * n + i, c2 * n + i) - a_c2_c1;
                op.set(c1 * n + i, c2 * n + i, v);
            }
        }
    }
    op
}

/// Cross-section of `P -> P A0 P^-1` near `A0`, from the kernel section of
/// `ad_{A0}` at the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationSection {
    pub base: Matrix,
    pub data: SectionData,
}

pub fn conjugation_section(a0: &Matrix) -> Result<ConjugationSection> {
    let n = a0.require_square()?;
    let ad = conjugation_operator(a0, a0);
    let data = section_setup(&ad, &Matrix::identity(n).stack())?;
    Ok(ConjugationSection { base: a0.clone(), data })
}

impl ConjugationSection {
    pub fn n(&self) -> usize {
        self.base.rows()
    }

    fn apply_phi(&self, b: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
        let n = self.n();
        let m = Matrix::unstack(n, n, x);
        (&(b * &m) - &(&m * &self.base)).stack()
    }

    /// Images under `Phi(B)` of the complement vectors, for polynomial
    /// certification of `det A(Phi(B))`.
    pub fn block_det(&self, b: &Matrix) -> Scalar {
        let images: Vec<Vec<Scalar>> =
            self.data.complement().iter().map(|e| self.apply_phi(b, e)).collect();
        self.data.block_det(&images)
    }

    /// `g(B)` without validity checks beyond the `A`-block.
    pub fn raw(&self, b: &Matrix) -> Result<Matrix> {
        let n = self.n();
        if b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch("section argument shape".into()));
        }
        let f = self.data.eval_with(|x| self.apply_phi(b, x))?;
        Ok(Matrix::unstack(n, n, &f))
    }

    /// `g(B)`, checked to be invertible with `B g(B) = g(B) A0`.
    pub fn eval(&self, b: &Matrix) -> Result<Matrix> {
        let g = self.raw(b)?;
        if &(b * &g) != &(&g * &self.base) {
            return Err(Error::OutsideNeighborhood("B g(B) != g(B) A0 (rank drop)".into()));
        }
        if g.det()?.is_zero() {
            return Err(Error::OutsideNeighborhood("g(B) is singular".into()));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jordan_cell, jordan_sum};

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn diagonal_reference_examples() {
        let u = Matrix::from_ints(&[[1, 0], [0, 0]]);
        let x0 = vec![Scalar::zero(), Scalar::from_int(1)];
        let sec = section_setup(&u, &x0).unwrap();
        assert_eq!(sec.rank, 1);
        assert_eq!(section_eval(&sec, &u).unwrap(), x0);

        // v = [[a, c], [b, d]] with a != 0
        let (a, b, c) = (s("3"), s("2"), s("5"));
        let d = &(&b * &c) / &a; // rank 1
        let v = Matrix::from_rows(vec![vec![a.clone(), c.clone()], vec![b, d]]).unwrap();
        let f = section_eval(&sec, &v).unwrap();
        assert_eq!(f, vec![-(&c / &a), Scalar::from_int(1)]);
        assert!(v.mul_vec(&f).iter().all(Zero::is_zero));

        let singular = Matrix::from_ints(&[[0, 1], [0, 1]]);
        assert!(matches!(section_eval(&sec, &singular), Err(Error::OutsideNeighborhood(_))));
        assert_eq!(section_setup(&u, &[Scalar::from_int(1), Scalar::zero()]), Err(Error::NotInKernel));
        assert_eq!(section_setup(&u, &[Scalar::zero(), Scalar::zero()]), Err(Error::NotInKernel));
    }

    #[test]
    fn reference_block_is_identity() {
        let u = Matrix::from_ints(&[[1, 2, 0], [0, 1, 1], [1, 3, 1]]);
        let x0 = u.nullspace().pop().unwrap();
        let sec = section_setup(&u, &x0).unwrap();
        let images: Vec<Vec<Scalar>> = sec.complement().iter().map(|e| u.mul_vec(e)).collect();
        let cols: Vec<Vec<Scalar>> = images.iter().map(|w| sec.codomain_rows.mul_vec(w)).collect();
        assert!(Matrix::from_columns(sec.rank, &cols).is_identity());
        assert_eq!(section_eval(&sec, &u).unwrap(), x0);
    }

    #[test]
    fn operator_matches_direct_product() {
        let b = Matrix::from_ints(&[[1, 2], [3, 4]]);
        let a = Matrix::from_ints(&[[0, 1], [0, 0]]);
        let m = Matrix::from_ints(&[[5, -1], [2, 7]]);
        let op = conjugation_operator(&b, &a);
        let expected = &(&b * &m) - &(&m * &a);
        assert_eq!(Matrix::unstack(2, 2, &op.mul_vec(&m.stack())), expected);
    }

    #[test]
    fn conjugation_section_examples() {
        let a0 = jordan_cell(2);
        let g = conjugation_section(&a0).unwrap();
        assert!(g.eval(&a0).unwrap().is_identity());

        // B = R A0 R^-1 with R = I + eps E
        let mut r = Matrix::identity(2);
        r.set(1, 0, Scalar::frac(1, 10));
        let b = &(&r * &a0) * &r.inverse().unwrap();
        let gb = g.eval(&b).unwrap();
        assert_eq!(&b * &gb, &gb * &a0);
        assert!(!gb.det().unwrap().is_zero());

        // J_2 conjugated far away: the A-block of Phi(B) degenerates
        let far = Matrix::from_ints(&[[0, 0], [1, 0]]);
        assert!(matches!(g.eval(&far), Err(Error::OutsideNeighborhood(_))));
    }

    #[test]
    fn zero_base_has_trivial_section() {
        let g = conjugation_section(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(g.data.rank, 0);
        assert!(g.eval(&Matrix::zeros(3, 3)).unwrap().is_identity());
        let big = conjugation_section(&jordan_sum(&[2, 2, 1, 1])).unwrap();
        assert_eq!(big.data.rank, 36 - 20);
    }
}
