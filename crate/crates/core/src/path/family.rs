//! The one-parameter deformation `U_t` of `J_k + J_l` that merges one step of
//! the longer cell into the shorter one.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{jordan_sum, Matrix, Scalar};

/// Matrix of `u_t` in the basis `(x_k..x_1, y_l..y_1)`: equal to `J_k + J_l`
/// except that `y_1` maps to `(1 - t) y_2 + t x_1`. `U_0 = J_k + J_l` and
/// `U_1` is similar to `J_{k+1} + J_{l-1}`.
pub fn basic_family(k: usize, l: usize, t: &Scalar) -> Matrix {
    assert!(k < l, "basic family needs k < l");
    let mut u = jordan_sum(&[k, l]);
    let y1 = k + l - 1;
    if l >= 2 {
        u.set(y1 - 1, y1, &Scalar::one() - t);
    }
    if k >= 1 {
        u.set(k - 1, y1, t.clone());
    }
    u
}

/// The basis `(x_k..x_1, (1-t) y_l + t x_{l-1}, .., (1-t) y_2 + t x_1, y_1)`
/// as columns, so that `U_t = R (J_k + J_l) R^-1` for `t` in `(0, 1)`.
pub fn basic_family_similarity(k: usize, l: usize, t: &Scalar) -> Result<Matrix> {
    assert!(k < l, "basic family needs k < l");
    if !(t.is_real() && t.re() > &BigRational::zero() && t.re() < &BigRational::one()) {
        return Err(Error::DegenerateParameter(format!("{t} is not in (0, 1)")));
    }
    let n = k + l;
    let x = |i: usize| k - i; // index of x_i, 1 <= i <= k
    let y = |j: usize| n - j; // index of y_j, 1 <= j <= l
    let one_minus = &Scalar::one() - t;
    let mut r = Matrix::zeros(n, n);
    for i in (1..=k).rev() {
        r.set(x(i), k - i, Scalar::one());
    }
    for j in (2..=l).rev() {
        let col = y(j);
        r.set(y(j), col, one_minus.clone());
        if j - 1 <= k {
            r.set(x(j - 1), col, t.clone());
        }
    }
    r.set(y(1), n - 1, Scalar::one());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jordan_sum, nilpotent_profile};
    use crate::profile::Profile;

    fn t(n: i64, d: i64) -> Scalar {
        Scalar::frac(n, d)
    }

    #[test]
    fn family_endpoints() {
        for (k, l) in [(0, 1), (0, 2), (1, 2), (2, 4), (1, 4), (3, 5)] {
            assert_eq!(basic_family(k, l, &Scalar::zero()), jordan_sum(&[k, l]));
            let end = nilpotent_profile(&basic_family(k, l, &Scalar::one())).unwrap();
            assert_eq!(end, Profile::from_cells(&[k + 1, l - 1]), "k={k} l={l}");
        }
        let u1 = basic_family(2, 4, &Scalar::one());
        assert_eq!(nilpotent_profile(&u1).unwrap(), "3:2".parse().unwrap());
    }

    #[test]
    fn family_with_zero_square() {
        for s in [t(0, 1), t(1, 3), t(1, 2), t(1, 1), t(7, 5)] {
            let u = basic_family(1, 2, &s);
            assert!(u.pow(2).unwrap().is_zero());
        }
    }

    #[test]
    fn similarity_examples() {
        let s = t(1, 2);
        let r = basic_family_similarity(2, 4, &s).unwrap();
        let det = r.det().unwrap();
        assert!(det == t(1, 8) || det == t(-1, 8));
        let lhs = &basic_family(2, 4, &s) * &r;
        assert_eq!(lhs, &r * &jordan_sum(&[2, 4]));

        let r = basic_family_similarity(2, 4, &t(1, 1000)).unwrap();
        for i in 0..6 {
            let expected = if (2..5).contains(&i) { t(999, 1000) } else { t(1, 1) };
            assert_eq!(r.get(i, i), &expected);
        }

        assert!(matches!(basic_family_similarity(2, 4, &Scalar::one()), Err(Error::DegenerateParameter(_))));
        assert!(matches!(basic_family_similarity(2, 4, &Scalar::zero()), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn similarity_identity_holds_across_windows() {
        for (k, l) in [(0, 2), (0, 3), (1, 3), (2, 3), (3, 6), (4, 6)] {
            for s in [t(1, 7), t(1, 2), t(5, 6)] {
                let r = basic_family_similarity(k, l, &s).unwrap();
                let u = basic_family(k, l, &s);
                assert_eq!(&(&r * &jordan_sum(&[k, l])) * &r.inverse().unwrap(), u);
            }
        }
    }
}
