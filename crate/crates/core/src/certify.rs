//! Exact univariate polynomials over `Q(i)`, Sturm root counting, and
//! certification that a polynomial does not vanish along a complex segment.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// Dense polynomial, coefficients in increasing degree. Trailing zeros are
/// trimmed so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatPoly {
    coeffs: Vec<Scalar>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        RatPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        RatPoly::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    fn eval_real(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c.re();
        }
        acc
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Scalar::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        RatPoly::new(out)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics when dividing by the zero polynomial.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    if !d.is_zero() {
                        rem[i + j] -= &(&c * d);
                    }
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => RatPoly::zero(),
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `f(z0 + s * (z1 - z0))` as a polynomial in `s`.
    pub fn compose_linear(&self, z0: &Scalar, z1: &Scalar) -> RatPoly {
        let line = RatPoly::new(vec![z0.clone(), z1 - z0]);
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&line).add(&RatPoly::constant(c.clone()));
        }
        acc
    }

    /// Real and imaginary parts as real-coefficient polynomials, so that
    /// `f(s) = re(s) + i * im(s)` for real `s`.
    pub fn split_parts(&self) -> (RatPoly, RatPoly) {
        let re = self.coeffs.iter().map(|c| Scalar::real(c.re().clone())).collect();
        let im = self.coeffs.iter().map(|c| Scalar::real(c.im().clone())).collect();
        (RatPoly::new(re), RatPoly::new(im))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval_real(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Divides out every factor `(x - root)` from a real polynomial.
fn deflate_root(f: &RatPoly, root: &BigRational) -> RatPoly {
    let lin = RatPoly::new(vec![Scalar::real(-root), Scalar::one()]);
    let mut g = f.clone();
    while !g.is_zero() && g.eval_real(root).is_zero() {
        g = g.div_rem(&lin).0;
    }
    g
}

/// Number of distinct real roots of a real polynomial in the open interval
/// `(lo, hi)`, by Sturm's theorem. Roots sitting exactly on an endpoint are
/// divided out first, which leaves the open-interval count unchanged.
pub fn sturm_root_count(f: &RatPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_real() {
        return Err(Error::Parse("Sturm sequences need real coefficients".into()));
    }
    if lo >= hi {
        return Err(Error::Parse(format!("empty interval ({lo}, {hi})")));
    }
    let g = deflate_root(&deflate_root(f, lo), hi);
    if g.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    let mut seq = vec![g.clone(), g.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        // rescaling by a positive constant keeps every sign
        let lead = r.leading().unwrap().re().abs();
        seq.push(r.scale(&Scalar::real(-lead.recip())));
    }
    Ok(sign_changes(&seq, lo) - sign_changes(&seq, hi))
}

/// Decides exactly whether `f(z0 + s (z1 - z0)) != 0` for every `s` in `[0, 1]`.
///
/// On the segment `f` is a polynomial in the real parameter `s` with complex
/// coefficients; it vanishes at `s` iff its real and imaginary parts do, so the
/// gcd of the two parts is Sturm-counted on `(0, 1)` after checking the ends.
pub fn certify_nonvanishing_segment(f: &RatPoly, z0: &Scalar, z1: &Scalar) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.eval(z0).is_zero() || f.eval(z1).is_zero() {
        return Ok(false);
    }
    if z0 == z1 {
        return Ok(true);
    }
    let g = f.compose_linear(z0, z1);
    let (re, im) = g.split_parts();
    let common = if re.is_zero() {
        im
    } else if im.is_zero() {
        re
    } else {
        re.gcd(&im)
    };
    if common.degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    Ok(sturm_root_count(&common, &BigRational::zero(), &BigRational::one())? == 0)
}

/// Matrix with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<RatPoly>,
}

impl PolyMatrix {
    pub fn get(&self, i: usize, j: usize) -> &RatPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn eval(&self, t: &Scalar) -> Matrix {
        Matrix::from_vec(self.rows, self.cols, self.entries.iter().map(|p| p.eval(t)).collect())
            .expect("shape is consistent")
    }
}

/// Entrywise Lagrange interpolation through `degree_bound + 1` samples with
/// distinct parameters.
pub fn poly_interpolate_entries(samples: &[(Scalar, Matrix)], degree_bound: usize) -> Result<PolyMatrix> {
    if samples.len() != degree_bound + 1 {
        return Err(Error::DuplicateSample(format!(
            "{} samples given, degree bound {degree_bound} needs {}",
            samples.len(),
            degree_bound + 1
        )));
    }
    let (rows, cols) = (samples[0].1.rows(), samples[0].1.cols());
    if samples.iter().any(|(_, m)| m.rows() != rows || m.cols() != cols) {
        return Err(Error::DimensionMismatch("interpolation samples differ in shape".into()));
    }
    for i in 0..samples.len() {
        for j in 0..i {
            if samples[i].0 == samples[j].0 {
                return Err(Error::DuplicateSample(format!("parameter {} repeats", samples[i].0)));
            }
        }
    }
    let params: Vec<Scalar> = samples.iter().map(|(t, _)| t.clone()).collect();
    let entries = (0..rows * cols)
        .map(|idx| {
            let values: Vec<Scalar> = samples.iter().map(|(_, m)| m.entries()[idx].clone()).collect();
            newton_interpolate(&params, values)
        })
        .collect();
    Ok(PolyMatrix { rows, cols, entries })
}

/// Newton divided differences, expanded to monomial coefficients.
fn newton_interpolate(params: &[Scalar], mut coef: Vec<Scalar>) -> RatPoly {
    let n = params.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            if !num.is_zero() {
                coef[i] = &num / &(&params[i] - &params[i - level]);
            } else {
                coef[i] = Scalar::zero();
            }
        }
    }
    // Horner on the Newton form
    let mut acc: Vec<Scalar> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        // acc = acc * (x - params[i]) + coef[i]
        let mut next = vec![Scalar::zero(); acc.len() + 1];
        for (j, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            next[j + 1] += a;
            next[j] -= &(a * &params[i]);
        }
        next[0] += &coef[i];
        acc = next;
    }
    RatPoly::new(acc)
}

/// Interpolates a scalar-valued polynomial of known degree bound from values
/// at `0, 1, ..., degree_bound` shifted and scaled into `[lo, hi]`.
pub fn interpolate_scalar<F>(degree_bound: usize, lo: &Scalar, hi: &Scalar, mut f: F) -> Result<RatPoly>
where
    F: FnMut(&Scalar) -> Result<Scalar>,
{
    let d = Scalar::from_int(degree_bound.max(1) as i64);
    let width = hi - lo;
    let mut samples = Vec::with_capacity(degree_bound + 1);
    for i in 0..=degree_bound {
        let t = lo + &(&width * &(&Scalar::from_int(i as i64) / &d));
        let v = f(&t)?;
        samples.push((t, Matrix::from_vec(1, 1, vec![v])?));
    }
    Ok(poly_interpolate_entries(&samples, degree_bound)?.entries.pop().unwrap())
}
