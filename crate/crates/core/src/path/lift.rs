//! Lifting the family `U_t^p` through the conjugation map: conjugators
//! `q(t)` with `U_t^p = q(t) A0 q(t)^-1`, so that `gamma(t) = q^-1 U_t q` has
//! constant p-th power `A0 = (J_k + J_l)^p`.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::family::basic_family;
use super::section::{conjugation_section, ConjugationSection};
use crate::certify::{certify_nonvanishing_segment, interpolate_scalar, poly_interpolate_entries};
use crate::error::{Error, Result};
use crate::linalg::{jordan_sum, similarity_witness, Matrix, Scalar};

pub const INITIAL_INTERVALS: usize = 4;
pub const MAX_BISECTION_DEPTH: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    #[default]
    Sampled,
    Certified,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sampled" => Ok(VerifyMode::Sampled),
            "certified" => Ok(VerifyMode::Certified),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

/// The `a` with `p a <= k < l <= p (a + 1)`.
pub fn lift_window(k: usize, l: usize, p: usize) -> Result<usize> {
    let violation = Error::WindowViolation { k, l, p };
    if p == 0 || k >= l {
        return Err(violation);
    }
    let a = k / p;
    if l <= p * (a + 1) {
        Ok(a)
    } else {
        Err(violation)
    }
}

/// Chart of the lift on one interval: `q(t) = h g(h^-1 U_t^p h) c`, where `h`
/// conjugates `A0` to `U_s^p` at the anchor `s` and `c` commutes with `A0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftChart {
    pub anchor: Scalar,
    pub anchor_conjugator: Matrix,
    pub right_factor: Matrix,
}

/// Piecewise lift of `t -> U_t^p` on `[0, 1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftedFamily {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    /// `0 = t_0 < .. < t_N = 1`.
    pub partition: Vec<Scalar>,
    /// `q(t_i)`, starting from the identity.
    pub lift_conjugators: Vec<Matrix>,
    /// One chart per interval.
    pub charts: Vec<LiftChart>,
    #[serde(skip)]
    section: OnceLock<ConjugationSection>,
}

impl PartialEq for LiftedFamily {
    fn eq(&self, other: &Self) -> bool {
        (self.k, self.l, self.p) == (other.k, other.l, other.p)
            && self.partition == other.partition
            && self.lift_conjugators == other.lift_conjugators
            && self.charts == other.charts
    }
}

impl Eq for LiftedFamily {}

fn half(a: &Scalar, b: &Scalar) -> Scalar {
    &(a + b) / &Scalar::from_int(2)
}

fn ordered<'a>(a: &'a Scalar, b: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
    if a.re() <= b.re() {
        (a, b)
    } else {
        (b, a)
    }
}

struct LiftContext<'a> {
    k: usize,
    l: usize,
    p: usize,
    section: &'a ConjugationSection,
}

/// One accepted interval of a lift run, walked from `from` to `to`.
struct Step {
    from: Scalar,
    to: Scalar,
    h: Matrix,
    q_to: Matrix,
}

impl LiftContext<'_> {
    fn family_power(&self, t: &Scalar) -> Matrix {
        basic_family(self.k, self.l, t).pow(self.p).expect("square")
    }

    fn pulled_back(&self, h_inv: &Matrix, h: &Matrix, t: &Scalar) -> Matrix {
        &(h_inv * &self.family_power(t)) * h
    }

    /// Degree of `t -> U_t^p` (entries are polynomials of degree at most `p`).
    fn power_degree(&self) -> Result<usize> {
        let samples: Vec<(Scalar, Matrix)> = (0..=self.p)
            .map(|i| {
                let t = Scalar::from_int(i as i64);
                let m = self.family_power(&t);
                (t, m)
            })
            .collect();
        let poly = poly_interpolate_entries(&samples, self.p)?;
        Ok(poly.entries.iter().filter_map(|e| e.degree()).max().unwrap_or(0))
    }

    /// Sturm-certifies that the chart anchored at `h` stays valid between
    /// `a` and `b`: the `A`-block determinant and `det(det A * g)` do not vanish.
    fn certify(&self, h: &Matrix, h_inv: &Matrix, a: &Scalar, b: &Scalar) -> Result<bool> {
        let (lo, hi) = ordered(a, b);
        let e = self.power_degree()?;
        let r = self.section.data.rank;
        let n = self.section.n();
        if r == 0 || e == 0 {
            return Ok(true);
        }
        let det_a = interpolate_scalar(r * e, lo, hi, |t| Ok(self.section.block_det(&self.pulled_back(h_inv, h, t))))?;
        if det_a.is_zero() || !certify_nonvanishing_segment(&det_a, lo, hi)? {
            return Ok(false);
        }
        let det_g = interpolate_scalar(n * r * e, lo, hi, |t| {
            let scale = det_a.eval(t);
            let g = self.section.raw(&self.pulled_back(h_inv, h, t))?;
            Ok(g.scale(&scale).det()?)
        })?;
        if det_g.is_zero() {
            return Ok(false);
        }
        certify_nonvanishing_segment(&det_g, lo, hi)
    }

    fn chart_value(&self, h: &Matrix, h_inv: &Matrix, t: &Scalar) -> Result<Matrix> {
        Ok(h * &self.section.eval(&self.pulled_back(h_inv, h, t))?)
    }

    /// `q(to)` if the chart anchored at `from` with conjugator `h` is accepted.
    fn try_interval(&self, h: &Matrix, from: &Scalar, to: &Scalar, mode: VerifyMode) -> Result<Option<Matrix>> {
        let h_inv = h.inverse()?;
        let at = |t: &Scalar| match self.chart_value(h, &h_inv, t) {
            Ok(q) => Ok(Some(q)),
            Err(Error::OutsideNeighborhood(_)) => Ok(None),
            Err(e) => Err(e),
        };
        if at(&half(from, to))?.is_none() {
            return Ok(None);
        }
        let Some(q_to) = at(to)? else {
            return Ok(None);
        };
        if mode == VerifyMode::Certified && !self.certify(h, &h_inv, from, to)? {
            return Ok(None);
        }
        Ok(Some(q_to))
    }

    /// Walks the intervals `(from, to)` in order starting from `q(start) = h`,
    /// bisecting rejected intervals.
    fn run(&self, h: Matrix, intervals: Vec<(Scalar, Scalar)>, mode: VerifyMode) -> Result<Vec<Step>> {
        let mut steps: Vec<Step> = Vec::new();
        let mut current = h;
        let mut stack: Vec<(Scalar, Scalar, usize)> = intervals.into_iter().rev().map(|(a, b)| (a, b, 0)).collect();
        while let Some((from, to, depth)) = stack.pop() {
            match self.try_interval(&current, &from, &to, mode)? {
                Some(q_to) => {
                    let h = std::mem::replace(&mut current, q_to.clone());
                    steps.push(Step { from, to, h, q_to });
                }
                None if depth >= MAX_BISECTION_DEPTH => return Err(Error::LiftDepthExceeded(depth)),
                None => {
                    let mid = half(&from, &to);
                    stack.push((mid.clone(), to, depth + 1));
                    stack.push((from, mid, depth + 1));
                }
            }
        }
        Ok(steps)
    }
}

/// Builds the lift with adaptive partitions: charts anchored at `t = 0`
/// (from the identity) cover `[0, 1/2]`, charts anchored at `t = 1` (from a
/// similarity witness) cover `[1/2, 1]`, and the second half is right-multiplied
/// by a centralizer element so both halves agree at `1/2`. Each half starts
/// from 2 uniform intervals, bisected while the section fails at an interval's
/// midpoint or far end (or, in certified mode, its validity determinants are
/// not certified).
pub fn lift_family(k: usize, l: usize, p: usize, mode: VerifyMode) -> Result<LiftedFamily> {
    lift_window(k, l, p)?;
    let a0 = jordan_sum(&[k, l]).pow(p)?;
    let section = conjugation_section(&a0)?;
    let ctx = LiftContext { k, l, p, section: &section };
    let n = k + l;

    let step = Scalar::frac(1, INITIAL_INTERVALS as i64);
    let grid: Vec<Scalar> = (0..=INITIAL_INTERVALS).map(|i| &step * &Scalar::from_int(i as i64)).collect();
    let mid = INITIAL_INTERVALS / 2;
    let forward_intervals = (0..mid).map(|i| (grid[i].clone(), grid[i + 1].clone())).collect();
    let backward_intervals =
        (mid..INITIAL_INTERVALS).rev().map(|i| (grid[i + 1].clone(), grid[i].clone())).collect();

    let forward = ctx.run(Matrix::identity(n), forward_intervals, mode)?;
    let end = ctx.family_power(&Scalar::one());
    let witness = similarity_witness(&a0, &end)?;
    let backward = ctx.run(witness.clone(), backward_intervals, mode)?;

    let q_mid_forward = &forward.last().expect("nonempty").q_to;
    let q_mid_backward = &backward.last().expect("nonempty").q_to;
    let glue = &q_mid_backward.inverse()? * q_mid_forward;

    let mut partition = vec![Scalar::zero()];
    let mut conjugators = vec![Matrix::identity(n)];
    let mut charts = Vec::new();
    for s in forward {
        partition.push(s.to);
        conjugators.push(s.q_to);
        charts.push(LiftChart { anchor: s.from, anchor_conjugator: s.h, right_factor: Matrix::identity(n) });
    }
    for s in backward.into_iter().rev() {
        partition.push(s.from.clone());
        conjugators.push(&s.h * &glue);
        charts.push(LiftChart { anchor: s.from, anchor_conjugator: s.h, right_factor: glue.clone() });
    }
    let lift = LiftedFamily { k, l, p, partition, lift_conjugators: conjugators, charts, section: OnceLock::new() };
    let _ = lift.section.set(section);
    Ok(lift)
}
impl LiftedFamily {
    pub fn dim(&self) -> usize {
        self.k + self.l
    }

    pub fn base(&self) -> Matrix {
        jordan_sum(&[self.k, self.l]).pow(self.p).expect("square")
    }

    pub fn section(&self) -> Result<&ConjugationSection> {
        if let Some(s) = self.section.get() {
            return Ok(s);
        }
        let s = conjugation_section(&self.base())?;
        Ok(self.section.get_or_init(|| s))
    }

    fn context(&self) -> Result<LiftContext<'_>> {
        Ok(LiftContext { k: self.k, l: self.l, p: self.p, section: self.section()? })
    }

    fn interval_of(&self, t: &Scalar) -> usize {
        let last = self.partition.len() - 2;
        (0..=last).rev().find(|&i| self.partition[i].re() <= t.re()).unwrap_or(0)
    }

    fn require_unit(t: &Scalar) -> Result<()> {
        if !t.is_real() || t.re() < &BigRational::zero() || t.re() > &BigRational::one() {
            return Err(Error::DegenerateParameter(format!("{t} is not in [0, 1]")));
        }
        Ok(())
    }

    fn chart_at(&self, ctx: &LiftContext<'_>, chart: &LiftChart, t: &Scalar) -> Result<Matrix> {
        let h = &chart.anchor_conjugator;
        Ok(&ctx.chart_value(h, &h.inverse()?, t)? * &chart.right_factor)
    }

    /// `q(t)`, read off the chart of the interval containing `t`.
    pub fn conjugator_at(&self, t: &Scalar) -> Result<Matrix> {
        Self::require_unit(t)?;
        let i = self.interval_of(t);
        if &self.partition[i] == t {
            return Ok(self.lift_conjugators[i].clone());
        }
        if &self.partition[i + 1] == t {
            return Ok(self.lift_conjugators[i + 1].clone());
        }
        self.chart_at(&self.context()?, &self.charts[i], t)
    }

    /// `gamma(t) = q(t)^-1 U_t q(t)`.
    pub fn gamma(&self, t: &Scalar) -> Result<Matrix> {
        let q = self.conjugator_at(t)?;
        Ok(&(&q.inverse()? * &basic_family(self.k, self.l, t)) * &q)
    }

    /// Exact structural checks: the partition runs from 0 to 1 increasingly,
    /// `q(t_0) = I`, `U_{t_i}^p q(t_i) = q(t_i) A0` with `q(t_i)` invertible,
    /// every chart is anchored at an end of its interval with a valid anchor
    /// conjugator and a right factor commuting with `A0`, and every chart
    /// reproduces `q` at both ends of its interval.
    pub fn check_structure(&self) -> Result<()> {
        lift_window(self.k, self.l, self.p)?;
        let bad = |msg: String| Err(Error::Internal(msg));
        let count = self.partition.len();
        if count < 2 || count != self.lift_conjugators.len() || count != self.charts.len() + 1 {
            return bad("lift partition, conjugators and charts disagree in length".into());
        }
        if !self.partition[0].is_zero() || !self.partition[count - 1].is_one() {
            return bad("lift partition must run from 0 to 1".into());
        }
        if self.partition.iter().any(|t| !t.is_real())
            || self.partition.windows(2).any(|w| w[0].re() >= w[1].re())
        {
            return bad("lift partition is not increasing".into());
        }
        if !self.lift_conjugators[0].is_identity() {
            return bad("q(t_0) is not the identity".into());
        }
        let a0 = self.base();
        let n = self.dim();
        let conjugates = |t: &Scalar, q: &Matrix| -> Result<bool> {
            if q.rows() != n || q.cols() != n {
                return Err(Error::DimensionMismatch("lift conjugator shape".into()));
            }
            let u = basic_family(self.k, self.l, t).pow(self.p)?;
            Ok(&u * q == q * &a0 && !q.det()?.is_zero())
        };
        for (t, q) in self.partition.iter().zip(&self.lift_conjugators) {
            if !conjugates(t, q)? {
                return bad(format!("U_t^p != q A0 q^-1 at t = {t}"));
            }
        }
        let ctx = self.context()?;
        for (i, chart) in self.charts.iter().enumerate() {
            if chart.anchor != self.partition[i] && chart.anchor != self.partition[i + 1] {
                return bad(format!("chart {i} is not anchored at an end of its interval"));
            }
            if !conjugates(&chart.anchor, &chart.anchor_conjugator)? {
                return bad(format!("chart {i} has an invalid anchor conjugator"));
            }
            let c = &chart.right_factor;
            if c.rows() != n || c.cols() != n || &a0 * c != c * &a0 || c.det()?.is_zero() {
                return bad(format!("chart {i} right factor is not an invertible centralizer element"));
            }
            for j in [i, i + 1] {
                if self.chart_at(&ctx, chart, &self.partition[j])? != self.lift_conjugators[j] {
                    return bad(format!("chart {i} disagrees with q at t = {}", self.partition[j]));
                }
            }
        }
        Ok(())
    }

    /// Sturm certification of chart validity on every interval.
    pub fn certify_intervals(&self) -> Result<Vec<bool>> {
        let ctx = self.context()?;
        self.partition
            .windows(2)
            .zip(&self.charts)
            .map(|(w, chart)| {
                let h = &chart.anchor_conjugator;
                ctx.certify(h, &h.inverse()?, &w[0], &w[1])
            })
            .collect()
    }
}
