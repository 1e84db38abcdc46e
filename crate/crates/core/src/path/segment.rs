//! Path segments inside the set of p-th roots: centralizer segments between
//! similar roots and adjacency segments across a p-adjacency move.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lift::{lift_family, LiftedFamily, VerifyMode};
use crate::certify::{certify_nonvanishing_segment, interpolate_scalar, RatPoly};
use crate::error::{Error, Result};
use crate::linalg::{jordan_basis, jordan_sum, similarity_witness, Matrix, Scalar};
use crate::profile::{AdjacencyMove, Direction};

/// Number of detour heights `1/2, 1/3, ..` tried before giving up.
pub const DETOUR_BUDGET: usize = 64;

fn require_power(m: &Matrix, p: usize, a: &Matrix, what: &str) -> Result<()> {
    if m.rows() != a.rows() || m.cols() != a.cols() {
        return Err(Error::DimensionMismatch(format!("{what} and A differ in shape")));
    }
    if &m.pow(p)? != a {
        return Err(Error::PowerMismatch(format!("{what}^{p} != A")));
    }
    Ok(())
}

fn unit_parameter(s: &BigRational) -> Result<()> {
    if s < &BigRational::zero() || s > &BigRational::one() {
        return Err(Error::DegenerateParameter(format!("{s} is not in [0, 1]")));
    }
    Ok(())
}

/// Piece index and local parameter for `s` split uniformly into `pieces`.
fn locate(s: &BigRational, pieces: usize) -> (usize, BigRational) {
    let scaled = s * BigRational::from_integer(pieces.into());
    let floor = scaled.floor().to_integer();
    let idx = usize::try_from(floor).unwrap_or(0).min(pieces - 1);
    let local = scaled - BigRational::from_integer(idx.into());
    (idx, local)
}

/// `s -> Q(w(s)) X Q(w(s))^-1` with `Q(z) = (1 - z) I + z Q` and `w` the
/// piecewise-linear path through the waypoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CentralizerSegment {
    pub base_root: Matrix,
    pub conjugator: Matrix,
    pub waypoints: Vec<Scalar>,
}

/// `(1 - z) I + z Q`.
fn pencil(q: &Matrix, z: &Scalar) -> Matrix {
    let n = q.rows();
    &Matrix::identity(n).scale(&(&Scalar::one() - z)) + &q.scale(z)
}

fn pencil_det(q: &Matrix) -> Result<RatPoly> {
    interpolate_scalar(q.rows(), &Scalar::zero(), &Scalar::one(), |z| pencil(q, z).det())
}

fn certify_pieces(d: &RatPoly, waypoints: &[Scalar]) -> Result<Vec<bool>> {
    waypoints.windows(2).map(|w| certify_nonvanishing_segment(d, &w[0], &w[1])).collect()
}

/// Detour path `0 -> i e -> 1 + i e -> 1` for `e = 1/j`.
fn detour(j: usize) -> Vec<Scalar> {
    let eps = BigRational::new(1.into(), j.into());
    vec![
        Scalar::zero(),
        Scalar::new(BigRational::zero(), eps.clone()),
        Scalar::new(BigRational::one(), eps),
        Scalar::one(),
    ]
}

pub fn centralizer_segment(a: &Matrix, p: usize, x: &Matrix, y: &Matrix) -> Result<CentralizerSegment> {
    require_power(x, p, a, "X")?;
    require_power(y, p, a, "Y")?;
    let q = similarity_witness(x, y)?;
    if &q * a != a * &q {
        return Err(Error::Internal("similarity witness does not commute with A".into()));
    }
    let d = pencil_det(&q)?;
    let direct = vec![Scalar::zero(), Scalar::one()];
    let waypoints = if certify_pieces(&d, &direct)?.iter().all(|&ok| ok) {
        direct
    } else {
        (2..2 + DETOUR_BUDGET)
            .map(detour)
            .find_map(|w| match certify_pieces(&d, &w) {
                Ok(v) if v.iter().all(|&ok| ok) => Some(Ok(w)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            })
            .ok_or(Error::DetourSearchExhausted(DETOUR_BUDGET))??
    };
    Ok(CentralizerSegment { base_root: x.clone(), conjugator: q, waypoints })
}

impl CentralizerSegment {
    pub fn omega(&self, s: &BigRational) -> Result<Scalar> {
        unit_parameter(s)?;
        if self.waypoints.len() < 2 {
            return Err(Error::Internal("detour needs at least two waypoints".into()));
        }
        let (idx, local) = locate(s, self.waypoints.len() - 1);
        let (w0, w1) = (&self.waypoints[idx], &self.waypoints[idx + 1]);
        Ok(w0 + &(&(w1 - w0) * &Scalar::real(local)))
    }

    pub fn eval(&self, s: &BigRational) -> Result<Matrix> {
        let qz = pencil(&self.conjugator, &self.omega(s)?);
        let inv = qz
            .inverse()
            .map_err(|_| Error::Internal(format!("Q(w(s)) singular at s = {s}")))?;
        Ok(&(&qz * &self.base_root) * &inv)
    }

    pub fn start(&self) -> Matrix {
        self.base_root.clone()
    }

    pub fn end(&self) -> Result<Matrix> {
        Ok(&(&self.conjugator * &self.base_root) * &self.conjugator.inverse()?)
    }

    /// Exact structural checks against `A`: `X^p = A`, `Q` invertible and
    /// commuting with `A`, waypoints running from 0 to 1.
    pub fn check_structure(&self, a: &Matrix, p: usize) -> Result<()> {
        require_power(&self.base_root, p, a, "base root")?;
        let q = &self.conjugator;
        if q.rows() != a.rows() || q.cols() != a.cols() {
            return Err(Error::DimensionMismatch("conjugator shape".into()));
        }
        if q.det()?.is_zero() || &(q * a) != &(a * q) {
            return Err(Error::Internal("conjugator is not an invertible centralizer element".into()));
        }
        let w = &self.waypoints;
        if w.len() < 2 || !w[0].is_zero() || !w[w.len() - 1].is_one() {
            return Err(Error::Internal("waypoints must run from 0 to 1".into()));
        }
        Ok(())
    }

    /// Sturm certification of `det Q(z) != 0` on every detour piece.
    pub fn certify(&self) -> Result<Vec<bool>> {
        certify_pieces(&pencil_det(&self.conjugator)?, &self.waypoints)
    }
}

/// `s -> P (B + gamma(s)) P^-1`, with `gamma` run backwards when `reversed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjacencySegment {
    #[serde(rename = "move")]
    pub mv: AdjacencyMove,
    pub reversed: bool,
    pub outer_conjugator: Matrix,
    pub bystander: Matrix,
    #[serde(flatten)]
    pub lift: LiftedFamily,
}

pub fn adjacency_segment(a: &Matrix, p: usize, n: &Matrix, mv: &AdjacencyMove, mode: VerifyMode) -> Result<AdjacencySegment> {
    require_power(n, p, a, "N")?;
    mv.check_window(p)?;
    let (k, l) = (mv.k, mv.l);
    let (c1, c2) = mv.consumed();
    let decomposition = jordan_basis(n)?;
    let ordered = decomposition.with_trailing_cells(&[c1, c2]).ok_or_else(|| {
        Error::MissingCells(format!("profile {} lacks cells {c1} and {c2}", decomposition.profile()))
    })?;
    let trailing = usize::from(c1 > 0) + usize::from(c2 > 0);
    let rest = &ordered.cell_sizes[..ordered.cell_sizes.len() - trailing];
    let bystander = jordan_sum(rest);
    let lift = lift_family(k, l, p, mode)?;
    let (outer, reversed) = match mv.direction {
        Direction::Forward => (ordered.conjugator, false),
        Direction::Backward => {
            let end = lift.gamma(&Scalar::one())?;
            let t = similarity_witness(&jordan_sum(&[c1, c2]), &end)?;
            let fix = Matrix::direct_sum(&[Matrix::identity(bystander.rows()), t.inverse()?]);
            (&ordered.conjugator * &fix, true)
        }
    };
    let segment = AdjacencySegment { mv: *mv, reversed, outer_conjugator: outer, bystander, lift };
    if &segment.start()? != n {
        return Err(Error::Internal("adjacency segment does not start at N".into()));
    }
    Ok(segment)
}

impl AdjacencySegment {
    fn family_parameter(&self, s: &BigRational) -> Result<Scalar> {
        unit_parameter(s)?;
        Ok(Scalar::real(if self.reversed { BigRational::one() - s } else { s.clone() }))
    }

    pub fn eval(&self, s: &BigRational) -> Result<Matrix> {
        let gamma = self.lift.gamma(&self.family_parameter(s)?)?;
        let inner = Matrix::direct_sum(&[self.bystander.clone(), gamma]);
        Ok(&(&self.outer_conjugator * &inner) * &self.outer_conjugator.inverse()?)
    }

    pub fn start(&self) -> Result<Matrix> {
        self.eval(&BigRational::zero())
    }

    pub fn end(&self) -> Result<Matrix> {
        self.eval(&BigRational::one())
    }

    /// Exact structural checks: the move matches the lifted cells,
    /// `P (B^p + A0) P^-1 = A`, and the lift passes its own checks.
    pub fn check_structure(&self, a: &Matrix, p: usize) -> Result<()> {
        self.mv.check_window(p)?;
        if (self.mv.k, self.mv.l, p) != (self.lift.k, self.lift.l, self.lift.p) {
            return Err(Error::Internal("move and lifted family disagree".into()));
        }
        if self.reversed != (self.mv.direction == Direction::Backward) {
            return Err(Error::Internal("reversal flag disagrees with the move direction".into()));
        }
        let dim = self.bystander.rows() + self.lift.dim();
        let outer = &self.outer_conjugator;
        if outer.rows() != dim || outer.cols() != dim || a.rows() != dim {
            return Err(Error::DimensionMismatch("adjacency segment blocks do not fill A".into()));
        }
        let power = Matrix::direct_sum(&[self.bystander.pow(p)?, self.lift.base()]);
        if &(&(outer * &power) * &outer.inverse()?) != a {
            return Err(Error::Internal("P (B^p + A0) P^-1 != A".into()));
        }
        self.lift.check_structure()
    }

    pub fn certify(&self) -> Result<Vec<bool>> {
        self.lift.certify_intervals()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathSegment {
    Centralizer(CentralizerSegment),
    Adjacency(AdjacencySegment),
}

impl PathSegment {
    pub fn kind(&self) -> &'static str {
        match self {
            PathSegment::Centralizer(_) => "centralizer",
            PathSegment::Adjacency(_) => "adjacency",
        }
    }

    pub fn eval(&self, s: &BigRational) -> Result<Matrix> {
        match self {
            PathSegment::Centralizer(c) => c.eval(s),
            PathSegment::Adjacency(c) => c.eval(s),
        }
    }

    pub fn start(&self) -> Result<Matrix> {
        match self {
            PathSegment::Centralizer(c) => Ok(c.start()),
            PathSegment::Adjacency(c) => c.start(),
        }
    }

    pub fn end(&self) -> Result<Matrix> {
        match self {
            PathSegment::Centralizer(c) => c.end(),
            PathSegment::Adjacency(c) => c.end(),
        }
    }

    pub fn check_structure(&self, a: &Matrix, p: usize) -> Result<()> {
        match self {
            PathSegment::Centralizer(c) => c.check_structure(a, p),
            PathSegment::Adjacency(c) => c.check_structure(a, p),
        }
    }

    /// Per-piece (detour piece or lift interval) Sturm results.
    pub fn certify(&self) -> Result<Vec<bool>> {
        match self {
            PathSegment::Centralizer(c) => c.certify(),
            PathSegment::Adjacency(c) => c.certify(),
        }
    }
}
