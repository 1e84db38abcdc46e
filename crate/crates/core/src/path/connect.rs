//! Full paths between two p-th roots of the same nilpotent matrix, their exact
//! evaluation, and certificates.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lift::VerifyMode;
use super::segment::{adjacency_segment, centralizer_segment, PathSegment};
use crate::criteria::find_root_profile;
use crate::error::{Error, Result};
use crate::graph::profile_chain;
use crate::linalg::{jordan_model, nilpotent_profile, similarity_witness, Matrix, Scalar};
use crate::profile::{enumerate_preimages, profile_power, Profile, DEFAULT_SIZE_CAP};

/// A matrix `X` with `X^p = m`, optionally with a prescribed root profile.
/// `Ok(None)` when `m` has no p-th root (with that profile).
pub fn construct_root(m: &Matrix, p: usize, requested: Option<&Profile>, cap: usize) -> Result<Option<Matrix>> {
    let target = nilpotent_profile(m)?;
    if !m.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    let root_profile = match requested {
        Some(r) => {
            if r.size() != m.rows() {
                return Err(Error::DimensionMismatch(format!("profile {r} has size {}, matrix is {}", r.size(), m.rows())));
            }
            if profile_power(r, p) != target {
                return Ok(None);
            }
            r.clone()
        }
        None => match find_root_profile(&target, p, cap)? {
            Some(r) => r,
            None => return Ok(None),
        },
    };
    let model = jordan_model(&root_profile);
    let s = similarity_witness(&model.pow(p)?, m)?;
    let x = &(&s * &model) * &s.inverse()?;
    if &x.pow(p)? != m {
        return Err(Error::Internal("constructed root does not power to M".into()));
    }
    Ok(Some(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoints {
    #[serde(rename = "X")]
    pub x: Matrix,
    #[serde(rename = "Y")]
    pub y: Matrix,
}

/// Concatenation of segments, each run over an equal share of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootPath {
    #[serde(rename = "A")]
    pub a: Matrix,
    pub p: usize,
    pub segments: Vec<PathSegment>,
    pub endpoints: Endpoints,
}

fn require_nilpotent_target(a: &Matrix) -> Result<()> {
    a.require_square()?;
    if !a.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    Ok(())
}

fn require_root(m: &Matrix, a: &Matrix, p: usize, what: &str) -> Result<()> {
    if m.rows() != a.rows() || m.cols() != a.cols() {
        return Err(Error::DimensionMismatch(format!("{what} and A differ in shape")));
    }
    if &m.pow(p)? != a {
        return Err(Error::PowerMismatch(format!("{what}^{p} != A")));
    }
    Ok(())
}

pub fn connect_roots(a: &Matrix, p: usize, x: &Matrix, y: &Matrix, mode: VerifyMode) -> Result<RootPath> {
    require_nilpotent_target(a)?;
    require_root(x, a, p, "X")?;
    require_root(y, a, p, "Y")?;
    let mut segments = Vec::new();
    if x != y {
        let chain = profile_chain(&nilpotent_profile(x)?, &nilpotent_profile(y)?, p)?;
        let mut current = x.clone();
        for mv in &chain.moves {
            let seg = adjacency_segment(a, p, &current, mv, mode)?;
            current = seg.end()?;
            segments.push(PathSegment::Adjacency(seg));
        }
        segments.push(PathSegment::Centralizer(centralizer_segment(a, p, &current, y)?));
    } else {
        segments.push(PathSegment::Centralizer(centralizer_segment(a, p, x, y)?));
    }
    let path = RootPath { a: a.clone(), p, segments, endpoints: Endpoints { x: x.clone(), y: y.clone() } };
    path.check_stitching()?;
    Ok(path)
}

fn locate(t: &BigRational, pieces: usize) -> (usize, BigRational) {
    let scaled = t * BigRational::from_integer(pieces.into());
    let idx = usize::try_from(scaled.floor().to_integer()).unwrap_or(0).min(pieces - 1);
    let local = scaled - BigRational::from_integer(idx.into());
    (idx, local)
}

impl RootPath {
    pub fn evaluate(&self, t: &BigRational) -> Result<Matrix> {
        if t < &BigRational::zero() || t > &BigRational::one() {
            return Err(Error::DegenerateParameter(format!("{t} is not in [0, 1]")));
        }
        if self.segments.is_empty() {
            return Err(Error::Internal("path has no segments".into()));
        }
        let (idx, local) = locate(t, self.segments.len());
        self.segments[idx].eval(&local)
    }

    /// Exact checks that the path starts at `X`, ends at `Y`, and consecutive
    /// segments meet.
    pub fn check_stitching(&self) -> Result<()> {
        let first = self.segments.first().ok_or_else(|| Error::Internal("path has no segments".into()))?;
        if first.start()? != self.endpoints.x {
            return Err(Error::Internal("path does not start at X".into()));
        }
        for (i, w) in self.segments.windows(2).enumerate() {
            if w[0].end()? != w[1].start()? {
                return Err(Error::Internal(format!("segments {i} and {} do not meet", i + 1)));
            }
        }
        if self.segments.last().unwrap().end()? != self.endpoints.y {
            return Err(Error::Internal("path does not end at Y".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleRecord {
    pub t: Scalar,
    pub residual_zero: bool,
    pub profile: Option<Profile>,
    /// The profile is that of some p-th root of `A`.
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SegmentCertification {
    pub index: usize,
    pub kind: String,
    /// Exact structural checks (commutation, lift identities, stitching).
    pub structural: bool,
    /// Sturm certification of every piece; absent in sampled mode.
    pub certified: Option<bool>,
    pub pieces: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub mode: VerifyMode,
    pub samples: Vec<SampleRecord>,
    pub segment_certifications: Vec<SegmentCertification>,
    pub endpoints_exact: bool,
    pub ok: bool,
}

fn certify_segment(path: &RootPath, index: usize, mode: VerifyMode) -> SegmentCertification {
    let seg = &path.segments[index];
    let mut detail = None;
    let mut structural = match seg.check_structure(&path.a, path.p) {
        Ok(()) => true,
        Err(e) => {
            detail = Some(e.to_string());
            false
        }
    };
    if structural {
        let meets_next = match path.segments.get(index + 1) {
            Some(next) => seg.end().and_then(|e| next.start().map(|s| e == s)),
            None => seg.end().map(|e| e == path.endpoints.y),
        };
        if !matches!(meets_next, Ok(true)) {
            structural = false;
            detail = Some(format!("segment {index} does not meet its successor"));
        }
    }
    let (certified, pieces) = match mode {
        VerifyMode::Sampled => (None, 0),
        VerifyMode::Certified if !structural => (Some(false), 0),
        VerifyMode::Certified => match seg.certify() {
            Ok(results) => (Some(results.iter().all(|&b| b)), results.len()),
            Err(e) => {
                detail = Some(e.to_string());
                (Some(false), 0)
            }
        },
    };
    SegmentCertification { index, kind: seg.kind().to_string(), structural, certified, pieces, detail }
}

/// Checks `evaluate(t)^p = A` exactly at `t = i / samples`, records each
/// sample's profile and whether it is an admissible root profile, and checks
/// every segment.
pub fn verify(path: &RootPath, samples: usize, mode: VerifyMode) -> Result<Certificate> {
    verify_with_cap(path, samples, mode, DEFAULT_SIZE_CAP)
}

pub fn verify_with_cap(path: &RootPath, samples: usize, mode: VerifyMode, cap: usize) -> Result<Certificate> {
    if samples == 0 {
        return Err(Error::Parse("sample count must be positive".into()));
    }
    require_nilpotent_target(&path.a)?;
    let admissible: BTreeSet<Profile> =
        enumerate_preimages(&nilpotent_profile(&path.a)?, path.p, cap)?.into_iter().collect();
    let records = (0..=samples)
        .map(|i| {
            let t = BigRational::new(i.into(), samples.into());
            let record = |residual_zero, profile: Option<Profile>, error| SampleRecord {
                t: Scalar::real(t.clone()),
                residual_zero,
                admissible: profile.as_ref().is_some_and(|m| admissible.contains(m)),
                profile,
                error,
            };
            match path.evaluate(&t) {
                Ok(m) => {
                    let residual_zero = m.pow(path.p).is_ok_and(|mp| mp == path.a);
                    record(residual_zero, nilpotent_profile(&m).ok(), None)
                }
                Err(e) => record(false, None, Some(e.to_string())),
            }
        })
        .collect::<Vec<_>>();
    let segment_certifications: Vec<SegmentCertification> =
        (0..path.segments.len()).map(|i| certify_segment(path, i, mode)).collect();
    let endpoints_exact = !path.segments.is_empty()
        && path.evaluate(&BigRational::zero()).is_ok_and(|m| m == path.endpoints.x)
        && path.evaluate(&BigRational::one()).is_ok_and(|m| m == path.endpoints.y);
    let ok = endpoints_exact
        && records.iter().all(|r| r.residual_zero && r.admissible)
        && segment_certifications.iter().all(|c| c.structural && c.certified != Some(false));
    Ok(Certificate { mode, samples: records, segment_certifications, endpoints_exact, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jordan_cell, jordan_sum};

    fn pr(s: &str) -> Profile {
        s.parse().unwrap()
    }

    #[test]
    fn constructs_roots() {
        let m = jordan_sum(&[2, 2, 1, 1]);
        let x = construct_root(&m, 2, None, 24).unwrap().unwrap();
        assert_eq!(x.pow(2).unwrap(), m);
        let y = construct_root(&m, 2, Some(&pr("3:2")), 24).unwrap().unwrap();
        assert_eq!(y.pow(2).unwrap(), m);
        assert_eq!(nilpotent_profile(&y).unwrap(), pr("3:2"));
        assert_eq!(construct_root(&jordan_cell(2), 2, None, 24).unwrap(), None);
        assert_eq!(construct_root(&m, 2, Some(&pr("5:1,1:1")), 24).unwrap(), None);
        assert_eq!(construct_root(&Matrix::identity(2), 2, None, 24), Err(Error::NotNilpotent));
    }

    #[test]
    fn same_endpoints_give_constant_path() {
        let x = jordan_sum(&[3, 1]);
        let a = x.pow(2).unwrap();
        let path = connect_roots(&a, 2, &x, &x, VerifyMode::Sampled).unwrap();
        assert_eq!(path.segments.len(), 1);
        let cert = verify(&path, 10, VerifyMode::Sampled).unwrap();
        assert!(cert.ok);
    }

    #[test]
    fn zero_target_crosses_profiles() {
        let a = Matrix::zeros(2, 2);
        let path = connect_roots(&a, 2, &a, &jordan_cell(2), VerifyMode::Sampled).unwrap();
        assert_eq!(path.evaluate(&BigRational::zero()).unwrap(), a);
        assert_eq!(path.evaluate(&BigRational::one()).unwrap(), jordan_cell(2));
        let cert = verify(&path, 24, VerifyMode::Certified).unwrap();
        assert!(cert.ok, "{cert:?}");
        for s in &cert.samples {
            let m = s.profile.as_ref().unwrap();
            assert!(*m == pr("1:2") || *m == pr("2:1"));
        }
    }

    #[test]
    fn two_cell_example_sampled() {
        let x = jordan_sum(&[4, 2]);
        let a = x.pow(2).unwrap();
        let y = construct_root(&a, 2, Some(&pr("3:2")), 24).unwrap().unwrap();
        let path = connect_roots(&a, 2, &x, &y, VerifyMode::Sampled).unwrap();
        let kinds: Vec<&str> = path.segments.iter().map(PathSegment::kind).collect();
        assert_eq!(kinds, ["adjacency", "centralizer"]);
        let cert = verify(&path, 20, VerifyMode::Sampled).unwrap();
        assert!(cert.ok);

        let json = serde_json::to_string(&path).unwrap();
        let back: RootPath = serde_json::from_str(&json).unwrap();
        assert_eq!(back, path);
        let t = BigRational::new(3.into(), 7.into());
        assert_eq!(back.evaluate(&t).unwrap(), path.evaluate(&t).unwrap());
    }

    #[test]
    fn mismatched_roots_rejected() {
        let x = jordan_sum(&[4, 2]);
        let a = x.pow(2).unwrap();
        assert!(matches!(
            connect_roots(&a, 2, &x, &jordan_sum(&[3, 3]), VerifyMode::Sampled),
            Err(Error::PowerMismatch(_))
        ));
        assert!(matches!(
            connect_roots(&Matrix::identity(2), 2, &Matrix::identity(2), &Matrix::identity(2), VerifyMode::Sampled),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn tampered_path_fails_verification() {
        let x = jordan_sum(&[2, 1]);
        let a = x.pow(2).unwrap();
        let mut path = connect_roots(&a, 2, &x, &x, VerifyMode::Sampled).unwrap();
        path.endpoints.y = jordan_sum(&[1, 2]);
        let cert = verify(&path, 4, VerifyMode::Sampled).unwrap();
        assert!(!cert.ok);
        assert!(!cert.endpoints_exact);
    }
}
