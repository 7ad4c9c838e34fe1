//! Closed paths in SO(3) and their lift to the unit quaternions.
//!
//! A [`RotationPath`] is piecewise geodesic: a list of axis-angle segments
//! executed one after another about space-fixed axes, so the rotation at the
//! end of segment `k` is `R_k ⋯ R_1`. The quaternion lift of such a path ends
//! at `±1` when the path is closed, and the sign is its homotopy class.

use nalgebra::{Matrix3, Quaternion, Rotation3, Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::HomotopyClass;

pub type Vec3 = Vector3<f64>;

/// Default closure tolerance on the rotation matrix entries.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Distance from `±1` within which the lift endpoint is accepted.
pub const POLE_TOL: f64 = 1e-6;
const AXIS_EPS: f64 = 1e-9;
/// Parameter share of a zero-angle segment, relative to the total angle.
const ZERO_SHARE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub axis: Unit<Vec3>,
    pub angle: f64,
}

impl Segment {
    pub fn rotation(&self, fraction: f64) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&self.axis, fraction * self.angle)
    }

    /// The half-angle quaternion `(cos θ/2, sin θ/2 · axis)`, without any
    /// sign normalization.
    pub fn half_angle_quaternion(&self) -> Quaternion<f64> {
        let (s, c) = (self.angle / 2.0).sin_cos();
        let a = self.axis.into_inner() * s;
        Quaternion::new(c, a.x, a.y, a.z)
    }
}

/// A path `ω(t), t ∈ [0, 1]` in SO(3) with `ω(0) = I`.
#[derive(Clone, Debug)]
pub struct RotationPath {
    segments: Vec<Segment>,
    /// End time of each segment; the last one is 1.
    breaks: Vec<f64>,
    /// `prefix[k]` is the rotation when segment `k` starts.
    prefix: Vec<Rotation3<f64>>,
}

impl PartialEq for RotationPath {
    fn eq(&self, other: &Self) -> bool {
        self.segments == other.segments && self.breaks == other.breaks
    }
}

fn default_breaks(segments: &[Segment]) -> Vec<f64> {
    let total: f64 = segments.iter().map(|s| s.angle.abs()).sum();
    let weights: Vec<f64> = segments
        .iter()
        .map(|s| {
            if total == 0.0 {
                1.0
            } else if s.angle == 0.0 {
                total * ZERO_SHARE
            } else {
                s.angle.abs()
            }
        })
        .collect();
    let sum: f64 = weights.iter().sum();
    let mut acc = 0.0;
    let mut breaks: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w;
            acc / sum
        })
        .collect();
    if let Some(last) = breaks.last_mut() {
        *last = 1.0;
    }
    breaks
}

impl RotationPath {
    /// Builds a path from `(axis, angle)` pairs. Axes are normalized; a
    /// near-zero axis is only accepted on a zero-angle segment.
    pub fn from_segments(raw: &[([f64; 3], f64)]) -> Result<Self> {
        let segments = raw
            .iter()
            .enumerate()
            .map(|(k, &(axis, angle))| {
                let v = Vec3::from(axis);
                if !angle.is_finite() || v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidArgument(format!("segment {k} is not finite")));
                }
                if v.norm() <= AXIS_EPS {
                    if angle != 0.0 {
                        return Err(Error::ZeroAxis { segment: k });
                    }
                    return Ok(Segment {
                        axis: Vec3::z_axis(),
                        angle,
                    });
                }
                Ok(Segment {
                    axis: Unit::new_normalize(v),
                    angle,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(segments, None))
    }

    pub fn constant() -> Self {
        Self::build(Vec::new(), None)
    }

    pub fn from_unit_segments(segments: Vec<Segment>) -> Self {
        Self::build(segments, None)
    }

    /// A path whose segment `k` ends at time `breaks[k]`.
    pub fn with_breaks(segments: Vec<Segment>, breaks: Vec<f64>) -> Result<Self> {
        if breaks.len() != segments.len() {
            return Err(Error::InvalidArgument(
                "one break per segment required".into(),
            ));
        }
        let mut prev = 0.0;
        for &b in &breaks {
            if b.is_nan() || b < prev || b > 1.0 {
                return Err(Error::InvalidArgument(
                    "breaks must be nondecreasing in [0, 1]".into(),
                ));
            }
            prev = b;
        }
        if !breaks.is_empty() && (prev - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("last break must be 1".into()));
        }
        Ok(Self::build(segments, Some(breaks)))
    }

    fn build(segments: Vec<Segment>, breaks: Option<Vec<f64>>) -> Self {
        let mut breaks = breaks.unwrap_or_else(|| default_breaks(&segments));
        if let Some(last) = breaks.last_mut() {
            *last = 1.0;
        }
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut acc = Rotation3::identity();
        prefix.push(acc);
        for s in &segments {
            acc = s.rotation(1.0) * acc;
            prefix.push(acc);
        }
        RotationPath {
            segments,
            breaks,
            prefix,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn total_angle(&self) -> f64 {
        self.segments.iter().map(|s| s.angle.abs()).sum()
    }

    /// Start and end time of segment `k`.
    pub fn segment_span(&self, k: usize) -> (f64, f64) {
        let start = if k == 0 { 0.0 } else { self.breaks[k - 1] };
        (start, self.breaks[k])
    }

    /// `ω(t)`: the completed segments followed by the current partial one.
    pub fn rotation_at(&self, t: f64) -> Result<Rotation3<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange(t));
        }
        if self.segments.is_empty() {
            return Ok(Rotation3::identity());
        }
        let k = self
            .breaks
            .partition_point(|&b| b < t)
            .min(self.segments.len() - 1);
        let (start, end) = self.segment_span(k);
        let frac = if end > start {
            ((t - start) / (end - start)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        Ok(self.segments[k].rotation(frac) * self.prefix[k])
    }

    /// The rotation at `t = 1`.
    pub fn end_rotation(&self) -> Rotation3<f64> {
        *self.prefix.last().expect("prefix has the identity")
    }

    /// Largest entry of `ω(1) - I`.
    pub fn closure_error(&self) -> f64 {
        (self.end_rotation().matrix() - Matrix3::identity())
            .abs()
            .max()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.closure_error() < tol
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &RotationPath) -> RotationPath {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Self::build(segments, None)
    }

    /// The same motion run backwards.
    pub fn reversed(&self) -> RotationPath {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                axis: s.axis,
                angle: -s.angle,
            })
            .collect();
        Self::build(segments, None)
    }

    /// Splits segment `k` into two halves of the same axis.
    pub fn subdivided(&self, k: usize) -> RotationPath {
        let mut segments = Vec::with_capacity(self.segments.len() + 1);
        for (j, s) in self.segments.iter().enumerate() {
            if j == k {
                let half = Segment {
                    axis: s.axis,
                    angle: s.angle / 2.0,
                };
                segments.push(half);
                segments.push(half);
            } else {
                segments.push(*s);
            }
        }
        Self::build(segments, None)
    }

    /// Product of the half-angle quaternions of all segments, in execution
    /// order. This is the endpoint of the continuous lift starting at `+1`.
    pub fn lift_endpoint(&self) -> Quaternion<f64> {
        self.segments.iter().fold(Quaternion::identity(), |acc, s| {
            s.half_angle_quaternion() * acc
        })
    }

    /// Homotopy class through the quaternion double cover.
    pub fn lift_class(&self) -> Result<HomotopyClass> {
        let deviation = self.closure_error();
        if deviation >= CLOSURE_TOL {
            return Err(Error::NotClosed { deviation });
        }
        let q = self.lift_endpoint();
        let one = Quaternion::identity();
        if (q - one).coords.abs().max() < POLE_TOL {
            Ok(HomotopyClass::Trivial)
        } else if (q + one).coords.abs().max() < POLE_TOL {
            Ok(HomotopyClass::Nontrivial)
        } else {
            Err(Error::NumericalAmbiguity { w: q.w })
        }
    }

    /// Builds a path through a sequence of orientations. Consecutive samples
    /// are joined by the shorter geodesic; the quaternion signs are continued
    /// so that the lift of the result ends at the continued last sample.
    pub fn from_samples(samples: &[Orientation]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples(samples.len()));
        }
        let quats = samples
            .iter()
            .enumerate()
            .map(|(k, s)| s.to_quaternion().ok_or(Error::NotNormalizable(k)))
            .collect::<Result<Vec<_>>>()?;
        let mut prev = quats[0];
        let mut segments = Vec::with_capacity(quats.len() - 1);
        for (k, q) in quats.iter().enumerate().skip(1) {
            let mut q = *q;
            if q.dot(&prev) < 0.0 {
                q = -q;
            }
            // space-frame step: q = delta · prev
            let delta = q * prev.conjugate();
            let v = delta.imag();
            let angle = 2.0 * v.norm().atan2(delta.w.max(0.0));
            if angle > std::f64::consts::FRAC_PI_2 {
                return Err(Error::SparseSampling {
                    index: k - 1,
                    angle,
                });
            }
            let axis = if v.norm() > 1e-15 {
                Unit::new_normalize(v)
            } else {
                Vec3::z_axis()
            };
            segments.push(Segment { axis, angle });
            prev = q;
        }
        Ok(Self::build(segments, None))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: PathFile = serde_json::from_str(text)?;
        RotationPath::try_from(file)
    }

    pub fn to_json(&self) -> PathFile {
        PathFile::from(self)
    }
}

/// An orientation sample: a quaternion `[w, x, y, z]` (any nonzero norm) or a
/// rotation matrix given row by row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Orientation {
    Quaternion([f64; 4]),
    Matrix([[f64; 3]; 3]),
}

impl Orientation {
    fn to_quaternion(self) -> Option<Quaternion<f64>> {
        match self {
            Orientation::Quaternion([w, x, y, z]) => {
                let q = Quaternion::new(w, x, y, z);
                let norm = q.norm();
                if !norm.is_finite() || norm < 1e-9 {
                    return None;
                }
                Some(q / norm)
            }
            Orientation::Matrix(rows) => {
                let m = Matrix3::from_fn(|i, j| rows[i][j]);
                if m.iter().any(|c| !c.is_finite()) {
                    return None;
                }
                let orth = (m.transpose() * m - Matrix3::identity()).abs().max();
                if orth > 1e-6 || m.determinant() <= 0.0 {
                    return None;
                }
                let r = Rotation3::from_matrix_unchecked(m);
                Some(UnitQuaternion::from_rotation_matrix(&r).into_inner())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub axis: [f64; 3],
    pub angle: f64,
}

/// On-disk path formats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase", deny_unknown_fields)]
pub enum PathFile {
    Segments {
        segments: Vec<SegmentJson>,
        /// Optional explicit segment end times.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breaks: Option<Vec<f64>>,
    },
    Samples {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quaternions: Option<Vec<[f64; 4]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrices: Option<Vec<[[f64; 3]; 3]>>,
    },
}

impl TryFrom<PathFile> for RotationPath {
    type Error = Error;

    fn try_from(file: PathFile) -> Result<Self> {
        match file {
            PathFile::Segments { segments, breaks } => {
                let raw: Vec<([f64; 3], f64)> =
                    segments.iter().map(|s| (s.axis, s.angle)).collect();
                let path = RotationPath::from_segments(&raw)?;
                match breaks {
                    Some(b) => RotationPath::with_breaks(path.segments, b),
                    None => Ok(path),
                }
            }
            PathFile::Samples {
                quaternions,
                matrices,
            } => {
                let samples: Vec<Orientation> = match (quaternions, matrices) {
                    (Some(q), None) => q.into_iter().map(Orientation::Quaternion).collect(),
                    (None, Some(m)) => m.into_iter().map(Orientation::Matrix).collect(),
                    _ => {
                        return Err(Error::InvalidArgument(
                            "samples need exactly one of \"quaternions\" or \"matrices\"".into(),
                        ))
                    }
                };
                RotationPath::from_samples(&samples)
            }
        }
    }
}

impl From<&RotationPath> for PathFile {
    fn from(p: &RotationPath) -> Self {
        let segments: Vec<SegmentJson> = p
            .segments
            .iter()
            .map(|s| SegmentJson {
                axis: [s.axis.x, s.axis.y, s.axis.z],
                angle: s.angle,
            })
            .collect();
        let breaks = (p.breaks != default_breaks(&p.segments)).then(|| p.breaks.clone());
        PathFile::Segments { segments, breaks }
    }
}
