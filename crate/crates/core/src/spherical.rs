//! Three points riding a rotation path, as a braid in the 3-ball.
//!
//! The base configuration is an equilateral triangle on the equator. At time
//! `t` the points sit at `ρ(t)·ω(t)·x_i` with `ρ(t) = 1 - t/2`, so the strands
//! move from the unit sphere at the top to the half-radius sphere at the
//! bottom and never meet.

use nalgebra::{Matrix3, Rotation3, Unit};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rotation::{RotationPath, Segment, Vec3, CLOSURE_TOL};

pub const DEFAULT_MAX_STEP: f64 = 0.05;
const DEGENERATE_AREA: f64 = 1e-9;
const ANCHOR_TOL: f64 = 1e-6;

/// The base triangle `x_1, x_2, x_3`.
pub fn base_points() -> [Vec3; 3] {
    let h = 3f64.sqrt() / 2.0;
    [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-0.5, h, 0.0),
        Vec3::new(-0.5, -h, 0.0),
    ]
}

pub fn radius(t: f64) -> f64 {
    1.0 - t / 2.0
}

/// Sampled strand positions. `strands[i][k]` is strand `i` at `times[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalBraid {
    pub times: Vec<f64>,
    pub strands: [Vec<[f64; 3]>; 3],
}

impl SphericalBraid {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn point(&self, strand: usize, k: usize) -> Vec3 {
        Vec3::from(self.strands[strand][k])
    }

    pub fn triple(&self, k: usize) -> [Vec3; 3] {
        [self.point(0, k), self.point(1, k), self.point(2, k)]
    }

    /// Smallest angle between two strand directions over all samples.
    pub fn min_separation(&self) -> f64 {
        (0..self.len())
            .flat_map(|k| {
                let p = self.triple(k);
                [(0, 1), (0, 2), (1, 2)].map(|(a, b)| p[a].angle(&p[b]))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks shape, time ordering and finiteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if n < 2 {
            return Err(Error::MalformedBraid(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        if self.strands.iter().any(|s| s.len() != n) {
            return Err(Error::MalformedBraid(
                "strand lengths differ from times".into(),
            ));
        }
        if self
            .times
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::MalformedBraid(
                "times must be strictly increasing".into(),
            ));
        }
        if self
            .strands
            .iter()
            .flatten()
            .flatten()
            .any(|c| !c.is_finite())
        {
            return Err(Error::MalformedBraid("non-finite coordinate".into()));
        }
        Ok(())
    }
}

/// Sample times covering `path` with rotation steps below `max_step`.
fn sample_times(path: &RotationPath, max_step: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    if path.segments().is_empty() {
        times.push(1.0);
        return times;
    }
    for (k, seg) in path.segments().iter().enumerate() {
        let (start, end) = path.segment_span(k);
        if end <= start {
            continue;
        }
        let m = (seg.angle.abs() / max_step).floor() as usize + 1;
        for j in 1..=m {
            times.push(start + (end - start) * j as f64 / m as f64);
        }
    }
    if let Some(last) = times.last_mut() {
        *last = 1.0;
    }
    times
}

/// Moves the base triangle along a closed path.
pub fn trace(path: &RotationPath, max_step: f64) -> Result<SphericalBraid> {
    if max_step <= 0.0 || !max_step.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "max_step must be positive, got {max_step}"
        )));
    }
    let deviation = path.closure_error();
    if deviation >= CLOSURE_TOL {
        return Err(Error::NotClosed { deviation });
    }
    let times = sample_times(path, max_step);
    let base = base_points();
    let mut strands: [Vec<[f64; 3]>; 3] = Default::default();
    for &t in &times {
        let r = path.rotation_at(t)?;
        let rho = radius(t);
        for (i, x) in base.iter().enumerate() {
            let p = r * x * rho;
            strands[i].push([p.x, p.y, p.z]);
        }
    }
    Ok(SphericalBraid { times, strands })
}

/// The frame `(e1, e2, e3)` of an ordered triangle: `e1` toward the first
/// vertex from the centroid, `e3` along the oriented normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleFrame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl TriangleFrame {
    /// The rotation taking the standard basis to this frame.
    pub fn rotation(&self) -> Rotation3<f64> {
        Rotation3::from_matrix_unchecked(Matrix3::from_columns(&[self.e1, self.e2, self.e3]))
    }
}

pub fn frame_of_triangle(points: [Vec3; 3]) -> Result<TriangleFrame> {
    let unit = points.map(|p| {
        let n = p.norm();
        if n > 0.0 {
            p / n
        } else {
            p
        }
    });
    let area = (unit[1] - unit[0]).cross(&(unit[2] - unit[0])).norm() / 2.0;
    if area.is_nan() || area < DEGENERATE_AREA {
        return Err(Error::DegenerateTriangle { area });
    }
    let centroid = (points[0] + points[1] + points[2]) / 3.0;
    let normal = (points[1] - points[0]).cross(&(points[2] - points[0]));
    let e3 = normal.normalize();
    let lead = points[0] - centroid;
    let e1 = (lead - e3 * lead.dot(&e3)).normalize();
    let e2 = e3.cross(&e1);
    Ok(TriangleFrame { e1, e2, e3 })
}

/// Recovers a rotation path from a braid that starts and ends on the base
/// configuration, one geodesic segment per sample interval.
pub fn reconstruct_path(braid: &SphericalBraid) -> Result<RotationPath> {
    braid.validate()?;
    let base = base_points();
    let last = braid.len() - 1;
    let first = braid.triple(0);
    let end = braid.triple(last);
    let anchored = (0..3).all(|i| {
        (first[i] - base[i]).norm() < ANCHOR_TOL
            && (end[i] - base[i] * radius(1.0)).norm() < ANCHOR_TOL
    });
    if !anchored || braid.times[0] != 0.0 || braid.times[last] != 1.0 {
        return Err(Error::NotAnchored);
    }
    let frames = (0..braid.len())
        .map(|k| frame_of_triangle(braid.triple(k)).map(|f| f.rotation()))
        .collect::<Result<Vec<_>>>()?;
    let segments: Vec<Segment> = frames
        .windows(2)
        .map(|w| {
            let delta = w[1] * w[0].inverse();
            match delta.axis_angle() {
                Some((axis, angle)) => Segment { axis, angle },
                None => Segment {
                    axis: Vec3::z_axis(),
                    angle: 0.0,
                },
            }
        })
        .collect();
    let mut breaks = braid.times[1..].to_vec();
    if let Some(l) = breaks.last_mut() {
        *l = 1.0;
    }
    RotationPath::with_breaks(segments, breaks)
}

/// Axis-angle helper used by callers that build rotations by hand.
pub fn rotation(axis: Vec3, angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle)
}
