//! From a spherical braid to a braid word: pick a pole ray that misses every
//! strand, project each sphere stereographically onto a plane, and read off
//! the crossings in time order.
//!
//! Conventions: strands are ordered left to right by `u`; when two adjacent
//! strands swap, the letter is `σ_i` if the one arriving from the left has the
//! smaller `v` and `σ_i⁻¹` otherwise. For the pole `ẑ` the plane axes are
//! `u = x̂`, `v = ŷ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, Letter};
use crate::error::{Error, Result};
use crate::rotation::{RotationPath, Vec3};
use crate::spherical::{radius, trace, SphericalBraid, DEFAULT_MAX_STEP};

pub const DEFAULT_CANDIDATES: usize = 64;
pub const DEFAULT_RETRIES: usize = 8;
const MIN_CLEARANCE: f64 = 1e-4;
const COLLISION: f64 = 1e-6;
const TIME_TOL: f64 = 1e-9;
const DEPTH_TOL: f64 = 1e-9;
const TIE: f64 = 1e-9;
const MAX_BISECTIONS: usize = 60;
const MAX_FRAME_ANGLE: f64 = 0.2;

/// The projected braid. `uv[i][k]` is strand `i` at `times[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarStrands {
    pub times: Vec<f64>,
    pub uv: [Vec<[f64; 2]>; 3],
    /// `-ρ(t)` per sample.
    pub depth: Vec<f64>,
    pub pole: [f64; 3],
    pub u_axis: [f64; 3],
    pub v_axis: [f64; 3],
}

/// One adjacent transposition; `position` is 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub time: f64,
    pub position: usize,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleChoice {
    pub pole: Vec3,
    /// Smallest angle between the pole and any strand sample.
    pub clearance: f64,
}

fn directions(sb: &SphericalBraid) -> impl Iterator<Item = Vec3> + '_ {
    sb.strands
        .iter()
        .flatten()
        .map(|p| Vec3::from(*p).normalize())
}

fn clearance(sb: &SphericalBraid, pole: &Vec3) -> f64 {
    let max_dot = directions(sb)
        .map(|d| d.dot(pole))
        .fold(f64::NEG_INFINITY, f64::max);
    max_dot.clamp(-1.0, 1.0).acos()
}

/// `count` roughly uniform directions on the sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// The north pole or one of `candidates - 1` other directions, whichever
/// stays furthest from every strand. Ties go to the north pole.
pub fn choose_pole(sb: &SphericalBraid, candidates: usize) -> Result<PoleChoice> {
    if candidates == 0 {
        return Err(Error::InvalidArgument(
            "need at least one pole candidate".into(),
        ));
    }
    let mut best = PoleChoice {
        pole: Vec3::z(),
        clearance: clearance(sb, &Vec3::z()),
    };
    for c in fibonacci_sphere(candidates - 1) {
        let cl = clearance(sb, &c);
        if cl > best.clearance {
            best = PoleChoice {
                pole: c,
                clearance: cl,
            };
        }
    }
    if best.clearance < MIN_CLEARANCE {
        return Err(Error::NoClearPole {
            clearance: best.clearance,
        });
    }
    Ok(best)
}

/// Orthonormal `(u, v)` axes of the plane tangent to `pole`, turned by
/// `angle` about the pole.
fn plane_axes(pole: &Vec3, angle: f64) -> (Vec3, Vec3) {
    let seed = if pole.x.abs() > 1.0 - 1e-9 {
        Vec3::y()
    } else {
        Vec3::x()
    };
    let u = (seed - pole * seed.dot(pole)).normalize();
    let v = pole.cross(&u);
    let (s, c) = angle.sin_cos();
    (u * c + v * s, v * c - u * s)
}

struct Projector {
    pole: Vec3,
    u: Vec3,
    v: Vec3,
}

impl Projector {
    fn forward(&self, d: &Vec3) -> [f64; 2] {
        let den = 1.0 - d.dot(&self.pole);
        [d.dot(&self.u) / den, d.dot(&self.v) / den]
    }

    fn inverse(&self, [a, b]: [f64; 2]) -> Vec3 {
        let s = a * a + b * b;
        (self.u * (2.0 * a) + self.v * (2.0 * b) + self.pole * (s - 1.0)) / (s + 1.0)
    }
}

pub fn project(sb: &SphericalBraid, pole: Vec3) -> Result<PlanarStrands> {
    project_with_frame(sb, pole, 0.0)
}

/// Stereographic projection from `pole`, with the plane axes turned by
/// `frame_angle`.
pub fn project_with_frame(
    sb: &SphericalBraid,
    pole: Vec3,
    frame_angle: f64,
) -> Result<PlanarStrands> {
    sb.validate()?;
    let pole = pole.normalize();
    let cl = clearance(sb, &pole);
    if cl < COLLISION {
        return Err(Error::PoleCollision { angle: cl });
    }
    let (u, v) = plane_axes(&pole, frame_angle);
    let proj = Projector { pole, u, v };
    let uv = [0, 1, 2].map(|i| {
        sb.strands[i]
            .iter()
            .map(|p| proj.forward(&Vec3::from(*p).normalize()))
            .collect()
    });
    Ok(PlanarStrands {
        times: sb.times.clone(),
        uv,
        depth: sb.times.iter().map(|&t| -radius(t)).collect(),
        pole: pole.into(),
        u_axis: u.into(),
        v_axis: v.into(),
    })
}

fn slerp(a: &Vec3, b: &Vec3, s: f64) -> Vec3 {
    let omega = a.dot(b).clamp(-1.0, 1.0).acos();
    if omega < 1e-12 {
        return *a;
    }
    let sin = omega.sin();
    (a * ((1.0 - s) * omega).sin() + b * (s * omega).sin()) / sin
}

/// Continuous model of the projected strands on one sample interval:
/// directions are interpolated along great circles.
struct Interval<'a> {
    proj: &'a Projector,
    dirs: [(Vec3, Vec3); 3],
}

impl Interval<'_> {
    fn at(&self, strand: usize, s: f64) -> [f64; 2] {
        let (a, b) = &self.dirs[strand];
        self.proj.forward(&slerp(a, b, s))
    }
}

/// Whether strand `a` at `p` sits left of strand `b` at `q`. Coordinates
/// within `TIE` count as equal, so that the closing sample, which matches the
/// opening one only up to rounding, breaks ties the same way.
fn key_order(p: [f64; 2], q: [f64; 2], a: usize, b: usize) -> bool {
    if (p[0] - q[0]).abs() > TIE {
        p[0] < q[0]
    } else if (p[1] - q[1]).abs() > TIE {
        p[1] < q[1]
    } else {
        a < b
    }
}

/// Reads the crossings of `ps` in time order.
pub fn crossing_events(ps: &PlanarStrands) -> Result<Vec<CrossingEvent>> {
    Ok(sweep(ps)?.1)
}

/// The braid word of a projected braid.
pub fn extract_word(ps: &PlanarStrands) -> Result<BraidWord> {
    Ok(sweep(ps)?.0)
}

fn sweep(ps: &PlanarStrands) -> Result<(BraidWord, Vec<CrossingEvent>)> {
    let n = ps.times.len();
    if n < 2 || ps.uv.iter().any(|s| s.len() != n) {
        return Err(Error::MalformedBraid(
            "planar strands have inconsistent lengths".into(),
        ));
    }
    let proj = Projector {
        pole: Vec3::from(ps.pole),
        u: Vec3::from(ps.u_axis),
        v: Vec3::from(ps.v_axis),
    };
    let mut order = [0usize, 1, 2];
    for i in 1..3 {
        let mut j = i;
        while j > 0
            && key_order(
                ps.uv[order[j]][0],
                ps.uv[order[j - 1]][0],
                order[j],
                order[j - 1],
            )
        {
            order.swap(j, j - 1);
            j -= 1;
        }
    }
    let mut letters = Vec::new();
    let mut events = Vec::new();
    for k in 0..n - 1 {
        let (t0, t1) = (ps.times[k], ps.times[k + 1]);
        let interval = Interval {
            proj: &proj,
            dirs: [0, 1, 2].map(|i| (proj.inverse(ps.uv[i][k]), proj.inverse(ps.uv[i][k + 1]))),
        };
        let mut swaps: Vec<(f64, usize, usize)> = Vec::new();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let before = key_order(ps.uv[a][k], ps.uv[b][k], a, b);
            let after = key_order(ps.uv[a][k + 1], ps.uv[b][k + 1], a, b);
            if before == after {
                continue;
            }
            // bisect on the sign of u_a - u_b
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..MAX_BISECTIONS {
                if (hi - lo) * (t1 - t0) < TIME_TOL * 0.5 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let left = interval.at(a, mid)[0] < interval.at(b, mid)[0];
                if left == before {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            swaps.push((0.5 * (lo + hi), a, b));
        }
        swaps.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (s, a, b) in swaps {
            let time = t0 + s * (t1 - t0);
            let pa = order.iter().position(|&x| x == a).expect("strand present");
            let pb = order.iter().position(|&x| x == b).expect("strand present");
            let p = pa.min(pb);
            let c = 3 - a - b;
            let [ua, _] = interval.at(a, s);
            let [ub, _] = interval.at(b, s);
            let [uc, _] = interval.at(c, s);
            if pa.abs_diff(pb) != 1 || ((uc - ua).abs() < DEPTH_TOL && (uc - ub).abs() < DEPTH_TOL)
            {
                return Err(Error::TripleCrossing { time });
            }
            let (left, right) = (order[p], order[p + 1]);
            let vl = interval.at(left, s)[1];
            let vr = interval.at(right, s)[1];
            if (vl - vr).abs() < DEPTH_TOL {
                return Err(Error::DegenerateCrossing {
                    time,
                    a: left + 1,
                    b: right + 1,
                });
            }
            let positive = vl < vr;
            letters.push(Letter::new(p + 1, positive));
            events.push(CrossingEvent {
                time,
                position: p + 1,
                sign: if positive { 1 } else { -1 },
            });
            order.swap(p, p + 1);
        }
    }
    let word = BraidWord::from_letters(3, letters)?;
    Ok((word, events))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractOptions {
    pub max_step: f64,
    pub candidates: usize,
    pub seed: u64,
    pub retries: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            max_step: DEFAULT_MAX_STEP,
            candidates: DEFAULT_CANDIDATES,
            seed: 0,
            retries: DEFAULT_RETRIES,
        }
    }
}

/// A braid word together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub word: BraidWord,
    pub pole: Vec3,
    pub clearance: f64,
    pub samples: usize,
    pub frame_angle: f64,
}

/// Extracts the word of `sb` seen from `pole`, turning the projection frame
/// by small seeded angles when a crossing is degenerate.
pub fn extract_with_pole(
    sb: &SphericalBraid,
    pole: Vec3,
    opts: &ExtractOptions,
) -> Result<Extraction> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut frame_angle = 0.0;
    let mut attempt = 0;
    loop {
        let ps = project_with_frame(sb, pole, frame_angle)?;
        match extract_word(&ps) {
            Ok(word) => {
                return Ok(Extraction {
                    word,
                    pole: pole.normalize(),
                    clearance: clearance(sb, &pole.normalize()),
                    samples: sb.len(),
                    frame_angle,
                })
            }
            Err(Error::DegenerateCrossing { .. } | Error::TripleCrossing { .. })
                if attempt < opts.retries =>
            {
                attempt += 1;
                frame_angle = rng.random_range(-MAX_FRAME_ANGLE..MAX_FRAME_ANGLE);
            }
            Err(e) => return Err(e),
        }
    }
}

/// The full pipeline: trace, choose a pole, project, sweep.
pub fn extract_braid(path: &RotationPath, opts: &ExtractOptions) -> Result<Extraction> {
    let sb = trace(path, opts.max_step)?;
    let choice = choose_pole(&sb, opts.candidates)?;
    let ex = extract_with_pole(&sb, choice.pole, opts)?;
    if !ex.word.is_pure() {
        return Err(Error::NotPureResult(ex.word.to_string()));
    }
    Ok(ex)
}

pub fn braid_of_path(path: &RotationPath) -> Result<BraidWord> {
    Ok(extract_braid(path, &ExtractOptions::default())?.word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Permutation;
    use crate::quotient::sphere_class;
    use crate::spherical::base_points;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn path(raw: &[([f64; 3], f64)]) -> RotationPath {
        RotationPath::from_segments(raw).unwrap()
    }

    #[test]
    fn pole_for_equatorial_braids() {
        let sb = trace(&RotationPath::constant(), DEFAULT_MAX_STEP).unwrap();
        let c = choose_pole(&sb, DEFAULT_CANDIDATES).unwrap();
        assert_eq!(c.pole, Vec3::z());
        assert!((c.clearance - FRAC_PI_2).abs() < 1e-12);
        let sb = trace(&path(&[([0.0, 0.0, 1.0], TAU)]), DEFAULT_MAX_STEP).unwrap();
        assert_eq!(
            choose_pole(&sb, DEFAULT_CANDIDATES).unwrap().pole,
            Vec3::z()
        );
    }

    #[test]
    fn pole_avoids_strand_through_north() {
        // x1 swings through the north pole and back
        let p = path(&[([0.0, 1.0, 0.0], -FRAC_PI_2), ([0.0, 1.0, 0.0], FRAC_PI_2)]);
        let sb = trace(&p, DEFAULT_MAX_STEP).unwrap();
        assert!(clearance(&sb, &Vec3::z()) < 1e-9);
        let c = choose_pole(&sb, DEFAULT_CANDIDATES).unwrap();
        assert!(c.clearance > 0.1);
        assert!(matches!(
            project(&sb, Vec3::z()),
            Err(Error::PoleCollision { .. })
        ));
        assert!(choose_pole(&sb, 0).is_err());
    }

    #[test]
    fn projection_geometry() {
        let proj = Projector {
            pole: Vec3::z(),
            u: Vec3::x(),
            v: Vec3::y(),
        };
        let [u, v] = proj.forward(&-Vec3::z());
        assert!(u.abs() < 1e-15 && v.abs() < 1e-15);
        let sb = trace(&RotationPath::constant(), DEFAULT_MAX_STEP).unwrap();
        let ps = project(&sb, Vec3::z()).unwrap();
        let pts: Vec<[f64; 2]> = (0..3).map(|i| ps.uv[i][0]).collect();
        for p in &pts {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-12);
        }
        let angle = |p: [f64; 2], q: [f64; 2]| (p[0] * q[0] + p[1] * q[1]).clamp(-1.0, 1.0).acos();
        assert!((angle(pts[0], pts[1]) - TAU / 3.0).abs() < 1e-12);
        assert!((angle(pts[1], pts[2]) - TAU / 3.0).abs() < 1e-12);
        assert_eq!(ps.depth, vec![-1.0, -0.5]);
        let d = Vec3::new(0.3, -0.4, 0.2).normalize();
        assert!((proj.inverse(proj.forward(&d)) - d).norm() < 1e-12);
    }

    #[test]
    fn plane_axes_follow_convention() {
        let (u, v) = plane_axes(&Vec3::z(), 0.0);
        assert_eq!((u, v), (Vec3::x(), Vec3::y()));
        let (u, v) = plane_axes(&Vec3::x(), 0.0);
        assert!(u.dot(&Vec3::x()).abs() < 1e-15 && v.dot(&u).abs() < 1e-15);
        assert!((Vec3::x().cross(&u) - v).norm() < 1e-15);
    }

    #[test]
    fn constant_path_gives_empty_word() {
        assert!(braid_of_path(&RotationPath::constant()).unwrap().is_empty());
    }

    #[test]
    fn rotation_about_third_point_is_a12() {
        let x3 = base_points()[2];
        let w = braid_of_path(&path(&[([x3.x, x3.y, x3.z], TAU)])).unwrap();
        let c = sphere_class(&w).unwrap();
        assert!(c.perm.is_identity());
        assert_eq!(c.esum_mod4, 2);
    }

    #[test]
    fn z_turns() {
        let w = braid_of_path(&path(&[([0.0, 0.0, 1.0], TAU)])).unwrap();
        assert_eq!(w.exponent_sum().rem_euclid(4), 2);
        let w = braid_of_path(&path(&[([0.0, 0.0, 1.0], 2.0 * TAU)])).unwrap();
        assert_eq!(w.exponent_sum().rem_euclid(4), 0);
        let w = braid_of_path(&path(&[([0.0, 0.0, 1.0], TAU), ([1.0, 0.0, 0.0], TAU)])).unwrap();
        assert!(w.is_pure());
        assert_eq!(w.exponent_sum().rem_euclid(4), 0);
    }

    #[test]
    fn events_track_permutation() {
        let sb = trace(&path(&[([0.0, 0.0, 1.0], TAU)]), DEFAULT_MAX_STEP).unwrap();
        let ps = project(&sb, Vec3::z()).unwrap();
        let events = crossing_events(&ps).unwrap();
        let word = extract_word(&ps).unwrap();
        assert_eq!(events.len(), word.len());
        assert!(events.windows(2).all(|w| w[0].time <= w[1].time));
        assert_eq!(word.permutation(), Permutation::identity(3));
    }

    #[test]
    fn frame_turn_keeps_class() {
        let p = path(&[
            ([1.0, 2.0, 0.5], TAU),
            ([0.0, 1.0, -1.0], PI),
            ([0.0, 1.0, -1.0], PI),
        ]);
        let sb = trace(&p, DEFAULT_MAX_STEP).unwrap();
        let pole = choose_pole(&sb, DEFAULT_CANDIDATES).unwrap().pole;
        let base = sphere_class(&extract_word(&project(&sb, pole).unwrap()).unwrap()).unwrap();
        for angle in [0.1, -0.15, 1.0, 2.5] {
            let ps = project_with_frame(&sb, pole, angle).unwrap();
            assert_eq!(sphere_class(&extract_word(&ps).unwrap()).unwrap(), base);
        }
    }

    #[test]
    fn rounding_at_the_end_is_not_a_crossing() {
        // strands 2 and 3 share u from the north pole; nudge one at the end
        let sb = trace(&RotationPath::constant(), DEFAULT_MAX_STEP).unwrap();
        let mut ps = project(&sb, Vec3::z()).unwrap();
        assert_eq!(ps.uv[1][0][0], ps.uv[2][0][0]);
        ps.uv[2][1][0] -= 1e-12;
        assert!(extract_word(&ps).unwrap().is_empty());
    }

    #[test]
    fn planar_dump_round_trips() {
        let sb = trace(&RotationPath::constant(), DEFAULT_MAX_STEP).unwrap();
        let ps = project(&sb, Vec3::z()).unwrap();
        let text = serde_json::to_string(&ps).unwrap();
        let back: PlanarStrands = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ps);
    }
}
