//! Homotopy class of a closed rotation path, computed twice: once through
//! the braid the path induces on three points, once through the quaternion
//! lift. The two must agree.

use std::f64::consts::{PI, TAU};

use nalgebra::Unit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{extract_braid, ExtractOptions};
use crate::quotient::{z2_class, HomotopyClass};
use crate::rotation::{RotationPath, Segment, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// Class read off the braid word.
    pub class: HomotopyClass,
    pub braid_word: Vec<i32>,
    pub exponent_sum: i64,
    pub exponent_sum_mod4: u8,
    pub lift_class: HomotopyClass,
    pub agreement: bool,
    pub pole: [f64; 3],
    pub samples: usize,
}

pub fn classify_via_braid(path: &RotationPath) -> Result<HomotopyClass> {
    let ex = extract_braid(path, &ExtractOptions::default())?;
    z2_class(&ex.word)
}

pub fn classify(path: &RotationPath) -> Result<ClassificationReport> {
    classify_with(path, &ExtractOptions::default())
}

/// Runs both routes; a disagreement is returned as an error carrying the
/// full report.
pub fn classify_with(path: &RotationPath, opts: &ExtractOptions) -> Result<ClassificationReport> {
    let lift = path.lift_class()?;
    let ex = extract_braid(path, opts)?;
    let class = z2_class(&ex.word)?;
    let esum = ex.word.exponent_sum();
    let report = ClassificationReport {
        class,
        braid_word: ex.word.to_signed(),
        exponent_sum: esum,
        exponent_sum_mod4: esum.rem_euclid(4) as u8,
        lift_class: lift,
        agreement: class == lift,
        pole: ex.pole.into(),
        samples: ex.samples,
    };
    if !report.agreement {
        return Err(Error::Disagreement(Box::new(report)));
    }
    Ok(report)
}

/// `k_turns` full turns about random axes. With `wiggle`, every turn is
/// preceded by an excursion along a random axis and straight back, and one
/// more excursion closes the path.
pub fn random_closed_path(seed: u64, k_turns: usize, wiggle: bool) -> RotationPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut segments = Vec::new();
    for _ in 0..k_turns {
        if wiggle {
            push_excursion(&mut rng, &mut segments);
        }
        let angle = if rng.random_bool(0.5) { TAU } else { -TAU };
        segments.push(Segment {
            axis: random_axis(&mut rng),
            angle,
        });
    }
    if wiggle {
        push_excursion(&mut rng, &mut segments);
    }
    RotationPath::from_unit_segments(segments)
}

/// `segments` random rotations of up to a full turn each, closed by the single
/// rotation that undoes their product. Its class is not known in advance.
pub fn random_loop(seed: u64, segments: usize) -> RotationPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Segment> = (0..segments)
        .map(|_| Segment {
            axis: random_axis(&mut rng),
            angle: rng.random_range(-TAU..TAU),
        })
        .collect();
    let end = RotationPath::from_unit_segments(out.clone()).end_rotation();
    if let Some((axis, angle)) = end.inverse().axis_angle() {
        out.push(Segment { axis, angle });
    }
    RotationPath::from_unit_segments(out)
}

fn random_axis(rng: &mut ChaCha8Rng) -> Unit<Vec3> {
    let v: [f64; 3] = UnitSphere.sample(rng);
    Unit::new_normalize(Vec3::from(v))
}

fn push_excursion(rng: &mut ChaCha8Rng, segments: &mut Vec<Segment>) {
    let axis = random_axis(rng);
    let angle = rng.random_range(-PI..PI);
    segments.push(Segment { axis, angle });
    segments.push(Segment {
        axis,
        angle: -angle,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::base_points;

    fn path(raw: &[([f64; 3], f64)]) -> RotationPath {
        RotationPath::from_segments(raw).unwrap()
    }

    #[test]
    fn braid_route_examples() {
        use HomotopyClass::*;
        assert_eq!(
            classify_via_braid(&path(&[([0.0, 0.0, 1.0], TAU)])).unwrap(),
            Nontrivial
        );
        assert_eq!(
            classify_via_braid(&path(&[([0.0, 0.0, 1.0], 2.0 * TAU)])).unwrap(),
            Trivial
        );
        assert_eq!(
            classify_via_braid(&RotationPath::constant()).unwrap(),
            Trivial
        );
    }

    #[test]
    fn report_for_full_turn() {
        let r = classify(&path(&[([0.0, 0.0, 1.0], TAU)])).unwrap();
        assert_eq!(r.class, HomotopyClass::Nontrivial);
        assert_eq!(r.lift_class, HomotopyClass::Nontrivial);
        assert!(r.agreement);
        assert_eq!(r.exponent_sum_mod4, 2);
        assert_eq!(r.pole, [0.0, 0.0, 1.0]);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["class"], "nontrivial");
        assert_eq!(v["lift_class"], "nontrivial");
    }

    #[test]
    fn report_for_third_point_axis() {
        let x3 = base_points()[2];
        let r = classify(&path(&[([x3.x, x3.y, x3.z], TAU)])).unwrap();
        assert_eq!(r.class, HomotopyClass::Nontrivial);
        assert!(r.agreement);
    }

    #[test]
    fn generator_examples() {
        let p = random_closed_path(7, 0, false);
        assert!(p.segments().is_empty());
        assert_eq!(p.lift_class().unwrap(), HomotopyClass::Trivial);
        assert_eq!(
            random_closed_path(7, 3, true).lift_class().unwrap(),
            HomotopyClass::Nontrivial
        );
        assert_eq!(
            random_closed_path(7, 2, false).lift_class().unwrap(),
            HomotopyClass::Trivial
        );
        assert_eq!(
            random_closed_path(7, 3, true),
            random_closed_path(7, 3, true)
        );
        assert_ne!(
            random_closed_path(7, 3, true),
            random_closed_path(8, 3, true)
        );
    }

    #[test]
    fn random_loops_close() {
        for seed in 0..20 {
            let p = random_loop(seed, 4);
            assert!(p.is_closed(crate::rotation::CLOSURE_TOL));
            assert!(classify(&p).unwrap().agreement);
        }
    }

    #[test]
    fn six_turns_are_trivial() {
        let r = classify(&random_closed_path(11, 6, false)).unwrap();
        assert_eq!(r.class, HomotopyClass::Trivial);
        assert!(r.agreement);
    }

    #[test]
    fn disagreement_message_names_both_routes() {
        let r = ClassificationReport {
            class: HomotopyClass::Trivial,
            braid_word: vec![],
            exponent_sum: 0,
            exponent_sum_mod4: 0,
            lift_class: HomotopyClass::Nontrivial,
            agreement: false,
            pole: [0.0, 0.0, 1.0],
            samples: 2,
        };
        let msg = Error::Disagreement(Box::new(r)).to_string();
        assert!(msg.contains("trivial") && msg.contains("nontrivial"));
    }
}
