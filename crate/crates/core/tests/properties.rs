use proptest::prelude::*;

use so3braid::artin::{equal_in_group, is_trivial};
use so3braid::certificate::{certify_equal_mod_r, SearchBudget};
use so3braid::quotient::{canonical_rep, flip, sphere_class};
use so3braid::rotation::{RotationPath, CLOSURE_TOL};
use so3braid::spherical::{
    base_points, frame_of_triangle, radius, reconstruct_path, rotation, trace,
};
use so3braid::{BraidWord, HomotopyClass};

fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let k = (n - 1) as i32;
    prop::collection::vec(
        (1..=k, any::<bool>()).prop_map(|(i, p)| if p { i } else { -i }),
        0..=max_len,
    )
}

fn word3(max_len: usize) -> impl Strategy<Value = BraidWord> {
    letters(3, max_len).prop_map(|l| BraidWord::new(3, &l).unwrap())
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0).prop_filter("axis away from zero", |a| {
        a.iter().map(|c| c * c).sum::<f64>() > 1e-2
    })
}

/// Random segments followed by their exact reversal: closed and trivial.
fn there_and_back() -> impl Strategy<Value = RotationPath> {
    prop::collection::vec((axis(), -6.0f64..6.0), 1..4).prop_map(|segs| {
        let mut raw = segs.clone();
        raw.extend(segs.iter().rev().map(|&(a, t)| (a, -t)));
        RotationPath::from_segments(&raw).unwrap()
    })
}

/// A path of full turns about random axes.
fn full_turns() -> impl Strategy<Value = (RotationPath, usize)> {
    prop::collection::vec(axis(), 0..4).prop_map(|axes| {
        let raw: Vec<_> = axes.iter().map(|&a| (a, std::f64::consts::TAU)).collect();
        (RotationPath::from_segments(&raw).unwrap(), axes.len())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exponent_sum_and_permutation_are_homomorphisms(a in word3(10), b in word3(10)) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.exponent_sum(), a.exponent_sum() + b.exponent_sum());
        prop_assert_eq!(ab.permutation(), a.permutation().then(&b.permutation()));
        prop_assert_eq!(a.inverse().exponent_sum(), -a.exponent_sum());
    }

    #[test]
    fn free_reduction_is_neutral(w in word3(12)) {
        let r = w.free_reduce();
        prop_assert!(r.len() <= w.len());
        prop_assert!(equal_in_group(&w, &r).unwrap());
        prop_assert_eq!(sphere_class(&w).unwrap(), sphere_class(&r).unwrap());
        prop_assert!(is_trivial(&w.compose(&w.inverse()).unwrap()));
    }

    #[test]
    fn flips_are_invisible_to_the_invariant(w in word3(8), i in 1usize..=3, pos in 0usize..9) {
        let pos = pos.min(w.len());
        let mut l = w.to_signed();
        let r = flip(i, 3).unwrap().to_signed();
        l.splice(pos..pos, r);
        let v = BraidWord::new(3, &l).unwrap();
        prop_assert_eq!(sphere_class(&v).unwrap(), sphere_class(&w).unwrap());
    }

    #[test]
    fn certificates_replay_exactly(w in word3(8)) {
        let target = canonical_rep(&sphere_class(&w).unwrap()).unwrap();
        let out = certify_equal_mod_r(&w, &target, SearchBudget::default()).unwrap();
        let cert = out.certificate().expect("same class is always certified");
        prop_assert!(cert.proves(&w, &target));
        let back = cert.reversed().unwrap();
        prop_assert!(back.proves(&target, &w));
    }

    #[test]
    fn far_generators_commute_in_b5(a in letters(5, 6)) {
        let w = BraidWord::new(5, &a).unwrap();
        let c = BraidWord::new(5, &[1, 3, -1, -3]).unwrap();
        prop_assert!(equal_in_group(&w.compose(&c).unwrap(), &w).unwrap());
    }

    #[test]
    fn frame_is_equivariant(a in axis(), angle in -7.0f64..7.0, t in 0.0f64..=1.0) {
        let r = rotation(a.into(), angle);
        let pts = base_points().map(|p| r * p * radius(t));
        let f = frame_of_triangle(pts).unwrap();
        prop_assert!((f.rotation().matrix() - r.matrix()).abs().max() < 1e-9);
    }

    #[test]
    fn lift_is_a_homomorphism((p, k) in full_turns(), (q, m) in full_turns(), z in there_and_back()) {
        let pq = p.then(&z).then(&q);
        let expect = HomotopyClass::from_parity((k + m) % 2 == 1);
        prop_assert_eq!(pq.lift_class().unwrap(), expect);
        prop_assert_eq!(pq.lift_class().unwrap(), p.lift_class().unwrap() + q.lift_class().unwrap());
        prop_assert_eq!(pq.reversed().lift_class().unwrap(), expect);
    }

    #[test]
    fn subdivision_keeps_the_lift((p, _) in full_turns(), k in 0usize..4) {
        prop_assume!(!p.segments().is_empty());
        let k = k % p.segments().len();
        let s = p.subdivided(k);
        prop_assert_eq!(s.lift_class().unwrap(), p.lift_class().unwrap());
        prop_assert!((s.end_rotation().matrix() - p.end_rotation().matrix()).abs().max() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radius_law_and_round_trip(z in there_and_back(), (p, _) in full_turns()) {
        let path = p.then(&z);
        prop_assert!(path.is_closed(CLOSURE_TOL));
        let sb = trace(&path, 0.1).unwrap();
        for (k, &t) in sb.times.iter().enumerate() {
            for i in 0..3 {
                prop_assert!((sb.point(i, k).norm() - radius(t)).abs() < 1e-9);
            }
        }
        let back = reconstruct_path(&sb).unwrap();
        for &t in &sb.times {
            let d = back.rotation_at(t).unwrap().matrix() - path.rotation_at(t).unwrap().matrix();
            prop_assert!(d.abs().max() < 1e-6);
        }
        prop_assert_eq!(back.lift_class().unwrap(), path.lift_class().unwrap());
    }
}
