use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use so3braid::certificate::{Certifier, SearchBudget};
use so3braid::classify::{classify, classify_via_braid, random_closed_path, random_loop};
use so3braid::extract::{
    choose_pole, extract_braid, extract_with_pole, ExtractOptions, DEFAULT_CANDIDATES,
};
use so3braid::quotient::{canonical_rep, sphere_class, SphereBraidClass};
use so3braid::rotation::{RotationPath, Vec3};
use so3braid::spherical::{reconstruct_path, trace, DEFAULT_MAX_STEP};
use so3braid::{BraidWord, HomotopyClass, Letter};

#[test]
fn routes_agree_on_random_paths() {
    for seed in 0..60u64 {
        let k = (seed % 7) as usize;
        let p = random_closed_path(seed, k, seed % 2 == 0);
        let r = classify(&p).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(
            r.class,
            HomotopyClass::from_parity(k % 2 == 1),
            "seed {seed}"
        );
        assert!(r.agreement);
    }
    for seed in 0..30u64 {
        let p = random_loop(1000 + seed, 1 + (seed % 5) as usize);
        assert!(classify(&p).is_ok(), "seed {seed}");
    }
}

#[test]
fn composition_adds_classes() {
    for seed in 0..15u64 {
        let p = random_loop(seed, 3);
        let q = random_loop(seed + 500, 2);
        let sum = classify_via_braid(&p).unwrap() + classify_via_braid(&q).unwrap();
        assert_eq!(classify_via_braid(&p.then(&q)).unwrap(), sum, "seed {seed}");
    }
}

fn random_poles(sb: &so3braid::spherical::SphericalBraid, count: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let c: [f64; 3] = UnitSphere.sample(&mut rng);
        let c = Vec3::from(c);
        let clear = sb
            .strands
            .iter()
            .flatten()
            .map(|p| Vec3::from(*p).normalize().dot(&c))
            .fold(f64::NEG_INFINITY, f64::max);
        if clear.acos() > 0.05 {
            out.push(c);
        }
    }
    out
}

#[test]
fn class_does_not_depend_on_pole() {
    let opts = ExtractOptions::default();
    for seed in 0..8u64 {
        let p = if seed % 2 == 0 {
            random_closed_path(seed, 2 + seed as usize % 3, true)
        } else {
            random_loop(seed, 3)
        };
        let sb = trace(&p, DEFAULT_MAX_STEP).unwrap();
        let base = sphere_class(&extract_braid(&p, &opts).unwrap().word).unwrap();
        for pole in random_poles(&sb, 4, seed) {
            let w = extract_with_pole(&sb, pole, &opts).unwrap().word;
            assert_eq!(sphere_class(&w).unwrap(), base, "seed {seed} pole {pole:?}");
        }
    }
}

#[test]
fn finer_sampling_keeps_the_class() {
    for seed in 0..8u64 {
        let p = random_loop(seed + 40, 3);
        let mut opts = ExtractOptions::default();
        let coarse = sphere_class(&extract_braid(&p, &opts).unwrap().word).unwrap();
        opts.max_step /= 2.0;
        let fine = sphere_class(&extract_braid(&p, &opts).unwrap().word).unwrap();
        assert_eq!(coarse, fine, "seed {seed}");
    }
}

#[test]
fn reconstruction_keeps_the_class() {
    for seed in 0..10u64 {
        let p = random_loop(seed + 80, 3);
        let sb = trace(&p, DEFAULT_MAX_STEP).unwrap();
        let q = reconstruct_path(&sb).unwrap();
        assert_eq!(
            classify(&q).unwrap().class,
            classify(&p).unwrap().class,
            "seed {seed}"
        );
    }
}

#[test]
fn strand_through_north_pole() {
    // x1 is carried over the north pole and on around a full turn
    let p = RotationPath::from_segments(&[([0.0, 1.0, 0.0], std::f64::consts::TAU)]).unwrap();
    let sb = trace(&p, DEFAULT_MAX_STEP).unwrap();
    let choice = choose_pole(&sb, DEFAULT_CANDIDATES).unwrap();
    assert!(choice.clearance > 0.0);
    assert!(choice.pole.dot(&Vec3::z()) < 1.0);
    let r = classify(&p).unwrap();
    assert_eq!(r.class, HomotopyClass::Nontrivial);
}

#[test]
fn words_up_to_six_letters_reach_their_canonical_form() {
    let alphabet = [
        Letter::pos(1),
        Letter::neg(1),
        Letter::pos(2),
        Letter::neg(2),
    ];
    let mut certifier = Certifier::new(3, SearchBudget::default()).unwrap();
    let mut count = 0;
    for len in 0..=6u32 {
        for code in 0..4usize.pow(len) {
            let mut rest = code;
            let letters: Vec<Letter> = (0..len)
                .map(|_| {
                    let l = alphabet[rest % 4];
                    rest /= 4;
                    l
                })
                .collect();
            let w = BraidWord::from_letters(3, letters).unwrap();
            let target = canonical_rep(&sphere_class(&w).unwrap()).unwrap();
            let out = certifier.certify_equal(&w, &target).unwrap();
            let cert = out
                .certificate()
                .unwrap_or_else(|| panic!("no certificate for {w}"));
            assert!(cert.proves(&w, &target));
            count += 1;
        }
    }
    assert_eq!(count, (0..=6).map(|k| 4usize.pow(k)).sum::<usize>());
}

#[test]
fn canonical_reps_cover_all_classes() {
    let classes = SphereBraidClass::all();
    assert_eq!(classes.len(), 12);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in &classes {
        let w = canonical_rep(c).unwrap();
        assert!(w.len() <= 3);
        assert_eq!(&sphere_class(&w).unwrap(), c);
        // a random word of the same class certifies against it
        let pad: Vec<i32> = (0..4)
            .map(|_| if rng.random_bool(0.5) { 1 } else { 2 })
            .collect();
        let padded = BraidWord::new(3, &pad).unwrap();
        let v = w
            .compose(&padded)
            .unwrap()
            .compose(&padded.inverse())
            .unwrap();
        let out = Certifier::new(3, SearchBudget::default())
            .unwrap()
            .certify_equal(&v, &w)
            .unwrap();
        assert!(out.is_certified());
    }
}
