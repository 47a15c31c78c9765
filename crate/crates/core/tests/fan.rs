mod common;

use common::{dual_polygon, random_balanced_curve, random_full_polytope, rat};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropkit_core::fan::{
    box_fraction, intersection_at_shift, is_transverse, sample_shift, stable_intersection_number,
    weighted_equivalent, weighted_sum, Cone, Fan, ShiftPolicy, ShiftedComplex, WeightedFan,
};
use tropkit_core::lattice::{Int, Rat};
use tropkit_core::polytope::mixed_volume;
use tropkit_core::tropical::{tropical_hypersurface, LaurentPolynomial};

fn cone(n: usize, gens: &[&[i64]]) -> Cone {
    Cone::from_i64s(n, gens).unwrap()
}

fn line(w: [i64; 3]) -> WeightedFan {
    WeightedFan::from_cones(
        2,
        1,
        vec![
            (cone(2, &[&[1, 0]]), rat(w[0], 1)),
            (cone(2, &[&[0, 1]]), rat(w[1], 1)),
            (cone(2, &[&[-1, -1]]), rat(w[2], 1)),
        ],
    )
    .unwrap()
}

fn shift(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|x| rat(*x, 1)).collect()
}

/// Complete 2-fan with constant weight `w`, from a random polygon's normal fan.
fn random_complete(rng: &mut ChaCha8Rng, n: usize, w: i64) -> WeightedFan {
    let p = random_full_polytope(rng, n, n + 3, -3, 3);
    let fan = p.normal_fan().unwrap();
    let cones = fan
        .maximal_cones()
        .into_iter()
        .map(|c| (c, rat(w, 1)))
        .collect();
    WeightedFan::from_cones(n, n, cones).unwrap()
}

fn random_surface(rng: &mut ChaCha8Rng) -> WeightedFan {
    loop {
        let pts: Vec<_> = (0..rng.random_range(4..7))
            .map(|_| {
                tropkit_core::lattice::IntVector::from_i64s(&[
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                ])
            })
            .collect();
        let Ok(f) = LaurentPolynomial::generic(3, &pts) else {
            continue;
        };
        let t = tropical_hypersurface(&f).unwrap();
        if !t.weighted.support_cones().next().is_none() {
            return t.weighted;
        }
    }
}

#[test]
fn transversality_fixture() {
    let l = line([1, 1, 1]);
    let at = |s: &[i64]| ShiftedComplex::new(l.clone(), shift(s)).unwrap();
    assert!(!is_transverse(&l, &at(&[1, 1])).unwrap());
    assert!(is_transverse(&l, &at(&[1, 2])).unwrap());
    assert_eq!(
        intersection_at_shift(&l, &l, &shift(&[1, 1])).unwrap(),
        None
    );
    assert_eq!(
        intersection_at_shift(&l, &l, &shift(&[1, 2])).unwrap(),
        Some(Rat::one())
    );
}

#[test]
fn intersection_table() {
    let policy = ShiftPolicy {
        seed: 7,
        verifications: 5,
    };
    assert_eq!(
        stable_intersection_number(&line([1, 1, 1]), &line([1, 1, 1]), policy).unwrap(),
        Rat::one()
    );
    let d = line([1, 1, 1]).scaled(&rat(2, 1));
    let e = line([1, 1, 1]).scaled(&rat(3, 1));
    assert_eq!(
        stable_intersection_number(&d, &e, policy).unwrap(),
        rat(6, 1)
    );
    let diag = |v: &[i64]| {
        let w: Vec<i64> = v.iter().map(|x| -x).collect();
        WeightedFan::from_cones(
            2,
            1,
            vec![(cone(2, &[v]), Rat::one()), (cone(2, &[&w]), Rat::one())],
        )
        .unwrap()
    };
    assert_eq!(
        stable_intersection_number(&diag(&[1, 1]), &diag(&[1, -1]), policy).unwrap(),
        rat(2, 1)
    );
}

#[test]
fn unbalanced_line_depends_on_shift() {
    let bad = line([1, 1, 2]);
    assert!(!bad.is_balanced());
    let axis = WeightedFan::from_cones(
        2,
        1,
        vec![
            (cone(2, &[&[1, 0]]), Rat::one()),
            (cone(2, &[&[-1, 0]]), Rat::one()),
        ],
    )
    .unwrap();
    let up = intersection_at_shift(&bad, &axis, &shift(&[1, 1]))
        .unwrap()
        .unwrap();
    let down = intersection_at_shift(&bad, &axis, &shift(&[1, -1]))
        .unwrap()
        .unwrap();
    assert_ne!(up, down);
    assert!(stable_intersection_number(&bad, &axis, ShiftPolicy::default()).is_err());
}

#[test]
fn shift_invariance_for_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..40 {
        let a = {
            let k = rng.random_range(1..4);
            random_balanced_curve(&mut rng, k)
        };
        let b = {
            let k = rng.random_range(1..4);
            random_balanced_curve(&mut rng, k)
        };
        let mut values = Vec::new();
        let mut shifts = ChaCha8Rng::seed_from_u64(round);
        while values.len() < 5 {
            if let Some(v) = intersection_at_shift(&a, &b, &sample_shift(&mut shifts, 2)).unwrap() {
                values.push(v);
            }
        }
        assert!(
            values.windows(2).all(|w| w[0] == w[1]),
            "{a} vs {b}: {values:?}"
        );
        // Independent value: twice the mixed area of the dual polygons.
        let mv = mixed_volume(&[dual_polygon(&a), dual_polygon(&b)]).unwrap();
        assert_eq!(values[0], mv * rat(2, 1), "{a} vs {b}");
        let policy = ShiftPolicy {
            seed: round,
            verifications: 5,
        };
        assert_eq!(
            stable_intersection_number(&a, &b, policy).unwrap(),
            values[0]
        );
    }
}

#[test]
fn shift_invariance_curve_against_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spatial_line = WeightedFan::from_cones(
        3,
        1,
        vec![
            (cone(3, &[&[1, 0, 0]]), Rat::one()),
            (cone(3, &[&[0, 1, 0]]), Rat::one()),
            (cone(3, &[&[0, 0, 1]]), Rat::one()),
            (cone(3, &[&[-1, -1, -1]]), Rat::one()),
        ],
    )
    .unwrap();
    assert!(spatial_line.is_balanced());
    for seed in 0..6 {
        let s = random_surface(&mut rng);
        let policy = ShiftPolicy {
            seed,
            verifications: 5,
        };
        let v = stable_intersection_number(&spatial_line, &s, policy).unwrap();
        let again = stable_intersection_number(
            &s,
            &spatial_line,
            ShiftPolicy {
                seed: seed + 100,
                verifications: 5,
            },
        )
        .unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn equivalence_relation_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let n = rng.random_range(2..4);
        let heavy = rng.random_bool(0.3);
        let a = random_complete(&mut rng, n, 1);
        let b = random_complete(&mut rng, n, 1);
        let c = random_complete(&mut rng, n, if heavy { 2 } else { 1 });
        assert!(weighted_equivalent(&a, &a).unwrap());
        let ab = weighted_equivalent(&a, &b).unwrap();
        let bc = weighted_equivalent(&b, &c).unwrap();
        let ac = weighted_equivalent(&a, &c).unwrap();
        assert!(ab);
        assert_eq!(ab, weighted_equivalent(&b, &a).unwrap());
        assert_eq!(bc, weighted_equivalent(&c, &b).unwrap());
        if ab && bc {
            assert!(ac);
        }
        if ab && ac {
            assert!(bc);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let a = random_balanced_curve(&mut rng, 2);
        let b = random_balanced_curve(&mut rng, 2);
        let zero = WeightedFan::zero(2, 1);
        let ab = weighted_sum(&a, &b).unwrap();
        assert!(weighted_equivalent(&a, &a).unwrap());
        assert_eq!(
            weighted_equivalent(&a, &b).unwrap(),
            weighted_equivalent(&b, &a).unwrap()
        );
        assert!(weighted_equivalent(&weighted_sum(&a, &zero).unwrap(), &a).unwrap());
        let back = weighted_sum(&ab, &b.scaled(&rat(-1, 1))).unwrap();
        assert!(weighted_equivalent(&back, &a).unwrap());
    }
}

#[test]
fn sums_of_balanced_fans_are_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..30 {
        let a = {
            let k = rng.random_range(1..4);
            random_balanced_curve(&mut rng, k)
        };
        let b = {
            let k = rng.random_range(1..4);
            random_balanced_curve(&mut rng, k)
        };
        assert!(a.is_balanced() && b.is_balanced());
        assert!(weighted_sum(&a, &b).unwrap().is_balanced());
    }
    for _ in 0..8 {
        let a = random_surface(&mut rng);
        let b = random_surface(&mut rng);
        assert!(weighted_sum(&a, &b).unwrap().is_balanced());
    }
}

#[test]
fn box_fractions_of_complete_fans_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in [2usize, 3] {
        for _ in 0..12 {
            let p = random_full_polytope(&mut rng, n, n + 4, -3, 3);
            let fan = p.normal_fan().unwrap();
            assert!(fan.is_complete());
            let total: Rat = fan.maximal_cones().iter().map(box_fraction).sum();
            assert_eq!(total, Rat::one());
        }
    }
    assert_eq!(box_fraction(&cone(2, &[&[1, 0], &[0, 1]])), rat(1, 4));
    assert_eq!(box_fraction(&cone(2, &[&[1, 0], &[1, 1]])), rat(1, 8));
    assert_eq!(
        box_fraction(&cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
        rat(1, 8)
    );
}

#[test]
fn fan_validation_rules() {
    let q = cone(2, &[&[1, 0], &[0, 1]]);
    assert!(Fan::validate(2, vec![q.clone()]).is_err());
    let all: Vec<Cone> = q.faces().into_iter().collect();
    assert!(Fan::validate(2, all).is_ok());
    let overlap = vec![q, cone(2, &[&[1, 1], &[-1, 1]])];
    assert!(Fan::from_maximal_cones(2, overlap).is_err());
    assert!(Cone::from_i64s(2, &[&[1, 0], &[-1, 0]]).is_err());
    let empty = WeightedFan::zero(2, 1);
    assert!(empty.is_balanced());
    assert!(
        weighted_sum(&line([1, 1, 1]), &line([1, 1, 1]).scaled(&rat(-1, 1)))
            .unwrap()
            .support_cones()
            .next()
            .is_none()
    );
    assert!(Rat::zero() < Rat::from_integer(Int::from(1)));
}
