#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropkit_core::fan::{Cone, WeightedFan};
use tropkit_core::lattice::{primitive, Int, IntVector, Rat};
use tropkit_core::polytope::LatticePolytope;

pub fn iv(c: &[i64]) -> IntVector {
    IntVector::from_i64s(c)
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Int {
    Int::from(p)
}

/// Random lattice polytope in `[lo, hi]ⁿ` from `k` random points; may be
/// lower-dimensional.
pub fn random_polytope(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    lo: i64,
    hi: i64,
) -> LatticePolytope {
    let pts: Vec<IntVector> = (0..k)
        .map(|_| {
            IntVector::new(
                (0..n)
                    .map(|_| Int::from(rng.random_range(lo..=hi)))
                    .collect(),
            )
        })
        .collect();
    LatticePolytope::convex_hull(&pts).unwrap()
}

/// Like [`random_polytope`] but retried until full-dimensional.
pub fn random_full_polytope(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    lo: i64,
    hi: i64,
) -> LatticePolytope {
    loop {
        let p = random_polytope(rng, n, k, lo, hi);
        if p.is_full_dimensional() {
            return p;
        }
    }
}

pub fn points_strategy(
    n: usize,
    lo: i64,
    hi: i64,
    count: std::ops::Range<usize>,
) -> impl Strategy<Value = Vec<IntVector>> {
    prop::collection::vec(prop::collection::vec(lo..=hi, n), count)
        .prop_map(|pts| pts.iter().map(|p| IntVector::from_i64s(p)).collect())
}

pub fn polytope_strategy(
    n: usize,
    lo: i64,
    hi: i64,
    count: std::ops::Range<usize>,
) -> impl Strategy<Value = LatticePolytope> {
    points_strategy(n, lo, hi, count).prop_map(|pts| LatticePolytope::convex_hull(&pts).unwrap())
}

pub fn full_polytope_strategy(
    n: usize,
    lo: i64,
    hi: i64,
    count: std::ops::Range<usize>,
) -> impl Strategy<Value = LatticePolytope> {
    polytope_strategy(n, lo, hi, count).prop_filter("full-dimensional", |p| p.is_full_dimensional())
}

/// Twice the area of a polygon with counter-clockwise ordered vertices.
pub fn shoelace2(poly: &[IntVector]) -> Int {
    let k = poly.len();
    (0..k)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % k]);
            &a[0] * &b[1] - &a[1] * &b[0]
        })
        .sum()
}

/// Counter-clockwise order of the vertices of a convex polygon.
pub fn ccw_order(vertices: &[IntVector]) -> Vec<IntVector> {
    // Centroid times k keeps everything integral.
    let k = Int::from(vertices.len());
    let c: Vec<Int> = (0..2)
        .map(|i| vertices.iter().map(|v| v[i].clone()).sum())
        .collect();
    let rel: Vec<(Int, Int, &IntVector)> = vertices
        .iter()
        .map(|v| (&v[0] * &k - &c[0], &v[1] * &k - &c[1], v))
        .collect();
    let half = |x: &Int, y: &Int| -> u8 {
        if *y > Int::from(0) || (*y == Int::from(0) && *x > Int::from(0)) {
            0
        } else {
            1
        }
    };
    let mut sorted = rel.clone();
    sorted.sort_by(|a, b| {
        half(&a.0, &a.1).cmp(&half(&b.0, &b.1)).then_with(|| {
            let cross = &a.0 * &b.1 - &a.1 * &b.0;
            Int::from(0).cmp(&cross)
        })
    });
    sorted.into_iter().map(|(_, _, v)| v.clone()).collect()
}

/// Random balanced 1-fan in ℝ²: `k` weighted random rays plus the ray that
/// balances them, with rays of equal direction merged.
pub fn random_balanced_curve(rng: &mut ChaCha8Rng, k: usize) -> WeightedFan {
    let mut rays: BTreeMap<IntVector, Int> = BTreeMap::new();
    let mut total = IntVector::zeros(2);
    let add = |v: IntVector, rays: &mut BTreeMap<IntVector, Int>| {
        let (p, len) = primitive(&v).unwrap();
        *rays.entry(p).or_insert_with(|| Int::from(0)) += len;
    };
    for _ in 0..k {
        let v = loop {
            let v = IntVector::from_i64s(&[rng.random_range(-3..=3), rng.random_range(-3..=3)]);
            if !v.is_zero() {
                break v;
            }
        };
        let w = Int::from(rng.random_range(1..=3));
        let wv = v.scale(&w);
        total = total.add(&wv);
        add(wv, &mut rays);
    }
    if !total.is_zero() {
        add(total.neg(), &mut rays);
    }
    let cones = rays
        .into_iter()
        .map(|(r, w)| (Cone::new(2, &[r]).unwrap(), Rat::from_integer(w)))
        .collect();
    WeightedFan::from_cones(2, 1, cones).unwrap()
}

/// The polygon whose edges are the balanced weighted rays of a 1-fan in ℝ²
/// turned by a quarter, chained in angular order.
pub fn dual_polygon(curve: &WeightedFan) -> LatticePolytope {
    let edges: Vec<IntVector> = curve
        .support_cones()
        .map(|(c, w)| {
            let r = &c.rays()[0];
            let w = w.to_integer();
            IntVector::new(vec![-&r[1] * &w, &r[0] * &w])
        })
        .collect();
    let ordered = ccw_order_directions(&edges);
    let mut pts = vec![IntVector::zeros(2)];
    for e in ordered {
        let last = pts.last().unwrap().add(&e);
        pts.push(last);
    }
    LatticePolytope::convex_hull(&pts).unwrap()
}

fn ccw_order_directions(dirs: &[IntVector]) -> Vec<IntVector> {
    let zero = Int::from(0);
    let half = |v: &IntVector| u8::from(!(v[1] > zero || (v[1] == zero && v[0] > zero)));
    let mut out = dirs.to_vec();
    out.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            zero.cmp(&cross)
        })
    });
    out
}
