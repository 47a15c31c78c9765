//! Static SVG diagrams of plane polygons and plane fans.
//!
//! Coordinates are computed exactly and rounded to two decimals only when
//! written, so equal inputs give byte-identical files.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use tropkit_core::fan::WeightedFan;
use tropkit_core::lattice::{Int, IntVector, Rat};
use tropkit_core::polytope::LatticePolytope;
use tropkit_core::{Error, Result};

const SIZE: i64 = 400;
const MARGIN: i64 = 40;
const RADIUS: i64 = 160;
const MAX_GRID: i64 = 40;

pub enum Figure {
    Polytope(LatticePolytope),
    /// A plane fan; weights are printed when `labelled`.
    Fan {
        fan: WeightedFan,
        labelled: bool,
    },
}

/// Decimal with two places, rounded half away from zero.
fn fixed(x: &Rat) -> String {
    let scaled = x * Rat::from_integer(BigInt::from(100));
    let (n, d) = (scaled.numer().abs(), scaled.denom().clone());
    let (q, r) = n.div_rem(&d);
    let q = if &r * 2 >= d { q + 1 } else { q };
    let (whole, frac) = q.div_rem(&BigInt::from(100));
    let sign = if scaled.is_negative() && !(whole.is_zero() && frac.is_zero()) {
        "-"
    } else {
        ""
    };
    format!("{sign}{whole}.{frac:02}")
}

fn r(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
}

fn cross(a: &[Rat; 2], b: &[Rat; 2]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Counter-clockwise order of points around `center`.
fn angular_sort(points: &mut [[Rat; 2]], center: &[Rat; 2]) {
    let rel = |p: &[Rat; 2]| [&p[0] - &center[0], &p[1] - &center[1]];
    let upper = |v: &[Rat; 2]| v[1].is_positive() || (v[1].is_zero() && v[0].is_positive());
    points.sort_by(|a, b| {
        let (ra, rb) = (rel(a), rel(b));
        match (upper(&ra), upper(&rb)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => Rat::zero().cmp(&cross(&ra, &rb)),
        }
    });
}

fn points_attr(pts: &[[Rat; 2]]) -> String {
    pts.iter()
        .map(|p| format!("{},{}", fixed(&p[0]), fixed(&p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render(figure: &Figure) -> Result<String> {
    match figure {
        Figure::Polytope(p) => render_polytope(p),
        Figure::Fan { fan, labelled } => render_fan(fan, *labelled),
    }
}

fn render_polytope(p: &LatticePolytope) -> Result<String> {
    if p.ambient_dim() != 2 {
        return Err(Error::domain(format!(
            "diagrams are drawn in the plane only, got ambient dimension {}",
            p.ambient_dim()
        )));
    }
    let coord = |i: usize| p.vertices().iter().map(move |v| v[i].clone());
    let lo: Vec<Int> = (0..2)
        .map(|i| coord(i).min().expect("nonempty") - 1)
        .collect();
    let hi: Vec<Int> = (0..2)
        .map(|i| coord(i).max().expect("nonempty") + 1)
        .collect();
    let span = (&hi[0] - &lo[0]).max(&hi[1] - &lo[1]);
    let scale = Rat::new(BigInt::from(SIZE - 2 * MARGIN), span);
    let to_px = |x: &Int, y: &Int| -> [Rat; 2] {
        [
            r(MARGIN) + Rat::from_integer(x - &lo[0]) * &scale,
            r(SIZE - MARGIN) - Rat::from_integer(y - &lo[1]) * &scale,
        ]
    };

    let mut out = String::new();
    header(&mut out);
    let width = &hi[0] - &lo[0];
    let height = &hi[1] - &lo[1];
    if width <= BigInt::from(MAX_GRID) && height <= BigInt::from(MAX_GRID) {
        let mut x = lo[0].clone();
        while x <= hi[0] {
            let mut y = lo[1].clone();
            while y <= hi[1] {
                let c = to_px(&x, &y);
                let _ = writeln!(
                    out,
                    r##"  <circle cx="{}" cy="{}" r="1.5" fill="#b0b0b0"/>"##,
                    fixed(&c[0]),
                    fixed(&c[1])
                );
                y += 1;
            }
            x += 1;
        }
    }
    let mut px: Vec<[Rat; 2]> = p.vertices().iter().map(|v| to_px(&v[0], &v[1])).collect();
    match p.dim() {
        2 => {
            let k = r(px.len() as i64);
            let center = [
                px.iter().map(|q| q[0].clone()).sum::<Rat>() / &k,
                px.iter().map(|q| q[1].clone()).sum::<Rat>() / &k,
            ];
            angular_sort(&mut px, &center);
            let _ = writeln!(
                out,
                r##"  <polygon points="{}" fill="#cfe2f3" stroke="#1f4e79" stroke-width="2"/>"##,
                points_attr(&px)
            );
        }
        1 => {
            let _ = writeln!(
                out,
                r##"  <polyline points="{}" fill="none" stroke="#1f4e79" stroke-width="2"/>"##,
                points_attr(&px)
            );
        }
        _ => {}
    }
    for (v, c) in p
        .vertices()
        .iter()
        .zip(p.vertices().iter().map(|v| to_px(&v[0], &v[1])))
    {
        let _ = writeln!(
            out,
            r##"  <circle cx="{}" cy="{}" r="4" fill="#1f4e79"><title>({}, {})</title></circle>"##,
            fixed(&c[0]),
            fixed(&c[1]),
            v[0],
            v[1]
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Where the ray through `v` leaves the square of half-width [`RADIUS`].
fn ray_end(v: &IntVector) -> [Rat; 2] {
    let norm = v[0].abs().max(v[1].abs());
    let s = Rat::new(BigInt::from(RADIUS), norm);
    [
        Rat::from_integer(v[0].clone()) * &s,
        Rat::from_integer(v[1].clone()) * &s,
    ]
}

fn to_screen(p: &[Rat; 2]) -> [Rat; 2] {
    [r(SIZE / 2) + &p[0], r(SIZE / 2) - &p[1]]
}

fn render_fan(fan: &WeightedFan, labelled: bool) -> Result<String> {
    if fan.ambient_dim() != 2 {
        return Err(Error::domain(format!(
            "diagrams are drawn in the plane only, got ambient dimension {}",
            fan.ambient_dim()
        )));
    }
    let mut out = String::new();
    header(&mut out);
    let (c, lo, hi) = (SIZE / 2, SIZE / 2 - RADIUS, SIZE / 2 + RADIUS);
    let _ = writeln!(
        out,
        r##"  <line x1="{lo}" y1="{c}" x2="{hi}" y2="{c}" stroke="#dddddd" stroke-width="1"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{c}" y1="{lo}" x2="{c}" y2="{hi}" stroke="#dddddd" stroke-width="1"/>"##
    );
    let corners: Vec<[Rat; 2]> = [[1, 1], [-1, 1], [-1, -1], [1, -1]]
        .iter()
        .map(|[x, y]| [r(x * RADIUS), r(y * RADIUS)])
        .collect();
    for (cone, w) in fan.support_cones() {
        let rays = cone.rays();
        match rays.len() {
            2 => {
                let mut boundary: Vec<[Rat; 2]> = rays.iter().map(ray_end).collect();
                boundary.extend(
                    corners
                        .iter()
                        .filter(|q| cone.contains_rat(&q[..]))
                        .cloned(),
                );
                let origin = [Rat::zero(), Rat::zero()];
                // A pointed plane cone lies in a half-plane, so cross products order it.
                boundary.sort_by(|a, b| Rat::zero().cmp(&cross(a, b)));
                boundary.dedup();
                let mut poly = vec![to_screen(&origin)];
                poly.extend(boundary.iter().map(to_screen));
                let _ = writeln!(
                    out,
                    r##"  <polygon points="{}" fill="#cfe2f3" fill-opacity="0.6" stroke="#1f4e79" stroke-width="1"/>"##,
                    points_attr(&poly)
                );
                for ray in rays {
                    let e = to_screen(&ray_end(ray));
                    let _ = writeln!(
                        out,
                        r##"  <line x1="{c}" y1="{c}" x2="{}" y2="{}" stroke="#1f4e79" stroke-width="2"/>"##,
                        fixed(&e[0]),
                        fixed(&e[1])
                    );
                }
                if labelled {
                    let sum = rays[0].add(&rays[1]);
                    let mid = to_screen(&ray_end(&sum).map(|x| x / r(2)));
                    let _ = writeln!(
                        out,
                        r##"  <text x="{}" y="{}" font-family="sans-serif" font-size="14" fill="#000000">{w}</text>"##,
                        fixed(&mid[0]),
                        fixed(&mid[1])
                    );
                }
            }
            1 => {
                let end = ray_end(&rays[0]);
                let e = to_screen(&end);
                let _ = writeln!(
                    out,
                    r##"  <line x1="{c}" y1="{c}" x2="{}" y2="{}" stroke="#1f4e79" stroke-width="3"/>"##,
                    fixed(&e[0]),
                    fixed(&e[1])
                );
                if labelled {
                    let at = to_screen(&end.map(|x| x * r(7) / r(8)));
                    let _ = writeln!(
                        out,
                        r##"  <text x="{}" y="{}" font-family="sans-serif" font-size="14" fill="#000000" dx="6" dy="-6">{w}</text>"##,
                        fixed(&at[0]),
                        fixed(&at[1])
                    );
                }
            }
            _ => {}
        }
    }
    let _ = writeln!(
        out,
        r##"  <circle cx="{c}" cy="{c}" r="3" fill="#000000"/>"##
    );
    out.push_str("</svg>\n");
    Ok(out)
}
