//! Incremental beneath–beyond hull for full-dimensional point sets in ℤ^d.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::lattice::{dot, integer_kernel, rank_of_rows, Int, IntMatrix};

#[derive(Clone, Debug)]
pub(crate) struct HullFacet {
    /// Primitive inward normal.
    pub normal: Vec<Int>,
    pub offset: Int,
    /// Every input point lying on the facet hyperplane.
    pub points: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet>,
}

fn affine_rank(pts: &[Vec<Int>], idx: &[usize]) -> usize {
    let Some((&first, rest)) = idx.split_first() else {
        return 0;
    };
    let d = pts[first].len();
    let diffs: Vec<Vec<Int>> = rest
        .iter()
        .map(|&i| pts[i].iter().zip(&pts[first]).map(|(a, b)| a - b).collect())
        .collect();
    rank_of_rows(&diffs, d)
}

/// Primitive normal of the hyperplane through the indexed points, if they span one.
fn hyperplane_normal(pts: &[Vec<Int>], idx: &[usize]) -> Option<Vec<Int>> {
    let first = idx[0];
    let d = pts[first].len();
    let diffs: Vec<Vec<Int>> = idx[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(&pts[first]).map(|(a, b)| a - b).collect())
        .collect();
    let k = integer_kernel(&IntMatrix::new(d, diffs).ok()?);
    (k.nrows() == 1).then(|| k.row(0).to_vec())
}

/// Hull of distinct points whose affine span is all of ℝ^d.
pub(crate) fn full_dimensional_hull(pts: &[Vec<Int>]) -> Hull {
    let n = pts.len();
    let d = pts[0].len();
    if d == 0 {
        return Hull {
            vertices: vec![0],
            facets: vec![],
        };
    }
    if d == 1 {
        let lo = (0..n).min_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
        let hi = (0..n).max_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
        return Hull {
            vertices: vec![lo, hi],
            facets: vec![
                HullFacet {
                    normal: vec![Int::from(1)],
                    offset: pts[lo][0].clone(),
                    points: [lo].into(),
                },
                HullFacet {
                    normal: vec![Int::from(-1)],
                    offset: -pts[hi][0].clone(),
                    points: [hi].into(),
                },
            ],
        };
    }

    let mut simplex = vec![0usize];
    for i in 1..n {
        if simplex.len() == d + 1 {
            break;
        }
        simplex.push(i);
        if affine_rank(pts, &simplex) != simplex.len() - 1 {
            simplex.pop();
        }
    }
    assert_eq!(simplex.len(), d + 1, "point set is not full-dimensional");

    let mut facets: Vec<HullFacet> = Vec::new();
    for &j in &simplex {
        let others: Vec<usize> = simplex.iter().copied().filter(|&i| i != j).collect();
        let mut normal = hyperplane_normal(pts, &others).expect("simplex facet");
        let mut offset = dot(&normal, &pts[others[0]]);
        if dot(&normal, &pts[j]) < offset {
            normal.iter_mut().for_each(|c| *c = -c.clone());
            offset = -offset;
        }
        facets.push(HullFacet {
            normal,
            offset,
            points: others.into_iter().collect(),
        });
    }

    let in_simplex: BTreeSet<usize> = simplex.iter().copied().collect();
    for p in (0..n).filter(|i| !in_simplex.contains(i)) {
        let sides: Vec<Int> = facets
            .iter()
            .map(|f| dot(&f.normal, &pts[p]) - &f.offset)
            .collect();
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&i| sides[i].is_negative())
            .collect();
        if visible.is_empty() {
            for (f, s) in facets.iter_mut().zip(&sides) {
                if s.is_zero() {
                    f.points.insert(p);
                }
            }
            continue;
        }

        let mut created: Vec<HullFacet> = Vec::new();
        for &v in &visible {
            for g in (0..facets.len()).filter(|&g| !sides[g].is_negative()) {
                let ridge: Vec<usize> = facets[v]
                    .points
                    .intersection(&facets[g].points)
                    .copied()
                    .collect();
                if ridge.len() + 1 < d || affine_rank(pts, &ridge) != d - 2 {
                    continue;
                }
                if sides[g].is_zero() {
                    // p is coplanar with g, which simply grows.
                    continue;
                }
                let mut idx = ridge.clone();
                idx.push(p);
                let mut normal =
                    hyperplane_normal(pts, &idx).expect("ridge and apex span a hyperplane");
                let mut offset = dot(&normal, &pts[p]);
                let q = facets[g]
                    .points
                    .iter()
                    .copied()
                    .find(|i| !ridge.contains(i))
                    .expect("facet larger than ridge");
                if dot(&normal, &pts[q]) < offset {
                    normal.iter_mut().for_each(|c| *c = -c.clone());
                    offset = -offset;
                }
                if let Some(existing) = created
                    .iter_mut()
                    .find(|f| f.normal == normal && f.offset == offset)
                {
                    existing.points.extend(idx);
                } else {
                    created.push(HullFacet {
                        normal,
                        offset,
                        points: idx.into_iter().collect(),
                    });
                }
            }
        }

        let mut kept: Vec<HullFacet> = Vec::with_capacity(facets.len() + created.len());
        for (mut f, s) in facets.into_iter().zip(sides) {
            if s.is_negative() {
                continue;
            }
            if s.is_zero() {
                f.points.insert(p);
            }
            kept.push(f);
        }
        kept.extend(created);
        facets = kept;
    }

    let vertices = (0..n)
        .filter(|&i| {
            let normals: Vec<Vec<Int>> = facets
                .iter()
                .filter(|f| f.points.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            rank_of_rows(&normals, d) == d
        })
        .collect();
    Hull { vertices, facets }
}
