//! Lattice polytopes: hulls, Minkowski arithmetic, exact volumes, mixed
//! volumes, facet data and normal fans.

mod hull;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{
    content, determinant_of_rows, dot, rank_of_rows, AffineChart, Int, IntVector, Rat,
};

pub(crate) use hull::full_dimensional_hull;

/// Default cap on candidate points for the Ehrhart counting oracle.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// A facet `{x : normal·x = offset}` of a full-dimensional polytope lying in
/// `{x : normal·x ≥ offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: Int,
    pub vertex_indices: Vec<usize>,
}

/// Convex hull of finitely many points of ℤⁿ, stored by its vertices in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<IntVector>,
    facets: OnceLock<Vec<Facet>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl Hash for LatticePolytope {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.vertices.hash(state);
    }
}

impl PartialOrd for LatticePolytope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticePolytope {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_dim, &self.vertices).cmp(&(other.ambient_dim, &other.vertices))
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{{}}}", self.vertices.iter().join(", "))
    }
}

fn ambient_of(points: &[IntVector]) -> Result<usize> {
    let n = points
        .first()
        .ok_or_else(|| Error::domain("convex hull of an empty point set"))?
        .dim();
    if points.iter().any(|p| p.dim() != n) {
        return Err(Error::domain("points of different dimensions"));
    }
    Ok(n)
}

impl LatticePolytope {
    /// The convex hull of `points`, reduced to its extreme points.
    pub fn convex_hull(points: &[IntVector]) -> Result<Self> {
        let n = ambient_of(points)?;
        let pts: Vec<IntVector> = points.iter().cloned().sorted().dedup().collect();
        let chart = AffineChart::through(&pts)?;
        let local: Vec<Vec<Int>> = pts
            .iter()
            .map(|p| chart.coords(p).expect("point lies on its own affine hull"))
            .collect();
        let h = full_dimensional_hull(&local);
        let mut vertices: Vec<IntVector> = h.vertices.iter().map(|&i| pts[i].clone()).collect();
        vertices.sort();
        Ok(LatticePolytope {
            ambient_dim: n,
            dim: chart.dim(),
            vertices,
            facets: OnceLock::new(),
        })
    }

    pub fn point(p: IntVector) -> Self {
        LatticePolytope {
            ambient_dim: p.dim(),
            dim: 0,
            vertices: vec![p],
            facets: OnceLock::new(),
        }
    }

    /// Standard simplex `conv{0, e₁, …, eₙ}`.
    pub fn standard_simplex(n: usize) -> Self {
        let mut pts = vec![IntVector::zeros(n)];
        pts.extend((0..n).map(|i| IntVector::unit(n, i)));
        Self::convex_hull(&pts).expect("nonempty")
    }

    /// Unit cube `[0, 1]ⁿ`.
    pub fn unit_cube(n: usize) -> Self {
        let pts: Vec<IntVector> = (0..1usize << n)
            .map(|mask| IntVector::new((0..n).map(|i| Int::from((mask >> i) & 1)).collect()))
            .collect();
        Self::convex_hull(&pts).expect("nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    fn require_full(&self, what: &str) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} needs a full-dimensional polytope (dimension {} in ambient {})",
                self.dim, self.ambient_dim
            )))
        }
    }

    /// Facets with primitive inward normals, sorted by normal.
    pub fn facets(&self) -> Result<&[Facet]> {
        self.require_full("facet enumeration")?;
        Ok(self.facets.get_or_init(|| self.compute_facets()))
    }

    fn compute_facets(&self) -> Vec<Facet> {
        let origin = &self.vertices[0];
        let local: Vec<Vec<Int>> = self
            .vertices
            .iter()
            .map(|v| v.sub(origin).into_inner())
            .collect();
        let h = full_dimensional_hull(&local);
        let mut out: Vec<Facet> = h
            .facets
            .into_iter()
            .map(|f| {
                let normal = IntVector::new(f.normal);
                let offset = f.offset + normal.dot(origin);
                Facet {
                    normal,
                    offset,
                    vertex_indices: f.points.into_iter().collect(),
                }
            })
            .collect();
        out.sort_by(|a, b| a.normal.cmp(&b.normal));
        out
    }

    /// Whether `p` lies in the polytope.
    pub fn contains(&self, p: &IntVector) -> bool {
        if self.is_full_dimensional() {
            let facets = self.facets().expect("full-dimensional");
            return facets.iter().all(|f| f.normal.dot(p) >= f.offset);
        }
        let chart = AffineChart::through(&self.vertices).expect("nonempty");
        let Some(c) = chart.coords(p) else {
            return false;
        };
        let local: Vec<IntVector> = self
            .vertices
            .iter()
            .map(|v| IntVector::new(chart.coords(v).expect("vertex on chart")))
            .collect();
        let sub = LatticePolytope::convex_hull(&local).expect("nonempty");
        sub.contains(&IntVector::new(c))
    }

    pub fn translate(&self, v: &IntVector) -> Result<Self> {
        if v.dim() != self.ambient_dim {
            return Err(Error::domain("translation vector has the wrong dimension"));
        }
        Ok(LatticePolytope {
            ambient_dim: self.ambient_dim,
            dim: self.dim,
            vertices: self.vertices.iter().map(|p| p.add(v)).collect(),
            facets: OnceLock::new(),
        })
    }

    /// `c·P` for `c > 0`; fails unless every scaled vertex is integral.
    pub fn scale(&self, c: &Rat) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::domain(
                "polytopes may only be scaled by positive factors",
            ));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        let y = c * Rat::from_integer(x.clone());
                        if y.is_integer() {
                            Ok(y.to_integer())
                        } else {
                            Err(Error::domain(format!(
                                "scaling by {c} leaves the lattice at vertex {v}"
                            )))
                        }
                    })
                    .collect::<Result<Vec<Int>>>()
                    .map(IntVector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePolytope {
            ambient_dim: self.ambient_dim,
            dim: self.dim,
            vertices,
            facets: OnceLock::new(),
        })
    }

    pub fn dilate(&self, k: u32) -> Result<Self> {
        self.scale(&Rat::from_integer(Int::from(k)))
    }

    /// Minkowski sum, as the hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::domain(
                "Minkowski sum of polytopes in different dimensions",
            ));
        }
        let sums: Vec<IntVector> = self
            .vertices
            .iter()
            .cartesian_product(&other.vertices)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::convex_hull(&sums)
    }

    /// Euclidean n-volume; zero for lower-dimensional polytopes.
    ///
    /// Computed by coning over the facets from a vertex, with facet volumes
    /// measured in the facet's own lattice. Distances measured with primitive
    /// normals make both factors rational.
    pub fn volume(&self) -> Rat {
        if !self.is_full_dimensional() {
            return Rat::zero();
        }
        relative_lattice_volume(&self.vertices)
    }

    /// Volume normalized by the lattice of the polytope's own affine hull.
    pub fn relative_volume(&self) -> Rat {
        relative_lattice_volume(&self.vertices)
    }

    /// Integral (n−1)-volume of a facet of this polytope.
    pub fn facet_integral_volume(&self, facet: &Facet) -> Result<Rat> {
        let facets = self.facets()?;
        if !facets.contains(facet) {
            return Err(Error::domain("facet does not belong to this polytope"));
        }
        let pts: Vec<IntVector> = facet
            .vertex_indices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        Ok(relative_lattice_volume(&pts))
    }

    /// `Σ_F (n−1)!·vol̂(F)·ξ_F` over all facets, which is always zero.
    ///
    /// The factor `(n−1)!` makes each normalized facet volume an integer, so
    /// the residual is an integer vector.
    pub fn pascal_residual(&self) -> Result<IntVector> {
        let n = self.ambient_dim;
        let mut acc = vec![Rat::zero(); n];
        for f in self.facets()? {
            let w =
                self.facet_integral_volume(f)? * Rat::from_integer(factorial(n.saturating_sub(1)));
            for (a, c) in acc.iter_mut().zip(f.normal.iter()) {
                *a += &w * Rat::from_integer(c.clone());
            }
        }
        acc.into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::domain("non-integral normalized facet volume"))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(IntVector::new)
    }

    /// Pairs of vertex indices spanning the edges of the polytope.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.dim {
            0 => vec![],
            1 => vec![(0, 1)],
            k => {
                let chart = AffineChart::through(&self.vertices).expect("nonempty");
                let local: Vec<Vec<Int>> = self
                    .vertices
                    .iter()
                    .map(|v| chart.coords(v).expect("vertex on chart"))
                    .collect();
                let h = full_dimensional_hull(&local);
                (0..self.vertices.len())
                    .tuple_combinations()
                    .filter(|&(i, j)| {
                        let normals: Vec<Vec<Int>> = h
                            .facets
                            .iter()
                            .filter(|f| f.points.contains(&i) && f.points.contains(&j))
                            .map(|f| f.normal.clone())
                            .collect();
                        rank_of_rows(&normals, k) == k - 1
                    })
                    .collect()
            }
        }
    }

    /// Normal fan: maximal cones are generated by the inward normals of the
    /// facets through each vertex.
    pub fn normal_fan(&self) -> Result<Fan> {
        let facets = self.facets()?;
        let cones = (0..self.vertices.len())
            .map(|v| {
                let gens: Vec<IntVector> = facets
                    .iter()
                    .filter(|f| f.vertex_indices.contains(&v))
                    .map(|f| f.normal.clone())
                    .collect();
                Cone::new(self.ambient_dim, &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::from_maximal_cones(self.ambient_dim, cones)
    }

    /// Volume via lattice point counts of `kP`, `k = 0..n` (test oracle).
    ///
    /// The facet inequalities are rederived by brute force over vertex
    /// subsets, so this path shares no hull or volume code with
    /// [`LatticePolytope::volume`].
    pub fn volume_ehrhart_oracle(&self, budget: u64) -> Result<Rat> {
        self.require_full("Ehrhart counting")?;
        let n = self.ambient_dim;
        let ineqs = brute_force_inequalities(&self.vertices);
        let lo: Vec<Int> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v[i].clone()).min().unwrap())
            .collect();
        let hi: Vec<Int> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v[i].clone()).max().unwrap())
            .collect();

        let mut total: u64 = 0;
        for k in 0..=n {
            let kk = Int::from(k);
            let mut size: u64 = 1;
            for i in 0..n {
                let w = ((&hi[i] - &lo[i]) * &kk + 1u32)
                    .to_u64()
                    .unwrap_or(u64::MAX);
                size = size.saturating_mul(w);
            }
            total = total.saturating_add(size);
        }
        if total > budget {
            return Err(Error::resource(format!(
                "Ehrhart enumeration needs {total} candidate points, budget is {budget}"
            )));
        }

        let counts: Vec<Int> = (0..=n)
            .map(|k| {
                let kk = Int::from(k);
                let klo: Vec<Int> = lo.iter().map(|x| x * &kk).collect();
                let khi: Vec<Int> = hi.iter().map(|x| x * &kk).collect();
                let mut count = Int::zero();
                let mut x = klo.clone();
                loop {
                    if ineqs.iter().all(|(a, b)| dot(a, &x) >= b * &kk) {
                        count += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            return count;
                        }
                        if x[i] < khi[i] {
                            x[i] += 1;
                            break;
                        }
                        x[i] = klo[i].clone();
                        i += 1;
                    }
                }
            })
            .collect();

        // Leading coefficient of the interpolating polynomial: Δⁿ L(0) / n!.
        let mut diff = Int::zero();
        for (j, c) in counts.iter().enumerate() {
            let term = binomial(n, j) * c;
            if (n - j) % 2 == 0 {
                diff += term;
            } else {
                diff -= term;
            }
        }
        Ok(Rat::new(diff, factorial(n)))
    }
}

/// Facet inequalities `a·x ≥ b` recovered from every affinely independent
/// n-subset of the vertices.
fn brute_force_inequalities(vertices: &[IntVector]) -> Vec<(Vec<Int>, Int)> {
    let n = vertices[0].dim();
    let mut out: BTreeSet<(Vec<Int>, Int)> = BTreeSet::new();
    for subset in vertices.iter().combinations(n) {
        let base = subset[0];
        let diffs: Vec<Vec<Int>> = subset[1..]
            .iter()
            .map(|p| p.sub(base).into_inner())
            .collect();
        // Generalized cross product: cofactors of the (n−1)×n difference matrix.
        let mut normal: Vec<Int> = (0..n)
            .map(|col| {
                let minor: Vec<Vec<Int>> = diffs
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, c)| c.clone())
                            .collect()
                    })
                    .collect();
                let d = determinant_of_rows(&minor);
                if col % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect();
        let g = content(&normal);
        if g.is_zero() {
            continue;
        }
        normal.iter_mut().for_each(|c| *c = &*c / &g);
        let b = dot(&normal, base);
        let vals: Vec<Int> = vertices.iter().map(|v| dot(&normal, v)).collect();
        if vals.iter().all(|v| *v >= b) {
            out.insert((normal, b));
        } else if vals.iter().all(|v| *v <= b) {
            out.insert((normal.iter().map(|c| -c).collect(), -b));
        }
    }
    out.into_iter().collect()
}

/// Volume of `conv(points)` in the lattice of its affine hull.
pub(crate) fn relative_lattice_volume(points: &[IntVector]) -> Rat {
    let pts: Vec<IntVector> = points.iter().cloned().sorted().dedup().collect();
    let chart = AffineChart::through(&pts).expect("nonempty point set");
    let k = chart.dim();
    let local: Vec<Vec<Int>> = pts
        .iter()
        .map(|p| chart.coords(p).expect("point on its own affine hull"))
        .collect();
    match k {
        0 => Rat::one(),
        1 => {
            let lo = local.iter().map(|p| &p[0]).min().unwrap();
            let hi = local.iter().map(|p| &p[0]).max().unwrap();
            Rat::from_integer(hi - lo)
        }
        _ => {
            let h = full_dimensional_hull(&local);
            let apex = &local[h.vertices[0]];
            let mut acc = Rat::zero();
            for f in &h.facets {
                let height = dot(&f.normal, apex) - &f.offset;
                if height.is_zero() {
                    continue;
                }
                let face: Vec<IntVector> = f
                    .points
                    .iter()
                    .map(|&i| IntVector::new(local[i].clone()))
                    .collect();
                acc += Rat::from_integer(height) * relative_lattice_volume(&face);
            }
            acc / Rat::from_integer(Int::from(k))
        }
    }
}

pub(crate) fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, i| acc * Int::from(i))
}

pub(crate) fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Mixed volume `V(Δ₁, …, Δₙ)` by inclusion–exclusion over all partial
/// Minkowski sums.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<Rat> {
    let n = polytopes
        .first()
        .ok_or_else(|| Error::domain("mixed volume of no polytopes"))?
        .ambient_dim();
    if polytopes.len() != n {
        return Err(Error::domain(format!(
            "mixed volume in dimension {n} needs {n} polytopes, got {}",
            polytopes.len()
        )));
    }
    if polytopes.iter().any(|p| p.ambient_dim() != n) {
        return Err(Error::domain(
            "mixed volume of polytopes in different dimensions",
        ));
    }
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; 1 << n];
    let mut total = Rat::zero();
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = match &sums[rest] {
            Some(prev) => prev.minkowski_sum(&polytopes[low])?,
            None => polytopes[low].clone(),
        };
        let vol = s.volume();
        if (n - mask.count_ones() as usize).is_even() {
            total += vol;
        } else {
            total -= vol;
        }
        sums[mask] = Some(s);
    }
    Ok(total / Rat::from_integer(factorial(n)))
}

/// A formal difference `plus − minus` of lattice polytopes.
#[derive(Clone, Debug)]
pub struct VirtualPolytope {
    pub plus: LatticePolytope,
    pub minus: LatticePolytope,
}

impl VirtualPolytope {
    pub fn new(plus: LatticePolytope, minus: LatticePolytope) -> Result<Self> {
        if plus.ambient_dim() != minus.ambient_dim() {
            return Err(Error::domain(
                "virtual polytope parts in different dimensions",
            ));
        }
        Ok(VirtualPolytope { plus, minus })
    }
}

/// `a = b` in the group of virtual polytopes: `a⁺ + b⁻ = b⁺ + a⁻`.
pub fn virtual_equal(a: &VirtualPolytope, b: &VirtualPolytope) -> Result<bool> {
    Ok(a.plus.minkowski_sum(&b.minus)? == b.plus.minkowski_sum(&a.minus)?)
}
