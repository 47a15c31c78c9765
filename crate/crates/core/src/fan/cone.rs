use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    dot, dot_rat, integer_kernel, primitive, rank_of_rows, saturate, Int, IntMatrix, IntVector,
    Rat, Sublattice,
};

/// A strictly convex rational polyhedral cone carrying both its extreme rays
/// and its facet inequalities.
///
/// Equations describe the orthogonal complement of the linear span; facet
/// normals lie in the span, so the pair (equations, facets) is canonical.
#[derive(Clone, Debug)]
pub struct Cone {
    n: usize,
    rays: Vec<IntVector>,
    facets: Vec<IntVector>,
    equations: Vec<IntVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.rays.len(), &self.rays).cmp(&(other.n, other.rays.len(), &other.rays))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{{}}}", self.rays.iter().join(", "))
    }
}

fn kernel_rows(n: usize, rows: Vec<Vec<Int>>) -> Vec<IntVector> {
    integer_kernel(&IntMatrix::new(n, rows).expect("rows of equal length")).row_vectors()
}

impl Cone {
    /// The cone `{0}` in ℝⁿ.
    pub fn zero(n: usize) -> Self {
        Cone {
            n,
            rays: vec![],
            facets: vec![],
            equations: (0..n).map(|i| IntVector::unit(n, i)).collect(),
        }
    }

    /// The cone generated by `generators`; fails if it contains a line.
    pub fn new(n: usize, generators: &[IntVector]) -> Result<Self> {
        if generators.iter().any(|g| g.dim() != n) {
            return Err(Error::domain("cone generator has the wrong dimension"));
        }
        let gens: Vec<IntVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| primitive(g).expect("nonzero").0)
            .sorted()
            .dedup()
            .collect();
        if gens.is_empty() {
            return Ok(Cone::zero(n));
        }
        let equations = kernel_rows(n, gens.iter().map(|g| g.coords().to_vec()).collect());
        let d = n - equations.len();
        let eq_rows: Vec<Vec<Int>> = equations.iter().map(|e| e.coords().to_vec()).collect();

        let mut facets: BTreeSet<IntVector> = BTreeSet::new();
        if d == 1 {
            if gens.len() > 1 {
                return Err(Error::domain(format!(
                    "cone generated by {} contains a line",
                    gens.iter().join(", ")
                )));
            }
            facets.insert(gens[0].clone());
        } else {
            for subset in gens.iter().combinations(d - 1) {
                let mut rows: Vec<Vec<Int>> = subset.iter().map(|g| g.coords().to_vec()).collect();
                rows.extend(eq_rows.iter().cloned());
                let k = kernel_rows(n, rows);
                if k.len() != 1 {
                    continue;
                }
                let a = &k[0];
                let vals: Vec<Int> = gens.iter().map(|g| a.dot(g)).collect();
                if vals.iter().all(|v| !v.is_negative()) {
                    facets.insert(a.clone());
                } else if vals.iter().all(|v| !v.is_positive()) {
                    facets.insert(a.neg());
                }
            }
        }
        let facets: Vec<IntVector> = facets.into_iter().collect();
        let mut all: Vec<Vec<Int>> = facets.iter().map(|f| f.coords().to_vec()).collect();
        all.extend(eq_rows.iter().cloned());
        if rank_of_rows(&all, n) < n {
            return Err(Error::domain(format!(
                "cone generated by {} contains a line",
                gens.iter().join(", ")
            )));
        }

        let rays: Vec<IntVector> = gens
            .into_iter()
            .filter(|g| {
                let mut tight: Vec<Vec<Int>> = facets
                    .iter()
                    .filter(|f| f.dot(g).is_zero())
                    .map(|f| f.coords().to_vec())
                    .collect();
                tight.extend(eq_rows.iter().cloned());
                rank_of_rows(&tight, n) == n - 1
            })
            .collect();
        Ok(Cone {
            n,
            rays,
            facets,
            equations,
        })
    }

    pub fn from_i64s(n: usize, generators: &[&[i64]]) -> Result<Self> {
        let g: Vec<IntVector> = generators.iter().map(|c| IntVector::from_i64s(c)).collect();
        Self::new(n, &g)
    }

    /// The cone `{x : a·x ≥ 0 ∀ a ∈ inequalities, e·x = 0 ∀ e ∈ equations}`,
    /// which must be pointed.
    pub fn from_inequalities(
        n: usize,
        inequalities: &[IntVector],
        equations: &[IntVector],
    ) -> Result<Self> {
        let eq_rows: Vec<Vec<Int>> = equations.iter().map(|e| e.coords().to_vec()).collect();
        let mut all: Vec<Vec<Int>> = inequalities.iter().map(|a| a.coords().to_vec()).collect();
        all.extend(eq_rows.iter().cloned());
        if rank_of_rows(&all, n) < n {
            return Err(Error::domain(
                "inequality system defines a cone containing a line",
            ));
        }
        let r = rank_of_rows(&eq_rows, n);
        if r == n {
            return Ok(Cone::zero(n));
        }
        let mut rays: BTreeSet<IntVector> = BTreeSet::new();
        let feasible = |v: &IntVector| inequalities.iter().all(|a| !a.dot(v).is_negative());
        for subset in inequalities.iter().combinations(n - 1 - r) {
            let mut rows = eq_rows.clone();
            rows.extend(subset.iter().map(|a| a.coords().to_vec()));
            let k = kernel_rows(n, rows);
            if k.len() != 1 {
                continue;
            }
            for v in [k[0].clone(), k[0].neg()] {
                if feasible(&v) {
                    rays.insert(v);
                }
            }
        }
        let rays: Vec<IntVector> = rays.into_iter().collect();
        Cone::new(n, &rays)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n - self.equations.len()
    }

    /// Primitive extreme rays, sorted.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// Inward facet normals `a` with the cone inside `a·x ≥ 0`.
    pub fn facet_normals(&self) -> &[IntVector] {
        &self.facets
    }

    /// Integer basis of the orthogonal complement of the linear span.
    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// `span(σ) ∩ ℤⁿ`.
    pub fn lattice(&self) -> Sublattice {
        if self.rays.is_empty() {
            return saturate(&IntMatrix::new(self.n, vec![vec![Int::zero(); self.n]]).unwrap());
        }
        saturate(&IntMatrix::from_vectors(self.n, &self.rays).expect("rays share a dimension"))
    }

    /// Sum of the rays, a lattice point in the relative interior.
    pub fn interior_point(&self) -> IntVector {
        self.rays
            .iter()
            .fold(IntVector::zeros(self.n), |acc, r| acc.add(r))
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.facets.iter().all(|a| !dot(a, x).is_negative())
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot_rat(e, x).is_zero())
            && self.facets.iter().all(|a| !dot_rat(a, x).is_negative())
    }

    pub fn in_relative_interior_rat(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot_rat(e, x).is_zero())
            && self.facets.iter().all(|a| dot_rat(a, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    /// Faces cut out by each facet normal.
    pub fn facet_cones(&self) -> Vec<Cone> {
        self.facets
            .iter()
            .map(|a| {
                let rays: Vec<IntVector> = self
                    .rays
                    .iter()
                    .filter(|r| a.dot(r).is_zero())
                    .cloned()
                    .collect();
                Cone::new(self.n, &rays).expect("face of a pointed cone")
            })
            .collect()
    }

    /// All faces, including the cone itself and `{0}`.
    pub fn faces(&self) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if out.contains(&c) {
                continue;
            }
            stack.extend(c.facet_cones());
            out.insert(c);
        }
        out.insert(Cone::zero(self.n));
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if !other.contains_cone(self) {
            return false;
        }
        if self.dim() == other.dim() {
            return self == other;
        }
        // A subcone is a face iff some supporting inequality cuts exactly it out.
        let tight: Vec<&IntVector> = other
            .facets
            .iter()
            .filter(|a| self.rays.iter().all(|r| a.dot(r).is_zero()))
            .collect();
        let face_rays: Vec<IntVector> = other
            .rays
            .iter()
            .filter(|r| tight.iter().all(|a| a.dot(r).is_zero()))
            .cloned()
            .collect();
        Cone::new(self.n, &face_rays).map_or(false, |f| &f == self)
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.n != other.n {
            return Err(Error::domain("intersecting cones in different dimensions"));
        }
        let ineqs: Vec<IntVector> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<IntVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        Cone::from_inequalities(self.n, &ineqs, &eqs)
    }
}

/// A lattice point of `sigma` whose class generates `N_σ / N_τ ≅ ℤ`.
pub fn quotient_generator(sigma: &Cone, tau: &Cone) -> Result<IntVector> {
    if sigma.dim() != tau.dim() + 1 || !tau.is_face_of(sigma) {
        return Err(Error::domain(format!("{tau} is not a facet of {sigma}")));
    }
    let n = sigma.ambient_dim();
    let normal = sigma
        .facet_normals()
        .iter()
        .find(|a| tau.rays().iter().all(|r| a.dot(r).is_zero()))
        .expect("facet has a normal")
        .clone();
    let basis = sigma.lattice().basis().row_vectors();
    let values: Vec<Int> = basis.iter().map(|b| normal.dot(b)).collect();
    // Integer combination of the basis with normal value equal to the gcd.
    let mut acc = (Int::zero(), IntVector::zeros(n));
    for (b, v) in basis.iter().zip(&values) {
        if acc.0.is_zero() {
            if !v.is_zero() {
                acc = (v.clone(), b.clone());
            }
            continue;
        }
        let e = num_integer::Integer::extended_gcd(&acc.0, v);
        let combined = acc.1.scale(&e.x).add(&b.scale(&e.y));
        acc = (e.gcd, combined);
    }
    let (g, mut v) = acc;
    if g.is_negative() {
        v = v.neg();
    }
    let w = tau.interior_point();
    while !sigma.contains(&v) {
        v = v.add(&w);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64s(c)
    }

    #[test]
    fn quadrant_representation() {
        let q = Cone::from_i64s(2, &[&[2, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(q.rays(), &[iv(&[0, 1]), iv(&[1, 0])]);
        assert_eq!(q.facet_normals(), &[iv(&[0, 1]), iv(&[1, 0])]);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.faces().len(), 4);
        assert!(Cone::from_i64s(2, &[&[1, 0], &[-1, 0]]).is_err());
        assert!(Cone::from_i64s(2, &[&[1, 0], &[0, 1], &[-1, 0]]).is_err());
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = Cone::from_i64s(3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.equations(), &[iv(&[0, 0, 1])]);
        assert!(c.contains(&[Int::from(3), Int::from(1), Int::from(0)]));
        assert!(!c.contains(&[Int::from(3), Int::from(1), Int::from(1)]));
        let ray = Cone::from_i64s(3, &[&[2, 4, 6]]).unwrap();
        assert_eq!(ray.rays(), &[iv(&[1, 2, 3])]);
        assert_eq!(ray.dim(), 1);
    }

    #[test]
    fn h_to_v() {
        let c = Cone::from_inequalities(2, &[iv(&[1, 0]), iv(&[-1, 1])], &[]).unwrap();
        assert_eq!(c.rays(), &[iv(&[0, 1]), iv(&[1, 1])]);
        let z = Cone::from_inequalities(
            2,
            &[iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1]), iv(&[0, -1])],
            &[],
        )
        .unwrap();
        assert!(z.is_zero());
        assert!(Cone::from_inequalities(2, &[iv(&[1, 0])], &[]).is_err());
    }

    #[test]
    fn intersections_and_faces() {
        let a = Cone::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap();
        let b = Cone::from_i64s(2, &[&[1, 1], &[-1, 1]]).unwrap();
        let c = a.intersection(&b).unwrap();
        assert_eq!(c.rays(), &[iv(&[0, 1]), iv(&[1, 1])]);
        let ray = Cone::from_i64s(2, &[&[1, 0]]).unwrap();
        assert!(ray.is_face_of(&a));
        assert!(!Cone::from_i64s(2, &[&[1, 1]]).unwrap().is_face_of(&a));
        assert!(Cone::zero(2).is_face_of(&a));
        assert!(!c.is_face_of(&a));
    }

    #[test]
    fn quotient_generator_examples() {
        let q = Cone::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap();
        let tau = Cone::from_i64s(2, &[&[1, 0]]).unwrap();
        let u = quotient_generator(&q, &tau).unwrap();
        assert!(q.contains(&u));
        assert_eq!(u[1], Int::from(1));

        let ray = Cone::from_i64s(2, &[&[1, 1]]).unwrap();
        assert_eq!(
            quotient_generator(&ray, &Cone::zero(2)).unwrap(),
            iv(&[1, 1])
        );

        let s = Cone::from_i64s(2, &[&[2, 1], &[1, 2]]).unwrap();
        let t = Cone::from_i64s(2, &[&[2, 1]]).unwrap();
        let u = quotient_generator(&s, &t).unwrap();
        assert!(s.contains(&u));
        // Lattice distance 1 from the line through (2, 1).
        assert_eq!((&u[1] * Int::from(2) - &u[0]).abs(), Int::from(1));

        assert!(quotient_generator(&q, &Cone::zero(2)).is_err());
    }
}
