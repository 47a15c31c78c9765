//! Rational polyhedral cones and fans, weighted fans and balancing, and
//! stable intersection numbers of balanced fans of complementary dimension.

mod cone;
mod intersection;

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{rank_of_rows, solve_columns, Int, IntVector, Rat};
use crate::polytope::LatticePolytope;

pub use cone::{quotient_generator, Cone};
pub use intersection::{
    intersection_at_shift, is_transverse, sample_shift, stable_intersection_number, ShiftPolicy,
    ShiftedComplex, MAX_SHIFT_ATTEMPTS,
};

/// A finite face-closed collection of cones meeting along common faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    n: usize,
    cones: BTreeSet<Cone>,
}

fn check_dims(n: usize, cones: &[Cone]) -> Result<()> {
    match cones.iter().find(|c| c.ambient_dim() != n) {
        Some(c) => Err(Error::domain(format!(
            "{c} lives in dimension {}, expected {n}",
            c.ambient_dim()
        ))),
        None => Ok(()),
    }
}

impl Fan {
    /// Validates an explicit list of cones against both fan axioms.
    pub fn validate(n: usize, cones: Vec<Cone>) -> Result<Fan> {
        check_dims(n, &cones)?;
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        for c in &set {
            if let Some(missing) = c.faces().into_iter().find(|f| !set.contains(f)) {
                return Err(Error::domain(format!(
                    "face closure violated: {missing} is a face of {c} but not in the fan"
                )));
            }
        }
        let fan = Fan { n, cones: set };
        fan.check_intersections()?;
        Ok(fan)
    }

    /// Builds the fan generated by `maximal` together with all their faces.
    pub fn from_maximal_cones(n: usize, maximal: Vec<Cone>) -> Result<Fan> {
        check_dims(n, &maximal)?;
        let mut set = BTreeSet::new();
        for c in &maximal {
            set.extend(c.faces());
        }
        let fan = Fan { n, cones: set };
        fan.check_intersections()?;
        Ok(fan)
    }

    /// The fan with no cones at all, standing for the zero cycle.
    pub fn empty(n: usize) -> Fan {
        Fan {
            n,
            cones: BTreeSet::new(),
        }
    }

    fn check_intersections(&self) -> Result<()> {
        let max = self.maximal_cones();
        for (a, b) in max.iter().tuple_combinations() {
            let c = a.intersection(b)?;
            if !c.is_face_of(a) || !c.is_face_of(b) {
                return Err(Error::domain(format!(
                    "intersection {c} of {a} and {b} is not a face of both"
                )));
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn cones(&self) -> &BTreeSet<Cone> {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.dim() == d).collect()
    }

    /// Cones that are not proper faces of other cones.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|o| o.dim() > c.dim() && o.contains_cone(c))
            })
            .cloned()
            .collect()
    }

    pub fn dim(&self) -> Option<usize> {
        self.cones.iter().map(Cone::dim).max()
    }

    /// Whether every maximal cone has dimension `d`.
    pub fn is_pure(&self, d: usize) -> bool {
        self.maximal_cones().iter().all(|c| c.dim() == d)
    }

    /// Whether the support is all of ℝⁿ.
    ///
    /// Maximal cones have disjoint interiors, so the support is everything
    /// exactly when the cube volumes `vol(σ ∩ [−1,1]ⁿ)` add up to `2ⁿ`.
    pub fn is_complete(&self) -> bool {
        let max = self.maximal_cones();
        if max.is_empty() || max.iter().any(|c| c.dim() != self.n) {
            return false;
        }
        let total: Rat = max.iter().map(box_fraction).sum();
        total.is_one()
    }

    /// Refinement by all pairwise intersections of cones.
    pub fn common_refinement(&self, other: &Fan) -> Result<Fan> {
        if self.n != other.n {
            return Err(Error::domain("refining fans in different dimensions"));
        }
        let mut set = BTreeSet::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                set.extend(a.intersection(&b)?.faces());
            }
        }
        Ok(Fan {
            n: self.n,
            cones: set,
        })
    }
}

/// The fraction `vol(σ ∩ [−1,1]ⁿ) / 2ⁿ` of the cube occupied by a full cone.
pub fn box_fraction(cone: &Cone) -> Rat {
    let n = cone.ambient_dim();
    if cone.dim() < n {
        return Rat::zero();
    }
    // Constraints a·x ≥ b: cone facets with b = 0 and the cube walls ±xᵢ ≥ −1.
    let mut cons: Vec<(IntVector, Rat)> = cone
        .facet_normals()
        .iter()
        .map(|a| (a.clone(), Rat::zero()))
        .collect();
    for i in 0..n {
        cons.push((IntVector::unit(n, i), -Rat::one()));
        cons.push((IntVector::unit(n, i).neg(), -Rat::one()));
    }
    let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for subset in cons.iter().combinations(n) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|(a, _)| a.coords().to_vec()).collect();
        if rank_of_rows(&rows, n) < n {
            continue;
        }
        let columns: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                rows.iter()
                    .map(|r| Rat::from_integer(r[j].clone()))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = subset.iter().map(|(_, b)| b.clone()).collect();
        let Some(x) = solve_columns(&columns, &rhs) else {
            continue;
        };
        if cons
            .iter()
            .all(|(a, b)| crate::lattice::dot_rat(a, &x) >= *b)
        {
            vertices.insert(x);
        }
    }
    let scale = vertices
        .iter()
        .flatten()
        .fold(Int::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
    let pts: Vec<IntVector> = vertices
        .iter()
        .map(|v| {
            IntVector::new(
                v.iter()
                    .map(|x| (x * Rat::from_integer(scale.clone())).to_integer())
                    .collect(),
            )
        })
        .collect();
    let vol = LatticePolytope::convex_hull(&pts)
        .expect("nonempty")
        .volume();
    let denom = num_traits::pow(scale, n) * Int::from(2u32).pow(n as u32);
    vol / Rat::from_integer(denom)
}

/// A pure d-dimensional fan with rational weights on its d-cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFan {
    fan: Fan,
    d: usize,
    weights: BTreeMap<Cone, Rat>,
}

impl std::fmt::Display for WeightedFan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts = self
            .support_cones()
            .map(|(c, w)| format!("{w}·{c}"))
            .join(" + ");
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{parts}")
        }
    }
}

impl WeightedFan {
    /// Weighted fan on the given top cones and their faces.
    pub fn from_cones(n: usize, d: usize, cones: Vec<(Cone, Rat)>) -> Result<WeightedFan> {
        if let Some((c, _)) = cones.iter().find(|(c, _)| c.dim() != d) {
            return Err(Error::domain(format!(
                "{c} has dimension {}, expected {d}",
                c.dim()
            )));
        }
        let mut weights: BTreeMap<Cone, Rat> = BTreeMap::new();
        for (c, w) in cones {
            if weights.insert(c.clone(), w).is_some() {
                return Err(Error::domain(format!("{c} weighted twice")));
            }
        }
        let fan = Fan::from_maximal_cones(n, weights.keys().cloned().collect())?;
        if !fan.is_pure(d) {
            return Err(Error::domain(format!("fan is not pure of dimension {d}")));
        }
        Ok(WeightedFan { fan, d, weights })
    }

    /// Weights an existing fan, which must be pure of dimension `d`.
    pub fn new(fan: Fan, d: usize, weights: BTreeMap<Cone, Rat>) -> Result<WeightedFan> {
        if !fan.is_pure(d) {
            return Err(Error::domain(format!("fan is not pure of dimension {d}")));
        }
        let top: BTreeSet<&Cone> = fan.cones_of_dim(d).into_iter().collect();
        if let Some(c) = weights.keys().find(|c| !top.contains(c)) {
            return Err(Error::domain(format!(
                "weight on {c}, which is not a {d}-cone of the fan"
            )));
        }
        if let Some(c) = top.iter().find(|c| !weights.contains_key(*c)) {
            return Err(Error::domain(format!("no weight on {c}")));
        }
        Ok(WeightedFan { fan, d, weights })
    }

    pub fn zero(n: usize, d: usize) -> WeightedFan {
        WeightedFan {
            fan: Fan::empty(n),
            d,
            weights: BTreeMap::new(),
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.fan.ambient_dim()
    }

    pub fn weights(&self) -> &BTreeMap<Cone, Rat> {
        &self.weights
    }

    pub fn weight(&self, cone: &Cone) -> Rat {
        self.weights.get(cone).cloned().unwrap_or_else(Rat::zero)
    }

    /// The same cones with every weight multiplied by `c`.
    pub fn scaled(&self, c: &Rat) -> WeightedFan {
        WeightedFan {
            fan: self.fan.clone(),
            d: self.d,
            weights: self
                .weights
                .iter()
                .map(|(k, w)| (k.clone(), w * c))
                .collect(),
        }
    }

    /// Top cones with nonzero weight.
    pub fn support_cones(&self) -> impl Iterator<Item = (&Cone, &Rat)> {
        self.weights.iter().filter(|(_, w)| !w.is_zero())
    }

    /// At every (d−1)-cone τ, `Σ c(σ)·u_{σ/τ}` must lie in `span(τ)`.
    pub fn is_balanced(&self) -> bool {
        if self.d == 0 {
            return true;
        }
        let n = self.ambient_dim();
        let walls: BTreeSet<Cone> = self.weights.keys().flat_map(|s| s.facet_cones()).collect();
        walls.iter().all(|tau| {
            let mut sum = vec![Rat::zero(); n];
            for (sigma, w) in &self.weights {
                if w.is_zero() || !tau.is_face_of(sigma) {
                    continue;
                }
                let u = quotient_generator(sigma, tau).expect("wall is a facet");
                for (s, c) in sum.iter_mut().zip(u.iter()) {
                    *s += w * Rat::from_integer(c.clone());
                }
            }
            tau.equations()
                .iter()
                .all(|e| crate::lattice::dot_rat(e, &sum).is_zero())
        })
    }
}

/// Cones subdividing every top cone of `fans` along all walls and spans
/// occurring in any of them; each piece lies in at most one top cone per fan.
fn union_refinement(fans: &[&WeightedFan]) -> Result<Vec<Cone>> {
    let n = fans[0].ambient_dim();
    let mut hyperplanes: BTreeSet<IntVector> = BTreeSet::new();
    for f in fans {
        for c in f.weights.keys() {
            for h in c.facet_normals().iter().chain(c.equations()) {
                let h = if h
                    .iter()
                    .find(|x| !x.is_zero())
                    .is_some_and(|x| x.is_negative())
                {
                    h.neg()
                } else {
                    h.clone()
                };
                hyperplanes.insert(h);
            }
        }
    }
    let mut pieces: BTreeSet<Cone> = BTreeSet::new();
    for f in fans {
        for c in f.weights.keys() {
            let d = c.dim();
            let mut cells = vec![c.clone()];
            for h in &hyperplanes {
                let mut next = Vec::new();
                for cell in cells {
                    let vals: Vec<Int> = cell.rays().iter().map(|r| h.dot(r)).collect();
                    if vals.iter().all(|v| !v.is_negative())
                        || vals.iter().all(|v| !v.is_positive())
                    {
                        next.push(cell);
                        continue;
                    }
                    for s in [h.clone(), h.neg()] {
                        let mut ineqs = cell.facet_normals().to_vec();
                        ineqs.push(s);
                        let part = Cone::from_inequalities(n, &ineqs, cell.equations())?;
                        if part.dim() == d {
                            next.push(part);
                        }
                    }
                }
                cells = next;
            }
            pieces.extend(cells);
        }
    }
    Ok(pieces.into_iter().collect())
}

fn induced_weight(f: &WeightedFan, piece: &Cone) -> Rat {
    let p = piece.interior_point();
    f.weights
        .iter()
        .filter(|(c, _)| c.contains(&p))
        .map(|(_, w)| w.clone())
        .sum()
}

fn check_compatible(a: &WeightedFan, b: &WeightedFan) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() || a.d != b.d {
        return Err(Error::domain(format!(
            "weighted fans of dimension {} in ℝ^{} and {} in ℝ^{} are not comparable",
            a.d,
            a.ambient_dim(),
            b.d,
            b.ambient_dim()
        )));
    }
    Ok(())
}

/// Equality of induced weights on a common refinement; zero-weight cones
/// count as absent.
pub fn weighted_equivalent(a: &WeightedFan, b: &WeightedFan) -> Result<bool> {
    check_compatible(a, b)?;
    if a.weights.is_empty() && b.weights.is_empty() {
        return Ok(true);
    }
    let pieces = union_refinement(&[a, b])?;
    Ok(pieces
        .iter()
        .all(|p| induced_weight(a, p) == induced_weight(b, p)))
}

/// `(Σ, c₁ + c₂)` on a common refinement, dropping pieces of total weight 0.
pub fn weighted_sum(a: &WeightedFan, b: &WeightedFan) -> Result<WeightedFan> {
    check_compatible(a, b)?;
    if a.weights.is_empty() && b.weights.is_empty() {
        return Ok(WeightedFan::zero(a.ambient_dim(), a.d));
    }
    let pieces = union_refinement(&[a, b])?;
    let weighted: Vec<(Cone, Rat)> = pieces
        .into_iter()
        .map(|p| {
            let w = induced_weight(a, &p) + induced_weight(b, &p);
            (p, w)
        })
        .filter(|(_, w)| !w.is_zero())
        .collect();
    if weighted.is_empty() {
        return Ok(WeightedFan::zero(a.ambient_dim(), a.d));
    }
    WeightedFan::from_cones(a.ambient_dim(), a.d, weighted)
}

/// The weighted fan supported on the codimension-one cones of a complete
/// fan, with weights supplied per cone.
pub fn skeleton(fan: &Fan, d: usize, weight: impl Fn(&Cone) -> Rat) -> Result<WeightedFan> {
    let cones: Vec<(Cone, Rat)> = fan
        .cones_of_dim(d)
        .into_iter()
        .map(|c| (c.clone(), weight(c)))
        .collect();
    if cones.is_empty() {
        return Ok(WeightedFan::zero(fan.ambient_dim(), d));
    }
    WeightedFan::from_cones(fan.ambient_dim(), d, cones)
}
