use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WeightedFan;
use crate::error::{Error, Result};
use crate::lattice::{
    lattice_index, rank_of_rows, solve_columns, Int, IntVector, LatticeIndex, Rat,
};

/// Shifts tried per verification before giving up.
pub const MAX_SHIFT_ATTEMPTS: usize = 32;

const SHIFT_NUMERATOR_BOUND: i64 = 1_000_000;
const SHIFT_DENOMINATOR_BOUND: i64 = 1_000;

/// A weighted fan translated by a rational vector.
#[derive(Clone, Debug)]
pub struct ShiftedComplex {
    pub base: WeightedFan,
    pub shift: Vec<Rat>,
}

impl ShiftedComplex {
    pub fn new(base: WeightedFan, shift: Vec<Rat>) -> Result<Self> {
        if shift.len() != base.ambient_dim() {
            return Err(Error::domain("shift vector has the wrong dimension"));
        }
        Ok(ShiftedComplex { base, shift })
    }
}

/// How generic shifts are drawn and how many must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftPolicy {
    pub seed: u64,
    pub verifications: usize,
}

impl Default for ShiftPolicy {
    fn default() -> Self {
        ShiftPolicy {
            seed: 0,
            verifications: 1,
        }
    }
}

/// A pseudo-random rational vector with odd denominators.
pub fn sample_shift(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|_| {
            let num = rng.random_range(-SHIFT_NUMERATOR_BOUND..=SHIFT_NUMERATOR_BOUND);
            let den = 2 * rng.random_range(0..SHIFT_DENOMINATOR_BOUND) + 1;
            Rat::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

/// Whether `target` is a nonnegative combination of `gens`, by Carathéodory:
/// some linearly independent subset suffices.
fn in_generated_cone(gens: &[IntVector], target: &[Rat]) -> bool {
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    let n = target.len();
    let rows: Vec<Vec<Int>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    let r = rank_of_rows(&rows, n);
    for k in 1..=r {
        for subset in gens.iter().combinations(k) {
            let cols: Vec<Vec<Rat>> = subset.iter().map(|g| g.to_rational()).collect();
            if let Some(x) = solve_columns(&cols, target) {
                if x.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

fn check_complementary(a: &WeightedFan, b: &WeightedFan) -> Result<()> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(Error::domain("fans live in different dimensions"));
    }
    if a.dim() + b.dim() != n {
        return Err(Error::domain(format!(
            "dimensions {} and {} are not complementary in ℝ^{n}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Whether `|a| ∩ (s + |b|)` is finite and every point sits in the relative
/// interiors of top cones.
///
/// Equivalent to: no cones τ, τ′ with `dim τ + dim τ′ < n` meet after the
/// shift. Any non-transverse meeting has a vertex lying on such a pair.
pub fn is_transverse(a: &WeightedFan, shifted: &ShiftedComplex) -> Result<bool> {
    check_complementary(a, &shifted.base)?;
    let n = a.ambient_dim();
    let s = &shifted.shift;
    for tau in a.fan().cones() {
        for tau2 in shifted.base.fan().cones() {
            if tau.dim() + tau2.dim() >= n {
                continue;
            }
            let gens: Vec<IntVector> = tau
                .rays()
                .iter()
                .cloned()
                .chain(tau2.rays().iter().map(IntVector::neg))
                .collect();
            if in_generated_cone(&gens, s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ_p c(σ)c′(σ′)[ℤⁿ : Λ_σ + Λ_σ′]` over `|a| ∩ (s + |b|)`, or `None` when
/// the shift is not transverse. Balancing is not required.
pub fn intersection_at_shift(
    a: &WeightedFan,
    b: &WeightedFan,
    shift: &[Rat],
) -> Result<Option<Rat>> {
    let shifted = ShiftedComplex::new(b.clone(), shift.to_vec())?;
    if !is_transverse(a, &shifted)? {
        return Ok(None);
    }
    let mut total = Rat::zero();
    for (sigma, c) in a.support_cones() {
        let la = sigma.lattice();
        for (sigma2, c2) in b.support_cones() {
            let lb = sigma2.lattice();
            let LatticeIndex::Finite(index) = lattice_index(&la, &lb) else {
                continue;
            };
            // shift = x − y with x ∈ span σ, y ∈ span σ′; the meeting point is x.
            let cols: Vec<Vec<Rat>> = la
                .basis()
                .row_vectors()
                .iter()
                .map(IntVector::to_rational)
                .chain(
                    lb.basis()
                        .row_vectors()
                        .iter()
                        .map(|v| v.neg().to_rational()),
                )
                .collect();
            let coef = solve_columns(&cols, shift).expect("complementary spans");
            let (ca, cb) = coef.split_at(la.rank());
            let combine = |basis: &[IntVector], c: &[Rat]| -> Vec<Rat> {
                let mut out = vec![Rat::zero(); shift.len()];
                for (v, k) in basis.iter().zip(c) {
                    for (o, x) in out.iter_mut().zip(v.iter()) {
                        *o += k * Rat::from_integer(x.clone());
                    }
                }
                out
            };
            let x = combine(&la.basis().row_vectors(), ca);
            let y = combine(&lb.basis().row_vectors(), cb);
            if sigma.contains_rat(&x) && sigma2.contains_rat(&y) {
                total += c * c2 * Rat::from_integer(index);
            }
        }
    }
    Ok(Some(total))
}

/// Intersection number of balanced fans of complementary dimension, checked
/// to agree across `policy.verifications` independent generic shifts.
pub fn stable_intersection_number(
    a: &WeightedFan,
    b: &WeightedFan,
    policy: ShiftPolicy,
) -> Result<Rat> {
    check_complementary(a, b)?;
    if !a.is_balanced() || !b.is_balanced() {
        return Err(Error::domain("stable intersection needs balanced fans"));
    }
    let n = a.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut value: Option<Rat> = None;
    for _ in 0..policy.verifications.max(1) {
        let mut found = None;
        for _ in 0..MAX_SHIFT_ATTEMPTS {
            let s = sample_shift(&mut rng, n);
            if let Some(v) = intersection_at_shift(a, b, &s)? {
                found = Some(v);
                break;
            }
        }
        let Some(v) = found else {
            return Err(Error::resource(format!(
                "no transverse shift found in {MAX_SHIFT_ATTEMPTS} attempts"
            )));
        };
        match &value {
            Some(prev) if *prev != v => {
                return Err(Error::domain(format!(
                    "intersection number depends on the shift ({prev} vs {v})"
                )));
            }
            _ => value = Some(v),
        }
    }
    Ok(value.expect("at least one verification"))
}
