//! Laurent polynomials, Newton polytopes, tropical hypersurfaces and
//! generic root counts.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{stable_intersection_number, Cone, Fan, ShiftPolicy, WeightedFan};
use crate::lattice::{content, Int, IntVector, Rat};
use crate::polytope::{factorial, mixed_volume, LatticePolytope};

pub use parse::{parse_laurent, parse_laurent_in};

/// A coefficient that is either an exact rational or a symbolic generic value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Rational(Rat),
    /// A nonzero coefficient in general position; never cancels.
    Generic,
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Rational(r) if r.is_zero())
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a + b),
            _ => Coefficient::Generic,
        }
    }

    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a * b),
            _ => Coefficient::Generic,
        }
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(-a),
            Coefficient::Generic => Coefficient::Generic,
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(r) => write!(f, "{r}"),
            Coefficient::Generic => f.write_str("generic"),
        }
    }
}

/// `Σ c_α x^α` with finitely many nonzero terms and exponents in ℤⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<IntVector, Coefficient>,
}

impl LaurentPolynomial {
    pub fn new(n: usize, terms: BTreeMap<IntVector, Coefficient>) -> Result<Self> {
        if terms.keys().any(|e| e.dim() != n) {
            return Err(Error::domain("exponent vector has the wrong length"));
        }
        let terms: BTreeMap<IntVector, Coefficient> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Err(Error::domain("polynomial is zero (all terms cancel)"));
        }
        Ok(LaurentPolynomial { n, terms })
    }

    /// The polynomial with generic coefficients on the given exponents.
    pub fn generic(n: usize, support: &[IntVector]) -> Result<Self> {
        Self::new(
            n,
            support
                .iter()
                .map(|e| (e.clone(), Coefficient::Generic))
                .collect(),
        )
    }

    /// Generic dense polynomial of degree `d` in `n` variables.
    pub fn dense(n: usize, d: usize) -> Self {
        let support: Vec<IntVector> = (0..n)
            .map(|_| 0..=d)
            .multi_cartesian_product()
            .filter(|e| e.iter().sum::<usize>() <= d)
            .map(|e| IntVector::new(e.into_iter().map(Int::from).collect()))
            .collect();
        Self::generic(n, &support).expect("nonempty support")
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<IntVector, Coefficient> {
        &self.terms
    }

    pub fn support(&self) -> Vec<IntVector> {
        self.terms.keys().cloned().collect()
    }

    /// The same polynomial viewed in `n ≥ num_vars()` variables.
    pub fn in_vars(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::domain(format!(
                "cannot view a polynomial in {} variables in only {n}",
                self.n
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = e.coords().to_vec();
                v.resize(n, Int::zero());
                (IntVector::new(v), c.clone())
            })
            .collect();
        Ok(LaurentPolynomial { n, terms })
    }

    pub fn mul(&self, other: &LaurentPolynomial) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain(
                "multiplying polynomials in different variables",
            ));
        }
        let mut terms: BTreeMap<IntVector, Coefficient> = BTreeMap::new();
        for ((a, c), (b, d)) in self.terms.iter().cartesian_product(&other.terms) {
            let e = a.add(b);
            let v = c.mul(d);
            let merged = match terms.remove(&e) {
                Some(prev) => prev.add(&v),
                None => v,
            };
            terms.insert(e, merged);
        }
        Self::new(self.n, terms)
    }

    /// `x^β · f`.
    pub fn shift(&self, beta: &IntVector) -> Result<Self> {
        if beta.dim() != self.n {
            return Err(Error::domain("monomial has the wrong number of variables"));
        }
        Ok(LaurentPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(beta), c.clone()))
                .collect(),
        })
    }
}

fn var_name(n: usize, i: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (neg, coef) = match c {
                Coefficient::Rational(r) if r.is_negative() => (true, Some(-r)),
                Coefficient::Rational(r) => (false, Some(r.clone())),
                Coefficient::Generic => (false, None),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            match coef {
                None => factors.push("g".into()),
                Some(r) if !r.is_one() || e.is_zero() => factors.push(r.to_string()),
                _ => {}
            }
            for (i, k) in e.iter().enumerate() {
                if k.is_zero() {
                    continue;
                }
                let name = var_name(self.n, i);
                if k.is_one() {
                    factors.push(name);
                } else if k.is_negative() {
                    factors.push(format!("{name}^({k})"));
                } else {
                    factors.push(format!("{name}^{k}"));
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

pub fn newton_polytope(f: &LaurentPolynomial) -> LatticePolytope {
    LatticePolytope::convex_hull(&f.support()).expect("nonzero polynomial has a term")
}

/// A weighted (n−1)-fan together with the Newton polytope it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalHypersurface {
    pub weighted: WeightedFan,
    pub source_polytope: LatticePolytope,
}

impl TropicalHypersurface {
    pub fn verify_bergman_shape(&self) -> bool {
        verify_bergman_shape(self.weighted.fan())
    }
}

/// The cones of the normal fan dual to the edges of the Newton polytope,
/// each weighted by the lattice length of its edge.
///
/// When the Newton polytope is not full-dimensional the normal cones contain
/// a line; they are then cut along the coordinate hyperplanes into pointed
/// pieces, which changes the fan but not the weighted support.
pub fn tropical_hypersurface(f: &LaurentPolynomial) -> Result<TropicalHypersurface> {
    let n = f.num_vars();
    if n == 0 {
        return Err(Error::domain(
            "a polynomial in no variables has no tropical hypersurface",
        ));
    }
    let p = newton_polytope(f);
    let vertices = p.vertices();
    let mut cones: BTreeMap<Cone, Rat> = BTreeMap::new();
    for (i, j) in p.edges() {
        let (a, b) = (&vertices[i], &vertices[j]);
        let dir = b.sub(a);
        let weight = Rat::from_integer(content(&dir));
        let ineqs: Vec<IntVector> = vertices
            .iter()
            .filter(|w| *w != a && *w != b)
            .map(|w| w.sub(a))
            .collect();
        let eqs = vec![dir];
        if p.is_full_dimensional() {
            cones.insert(Cone::from_inequalities(n, &ineqs, &eqs)?, weight);
            continue;
        }
        for signs in (0..n).map(|_| [1i64, -1]).multi_cartesian_product() {
            let mut all = ineqs.clone();
            all.extend(
                signs
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| IntVector::unit(n, k).scale(&Int::from(s))),
            );
            let piece = Cone::from_inequalities(n, &all, &eqs)?;
            if piece.dim() == n - 1 {
                cones.insert(piece, weight.clone());
            }
        }
    }
    let weighted = if cones.is_empty() {
        WeightedFan::zero(n, n - 1)
    } else {
        WeightedFan::from_cones(n, n - 1, cones.into_iter().collect())?
    };
    Ok(TropicalHypersurface {
        weighted,
        source_polytope: p,
    })
}

fn check_square_system(fs: &[LaurentPolynomial]) -> Result<usize> {
    let n = fs.len();
    if n == 0 {
        return Err(Error::domain("empty polynomial system"));
    }
    if let Some(f) = fs.iter().find(|f| f.num_vars() != n) {
        return Err(Error::domain(format!(
            "system of {n} polynomials needs {n} variables, found a polynomial in {}",
            f.num_vars()
        )));
    }
    Ok(n)
}

/// `n!·V(Δ(f₁), …, Δ(fₙ))`, the number of solutions in `(ℂ*)ⁿ` of a generic
/// system with these Newton polytopes.
pub fn bkk_count(fs: &[LaurentPolynomial]) -> Result<Rat> {
    let n = check_square_system(fs)?;
    let polys: Vec<LatticePolytope> = fs.iter().map(newton_polytope).collect();
    Ok(mixed_volume(&polys)? * Rat::from_integer(factorial(n)))
}

/// The same count as the stable intersection number of the two tropical
/// curves; only defined for two polynomials in two variables.
pub fn bkk_via_fans(fs: &[LaurentPolynomial], policy: ShiftPolicy) -> Result<Rat> {
    let n = check_square_system(fs)?;
    if n != 2 {
        return Err(Error::domain(format!(
            "intersection of tropical hypersurfaces is only supported for n = 2, got n = {n}"
        )));
    }
    let a = tropical_hypersurface(&fs[0])?;
    let b = tropical_hypersurface(&fs[1])?;
    stable_intersection_number(&a.weighted, &b.weighted, policy)
}

/// Whether `fan` is a fan all of whose maximal cones have dimension n − 1.
pub fn verify_bergman_shape(fan: &Fan) -> bool {
    let n = fan.ambient_dim();
    if n == 0 {
        return false;
    }
    fan.maximal_cones().iter().all(|c| c.dim() == n - 1)
        && Fan::validate(n, fan.cones().iter().cloned().collect()).is_ok()
}
