//! The volume polynomial of a finite family of lattice polytopes and the
//! graded algebra of differential operators modulo its annihilator.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{rational_rank, Int, Rat};
use crate::polytope::{factorial, mixed_volume, LatticePolytope};

/// Exponent vector of a monomial in `m` variables.
pub type Monomial = Vec<u32>;

fn degree_of(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// All exponent vectors of total degree `d` in `m` variables, in lexicographic order.
pub fn monomials(m: usize, d: u32) -> Vec<Monomial> {
    if m == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(e: &[u32]) -> Int {
    let n = degree_of(e) as usize;
    e.iter()
        .fold(factorial(n), |acc, &k| acc / factorial(k as usize))
}

/// A homogeneous polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    m: usize,
    degree: u32,
    coeffs: BTreeMap<Monomial, Rat>,
}

impl HomogeneousPolynomial {
    pub fn new(m: usize, degree: u32, coeffs: BTreeMap<Monomial, Rat>) -> Result<Self> {
        if let Some(e) = coeffs
            .keys()
            .find(|e| e.len() != m || degree_of(e) != degree)
        {
            return Err(Error::domain(format!(
                "monomial {e:?} is not of degree {degree} in {m} variables"
            )));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(HomogeneousPolynomial { m, degree, coeffs })
    }

    pub fn zero(m: usize, degree: u32) -> Self {
        HomogeneousPolynomial {
            m,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &BTreeMap<Monomial, Rat> {
        &self.coeffs
    }

    pub fn coefficient(&self, e: &[u32]) -> Rat {
        self.coeffs.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| {
                    acc * num_traits::pow(xi.clone(), k as usize)
                })
            })
            .sum()
    }

    /// `∂^α P`; differentiating past the degree gives zero.
    pub fn differentiate(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.m {
            return Err(Error::domain("operator has the wrong number of variables"));
        }
        let k = degree_of(alpha);
        if k > self.degree {
            return Ok(Self::zero(self.m, 0));
        }
        let mut out: BTreeMap<Monomial, Rat> = BTreeMap::new();
        'terms: for (e, c) in &self.coeffs {
            let mut factor = Int::one();
            let mut ne = Vec::with_capacity(self.m);
            for (&ei, &ai) in e.iter().zip(alpha) {
                if ai > ei {
                    continue 'terms;
                }
                for j in 0..ai {
                    factor *= Int::from(ei - j);
                }
                ne.push(ei - ai);
            }
            *out.entry(ne).or_insert_with(Rat::zero) += c * Rat::from_integer(factor);
        }
        Self::new(self.m, self.degree - k, out)
    }
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

/// `x1^2*x2` style name of a monomial; the constant monomial is `1`.
pub fn monomial_name(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                var(i)
            } else {
                format!("{}^{k}", var(i))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let s = self
            .coeffs
            .iter()
            .rev()
            .map(|(e, c)| format!("({c})*{}", monomial_name(e)))
            .join(" + ");
        f.write_str(&s)
    }
}

/// A constant-coefficient differential operator `Σ c_α ∂^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    m: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffOperator {
    pub fn new(m: usize, terms: BTreeMap<Monomial, Rat>) -> Result<Self> {
        if terms.keys().any(|e| e.len() != m) {
            return Err(Error::domain(
                "operator term has the wrong number of variables",
            ));
        }
        Ok(DiffOperator {
            m,
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn monomial(alpha: Monomial) -> Self {
        DiffOperator {
            m: alpha.len(),
            terms: [(alpha, Rat::one())].into(),
        }
    }

    /// Composition, i.e. the product of the symbols.
    pub fn compose(&self, other: &DiffOperator) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::domain("composing operators in different variables"));
        }
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for ((a, c), (b, d)) in self.terms.iter().cartesian_product(&other.terms) {
            let e: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
            *terms.entry(e).or_insert_with(Rat::zero) += c * d;
        }
        Self::new(self.m, terms)
    }

    /// `D·P`, collected by monomial across all resulting degrees.
    pub fn apply(&self, p: &HomogeneousPolynomial) -> Result<BTreeMap<Monomial, Rat>> {
        let mut out: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            for (e, v) in p.differentiate(alpha)?.coeffs {
                *out.entry(e).or_insert_with(Rat::zero) += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// Whether `op` annihilates `p`.
pub fn annihilator_membership(op: &DiffOperator, p: &HomogeneousPolynomial) -> Result<bool> {
    Ok(op.apply(p)?.is_empty())
}

/// `∂^α P` for a single monomial operator.
pub fn apply_operator(alpha: &[u32], p: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    p.differentiate(alpha)
}

/// A family of lattice polytopes in a common ℝⁿ, at least one of them full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeBasis {
    polytopes: Vec<LatticePolytope>,
}

impl PolytopeBasis {
    pub fn new(polytopes: Vec<LatticePolytope>) -> Result<Self> {
        let first = polytopes
            .first()
            .ok_or_else(|| Error::domain("empty polytope basis"))?;
        let n = first.ambient_dim();
        if polytopes.iter().any(|p| p.ambient_dim() != n) {
            return Err(Error::domain(
                "basis polytopes live in different dimensions",
            ));
        }
        if !polytopes.iter().any(LatticePolytope::is_full_dimensional) {
            return Err(Error::domain(
                "basis needs at least one full-dimensional polytope",
            ));
        }
        Ok(PolytopeBasis { polytopes })
    }

    pub fn polytopes(&self) -> &[LatticePolytope] {
        &self.polytopes
    }

    pub fn ambient_dim(&self) -> usize {
        self.polytopes[0].ambient_dim()
    }
}

/// `P(x) = vol(x₁Δ₁ + … + x_mΔ_m)`; the coefficient of `x^k` is
/// `n!/(k₁!⋯k_m!)·V(Δ₁^{k₁}, …, Δ_m^{k_m})`.
pub fn volume_polynomial(basis: &PolytopeBasis) -> Result<HomogeneousPolynomial> {
    let n = basis.ambient_dim();
    let ps = basis.polytopes();
    let m = ps.len();
    let mut coeffs = BTreeMap::new();
    for k in monomials(m, n as u32) {
        let args: Vec<LatticePolytope> = k
            .iter()
            .enumerate()
            .flat_map(|(i, &ki)| std::iter::repeat_n(ps[i].clone(), ki as usize))
            .collect();
        let c = Rat::from_integer(multinomial(&k)) * mixed_volume(&args)?;
        coeffs.insert(k, c);
    }
    HomogeneousPolynomial::new(m, n as u32, coeffs)
}

/// Dimensions `h_k = dim A_k` of the graded pieces of `𝒟 / Ann(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub values: Vec<usize>,
}

/// The degree-k catalecticant: rows are `∂^α P` for `|α| = k`, written in the
/// degree-(n−k) monomial basis.
pub fn catalecticant(p: &HomogeneousPolynomial, k: u32) -> Result<Vec<Vec<Rat>>> {
    if k > p.degree() {
        return Ok(vec![]);
    }
    let cols = monomials(p.num_vars(), p.degree() - k);
    monomials(p.num_vars(), k)
        .iter()
        .map(|alpha| {
            let d = p.differentiate(alpha)?;
            Ok(cols.iter().map(|b| d.coefficient(b)).collect())
        })
        .collect()
}

pub fn hilbert_function(p: &HomogeneousPolynomial) -> Result<HilbertFunction> {
    if p.is_zero() {
        return Err(Error::domain("the zero polynomial has no apolar algebra"));
    }
    let values = (0..=p.degree())
        .map(|k| catalecticant(p, k).map(|rows| rational_rank(&rows)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HilbertFunction { values })
}

/// `h₀ = hₙ = 1` and `h_k = h_{n−k}`.
pub fn poincare_check(h: &HilbertFunction) -> bool {
    let v = &h.values;
    !v.is_empty() && v[0] == 1 && v[v.len() - 1] == 1 && v.iter().eq(v.iter().rev())
}
