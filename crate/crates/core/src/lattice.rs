//! Exact integer linear algebra over ℤⁿ.
//!
//! Everything here works with arbitrary-precision integers and rationals;
//! nothing rounds. The normal forms use a deterministic pivot rule (smallest
//! absolute value, lowest row index on ties) so outputs are reproducible.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// A vector in ℤⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<Int>);

impl IntVector {
    pub fn new(coords: Vec<Int>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![Int::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &[Int]) -> Int {
        dot(&self.0, other)
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Int) -> IntVector {
        IntVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        self.0.iter().cloned().map(Rat::from_integer).collect()
    }
}

impl Deref for IntVector {
    type Target = [Int];
    fn deref(&self) -> &[Int] {
        &self.0
    }
}

impl From<Vec<Int>> for IntVector {
    fn from(v: Vec<Int>) -> Self {
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Int], x: &[Rat]) -> Rat {
    a.iter()
        .zip(x)
        .map(|(c, v)| v * Rat::from_integer(c.clone()))
        .sum()
}

/// Rectangular integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<Vec<Int>>,
}

impl IntMatrix {
    /// Builds a matrix from rows; every row must have `ncols` entries.
    pub fn new(ncols: usize, rows: Vec<Vec<Int>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::domain("matrix rows have inconsistent lengths"));
        }
        Ok(IntMatrix { ncols, rows })
    }

    pub fn from_vectors(ncols: usize, rows: &[IntVector]) -> Result<Self> {
        Self::new(ncols, rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    pub fn from_i64s(ncols: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            ncols,
            rows.iter()
                .map(|r| r.iter().map(|&c| Int::from(c)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        IntMatrix { ncols: n, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        self.rows.iter().cloned().map(IntVector::new).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        IntMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::domain("matrix product shape mismatch"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .map(|(a, orow)| a * &orow[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(IntMatrix {
            ncols: other.ncols,
            rows,
        })
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.rows, self.ncols)
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> Result<Int> {
        if self.nrows() != self.ncols {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        Ok(determinant_of_rows(&self.rows))
    }

    /// Removes all-zero rows.
    pub fn nonzero_rows(&self) -> IntMatrix {
        IntMatrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .filter(|r| r.iter().any(|c| !c.is_zero()))
                .cloned()
                .collect(),
        }
    }
}

/// Rank of an integer matrix given by rows (Bareiss elimination).
pub fn rank_of_rows(rows: &[Vec<Int>], ncols: usize) -> usize {
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let m = a.len();
    let mut rank = 0;
    let mut prev = Int::one();
    for col in 0..ncols {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in col + 1..ncols {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = Int::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn determinant_of_rows(rows: &[Vec<Int>]) -> Int {
    let n = rows.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Int::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Splits `v` into its primitive direction and integral length.
pub fn primitive(v: &IntVector) -> Result<(IntVector, Int)> {
    let g = content(v.coords());
    if g.is_zero() {
        return Err(Error::domain("primitive vector of the zero vector"));
    }
    let p = IntVector::new(v.iter().map(|c| c / &g).collect());
    Ok((p, g))
}

/// Non-negative gcd of all entries (zero for the zero vector).
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, c| g.gcd(c))
}

fn row_sub_mul(rows: &mut [Vec<Int>], target: usize, source: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (a, b) in t.iter_mut().zip(s.iter()) {
        *a -= q * b;
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and `U·M = H`.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows are collected at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut h = m.rows.clone();
    let mut u = IntMatrix::identity(nr).rows;
    let mut r = 0;
    for col in 0..nc {
        if r == nr {
            break;
        }
        loop {
            let pivot = (r..nr)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..nr {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r).is_none_or(|row| row[col].is_zero()) {
            continue;
        }
        if h[r][col].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            row_sub_mul(&mut h, i, r, &q);
            row_sub_mul(&mut u, i, r, &q);
        }
        r += 1;
    }
    (
        IntMatrix { ncols: nc, rows: h },
        IntMatrix { ncols: nr, rows: u },
    )
}

/// Elementary divisors `d₁ | d₂ | …` of `m` (only the nonzero ones).
pub fn smith_invariants(m: &IntMatrix) -> Vec<Int> {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut a = m.rows.clone();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut changed = false;
        for i in t + 1..nr {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &a[t][t];
            row_sub_mul(&mut a, i, t, &q);
            changed |= !a[i][t].is_zero();
        }
        for j in t + 1..nc {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &a[t][t];
            for row in a.iter_mut() {
                let sub = &q * &row[t];
                row[j] -= sub;
            }
            changed |= !a[t][j].is_zero();
        }
        if changed {
            continue;
        }
        let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
        if let Some(i) = bad {
            for j in 0..nc {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Basis (as rows) of the integer kernel `{x ∈ ℤⁿ : M·x = 0}`, in Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.ncols();
    if m.nrows() == 0 {
        return IntMatrix::identity(n);
    }
    let (h, u) = hermite_normal_form(&m.transpose());
    let rows: Vec<Vec<Int>> = (0..n)
        .filter(|&i| h.rows[i].iter().all(Zero::is_zero))
        .map(|i| u.rows[i].clone())
        .collect();
    let k = IntMatrix { ncols: n, rows };
    if k.nrows() == 0 {
        return k;
    }
    hermite_normal_form(&k).0.nonzero_rows()
}

/// A sublattice of ℤⁿ given by linearly independent basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    basis: IntMatrix,
}

impl Sublattice {
    /// Wraps rows that are already linearly independent.
    pub fn from_basis(basis: IntMatrix) -> Result<Self> {
        if basis.rank() != basis.nrows() {
            return Err(Error::domain("sublattice basis rows are dependent"));
        }
        Ok(Sublattice { basis })
    }

    /// The lattice generated by arbitrary rows (not saturated).
    pub fn generated_by(generators: &IntMatrix) -> Self {
        let h = hermite_normal_form(generators).0.nonzero_rows();
        Sublattice { basis: h }
    }

    pub fn full(n: usize) -> Self {
        Sublattice {
            basis: IntMatrix::identity(n),
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Integer coordinates of `v` in this basis, if `v` belongs to the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let cols: Vec<Vec<Rat>> = self
            .basis
            .rows()
            .iter()
            .map(|r| r.iter().cloned().map(Rat::from_integer).collect())
            .collect();
        let rhs: Vec<Rat> = v.iter().cloned().map(Rat::from_integer).collect();
        let x = solve_columns(&cols, &rhs)?;
        x.into_iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Solves `c·H = v` for a matrix in row echelon form with exact integer `c`.
fn echelon_coordinates(h: &IntMatrix, v: &[Int]) -> Option<Vec<Int>> {
    let mut residual: Vec<Int> = v.to_vec();
    let mut coords = Vec::with_capacity(h.nrows());
    for row in h.rows() {
        let p = row.iter().position(|c| !c.is_zero())?;
        let (q, rem) = residual[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        for (r, c) in residual.iter_mut().zip(row) {
            *r -= &q * c;
        }
        coords.push(q);
    }
    residual.iter().all(Zero::is_zero).then_some(coords)
}

/// The saturated lattice `span(G) ∩ ℤⁿ`, returned with a Hermite basis.
pub fn saturate(span_generators: &IntMatrix) -> Sublattice {
    let n = span_generators.ncols();
    let orth = integer_kernel(span_generators);
    if orth.nrows() == 0 {
        return Sublattice::full(n);
    }
    let basis = integer_kernel(&orth);
    Sublattice { basis }
}

/// Index of a sublattice of ℤⁿ; infinite when it is not of full rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(Int),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&Int> {
        match self {
            LatticeIndex::Finite(i) => Some(i),
            LatticeIndex::Infinite => None,
        }
    }
}

/// `[ℤⁿ : A + B]`.
pub fn lattice_index(a: &Sublattice, b: &Sublattice) -> LatticeIndex {
    let n = a.ambient_dim();
    let mut rows = a.basis.rows.clone();
    rows.extend(b.basis.rows.iter().cloned());
    let stacked = IntMatrix { ncols: n, rows };
    let inv = smith_invariants(&stacked);
    if inv.len() < n {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(inv.iter().product())
    }
}

/// Ratio between integral and Euclidean volume on a rational subspace.
///
/// The factor itself is generally irrational, so only its square
/// `1 / det(B·Bᵀ)` is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeNormalizer {
    pub squared: Rat,
}

pub fn integral_volume_form(basis: &Sublattice) -> VolumeNormalizer {
    let b = basis.basis();
    let gram = b.mul(&b.transpose()).expect("gram shape");
    let det = gram.determinant().expect("gram is square");
    VolumeNormalizer {
        squared: Rat::new(Int::one(), det),
    }
}

/// Coordinates on an affine lattice `origin + (W ∩ ℤⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    origin: IntVector,
    lattice: Sublattice,
}

impl AffineChart {
    /// The chart of the smallest integral affine subspace through `points`.
    pub fn through(points: &[IntVector]) -> Result<Self> {
        let origin = points
            .first()
            .ok_or_else(|| Error::domain("affine chart of an empty point set"))?
            .clone();
        let n = origin.dim();
        let diffs: Vec<Vec<Int>> = points[1..]
            .iter()
            .map(|p| p.sub(&origin).into_inner())
            .collect();
        let lattice = if diffs.iter().all(|d| d.iter().all(Zero::is_zero)) {
            Sublattice {
                basis: IntMatrix {
                    ncols: n,
                    rows: vec![],
                },
            }
        } else {
            saturate(&IntMatrix::new(n, diffs)?)
        };
        Ok(AffineChart { origin, lattice })
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank()
    }

    pub fn origin(&self) -> &IntVector {
        &self.origin
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    /// Local integer coordinates; `None` if the point is off the affine lattice.
    pub fn coords(&self, p: &[Int]) -> Option<Vec<Int>> {
        let d: Vec<Int> = p
            .iter()
            .zip(self.origin.iter())
            .map(|(a, b)| a - b)
            .collect();
        echelon_coordinates(&self.lattice.basis, &d)
    }

    pub fn lift(&self, c: &[Int]) -> IntVector {
        let mut out = self.origin.clone().into_inner();
        for (ci, row) in c.iter().zip(self.lattice.basis.rows()) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += ci * b;
            }
        }
        IntVector::new(out)
    }
}

/// Solves `Σ_j x_j · columns[j] = rhs` exactly; `None` unless the solution exists and is unique.
pub fn solve_columns(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let k = columns.len();
    let m = rhs.len();
    // Augmented matrix with one row per equation.
    let mut a: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            return None;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=k {
                    let sub = &f * &a[r][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| a[i][k].clone()).collect())
}

/// Rank of a rational matrix given by rows.
pub fn rational_rank(rows: &[Vec<Rat>]) -> usize {
    let scaled: Vec<Vec<Int>> = rows.iter().map(|r| clear_denominators(r)).collect();
    let ncols = rows.first().map_or(0, Vec::len);
    rank_of_rows(&scaled, ncols)
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}
