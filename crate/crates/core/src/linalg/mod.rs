//! Exact linear algebra over the rationals and prime fields.
//!
//! Matrices are small and dense here (stacked arrangement forms); the large
//! sparse boundary matrices of order complexes go through [`sparse_rank`].

mod sparse;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use sparse::{sparse_rank, SparseRow};

/// A field of scalars with exact arithmetic.
pub trait Scalars: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Reduces `rows` (each of length `cols`) to reduced row echelon form in
    /// place and returns the pivot columns. Pivots are the first nonzero
    /// entry in column order; zero rows end up at the bottom.
    fn rref_rows(&self, rows: &mut Vec<Vec<Self::Elem>>, cols: usize) -> Vec<usize> {
        gauss_jordan(self, rows, cols)
    }
}

fn gauss_jordan<S: Scalars>(s: &S, rows: &mut [Vec<S::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !s.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = s.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = s.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || s.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = s.sub(x, &s.mul(&factor, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Scalars for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }

    /// Fraction-free elimination on primitive integer rows, normalized to
    /// rationals only at the end.
    fn rref_rows(&self, rows: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
        let mut ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == ints.len() {
                break;
            }
            let Some(found) = (r..ints.len()).find(|&i| !ints[i][c].is_zero()) else {
                continue;
            };
            ints.swap(r, found);
            let (head, tail) = ints.split_at_mut(r + 1);
            let pivot_row = &head[r];
            for row in tail.iter_mut() {
                eliminate(row, pivot_row, c);
            }
            pivots.push(c);
            r += 1;
        }
        // Back substitution, still fraction-free.
        for (k, &c) in pivots.iter().enumerate().rev() {
            let (head, tail) = ints.split_at_mut(k);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                eliminate(row, pivot_row, c);
            }
        }
        *rows = ints
            .iter()
            .enumerate()
            .map(|(i, row)| match pivots.get(i) {
                Some(&c) => {
                    let lead = row[c].clone();
                    row.iter().map(|x| BigRational::new(x.clone(), lead.clone())).collect()
                }
                None => vec![BigRational::zero(); cols],
            })
            .collect();
        pivots
    }
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(ints)
}

fn make_primitive(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
    row
}

/// `row <- a*row - b*pivot` with `a, b` chosen to zero `row[c]`, then divided
/// by its content.
fn eliminate(row: &mut Vec<BigInt>, pivot: &[BigInt], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let g = row[c].gcd(&pivot[c]);
    let a = &pivot[c] / &g;
    let b = &row[c] / &g;
    let mut next: Vec<BigInt> = row.iter().zip(pivot).map(|(x, p)| &a * x - &b * p).collect();
    if a.is_negative() {
        for x in next.iter_mut() {
            *x = -&*x;
        }
    }
    *row = make_primitive(next);
}

/// The prime field `F_p` with elements represented by `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(crate::algebra::is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Scalars for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v as i128)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as i128 + *b as i128)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as i128 - *b as i128)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(*a as i128 * *b as i128)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.reduce(-(*a as i128))
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        let (mut base, mut e, mut acc) = (*a as u128, self.p - 2, 1u128);
        let p = self.p as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u64
    }
}

/// Dense rectangular matrix over an exact scalar domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<S: Scalars> {
    scalars: S,
    cols: usize,
    rows: Vec<Vec<S::Elem>>,
}

impl<S: Scalars> ExactMatrix<S> {
    pub fn new(scalars: S, cols: usize, rows: Vec<Vec<S::Elem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ExactMatrix { scalars, cols, rows }
    }

    pub fn from_i64(scalars: S, cols: usize, rows: &[Vec<i64>]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| scalars.from_i64(x)).collect()).collect();
        Self::new(scalars, cols, rows)
    }

    pub fn zeros(scalars: S, rows: usize, cols: usize) -> Self {
        let z = scalars.zero();
        Self::new(scalars, cols, vec![vec![z; cols]; rows])
    }

    pub fn identity(scalars: S, n: usize) -> Self {
        let mut m = Self::zeros(scalars, n, n);
        for i in 0..n {
            m.rows[i][i] = m.scalars.one();
        }
        m
    }

    pub fn scalars(&self) -> &S {
        &self.scalars
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<S::Elem>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &S::Elem {
        &self.rows[i][j]
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::new(self.scalars.clone(), self.cols, rows)
    }

    /// Unique reduced row echelon form and its strictly increasing pivots.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = self.scalars.rref_rows(&mut rows, self.cols);
        (Self::new(self.scalars.clone(), self.cols, rows), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Mx = 0}`, one vector per free column with a 1 there.
    pub fn nullspace(&self) -> Vec<Vec<S::Elem>> {
        let (r, pivots) = self.rref();
        let s = &self.scalars;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![s.zero(); self.cols];
                v[f] = s.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = s.neg(&r.rows[i][f]);
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &[S::Elem]) -> Vec<S::Elem> {
        let s = &self.scalars;
        self.rows.iter().map(|row| row.iter().zip(x).fold(s.zero(), |acc, (a, b)| s.add(&acc, &s.mul(a, b)))).collect()
    }
}

pub fn rref<S: Scalars>(m: &ExactMatrix<S>) -> (ExactMatrix<S>, Vec<usize>) {
    m.rref()
}

pub fn rank<S: Scalars>(m: &ExactMatrix<S>) -> usize {
    m.rank()
}

/// Solution set of `Ax = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet<E> {
    Empty,
    Affine { particular: Vec<E>, nullspace: Vec<Vec<E>> },
}

impl<E> SolutionSet<E> {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SolutionSet::Empty => None,
            SolutionSet::Affine { nullspace, .. } => Some(nullspace.len()),
        }
    }
}

/// Solves `Ax = b` in rref-canonical form: free variables are 0 in the
/// particular solution.
pub fn solve_affine<S: Scalars>(a: &ExactMatrix<S>, b: &[S::Elem]) -> SolutionSet<S::Elem> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length must match row count");
    let s = a.scalars().clone();
    let n = a.ncols();
    let rows = a.rows.iter().zip(b).map(|(r, bi)| {
        let mut row = r.clone();
        row.push(bi.clone());
        row
    });
    let aug = ExactMatrix::new(s.clone(), n + 1, rows.collect());
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return SolutionSet::Empty;
    }
    let mut particular = vec![s.zero(); n];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = r.rows[i][n].clone();
    }
    SolutionSet::Affine { particular, nullspace: a.nullspace() }
}
