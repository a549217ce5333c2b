//! Characteristic polynomials, beta triangles, zeta factorizations and
//! Frobenius weight profiles computed from the intersection semilattice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{IntPolynomial, ZetaFactorization};
use crate::exec::{self, Strategy};
use crate::lattice::Semilattice;
use crate::oracle::CountMode;
use crate::topology::{euler_char_reduced, order_complex, poset_betti, BettiVector};
use crate::{Error, Result};

fn require_affine(l: &Semilattice, op: &'static str) -> Result<()> {
    if l.is_projective() {
        return Err(Error::WrongKind { op, expected: "an affine lattice" });
    }
    Ok(())
}

fn require_projective(l: &Semilattice, op: &'static str) -> Result<()> {
    if !l.is_projective() {
        return Err(Error::WrongKind { op, expected: "a projective lattice" });
    }
    Ok(())
}

/// `P_A(t) = Σ_x μ(0̂,x) t^{dim x}`.
pub fn char_poly(l: &Semilattice) -> Result<IntPolynomial> {
    require_affine(l, "char_poly")?;
    let mu = l.mobius();
    Ok((0..l.len()).fold(IntPolynomial::zero(), |acc, x| {
        &acc + &IntPolynomial::monomial(l.dim(x)).scale(&BigInt::from(mu.get(0, x)))
    }))
}

/// `P*_A(t) = Σ_x μ(0̂,x) (1 + t + ... + t^{dim x})`.
pub fn reduced_char_poly(l: &Semilattice) -> Result<IntPolynomial> {
    require_projective(l, "reduced_char_poly")?;
    let mu = l.mobius();
    Ok((0..l.len()).fold(IntPolynomial::zero(), |acc, x| {
        &acc + &IntPolynomial::geometric(l.dim(x)).scale(&BigInt::from(mu.get(0, x)))
    }))
}

/// `(t - 1) P*(L_p) = P(L_c)` for a central lattice and its projectivization.
pub fn central_vs_projective_check(lc: &Semilattice, lp: &Semilattice) -> Result<bool> {
    let p = char_poly(lc)?;
    let pstar = reduced_char_poly(lp)?;
    Ok(&IntPolynomial::from_i64s(&[-1, 1]) * &pstar == p)
}

/// Reduced Betti numbers of `Δ(L^{≥j})` for `j = 0..=N`, `N` the dimension
/// of the projective ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationBetti {
    max_dim: Option<usize>,
    betti: Vec<BettiVector>,
}

impl TruncationBetti {
    /// `d`, the largest subspace dimension; `None` for the empty arrangement.
    pub fn max_dim(&self) -> Option<usize> {
        self.max_dim
    }

    /// Dimension `N` of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn get(&self, j: usize) -> &BettiVector {
        &self.betti[j]
    }
}

pub fn truncation_betti(l: &Semilattice) -> Result<TruncationBetti> {
    truncation_betti_with(l, Strategy::default())
}

pub fn truncation_betti_with(l: &Semilattice, strategy: Strategy) -> Result<TruncationBetti> {
    require_projective(l, "truncation_betti")?;
    let betti = exec::map_range(strategy, 0..l.ambient_dim() + 1, |j| poset_betti(&l.truncation(j as i64)));
    Ok(TruncationBetti { max_dim: l.max_dim(), betti })
}

/// `c_j = -χ̃(Δ(L^{≥j}))` for every coefficient of `P*`.
pub fn truncation_euler_check(l: &Semilattice) -> Result<bool> {
    let pstar = reduced_char_poly(l)?;
    let n = l.ambient_dim();
    if pstar.degree().is_some_and(|deg| deg > n) {
        return Ok(false);
    }
    Ok((0..=n).all(|j| pstar.coeff(j) == BigInt::from(-euler_char_reduced(&order_complex(&l.truncation(j as i64))))))
}

/// Unreduced Betti numbers `β^{≥j}_i` for `0 ≤ j ≤ d`, `0 ≤ i ≤ d - j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BetaTriangle {
    rows: Vec<Vec<u64>>,
}

impl BetaTriangle {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        BetaTriangle { rows }
    }

    pub fn from_truncations(t: &TruncationBetti) -> Self {
        let Some(d) = t.max_dim else { return BetaTriangle::default() };
        let rows = (0..=d)
            .map(|j| {
                let b = t.get(j);
                debug_assert!(b.top_degree() <= (d - j) as i64);
                (0..=(d - j) as i64).map(|i| b.unreduced(i)).collect()
            })
            .collect();
        BetaTriangle { rows }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// `β^{≥j}_i`, zero outside the triangle.
    pub fn get(&self, j: usize, i: i64) -> u64 {
        if i < 0 {
            return 0;
        }
        self.rows.get(j).and_then(|r| r.get(i as usize)).copied().unwrap_or(0)
    }
}

pub fn beta_triangle(l: &Semilattice) -> Result<BetaTriangle> {
    Ok(BetaTriangle::from_truncations(&truncation_betti(l)?))
}

/// `β^C_i = Σ_j β^{≥j}_{i-2j}` for `0 ≤ i ≤ 2d`.
pub fn complex_betti(b: &BetaTriangle) -> Vec<u64> {
    let Some(d) = b.max_dim() else { return Vec::new() };
    (0..=2 * d).map(|i| (0..=d).map(|j| b.get(j, i as i64 - 2 * j as i64)).sum()).collect()
}

/// `β^{⊕j}_k = Σ_{dim x = j} β̃_k(Δ(0̂, x))` over `x ≠ 0̂`, for `k ≥ -1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalBetaTable {
    /// `rows[j][k + 1]`.
    rows: Vec<Vec<u64>>,
}

impl LocalBetaTable {
    /// One stratum per entry: a dimension and the reduced Betti numbers of
    /// the interval below it.
    pub fn from_strata<'a>(strata: impl IntoIterator<Item = (usize, &'a BettiVector)>) -> Self {
        let mut t = LocalBetaTable::default();
        for (j, b) in strata {
            if t.rows.len() <= j {
                t.rows.resize(j + 1, Vec::new());
            }
            for (k, v) in b.nonzero() {
                let row = &mut t.rows[j];
                let idx = (k + 1) as usize;
                if row.len() <= idx {
                    row.resize(idx + 1, 0);
                }
                row[idx] += v;
            }
        }
        t
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn get(&self, j: usize, k: i64) -> u64 {
        if k < -1 {
            return 0;
        }
        self.rows.get(j).and_then(|r| r.get((k + 1) as usize)).copied().unwrap_or(0)
    }

    /// `(j, k, β^{⊕j}_k)` for every nonzero entry.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, i64, u64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(j, row)| {
            row.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(idx, &v)| (j, idx as i64 - 1, v))
        })
    }
}

pub fn local_beta_table(l: &Semilattice) -> Result<LocalBetaTable> {
    local_beta_table_with(l, Strategy::default())
}

pub fn local_beta_table_with(l: &Semilattice, strategy: Strategy) -> Result<LocalBetaTable> {
    require_affine(l, "local_beta_table")?;
    let betti = exec::map_range(strategy, 1..l.len(), |x| poset_betti(&l.open_interval(0, x)));
    Ok(LocalBetaTable::from_strata((1..l.len()).map(|x| l.dim(x)).zip(&betti)))
}

fn coeff_i64(p: &IntPolynomial, j: usize) -> i64 {
    p.coeff(j).to_i64().expect("coefficient fits in i64")
}

/// Complement of an affine arrangement: `e_j = -c_j`.
pub fn zeta_affine_complement(p: &IntPolynomial) -> ZetaFactorization {
    ZetaFactorization::from_pairs((0..p.coeffs().len()).map(|j| (j, -coeff_i64(p, j))))
}

/// Union of an affine arrangement in `F^n`: `e_j = c_j` for `j < n`.
pub fn zeta_affine_union(p: &IntPolynomial) -> ZetaFactorization {
    let n = p.degree().unwrap_or(0);
    ZetaFactorization::from_pairs((0..n).map(|j| (j, coeff_i64(p, j))))
}

/// Union of a projective arrangement: `e_j = c_j - 1` for `0 ≤ j ≤ d`.
pub fn zeta_projective_union(pstar: &IntPolynomial, d: Option<usize>) -> ZetaFactorization {
    let Some(d) = d else { return ZetaFactorization::new() };
    ZetaFactorization::from_pairs((0..=d).map(|j| (j, coeff_i64(pstar, j) - 1)))
}

/// Complement of a projective arrangement: `e_j = -c_j`.
pub fn zeta_projective_complement(pstar: &IntPolynomial) -> ZetaFactorization {
    zeta_affine_complement(pstar)
}

/// Zeta function of the union from the complex Betti numbers, valid when the
/// lattice is Cohen-Macaulay and hereditary:
/// `e_{d-j} = (-1)^{j+1} β^C_{2d-j} - δ_j`, `δ_j = 1` for odd `j`.
pub fn zeta_from_cm(betti_complex: &[u64], d: usize) -> ZetaFactorization {
    ZetaFactorization::from_pairs((0..=d).map(|j| {
        let b = betti_complex.get(2 * d - j).copied().unwrap_or(0) as i64;
        let sign = if j % 2 == 1 { 1 } else { -1 };
        (d - j, sign * b - (j % 2) as i64)
    }))
}

/// `(-1)^{d-j} c_j ≤ 0` for `0 ≤ j ≤ d`.
pub fn check_sign_alternation(p: &IntPolynomial, d: usize) -> bool {
    (0..=d).all(|j| {
        let c = p.coeff(j);
        let signed = if (d - j).is_multiple_of(2) { c } else { -c };
        !signed.is_positive()
    })
}

/// Every nonzero `β̃^{≥j}_i` with `j ≤ d` has `i + j ≡ d (mod m)`.
pub fn check_mod_m_vanishing(t: &TruncationBetti, m: usize) -> bool {
    assert!(m >= 1, "m must be positive");
    let Some(d) = t.max_dim() else { return true };
    (0..=d).all(|j| t.get(j).nonzero().all(|(i, _)| (i + j as i64 - d as i64).rem_euclid(m as i64) == 0))
}

/// Which cohomology a profile describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `H^*` of the union of a projective arrangement.
    ProjectiveUnion,
    /// `H^*_c` of the complement of an affine arrangement.
    AffineComplement,
    /// Reduced `H^*` of a central union with the origin removed.
    CentralPunctured,
    /// `H^*_c` of the complement of a projective arrangement.
    ProjectiveComplement,
    /// Ordinary `H^*` of the complement of a projective arrangement.
    ProjectiveComplementOrdinary,
}

impl ProfileKind {
    /// The point count the Lefschetz trace is compared with.
    pub fn count_mode(self) -> CountMode {
        match self {
            ProfileKind::ProjectiveUnion | ProfileKind::CentralPunctured => CountMode::Union,
            _ => CountMode::Complement,
        }
    }
}

/// Frobenius weights: `m_{i,j}` copies of the eigenvalue `q^j` in degree `i`,
/// so `P_i(t) = Π_j (1 - q^j t)^{m_{i,j}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusProfile {
    kind: ProfileKind,
    ambient_dim: usize,
    entries: BTreeMap<i32, BTreeMap<usize, u64>>,
}

impl FrobeniusProfile {
    pub fn new(kind: ProfileKind, ambient_dim: usize) -> Self {
        FrobeniusProfile { kind, ambient_dim, entries: BTreeMap::new() }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn add(&mut self, i: i32, j: usize, m: u64) {
        if m > 0 {
            *self.entries.entry(i).or_default().entry(j).or_insert(0) += m;
        }
    }

    pub fn multiplicity(&self, i: i32, j: usize) -> u64 {
        self.entries.get(&i).and_then(|r| r.get(&j)).copied().unwrap_or(0)
    }

    /// Degrees with at least one eigenvalue, with their weights.
    pub fn entries(&self) -> &BTreeMap<i32, BTreeMap<usize, u64>> {
        &self.entries
    }

    /// Lowest and highest nonzero degree.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.entries.keys().next()?, *self.entries.keys().next_back()?))
    }

    /// `P_i(t)` as a product of linear factors.
    pub fn polynomial(&self, i: i32) -> ZetaFactorization {
        ZetaFactorization::from_pairs(self.entries.get(&i).into_iter().flatten().map(|(&j, &m)| (j, m as i64)))
    }

    /// `Σ_i (-1)^i Σ_j m_{i,j} q^{js}`.
    pub fn trace(&self, q: u64, s: usize) -> BigInt {
        let q = BigInt::from(q);
        let mut total = BigInt::zero();
        for (&i, row) in &self.entries {
            for (&j, &m) in row {
                let term = BigInt::from(m) * num_traits::pow(q.clone(), j * s);
                if i.rem_euclid(2) == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
        total
    }

    /// The point count predicted by the Lefschetz formula.
    ///
    /// Compactly supported profiles give their trace directly. The punctured
    /// central union uses reduced cohomology of an open variety, whose trace
    /// is minus the number of points of the union including the origin. The
    /// ordinary complement profile is traced through Poincaré duality.
    pub fn predicted_count(&self, q: u64, s: usize) -> BigInt {
        match self.kind {
            ProfileKind::CentralPunctured => -self.trace(q, s),
            ProfileKind::ProjectiveComplementOrdinary => self.poincare_dual().trace(q, s),
            _ => self.trace(q, s),
        }
    }

    /// Zeta factorization `Π_i P_i(t)^{(-1)^{i+1}}`.
    pub fn zeta(&self) -> ZetaFactorization {
        let mut z = ZetaFactorization::new();
        for (&i, row) in &self.entries {
            for (&j, &m) in row {
                z.add(j, if i.rem_euclid(2) == 1 { m as i64 } else { -(m as i64) });
            }
        }
        z
    }

    /// Swaps compactly supported and ordinary cohomology of the projective
    /// complement: `i ↦ 2N - i`, `j ↦ N - j`.
    pub fn poincare_dual(&self) -> FrobeniusProfile {
        let kind = match self.kind {
            ProfileKind::ProjectiveComplement => ProfileKind::ProjectiveComplementOrdinary,
            ProfileKind::ProjectiveComplementOrdinary => ProfileKind::ProjectiveComplement,
            other => panic!("no duality rule for {other:?}"),
        };
        let n = self.ambient_dim;
        let mut out = FrobeniusProfile::new(kind, n);
        for (&i, row) in &self.entries {
            for (&j, &m) in row {
                out.add(2 * n as i32 - i, n - j, m);
            }
        }
        out
    }

    /// Lines like `P_3 = (1-q t)^10`, one per nonzero degree.
    pub fn render(&self) -> Vec<String> {
        self.entries.keys().map(|&i| format!("P_{i} = {}", self.polynomial(i))).collect()
    }
}

/// `H^*` of a projective union: `m_{i,j} = β^{≥j}_{i-2j}` (unreduced).
pub fn frobenius_projective_union(b: &BetaTriangle, ambient_dim: usize) -> FrobeniusProfile {
    let mut f = FrobeniusProfile::new(ProfileKind::ProjectiveUnion, ambient_dim);
    for (j, row) in b.rows().iter().enumerate() {
        for (i, &m) in row.iter().enumerate() {
            f.add((2 * j + i) as i32, j, m);
        }
    }
    f
}

/// `H^*_c` of an affine complement in `F^n`:
/// `m_{2j+2+k, j} = β^{⊕j}_k` for `k ≥ -1`, plus the top class `m_{2n,n} = 1`.
pub fn frobenius_affine_complement(t: &LocalBetaTable, n: usize) -> FrobeniusProfile {
    let mut f = FrobeniusProfile::new(ProfileKind::AffineComplement, n);
    for (j, k, m) in t.nonzero() {
        f.add((2 * j as i64 + 2 + k) as i32, j, m);
    }
    f.add(2 * n as i32, n, 1);
    f
}

/// Reduced `H^*` of a central union minus the origin:
/// `m_{2j+k, j} = β^{⊕j}_k`, over the elements `x ≠ 0̂`.
pub fn frobenius_central_punctured(l: &Semilattice) -> Result<FrobeniusProfile> {
    require_affine(l, "frobenius_central_punctured")?;
    if !l.is_central() {
        return Err(Error::WrongKind { op: "frobenius_central_punctured", expected: "a central arrangement" });
    }
    Ok(frobenius_punctured_from_table(&local_beta_table(l)?, l.ambient_dim()))
}

/// The punctured profile from a table of strata; `A^n` itself is the table
/// with the single entry `β^{⊕n}_{-1} = 1`.
pub fn frobenius_punctured_from_table(t: &LocalBetaTable, n: usize) -> FrobeniusProfile {
    let mut f = FrobeniusProfile::new(ProfileKind::CentralPunctured, n);
    for (j, k, m) in t.nonzero() {
        f.add((2 * j as i64 + k) as i32, j, m);
    }
    f
}

/// `H^*_c` of a projective complement in `P^N`:
/// `m_{2j+1+k, j} = β̃_k(Δ(L^{≥j}))` for `0 ≤ j ≤ N`, `k ≥ -1`.
///
/// Truncations above `d` are empty and contribute `β̃_{-1} = 1`; the one at
/// `j = N` is the top class. Returns the compactly supported profile and its
/// Poincaré dual (ordinary cohomology).
pub fn frobenius_projective_complement(t: &TruncationBetti) -> (FrobeniusProfile, FrobeniusProfile) {
    let n = t.ambient_dim();
    let mut f = FrobeniusProfile::new(ProfileKind::ProjectiveComplement, n);
    for j in 0..=n {
        for (k, m) in t.get(j).nonzero() {
            f.add((2 * j as i64 + 1 + k) as i32, j, m);
        }
    }
    let dual = f.poincare_dual();
    (f, dual)
}
