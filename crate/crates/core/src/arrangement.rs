//! Arrangements of affine or projective subspaces over the integers or a
//! prime field, and their canonical subspaces.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::is_prime;
use crate::exec::Strategy;
use crate::linalg::{PrimeField, Rationals, Scalars};
use crate::{Error, Result};

/// Ring the defining forms live in. Integer arrangements are analysed over
/// the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Prime(u64),
}

impl Ring {
    pub fn characteristic(self) -> Option<u64> {
        match self {
            Ring::Integers => None,
            Ring::Prime(p) => Some(p),
        }
    }
}

/// Ambient space with `n` coordinates: affine `F^n` or projective `P^{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    Affine(usize),
    Projective(usize),
}

impl Ambient {
    /// Number of coordinates.
    pub fn n(self) -> usize {
        match self {
            Ambient::Affine(n) | Ambient::Projective(n) => n,
        }
    }

    pub fn is_projective(self) -> bool {
        matches!(self, Ambient::Projective(_))
    }

    /// Dimension of the whole space (`n`, or `n - 1` projectively).
    pub fn dim(self) -> usize {
        match self {
            Ambient::Affine(n) => n,
            Ambient::Projective(n) => n - 1,
        }
    }
}

/// `constant + sum coeffs[i] * x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn new(constant: i64, coeffs: Vec<i64>) -> Self {
        LinearForm { constant, coeffs }
    }

    pub fn homogeneous(coeffs: Vec<i64>) -> Self {
        LinearForm { constant: 0, coeffs }
    }

    /// File layout `[c0, a1, ..., an]`.
    pub fn from_row(row: &[i64]) -> Self {
        LinearForm { constant: row[0], coeffs: row[1..].to_vec() }
    }

    pub fn to_row(&self) -> Vec<i64> {
        std::iter::once(self.constant).chain(self.coeffs.iter().copied()).collect()
    }

    fn reduced(&self, p: u64) -> LinearForm {
        let r = |v: i64| v.rem_euclid(p as i64);
        LinearForm { constant: r(self.constant), coeffs: self.coeffs.iter().map(|&c| r(c)).collect() }
    }

    fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Ring plus ambient space; every canonical subspace carries one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    pub ring: Ring,
    pub ambient: Ambient,
}

/// A nonempty subspace, identified by the reduced row echelon form of its
/// defining equations. Equal subspaces have identical equation matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSubspace {
    space: Space,
    /// Rows over columns `[a_1, ..., a_n, c_0]`, zero rows dropped.
    equations: Vec<Vec<BigRational>>,
    dim: usize,
}

impl CanonicalSubspace {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn equations(&self) -> &[Vec<BigRational>] {
        &self.equations
    }

    /// Affine dimension, or projective dimension for projective spaces.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.equations.len()
    }

    /// Whether the subspace contains the origin (all constants vanish).
    pub fn is_central(&self) -> bool {
        let n = self.space.ambient.n();
        self.equations.iter().all(|r| r[n].is_zero())
    }
}

impl fmt::Display for CanonicalSubspace {
    /// Equations like `x1 - x2 = 0; x3 = 1`, or `whole space`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equations.is_empty() {
            return write!(f, "whole space");
        }
        let n = self.space.ambient.n();
        let rows: Vec<String> = self
            .equations
            .iter()
            .map(|row| {
                let mut s = String::new();
                for (i, c) in row[..n].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c < &BigRational::zero();
                    let abs = if neg { -c } else { c.clone() };
                    let sign = match (s.is_empty(), neg) {
                        (true, true) => "-",
                        (true, false) => "",
                        (false, true) => " - ",
                        (false, false) => " + ",
                    };
                    let coef =
                        if abs == BigRational::from_integer(1.into()) { String::new() } else { format!("{abs}*") };
                    s.push_str(&format!("{sign}{coef}x{}", i + 1));
                }
                format!("{s} = {}", -&row[n])
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl Space {
    pub fn new(ring: Ring, ambient: Ambient) -> Self {
        Space { ring, ambient }
    }

    /// The whole ambient space (no equations).
    pub fn whole(&self) -> CanonicalSubspace {
        CanonicalSubspace { space: *self, equations: Vec::new(), dim: self.ambient.dim() }
    }

    fn form_row(&self, form: &LinearForm) -> Vec<BigRational> {
        form.coeffs
            .iter()
            .chain(std::iter::once(&form.constant))
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect()
    }

    /// Canonical form of the subspace cut out by `forms`; `None` if empty.
    pub fn canonical(&self, forms: &[LinearForm]) -> Option<CanonicalSubspace> {
        self.canonical_rows(forms.iter().map(|f| self.form_row(f)).collect())
    }

    fn canonical_rows(&self, rows: Vec<Vec<BigRational>>) -> Option<CanonicalSubspace> {
        let n = self.ambient.n();
        let (equations, pivots) = rref_over(self.ring, rows, n + 1);
        let rank = pivots.len();
        let dim = match self.ambient {
            Ambient::Affine(_) => {
                if pivots.last() == Some(&n) {
                    return None;
                }
                n - rank
            }
            Ambient::Projective(_) => {
                if rank >= n {
                    return None;
                }
                n - 1 - rank
            }
        };
        Some(CanonicalSubspace { space: *self, equations, dim })
    }

    /// Intersection of subspaces of this space; `None` if it is empty.
    pub fn intersect(&self, xs: &[&CanonicalSubspace]) -> Result<Option<CanonicalSubspace>> {
        if xs.iter().any(|x| x.space != *self) {
            return Err(Error::SpaceMismatch);
        }
        let rows = xs.iter().flat_map(|x| x.equations.iter().cloned()).collect();
        Ok(self.canonical_rows(rows))
    }

    /// `small ⊆ big` as point sets.
    pub fn contains(&self, big: &CanonicalSubspace, small: &CanonicalSubspace) -> bool {
        if big.dim < small.dim || big.rank() > small.rank() {
            return false;
        }
        let rows: Vec<_> = small.equations.iter().chain(&big.equations).cloned().collect();
        let (_, pivots) = rref_over(self.ring, rows, self.ambient.n() + 1);
        pivots.len() == small.rank()
    }
}

/// Order-insensitive intersection of canonical subspaces from one space.
pub fn intersect(xs: &[&CanonicalSubspace]) -> Result<Option<CanonicalSubspace>> {
    let Some(first) = xs.first() else {
        return Err(Error::WrongKind { op: "intersect", expected: "a nonempty list of subspaces" });
    };
    first.space.intersect(xs)
}

/// Row-reduces over the rationals or `F_p`, dropping zero rows.
fn rref_over(ring: Ring, rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    match ring {
        Ring::Integers => {
            let mut rows = rows;
            let pivots = Rationals.rref_rows(&mut rows, cols);
            rows.truncate(pivots.len());
            (rows, pivots)
        }
        Ring::Prime(p) => {
            let field = PrimeField::new(p);
            let mut rows: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| r.iter().map(|x| field.from_i64(x.to_integer().to_i64().expect("small"))).collect())
                .collect();
            let pivots = field.rref_rows(&mut rows, cols);
            rows.truncate(pivots.len());
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect();
            (rows, pivots)
        }
    }
}

/// A list of subspaces, each given by a nonempty group of linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ring: Ring,
    ambient: Ambient,
    subspaces: Vec<Vec<LinearForm>>,
    name: Option<String>,
}

impl Arrangement {
    /// Validated constructor.
    ///
    /// Over `F_p` coefficients are reduced on load. Every subspace must be
    /// nonempty, proper, and distinct from the others.
    pub fn new(ring: Ring, ambient: Ambient, subspaces: Vec<Vec<LinearForm>>) -> Result<Self> {
        if let Ring::Prime(p) = ring {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        let n = ambient.n();
        if n == 0 {
            return Err(Error::Parse("ambient space needs n >= 1".into()));
        }
        let invalid = |index: usize, reason: &str| Error::InvalidSubspace { index, reason: reason.to_string() };
        let mut groups = Vec::with_capacity(subspaces.len());
        for (i, group) in subspaces.into_iter().enumerate() {
            if group.is_empty() {
                return Err(invalid(i, "no defining forms"));
            }
            let mut forms = Vec::with_capacity(group.len());
            for (j, form) in group.into_iter().enumerate() {
                if form.coeffs.len() != n {
                    return Err(invalid(
                        i,
                        &format!("form {j} has {} entries, expected {}", form.coeffs.len() + 1, n + 1),
                    ));
                }
                if ambient.is_projective() && form.constant != 0 {
                    return Err(invalid(i, &format!("form {j} is not homogeneous")));
                }
                forms.push(match ring {
                    Ring::Integers => form,
                    Ring::Prime(p) => form.reduced(p),
                });
            }
            groups.push(forms);
        }
        let arr = Arrangement { ring, ambient, subspaces: groups, name: None };
        let space = arr.space();
        let mut seen: HashMap<CanonicalSubspace, usize> = HashMap::new();
        for (i, group) in arr.subspaces.iter().enumerate() {
            if group.iter().all(LinearForm::is_zero) {
                return Err(invalid(i, "equals the whole space"));
            }
            let Some(c) = space.canonical(group) else {
                return Err(invalid(i, "defines the empty set"));
            };
            if c.rank() == 0 {
                return Err(invalid(i, "equals the whole space"));
            }
            if let Some(&first) = seen.get(&c) {
                return Err(Error::DuplicateSubspace { first, second: i });
            }
            seen.insert(c, i);
        }
        Ok(arr)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn space(&self) -> Space {
        Space::new(self.ring, self.ambient)
    }

    pub fn subspaces(&self) -> &[Vec<LinearForm>] {
        &self.subspaces
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    /// Canonical subspaces in input order; `None` marks an empty one (only
    /// possible after reduction mod p).
    pub fn canonical_subspaces(&self) -> Vec<Option<CanonicalSubspace>> {
        let space = self.space();
        self.subspaces.iter().map(|g| space.canonical(g)).collect()
    }

    /// The largest subspace dimension, `None` for the empty arrangement.
    pub fn dimension(&self) -> Option<usize> {
        self.canonical_subspaces().into_iter().flatten().map(|c| c.dim()).max()
    }

    /// Every subspace passes through the origin.
    pub fn is_central(&self) -> bool {
        self.subspaces.iter().all(|g| g.iter().all(|f| f.constant == 0))
    }

    /// The central arrangement in `F^n` whose projectivization is `self`.
    pub fn central_cone(&self) -> Result<Arrangement> {
        if !self.ambient.is_projective() {
            return Err(Error::WrongKind { op: "central_cone", expected: "a projective arrangement" });
        }
        Ok(Arrangement { ambient: Ambient::Affine(self.ambient.n()), ..self.clone() })
    }
}

/// Reinterprets a central affine arrangement in `F^n` projectively in
/// `P^{n-1}`; dimensions drop by one.
pub fn projectivize(a: &Arrangement) -> Result<Arrangement> {
    if a.ambient.is_projective() {
        return Err(Error::WrongKind { op: "projectivize", expected: "an affine arrangement" });
    }
    for (i, group) in a.subspaces.iter().enumerate() {
        if group.iter().any(|f| f.constant != 0) {
            return Err(Error::NotCentral(i));
        }
    }
    let canon = a.canonical_subspaces();
    for (i, c) in canon.iter().enumerate() {
        if c.as_ref().is_none_or(|c| c.dim() == 0) {
            return Err(Error::InvalidSubspace { index: i, reason: "is the origin; empty projectively".into() });
        }
    }
    Ok(Arrangement { ambient: Ambient::Projective(a.ambient.n()), ..a.clone() })
}

/// What changed when reducing an integer arrangement modulo a prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionReport {
    /// Subspaces whose equations become inconsistent (empty over `F_p`).
    pub inconsistent: Vec<usize>,
    /// Subspaces whose equations all vanish (the whole space over `F_p`).
    pub degenerate: Vec<usize>,
    /// Pairs of subspaces that coincide over `F_p`.
    pub coincident: Vec<(usize, usize)>,
}

impl ReductionReport {
    pub fn is_clean(&self) -> bool {
        self.inconsistent.is_empty() && self.degenerate.is_empty() && self.coincident.is_empty()
    }
}

/// Reduces every coefficient mod `p`, keeping the subspace grouping even
/// where subspaces collapse; the report lists what collapsed.
pub fn reduce_mod_p(a: &Arrangement, p: u64) -> Result<(Arrangement, ReductionReport)> {
    if a.ring != Ring::Integers {
        return Err(Error::WrongKind { op: "reduce_mod_p", expected: "an integer arrangement" });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let reduced = Arrangement {
        ring: Ring::Prime(p),
        ambient: a.ambient,
        subspaces: a.subspaces.iter().map(|g| g.iter().map(|f| f.reduced(p)).collect()).collect(),
        name: a.name.clone(),
    };
    let mut report = ReductionReport::default();
    let mut seen: HashMap<CanonicalSubspace, usize> = HashMap::new();
    for (i, c) in reduced.canonical_subspaces().into_iter().enumerate() {
        match c {
            None => report.inconsistent.push(i),
            Some(c) if c.rank() == 0 => report.degenerate.push(i),
            Some(c) => {
                if let Some(&first) = seen.get(&c) {
                    report.coincident.push((first, i));
                } else {
                    seen.insert(c, i);
                }
            }
        }
    }
    Ok((reduced, report))
}

/// Arrangement over `ring` to analyse point counts over `F_q`: integer
/// arrangements are reduced mod the characteristic of `q`.
pub fn specialize(a: &Arrangement, q: u64) -> Result<Arrangement> {
    let (p, _) = crate::algebra::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    match a.ring {
        Ring::Integers => Ok(reduce_mod_p(a, p)?.0),
        Ring::Prime(r) if r == p => Ok(a.clone()),
        Ring::Prime(r) => Err(Error::CharacteristicMismatch { q, p: r }),
    }
}

/// Outcome of [`good_prime`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub good: bool,
    /// A subset of subspace indices whose stacked forms change rank mod p.
    pub witness: Option<Vec<usize>>,
    pub subsets_checked: u64,
}

/// Default limit on the number of subsets examined by [`good_prime`].
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 20;

/// Tests whether reduction mod `p` preserves the rank of every collection of
/// forms made of whole subspace groups. Subsets are scanned by increasing
/// size, in lexicographic order within a size, and the scan stops at the
/// first witness, which is therefore a smallest one.
///
/// Both the rank of the full forms `[a | c0]` and of their linear parts are
/// compared, so inhomogeneous subspaces that become inconsistent mod p are
/// caught as well.
///
/// A subset whose ranks agree and already equal the rational ranks of the
/// whole arrangement is saturated: every superset has the same ranks on both
/// sides, so supersets reached only through saturated subsets are skipped.
/// `subsets_checked` counts the subsets whose ranks were computed.
pub fn good_prime(a: &Arrangement, p: u64, cap: u64) -> Result<PrimeCheck> {
    good_prime_with(a, p, cap, Strategy::default())
}

pub fn good_prime_with(a: &Arrangement, p: u64, cap: u64, strategy: Strategy) -> Result<PrimeCheck> {
    if a.ring != Ring::Integers {
        return Err(Error::WrongKind { op: "good_prime", expected: "an integer arrangement" });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let t = a.subspaces.len();
    let n = a.ambient.n();
    let all: Vec<&LinearForm> = a.subspaces.iter().flatten().collect();
    let top = form_ranks(&all, n, p).map(|(q, _)| q);
    let mut checked = 0u64;
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    while !level.is_empty() {
        let candidates: Vec<Vec<usize>> = level
            .iter()
            .flat_map(|s| {
                let from = s.last().map_or(0, |&m| m + 1);
                (from..t).map(move |i| {
                    let mut next = s.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
        let Some(budget) = cap.checked_sub(checked) else {
            return Err(Error::SubsetCap { cap });
        };
        if candidates.len() as u64 > budget {
            return Err(Error::SubsetCap { cap });
        }
        let ranks = crate::exec::map(strategy, &candidates, |s| {
            let forms: Vec<&LinearForm> = s.iter().flat_map(|&i| a.subspaces[i].iter()).collect();
            form_ranks(&forms, n, p)
        });
        let mut next = Vec::new();
        for (s, r) in candidates.into_iter().zip(ranks) {
            checked += 1;
            if r.iter().any(|(q, p)| q != p) {
                return Ok(PrimeCheck { good: false, witness: Some(s), subsets_checked: checked });
            }
            if r.iter().zip(&top).any(|((q, _), full)| q != full) {
                next.push(s);
            }
        }
        level = next;
    }
    Ok(PrimeCheck { good: true, witness: None, subsets_checked: checked })
}

/// Rank of the stacked forms over Q and over F_p, both with and without the
/// constant column.
pub fn form_ranks(forms: &[&LinearForm], n: usize, p: u64) -> [(usize, usize); 2] {
    let field = PrimeField::new(p);
    let full: Vec<Vec<i64>> = forms.iter().map(|f| f.to_row()).collect();
    let linear: Vec<Vec<i64>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    let rq = |rows: &[Vec<i64>], cols| crate::linalg::ExactMatrix::from_i64(Rationals, cols, rows).rank();
    let rp = |rows: &[Vec<i64>], cols| crate::linalg::ExactMatrix::from_i64(field, cols, rows).rank();
    [(rq(&full, n + 1), rp(&full, n + 1)), (rq(&linear, n), rp(&linear, n))]
}

fn next_combination(combo: &mut [usize], t: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < t - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The k-equal families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KEqualFamily {
    A,
    B,
    D,
}

impl std::str::FromStr for KEqualFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(KEqualFamily::A),
            "B" | "b" => Ok(KEqualFamily::B),
            "D" | "d" => Ok(KEqualFamily::D),
            other => Err(Error::Parse(format!("unknown k-equal family {other:?}"))),
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        if k == 0 || !next_combination(&mut combo, n) {
            return out;
        }
    }
}

/// The affine integer k-equal arrangement of the given family in `n`
/// coordinates.
///
/// Type A has one subspace `x_{i1} = ... = x_{ik}` per k-subset. Type D uses
/// every sign pattern `e_1 x_{i1} = ... = e_k x_{ik}` with `e_1 = +1` (the
/// patterns `e` and `-e` give the same subspace). Type B adds
/// `x_{j1} = ... = x_{j(k-1)} = 0` for each (k-1)-subset.
pub fn generate_k_equal(family: KEqualFamily, n: usize, k: usize) -> Result<Arrangement> {
    if k < 2 || k > n {
        return Err(Error::KEqualRange { n, k });
    }
    let mut groups: Vec<Vec<LinearForm>> = Vec::new();
    for idx in combinations(n, k) {
        let patterns = match family {
            KEqualFamily::A => 1,
            KEqualFamily::B | KEqualFamily::D => 1usize << (k - 1),
        };
        for mask in 0..patterns {
            let sign = |a: usize| if a > 0 && mask >> (a - 1) & 1 == 1 { -1 } else { 1 };
            let forms = (0..k - 1)
                .map(|a| {
                    let mut c = vec![0i64; n];
                    c[idx[a]] = sign(a);
                    c[idx[a + 1]] = -sign(a + 1);
                    LinearForm::homogeneous(c)
                })
                .collect();
            groups.push(forms);
        }
    }
    if family == KEqualFamily::B {
        for idx in combinations(n, k - 1) {
            let forms = idx
                .iter()
                .map(|&j| {
                    let mut c = vec![0i64; n];
                    c[j] = 1;
                    LinearForm::homogeneous(c)
                })
                .collect();
            groups.push(forms);
        }
    }
    let space = Space::new(Ring::Integers, Ambient::Affine(n));
    let mut seen = std::collections::HashSet::new();
    groups.retain(|g| seen.insert(space.canonical(g)));
    let name = format!("{family:?}({n},{k})");
    Ok(Arrangement::new(Ring::Integers, Ambient::Affine(n), groups)?.with_name(name))
}
