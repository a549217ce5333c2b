//! Brute-force point counts over finite fields, used as ground truth for
//! every formula in [`crate::enumerative`].
//!
//! Membership is tested by evaluating each subspace's forms at each point;
//! nothing here touches the intersection lattice.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{
    prime_power, series_exp_of_counts, series_expand_factorization, FieldDesc, FieldTables, ZetaFactorization,
};
use crate::arrangement::{specialize, Arrangement};
use crate::enumerative::FrobeniusProfile;
use crate::exec::{self, Strategy};
use crate::{Error, Result};

/// Default limit on the number of points enumerated.
pub const DEFAULT_POINT_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Union,
    Complement,
}

impl FromStr for CountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(CountMode::Union),
            "complement" => Ok(CountMode::Complement),
            other => Err(Error::Parse(format!("unknown count mode {other:?}"))),
        }
    }
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Union => "union",
            CountMode::Complement => "complement",
        })
    }
}

/// A form with coefficients as field-table indices; only nonzero linear
/// terms are kept.
struct TableForm {
    constant: u32,
    terms: Vec<(usize, u32)>,
}

struct Counter {
    tables: FieldTables,
    groups: Vec<Vec<TableForm>>,
}

impl Counter {
    fn new(a: &Arrangement, q: u64, s: usize) -> Result<Counter> {
        let (p, alpha) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let a = specialize(a, q)?;
        let field = FieldDesc::new(p, alpha as usize * s)?;
        let tables = FieldTables::new(&field)?;
        let groups = a
            .subspaces()
            .iter()
            .map(|g| {
                g.iter()
                    .map(|f| TableForm {
                        constant: tables.from_int(f.constant),
                        terms: f
                            .coeffs
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(i, &c)| (i, tables.from_int(c)))
                            .collect(),
                    })
                    .collect()
            })
            .collect();
        Ok(Counter { tables, groups })
    }

    fn in_union(&self, x: &[u32]) -> bool {
        self.groups.iter().any(|g| {
            g.iter().all(|f| {
                let mut acc = f.constant;
                for &(i, c) in &f.terms {
                    if x[i] != 0 {
                        acc = self.tables.add(acc, self.tables.mul(c, x[i]));
                    }
                }
                acc == 0
            })
        })
    }

    /// Union points among all assignments of the coordinates `free_from..free_to`,
    /// the others held at their values in `x`.
    fn count_block(&self, x: &mut [u32], free_from: usize, free_to: usize) -> u64 {
        let order = self.tables.order();
        let mut count = 0;
        loop {
            if self.in_union(x) {
                count += 1;
            }
            let mut i = free_from;
            loop {
                if i == free_to {
                    return count;
                }
                x[i] += 1;
                if x[i] < order {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }
}

/// Number of points of `F_{q^s}^n`, or of `P^{n-1}(F_{q^s})`; `None` on overflow.
pub fn ambient_point_count(q: u64, s: usize, n: usize, projective: bool) -> Option<u64> {
    ambient_total(q.checked_pow(s as u32)?, n, projective)
}

fn ambient_total(q_s: u64, n: usize, projective: bool) -> Option<u64> {
    let qn = q_s.checked_pow(n as u32)?;
    Some(if projective { (qn - 1) / (q_s - 1) } else { qn })
}

fn needed_points(q: u64, s: usize, n: usize, projective: bool) -> BigInt {
    let qs = num_traits::pow(BigInt::from(q), s);
    let qn = num_traits::pow(qs.clone(), n);
    if projective {
        (qn - 1u32) / (qs - 1u32)
    } else {
        qn
    }
}

pub fn count_points(a: &Arrangement, q: u64, s: usize, mode: CountMode, cap: u64) -> Result<u64> {
    count_points_with(a, q, s, mode, cap, Strategy::default())
}

/// Exact number of points over `F_{q^s}` in the union or the complement.
///
/// Integer arrangements are reduced mod the characteristic first. Projective
/// points are enumerated as vectors whose last nonzero coordinate is 1.
/// Work is split by the leading free coordinate.
pub fn count_points_with(
    a: &Arrangement,
    q: u64,
    s: usize,
    mode: CountMode,
    cap: u64,
    strategy: Strategy,
) -> Result<u64> {
    if s == 0 {
        return Err(Error::Parse("extension degree s must be at least 1".into()));
    }
    let n = a.ambient().n();
    let projective = a.ambient().is_projective();
    let needed = needed_points(q, s, n, projective);
    if needed > BigInt::from(cap) {
        return Err(Error::EnumerationCap { needed: needed.to_string(), cap });
    }
    let counter = Counter::new(a, q, s)?;
    let order = counter.tables.order();
    let total = ambient_total(order as u64, n, projective).expect("bounded by the cap");
    let one = counter.tables.from_int(1);
    // Each task fixes the leading coordinate (when it is free) of one block.
    let tasks: Vec<(usize, u32)> = if projective {
        std::iter::once((0, 0)).chain((1..n).flat_map(|r| (0..order).map(move |v| (r, v)))).collect()
    } else {
        (0..order).map(|v| (n, v)).collect()
    };
    let union: u64 = exec::map(strategy, &tasks, |&(r, v)| {
        let mut x = vec![0u32; n];
        if projective {
            x[r] = one;
            if r == 0 {
                return counter.count_block(&mut x, 0, 0);
            }
            x[0] = v;
            counter.count_block(&mut x, 1, r)
        } else {
            x[0] = v;
            counter.count_block(&mut x, 1, n)
        }
    })
    .into_iter()
    .sum();
    Ok(match mode {
        CountMode::Union => union,
        CountMode::Complement => total - union,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub s: usize,
    pub union: u64,
    pub complement: u64,
    pub total: u64,
}

/// Union and complement counts over `F_{q^s}` for `s = 1..=s_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub q: u64,
    pub projective: bool,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn counts(&self, mode: CountMode) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| match mode {
                CountMode::Union => r.union,
                CountMode::Complement => r.complement,
            })
            .collect()
    }
}

pub fn count_table(a: &Arrangement, q: u64, s_max: usize, cap: u64) -> Result<CountTable> {
    let projective = a.ambient().is_projective();
    let n = a.ambient().n();
    let rows = (1..=s_max)
        .map(|s| {
            let union = count_points(a, q, s, CountMode::Union, cap)?;
            let total = ambient_total(q.pow(s as u32), n, projective).expect("bounded by the cap");
            Ok(CountRow { s, union, complement: total - union, total })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountTable { q, projective, rows })
}

/// The largest `s ≤ limit` whose enumeration over `F_{q^s}` fits in `cap`.
pub fn max_s_within_cap(a: &Arrangement, q: u64, limit: usize, cap: u64) -> usize {
    let n = a.ambient().n();
    let projective = a.ambient().is_projective();
    (1..=limit).take_while(|&s| needed_points(q, s, n, projective) <= BigInt::from(cap)).last().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaCheck {
    pub ok: bool,
    /// Lowest power of `t` where the two series differ.
    pub first_failing: Option<usize>,
    pub counts: Vec<u64>,
}

/// Compares `exp(Σ N_s t^s / s)` from counted `N_s` with the expansion of
/// `z`, coefficient by coefficient through `t^{s_max}`.
pub fn verify_zeta(
    a: &Arrangement,
    q: u64,
    s_max: usize,
    z: &ZetaFactorization,
    mode: CountMode,
    cap: u64,
) -> Result<ZetaCheck> {
    let counts = count_table(a, q, s_max, cap)?.counts(mode);
    let big: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    let from_counts = series_exp_of_counts(&big, s_max);
    let from_z = series_expand_factorization(z, q, s_max);
    let first_failing = (0..=s_max).find(|&j| from_counts.coeff(j) != from_z.coeff(j));
    Ok(ZetaCheck { ok: first_failing.is_none(), first_failing, counts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzRow {
    pub s: usize,
    pub predicted: String,
    pub counted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzCheck {
    pub ok: bool,
    pub rows: Vec<LefschetzRow>,
}

/// Compares the Lefschetz trace of `f` with the matching point count for
/// `s = 1..=s_max`.
pub fn verify_lefschetz(
    a: &Arrangement,
    q: u64,
    s_max: usize,
    f: &FrobeniusProfile,
    cap: u64,
) -> Result<LefschetzCheck> {
    let counts = count_table(a, q, s_max, cap)?.counts(f.kind().count_mode());
    let rows: Vec<LefschetzRow> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| LefschetzRow { s: i + 1, predicted: f.predicted_count(q, i + 1).to_string(), counted: c })
        .collect();
    let ok = rows.iter().all(|r| r.predicted == r.counted.to_string());
    Ok(LefschetzCheck { ok, rows })
}
