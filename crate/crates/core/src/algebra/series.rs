use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Power series truncated at `t^m`, exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        RationalSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        RationalSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigRational {
        &self.coeffs[j]
    }

    pub fn truncate(&self, order: usize) -> Self {
        RationalSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn mul(&self, other: &RationalSeries) -> RationalSeries {
        let m = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                out[i + j] += a * b;
            }
        }
        RationalSeries { coeffs: out }
    }

    /// `(1 - a t)^e` for any integer `e`, by the generalized binomial series.
    pub fn binomial(a: &BigInt, e: i64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = BigRational::one();
        let step = BigRational::from_integer(-a.clone());
        for r in 0..=order {
            coeffs.push(c.clone());
            // C(e, r+1)(-a)^{r+1} = C(e, r)(-a)^r * (e - r)/(r + 1) * (-a)
            let ratio = BigRational::new(BigInt::from(e - r as i64), BigInt::from(r + 1));
            c = c * ratio * &step;
        }
        RationalSeries { coeffs }
    }
}

/// `exp(sum_{s>=1} N_s t^s / s)` truncated at `t^m`.
///
/// Uses `E' = L' E`, i.e. `n e_n = sum_{k=1}^{n} N_k e_{n-k}`.
pub fn series_exp_of_counts(counts: &[BigInt], m: usize) -> RationalSeries {
    assert!(counts.len() >= m, "need N_1..N_m");
    let mut e: Vec<BigRational> = Vec::with_capacity(m + 1);
    e.push(BigRational::one());
    for n in 1..=m {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            acc += BigRational::from_integer(counts[k - 1].clone()) * &e[n - k];
        }
        e.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    RationalSeries { coeffs: e }
}

/// Rational function `prod_j (1 - q^j t)^{e_j}`, stored by its exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaFactorization {
    exponents: BTreeMap<usize, i64>,
}

impl ZetaFactorization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut z = Self::new();
        for (j, e) in pairs {
            z.add(j, e);
        }
        z
    }

    pub fn add(&mut self, j: usize, e: i64) {
        let slot = self.exponents.entry(j).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exponents.remove(&j);
        }
    }

    pub fn exponent(&self, j: usize) -> i64 {
        self.exponents.get(&j).copied().unwrap_or(0)
    }

    /// Nonzero exponents in increasing `j`.
    pub fn exponents(&self) -> &BTreeMap<usize, i64> {
        &self.exponents
    }

    /// The point counts `N_s = -sum_j e_j q^{js}` encoded by the logarithmic
    /// derivative, for `s = 1..=s_max`.
    pub fn point_counts(&self, q: u64, s_max: usize) -> Vec<BigInt> {
        let q = BigInt::from(q);
        (1..=s_max)
            .map(|s| {
                self.exponents
                    .iter()
                    .fold(BigInt::zero(), |acc, (&j, &e)| acc - BigInt::from(e) * num_traits::pow(q.clone(), j * s))
            })
            .collect()
    }
}

impl fmt::Display for ZetaFactorization {
    /// Renders e.g. `(1-q^2 t)^25 / ((1-t)(1-q t)(1-q^3 t)^20)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |j: usize, e: i64| {
            let base = match j {
                0 => "(1-t)".to_string(),
                1 => "(1-q t)".to_string(),
                _ => format!("(1-q^{j} t)"),
            };
            if e.abs() == 1 {
                base
            } else {
                format!("{base}^{}", e.abs())
            }
        };
        let num: Vec<String> =
            self.exponents.iter().filter(|(_, e)| e.is_positive()).map(|(&j, &e)| factor(j, e)).collect();
        let den: Vec<String> =
            self.exponents.iter().filter(|(_, e)| e.is_negative()).map(|(&j, &e)| factor(j, e)).collect();
        let num = if num.is_empty() { "1".to_string() } else { num.concat() };
        match den.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / {}", den[0]),
            _ => write!(f, "{num} / ({})", den.concat()),
        }
    }
}

/// Expands `prod_j (1 - q^j t)^{e_j}` to order `m`.
pub fn series_expand_factorization(z: &ZetaFactorization, q: u64, m: usize) -> RationalSeries {
    let q = BigInt::from(q);
    z.exponents().iter().fold(RationalSeries::one(m), |acc, (&j, &e)| {
        acc.mul(&RationalSeries::binomial(&num_traits::pow(q.clone(), j), e, m))
    })
}
