use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense polynomial with big-integer coefficients; index = degree.
///
/// The highest stored coefficient is nonzero, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `1 + t + ... + t^k`.
    pub fn geometric(k: usize) -> Self {
        IntPolynomial { coeffs: vec![BigInt::one(); k + 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, v: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

/// Exact evaluation `P(v)`.
pub fn poly_eval_int(p: &IntPolynomial, v: &BigInt) -> BigInt {
    p.eval(v)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// Ascending degree with explicit signs, e.g. `-26*t^2 + 45*t^3 - 20*t^4 + t^6`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match j {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{j}"),
            };
            if j == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{abs}*{var}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a63() -> IntPolynomial {
        IntPolynomial::from_i64s(&[0, 0, -26, 45, -20, 0, 1])
    }

    #[test]
    fn evaluates_a63_char_poly() {
        assert_eq!(poly_eval_int(&a63(), &BigInt::from(3)), BigInt::from(90));
        assert_eq!(poly_eval_int(&a63(), &BigInt::from(2)), BigInt::from(0));
        assert_eq!(poly_eval_int(&IntPolynomial::zero(), &BigInt::from(7)), BigInt::from(0));
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let p = IntPolynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPolynomial::from_i64s(&[0, 0]).degree(), None);
    }

    #[test]
    fn renders_ascending() {
        assert_eq!(a63().to_string(), "-26*t^2 + 45*t^3 - 20*t^4 + t^6");
        assert_eq!(IntPolynomial::from_i64s(&[-1, -2, 1]).to_string(), "-1 - 2*t + t^2");
        assert_eq!(IntPolynomial::from_i64s(&[0, -1]).to_string(), "-t");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic() {
        let t_minus_1 = IntPolynomial::from_i64s(&[-1, 1]);
        let pstar = IntPolynomial::from_i64s(&[0, 0, 26, -19, 1, 1]);
        assert_eq!(&t_minus_1 * &pstar, a63());
        assert_eq!(&(&a63() + &t_minus_1) - &t_minus_1, a63());
        assert_eq!(&IntPolynomial::geometric(2) - &IntPolynomial::geometric(1), IntPolynomial::monomial(2));
    }
}
