use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sparse integer row: `(column, value)` pairs with strictly increasing
/// columns and nonzero values.
pub type SparseRow = Vec<(usize, i64)>;

/// Exact rank over the rationals of an integer matrix given by sparse rows.
///
/// Rows are inserted one at a time into an echelon basis keyed by leading
/// column, using fraction-free elimination with content removal. Arithmetic
/// runs in `i128` and is redone with big integers if anything overflows.
pub fn sparse_rank(rows: &[SparseRow]) -> usize {
    match rank_with::<i128>(rows) {
        Some(r) => r,
        None => rank_with::<BigInt>(rows).expect("big integers do not overflow"),
    }
}

trait Coef: Clone + PartialEq + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    /// `a*x - b*y`, or `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Self;
}

impl Coef for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> Self {
        -self
    }
}

impl Coef for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> Self {
        -self
    }
}

fn rank_with<C: Coef>(rows: &[SparseRow]) -> Option<usize> {
    let mut basis: HashMap<usize, Vec<(usize, C)>> = HashMap::new();
    for row in rows {
        let mut cur: Vec<(usize, C)> = row.iter().filter(|(_, v)| *v != 0).map(|&(c, v)| (c, C::from_i64(v))).collect();
        while let Some((lead, _)) = cur.first() {
            match basis.get(lead) {
                Some(pivot) => cur = reduce(&cur, pivot)?,
                None => {
                    basis.insert(*lead, cur);
                    break;
                }
            }
        }
    }
    Some(basis.len())
}

/// Eliminates the common leading entry of `row` using `pivot`.
fn reduce<C: Coef>(row: &[(usize, C)], pivot: &[(usize, C)]) -> Option<Vec<(usize, C)>> {
    let (rv, pv) = (&row[0].1, &pivot[0].1);
    let g = rv.gcd(pv);
    let a = pv.div_exact(&g);
    let b = rv.div_exact(&g);
    let zero = C::from_i64(0);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, x, y) = if ci < cj {
            i += 1;
            (ci, &row[i - 1].1, &zero)
        } else if cj < ci {
            j += 1;
            (cj, &zero, &pivot[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1, &pivot[j - 1].1)
        };
        let v = C::mul_sub(&a, x, &b, y)?;
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    let g = out.iter().fold(C::from_i64(0), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() {
        let flip = out[0].1.is_negative();
        for (_, v) in out.iter_mut() {
            *v = v.div_exact(&g);
            if flip {
                *v = v.negate();
            }
        }
    }
    Some(out)
}
