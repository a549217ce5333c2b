use std::fmt;
use std::sync::Arc;

use super::prime::{distinct_prime_factors, is_prime};
use crate::{Error, Result};

/// A finite field `F_p[x] / (f)` with `f` monic irreducible of degree `k`.
///
/// Cloning is cheap; all clones share one description.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldInner>);

struct FieldInner {
    p: u64,
    k: usize,
    /// Monic, `k + 1` coefficients, lowest degree first. For `k = 1` this is `x`.
    modulus: Vec<u64>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
    }
}

/// Builds `F_{p^k}` using the lexicographically smallest monic irreducible of
/// degree `k` (coefficients compared lowest degree first).
pub fn make_extension_field(p: u64, k: usize) -> Result<FieldDesc> {
    FieldDesc::new(p, k)
}

impl FieldDesc {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        checked_order(p, k)?;
        if k == 1 {
            return Ok(Self::from_parts(p, 1, vec![0, 1]));
        }
        // Enumerate c_0..c_{k-1} with c_0 the most significant digit.
        let total = p.pow(k as u32);
        for code in 0..total {
            let mut lower = vec![0u64; k];
            let mut rest = code;
            for i in (0..k).rev() {
                lower[i] = rest % p;
                rest /= p;
            }
            let mut modulus = lower;
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(Self::from_parts(p, k, modulus));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Builds a field from an explicit monic modulus, lowest degree first.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        checked_order(p, k)?;
        if modulus.iter().any(|&c| c >= p) || modulus[k] != 1 || !is_irreducible(&modulus, p) {
            return Err(Error::Reducible(k));
        }
        Ok(Self::from_parts(p, k, modulus))
    }

    fn from_parts(p: u64, k: usize, modulus: Vec<u64>) -> Self {
        FieldDesc(Arc::new(FieldInner { p, k, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn order(&self) -> u64 {
        self.0.p.pow(self.0.k as u32)
    }

    pub fn zero(&self) -> FFElement {
        FFElement { field: self.clone(), coeffs: vec![0; self.0.k] }
    }

    pub fn one(&self) -> FFElement {
        self.from_int(1)
    }

    /// Image of an integer under `Z -> F_p -> F_{p^k}`.
    pub fn from_int(&self, v: i64) -> FFElement {
        let mut e = self.zero();
        e.coeffs[0] = v.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// Element with the given coefficients (reduced mod p, padded or reduced
    /// modulo the defining polynomial).
    pub fn element(&self, coeffs: &[i64]) -> FFElement {
        let p = self.0.p;
        let raw: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        let reduced = poly_rem(&raw, &self.0.modulus, p);
        let mut out = self.zero();
        out.coeffs[..reduced.len()].copy_from_slice(&reduced);
        out
    }

    /// The element whose base-p digits are its coefficients.
    pub fn from_index(&self, mut index: u64) -> FFElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = index % self.0.p;
            index /= self.0.p;
        }
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    fn check(&self, a: &FFElement) -> Result<()> {
        if &a.field == self {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

fn checked_order(p: u64, k: usize) -> Result<u64> {
    u32::try_from(k)
        .ok()
        .and_then(|k32| p.checked_pow(k32))
        .filter(|&q| q <= 1 << 40)
        .ok_or(Error::FieldTooLarge { p, k })
}

/// Element of a finite field, stored as its coefficient vector of length `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElement {
    field: FieldDesc,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl std::hash::Hash for FFElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
}

/// Applies `op` to `a` (and `b` for binary operations; ignored for `Inv`).
pub fn ff_arith(a: &FFElement, b: &FFElement, op: FieldOp) -> Result<FFElement> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Inv => a.inv(),
    }
}

impl FFElement {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn index(&self) -> u64 {
        let p = self.field.0.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn add(&self, other: &FFElement) -> Result<FFElement> {
        self.field.check(other)?;
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect();
        Ok(FFElement { field: self.field.clone(), coeffs })
    }

    pub fn neg(&self) -> FFElement {
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FFElement { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &FFElement) -> Result<FFElement> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FFElement) -> Result<FFElement> {
        self.field.check(other)?;
        let inner = &self.field.0;
        let prod = poly_mul(&self.coeffs, &other.coeffs, inner.p);
        let reduced = poly_rem(&prod, &inner.modulus, inner.p);
        let mut coeffs = vec![0; inner.k];
        coeffs[..reduced.len()].copy_from_slice(&reduced);
        Ok(FFElement { field: self.field.clone(), coeffs })
    }

    pub fn pow(&self, mut e: u64) -> FFElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FFElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> FFElement {
        self.pow(self.field.0.p)
    }
}

/// Index-based arithmetic tables for fast point enumeration.
///
/// Elements are encoded as the integer whose base-p digits are the
/// coefficients; multiplication goes through discrete log tables.
pub struct FieldTables {
    p: u32,
    k: usize,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl FieldTables {
    /// Largest field order for which tables are built.
    pub const MAX_ORDER: u64 = 1 << 22;

    pub fn new(field: &FieldDesc) -> Result<Self> {
        let order = field.order();
        if order > Self::MAX_ORDER {
            return Err(Error::FieldTooLarge { p: field.characteristic(), k: field.degree() });
        }
        let generator = primitive_element(field);
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![0u32; order as usize];
        let mut cur = field.one();
        for i in 0..order - 1 {
            let idx = cur.index();
            exp.push(idx as u32);
            log[idx as usize] = i as u32;
            cur = cur.mul(&generator).expect("same field");
        }
        let mut tables = FieldTables {
            p: field.characteristic() as u32,
            k: field.degree(),
            order: order as u32,
            exp,
            log,
            add: None,
        };
        if order <= 1024 {
            let n = order as usize;
            let mut add = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = tables.add_digits(a as u32, b as u32);
                }
            }
            tables.add = Some(add);
        }
        Ok(tables)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.order + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n as u64;
        self.exp[s as usize]
    }

    /// Index of the image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

fn primitive_element(field: &FieldDesc) -> FFElement {
    let n = field.order() - 1;
    let factors = distinct_prime_factors(n);
    for idx in 1..field.order() {
        let g = field.from_index(idx);
        if factors.iter().all(|&r| g.pow(n / r) != field.one()) {
            return g;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

// Dense polynomials over F_p, lowest degree first, trimmed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: no roots and `gcd(f, x^{p^i} - x) = 1` for `i <= k/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let eval = |x: u64| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    let mut h = vec![0, 1];
    for _ in 1..=k / 2 {
        h = poly_powmod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f, &trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
