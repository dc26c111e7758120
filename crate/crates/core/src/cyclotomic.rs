//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNum`] of conductor `N` is stored as its coordinates in the power
//! basis `1, z, …, z^(φ(N)−1)` of `Q(z)`, `z = exp(2πi/N)`, i.e. reduced
//! modulo the `N`-th cyclotomic polynomial. The representation is unique, so
//! structural equality after lifting to a common conductor is exact equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    assert!(n >= 1, "conductor must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            poly = divide_monic(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient, the degree of the `n`-th cyclotomic polynomial.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// An element of `Q(exp(2πi/N))`.
#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

fn reduce(n: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for k in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[k], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        // x^k = x^(k-deg) * x^deg and x^deg = -Σ_{j<deg} φ_j x^j.
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                let idx = k - deg + j;
                poly[idx] = &poly[idx] - &c * BigRational::from_integer(BigInt::from(pj));
            }
        }
    }
    poly.truncate(deg);
    poly.resize(deg, BigRational::zero());
    poly
}

impl CycNum {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        CycNum { conductor, coeffs: vec![BigRational::zero(); totient(conductor)] }
    }

    pub fn from_rational(conductor: u32, q: BigRational) -> Self {
        let mut out = Self::zero(conductor);
        out.coeffs[0] = q;
        out
    }

    pub fn from_int(conductor: u32, k: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_int(conductor, 1)
    }

    /// `z^k` for any integer `k`.
    pub fn zeta_pow(conductor: u32, k: i64) -> Self {
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        CycNum { conductor, coeffs: reduce(conductor, poly) }
    }

    /// Builds `Σ (num/den)·z^exp` from a list of terms.
    pub fn from_terms(conductor: u32, terms: &[(i64, i64, i64)]) -> Self {
        let mut out = Self::zero(conductor);
        for &(num, den, exp) in terms {
            assert!(den != 0, "zero denominator in cyclotomic term");
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            out = out + Self::zeta_pow(conductor, exp).scale(&c);
        }
        out
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coordinates in the reduced power basis.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the number is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Re-expresses the number over a conductor divisible by the current one.
    pub fn lift(&self, conductor: u32) -> Self {
        assert!(conductor.is_multiple_of(self.conductor), "lift target must be a multiple of the conductor");
        if conductor == self.conductor {
            return self.clone();
        }
        let step = (conductor / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycNum { conductor, coeffs: reduce(conductor, poly) }
    }

    /// Complex conjugate, `z ↦ z^(-1)`.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = (n - i) % n;
            poly[j] = &poly[j] + c;
        }
        CycNum { conductor: self.conductor, coeffs: reduce(self.conductor, poly) }
    }

    /// Value under the embedding `z = exp(2πi/N)`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / n;
                Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Nonzero `(numerator, denominator, exponent)` terms of the reduced form.
    pub fn terms(&self) -> Vec<(BigInt, BigInt, u32)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.numer().clone(), c.denom().clone(), i as u32))
            .collect()
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m), other.lift(m))
    }

    /// Total order used for canonical sorting of characters.
    ///
    /// Equal numbers compare equal; otherwise values are ordered by the
    /// argument in `[0, 2π)` of their complex embedding, then by modulus.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let key = |z: Complex64| {
            let re = if z.re.abs() < 1e-12 { 0.0 } else { z.re };
            let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
            let mut arg = im.atan2(re);
            if arg < 0.0 {
                arg += 2.0 * std::f64::consts::PI;
            }
            (arg, z.norm())
        };
        let (a, b) = (key(self.to_complex()), key(other.to_complex()));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl Add<&CycNum> for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.common(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycNum { conductor: a.conductor, coeffs }
    }
}

impl Sub<&CycNum> for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Mul<&CycNum> for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.common(rhs);
        let len = a.coeffs.len() + b.coeffs.len();
        let mut poly = vec![BigRational::zero(); len.max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] = &poly[i + j] + x * y;
                }
            }
        }
        CycNum { conductor: a.conductor, coeffs: reduce(a.conductor, poly) }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (num, den, exp)) in terms.iter().enumerate() {
            let neg = num.is_negative();
            let abs = num.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let coeff = if den.is_one() { abs.to_string() } else { format!("{abs}/{den}") };
            match (*exp, coeff.as_str()) {
                (0, c) => write!(f, "{c}")?,
                (e, "1") => write!(f, "z{}^{e}", self.conductor)?,
                (e, c) => write!(f, "{c}*z{}^{e}", self.conductor)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(60), 16);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..=24u32 {
            let s = (0..n as i64).fold(CycNum::zero(n), |acc, k| acc + CycNum::zeta_pow(n, k));
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn zeta3_plus_inverse_is_minus_one() {
        let z = CycNum::zeta_pow(3, 1);
        assert_eq!(&z + &z.conj(), CycNum::from_int(3, -1));
    }

    #[test]
    fn lift_preserves_value() {
        let a = CycNum::from_terms(5, &[(-1, 1, 2), (-1, 1, 3)]);
        let b = a.lift(60);
        assert_eq!(a, b);
        assert!((a.to_complex() - b.to_complex()).norm() < 1e-12);
        // The golden ratio squares to itself plus one.
        assert_eq!(&a * &a, &a + &CycNum::one(5));
    }

    #[test]
    fn mixed_conductors() {
        let i = CycNum::zeta_pow(4, 1);
        let w = CycNum::zeta_pow(3, 1);
        let p = &i * &w;
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, CycNum::zeta_pow(12, 7));
    }

    #[test]
    fn canonical_order_follows_argument() {
        let n = 5;
        let vals: Vec<_> = (0..n as i64).map(|k| CycNum::zeta_pow(n, k)).collect();
        for w in vals.windows(2) {
            assert_eq!(w[0].canonical_cmp(&w[1]), Ordering::Less);
        }
        assert_eq!(CycNum::from_int(4, 2).canonical_cmp(&CycNum::from_int(4, -2)), Ordering::Less);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(CycNum::zeta_pow(3, 2).to_string(), "-1 - z3^1");
        assert_eq!(CycNum::zero(7).to_string(), "0");
    }
}
