//! Exact coefficient arithmetic over the Gaussian rationals Q(i).
//!
//! Every computation in this crate is bit-exact: coefficients are pairs of
//! arbitrary-precision rationals `re + im*i`. No floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// An element of Q(i), stored as real and imaginary `BigRational` parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// Exact rational `num/den`. Panics on zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Additive inverse (also available through `std::ops::Neg`).
    pub fn neg(self) -> Self {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }

    /// Exact rational binomial coefficient `C(r, k)` for rational `r`.
    ///
    /// Used by the closed-form series oracles (binomial expansion of the
    /// square root).
    pub fn rational_binomial(r: &BigRational, k: u32) -> BigRational {
        let mut acc = BigRational::one();
        for j in 0..k {
            let factor = r - BigRational::from_integer(BigInt::from(j));
            acc = acc * factor / BigRational::from_integer(BigInt::from(j + 1));
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            // Parenthesized so the printed form re-parses unambiguously.
            write!(f, "({} + {}*i)", self.re, self.im)
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        &self * &inv
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Signed magnitude comparison against `a/b` for acceptance bounds:
/// `|s| <= a/b`, using `|re| + |im|` as the exact magnitude proxy.
pub fn abs_le_ratio(s: &Scalar, num: i64, den: i64) -> bool {
    let mag = s.re.abs() + s.im.abs();
    mag <= BigRational::new(BigInt::from(num), BigInt::from(den))
}

// JSON encoding: a coefficient is the 4-array [num_re, den_re, num_im, den_im].
// Integers that fit in i64 are emitted as JSON numbers, larger ones as decimal
// strings; both forms are accepted on input.

pub(crate) fn bigint_to_json(n: &BigInt) -> serde_json::Value {
    match i64::try_from(n.clone()) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(n.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(BigInt::from(i))
            } else {
                n.as_u64().map(BigInt::from)
            }
        }
        serde_json::Value::String(s) => s.parse::<BigInt>().ok(),
        _ => None,
    }
}

impl Scalar {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(vec![
            bigint_to_json(self.re.numer()),
            bigint_to_json(self.re.denom()),
            bigint_to_json(self.im.numer()),
            bigint_to_json(self.im.denom()),
        ])
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let arr = v.as_array()?;
        if arr.len() != 4 {
            return None;
        }
        let parts: Vec<BigInt> = arr.iter().map(bigint_from_json).collect::<Option<_>>()?;
        if parts[1].is_zero() || parts[3].is_zero() {
            return None;
        }
        Some(Scalar {
            re: BigRational::new(parts[0].clone(), parts[1].clone()),
            im: BigRational::new(parts[2].clone(), parts[3].clone()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::from_ratio(1, 2) + &Scalar::i();
        let b = a.clone() * a.clone();
        // (1/2 + i)^2 = 1/4 - 1 + i = -3/4 + i
        assert_eq!(b.re, BigRational::new(BigInt::from(-3), BigInt::from(4)));
        assert_eq!(b.im, BigRational::one());
        let inv = a.inv().unwrap();
        assert!((a * inv).is_one());
    }

    #[test]
    fn binomial_half() {
        // C(1/2, 2) = -1/8
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            Scalar::rational_binomial(&half, 2),
            BigRational::new(BigInt::from(-1), BigInt::from(8))
        );
    }

    #[test]
    fn json_roundtrip() {
        let s = Scalar {
            re: BigRational::new(BigInt::from(-7), BigInt::from(3)),
            im: BigRational::new(BigInt::from(22), BigInt::from(5)),
        };
        let j = s.to_json();
        assert_eq!(Scalar::from_json(&j).unwrap(), s);
    }
}
