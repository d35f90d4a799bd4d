//! Exact scalar arithmetic: big rationals, sign-times-square-root values and
//! the complex combinations of those that invariant forms take as values.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg};

/// Exact rational scalar used throughout the engine.
pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for a ratio of integers.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `n` into (largest square divisor's root, squarefree part).
fn squarefree_split(mut n: u128) -> (u128, u128) {
    assert!(n > 0, "squarefree_split needs a positive argument");
    let mut square_root = 1u128;
    let mut free = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            square_root *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // remaining n is 1 or a prime
    free *= n;
    (square_root, free)
}

fn big_to_u128(b: &BigInt) -> u128 {
    b.to_u128()
        .expect("radicand does not fit in u128; value outside supported scale")
}

/// A scalar of the form q * sqrt(r) with q rational and r a positive
/// squarefree radicand. Zero is canonically (0, 1). Addition is only
/// defined when radicands agree; anything else is an internal
/// consistency failure and panics.
#[derive(Clone, PartialEq, Eq)]
pub struct SignSqrt {
    q: Q,
    r: u64,
}

impl SignSqrt {
    pub fn zero() -> Self {
        SignSqrt { q: Q::zero(), r: 1 }
    }

    pub fn one() -> Self {
        SignSqrt { q: Q::one(), r: 1 }
    }

    /// A plain rational (radicand 1).
    pub fn from_q(q: Q) -> Self {
        SignSqrt { q, r: 1 }
    }

    /// The principal square root of a nonnegative rational, in canonical form.
    pub fn sqrt_of(s: &Q) -> Self {
        assert!(!s.is_negative(), "sqrt_of needs a nonnegative rational");
        if s.is_zero() {
            return SignSqrt::zero();
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let n = big_to_u128(s.numer());
        let d = big_to_u128(s.denom());
        let (k, m) = squarefree_split(n * d);
        let q = Q::new(BigInt::from(k), BigInt::from(d));
        SignSqrt {
            q,
            r: u64::try_from(m).expect("squarefree radicand exceeds u64"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.r == 1
    }

    pub fn radicand(&self) -> u64 {
        self.r
    }

    pub fn rational_part(&self) -> &Q {
        &self.q
    }

    /// The value as a rational; panics if the radicand is not 1.
    pub fn to_q(&self) -> Q {
        assert!(
            self.is_rational() || self.is_zero(),
            "irrational SignSqrt (radicand {}) used where a rational was required",
            self.r
        );
        self.q.clone()
    }

    /// Exact square, always rational: (q*sqrt(r))^2 = q^2 * r.
    pub fn square(&self) -> Q {
        &self.q * &self.q * qi(self.r as i64)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return SignSqrt::zero();
        }
        SignSqrt {
            q: &self.q * c,
            r: self.r,
        }
    }
}

impl Add for &SignSqrt {
    type Output = SignSqrt;
    fn add(self, other: &SignSqrt) -> SignSqrt {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.r, other.r,
            "SignSqrt addition with mismatched radicands {} vs {}: internal consistency failure",
            self.r, other.r
        );
        let q = &self.q + &other.q;
        if q.is_zero() {
            SignSqrt::zero()
        } else {
            SignSqrt { q, r: self.r }
        }
    }
}

impl Mul for &SignSqrt {
    type Output = SignSqrt;
    fn mul(self, other: &SignSqrt) -> SignSqrt {
        if self.is_zero() || other.is_zero() {
            return SignSqrt::zero();
        }
        // r1, r2 squarefree: r1*r2 = g^2 * (r1/g)(r2/g) with g = gcd, and the
        // cofactors are coprime squarefree, so their product is squarefree.
        let g = gcd_u64(self.r, other.r);
        let m = (self.r / g) * (other.r / g);
        SignSqrt {
            q: &self.q * &other.q * qi(g as i64),
            r: m,
        }
    }
}

impl Neg for &SignSqrt {
    type Output = SignSqrt;
    fn neg(self) -> SignSqrt {
        if self.is_zero() {
            return SignSqrt::zero();
        }
        SignSqrt {
            q: -self.q.clone(),
            r: self.r,
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Debug for SignSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}*sqrt({})", self.q, self.r)
        }
    }
}

impl fmt::Display for SignSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Complex value re + i*im with SignSqrt components. This is the value type
/// for complexified invariant forms evaluated on root vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct CVal {
    pub re: SignSqrt,
    pub im: SignSqrt,
}

impl CVal {
    pub fn zero() -> Self {
        CVal {
            re: SignSqrt::zero(),
            im: SignSqrt::zero(),
        }
    }

    pub fn real(re: SignSqrt) -> Self {
        CVal {
            re,
            im: SignSqrt::zero(),
        }
    }

    pub fn imaginary(im: SignSqrt) -> Self {
        CVal {
            re: SignSqrt::zero(),
            im,
        }
    }

    pub fn from_q(q: Q) -> Self {
        CVal::real(SignSqrt::from_q(q))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CVal {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Self {
        CVal {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        CVal {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    pub fn scale_sqrt(&self, s: &SignSqrt) -> Self {
        CVal {
            re: &self.re * s,
            im: &self.im * s,
        }
    }
}

impl Add for &CVal {
    type Output = CVal;
    fn add(self, other: &CVal) -> CVal {
        CVal {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
}

impl Mul for &CVal {
    type Output = CVal;
    fn mul(self, other: &CVal) -> CVal {
        let ac = &self.re * &other.re;
        let bd = &self.im * &other.im;
        let ad = &self.re * &other.im;
        let bc = &self.im * &other.re;
        CVal {
            re: &ac + &(-&bd),
            im: &ad + &bc,
        }
    }
}

impl Neg for &CVal {
    type Output = CVal;
    fn neg(self) -> CVal {
        CVal {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Debug for CVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i*{:?})", self.re, self.im)
    }
}

/// Rational rendered for reports; aborts loudly outside i64 range.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct QJson(pub i64, pub i64);

impl QJson {
    pub fn of(q: &Q) -> Self {
        QJson(
            q.numer().to_i64().expect("numerator exceeds i64 in report"),
            q.denom()
                .to_i64()
                .expect("denominator exceeds i64 in report"),
        )
    }
}

/// SignSqrt rendered for reports.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SignSqrtJson {
    pub sign: i8,
    pub numerator: i64,
    pub denominator: i64,
    pub radicand: u64,
}

impl SignSqrtJson {
    pub fn of(s: &SignSqrt) -> Self {
        let q = s.rational_part();
        let sign = if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        };
        SignSqrtJson {
            sign,
            numerator: q
                .numer()
                .abs()
                .to_i64()
                .expect("numerator exceeds i64 in report"),
            denominator: q
                .denom()
                .to_i64()
                .expect("denominator exceeds i64 in report"),
            radicand: s.radicand(),
        }
    }
}
