//! Exact rationals and rational-endpoint intervals for the irrational
//! quantities (fractional powers, `e`) that show up in the ratio bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Bits of relative precision used for interval enclosures; 2^-200 is
/// comfortably below 10^-50.
pub const DEFAULT_PRECISION_BITS: u32 = 200;

/// 70 digits of Euler's number.
const E_DIGITS: &str = "2.7182818284590452353602874713526624977572470936999595749669676277240766";

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Always `num/den`, including integers (`5/1`).
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameters(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow_u(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

/// Closed interval `[lo, hi]` with rational endpoints enclosing a real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    /// Euler's number, enclosed to roughly 10^-69.
    pub fn e() -> Self {
        let approx = parse_rational(E_DIGITS).expect("constant parses");
        let slack = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 69));
        Interval::new(&approx - &slack, approx + slack)
    }

    /// `Some(Less)` if every point is below `q`, `Some(Greater)` if every point
    /// is above, `Some(Equal)` only for an exact point equal to `q`,
    /// `None` when `q` lies inside the enclosure.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_interval(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Product of two intervals with nonnegative endpoints.
    pub fn mul_nonneg(&self, other: &Interval) -> Interval {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Interval::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// Quotient of two intervals with positive endpoints.
    pub fn div_pos(&self, other: &Interval) -> Interval {
        debug_assert!(self.lo.is_positive() || self.lo.is_zero());
        debug_assert!(other.lo.is_positive());
        Interval::new(&self.lo / &other.hi, &self.hi / &other.lo)
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        if q.is_negative() {
            Interval::new(&self.hi * q, &self.lo * q)
        } else {
            Interval::new(&self.lo * q, &self.hi * q)
        }
    }

    pub fn recip_pos(&self) -> Interval {
        debug_assert!(self.lo.is_positive());
        Interval::new(self.hi.recip(), self.lo.recip())
    }

    /// Power of a nonnegative interval.
    pub fn pow_nonneg(&self, e: u32) -> Interval {
        Interval::new(pow_u(&self.lo, e), pow_u(&self.hi, e))
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.midpoint(), digits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", fmt_rational(&self.lo))
        } else {
            write!(f, "[{}, {}]", decimal_string(&self.lo, 52), decimal_string(&self.hi, 52))
        }
    }
}

/// Truncated decimal expansion of `q`.
pub fn decimal_string(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    let frac = format!("{:0>width$}", frac.to_string(), width = digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Enclosure of the nonnegative `q`-th root of `a >= 0`, by bisection.
pub fn nth_root(a: &Rational, q: u32, bits: u32) -> Interval {
    assert!(q >= 1);
    assert!(!a.is_negative());
    if q == 1 || a.is_zero() || a.is_one() {
        return Interval::point(a.clone());
    }
    let mut lo = Rational::zero();
    let mut hi = if a > &Rational::one() { a.clone() } else { Rational::one() };
    let tol = Rational::new(BigInt::one(), BigInt::one() << bits);
    let two = int(2);
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        match pow_u(&mid, q).cmp(a) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Interval::point(mid),
        }
    }
    Interval::new(lo, hi)
}

/// Enclosure of `base^exp` for `base > 0` and `exp >= 0` rational.
pub fn pow_rational(base: &Rational, exp: &Rational, bits: u32) -> Interval {
    assert!(base.is_positive());
    assert!(!exp.is_negative());
    let p = exp.numer().to_u32().expect("exponent numerator fits in u32");
    let q = exp.denom().to_u32().expect("exponent denominator fits in u32");
    let powered = pow_u(base, p);
    nth_root(&powered, q, bits)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial coefficient `l (l-1) ... (l-j+1) / j!` for real `l`.
pub fn binomial_real(l: f64, j: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (l - i as f64) / (i + 1) as f64;
    }
    acc
}

/// Solves `binomial_real(l, j) = target` for `l >= j - 1` by bisection.
/// The function is increasing on that range.
pub fn solve_binomial_real(target: f64, j: u32, tol: f64) -> f64 {
    assert!(target >= 0.0);
    let mut lo = j as f64 - 1.0;
    if j == 0 {
        return lo.max(0.0);
    }
    let mut hi = lo.max(1.0);
    while binomial_real(hi, j) < target {
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if binomial_real(mid, j) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_with_denominator() {
        assert_eq!(fmt_rational(&int(5)), "5/1");
        assert_eq!(fmt_rational(&rat(10, 4)), "5/2");
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("2/3").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn sqrt_half_enclosure() {
        let r = nth_root(&rat(1, 2), 2, 200);
        let lo2 = pow_u(&r.lo, 2);
        let hi2 = pow_u(&r.hi, 2);
        assert!(lo2 <= rat(1, 2) && hi2 >= rat(1, 2));
        assert!(r.to_decimal(8).starts_with("0.70710678"));
    }

    #[test]
    fn e_enclosure_is_tight() {
        let e = Interval::e();
        assert!(e.to_decimal(50).starts_with("2.71828182845904523536028747135266249775724709369995"));
        assert_eq!(e.cmp_rational(&rat(27, 10)), Some(Ordering::Greater));
    }

    #[test]
    fn generalized_binomial_solves() {
        let l = solve_binomial_real(6.0, 2, 1e-12);
        assert!((l - 4.0).abs() < 1e-9);
        assert!((binomial_real(4.0, 2) - 6.0).abs() < 1e-12);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(binomial(3, 5), 0);
    }
}
