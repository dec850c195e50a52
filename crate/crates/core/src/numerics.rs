//! Scalar field abstraction with two backends: exact arbitrary-precision
//! rationals and complex double precision, plus the tolerance policy used
//! by every zero test in the verification engine.
//!
//! A table is always built over a single backend. Exact tables admit exact
//! identity checks (zero means zero); float tables are judged relative to
//! the magnitude of the terms that produced them.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Element of the coefficient field.
///
/// Implemented by [`BigRational`] (exact backend) and [`Complex64`] (float
/// backend). Division is fallible so a zero divisor is always rejected
/// instead of silently producing a non-finite value.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// True when arithmetic in this backend is exact.
    const EXACT: bool;
    /// Backend name used in messages and reports.
    const BACKEND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// num/den as a field element. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact test against the field zero, independent of any tolerance.
    fn is_zero_value(&self) -> bool;

    fn try_div(&self, rhs: &Self) -> Result<Self>;

    /// Integer power. Negative exponents require a nonzero base.
    fn try_pow(&self, exp: i64) -> Result<Self>;

    /// |self| as f64, for scale estimation and diagnostics only.
    fn magnitude(&self) -> f64;

    /// Compare |self| with |other| without going through f64.
    fn abs_cmp(&self, other: &Self) -> Ordering;

    /// Parse a literal in the scalar grammar: `p`, `p/q`, a decimal with
    /// optional exponent, or (float backend only) `re+im i`.
    fn parse(text: &str) -> Result<Self>;

    /// Canonical text form; parseable back in the exact backend.
    fn to_text(&self) -> String {
        self.to_string()
    }

    /// The imaginary unit. Errors in the exact backend.
    fn imaginary_unit() -> Result<Self>;

    /// cos(self)/sin(self). Errors in the exact backend.
    fn cotangent(&self) -> Result<Self>;
}

/// Tolerance policy for zero tests.
///
/// The exact backend ignores it entirely. The float backend declares a
/// value zero iff |v| <= relative_epsilon * max(1, scale_hint), where the
/// scale hint is the magnitude of the row or table being tested.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceContext {
    pub relative_epsilon: f64,
    pub scale_hint: f64,
}

/// Default relative epsilon. Formulas involve products of roughly 2N
/// factors, which leaves headroom at N around 50 in double precision.
pub const DEFAULT_EPSILON: f64 = 1e-9;

impl ToleranceContext {
    pub fn new(relative_epsilon: f64) -> Self {
        Self {
            relative_epsilon,
            scale_hint: 1.0,
        }
    }

    /// Context for exact runs; the fields are never consulted.
    pub fn exact() -> Self {
        Self {
            relative_epsilon: 0.0,
            scale_hint: 0.0,
        }
    }

    pub fn with_scale(self, scale_hint: f64) -> Self {
        Self { scale_hint, ..self }
    }

    /// Scale raised to at least `scale`; epsilon unchanged.
    pub fn raise_scale(self, scale: f64) -> Self {
        Self {
            scale_hint: self.scale_hint.max(scale),
            ..self
        }
    }

    pub fn is_zero<S: Scalar>(&self, v: &S) -> bool {
        if S::EXACT {
            v.is_zero_value()
        } else {
            v.magnitude() <= self.relative_epsilon * self.scale_hint.max(1.0)
        }
    }
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self::new(DEFAULT_EPSILON)
    }
}

/// parse_scalar from the module contract: dispatches on the backend type.
pub fn parse_scalar<S: Scalar>(text: &str) -> Result<S> {
    S::parse(text)
}

/// is_zero from the module contract.
pub fn is_zero<S: Scalar>(v: &S, ctx: &ToleranceContext) -> bool {
    ctx.is_zero(v)
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    text.parse::<BigInt>()
        .map_err(|_| Error::MalformedScalar(text.to_string()))
}

/// Decimal with optional exponent into an exact rational.
fn parse_decimal_exact(text: &str) -> Result<BigRational> {
    let (mantissa, exp10) = match text.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = text[pos + 1..]
                .parse()
                .map_err(|_| Error::MalformedScalar(text.to_string()))?;
            (&text[..pos], e)
        }
        None => (text, 0i64),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(Error::MalformedScalar(text.to_string()));
    }
    if !frac_part.is_empty() && !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedScalar(text.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "+" || digits == "-" {
        return Err(Error::MalformedScalar(text.to_string()));
    }
    let mantissa_int = parse_bigint(&digits)?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = BigRational::from_integer(mantissa_int);
    Ok(if shift >= 0 {
        value * BigRational::from_integer(ten.pow(shift as u32))
    } else {
        value / BigRational::from_integer(ten.pow((-shift) as u32))
    })
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const BACKEND: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio with zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn try_pow(&self, exp: i64) -> Result<Self> {
        if exp == 0 {
            return Ok(One::one());
        }
        if self.is_zero() && exp < 0 {
            return Err(Error::DivisionByZero);
        }
        let mut base = self.clone();
        if exp < 0 {
            base = base.recip();
        }
        let mut result: BigRational = One::one();
        for _ in 0..exp.unsigned_abs() {
            result *= &base;
        }
        Ok(result)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::MalformedScalar(text.to_string()));
        }
        if t.ends_with(['i', 'I']) {
            return Err(Error::ComplexInExactBackend(text.to_string()));
        }
        if let Some(pos) = t.find('/') {
            let num = parse_bigint(t[..pos].trim())?;
            let den = parse_bigint(t[pos + 1..].trim())?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator(text.to_string()));
            }
            return Ok(BigRational::new(num, den));
        }
        parse_decimal_exact(t)
    }

    fn imaginary_unit() -> Result<Self> {
        Err(Error::ExactBackendUnsupported("the imaginary unit"))
    }

    fn cotangent(&self) -> Result<Self> {
        Err(Error::ExactBackendUnsupported("cotangent"))
    }
}

/// Real literal for the float backend: integer, `p/q` or decimal.
fn parse_real_f64(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Some(pos) = t.find('/') {
        let num: f64 = t[..pos]
            .trim()
            .parse()
            .map_err(|_| Error::MalformedScalar(text.to_string()))?;
        let den: f64 = t[pos + 1..]
            .trim()
            .parse()
            .map_err(|_| Error::MalformedScalar(text.to_string()))?;
        if den == 0.0 {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        return Ok(num / den);
    }
    t.parse()
        .map_err(|_| Error::MalformedScalar(text.to_string()))
}

/// Split `re<sign>im` at the sign of the imaginary part. Signs directly
/// after an exponent marker belong to the exponent.
fn split_complex_body(body: &str) -> Option<(&str, &str)> {
    let bytes = body.as_bytes();
    for pos in (1..bytes.len()).rev() {
        let b = bytes[pos];
        if (b == b'+' || b == b'-') && !matches!(bytes[pos - 1], b'e' | b'E' | b'+' | b'-') {
            return Some((&body[..pos], &body[pos..]));
        }
    }
    None
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const BACKEND: &'static str = "float";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio with zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero_value() {
            return Err(Error::DivisionByZero);
        }
        let out = self / rhs;
        if out.re.is_finite() && out.im.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn try_pow(&self, exp: i64) -> Result<Self> {
        if self.is_zero_value() && exp < 0 {
            return Err(Error::DivisionByZero);
        }
        let out = self.powi(exp as i32);
        if out.re.is_finite() && out.im.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.norm_sqr()
            .partial_cmp(&other.norm_sqr())
            .unwrap_or(Ordering::Equal)
    }

    fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::MalformedScalar(text.to_string()));
        }
        let value = if let Some(body) = t.strip_suffix(['i', 'I']) {
            let body = body.trim_end();
            match split_complex_body(body) {
                Some((re, im)) => {
                    let re = parse_real_f64(re)?;
                    let im = match im {
                        "+" => 1.0,
                        "-" => -1.0,
                        _ => parse_real_f64(im)?,
                    };
                    Complex64::new(re, im)
                }
                None => {
                    // pure imaginary: `i`, `-i`, `2.5i`
                    let im = match body {
                        "" | "+" => 1.0,
                        "-" => -1.0,
                        _ => parse_real_f64(body)?,
                    };
                    Complex64::new(0.0, im)
                }
            }
        } else {
            Complex64::new(parse_real_f64(t)?, 0.0)
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn imaginary_unit() -> Result<Self> {
        Ok(Complex64::new(0.0, 1.0))
    }

    fn cotangent(&self) -> Result<Self> {
        let s = self.sin();
        if s.is_zero_value() {
            return Err(Error::DivisionByZero);
        }
        self.cos().try_div(&s)
    }
}

/// Sum of a slice of scalars.
pub fn sum<S: Scalar>(values: &[S]) -> S {
    values
        .iter()
        .fold(S::zero(), |acc, v| acc + v)
}

/// Product of a slice of scalars.
pub fn product<S: Scalar>(values: &[S]) -> S {
    values.iter().fold(S::one(), |acc, v| acc * v)
}
