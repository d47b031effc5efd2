//! The two scalar fields everything is generic over: exact rationals and `f64`.
//!
//! Exact mode is the ground truth for identity checks. All the algebraic
//! identities in this crate are polynomial in the inner products, so in
//! exact mode a residual is either literally zero or the identity is wrong.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::ParseScalarError;
use crate::linalg::SquareMatrix;

/// Arbitrary precision rational, always in lowest terms with a positive denominator.
pub type Exact = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode {other:?} (expected exact or float)")),
        }
    }
}

pub trait Scalar:
    Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    /// `numer / denom`; `denom` must be nonzero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Parses one entry of the shared file lexicon: a decimal literal or `p/q`.
    fn parse_literal(text: &str) -> Result<Self, ParseScalarError>;

    fn to_f64(&self) -> f64;

    /// The square root when it is representable in this field.
    fn exact_sqrt(&self) -> Option<Self>;

    /// Exact mode: fraction-free Bareiss. Float mode: partially pivoted elimination.
    fn determinant(m: &SquareMatrix<Self>) -> Self;

    /// Zero test used by every identity check. Exact mode ignores `tol` and
    /// `scale`; float mode accepts `|self| <= tol * scale`.
    fn is_negligible(&self, tol: f64, scale: f64) -> bool;

    fn to_json(&self) -> serde_json::Value;

    fn approx_eq(&self, other: &Self, tol: f64, scale: f64) -> bool {
        let scale = scale.max(self.to_f64().abs()).max(other.to_f64().abs());
        (self.clone() - other.clone()).is_negligible(tol, scale)
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn parse_literal(text: &str) -> Result<Self, ParseScalarError> {
        parse_rational(text)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new_raw(n, d))
        } else {
            None
        }
    }

    fn determinant(m: &SquareMatrix<Self>) -> Self {
        rational_bareiss(m)
    }

    fn is_negligible(&self, _tol: f64, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn parse_literal(text: &str) -> Result<Self, ParseScalarError> {
        let trimmed = text.trim();
        let exact = parse_rational(trimmed)?;
        if trimmed.contains('/') {
            Ok(Self::from_rational(&exact))
        } else {
            // The grammar was validated above; std gives correct rounding.
            trimmed.parse::<f64>().map_err(|_| ParseScalarError {
                text: text.to_string(),
                reason: "not a decimal literal",
            })
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn exact_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn determinant(m: &SquareMatrix<Self>) -> Self {
        float_pivoted_determinant(m)
    }

    fn is_negligible(&self, tol: f64, scale: f64) -> bool {
        self.abs() <= tol * scale.abs()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// `base^exp` by repeated squaring.
pub fn pow<S: Scalar>(base: &S, mut exp: u64) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// `√a <= √b + √c` for nonnegative `a, b, c`, decided without square roots in
/// exact mode. Squaring twice: `a - b - c <= 2√(bc)`.
pub fn sqrt_sum_dominates<S: Scalar>(a: &S, b: &S, c: &S, tol: f64) -> bool {
    if S::MODE == Mode::Float {
        let (a, b, c) = (a.to_f64().max(0.0), b.to_f64().max(0.0), c.to_f64().max(0.0));
        return a.sqrt() <= (b.sqrt() + c.sqrt()) * (1.0 + tol) + tol;
    }
    let d = a.clone() - b.clone() - c.clone();
    if !d.is_positive() {
        return true;
    }
    let four = S::from_i64(4);
    d.clone() * d <= four * b.clone() * c.clone()
}

/// `serialize_with` adapter for scalar fields.
pub fn serialize<S: Scalar, Se: Serializer>(v: &S, s: Se) -> Result<Se::Ok, Se::Error> {
    v.to_json().serialize(s)
}

pub fn serialize_opt<S: Scalar, Se: Serializer>(v: &Option<S>, s: Se) -> Result<Se::Ok, Se::Error> {
    v.as_ref().map(Scalar::to_json).serialize(s)
}

pub fn serialize_vec<S: Scalar, Se: Serializer>(v: &[S], s: Se) -> Result<Se::Ok, Se::Error> {
    s.collect_seq(v.iter().map(Scalar::to_json))
}

const MAX_EXPONENT: i64 = 4096;

/// Parses the shared lexicon into an exact rational. Decimals are read as
/// integers over powers of ten, so `0.1` is exactly `1/10`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseScalarError> {
    let err = |reason| ParseScalarError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty entry"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = parse_integer(p.trim()).ok_or_else(|| err("numerator is not an integer"))?;
        let q: BigInt = parse_integer(q.trim()).ok_or_else(|| err("denominator is not an integer"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(p, q));
    }

    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..]
                .parse()
                .map_err(|_| err("malformed exponent"))?;
            if e.abs() > MAX_EXPONENT {
                return Err(err("exponent out of range"));
            }
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(err("not a decimal literal"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| err("not a decimal literal"))?;
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

fn rational_bareiss(m: &SquareMatrix<BigRational>) -> BigRational {
    let n = m.order();
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let out = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
            scale *= l;
            out
        })
        .collect();
    BigRational::new(integer_bareiss(&mut rows), scale)
}

/// Bareiss elimination over the integers; every division is exact.
pub(crate) fn integer_bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn float_pivoted_determinant(m: &SquareMatrix<f64>) -> f64 {
    let n = m.order();
    let mut a: Vec<f64> = m.entries().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, a[i * n + k]))
            .max_by(|l, r| l.1.abs().total_cmp(&r.1.abs()))
            .expect("nonempty pivot column");
        if pivot == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), q(-5, 2));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1.5e2").unwrap(), q(150, 1));
        assert_eq!(parse_rational("25e-3").unwrap(), q(1, 40));
    }

    #[test]
    fn parses_fractions_in_lowest_terms() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(r, q(-3, 2));
        assert!(r.denom().is_positive());
        assert_eq!(parse_rational(" +7 / 21 ").unwrap(), q(1, 3));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "nan", "inf", "1/2/3", "--1", "1e", "0x10", "1e999999"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
        assert!(f64::parse_literal("inf").is_err());
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_literal("-0.1").unwrap(), -0.1);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(9, 4).exact_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).exact_sqrt(), None);
        assert_eq!(q(-1, 1).exact_sqrt(), None);
        assert_eq!(Exact::zero().exact_sqrt(), Some(Exact::zero()));
    }

    #[test]
    fn json_forms() {
        assert_eq!(q(-3, 2).to_json(), serde_json::json!("-3/2"));
        assert_eq!(q(9, 1).to_json(), serde_json::json!("9"));
        assert_eq!(0.1f64.to_json().to_string(), "0.1");
    }

    #[test]
    fn power_and_sqrt_comparison() {
        assert_eq!(pow(&q(2, 3), 5), q(32, 243));
        assert_eq!(pow(&q(7, 1), 0), q(1, 1));
        // √9 <= √4 + √1 holds with equality
        assert!(sqrt_sum_dominates(&q(9, 1), &q(4, 1), &q(1, 1), 0.0));
        assert!(!sqrt_sum_dominates(&q(10, 1), &q(4, 1), &q(1, 1), 0.0));
    }
}
