//! Number types the charging ledgers are generic over.

use std::fmt::{Debug, Display};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Field-like scalar used for charge values.
///
/// Exact rationals have zero tolerance; floats compare with a small slack.
pub trait Scalar:
    Num + Signed + Clone + Debug + Display + PartialOrd + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root when it is representable in this type.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Slack allowed when comparing values that should be equal.
    fn tolerance() -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// `a >= b` up to [`Scalar::tolerance`].
    fn at_least(a: &Self, b: &Self) -> bool {
        a.clone() - b.clone() >= -Self::tolerance()
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn tolerance() -> Self {
        1e-4
    }
}

impl Scalar for Ratio<i128> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = (*self.numer(), *self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (rn * rn == n && rd * rd == d).then(|| Ratio::new(rn, rd))
    }

    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// Parses `"3/5"`, `"2"` or a plain decimal such as `"0.7236068"` exactly.
pub fn parse_exact(text: &str) -> Option<Ratio<i128>> {
    let text = text.trim();
    if text.contains('/') {
        return text.parse().ok();
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 18 {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: i128 = format!("{int}{frac}").parse().ok()?;
    Some(Ratio::new(sign * digits, 10i128.pow(frac.len() as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i128>;

    #[test]
    fn exact_square_roots() {
        assert_eq!(Q::from_usize(9).sqrt_exact(), Some(Q::from_usize(3)));
        assert_eq!(Q::from_ratio(4, 25).sqrt_exact(), Some(Q::from_ratio(2, 5)));
        assert_eq!(Q::from_usize(5).sqrt_exact(), None);
        assert_eq!(Q::from_ratio(-1, 1).sqrt_exact(), None);
        assert!((5.0f64.sqrt_exact().unwrap() - 2.2360679).abs() < 1e-6);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_exact("0.6"), Some(Q::from_ratio(3, 5)));
        assert_eq!(parse_exact("3/5"), Some(Q::from_ratio(3, 5)));
        assert_eq!(parse_exact("1"), Some(Q::from_usize(1)));
        assert_eq!(parse_exact(".5"), Some(Q::from_ratio(1, 2)));
        assert_eq!(parse_exact("-0.25"), Some(Q::from_ratio(-1, 4)));
        assert_eq!(parse_exact("0.7236068"), Some(Q::from_ratio(1809017, 2500000)));
        assert_eq!(parse_exact("x"), None);
        assert_eq!(parse_exact("."), None);
    }

    #[test]
    fn tolerant_comparison() {
        assert!(f64::at_least(&(0.8 - 1e-12), &0.8));
        assert!(!f64::at_least(&0.79, &0.8));
        assert!(!Q::at_least(&Q::from_ratio(79, 100), &Q::from_ratio(4, 5)));
        assert!(Q::at_least(&Q::from_ratio(4, 5), &Q::from_ratio(4, 5)));
    }
}
