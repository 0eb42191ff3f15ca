//! Exact nonnegative rationals for proximity parameters and rates.
//!
//! All accept/reject and far/close thresholds in this crate compare integers
//! via u128 cross-multiplication, never floats, so boundary cases like
//! `distance == eps * C(n,k)` are decided exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative rational `num/den` with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rat {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    /// Reduced rational. Errors on a zero denominator.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(
                "rational with denominator 0".into(),
            ));
        }
        if num == 0 {
            return Ok(Rat { num: 0, den: 1 });
        }
        let g = gcd(num, den);
        Ok(Rat {
            num: num / g,
            den: den / g,
        })
    }

    /// Rational that keeps the given denominator (used for empirical
    /// fractions whose denominator is the sample count).
    pub fn new_raw(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(
                "rational with denominator 0".into(),
            ));
        }
        Ok(Rat { num, den })
    }

    pub const ZERO: Rat = Rat { num: 0, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `self < 1`.
    pub fn lt_one(&self) -> bool {
        self.num < self.den
    }

    /// `self < 1/2`.
    pub fn lt_half(&self) -> bool {
        2 * u128::from(self.num) < u128::from(self.den)
    }

    /// `count > self * scale`, exactly.
    pub fn count_exceeds(&self, count: u64, scale: u64) -> bool {
        u128::from(count) * u128::from(self.den) > u128::from(self.num) * u128::from(scale)
    }

    /// `count < self * scale`, exactly.
    pub fn count_below(&self, count: u64, scale: u64) -> bool {
        u128::from(count) * u128::from(self.den) < u128::from(self.num) * u128::from(scale)
    }

    /// `hits/total <= self / 2`, exactly. Requires `total >= 1`.
    pub fn fraction_le_half(&self, hits: u64, total: u64) -> bool {
        2 * u128::from(hits) * u128::from(self.den) <= u128::from(self.num) * u128::from(total)
    }

    /// Largest integer `<= self * scale`.
    pub fn floor_times(&self, scale: u64) -> u64 {
        let v = u128::from(self.num) * u128::from(scale) / u128::from(self.den);
        u64::try_from(v).expect("floor of rational multiple exceeds u64")
    }

    /// Smallest integer `>= self * scale`.
    pub fn ceil_times(&self, scale: u64) -> u64 {
        let n = u128::from(self.num) * u128::from(scale);
        let d = u128::from(self.den);
        u64::try_from(n.div_ceil(d)).expect("ceil of rational multiple exceeds u64")
    }

    /// `self / divisor` as a new reduced rational; errors on u64 overflow.
    pub fn div_by(&self, divisor: u64) -> Result<Rat> {
        let den = self
            .den
            .checked_mul(divisor)
            .ok_or_else(|| Error::Overflow(format!("{}/{} / {}", self.num, self.den, divisor)))?;
        Rat::new(self.num, den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal string with exactly six digits after the point, rounded
    /// half-up. Used for stable report rendering.
    pub fn to_decimal6(&self) -> String {
        let scaled = u128::from(self.num) * 1_000_000;
        let den = u128::from(self.den);
        let rounded = (scaled + den / 2) / den;
        format!("{}.{:06}", rounded / 1_000_000, rounded % 1_000_000)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p/q`, plain integers, and decimals like `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |s: &str| Error::InvalidParameter(format!("cannot parse rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| bad(s))?;
            let den: u64 = q.trim().parse().map_err(|_| bad(s))?;
            return Rat::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad(s));
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad(s))?
            };
            let frac_val: u64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad(s))?
            };
            let den = 10u64.checked_pow(frac.len() as u32).ok_or_else(|| bad(s))?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac_val))
                .ok_or_else(|| Error::Overflow(format!("rational literal {s:?}")))?;
            return Rat::new(num, den);
        }
        let num: u64 = s.parse().map_err(|_| bad(s))?;
        Rat::new(num, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3/10".parse::<Rat>().unwrap(), Rat::new(3, 10).unwrap());
        assert_eq!("0.3".parse::<Rat>().unwrap(), Rat::new(3, 10).unwrap());
        assert_eq!("0.125".parse::<Rat>().unwrap(), Rat::new(1, 8).unwrap());
        assert_eq!("1".parse::<Rat>().unwrap(), Rat::new(1, 1).unwrap());
        assert_eq!(".5".parse::<Rat>().unwrap(), Rat::new(1, 2).unwrap());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("-1/2".parse::<Rat>().is_err());
    }

    #[test]
    fn exact_comparisons() {
        let eps = Rat::new(3, 10).unwrap();
        // 4 > 0.3 * 10 = 3, but 3 is not.
        assert!(eps.count_exceeds(4, 10));
        assert!(!eps.count_exceeds(3, 10));
        // capture: count < eps * scale
        assert!(eps.count_below(2, 10));
        assert!(!eps.count_below(3, 10));
        // alpha = 3/20 <= 0.3/2 = 3/20 holds with equality
        assert!(eps.fraction_le_half(3, 20));
        assert!(!eps.fraction_le_half(4, 20));
    }

    #[test]
    fn floor_ceil_times() {
        let eps = Rat::new(45, 100).unwrap();
        assert_eq!(eps.floor_times(780), 351);
        assert_eq!(eps.ceil_times(780), 351);
        let third = Rat::new(1, 3).unwrap();
        assert_eq!(third.floor_times(10), 3);
        assert_eq!(third.ceil_times(10), 4);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::new(2, 3).unwrap().to_decimal6(), "0.666667");
        assert_eq!(Rat::new(1, 2).unwrap().to_decimal6(), "0.500000");
        assert_eq!(Rat::ZERO.to_decimal6(), "0.000000");
        assert_eq!(Rat::new(7, 4).unwrap().to_decimal6(), "1.750000");
    }

    #[test]
    fn raw_keeps_denominator() {
        let alpha = Rat::new_raw(2, 60).unwrap();
        assert_eq!(alpha.den(), 60);
        assert_eq!(alpha.num(), 2);
    }
}
