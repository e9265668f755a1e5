//! Exact arithmetic: big-integer binomials, rationals, and two small number
//! types for quantities that are not always rational.
//!
//! * [`RootValue`] is `(num/den)^(1/root)`, the shape of every minimal spread
//!   parameter.
//! * [`HalfPower`] is `coeff * base^(e/2)`, the shape of the bad-pair bounds
//!   whose exponent `-k/2` is fractional for odd `k`.
//!
//! Both compare exactly against rationals by raising to integer powers.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

pub type Rational = BigRational;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` extended by zero to negative or out-of-range arguments.
pub fn binomial_ext(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    binomial(n as u64, k as u64)
}

/// `C(n, k)` as a `u128`, saturating at `u128::MAX`. Used for cost estimates.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    binomial(n, k).to_u128().unwrap_or(u128::MAX)
}

/// Falling factorial `(x)_y = x (x-1) ... (x-y+1)`.
pub fn falling(x: u64, y: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..y {
        if i > x {
            return BigUint::zero();
        }
        acc *= x - i;
    }
    acc
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, n))
}

pub fn from_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn to_f64(r: &Rational) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    if num.is_finite() && den.is_finite() {
        return num / den;
    }
    // Very large operands: scale both down to the same bit length first.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    num / den
}

/// Parses `a/b` or a bare integer `a`. Decimal notation is rejected so that
/// exact arithmetic survives the command line.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = match num.parse() {
        Ok(v) => v,
        Err(_) => return input(format!("`{text}` is not a rational of the form a/b")),
    };
    let den: BigInt = match den.parse() {
        Ok(v) => v,
        Err(_) => return input(format!("`{text}` is not a rational of the form a/b")),
    };
    if den.is_zero() {
        return input(format!("`{text}` has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `floor(x)` for a non-negative rational, as `u64` (saturating).
pub fn floor_u64(x: &Rational) -> u64 {
    if x.is_negative() {
        return 0;
    }
    x.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// A rational serialized as `{"num": "...", "den": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRational {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for JsonRational {
    fn from(r: &Rational) -> Self {
        JsonRational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<&JsonRational> for Rational {
    type Error = crate::Error;

    fn try_from(j: &JsonRational) -> Result<Rational> {
        parse_rational(&format!("{}/{}", j.num, j.den))
    }
}

/// `#[serde(with = "serde_rational")]` for `Rational` fields.
pub mod serde_rational {
    use super::{JsonRational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        JsonRational::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let j = JsonRational::deserialize(d)?;
        Rational::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "serde_rational_vec")]` for `Vec<Rational>` fields.
pub mod serde_rational_vec {
    use super::{JsonRational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(JsonRational::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<JsonRational>::deserialize(d)?
            .iter()
            .map(|j| Rational::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}

fn ubig(n: u64) -> BigUint {
    BigUint::from(n)
}

/// The non-negative real `(num/den)^(1/root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootValue {
    num: BigUint,
    den: BigUint,
    root: u32,
}

impl RootValue {
    pub fn new(num: u64, den: u64, root: u32) -> RootValue {
        assert!(den > 0 && root > 0, "RootValue needs den > 0 and root > 0");
        if num == 0 {
            return RootValue::zero();
        }
        RootValue {
            num: ubig(num),
            den: ubig(den),
            root,
        }
    }

    pub fn zero() -> RootValue {
        RootValue {
            num: BigUint::zero(),
            den: BigUint::one(),
            root: 1,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let base = to_f64(&Rational::new(self.num.clone().into(), self.den.clone().into()));
        base.powf(1.0 / self.root as f64)
    }

    /// The exact rational value, when `num/den` is a perfect `root`-th power.
    pub fn exact(&self) -> Option<Rational> {
        let reduced = Rational::new(self.num.clone().into(), self.den.clone().into());
        if self.root == 1 {
            return Some(reduced);
        }
        let n = reduced.numer().magnitude().clone();
        let d = reduced.denom().magnitude().clone();
        let rn = n.nth_root(self.root);
        let rd = d.nth_root(self.root);
        if rn.pow(self.root) == n && rd.pow(self.root) == d {
            Some(Rational::new(rn.into(), rd.into()))
        } else {
            None
        }
    }

    /// Exact comparison of `self` with a non-negative rational `x`.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        assert!(!x.is_negative());
        // self^root = num/den  vs  x^root = xn^root / xd^root
        let xn = x.numer().magnitude().pow(self.root);
        let xd = x.denom().magnitude().pow(self.root);
        (&self.num * xd).cmp(&(xn * &self.den))
    }

    fn upper_numerator(&self, d: u64) -> u64 {
        let mut a = (self.to_f64() * d as f64).ceil().max(0.0) as u64;
        while self.cmp_rational(&ratio(a, d)) == Ordering::Greater {
            a += 1;
        }
        while a > 0 && self.cmp_rational(&ratio(a - 1, d)) != Ordering::Greater {
            a -= 1;
        }
        a
    }

    /// Smallest `a / denominator` that is `>= self`.
    pub fn rational_upper(&self, denominator: u64) -> Rational {
        let d = denominator.max(1);
        ratio(self.upper_numerator(d), d)
    }

    /// Largest `a / denominator` that is strictly `< self`, or `None` when
    /// `self` is zero.
    pub fn rational_lower(&self, denominator: u64) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        let d = denominator.max(1);
        Some(ratio(self.upper_numerator(d) - 1, d))
    }
}

impl PartialOrd for RootValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootValue {
    fn cmp(&self, other: &Self) -> Ordering {
        // (a/b)^(1/i) vs (c/d)^(1/j)  <=>  a^j d^i vs c^i b^j
        let lhs = self.num.pow(other.root) * other.den.pow(self.root);
        let rhs = other.num.pow(self.root) * self.den.pow(other.root);
        lhs.cmp(&rhs)
    }
}

/// The non-negative real `coeff * base^(half_exponent / 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPower {
    pub coeff: Rational,
    pub base: Rational,
    pub half_exponent: i32,
}

impl HalfPower {
    pub fn new(coeff: Rational, base: Rational, half_exponent: i32) -> HalfPower {
        assert!(!coeff.is_negative() && base.is_positive());
        HalfPower {
            coeff,
            base,
            half_exponent,
        }
    }

    pub fn scaled(&self, factor: &Rational) -> HalfPower {
        HalfPower::new(&self.coeff * factor, self.base.clone(), self.half_exponent)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * to_f64(&self.base).powf(self.half_exponent as f64 / 2.0)
    }

    pub fn exact(&self) -> Option<Rational> {
        if self.half_exponent % 2 != 0 {
            return None;
        }
        Some(&self.coeff * self.base.pow(self.half_exponent / 2))
    }

    /// Exact comparison with a non-negative rational, squaring both sides
    /// when the exponent is odd.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        assert!(!x.is_negative());
        if let Some(v) = self.exact() {
            return v.cmp(x);
        }
        let lhs = &self.coeff * &self.coeff * self.base.pow(self.half_exponent);
        lhs.cmp(&(x * x))
    }

    /// `true` when `x <= self`.
    pub fn bounds(&self, x: &Rational) -> bool {
        self.cmp_rational(x) != Ordering::Less
    }
}

/// JSON view of a [`HalfPower`]: exact parts plus a float approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonHalfPower {
    pub coefficient: JsonRational,
    pub base: JsonRational,
    pub half_exponent: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<JsonRational>,
    pub approx: f64,
}

impl From<&HalfPower> for JsonHalfPower {
    fn from(h: &HalfPower) -> Self {
        JsonHalfPower {
            coefficient: (&h.coeff).into(),
            base: (&h.base).into(),
            half_exponent: h.half_exponent,
            exact: h.exact().as_ref().map(JsonRational::from),
            approx: h.to_f64(),
        }
    }
}

/// JSON view of a [`RootValue`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonRootValue {
    pub num: String,
    pub den: String,
    pub root: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<JsonRational>,
    pub approx: f64,
}

impl From<&RootValue> for JsonRootValue {
    fn from(v: &RootValue) -> Self {
        JsonRootValue {
            num: v.num.to_string(),
            den: v.den.to_string(),
            root: v.root,
            exact: v.exact().as_ref().map(JsonRational::from),
            approx: v.to_f64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::one(); i + 1];
            for k in 1..i {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_matches_pascal() {
        let rows = pascal(70);
        for (n, row) in rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, k as u64), v, "C({n},{k})");
            }
            assert!(binomial(n as u64, n as u64 + 1).is_zero());
        }
        assert_eq!(binomial(20, 10), ubig(184756));
    }

    #[test]
    fn binomial_ext_zero_outside_range() {
        assert!(binomial_ext(-1, 0).is_zero());
        assert!(binomial_ext(3, -1).is_zero());
        assert_eq!(binomial_ext(0, 0), ubig(1));
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), ratio(3, 1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }

    #[test]
    fn root_value_exactness() {
        assert_eq!(RootValue::new(3, 6, 1).exact(), Some(ratio(1, 2)));
        assert_eq!(RootValue::new(1, 16, 2).exact(), Some(ratio(1, 4)));
        assert_eq!(RootValue::new(1, 15, 2).exact(), None);
        assert!(RootValue::new(3, 6, 1) > RootValue::new(1, 6, 2));
        assert!(RootValue::new(5, 15, 1) > RootValue::new(1, 15, 2));
    }

    #[test]
    fn root_value_rational_brackets() {
        let v = RootValue::new(1, 15, 2); // ~0.2582
        let up = v.rational_upper(1000);
        assert_eq!(up, ratio(259, 1000));
        assert_eq!(v.rational_lower(1000), Some(ratio(258, 1000)));
        let exact = RootValue::new(1, 4, 2);
        assert_eq!(exact.rational_upper(10), ratio(1, 2));
        assert_eq!(exact.rational_lower(10), Some(ratio(4, 10)));
        assert_eq!(exact.cmp_rational(&ratio(1, 2)), Ordering::Equal);
    }

    #[test]
    fn half_power_odd_exponent_compares_by_squaring() {
        // 3 * 2^(-1/2) ~ 2.1213
        let h = HalfPower::new(ratio(3, 1), ratio(2, 1), -1);
        assert!(h.exact().is_none());
        assert!(h.bounds(&ratio(212, 100)));
        assert!(!h.bounds(&ratio(213, 100)));
        let even = HalfPower::new(ratio(3, 1), ratio(4, 1), -2);
        assert_eq!(even.exact(), Some(ratio(3, 4)));
    }

    #[test]
    fn rational_json_round_trip() {
        let r = ratio(-7, 3);
        let text = serde_json::to_string(&JsonRational::from(&r)).unwrap();
        assert_eq!(text, r#"{"num":"-7","den":"3"}"#);
        let back: JsonRational = serde_json::from_str(&text).unwrap();
        assert_eq!(Rational::try_from(&back).unwrap(), r);
    }
}
