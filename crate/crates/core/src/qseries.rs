//! Truncated Laurent series in q^{1/2} over an exact integer scalar.
//!
//! Exponents are counted in half-units: the integer `h` stands for
//! q^{h/2}, so q has half-exponent 2 and q^{-1/2} has half-exponent -1.
//! Every series carries a truncation order: coefficients are guaranteed
//! correct for all half-exponents strictly below `order`.  A series with
//! `order == None` is an exact Laurent polynomial (all omitted
//! coefficients are exactly zero); the distinction matters for the
//! chirality substitution q^{1/2} -> q^{-1/2}, which is only exact on
//! polynomials.
//!
//! Operations compute the tightest safe output order, e.g. the order of a
//! product a*b is min(order(a) + min_exp(b), order(b) + min_exp(a)).

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};

use crate::HalfExp;

/// Bounds on the coefficient scalar: any exact signed ring embedding the
/// integers.  Instantiated with `BigInt` throughout the pipeline; `i64`
/// works for small experiments.
pub trait Scalar: Clone + Eq + Signed + From<i64> + fmt::Display {}
impl<T: Clone + Eq + Signed + From<i64> + fmt::Display> Scalar for T {}

/// Errors from series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// `invert_unit` needs a leading coefficient of +-1 so the inverse has
    /// integer coefficients.
    LeadingCoefficientNotUnit,
    /// A comparison or operation was requested at an order beyond what the
    /// inputs can guarantee.
    InsufficientOrder { requested: HalfExp, available: HalfExp },
    /// Inverting an exact multi-term polynomial would produce an infinite
    /// series; truncate the input first.
    UnboundedInverse,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::LeadingCoefficientNotUnit => {
                write!(f, "LeadingCoefficientNotUnit: leading coefficient must be +1 or -1")
            }
            SeriesError::InsufficientOrder { requested, available } => write!(
                f,
                "InsufficientOrder: requested order q^({requested}/2) but only q^({available}/2) is available"
            ),
            SeriesError::UnboundedInverse => {
                write!(f, "UnboundedInverse: exact multi-term polynomial has no polynomial inverse")
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// A truncated Laurent series in q^{1/2}.
///
/// Stored as a dense coefficient window starting at `min_exp`; the first
/// and last stored coefficients are nonzero (the zero series stores
/// nothing).  `order == None` marks an exact Laurent polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series<C> {
    min_exp: HalfExp,
    coeffs: Vec<C>,
    order: Option<HalfExp>,
}

fn omin(a: Option<HalfExp>, b: Option<HalfExp>) -> Option<HalfExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn oadd(a: Option<HalfExp>, k: HalfExp) -> Option<HalfExp> {
    a.map(|x| x + k)
}

impl<C: Scalar> Series<C> {
    fn normalized(min_exp: HalfExp, mut coeffs: Vec<C>, order: Option<HalfExp>) -> Self {
        let mut min_exp = min_exp;
        if let Some(o) = order {
            let keep = (o - min_exp).max(0) as usize;
            coeffs.truncate(keep.min(coeffs.len()));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            min_exp += lead_zeros as HalfExp;
        }
        if coeffs.is_empty() {
            min_exp = 0;
        }
        Series { min_exp, coeffs, order }
    }

    /// Build a series from a coefficient window; anything at or beyond
    /// `order` is dropped.
    pub fn new(min_exp: HalfExp, coeffs: Vec<C>, order: HalfExp) -> Self {
        Self::normalized(min_exp, coeffs, Some(order))
    }

    /// An exact Laurent polynomial from a coefficient window.
    pub fn exact(min_exp: HalfExp, coeffs: Vec<C>) -> Self {
        Self::normalized(min_exp, coeffs, None)
    }

    /// The zero series known below `order`.
    pub fn zero(order: HalfExp) -> Self {
        Series { min_exp: 0, coeffs: Vec::new(), order: Some(order) }
    }

    /// The exact zero polynomial.
    pub fn exact_zero() -> Self {
        Series { min_exp: 0, coeffs: Vec::new(), order: None }
    }

    /// c * q^{e/2} truncated at `order`.
    pub fn monomial(c: C, e: HalfExp, order: HalfExp) -> Self {
        Self::normalized(e, vec![c], Some(order))
    }

    /// c * q^{e/2} as an exact polynomial.
    pub fn exact_monomial(c: C, e: HalfExp) -> Self {
        Self::normalized(e, vec![c], None)
    }

    /// The exact constant 1.
    pub fn one_exact() -> Self {
        Self::exact_monomial(C::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when this value is an exact Laurent polynomial.
    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Truncation order, `None` for exact polynomials.
    pub fn order(&self) -> Option<HalfExp> {
        self.order
    }

    /// Leading half-exponent, `None` for a series with no known nonzero term.
    pub fn min_exp(&self) -> Option<HalfExp> {
        if self.coeffs.is_empty() { None } else { Some(self.min_exp) }
    }

    /// Half-exponent below which the value is known to vanish: the leading
    /// exponent, or the order for a (truncated) zero.
    fn effective_min(&self) -> Option<HalfExp> {
        if self.coeffs.is_empty() { self.order } else { Some(self.min_exp) }
    }

    /// Coefficient at half-exponent `h`; `None` when `h` is at or beyond
    /// the truncation order.
    pub fn coeff(&self, h: HalfExp) -> Option<C> {
        if let Some(o) = self.order {
            if h >= o {
                return None;
            }
        }
        let i = h - self.min_exp;
        if i < 0 || i as usize >= self.coeffs.len() {
            Some(C::zero())
        } else {
            Some(self.coeffs[i as usize].clone())
        }
    }

    /// (half-exponent, coefficient) of the first stored term.
    pub fn leading(&self) -> Option<(HalfExp, &C)> {
        self.coeffs.first().map(|c| (self.min_exp, c))
    }

    /// Iterate stored (half-exponent, coefficient) pairs in increasing
    /// exponent, skipping zeros.
    pub fn iter_terms(&self) -> impl Iterator<Item = (HalfExp, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as HalfExp, c))
    }

    /// Drop information at and beyond `order`.
    pub fn truncate(&self, order: HalfExp) -> Self {
        Self::normalized(self.min_exp, self.coeffs.clone(), omin(self.order, Some(order)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = omin(self.order, other.order);
        if self.is_zero() {
            return Self::normalized(other.min_exp, other.coeffs.clone(), order);
        }
        if other.is_zero() {
            return Self::normalized(self.min_exp, self.coeffs.clone(), order);
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = (self.min_exp + self.coeffs.len() as HalfExp)
            .max(other.min_exp + other.coeffs.len() as HalfExp);
        let mut out = vec![C::zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.min_exp - lo) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut out[(other.min_exp - lo) as usize + i];
            *slot = slot.clone() + c.clone();
        }
        Self::normalized(lo, out, order)
    }

    pub fn neg(&self) -> Self {
        Series {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product with the tightest safe output order.
    pub fn mul(&self, other: &Self) -> Self {
        // An exact zero annihilates regardless of the other factor's order.
        if self.is_zero() && self.order.is_none() {
            return Self::exact_zero();
        }
        if other.is_zero() && other.order.is_none() {
            return Self::exact_zero();
        }
        let order = omin(
            self.effective_min().map_or(other.order, |m| oadd(other.order, m)),
            other.effective_min().map_or(self.order, |m| oadd(self.order, m)),
        );
        if self.is_zero() || other.is_zero() {
            return match order {
                Some(o) => Self::zero(o),
                None => Self::exact_zero(),
            };
        }
        let lo = self.min_exp + other.min_exp;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let n = match order {
            Some(o) => n.min((o - lo).max(0) as usize),
            None => n,
        };
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= n {
                    break;
                }
                if !b.is_zero() {
                    out[k] = out[k].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::normalized(lo, out, order)
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self { min_exp: 0, coeffs: Vec::new(), order: self.order };
        }
        Series {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            order: self.order,
        }
    }

    /// Multiply by q^{k/2}.
    pub fn shift(&self, k: HalfExp) -> Self {
        Series {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            order: oadd(self.order, k),
        }
    }

    /// Multiplicative inverse of a series whose leading coefficient is +-1.
    ///
    /// The inverse of a truncated series carries the same relative
    /// precision.  Exact monomials invert exactly; inverting an exact
    /// multi-term polynomial is refused since the result is infinite.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        let (m, lead) = match self.leading() {
            Some(x) => x,
            None => return Err(SeriesError::LeadingCoefficientNotUnit),
        };
        if !(lead.clone() == C::one() || lead.clone() == -C::one()) {
            return Err(SeriesError::LeadingCoefficientNotUnit);
        }
        let lead = lead.clone();
        match self.order {
            None => {
                if self.coeffs.len() == 1 {
                    Ok(Self::exact_monomial(lead, -m))
                } else {
                    Err(SeriesError::UnboundedInverse)
                }
            }
            Some(o) => {
                let p = (o - m) as usize;
                // a = lead * q^{m/2} (1 + u); invert the unit part by the
                // standard recurrence, exact in integers since lead = +-1.
                let a: Vec<C> = (0..p)
                    .map(|i| {
                        self.coeffs.get(i).cloned().unwrap_or_else(C::zero) * lead.clone()
                    })
                    .collect();
                let mut b = vec![C::zero(); p];
                b[0] = C::one();
                for k in 1..p {
                    let mut acc = C::zero();
                    for i in 1..=k {
                        if !a[i].is_zero() && !b[k - i].is_zero() {
                            acc = acc + a[i].clone() * b[k - i].clone();
                        }
                    }
                    b[k] = -acc;
                }
                for x in b.iter_mut() {
                    *x = x.clone() * lead.clone();
                }
                Ok(Self::normalized(-m, b, Some(-m + p as HalfExp)))
            }
        }
    }

    /// Do all coefficients at half-exponents strictly below `order` agree?
    pub fn eq_to_order(&self, other: &Self, order: HalfExp) -> Result<bool, SeriesError> {
        for s in [self, other] {
            if let Some(o) = s.order {
                if o < order {
                    return Err(SeriesError::InsufficientOrder { requested: order, available: o });
                }
            }
        }
        let lo = self
            .effective_min()
            .unwrap_or(order)
            .min(other.effective_min().unwrap_or(order));
        for h in lo..order {
            let a = self.coeff(h).unwrap_or_else(C::zero);
            let b = other.coeff(h).unwrap_or_else(C::zero);
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First half-exponent below `order` where the two series differ.
    pub fn first_difference(&self, other: &Self, order: HalfExp) -> Option<HalfExp> {
        let lo = self
            .effective_min()
            .unwrap_or(order)
            .min(other.effective_min().unwrap_or(order));
        (lo..order).find(|&h| {
            self.coeff(h).unwrap_or_else(C::zero) != other.coeff(h).unwrap_or_else(C::zero)
        })
    }
}

impl<C: Scalar + ToPrimitive> Series<C> {
    /// Evaluate at a numeric point, given x = q^{1/2}.
    pub fn eval_sqrt_q(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (h, c) in self.iter_terms() {
            acc += c.to_f64().unwrap_or(f64::NAN) * x.powi(h as i32);
        }
        acc
    }
}

/// The prefactor (-q^{1/2})^s as (sign, half-exponent).
pub fn neg_half_power(s: i64) -> (i64, HalfExp) {
    (if s.rem_euclid(2) == 0 { 1 } else { -1 }, s)
}

impl<C: Scalar> fmt::Display for Series<C> {
    /// Comma-separated `c*q^(p/2)` terms in increasing exponent with a
    /// trailing `+ O(q^(order/2))` marker for truncated series.  The exact
    /// zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.iter_terms().map(|(h, c)| format!("{c}*q^({h}/2)")).collect();
        if let Some(o) = self.order {
            parts.push(format!("+ O(q^({o}/2))"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(", "))
    }
}

impl<C: Scalar + FromStr> Series<C> {
    /// Parse the `Display` format back, bit-exactly.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::exact_zero());
        }
        let mut terms: Vec<(HalfExp, C)> = Vec::new();
        let mut order: Option<HalfExp> = None;
        for part in s.split(", ") {
            let part = part.trim();
            if let Some(rest) = part.strip_prefix("+ O(q^(") {
                let inner = rest.strip_suffix("/2))").ok_or_else(|| format!("bad marker {part:?}"))?;
                order = Some(inner.parse::<HalfExp>().map_err(|e| e.to_string())?);
            } else {
                let (c, p) = part
                    .split_once("*q^(")
                    .ok_or_else(|| format!("bad term {part:?}"))?;
                let p = p.strip_suffix("/2)").ok_or_else(|| format!("bad term {part:?}"))?;
                let c: C = c.parse().map_err(|_| format!("bad coefficient {c:?}"))?;
                terms.push((p.parse::<HalfExp>().map_err(|e| e.to_string())?, c));
            }
        }
        let lo = terms.iter().map(|&(h, _)| h).min().unwrap_or(0);
        let hi = terms.iter().map(|&(h, _)| h).max().unwrap_or(0);
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (h, c) in terms {
            coeffs[(h - lo) as usize] = c;
        }
        Ok(Self::normalized(lo, coeffs, order))
    }
}

impl<C: Scalar> std::ops::Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: Self) -> Series<C> {
        Series::add(self, rhs)
    }
}

impl<C: Scalar> std::ops::Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: Self) -> Series<C> {
        Series::sub(self, rhs)
    }
}

impl<C: Scalar> std::ops::Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: Self) -> Series<C> {
        Series::mul(self, rhs)
    }
}

impl<C: Scalar> std::ops::Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::neg(self)
    }
}
