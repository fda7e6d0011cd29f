//! The even quantum torus attached to a triangulation.
//!
//! Each tetrahedron contributes generators Z, Z', Z'' whose exponents are
//! recorded as one (a, b, c) block of an integer vector of length 3N.  The
//! Weyl-ordered monomials [Z^S] form a basis; the product is
//!
//!   [Z^k][Z^l] = q^{ω(k,l)/2} [Z^{k+l}]
//!
//! with ω the block-diagonal skew pairing of the quad lattice.  ω(k,l) is
//! an integer, so the factor lives at half-exponent ω(k,l) and stays in
//! Z[q^{±1/2}].

use std::collections::BTreeMap;
use std::fmt;

use crate::{HalfExp, QSeries};

/// Errors from quantum-torus operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusError {
    /// Two exponent vectors (or an element and a vector) live over
    /// different tetrahedron counts.
    LengthMismatch { left: usize, right: usize },
    /// The chirality involution substitutes q^{1/2} -> q^{-1/2}, which is
    /// exact only on Laurent-polynomial coefficients.
    InfinitePrecisionRequired,
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::LengthMismatch { left, right } => {
                write!(f, "LengthMismatch: exponent vectors of length {left} vs {right}")
            }
            TorusError::InfinitePrecisionRequired => write!(
                f,
                "InfinitePrecisionRequired: chirality needs exact Laurent-polynomial coefficients"
            ),
        }
    }
}

impl std::error::Error for TorusError {}

/// Integer vector in Z^{3N}, grouped (a_j, b_j, c_j) per tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(entries.len().is_multiple_of(3), "exponent vector length must be 3N");
        ExponentVector(entries)
    }

    pub fn zeros(n_tets: usize) -> Self {
        ExponentVector(vec![0; 3 * n_tets])
    }

    /// Unit vector for one generator: `slot` 0, 1, 2 selects Z, Z', Z''.
    pub fn unit(n_tets: usize, tet: usize, slot: usize) -> Self {
        let mut v = vec![0; 3 * n_tets];
        v[3 * tet + slot] = 1;
        ExponentVector(v)
    }

    /// The tetrahedral vector Δ_j = (0,..,1,1,1,..,0).
    pub fn tet_solution(n_tets: usize, tet: usize) -> Self {
        let mut v = vec![0; 3 * n_tets];
        v[3 * tet] = 1;
        v[3 * tet + 1] = 1;
        v[3 * tet + 2] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n_tets(&self) -> usize {
        self.0.len() / 3
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// The (a_j, b_j, c_j) block of tetrahedron `j`.
    pub fn triple(&self, j: usize) -> (i64, i64, i64) {
        (self.0[3 * j], self.0[3 * j + 1], self.0[3 * j + 2])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| k * a).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Entrywise divisibility by `d`, returning the quotient if exact.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        if self.0.iter().all(|x| x % d == 0) {
            Some(ExponentVector(self.0.iter().map(|x| x / d).collect()))
        } else {
            None
        }
    }

    /// The chirality exponent map: per tetrahedron (a,b,c) -> (-c,-b,-a).
    pub fn iota(&self) -> Self {
        let mut out = Vec::with_capacity(self.0.len());
        for j in 0..self.n_tets() {
            let (a, b, c) = self.triple(j);
            out.extend_from_slice(&[-c, -b, -a]);
        }
        ExponentVector(out)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector::new(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// The skew pairing ω(x,y) = x^t D y with D the block matrix
/// ((0,1,-1),(-1,0,1),(1,-1,0)) per tetrahedron.
pub fn omega(x: &ExponentVector, y: &ExponentVector) -> Result<i64, TorusError> {
    if x.len() != y.len() {
        return Err(TorusError::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut acc = 0;
    for j in 0..x.n_tets() {
        let (a, b, c) = x.triple(j);
        let (p, r, s) = y.triple(j);
        acc += (a * r - b * p) + (b * s - c * r) + (c * p - a * s);
    }
    Ok(acc)
}

/// The double-arc quadratic form δ(x) = Σ_j (a_j b_j + b_j c_j + c_j a_j).
pub fn delta_form(x: &ExponentVector) -> i64 {
    (0..x.n_tets())
        .map(|j| {
            let (a, b, c) = x.triple(j);
            a * b + b * c + c * a
        })
        .sum()
}

/// Twice the bilinear variant of δ, i.e. x^t D^sym y; this doubled value is
/// always an integer while δ(x,y) itself can be a half-integer.
pub fn delta_bilinear_twice(x: &ExponentVector, y: &ExponentVector) -> Result<i64, TorusError> {
    if x.len() != y.len() {
        return Err(TorusError::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut acc = 0;
    for j in 0..x.n_tets() {
        let (a, b, c) = x.triple(j);
        let (p, r, s) = y.triple(j);
        acc += a * (r + s) + b * (p + s) + c * (p + r);
    }
    Ok(acc)
}

/// Finite formal sum of Weyl-ordered monomials with `QSeries` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElement {
    n_tets: usize,
    terms: BTreeMap<ExponentVector, QSeries>,
}

impl TorusElement {
    /// The zero element over `n_tets` tetrahedra.
    pub fn zero(n_tets: usize) -> Self {
        TorusElement { n_tets, terms: BTreeMap::new() }
    }

    /// The multiplicative unit [Z^0].
    pub fn unit(n_tets: usize) -> Self {
        weyl(ExponentVector::zeros(n_tets))
    }

    pub fn n_tets(&self) -> usize {
        self.n_tets
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &QSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: &ExponentVector) -> QSeries {
        self.terms.get(k).cloned().unwrap_or_else(QSeries::exact_zero)
    }

    fn insert(&mut self, k: ExponentVector, c: QSeries) {
        if c.is_zero() && c.is_exact() {
            return;
        }
        match self.terms.remove(&k) {
            Some(prev) => {
                let sum = prev.add(&c);
                if !(sum.is_zero() && sum.is_exact()) {
                    self.terms.insert(k, sum);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        if self.n_tets != other.n_tets {
            return Err(TorusError::LengthMismatch {
                left: 3 * self.n_tets,
                right: 3 * other.n_tets,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        Ok(out)
    }

    /// Multiply every coefficient by the scalar series `c`.
    pub fn scale_series(&self, c: &QSeries) -> Self {
        let mut out = TorusElement::zero(self.n_tets);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.mul(c));
        }
        out
    }

    /// Bilinear extension of [Z^k][Z^l] = q^{ω(k,l)/2} [Z^{k+l}].
    pub fn mul(&self, other: &Self) -> Result<Self, TorusError> {
        if self.n_tets != other.n_tets {
            return Err(TorusError::LengthMismatch {
                left: 3 * self.n_tets,
                right: 3 * other.n_tets,
            });
        }
        let mut out = TorusElement::zero(self.n_tets);
        for (k, ck) in &self.terms {
            for (l, cl) in &other.terms {
                let w = omega(k, l)?;
                out.insert(k.add(l), ck.mul(cl).shift(w));
            }
        }
        Ok(out)
    }

    /// The chirality involution: coefficients undergo q^{1/2} -> q^{-1/2}
    /// and exponent blocks map by (a,b,c) -> (-c,-b,-a).  Reverses ω.
    pub fn iota(&self) -> Result<Self, TorusError> {
        let mut out = TorusElement::zero(self.n_tets);
        for (k, c) in &self.terms {
            if !c.is_exact() {
                return Err(TorusError::InfinitePrecisionRequired);
            }
            let mut flipped: Vec<(HalfExp, crate::Coeff)> =
                c.iter_terms().map(|(h, x)| (-h, x.clone())).collect();
            flipped.sort_by_key(|&(h, _)| h);
            let lo = flipped.first().map(|&(h, _)| h).unwrap_or(0);
            let hi = flipped.last().map(|&(h, _)| h).unwrap_or(0);
            let mut coeffs = vec![crate::Coeff::from(0); (hi - lo + 1) as usize];
            for (h, x) in flipped {
                coeffs[(h - lo) as usize] = x;
            }
            out.insert(k.iota(), QSeries::exact(lo, coeffs));
        }
        Ok(out)
    }

    /// Truncate every coefficient at the given absolute order.
    pub fn truncate(&self, order: HalfExp) -> Self {
        let mut out = TorusElement::zero(self.n_tets);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.truncate(order));
        }
        out
    }
}

/// The single-term Weyl monomial [Z^k] with coefficient 1.
pub fn weyl(k: ExponentVector) -> TorusElement {
    weyl_with(QSeries::one_exact(), k)
}

/// c · [Z^k].
pub fn weyl_with(c: QSeries, k: ExponentVector) -> TorusElement {
    let mut e = TorusElement::zero(k.n_tets());
    if !(c.is_zero() && c.is_exact()) {
        e.terms.insert(k, c);
    }
    e
}

/// The image of a peripheral skein element with gcd multiplicity d: the
/// Chebyshev polynomial T_d applied to m_γ + m_γ^{-1}, which collapses to
/// [Z^{dγ}] + [Z^{-dγ}] (and 2 for d = 0).
pub fn peripheral_skein_image(gamma: &ExponentVector, d: u32) -> TorusElement {
    if d == 0 {
        return weyl_with(
            QSeries::exact_monomial(2.into(), 0),
            ExponentVector::zeros(gamma.n_tets()),
        );
    }
    let k = gamma.scale(d as i64);
    weyl(k.clone()).add(&weyl(k.neg())).expect("equal lengths")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn omega_block_entries() {
        // one tetrahedron: omega(a-unit, b-unit) = 1, omega(c-unit, a-unit) = 1
        let a = ExponentVector::unit(1, 0, 0);
        let b = ExponentVector::unit(1, 0, 1);
        let c = ExponentVector::unit(1, 0, 2);
        assert_eq!(omega(&a, &b).unwrap(), 1);
        assert_eq!(omega(&c, &a).unwrap(), 1);
        assert_eq!(omega(&b, &c).unwrap(), 1);
        for x in [&a, &b, &c] {
            assert_eq!(omega(x, x).unwrap(), 0);
        }
        assert_eq!(
            omega(&a, &ev(&[0, 0, 0, 1, 0, 0])),
            Err(TorusError::LengthMismatch { left: 3, right: 6 })
        );
    }

    #[test]
    fn omega_antisymmetric_biadditive() {
        let x = ev(&[1, -2, 3, 0, 1, 2]);
        let y = ev(&[2, 0, -1, 1, 1, -3]);
        let z = ev(&[0, 4, 1, -2, 0, 5]);
        assert_eq!(omega(&x, &y).unwrap(), -omega(&y, &x).unwrap());
        assert_eq!(
            omega(&x.add(&z), &y).unwrap(),
            omega(&x, &y).unwrap() + omega(&z, &y).unwrap()
        );
    }

    #[test]
    fn delta_cases() {
        assert_eq!(delta_form(&ev(&[1, 1, 1])), 3);
        assert_eq!(delta_form(&ev(&[2, 1, 0])), 2);
        // additivity over tetrahedra when one block vanishes
        assert_eq!(delta_form(&ev(&[2, 1, 0, 0, 0, 0])), 2);
        let x = ev(&[1, 2, 3]);
        let y = ev(&[0, -1, 4]);
        assert_eq!(
            delta_bilinear_twice(&x, &y).unwrap(),
            delta_bilinear_twice(&y, &x).unwrap()
        );
        // doubled bilinear form polarizes the quadratic one
        assert_eq!(
            delta_bilinear_twice(&x, &y).unwrap(),
            delta_form(&x.add(&y)) - delta_form(&x) - delta_form(&y)
        );
    }

    #[test]
    fn weyl_product_rules() {
        // Z'' Z = q^{1/2} [Z Z'']
        let z = weyl(ExponentVector::unit(1, 0, 0));
        let zpp = weyl(ExponentVector::unit(1, 0, 2));
        let prod = zpp.mul(&z).unwrap();
        let k = ev(&[1, 0, 1]);
        assert_eq!(prod.coeff(&k), QSeries::exact_monomial(1.into(), 1));
        // u * unit = u
        let u = weyl_with(QSeries::exact_monomial(3.into(), -2), ev(&[2, -1, 0]));
        assert_eq!(u.mul(&TorusElement::unit(1)).unwrap(), u);
        // weyl(k) * weyl(-k) = unit
        let w = weyl(ev(&[2, 5, -3]));
        let winv = weyl(ev(&[-2, -5, 3]));
        assert_eq!(w.mul(&winv).unwrap(), TorusElement::unit(1));
    }

    #[test]
    fn mul_associative_on_monomials() {
        let u = weyl(ev(&[1, 0, -2, 3, 1, 0]));
        let v = weyl(ev(&[0, 2, 1, -1, 0, 2]));
        let w = weyl(ev(&[2, -1, 0, 0, 1, 1]));
        let l = u.mul(&v).unwrap().mul(&w).unwrap();
        let r = u.mul(&v.mul(&w).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn iota_involution_and_omega_reversal() {
        let u = ev(&[1, -2, 0, 3, 1, -1]);
        let v = ev(&[0, 2, -3, 1, 0, 2]);
        assert_eq!(u.iota().iota(), u);
        assert_eq!(omega(&u.iota(), &v.iota()).unwrap(), -omega(&u, &v).unwrap());
        // on elements
        let e = weyl_with(QSeries::exact_monomial((-1).into(), -1), u.clone());
        assert_eq!(e.iota().unwrap().iota().unwrap(), e);
        assert_eq!(TorusElement::unit(2).iota().unwrap(), TorusElement::unit(2));
        // truncated coefficients are refused
        let t = weyl_with(QSeries::monomial(1.into(), 0, 8), u);
        assert_eq!(t.iota(), Err(TorusError::InfinitePrecisionRequired));
    }

    #[test]
    fn peripheral_chebyshev() {
        let gamma = ev(&[1, 0, 0, -1, 0, 0]);
        let d1 = peripheral_skein_image(&gamma, 1);
        assert_eq!(d1.num_terms(), 2);
        assert_eq!(d1.coeff(&gamma), QSeries::one_exact());
        assert_eq!(d1.coeff(&gamma.neg()), QSeries::one_exact());
        let d2 = peripheral_skein_image(&gamma, 2);
        assert_eq!(d2.coeff(&gamma.scale(2)), QSeries::one_exact());
        // T_2(x) = x^2 - 2 on x = m + m^{-1}
        let sq = d1.mul(&d1).unwrap();
        let two = weyl_with(
            QSeries::exact_monomial(2.into(), 0),
            ExponentVector::zeros(2),
        );
        let x2m2 = sq.add(&two.scale_series(&QSeries::exact_monomial((-1).into(), 0))).unwrap();
        assert_eq!(x2m2, d2);
        let d0 = peripheral_skein_image(&gamma, 0);
        assert_eq!(d0.coeff(&ExponentVector::zeros(2)), QSeries::exact_monomial(2.into(), 0));
    }
}
