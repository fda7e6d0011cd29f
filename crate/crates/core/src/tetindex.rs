//! The tetrahedron index and its symmetric form.
//!
//! The building block of the 3d-index is
//!
//!   I_Δ(m,e) = Σ_{n ≥ e₋} (-1)^n q^{n(n+1)/2 - (n + e/2)m} / ((q;q)_n (q;q)_{n+e})
//!
//! with e₋ = max(-e, 0) and (q;q)_n = Π_{i=1..n}(1 - q^i).  In half-units
//! the leading exponent of the n-th term is n(n+1) - (2n+e)m, a convex
//! quadratic in n, so the loop stops once that exponent clears the target
//! order and n has passed the parabola vertex (n >= |m|).
//!
//! The symmetric form J_Δ(a,b,c) = (-q^{1/2})^{-b} I_Δ(b-c, a-b) is
//! invariant under all six permutations of (a,b,c); its q^{1/2}-degree is
//! δ(a-m, b-m, c-m) - m with m = min{a,b,c}.
//!
//! Results are memoized per (m, e, order) since the lattice summation
//! re-requests identical charges heavily.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::{HalfExp, QSeries};

/// Magnetic and electric charges of one tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Charges {
    pub m: i64,
    pub e: i64,
}

/// Arguments of the symmetric form J_Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Triple {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Triple { a, b, c }
    }
}

/// Errors from the floating-point evaluator.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericError {
    /// The partial sums did not meet the tolerance within 10^4 terms.
    NonConvergent { terms: u32 },
    /// q must lie in (0,1) ∪ (1,∞).
    InvalidQ { q: f64 },
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::NonConvergent { terms } => {
                write!(f, "NonConvergent: no convergence after {terms} terms")
            }
            NumericError::InvalidQ { q } => write!(f, "InvalidQ: q = {q} not in (0,1) or (1,inf)"),
        }
    }
}

impl std::error::Error for NumericError {}

/// (q;q)_n = Π_{i=1..n} (1 - q^i), truncated to `order` half-units.
///
/// Factors with 2i >= order are 1 modulo the truncation, so the product
/// stabilizes after at most order/2 factors regardless of n.
pub fn q_pochhammer(n: u32, order: HalfExp) -> QSeries {
    let mut p = QSeries::monomial(1.into(), 0, order);
    for i in 1..=(n as i64) {
        if 2 * i >= order {
            break;
        }
        let factor = QSeries::exact(0, {
            let mut v = vec![crate::Coeff::from(1)];
            v.extend(std::iter::repeat_with(|| crate::Coeff::from(0)).take((2 * i - 1) as usize));
            v.push(crate::Coeff::from(-1));
            v
        });
        p = p.mul(&factor);
    }
    p.truncate(order)
}

fn poch_inverse(n: i64, order: HalfExp) -> QSeries {
    debug_assert!(n >= 0);
    // Only factors with 2i < order survive the truncation.
    let n_eff = n.min(((order - 1) / 2).max(0));
    static CACHE: OnceLock<Mutex<HashMap<(i64, HalfExp), QSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(n_eff, order)) {
        return hit.clone();
    }
    let inv = q_pochhammer(n_eff as u32, order)
        .invert_unit()
        .expect("(q;q)_n has leading coefficient 1");
    cache.lock().unwrap().insert((n_eff, order), inv.clone());
    inv
}

/// I_Δ(m,e) truncated to `order` half-units.
type SeriesCache = Mutex<HashMap<(i64, i64, HalfExp), QSeries>>;

pub fn tet_index(ch: Charges, order: HalfExp) -> QSeries {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(ch.m, ch.e, order)) {
        return hit.clone();
    }

    let Charges { m, e } = ch;
    let mut total = QSeries::zero(order);
    let mut n = (-e).max(0);
    loop {
        // leading half-exponent of the n-th summand
        let h = n * (n + 1) - (2 * n + e) * m;
        if h >= order && n >= m.abs() {
            break;
        }
        if h < order {
            let rel = order - h;
            let mut term = poch_inverse(n, rel).mul(&poch_inverse(n + e, rel));
            term = term.shift(h);
            if n % 2 != 0 {
                term = term.neg();
            }
            total = total.add(&term.truncate(order));
        }
        n += 1;
    }

    cache.lock().unwrap().insert((ch.m, ch.e, order), total.clone());
    total
}

/// The q^{1/2}-degree of J_Δ(a,b,c), in half-units: δ of the normalized
/// triple minus the minimum entry.
pub fn j_degree(t: Triple) -> HalfExp {
    let m = t.a.min(t.b).min(t.c);
    let (a, b, c) = (t.a - m, t.b - m, t.c - m);
    (a * b + b * c + c * a) - m
}

/// J_Δ(a,b,c) = (-q^{1/2})^{-b} I_Δ(b-c, a-b), truncated to `order`.
pub fn j_index(t: Triple, order: HalfExp) -> QSeries {
    let inner = tet_index(Charges { m: t.b - t.c, e: t.a - t.b }, order + t.b);
    let shifted = inner.shift(-t.b);
    if t.b.rem_euclid(2) == 1 {
        shifted.neg()
    } else {
        shifted
    }
}

/// Partial sums of the defining q-hypergeometric sum at a real q, run until
/// the absolute summand stays below `tol` for 3 consecutive n past the
/// parabola vertex.
///
/// Terms are updated by their ratio in log space, so neither the quantum
/// factorials nor the q-powers are ever formed on their own.
pub fn tet_index_numeric(ch: Charges, q: f64, tol: f64) -> Result<f64, NumericError> {
    if q <= 0.0 || q == 1.0 || !q.is_finite() {
        return Err(NumericError::InvalidQ { q });
    }
    let Charges { m, e } = ch;
    let n0 = (-e).max(0);
    let lnq = q.ln();

    // ln|1 - q^i| and the sign of 1 - q^i, for i >= 1
    let ln_one_minus = |i: i64| -> (f64, f64) {
        if q < 1.0 {
            ((-q.powi(i as i32)).ln_1p(), 1.0)
        } else {
            (i as f64 * lnq + (-q.powi(-(i as i32))).ln_1p(), -1.0)
        }
    };

    let mut ln = (0.5 * (n0 * (n0 + 1)) as f64 - (n0 as f64 + 0.5 * e as f64) * m as f64) * lnq;
    let mut sign = if n0 % 2 == 0 { 1.0 } else { -1.0 };
    for i in 1..=n0 {
        let (l, s) = ln_one_minus(i);
        ln -= l;
        sign *= s;
    }
    for i in 1..=(n0 + e) {
        let (l, s) = ln_one_minus(i);
        ln -= l;
        sign *= s;
    }

    let mut total = sign * ln.exp();
    let mut streak = 0u32;
    let mut n = n0;
    loop {
        n += 1;
        if n - n0 > 10_000 {
            return Err(NumericError::NonConvergent { terms: 10_000 });
        }
        let (l1, s1) = ln_one_minus(n);
        let (l2, s2) = ln_one_minus(n + e);
        ln += (n - m) as f64 * lnq - l1 - l2;
        sign *= -s1 * s2;
        let term = sign * ln.exp();
        total += term;
        if term.abs() < tol && n > m.abs() {
            streak += 1;
            if streak >= 3 {
                return Ok(total);
            }
        } else {
            streak = 0;
        }
    }
}

/// Generic pruned sum over k of q^k times a product of J factors whose
/// triples depend on k.  Terms whose degree clears `order` contribute
/// nothing; the scan widens from k = 0 and stops after three consecutive
/// fully-pruned k on each side, mirroring the convergence mechanism of the
/// lattice summation at the single-tetrahedron level.
fn pruned_k_sum(order: HalfExp, triples_at: impl Fn(i64) -> Vec<Triple>) -> QSeries {
    let mut total = QSeries::zero(order);
    let mut add_term = |k: i64| -> bool {
        let triples = triples_at(k);
        let degs: Vec<HalfExp> = triples.iter().map(|&t| j_degree(t)).collect();
        let d = 2 * k + degs.iter().sum::<HalfExp>();
        if d >= order {
            return false;
        }
        let mut term = QSeries::exact_monomial(1.into(), 2 * k);
        for (t, deg) in triples.iter().zip(&degs) {
            term = term.mul(&j_index(*t, order - (d - deg)));
        }
        total = total.add(&term.truncate(order));
        true
    };
    add_term(0);
    for sign in [1i64, -1] {
        let mut misses = 0;
        let mut k = sign;
        while misses < 3 {
            if add_term(k) {
                misses = 0;
            } else {
                misses += 1;
            }
            k += sign;
        }
    }
    total
}

/// The pentagon combination Σ_k q^k J(k,a+f,b+d) J(k,a+e,c+d) J(k,b+e,c+f),
/// which collapses to J(a,b,c) J(d,e,f).
pub fn pentagon_sum(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64, order: HalfExp) -> QSeries {
    pruned_k_sum(order, |k| {
        vec![
            Triple::new(k, a + f, b + d),
            Triple::new(k, a + e, c + d),
            Triple::new(k, b + e, c + f),
        ]
    })
}

/// The quadratic combination Σ_k q^k J(a+k,c,d) J(b+k,c,d), which collapses
/// to q^{-a} δ_{a,b}.
pub fn quadratic_sum(a: i64, b: i64, c: i64, d: i64, order: HalfExp) -> QSeries {
    pruned_k_sum(order, |k| vec![Triple::new(a + k, c, d), Triple::new(b + k, c, d)])
}

/// Numerically stable J_Δ(a,b,c) at a real q.
///
/// Reflects through the duality J(a,b,c)(q) = J(-a,-b,-c)(1/q) when q > 1
/// and then picks the S₃ representative with b <= c, for which the term
/// exponents of the defining sum are monotone (no interior blow-up of the
/// alternating partial sums).
pub fn j_numeric(t: Triple, q: f64, tol: f64) -> Result<f64, NumericError> {
    if q <= 0.0 || q == 1.0 || !q.is_finite() {
        return Err(NumericError::InvalidQ { q });
    }
    let (t, q) = if q > 1.0 {
        (Triple::new(-t.a, -t.b, -t.c), 1.0 / q)
    } else {
        (t, q)
    };
    let mut v = [t.a, t.b, t.c];
    v.sort();
    let (a, b, c) = (v[2], v[0], v[1]);
    let sign = if b.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let x = q.sqrt();
    Ok(sign * x.powi(-b as i32) * tet_index_numeric(Charges { m: b - c, e: a - b }, q, tol)?)
}
