//! The index map on Weyl monomials and torus elements.
//!
//! For a validated triangulation the index of [Z^{S0}] is the lattice sum
//!
//!   Σ_k (-q^{1/2})^{-χ(S(k))} q^{ω(S0,S(k))/2} Π_j J_Δ(j-th triple of -S0 + S(k))
//!
//! over integer combinations S(k) of the independent edge rows.  The walk
//! proceeds by L∞ shells of increasing radius; a lattice point contributes
//! only when its summand degree is below the target order, and the walk
//! stops after a window of consecutive non-contributing shells.  That
//! termination is a heuristic standing in for the polyhedral-cone bound
//! that guarantees finitely many contributing points on 1-efficient data;
//! if it fails to fire within the radius cap the error is reported, never
//! silently truncated.
//!
//! Each J factor is requested at exactly the order still needed once the
//! degrees of the prefactor and the other factors are committed.

use std::fmt;

use crate::qseries::SeriesError;
use crate::qtorus::{omega, ExponentVector, TorusElement, TorusError};
use crate::tetindex::{j_degree, j_index, j_numeric, NumericError, Triple};
use crate::triangulation::Triangulation;
use crate::{HalfExp, QSeries};

/// Termination policy for the shell walk.
#[derive(Debug, Clone, Copy)]
pub struct SummationOptions {
    /// Target truncation order in half-units.
    pub order: HalfExp,
    /// Consecutive empty L∞ shells required to stop.
    pub shell_window: u32,
    /// Hard cap on the shell radius.
    pub max_radius: u32,
}

impl SummationOptions {
    pub fn with_order(order: HalfExp) -> Self {
        SummationOptions { order, shell_window: 3, max_radius: 200 }
    }

    fn validate(&self) -> Result<(), IndexError> {
        if self.shell_window < 1 || self.max_radius < 1 {
            return Err(IndexError::BadOptions);
        }
        Ok(())
    }
}

/// How a summation ended.
#[derive(Debug, Clone)]
pub struct SummationInfo {
    /// Largest shell radius visited.
    pub radius: u32,
    /// Number of lattice points that contributed below the order.
    pub contributing: usize,
    /// Always "heuristic": the empty-shell window, not a cone certificate.
    pub termination: &'static str,
}

/// A computed index series together with its summation report.
#[derive(Debug, Clone)]
pub struct IndexResult {
    pub series: QSeries,
    pub info: SummationInfo,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IndexError {
    /// The empty-shell heuristic did not fire within `max_radius`.
    RadiusExceeded { radius: u32 },
    /// A DGG charge produced a non-integral exponent vector.
    NonIntegralCharge { description: String },
    /// Exponent vector length does not match the triangulation.
    LengthMismatch { len: usize, expected: usize },
    /// A coefficient's truncation order cannot support the target order.
    InsufficientOrder { available: HalfExp, requested: HalfExp },
    /// Cusp index out of range.
    NoSuchCusp { cusp: usize, n_cusps: usize },
    /// shell_window and max_radius must be at least 1.
    BadOptions,
    Numeric(NumericError),
}

impl fmt::Display for IndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexError::RadiusExceeded { radius } => write!(
                f,
                "RadiusExceeded: termination heuristic did not fire within radius {radius}"
            ),
            IndexError::NonIntegralCharge { description } => {
                write!(f, "NonIntegralCharge: {description}")
            }
            IndexError::LengthMismatch { len, expected } => {
                write!(f, "LengthMismatch: exponent vector length {len}, expected {expected}")
            }
            IndexError::InsufficientOrder { available, requested } => write!(
                f,
                "InsufficientOrder: coefficient known to q^({available}/2) but q^({requested}/2) required"
            ),
            IndexError::NoSuchCusp { cusp, n_cusps } => {
                write!(f, "NoSuchCusp: cusp {cusp} of {n_cusps}")
            }
            IndexError::BadOptions => write!(f, "BadOptions: shell_window and max_radius must be >= 1"),
            IndexError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IndexError {}

impl From<NumericError> for IndexError {
    fn from(e: NumericError) -> Self {
        IndexError::Numeric(e)
    }
}

impl From<TorusError> for IndexError {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::LengthMismatch { left, right } => {
                IndexError::LengthMismatch { len: left, expected: right }
            }
            TorusError::InfinitePrecisionRequired => {
                IndexError::InsufficientOrder { available: 0, requested: 0 }
            }
        }
    }
}

/// All k in Z^dim with L∞ norm exactly `radius`.
fn shell(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    if dim == 0 {
        return if radius == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut k = vec![-radius; dim];
    loop {
        if k.iter().map(|x| x.abs()).max().unwrap() == radius {
            out.push(k.clone());
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            k[i] += 1;
            if k[i] > radius {
                k[i] = -radius;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn check_len(tri: &Triangulation, v: &ExponentVector) -> Result<(), IndexError> {
    if v.len() != 3 * tri.n_tets {
        return Err(IndexError::LengthMismatch { len: v.len(), expected: 3 * tri.n_tets });
    }
    Ok(())
}

/// One lattice summand: q^{pref/2} Π_j J_Δ(triple_j), each factor at the
/// tightest order that still fills the target.
fn summand(tri: &Triangulation, s0: &ExponentVector, k: &[i64], order: HalfExp) -> QSeries {
    let sk = tri.edge_combination(k).expect("validated");
    let ksum: i64 = k.iter().sum();
    let pref = 2 * ksum + omega(s0, &sk).expect("validated");
    let arg = sk.sub(s0);
    let degs: Vec<HalfExp> =
        (0..tri.n_tets).map(|j| j_degree(triple_of(&arg, j))).collect();
    let total_deg = pref + degs.iter().sum::<HalfExp>();
    let mut term = QSeries::exact_monomial(1.into(), pref);
    for (j, deg) in degs.iter().enumerate() {
        let oj = order - (total_deg - deg);
        term = term.mul(&j_index(triple_of(&arg, j), oj));
    }
    term
}

fn triple_of(v: &ExponentVector, j: usize) -> Triple {
    let (a, b, c) = v.triple(j);
    Triple::new(a, b, c)
}

/// The index of the Weyl monomial [Z^{S0}].
pub fn index_monomial(
    tri: &Triangulation,
    s0: &ExponentVector,
    opts: &SummationOptions,
) -> Result<IndexResult, IndexError> {
    opts.validate()?;
    check_len(tri, s0)?;
    let dim = tri.lattice_dim();
    let order = opts.order;
    let mut total = QSeries::zero(order);
    let mut empty_run = 0u32;
    let mut contributing = 0usize;
    let mut radius: i64 = 0;
    loop {
        let mut any = false;
        for k in shell(dim, radius) {
            if tri.summand_degree(s0, &k) >= order {
                continue;
            }
            any = true;
            contributing += 1;
            total = total.add(&summand(tri, s0, &k, order).truncate(order));
        }
        if dim == 0 {
            return Ok(IndexResult {
                series: total,
                info: SummationInfo { radius: 0, contributing, termination: "heuristic" },
            });
        }
        if any {
            empty_run = 0;
        } else {
            empty_run += 1;
            if empty_run >= opts.shell_window && radius >= 1 {
                return Ok(IndexResult {
                    series: total,
                    info: SummationInfo {
                        radius: radius as u32,
                        contributing,
                        termination: "heuristic",
                    },
                });
            }
        }
        radius += 1;
        if radius > opts.max_radius as i64 {
            return Err(IndexError::RadiusExceeded { radius: opts.max_radius });
        }
    }
}

/// Linear extension over the Weyl basis: Σ coeff · index of the monomial.
pub fn index_element(
    tri: &Triangulation,
    u: &TorusElement,
    opts: &SummationOptions,
) -> Result<IndexResult, IndexError> {
    opts.validate()?;
    if u.n_tets() != tri.n_tets {
        return Err(IndexError::LengthMismatch { len: 3 * u.n_tets(), expected: 3 * tri.n_tets });
    }
    let order = opts.order;
    let mut total = QSeries::zero(order);
    let mut radius = 0u32;
    let mut contributing = 0usize;
    for (k, coeff) in u.terms() {
        // a truncated zero coefficient is only known to vanish below its
        // order, so it still constrains the claimable output order
        let me = match (coeff.min_exp(), coeff.order()) {
            (Some(m), _) => m,
            (None, Some(o)) => o,
            (None, None) => continue,
        };
        let sub = SummationOptions { order: order - me, ..*opts };
        let r = index_monomial(tri, k, &sub)?;
        let piece = coeff.mul(&r.series);
        if let Some(o) = piece.order() {
            if o < order {
                return Err(IndexError::InsufficientOrder { available: o, requested: order });
            }
        }
        total = total.add(&piece.truncate(order));
        radius = radius.max(r.info.radius);
        contributing += r.info.contributing;
    }
    Ok(IndexResult {
        series: total,
        info: SummationInfo { radius, contributing, termination: "heuristic" },
    })
}

/// The DGG index at charges (m, e) of one cusp: the index of the monomial
/// m_λ^{-2m} m_μ^{2e}, i.e. S0 = -m·L + e·M in even Z-units.  `m_twice`
/// carries 2m so half-integral m is expressible; the combined exponent
/// vector must be integral.
pub fn dgg_index(
    tri: &Triangulation,
    cusp: usize,
    m_twice: i64,
    e: i64,
    opts: &SummationOptions,
) -> Result<IndexResult, IndexError> {
    let s0 = dgg_vector(tri, cusp, m_twice, e)?;
    index_monomial(tri, &s0, opts)
}

/// The exponent vector -m·L + e·M of the DGG charge monomial.
pub fn dgg_vector(
    tri: &Triangulation,
    cusp: usize,
    m_twice: i64,
    e: i64,
) -> Result<ExponentVector, IndexError> {
    if cusp >= tri.n_cusps {
        return Err(IndexError::NoSuchCusp { cusp, n_cusps: tri.n_cusps });
    }
    let doubled = tri.longitude_rows[cusp]
        .scale(-m_twice)
        .add(&tri.meridian_rows[cusp].scale(2 * e));
    doubled.div_exact(2).ok_or_else(|| IndexError::NonIntegralCharge {
        description: format!(
            "m = {m_twice}/2, e = {e} gives a non-integral exponent vector on cusp {cusp}"
        ),
    })
}

/// One relation check: does the recomputed series match the expected one?
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub label: String,
    pub pass: bool,
    pub first_difference: Option<HalfExp>,
}

/// Report of the quotient-relation checks for one monomial.
#[derive(Debug, Clone)]
pub struct QuotientReport {
    pub checks: Vec<RelationCheck>,
}

impl QuotientReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn record(checks: &mut Vec<RelationCheck>, label: String, lhs: &QSeries, rhs: &QSeries, order: HalfExp) {
    let pass = lhs.eq_to_order(rhs, order).unwrap_or(false);
    let first_difference = if pass { None } else { lhs.first_difference(rhs, order) };
    checks.push(RelationCheck { label, pass, first_difference });
}

/// Verify the three families of quotient relations at [Z^{S0}]:
/// every edge monomial acts as q, every central monomial as -q^{1/2}, and
/// the Lagrangian combination Z_j^{-1} + Z_j'' - 1 annihilates the index.
/// The edge family is checked for every edge row, not just the chosen
/// independent subset.
pub fn check_quotient_relations(
    tri: &Triangulation,
    s0: &ExponentVector,
    opts: &SummationOptions,
) -> Result<QuotientReport, IndexError> {
    opts.validate()?;
    check_len(tri, s0)?;
    let order = opts.order;
    let base = index_monomial(tri, s0, opts)?.series;
    let mut checks = Vec::new();

    for (i, e_row) in tri.edge_rows.iter().enumerate() {
        let w = omega(e_row, s0)?;
        let sub = SummationOptions { order: order - w, ..*opts };
        let lhs = index_monomial(tri, &s0.add(e_row), &sub)?.series.shift(w);
        let rhs = base.truncate(order - 2).shift(2);
        record(&mut checks, format!("edge[{i}]"), &lhs, &rhs, order);
    }

    for j in 0..tri.n_tets {
        let dj = ExponentVector::tet_solution(tri.n_tets, j);
        let lhs = index_monomial(tri, &s0.add(&dj), opts)?.series;
        let rhs = base.truncate(order - 1).shift(1).neg();
        record(&mut checks, format!("central[{j}]"), &lhs, &rhs, order);
    }

    for j in 0..tri.n_tets {
        let ua = ExponentVector::unit(tri.n_tets, j, 0);
        let uc = ExponentVector::unit(tri.n_tets, j, 2);
        let wa = -omega(s0, &ua)?;
        let wc = omega(s0, &uc)?;
        let t1 = {
            let sub = SummationOptions { order: order - wa, ..*opts };
            index_monomial(tri, &s0.sub(&ua), &sub)?.series.shift(wa)
        };
        let t2 = {
            let sub = SummationOptions { order: order - wc, ..*opts };
            index_monomial(tri, &s0.add(&uc), &sub)?.series.shift(wc)
        };
        let sum = t1.add(&t2).sub(&base);
        let zero = QSeries::zero(order);
        record(&mut checks, format!("lagrangian[{j}]"), &sum, &zero, order);
    }

    Ok(QuotientReport { checks })
}

/// The edge-sum reformulation: index(u) = Σ_S I_N(E_S · u) with
/// E_S = (-q^{1/2})^{-χ(S)} [Z^{-S}] and I_N([Z^S]) = J(-S).  The torus
/// multiplication supplies the Weyl factors that the direct formula writes
/// as q^{ω(S0,S)/2}; agreement of the two paths is a consistency check on
/// both.
pub fn index_via_edge_sum(
    tri: &Triangulation,
    u: &TorusElement,
    opts: &SummationOptions,
) -> Result<IndexResult, IndexError> {
    opts.validate()?;
    if u.n_tets() != tri.n_tets {
        return Err(IndexError::LengthMismatch { len: 3 * u.n_tets(), expected: 3 * tri.n_tets });
    }
    let dim = tri.lattice_dim();
    let order = opts.order;
    let mut total = QSeries::zero(order);
    let mut empty_run = 0u32;
    let mut contributing = 0usize;
    let mut radius: i64 = 0;
    loop {
        let mut any = false;
        for k in shell(dim, radius) {
            let sk = tri.edge_combination(&k).expect("validated");
            let ksum: i64 = k.iter().sum();
            let e_s = crate::qtorus::weyl_with(
                QSeries::exact_monomial(1.into(), 2 * ksum),
                sk.neg(),
            );
            let prod = e_s.mul(u)?;
            // I_N over the resulting monomials, pruned by degree
            for (expvec, coeff) in prod.terms() {
                let me = match (coeff.min_exp(), coeff.order()) {
                    (Some(m), _) => m,
                    (None, Some(o)) => o,
                    (None, None) => continue,
                };
                let neg = expvec.neg();
                let degs: Vec<HalfExp> =
                    (0..tri.n_tets).map(|j| j_degree(triple_of(&neg, j))).collect();
                let d = me + degs.iter().sum::<HalfExp>();
                if d >= order {
                    continue;
                }
                any = true;
                contributing += 1;
                let mut term = coeff.clone();
                for (j, deg) in degs.iter().enumerate() {
                    let oj = order - (d - deg);
                    term = term.mul(&j_index(triple_of(&neg, j), oj));
                }
                total = total.add(&term.truncate(order));
            }
        }
        if dim == 0 {
            break;
        }
        if any {
            empty_run = 0;
        } else {
            empty_run += 1;
            if empty_run >= opts.shell_window && radius >= 1 {
                break;
            }
        }
        radius += 1;
        if radius > opts.max_radius as i64 {
            return Err(IndexError::RadiusExceeded { radius: opts.max_radius });
        }
    }
    Ok(IndexResult {
        series: total,
        info: SummationInfo {
            radius: radius.max(0) as u32,
            contributing,
            termination: "heuristic",
        },
    })
}

/// Numeric evaluation of the index of [Z^{S0}] at a real q with |q| != 1.
///
/// Shells stop once their contribution stays below `tol` for the window.
/// Each J factor is evaluated by the numerically stable route (duality
/// reflection for q > 1 plus the S₃-normalized representative).
pub fn index_monomial_numeric(
    tri: &Triangulation,
    s0: &ExponentVector,
    q: f64,
    tol: f64,
    opts: &SummationOptions,
) -> Result<f64, IndexError> {
    opts.validate()?;
    check_len(tri, s0)?;
    let dim = tri.lattice_dim();
    let x = q.sqrt();
    let mut total = 0.0;
    let mut empty_run = 0u32;
    let mut radius: i64 = 0;
    loop {
        let mut shell_sum = 0.0;
        for k in shell(dim, radius) {
            let sk = tri.edge_combination(&k).expect("validated");
            let ksum: i64 = k.iter().sum();
            let pref = 2 * ksum + omega(s0, &sk)?;
            let arg = sk.sub(s0);
            let mut t = x.powi(pref as i32);
            for j in 0..tri.n_tets {
                t *= j_numeric(triple_of(&arg, j), q, tol * 1e-2)?;
            }
            shell_sum += t;
        }
        total += shell_sum;
        if dim == 0 {
            return Ok(total);
        }
        if shell_sum.abs() < tol {
            empty_run += 1;
            if empty_run >= opts.shell_window && radius >= 1 {
                return Ok(total);
            }
        } else {
            empty_run = 0;
        }
        radius += 1;
        if radius > opts.max_radius as i64 {
            return Err(IndexError::RadiusExceeded { radius: opts.max_radius });
        }
    }
}

impl From<SeriesError> for IndexError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::InsufficientOrder { requested, available } => {
                IndexError::InsufficientOrder { available, requested }
            }
            _ => IndexError::InsufficientOrder { available: 0, requested: 0 },
        }
    }
}
