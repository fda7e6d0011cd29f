//! Neumann-Zagier gluing data: ingestion, validation, and the lattice
//! services used by the index summation.
//!
//! A triangulation is stored purely through its quad-coordinate rows: one
//! edge row per edge (nonnegative, each quad column summing to 2 across
//! edges), and a meridian/longitude row per cusp, all in even Z-units.
//! The validator checks the symplectic relations: edges pair to zero with
//! everything, peripheral rows of distinct cusps are orthogonal, and
//! ω(L_k, M_k) = 2.
//!
//! Edge-row rank and independent-edge selection are taken modulo the
//! tetrahedral sublattice (the Δ_j vectors), which is where the edge rows
//! span a rank-(N-r) lattice.

use std::fmt;

use serde::Deserialize;

use crate::qtorus::{omega, ExponentVector};
use crate::tetindex::{j_degree, Triple};
use crate::zlattice;
use crate::HalfExp;

/// Errors raised while loading or validating a triangulation file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    ParseError(String),
    NegativeQuadCount { edge: usize, column: usize, value: i64 },
    ColumnSumViolation { column: usize, sum: i64 },
    SymplecticViolation { pair: String, value: i64, expected: i64 },
    RankDeficient { rank: usize, expected: usize },
    LengthMismatch { row: String, len: usize, expected: usize },
    BadIndependentSet { reason: String },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::ParseError(msg) => write!(f, "ParseError: {msg}"),
            ValidationError::NegativeQuadCount { edge, column, value } => write!(
                f,
                "NegativeQuadCount: edge row {edge} has {value} in column {column}"
            ),
            ValidationError::ColumnSumViolation { column, sum } => write!(
                f,
                "ColumnSumViolation: quad column {column} sums to {sum}, expected 2"
            ),
            ValidationError::SymplecticViolation { pair, value, expected } => write!(
                f,
                "SymplecticViolation: omega{pair} = {value}, expected {expected}"
            ),
            ValidationError::RankDeficient { rank, expected } => write!(
                f,
                "RankDeficient: edge rows span rank {rank} mod tetrahedra, expected {expected}"
            ),
            ValidationError::LengthMismatch { row, len, expected } => write!(
                f,
                "LengthMismatch: {row} has length {len}, expected {expected}"
            ),
            ValidationError::BadIndependentSet { reason } => {
                write!(f, "BadIndependentSet: {reason}")
            }
        }
    }
}

impl std::error::Error for ValidationError {}

#[derive(Deserialize)]
struct TriangulationFile {
    name: String,
    num_tetrahedra: usize,
    num_cusps: usize,
    edge_rows: Vec<Vec<i64>>,
    meridian_rows: Vec<Vec<i64>>,
    longitude_rows: Vec<Vec<i64>>,
    #[serde(default)]
    independent_edges: Option<Vec<usize>>,
    #[serde(default)]
    one_efficient: bool,
}

/// A validated Neumann-Zagier gluing datum.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub name: String,
    pub n_tets: usize,
    pub n_cusps: usize,
    pub edge_rows: Vec<ExponentVector>,
    pub meridian_rows: Vec<ExponentVector>,
    pub longitude_rows: Vec<ExponentVector>,
    pub independent_edges: Vec<usize>,
    /// User-asserted; 1-efficiency is what makes the summand degree grow
    /// along rays, and deciding it is out of scope here.
    pub one_efficient: bool,
}

impl Triangulation {
    /// Parse and validate a triangulation JSON document.
    pub fn load_and_validate(json: &str) -> Result<Self, ValidationError> {
        let file: TriangulationFile =
            serde_json::from_str(json).map_err(|e| ValidationError::ParseError(e.to_string()))?;
        Self::from_parts(
            file.name,
            file.num_tetrahedra,
            file.num_cusps,
            file.edge_rows,
            file.meridian_rows,
            file.longitude_rows,
            file.independent_edges,
            file.one_efficient,
        )
    }

    /// Build from raw rows, running the full validation.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: String,
        n_tets: usize,
        n_cusps: usize,
        edge_rows: Vec<Vec<i64>>,
        meridian_rows: Vec<Vec<i64>>,
        longitude_rows: Vec<Vec<i64>>,
        independent_edges: Option<Vec<usize>>,
        one_efficient: bool,
    ) -> Result<Self, ValidationError> {
        let width = 3 * n_tets;
        let check_len = |row: &Vec<i64>, what: String| {
            if row.len() != width {
                Err(ValidationError::LengthMismatch { row: what, len: row.len(), expected: width })
            } else {
                Ok(())
            }
        };
        if edge_rows.len() != n_tets {
            return Err(ValidationError::ParseError(format!(
                "expected {n_tets} edge rows (one per edge), found {}",
                edge_rows.len()
            )));
        }
        if meridian_rows.len() != n_cusps || longitude_rows.len() != n_cusps {
            return Err(ValidationError::ParseError(format!(
                "expected {n_cusps} meridian and longitude rows, found {} and {}",
                meridian_rows.len(),
                longitude_rows.len()
            )));
        }
        for (i, row) in edge_rows.iter().enumerate() {
            check_len(row, format!("edge row {i}"))?;
        }
        for (k, row) in meridian_rows.iter().enumerate() {
            check_len(row, format!("meridian row {k}"))?;
        }
        for (k, row) in longitude_rows.iter().enumerate() {
            check_len(row, format!("longitude row {k}"))?;
        }

        for (i, row) in edge_rows.iter().enumerate() {
            if let Some((col, &v)) = row.iter().enumerate().find(|(_, &v)| v < 0) {
                return Err(ValidationError::NegativeQuadCount { edge: i, column: col, value: v });
            }
        }

        let edges: Vec<ExponentVector> =
            edge_rows.into_iter().map(ExponentVector::new).collect();
        let mers: Vec<ExponentVector> =
            meridian_rows.into_iter().map(ExponentVector::new).collect();
        let lons: Vec<ExponentVector> =
            longitude_rows.into_iter().map(ExponentVector::new).collect();

        // symplectic relations, checked before column sums so that a
        // corrupted edge row is reported by the pairing it breaks
        let pair_zero = |label: String, v: i64| -> Result<(), ValidationError> {
            if v != 0 {
                Err(ValidationError::SymplecticViolation { pair: label, value: v, expected: 0 })
            } else {
                Ok(())
            }
        };
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                pair_zero(format!("(E{i},E{j})"), omega(&edges[i], &edges[j]).unwrap())?;
            }
            for (k, m) in mers.iter().enumerate() {
                pair_zero(format!("(E{i},M{k})"), omega(&edges[i], m).unwrap())?;
            }
            for (k, l) in lons.iter().enumerate() {
                pair_zero(format!("(E{i},L{k})"), omega(&edges[i], l).unwrap())?;
            }
        }
        for k in 0..n_cusps {
            let w = omega(&lons[k], &mers[k]).unwrap();
            if w != 2 {
                return Err(ValidationError::SymplecticViolation {
                    pair: format!("(L{k},M{k})"),
                    value: w,
                    expected: 2,
                });
            }
            for l in 0..n_cusps {
                if l == k {
                    continue;
                }
                pair_zero(format!("(M{k},M{l})"), omega(&mers[k], &mers[l]).unwrap())?;
                pair_zero(format!("(M{k},L{l})"), omega(&mers[k], &lons[l]).unwrap())?;
                pair_zero(format!("(L{k},L{l})"), omega(&lons[k], &lons[l]).unwrap())?;
            }
        }

        // each quad column counts two edge incidences
        for col in 0..width {
            let sum: i64 = edges.iter().map(|e| e[col]).sum();
            if sum != 2 {
                return Err(ValidationError::ColumnSumViolation { column: col, sum });
            }
        }

        let expected_rank = n_tets - n_cusps;
        let full_rank = zlattice::rank_mod_delta(&edges);
        if full_rank != expected_rank {
            return Err(ValidationError::RankDeficient { rank: full_rank, expected: expected_rank });
        }

        let independent_edges = match independent_edges {
            Some(idx) => {
                if idx.len() != expected_rank {
                    return Err(ValidationError::BadIndependentSet {
                        reason: format!(
                            "{} indices supplied, expected {expected_rank}",
                            idx.len()
                        ),
                    });
                }
                if idx.iter().any(|&i| i >= edges.len()) {
                    return Err(ValidationError::BadIndependentSet {
                        reason: "edge index out of range".into(),
                    });
                }
                let subset: Vec<ExponentVector> =
                    idx.iter().map(|&i| edges[i].clone()).collect();
                if zlattice::rank_mod_delta(&subset) != expected_rank {
                    return Err(ValidationError::BadIndependentSet {
                        reason: "supplied edges are dependent modulo tetrahedra".into(),
                    });
                }
                idx
            }
            None => {
                let idx = zlattice::greedy_independent(&edges, expected_rank);
                if idx.len() != expected_rank {
                    return Err(ValidationError::RankDeficient {
                        rank: idx.len(),
                        expected: expected_rank,
                    });
                }
                idx
            }
        };

        Ok(Triangulation {
            name,
            n_tets,
            n_cusps,
            edge_rows: edges,
            meridian_rows: mers,
            longitude_rows: lons,
            independent_edges,
            one_efficient,
        })
    }

    /// Build without validation.  For tests and expert surgery only; the
    /// index machinery assumes validated data.
    pub fn from_parts_unchecked(
        name: String,
        n_tets: usize,
        n_cusps: usize,
        edge_rows: Vec<Vec<i64>>,
        meridian_rows: Vec<Vec<i64>>,
        longitude_rows: Vec<Vec<i64>>,
        independent_edges: Vec<usize>,
    ) -> Self {
        Triangulation {
            name,
            n_tets,
            n_cusps,
            edge_rows: edge_rows.into_iter().map(ExponentVector::new).collect(),
            meridian_rows: meridian_rows.into_iter().map(ExponentVector::new).collect(),
            longitude_rows: longitude_rows.into_iter().map(ExponentVector::new).collect(),
            independent_edges,
            one_efficient: true,
        }
    }

    /// Number of independent edge coefficients (the summation dimension).
    pub fn lattice_dim(&self) -> usize {
        self.independent_edges.len()
    }

    /// S(k) = Σ k_i E_{indep(i)}.
    pub fn edge_combination(&self, k: &[i64]) -> Result<ExponentVector, ValidationError> {
        if k.len() != self.independent_edges.len() {
            return Err(ValidationError::LengthMismatch {
                row: "edge coefficients".into(),
                len: k.len(),
                expected: self.independent_edges.len(),
            });
        }
        let mut s = ExponentVector::zeros(self.n_tets);
        for (ki, &idx) in k.iter().zip(&self.independent_edges) {
            s = s.add(&self.edge_rows[idx].scale(*ki));
        }
        Ok(s)
    }

    /// Leading half-exponent of the summand at lattice point `k` for the
    /// monomial [Z^{S0}]: the prefactor contributes -χ(S(k)) + ω(S0,S(k))
    /// half-units and each tetrahedron its J-degree.
    pub fn summand_degree(&self, s0: &ExponentVector, k: &[i64]) -> HalfExp {
        let sk = self.edge_combination(k).expect("coefficient length");
        let ksum: i64 = k.iter().sum();
        let arg = sk.sub(s0);
        let mut d = 2 * ksum + omega(s0, &sk).expect("validated lengths");
        for j in 0..self.n_tets {
            let (a, b, c) = arg.triple(j);
            d += j_degree(Triple::new(a, b, c));
        }
        d
    }
}

/// χ(S(k)) = -2 Σ k_i for a combination of edge solutions.
pub fn chi_of_combination(k: &[i64]) -> i64 {
    -2 * k.iter().sum::<i64>()
}

/// Translate each (a,b,c) block by a tetrahedral vector so every block has
/// minimum 0; returns the normalized surface and the subtracted shifts.
pub fn normalize_surface(s: &ExponentVector) -> (ExponentVector, Vec<i64>) {
    let mut out = Vec::with_capacity(s.len());
    let mut shifts = Vec::with_capacity(s.n_tets());
    for j in 0..s.n_tets() {
        let (a, b, c) = s.triple(j);
        let m = a.min(b).min(c);
        out.extend_from_slice(&[a - m, b - m, c - m]);
        shifts.push(m);
    }
    (ExponentVector::new(out), shifts)
}
