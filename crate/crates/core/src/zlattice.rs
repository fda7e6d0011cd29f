//! Exact integer/rational lattice routines shared by the triangulation
//! validator and the move checker.
//!
//! All ranks and spans here are taken modulo the tetrahedral sublattice
//! spanned by the Δ_j = (..,1,1,1,..) vectors: the quotient map sends each
//! (a,b,c) block to (a-c, b-c).  That is the lattice in which the edge
//! rows of a triangulation have rank N - r.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::qtorus::ExponentVector;

/// Quotient by the tetrahedral sublattice: (a,b,c) -> (a-c, b-c) per block.
pub fn mod_delta(v: &ExponentVector) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(2 * v.n_tets());
    for j in 0..v.n_tets() {
        let (a, b, c) = v.triple(j);
        out.push(BigInt::from(a - c));
        out.push(BigInt::from(b - c));
    }
    out
}

/// Rank over the rationals of a set of integer vectors (fraction-free
/// elimination on exact big integers).
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| !r.iter().all(Zero::is_zero)).cloned().collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot - &f * p;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank of the rows modulo the Δ-sublattice.
pub fn rank_mod_delta(rows: &[ExponentVector]) -> usize {
    let reduced: Vec<Vec<BigInt>> = rows.iter().map(mod_delta).collect();
    rank(&reduced)
}

/// First lexicographic maximal independent subset (independence mod Δ):
/// scan in order, keep each row that grows the rank.
pub fn greedy_independent(rows: &[ExponentVector], target: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == target {
            break;
        }
        basis.push(mod_delta(row));
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Integer echelon basis of the Z-span of the given vectors, built by
/// Euclidean row combinations (the span is preserved at every step).
pub struct ZSpan {
    /// pivot rows, each with its pivot column; triangular by construction
    pivots: Vec<(usize, Vec<BigInt>)>,
}

impl ZSpan {
    pub fn new(gens: &[Vec<BigInt>]) -> Self {
        let mut work: Vec<Vec<BigInt>> =
            gens.iter().filter(|g| !g.iter().all(Zero::is_zero)).cloned().collect();
        let cols = work.first().map_or(0, Vec::len);
        let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
        for col in 0..cols {
            loop {
                let mut nz: Vec<usize> =
                    (0..work.len()).filter(|&i| !work[i][col].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                // Euclidean step: reduce everything by the smallest entry
                nz.sort_by_key(|&i| work[i][col].abs());
                let i0 = nz[0];
                let head = work[i0].clone();
                for &i in &nz[1..] {
                    let f = &work[i][col] / &head[col];
                    for k in 0..cols {
                        work[i][k] = &work[i][k] - &f * &head[k];
                    }
                }
                work.retain(|r| !r.iter().all(Zero::is_zero));
            }
            if let Some(i) = (0..work.len()).find(|&i| !work[i][col].is_zero()) {
                let row = work.remove(i);
                pivots.push((col, row));
            }
        }
        ZSpan { pivots }
    }

    /// Is `v` an integer combination of the generators?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (col, row) in &self.pivots {
            if v[*col].is_zero() {
                continue;
            }
            if (&v[*col] % &row[*col]).is_zero() {
                let f = &v[*col] / &row[*col];
                for k in 0..v.len() {
                    v[k] = &v[k] - &f * &row[k];
                }
            } else {
                return false;
            }
        }
        v.iter().all(Zero::is_zero)
    }
}
