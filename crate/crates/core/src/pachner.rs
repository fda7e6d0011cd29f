//! Exponent-lattice realizations of the 3-2 and 2-0 moves.
//!
//! A move descriptor names two validated triangulations and how their
//! tetrahedra correspond.  For a 3-2 move the two source tetrahedra (z, w)
//! map into the three target tetrahedra (x, y, v) by
//!
//!   Z  -> V''X'    Z'  -> X''Y'    Z''  -> Y''V'
//!   W  -> X''V'    W'  -> V''Y'    W''  -> Y''X'
//!
//! realized as exponent addition into the named slots; a 2-0 move copies
//! exponents across the fixed correspondence and inserts zero blocks.
//! Both maps preserve the skew pairing ω, so Weyl monomials transport to
//! Weyl monomials with no q-correction.
//!
//! Building a map validates two things: ω-preservation on every pair of
//! source generators, and (for 3-2) that the edge lattices correspond
//! modulo the tetrahedral sublattice - each source edge row must land in
//! the integer span of the target edge rows, and the target rows must be
//! recovered from the transported rows together with the new central
//! edge.  The lattice check is what catches a descriptor whose target
//! tetrahedra are listed in the wrong order: every block permutation of a
//! valid map still preserves ω, but only the correct matchings keep the
//! edge lattices aligned.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::indexer::{index_element, IndexError, RelationCheck, SummationOptions};
use crate::qtorus::{omega, ExponentVector, TorusElement, TorusError};
use crate::triangulation::{Triangulation, ValidationError};
use crate::zlattice::{mod_delta, ZSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    ThreeTwo,
    TwoZero,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::ThreeTwo => write!(f, "3-2"),
            MoveKind::TwoZero => write!(f, "2-0"),
        }
    }
}

#[derive(Debug)]
pub enum MoveError {
    BadDescriptor(String),
    SymplecticNotPreserved { left: String, right: String, got: i64, expected: i64 },
    EdgeLatticeMismatch { description: String },
    Validation(ValidationError),
    Io(String),
    LengthMismatch { len: usize, expected: usize },
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::BadDescriptor(msg) => write!(f, "BadDescriptor: {msg}"),
            MoveError::SymplecticNotPreserved { left, right, got, expected } => write!(
                f,
                "SymplecticNotPreserved: omega(phi {left}, phi {right}) = {got}, expected {expected}"
            ),
            MoveError::EdgeLatticeMismatch { description } => {
                write!(f, "EdgeLatticeMismatch: {description}")
            }
            MoveError::Validation(e) => write!(f, "{e}"),
            MoveError::Io(msg) => write!(f, "IoError: {msg}"),
            MoveError::LengthMismatch { len, expected } => {
                write!(f, "LengthMismatch: element over length {len}, expected {expected}")
            }
        }
    }
}

impl std::error::Error for MoveError {}

impl From<ValidationError> for MoveError {
    fn from(e: ValidationError) -> Self {
        MoveError::Validation(e)
    }
}

impl From<TorusError> for MoveError {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::LengthMismatch { left, right } => {
                MoveError::LengthMismatch { len: left, expected: right }
            }
            other => MoveError::BadDescriptor(other.to_string()),
        }
    }
}

#[derive(Deserialize)]
struct MoveFile {
    kind: String,
    source: String,
    target: String,
    #[serde(default)]
    removed_tets: Vec<usize>,
    inserted_tets: Vec<usize>,
    #[serde(default)]
    fixed_map: Vec<(usize, usize)>,
}

/// A 3-2 or 2-0 correspondence between two validated triangulations.
#[derive(Debug)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub source: Triangulation,
    pub target: Triangulation,
    /// For 3-2: the two source tetrahedra (z, w).  Empty for 2-0.
    pub removed_tets: Vec<usize>,
    /// For 3-2: the three target tetrahedra (x, y, v).  For 2-0: the two
    /// inserted target tetrahedra.
    pub inserted_tets: Vec<usize>,
    /// Correspondence of all remaining tetrahedra (source, target).
    pub fixed_map: Vec<(usize, usize)>,
}

impl MoveDescriptor {
    /// Load a move file; `source`/`target` paths resolve relative to it.
    pub fn from_file(path: &Path) -> Result<Self, MoveError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MoveError::Io(format!("{}: {e}", path.display())))?;
        let file: MoveFile =
            serde_json::from_str(&text).map_err(|e| MoveError::BadDescriptor(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let load = |rel: &str| -> Result<Triangulation, MoveError> {
            let p = base.join(rel);
            let text = std::fs::read_to_string(&p)
                .map_err(|e| MoveError::Io(format!("{}: {e}", p.display())))?;
            Ok(Triangulation::load_and_validate(&text)?)
        };
        let kind = match file.kind.as_str() {
            "3-2" => MoveKind::ThreeTwo,
            "2-0" => MoveKind::TwoZero,
            other => return Err(MoveError::BadDescriptor(format!("unknown move kind {other:?}"))),
        };
        Ok(MoveDescriptor {
            kind,
            source: load(&file.source)?,
            target: load(&file.target)?,
            removed_tets: file.removed_tets,
            inserted_tets: file.inserted_tets,
            fixed_map: file.fixed_map,
        })
    }

    fn check_shape(&self) -> Result<(), MoveError> {
        let (n_removed, n_inserted, delta) = match self.kind {
            MoveKind::ThreeTwo => (2usize, 3usize, 1i64),
            MoveKind::TwoZero => (0, 2, 2),
        };
        if self.removed_tets.len() != n_removed || self.inserted_tets.len() != n_inserted {
            return Err(MoveError::BadDescriptor(format!(
                "a {} move removes {n_removed} and inserts {n_inserted} tetrahedra",
                self.kind
            )));
        }
        if self.target.n_tets as i64 - self.source.n_tets as i64 != delta {
            return Err(MoveError::BadDescriptor(format!(
                "a {} move grows the tetrahedron count by {delta}",
                self.kind
            )));
        }
        if self.fixed_map.len() != self.source.n_tets - n_removed {
            return Err(MoveError::BadDescriptor(
                "fixed_map must cover every remaining source tetrahedron".into(),
            ));
        }
        let mut src_seen: Vec<usize> = self.removed_tets.clone();
        let mut trg_seen: Vec<usize> = self.inserted_tets.clone();
        for &(s, t) in &self.fixed_map {
            src_seen.push(s);
            trg_seen.push(t);
        }
        src_seen.sort_unstable();
        trg_seen.sort_unstable();
        let src_ok = src_seen == (0..self.source.n_tets).collect::<Vec<_>>();
        let trg_ok = trg_seen == (0..self.target.n_tets).collect::<Vec<_>>();
        if !src_ok || !trg_ok {
            return Err(MoveError::BadDescriptor(
                "tetrahedron indices must partition both triangulations".into(),
            ));
        }
        Ok(())
    }
}

/// Linear map on exponent lattices: image of each source generator.
#[derive(Debug, Clone)]
pub struct MoveMap {
    n_src: usize,
    n_trg: usize,
    images: Vec<ExponentVector>,
}

impl MoveMap {
    pub fn source_len(&self) -> usize {
        3 * self.n_src
    }

    pub fn target_len(&self) -> usize {
        3 * self.n_trg
    }

    /// Transport one exponent vector.
    pub fn apply_vector(&self, v: &ExponentVector) -> Result<ExponentVector, MoveError> {
        if v.len() != 3 * self.n_src {
            return Err(MoveError::LengthMismatch { len: v.len(), expected: 3 * self.n_src });
        }
        let mut out = ExponentVector::zeros(self.n_trg);
        for (i, img) in self.images.iter().enumerate() {
            let c = v.as_slice()[i];
            if c != 0 {
                out = out.add(&img.scale(c));
            }
        }
        Ok(out)
    }
}

/// Build and validate the exponent-lattice map of a move descriptor.
pub fn build_move_map(desc: &MoveDescriptor) -> Result<MoveMap, MoveError> {
    desc.check_shape()?;
    let n_src = desc.source.n_tets;
    let n_trg = desc.target.n_tets;
    let mut images = vec![ExponentVector::zeros(n_trg); 3 * n_src];

    for &(s, t) in &desc.fixed_map {
        for slot in 0..3 {
            images[3 * s + slot] = ExponentVector::unit(n_trg, t, slot);
        }
    }

    if desc.kind == MoveKind::ThreeTwo {
        let (z, w) = (desc.removed_tets[0], desc.removed_tets[1]);
        let (x, y, v) = (desc.inserted_tets[0], desc.inserted_tets[1], desc.inserted_tets[2]);
        let unit = |tet: usize, slot: usize| ExponentVector::unit(n_trg, tet, slot);
        // (b, c) slots are the primed and double-primed generators
        images[3 * z] = unit(v, 2).add(&unit(x, 1)); // Z -> V''X'
        images[3 * z + 1] = unit(x, 2).add(&unit(y, 1)); // Z' -> X''Y'
        images[3 * z + 2] = unit(y, 2).add(&unit(v, 1)); // Z'' -> Y''V'
        images[3 * w] = unit(x, 2).add(&unit(v, 1)); // W -> X''V'
        images[3 * w + 1] = unit(v, 2).add(&unit(y, 1)); // W' -> V''Y'
        images[3 * w + 2] = unit(y, 2).add(&unit(x, 1)); // W'' -> Y''X'
    }

    let map = MoveMap { n_src, n_trg, images };

    // omega preservation on every pair of source generators
    let gen_name = |i: usize| {
        let tet = i / 3;
        let primes = ["", "'", "''"][i % 3];
        format!("Z{primes}[{tet}]")
    };
    for i in 0..3 * n_src {
        let ui = ExponentVector::unit(n_src, i / 3, i % 3);
        let li = map.apply_vector(&ui)?;
        for j in 0..3 * n_src {
            let uj = ExponentVector::unit(n_src, j / 3, j % 3);
            let lj = map.apply_vector(&uj)?;
            let expected = omega(&ui, &uj).unwrap();
            let got = omega(&li, &lj).unwrap();
            if got != expected {
                return Err(MoveError::SymplecticNotPreserved {
                    left: gen_name(i),
                    right: gen_name(j),
                    got,
                    expected,
                });
            }
        }
    }

    if desc.kind == MoveKind::ThreeTwo {
        check_edge_lattices(desc, &map)?;
    }

    Ok(map)
}

/// The new central edge of a 3-2 target: one Z-quad in each inserted slot.
fn central_edge(desc: &MoveDescriptor) -> ExponentVector {
    let mut v = ExponentVector::zeros(desc.target.n_tets);
    for &t in &desc.inserted_tets {
        v = v.add(&ExponentVector::unit(desc.target.n_tets, t, 0));
    }
    v
}

/// Both inclusions of the edge-lattice correspondence, modulo the
/// tetrahedral sublattice.
fn check_edge_lattices(desc: &MoveDescriptor, map: &MoveMap) -> Result<(), MoveError> {
    let target_span = ZSpan::new(
        &desc.target.edge_rows.iter().map(mod_delta).collect::<Vec<_>>(),
    );
    let mut transported = Vec::new();
    for (i, e) in desc.source.edge_rows.iter().enumerate() {
        let img = map.apply_vector(e)?;
        if !target_span.contains(&mod_delta(&img)) {
            return Err(MoveError::EdgeLatticeMismatch {
                description: format!(
                    "image of source edge {i} is not an integer combination of target edges"
                ),
            });
        }
        transported.push(mod_delta(&img));
    }
    transported.push(mod_delta(&central_edge(desc)));
    let back_span = ZSpan::new(&transported);
    for (i, r) in desc.target.edge_rows.iter().enumerate() {
        if !back_span.contains(&mod_delta(r)) {
            return Err(MoveError::EdgeLatticeMismatch {
                description: format!(
                    "target edge {i} is not recovered from the transported edges and the central edge"
                ),
            });
        }
    }
    Ok(())
}

/// Termwise exponent transport with unchanged coefficients.
pub fn apply_move(map: &MoveMap, u: &TorusElement) -> Result<TorusElement, MoveError> {
    if u.n_tets() != map.n_src {
        return Err(MoveError::LengthMismatch { len: 3 * u.n_tets(), expected: 3 * map.n_src });
    }
    let mut out = TorusElement::zero(map.n_trg);
    for (k, c) in u.terms() {
        let img = crate::qtorus::weyl_with(c.clone(), map.apply_vector(k)?);
        out = out.add(&img)?;
    }
    Ok(out)
}

/// Report of index-compatibility checks across a move.
#[derive(Debug, Clone)]
pub struct MoveReport {
    pub checks: Vec<RelationCheck>,
}

impl MoveReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// For each sample u over the source: index_source(u) must equal
/// index_target(apply_move(u)) to the requested order.
pub fn verify_index_compatibility(
    desc: &MoveDescriptor,
    map: &MoveMap,
    samples: &[(String, TorusElement)],
    opts: &SummationOptions,
) -> Result<MoveReport, IndexError> {
    let mut checks = Vec::new();
    for (label, u) in samples {
        let src = index_element(&desc.source, u, opts)?.series;
        let moved = apply_move(map, u).map_err(|e| match e {
            MoveError::LengthMismatch { len, expected } => {
                IndexError::LengthMismatch { len, expected }
            }
            other => IndexError::NonIntegralCharge { description: other.to_string() },
        })?;
        let trg = index_element(&desc.target, &moved, opts)?.series;
        let pass = src.eq_to_order(&trg, opts.order).unwrap_or(false);
        let first_difference =
            if pass { None } else { src.first_difference(&trg, opts.order) };
        checks.push(RelationCheck { label: label.clone(), pass, first_difference });
    }
    Ok(MoveReport { checks })
}
