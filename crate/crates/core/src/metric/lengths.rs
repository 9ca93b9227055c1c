use std::collections::BTreeMap;

use thiserror::Error;

use crate::gluing::{EdgeId, SideRef, Triangulation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LengthError {
    #[error("edge {} has no length", .0.0)]
    MissingEdge(EdgeId),
    #[error("edge {} has non-positive length {value}", .edge.0)]
    NonPositive { edge: EdgeId, value: f64 },
    #[error("face {} violates the strict triangle inequality: side {} is too long", .face + 1, .side + 1)]
    TriangleInequalityViolated { face: usize, side: u8 },
    #[error("expected {expected} edge lengths, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: side {side} does not exist")]
    UnknownSide { line: usize, side: String },
    #[error("line {line}: conflicting length for edge {}", .edge.0)]
    ConflictingDuplicate { line: usize, edge: EdgeId },
}

/// A point of the edge-length chart: one positive length per quotient edge,
/// strict triangle inequalities on every face.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengths {
    values: Vec<f64>,
}

impl EdgeLengths {
    /// Lengths indexed by edge id; `values.len()` must equal the edge count.
    pub fn from_slice(tri: &Triangulation, values: &[f64]) -> Result<Self, LengthError> {
        if values.len() != tri.edge_count() {
            return Err(LengthError::EdgeCount {
                expected: tri.edge_count(),
                found: values.len(),
            });
        }
        let map = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (EdgeId(i), v))
            .collect();
        check_lengths(tri, &map)
    }

    pub fn uniform(tri: &Triangulation, value: f64) -> Result<Self, LengthError> {
        Self::from_slice(tri, &vec![value; tri.edge_count()])
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.values[e.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lengths of the three sides of `face`, indexed by side.
    pub fn face_sides(&self, tri: &Triangulation, face: usize) -> [f64; 3] {
        tri.face_edges(face).map(|e| self.get(e))
    }

    /// Every edge multiplied by `c`; a similarity preserves the triangle inequalities.
    pub(crate) fn scaled_unchecked(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// Validate a length assignment against the edge-length chart of `tri`.
pub fn check_lengths(
    tri: &Triangulation,
    values: &BTreeMap<EdgeId, f64>,
) -> Result<EdgeLengths, LengthError> {
    let mut out = Vec::with_capacity(tri.edge_count());
    for e in tri.edges() {
        let v = *values.get(&e).ok_or(LengthError::MissingEdge(e))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(LengthError::NonPositive { edge: e, value: v });
        }
        out.push(v);
    }
    for face in 0..tri.face_count() {
        let l = tri.face_edges(face).map(|e| out[e.0]);
        for k in 0..3 {
            if l[(k + 1) % 3] + l[(k + 2) % 3] <= l[k] {
                return Err(LengthError::TriangleInequalityViolated {
                    face,
                    side: k as u8,
                });
            }
        }
    }
    Ok(EdgeLengths { values: out })
}

/// Parse a lengths file: lines `length <face>.<side> <value>`, keyed by any side of the edge.
pub fn parse_lengths(tri: &Triangulation, text: &str) -> Result<EdgeLengths, LengthError> {
    let mut values: BTreeMap<EdgeId, f64> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let column = |tok: &str| {
            let byte = tok.as_ptr() as usize - raw.as_ptr() as usize;
            raw[..byte].chars().count() + 1
        };
        if toks[0] != "length" || toks.len() != 3 {
            return Err(LengthError::Syntax {
                line,
                column: column(toks[0]),
                message: "expected `length <face>.<side> <value>`".into(),
            });
        }
        let side = parse_side(tri, toks[1]).ok_or_else(|| LengthError::UnknownSide {
            line,
            side: toks[1].to_string(),
        })?;
        let value: f64 = toks[2].parse().map_err(|_| LengthError::Syntax {
            line,
            column: column(toks[2]),
            message: format!("bad length `{}`", toks[2]),
        })?;
        let edge = tri.orbit_of_side(side);
        if let Some(&old) = values.get(&edge) {
            if old != value {
                return Err(LengthError::ConflictingDuplicate { line, edge });
            }
        }
        values.insert(edge, value);
    }
    check_lengths(tri, &values)
}

fn parse_side(tri: &Triangulation, tok: &str) -> Option<SideRef> {
    let (f, s) = tok.split_once('.')?;
    let face: usize = f.parse().ok()?;
    let side: u8 = s.parse().ok()?;
    (face >= 1 && face <= tri.face_count() && (1..=3).contains(&side))
        .then(|| SideRef::new(face - 1, side - 1))
}

/// Lengths file text for `lengths`, one line per edge keyed by its smallest side.
pub fn lengths_to_text(tri: &Triangulation, lengths: &EdgeLengths) -> String {
    tri.edges()
        .map(|e| format!("length {} {}\n", tri.edge_sides(e)[0], lengths.get(e)))
        .collect()
}
