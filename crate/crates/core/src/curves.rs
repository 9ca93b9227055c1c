//! Piecewise-linear curves and their lengths.
//!
//! A [`FaceCurve`] is a polyline inside one face; its length under the face
//! metric is the sum of chord lengths. Pushed to the surface, its length under
//! the global distance is the supremum of partition sums. We evaluate those
//! sums on dyadic refinements of the polyline's breakpoints. An interval whose
//! endpoints are closer (in the face) than half the combined radius of either
//! endpoint has a global distance equal to its chord, so once every interval
//! is certified the partition sum is exact.

use serde::Serialize;
use thiserror::Error;

use crate::engine::{DistanceEngine, EngineError};
use crate::gluing::Triangulation;
use crate::metric::{make_point, Barycentric, FlatSurface, PointError, SurfacePoint};

/// Refinement depth after which [`check_length_preservation`] gives up.
pub const DEPTH_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("a face curve needs at least two points")]
    TooShort,
    #[error("consecutive points coincide at index {0}")]
    RepeatedPoint(usize),
    #[error("face {} does not exist", .0 + 1)]
    FaceOutOfRange(usize),
    #[error("piece {0} does not end where the next one starts")]
    Discontinuous(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Point { line: usize, source: PointError },
    #[error("refinement did not certify every interval by depth {0}")]
    ConvergenceNotReached(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A polyline in one face, given by barycentric breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceCurve {
    pub face: usize,
    pub points: Vec<Barycentric>,
}

impl FaceCurve {
    pub fn new(face: usize, points: Vec<Barycentric>) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooShort);
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(CurveError::RepeatedPoint(i));
        }
        Ok(Self { face, points })
    }

    pub(crate) fn segment(face: usize, a: Barycentric, b: Barycentric) -> Self {
        debug_assert!(a != b);
        Self {
            face,
            points: vec![a, b],
        }
    }

    pub fn start(&self) -> Barycentric {
        self.points[0]
    }

    pub fn end(&self) -> Barycentric {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            face: self.face,
            points,
        }
    }

    /// Point at parameter `t` along breakpoint interval `seg`.
    fn at(&self, seg: usize, t: f64) -> Barycentric {
        if t == 0.0 {
            self.points[seg]
        } else if t == 1.0 {
            self.points[seg + 1]
        } else {
            self.points[seg].lerp(&self.points[seg + 1], t)
        }
    }
}

/// Length of `curve` under the flat metric of its face.
pub fn face_curve_length(surface: &FlatSurface, curve: &FaceCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| surface.face_distance(curve.face, &w[0], &w[1]))
        .sum()
}

/// A curve on the surface made of in-face polylines that meet end to start.
/// No pieces means a constant curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceCurve {
    pub pieces: Vec<FaceCurve>,
}

impl SurfaceCurve {
    pub fn new(tri: &Triangulation, pieces: Vec<FaceCurve>) -> Result<Self, CurveError> {
        let curve = Self { pieces };
        curve.check(tri)?;
        Ok(curve)
    }

    pub(crate) fn from_pieces_unchecked(pieces: Vec<FaceCurve>) -> Self {
        Self { pieces }
    }

    pub fn constant() -> Self {
        Self { pieces: Vec::new() }
    }

    /// Check faces, point counts and continuity at every junction.
    pub fn check(&self, tri: &Triangulation) -> Result<(), CurveError> {
        for p in &self.pieces {
            if p.face >= tri.face_count() {
                return Err(CurveError::FaceOutOfRange(p.face));
            }
            FaceCurve::new(p.face, p.points.clone())?;
        }
        for (i, w) in self.pieces.windows(2).enumerate() {
            let a = make_point(tri, w[0].face, w[0].end());
            let b = make_point(tri, w[1].face, w[1].start());
            if a != b {
                return Err(CurveError::Discontinuous(i));
            }
        }
        Ok(())
    }

    pub fn length(&self, surface: &FlatSurface) -> f64 {
        self.pieces
            .iter()
            .map(|p| face_curve_length(surface, p))
            .sum()
    }

    pub fn reversed(&self) -> Self {
        Self {
            pieces: self.pieces.iter().rev().map(FaceCurve::reversed).collect(),
        }
    }

    pub fn concat(mut self, other: SurfaceCurve) -> Self {
        self.pieces.extend(other.pieces);
        self
    }

    pub fn start(&self, tri: &Triangulation) -> Option<SurfacePoint> {
        self.pieces
            .first()
            .map(|p| make_point(tri, p.face, p.start()))
    }

    pub fn end(&self, tri: &Triangulation) -> Option<SurfacePoint> {
        self.pieces.last().map(|p| make_point(tri, p.face, p.end()))
    }
}

/// Parse a curve file: lines `seg <face> <b1>,<b2>,<b3> <b1>,<b2>,<b3> ...`.
pub fn parse_curve(tri: &Triangulation, text: &str) -> Result<SurfaceCurve, CurveError> {
    let mut pieces = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |message: &str| CurveError::Syntax {
            line,
            message: message.to_string(),
        };
        if toks[0] != "seg" || toks.len() < 4 {
            return Err(syntax("expected `seg <face> <bary> <bary> ...`"));
        }
        let face: usize = toks[1].parse().map_err(|_| syntax("bad face index"))?;
        if face == 0 || face > tri.face_count() {
            return Err(CurveError::FaceOutOfRange(face.saturating_sub(1)));
        }
        let mut points = Vec::new();
        for tok in &toks[2..] {
            let coords: Vec<f64> = tok
                .split(',')
                .map(|s| s.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| syntax("bad barycentric triple"))?;
            let b: [f64; 3] = coords
                .try_into()
                .map_err(|_| syntax("barycentric triples have three entries"))?;
            points.push(Barycentric::new(b).map_err(|source| CurveError::Point { line, source })?);
        }
        pieces.push(FaceCurve::new(face - 1, points)?);
    }
    SurfaceCurve::new(tri, pieces)
}

/// Partition sums of a surface curve under the global distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    pub face_length: f64,
    /// Partition sum at each refinement depth, starting at the breakpoint partition.
    pub sums: Vec<f64>,
    pub converged: bool,
    /// First depth at which every interval was certified.
    pub certified_depth: Option<usize>,
    /// `face_length` minus the last partition sum.
    pub gap: f64,
}

impl LengthReport {
    pub fn estimate(&self) -> f64 {
        *self.sums.last().unwrap_or(&0.0)
    }
}

#[derive(Clone)]
struct Interval {
    piece: usize,
    seg: usize,
    t0: f64,
    t1: f64,
    sum: f64,
    certified: bool,
}

/// Evaluate partition sums of `curve` up to refinement depth `depth`,
/// stopping early once every interval is certified.
pub fn surface_curve_length(
    curve: &SurfaceCurve,
    engine: &DistanceEngine,
    depth: usize,
) -> Result<LengthReport, CurveError> {
    let surface = engine.surface();
    let face_length = curve.length(surface);
    let mut intervals = Vec::new();
    for (pi, piece) in curve.pieces.iter().enumerate() {
        for seg in 0..piece.points.len() - 1 {
            intervals.push(evaluate(curve, engine, pi, seg, 0.0, 1.0)?);
        }
    }
    let mut sums = vec![intervals.iter().map(|i| i.sum).sum::<f64>()];
    let mut certified_depth = intervals.iter().all(|i| i.certified).then_some(0);
    let mut level = 0;
    while certified_depth.is_none() && level < depth {
        level += 1;
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for iv in intervals {
            if iv.certified {
                next.push(iv);
            } else {
                let mid = 0.5 * (iv.t0 + iv.t1);
                next.push(evaluate(curve, engine, iv.piece, iv.seg, iv.t0, mid)?);
                next.push(evaluate(curve, engine, iv.piece, iv.seg, mid, iv.t1)?);
            }
        }
        intervals = next;
        sums.push(intervals.iter().map(|i| i.sum).sum());
        if intervals.iter().all(|i| i.certified) {
            certified_depth = Some(level);
        }
    }
    let last = *sums.last().unwrap();
    Ok(LengthReport {
        face_length,
        sums,
        converged: certified_depth.is_some(),
        certified_depth,
        gap: face_length - last,
    })
}

fn evaluate(
    curve: &SurfaceCurve,
    engine: &DistanceEngine,
    piece: usize,
    seg: usize,
    t0: f64,
    t1: f64,
) -> Result<Interval, CurveError> {
    let surface = engine.surface();
    let fc = &curve.pieces[piece];
    let (a, b) = (fc.at(seg, t0), fc.at(seg, t1));
    let p = make_point(surface.triangulation(), fc.face, a);
    let q = make_point(surface.triangulation(), fc.face, b);
    let chord = surface.face_distance(fc.face, &a, &b);
    let radius = surface.combined_radius(&p).max(surface.combined_radius(&q));
    Ok(Interval {
        piece,
        seg,
        t0,
        t1,
        sum: engine.distance_exact(&p, &q)?,
        certified: chord < 0.5 * radius,
    })
}

/// Push a face curve to the surface and compare its two lengths.
/// Returns whether they agree within `tol`, with the report.
pub fn check_length_preservation(
    curve: &FaceCurve,
    engine: &DistanceEngine,
    tol: f64,
) -> Result<(bool, LengthReport), CurveError> {
    let sc = SurfaceCurve::from_pieces_unchecked(vec![curve.clone()]);
    let report = surface_curve_length(&sc, engine, DEPTH_MAX)?;
    if !report.converged {
        return Err(CurveError::ConvergenceNotReached(DEPTH_MAX));
    }
    Ok((
        (report.face_length - report.estimate()).abs() <= tol,
        report,
    ))
}
