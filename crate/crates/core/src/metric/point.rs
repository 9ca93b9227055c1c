use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::geom::Point2;
use crate::gluing::{Corner, SideRef, Triangulation};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error("barycentric entry {value} is negative")]
    Negative { value: f64 },
    #[error("barycentric entries sum to {sum}, not 1")]
    BadSum { sum: f64 },
    #[error("barycentric entry is not finite")]
    NotFinite,
    #[error("face {} out of range", .0 + 1)]
    FaceOutOfRange(usize),
    #[error("malformed point `{0}`; expected <face>:<b1>,<b2>,<b3>")]
    Syntax(String),
}

/// Barycentric coordinates on the model triangle, indexed by corner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Barycentric([f64; 3]);

impl Barycentric {
    /// Validate user input. Entries must be non-negative; the sum must be within
    /// [`tol::BARY_SUM`] of one and is renormalized. Only exact zeros put a point
    /// on the boundary.
    pub fn new(b: [f64; 3]) -> Result<Self, PointError> {
        if b.iter().any(|v| !v.is_finite()) {
            return Err(PointError::NotFinite);
        }
        if let Some(&value) = b.iter().find(|&&v| v < 0.0) {
            return Err(PointError::Negative { value });
        }
        // -0.0 would otherwise compare unequal to 0.0 under total ordering
        let b = b.map(|v| v + 0.0);
        let sum = b[0] + b[1] + b[2];
        if (sum - 1.0).abs() > tol::BARY_SUM {
            return Err(PointError::BadSum { sum });
        }
        Ok(Self::normalized(b, sum))
    }

    /// Coordinates produced by arithmetic: entries below [`tol::SNAP`], including
    /// small negatives from rounding, snap to zero; the triple is renormalized.
    pub fn snapped(mut b: [f64; 3]) -> Self {
        for v in &mut b {
            if *v < tol::SNAP {
                *v = 0.0;
            }
        }
        let sum = b[0] + b[1] + b[2];
        Self::normalized(b, sum)
    }

    fn normalized(b: [f64; 3], sum: f64) -> Self {
        if sum == 1.0 {
            Self(b)
        } else {
            Self(b.map(|v| v / sum))
        }
    }

    pub const fn corner(c: u8) -> Self {
        let mut b = [0.0; 3];
        b[c as usize] = 1.0;
        Self(b)
    }

    /// Point on side `side` with the given weights on its start and end corners.
    pub fn on_side(side: u8, start: f64, end: f64) -> Self {
        let mut b = [0.0; 3];
        b[((side + 1) % 3) as usize] = start;
        b[((side + 2) % 3) as usize] = end;
        Self(b)
    }

    pub const fn centroid() -> Self {
        Self([1.0 / 3.0; 3])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn get(&self, k: u8) -> f64 {
        self.0[k as usize]
    }

    /// The corner this point sits on, if any.
    pub fn as_corner(&self) -> Option<u8> {
        (0..3u8).find(|&k| self.0[k as usize] == 1.0 && self.zero_count() == 2)
    }

    /// The side whose relative interior contains this point, if any.
    pub fn as_side(&self) -> Option<u8> {
        if self.zero_count() == 1 {
            (0..3u8).find(|&k| self.0[k as usize] == 0.0)
        } else {
            None
        }
    }

    pub fn is_interior(&self) -> bool {
        self.zero_count() == 0
    }

    /// Whether the closed side `side` contains the point.
    pub fn on_closed_side(&self, side: u8) -> bool {
        self.0[side as usize] == 0.0
    }

    fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&v| v == 0.0).count()
    }

    pub fn position(&self, corners: &[Point2; 3]) -> Point2 {
        let [a, b, c] = self.0;
        Point2::new(
            a * corners[0].x + b * corners[1].x + c * corners[2].x,
            a * corners[0].y + b * corners[1].y + c * corners[2].y,
        )
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        let mut b = [0.0; 3];
        for (k, v) in b.iter_mut().enumerate() {
            *v = (1.0 - t) * self.0[k] + t * other.0[k];
        }
        Self::snapped(b)
    }

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.0[0]
            .total_cmp(&other.0[0])
            .then(self.0[1].total_cmp(&other.0[1]))
            .then(self.0[2].total_cmp(&other.0[2]))
    }
}

impl fmt::Display for Barycentric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

/// One preimage of a surface point: a face and a position in that face.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rep {
    pub face: usize,
    pub bary: Barycentric,
}

impl Rep {
    pub fn new(face: usize, bary: Barycentric) -> Self {
        Self { face, bary }
    }

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.face
            .cmp(&other.face)
            .then(self.bary.cmp_total(&other.bary))
    }
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.face + 1, self.bary)
    }
}

/// A point of the glued surface, stored as its full set of preimages.
///
/// Representatives are sorted; the first is the canonical one. Two points are
/// equal iff their canonical representatives are bitwise equal.
#[derive(Clone, Debug)]
pub struct SurfacePoint {
    reps: Vec<Rep>,
}

impl SurfacePoint {
    pub fn reps(&self) -> &[Rep] {
        &self.reps
    }

    pub fn canonical(&self) -> Rep {
        self.reps[0]
    }

    /// Representatives lying in `face`.
    pub fn reps_in(&self, face: usize) -> impl Iterator<Item = &Rep> + '_ {
        self.reps.iter().filter(move |r| r.face == face)
    }

    pub fn touches_face(&self, face: usize) -> bool {
        self.reps.iter().any(|r| r.face == face)
    }

    /// Faces carrying at least one representative, ascending.
    pub fn faces(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.reps.iter().map(|r| r.face).collect();
        f.dedup();
        f
    }

    pub fn is_vertex(&self) -> bool {
        self.reps[0].bary.as_corner().is_some()
    }

    fn from_reps(mut reps: Vec<Rep>) -> Self {
        reps.sort_by(Rep::cmp_total);
        reps.dedup_by(|a, b| a.cmp_total(b) == Ordering::Equal);
        Self { reps }
    }

    /// Bypasses orbit closure. Only for fault-injection runs.
    pub(crate) fn from_reps_unchecked(reps: Vec<Rep>) -> Self {
        Self::from_reps(reps)
    }
}

impl PartialEq for SurfacePoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical().cmp_total(&other.canonical()) == Ordering::Equal
    }
}

impl Eq for SurfacePoint {}

impl PartialOrd for SurfacePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurfacePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical().cmp_total(&other.canonical())
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// Image of a side point under the identification of `side` with its partner.
pub(crate) fn across_side(tri: &Triangulation, side: SideRef, b: &Barycentric) -> Rep {
    let (t, o) = tri.partner(side);
    let start = b.get((side.side + 1) % 3);
    let end = b.get((side.side + 2) % 3);
    let bary = if o.starts_match() {
        Barycentric::on_side(t.side, start, end)
    } else {
        Barycentric::on_side(t.side, end, start)
    };
    Rep::new(t.face, bary)
}

/// All preimages of the point `(face, bary)`: partner-side images for side
/// points, the whole corner class for vertices.
pub fn make_point(tri: &Triangulation, face: usize, bary: Barycentric) -> SurfacePoint {
    let rep = Rep::new(face, bary);
    if let Some(c) = bary.as_corner() {
        let v = tri.orbit_of_corner(Corner::new(face, c));
        let reps = tri
            .vertex_corners(v)
            .iter()
            .map(|k| Rep::new(k.face, Barycentric::corner(k.corner)))
            .collect();
        SurfacePoint::from_reps(reps)
    } else if let Some(k) = bary.as_side() {
        let other = across_side(tri, SideRef::new(face, k), &bary);
        SurfacePoint::from_reps(vec![rep, other])
    } else {
        SurfacePoint::from_reps(vec![rep])
    }
}

/// Parse `<face>:<b1>,<b2>,<b3>` with a 1-based face index.
pub fn parse_point(tri: &Triangulation, text: &str) -> Result<SurfacePoint, PointError> {
    let syntax = || PointError::Syntax(text.to_string());
    let (f, rest) = text.trim().split_once(':').ok_or_else(syntax)?;
    let face: usize = f.trim().parse().map_err(|_| syntax())?;
    if face == 0 || face > tri.face_count() {
        return Err(PointError::FaceOutOfRange(face.saturating_sub(1)));
    }
    let coords: Vec<f64> = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| syntax())?;
    let b: [f64; 3] = coords.try_into().map_err(|_| syntax())?;
    Ok(make_point(tri, face - 1, Barycentric::new(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn input_validation() {
        assert!(Barycentric::new([0.2, 0.3, 0.5]).is_ok());
        assert!(matches!(
            Barycentric::new([-0.1, 0.6, 0.5]),
            Err(PointError::Negative { .. })
        ));
        assert!(matches!(
            Barycentric::new([0.2, 0.3, 0.6]),
            Err(PointError::BadSum { .. })
        ));
        assert!(matches!(
            Barycentric::new([f64::NAN, 0.5, 0.5]),
            Err(PointError::NotFinite)
        ));
        // tiny positive entries stay interior for input points
        assert!(Barycentric::new([1e-15, 0.5, 0.5 - 1e-15])
            .unwrap()
            .is_interior());
    }

    #[test]
    fn snapping_computed_points() {
        let b = Barycentric::snapped([1e-13, 0.4, 0.6]);
        assert_eq!(b.as_side(), Some(0));
        let c = Barycentric::snapped([-1e-14, 1.0 + 1e-14, 0.0]);
        assert_eq!(c.as_corner(), Some(1));
    }

    #[test]
    fn interior_point_is_a_singleton() {
        let t = fixtures::PILLOW.triangulation();
        let p = make_point(&t, 1, Barycentric::new([0.2, 0.3, 0.5]).unwrap());
        assert_eq!(p.reps().len(), 1);
    }

    #[test]
    fn torus_corner_has_six_reps() {
        let t = fixtures::TORUS.triangulation();
        let p = make_point(&t, 0, Barycentric::corner(0));
        assert_eq!(p.reps().len(), 6);
        // lexicographic on (face, coords): corner 2 sorts first
        assert_eq!(p.canonical(), Rep::new(0, Barycentric::corner(2)));
    }

    #[test]
    fn pillow_side_midpoint_orbit() {
        let t = fixtures::PILLOW.triangulation();
        let mid = Barycentric::on_side(0, 0.5, 0.5);
        let p = make_point(&t, 0, mid);
        assert_eq!(p.reps(), &[Rep::new(0, mid), Rep::new(1, mid)]);
    }

    #[test]
    fn side_orbit_respects_orientation() {
        // pillow: flip sends start to start, so weights carry over unchanged
        let t = fixtures::PILLOW.triangulation();
        let b = Barycentric::on_side(0, 0.25, 0.75);
        assert_eq!(make_point(&t, 0, b).reps()[1], Rep::new(1, b));
        // torus: keep sends start to end, so the weights swap
        let t = fixtures::TORUS.triangulation();
        let p = make_point(&t, 0, b);
        assert_eq!(
            p.reps()[1],
            Rep::new(1, Barycentric::on_side(0, 0.75, 0.25))
        );
    }

    #[test]
    fn orbit_is_independent_of_starting_rep() {
        for f in fixtures::ALL {
            let t = f.triangulation();
            for face in 0..t.face_count() {
                for side in 0..3u8 {
                    let p = make_point(&t, face, Barycentric::on_side(side, 0.3, 0.7));
                    for r in p.reps() {
                        let q = make_point(&t, r.face, r.bary);
                        assert_eq!(p.reps(), q.reps());
                    }
                }
                for c in 0..3u8 {
                    let p = make_point(&t, face, Barycentric::corner(c));
                    for r in p.reps() {
                        assert_eq!(p.reps(), make_point(&t, r.face, r.bary).reps());
                    }
                }
            }
        }
    }

    #[test]
    fn parse_points() {
        let t = fixtures::TETRAHEDRON.triangulation();
        let p = parse_point(&t, "2:1,0,0").unwrap();
        assert!(p.is_vertex());
        assert!(matches!(
            parse_point(&t, "5:1,0,0"),
            Err(PointError::FaceOutOfRange(_))
        ));
        assert!(matches!(
            parse_point(&t, "1:1,0"),
            Err(PointError::Syntax(_))
        ));
        assert!(matches!(parse_point(&t, "x"), Err(PointError::Syntax(_))));
    }
}
