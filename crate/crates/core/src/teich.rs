//! Edge-length coordinates on the space of flat cone metrics.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::gluing::Triangulation;
use crate::metric::{EdgeLengths, FlatSurface};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TeichError {
    #[error("|V| - chi = {0} is not positive")]
    AssumptionViolated(i64),
    #[error("cone angle {index} is not positive: {value}")]
    NonPositiveAngle { index: usize, value: f64 },
    #[error("scale factor {0} is not positive")]
    NonPositiveScale(f64),
    #[error("the two points live on different triangulations")]
    TriangulationMismatch,
}

/// Dimension of the edge-length chart, `3|V| - 3 chi`.
pub fn chart_dimension(tri: &Triangulation) -> Result<usize, TeichError> {
    chart_dimension_for(tri.vertex_count(), tri.euler_char())
}

/// Chart dimension from the vertex count and Euler characteristic alone.
pub fn chart_dimension_for(vertex_count: usize, euler_char: i64) -> Result<usize, TeichError> {
    let slack = vertex_count as i64 - euler_char;
    if slack <= 0 {
        return Err(TeichError::AssumptionViolated(slack));
    }
    Ok((3 * slack) as usize)
}

/// Gauss-Bonnet residual for prescribed cone angles.
pub fn gb_residual(angles: &[f64], chi: i64) -> f64 {
    angles.iter().map(|t| 2.0 * PI - t).sum::<f64>() - 2.0 * PI * chi as f64
}

/// Whether `angles` satisfy the Gauss-Bonnet constraint for Euler characteristic `chi`.
pub fn gb_membership(angles: &[f64], chi: i64) -> Result<bool, TeichError> {
    if let Some((index, &value)) = angles
        .iter()
        .enumerate()
        .find(|(_, t)| t.is_nan() || **t <= 0.0)
    {
        return Err(TeichError::NonPositiveAngle { index, value });
    }
    Ok(gb_residual(angles, chi).abs() <= tol::GAUSS_BONNET)
}

pub fn scale_lengths(lengths: &EdgeLengths, c: f64) -> Result<EdgeLengths, TeichError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(TeichError::NonPositiveScale(c));
    }
    Ok(lengths.scaled_unchecked(c))
}

/// Isometry invariants of a flat surface that the edge lengths determine cheaply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantRecord {
    /// Cone angles sorted ascending.
    pub cone_angles: Vec<f64>,
    pub area: f64,
    pub euler_char: i64,
    pub vertex_count: usize,
    pub gb_residual: f64,
}

pub fn invariants(surface: &FlatSurface) -> InvariantRecord {
    let report = surface.angle_report();
    let mut cone_angles = report.cone_angles.clone();
    cone_angles.sort_by(f64::total_cmp);
    InvariantRecord {
        cone_angles,
        area: report.area,
        euler_char: surface.triangulation().euler_char(),
        vertex_count: surface.triangulation().vertex_count(),
        gb_residual: surface.gauss_bonnet_residual(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinct,
    Inconclusive,
}

/// Separate two length-chart points by their invariants. Never reports that
/// two metrics are isometric, only that they cannot be.
pub fn distinguish(p: &FlatSurface, q: &FlatSurface) -> Result<Verdict, TeichError> {
    if p.triangulation() != q.triangulation() {
        return Err(TeichError::TriangulationMismatch);
    }
    let (a, b) = (invariants(p), invariants(q));
    let angles_differ = a
        .cone_angles
        .iter()
        .zip(&b.cone_angles)
        .any(|(x, y)| (x - y).abs() > tol::ANGLE);
    let area_differs = (a.area - b.area).abs() > tol::METRIC * a.area.max(b.area);
    Ok(if angles_differ || area_differs {
        Verdict::Distinct
    } else {
        Verdict::Inconclusive
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gluing::{parse_spec, validate};

    #[test]
    fn chart_dimensions() {
        assert_eq!(chart_dimension(&fixtures::TORUS.triangulation()), Ok(3));
        assert_eq!(
            chart_dimension(&fixtures::TETRAHEDRON.triangulation()),
            Ok(6)
        );
        assert_eq!(chart_dimension(&fixtures::PILLOW.triangulation()), Ok(3));
    }

    #[test]
    fn sphere_with_two_vertices_violates_the_assumption() {
        assert_eq!(
            chart_dimension_for(2, 2),
            Err(TeichError::AssumptionViolated(0))
        );
        assert_eq!(
            chart_dimension_for(1, 2),
            Err(TeichError::AssumptionViolated(-1))
        );
    }

    #[test]
    fn dimension_counts_edges() {
        let tri = validate(
            &parse_spec("faces 2\nglue 1.1 1.2 flip\nglue 2.1 2.2 flip\nglue 1.3 2.3 keep")
                .unwrap(),
        )
        .unwrap();
        assert_eq!(chart_dimension(&tri), Ok(tri.edge_count()));
    }

    #[test]
    fn gauss_bonnet_membership() {
        assert_eq!(gb_membership(&[PI; 4], 2), Ok(true));
        assert_eq!(gb_membership(&[2.0 * PI], 0), Ok(true));
        assert_eq!(gb_membership(&[PI, PI, PI, PI + 0.1], 2), Ok(false));
        assert!(matches!(
            gb_membership(&[PI, 0.0], 2),
            Err(TeichError::NonPositiveAngle { index: 1, .. })
        ));
    }

    #[test]
    fn scaling() {
        let s = fixtures::TETRAHEDRON.surface();
        assert_eq!(&scale_lengths(s.lengths(), 1.0).unwrap(), s.lengths());
        assert!(matches!(
            scale_lengths(s.lengths(), 0.0),
            Err(TeichError::NonPositiveScale(_))
        ));
        assert!(matches!(
            scale_lengths(s.lengths(), -1.0),
            Err(TeichError::NonPositiveScale(_))
        ));
        let big = s.scaled(2.0);
        let (a, b) = (invariants(&s), invariants(&big));
        assert!((b.area - 4.0 * a.area).abs() < 1e-12);
        for (x, y) in a.cone_angles.iter().zip(&b.cone_angles) {
            assert!((x - PI).abs() < 1e-12 && (y - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn distinguish_is_one_sided() {
        let s = fixtures::TETRAHEDRON.surface();
        assert_eq!(distinguish(&s, &s), Ok(Verdict::Inconclusive));
        assert_eq!(distinguish(&s, &s.scaled(2.0)), Ok(Verdict::Distinct));
        assert_eq!(
            distinguish(&s, &fixtures::PILLOW.surface()),
            Err(TeichError::TriangulationMismatch)
        );
    }

    #[test]
    fn equal_area_different_angles_on_the_pillow() {
        // (3, 4, 5) and the isoceles triangle with base 4 and height 3 both have area 6
        let tri = fixtures::PILLOW.triangulation();
        let p = FlatSurface::new(
            tri.clone(),
            EdgeLengths::from_slice(&tri, &[3.0, 4.0, 5.0]).unwrap(),
        )
        .unwrap();
        let leg = 13f64.sqrt();
        let q = FlatSurface::new(
            tri.clone(),
            EdgeLengths::from_slice(&tri, &[leg, leg, 4.0]).unwrap(),
        )
        .unwrap();
        assert!((invariants(&p).area - invariants(&q).area).abs() < 1e-12);
        assert_eq!(distinguish(&p, &q), Ok(Verdict::Distinct));
    }
}
