//! Corner angles, cone angles, area and the Gauss-Bonnet residual.

use std::f64::consts::PI;

use serde::Serialize;

use crate::gluing::Corner;

use super::{FacePlacement, FlatSurface};

/// Interior angle at corner `c` of a placed face.
pub fn corner_angle(placement: &FacePlacement, c: u8) -> f64 {
    let p = placement.corners[c as usize];
    let u = placement.corners[((c + 1) % 3) as usize] - p;
    let v = placement.corners[((c + 2) % 3) as usize] - p;
    u.cross(v).abs().atan2(u.dot(v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleReport {
    /// Cone angle of each vertex, indexed by vertex id.
    pub cone_angles: Vec<f64>,
    /// Corner angles of each face, indexed by corner.
    pub corner_angles: Vec<[f64; 3]>,
    pub area: f64,
}

impl FlatSurface {
    pub fn angle_report(&self) -> AngleReport {
        let tri = self.triangulation();
        let corner_angles: Vec<[f64; 3]> = self
            .placements()
            .iter()
            .map(|p| [0u8, 1, 2].map(|c| corner_angle(p, c)))
            .collect();
        let cone_angles = tri
            .vertices()
            .map(|v| {
                tri.vertex_corners(v)
                    .iter()
                    .map(|c: &Corner| corner_angles[c.face][c.corner as usize])
                    .sum()
            })
            .collect();
        let area = (0..tri.face_count())
            .map(|f| {
                let [a, b, c] = self.lengths().face_sides(tri, f);
                crate::geom::heron_area(a, b, c)
            })
            .sum();
        AngleReport {
            cone_angles,
            corner_angles,
            area,
        }
    }

    /// `sum_v (2 pi - theta_v) - 2 pi chi`; zero up to rounding for every valid surface.
    pub fn gauss_bonnet_residual(&self) -> f64 {
        let report = self.angle_report();
        let curvature: f64 = report.cone_angles.iter().map(|t| 2.0 * PI - t).sum();
        curvature - 2.0 * PI * self.triangulation().euler_char() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tol;

    #[test]
    fn fixture_cone_angles() {
        let tetra = fixtures::TETRAHEDRON.surface().angle_report();
        for t in &tetra.cone_angles {
            assert!((t - PI).abs() < 1e-12);
        }
        assert!((tetra.area - 3f64.sqrt()).abs() < 1e-12);

        let pillow = fixtures::PILLOW.surface().angle_report();
        assert_eq!(pillow.cone_angles.len(), 3);
        for t in &pillow.cone_angles {
            assert!((t - 2.0 * PI / 3.0).abs() < 1e-12);
        }

        let torus = fixtures::TORUS.surface().angle_report();
        assert_eq!(torus.cone_angles.len(), 1);
        assert!((torus.cone_angles[0] - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn corner_angles_sum_to_pi() {
        for f in fixtures::ALL {
            for a in f.surface().angle_report().corner_angles {
                assert!((a.iter().sum::<f64>() - PI).abs() < tol::ANGLE);
                assert!(a.iter().all(|&x| x > 0.0 && x < PI));
            }
        }
    }

    #[test]
    fn fixture_residuals_vanish() {
        for f in fixtures::ALL {
            assert!(f.surface().gauss_bonnet_residual().abs() < tol::GAUSS_BONNET);
        }
    }
}
