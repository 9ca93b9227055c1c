//! Planar points and the handful of predicates the unfolding code needs.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive when `other` is counterclockwise of `self`.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Twice the signed area of the triangle `(a, b, c)`.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Triangle area from side lengths, Heron's formula in Kahan's stable ordering.
pub fn heron_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert_eq!(dist_point_segment(Point2::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(dist_point_segment(Point2::new(-3.0, 4.0), a, b), 5.0);
        assert_eq!(dist_point_segment(Point2::new(4.0, 4.0), a, b), 5.0);
    }

    #[test]
    fn heron_matches_right_triangle() {
        assert!((heron_area(3.0, 4.0, 5.0) - 6.0).abs() < 1e-14);
        assert!((heron_area(5.0, 3.0, 4.0) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn heron_needle_triangle_stays_accurate() {
        // isoceles with legs 1 and base 1e-7: area = b/2 * sqrt(1 - b^2/4)
        let b = 1e-7_f64;
        let exact = 0.5 * b * (1.0 - 0.25 * b * b).sqrt();
        let area = heron_area(1.0, 1.0, b);
        assert!((area - exact).abs() / exact < 1e-14, "area {area}");
    }
}
