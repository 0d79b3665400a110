//! Cartesian vectors and polyline trajectories.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Cartesian 3-vector. The unit depends on what it holds: positions are in cm,
/// fields in G or statvolt/cm, momenta in g cm/s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Unit vector along axis `i` (0, 1, 2).
    pub fn axis(i: usize) -> Self {
        match i {
            0 => Self::X,
            1 => Self::Y,
            2 => Self::Z,
            _ => panic!("axis index {i} out of range"),
        }
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {i} out of range"),
        }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Returns `self` if every component is finite.
    pub fn checked(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Polyline path of the dipole's centre of mass.
///
/// A closed trajectory stores each vertex once; the closing segment from the
/// last vertex back to the first is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    vertices: Vec<Vec3>,
    closed: bool,
}

/// One midpoint sample of a line integral: the point and its directed length
/// element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSample {
    pub point: Vec3,
    pub dl: Vec3,
}

impl Trajectory {
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::DegenerateTrajectory(format!(
                "need at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("trajectory vertex"));
        }
        let traj = Self { vertices, closed };
        for (i, (a, b)) in traj.segments().enumerate() {
            if a == b {
                return Err(Error::DegenerateTrajectory(format!(
                    "segment {i} has zero length"
                )));
            }
        }
        Ok(traj)
    }

    pub fn open(vertices: Vec<Vec3>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<Vec3>) -> Result<Self> {
        Self::new(vertices, true)
    }

    /// Straight path from `from` to `to`.
    pub fn straight(from: Vec3, to: Vec3) -> Result<Self> {
        Self::open(vec![from, to])
    }

    /// Closed axis-aligned rectangle in the plane `x = x0`, traversed
    /// counter-clockwise when viewed from +x.
    pub fn rectangle_yz(x0: f64, y: (f64, f64), z: (f64, f64)) -> Result<Self> {
        Self::closed(vec![
            Vec3::new(x0, y.0, z.0),
            Vec3::new(x0, y.1, z.0),
            Vec3::new(x0, y.1, z.1),
            Vec3::new(x0, y.0, z.1),
        ])
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Vec3 {
        self.vertices[0]
    }

    /// Final point; for a closed loop this is the start.
    pub fn end(&self) -> Vec3 {
        if self.closed {
            self.vertices[0]
        } else {
            self.vertices[self.vertices.len() - 1]
        }
    }

    /// Same path traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        if self.closed {
            vertices[1..].reverse();
        } else {
            vertices.reverse();
        }
        Self {
            vertices,
            closed: self.closed,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        let n = self.vertices.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Midpoint-rule discretisation with `n_per_segment` equal cells per segment.
    pub fn segment_sample(&self, n_per_segment: usize) -> Result<Vec<LineSample>> {
        if n_per_segment == 0 {
            return Err(Error::InvalidInput(
                "n_per_segment must be at least 1".into(),
            ));
        }
        let n = n_per_segment as f64;
        let mut out = Vec::with_capacity(n_per_segment * self.vertices.len());
        for (a, b) in self.segments() {
            let dl = (b - a) / n;
            for k in 0..n_per_segment {
                let t = (k as f64 + 0.5) / n;
                out.push(LineSample {
                    point: a + (b - a) * t,
                    dl,
                });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_segment_single_sample() {
        let t = Trajectory::straight(Vec3::ZERO, Vec3::Z).unwrap();
        let s = t.segment_sample(1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].point, Vec3::new(0.0, 0.0, 0.5));
        assert_eq!(s[0].dl, Vec3::Z);
    }

    #[test]
    fn unit_square_perimeter() {
        let t = Trajectory::rectangle_yz(0.0, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let s = t.segment_sample(2).unwrap();
        assert_eq!(s.len(), 8);
        let total: f64 = s.iter().map(|s| s.dl.norm()).sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_subdivision() {
        let t = Trajectory::straight(Vec3::new(0.0, 0.0, -2.0), Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let s = t.segment_sample(4).unwrap();
        let zs: Vec<f64> = s.iter().map(|s| s.point.z).collect();
        assert_eq!(zs, vec![-1.5, -0.5, 0.5, 1.5]);
        assert!(s.iter().all(|s| s.dl == Vec3::Z));
    }

    #[test]
    fn rejects_degenerate_paths() {
        assert!(Trajectory::open(vec![Vec3::ZERO]).is_err());
        assert!(Trajectory::open(vec![Vec3::ZERO, Vec3::ZERO]).is_err());
        // closing segment back onto a repeated first vertex
        assert!(Trajectory::closed(vec![Vec3::ZERO, Vec3::X, Vec3::ZERO]).is_err());
        assert!(Trajectory::open(vec![Vec3::ZERO, Vec3::new(f64::NAN, 0.0, 0.0)]).is_err());
        let t = Trajectory::straight(Vec3::ZERO, Vec3::X).unwrap();
        assert!(t.segment_sample(0).is_err());
    }

    #[test]
    fn reversed_closed_loop_keeps_start() {
        let t = Trajectory::rectangle_yz(0.0, (0.0, 1.0), (0.0, 2.0)).unwrap();
        let r = t.reversed();
        assert_eq!(r.start(), t.start());
        assert_eq!(r.vertices()[1], t.vertices()[3]);
        assert!((r.length() - t.length()).abs() < 1e-15);
    }

    #[test]
    fn triple_product_identity() {
        let a = Vec3::new(0.3, -1.2, 0.7);
        let b = Vec3::new(-0.4, 0.25, 1.1);
        let c = Vec3::new(0.9, 0.6, -0.35);
        let lhs = a.dot(b.cross(c));
        let rhs = b.dot(c.cross(a));
        assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }
}
