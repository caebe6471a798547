//! Spherical trigonometry on the unit sphere.
//!
//! Points are unit vectors, arcs are minor great-circle arcs and areas are in
//! steradians. Corner angles are measured in the tangent plane at the apex,
//! which stays well conditioned when the vertices of a triangle are close.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vec3::Vec3;

/// Threshold on dot products below which two directions count as coincident
/// (or antipodal).
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Unit-norm tolerance for [`SpherePoint`].
pub const UNIT_TOL: f64 = 1e-12;

/// Inverse-trig arguments within this distance outside `[-1, 1]` are clamped.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SphereError {
    #[error("points coincide")]
    DegeneratePair,
    #[error("points are antipodal, the connecting arc is not unique")]
    AntipodalPair,
    #[error("arc endpoint coincides with or is antipodal to the apex")]
    DegenerateArc,
    #[error("angles ({0}, {1}, {2}) do not form a spherical triangle")]
    InvalidTriangle(f64, f64, f64),
    #[error("value {0} out of range")]
    OutOfRange(f64),
    #[error("vector has norm {0}, expected 1")]
    NotUnit(f64),
}

/// A point on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Wraps an already-unit vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, SphereError> {
        let v = Vec3::new(x, y, z);
        let n2 = v.norm_squared();
        if (n2 - 1.0).abs() > UNIT_TOL || !n2.is_finite() {
            return Err(SphereError::NotUnit(n2.sqrt()));
        }
        Ok(SpherePoint(v))
    }

    /// Projects a non-zero vector onto the sphere.
    pub fn from_vec(v: Vec3) -> Option<Self> {
        v.normalized().map(SpherePoint)
    }

    /// Point at the given longitude (about +z, from +x) and colatitude (from +z).
    pub fn from_lon_colat(lon: f64, colat: f64) -> Self {
        let (sl, cl) = lon.sin_cos();
        let (st, ct) = colat.sin_cos();
        SpherePoint(Vec3::new(st * cl, st * sl, ct))
    }

    pub const NORTH: SpherePoint = SpherePoint(Vec3::new(0.0, 0.0, 1.0));
    pub const SOUTH: SpherePoint = SpherePoint(Vec3::new(0.0, 0.0, -1.0));

    #[inline]
    pub fn vec(self) -> Vec3 {
        self.0
    }

    #[inline]
    pub fn dot(self, o: SpherePoint) -> f64 {
        self.0.dot(o.0)
    }

    pub fn antipode(self) -> SpherePoint {
        SpherePoint(-self.0)
    }

    /// Longitude in `(-π, π]`.
    pub fn longitude(self) -> f64 {
        self.0.y.atan2(self.0.x)
    }

    pub fn colatitude(self) -> f64 {
        let rho = (self.0.x * self.0.x + self.0.y * self.0.y).sqrt();
        rho.atan2(self.0.z)
    }
}

impl TryFrom<[f64; 3]> for SpherePoint {
    type Error = SphereError;
    fn try_from(a: [f64; 3]) -> Result<Self, Self::Error> {
        // Interchange files carry rounded decimals; renormalise anything close.
        let v = Vec3::from(a);
        let n = v.norm();
        if (n - 1.0).abs() > 1e-9 || !n.is_finite() {
            return Err(SphereError::NotUnit(n));
        }
        Ok(SpherePoint(v * (1.0 / n)))
    }
}

impl From<SpherePoint> for [f64; 3] {
    fn from(p: SpherePoint) -> Self {
        p.0.to_array()
    }
}

/// `acos` with the clamping policy: arguments slightly outside `[-1, 1]` are
/// pulled back, anything further out is an error.
pub fn checked_acos(x: f64) -> Option<f64> {
    if !(-1.0 - CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) {
        None
    } else {
        Some(x.clamp(-1.0, 1.0).acos())
    }
}

/// Great-circle distance between `p` and `q`, in `(0, π)`.
pub fn arc_length(p: SpherePoint, q: SpherePoint) -> Result<f64, SphereError> {
    let d = p.dot(q);
    if d > 1.0 - DEGENERACY_TOL {
        return Err(SphereError::DegeneratePair);
    }
    if d < -1.0 + DEGENERACY_TOL {
        return Err(SphereError::AntipodalPair);
    }
    Ok(arc_length_unchecked(p, q))
}

/// Great-circle distance without degeneracy checks; `0` and `π` at the extremes.
#[inline]
pub fn arc_length_unchecked(p: SpherePoint, q: SpherePoint) -> f64 {
    p.0.cross(q.0).norm().atan2(p.0.dot(q.0))
}

/// Unit tangent at `apex` pointing along the great arc towards `u`.
fn tangent(apex: SpherePoint, u: SpherePoint) -> Result<Vec3, SphereError> {
    let d = apex.dot(u);
    if d.abs() > 1.0 - DEGENERACY_TOL {
        return Err(SphereError::DegenerateArc);
    }
    (u.0 - apex.0 * d)
        .normalized()
        .ok_or(SphereError::DegenerateArc)
}

/// Angle at `apex` between the great arcs `apex→u` and `apex→v`, in `[0, π]`.
pub fn angle_at(apex: SpherePoint, u: SpherePoint, v: SpherePoint) -> Result<f64, SphereError> {
    let tu = tangent(apex, u)?;
    let tv = tangent(apex, v)?;
    Ok(tu.cross(tv).norm().atan2(tu.dot(tv)))
}

/// Counter-clockwise angle (seen from outside the sphere) that turns the arc
/// `apex→u` onto `apex→v`, in `[0, 2π)`.
pub fn ccw_angle_at(apex: SpherePoint, u: SpherePoint, v: SpherePoint) -> Result<f64, SphereError> {
    let tu = tangent(apex, u)?;
    let tv = tangent(apex, v)?;
    let s = tu.cross(tv).dot(apex.0);
    let a = s.atan2(tu.dot(tv));
    Ok(if a < 0.0 { a + 2.0 * PI } else { a })
}

/// Side opposite `alpha` from the three corner angles, by the supplementary
/// cosine rule `cos a = (cos α + cos β cos γ) / (sin β sin γ)`.
pub fn supplementary_side(alpha: f64, beta: f64, gamma: f64) -> Result<f64, SphereError> {
    let invalid = SphereError::InvalidTriangle(alpha, beta, gamma);
    let in_range = |x: f64| x > 0.0 && x < PI;
    if !(in_range(alpha) && in_range(beta) && in_range(gamma)) {
        return Err(invalid);
    }
    let sum = alpha + beta + gamma;
    if sum <= PI || sum >= 3.0 * PI {
        return Err(invalid);
    }
    let arg = (alpha.cos() + beta.cos() * gamma.cos()) / (beta.sin() * gamma.sin());
    checked_acos(arg).ok_or(invalid)
}

/// Spherical excess `α + β + γ − π`, which is the area on the unit sphere.
pub fn triangle_excess_area(alpha: f64, beta: f64, gamma: f64) -> Result<f64, SphereError> {
    let in_range = |x: f64| x > 0.0 && x < PI;
    let e = alpha + beta + gamma - PI;
    if !(in_range(alpha) && in_range(beta) && in_range(gamma)) || e <= 0.0 {
        return Err(SphereError::InvalidTriangle(alpha, beta, gamma));
    }
    Ok(e)
}

/// Area of a lune with dihedral angle `delta`.
pub fn lune_area(delta: f64) -> Result<f64, SphereError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(SphereError::OutOfRange(delta));
    }
    Ok(2.0 * delta)
}

/// Signed area of the geodesic triangle `a, b, c`: positive when the corners
/// run counter-clockwise seen from outside the sphere.
///
/// Uses `tan(E/2) = a·(b×c) / (1 + a·b + b·c + c·a)`, valid for triangles
/// inside an open hemisphere.
pub fn signed_triangle_area(a: SpherePoint, b: SpherePoint, c: SpherePoint) -> f64 {
    let det = Vec3::triple(a.0, b.0, c.0);
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * det.atan2(den)
}

/// Corner angles and side lengths of a spherical triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalTriangleMetrics {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SphericalTriangleMetrics {
    /// Measures the triangle with corners `p, q, r`; `alpha` sits at `p` and
    /// `a` is the side `q r`.
    pub fn measure(p: SpherePoint, q: SpherePoint, r: SpherePoint) -> Result<Self, SphereError> {
        Ok(Self {
            alpha: angle_at(p, q, r)?,
            beta: angle_at(q, r, p)?,
            gamma: angle_at(r, p, q)?,
            a: arc_length(q, r)?,
            b: arc_length(r, p)?,
            c: arc_length(p, q)?,
        })
    }

    pub fn excess(&self) -> f64 {
        self.alpha + self.beta + self.gamma - PI
    }

    /// Largest residual of the side cosine rule over the three corners.
    pub fn cosine_rule_residual(&self) -> f64 {
        let r = |a: f64, b: f64, c: f64, alpha: f64| {
            (a.cos() - (b.cos() * c.cos() + b.sin() * c.sin() * alpha.cos())).abs()
        };
        r(self.a, self.b, self.c, self.alpha)
            .max(r(self.b, self.c, self.a, self.beta))
            .max(r(self.c, self.a, self.b, self.gamma))
    }

    pub fn is_proper(&self) -> bool {
        let open = |x: f64| x > 0.0 && x < PI;
        [self.alpha, self.beta, self.gamma, self.a, self.b, self.c]
            .into_iter()
            .all(open)
            && self.excess() > 0.0
            && self.excess() < 2.0 * PI
    }
}

/// A spherical diangle bounded by two half great circles through `±pole_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lune {
    pub delta: f64,
    pub pole_axis: SpherePoint,
}

impl Lune {
    /// An acute lune; `delta` must lie in `(0, π/2)`.
    pub fn new(delta: f64, pole_axis: SpherePoint) -> Result<Self, SphereError> {
        if !(delta > 0.0 && delta < PI / 2.0) {
            return Err(SphereError::OutOfRange(delta));
        }
        Ok(Self { delta, pole_axis })
    }

    pub fn poles(&self) -> (SpherePoint, SpherePoint) {
        (self.pole_axis, self.pole_axis.antipode())
    }

    pub fn area(&self) -> f64 {
        2.0 * self.delta
    }
}
