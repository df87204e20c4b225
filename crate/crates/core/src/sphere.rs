//! Coordinates, projections and measures on the unit sphere.
//!
//! Conventions used throughout the crate:
//!
//! * yaw is longitude in `[-π, π)`, `0` at the centre of the equirectangular
//!   image, increasing to the right;
//! * pitch is latitude in `[-π/2, π/2]`, `+π/2` at the top row;
//! * the Cartesian frame is `x` right, `y` up, `z` forward, so `(0, 0)` maps
//!   to `(0, 0, 1)`;
//! * continuous pixel coordinates put the centre of pixel `i` at `i + 0.5`.
//!
//! All angles in this module are radians.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum angular distance from the antipode accepted by [`slerp`].
pub const ANTIPODAL_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("pitch {0} rad outside [-pi/2, pi/2]")]
    PitchOutOfRange(f64),
    #[error("non-finite angle")]
    NonFinite,
    #[error("pixel coordinate ({x}, {y}) outside {width}x{height} frame")]
    PixelOutOfRange { x: f64, y: f64, width: u32, height: u32 },
    #[error("equirectangular frame must be 2:1, got {width}x{height}")]
    NotEquirect { width: u32, height: u32 },
    #[error("slerp endpoints are antipodal")]
    DegenerateArc,
    #[error("invalid viewport: {0}")]
    Viewport(String),
    #[error("invalid pitch band [{0}, {1}]")]
    PitchBand(f64, f64),
}

/// Wrap an angle into `[-π, π)`.
pub fn wrap_yaw(yaw: f64) -> f64 {
    let w = (yaw + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    yaw: f64,
    pitch: f64,
}

impl SphericalPoint {
    pub const FORWARD: SphericalPoint = SphericalPoint { yaw: 0.0, pitch: 0.0 };

    /// Builds a point, wrapping yaw and rejecting pitch outside `[-π/2, π/2]`.
    pub fn new(yaw: f64, pitch: f64) -> Result<Self, GeomError> {
        if !yaw.is_finite() || !pitch.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&pitch) {
            return Err(GeomError::PitchOutOfRange(pitch));
        }
        Ok(Self { yaw: wrap_yaw(yaw), pitch })
    }

    pub fn from_degrees(yaw_deg: f64, pitch_deg: f64) -> Result<Self, GeomError> {
        Self::new(yaw_deg.to_radians(), pitch_deg.to_radians())
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn to_vec3(&self) -> Vec3 {
        let (sy, cy) = self.yaw.sin_cos();
        let (sp, cp) = self.pitch.sin_cos();
        Vec3::new(cp * sy, sp, cp * cy)
    }

    /// Direction of a non-zero vector. The zero vector maps to [`Self::FORWARD`].
    pub fn from_vec3(v: Vec3) -> Self {
        let horiz = v.x.hypot(v.z);
        if horiz == 0.0 && v.y == 0.0 {
            return Self::FORWARD;
        }
        let pitch = v.y.atan2(horiz);
        let yaw = if horiz == 0.0 { 0.0 } else { wrap_yaw(v.x.atan2(v.z)) };
        Self { yaw, pitch }
    }

    /// The same direction turned about the vertical axis by `delta` radians.
    pub fn rotate_yaw(&self, delta: f64) -> Self {
        Self { yaw: wrap_yaw(self.yaw + delta), pitch: self.pitch }
    }

    pub fn antipode(&self) -> Self {
        Self { yaw: wrap_yaw(self.yaw + PI), pitch: -self.pitch }
    }
}

/// Minimal 3-vector for direction arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self.scale(1.0 / n)
        }
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;

    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;

    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

fn check_equirect(width: u32, height: u32) -> Result<(), GeomError> {
    if height == 0 || width != 2 * height {
        return Err(GeomError::NotEquirect { width, height });
    }
    Ok(())
}

/// Continuous equirectangular pixel coordinate to direction.
pub fn pix_to_sph(x: f64, y: f64, width: u32, height: u32) -> Result<SphericalPoint, GeomError> {
    check_equirect(width, height)?;
    let (w, h) = (width as f64, height as f64);
    if !(0.0..w).contains(&x) || !(0.0..h).contains(&y) {
        return Err(GeomError::PixelOutOfRange { x, y, width, height });
    }
    SphericalPoint::new(TAU * x / w - PI, FRAC_PI_2 - PI * y / h)
}

/// Direction to continuous equirectangular pixel coordinate.
///
/// `x` lies in `[0, width)`; `y` lies in `[0, height]`, reaching `height` only
/// at the south pole.
pub fn sph_to_pix(p: SphericalPoint, width: u32, height: u32) -> (f64, f64) {
    let (w, h) = (width as f64, height as f64);
    let x = (p.yaw + PI) / TAU * w;
    let y = (FRAC_PI_2 - p.pitch) / PI * h;
    (x, y)
}

/// Great-circle distance in `[0, π]`.
pub fn angular_distance(a: SphericalPoint, b: SphericalPoint) -> f64 {
    let (va, vb) = (a.to_vec3(), b.to_vec3());
    va.cross(vb).norm().atan2(va.dot(vb))
}

/// Constant-speed interpolation along the minor great-circle arc.
pub fn slerp(a: SphericalPoint, b: SphericalPoint, t: f64) -> Result<SphericalPoint, GeomError> {
    let theta = angular_distance(a, b);
    if theta >= PI - ANTIPODAL_EPS {
        return Err(GeomError::DegenerateArc);
    }
    if t == 0.0 {
        return Ok(a);
    }
    if t == 1.0 {
        return Ok(b);
    }
    let (va, vb) = (a.to_vec3(), b.to_vec3());
    if theta < 1e-12 {
        return Ok(SphericalPoint::from_vec3(va.scale(1.0 - t) + vb.scale(t)));
    }
    let s = theta.sin();
    let wa = ((1.0 - t) * theta).sin() / s;
    let wb = (t * theta).sin() / s;
    Ok(SphericalPoint::from_vec3(va.scale(wa) + vb.scale(wb)))
}

/// Moves from `from` toward `to` by at most `max_step` radians.
///
/// Unlike [`slerp`] this never fails: for antipodal targets the step is taken
/// along the horizontal direction at `from`.
pub fn step_toward(from: SphericalPoint, to: SphericalPoint, max_step: f64) -> SphericalPoint {
    let dist = angular_distance(from, to);
    if dist <= max_step {
        return to;
    }
    let vf = from.to_vec3();
    let mut axis = vf.cross(to.to_vec3());
    if axis.norm() < 1e-12 {
        axis = vf.cross(yaw_tangent(from));
    }
    let axis = axis.normalized();
    // rotate vf about axis by max_step (Rodrigues, axis ⟂ vf)
    let (s, c) = max_step.sin_cos();
    let rotated = vf.scale(c) + axis.cross(vf).scale(s);
    SphericalPoint::from_vec3(rotated)
}

/// Unit vector pointing toward increasing yaw at `p`; well defined at the poles.
fn yaw_tangent(p: SphericalPoint) -> Vec3 {
    let (sy, cy) = p.yaw.sin_cos();
    Vec3::new(cy, 0.0, -sy)
}

/// Normalised mean of unit vectors, or `None` when the mean vanishes.
pub fn spherical_centroid<I>(points: I) -> Option<SphericalPoint>
where
    I: IntoIterator<Item = (SphericalPoint, f64)>,
{
    let mut acc = Vec3::default();
    for (p, w) in points {
        acc = acc + p.to_vec3().scale(w);
    }
    if acc.norm() < 1e-9 {
        None
    } else {
        Some(SphericalPoint::from_vec3(acc))
    }
}

/// A horizon-level perspective camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    center: SphericalPoint,
    hfov: f64,
    aspect: f64,
}

/// Result of projecting a direction into a [`Viewport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Normalised image coordinates; `[-1, 1]` spans the field of view,
    /// `v` grows upward.
    Image { u: f64, v: f64 },
    Behind,
}

impl Projection {
    pub fn is_inside(&self) -> bool {
        matches!(*self, Projection::Image { u, v } if u.abs() <= 1.0 && v.abs() <= 1.0)
    }
}

/// Orthonormal camera frame: forward, right, up.
#[derive(Debug, Clone, Copy)]
pub struct CameraBasis {
    pub forward: Vec3,
    pub right: Vec3,
    pub up: Vec3,
}

impl Viewport {
    pub fn new(center: SphericalPoint, hfov: f64, aspect: f64) -> Result<Self, GeomError> {
        if !(hfov > 0.0 && hfov < PI) {
            return Err(GeomError::Viewport(format!("hfov {hfov} outside (0, pi)")));
        }
        if !(aspect > 0.0 && aspect.is_finite()) {
            return Err(GeomError::Viewport(format!("aspect {aspect} must be positive")));
        }
        Ok(Self { center, hfov, aspect })
    }

    pub fn center(&self) -> SphericalPoint {
        self.center
    }

    pub fn hfov(&self) -> f64 {
        self.hfov
    }

    pub fn aspect(&self) -> f64 {
        self.aspect
    }

    pub fn vfov(&self) -> f64 {
        2.0 * ((self.hfov / 2.0).tan() / self.aspect).atan()
    }

    /// `tan(hfov/2)` and `tan(vfov/2)`.
    pub fn half_extents(&self) -> (f64, f64) {
        let tx = (self.hfov / 2.0).tan();
        (tx, tx / self.aspect)
    }

    pub fn basis(&self) -> CameraBasis {
        let forward = self.center.to_vec3();
        let right = yaw_tangent(self.center);
        let up = forward.cross(right);
        CameraBasis { forward, right, up }
    }
}

/// Rectilinear projection of `p` onto the tangent plane at the viewport centre.
pub fn gnomonic_project(view: &Viewport, p: SphericalPoint) -> Projection {
    project_vec(view, &view.basis(), p.to_vec3())
}

pub(crate) fn project_vec(view: &Viewport, b: &CameraBasis, d: Vec3) -> Projection {
    let z = d.dot(b.forward);
    if z <= 1e-12 {
        return Projection::Behind;
    }
    let (tx, ty) = view.half_extents();
    Projection::Image { u: d.dot(b.right) / z / tx, v: d.dot(b.up) / z / ty }
}

/// Inverse of [`gnomonic_project`] for normalised image coordinates.
pub fn gnomonic_unproject(view: &Viewport, u: f64, v: f64) -> SphericalPoint {
    let b = view.basis();
    let (tx, ty) = view.half_extents();
    let d = b.forward + b.right.scale(u * tx) + b.up.scale(v * ty);
    SphericalPoint::from_vec3(d)
}

/// A yaw interval stored as start plus span, so seam crossings need no
/// special casing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YawInterval {
    pub start: f64,
    /// Radians in `[0, 2π]`; zero means an empty interval.
    pub span: f64,
}

impl YawInterval {
    /// Interval swept counter-clockwise from `yaw1` to `yaw2`.
    ///
    /// A positive difference that is a whole number of turns is a full turn;
    /// equal endpoints give an empty interval.
    pub fn between(yaw1: f64, yaw2: f64) -> Self {
        let d = yaw2 - yaw1;
        let mut span = d.rem_euclid(TAU);
        if span == 0.0 && d > 0.0 {
            span = TAU;
        }
        Self { start: wrap_yaw(yaw1), span }
    }

    pub fn contains(&self, yaw: f64) -> bool {
        let off = (yaw - self.start).rem_euclid(TAU);
        off < self.span || self.span >= TAU
    }
}

/// Solid angle of a latitude/longitude rectangle as a fraction of `4π`.
pub fn rect_solid_angle_fraction(
    yaw1: f64,
    yaw2: f64,
    pitch1: f64,
    pitch2: f64,
) -> Result<f64, GeomError> {
    band_solid_angle_fraction(YawInterval::between(yaw1, yaw2), pitch1, pitch2)
}

/// Same as [`rect_solid_angle_fraction`] with an explicit yaw interval.
pub fn band_solid_angle_fraction(
    yaw: YawInterval,
    pitch1: f64,
    pitch2: f64,
) -> Result<f64, GeomError> {
    let in_range = |p: f64| (-FRAC_PI_2..=FRAC_PI_2).contains(&p);
    if !in_range(pitch1) || !in_range(pitch2) || pitch1 > pitch2 {
        return Err(GeomError::PitchBand(pitch1, pitch2));
    }
    let span = yaw.span.clamp(0.0, TAU);
    Ok(span * (pitch2.sin() - pitch1.sin()) / (4.0 * PI))
}
