//! The ambient solvable group: R^3 with the product
//! `(x1,y1,z1)(x2,y2,z2) = (x1 + e^{l1 z1} x2, y1 + e^{l2 z1} y2, z1 + z2)`
//! and the left-invariant metric
//! `g = e^{-2 l1 z} dx^2 + e^{-2 l2 z} dy^2 + dz^2`,
//! for a parameter pair (l1, l2).
//!
//! Two frames are in play everywhere: the coordinate frame (dx, dy, dz) and
//! the orthonormal left-invariant frame
//! `E1 = e^{l1 z} dx, E2 = e^{l2 z} dy, E3 = dz`.
//! Every tangent vector carries an explicit frame tag plus its base point;
//! conversions are always done through [`TangentVector::to_frame`] so that
//! frame mix-ups fail loudly instead of silently scaling components.

mod connection;
mod killing;
mod isometry;

pub use connection::{christoffel_at, coordinate_covariant_derivative, nabla_left_invariant, Christoffel};
pub use isometry::{isometry_distortion, IsometryMap};
pub use killing::{
    is_skew_derivation, killing_coordinate_field, killing_eval, killing_residual,
    lie_derivative_metric, lie_derivative_metric_field, lie_derivative_metric_field_richardson,
    KillingSpec, Rotational,
};

use crate::error::{Error, Result};

/// The pair (lambda1, lambda2) selecting the group product and metric.
///
/// Both Euclidean limits are allowed: (0, 0) gives flat R^3, which is used as
/// a validation oracle throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Params {
    pub fn new(lambda1: f64, lambda2: f64) -> Self {
        assert!(
            lambda1.is_finite() && lambda2.is_finite(),
            "group parameters must be finite"
        );
        Params { lambda1, lambda2 }
    }

    pub fn euclidean() -> Self {
        Params::new(0.0, 0.0)
    }
}

/// A point of the group manifold in its global coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub fn origin() -> Self {
        Point::new(0.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Frame a tangent vector's components refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// Components along dx, dy, dz.
    Coordinate,
    /// Components along the orthonormal fields E1, E2, E3.
    LeftInvariant,
}

/// A tangent vector with explicit frame tag and base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub components: [f64; 3],
    pub frame: Frame,
    pub base: Point,
}

impl TangentVector {
    pub fn coordinate(components: [f64; 3], base: Point) -> Self {
        TangentVector { components, frame: Frame::Coordinate, base }
    }

    pub fn left_invariant(components: [f64; 3], base: Point) -> Self {
        TangentVector { components, frame: Frame::LeftInvariant, base }
    }

    /// Converts components to the requested frame at the vector's base point.
    ///
    /// Coordinate components are `diag(e^{l1 z}, e^{l2 z}, 1)` times the
    /// left-invariant ones; the conversion round-trips to machine precision.
    pub fn to_frame(self, frame: Frame, params: Params) -> TangentVector {
        if self.frame == frame {
            return self;
        }
        let z = self.base.z;
        let s1 = (params.lambda1 * z).exp();
        let s2 = (params.lambda2 * z).exp();
        let [a, b, c] = self.components;
        let components = match frame {
            Frame::Coordinate => [a * s1, b * s2, c],
            Frame::LeftInvariant => [a / s1, b / s2, c],
        };
        TangentVector { components, frame, base: self.base }
    }
}

/// Group product.
pub fn mul(p: Point, q: Point, params: Params) -> Point {
    Point::new(
        p.x + (params.lambda1 * p.z).exp() * q.x,
        p.y + (params.lambda2 * p.z).exp() * q.y,
        p.z + q.z,
    )
}

/// Group inverse: `(x,y,z)^{-1} = (-e^{-l1 z} x, -e^{-l2 z} y, -z)`.
pub fn inv(p: Point, params: Params) -> Point {
    Point::new(
        -(-params.lambda1 * p.z).exp() * p.x,
        -(-params.lambda2 * p.z).exp() * p.y,
        -p.z,
    )
}

/// The orthonormal left-invariant frame at `p`, in coordinate components.
pub fn left_frame(p: Point, params: Params) -> (TangentVector, TangentVector, TangentVector) {
    let s1 = (params.lambda1 * p.z).exp();
    let s2 = (params.lambda2 * p.z).exp();
    (
        TangentVector::coordinate([s1, 0.0, 0.0], p),
        TangentVector::coordinate([0.0, s2, 0.0], p),
        TangentVector::coordinate([0.0, 0.0, 1.0], p),
    )
}

/// The right-invariant frame at `p` (generators of left translations), in
/// coordinate components: `(dx, dy, l1 x dx + l2 y dy + dz)`.
pub fn right_frame(p: Point, params: Params) -> (TangentVector, TangentVector, TangentVector) {
    (
        TangentVector::coordinate([1.0, 0.0, 0.0], p),
        TangentVector::coordinate([0.0, 1.0, 0.0], p),
        TangentVector::coordinate([params.lambda1 * p.x, params.lambda2 * p.y, 1.0], p),
    )
}

/// Lie bracket of constant-coefficient left-invariant fields, in the E-basis.
///
/// Bilinear extension of `[E3,E1] = l1 E1`, `[E3,E2] = l2 E2`, zero otherwise.
pub fn bracket(u: [f64; 3], v: [f64; 3], params: Params) -> [f64; 3] {
    let c31 = u[2] * v[0] - u[0] * v[2];
    let c32 = u[2] * v[1] - u[1] * v[2];
    [params.lambda1 * c31, params.lambda2 * c32, 0.0]
}

/// Metric components in the coordinate basis at `p`:
/// `diag(e^{-2 l1 z}, e^{-2 l2 z}, 1)`.
pub fn metric_at(p: Point, params: Params) -> [[f64; 3]; 3] {
    let g11 = (-2.0 * params.lambda1 * p.z).exp();
    let g22 = (-2.0 * params.lambda2 * p.z).exp();
    [[g11, 0.0, 0.0], [0.0, g22, 0.0], [0.0, 0.0, 1.0]]
}

/// Inverse metric components in the coordinate basis at `p`.
pub fn metric_inverse_at(p: Point, params: Params) -> [[f64; 3]; 3] {
    let g11 = (2.0 * params.lambda1 * p.z).exp();
    let g22 = (2.0 * params.lambda2 * p.z).exp();
    [[g11, 0.0, 0.0], [0.0, g22, 0.0], [0.0, 0.0, 1.0]]
}

/// Riemannian inner product of two tangent vectors at the same base point.
pub fn inner(u: TangentVector, v: TangentVector, params: Params) -> Result<f64> {
    if u.base != v.base {
        return Err(Error::MismatchedBasePoints);
    }
    let a = u.to_frame(Frame::LeftInvariant, params).components;
    let b = v.to_frame(Frame::LeftInvariant, params).components;
    Ok(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
