//! Candidate isometries with analytic differentials, and a distortion meter.

use super::{inner, mul, Frame, Params, Point, TangentVector};
use crate::error::{Error, Result};

/// The map families checked for isometry: left translations, the coordinate
/// rotations arising on the degenerate loci, and the orientation-reversing
/// reflection fixing the identity.
#[derive(Clone, Copy, Debug)]
pub enum IsometryMap {
    LeftTranslation(Point),
    /// Rotation by `angle` in the (x,y)-plane; valid for l1 = l2.
    RotationXY { angle: f64 },
    /// Rotation by `angle` in the (y,z)-plane; only offered on the l2 = 0
    /// locus. Measuring its distortion shows it is not an isometry unless
    /// the metric is flat.
    RotationYZ { angle: f64 },
    /// `(x,y,z) -> (-x,y,z)`.
    ReflectionX,
}

impl IsometryMap {
    fn validate(&self, params: Params) -> Result<()> {
        match self {
            IsometryMap::RotationXY { .. } if params.lambda1 != params.lambda2 => {
                Err(Error::IsometryIncompatible { need: "lambda1 = lambda2" })
            }
            IsometryMap::RotationYZ { .. }
                if !(params.lambda2 == 0.0 && params.lambda1 != 0.0) =>
            {
                Err(Error::IsometryIncompatible { need: "lambda2 = 0 and lambda1 != 0" })
            }
            _ => Ok(()),
        }
    }

    /// Image point and differential (constant 3x3 coordinate matrix for the
    /// rotations/reflection; `diag(e^{l1 q_z}, e^{l2 q_z}, 1)` for `L_q`).
    pub fn apply(&self, p: Point, params: Params) -> (Point, [[f64; 3]; 3]) {
        match *self {
            IsometryMap::LeftTranslation(q) => {
                let s1 = (params.lambda1 * q.z).exp();
                let s2 = (params.lambda2 * q.z).exp();
                let df = [[s1, 0.0, 0.0], [0.0, s2, 0.0], [0.0, 0.0, 1.0]];
                (mul(q, p, params), df)
            }
            IsometryMap::RotationXY { angle } => {
                let (s, c) = angle.sin_cos();
                let df = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
                (Point::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z), df)
            }
            IsometryMap::RotationYZ { angle } => {
                let (s, c) = angle.sin_cos();
                let df = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]];
                (Point::new(p.x, c * p.y - s * p.z, s * p.y + c * p.z), df)
            }
            IsometryMap::ReflectionX => {
                let df = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
                (Point::new(-p.x, p.y, p.z), df)
            }
        }
    }
}

fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += m[i][j] * v[j];
        }
    }
    out
}

/// Max over samples of `|g(dF u, dF v) - g(u, v)|`.
pub fn isometry_distortion(
    map: IsometryMap,
    samples: &[(Point, TangentVector, TangentVector)],
    params: Params,
) -> Result<f64> {
    map.validate(params)?;
    let mut worst = 0.0f64;
    for &(p, u, v) in samples {
        let uc = u.to_frame(Frame::Coordinate, params);
        let vc = v.to_frame(Frame::Coordinate, params);
        let (fp, df) = map.apply(p, params);
        let fu = TangentVector::coordinate(mat_vec(&df, uc.components), fp);
        let fv = TangentVector::coordinate(mat_vec(&df, vc.components), fp);
        let before = inner(uc, vc, params)?;
        let after = inner(fu, fv, params)?;
        worst = worst.max((after - before).abs());
    }
    Ok(worst)
}
