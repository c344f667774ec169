//! Extrinsic geometry of surfaces in the solv space.
//!
//! Sign convention (Huisken-Polden): the second fundamental form is
//! `alpha(X,Y) = g(nabla_X nu, Y) = -g(nu, nabla_X Y)`, the shape operator is
//! `A X = nabla_X nu`, and `H = trace A = kappa1 + kappa2`. Under the
//! opposite convention every `h_ij`, `H` and `kappa_i` flips sign while the
//! first fundamental form is unchanged.
//!
//! The unit normal is fixed deterministically as the *negatively oriented*
//! normal `-(tau1 x tau2)/|tau1 x tau2|` computed in the orthonormal
//! left-invariant frame. For graph jets this is the normal with negative E1
//! coefficient; for invariant-surface jets it is `-sin(theta) E2 +
//! cos(theta) E3`. Callers wanting the other side negate explicitly.

mod families;

pub use families::{
    fd_jet, graph_jet, graph_shape, invariant_jet, invariant_mean_curvature, invariant_shape,
    GraphJet, GraphPatch, GraphShape, ProfileCurve,
};
pub(crate) use families::nonuniform_central;

use crate::error::{Error, Result};
use crate::solvgroup::{
    christoffel_at, cross3, dot3, inner, Frame, Params, Point, TangentVector,
};

/// Induced metric coefficients of a two-dimensional jet.
#[derive(Clone, Copy, Debug)]
pub struct FirstFundamentalForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstFundamentalForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// Inverse matrix entries `[[g^11, g^12], [g^21, g^22]]`.
    pub fn inverse(&self) -> [[f64; 2]; 2] {
        let d = self.det();
        [[self.g / d, -self.f / d], [-self.f / d, self.e / d]]
    }
}

/// Second-order data of an immersion at one point: tangents and the
/// coordinate components of the second partials for the index pairs
/// (11), (12), (22).
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet2 {
    pub point: Point,
    pub tau1: TangentVector,
    pub tau2: TangentVector,
    pub second: [[f64; 3]; 3],
}

/// Second fundamental form, shape operator, mean and principal curvatures.
#[derive(Clone, Copy, Debug)]
pub struct ShapeData {
    /// Covariant coefficients `h_ij = alpha(tau_i, tau_j)`.
    pub h: [[f64; 2]; 2],
    /// Shape operator entries `h^i_j` in the jet basis.
    pub mixed: [[f64; 2]; 2],
    /// Scalar mean curvature `H = h^1_1 + h^2_2`.
    pub mean: f64,
    /// Principal curvatures, eigenvalues of the mixed matrix.
    pub kappa: [f64; 2],
}

/// First fundamental form of a jet. Fails on degenerate tangents.
pub fn first_form(jet: &SurfaceJet2, params: Params) -> Result<FirstFundamentalForm> {
    let e = inner(jet.tau1, jet.tau1, params)?;
    let f = inner(jet.tau1, jet.tau2, params)?;
    let g = inner(jet.tau2, jet.tau2, params)?;
    let form = FirstFundamentalForm { e, f, g };
    let det = form.det();
    if !(e > 0.0 && g > 0.0 && det > 0.0) {
        return Err(Error::DegenerateJet { det });
    }
    Ok(form)
}

/// Unit normal of a jet under the orientation convention above.
pub fn unit_normal(jet: &SurfaceJet2, params: Params) -> Result<TangentVector> {
    let a = jet.tau1.to_frame(Frame::LeftInvariant, params).components;
    let b = jet.tau2.to_frame(Frame::LeftInvariant, params).components;
    let n = cross3(a, b);
    let norm2 = dot3(n, n);
    let scale2 = dot3(a, a) * dot3(b, b);
    if !(norm2 > scale2 * 1e-24) || !norm2.is_finite() {
        return Err(Error::DegenerateJet { det: norm2 });
    }
    let inv = -1.0 / norm2.sqrt();
    Ok(TangentVector::left_invariant(
        [n[0] * inv, n[1] * inv, n[2] * inv],
        jet.point,
    ))
}

/// Eigenvalues of a 2x2 shape-operator matrix.
///
/// A genuinely negative discriminant cannot occur for operators self-adjoint
/// with respect to a positive metric; it signals corrupted data.
pub fn principal_curvatures(mixed: &[[f64; 2]; 2]) -> Result<[f64; 2]> {
    let tr = mixed[0][0] + mixed[1][1];
    let mut disc = (mixed[0][0] - mixed[1][1]).powi(2) + 4.0 * mixed[0][1] * mixed[1][0];
    if disc < 0.0 {
        let scale = tr * tr + mixed[0][1].abs() * mixed[1][0].abs() + 1.0;
        if disc < -1e-9 * scale {
            return Err(Error::ComplexEigenvalues { disc });
        }
        disc = 0.0;
    }
    let s = disc.sqrt();
    Ok([(tr + s) / 2.0, (tr - s) / 2.0])
}

/// Generic second-fundamental-form pipeline:
/// `h_ij = -g(nu, nabla_{tau_i} tau_j)` with the covariant derivative
/// expanded through coordinate Christoffel symbols, shape-operator entries
/// through the explicit (EG - F^2) inverse formulas, and the mean curvature
/// through the trace formula.
pub fn second_form_generic(jet: &SurfaceJet2, params: Params) -> Result<ShapeData> {
    let form = first_form(jet, params)?;
    let nu = unit_normal(jet, params)?;
    let gamma = christoffel_at(jet.point, params);

    let t = [
        jet.tau1.to_frame(Frame::Coordinate, params).components,
        jet.tau2.to_frame(Frame::Coordinate, params).components,
    ];

    // nabla_{tau_i} tau_j = phi_ij + Gamma(tau_i, tau_j); the Gamma
    // contraction is accumulated over symmetric index pairs so that the
    // (1,2) and (2,1) results are bitwise identical.
    let pair = |i: usize, j: usize| -> usize { i + j }; // (0,0)->0 (0,1)->1 (1,1)->2
    let mut h = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut nab = jet.second[pair(i, j)];
            for k in 0..3 {
                let mut acc = 0.0;
                for a in 0..3 {
                    acc += gamma[k][a][a] * (t[i][a] * t[j][a]);
                    for b in (a + 1)..3 {
                        acc += gamma[k][a][b] * (t[i][a] * t[j][b] + t[i][b] * t[j][a]);
                    }
                }
                nab[k] += acc;
            }
            let nv = TangentVector::coordinate(nab, jet.point);
            h[i][j] = -inner(nu, nv, params)?;
        }
    }

    let (e, f, g, det) = (form.e, form.f, form.g, form.det());
    let mixed = [
        [(g * h[0][0] - f * h[1][0]) / det, (g * h[0][1] - f * h[1][1]) / det],
        [(e * h[1][0] - f * h[0][0]) / det, (e * h[1][1] - f * h[0][1]) / det],
    ];
    // trace formula, kept as the single displayed fraction
    let mean = (g * h[0][0] - f * h[1][0] - f * h[0][1] + e * h[1][1]) / det;
    let kappa = principal_curvatures(&mixed)?;
    Ok(ShapeData { h, mixed, mean, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_plane_is_totally_geodesic() {
        let params = Params::euclidean();
        let jet = graph_jet(
            &GraphJet { y: 0.3, z: -0.2, f: 0.0, f_y: 0.0, f_z: 0.0, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 },
            params,
        );
        let form = first_form(&jet, params).unwrap();
        assert!((form.e - 1.0).abs() < 1e-15);
        assert!(form.f.abs() < 1e-15);
        assert!((form.g - 1.0).abs() < 1e-15);

        let shape = second_form_generic(&jet, params).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(shape.h[i][j].abs() < 1e-15);
            }
        }
        assert!(shape.mean.abs() < 1e-15);
        assert_eq!(shape.kappa, [0.0, 0.0]);
    }

    #[test]
    fn normal_orientation() {
        let params = Params::new(0.8, -0.3);
        // Flat graph: normal is -E1.
        let jet = graph_jet(
            &GraphJet { y: 0.1, z: 0.4, f: 0.0, f_y: 0.0, f_z: 0.0, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 },
            params,
        );
        let nu = unit_normal(&jet, params).unwrap();
        assert_eq!(nu.frame, Frame::LeftInvariant);
        assert!((nu.components[0] + 1.0).abs() < 1e-14);
        assert!(nu.components[1].abs() < 1e-14 && nu.components[2].abs() < 1e-14);

        // Horizontal invariant curve: normal is E3.
        let jet = invariant_jet(0.0, 0.7, 0.2, -0.5, params);
        let nu = unit_normal(&jet, params).unwrap();
        assert!((nu.components[2] - 1.0).abs() < 1e-14);

        // General jet: unit length and orthogonal to both tangents.
        let gj = GraphJet { y: 0.2, z: 0.6, f: 0.1, f_y: 0.7, f_z: -1.1, f_yy: 0.3, f_yz: 0.2, f_zz: -0.4 };
        let jet = graph_jet(&gj, params);
        let nu = unit_normal(&jet, params).unwrap();
        assert!((inner(nu, nu, params).unwrap() - 1.0).abs() < 1e-13);
        assert!(inner(nu, jet.tau1, params).unwrap().abs() < 1e-13);
        assert!(inner(nu, jet.tau2, params).unwrap().abs() < 1e-13);
    }

    #[test]
    fn degenerate_jet_rejected() {
        let params = Params::euclidean();
        let p = Point::origin();
        let jet = SurfaceJet2 {
            point: p,
            tau1: TangentVector::coordinate([1.0, 0.0, 0.0], p),
            tau2: TangentVector::coordinate([2.0, 0.0, 0.0], p),
            second: [[0.0; 3]; 3],
        };
        assert!(matches!(first_form(&jet, params), Err(Error::DegenerateJet { .. })));
        assert!(unit_normal(&jet, params).is_err());
    }

    #[test]
    fn graph_first_form_closed_form() {
        let params = Params::new(0.9, -1.3);
        let gj = GraphJet { y: 0.4, z: -0.6, f: 0.1, f_y: 1.2, f_z: -0.7, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 };
        let form = first_form(&graph_jet(&gj, params), params).unwrap();
        let s1sq = (-2.0 * params.lambda1 * gj.z).exp();
        let s2sq = (-2.0 * params.lambda2 * gj.z).exp();
        assert!((form.e - (gj.f_y * gj.f_y * s1sq + s2sq)).abs() < 1e-13);
        assert!((form.f - gj.f_y * gj.f_z * s1sq).abs() < 1e-13);
        assert!((form.g - (gj.f_z * gj.f_z * s1sq + 1.0)).abs() < 1e-13);
    }

    #[test]
    fn invariant_first_form_closed_form() {
        let params = Params::new(1.1, -0.7);
        let z = 0.35;
        let jet = invariant_jet(0.6, -0.2, 0.9, z, params);
        let form = first_form(&jet, params).unwrap();
        assert!((form.e - 1.0).abs() < 1e-13);
        assert!(form.f.abs() < 1e-13);
        assert!((form.g - (-2.0 * params.lambda1 * z).exp()).abs() < 1e-13);
    }

    #[test]
    fn invariant_mean_by_hand() {
        // theta' = 0, theta = 0, l1 = 1, l2 = 2 gives H = -3.
        let params = Params::new(1.0, 2.0);
        let jet = invariant_jet(0.0, 0.0, 0.4, -0.3, params);
        let shape = second_form_generic(&jet, params).unwrap();
        assert!((shape.mean + 3.0).abs() < 1e-12);
    }

    #[test]
    fn euclidean_paraboloid_curvature() {
        // f(y,z) = (y^2 + z^2)/2 at the origin, normal on the -E1 side: the
        // surface bends away from nu, so kappa = +1 twice and H = +2 under
        // this sign convention.
        let params = Params::euclidean();
        let gj = GraphJet { y: 0.0, z: 0.0, f: 0.0, f_y: 0.0, f_z: 0.0, f_yy: 1.0, f_yz: 0.0, f_zz: 1.0 };
        let shape = second_form_generic(&graph_jet(&gj, params), params).unwrap();
        assert!((shape.mean - 2.0).abs() < 1e-12);
        assert!((shape.kappa[0] - 1.0).abs() < 1e-12);
        assert!((shape.kappa[1] - 1.0).abs() < 1e-12);
        let closed = graph_shape(&gj, params);
        assert!((closed.shape.mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn principal_curvature_cases() {
        assert_eq!(principal_curvatures(&[[0.0; 2]; 2]).unwrap(), [0.0, 0.0]);
        let k = principal_curvatures(&[[2.0, 0.0], [0.0, -1.0]]).unwrap();
        assert_eq!(k, [2.0, -1.0]);
        assert!(matches!(
            principal_curvatures(&[[0.0, -1.0], [1.0, 0.0]]),
            Err(Error::ComplexEigenvalues { .. })
        ));
    }
}
