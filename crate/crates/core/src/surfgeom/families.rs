//! Closed-form geometry of the two reduced surface families, and the
//! discrete data carriers for curves and graph patches.
//!
//! Invariant family: the surface swept in the x-direction from a profile
//! curve `(y(s), z(s))` in arc-length form `e^{-l2 z} y' = cos(theta)`,
//! `z' = sin(theta)`. Its shape operator is diagonal with
//! `h_11 = -theta' - l2 cos(theta)`, `h_22 = -l1 e^{-2 l1 z} cos(theta)` and
//! `H = -theta' - (l1 + l2) cos(theta)`.
//!
//! Graph family: `x = f(y, z)` with
//! `sigma = (1 + f_y^2 e^{2(l2-l1)z} + f_z^2 e^{-2 l1 z})^{1/2}` and the
//! `sigma h_ij` block spelled out below.

use super::{principal_curvatures, FirstFundamentalForm, ShapeData, SurfaceJet2};
use crate::error::{Error, Result};
use crate::solvgroup::{Params, Point, TangentVector};

/// Mean curvature of the invariant family: `H = -theta' - (l1+l2) cos(theta)`.
pub fn invariant_mean_curvature(theta: f64, theta_prime: f64, params: Params) -> f64 {
    -theta_prime - (params.lambda1 + params.lambda2) * theta.cos()
}

/// Full shape data of the invariant family at height `z`.
pub fn invariant_shape(theta: f64, theta_prime: f64, z: f64, params: Params) -> ShapeData {
    let c = theta.cos();
    let h11 = -theta_prime - params.lambda2 * c;
    let h22 = -params.lambda1 * (-2.0 * params.lambda1 * z).exp() * c;
    let m22 = -params.lambda1 * c;
    ShapeData {
        h: [[h11, 0.0], [0.0, h22]],
        mixed: [[h11, 0.0], [0.0, m22]],
        mean: invariant_mean_curvature(theta, theta_prime, params),
        kappa: [h11, m22],
    }
}

/// Pointwise 2-jet of a graph function `x = f(y, z)`.
#[derive(Clone, Copy, Debug)]
pub struct GraphJet {
    pub y: f64,
    pub z: f64,
    pub f: f64,
    pub f_y: f64,
    pub f_z: f64,
    pub f_yy: f64,
    pub f_yz: f64,
    pub f_zz: f64,
}

impl GraphJet {
    /// Graph area factor; always at least one.
    pub fn sigma(&self, params: Params) -> f64 {
        let sd = ((params.lambda2 - params.lambda1) * self.z).exp();
        let s1 = (-params.lambda1 * self.z).exp();
        (1.0 + (self.f_y * sd).powi(2) + (self.f_z * s1).powi(2)).sqrt()
    }
}

/// Shape data of a graph jet together with the scale factors that the
/// translator equations consume directly.
#[derive(Clone, Copy, Debug)]
pub struct GraphShape {
    pub first: FirstFundamentalForm,
    pub sigma: f64,
    /// The products `sigma * h_ij`.
    pub sigma_h: [[f64; 2]; 2],
    /// `sigma * H`, assembled without ever dividing by sigma.
    pub sigma_mean: f64,
    pub shape: ShapeData,
}

/// Closed-form shape operator of the graph family.
pub fn graph_shape(jet: &GraphJet, params: Params) -> GraphShape {
    let l1 = params.lambda1;
    let l2 = params.lambda2;
    let s1 = (-l1 * jet.z).exp();
    let s2 = (-l2 * jet.z).exp();
    let (f_y, f_z) = (jet.f_y, jet.f_z);

    let sigma = (1.0 + (f_y * s1 / s2).powi(2) + (f_z * s1).powi(2)).sqrt();

    let e = (f_y * s1).powi(2) + s2 * s2;
    let f = f_y * f_z * s1 * s1;
    let g = (f_z * s1).powi(2) + 1.0;
    let first = FirstFundamentalForm { e, f, g };
    let det = first.det();

    let sh11 = (jet.f_yy - (f_y * f_y * l1 * s1 * s1 + l2 * s2 * s2) * f_z) * s1;
    let sh12 = (jet.f_yz - l1 * f_y + l2 * f_y - f_z * f_z * f_y * l1 * s1 * s1) * s1;
    let sh22 = (jet.f_zz - 2.0 * l1 * f_z - l1 * f_z.powi(3) * s1 * s1) * s1;
    let sigma_h = [[sh11, sh12], [sh12, sh22]];

    let sigma_mean = (g * sh11 - f * sh12 - f * sh12 + e * sh22) / det;

    let h = [[sh11 / sigma, sh12 / sigma], [sh12 / sigma, sh22 / sigma]];
    let mixed = [
        [(g * h[0][0] - f * h[1][0]) / det, (g * h[0][1] - f * h[1][1]) / det],
        [(e * h[1][0] - f * h[0][0]) / det, (e * h[1][1] - f * h[0][1]) / det],
    ];
    let mean = sigma_mean / sigma;
    let kappa = principal_curvatures(&mixed).expect("graph shape operator is self-adjoint");
    GraphShape {
        first,
        sigma,
        sigma_h,
        sigma_mean,
        shape: ShapeData { h, mixed, mean, kappa },
    }
}

/// Jet of the invariant-family immersion `(r, y(s), z(s))` at one point.
pub fn invariant_jet(theta: f64, theta_prime: f64, y: f64, z: f64, params: Params) -> SurfaceJet2 {
    let p = Point::new(0.0, y, z);
    let (s, c) = theta.sin_cos();
    let e2 = (params.lambda2 * z).exp();
    let tau1 = TangentVector::coordinate([0.0, e2 * c, s], p);
    let tau2 = TangentVector::coordinate([1.0, 0.0, 0.0], p);
    // phi_ss from differentiating the arc-length relations; phi_sr = phi_rr = 0
    let phi_ss = [
        0.0,
        e2 * (params.lambda2 * s * c - theta_prime * s),
        theta_prime * c,
    ];
    SurfaceJet2 { point: p, tau1, tau2, second: [phi_ss, [0.0; 3], [0.0; 3]] }
}

/// Jet of the graph immersion `(f(y,z), y, z)` at one point.
pub fn graph_jet(jet: &GraphJet, _params: Params) -> SurfaceJet2 {
    let p = Point::new(jet.f, jet.y, jet.z);
    SurfaceJet2 {
        point: p,
        tau1: TangentVector::coordinate([jet.f_y, 1.0, 0.0], p),
        tau2: TangentVector::coordinate([jet.f_z, 0.0, 1.0], p),
        second: [
            [jet.f_yy, 0.0, 0.0],
            [jet.f_yz, 0.0, 0.0],
            [jet.f_zz, 0.0, 0.0],
        ],
    }
}

/// Black-box jet builder: central differences of an immersion, step `h`.
pub fn fd_jet(phi: impl Fn(f64, f64) -> Point, u: f64, v: f64, h: f64) -> SurfaceJet2 {
    let p = phi(u, v);
    let d = |a: Point, b: Point, s: f64| [(a.x - b.x) / s, (a.y - b.y) / s, (a.z - b.z) / s];
    let tau1 = d(phi(u + h, v), phi(u - h, v), 2.0 * h);
    let tau2 = d(phi(u, v + h), phi(u, v - h), 2.0 * h);
    let h2 = h * h;
    let center = p.to_array();
    let pp = phi(u + h, v).to_array();
    let pm = phi(u - h, v).to_array();
    let qp = phi(u, v + h).to_array();
    let qm = phi(u, v - h).to_array();
    let mut d11 = [0.0; 3];
    let mut d22 = [0.0; 3];
    for k in 0..3 {
        d11[k] = (pp[k] - 2.0 * center[k] + pm[k]) / h2;
        d22[k] = (qp[k] - 2.0 * center[k] + qm[k]) / h2;
    }
    let a = phi(u + h, v + h).to_array();
    let b = phi(u + h, v - h).to_array();
    let c = phi(u - h, v + h).to_array();
    let e = phi(u - h, v - h).to_array();
    let mut d12 = [0.0; 3];
    for k in 0..3 {
        d12[k] = (a[k] - b[k] - c[k] + e[k]) / (4.0 * h2);
    }
    SurfaceJet2 {
        point: p,
        tau1: TangentVector::coordinate(tau1, p),
        tau2: TangentVector::coordinate(tau2, p),
        second: [d11, d12, d22],
    }
}

/// Discretized arc-length profile curve `(s_k, y_k, z_k, theta_k)` generating
/// an invariant surface.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub theta: Vec<f64>,
    pub params: Params,
}

impl ProfileCurve {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.s.len();
        if n < 2 {
            return Err(Error::TooFewNodes { need: 2, got: n });
        }
        if self.y.len() != n || self.z.len() != n || self.theta.len() != n {
            return Err(Error::TooFewNodes { need: n, got: self.y.len().min(self.z.len()) });
        }
        for k in 0..n {
            if !(self.s[k].is_finite()
                && self.y[k].is_finite()
                && self.z[k].is_finite()
                && self.theta[k].is_finite())
            {
                return Err(Error::NonFinite { what: "profile node", index: k });
            }
        }
        Ok(())
    }

    /// Max finite-difference residual of the arc-length relations
    /// `e^{-l2 z} y' = cos(theta)`, `z' = sin(theta)` at interior nodes.
    /// For a smooth curve this is O(max spacing^2).
    pub fn fd_arclength_residual(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for k in 1..n.saturating_sub(1) {
            let hm = self.s[k] - self.s[k - 1];
            let hp = self.s[k + 1] - self.s[k];
            let dy = nonuniform_central(self.y[k - 1], self.y[k], self.y[k + 1], hm, hp);
            let dz = nonuniform_central(self.z[k - 1], self.z[k], self.z[k + 1], hm, hp);
            let c = (-self.params.lambda2 * self.z[k]).exp() * dy;
            worst = worst.max((c - self.theta[k].cos()).abs());
            worst = worst.max((dz - self.theta[k].sin()).abs());
        }
        worst
    }
}

/// Second-order first derivative on a nonuniform three-point stencil.
pub(crate) fn nonuniform_central(um: f64, u0: f64, up: f64, hm: f64, hp: f64) -> f64 {
    (hm * hm * up + (hp * hp - hm * hm) * u0 - hp * hp * um) / (hm * hp * (hm + hp))
}

/// Rectangular graph patch: values of `f` on a uniform (y, z) grid,
/// stored row-major with y fastest (`index = iz * ny + iy`).
#[derive(Clone, Debug)]
pub struct GraphPatch {
    pub y0: f64,
    pub z0: f64,
    pub dy: f64,
    pub dz: f64,
    pub ny: usize,
    pub nz: usize,
    pub f: Vec<f64>,
}

impl GraphPatch {
    pub fn from_fn(
        y0: f64,
        z0: f64,
        dy: f64,
        dz: f64,
        ny: usize,
        nz: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(ny * nz);
        for iz in 0..nz {
            for iy in 0..ny {
                values.push(f(y0 + iy as f64 * dy, z0 + iz as f64 * dz));
            }
        }
        GraphPatch { y0, z0, dy, dz, ny, nz, f: values }
    }

    #[inline]
    pub fn idx(&self, iy: usize, iz: usize) -> usize {
        iz * self.ny + iy
    }

    #[inline]
    pub fn at(&self, iy: usize, iz: usize) -> f64 {
        self.f[self.idx(iy, iz)]
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        self.y0 + iy as f64 * self.dy
    }

    pub fn z_at(&self, iz: usize) -> f64 {
        self.z0 + iz as f64 * self.dz
    }

    /// Centered-difference 2-jet at an interior node.
    pub fn fd_jet_at(&self, iy: usize, iz: usize) -> GraphJet {
        debug_assert!(iy >= 1 && iy + 1 < self.ny && iz >= 1 && iz + 1 < self.nz);
        let f0 = self.at(iy, iz);
        let fyp = self.at(iy + 1, iz);
        let fym = self.at(iy - 1, iz);
        let fzp = self.at(iy, iz + 1);
        let fzm = self.at(iy, iz - 1);
        GraphJet {
            y: self.y_at(iy),
            z: self.z_at(iz),
            f: f0,
            f_y: (fyp - fym) / (2.0 * self.dy),
            f_z: (fzp - fzm) / (2.0 * self.dz),
            f_yy: (fyp - 2.0 * f0 + fym) / (self.dy * self.dy),
            f_zz: (fzp - 2.0 * f0 + fzm) / (self.dz * self.dz),
            f_yz: (self.at(iy + 1, iz + 1) - self.at(iy + 1, iz - 1) - self.at(iy - 1, iz + 1)
                + self.at(iy - 1, iz - 1))
                / (4.0 * self.dy * self.dz),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfgeom::second_form_generic;

    #[test]
    fn invariant_mean_values() {
        // cos term vanishes at theta = pi/2
        let params = Params::new(2.3, -0.9);
        assert!(invariant_mean_curvature(std::f64::consts::FRAC_PI_2, 0.0, params).abs() < 1e-15);
        // l1 + l2 = -1, theta = 0, theta' = 0 gives H = 1
        let params = Params::new(0.5, -1.5);
        assert!((invariant_mean_curvature(0.0, 0.0, params) - 1.0).abs() < 1e-15);
        // l1 = -l2 reduces to H = -theta'
        let params = Params::new(0.8, -0.8);
        assert!((invariant_mean_curvature(0.37, 1.9, params) + 1.9).abs() < 1e-15);
    }

    #[test]
    fn invariant_shape_cases() {
        let params = Params::new(1.4, 0.6);
        // theta = pi/2: only h11 = -theta' survives
        let s = invariant_shape(std::f64::consts::FRAC_PI_2, 0.7, 0.3, params);
        assert!((s.h[0][0] + 0.7).abs() < 1e-15);
        assert!(s.h[1][1].abs() < 1e-15);
        // l1 = 0: h22 = 0 for all theta, z
        let s = invariant_shape(0.9, -0.2, 1.1, Params::new(0.0, 0.6));
        assert_eq!(s.h[1][1], 0.0);
    }

    #[test]
    fn graph_shape_by_hand() {
        // f(y,z) = z at z = 0 with l1 = 1, l2 = 0:
        // sigma = sqrt(2), sigma h22 = -3, sigma h11 = 0, H = -3 / (2 sqrt 2).
        let params = Params::new(1.0, 0.0);
        let jet = GraphJet { y: 0.0, z: 0.0, f: 0.0, f_y: 0.0, f_z: 1.0, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 };
        let gs = graph_shape(&jet, params);
        assert!((gs.sigma - 2f64.sqrt()).abs() < 1e-15);
        assert!(gs.sigma_h[0][0].abs() < 1e-15);
        assert!((gs.sigma_h[1][1] + 3.0).abs() < 1e-15);
        assert!((gs.shape.mean + 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn graph_shape_trivia() {
        // constant graphs are minimal
        let params = Params::new(-0.7, 1.3);
        let jet = GraphJet { y: 0.5, z: -0.8, f: 2.0, f_y: 0.0, f_z: 0.0, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 };
        let gs = graph_shape(&jet, params);
        assert_eq!(gs.shape.mean, 0.0);

        // f linear in y only with l1 = l2: off-diagonal term vanishes
        let params = Params::new(0.9, 0.9);
        let jet = GraphJet { y: 0.1, z: 0.4, f: 0.3, f_y: 1.7, f_z: 0.0, f_yy: 0.0, f_yz: 0.0, f_zz: 0.0 };
        let gs = graph_shape(&jet, params);
        assert_eq!(gs.sigma_h[0][1], 0.0);
    }

    #[test]
    fn closed_forms_match_generic_pipeline() {
        let params = Params::new(1.2, -0.4);
        let gj = GraphJet { y: -0.3, z: 0.7, f: 0.2, f_y: 0.8, f_z: -0.6, f_yy: 1.1, f_yz: -0.9, f_zz: 0.5 };
        let closed = graph_shape(&gj, params).shape;
        let generic = second_form_generic(&graph_jet(&gj, params), params).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((closed.h[i][j] - generic.h[i][j]).abs() < 1e-12);
            }
        }
        assert!((closed.mean - generic.mean).abs() < 1e-12);

        let inv = invariant_shape(0.45, -1.3, 0.6, params);
        let generic = second_form_generic(&invariant_jet(0.45, -1.3, 0.8, 0.6, params), params).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv.h[i][j] - generic.h[i][j]).abs() < 1e-12);
            }
        }
        assert!((inv.mean - generic.mean).abs() < 1e-12);
    }

    #[test]
    fn fd_jet_matches_analytic_graph() {
        let params = Params::new(0.5, -1.0);
        let f = |y: f64, z: f64| 0.4 * y * y - 0.3 * y * z + 0.8 * z * z + 0.2 * y;
        let (y, z) = (0.3, -0.2);
        let jet = fd_jet(|u, v| Point::new(f(u, v), u, v), y, z, 1e-4);
        let exact = GraphJet {
            y,
            z,
            f: f(y, z),
            f_y: 0.8 * y - 0.3 * z + 0.2,
            f_z: -0.3 * y + 1.6 * z,
            f_yy: 0.8,
            f_yz: -0.3,
            f_zz: 1.6,
        };
        let a = second_form_generic(&jet, params).unwrap();
        let b = graph_shape(&exact, params).shape;
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.h[i][j] - b.h[i][j]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn patch_indexing_and_jets() {
        let patch = GraphPatch::from_fn(-1.0, 2.0, 0.5, 0.25, 4, 5, |y, z| y + 10.0 * z);
        assert_eq!(patch.f.len(), 20);
        assert!((patch.at(2, 3) - (patch.y_at(2) + 10.0 * patch.z_at(3))).abs() < 1e-12);
        let jet = patch.fd_jet_at(1, 1);
        assert!((jet.f_y - 1.0).abs() < 1e-12);
        assert!((jet.f_z - 10.0).abs() < 1e-12);
        assert!(jet.f_yy.abs() < 1e-10 && jet.f_zz.abs() < 1e-9 && jet.f_yz.abs() < 1e-10);
    }
}
