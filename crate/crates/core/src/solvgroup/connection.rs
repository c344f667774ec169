//! Levi-Civita connection of the solv metric, in both frames.
//!
//! The coordinate-basis Christoffel symbols have the closed form
//! `G^x_{xz} = G^x_{zx} = -l1`, `G^y_{yz} = G^y_{zy} = -l2`,
//! `G^z_{xx} = l1 e^{-2 l1 z}`, `G^z_{yy} = l2 e^{-2 l2 z}`,
//! all other entries zero. On the left-invariant frame the connection is the
//! constant table `nabla_{E1} E1 = l1 E3`, `nabla_{E1} E3 = -l1 E1`,
//! `nabla_{E2} E2 = l2 E3`, `nabla_{E2} E3 = -l2 E2`, zero otherwise.

use super::{Params, Point};

/// Coordinate Christoffel symbols, indexed `[k][i][j]` for `G^k_{ij}`.
pub type Christoffel = [[[f64; 3]; 3]; 3];

/// Closed-form coordinate Christoffel symbols at `p`.
pub fn christoffel_at(p: Point, params: Params) -> Christoffel {
    let l1 = params.lambda1;
    let l2 = params.lambda2;
    let mut g = [[[0.0; 3]; 3]; 3];
    g[0][0][2] = -l1;
    g[0][2][0] = -l1;
    g[1][1][2] = -l2;
    g[1][2][1] = -l2;
    g[2][0][0] = l1 * (-2.0 * l1 * p.z).exp();
    g[2][1][1] = l2 * (-2.0 * l2 * p.z).exp();
    g
}

/// Connection on constant-coefficient left-invariant fields, in the E-basis.
pub fn nabla_left_invariant(u: [f64; 3], v: [f64; 3], params: Params) -> [f64; 3] {
    let l1 = params.lambda1;
    let l2 = params.lambda2;
    [
        -l1 * u[0] * v[2],
        -l2 * u[1] * v[2],
        l1 * u[0] * v[0] + l2 * u[1] * v[1],
    ]
}

/// Covariant derivative `(nabla_U V)^k = U^i d_i V^k + G^k_{ij} U^i V^j` in
/// coordinate components, for a field `V` with given partials
/// `dv[i][k] = d_i V^k`.
pub fn coordinate_covariant_derivative(
    gamma: &Christoffel,
    u: [f64; 3],
    v: [f64; 3],
    dv: [[f64; 3]; 3],
) -> [f64; 3] {
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut acc = 0.0;
        for i in 0..3 {
            acc += u[i] * dv[i][k];
            for j in 0..3 {
                acc += gamma[k][i][j] * u[i] * v[j];
            }
        }
        out[k] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvgroup::{bracket, inner, Frame, TangentVector};

    #[test]
    fn flat_limit_vanishes() {
        let gamma = christoffel_at(Point::new(0.4, -0.2, 1.3), Params::euclidean());
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(gamma[k][i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn gamma_zxx_by_hand() {
        // G^z_{xx} = -1/2 g^{zz} d_z g_xx = l1 e^{-2 l1 z}; at z=0, l1=2 it is 2.
        let gamma = christoffel_at(Point::origin(), Params::new(2.0, 0.3));
        assert!((gamma[2][0][0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn left_invariant_table() {
        let params = Params::new(2.0, -0.7);
        let e1 = [1.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0];
        let e3 = [0.0, 0.0, 1.0];
        assert_eq!(nabla_left_invariant(e1, e1, params), [0.0, 0.0, 2.0]);
        assert_eq!(nabla_left_invariant(e1, e3, params), [-2.0, 0.0, 0.0]);
        assert_eq!(nabla_left_invariant(e2, e2, params), [0.0, 0.0, -0.7]);
        assert_eq!(nabla_left_invariant(e2, e3, params), [0.0, 0.7, 0.0]);
        assert_eq!(nabla_left_invariant(e3, e1, params), [0.0, 0.0, 0.0]);
        assert_eq!(nabla_left_invariant(e3, e3, params), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn torsion_free_on_basis() {
        let params = Params::new(1.1, -0.4);
        let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for u in basis {
            for v in basis {
                let lhs = nabla_left_invariant(u, v, params);
                let rhs = nabla_left_invariant(v, u, params);
                let br = bracket(u, v, params);
                for k in 0..3 {
                    assert!((lhs[k] - rhs[k] - br[k]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn metric_compatible_on_basis() {
        // <nabla_u v, w> + <v, nabla_u w> = 0 for orthonormal constant fields.
        let params = Params::new(0.9, 1.7);
        let p = Point::new(0.1, 0.2, -0.3);
        let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for u in basis {
            for v in basis {
                for w in basis {
                    let nv = TangentVector::left_invariant(nabla_left_invariant(u, v, params), p);
                    let nw = TangentVector::left_invariant(nabla_left_invariant(u, w, params), p);
                    let tv = TangentVector::left_invariant(v, p);
                    let tw = TangentVector::left_invariant(w, p);
                    let s = inner(nv, tw, params).unwrap() + inner(tv, nw, params).unwrap();
                    assert!(s.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn table_matches_coordinate_christoffels() {
        // nabla_{Ei} Ej computed through coordinate Christoffels and analytic
        // field derivatives, converted back to the E-frame.
        let params = Params::new(1.3, -0.6);
        let p = Point::new(0.7, -0.2, 0.45);
        let gamma = christoffel_at(p, params);
        let s1 = (params.lambda1 * p.z).exp();
        let s2 = (params.lambda2 * p.z).exp();
        // coordinate components and d_i of each E-field (z-dependence only)
        let fields = [[s1, 0.0, 0.0], [0.0, s2, 0.0], [0.0, 0.0, 1.0]];
        let dfields = [
            [[0.0; 3], [0.0; 3], [params.lambda1 * s1, 0.0, 0.0]],
            [[0.0; 3], [0.0; 3], [0.0, params.lambda2 * s2, 0.0]],
            [[0.0; 3], [0.0; 3], [0.0; 3]],
        ];
        let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                let coord =
                    coordinate_covariant_derivative(&gamma, fields[i], fields[j], dfields[j]);
                let got = TangentVector::coordinate(coord, p)
                    .to_frame(Frame::LeftInvariant, params)
                    .components;
                let want = nabla_left_invariant(basis[i], basis[j], params);
                for k in 0..3 {
                    assert!(
                        (got[k] - want[k]).abs() < 1e-12,
                        "mismatch at ({i},{j},{k}): {} vs {}",
                        got[k],
                        want[k]
                    );
                }
            }
        }
    }
}
