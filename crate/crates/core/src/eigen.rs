//! Characteristic decomposition of the Ten-Moment flux Jacobians.
//!
//! The eigenvectors are built in primitive variables, where the Jacobian has a
//! sparse structure, and lifted to conserved variables with the closed-form
//! change-of-variables matrices. The y-direction system is the x-direction
//! system of the axis-swapped state.

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::state::{cons_to_prim, swap_axes, ConservedState, PrimitiveState, Vec6};

/// Row-major 6x6 matrix.
pub type Mat6 = [[f64; 6]; 6];

pub const IDENTITY: Mat6 = {
    let mut m = [[0.0; 6]; 6];
    let mut i = 0;
    while i < 6 {
        m[i][i] = 1.0;
        i += 1;
    }
    m
};

/// Eigenvalues in ascending order with the matching right eigenvectors as
/// columns of `right` and left eigenvectors as rows of `left`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    pub lambdas: Vec6,
    pub right: Mat6,
    pub left: Mat6,
}

impl EigenDecomposition {
    /// Componentwise "decomposition" used when the face state is not admissible.
    pub const fn identity() -> Self {
        Self { lambdas: [0.0; 6], right: IDENTITY, left: IDENTITY }
    }
}

/// Arithmetic mean of the two states adjacent to a face.
#[inline]
pub fn face_average(left: &ConservedState, right: &ConservedState) -> ConservedState {
    ConservedState(core::array::from_fn(|k| 0.5 * (left.0[k] + right.0[k])))
}

#[inline]
pub fn mat_vec(m: &Mat6, v: &Vec6) -> Vec6 {
    core::array::from_fn(|r| {
        let row = &m[r];
        row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3] + row[4] * v[4] + row[5] * v[5]
    })
}

pub fn mat_mul(a: &Mat6, b: &Mat6) -> Mat6 {
    core::array::from_fn(|r| core::array::from_fn(|c| (0..6).map(|k| a[r][k] * b[k][c]).sum()))
}

/// `L q`: projection onto the characteristic fields.
#[inline]
pub fn to_characteristic(left: &Mat6, q: &Vec6) -> Vec6 {
    mat_vec(left, q)
}

/// `R w`: back to conserved components.
#[inline]
pub fn from_characteristic(right: &Mat6, w: &Vec6) -> Vec6 {
    mat_vec(right, w)
}

/// Eigensystem of `df/du` at `u`.
pub fn eigen_x(u: &ConservedState) -> Result<EigenDecomposition> {
    let w = cons_to_prim(u)?;
    if !(w.rho > 0.0) || !(w.p11 > 0.0) {
        return Err(Error::NonAdmissible { rho: w.rho, pressure: w.p11 });
    }
    Ok(eigen_x_prim(&w))
}

/// Eigensystem of `dg/du` at `u`.
pub fn eigen_y(u: &ConservedState) -> Result<EigenDecomposition> {
    let ex = eigen_x(&u.swap_axes())?;
    // g(u) = P f(P u) with P the axis swap, so dg/du = P J_x(P u) P.
    let mut right = [[0.0; 6]; 6];
    let mut left = [[0.0; 6]; 6];
    for c in 0..6 {
        let col: Vec6 = core::array::from_fn(|r| ex.right[r][c]);
        let col = swap_axes(col);
        for r in 0..6 {
            right[r][c] = col[r];
        }
        left[c] = swap_axes(ex.left[c]);
    }
    Ok(EigenDecomposition { lambdas: ex.lambdas, right, left })
}

pub(crate) fn eigen_x_prim(w: &PrimitiveState) -> EigenDecomposition {
    let PrimitiveState { rho, v1, v2, p11, p12, p22 } = *w;
    let cs = sqrt(p11 / rho);
    let cf = sqrt(3.0) * cs;
    let shear = p12 / p11;

    let lambdas = [v1 - cf, v1 - cs, v1, v1, v1 + cs, v1 + cf];

    // Right eigenvectors of the primitive Jacobian, one per column.
    let fast_p22 = p22 + 2.0 * p12 * shear;
    let rv: [Vec6; 6] = [
        [rho, -cf, -cf * shear, 3.0 * p11, 3.0 * p12, fast_p22],
        [0.0, 0.0, -cs, 0.0, p11, 2.0 * p12],
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, cs, 0.0, p11, 2.0 * p12],
        [rho, cf, cf * shear, 3.0 * p11, 3.0 * p12, fast_p22],
    ];
    // Matching left eigenvectors (rows of the inverse).
    let inv_p11 = 1.0 / p11;
    let half_fast = 0.5 / cf;
    let half_slow = 0.5 / cs;
    let lv: [Vec6; 6] = [
        [0.0, -half_fast, 0.0, inv_p11 / 6.0, 0.0, 0.0],
        [0.0, half_slow * shear, -half_slow, -0.5 * shear * inv_p11, 0.5 * inv_p11, 0.0],
        [1.0, 0.0, 0.0, -rho * inv_p11 / 3.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, (4.0 * shear * shear - p22 * inv_p11) / 3.0, -2.0 * shear, 1.0],
        [0.0, -half_slow * shear, half_slow, -0.5 * shear * inv_p11, 0.5 * inv_p11, 0.0],
        [0.0, half_fast, 0.0, inv_p11 / 6.0, 0.0, 0.0],
    ];

    let mut right = [[0.0; 6]; 6];
    for (c, r) in rv.iter().enumerate() {
        let col = lift_right(r, rho, v1, v2);
        for k in 0..6 {
            right[k][c] = col[k];
        }
    }
    let left = lv.map(|l| lift_left(&l, rho, v1, v2));
    EigenDecomposition { lambdas, right, left }
}

/// `(du/dV) r` for a primitive-space vector `r`.
#[inline]
fn lift_right(r: &Vec6, rho: f64, v1: f64, v2: f64) -> Vec6 {
    let [dr, a, b, q11, q12, q22] = *r;
    [
        dr,
        v1 * dr + rho * a,
        v2 * dr + rho * b,
        0.5 * v1 * v1 * dr + rho * v1 * a + 0.5 * q11,
        0.5 * v1 * v2 * dr + 0.5 * rho * (v2 * a + v1 * b) + 0.5 * q12,
        0.5 * v2 * v2 * dr + rho * v2 * b + 0.5 * q22,
    ]
}

/// `l (dV/du)` for a primitive-space row vector `l`.
#[inline]
fn lift_left(l: &Vec6, rho: f64, v1: f64, v2: f64) -> Vec6 {
    let [lr, la, lb, l11, l12, l22] = *l;
    [
        lr - (la * v1 + lb * v2) / rho + l11 * v1 * v1 + l12 * v1 * v2 + l22 * v2 * v2,
        la / rho - 2.0 * l11 * v1 - l12 * v2,
        lb / rho - l12 * v1 - 2.0 * l22 * v2,
        2.0 * l11,
        2.0 * l12,
        2.0 * l22,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{flux_x, flux_y, prim_to_cons};
    use approx::assert_relative_eq;

    fn prim(a: Vec6) -> ConservedState {
        prim_to_cons(&PrimitiveState::from_array(a))
    }

    #[test]
    fn eigenvalues_at_rest() {
        let e = eigen_x(&prim([1., 0., 0., 3., 0., 3.])).unwrap();
        let s3 = 3f64.sqrt();
        let expected = [-3., -s3, 0., 0., s3, 3.];
        for k in 0..6 {
            assert_relative_eq!(e.lambdas[k], expected[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn galilean_shift_moves_all_eigenvalues() {
        let a = eigen_x(&prim([1.2, 0.3, 0.1, 2., 0.4, 1.])).unwrap();
        let b = eigen_x(&prim([1.2, 1.8, 0.1, 2., 0.4, 1.])).unwrap();
        for k in 0..6 {
            assert_relative_eq!(b.lambdas[k] - a.lambdas[k], 1.5, epsilon = 1e-13);
        }
    }

    #[test]
    fn left_times_right_is_identity() {
        let e = eigen_x(&prim([0.7, -1.1, 0.4, 1.3, -0.6, 2.2])).unwrap();
        let p = mat_mul(&e.left, &e.right);
        for r in 0..6 {
            for c in 0..6 {
                assert!((p[r][c] - IDENTITY[r][c]).abs() < 1e-12, "{r},{c}: {}", p[r][c]);
            }
        }
    }

    #[test]
    fn characteristic_round_trip() {
        let e = eigen_y(&prim([0.7, -1.1, 0.4, 1.3, -0.6, 2.2])).unwrap();
        let q = [0.3, -2.0, 1.0, 4.0, 0.1, -0.7];
        let back = from_characteristic(&e.right, &to_characteristic(&e.left, &q));
        for k in 0..6 {
            assert_relative_eq!(back[k], q[k], epsilon = 1e-12);
        }
        assert_eq!(to_characteristic(&IDENTITY, &q), q);
    }

    #[test]
    fn rejects_inadmissible_state() {
        assert!(eigen_x(&prim([1., 0., 0., -1., 0., 1.])).is_err());
        assert!(eigen_y(&prim([1., 0., 0., 1., 0., -1.])).is_err());
    }

    #[test]
    fn face_average_is_componentwise_mean() {
        let l = prim([1., 0., 0., 2., 0.05, 0.6]);
        let r = prim([0.125, 0., 0., 0.2, 0.1, 0.2]);
        let m = face_average(&l, &r);
        for k in 0..6 {
            assert_eq!(m.0[k], 0.5 * (l.0[k] + r.0[k]));
        }
        assert_eq!(face_average(&l, &l), l);
    }

    #[test]
    fn eigenvectors_diagonalize_the_analytic_flux() {
        // Quick check against a central difference of the flux; the thorough
        // randomized version lives in the integration tests.
        let u = prim([1.1, 0.4, -0.3, 1.7, 0.2, 0.9]);
        for (e, f) in [
            (eigen_x(&u).unwrap(), flux_x as fn(&ConservedState) -> Result<Vec6>),
            (eigen_y(&u).unwrap(), flux_y as fn(&ConservedState) -> Result<Vec6>),
        ] {
            let h = 1e-6;
            for c in 0..6 {
                let r: Vec6 = core::array::from_fn(|k| e.right[k][c]);
                let plus = f(&ConservedState(core::array::from_fn(|k| u.0[k] + h * r[k]))).unwrap();
                let minus = f(&ConservedState(core::array::from_fn(|k| u.0[k] - h * r[k]))).unwrap();
                for k in 0..6 {
                    let jr = (plus[k] - minus[k]) / (2.0 * h);
                    assert!((jr - e.lambdas[c] * r[k]).abs() < 1e-6, "col {c} comp {k}");
                }
            }
        }
    }
}
