//! Scaling limiter for the split face states.
//!
//! At each face the reconstructed states `w+_{i+1/2}` and `w-_{i+1/2}` are
//! pulled toward the admissible cell anchors `w+(u_i)` and `w-(u_{i+1})` until
//! both the face state and the interior quadrature remainder `q*` satisfy the
//! density, diagonal-pressure and determinant margins. Together with the CFL
//! bound [`GaussLobatto4::ENDPOINT_WEIGHT`] this makes the forward-Euler update
//! a convex combination of admissible states.

use crate::error::{Error, Result};
use crate::state::ConservedState;

/// Four-point Gauss-Lobatto rule on `[-1, 1]`, weights normalized to sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussLobatto4 {
    pub nodes: [f64; 4],
    pub weights: [f64; 4],
}

impl GaussLobatto4 {
    /// Endpoint weight; also the positivity CFL number.
    pub const ENDPOINT_WEIGHT: f64 = 1.0 / 12.0;

    pub fn new() -> Self {
        let x = 1.0 / crate::math::sqrt(5.0);
        Self { nodes: [-1.0, -x, x, 1.0], weights: [1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0] }
    }
}

impl Default for GaussLobatto4 {
    fn default() -> Self {
        Self::new()
    }
}

/// Inputs of one side of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterWorkset {
    /// `w±(u)` of the cell owning this side of the face; admissible.
    pub w_cell: ConservedState,
    /// Reconstructed split state at the face.
    pub w_face: ConservedState,
    pub q_star: ConservedState,
}

impl LimiterWorkset {
    pub fn new(w_cell: ConservedState, w_face: ConservedState, w_hat: f64) -> Self {
        Self { w_cell, w_face, q_star: compute_q_star(&w_cell, &w_face, w_hat) }
    }
}

/// Result of [`limit_face_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitedFace {
    pub face: ConservedState,
    pub q_star: ConservedState,
    /// Scaling factors of the density, diagonal-pressure and determinant steps.
    pub theta: [f64; 3],
}

impl LimitedFace {
    pub fn is_active(&self) -> bool {
        self.theta.iter().any(|&t| t < 1.0)
    }
}

/// `q* = (w_cell - w_hat w_face) / (1 - w_hat)`: the part of the cell average
/// carried by the interior quadrature nodes.
#[inline]
pub fn compute_q_star(w_cell: &ConservedState, w_face: &ConservedState, w_hat: f64) -> ConservedState {
    let s = w_hat / (1.0 - w_hat);
    ConservedState(core::array::from_fn(|k| w_cell.0[k] + s * (w_cell.0[k] - w_face.0[k])))
}

#[inline]
fn lerp(anchor: &ConservedState, x: &ConservedState, t: f64) -> ConservedState {
    ConservedState(core::array::from_fn(|k| anchor.0[k] + t * (x.0[k] - anchor.0[k])))
}

const BISECTION_TOL: f64 = 1e-12;

/// Largest `t` in `[0, 1]` (to [`BISECTION_TOL`]) with
/// `g(anchor + t (x - anchor)) >= eps`, given that this holds at `t = 0` and
/// fails at `t = 1`. The feasible set is an interval because each functional
/// is concave on the segment.
fn feasible_fraction(anchor: &ConservedState, x: &ConservedState, eps: f64, g: impl Fn(&ConservedState) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if g(&lerp(anchor, x, mid)) >= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn p11(u: &ConservedState) -> f64 {
    u.functionals()[1]
}

fn p22(u: &ConservedState) -> f64 {
    u.functionals()[2]
}

fn det(u: &ConservedState) -> f64 {
    u.functionals()[3]
}

/// Scales the face state (and its companion `q*`) toward the cell anchor so
/// that both satisfy `rho, p11, p22, det p >= eps`.
pub fn limit_face_state(ws: &LimiterWorkset, eps: f64) -> Result<LimitedFace> {
    let anchor = ws.w_cell;
    let fa = anchor.functionals();
    if !fa.iter().all(|&f| f > eps) {
        return Err(Error::AnchorViolation { eps });
    }

    // Step 1: density.
    let rho_a = fa[0];
    let rho_min = ws.w_face.rho().min(ws.q_star.rho());
    let mut face = ws.w_face;
    let mut q = ws.q_star;
    let mut theta1 = 1.0;
    if rho_min < eps {
        theta1 = (rho_a - eps) / (rho_a - rho_min);
        face.0[0] = (rho_a + theta1 * (face.rho() - rho_a)).max(eps);
        q.0[0] = (rho_a + theta1 * (q.rho() - rho_a)).max(eps);
    }

    // Step 2: diagonal pressures.
    let mut theta2: f64 = 1.0;
    for x in [&face, &q] {
        for g in [p11 as fn(&ConservedState) -> f64, p22] {
            if g(x) < eps {
                theta2 = theta2.min(feasible_fraction(&anchor, x, eps, g));
            }
        }
    }
    if theta2 < 1.0 {
        face = lerp(&anchor, &face, theta2);
        q = lerp(&anchor, &q, theta2);
    }

    // Step 3: determinant.
    let mut theta3: f64 = 1.0;
    for x in [&face, &q] {
        if det(x) < eps {
            theta3 = theta3.min(feasible_fraction(&anchor, x, eps, det));
        }
    }
    if theta3 < 1.0 {
        face = lerp(&anchor, &face, theta3);
        q = lerp(&anchor, &q, theta3);
    }

    Ok(LimitedFace { face, q_star: q, theta: [theta1, theta2, theta3] })
}

/// Numerical flux `alpha (w~+ - w~-)` from the two limited sides of a face.
#[inline]
pub fn limit_face_flux(plus: &LimitedFace, minus: &LimitedFace, alpha: f64) -> [f64; 6] {
    core::array::from_fn(|k| alpha * (plus.face.0[k] - minus.face.0[k]))
}
