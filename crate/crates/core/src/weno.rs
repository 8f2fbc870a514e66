//! Fifth-order WENO reconstruction of a face value from five cell values.
//!
//! The five values are treated as cell averages of an implicit function on a
//! uniform mesh; `reconstruct_right` returns the point value at the right face
//! of the central cell. All three variants reduce to the same linear
//! fifth-order combination when their nonlinear weights equal the linear ones.

use crate::math::abs;

/// Five consecutive cell values `q[-2..=2]`, central cell at index 2.
pub type Stencil5 = [f64; 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WenoKind {
    Js,
    Z,
    Ao,
}

/// Linear weights of WENO-AO(5,3): the fifth-order polynomial and the
/// left, central and right third-order polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoWeights {
    pub high: f64,
    pub left: f64,
    pub center: f64,
    pub right: f64,
}

impl Default for AoWeights {
    fn default() -> Self {
        Self { high: 0.5, left: 0.125, center: 0.25, right: 0.125 }
    }
}

impl AoWeights {
    pub fn is_valid(&self) -> bool {
        let sum = self.high + self.left + self.center + self.right;
        self.high > 0.0
            && self.high < 1.0
            && self.left > 0.0
            && self.center > 0.0
            && self.right > 0.0
            && abs(sum - 1.0) < 1e-14
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoVariant {
    pub kind: WenoKind,
    /// Regularization added to the smoothness indicators.
    pub epsilon: f64,
    pub ao: AoWeights,
    /// Bypass the nonlinear weights (exactness tests only).
    pub linear_weights: bool,
}

impl WenoVariant {
    pub const JS_EPSILON: f64 = 1e-6;
    pub const Z_EPSILON: f64 = 1e-40;
    pub const AO_EPSILON: f64 = 1e-12;

    pub fn js() -> Self {
        Self::new(WenoKind::Js)
    }

    pub fn z() -> Self {
        Self::new(WenoKind::Z)
    }

    pub fn ao() -> Self {
        Self::new(WenoKind::Ao)
    }

    pub fn new(kind: WenoKind) -> Self {
        let epsilon = match kind {
            WenoKind::Js => Self::JS_EPSILON,
            WenoKind::Z => Self::Z_EPSILON,
            WenoKind::Ao => Self::AO_EPSILON,
        };
        Self { kind, epsilon, ao: AoWeights::default(), linear_weights: false }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn forced_linear(mut self) -> Self {
        self.linear_weights = true;
        self
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            WenoKind::Js => "js",
            WenoKind::Z => "z",
            WenoKind::Ao => "ao",
        }
    }

    /// Value at the right face `x_{i+1/2}` of the central cell.
    #[inline]
    pub fn reconstruct_right(&self, s: &Stencil5) -> f64 {
        if self.linear_weights {
            return linear_right(s);
        }
        match self.kind {
            WenoKind::Js => js_right(s, self.epsilon),
            WenoKind::Z => z_right(s, self.epsilon),
            WenoKind::Ao => ao_right(s, self.epsilon, &self.ao),
        }
    }

    /// Value at the left face `x_{i-1/2}` of the central cell (mirror image).
    #[inline]
    pub fn reconstruct_left(&self, s: &Stencil5) -> f64 {
        self.reconstruct_right(&[s[4], s[3], s[2], s[1], s[0]])
    }
}

pub fn reconstruct_right(s: &Stencil5, v: &WenoVariant) -> f64 {
    v.reconstruct_right(s)
}

pub fn reconstruct_left(s: &Stencil5, v: &WenoVariant) -> f64 {
    v.reconstruct_left(s)
}

const D0: f64 = 0.1;
const D1: f64 = 0.6;
const D2: f64 = 0.3;

/// The unique fifth-order upwind combination.
#[inline]
pub fn linear_right(s: &Stencil5) -> f64 {
    (2.0 * s[0] - 13.0 * s[1] + 47.0 * s[2] + 27.0 * s[3] - 3.0 * s[4]) / 60.0
}

#[inline]
fn candidates(s: &Stencil5) -> [f64; 3] {
    [
        (2.0 * s[0] - 7.0 * s[1] + 11.0 * s[2]) / 6.0,
        (-s[1] + 5.0 * s[2] + 2.0 * s[3]) / 6.0,
        (2.0 * s[2] + 5.0 * s[3] - s[4]) / 6.0,
    ]
}

/// Jiang-Shu indicators of the three third-order candidates.
#[inline]
fn indicators(s: &Stencil5) -> [f64; 3] {
    const C: f64 = 13.0 / 12.0;
    let a = s[0] - 2.0 * s[1] + s[2];
    let b = s[0] - 4.0 * s[1] + 3.0 * s[2];
    let b0 = C * a * a + 0.25 * b * b;
    let a = s[1] - 2.0 * s[2] + s[3];
    let b = s[1] - s[3];
    let b1 = C * a * a + 0.25 * b * b;
    let a = s[2] - 2.0 * s[3] + s[4];
    let b = 3.0 * s[2] - 4.0 * s[3] + s[4];
    let b2 = C * a * a + 0.25 * b * b;
    [b0, b1, b2]
}

#[inline]
fn combine(q: [f64; 3], a: [f64; 3]) -> f64 {
    (a[0] * q[0] + a[1] * q[1] + a[2] * q[2]) / (a[0] + a[1] + a[2])
}

fn js_right(s: &Stencil5, eps: f64) -> f64 {
    let beta = indicators(s);
    let mut a = [D0, D1, D2];
    for k in 0..3 {
        let b = eps + beta[k];
        a[k] /= b * b;
    }
    combine(candidates(s), a)
}

fn z_right(s: &Stencil5, eps: f64) -> f64 {
    let beta = indicators(s);
    let tau = abs(beta[0] - beta[2]);
    let mut a = [D0, D1, D2];
    for k in 0..3 {
        let r = tau / (beta[k] + eps);
        a[k] *= 1.0 + r * r;
    }
    combine(candidates(s), a)
}

/// WENO-AO(5,3): adaptive blend of the fifth-order polynomial with the three
/// third-order ones.
fn ao_right(s: &Stencil5, eps: f64, w: &AoWeights) -> f64 {
    let [vm2, vm1, v0, vp1, vp2] = *s;
    // Monomial coefficients of the quartic with the given cell averages, in the
    // local coordinate of the central cell (unit width, centered at zero).
    let a1 = 5.0 / 48.0 * (vm2 - vp2) + 17.0 / 24.0 * (vp1 - vm1);
    let a2 = -11.0 / 8.0 * v0 + 0.75 * (vm1 + vp1) - (vm2 + vp2) / 16.0;
    let a3 = (vm1 - vp1) / 6.0 + (vp2 - vm2) / 12.0;
    let a4 = 0.25 * v0 - (vm1 + vp1) / 6.0 + (vm2 + vp2) / 24.0;
    let beta_high = a1 * a1
        + 0.5 * a1 * a3
        + 13.0 / 3.0 * a2 * a2
        + 21.0 / 5.0 * a2 * a4
        + 3129.0 / 80.0 * a3 * a3
        + 87617.0 / 140.0 * a4 * a4;
    let beta = indicators(s);
    let tau = (abs(beta_high - beta[0]) + abs(beta_high - beta[1]) + abs(beta_high - beta[2])) / 3.0;

    let nonlinear = |gamma: f64, b: f64| {
        let r = tau / (b + eps);
        gamma * (1.0 + r * r)
    };
    let wh = nonlinear(w.high, beta_high);
    let wl = nonlinear(w.left, beta[0]);
    let wc = nonlinear(w.center, beta[1]);
    let wr = nonlinear(w.right, beta[2]);
    let sum = wh + wl + wc + wr;
    let (wh, wl, wc, wr) = (wh / sum, wl / sum, wc / sum, wr / sum);

    let high = linear_right(s);
    let q = candidates(s);
    wh / w.high * (high - w.left * q[0] - w.center * q[1] - w.right * q[2]) + wl * q[0] + wc * q[1] + wr * q[2]
}
