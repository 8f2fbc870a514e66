//! Body-force source `B(t) u` with `B` built from the potential gradient, its
//! exact propagator, and the optional absorption energy deposit.
//!
//! With `a = -W_x / 2` and `b = -W_y / 2` the source ODE is linear with a
//! nilpotent generator, so `exp(C)` for `C = int B ds` has a closed form that
//! shifts the velocity by `(a_hat, b_hat)` and leaves the pressure untouched.

use crate::math::{abs, ceil, cos, exp, sin};
use crate::state::{ConservedState, Vec6};

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Named potentials `W(x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Zero,
    /// `W = slope * x`.
    LinearX {
        slope: f64,
    },
    /// `W = amplitude * sin(2 pi k (x - speed t))`.
    TravelingSine {
        amplitude: f64,
        k: f64,
        speed: f64,
    },
    /// `W = amplitude * exp(-sharpness (x - center)^2)`.
    Gaussian1d {
        amplitude: f64,
        center: f64,
        sharpness: f64,
    },
    /// `W = amplitude * exp(-sharpness ((x - cx)^2 + (y - cy)^2))`.
    Gaussian2d {
        amplitude: f64,
        cx: f64,
        cy: f64,
        sharpness: f64,
    },
}

impl Potential {
    pub fn value(&self, x: f64, y: f64, t: f64) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::LinearX { slope } => slope * x,
            Potential::TravelingSine { amplitude, k, speed } => amplitude * sin(TWO_PI * k * (x - speed * t)),
            Potential::Gaussian1d { amplitude, center, sharpness } => {
                let d = x - center;
                amplitude * exp(-sharpness * d * d)
            }
            Potential::Gaussian2d { amplitude, cx, cy, sharpness } => {
                let (dx, dy) = (x - cx, y - cy);
                amplitude * exp(-sharpness * (dx * dx + dy * dy))
            }
        }
    }

    /// `(dW/dx, dW/dy)`.
    pub fn gradient(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        match *self {
            Potential::Zero => (0.0, 0.0),
            Potential::LinearX { slope } => (slope, 0.0),
            Potential::TravelingSine { amplitude, k, speed } => {
                (amplitude * TWO_PI * k * cos(TWO_PI * k * (x - speed * t)), 0.0)
            }
            Potential::Gaussian1d { center, sharpness, .. } => {
                (-2.0 * sharpness * (x - center) * self.value(x, y, t), 0.0)
            }
            Potential::Gaussian2d { cx, cy, sharpness, .. } => {
                let w = self.value(x, y, t);
                (-2.0 * sharpness * (x - cx) * w, -2.0 * sharpness * (y - cy) * w)
            }
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Potential::TravelingSine { speed, .. } if *speed != 0.0)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::Zero => "zero",
            Potential::LinearX { .. } => "linear-x",
            Potential::TravelingSine { .. } => "traveling-sine",
            Potential::Gaussian1d { .. } => "gaussian-1d",
            Potential::Gaussian2d { .. } => "gaussian-2d",
        }
    }
}

/// Potential plus the switches that decide how it enters the equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub potential: Potential,
    pub force_x: bool,
    pub force_y: bool,
    /// Absorption coefficient `v_T`; adds `v_T rho W` to the `E11` equation.
    pub absorption: f64,
}

impl PotentialSpec {
    pub const NONE: Self = Self { potential: Potential::Zero, force_x: false, force_y: false, absorption: 0.0 };

    pub fn new(potential: Potential) -> Self {
        Self { potential, force_x: true, force_y: true, absorption: 0.0 }
    }

    pub fn x_force_only(mut self) -> Self {
        self.force_y = false;
        self
    }

    pub fn with_absorption(mut self, v_t: f64) -> Self {
        self.absorption = v_t;
        self
    }

    /// True when the body force can change the solution.
    pub fn has_force(&self) -> bool {
        self.potential != Potential::Zero && (self.force_x || self.force_y)
    }

    pub fn has_absorption(&self) -> bool {
        self.absorption != 0.0 && self.potential != Potential::Zero
    }

    /// `(a, b) = -grad W / 2` with disabled directions zeroed.
    #[inline]
    pub fn acceleration(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        let (gx, gy) = self.potential.gradient(x, y, t);
        (if self.force_x { -0.5 * gx } else { 0.0 }, if self.force_y { -0.5 * gy } else { 0.0 })
    }
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self::NONE
    }
}

/// Time integrals of the accelerations over `[t, t + tau]` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SourceIntegrals {
    pub a_hat: f64,
    pub b_hat: f64,
}

impl SourceIntegrals {
    pub fn negate(self) -> Self {
        Self { a_hat: -self.a_hat, b_hat: -self.b_hat }
    }
}

/// Widest quadrature panel for time-dependent potentials.
const MAX_PANEL: f64 = 0.01;

pub fn source_integrals(p: &PotentialSpec, x: f64, y: f64, t: f64, tau: f64) -> SourceIntegrals {
    if !p.has_force() || tau == 0.0 {
        return SourceIntegrals::default();
    }
    if !p.potential.is_time_dependent() {
        let (a, b) = p.acceleration(x, y, t);
        return SourceIntegrals { a_hat: a * tau, b_hat: b * tau };
    }
    // Composite three-point Gauss-Legendre.
    const R: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    const W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    const X: [f64; 3] = [-R, 0.0, R];
    let panels = ceil(abs(tau) / MAX_PANEL).max(1.0) as usize;
    let h = tau / panels as f64;
    let (mut a_hat, mut b_hat) = (0.0, 0.0);
    for j in 0..panels {
        let mid = t + (j as f64 + 0.5) * h;
        for q in 0..3 {
            let (a, b) = p.acceleration(x, y, mid + 0.5 * h * X[q]);
            a_hat += W[q] * h * a;
            b_hat += W[q] * h * b;
        }
    }
    SourceIntegrals { a_hat, b_hat }
}

/// `exp(C) u` in closed form.
#[inline]
pub fn propagate_source(u: &ConservedState, si: SourceIntegrals) -> ConservedState {
    let SourceIntegrals { a_hat: a, b_hat: b } = si;
    if a == 0.0 && b == 0.0 {
        return *u;
    }
    let [rho, m1, m2, e11, e12, e22] = u.0;
    ConservedState([
        rho,
        m1 + rho * a,
        m2 + rho * b,
        e11 + 0.5 * rho * a * a + m1 * a,
        e12 + 0.5 * (rho * a * b + m1 * b + m2 * a),
        e22 + 0.5 * rho * b * b + m2 * b,
    ])
}

/// Explicit absorption term added to the residual.
#[inline]
pub fn absorption_residual(u: &ConservedState, p: &PotentialSpec, x: f64, y: f64, t: f64) -> Vec6 {
    let mut r = [0.0; 6];
    if p.absorption != 0.0 {
        r[3] = p.absorption * u.rho() * p.potential.value(x, y, t);
    }
    r
}
