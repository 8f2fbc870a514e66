//! State algebra for the Ten-Moment Gaussian closure.
//!
//! Conserved variables are always ordered `(rho, rho v1, rho v2, E11, E12, E22)`
//! and the pressure tensor follows from the closure `E = (p + rho v v^T) / 2`.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Plain six-component vector, used for fluxes and characteristic variables.
pub type Vec6 = [f64; 6];

/// Physical flux in one coordinate direction.
pub type FluxVector = Vec6;

/// Densities with magnitude below this are rejected by [`cons_to_prim`].
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Conserved state `u = (rho, m1, m2, E11, E12, E22)` at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[repr(transparent)]
pub struct ConservedState(pub Vec6);

/// Primitive state `(rho, v1, v2, p11, p12, p22)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub v1: f64,
    pub v2: f64,
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, v1: f64, v2: f64, p11: f64, p12: f64, p22: f64) -> Self {
        Self { rho, v1, v2, p11, p12, p22 }
    }

    pub fn to_array(self) -> Vec6 {
        [self.rho, self.v1, self.v2, self.p11, self.p12, self.p22]
    }

    pub fn from_array(a: Vec6) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    /// `p11 p22 - p12^2`.
    pub fn pressure_det(&self) -> f64 {
        self.p11 * self.p22 - self.p12 * self.p12
    }

    pub fn pressure_trace(&self) -> f64 {
        self.p11 + self.p22
    }
}

impl ConservedState {
    pub const ZERO: Self = Self([0.0; 6]);

    pub const fn new(rho: f64, m1: f64, m2: f64, e11: f64, e12: f64, e22: f64) -> Self {
        Self([rho, m1, m2, e11, e12, e22])
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[0]
    }
    #[inline]
    pub fn m1(&self) -> f64 {
        self.0[1]
    }
    #[inline]
    pub fn m2(&self) -> f64 {
        self.0[2]
    }
    #[inline]
    pub fn e11(&self) -> f64 {
        self.0[3]
    }
    #[inline]
    pub fn e12(&self) -> f64 {
        self.0[4]
    }
    #[inline]
    pub fn e22(&self) -> f64 {
        self.0[5]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Swaps the roles of the two coordinate directions:
    /// `(rho, m1, m2, E11, E12, E22) -> (rho, m2, m1, E22, E12, E11)`.
    ///
    /// The y-flux of `u` is the permuted x-flux of the permuted state, which
    /// lets the y-sweeps reuse the x-direction machinery.
    #[inline]
    pub fn swap_axes(self) -> Self {
        let u = self.0;
        Self([u[0], u[2], u[1], u[5], u[4], u[3]])
    }

    /// The three admissibility functionals `(rho, p11, p22, det p)`.
    #[inline]
    pub fn functionals(&self) -> [f64; 4] {
        let rho = self.rho();
        let m1 = self.m1();
        let m2 = self.m2();
        let p11 = 2.0 * self.e11() - m1 * m1 / rho;
        let p12 = 2.0 * self.e12() - m1 * m2 / rho;
        let p22 = 2.0 * self.e22() - m2 * m2 / rho;
        [rho, p11, p22, p11 * p22 - p12 * p12]
    }
}

/// Swap for bare six-vectors, matching [`ConservedState::swap_axes`].
#[inline]
pub fn swap_axes(v: Vec6) -> Vec6 {
    [v[0], v[2], v[1], v[5], v[4], v[3]]
}

impl Index<usize> for ConservedState {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ConservedState {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for ConservedState {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self(core::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl AddAssign for ConservedState {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        for k in 0..6 {
            self.0[k] += rhs.0[k];
        }
    }
}

impl Sub for ConservedState {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self(core::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Mul<f64> for ConservedState {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }
}

impl From<Vec6> for ConservedState {
    fn from(v: Vec6) -> Self {
        Self(v)
    }
}

impl From<PrimitiveState> for ConservedState {
    fn from(v: PrimitiveState) -> Self {
        prim_to_cons(&v)
    }
}

pub fn prim_to_cons(v: &PrimitiveState) -> ConservedState {
    let PrimitiveState { rho, v1, v2, p11, p12, p22 } = *v;
    ConservedState([
        rho,
        rho * v1,
        rho * v2,
        0.5 * (p11 + rho * v1 * v1),
        0.5 * (p12 + rho * v1 * v2),
        0.5 * (p22 + rho * v2 * v2),
    ])
}

pub fn cons_to_prim(u: &ConservedState) -> Result<PrimitiveState> {
    let rho = u.rho();
    if !(rho.abs() >= DENSITY_FLOOR) {
        return Err(Error::ZeroDensity { rho });
    }
    Ok(cons_to_prim_unchecked(u))
}

#[inline]
pub(crate) fn cons_to_prim_unchecked(u: &ConservedState) -> PrimitiveState {
    let rho = u.rho();
    let v1 = u.m1() / rho;
    let v2 = u.m2() / rho;
    PrimitiveState {
        rho,
        v1,
        v2,
        p11: 2.0 * u.e11() - rho * v1 * v1,
        p12: 2.0 * u.e12() - rho * v1 * v2,
        p22: 2.0 * u.e22() - rho * v2 * v2,
    }
}

#[inline]
pub(crate) fn flux_x_prim(u: &ConservedState, w: &PrimitiveState) -> FluxVector {
    let PrimitiveState { rho, v1, v2, p11, p12, .. } = *w;
    [
        u.m1(),
        rho * v1 * v1 + p11,
        rho * v1 * v2 + p12,
        (u.e11() + p11) * v1,
        u.e12() * v1 + 0.5 * (p11 * v2 + p12 * v1),
        u.e22() * v1 + p12 * v2,
    ]
}

/// Physical flux `f(u)` in the x-direction.
pub fn flux_x(u: &ConservedState) -> Result<FluxVector> {
    let w = cons_to_prim(u)?;
    Ok(flux_x_prim(u, &w))
}

/// Physical flux `g(u)` in the y-direction.
pub fn flux_y(u: &ConservedState) -> Result<FluxVector> {
    let w = cons_to_prim(u)?;
    let PrimitiveState { rho, v1, v2, p12, p22, .. } = w;
    Ok([
        u.m2(),
        rho * v1 * v2 + p12,
        rho * v2 * v2 + p22,
        u.e11() * v2 + p12 * v1,
        u.e12() * v2 + 0.5 * (p12 * v2 + p22 * v1),
        (u.e22() + p22) * v2,
    ])
}

#[inline]
pub(crate) fn speed_from(rho: f64, v: f64, p: f64) -> Result<f64> {
    if !(rho > 0.0) || !(p > 0.0) {
        return Err(Error::NonAdmissible { rho, pressure: p });
    }
    Ok(v.abs() + sqrt(3.0 * p / rho))
}

/// Largest characteristic speed along x: `|v1| + sqrt(3 p11 / rho)`.
pub fn max_speed_x(u: &ConservedState) -> Result<f64> {
    let w = cons_to_prim(u)?;
    speed_from(w.rho, w.v1, w.p11)
}

/// Largest characteristic speed along y: `|v2| + sqrt(3 p22 / rho)`.
pub fn max_speed_y(u: &ConservedState) -> Result<f64> {
    let w = cons_to_prim(u)?;
    speed_from(w.rho, w.v2, w.p22)
}

/// True when density, both diagonal pressures and the pressure determinant
/// all exceed `eps`. NaN components make the state inadmissible.
#[inline]
pub fn is_admissible(u: &ConservedState, eps: f64) -> bool {
    let rho = u.rho();
    if !(rho > eps) {
        return false;
    }
    let [_, p11, p22, det] = u.functionals();
    p11 > eps && p22 > eps && det > eps
}
