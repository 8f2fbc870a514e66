//! Local Lax-Friedrichs flux splitting with characteristic WENO
//! reconstruction, and the conservative residual `R(u)`.
//!
//! Faces are processed line by line. A line holds `n + 2 GHOST` cells and
//! yields `n + 1` face fluxes; face `m` sits between line cells `m + 2` and
//! `m + 3` and reads cells `m ..= m + 5`. The y direction reuses the x
//! machinery on axis-swapped states.

use alloc::vec;
use alloc::vec::Vec;

use crate::eigen::{eigen_x, face_average, mat_vec, EigenDecomposition};
use crate::error::{Axis, Error, Result};
use crate::grid::{GridField, GHOST};
use crate::limiter::{limit_face_state, LimitedFace, LimiterWorkset};
use crate::state::{cons_to_prim, flux_x_prim, max_speed_x, max_speed_y, ConservedState, Vec6};
use crate::weno::WenoVariant;

/// Positivity CFL number and Gauss-Lobatto endpoint weight.
pub const W_HAT: f64 = 1.0 / 12.0;

/// Reconstructed split fluxes at one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceFluxPair {
    pub f_plus: Vec6,
    pub f_minus: Vec6,
    pub alpha: f64,
}

impl FaceFluxPair {
    pub fn total(&self) -> Vec6 {
        core::array::from_fn(|k| self.f_plus[k] + self.f_minus[k])
    }
}

/// `w± = (u ± f(u) / alpha) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WSplitState {
    pub w_plus: ConservedState,
    pub w_minus: ConservedState,
}

pub fn split_cell(u: &ConservedState, alpha: f64, axis: Axis) -> Result<WSplitState> {
    let f = match axis {
        Axis::X => crate::state::flux_x(u)?,
        Axis::Y => crate::state::flux_y(u)?,
    };
    Ok(split_with(u, &f, alpha))
}

#[inline]
fn split_with(u: &ConservedState, f: &Vec6, alpha: f64) -> WSplitState {
    let inv = 0.5 / alpha;
    WSplitState {
        w_plus: ConservedState(core::array::from_fn(|k| 0.5 * u.0[k] + inv * f[k])),
        w_minus: ConservedState(core::array::from_fn(|k| 0.5 * u.0[k] - inv * f[k])),
    }
}

/// Per-cell quantities shared by the faces of a line.
#[derive(Debug, Clone, Copy)]
struct Cell {
    u: ConservedState,
    f: Vec6,
    alpha: f64,
}

impl Cell {
    fn new(u: ConservedState) -> Result<Self> {
        let w = cons_to_prim(&u)?;
        let f = flux_x_prim(&u, &w);
        let alpha = max_speed_x(&u)?;
        Ok(Self { u, f, alpha })
    }
}

fn reconstruct_pair(cells: &[Cell], weno: &WenoVariant) -> FaceFluxPair {
    debug_assert_eq!(cells.len(), 6);
    let alpha = cells[2].alpha.max(cells[3].alpha);
    let eig = eigen_x(&face_average(&cells[2].u, &cells[3].u)).unwrap_or(EigenDecomposition::identity());

    let mut lf = [[0.0; 6]; 6];
    let mut lu = [[0.0; 6]; 6];
    for (j, c) in cells.iter().enumerate() {
        lf[j] = mat_vec(&eig.left, &c.f);
        lu[j] = mat_vec(&eig.left, &c.u.0);
    }
    let mut wp = [0.0; 6];
    let mut wm = [0.0; 6];
    for k in 0..6 {
        let plus: [f64; 5] = core::array::from_fn(|j| 0.5 * (lf[j][k] + alpha * lu[j][k]));
        let minus: [f64; 5] = core::array::from_fn(|j| 0.5 * (lf[j + 1][k] - alpha * lu[j + 1][k]));
        wp[k] = weno.reconstruct_right(&plus);
        wm[k] = weno.reconstruct_left(&minus);
    }
    FaceFluxPair { f_plus: mat_vec(&eig.right, &wp), f_minus: mat_vec(&eig.right, &wm), alpha }
}

/// Split fluxes at the face between `stencil[2]` and `stencil[3]`
/// (x direction).
pub fn face_flux_1d(stencil: &[ConservedState; 6], weno: &WenoVariant) -> Result<FaceFluxPair> {
    let mut cells = [Cell { u: ConservedState::ZERO, f: [0.0; 6], alpha: 0.0 }; 6];
    for (c, u) in cells.iter_mut().zip(stencil) {
        *c = Cell::new(*u)?;
    }
    Ok(reconstruct_pair(&cells, weno))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxOptions {
    pub weno: WenoVariant,
    pub limiter: bool,
    pub eps: f64,
}

impl FluxOptions {
    pub fn new(weno: WenoVariant, limiter: bool, eps: f64) -> Self {
        Self { weno, limiter, eps }
    }
}

/// Limits one side of a face. When rounding leaves the anchor itself just
/// short of the margin, the margin is relaxed to half the anchor's smallest
/// functional for this face only.
fn limit_side(anchor: ConservedState, face: ConservedState, eps: f64) -> Result<LimitedFace> {
    let ws = LimiterWorkset::new(anchor, face, W_HAT);
    match limit_face_state(&ws, eps) {
        Err(Error::AnchorViolation { .. }) => {
            let floor = anchor.functionals().into_iter().fold(f64::INFINITY, f64::min);
            if floor > 0.0 {
                limit_face_state(&ws, 0.5 * floor)
            } else {
                Err(Error::AnchorViolation { eps })
            }
        }
        r => r,
    }
}

/// Numerical flux from the split fluxes, passing through the scaling limiter
/// when requested. The flag reports whether either side was scaled.
fn numerical_flux(pair: &FaceFluxPair, left: &Cell, right: &Cell, opts: &FluxOptions) -> Result<(Vec6, bool)> {
    if !opts.limiter {
        return Ok((pair.total(), false));
    }
    let a = pair.alpha;
    let plus_face = ConservedState(core::array::from_fn(|k| pair.f_plus[k] / a));
    let minus_face = ConservedState(core::array::from_fn(|k| -pair.f_minus[k] / a));
    let plus_anchor = split_with(&left.u, &left.f, left.alpha).w_plus;
    let minus_anchor = split_with(&right.u, &right.f, right.alpha).w_minus;
    let plus = limit_side(plus_anchor, plus_face, opts.eps)?;
    let minus = limit_side(minus_anchor, minus_face, opts.eps)?;
    if !plus.is_active() && !minus.is_active() {
        return Ok((pair.total(), false));
    }
    Ok((crate::limiter::limit_face_flux(&plus, &minus, a), true))
}

/// Reusable per-line buffers.
#[derive(Debug, Default, Clone)]
pub struct LineScratch {
    cells: Vec<Cell>,
    fluxes: Vec<Vec6>,
}

/// Face fluxes of one line of `n + 2 GHOST` cells into `scratch.fluxes`
/// (`n + 1` entries). Returns the number of limited faces.
fn sweep_line(
    line: &[ConservedState],
    opts: &FluxOptions,
    scratch: &mut LineScratch,
    axis: Axis,
    index: usize,
) -> Result<usize> {
    scratch.cells.clear();
    for u in line {
        scratch.cells.push(Cell::new(*u)?);
    }
    let faces = line.len() - 2 * GHOST + 1;
    scratch.fluxes.clear();
    let mut limited = 0;
    for m in 0..faces {
        let cells = &scratch.cells[m..m + 6];
        let pair = reconstruct_pair(cells, &opts.weno);
        let (flux, active) = numerical_flux(&pair, &cells[2], &cells[3], opts)?;
        if !flux.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { axis, line: index, face: m });
        }
        limited += active as usize;
        scratch.fluxes.push(flux);
    }
    Ok(limited)
}

/// Interior residuals in row-major order plus the number of limited faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub values: Vec<Vec6>,
    pub limited_faces: usize,
}

/// `R_i = -(F_{i+1/2} - F_{i-1/2}) / dx` along x for every interior row.
pub fn residual_1d(field: &GridField, opts: &FluxOptions) -> Result<Residual> {
    let m = field.mesh;
    let mut values = vec![[0.0; 6]; m.interior_len()];
    let mut scratch = LineScratch::default();
    let limited = add_x_sweeps(field, opts, &mut scratch, &mut values)?;
    Ok(Residual { values, limited_faces: limited })
}

/// Dimension-by-dimension residual: x sweeps plus y sweeps.
pub fn residual_2d(field: &GridField, opts: &FluxOptions) -> Result<Residual> {
    let m = field.mesh;
    let mut values = vec![[0.0; 6]; m.interior_len()];
    let mut scratch = LineScratch::default();
    let mut limited = add_x_sweeps(field, opts, &mut scratch, &mut values)?;
    if m.is_2d() {
        limited += add_y_sweeps(field, opts, &mut scratch, &mut values)?;
    }
    Ok(Residual { values, limited_faces: limited })
}

/// Residual for the mesh's own dimension.
pub fn residual(field: &GridField, opts: &FluxOptions) -> Result<Residual> {
    if field.mesh.is_2d() {
        residual_2d(field, opts)
    } else {
        residual_1d(field, opts)
    }
}

fn add_x_sweeps(field: &GridField, opts: &FluxOptions, scratch: &mut LineScratch, out: &mut [Vec6]) -> Result<usize> {
    let m = field.mesh;
    let inv_dx = 1.0 / m.dx();
    let mut limited = 0;
    for j in 0..m.ny {
        limited += sweep_line(field.row(j + m.gy()), opts, scratch, Axis::X, j)?;
        for i in 0..m.nx {
            let (fl, fr) = (&scratch.fluxes[i], &scratch.fluxes[i + 1]);
            let r = &mut out[j * m.nx + i];
            for k in 0..6 {
                r[k] -= (fr[k] - fl[k]) * inv_dx;
            }
        }
    }
    Ok(limited)
}

fn add_y_sweeps(field: &GridField, opts: &FluxOptions, scratch: &mut LineScratch, out: &mut [Vec6]) -> Result<usize> {
    let m = field.mesh;
    let inv_dy = 1.0 / m.dy();
    let mut column = Vec::with_capacity(m.sy());
    let mut limited = 0;
    for i in 0..m.nx {
        column.clear();
        column.extend((0..m.sy()).map(|jy| field.data[m.idx(i + GHOST, jy)].swap_axes()));
        limited += sweep_line(&column, opts, scratch, Axis::Y, i)?;
        for j in 0..m.ny {
            let gl = crate::state::swap_axes(scratch.fluxes[j]);
            let gr = crate::state::swap_axes(scratch.fluxes[j + 1]);
            let r = &mut out[j * m.nx + i];
            for k in 0..6 {
                r[k] -= (gr[k] - gl[k]) * inv_dy;
            }
        }
    }
    Ok(limited)
}

/// `max_ij (alpha^x / dx + alpha^y / dy)` over the interior cells.
pub fn max_rate(field: &GridField) -> Result<f64> {
    let m = field.mesh;
    let (inv_dx, inv_dy) = (1.0 / m.dx(), 1.0 / m.dy());
    let mut rate: f64 = 0.0;
    for (_, u) in field.interior() {
        let mut r = max_speed_x(u)? * inv_dx;
        if m.is_2d() {
            r += max_speed_y(u)? * inv_dy;
        }
        rate = rate.max(r);
    }
    Ok(rate)
}

/// Global maxima `(max alpha^x, max alpha^y)` over every cell that feeds a
/// face speed: the interior plus the first ghost layer in each sweep
/// direction. Ghosts must be filled.
pub fn max_speeds(field: &GridField) -> Result<(f64, f64)> {
    let m = field.mesh;
    let mut ax: f64 = 0.0;
    let mut ay: f64 = 0.0;
    for jy in m.gy()..m.gy() + m.ny {
        for ix in GHOST - 1..=GHOST + m.nx {
            ax = ax.max(max_speed_x(&field.data[m.idx(ix, jy)])?);
        }
    }
    if m.is_2d() {
        for ix in GHOST..GHOST + m.nx {
            for jy in GHOST - 1..=GHOST + m.ny {
                ay = ay.max(max_speed_y(&field.data[m.idx(ix, jy)])?);
            }
        }
    }
    Ok((ax, ay))
}
