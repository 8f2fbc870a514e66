//! Uniform cell-centred meshes, ghost layers and boundary conditions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::ConservedState;

/// Ghost layers on each side of every active direction.
pub const GHOST: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub dim: u8,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Mesh {
    pub fn new_1d(nx: usize, x0: f64, x1: f64) -> Result<Self> {
        Self::validate(nx, x0, x1)?;
        Ok(Self { dim: 1, nx, ny: 1, x0, x1, y0: 0.0, y1: 1.0 })
    }

    pub fn new_2d(nx: usize, ny: usize, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Result<Self> {
        Self::validate(nx, x0, x1)?;
        Self::validate(ny, y0, y1)?;
        Ok(Self { dim: 2, nx, ny, x0, x1, y0, y1 })
    }

    fn validate(n: usize, a: f64, b: f64) -> Result<()> {
        if n < GHOST {
            return Err(Error::Config("a mesh needs at least three cells per direction"));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Config("domain bounds must be finite and increasing"));
        }
        Ok(())
    }

    pub fn is_2d(&self) -> bool {
        self.dim == 2
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    /// Ghost width in y: zero for 1-D meshes.
    pub fn gy(&self) -> usize {
        if self.is_2d() {
            GHOST
        } else {
            0
        }
    }

    /// Storage extent in x, ghosts included.
    pub fn sx(&self) -> usize {
        self.nx + 2 * GHOST
    }

    pub fn sy(&self) -> usize {
        self.ny + 2 * self.gy()
    }

    pub fn storage_len(&self) -> usize {
        self.sx() * self.sy()
    }

    pub fn interior_len(&self) -> usize {
        self.nx * self.ny
    }

    /// Flat index of storage cell `(ix, jy)`.
    #[inline]
    pub fn idx(&self, ix: usize, jy: usize) -> usize {
        jy * self.sx() + ix
    }

    /// Flat storage index of interior cell `(i, j)`.
    #[inline]
    pub fn interior_idx(&self, i: usize, j: usize) -> usize {
        self.idx(i + GHOST, j + self.gy())
    }

    /// Centre of storage column `ix` (may lie in the ghost region).
    #[inline]
    pub fn xc(&self, ix: usize) -> f64 {
        self.x0 + (ix as f64 - GHOST as f64 + 0.5) * self.dx()
    }

    /// Centre of storage row `jy`; 1-D meshes report the mid-line.
    #[inline]
    pub fn yc(&self, jy: usize) -> f64 {
        if self.is_2d() {
            self.y0 + (jy as f64 - GHOST as f64 + 0.5) * self.dy()
        } else {
            0.5 * (self.y0 + self.y1)
        }
    }

    /// Centre of interior cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.xc(i + GHOST), self.yc(j + self.gy()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Periodic,
    /// Zero-gradient extrapolation.
    Outflow,
    /// Closed-form solution sampled at the ghost centres.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryCondition {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
    pub bottom: BoundaryKind,
    pub top: BoundaryKind,
}

impl BoundaryCondition {
    pub const fn uniform(kind: BoundaryKind) -> Self {
        Self { left: kind, right: kind, bottom: kind, top: kind }
    }

    pub fn validate(&self) -> Result<()> {
        let paired = |a: BoundaryKind, b: BoundaryKind| (a == BoundaryKind::Periodic) == (b == BoundaryKind::Periodic);
        if paired(self.left, self.right) && paired(self.bottom, self.top) {
            Ok(())
        } else {
            Err(Error::Config("periodic boundaries must be paired on opposite sides"))
        }
    }

    pub fn needs_exact(&self) -> bool {
        [self.left, self.right, self.bottom, self.top].contains(&BoundaryKind::Exact)
    }
}

/// Closed-form solution in conserved variables at `(x, y, t)`.
pub trait ExactSolution {
    fn conserved(&self, x: f64, y: f64, t: f64) -> ConservedState;
}

impl<F: Fn(f64, f64, f64) -> ConservedState> ExactSolution for F {
    fn conserved(&self, x: f64, y: f64, t: f64) -> ConservedState {
        self(x, y, t)
    }
}

pub type ExactFn<'a> = &'a dyn ExactSolution;

/// Cell values over a mesh, ghosts included, row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub mesh: Mesh,
    pub data: Vec<ConservedState>,
}

impl GridField {
    pub fn zeros(mesh: Mesh) -> Self {
        Self { mesh, data: vec![ConservedState::ZERO; mesh.storage_len()] }
    }

    /// Samples `f` at every interior cell centre; ghosts stay zero.
    pub fn from_fn(mesh: Mesh, f: impl Fn(f64, f64) -> ConservedState) -> Self {
        let mut field = Self::zeros(mesh);
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                let (x, y) = mesh.center(i, j);
                let k = mesh.interior_idx(i, j);
                field.data[k] = f(x, y);
            }
        }
        field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &ConservedState {
        &self.data[self.mesh.interior_idx(i, j)]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut ConservedState {
        let k = self.mesh.interior_idx(i, j);
        &mut self.data[k]
    }

    /// Interior cells in row-major order.
    pub fn interior(&self) -> impl Iterator<Item = ((usize, usize), &ConservedState)> + '_ {
        let m = self.mesh;
        (0..m.ny).flat_map(move |j| (0..m.nx).map(move |i| ((i, j), self.get(i, j))))
    }

    /// Interior cells copied out in row-major order.
    pub fn interior_values(&self) -> Vec<ConservedState> {
        self.interior().map(|(_, u)| *u).collect()
    }

    /// Storage row `jy` (ghost columns included).
    pub fn row(&self, jy: usize) -> &[ConservedState] {
        let sx = self.mesh.sx();
        &self.data[jy * sx..(jy + 1) * sx]
    }
}

/// Fills every ghost cell: x-boundaries on interior rows first, then the
/// y-boundaries over full rows, which also fills the corners.
pub fn fill_ghosts(field: &mut GridField, bc: &BoundaryCondition, t: f64, exact: Option<ExactFn<'_>>) -> Result<()> {
    let m = field.mesh;
    if bc.needs_exact() && exact.is_none() {
        return Err(Error::Config("exact boundary requested without a closed-form solution"));
    }
    let g = GHOST;
    let (nx, ny, gy) = (m.nx, m.ny, m.gy());

    for jy in gy..gy + ny {
        for k in 0..g {
            // Left ghost column k, right ghost column g + nx + k.
            let left = m.idx(k, jy);
            field.data[left] = match bc.left {
                BoundaryKind::Periodic => field.data[m.idx(k + nx, jy)],
                BoundaryKind::Outflow => field.data[m.idx(g, jy)],
                BoundaryKind::Exact => exact.unwrap().conserved(m.xc(k), m.yc(jy), t),
            };
            let ix = g + nx + k;
            let right = m.idx(ix, jy);
            field.data[right] = match bc.right {
                BoundaryKind::Periodic => field.data[m.idx(g + k, jy)],
                BoundaryKind::Outflow => field.data[m.idx(g + nx - 1, jy)],
                BoundaryKind::Exact => exact.unwrap().conserved(m.xc(ix), m.yc(jy), t),
            };
        }
    }

    if m.is_2d() {
        for ix in 0..m.sx() {
            for k in 0..g {
                let bottom = m.idx(ix, k);
                field.data[bottom] = match bc.bottom {
                    BoundaryKind::Periodic => field.data[m.idx(ix, k + ny)],
                    BoundaryKind::Outflow => field.data[m.idx(ix, g)],
                    BoundaryKind::Exact => exact.unwrap().conserved(m.xc(ix), m.yc(k), t),
                };
                let jy = g + ny + k;
                let top = m.idx(ix, jy);
                field.data[top] = match bc.top {
                    BoundaryKind::Periodic => field.data[m.idx(ix, g + k)],
                    BoundaryKind::Outflow => field.data[m.idx(ix, g + ny - 1)],
                    BoundaryKind::Exact => exact.unwrap().conserved(m.xc(ix), m.yc(jy), t),
                };
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> ConservedState {
        ConservedState::new(v, 0., 0., 1., 0., 1.)
    }

    #[test]
    fn cell_centres() {
        let m = Mesh::new_1d(10, -0.5, 0.5).unwrap();
        assert!((m.dx() - 0.1).abs() < 1e-15);
        assert!((m.center(0, 0).0 + 0.45).abs() < 1e-15);
        assert!((m.xc(0) + 0.75).abs() < 1e-15);
        assert_eq!(m.sy(), 1);
    }

    #[test]
    fn periodic_constant_and_wrap() {
        let m = Mesh::new_1d(8, 0.0, 1.0).unwrap();
        let mut f = GridField::from_fn(m, |x, _| c(x));
        fill_ghosts(&mut f, &BoundaryCondition::uniform(BoundaryKind::Periodic), 0.0, None).unwrap();
        for k in 0..GHOST {
            assert_eq!(f.data[k], *f.get(8 - GHOST + k, 0));
            assert_eq!(f.data[GHOST + 8 + k], *f.get(k, 0));
        }
        let mut f = GridField::from_fn(m, |_, _| c(2.0));
        fill_ghosts(&mut f, &BoundaryCondition::uniform(BoundaryKind::Periodic), 0.0, None).unwrap();
        assert!(f.data.iter().all(|u| *u == c(2.0)));
    }

    #[test]
    fn outflow_copies_edge() {
        let m = Mesh::new_2d(4, 5, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let mut f = GridField::from_fn(m, |x, y| c(1.0 + x + 10.0 * y));
        let before = f.interior_values();
        fill_ghosts(&mut f, &BoundaryCondition::uniform(BoundaryKind::Outflow), 0.0, None).unwrap();
        assert_eq!(f.interior_values(), before);
        for k in 0..GHOST {
            assert_eq!(f.data[m.idx(k, GHOST + 2)], *f.get(0, 2));
            assert_eq!(f.data[m.idx(GHOST + 4 + k, GHOST + 1)], *f.get(3, 1));
            assert_eq!(f.data[m.idx(GHOST + 1, k)], *f.get(1, 0));
            assert_eq!(f.data[m.idx(GHOST + 1, GHOST + 5 + k)], *f.get(1, 4));
        }
        // Corners come from the y pass over already-filled x ghosts.
        assert_eq!(f.data[m.idx(0, 0)], *f.get(0, 0));
    }

    #[test]
    fn exact_samples_ghost_centres() {
        let m = Mesh::new_1d(10, 0.0, 1.0).unwrap();
        let ex = |x: f64, _y: f64, t: f64| c(x + t);
        let mut f = GridField::from_fn(m, |x, _| c(x));
        fill_ghosts(&mut f, &BoundaryCondition::uniform(BoundaryKind::Exact), 0.5, Some(&ex)).unwrap();
        assert_eq!(f.data[0], c(m.xc(0) + 0.5));
        assert_eq!(f.data[GHOST + 10 + 2], c(m.xc(GHOST + 12) + 0.5));
        assert!(fill_ghosts(&mut f, &BoundaryCondition::uniform(BoundaryKind::Exact), 0.0, None).is_err());
    }

    #[test]
    fn unpaired_periodic_rejected() {
        let bc =
            BoundaryCondition { left: BoundaryKind::Periodic, ..BoundaryCondition::uniform(BoundaryKind::Outflow) };
        assert!(bc.validate().is_err());
        assert!(BoundaryCondition::uniform(BoundaryKind::Periodic).validate().is_ok());
    }
}
