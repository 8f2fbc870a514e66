//! Built-in test problems, error norms and mesh-refinement studies.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, BoundaryKind, ExactSolution, GridField, Mesh};
use crate::integrator::{RunStats, Solver};
use crate::math::{abs, cos, ln, sin, sqrt};
use crate::source::{Potential, PotentialSpec};
use crate::state::{cons_to_prim, prim_to_cons, ConservedState, PrimitiveState};
use crate::weno::WenoVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Accuracy1,
    Accuracy2,
    Accuracy3,
    LowDensity,
    Sod,
    TwoShock,
    TwoRarefaction,
    NearVacuum,
    ShuOsher,
    NearVacuum2d,
    DiscontinuousNearVacuum2d,
    TwoRarefactionSource,
    UniformPlasma,
    Realistic2d,
}

impl ProblemId {
    pub const ALL: [ProblemId; 14] = [
        ProblemId::Accuracy1,
        ProblemId::Accuracy2,
        ProblemId::Accuracy3,
        ProblemId::LowDensity,
        ProblemId::Sod,
        ProblemId::TwoShock,
        ProblemId::TwoRarefaction,
        ProblemId::NearVacuum,
        ProblemId::ShuOsher,
        ProblemId::NearVacuum2d,
        ProblemId::DiscontinuousNearVacuum2d,
        ProblemId::TwoRarefactionSource,
        ProblemId::UniformPlasma,
        ProblemId::Realistic2d,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemId::Accuracy1 => "accuracy1",
            ProblemId::Accuracy2 => "accuracy2",
            ProblemId::Accuracy3 => "accuracy3",
            ProblemId::LowDensity => "lowdensity",
            ProblemId::Sod => "sod",
            ProblemId::TwoShock => "two-shock",
            ProblemId::TwoRarefaction => "two-rarefaction",
            ProblemId::NearVacuum => "near-vacuum",
            ProblemId::ShuOsher => "shu-osher",
            ProblemId::NearVacuum2d => "near-vacuum-2d",
            ProblemId::DiscontinuousNearVacuum2d => "discontinuous-near-vacuum-2d",
            ProblemId::TwoRarefactionSource => "two-rarefaction-source",
            ProblemId::UniformPlasma => "uniform-plasma",
            ProblemId::Realistic2d => "realistic-2d",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Tunable problem parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    /// Density floor of the low-density accuracy test.
    pub eps_tilde: f64,
    /// Absorption coefficient of the realistic plasma test.
    pub v_t: f64,
    /// Body force on or off for the sourced two-rarefaction test.
    pub source: bool,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self { eps_tilde: 1e-2, v_t: 0.0, source: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub params: ProblemParams,
    pub dim: u8,
    pub x: (f64, f64),
    pub y: (f64, f64),
    /// Default resolution `(nx, ny)`.
    pub cells: (usize, usize),
    pub bc: BoundaryCondition,
    pub t_final: f64,
    pub potential: PotentialSpec,
}

pub fn get_problem(id: &str, params: ProblemParams) -> Result<ProblemSpec> {
    Ok(ProblemSpec::new(id.parse()?, params))
}

const PERIODIC: BoundaryCondition = BoundaryCondition::uniform(BoundaryKind::Periodic);
const OUTFLOW: BoundaryCondition = BoundaryCondition::uniform(BoundaryKind::Outflow);
const EXACT: BoundaryCondition = BoundaryCondition::uniform(BoundaryKind::Exact);

impl ProblemSpec {
    pub fn new(id: ProblemId, params: ProblemParams) -> Self {
        use ProblemId::*;
        let unit = (-0.5, 0.5);
        let none = PotentialSpec::NONE;
        let line = |x, n, bc, t_final, potential| ProblemSpec {
            id,
            params,
            dim: 1,
            x,
            y: (0.0, 1.0),
            cells: (n, 1),
            bc,
            t_final,
            potential,
        };
        let square = |x, n, t_final, potential| ProblemSpec {
            id,
            params,
            dim: 2,
            x,
            y: x,
            cells: (n, n),
            bc: OUTFLOW,
            t_final,
            potential,
        };
        match id {
            Accuracy1 => line(unit, 80, PERIODIC, 0.5, none),
            Accuracy2 => line(unit, 80, EXACT, 0.5, PotentialSpec::new(Potential::LinearX { slope: 1.0 })),
            Accuracy3 => line(
                unit,
                80,
                PERIODIC,
                0.5,
                PotentialSpec::new(Potential::TravelingSine { amplitude: 1.0, k: 1.0, speed: 1.0 }),
            ),
            LowDensity => line((-0.25, 0.25), 80, EXACT, 0.5, PotentialSpec::new(Potential::LinearX { slope: 1.0 })),
            Sod => line(unit, 100, OUTFLOW, 0.125, none),
            TwoShock => line(unit, 100, OUTFLOW, 0.125, none),
            TwoRarefaction => line(unit, 200, OUTFLOW, 0.15, none),
            NearVacuum => line(unit, 100, OUTFLOW, 0.05, none),
            ShuOsher => line((-5.0, 5.0), 200, OUTFLOW, 1.8, none),
            NearVacuum2d | DiscontinuousNearVacuum2d => square((-2.0, 2.0), 200, 0.05, none),
            TwoRarefactionSource => {
                let p = if params.source {
                    PotentialSpec::new(Potential::Gaussian1d { amplitude: 25.0, center: 2.0, sharpness: 200.0 })
                } else {
                    none
                };
                line((0.0, 4.0), 500, OUTFLOW, 0.1, p)
            }
            UniformPlasma => square(
                (0.0, 4.0),
                200,
                0.1,
                PotentialSpec::new(Potential::Gaussian2d { amplitude: 25.0, cx: 2.0, cy: 2.0, sharpness: 200.0 }),
            ),
            Realistic2d => square(
                (0.0, 100.0),
                100,
                0.5,
                PotentialSpec::new(Potential::Gaussian2d { amplitude: 1.0, cx: 50.0, cy: 50.0, sharpness: 0.01 })
                    .x_force_only()
                    .with_absorption(params.v_t),
            ),
        }
    }

    pub fn initial(&self, x: f64, y: f64) -> PrimitiveState {
        use ProblemId::*;
        if let Some(w) = self.exact(x, y, 0.0) {
            return w;
        }
        let riemann = |l: [f64; 6], r: [f64; 6], at: f64| PrimitiveState::from_array(if x <= at { l } else { r });
        match self.id {
            Sod => riemann([1., 0., 0., 2., 0.05, 0.6], [0.125, 0., 0., 0.2, 0.1, 0.2], 0.0),
            TwoShock => riemann([1., 1., 1., 1., 0., 1.], [1., -1., -1., 1., 0., 1.], 0.0),
            TwoRarefaction => riemann([2., -0.5, -0.5, 1.5, 0.5, 1.5], [1., 1., 1., 1., 0., 1.], 0.0),
            NearVacuum => riemann([1., -5., 0., 2., 0., 2.], [1., 5., 0., 2., 0., 2.], 0.0),
            ShuOsher => {
                if x <= -4.0 {
                    PrimitiveState::new(3.857143, 2.699369, 0.0, 10.33333, 0.0, 10.33333)
                } else {
                    PrimitiveState::new(1.0 + 0.2 * sin(5.0 * x), 0.0, 0.0, 1.0, 0.0, 1.0)
                }
            }
            NearVacuum2d => {
                let (ex, ey) = radial(x, y);
                PrimitiveState::new(1.0, 8.0 * ex, 8.0 * ey, 2.0, 0.0, 2.0)
            }
            DiscontinuousNearVacuum2d => {
                if sqrt(x * x + y * y) < 1.0 {
                    let (ex, ey) = radial(x, y);
                    PrimitiveState::new(1.0, 8.0 * ex, 8.0 * ey, 2.0, 0.0, 2.0)
                } else {
                    PrimitiveState::new(1.0, 0.0, 0.0, 1.0, 0.0, 1.0)
                }
            }
            TwoRarefactionSource => riemann([1., -4., 0., 9., 7., 9.], [1., 4., 0., 9., 7., 9.], 2.0),
            UniformPlasma => PrimitiveState::new(0.1, 0.0, 0.0, 9.0, 7.0, 9.0),
            Realistic2d => PrimitiveState::new(0.109885, 0.0, 0.0, 1.0, 0.0, 1.0),
            Accuracy1 | Accuracy2 | Accuracy3 | LowDensity => unreachable!("smooth problems have closed forms"),
        }
    }

    /// Closed-form solution, when one exists.
    pub fn exact(&self, x: f64, _y: f64, t: f64) -> Option<PrimitiveState> {
        let xi = x - t;
        let tw = 2.0 * PI;
        let rho = 2.0 + sin(tw * xi);
        match self.id {
            ProblemId::Accuracy1 => Some(PrimitiveState::new(rho, 1.0, 0.0, 1.0, 0.0, 1.0)),
            ProblemId::Accuracy2 => {
                let p11 = 5.0 + t - x + cos(tw * xi) / (4.0 * PI);
                Some(PrimitiveState::new(rho, 1.0, 0.0, p11, 0.0, 1.0))
            }
            ProblemId::Accuracy3 => {
                let p11 = 1.5 + (cos(2.0 * tw * xi) - 8.0 * sin(tw * xi)) / 8.0;
                Some(PrimitiveState::new(rho, 1.0, 0.0, p11, 0.0, 1.0))
            }
            ProblemId::LowDensity => {
                let e = self.params.eps_tilde;
                let s = sin(tw * xi);
                let p11 = 5.0 + (t - x) * (0.5 * e + 0.25) + sin(2.0 * tw * xi) / (16.0 * PI);
                Some(PrimitiveState::new(e + s * s, 1.0, 0.0, p11, 0.0, 1.0))
            }
            _ => None,
        }
    }

    pub fn has_exact(&self) -> bool {
        matches!(self.id, ProblemId::Accuracy1 | ProblemId::Accuracy2 | ProblemId::Accuracy3 | ProblemId::LowDensity)
    }

    pub fn mesh(&self, nx: usize, ny: usize) -> Result<Mesh> {
        if self.dim == 1 {
            Mesh::new_1d(nx, self.x.0, self.x.1)
        } else {
            Mesh::new_2d(nx, ny, self.x, self.y)
        }
    }

    pub fn default_mesh(&self) -> Result<Mesh> {
        self.mesh(self.cells.0, self.cells.1)
    }

    pub fn initial_field(&self, mesh: Mesh) -> GridField {
        GridField::from_fn(mesh, |x, y| prim_to_cons(&self.initial(x, y)))
    }

    pub fn solver(&self, mesh: Mesh, weno: WenoVariant) -> Solver<'_> {
        let s = Solver::new(mesh, self.bc, weno).with_potential(self.potential);
        if self.has_exact() {
            s.with_exact(self)
        } else {
            s
        }
    }
}

impl ExactSolution for ProblemSpec {
    fn conserved(&self, x: f64, y: f64, t: f64) -> ConservedState {
        prim_to_cons(&self.exact(x, y, t).unwrap_or_else(|| self.initial(x, y)))
    }
}

fn radial(x: f64, y: f64) -> (f64, f64) {
    let r = sqrt(x * x + y * y);
    if r > 0.0 {
        (x / r, y / r)
    } else {
        (0.0, 0.0)
    }
}

/// Primitive component selector for error measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Rho,
    V1,
    V2,
    P11,
    P12,
    P22,
}

impl Variable {
    pub fn of(&self, w: &PrimitiveState) -> f64 {
        w.to_array()[*self as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl Norms {
    fn order(coarse: &Norms, fine: &Norms, ratio: f64) -> Norms {
        let o = |a: f64, b: f64| ln(a / b) / ln(ratio);
        Norms { l1: o(coarse.l1, fine.l1), l2: o(coarse.l2, fine.l2), linf: o(coarse.linf, fine.linf) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub errors: Norms,
    /// Observed orders against the next-coarser mesh.
    pub order: Option<Norms>,
    pub stats: RunStats,
}

/// Discrete norms of `numeric - exact` at the interior cell centres; `L1` and
/// `L2` carry the cell area.
pub fn error_norms(field: &GridField, exact: impl Fn(f64, f64) -> f64, var: Variable) -> Result<Norms> {
    let m = field.mesh;
    let area = if m.is_2d() { m.dx() * m.dy() } else { m.dx() };
    let mut n = Norms::default();
    for ((i, j), u) in field.interior() {
        let (x, y) = m.center(i, j);
        let e = abs(var.of(&cons_to_prim(u)?) - exact(x, y));
        n.l1 += e;
        n.l2 += e * e;
        n.linf = n.linf.max(e);
    }
    n.l1 *= area;
    n.l2 = sqrt(n.l2 * area);
    Ok(n)
}

/// Time-step rule for refinement studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    /// `dt = C dx^(5/3)`, `C` the largest value that keeps the coarsest mesh's
    /// first step within the positivity CFL `cfl`. Later steps that would
    /// exceed that CFL are shortened to it.
    Power53 { cfl: f64 },
    /// `dt = c dx^(5/3)` with a given constant.
    Fixed { c: f64 },
}

/// Runs `spec` to its final time on each mesh and reports density errors.
pub fn convergence_study(
    spec: &ProblemSpec,
    meshes: &[usize],
    weno: WenoVariant,
    rule: DtRule,
    limiter: bool,
) -> Result<Vec<ErrorReport>> {
    if !spec.has_exact() {
        return Err(Error::Config("convergence studies need a closed-form solution"));
    }
    let coarsest = *meshes.iter().min().ok_or(Error::Config("empty mesh list"))?;
    let cap = match rule {
        DtRule::Power53 { cfl } => Some(cfl),
        DtRule::Fixed { .. } => None,
    };
    let c = match rule {
        DtRule::Fixed { c } => c,
        DtRule::Power53 { cfl } => {
            let m = spec.mesh(coarsest, coarsest)?;
            spec.solver(m, weno).safe_dt(&spec.initial_field(m), 0.0, cfl)? / crate::math::powf(m.dx(), 5.0 / 3.0)
        }
    };
    let mut out: Vec<ErrorReport> = Vec::with_capacity(meshes.len());
    for &n in meshes {
        let mesh = spec.mesh(n, n)?;
        let mut field = spec.initial_field(mesh);
        let solver = spec.solver(mesh, weno);
        let dt = c * crate::math::powf(mesh.dx(), 5.0 / 3.0);
        let stats = solver.run_fixed(&mut field, 0.0, spec.t_final, dt, limiter, cap)?;
        let t = spec.t_final;
        let errors = error_norms(&field, |x, y| spec.exact(x, y, t).map_or(0.0, |w| w.rho), Variable::Rho)?;
        let order = out.last().map(|prev| Norms::order(&prev.errors, &errors, n as f64 / prev.n as f64));
        out.push(ErrorReport { n, errors, order, stats });
    }
    Ok(out)
}
