//! SSPRK3 and integrating-factor SSPRK3 steps, time-step selection and the
//! adaptive-CFL driver.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::{max_rate, max_speeds, residual, FluxOptions, W_HAT};
use crate::grid::{fill_ghosts, BoundaryCondition, ExactFn, GridField, Mesh};
use crate::source::{absorption_residual, propagate_source, source_integrals, PotentialSpec, SourceIntegrals};
use crate::state::{is_admissible, ConservedState, Vec6};
use crate::weno::WenoVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CflMode {
    /// Every step at `cfl_main`, limiter fixed on or off.
    Uniform { limiter: bool },
    /// Try `cfl_main` without the limiter; on failure redo the step at
    /// `cfl_safe` with the limiter.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflPolicy {
    pub mode: CflMode,
    pub cfl_main: f64,
    pub cfl_safe: f64,
}

impl CflPolicy {
    pub const MAIN: f64 = 0.95;

    pub fn adaptive() -> Self {
        Self { mode: CflMode::Adaptive, cfl_main: Self::MAIN, cfl_safe: W_HAT }
    }

    pub fn uniform(cfl: f64, limiter: bool) -> Self {
        Self { mode: CflMode::Uniform { limiter }, cfl_main: cfl, cfl_safe: W_HAT }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_main > 0.0 && self.cfl_main <= 1.0) {
            return Err(Error::Config("cfl must lie in (0, 1]"));
        }
        if !(self.cfl_safe > 0.0 && self.cfl_safe <= W_HAT) {
            return Err(Error::Config("safe cfl must lie in (0, 1/12]"));
        }
        Ok(())
    }
}

impl Default for CflPolicy {
    fn default() -> Self {
        Self::adaptive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub field: GridField,
    pub dt_used: f64,
    pub limiter_was_needed: bool,
    pub retried: bool,
    /// Faces where the scaling limiter changed the flux, summed over stages.
    pub limited_faces: usize,
}

/// `cfl / max_ij (alpha^x / dx + alpha^y / dy)`.
pub fn compute_dt(field: &GridField, cfl: f64) -> Result<f64> {
    Ok(cfl / max_rate(field)?)
}

/// `cfl / (max alpha^x / dx + max alpha^y / dy)`, the bound under which the
/// limited forward-Euler step is provably admissible. The maxima include the
/// first ghost layer, so ghosts must be filled.
pub fn positivity_dt(field: &GridField, cfl: f64) -> Result<f64> {
    let (ax, ay) = max_speeds(field)?;
    let m = field.mesh;
    let rate = ax / m.dx() + if m.is_2d() { ay / m.dy() } else { 0.0 };
    Ok(cfl / rate)
}

/// Everything a step needs besides the field.
pub struct Solver<'a> {
    pub mesh: Mesh,
    pub bc: BoundaryCondition,
    pub weno: WenoVariant,
    pub potential: PotentialSpec,
    pub exact: Option<ExactFn<'a>>,
    pub eps: f64,
    centers: Vec<(f64, f64)>,
}

/// Per-cell propagator integrals for one step.
struct StepIntegrals {
    full: Vec<SourceIntegrals>,
    first_half: Vec<SourceIntegrals>,
    second_half: Vec<SourceIntegrals>,
}

impl<'a> Solver<'a> {
    pub fn new(mesh: Mesh, bc: BoundaryCondition, weno: WenoVariant) -> Self {
        let centers = (0..mesh.ny).flat_map(|j| (0..mesh.nx).map(move |i| mesh.center(i, j))).collect();
        Self { mesh, bc, weno, potential: PotentialSpec::NONE, exact: None, eps: crate::DEFAULT_EPS, centers }
    }

    pub fn with_potential(mut self, potential: PotentialSpec) -> Self {
        self.potential = potential;
        self
    }

    pub fn with_exact(mut self, exact: ExactFn<'a>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// `R(u)` at time `t`, ghosts refreshed first; absorption included.
    pub fn residual(&self, field: &mut GridField, t: f64, limiter: bool) -> Result<(Vec<Vec6>, usize)> {
        fill_ghosts(field, &self.bc, t, self.exact)?;
        let mut r = residual(field, &FluxOptions::new(self.weno, limiter, self.eps))?;
        if self.potential.has_absorption() {
            for ((res, u), &(x, y)) in r.values.iter_mut().zip(interior(field)).zip(&self.centers) {
                let a = absorption_residual(u, &self.potential, x, y, t);
                res[3] += a[3];
            }
        }
        Ok((r.values, r.limited_faces))
    }

    fn integrals(&self, t: f64, dt: f64) -> StepIntegrals {
        let p = &self.potential;
        let mut s = StepIntegrals {
            full: Vec::with_capacity(self.centers.len()),
            first_half: Vec::with_capacity(self.centers.len()),
            second_half: Vec::with_capacity(self.centers.len()),
        };
        for &(x, y) in &self.centers {
            s.full.push(source_integrals(p, x, y, t, dt));
            s.first_half.push(source_integrals(p, x, y, t, 0.5 * dt));
            s.second_half.push(source_integrals(p, x, y, t + 0.5 * dt, 0.5 * dt));
        }
        s
    }

    /// One SSPRK3 step; every stage value is checked for admissibility.
    pub fn ssprk3_step(&self, field: &GridField, t: f64, dt: f64, limiter: bool) -> Result<StepOutcome> {
        let u0 = interior(field).copied().collect::<Vec<_>>();
        let mut work = field.clone();
        let mut limited = 0;

        let (r, n) = self.residual(&mut work, t, limiter)?;
        limited += n;
        let u1 = combine(&u0, 0.0, &u0, 1.0, &r, dt);
        self.check(&u1, 1)?;

        store(&mut work, &u1);
        let (r, n) = self.residual(&mut work, t + dt, limiter)?;
        limited += n;
        let u2 = combine(&u0, 0.75, &u1, 0.25, &r, dt);
        self.check(&u2, 2)?;

        store(&mut work, &u2);
        let (r, n) = self.residual(&mut work, t + 0.5 * dt, limiter)?;
        limited += n;
        let u3 = combine(&u0, 1.0 / 3.0, &u2, 2.0 / 3.0, &r, dt);
        self.check(&u3, 3)?;

        store(&mut work, &u3);
        Ok(StepOutcome {
            field: work,
            dt_used: dt,
            limiter_was_needed: limited > 0,
            retried: false,
            limited_faces: limited,
        })
    }

    /// One integrating-factor SSPRK3 step. The forward-Euler values are
    /// checked before the propagators act, and the stage results after.
    pub fn if_ssprk3_step(&self, field: &GridField, t: f64, dt: f64, limiter: bool) -> Result<StepOutcome> {
        let s = self.integrals(t, dt);
        let u0 = interior(field).copied().collect::<Vec<_>>();
        let mut work = field.clone();
        let mut limited = 0;

        let (r, n) = self.residual(&mut work, t, limiter)?;
        limited += n;
        let v1 = combine(&u0, 0.0, &u0, 1.0, &r, dt);
        self.check(&v1, 1)?;
        let u1: Vec<_> = v1.iter().zip(&s.full).map(|(v, c)| propagate_source(v, *c)).collect();

        store(&mut work, &u1);
        let (r, n) = self.residual(&mut work, t + dt, limiter)?;
        limited += n;
        let v2 = combine(&u0, 0.0, &u1, 1.0, &r, dt);
        self.check(&v2, 2)?;
        let u2: Vec<_> = (0..u0.len())
            .map(|k| {
                propagate_source(&u0[k], s.first_half[k]) * 0.75
                    + propagate_source(&v2[k], s.second_half[k].negate()) * 0.25
            })
            .collect();
        self.check(&u2, 2)?;

        store(&mut work, &u2);
        let (r, n) = self.residual(&mut work, t + 0.5 * dt, limiter)?;
        limited += n;
        let v3 = combine(&u0, 0.0, &u2, 1.0, &r, dt);
        self.check(&v3, 3)?;
        let u3: Vec<_> = (0..u0.len())
            .map(|k| {
                propagate_source(&u0[k], s.full[k]) * (1.0 / 3.0)
                    + propagate_source(&v3[k], s.second_half[k]) * (2.0 / 3.0)
            })
            .collect();
        self.check(&u3, 3)?;

        store(&mut work, &u3);
        Ok(StepOutcome {
            field: work,
            dt_used: dt,
            limiter_was_needed: limited > 0,
            retried: false,
            limited_faces: limited,
        })
    }

    /// The integrating-factor step when a body force is present, plain SSPRK3
    /// otherwise.
    pub fn step(&self, field: &GridField, t: f64, dt: f64, limiter: bool) -> Result<StepOutcome> {
        if self.potential.has_force() {
            self.if_ssprk3_step(field, t, dt, limiter)
        } else {
            self.ssprk3_step(field, t, dt, limiter)
        }
    }

    /// One step under `policy`, never past `t_final`.
    pub fn advance_adaptive(&self, field: &GridField, t: f64, t_final: f64, policy: &CflPolicy) -> Result<StepOutcome> {
        let remaining = t_final - t;
        match policy.mode {
            CflMode::Uniform { limiter } => {
                let dt = if limiter && policy.cfl_main <= W_HAT {
                    self.safe_dt(field, t, policy.cfl_main)?
                } else {
                    compute_dt(field, policy.cfl_main)?
                };
                self.step(field, t, dt.min(remaining), limiter)
            }
            CflMode::Adaptive => {
                let dt = compute_dt(field, policy.cfl_main)?.min(remaining);
                match self.step(field, t, dt, false) {
                    Err(Error::PositivityFailure { .. }) => {}
                    other => return other,
                }
                let dt = self.safe_dt(field, t, policy.cfl_safe)?.min(remaining);
                match self.step(field, t, dt, true) {
                    Ok(mut out) => {
                        out.retried = true;
                        out.limiter_was_needed = true;
                        Ok(out)
                    }
                    Err(Error::PositivityFailure { .. }) => {
                        Err(Error::Fatal { t, detail: "limited step at the safe CFL left the admissible set" })
                    }
                    Err(e) => Err(e),
                }
            }
        }
    }

    /// Integrates from `t` to `t_final` under `policy`; `observe` sees every
    /// accepted step.
    pub fn run(
        &self,
        field: &mut GridField,
        t: f64,
        t_final: f64,
        policy: &CflPolicy,
        mut observe: impl FnMut(&StepOutcome, f64),
    ) -> Result<RunStats> {
        let mut stats = RunStats::default();
        let mut t = t;
        while t < t_final {
            let out = self.advance_adaptive(field, t, t_final, policy)?;
            t = if t_final - (t + out.dt_used) <= 1e-14 * t_final.abs().max(1.0) { t_final } else { t + out.dt_used };
            stats.record(&out);
            observe(&out, t);
            *field = out.field;
        }
        self.refresh(field, t)?;
        Ok(stats)
    }

    /// Integrates with `ceil((t_final - t) / dt)` equal steps. With
    /// `cfl_cap` set, any step longer than the positivity bound
    /// [`positivity_dt`] of the current state is shortened to it.
    pub fn run_fixed(
        &self,
        field: &mut GridField,
        t: f64,
        t_final: f64,
        dt: f64,
        limiter: bool,
        cfl_cap: Option<f64>,
    ) -> Result<RunStats> {
        let steps = crate::math::ceil((t_final - t) / dt * (1.0 - 1e-12)).max(1.0);
        let nominal = (t_final - t) / steps;
        let mut stats = RunStats::default();
        let mut now = t;
        while now < t_final {
            let mut dt = nominal;
            if let Some(cfl) = cfl_cap {
                dt = dt.min(self.safe_dt(field, now, cfl)?);
            }
            let last = t_final - now <= dt * (1.0 + 1e-9);
            if last {
                dt = t_final - now;
            }
            let out = self.step(field, now, dt, limiter)?;
            now = if last { t_final } else { now + dt };
            stats.record(&out);
            *field = out.field;
        }
        self.refresh(field, t_final)?;
        Ok(stats)
    }

    /// Refills the ghosts for time `t`.
    pub fn refresh(&self, field: &mut GridField, t: f64) -> Result<()> {
        fill_ghosts(field, &self.bc, t, self.exact)
    }

    /// [`positivity_dt`] of `field` with its ghosts filled for time `t`.
    pub fn safe_dt(&self, field: &GridField, t: f64, cfl: f64) -> Result<f64> {
        let mut g = field.clone();
        self.refresh(&mut g, t)?;
        positivity_dt(&g, cfl)
    }

    fn check(&self, values: &[ConservedState], stage: u8) -> Result<()> {
        match values.iter().position(|u| !is_admissible(u, self.eps)) {
            Some(cell) => Err(Error::PositivityFailure { stage, cell }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunStats {
    pub steps: usize,
    pub retries: usize,
    pub limited_faces: usize,
    /// Steps in which the limiter changed at least one flux.
    pub limited_steps: usize,
}

impl RunStats {
    fn record(&mut self, out: &StepOutcome) {
        self.steps += 1;
        self.retries += out.retried as usize;
        self.limited_faces += out.limited_faces;
        self.limited_steps += (out.limited_faces > 0) as usize;
    }
}

fn interior(field: &GridField) -> impl Iterator<Item = &ConservedState> + '_ {
    field.interior().map(|(_, u)| u)
}

fn store(field: &mut GridField, values: &[ConservedState]) {
    let m = field.mesh;
    for j in 0..m.ny {
        for i in 0..m.nx {
            *field.get_mut(i, j) = values[j * m.nx + i];
        }
    }
}

/// `a u + b (v + dt r)` cellwise.
fn combine(u: &[ConservedState], a: f64, v: &[ConservedState], b: f64, r: &[Vec6], dt: f64) -> Vec<ConservedState> {
    u.iter()
        .zip(v)
        .zip(r)
        .map(|((u, v), r)| ConservedState(core::array::from_fn(|k| a * u.0[k] + b * (v.0[k] + dt * r[k]))))
        .collect()
}
