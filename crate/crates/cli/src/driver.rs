//! The three run modes: a single simulation, a refinement study and an
//! adaptive-versus-uniform timing comparison.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use tenmoment_core::integrator::RunStats;
use tenmoment_core::problems::{convergence_study, DtRule, ErrorReport, ProblemSpec};
use tenmoment_core::state::is_admissible;
use tenmoment_core::{CflPolicy, Error, GridField, WenoVariant, DEFAULT_EPS};

use crate::config::{weno_name, Format, LimiterMode, RunConfig};
use crate::error::CliError;
use crate::output::{self, num, RunManifest};

/// Result of one time-dependent simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub field: GridField,
    pub stats: RunStats,
    pub seconds: f64,
}

/// Integrates `spec` on an `nx` by `ny` mesh under `policy`; `observe` sees
/// the field after every accepted step with the step count and time.
pub fn simulate(
    spec: &ProblemSpec,
    (nx, ny): (usize, usize),
    weno: WenoVariant,
    policy: &CflPolicy,
    mut observe: impl FnMut(&GridField, usize, f64) -> Result<(), CliError>,
) -> Result<Simulation, CliError> {
    let mesh = spec.mesh(nx, ny)?;
    let mut field = spec.initial_field(mesh);
    let solver = spec.solver(mesh, weno);
    let start = Instant::now();
    let mut steps = 0;
    let mut now = 0.0;
    let mut hook_error = None;
    let result = solver.run(&mut field, 0.0, spec.t_final, policy, |out, t| {
        steps += 1;
        now = t;
        if hook_error.is_none() {
            if let Err(e) = observe(&out.field, steps, t) {
                hook_error = Some(e);
            }
        }
    });
    let seconds = start.elapsed().as_secs_f64();
    if let Some(e) = hook_error {
        return Err(e);
    }
    let stats = result.map_err(|source| CliError::Solver { steps, t: now, source })?;
    if let Some(cell) = field.interior().position(|(_, u)| !is_admissible(u, DEFAULT_EPS)) {
        return Err(CliError::Solver { steps, t: now, source: Error::PositivityFailure { stage: 3, cell } });
    }
    Ok(Simulation { field, stats, seconds })
}

fn render(field: &GridField, format: Format, title: &str) -> Result<String, CliError> {
    match format {
        Format::Csv => output::field_csv(field),
        Format::Vtk if field.mesh.is_2d() => output::field_vtk(field, title),
        Format::Vtk => Err(CliError::config("vtk output needs a 2-D problem")),
    }
}

fn record(manifest: &mut RunManifest, out: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let sum = output::write_file(&out.join(name), text)?;
    manifest.files.push((name.into(), sum));
    Ok(())
}

/// Runs whichever mode `config` selects and writes `manifest.txt` last.
pub fn run(config: &RunConfig) -> Result<RunManifest, CliError> {
    config.validate()?;
    let mut manifest = RunManifest::default();
    for (k, v) in config.echo() {
        manifest.push(k, v);
    }
    if config.convergence.is_some() {
        convergence_mode(config, &mut manifest)?;
    } else if config.timing.is_some() {
        timing_mode(config, &mut manifest)?;
    } else {
        single_run(config, &mut manifest)?;
    }
    let text = manifest.render();
    output::write_file(&config.out.join("manifest.txt"), &text)?;
    Ok(manifest)
}

fn single_run(config: &RunConfig, manifest: &mut RunManifest) -> Result<(), CliError> {
    let spec = config.spec();
    let id = config.problem.as_str();
    let ext = config.format.as_str();
    let out = config.out.clone();
    let mut snapshots = Vec::new();
    let sim = simulate(&spec, config.cells(), config.scheme(), &config.policy(), |field, step, t| {
        if config.cadence > 0 && step % config.cadence == 0 {
            let name = format!("{id}_{step:06}.{ext}");
            let sum = output::write_file(&out.join(&name), &render(field, config.format, &format!("{id} t={t}"))?)?;
            snapshots.push((name.into(), sum));
        }
        Ok(())
    })?;
    manifest.files.extend(snapshots);
    manifest.push("wall_clock_s", sim.seconds);
    manifest.push("steps", sim.stats.steps);
    manifest.push("retries", sim.stats.retries);
    manifest.push("limited_steps", sim.stats.limited_steps);
    manifest.push("limited_faces", sim.stats.limited_faces);
    if !spec.has_exact() {
        manifest.push("exact_solution", "none (compare against a fine-mesh run)");
    }
    let title = format!("{id} t={}", spec.t_final);
    record(manifest, &out, &format!("{id}.{ext}"), &render(&sim.field, config.format, &title)?)?;
    if config.cross_section {
        let cut = output::default_cut(config.problem)
            .ok_or_else(|| CliError::config(format!("{id} has no standard cross-section")))?;
        record(manifest, &out, &format!("{id}_cut.csv"), &output::cross_section_csv(&sim.field, cut)?)?;
    }
    Ok(())
}

/// One convergence table row per (scheme, mesh).
pub fn convergence_table(reports: &[(String, Vec<ErrorReport>)]) -> String {
    let mut s = String::from("weno,n,l1,l1_order,l2,l2_order,linf,linf_order,steps,limited_faces\n");
    for (name, rows) in reports {
        for r in rows {
            let o = |f: fn(&tenmoment_core::problems::Norms) -> f64| {
                r.order.as_ref().map(|n| num(f(n))).unwrap_or_default()
            };
            let _ = writeln!(
                s,
                "{name},{},{},{},{},{},{},{},{},{}",
                r.n,
                num(r.errors.l1),
                o(|n| n.l1),
                num(r.errors.l2),
                o(|n| n.l2),
                num(r.errors.linf),
                o(|n| n.linf),
                r.stats.steps,
                r.stats.limited_faces
            );
        }
    }
    s
}

fn convergence_mode(config: &RunConfig, manifest: &mut RunManifest) -> Result<(), CliError> {
    let spec = config.spec();
    let meshes = config.convergence.as_deref().unwrap_or_default();
    let cfl = config.policy().cfl_main;
    let limiter = config.limiter != LimiterMode::Off;
    let start = Instant::now();
    let mut reports = Vec::new();
    for &kind in &config.weno {
        let rows = convergence_study(&spec, meshes, WenoVariant::new(kind), DtRule::Power53 { cfl }, limiter)
            .map_err(|source| CliError::Solver { steps: 0, t: 0.0, source })?;
        reports.push((weno_name(kind).to_string(), rows));
    }
    manifest.push("wall_clock_s", start.elapsed().as_secs_f64());
    manifest.push("time_step", format!("C dx^(5/3), C from cfl {cfl} on the coarsest mesh"));
    record(manifest, &config.out, "convergence.csv", &convergence_table(&reports))
}

/// Adaptive and uniform wall-clock times on one mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRow {
    pub nx: usize,
    pub ny: usize,
    pub adaptive: f64,
    pub uniform: f64,
    pub adaptive_steps: usize,
    pub uniform_steps: usize,
    pub retries: usize,
}

impl TimingRow {
    pub fn speedup(&self) -> f64 {
        self.uniform / self.adaptive
    }
}

/// Times the adaptive policy against the limiter at the uniform safe CFL.
pub fn timing_comparison(
    spec: &ProblemSpec,
    meshes: &[usize],
    weno: WenoVariant,
    cfl_safe: f64,
) -> Result<Vec<TimingRow>, CliError> {
    let mut rows = Vec::new();
    for &n in meshes {
        let cells = if spec.dim == 1 { (n, 1) } else { (n, n) };
        let mut adaptive = CflPolicy::adaptive();
        adaptive.cfl_safe = cfl_safe;
        let a = simulate(spec, cells, weno, &adaptive, |_, _, _| Ok(()))?;
        let u = simulate(spec, cells, weno, &CflPolicy::uniform(cfl_safe, true), |_, _, _| Ok(()))?;
        rows.push(TimingRow {
            nx: cells.0,
            ny: cells.1,
            adaptive: a.seconds,
            uniform: u.seconds,
            adaptive_steps: a.stats.steps,
            uniform_steps: u.stats.steps,
            retries: a.stats.retries,
        });
    }
    Ok(rows)
}

pub fn timing_table(rows: &[TimingRow]) -> String {
    let mut s = String::from("nx,ny,adaptive_s,uniform_s,speedup,adaptive_steps,uniform_steps,retries\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.nx,
            r.ny,
            num(r.adaptive),
            num(r.uniform),
            num(r.speedup()),
            r.adaptive_steps,
            r.uniform_steps,
            r.retries
        );
    }
    s
}

fn timing_mode(config: &RunConfig, manifest: &mut RunManifest) -> Result<(), CliError> {
    let meshes = config.timing.as_deref().unwrap_or_default();
    let rows = timing_comparison(&config.spec(), meshes, config.scheme(), config.cfl_safe)?;
    record(manifest, &config.out, "timing.csv", &timing_table(&rows))
}
