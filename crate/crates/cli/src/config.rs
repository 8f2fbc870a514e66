//! Run configuration: a flat `key = value` file merged with command-line
//! overrides.

use std::path::PathBuf;
use std::str::FromStr;

use tenmoment_core::problems::{ProblemParams, ProblemSpec};
use tenmoment_core::{CflPolicy, ProblemId, WenoKind, WenoVariant};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimiterMode {
    On,
    Off,
    Adaptive,
}

impl FromStr for LimiterMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "on" => Ok(LimiterMode::On),
            "off" => Ok(LimiterMode::Off),
            "adaptive" => Ok(LimiterMode::Adaptive),
            _ => Err(CliError::config(format!("limiter must be on, off or adaptive, got `{s}`"))),
        }
    }
}

impl LimiterMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LimiterMode::On => "on",
            LimiterMode::Off => "off",
            LimiterMode::Adaptive => "adaptive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Vtk,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "vtk" => Ok(Format::Vtk),
            _ => Err(CliError::config(format!("format must be csv or vtk, got `{s}`"))),
        }
    }
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Vtk => "vtk",
        }
    }
}

pub fn parse_weno(s: &str) -> Result<WenoKind, CliError> {
    match s {
        "js" => Ok(WenoKind::Js),
        "z" => Ok(WenoKind::Z),
        "ao" => Ok(WenoKind::Ao),
        _ => Err(CliError::config(format!("weno must be js, z or ao, got `{s}`"))),
    }
}

pub fn weno_name(k: WenoKind) -> &'static str {
    WenoVariant::new(k).name()
}

fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|v| v.trim().parse::<usize>().map_err(|_| CliError::config(format!("bad mesh size `{v}` in `{s}`"))))
        .collect()
}

fn parse_bool(s: &str) -> Result<bool, CliError> {
    match s {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(CliError::config(format!("expected a boolean, got `{s}`"))),
    }
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub params: ProblemParams,
    /// `None` takes the problem's default resolution.
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    /// One scheme for plain runs; convergence studies may list several.
    pub weno: Vec<WenoKind>,
    pub limiter: LimiterMode,
    /// `None` picks 0.95 without the limiter and 1/12 with it.
    pub cfl_main: Option<f64>,
    pub cfl_safe: f64,
    pub t_final: Option<f64>,
    pub out: PathBuf,
    pub format: Format,
    /// Write a snapshot every `cadence` accepted steps; 0 writes the final field only.
    pub cadence: usize,
    pub convergence: Option<Vec<usize>>,
    pub timing: Option<Vec<usize>>,
    pub cross_section: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemId::Sod,
            params: ProblemParams::default(),
            nx: None,
            ny: None,
            weno: vec![WenoKind::Ao],
            limiter: LimiterMode::Adaptive,
            cfl_main: None,
            cfl_safe: 1.0 / 12.0,
            t_final: None,
            out: PathBuf::from("out"),
            format: Format::Csv,
            cadence: 0,
            convergence: None,
            timing: None,
            cross_section: false,
        }
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num =
            |v: &str| v.parse::<f64>().map_err(|_| CliError::config(format!("`{key}` expects a number, got `{v}`")));
        let int = |v: &str| {
            v.parse::<usize>().map_err(|_| CliError::config(format!("`{key}` expects an integer, got `{v}`")))
        };
        match key {
            "problem" => self.problem = value.parse()?,
            "nx" => self.nx = Some(int(value)?),
            "ny" => self.ny = Some(int(value)?),
            "weno" => self.weno = value.split(',').map(|s| parse_weno(s.trim())).collect::<Result<_, _>>()?,
            "limiter" => self.limiter = value.parse()?,
            "cfl" | "cfl_main" => self.cfl_main = Some(num(value)?),
            "cfl_safe" => self.cfl_safe = num(value)?,
            "tfinal" | "t_final" => self.t_final = Some(num(value)?),
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            "cadence" => self.cadence = int(value)?,
            "convergence" => self.convergence = Some(parse_list(value)?),
            "timing" => self.timing = Some(parse_list(value)?),
            "cross_section" => self.cross_section = parse_bool(value)?,
            "eps_tilde" => self.params.eps_tilde = num(value)?,
            "v_t" => self.params.v_t = num(value)?,
            "source" => self.params.source = parse_bool(value)?,
            _ => return Err(CliError::config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn spec(&self) -> ProblemSpec {
        let mut spec = ProblemSpec::new(self.problem, self.params);
        if let Some(t) = self.t_final {
            spec.t_final = t;
        }
        spec
    }

    pub fn cells(&self) -> (usize, usize) {
        let spec = self.spec();
        let nx = self.nx.unwrap_or(spec.cells.0);
        let ny = if spec.dim == 1 { 1 } else { self.ny.or(self.nx).unwrap_or(spec.cells.1) };
        (nx, ny)
    }

    pub fn scheme(&self) -> WenoVariant {
        WenoVariant::new(self.weno[0])
    }

    pub fn policy(&self) -> CflPolicy {
        let mut p = match self.limiter {
            LimiterMode::Adaptive => CflPolicy::adaptive(),
            LimiterMode::On => CflPolicy::uniform(1.0 / 12.0, true),
            LimiterMode::Off => CflPolicy::uniform(CflPolicy::MAIN, false),
        };
        if let Some(c) = self.cfl_main {
            p.cfl_main = c;
        }
        p.cfl_safe = self.cfl_safe;
        p
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let spec = self.spec();
        if self.weno.is_empty() {
            return Err(CliError::config("at least one weno variant is required"));
        }
        if self.weno.len() > 1 && self.convergence.is_none() {
            return Err(CliError::config("several weno variants are only allowed in convergence mode"));
        }
        if spec.dim == 1 && self.ny.is_some_and(|n| n != 1) {
            return Err(CliError::config(format!("{} is one-dimensional; ny must be omitted", self.problem)));
        }
        if !(spec.t_final > 0.0) {
            return Err(CliError::config("final time must be positive"));
        }
        if self.limiter != LimiterMode::Off && !(self.cfl_safe > 0.0 && self.cfl_safe <= 1.0 / 12.0) {
            return Err(CliError::config("cfl_safe must lie in (0, 1/12] when the limiter is used"));
        }
        self.policy().validate()?;
        if self.convergence.is_some() && !spec.has_exact() {
            return Err(CliError::config(format!(
                "{} has no closed-form solution for a convergence study",
                self.problem
            )));
        }
        if self.convergence.is_some() && self.timing.is_some() {
            return Err(CliError::config("convergence and timing modes are exclusive"));
        }
        let (nx, ny) = self.cells();
        if nx < 3 || ny < 1 || (spec.dim == 2 && ny < 3) {
            return Err(CliError::config("meshes need at least three cells per direction"));
        }
        Ok(())
    }

    /// `key=value` lines describing this configuration.
    pub fn echo(&self) -> Vec<(String, String)> {
        let spec = self.spec();
        let (nx, ny) = self.cells();
        let p = self.policy();
        let list = |v: &Option<Vec<usize>>| {
            v.as_ref().map(|l| l.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")).unwrap_or_default()
        };
        vec![
            ("problem".into(), self.problem.to_string()),
            ("eps_tilde".into(), self.params.eps_tilde.to_string()),
            ("v_t".into(), self.params.v_t.to_string()),
            ("source".into(), self.params.source.to_string()),
            ("nx".into(), nx.to_string()),
            ("ny".into(), ny.to_string()),
            ("weno".into(), self.weno.iter().map(|k| weno_name(*k)).collect::<Vec<_>>().join(",")),
            ("limiter".into(), self.limiter.as_str().into()),
            ("cfl_main".into(), p.cfl_main.to_string()),
            ("cfl_safe".into(), p.cfl_safe.to_string()),
            ("t_final".into(), spec.t_final.to_string()),
            ("format".into(), self.format.as_str().into()),
            ("cadence".into(), self.cadence.to_string()),
            ("convergence".into(), list(&self.convergence)),
            ("timing".into(), list(&self.timing)),
            ("cross_section".into(), self.cross_section.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_text("# sod run\nproblem = near-vacuum\nnx = 600 # fine\nlimiter=on\n\nweno = js\n").unwrap();
        assert_eq!(c.problem, ProblemId::NearVacuum);
        assert_eq!(c.cells(), (600, 1));
        assert_eq!(c.limiter, LimiterMode::On);
        c.set("weno", "z").unwrap();
        assert_eq!(c.weno, vec![WenoKind::Z]);
        c.validate().unwrap();
        assert_eq!(c.policy().cfl_main, 1.0 / 12.0);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("nx 10").is_err());
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("weno", "eno").is_err());
        assert!(c.set("nx", "-3").is_err());
        c.set("cfl_safe", "0.2").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("ny", "10").unwrap();
        assert!(c.validate().is_err(), "sod is 1-D");
        let mut c = RunConfig::default();
        c.set("convergence", "10,20").unwrap();
        assert!(c.validate().is_err(), "sod has no closed form");
    }

    #[test]
    fn square_default_for_2d() {
        let mut c = RunConfig::default();
        c.set("problem", "near-vacuum-2d").unwrap();
        c.set("nx", "50").unwrap();
        assert_eq!(c.cells(), (50, 50));
        c.set("ny", "40").unwrap();
        assert_eq!(c.cells(), (50, 40));
    }
}
