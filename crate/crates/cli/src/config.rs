//! Run configuration: an optional TOML file overlaid by command-line flags.
//!
//! Recognised keys (all optional):
//!
//! ```toml
//! b1 = 2.0
//! c = 1.0
//! z_max = 50.0
//! format = "json"      # text | csv | json
//! seed = 20240601
//! samples = 1000       # base sweep size for `verify`
//!
//! [tolerances]
//! membership = 1e-9
//! root = 1e-9
//! boundary = 1e-9
//! tangency = 1e-12
//! merge = 1e-6
//! trim = 1e-6
//! pole_guard = 1e-3
//!
//! [grid]               # flood-fill voxel grid
//! z = [-2.0, 2.0]
//! t = [-3.0, 3.0]
//! Y = [-6.0, 6.0]
//! cells = [120, 120, 120]
//! guard = 2
//! ```

use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;
use wave_manifold::oracle::{GridSpec, SweepConfig};
use wave_manifold::{ModelParams, Tolerances};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    b1: Option<f64>,
    c: Option<f64>,
    z_max: Option<f64>,
    format: Option<Format>,
    seed: Option<u64>,
    samples: Option<usize>,
    #[serde(default)]
    tolerances: FileTolerances,
    #[serde(default)]
    grid: FileGrid,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    membership: Option<f64>,
    root: Option<f64>,
    boundary: Option<f64>,
    tangency: Option<f64>,
    merge: Option<f64>,
    trim: Option<f64>,
    pole_guard: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGrid {
    z: Option<(f64, f64)>,
    t: Option<(f64, f64)>,
    #[serde(rename = "Y", alias = "y")]
    y: Option<(f64, f64)>,
    cells: Option<[usize; 3]>,
    guard: Option<usize>,
}

/// Flag values that override the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub b1: Option<f64>,
    pub c: Option<f64>,
    pub z_max: Option<f64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub membership: Option<f64>,
    pub root: Option<f64>,
    pub boundary: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub params: ModelParams<f64>,
    pub tolerances: Tolerances<f64>,
    pub z_max: f64,
    pub grid: GridSpec<f64>,
    /// `None` lets each subcommand pick its natural format.
    pub format: Option<Format>,
    pub seed: u64,
    pub samples: usize,
}

pub const DEFAULT_Z_MAX: f64 = 50.0;

impl Config {
    pub fn load(path: Option<&Path>, flags: &Overrides) -> CliResult<Config> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        Config::merge(file, flags)
    }

    fn merge(file: FileConfig, flags: &Overrides) -> CliResult<Config> {
        let sweep = SweepConfig::default();
        let base = ModelParams::<f64>::default();
        let b1 = flags.b1.or(file.b1).unwrap_or(base.b1());
        let c = flags.c.or(file.c).unwrap_or(base.c());
        let params = ModelParams::new(b1, c)?;

        let mut tol = Tolerances::default();
        let ft = &file.tolerances;
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut tol.membership, flags.membership.or(ft.membership));
        set(&mut tol.root, flags.root.or(ft.root));
        set(&mut tol.boundary, flags.boundary.or(ft.boundary));
        set(&mut tol.tangency, ft.tangency);
        set(&mut tol.merge, ft.merge);
        set(&mut tol.trim, ft.trim);
        set(&mut tol.pole_guard, ft.pole_guard);

        let fg = &file.grid;
        let d = GridSpec::default();
        let grid = GridSpec {
            z: fg.z.unwrap_or(d.z),
            t: fg.t.unwrap_or(d.t),
            y: fg.y.unwrap_or(d.y),
            cells: fg.cells.unwrap_or(d.cells),
            guard: fg.guard.unwrap_or(d.guard),
        };

        let cfg = Config {
            params,
            tolerances: tol,
            z_max: flags.z_max.or(file.z_max).unwrap_or(DEFAULT_Z_MAX),
            grid,
            format: flags.format.or(file.format),
            seed: flags.seed.or(file.seed).unwrap_or(sweep.seed),
            samples: file.samples.unwrap_or(sweep.samples),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        self.tolerances.validate()?;
        self.grid.validate()?;
        let min = self.params.critical_z() + 1.0;
        if !(self.z_max > min && self.z_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "z_max must be finite and exceed 1/sqrt(b1+1) + 1 = {min}"
            )));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            params: self.params,
            tolerances: self.tolerances,
            seed: self.seed,
            samples: self.samples,
            z_max: self.z_max,
            grid: self.grid,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, flags: &Overrides) -> CliResult<Config> {
        let file: FileConfig = toml::from_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
        Config::merge(file, flags)
    }

    #[test]
    fn flags_win_over_file() {
        let flags = Overrides {
            b1: Some(3.0),
            ..Default::default()
        };
        let cfg = parse("b1 = 1.5\nc = 2.0\n[tolerances]\nroot = 1e-8\n", &flags).unwrap();
        assert_eq!(cfg.params.b1(), 3.0);
        assert_eq!(cfg.params.c(), 2.0);
        assert_eq!(cfg.tolerances.root, 1e-8);
    }

    #[test]
    fn rejects_bad_values() {
        let none = Overrides::default();
        assert!(matches!(
            parse("z_max = 1.2", &none),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse("[tolerances]\nboundary = 0.0", &none),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse("[grid]\ncells = [4, 4, 4]", &none),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(parse("b1 = 0.5", &none), Err(CliError::Usage(_))));
        assert!(parse("colour = 1", &none).is_err());
    }
}
