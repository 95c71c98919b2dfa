//! Scenario configuration files (TOML) and the antenna gain-curve CSV.
//!
//! Unknown keys are rejected so typos fail loudly. Angles are written in
//! degrees and converted at this boundary; everything else is SI base units.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::analysis::{AnalysisConfig, WindowForm};
use crate::antenna::AntennaModel;
use crate::grid::FrequencyGrid;
use crate::materials::{Material, SurfaceAssignment};
use crate::scenario::CorridorScenario;
use crate::{Error, Result};

const SCENARIO_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    format_version: u32,
    corridor: CorridorBlock,
    surfaces: SurfacesBlock,
    antenna: AntennaBlock,
    sweep: SweepBlock,
    distances: DistancesBlock,
    #[serde(default)]
    simulation: SimulationBlock,
    #[serde(default)]
    analysis: AnalysisBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorridorBlock {
    width_m: f64,
    height_m: f64,
    tx_offset_w_m: f64,
    tx_height_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MaterialSpec {
    Named(String),
    Inline { name: String, rel_permittivity: f64 },
}

impl MaterialSpec {
    fn resolve(&self) -> Result<Material> {
        match self {
            MaterialSpec::Named(name) => Material::preset(name).ok_or_else(|| {
                Error::Scenario(format!(
                    "unknown material `{name}`; use a preset name or an inline \
                     {{ name, rel_permittivity }} table"
                ))
            }),
            MaterialSpec::Inline { name, rel_permittivity } => {
                Material::new(name.clone(), *rel_permittivity)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfacesBlock {
    walls: MaterialSpec,
    floor: MaterialSpec,
    ceiling: MaterialSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaBlock {
    boresight_gain_db: Option<f64>,
    gain_curve: Option<Vec<(f64, f64)>>,
    gain_curve_file: Option<String>,
    hpbw_h_deg: f64,
    hpbw_e_deg: f64,
    sidelobe_floor_h_db: f64,
    sidelobe_floor_e_db: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    f_start_hz: f64,
    f_step_hz: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DistancesBlock {
    Run { start_m: f64, step_m: f64, count: usize },
    List { list_m: Vec<f64> },
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SimulationBlock {
    max_bounces: Option<u32>,
    noise_floor_db: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AnalysisBlock {
    lee_m: Option<u32>,
    window_form: Option<String>,
    pdp_threshold_db: Option<f64>,
    fcf_threshold: Option<f64>,
}

/// Everything a scenario file defines.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: CorridorScenario,
    pub grid: FrequencyGrid,
    pub analysis: AnalysisConfig,
}

/// Parses scenario TOML without touching the filesystem.
///
/// A configuration that references an external gain-curve file is rejected
/// here; use [`load_scenario_file`], which can resolve the path relative to
/// the scenario file.
pub fn parse_scenario_str(text: &str) -> Result<LoadedScenario> {
    build(parse_raw(text)?, None)
}

/// Loads and validates a scenario file.
pub fn load_scenario_file(path: &Path) -> Result<LoadedScenario> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    build(parse_raw(&text)?, path.parent())
}

fn parse_raw(text: &str) -> Result<ScenarioFile> {
    let file: ScenarioFile = toml::from_str(text)
        .map_err(|e| Error::Parse { location: "scenario".into(), message: e.to_string() })?;
    if file.format_version > SCENARIO_FORMAT_VERSION {
        return Err(Error::UnsupportedVersion {
            found: file.format_version as u16,
            supported: SCENARIO_FORMAT_VERSION as u16,
        });
    }
    Ok(file)
}

fn build(file: ScenarioFile, base_dir: Option<&Path>) -> Result<LoadedScenario> {
    let gain_curve = match (&file.antenna.boresight_gain_db, &file.antenna.gain_curve, &file.antenna.gain_curve_file)
    {
        (Some(db), None, None) => vec![(290e9, *db)],
        (None, Some(curve), None) => curve.clone(),
        (None, None, Some(rel)) => {
            let dir = base_dir.ok_or_else(|| {
                Error::Scenario("gain_curve_file requires loading the scenario from a file".into())
            })?;
            let path = dir.join(rel);
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            parse_gain_curve(&text)?
        }
        _ => {
            return Err(Error::Scenario(
                "antenna block needs exactly one of boresight_gain_db, gain_curve, \
                 gain_curve_file"
                    .into(),
            ))
        }
    };
    let antenna = AntennaModel::new(
        gain_curve,
        file.antenna.hpbw_h_deg.to_radians(),
        file.antenna.hpbw_e_deg.to_radians(),
        file.antenna.sidelobe_floor_h_db,
        file.antenna.sidelobe_floor_e_db,
    )?;

    let distances_m = match file.distances {
        DistancesBlock::Run { start_m, step_m, count } => {
            if count == 0 || count > 1_000_000 {
                return Err(Error::Scenario(format!(
                    "distance run count {count} outside 1..=1000000"
                )));
            }
            if !(step_m > 0.0) {
                return Err(Error::Scenario("distance step must be positive".into()));
            }
            (0..count).map(|k| start_m + k as f64 * step_m).collect()
        }
        DistancesBlock::List { list_m } => list_m,
    };

    let scenario = CorridorScenario {
        width_m: file.corridor.width_m,
        height_m: file.corridor.height_m,
        tx_offset_w_m: file.corridor.tx_offset_w_m,
        tx_height_m: file.corridor.tx_height_m,
        distances_m,
        surfaces: SurfaceAssignment {
            walls: file.surfaces.walls.resolve()?,
            floor: file.surfaces.floor.resolve()?,
            ceiling: file.surfaces.ceiling.resolve()?,
        },
        antenna,
        max_bounces: file.simulation.max_bounces.unwrap_or(6),
        noise_floor_db: file.simulation.noise_floor_db,
    };
    scenario.validate()?;

    let grid = FrequencyGrid::new(file.sweep.f_start_hz, file.sweep.f_step_hz, file.sweep.count)?;

    let defaults = AnalysisConfig::default();
    let analysis = AnalysisConfig {
        lee_m: file.analysis.lee_m.unwrap_or(defaults.lee_m),
        window_form: match file.analysis.window_form.as_deref() {
            None | Some("derived") => WindowForm::Derived,
            Some("literal-eq11") => WindowForm::LiteralEq11,
            Some(other) => {
                return Err(Error::Scenario(format!(
                    "unknown window_form `{other}` (expected `derived` or `literal-eq11`)"
                )))
            }
        },
        pdp_threshold_db: file.analysis.pdp_threshold_db.unwrap_or(defaults.pdp_threshold_db),
        fcf_threshold: file.analysis.fcf_threshold.unwrap_or(defaults.fcf_threshold),
    };
    analysis.validate()?;

    Ok(LoadedScenario { scenario, grid, analysis })
}

/// Parses a two-column `frequency_hz,gain_db` CSV. `#` lines are comments.
pub fn parse_gain_curve(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut curve = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let loc = || format!("gain curve line {}", idx + 1);
        let (f, g) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse { location: loc(), message: "expected `frequency_hz,gain_db`".into() })?;
        let parse = |raw: &str| -> Result<f64> {
            raw.trim().parse::<f64>().map_err(|e| Error::Parse {
                location: loc(),
                message: format!("bad number `{raw}`: {e}"),
            })
        };
        curve.push((parse(f)?, parse(g)?));
    }
    if curve.is_empty() {
        return Err(Error::EmptyInput("gain curve has no data rows".into()));
    }
    Ok(curve)
}
