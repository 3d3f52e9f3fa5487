//! JSON run configuration: unit-tagged physical inputs resolved once into
//! natural (rad/s, meters) quantities before any computation starts.

use serde::Deserialize;

use casimir_te::material::{Cavity, DrudeMaterial};
use casimir_te::units::{ev_to_radps, kelvin_to_radps, nm_to_m, C_SI};

/// Error raised while reading or resolving a configuration; maps to exit 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()))
}

/// A number tagged with its unit, e.g. `{"value": 9.0, "unit": "eV"}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Unit {
    #[serde(rename = "eV")]
    Ev,
    #[serde(rename = "rad/s")]
    RadPerS,
    #[serde(rename = "nm")]
    Nm,
    #[serde(rename = "m")]
    M,
    #[serde(rename = "K")]
    Kelvin,
    /// Multiples of the Thouless frequency of the resolved cavity.
    #[serde(rename = "thouless")]
    Thouless,
}

impl Quantity {
    fn frequency_radps(&self, what: &str) -> Result<f64> {
        match self.unit {
            Unit::Ev => Ok(ev_to_radps(self.value)),
            Unit::RadPerS => Ok(self.value),
            _ => err(format!("{what}: expected a frequency unit (eV or rad/s)")),
        }
    }

    fn length_m(&self, what: &str) -> Result<f64> {
        match self.unit {
            Unit::Nm => Ok(nm_to_m(self.value)),
            Unit::M => Ok(self.value),
            _ => err(format!("{what}: expected a length unit (nm or m)")),
        }
    }

    /// Temperature as an angular frequency; `thouless` scales by `xi_l`.
    fn temperature_radps(&self, xi_l: f64, what: &str) -> Result<f64> {
        match self.unit {
            Unit::Kelvin => Ok(kelvin_to_radps(self.value)),
            Unit::Thouless => Ok(self.value * xi_l),
            _ => err(format!("{what}: expected a temperature unit (K or thouless)")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub omega_p: Quantity,
    pub gamma: Quantity,
}

/// Logarithmic range with a point count, for frequency grids and sweeps.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub unit: Unit,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub gaps: Option<Vec<Quantity>>,
    pub gammas: Option<Vec<Quantity>>,
    pub temperatures: Option<RangeConfig>,
}

/// Raw on-disk configuration; every field optional, gold preset defaults.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: Option<MaterialConfig>,
    pub gap: Option<Quantity>,
    pub temperature: Option<Quantity>,
    pub temperature_sweep: Option<RangeConfig>,
    pub grid: Option<RangeConfig>,
    pub tol: Option<f64>,
    pub sweep: Option<SweepConfig>,
}

/// Fully resolved configuration in rad/s and meters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub cavity: Cavity,
    /// Whether the material matches the built-in gold preset.
    pub preset_gold: bool,
    /// Temperatures for the free-energy subcommand, rad/s.
    pub temperatures: Vec<f64>,
    /// Frequency grid for curve outputs, rad/s, ascending.
    pub grid: Vec<f64>,
    pub tol: f64,
    /// Sweep axes: gaps in meters, gammas in rad/s, temperatures in rad/s.
    pub sweep_gaps: Vec<f64>,
    pub sweep_gammas: Vec<f64>,
    pub sweep_temperatures: Vec<f64>,
}

/// Gold preset: Omega = 9 eV, gamma = 35 meV.
pub const GOLD_OMEGA_P_EV: f64 = 9.0;
pub const GOLD_GAMMA_EV: f64 = 0.035;
/// Default gap of 100 nm.
pub const DEFAULT_GAP_NM: f64 = 100.0;

fn log_range(lo: f64, hi: f64, count: usize, what: &str) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) {
        return err(format!("{what}: need 0 < lo < hi"));
    }
    if count < 2 {
        return err(format!("{what}: need at least 2 points"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn resolve(&self, tol_flag: Option<f64>) -> Result<Resolved> {
        let (omega_p, gamma, preset_gold) = match &self.material {
            Some(m) => {
                let op = m.omega_p.frequency_radps("material.omega_p")?;
                let g = m.gamma.frequency_radps("material.gamma")?;
                (op, g, false)
            }
            None => (ev_to_radps(GOLD_OMEGA_P_EV), ev_to_radps(GOLD_GAMMA_EV), true),
        };
        if !(omega_p > 0.0) {
            return err("material.omega_p must be positive");
        }
        if !(gamma > 0.0) {
            return err("material.gamma must be positive");
        }
        let gap = match &self.gap {
            Some(q) => q.length_m("gap")?,
            None => nm_to_m(DEFAULT_GAP_NM),
        };
        if !(gap > 0.0) {
            return err("gap must be positive");
        }
        let material = DrudeMaterial::new(omega_p, gamma, C_SI)
            .map_err(|e| ConfigError(format!("material: {e}")))?;
        let cavity = Cavity::new(material, gap)
            .map_err(|e| ConfigError(format!("cavity: {e}")))?;
        let xi_l = cavity.thouless();

        let temperatures = match (&self.temperature, &self.temperature_sweep) {
            (Some(_), Some(_)) => {
                return err("give either temperature or temperature_sweep, not both")
            }
            (Some(q), None) => vec![q.temperature_radps(xi_l, "temperature")?],
            (None, Some(r)) => resolve_temperature_range(r, xi_l, "temperature_sweep")?,
            (None, None) => log_range(0.05 * xi_l, 2.0 * xi_l, 8, "default temperatures")?,
        };
        if temperatures.iter().any(|&t| !(t > 0.0)) {
            return err("temperatures must be positive");
        }

        let grid = match &self.grid {
            Some(r) => {
                let scale = match r.unit {
                    Unit::Thouless => xi_l,
                    Unit::RadPerS => 1.0,
                    Unit::Ev => ev_to_radps(1.0),
                    _ => return err("grid.unit must be thouless, rad/s, or eV"),
                };
                log_range(r.lo * scale, r.hi * scale, r.count, "grid")?
            }
            None => log_range(1e-3 * xi_l, 10.0 * xi_l, 64, "default grid")?,
        };

        let tol = tol_flag.or(self.tol).unwrap_or(1e-8);
        if !(tol > 0.0 && tol < 1.0) {
            return err("tol must be in (0, 1)");
        }

        let sw = self.sweep.clone().unwrap_or_default();
        let sweep_gaps = match &sw.gaps {
            Some(v) => v
                .iter()
                .map(|q| q.length_m("sweep.gaps"))
                .collect::<Result<Vec<f64>>>()?,
            None => vec![gap],
        };
        if sweep_gaps.iter().any(|&l| !(l > 0.0)) {
            return err("sweep.gaps must be positive");
        }
        let sweep_gammas = match &sw.gammas {
            Some(v) => v
                .iter()
                .map(|q| q.frequency_radps("sweep.gammas"))
                .collect::<Result<Vec<f64>>>()?,
            None => vec![gamma],
        };
        if sweep_gammas.iter().any(|&g| !(g > 0.0)) {
            return err("sweep.gammas must be positive");
        }
        let sweep_temperatures = match &sw.temperatures {
            Some(r) => resolve_temperature_range(r, xi_l, "sweep.temperatures")?,
            None => temperatures.clone(),
        };

        Ok(Resolved {
            cavity,
            preset_gold,
            temperatures,
            grid,
            tol,
            sweep_gaps,
            sweep_gammas,
            sweep_temperatures,
        })
    }
}

fn resolve_temperature_range(r: &RangeConfig, xi_l: f64, what: &str) -> Result<Vec<f64>> {
    let scale = match r.unit {
        Unit::Kelvin => kelvin_to_radps(1.0),
        Unit::Thouless => xi_l,
        _ => return err(format!("{what}.unit must be K or thouless")),
    };
    log_range(r.lo * scale, r.hi * scale, r.count, what)
}
