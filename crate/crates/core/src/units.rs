//! Physical constants and unit conversions. All library computation runs in
//! natural units (hbar = k_B = 1): frequencies in rad/s, lengths in metres,
//! temperatures expressed as frequencies. These helpers convert user-facing
//! eV / kelvin / nanometre inputs into that system.

/// Speed of light in vacuum, m/s.
pub const C_SI: f64 = 2.997_924_58e8;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380_649e-23;

/// Electron volt, J.
pub const EV: f64 = 1.602_176_634e-19;

/// Convert a photon energy in eV to an angular frequency in rad/s.
pub fn ev_to_radps(ev: f64) -> f64 {
    ev * EV / HBAR
}

/// Convert an angular frequency in rad/s to a photon energy in eV.
pub fn radps_to_ev(w: f64) -> f64 {
    w * HBAR / EV
}

/// Convert a temperature in kelvin to a frequency in rad/s (k_B T / hbar).
pub fn kelvin_to_radps(t: f64) -> f64 {
    t * KB / HBAR
}

/// Convert a frequency in rad/s to a temperature in kelvin.
pub fn radps_to_kelvin(w: f64) -> f64 {
    w * HBAR / KB
}

/// Convert nanometres to metres.
pub fn nm_to_m(nm: f64) -> f64 {
    nm * 1e-9
}
