//! Drude response, wave vectors and TE reflection coefficients for complex
//! frequency, with a single enforcement point for the branch convention:
//! every square root is the principal root remapped to positive real part,
//! ties on the imaginary axis resolved toward `Im <= 0`.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Principal square root remapped to `Re >= 0`; a purely imaginary result is
/// resolved toward `Im <= 0` (the limit from the upper half-plane, and the
/// right side of the cut on the negative imaginary axis).
pub fn sqrt_pos_re(w: Complex64) -> Complex64 {
    let s = w.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im > 0.0) {
        -s
    } else {
        s
    }
}

/// Stable complex `ln(1 + w)`: accurate both for tiny `|w|` (where `1 + w`
/// would absorb `w`) and for general arguments.
pub fn ln_1p_c(w: Complex64) -> Complex64 {
    let u = Complex64::new(1.0, 0.0) + w;
    let re = if w.norm_sqr() < 0.25 {
        // |1+w|^2 = 1 + 2 Re w + |w|^2; the ln_1p form keeps accuracy when
        // w is tiny and 1 + w would absorb it
        0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p()
    } else {
        u.norm().ln()
    };
    Complex64::new(re, u.arg())
}

/// A Drude metal: plasma frequency, relaxation frequency and the speed of
/// light of the ambient unit system (all computation is in natural units
/// with hbar = k_B = 1; frequencies in rad/time, lengths in length units
/// consistent with `c`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeMaterial {
    omega_p: f64,
    gamma: f64,
    c: f64,
}

impl DrudeMaterial {
    pub fn new(omega_p: f64, gamma: f64, c: f64) -> Result<Self> {
        if !(omega_p > 0.0) {
            return Err(CoreError::Domain(format!("omega_p must be > 0, got {omega_p}")));
        }
        if !(gamma > 0.0) {
            return Err(CoreError::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        if !(c > 0.0) {
            return Err(CoreError::Domain(format!("c must be > 0, got {c}")));
        }
        Ok(DrudeMaterial { omega_p, gamma, c })
    }

    /// Natural-unit constructor with c = 1.
    pub fn natural(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::new(omega_p, gamma, 1.0)
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Eddy-current diffusion coefficient D = gamma c^2 / Omega^2.
    pub fn diffusion(&self) -> f64 {
        self.gamma * self.c * self.c / (self.omega_p * self.omega_p)
    }

    /// Plasma wavelength (field penetration depth) lambda = c / Omega.
    pub fn plasma_wavelength(&self) -> f64 {
        self.c / self.omega_p
    }

    /// Good-conductor regime gamma/Omega <= 0.1 assumed by the asymptotic
    /// coefficient formulas.
    pub fn is_good_conductor(&self) -> bool {
        self.gamma / self.omega_p <= 0.1
    }

    pub fn require_good_conductor(&self) -> Result<()> {
        if self.is_good_conductor() {
            Ok(())
        } else {
            Err(CoreError::Precondition(format!(
                "gamma/omega_p = {:.3e} exceeds the good-conductor bound 0.1",
                self.gamma / self.omega_p
            )))
        }
    }
}

/// Two identical Drude half-spaces separated by a vacuum gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity {
    pub material: DrudeMaterial,
    gap: f64,
}

impl Cavity {
    pub fn new(material: DrudeMaterial, gap: f64) -> Result<Self> {
        if !(gap >= 0.0) {
            return Err(CoreError::Domain(format!("gap must be >= 0, got {gap}")));
        }
        Ok(Cavity { material, gap })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Thouless frequency xi_L = D / L^2, the diffusive gap-crossing rate
    /// (infinite for a touching gap).
    pub fn thouless(&self) -> f64 {
        self.material.diffusion() / (self.gap * self.gap)
    }

    pub fn with_gap(&self, gap: f64) -> Result<Self> {
        Cavity::new(self.material, gap)
    }
}

/// A complex frequency together with the boundary-limit convention used for
/// evaluation on the singular lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Freq {
    /// A point off the real axis and off the eddy branch cut.
    Interior(Complex64),
    /// z = omega + i0, the limit from the upper half-plane.
    RealAxis(f64),
    /// z = -i xi + 0, just right of the eddy branch cut (0 < xi < gamma).
    RightOfCut(f64),
}

impl Freq {
    pub fn value(&self) -> Complex64 {
        match *self {
            Freq::Interior(z) => z,
            Freq::RealAxis(w) => Complex64::new(w, 0.0),
            Freq::RightOfCut(xi) => Complex64::new(0.0, -xi),
        }
    }
}

fn check_off_poles(mat: &DrudeMaterial, z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(CoreError::PoleInput("z = 0".into()));
    }
    if (z - Complex64::new(0.0, -mat.gamma)).norm() == 0.0 {
        return Err(CoreError::PoleInput("z = -i gamma".into()));
    }
    Ok(())
}

/// Drude permittivity eps(z) = 1 - Omega^2 / (z (z + i gamma)).
pub fn permittivity(mat: &DrudeMaterial, f: Freq) -> Result<Complex64> {
    let z = f.value();
    check_off_poles(mat, z)?;
    let om2 = mat.omega_p * mat.omega_p;
    Ok(Complex64::new(1.0, 0.0) - om2 / (z * (z + Complex64::new(0.0, mat.gamma))))
}

/// Transverse decay constant kappa = sqrt(k^2 - z^2/c^2), positive real part.
///
/// On the real axis the limit from the upper half-plane is taken
/// analytically: `Im kappa <= 0`.
pub fn kappa(k: f64, f: Freq, c: f64) -> Result<Complex64> {
    if k < 0.0 {
        return Err(CoreError::Domain(format!("k must be >= 0, got {k}")));
    }
    match f {
        Freq::RealAxis(w) => {
            let w = w.abs();
            let d = k * k - (w / c) * (w / c);
            if d >= 0.0 {
                Ok(Complex64::new(d.sqrt(), 0.0))
            } else {
                Ok(Complex64::new(0.0, -(-d).sqrt()))
            }
        }
        Freq::RightOfCut(xi) => {
            // z^2 = -xi^2: kappa real
            Ok(Complex64::new((k * k + xi * xi / (c * c)).sqrt(), 0.0))
        }
        Freq::Interior(z) => {
            let w = Complex64::new(k * k, 0.0) - z * z / (c * c);
            Ok(sqrt_pos_re(w))
        }
    }
}

/// Medium wave-vector scale kappa_gamma(z) = (Omega/c) sqrt(z / (z + i gamma)).
pub fn kappa_gamma(mat: &DrudeMaterial, f: Freq) -> Result<Complex64> {
    match f {
        Freq::RightOfCut(xi) => Ok(Complex64::new(0.0, -k_gamma_cut(mat, xi)?)),
        _ => {
            let z = f.value();
            check_off_poles(mat, z)?;
            let ratio = z / (z + Complex64::new(0.0, mat.gamma));
            Ok(sqrt_pos_re(ratio) * (mat.omega_p / mat.c))
        }
    }
}

/// Derivative d kappa_gamma / dz (same branch as `kappa_gamma`).
pub fn kappa_gamma_deriv(mat: &DrudeMaterial, f: Freq) -> Result<Complex64> {
    let z = f.value();
    check_off_poles(mat, z)?;
    let kg = kappa_gamma(mat, f)?;
    let ig = Complex64::new(0.0, mat.gamma);
    Ok(kg * ig / (2.0 * z * (z + ig)))
}

/// On-cut wavenumber k_gamma(xi) = (Omega/c) sqrt(xi / (gamma - xi)).
///
/// Diverges as xi -> gamma; the divergence is reported as +infinity and is
/// integrable after the kappa change of variables used upstream.
pub fn k_gamma_cut(mat: &DrudeMaterial, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < mat.gamma) {
        return Err(CoreError::Domain(format!(
            "xi must lie in (0, gamma) = (0, {}), got {xi}",
            mat.gamma
        )));
    }
    let ratio = xi / (mat.gamma - xi);
    if ratio.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(mat.omega_p / mat.c * ratio.sqrt())
}

/// TE (s-polarization) reflection coefficient
/// r = (kappa - sqrt(kappa^2 + kappa_gamma^2)) / (kappa + sqrt(...)).
pub fn reflection_te(mat: &DrudeMaterial, kap: Complex64, f: Freq) -> Result<Complex64> {
    let kg = kappa_gamma(mat, f)?;
    let s = sqrt_pos_re(kap * kap + kg * kg);
    // (kappa - s)/(kappa + s) = -kg^2/(kappa + s)^2 exactly; the right-hand
    // form avoids catastrophic cancellation for kappa >> kg
    let d = kap + s;
    Ok(-kg * kg / (d * d))
}

/// Reflection coefficient along the scaled direction kappa = y kappa_gamma:
/// r(y) = (y - sqrt(y^2+1)) / (y + sqrt(y^2+1)), real, increasing from -1
/// to 0 on y >= 0.
pub fn reflection_scaled(y: f64) -> f64 {
    // (y - s)/(y + s) with s = sqrt(y^2 + 1), rewritten as -1/(y + s)^2,
    // which stays accurate when y is large and y - s underflows
    let d = y + y.hypot(1.0);
    -1.0 / (d * d)
}

/// Analytic continuation of `reflection_scaled` to complex y (used on the
/// deformed integration path of the dispersion integral).
pub fn reflection_scaled_c(y: Complex64) -> Complex64 {
    let d = y + sqrt_pos_re(y * y + 1.0);
    -1.0 / (d * d)
}

/// Scaled lower integration limit chi(z) = -i z / (c kappa_gamma(z)).
pub fn chi(mat: &DrudeMaterial, f: Freq) -> Result<Complex64> {
    let z = f.value();
    check_off_poles(mat, z)?;
    let kg = kappa_gamma(mat, f)?;
    Ok(Complex64::new(0.0, -1.0) * z / (mat.c * kg))
}

/// Derivative d chi / dz.
pub fn chi_deriv(mat: &DrudeMaterial, f: Freq) -> Result<Complex64> {
    let z = f.value();
    check_off_poles(mat, z)?;
    let kg = kappa_gamma(mat, f)?;
    let ig = Complex64::new(0.0, mat.gamma);
    Ok(Complex64::new(0.0, -1.0) / (mat.c * kg) * (2.0 * z + ig) / (2.0 * (z + ig)))
}
