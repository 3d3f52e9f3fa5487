//! TE-channel dispersion function of a planar two-mirror cavity and the
//! spectral quantities derived from its boundary values on the real axis:
//! the integrated mode count `M_CL`, the mode density `rho_CL`, the
//! relaxation-free leading part `D0` and the lower-segment correction.
//!
//! The transverse-momentum integral is evaluated in the scaled variable
//! `y = kappa / kappa_gamma(z)`, which turns the integrand into a fixed
//! real-analytic reflection profile times `exp(-2 y kappa_gamma L)`. The
//! lower limit is `chi(z) = -i z / (c kappa_gamma)`; the path runs from
//! `chi` straight to the real anchor `|chi| + 1` and on to infinity through
//! a rational map. Along the whole path `Re(y kappa_gamma) >= 0`, so the
//! integrand stays analytic and the exponential never grows.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::{Channel, CurveKind, SpectralCurve};
use crate::error::Result;
use crate::material::{
    chi, chi_deriv, kappa_gamma, kappa_gamma_deriv, reflection_scaled, reflection_scaled_c, Cavity,
    Freq,
};
use crate::numerics::{integrate_adaptive, integrate_line, integrate_semiinf, QuadResult, Tol};

const TWO_PI2: f64 = 2.0 * PI * PI;

fn log_term(y: Complex64, kgl: Complex64) -> Complex64 {
    let r = reflection_scaled_c(y);
    crate::material::ln_1p_c(-r * r * (-2.0 * y * kgl).exp())
}

/// Cavity dispersion function per unit area,
/// `D(z) = kappa_gamma^2(z) / (2 pi^2) * Int_{chi(z)}^inf y log[1 - r^2(y) exp(-2 y kappa_gamma L)] dy`.
pub fn dispersion(cav: &Cavity, f: Freq, tol: Tol) -> Result<QuadResult<Complex64>> {
    let mat = cav.material;
    let kg = kappa_gamma(&mat, f)?;
    let x0 = chi(&mat, f)?;
    let kgl = kg * cav.gap();
    let anchor = x0.norm() + 1.0;
    let seg = integrate_line(
        |y| y * log_term(y, kgl),
        x0,
        Complex64::new(anchor, 0.0),
        tol,
    )?;
    let tail = integrate_semiinf(|y| Complex64::new(y, 0.0) * log_term(y.into(), kgl), anchor, tol)?;
    Ok(QuadResult {
        value: kg * kg * (seg.value + tail.value) / TWO_PI2,
        err: (kg * kg).norm() * (seg.err + tail.err) / TWO_PI2,
        evaluations: seg.evaluations + tail.evaluations,
    })
}

/// Relaxation-free leading dispersion function `D0(z)`: same integral as
/// [`dispersion`] with the lower limit replaced by zero. Analytic in both
/// open half-planes off the imaginary axis.
pub fn dispersion_leading(cav: &Cavity, f: Freq, tol: Tol) -> Result<QuadResult<Complex64>> {
    let mat = cav.material;
    let kg = kappa_gamma(&mat, f)?;
    let kgl = kg * cav.gap();
    let seg = integrate_adaptive(
        |y| Complex64::new(y, 0.0) * log_term(y.into(), kgl),
        0.0,
        1.0,
        tol,
    )?;
    let tail = integrate_semiinf(|y| Complex64::new(y, 0.0) * log_term(y.into(), kgl), 1.0, tol)?;
    Ok(QuadResult {
        value: kg * kg * (seg.value + tail.value) / TWO_PI2,
        err: (kg * kg).norm() * (seg.err + tail.err) / TWO_PI2,
        evaluations: seg.evaluations + tail.evaluations,
    })
}

/// `D0(z)` recomputed in the unscaled momentum variable:
/// `Int_0^inf (kappa dkappa / 2 pi^2) log[1 - r^2(kappa, z) exp(-2 kappa L)]`
/// with the physical reflection coefficient. Independent route used to
/// cross-check the scaled-variable evaluation.
pub fn dispersion_leading_kspace(cav: &Cavity, f: Freq, tol: Tol) -> Result<QuadResult<Complex64>> {
    let mat = cav.material;
    let kg = kappa_gamma(&mat, f)?;
    let l = cav.gap();
    let r = integrate_semiinf(
        |kap| {
            let kapc = Complex64::new(kap, 0.0);
            let s = crate::material::sqrt_pos_re(kapc * kapc + kg * kg);
            let d = kapc + s;
            let refl = -kg * kg / (d * d);
            kapc * crate::material::ln_1p_c(-refl * refl * (-2.0 * kap * l).exp())
        },
        0.0,
        tol,
    )?;
    Ok(QuadResult {
        value: r.value / TWO_PI2,
        err: r.err / TWO_PI2,
        evaluations: r.evaluations,
    })
}

/// Analytic z-derivative of the dispersion function. The integrand is
/// differentiated under the integral sign; the moving lower limit
/// contributes the boundary term `-chi'(z) chi log[...](chi)`.
pub fn dispersion_deriv(cav: &Cavity, f: Freq, tol: Tol) -> Result<QuadResult<Complex64>> {
    let mat = cav.material;
    let l = cav.gap();
    let kg = kappa_gamma(&mat, f)?;
    let kgp = kappa_gamma_deriv(&mat, f)?;
    let x0 = chi(&mat, f)?;
    let x0p = chi_deriv(&mat, f)?;
    let kgl = kg * l;
    let anchor = x0.norm() + 1.0;

    let fval = |y: Complex64| y * log_term(y, kgl);
    let fder = |y: Complex64| {
        let r = reflection_scaled_c(y);
        let e = (-2.0 * y * kgl).exp();
        let r2e = r * r * e;
        y * (2.0 * y * l * kgp * r2e) / (Complex64::new(1.0, 0.0) - r2e)
    };

    let anchor_c = Complex64::new(anchor, 0.0);
    let i_seg = integrate_line(fval, x0, anchor_c, tol)?;
    let i_tail = integrate_semiinf(|y| fval(y.into()), anchor, tol)?;
    let di_seg = integrate_line(fder, x0, anchor_c, tol)?;
    let di_tail = integrate_semiinf(|y| fder(y.into()), anchor, tol)?;

    let i = i_seg.value + i_tail.value;
    let di = di_seg.value + di_tail.value;
    let boundary = -x0p * x0 * log_term(x0, kgl);
    let value = (2.0 * kg * kgp * i + kg * kg * (di + boundary)) / TWO_PI2;
    let err = ((2.0 * kg * kgp).norm() * (i_seg.err + i_tail.err)
        + (kg * kg).norm() * (di_seg.err + di_tail.err))
        / TWO_PI2;
    Ok(QuadResult {
        value,
        err,
        evaluations: i_seg.evaluations + i_tail.evaluations + di_seg.evaluations
            + di_tail.evaluations,
    })
}

/// Integrated TE mode count per area, `M_CL(omega) = Im D(omega + i0)`,
/// with `M_CL(0) = 0` fixed exactly.
pub fn mode_count_cl(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    if omega == 0.0 {
        return Ok(QuadResult { value: 0.0, err: 0.0, evaluations: 0 });
    }
    let d = dispersion(cav, Freq::RealAxis(omega), tol)?;
    Ok(d.map(|v| v.im))
}

/// TE mode density per area per rad/time,
/// `rho_CL(omega) = -Im d/domega D(omega + i0)`, via the analytically
/// differentiated integrand (no finite differences).
pub fn dos_cl(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let d = dispersion_deriv(cav, Freq::RealAxis(omega), tol)?;
    Ok(d.map(|v| -v.im))
}

/// Exact lower-segment correction to the integrated mode count together
/// with its small-frequency closed form `-omega^2 / (16 pi c^2)` and their
/// relative deviation.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionCl {
    /// Im of the segment integral from 0 to chi(omega).
    pub exact: f64,
    /// Closed-form estimate `-omega^2 / (16 pi c^2)`.
    pub closed: f64,
    /// |exact/closed - 1|.
    pub rel_dev: f64,
    /// Quadrature error on `exact`.
    pub err: f64,
}

/// Lower-segment part of `M_CL`: the piece of the momentum integral between
/// 0 and `chi(omega)` that is dropped in the leading approximation,
/// `M_CL(omega) = Im D0(omega) + correction`.
pub fn mode_count_correction_cl(cav: &Cavity, omega: f64, tol: Tol) -> Result<CorrectionCl> {
    let mat = cav.material;
    let f = Freq::RealAxis(omega);
    let kg = kappa_gamma(&mat, f)?;
    let x0 = chi(&mat, f)?;
    let kgl = kg * cav.gap();
    let seg = integrate_line(|y| y * log_term(y, kgl), Complex64::new(0.0, 0.0), x0, tol)?;
    // D = D0 - kg^2/(2 pi^2) * Int_0^chi, so the correction is minus the segment
    let exact = (-kg * kg * seg.value / TWO_PI2).im;
    let closed = -omega * omega / (16.0 * PI * mat.c() * mat.c());
    let rel_dev = (exact / closed - 1.0).abs();
    Ok(CorrectionCl {
        exact,
        closed,
        rel_dev,
        err: (kg * kg).norm() * seg.err / TWO_PI2,
    })
}

/// The two reflection-profile moments behind the low-frequency expansion
/// coefficients: `Int_0^inf y log(1 - r^2(y)) dy = -(2 ln 2 - 1)/4` and
/// `Int_0^inf 2 y^2 r^2/(1 - r^2) dy = 1/6`.
pub fn moment_integrals(tol: Tol) -> Result<(QuadResult<f64>, QuadResult<f64>)> {
    let i1 = integrate_semiinf(
        |y| {
            let r = reflection_scaled(y);
            y * (-r * r).ln_1p()
        },
        0.0,
        tol,
    )?;
    let i2 = integrate_semiinf(
        |y| {
            let r = reflection_scaled(y);
            2.0 * y * y * r * r / (1.0 - r * r)
        },
        0.0,
        tol,
    )?;
    Ok((i1, i2))
}

/// Same two moments through the substitution `y = sinh t` (so that
/// `r = -exp(-2t)`); an independent parameterization used as a cross-check.
pub fn moment_integrals_sinh(tol: Tol) -> Result<(QuadResult<f64>, QuadResult<f64>)> {
    let i1 = integrate_semiinf(
        |t: f64| {
            if t > 100.0 {
                // sinh t cosh t ln(1 - e^{-4t}) ~ -e^{-2t}/4 before sinh overflows
                return -0.25 * (-2.0 * t).exp();
            }
            let e4 = (-4.0 * t).exp();
            t.sinh() * t.cosh() * (-e4).ln_1p()
        },
        0.0,
        tol,
    )?;
    let i2 = integrate_semiinf(
        |t: f64| {
            if t > 100.0 {
                // 2 sinh^2 t cosh t e^{-4t}/(1 - e^{-4t}) ~ e^{-t}/4
                return 0.25 * (-t).exp();
            }
            let e4 = (-4.0 * t).exp();
            2.0 * t.sinh().powi(2) * t.cosh() * e4 / (1.0 - e4)
        },
        0.0,
        tol,
    )?;
    Ok((i1, i2))
}

/// Integrated mode count sampled on an ascending grid, points evaluated
/// concurrently, assembled in grid order.
pub fn mode_count_cl_curve(cav: &Cavity, grid: &[f64], tol: Tol) -> Result<SpectralCurve> {
    let results: Vec<Result<QuadResult<f64>>> = grid
        .par_iter()
        .map(|&w| mode_count_cl(cav, w, tol))
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut err = Vec::with_capacity(grid.len());
    for r in results {
        let r = r?;
        values.push(r.value);
        err.push(r.err);
    }
    SpectralCurve::new(grid.to_vec(), values, err, CurveKind::IntegratedCount, Channel::Cl)
}

/// Mode density sampled on an ascending grid (same conventions as
/// [`mode_count_cl_curve`]).
pub fn dos_cl_curve(cav: &Cavity, grid: &[f64], tol: Tol) -> Result<SpectralCurve> {
    let results: Vec<Result<QuadResult<f64>>> =
        grid.par_iter().map(|&w| dos_cl(cav, w, tol)).collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut err = Vec::with_capacity(grid.len());
    for r in results {
        let r = r?;
        values.push(r.value);
        err.push(r.err);
    }
    SpectralCurve::new(grid.to_vec(), values, err, CurveKind::Density, Channel::Cl)
}

/// Leading dimensionless slope of the low-frequency mode count,
/// `(2 ln 2 - 1) / (8 pi^2)`.
pub const M1_LEADING: f64 = 0.004_892_475_237_878_498;

/// Dimensionless 3/2-power coefficient, `-sqrt(2) / (24 pi^2)`.
pub const M32: f64 = -0.005_970_408_002_612_045;
