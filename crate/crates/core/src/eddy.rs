//! Branch-cut (eddy-current) mode densities. Overdamped cavity modes live
//! on the negative imaginary frequency axis with decay rates `0 < xi <
//! gamma`; their integrated count along the cut, `M_D(xi)`, is smeared
//! into real-frequency quantities by Lorentzian kernels.
//!
//! Conventions: `M_D(xi) <= 0` along the cut, so that the smeared
//! integrated count `M_D(omega) = -(1/pi) Int d(xi) omega/(xi^2+omega^2)
//! M_D(xi)` is positive and the zero-frequency density `rho_D(0)` is
//! negative, matching the full Lifshitz channel at low frequency.

use num_complex::Complex64;
use rayon::prelude::*;
use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::lifshitz::{dispersion_leading, M1_LEADING, M32};
use crate::material::{k_gamma_cut, Cavity, DrudeMaterial, Freq};
use crate::numerics::{
    find_root_bracketed, integrate_adaptive, integrate_sqrt_origin, QuadResult, Tol,
};

const TWO_PI2: f64 = 2.0 * PI * PI;

/// Decay rate `xi0(k)` of the slowest overdamped mode at transverse
/// wavenumber `k`: the unique root of
/// `(gamma - xi)(c^2 k^2 + xi^2) = Omega^2 xi` in `[0, gamma)`.
pub fn xi0(mat: &DrudeMaterial, k: f64) -> Result<f64> {
    if k < 0.0 {
        return Err(CoreError::Domain(format!("k must be >= 0, got {k}")));
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    let (g, om2, c2k2) = (mat.gamma(), mat.omega_p() * mat.omega_p(), mat.c() * mat.c() * k * k);
    let f = |xi: f64| (g - xi) * (c2k2 + xi * xi) - om2 * xi;
    let hi = g * (1.0 - 1e-12);
    find_root_bracketed(f, 0.0, hi, 1e-15 * g)
}

/// The mode boundary `xi0(k)` sampled on an ascending wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBoundary {
    pub k_grid: Vec<f64>,
    pub xi0: Vec<f64>,
}

pub fn mode_boundary(mat: &DrudeMaterial, k_grid: &[f64]) -> Result<ModeBoundary> {
    if !k_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::Domain("k grid must be strictly ascending".into()));
    }
    let xi0v: Result<Vec<f64>> = k_grid.par_iter().map(|&k| xi0(mat, k)).collect();
    Ok(ModeBoundary { k_grid: k_grid.to_vec(), xi0: xi0v? })
}

/// `Im ln(1 - e^{-4 i theta} E)` on the principal branch, with `E = e^{-2
/// kappa L}`; this is the on-cut integrand phase (the reflection
/// coefficient is unimodular there, `r^2 = e^{-4 i theta}` for `kappa =
/// k_gamma sin(theta)`).
fn im_log_cut(theta: f64, e: f64) -> f64 {
    let (s4, c4) = (4.0 * theta).sin_cos();
    (e * s4).atan2(1.0 - e * c4)
}

/// Shared theta-substituted integral
/// `(k_gamma^2 / 2 pi^2) Int sin(theta) cos(theta) Im ln[...] d(theta)`
/// over `[th_lo, th_hi]`, with a boundary-layer split when `2 k_gamma L`
/// is large so the exponentially supported region is always resolved.
fn cut_integral(cav: &Cavity, kg: f64, th_lo: f64, th_hi: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let l = cav.gap();
    let f = |th: f64| {
        let (sn, cs) = th.sin_cos();
        let e = (-2.0 * kg * sn * l).exp();
        sn * cs * im_log_cut(th, e)
    };
    let scale = 2.0 * kg * l;
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    if scale > 30.0 {
        let th_c = (30.0 / scale).asin();
        if th_c > th_lo && th_c < th_hi {
            pieces.push((th_lo, th_c));
            pieces.push((th_c, th_hi));
        } else {
            pieces.push((th_lo, th_hi));
        }
    } else {
        pieces.push((th_lo, th_hi));
    }
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for (a, b) in pieces {
        let r = integrate_adaptive(f, a, b, tol)?;
        value += r.value;
        err += r.err;
        evals += r.evaluations;
    }
    let pref = kg * kg / TWO_PI2;
    Ok(QuadResult { value: pref * value, err: pref * err, evaluations: evals })
}

/// Integrated mode count along the cut,
/// `M_D(xi) = -Int_{xi/c}^{k_gamma(xi)} (kappa d kappa / 2 pi^2) Im ln[1 -
/// r^2 e^{-2 kappa L}]`, evaluated with `kappa = k_gamma sin(theta)`.
pub fn mode_count_cut(cav: &Cavity, xi: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let mat = cav.material;
    let kg = k_gamma_cut(&mat, xi)?;
    let lo = xi / mat.c();
    if lo >= kg {
        return Ok(QuadResult { value: 0.0, err: 0.0, evaluations: 0 });
    }
    let th_lo = (lo / kg).asin();
    let r = cut_integral(cav, kg, th_lo, 0.5 * PI, tol)?;
    Ok(QuadResult { value: -r.value, ..r })
}

/// Leading-part cut count `M_{D,0}(xi)`: lower momentum limit replaced by
/// zero.
pub fn mode_count_cut_leading(cav: &Cavity, xi: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let kg = k_gamma_cut(&cav.material, xi)?;
    let r = cut_integral(cav, kg, 0.0, 0.5 * PI, tol)?;
    Ok(QuadResult { value: -r.value, ..r })
}

/// Relaxation segment `B(xi) = M_D(xi) - M_{D,0}(xi)`: the piece of the
/// momentum integral between 0 and `xi/c` (positive sign).
pub fn segment_cut(cav: &Cavity, xi: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let mat = cav.material;
    let kg = k_gamma_cut(&mat, xi)?;
    let lo = (xi / mat.c()).min(kg);
    let th_lo = (lo / kg).asin();
    cut_integral(cav, kg, 0.0, th_lo, tol)
}

/// `M_D(xi)` precomputed on a Chebyshev-Lobatto grid in the variable `s`
/// with `xi = gamma sin^2(pi s / 2)`, which absorbs the square-root
/// behavior at both ends of the cut. Evaluation interpolates
/// barycentrically; very small `xi` (below the second grid node) falls
/// back to direct quadrature because the relative accuracy of polynomial
/// interpolation degrades where the function vanishes like `xi^{3/2}`.
#[derive(Debug, Clone)]
pub struct BranchCutDensity {
    cav: Cavity,
    /// s-nodes, ascending on [0, 1]; the two ends (xi = 0 and xi =
    /// gamma) are pinned to zero.
    s_nodes: Vec<f64>,
    values: Vec<f64>,
    quad_err: Vec<f64>,
    interp_err: f64,
    tol: Tol,
}

fn lobatto_nodes(n: usize) -> Vec<f64> {
    // ascending Chebyshev-Lobatto points on [0, 1]
    (0..=n).map(|j| 0.5 * (1.0 - (PI * j as f64 / n as f64).cos())).collect()
}

fn xi_of_s(gamma: f64, s: f64) -> f64 {
    let sn = (0.5 * PI * s).sin();
    gamma * sn * sn
}

fn s_of_xi(gamma: f64, xi: f64) -> f64 {
    2.0 / PI * (xi / gamma).sqrt().min(1.0).asin()
}

impl BranchCutDensity {
    /// Sample the cut on `n + 1` Lobatto nodes (numbered 0..=n); node
    /// values at the two cut ends are exactly zero and pinned.
    pub fn build(cav: &Cavity, n: usize, tol: Tol) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(CoreError::Domain(format!("need an even node count >= 8, got {n}")));
        }
        let gamma = cav.material.gamma();
        let s = lobatto_nodes(n);
        let computed: Result<Vec<(f64, f64)>> = s
            .par_iter()
            .enumerate()
            .map(|(j, &sj)| {
                if j == 0 || j == n {
                    Ok((0.0, 0.0))
                } else {
                    let r = mode_count_cut(cav, xi_of_s(gamma, sj), tol)?;
                    Ok((r.value, r.err))
                }
            })
            .collect();
        let computed = computed?;
        let values: Vec<f64> = computed.iter().map(|p| p.0).collect();
        let quad_err: Vec<f64> = computed.iter().map(|p| p.1).collect();
        // interpolation error: the half-resolution interpolant (even-index
        // nodes) tested against the exact values at odd-index nodes
        let even_s: Vec<f64> = s.iter().step_by(2).cloned().collect();
        let even_v: Vec<f64> = values.iter().step_by(2).cloned().collect();
        let mut interp_err = 0.0f64;
        for j in (1..n).step_by(2) {
            let coarse = barycentric(&even_s, &even_v, s[j]);
            interp_err = interp_err.max((coarse - values[j]).abs());
        }
        // the full grid roughly squares the coarse-grid accuracy; keep the
        // coarse deviation as a conservative bound
        Ok(BranchCutDensity { cav: *cav, s_nodes: s, values, quad_err, interp_err, tol })
    }

    pub fn cavity(&self) -> &Cavity {
        &self.cav
    }

    pub fn interp_err(&self) -> f64 {
        self.interp_err
    }

    pub fn max_quad_err(&self) -> f64 {
        self.quad_err.iter().cloned().fold(0.0, f64::max)
    }

    /// `M_D(xi)` with an error estimate (interpolation + quadrature).
    pub fn eval(&self, xi: f64) -> Result<(f64, f64)> {
        let gamma = self.cav.material.gamma();
        if !(0.0..=gamma).contains(&xi) {
            // the density has support only on [0, gamma]
            return Ok((0.0, 0.0));
        }
        if xi == 0.0 || xi == gamma {
            return Ok((0.0, 0.0));
        }
        let s = s_of_xi(gamma, xi);
        if s < self.s_nodes[1] {
            let r = mode_count_cut(&self.cav, xi, self.tol)?;
            return Ok((r.value, r.err));
        }
        let v = barycentric(&self.s_nodes, &self.values, s);
        Ok((v, self.interp_err + self.max_quad_err()))
    }

    /// xi positions of the stored nodes (ascending).
    pub fn xi_nodes(&self) -> Vec<f64> {
        let gamma = self.cav.material.gamma();
        self.s_nodes.iter().map(|&s| xi_of_s(gamma, s)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn quad_err(&self) -> &[f64] {
        &self.quad_err
    }
}

/// Barycentric Lagrange interpolation on Chebyshev-Lobatto-structured
/// nodes (weights `(-1)^j`, halved at the ends).
fn barycentric(s: &[f64], v: &[f64], x: f64) -> f64 {
    let n = s.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=n {
        let d = x - s[j];
        if d == 0.0 {
            return v[j];
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            w *= 0.5;
        }
        let t = w / d;
        num += t * v[j];
        den += t;
    }
    num / den
}

/// Lorentzian smearing of a cut profile into an integrated count:
/// `-(1/pi) Int_0^{atan(gamma/omega)} f(omega tan(phi)) d(phi)`.
fn count_kernel(
    gamma: f64,
    omega: f64,
    f: &(dyn Fn(f64) -> Result<(f64, f64)> + Sync),
    tol: Tol,
) -> Result<QuadResult<f64>> {
    if omega == 0.0 {
        return Ok(QuadResult { value: 0.0, err: 0.0, evaluations: 0 });
    }
    let inner_fail: Cell<Option<CoreError>> = Cell::new(None);
    let inner_err = Cell::new(0.0f64);
    let phi_max = (gamma / omega).atan();
    let g = |phi: f64| {
        let xi = (omega * phi.tan()).min(gamma * (1.0 - 1e-15));
        match f(xi) {
            Ok((v, e)) => {
                inner_err.set(inner_err.get().max(e));
                v
            }
            Err(e) => {
                inner_fail.set(Some(e));
                0.0
            }
        }
    };
    let r = integrate_adaptive(g, 0.0, phi_max, tol)?;
    if let Some(e) = inner_fail.take() {
        return Err(e);
    }
    Ok(QuadResult {
        value: -r.value / PI,
        err: (r.err + inner_err.get() * phi_max) / PI,
        evaluations: r.evaluations,
    })
}

/// Lorentzian-derivative smearing of a cut profile into a density:
/// `-(1/(pi omega)) Int_0^{atan(gamma/omega)} cos(2 phi) f(omega tan(phi))
/// d(phi)`; at `omega = 0` the equivalent form `(1/pi) Int f(xi)/xi^2
/// d(xi)` with the substitution `xi = gamma u^2`.
fn dos_kernel(
    gamma: f64,
    omega: f64,
    f: &(dyn Fn(f64) -> Result<(f64, f64)> + Sync),
    tol: Tol,
) -> Result<QuadResult<f64>> {
    let inner_fail: Cell<Option<CoreError>> = Cell::new(None);
    let inner_err = Cell::new(0.0f64);
    let call = |xi: f64| match f(xi) {
        Ok((v, e)) => {
            inner_err.set(inner_err.get().max(e));
            v
        }
        Err(e) => {
            inner_fail.set(Some(e));
            0.0
        }
    };
    let r = if omega == 0.0 {
        // (1/pi) Int_0^gamma f(xi)/xi^2 dxi, xi = gamma u^2
        let q = integrate_sqrt_origin(
            |xi: f64| {
                if xi == 0.0 {
                    return 0.0;
                }
                call(xi) / (xi * xi)
            },
            gamma,
            tol,
        )?;
        QuadResult { value: q.value / PI, err: (q.err + inner_err.get()) / PI, evaluations: q.evaluations }
    } else {
        let phi_max = (gamma / omega).atan();
        let q = integrate_adaptive(
            |phi: f64| {
                let xi = (omega * phi.tan()).min(gamma * (1.0 - 1e-15));
                (2.0 * phi).cos() * call(xi)
            },
            0.0,
            phi_max,
            tol,
        )?;
        QuadResult {
            value: -q.value / (PI * omega),
            err: (q.err + inner_err.get() * phi_max) / (PI * omega),
            evaluations: q.evaluations,
        }
    };
    if let Some(e) = inner_fail.take() {
        return Err(e);
    }
    Ok(r)
}

/// Smeared integrated eddy mode count `M_D(omega)` from a precomputed cut
/// profile.
pub fn mode_count_eddy(cut: &BranchCutDensity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let gamma = cut.cav.material.gamma();
    count_kernel(gamma, omega, &|xi| cut.eval(xi), tol)
}

/// `M_D(omega)` by direct nested quadrature (no cache); oracle-grade route.
pub fn mode_count_eddy_direct(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let gamma = cav.material.gamma();
    let inner = tol.tighter(0.1);
    count_kernel(
        gamma,
        omega,
        &|xi| mode_count_cut(cav, xi, inner).map(|r| (r.value, r.err)),
        tol,
    )
}

/// Smeared eddy mode density `rho_D(omega)` from a precomputed cut
/// profile; uses the integrated count under the partial-integration form
/// of the Lorentzian-derivative kernel (no numeric differentiation).
pub fn dos_eddy(cut: &BranchCutDensity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let gamma = cut.cav.material.gamma();
    dos_kernel(gamma, omega, &|xi| cut.eval(xi), tol)
}

/// `rho_D(omega)` by direct nested quadrature (no cache).
pub fn dos_eddy_direct(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let gamma = cav.material.gamma();
    let inner = tol.tighter(0.1);
    dos_kernel(
        gamma,
        omega,
        &|xi| mode_count_cut(cav, xi, inner).map(|r| (r.value, r.err)),
        tol,
    )
}

/// The split `M_D(omega) = M_{D,0}(omega) + M_{D,gamma}(omega)`: leading
/// part with zero lower momentum limit, and the relaxation segment.
pub fn mode_count_eddy_split(
    cav: &Cavity,
    omega: f64,
    tol: Tol,
) -> Result<(QuadResult<f64>, QuadResult<f64>)> {
    let gamma = cav.material.gamma();
    let inner = tol.tighter(0.1);
    let d0 = count_kernel(
        gamma,
        omega,
        &|xi| mode_count_cut_leading(cav, xi, inner).map(|r| (r.value, r.err)),
        tol,
    )?;
    let dg = mode_count_damping(cav, omega, tol)?;
    Ok((d0, dg))
}

/// Relaxation part `M_{D,gamma}(omega)`: the Lorentzian kernel applied to
/// the segment `B(xi)`. Negative at low frequency: the finite lower
/// momentum limit removes states from the leading count.
pub fn mode_count_damping(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let gamma = cav.material.gamma();
    let inner = tol.tighter(0.1);
    count_kernel(
        gamma,
        omega,
        &|xi| segment_cut(cav, xi, inner).map(|r| (r.value, r.err)),
        tol,
    )
}

/// Closed-form estimate of the relaxation part for good conductors at low
/// frequency: `-(omega/D) (gamma^2 / 4 pi^2 Omega^2) lambda/(2 lambda +
/// L)` with `lambda = c/Omega` the plasma wavelength.
pub fn damping_correction(cav: &Cavity, omega: f64) -> f64 {
    let mat = cav.material;
    let (g, om) = (mat.gamma(), mat.omega_p());
    let lam = mat.plasma_wavelength();
    let d = mat.diffusion();
    -(omega / d) * (g * g / (4.0 * PI * PI * om * om)) * lam / (2.0 * lam + cav.gap())
}

/// Propagating-channel remainder `rho_pm = rho_CL - rho_D`, both sides by
/// direct tight quadrature.
pub fn dos_propagating(cav: &Cavity, omega: f64, tol: Tol) -> Result<QuadResult<f64>> {
    let cl = crate::lifshitz::dos_cl(cav, omega, tol)?;
    let d = dos_eddy_direct(cav, omega, tol)?;
    Ok(QuadResult {
        value: cl.value - d.value,
        err: cl.err + d.err,
        evaluations: cl.evaluations + d.evaluations,
    })
}

/// Dimensionless low-frequency expansion coefficients of the eddy channel.
#[derive(Debug, Clone, Copy)]
pub struct MCoefficients {
    /// Linear coefficient including the relaxation correction.
    pub m1: f64,
    /// Leading linear coefficient alone.
    pub m1_leading: f64,
    /// 3/2-power coefficient.
    pub m32: f64,
}

/// Expansion coefficients `M(omega) ~ m1 omega/D + m32 L (omega/D)^{3/2}`
/// for a good conductor. The relaxation correction to `m1` carries a
/// minus sign, consistent with the sign of the segment kernel.
pub fn m_coefficients(cav: &Cavity) -> Result<MCoefficients> {
    let mat = cav.material;
    mat.require_good_conductor()?;
    let ratio = mat.gamma() / mat.omega_p();
    let lam = mat.plasma_wavelength();
    let corr = ratio * ratio * lam / (4.0 * PI * PI * (cav.gap() + 2.0 * lam));
    Ok(MCoefficients { m1: M1_LEADING - corr, m1_leading: M1_LEADING, m32: M32 })
}

/// `M_{D,0}(omega)` and `Im D0(omega + i0)` agree (contour-shift
/// identity); convenience wrapper returning both for cross-checks.
pub fn leading_equivalence(cav: &Cavity, omega: f64, tol: Tol) -> Result<(f64, f64)> {
    let inner = tol.tighter(0.1);
    let md0 = count_kernel(
        cav.material.gamma(),
        omega,
        &|xi| mode_count_cut_leading(cav, xi, inner).map(|r| (r.value, r.err)),
        tol,
    )?;
    let d0 = dispersion_leading(cav, Freq::RealAxis(omega), tol)?;
    Ok((md0.value, d0.value.im))
}

/// On-cut `Im ln` recomputed with continuous phase tracking along kappa;
/// oracle for the principal-branch evaluation (no 2 pi jumps expected).
pub fn mode_count_cut_phase_tracked(cav: &Cavity, xi: f64, n: usize) -> Result<f64> {
    let mat = cav.material;
    let kg = k_gamma_cut(&mat, xi)?;
    let lo = xi / mat.c();
    let th_lo = (lo / kg).asin();
    let l = cav.gap();
    // trapezoid in theta with phase continuity enforced between samples
    let mut prev_phase: Option<f64> = None;
    let mut sum = 0.0;
    let h = (0.5 * PI - th_lo) / n as f64;
    for i in 0..=n {
        let th = th_lo + h * i as f64;
        let (sn, cs) = th.sin_cos();
        let e = (-2.0 * kg * sn * l).exp();
        let val = Complex64::new(1.0 - e * (4.0 * th).cos(), e * (4.0 * th).sin());
        let mut phase = val.arg();
        if let Some(p) = prev_phase {
            while phase - p > PI {
                phase -= 2.0 * PI;
            }
            while phase - p < -PI {
                phase += 2.0 * PI;
            }
        }
        prev_phase = Some(phase);
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        sum += w * sn * cs * phase;
    }
    Ok(-kg * kg / TWO_PI2 * sum * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::DrudeMaterial;
    use approx::assert_relative_eq;

    fn cavity(omega_p: f64, gamma: f64, gap: f64) -> Cavity {
        Cavity::new(DrudeMaterial::natural(omega_p, gamma).unwrap(), gap).unwrap()
    }

    #[test]
    fn xi0_basics() {
        let m = DrudeMaterial::natural(100.0, 1.0).unwrap();
        assert_eq!(xi0(&m, 0.0).unwrap(), 0.0);
        let r = xi0(&m, 1.0).unwrap();
        assert_relative_eq!(r, 9.999e-5, max_relative = 1e-3);
        // k -> 0: xi0 -> D k^2
        let d = m.diffusion();
        let k = 1e-3 / m.plasma_wavelength();
        assert_relative_eq!(xi0(&m, k).unwrap() / (d * k * k), 1.0, max_relative = 1e-3);
    }

    #[test]
    fn xi0_monotone() {
        let m = DrudeMaterial::natural(10.0, 0.5).unwrap();
        let mut prev = 0.0f64;
        for i in 1..40 {
            let k = 0.05 * i as f64 * (1.0 + 0.3 * ((i * 7919) % 11) as f64);
            let v = xi0(&m, k).unwrap();
            let vp = xi0(&m, k * 1.7).unwrap();
            assert!(vp > v, "xi0 not increasing at k = {k}");
            assert!(v < m.gamma());
            prev = prev.max(v);
        }
        assert!(prev < m.gamma());
    }

    #[test]
    fn cut_count_limits() {
        let cav = cavity(100.0, 1.0, 0.02); // gamma/Omega = 1e-2, L = 2 lambda
        let near_zero = mode_count_cut(&cav, 1e-9, Tol::rel(1e-9)).unwrap();
        assert!(near_zero.value.abs() < 1e-10);
        let far = Cavity::new(cav.material, 1e4).unwrap();
        let big_l = mode_count_cut(&far, 0.5, Tol::rel(1e-9)).unwrap();
        assert!(big_l.value.abs() < 1e-12);
        // interior value is negative with our sign convention
        let mid = mode_count_cut(&cav, 0.5, Tol::rel(1e-10)).unwrap();
        assert!(mid.value < 0.0);
    }

    #[test]
    fn cut_count_support() {
        let cav = cavity(100.0, 1.0, 0.02);
        assert!(mode_count_cut(&cav, 1.0, Tol::rel(1e-9)).is_err());
        assert!(mode_count_cut(&cav, 1.5, Tol::rel(1e-9)).is_err());
    }

    #[test]
    fn phase_tracking_oracle_agrees() {
        let cav = cavity(100.0, 1.0, 0.01); // gamma/Omega = 1e-2, L = lambda
        let xi = 0.5;
        let a = mode_count_cut(&cav, xi, Tol::rel(1e-12)).unwrap();
        let b = mode_count_cut_phase_tracked(&cav, xi, 400_000).unwrap();
        assert_relative_eq!(a.value, b, max_relative = 1e-9);
    }

    #[test]
    fn branch_cut_density_interpolates() {
        let cav = cavity(100.0, 1.0, 0.02);
        let tol = Tol::rel(1e-10);
        let cut = BranchCutDensity::build(&cav, 64, tol).unwrap();
        for &xi in &[1e-7, 1e-3, 0.123456, 0.5, 0.876, 0.999] {
            let (v, e) = cut.eval(xi).unwrap();
            let direct = mode_count_cut(&cav, xi, tol).unwrap();
            assert!(
                (v - direct.value).abs() <= (e + direct.err).max(1e-13),
                "xi = {xi}: cached {v} direct {} err {e}",
                direct.value
            );
        }
        assert_eq!(cut.eval(0.0).unwrap().0, 0.0);
        assert_eq!(cut.eval(1.0).unwrap().0, 0.0);
        assert_eq!(cut.eval(2.0).unwrap().0, 0.0);
    }

    #[test]
    fn smeared_count_matches_full_channel() {
        // omega = 1e-6 xi_L, gamma/Omega = 1e-3: the eddy count reproduces
        // the full channel to within ~2 (gamma/Omega)^2 relative
        let cav = cavity(1.0, 1e-3, 10.0);
        let omega = 1e-6 * cav.thouless();
        let tol = Tol::rel(1e-10);
        let md = mode_count_eddy_direct(&cav, omega, tol).unwrap();
        let mcl = crate::lifshitz::mode_count_cl(&cav, omega, tol).unwrap();
        let rel = (md.value / mcl.value - 1.0).abs();
        assert!(rel <= 2e-6 + 1e-4, "relative gap {rel}");
        assert!(md.value > 0.0);
    }

    #[test]
    fn smeared_count_zero_frequency() {
        let cav = cavity(100.0, 1.0, 0.02);
        let cut = BranchCutDensity::build(&cav, 32, Tol::rel(1e-9)).unwrap();
        assert_eq!(mode_count_eddy(&cut, 0.0, Tol::rel(1e-9)).unwrap().value, 0.0);
    }

    #[test]
    fn dos_zero_frequency_leading_coefficient() {
        let cav = cavity(1.0, 1e-3, 10.0);
        let d = cav.material.diffusion();
        let rho0 = dos_eddy_direct(&cav, 0.0, Tol::rel(1e-9)).unwrap();
        assert_relative_eq!(rho0.value, -M1_LEADING / d, max_relative = 1e-2);
    }

    #[test]
    fn dos_cached_matches_direct() {
        let cav = cavity(1.0, 1e-3, 10.0);
        let cut = BranchCutDensity::build(&cav, 64, Tol::rel(1e-10)).unwrap();
        for &omega in &[0.0, 1e-6, 1e-4] {
            let a = dos_eddy(&cut, omega, Tol::rel(1e-8)).unwrap();
            let b = dos_eddy_direct(&cav, omega, Tol::rel(1e-9)).unwrap();
            assert_relative_eq!(a.value, b.value, max_relative = 1e-5);
        }
    }

    #[test]
    fn dos_scaling_in_gamma() {
        // with L/lambda and omega/gamma fixed, gamma * rho_D is invariant
        // under halving gamma, up to O(gamma/Omega)
        let tol = Tol::rel(1e-9);
        let cav1 = cavity(1.0, 1e-3, 10.0);
        let cav2 = cavity(1.0, 0.5e-3, 10.0);
        let omega_over_gamma = 1e-3;
        let r1 = dos_eddy_direct(&cav1, omega_over_gamma * 1e-3, tol).unwrap();
        let r2 = dos_eddy_direct(&cav2, omega_over_gamma * 0.5e-3, tol).unwrap();
        assert_relative_eq!(1e-3 * r1.value, 0.5e-3 * r2.value, max_relative = 1e-2);
    }

    #[test]
    fn split_closure() {
        let cav = cavity(100.0, 1.0, 0.02);
        let tol = Tol::rel(1e-9);
        for &omega in &[1e-3, 1e-2, 0.3] {
            let full = mode_count_eddy_direct(&cav, omega, tol).unwrap();
            let (d0, dg) = mode_count_eddy_split(&cav, omega, tol).unwrap();
            let gap = (full.value - d0.value - dg.value).abs();
            assert!(
                gap <= 10.0 * (full.err + d0.err + dg.err) + 1e-12 * full.value.abs(),
                "omega {omega}: gap {gap}"
            );
        }
    }

    #[test]
    fn leading_part_scaling_in_gamma() {
        // M_{D,0}(omega; gamma) = M_{D,0}(omega/2; gamma/2) at fixed
        // L/lambda: the leading integrand depends on omega only via
        // omega/gamma
        let tol = Tol::rel(1e-9);
        let cav1 = cavity(1.0, 1e-3, 10.0);
        let cav2 = cavity(1.0, 0.5e-3, 10.0);
        let omega = 1e-5;
        let (a, _) = mode_count_eddy_split(&cav1, omega, tol).unwrap();
        let (b, _) = mode_count_eddy_split(&cav2, 0.5 * omega, tol).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-3);
    }

    #[test]
    fn leading_equivalence_with_dispersion() {
        let cav = cavity(100.0, 1.0, 0.02);
        let (md0, imd0) = leading_equivalence(&cav, 1e-2, Tol::rel(1e-10)).unwrap();
        assert_relative_eq!(md0, imd0, max_relative = 1e-6);
    }

    #[test]
    fn damping_closed_form_values() {
        let cav = cavity(1.0, 1e-2, 2.0); // gamma/Omega = 1e-2, L = 2 lambda
        let d = cav.material.diffusion();
        let omega = 1e-5; // 1e-3 gamma
        let expect = -(omega / d) * 1e-4 / (4.0 * PI * PI) * 0.25;
        assert_relative_eq!(damping_correction(&cav, omega), expect, max_relative = 1e-12);
        // L -> infinity kills it
        let far = Cavity::new(cav.material, 1e9).unwrap();
        assert!(damping_correction(&far, omega).abs() < 1e-8 * expect.abs());
        // L = 0 limit: -(omega/D) gamma^2/(8 pi^2 Omega^2)
        let touching = Cavity::new(cav.material, 0.0).unwrap();
        assert_relative_eq!(
            damping_correction(&touching, omega),
            -(omega / d) * 1e-4 / (8.0 * PI * PI),
            max_relative = 1e-12
        );
    }

    #[test]
    fn damping_segment_matches_closed_form() {
        let cav = cavity(1.0, 1e-2, 0.02);
        let omega = 1e-5; // 1e-3 gamma
        let seg = mode_count_damping(&cav, omega, Tol::rel(1e-9)).unwrap();
        let closed = damping_correction(&cav, omega);
        assert!(seg.value < 0.0, "segment kernel should be negative, got {}", seg.value);
        assert_relative_eq!(seg.value, closed, max_relative = 5e-2);
    }

    #[test]
    fn propagating_tail_scales_linearly_in_gamma() {
        let tol = Tol::rel(1e-10);
        let cav1 = cavity(1.0, 1e-3, 10.0);
        let cav2 = cavity(1.0, 0.5e-3, 10.0);
        let omega = 1e-7;
        let a = dos_propagating(&cav1, omega, tol).unwrap();
        let b = dos_propagating(&cav2, omega, tol).unwrap();
        assert_relative_eq!(a.value / b.value, 2.0, max_relative = 0.1);
        // magnitude within an order of magnitude of gamma/(Omega^2 L^2)
        let scale = 1e-3 / (1.0 * 100.0);
        assert!(a.value.abs() < 10.0 * scale && a.value.abs() > 0.1 * scale);
    }

    #[test]
    fn coefficients_and_preconditions() {
        let cav = cavity(1.0, 0.1, 0.02);
        let mc = m_coefficients(&cav).unwrap();
        assert!(mc.m1 < mc.m1_leading);
        assert_relative_eq!(mc.m32, M32, max_relative = 1e-15);
        let bad = cavity(1.0, 0.5, 0.02);
        assert!(m_coefficients(&bad).is_err());
    }
}
