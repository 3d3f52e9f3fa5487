//! One-shot validation suite: the full set of physics acceptance checks,
//! sharing code with the test harness and the command-line `validate`
//! subcommand. Each check reports pass/fail with a numeric detail line.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::curve::{log_grid, Channel};
use crate::eddy::{
    damping_correction, dos_propagating, leading_equivalence, mode_count_damping,
    mode_count_eddy_split, mode_count_eddy_direct,
};
use crate::error::Result;
use crate::lifshitz::{
    moment_integrals, dispersion, mode_count_cl, mode_count_cl_curve, M1_LEADING, M32,
};
use crate::material::{k_gamma_cut, reflection_te, Cavity, DrudeMaterial, Freq};
use crate::numerics::Tol;
use crate::thermo::{
    entropy_from_curve, free_energy_from_dos, free_energy_thermal_matsubara, fit_expansion,
    low_t_expansion,
};
use crate::units::{ev_to_radps, nm_to_m, radps_to_kelvin, C_SI};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
        }
    }
}

/// Gold preset: Omega = 9 eV, gamma = 35 meV, SI units.
pub fn gold_material() -> DrudeMaterial {
    DrudeMaterial::new(ev_to_radps(9.0), ev_to_radps(0.035), C_SI).unwrap()
}

/// Gold cavity at the given gap in meters.
pub fn gold_cavity(gap_m: f64) -> Cavity {
    Cavity::new(gold_material(), gap_m).unwrap()
}

fn natural_cavity(ratio: f64, gap_over_lambda: f64) -> Cavity {
    // Omega = c = 1, so lambda = 1 and gamma = ratio
    Cavity::new(DrudeMaterial::natural(1.0, ratio).unwrap(), gap_over_lambda).unwrap()
}

fn check_moments() -> Result<(bool, String)> {
    let (i1, i2) = moment_integrals(Tol::rel(1e-12))?;
    let t1 = -(2.0 * 2.0f64.ln() - 1.0) / 4.0;
    let (d1, d2) = ((i1.value - t1).abs(), (i2.value - 1.0 / 6.0).abs());
    Ok((d1 < 1e-10 && d2 < 1e-10, format!("|.{:.2e}|, |.{:.2e}| vs 1e-10", d1, d2)))
}

fn check_m1_slope() -> Result<(bool, String)> {
    let cav = natural_cavity(1e-3, 10.0);
    let d = cav.material.diffusion();
    let w = 1e-6 * cav.thouless();
    let m = mode_count_cl(&cav, w, Tol::rel(1e-11))?;
    let slope = m.value * d / w;
    let rel = (slope / M1_LEADING - 1.0).abs();
    Ok((rel < 5e-3, format!("slope {slope:.6e}, rel dev {rel:.2e} vs 5e-3")))
}

fn check_m32_residual() -> Result<(bool, String)> {
    let cav = natural_cavity(1e-3, 10.0);
    let d = cav.material.diffusion();
    let l = cav.gap();
    let mut worst = 0.0f64;
    for &x in &[1e-6, 1e-5, 1e-4] {
        let w = x * cav.thouless();
        let m = mode_count_cl(&cav, w, Tol::rel(1e-11))?;
        let resid = (m.value - M1_LEADING * w / d) / (l * (w / d).powf(1.5));
        worst = worst.max((resid / M32 - 1.0).abs());
    }
    Ok((worst < 2e-2, format!("worst rel dev {worst:.2e} vs 2e-2")))
}

fn check_leading_equivalence() -> Result<(bool, String)> {
    let cav = Cavity::new(DrudeMaterial::natural(100.0, 1.0)?, 0.02)?;
    let mut worst = 0.0f64;
    for &x in &[1e-3, 1e-2, 1e-1] {
        let (a, b) = leading_equivalence(&cav, x * cav.material.gamma(), Tol::rel(1e-10))?;
        worst = worst.max((a / b - 1.0).abs());
    }
    Ok((worst < 1e-6, format!("worst rel dev {worst:.2e} vs 1e-6")))
}

fn check_damping_scan() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &ratio in &[1e-3, 1e-2] {
        for &lol in &[0.0, 2.0, 20.0] {
            let cav = natural_cavity(ratio, lol);
            let w = 1e-3 * ratio; // 1e-3 gamma
            let seg = mode_count_damping(&cav, w, Tol::rel(1e-9))?;
            let closed = damping_correction(&cav, w);
            worst = worst.max((seg.value / closed - 1.0).abs());
        }
    }
    Ok((worst < 5e-2, format!("worst rel dev {worst:.2e} vs 5e-2")))
}

fn check_route_crosscheck() -> Result<(bool, String)> {
    let cav = gold_cavity(nm_to_m(100.0));
    let xi_l = cav.thouless();
    let grid = log_grid(1e-5 * xi_l, 85.0 * xi_l, 200)?;
    let curve = mode_count_cl_curve(&cav, &grid, Tol::rel(1e-10))?;
    let mut worst = 0.0f64;
    for &x in &[0.1, 0.5, 1.0] {
        let t = x * xi_l;
        let dos = free_energy_from_dos(&curve, t)?;
        let mats = free_energy_thermal_matsubara(&cav, t, Tol::rel(1e-10))?;
        worst = worst.max((dos.value / mats.value - 1.0).abs());
    }
    Ok((worst < 1e-3, format!("worst rel dev {worst:.2e} vs 1e-3")))
}

fn check_coefficient_fit() -> Result<(bool, String)> {
    let cav = gold_cavity(nm_to_m(100.0));
    let xi_l = cav.thouless();
    let t_max = 5e-4 * xi_l;
    let grid = log_grid(1e-7 * t_max, 100.0 * t_max, 220)?;
    let curve = mode_count_cl_curve(&cav, &grid, Tol::rel(1e-10))?;
    let samples: Result<Vec<(f64, f64)>> = [1.0f64, 1.5, 2.2, 3.0, 4.0, 5.0]
        .iter()
        .map(|&x| {
            let t = 1e-4 * xi_l * x;
            Ok((t, free_energy_from_dos(&curve, t)?.value))
        })
        .collect();
    let fit = fit_expansion(&samples?, xi_l)?;
    let cl = low_t_expansion(&cav, Channel::Cl)?;
    let (r2, r52) = ((fit.a2 / cl.f2 - 1.0).abs(), (fit.a52 / cl.f52 - 1.0).abs());
    Ok((
        r2 < 1e-2 && r52 < 5e-2,
        format!("f2 rel dev {r2:.2e} vs 1e-2, f52 rel dev {r52:.2e} vs 5e-2"),
    ))
}

fn check_thouless_kelvin() -> Result<(bool, String)> {
    let cav = gold_cavity(nm_to_m(100.0));
    let kelvin = radps_to_kelvin(cav.thouless());
    Ok((
        (15.0..=25.0).contains(&kelvin),
        format!("Thouless scale {kelvin:.2} K vs [15, 25] K"),
    ))
}

fn check_entropy() -> Result<(bool, String)> {
    let cav = gold_cavity(nm_to_m(100.0));
    let xi_l = cav.thouless();
    let cl = low_t_expansion(&cav, Channel::Cl)?;
    let grid = log_grid(1e-9 * xi_l, 400.0 * xi_l, 260)?;
    let curve = mode_count_cl_curve(&cav, &grid, Tol::rel(1e-10))?;
    // negative entropy region
    let (s_mid, _) = entropy_from_curve(&curve, 0.5 * xi_l)?;
    // low-temperature slope
    let t1 = 1e-4 * xi_l;
    let (s1, _) = entropy_from_curve(&curve, t1)?;
    let slope_dev = (s1 / t1 / (-2.0 * cl.f2) - 1.0).abs();
    // entropy vanishes with T
    let t2 = 1e-5 * xi_l;
    let (s2, _) = entropy_from_curve(&curve, t2)?;
    let vanish = s2.abs() / (cl.f2 * xi_l);
    Ok((
        s_mid < 0.0 && slope_dev < 5e-2 && vanish < 1e-4,
        format!(
            "S(0.5 xi_L) = {s_mid:.3e} (< 0), slope dev {slope_dev:.2e} vs 5e-2, \
             |S|/(f2 xi_L) = {vanish:.2e} vs 1e-4"
        ),
    ))
}

fn check_propagating_scaling() -> Result<(bool, String)> {
    let cav = gold_cavity(nm_to_m(100.0));
    let mat = cav.material;
    let w = 1e-2
        * mat
            .gamma()
            .min(cav.thouless())
            .min(mat.c() / cav.gap());
    let half = Cavity::new(
        DrudeMaterial::new(mat.omega_p(), 0.5 * mat.gamma(), mat.c())?,
        cav.gap(),
    )?;
    let tol = Tol::rel(1e-10);
    let a = dos_propagating(&cav, w, tol)?;
    let b = dos_propagating(&half, w, tol)?;
    let ratio = a.value / b.value;
    Ok((
        (ratio - 2.0).abs() < 0.2,
        format!("gamma-halving ratio {ratio:.4} vs 2 +/- 0.2"),
    ))
}

fn check_property_suites() -> Result<(bool, String)> {
    let cav = Cavity::new(DrudeMaterial::natural(100.0, 1.0)?, 0.02)?;
    let mat = cav.material;
    let tol = Tol::rel(1e-10);
    // Schwarz symmetry D(conj z) = conj D(z) at 100 seeded pseudo-random
    // points off the singular lines
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut rand01 = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64)
    };
    let mut worst_schwarz = 0.0f64;
    for _ in 0..100 {
        let r = 0.05 + 2.0 * rand01();
        let phi = 0.2 + (PI - 0.4) * rand01(); // upper half plane, off axes
        let z = Complex64::from_polar(r * mat.gamma(), phi);
        let a = dispersion(&cav, Freq::Interior(z), tol)?.value;
        let b = dispersion(&cav, Freq::Interior(-z.conj()), tol)?.value;
        let dev = (a.conj() - b).norm() / a.norm().max(1e-300);
        worst_schwarz = worst_schwarz.max(dev);
    }
    // on-cut unimodularity of the reflection coefficient
    let mut worst_cut = 0.0f64;
    for i in 1..20 {
        let xi = mat.gamma() * i as f64 / 20.0;
        let f = Freq::RightOfCut(xi);
        let kg = k_gamma_cut(&mat, xi)?;
        for j in 1..10 {
            let kap = Complex64::new(kg * 0.1 * j as f64, 0.0);
            let r = reflection_te(&mat, kap, f)?;
            worst_cut = worst_cut.max((r.norm() - 1.0).abs());
        }
    }
    // splitting closure
    let mut closure_ok = true;
    for &x in &[1e-3, 1e-2, 0.3] {
        let w = x * mat.gamma();
        let full = mode_count_eddy_direct(&cav, w, Tol::rel(1e-9))?;
        let (d0, dg) = mode_count_eddy_split(&cav, w, Tol::rel(1e-9))?;
        let gap = (full.value - d0.value - dg.value).abs();
        if gap > 10.0 * (full.err + d0.err + dg.err) + 1e-12 * full.value.abs() {
            closure_ok = false;
        }
    }
    Ok((
        worst_schwarz < 1e-9 && worst_cut < 1e-12 && closure_ok,
        format!(
            "Schwarz dev {worst_schwarz:.2e} vs 1e-9, on-cut |r|-1 {worst_cut:.2e} vs 1e-12, \
             closure {}",
            if closure_ok { "ok" } else { "violated" }
        ),
    ))
}

/// Run the full acceptance suite; results in fixed order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        CheckResult::from_result("1 moment closed forms", check_moments()),
        CheckResult::from_result("2 linear slope of the mode count", check_m1_slope()),
        CheckResult::from_result("3 three-halves residual coefficient", check_m32_residual()),
        CheckResult::from_result("4 leading-part contour equivalence", check_leading_equivalence()),
        CheckResult::from_result("5 relaxation segment vs closed form", check_damping_scan()),
        CheckResult::from_result("6 free-energy route cross-check", check_route_crosscheck()),
        CheckResult::from_result("7 low-T coefficient fit", check_coefficient_fit()),
        CheckResult::from_result("8 Thouless temperature scale", check_thouless_kelvin()),
        CheckResult::from_result("9 entropy properties", check_entropy()),
        CheckResult::from_result("10 propagating-tail gamma scaling", check_propagating_scaling()),
        CheckResult::from_result("11 property suites", check_property_suites()),
    ]
}
