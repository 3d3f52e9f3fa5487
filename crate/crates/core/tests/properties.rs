//! Randomized property tests for the analytic-structure invariants of the
//! cavity dispersion function and the TE reflection coefficient.

use num_complex::Complex64;
use proptest::prelude::*;

use casimir_te::material::{
    k_gamma_cut, kappa_gamma, reflection_te, Cavity, DrudeMaterial, Freq,
};
use casimir_te::lifshitz::dispersion;
use casimir_te::numerics::Tol;

fn cavity() -> Cavity {
    Cavity::new(DrudeMaterial::natural(100.0, 1.0).unwrap(), 0.02).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Mirror symmetry across the imaginary axis: D(-conj z) = conj D(z)
    /// for z in the upper half plane.
    #[test]
    fn dispersion_mirror_symmetry(
        r in 0.05f64..2.0,
        phi in 0.2f64..(std::f64::consts::PI - 0.2),
    ) {
        let cav = cavity();
        let z = Complex64::from_polar(r * cav.material.gamma(), phi);
        let tol = Tol::rel(1e-10);
        let a = dispersion(&cav, Freq::Interior(z), tol).unwrap().value;
        let b = dispersion(&cav, Freq::Interior(-z.conj()), tol).unwrap().value;
        prop_assert!(
            (a.conj() - b).norm() <= 1e-8 * a.norm().max(1e-300),
            "a = {a}, b = {b}"
        );
    }

    /// The dispersion function is real and negative on the positive
    /// imaginary frequency axis (evanescent region).
    #[test]
    fn dispersion_real_negative_on_imaginary_axis(xi in 0.01f64..3.0) {
        let cav = cavity();
        let f = Freq::Interior(Complex64::new(0.0, xi * cav.material.gamma()));
        let d = dispersion(&cav, f, Tol::rel(1e-10)).unwrap().value;
        prop_assert!(d.re < 0.0, "Re D = {}", d.re);
        prop_assert!(d.im.abs() <= 1e-9 * d.re.abs() + 1e-300, "Im D = {}", d.im);
    }

    /// On the overdamped cut the TE reflection coefficient is unimodular
    /// for transverse momenta inside the eddy window.
    #[test]
    fn reflection_unimodular_on_cut(x in 0.02f64..0.98, s in 0.02f64..0.98) {
        let mat = DrudeMaterial::natural(1.0, 1.0).unwrap();
        let xi = x * mat.gamma();
        let kap = s * k_gamma_cut(&mat, xi).unwrap();
        let r = reflection_te(&mat, Complex64::new(kap, 0.0), Freq::RightOfCut(xi))
            .unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-11, "|r| = {}", r.norm());
    }

    /// Off the cut window (kappa above the eddy edge) the reflection is
    /// strictly sub-unimodular, and it always satisfies |r| <= 1 on the
    /// real frequency axis.
    #[test]
    fn reflection_bounded_on_real_axis(w in 0.01f64..5.0, k in 0.0f64..3.0) {
        let mat = DrudeMaterial::natural(1.0, 1.0).unwrap();
        let f = Freq::RealAxis(w * mat.gamma());
        let kg = kappa_gamma(&mat, f).unwrap();
        let kap = Complex64::new(k * kg.norm(), 0.0);
        let r = reflection_te(&mat, kap, f).unwrap();
        prop_assert!(r.norm() <= 1.0 + 1e-12, "|r| = {}", r.norm());
    }
}
