//! Spectral curves: frequency grids carrying integrated mode counts or mode
//! densities together with per-point quadrature error estimates.

use crate::error::{CoreError, Result};

/// What a curve's values mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Integrated mode count per area, M(omega).
    IntegratedCount,
    /// Mode density per area per rad/time, rho(omega).
    Density,
}

/// Which physical channel a curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Full Lifshitz contribution on the real axis.
    Cl,
    /// Eddy-current (branch-cut) contribution.
    D,
    /// Propagating remainder, defined by subtraction Cl - D.
    Propagating,
    /// Lifshitz contribution with the relaxation-free lower limit.
    Cl0,
    /// Relaxation correction to the Lifshitz contribution.
    ClGamma,
    /// Eddy contribution with the lower momentum limit set to zero.
    D0,
    /// Relaxation segment of the eddy contribution.
    DGamma,
}

impl Channel {
    pub fn label(&self) -> &'static str {
        match self {
            Channel::Cl => "CL",
            Channel::D => "D",
            Channel::Propagating => "propagating",
            Channel::Cl0 => "CL0",
            Channel::ClGamma => "CLgamma",
            Channel::D0 => "D0",
            Channel::DGamma => "Dgamma",
        }
    }
}

impl CurveKind {
    pub fn label(&self) -> &'static str {
        match self {
            CurveKind::IntegratedCount => "M",
            CurveKind::Density => "rho",
        }
    }
}

/// A sampled spectral quantity on an ascending frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    err: Vec<f64>,
    kind: CurveKind,
    channel: Channel,
}

impl SpectralCurve {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        err: Vec<f64>,
        kind: CurveKind,
        channel: Channel,
    ) -> Result<Self> {
        if grid.len() != values.len() || grid.len() != err.len() {
            return Err(CoreError::Domain(format!(
                "length mismatch: grid {}, values {}, err {}",
                grid.len(),
                values.len(),
                err.len()
            )));
        }
        if grid.is_empty() {
            return Err(CoreError::Domain("empty curve".into()));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoreError::Domain("grid must be strictly ascending".into()));
        }
        if grid.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(CoreError::Domain("grid points must be finite and >= 0".into()));
        }
        if err.iter().any(|&e| !(e >= 0.0)) {
            return Err(CoreError::Domain("err entries must be >= 0".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::Domain("values must be finite".into()));
        }
        Ok(SpectralCurve { grid, values, err, kind, channel })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn err(&self) -> &[f64] {
        &self.err
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_grid(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Monotone-cubic-free interpolation: piecewise cubic Hermite with
    /// centered finite-difference slopes, linear through the origin below
    /// the first grid point (integrated counts vanish at zero frequency).
    /// Returns an error above the grid range.
    pub fn interpolate(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) {
            return Err(CoreError::Domain(format!("frequency must be >= 0, got {w}")));
        }
        let g = &self.grid;
        let v = &self.values;
        let n = g.len();
        if w > g[n - 1] {
            return Err(CoreError::Coverage(format!(
                "frequency {w} above curve range (max {})",
                g[n - 1]
            )));
        }
        if w < g[0] {
            // below-grid extension proportional to the leading frequency power
            return Ok(v[0] * w / g[0]);
        }
        if n == 1 {
            return Ok(v[0]);
        }
        // locate the containing interval
        let i = match g.binary_search_by(|x| x.partial_cmp(&w).unwrap()) {
            Ok(i) => return Ok(v[i]),
            Err(i) => i - 1,
        };
        let (x0, x1) = (g[i], g[i + 1]);
        let (y0, y1) = (v[i], v[i + 1]);
        let h = x1 - x0;
        let secant = (y1 - y0) / h;
        let slope_at = |j: usize| -> f64 {
            if j == 0 {
                (v[1] - v[0]) / (g[1] - g[0])
            } else if j == n - 1 {
                (v[n - 1] - v[n - 2]) / (g[n - 1] - g[n - 2])
            } else {
                let hl = g[j] - g[j - 1];
                let hr = g[j + 1] - g[j];
                // weighted centered slope exact for parabolas on uneven grids
                (hr * (v[j] - v[j - 1]) / hl + hl * (v[j + 1] - v[j]) / hr) / (hl + hr)
            }
        };
        let m0 = slope_at(i);
        let m1 = slope_at(i + 1);
        let t = (w - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let _ = secant;
        Ok(h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1)
    }

    /// Worst-case stored quadrature error on the grid.
    pub fn max_err(&self) -> f64 {
        self.err.iter().cloned().fold(0.0, f64::max)
    }
}

/// Log-spaced grid from `lo` to `hi` inclusive with `n >= 2` points.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) {
        return Err(CoreError::Domain(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(CoreError::Domain("need at least 2 grid points".into()));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curve(grid: Vec<f64>, values: Vec<f64>) -> SpectralCurve {
        let err = vec![0.0; grid.len()];
        SpectralCurve::new(grid, values, err, CurveKind::IntegratedCount, Channel::Cl).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SpectralCurve::new(
            vec![1.0, 0.5],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            CurveKind::Density,
            Channel::D
        )
        .is_err());
        assert!(SpectralCurve::new(
            vec![1.0],
            vec![0.0, 0.0],
            vec![0.0],
            CurveKind::Density,
            Channel::D
        )
        .is_err());
        assert!(SpectralCurve::new(
            vec![1.0],
            vec![0.0],
            vec![-1.0],
            CurveKind::Density,
            Channel::D
        )
        .is_err());
    }

    #[test]
    fn interpolation_reproduces_cubics_on_interior() {
        let f = |x: f64| 1.0 + 2.0 * x + 0.5 * x * x;
        let grid: Vec<f64> = (0..40).map(|i| 0.5 + 0.1 * i as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let c = curve(grid, values);
        for &x in &[0.93, 1.77, 2.5001, 4.2] {
            assert_relative_eq!(c.interpolate(x).unwrap(), f(x), max_relative = 1e-10);
        }
    }

    #[test]
    fn interpolation_linear_below_grid() {
        let c = curve(vec![1.0, 2.0], vec![3.0, 6.0]);
        assert_relative_eq!(c.interpolate(0.5).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(c.interpolate(0.0).unwrap(), 0.0, max_relative = 1e-15);
    }

    #[test]
    fn interpolation_fails_above_grid() {
        let c = curve(vec![1.0, 2.0], vec![3.0, 6.0]);
        assert!(matches!(c.interpolate(2.5), Err(CoreError::Coverage(_))));
    }

    #[test]
    fn interpolation_hits_nodes_exactly() {
        let c = curve(vec![1.0, 2.0, 3.0], vec![5.0, -1.0, 4.0]);
        assert_eq!(c.interpolate(2.0).unwrap(), -1.0);
    }

    #[test]
    fn log_grid_shape() {
        let g = log_grid(1e-3, 1e3, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_relative_eq!(g[0], 1e-3, max_relative = 1e-15);
        assert_relative_eq!(g[3], 1.0, max_relative = 1e-12);
        assert_eq!(g[6], 1e3);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(log_grid(0.0, 1.0, 5).is_err());
        assert!(log_grid(1.0, 2.0, 1).is_err());
    }
}
