use std::f64::consts::PI;

use serde::Serialize;

use super::chebyshev::{series_quadratic_form, ChebSeries};
use super::{Result, SpectralError};
use crate::graph::Graph;

/// Fejér kernel `F_m(θ) = 1 + 2 Σ_{j=1}^{m} (1 − j/m) cos(jθ)`.
pub fn fejer_eval(m: usize, theta: f64) -> f64 {
    let mf = m as f64;
    1.0 + 2.0
        * (1..=m)
            .map(|j| (1.0 - j as f64 / mf) * (j as f64 * theta).cos())
            .sum::<f64>()
}

/// Closed form `sin²(mθ/2) / (m sin²(θ/2))`, with the limit `m` at `θ ≡ 0`.
pub fn fejer_closed_form(m: usize, theta: f64) -> f64 {
    let mf = m as f64;
    let half = (theta / 2.0).sin();
    if half.abs() < 1e-300 {
        return mf;
    }
    (mf * theta / 2.0).sin().powi(2) / (mf * half * half)
}

/// The localizer `f(x) = Σ_{j=1}^{m} (1 − j/m)(cos(jrφ) + 1) T_{jr}(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebyshevCoeffs {
    pub d: usize,
    pub r: usize,
    pub m: usize,
    pub phi: f64,
    /// `coeffs[j-1]` multiplies `T_{jr}`.
    pub coeffs: Vec<f64>,
}

/// Builds the localizer peaked at `lambda_norm = λ/(2√d)`. Targets outside
/// `[-1, 1]` fall back to `φ = 0`.
pub fn localizer_coeffs(lambda_norm: f64, m: usize, r: usize, d: usize) -> Result<ChebyshevCoeffs> {
    if r == 0 || r % 2 == 1 {
        return Err(SpectralError::BadStride(r));
    }
    if m == 0 {
        return Err(SpectralError::BadTermCount);
    }
    if d == 0 {
        return Err(SpectralError::DegreeTooSmall(d + 1));
    }
    let phi = if (-1.0..=1.0).contains(&lambda_norm) {
        lambda_norm.acos()
    } else {
        0.0
    };
    let coeffs = (1..=m)
        .map(|j| (1.0 - j as f64 / m as f64) * ((j * r) as f64 * phi).cos() + (1.0 - j as f64 / m as f64))
        .collect();
    Ok(ChebyshevCoeffs { d, r, m, phi, coeffs })
}

impl ChebyshevCoeffs {
    pub fn degree(&self) -> usize {
        self.m * self.r
    }

    pub fn series(&self) -> ChebSeries {
        let mut dense = vec![0.0; self.degree() + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            dense[(j + 1) * self.r] = c;
        }
        ChebSeries::new(dense)
    }

    /// `f(x)`; inside `[-1, 1]` every term is evaluated as `cos(jr·arccos x)`.
    pub fn eval(&self, x: f64) -> f64 {
        if (-1.0..=1.0).contains(&x) {
            let t = x.acos();
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * (((j + 1) * self.r) as f64 * t).cos())
                .sum()
        } else {
            self.series().eval(x)
        }
    }

    /// Value promised at the target: `m/4 − 1`.
    pub fn peak_floor(&self) -> f64 {
        self.m as f64 / 4.0 - 1.0
    }

    /// Norm bound `2(d−1)/d^{r/2}` valid when `mr < g/2`.
    pub fn norm_bound(&self) -> f64 {
        let d = self.d as f64;
        2.0 * (d - 1.0) / d.powf(self.r as f64 / 2.0)
    }

    /// Whether the degree constraint `mr < g/2` holds for girth `g`.
    pub fn fits_girth(&self, girth: Option<usize>) -> bool {
        girth.is_none_or(|g| 2 * self.degree() < g)
    }

    /// `f` on an `n`-point uniform grid of `[-1, 1]`, returning the minimum.
    pub fn grid_min(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| self.eval(-1.0 + 2.0 * i as f64 / (n - 1) as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `⟨x, f(A/(2√d)) x⟩`. When the girth is supplied and `mr ≥ g/2`, a warning
/// is logged since the norm bound then no longer applies.
pub fn localizer_quadratic_form(g: &Graph, f: &ChebyshevCoeffs, x: &[f64], girth: Option<usize>) -> Result<f64> {
    if !f.fits_girth(girth) {
        log::warn!(
            "localizer degree {} is not below half the girth {:?}",
            f.degree(),
            girth
        );
    }
    series_quadratic_form(g, &f.series(), x)
}

/// Angles `kπ/12`, `k = 0..=12`.
pub fn twelfth_angles() -> impl Iterator<Item = f64> {
    (0..=12).map(|k| k as f64 * PI / 12.0)
}
