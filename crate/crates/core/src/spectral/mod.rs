//! Operators built from the normalized adjacency matrix `A / (2√d)` of a
//! `(d+1)`-regular graph: Chebyshev series and their `1→∞` norms, walk
//! counts, the Fejér localizer, and a dense eigensolver used as an oracle.

mod chebyshev;
mod dense;
mod localizer;
mod nonbacktracking;

use thiserror::Error;

pub use chebyshev::{
    branching, cheb_apply, chebyshev_t, chebyshev_u, column_max, op_norm_1_inf, scale, series_apply,
    series_quadratic_form, ChebSeries,
};
pub use dense::{dense_adjacency, dense_spectrum, symmetric_eigen, Eigenpair, DEFAULT_DENSE_CAP};
pub use localizer::{
    fejer_closed_form, fejer_eval, localizer_coeffs, localizer_quadratic_form, twelfth_angles,
    ChebyshevCoeffs,
};
pub use nonbacktracking::{nonbacktracking_counts, CountMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph is not regular; the scale 2√d is undefined")]
    NotRegular,
    #[error("degree {0} is too small for the normalized operator")]
    DegreeTooSmall(usize),
    #[error("stride r = {0} must be even and positive")]
    BadStride(usize),
    #[error("term count m must be at least 1")]
    BadTermCount,
    #[error("walk length must be at least 1")]
    BadLength,
    #[error("{n} vertices exceed the dense cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("vector has length {got}, graph has {n} vertices")]
    Length { got: usize, n: usize },
    #[error("walk count overflow at length {0}")]
    Overflow(usize),
    #[error("vector norm {0} is not 1")]
    NotUnit(f64),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

/// Entropy `-Σ v_x² log_base v_x²` of a unit vector, with `0 log 0 = 0`.
pub fn eigenvector_entropy(v: &[f64], base: f64) -> Result<f64> {
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-9 {
        return Err(SpectralError::NotUnit(norm2.sqrt()));
    }
    let ln_base = base.ln();
    Ok(-v
        .iter()
        .map(|x| x * x)
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln() / ln_base)
        .sum::<f64>())
}
