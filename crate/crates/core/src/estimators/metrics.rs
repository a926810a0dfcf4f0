//! Normalized MSE of the cascaded channel `H diag(g_k)`.

use crate::error::{HrisError, Result};
use crate::CMat;

/// Running numerator / denominator of the cascaded NMSE, summed over trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CascadedError {
    /// `sum_k ||Ĥ diag(ĝ_k) - H diag(g_k)||_F^2`.
    pub num: f64,
    /// `sum_k ||H diag(g_k)||_F^2`.
    pub den: f64,
}

impl CascadedError {
    pub fn new(h_hat: &CMat, g_hat: &CMat, h: &CMat, g: &CMat) -> Result<Self> {
        if h_hat.shape() != h.shape() {
            return Err(HrisError::dims("Ĥ", h.shape(), h_hat.shape()));
        }
        if g_hat.shape() != g.shape() || g.nrows() != h.ncols() {
            return Err(HrisError::dims("Ĝ", (h.ncols(), g.ncols()), g_hat.shape()));
        }
        let mut out = CascadedError::default();
        for k in 0..g.ncols() {
            for l in 0..g.nrows() {
                let (gh, gt) = (g_hat[(l, k)], g[(l, k)]);
                for m in 0..h.nrows() {
                    let truth = h[(m, l)] * gt;
                    out.num += (h_hat[(m, l)] * gh - truth).norm_sqr();
                    out.den += truth.norm_sqr();
                }
            }
        }
        Ok(out)
    }

    pub fn add(&mut self, other: &CascadedError) {
        self.num += other.num;
        self.den += other.den;
    }

    pub fn ratio(&self) -> Result<f64> {
        if self.den > 0.0 {
            Ok(self.num / self.den)
        } else {
            Err(HrisError::Domain("cascaded channel is identically zero".into()))
        }
    }
}

/// Cascaded NMSE of a single realization.
pub fn cascaded_nmse(h_hat: &CMat, g_hat: &CMat, h: &CMat, g: &CMat) -> Result<f64> {
    CascadedError::new(h_hat, g_hat, h, g)?.ratio()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::rng::{complex_normal_matrix, stream, Entity};

    fn pair() -> (CMat, CMat) {
        let mut rng = stream(7, Entity::Trial, 0);
        (complex_normal_matrix(&mut rng, 3, 4, 1.0), complex_normal_matrix(&mut rng, 4, 2, 1.0))
    }

    #[test]
    fn perfect_estimates() {
        let (h, g) = pair();
        assert_eq!(cascaded_nmse(&h, &g, &h, &g).unwrap(), 0.0);
    }

    #[test]
    fn zero_h_hat_is_one() {
        let (h, g) = pair();
        let v = cascaded_nmse(&CMat::zeros(3, 4), &(&g * c(3.0)), &h, &g).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn doubled_h_is_one() {
        let (h, g) = pair();
        assert!((cascaded_nmse(&(&h * c(2.0)), &g, &h, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_truth_is_domain_error() {
        let z = CMat::zeros(3, 4);
        let (_, g) = pair();
        assert!(matches!(cascaded_nmse(&z, &g, &z, &g), Err(HrisError::Domain(_))));
    }
}
