//! Monte Carlo accumulators with standard errors.

/// Mean of a scalar sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanStat {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl MeanStat {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn std_err(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let var = (self.sum_sq - self.sum * self.sum / n) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// `E[X] / E[Y]` estimated by the ratio of sample means, with a
/// delta-method standard error.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RatioStat {
    n: usize,
    sx: f64,
    sy: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl RatioStat {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn ratio(&self) -> f64 {
        self.sx / self.sy
    }

    pub fn std_err(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let r = self.ratio();
        let my = self.sy / n;
        // sample variance of X - r Y
        let s = self.sxx - 2.0 * r * self.sxy + r * r * self.syy;
        let centered = (s - (self.sx - r * self.sy).powi(2) / n) / (n - 1.0);
        (centered.max(0.0) / n).sqrt() / my
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std_err() {
        let mut m = MeanStat::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        assert_eq!(m.mean(), 2.5);
        let var: f64 = 5.0 / 3.0;
        assert!((m.std_err() - (var / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_ratio_has_no_error() {
        let mut r = RatioStat::default();
        for y in [1.0, 2.0, 5.0] {
            r.push(0.5 * y, y);
        }
        assert!((r.ratio() - 0.5).abs() < 1e-15);
        assert!(r.std_err() < 1e-12);
    }

    #[test]
    fn single_sample_has_undefined_error() {
        let mut r = RatioStat::default();
        r.push(1.0, 2.0);
        assert!(r.std_err().is_nan());
    }
}
