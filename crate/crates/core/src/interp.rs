//! Monotone cubic (Fritsch-Carlson) interpolation on a strictly increasing
//! abscissa. Used for curve reparametrization; shape-preserving, C1.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::TooFewNodes { need: 2, got: n.min(y.len()) });
        }
        for k in 1..n {
            if !(x[k] > x[k - 1]) {
                return Err(Error::NonMonotoneArclength { index: k });
            }
        }

        let m = n - 1;
        let h: Vec<f64> = (0..m).map(|i| x[i + 1] - x[i]).collect();
        let delta: Vec<f64> = (0..m).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..m {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = endpoint_slope(h[m - 1], h[m - 2], delta[m - 1], delta[m - 2]);
        }
        Ok(MonotoneCubic { x, y, d })
    }

    fn segment(&self, xq: f64) -> usize {
        let n = self.x.len();
        if xq <= self.x[0] {
            return 0;
        }
        if xq >= self.x[n - 2] {
            return n - 2;
        }
        // first index with x[i+1] > xq
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.x[mid] <= xq {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.y[i] * h00 + h * self.d[i] * h10 + self.y[i + 1] * h01 + h * self.d[i + 1] * h11
    }

    pub fn deriv(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let t2 = t * t;
        let g00 = (6.0 * t2 - 6.0 * t) / h;
        let g10 = 3.0 * t2 - 4.0 * t + 1.0;
        let g01 = (-6.0 * t2 + 6.0 * t) / h;
        let g11 = 3.0 * t2 - 2.0 * t;
        self.y[i] * g00 + self.d[i] * g10 + self.y[i + 1] * g01 + self.d[i + 1] * g11
    }
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        d = 0.0;
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        d = 3.0 * d0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_exactly() {
        let x = vec![0.0, 0.4, 1.0, 1.3, 2.0];
        let y = vec![1.0, -0.5, 0.2, 0.2, 3.0];
        let p = MonotoneCubic::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(p.eval(*xi), *yi);
        }
    }

    #[test]
    fn preserves_monotone_data() {
        let x: Vec<f64> = (0..20).map(|k| k as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|&v| v * v + 1.0).collect();
        let p = MonotoneCubic::new(x, y).unwrap();
        let mut prev = p.eval(0.0);
        let mut t = 0.01;
        while t < 5.7 {
            let v = p.eval(t);
            assert!(v >= prev - 1e-12, "overshoot at {t}");
            prev = v;
            t += 0.01;
        }
    }

    #[test]
    fn smooth_function_accuracy() {
        let n = 200;
        let x: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64 * 3.0).collect();
        let y: Vec<f64> = x.iter().map(|&v| (1.3 * v).sin()).collect();
        let p = MonotoneCubic::new(x, y).unwrap();
        let mut worst = 0.0f64;
        let mut worst_d = 0.0f64;
        let mut t = 0.0;
        while t <= 3.0 {
            worst = worst.max((p.eval(t) - (1.3 * t).sin()).abs());
            worst_d = worst_d.max((p.deriv(t) - 1.3 * (1.3 * t).cos()).abs());
            t += 0.0011;
        }
        // slope limiting drops to second order near extrema (first order for
        // the derivative), so the global bounds are O(h^2) and O(h)
        assert!(worst < 1e-4, "value error {worst:e}");
        assert!(worst_d < 2e-2, "derivative error {worst_d:e}");
    }

    #[test]
    fn rejects_bad_abscissa() {
        assert!(MonotoneCubic::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0], vec![1.0]).is_err());
    }
}
