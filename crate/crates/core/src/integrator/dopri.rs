//! Dormand-Prince 5(4) tableau with the fourth-order continuous extension.

pub(crate) const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

pub(crate) const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// Fifth-order minus fourth-order weights.
pub(crate) const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Quartic interpolant on one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    coeffs: [f64; 5],
}

impl Segment {
    pub(crate) fn from_stages(t0: f64, t1: f64, y0: f64, y1: f64, k: &[f64; 7]) -> Self {
        let h = t1 - t0;
        let dy = y1 - y0;
        let bspl = h * k[0] - dy;
        let r4 = dy - h * k[6] - bspl;
        let r5 = h * D.iter().zip(k).map(|(d, ki)| d * ki).sum::<f64>();
        Segment { t0, t1, coeffs: [y0, dy, bspl, r4, r5] }
    }

    /// Evaluates at `s`; values outside `[t0, t1]` extrapolate the polynomial.
    pub fn eval(&self, s: f64) -> f64 {
        let th = (s - self.t0) / (self.t1 - self.t0);
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = self.coeffs;
        r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)))
    }

    pub fn start_value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn end_value(&self) -> f64 {
        self.coeffs[0] + self.coeffs[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_consistent() {
        for (i, row) in A.iter().enumerate() {
            let s: f64 = row.iter().sum();
            assert!((s - C[i]).abs() < 1e-14, "row {i}");
        }
        assert!(E.iter().sum::<f64>().abs() < 1e-15);
    }

    #[test]
    fn dense_output_is_fourth_order() {
        // One step of x' = x from x = 1; the interpolant must track e^t with O(h^5) error.
        let err = |h: f64| {
            let mut k = [0.0; 7];
            for i in 0..7 {
                let y = 1.0 + h * (0..i).map(|j| A[i][j] * k[j]).sum::<f64>();
                k[i] = y;
            }
            let y1 = 1.0 + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
            let seg = Segment::from_stages(0.0, h, 1.0, y1, &k);
            (0..=10).map(|i| (seg.eval(h * i as f64 / 10.0) - (h * i as f64 / 10.0).exp()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(0.2) / err(0.1);
        assert!(ratio > 25.0, "ratio {ratio}");
    }

    #[test]
    fn endpoints_match() {
        let k = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let s = Segment::from_stages(1.0, 1.5, 2.0, 3.0, &k);
        assert_eq!(s.eval(1.0), 2.0);
        assert!((s.eval(1.5) - 3.0).abs() < 1e-15);
    }
}
