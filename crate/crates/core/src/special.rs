//! Log-domain factorials, scaled Laguerre recurrences and Poisson weights.

use std::sync::OnceLock;

const TABLE_LEN: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut acc = 0.0_f64;
        t.push(0.0);
        for k in 1..TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// ln(n!)
pub fn ln_factorial(n: usize) -> f64 {
    if n < TABLE_LEN {
        return ln_factorial_table()[n];
    }
    // Stirling series, far beyond any index used here.
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// A real number stored as `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn value(self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }
}

const RESCALE_AT: f64 = 1e150;

/// Generalized Laguerre polynomials `L_n^{(alpha)}(x)` for `n = 0..count`,
/// by the three-term recurrence with overflow-safe rescaling.
pub fn laguerre_scaled(count: usize, alpha: f64, x: f64, out: &mut Vec<Scaled>) {
    out.clear();
    if count == 0 {
        return;
    }
    let mut ln_scale = 0.0;
    let mut prev = 1.0_f64;
    out.push(Scaled { mantissa: prev, ln_scale });
    if count == 1 {
        return;
    }
    let mut cur = 1.0 + alpha - x;
    out.push(Scaled { mantissa: cur, ln_scale });
    for n in 1..count - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + alpha - x) * cur - (nf + alpha) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            ln_scale += RESCALE_AT.ln();
        }
        out.push(Scaled { mantissa: cur, ln_scale });
    }
}

/// ln of the Poisson(x) probability mass at `m`.
pub fn poisson_ln_pmf(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -x + m as f64 * x.ln() - ln_factorial(m)
}

/// Poisson(x) probabilities for `m = 0..len`.
pub fn poisson_weights(len: usize, x: f64) -> Vec<f64> {
    (0..len).map(|m| poisson_ln_pmf(m, x).exp()).collect()
}

/// Mass of Poisson(x) on `{m >= len}`, summed directly (no `1 - head` cancellation).
pub fn poisson_tail(len: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if len == 0 { 1.0 } else { 0.0 };
    }
    let mut total = 0.0;
    let mut m = len;
    loop {
        let p = poisson_ln_pmf(m, x).exp();
        total += p;
        // terms decrease monotonically once m exceeds the mean
        if (m as f64) > x && p < total * 1e-17 {
            break;
        }
        if (m as f64) > x && p == 0.0 {
            break;
        }
        m += 1;
        if m > len + 100_000 {
            break;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_exact() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        assert!((ln_factorial(20) - 2432902008176640000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn stirling_matches_table_at_the_seam() {
        let n = TABLE_LEN - 1;
        let x = n as f64 + 1.0;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
            + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        assert!((stirling - ln_factorial(n)).abs() / ln_factorial(n) < 1e-13);
    }

    #[test]
    fn laguerre_low_orders() {
        let mut v = Vec::new();
        let (a, x) = (2.0, 0.7);
        laguerre_scaled(4, a, x, &mut v);
        let l2 = x * x / 2.0 - (a + 2.0) * x + (a + 2.0) * (a + 1.0) / 2.0;
        let l3 = -x.powi(3) / 6.0 + (a + 3.0) * x * x / 2.0 - (a + 2.0) * (a + 3.0) * x / 2.0
            + (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0;
        assert!((v[1].value() - (1.0 + a - x)).abs() < 1e-14);
        assert!((v[2].value() - l2).abs() < 1e-13);
        assert!((v[3].value() - l3).abs() < 1e-13);
    }

    #[test]
    fn laguerre_rescaling_keeps_log_magnitude() {
        // L_n(x) ~ (-x)^n / n! for x >> n
        let mut v = Vec::new();
        laguerre_scaled(200, 0.0, 1e6, &mut v);
        let last = v[199];
        let expect = 199.0 * 1e6f64.ln() - ln_factorial(199);
        assert!((last.ln_abs() - expect).abs() < 0.5);
        assert_eq!(last.signum(), -1.0);
    }

    #[test]
    fn poisson_head_and_tail_sum_to_one() {
        for &x in &[0.0, 0.3, 4.0, 12.5] {
            let head: f64 = poisson_weights(30, x).iter().sum();
            let tail = poisson_tail(30, x);
            assert!((head + tail - 1.0).abs() < 1e-14, "x={x}");
        }
    }
}
