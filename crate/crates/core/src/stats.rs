//! Small numeric helpers shared by the Monte Carlo routines.

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Sample mean and standard error of the mean (sample standard deviation with
/// `len - 1` degrees of freedom divided by `sqrt(len)`; zero for one value).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let len = values.len();
    if len == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mut acc = CompensatedSum::default();
    acc.extend(values.iter().copied());
    let mean = acc.value() / len as f64;
    if len == 1 {
        return (mean, 0.0);
    }
    let mut sq = CompensatedSum::default();
    sq.extend(values.iter().map(|x| (x - mean) * (x - mean)));
    let var = sq.value() / (len - 1) as f64;
    (mean, libm::sqrt(var / len as f64))
}

/// Pearson correlation, `None` when either coordinate has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let len = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let mut sxy = CompensatedSum::default();
    let mut sxx = CompensatedSum::default();
    let mut syy = CompensatedSum::default();
    for (x, y) in xs.iter().zip(ys) {
        sxy.add((x - mx) * (y - my));
        sxx.add((x - mx) * (x - mx));
        syy.add((y - my) * (y - my));
    }
    let (sxx, syy) = (sxx.value(), syy.value());
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy.value() / libm::sqrt(sxx * syy))
}

/// `ln C(n, k)` via log-gamma.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln n!`, exact summation below 32 and log-gamma above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 32 {
        (2..=n).map(|i| libm::log(i as f64)).sum()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn mean_and_stderr() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((se - libm::sqrt(5.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn pearson_degenerate_is_none() {
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), None);
        let r = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_binomials() {
        assert!((ln_binomial(10, 3) - libm::log(120.0)).abs() < 1e-12);
        assert!((ln_factorial(40) - libm::lgamma(41.0)).abs() < 1e-9);
        assert!((log_add_exp(0.0, 0.0) - libm::log(2.0)).abs() < 1e-15);
    }
}
