//! Small numeric helpers shared across modules.

/// Double-double scalar: an unevaluated sum `hi + lo` carrying roughly
/// 32 significant digits. Only the handful of operations the Mittag-Leffler
/// power recurrence needs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        let e = (hi - s) + lo;
        Dd { hi: s, lo: e }
    }

    /// Exact product of two f64 via FMA, then accumulate the tail.
    pub fn mul_f64(self, c: f64) -> Self {
        let p = self.hi * c;
        let e = self.hi.mul_add(c, -p) + self.lo * c;
        Dd::renorm(p, e)
    }

    pub fn add(self, other: Dd) -> Self {
        let s = self.hi + other.hi;
        let v = s - self.hi;
        let e = (self.hi - (s - v)) + (other.hi - v) + self.lo + other.lo;
        Dd::renorm(s, e)
    }

    pub fn sub(self, other: Dd) -> Self {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }
}

/// Complex double-double, for the `z^n` recurrence of truncated power
/// series with heavy cancellation.
#[derive(Debug, Clone, Copy)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn one() -> Self {
        DdComplex {
            re: Dd::from_f64(1.0),
            im: Dd::from_f64(0.0),
        }
    }

    /// Multiply by an ordinary complex number.
    pub fn mul_c64(self, c: num_complex::Complex64) -> Self {
        DdComplex {
            re: self.re.mul_f64(c.re).sub(self.im.mul_f64(c.im)),
            im: self.re.mul_f64(c.im).add(self.im.mul_f64(c.re)),
        }
    }

    pub fn value(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated (Kahan–Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Ordinary least squares fit `y = a + b x`, returning `(a, b, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (a, b, r2)
}

/// Relative difference |a-b| / max(|a|, |b|, floor).
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

/// Map `f` over `items`, optionally in parallel.
///
/// The number of worker threads is read from `FOXDIFF_THREADS` (default 1).
/// Results are returned in input order, and every item is computed by a pure
/// function, so the output does not depend on the thread count.
pub fn parallel_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = std::env::var("FOXDIFF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(1)
        .max(1);
    if threads == 1 || items.len() < 2 {
        return items.iter().map(|t| f(t)).collect();
    }
    let n = items.len();
    let chunk = n.div_ceil(threads);
    let mut out: Vec<Option<U>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (slot_chunk, item_chunk) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            let f = &f;
            scope.spawn(move || {
                for (slot, item) in slot_chunk.iter_mut().zip(item_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("all slots filled")).collect()
}

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_ill_conditioned_sum() {
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-18);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 3.0 * x).collect();
        let (a, b, r2) = linear_fit(&xs, &ys);
        assert!((a - 2.5).abs() < 1e-12);
        assert!((b + 3.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_map_preserves_order() {
        std::env::set_var("FOXDIFF_THREADS", "3");
        let v: Vec<usize> = (0..101).collect();
        let out = parallel_map(v.clone(), |x| x * 2);
        assert_eq!(out, v.iter().map(|x| x * 2).collect::<Vec<_>>());
        std::env::remove_var("FOXDIFF_THREADS");
    }
}
