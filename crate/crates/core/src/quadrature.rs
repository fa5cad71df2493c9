//! Composite quadrature rules on sampled data.

/// Trapezoid rule for samples `(x_k, y_k)` with nondecreasing abscissae.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Running trapezoid integral; entry `k` is the integral up to `xs[k]`.
pub fn cumulative_trapezoid(xs: &[f64], ys: &[f64]) -> alloc::vec::Vec<f64> {
    let mut out = alloc::vec::Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    if !xs.is_empty() {
        out.push(0.0);
    }
    for (x, y) in xs.windows(2).zip(ys.windows(2)) {
        acc += 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
        out.push(acc);
    }
    out
}

/// Composite Simpson rule for `f` on `[a, b]` with `intervals` subintervals
/// (rounded up to even). Returns 0 for empty or reversed intervals.
pub fn simpson<T, F>(f: F, a: f64, b: f64, intervals: usize) -> T
where
    T: Copy + Default + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    if !(b > a) {
        return T::default();
    }
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + h * k as f64) * w;
    }
    acc * (h / 3.0)
}
