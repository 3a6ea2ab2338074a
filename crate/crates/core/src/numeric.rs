//! Scalar root finding and line search.

/// Golden ratio conjugate, `(√5 − 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Returns `None` when `f(lo)` and `f(hi)` have the same strict sign. An exact
/// zero at either end is returned immediately.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Result of a one-dimensional line search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMin {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section minimization of `f` on `[a, b]` down to bracket width `tol`.
///
/// The endpoints are evaluated too, so a monotone function returns its
/// smaller endpoint rather than a point merely close to it.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> LineMin {
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let (ea, eb) = (a, b);
    let mut evaluations = 0;
    let mut eval = |x: f64, n: &mut usize| {
        *n += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut evaluations);
    let mut fd = eval(d, &mut evaluations);
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut evaluations);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut evaluations);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [ea, eb] {
        let v = eval(x, &mut evaluations);
        if v < best.1 {
            best = (x, v);
        }
    }
    LineMin {
        x: best.0,
        value: best.1,
        evaluations,
    }
}

/// Golden-section maximization; see [`golden_min`].
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> LineMin {
    let r = golden_min(|x| -f(x), a, b, tol);
    LineMin {
        value: -r.value,
        ..r
    }
}
