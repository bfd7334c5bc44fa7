//! One-dimensional grid scans and golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Grid point `i` of `[lo, hi]` with spacing `step`, computed without
/// accumulating rounding error.
pub fn grid_point(lo: f64, step: f64, i: usize) -> f64 {
    lo + i as f64 * step
}

/// Number of grid points of `[lo, hi]` at spacing `step`, both ends included.
pub fn grid_len(lo: f64, hi: f64, step: f64) -> usize {
    libm::floor((hi - lo) / step + 1e-9) as usize + 1
}

/// Maximizes `f` over the grid of `[lo, hi]` and returns `(argmax, max)`.
/// The first maximizer wins ties; NaN values are skipped.
pub fn grid_max(lo: f64, hi: f64, step: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..grid_len(lo, hi, step) {
        let x = grid_point(lo, step, i).min(hi);
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Golden-section search for a maximum of `f` on `[a, b]` until the bracket is
/// narrower than `tol`. Returns `(argmax, max)`.
pub fn golden_max(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a minimum. Returns `(argmin, min)`.
pub fn golden_min(a: f64, b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let (x, v) = golden_max(a, b, tol, |x| -f(x));
    (x, -v)
}

/// Grid maximum over `[lo, hi]` refined by golden-section search on the two
/// neighbouring cells of the best grid point.
pub fn refined_max(lo: f64, hi: f64, step: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let (x0, v0) = grid_max(lo, hi, step, &mut f);
    let (x1, v1) = golden_max((x0 - step).max(lo), (x0 + step).min(hi), tol, &mut f);
    if v1 > v0 {
        (x1, v1)
    } else {
        (x0, v0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(0.0, 4.0, 1e-10, |x| -(x - 1.3) * (x - 1.3) + 2.0);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
        let (x, v) = golden_min(-3.0, 3.0, 1e-10, |x| (x + 0.5).abs() + 1.0);
        assert!((x + 0.5).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn grid_covers_both_ends() {
        assert_eq!(grid_len(1.0, 3.0, 1e-3), 2001);
        assert_eq!(grid_len(0.0, 1.0, 0.5), 3);
        let (x, _) = grid_max(0.0, 1.0, 0.25, |x| x);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn refinement_beats_grid() {
        let f = |x: f64| -(x - 0.123_456_7) * (x - 0.123_456_7);
        let (x, _) = refined_max(0.0, 1.0, 0.01, 1e-10, f);
        assert!((x - 0.123_456_7).abs() < 1e-8);
    }
}
