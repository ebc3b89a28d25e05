//! Scalar minimization on an interval: a coarse grid scan to find the
//! basin, then golden-section refinement inside the winning grid cell.
//!
//! The objective may be undefined at some points (returns `None`); those
//! points are skipped by the scan and never win.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Inverse golden ratio, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

// Two candidates closer than this (relative) count as a tie.
const TIE_RELATIVE: f64 = 4.0 * f64::EPSILON;

fn better(candidate: (f64, f64), incumbent: (f64, f64)) -> bool {
    let (cx, cv) = candidate;
    let (ix, iv) = incumbent;
    let slack = TIE_RELATIVE * iv.abs().max(1.0);
    cv < iv - slack || (cv <= iv + slack && cx < ix)
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    while (b - a).abs() > tol {
        if fc <= fd {
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
        evaluations += 1;
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Minimum {
        x,
        value,
        evaluations,
    }
}

/// Scans `[lo, hi]` at spacing `step`, then refines around the best grid
/// point with golden-section search to `tol`. Ties go to the smaller `x`.
/// Returns `None` when `f` is undefined at every grid point.
pub fn grid_then_golden<F>(mut f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Option<Minimum>
where
    F: FnMut(f64) -> Option<f64>,
{
    debug_assert!(hi >= lo && step > 0.0 && tol > 0.0);
    let cells = libm::ceil((hi - lo) / step).max(1.0) as usize;
    let grid_x = |i: usize| if i == cells { hi } else { lo + i as f64 * step };

    let mut evaluations = 0;
    let mut best: Option<(usize, f64)> = None;
    for i in 0..=cells {
        evaluations += 1;
        if let Some(v) = f(grid_x(i)) {
            match best {
                Some((j, bv)) if !better((grid_x(i), v), (grid_x(j), bv)) => {}
                _ => best = Some((i, v)),
            }
        }
    }
    let (i, grid_value) = best?;

    let left = grid_x(i.saturating_sub(1));
    let right = grid_x((i + 1).min(cells));
    let mut incumbent = (grid_x(i), grid_value);
    if right > left {
        let refined = golden_section(|x| f(x).unwrap_or(f64::INFINITY), left, right, tol);
        evaluations += refined.evaluations;
        if refined.value.is_finite() && better((refined.x, refined.value), incumbent) {
            incumbent = (refined.x, refined.value);
        }
    }
    Some(Minimum {
        x: incumbent.0,
        value: incumbent.1,
        evaluations,
    })
}
