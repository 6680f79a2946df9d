use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::OptResult;

pub const SCALAR_GRID_POINTS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[lo, hi]`: a 64-point grid (endpoints included), then
/// golden-section refinement inside the bracket around the best grid point.
///
/// For unimodal `f` the argmax is located within `tol`; otherwise the result
/// is at least the best grid value.
pub fn maximize_scalar<T, F>(f: F, lo: T, hi: T, tol: T) -> Result<OptResult<T, T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    maximize_scalar_with_grid(f, lo, hi, tol, SCALAR_GRID_POINTS)
}

/// [`maximize_scalar`] with a custom number of initial grid points (≥ 2).
pub fn maximize_scalar_with_grid<T, F>(mut f: F, lo: T, hi: T, tol: T, grid_points: usize) -> Result<OptResult<T, T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    if grid_points < 2 {
        return Err(Error::Domain(format!("need at least 2 grid points, got {grid_points}")));
    }
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: T| -> Result<T> {
        evaluations += 1;
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("objective is {v} at {x}")));
        }
        Ok(v)
    };

    let n = grid_points;
    let span = hi - lo;
    let grid = |k: usize| {
        if k == n - 1 {
            hi
        } else {
            lo + span * T::from_usize_lossy(k) / T::from_usize_lossy(n - 1)
        }
    };
    let mut best_k = 0;
    let mut best = (grid(0), eval(grid(0))?);
    for k in 1..n {
        let x = grid(k);
        let v = eval(x)?;
        if v > best.1 {
            best = (x, v);
            best_k = k;
        }
    }

    let mut a = grid(best_k.saturating_sub(1));
    let mut b = grid((best_k + 1).min(n - 1));
    let r = T::lit(INV_PHI);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(OptResult {
        argmax: best.0,
        value: best.1,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_peak() {
        let r = maximize_scalar(|x: f64| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-6).unwrap();
        assert!((r.argmax - 0.3).abs() <= 1e-6);
        assert!(r.value <= 0.0 && r.value > -1e-12);
    }

    #[test]
    fn constant_objective() {
        let r = maximize_scalar(|_x: f64| Ok(2.5), 0.0, 1.0, 1e-6).unwrap();
        assert_eq!(r.value, 2.5);
        assert!((0.0..=1.0).contains(&r.argmax));
    }

    #[test]
    fn endpoint_maximum_is_found() {
        let r = maximize_scalar(|x: f64| Ok(x), 0.0, 1.0, 1e-8).unwrap();
        assert_eq!(r.argmax, 1.0);
        let r = maximize_scalar(|x: f64| Ok(-x), 0.0, 1.0, 1e-8).unwrap();
        assert_eq!(r.argmax, 0.0);
    }

    #[test]
    fn multimodal_never_below_grid() {
        let f = |x: f64| (25.0 * x).sin() + 0.3 * x;
        let r = maximize_scalar(|x| Ok(f(x)), 0.0, 1.0, 1e-8).unwrap();
        let grid_best = (0..SCALAR_GRID_POINTS)
            .map(|k| f(k as f64 / (SCALAR_GRID_POINTS - 1) as f64))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.value >= grid_best);
        assert!((f(r.argmax) - r.value).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(maximize_scalar(|_x: f64| Ok(f64::NAN), 0.0, 1.0, 1e-6).is_err());
        assert!(maximize_scalar(|_x: f64| Ok(0.0), 1.0, 1.0, 1e-6).is_err());
        assert!(maximize_scalar(|_x: f64| Err(Error::Evaluation("boom".into())), 0.0, 1.0, 1e-6).is_err());
    }
}
