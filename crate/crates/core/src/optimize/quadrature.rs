use crate::error::{Error, Result};
use crate::scalar::Scalar;

const INITIAL_PANELS: usize = 16;
const MAX_DEPTH: u32 = 40;

struct Panel<T> {
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

fn adaptive<T, F>(f: &mut F, p: Panel<T>, tol: T, depth: u32) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let half = T::lit(0.5);
    let m = (p.a + p.b) * half;
    let lm = (p.a + m) * half;
    let rm = (m + p.b) * half;
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= T::lit(15.0) * tol {
        return Ok(left + right + delta / T::lit(15.0));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Accuracy(format!(
            "adaptive Simpson did not converge on [{}, {}] (error estimate {})",
            p.a,
            p.b,
            delta.abs() / T::lit(15.0)
        )));
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(adaptive(f, l, tol * half, depth + 1)? + adaptive(f, r, tol * half, depth + 1)?)
}

fn integrate_fallible<T, F>(mut f: F, a: T, b: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    if !(a < b) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let n = T::from_usize_lossy(INITIAL_PANELS);
    let node = |k: usize| a + (b - a) * T::from_usize_lossy(k) / n;
    let panel_tol = tol / n;
    let mut total = T::zero();
    let mut fa = f(a)?;
    for k in 0..INITIAL_PANELS {
        let (pa, pb) = (node(k), if k + 1 == INITIAL_PANELS { b } else { node(k + 1) });
        let fm = f((pa + pb) * T::lit(0.5))?;
        let fb = f(pb)?;
        let panel = Panel {
            a: pa,
            b: pb,
            fa,
            fm,
            fb,
            whole: simpson(pa, pb, fa, fm, fb),
        };
        total += adaptive(&mut f, panel, panel_tol, 0)?;
        fa = fb;
    }
    if !total.is_finite() {
        return Err(Error::Evaluation(format!("integral evaluated to {total}")));
    }
    Ok(total)
}

/// `∫ₐᵇ f` by adaptive Simpson: 16 initial panels, each bisected until the
/// local error estimate is below its share of `tol`.
pub fn integrate_1d<T, F>(mut f: F, a: T, b: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    integrate_fallible(|x| Ok(f(x)), a, b, tol)
}

/// Inner integrals of the nested 2D rule are computed this much tighter than
/// the outer one. Their error is noise in the outer integrand; the outer
/// bisection shrinks its panel tolerance with the panel width, so noise at
/// the outer tolerance itself would never be accepted.
const INNER_TOLERANCE_FACTOR: f64 = 1.0 / 64.0;

/// `∫∫ f` over the unit square, by nesting the adaptive rule.
pub fn integrate_2d<T, F>(mut f: F, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T, T) -> T,
{
    let inner_tol = tol * T::lit(INNER_TOLERANCE_FACTOR);
    integrate_fallible(
        |x| integrate_fallible(|y| Ok(f(x, y)), T::zero(), T::one(), inner_tol),
        T::zero(),
        T::one(),
        tol,
    )
}
