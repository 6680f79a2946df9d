//! Rates that have closed forms (or a quadrature) and need no LP.

use crate::error::{Error, Result};
use crate::info::{capacity, Rate};
use crate::optimize::{integrate_1d, integrate_2d, PowerSplit};
use crate::scalar::Scalar;
use crate::topology::{CellArrayModel, Dimension};

/// Absolute tolerance of the joint-processing quadrature.
pub const WYNER_TOLERANCE: f64 = 1e-10;

/// Largest number of layers accepted by the multilayer schedule.
pub const MAX_LAYERS: usize = 16;

/// Joint decoding of the whole array with unlimited backhaul: the average of
/// `C(|H(θ)|² P)` over the array's spectral transfer function.
pub fn wyner_bound<T: Scalar>(model: &CellArrayModel<T>) -> Result<Rate<T>> {
    wyner_bound_with_tolerance(model, T::lit(WYNER_TOLERANCE))
}

pub fn wyner_bound_with_tolerance<T: Scalar>(model: &CellArrayModel<T>, tol: T) -> Result<Rate<T>> {
    let (a, p) = (model.alpha(), model.power());
    let two = T::lit(2.0);
    let tau = T::TAU();
    let v = match model.dimension() {
        Dimension::Line1D => integrate_1d(
            |t: T| {
                let h = T::one() + two * a * (tau * t).cos();
                capacity(h * h * p)
            },
            T::zero(),
            T::one(),
            tol,
        )?,
        Dimension::Hex2D => integrate_2d(
            |t1: T, t2: T| {
                let s = (tau * t1).cos() + (tau * t2).cos() + (tau * (t1 + t2)).cos();
                let h = T::one() + two * a * s;
                capacity(h * h * p)
            },
            tol,
        )?,
    };
    Rate::clamped(v)
}

/// Every neighbor treated as Gaussian noise.
pub fn naive_rate<T: Scalar>(model: &CellArrayModel<T>) -> Rate<T> {
    let (a, p) = (model.alpha(), model.power());
    let k = T::from_usize_lossy(model.dimension().neighbors());
    Rate::clamped(capacity(p / (T::one() + k * a * a * p))).expect("finite")
}

/// Cells of one color transmit at a time, at boosted power.
pub fn time_sharing_rate<T: Scalar>(model: &CellArrayModel<T>) -> Rate<T> {
    let colors = match model.dimension() {
        Dimension::Line1D => T::lit(2.0),
        Dimension::Hex2D => T::lit(3.0),
    };
    Rate::clamped(capacity(colors * model.power()) / colors).expect("finite")
}

/// Colors decode in turn, each subtracting the messages of the colors
/// already decoded by its neighbors.
pub fn scheduled_digital_rate<T: Scalar>(model: &CellArrayModel<T>) -> Rate<T> {
    let (a, p) = (model.alpha(), model.power());
    let one = T::one();
    let v = match model.dimension() {
        Dimension::Line1D => {
            let two = T::lit(2.0);
            T::lit(0.5) * (capacity(p / (one + two * a * a * p)) + capacity(p))
        }
        Dimension::Hex2D => {
            let (three, six) = (T::lit(3.0), T::lit(6.0));
            (capacity(p / (one + six * a * a * p)) + capacity(p / (one + three * a * a * p)) + capacity(p)) / three
        }
    };
    Rate::clamped(v).expect("finite")
}

/// One bound of the single-cell partial-decoding region on the line:
/// `d_coeff · R^d + ud_coeff · R^ud ≤ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct HkConstraint<T> {
    pub label: &'static str,
    pub d_coeff: u32,
    pub ud_coeff: u32,
    pub bound: T,
}

/// The explicit region for single-cell partial decoding on the line, with
/// `N = 1 + 2α²(1 − λ)P` the residual interference-plus-noise power.
pub fn hk_region_constraints<T: Scalar>(alpha: T, power: T, lambda: T) -> Result<Vec<HkConstraint<T>>> {
    check_split_scalar(alpha, power, lambda)?;
    let (a2, p, l) = (alpha * alpha, power, lambda);
    let one = T::one();
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    let u = one - l;
    let n = one + two * a2 * u * p;
    let c = |num: T| capacity(num / n);
    let row = |label, d_coeff, ud_coeff, bound| HkConstraint {
        label,
        d_coeff,
        ud_coeff,
        bound,
    };
    Ok(vec![
        row("ud", 0, 1, c(u * p)),
        row("d_1", 1, 0, c(a2 * l * p)),
        row("d_2", 1, 0, c(two * a2 * l * p) / two),
        row("d_all", 1, 0, c((one + two * a2) * l * p) / three),
        row("d1_plus_ud", 1, 1, c(u * p + a2 * l * p)),
        row("d2_plus_ud", 2, 1, c(u * p + two * a2 * l * p)),
        row("d_all_plus_ud", 3, 1, c(p + two * a2 * l * p)),
    ])
}

/// Single-cell partial-decoding rate at a fixed split, with `R^ud` at its
/// individual bound and `R^d` limited by the two stringent joint bounds.
pub fn hk_closed_form_objective<T: Scalar>(alpha: T, power: T, lambda: T) -> Result<T> {
    check_split_scalar(alpha, power, lambda)?;
    let (a2, p, l) = (alpha * alpha, power, lambda);
    let one = T::one();
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    let u = one - l;
    let ud = capacity(u * p / (one + two * a2 * u * p));
    let m = one + (one + two * a2) * u * p;
    let pair = capacity(two * a2 * l * p / m) / two;
    let triple = capacity((one + two * a2) * l * p / m) / three;
    Ok(ud + pair.min(triple))
}

/// Second-phase rate of overlap-scheduled decoding on the line: the odd
/// cell's `ud` part through a 3-antenna matched filter, with the `ud` parts
/// two cells away as the only residual interference.
pub fn overlap_scheduled_phase2_closed_form<T: Scalar>(alpha: T, power: T, lambda: T) -> Result<T> {
    check_split_scalar(alpha, power, lambda)?;
    let (a2, p) = (alpha * alpha, power);
    let one = T::one();
    let u = one - lambda;
    Ok(capacity(u * p * (one + T::lit(2.0) * a2 / (one + u * a2 * p))))
}

fn check_split_scalar<T: Scalar>(alpha: T, power: T, lambda: T) -> Result<()> {
    CellArrayModel::new(Dimension::Line1D, alpha, power)?;
    if !(T::zero()..=T::one()).contains(&lambda) {
        return Err(Error::Domain(format!("λ must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

pub(crate) fn check_layers(layers: usize) -> Result<()> {
    if layers == 0 {
        return Err(Error::Domain("at least one layer is required".into()));
    }
    if layers > MAX_LAYERS {
        return Err(Error::Size {
            what: "layers",
            got: layers,
            limit: MAX_LAYERS,
        });
    }
    Ok(())
}

fn tail_sum<T: Scalar>(w: &[T], from: usize) -> T {
    w[from.min(w.len())..].iter().fold(T::zero(), |acc, &x| acc + x)
}

/// Per-layer rates of the multilayer schedule, one vector per color in
/// decoding order. Layer `k` of a color is decoded after layers `≤ k` of the
/// colors before it and layers `< k` of the colors after it; everything
/// decoded is subtracted, everything else is noise.
pub fn multilayer_layer_rates<T: Scalar>(model: &CellArrayModel<T>, splits: &[PowerSplit<T>]) -> Result<Vec<Vec<T>>> {
    let colors = match model.dimension() {
        Dimension::Line1D => 2,
        Dimension::Hex2D => 3,
    };
    if splits.len() != colors {
        return Err(Error::Arity {
            expected: colors,
            got: splits.len(),
        });
    }
    let m = splits[0].dim();
    check_layers(m)?;
    if splits.iter().any(|s| s.dim() != m) {
        return Err(Error::Dimension("all colors need the same number of layers".into()));
    }
    let (a, p) = (model.alpha(), model.power());
    let one = T::one();
    let mut out = Vec::with_capacity(colors);
    match model.dimension() {
        Dimension::Line1D => {
            let two = T::lit(2.0);
            let (le, lo) = (splits[0].weights(), splits[1].weights());
            out.push(
                (0..m)
                    .map(|k| capacity(le[k] * p / (one + p * tail_sum(le, k + 1) + two * a * a * p * tail_sum(lo, k))))
                    .collect(),
            );
            out.push(
                (0..m)
                    .map(|k| {
                        capacity(lo[k] * p / (one + p * tail_sum(lo, k + 1) + two * a * a * p * tail_sum(le, k + 1)))
                    })
                    .collect(),
            );
        }
        Dimension::Hex2D => {
            // Three neighbors of each of the other two colors.
            let three = T::lit(3.0);
            let w: Vec<&[T]> = splits.iter().map(|s| s.weights()).collect();
            for c in 0..3 {
                out.push(
                    (0..m)
                        .map(|k| {
                            let mut den = one + p * tail_sum(w[c], k + 1);
                            for (o, wo) in w.iter().enumerate() {
                                if o != c {
                                    // Colors decoded earlier have layer k removed already.
                                    let from = if o < c { k + 1 } else { k };
                                    den += three * a * a * p * tail_sum(wo, from);
                                }
                            }
                            capacity(w[c][k] * p / den)
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(out)
}

/// Per-cell average of the multilayer schedule at the given allocations.
pub fn multilayer_objective<T: Scalar>(model: &CellArrayModel<T>, splits: &[PowerSplit<T>]) -> Result<T> {
    let rates = multilayer_layer_rates(model, splits)?;
    let total = rates
        .iter()
        .fold(T::zero(), |acc, r| acc + r.iter().fold(T::zero(), |s, &x| s + x));
    Ok(match model.dimension() {
        Dimension::Line1D => T::lit(0.5) * total,
        Dimension::Hex2D => total / T::lit(3.0),
    })
}
