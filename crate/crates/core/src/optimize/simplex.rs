use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::OptResult;

/// Largest simplex dimension accepted by the lattice search.
pub const MAX_SIMPLEX_DIM: usize = 32;

const FINAL_STEP: f64 = 1e-4;
const MIN_GAIN: f64 = 1e-9;
const SUM_TOLERANCE: f64 = 1e-12;

/// A point on the probability simplex: nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSplit<T> {
    weights: Vec<T>,
}

impl<T: Scalar> PowerSplit<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("a power split needs at least one weight".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= T::zero()) || !w.is_finite()) {
            return Err(Error::Domain(format!("split weight {w} is not a nonnegative number")));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(SUM_TOLERANCE).max(T::epsilon() * T::lit(16.0)) {
            return Err(Error::Domain(format!("split weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    /// The two-way split `(λ, 1 − λ)`.
    pub fn two_way(lambda: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&lambda) {
            return Err(Error::Domain(format!("λ = {lambda} is outside [0, 1]")));
        }
        Self::new(vec![lambda, T::one() - lambda])
    }

    /// All power on one coordinate.
    pub fn vertex(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut weights = vec![T::zero(); dim];
        weights[k] = T::one();
        Self { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, k: usize) -> T {
        self.weights[k]
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn lattice_size(dims: &[usize], n: usize) -> f64 {
    dims.iter().map(|&d| binomial(n + d - 1, d - 1)).product()
}

/// Largest lattice resolution whose point count fits in `budget` (at least 1).
fn lattice_resolution(dims: &[usize], budget: usize) -> usize {
    let mut n = 1;
    while n < 100_000 && lattice_size(dims, n + 1) <= budget as f64 {
        n += 1;
    }
    n
}

/// All compositions of `n` into `d` nonnegative parts, in lexicographic order.
fn compositions(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == d {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(left - k, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Maximizes `f` over one probability simplex of dimension `dim`.
///
/// See [`maximize_simplex_product`] for the search strategy.
pub fn maximize_simplex<T, F>(mut f: F, dim: usize, budget: usize) -> Result<OptResult<PowerSplit<T>, T>>
where
    T: Scalar,
    F: FnMut(&PowerSplit<T>) -> Result<T>,
{
    let r = maximize_simplex_product(|s: &[PowerSplit<T>]| f(&s[0]), &[dim], budget)?;
    Ok(OptResult {
        argmax: r.argmax.into_iter().next().expect("one factor"),
        value: r.value,
        evaluations: r.evaluations,
    })
}

/// Maximizes `f` over a product of probability simplices.
///
/// A uniform lattice of resolution `n` (the largest whose size fits `budget`)
/// is scanned first. The best lattice point then seeds a local search that
/// moves mass between pairs of coordinates of one factor, with the transfer
/// step halving from `1/n` down to `1e-4`; a move is accepted only if it gains
/// more than `1e-9`. Everything is deterministic.
pub fn maximize_simplex_product<T, F>(
    mut f: F,
    dims: &[usize],
    budget: usize,
) -> Result<OptResult<Vec<PowerSplit<T>>, T>>
where
    T: Scalar,
    F: FnMut(&[PowerSplit<T>]) -> Result<T>,
{
    if dims.is_empty() {
        return Err(Error::Domain("no simplex factors given".into()));
    }
    for &d in dims {
        if d == 0 {
            return Err(Error::Domain("simplex dimension must be at least 1".into()));
        }
        if d > MAX_SIMPLEX_DIM {
            return Err(Error::Size {
                what: "simplex dimension",
                got: d,
                limit: MAX_SIMPLEX_DIM,
            });
        }
    }

    let mut evaluations = 0usize;
    let mut eval = |point: &[PowerSplit<T>]| -> Result<T> {
        evaluations += 1;
        let v = f(point)?;
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("objective is {v} at {point:?}")));
        }
        Ok(v)
    };

    let n = lattice_resolution(dims, budget);
    let per_factor: Vec<Vec<Vec<usize>>> = dims.iter().map(|&d| compositions(n, d)).collect();
    let scale = T::from_usize_lossy(n);
    let to_split = |c: &[usize]| PowerSplit {
        weights: c.iter().map(|&k| T::from_usize_lossy(k) / scale).collect(),
    };

    // Odometer over the cartesian product of per-factor lattices.
    let mut idx = vec![0usize; dims.len()];
    let mut best: Option<(Vec<PowerSplit<T>>, T)> = None;
    loop {
        let point: Vec<PowerSplit<T>> = idx.iter().zip(&per_factor).map(|(&i, lat)| to_split(&lat[i])).collect();
        let v = eval(&point)?;
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((point, v));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                break;
            }
            idx[k] += 1;
            if idx[k] < per_factor[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let (mut point, mut value) = best.expect("lattice is never empty");

    let final_step = T::lit(FINAL_STEP);
    let gain = T::lit(MIN_GAIN);
    let mut step = (T::one() / scale).max(final_step);
    loop {
        let mut improved = true;
        while improved {
            improved = false;
            for fi in 0..dims.len() {
                for a in 0..dims[fi] {
                    for b in 0..dims[fi] {
                        if a == b || point[fi].weights[a] <= T::zero() {
                            continue;
                        }
                        let mut cand = point.clone();
                        let w = &mut cand[fi].weights;
                        if w[a] <= step {
                            let moved = w[a];
                            w[b] += moved;
                            w[a] = T::zero();
                        } else {
                            w[a] -= step;
                            w[b] += step;
                        }
                        let v = eval(&cand)?;
                        if v > value + gain {
                            point = cand;
                            value = v;
                            improved = true;
                        }
                    }
                }
            }
        }
        if step <= final_step {
            break;
        }
        step = (step * T::lit(0.5)).max(final_step);
    }

    Ok(OptResult {
        argmax: point,
        value,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_validation() {
        assert!(PowerSplit::new(vec![0.25, 0.75]).is_ok());
        assert!(PowerSplit::new(vec![0.25, 0.7]).is_err());
        assert!(PowerSplit::new(vec![-0.25, 1.25]).is_err());
        assert!(PowerSplit::<f64>::new(vec![]).is_err());
        assert!(PowerSplit::two_way(1.5).is_err());
        assert_eq!(PowerSplit::two_way(0.25).unwrap().weights(), &[0.25, 0.75]);
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(4, 1), vec![vec![4]]);
        let n = lattice_resolution(&[3], 66);
        assert_eq!(n, 10); // C(12, 2) = 66
        assert_eq!(lattice_resolution(&[3, 3], 1), 1);
    }

    #[test]
    fn linear_objective_reaches_a_vertex() {
        let c = [0.3, 1.7, -0.2, 0.9];
        let r = maximize_simplex(
            |s: &PowerSplit<f64>| Ok(s.weights().iter().zip(&c).map(|(w, c)| w * c).sum()),
            4,
            200,
        )
        .unwrap();
        assert_eq!(r.argmax, PowerSplit::vertex(4, 1));
        assert!((r.value - 1.7).abs() < 1e-15);
    }

    #[test]
    fn symmetric_concave_objective_reaches_barycenter() {
        let r = maximize_simplex(
            |s: &PowerSplit<f64>| Ok(s.weights().iter().map(|w| w.ln()).sum()),
            3,
            100,
        );
        // ln 0 is −∞ on the lattice boundary.
        assert!(matches!(r, Err(Error::Evaluation(_))));

        let r = maximize_simplex(
            |s: &PowerSplit<f64>| Ok(-s.weights().iter().map(|w| w * w).sum::<f64>()),
            3,
            100,
        )
        .unwrap();
        for &w in r.argmax.weights() {
            assert!((w - 1.0 / 3.0).abs() <= 1e-4, "{:?}", r.argmax);
        }
    }

    #[test]
    fn product_search_handles_independent_factors() {
        let r = maximize_simplex_product(
            |s: &[PowerSplit<f64>]| {
                let a = s[0].weight(0);
                let b = s[1].weight(2);
                Ok(-(a - 0.37).powi(2) - (b - 0.81).powi(2))
            },
            &[2, 3],
            400,
        )
        .unwrap();
        assert!((r.argmax[0].weight(0) - 0.37).abs() < 1e-3);
        assert!((r.argmax[1].weight(2) - 0.81).abs() < 1e-3);
        for s in &r.argmax {
            assert!(PowerSplit::new(s.weights().to_vec()).is_ok());
        }
    }

    #[test]
    fn deterministic_and_consistent() {
        let f = |s: &PowerSplit<f64>| Ok((7.0 * s.weight(0)).sin() * s.weight(1) + s.weight(2).sqrt());
        let a = maximize_simplex(f, 3, 150).unwrap();
        let b = maximize_simplex(f, 3, 150).unwrap();
        assert_eq!(a, b);
        assert!((f(&a.argmax).unwrap() - a.value).abs() <= 1e-12);
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            maximize_simplex(|_s: &PowerSplit<f64>| Ok(0.0), 33, 10),
            Err(Error::Size { .. })
        ));
    }
}
