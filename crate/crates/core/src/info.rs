//! Scalar AWGN capacity, log-determinants and the Gaussian MAC subset-rate
//! function every scheme's rate region is assembled from.
//!
//! For a MAC `y = H x + z` with independent inputs of power `P` and noise
//! covariance `K`, the achievable region is the polymatroid
//!
//! ```text
//! Σ_{i∈S} R_i ≤ f(S) = ½ log2 |K + P H_S H_Sᵀ| / |K|   for all S ⊆ {0..N_t}
//! ```
//!
//! Internally `H` is whitened once (`G = L⁻¹ H`, `K = L Lᵀ`) so that
//! `f(S) = ½ log2 |I + P G_S G_Sᵀ|`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::Scalar;

/// Subsets are enumerated exhaustively only up to this many inputs.
pub const MAX_ENUMERATED_INPUTS: usize = 20;

/// Structural cap on the number of MAC inputs (one bit per column).
pub const MAX_INPUTS: usize = 64;

const ASYMMETRY_LIMIT: f64 = 1e-9;

/// Rate in bits per channel use; nonnegative and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Rate<T>(T);

impl<T: Scalar> Rate<T> {
    pub fn new(value: T) -> Result<Self> {
        if !value.is_finite() || value < T::zero() {
            return Err(Error::Domain(format!("rate must be finite and >= 0, got {value}")));
        }
        Ok(Self(value))
    }

    /// Clamps round-off negatives (e.g. `-1e-17` from an LP) to zero.
    pub fn clamped(value: T) -> Result<Self> {
        Self::new(value.max(T::zero()))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }
}

impl<T: fmt::Display> fmt::Display for Rate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `C(x) = ½ log2(1 + x)`.
pub fn awgn_capacity<T: Scalar>(snr: T) -> Result<Rate<T>> {
    if !(snr >= T::zero()) || !snr.is_finite() {
        return Err(Error::Domain(format!("snr must be finite and >= 0, got {snr}")));
    }
    Ok(Rate(capacity(snr)))
}

/// Unchecked `½ log2(1 + x)` for internal closed forms.
pub(crate) fn capacity<T: Scalar>(snr: T) -> T {
    T::lit(0.5) * snr.ln_1p() / T::LN_2()
}

/// `log2 |m|` of a symmetric positive-definite matrix.
pub fn log_det_psd<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let asym = m.max_asymmetry();
    if asym > T::lit(ASYMMETRY_LIMIT) {
        return Err(Error::Asymmetric(asym.to_f64_lossy()));
    }
    Ok(Cholesky::new(&m.symmetrized())?.log2_det())
}

/// A set of MAC input (column) indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetIndex(u64);

impl SubsetIndex {
    pub const EMPTY: Self = Self(0);

    pub fn from_mask(mask: u64) -> Self {
        Self(mask)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().fold(0u64, |m, i| {
            assert!(i < MAX_INPUTS, "column index {i} out of range");
            m | (1u64 << i)
        }))
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_INPUTS);
        if n == MAX_INPUTS {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INPUTS && self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        Self(self.0 | 1u64 << i)
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Largest index + 1, or 0 for the empty set.
    pub fn bound(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Decoded-signal channel `H_d`, per-input power `P` and noise covariance `K`.
#[derive(Clone, Debug)]
pub struct GaussianMac<T> {
    h_d: Matrix<T>,
    power: T,
    noise_cov: Matrix<T>,
    whitened: Matrix<T>,
    col_gram: Matrix<T>,
}

impl<T: Scalar> GaussianMac<T> {
    pub fn new(h_d: Matrix<T>, power: T, noise_cov: Matrix<T>) -> Result<Self> {
        let (n_r, n_t) = (h_d.rows(), h_d.cols());
        if n_r == 0 || n_t == 0 {
            return Err(Error::Dimension(format!("MAC needs N_r, N_t >= 1, got {n_r}x{n_t}")));
        }
        if n_t > MAX_INPUTS {
            return Err(Error::Size {
                what: "MAC inputs",
                got: n_t,
                limit: MAX_INPUTS,
            });
        }
        if !(power >= T::zero()) || !power.is_finite() {
            return Err(Error::Domain(format!("power must be finite and >= 0, got {power}")));
        }
        if noise_cov.rows() != n_r || noise_cov.cols() != n_r {
            return Err(Error::Dimension(format!(
                "noise covariance is {}x{}, expected {n_r}x{n_r}",
                noise_cov.rows(),
                noise_cov.cols()
            )));
        }
        let asym = noise_cov.max_asymmetry();
        if asym > T::lit(ASYMMETRY_LIMIT) {
            return Err(Error::Asymmetric(asym.to_f64_lossy()));
        }
        let noise_cov = noise_cov.symmetrized();
        let chol = Cholesky::new(&noise_cov)?;
        let whitened = chol.whiten(&h_d);
        let col_gram = whitened.transpose().outer_gram();
        Ok(Self {
            h_d,
            power,
            noise_cov,
            whitened,
            col_gram,
        })
    }

    /// MAC with `K = I + P Σ_k N_k N_kᵀ` for the given treated-as-noise blocks.
    pub fn with_interference(h_d: Matrix<T>, power: T, noise_blocks: &[&Matrix<T>]) -> Result<Self> {
        let n_r = h_d.rows();
        let mut k = Matrix::identity(n_r);
        for block in noise_blocks {
            if block.cols() == 0 {
                continue;
            }
            if block.rows() != n_r {
                return Err(Error::Dimension(format!(
                    "noise block has {} rows, expected {n_r}",
                    block.rows()
                )));
            }
            k = k.add(&block.outer_gram().scale(power))?;
        }
        Self::new(h_d, power, k)
    }

    pub fn num_inputs(&self) -> usize {
        self.h_d.cols()
    }

    pub fn num_outputs(&self) -> usize {
        self.h_d.rows()
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn channel(&self) -> &Matrix<T> {
        &self.h_d
    }

    pub fn noise_cov(&self) -> &Matrix<T> {
        &self.noise_cov
    }

    /// `f(S)`; zero for the empty set. Panics if `subset` names a column
    /// outside the MAC (use [`mac_subset_rate`] for a checked version).
    pub fn subset_rate(&self, subset: SubsetIndex) -> T {
        assert!(subset.bound() <= self.num_inputs(), "subset {subset:?} out of range");
        let k = subset.len();
        if k == 0 {
            return T::zero();
        }
        let p = self.power;
        let n_r = self.num_outputs();
        let m = if k < n_r {
            // Sylvester: |I + P G_S G_Sᵀ| = |I + P G_Sᵀ G_S|.
            let idx: Vec<usize> = subset.iter().collect();
            Matrix::from_fn(k, k, |a, b| {
                let v = p * self.col_gram[(idx[a], idx[b])];
                if a == b {
                    T::one() + v
                } else {
                    v
                }
            })
        } else {
            let mut m = Matrix::identity(n_r);
            for c in subset.iter() {
                for a in 0..n_r {
                    let ga = p * self.whitened[(a, c)];
                    for b in 0..=a {
                        m[(a, b)] += ga * self.whitened[(b, c)];
                    }
                }
            }
            for a in 0..n_r {
                for b in 0..a {
                    m[(b, a)] = m[(a, b)];
                }
            }
            m
        };
        let ld = Cholesky::new(&m).expect("I + P G Gᵀ is positive definite").log2_det();
        (T::lit(0.5) * ld).max(T::zero())
    }

    /// `f` of the full input set.
    pub fn sum_rate(&self) -> T {
        self.subset_rate(SubsetIndex::full(self.num_inputs()))
    }

    /// `f(S)` for every mask `0..2^N_t`, indexed by mask.
    pub fn subset_rate_table(&self) -> Result<Vec<T>> {
        let n = self.num_inputs();
        check_enumerable(n)?;
        Ok((0..1u64 << n)
            .map(|m| self.subset_rate(SubsetIndex::from_mask(m)))
            .collect())
    }
}

pub(crate) fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATED_INPUTS {
        return Err(Error::Size {
            what: "subset enumeration",
            got: n,
            limit: MAX_ENUMERATED_INPUTS,
        });
    }
    Ok(())
}

/// Checked `f(S)`.
pub fn mac_subset_rate<T: Scalar>(mac: &GaussianMac<T>, subset: SubsetIndex) -> Result<Rate<T>> {
    if subset.bound() > mac.num_inputs() {
        return Err(Error::Dimension(format!(
            "subset {subset:?} names columns beyond N_t = {}",
            mac.num_inputs()
        )));
    }
    Rate::clamped(mac.subset_rate(subset))
}

/// Whether `rates` satisfies every subset-sum bound of the MAC region within `tol`.
pub fn mac_region_contains<T: Scalar>(mac: &GaussianMac<T>, rates: &[T], tol: T) -> Result<bool> {
    let n = mac.num_inputs();
    check_enumerable(n)?;
    if rates.len() != n {
        return Err(Error::Dimension(format!("{} rates for {n} inputs", rates.len())));
    }
    if let Some(r) = rates.iter().find(|r| !(**r >= T::zero())) {
        return Err(Error::Domain(format!("rates must be >= 0, got {r}")));
    }
    for m in 1..1u64 << n {
        let s = SubsetIndex::from_mask(m);
        let sum: T = s.iter().map(|i| rates[i]).sum();
        if sum > mac.subset_rate(s) + tol {
            return Ok(false);
        }
    }
    Ok(true)
}
