//! Weighted group-rate maximization over a MAC polymatroid with tied rates.
//!
//! Columns of the decoded channel are partitioned into groups whose members
//! share one rate (e.g. all `x^d` parts across cells). For a subset `S`, the
//! region constraint `Σ_{i∈S} R_i ≤ f(S)` becomes `Σ_g n_g(S) R_g ≤ f(S)` with
//! `n_g(S)` the number of group-`g` columns in `S`. Only the smallest `f`
//! among subsets with equal count vectors can bind, so constraints are
//! aggregated by count vector before the LP is solved.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::info::{check_enumerable, mac_region_contains, GaussianMac, Rate, SubsetIndex};
use crate::scalar::Scalar;
use crate::simplex::DenseLp;

const BINDING_TOL: f64 = 1e-9;

/// Assignment of MAC columns to tied-rate groups, with objective weights.
#[derive(Clone, Debug, PartialEq)]
pub struct RateGrouping<T> {
    group_of: Vec<usize>,
    weights: Vec<T>,
    multiplicity: Vec<usize>,
}

impl<T: Scalar> RateGrouping<T> {
    pub fn new(group_of: Vec<usize>, weights: Vec<T>) -> Result<Self> {
        let g = weights.len();
        if g == 0 {
            return Err(Error::InvalidGrouping("no groups".into()));
        }
        let mut multiplicity = vec![0usize; g];
        for (col, &grp) in group_of.iter().enumerate() {
            if grp >= g {
                return Err(Error::InvalidGrouping(format!(
                    "column {col} assigned to group {grp}, only {g} groups"
                )));
            }
            multiplicity[grp] += 1;
        }
        if let Some(empty) = multiplicity.iter().position(|&m| m == 0) {
            return Err(Error::InvalidGrouping(format!("group {empty} has no columns")));
        }
        if weights.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidGrouping("weights must be finite and >= 0".into()));
        }
        if !weights.iter().any(|w| *w > T::zero()) {
            return Err(Error::InvalidGrouping("at least one weight must be positive".into()));
        }
        Ok(Self {
            group_of,
            weights,
            multiplicity,
        })
    }

    /// Builds a grouping from explicit column lists, one per group.
    pub fn from_groups(num_columns: usize, groups: &[&[usize]], weights: Vec<T>) -> Result<Self> {
        let mut group_of = vec![usize::MAX; num_columns];
        for (g, cols) in groups.iter().enumerate() {
            for &c in *cols {
                if c >= num_columns {
                    return Err(Error::InvalidGrouping(format!("column {c} out of range")));
                }
                if group_of[c] != usize::MAX {
                    return Err(Error::InvalidGrouping(format!("column {c} in two groups")));
                }
                group_of[c] = g;
            }
        }
        if let Some(c) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::InvalidGrouping(format!("column {c} not assigned")));
        }
        Self::new(group_of, weights)
    }

    pub fn num_columns(&self) -> usize {
        self.group_of.len()
    }

    pub fn num_groups(&self) -> usize {
        self.weights.len()
    }

    pub fn group_of(&self, column: usize) -> usize {
        self.group_of[column]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    pub fn columns_of(&self, group: usize) -> impl Iterator<Item = usize> + '_ {
        self.group_of
            .iter()
            .enumerate()
            .filter(move |(_, &g)| g == group)
            .map(|(c, _)| c)
    }

    pub fn counts(&self, subset: SubsetIndex) -> Vec<usize> {
        let mut n = vec![0; self.num_groups()];
        for c in subset.iter() {
            n[self.group_of[c]] += 1;
        }
        n
    }

    /// Per-column rate tuple for the given group rates.
    pub fn expand(&self, group_rates: &[T]) -> Vec<T> {
        self.group_of.iter().map(|&g| group_rates[g]).collect()
    }

    pub fn objective(&self, group_rates: &[T]) -> T {
        self.weights.iter().zip(group_rates).map(|(&w, &r)| w * r).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupedRateSolution<T> {
    pub objective: T,
    pub group_rates: Vec<T>,
    /// Representative subsets whose constraint is tight at the solution.
    pub binding_subsets: Vec<SubsetIndex>,
}

/// Column permutations under which both the MAC set function and the
/// grouping are invariant.
///
/// When `f` is invariant under a permutation group that maps every group onto
/// itself, the minimal minimizer of the submodular `f(S) − Σ_{i∈S} R_i` is a
/// union of orbits, so constraints on orbit unions alone describe the same
/// tied-rate region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSymmetry {
    num_columns: usize,
    generators: Vec<Vec<usize>>,
}

impl ColumnSymmetry {
    pub fn new(num_columns: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        for g in &generators {
            let mut seen = vec![false; num_columns];
            if g.len() != num_columns {
                return Err(Error::InvalidGrouping(format!(
                    "permutation of length {} for {num_columns} columns",
                    g.len()
                )));
            }
            for &i in g {
                if i >= num_columns || seen[i] {
                    return Err(Error::InvalidGrouping("generator is not a permutation".into()));
                }
                seen[i] = true;
            }
        }
        Ok(Self {
            num_columns,
            generators,
        })
    }

    pub fn trivial(num_columns: usize) -> Self {
        Self {
            num_columns,
            generators: Vec::new(),
        }
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn apply(&self, generator: usize, subset: SubsetIndex) -> SubsetIndex {
        SubsetIndex::from_indices(subset.iter().map(|i| self.generators[generator][i]))
    }

    /// Orbits of the generated group, ordered by smallest member.
    pub fn orbits(&self) -> Vec<SubsetIndex> {
        let n = self.num_columns;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for g in &self.generators {
            for (i, &j) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut by_root: BTreeMap<usize, SubsetIndex> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let e = by_root.entry(r).or_default();
            *e = e.insert(i);
        }
        by_root.into_values().collect()
    }

    pub fn respects<T: Scalar>(&self, grouping: &RateGrouping<T>) -> bool {
        self.generators.iter().all(|g| {
            g.iter()
                .enumerate()
                .all(|(i, &j)| grouping.group_of(i) == grouping.group_of(j))
        })
    }
}

struct AggregatedConstraint<T> {
    counts: Vec<usize>,
    bound: T,
    subset: SubsetIndex,
}

fn aggregate<T: Scalar>(
    mac: &GaussianMac<T>,
    grouping: &RateGrouping<T>,
    subsets: impl Iterator<Item = SubsetIndex>,
) -> Vec<AggregatedConstraint<T>> {
    let mut best: BTreeMap<Vec<usize>, (T, SubsetIndex)> = BTreeMap::new();
    for s in subsets {
        let f = mac.subset_rate(s);
        let counts = grouping.counts(s);
        match best.get_mut(&counts) {
            Some(entry) if f < entry.0 => *entry = (f, s),
            Some(_) => {}
            None => {
                best.insert(counts, (f, s));
            }
        }
    }
    best.into_iter()
        .map(|(counts, (bound, subset))| AggregatedConstraint { counts, bound, subset })
        .collect()
}

fn solve_aggregated<T: Scalar>(
    grouping: &RateGrouping<T>,
    constraints: &[AggregatedConstraint<T>],
) -> Result<GroupedRateSolution<T>> {
    let g = grouping.num_groups();
    let mut lp = DenseLp::new(g);
    for c in constraints {
        let row = c.counts.iter().map(|&n| T::from_usize_lossy(n)).collect();
        lp.add_le(row, c.bound.max(T::zero()));
    }
    // Primary objective, then lexicographically largest group-rate vector.
    let mut objectives = vec![grouping.weights().to_vec()];
    for k in 0..g {
        let mut e = vec![T::zero(); g];
        e[k] = T::one();
        objectives.push(e);
    }
    let sol = lp.solve_lexicographic(&objectives)?;
    let group_rates = sol.x;

    let tol = T::lit(BINDING_TOL);
    let mut binding_subsets = Vec::new();
    for c in constraints {
        let lhs: T = c
            .counts
            .iter()
            .zip(&group_rates)
            .map(|(&n, &r)| T::from_usize_lossy(n) * r)
            .sum();
        if lhs > c.bound + tol * T::lit(10.0) {
            return Err(Error::Solver(format!(
                "constraint on {:?} violated: {lhs} > {}",
                c.subset, c.bound
            )));
        }
        if (lhs - c.bound).abs() <= tol {
            binding_subsets.push(c.subset);
        }
    }
    Ok(GroupedRateSolution {
        objective: grouping.objective(&group_rates),
        group_rates,
        binding_subsets,
    })
}

fn check_shapes<T: Scalar>(mac: &GaussianMac<T>, grouping: &RateGrouping<T>) -> Result<()> {
    if grouping.num_columns() != mac.num_inputs() {
        return Err(Error::InvalidGrouping(format!(
            "grouping covers {} columns, MAC has {}",
            grouping.num_columns(),
            mac.num_inputs()
        )));
    }
    Ok(())
}

/// `max Σ_g w_g R_g` over the tied-rate polymatroid, enumerating every subset.
///
/// Among optimal solutions, returns the lexicographically largest group-rate
/// vector (by group id).
pub fn max_grouped_rate<T: Scalar>(mac: &GaussianMac<T>, grouping: &RateGrouping<T>) -> Result<GroupedRateSolution<T>> {
    check_shapes(mac, grouping)?;
    let n = mac.num_inputs();
    check_enumerable(n)?;
    let constraints = aggregate(mac, grouping, (1..1u64 << n).map(SubsetIndex::from_mask));
    solve_aggregated(grouping, &constraints)
}

/// Same optimum as [`max_grouped_rate`], but only unions of symmetry orbits
/// are enumerated. Allows MACs with more than 20 columns when they have few
/// orbits.
pub fn max_grouped_rate_symmetric<T: Scalar>(
    mac: &GaussianMac<T>,
    grouping: &RateGrouping<T>,
    symmetry: &ColumnSymmetry,
) -> Result<GroupedRateSolution<T>> {
    check_shapes(mac, grouping)?;
    if symmetry.num_columns() != mac.num_inputs() {
        return Err(Error::InvalidGrouping(format!(
            "symmetry acts on {} columns, MAC has {}",
            symmetry.num_columns(),
            mac.num_inputs()
        )));
    }
    if !symmetry.respects(grouping) {
        return Err(Error::InvalidGrouping("symmetry mixes rate groups".into()));
    }
    let orbits = symmetry.orbits();
    check_enumerable(orbits.len())?;
    let unions = (1..1u64 << orbits.len()).map(|m| {
        orbits
            .iter()
            .enumerate()
            .filter(|(k, _)| m >> k & 1 == 1)
            .fold(SubsetIndex::EMPTY, |acc, (_, o)| acc.union(*o))
    });
    let constraints = aggregate(mac, grouping, unions);
    solve_aggregated(grouping, &constraints)
}

/// Independent oracle for [`max_grouped_rate`] with at most three groups.
///
/// Every group rate except the last is scanned on a grid of spacing
/// `grid_step` over `[0, min singleton bound]`; the last is set to its largest
/// feasible value given the others (the feasible set is down-closed, so this
/// is a line search). For three groups the objective is concave along the
/// second coordinate, which lets the second scan skip non-maximal grid points.
/// The result is never below the LP optimum minus `(Σ w_g)·grid_step`.
pub fn brute_force_grouped_rate<T: Scalar>(
    mac: &GaussianMac<T>,
    grouping: &RateGrouping<T>,
    grid_step: T,
) -> Result<Rate<T>> {
    check_shapes(mac, grouping)?;
    let g = grouping.num_groups();
    if g > 3 {
        return Err(Error::Size {
            what: "brute-force groups",
            got: g,
            limit: 3,
        });
    }
    if !(grid_step > T::zero()) {
        return Err(Error::Domain(format!("grid step must be > 0, got {grid_step}")));
    }
    let n = mac.num_inputs();
    check_enumerable(n)?;

    let table: Vec<(Vec<T>, T)> = (1..1u64 << n)
        .map(|m| {
            let s = SubsetIndex::from_mask(m);
            let counts = grouping.counts(s).into_iter().map(T::from_usize_lossy).collect();
            (counts, mac.subset_rate(s))
        })
        .collect();
    let upper: Vec<T> = (0..g)
        .map(|k| {
            grouping
                .columns_of(k)
                .map(|c| mac.subset_rate(SubsetIndex::from_indices([c])))
                .fold(T::infinity(), T::min)
        })
        .collect();
    let w = grouping.weights();
    let last = g - 1;
    let tol = T::lit(1e-12);

    // Largest feasible last-group rate given the leading ones, if any.
    let max_last = |lead: &[T]| -> Option<T> {
        let mut best = upper[last];
        for (counts, f) in &table {
            let used: T = lead.iter().zip(counts).map(|(&r, &c)| r * c).sum();
            let slack = *f - used;
            if counts[last] == T::zero() {
                if slack < -tol {
                    return None;
                }
            } else {
                best = best.min(slack / counts[last]);
            }
        }
        (best >= -tol).then(|| best.max(T::zero()))
    };
    let steps = |k: usize| (upper[k] / grid_step).floor().to_usize().unwrap_or(0);
    let at = |j: usize| grid_step * T::from_usize_lossy(j);

    let mut best_val = T::neg_infinity();
    let mut best_point: Vec<T> = Vec::new();
    let mut consider = |lead: Vec<T>| {
        if let Some(r) = max_last(&lead) {
            let mut point = lead;
            point.push(r);
            let val = grouping.objective(&point);
            if val > best_val {
                best_val = val;
                best_point = point;
            }
        }
    };

    match g {
        1 => consider(Vec::new()),
        2 => {
            for j in 0..=steps(0) {
                consider(vec![at(j)]);
            }
        }
        _ => {
            for j0 in 0..=steps(0) {
                let r0 = at(j0);
                if max_last(&[r0, T::zero()]).is_none() {
                    continue;
                }
                // Feasible second-coordinate indices form a prefix [0, hi].
                let (mut lo, mut hi) = (0usize, steps(1));
                while lo < hi {
                    let mid = (lo + hi).div_ceil(2);
                    if max_last(&[r0, at(mid)]).is_some() {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                let phi = |j: usize| {
                    let r1 = at(j);
                    w[1] * r1 + w[2] * max_last(&[r0, r1]).unwrap_or(T::neg_infinity())
                };
                let (mut a, mut b) = (0usize, lo);
                while b - a > 2 {
                    let m1 = a + (b - a) / 3;
                    let m2 = b - (b - a) / 3;
                    let (f1, f2) = (phi(m1), phi(m2));
                    if f1 < f2 {
                        a = m1 + 1;
                    } else if f1 > f2 {
                        b = m2 - 1;
                    } else {
                        a = m1;
                        b = m2;
                    }
                }
                for j1 in a..=b {
                    consider(vec![r0, at(j1)]);
                }
            }
        }
    }

    if best_point.is_empty() {
        return Err(Error::Solver("no feasible grid point (origin excluded?)".into()));
    }
    if !mac_region_contains(mac, &grouping.expand(&best_point), T::lit(1e-9))? {
        return Err(Error::Solver(format!("grid optimum {best_point:?} outside the region")));
    }
    Rate::clamped(best_val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn symmetric_pair() -> GaussianMac<f64> {
        GaussianMac::<f64>::new(Matrix::identity(2), 1.0, Matrix::identity(2)).unwrap()
    }

    #[test]
    fn grouping_validation() {
        assert!(RateGrouping::<f64>::new(vec![0, 1], vec![1.0]).is_err());
        assert!(RateGrouping::<f64>::new(vec![0, 0], vec![1.0, 1.0]).is_err());
        assert!(RateGrouping::<f64>::new(vec![0, 1], vec![0.0, 0.0]).is_err());
        assert!(RateGrouping::<f64>::new(vec![0, 1], vec![-1.0, 2.0]).is_err());
        assert!(RateGrouping::<f64>::from_groups(3, &[&[0, 1]], vec![1.0]).is_err());
        assert!(RateGrouping::<f64>::from_groups(2, &[&[0, 1], &[1]], vec![1.0, 1.0]).is_err());
        let g = RateGrouping::<f64>::from_groups(3, &[&[0, 2], &[1]], vec![1.0, 2.0]).unwrap();
        assert_eq!(g.multiplicity(), &[2, 1]);
        assert_eq!(g.counts(SubsetIndex::from_indices([0, 1, 2])), vec![2, 1]);
    }

    #[test]
    fn symmetric_two_user_mac() {
        let mac = symmetric_pair();
        let grouping = RateGrouping::new(vec![0, 0], vec![1.0]).unwrap();
        let sol = max_grouped_rate(&mac, &grouping).unwrap();
        assert!((sol.group_rates[0] - 0.5).abs() < 1e-12);
        assert!((sol.objective - 0.5).abs() < 1e-12);
        // Both the pair constraint and the singleton bound are tight.
        assert!(sol.binding_subsets.contains(&SubsetIndex::from_indices([0])));
        assert!(sol.binding_subsets.contains(&SubsetIndex::from_indices([0, 1])));

        let bf = brute_force_grouped_rate(&mac, &grouping, 1e-3).unwrap().value();
        assert!((bf - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn zero_weight_group_takes_leftover_rate() {
        let mac = symmetric_pair();
        let grouping = RateGrouping::new(vec![0, 1], vec![1.0, 0.0]).unwrap();
        let sol = max_grouped_rate(&mac, &grouping).unwrap();
        assert!((sol.objective - 0.5).abs() < 1e-12);
        assert!((sol.group_rates[0] - 0.5).abs() < 1e-12);
        assert!((sol.group_rates[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_power_mac() {
        let mac = GaussianMac::<f64>::new(Matrix::identity(2), 0.0, Matrix::identity(2)).unwrap();
        let grouping = RateGrouping::new(vec![0, 1], vec![1.0, 1.0]).unwrap();
        assert_eq!(brute_force_grouped_rate(&mac, &grouping, 1e-3).unwrap().value(), 0.0);
        assert_eq!(max_grouped_rate(&mac, &grouping).unwrap().objective, 0.0);
    }

    #[test]
    fn brute_force_guards() {
        let mac = GaussianMac::<f64>::new(Matrix::identity(4), 1.0, Matrix::identity(4)).unwrap();
        let grouping = RateGrouping::new(vec![0, 1, 2, 3], vec![1.0; 4]).unwrap();
        assert!(matches!(
            brute_force_grouped_rate(&mac, &grouping, 1e-2),
            Err(Error::Size { .. })
        ));
        let grouping = RateGrouping::new(vec![0, 1, 2, 2], vec![1.0; 3]).unwrap();
        assert!(brute_force_grouped_rate(&mac, &grouping, 0.0).is_err());
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> (GaussianMac<f64>, RateGrouping<f64>) {
        let n_t = rng.gen_range(2..=5);
        let n_r = rng.gen_range(1..=3);
        let h = Matrix::from_fn(n_r, n_t, |_, _| rng.gen_range(-1.0..1.0));
        let mac = GaussianMac::new(h, rng.gen_range(0.5..10.0), Matrix::identity(n_r)).unwrap();
        let groups = rng.gen_range(1..=3.min(n_t));
        let mut group_of: Vec<usize> = (0..n_t)
            .map(|i| if i < groups { i } else { rng.gen_range(0..groups) })
            .collect();
        // Shuffle deterministically.
        for i in (1..n_t).rev() {
            let j = rng.gen_range(0..=i);
            group_of.swap(i, j);
        }
        let mut weights: Vec<f64> = (0..groups).map(|_| rng.gen_range(0.0..1.0)).collect();
        weights[0] += 0.1;
        (mac, RateGrouping::new(group_of, weights).unwrap())
    }

    #[test]
    fn lp_agrees_with_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (mac, grouping) = random_instance(&mut rng);
            let lp = max_grouped_rate(&mac, &grouping).unwrap();
            assert!(mac_region_contains(&mac, &grouping.expand(&lp.group_rates), 1e-7).unwrap());
            let step = 1e-3;
            let bf = brute_force_grouped_rate(&mac, &grouping, step).unwrap().value();
            let wsum: f64 = grouping.weights().iter().sum();
            assert!(bf <= lp.objective + 1e-9, "oracle above LP: {bf} > {}", lp.objective);
            assert!(bf >= lp.objective - wsum * step - 1e-12);
        }
    }

    #[test]
    fn lp_never_exceeds_sum_capacity() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let (mac, grouping) = random_instance(&mut rng);
            let sol = max_grouped_rate(&mac, &grouping).unwrap();
            let used: f64 = grouping
                .multiplicity()
                .iter()
                .zip(&sol.group_rates)
                .map(|(&m, &r)| m as f64 * r)
                .sum();
            assert!(used <= mac.sum_rate() + 1e-9);
            let recomputed = grouping.objective(&sol.group_rates);
            assert!((recomputed - sol.objective).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplicity_weights_reach_sum_capacity_on_symmetric_mac() {
        // Exchangeable columns: a tied point lies on the dominant face.
        let h = Matrix::<f64>::from_rows(&[[1.0, 1.0, 0.7], [0.3, 0.3, 1.0]]).unwrap();
        let mac = GaussianMac::new(h, 4.0, Matrix::identity(2)).unwrap();
        let grouping = RateGrouping::new(vec![0, 0, 1], vec![2.0, 1.0]).unwrap();
        let sol = max_grouped_rate(&mac, &grouping).unwrap();
        assert!((sol.objective - mac.sum_rate()).abs() < 1e-9);
    }

    #[test]
    fn column_permutation_within_groups_is_harmless() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (mac, grouping) = random_instance(&mut rng);
            let n = mac.num_inputs();
            let perm: Vec<usize> = (0..n).rev().collect();
            let h = mac.channel();
            let hp = Matrix::from_fn(h.rows(), n, |i, j| h[(i, perm[j])]);
            let macp = GaussianMac::new(hp, mac.power(), mac.noise_cov().clone()).unwrap();
            let gp = RateGrouping::new(
                perm.iter().map(|&j| grouping.group_of(j)).collect(),
                grouping.weights().to_vec(),
            )
            .unwrap();
            let a = max_grouped_rate(&mac, &grouping).unwrap().objective;
            let b = max_grouped_rate(&macp, &gp).unwrap().objective;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_rescaling_leaves_solution_fixed() {
        // f(S) is invariant under H → cH, K → c²K.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let (mac, grouping) = random_instance(&mut rng);
            let c = rng.gen_range(0.3..3.0);
            let scaled = GaussianMac::new(mac.channel().scale(c), mac.power(), mac.noise_cov().scale(c * c)).unwrap();
            let a = max_grouped_rate(&mac, &grouping).unwrap();
            let b = max_grouped_rate(&scaled, &grouping).unwrap();
            assert!((a.objective - b.objective).abs() < 1e-9);
            for (x, y) in a.group_rates.iter().zip(&b.group_rates) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn orbit_reduction_matches_full_enumeration() {
        // Mirror-symmetric 3x5 MAC: columns (0,4) and (1,3) swap, 2 is fixed.
        let h = Matrix::<f64>::from_rows(&[
            [0.8, 1.0, 0.4, 0.0, 0.0],
            [0.3, 0.5, 1.0, 0.5, 0.3],
            [0.0, 0.0, 0.4, 1.0, 0.8],
        ])
        .unwrap();
        let mac = GaussianMac::new(h, 6.0, Matrix::identity(3)).unwrap();
        let grouping = RateGrouping::from_groups(5, &[&[0, 4], &[1, 3], &[2]], vec![1.0, 2.0, 1.0]).unwrap();
        let sym = ColumnSymmetry::new(5, vec![vec![4, 3, 2, 1, 0]]).unwrap();
        assert_eq!(sym.orbits().len(), 3);
        let full = max_grouped_rate(&mac, &grouping).unwrap();
        let red = max_grouped_rate_symmetric(&mac, &grouping, &sym).unwrap();
        assert!((full.objective - red.objective).abs() < 1e-12);
        for (a, b) in full.group_rates.iter().zip(&red.group_rates) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetry_must_respect_groups() {
        let mac = symmetric_pair();
        let grouping = RateGrouping::new(vec![0, 1], vec![1.0, 1.0]).unwrap();
        let sym = ColumnSymmetry::new(2, vec![vec![1, 0]]).unwrap();
        assert!(max_grouped_rate_symmetric(&mac, &grouping, &sym).is_err());
        assert!(ColumnSymmetry::new(2, vec![vec![0, 0]]).is_err());
    }
}
