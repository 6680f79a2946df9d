//! Per-cell achievable rates of every collaboration scheme, each optimized
//! over its power split.

mod closed_form;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::info::{Rate, SubsetIndex};
use crate::optimize::{maximize_scalar, maximize_simplex, maximize_simplex_product, PowerSplit};
use crate::polymatroid::{max_grouped_rate_symmetric, GroupedRateSolution};
use crate::scalar::Scalar;
use crate::topology::{
    build_hk_single_cell, build_nonoverlap, build_nonoverlap_naive, build_overlap_full, build_overlap_scheduled_late,
    build_overlap_scheduled_phase1, build_overlap_simplified, CellArrayModel, Dimension, LatePhase, SchemeMatrices,
};

pub use closed_form::{
    hk_closed_form_objective, hk_region_constraints, multilayer_layer_rates, multilayer_objective, naive_rate,
    overlap_scheduled_phase2_closed_form, scheduled_digital_rate, time_sharing_rate, wyner_bound,
    wyner_bound_with_tolerance, HkConstraint, MAX_LAYERS, WYNER_TOLERANCE,
};

/// Resolution of the split searches over `λ ∈ [0, 1]`.
pub const LAMBDA_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Wyner,
    Naive,
    Hk,
    NonoverlapNaive,
    NonoverlapHk,
    OverlapSimplified,
    OverlapFull,
    TimeSharing,
    Scheduled,
    OverlapScheduled,
    Multilayer,
}

impl SchemeId {
    pub const ALL: [SchemeId; 11] = [
        SchemeId::Wyner,
        SchemeId::Naive,
        SchemeId::Hk,
        SchemeId::NonoverlapNaive,
        SchemeId::NonoverlapHk,
        SchemeId::OverlapSimplified,
        SchemeId::OverlapFull,
        SchemeId::TimeSharing,
        SchemeId::Scheduled,
        SchemeId::OverlapScheduled,
        SchemeId::Multilayer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Wyner => "wyner",
            SchemeId::Naive => "naive",
            SchemeId::Hk => "hk",
            SchemeId::NonoverlapNaive => "nonoverlap-naive",
            SchemeId::NonoverlapHk => "nonoverlap-hk",
            SchemeId::OverlapSimplified => "overlap-simplified",
            SchemeId::OverlapFull => "overlap-full",
            SchemeId::TimeSharing => "time-sharing",
            SchemeId::Scheduled => "scheduled",
            SchemeId::OverlapScheduled => "overlap-scheduled",
            SchemeId::Multilayer => "multilayer",
        }
    }

    pub fn supports(self, dimension: Dimension) -> bool {
        !(self == SchemeId::OverlapFull && dimension == Dimension::Hex2D)
    }

    /// Schemes defined for `dimension`, in catalog order.
    pub fn available(dimension: Dimension) -> impl Iterator<Item = SchemeId> {
        Self::ALL.into_iter().filter(move |s| s.supports(dimension))
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|id| id.name()).collect();
            Error::Domain(format!("unknown scheme '{s}' (expected one of: {})", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterMode {
    Naive,
    Hk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSplit<T> {
    pub name: &'static str,
    pub split: PowerSplit<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeResult<T> {
    pub scheme: SchemeId,
    pub model: CellArrayModel<T>,
    /// Per-cell rate, bits per channel use.
    pub rate: Rate<T>,
    /// Optimal power splits; empty for schemes without one.
    pub splits: Vec<NamedSplit<T>>,
    /// Achieving rates of the tied groups (and phase rates where relevant).
    pub group_rates: Vec<(String, T)>,
    /// Rate constraints tight at the optimum, as sets of column labels.
    pub binding: Vec<String>,
    pub notes: Vec<&'static str>,
}

impl<T: Scalar> SchemeResult<T> {
    fn plain(scheme: SchemeId, model: &CellArrayModel<T>, rate: Rate<T>) -> Self {
        Self {
            scheme,
            model: *model,
            rate,
            splits: Vec::new(),
            group_rates: Vec::new(),
            binding: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// `name=w1/w2/...` for each split, `;`-separated.
    pub fn split_summary(&self) -> String {
        self.splits
            .iter()
            .map(|s| {
                let w: Vec<String> = s.split.weights().iter().map(|x| format!("{x}")).collect();
                format!("{}={}", s.name, w.join("/"))
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Tuning of the split searches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    /// Layers per cell of the multilayer schedule.
    pub layers: usize,
    /// Lattice budget of the three-way split search (one LP per point).
    pub simplex_budget: usize,
    /// Lattice budget of the layer-allocation search (closed form per point).
    pub multilayer_budget: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            layers: 4,
            simplex_budget: 300,
            multilayer_budget: 20_000,
        }
    }
}

const NOTE_PHASE1: &str = "cells outside the first-phase cluster are never split, so they interfere at full power";
const NOTE_HEX_SCHEDULE: &str = "hexagonal schedule: three colors decoded in turn, per-cell average of the three";
const NOTE_MULTILAYER: &str =
    "interference terms carry the path gain α²; odd-cell numerators use the odd allocation; per-cell average objective";

fn solve<T: Scalar>(m: &SchemeMatrices<T>, power: T) -> Result<GroupedRateSolution<T>> {
    let mac = m.mac(power)?;
    max_grouped_rate_symmetric(&mac, &m.grouping, &m.symmetry)
}

fn describe<T: Scalar>(
    m: &SchemeMatrices<T>,
    sol: &GroupedRateSolution<T>,
    names: &[&str],
    group_rates: &mut Vec<(String, T)>,
    binding: &mut Vec<String>,
) {
    for (g, &r) in sol.group_rates.iter().enumerate() {
        group_rates.push((names.get(g).copied().unwrap_or("R").to_string(), r));
    }
    let labels = m.decoded_labels();
    for s in &sol.binding_subsets {
        binding.push(subset_string(*s, |i| labels[i].to_string()));
    }
}

fn subset_string(s: SubsetIndex, label: impl Fn(usize) -> String) -> String {
    let parts: Vec<String> = s.iter().map(label).collect();
    format!("{{{}}}", parts.join(","))
}

/// Per-cell objective of the two-way split schemes at a fixed `λ`.
pub fn lambda_objective<T: Scalar>(scheme: SchemeId, model: &CellArrayModel<T>, lambda: T) -> Result<T> {
    let p = model.power();
    match scheme {
        SchemeId::Hk => Ok(solve(&build_hk_single_cell(model, lambda)?, p)?.objective),
        SchemeId::NonoverlapHk => {
            let m = build_nonoverlap(model, lambda)?;
            Ok(solve(&m, p)?.objective / T::from_usize_lossy(m.cluster_size))
        }
        SchemeId::OverlapSimplified => Ok(solve(&build_overlap_simplified(model, lambda)?, p)?.objective),
        SchemeId::OverlapScheduled => {
            let (total, _) = overlap_scheduled_parts(model, lambda)?;
            Ok(total)
        }
        other => Err(Error::Unsupported(format!("{other} has no two-way split"))),
    }
}

/// Phase-one matrices and LP solution, plus the later-phase rates.
type ScheduledParts<T> = (SchemeMatrices<T>, GroupedRateSolution<T>, Vec<T>);

/// Phase-one LP and later-phase rates of overlap-scheduled decoding.
fn overlap_scheduled_parts<T: Scalar>(model: &CellArrayModel<T>, lambda: T) -> Result<(T, ScheduledParts<T>)> {
    let p = model.power();
    let first = build_overlap_scheduled_phase1(model, lambda)?;
    let sol = solve(&first, p)?;
    let phases: &[LatePhase] = match model.dimension() {
        Dimension::Line1D => &[LatePhase::B],
        Dimension::Hex2D => &[LatePhase::B, LatePhase::C],
    };
    let mut late = Vec::with_capacity(phases.len());
    for &ph in phases {
        let m = build_overlap_scheduled_late(model, lambda, ph)?;
        late.push(m.mac(p)?.subset_rate(SubsetIndex::from_indices([0])));
    }
    let total = late.iter().fold(sol.objective, |acc, &r| acc + r) / T::from_usize_lossy(first.cluster_size);
    Ok((total, (first, sol, late)))
}

fn maximize_lambda<T: Scalar>(scheme: SchemeId, model: &CellArrayModel<T>) -> Result<(T, T)> {
    let r = maximize_scalar(
        |l| lambda_objective(scheme, model, l),
        T::zero(),
        T::one(),
        T::lit(LAMBDA_TOLERANCE),
    )?;
    Ok((r.argmax, r.value))
}

fn lambda_split<T: Scalar>(lambda: T) -> Result<Vec<NamedSplit<T>>> {
    Ok(vec![NamedSplit {
        name: "lambda",
        split: PowerSplit::two_way(lambda)?,
    }])
}

/// Single-cell partial decoding: each cell decodes its own message and the
/// `d` parts of its neighbors, treating their `ud` parts as noise.
pub fn hk_single_cell_rate<T: Scalar>(model: &CellArrayModel<T>) -> Result<SchemeResult<T>> {
    let (lambda, value) = maximize_lambda(SchemeId::Hk, model)?;
    let m = build_hk_single_cell(model, lambda)?;
    let sol = solve(&m, model.power())?;
    let mut out = SchemeResult::plain(SchemeId::Hk, model, Rate::clamped(value)?);
    out.splits = lambda_split(lambda)?;
    describe(&m, &sol, &["R^ud", "R^d"], &mut out.group_rates, &mut out.binding);
    Ok(out)
}

/// Non-overlapping clusters, either treating everything outside as noise or
/// also decoding the `d` parts of the cells around the cluster.
pub fn nonoverlap_cluster_rate<T: Scalar>(model: &CellArrayModel<T>, mode: ClusterMode) -> Result<SchemeResult<T>> {
    match mode {
        ClusterMode::Naive => {
            let m = build_nonoverlap_naive(model)?;
            let mac = m.mac(model.power())?;
            let rate = mac.sum_rate() / T::from_usize_lossy(m.cluster_size);
            Ok(SchemeResult::plain(
                SchemeId::NonoverlapNaive,
                model,
                Rate::clamped(rate)?,
            ))
        }
        ClusterMode::Hk => {
            let (lambda, value) = maximize_lambda(SchemeId::NonoverlapHk, model)?;
            let m = build_nonoverlap(model, lambda)?;
            let sol = solve(&m, model.power())?;
            let mut out = SchemeResult::plain(SchemeId::NonoverlapHk, model, Rate::clamped(value)?);
            out.splits = lambda_split(lambda)?;
            describe(
                &m,
                &sol,
                &["R^d", "R^ud", "R_0"],
                &mut out.group_rates,
                &mut out.binding,
            );
            Ok(out)
        }
    }
}

/// Overlapped clusters, simplified: cells beyond the neighbors are noise.
pub fn overlap_simplified_rate<T: Scalar>(model: &CellArrayModel<T>) -> Result<SchemeResult<T>> {
    let (lambda, value) = maximize_lambda(SchemeId::OverlapSimplified, model)?;
    let m = build_overlap_simplified(model, lambda)?;
    let sol = solve(&m, model.power())?;
    let mut out = SchemeResult::plain(SchemeId::OverlapSimplified, model, Rate::clamped(value)?);
    out.splits = lambda_split(lambda)?;
    describe(&m, &sol, &["R^d", "R^ud"], &mut out.group_rates, &mut out.binding);
    Ok(out)
}

/// Objective of the three-way overlapped cluster at a fixed split
/// `(λ_self, λ_intra, λ_inter)`.
pub fn overlap_full_objective<T: Scalar>(model: &CellArrayModel<T>, split: &PowerSplit<T>) -> Result<T> {
    Ok(solve(&build_overlap_full(model, split)?, model.power())?.objective)
}

/// Overlapped clusters with three-way splitting; line only.
pub fn overlap_full_rate<T: Scalar>(model: &CellArrayModel<T>, opts: &EvalOptions) -> Result<SchemeResult<T>> {
    if model.dimension() != Dimension::Line1D {
        return Err(Error::Unsupported("overlap-full is only defined on the line".into()));
    }
    let r = maximize_simplex(|s| overlap_full_objective(model, s), 3, opts.simplex_budget)?;
    let m = build_overlap_full(model, &r.argmax)?;
    let sol = solve(&m, model.power())?;
    let mut out = SchemeResult::plain(SchemeId::OverlapFull, model, Rate::clamped(r.value)?);
    out.splits = vec![NamedSplit {
        name: "self/intra/inter",
        split: r.argmax,
    }];
    describe(
        &m,
        &sol,
        &["R^inter", "R^intra", "R^self"],
        &mut out.group_rates,
        &mut out.binding,
    );
    Ok(out)
}

/// Overlapped clusters combined with scheduled decoding: the first color
/// decodes its full message plus the neighbors' `d` parts from the cluster
/// antennas; later colors decode their `ud` parts after subtraction.
pub fn overlap_scheduled_rate<T: Scalar>(model: &CellArrayModel<T>) -> Result<SchemeResult<T>> {
    let (lambda, value) = maximize_lambda(SchemeId::OverlapScheduled, model)?;
    let (_, (first, sol, late)) = overlap_scheduled_parts(model, lambda)?;
    let mut out = SchemeResult::plain(SchemeId::OverlapScheduled, model, Rate::clamped(value)?);
    out.splits = lambda_split(lambda)?;
    let (names, late_names): (&[&str], &[&str]) = match model.dimension() {
        Dimension::Line1D => (&["R_odd^d", "R_even"], &["R_odd^ud"]),
        Dimension::Hex2D => (&["R^d", "R_A"], &["R_B^ud", "R_C^ud"]),
    };
    describe(&first, &sol, names, &mut out.group_rates, &mut out.binding);
    for (n, r) in late_names.iter().zip(late) {
        out.group_rates.push((n.to_string(), r));
    }
    out.notes.push(NOTE_PHASE1);
    if model.dimension() == Dimension::Hex2D {
        out.notes.push(NOTE_HEX_SCHEDULE);
    }
    Ok(out)
}

/// Multilayer scheduled decoding with `layers` superposed layers per cell.
pub fn multilayer_scheduled_rate<T: Scalar>(
    model: &CellArrayModel<T>,
    layers: usize,
    opts: &EvalOptions,
) -> Result<SchemeResult<T>> {
    closed_form::check_layers(layers)?;
    let colors: &[&'static str] = match model.dimension() {
        Dimension::Line1D => &["even", "odd"],
        Dimension::Hex2D => &["A", "B", "C"],
    };
    let dims = vec![layers; colors.len()];
    let r = maximize_simplex_product(|s| multilayer_objective(model, s), &dims, opts.multilayer_budget)?;
    let per_layer = multilayer_layer_rates(model, &r.argmax)?;
    let mut out = SchemeResult::plain(SchemeId::Multilayer, model, Rate::clamped(r.value)?);
    for (c, rates) in colors.iter().zip(&per_layer) {
        for (k, &v) in rates.iter().enumerate() {
            out.group_rates.push((format!("R_{c}^({})", k + 1), v));
        }
    }
    out.splits = colors
        .iter()
        .zip(r.argmax)
        .map(|(&name, split)| NamedSplit { name, split })
        .collect();
    out.notes.push(NOTE_MULTILAYER);
    if model.dimension() == Dimension::Hex2D {
        out.notes.push(NOTE_HEX_SCHEDULE);
    }
    Ok(out)
}

/// Evaluates one scheme of the catalog.
pub fn evaluate<T: Scalar>(scheme: SchemeId, model: &CellArrayModel<T>, opts: &EvalOptions) -> Result<SchemeResult<T>> {
    if !scheme.supports(model.dimension()) {
        return Err(Error::Unsupported(format!(
            "{scheme} is not defined for the {} array",
            model.dimension()
        )));
    }
    match scheme {
        SchemeId::Wyner => Ok(SchemeResult::plain(scheme, model, wyner_bound(model)?)),
        SchemeId::Naive => Ok(SchemeResult::plain(scheme, model, naive_rate(model))),
        SchemeId::Hk => hk_single_cell_rate(model),
        SchemeId::NonoverlapNaive => nonoverlap_cluster_rate(model, ClusterMode::Naive),
        SchemeId::NonoverlapHk => nonoverlap_cluster_rate(model, ClusterMode::Hk),
        SchemeId::OverlapSimplified => overlap_simplified_rate(model),
        SchemeId::OverlapFull => overlap_full_rate(model, opts),
        SchemeId::TimeSharing => Ok(SchemeResult::plain(scheme, model, time_sharing_rate(model))),
        SchemeId::Scheduled => Ok(SchemeResult::plain(scheme, model, scheduled_digital_rate(model))),
        SchemeId::OverlapScheduled => overlap_scheduled_rate(model),
        SchemeId::Multilayer => multilayer_scheduled_rate(model, opts.layers, opts),
    }
}
