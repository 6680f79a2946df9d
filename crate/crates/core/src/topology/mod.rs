//! Cell-array models and the channel matrices each scheme decodes over.
//!
//! Every builder describes a scheme as a list of receive antennas (cells) and
//! three lists of transmitted signal parts: decoded, treated as noise inside
//! the cluster, and treated as noise from outside it. Each part is a cell with
//! a power fraction; its entry at a receiver is the path gain (1 for the own
//! cell, α for an adjacent one) times the square root of that fraction.

mod builders;
mod hex;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::info::GaussianMac;
use crate::linalg::Matrix;
use crate::polymatroid::{ColumnSymmetry, RateGrouping};
use crate::scalar::Scalar;

pub use builders::{
    build_hk_single_cell, build_nonoverlap, build_nonoverlap_naive, build_overlap_full, build_overlap_scheduled_late,
    build_overlap_scheduled_phase1, build_overlap_simplified, LatePhase,
};
pub use hex::{Hex, HEX_DIRECTIONS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Line1D,
    Hex2D,
}

impl Dimension {
    /// Number of adjacent cells.
    pub fn neighbors(self) -> usize {
        match self {
            Dimension::Line1D => 2,
            Dimension::Hex2D => 6,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Line1D => "1d",
            Dimension::Hex2D => "2d",
        })
    }
}

/// Infinite Wyner array: unit own-cell gain, gain `alpha` to each adjacent
/// cell, per-cell power `power` over unit-variance noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellArrayModel<T> {
    dimension: Dimension,
    alpha: T,
    power: T,
}

impl<T: Scalar> CellArrayModel<T> {
    pub fn new(dimension: Dimension, alpha: T, power: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&alpha) {
            return Err(Error::InvalidModel(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if !(power > T::zero()) || !power.is_finite() {
            return Err(Error::InvalidModel(format!(
                "power must be positive and finite, got {power}"
            )));
        }
        Ok(Self {
            dimension,
            alpha,
            power,
        })
    }

    /// Model with the power given as an SNR in dB.
    pub fn from_snr_db(dimension: Dimension, alpha: T, snr_db: T) -> Result<Self> {
        Self::new(dimension, alpha, T::lit(10.0).powf(snr_db / T::lit(10.0)))
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn power(&self) -> T {
        self.power
    }
}

/// A cell position on either lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Line(i32),
    Hex(Hex),
}

impl Site {
    pub fn distance(self, other: Site) -> Option<u32> {
        match (self, other) {
            (Site::Line(a), Site::Line(b)) => Some(a.abs_diff(b)),
            (Site::Hex(a), Site::Hex(b)) => Some(a.distance(b)),
            _ => None,
        }
    }

    /// Path gain from a transmitter at `self` to the receiver at `rx`.
    pub fn gain<T: Scalar>(self, rx: Site, alpha: T) -> T {
        match self.distance(rx) {
            Some(0) => T::one(),
            Some(1) => alpha,
            _ => T::zero(),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Line(i) => write!(f, "{i}"),
            Site::Hex(h) => write!(f, "{h}"),
        }
    }
}

/// Which piece of a cell's signal a column carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Full,
    Decode,
    Undecode,
    SelfPart,
    Intra,
    Inter,
}

impl Part {
    pub fn tag(self) -> &'static str {
        match self {
            Part::Full => "",
            Part::Decode => "d",
            Part::Undecode => "ud",
            Part::SelfPart => "self",
            Part::Intra => "intra",
            Part::Inter => "inter",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColumnLabel {
    pub site: Site,
    pub part: Part,
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.part {
            Part::Full => write!(f, "x[{}]", self.site),
            p => write!(f, "x[{}]^{}", self.site, p.tag()),
        }
    }
}

/// Channel matrices of one scheme, with the rate grouping of the decoded
/// columns.
#[derive(Clone, Debug)]
pub struct SchemeMatrices<T> {
    pub h_d: Matrix<T>,
    pub h_ud: Matrix<T>,
    pub h_inter: Matrix<T>,
    pub grouping: RateGrouping<T>,
    /// One label per column of `[h_d | h_ud | h_inter]`.
    pub labels: Vec<ColumnLabel>,
    /// Receiver cell of each row.
    pub rows: Vec<Site>,
    /// Number of cells whose rates the grouping objective accounts for.
    pub cluster_size: usize,
    /// Permutations of the decoded columns induced by lattice symmetries of
    /// the cluster; they leave the MAC rate function and the grouping intact.
    pub symmetry: ColumnSymmetry,
}

impl<T: Scalar> SchemeMatrices<T> {
    /// `I + P (H_ud H_udᵀ + H_inter H_interᵀ)`.
    pub fn noise_cov(&self, power: T) -> Result<Matrix<T>> {
        let n = self.rows.len();
        let mut k = Matrix::identity(n);
        for block in [&self.h_ud, &self.h_inter] {
            if block.cols() > 0 {
                k = k.add(&block.outer_gram().scale(power))?;
            }
        }
        Ok(k)
    }

    pub fn mac(&self, power: T) -> Result<GaussianMac<T>> {
        GaussianMac::with_interference(self.h_d.clone(), power, &[&self.h_ud, &self.h_inter])
    }

    pub fn decoded_labels(&self) -> &[ColumnLabel] {
        &self.labels[..self.h_d.cols()]
    }
}

#[derive(Clone, Copy, Debug)]
struct Column<T> {
    site: Site,
    part: Part,
    fraction: T,
}

/// Declarative description of a scheme, turned into matrices by `assemble`.
struct Layout<T> {
    rows: Vec<Site>,
    decoded: Vec<(Column<T>, usize)>,
    undecoded: Vec<Column<T>>,
    inter: Vec<Column<T>>,
    weights: Vec<T>,
    cluster_size: usize,
    /// Isometries of the lattice fixing the cluster.
    site_maps: Vec<Box<dyn Fn(Site) -> Site>>,
}

impl<T: Scalar> Layout<T> {
    fn new(rows: Vec<Site>, weights: Vec<T>, cluster_size: usize) -> Self {
        Self {
            rows,
            decoded: Vec::new(),
            undecoded: Vec::new(),
            inter: Vec::new(),
            weights,
            cluster_size,
            site_maps: Vec::new(),
        }
    }

    fn decode(&mut self, site: Site, part: Part, fraction: T, group: usize) {
        self.decoded.push((Column { site, part, fraction }, group));
    }

    fn undecode(&mut self, site: Site, part: Part, fraction: T) {
        self.undecoded.push(Column { site, part, fraction });
    }

    fn interfere(&mut self, site: Site, part: Part, fraction: T) {
        self.inter.push(Column { site, part, fraction });
    }

    fn symmetric_under(&mut self, map: impl Fn(Site) -> Site + 'static) {
        self.site_maps.push(Box::new(map));
    }

    fn matrix(&self, cols: &[Column<T>], alpha: T) -> Matrix<T> {
        Matrix::from_fn(self.rows.len(), cols.len(), |i, j| {
            cols[j].site.gain(self.rows[i], alpha) * cols[j].fraction.sqrt()
        })
    }

    fn assemble(self, alpha: T) -> Result<SchemeMatrices<T>> {
        let decoded: Vec<Column<T>> = self.decoded.iter().map(|(c, _)| *c).collect();
        let group_of: Vec<usize> = self.decoded.iter().map(|(_, g)| *g).collect();
        let grouping = RateGrouping::new(group_of, self.weights.clone())?;

        let mut generators = Vec::with_capacity(self.site_maps.len());
        for map in &self.site_maps {
            let mut rows: Vec<Site> = self.rows.iter().map(|&s| map(s)).collect();
            let mut orig = self.rows.clone();
            rows.sort();
            orig.sort();
            if rows != orig {
                return Err(Error::InvalidModel(
                    "symmetry does not preserve the receive cells".into(),
                ));
            }
            for cols in [&self.undecoded, &self.inter] {
                let index = column_index(cols);
                for c in cols.iter() {
                    let image = index.get(&(map(c.site), c.part)).map(|&k| cols[k].fraction);
                    if image != Some(c.fraction) {
                        return Err(Error::InvalidModel(format!(
                            "symmetry does not preserve the noise column x[{}]^{}",
                            c.site,
                            c.part.tag()
                        )));
                    }
                }
            }
            let index = column_index(&decoded);
            let mut perm = Vec::with_capacity(decoded.len());
            for c in &decoded {
                match index.get(&(map(c.site), c.part)) {
                    Some(&k) if decoded[k].fraction == c.fraction => perm.push(k),
                    _ => {
                        return Err(Error::InvalidModel(format!(
                            "symmetry does not preserve the decoded column x[{}]^{}",
                            c.site,
                            c.part.tag()
                        )))
                    }
                }
            }
            generators.push(perm);
        }
        let symmetry = ColumnSymmetry::new(decoded.len(), generators)?;
        if !symmetry.respects(&grouping) {
            return Err(Error::InvalidModel("symmetry mixes rate groups".into()));
        }

        let labels = decoded
            .iter()
            .chain(&self.undecoded)
            .chain(&self.inter)
            .map(|c| ColumnLabel {
                site: c.site,
                part: c.part,
            })
            .collect();
        Ok(SchemeMatrices {
            h_d: self.matrix(&decoded, alpha),
            h_ud: self.matrix(&self.undecoded, alpha),
            h_inter: self.matrix(&self.inter, alpha),
            grouping,
            labels,
            rows: self.rows,
            cluster_size: self.cluster_size,
            symmetry,
        })
    }
}

fn column_index<T>(cols: &[Column<T>]) -> HashMap<(Site, Part), usize> {
    cols.iter().enumerate().map(|(k, c)| ((c.site, c.part), k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_validation() {
        assert!(CellArrayModel::new(Dimension::Line1D, 0.5, 10.0).is_ok());
        assert!(CellArrayModel::new(Dimension::Line1D, 1.5, 10.0).is_err());
        assert!(CellArrayModel::new(Dimension::Hex2D, -0.1, 10.0).is_err());
        assert!(CellArrayModel::new(Dimension::Hex2D, 0.5, 0.0).is_err());
        assert!(CellArrayModel::new(Dimension::Hex2D, 0.5, f64::INFINITY).is_err());
        let m = CellArrayModel::<f64>::from_snr_db(Dimension::Line1D, 0.5, 10.0).unwrap();
        assert!((m.power() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn gains() {
        let a = 0.3;
        assert_eq!(Site::Line(2).gain(Site::Line(2), a), 1.0);
        assert_eq!(Site::Line(2).gain(Site::Line(3), a), a);
        assert_eq!(Site::Line(2).gain(Site::Line(4), a), 0.0);
        assert_eq!(Site::Hex(Hex::ORIGIN).gain(Site::Hex(Hex::new(1, -1)), a), a);
        assert_eq!(Site::Hex(Hex::ORIGIN).gain(Site::Hex(Hex::new(1, 1)), a), 0.0);
        assert_eq!(Site::Hex(Hex::ORIGIN).gain(Site::Line(0), a), 0.0);
    }

    #[test]
    fn label_display() {
        let l = ColumnLabel {
            site: Site::Line(-1),
            part: Part::Undecode,
        };
        assert_eq!(l.to_string(), "x[-1]^ud");
        let l = ColumnLabel {
            site: Site::Hex(Hex::new(1, -1)),
            part: Part::Full,
        };
        assert_eq!(l.to_string(), "x[(1,-1)]");
    }
}
