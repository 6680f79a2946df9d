use crate::error::{Error, Result};
use crate::optimize::PowerSplit;
use crate::scalar::Scalar;

use super::{CellArrayModel, Dimension, Hex, Layout, Part, SchemeMatrices, Site};

use Part::{Decode as D, Full, Inter, Intra, SelfPart, Undecode as Ud};

/// Which of the late decoding phases of the overlap-scheduled scheme.
///
/// On the line only `B` exists (the odd cells); on the hexagonal lattice `B`
/// and `C` are the two colors decoded after the `A` cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatePhase {
    B,
    C,
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if !(T::zero()..=T::one()).contains(&lambda) {
        return Err(Error::Domain(format!("λ must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

fn line(i: i32) -> Site {
    Site::Line(i)
}

fn mirror(s: Site) -> Site {
    match s {
        Site::Line(i) => Site::Line(-i),
        other => other,
    }
}

fn hex_sites(cells: Vec<Hex>) -> Vec<Site> {
    cells.into_iter().map(Site::Hex).collect()
}

/// Adds the rotation and reflection of the hexagonal lattice about `c`.
fn hex_symmetries<T: Scalar>(layout: &mut Layout<T>, c: Hex) {
    layout.symmetric_under(move |s| match s {
        Site::Hex(h) => Site::Hex(h.rotate60(c)),
        other => other,
    });
    layout.symmetric_under(move |s| match s {
        Site::Hex(h) => Site::Hex(h.reflect(c)),
        other => other,
    });
}

/// Single-cell receiver decoding its own message plus the `d` parts of its
/// neighbors. Groups: `0 = R^ud` (own undecoded part), `1 = R^d`.
pub fn build_hk_single_cell<T: Scalar>(model: &CellArrayModel<T>, lambda: T) -> Result<SchemeMatrices<T>> {
    check_lambda(lambda)?;
    let (l, u) = (lambda, T::one() - lambda);
    let one = T::one();
    match model.dimension() {
        Dimension::Line1D => {
            let mut lay = Layout::new(vec![line(0)], vec![one, one], 1);
            lay.decode(line(-1), D, l, 1);
            lay.decode(line(0), D, l, 1);
            lay.decode(line(0), Ud, u, 0);
            lay.decode(line(1), D, l, 1);
            lay.undecode(line(-1), Ud, u);
            lay.undecode(line(1), Ud, u);
            lay.symmetric_under(mirror);
            lay.assemble(model.alpha())
        }
        Dimension::Hex2D => {
            let c = Hex::ORIGIN;
            let mut lay = Layout::new(vec![Site::Hex(c)], vec![one, one], 1);
            lay.decode(Site::Hex(c), D, l, 1);
            lay.decode(Site::Hex(c), Ud, u, 0);
            for n in hex_sites(c.ring(1)) {
                lay.decode(n, D, l, 1);
            }
            for n in hex_sites(c.ring(1)) {
                lay.undecode(n, Ud, u);
            }
            hex_symmetries(&mut lay, c);
            lay.assemble(model.alpha())
        }
    }
}

/// Non-overlapping cluster (cell triplet on the line, 7-cell flower on the
/// hexagonal lattice) decoding all cluster messages in full plus the `d`
/// parts of every cell adjacent to the cluster.
///
/// Groups: `0 = R^d`, `1 = R^ud`, `2 = R_0` (center), weighted by how many
/// cluster cells carry each rate.
pub fn build_nonoverlap<T: Scalar>(model: &CellArrayModel<T>, lambda: T) -> Result<SchemeMatrices<T>> {
    check_lambda(lambda)?;
    let (l, u) = (lambda, T::one() - lambda);
    let one = T::one();
    match model.dimension() {
        Dimension::Line1D => {
            let two = T::lit(2.0);
            let mut lay = Layout::new(vec![line(-1), line(0), line(1)], vec![two, two, one], 3);
            lay.decode(line(-2), D, l, 0);
            lay.decode(line(-1), D, l, 0);
            lay.decode(line(-1), Ud, u, 1);
            lay.decode(line(0), Full, one, 2);
            lay.decode(line(1), Ud, u, 1);
            lay.decode(line(1), D, l, 0);
            lay.decode(line(2), D, l, 0);
            lay.undecode(line(-2), Ud, u);
            lay.undecode(line(2), Ud, u);
            lay.symmetric_under(mirror);
            lay.assemble(model.alpha())
        }
        Dimension::Hex2D => {
            let c = Hex::ORIGIN;
            let six = T::lit(6.0);
            let mut lay = Layout::new(hex_sites(c.disk(1)), vec![six, six, one], 7);
            lay.decode(Site::Hex(c), Full, one, 2);
            for n in hex_sites(c.ring(1)) {
                lay.decode(n, D, l, 0);
            }
            for n in hex_sites(c.ring(1)) {
                lay.decode(n, Ud, u, 1);
            }
            for s in hex_sites(c.ring(2)) {
                lay.decode(s, D, l, 0);
            }
            for s in hex_sites(c.ring(2)) {
                lay.undecode(s, Ud, u);
            }
            hex_symmetries(&mut lay, c);
            lay.assemble(model.alpha())
        }
    }
}

/// Non-overlapping cluster that decodes only its own cells and treats every
/// outside cell as noise. One group per cluster cell, so the grouped optimum
/// is the sum capacity.
pub fn build_nonoverlap_naive<T: Scalar>(model: &CellArrayModel<T>) -> Result<SchemeMatrices<T>> {
    let one = T::one();
    let (cluster, shell) = match model.dimension() {
        Dimension::Line1D => (vec![line(-1), line(0), line(1)], vec![line(-2), line(2)]),
        Dimension::Hex2D => (hex_sites(Hex::ORIGIN.disk(1)), hex_sites(Hex::ORIGIN.ring(2))),
    };
    let mut lay = Layout::new(cluster.clone(), vec![one; cluster.len()], cluster.len());
    for (g, &s) in cluster.iter().enumerate() {
        lay.decode(s, Full, one, g);
    }
    for s in shell {
        lay.interfere(s, Full, one);
    }
    lay.assemble(model.alpha())
}

/// Overlapped cluster, simplified: each cell decodes its own message from its
/// own and its neighbors' antennas, together with the `d` parts of the
/// neighbors; cells outside the cluster are noise at full power.
///
/// Groups: `0 = R^d`, `1 = R^ud`.
pub fn build_overlap_simplified<T: Scalar>(model: &CellArrayModel<T>, lambda: T) -> Result<SchemeMatrices<T>> {
    check_lambda(lambda)?;
    let (l, u) = (lambda, T::one() - lambda);
    let one = T::one();
    match model.dimension() {
        Dimension::Line1D => {
            let mut lay = Layout::new(vec![line(-1), line(0), line(1)], vec![one, one], 1);
            lay.decode(line(-1), D, l, 0);
            lay.decode(line(0), D, l, 0);
            lay.decode(line(0), Ud, u, 1);
            lay.decode(line(1), D, l, 0);
            lay.undecode(line(-1), Ud, u);
            lay.undecode(line(1), Ud, u);
            lay.interfere(line(-2), Full, one);
            lay.interfere(line(2), Full, one);
            lay.symmetric_under(mirror);
            lay.assemble(model.alpha())
        }
        Dimension::Hex2D => {
            let c = Hex::ORIGIN;
            let mut lay = Layout::new(hex_sites(c.disk(1)), vec![one, one], 1);
            for n in hex_sites(c.ring(1)) {
                lay.decode(n, D, l, 0);
            }
            lay.decode(Site::Hex(c), D, l, 0);
            lay.decode(Site::Hex(c), Ud, u, 1);
            for n in hex_sites(c.ring(1)) {
                lay.undecode(n, Ud, u);
            }
            for s in hex_sites(c.ring(2)) {
                lay.interfere(s, Full, one);
            }
            hex_symmetries(&mut lay, c);
            lay.assemble(model.alpha())
        }
    }
}

/// Overlapped cluster with three-way splitting `(λ_self, λ_intra, λ_inter)`:
/// `inter` parts are decoded by every cluster they reach, `intra` parts by
/// the clusters of the cell and its neighbors, `self` parts only by the own
/// cluster. Line only.
///
/// Groups: `0 = R^inter`, `1 = R^intra`, `2 = R^self`.
pub fn build_overlap_full<T: Scalar>(model: &CellArrayModel<T>, split: &PowerSplit<T>) -> Result<SchemeMatrices<T>> {
    if model.dimension() != Dimension::Line1D {
        return Err(Error::Unsupported(
            "the three-way overlapped cluster is only defined on the line".into(),
        ));
    }
    if split.dim() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: split.dim(),
        });
    }
    let (ls, la, le) = (split.weight(0), split.weight(1), split.weight(2));
    let one = T::one();
    let mut lay = Layout::new(vec![line(-1), line(0), line(1)], vec![one, one, one], 1);
    lay.decode(line(-2), Inter, le, 0);
    lay.decode(line(-1), Inter, le, 0);
    lay.decode(line(-1), Intra, la, 1);
    lay.decode(line(0), Inter, le, 0);
    lay.decode(line(0), Intra, la, 1);
    lay.decode(line(0), SelfPart, ls, 2);
    lay.decode(line(1), Inter, le, 0);
    lay.decode(line(1), Intra, la, 1);
    lay.decode(line(2), Inter, le, 0);
    lay.undecode(line(-2), Intra, la);
    lay.undecode(line(-2), SelfPart, ls);
    lay.undecode(line(-1), SelfPart, ls);
    lay.undecode(line(1), SelfPart, ls);
    lay.undecode(line(2), Intra, la);
    lay.undecode(line(2), SelfPart, ls);
    lay.symmetric_under(mirror);
    lay.assemble(model.alpha())
}

/// First phase of overlap-scheduled decoding: a cell of the first color
/// decodes its unsplit message and the `d` parts of its neighbors from the
/// cluster antennas. Cells beyond the cluster transmit at full power.
///
/// Groups: `0 = R^d` (neighbors), `1 = R_A` (center). On the hexagonal
/// lattice two of three cells carry `R^d`, hence weights `(2, 1)`.
pub fn build_overlap_scheduled_phase1<T: Scalar>(model: &CellArrayModel<T>, lambda: T) -> Result<SchemeMatrices<T>> {
    check_lambda(lambda)?;
    let (l, u) = (lambda, T::one() - lambda);
    let one = T::one();
    match model.dimension() {
        Dimension::Line1D => {
            let mut lay = Layout::new(vec![line(-1), line(0), line(1)], vec![one, one], 2);
            lay.decode(line(-1), D, l, 0);
            lay.decode(line(0), Full, one, 1);
            lay.decode(line(1), D, l, 0);
            lay.undecode(line(-1), Ud, u);
            lay.undecode(line(1), Ud, u);
            lay.interfere(line(-2), Full, one);
            lay.interfere(line(2), Full, one);
            lay.symmetric_under(mirror);
            lay.assemble(model.alpha())
        }
        Dimension::Hex2D => {
            let c = Hex::ORIGIN;
            let mut lay = Layout::new(hex_sites(c.disk(1)), vec![T::lit(2.0), one], 3);
            lay.decode(Site::Hex(c), Full, one, 1);
            for n in hex_sites(c.ring(1)) {
                lay.decode(n, D, l, 0);
            }
            for n in hex_sites(c.ring(1)) {
                lay.undecode(n, Ud, u);
            }
            for s in hex_sites(c.ring(2)) {
                lay.interfere(s, Full, one);
            }
            hex_symmetries(&mut lay, c);
            lay.assemble(model.alpha())
        }
    }
}

/// A later phase of overlap-scheduled decoding: everything recovered so far
/// has been subtracted, and the center cell decodes its `ud` part from the
/// cluster antennas. The only remaining signals are `ud` parts of cells not
/// yet decoded.
pub fn build_overlap_scheduled_late<T: Scalar>(
    model: &CellArrayModel<T>,
    lambda: T,
    phase: LatePhase,
) -> Result<SchemeMatrices<T>> {
    check_lambda(lambda)?;
    let u = T::one() - lambda;
    let one = T::one();
    match (model.dimension(), phase) {
        (Dimension::Line1D, LatePhase::B) => {
            let mut lay = Layout::new(vec![line(-1), line(0), line(1)], vec![one], 1);
            lay.decode(line(0), Ud, u, 0);
            lay.interfere(line(-2), Ud, u);
            lay.interfere(line(2), Ud, u);
            lay.symmetric_under(mirror);
            lay.assemble(model.alpha())
        }
        (Dimension::Line1D, LatePhase::C) => Err(Error::Unsupported("the line schedule has only two phases".into())),
        (Dimension::Hex2D, phase) => {
            // A cells have color 0, B cells color 1, C cells color 2.
            let (c, pending): (Hex, &[u8]) = match phase {
                LatePhase::B => (Hex::new(1, 0), &[1, 2]),
                LatePhase::C => (Hex::new(2, 0), &[2]),
            };
            let mut lay = Layout::new(hex_sites(c.disk(1)), vec![one], 1);
            lay.decode(Site::Hex(c), Ud, u, 0);
            for n in c.ring(1) {
                if pending.contains(&n.color()) {
                    lay.undecode(Site::Hex(n), Ud, u);
                }
            }
            for s in c.ring(2) {
                if pending.contains(&s.color()) {
                    lay.interfere(Site::Hex(s), Ud, u);
                }
            }
            lay.assemble(model.alpha())
        }
    }
}
