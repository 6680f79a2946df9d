//! Axial coordinates on the hexagonal cell lattice.

use std::fmt;

/// Neighbor offsets in axial coordinates.
pub const HEX_DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hex {
    pub q: i32,
    pub r: i32,
}

impl Hex {
    pub const ORIGIN: Hex = Hex { q: 0, r: 0 };

    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    pub fn offset(self, dq: i32, dr: i32) -> Self {
        Self::new(self.q + dq, self.r + dr)
    }

    pub fn distance(self, other: Hex) -> u32 {
        let dq = self.q - other.q;
        let dr = self.r - other.r;
        ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
    }

    pub fn neighbors(self) -> [Hex; 6] {
        HEX_DIRECTIONS.map(|(dq, dr)| self.offset(dq, dr))
    }

    /// Lattice 3-coloring; adjacent cells always differ in color.
    pub fn color(self) -> u8 {
        (self.q - self.r).rem_euclid(3) as u8
    }

    /// All cells at exactly `radius` from `self`, walking the ring.
    pub fn ring(self, radius: u32) -> Vec<Hex> {
        if radius == 0 {
            return vec![self];
        }
        let k = radius as i32;
        let (sq, sr) = HEX_DIRECTIONS[4];
        let mut cur = self.offset(sq * k, sr * k);
        let mut out = Vec::with_capacity(6 * radius as usize);
        for (dq, dr) in HEX_DIRECTIONS {
            for _ in 0..radius {
                out.push(cur);
                cur = cur.offset(dq, dr);
            }
        }
        out
    }

    /// All cells within `radius`, ring by ring.
    pub fn disk(self, radius: u32) -> Vec<Hex> {
        (0..=radius).flat_map(|k| self.ring(k)).collect()
    }

    /// 60° rotation about `center`.
    pub fn rotate60(self, center: Hex) -> Hex {
        let (q, r) = (self.q - center.q, self.r - center.r);
        center.offset(-r, q + r)
    }

    /// Mirror about the axis through `center` that swaps the q and r axes.
    pub fn reflect(self, center: Hex) -> Hex {
        let (q, r) = (self.q - center.q, self.r - center.r);
        center.offset(r, q)
    }
}

impl fmt::Display for Hex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn every_cell_has_six_distinct_neighbors() {
        for c in Hex::ORIGIN.disk(4) {
            let n: BTreeSet<Hex> = c.neighbors().into_iter().collect();
            assert_eq!(n.len(), 6);
            assert!(n.iter().all(|&m| m.distance(c) == 1));
        }
    }

    #[test]
    fn ring_sizes() {
        for k in 1..5 {
            let ring = Hex::ORIGIN.ring(k);
            let set: BTreeSet<Hex> = ring.iter().copied().collect();
            assert_eq!(set.len(), 6 * k as usize);
            assert!(ring.iter().all(|c| c.distance(Hex::ORIGIN) == k));
        }
        assert_eq!(Hex::ORIGIN.disk(2).len(), 19);
    }

    #[test]
    fn coloring_splits_neighbors_three_and_three() {
        for c in Hex::new(3, -7).disk(3) {
            let mut counts = [0; 3];
            for m in c.neighbors() {
                counts[m.color() as usize] += 1;
            }
            assert_eq!(counts[c.color() as usize], 0);
            assert_eq!(counts.iter().filter(|&&k| k == 3).count(), 2);
        }
    }

    #[test]
    fn second_shell_colors() {
        let c = Hex::ORIGIN;
        let shell = c.ring(2);
        let same: Vec<_> = shell.iter().filter(|h| h.color() == c.color()).collect();
        assert_eq!(same.len(), 6);
        // Same-colored shell cells are the edge midpoints: two ring neighbors each.
        for h in same {
            let ring_neighbors = h.neighbors().iter().filter(|m| m.distance(c) == 1).count();
            assert_eq!(ring_neighbors, 2);
        }
    }

    #[test]
    fn symmetries_preserve_distance() {
        let c = Hex::new(1, 2);
        let cells = c.disk(3);
        for &a in &cells {
            for &b in &cells {
                assert_eq!(a.rotate60(c).distance(b.rotate60(c)), a.distance(b));
                assert_eq!(a.reflect(c).distance(b.reflect(c)), a.distance(b));
            }
            let mut x = a;
            for _ in 0..6 {
                x = x.rotate60(c);
            }
            assert_eq!(x, a);
            assert_eq!(a.reflect(c).reflect(c), a);
        }
    }
}
