//! Rank bookkeeping for `… → H^n_RBS → HH^n → H^n_RBSO → H^{n+1}_RBS → …`.

use std::fmt;

use super::{ComplexTag, Complexes};
use crate::error::Result;
use crate::linalg::Matrix;

/// One group of the sequence with the ranks of its incoming and outgoing maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesSlot {
    pub tag: ComplexTag,
    pub degree: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    /// The composite through this slot sends cocycles to coboundaries.
    pub composite_zero: bool,
    pub exact: bool,
}

impl fmt::Display for LesSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.tag {
            ComplexTag::Alg => format!("HH^{}", self.degree),
            ComplexTag::Rbso => format!("H^{}_RBSO", self.degree),
            ComplexTag::Rbs => format!("H^{}_RBS", self.degree),
        };
        write!(
            f,
            "{name}: dim {} in {} out {} {}",
            self.dim,
            self.rank_in,
            self.rank_out,
            if self.exact { "exact" } else { "NOT exact" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub max_degree: usize,
    pub slots: Vec<LesSlot>,
    /// `π`, `-Φ` and the inclusion commute with the differentials (the
    /// inclusion up to the sign the cone imposes).
    pub chain_maps: bool,
    /// Alternating sum of dims along the truncated sequence equals
    /// `±` the rank leaving its last slot.
    pub euler: bool,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.chain_maps && self.euler && self.slots.iter().all(|s| s.exact)
    }

    pub fn first_failure(&self) -> Option<&LesSlot> {
        self.slots.iter().find(|s| !s.exact)
    }
}

struct Level {
    cocycles: Matrix,
    boundaries: Matrix,
}

impl Level {
    fn dim(&self) -> usize {
        self.cocycles.cols() - self.boundaries.cols()
    }
}

/// `rank([B | F·Z]) - rank(B)` with `B` a basis.
fn induced_rank(map: &Matrix, source: &Level, target_boundaries: &Matrix) -> Result<usize> {
    let image = map.mul(&source.cocycles);
    Ok(Matrix::hstack(&[target_boundaries, &image])?.rank() - target_boundaries.cols())
}

fn lands_in(image: &Matrix, boundaries: &Matrix) -> Result<bool> {
    Ok(Matrix::hstack(&[boundaries, image])?.rank() == boundaries.cols())
}

impl Complexes {
    /// `C^n_RBS -> C^n_Alg`.
    pub fn projection_map(&self, n: usize) -> Matrix {
        let f = self.field();
        let a = self.dim(ComplexTag::Alg, n);
        let mut p = Matrix::zeros(f, a, self.dim(ComplexTag::Rbs, n));
        p.set_block(0, 0, &Matrix::identity(f, a));
        p
    }

    /// `C^n_RBSO -> C^{n+1}_RBS`, `(x, y) ↦ (0, (x, y))`.
    pub fn inclusion_map(&self, n: usize) -> Matrix {
        let f = self.field();
        let o = self.dim(ComplexTag::Rbso, n);
        let mut i = Matrix::zeros(f, self.dim(ComplexTag::Rbs, n + 1), o);
        i.set_block(self.dim(ComplexTag::Alg, n + 1), 0, &Matrix::identity(f, o));
        i
    }

    fn levels(&self, tag: ComplexTag, slices: &[Matrix], top: usize) -> Vec<Level> {
        (0..=top)
            .map(|n| Level {
                cocycles: if n < slices.len() {
                    slices[n].kernel_basis()
                } else {
                    Matrix::identity(self.field(), self.dim(tag, n))
                },
                boundaries: if n == 0 {
                    Matrix::zeros(self.field(), self.dim(tag, 0), 0)
                } else {
                    slices[n - 1].column_space_basis()
                },
            })
            .collect()
    }

    /// Checks exactness at every group from `H^0_RBS` to `H^N_RBSO`.
    pub fn les_check(&self, max_degree: usize) -> Result<LesReport> {
        let top = max_degree;
        let alg = self.slices(ComplexTag::Alg, top)?;
        let rbso = self.slices(ComplexTag::Rbso, top)?;
        let rbs = self.slices(ComplexTag::Rbs, top)?;
        let phis: Vec<Matrix> = (0..=top + 1).map(|n| self.phi(n).map(|p| p.neg())).collect::<Result<_>>()?;

        let mut chain_maps = true;
        for n in 0..=top {
            let pi_n = self.projection_map(n);
            let pi_n1 = self.projection_map(n + 1);
            chain_maps &= pi_n1.mul(&rbs[n]) == alg[n].mul(&pi_n);
            chain_maps &= rbso[n].mul(&phis[n]) == phis[n + 1].mul(&alg[n]);
            if n < top {
                chain_maps &= rbs[n + 1].mul(&self.inclusion_map(n)) == self.inclusion_map(n + 1).mul(&rbso[n]).neg();
            }
        }

        let l_alg = self.levels(ComplexTag::Alg, &alg, top);
        let l_rbso = self.levels(ComplexTag::Rbso, &rbso, top);
        // H^{N+1}_RBS only serves as a target, so its cocycle space is irrelevant.
        let l_rbs = self.levels(ComplexTag::Rbs, &rbs, top + 1);

        // Outgoing map from each slot in order: π^n, -Φ^n, ι^n.
        let mut slots = Vec::new();
        let mut maps: Vec<(Matrix, &Level, &Level)> = Vec::new();
        for n in 0..=top {
            maps.push((self.projection_map(n), &l_rbs[n], &l_alg[n]));
            maps.push((phis[n].clone(), &l_alg[n], &l_rbso[n]));
            maps.push((self.inclusion_map(n), &l_rbso[n], &l_rbs[n + 1]));
        }
        let tags = [ComplexTag::Rbs, ComplexTag::Alg, ComplexTag::Rbso];
        let mut rank_in = 0;
        for (k, (map, src, dst)) in maps.iter().enumerate() {
            let rank_out = induced_rank(map, src, &dst.boundaries)?;
            let composite_zero = if k == 0 {
                true
            } else {
                let (prev, before, _) = &maps[k - 1];
                lands_in(&map.mul(&prev.mul(&before.cocycles)), &dst.boundaries)?
            };
            let dim = src.dim();
            slots.push(LesSlot {
                tag: tags[k % 3],
                degree: k / 3,
                dim,
                rank_in,
                rank_out,
                composite_zero,
                exact: composite_zero && rank_in + rank_out == dim,
            });
            rank_in = rank_out;
        }

        let alternating: i64 =
            slots.iter().enumerate().map(|(i, s)| if i % 2 == 0 { s.dim as i64 } else { -(s.dim as i64) }).sum();
        let last = slots.last().expect("at least three slots");
        let sign = if (slots.len() - 1) % 2 == 0 { 1 } else { -1 };
        let euler = alternating == sign * last.rank_out as i64;
        Ok(LesReport { max_degree, slots, chain_maps, euler })
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::Algebra;
    use crate::bimodule::RBSBimodule;
    use crate::cohomology::Complexes;
    use crate::linalg::Field;
    use crate::system::RotaBaxterSystem;

    #[test]
    fn zero_structure_over_f2_is_exact() {
        let sys = RotaBaxterSystem::trivial(Algebra::zero(Field::Prime(2), 1));
        let cx = Complexes::new(&RBSBimodule::regular(&sys).unwrap()).unwrap();
        let report = cx.les_check(2).unwrap();
        assert!(report.exact(), "{report:?}");
        let dims: Vec<usize> = report.slots.iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![0, 1, 2, 2, 1, 2, 3, 1, 2]);
    }
}
