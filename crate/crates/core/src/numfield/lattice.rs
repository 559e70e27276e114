use std::fmt;

use num::{BigInt, Signed, Zero};

use super::linalg::{self, QMatrix, ZMatrix, Q};
use crate::error::{Error, Result};

/// A finitely generated ℤ-submodule of `ℚ^dim`, stored in rational Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: QMatrix,
}

impl Lattice {
    /// The lattice spanned by the rows of `gens`.
    pub fn from_generators(dim: usize, gens: &[Vec<Q>]) -> Result<Lattice> {
        if let Some(row) = gens.iter().find(|row| row.len() != dim) {
            return Err(Error::Malformed(format!("generator of length {} in dimension {dim}", row.len())));
        }
        Ok(Lattice { dim, basis: linalg::hnf_rational(gens) })
    }

    pub fn standard(dim: usize) -> Lattice {
        Lattice { dim, basis: linalg::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Rational coordinates of `v` in the basis, `None` outside the ℚ-span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.basis.is_empty() {
            return linalg::is_zero_vec(v).then(Vec::new);
        }
        linalg::RowSolver::new(&self.basis).ok()?.coords(v)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some_and(|c| linalg::is_integral(&c))
    }

    /// Membership after localising at `p`: coordinates may have denominators prime to `p`.
    pub fn contains_at(&self, v: &[Q], p: u64) -> bool {
        self.coordinates(v).is_some_and(|c| linalg::is_p_integral(&c, p))
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|row| other.contains(row))
    }

    /// `[other : self]` for `self ⊆ other` of equal rank.
    pub fn index_in(&self, other: &Lattice) -> Result<BigInt> {
        let coords = self.coords_in(other)?;
        if !coords.iter().all(|row| linalg::is_integral(row)) {
            return Err(Error::NotSublattice("lattice is not contained in the reference lattice".into()));
        }
        Ok(linalg::det(&coords).to_integer().abs())
    }

    /// `|det(self)/det(other)|` as a rational, for lattices of equal rank and span.
    pub fn rational_index_in(&self, other: &Lattice) -> Result<Q> {
        Ok(linalg::det(&self.coords_in(other)?).abs())
    }

    fn coords_in(&self, other: &Lattice) -> Result<QMatrix> {
        if self.rank() != other.rank() {
            return Err(Error::NotSublattice(format!("ranks differ: {} and {}", self.rank(), other.rank())));
        }
        if self.basis.is_empty() {
            return Ok(Vec::new());
        }
        let solver = linalg::RowSolver::new(&other.basis)?;
        self.basis
            .iter()
            .map(|row| solver.coords(row).ok_or_else(|| Error::NotSublattice("spans differ".into())))
            .collect()
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        if self.dim != other.dim {
            return Err(Error::Malformed("intersecting lattices of different dimensions".into()));
        }
        if self.basis.is_empty() || other.basis.is_empty() {
            return Ok(Lattice { dim: self.dim, basis: Vec::new() });
        }
        let stacked: QMatrix = self.basis.iter().chain(&other.basis).cloned().collect();
        let d = linalg::common_denominator(stacked.iter().flatten());
        let scaled: ZMatrix = stacked.iter().map(|row| row.iter().map(|x| (x * &d).to_integer()).collect()).collect();
        let a = self.basis.len();
        let gens: QMatrix = linalg::integer_left_kernel(&scaled)
            .iter()
            .map(|k| {
                let x: Vec<Q> = k[..a].iter().map(|c| Q::from_integer(c.clone())).collect();
                linalg::vec_mat(&x, &self.basis)
            })
            .collect();
        Lattice::from_generators(self.dim, &gens)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        let stacked: QMatrix = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(self.dim, &stacked)
    }

    /// `{y : y·v ∈ ℤ for all v in self}` for a full-rank lattice.
    pub fn dual(&self) -> Result<Lattice> {
        if !self.is_full_rank() {
            return Err(Error::InvalidArgument("dual of a lattice that is not full rank".into()));
        }
        let inv = linalg::inverse(&self.basis)?;
        Lattice::from_generators(self.dim, &linalg::transpose(&inv))
    }

    pub fn scale(&self, c: &Q) -> Result<Lattice> {
        let rows: QMatrix = self.basis.iter().map(|row| row.iter().map(|x| x * c).collect()).collect();
        Lattice::from_generators(self.dim, &rows)
    }

    /// Image under `v ↦ v·M`.
    pub fn map(&self, m: &[Vec<Q>]) -> Result<Lattice> {
        let cols = m.first().map_or(0, Vec::len);
        let rows: QMatrix = self.basis.iter().map(|row| linalg::vec_mat(row, m)).collect();
        Lattice::from_generators(cols, &rows)
    }

    /// Absolute determinant of the basis of a full-rank lattice.
    pub fn covolume(&self) -> Result<Q> {
        if !self.is_full_rank() {
            return Err(Error::InvalidArgument("covolume of a lattice that is not full rank".into()));
        }
        Ok(linalg::det(&self.basis).abs())
    }

    /// Smith invariants of `other / self` for `self ⊆ other` of equal rank.
    pub fn quotient_invariants(&self, other: &Lattice) -> Result<Vec<BigInt>> {
        let coords = self.coords_in(other)?;
        let z = linalg::to_integer_matrix(&coords)
            .ok_or_else(|| Error::NotSublattice("lattice is not contained in the reference lattice".into()))?;
        Ok(linalg::smith_invariants(&z).into_iter().filter(|d| d != &BigInt::from(1)).collect())
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.basis {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `{y ∈ ℚ^rows : y·M ∈ ℤ^cols}` for `M` of full row rank: the dual of the
/// lattice spanned by the columns of `M`.
pub fn integral_preimage(m: &[Vec<Q>]) -> Result<Lattice> {
    let rows = m.len();
    let columns = Lattice::from_generators(rows, &linalg::transpose(m))?;
    if !columns.is_full_rank() {
        return Err(Error::InvalidArgument(format!(
            "integral preimage needs full row rank, got rank {} of {rows}",
            columns.rank()
        )));
    }
    columns.dual()
}

/// `lattice_index(A ⊆ B)`.
pub fn lattice_index(a: &Lattice, b: &Lattice) -> Result<BigInt> {
    a.index_in(b)
}

pub fn lattice_intersect(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    a.intersect(b)
}

/// Integral Hermite form of an integer matrix.
pub fn hnf(m: &[Vec<BigInt>]) -> ZMatrix {
    linalg::hnf(m)
}

/// Smith invariants including the trailing zeros for rank deficiency.
pub fn snf(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut d = linalg::smith_invariants(m);
    let size = m.len().min(m.first().map_or(0, Vec::len));
    d.resize(size, BigInt::zero());
    d
}
