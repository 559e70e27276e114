//! Exact arithmetic in a Galois number field `E`, its automorphisms, the
//! intermediate field `L = E^{G′}`, and integer lattices inside them.

pub mod field;
pub mod lattice;
pub mod linalg;

use num::{BigInt, Integer, Zero};

pub use field::{build_galois_group, Automorphism, FieldElem, GaloisGroup, NumberField};
pub use lattice::{integral_preimage, lattice_index, lattice_intersect, Lattice};
pub use linalg::{QMatrix, ZMatrix, Q};

use crate::error::{Error, Result};

/// `det(Tr(bᵢbⱼ))` for field elements `bᵢ`, with the trace taken in a subfield
/// of relative index `relative_degree` (so `Tr_L = Tr_E / [E:L]`).
pub fn trace_form_disc(field: &NumberField, basis: &[FieldElem], relative_degree: usize) -> Result<BigInt> {
    let scale = Q::from_integer(BigInt::from(relative_degree)).recip();
    let gram: QMatrix = basis
        .iter()
        .map(|a| basis.iter().map(|b| field.trace(&field.mul(a, b)) * &scale).collect())
        .collect();
    let d = linalg::det(&gram);
    if !d.is_integer() {
        return Err(Error::InvalidIntegralBasis(format!("trace-form determinant {d} is not an integer")));
    }
    Ok(d.to_integer())
}

/// Checks that the rows of `rows` span a ring of integers candidate: full rank,
/// contains 1 and the power basis, closed under multiplication, and with the
/// declared discriminant.
pub fn validate_integral_basis(field: &NumberField, rows: &[Vec<Q>], declared_disc: &BigInt) -> Result<Lattice> {
    let d = field.degree();
    let lattice = Lattice::from_generators(d, rows)?;
    let mut problems = Vec::new();
    if rows.len() != d || !lattice.is_full_rank() {
        problems.push(format!("expected {d} independent rows, got rank {} from {} rows", lattice.rank(), rows.len()));
        return Err(Error::InvalidIntegralBasis(problems.join("; ")));
    }
    if !lattice.contains(field.one().coeffs()) {
        problems.push("does not contain 1".to_string());
    }
    let x = field.generator();
    if let Some(k) = (1..d).find(|&k| !lattice.contains(field.pow(&x, k as u32).coeffs())) {
        problems.push(format!("does not contain the power basis element x^{k}"));
    }
    let elems: Vec<FieldElem> = lattice.basis().iter().map(|r| FieldElem::from_coeffs(r.clone())).collect();
    'ring: for (i, a) in elems.iter().enumerate() {
        for b in &elems[i..] {
            if !lattice.contains(field.mul(a, b).coeffs()) {
                problems.push("not closed under multiplication".to_string());
                break 'ring;
            }
        }
    }
    let disc = trace_form_disc(field, &elems, 1)?;
    if &disc != declared_disc {
        problems.push(format!("discriminant is {disc}, declared {declared_disc}"));
    }
    if problems.is_empty() {
        Ok(lattice)
    } else {
        Err(Error::InvalidIntegralBasis(problems.join("; ")))
    }
}

/// The intermediate field `L = E^{G′}` with its ring of integers.
#[derive(Clone, Debug)]
pub struct SubfieldData {
    degree_e: usize,
    /// ℚ-basis of `L` in power-basis coordinates of `E`, in reduced echelon form.
    qbasis: QMatrix,
    /// `𝒪_L = 𝒪_E ∩ L`, in power-basis coordinates of `E`.
    ol: Lattice,
    disc: BigInt,
    solver: linalg::RowSolver,
}

impl SubfieldData {
    pub fn degree(&self) -> usize {
        self.ol.rank()
    }

    pub fn relative_degree(&self) -> usize {
        self.degree_e / self.degree()
    }

    pub fn qbasis(&self) -> &QMatrix {
        &self.qbasis
    }

    pub fn ol(&self) -> &Lattice {
        &self.ol
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// The integral basis `ω₁ … ω_n` of `𝒪_L` as field elements.
    pub fn integral_basis(&self) -> Vec<FieldElem> {
        self.ol.basis().iter().map(|r| FieldElem::from_coeffs(r.clone())).collect()
    }

    /// Coordinates of `x` in the integral basis, `None` when `x ∉ L`.
    pub fn coords(&self, x: &FieldElem) -> Option<Vec<Q>> {
        self.solver.coords(x.coeffs())
    }

    pub fn element(&self, coords: &[Q]) -> FieldElem {
        FieldElem::from_coeffs(linalg::vec_mat(coords, self.ol.basis()))
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        self.coords(x).is_some()
    }

    /// `Tr_{L/ℚ}(x)` for `x ∈ L`.
    pub fn trace(&self, field: &NumberField, x: &FieldElem) -> Q {
        field.trace(x) / Q::from_integer(BigInt::from(self.relative_degree()))
    }
}

/// Builds `L = E^{G′}` and `𝒪_L = 𝒪_E ∩ L`.
pub fn fixed_field(field: &NumberField, galois: &GaloisGroup, gprime: &[usize], oe: &Lattice) -> Result<SubfieldData> {
    let table = galois.table();
    if !table.is_subgroup(gprime) {
        return Err(Error::InvalidSubgroup(format!("{gprime:?} is not closed under composition")));
    }
    if !oe.contains(field.one().coeffs()) {
        return Err(Error::InvalidIntegralBasis("ring of integers does not contain 1".into()));
    }
    let d = field.degree();
    let id = linalg::identity(d);
    // x·(σ − 1) = 0 for every σ ∈ G′, stacked column-wise.
    let stacked: QMatrix = (0..d)
        .map(|r| {
            gprime
                .iter()
                .flat_map(|&s| {
                    let m = galois.matrix(s);
                    let id = &id;
                    (0..d).map(move |c| &m[r][c] - &id[r][c])
                })
                .collect()
        })
        .collect();
    let kernel = if gprime.is_empty() { id.clone() } else { linalg::left_kernel(&stacked) };
    let (qbasis, _) = linalg::rref(&kernel);
    let expected = d / gprime.len().max(1);
    if qbasis.len() != expected {
        return Err(Error::Internal(format!("fixed field has dimension {}, expected {expected}", qbasis.len())));
    }
    let ol = saturate(oe, &qbasis)?;
    let elems: Vec<FieldElem> = ol.basis().iter().map(|r| FieldElem::from_coeffs(r.clone())).collect();
    let relative = d / qbasis.len();
    let disc = trace_form_disc(field, &elems, relative)?;
    if disc.is_zero() {
        return Err(Error::Internal("degenerate trace form on the fixed field".into()));
    }
    let solver = linalg::RowSolver::new(ol.basis())?;
    Ok(SubfieldData { degree_e: d, qbasis, ol, disc, solver })
}

/// `oe ∩ span(rows)` for a full-rank `oe`.
fn saturate(oe: &Lattice, rows: &[Vec<Q>]) -> Result<Lattice> {
    let coords: QMatrix = rows
        .iter()
        .map(|row| oe.coordinates(row).ok_or_else(|| Error::Internal("sublattice outside 𝒪_E".into())))
        .collect::<Result<_>>()?;
    // In oe-coordinates the answer is ℤ^d ∩ V, cut out by integer equations for V.
    let perp = linalg::nullspace(&coords, oe.rank());
    let sat_coords = if perp.is_empty() {
        linalg::identity(oe.rank())
    } else {
        let perp_t = linalg::transpose(&perp);
        let scale = linalg::common_denominator(perp_t.iter().flatten());
        let int_perp: ZMatrix =
            perp_t.iter().map(|row| row.iter().map(|x| (x * &scale).to_integer()).collect()).collect();
        linalg::to_rational_matrix(&linalg::integer_left_kernel(&int_perp))
    };
    let rows: QMatrix = sat_coords.iter().map(|c| linalg::vec_mat(c, oe.basis())).collect();
    Lattice::from_generators(oe.dim(), &rows)
}

pub fn is_unramified(p: u64, subfield: &SubfieldData) -> bool {
    !subfield.disc().is_multiple_of(&BigInt::from(p))
}

/// No prime dividing `n` ramifies in `L`.
pub fn is_domestic(subfield: &SubfieldData, n: usize) -> bool {
    linalg::prime_factors(&BigInt::from(n)).into_iter().all(|p| is_unramified(p, subfield))
}

/// `n = p^k` for a prime `p`; returns `p`.
pub fn prime_power_base(n: usize) -> Option<u64> {
    let f = linalg::prime_factors(&BigInt::from(n));
    (f.len() == 1).then(|| f[0])
}
