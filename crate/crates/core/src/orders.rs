//! ℤ-orders inside `H`: the associated order, the fixed-point order, Hopf-order
//! tests, discriminants and p-maximality.
//!
//! An order is a full-rank lattice in the coordinates of the descended basis
//! of `H`, kept in Hermite form.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::descent::{ActionTable, HopfAlgebra, Setting, StructureData};
use crate::error::{Error, Result};
use crate::numfield::linalg::{self, QMatrix, Q};
use crate::numfield::{fixed_field, integral_preimage, FieldElem, Lattice, NumberField};
use crate::permcore::coset_space;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unchecked,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZOrder {
    lattice: Lattice,
    pub is_ring: bool,
    pub contains_unit: bool,
    pub is_hopf: Tri,
    /// Zero when the lattice is not a ring.
    pub disc: BigInt,
}

impl ZOrder {
    /// Wraps a lattice of `H`, recording the ring and Hopf checks.
    pub fn new(hopf: &HopfAlgebra, lattice: Lattice) -> Result<ZOrder> {
        if lattice.dim() != hopf.dim() || !lattice.is_full_rank() {
            return Err(Error::InvalidArgument(format!(
                "an order needs rank {}, got {} of {}",
                hopf.dim(),
                lattice.rank(),
                lattice.dim()
            )));
        }
        let is_ring = is_ring(hopf, &lattice);
        let contains_unit = lattice.contains(hopf.unit());
        let disc = if is_ring { disc_order(hopf, &lattice)? } else { BigInt::zero() };
        let is_hopf = if is_ring && contains_unit { is_hopf_order(hopf, &lattice).into() } else { Tri::Unchecked };
        Ok(ZOrder { lattice, is_ring, contains_unit, is_hopf, disc })
    }

    /// Like [`ZOrder::new`], failing when the lattice is not a unital ring.
    fn checked(hopf: &HopfAlgebra, lattice: Lattice, what: &str) -> Result<ZOrder> {
        let order = ZOrder::new(hopf, lattice)?;
        if !order.is_ring || !order.contains_unit {
            return Err(Error::Internal(format!("{what} is not a unital ring")));
        }
        Ok(order)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> &QMatrix {
        self.lattice.basis()
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn contains(&self, y: &[Q]) -> bool {
        self.lattice.contains(y)
    }
}

/// Closure of the lattice under the multiplication of `H`.
pub fn is_ring(hopf: &HopfAlgebra, lattice: &Lattice) -> bool {
    let b = lattice.basis();
    b.iter().all(|x| b.iter().all(|y| lattice.contains(&hopf.mul(x, y))))
}

/// `det(Tr(λ_a λ_b))` with the trace of the regular representation of `H`.
pub fn disc_order(hopf: &HopfAlgebra, lattice: &Lattice) -> Result<BigInt> {
    let b = lattice.basis();
    let gram: QMatrix = b.iter().map(|x| b.iter().map(|y| hopf.regular_trace(&hopf.mul(x, y))).collect()).collect();
    let d = linalg::det(&gram);
    if !d.is_integer() {
        return Err(Error::Internal(format!("order discriminant {d} is not an integer")));
    }
    Ok(d.to_integer())
}

/// `𝔄_H = {h : h·𝒪_L ⊆ 𝒪_L}` from the action on the integral basis.
pub fn associated_order(hopf: &HopfAlgebra, table: &ActionTable) -> Result<ZOrder> {
    let m: QMatrix = table.on_ol.iter().map(|t| t.iter().flatten().cloned().collect()).collect();
    let lattice = integral_preimage(&m)?;
    ZOrder::checked(hopf, lattice, "the associated order")
}

/// `𝒪_E[N]^G`: elements of `H` whose coefficients lie in `𝒪_E`.
pub fn fixed_point_order(hopf: &HopfAlgebra, oe: &Lattice) -> Result<ZOrder> {
    let m = coefficient_matrix(hopf, oe)?;
    let lattice = integral_preimage(&m)?;
    ZOrder::checked(hopf, lattice, "the fixed-point order")
}

/// Row `i` lists the `𝒪_E`-coordinates of every coefficient of `bᵢ`.
fn coefficient_matrix(hopf: &HopfAlgebra, oe: &Lattice) -> Result<QMatrix> {
    hopf.basis()
        .iter()
        .map(|b| {
            let mut row = Vec::new();
            for c in b.coeffs() {
                row.extend(
                    oe.coordinates(c.coeffs())
                        .ok_or_else(|| Error::Internal("coefficient outside E".into()))?,
                );
            }
            Ok(row)
        })
        .collect()
}

/// The ℤ-span of `N` when every `ν` lies in `H`.
pub fn group_ring_order(hopf: &HopfAlgebra) -> Result<ZOrder> {
    let rows = (0..hopf.dim())
        .map(|nu| {
            hopf.group_element_coords(nu)
                .ok_or_else(|| Error::Unsupported("N is not contained in H; no group-ring lattice".into()))
        })
        .collect::<Result<QMatrix>>()?;
    ZOrder::checked(hopf, Lattice::from_generators(hopf.dim(), &rows)?, "the group ring")
}

/// Orbit sums `Σ_{g ∈ G/S} g(a)·ᵍx` over the `G`-orbits of `N` under
/// conjugation, `S` the stabiliser of `x` and `a` running over an integral
/// basis of `E^S`. Stabilisers must be normal in `G`.
pub fn orbit_sum_basis(setting: &Setting<'_>, sd: &StructureData, hopf: &HopfAlgebra, oe: &Lattice) -> Result<QMatrix> {
    let mut seen = vec![false; sd.order()];
    let mut out = Vec::new();
    for x in 0..sd.order() {
        if seen[x] {
            continue;
        }
        for g in 0..setting.galois.order() {
            seen[sd.conj[g][x]] = true;
        }
        out.extend(orbit_sums(setting, sd, hopf, oe, x)?);
    }
    Ok(out)
}

/// Orbit sums for the orbit of one `x ∈ N`.
pub fn orbit_sums(
    setting: &Setting<'_>,
    sd: &StructureData,
    hopf: &HopfAlgebra,
    oe: &Lattice,
    x: usize,
) -> Result<QMatrix> {
    let table = setting.galois.table();
    let stab: Vec<usize> = (0..setting.galois.order()).filter(|&g| sd.conj[g][x] == x).collect();
    let normal = (0..table.order()).all(|g| {
        stab.iter().all(|&s| stab.contains(&table.mul(table.mul(g, s), table.inverse(g))))
    });
    if !normal {
        return Err(Error::Unsupported(format!("stabiliser of N-element {x} is not normal in G")));
    }
    let sub = fixed_field(setting.field, setting.galois, &stab, oe)?;
    let cosets = coset_space(table, &stab)?;
    let field = setting.field;
    sub.integral_basis()
        .iter()
        .map(|a| {
            let mut z = crate::descent::GroupAlgElem::zero(field, sd.order());
            for &g in cosets.reps() {
                let nu = sd.conj[g][x];
                let mut coeffs = z.coeffs().to_vec();
                coeffs[nu] = coeffs[nu].add(&setting.galois.apply(g, a));
                z = crate::descent::GroupAlgElem::new(coeffs);
            }
            hopf.express(&z)
        })
        .collect()
}

/// `det(g(aᵢ))²` over the elements `g` of `G` and a basis `aᵢ` of `𝒪_E`,
/// computed by elimination in `E`.
pub fn galois_determinant_squared(setting: &Setting<'_>, oe: &Lattice) -> Result<Q> {
    let field = setting.field;
    let elems: Vec<FieldElem> = oe.basis().iter().map(|r| FieldElem::from_coeffs(r.clone())).collect();
    let m: Vec<Vec<FieldElem>> =
        elems.iter().map(|a| (0..setting.galois.order()).map(|g| setting.galois.apply(g, a)).collect()).collect();
    let d = det_over_field(field, m)?;
    field
        .mul(&d, &d)
        .as_rational()
        .ok_or_else(|| Error::Internal("square of the Galois determinant is not rational".into()))
}

fn det_over_field(field: &NumberField, mut a: Vec<Vec<FieldElem>>) -> Result<FieldElem> {
    let n = a.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(k) = (c..n).find(|&k| !a[k][c].is_zero()) else {
            return Ok(field.zero());
        };
        if k != c {
            a.swap(c, k);
            det = det.neg();
        }
        det = field.mul(&det, &a[c][c]);
        let inv = field.inv(&a[c][c])?;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = field.mul(&a[i][c], &inv);
            for j in c..n {
                let t = field.mul(&f, &a[c][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    Ok(det)
}

/// Coordinates of the comultiplication, counit and antipode of each basis
/// element of `Λ`, checked by `ok`.
fn hopf_closure(hopf: &HopfAlgebra, lattice: &Lattice, ok: impl Fn(&Q) -> bool) -> bool {
    let b = lattice.basis();
    let Ok(binv) = linalg::inverse(b) else {
        return false;
    };
    b.iter().all(|a| {
        let d = hopf.comult_of(a);
        // Δ(a) = Σ d_jk bⱼ ⊗ b_k and bⱼ = Σ_s binv[j][s] λ_s
        let tensor = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&binv), &d), &binv);
        tensor.iter().flatten().all(&ok)
            && ok(&hopf.counit_of(a))
            && linalg::vec_mat(&hopf.antipode_of(a), &binv).iter().all(&ok)
    })
}

/// `Δ(Λ) ⊆ Λ⊗Λ`, `ε(Λ) ⊆ ℤ` and `S(Λ) ⊆ Λ`.
pub fn is_hopf_order(hopf: &HopfAlgebra, lattice: &Lattice) -> bool {
    hopf_closure(hopf, lattice, Q::is_integer)
}

/// The same containments after inverting every prime other than `p`.
pub fn p_is_hopf_order(hopf: &HopfAlgebra, lattice: &Lattice, p: u64) -> bool {
    let p = BigInt::from(p);
    hopf_closure(hopf, lattice, |x| !x.denom().is_multiple_of(&p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub included: bool,
    /// `[Λ₂ : Λ₁]` when `Λ₁ ⊆ Λ₂`.
    pub index: Option<BigInt>,
}

impl Inclusion {
    pub fn equal(&self) -> bool {
        self.index.as_ref().is_some_and(One::is_one)
    }

    pub fn p_equal(&self, p: u64) -> bool {
        self.index.as_ref().is_some_and(|i| !i.is_multiple_of(&BigInt::from(p)))
    }
}

pub fn inclusion_and_index(small: &ZOrder, large: &ZOrder) -> Result<Inclusion> {
    if small.lattice.is_sublattice_of(&large.lattice) {
        Ok(Inclusion { included: true, index: Some(small.lattice.index_in(&large.lattice)?) })
    } else {
        Ok(Inclusion { included: false, index: None })
    }
}

#[derive(Clone, Debug)]
pub struct PMaximality {
    pub maximal: bool,
    /// The multiplier ring of the p-radical when it is strictly larger.
    pub enlarged: Option<ZOrder>,
    /// True when `p ∤ disc(Λ)` decided the answer.
    pub shortcut: bool,
}

/// One radical-multiplier round at `p` for a commutative `H`.
pub fn p_maximal(hopf: &HopfAlgebra, order: &ZOrder, p: u64) -> Result<PMaximality> {
    if !hopf.is_commutative() {
        return Err(Error::Unsupported("p-maximality is only implemented for commutative H".into()));
    }
    if !linalg::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if !order.is_ring {
        return Err(Error::InvalidArgument("p-maximality needs a ring".into()));
    }
    if !order.disc.is_multiple_of(&BigInt::from(p)) {
        return Ok(PMaximality { maximal: true, enlarged: None, shortcut: true });
    }
    let n = order.dim();
    let b = order.basis();
    let binv = linalg::inverse(b)?;
    let coords_mod_p = |y: &[Q]| -> Result<Vec<u64>> {
        linalg::vec_mat(y, &binv)
            .iter()
            .map(|c| linalg::reduce_mod_p(c, p).ok_or_else(|| Error::Internal("order not closed".into())))
            .collect()
    };
    let frob = b.iter().map(|x| coords_mod_p(&power(hopf, x, p))).collect::<Result<Vec<Vec<u64>>>>()?;
    let mut iterated = frob.clone();
    let mut reach = p as u128;
    while reach < n as u128 {
        iterated = mat_mul_mod(&iterated, &frob, p);
        reach *= p as u128;
    }
    let radical = linalg::left_kernel_mod_p(&iterated, p);
    let mut gens: QMatrix = b.iter().map(|row| row.iter().map(|x| x * Q::from_integer(BigInt::from(p))).collect()).collect();
    for v in &radical {
        let lift: Vec<Q> = v.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect();
        gens.push(linalg::vec_mat(&lift, b));
    }
    let ideal = Lattice::from_generators(n, &gens)?;
    let multiplier = multiplier_ring(hopf, &ideal)?;
    if multiplier == order.lattice {
        return Ok(PMaximality { maximal: true, enlarged: None, shortcut: false });
    }
    let enlarged = ZOrder::checked(hopf, multiplier, "the multiplier ring")?;
    if !order.lattice.is_sublattice_of(&enlarged.lattice) {
        return Err(Error::Internal("multiplier ring does not contain the order".into()));
    }
    Ok(PMaximality { maximal: false, enlarged: Some(enlarged), shortcut: false })
}

fn power(hopf: &HopfAlgebra, x: &[Q], mut e: u64) -> Vec<Q> {
    let mut result = hopf.unit().to_vec();
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = hopf.mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = hopf.mul(&base, &base);
        }
    }
    result
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(0u64, |acc, (x, brow)| (acc + x * brow[j] % p) % p))
                .collect()
        })
        .collect()
}

/// `(I : I) = {y ∈ H : y·I ⊆ I}`.
pub fn multiplier_ring(hopf: &HopfAlgebra, ideal: &Lattice) -> Result<Lattice> {
    let n = hopf.dim();
    let inv = linalg::inverse(ideal.basis())?;
    let m: QMatrix = (0..n)
        .map(|i| {
            let e = crate::descent::basis_vector(n, i);
            ideal.basis().iter().flat_map(|beta| linalg::vec_mat(&hopf.mul(&e, beta), &inv)).collect()
        })
        .collect();
    integral_preimage(&m)
}

/// p-maximal at every prime whose square divides the discriminant.
pub fn is_maximal(hopf: &HopfAlgebra, order: &ZOrder) -> Result<bool> {
    for p in linalg::prime_factors(&order.disc) {
        if linalg::valuation(&order.disc, p) >= 2 && !p_maximal(hopf, order, p)?.maximal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Iterates radical-multiplier enlargements until the order is maximal.
pub fn maximal_overorder(hopf: &HopfAlgebra, order: &ZOrder) -> Result<ZOrder> {
    let mut current = order.clone();
    for p in linalg::prime_factors(&order.disc) {
        loop {
            let step = p_maximal(hopf, &current, p)?;
            match step.enlarged {
                Some(next) => current = next,
                None => break,
            }
        }
    }
    Ok(current)
}

/// `disc(Λ) = disc(Λ′)·[Λ′:Λ]²` for `Λ ⊆ Λ′`.
pub fn discriminant_chain_holds(small: &ZOrder, large: &ZOrder) -> Result<bool> {
    let index = small.lattice.index_in(&large.lattice)?;
    Ok(small.disc == &large.disc * &index * &index)
}

/// Sign-free helper for reports: `|disc|` as a string.
pub fn abs_disc(order: &ZOrder) -> BigInt {
    order.disc.abs()
}
