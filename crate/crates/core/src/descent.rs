//! The Hopf algebra `H = E[N]^G` by Galois descent, its structure constants,
//! and its action on `L`.
//!
//! `G` acts on `E[N]` semilinearly: on coefficients through the field
//! automorphisms and on group elements by conjugation with `λ(G)`. The fixed
//! points form a ℚ-form of `E[N]` of dimension `|N|`.
//!
//! Elements of `H` are handled as rational coordinate vectors in the descended
//! basis `b₁ … b_n`. Tensors over the basis are stored densely:
//! `mult[i][j][k]` is the coefficient of `b_k` in `bᵢ bⱼ`, `comult[i][j][k]`
//! the coefficient of `bⱼ ⊗ b_k` in `Δ(bᵢ)`.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::linalg::{self, QMatrix, Q};
use crate::numfield::{FieldElem, GaloisGroup, NumberField, SubfieldData};
use crate::permcore::{self, CosetSpace, Perm, PermGroup};

/// Everything descent needs to know about `E/ℚ` and the coset space `X`.
#[derive(Clone, Copy, Debug)]
pub struct Setting<'a> {
    pub field: &'a NumberField,
    pub galois: &'a GaloisGroup,
    pub cosets: &'a CosetSpace,
    pub lambda: &'a [Perm],
}

/// Multiplication data of a finite group on its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTables {
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
    pub abelian: bool,
}

impl GroupTables {
    pub fn new(group: &PermGroup) -> GroupTables {
        let table = group.cayley_table();
        let n = table.order();
        GroupTables {
            mult: (0..n).map(|a| (0..n).map(|b| table.mul(a, b)).collect()).collect(),
            inverse: (0..n).map(|a| table.inverse(a)).collect(),
            identity: table.identity(),
            abelian: table.is_abelian(),
        }
    }

    pub fn order(&self) -> usize {
        self.inverse.len()
    }
}

/// A regular subgroup `N` with the data descent and the action need.
#[derive(Clone, Debug)]
pub struct StructureData {
    pub group: PermGroup,
    pub tables: GroupTables,
    /// `conj[g][ν]` is the index of `λ(g) ν λ(g)⁻¹`.
    pub conj: Vec<Vec<usize>>,
    /// `action_reps[ν]` is an element of `G` in the coset `ν⁻¹(1̄)`.
    pub action_reps: Vec<usize>,
}

impl StructureData {
    pub fn new(setting: &Setting<'_>, group: PermGroup) -> Result<StructureData> {
        let n = setting.cosets.len();
        if !permcore::is_regular(&group, n) {
            return Err(Error::InvalidArgument("N is not a regular subgroup of Perm(X)".into()));
        }
        let index = permcore::element_index(&group);
        let conj = setting
            .lambda
            .iter()
            .map(|l| {
                group
                    .elements()
                    .iter()
                    .map(|nu| {
                        index.get(&nu.conjugate_by(l)).copied().ok_or_else(|| {
                            Error::InvalidArgument("N is not normalised by λ(G)".into())
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        let base_point = setting.cosets.coset_of(setting.galois.table().identity());
        let action_reps = group
            .elements()
            .iter()
            .map(|nu| setting.cosets.reps()[nu.inverse().apply(base_point)])
            .collect();
        let tables = GroupTables::new(&group);
        Ok(StructureData { group, tables, conj, action_reps })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// `Σ c_ν ν ∈ E[N]`, one coefficient per element of `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgElem {
    coeffs: Vec<FieldElem>,
}

impl GroupAlgElem {
    pub fn new(coeffs: Vec<FieldElem>) -> GroupAlgElem {
        GroupAlgElem { coeffs }
    }

    pub fn zero(field: &NumberField, n: usize) -> GroupAlgElem {
        GroupAlgElem { coeffs: vec![field.zero(); n] }
    }

    /// `1 · ν`.
    pub fn group_element(field: &NumberField, n: usize, nu: usize) -> GroupAlgElem {
        let mut z = GroupAlgElem::zero(field, n);
        z.coeffs[nu] = field.one();
        z
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        GroupAlgElem { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Q) -> GroupAlgElem {
        GroupAlgElem { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul(&self, field: &NumberField, tables: &GroupTables, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero(field, self.coeffs.len());
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let k = tables.mult[a][b];
                    out.coeffs[k] = out.coeffs[k].add(&field.mul(x, y));
                }
            }
        }
        out
    }

    fn unflatten(v: &[Q], d: usize) -> GroupAlgElem {
        GroupAlgElem { coeffs: v.chunks(d).map(|c| FieldElem::from_coeffs(c.to_vec())).collect() }
    }
}

/// `ᵍz`: coefficients moved by `g`, group elements conjugated by `λ(g)`.
pub fn semilinear_act(setting: &Setting<'_>, sd: &StructureData, g: usize, z: &GroupAlgElem) -> GroupAlgElem {
    let mut out = GroupAlgElem::zero(setting.field, sd.order());
    for (nu, c) in z.coeffs.iter().enumerate() {
        out.coeffs[sd.conj[g][nu]] = setting.galois.apply(g, c);
    }
    out
}

/// A canonical ℚ-basis of the fixed points of the semilinear action:
/// reduced echelon form in flattened coordinates, each row scaled primitive.
pub fn fixed_algebra(setting: &Setting<'_>, sd: &StructureData) -> Result<Vec<GroupAlgElem>> {
    let d = setting.field.degree();
    let n = sd.order();
    let dim = d * n;
    let others: Vec<usize> =
        (0..setting.galois.order()).filter(|&g| g != setting.galois.table().identity()).collect();
    let kernel = if others.is_empty() {
        linalg::identity(dim)
    } else {
        // Row (ν, k) is ᵍ(x^k ν) − x^k ν, side by side for every g ≠ 1.
        let mut stacked = linalg::zero_matrix(dim, dim * others.len());
        for (block, &g) in others.iter().enumerate() {
            let m = setting.galois.matrix(g);
            for nu in 0..n {
                let target = sd.conj[g][nu];
                for k in 0..d {
                    let row = &mut stacked[nu * d + k];
                    for c in 0..d {
                        row[block * dim + target * d + c] += &m[k][c];
                    }
                    row[block * dim + nu * d + k] -= Q::one();
                }
            }
        }
        linalg::left_kernel(&stacked)
    };
    let (rows, _) = linalg::rref(&kernel);
    if rows.len() != n {
        return Err(Error::DescentFailure(format!("fixed space has dimension {}, expected |N| = {n}", rows.len())));
    }
    Ok(rows.iter().map(|r| GroupAlgElem::unflatten(&primitive(r), d)).collect())
}

/// The positive primitive integer multiple of a non-zero rational vector.
fn primitive(v: &[Q]) -> Vec<Q> {
    let den = linalg::common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let mut g = linalg::gcd_all(&ints);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.iter().map(|x| Q::new(x.clone(), g.clone())).collect()
}

/// `H` with its Hopf structure, in the coordinates of the descended basis.
#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    field: NumberField,
    tables: GroupTables,
    basis: Vec<GroupAlgElem>,
    /// Row `ν` holds the coordinates of `ν` over `E`.
    group_coords: Vec<Vec<FieldElem>>,
    mult: Vec<Vec<Vec<Q>>>,
    comult: Vec<QMatrix>,
    counit: Vec<Q>,
    antipode: QMatrix,
    unit: Vec<Q>,
    theta: Vec<Q>,
}

/// Completes a descended basis with its structure constants. Every constant
/// is computed over `E` and must turn out rational.
pub fn structure_constants(field: &NumberField, tables: &GroupTables, basis: Vec<GroupAlgElem>) -> Result<HopfAlgebra> {
    let n = tables.order();
    if basis.len() != n {
        return Err(Error::DescentFailure(format!("{} basis elements for |N| = {n}", basis.len())));
    }
    let c: Vec<Vec<FieldElem>> = basis.iter().map(|b| b.coeffs.clone()).collect();
    let group_coords = invert_over_field(field, c)
        .map_err(|_| Error::DescentFailure("descended basis does not span E[N] over E".into()))?;
    let mut h = HopfAlgebra {
        field: field.clone(),
        tables: tables.clone(),
        basis,
        group_coords,
        mult: Vec::new(),
        comult: Vec::new(),
        counit: Vec::new(),
        antipode: Vec::new(),
        unit: Vec::new(),
        theta: Vec::new(),
    };
    let mut mult = Vec::with_capacity(n);
    for i in 0..n {
        let row = (0..n)
            .map(|j| h.express(&h.basis[i].mul(field, tables, &h.basis[j])))
            .collect::<Result<Vec<_>>>()?;
        mult.push(row);
    }
    let mut comult = Vec::with_capacity(n);
    for b in &h.basis {
        let mut d = vec![vec![field.zero(); n]; n];
        for (nu, cnu) in b.coeffs.iter().enumerate() {
            if cnu.is_zero() {
                continue;
            }
            for j in 0..n {
                let left = field.mul(cnu, &h.group_coords[nu][j]);
                if left.is_zero() {
                    continue;
                }
                for k in 0..n {
                    d[j][k] = d[j][k].add(&field.mul(&left, &h.group_coords[nu][k]));
                }
            }
        }
        let d = d.iter().map(|row| row.iter().map(rational).collect::<Result<Vec<Q>>>()).collect::<Result<QMatrix>>()?;
        comult.push(d);
    }
    let counit = h
        .basis
        .iter()
        .map(|b| rational(&b.coeffs.iter().fold(field.zero(), |acc, x| acc.add(x))))
        .collect::<Result<Vec<_>>>()?;
    let antipode = h
        .basis
        .iter()
        .map(|b| {
            let mut s = GroupAlgElem::zero(field, n);
            for (nu, x) in b.coeffs.iter().enumerate() {
                s.coeffs[tables.inverse[nu]] = x.clone();
            }
            h.express(&s)
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = h.express(&GroupAlgElem::group_element(field, n, tables.identity))?;
    let theta = h.express(&GroupAlgElem { coeffs: vec![field.one(); n] })?;
    h.mult = mult;
    h.comult = comult;
    h.counit = counit;
    h.antipode = antipode;
    h.unit = unit;
    h.theta = theta;
    Ok(h)
}

fn rational(x: &FieldElem) -> Result<Q> {
    x.as_rational()
        .ok_or_else(|| Error::DescentFailure(format!("structure constant {x} is not rational")))
}

/// Gauss–Jordan inversion of a square matrix over `E`.
fn invert_over_field(field: &NumberField, m: Vec<Vec<FieldElem>>) -> Result<Vec<Vec<FieldElem>>> {
    let n = m.len();
    let mut a: Vec<Vec<FieldElem>> = m
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !a[k][c].is_zero()).ok_or(Error::DivisionByZero)?;
        a.swap(c, k);
        let inv = field.inv(&a[c][c])?;
        a[c] = a[c].iter().map(|x| field.mul(x, &inv)).collect();
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = x.sub(&field.mul(&f, y));
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl HopfAlgebra {
    /// The group algebra `ℚ[N]` with the group elements as basis.
    pub fn group_algebra(group: &PermGroup) -> Result<HopfAlgebra> {
        let field = NumberField::new(vec![BigInt::zero(), BigInt::one()])?;
        let tables = GroupTables::new(group);
        let n = tables.order();
        let basis = (0..n).map(|nu| GroupAlgElem::group_element(&field, n, nu)).collect();
        structure_constants(&field, &tables, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn tables(&self) -> &GroupTables {
        &self.tables
    }

    pub fn basis(&self) -> &[GroupAlgElem] {
        &self.basis
    }

    pub fn mult(&self) -> &[Vec<Vec<Q>>] {
        &self.mult
    }

    pub fn comult(&self) -> &[QMatrix] {
        &self.comult
    }

    pub fn counit(&self) -> &[Q] {
        &self.counit
    }

    pub fn antipode(&self) -> &QMatrix {
        &self.antipode
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    /// Coordinates of `θ = Σ_{ν∈N} ν`.
    pub fn theta(&self) -> &[Q] {
        &self.theta
    }

    pub fn is_commutative(&self) -> bool {
        self.tables.abelian
    }

    /// Coordinates of an element of `E[N]` lying in `H`.
    pub fn express(&self, z: &GroupAlgElem) -> Result<Vec<Q>> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = self.field.zero();
                for (rho, x) in z.coeffs.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc.add(&self.field.mul(x, &self.group_coords[rho][k]));
                    }
                }
                rational(&acc)
            })
            .collect()
    }

    /// `Σ yᵢ bᵢ` inside `E[N]`.
    pub fn to_group_alg(&self, y: &[Q]) -> GroupAlgElem {
        let mut z = GroupAlgElem::zero(&self.field, self.dim());
        for (yi, b) in y.iter().zip(&self.basis) {
            if !yi.is_zero() {
                z = z.add(&b.scale(yi));
            }
        }
        z
    }

    /// Coordinates of `ν` when `ν ∈ H`.
    pub fn group_element_coords(&self, nu: usize) -> Option<Vec<Q>> {
        self.group_coords[nu].iter().map(FieldElem::as_rational).collect()
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        *o += &f * m;
                    }
                }
            }
        }
        out
    }

    /// `Δ(x)` as an `n × n` coefficient matrix over `bⱼ ⊗ b_k`.
    pub fn comult_of(&self, x: &[Q]) -> QMatrix {
        let n = self.dim();
        let mut out = linalg::zero_matrix(n, n);
        for (xi, d) in x.iter().zip(&self.comult) {
            if xi.is_zero() {
                continue;
            }
            for (orow, drow) in out.iter_mut().zip(d) {
                for (o, v) in orow.iter_mut().zip(drow) {
                    *o += xi * v;
                }
            }
        }
        out
    }

    pub fn counit_of(&self, x: &[Q]) -> Q {
        x.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn antipode_of(&self, x: &[Q]) -> Vec<Q> {
        linalg::vec_mat(x, &self.antipode)
    }

    /// Matrix of left multiplication by `x`; row `j` is `x·bⱼ`.
    pub fn left_mult_matrix(&self, x: &[Q]) -> QMatrix {
        (0..self.dim()).map(|j| self.mul(x, &basis_vector(self.dim(), j))).collect()
    }

    /// Trace of the regular representation.
    pub fn regular_trace(&self, x: &[Q]) -> Q {
        let m = self.left_mult_matrix(x);
        (0..self.dim()).map(|j| m[j][j].clone()).sum()
    }

    /// Every Hopf-algebra identity, checked exactly on the basis.
    pub fn check_axioms(&self) -> HopfAxioms {
        let n = self.dim();
        let e = |i: usize| basis_vector(n, i);
        let associative = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.mul(&self.mul(&e(i), &e(j)), &e(k)) == self.mul(&e(i), &self.mul(&e(j), &e(k)))))
        });
        let unital = (0..n).all(|i| self.mul(&self.unit, &e(i)) == e(i) && self.mul(&e(i), &self.unit) == e(i));
        let coassociative = (0..n).all(|i| {
            let d = &self.comult[i];
            // Σ_j d_i^{jc} d_j^{ab} = Σ_k d_i^{ak} d_k^{bc}
            (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|c| {
                        let lhs: Q = (0..n).map(|j| &d[j][c] * &self.comult[j][a][b]).sum();
                        let rhs: Q = (0..n).map(|k| &d[a][k] * &self.comult[k][b][c]).sum();
                        lhs == rhs
                    })
                })
            })
        });
        let counital = (0..n).all(|i| {
            let d = &self.comult[i];
            let left: Vec<Q> = (0..n).map(|k| (0..n).map(|j| &self.counit[j] * &d[j][k]).sum()).collect();
            let right: Vec<Q> = (0..n).map(|j| (0..n).map(|k| &self.counit[k] * &d[j][k]).sum()).collect();
            left == e(i) && right == e(i)
        });
        let antipode = (0..n).all(|i| {
            let d = &self.comult[i];
            let target: Vec<Q> = self.unit.iter().map(|u| u * &self.counit[i]).collect();
            let mut left = vec![Q::zero(); n];
            let mut right = vec![Q::zero(); n];
            for j in 0..n {
                for k in 0..n {
                    if d[j][k].is_zero() {
                        continue;
                    }
                    let l = self.mul(&self.antipode[j], &e(k));
                    let r = self.mul(&e(j), &self.antipode[k]);
                    for t in 0..n {
                        left[t] += &d[j][k] * &l[t];
                        right[t] += &d[j][k] * &r[t];
                    }
                }
            }
            left == target && right == target
        });
        let comult_multiplicative = (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = self.comult_of(&self.mult[i][j]);
                let mut rhs = linalg::zero_matrix(n, n);
                for p in 0..n {
                    for q in 0..n {
                        let dpq = &self.comult[i][p][q];
                        if dpq.is_zero() {
                            continue;
                        }
                        for r in 0..n {
                            for s in 0..n {
                                let drs = &self.comult[j][r][s];
                                if drs.is_zero() {
                                    continue;
                                }
                                let f = dpq * drs;
                                for (a, ma) in self.mult[p][r].iter().enumerate() {
                                    if ma.is_zero() {
                                        continue;
                                    }
                                    for (b, mb) in self.mult[q][s].iter().enumerate() {
                                        if !mb.is_zero() {
                                            rhs[a][b] += &f * ma * mb;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                lhs == rhs
            })
        }) && {
            let mut one_one = linalg::zero_matrix(n, n);
            for (a, ua) in self.unit.iter().enumerate() {
                for (b, ub) in self.unit.iter().enumerate() {
                    one_one[a][b] = ua * ub;
                }
            }
            self.comult_of(&self.unit) == one_one
        };
        let counit_multiplicative = (0..n)
            .all(|i| (0..n).all(|j| self.counit_of(&self.mult[i][j]) == &self.counit[i] * &self.counit[j]))
            && self.counit_of(&self.unit).is_one();
        let mult_commutative = (0..n).all(|i| (0..n).all(|j| self.mult[i][j] == self.mult[j][i]));
        HopfAxioms {
            associative,
            unital,
            coassociative,
            counital,
            antipode,
            comult_multiplicative,
            counit_multiplicative,
            commutativity_matches: mult_commutative == self.is_commutative(),
        }
    }

    /// `h·θ = ε(h)θ` for every basis element.
    pub fn theta_is_left_integral(&self) -> bool {
        (0..self.dim()).all(|i| {
            let lhs = self.mul(&basis_vector(self.dim(), i), &self.theta);
            let rhs: Vec<Q> = self.theta.iter().map(|t| t * &self.counit[i]).collect();
            lhs == rhs
        })
    }
}

pub fn basis_vector(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfAxioms {
    pub associative: bool,
    pub unital: bool,
    pub coassociative: bool,
    pub counital: bool,
    pub antipode: bool,
    pub comult_multiplicative: bool,
    pub counit_multiplicative: bool,
    pub commutativity_matches: bool,
}

impl HopfAxioms {
    pub fn all_hold(&self) -> bool {
        self.associative
            && self.unital
            && self.coassociative
            && self.counital
            && self.antipode
            && self.comult_multiplicative
            && self.counit_multiplicative
            && self.commutativity_matches
    }
}

/// Descends `E[N]` for one structure.
pub fn descend(setting: &Setting<'_>, sd: &StructureData) -> Result<HopfAlgebra> {
    let basis = fixed_algebra(setting, sd)?;
    structure_constants(setting.field, &sd.tables, basis)
}

/// `(Σ c_ν ν)·x = Σ c_ν g_ν(x)` with `g_ν ∈ ν⁻¹(1̄)` taken from `reps`.
pub fn act_on_l_with_reps(
    setting: &Setting<'_>,
    reps: &[usize],
    hopf: &HopfAlgebra,
    subfield: &SubfieldData,
    h: &[Q],
    x: &FieldElem,
) -> Result<FieldElem> {
    if !subfield.contains(x) {
        return Err(Error::InvalidArgument(format!("{x} is not an element of L")));
    }
    let z = hopf.to_group_alg(h);
    let field = setting.field;
    let mut out = field.zero();
    for (nu, c) in z.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&field.mul(c, &setting.galois.apply(reps[nu], x)));
        }
    }
    if !subfield.contains(&out) {
        return Err(Error::Internal("the action left L".into()));
    }
    Ok(out)
}

pub fn act_on_l(
    setting: &Setting<'_>,
    sd: &StructureData,
    hopf: &HopfAlgebra,
    subfield: &SubfieldData,
    h: &[Q],
    x: &FieldElem,
) -> Result<FieldElem> {
    act_on_l_with_reps(setting, &sd.action_reps, hopf, subfield, h, x)
}

/// Matrices of the basis of `H` acting on `L`: `on_ol[i][r]` holds the
/// integral-basis coordinates of `bᵢ·ω_r`, and `on_qbasis` the same for the
/// echelon ℚ-basis of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable {
    pub on_qbasis: Vec<QMatrix>,
    pub on_ol: Vec<QMatrix>,
}

impl ActionTable {
    /// `Σ yᵢ Tᵢ` on the integral basis.
    pub fn combine(&self, y: &[Q]) -> QMatrix {
        let n = self.on_ol.first().map_or(0, Vec::len);
        let mut out = linalg::zero_matrix(n, n);
        for (yi, t) in y.iter().zip(&self.on_ol) {
            if yi.is_zero() {
                continue;
            }
            for (orow, trow) in out.iter_mut().zip(t) {
                for (o, v) in orow.iter_mut().zip(trow) {
                    *o += yi * v;
                }
            }
        }
        out
    }

    /// Whether the unit of `H` acts as the identity.
    pub fn unit_acts_trivially(&self, hopf: &HopfAlgebra) -> bool {
        self.combine(hopf.unit()) == linalg::identity(self.combine(hopf.unit()).len())
    }
}

pub fn action_table(
    setting: &Setting<'_>,
    sd: &StructureData,
    hopf: &HopfAlgebra,
    subfield: &SubfieldData,
) -> Result<ActionTable> {
    let omegas = subfield.integral_basis();
    let qsolver = linalg::RowSolver::new(subfield.qbasis())?;
    let qelems: Vec<FieldElem> = subfield.qbasis().iter().map(|r| FieldElem::from_coeffs(r.clone())).collect();
    let n = hopf.dim();
    let mut on_ol = Vec::with_capacity(n);
    let mut on_qbasis = Vec::with_capacity(n);
    for i in 0..n {
        let e = basis_vector(n, i);
        let t = omegas
            .iter()
            .map(|w| {
                let y = act_on_l(setting, sd, hopf, subfield, &e, w)?;
                subfield.coords(&y).ok_or_else(|| Error::Internal("action left L".into()))
            })
            .collect::<Result<QMatrix>>()?;
        let tq = qelems
            .iter()
            .map(|w| {
                let y = act_on_l(setting, sd, hopf, subfield, &e, w)?;
                qsolver.coords(y.coeffs()).ok_or_else(|| Error::Internal("action left L".into()))
            })
            .collect::<Result<QMatrix>>()?;
        on_ol.push(t);
        on_qbasis.push(tq);
    }
    Ok(ActionTable { on_qbasis, on_ol })
}

/// Multiplication in `L` on integral-basis coordinates: `prod[r][s]` holds
/// the coordinates of `ω_r ω_s`.
pub fn l_multiplication(field: &NumberField, subfield: &SubfieldData) -> Result<Vec<QMatrix>> {
    let omegas = subfield.integral_basis();
    omegas
        .iter()
        .map(|a| {
            omegas
                .iter()
                .map(|b| subfield.coords(&field.mul(a, b)).ok_or_else(|| Error::Internal("L is not closed".into())))
                .collect()
        })
        .collect()
}

fn l_mul(prod: &[QMatrix], u: &[Q], v: &[Q]) -> Vec<Q> {
    let n = u.len();
    let mut out = vec![Q::zero(); n];
    for (r, ur) in u.iter().enumerate() {
        if ur.is_zero() {
            continue;
        }
        for (s, vs) in v.iter().enumerate() {
            if vs.is_zero() {
                continue;
            }
            let f = ur * vs;
            for (o, p) in out.iter_mut().zip(&prod[r][s]) {
                *o += &f * p;
            }
        }
    }
    out
}

/// Determinant certificate for `j: L ⊗ H → End_ℚ(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisMapCertificate {
    pub bijective: bool,
    pub det: Q,
}

/// Builds the `n² × n²` matrix of `j(ω_r ⊗ bᵢ): t ↦ ω_r (bᵢ·t)` and takes its
/// determinant.
pub fn galois_map_bijective(prod: &[QMatrix], table: &[QMatrix]) -> GaloisMapCertificate {
    let n = prod.len();
    let mut rows = Vec::with_capacity(n * n);
    for mult_r in prod {
        // mult_r[u] = coordinates of ω_r ω_u
        for t in table {
            let m = linalg::mat_mul(t, mult_r);
            rows.push(m.into_iter().flatten().collect::<Vec<Q>>());
        }
    }
    let det = linalg::det(&rows);
    GaloisMapCertificate { bijective: !det.is_zero(), det }
}

/// `h·(st) = Σ (h₍₁₎·s)(h₍₂₎·t)` and `h·1 = ε(h)1` on all basis triples.
pub fn module_algebra_check(prod: &[QMatrix], one: &[Q], hopf: &HopfAlgebra, table: &[QMatrix]) -> bool {
    let n = prod.len();
    let e = |r: usize| basis_vector(n, r);
    let act = |i: usize, v: &[Q]| linalg::vec_mat(v, &table[i]);
    let unit_ok = (0..hopf.dim()).all(|i| {
        act(i, one) == one.iter().map(|x| x * &hopf.counit()[i]).collect::<Vec<Q>>()
    });
    unit_ok
        && (0..hopf.dim()).all(|i| {
            let d = &hopf.comult()[i];
            (0..n).all(|r| {
                (0..n).all(|s| {
                    let lhs = act(i, &prod[r][s]);
                    let mut rhs = vec![Q::zero(); n];
                    for (j, drow) in d.iter().enumerate() {
                        for (k, djk) in drow.iter().enumerate() {
                            if djk.is_zero() {
                                continue;
                            }
                            let term = l_mul(prod, &act(j, &e(r)), &act(k, &e(s)));
                            for (o, t) in rhs.iter_mut().zip(term) {
                                *o += djk * t;
                            }
                        }
                    }
                    lhs == rhs
                })
            })
        })
}

/// `|det|` as an integer when it is one, for reports.
pub fn integer_or_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

/// Content of an integer vector, used to normalise witnesses.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}
