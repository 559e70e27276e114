//! Local and global freeness of `𝒪_L` over an order of `H`, `H`-tameness
//! through the trace element, and the verdicts tying them together.
//!
//! Elements of `𝒪_L` are integer coordinate vectors in the integral basis.
//! For an order `Λ` with basis `λ_a`, the matrix `R_a = Σᵢ λ_a[i] Tᵢ` maps
//! `θ` to `λ_a·θ`; `θ` generates `Λθ` of index `|det(θ R_a)_a|`.

use itertools::Itertools;
use num::{BigInt, Integer, One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{ActionTable, HopfAlgebra};
use crate::error::{Error, Result};
use crate::numfield::linalg::{self, QMatrix, Q};
use crate::orders::ZOrder;

/// Default residue-scan budget for [`local_free`].
pub const DEFAULT_SCAN_BUDGET: u64 = 1_000_000;

/// Default height bound of the sweep for a finite-index `θ₀`.
pub const CRITICAL_SWEEP_HEIGHT: i64 = 3;

/// The matrices `R_a` of an order acting on `𝒪_L`; all entries integral.
#[derive(Clone, Debug)]
pub struct OrderAction {
    mats: Vec<QMatrix>,
}

impl OrderAction {
    pub fn new(order: &ZOrder, table: &ActionTable) -> Result<OrderAction> {
        let mats: Vec<QMatrix> = order.basis().iter().map(|row| table.combine(row)).collect();
        if !mats.iter().flatten().all(|r| linalg::is_integral(r)) {
            return Err(Error::InvalidArgument("the order does not preserve 𝒪_L".into()));
        }
        Ok(OrderAction { mats })
    }

    pub fn rank(&self) -> usize {
        self.mats.len()
    }

    /// Rows `λ_a·θ` in integral-basis coordinates.
    pub fn orbit_matrix(&self, theta: &[Q]) -> QMatrix {
        self.mats.iter().map(|m| linalg::vec_mat(theta, m)).collect()
    }

    /// `[𝒪_L : Λθ]`, or `None` when `Λθ` has lower rank.
    pub fn index(&self, theta: &[Q]) -> Option<BigInt> {
        let d = linalg::det(&self.orbit_matrix(theta));
        (!d.is_zero()).then(|| d.abs().to_integer())
    }

    fn mod_p(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        self.mats
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|x| linalg::reduce_mod_p(x, p).unwrap_or(0)).collect()).collect())
            .collect()
    }
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect()
}

/// Nonzero integer vectors of height `1..=bound`: smaller height first, then
/// coordinates in the order `0, 1, −1, 2, −2, …` with the first coordinate
/// varying fastest.
pub fn height_sweep(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |h| {
        let values: Vec<i64> = std::iter::once(0).chain((1..=h).flat_map(|v| [v, -v])).collect();
        (0..n)
            .map(|_| values.clone())
            .multi_cartesian_product()
            .map(|mut v| {
                v.reverse();
                v
            })
            .filter(move |v| v.iter().any(|c| c.abs() == h))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeReason {
    DividesIndex,
    DividesDegree,
    DividesDisc,
    Requested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPrime {
    pub p: u64,
    pub reasons: Vec<PrimeReason>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    /// The first finite-index element of the sweep.
    pub theta0: Vec<i64>,
    pub index: BigInt,
    pub primes: Vec<CriticalPrime>,
}

/// Primes where freeness of `𝒪_L` over `Λ` is not automatic. Away from the
/// primes of `[𝒪_L : Λθ₀]`, `θ₀` itself generates.
pub fn critical_primes(action: &OrderAction, degree: usize, disc: &BigInt, bound: i64) -> Result<CriticalSet> {
    let n = action.rank();
    let (theta0, index) = height_sweep(n, bound)
        .find_map(|v| action.index(&to_q(&v)).map(|i| (v, i)))
        .ok_or_else(|| Error::Inconclusive(format!("no element of height ≤ {bound} generates a full-rank submodule")))?;
    let mut primes: Vec<CriticalPrime> = Vec::new();
    let mut add = |p: u64, r: PrimeReason| match primes.iter_mut().find(|c| c.p == p) {
        Some(c) => c.reasons.push(r),
        None => primes.push(CriticalPrime { p, reasons: vec![r] }),
    };
    for p in linalg::prime_factors(&index) {
        add(p, PrimeReason::DividesIndex);
    }
    for p in linalg::prime_factors(&BigInt::from(degree)) {
        add(p, PrimeReason::DividesDegree);
    }
    for p in linalg::prime_factors(disc) {
        add(p, PrimeReason::DividesDisc);
    }
    primes.sort_by_key(|c| c.p);
    Ok(CriticalSet { theta0, index, primes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFreeness {
    pub p: u64,
    pub free: bool,
    /// Residues of the first generator in scan order.
    pub witness: Option<Vec<u64>>,
    /// `[𝒪_L : Λθ]` for the lifted witness, prime to `p`.
    pub witness_index: Option<String>,
    pub scanned: u64,
}

/// Exhaustive Nakayama scan of `𝒪_L/p` for a generator over `Λ/p`.
///
/// Residue vectors are numbered with the first coordinate as the least
/// significant base-`p` digit; the witness is the smallest number that works.
/// `free == false` means no residue class generates, which proves `𝒪_L ⊗ ℤ_p`
/// is not free over `Λ ⊗ ℤ_p`.
pub fn local_free(action: &OrderAction, p: u64, budget: u64) -> Result<LocalFreeness> {
    if !linalg::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let n = action.rank();
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&t| t <= budget));
    let Some(total) = total else {
        return Err(Error::ResourceLimit(format!("scan of {p}^{n} residues exceeds the budget {budget}")));
    };
    let mats = action.mod_p(p);
    let digits = |mut k: u64| -> Vec<u64> {
        (0..n)
            .map(|_| {
                let d = k % p;
                k /= p;
                d
            })
            .collect()
    };
    let generates = |theta: &[u64]| {
        let rows: Vec<Vec<u64>> = mats
            .iter()
            .map(|m| {
                (0..n).map(|c| theta.iter().zip(m).fold(0u64, |acc, (t, row)| (acc + t * row[c] % p) % p)).collect()
            })
            .collect();
        linalg::rank_mod_p(&rows, p) == n
    };
    let found = (0..total).into_par_iter().find_first(|&k| generates(&digits(k)));
    match found {
        Some(k) => {
            let witness = digits(k);
            let lifted: Vec<Q> = witness.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect();
            let index = action.index(&lifted).ok_or_else(|| Error::Internal("generator has zero index".into()))?;
            if index.is_multiple_of(&BigInt::from(p)) {
                return Err(Error::Internal(format!("lifted witness has index {index} divisible by {p}")));
            }
            Ok(LocalFreeness { p, free: true, witness: Some(witness), witness_index: Some(index.to_string()), scanned: k + 1 })
        }
        None => Ok(LocalFreeness { p, free: false, witness: None, witness_index: None, scanned: total }),
    }
}

/// First element of the height sweep generating `𝒪_L` over `Λ`; absence
/// proves nothing.
pub fn global_generator_search(action: &OrderAction, bound: i64) -> Option<Vec<i64>> {
    height_sweep(action.rank(), bound).find(|v| action.index(&to_q(v)).is_some_and(|i| i.is_one()))
}

/// The prime-independent part of the four tameness conditions for `Λ₀` and
/// the trace element `θ = Σ ν`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftIntegralCertificate {
    /// Fixed points of the action are exactly `ℚ·1`.
    pub fixed_points_trivial: bool,
    /// `rank_ℤ 𝒪_L = rank_ℤ Λ₀`.
    pub rank_equal: bool,
    /// The basis of `H` acts by linearly independent matrices.
    pub faithful: bool,
    /// `hθ = ε(h)θ` on the basis of `H`.
    pub theta_left_integral: bool,
    pub theta_in_order: bool,
    /// `θ·𝒪_L = gℤ`.
    pub trace_generator: String,
    /// `t ∈ 𝒪_L` with `θ·t = g`.
    pub t_witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tameness {
    pub p: u64,
    pub fixed_points_trivial: bool,
    pub rank_equal: bool,
    pub faithful: bool,
    /// `θ·t = 1` is solvable over `ℤ_(p)`.
    pub trace_surjective: bool,
}

impl Tameness {
    pub fn holds(&self) -> bool {
        self.fixed_points_trivial && self.rank_equal && self.faithful && self.trace_surjective
    }
}

pub fn left_integral(hopf: &HopfAlgebra, lambda0: &ZOrder, table: &ActionTable, one: &[Q]) -> Result<LeftIntegralCertificate> {
    let n = hopf.dim();
    let stacked: QMatrix = (0..n)
        .map(|r| {
            table
                .on_ol
                .iter()
                .zip(hopf.counit())
                .flat_map(|(t, e)| (0..n).map(move |c| if r == c { &t[r][c] - e } else { t[r][c].clone() }))
                .collect()
        })
        .collect();
    let fixed = linalg::left_kernel(&stacked);
    let fixed_points_trivial = fixed.len() == 1 && linalg::rank(&[fixed[0].clone(), one.to_vec()]) == 1;
    let flat: QMatrix = table.on_ol.iter().map(|t| t.iter().flatten().cloned().collect()).collect();
    let faithful = linalg::rank(&flat) == n;
    let r_theta = table.combine(hopf.theta());
    // θ·ω_r = t_r·1
    let pivot = one.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::Internal("1 has zero coordinates".into()))?;
    let mut traces = Vec::with_capacity(n);
    for row in &r_theta {
        let t = &row[pivot] / &one[pivot];
        if row.iter().zip(one).any(|(a, b)| a != &(&t * b)) || !t.is_integer() {
            return Err(Error::Internal("θ·𝒪_L is not contained in ℤ".into()));
        }
        traces.push(t.to_integer());
    }
    let (g, coeffs) = extended_gcd(&traces);
    Ok(LeftIntegralCertificate {
        fixed_points_trivial,
        rank_equal: lambda0.dim() == n && one.len() == n,
        faithful,
        theta_left_integral: hopf.theta_is_left_integral(),
        theta_in_order: lambda0.contains(hopf.theta()),
        trace_generator: g.to_string(),
        t_witness: coeffs.iter().map(ToString::to_string).collect(),
    })
}

impl LeftIntegralCertificate {
    pub fn at(&self, p: u64) -> Tameness {
        let g: BigInt = self.trace_generator.parse().unwrap_or_default();
        Tameness {
            p,
            fixed_points_trivial: self.fixed_points_trivial,
            rank_equal: self.rank_equal,
            faithful: self.faithful,
            trace_surjective: !g.is_zero() && !g.is_multiple_of(&BigInt::from(p)),
        }
    }
}

/// `g = gcd(xs) ≥ 0` with `Σ cᵢ xᵢ = g`.
pub fn extended_gcd(xs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); xs.len()];
    for (i, x) in xs.iter().enumerate() {
        let e = g.extended_gcd(x);
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in &mut coeffs {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictTag {
    /// Unramified primes of an abelian Galois `L`: `𝔄_H` and `𝒪_L[N]^G` agree
    /// at `p` and `𝒪_L` is free there.
    UnramifiedFreeness,
    /// Commutative `H`, `p ∤ [L:ℚ]`: `𝔄_H` is the maximal order at `p` and
    /// `𝒪_L` is free there.
    TameMaximalFreeness,
    /// Domestic abelian Galois `L`, commutative `H`: `𝔄_H = 𝒪_L[N]^G` and
    /// `𝒪_L` is locally free.
    DomesticLocalFreeness,
    /// Tame abelian Galois `L` of prime-power degree, commutative `H`: `𝒪_L`
    /// is locally free.
    PrimePowerTame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    NotApplicable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub prime: Option<u64>,
    pub hypotheses: bool,
    pub status: VerdictStatus,
    pub detail: String,
}

/// Prime-local results feeding the verdicts. `None` marks a check that could
/// not be completed.
#[derive(Clone, Debug)]
pub struct PrimeFacts {
    pub p: u64,
    pub unramified: bool,
    /// `p ∤ [𝔄_H : 𝒪_E[N]^G]`.
    pub index_prime_to_p: bool,
    pub fixed_order_p_hopf: bool,
    pub tameness: Tameness,
    pub associated_p_maximal: Option<bool>,
    pub local_free: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct InstanceFacts {
    pub degree: usize,
    pub galois_abelian: bool,
    /// `L = E`.
    pub galois_l: bool,
    pub commutative_h: bool,
    pub domestic: bool,
    pub prime_power_base: Option<u64>,
    pub index_is_one: bool,
}

fn conclude(checks: &[(&str, Option<bool>)]) -> (VerdictStatus, String) {
    let failed: Vec<&str> = checks.iter().filter(|(_, c)| *c == Some(false)).map(|(n, _)| *n).collect();
    let open: Vec<&str> = checks.iter().filter(|(_, c)| c.is_none()).map(|(n, _)| *n).collect();
    if !failed.is_empty() {
        (VerdictStatus::Fail, format!("failed: {}", failed.join(", ")))
    } else if !open.is_empty() {
        (VerdictStatus::Inconclusive, format!("undecided: {}", open.join(", ")))
    } else {
        (VerdictStatus::Pass, checks.iter().map(|(n, _)| *n).join(", "))
    }
}

fn verdict(tag: VerdictTag, prime: Option<u64>, hypotheses: Vec<(&str, bool)>, checks: &[(&str, Option<bool>)]) -> Verdict {
    let missing: Vec<&str> = hypotheses.iter().filter(|(_, h)| !h).map(|(n, _)| *n).collect();
    if !missing.is_empty() {
        return Verdict {
            tag,
            prime,
            hypotheses: false,
            status: VerdictStatus::NotApplicable,
            detail: format!("not satisfied: {}", missing.join(", ")),
        };
    }
    let (status, detail) = conclude(checks);
    Verdict { tag, prime, hypotheses: true, status, detail }
}

/// Evaluates every verdict on the checked primes. Instance-wide verdicts
/// require local freeness at each of the given primes.
pub fn theorem_verdicts(facts: &InstanceFacts, primes: &[PrimeFacts]) -> Vec<Verdict> {
    let mut out = Vec::new();
    let abelian_galois = facts.galois_abelian && facts.galois_l;
    for pf in primes {
        out.push(verdict(
            VerdictTag::UnramifiedFreeness,
            Some(pf.p),
            vec![("abelian Galois", abelian_galois), ("p unramified", pf.unramified)],
            &[
                ("p ∤ index", Some(pf.index_prime_to_p)),
                ("fixed-point order p-Hopf", Some(pf.fixed_order_p_hopf)),
                ("θ·t = 1 solvable", Some(pf.tameness.trace_surjective)),
                ("locally free", pf.local_free),
            ],
        ));
        out.push(verdict(
            VerdictTag::TameMaximalFreeness,
            Some(pf.p),
            vec![("H commutative", facts.commutative_h), ("p ∤ degree", !(facts.degree as u64).is_multiple_of(pf.p))],
            &[
                ("p ∤ index", Some(pf.index_prime_to_p)),
                ("associated order p-maximal", pf.associated_p_maximal),
                ("locally free", pf.local_free),
            ],
        ));
    }
    let all_free: Vec<(&str, Option<bool>)> = primes.iter().map(|pf| ("locally free at critical primes", pf.local_free)).collect();
    let mut domestic_checks = vec![("index 1", Some(facts.index_is_one))];
    domestic_checks.extend(all_free.iter().cloned());
    out.push(verdict(
        VerdictTag::DomesticLocalFreeness,
        None,
        vec![("abelian Galois", abelian_galois), ("domestic", facts.domestic), ("H commutative", facts.commutative_h)],
        &dedup(domestic_checks),
    ));
    out.push(verdict(
        VerdictTag::PrimePowerTame,
        None,
        vec![
            ("abelian Galois", abelian_galois),
            ("prime-power degree", facts.prime_power_base.is_some()),
            // for prime-power degree, tame is the same as domestic
            ("tame", facts.domestic),
            ("H commutative", facts.commutative_h),
        ],
        &dedup(all_free),
    ));
    out
}

/// Merges repeated check names, keeping the weakest outcome.
fn dedup(checks: Vec<(&str, Option<bool>)>) -> Vec<(&str, Option<bool>)> {
    let mut out: Vec<(&str, Option<bool>)> = Vec::new();
    for (name, c) in checks {
        match out.iter_mut().find(|(n, _)| *n == name) {
            Some((_, prev)) => {
                *prev = match (*prev, c) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (None, _) | (_, None) => None,
                    _ => Some(true),
                }
            }
            None => out.push((name, c)),
        }
    }
    if out.is_empty() {
        out.push(("locally free at critical primes", Some(true)));
    }
    out
}
