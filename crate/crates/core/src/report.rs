//! Serializable results. Exact rationals are strings `"a"` or `"a/b"`;
//! nothing is a float.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::descent::HopfAxioms;
use crate::error::{Error, Result};
use crate::freeness::{CriticalPrime, LeftIntegralCertificate, LocalFreeness, PrimeReason, Tameness, Verdict, VerdictStatus};
use crate::numfield::linalg::Q;
use crate::orders::Tri;
use crate::permcore::Fingerprint;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub fn q_str(x: &Q) -> String {
    x.to_string()
}

pub fn row_str(v: &[Q]) -> Vec<String> {
    v.iter().map(q_str).collect()
}

pub fn matrix_str(m: &[Vec<Q>]) -> Vec<Vec<String>> {
    m.iter().map(|r| row_str(r)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub instance: String,
    /// `[E:ℚ]`.
    pub field_degree: usize,
    /// `[L:ℚ]`, the number of points of `X`.
    pub extension_degree: usize,
    pub galois_order: usize,
    pub galois_abelian: bool,
    pub l_is_galois: bool,
    pub disc_ol: String,
    pub domestic: bool,
    pub structures: Vec<StructureReport>,
    pub stats: RunStats,
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub index: usize,
    pub fingerprint: Fingerprint,
    /// Images of the points of `X` under each generator of `N`.
    pub generators: Vec<Vec<usize>>,
    pub classical: bool,
    pub commutative: bool,
    pub checks: StructuralChecks,
    pub associated_order: OrderReport,
    pub fixed_point_order: OrderReport,
    /// `[𝔄_H : 𝒪_E[N]^G]`.
    pub fixed_point_index: Option<String>,
    /// `[𝔄_H : ℤ[N]]` when `N ⊂ H`.
    pub group_ring_index: Option<String>,
    /// `[𝔐 : 𝔄_H]` for the maximal order `𝔐` of a commutative `H`.
    pub maximal_order_index: Option<String>,
    pub critical: CriticalReport,
    pub left_integral: LeftIntegralCertificate,
    pub primes: Vec<PrimeReport>,
    pub global_generator: Option<Vec<i64>>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralChecks {
    pub dim_matches: bool,
    pub hopf_axioms: HopfAxioms,
    pub galois_map_bijective: bool,
    pub galois_map_det: String,
    pub module_algebra: bool,
    pub unit_acts_trivially: bool,
    pub theta_left_integral: bool,
    pub fixed_in_associated: bool,
    pub disc_chains: bool,
}

impl StructuralChecks {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let checks = [
            ("dimension", self.dim_matches),
            ("hopf axioms", self.hopf_axioms.all_hold()),
            ("galois map", self.galois_map_bijective),
            ("module algebra", self.module_algebra),
            ("unit action", self.unit_acts_trivially),
            ("left integral", self.theta_left_integral),
            ("fixed-point order inclusion", self.fixed_in_associated),
            ("discriminant chains", self.disc_chains),
        ];
        for (name, ok) in checks {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    /// Rows are coordinates in the descended basis of `H`.
    pub basis: Vec<Vec<String>>,
    pub disc: String,
    pub hopf: Tri,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub theta0: Option<Vec<i64>>,
    pub index: Option<String>,
    pub primes: Vec<CriticalPrime>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub reasons: Vec<PrimeReason>,
    pub unramified: bool,
    pub index_prime_to_p: bool,
    pub fixed_order_p_hopf: bool,
    pub associated_p_maximal: Option<bool>,
    pub local: Option<LocalFreeness>,
    pub local_error: Option<String>,
    pub tameness: Tameness,
}

/// Deterministic work counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub structures: usize,
    pub primes_checked: usize,
    pub residues_scanned: u64,
    pub max_points: usize,
    pub scan_budget: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub inconclusive: usize,
    /// Checks that could not be completed outside any applicable verdict.
    pub unresolved_checks: usize,
    pub structural_failures: Vec<String>,
}

impl Summary {
    pub fn from_structures(structures: &[StructureReport]) -> Summary {
        let mut s = Summary::default();
        for st in structures {
            for v in &st.verdicts {
                match v.status {
                    VerdictStatus::Pass => s.pass += 1,
                    VerdictStatus::Fail => s.fail += 1,
                    VerdictStatus::NotApplicable => s.not_applicable += 1,
                    VerdictStatus::Inconclusive => s.inconclusive += 1,
                }
            }
            s.unresolved_checks += st.primes.iter().filter(|p| p.local_error.is_some()).count();
            s.unresolved_checks += usize::from(st.critical.note.is_some());
            for f in st.checks.failures() {
                s.structural_failures.push(format!("structure {}: {f}", st.index));
            }
        }
        s
    }
}

impl Report {
    /// 0 when every applicable verdict passes, 1 on any failure, 2 when
    /// something stayed undecided.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 || !self.summary.structural_failures.is_empty() {
            1
        } else if self.summary.inconclusive > 0 || self.summary.unresolved_checks > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance {}", self.instance);
        let _ = writeln!(
            out,
            "[E:Q] = {}  [L:Q] = {}  |G| = {} ({})  L/Q {}  disc(O_L) = {}  domestic: {}",
            self.field_degree,
            self.extension_degree,
            self.galois_order,
            if self.galois_abelian { "abelian" } else { "nonabelian" },
            if self.l_is_galois { "Galois" } else { "not Galois" },
            self.disc_ol,
            yes_no(self.domestic)
        );
        out.push('\n');
        let mut rows = vec![row(&["#", "N", "classical", "H comm.", "checks", "[A:O_E[N]^G]", "[A:Z[N]]", "[M:A]", "global gen."])];
        for s in &self.structures {
            let failures = s.checks.failures();
            rows.push(vec![
                s.index.to_string(),
                s.fingerprint.to_string(),
                yes_no(s.classical).into(),
                yes_no(s.commutative).into(),
                if failures.is_empty() { "ok".into() } else { failures.join(",") },
                opt(&s.fixed_point_index),
                opt(&s.group_ring_index),
                opt(&s.maximal_order_index),
                s.global_generator.as_ref().map_or("-".into(), |v| format!("{v:?}")),
            ]);
        }
        out.push_str(&table(&rows));
        for s in &self.structures {
            let _ = writeln!(out, "\nstructure {}: {}", s.index, s.fingerprint);
            let _ = writeln!(
                out,
                "  disc(A) = {}  disc(O_E[N]^G) = {}  A Hopf: {:?}  det j = {}",
                s.associated_order.disc, s.fixed_point_order.disc, s.associated_order.hopf, s.checks.galois_map_det
            );
            if let Some(note) = &s.critical.note {
                let _ = writeln!(out, "  critical sweep: {note}");
            }
            let mut rows = vec![row(&["p", "reasons", "unram.", "p∤index", "p-Hopf", "p-max", "tame(4)", "free", "witness"])];
            for p in &s.primes {
                let reasons: Vec<String> = p.reasons.iter().map(|r| format!("{r:?}")).collect();
                let free = match (&p.local, &p.local_error) {
                    (Some(l), _) => yes_no(l.free).to_string(),
                    (None, Some(_)) => "undecided".into(),
                    _ => "-".into(),
                };
                rows.push(vec![
                    p.p.to_string(),
                    reasons.join(","),
                    yes_no(p.unramified).into(),
                    yes_no(p.index_prime_to_p).into(),
                    yes_no(p.fixed_order_p_hopf).into(),
                    p.associated_p_maximal.map_or("-".into(), |b| yes_no(b).into()),
                    yes_no(p.tameness.trace_surjective).into(),
                    free,
                    p.local.as_ref().and_then(|l| l.witness.as_ref()).map_or("-".into(), |w| format!("{w:?}")),
                ]);
            }
            out.push_str(&indent(&table(&rows)));
            let mut rows = vec![row(&["verdict", "p", "status", "detail"])];
            for v in &s.verdicts {
                rows.push(vec![
                    format!("{:?}", v.tag),
                    v.prime.map_or("-".into(), |p| p.to_string()),
                    format!("{:?}", v.status),
                    v.detail.clone(),
                ]);
            }
            out.push_str(&indent(&table(&rows)));
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\nverdicts: {} pass, {} fail, {} not applicable, {} inconclusive; unresolved checks: {}; structural failures: {}",
            s.pass,
            s.fail,
            s.not_applicable,
            s.inconclusive,
            s.unresolved_checks,
            s.structural_failures.len()
        );
        let _ = writeln!(
            out,
            "work: {} structures, {} prime checks, {} residues scanned",
            self.stats.structures, self.stats.primes_checked, self.stats.residues_scanned
        );
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt(s: &Option<String>) -> String {
    s.clone().unwrap_or_else(|| "-".into())
}

fn row(cells: &[&str]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

/// Left-aligned columns separated by two spaces, with a rule under the header.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    out
}

/// Output of `enumerate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub schema_version: u32,
    pub instance: String,
    pub points: usize,
    pub structures: Vec<EnumeratedStructure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedStructure {
    pub index: usize,
    pub fingerprint: Fingerprint,
    pub commutative: bool,
    pub classical: bool,
    pub generators: Vec<Vec<usize>>,
    pub elements: Vec<Vec<usize>>,
}

impl EnumerationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn render_text(&self) -> String {
        let mut rows = vec![row(&["#", "|N|", "N", "commutative", "classical", "generators"])];
        for s in &self.structures {
            rows.push(vec![
                s.index.to_string(),
                s.fingerprint.order.to_string(),
                s.fingerprint.to_string(),
                yes_no(s.commutative).into(),
                yes_no(s.classical).into(),
                format!("{:?}", s.generators),
            ]);
        }
        format!("instance {}: {} points, {} structures\n{}", self.instance, self.points, self.structures.len(), table(&rows))
    }
}

/// Output of `build`: the descended Hopf algebra of one structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfReport {
    pub schema_version: u32,
    pub instance: String,
    pub structure: usize,
    pub fingerprint: Fingerprint,
    /// `basis[i][ν]` lists the power-basis coefficients of `c_{iν} ∈ E`.
    pub basis: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
    pub theta: Vec<String>,
    pub counit: Vec<String>,
    /// `mult[i][j]` is `bᵢ bⱼ`.
    pub mult: Vec<Vec<Vec<String>>>,
    /// `comult[i][j][k]` is the coefficient of `bⱼ ⊗ b_k` in `Δ(bᵢ)`.
    pub comult: Vec<Vec<Vec<String>>>,
    /// Row `i` is `S(bᵢ)`.
    pub antipode: Vec<Vec<String>>,
    /// `action[i][r]` is `bᵢ·ω_r` on the integral basis of `𝒪_L`.
    pub action: Vec<Vec<Vec<String>>>,
    pub axioms: HopfAxioms,
}

impl HopfReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("instance {} structure {}: {}\n", self.instance, self.structure, self.fingerprint);
        let n = self.unit.len();
        let _ = writeln!(out, "unit = {:?}\ntheta = {:?}\ncounit = {:?}", self.unit, self.theta, self.counit);
        for i in 0..n {
            let _ = writeln!(out, "b{i} = {:?}", self.basis[i]);
        }
        let mut rows = vec![std::iter::once("b_i b_j".to_string()).chain((0..n).map(|j| format!("b{j}"))).collect()];
        for i in 0..n {
            rows.push(std::iter::once(format!("b{i}")).chain(self.mult[i].iter().map(|v| format!("{v:?}"))).collect());
        }
        out.push_str(&table(&rows));
        for i in 0..n {
            let _ = writeln!(out, "Δ(b{i}) = {:?}", self.comult[i]);
            let _ = writeln!(out, "S(b{i}) = {:?}", self.antipode[i]);
            let _ = writeln!(out, "b{i} on O_L = {:?}", self.action[i]);
        }
        let _ = writeln!(out, "axioms hold: {}", yes_no(self.axioms.all_hold()));
        out
    }
}
