//! Enumerate → descend → orders → freeness, for every structure of an
//! instance.

use num::{BigInt, Integer, One};
use rayon::prelude::*;

use crate::descent::{self, ActionTable, HopfAlgebra, StructureData};
use crate::error::{Error, Result};
use crate::freeness::{self, CriticalPrime, InstanceFacts, OrderAction, PrimeFacts, PrimeReason};
use crate::instance::{Instance, InstanceSpec};
use crate::numfield::{self, linalg};
use crate::orders::{self, ZOrder};
use crate::permcore::{self, Perm, PermGroup};
use crate::report::{
    self, CriticalReport, EnumeratedStructure, EnumerationReport, HopfReport, OrderReport, PrimeReport, Report, RunStats,
    StructuralChecks, StructureReport, Summary, REPORT_SCHEMA_VERSION,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_points: usize,
    pub scan_budget: u64,
    /// Primes checked besides the critical ones.
    pub primes: Vec<u64>,
    /// Height bound of the global generator search; `None` skips it.
    pub global_search: Option<i64>,
    pub sweep_height: i64,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            max_points: permcore::DEFAULT_MAX_POINTS,
            scan_budget: freeness::DEFAULT_SCAN_BUDGET,
            primes: Vec::new(),
            global_search: Some(1),
            sweep_height: freeness::CRITICAL_SWEEP_HEIGHT,
        }
    }
}

impl Options {
    /// Defaults overridden by the instance file's options.
    pub fn for_spec(spec: &InstanceSpec) -> Options {
        let d = Options::default();
        Options {
            max_points: spec.options.max_points.unwrap_or(d.max_points),
            scan_budget: spec.options.scan_budget.unwrap_or(d.scan_budget),
            primes: spec.options.primes.clone(),
            global_search: spec.options.global_search.or(d.global_search),
            sweep_height: d.sweep_height,
        }
    }
}

/// Regular subgroups of `Perm(X)` normalised by `λ(G)`, in canonical order.
pub fn enumerate_structures(inst: &Instance, max_points: usize) -> Result<Vec<PermGroup>> {
    permcore::enumerate_regular_normalized(&inst.cosets, &inst.lambda, max_points)
}

/// Whether `N` is the image of the right regular action, i.e. `H = ℚ[G]`.
fn is_classical(inst: &Instance, group: &PermGroup) -> bool {
    permcore::right_regular_embedding(inst.galois.table(), &inst.cosets)
        .and_then(|rho| PermGroup::generate(inst.cosets.len(), &rho).ok())
        .is_some_and(|rho| rho.elements() == group.elements())
}

/// Greedy generating set: each element not yet generated, in element order.
fn generators(group: &PermGroup) -> Vec<Vec<usize>> {
    let n = group.degree();
    let mut gens: Vec<Perm> = Vec::new();
    let mut span = PermGroup::generate(n, &[]).expect("trivial group");
    for p in group.elements() {
        if !span.contains(p) {
            gens.push(p.clone());
            span = PermGroup::generate(n, &gens).expect("subgroup of a finite group");
        }
    }
    gens.iter().map(|g| g.images().to_vec()).collect()
}

pub fn enumeration_report(inst: &Instance, opts: &Options) -> Result<EnumerationReport> {
    let groups = enumerate_structures(inst, opts.max_points)?;
    Ok(EnumerationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: inst.spec.name.clone(),
        points: inst.degree(),
        structures: groups
            .iter()
            .enumerate()
            .map(|(index, g)| EnumeratedStructure {
                index,
                fingerprint: permcore::group_fingerprint(g),
                commutative: g.is_abelian(),
                classical: is_classical(inst, g),
                generators: generators(g),
                elements: g.elements().iter().map(|p| p.images().to_vec()).collect(),
            })
            .collect(),
    })
}

/// Descent data of one structure.
pub struct Descended {
    pub structure: StructureData,
    pub hopf: HopfAlgebra,
    pub table: ActionTable,
}

pub fn descend_structure(inst: &Instance, group: PermGroup) -> Result<Descended> {
    let setting = inst.setting();
    let structure = StructureData::new(&setting, group)?;
    let hopf = descent::descend(&setting, &structure)?;
    let table = descent::action_table(&setting, &structure, &hopf, &inst.subfield)?;
    Ok(Descended { structure, hopf, table })
}

pub fn build_report(inst: &Instance, index: usize, opts: &Options) -> Result<HopfReport> {
    let groups = enumerate_structures(inst, opts.max_points)?;
    let count = groups.len();
    let group = groups
        .into_iter()
        .nth(index)
        .ok_or_else(|| Error::InvalidArgument(format!("structure {index} does not exist ({count} structures)")))?;
    let fingerprint = permcore::group_fingerprint(&group);
    let d = descend_structure(inst, group)?;
    let h = &d.hopf;
    Ok(HopfReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: inst.spec.name.clone(),
        structure: index,
        fingerprint,
        basis: h.basis().iter().map(|b| b.coeffs().iter().map(|c| report::row_str(c.coeffs())).collect()).collect(),
        unit: report::row_str(h.unit()),
        theta: report::row_str(h.theta()),
        counit: report::row_str(h.counit()),
        mult: h.mult().iter().map(|m| report::matrix_str(m)).collect(),
        comult: h.comult().iter().map(|m| report::matrix_str(m)).collect(),
        antipode: report::matrix_str(h.antipode()),
        action: d.table.on_ol.iter().map(|m| report::matrix_str(m)).collect(),
        axioms: h.check_axioms(),
    })
}

fn order_report(o: &ZOrder) -> OrderReport {
    OrderReport { basis: report::matrix_str(o.basis()), disc: o.disc.to_string(), hopf: o.is_hopf }
}

fn instance_facts(inst: &Instance, commutative_h: bool, index_is_one: bool) -> InstanceFacts {
    let degree = inst.degree();
    let galois_l = inst.gprime.len() == 1;
    InstanceFacts {
        degree,
        galois_abelian: inst.galois.table().is_abelian(),
        galois_l,
        commutative_h,
        domestic: galois_l && numfield::is_domestic(&inst.subfield, degree),
        prime_power_base: numfield::prime_power_base(degree),
        index_is_one,
    }
}

/// Every check on one structure.
pub fn analyse_structure(inst: &Instance, index: usize, group: PermGroup, opts: &Options) -> Result<StructureReport> {
    let fingerprint = permcore::group_fingerprint(&group);
    let classical = is_classical(inst, &group);
    let gens = generators(&group);
    let Descended { hopf, table, .. } = descend_structure(inst, group)?;
    let n = inst.degree();
    let commutative = hopf.is_commutative();

    let prod = descent::l_multiplication(&inst.field, &inst.subfield)?;
    let one = inst.subfield.coords(&inst.field.one()).ok_or_else(|| Error::Internal("1 ∉ L".into()))?;
    let cert = descent::galois_map_bijective(&prod, &table.on_ol);

    let assoc = orders::associated_order(&hopf, &table)?;
    let fixed = orders::fixed_point_order(&hopf, &inst.oe)?;
    let inclusion = orders::inclusion_and_index(&fixed, &assoc)?;
    let mut chains = Vec::new();
    if inclusion.included {
        chains.push(orders::discriminant_chain_holds(&fixed, &assoc)?);
    }
    let group_ring = match orders::group_ring_order(&hopf) {
        Ok(zg) => Some(zg),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let group_ring_index = match &group_ring {
        Some(zg) => {
            let inc = orders::inclusion_and_index(zg, &assoc)?;
            if inc.included {
                chains.push(orders::discriminant_chain_holds(zg, &assoc)?);
            }
            inc.index.map(|i| i.to_string())
        }
        None => None,
    };
    let maximal_order_index = if commutative {
        let m = orders::maximal_overorder(&hopf, &assoc)?;
        chains.push(orders::discriminant_chain_holds(&assoc, &m)?);
        Some(assoc.lattice().index_in(m.lattice())?.to_string())
    } else {
        None
    };

    let action = OrderAction::new(&assoc, &table)?;
    let critical = freeness::critical_primes(&action, n, inst.subfield.disc(), opts.sweep_height);
    let (critical_report, mut checked) = match critical {
        Ok(c) => (
            CriticalReport { theta0: Some(c.theta0.clone()), index: Some(c.index.to_string()), primes: c.primes.clone(), note: None },
            c.primes,
        ),
        Err(Error::Inconclusive(msg)) => {
            let mut primes: Vec<CriticalPrime> = Vec::new();
            for (value, reason) in [(BigInt::from(n), PrimeReason::DividesDegree), (inst.subfield.disc().clone(), PrimeReason::DividesDisc)] {
                for p in linalg::prime_factors(&value) {
                    match primes.iter_mut().find(|c| c.p == p) {
                        Some(c) => c.reasons.push(reason),
                        None => primes.push(CriticalPrime { p, reasons: vec![reason] }),
                    }
                }
            }
            primes.sort_by_key(|c| c.p);
            (CriticalReport { theta0: None, index: None, primes: primes.clone(), note: Some(msg) }, primes)
        }
        Err(e) => return Err(e),
    };
    for &p in &opts.primes {
        if !linalg::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        match checked.iter_mut().find(|c| c.p == p) {
            Some(c) => c.reasons.push(PrimeReason::Requested),
            None => checked.push(CriticalPrime { p, reasons: vec![PrimeReason::Requested] }),
        }
    }
    checked.sort_by_key(|c| c.p);

    let left = freeness::left_integral(&hopf, &fixed, &table, &one)?;
    let fp_index = inclusion.index.clone();
    let primes = checked
        .par_iter()
        .map(|cp| -> Result<PrimeReport> {
            let p = cp.p;
            let p_max = if commutative { Some(orders::p_maximal(&hopf, &assoc, p)?.maximal) } else { None };
            let (local, local_error) = match freeness::local_free(&action, p, opts.scan_budget) {
                Ok(l) => (Some(l), None),
                Err(Error::ResourceLimit(msg)) => (None, Some(msg)),
                Err(e) => return Err(e),
            };
            Ok(PrimeReport {
                p,
                reasons: cp.reasons.clone(),
                unramified: numfield::is_unramified(p, &inst.subfield),
                index_prime_to_p: fp_index.as_ref().is_some_and(|i| !i.is_multiple_of(&BigInt::from(p))),
                fixed_order_p_hopf: orders::p_is_hopf_order(&hopf, fixed.lattice(), p),
                associated_p_maximal: p_max,
                local,
                local_error,
                tameness: left.at(p),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let global_generator = opts.global_search.and_then(|b| freeness::global_generator_search(&action, b));
    let facts = instance_facts(inst, commutative, fp_index.as_ref().is_some_and(One::is_one));
    let prime_facts: Vec<PrimeFacts> = primes
        .iter()
        .map(|p| PrimeFacts {
            p: p.p,
            unramified: p.unramified,
            index_prime_to_p: p.index_prime_to_p,
            fixed_order_p_hopf: p.fixed_order_p_hopf,
            tameness: p.tameness.clone(),
            associated_p_maximal: p.associated_p_maximal,
            local_free: p.local.as_ref().map(|l| l.free),
        })
        .collect();
    let verdicts = freeness::theorem_verdicts(&facts, &prime_facts);

    Ok(StructureReport {
        index,
        fingerprint,
        generators: gens,
        classical,
        commutative,
        checks: StructuralChecks {
            dim_matches: hopf.dim() == n && inst.subfield.degree() == n,
            hopf_axioms: hopf.check_axioms(),
            galois_map_bijective: cert.bijective,
            galois_map_det: cert.det.to_string(),
            module_algebra: descent::module_algebra_check(&prod, &one, &hopf, &table.on_ol),
            unit_acts_trivially: table.unit_acts_trivially(&hopf),
            theta_left_integral: left.theta_left_integral,
            fixed_in_associated: inclusion.included,
            disc_chains: chains.iter().all(|&c| c),
        },
        associated_order: order_report(&assoc),
        fixed_point_order: order_report(&fixed),
        fixed_point_index: inclusion.index.map(|i| i.to_string()),
        group_ring_index,
        maximal_order_index,
        critical: critical_report,
        left_integral: left,
        primes,
        global_generator,
        verdicts,
    })
}

/// The full pipeline. Work fans out over structures and primes on the
/// current rayon pool; the report does not depend on the pool size.
pub fn run_pipeline(spec: &InstanceSpec, opts: &Options) -> Result<Report> {
    let inst = spec.build()?;
    let groups = enumerate_structures(&inst, opts.max_points)?;
    let structures = groups
        .into_par_iter()
        .enumerate()
        .map(|(i, g)| analyse_structure(&inst, i, g, opts))
        .collect::<Result<Vec<_>>>()?;
    let stats = RunStats {
        structures: structures.len(),
        primes_checked: structures.iter().map(|s| s.primes.len()).sum(),
        residues_scanned: structures.iter().flat_map(|s| &s.primes).filter_map(|p| p.local.as_ref()).map(|l| l.scanned).sum(),
        max_points: opts.max_points,
        scan_budget: opts.scan_budget,
    };
    let summary = Summary::from_structures(&structures);
    let n = inst.degree();
    let galois_l = inst.gprime.len() == 1;
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: spec.name.clone(),
        field_degree: inst.field.degree(),
        extension_degree: n,
        galois_order: inst.galois.order(),
        galois_abelian: inst.galois.table().is_abelian(),
        l_is_galois: galois_l,
        disc_ol: inst.subfield.disc().to_string(),
        domestic: galois_l && numfield::is_domestic(&inst.subfield, n),
        structures,
        stats,
        summary,
    })
}
