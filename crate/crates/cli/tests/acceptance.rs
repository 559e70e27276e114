//! Acceptance criteria on the built-in catalog. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::Command;

use hgmod_core::freeness::{VerdictStatus, VerdictTag};
use hgmod_core::instance::{self, catalog_instance};
use hgmod_core::pipeline::{self, Options};
use hgmod_core::report::{HopfReport, Report, StructureReport};
use num::{BigInt, BigRational, Integer, Signed, Zero};

type Q = BigRational;

const CATALOG: [&str; 4] = ["cyclo5", "biquad", "cubic2", "quadi"];

fn q(s: &str) -> Q {
    instance::parse_rational(s).unwrap_or_else(|| panic!("bad rational {s}"))
}

fn z(s: &str) -> BigInt {
    s.parse().unwrap_or_else(|_| panic!("bad integer {s}"))
}

/// Plain fraction-field elimination.
fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(name: &str, primes: &[u64]) -> Report {
    let spec = catalog_instance(name).unwrap();
    let mut opts = Options::for_spec(&spec);
    opts.primes.extend_from_slice(primes);
    pipeline::run_pipeline(&spec, &opts).unwrap()
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn combinations(items: &[Vec<usize>], k: usize, start: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for i in start..items.len() {
        acc.push(items[i].clone());
        combinations(items, k, i + 1, acc, out);
        acc.pop();
    }
}

/// Order-`n` subsets of `Perm(n)` built from the identity and fixed-point-free
/// elements that are closed under composition and under conjugation by `λ(G)`.
fn brute_force_structures(n: usize, lambda: &[Vec<usize>]) -> BTreeSet<BTreeSet<Vec<usize>>> {
    let id: Vec<usize> = (0..n).collect();
    let fpf: Vec<Vec<usize>> = all_perms(n).into_iter().filter(|p| p.iter().enumerate().all(|(i, &j)| i != j)).collect();
    let mut subsets = Vec::new();
    combinations(&fpf, n - 1, 0, &mut Vec::new(), &mut subsets);
    let mut found = BTreeSet::new();
    for sub in subsets {
        let set: BTreeSet<Vec<usize>> = sub.into_iter().chain([id.clone()]).collect();
        let closed = set.iter().all(|a| set.iter().all(|b| set.contains(&compose(a, b))));
        let normal = lambda.iter().all(|l| set.iter().all(|s| set.contains(&compose(&compose(l, s), &invert(l)))));
        if closed && normal {
            found.insert(set);
        }
    }
    found
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for name in ["cyclo5", "biquad", "cubic2"] {
        let inst = catalog_instance(name).unwrap().build().unwrap();
        let lambda: Vec<Vec<usize>> = inst.lambda.iter().map(|p| p.images().to_vec()).collect();
        let oracle = brute_force_structures(inst.degree(), &lambda);
        let e = pipeline::enumeration_report(&inst, &Options::default()).unwrap();
        let got: BTreeSet<BTreeSet<Vec<usize>>> =
            e.structures.iter().map(|s| s.elements.iter().cloned().collect()).collect();
        o.check(got.len() == e.structures.len(), || format!("{name}: duplicate structures"));
        o.check(got == oracle, || format!("{name}: enumerate {} vs oracle {}", got.len(), oracle.len()));
        if name == "cubic2" {
            o.check(e.structures.len() == 1, || format!("cubic2: {} structures", e.structures.len()));
        }
    }
    o
}

/// Hopf axioms re-verified from the serialized structure constants.
fn hopf_oracle(h: &HopfReport) -> Vec<String> {
    let n = h.unit.len();
    let mult: Vec<Vec<Vec<Q>>> = h.mult.iter().map(|r| r.iter().map(|v| v.iter().map(|s| q(s)).collect()).collect()).collect();
    let comult: Vec<Vec<Vec<Q>>> = h.comult.iter().map(|r| r.iter().map(|v| v.iter().map(|s| q(s)).collect()).collect()).collect();
    let eps: Vec<Q> = h.counit.iter().map(|s| q(s)).collect();
    let unit: Vec<Q> = h.unit.iter().map(|s| q(s)).collect();
    let anti: Vec<Vec<Q>> = h.antipode.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect();
    let zero = || vec![Q::zero(); n];
    let mul = |x: &[Q], y: &[Q]| {
        let mut out = zero();
        for i in 0..n {
            for j in 0..n {
                let c = &x[i] * &y[j];
                if c.is_zero() {
                    continue;
                }
                for k in 0..n {
                    out[k] += &c * &mult[i][j][k];
                }
            }
        }
        out
    };
    let e = |i: usize| {
        let mut v = zero();
        v[i] = Q::from_integer(1.into());
        v
    };
    let counit_of = |x: &[Q]| x.iter().zip(&eps).map(|(a, b)| a * b).sum::<Q>();
    let mut bad = Vec::new();
    for i in 0..n {
        if mul(&unit, &e(i)) != e(i) || mul(&e(i), &unit) != e(i) {
            bad.push(format!("unit b{i}"));
        }
        for j in 0..n {
            if counit_of(&mult[i][j]) != &eps[i] * &eps[j] {
                bad.push(format!("counit multiplicative b{i} b{j}"));
            }
            for k in 0..n {
                if mul(&mult[i][j], &e(k)) != mul(&e(i), &mult[j][k]) {
                    bad.push(format!("associativity b{i} b{j} b{k}"));
                }
            }
        }
        let left: Vec<Q> = (0..n).map(|k| (0..n).map(|j| &eps[j] * &comult[i][j][k]).sum()).collect();
        let right: Vec<Q> = (0..n).map(|j| (0..n).map(|k| &comult[i][j][k] * &eps[k]).sum()).collect();
        if left != e(i) || right != e(i) {
            bad.push(format!("counit law b{i}"));
        }
        let mut s = zero();
        for j in 0..n {
            for k in 0..n {
                if !comult[i][j][k].is_zero() {
                    for (t, v) in mul(&anti[j], &e(k)).into_iter().enumerate() {
                        s[t] += &comult[i][j][k] * v;
                    }
                }
            }
        }
        if s != unit.iter().map(|u| u * &eps[i]).collect::<Vec<_>>() {
            bad.push(format!("antipode b{i}"));
        }
    }
    // Δ(b_i b_j) = Δ(b_i) Δ(b_j) in H ⊗ H.
    for i in 0..n {
        for j in 0..n {
            let mut lhs = vec![vec![Q::zero(); n]; n];
            for (t, c) in mult[i][j].iter().enumerate() {
                for a in 0..n {
                    for b in 0..n {
                        lhs[a][b] += c * &comult[t][a][b];
                    }
                }
            }
            let mut rhs = vec![vec![Q::zero(); n]; n];
            for a in 0..n {
                for b in 0..n {
                    if comult[i][a][b].is_zero() {
                        continue;
                    }
                    for c in 0..n {
                        for d in 0..n {
                            let w = &comult[i][a][b] * &comult[j][c][d];
                            if w.is_zero() {
                                continue;
                            }
                            for x in 0..n {
                                for y in 0..n {
                                    rhs[x][y] += &w * &mult[a][c][x] * &mult[b][d][y];
                                }
                            }
                        }
                    }
                }
            }
            if lhs != rhs {
                bad.push(format!("comultiplication multiplicative b{i} b{j}"));
            }
        }
    }
    bad
}

fn criterion_2(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    for (name, r) in reports {
        let inst = catalog_instance(name).unwrap().build().unwrap();
        for s in &r.structures {
            let c = &s.checks;
            let tag = format!("{name}#{}", s.index);
            o.check(c.dim_matches && r.extension_degree == s.fingerprint.order, || format!("{tag}: dimension"));
            o.check(c.hopf_axioms.all_hold(), || format!("{tag}: hopf axioms {:?}", c.hopf_axioms));
            o.check(c.galois_map_bijective && q(&c.galois_map_det) != Q::zero(), || format!("{tag}: galois map"));
            o.check(c.module_algebra, || format!("{tag}: module algebra"));
            let h = pipeline::build_report(&inst, s.index, &Options::default()).unwrap();
            let bad = hopf_oracle(&h);
            o.check(bad.is_empty(), || format!("{tag}: oracle {bad:?}"));
        }
    }
    o
}

fn criterion_3(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    for (name, r) in reports {
        for s in &r.structures {
            let idx = s.fixed_point_index.as_deref().map(z);
            o.check(s.checks.fixed_in_associated && idx.is_some_and(|i| i.is_positive()), || {
                format!("{name}#{}: index {:?}", s.index, s.fixed_point_index)
            });
        }
    }
    o
}

fn structure_prime<'a>(s: &'a StructureReport, p: u64) -> Option<&'a hgmod_core::report::PrimeReport> {
    s.primes.iter().find(|x| x.p == p)
}

fn local_free(s: &StructureReport, p: u64) -> bool {
    structure_prime(s, p).and_then(|x| x.local.as_ref()).is_some_and(|l| l.free)
}

fn criterion_4(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    for (name, r) in reports.iter().filter(|(n, _)| ["cyclo5", "biquad"].contains(n)) {
        let disc = z(&r.disc_ol);
        let unramified: Vec<u64> = [2u64, 3, 7].into_iter().filter(|&p| !disc.is_multiple_of(&BigInt::from(p))).collect();
        o.check(!unramified.is_empty(), || format!("{name}: no unramified prime among 2, 3, 7"));
        for s in &r.structures {
            for &p in &unramified {
                let tag = format!("{name}#{} p={p}", s.index);
                let Some(pr) = structure_prime(s, p) else {
                    o.failures.push(format!("{tag}: not checked"));
                    continue;
                };
                let idx = z(s.fixed_point_index.as_deref().unwrap_or("0"));
                o.check(pr.unramified, || format!("{tag}: flagged ramified"));
                o.check(!idx.is_zero() && !idx.is_multiple_of(&BigInt::from(p)), || format!("{tag}: index {idx}"));
                o.check(pr.index_prime_to_p, || format!("{tag}: index flag"));
                o.check(pr.fixed_order_p_hopf, || format!("{tag}: fixed-point order not p-Hopf"));
                o.check(pr.tameness.trace_surjective, || format!("{tag}: θ·O_L not a p-unit ideal"));
                o.check(local_free(s, p), || format!("{tag}: not locally free"));
            }
        }
    }
    o
}

fn criterion_5(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    let r = &reports.iter().find(|(n, _)| *n == "cubic2").unwrap().1;
    o.check(!r.l_is_galois && r.extension_degree == 3, || "cubic2: expected non-Galois cubic".into());
    o.check(z(&r.disc_ol).is_multiple_of(&BigInt::from(2)), || "cubic2: 2 unramified".into());
    for s in &r.structures {
        o.check(s.commutative && s.fingerprint.order == 3, || format!("cubic2#{}: N not C3", s.index));
        let idx = z(s.fixed_point_index.as_deref().unwrap_or("0"));
        o.check(idx.is_odd(), || format!("cubic2#{}: index {idx}", s.index));
        let pr = structure_prime(s, 2);
        o.check(pr.is_some_and(|x| x.associated_p_maximal == Some(true)), || format!("cubic2#{}: not 2-maximal", s.index));
        o.check(local_free(s, 2), || format!("cubic2#{}: not locally free at 2", s.index));
        let v = s.verdicts.iter().find(|v| v.tag == VerdictTag::TameMaximalFreeness && v.prime == Some(2));
        o.check(v.is_some_and(|v| v.hypotheses && v.status == VerdictStatus::Pass), || format!("cubic2#{}: verdict {v:?}", s.index));
    }
    o
}

fn criterion_6(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    for (name, r) in reports.iter().filter(|(n, _)| ["cyclo5", "biquad"].contains(n)) {
        let disc = z(&r.disc_ol);
        let degree = r.extension_degree as u64;
        let domestic = (2..=degree).filter(|p| degree % p == 0).all(|p| !disc.is_multiple_of(&BigInt::from(p)));
        o.check(domestic && r.domestic, || format!("{name}: domestic flag {} oracle {domestic}", r.domestic));
        for s in r.structures.iter().filter(|s| s.commutative) {
            o.check(s.fixed_point_index.as_deref() == Some("1"), || format!("{name}#{}: index {:?}", s.index, s.fixed_point_index));
            o.check(s.critical.note.is_none(), || format!("{name}#{}: critical set inconclusive", s.index));
            for c in &s.critical.primes {
                o.check(local_free(s, c.p), || format!("{name}#{}: not locally free at {}", s.index, c.p));
            }
            if *name == "cyclo5" {
                let v = s.verdicts.iter().find(|v| v.tag == VerdictTag::PrimePowerTame);
                o.check(v.is_some_and(|v| v.hypotheses && v.status == VerdictStatus::Pass), || format!("cyclo5#{}: {v:?}", s.index));
            }
        }
    }
    o
}

fn criterion_7(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    let get = |n: &str| &reports.iter().find(|(m, _)| *m == n).unwrap().1;
    let c5 = get("cyclo5");
    let classical: Vec<_> = c5.structures.iter().filter(|s| s.classical).collect();
    o.check(classical.len() == 1, || format!("cyclo5: {} classical structures", classical.len()));
    for s in classical {
        o.check(s.group_ring_index.as_deref() == Some("1"), || format!("cyclo5: [A:Z[G]] = {:?}", s.group_ring_index));
        let g = s.global_generator.as_ref();
        o.check(g.is_some_and(|g| g.iter().all(|c| c.abs() <= 1)), || format!("cyclo5: generator {g:?}"));
    }
    let qi = get("quadi");
    for s in &qi.structures {
        o.check(s.classical, || "quadi: nonclassical structure".into());
        o.check(s.group_ring_index.as_deref() == Some("2"), || format!("quadi: [A:Z[G]] = {:?}", s.group_ring_index));
        let applicable: Vec<_> = s.verdicts.iter().filter(|v| v.hypotheses).collect();
        o.check(applicable.is_empty(), || format!("quadi: applicable {applicable:?}"));
    }
    o.check(qi.exit_code() == 0, || format!("quadi: exit {}", qi.exit_code()));
    o
}

/// `[𝒪_L : Λθ]` recomputed from the serialized order basis and action.
fn lifted_index(s: &StructureReport, h: &HopfReport, theta: &[u64]) -> BigInt {
    let n = h.unit.len();
    let basis: Vec<Vec<Q>> = s.associated_order.basis.iter().map(|r| r.iter().map(|x| q(x)).collect()).collect();
    let rows: Vec<Vec<Q>> = basis
        .iter()
        .map(|a| {
            let mut row = vec![Q::zero(); n];
            for i in 0..n {
                for (r, &t) in theta.iter().enumerate() {
                    let c = &a[i] * Q::from_integer(t.into());
                    for (k, x) in h.action[i][r].iter().enumerate() {
                        row[k] += &c * q(x);
                    }
                }
            }
            row
        })
        .collect();
    let d = det(rows).abs();
    assert!(d.is_integer(), "Λθ is not inside O_L");
    d.to_integer()
}

fn run_binary(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_hgmod")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code())
}

fn criterion_8(reports: &[(&str, Report)]) -> Outcome {
    let mut o = Outcome::new();
    let mut witnesses = 0;
    for (name, r) in reports {
        let inst = catalog_instance(name).unwrap().build().unwrap();
        for s in &r.structures {
            let tag = format!("{name}#{}", s.index);
            o.check(s.checks.disc_chains, || format!("{tag}: discriminant chain"));
            let small = z(&s.fixed_point_order.disc);
            let large = z(&s.associated_order.disc);
            let idx = z(s.fixed_point_index.as_deref().unwrap_or("0"));
            o.check(&large * &idx * &idx == small, || format!("{tag}: {large}·{idx}² ≠ {small}"));
            let h = pipeline::build_report(&inst, s.index, &Options::default()).unwrap();
            for pr in &s.primes {
                let Some(l) = &pr.local else { continue };
                if let Some(w) = &l.witness {
                    witnesses += 1;
                    let m = lifted_index(s, &h, w);
                    o.check(!m.is_zero() && !m.is_multiple_of(&BigInt::from(pr.p)), || format!("{tag} p={}: lifted index {m}", pr.p));
                    o.check(l.witness_index.as_deref().map(z) == Some(m.clone()), || format!("{tag} p={}: reported index", pr.p));
                }
            }
        }
    }
    o.check(witnesses > 0, || "no Nakayama witnesses".into());
    for name in CATALOG {
        let one = run_binary(&["--threads", "1", "report", name]);
        let many = run_binary(&["--threads", "4", "report", name]);
        o.check(one.1 == Some(0) && many.1 == Some(0), || format!("{name}: exit codes {:?} {:?}", one.1, many.1));
        o.check(!one.0.is_empty() && one.0 == many.0, || format!("{name}: reports differ across thread counts"));
        let again = run_binary(&["--threads", "4", "report", name]);
        o.check(again.0 == many.0, || format!("{name}: reports differ across runs"));
    }
    o
}

fn main() {
    let reports: Vec<(&str, Report)> = CATALOG
        .iter()
        .map(|&name| {
            let primes: &[u64] = if matches!(name, "cyclo5" | "biquad") { &[2, 3, 7] } else { &[] };
            (name, report(name, primes))
        })
        .collect();
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 8] = [
        ("1 enumeration matches brute-force oracle", Box::new(criterion_1)),
        ("2 descent: dimension, Hopf axioms, Galois map, module algebra", Box::new(|| criterion_2(&reports))),
        ("3 fixed-point order inside associated order", Box::new(|| criterion_3(&reports))),
        ("4 unramified primes 2, 3, 7 on abelian instances", Box::new(|| criterion_4(&reports))),
        ("5 tame ramified prime 2 on cubic2", Box::new(|| criterion_5(&reports))),
        ("6 domestic instances locally free with index 1", Box::new(|| criterion_6(&reports))),
        ("7 classical structures: cyclo5 tame, quadi wild", Box::new(|| criterion_7(&reports))),
        ("8 discriminant chains, Nakayama lifts, thread determinism", Box::new(|| criterion_8(&reports))),
    ];
    let mut failed = 0;
    for (label, run) in &criteria {
        let o = run();
        if o.failures.is_empty() {
            println!("PASS criterion {label}");
        } else {
            failed += 1;
            println!("FAIL criterion {label}");
            for f in &o.failures {
                println!("    {f}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
