use std::collections::BTreeSet;

use hgmod_core::instance::{catalog_instance, catalog_names, parse_instance};
use hgmod_core::permcore::Perm;
use hgmod_core::pipeline::{self, Options};
use hgmod_core::report::Report;
use hgmod_core::Error;
use proptest::prelude::*;

fn s3_galois_json() -> String {
    catalog_instance("cubic2").unwrap().to_json().replace("\"cubic2\"", "\"s3galois\"")
}

fn s3_galois() -> hgmod_core::instance::InstanceSpec {
    let mut spec = parse_instance(&s3_galois_json()).unwrap();
    spec.subgroup_gprime = vec![0];
    spec
}

fn derangements(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    permute(&mut images, 0, &mut out);
    out.retain(|p: &Perm| p.fixed_points() == 0);
    out
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == v.len() {
        out.push(Perm::new(v.clone()).unwrap());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

const IDENTITY: [usize; 6] = [0, 1, 2, 3, 4, 5];

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn conj(x: &[usize], l: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; l.len()];
    for (i, &j) in l.iter().enumerate() {
        inv[j] = i;
    }
    compose(&compose(l, x), &inv)
}

/// Closure of `gens`, abandoned once it exceeds six elements.
fn close6(gens: &[Vec<usize>]) -> Option<BTreeSet<Vec<usize>>> {
    let mut set: BTreeSet<Vec<usize>> = [IDENTITY.to_vec()].into_iter().collect();
    let mut frontier = vec![IDENTITY.to_vec()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if set.insert(y.clone()) {
                if set.len() > 6 {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(set)
}

/// Every group of order 6 is generated by two elements, so closing all pairs
/// of derangements finds every regular subgroup of `Sym(6)`.
#[test]
fn regular_s3_extension_has_five_structures() {
    let inst = s3_galois().build().unwrap();
    assert_eq!(inst.degree(), 6);
    let pool: Vec<Vec<usize>> = derangements(6).iter().map(|p| p.images().to_vec()).collect();
    let lambda: Vec<Vec<usize>> = inst.lambda.iter().map(|p| p.images().to_vec()).collect();
    let mut oracle: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i..] {
            let Some(g) = close6(&[a.clone(), b.clone()]) else { continue };
            let regular = g.len() == 6 && g.iter().all(|p| p == &IDENTITY || p.iter().enumerate().all(|(i, &j)| i != j));
            let normal = lambda.iter().all(|l| g.iter().all(|x| g.contains(&conj(x, l))));
            if regular && normal {
                oracle.insert(g.into_iter().collect());
            }
        }
    }
    let found = pipeline::enumerate_structures(&inst, 8).unwrap();
    let got: BTreeSet<Vec<Vec<usize>>> =
        found.iter().map(|g| g.elements().iter().map(|p| p.images().to_vec()).collect()).collect();
    assert_eq!(got, oracle);
    assert_eq!(got.len(), 5);
    assert_eq!(found.iter().filter(|g| g.is_abelian()).count(), 3);
}

#[test]
fn regular_s3_descends() {
    let inst = s3_galois().build().unwrap();
    for g in pipeline::enumerate_structures(&inst, 8).unwrap() {
        let abelian = g.is_abelian();
        let d = pipeline::descend_structure(&inst, g).unwrap();
        assert_eq!(d.hopf.dim(), 6);
        assert!(d.hopf.check_axioms().all_hold());
        assert_eq!(d.hopf.is_commutative(), abelian);
        assert!(d.table.unit_acts_trivially(&d.hopf));
    }
}

#[test]
fn catalog_structure_counts() {
    let expected = [("cyclo5", 2), ("biquad", 4), ("cubic2", 1), ("quadi", 1)];
    for (name, count) in expected {
        let inst = catalog_instance(name).unwrap().build().unwrap();
        assert_eq!(pipeline::enumerate_structures(&inst, 8).unwrap().len(), count, "{name}");
    }
}

#[test]
fn cubic2_and_biquad_descend() {
    for name in ["cubic2", "biquad"] {
        let inst = catalog_instance(name).unwrap().build().unwrap();
        for (i, g) in pipeline::enumerate_structures(&inst, 8).unwrap().into_iter().enumerate() {
            let d = pipeline::descend_structure(&inst, g).unwrap();
            assert_eq!(d.hopf.dim(), inst.degree(), "{name}#{i}");
            assert!(d.hopf.check_axioms().all_hold(), "{name}#{i}");
            assert!(d.hopf.theta_is_left_integral(), "{name}#{i}");
        }
    }
}

#[test]
fn reports_round_trip_and_exit_zero() {
    for name in catalog_names() {
        let spec = catalog_instance(name).unwrap();
        let r = pipeline::run_pipeline(&spec, &Options::for_spec(&spec)).unwrap();
        assert_eq!(r.exit_code(), 0, "{name}");
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn cubic2_verdicts() {
    let spec = catalog_instance("cubic2").unwrap();
    let r = pipeline::run_pipeline(&spec, &Options::default()).unwrap();
    let s = &r.structures[0];
    let at = |p| s.verdicts.iter().filter(move |v| v.prime == Some(p)).collect::<Vec<_>>();
    use hgmod_core::freeness::{VerdictStatus, VerdictTag};
    assert!(at(2).iter().any(|v| v.tag == VerdictTag::TameMaximalFreeness && v.status == VerdictStatus::Pass));
    assert!(at(3).iter().all(|v| v.status == VerdictStatus::NotApplicable));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_instances_fail_cleanly(cut in 0usize..1000) {
        let text = s3_galois_json();
        let cut = cut % text.len();
        if !text.is_char_boundary(cut) {
            return Ok(());
        }
        match parse_instance(&text[..cut]) {
            Err(Error::Parse { offset, .. }) => prop_assert!(offset <= cut),
            Err(Error::Schema(_)) | Err(Error::Validation(_)) => {}
            other => prop_assert!(false, "unexpected {:?}", other.map(|s| s.name)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Requesting extra primes adds rows without changing the critical ones.
    #[test]
    fn requested_primes_only_add(extra in proptest::sample::subsequence(vec![5u64, 7, 11, 13], 0..=2)) {
        let spec = catalog_instance("cubic2").unwrap();
        let base = pipeline::run_pipeline(&spec, &Options::default()).unwrap();
        let more = pipeline::run_pipeline(&spec, &Options { primes: extra.clone(), ..Options::default() }).unwrap();
        let (b, m) = (&base.structures[0], &more.structures[0]);
        for p in &b.primes {
            let q = m.primes.iter().find(|q| q.p == p.p).unwrap();
            prop_assert_eq!(&p.local, &q.local);
            prop_assert_eq!(&p.tameness, &q.tameness);
        }
        for p in &extra {
            prop_assert!(m.primes.iter().any(|q| q.p == *p));
        }
        prop_assert_eq!(more.exit_code(), 0);
    }
}
