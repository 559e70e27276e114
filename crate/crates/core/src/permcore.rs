//! Permutations of the coset space `X = G/G′` and the search for regular
//! subgroups of `Perm(X)` normalised by `λ(G)`.
//!
//! Group orders here never exceed a few dozen, so groups are stored as full
//! sorted element lists rather than stabiliser chains.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on `|X|` for the exhaustive search.
pub const DEFAULT_MAX_POINTS: usize = 8;

/// A permutation of `{0, …, n−1}`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Malformed(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n).collect() }
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::Malformed(format!("bad cycle {cycle:?} on {n} points")));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::Malformed(format!(
                "cannot compose permutations on {} and {} points",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i == j).count()
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose_unchecked(&self.compose_unchecked(&g.inverse()))
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            order = num::integer::lcm(order, len);
        }
        order
    }

    /// Cycle lengths, sorted.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }
}

/// `p ∘ q`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm> {
    p.compose(q)
}

/// A finite subgroup of `Perm({0, …, n−1})` with its full element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Closure of `gens` under composition. Elements are sorted by image sequence.
    pub fn generate(n: usize, gens: &[Perm]) -> Result<PermGroup> {
        if let Some(bad) = gens.iter().find(|g| g.degree() != n) {
            return Err(Error::Malformed(format!(
                "generator on {} points in a group on {n} points",
                bad.degree()
            )));
        }
        let elements = close(n, gens, usize::MAX).expect("unbounded closure");
        Ok(PermGroup { n, generators: gens.to_vec(), elements })
    }

    fn from_sorted_elements(n: usize, elements: Vec<Perm>) -> PermGroup {
        PermGroup { n, generators: elements.clone(), elements }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = if self.generators.is_empty() { &self.elements } else { &self.generators };
        gens.iter().tuple_combinations().all(|(a, b)| {
            a.compose_unchecked(b) == b.compose_unchecked(a)
        })
    }

    /// Multiplication table over the sorted element list.
    pub fn cayley_table(&self) -> CayleyTable {
        let table = self
            .elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| self.index_of(&a.compose_unchecked(b)).expect("closed"))
                    .collect()
            })
            .collect();
        let identity = self.index_of(&Perm::identity(self.n)).expect("identity present");
        CayleyTable::new(table, identity).expect("permutation groups are groups")
    }
}

/// Closure of `gens` (plus the identity) under composition; `None` as soon as
/// the set exceeds `limit` elements.
fn close(n: usize, gens: &[Perm], limit: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose_unchecked(&x);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Some(elements)
}

/// An abstract finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl CayleyTable {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<CayleyTable> {
        let n = table.len();
        if identity >= n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Malformed("multiplication table is not square or out of range".into()));
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::Malformed(format!("{identity} is not an identity")));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::Malformed(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Malformed("multiplication table is not associative".into()));
                    }
                }
            }
        }
        Ok(CayleyTable { table, identity, inverses })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// True iff `subset` is a subgroup (non-empty and closed; finiteness gives inverses).
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: HashSet<usize> = subset.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&a| a < self.order())
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }
}

/// The left coset space `X = {gG′}`, points numbered in order of their
/// minimal element index. Point 0 is always `G′` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    group_order: usize,
    subgroup: Vec<usize>,
    reps: Vec<usize>,
    lookup: Vec<usize>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    /// Minimal-index representative of each coset.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Coset index of a group element.
    pub fn coset_of(&self, g: usize) -> usize {
        self.lookup[g]
    }

    /// All group elements in coset `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.group_order).filter(|&g| self.lookup[g] == c).collect()
    }
}

pub fn coset_space(group: &CayleyTable, subgroup: &[usize]) -> Result<CosetSpace> {
    if !group.is_subgroup(subgroup) {
        return Err(Error::InvalidSubgroup(format!("{subgroup:?} is not closed under the group law")));
    }
    let mut sub: Vec<usize> = subgroup.to_vec();
    sub.sort_unstable();
    sub.dedup();
    let mut lookup = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in 0..group.order() {
        if lookup[g] != usize::MAX {
            continue;
        }
        for &h in &sub {
            lookup[group.mul(g, h)] = reps.len();
        }
        reps.push(g);
    }
    Ok(CosetSpace { group_order: group.order(), subgroup: sub, reps, lookup })
}

/// `λ(g)(xG′) = gxG′`, one permutation per group element in table order.
pub fn lambda_embedding(group: &CayleyTable, cosets: &CosetSpace) -> Vec<Perm> {
    (0..group.order())
        .map(|g| Perm {
            images: cosets.reps.iter().map(|&r| cosets.coset_of(group.mul(g, r))).collect(),
        })
        .collect()
}

/// `ρ(h)(x) = xh⁻¹` on the regular coset space (`G′` trivial). The image is
/// the classical structure.
pub fn right_regular_embedding(group: &CayleyTable, cosets: &CosetSpace) -> Option<Vec<Perm>> {
    if cosets.len() != group.order() {
        return None;
    }
    Some(
        (0..group.order())
            .map(|h| Perm {
                images: cosets
                    .reps
                    .iter()
                    .map(|&x| cosets.coset_of(group.mul(x, group.inverse(h))))
                    .collect(),
            })
            .collect(),
    )
}

pub fn is_regular(group: &PermGroup, n: usize) -> bool {
    if group.order() != n || group.degree() != n || n == 0 {
        return false;
    }
    let orbit: HashSet<usize> = group.elements().iter().map(|p| p.apply(0)).collect();
    orbit.len() == n
}

pub fn is_normalized(group: &PermGroup, lambda: &[Perm]) -> bool {
    lambda.iter().all(|l| {
        l.degree() == group.degree()
            && group.elements().iter().all(|nu| group.contains(&nu.conjugate_by(l)))
    })
}

/// Permutations whose cycles all share one length `> 1`: exactly the elements
/// that can sit in a regular subgroup without fixing a point (together with
/// their powers).
fn semiregular_pool(n: usize) -> Vec<Perm> {
    (0..n)
        .permutations(n)
        .map(|images| Perm { images })
        .filter(|p| {
            let ct = p.cycle_type();
            ct[0] > 1 && ct.iter().all(|&l| l == ct[0])
        })
        .collect()
}

/// All regular subgroups of `Perm(X)` normalised by `λ(G)`, sorted by their
/// element lists.
///
/// Backtracks over semiregular candidates; every partial subgroup is closed
/// under `λ(G)`-conjugation immediately, so only normal-under-`λ(G)` partial
/// groups are ever explored.
pub fn enumerate_regular_normalized(
    cosets: &CosetSpace,
    lambda: &[Perm],
    max_points: usize,
) -> Result<Vec<PermGroup>> {
    let n = cosets.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty coset space".into()));
    }
    if n > max_points {
        return Err(Error::ResourceLimit(format!(
            "|X| = {n} exceeds the configured ceiling of {max_points} points"
        )));
    }
    if let Some(bad) = lambda.iter().find(|l| l.degree() != n) {
        return Err(Error::Malformed(format!("λ image on {} points, |X| = {n}", bad.degree())));
    }
    if n == 1 {
        return Ok(vec![PermGroup::generate(1, &[])?]);
    }
    let pool = semiregular_pool(n);
    let search = Search { n, lambda, pool: &pool };
    let start = vec![Perm::identity(n)];

    let found: BTreeSet<Vec<Perm>> = pool
        .par_iter()
        .map(|p| {
            let mut found = BTreeSet::new();
            let mut visited = HashSet::new();
            if let Some(next) = search.extend(&start, p) {
                search.descend(next, &mut visited, &mut found);
            }
            found
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });

    Ok(found.into_iter().map(|els| PermGroup::from_sorted_elements(n, els)).collect())
}

struct Search<'a> {
    n: usize,
    lambda: &'a [Perm],
    pool: &'a [Perm],
}

impl Search<'_> {
    /// Closure of `current ∪ λ(G)-orbit(p)`; `None` if it outgrows `n` or
    /// picks up a non-identity element with a fixed point.
    fn extend(&self, current: &[Perm], p: &Perm) -> Option<Vec<Perm>> {
        let mut gens: Vec<Perm> = current.to_vec();
        let mut orbit: HashSet<Perm> = HashSet::from([p.clone()]);
        let mut queue = vec![p.clone()];
        while let Some(q) = queue.pop() {
            for l in self.lambda {
                let c = q.conjugate_by(l);
                if orbit.insert(c.clone()) {
                    queue.push(c);
                }
            }
        }
        gens.extend(orbit);
        let closed = close(self.n, &gens, self.n)?;
        let fpf = closed.iter().all(|x| x.is_identity() || x.fixed_points() == 0);
        (fpf && self.n % closed.len() == 0).then_some(closed)
    }

    fn descend(
        &self,
        current: Vec<Perm>,
        visited: &mut HashSet<Vec<Perm>>,
        found: &mut BTreeSet<Vec<Perm>>,
    ) {
        if !visited.insert(current.clone()) {
            return;
        }
        if current.len() == self.n {
            found.insert(current);
            return;
        }
        for p in self.pool {
            if current.binary_search(p).is_ok() {
                continue;
            }
            if let Some(next) = self.extend(&current, p) {
                self.descend(next, visited, found);
            }
        }
    }
}

/// Isomorphism invariant used to label `N` in reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub element_orders: Vec<usize>,
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &o in &self.element_orders {
            match counts.last_mut() {
                Some((k, c)) if *k == o => *c += 1,
                _ => counts.push((o, 1)),
            }
        }
        let orders = counts.iter().map(|(o, c)| format!("{o}^{c}")).join(" ");
        write!(f, "order {} {} [{}]", self.order, if self.abelian { "abelian" } else { "nonabelian" }, orders)
    }
}

/// `(order, abelian?, sorted element orders)`. Separates all isomorphism
/// classes of groups of order at most 15.
pub fn group_fingerprint(group: &PermGroup) -> Fingerprint {
    let mut element_orders: Vec<usize> = group.elements().iter().map(Perm::order).collect();
    element_orders.sort_unstable();
    Fingerprint { order: group.order(), abelian: group.is_abelian(), element_orders }
}

/// Index lookup for a subgroup's elements.
pub fn element_index(group: &PermGroup) -> HashMap<Perm, usize> {
    group.elements().iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    fn cyclic_table(n: usize) -> CayleyTable {
        CayleyTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0).unwrap()
    }

    fn klein_table() -> CayleyTable {
        CayleyTable::new((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(), 0).unwrap()
    }

    fn sym3() -> PermGroup {
        PermGroup::generate(3, &[cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]).unwrap()
    }

    /// Independent oracle: every subgroup generated by at most two
    /// fixed-point-free elements, filtered by order, regularity and the
    /// normaliser condition. Groups of order ≤ 7 are 2-generated.
    fn brute_force(n: usize, lambda: &[Perm]) -> BTreeSet<Vec<Perm>> {
        let mut fpf: Vec<Perm> = (0..n)
            .permutations(n)
            .map(|images| Perm::new(images).unwrap())
            .filter(|p| p.is_identity() || p.fixed_points() == 0)
            .collect();
        fpf.sort();
        let mut out = BTreeSet::new();
        for (i, a) in fpf.iter().enumerate() {
            for b in &fpf[i..] {
                let Some(elements) = close(n, &[a.clone(), b.clone()], n) else { continue };
                let g = PermGroup::from_sorted_elements(n, elements);
                if g.order() == n
                    && g.elements().iter().all(|x| x.is_identity() || x.fixed_points() == 0)
                    && is_regular(&g, n)
                    && is_normalized(&g, lambda)
                {
                    out.insert(g.elements().to_vec());
                }
            }
        }
        out
    }

    fn enumerate_sets(table: &CayleyTable, sub: &[usize]) -> (Vec<Vec<Perm>>, BTreeSet<Vec<Perm>>) {
        let x = coset_space(table, sub).unwrap();
        let lambda = lambda_embedding(table, &x);
        let got: Vec<Vec<Perm>> = enumerate_regular_normalized(&x, &lambda, 8)
            .unwrap()
            .into_iter()
            .map(|g| g.elements().to_vec())
            .collect();
        (got, brute_force(x.len(), &lambda))
    }

    #[test]
    fn compose_examples() {
        let id4 = Perm::identity(4);
        assert_eq!(compose(&id4, &id4).unwrap(), id4);
        let c = cyc(4, &[&[0, 1, 2, 3]]);
        assert_eq!(compose(&c, &c).unwrap(), cyc(4, &[&[0, 2], &[1, 3]]));
        // (0 1)∘(1 2): 0 ↦ 0 ↦ 1, 1 ↦ 2 ↦ 2, 2 ↦ 1 ↦ 0.
        let r = compose(&cyc(3, &[&[0, 1]]), &cyc(3, &[&[1, 2]])).unwrap();
        assert_eq!(r.images(), &[1, 2, 0]);
        assert!(compose(&id4, &Perm::identity(3)).is_err());
    }

    #[test]
    fn new_rejects_non_bijections() {
        assert!(Perm::new(vec![0, 0, 1]).is_err());
        assert!(Perm::new(vec![0, 3]).is_err());
    }

    #[test]
    fn generate_examples() {
        assert_eq!(PermGroup::generate(4, &[]).unwrap().order(), 1);
        assert_eq!(PermGroup::generate(4, &[cyc(4, &[&[0, 1, 2, 3]])]).unwrap().order(), 4);
        let s3 = sym3();
        assert_eq!(s3.order(), 6);
        assert!(s3.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(PermGroup::generate(4, &[Perm::identity(3)]).is_err());
    }

    #[test]
    fn coset_space_examples() {
        let c4 = cyclic_table(4);
        let x = coset_space(&c4, &[0]).unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(x.reps(), &[0, 1, 2, 3]);
        let x2 = coset_space(&c4, &[0, 2]).unwrap();
        assert_eq!(x2.len(), 2);
        for (c, &r) in x2.reps().iter().enumerate() {
            assert_eq!(x2.coset_of(r), c);
        }
        let s3 = sym3().cayley_table();
        let t = (0..6).find(|&g| g != s3.identity() && s3.mul(g, g) == s3.identity()).unwrap();
        assert_eq!(coset_space(&s3, &[s3.identity(), t]).unwrap().len(), 3);
        assert!(matches!(coset_space(&c4, &[0, 1]), Err(Error::InvalidSubgroup(_))));
    }

    #[test]
    fn lambda_examples() {
        let c4 = cyclic_table(4);
        let x = coset_space(&c4, &[0]).unwrap();
        let lambda = lambda_embedding(&c4, &x);
        assert!(lambda[0].is_identity());
        assert_eq!(lambda[1], cyc(4, &[&[0, 1, 2, 3]]));
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(lambda[c4.mul(a, b)], lambda[a].compose(&lambda[b]).unwrap());
            }
        }
        // Sym(3) on the three cosets of an order-2 subgroup: order-3 elements act as 3-cycles.
        let s3g = sym3();
        let s3 = s3g.cayley_table();
        let t = (0..6).find(|&g| g != s3.identity() && s3.mul(g, g) == s3.identity()).unwrap();
        let x = coset_space(&s3, &[s3.identity(), t]).unwrap();
        let lambda = lambda_embedding(&s3, &x);
        for g in 0..6 {
            if s3g.elements()[g].order() == 3 {
                assert_eq!(lambda[g].cycle_type(), vec![3]);
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let c = PermGroup::generate(4, &[cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert!(is_regular(&c, 4));
        let t = PermGroup::generate(4, &[cyc(4, &[&[0, 1]])]).unwrap();
        assert!(!is_regular(&t, 4));
        let v = PermGroup::generate(4, &[cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        assert_eq!(v.order(), 4);
        assert!(is_regular(&v, 4));
    }

    #[test]
    fn normalizer_examples() {
        let c4 = cyclic_table(4);
        let x = coset_space(&c4, &[0]).unwrap();
        let lambda = lambda_embedding(&c4, &x);
        let image = PermGroup::generate(4, &lambda).unwrap();
        assert!(is_normalized(&image, &lambda));
        // ⟨(0 1 2 3)⟩ under conjugation by the Klein group {e,(01)(23),(02)(13),(03)(12)}.
        let klein = vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])];
        let n = PermGroup::generate(4, &[cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert!(is_normalized(&n, &klein));
        // a non-normalised example: ⟨(0 1)(2 3)⟩ under conjugation by (1 2)
        let m = PermGroup::generate(4, &[cyc(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert!(!is_normalized(&m, &[cyc(4, &[&[1, 2]])]));
    }

    #[test]
    fn enumeration_matches_oracle_c4() {
        let (got, oracle) = enumerate_sets(&cyclic_table(4), &[0]);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn enumeration_matches_oracle_klein() {
        let table = klein_table();
        let (got, oracle) = enumerate_sets(&table, &[0]);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle);
        let x = coset_space(&table, &[0]).unwrap();
        let lambda = lambda_embedding(&table, &x);
        let image = PermGroup::generate(4, &lambda).unwrap();
        assert!(got.contains(&image.elements().to_vec()));
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn enumeration_matches_oracle_sym3_on_three_points() {
        let s3 = sym3().cayley_table();
        let t = (0..6).find(|&g| g != s3.identity() && s3.mul(g, g) == s3.identity()).unwrap();
        let (got, oracle) = enumerate_sets(&s3, &[s3.identity(), t]);
        assert_eq!(got.len(), 1);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle);
    }

    #[test]
    fn enumeration_matches_oracle_up_to_six_points() {
        for n in 1..=6 {
            let table = cyclic_table(n);
            let (got, oracle) = enumerate_sets(&table, &[0]);
            assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle, "C{n}");
        }
        let s3 = sym3().cayley_table();
        let (got, oracle) = enumerate_sets(&s3, &[s3.identity()]);
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle, "Sym(3) regular");
        // ρ(G), λ(G) and three cyclic N.
        assert_eq!(got.len(), 5);
    }

    #[test]
    fn enumeration_respects_ceiling() {
        let table = cyclic_table(9);
        let x = coset_space(&table, &[0]).unwrap();
        let lambda = lambda_embedding(&table, &x);
        assert!(matches!(enumerate_regular_normalized(&x, &lambda, 8), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn enumeration_on_eight_points_is_sorted_and_regular() {
        let table = cyclic_table(8);
        let x = coset_space(&table, &[0]).unwrap();
        let lambda = lambda_embedding(&table, &x);
        let found = enumerate_regular_normalized(&x, &lambda, 8).unwrap();
        // Byott: a cyclic extension of degree 8 admits six Hopf-Galois structures.
        assert_eq!(found.len(), 6);
        assert!(found.windows(2).all(|w| w[0].elements() < w[1].elements()));
        for n in &found {
            assert!(is_regular(n, 8) && is_normalized(n, &lambda));
        }
    }

    #[test]
    fn enumeration_is_conjugation_equivariant() {
        // Conjugating the problem by an element of the normaliser of λ(G)
        // permutes the output.
        let table = klein_table();
        let x = coset_space(&table, &[0]).unwrap();
        let lambda = lambda_embedding(&table, &x);
        let found: BTreeSet<Vec<Perm>> = enumerate_regular_normalized(&x, &lambda, 8)
            .unwrap()
            .into_iter()
            .map(|g| g.elements().to_vec())
            .collect();
        let image = PermGroup::generate(4, &lambda).unwrap();
        let normaliser: Vec<Perm> = (0..4)
            .permutations(4)
            .map(|v| Perm::new(v).unwrap())
            .filter(|g| image.elements().iter().all(|l| image.contains(&l.conjugate_by(g))))
            .collect();
        for g in normaliser {
            let moved: BTreeSet<Vec<Perm>> = found
                .iter()
                .map(|els| {
                    let mut c: Vec<Perm> = els.iter().map(|p| p.conjugate_by(&g)).collect();
                    c.sort();
                    c
                })
                .collect();
            assert_eq!(moved, found);
        }
    }

    #[test]
    fn fingerprint_examples() {
        let c4 = PermGroup::generate(4, &[cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(
            group_fingerprint(&c4),
            Fingerprint { order: 4, abelian: true, element_orders: vec![1, 2, 4, 4] }
        );
        let v = PermGroup::generate(4, &[cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        assert_eq!(group_fingerprint(&v).element_orders, vec![1, 2, 2, 2]);
        let s3 = sym3();
        assert_eq!(
            group_fingerprint(&s3),
            Fingerprint { order: 6, abelian: false, element_orders: vec![1, 2, 2, 2, 3, 3] }
        );
    }

    /// Regular representation of a group given by a multiplication rule.
    fn regular<F: Fn(usize, usize) -> usize>(n: usize, mul: F) -> PermGroup {
        let gens: Vec<Perm> = (0..n).map(|a| Perm::new((0..n).map(|b| mul(a, b)).collect()).unwrap()).collect();
        PermGroup::generate(n, &gens).unwrap()
    }

    #[test]
    fn fingerprint_separates_small_groups() {
        // (order, number of isomorphism classes) for every order ≤ 15, with
        // one representative of each class.
        let mut by_order: HashMap<usize, Vec<PermGroup>> = HashMap::new();
        let mut add = |g: PermGroup| by_order.entry(g.order()).or_default().push(g);
        for n in 1..=15 {
            add(regular(n, |a, b| (a + b) % n));
        }
        // direct products C_a × C_b
        for (a, b) in [(2, 2), (2, 4), (3, 3), (2, 6)] {
            add(regular(a * b, move |x, y| ((x / b + y / b) % a) * b + (x % b + y % b) % b));
        }
        add(regular(8, |x, y| x ^ y));
        // dihedral groups of order 2m: (r^i s^j)
        for m in [3, 4, 5, 6, 7] {
            add(regular(2 * m, move |x, y| {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                let r = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                r + m * ((j + l) % 2)
            }));
        }
        // quaternion group Q8 and dicyclic Dic3: a^k x^j with x² = a^(m/2)
        for m in [4, 6] {
            add(regular(2 * m, move |x, y| {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                let mut e = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                if j == 1 && l == 1 {
                    e = (e + m / 2) % m;
                }
                e + m * ((j + l) % 2)
            }));
        }
        // A4 on four points
        add(PermGroup::generate(4, &[cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[0, 1], &[2, 3]])]).unwrap());
        let classes: [(usize, usize); 15] = [
            (1, 1), (2, 1), (3, 1), (4, 2), (5, 1), (6, 2), (7, 1), (8, 5),
            (9, 2), (10, 2), (11, 1), (12, 5), (13, 1), (14, 2), (15, 1),
        ];
        for (order, count) in classes {
            let groups = &by_order[&order];
            assert_eq!(groups.len(), count, "representatives of order {order}");
            let prints: HashSet<Fingerprint> = groups.iter().map(group_fingerprint).collect();
            assert_eq!(prints.len(), count, "fingerprints of order {order}");
        }
    }

    #[test]
    fn right_regular_commutes_with_left() {
        let s3 = sym3().cayley_table();
        let x = coset_space(&s3, &[s3.identity()]).unwrap();
        let lambda = lambda_embedding(&s3, &x);
        let rho = right_regular_embedding(&s3, &x).unwrap();
        for l in &lambda {
            for r in &rho {
                assert_eq!(l.compose(r).unwrap(), r.compose(l).unwrap());
            }
        }
        let n = PermGroup::generate(6, &rho).unwrap();
        assert!(is_regular(&n, 6) && is_normalized(&n, &lambda));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm(n: usize) -> impl Strategy<Value = Perm> {
            Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn compose_is_associative(a in perm(6), b in perm(6), c in perm(6)) {
                prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
            }

            #[test]
            fn generated_group_is_closed(a in perm(5), b in perm(5)) {
                let g = PermGroup::generate(5, &[a, b]).unwrap();
                prop_assert_eq!(120 % g.order(), 0);
                for x in g.elements() {
                    prop_assert!(g.contains(&x.inverse()));
                    for y in g.elements() {
                        prop_assert!(g.contains(&x.compose(y).unwrap()));
                    }
                }
            }

            #[test]
            fn regularity_equals_sharp_transitivity(a in perm(4), b in perm(4)) {
                let g = PermGroup::generate(4, &[a, b]).unwrap();
                let sharp = g.order() == 4 && g.elements().iter().all(|x| x.is_identity() || x.fixed_points() == 0);
                prop_assert_eq!(is_regular(&g, 4), sharp);
            }
        }
    }
}
