use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Zero};

use super::linalg::{self, QMatrix, Q};
use crate::error::{Error, Result};
use crate::permcore::CayleyTable;

/// An element of `ℚ[x]/(f)` as power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coeffs: Vec<Q>,
}

impl FieldElem {
    pub fn from_coeffs(coeffs: Vec<Q>) -> FieldElem {
        FieldElem { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.coeffs)
    }

    /// `Some(c)` when the element is the rational `c`.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        FieldElem { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        FieldElem { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Q) -> FieldElem {
        FieldElem { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})a"),
                _ => format!("({c})a^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `E = ℚ[x]/(f)` for a monic integer polynomial `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    degree: usize,
}

impl NumberField {
    /// `min_poly` lists coefficients from the constant term up; it must be monic.
    pub fn new(min_poly: Vec<BigInt>) -> Result<NumberField> {
        let degree = min_poly.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
            Error::Malformed("minimal polynomial must have degree at least 1".into())
        })?;
        if !min_poly[degree].is_one() {
            return Err(Error::Malformed("minimal polynomial must be monic".into()));
        }
        Ok(NumberField { min_poly, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![Q::zero(); self.degree] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Q::one())
    }

    pub fn from_rational(&self, c: Q) -> FieldElem {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// The class of `x`.
    pub fn generator(&self) -> FieldElem {
        self.reduce(vec![Q::zero(), Q::one()])
    }

    pub fn element(&self, coeffs: Vec<Q>) -> Result<FieldElem> {
        if coeffs.len() != self.degree {
            return Err(Error::Malformed(format!(
                "field element has {} coordinates, expected {}",
                coeffs.len(),
                self.degree
            )));
        }
        Ok(FieldElem { coeffs })
    }

    /// Reduces a polynomial (constant term first) modulo `f`.
    fn reduce(&self, mut poly: Vec<Q>) -> FieldElem {
        let d = self.degree;
        for k in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            for (j, a) in self.min_poly[..d].iter().enumerate() {
                if !a.is_zero() {
                    poly[k - d + j] -= &c * Q::from_integer(a.clone());
                }
            }
        }
        poly.resize(d, Q::zero());
        FieldElem { coeffs: poly }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut prod = vec![Q::zero(); 2 * self.degree - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u32) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm against `f`. A non-constant
    /// gcd proves `f` reducible.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f: Vec<Q> = self.min_poly.iter().map(|c| Q::from_integer(c.clone())).collect();
        let (g, s) = poly_gcd_cofactor(a.coeffs.clone(), f);
        if g.len() > 1 {
            return Err(Error::Reducible(g.len() - 1));
        }
        let g0 = g[0].clone();
        Ok(self.reduce(s).scale(&g0.recip()))
    }

    /// Evaluates `f` at `a` inside the field.
    pub fn eval_min_poly(&self, a: &FieldElem) -> FieldElem {
        let mut acc = self.zero();
        for c in self.min_poly.iter().rev() {
            acc = self.mul(&acc, a);
            acc.coeffs[0] += Q::from_integer(c.clone());
        }
        acc
    }

    /// Matrix of multiplication by `a` (row `k` is `a · x^k`).
    pub fn mul_matrix(&self, a: &FieldElem) -> QMatrix {
        let mut row = a.clone();
        let x = self.generator();
        let mut out = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            out.push(row.coeffs.clone());
            row = self.mul(&row, &x);
        }
        out
    }

    pub fn trace(&self, a: &FieldElem) -> Q {
        let m = self.mul_matrix(a);
        (0..self.degree).map(|k| m[k][k].clone()).sum()
    }

    pub fn norm(&self, a: &FieldElem) -> Q {
        linalg::det(&self.mul_matrix(a))
    }
}

fn trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(mut a: Vec<Q>, b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    trim(&mut a);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if a.len() <= db {
        return (vec![Q::zero()], a);
    }
    let mut quot = vec![Q::zero(); a.len() - db];
    for k in (db..a.len()).rev() {
        let c = &a[k] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            a[k - db + j] -= &c * bj;
        }
        quot[k - db] = c;
    }
    a.truncate(db.max(1));
    trim(&mut a);
    (quot, a)
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out: Vec<Q> = (0..n)
        .map(|k| a.get(k).cloned().unwrap_or_default() - b.get(k).cloned().unwrap_or_default())
        .collect();
    trim(&mut out);
    out
}

/// `(g, s)` with `g = gcd(a, f)` and `s·a ≡ g (mod f)`.
fn poly_gcd_cofactor(mut a: Vec<Q>, f: Vec<Q>) -> (Vec<Q>, Vec<Q>) {
    trim(&mut a);
    let (mut r0, mut r1) = (f, a);
    let (mut s0, mut s1) = (vec![Q::zero()], vec![Q::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (quot, rem) = poly_divrem(r0.clone(), &r1);
        let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

/// A field automorphism, determined by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    gen_image: FieldElem,
    /// Row `k` is `σ(x^k)`.
    matrix: QMatrix,
}

impl Automorphism {
    pub fn new(field: &NumberField, gen_image: FieldElem) -> Result<Automorphism> {
        if gen_image.coeffs.len() != field.degree() {
            return Err(Error::InvalidAutomorphism(format!(
                "image {gen_image} has the wrong number of coordinates"
            )));
        }
        if !field.eval_min_poly(&gen_image).is_zero() {
            return Err(Error::InvalidAutomorphism(format!(
                "image {gen_image} is not a root of the minimal polynomial"
            )));
        }
        let mut matrix = Vec::with_capacity(field.degree());
        let mut power = field.one();
        for _ in 0..field.degree() {
            matrix.push(power.coeffs.clone());
            power = field.mul(&power, &gen_image);
        }
        Ok(Automorphism { gen_image, matrix })
    }

    pub fn identity(field: &NumberField) -> Automorphism {
        Automorphism::new(field, field.generator()).expect("the generator is a root")
    }

    pub fn gen_image(&self) -> &FieldElem {
        &self.gen_image
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        FieldElem { coeffs: linalg::vec_mat(&x.coeffs, &self.matrix) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, field: &NumberField, other: &Automorphism) -> Automorphism {
        Automorphism::new(field, self.apply(&other.gen_image)).expect("composites of automorphisms are automorphisms")
    }
}

/// `Gal(E/ℚ)` as an explicit list. The identity is element 0; the rest are
/// sorted by the coordinates of their generator images.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    elements: Vec<Automorphism>,
    table: CayleyTable,
    generators: Vec<usize>,
}

impl GaloisGroup {
    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element indices of the supplied generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn apply(&self, g: usize, x: &FieldElem) -> FieldElem {
        self.elements[g].apply(x)
    }

    /// Matrix of `g` acting on coordinates (row convention).
    pub fn matrix(&self, g: usize) -> &QMatrix {
        self.elements[g].matrix()
    }
}

/// Closes `gens` under composition; the closure must have exactly
/// `[E:ℚ]` elements.
pub fn build_galois_group(field: &NumberField, gens: &[FieldElem]) -> Result<GaloisGroup> {
    let gens: Vec<Automorphism> = gens
        .iter()
        .enumerate()
        .map(|(i, img)| {
            Automorphism::new(field, img.clone()).map_err(|e| match e {
                Error::InvalidAutomorphism(msg) => Error::InvalidAutomorphism(format!("generator {i}: {msg}")),
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let id = Automorphism::identity(field);
    let mut found: BTreeMap<FieldElem, Automorphism> = BTreeMap::new();
    found.insert(id.gen_image.clone(), id.clone());
    let mut frontier = vec![id.clone()];
    while let Some(s) = frontier.pop() {
        for g in &gens {
            let t = g.compose(field, &s);
            if !found.contains_key(&t.gen_image) {
                if found.len() >= field.degree() {
                    return Err(Error::NotGalois(format!(
                        "automorphism closure exceeds the degree {}",
                        field.degree()
                    )));
                }
                found.insert(t.gen_image.clone(), t.clone());
                frontier.push(t);
            }
        }
    }
    if found.len() != field.degree() {
        return Err(Error::NotGalois(format!(
            "automorphism closure has {} elements but the degree is {}",
            found.len(),
            field.degree()
        )));
    }
    let mut elements = vec![id.clone()];
    elements.extend(found.into_values().filter(|a| a.gen_image != id.gen_image));
    let index: BTreeMap<&FieldElem, usize> = elements.iter().enumerate().map(|(i, a)| (&a.gen_image, i)).collect();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&a.compose(field, b).gen_image]).collect())
        .collect();
    let table = CayleyTable::new(table, 0).map_err(|e| Error::NotGalois(e.to_string()))?;
    let generators = gens.iter().map(|g| index[&g.gen_image]).collect();
    Ok(GaloisGroup { elements, table, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::linalg::{q, qfrac};

    pub(crate) fn cyclo5() -> NumberField {
        NumberField::new([1, 1, 1, 1, 1].iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    fn elem(field: &NumberField, c: &[i64]) -> FieldElem {
        field.element(c.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn arithmetic_in_cyclo5() {
        let k = cyclo5();
        let z = k.generator();
        let z4 = k.pow(&z, 4);
        assert_eq!(k.mul(&z, &z4), k.one());
        assert_eq!(k.inv(&z).unwrap(), elem(&k, &[-1, -1, -1, -1]));
        let w = k.one().add(&z);
        let wi = k.inv(&w).unwrap();
        assert_eq!(k.mul(&w, &wi), k.one());
        assert!(matches!(k.inv(&k.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn reducible_polynomial_is_detected() {
        // x² − 1 = (x − 1)(x + 1)
        let k = NumberField::new(vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]).unwrap();
        let a = k.generator().sub(&k.one());
        assert!(matches!(k.inv(&a), Err(Error::Reducible(1))));
    }

    #[test]
    fn automorphisms_of_cyclo5() {
        let k = cyclo5();
        let z = k.generator();
        let sigma = Automorphism::new(&k, k.pow(&z, 2)).unwrap();
        assert_eq!(sigma.apply(&k.one()), k.one());
        assert_eq!(sigma.apply(&k.pow(&z, 2)), k.pow(&z, 4));
        let t = z.add(&k.pow(&z, 4));
        assert_eq!(sigma.apply(&t), k.pow(&z, 2).add(&k.pow(&z, 3)));
        assert!(Automorphism::new(&k, k.one()).is_err());
    }

    #[test]
    fn galois_group_closure() {
        let k = cyclo5();
        let g = build_galois_group(&k, &[k.pow(&k.generator(), 2)]).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.table().is_abelian());
        assert_eq!(g.table().identity(), 0);
        let sq = k.generator().add(&k.one()).neg();
        // −1−ζ is not a conjugate of ζ
        assert!(matches!(build_galois_group(&k, &[sq]), Err(Error::InvalidAutomorphism(_))));
        // ζ ↦ ζ⁴ only generates an order-2 subgroup
        assert!(matches!(build_galois_group(&k, &[k.pow(&k.generator(), 4)]), Err(Error::NotGalois(_))));
    }

    #[test]
    fn degree_one_field() {
        let k = NumberField::new(vec![BigInt::from(0), BigInt::from(1)]).unwrap();
        let g = build_galois_group(&k, &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(k.generator(), k.zero());
        assert_eq!(k.trace(&k.one()), q(1));
    }

    #[test]
    fn trace_and_norm() {
        let k = cyclo5();
        assert_eq!(k.trace(&k.one()), q(4));
        assert_eq!(k.trace(&k.generator()), q(-1));
        // N(1 − ζ) = Φ₅(1) = 5
        assert_eq!(k.norm(&k.one().sub(&k.generator())), q(5));
        assert_eq!(k.trace(&k.one().scale(&qfrac(1, 2))), q(2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element() -> impl Strategy<Value = FieldElem> {
            proptest::collection::vec((-6i64..6, 1i64..4), 4)
                .prop_map(|v| FieldElem::from_coeffs(v.into_iter().map(|(n, d)| qfrac(n, d)).collect()))
        }

        proptest! {
            #[test]
            fn field_axioms(a in element(), b in element(), c in element()) {
                let k = cyclo5();
                prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
                prop_assert_eq!(k.mul(&a, &b.add(&c)), k.mul(&a, &b).add(&k.mul(&a, &c)));
                prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
                if !a.is_zero() {
                    prop_assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
                }
            }

            #[test]
            fn automorphisms_are_ring_homomorphisms(a in element(), b in element(), r in -5i64..5) {
                let k = cyclo5();
                let g = build_galois_group(&k, &[k.pow(&k.generator(), 2)]).unwrap();
                for s in g.elements() {
                    prop_assert_eq!(s.apply(&a.add(&b)), s.apply(&a).add(&s.apply(&b)));
                    prop_assert_eq!(s.apply(&k.mul(&a, &b)), k.mul(&s.apply(&a), &s.apply(&b)));
                    prop_assert_eq!(s.apply(&k.from_rational(q(r))), k.from_rational(q(r)));
                    prop_assert!(k.eval_min_poly(s.gen_image()).is_zero());
                }
            }
        }
    }
}
