//! Instance files: `E` by a minimal polynomial, `G` by generator images, an
//! integral basis of `E` and the subgroup `G′` fixing `L`.
//!
//! Rationals are written as JSON integers or as strings `"a"` / `"a/b"`.
//! Polynomial and field-element coefficients are listed constant term first.

use std::path::Path;
use std::str::FromStr;

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::linalg::{QMatrix, Q};
use crate::numfield::{build_galois_group, fixed_field, validate_integral_basis, FieldElem, GaloisGroup, Lattice, NumberField, SubfieldData};
use crate::permcore::{coset_space, lambda_embedding, CosetSpace, Perm};

pub const SCHEMA_VERSION: u32 = 1;

const CATALOG: &[(&str, &str)] = &[
    ("cyclo5", include_str!("../catalog/cyclo5.json")),
    ("biquad", include_str!("../catalog/biquad.json")),
    ("cubic2", include_str!("../catalog/cubic2.json")),
    ("quadi", include_str!("../catalog/quadi.json")),
];

/// Names of the built-in instances.
pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

pub fn catalog_instance(name: &str) -> Result<InstanceSpec> {
    let (_, text) = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog instance named {name:?}")))?;
    parse_instance(text)
}

/// A catalog name or a path to an instance file.
pub fn resolve(name_or_path: &str) -> Result<InstanceSpec> {
    if CATALOG.iter().any(|(n, _)| *n == name_or_path) {
        catalog_instance(name_or_path)
    } else {
        load_instance(name_or_path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self, what: &str) -> Result<Q> {
        match self {
            Number::Int(i) => Ok(Q::from_integer(BigInt::from(*i))),
            Number::Text(s) => parse_rational(s).ok_or_else(|| Error::Schema(format!("{what}: {s:?} is not a rational"))),
        }
    }

    fn integer(&self, what: &str) -> Result<BigInt> {
        match self {
            Number::Int(i) => Ok(BigInt::from(*i)),
            Number::Text(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Schema(format!("{what}: {s:?} is not an integer"))),
        }
    }
}

/// `"a"` or `"a/b"` with `b ≠ 0`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Q::from_integer),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceOptions {
    /// Primes checked in addition to the critical ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_search: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    schema_version: u32,
    name: String,
    #[serde(default)]
    description: String,
    min_poly: Vec<Number>,
    automorphism_gens: Vec<Vec<Number>>,
    #[serde(rename = "integral_basis_E")]
    integral_basis_e: Vec<Vec<Number>>,
    #[serde(rename = "declared_disc_E")]
    declared_disc_e: Number,
    #[serde(rename = "subgroup_Gprime")]
    subgroup_gprime: Vec<usize>,
    #[serde(default)]
    options: InstanceOptions,
}

/// A parsed instance, not yet checked against the mathematics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub name: String,
    pub description: String,
    pub min_poly: Vec<BigInt>,
    pub automorphism_gens: Vec<Vec<Q>>,
    pub integral_basis_e: QMatrix,
    pub declared_disc_e: BigInt,
    pub subgroup_gprime: Vec<usize>,
    pub options: InstanceOptions,
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<InstanceSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

/// Byte offset of a 1-based line and column.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => Error::Schema(e.to_string()),
        serde_json::error::Category::Eof => Error::Parse { offset: text.len(), message: e.to_string() },
        _ => Error::Parse { offset: byte_offset(text, e.line(), e.column()), message: e.to_string() },
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", raw.schema_version)));
    }
    let min_poly = raw.min_poly.iter().map(|c| c.integer("min_poly")).collect::<Result<Vec<_>>>()?;
    let automorphism_gens = raw
        .automorphism_gens
        .iter()
        .enumerate()
        .map(|(i, g)| g.iter().map(|c| c.rational(&format!("automorphism_gens[{i}]"))).collect())
        .collect::<Result<Vec<Vec<Q>>>>()?;
    let integral_basis_e = raw
        .integral_basis_e
        .iter()
        .map(|r| r.iter().map(|c| c.rational("integral_basis_E")).collect())
        .collect::<Result<QMatrix>>()?;
    Ok(InstanceSpec {
        name: raw.name,
        description: raw.description,
        min_poly,
        automorphism_gens,
        integral_basis_e,
        declared_disc_e: raw.declared_disc_e.integer("declared_disc_E")?,
        subgroup_gprime: raw.subgroup_gprime,
        options: raw.options,
    })
}

impl InstanceSpec {
    /// Canonical JSON with every number written as a string.
    pub fn to_json(&self) -> String {
        let text = |q: &Q| Number::Text(q.to_string());
        let raw = RawInstance {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            description: self.description.clone(),
            min_poly: self.min_poly.iter().map(|c| Number::Text(c.to_string())).collect(),
            automorphism_gens: self.automorphism_gens.iter().map(|g| g.iter().map(text).collect()).collect(),
            integral_basis_e: self.integral_basis_e.iter().map(|r| r.iter().map(text).collect()).collect(),
            declared_disc_e: Number::Text(self.declared_disc_e.to_string()),
            subgroup_gprime: self.subgroup_gprime.clone(),
            options: self.options.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("instance serialises")
    }

    /// Validates the instance and builds the field, group, coset space and `L`.
    pub fn build(&self) -> Result<Instance> {
        let field = NumberField::new(self.min_poly.clone())?;
        let d = field.degree();
        let mut problems = Vec::new();
        for (i, g) in self.automorphism_gens.iter().enumerate() {
            if g.len() != d {
                problems.push(format!("automorphism_gens[{i}] has {} coefficients, expected {d}", g.len()));
            }
        }
        if self.integral_basis_e.len() != d || self.integral_basis_e.iter().any(|r| r.len() != d) {
            problems.push(format!("integral_basis_E must be {d} rows of {d} rationals"));
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let gens: Vec<FieldElem> = self.automorphism_gens.iter().map(|g| FieldElem::from_coeffs(g.clone())).collect();
        let galois = build_galois_group(&field, &gens)?;
        let oe = validate_integral_basis(&field, &self.integral_basis_e, &self.declared_disc_e)?;
        if let Some(&bad) = self.subgroup_gprime.iter().find(|&&g| g >= galois.order()) {
            return Err(Error::InvalidSubgroup(format!("index {bad} out of range for |G| = {}", galois.order())));
        }
        if !self.subgroup_gprime.contains(&galois.table().identity()) {
            return Err(Error::InvalidSubgroup("G′ must contain the identity (index 0)".into()));
        }
        let mut gprime = self.subgroup_gprime.clone();
        gprime.sort_unstable();
        gprime.dedup();
        let subfield = fixed_field(&field, &galois, &gprime, &oe)?;
        let cosets = coset_space(galois.table(), &gprime)?;
        let lambda = lambda_embedding(galois.table(), &cosets);
        Ok(Instance { spec: self.clone(), field, galois, oe, gprime, cosets, lambda, subfield })
    }
}

/// A validated instance with everything derived from it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub field: NumberField,
    pub galois: GaloisGroup,
    pub oe: Lattice,
    pub gprime: Vec<usize>,
    pub cosets: CosetSpace,
    pub lambda: Vec<Perm>,
    pub subfield: SubfieldData,
}

impl Instance {
    pub fn setting(&self) -> crate::descent::Setting<'_> {
        crate::descent::Setting { field: &self.field, galois: &self.galois, cosets: &self.cosets, lambda: &self.lambda }
    }

    /// `[L:ℚ]`.
    pub fn degree(&self) -> usize {
        self.cosets.len()
    }
}
