//! Garside germs: finite graphs of simple morphisms with a partial,
//! associative product.
//!
//! A [`GermTable`] is the raw data (objects, simples, declared products).
//! [`validate`] checks the Garside germ axioms and produces a
//! [`GarsideGerm`], which carries the derived structure: the Garside map at
//! every object, complements, the Garside automorphism and the divisibility
//! lattices used by every other module.

mod iso;
mod parse;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use iso::{check_isomorphism, check_table_automorphism, GermAutomorphism, GermIsomorphism, IsoMismatch};
pub use parse::{parse_germ, ParseError, ParseErrorKind, HEADER};
pub use validate::{validate, ValidationError};

/// Dense index of an object, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub u32);

/// Dense index of a simple morphism, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl SimpleId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectRef {
    pub id: ObjectId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleRef {
    pub id: SimpleId,
    pub name: String,
    pub source: ObjectId,
    pub target: ObjectId,
    /// Zero exactly for identities.
    pub length: u32,
}

/// Structural problems detected while assembling a [`GermTable`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("name {0:?} is reserved")]
    ReservedName(String),
    #[error("duplicate object {0:?}")]
    DuplicateObject(String),
    #[error("duplicate simple {0:?}")]
    DuplicateSimple(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown simple {0:?}")]
    UnknownSimple(String),
    #[error("simple {0:?} must have positive length")]
    ZeroLength(String),
    #[error("product {a} {b}: target of {a} is not the source of {b}")]
    NotComposable { a: String, b: String },
    #[error("product {a} {b} = {c}: endpoints of {c} do not match")]
    ProductEndpoints { a: String, b: String, c: String },
    #[error("product {a} {b} = {c}: length is not additive")]
    NonAdditive { a: String, b: String, c: String },
    #[error("product {a} {b} declared with two different values")]
    ConflictingProduct { a: String, b: String },
    #[error("delta of object {0:?} declared twice")]
    DuplicateDelta(String),
    #[error("delta {simple} does not start at object {object}")]
    DeltaSource { object: String, simple: String },
}

const RESERVED: [&str; 5] = ["object", "simple", "product", "delta", "len"];

/// Whether `name` is acceptable as an object or simple name.
///
/// Besides `[A-Za-z0-9_'@-]`, parentheses and commas are accepted so that
/// generated names of divided germs (`(f1,f2,f3)`) stay representable.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "_'@-(),".contains(c))
}

fn check_name(name: &str) -> std::result::Result<(), TableError> {
    if !is_valid_name(name) {
        return Err(TableError::InvalidName(name.to_string()));
    }
    if RESERVED.contains(&name) {
        return Err(TableError::ReservedName(name.to_string()));
    }
    Ok(())
}

/// Name of the implicit identity at an object.
pub fn identity_name(object: &str) -> String {
    format!("id@{object}")
}

/// Objects, simples and the declared partial product.
///
/// Identities are created together with their object and compose
/// implicitly; only products of two non-identity simples are stored.
#[derive(Clone, Debug, Default)]
pub struct GermTable {
    objects: Vec<ObjectRef>,
    simples: Vec<SimpleRef>,
    identities: Vec<SimpleId>,
    products: HashMap<(SimpleId, SimpleId), SimpleId>,
    declared_delta: Vec<Option<SimpleId>>,
    object_names: HashMap<String, ObjectId>,
    simple_names: HashMap<String, SimpleId>,
}

impl GermTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: &str) -> std::result::Result<ObjectId, TableError> {
        check_name(name)?;
        if self.object_names.contains_key(name) {
            return Err(TableError::DuplicateObject(name.to_string()));
        }
        let id_name = identity_name(name);
        if self.simple_names.contains_key(&id_name) {
            return Err(TableError::DuplicateSimple(id_name));
        }
        let id = ObjectId(self.objects.len() as u32);
        self.objects.push(ObjectRef {
            id,
            name: name.to_string(),
        });
        self.object_names.insert(name.to_string(), id);
        let sid = SimpleId(self.simples.len() as u32);
        self.simples.push(SimpleRef {
            id: sid,
            name: id_name.clone(),
            source: id,
            target: id,
            length: 0,
        });
        self.simple_names.insert(id_name, sid);
        self.identities.push(sid);
        self.declared_delta.push(None);
        Ok(id)
    }

    pub fn add_simple(
        &mut self,
        name: &str,
        source: ObjectId,
        target: ObjectId,
        length: u32,
    ) -> std::result::Result<SimpleId, TableError> {
        check_name(name)?;
        if name.starts_with("id@") {
            return Err(TableError::ReservedName(name.to_string()));
        }
        if self.simple_names.contains_key(name) {
            return Err(TableError::DuplicateSimple(name.to_string()));
        }
        if length == 0 {
            return Err(TableError::ZeroLength(name.to_string()));
        }
        let id = SimpleId(self.simples.len() as u32);
        self.simples.push(SimpleRef {
            id,
            name: name.to_string(),
            source,
            target,
            length,
        });
        self.simple_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares `a b = c`.
    ///
    /// Products involving an identity are accepted when they agree with the
    /// unit law and are otherwise not stored.
    pub fn add_product(&mut self, a: SimpleId, b: SimpleId, c: SimpleId) -> std::result::Result<(), TableError> {
        let (sa, sb, sc) = (self.simple(a), self.simple(b), self.simple(c));
        let names = || (sa.name.clone(), sb.name.clone(), sc.name.clone());
        if sa.target != sb.source {
            return Err(TableError::NotComposable {
                a: sa.name.clone(),
                b: sb.name.clone(),
            });
        }
        if sc.source != sa.source || sc.target != sb.target {
            let (a, b, c) = names();
            return Err(TableError::ProductEndpoints { a, b, c });
        }
        if sa.length + sb.length != sc.length {
            let (a, b, c) = names();
            return Err(TableError::NonAdditive { a, b, c });
        }
        if self.is_identity(a) || self.is_identity(b) {
            // Additivity already forces c to be the other factor's length;
            // the unit law forces the value itself.
            let expected = if self.is_identity(a) { b } else { a };
            if expected != c {
                return Err(TableError::ConflictingProduct {
                    a: sa.name.clone(),
                    b: sb.name.clone(),
                });
            }
            return Ok(());
        }
        match self.products.get(&(a, b)) {
            Some(&prev) if prev != c => Err(TableError::ConflictingProduct {
                a: sa.name.clone(),
                b: sb.name.clone(),
            }),
            _ => {
                self.products.insert((a, b), c);
                Ok(())
            }
        }
    }

    pub fn set_delta(&mut self, object: ObjectId, simple: SimpleId) -> std::result::Result<(), TableError> {
        let s = self.simple(simple);
        if s.source != object {
            return Err(TableError::DeltaSource {
                object: self.object(object).name.clone(),
                simple: s.name.clone(),
            });
        }
        let slot = &mut self.declared_delta[object.index()];
        if slot.is_some() {
            return Err(TableError::DuplicateDelta(self.objects[object.index()].name.clone()));
        }
        *slot = Some(simple);
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn simple_count(&self) -> usize {
        self.simples.len()
    }

    pub fn objects(&self) -> &[ObjectRef] {
        &self.objects
    }

    pub fn simples(&self) -> &[SimpleRef] {
        &self.simples
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.objects.len() as u32).map(ObjectId)
    }

    pub fn simple_ids(&self) -> impl Iterator<Item = SimpleId> + '_ {
        (0..self.simples.len() as u32).map(SimpleId)
    }

    pub fn object(&self, id: ObjectId) -> &ObjectRef {
        &self.objects[id.index()]
    }

    pub fn simple(&self, id: SimpleId) -> &SimpleRef {
        &self.simples[id.index()]
    }

    pub fn name(&self, id: SimpleId) -> &str {
        &self.simples[id.index()].name
    }

    pub fn object_name(&self, id: ObjectId) -> &str {
        &self.objects[id.index()].name
    }

    pub fn source(&self, id: SimpleId) -> ObjectId {
        self.simples[id.index()].source
    }

    pub fn target(&self, id: SimpleId) -> ObjectId {
        self.simples[id.index()].target
    }

    pub fn length(&self, id: SimpleId) -> u32 {
        self.simples[id.index()].length
    }

    pub fn identity(&self, object: ObjectId) -> SimpleId {
        self.identities[object.index()]
    }

    pub fn is_identity(&self, id: SimpleId) -> bool {
        self.simples[id.index()].length == 0
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.object_names.get(name).copied()
    }

    pub fn simple_by_name(&self, name: &str) -> Option<SimpleId> {
        self.simple_names.get(name).copied()
    }

    pub fn declared_delta(&self, object: ObjectId) -> Option<SimpleId> {
        self.declared_delta[object.index()]
    }

    /// The partial product, including the implicit unit law.
    pub fn product(&self, a: SimpleId, b: SimpleId) -> Option<SimpleId> {
        if self.target(a) != self.source(b) {
            return None;
        }
        if self.is_identity(a) {
            return Some(b);
        }
        if self.is_identity(b) {
            return Some(a);
        }
        self.products.get(&(a, b)).copied()
    }

    /// Declared products of two non-identity simples, sorted.
    pub fn explicit_products(&self) -> Vec<(SimpleId, SimpleId, SimpleId)> {
        let mut out: Vec<_> = self.products.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        out.sort_unstable();
        out
    }

    /// Folds a composable sequence through the partial product.
    pub fn evaluate(&self, start: ObjectId, word: &[SimpleId]) -> Option<SimpleId> {
        word.iter()
            .try_fold(self.identity(start), |acc, &s| self.product(acc, s))
    }
}

/// Order of the Garside automorphism.
///
/// Finite-type germs always produce `Finite`; the other variant exists so
/// that the cyclic/non-cyclic distinction is representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for PhiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiOrder::Finite(n) => write!(f, "{n}"),
            PhiOrder::Infinite => f.write_str("infinite"),
        }
    }
}

/// A validated Garside germ together with its derived structure.
#[derive(Clone, Debug)]
pub struct GarsideGerm {
    pub(crate) table: GermTable,
    pub(crate) delta: Vec<SimpleId>,
    pub(crate) complement: Vec<SimpleId>,
    pub(crate) phi_obj: Vec<ObjectId>,
    pub(crate) phi_obj_inv: Vec<ObjectId>,
    pub(crate) phi_simple: Vec<SimpleId>,
    pub(crate) phi_simple_inv: Vec<SimpleId>,
    pub(crate) phi_order: PhiOrder,
    pub(crate) atoms: Vec<SimpleId>,
    /// `S_{x->}` for every object, sorted by (length, id).
    pub(crate) out: Vec<Vec<SimpleId>>,
    /// Position of each simple in `out[source]`.
    pub(crate) local: Vec<u32>,
    /// Left divisors of each simple, as local indices at its source.
    pub(crate) down: Vec<FixedBitSet>,
    /// Simple left multiples of each simple, as local indices at its source.
    pub(crate) up: Vec<FixedBitSet>,
    /// `(a, ab) -> b`
    pub(crate) quot: HashMap<(SimpleId, SimpleId), SimpleId>,
}

impl Deref for GarsideGerm {
    type Target = GermTable;

    fn deref(&self) -> &GermTable {
        &self.table
    }
}

impl GarsideGerm {
    pub fn table(&self) -> &GermTable {
        &self.table
    }

    pub fn delta(&self, object: ObjectId) -> SimpleId {
        self.delta[object.index()]
    }

    pub fn is_delta(&self, s: SimpleId) -> bool {
        self.delta[self.source(s).index()] == s
    }

    pub fn complement(&self, s: SimpleId) -> SimpleId {
        self.complement[s.index()]
    }

    pub fn phi_obj(&self, x: ObjectId) -> ObjectId {
        self.phi_obj[x.index()]
    }

    pub fn phi(&self, s: SimpleId) -> SimpleId {
        self.phi_simple[s.index()]
    }

    pub fn phi_order(&self) -> PhiOrder {
        self.phi_order
    }

    fn reduce_exponent(&self, n: i64) -> i64 {
        match self.phi_order {
            PhiOrder::Finite(k) => n.rem_euclid(k as i64),
            PhiOrder::Infinite => n,
        }
    }

    /// `s^{phi^n}`; negative `n` uses the inverse permutation.
    pub fn phi_power(&self, s: SimpleId, n: i64) -> SimpleId {
        let n = self.reduce_exponent(n);
        let table = if n >= 0 { &self.phi_simple } else { &self.phi_simple_inv };
        (0..n.unsigned_abs()).fold(s, |acc, _| table[acc.index()])
    }

    pub fn phi_power_obj(&self, x: ObjectId, n: i64) -> ObjectId {
        let n = self.reduce_exponent(n);
        let table = if n >= 0 { &self.phi_obj } else { &self.phi_obj_inv };
        (0..n.unsigned_abs()).fold(x, |acc, _| table[acc.index()])
    }

    /// The Garside automorphism raised to `n`, as a germ automorphism.
    pub fn phi_automorphism(&self, n: i64) -> GermAutomorphism {
        GermAutomorphism {
            objects: self.object_ids().map(|x| self.phi_power_obj(x, n)).collect(),
            simples: self.simple_ids().map(|s| self.phi_power(s, n)).collect(),
        }
    }

    pub fn atoms(&self) -> &[SimpleId] {
        &self.atoms
    }

    /// `S_{x->}`, sorted by length then id.
    pub fn simples_from(&self, x: ObjectId) -> &[SimpleId] {
        &self.out[x.index()]
    }

    fn same_source(&self, a: SimpleId, b: SimpleId) -> Result<ObjectId> {
        let x = self.source(a);
        if x != self.source(b) {
            return Err(Error::SourceMismatch {
                left: self.name(a).to_string(),
                right: self.name(b).to_string(),
            });
        }
        Ok(x)
    }

    pub fn left_divides(&self, a: SimpleId, b: SimpleId) -> Result<bool> {
        self.same_source(a, b)?;
        Ok(self.divides_unchecked(a, b))
    }

    pub(crate) fn divides_unchecked(&self, a: SimpleId, b: SimpleId) -> bool {
        self.source(a) == self.source(b) && self.down[b.index()].contains(self.local[a.index()] as usize)
    }

    /// Left divisors of `s`, in (length, id) order.
    pub fn divisors(&self, s: SimpleId) -> impl Iterator<Item = SimpleId> + '_ {
        let row = &self.out[self.source(s).index()];
        self.down[s.index()].ones().map(move |i| row[i])
    }

    /// Simple left multiples of `s`, in (length, id) order.
    pub fn multiples(&self, s: SimpleId) -> impl Iterator<Item = SimpleId> + '_ {
        let row = &self.out[self.source(s).index()];
        self.up[s.index()].ones().map(move |i| row[i])
    }

    pub fn meet(&self, a: SimpleId, b: SimpleId) -> Result<SimpleId> {
        let x = self.same_source(a, b)?;
        Ok(self.meet_unchecked(x, a, b))
    }

    pub fn join(&self, a: SimpleId, b: SimpleId) -> Result<SimpleId> {
        let x = self.same_source(a, b)?;
        Ok(self.join_unchecked(x, a, b))
    }

    pub(crate) fn meet_unchecked(&self, x: ObjectId, a: SimpleId, b: SimpleId) -> SimpleId {
        let i = bits::last_common(&self.down[a.index()], &self.down[b.index()]).expect("identity divides everything");
        self.out[x.index()][i]
    }

    pub(crate) fn join_unchecked(&self, x: ObjectId, a: SimpleId, b: SimpleId) -> SimpleId {
        let i = bits::first_common(&self.up[a.index()], &self.up[b.index()]).expect("delta is a common multiple");
        self.out[x.index()][i]
    }

    /// The unique `c` with `a c = b`.
    pub fn quotient(&self, a: SimpleId, b: SimpleId) -> Result<SimpleId> {
        self.quotient_opt(a, b).ok_or_else(|| Error::NotADivisor {
            divisor: self.name(a).to_string(),
            of: self.name(b).to_string(),
        })
    }

    pub(crate) fn quotient_opt(&self, a: SimpleId, b: SimpleId) -> Option<SimpleId> {
        if a == b {
            return Some(self.identity(self.target(a)));
        }
        if self.is_identity(a) {
            return (self.source(b) == self.source(a)).then_some(b);
        }
        self.quot.get(&(a, b)).copied()
    }
}

/// Helpers over the raw blocks of a [`FixedBitSet`].
pub(crate) mod bits {
    use fixedbitset::FixedBitSet;

    pub fn last_common(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
        let bits = usize::BITS as usize;
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .enumerate()
            .rev()
            .find_map(|(i, (x, y))| {
                let w = x & y;
                (w != 0).then(|| i * bits + (bits - 1 - w.leading_zeros() as usize))
            })
    }

    pub fn first_common(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
        let bits = usize::BITS as usize;
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .enumerate()
            .find_map(|(i, (x, y))| {
                let w = x & y;
                (w != 0).then(|| i * bits + w.trailing_zeros() as usize)
            })
    }

    /// Whether `a & b` is contained in `set`.
    pub fn covers_common(set: &FixedBitSet, a: &FixedBitSet, b: &FixedBitSet) -> bool {
        set.as_slice()
            .iter()
            .zip(a.as_slice().iter().zip(b.as_slice()))
            .all(|(s, (x, y))| x & y & !s == 0)
    }
}
