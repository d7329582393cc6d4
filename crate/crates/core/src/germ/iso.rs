use super::{GarsideGerm, GermTable, ObjectId, SimpleId};

/// A map of objects and simples from one germ to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermIsomorphism {
    pub objects: Vec<ObjectId>,
    pub simples: Vec<SimpleId>,
}

/// A self-map of a germ, given on objects and simples.
pub type GermAutomorphism = GermIsomorphism;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not an isomorphism: {0}")]
pub struct IsoMismatch(pub String);

impl GermIsomorphism {
    pub fn identity(table: &GermTable) -> Self {
        GermIsomorphism {
            objects: table.object_ids().collect(),
            simples: table.simple_ids().collect(),
        }
    }

    pub fn object(&self, x: ObjectId) -> ObjectId {
        self.objects[x.index()]
    }

    pub fn simple(&self, s: SimpleId) -> SimpleId {
        self.simples[s.index()]
    }

    /// Matches objects and simples by name.
    pub fn by_names(from: &GermTable, to: &GermTable) -> Option<Self> {
        let objects = from
            .objects()
            .iter()
            .map(|o| to.object_by_name(&o.name))
            .collect::<Option<Vec<_>>>()?;
        let simples = from
            .simples()
            .iter()
            .map(|s| to.simple_by_name(&s.name))
            .collect::<Option<Vec<_>>>()?;
        Some(GermIsomorphism { objects, simples })
    }
}

fn is_bijection<T: Copy>(map: &[T], len: usize, index: impl Fn(T) -> usize) -> bool {
    if map.len() != len {
        return false;
    }
    let mut hit = vec![false; len];
    map.iter().all(|&v| {
        let i = index(v);
        i < len && !std::mem::replace(&mut hit[i], true)
    })
}

/// Checks that `iso` is an isomorphism of germs carrying the Garside map
/// and the Garside automorphism of `from` to those of `to`.
pub fn check_isomorphism(from: &GarsideGerm, to: &GarsideGerm, iso: &GermIsomorphism) -> Result<(), IsoMismatch> {
    let fail = |m: String| Err(IsoMismatch(m));
    if !is_bijection(&iso.objects, to.object_count(), |x| x.index()) || from.object_count() != to.object_count() {
        return fail("object map is not a bijection".into());
    }
    if !is_bijection(&iso.simples, to.simple_count(), |s| s.index()) || from.simple_count() != to.simple_count() {
        return fail("simple map is not a bijection".into());
    }
    for s in from.simple_ids() {
        let t = iso.simple(s);
        if to.source(t) != iso.object(from.source(s))
            || to.target(t) != iso.object(from.target(s))
            || to.length(t) != from.length(s)
        {
            return fail(format!("{} is not carried consistently", from.name(s)));
        }
    }
    for x in from.object_ids() {
        let y = iso.object(x);
        if iso.simple(from.identity(x)) != to.identity(y) {
            return fail(format!("identity at {} is not preserved", from.object_name(x)));
        }
        if iso.simple(from.delta(x)) != to.delta(y) {
            return fail(format!("delta at {} is not preserved", from.object_name(x)));
        }
        if iso.object(from.phi_obj(x)) != to.phi_obj(y) {
            return fail(format!("phi at {} is not preserved", from.object_name(x)));
        }
    }
    for s in from.simple_ids() {
        if iso.simple(from.phi(s)) != to.phi(iso.simple(s)) {
            return fail(format!("phi of {} is not preserved", from.name(s)));
        }
    }
    let products = from.explicit_products();
    if products.len() != to.explicit_products().len() {
        return fail("product counts differ".into());
    }
    for (a, b, c) in products {
        if to.product(iso.simple(a), iso.simple(b)) != Some(iso.simple(c)) {
            return fail(format!("product {} {} is not preserved", from.name(a), from.name(b)));
        }
    }
    Ok(())
}

/// Checks that `psi` is an automorphism of the germ table (endpoints,
/// lengths, identities and products), without reference to the Garside map.
pub fn check_table_automorphism(table: &GermTable, psi: &GermAutomorphism) -> Result<(), IsoMismatch> {
    let fail = |m: String| Err(IsoMismatch(m));
    if !is_bijection(&psi.objects, table.object_count(), |x| x.index()) {
        return fail("object map is not a bijection".into());
    }
    if !is_bijection(&psi.simples, table.simple_count(), |s| s.index()) {
        return fail("simple map is not a bijection".into());
    }
    for s in table.simple_ids() {
        let t = psi.simple(s);
        if table.source(t) != psi.object(table.source(s))
            || table.target(t) != psi.object(table.target(s))
            || table.length(t) != table.length(s)
        {
            return fail(format!("{} is not carried consistently", table.name(s)));
        }
    }
    for (a, b, c) in table.explicit_products() {
        if table.product(psi.simple(a), psi.simple(b)) != Some(psi.simple(c)) {
            return fail(format!("product {} {} is not preserved", table.name(a), table.name(b)));
        }
    }
    Ok(())
}
