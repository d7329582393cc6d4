//! The m-divided germ: objects are factorizations of the Garside map into
//! `m` composable simples, simples are commuting ladders between them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free::{invert, multiply, normal_form, NormalForm};
use crate::germ::{check_isomorphism, validate, GarsideGerm, GermIsomorphism, GermTable, ObjectId, SimpleId};

/// All factorizations `(f_1, …, f_m)` of some `Δ_x`, sorted
/// lexicographically by simple id.
pub fn enumerate_subdivisions(base: &GarsideGerm, m: usize) -> Vec<Vec<SimpleId>> {
    assert!(m >= 1, "divisions need at least one factor");
    let mut out = Vec::new();
    for x in base.object_ids() {
        let delta = base.delta(x);
        let mut chain = vec![base.identity(x)];
        extend_chains(base, delta, m, &mut chain, &mut out);
    }
    out.sort();
    out
}

fn extend_chains(
    base: &GarsideGerm,
    delta: SimpleId,
    m: usize,
    chain: &mut Vec<SimpleId>,
    out: &mut Vec<Vec<SimpleId>>,
) {
    let last = *chain.last().expect("chain starts at the identity");
    if chain.len() == m {
        let mut factors: Vec<SimpleId> = chain
            .windows(2)
            .map(|w| base.quotient_opt(w[0], w[1]).expect("chain is increasing"))
            .collect();
        factors.push(base.quotient_opt(last, delta).expect("everything divides delta"));
        out.push(factors);
        return;
    }
    let next: Vec<SimpleId> = base.multiples(last).collect();
    for u in next {
        chain.push(u);
        extend_chains(base, delta, m, chain, out);
        chain.pop();
    }
}

fn tuple_name(base: &GermTable, items: &[SimpleId]) -> String {
    let names: Vec<&str> = items.iter().map(|&s| base.name(s)).collect();
    format!("({})", names.join(","))
}

/// The m-divided germ together with the data identifying its objects and
/// simples as tuples of base simples.
#[derive(Clone, Debug)]
pub struct DividedGerm {
    germ: GarsideGerm,
    base: GarsideGerm,
    m: usize,
    objects: Vec<Vec<SimpleId>>,
    object_index: HashMap<Vec<SimpleId>, ObjectId>,
    columns: Vec<Vec<SimpleId>>,
    ladder_index: HashMap<(ObjectId, Vec<SimpleId>), SimpleId>,
}

struct LadderCandidate {
    columns: Vec<SimpleId>,
    target: Vec<SimpleId>,
}

/// Ladders from the subdivision `f`, as column tuples with their targets.
fn ladders_from(base: &GarsideGerm, f: &[SimpleId]) -> Vec<LadderCandidate> {
    let m = f.len();
    let mut out = Vec::new();
    let mut columns = Vec::with_capacity(m);
    let mut target = Vec::with_capacity(m);
    fn go(
        base: &GarsideGerm,
        f: &[SimpleId],
        columns: &mut Vec<SimpleId>,
        target: &mut Vec<SimpleId>,
        out: &mut Vec<LadderCandidate>,
    ) {
        let m = f.len();
        let i = columns.len();
        if i == m {
            let diag = base
                .quotient_opt(columns[m - 1], f[m - 1])
                .expect("column divides factor");
            if let Some(g) = base.product(diag, base.phi(columns[0])) {
                target.push(g);
                out.push(LadderCandidate {
                    columns: columns.clone(),
                    target: target.clone(),
                });
                target.pop();
            }
            return;
        }
        for s in base.divisors(f[i]).collect::<Vec<_>>() {
            let g = if i == 0 {
                None
            } else {
                let diag = base
                    .quotient_opt(columns[i - 1], f[i - 1])
                    .expect("column divides factor");
                match base.product(diag, s) {
                    Some(g) => Some(g),
                    None => continue,
                }
            };
            columns.push(s);
            if let Some(g) = g {
                target.push(g);
            }
            go(base, f, columns, target, out);
            columns.pop();
            if g.is_some() {
                target.pop();
            }
        }
    }
    go(base, f, &mut columns, &mut target, &mut out);
    debug_assert!(out.iter().all(|c| c.target.len() == m));
    out
}

impl DividedGerm {
    /// Builds and validates the m-divided germ of `base`.
    pub fn build(base: &GarsideGerm, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::OutOfRange {
                family: "divided",
                param: 0,
                min: 1,
                max: i64::MAX,
            });
        }
        let objects = enumerate_subdivisions(base, m);
        let mut table = GermTable::new();
        let mut object_index = HashMap::with_capacity(objects.len());
        for f in &objects {
            let id = table.add_object(&tuple_name(base, f))?;
            object_index.insert(f.clone(), id);
        }
        let mut columns: Vec<Vec<SimpleId>> = objects
            .iter()
            .map(|f| f.iter().map(|&s| base.identity(base.source(s))).collect())
            .collect();
        let mut ladder_index = HashMap::new();
        for (i, c) in columns.iter().enumerate() {
            ladder_index.insert((ObjectId(i as u32), c.clone()), table.identity(ObjectId(i as u32)));
        }

        let candidates: Vec<Vec<LadderCandidate>> = objects.par_iter().map(|f| ladders_from(base, f)).collect();
        let mut targets = Vec::new();
        for (i, (f, ladders)) in objects.iter().zip(candidates).enumerate() {
            let src = ObjectId(i as u32);
            for l in ladders {
                if l.columns.iter().all(|&s| base.is_identity(s)) {
                    continue;
                }
                let tgt = *object_index
                    .get(&l.target)
                    .ok_or_else(|| Error::Internal("ladder target is not a subdivision".into()))?;
                let length = l.columns.iter().map(|&s| base.length(s)).sum();
                let name = format!("lad{}@{}", tuple_name(base, &l.columns), tuple_name(base, f));
                let id = table.add_simple(&name, src, tgt, length)?;
                ladder_index.insert((src, l.columns.clone()), id);
                columns.push(l.columns);
                targets.push(tgt);
            }
        }

        // Products: columnwise products that again form a ladder.
        let mut outgoing: Vec<Vec<SimpleId>> = vec![Vec::new(); objects.len()];
        for s in table.simple_ids() {
            if !table.is_identity(s) {
                outgoing[table.source(s).index()].push(s);
            }
        }
        let mut products = Vec::new();
        for a in table.simple_ids().filter(|&s| !table.is_identity(s)) {
            let src = table.source(a);
            for &b in &outgoing[table.target(a).index()] {
                let cols: Option<Vec<SimpleId>> = columns[a.index()]
                    .iter()
                    .zip(&columns[b.index()])
                    .map(|(&x, &y)| base.product(x, y))
                    .collect();
                let Some(cols) = cols else { continue };
                if let Some(&c) = ladder_index.get(&(src, cols)) {
                    if table.target(c) != table.target(b) {
                        return Err(Error::Internal("ladder product has the wrong target".into()));
                    }
                    products.push((a, b, c));
                }
            }
        }
        for (a, b, c) in products {
            table.add_product(a, b, c)?;
        }
        for (i, f) in objects.iter().enumerate() {
            let x = ObjectId(i as u32);
            let d = *ladder_index
                .get(&(x, f.clone()))
                .ok_or_else(|| Error::Internal("shift ladder is missing".into()))?;
            table.set_delta(x, d)?;
        }
        let germ = validate(table)?;
        let divided = DividedGerm {
            germ,
            base: base.clone(),
            m,
            objects,
            object_index,
            columns,
            ladder_index,
        };
        for x in divided.germ.object_ids() {
            if divided.germ.phi_obj(x) != divided.shift(x) {
                return Err(Error::Internal("Garside automorphism is not the cyclic shift".into()));
            }
        }
        Ok(divided)
    }

    pub fn germ(&self) -> &GarsideGerm {
        &self.germ
    }

    pub fn base(&self) -> &GarsideGerm {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The factorization represented by a divided object.
    pub fn factors(&self, x: ObjectId) -> &[SimpleId] {
        &self.objects[x.index()]
    }

    pub fn object(&self, factors: &[SimpleId]) -> Option<ObjectId> {
        self.object_index.get(factors).copied()
    }

    /// Columns of a ladder (identities for identity ladders).
    pub fn columns(&self, s: SimpleId) -> &[SimpleId] {
        &self.columns[s.index()]
    }

    pub fn ladder(&self, source: ObjectId, columns: &[SimpleId]) -> Option<SimpleId> {
        self.ladder_index.get(&(source, columns.to_vec())).copied()
    }

    /// Diagonals `s'_i` with `s_i s'_i = f_i`.
    pub fn diagonals(&self, s: SimpleId) -> Vec<SimpleId> {
        let f = self.factors(self.germ.source(s));
        self.columns(s)
            .iter()
            .zip(f)
            .map(|(&c, &fi)| self.base.quotient_opt(c, fi).expect("column divides factor"))
            .collect()
    }

    pub fn ladders_between(&self, f: ObjectId, g: ObjectId) -> Vec<SimpleId> {
        self.germ
            .simples_from(f)
            .iter()
            .copied()
            .filter(|&s| self.germ.target(s) == g)
            .collect()
    }

    /// `(f_2, …, f_m, φ(f_1))`.
    pub fn shift(&self, x: ObjectId) -> ObjectId {
        let f = self.factors(x);
        let mut g = f[1..].to_vec();
        g.push(self.base.phi(f[0]));
        self.object(&g).expect("shift of a subdivision is a subdivision")
    }

    /// `(1_x, …, 1_x, Δ_x)`.
    pub fn theta_object(&self, x: ObjectId) -> ObjectId {
        let mut f = vec![self.base.identity(x); self.m - 1];
        f.push(self.base.delta(x));
        self.object(&f).expect("theta of an object is a subdivision")
    }

    /// The image of a base simple: `m` ladders moving it from the last
    /// column to the first.
    pub fn theta_simple(&self, s: SimpleId) -> Result<NormalForm> {
        let x = self.base.source(s);
        let start = self.theta_object(x);
        if self.base.is_identity(s) {
            return Ok(NormalForm::identity(start));
        }
        let mut cur = start;
        let mut word = Vec::with_capacity(self.m);
        for j in (0..self.m).rev() {
            let cols: Vec<SimpleId> = self
                .factors(cur)
                .iter()
                .enumerate()
                .map(|(i, &fi)| {
                    if i == j {
                        s
                    } else {
                        self.base.identity(self.base.source(fi))
                    }
                })
                .collect();
            let l = self.ladder(cur, &cols).ok_or_else(|| {
                Error::Internal(format!("row {} of theta({}) is not a ladder", j + 1, self.base.name(s)))
            })?;
            word.push(l);
            cur = self.germ.target(l);
        }
        if cur != self.theta_object(self.base.target(s)) {
            return Err(Error::Internal("theta of a simple ends at the wrong object".into()));
        }
        normal_form(&self.germ, start, &word, 0)
    }

    /// Multiplicative extension of [`theta_simple`](Self::theta_simple).
    pub fn theta_morphism(&self, f: &NormalForm) -> Result<NormalForm> {
        let base = &self.base;
        let mut acc = NormalForm::identity(self.theta_object(f.source()));
        for &s in f.factors() {
            acc = multiply(&self.germ, &acc, &self.theta_simple(s)?)?;
        }
        let mut at = f.factors().last().map_or(f.source(), |&s| base.target(s));
        for _ in 0..f.delta_exp().unsigned_abs() {
            let step = if f.delta_exp() > 0 {
                let step = self.theta_simple(base.delta(at))?;
                at = base.phi_obj(at);
                step
            } else {
                at = base.phi_power_obj(at, -1);
                invert(&self.germ, &self.theta_simple(base.delta(at))?)
            };
            acc = multiply(&self.germ, &acc, &step)?;
        }
        Ok(acc)
    }
}

/// The identification of the `eq`-divided germ with the `e`-divided germ
/// of the `q`-divided germ.
#[derive(Clone, Debug)]
pub struct SubdivisionIso {
    pub fine: DividedGerm,
    pub coarse_base: DividedGerm,
    pub coarse: DividedGerm,
    pub iso: GermIsomorphism,
}

/// Builds both sides, the grouping bijection, and checks it is an
/// isomorphism of Garside germs.
pub fn subdivision_iso(base: &GarsideGerm, e: usize, q: usize) -> Result<SubdivisionIso> {
    let fine = DividedGerm::build(base, e * q)?;
    let coarse_base = DividedGerm::build(base, q)?;
    let coarse = DividedGerm::build(coarse_base.germ(), e)?;
    let inner = &coarse_base;
    let internal = |m: &str| Error::Internal(format!("subdivision grouping: {m}"));

    // C_q ladders L_1..L_e for a fine object, starting at G_1.
    let blocks = |f: &[SimpleId]| -> Result<(ObjectId, Vec<ObjectId>)> {
        let first: Vec<SimpleId> = (0..q)
            .map(|i| {
                base.evaluate(base.source(f[i * e]), &f[i * e..(i + 1) * e])
                    .expect("factors compose")
            })
            .collect();
        let g1 = inner
            .object(&first)
            .ok_or_else(|| internal("block product is not a subdivision"))?;
        let mut gs = vec![g1];
        for j in 0..e - 1 {
            let cols: Vec<SimpleId> = (0..q).map(|i| f[i * e + j]).collect();
            let l = inner
                .ladder(gs[j], &cols)
                .ok_or_else(|| internal("grouped columns are not a ladder"))?;
            gs.push(inner.germ().target(l));
        }
        Ok((g1, gs))
    };

    let mut objects = Vec::with_capacity(fine.germ().object_count());
    let mut stairs = Vec::with_capacity(fine.germ().object_count());
    for x in fine.germ().object_ids() {
        let f = fine.factors(x);
        let (_, gs) = blocks(f)?;
        let ladders: Vec<SimpleId> = (0..e)
            .map(|j| {
                let cols: Vec<SimpleId> = (0..q).map(|i| f[i * e + j]).collect();
                inner
                    .ladder(gs[j], &cols)
                    .ok_or_else(|| internal("grouped columns are not a ladder"))
            })
            .collect::<Result<_>>()?;
        objects.push(
            coarse
                .object(&ladders)
                .ok_or_else(|| internal("grouped object is not a subdivision"))?,
        );
        stairs.push(gs);
    }
    let mut simples = Vec::with_capacity(fine.germ().simple_count());
    for s in fine.germ().simple_ids() {
        let (src, tgt) = (fine.germ().source(s), fine.germ().target(s));
        let cols = fine.columns(s);
        let parts: Vec<SimpleId> = (0..e)
            .map(|j| {
                let c: Vec<SimpleId> = (0..q).map(|i| cols[i * e + j]).collect();
                let l = inner
                    .ladder(stairs[src.index()][j], &c)
                    .ok_or_else(|| internal("grouped ladder columns are not a ladder"))?;
                if inner.germ().target(l) != stairs[tgt.index()][j] {
                    return Err(internal("grouped ladder has the wrong target"));
                }
                Ok(l)
            })
            .collect::<Result<_>>()?;
        simples.push(
            coarse
                .ladder(objects[src.index()], &parts)
                .ok_or_else(|| internal("grouped simple is not a ladder"))?,
        );
    }
    let iso = GermIsomorphism { objects, simples };
    check_isomorphism(fine.germ(), coarse.germ(), &iso).map_err(|e| Error::Internal(e.0))?;
    Ok(SubdivisionIso {
        fine,
        coarse_base,
        coarse,
        iso,
    })
}

impl SubdivisionIso {
    /// Checks that the fixed subgerm of the fine germ under `φ^{ep}` is the
    /// `e`-divided germ of the fixed subgerm of the `q`-divided germ under
    /// `φ^p`. Returns `false` when the latter is empty and nothing is
    /// checked.
    pub fn check_fixed(&self, e: usize, p: i64) -> Result<bool> {
        use crate::conjugacy::fixed_subgerm;
        let fine = fixed_subgerm(self.fine.germ(), &self.fine.germ().phi_automorphism(e as i64 * p))?;
        let inner = fixed_subgerm(self.coarse_base.germ(), &self.coarse_base.germ().phi_automorphism(p))?;
        if inner.subgerm.object_count() == 0 {
            if fine.subgerm.object_count() != 0 {
                return Err(Error::Internal(
                    "fixed fine germ is non-empty but the coarse one is empty".into(),
                ));
            }
            return Ok(false);
        }
        let divided = DividedGerm::build(&inner.subgerm, e)?;
        let internal = |m: &str| Error::Internal(format!("fixed subdivision: {m}"));
        let objects = fine
            .object_inclusion
            .iter()
            .map(|&x| {
                let name = self.coarse.germ().object_name(self.iso.object(x));
                divided.germ().object_by_name(name).ok_or_else(|| internal(name))
            })
            .collect::<Result<Vec<_>>>()?;
        let simples = fine
            .simple_inclusion
            .iter()
            .map(|&s| {
                let name = self.coarse.germ().name(self.iso.simple(s));
                divided.germ().simple_by_name(name).ok_or_else(|| internal(name))
            })
            .collect::<Result<Vec<_>>>()?;
        let iso = GermIsomorphism { objects, simples };
        check_isomorphism(&fine.subgerm, divided.germ(), &iso).map_err(|e| Error::Internal(e.0))?;
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{parse_word, power};
    use crate::germ::{parse_germ, PhiOrder};

    fn a2() -> GarsideGerm {
        validate(parse_germ(include_str!("../../../fixtures/a2.germ")).unwrap()).unwrap()
    }

    fn object_named(d: &DividedGerm, name: &str) -> ObjectId {
        d.germ()
            .object_by_name(name)
            .unwrap_or_else(|| panic!("no object {name}"))
    }

    #[test]
    fn subdivision_counts() {
        let g = a2();
        let counts: Vec<usize> = (1..=4).map(|m| enumerate_subdivisions(&g, m).len()).collect();
        assert_eq!(counts, [1, 6, 17, 36]);
    }

    #[test]
    fn three_divided_hexagon() {
        let g = a2();
        let d = DividedGerm::build(&g, 3).unwrap();
        assert_eq!(d.germ().object_count(), 17);
        assert_eq!(d.germ().phi_order(), PhiOrder::Finite(6));
        let start = object_named(&d, "(id@x,id@x,D)");
        let atoms: Vec<&str> = d
            .germ()
            .atoms()
            .iter()
            .filter(|&&a| d.germ().source(a) == start)
            .map(|&a| d.germ().object_name(d.germ().target(a)))
            .collect();
        assert_eq!(atoms.len(), 2);
        assert!(atoms.contains(&"(id@x,s,ts)") && atoms.contains(&"(id@x,t,st)"));
        let target = object_named(&d, "(id@x,s,ts)");
        assert_eq!(d.ladders_between(start, target).len(), 1);
        for x in d.germ().object_ids() {
            assert!(d.ladders_between(x, x).contains(&d.germ().identity(x)));
            assert!(d.ladders_between(x, d.shift(x)).contains(&d.germ().delta(x)));
        }
    }

    #[test]
    fn one_division_is_the_base() {
        let g = a2();
        let d = DividedGerm::build(&g, 1).unwrap();
        assert_eq!(d.germ().object_count(), 1);
        assert_eq!(d.germ().simple_count(), g.simple_count());
        assert_eq!(d.germ().phi_order(), g.phi_order());
    }

    #[test]
    fn theta_is_multiplicative() {
        let g = a2();
        for m in 1..=3 {
            let d = DividedGerm::build(&g, m).unwrap();
            let w = |t| parse_word(&g, t).unwrap();
            let th = |t| d.theta_morphism(&w(t)).unwrap();
            let sts = multiply(d.germ(), &multiply(d.germ(), &th("s"), &th("t")).unwrap(), &th("s")).unwrap();
            assert_eq!(sts, th("D^1"));
            assert_eq!(
                th("D^1"),
                NormalForm::delta_power(d.theta_object(ObjectId(0)), m as i64)
            );
            assert!(th("").is_identity());
            let f = w("s t t D^-1");
            let lhs = d.theta_morphism(&power(&g, &f, 2).unwrap()).unwrap();
            let rhs = power(d.germ(), &d.theta_morphism(&f).unwrap(), 2).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn grouping_isomorphism() {
        let g = a2();
        for (e, q) in [(1, 3), (2, 2), (3, 2), (2, 3)] {
            let iso = subdivision_iso(&g, e, q).unwrap();
            assert_eq!(iso.fine.germ().object_count(), iso.coarse.germ().object_count());
        }
        let iso = subdivision_iso(&g, 2, 3).unwrap();
        assert!(iso.check_fixed(2, 4).unwrap());
    }
}
