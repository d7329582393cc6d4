//! Conjugacy of loops through summit sets, and fixed subgerms of
//! automorphisms.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free::{invert, multiply, NormalForm};
use crate::germ::{check_table_automorphism, validate, GarsideGerm, GermAutomorphism, GermTable, ObjectId, SimpleId};

/// Default number of elements a search may visit before giving up.
pub const DEFAULT_BUDGET: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: usize,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            parallel: false,
        }
    }
}

/// `c^{-1} g c = h`, equivalently `g c = c h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub g: NormalForm,
    pub c: NormalForm,
    pub h: NormalForm,
}

impl ConjugacyWitness {
    pub fn verify(&self, germ: &GarsideGerm) -> bool {
        let left = multiply(germ, &self.g, &self.c);
        let right = multiply(germ, &self.c, &self.h);
        matches!((left, right), (Ok(l), Ok(r)) if l == r)
    }
}

fn require_loop(germ: &GarsideGerm, g: &NormalForm) -> Result<()> {
    if g.is_loop(germ) {
        Ok(())
    } else {
        Err(Error::NotALoop(g.display(germ).to_string()))
    }
}

/// `c^{-1} g c`.
pub fn conjugate(germ: &GarsideGerm, g: &NormalForm, c: &NormalForm) -> Result<NormalForm> {
    require_loop(germ, g)?;
    let left = multiply(germ, &invert(germ, c), g)?;
    multiply(germ, &left, c)
}

/// Ordering key: larger is closer to a summit.
fn score(g: &NormalForm) -> (i64, i64) {
    (g.inf(), -g.sup())
}

fn cycling_conjugator(germ: &GarsideGerm, g: &NormalForm) -> NormalForm {
    NormalForm::from_simple(germ, g.factors()[0])
}

fn decycling_conjugator(germ: &GarsideGerm, g: &NormalForm) -> NormalForm {
    let last = *g.factors().last().expect("non-empty");
    invert(
        germ,
        &NormalForm::from_simple(germ, germ.phi_power(last, g.delta_exp())),
    )
}

/// Conjugators by one simple or the inverse of one simple.
fn simple_conjugators(germ: &GarsideGerm, x: ObjectId) -> Vec<NormalForm> {
    let mut out: Vec<NormalForm> = germ
        .simples_from(x)
        .iter()
        .filter(|&&s| !germ.is_identity(s))
        .map(|&s| NormalForm::from_simple(germ, s))
        .collect();
    out.extend(
        germ.simple_ids()
            .filter(|&s| germ.target(s) == x && !germ.is_identity(s))
            .map(|s| invert(germ, &NormalForm::from_simple(germ, s))),
    );
    out
}

struct Walk<'a> {
    germ: &'a GarsideGerm,
    steps: usize,
    budget: usize,
}

impl Walk<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::LimitExceeded {
                what: "cycling and decycling",
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Iterates one kind of move, keeping the earliest best element; stops
    /// after `l * |S|` moves without improvement.
    fn improve(
        &mut self,
        start: (NormalForm, NormalForm),
        step: fn(&GarsideGerm, &NormalForm) -> NormalForm,
    ) -> Result<(NormalForm, NormalForm)> {
        let germ = self.germ;
        let bound = (start.0.canonical_length() * germ.simple_count()).max(1);
        let mut best = start.clone();
        let (mut cur, mut conj) = start;
        let mut stall = 0;
        while stall < bound && cur.canonical_length() > 0 {
            self.tick()?;
            let c = step(germ, &cur);
            cur = conjugate(germ, &cur, &c)?;
            conj = multiply(germ, &conj, &c)?;
            if score(&cur) > score(&best.0) {
                best = (cur.clone(), conj.clone());
                stall = 0;
            } else {
                stall += 1;
            }
        }
        Ok(best)
    }
}

/// Conjugates `g` to a summit by cycling, decycling, and a final check
/// against every simple conjugator.
pub fn to_summit(germ: &GarsideGerm, g: &NormalForm, opts: &SearchOptions) -> Result<ConjugacyWitness> {
    require_loop(germ, g)?;
    let mut walk = Walk {
        germ,
        steps: 0,
        budget: opts.budget,
    };
    let mut cur = (g.clone(), NormalForm::identity(g.source()));
    'outer: loop {
        cur = walk.improve(cur, cycling_conjugator)?;
        cur = walk.improve(cur, decycling_conjugator)?;
        for c in simple_conjugators(germ, cur.0.source()) {
            walk.tick()?;
            let h = conjugate(germ, &cur.0, &c)?;
            if score(&h) > score(&cur.0) {
                let conj = multiply(germ, &cur.1, &c)?;
                cur = (h, conj);
                continue 'outer;
            }
        }
        break;
    }
    let (h, c) = cur;
    Ok(ConjugacyWitness { g: g.clone(), c, h })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummitElement {
    pub element: NormalForm,
    /// Conjugates the original element to `element`.
    pub conjugator: NormalForm,
}

#[derive(Clone, Debug)]
pub struct SummitSet {
    /// Sorted by element.
    pub elements: Vec<SummitElement>,
    pub inf: i64,
    pub sup: i64,
    /// Index of the summit reached from the original element by cycling
    /// and decycling.
    pub start: usize,
}

impl SummitSet {
    pub fn find(&self, h: &NormalForm) -> Option<&SummitElement> {
        self.elements
            .binary_search_by(|e| e.element.cmp(h))
            .ok()
            .map(|i| &self.elements[i])
    }
}

enum Bfs {
    Done(NormalForm, HashMap<NormalForm, NormalForm>),
    Improved(NormalForm, NormalForm),
}

fn neighbours(germ: &GarsideGerm, h: &NormalForm, conj: &NormalForm) -> Result<Vec<(NormalForm, NormalForm)>> {
    let mut out = Vec::new();
    for &s in germ.simples_from(h.source()) {
        if germ.is_identity(s) {
            continue;
        }
        let c = NormalForm::from_simple(germ, s);
        let next = conjugate(germ, h, &c)?;
        if score(&next) >= score(h) {
            out.push((next, multiply(germ, conj, &c)?));
        }
    }
    Ok(out)
}

fn summit_bfs(germ: &GarsideGerm, start: (NormalForm, NormalForm), opts: &SearchOptions) -> Result<Bfs> {
    let key = score(&start.0);
    let root = start.0.clone();
    let mut seen: HashMap<NormalForm, NormalForm> = HashMap::new();
    seen.insert(start.0.clone(), start.1.clone());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let expanded: Vec<Result<Vec<(NormalForm, NormalForm)>>> = if opts.parallel {
            frontier.par_iter().map(|(h, c)| neighbours(germ, h, c)).collect()
        } else {
            frontier.iter().map(|(h, c)| neighbours(germ, h, c)).collect()
        };
        let mut next = Vec::new();
        for batch in expanded {
            for (h, c) in batch? {
                if score(&h) > key {
                    return Ok(Bfs::Improved(h, c));
                }
                if !seen.contains_key(&h) {
                    if seen.len() >= opts.budget {
                        return Err(Error::LimitExceeded {
                            what: "summit set",
                            budget: opts.budget,
                        });
                    }
                    seen.insert(h.clone(), c.clone());
                    next.push((h, c));
                }
            }
        }
        frontier = next;
    }
    Ok(Bfs::Done(root, seen))
}

/// All summits conjugate to `g`, each with a conjugator from `g`.
pub fn summit_set(germ: &GarsideGerm, g: &NormalForm, opts: &SearchOptions) -> Result<SummitSet> {
    let w = to_summit(germ, g, opts)?;
    let mut start = (w.h, w.c);
    loop {
        match summit_bfs(germ, start, opts)? {
            Bfs::Done(root, seen) => {
                let mut elements: Vec<SummitElement> = seen
                    .into_iter()
                    .map(|(element, conjugator)| SummitElement { element, conjugator })
                    .collect();
                elements.sort_by(|a, b| a.element.cmp(&b.element));
                let (inf, sup) = (root.inf(), root.sup());
                let start = elements
                    .iter()
                    .position(|e| e.element == root)
                    .expect("root is visited");
                return Ok(SummitSet {
                    elements,
                    inf,
                    sup,
                    start,
                });
            }
            Bfs::Improved(h, c) => {
                let w = to_summit(germ, &h, opts)?;
                start = (w.h, multiply(germ, &c, &w.c)?);
            }
        }
    }
}

/// Decides conjugacy of two loops; a negative answer is certified by the
/// complete summit set of `g`.
pub fn are_conjugate(
    germ: &GarsideGerm,
    g: &NormalForm,
    h: &NormalForm,
    opts: &SearchOptions,
) -> Result<Option<ConjugacyWitness>> {
    require_loop(germ, g)?;
    require_loop(germ, h)?;
    let to_h = to_summit(germ, h, opts)?;
    let set = summit_set(germ, g, opts)?;
    let Some(found) = set.find(&to_h.h) else {
        return Ok(None);
    };
    let c = multiply(germ, &found.conjugator, &invert(germ, &to_h.c))?;
    let w = ConjugacyWitness {
        g: g.clone(),
        c,
        h: h.clone(),
    };
    if !w.verify(germ) {
        return Err(Error::Internal("assembled conjugator does not conjugate".into()));
    }
    Ok(Some(w))
}

/// Connected components of the underlying unoriented graph, each sorted,
/// ordered by smallest member.
pub fn components(table: &GermTable) -> Vec<Vec<ObjectId>> {
    let n = table.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for s in table.simples() {
        let (a, b) = (find(&mut parent, s.source.index()), find(&mut parent, s.target.index()));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<ObjectId>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let k = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(ObjectId(i as u32));
    }
    groups
}

#[derive(Clone, Debug)]
pub struct FixedGermReport {
    pub subgerm: GarsideGerm,
    /// Ambient object of each subgerm object.
    pub object_inclusion: Vec<ObjectId>,
    /// Ambient simple of each subgerm simple.
    pub simple_inclusion: Vec<SimpleId>,
    /// Components of the subgerm, in subgerm object ids.
    pub components: Vec<Vec<ObjectId>>,
    /// Ambient atoms at fixed objects paired with the join of their orbit.
    pub closure_atoms: Vec<(SimpleId, SimpleId)>,
}

impl FixedGermReport {
    /// Subgerm atoms, as ambient simples.
    pub fn ambient_atoms(&self) -> Vec<SimpleId> {
        self.subgerm
            .atoms()
            .iter()
            .map(|a| self.simple_inclusion[a.index()])
            .collect()
    }
}

fn check_garside_automorphism(germ: &GarsideGerm, psi: &GermAutomorphism) -> Result<()> {
    check_table_automorphism(germ, psi).map_err(|e| Error::NotAutomorphism(e.0))?;
    for s in germ.simple_ids() {
        if psi.simple(germ.phi(s)) != germ.phi(psi.simple(s)) {
            return Err(Error::NotAutomorphism(format!(
                "does not commute with phi at {}",
                germ.name(s)
            )));
        }
    }
    for x in germ.object_ids() {
        if psi.simple(germ.delta(x)) != germ.delta(psi.object(x)) {
            return Err(Error::NotAutomorphism(format!(
                "delta at {} is not sent to a delta",
                germ.object_name(x)
            )));
        }
    }
    Ok(())
}

/// The subgerm of simples fixed by `psi` between fixed objects.
pub fn fixed_subgerm(germ: &GarsideGerm, psi: &GermAutomorphism) -> Result<FixedGermReport> {
    check_garside_automorphism(germ, psi)?;
    let mut table = GermTable::new();
    let mut object_inclusion = Vec::new();
    let mut object_map: HashMap<ObjectId, ObjectId> = HashMap::new();
    for x in germ.object_ids().filter(|&x| psi.object(x) == x) {
        let id = table.add_object(germ.object_name(x))?;
        object_map.insert(x, id);
        object_inclusion.push(x);
    }
    let mut simple_inclusion: Vec<SimpleId> = object_inclusion.iter().map(|&x| germ.identity(x)).collect();
    let mut simple_map: HashMap<SimpleId, SimpleId> = object_inclusion
        .iter()
        .enumerate()
        .map(|(i, &x)| (germ.identity(x), table.identity(ObjectId(i as u32))))
        .collect();
    for s in germ.simple_ids() {
        if germ.is_identity(s) || psi.simple(s) != s {
            continue;
        }
        let (Some(&a), Some(&b)) = (object_map.get(&germ.source(s)), object_map.get(&germ.target(s))) else {
            continue;
        };
        let id = table.add_simple(germ.name(s), a, b, germ.length(s))?;
        simple_map.insert(s, id);
        simple_inclusion.push(s);
    }
    for (a, b, c) in germ.explicit_products() {
        if let (Some(&a), Some(&b), Some(&c)) = (simple_map.get(&a), simple_map.get(&b), simple_map.get(&c)) {
            table.add_product(a, b, c)?;
        }
    }
    for (&x, &id) in &object_map {
        table.set_delta(id, simple_map[&germ.delta(x)])?;
    }
    let subgerm = validate(table)?;

    let mut closure_atoms = Vec::new();
    for &a in germ.atoms() {
        let x = germ.source(a);
        if psi.object(x) != x {
            continue;
        }
        let mut join = a;
        let mut cur = psi.simple(a);
        while cur != a {
            join = germ.join_unchecked(x, join, cur);
            cur = psi.simple(cur);
        }
        closure_atoms.push((a, join));
    }
    let mut minimal: Vec<SimpleId> = closure_atoms
        .iter()
        .map(|&(_, c)| c)
        .filter(|&c| {
            closure_atoms
                .iter()
                .all(|&(_, d)| d == c || !germ.divides_unchecked(d, c))
        })
        .collect();
    minimal.sort_unstable();
    minimal.dedup();
    let mut atoms: Vec<SimpleId> = subgerm.atoms().iter().map(|a| simple_inclusion[a.index()]).collect();
    atoms.sort_unstable();
    if atoms != minimal {
        return Err(Error::Internal("fixed atoms differ from minimal orbit joins".into()));
    }
    let components = components(&subgerm);
    Ok(FixedGermReport {
        subgerm,
        object_inclusion,
        simple_inclusion,
        components,
        closure_atoms,
    })
}
