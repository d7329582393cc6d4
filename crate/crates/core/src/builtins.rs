//! Generators for standard germs.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::divided::DividedGerm;
use crate::error::{Error, Result};
use crate::free::{invert, multiply, NormalForm};
use crate::germ::{validate, GarsideGerm, GermTable, ObjectId, SimpleId};

type Perm = Vec<u8>;

/// `(u v)(i) = u(v(i))`.
fn compose(u: &[u8], v: &[u8]) -> Perm {
    v.iter().map(|&i| u[i as usize]).collect()
}

fn inverse(u: &[u8]) -> Perm {
    let mut inv = vec![0; u.len()];
    for (i, &v) in u.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

fn inversions(u: &[u8]) -> u32 {
    let mut count = 0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if u[i] > u[j] {
                count += 1;
            }
        }
    }
    count
}

fn cycles(u: &[u8]) -> Vec<Vec<u8>> {
    let mut seen = vec![false; u.len()];
    let mut out = Vec::new();
    for start in 0..u.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i as u8);
            i = u[i] as usize;
        }
        out.push(cycle);
    }
    out
}

/// `n` minus the number of cycles.
fn reflection_length(u: &[u8]) -> u32 {
    (u.len() - cycles(u).len()) as u32
}

fn all_permutations(n: usize) -> Vec<Perm> {
    (0..n as u8).permutations(n).collect()
}

fn check_range(family: &'static str, param: i64, min: i64, max: i64) -> Result<usize> {
    if (min..=max).contains(&param) {
        Ok(param as usize)
    } else {
        Err(Error::OutOfRange {
            family,
            param,
            min,
            max,
        })
    }
}

/// A one-object germ whose simples are the given permutations, with the
/// product defined when `length` is additive and the result is listed.
fn permutation_germ(perms: Vec<(String, Perm)>, length: impl Fn(&[u8]) -> u32, delta: &str) -> Result<GermTable> {
    let mut table = GermTable::new();
    let x = table.add_object("x")?;
    let mut ids: HashMap<Perm, SimpleId> = HashMap::new();
    let identity: Perm = (0..perms[0].1.len() as u8).collect();
    ids.insert(identity, table.identity(x));
    for (name, p) in &perms {
        ids.insert(p.clone(), table.add_simple(name, x, x, length(p))?);
    }
    for (_, u) in &perms {
        for (_, v) in &perms {
            let w = compose(u, v);
            if let Some(&c) = ids.get(&w) {
                if length(&w) == length(u) + length(v) {
                    table.add_product(ids[u], ids[v], c)?;
                }
            }
        }
    }
    let d = table.simple_by_name(delta).expect("delta is listed");
    table.set_delta(x, d)?;
    Ok(table)
}

const LETTERS: [char; 5] = ['s', 't', 'u', 'v', 'w'];

/// The positive braids below the half twist on `n` strands: permutations
/// with their inversion count. Simples are named by their lexicographically
/// smallest reduced word in `s, t, u, v, w`; the longest one is `D`.
pub fn artin_symmetric(n: i64) -> Result<GermTable> {
    let n = check_range("artin_symmetric", n, 2, 6)?;
    let gens: Vec<Perm> = (0..n - 1)
        .map(|i| {
            let mut p: Perm = (0..n as u8).collect();
            p.swap(i, i + 1);
            p
        })
        .collect();
    let name = |w: &[u8]| -> String {
        let mut w = w.to_vec();
        let mut word = String::new();
        while inversions(&w) > 0 {
            let i = (0..n - 1)
                .find(|&i| inversions(&compose(&gens[i], &w)) < inversions(&w))
                .expect("a non-identity permutation has a descent");
            word.push(LETTERS[i]);
            w = compose(&gens[i], &w);
        }
        word
    };
    let top = inversions(&(0..n as u8).rev().collect::<Perm>());
    let mut perms: Vec<(String, Perm)> = all_permutations(n)
        .into_iter()
        .filter(|p| inversions(p) > 0)
        .map(|p| {
            let label = if inversions(&p) == top {
                "D".to_string()
            } else {
                name(&p)
            };
            (label, p)
        })
        .collect();
    perms.sort_by(|a, b| (inversions(&a.1), &a.0).cmp(&(inversions(&b.1), &b.0)));
    permutation_germ(perms, inversions, "D")
}

/// Permutations below the cycle `1 → 2 → … → n → 1` in absolute order, with
/// reflection length. Simples are named `p` followed by their non-trivial
/// cycles (e.g. `p12_34`); the cycle itself is `D`.
pub fn dual_braid(n: i64) -> Result<GermTable> {
    let n = check_range("dual_braid", n, 2, 6)?;
    let c: Perm = (0..n as u8).map(|i| (i + 1) % n as u8).collect();
    let top = reflection_length(&c);
    let name = |u: &[u8]| -> String {
        if u == c.as_slice() {
            return "D".into();
        }
        let parts: Vec<String> = cycles(u)
            .into_iter()
            .filter(|cy| cy.len() > 1)
            .map(|cy| cy.iter().map(|&i| char::from(b'1' + i)).collect())
            .collect();
        format!("p{}", parts.join("_"))
    };
    let mut perms: Vec<(String, Perm)> = all_permutations(n)
        .into_iter()
        .filter(|u| {
            let l = reflection_length(u);
            l > 0 && l + reflection_length(&compose(&inverse(u), &c)) == top
        })
        .map(|u| (name(&u), u))
        .collect();
    perms.sort_by(|a, b| (reflection_length(&a.1), &a.0).cmp(&(reflection_length(&b.1), &b.0)));
    permutation_germ(perms, reflection_length, "D")
}

/// Chambers of `m` lines through the origin of the plane, `c0 … c{2m-1}`
/// in cyclic order. Every ordered pair of distinct chambers is a simple,
/// named `g<i>_<j>`, of length the number of separating walls.
pub fn dihedral_chamber(m: i64) -> Result<GermTable> {
    let m = check_range("dihedral_chamber", m, 2, 12)?;
    let k = 2 * m;
    let dist = |i: usize, j: usize| {
        let d = (i + k - j) % k;
        d.min(k - d) as u32
    };
    let mut table = GermTable::new();
    let objects: Vec<ObjectId> = (0..k)
        .map(|i| table.add_object(&format!("c{i}")))
        .collect::<std::result::Result<_, _>>()?;
    let mut simple = vec![vec![SimpleId(0); k]; k];
    for i in 0..k {
        for j in 0..k {
            simple[i][j] = if i == j {
                table.identity(objects[i])
            } else {
                table.add_simple(&format!("g{i}_{j}"), objects[i], objects[j], dist(i, j))?
            };
        }
    }
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            for l in (0..k).filter(|&l| l != j && l != i) {
                if dist(i, j) + dist(j, l) == dist(i, l) {
                    table.add_product(simple[i][j], simple[j][l], simple[i][l])?;
                }
            }
        }
    }
    for i in 0..k {
        table.set_delta(objects[i], simple[i][(i + m) % k])?;
    }
    Ok(table)
}

/// Two objects `x, y` and atoms `a_o, b_o` from each object to the other,
/// with `D_o = a³ = b³`; `aa_o` and `bb_o` are the squares.
pub fn rank2_counterexample() -> GermTable {
    let mut table = GermTable::new();
    let x = table.add_object("x").expect("fresh name");
    let y = table.add_object("y").expect("fresh name");
    let mut ids: HashMap<String, SimpleId> = HashMap::new();
    for (o, other, on) in [(x, y, "x"), (y, x, "y")] {
        for (name, tgt, len) in [
            ("a", other, 1),
            ("b", other, 1),
            ("aa", o, 2),
            ("bb", o, 2),
            ("D", other, 3),
        ] {
            let n = format!("{name}_{on}");
            let id = table.add_simple(&n, o, tgt, len).expect("fresh name");
            ids.insert(n, id);
        }
    }
    let id = |n: &str| ids[n];
    for (on, other) in [("x", "y"), ("y", "x")] {
        for g in ["a", "b"] {
            let gg = format!("{g}{g}");
            table
                .add_product(
                    id(&format!("{g}_{on}")),
                    id(&format!("{g}_{other}")),
                    id(&format!("{gg}_{on}")),
                )
                .expect("composable");
            table
                .add_product(
                    id(&format!("{gg}_{on}")),
                    id(&format!("{g}_{on}")),
                    id(&format!("D_{on}")),
                )
                .expect("composable");
            table
                .add_product(
                    id(&format!("{g}_{on}")),
                    id(&format!("{gg}_{other}")),
                    id(&format!("D_{on}")),
                )
                .expect("composable");
        }
    }
    table.set_delta(x, id("D_x")).expect("source matches");
    table.set_delta(y, id("D_y")).expect("source matches");
    table
}

/// Common right multiples of `aa_x` and `bb_x` among loops at `x` of
/// length at most `bound`.
#[derive(Clone, Debug)]
pub struct LcmReport {
    pub common: Vec<NormalForm>,
    /// Common multiples with no proper common divisor among `common`.
    pub minimal: Vec<NormalForm>,
    pub delta_squared_is_common: bool,
    pub has_least: bool,
}

fn homogeneous_length(germ: &GarsideGerm, f: &NormalForm) -> i64 {
    let delta_len = germ.length(germ.delta(f.source())) as i64;
    f.factors().iter().map(|&s| germ.length(s) as i64).sum::<i64>() + f.delta_exp() * delta_len
}

/// Bounded search for a least common right multiple of the two squares at
/// `x` in [`rank2_counterexample`].
pub fn rank2_lcm_check(germ: &GarsideGerm, bound: usize) -> Result<LcmReport> {
    let x = germ
        .object_by_name("x")
        .ok_or_else(|| Error::Internal("missing object x".into()))?;
    let named = |n: &str| {
        germ.simple_by_name(n)
            .map(|s| NormalForm::from_simple(germ, s))
            .ok_or_else(|| Error::Internal(format!("missing simple {n}")))
    };
    let (a2, b2) = (named("aa_x")?, named("bb_x")?);
    let mut seen: BTreeSet<NormalForm> = BTreeSet::new();
    let mut layer = vec![NormalForm::identity(x)];
    seen.insert(NormalForm::identity(x));
    for _ in 0..bound {
        let mut next = Vec::new();
        for f in &layer {
            for &a in germ.atoms().iter().filter(|&&a| germ.source(a) == f.target(germ)) {
                let g = multiply(germ, f, &NormalForm::from_simple(germ, a))?;
                if homogeneous_length(germ, &g) <= bound as i64 && seen.insert(g.clone()) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    let divides =
        |f: &NormalForm, g: &NormalForm| -> Result<bool> { Ok(multiply(germ, &invert(germ, f), g)?.is_positive()) };
    let mut common = Vec::new();
    for g in seen.iter().filter(|g| g.is_loop(germ)) {
        if divides(&a2, g)? && divides(&b2, g)? {
            common.push(g.clone());
        }
    }
    let mut minimal = Vec::new();
    for g in &common {
        let mut is_min = true;
        for f in common.iter().filter(|&f| f != g) {
            if divides(f, g)? {
                is_min = false;
                break;
            }
        }
        if is_min {
            minimal.push(g.clone());
        }
    }
    let mut has_least = false;
    for f in &minimal {
        let mut below_all = true;
        for g in &common {
            if !divides(f, g)? {
                below_all = false;
                break;
            }
        }
        has_least |= below_all;
    }
    let delta_squared_is_common = common.contains(&NormalForm::delta_power(x, 2));
    Ok(LcmReport {
        common,
        minimal,
        delta_squared_is_common,
        has_least,
    })
}

/// A builtin germ family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinSpec {
    ArtinSymmetric(i64),
    DualBraid(i64),
    DihedralChamber(i64),
    Rank2Counterexample,
    Divided { base: Box<BuiltinSpec>, m: i64 },
}

pub const FAMILIES: [&str; 5] = [
    "artin_symmetric",
    "dual_braid",
    "dihedral_chamber",
    "rank2_counterexample",
    "divided",
];

impl BuiltinSpec {
    /// Builds a spec from a family name; `divided` takes its base as a
    /// nested spec.
    pub fn new(family: &str, param: Option<i64>, base: Option<BuiltinSpec>) -> Result<Self> {
        let need = |name: &'static str| {
            param.ok_or(Error::MissingParameter {
                family: name,
                what: "a parameter",
            })
        };
        Ok(match family {
            "artin_symmetric" => BuiltinSpec::ArtinSymmetric(need("artin_symmetric")?),
            "dual_braid" => BuiltinSpec::DualBraid(need("dual_braid")?),
            "dihedral_chamber" => BuiltinSpec::DihedralChamber(need("dihedral_chamber")?),
            "rank2_counterexample" => BuiltinSpec::Rank2Counterexample,
            "divided" => BuiltinSpec::Divided {
                base: Box::new(base.ok_or(Error::MissingParameter {
                    family: "divided",
                    what: "a base family",
                })?),
                m: need("divided")?,
            },
            other => return Err(Error::UnknownBuiltin(other.into())),
        })
    }

    pub fn germ(&self) -> Result<GarsideGerm> {
        let table = match self {
            BuiltinSpec::ArtinSymmetric(n) => artin_symmetric(*n)?,
            BuiltinSpec::DualBraid(n) => dual_braid(*n)?,
            BuiltinSpec::DihedralChamber(m) => dihedral_chamber(*m)?,
            BuiltinSpec::Rank2Counterexample => rank2_counterexample(),
            BuiltinSpec::Divided { base, m } => {
                let m = check_range("divided", *m, 1, 12)?;
                return Ok(DividedGerm::build(&base.germ()?, m)?.germ().clone());
            }
        };
        Ok(validate(table)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{check_isomorphism, parse_germ, GermIsomorphism, PhiOrder};
    use crate::nerve::garside_dimension;

    #[test]
    fn symmetric_groups() {
        let g3 = validate(artin_symmetric(3).unwrap()).unwrap();
        let names: Vec<&str> = g3.simples().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["id@x", "s", "t", "st", "ts", "D"]);
        let fixture = validate(parse_germ(include_str!("../../../fixtures/a2.germ")).unwrap()).unwrap();
        let iso = GermIsomorphism::by_names(&g3, &fixture).unwrap();
        check_isomorphism(&g3, &fixture, &iso).unwrap();

        let g2 = validate(artin_symmetric(2).unwrap()).unwrap();
        assert_eq!(g2.simple_count(), 2);
        assert_eq!(g2.phi_order(), PhiOrder::Finite(1));
        let g4 = validate(artin_symmetric(4).unwrap()).unwrap();
        assert_eq!((g4.simple_count(), garside_dimension(&g4)), (24, 6));
        assert!(artin_symmetric(7).is_err());
    }

    #[test]
    fn dual_braids() {
        let g3 = validate(dual_braid(3).unwrap()).unwrap();
        assert_eq!(g3.simple_count(), 5);
        assert_eq!(g3.phi_order(), PhiOrder::Finite(3));
        let g4 = validate(dual_braid(4).unwrap()).unwrap();
        assert_eq!(g4.simple_count(), 14);
        assert_eq!(g4.phi_order(), PhiOrder::Finite(4));
    }

    #[test]
    fn dihedral() {
        let g = validate(dihedral_chamber(3).unwrap()).unwrap();
        assert_eq!((g.object_count(), g.simple_count()), (6, 36));
        assert_eq!(g.phi_order(), PhiOrder::Finite(2));
    }

    #[test]
    fn dihedral_family() {
        for m in 2..=12 {
            let g = validate(dihedral_chamber(m).unwrap()).unwrap();
            assert_eq!(g.phi_order(), PhiOrder::Finite(2), "m = {m}");
            for x in g.object_ids() {
                let d = g.delta(x);
                assert_eq!(g.delta(g.target(d)), g.phi(d));
                assert_eq!(g.target(g.delta(g.target(d))), x);
            }
        }
        assert!(dihedral_chamber(13).is_err());
    }

    #[test]
    fn every_family_validates() {
        for n in 2..=5 {
            validate(artin_symmetric(n).unwrap()).unwrap();
            validate(dual_braid(n).unwrap()).unwrap();
        }
        assert_ne!(
            artin_symmetric(3).unwrap().simple_count(),
            dual_braid(3).unwrap().simple_count()
        );
        let spec = BuiltinSpec::new("divided", Some(2), Some(BuiltinSpec::ArtinSymmetric(3))).unwrap();
        assert_eq!(spec.germ().unwrap().object_count(), 6);
        assert!(matches!(
            BuiltinSpec::new("nope", None, None),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn rank_two() {
        let g = validate(rank2_counterexample()).unwrap();
        let x = g.object_by_name("x").unwrap();
        assert_eq!(g.object_name(g.target(g.delta(x))), "y");
        assert_eq!(g.phi_order(), PhiOrder::Finite(2));
        let (a, b) = (g.simple_by_name("a_x").unwrap(), g.simple_by_name("b_x").unwrap());
        assert_eq!(g.join(a, b).unwrap(), g.delta(x));
        let report = rank2_lcm_check(&g, 8).unwrap();
        assert!(report.delta_squared_is_common);
        assert!(!report.has_least);
        assert!(report.minimal.len() >= 2);
    }
}
