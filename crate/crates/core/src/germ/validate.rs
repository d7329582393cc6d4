use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{bits, GarsideGerm, GermTable, ObjectId, PhiOrder, SimpleId};

/// Failure of one of the Garside germ axioms, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("object {object}: no maximum among simples with this source")]
    NoMaximum { object: String },
    #[error("object {object}: declared delta {delta} is not a multiple of every simple")]
    DeclaredDeltaNotMaximum { object: String, delta: String },
    #[error("complement is not injective: {a} and {b} share the complement {complement}")]
    ComplementNotInjective { a: String, b: String, complement: String },
    #[error("complement from {object} is not onto the simples ending at {target}")]
    ComplementNotSurjective { object: String, target: String },
    #[error("complement does not reverse the order between {a} and {b}")]
    ComplementNotAntitone { a: String, b: String },
    #[error("associativity fails on ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("left cancellativity fails: {a}{u} = {a}{v}")]
    NotLeftCancellative { a: String, u: String, v: String },
    #[error("right cancellativity fails: {u}{a} = {v}{a}")]
    NotRightCancellative { a: String, u: String, v: String },
    #[error("{a} and {b} have no meet")]
    NoMeet { a: String, b: String },
    #[error("{a} and {b} have no join")]
    NoJoin { a: String, b: String },
    #[error("double complement is not a germ automorphism: {0}")]
    PhiNotAutomorphism(String),
    #[error("{0} is not a product of atoms")]
    NotGenerated(String),
}

type VResult<T> = Result<T, ValidationError>;

/// Checks the Garside germ axioms and derives the Garside structure.
///
/// Checks run in a fixed order (maximum, complement, associativity,
/// cancellativity, lattice, automorphism, atoms) and the first failure is
/// reported.
pub fn validate(table: GermTable) -> VResult<GarsideGerm> {
    let products = table.explicit_products();
    let n = table.simple_count();

    let mut out: Vec<Vec<SimpleId>> = vec![Vec::new(); table.object_count()];
    for s in table.simple_ids() {
        out[table.source(s).index()].push(s);
    }
    let mut local = vec![0u32; n];
    for row in &mut out {
        row.sort_by_key(|&s| (table.length(s), s));
        for (i, &s) in row.iter().enumerate() {
            local[s.index()] = i as u32;
        }
    }

    let width = |s: SimpleId| out[table.source(s).index()].len();
    let mut down: Vec<FixedBitSet> = table
        .simple_ids()
        .map(|s| FixedBitSet::with_capacity(width(s)))
        .collect();
    let mut up = down.clone();
    for s in table.simple_ids() {
        let x = table.source(s);
        down[s.index()].insert(local[s.index()] as usize);
        down[s.index()].insert(local[table.identity(x).index()] as usize);
        up[s.index()].insert(local[s.index()] as usize);
    }
    for x in table.object_ids() {
        up[table.identity(x).index()].insert_range(..);
    }
    let mut quot = HashMap::with_capacity(products.len());
    let mut right_of: Vec<Vec<(SimpleId, SimpleId)>> = vec![Vec::new(); n];
    let mut left_of: Vec<Vec<(SimpleId, SimpleId)>> = vec![Vec::new(); n];
    for &(a, b, c) in &products {
        down[c.index()].insert(local[a.index()] as usize);
        up[a.index()].insert(local[c.index()] as usize);
        quot.entry((a, c)).or_insert(b);
        right_of[a.index()].push((b, c));
        left_of[b.index()].push((a, c));
    }

    let name = |s: SimpleId| table.name(s).to_string();
    let oname = |x: ObjectId| table.object_name(x).to_string();

    let delta = find_deltas(&table, &out, &down)?;

    // Complement and its order reversal.
    let quotient = |a: SimpleId, c: SimpleId| -> Option<SimpleId> {
        if a == c {
            Some(table.identity(table.target(a)))
        } else if table.is_identity(a) {
            Some(c)
        } else {
            quot.get(&(a, c)).copied()
        }
    };
    let mut complement = vec![SimpleId(0); n];
    for x in table.object_ids() {
        let d = delta[x.index()];
        let mut seen: HashMap<SimpleId, SimpleId> = HashMap::new();
        for &s in &out[x.index()] {
            let c = quotient(s, d).expect("every simple divides delta");
            if let Some(&prev) = seen.get(&c) {
                return Err(ValidationError::ComplementNotInjective {
                    a: name(prev),
                    b: name(s),
                    complement: name(c),
                });
            }
            seen.insert(c, s);
            complement[s.index()] = c;
        }
        let y = table.target(d);
        let ending = table.simple_ids().filter(|&s| table.target(s) == y).count();
        if ending != out[x.index()].len() {
            return Err(ValidationError::ComplementNotSurjective {
                object: oname(x),
                target: oname(y),
            });
        }
    }
    for &(s, u, t) in &products {
        if table.product(u, complement[t.index()]) != Some(complement[s.index()]) {
            return Err(ValidationError::ComplementNotAntitone { a: name(s), b: name(t) });
        }
    }

    // Associativity: (ab)c and a(bc) agree in definedness and value.
    for &(a, b, ab) in &products {
        for &(c, abc) in &right_of[ab.index()] {
            let other = table.product(b, c).and_then(|bc| table.product(a, bc));
            if other != Some(abc) {
                return Err(ValidationError::NotAssociative {
                    a: name(a),
                    b: name(b),
                    c: name(c),
                });
            }
        }
    }
    for &(b, c, bc) in &products {
        for &(a, abc) in &left_of[bc.index()] {
            let other = table.product(a, b).and_then(|ab| table.product(ab, c));
            if other != Some(abc) {
                return Err(ValidationError::NotAssociative {
                    a: name(a),
                    b: name(b),
                    c: name(c),
                });
            }
        }
    }

    // Cancellativity, as injectivity of rows and columns of the product.
    let mut by_left: HashMap<(SimpleId, SimpleId), SimpleId> = HashMap::new();
    let mut by_right: HashMap<(SimpleId, SimpleId), SimpleId> = HashMap::new();
    for &(a, b, c) in &products {
        if let Some(&prev) = by_left.get(&(a, c)) {
            return Err(ValidationError::NotLeftCancellative {
                a: name(a),
                u: name(prev),
                v: name(b),
            });
        }
        by_left.insert((a, c), b);
        if let Some(&prev) = by_right.get(&(b, c)) {
            return Err(ValidationError::NotRightCancellative {
                a: name(b),
                u: name(prev),
                v: name(a),
            });
        }
        by_right.insert((b, c), a);
    }

    // Lattice: the longest common divisor must be above all common divisors,
    // and dually for multiples.
    for row in &out {
        for (i, &a) in row.iter().enumerate() {
            for &b in &row[i + 1..] {
                let (da, db) = (&down[a.index()], &down[b.index()]);
                let m = row[bits::last_common(da, db).expect("identity is common")];
                if !bits::covers_common(&down[m.index()], da, db) {
                    return Err(ValidationError::NoMeet { a: name(a), b: name(b) });
                }
                let (ua, ub) = (&up[a.index()], &up[b.index()]);
                let j = row[bits::first_common(ua, ub).expect("delta is common")];
                if !bits::covers_common(&up[j.index()], ua, ub) {
                    return Err(ValidationError::NoJoin { a: name(a), b: name(b) });
                }
            }
        }
    }

    // The Garside automorphism as the double complement.
    let phi_obj: Vec<ObjectId> = table.object_ids().map(|x| table.target(delta[x.index()])).collect();
    let phi_simple: Vec<SimpleId> = table
        .simple_ids()
        .map(|s| complement[complement[s.index()].index()])
        .collect();
    let phi_err = |msg: String| Err(ValidationError::PhiNotAutomorphism(msg));
    let phi_obj_inv = match invert_permutation(&phi_obj, |x| x.index(), ObjectId) {
        Some(inv) => inv,
        None => return phi_err("not a bijection on objects".into()),
    };
    let phi_simple_inv = match invert_permutation(&phi_simple, |s| s.index(), SimpleId) {
        Some(inv) => inv,
        None => return phi_err("not a bijection on simples".into()),
    };
    for s in table.simple_ids() {
        let p = phi_simple[s.index()];
        if table.source(p) != phi_obj[table.source(s).index()]
            || table.target(p) != phi_obj[table.target(s).index()]
            || table.length(p) != table.length(s)
        {
            return phi_err(format!("{} is not carried consistently", name(s)));
        }
    }
    for x in table.object_ids() {
        let y = phi_obj[x.index()];
        if phi_simple[delta[x.index()].index()] != delta[y.index()] {
            return phi_err(format!("delta at {} is not sent to a delta", oname(x)));
        }
    }
    for &(a, b, c) in &products {
        if table.product(phi_simple[a.index()], phi_simple[b.index()]) != Some(phi_simple[c.index()]) {
            return phi_err(format!("product {} {} is not preserved", name(a), name(b)));
        }
    }
    let phi_order = PhiOrder::Finite(permutation_order(&phi_simple, |s| s.index()));

    // Atoms, and generation by atoms.
    let is_atom = |s: SimpleId| !table.is_identity(s) && down[s.index()].count_ones(..) == 2;
    let atoms: Vec<SimpleId> = table.simple_ids().filter(|&s| is_atom(s)).collect();
    let mut generated = vec![false; n];
    let mut by_length: Vec<SimpleId> = table.simple_ids().collect();
    by_length.sort_by_key(|&s| (table.length(s), s));
    for s in by_length {
        let row = &out[table.source(s).index()];
        generated[s.index()] = table.is_identity(s)
            || is_atom(s)
            || down[s.index()]
                .ones()
                .map(|i| row[i])
                .any(|a| is_atom(a) && a != s && quotient(a, s).is_some_and(|r| generated[r.index()]));
        if !generated[s.index()] {
            return Err(ValidationError::NotGenerated(name(s)));
        }
    }

    Ok(GarsideGerm {
        table,
        delta,
        complement,
        phi_obj,
        phi_obj_inv,
        phi_simple,
        phi_simple_inv,
        phi_order,
        atoms,
        out,
        local,
        down,
        up,
        quot,
    })
}

fn find_deltas(table: &GermTable, out: &[Vec<SimpleId>], down: &[FixedBitSet]) -> VResult<Vec<SimpleId>> {
    table
        .object_ids()
        .map(|x| {
            let row = &out[x.index()];
            let is_max = |d: SimpleId| down[d.index()].count_ones(..) == row.len();
            match table.declared_delta(x) {
                Some(d) if is_max(d) => Ok(d),
                Some(d) => Err(ValidationError::DeclaredDeltaNotMaximum {
                    object: table.object_name(x).to_string(),
                    delta: table.name(d).to_string(),
                }),
                None => row
                    .iter()
                    .rev()
                    .copied()
                    .find(|&d| is_max(d))
                    .ok_or_else(|| ValidationError::NoMaximum {
                        object: table.object_name(x).to_string(),
                    }),
            }
        })
        .collect()
}

fn invert_permutation<T: Copy>(p: &[T], index: impl Fn(T) -> usize, make: impl Fn(u32) -> T) -> Option<Vec<T>> {
    let mut inv: Vec<Option<T>> = vec![None; p.len()];
    for (i, &v) in p.iter().enumerate() {
        let slot = &mut inv[index(v)];
        if slot.is_some() {
            return None;
        }
        *slot = Some(make(i as u32));
    }
    inv.into_iter().collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of a permutation, as the lcm of its cycle lengths.
pub(crate) fn permutation_order<T: Copy>(p: &[T], index: impl Fn(T) -> usize) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut order = 1u64;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = index(p[i]);
            len += 1;
        }
        order = order / gcd(order, len) * len;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;

    const A2: &str = include_str!("../../../../fixtures/a2.germ");

    fn a2() -> GarsideGerm {
        validate(parse_germ(A2).unwrap()).unwrap()
    }

    fn id(g: &GermTable, name: &str) -> SimpleId {
        g.simple_by_name(name).unwrap()
    }

    #[test]
    fn hexagon_structure() {
        let g = a2();
        let x = ObjectId(0);
        assert_eq!(g.name(g.delta(x)), "D");
        assert_eq!(g.phi_order(), PhiOrder::Finite(2));
        for (a, b) in [
            ("s", "t"),
            ("t", "s"),
            ("st", "ts"),
            ("ts", "st"),
            ("D", "D"),
            ("id@x", "id@x"),
        ] {
            assert_eq!(g.name(g.phi(id(&g, a))), b);
        }
        for (a, b) in [("s", "ts"), ("ts", "t"), ("D", "id@x"), ("id@x", "D")] {
            assert_eq!(g.name(g.complement(id(&g, a))), b);
        }
        let atoms: Vec<_> = g.atoms().iter().map(|&a| g.name(a)).collect();
        assert_eq!(atoms, ["s", "t"]);
    }

    #[test]
    fn lattice_queries() {
        let g = a2();
        let s = |n| id(&g, n);
        assert!(g.left_divides(s("s"), s("st")).unwrap());
        assert!(!g.left_divides(s("s"), s("ts")).unwrap());
        assert!(g.left_divides(s("id@x"), s("ts")).unwrap());
        assert_eq!(g.meet(s("s"), s("t")).unwrap(), s("id@x"));
        assert_eq!(g.join(s("s"), s("t")).unwrap(), s("D"));
        assert_eq!(g.join(s("s"), s("st")).unwrap(), s("st"));
        assert_eq!(g.quotient(s("s"), s("st")).unwrap(), s("t"));
        assert_eq!(g.quotient(s("s"), s("D")).unwrap(), s("ts"));
        assert_eq!(g.quotient(s("st"), s("st")).unwrap(), s("id@x"));
        assert!(g.quotient(s("s"), s("ts")).is_err());
        assert_eq!(g.phi_power(s("s"), 1), s("t"));
        assert_eq!(g.phi_power(s("s"), 2), s("s"));
        assert_eq!(g.phi_power(s("s"), -3), s("t"));
        assert_eq!(g.phi_power(s("D"), 7), s("D"));
    }

    #[test]
    fn missing_product_breaks_maximum() {
        let text: String = A2
            .lines()
            .filter(|l| l.trim() != "product st s = D")
            .map(|l| format!("{l}\n"))
            .collect();
        let text = text.replace("delta x = D\n", "");
        let err = validate(parse_germ(&text).unwrap()).unwrap_err();
        assert!(matches!(err, ValidationError::NoMaximum { .. }), "{err}");
        let with_delta: String = A2
            .lines()
            .filter(|l| l.trim() != "product st s = D")
            .map(|l| format!("{l}\n"))
            .collect();
        let err = validate(parse_germ(&with_delta).unwrap()).unwrap_err();
        assert!(matches!(err, ValidationError::DeclaredDeltaNotMaximum { .. }), "{err}");
    }

    #[test]
    fn shared_complement_is_rejected() {
        let text = "garside-germ v1
object x
object y
object z
simple a : x -> y
simple b : x -> y
simple c : y -> z
simple D : x -> z len 2
product a c = D
product b c = D
";
        let err = validate(parse_germ(text).unwrap()).unwrap_err();
        assert!(matches!(err, ValidationError::ComplementNotInjective { .. }), "{err}");
    }

    #[test]
    fn trivial_germ() {
        let g = validate(parse_germ("garside-germ v1\nobject x\n").unwrap()).unwrap();
        assert!(g.is_identity(g.delta(ObjectId(0))));
        assert!(g.atoms().is_empty());
        assert_eq!(g.phi_order(), PhiOrder::Finite(1));
    }
}
