//! The groupoid of fractions of a Garside germ, through left-greedy normal
//! forms `s_1 … s_l Δ^k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::germ::{GarsideGerm, ObjectId, SimpleId};

/// Maximum number of simple factors in a word handed to the normalizer.
pub const WORD_LIMIT: usize = 1 << 16;

/// A composable sequence of simples from a fixed source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositiveWord {
    source: ObjectId,
    factors: Vec<SimpleId>,
}

impl PositiveWord {
    pub fn new(germ: &GarsideGerm, source: ObjectId, factors: Vec<SimpleId>) -> Result<Self> {
        check_composable(germ, source, &factors)?;
        Ok(PositiveWord { source, factors })
    }

    pub fn source(&self) -> ObjectId {
        self.source
    }

    pub fn factors(&self) -> &[SimpleId] {
        &self.factors
    }

    pub fn normal_form(&self, germ: &GarsideGerm) -> NormalForm {
        normalize(germ, self.source, self.factors.clone(), 0)
    }

    /// All words reachable by one elementary rewrite: merging two adjacent
    /// factors whose product is defined, splitting a factor into two
    /// non-identity factors, or deleting an identity.
    pub fn rewrites(&self, germ: &GarsideGerm) -> Vec<PositiveWord> {
        let f = &self.factors;
        let mut out = Vec::new();
        let with = |i: usize, j: usize, middle: &[SimpleId]| {
            let mut factors = f[..i].to_vec();
            factors.extend_from_slice(middle);
            factors.extend_from_slice(&f[j..]);
            PositiveWord {
                source: self.source,
                factors,
            }
        };
        for i in 0..f.len() {
            if germ.is_identity(f[i]) {
                out.push(with(i, i + 1, &[]));
                continue;
            }
            for a in germ.divisors(f[i]) {
                if !germ.is_identity(a) && a != f[i] {
                    let b = germ.quotient_opt(a, f[i]).expect("divisor has a quotient");
                    out.push(with(i, i + 1, &[a, b]));
                }
            }
            if let Some(&next) = f.get(i + 1) {
                if let Some(c) = germ.product(f[i], next) {
                    out.push(with(i, i + 2, &[c]));
                }
            }
        }
        out
    }
}

fn check_composable(germ: &GarsideGerm, source: ObjectId, factors: &[SimpleId]) -> Result<ObjectId> {
    if factors.len() > WORD_LIMIT {
        return Err(Error::WordTooLong { limit: WORD_LIMIT });
    }
    let mut at = source;
    for (position, &s) in factors.iter().enumerate() {
        if germ.source(s) != at {
            return Err(Error::NotComposable { position });
        }
        at = germ.target(s);
    }
    Ok(at)
}

/// An element `s_1 … s_l Δ^k` of the groupoid, in left-greedy normal form.
///
/// No factor is an identity or a Garside map, and every adjacent pair is
/// left-weighted, so structural equality decides equality of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    source: ObjectId,
    factors: Vec<SimpleId>,
    delta_exp: i64,
}

impl NormalForm {
    pub fn identity(source: ObjectId) -> Self {
        NormalForm {
            source,
            factors: Vec::new(),
            delta_exp: 0,
        }
    }

    /// `Δ^k` starting at `source`.
    pub fn delta_power(source: ObjectId, k: i64) -> Self {
        NormalForm {
            source,
            factors: Vec::new(),
            delta_exp: k,
        }
    }

    pub fn from_simple(germ: &GarsideGerm, s: SimpleId) -> Self {
        normalize(germ, germ.source(s), vec![s], 0)
    }

    /// Assembles a normal form from parts that are already greedy; returns
    /// `None` when they are not.
    pub fn from_parts(germ: &GarsideGerm, source: ObjectId, factors: Vec<SimpleId>, delta_exp: i64) -> Option<Self> {
        let nf = NormalForm {
            source,
            factors,
            delta_exp,
        };
        is_greedy(germ, &nf).then_some(nf)
    }

    pub fn source(&self) -> ObjectId {
        self.source
    }

    pub fn factors(&self) -> &[SimpleId] {
        &self.factors
    }

    pub fn delta_exp(&self) -> i64 {
        self.delta_exp
    }

    pub fn inf(&self) -> i64 {
        self.delta_exp
    }

    pub fn sup(&self) -> i64 {
        self.delta_exp + self.factors.len() as i64
    }

    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty() && self.delta_exp == 0
    }

    pub fn target(&self, germ: &GarsideGerm) -> ObjectId {
        let end = self.factors.last().map_or(self.source, |&s| germ.target(s));
        germ.phi_power_obj(end, self.delta_exp)
    }

    pub fn is_loop(&self, germ: &GarsideGerm) -> bool {
        self.target(germ) == self.source
    }

    /// Whether the element is positive, i.e. `inf >= 0`.
    pub fn is_positive(&self) -> bool {
        self.delta_exp >= 0
    }

    pub fn display<'a>(&'a self, germ: &'a GarsideGerm) -> NfDisplay<'a> {
        NfDisplay { germ, nf: self }
    }
}

/// Renders a normal form in word syntax, e.g. `@x s t D^1`.
pub struct NfDisplay<'a> {
    germ: &'a GarsideGerm,
    nf: &'a NormalForm,
}

impl fmt::Display for NfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.germ.object_name(self.nf.source))?;
        for &s in &self.nf.factors {
            write!(f, " {}", self.germ.name(s))?;
        }
        if self.nf.delta_exp != 0 {
            write!(f, " D^{}", self.nf.delta_exp)?;
        }
        Ok(())
    }
}

/// Makes the pair `(a, b)` left-weighted; returns the new pair if it changed.
fn left_weight_pair(germ: &GarsideGerm, a: SimpleId, b: SimpleId) -> Option<(SimpleId, SimpleId)> {
    let y = germ.source(b);
    let m = germ.meet_unchecked(y, germ.complement(a), b);
    if germ.is_identity(m) {
        return None;
    }
    let a2 = germ
        .product(a, m)
        .expect("a times a divisor of its complement is simple");
    let b2 = germ.quotient_opt(m, b).expect("meet divides b");
    Some((a2, b2))
}

/// Normal form of `factors · Δ^shift` from `source`; `factors` must be
/// composable.
fn normalize(germ: &GarsideGerm, source: ObjectId, mut factors: Vec<SimpleId>, shift: i64) -> NormalForm {
    factors.retain(|&s| !germ.is_identity(s));
    loop {
        let mut changed = false;
        for i in 0..factors.len().saturating_sub(1) {
            if let Some((a, b)) = left_weight_pair(germ, factors[i], factors[i + 1]) {
                factors[i] = a;
                factors[i + 1] = b;
                changed = true;
            }
        }
        factors.retain(|&s| !germ.is_identity(s));
        if !changed {
            break;
        }
    }
    let leading = factors.iter().take_while(|&&s| germ.is_delta(s)).count() as i64;
    let factors = factors[leading as usize..]
        .iter()
        .map(|&s| germ.phi_power(s, -leading))
        .collect();
    NormalForm {
        source,
        factors,
        delta_exp: shift + leading,
    }
}

/// Normal form of the positive word `factors · Δ^shift` from `source`.
pub fn normal_form(germ: &GarsideGerm, source: ObjectId, factors: &[SimpleId], shift: i64) -> Result<NormalForm> {
    check_composable(germ, source, factors)?;
    Ok(normalize(germ, source, factors.to_vec(), shift))
}

fn endpoint_mismatch(germ: &GarsideGerm, f: &NormalForm, g: &NormalForm) -> Error {
    Error::EndpointMismatch {
        left: f.display(germ).to_string(),
        left_target: germ.object_name(f.target(germ)).to_string(),
        right: g.display(germ).to_string(),
        right_source: germ.object_name(g.source).to_string(),
    }
}

pub fn multiply(germ: &GarsideGerm, f: &NormalForm, g: &NormalForm) -> Result<NormalForm> {
    if f.target(germ) != g.source {
        return Err(endpoint_mismatch(germ, f, g));
    }
    if f.factors.len() + g.factors.len() > WORD_LIMIT {
        return Err(Error::WordTooLong { limit: WORD_LIMIT });
    }
    let mut factors = f.factors.clone();
    factors.extend(g.factors.iter().map(|&s| germ.phi_power(s, -f.delta_exp)));
    let delta_exp = f.delta_exp + g.delta_exp;
    if f.factors.is_empty() || g.factors.is_empty() {
        // Both parts are greedy and twisting by φ keeps them so.
        return Ok(NormalForm {
            source: f.source,
            factors,
            delta_exp,
        });
    }
    Ok(normalize(germ, f.source, factors, delta_exp))
}

pub fn invert(germ: &GarsideGerm, f: &NormalForm) -> NormalForm {
    let mut acc = NormalForm::delta_power(f.target(germ), -f.delta_exp);
    for &s in f.factors.iter().rev() {
        let step = NormalForm {
            source: germ.target(s),
            factors: vec![germ.complement(s)],
            delta_exp: -1,
        };
        acc = multiply(germ, &acc, &step).expect("inverse factors compose");
    }
    acc
}

/// Applies `φ^n` to every factor and to the source.
pub fn phi_on_morphism(germ: &GarsideGerm, f: &NormalForm, n: i64) -> NormalForm {
    NormalForm {
        source: germ.phi_power_obj(f.source, n),
        factors: f.factors.iter().map(|&s| germ.phi_power(s, n)).collect(),
        delta_exp: f.delta_exp,
    }
}

pub fn power(germ: &GarsideGerm, f: &NormalForm, n: i64) -> Result<NormalForm> {
    match n {
        0 => return Ok(NormalForm::identity(f.source)),
        1 => return Ok(f.clone()),
        _ => {}
    }
    if !f.is_loop(germ) {
        return Err(Error::NotALoop(f.display(germ).to_string()));
    }
    let mut base = if n < 0 { invert(germ, f) } else { f.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = NormalForm::identity(f.source);
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(germ, &acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = multiply(germ, &base, &base)?;
        }
    }
    Ok(acc)
}

/// Checks every normal-form invariant of `nf`.
pub fn is_greedy(germ: &GarsideGerm, nf: &NormalForm) -> bool {
    if check_composable(germ, nf.source, &nf.factors).is_err() {
        return false;
    }
    if nf.factors.iter().any(|&s| germ.is_identity(s) || germ.is_delta(s)) {
        return false;
    }
    nf.factors
        .windows(2)
        .all(|w| left_weight_pair(germ, w[0], w[1]).is_none())
}

/// Parses word syntax: optional `@object`, simple names and `D^<int>`.
///
/// Without `@object`, the source is that of the first simple, or the only
/// object of a single-object germ.
pub fn parse_word(germ: &GarsideGerm, text: &str) -> Result<NormalForm> {
    let mut tokens = text.split_whitespace().peekable();
    let explicit = match tokens.peek() {
        Some(t) if t.starts_with('@') => {
            let name = &t[1..];
            let x = germ
                .object_by_name(name)
                .ok_or_else(|| Error::WordSyntax(format!("unknown object {name:?}")))?;
            tokens.next();
            Some(x)
        }
        _ => None,
    };
    let tokens: Vec<&str> = tokens.collect();
    let source = match (explicit, tokens.first()) {
        (Some(x), _) => x,
        (None, Some(t)) if !t.starts_with("D^") => germ
            .simple_by_name(t)
            .map(|s| germ.source(s))
            .ok_or_else(|| Error::WordSyntax(format!("unknown simple {t:?}")))?,
        _ if germ.object_count() == 1 => ObjectId(0),
        _ => {
            return Err(Error::WordSyntax(
                "source is ambiguous; prefix the word with @object".into(),
            ))
        }
    };
    let simple_count = tokens.iter().filter(|t| !t.starts_with("D^")).count();
    if simple_count > WORD_LIMIT {
        return Err(Error::WordTooLong { limit: WORD_LIMIT });
    }
    let mut acc = NormalForm::identity(source);
    let mut pending: Vec<SimpleId> = Vec::new();
    let flush = |acc: &mut NormalForm, pending: &mut Vec<SimpleId>| -> Result<()> {
        if !pending.is_empty() {
            let start = acc.target(germ);
            let word = normal_form(germ, start, pending, 0)?;
            *acc = multiply(germ, acc, &word)?;
            pending.clear();
        }
        Ok(())
    };
    for t in tokens {
        if let Some(exp) = t.strip_prefix("D^") {
            let k: i64 = exp
                .parse()
                .map_err(|_| Error::WordSyntax(format!("bad exponent in {t:?}")))?;
            flush(&mut acc, &mut pending)?;
            let d = NormalForm::delta_power(acc.target(germ), k);
            acc = multiply(germ, &acc, &d)?;
        } else {
            let s = germ
                .simple_by_name(t)
                .ok_or_else(|| Error::WordSyntax(format!("unknown simple {t:?}")))?;
            let at = pending.last().map_or_else(|| acc.target(germ), |&p| germ.target(p));
            if germ.source(s) != at {
                return Err(Error::WordSyntax(format!(
                    "{t} does not start at {}",
                    germ.object_name(at)
                )));
            }
            pending.push(s);
        }
    }
    flush(&mut acc, &mut pending)?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{parse_germ, validate};

    fn a2() -> GarsideGerm {
        validate(parse_germ(include_str!("../../../fixtures/a2.germ")).unwrap()).unwrap()
    }

    fn w(g: &GarsideGerm, text: &str) -> NormalForm {
        parse_word(g, text).unwrap()
    }

    fn simples(g: &GarsideGerm, names: &[&str]) -> Vec<SimpleId> {
        names.iter().map(|n| g.simple_by_name(n).unwrap()).collect()
    }

    #[test]
    fn normal_forms_of_short_words() {
        let g = a2();
        let x = ObjectId(0);
        let nf = |names: &[&str]| normal_form(&g, x, &simples(&g, names), 0).unwrap();
        assert_eq!(
            nf(&["s"]),
            NormalForm::from_parts(&g, x, simples(&g, &["s"]), 0).unwrap()
        );
        assert_eq!(nf(&["s", "t", "s"]), NormalForm::delta_power(x, 1));
        assert_eq!(
            nf(&["s", "t", "s", "t"]),
            NormalForm::from_parts(&g, x, simples(&g, &["s"]), 1).unwrap()
        );
        assert_eq!(nf(&["t", "t"]).factors(), simples(&g, &["t", "t"]).as_slice());
        assert_eq!(nf(&["s", "t", "s"]), nf(&["t", "s", "t"]));
        assert_eq!(nf(&["s", "s", "t", "s"]), nf(&["s", "t", "s", "t"]));
        assert_ne!(nf(&["s"]), nf(&["t"]));
    }

    #[test]
    fn products_and_inverses() {
        let g = a2();
        assert_eq!(multiply(&g, &w(&g, "s"), &w(&g, "t")).unwrap(), w(&g, "st"));
        assert_eq!(multiply(&g, &w(&g, "s D^1"), &w(&g, "s")).unwrap(), w(&g, "st D^1"));
        assert!(multiply(&g, &w(&g, "D^1"), &w(&g, "D^-1")).unwrap().is_identity());
        assert_eq!(invert(&g, &w(&g, "s")), w(&g, "ts D^-1"));
        assert_eq!(invert(&g, &w(&g, "D^1")), w(&g, "D^-1"));
        assert_eq!(phi_on_morphism(&g, &w(&g, "st"), 1), w(&g, "ts"));
        assert_eq!(phi_on_morphism(&g, &w(&g, "s D^1"), 2), w(&g, "s D^1"));
        assert_eq!(power(&g, &w(&g, "st"), 3).unwrap(), w(&g, "D^2"));
        assert_eq!(power(&g, &w(&g, "s D^1"), 3).unwrap(), w(&g, "D^4"));
        assert!(power(&g, &w(&g, "s t"), 0).unwrap().is_identity());
        let f = w(&g, "s t t s D^-2");
        assert!(multiply(&g, &f, &power(&g, &f, -1).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn word_syntax() {
        let g = a2();
        assert_eq!(w(&g, "@x s t D^-1").sup(), 0);
        assert_eq!(w(&g, "@x s t D^-1").inf(), -1);
        assert_eq!(w(&g, "D^1 s").display(&g).to_string(), "@x t D^1");
        assert!(w(&g, "").is_identity());
        assert!(parse_word(&g, "q").is_err());
        assert!(parse_word(&g, "D^x").is_err());
        assert!(parse_word(&g, "@y").is_err());
    }

    #[test]
    fn rewrites_of_a_word() {
        let g = a2();
        let word = PositiveWord::new(&g, ObjectId(0), simples(&g, &["st", "s"])).unwrap();
        let rewrites = word.rewrites(&g);
        assert!(rewrites.iter().any(|r| r.factors() == simples(&g, &["D"]).as_slice()));
        assert!(rewrites
            .iter()
            .any(|r| r.factors() == simples(&g, &["s", "t", "s"]).as_slice()));
        for r in rewrites {
            assert_eq!(r.normal_form(&g), word.normal_form(&g));
        }
    }
}
