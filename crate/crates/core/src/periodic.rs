//! Periodic loops `γ^q = Δ^p`: reduction to the form `s Δ^k`, the explicit
//! conjugator from `Θ_q(s Δ^k)` to `Δ_q^p`, and classification of periodic
//! conjugacy classes.

use crate::conjugacy::{components, fixed_subgerm, summit_set, FixedGermReport, SearchOptions};
use crate::divided::DividedGerm;
use crate::error::{Error, Result};
use crate::free::{multiply, power, NormalForm};
use crate::germ::{GarsideGerm, ObjectId, SimpleId};

/// `gamma^q = Δ^p` at the source of `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub gamma: NormalForm,
    pub p: i64,
    pub q: usize,
}

pub fn is_periodic(germ: &GarsideGerm, gamma: &NormalForm, p: i64, q: usize) -> Result<Option<PeriodicityCertificate>> {
    if !gamma.is_loop(germ) {
        return Err(Error::NotALoop(gamma.display(germ).to_string()));
    }
    let lhs = power(germ, gamma, q as i64)?;
    let cert = PeriodicityCertificate {
        gamma: gamma.clone(),
        p,
        q,
    };
    Ok((lhs == NormalForm::delta_power(gamma.source(), p)).then_some(cert))
}

/// A conjugate `s Δ^k` of a periodic loop with `p = qk + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestvinaForm {
    pub s: SimpleId,
    pub k: i64,
    pub p: i64,
    pub q: usize,
    /// Conjugates the certified loop to [`representative`](Self::representative).
    pub conjugator: NormalForm,
    pub representative: NormalForm,
}

impl BestvinaForm {
    /// `s^{φ^{-ik}}` for `i = 0..q`.
    pub fn letters(&self, germ: &GarsideGerm) -> Vec<SimpleId> {
        (0..self.q as i64)
            .map(|i| germ.phi_power(self.s, -i * self.k))
            .collect()
    }

    /// Whether the letters multiply to `Δ` and `p = qk + 1`.
    pub fn check(&self, germ: &GarsideGerm) -> bool {
        let x = germ.source(self.s);
        self.p == self.q as i64 * self.k + 1 && germ.evaluate(x, &self.letters(germ)) == Some(germ.delta(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BestvinaOutcome {
    Found(BestvinaForm),
    NoLengthOneRepresentative { reason: String },
}

fn one_mod_q(p: i64, q: usize) -> bool {
    (p - 1).rem_euclid(q as i64) == 0
}

/// Searches the summit set of the loop for a representative `s Δ^k`.
pub fn find_bestvina_form(
    germ: &GarsideGerm,
    cert: &PeriodicityCertificate,
    opts: &SearchOptions,
) -> Result<BestvinaOutcome> {
    let (p, q) = (cert.p, cert.q);
    if !one_mod_q(p, q) {
        return Ok(BestvinaOutcome::NoLengthOneRepresentative {
            reason: format!("p = {p} is not congruent to 1 modulo q = {q}"),
        });
    }
    let k = (p - 1).div_euclid(q as i64);
    let set = summit_set(germ, &cert.gamma, opts)?;
    let order = std::iter::once(set.start).chain((0..set.elements.len()).filter(|&i| i != set.start));
    for e in order.map(|i| &set.elements[i]) {
        let h = &e.element;
        let s = match h.factors() {
            [] if h.delta_exp() == k + 1 => germ.delta(h.source()),
            [s] if h.delta_exp() == k => *s,
            _ => continue,
        };
        let bf = BestvinaForm {
            s,
            k,
            p,
            q,
            conjugator: e.conjugator.clone(),
            representative: h.clone(),
        };
        if bf.check(germ) {
            return Ok(BestvinaOutcome::Found(bf));
        }
    }
    Ok(BestvinaOutcome::NoLengthOneRepresentative {
        reason: "no summit of canonical length at most one satisfies the product condition".into(),
    })
}

/// The divided object `(s, s^{φ^{-k}}, …)`, checked to be fixed by `φ_q^p`.
pub fn bestvina_object(divided: &DividedGerm, bf: &BestvinaForm) -> Result<ObjectId> {
    let x = divided
        .object(&bf.letters(divided.base()))
        .ok_or_else(|| Error::Internal("letters do not form a subdivision".into()))?;
    if divided.germ().phi_power_obj(x, bf.p) != x {
        return Err(Error::Internal("Bestvina object is not fixed".into()));
    }
    Ok(x)
}

/// Slide indices (1-based) applied left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceWord {
    pub slides: Vec<usize>,
}

impl NecklaceWord {
    /// `σ_q σ_{q-1} … σ_1`.
    pub fn beta_1(q: usize) -> Self {
        NecklaceWord {
            slides: (1..=q).rev().collect(),
        }
    }

    /// `(σ_q … σ_2)(σ_q … σ_3) … (σ_q)`.
    pub fn beta_2(q: usize) -> Self {
        NecklaceWord {
            slides: (2..=q).flat_map(|lo| (lo..=q).rev()).collect(),
        }
    }

    pub fn repeat(&self, n: usize) -> Self {
        NecklaceWord {
            slides: self.slides.repeat(n),
        }
    }
}

/// A `q`-tuple of composable words of base simples; block `j` starts at
/// `sources[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceState {
    pub sources: Vec<ObjectId>,
    pub words: Vec<Vec<SimpleId>>,
}

impl NecklaceState {
    /// One letter per non-identity factor.
    pub fn from_factors(base: &GarsideGerm, factors: &[SimpleId]) -> Self {
        NecklaceState {
            sources: factors.iter().map(|&f| base.source(f)).collect(),
            words: factors
                .iter()
                .map(|&f| if base.is_identity(f) { Vec::new() } else { vec![f] })
                .collect(),
        }
    }

    /// `(ε, …, ε, w)` at `x`.
    pub fn concentrated(x: ObjectId, q: usize, word: Vec<SimpleId>) -> Self {
        let mut words = vec![Vec::new(); q];
        words[q - 1] = word;
        NecklaceState {
            sources: vec![x; q],
            words,
        }
    }

    pub fn factors(&self, base: &GarsideGerm) -> Option<Vec<SimpleId>> {
        self.sources
            .iter()
            .zip(&self.words)
            .map(|(&x, w)| base.evaluate(x, w))
            .collect()
    }
}

/// Evaluates a slide word through ψ: each slide becomes the ladder whose
/// only non-identity column carries the moved letter.
pub fn evaluate_slides(divided: &DividedGerm, start: &NecklaceState, word: &NecklaceWord) -> Result<NormalForm> {
    let base = divided.base();
    let q = divided.m();
    let internal = |m: String| Error::Internal(format!("slide evaluation: {m}"));
    let mut state = start.clone();
    let object_of = |state: &NecklaceState| -> Result<ObjectId> {
        let f = state
            .factors(base)
            .ok_or_else(|| internal("blocks are not simple".into()))?;
        divided
            .object(&f)
            .ok_or_else(|| internal("blocks are not a subdivision".into()))
    };
    let first = object_of(&state)?;
    let mut cur = first;
    let mut ladders = Vec::with_capacity(word.slides.len());
    for &i in &word.slides {
        if !(1..=q).contains(&i) {
            return Err(internal(format!("slide index {i} out of range")));
        }
        let j = i - 1;
        if state.words[j].is_empty() {
            return Err(internal(format!("slide {i} applied to an empty block")));
        }
        let a = state.words[j].remove(0);
        state.sources[j] = base.target(a);
        if j == 0 {
            state.words[q - 1].push(base.phi(a));
        } else {
            state.words[j - 1].push(a);
        }
        let cols: Vec<SimpleId> = divided
            .factors(cur)
            .iter()
            .enumerate()
            .map(|(c, &f)| if c == j { a } else { base.identity(base.source(f)) })
            .collect();
        let l = divided
            .ladder(cur, &cols)
            .ok_or_else(|| internal(format!("slide {i} is not a ladder")))?;
        cur = divided.germ().target(l);
        if cur != object_of(&state)? {
            return Err(internal(format!("slide {i} lands on the wrong object")));
        }
        ladders.push(l);
    }
    crate::free::normal_form(divided.germ(), first, &ladders, 0)
}

/// The verified conjugator from `Θ_q(s Δ^k)` to `Δ_q^p`.
#[derive(Clone, Debug)]
pub struct NecklaceConjugator {
    /// At `Θ_q(x)`, ending at the Bestvina object.
    pub conjugator: NormalForm,
    pub object: ObjectId,
    /// `Θ_q(s Δ^k)`.
    pub theta: NormalForm,
}

pub fn necklace_conjugator(divided: &DividedGerm, bf: &BestvinaForm) -> Result<NecklaceConjugator> {
    let base = divided.base();
    let q = divided.m();
    if q != bf.q {
        return Err(Error::Internal("divided germ does not match q".into()));
    }
    let object = bestvina_object(divided, bf)?;
    let x = base.source(bf.s);
    let letters = bf.letters(base);
    let start = NecklaceState::concentrated(x, q, letters.clone());
    let conjugator = evaluate_slides(divided, &start, &NecklaceWord::beta_2(q))?;
    if conjugator.target(divided.germ()) != object {
        return Err(Error::Internal("conjugator does not end at the Bestvina object".into()));
    }
    let theta = divided.theta_morphism(&bf.representative)?;
    let c = divided.germ();
    let lhs = multiply(c, &theta, &conjugator)?;
    let rhs = multiply(c, &conjugator, &NormalForm::delta_power(object, bf.p))?;
    if lhs != rhs {
        return Err(Error::Internal(
            "necklace conjugator fails the conjugation equation".into(),
        ));
    }
    let one_turn = evaluate_slides(
        divided,
        &NecklaceState::from_factors(base, &letters),
        &NecklaceWord::beta_1(q),
    )?;
    if one_turn != NormalForm::delta_power(object, 1) {
        return Err(Error::Internal(
            "one turn of the necklace is not the Garside map".into(),
        ));
    }
    if bf.p >= 0 {
        let turns = evaluate_slides(divided, &start, &NecklaceWord::beta_1(q).repeat(bf.p as usize))?;
        if turns != theta {
            return Err(Error::Internal("necklace turns disagree with theta".into()));
        }
    }
    Ok(NecklaceConjugator {
        conjugator,
        object,
        theta,
    })
}

#[derive(Clone, Debug)]
pub struct PeriodicClass {
    /// Objects of the divided germ in this component.
    pub objects: Vec<ObjectId>,
    /// `f_1 Δ^k` for the first object of the component.
    pub representative: NormalForm,
}

#[derive(Clone, Debug)]
pub struct PeriodicClassification {
    pub divided: DividedGerm,
    pub fixed: FixedGermReport,
    pub classes: Vec<PeriodicClass>,
}

/// One class per component of the fixed subgerm of `C_q` under `φ_q^p`.
pub fn classify_periodic(base: &GarsideGerm, p: i64, q: usize) -> Result<PeriodicClassification> {
    if q == 0 || !one_mod_q(p, q) {
        return Err(Error::NotOneModQ { p, q });
    }
    let k = (p - 1).div_euclid(q as i64);
    let divided = DividedGerm::build(base, q)?;
    let fixed = fixed_subgerm(divided.germ(), &divided.germ().phi_automorphism(p))?;
    let mut classes = Vec::new();
    for comp in components(&fixed.subgerm) {
        let objects: Vec<ObjectId> = comp.iter().map(|x| fixed.object_inclusion[x.index()]).collect();
        let f1 = divided.factors(objects[0])[0];
        let s = NormalForm::from_simple(base, f1);
        let representative = multiply(base, &s, &NormalForm::delta_power(base.target(f1), k))?;
        classes.push(PeriodicClass {
            objects,
            representative,
        });
    }
    Ok(PeriodicClassification {
        divided,
        fixed,
        classes,
    })
}

/// The fixed subgerm of `φ^p`, whose structure group at a fixed object is
/// the centralizer of `Δ^p`.
pub fn centralizer_germ(base: &GarsideGerm, p: i64) -> Result<FixedGermReport> {
    let report = fixed_subgerm(base, &base.phi_automorphism(p))?;
    if report.subgerm.object_count() == 0 {
        return Err(Error::NoFixedObjects);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::parse_word;
    use crate::germ::{parse_germ, validate};

    fn a2() -> GarsideGerm {
        validate(parse_germ(include_str!("../../../fixtures/a2.germ")).unwrap()).unwrap()
    }

    fn found(o: BestvinaOutcome) -> BestvinaForm {
        match o {
            BestvinaOutcome::Found(bf) => bf,
            other => panic!("expected a Bestvina form, got {other:?}"),
        }
    }

    #[test]
    fn periodicity() {
        let g = a2();
        let w = |t| parse_word(&g, t).unwrap();
        assert!(is_periodic(&g, &w("st"), 2, 3).unwrap().is_some());
        assert!(is_periodic(&g, &w("s D^1"), 4, 3).unwrap().is_some());
        for p in 0..=8 {
            for q in 1..=8 {
                assert!(is_periodic(&g, &w("s"), p, q).unwrap().is_none());
            }
        }
    }

    #[test]
    fn bestvina_forms() {
        let g = a2();
        let w = |t| parse_word(&g, t).unwrap();
        let o = SearchOptions::default();
        for (word, name) in [("s D^1", "s"), ("t D^1", "t")] {
            let cert = is_periodic(&g, &w(word), 4, 3).unwrap().unwrap();
            let bf = found(find_bestvina_form(&g, &cert, &o).unwrap());
            assert_eq!((g.name(bf.s), bf.k), (name, 1));
            assert!(bf.conjugator.is_identity());
        }
        let cert = is_periodic(&g, &w("st"), 2, 3).unwrap().unwrap();
        assert!(matches!(
            find_bestvina_form(&g, &cert, &o).unwrap(),
            BestvinaOutcome::NoLengthOneRepresentative { .. }
        ));
        let cert = is_periodic(&g, &w("D^1"), 1, 1).unwrap().unwrap();
        let bf = found(find_bestvina_form(&g, &cert, &o).unwrap());
        assert_eq!((g.name(bf.s), bf.k), ("D", 0));
    }

    #[test]
    fn necklace() {
        let g = a2();
        let o = SearchOptions::default();
        let cert = is_periodic(&g, &parse_word(&g, "s D^1").unwrap(), 4, 3)
            .unwrap()
            .unwrap();
        let bf = found(find_bestvina_form(&g, &cert, &o).unwrap());
        let c3 = DividedGerm::build(&g, 3).unwrap();
        let n = necklace_conjugator(&c3, &bf).unwrap();
        assert_eq!(c3.germ().object_name(n.object), "(s,t,s)");

        let cert = is_periodic(&g, &parse_word(&g, "D^1").unwrap(), 1, 1).unwrap().unwrap();
        let bf = found(find_bestvina_form(&g, &cert, &o).unwrap());
        let c1 = DividedGerm::build(&g, 1).unwrap();
        let n = necklace_conjugator(&c1, &bf).unwrap();
        assert!(n.conjugator.is_identity());
        assert_eq!(c1.germ().object_name(n.object), "(D)");
    }

    #[test]
    fn classification() {
        let g = a2();
        let c = classify_periodic(&g, 4, 3).unwrap();
        assert_eq!(c.classes.len(), 1);
        let mut names: Vec<&str> = c.classes[0]
            .objects
            .iter()
            .map(|&x| c.divided.germ().object_name(x))
            .collect();
        names.sort();
        assert_eq!(names, ["(s,t,s)", "(t,s,t)"]);
        assert!(is_periodic(&g, &c.classes[0].representative, 4, 3).unwrap().is_some());
        assert_eq!(classify_periodic(&g, 1, 1).unwrap().classes.len(), 1);
        assert!(matches!(classify_periodic(&g, 2, 3), Err(Error::NotOneModQ { .. })));
    }

    #[test]
    fn centralizers() {
        let g = a2();
        let one = centralizer_germ(&g, 1).unwrap();
        assert_eq!(
            one.ambient_atoms().iter().map(|&a| g.name(a)).collect::<Vec<_>>(),
            ["D"]
        );
        assert_eq!(
            centralizer_germ(&g, 2).unwrap().subgerm.simple_count(),
            g.simple_count()
        );
    }
}
