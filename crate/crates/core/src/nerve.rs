//! Combinatorics of the Garside nerve: simplices `(f_1, …, f_n)` with
//! `f_1 ⋯ f_n ≤ Δ`, the special degeneracy and first face, factorization
//! counts and their interpolating polynomial, and finite balls of the
//! universal cover's flag graph.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::free::{multiply, NormalForm};
use crate::germ::{GarsideGerm, ObjectId, SimpleId};

/// Longest strict divisibility chain `1 < u_1 < … < u_n` among simples with
/// a common source.
pub fn garside_dimension(germ: &GarsideGerm) -> usize {
    let mut depth = vec![0usize; germ.simple_count()];
    let mut best = 0;
    for x in germ.object_ids() {
        for &s in germ.simples_from(x) {
            let d = germ
                .divisors(s)
                .filter(|&u| u != s)
                .map(|u| depth[u.index()] + 1)
                .max()
                .unwrap_or(0);
            depth[s.index()] = d;
            best = best.max(d);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NerveSimplex {
    pub basepoint: ObjectId,
    pub factors: Vec<SimpleId>,
}

impl NerveSimplex {
    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn display<'a>(&'a self, germ: &'a GarsideGerm) -> SimplexDisplay<'a> {
        SimplexDisplay { germ, simplex: self }
    }
}

/// `simplex <n> @ <basepoint> : <f1> … <fn>`
pub struct SimplexDisplay<'a> {
    germ: &'a GarsideGerm,
    simplex: &'a NerveSimplex,
}

impl fmt::Display for SimplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simplex {} @ {} :",
            self.simplex.dimension(),
            self.germ.object_name(self.simplex.basepoint)
        )?;
        for &s in &self.simplex.factors {
            write!(f, " {}", self.germ.name(s))?;
        }
        Ok(())
    }
}

fn chains(germ: &GarsideGerm, n: usize, strict: bool) -> Vec<NerveSimplex> {
    fn go(
        germ: &GarsideGerm,
        n: usize,
        strict: bool,
        x: ObjectId,
        chain: &mut Vec<SimpleId>,
        out: &mut Vec<NerveSimplex>,
    ) {
        if chain.len() == n + 1 {
            let factors = chain
                .windows(2)
                .map(|w| germ.quotient_opt(w[0], w[1]).expect("chain is increasing"))
                .collect();
            out.push(NerveSimplex { basepoint: x, factors });
            return;
        }
        let last = *chain.last().expect("chain starts at the identity");
        let next: Vec<SimpleId> = germ.multiples(last).filter(|&u| !strict || u != last).collect();
        for u in next {
            chain.push(u);
            go(germ, n, strict, x, chain, out);
            chain.pop();
        }
    }
    let mut out = Vec::new();
    for x in germ.object_ids() {
        go(germ, n, strict, x, &mut vec![germ.identity(x)], &mut out);
    }
    out
}

/// Simplices without identity factors.
pub fn enumerate_nondegenerate(germ: &GarsideGerm, n: usize) -> Vec<NerveSimplex> {
    chains(germ, n, true)
}

/// All `n`-simplices, degenerate ones included.
pub fn enumerate_simplices(germ: &GarsideGerm, n: usize) -> Vec<NerveSimplex> {
    chains(germ, n, false)
}

/// Alternating sum of nondegenerate simplex counts.
pub fn euler_characteristic(germ: &GarsideGerm) -> i64 {
    (0..=garside_dimension(germ))
        .map(|n| {
            let c = enumerate_nondegenerate(germ, n).len() as i64;
            if n % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum()
}

fn product(germ: &GarsideGerm, sx: &NerveSimplex) -> SimpleId {
    germ.evaluate(sx.basepoint, &sx.factors)
        .expect("simplex factors multiply to a simple")
}

/// Appends the factor completing the product to `Δ`.
pub fn special_degeneracy(germ: &GarsideGerm, sx: &NerveSimplex) -> NerveSimplex {
    let p = product(germ, sx);
    let last = germ
        .quotient_opt(p, germ.delta(sx.basepoint))
        .expect("product divides delta");
    let mut factors = sx.factors.clone();
    factors.push(last);
    NerveSimplex {
        basepoint: sx.basepoint,
        factors,
    }
}

/// Drops the first factor; `None` for a 0-simplex.
pub fn face_zero(germ: &GarsideGerm, sx: &NerveSimplex) -> Option<NerveSimplex> {
    let (&first, rest) = sx.factors.split_first()?;
    Some(NerveSimplex {
        basepoint: germ.target(first),
        factors: rest.to_vec(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct CyclicReport {
    pub simplices_checked: usize,
    pub subdivisions_checked: usize,
    pub failures: Vec<String>,
}

impl CyclicReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `𝔰 d_0 (f_1, …, f_n) = (f_2, …, f_n, φ f_1)` when the product is
/// `Δ`, and `(d_0 𝔰)^{n+1} = φ` on every simplex, up to dimension `up_to`.
pub fn check_cyclic_identities(germ: &GarsideGerm, up_to: usize) -> CyclicReport {
    let mut report = CyclicReport::default();
    for n in 0..=up_to {
        for sx in enumerate_simplices(germ, n) {
            report.simplices_checked += 1;
            let mut cur = sx.clone();
            for _ in 0..=n {
                cur = face_zero(germ, &special_degeneracy(germ, &cur)).expect("degeneracy adds a factor");
            }
            let expected = NerveSimplex {
                basepoint: germ.phi_obj(sx.basepoint),
                factors: sx.factors.iter().map(|&f| germ.phi(f)).collect(),
            };
            if cur != expected {
                report
                    .failures
                    .push(format!("(d0 s)^{} fails on {}", n + 1, sx.display(germ)));
            }
            if n >= 1 && product(germ, &sx) == germ.delta(sx.basepoint) {
                report.subdivisions_checked += 1;
                let shifted = special_degeneracy(germ, &face_zero(germ, &sx).expect("n >= 1"));
                let mut factors = sx.factors[1..].to_vec();
                factors.push(germ.phi(sx.factors[0]));
                let expected = NerveSimplex {
                    basepoint: germ.target(sx.factors[0]),
                    factors,
                };
                if shifted != expected {
                    report
                        .failures
                        .push(format!("s d0 is not the shift on {}", sx.display(germ)));
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCount {
    pub per_object: Vec<u128>,
    pub total: u128,
}

/// Number of factorizations of each `Δ_x` into `r` simples, by counting
/// multichains in the divisor lattice.
pub fn count_factorizations(germ: &GarsideGerm, r: usize) -> FactorizationCount {
    assert!(r >= 1, "at least one factor");
    let mut per_object = Vec::with_capacity(germ.object_count());
    for x in germ.object_ids() {
        let row = germ.simples_from(x);
        let pos: HashMap<SimpleId, usize> = row.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut c = vec![1u128; row.len()];
        for _ in 1..r {
            c = row
                .iter()
                .map(|&v| germ.divisors(v).map(|u| c[pos[&u]]).sum())
                .collect();
        }
        per_object.push(c[pos[&germ.delta(x)]]);
    }
    let total = per_object.iter().sum();
    FactorizationCount { per_object, total }
}

/// A polynomial with integer values at integers, stored by its forward
/// differences at `m = 1`: `Z(m) = Σ_j c_j · C(m-1, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPolynomial {
    pub coefficients: Vec<i128>,
}

fn binomial(n: i128, k: usize) -> i128 {
    let mut c: i128 = 1;
    for i in 0..k as i128 {
        c = c * (n - i) / (i + 1);
    }
    c
}

impl ZPolynomial {
    /// Interpolates through `values[i] = Z(i + 1)`.
    pub fn interpolate(values: &[i128]) -> Self {
        let mut row = values.to_vec();
        let mut coefficients = Vec::with_capacity(values.len());
        while let Some(&first) = row.first() {
            coefficients.push(first);
            row = row.windows(2).map(|w| w[1] - w[0]).collect();
        }
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        ZPolynomial { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, m: i64) -> i128 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, &c)| c * binomial(m as i128 - 1, j))
            .sum()
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|&(j, &c)| c != 0 || j == 0)
            .map(|(j, &c)| {
                if j == 0 {
                    c.to_string()
                } else {
                    format!("{c}*C(m-1,{j})")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct ZFit {
    pub polynomial: ZPolynomial,
    pub samples: Vec<i128>,
    /// `(m, predicted, counted)` for the two values after the samples.
    pub predictions: Vec<(usize, i128, i128)>,
}

/// Interpolates `|D_m|` for `m = 1..=samples` and checks the degree bound
/// and two out-of-sample predictions.
pub fn fit_z_polynomial(germ: &GarsideGerm, samples: usize) -> Result<ZFit> {
    let dimension = garside_dimension(germ);
    if samples < dimension + 2 {
        return Err(Error::TooFewSamples {
            samples,
            needed: dimension + 2,
        });
    }
    let count = |m: usize| count_factorizations(germ, m).total as i128;
    let values: Vec<i128> = (1..=samples).map(count).collect();
    let polynomial = ZPolynomial::interpolate(&values);
    if polynomial.degree() > dimension {
        return Err(Error::DegreeTooHigh {
            degree: polynomial.degree(),
            dimension,
        });
    }
    let mut predictions = Vec::new();
    for m in samples + 1..=samples + 2 {
        let (predicted, counted) = (polynomial.eval(m as i64), count(m));
        if predicted != counted {
            return Err(Error::PredictionMismatch { m, predicted, counted });
        }
        predictions.push((m, predicted, counted));
    }
    Ok(ZFit {
        polynomial,
        samples: values,
        predictions,
    })
}

/// Positive elements of sup at most `radius` from a basepoint, joined when
/// one is a simple right multiple of the other. A finite approximation of
/// the flag graph of the universal cover.
#[derive(Clone, Debug)]
pub struct CoverBall {
    pub basepoint: ObjectId,
    pub radius: usize,
    /// Sorted.
    pub vertices: Vec<NormalForm>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

pub fn cover_ball(germ: &GarsideGerm, basepoint: ObjectId, radius: usize) -> Result<CoverBall> {
    let mut all: BTreeSet<NormalForm> = BTreeSet::new();
    all.insert(NormalForm::identity(basepoint));
    let mut layer = vec![NormalForm::identity(basepoint)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for f in &layer {
            for &s in germ.simples_from(f.target(germ)) {
                let g = multiply(germ, f, &NormalForm::from_simple(germ, s))?;
                if g.sup() <= radius as i64 && all.insert(g.clone()) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    let vertices: Vec<NormalForm> = all.into_iter().collect();
    let index: HashMap<&NormalForm, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, f) in vertices.iter().enumerate() {
        for &s in germ.simples_from(f.target(germ)) {
            if germ.is_identity(s) {
                continue;
            }
            let g = multiply(germ, f, &NormalForm::from_simple(germ, s))?;
            if let Some(&j) = index.get(&g) {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok(CoverBall {
        basepoint,
        radius,
        vertices,
        edges: edges.into_iter().collect(),
    })
}

fn dot_label(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering of a cover ball; vertex labels are normal forms.
pub fn cover_ball_dot(germ: &GarsideGerm, ball: &CoverBall) -> String {
    let mut out = String::new();
    writeln!(out, "graph cover_ball {{").unwrap();
    writeln!(
        out,
        "  label=\"finite ball of radius {} at {}\";",
        ball.radius,
        dot_label(germ.object_name(ball.basepoint))
    )
    .unwrap();
    for (i, v) in ball.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\"];", dot_label(&v.display(germ).to_string())).unwrap();
    }
    for &(i, j) in &ball.edges {
        writeln!(out, "  v{i} -- v{j};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the atoms of a germ as a directed graph on objects.
pub fn atom_graph_dot(germ: &GarsideGerm) -> String {
    let mut out = String::new();
    writeln!(out, "digraph atoms {{").unwrap();
    for x in germ.object_ids() {
        writeln!(out, "  o{} [label=\"{}\"];", x.0, dot_label(germ.object_name(x))).unwrap();
    }
    for &a in germ.atoms() {
        writeln!(
            out,
            "  o{} -> o{} [label=\"{}\"];",
            germ.source(a).0,
            germ.target(a).0,
            dot_label(germ.name(a))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// One line per nondegenerate simplex up to `max_dim`.
pub fn export_nerve(germ: &GarsideGerm, max_dim: usize) -> String {
    let mut out = String::new();
    for n in 0..=max_dim {
        for sx in enumerate_nondegenerate(germ, n) {
            writeln!(out, "{}", sx.display(germ)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{parse_germ, validate};

    fn a2() -> GarsideGerm {
        validate(parse_germ(include_str!("../../../fixtures/a2.germ")).unwrap()).unwrap()
    }

    fn simplex(g: &GarsideGerm, names: &[&str]) -> NerveSimplex {
        NerveSimplex {
            basepoint: ObjectId(0),
            factors: names.iter().map(|n| g.simple_by_name(n).unwrap()).collect(),
        }
    }

    #[test]
    fn counts_and_dimension() {
        let g = a2();
        assert_eq!(garside_dimension(&g), 3);
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_nondegenerate(&g, n).len()).collect();
        assert_eq!(counts, [1, 5, 6, 2, 0]);
        assert_eq!(euler_characteristic(&g), 0);
        let totals: Vec<u128> = (1..=6).map(|r| count_factorizations(&g, r).total).collect();
        assert_eq!(totals, [1, 6, 17, 36, 65, 106]);
        for n in 0..=3 {
            assert_eq!(
                enumerate_simplices(&g, n).len() as u128,
                count_factorizations(&g, n + 1).total
            );
        }
    }

    #[test]
    fn operators() {
        let g = a2();
        assert_eq!(
            special_degeneracy(&g, &simplex(&g, &["s", "t"])),
            simplex(&g, &["s", "t", "s"])
        );
        assert_eq!(
            face_zero(&g, &simplex(&g, &["s", "t", "s"])).unwrap(),
            simplex(&g, &["t", "s"])
        );
        assert_eq!(special_degeneracy(&g, &simplex(&g, &[])), simplex(&g, &["D"]));
        assert!(face_zero(&g, &simplex(&g, &[])).is_none());
        let mut cur = simplex(&g, &["s"]);
        for _ in 0..2 {
            cur = face_zero(&g, &special_degeneracy(&g, &cur)).unwrap();
        }
        assert_eq!(cur, simplex(&g, &["t"]));
        let report = check_cyclic_identities(&g, 3);
        assert!(report.holds(), "{:?}", report.failures);
    }

    #[test]
    fn polynomial() {
        let z = ZPolynomial::interpolate(&[1, 6, 17, 36]);
        assert_eq!(z.degree(), 3);
        assert_eq!((z.eval(5), z.eval(6)), (65, 106));
        assert_eq!(ZPolynomial::interpolate(&[1, 1, 1]).degree(), 0);
        let fit = fit_z_polynomial(&a2(), 5).unwrap();
        assert_eq!(fit.polynomial.degree(), 3);
        assert!(matches!(fit_z_polynomial(&a2(), 4), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn ball() {
        let g = a2();
        let b = cover_ball(&g, ObjectId(0), 1).unwrap();
        assert_eq!((b.vertices.len(), b.edges.len()), (6, 11));
        let b = cover_ball(&g, ObjectId(0), 0).unwrap();
        assert_eq!((b.vertices.len(), b.edges.len()), (1, 0));
        assert!(cover_ball_dot(&g, &b).starts_with("graph cover_ball {"));
    }
}
