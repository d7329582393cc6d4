mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use garside::builtins::BuiltinSpec;
use garside::conjugacy::{are_conjugate, conjugate, summit_set, SearchOptions, DEFAULT_BUDGET};
use garside::divided::DividedGerm;
use garside::free::{invert, multiply, parse_word, NormalForm};
use garside::germ::{parse_germ, validate};
use garside::nerve::{
    atom_graph_dot, check_cyclic_identities, cover_ball, cover_ball_dot, enumerate_nondegenerate, euler_characteristic,
    export_nerve, fit_z_polynomial, garside_dimension,
};
use garside::periodic::{
    bestvina_object, centralizer_germ, classify_periodic, find_bestvina_form, is_periodic, necklace_conjugator,
    BestvinaOutcome,
};
use garside::{Error, GarsideGerm};

use report::Report;

#[derive(Parser)]
#[command(
    name = "garside",
    version,
    about = "Garside germs: normal forms, conjugacy, divided categories and nerves"
)]
struct Cli {
    /// Emit the brace-delimited key: value format instead of plain lines
    #[arg(long, global = true)]
    json_like: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GermArgs {
    /// Germ file in the `garside-germ v1` format
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Builtin family: artin_symmetric, dual_braid, dihedral_chamber, rank2_counterexample, divided
    #[arg(long, alias = "family")]
    builtin: Option<String>,
    /// Parameter of the builtin family (the number of parts for `divided`)
    #[arg(long, allow_hyphen_values = true)]
    param: Option<i64>,
    /// Base family of the `divided` builtin
    #[arg(long)]
    base: Option<String>,
    /// Parameter of the base family of the `divided` builtin
    #[arg(long)]
    base_param: Option<i64>,
}

#[derive(Args)]
struct WordArgs {
    /// Word such as `@x s t D^-1`; repeat for binary operations
    #[arg(long = "word", required = true, allow_hyphen_values = true)]
    words: Vec<String>,
    /// Source object, used when a word has no `@object` prefix
    #[arg(long)]
    source: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// Node budget for summit set searches
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = positive)]
    budget: usize,
    /// Explore summit set frontiers in parallel
    #[arg(long)]
    parallel: bool,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            budget: self.budget,
            parallel: self.parallel,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a germ and summarize it
    Validate {
        #[command(flatten)]
        germ: GermArgs,
    },
    /// Normal form of a word
    Nf {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Product of two words
    Mul {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Inverse of a word
    Inv {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Conjugate the first word by the second: c^-1 g c
    Conj {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Summit set of a loop
    Summit {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide whether two loops are conjugate
    Isconj {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build the m-divided germ
    Divide {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, value_parser = parts)]
        m: usize,
        /// Print only the number of objects
        #[arg(long)]
        count: bool,
        /// Write the divided germ to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Image of a word under the embedding into the m-divided germ
    Theta {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_parser = parts)]
        m: usize,
    },
    /// Certify a periodic loop and find its length-one representative
    Periodic {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, value_parser = parts)]
        q: usize,
        /// Build and verify the necklace conjugator in the q-divided germ
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Conjugacy classes of periodic loops with gamma^q = D^p
    Classify {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, value_parser = parts)]
        q: usize,
    },
    /// Fixed subgerm of phi^p
    Centralizer {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Nondegenerate simplices of the nerve and the cyclic identities
    Nerve {
        #[command(flatten)]
        germ: GermArgs,
        /// Highest dimension to enumerate (default: Garside dimension)
        #[arg(long)]
        dim: Option<usize>,
        /// Write the simplex listing to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the polynomial counting factorizations of the Garside map
    Zpoly {
        #[command(flatten)]
        germ: GermArgs,
        /// Number of interpolation points (default: Garside dimension + 2)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Ball in the universal cover around an object
    Cover {
        #[command(flatten)]
        germ: GermArgs,
        /// Basepoint object (default: first object)
        #[arg(long)]
        source: Option<String>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Write the ball as DOT to this file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the atom graph instead of the ball
        #[arg(long)]
        atoms: bool,
    },
    /// Print or write a builtin germ in the germ file format
    Builtin {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parts(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n @ 1..=12) => Ok(n),
        Ok(n) => Err(format!("{n} is outside 1..=12")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Validation(_) | Error::Table(_) | Error::Internal(_) => 1,
                Error::LimitExceeded { .. } | Error::WordTooLong { .. } => 3,
                Error::NoFixedObjects | Error::DegreeTooHigh { .. } | Error::PredictionMismatch { .. } => 4,
                _ => 2,
            },
        }
    }
}

enum Output {
    Report(Report),
    /// Printed verbatim in both formats.
    Raw(String),
}

/// What to print and whether it records a negative answer.
struct Outcome {
    output: Output,
    negative: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome {
            output: Output::Report(report),
            negative: false,
        }
    }
}

impl Outcome {
    fn negative(report: Report) -> Self {
        Outcome {
            output: Output::Report(report),
            negative: true,
        }
    }

    fn raw(text: String) -> Self {
        Outcome {
            output: Output::Raw(text),
            negative: false,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

impl GermArgs {
    fn spec(&self) -> Result<Option<BuiltinSpec>, CliError> {
        let Some(family) = &self.builtin else { return Ok(None) };
        let base = match &self.base {
            Some(b) => Some(BuiltinSpec::new(b, self.base_param, None)?),
            None => None,
        };
        Ok(Some(BuiltinSpec::new(family, self.param, base)?))
    }

    fn load(&self) -> Result<GarsideGerm, CliError> {
        if let Some(spec) = self.spec()? {
            return Ok(spec.germ()?);
        }
        let path = self
            .file
            .as_ref()
            .ok_or_else(|| CliError::Usage("give --file or --builtin".into()))?;
        let table = parse_germ(&read(path)?).map_err(Error::from)?;
        Ok(validate(table).map_err(Error::from)?)
    }
}

impl WordArgs {
    fn parse(&self, germ: &GarsideGerm, count: usize) -> Result<Vec<NormalForm>, CliError> {
        if self.words.len() != count {
            return Err(CliError::Usage(format!(
                "expected {count} --word argument(s), got {}",
                self.words.len()
            )));
        }
        self.words.iter().map(|w| self.parse_one(germ, w)).collect()
    }

    fn parse_one(&self, germ: &GarsideGerm, word: &str) -> Result<NormalForm, CliError> {
        let text = match &self.source {
            Some(src) if !word.trim_start().starts_with('@') => format!("@{src} {word}"),
            _ => word.to_string(),
        };
        Ok(parse_word(germ, &text)?)
    }
}

fn describe(report: &mut Report, germ: &GarsideGerm, key: &str, f: &NormalForm) {
    report.push(key, f.display(germ).to_string());
}

fn word_report(germ: &GarsideGerm, f: &NormalForm) -> Report {
    let mut r = Report::new();
    describe(&mut r, germ, "normal_form", f);
    r.push("source", germ.object_name(f.source()))
        .push("target", germ.object_name(f.target(germ)))
        .push("inf", f.inf())
        .push("sup", f.sup())
        .push("canonical_length", f.canonical_length());
    r
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { germ } => {
            let g = germ.load()?;
            let mut r = Report::new();
            r.push("status", "valid")
                .push("objects", g.object_count())
                .push("simples", g.simple_count())
                .push("products", g.explicit_products().len())
                .push(
                    "atoms",
                    g.atoms().iter().map(|&a| g.name(a).to_string()).collect::<Vec<_>>(),
                )
                .push("phi_order", g.phi_order().to_string())
                .push("garside_dimension", garside_dimension(&g));
            Ok(r.into())
        }
        Command::Nf { germ, word } => {
            let g = germ.load()?;
            let f = word.parse(&g, 1)?.remove(0);
            Ok(word_report(&g, &f).into())
        }
        Command::Mul { germ, word } => {
            let g = germ.load()?;
            let fs = word.parse(&g, 2)?;
            Ok(word_report(&g, &multiply(&g, &fs[0], &fs[1])?).into())
        }
        Command::Inv { germ, word } => {
            let g = germ.load()?;
            let f = word.parse(&g, 1)?.remove(0);
            Ok(word_report(&g, &invert(&g, &f)).into())
        }
        Command::Conj { germ, word } => {
            let g = germ.load()?;
            let fs = word.parse(&g, 2)?;
            Ok(word_report(&g, &conjugate(&g, &fs[0], &fs[1])?).into())
        }
        Command::Summit { germ, word, search } => {
            let g = germ.load()?;
            let f = word.parse(&g, 1)?.remove(0);
            let set = summit_set(&g, &f, &search.options())?;
            let mut r = Report::new();
            r.push("inf", set.inf).push("sup", set.sup).push(
                "elements",
                set.elements
                    .iter()
                    .map(|e| format!("{} via {}", e.element.display(&g), e.conjugator.display(&g)))
                    .collect::<Vec<_>>(),
            );
            Ok(r.into())
        }
        Command::Isconj { germ, word, search } => {
            let g = germ.load()?;
            let fs = word.parse(&g, 2)?;
            let mut r = Report::new();
            match are_conjugate(&g, &fs[0], &fs[1], &search.options())? {
                Some(w) => {
                    r.push("conjugate", true);
                    describe(&mut r, &g, "conjugator", &w.c);
                    r.push("verified", w.verify(&g));
                }
                None => {
                    r.push("conjugate", false);
                }
            }
            Ok(r.into())
        }
        Command::Divide { germ, m, count, out } => {
            let g = germ.load()?;
            let d = DividedGerm::build(&g, *m)?;
            let c = d.germ();
            if let Some(path) = out {
                write(path, &c.to_text())?;
            }
            let mut r = Report::new();
            r.push("objects", c.object_count());
            if *count {
                if !cli.json_like {
                    return Ok(Outcome::raw(format!("{}\n", c.object_count())));
                }
            } else {
                r.push("simples", c.simple_count())
                    .push("atoms", c.atoms().len())
                    .push("phi_order", c.phi_order().to_string());
            }
            Ok(r.into())
        }
        Command::Theta { germ, word, m } => {
            let g = germ.load()?;
            let f = word.parse(&g, 1)?.remove(0);
            let d = DividedGerm::build(&g, *m)?;
            let image = d.theta_morphism(&f)?;
            Ok(word_report(d.germ(), &image).into())
        }
        Command::Periodic {
            germ,
            word,
            p,
            q,
            certify,
            search,
        } => {
            let g = germ.load()?;
            let gamma = word.parse(&g, 1)?.remove(0);
            let mut r = Report::new();
            let Some(cert) = is_periodic(&g, &gamma, *p, *q)? else {
                r.push("periodic", false);
                return Ok(Outcome::negative(r));
            };
            r.push("periodic", true);
            let bf = match find_bestvina_form(&g, &cert, &search.options())? {
                BestvinaOutcome::Found(bf) => bf,
                BestvinaOutcome::NoLengthOneRepresentative { reason } => {
                    r.push("bestvina_form", "none").push("reason", reason);
                    return Ok(Outcome::negative(r));
                }
            };
            r.push("bestvina_form", format!("({}, k={})", g.name(bf.s), bf.k));
            describe(&mut r, &g, "representative", &bf.representative);
            describe(&mut r, &g, "conjugator", &bf.conjugator);
            let d = DividedGerm::build(&g, *q)?;
            let object = bestvina_object(&d, &bf)?;
            r.push("object", d.germ().object_name(object));
            if *certify {
                let nc = necklace_conjugator(&d, &bf)?;
                describe(&mut r, d.germ(), "theta", &nc.theta);
                describe(&mut r, d.germ(), "necklace_conjugator", &nc.conjugator);
                r.push("check", "conjugation verified");
            }
            Ok(r.into())
        }
        Command::Classify { germ, p, q } => {
            let g = germ.load()?;
            let cl = classify_periodic(&g, *p, *q)?;
            let c = cl.divided.germ();
            let mut r = Report::new();
            r.push("classes", cl.classes.len());
            for (i, class) in cl.classes.iter().enumerate() {
                let names: Vec<String> = class.objects.iter().map(|&x| c.object_name(x).to_string()).collect();
                r.push(format!("class_{}_objects", i + 1), names);
                describe(
                    &mut r,
                    &g,
                    &format!("class_{}_representative", i + 1),
                    &class.representative,
                );
            }
            Ok(r.into())
        }
        Command::Centralizer { germ, p } => {
            let g = germ.load()?;
            let rep = centralizer_germ(&g, *p)?;
            let mut r = Report::new();
            let objects: Vec<String> = rep
                .object_inclusion
                .iter()
                .map(|&x| g.object_name(x).to_string())
                .collect();
            let atoms: Vec<String> = rep.ambient_atoms().iter().map(|&a| g.name(a).to_string()).collect();
            r.push("objects", objects)
                .push("simples", rep.subgerm.simple_count())
                .push("atoms", atoms)
                .push("components", rep.components.len())
                .push("whole_germ", rep.subgerm.simple_count() == g.simple_count());
            Ok(r.into())
        }
        Command::Nerve { germ, dim, out } => {
            let g = germ.load()?;
            let dimension = garside_dimension(&g);
            let top = dim.unwrap_or(dimension);
            if let Some(path) = out {
                write(path, &export_nerve(&g, top))?;
            }
            let counts: Vec<usize> = (0..=top).map(|n| enumerate_nondegenerate(&g, n).len()).collect();
            let cyclic = check_cyclic_identities(&g, top.min(dimension));
            let mut r = Report::new();
            r.push("garside_dimension", dimension)
                .push("nondegenerate", counts)
                .push("euler_characteristic", euler_characteristic(&g))
                .push("cyclic_simplices_checked", cyclic.simplices_checked)
                .push("cyclic_identities", cyclic.holds());
            if cyclic.holds() {
                Ok(r.into())
            } else {
                r.push("failures", cyclic.failures);
                Ok(Outcome::negative(r))
            }
        }
        Command::Zpoly { germ, samples } => {
            let g = germ.load()?;
            let samples = samples.unwrap_or(garside_dimension(&g) + 2);
            let fit = fit_z_polynomial(&g, samples)?;
            let mut r = Report::new();
            r.push("counts", fit.samples.clone())
                .push("polynomial", fit.polynomial.to_string())
                .push("degree", fit.polynomial.degree());
            for (m, predicted, counted) in &fit.predictions {
                r.push(format!("predicted_{m}"), *predicted)
                    .push(format!("counted_{m}"), *counted);
            }
            Ok(r.into())
        }
        Command::Cover {
            germ,
            source,
            radius,
            out,
            atoms,
        } => {
            let g = germ.load()?;
            let basepoint = match source {
                Some(name) => g
                    .object_by_name(name)
                    .ok_or_else(|| CliError::Usage(format!("unknown object {name:?}")))?,
                None => g
                    .object_ids()
                    .next()
                    .ok_or_else(|| CliError::Usage("germ has no objects".into()))?,
            };
            let ball = cover_ball(&g, basepoint, *radius)?;
            if let Some(path) = out {
                let dot = if *atoms {
                    atom_graph_dot(&g)
                } else {
                    cover_ball_dot(&g, &ball)
                };
                write(path, &dot)?;
            }
            let mut r = Report::new();
            r.push("basepoint", g.object_name(basepoint))
                .push("radius", *radius)
                .push("vertices", ball.vertices.len())
                .push("edges", ball.edges.len());
            Ok(r.into())
        }
        Command::Builtin { germ, out } => {
            if germ.builtin.is_none() {
                return Err(CliError::Usage("builtin needs --builtin".into()));
            }
            let g = germ.load()?;
            let text = g.to_text();
            match out {
                Some(path) => {
                    write(path, &text)?;
                    let mut r = Report::new();
                    r.push("written", path.display().to_string())
                        .push("objects", g.object_count())
                        .push("simples", g.simple_count());
                    Ok(r.into())
                }
                None => Ok(Outcome::raw(text)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(Outcome { output, negative }) => {
            match output {
                Output::Report(r) if cli.json_like => print!("{}", r.json_like()),
                Output::Report(r) => print!("{}", r.plain()),
                Output::Raw(text) => print!("{text}"),
            }
            ExitCode::from(if negative { 4 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
