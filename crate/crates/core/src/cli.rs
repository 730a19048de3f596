//! Command-line front end. Exit status: 0 when every requested check holds,
//! 1 when a property fails (the report carries the witness), 2 on input
//! errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use thiserror::Error;

use crate::catalog;
use crate::congruence::{
    all_congruences, properties_of, verify_theorem2_terms, MAJORITY_IDENTITIES, MALCEV_IDENTITIES,
};
use crate::ideal::{self, IdealSet};
use crate::lattice::{classify, Elem, FiniteLattice};
use crate::report::{Check, Report, Witness};
use crate::sasaki::{self, Lemma1Verdict};
use crate::term::{check_statement, parse_statements, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "allab",
    version,
    about = "Sasaki adjointness, congruences and ideals of finite lattices"
)]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Lattice interchange file.
    #[arg(long = "in", value_name = "FILE")]
    pub path: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a lattice file.
    Validate(Input),
    /// Report lattice and complementation flags.
    Classify(Input),
    /// Adjointness, variety membership and the two implication groups.
    Check {
        #[command(flatten)]
        input: Input,
        /// Sasaki product and residual form an adjoint pair.
        #[arg(long)]
        adjoint: bool,
        /// Complemented and satisfying identities (b) and (e).
        #[arg(long)]
        variety: bool,
        /// Conditions (a)-(f) and agreement within (a)-(c) and (d)-(f).
        #[arg(long)]
        theorem1: bool,
        /// Adjointness forces the unary map to be a complementation.
        #[arg(long)]
        lemma1: bool,
    },
    /// List congruences and check their properties.
    Congruences {
        #[command(flatten)]
        input: Input,
        /// Permutability, distributivity, regularity, simplicity.
        #[arg(long)]
        properties: bool,
        /// Mal'cev and majority term identities.
        #[arg(long)]
        malcev: bool,
        /// Class determination by the two regularity terms.
        #[arg(long = "regularity-terms")]
        regularity_terms: bool,
    },
    /// Ideals, closures, the congruence of an ideal and kernel coincidence.
    Ideals {
        #[command(flatten)]
        input: Input,
        /// All ideals; the default when no other flag is given.
        #[arg(long)]
        list: bool,
        /// Comma-separated labels.
        #[arg(long, value_name = "S")]
        closure: Option<String>,
        /// Comma-separated labels of an ideal.
        #[arg(long, value_name = "S")]
        theta: Option<String>,
        /// Ideals are exactly the kernels of congruences.
        #[arg(long)]
        coincidence: bool,
        /// Check the eight identities of the binary and ternary ideal terms.
        #[arg(long)]
        term_identities: bool,
    },
    /// Write a generated lattice file to stdout.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Count bounded lattices up to isomorphism.
    Enumerate {
        #[arg(long = "max-n", default_value_t = 5)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Check every line of an identities file.
    Identities {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "F")]
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// M_n with a fixed-point-free permutation as complementation.
    #[command(name = "m_n")]
    MN {
        #[arg(long)]
        n: usize,
        /// Cycles over atoms 1..n, e.g. "(1 2)(3 4)". Defaults to the n-cycle.
        #[arg(long, value_name = "CYCLES")]
        perm: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    Complemented,
    Variety,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Lattice { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(input: &Input) -> Result<FiniteLattice, InputError> {
    FiniteLattice::from_json(&read(&input.path)?).map_err(|e| InputError::Lattice {
        path: input.path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_set(l: &FiniteLattice, text: &str) -> Result<IdealSet, InputError> {
    let elems = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            l.index_of(s)
                .ok_or_else(|| InputError::Invalid(format!("unknown label `{s}`")))
        })
        .collect::<Result<Vec<Elem>, _>>()?;
    Ok(IdealSet::from_elems(elems))
}

/// Parses `(1 2 3)(4 5)` over atoms `1..=n` into an image array on `0..n`.
pub fn parse_cycles(n: usize, text: &str) -> Result<Vec<usize>, InputError> {
    let bad = || InputError::Invalid(format!("malformed cycles `{text}`"));
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let end = body.find(')').ok_or_else(bad)?;
        let cycle = body[..end]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        cycles.push(cycle);
        rest = body[end + 1..].trim_start();
    }
    catalog::perm_from_cycles(n, &cycles).map_err(|e| InputError::Invalid(e.to_string()))
}

fn outcome_check(l: &FiniteLattice, name: &str, out: &Outcome) -> Check {
    match out {
        Outcome::Holds { checked } => Check::holds(name, format!("{checked} assignments")),
        Outcome::Fails(ce) => Check::fails(
            name,
            format!("counterexample {}", ce.assignment.describe(l)),
            Witness::assignment(l, &ce.assignment),
        ),
    }
}

fn check_cmd(
    l: &FiniteLattice,
    mut adjoint: bool,
    mut variety: bool,
    mut theorem1: bool,
    mut lemma1: bool,
    r: &mut Report,
) {
    if !(adjoint || variety || theorem1 || lemma1) {
        (adjoint, variety, theorem1, lemma1) = (true, true, true, true);
    }
    if adjoint {
        let a = sasaki::check_adjoint(l);
        r.push(match a.witness {
            None => Check::holds("adjoint", format!("{} triples", a.triples_checked)),
            Some(w) => Check::fails(
                "adjoint",
                format!(
                    "{} at x={}, y={}, z={}",
                    w.direction,
                    l.label(w.x),
                    l.label(w.y),
                    l.label(w.z)
                ),
                Witness::Triple {
                    x: l.label(w.x).into(),
                    y: l.label(w.y).into(),
                    z: l.label(w.z).into(),
                    direction: w.direction.to_string(),
                },
            ),
        });
    }
    if variety {
        let m = sasaki::membership(l);
        if let Some(x) = m.not_complemented {
            r.push(Check::fails(
                "variety",
                format!(
                    "{}′ = {} is not a complement",
                    l.label(x),
                    l.label(l.unary(x))
                ),
                Witness::element(l, x),
            ));
        }
        for (name, out) in [("b", &m.identity_b), ("e", &m.identity_e)] {
            if let Some(ce) = out.counterexample() {
                r.push(Check::fails(
                    "variety",
                    format!("identity ({name}) fails at {}", ce.assignment.describe(l)),
                    Witness::assignment(l, &ce.assignment),
                ));
            }
        }
        if m.is_member() {
            r.push(Check::holds(
                "variety",
                "complemented, identities (b) and (e) hold",
            ));
        }
    }
    if theorem1 {
        match sasaki::check_theorem1(l) {
            Err(e) => r.push(Check::fails(
                "conditions",
                e.to_string(),
                Witness::element(
                    l,
                    match e {
                        sasaki::SasakiError::NotComplemented(x) => x,
                    },
                ),
            )),
            Ok(rep) => {
                for v in &rep.verdicts {
                    let text = sasaki::THEOREM1_CONDITIONS
                        .iter()
                        .find(|(c, _)| *c == v.name)
                        .map(|(_, t)| *t)
                        .unwrap_or_default();
                    let check = match &v.outcome {
                        Outcome::Holds { checked } => Check::info(
                            format!("condition ({})", v.name),
                            format!("holds ({checked} assignments): {text}"),
                        ),
                        Outcome::Fails(ce) => Check::info(
                            format!("condition ({})", v.name),
                            format!("false at {}: {text}", ce.assignment.describe(l)),
                        )
                        .with_witness(Witness::assignment(l, &ce.assignment)),
                    };
                    r.push(check);
                }
                for (group, agree) in [("(a)-(c)", rep.abc_agree()), ("(d)-(f)", rep.def_agree())] {
                    r.push(if agree {
                        Check::holds(format!("conditions {group} agree"), "")
                    } else {
                        let bad = rep
                            .verdicts
                            .iter()
                            .find(|v| !v.outcome.holds())
                            .expect("disagreement has a failure");
                        let ce = bad.outcome.counterexample().expect("failed");
                        Check::fails(
                            format!("conditions {group} agree"),
                            format!(
                                "({}) fails alone at {}",
                                bad.name,
                                ce.assignment.describe(l)
                            ),
                            Witness::assignment(l, &ce.assignment),
                        )
                    });
                }
            }
        }
    }
    if lemma1 {
        r.push(match sasaki::check_lemma1(l) {
            Lemma1Verdict::Vacuous(_) => {
                Check::holds("forced complement", "vacuous: adjointness fails")
            }
            Lemma1Verdict::Confirmed => {
                Check::holds("forced complement", "confirmed: adjoint and complemented")
            }
            Lemma1Verdict::Violation(x) => Check::fails(
                "forced complement",
                format!("VIOLATION: adjoint but {} is not complemented", l.label(x)),
                Witness::element(l, x),
            ),
        });
    }
}

fn classify_cmd(l: &FiniteLattice, r: &mut Report) {
    let c = classify(l);
    let f = c.flags;
    let flag = |name: &str, v: bool, why: Option<String>| {
        let detail = match (v, why) {
            (false, Some(w)) => format!("false ({w})"),
            (v, _) => v.to_string(),
        };
        Check::info(name, detail)
    };
    let lab = |x: Elem| l.label(x).to_owned();
    r.push(flag("lattice", f.is_lattice, None));
    r.push(flag(
        "complemented",
        f.is_complemented,
        c.not_complemented
            .map(|x| format!("{}′ = {}", lab(x), lab(l.unary(x)))),
    ));
    r.push(flag(
        "modular",
        f.is_modular,
        c.not_modular
            .map(|(x, y, z)| format!("x={}, y={}, z={}", lab(x), lab(y), lab(z))),
    ));
    r.push(flag(
        "distributive",
        f.is_distributive,
        c.not_distributive
            .map(|(x, y, z)| format!("x={}, y={}, z={}", lab(x), lab(y), lab(z))),
    ));
    r.push(flag(
        "involution",
        f.unary_is_involution,
        c.not_involution
            .map(|x| format!("({}′)′ = {} ≠ {}", lab(x), lab(l.unary(l.unary(x))), lab(x))),
    ));
    r.push(flag(
        "antitone",
        f.unary_is_antitone,
        c.not_antitone.map(|(x, y)| {
            format!(
                "{} ≤ {} but {}′ = {} ≰ {} = {}′",
                lab(x),
                lab(y),
                lab(y),
                lab(l.unary(y)),
                lab(l.unary(x)),
                lab(x)
            )
        }),
    ));
    r.push(flag("ortholattice", f.is_ortholattice, None));
    r.push(flag(
        "orthomodular",
        f.is_orthomodular,
        c.not_orthomodular
            .map(|(x, y)| format!("x={}, y={}", lab(x), lab(y))),
    ));
}

fn congruences_cmd(
    l: &FiniteLattice,
    properties: bool,
    malcev: bool,
    regularity: bool,
    r: &mut Report,
) -> Result<(), InputError> {
    let con = all_congruences(l);
    r.push(Check::info("congruences", con.len().to_string()));
    for c in &con {
        r.push(
            Check::info("congruence", c.describe(l)).with_witness(Witness::Partition {
                blocks: c.label_blocks(l),
            }),
        );
    }
    if properties {
        let p = properties_of(l, &con);
        r.push(match &p.nonpermuting {
            None => Check::holds("permutable", ""),
            Some((a, b)) => Check::fails(
                "permutable",
                format!("{} and {} do not permute", a.describe(l), b.describe(l)),
                Witness::Partitions {
                    first: a.label_blocks(l),
                    second: b.label_blocks(l),
                },
            ),
        });
        r.push(if p.distributive {
            Check::holds("distributive", "")
        } else {
            Check::info("distributive", "false")
        });
        r.push(match &p.irregular {
            None => Check::holds("regular", ""),
            Some((a, b, x)) => Check::fails(
                "regular",
                format!(
                    "{} and {} share the class of {}",
                    a.describe(l),
                    b.describe(l),
                    l.label(*x)
                ),
                Witness::Partitions {
                    first: a.label_blocks(l),
                    second: b.label_blocks(l),
                },
            ),
        });
        r.push(Check::info("simple", p.simple.to_string()));
        let si = match &p.monolith {
            Some(m) => format!("true (monolith {})", m.describe(l)),
            None => "false".into(),
        };
        r.push(Check::info("subdirectly irreducible", si));
    }
    if malcev || regularity {
        let v = verify_theorem2_terms(l).map_err(|e| InputError::Invalid(e.to_string()))?;
        if malcev {
            let texts = MALCEV_IDENTITIES.iter().chain(&MAJORITY_IDENTITIES);
            for (text, (_, out)) in texts.zip(v.malcev.iter().chain(&v.majority)) {
                r.push(outcome_check(l, text, out));
            }
        }
        if regularity {
            r.push(match v.regularity_failure {
                None => Check::holds(
                    "regularity terms",
                    format!(
                        "reg1 = reg2 = z iff x = y ({} triples)",
                        v.regularity_checked
                    ),
                ),
                Some((x, y, z)) => Check::fails(
                    "regularity terms",
                    format!(
                        "fails at x={}, y={}, z={}",
                        l.label(x),
                        l.label(y),
                        l.label(z)
                    ),
                    Witness::Triple {
                        x: l.label(x).into(),
                        y: l.label(y).into(),
                        z: l.label(z).into(),
                        direction: "reg1 = reg2 = z disagrees with x = y".into(),
                    },
                ),
            });
        }
    }
    Ok(())
}

struct IdealFlags<'a> {
    list: bool,
    closure: Option<&'a str>,
    theta: Option<&'a str>,
    coincidence: bool,
    term_identities: bool,
}

fn ideals_cmd(l: &FiniteLattice, f: IdealFlags<'_>, r: &mut Report) -> Result<(), InputError> {
    let err = |e: ideal::IdealError| InputError::Invalid(e.to_string());
    let list =
        f.list || !(f.closure.is_some() || f.theta.is_some() || f.coincidence || f.term_identities);
    if list {
        let ideals = ideal::all_ideals(l).map_err(err)?;
        r.push(Check::info("ideals", ideals.len().to_string()));
        for i in &ideals {
            r.push(
                Check::info("ideal", i.describe(l)).with_witness(Witness::Subset {
                    elements: i.labels(l),
                }),
            );
        }
    }
    if let Some(s) = f.closure {
        let s = parse_set(l, s)?;
        let c = ideal::ideal_closure(l, &s).map_err(err)?;
        r.push(
            Check::info(format!("closure of {}", s.describe(l)), c.describe(l)).with_witness(
                Witness::Subset {
                    elements: c.labels(l),
                },
            ),
        );
    }
    if let Some(s) = f.theta {
        let s = parse_set(l, s)?;
        match ideal::theta_of_ideal(l, &s) {
            Ok(theta) => r.push(
                Check::holds(
                    format!("theta {}", s.describe(l)),
                    format!("blocks {}", theta.describe(l)),
                )
                .with_witness(Witness::Partition {
                    blocks: theta.label_blocks(l),
                }),
            ),
            Err(ideal::IdealError::NotAnIdeal(_)) => {
                let c = ideal::ideal_closure(l, &s).map_err(err)?;
                r.push(Check::fails(
                    format!("theta {}", s.describe(l)),
                    format!(
                        "{} is not an ideal; its closure is {}",
                        s.describe(l),
                        c.describe(l)
                    ),
                    Witness::Subset {
                        elements: s.labels(l),
                    },
                ));
            }
            Err(e) => return Err(err(e)),
        }
    }
    if f.coincidence {
        let c = ideal::verify_kernel_coincidence(l).map_err(err)?;
        let detail = format!("{} ideals, {} kernels", c.ideals.len(), c.kernels.len());
        r.push(if let Some(i) = c.ideals_only.first() {
            Check::fails(
                "coincidence",
                format!("{detail}; ideal {} is no kernel", i.describe(l)),
                Witness::Subset {
                    elements: i.labels(l),
                },
            )
        } else if let Some(k) = c.kernels_only.first() {
            Check::fails(
                "coincidence",
                format!("{detail}; kernel {} is no ideal", k.describe(l)),
                Witness::Subset {
                    elements: k.labels(l),
                },
            )
        } else if let Some((a, b)) = &c.shared_kernel {
            Check::fails(
                "coincidence",
                format!(
                    "{detail}; {} and {} share a kernel",
                    a.describe(l),
                    b.describe(l)
                ),
                Witness::Partitions {
                    first: a.label_blocks(l),
                    second: b.label_blocks(l),
                },
            )
        } else {
            Check::holds("coincidence", detail)
        });
    }
    if f.term_identities {
        for (name, out) in ideal::verify_lemma_lem1(l).map_err(err)? {
            r.push(outcome_check(l, &name, &out));
        }
    }
    Ok(())
}

fn enumerate_cmd(max_n: usize, filter: Filter, r: &mut Report) -> Result<(), InputError> {
    use rayon::prelude::*;
    for n in 1..=max_n {
        let lattices = catalog::enumerate_bounded_lattices(n)
            .map_err(|e| InputError::Invalid(e.to_string()))?;
        if filter == Filter::All {
            r.push(Check::info(
                format!("n={n}"),
                format!("{} lattices", lattices.len()),
            ));
            continue;
        }
        let instances: Vec<FiniteLattice> = lattices
            .par_iter()
            .flat_map_iter(|l| {
                l.all_complementations()
                    .into_iter()
                    .map(|c| l.with_unary(c).expect("complementation has full length"))
                    .filter(|x| filter != Filter::Variety || sasaki::is_member_of_v(x))
                    .collect::<Vec<_>>()
            })
            .collect();
        r.push(Check::info(
            format!("n={n}"),
            format!(
                "{} lattices, {} {filter:?} instances",
                lattices.len(),
                instances.len()
            )
            .to_lowercase(),
        ));
        for x in &instances {
            let covers = x
                .covers()
                .into_iter()
                .map(|(a, b)| format!("{}<{}", x.label(a), x.label(b)))
                .join(" ");
            let unary = x
                .elements()
                .map(|e| format!("{}'={}", x.label(e), x.label(x.unary(e))))
                .join(" ");
            r.push(Check::info(
                format!("  n={n}"),
                format!("covers [{covers}] unary [{unary}]"),
            ));
        }
    }
    Ok(())
}

fn identities_cmd(l: &FiniteLattice, path: &Path, r: &mut Report) -> Result<(), InputError> {
    let text = read(path)?;
    let stmts = parse_statements(&text)
        .map_err(|e| InputError::Invalid(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text.lines().collect();
    for (line, s) in stmts {
        let source = lines[line - 1].trim();
        let body = match &s.label {
            Some(label) => source
                .strip_prefix(label.as_str())
                .and_then(|rest| rest.trim_start().strip_prefix(':'))
                .unwrap_or(source)
                .trim(),
            None => source,
        };
        let name = match &s.label {
            Some(label) => format!("line {line} [{label}] {body}"),
            None => format!("line {line} {body}"),
        };
        r.push(outcome_check(l, &name, &check_statement(l, &s)));
    }
    Ok(())
}

fn execute(cli: &Cli, echo: String) -> Result<Report, InputError> {
    let mut r = Report::new(echo);
    match &cli.command {
        Command::Validate(input) => {
            let l = load(input)?;
            r.push(Check::holds(
                "valid",
                format!("{} elements, {} covers", l.size(), l.covers().len()),
            ));
            r.push(Check::info("complemented", l.is_complemented().to_string()));
        }
        Command::Classify(input) => classify_cmd(&load(input)?, &mut r),
        Command::Check {
            input,
            adjoint,
            variety,
            theorem1,
            lemma1,
        } => check_cmd(
            &load(input)?,
            *adjoint,
            *variety,
            *theorem1,
            *lemma1,
            &mut r,
        ),
        Command::Congruences {
            input,
            properties,
            malcev,
            regularity_terms,
        } => congruences_cmd(
            &load(input)?,
            *properties,
            *malcev,
            *regularity_terms,
            &mut r,
        )?,
        Command::Ideals {
            input,
            list,
            closure,
            theta,
            coincidence,
            term_identities,
        } => ideals_cmd(
            &load(input)?,
            IdealFlags {
                list: *list,
                closure: closure.as_deref(),
                theta: theta.as_deref(),
                coincidence: *coincidence,
                term_identities: *term_identities,
            },
            &mut r,
        )?,
        Command::Generate {
            family: Family::MN { n, perm },
        } => {
            let p = match perm {
                Some(text) => parse_cycles(*n, text)?,
                None => (0..*n).map(|i| (i + 1) % n.max(&1)).collect(),
            };
            let l = catalog::make_m_n(*n, &p).map_err(|e| InputError::Invalid(e.to_string()))?;
            r.push(Check::info("generated", format!("M_{n}")));
            r.lattice = Some(l.to_file());
        }
        Command::Enumerate { max_n, filter } => enumerate_cmd(*max_n, *filter, &mut r)?,
        Command::Identities { input, file } => identities_cmd(&load(input)?, file, &mut r)?,
    }
    Ok(r.finish())
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
    pub report: Option<Report>,
}

/// Runs one command line (including the program name) without touching the
/// process environment.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy()).join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Invocation {
                stdout,
                stderr,
                exit_code: code,
                report: None,
            };
        }
    };
    match execute(&cli, echo) {
        Ok(report) => Invocation {
            stdout: if cli.json {
                report.render_json()
            } else {
                report.render_text()
            },
            stderr: String::new(),
            exit_code: report.exit_code,
            report: Some(report),
        },
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit_code: 2,
            report: None,
        },
    }
}

/// Applies `ALLAB_THREADS` (0 or unset = one worker per core).
pub fn configure_threads() {
    let threads = std::env::var("ALLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // fails only if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}
