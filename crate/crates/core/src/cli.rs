//! Command-line front end. Exit codes: 0 success or claim holds, 1 the
//! analysis ran and the claim failed, 2 usage or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cloud::{validate, Cloud};
use crate::coloring::{chromatic_number, separable_chromatic_number};
use crate::compose::{extend_to_tits, paste_with, Identification};
use crate::datasets;
use crate::dot::{export_dot, Overlay};
use crate::geometry::{verify_representation, Mode, Representation};
use crate::parse::{parse_cloud_file, serialize};
use crate::partition::{build_partition_logic, verify_set_representation};
use crate::states::{
    classify_pair_with, count_type_i, enumerate_states_with, ks_check, propagate, relation_pairs,
    state_properties, Kind, Limits, Relation,
};

#[derive(Parser, Debug)]
#[command(
    name = "cloudlab",
    version,
    about = "Orthogonality hypergraphs and their two-valued states"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[allow(clippy::upper_case_acronyms)]
#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::I => Kind::I,
            KindArg::II => Kind::II,
            KindArg::III => Kind::III,
        }
    }
}

/// Inputs are file paths, `-` for stdin, or `dataset:NAME[(k=v,...)]`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate (II), count (I) or propagate (III) two-valued states.
    States {
        input: String,
        #[arg(long = "type", value_enum, default_value = "II")]
        kind: KindArg,
        #[arg(long, conflicts_with = "count")]
        list: bool,
        #[arg(long)]
        count: bool,
        /// Seed for type III, e.g. `a=1,b=0`.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Unital / separating / full report and forced vertices.
    Props { input: String },
    /// Relation between two vertices (default: the terminals).
    Classify {
        input: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long = "type", value_enum, default_value = "II")]
        kind: KindArg,
    },
    /// All nonadjacent ordered pairs related true-implies-true.
    TitsPairs {
        input: String,
        #[arg(long = "type", value_enum, default_value = "II")]
        kind: KindArg,
    },
    /// Exit 0 iff the cloud has no type-II state.
    KsCheck { input: String },
    /// Chromatic number (default) or separable chromatic number.
    Color {
        input: String,
        #[arg(long, conflicts_with = "separable")]
        chromatic: bool,
        #[arg(long)]
        separable: bool,
    },
    /// Check the file's vectors against the cloud's orthogonality.
    VerifyRep {
        input: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Structural checks: isolated vertices, nested or repeated contexts.
    Validate { input: String },
    /// Glue B onto A; `--identify b1=a1,b2=a2`.
    Paste {
        a: String,
        b: String,
        #[arg(long)]
        identify: String,
        #[arg(long, default_value = "'")]
        suffix: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Add the cross-product construction on terminals a, b.
    Extend {
        input: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Set representation from the type-II states; exit 1 if not injective.
    Partition { input: String },
    /// Print a built-in cloud, or list them.
    Dataset {
        name: Option<String>,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graphviz export, optionally marking type-II state `i` or a coloring.
    Dot {
        input: String,
        #[arg(long, conflicts_with = "coloring")]
        state: Option<usize>,
        #[arg(long)]
        coloring: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut buf)),
            Err(e) => Err(Failure(e.to_string())),
        },
        None => dispatch(cli.command, &mut buf),
    };
    let result = result.and_then(|code| match out.write_all(&buf) {
        // The reader went away, e.g. `| head`.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(code),
        r => r.map(|_| code).map_err(Failure::from),
    });
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

struct Input {
    cloud: Cloud,
    rep: Option<Representation>,
}

fn load(spec: &str) -> Result<Input, Failure> {
    if let Some(name) = spec.strip_prefix("dataset:") {
        let d = datasets::load(name)?;
        return Ok(Input {
            cloud: d.cloud,
            rep: d.representation,
        });
    }
    let text = if spec == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(spec).map_err(|e| Failure(format!("{spec}: {e}")))?
    };
    let file = parse_cloud_file(&text).map_err(|e| Failure(format!("{spec}: {e}")))?;
    Ok(Input {
        cloud: file.cloud,
        rep: file.representation,
    })
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn terminal_pair(
    cloud: &Cloud,
    a: Option<String>,
    b: Option<String>,
) -> Result<(String, String), Failure> {
    let t = cloud.terminal_names();
    let a = a.or_else(|| t.map(|(x, _)| x.to_string()));
    let b = b.or_else(|| t.map(|(_, y)| y.to_string()));
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Failure("no terminals in the file; pass --a and --b".into())),
    }
}

fn env_tolerance() -> Result<Option<f64>, Failure> {
    match std::env::var("CLOUDLAB_TOL") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure(format!("CLOUDLAB_TOL is not a number: `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    let limits = Limits::from_env();
    match cmd {
        Command::States {
            input,
            kind,
            list,
            count,
            seed,
        } => {
            let c = load(&input)?.cloud;
            match Kind::from(kind) {
                Kind::I => {
                    if list {
                        return Err(Failure("type I states are not listed, only counted".into()));
                    }
                    writeln!(out, "{}", count_type_i(&c))?;
                }
                Kind::II => {
                    let s = enumerate_states_with(&c, &limits)?;
                    if count {
                        writeln!(out, "{}", s.len())?;
                    } else {
                        for st in s.iter() {
                            writeln!(out, "{}", st.describe(&c))?;
                        }
                    }
                }
                Kind::III => {
                    let seed = parse_seed(seed.as_deref().unwrap_or(""))?;
                    let pairs: Vec<(&str, bool)> =
                        seed.iter().map(|(v, b)| (v.as_str(), *b)).collect();
                    let p = propagate(&c, &pairs)?;
                    if let Some(st) = p.state() {
                        writeln!(out, "{}", st.describe(&c))?;
                    } else if let Some(k) = p.contradiction() {
                        write!(out, "{}", k.describe(&c))?;
                        return Ok(1);
                    }
                }
            }
            Ok(0)
        }
        Command::Props { input } => {
            let c = load(&input)?.cloud;
            let s = enumerate_states_with(&c, &limits)?;
            write!(out, "{}", state_properties(&c, &s)?.render(&c))?;
            Ok(0)
        }
        Command::Classify { input, a, b, kind } => {
            let c = load(&input)?.cloud;
            let (a, b) = terminal_pair(&c, a, b)?;
            let r = classify_pair_with(&c, &a, &b, kind.into(), &limits)?;
            writeln!(out, "{r}")?;
            Ok(0)
        }
        Command::TitsPairs { input, kind } => {
            let c = load(&input)?.cloud;
            for (x, y) in relation_pairs(&c, kind.into(), Relation::Tits, &limits)? {
                writeln!(out, "{} {}", c.vertex(x), c.vertex(y))?;
            }
            Ok(0)
        }
        Command::KsCheck { input } => {
            let c = load(&input)?.cloud;
            let k = ks_check(&c);
            match k.witness {
                None => {
                    writeln!(out, "kochen-specker: no two-valued state")?;
                    Ok(0)
                }
                Some(w) => {
                    writeln!(out, "not kochen-specker; witness {}", w.describe(&c))?;
                    Ok(1)
                }
            }
        }
        Command::Color {
            input, separable, ..
        } => {
            let c = load(&input)?.cloud;
            let g = c.skeleton();
            if separable {
                let (t, cert) = separable_chromatic_number(&g);
                writeln!(out, "separable-chromatic {t}")?;
                write!(out, "{}", cert.render(&g))?;
            } else {
                let (t, col) = chromatic_number(&g);
                writeln!(out, "chromatic {t}")?;
                write!(out, "{}", col.render(&g))?;
            }
            Ok(0)
        }
        Command::VerifyRep { input, tol } => {
            let inp = load(&input)?;
            let rep = inp
                .rep
                .ok_or_else(|| Failure(format!("{input}: no vector lines")))?;
            let rep = match (rep.mode(), tol.map_or_else(env_tolerance, |t| Ok(Some(t)))?) {
                (Mode::Float { .. }, Some(t)) => rep.to_float(t)?,
                _ => rep,
            };
            let report = verify_representation(&inp.cloud, &rep)?;
            write!(out, "{report}")?;
            Ok(if report.passes() { 0 } else { 1 })
        }
        Command::Validate { input } => {
            let c = load(&input)?.cloud;
            let r = validate(&c);
            write!(out, "{r}")?;
            Ok(if r.is_clean() { 0 } else { 1 })
        }
        Command::Paste {
            a,
            b,
            identify,
            suffix,
            output,
        } => {
            let (ia, ib) = (load(&a)?, load(&b)?);
            let ident = Identification::parse(&identify)?;
            let p = paste_with(&ia.cloud, &ib.cloud, &ident, &suffix)?;
            let mut text = String::new();
            let rep = match (ia.rep, ib.rep) {
                (Some(ra), Some(rb)) => {
                    let agree = ident.pairs().iter().all(|(x, y)| {
                        match (rb.get(x.as_str()), ra.get(y.as_str())) {
                            (Some(u), Some(v)) => u.same_as(v, ra.tolerance().max(rb.tolerance())),
                            _ => true,
                        }
                    });
                    let mut merged = ra;
                    if agree && merged.mode() == rb.mode() {
                        for (v, r) in p.map_representation(&rb).iter() {
                            if merged.get(v.as_str()).is_none() {
                                merged.insert(v.clone(), r.clone())?;
                            }
                        }
                    } else {
                        text.push_str(&format!(
                            "# vectors of {b} dropped: identified rays differ\n"
                        ));
                    }
                    Some(merged)
                }
                (ra, _) => ra,
            };
            for m in &p.merged_contexts {
                let names: Vec<&str> = m.iter().map(|v| v.as_str()).collect();
                text.push_str(&format!("# merged context {}\n", names.join(" ")));
            }
            text.push_str(&serialize(&p.cloud, rep.as_ref()));
            emit(out, output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Extend {
            input,
            a,
            b,
            output,
        } => {
            let inp = load(&input)?;
            let (a, b) = terminal_pair(&inp.cloud, a, b)?;
            let rep = inp
                .rep
                .ok_or_else(|| Failure(format!("{input}: no vector lines")))?;
            let ext = extend_to_tits(&inp.cloud, &rep, &a, &b)?;
            let mut text: String = ext
                .report
                .to_string()
                .lines()
                .map(|l| format!("# {l}\n"))
                .collect();
            text.push_str(&serialize(&ext.cloud, Some(&ext.representation)));
            emit(out, output.as_ref(), &text)?;
            Ok(if ext.report.violations.is_empty() {
                0
            } else {
                1
            })
        }
        Command::Partition { input } => {
            let c = load(&input)?.cloud;
            let s = enumerate_states_with(&c, &limits)?;
            let pl = build_partition_logic(&c, &s)?;
            let r = verify_set_representation(&pl, &c);
            write!(out, "{pl}\n{}\n{r}", pl.urn_table(&c))?;
            Ok(if r.set_representable() { 0 } else { 1 })
        }
        Command::Dataset {
            name,
            params,
            list,
            output,
        } => {
            if list || name.is_none() {
                for n in datasets::names() {
                    writeln!(out, "{n}")?;
                }
                return Ok(0);
            }
            let name = name.unwrap_or_default();
            let mut kv = Vec::new();
            for p in &params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Failure(format!("--param expects k=v, got `{p}`")))?;
                kv.push((k.trim(), v.trim()));
            }
            let d = datasets::dataset(&name, &kv)?;
            emit(
                out,
                output.as_ref(),
                &serialize(&d.cloud, d.representation.as_ref()),
            )?;
            Ok(0)
        }
        Command::Dot {
            input,
            state,
            coloring,
            output,
        } => {
            let c = load(&input)?.cloud;
            let text = if let Some(i) = state {
                let s = enumerate_states_with(&c, &limits)?;
                let st = s.states().get(i).ok_or_else(|| {
                    Failure(format!("state {i} out of range ({} states)", s.len()))
                })?;
                export_dot(&c, Overlay::State(st))?
            } else if coloring {
                let (_, col) = chromatic_number(&c.skeleton());
                export_dot(&c, Overlay::Coloring(&col))?
            } else {
                export_dot(&c, Overlay::None)?
            };
            emit(out, output.as_ref(), &text)?;
            Ok(0)
        }
    }
}

fn parse_seed(s: &str) -> Result<Vec<(String, bool)>, Failure> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (v, b) = item
            .split_once('=')
            .ok_or_else(|| Failure(format!("seed entries look like v=1, got `{item}`")))?;
        let b = match b.trim() {
            "1" => true,
            "0" => false,
            other => return Err(Failure(format!("seed value must be 0 or 1, got `{other}`"))),
        };
        out.push((v.trim().to_string(), b));
    }
    Ok(out)
}
