//! `gerbe`: verify, combine, classify and lift cocycle documents.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use gerbe_core::classify::{enumerate_classes, enumerate_cocycles, equivalent_with, Mode, SearchOptions};
use gerbe_core::cocycle::{self, change_structure, pullback, verify_obstruction, AbelianObstruction, Cocycle, Level, Structure};
use gerbe_core::crossed::{cm_morphism_verify, cm_verify, tcm_morphism_verify, tcm_verify};
use gerbe_core::golden::golden_documents;
use gerbe_core::group::verify_group;
use gerbe_core::io::{self, Document};
use gerbe_core::lifting::{self, Context};
use gerbe_core::nerve::{nerve_map_verify, nerve_verify, Nerve};
use gerbe_core::search::budget_from_env;
use gerbe_core::{corpus, Error, ValidationReport};

#[derive(Parser)]
#[command(name = "gerbe", version, about = "Cocycles of crossed modules over finite nerves")]
struct Cli {
    /// Worker threads for enumeration and class assignment.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Checks the axioms of any document.
    Verify { file: PathBuf },
    /// Multiplies two cocycles.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Inverts a cocycle.
    Inverse {
        a: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Searches for a coboundary carrying the first cocycle to the second.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Where to write the witness, if one is found.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Enumerates cocycles and, optionally, their classes.
    Enumerate {
        #[arg(long)]
        level: String,
        /// A corpus name or a document path.
        #[arg(long)]
        structure: String,
        /// A nerve name or a document path.
        #[arg(long)]
        nerve: String,
        #[arg(long)]
        classes: bool,
        #[arg(long)]
        product_table: bool,
        #[arg(long)]
        mode: Option<String>,
        /// Where to write the class table; needs `--classes`.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Lifts a cocycle along a context.
    Lift {
        #[arg(long)]
        level: String,
        #[arg(long)]
        context: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Computes the lifting obstruction of a bundle along a twist context,
    /// or decides an obstruction document directly.
    Obstruct {
        #[arg(long)]
        context: Option<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Pushes a cocycle along a morphism of coefficient structures.
    ChangeStructure {
        #[arg(long)]
        morphism: PathBuf,
        a: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Pulls a cocycle back along a nerve map.
    Pullback {
        #[arg(long)]
        map: PathBuf,
        a: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Writes the golden document set into a directory.
    Corpus { dir: PathBuf },
}

/// Whether the answer was positive.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Answer {
    Yes,
    No,
}

struct Run {
    out: String,
    opts: SearchOptions,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run {
        out: String::new(),
        opts: SearchOptions {
            workers: cli.workers.max(1),
            budget: budget_from_env(),
            mode: None,
        },
    };
    let result = run.dispatch(cli.command);
    print!("{}", run.out);
    match result {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(1),
        Err(e @ Error::NotLiftable { .. }) => {
            println!("RESULT: not liftable");
            println!("ERROR: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            println!("ERROR: {e}");
            ExitCode::from(2)
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

fn answer(ok: bool) -> Answer {
    if ok {
        Answer::Yes
    } else {
        Answer::No
    }
}

impl Run {
    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key}: {value}");
    }

    /// The first tuple where a nontrivial obstruction is not the identity.
    fn witness(&mut self, o: &AbelianObstruction) {
        let tuples = &o.nerve().tuples(4).list;
        if let Some(p) = o.values().iter().position(|&x| x != o.group().identity()) {
            self.line("WITNESS", format!("({})", io::tuple_key(&tuples[p])));
        }
    }

    fn report(&mut self, r: &ValidationReport) -> Answer {
        let _ = write!(self.out, "{r}");
        answer(r.is_valid())
    }

    fn save(&mut self, doc: &Document, path: &Path) -> gerbe_core::Result<()> {
        io::save(doc, path)?;
        self.line("OUTPUT", path.display());
        Ok(())
    }

    fn dispatch(&mut self, command: Command) -> gerbe_core::Result<Answer> {
        match command {
            Command::Verify { file } => self.verify(&file),
            Command::Product { a, b, o } => {
                let (Some(a), Some(b)) = (self.valid_cocycle(&a)?, self.valid_cocycle(&b)?) else {
                    return Ok(Answer::No);
                };
                let c = cocycle::product(&a, &b)?;
                self.emit_cocycle(c, &o)
            }
            Command::Inverse { a, o } => {
                let Some(a) = self.valid_cocycle(&a)? else {
                    return Ok(Answer::No);
                };
                let c = cocycle::inverse(&a)?;
                self.emit_cocycle(c, &o)
            }
            Command::Equiv { a, b, o } => self.equiv(&a, &b, o.as_deref()),
            Command::Enumerate {
                level,
                structure,
                nerve,
                classes,
                product_table,
                mode,
                o,
            } => self.enumerate(&level, &structure, &nerve, classes, product_table, mode.as_deref(), o.as_deref()),
            Command::Lift { level, context, input, o } => self.lift(&level, &context, &input, &o),
            Command::Obstruct { context, input, o } => self.obstruct(context.as_deref(), &input, o.as_deref()),
            Command::ChangeStructure { morphism, a, o } => {
                let Document::Morphism(f) = io::load(&morphism)? else {
                    return Err(usage("--morphism: expected a morphism document"));
                };
                let r = match &f {
                    cocycle::Morphism::Crossed(f) => cm_morphism_verify(f)?,
                    cocycle::Morphism::TwoCrossed(f) => tcm_morphism_verify(f)?,
                };
                if !r.is_valid() {
                    return Ok(self.report(&r));
                }
                let Some(a) = self.valid_cocycle(&a)? else {
                    return Ok(Answer::No);
                };
                self.emit_cocycle(change_structure(&a, &f)?, &o)
            }
            Command::Pullback { map, a, o } => {
                let Document::NerveMap(f) = io::load(&map)? else {
                    return Err(usage("--map: expected a nerve-map document"));
                };
                let r = nerve_map_verify(&f);
                if !r.is_valid() {
                    return Ok(self.report(&r));
                }
                let Some(a) = self.valid_cocycle(&a)? else {
                    return Ok(Answer::No);
                };
                self.emit_cocycle(pullback(&a, &f)?, &o)
            }
            Command::Corpus { dir } => {
                std::fs::create_dir_all(&dir).map_err(|source| Error::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
                let docs = golden_documents()?;
                for (name, v) in &docs {
                    let path = dir.join(name);
                    std::fs::write(&path, io::serialize_value(v)).map_err(|source| Error::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                }
                self.line("DOCUMENTS", docs.len());
                Ok(Answer::Yes)
            }
        }
    }

    fn verify(&mut self, file: &Path) -> gerbe_core::Result<Answer> {
        let text = io::read_text(file)?;
        let v = io::parse_value(&text)?;
        let (kind, payload) = io::envelope(&v)?;
        if kind == "group" {
            let r = verify_group(&io::group_table(payload)?)?;
            return Ok(self.report(&r));
        }
        let base = file.parent().unwrap_or(Path::new("."));
        let r = match io::parse_in(&text, base)? {
            Document::Group(_) => unreachable!("handled above"),
            Document::CrossedModule(c) => cm_verify(&c),
            Document::TwoCrossedModule(t) => tcm_verify(&t),
            Document::Nerve(n) => nerve_verify(&n),
            Document::NerveMap(f) => nerve_map_verify(&f),
            Document::Morphism(cocycle::Morphism::Crossed(f)) => cm_morphism_verify(&f)?,
            Document::Morphism(cocycle::Morphism::TwoCrossed(f)) => tcm_morphism_verify(&f)?,
            Document::Cocycle(c) => cocycle::verify(&c),
            Document::Obstruction(o) => verify_obstruction(&o),
            Document::Coboundary(w) => {
                let r = match w.structure() {
                    Structure::Crossed(c) => cm_verify(c),
                    Structure::TwoCrossed(t) => tcm_verify(t),
                };
                if r.is_valid() {
                    self.line("coboundary", "valid");
                    return Ok(Answer::Yes);
                }
                r
            }
            Document::ClassTable(t) => {
                let mut ok = true;
                for c in &t.representatives {
                    let r = cocycle::verify(c);
                    if !r.is_valid() {
                        let _ = write!(self.out, "{r}");
                        ok = false;
                        break;
                    }
                }
                self.line("class table", if ok { "valid" } else { "invalid" });
                if ok {
                    self.line("CLASSES", t.summary());
                }
                return Ok(answer(ok));
            }
            Document::Context(ctx) => {
                let r = match &ctx {
                    Context::Normal(c) => cm_verify(&c.cm),
                    Context::Extension(c) => tcm_verify(&c.tcm),
                    Context::Twist(c) => cm_verify(&c.cm),
                };
                if r.is_valid() {
                    self.line("context", "valid");
                    self.line("TYPE", ctx.kind());
                    return Ok(Answer::Yes);
                }
                r
            }
        };
        Ok(self.report(&r))
    }

    /// Loads a cocycle and reports it if it fails its relations.
    fn valid_cocycle(&mut self, path: &Path) -> gerbe_core::Result<Option<Cocycle>> {
        let Document::Cocycle(c) = io::load(path)? else {
            return Err(usage(format!("{}: expected a cocycle document", path.display())));
        };
        let r = cocycle::verify(&c);
        if r.is_valid() {
            Ok(Some(c))
        } else {
            let _ = write!(self.out, "{}: ", path.display());
            self.report(&r);
            Ok(None)
        }
    }

    fn emit_cocycle(&mut self, c: Cocycle, out: &Path) -> gerbe_core::Result<Answer> {
        let r = cocycle::verify(&c);
        let ok = self.report(&r);
        self.save(&Document::Cocycle(c), out)?;
        Ok(ok)
    }

    fn equiv(&mut self, a: &Path, b: &Path, out: Option<&Path>) -> gerbe_core::Result<Answer> {
        let (Some(a), Some(b)) = (self.valid_cocycle(a)?, self.valid_cocycle(b)?) else {
            return Ok(Answer::No);
        };
        let outcome = equivalent_with(&a, &b, &self.opts)?;
        let n = outcome.candidates;
        match outcome.witness {
            Some(w) => {
                self.line("RESULT", format!("equivalent (witness found among {n} candidates)"));
                if let Some(path) = out {
                    self.save(&Document::Coboundary(w), path)?;
                }
                Ok(Answer::Yes)
            }
            None => {
                self.line("RESULT", format!("inequivalent (search exhausted {n} candidates)"));
                Ok(Answer::No)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        level: &str,
        structure: &str,
        nerve: &str,
        classes: bool,
        product_table: bool,
        mode: Option<&str>,
        out: Option<&Path>,
    ) -> gerbe_core::Result<Answer> {
        let level = parse_level(level)?;
        let s = resolve_structure(structure)?;
        let nerve = resolve_nerve(nerve)?;
        let mut opts = self.opts;
        if let Some(m) = mode {
            opts.mode = Some(Mode::parse(m).ok_or_else(|| usage(format!("unknown mode `{m}`")))?);
        }
        if out.is_some() && !classes {
            return Err(usage("-o writes a class table and needs --classes"));
        }
        if product_table && !classes {
            return Err(usage("--product-table needs --classes"));
        }
        self.line("LEVEL", level);
        self.line("MODE", opts.mode_for(level).name());
        if !classes {
            let all = enumerate_cocycles(level, &s, &nerve, &opts)?;
            self.line("COCYCLES", all.len());
            return Ok(Answer::Yes);
        }
        let mut table = enumerate_classes(level, &s, &nerve, &opts)?;
        self.line("COCYCLES", table.total());
        self.line("CLASSES", table.summary());
        if product_table {
            match &table.product_table {
                Some(rows) => {
                    for row in rows {
                        let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        self.line("PRODUCT", row.join(" "));
                    }
                }
                None => return Err(usage(format!("no class product at level {level} for this structure"))),
            }
        } else {
            table.product_table = None;
        }
        if let Some(path) = out {
            self.save(&Document::ClassTable(table), path)?;
        }
        Ok(Answer::Yes)
    }

    fn lift(&mut self, level: &str, context: &Path, input: &Path, out: &Path) -> gerbe_core::Result<Answer> {
        let level = parse_level(level)?;
        let ctx = load_context(context)?;
        let Some(c) = self.valid_cocycle(input)? else {
            return Ok(Answer::No);
        };
        let (lifted, back) = match &ctx {
            Context::Normal(n) => {
                let l = match c.level() {
                    Level::Bundle1 => lifting::lift_function_to_bundle(n, &c)?,
                    Level::Gerbe2 => lifting::lift_bundle_to_gerbe(n, &c)?,
                    other => return Err(usage(format!("a normal context lifts bundle1 or gerbe2 data, not {other}"))),
                };
                let back = n.descend(&l)?;
                (l, back)
            }
            Context::Extension(e) => {
                let l = match c.level() {
                    Level::Bundle1 => lifting::lift_to_tcm_gerbe(e, &c)?,
                    Level::Gerbe2 => lifting::lift_bundle_to_two_gerbe(e, &c)?,
                    other => return Err(usage(format!("an extension context lifts bundle1 or gerbe2 data, not {other}"))),
                };
                let back = match l.level() {
                    Level::TcmGerbe2 => e.descend_tcm_gerbe(&l)?,
                    _ => e.descend_two_gerbe(&l)?,
                };
                (l, back)
            }
            Context::Twist(t) => match lifting::lift_through_twist(t, &c)? {
                Ok(l) => {
                    let back = t.descend(&l)?;
                    (l, back)
                }
                Err(o) => {
                    self.line("RESULT", "not liftable");
                    self.line("OBSTRUCTION", "nontrivial");
                    self.witness(&o.obstruction);
                    return Ok(Answer::No);
                }
            },
        };
        if lifted.level() != level {
            return Err(usage(format!(
                "this context lifts {} input to {}, not {level}",
                c.level(),
                lifted.level()
            )));
        }
        self.line("CONTEXT", ctx.kind());
        self.line("LEVEL", level);
        self.line("ROUNDTRIP", if back == c { "identity" } else { "differs" });
        self.emit_cocycle(lifted, out)
    }

    fn obstruct(&mut self, context: Option<&Path>, input: &Path, out: Option<&Path>) -> gerbe_core::Result<Answer> {
        let o: AbelianObstruction = match io::load(input)? {
            Document::Obstruction(o) => o,
            Document::Cocycle(q) => {
                let context = context.ok_or_else(|| usage("--context is required for a cocycle input"))?;
                let Context::Twist(ctx) = load_context(context)? else {
                    return Err(usage("--context: expected a twist context"));
                };
                let r = cocycle::verify(&q);
                if !r.is_valid() {
                    return Ok(self.report(&r));
                }
                lifting::compute_obstruction(&ctx, &q)?.obstruction
            }
            _ => return Err(usage("--input: expected a cocycle or an obstruction document")),
        };
        let r = verify_obstruction(&o);
        if self.report(&r) == Answer::No {
            return Ok(Answer::No);
        }
        let trivial = lifting::obstruction_is_trivial_with(&o, self.opts.budget)?.is_some();
        self.line("OBSTRUCTION", if trivial { "trivial" } else { "nontrivial" });
        if !trivial {
            self.witness(&o);
        }
        if let Some(path) = out {
            self.save(&Document::Obstruction(o), path)?;
        }
        Ok(answer(trivial))
    }
}

fn parse_level(s: &str) -> gerbe_core::Result<Level> {
    Level::parse(s).ok_or_else(|| usage(format!("unknown level `{s}`")))
}

fn resolve_structure(s: &str) -> gerbe_core::Result<Structure> {
    if let Some(c) = corpus::crossed_module(s) {
        return Ok(Structure::Crossed(c));
    }
    if let Some(t) = corpus::two_crossed_module(s) {
        return Ok(Structure::TwoCrossed(t));
    }
    match io::load(Path::new(s))? {
        Document::CrossedModule(c) => Ok(Structure::Crossed(c)),
        Document::TwoCrossedModule(t) => Ok(Structure::TwoCrossed(t)),
        _ => Err(usage("--structure: expected a crossed module or 2-crossed module")),
    }
}

fn resolve_nerve(s: &str) -> gerbe_core::Result<Arc<Nerve>> {
    if let Some(n) = corpus::named_nerve(s) {
        return Ok(Arc::new(n));
    }
    match io::load(Path::new(s))? {
        Document::Nerve(n) => Ok(n),
        _ => Err(usage("--nerve: expected a nerve")),
    }
}

fn load_context(path: &Path) -> gerbe_core::Result<Context> {
    match io::load(path)? {
        Document::Context(c) => Ok(c),
        _ => Err(usage("--context: expected a context document")),
    }
}
