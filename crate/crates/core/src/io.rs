//! Canonical JSON documents: `{"kind", "version", "payload"}`.
//!
//! Serialization sorts keys and writes integers plainly, so equal values
//! give byte-identical files. References to other documents are either
//! inline documents or paths relative to the referring file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::classify::{ClassTable, Mode};
use crate::cocycle::{AbelianObstruction, Coboundary, Cocycle, Level, Morphism, Structure};
use crate::crossed::{CrossedModule, CrossedModuleMorphism, TwoCrossedModule, TwoCrossedModuleMorphism};
use crate::error::{structural, Error, Result};
use crate::group::{FiniteGroup, GroupAction, GroupHom};
use crate::lifting::{Context, ExtensionContext, NormalContext, TwistContext};
use crate::nerve::{Nerve, NerveMap};

/// Current document version.
pub const VERSION: u64 = 1;

/// Every kind tag accepted by [`parse`].
pub const KINDS: [&str; 11] = [
    "group",
    "crossed-module",
    "two-crossed-module",
    "nerve",
    "nerve-map",
    "morphism",
    "cocycle",
    "coboundary",
    "class-table",
    "context",
    "obstruction",
];

/// A parsed document.
#[derive(Clone, Debug)]
pub enum Document {
    Group(Arc<FiniteGroup>),
    CrossedModule(Arc<CrossedModule>),
    TwoCrossedModule(Arc<TwoCrossedModule>),
    Nerve(Arc<Nerve>),
    NerveMap(NerveMap),
    Morphism(Morphism),
    Cocycle(Cocycle),
    Coboundary(Coboundary),
    ClassTable(ClassTable),
    Context(Context),
    Obstruction(AbelianObstruction),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Group(_) => "group",
            Document::CrossedModule(_) => "crossed-module",
            Document::TwoCrossedModule(_) => "two-crossed-module",
            Document::Nerve(_) => "nerve",
            Document::NerveMap(_) => "nerve-map",
            Document::Morphism(_) => "morphism",
            Document::Cocycle(_) => "cocycle",
            Document::Coboundary(_) => "coboundary",
            Document::ClassTable(_) => "class-table",
            Document::Context(_) => "context",
            Document::Obstruction(_) => "obstruction",
        }
    }
}

impl From<Structure> for Document {
    fn from(s: Structure) -> Self {
        match s {
            Structure::Crossed(c) => Document::CrossedModule(c),
            Structure::TwoCrossed(t) => Document::TwoCrossedModule(t),
        }
    }
}

// ---------------------------------------------------------------- writing

/// The canonical text of a document, newline-terminated.
pub fn serialize(doc: &Document) -> String {
    serialize_value(&to_value(doc))
}

/// The canonical text of a JSON value, newline-terminated.
pub fn serialize_value(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// The document as a JSON value.
pub fn to_value(doc: &Document) -> Value {
    json!({
        "kind": doc.kind(),
        "version": VERSION,
        "payload": payload(doc),
    })
}

fn payload(doc: &Document) -> Value {
    match doc {
        Document::Group(g) => group_payload(g),
        Document::CrossedModule(c) => json!({
            "l": group_value(c.l()),
            "m": group_value(c.m()),
            "d1": c.d1().map,
            "act": c.action().rows(),
        }),
        Document::TwoCrossedModule(t) => json!({
            "l": group_value(t.l()),
            "m": group_value(t.m()),
            "n": group_value(t.n()),
            "d1": t.d1().map,
            "d2": t.d2().map,
            "actNM": t.act_nm().rows(),
            "actNL": t.act_nl().rows(),
            "peiffer": t.peiffer_rows(),
        }),
        Document::Nerve(n) => json!({
            "indexCount": n.index_count(),
            "maximal": n.maximal_simplices(),
        }),
        Document::NerveMap(f) => json!({
            "source": nerve_value(&f.source),
            "target": nerve_value(&f.target),
            "vertexMap": f.vertex_map,
        }),
        Document::Morphism(Morphism::Crossed(f)) => json!({
            "type": "crossed",
            "source": to_value(&Document::CrossedModule(f.source.clone())),
            "target": to_value(&Document::CrossedModule(f.target.clone())),
            "lam": f.lam.map,
            "kap": f.kap.map,
        }),
        Document::Morphism(Morphism::TwoCrossed(f)) => json!({
            "type": "two-crossed",
            "source": to_value(&Document::TwoCrossedModule(f.source.clone())),
            "target": to_value(&Document::TwoCrossedModule(f.target.clone())),
            "lam": f.lam.map,
            "mu": f.mu.map,
            "nu": f.nu.map,
        }),
        Document::Cocycle(c) => cochain_payload(
            c.level(),
            c.structure(),
            c.nerve(),
            c.level().components().iter().map(|s| (s.name, s.arity)),
            c.components(),
        ),
        Document::Coboundary(w) => cochain_payload(
            w.level(),
            w.structure(),
            w.nerve(),
            w.level().witness_components().iter().map(|s| (s.name, s.arity)),
            w.components(),
        ),
        Document::ClassTable(t) => {
            let mut p = json!({
                "level": t.level.name(),
                "mode": t.mode.name(),
                "structure": to_value(&t.structure.clone().into()),
                "nerve": nerve_value(&t.nerve),
                "classSizes": t.class_sizes,
                "total": t.total(),
                "representatives": t
                    .representatives
                    .iter()
                    .map(|c| to_value(&Document::Cocycle(c.clone())))
                    .collect::<Vec<_>>(),
            });
            if let Some(pt) = &t.product_table {
                p["productTable"] = json!(pt);
            }
            p
        }
        Document::Context(c) => context_payload(c),
        Document::Obstruction(o) => json!({
            "group": group_value(o.group()),
            "nerve": nerve_value(o.nerve()),
            "a": tuple_map(o.nerve(), 4, o.values()),
        }),
    }
}

fn group_payload(g: &FiniteGroup) -> Value {
    let mut p = json!({
        "order": g.order(),
        "table": g.table_rows(),
    });
    if let Some(labels) = g.labels() {
        p["labels"] = json!(labels);
    }
    p
}

fn group_value(g: &Arc<FiniteGroup>) -> Value {
    to_value(&Document::Group(g.clone()))
}

fn nerve_value(n: &Arc<Nerve>) -> Value {
    to_value(&Document::Nerve(n.clone()))
}

/// `"i,j,…" ↦ value` over all tuples of the arity.
fn tuple_map(nerve: &Nerve, arity: usize, values: &[usize]) -> Value {
    let m: Map<String, Value> = nerve
        .tuples(arity)
        .list
        .iter()
        .zip(values)
        .map(|(t, &v)| (tuple_key(t), json!(v)))
        .collect();
    Value::Object(m)
}

pub fn tuple_key(t: &[usize]) -> String {
    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cochain_payload<'a>(
    level: Level,
    s: &Structure,
    nerve: &Arc<Nerve>,
    specs: impl Iterator<Item = (&'a str, usize)>,
    comps: &[Vec<usize>],
) -> Value {
    let components: Map<String, Value> = specs
        .zip(comps)
        .map(|((name, arity), d)| (name.to_string(), tuple_map(nerve, arity, d)))
        .collect();
    json!({
        "level": level.name(),
        "structure": to_value(&s.clone().into()),
        "nerve": nerve_value(nerve),
        "components": components,
    })
}

fn section_value(s: &[usize]) -> Value {
    json!(s
        .iter()
        .map(|&x| if x == usize::MAX { Value::Null } else { json!(x) })
        .collect::<Vec<_>>())
}

fn context_payload(c: &Context) -> Value {
    let (structure, sections): (Document, BTreeMap<&str, Value>) = match c {
        Context::Normal(x) => (
            Document::CrossedModule(x.cm.clone()),
            BTreeMap::from([("pi", section_value(&x.section))]),
        ),
        Context::Extension(x) => (
            Document::TwoCrossedModule(x.tcm.clone()),
            BTreeMap::from([
                ("pi1", section_value(&x.section_pi1)),
                ("pi2", section_value(&x.section_pi2)),
                ("d2", section_value(&x.section_d2)),
            ]),
        ),
        Context::Twist(x) => (
            Document::CrossedModule(x.cm.clone()),
            BTreeMap::from([
                ("pi2", section_value(&x.section_pi2)),
                ("delta", section_value(&x.section_delta)),
            ]),
        ),
    };
    json!({
        "type": c.kind(),
        "structure": to_value(&structure),
        "sections": sections,
    })
}

// ---------------------------------------------------------------- reading

/// Parses JSON text, reporting syntax errors with their location.
pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses a document; path references resolve against the working
/// directory.
pub fn parse(text: &str) -> Result<Document> {
    parse_in(text, Path::new("."))
}

/// Parses a document; path references resolve against `base`.
pub fn parse_in(text: &str, base: &Path) -> Result<Document> {
    let v = parse_value(text)?;
    Reader { base: base.to_path_buf() }.document(&v)
}

/// Reads and parses a file.
pub fn load(path: &Path) -> Result<Document> {
    let text = read_text(path)?;
    parse_in(&text, path.parent().unwrap_or(Path::new(".")))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the canonical text of a document.
pub fn save(doc: &Document, path: &Path) -> Result<()> {
    std::fs::write(path, serialize(doc)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// The kind and payload of a document value, after the version check.
pub fn envelope(v: &Value) -> Result<(&str, &Value)> {
    let kind = field(v, "kind", "document")?
        .as_str()
        .ok_or_else(|| structural("document.kind: expected a string"))?;
    let version = field(v, "version", "document")?
        .as_u64()
        .ok_or_else(|| structural("document.version: expected an integer"))?;
    if !KINDS.contains(&kind) {
        return Err(Error::UnknownKind(kind.to_string()));
    }
    if version != VERSION {
        return Err(Error::Version {
            found: version,
            expected: VERSION,
        });
    }
    Ok((kind, field(v, "payload", "document")?))
}

/// The raw Cayley table of a group payload, before any axiom check.
pub fn group_table(payload: &Value) -> Result<Vec<Vec<usize>>> {
    matrix(field(payload, "table", "group")?, "group.table")
}

fn field<'v>(v: &'v Value, key: &str, at: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| structural(format!("{at}: missing field `{key}`")))
}

fn uint(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| structural(format!("{at}: expected a non-negative integer")))
}

fn list(v: &Value, at: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| structural(format!("{at}: expected an array")))?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{at}[{i}]")))
        .collect()
}

fn matrix(v: &Value, at: &str) -> Result<Vec<Vec<usize>>> {
    v.as_array()
        .ok_or_else(|| structural(format!("{at}: expected an array of rows")))?
        .iter()
        .enumerate()
        .map(|(i, r)| list(r, &format!("{at}[{i}]")))
        .collect()
}

fn string<'v>(v: &'v Value, at: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| structural(format!("{at}: expected a string")))
}

fn section(v: &Value, at: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| structural(format!("{at}: expected an array")))?
        .iter()
        .enumerate()
        .map(|(i, x)| if x.is_null() { Ok(usize::MAX) } else { uint(x, &format!("{at}[{i}]")) })
        .collect()
}

fn parse_key(k: &str, at: &str) -> Result<Vec<usize>> {
    k.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| structural(format!("{at}: bad tuple key `{k}`")))
}

/// Reads a tuple map covering exactly the nerve's tuples of the arity.
fn tuple_values(v: &Value, nerve: &Nerve, arity: usize, at: &str) -> Result<Vec<usize>> {
    let obj = v
        .as_object()
        .ok_or_else(|| structural(format!("{at}: expected an object keyed by tuples")))?;
    let tuples = nerve.tuples(arity);
    let mut out = vec![usize::MAX; tuples.len()];
    for (k, x) in obj {
        let t = parse_key(k, at)?;
        let pos = (t.len() == arity)
            .then(|| tuples.position(&t))
            .flatten()
            .ok_or_else(|| structural(format!("{at}: tuple `{k}` is not a {arity}-tuple of the nerve")))?;
        out[pos] = uint(x, &format!("{at}.{k}"))?;
    }
    if let Some(p) = out.iter().position(|&x| x == usize::MAX) {
        return Err(structural(format!("{at}: missing tuple `{}`", tuple_key(&tuples.list[p]))));
    }
    Ok(out)
}

type CochainParts = (Level, Structure, Arc<Nerve>, Vec<Vec<usize>>);

struct Reader {
    base: PathBuf,
}

impl Reader {
    fn document(&self, v: &Value) -> Result<Document> {
        let (kind, p) = envelope(v)?;
        Ok(match kind {
            "group" => Document::Group(self.group(p)?),
            "crossed-module" => Document::CrossedModule(Arc::new(self.crossed(p)?)),
            "two-crossed-module" => Document::TwoCrossedModule(Arc::new(self.two_crossed(p)?)),
            "nerve" => Document::Nerve(Arc::new(self.nerve(p)?)),
            "nerve-map" => Document::NerveMap(NerveMap::new(
                self.nerve_ref(field(p, "source", kind)?)?,
                self.nerve_ref(field(p, "target", kind)?)?,
                list(field(p, "vertexMap", kind)?, "nerve-map.vertexMap")?,
            )?),
            "morphism" => Document::Morphism(self.morphism(p)?),
            "cocycle" => {
                let (level, s, nerve, comps) = self.cochain(p, false)?;
                Document::Cocycle(Cocycle::new(level, s, nerve, comps)?)
            }
            "coboundary" => {
                let (level, s, nerve, comps) = self.cochain(p, true)?;
                Document::Coboundary(Coboundary::new(level, s, nerve, comps)?)
            }
            "class-table" => Document::ClassTable(self.class_table(p)?),
            "context" => Document::Context(self.context(p)?),
            "obstruction" => {
                let nerve = self.nerve_ref(field(p, "nerve", kind)?)?;
                let a = tuple_values(field(p, "a", kind)?, &nerve, 4, "obstruction.a")?;
                Document::Obstruction(AbelianObstruction::new(self.group_ref(field(p, "group", kind)?)?, nerve, a)?)
            }
            _ => unreachable!("kind checked by envelope"),
        })
    }

    /// An inline document or a relative path to one.
    fn reference(&self, v: &Value) -> Result<Document> {
        match v {
            Value::String(path) => load(&self.base.join(path)),
            Value::Object(_) => self.document(v),
            _ => Err(structural("reference: expected an inline document or a path")),
        }
    }

    fn group(&self, p: &Value) -> Result<Arc<FiniteGroup>> {
        let table = group_table(p)?;
        let order = uint(field(p, "order", "group")?, "group.order")?;
        if order != table.len() {
            return Err(structural(format!("group: order {order} but {} rows", table.len())));
        }
        let mut g = FiniteGroup::from_table(table)?;
        if let Some(labels) = p.get("labels") {
            let labels = labels
                .as_array()
                .ok_or_else(|| structural("group.labels: expected an array"))?
                .iter()
                .map(|l| string(l, "group.labels").map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            g = g.with_labels(labels)?;
        }
        Ok(Arc::new(g))
    }

    fn group_ref(&self, v: &Value) -> Result<Arc<FiniteGroup>> {
        match self.reference(v)? {
            Document::Group(g) => Ok(g),
            d => Err(structural(format!("expected a group, found a {}", d.kind()))),
        }
    }

    fn nerve(&self, p: &Value) -> Result<Nerve> {
        let n = uint(field(p, "indexCount", "nerve")?, "nerve.indexCount")?;
        Nerve::from_maximal(n, &matrix(field(p, "maximal", "nerve")?, "nerve.maximal")?)
    }

    fn nerve_ref(&self, v: &Value) -> Result<Arc<Nerve>> {
        match self.reference(v)? {
            Document::Nerve(n) => Ok(n),
            d => Err(structural(format!("expected a nerve, found a {}", d.kind()))),
        }
    }

    fn crossed(&self, p: &Value) -> Result<CrossedModule> {
        let at = "crossed-module";
        let l = self.group_ref(field(p, "l", at)?)?;
        let m = self.group_ref(field(p, "m", at)?)?;
        let d1 = GroupHom::new(l.clone(), m.clone(), list(field(p, "d1", at)?, "crossed-module.d1")?)?;
        let act = GroupAction::new(m, l, matrix(field(p, "act", at)?, "crossed-module.act")?)?;
        CrossedModule::new(d1, act)
    }

    fn two_crossed(&self, p: &Value) -> Result<TwoCrossedModule> {
        let at = "two-crossed-module";
        let l = self.group_ref(field(p, "l", at)?)?;
        let m = self.group_ref(field(p, "m", at)?)?;
        let n = self.group_ref(field(p, "n", at)?)?;
        let d1 = GroupHom::new(l.clone(), m.clone(), list(field(p, "d1", at)?, "two-crossed-module.d1")?)?;
        let d2 = GroupHom::new(m.clone(), n.clone(), list(field(p, "d2", at)?, "two-crossed-module.d2")?)?;
        let act_nm = GroupAction::new(n.clone(), m, matrix(field(p, "actNM", at)?, "two-crossed-module.actNM")?)?;
        let act_nl = GroupAction::new(n, l, matrix(field(p, "actNL", at)?, "two-crossed-module.actNL")?)?;
        let peiffer = matrix(field(p, "peiffer", at)?, "two-crossed-module.peiffer")?;
        TwoCrossedModule::new(d1, d2, act_nm, act_nl, peiffer)
    }

    fn structure_ref(&self, v: &Value) -> Result<Structure> {
        match self.reference(v)? {
            Document::CrossedModule(c) => Ok(Structure::Crossed(c)),
            Document::TwoCrossedModule(t) => Ok(Structure::TwoCrossed(t)),
            d => Err(structural(format!("expected a (2-)crossed module, found a {}", d.kind()))),
        }
    }

    fn morphism(&self, p: &Value) -> Result<Morphism> {
        let at = "morphism";
        let hom = |name: &str, s: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>| -> Result<GroupHom> {
            GroupHom::new(s.clone(), t.clone(), list(field(p, name, at)?, &format!("morphism.{name}"))?)
        };
        let (src, tgt) = (
            self.structure_ref(field(p, "source", at)?)?,
            self.structure_ref(field(p, "target", at)?)?,
        );
        match (string(field(p, "type", at)?, "morphism.type")?, src, tgt) {
            ("crossed", Structure::Crossed(s), Structure::Crossed(t)) => Ok(Morphism::Crossed(CrossedModuleMorphism {
                lam: hom("lam", s.l(), t.l())?,
                kap: hom("kap", s.m(), t.m())?,
                source: s,
                target: t,
            })),
            ("two-crossed", Structure::TwoCrossed(s), Structure::TwoCrossed(t)) => {
                Ok(Morphism::TwoCrossed(TwoCrossedModuleMorphism {
                    lam: hom("lam", s.l(), t.l())?,
                    mu: hom("mu", s.m(), t.m())?,
                    nu: hom("nu", s.n(), t.n())?,
                    source: s,
                    target: t,
                }))
            }
            (ty, _, _) => Err(structural(format!("morphism: type `{ty}` does not match its source and target"))),
        }
    }

    fn cochain(&self, p: &Value, witness: bool) -> Result<CochainParts> {
        let at = if witness { "coboundary" } else { "cocycle" };
        let name = string(field(p, "level", at)?, "level")?;
        let level = Level::parse(name).ok_or_else(|| structural(format!("{at}: unknown level `{name}`")))?;
        let s = self.structure_ref(field(p, "structure", at)?)?;
        let nerve = self.nerve_ref(field(p, "nerve", at)?)?;
        let comps = field(p, "components", at)?;
        let specs = if witness {
            level.witness_components()
        } else {
            level.components()
        };
        if let Some(obj) = comps.as_object() {
            if let Some(k) = obj.keys().find(|k| !specs.iter().any(|s| s.name == k.as_str())) {
                return Err(structural(format!("{at}: unexpected component `{k}`")));
            }
        }
        let data = specs
            .iter()
            .map(|s| {
                let path = format!("{at}.components.{}", s.name);
                tuple_values(field(comps, s.name, &format!("{at}.components"))?, &nerve, s.arity, &path)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((level, s, nerve, data))
    }

    fn class_table(&self, p: &Value) -> Result<ClassTable> {
        let at = "class-table";
        let name = string(field(p, "level", at)?, "class-table.level")?;
        let level = Level::parse(name).ok_or_else(|| structural(format!("{at}: unknown level `{name}`")))?;
        let mode_name = string(field(p, "mode", at)?, "class-table.mode")?;
        let mode = Mode::parse(mode_name).ok_or_else(|| structural(format!("{at}: unknown mode `{mode_name}`")))?;
        let structure = self.structure_ref(field(p, "structure", at)?)?;
        let nerve = self.nerve_ref(field(p, "nerve", at)?)?;
        let class_sizes = list(field(p, "classSizes", at)?, "class-table.classSizes")?;
        let representatives = field(p, "representatives", at)?
            .as_array()
            .ok_or_else(|| structural("class-table.representatives: expected an array"))?
            .iter()
            .map(|r| match self.reference(r)? {
                Document::Cocycle(c) => Ok(c),
                d => Err(structural(format!("class-table: representative is a {}", d.kind()))),
            })
            .collect::<Result<Vec<_>>>()?;
        if representatives.len() != class_sizes.len() {
            return Err(structural("class-table: one size per representative expected"));
        }
        if representatives
            .iter()
            .any(|c| c.level() != level || *c.structure() != structure || **c.nerve() != *nerve)
        {
            return Err(structural("class-table: representative differs in level, structure or nerve"));
        }
        let product_table = p
            .get("productTable")
            .map(|v| matrix(v, "class-table.productTable"))
            .transpose()?;
        Ok(ClassTable {
            level,
            structure,
            nerve,
            mode,
            representatives,
            class_sizes,
            product_table,
        })
    }

    fn context(&self, p: &Value) -> Result<Context> {
        let at = "context";
        let sections = field(p, "sections", at)?;
        let sec = |name: &str| section(field(sections, name, "context.sections")?, &format!("context.sections.{name}"));
        let s = self.structure_ref(field(p, "structure", at)?)?;
        match (string(field(p, "type", at)?, "context.type")?, s) {
            ("normal", Structure::Crossed(c)) => Ok(Context::Normal(NormalContext::new(c)?.with_section(sec("pi")?)?)),
            ("extension", Structure::TwoCrossed(t)) => Ok(Context::Extension(
                ExtensionContext::new(t)?.with_sections(sec("pi1")?, sec("pi2")?, sec("d2")?)?,
            )),
            ("twist", Structure::Crossed(c)) => Ok(Context::Twist(
                TwistContext::new(c)?.with_sections(sec("pi2")?, sec("delta")?)?,
            )),
            (ty, s) => Err(structural(format!("context: type `{ty}` does not take a {}", s.kind()))),
        }
    }
}
