//! The versioned JSON bundle format: a category with orthogonality, optional
//! localization and reflection data, dg-algebras, models and expected
//! verdicts. Bundles are read into [`CorpusEntry`] values.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::aqft::{
    AqftModel, ConstantRealization, IntervalRealization, PowerRealization, PulledBack, Realization, TableRealization,
};
use crate::cat::{AdjunctionData, Builtin, CatRef, Category, Components, FiniteCategory, Functor, FunctorKind, Mor, Obj};
use crate::corpus::{CorpusEntry, Expectation};
use crate::error::{Error, Result};
use crate::homalg::{AlgRef, ChainComplex, DgAlgebra, DgAlgebraMap, MultTable};
use crate::linalg::Matrix;
use crate::localize::{derive_w, MorphismSet, ReflectiveData};
use crate::ortho::{OrthoCat, OrthoRel};
use crate::rational::{format_q, parse_q, Q};

pub const SCHEMA: &str = "aqft-kit/1";

pub type Bundle = CorpusEntry;

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

// ---- writing ----

fn q_json(x: &Q) -> Value {
    if x.is_integer() {
        match i64::try_from(x.numer()) {
            Ok(n) => return json!(n),
            Err(_) => {}
        }
    }
    json!(format_q(x))
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(q_json).collect())).collect())
}

fn map_json(comps: &BTreeMap<i64, Matrix>) -> Value {
    Value::Object(comps.iter().filter(|(_, m)| m.rows() * m.cols() > 0).map(|(d, m)| (d.to_string(), matrix_json(m))).collect())
}

pub fn category_json(cat: &CatRef) -> Value {
    match cat.as_ref() {
        Category::Parametric(b) => match b {
            Builtin::DiskBoxes { dim } => json!({ "builtin": b.name(), "dim": dim }),
            _ => json!({ "builtin": b.name() }),
        },
        Category::Enumerated(fc) => {
            let mors: Vec<Value> = fc.morphism_records().iter().map(|r| json!([r.id, fc.object_name(r.src), fc.object_name(r.tgt)])).collect();
            let ids: Map<String, Value> =
                (0..fc.object_count()).map(|i| (fc.object_name(i).to_string(), json!(fc.morphism(fc.identity(i)).id))).collect();
            let comp: Vec<Value> = fc
                .composition_triples()
                .into_iter()
                .map(|(g, f, h)| json!([fc.morphism(g).id, fc.morphism(f).id, fc.morphism(h).id]))
                .collect();
            json!({ "name": fc.name(), "objects": fc.object_names(), "morphisms": mors, "identities": ids, "compose": comp })
        }
    }
}

fn relation_json(oc: &OrthoCat) -> Result<Value> {
    match &oc.rel {
        OrthoRel::Empty => Ok(json!("empty")),
        OrthoRel::Disjointness => Ok(json!("disjointness")),
        _ => {
            let pairs = oc.label_pairs().ok_or_else(|| Error::BackendUnsupported("lazy orthogonality cannot be serialized".into()))?;
            Ok(json!({ "pairs": pairs }))
        }
    }
}

fn functor_json(f: &Functor) -> Result<Value> {
    let (s, t) = (&f.source, &f.target);
    let body = match &f.kind {
        FunctorKind::Identity => json!({ "kind": "identity" }),
        FunctorKind::Constant { object } => json!({ "kind": "constant", "object": t.obj_label(object) }),
        FunctorKind::Loc1Collapse => json!({ "kind": "loc1-collapse" }),
        FunctorKind::Loc1Line => json!({ "kind": "loc1-line" }),
        FunctorKind::Table { objects, morphisms } => {
            let o: Map<String, Value> = objects.iter().map(|(a, b)| (s.obj_label(a), json!(t.obj_label(b)))).collect();
            let m: Map<String, Value> = morphisms.iter().map(|(a, b)| (s.mor_label(a), json!(t.mor_label(b)))).collect();
            json!({ "kind": "table", "objects": o, "morphisms": m })
        }
        FunctorKind::Composite(..) => return Err(Error::BackendUnsupported(format!("composite functor {} cannot be serialized", f.name))),
    };
    let mut body = body;
    body["name"] = json!(f.name);
    Ok(body)
}

fn components_json(c: &Components, cat: &CatRef) -> Value {
    match c {
        Components::Identity => json!("identity"),
        Components::IntervalToLine => json!("interval-to-line"),
        Components::Table(t) => Value::Object(t.iter().map(|(x, f)| (cat.obj_label(x), json!(cat.mor_label(f)))).collect()),
    }
}

fn algebra_json(a: &DgAlgebra) -> Value {
    let dims: Map<String, Value> = a.complex().dims().iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
    let d = map_json(a.complex().differentials());
    let products: Vec<Value> = a
        .products()
        .iter()
        .map(|((x, y), terms)| {
            let ts: Vec<Value> = terms.iter().map(|(k, c)| json!([k, q_json(c)])).collect();
            json!([[x.0, x.1], [y.0, y.1], ts])
        })
        .collect();
    let labels: Map<String, Value> = a.labels().iter().map(|(d, l)| (d.to_string(), json!(l))).collect();
    json!({ "dims": dims, "d": d, "unit": a.unit().iter().map(q_json).collect::<Vec<_>>(), "products": products, "labels": labels })
}

/// Names algebras in order of first appearance, sharing equal ones.
#[derive(Default)]
struct AlgebraNames {
    seen: Vec<(AlgRef, String)>,
}

impl AlgebraNames {
    fn name(&mut self, a: &AlgRef) -> String {
        if let Some((_, n)) = self.seen.iter().find(|(b, _)| b == a) {
            return n.clone();
        }
        let n = format!("A{}", self.seen.len());
        self.seen.push((a.clone(), n.clone()));
        n
    }

    fn to_json(&self) -> Value {
        Value::Object(self.seen.iter().map(|(a, n)| (n.clone(), algebra_json(a))).collect())
    }
}

fn dg_map_json(m: &DgAlgebraMap) -> Value {
    map_json(m.chain().components())
}

fn realization_json(r: &dyn Realization, base: &CatRef, names: &mut AlgebraNames) -> Result<Value> {
    let any = r.as_any();
    if let Some(t) = any.downcast_ref::<TableRealization>() {
        let algs: Map<String, Value> = t.algebras.iter().map(|(x, a)| (base.obj_label(x), json!(names.name(a)))).collect();
        let acts: Map<String, Value> = t.actions.iter().map(|(f, m)| (base.mor_label(f), dg_map_json(m))).collect();
        return Ok(json!({ "kind": "table", "algebras": algs, "actions": acts }));
    }
    if let Some(c) = any.downcast_ref::<ConstantRealization>() {
        return Ok(json!({ "kind": "constant", "algebra": names.name(&c.0) }));
    }
    if let Some(p) = any.downcast_ref::<PowerRealization>() {
        return Ok(json!({ "kind": "power", "algebra": names.name(&p.generator.source), "generator": dg_map_json(&p.generator) }));
    }
    if let Some(i) = any.downcast_ref::<IntervalRealization>() {
        return Ok(json!({
            "kind": "interval",
            "proper": names.name(&i.proper),
            "line": names.name(&i.line),
            "to_line": dg_map_json(&i.to_line),
        }));
    }
    if let Some(p) = any.downcast_ref::<PulledBack>() {
        return Ok(json!({
            "kind": "pullback",
            "category": category_json(&p.functor.target),
            "functor": functor_json(&p.functor)?,
            "inner": realization_json(p.inner.as_ref(), &p.functor.target, names)?,
        }));
    }
    Err(Error::BackendUnsupported("unknown realization kind".into()))
}

fn w_json(w: &MorphismSet, cat: &CatRef) -> Value {
    match w {
        MorphismSet::All => json!("all"),
        MorphismSet::IsoPreimage(_) => json!("iso-preimage"),
        MorphismSet::Finite(s) => json!(s.iter().map(|f| cat.mor_label(f)).collect::<Vec<_>>()),
    }
}

pub fn to_json(entry: &Bundle) -> Result<Value> {
    let cat = &entry.base.cat;
    let mut names = AlgebraNames::default();
    let mut doc = json!({
        "schema": SCHEMA,
        "name": entry.name,
        "description": entry.description,
        "category": category_json(cat),
        "orthogonality": relation_json(&entry.base)?,
        "w": w_json(&entry.w, cat),
    });
    let localized = match (&entry.reflective, &entry.localization) {
        (Some(r), _) => Some(r.localized.clone()),
        (None, Some(l)) => Some(OrthoCat::empty(l.target.clone())),
        _ => None,
    };
    if let Some(loc) = &localized {
        doc["localized"] = json!({ "category": category_json(&loc.cat), "orthogonality": relation_json(loc)? });
    }
    if let Some(l) = &entry.localization {
        doc["left"] = functor_json(l)?;
    }
    if let Some(r) = &entry.reflective {
        doc["left"] = functor_json(r.left())?;
        doc["right"] = functor_json(r.right())?;
        doc["unit"] = components_json(&r.adj.unit.components, cat);
        doc["counit"] = components_json(&r.adj.counit.components, &r.localized.cat);
    }
    let mut models = Vec::new();
    for m in &entry.models {
        models.push(json!({ "name": m.name, "realization": realization_json(m.realization.as_ref(), cat, &mut names)? }));
    }
    doc["algebras"] = names.to_json();
    doc["models"] = Value::Array(models);
    doc["expected"] = serde_json::to_value(&entry.expected).expect("expectations serialize");
    Ok(doc)
}

/// A single model with the algebras it uses, in the bundle vocabulary.
pub fn model_json(model: &AqftModel) -> Result<Value> {
    let mut names = AlgebraNames::default();
    let realization = realization_json(model.realization.as_ref(), &model.base.cat, &mut names)?;
    Ok(json!({ "name": model.name, "algebras": names.to_json(), "realization": realization }))
}

/// Keys of a bundle that describe the localization, as opposed to models.
pub const REFLECTION_KEYS: [&str; 6] = ["localized", "left", "right", "unit", "counit", "w"];

// ---- reading ----

struct Reader<'a> {
    path: String,
    v: &'a Value,
}

impl<'a> Reader<'a> {
    fn new(v: &'a Value) -> Self {
        Reader { path: "$".into(), v }
    }

    fn at(&self, key: &str) -> Result<Reader<'a>> {
        let v = self.v.get(key).ok_or_else(|| schema_err(&self.path, format!("missing field `{key}`")))?;
        Ok(Reader { path: format!("{}.{key}", self.path), v })
    }

    fn opt(&self, key: &str) -> Option<Reader<'a>> {
        self.v.get(key).filter(|v| !v.is_null()).map(|v| Reader { path: format!("{}.{key}", self.path), v })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        schema_err(&self.path, message)
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn usize(&self) -> Result<usize> {
        self.v.as_u64().map(|n| n as usize).ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn i64(&self) -> Result<i64> {
        self.v.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    fn items(&self) -> Result<Vec<Reader<'a>>> {
        let a = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(a.iter().enumerate().map(|(i, v)| Reader { path: format!("{}[{i}]", self.path), v }).collect())
    }

    fn entries(&self) -> Result<Vec<(&'a str, Reader<'a>)>> {
        let o = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        Ok(o.iter().map(|(k, v)| (k.as_str(), Reader { path: format!("{}.{k}", self.path), v })).collect())
    }

    fn q(&self) -> Result<Q> {
        match self.v {
            Value::Number(n) => n.as_i64().map(|x| Q::from_integer(x.into())).ok_or_else(|| self.err("rationals must be integers or strings like \"1/2\"")),
            Value::String(s) => parse_q(s).map_err(|e| self.err(e.to_string())),
            _ => self.err_q(),
        }
    }

    fn err_q(&self) -> Result<Q> {
        Err(self.err("expected a rational"))
    }

    fn strings(&self) -> Result<Vec<String>> {
        self.items()?.iter().map(|r| r.str().map(str::to_string)).collect()
    }

    /// Wraps errors from library constructors with this location.
    fn ctx<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Schema { .. } => e,
            other => self.err(other.to_string()),
        })
    }
}

fn degree_key(r: &Reader, k: &str) -> Result<i64> {
    k.parse().map_err(|_| r.err(format!("`{k}` is not a degree")))
}

fn read_matrix(r: &Reader, rows: usize, cols: usize) -> Result<Matrix> {
    let items = r.items()?;
    if items.len() != rows {
        return Err(r.err(format!("expected {rows} rows, found {}", items.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, row) in items.iter().enumerate() {
        let cells = row.items()?;
        if cells.len() != cols {
            return Err(row.err(format!("expected {cols} columns, found {}", cells.len())));
        }
        for (j, c) in cells.iter().enumerate() {
            m.set(i, j, c.q()?);
        }
    }
    Ok(m)
}

fn read_category(r: &Reader) -> Result<CatRef> {
    if let Some(b) = r.opt("builtin") {
        let dim = r.opt("dim").map(|d| d.usize()).transpose()?;
        return Ok(Category::builtin(b.ctx(Builtin::from_name(b.str()?, dim))?));
    }
    let name = r.at("name")?.str()?;
    let objects = r.at("objects")?.strings()?;
    let mut mors = Vec::new();
    for m in r.at("morphisms")?.items()? {
        let t = m.strings()?;
        if t.len() != 3 {
            return Err(m.err("a morphism is [name, source, target]"));
        }
        mors.push((t[0].clone(), t[1].clone(), t[2].clone()));
    }
    let ids: BTreeMap<String, String> = r.at("identities")?.entries()?.into_iter().map(|(k, v)| Ok((k.to_string(), v.str()?.to_string()))).collect::<Result<_>>()?;
    let mut comp = Vec::new();
    if let Some(c) = r.opt("compose") {
        for t in c.items()? {
            let t3 = t.strings()?;
            if t3.len() != 3 {
                return Err(t.err("a composite is [g, f, g∘f]"));
            }
            comp.push((t3[0].clone(), t3[1].clone(), t3[2].clone()));
        }
    }
    Ok(Category::enumerated(r.ctx(FiniteCategory::new(name, objects, mors, &ids, &comp))?))
}

fn read_relation(r: &Reader, cat: &CatRef) -> Result<OrthoRel> {
    if let Ok(name) = r.str() {
        return r.ctx(OrthoRel::by_name(name));
    }
    let mut pairs = Vec::new();
    for p in r.at("pairs")?.items()? {
        let t = p.strings()?;
        if t.len() != 2 {
            return Err(p.err("a pair is [f1, f2]"));
        }
        pairs.push(p.ctx((|| Ok((cat.parse_mor(&t[0])?, cat.parse_mor(&t[1])?)))())?);
    }
    // Stored relations are already closed; validation is left to `check-ortho`.
    Ok(OrthoRel::from_pairs(&pairs))
}

fn read_functor(r: &Reader, source: &CatRef, target: &CatRef) -> Result<Functor> {
    let name = r.opt("name").map(|n| n.str().map(str::to_string)).transpose()?.unwrap_or_else(|| "F".into());
    let f = match r.at("kind")?.str()? {
        "identity" => Functor { name: name.clone(), ..Functor::identity(source) },
        "constant" => r.ctx(Functor::constant(name.clone(), source, target, target.parse_obj(r.at("object")?.str()?)?))?,
        "loc1-collapse" => Functor { name: name.clone(), ..Functor::loc1_collapse(source, target) },
        "loc1-line" => Functor { name: name.clone(), ..Functor::loc1_line(source, target) },
        "table" => {
            let o = r.at("objects")?;
            let objects = o.entries()?.into_iter().map(|(k, v)| o.ctx((|| Ok((source.parse_obj(k)?, target.parse_obj(v.str()?)?)))())).collect::<Result<_>>()?;
            let m = r.at("morphisms")?;
            let morphisms = m.entries()?.into_iter().map(|(k, v)| m.ctx((|| Ok((source.parse_mor(k)?, target.parse_mor(v.str()?)?)))())).collect::<Result<_>>()?;
            r.ctx(Functor::table(name.clone(), source, target, objects, morphisms))?
        }
        other => return Err(r.at("kind")?.err(format!("unknown functor kind `{other}`"))),
    };
    Ok(f)
}

fn read_components(r: &Reader, cat: &CatRef) -> Result<Components> {
    if let Ok(s) = r.str() {
        return match s {
            "identity" => Ok(Components::Identity),
            "interval-to-line" => Ok(Components::IntervalToLine),
            other => Err(r.err(format!("unknown components `{other}`"))),
        };
    }
    let table = r.entries()?.into_iter().map(|(k, v)| r.ctx((|| Ok((cat.parse_obj(k)?, cat.parse_mor(v.str()?)?)))())).collect::<Result<_>>()?;
    Ok(Components::Table(table))
}

fn read_algebra(r: &Reader) -> Result<DgAlgebra> {
    let dims: BTreeMap<i64, usize> = r.at("dims")?.entries()?.into_iter().map(|(k, v)| Ok((degree_key(&v, k)?, v.usize()?))).collect::<Result<_>>()?;
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
    let mut d = BTreeMap::new();
    if let Some(dr) = r.opt("d") {
        for (k, v) in dr.entries()? {
            let n = degree_key(&v, k)?;
            d.insert(n, read_matrix(&v, dim(n - 1), dim(n))?);
        }
    }
    let complex = r.ctx(ChainComplex::new(dims.clone(), d))?;
    let unit = r.at("unit")?.items()?.iter().map(Reader::q).collect::<Result<Vec<_>>>()?;
    let mut mult = MultTable::new();
    for p in r.at("products")?.items()? {
        let parts = p.items()?;
        if parts.len() != 3 {
            return Err(p.err("a product is [[deg, i], [deg, j], [[k, c], ...]]"));
        }
        let basis = |b: &Reader| -> Result<(i64, usize)> {
            let xs = b.items()?;
            if xs.len() != 2 {
                return Err(b.err("a basis element is [degree, index]"));
            }
            Ok((xs[0].i64()?, xs[1].usize()?))
        };
        let terms = parts[2]
            .items()?
            .iter()
            .map(|t| {
                let xs = t.items()?;
                if xs.len() != 2 {
                    return Err(t.err("a term is [index, coefficient]"));
                }
                Ok((xs[0].usize()?, xs[1].q()?))
            })
            .collect::<Result<Vec<_>>>()?;
        mult.insert((basis(&parts[0])?, basis(&parts[1])?), terms);
    }
    let labels = match r.opt("labels") {
        Some(l) => Some(l.entries()?.into_iter().map(|(k, v)| Ok((degree_key(&v, k)?, v.strings()?))).collect::<Result<BTreeMap<_, _>>>()?),
        None => None,
    };
    r.ctx(DgAlgebra::new(complex, unit, mult, labels))
}

fn read_dg_map(r: &Reader, src: &AlgRef, tgt: &AlgRef) -> Result<DgAlgebraMap> {
    let mut comps = BTreeMap::new();
    for (k, v) in r.entries()? {
        let n = degree_key(&v, k)?;
        comps.insert(n, read_matrix(&v, tgt.complex().dim(n), src.complex().dim(n))?);
    }
    r.ctx(DgAlgebraMap::new(src.clone(), tgt.clone(), comps))
}

fn read_realization(r: &Reader, base: &OrthoCat, algebras: &BTreeMap<String, AlgRef>) -> Result<Arc<dyn Realization>> {
    let alg = |x: &Reader| -> Result<AlgRef> {
        let n = x.str()?;
        algebras.get(n).cloned().ok_or_else(|| x.err(format!("unknown algebra `{n}`")))
    };
    let cat = &base.cat;
    Ok(match r.at("kind")?.str()? {
        "constant" => Arc::new(ConstantRealization(alg(&r.at("algebra")?)?)),
        "power" => {
            let a = alg(&r.at("algebra")?)?;
            Arc::new(PowerRealization { generator: read_dg_map(&r.at("generator")?, &a, &a)? })
        }
        "interval" => {
            let (p, l) = (alg(&r.at("proper")?)?, alg(&r.at("line")?)?);
            Arc::new(IntervalRealization { to_line: read_dg_map(&r.at("to_line")?, &p, &l)?, proper: p, line: l })
        }
        "table" => {
            let algs: BTreeMap<Obj, AlgRef> = r.at("algebras")?.entries()?.into_iter().map(|(k, v)| Ok((v.ctx(cat.parse_obj(k))?, alg(&v)?))).collect::<Result<_>>()?;
            let get = |x: &Obj, at: &Reader| algs.get(x).cloned().ok_or_else(|| at.err(format!("no algebra for {}", cat.obj_label(x))));
            let mut actions = BTreeMap::new();
            for (k, v) in r.at("actions")?.entries()? {
                let f = v.ctx(cat.parse_mor(k))?;
                let (s, t) = (get(&v.ctx(cat.source(&f))?, &v)?, get(&v.ctx(cat.target(&f))?, &v)?);
                actions.insert(f, read_dg_map(&v, &s, &t)?);
            }
            let objects = cat.objects().ok_or_else(|| r.err("table models need an enumerated category"))?;
            let identities = objects.into_iter().map(|x| Ok((cat.identity(&x)?, x))).collect::<Result<_>>()?;
            Arc::new(TableRealization::new(algs, actions, identities))
        }
        "pullback" => {
            let inner_cat = read_category(&r.at("category")?)?;
            let f = read_functor(&r.at("functor")?, cat, &inner_cat)?;
            let inner = read_realization(&r.at("inner")?, &OrthoCat::empty(inner_cat), algebras)?;
            Arc::new(PulledBack { functor: f, inner })
        }
        other => return Err(r.at("kind")?.err(format!("unknown model kind `{other}`"))),
    })
}

fn read_w(r: &Reader, cat: &CatRef, left: Option<&Functor>) -> Result<MorphismSet> {
    if let Ok(s) = r.str() {
        return match s {
            "all" => Ok(MorphismSet::All),
            "iso-preimage" => {
                let l = left.ok_or_else(|| r.err("`iso-preimage` needs a `left` functor"))?;
                r.ctx(derive_w(l))
            }
            other => Err(r.err(format!("unknown morphism set `{other}`"))),
        };
    }
    let labels = r.strings()?;
    r.ctx(MorphismSet::parse(cat, &labels))
}

pub fn from_json(v: &Value) -> Result<Bundle> {
    let root = Reader::new(v);
    let schema = root.at("schema")?;
    if schema.str()? != SCHEMA {
        return Err(schema.err(format!("unsupported schema `{}`, expected `{SCHEMA}`", schema.str()?)));
    }
    let cat = read_category(&root.at("category")?)?;
    let base = OrthoCat::new(cat.clone(), read_relation(&root.at("orthogonality")?, &cat)?);
    let localized = match root.opt("localized") {
        Some(l) => {
            let c = read_category(&l.at("category")?)?;
            let rel = match l.opt("orthogonality") {
                Some(r) => read_relation(&r, &c)?,
                None => OrthoRel::Empty,
            };
            Some(OrthoCat::new(c, rel))
        }
        None => None,
    };
    let need_loc = |what: &str| localized.clone().ok_or_else(|| root.err(format!("`{what}` needs a `localized` section")));
    let left = match root.opt("left") {
        Some(l) => Some(read_functor(&l, &cat, &need_loc("left")?.cat)?),
        None => None,
    };
    let reflective = match root.opt("right") {
        Some(r) => {
            let loc = need_loc("right")?;
            let right = read_functor(&r, &loc.cat, &cat)?;
            let l = left.clone().ok_or_else(|| root.err("`right` needs a `left` functor"))?;
            let unit = read_components(&root.at("unit")?, &cat)?;
            let counit = read_components(&root.at("counit")?, &loc.cat)?;
            let adj = root.ctx(AdjunctionData::new(l.clone(), right, unit, counit))?;
            let w = match root.opt("w") {
                Some(w) => read_w(&w, &cat, Some(&l))?,
                None => root.ctx(derive_w(&l))?,
            };
            Some(root.ctx(ReflectiveData::new(base.clone(), loc, adj, w))?)
        }
        None => None,
    };
    let w = match root.opt("w") {
        Some(w) => read_w(&w, &cat, left.as_ref())?,
        None => MorphismSet::All,
    };
    let mut algebras = BTreeMap::new();
    if let Some(a) = root.opt("algebras") {
        for (k, v) in a.entries()? {
            algebras.insert(k.to_string(), Arc::new(read_algebra(&v)?));
        }
    }
    let mut models = Vec::new();
    if let Some(ms) = root.opt("models") {
        for m in ms.items()? {
            let name = m.at("name")?.str()?.to_string();
            models.push(AqftModel::new(name, base.clone(), read_realization(&m.at("realization")?, &base, &algebras)?));
        }
    }
    let expected: Vec<Expectation> = match root.opt("expected") {
        Some(e) => serde_json::from_value(e.v.clone()).map_err(|err| e.err(err.to_string()))?,
        None => Vec::new(),
    };
    Ok(CorpusEntry {
        name: root.opt("name").map(|n| n.str().map(str::to_string)).transpose()?.unwrap_or_default(),
        description: root.opt("description").map(|n| n.str().map(str::to_string)).transpose()?.unwrap_or_default(),
        base,
        localization: left,
        reflective,
        w,
        models,
        expected,
    })
}

/// Parses bundle text, reporting syntax errors with line and column.
pub fn from_str(text: &str) -> Result<Bundle> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema_err(&format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    from_json(&v)
}

/// Looks up a morphism by label in the base category, for command-line use.
pub fn morphism(bundle: &Bundle, label: &str) -> Result<Mor> {
    bundle.base.cat.parse_mor(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::report::SampleConfig;

    #[test]
    fn corpus_round_trips() {
        let cfg = SampleConfig::new(3, 32);
        for e in corpus::all() {
            let doc = to_json(&e).unwrap();
            let text = serde_json::to_string_pretty(&doc).unwrap();
            let back = from_str(&text).unwrap();
            assert_eq!(to_json(&back).unwrap(), doc, "{}", e.name);
            let r = back.verify(&cfg).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn schema_errors_carry_paths() {
        let mut doc = to_json(&corpus::by_name("toy-homotopy").unwrap()).unwrap();
        doc["schema"] = json!("other/9");
        assert!(matches!(from_json(&doc), Err(Error::Schema { path, .. }) if path == "$.schema"));
        let mut doc = to_json(&corpus::by_name("toy-homotopy").unwrap()).unwrap();
        doc["models"][0]["realization"]["actions"]["U->V"]["0"] = json!([[1, 1]]);
        match from_json(&doc) {
            Err(Error::Schema { path, message }) => {
                assert!(path.contains("actions"), "{path}");
                assert!(message.contains("chain map"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(from_str("{ \"schema\": "), Err(Error::Schema { path, .. }) if path.starts_with("line 1")));
    }
}
