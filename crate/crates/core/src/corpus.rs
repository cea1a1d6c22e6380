//! Built-in example instances with their expected verdicts. Every entry can
//! re-derive its expectations, so the corpus doubles as a regression suite.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::aqft::{
    check_aqft, pullback_aqft, time_slice_verdict, AqftModel, ConstantRealization, IntervalRealization, PowerRealization,
    TimeSliceKind, CHECK_CAUSALITY,
};
use crate::cat::{check_adjunction, AdjunctionData, BoxRegion, Builtin, CatRef, Category, Components, FiniteCategory, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::homalg::{complex_from_i64, free_dga, AlgRef, ChainComplex, DgAlgebra, DgAlgebraMap};
use crate::linalg::Matrix;
use crate::localize::{certify_reflective, derive_w, zigzag_evaluate, MorphismSet, ReflectiveData};
use crate::operad::{op_equal, OperadOp};
use crate::ortho::{closure, pushforward, OrthoCat, OrthoRel};
use crate::rational::{q, Q};
use crate::report::{Coverage, Report, SampleConfig, Verdict};
use crate::strictify::{bar_truncated, rce_action, rce_loop, strictify_reflective, tot_normalized, RceMode};

/// A verdict the entry is known to produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Expectation {
    MorphismCount { count: usize },
    /// Reflective certification outcome, with the exact set of failing checks.
    Certification { verified: bool, failing: Vec<String> },
    AdjunctionHolds { holds: bool },
    /// The orthogonality pushed forward along the localization functor.
    LocalizedPairs { pairs: Vec<(String, String)> },
    TimeSlice { model: String, kind: TimeSliceKind },
    Causality { model: String, holds: bool },
    /// Strictification along the reflection; `failing_units` lists objects
    /// whose unit component is not a quasi-isomorphism.
    Strictify { model: String, failing_units: Vec<String> },
    /// Generator of the RCE action, per degree, with integer entries.
    RceGenerator {
        model: String,
        mode: RceMode,
        #[serde(deserialize_with = "degree_keyed")]
        generator: BTreeMap<i64, Vec<Vec<i64>>>,
    },
    /// Value of the RCE loop under the localization functor, in `BZ`.
    LoopValue { value: i64 },
    BarQuasiIso { model: String, depth: usize, weight: usize, window: (i64, i64) },
    /// Equality of two operations, written `[perm=...; f1,f2 -> N]`.
    OperadEqual { lhs: String, rhs: String, equal: bool },
}

impl Expectation {
    pub fn describe(&self) -> String {
        match self {
            Expectation::MorphismCount { count } => format!("morphism count = {count}"),
            Expectation::Certification { verified: true, .. } => "reflective localization verified".into(),
            Expectation::Certification { failing, .. } => format!("reflective localization fails at {}", failing.join(", ")),
            Expectation::AdjunctionHolds { holds } => format!("underlying adjunction {}", if *holds { "holds" } else { "fails" }),
            Expectation::LocalizedPairs { pairs } => format!("localized orthogonality = {pairs:?}"),
            Expectation::TimeSlice { model, kind } => format!("{model}: time-slice {kind}"),
            Expectation::Causality { model, holds } => format!("{model}: causality {}", if *holds { "holds" } else { "fails" }),
            Expectation::Strictify { model, failing_units } if failing_units.is_empty() => format!("{model}: all unit components quasi-iso"),
            Expectation::Strictify { model, failing_units } => format!("{model}: unit components fail at {}", failing_units.join(", ")),
            Expectation::RceGenerator { model, mode, generator } => format!("{model}: {mode:?} RCE generator {generator:?}"),
            Expectation::LoopValue { value } => format!("RCE loop normalizes to {value}"),
            Expectation::BarQuasiIso { model, depth, weight, window } => {
                format!("{model}: bar augmentation quasi-iso (depth {depth}, weight {weight}, window {}:{})", window.0, window.1)
            }
            Expectation::OperadEqual { lhs, rhs, equal } => format!("{lhs} {} {rhs}", if *equal { "==" } else { "!=" }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub base: OrthoCat,
    /// A localization functor out of the base, when the entry has one.
    pub localization: Option<Functor>,
    /// Candidate reflective data; certification may fail.
    pub reflective: Option<ReflectiveData>,
    pub w: MorphismSet,
    pub models: Vec<AqftModel>,
    pub expected: Vec<Expectation>,
}

impl CorpusEntry {
    pub fn model(&self, name: &str) -> Result<&AqftModel> {
        self.models.iter().find(|m| m.name == name).ok_or_else(|| Error::Parse(format!("no model `{name}` in {}", self.name)))
    }

    fn reflective(&self) -> Result<&ReflectiveData> {
        self.reflective.as_ref().ok_or_else(|| Error::Parse(format!("{} has no reflective data", self.name)))
    }

    /// Recomputes every expectation.
    pub fn verify(&self, cfg: &SampleConfig) -> Result<Report> {
        let mut r = Report::new(format!("corpus entry {}", self.name));
        for e in &self.expected {
            let (ok, cov, got) = self.evaluate(e, cfg)?;
            let v = if ok { Verdict::pass(e.describe(), cov) } else { Verdict::fail(e.describe(), cov, vec![got]) };
            r.push(v);
        }
        Ok(r)
    }

    fn evaluate(&self, e: &Expectation, cfg: &SampleConfig) -> Result<(bool, Coverage, String)> {
        Ok(match e {
            Expectation::MorphismCount { count } => {
                let n = self.base.cat.morphisms().map(|m| m.len()).unwrap_or(0);
                (n == *count, Coverage::Exhaustive, n.to_string())
            }
            Expectation::Certification { verified, failing } => {
                let cert = certify_reflective(self.reflective()?, cfg)?;
                let got: Vec<String> = cert.report.failures().map(|v| v.check.clone()).collect();
                (cert.verified() == *verified && got == *failing, cert.report.coverage(), cert.summary())
            }
            Expectation::AdjunctionHolds { holds } => {
                let rep = check_adjunction(&self.reflective()?.adj, cfg)?;
                (rep.passed() == *holds, rep.coverage(), rep.to_string())
            }
            Expectation::LocalizedPairs { pairs } => {
                let l = self.localization.as_ref().ok_or_else(|| Error::Parse("no localization functor".into()))?;
                let rel = pushforward(l, &self.base.rel, cfg)?;
                let got = OrthoCat::new(l.target.clone(), rel).label_pairs().unwrap_or_default();
                (got == *pairs, Coverage::Exhaustive, format!("{got:?}"))
            }
            Expectation::TimeSlice { model, kind } => {
                let ts = time_slice_verdict(self.model(model)?, &self.w, cfg)?;
                (ts.kind == *kind, ts.coverage, ts.kind.to_string())
            }
            Expectation::Causality { model, holds } => {
                let rep = check_aqft(self.model(model)?, cfg)?;
                let v = rep.verdict(CHECK_CAUSALITY).expect("causality verdict");
                (v.passed == *holds && rep.verdicts.iter().filter(|x| x.check != CHECK_CAUSALITY).all(|x| x.passed), rep.coverage(), rep.to_string())
            }
            Expectation::Strictify { model, failing_units } => {
                let res = strictify_reflective(self.model(model)?, self.reflective()?, cfg)?;
                let got: Vec<String> = res.units.iter().filter(|u| !u.is_quasi_iso()).map(|u| u.label.clone()).collect();
                let strict = res.output_slice.kind == TimeSliceKind::Strict;
                (strict && got == *failing_units, res.coverage, format!("strict output: {strict}, failing units: {got:?}"))
            }
            Expectation::RceGenerator { model, mode, generator } => {
                let act = rce_action(self.model(model)?, *mode, cfg)?;
                let want: BTreeMap<i64, Matrix> =
                    generator.iter().map(|(d, rows)| (*d, int_matrix(rows))).collect();
                (act.generator == want, Coverage::Exhaustive, format!("{:?}", act.generator))
            }
            Expectation::LoopValue { value } => {
                let l = self.localization.as_ref().ok_or_else(|| Error::Parse("no localization functor".into()))?;
                let z = crate::localize::ZigZag::parse(&self.base.cat, crate::strictify::RCE_LOOP.0, crate::strictify::RCE_LOOP.1)?;
                let got = zigzag_evaluate(&z, l, &self.w)?;
                (got == Mor::Int((*value).into()), Coverage::Exhaustive, l.target.mor_label(&got))
            }
            Expectation::BarQuasiIso { model, depth, weight, window } => {
                let res = bar_truncated(self.model(model)?, *depth, *weight)?;
                let checks = res.check();
                let tot = tot_normalized(&res, window.0..=window.1)?;
                let v = tot.verdict();
                (checks.passed() && v.passed, Coverage::Exhaustive, format!("{checks} {v:?}"))
            }
            Expectation::OperadEqual { lhs, rhs, equal } => {
                let cat = &self.base.cat;
                let got = op_equal(&OperadOp::parse(cat, lhs)?, &OperadOp::parse(cat, rhs)?, &self.base)?;
                (got == *equal, Coverage::Exhaustive, got.to_string())
            }
        })
    }
}

fn int_matrix(rows: &[Vec<i64>]) -> Matrix {
    let r = rows.len();
    let c = rows.first().map(Vec::len).unwrap_or(0);
    Matrix::from_rows(r, c, rows.iter().map(|row| row.iter().map(|x| q(*x)).collect()).collect()).expect("rectangular")
}

/// A category from named objects and arrows; identities are `id_X` and
/// only composites with identities exist besides `compose`.
pub fn finite_category(name: &str, objects: &[&str], arrows: &[(&str, &str, &str)], compose: &[(&str, &str, &str)]) -> Result<CatRef> {
    let s = |x: &str| x.to_string();
    let mut mors: Vec<(String, String, String)> = objects.iter().map(|o| (format!("id_{o}"), s(o), s(o))).collect();
    mors.extend(arrows.iter().map(|(f, a, b)| (s(f), s(a), s(b))));
    let ids = objects.iter().map(|o| (s(o), format!("id_{o}"))).collect();
    let comp: Vec<_> = compose.iter().map(|(g, f, h)| (s(g), s(f), s(h))).collect();
    Ok(Category::enumerated(FiniteCategory::new(name, objects.iter().map(|o| s(o)).collect(), mors, &ids, &comp)?))
}

pub fn rce_category() -> CatRef {
    finite_category(
        "RCE",
        &["M", "M_+", "M_-", "M_h"],
        &[("i_+", "M_+", "M"), ("i_-", "M_-", "M"), ("j_+", "M_+", "M_h"), ("j_-", "M_-", "M_h")],
        &[],
    )
    .expect("RCE category is valid")
}

/// `L: RCE -> BZ` with `i_- ↦ 1` and every other arrow to `0`.
pub fn rce_localization(rce: &CatRef) -> Functor {
    let bz = Category::builtin(Builtin::BZ);
    let objs: Vec<(&str, &str)> = ["M", "M_+", "M_-", "M_h"].iter().map(|o| (*o, "*")).collect();
    Functor::from_labels("L", rce, &bz, &objs, &[("i_+", "0"), ("i_-", "1"), ("j_+", "0"), ("j_-", "0")]).expect("L is well-defined")
}

/// The RCE category with its localization to `BZ` and the candidate right
/// adjoint `* ↦ M_h`. No arrow `M -> M_h` exists, so the unit has no
/// component at `M` and certification fails.
pub fn build_rce() -> CorpusEntry {
    let c = rce_category();
    let l = rce_localization(&c);
    let bz = l.target.clone();
    // Every integer goes to id_{M_h}, the only endomorphism available there.
    let iota = Functor::constant("ι", &bz, &c, c.parse_obj("M_h").unwrap()).expect("constant on M_h");
    let unit: BTreeMap<Obj, Mor> = [("M_+", "j_+"), ("M_-", "j_-"), ("M_h", "id_M_h")]
        .iter()
        .map(|(x, f)| (c.parse_obj(x).unwrap(), c.parse_mor(f).unwrap()))
        .collect();
    let adj = AdjunctionData::new(l.clone(), iota, Components::Table(unit), Components::Identity).expect("parallel functors");
    let base = OrthoCat::empty(c);
    let data = ReflectiveData::new(base.clone(), OrthoCat::empty(bz), adj, MorphismSet::All).expect("matching categories");
    let constant = AqftModel::new("constant", base.clone(), Arc::new(ConstantRealization(ground())));
    CorpusEntry {
        name: "rce".into(),
        description: "relative Cauchy evolution: M <- M_+ -> M_h <- M_- -> M localized at all morphisms".into(),
        base,
        localization: Some(l),
        reflective: Some(data),
        w: MorphismSet::All,
        models: vec![constant],
        expected: vec![
            Expectation::MorphismCount { count: 8 },
            Expectation::LoopValue { value: 1 },
            Expectation::TimeSlice { model: "constant".into(), kind: TimeSliceKind::Strict },
            Expectation::RceGenerator { model: "constant".into(), mode: RceMode::Strict, generator: [(0, vec![vec![1]])].into() },
            Expectation::Certification {
                verified: false,
                failing: vec!["(a) adjunction".into(), "(b) right adjoint fully faithful".into()],
            },
        ],
    }
}

/// The category of intervals with translations, reflected onto `BRdelta`
/// through the whole line.
pub fn loc1_reflection() -> ReflectiveData {
    let loc = Category::builtin(Builtin::Loc1Skeletal);
    let br = Category::builtin(Builtin::BRdelta);
    let l = Functor::loc1_collapse(&loc, &br);
    let adj = AdjunctionData::new(l.clone(), Functor::loc1_line(&br, &loc), Components::IntervalToLine, Components::Identity)
        .expect("parallel functors");
    ReflectiveData::new(OrthoCat::empty(loc), OrthoCat::empty(br), adj, derive_w(&l).expect("iso preimage")).expect("matching categories")
}

pub fn ground() -> AlgRef {
    Arc::new(DgAlgebra::ground())
}

/// `K ⊕ I` with `I` acyclic: `u` in degree 1, `v` in degree 0, `du = v`.
pub fn acyclic_extension(base: &AlgRef, augmentation: &[Q]) -> AlgRef {
    let ideal = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).expect("acyclic ideal");
    Arc::new(DgAlgebra::square_zero_extension(base, augmentation, &ideal, &[(1, vec!["u".into()]), (0, vec!["v".into()])]).expect("valid extension"))
}

/// The projection of a square-zero extension onto its base.
pub fn projection(ext: &AlgRef, base: &AlgRef) -> DgAlgebraMap {
    let comps = ext
        .complex()
        .dims()
        .iter()
        .map(|(&d, &n)| {
            let m = base.complex().dim(d);
            let mut p = Matrix::zeros(m, n);
            for i in 0..m {
                p.set(i, i, q(1));
            }
            (d, p)
        })
        .collect();
    DgAlgebraMap::new(ext.clone(), base.clone(), comps).expect("projection onto the base")
}

pub fn build_loc1() -> CorpusEntry {
    let data = loc1_reflection();
    let k = ground();
    let e = acyclic_extension(&k, &[q(1)]);
    let model = AqftModel::new(
        "interval",
        data.base.clone(),
        Arc::new(IntervalRealization { proper: e.clone(), line: k.clone(), to_line: projection(&e, &k) }),
    );
    CorpusEntry {
        name: "loc1".into(),
        description: "intervals of the real line with translations, localized at all morphisms".into(),
        base: data.base.clone(),
        localization: Some(data.left().clone()),
        w: data.w.clone(),
        reflective: Some(data),
        models: vec![model],
        expected: vec![
            Expectation::Certification { verified: true, failing: vec![] },
            Expectation::TimeSlice { model: "interval".into(), kind: TimeSliceKind::HomotopyOnly },
            Expectation::Strictify { model: "interval".into(), failing_units: vec![] },
        ],
    }
}

/// Dyadic open boxes in `(0,1)^m` down to side `2^-levels`, ordered by
/// inclusion, with disjointness as orthogonality, and the candidate
/// reflection onto the ambient box.
pub fn build_disk(m: usize, levels: usize) -> CorpusEntry {
    let m = m.max(1);
    let levels = levels.max(1);
    let mut boxes: Vec<BoxRegion> = Vec::new();
    for level in 0..=levels {
        let n = 1i64 << level;
        let mut idx = vec![0i64; m];
        loop {
            let sides = idx.iter().map(|&i| (Q::new(i.into(), n.into()), Q::new((i + 1).into(), n.into()))).collect();
            boxes.push(BoxRegion::new(sides).expect("nonempty box"));
            let mut pos = 0;
            while pos < m {
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == m {
                break;
            }
        }
    }
    let names: Vec<String> = boxes.iter().map(|b| b.to_string()).collect();
    let mut leq = Vec::new();
    for (i, a) in boxes.iter().enumerate() {
        for (j, b) in boxes.iter().enumerate() {
            if i != j && b.contains(a) {
                leq.push((i, j));
            }
        }
    }
    let c = Category::enumerated(FiniteCategory::from_preorder(format!("Disk{m}"), names.clone(), &leq).expect("inclusion order"));
    let mut pairs = Vec::new();
    for f in c.morphisms().unwrap() {
        for g in c.morphisms().unwrap() {
            let (sf, sg) = (c.source(&f).unwrap(), c.source(&g).unwrap());
            let (Obj::Idx(a), Obj::Idx(b)) = (&sf, &sg) else { unreachable!() };
            if c.target(&f).unwrap() == c.target(&g).unwrap() && boxes[*a].disjoint(&boxes[*b]) {
                pairs.push((f.clone(), g.clone()));
            }
        }
    }
    let base = OrthoCat::new(c.clone(), OrthoRel::from_pairs(&pairs));
    let pt = finite_category("pt", &["*"], &[], &[]).expect("point");
    let l = Functor::constant("L", &c, &pt, Obj::Idx(0)).expect("constant functor");
    let localized_rel = pushforward(&l, &base.rel, &SampleConfig::default()).expect("enumerated pushforward");
    let ambient = names[0].as_str();
    let iota = Functor::from_labels("ι", &pt, &c, &[("*", ambient)], &[]).expect("inclusion of the ambient box");
    let unit: BTreeMap<Obj, Mor> = c
        .objects()
        .unwrap()
        .into_iter()
        .map(|x| {
            let f = c.hom(&x, &Obj::Idx(0)).unwrap().into_iter().next().expect("every box lies in the ambient box");
            (x, f)
        })
        .collect();
    let adj = AdjunctionData::new(l.clone(), iota, Components::Table(unit), Components::Identity).expect("parallel functors");
    let data = ReflectiveData::new(base.clone(), OrthoCat::new(pt, localized_rel), adj, derive_w(&l).expect("enumerated")).expect("matching");
    CorpusEntry {
        name: "disk".into(),
        description: format!("nested and disjoint dyadic boxes in dimension {m}, {levels} levels, reflected onto the ambient box"),
        base,
        localization: Some(l),
        w: data.w.clone(),
        reflective: Some(data),
        models: Vec::new(),
        expected: vec![
            Expectation::LocalizedPairs { pairs: vec![("id_*".into(), "id_*".into())] },
            Expectation::AdjunctionHolds { holds: true },
            Expectation::Certification {
                verified: false,
                failing: vec!["(e) right adjoint orthogonal".into(), "(g) orthogonality is pulled back".into()],
            },
        ],
    }
}

/// `U -> V` reflected onto `V`.
pub fn uv_reflection() -> ReflectiveData {
    let c = finite_category("UV", &["U", "V"], &[("U->V", "U", "V")], &[]).expect("poset");
    let pt = finite_category("pt", &["*"], &[], &[]).expect("point");
    let l = Functor::constant("L", &c, &pt, Obj::Idx(0)).expect("constant");
    let iota = Functor::from_labels("ι", &pt, &c, &[("*", "V")], &[]).expect("inclusion of V");
    let unit: BTreeMap<Obj, Mor> = [("U", "U->V"), ("V", "id_V")].iter().map(|(x, f)| (c.parse_obj(x).unwrap(), c.parse_mor(f).unwrap())).collect();
    let adj = AdjunctionData::new(l.clone(), iota, Components::Table(unit), Components::Identity).expect("parallel functors");
    ReflectiveData::new(OrthoCat::empty(c), OrthoCat::empty(pt), adj, derive_w(&l).expect("enumerated")).expect("matching")
}

fn uv_entry(data: &ReflectiveData, name: &str, description: &str, model: AqftModel, expected: Vec<Expectation>) -> CorpusEntry {
    let data = data.clone();
    CorpusEntry {
        name: name.into(),
        description: description.into(),
        base: data.base.clone(),
        localization: Some(data.left().clone()),
        w: data.w.clone(),
        reflective: Some(data),
        models: vec![model],
        expected,
    }
}

/// `x ↦ 2x` on the dual numbers `K[x]/(x²)`.
pub fn doubling() -> DgAlgebraMap {
    let b = Arc::new(DgAlgebra::dual_numbers());
    DgAlgebraMap::new(b.clone(), b, [(0, Matrix::from_i64(2, 2, &[1, 0, 0, 2]))].into()).expect("algebra automorphism")
}

/// The free theory used for the bar resolution: the tensor algebra on
/// `x` (degree 1) and `y = dx`, cut at word length 2.
pub fn free_theory_algebra() -> AlgRef {
    let v = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).expect("generators");
    free_dga(&v, 2).algebra
}

pub fn build_toy_theories() -> Vec<CorpusEntry> {
    let data = uv_reflection();
    let k = ground();
    let e = acyclic_extension(&k, &[q(1)]);
    let dual = Arc::new(DgAlgebra::dual_numbers());
    let mut out = Vec::new();

    let strict = AqftModel::new("dual", data.base.clone(), Arc::new(ConstantRealization(dual.clone())));
    out.push(uv_entry(
        &data,
        "toy-strict",
        "constant dual-number theory on U -> V",
        strict,
        vec![
            Expectation::TimeSlice { model: "dual".into(), kind: TimeSliceKind::Strict },
            Expectation::Strictify { model: "dual".into(), failing_units: vec![] },
        ],
    ));

    let proj = AqftModel::from_tables(
        "proj",
        data.base.clone(),
        &[("U", e.clone()), ("V", k.clone())],
        vec![("U->V", projection(&e, &k).chain().components().clone())],
    )
    .expect("valid table model");
    out.push(uv_entry(
        &data,
        "toy-homotopy",
        "acyclic square-zero extension projecting onto the ground field",
        proj,
        vec![
            Expectation::TimeSlice { model: "proj".into(), kind: TimeSliceKind::HomotopyOnly },
            Expectation::Causality { model: "proj".into(), holds: true },
            Expectation::Strictify { model: "proj".into(), failing_units: vec![] },
        ],
    ));

    let closed = Arc::new(DgAlgebra::square_zero_extension(&k, &[q(1)], &ChainComplex::concentrated(0, 1), &[(0, vec!["y".into()])]).expect("K[y]/(y²)"));
    let bad = AqftModel::from_tables(
        "collapse",
        data.base.clone(),
        &[("U", closed.clone()), ("V", k.clone())],
        vec![("U->V", projection(&closed, &k).chain().components().clone())],
    )
    .expect("valid table model");
    out.push(uv_entry(
        &data,
        "toy-neither",
        "K[y]/(y²) collapsing onto the ground field: not a quasi-isomorphism",
        bad,
        vec![
            Expectation::TimeSlice { model: "collapse".into(), kind: TimeSliceKind::Neither },
            Expectation::Strictify { model: "collapse".into(), failing_units: vec!["U".into()] },
        ],
    ));

    let pt = finite_category("pt", &["*"], &[], &[]).expect("point");
    let id = pt.parse_mor("id_*").unwrap();
    let acausal = AqftModel::new(
        "matrices",
        OrthoCat::new(pt.clone(), OrthoRel::from_pairs(&[(id.clone(), id)])),
        Arc::new(ConstantRealization(Arc::new(DgAlgebra::matrices(2)))),
    );
    out.push(CorpusEntry {
        name: "toy-acausal".into(),
        description: "2x2 matrices on a point whose identity is orthogonal to itself".into(),
        base: acausal.base.clone(),
        localization: None,
        reflective: None,
        w: MorphismSet::Finite(Default::default()),
        models: vec![acausal],
        expected: vec![Expectation::Causality { model: "matrices".into(), holds: false }],
    });

    out.push(build_toy_rce());

    let free_base = OrthoCat::empty(pt);
    out.push(CorpusEntry {
        name: "toy-free".into(),
        description: "ground field and a free theory on a point, for the bar resolution".into(),
        base: free_base.clone(),
        localization: None,
        reflective: None,
        w: MorphismSet::All,
        models: vec![
            AqftModel::new("ground", free_base.clone(), Arc::new(ConstantRealization(k))),
            AqftModel::new("free", free_base, Arc::new(ConstantRealization(free_theory_algebra()))),
        ],
        expected: vec![
            Expectation::BarQuasiIso { model: "ground".into(), depth: 3, weight: 3, window: (0, 2) },
            Expectation::BarQuasiIso { model: "free".into(), depth: 3, weight: 3, window: (0, 2) },
        ],
    });
    out
}

/// RCE theories with generator `x ↦ 2x`: a strict one pulled back from
/// `BZ`, and a homotopy-only one where `A(M_+)` carries an acyclic summand.
pub fn build_toy_rce() -> CorpusEntry {
    let c = rce_category();
    let l = rce_localization(&c);
    let base = OrthoCat::empty(c.clone());
    let g = doubling();
    let b = g.source.clone();
    let on_bz = AqftModel::new("doubling", OrthoCat::empty(l.target.clone()), Arc::new(PowerRealization { generator: g.clone() }));
    let mut strict = pullback_aqft(&l, &base, &on_bz).expect("L lands in BZ");
    strict.name = "scale".into();

    let ext = acyclic_extension(&b, &[q(1), q(0)]);
    let proj = projection(&ext, &b);
    let resolved = AqftModel::from_tables(
        "scale-resolved",
        base.clone(),
        &[("M", b.clone()), ("M_+", ext), ("M_-", b.clone()), ("M_h", b.clone())],
        vec![
            ("i_+", proj.chain().components().clone()),
            ("j_+", proj.chain().components().clone()),
            ("i_-", g.chain().components().clone()),
            ("j_-", DgAlgebraMap::identity(&b).chain().components().clone()),
        ],
    )
    .expect("valid table model");
    let diag = |model: &str, mode| Expectation::RceGenerator {
        model: model.into(),
        mode,
        generator: [(0, vec![vec![1, 0], vec![0, 2]])].into(),
    };
    CorpusEntry {
        name: "toy-rce".into(),
        description: "RCE theories whose loop acts by x ↦ 2x on K[x]/(x²)".into(),
        base,
        localization: Some(l),
        reflective: None,
        w: MorphismSet::All,
        models: vec![strict, resolved],
        expected: vec![
            Expectation::LoopValue { value: 1 },
            Expectation::TimeSlice { model: "scale".into(), kind: TimeSliceKind::Strict },
            Expectation::TimeSlice { model: "scale-resolved".into(), kind: TimeSliceKind::HomotopyOnly },
            diag("scale", RceMode::Strict),
            diag("scale", RceMode::Homology),
            diag("scale-resolved", RceMode::Homology),
        ],
    }
}

/// Two arrows into a common target, orthogonal to each other.
pub fn build_cospan() -> CorpusEntry {
    let c = finite_category("Cospan", &["M1", "M2", "N"], &[("f1", "M1", "N"), ("f2", "M2", "N")], &[]).expect("cospan");
    let f = |x: &str| c.parse_mor(x).unwrap();
    let rel = closure(&c, &[(f("f1"), f("f2"))]).expect("common target");
    CorpusEntry {
        name: "cospan".into(),
        description: "f1: M1 -> N and f2: M2 -> N with f1 orthogonal to f2".into(),
        base: OrthoCat::new(c, rel),
        localization: None,
        reflective: None,
        w: MorphismSet::All,
        models: Vec::new(),
        expected: vec![
            Expectation::MorphismCount { count: 5 },
            Expectation::OperadEqual { lhs: "[f1,f2 -> N]".into(), rhs: "[perm=2 1; f1,f2 -> N]".into(), equal: true },
            Expectation::OperadEqual { lhs: "[f1,f1 -> N]".into(), rhs: "[perm=2 1; f1,f1 -> N]".into(), equal: false },
        ],
    }
}

pub fn all() -> Vec<CorpusEntry> {
    let mut v = vec![build_rce(), build_loc1(), build_disk(2, 1), build_cospan()];
    v.extend(build_toy_theories());
    v
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|e| e.name).collect()
}

pub fn by_name(name: &str) -> Result<CorpusEntry> {
    all().into_iter().find(|e| e.name == name).ok_or_else(|| Error::Parse(format!("no corpus entry `{name}`; try one of {}", names().join(", "))))
}

/// The loop of the entry evaluated in the target of its localization.
pub fn rce_loop_value(entry: &CorpusEntry) -> Result<Mor> {
    let l = entry.localization.as_ref().ok_or_else(|| Error::Parse("no localization functor".into()))?;
    let m = entry.models.first().cloned().unwrap_or_else(|| AqftModel::new("", entry.base.clone(), Arc::new(ConstantRealization(ground()))));
    zigzag_evaluate(&rce_loop(&m)?, l, &entry.w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_reproduces() {
        let cfg = SampleConfig::new(7, 48);
        for e in all() {
            let r = e.verify(&cfg).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn rce_localization_values() {
        let c = rce_category();
        let l = rce_localization(&c);
        assert_eq!(l.map_mor(&c.parse_mor("i_-").unwrap()).unwrap(), Mor::Int(1.into()));
        assert_eq!(l.map_mor(&c.parse_mor("i_+").unwrap()).unwrap(), Mor::Int(0.into()));
        assert_eq!(rce_loop_value(&build_rce()).unwrap(), Mor::Int(1.into()));
    }

    #[test]
    fn disk_sizes() {
        let e = build_disk(2, 1);
        assert_eq!(e.base.cat.objects().unwrap().len(), 5);
        assert_eq!(build_disk(1, 2).base.cat.objects().unwrap().len(), 7);
    }
}

// Buffered (tagged) enum content loses integer map keys; accept them as strings.
fn degree_keyed<'de, D: serde::Deserializer<'de>>(de: D) -> std::result::Result<BTreeMap<i64, Vec<Vec<i64>>>, D::Error> {
    use serde::de::Error as _;
    let raw: BTreeMap<String, Vec<Vec<i64>>> = serde::Deserialize::deserialize(de)?;
    raw.into_iter().map(|(k, v)| k.parse().map(|d| (d, v)).map_err(|_| D::Error::custom(format!("`{k}` is not a degree")))).collect()
}
