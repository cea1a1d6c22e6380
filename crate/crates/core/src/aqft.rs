//! Field theories as functors into dg-algebras: validity checks, the strict
//! and homotopy time-slice verdicts, pullback along functors, and the
//! generating maps for the homotopy time-slice condition.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::functor::same_category;
use crate::cat::{Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::homalg::{
    free_dga_labeled, free_map, hom_labels, yoneda_complex, yoneda_post, yoneda_pre, AlgRef, DgAlgebra, DgAlgebraMap,
};
use crate::linalg::Matrix;
use crate::localize::MorphismSet;
use crate::ortho::OrthoCat;
use crate::rational::sign;
use crate::report::{Coverage, Report, SampleConfig, Verdict};

/// Where a model's algebras and structure maps come from.
pub trait Realization: Send + Sync + fmt::Debug {
    fn algebra(&self, x: &Obj) -> Result<AlgRef>;
    fn action(&self, f: &Mor) -> Result<DgAlgebraMap>;
    /// For serialization, which needs to recover the concrete kind.
    fn as_any(&self) -> &dyn std::any::Any;
}

/// Explicit tables; missing identities act as identity maps.
#[derive(Debug, Clone)]
pub struct TableRealization {
    pub algebras: BTreeMap<Obj, AlgRef>,
    pub actions: BTreeMap<Mor, DgAlgebraMap>,
    identities: BTreeMap<Mor, Obj>,
}

impl TableRealization {
    pub fn new(algebras: BTreeMap<Obj, AlgRef>, actions: BTreeMap<Mor, DgAlgebraMap>, identities: BTreeMap<Mor, Obj>) -> Self {
        TableRealization { algebras, actions, identities }
    }
}

impl Realization for TableRealization {
    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn algebra(&self, x: &Obj) -> Result<AlgRef> {
        self.algebras.get(x).cloned().ok_or_else(|| Error::UnknownObject(format!("no algebra assigned to {x:?}")))
    }

    fn action(&self, f: &Mor) -> Result<DgAlgebraMap> {
        if let Some(a) = self.actions.get(f) {
            return Ok(a.clone());
        }
        match self.identities.get(f) {
            Some(x) => Ok(DgAlgebraMap::identity(&self.algebra(x)?)),
            None => Err(Error::UnknownMorphism(format!("no action assigned to {f:?}"))),
        }
    }
}

/// One algebra and identity actions everywhere.
#[derive(Debug, Clone)]
pub struct ConstantRealization(pub AlgRef);

impl Realization for ConstantRealization {
    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn algebra(&self, _: &Obj) -> Result<AlgRef> {
        Ok(self.0.clone())
    }

    fn action(&self, _: &Mor) -> Result<DgAlgebraMap> {
        Ok(DgAlgebraMap::identity(&self.0))
    }
}

/// A model on the integers as a one-object group: `n` acts by `g^n`.
#[derive(Debug, Clone)]
pub struct PowerRealization {
    pub generator: DgAlgebraMap,
}

impl Realization for PowerRealization {
    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn algebra(&self, _: &Obj) -> Result<AlgRef> {
        Ok(self.generator.source.clone())
    }

    fn action(&self, f: &Mor) -> Result<DgAlgebraMap> {
        match f {
            Mor::Int(n) => {
                let n: i64 = n.try_into().map_err(|_| Error::UnknownMorphism(format!("exponent {n} out of range")))?;
                self.generator.power(n)
            }
            _ => Err(Error::UnknownMorphism(format!("{f:?} is not an integer"))),
        }
    }
}

/// On intervals: a fixed algebra on every proper interval and another on
/// the whole line, with a fixed map from the first to the second.
#[derive(Debug, Clone)]
pub struct IntervalRealization {
    pub proper: AlgRef,
    pub line: AlgRef,
    pub to_line: DgAlgebraMap,
}

impl Realization for IntervalRealization {
    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn algebra(&self, x: &Obj) -> Result<AlgRef> {
        match x {
            Obj::Interval(i) if i.is_real_line() => Ok(self.line.clone()),
            Obj::Interval(_) => Ok(self.proper.clone()),
            _ => Err(Error::UnknownObject(format!("{x:?} is not an interval"))),
        }
    }

    fn action(&self, f: &Mor) -> Result<DgAlgebraMap> {
        match f {
            Mor::Translate { src, tgt, .. } => match (src.is_real_line(), tgt.is_real_line()) {
                (false, false) => Ok(DgAlgebraMap::identity(&self.proper)),
                (false, true) => Ok(self.to_line.clone()),
                (true, true) => Ok(DgAlgebraMap::identity(&self.line)),
                (true, false) => Err(Error::UnknownMorphism("no translation out of the whole line".into())),
            },
            _ => Err(Error::UnknownMorphism(format!("{f:?} is not a translation"))),
        }
    }
}

/// `A ∘ F`, evaluated lazily.
#[derive(Debug, Clone)]
pub struct PulledBack {
    pub functor: Functor,
    pub inner: Arc<dyn Realization>,
}

impl Realization for PulledBack {
    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn algebra(&self, x: &Obj) -> Result<AlgRef> {
        self.inner.algebra(&self.functor.map_obj(x)?)
    }

    fn action(&self, f: &Mor) -> Result<DgAlgebraMap> {
        self.inner.action(&self.functor.map_mor(f)?)
    }
}

#[derive(Clone, Debug)]
pub struct AqftModel {
    pub name: String,
    pub base: OrthoCat,
    pub realization: Arc<dyn Realization>,
}

impl AqftModel {
    pub fn new(name: impl Into<String>, base: OrthoCat, realization: Arc<dyn Realization>) -> AqftModel {
        AqftModel { name: name.into(), base, realization }
    }

    /// A table model over an enumerated category, from labels.
    pub fn from_tables(
        name: impl Into<String>,
        base: OrthoCat,
        algebras: &[(&str, AlgRef)],
        actions: Vec<(&str, BTreeMap<i64, Matrix>)>,
    ) -> Result<AqftModel> {
        let cat = base.cat.clone();
        let algs: BTreeMap<Obj, AlgRef> =
            algebras.iter().map(|(x, a)| Ok((cat.parse_obj(x)?, a.clone()))).collect::<Result<_>>()?;
        let get = |x: &Obj| algs.get(x).cloned().ok_or_else(|| Error::UnknownObject(cat.obj_label(x)));
        let mut acts = BTreeMap::new();
        for (f, comps) in actions {
            let f = cat.parse_mor(f)?;
            let map = DgAlgebraMap::new(get(&cat.source(&f)?)?, get(&cat.target(&f)?)?, comps)?;
            acts.insert(f, map);
        }
        let identities = cat
            .objects()
            .ok_or_else(|| Error::BackendUnsupported("table models need an enumerated category".into()))?
            .into_iter()
            .map(|x| Ok((cat.identity(&x)?, x)))
            .collect::<Result<_>>()?;
        Ok(AqftModel::new(name, base, Arc::new(TableRealization::new(algs, acts, identities))))
    }

    pub fn algebra(&self, x: &Obj) -> Result<AlgRef> {
        self.realization.algebra(x)
    }

    pub fn action(&self, f: &Mor) -> Result<DgAlgebraMap> {
        self.realization.action(f)
    }
}

pub const CHECK_FUNCTOR: &str = "functor laws";
pub const CHECK_ALGEBRA_MAPS: &str = "actions are dg-algebra maps";
pub const CHECK_CAUSALITY: &str = "Einstein causality";

/// Functoriality, well-typed algebra maps, and graded commutation of
/// observables along every orthogonal pair.
pub fn check_aqft(model: &AqftModel, cfg: &SampleConfig) -> Result<Report> {
    let cat = &model.base.cat;
    let mut report = Report::new(format!("field theory {}", model.name));

    let (mors, cov) = cat.morphism_sample(cfg, 81);
    let mut typed = None;
    for f in &mors {
        let ok = match model.action(f) {
            Ok(a) => a.source == model.algebra(&cat.source(f)?)? && a.target == model.algebra(&cat.target(f)?)?,
            Err(_) => false,
        };
        if !ok {
            typed = Some(vec![cat.mor_label(f)]);
            break;
        }
    }
    report.push(Verdict::from_outcome(CHECK_ALGEBRA_MAPS, cov, typed));

    let mut functor = None;
    let (objs, ocov) = cat.object_sample(cfg, 82);
    for x in &objs {
        let id = model.action(&cat.identity(x)?);
        if id.ok() != Some(DgAlgebraMap::identity(&model.algebra(x)?)) {
            functor = Some(vec![cat.obj_label(x)]);
            break;
        }
    }
    let (pairs, pcov) = cat.composable_pairs(cfg, 83);
    if functor.is_none() {
        for (g, f) in &pairs {
            let lhs = model.action(&cat.compose(g, f)?);
            let rhs = match (model.action(g), model.action(f)) {
                (Ok(ag), Ok(af)) => ag.after(&af).ok(),
                _ => None,
            };
            if lhs.ok() != rhs || rhs.is_none() {
                functor = Some(vec![cat.mor_label(g), cat.mor_label(f)]);
                break;
            }
        }
    }
    report.push(Verdict::from_outcome(CHECK_FUNCTOR, ocov.combine(pcov), functor));

    let (opairs, ccov) = model.base.rel.pair_sample(cat, cfg, 84)?;
    let mut causal = None;
    'pairs: for (f1, f2) in &opairs {
        if let Some(w) = commutator_witness(model, f1, f2)? {
            causal = Some(vec![cat.mor_label(f1), cat.mor_label(f2), w.0, w.1]);
            break 'pairs;
        }
    }
    report.push(Verdict::from_outcome(CHECK_CAUSALITY, ccov, causal));
    Ok(report)
}

/// Basis elements `a`, `b` with `A(f1)(a)·A(f2)(b) ≠ (-1)^{|a||b|} A(f2)(b)·A(f1)(a)`.
pub fn commutator_witness(model: &AqftModel, f1: &Mor, f2: &Mor) -> Result<Option<(String, String)>> {
    let (a1, a2) = (model.action(f1)?, model.action(f2)?);
    let target = a1.target.clone();
    for a in a1.source.basis() {
        let x = a1.component(a.0).apply(&a1.source.basis_vector(a));
        for b in a2.source.basis() {
            let y = a2.component(b.0).apply(&a2.source.basis_vector(b));
            let xy = target.mul(a.0, &x, b.0, &y);
            let s = sign(a.0 * b.0);
            let yx: Vec<_> = target.mul(b.0, &y, a.0, &x).into_iter().map(|v| &s * v).collect();
            if xy != yx {
                return Ok(Some((a1.source.label(a), a2.source.label(b))));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeSliceKind {
    Strict,
    HomotopyOnly,
    Neither,
}

impl fmt::Display for TimeSliceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeSliceKind::Strict => "strict",
            TimeSliceKind::HomotopyOnly => "homotopy-only",
            TimeSliceKind::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeSlice {
    pub kind: TimeSliceKind,
    pub coverage: Coverage,
    /// First morphism that is not sent to an isomorphism (for
    /// `homotopy-only`) or to a quasi-isomorphism (for `neither`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
}

impl TimeSlice {
    pub fn is_homotopy(&self) -> bool {
        self.kind != TimeSliceKind::Neither
    }
}

/// Members of `W` (all of them, or a sample over a parametric base).
pub fn w_sample(model: &AqftModel, w: &MorphismSet, cfg: &SampleConfig, stream: u64) -> Result<(Vec<Mor>, Coverage)> {
    let cat = &model.base.cat;
    let (mors, cov) = cat.morphism_sample(cfg, stream);
    let mut out = Vec::new();
    for f in mors {
        if w.contains(cat, &f)? {
            out.push(f);
        }
    }
    Ok((out, cov))
}

pub fn time_slice_verdict(model: &AqftModel, w: &MorphismSet, cfg: &SampleConfig) -> Result<TimeSlice> {
    let cat = &model.base.cat;
    let (members, coverage) = w_sample(model, w, cfg, 85)?;
    let mut first_non_iso = None;
    for f in &members {
        let a = model.action(f)?;
        if let Some(n) = a.chain().iso_witness() {
            if let Some(q) = a.chain().quasi_iso_witness() {
                return Ok(TimeSlice { kind: TimeSliceKind::Neither, coverage, witness: Some(cat.mor_label(f)), degree: Some(q) });
            }
            first_non_iso.get_or_insert((cat.mor_label(f), n));
        }
    }
    Ok(match first_non_iso {
        None => TimeSlice { kind: TimeSliceKind::Strict, coverage, witness: None, degree: None },
        Some((label, n)) => TimeSlice { kind: TimeSliceKind::HomotopyOnly, coverage, witness: Some(label), degree: Some(n) },
    })
}

/// `F*(A) = A ∘ F` on the orthogonal category `source`.
pub fn pullback_aqft(f: &Functor, source: &OrthoCat, model: &AqftModel) -> Result<AqftModel> {
    if !same_category(&f.target, &model.base.cat) || !source.is_over(&f.source) {
        return Err(Error::ShapeMismatch(format!("{} does not land in the base of {}", f.name, model.name)));
    }
    Ok(AqftModel::new(
        format!("{}*{}", f.name, model.name),
        source.clone(),
        Arc::new(PulledBack { functor: f.clone(), inner: model.realization.clone() }),
    ))
}

/// The free algebra map on `y(f)[r]` at every object: for `f: M -> N`, the
/// family `T(y(N)(X)[r]) -> T(y(M)(X)[r])` indexed by `X`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub morphism: String,
    pub shift: i64,
    pub components: BTreeMap<String, DgAlgebraMap>,
}

impl Generator {
    /// Blocks of the component at `x` between words of equal length. Free
    /// maps preserve word length, so these determine the component.
    pub fn weight_blocks(&self, x: &str) -> Option<BTreeMap<usize, Matrix>> {
        let map = self.components.get(x)?;
        let (sw, tw) = (map.source.weights()?, map.target.weights()?);
        let mut blocks: BTreeMap<usize, Vec<(i64, usize)>> = BTreeMap::new();
        let mut tblocks: BTreeMap<usize, Vec<(i64, usize)>> = BTreeMap::new();
        for (n, ws) in sw {
            for (i, k) in ws.iter().enumerate() {
                blocks.entry(*k).or_default().push((*n, i));
            }
        }
        for (n, ws) in tw {
            for (i, k) in ws.iter().enumerate() {
                tblocks.entry(*k).or_default().push((*n, i));
            }
        }
        let mut out = BTreeMap::new();
        for (k, cols) in &blocks {
            let rows = tblocks.get(k).cloned().unwrap_or_default();
            let mut m = Matrix::zeros(rows.len(), cols.len());
            for (j, c) in cols.iter().enumerate() {
                let comp = map.component(c.0);
                for (i, r) in rows.iter().enumerate() {
                    if r.0 == c.0 {
                        m.set(i, j, comp.get(r.1, c.1).clone());
                    }
                }
            }
            out.insert(*k, m);
        }
        Some(out)
    }
}

pub fn what_generators(base: &OrthoCat, w: &MorphismSet, shifts: RangeInclusive<i64>, max_weight: usize) -> Result<Vec<Generator>> {
    if !base.rel.is_empty() {
        return Err(Error::BackendUnsupported("generators are only computed for empty orthogonality".into()));
    }
    let cat = &base.cat;
    let objects = cat.objects().ok_or_else(|| Error::BackendUnsupported(format!("generators over parametric {}", cat.name())))?;
    let mut out = Vec::new();
    for f in w.members(cat)? {
        let (m, n) = (cat.source(&f)?, cat.target(&f)?);
        for r in shifts.clone() {
            let mut components = BTreeMap::new();
            for x in &objects {
                let pre = yoneda_pre(cat, &f, x)?.shift(r);
                let src = free_dga_labeled(&yoneda_complex(cat, &n, x)?.shift(r), max_weight, &[(r, hom_labels(cat, &n, x)?)].into())?;
                let tgt = free_dga_labeled(&yoneda_complex(cat, &m, x)?.shift(r), max_weight, &[(r, hom_labels(cat, &m, x)?)].into())?;
                components.insert(cat.obj_label(x), free_map(&pre, &src, &tgt)?);
            }
            out.push(Generator { morphism: cat.mor_label(&f), shift: r, components });
        }
    }
    Ok(out)
}

/// Naturality of a generator in the object variable: for `g: X -> Y`,
/// `T(y(M)(g)[r]) ∘ φ_X = φ_Y ∘ T(y(N)(g)[r])`.
pub fn generator_is_natural(base: &OrthoCat, gen: &Generator, max_weight: usize) -> Result<bool> {
    let cat = &base.cat;
    let f = cat.parse_mor(&gen.morphism)?;
    let (m, n) = (cat.source(&f)?, cat.target(&f)?);
    let r = gen.shift;
    for g in cat.morphisms().unwrap_or_default() {
        let (x, y) = (cat.source(&g)?, cat.target(&g)?);
        let free = |o: &Obj, z: &Obj| free_dga_labeled(&yoneda_complex(cat, o, z)?.shift(r), max_weight, &[(r, hom_labels(cat, o, z)?)].into());
        let post_n = free_map(&yoneda_post(cat, &n, &g)?.shift(r), &free(&n, &x)?, &free(&n, &y)?)?;
        let post_m = free_map(&yoneda_post(cat, &m, &g)?.shift(r), &free(&m, &x)?, &free(&m, &y)?)?;
        let phi_x = &gen.components[&cat.obj_label(&x)];
        let phi_y = &gen.components[&cat.obj_label(&y)];
        if post_m.after(phi_x)? != phi_y.after(&post_n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: the dimension vector of an algebra, for reports.
pub fn algebra_dims(a: &DgAlgebra) -> BTreeMap<i64, usize> {
    a.complex().dims().clone()
}
