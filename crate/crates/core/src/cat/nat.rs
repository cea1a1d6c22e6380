use std::collections::BTreeMap;

use super::functor::same_category;
use super::{CatRef, Functor, Interval, Mor, Obj};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::report::{Coverage, Report, SampleConfig, Verdict};

#[derive(Clone, Debug)]
pub enum Components {
    /// Explicit components; objects may be missing, which naturality reports.
    Table(BTreeMap<Obj, Mor>),
    /// Identity components, valid when both functors agree on objects.
    Identity,
    /// Component at an interval `I` is the zero translation `I -> ℝ`.
    IntervalToLine,
}

#[derive(Clone, Debug)]
pub struct NatTransf {
    pub name: String,
    pub source: Functor,
    pub target: Functor,
    pub components: Components,
}

impl NatTransf {
    pub fn new(name: impl Into<String>, source: Functor, target: Functor, components: Components) -> Result<NatTransf> {
        let name = name.into();
        if !same_category(&source.source, &target.source) || !same_category(&source.target, &target.target) {
            return Err(Error::ShapeMismatch(format!("{name}: {} and {} are not parallel", source.name, target.name)));
        }
        Ok(NatTransf { name, source, target, components })
    }

    pub fn domain(&self) -> &CatRef {
        &self.source.source
    }

    pub fn codomain(&self) -> &CatRef {
        &self.source.target
    }

    /// The component at `x`, or `None` when a table leaves it out.
    pub fn component(&self, x: &Obj) -> Result<Option<Mor>> {
        match &self.components {
            Components::Table(t) => Ok(t.get(x).cloned()),
            Components::Identity => Ok(Some(self.codomain().identity(&self.source.map_obj(x)?)?)),
            Components::IntervalToLine => match self.source.map_obj(x)? {
                Obj::Interval(i) => Ok(Some(Mor::Translate { src: i, tgt: Interval::real_line(), shift: Q::from_integer(0.into()) })),
                other => Err(Error::UnknownObject(format!("{other:?} is not an interval"))),
            },
        }
    }

    fn required(&self, x: &Obj) -> std::result::Result<Mor, Vec<String>> {
        match self.component(x) {
            Ok(Some(m)) => Ok(m),
            _ => Err(vec![format!("missing component at {}", self.domain().obj_label(x))]),
        }
    }

    /// Components have the right endpoints and every square
    /// `G(f) ∘ α_x = α_y ∘ F(f)` commutes.
    pub fn check_naturality(&self, check: &str, cfg: &SampleConfig) -> Result<Verdict> {
        let d = self.codomain();
        let (objs, ocov) = self.domain().object_sample(cfg, 31);
        for x in &objs {
            let a = match self.required(x) {
                Ok(a) => a,
                Err(w) => return Ok(Verdict::fail(check, ocov, w)),
            };
            let ok = d.check_mor(&a).is_ok()
                && d.source(&a)? == self.source.map_obj(x)?
                && d.target(&a)? == self.target.map_obj(x)?;
            if !ok {
                return Ok(Verdict::fail(check, ocov, vec![self.domain().obj_label(x)]).with_note("component has wrong endpoints"));
            }
        }
        let (mors, mcov) = self.domain().morphism_sample(cfg, 32);
        for f in &mors {
            let (x, y) = (self.domain().source(f)?, self.domain().target(f)?);
            let (ax, ay) = match (self.required(&x), self.required(&y)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(w), _) | (_, Err(w)) => return Ok(Verdict::fail(check, mcov, w)),
            };
            let lhs = d.compose(&self.target.map_mor(f)?, &ax)?;
            let rhs = d.compose(&ay, &self.source.map_mor(f)?)?;
            if lhs != rhs {
                return Ok(Verdict::fail(check, mcov, vec![self.domain().mor_label(f)]).with_note("naturality square does not commute"));
            }
        }
        Ok(Verdict::pass(check, ocov.combine(mcov)))
    }
}

/// `left ⊣ right` with unit `id → right∘left` and counit `left∘right → id`.
#[derive(Clone, Debug)]
pub struct AdjunctionData {
    pub left: Functor,
    pub right: Functor,
    pub unit: NatTransf,
    pub counit: NatTransf,
}

impl AdjunctionData {
    pub fn new(left: Functor, right: Functor, unit: Components, counit: Components) -> Result<AdjunctionData> {
        let c = left.source.clone();
        let d = left.target.clone();
        if !same_category(&right.source, &d) || !same_category(&right.target, &c) {
            return Err(Error::ShapeMismatch(format!("{} and {} do not form an adjoint pair shape", left.name, right.name)));
        }
        let unit = NatTransf::new("unit", Functor::identity(&c), left.then(&right)?, unit)?;
        let counit = NatTransf::new("counit", right.then(&left)?, Functor::identity(&d), counit)?;
        Ok(AdjunctionData { left, right, unit, counit })
    }

    pub fn base(&self) -> &CatRef {
        &self.left.source
    }

    pub fn localized(&self) -> &CatRef {
        &self.left.target
    }
}

/// Unit naturality, counit naturality and both triangle identities.
pub fn check_adjunction(adj: &AdjunctionData, cfg: &SampleConfig) -> Result<Report> {
    let c = adj.base().clone();
    let d = adj.localized().clone();
    if !same_category(adj.unit.domain(), &c) || !same_category(adj.counit.domain(), &d) {
        return Err(Error::ShapeMismatch("unit or counit lives on the wrong category".into()));
    }
    let mut report = Report::new(format!("adjunction {} ⊣ {}", adj.left.name, adj.right.name));
    report.push(adj.unit.check_naturality("unit naturality", cfg)?);
    report.push(adj.counit.check_naturality("counit naturality", cfg)?);

    // ε_{Lx} ∘ L(η_x) = id_{Lx}
    let (objs, cov) = c.object_sample(cfg, 41);
    let mut t1 = None;
    for x in &objs {
        let lx = adj.left.map_obj(x)?;
        let fail = match (adj.unit.component(x)?, adj.counit.component(&lx)?) {
            (Some(eta), Some(eps)) => {
                d.compose(&eps, &adj.left.map_mor(&eta)?).ok() != Some(d.identity(&lx)?)
            }
            _ => true,
        };
        if fail {
            t1 = Some(vec![c.obj_label(x)]);
            break;
        }
    }
    report.push(Verdict::from_outcome("triangle identity 1", cov, t1));

    // R(ε_y) ∘ η_{Ry} = id_{Ry}
    let (objs, cov) = d.object_sample(cfg, 42);
    let mut t2 = None;
    for y in &objs {
        let ry = adj.right.map_obj(y)?;
        let fail = match (adj.unit.component(&ry)?, adj.counit.component(y)?) {
            (Some(eta), Some(eps)) => {
                c.compose(&adj.right.map_mor(&eps)?, &eta).ok() != Some(c.identity(&ry)?)
            }
            _ => true,
        };
        if fail {
            t2 = Some(vec![d.obj_label(y)]);
            break;
        }
    }
    report.push(Verdict::from_outcome("triangle identity 2", cov, t2));
    Ok(report)
}

/// Helper for reports: whether every verdict covered its domain fully.
pub fn is_exhaustive(report: &Report) -> bool {
    report.coverage() == Coverage::Exhaustive
}
