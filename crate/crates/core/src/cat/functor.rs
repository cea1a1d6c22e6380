use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CatRef, Category, Interval, Mor, Obj};
use crate::error::{Error, Result};
use crate::report::{Coverage, Report, SampleConfig, Verdict};

#[derive(Clone, Debug)]
pub enum FunctorKind {
    Identity,
    /// Explicit tables; the source must be enumerated. Identities missing
    /// from the morphism table go to the identity of the image object.
    Table { objects: BTreeMap<Obj, Obj>, morphisms: BTreeMap<Mor, Mor> },
    /// Every object to `object`, every morphism to its identity.
    Constant { object: Obj },
    /// `Loc1Skeletal -> BRdelta`, `f[ξ] ↦ ξ`.
    Loc1Collapse,
    /// `BRdelta -> Loc1Skeletal`, `ξ ↦ f[ξ]` on the real line.
    Loc1Line,
    /// `first` followed by `second`.
    Composite(Box<Functor>, Box<Functor>),
}

#[derive(Clone, Debug)]
pub struct Functor {
    pub name: String,
    pub source: CatRef,
    pub target: CatRef,
    pub kind: FunctorKind,
}

impl Functor {
    pub fn identity(cat: &CatRef) -> Functor {
        Functor { name: format!("id_{}", cat.name()), source: cat.clone(), target: cat.clone(), kind: FunctorKind::Identity }
    }

    pub fn constant(name: impl Into<String>, source: &CatRef, target: &CatRef, object: Obj) -> Result<Functor> {
        target.check_obj(&object)?;
        Ok(Functor { name: name.into(), source: source.clone(), target: target.clone(), kind: FunctorKind::Constant { object } })
    }

    /// Builds a table functor from labels, resolving them in the two categories.
    pub fn from_labels(
        name: impl Into<String>,
        source: &CatRef,
        target: &CatRef,
        objects: &[(&str, &str)],
        morphisms: &[(&str, &str)],
    ) -> Result<Functor> {
        let objects = objects
            .iter()
            .map(|(a, b)| Ok((source.parse_obj(a)?, target.parse_obj(b)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let morphisms = morphisms
            .iter()
            .map(|(a, b)| Ok((source.parse_mor(a)?, target.parse_mor(b)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Functor::table(name, source, target, objects, morphisms)
    }

    pub fn table(
        name: impl Into<String>,
        source: &CatRef,
        target: &CatRef,
        objects: BTreeMap<Obj, Obj>,
        morphisms: BTreeMap<Mor, Mor>,
    ) -> Result<Functor> {
        let all_objects = source
            .objects()
            .ok_or_else(|| Error::BackendUnsupported(format!("table functor out of parametric {}", source.name())))?;
        for x in &all_objects {
            let y = objects.get(x).ok_or_else(|| Error::ShapeMismatch(format!("object {} has no image", source.obj_label(x))))?;
            target.check_obj(y)?;
        }
        for f in source.morphisms().expect("enumerated") {
            match morphisms.get(&f) {
                Some(g) => target.check_mor(g)?,
                None if source.is_identity(&f)? => {}
                None => return Err(Error::ShapeMismatch(format!("morphism {} has no image", source.mor_label(&f)))),
            }
        }
        Ok(Functor { name: name.into(), source: source.clone(), target: target.clone(), kind: FunctorKind::Table { objects, morphisms } })
    }

    /// `L: Loc1Skeletal -> BRdelta`.
    pub fn loc1_collapse(source: &CatRef, target: &CatRef) -> Functor {
        Functor { name: "L".into(), source: source.clone(), target: target.clone(), kind: FunctorKind::Loc1Collapse }
    }

    /// `j: BRdelta -> Loc1Skeletal`.
    pub fn loc1_line(source: &CatRef, target: &CatRef) -> Functor {
        Functor { name: "j".into(), source: source.clone(), target: target.clone(), kind: FunctorKind::Loc1Line }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Functor) -> Result<Functor> {
        if !Arc::ptr_eq(&self.target, &next.source) && self.target.name() != next.source.name() {
            return Err(Error::ShapeMismatch(format!("cannot compose {} with {}", self.name, next.name)));
        }
        Ok(Functor {
            name: format!("{}∘{}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            kind: FunctorKind::Composite(Box::new(self.clone()), Box::new(next.clone())),
        })
    }

    pub fn map_obj(&self, x: &Obj) -> Result<Obj> {
        self.source.check_obj(x)?;
        match &self.kind {
            FunctorKind::Identity => Ok(x.clone()),
            FunctorKind::Table { objects, .. } => {
                objects.get(x).cloned().ok_or_else(|| Error::UnknownObject(self.source.obj_label(x)))
            }
            FunctorKind::Constant { object } => Ok(object.clone()),
            FunctorKind::Loc1Collapse => Ok(Obj::Star),
            FunctorKind::Loc1Line => Ok(Obj::Interval(Interval::real_line())),
            FunctorKind::Composite(a, b) => b.map_obj(&a.map_obj(x)?),
        }
    }

    pub fn map_mor(&self, f: &Mor) -> Result<Mor> {
        self.source.check_mor(f)?;
        match &self.kind {
            FunctorKind::Identity => Ok(f.clone()),
            FunctorKind::Table { morphisms, .. } => match morphisms.get(f) {
                Some(g) => Ok(g.clone()),
                None => {
                    let x = self.source.source(f)?;
                    if self.source.is_identity(f)? {
                        self.target.identity(&self.map_obj(&x)?)
                    } else {
                        Err(Error::UnknownMorphism(self.source.mor_label(f)))
                    }
                }
            },
            FunctorKind::Constant { object } => self.target.identity(object),
            FunctorKind::Loc1Collapse => match f {
                Mor::Translate { shift, .. } => Ok(Mor::Real(shift.clone())),
                _ => Err(Error::UnknownMorphism(format!("{f:?}"))),
            },
            FunctorKind::Loc1Line => match f {
                Mor::Real(x) => Ok(Mor::Translate { src: Interval::real_line(), tgt: Interval::real_line(), shift: x.clone() }),
                _ => Err(Error::UnknownMorphism(format!("{f:?}"))),
            },
            FunctorKind::Composite(a, b) => b.map_mor(&a.map_mor(f)?),
        }
    }

    /// A morphism `f: a -> b` with `F(f) = h`, if one exists.
    pub fn preimage(&self, a: &Obj, b: &Obj, h: &Mor) -> Result<Option<Mor>> {
        if self.source.is_enumerated() {
            for f in self.source.hom(a, b)? {
                if self.map_mor(&f)? == *h {
                    return Ok(Some(f));
                }
            }
            return Ok(None);
        }
        match &self.kind {
            FunctorKind::Identity => Ok(Some(h.clone())),
            FunctorKind::Constant { object } => {
                Ok((*h == self.target.identity(object)?).then(|| self.source.identity(a)).transpose()?)
            }
            FunctorKind::Loc1Collapse => match (a, b, h) {
                (Obj::Interval(x), Obj::Interval(y), Mor::Real(xi)) => {
                    Ok(x.admits_shift(y, xi).then(|| Mor::Translate { src: x.clone(), tgt: y.clone(), shift: xi.clone() }))
                }
                _ => Ok(None),
            },
            FunctorKind::Loc1Line => match h {
                Mor::Translate { src, tgt, shift } if src.is_real_line() && tgt.is_real_line() => Ok(Some(Mor::Real(shift.clone()))),
                _ => Ok(None),
            },
            FunctorKind::Table { .. } | FunctorKind::Composite(..) => {
                Err(Error::BackendUnsupported(format!("preimages along {}", self.name)))
            }
        }
    }

    /// Functor laws: endpoints, identities and composition.
    pub fn check(&self, cfg: &SampleConfig) -> Result<Report> {
        let mut report = Report::new(format!("functor laws of {}", self.name));
        let (objs, ocov) = self.source.object_sample(cfg, 11);
        let mut ident = None;
        for x in &objs {
            let fx = self.map_obj(x)?;
            if self.map_mor(&self.source.identity(x)?)? != self.target.identity(&fx)? {
                ident = Some(vec![self.source.obj_label(x)]);
                break;
            }
        }
        report.push(Verdict::from_outcome("preserves identities", ocov, ident));
        let (mors, mcov) = self.source.morphism_sample(cfg, 12);
        let mut ends = None;
        for f in &mors {
            let ff = self.map_mor(f)?;
            if self.target.source(&ff)? != self.map_obj(&self.source.source(f)?)?
                || self.target.target(&ff)? != self.map_obj(&self.source.target(f)?)?
            {
                ends = Some(vec![self.source.mor_label(f)]);
                break;
            }
        }
        report.push(Verdict::from_outcome("preserves endpoints", mcov, ends));
        let (pairs, pcov) = self.source.composable_pairs(cfg, 13);
        let mut comp = None;
        for (g, f) in &pairs {
            let lhs = self.map_mor(&self.source.compose(g, f)?)?;
            let rhs = self.target.compose(&self.map_mor(g)?, &self.map_mor(f)?);
            if rhs.as_ref().ok() != Some(&lhs) {
                comp = Some(vec![self.source.mor_label(g), self.source.mor_label(f)]);
                break;
            }
        }
        report.push(Verdict::from_outcome("preserves composition", pcov, comp));
        Ok(report)
    }

    /// Fully faithful: every hom map `C(a,b) -> D(Fa,Fb)` is bijective.
    /// Exhaustive when both categories are enumerated; otherwise faithfulness
    /// is probed on sampled parallel pairs and fullness by preimage search.
    pub fn fully_faithful(&self, cfg: &SampleConfig) -> Result<Verdict> {
        const CHECK: &str = "fully faithful";
        if let (Some(_), Some(_)) = (self.source.as_finite(), self.target.as_finite()) {
            let objs = self.source.objects().expect("enumerated");
            for a in &objs {
                for b in &objs {
                    let (fa, fb) = (self.map_obj(a)?, self.map_obj(b)?);
                    let src_hom = self.source.hom(a, b)?;
                    let mut images: BTreeMap<Mor, Mor> = BTreeMap::new();
                    for f in &src_hom {
                        let img = self.map_mor(f)?;
                        if let Some(prev) = images.insert(img, f.clone()) {
                            return Ok(Verdict::fail(CHECK, Coverage::Exhaustive, vec![self.source.mor_label(&prev), self.source.mor_label(f)])
                                .with_note("not faithful: distinct morphisms with equal image"));
                        }
                    }
                    for h in self.target.hom(&fa, &fb)? {
                        if !images.contains_key(&h) {
                            return Ok(Verdict::fail(CHECK, Coverage::Exhaustive, vec![self.target.mor_label(&h)])
                                .with_note(format!("not full: no preimage in hom({}, {})", self.source.obj_label(a), self.source.obj_label(b))));
                        }
                    }
                }
            }
            return Ok(Verdict::pass(CHECK, Coverage::Exhaustive));
        }
        let mut rng = cfg.rng(21);
        let n = cfg.samples;
        for _ in 0..n {
            let a = self.source.sample_object(&mut rng);
            let f = self.source.sample_morphism_from(&mut rng, &a);
            let b = self.source.target(&f)?;
            if let Some(g) = self.source.sample_hom(&mut rng, &a, &b) {
                if g != f && self.map_mor(&g)? == self.map_mor(&f)? {
                    return Ok(Verdict::fail(CHECK, Coverage::Sampled(n), vec![self.source.mor_label(&f), self.source.mor_label(&g)])
                        .with_note("not faithful: distinct morphisms with equal image"));
                }
            }
            // Probe a second, independent parallel morphism as well: `f` and a
            // fresh sample may coincide for small hom-sets.
            let (fa, fb) = (self.map_obj(&a)?, self.map_obj(&b)?);
            if let Some(h) = self.target.sample_hom(&mut rng, &fa, &fb) {
                if self.preimage(&a, &b, &h)?.is_none() {
                    return Ok(Verdict::fail(CHECK, Coverage::Sampled(n), vec![self.target.mor_label(&h)])
                        .with_note(format!("not full: no preimage in hom({}, {})", self.source.obj_label(&a), self.source.obj_label(&b))));
                }
            }
        }
        Ok(Verdict::pass(CHECK, Coverage::Sampled(n)))
    }

    /// Every target object is isomorphic to an image object. Enumerated only.
    pub fn essentially_surjective(&self) -> Result<Verdict> {
        let (Some(_), Some(tc)) = (self.source.as_finite(), self.target.as_finite()) else {
            return Err(Error::BackendUnsupported("essential surjectivity needs enumerated categories".into()));
        };
        let images: Vec<Obj> =
            self.source.objects().expect("enumerated").iter().map(|x| self.map_obj(x)).collect::<Result<_>>()?;
        for y in self.target.objects().expect("enumerated") {
            let hit = images.iter().any(|fx| {
                *fx == y
                    || self
                        .target
                        .hom(fx, &y)
                        .map(|hs| hs.iter().any(|h| self.target.is_isomorphism(h).ok().flatten().is_some()))
                        .unwrap_or(false)
            });
            if !hit {
                let _ = tc;
                return Ok(Verdict::fail("essentially surjective", Coverage::Exhaustive, vec![self.target.obj_label(&y)]));
            }
        }
        Ok(Verdict::pass("essentially surjective", Coverage::Exhaustive))
    }
}

/// Whether two categories are the same instance (or structurally the same built-in).
pub fn same_category(a: &CatRef, b: &CatRef) -> bool {
    Arc::ptr_eq(a, b)
        || match (a.as_ref(), b.as_ref()) {
            (Category::Parametric(x), Category::Parametric(y)) => x == y,
            _ => false,
        }
}
