//! Small categories with two backends: enumerated (finite tables) and
//! parametric (closed-form built-ins), plus functors, natural
//! transformations and adjunctions between them.

pub mod builtin;
pub mod finite;
pub mod functor;
pub mod nat;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use builtin::{BoxRegion, Builtin, Interval};
pub use finite::FiniteCategory;
pub use functor::{Functor, FunctorKind};
pub use nat::{check_adjunction, AdjunctionData, Components, NatTransf};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::report::{Coverage, Report, SampleConfig, Verdict};

/// An object of some category. Which variants are valid depends on the
/// backend: enumerated categories use `Idx`, one-object groups use `Star`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Obj {
    Idx(usize),
    Star,
    Interval(Interval),
    Region(BoxRegion),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mor {
    Idx(usize),
    Int(BigInt),
    Real(Q),
    Translate { src: Interval, tgt: Interval, shift: Q },
    Incl { src: BoxRegion, tgt: BoxRegion },
}

#[derive(Clone, Debug)]
pub enum Category {
    Enumerated(FiniteCategory),
    Parametric(Builtin),
}

pub type CatRef = Arc<Category>;

impl Category {
    pub fn enumerated(c: FiniteCategory) -> CatRef {
        Arc::new(Category::Enumerated(c))
    }

    pub fn builtin(b: Builtin) -> CatRef {
        Arc::new(Category::Parametric(b))
    }

    pub fn name(&self) -> String {
        match self {
            Category::Enumerated(c) => c.name().to_string(),
            Category::Parametric(b) => b.name().to_string(),
        }
    }

    pub fn is_enumerated(&self) -> bool {
        matches!(self, Category::Enumerated(_))
    }

    pub fn as_finite(&self) -> Option<&FiniteCategory> {
        match self {
            Category::Enumerated(c) => Some(c),
            Category::Parametric(_) => None,
        }
    }

    fn fin_mor(c: &FiniteCategory, f: &Mor) -> Result<usize> {
        match f {
            Mor::Idx(i) if *i < c.morphism_count() => Ok(*i),
            _ => Err(Error::UnknownMorphism(format!("{f:?} in {}", c.name()))),
        }
    }

    fn fin_obj(c: &FiniteCategory, x: &Obj) -> Result<usize> {
        match x {
            Obj::Idx(i) if *i < c.object_count() => Ok(*i),
            _ => Err(Error::UnknownObject(format!("{x:?} in {}", c.name()))),
        }
    }

    pub fn check_obj(&self, x: &Obj) -> Result<()> {
        match self {
            Category::Enumerated(c) => Self::fin_obj(c, x).map(|_| ()),
            Category::Parametric(b) => b.check_obj(x),
        }
    }

    pub fn check_mor(&self, f: &Mor) -> Result<()> {
        match self {
            Category::Enumerated(c) => Self::fin_mor(c, f).map(|_| ()),
            Category::Parametric(b) => b.check_mor(f),
        }
    }

    pub fn source(&self, f: &Mor) -> Result<Obj> {
        match self {
            Category::Enumerated(c) => Ok(Obj::Idx(c.morphism(Self::fin_mor(c, f)?).src)),
            Category::Parametric(b) => b.source(f),
        }
    }

    pub fn target(&self, f: &Mor) -> Result<Obj> {
        match self {
            Category::Enumerated(c) => Ok(Obj::Idx(c.morphism(Self::fin_mor(c, f)?).tgt)),
            Category::Parametric(b) => b.target(f),
        }
    }

    pub fn identity(&self, x: &Obj) -> Result<Mor> {
        match self {
            Category::Enumerated(c) => Ok(Mor::Idx(c.identity(Self::fin_obj(c, x)?))),
            Category::Parametric(b) => b.identity(x),
        }
    }

    pub fn is_identity(&self, f: &Mor) -> Result<bool> {
        Ok(self.identity(&self.source(f)?)? == *f)
    }

    /// `g ∘ f`, defined when `target(f) = source(g)`.
    pub fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        match self {
            Category::Enumerated(c) => {
                let (gi, fi) = (Self::fin_mor(c, g)?, Self::fin_mor(c, f)?);
                c.compose(gi, fi).map(Mor::Idx).ok_or_else(|| {
                    Error::NonComposable(format!("{} ∘ {}", c.morphism(gi).id, c.morphism(fi).id))
                })
            }
            Category::Parametric(b) => b.compose(g, f),
        }
    }

    /// Composite of a path given in diagrammatic order (first morphism first).
    pub fn compose_path(&self, path: &[Mor]) -> Result<Mor> {
        let (first, rest) = path.split_first().ok_or_else(|| Error::ShapeMismatch("empty path".into()))?;
        rest.iter().try_fold(first.clone(), |acc, g| self.compose(g, &acc))
    }

    /// Returns the inverse when `f` is an isomorphism. Enumerated backends
    /// search exhaustively; parametric ones use their closed-form predicate.
    pub fn is_isomorphism(&self, f: &Mor) -> Result<Option<Mor>> {
        match self {
            Category::Enumerated(c) => Ok(c.inverse(Self::fin_mor(c, f)?).map(Mor::Idx)),
            Category::Parametric(b) => b.inverse(f),
        }
    }

    pub fn objects(&self) -> Option<Vec<Obj>> {
        self.as_finite().map(|c| (0..c.object_count()).map(Obj::Idx).collect())
    }

    pub fn morphisms(&self) -> Option<Vec<Mor>> {
        self.as_finite().map(|c| (0..c.morphism_count()).map(Mor::Idx).collect())
    }

    pub fn hom(&self, a: &Obj, b: &Obj) -> Result<Vec<Mor>> {
        match self {
            Category::Enumerated(c) => {
                Ok(c.hom(Self::fin_obj(c, a)?, Self::fin_obj(c, b)?).into_iter().map(Mor::Idx).collect())
            }
            Category::Parametric(b0) => Err(Error::BackendUnsupported(format!("hom-set enumeration in {}", b0.name()))),
        }
    }

    pub fn morphisms_out(&self, a: &Obj) -> Result<Vec<Mor>> {
        match self {
            Category::Enumerated(c) => Ok(c.outgoing(Self::fin_obj(c, a)?).iter().map(|&m| Mor::Idx(m)).collect()),
            Category::Parametric(b) => Err(Error::BackendUnsupported(format!("enumeration in {}", b.name()))),
        }
    }

    pub fn morphisms_in(&self, a: &Obj) -> Result<Vec<Mor>> {
        match self {
            Category::Enumerated(c) => Ok(c.incoming(Self::fin_obj(c, a)?).iter().map(|&m| Mor::Idx(m)).collect()),
            Category::Parametric(b) => Err(Error::BackendUnsupported(format!("enumeration in {}", b.name()))),
        }
    }

    pub fn obj_label(&self, x: &Obj) -> String {
        match (self, x) {
            (Category::Enumerated(c), Obj::Idx(i)) if *i < c.object_count() => c.object_name(*i).to_string(),
            (Category::Parametric(b), _) => b.obj_label(x),
            _ => format!("{x:?}"),
        }
    }

    pub fn mor_label(&self, f: &Mor) -> String {
        match (self, f) {
            (Category::Enumerated(c), Mor::Idx(i)) if *i < c.morphism_count() => c.morphism(*i).id.clone(),
            (Category::Parametric(b), _) => b.mor_label(f),
            _ => format!("{f:?}"),
        }
    }

    pub fn parse_obj(&self, s: &str) -> Result<Obj> {
        match self {
            Category::Enumerated(c) => c.object_id(s.trim()).map(Obj::Idx).ok_or_else(|| Error::UnknownObject(s.to_string())),
            Category::Parametric(b) => b.parse_obj(s),
        }
    }

    pub fn parse_mor(&self, s: &str) -> Result<Mor> {
        match self {
            Category::Enumerated(c) => {
                c.morphism_id(s.trim()).map(Mor::Idx).ok_or_else(|| Error::UnknownMorphism(s.to_string()))
            }
            Category::Parametric(b) => b.parse_mor(s),
        }
    }

    // ---- sampling ---------------------------------------------------------

    pub fn sample_object<R: Rng + ?Sized>(&self, rng: &mut R) -> Obj {
        match self {
            Category::Enumerated(c) => Obj::Idx(rng.gen_range(0..c.object_count())),
            Category::Parametric(b) => b.sample_object(rng),
        }
    }

    pub fn sample_morphism<R: Rng + ?Sized>(&self, rng: &mut R) -> Mor {
        let x = self.sample_object(rng);
        self.sample_morphism_from(rng, &x)
    }

    pub fn sample_morphism_from<R: Rng + ?Sized>(&self, rng: &mut R, x: &Obj) -> Mor {
        match (self, x) {
            (Category::Enumerated(c), Obj::Idx(i)) => Mor::Idx(*c.outgoing(*i).choose(rng).expect("identity exists")),
            (Category::Parametric(b), _) => b.sample_morphism_from(rng, x),
            _ => panic!("object {x:?} does not belong to {}", self.name()),
        }
    }

    pub fn sample_morphism_into<R: Rng + ?Sized>(&self, rng: &mut R, y: &Obj) -> Mor {
        match (self, y) {
            (Category::Enumerated(c), Obj::Idx(i)) => Mor::Idx(*c.incoming(*i).choose(rng).expect("identity exists")),
            (Category::Parametric(b), _) => b.sample_morphism_into(rng, y),
            _ => panic!("object {y:?} does not belong to {}", self.name()),
        }
    }

    pub fn sample_hom<R: Rng + ?Sized>(&self, rng: &mut R, x: &Obj, y: &Obj) -> Option<Mor> {
        match (self, x, y) {
            (Category::Enumerated(c), Obj::Idx(a), Obj::Idx(b)) => c.hom(*a, *b).choose(rng).map(|&m| Mor::Idx(m)),
            (Category::Parametric(b), _, _) => b.sample_hom(rng, x, y),
            _ => None,
        }
    }

    /// All objects (enumerated) or a deterministic sample.
    pub fn object_sample(&self, cfg: &SampleConfig, stream: u64) -> (Vec<Obj>, Coverage) {
        match self.objects() {
            Some(all) => (all, Coverage::Exhaustive),
            None => {
                let mut rng = cfg.rng(stream);
                ((0..cfg.samples).map(|_| self.sample_object(&mut rng)).collect(), Coverage::Sampled(cfg.samples))
            }
        }
    }

    pub fn morphism_sample(&self, cfg: &SampleConfig, stream: u64) -> (Vec<Mor>, Coverage) {
        match self.morphisms() {
            Some(all) => (all, Coverage::Exhaustive),
            None => {
                let mut rng = cfg.rng(stream);
                ((0..cfg.samples).map(|_| self.sample_morphism(&mut rng)).collect(), Coverage::Sampled(cfg.samples))
            }
        }
    }

    /// Pairs `(g, f)` with `g ∘ f` defined.
    pub fn composable_pairs(&self, cfg: &SampleConfig, stream: u64) -> (Vec<(Mor, Mor)>, Coverage) {
        match self.as_finite() {
            Some(c) => {
                let mut out = Vec::new();
                for f in 0..c.morphism_count() {
                    for &g in c.outgoing(c.morphism(f).tgt) {
                        out.push((Mor::Idx(g), Mor::Idx(f)));
                    }
                }
                (out, Coverage::Exhaustive)
            }
            None => {
                let mut rng = cfg.rng(stream);
                let out = (0..cfg.samples)
                    .map(|_| {
                        let f = self.sample_morphism(&mut rng);
                        let y = self.target(&f).expect("sampled morphism is valid");
                        let g = self.sample_morphism_from(&mut rng, &y);
                        (g, f)
                    })
                    .collect();
                (out, Coverage::Sampled(cfg.samples))
            }
        }
    }

    /// Triples `(h, g, f)` with `h ∘ g ∘ f` defined.
    pub fn composable_triples(&self, cfg: &SampleConfig, stream: u64) -> (Vec<(Mor, Mor, Mor)>, Coverage) {
        match self.as_finite() {
            Some(c) => {
                let mut out = Vec::new();
                for f in 0..c.morphism_count() {
                    for &g in c.outgoing(c.morphism(f).tgt) {
                        for &h in c.outgoing(c.morphism(g).tgt) {
                            out.push((Mor::Idx(h), Mor::Idx(g), Mor::Idx(f)));
                        }
                    }
                }
                (out, Coverage::Exhaustive)
            }
            None => {
                let mut rng = cfg.rng(stream);
                let out = (0..cfg.samples)
                    .map(|_| {
                        let f = self.sample_morphism(&mut rng);
                        let g = self.sample_morphism_from(&mut rng, &self.target(&f).expect("valid"));
                        let h = self.sample_morphism_from(&mut rng, &self.target(&g).expect("valid"));
                        (h, g, f)
                    })
                    .collect();
                (out, Coverage::Sampled(cfg.samples))
            }
        }
    }

    /// Category laws: endpoints of composites, unitality and associativity.
    /// Exhaustive for enumerated backends, sampled otherwise.
    pub fn check_laws(&self, cfg: &SampleConfig) -> Result<Report> {
        let mut report = Report::new(format!("category laws of {}", self.name()));
        let (pairs, cov) = self.composable_pairs(cfg, 1);
        let mut endpoints = None;
        let mut unit = None;
        for (g, f) in &pairs {
            let gf = self.compose(g, f)?;
            if self.source(&gf)? != self.source(f)? || self.target(&gf)? != self.target(g)? {
                endpoints.get_or_insert_with(|| vec![self.mor_label(g), self.mor_label(f)]);
            }
            let id_t = self.identity(&self.target(f)?)?;
            let id_s = self.identity(&self.source(f)?)?;
            if self.compose(&id_t, f)? != *f || self.compose(f, &id_s)? != *f {
                unit.get_or_insert_with(|| vec![self.mor_label(f)]);
            }
        }
        report.push(Verdict::from_outcome("composite endpoints", cov, endpoints));
        report.push(Verdict::from_outcome("unitality", cov, unit));
        let (triples, cov) = self.composable_triples(cfg, 2);
        let mut assoc = None;
        for (h, g, f) in &triples {
            let left = self.compose(h, &self.compose(g, f)?)?;
            let right = self.compose(&self.compose(h, g)?, f)?;
            if left != right {
                assoc = Some(vec![self.mor_label(h), self.mor_label(g), self.mor_label(f)]);
                break;
            }
        }
        report.push(Verdict::from_outcome("associativity", cov, assoc));
        Ok(report)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
