//! Orthogonality relations, orthogonal functors, and transport of relations
//! along functors.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use crate::cat::functor::same_category;
use crate::cat::{BoxRegion, Builtin, CatRef, Category, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::rational::qf;
use crate::report::{Coverage, Report, SampleConfig, Verdict};

/// A symmetric, composition-stable relation on morphisms with a common target.
#[derive(Clone, Debug)]
pub enum OrthoRel {
    Empty,
    /// Unordered pairs, stored as `(min, max)`.
    Finite(BTreeSet<(Mor, Mor)>),
    /// Inclusions of disjoint boxes into a common box (`DiskBoxes` only).
    Disjointness,
    /// `{(f1, f2) : F(f1) ⊥ F(f2)}`, kept lazy for parametric sources.
    Pullback(Box<Functor>, Box<OrthoRel>),
}

fn norm(a: &Mor, b: &Mor) -> (Mor, Mor) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl OrthoRel {
    /// Stores pairs as given, without closing them. Use [`closure`] for seeds.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = &'a (Mor, Mor)>) -> OrthoRel {
        let set: BTreeSet<_> = pairs.into_iter().map(|(a, b)| norm(a, b)).collect();
        if set.is_empty() {
            OrthoRel::Empty
        } else {
            OrthoRel::Finite(set)
        }
    }

    pub fn by_name(name: &str) -> Result<OrthoRel> {
        match name {
            "empty" => Ok(OrthoRel::Empty),
            "disjointness" => Ok(OrthoRel::Disjointness),
            _ => Err(Error::Parse(format!("unknown built-in orthogonality `{name}`"))),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            OrthoRel::Empty => true,
            OrthoRel::Finite(s) => s.is_empty(),
            OrthoRel::Disjointness => false,
            OrthoRel::Pullback(_, r) => r.is_empty(),
        }
    }

    /// The unordered pairs of an explicit relation.
    pub fn unordered(&self) -> Option<&BTreeSet<(Mor, Mor)>> {
        match self {
            OrthoRel::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn contains(&self, cat: &Category, f1: &Mor, f2: &Mor) -> Result<bool> {
        match self {
            OrthoRel::Empty => Ok(false),
            OrthoRel::Finite(s) => Ok(s.contains(&norm(f1, f2))),
            OrthoRel::Disjointness => match (f1, f2) {
                (Mor::Incl { src: a, tgt: t1 }, Mor::Incl { src: b, tgt: t2 }) => Ok(t1 == t2 && a.disjoint(b)),
                _ => {
                    cat.check_mor(f1)?;
                    cat.check_mor(f2)?;
                    Ok(false)
                }
            },
            OrthoRel::Pullback(f, r) => r.contains(&f.target, &f.map_mor(f1)?, &f.map_mor(f2)?),
        }
    }

    /// Ordered pairs of the relation: all of them when the category is
    /// enumerated, otherwise a deterministic sample.
    pub fn pair_sample(&self, cat: &Category, cfg: &SampleConfig, stream: u64) -> Result<(Vec<(Mor, Mor)>, Coverage)> {
        match (self, cat) {
            (OrthoRel::Empty, _) => Ok((Vec::new(), Coverage::Exhaustive)),
            (OrthoRel::Finite(s), _) => {
                let mut out = Vec::with_capacity(2 * s.len());
                for (a, b) in s {
                    out.push((a.clone(), b.clone()));
                    if a != b {
                        out.push((b.clone(), a.clone()));
                    }
                }
                out.sort();
                Ok((out, Coverage::Exhaustive))
            }
            (_, Category::Enumerated(_)) => {
                let mut out = Vec::new();
                for y in cat.objects().expect("enumerated") {
                    let into = cat.morphisms_in(&y)?;
                    for f1 in &into {
                        for f2 in &into {
                            if self.contains(cat, f1, f2)? {
                                out.push((f1.clone(), f2.clone()));
                            }
                        }
                    }
                }
                Ok((out, Coverage::Exhaustive))
            }
            (OrthoRel::Disjointness, Category::Parametric(Builtin::DiskBoxes { dim })) => {
                let mut rng = cfg.rng(stream);
                let out = (0..cfg.samples).map(|_| sample_disjoint_pair(&mut rng, *dim)).collect();
                Ok((out, Coverage::Sampled(cfg.samples)))
            }
            (OrthoRel::Pullback(..), Category::Parametric(_)) | (OrthoRel::Disjointness, _) => {
                // Rejection sampling over cospans; the coverage counts tested cospans.
                let mut rng = cfg.rng(stream);
                let mut out = Vec::new();
                for _ in 0..cfg.samples {
                    let y = cat.sample_object(&mut rng);
                    let f1 = cat.sample_morphism_into(&mut rng, &y);
                    let f2 = cat.sample_morphism_into(&mut rng, &y);
                    if self.contains(cat, &f1, &f2)? {
                        out.push((f1, f2));
                    }
                }
                Ok((out, Coverage::Sampled(cfg.samples)))
            }
        }
    }

    /// Symmetry, common targets and composition stability.
    pub fn validate(&self, cat: &Category, cfg: &SampleConfig) -> Result<Report> {
        let mut report = Report::new(format!("orthogonality relation on {}", cat.name()));
        let (pairs, cov) = self.pair_sample(cat, cfg, 51)?;
        let mut target = None;
        let mut symmetric = None;
        for (a, b) in &pairs {
            if target.is_none() && cat.target(a)? != cat.target(b)? {
                target = Some(vec![cat.mor_label(a), cat.mor_label(b)]);
            }
            if symmetric.is_none() && !self.contains(cat, b, a)? {
                symmetric = Some(vec![cat.mor_label(b), cat.mor_label(a)]);
            }
        }
        report.push(Verdict::from_outcome("common target", cov, target));
        report.push(Verdict::from_outcome("symmetry", cov, symmetric));
        let stable = match cat {
            Category::Enumerated(_) => stability_exhaustive(self, cat, &pairs)?,
            Category::Parametric(_) => stability_sampled(self, cat, &pairs, cfg)?,
        };
        report.push(Verdict::from_outcome("composition stability", cov, stable));
        Ok(report)
    }
}

fn stability_exhaustive(rel: &OrthoRel, cat: &Category, pairs: &[(Mor, Mor)]) -> Result<Option<Vec<String>>> {
    for (a, b) in pairs {
        for (x, y) in successors(cat, a, b)? {
            if !rel.contains(cat, &x, &y)? {
                return Ok(Some(vec![cat.mor_label(a), cat.mor_label(b), cat.mor_label(&x), cat.mor_label(&y)]));
            }
        }
    }
    Ok(None)
}

fn stability_sampled(rel: &OrthoRel, cat: &Category, pairs: &[(Mor, Mor)], cfg: &SampleConfig) -> Result<Option<Vec<String>>> {
    let mut rng = cfg.rng(52);
    for (a, b) in pairs {
        let g = cat.sample_morphism_from(&mut rng, &cat.target(a)?);
        let h1 = cat.sample_morphism_into(&mut rng, &cat.source(a)?);
        let h2 = cat.sample_morphism_into(&mut rng, &cat.source(b)?);
        let x = cat.compose(&g, &cat.compose(a, &h1)?)?;
        let y = cat.compose(&g, &cat.compose(b, &h2)?)?;
        if !rel.contains(cat, &x, &y)? {
            return Ok(Some(vec![cat.mor_label(a), cat.mor_label(b), cat.mor_label(&x), cat.mor_label(&y)]));
        }
    }
    Ok(None)
}

/// One-step consequences of `a ⊥ b`: post-composition by a common `g`, and
/// pre-composition on either side.
fn successors(cat: &Category, a: &Mor, b: &Mor) -> Result<Vec<(Mor, Mor)>> {
    let mut out = vec![(b.clone(), a.clone())];
    for g in cat.morphisms_out(&cat.target(a)?)? {
        out.push((cat.compose(&g, a)?, cat.compose(&g, b)?));
    }
    for h in cat.morphisms_in(&cat.source(a)?)? {
        out.push((cat.compose(a, &h)?, b.clone()));
    }
    for h in cat.morphisms_in(&cat.source(b)?)? {
        out.push((a.clone(), cat.compose(b, &h)?));
    }
    Ok(out)
}

fn sample_disjoint_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (Mor, Mor) {
    let lo = qf(rng.gen_range(-8..=8), 2);
    let w = qf(rng.gen_range(2..=12), 2);
    let t = BoxRegion::cube(dim, lo.clone(), &lo + &w).expect("positive width");
    let cut = &lo + &w * qf(rng.gen_range(1..=3), 4);
    let mut left = t.clone();
    let mut right = t.clone();
    left.sides[0].1 = cut.clone() - &w * qf(rng.gen_range(0..=1), 16);
    right.sides[0].0 = cut + &w * qf(rng.gen_range(0..=1), 16);
    for side in left.sides.iter_mut().chain(right.sides.iter_mut()) {
        let shrink = (&side.1 - &side.0) * qf(rng.gen_range(0..=1), 8);
        side.0 += &shrink;
        side.1 -= &shrink;
    }
    let a = Mor::Incl { src: left, tgt: t.clone() };
    let b = Mor::Incl { src: right, tgt: t };
    if rng.gen_bool(0.5) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Smallest symmetric, composition-stable relation containing `seed`.
/// Worklist saturation over the finite morphism set; `O(|Mor|^4)` at worst.
pub fn closure(cat: &Category, seed: &[(Mor, Mor)]) -> Result<OrthoRel> {
    if !cat.is_enumerated() {
        return Err(Error::BackendUnsupported(format!("closure over parametric {}", cat.name())));
    }
    let mut set = BTreeSet::new();
    let mut queue = VecDeque::new();
    for (a, b) in seed {
        if cat.target(a)? != cat.target(b)? {
            return Err(Error::BadSeedPair(cat.mor_label(a), cat.mor_label(b)));
        }
        if set.insert(norm(a, b)) {
            queue.push_back((a.clone(), b.clone()));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        for (x, y) in successors(cat, &a, &b)? {
            if set.insert(norm(&x, &y)) {
                queue.push_back((x, y));
            }
        }
    }
    Ok(if set.is_empty() { OrthoRel::Empty } else { OrthoRel::Finite(set) })
}

/// Whether `F(f1) ⊥ F(f2)` for every `f1 ⊥ f2`. The witness is an ordered
/// source pair.
pub fn is_orthogonal_functor(f: &Functor, src: &OrthoRel, tgt: &OrthoRel, cfg: &SampleConfig) -> Result<Verdict> {
    let (pairs, cov) = src.pair_sample(&f.source, cfg, 61)?;
    for (a, b) in &pairs {
        if !tgt.contains(&f.target, &f.map_mor(a)?, &f.map_mor(b)?)? {
            return Ok(Verdict::fail(format!("{} orthogonal", f.name), cov, vec![f.source.mor_label(a), f.source.mor_label(b)]));
        }
    }
    Ok(Verdict::pass(format!("{} orthogonal", f.name), cov))
}

/// Closure of the image relation: the least relation making `F` orthogonal.
pub fn pushforward(f: &Functor, rel: &OrthoRel, cfg: &SampleConfig) -> Result<OrthoRel> {
    if rel.is_empty() {
        return Ok(OrthoRel::Empty);
    }
    if !f.target.is_enumerated() {
        return Err(Error::BackendUnsupported(format!("pushforward into parametric {}", f.target.name())));
    }
    let (pairs, cov) = rel.pair_sample(&f.source, cfg, 62)?;
    if cov != Coverage::Exhaustive {
        return Err(Error::BackendUnsupported(format!("pushforward of a sampled relation on {}", f.source.name())));
    }
    let image = pairs.iter().map(|(a, b)| Ok((f.map_mor(a)?, f.map_mor(b)?))).collect::<Result<Vec<_>>>()?;
    closure(&f.target, &image)
}

/// `{(f1, f2) : F(f1) ⊥ F(f2)}`; explicit when the source is enumerated.
pub fn pullback(f: &Functor, rel: &OrthoRel) -> Result<OrthoRel> {
    if rel.is_empty() {
        return Ok(OrthoRel::Empty);
    }
    let lazy = OrthoRel::Pullback(Box::new(f.clone()), Box::new(rel.clone()));
    if !f.source.is_enumerated() {
        return Ok(lazy);
    }
    let (pairs, _) = lazy.pair_sample(&f.source, &SampleConfig::default(), 0)?;
    Ok(OrthoRel::from_pairs(&pairs))
}

/// Equal as relations on an enumerated category; the witness is a pair in
/// exactly one of them.
pub fn same_relation(cat: &Category, a: &OrthoRel, b: &OrthoRel) -> Result<Option<(Mor, Mor)>> {
    let cfg = SampleConfig::default();
    let (pa, ca) = a.pair_sample(cat, &cfg, 0)?;
    let (pb, cb) = b.pair_sample(cat, &cfg, 0)?;
    if ca != Coverage::Exhaustive || cb != Coverage::Exhaustive {
        return Err(Error::BackendUnsupported("relation equality needs an enumerated category".into()));
    }
    for (x, y) in pa.iter().chain(&pb) {
        if a.contains(cat, x, y)? != b.contains(cat, x, y)? {
            return Ok(Some((x.clone(), y.clone())));
        }
    }
    Ok(None)
}

/// Fully faithful, essentially surjective, and `⊥_C = F*(⊥_D)`.
pub fn is_ortho_equivalence(f: &Functor, src: &OrthoRel, tgt: &OrthoRel) -> Result<Report> {
    if !f.source.is_enumerated() || !f.target.is_enumerated() {
        return Err(Error::BackendUnsupported("orthogonal equivalence needs enumerated categories".into()));
    }
    let mut report = Report::new(format!("orthogonal equivalence {}", f.name));
    report.push(f.fully_faithful(&SampleConfig::default())?);
    report.push(f.essentially_surjective()?);
    let pulled = pullback(f, tgt)?;
    let diff = same_relation(&f.source, src, &pulled)?;
    report.push(Verdict::from_outcome(
        "relation is pulled back",
        Coverage::Exhaustive,
        diff.map(|(x, y)| vec![f.source.mor_label(&x), f.source.mor_label(&y)]),
    ));
    Ok(report)
}

/// A category paired with an orthogonality relation.
#[derive(Clone, Debug)]
pub struct OrthoCat {
    pub cat: CatRef,
    pub rel: OrthoRel,
}

impl OrthoCat {
    pub fn new(cat: CatRef, rel: OrthoRel) -> OrthoCat {
        OrthoCat { cat, rel }
    }

    pub fn empty(cat: CatRef) -> OrthoCat {
        OrthoCat { cat, rel: OrthoRel::Empty }
    }

    pub fn is_over(&self, cat: &CatRef) -> bool {
        same_category(&self.cat, cat)
    }

    pub fn orthogonal(&self, f1: &Mor, f2: &Mor) -> Result<bool> {
        self.rel.contains(&self.cat, f1, f2)
    }

    pub fn parse_pairs(&self, pairs: &[(String, String)]) -> Result<Vec<(Mor, Mor)>> {
        pairs.iter().map(|(a, b)| Ok((self.cat.parse_mor(a)?, self.cat.parse_mor(b)?))).collect()
    }

    pub fn label_pairs(&self) -> Option<Vec<(String, String)>> {
        let set = self.rel.unordered()?;
        Some(set.iter().map(|(a, b)| (self.cat.mor_label(a), self.cat.mor_label(b))).collect())
    }

    /// The single object of a one-object category.
    pub fn sole_object(&self) -> Option<Obj> {
        match self.cat.objects() {
            Some(v) if v.len() == 1 => v.into_iter().next(),
            None => Some(Obj::Star),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FiniteCategory;

    fn cospan() -> CatRef {
        // M1 -> N <- M2
        Category::enumerated(
            FiniteCategory::from_preorder("cospan", vec!["M1".into(), "M2".into(), "N".into()], &[(0, 2), (1, 2)]).unwrap(),
        )
    }

    #[test]
    fn empty_seed_closes_to_empty() {
        assert!(closure(&cospan(), &[]).unwrap().is_empty());
    }

    #[test]
    fn cospan_closure_is_the_seed() {
        let c = cospan();
        let f1 = c.parse_mor("M1->N").unwrap();
        let f2 = c.parse_mor("M2->N").unwrap();
        let r = closure(&c, &[(f1.clone(), f2.clone())]).unwrap();
        assert_eq!(r.unordered().unwrap().len(), 1);
        assert!(r.contains(&c, &f2, &f1).unwrap());
        assert!(!r.contains(&c, &f1, &f1).unwrap());
        assert!(r.validate(&c, &SampleConfig::default()).unwrap().passed());
    }

    #[test]
    fn bad_seed_is_rejected() {
        let c = cospan();
        let f1 = c.parse_mor("M1->N").unwrap();
        let id = c.parse_mor("id_M1").unwrap();
        assert!(matches!(closure(&c, &[(f1, id)]), Err(Error::BadSeedPair(..))));
    }

    #[test]
    fn self_orthogonal_seed_spreads_down() {
        // A -> B -> C, seed (B->C, B->C).
        let c = Category::enumerated(
            FiniteCategory::from_preorder("chain", vec!["A".into(), "B".into(), "C".into()], &[(0, 1), (1, 2)]).unwrap(),
        );
        let g = c.parse_mor("B->C").unwrap();
        let gf = c.parse_mor("A->C").unwrap();
        let r = closure(&c, &[(g.clone(), g.clone())]).unwrap();
        assert!(r.contains(&c, &gf, &gf).unwrap());
        assert!(r.contains(&c, &g, &gf).unwrap());
    }

    #[test]
    fn disjointness_is_valid_on_samples() {
        let disk = Category::Parametric(Builtin::DiskBoxes { dim: 2 });
        let r = OrthoRel::Disjointness.validate(&disk, &SampleConfig::new(7, 64)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn identity_is_orthogonal_and_pullback_of_empty_is_empty() {
        let c = cospan();
        let id = Functor::identity(&c);
        let f1 = c.parse_mor("M1->N").unwrap();
        let f2 = c.parse_mor("M2->N").unwrap();
        let r = closure(&c, &[(f1, f2)]).unwrap();
        assert!(is_orthogonal_functor(&id, &r, &r, &SampleConfig::default()).unwrap().passed);
        assert!(pullback(&id, &OrthoRel::Empty).unwrap().is_empty());
        assert!(same_relation(&c, &pullback(&id, &r).unwrap(), &r).unwrap().is_none());
        assert!(same_relation(&c, &pushforward(&id, &r, &SampleConfig::default()).unwrap(), &r).unwrap().is_none());
        assert!(is_ortho_equivalence(&id, &r, &r).unwrap().passed());
    }
}
