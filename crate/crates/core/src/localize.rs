//! Localizations of orthogonal categories: certification of reflective data,
//! the class `W` of morphisms inverted by a reflection, and evaluation of
//! zig-zags in a supplied localized category.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cat::{check_adjunction, AdjunctionData, Category, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::ortho::{is_orthogonal_functor, pullback, pushforward, same_relation, OrthoCat, OrthoRel};
use crate::report::{Coverage, Report, SampleConfig, Verdict};

/// A class of morphisms of some category.
#[derive(Clone, Debug)]
pub enum MorphismSet {
    All,
    Finite(BTreeSet<Mor>),
    /// Morphisms sent to isomorphisms by the functor.
    IsoPreimage(Box<Functor>),
}

impl MorphismSet {
    pub fn contains(&self, cat: &Category, f: &Mor) -> Result<bool> {
        cat.check_mor(f)?;
        match self {
            MorphismSet::All => Ok(true),
            MorphismSet::Finite(s) => Ok(s.contains(f)),
            MorphismSet::IsoPreimage(l) => Ok(l.target.is_isomorphism(&l.map_mor(f)?)?.is_some()),
        }
    }

    /// Explicit members over an enumerated category.
    pub fn members(&self, cat: &Category) -> Result<Vec<Mor>> {
        let all = cat
            .morphisms()
            .ok_or_else(|| Error::BackendUnsupported(format!("listing morphisms of parametric {}", cat.name())))?;
        let mut out = Vec::new();
        for f in all {
            if self.contains(cat, &f)? {
                out.push(f);
            }
        }
        Ok(out)
    }

    pub fn parse(cat: &Category, spec: &[String]) -> Result<MorphismSet> {
        if spec.len() == 1 && spec[0] == "all" {
            return Ok(MorphismSet::All);
        }
        Ok(MorphismSet::Finite(spec.iter().map(|s| cat.parse_mor(s)).collect::<Result<_>>()?))
    }
}

/// `W = L⁻¹(Iso)`; explicit when the source of `L` is enumerated.
pub fn derive_w(l: &Functor) -> Result<MorphismSet> {
    let lazy = MorphismSet::IsoPreimage(Box::new(l.clone()));
    if !l.source.is_enumerated() {
        return Ok(lazy);
    }
    Ok(MorphismSet::Finite(lazy.members(&l.source)?.into_iter().collect()))
}

/// Whether `W` contains every morphism (exhaustive or sampled).
pub fn contains_everything(w: &MorphismSet, cat: &Category, cfg: &SampleConfig) -> Result<Verdict> {
    let (mors, cov) = cat.morphism_sample(cfg, 71);
    for f in &mors {
        if !w.contains(cat, f)? {
            return Ok(Verdict::fail("W contains every morphism", cov, vec![cat.mor_label(f)]));
        }
    }
    Ok(Verdict::pass("W contains every morphism", cov))
}

/// The relation carried by the localized category: the pushforward along `L`.
pub fn localized_orthogonality(l: &Functor, rel: &OrthoRel, cfg: &SampleConfig) -> Result<OrthoRel> {
    pushforward(l, rel, cfg)
}

/// A reflection `L ⊣ ι` between orthogonal categories together with the
/// class `W` it is meant to invert.
#[derive(Clone, Debug)]
pub struct ReflectiveData {
    pub base: OrthoCat,
    pub localized: OrthoCat,
    pub adj: AdjunctionData,
    pub w: MorphismSet,
}

impl ReflectiveData {
    pub fn new(base: OrthoCat, localized: OrthoCat, adj: AdjunctionData, w: MorphismSet) -> Result<ReflectiveData> {
        if !base.is_over(adj.base()) || !localized.is_over(adj.localized()) {
            return Err(Error::ShapeMismatch("adjunction does not match the orthogonal categories".into()));
        }
        Ok(ReflectiveData { base, localized, adj, w })
    }

    pub fn left(&self) -> &Functor {
        &self.adj.left
    }

    pub fn right(&self) -> &Functor {
        &self.adj.right
    }

    /// `η_M: M -> ιL(M)`.
    pub fn unit_at(&self, m: &Obj) -> Result<Mor> {
        self.adj.unit.component(m)?.ok_or_else(|| Error::UncertifiedReflectiveData(format!("no unit component at {m:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Verified(Coverage),
    Failed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub status: CertStatus,
    pub report: Report,
    /// The four adjunction verdicts behind verdict (a).
    pub adjunction: Report,
}

impl Certificate {
    pub fn verified(&self) -> bool {
        matches!(self.status, CertStatus::Verified(_))
    }

    pub fn summary(&self) -> String {
        match self.status {
            CertStatus::Verified(Coverage::Exhaustive) => "reflective localization verified (exhaustive)".into(),
            CertStatus::Verified(Coverage::Sampled(n)) => format!("reflective localization verified (sampled, {n})"),
            CertStatus::Failed => {
                let failed: Vec<&str> = self.report.failures().map(|v| v.check.as_str()).collect();
                format!("reflective localization not verified: {}", failed.join("; "))
            }
        }
    }
}

pub const CHECK_ADJUNCTION: &str = "(a) adjunction";
pub const CHECK_FULLY_FAITHFUL: &str = "(b) right adjoint fully faithful";
pub const CHECK_COUNIT: &str = "(c) counit invertible";
pub const CHECK_LEFT_ORTHOGONAL: &str = "(d) left adjoint orthogonal";
pub const CHECK_RIGHT_ORTHOGONAL: &str = "(e) right adjoint orthogonal";
pub const CHECK_W: &str = "(f) W is the iso preimage";
pub const CHECK_PULLED_BACK: &str = "(g) orthogonality is pulled back";

fn renamed(mut v: Verdict, name: &str) -> Verdict {
    v.check = name.to_string();
    v
}

pub fn certify_reflective(data: &ReflectiveData, cfg: &SampleConfig) -> Result<Certificate> {
    let l = data.left();
    let iota = data.right();
    let c = &data.base.cat;
    let d = &data.localized.cat;
    let mut report = Report::new(format!("reflective localization {} ⊣ {}", l.name, iota.name));

    let adjunction = check_adjunction(&data.adj, cfg)?;
    let adj_witness = (!adjunction.passed()).then(|| {
        adjunction
            .failures()
            .map(|v| format!("{}: {}", v.check, v.witness.clone().unwrap_or_default().join(", ")))
            .collect::<Vec<_>>()
    });
    report.push(Verdict::from_outcome(CHECK_ADJUNCTION, adjunction.coverage(), adj_witness));

    report.push(renamed(iota.fully_faithful(cfg)?, CHECK_FULLY_FAITHFUL));

    let (objs, cov) = d.object_sample(cfg, 72);
    let mut counit = None;
    for y in &objs {
        let iso = match data.adj.counit.component(y)? {
            Some(e) => d.is_isomorphism(&e)?.is_some(),
            None => false,
        };
        if !iso {
            counit = Some(vec![d.obj_label(y)]);
            break;
        }
    }
    report.push(Verdict::from_outcome(CHECK_COUNIT, cov, counit));

    report.push(renamed(is_orthogonal_functor(l, &data.base.rel, &data.localized.rel, cfg)?, CHECK_LEFT_ORTHOGONAL));
    report.push(renamed(is_orthogonal_functor(iota, &data.localized.rel, &data.base.rel, cfg)?, CHECK_RIGHT_ORTHOGONAL));

    let (mors, cov) = c.morphism_sample(cfg, 73);
    let mut w_diff = None;
    for f in &mors {
        let in_w = data.w.contains(c, f)?;
        let inverted = d.is_isomorphism(&l.map_mor(f)?)?.is_some();
        if in_w != inverted {
            w_diff = Some(vec![c.mor_label(f)]);
            break;
        }
    }
    let mut v = Verdict::from_outcome(CHECK_W, cov, w_diff);
    if let Coverage::Sampled(n) = cov {
        let shown: Vec<String> = mors.iter().take(5).map(|f| c.mor_label(f)).collect();
        v = v.with_note(format!("{n} sampled morphisms, first: {}", shown.join("; ")));
    }
    report.push(v);

    report.push(pulled_back_verdict(data, cfg)?);

    let status = if report.passed() { CertStatus::Verified(report.coverage()) } else { CertStatus::Failed };
    Ok(Certificate { status, report, adjunction })
}

fn pulled_back_verdict(data: &ReflectiveData, cfg: &SampleConfig) -> Result<Verdict> {
    let iota = data.right();
    let d = &data.localized.cat;
    if d.is_enumerated() {
        let pulled = pullback(iota, &data.base.rel)?;
        let diff = same_relation(d, &data.localized.rel, &pulled)?;
        return Ok(Verdict::from_outcome(CHECK_PULLED_BACK, Coverage::Exhaustive, diff.map(|(a, b)| vec![d.mor_label(&a), d.mor_label(&b)])));
    }
    // Sampled both ways: pairs of the relation, and arbitrary cospans.
    let (pairs, cov) = data.localized.rel.pair_sample(d, cfg, 74)?;
    let mut rng = cfg.rng(75);
    let mut candidates = pairs;
    for _ in 0..cfg.samples {
        let y = d.sample_object(&mut rng);
        let a = d.sample_morphism_into(&mut rng, &y);
        let b = d.sample_morphism_into(&mut rng, &y);
        candidates.push((a, b));
    }
    for (a, b) in &candidates {
        let here = data.localized.rel.contains(d, a, b)?;
        let there = data.base.rel.contains(&iota.target, &iota.map_mor(a)?, &iota.map_mor(b)?)?;
        if here != there {
            return Ok(Verdict::fail(CHECK_PULLED_BACK, cov.combine(Coverage::Sampled(cfg.samples)), vec![d.mor_label(a), d.mor_label(b)]));
        }
    }
    Ok(Verdict::pass(CHECK_PULLED_BACK, Coverage::Sampled(cfg.samples)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// A chain of morphisms, each traversed forwards or (formally inverted)
/// backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigZag {
    pub source: Obj,
    pub target: Obj,
    pub steps: Vec<(Mor, Direction)>,
}

impl ZigZag {
    pub fn new(cat: &Category, source: Obj, steps: Vec<(Mor, Direction)>) -> Result<ZigZag> {
        cat.check_obj(&source)?;
        let mut here = source.clone();
        for (f, dir) in &steps {
            let (from, to) = match dir {
                Direction::Forward => (cat.source(f)?, cat.target(f)?),
                Direction::Backward => (cat.target(f)?, cat.source(f)?),
            };
            if from != here {
                return Err(Error::NonComposable(format!("zig-zag step {} does not start at {}", cat.mor_label(f), cat.obj_label(&here))));
            }
            here = to;
        }
        Ok(ZigZag { source, target: here, steps })
    }

    /// Parses steps such as `<i_+ j_+ <j_- i_-`, where `<` marks a backward step.
    pub fn parse(cat: &Category, source: &str, steps: &str) -> Result<ZigZag> {
        let steps = steps
            .split_whitespace()
            .map(|t| match t.strip_prefix('<') {
                Some(name) => Ok((cat.parse_mor(name)?, Direction::Backward)),
                None => Ok((cat.parse_mor(t)?, Direction::Forward)),
            })
            .collect::<Result<Vec<_>>>()?;
        ZigZag::new(cat, cat.parse_obj(source)?, steps)
    }
}

/// The value of a zig-zag in the target of `l`: forward steps map to
/// `L(f)`, backward steps to `L(w)⁻¹`.
pub fn zigzag_evaluate(z: &ZigZag, l: &Functor, w: &MorphismSet) -> Result<Mor> {
    let c = &l.source;
    let d = &l.target;
    let mut acc = d.identity(&l.map_obj(&z.source)?)?;
    for (f, dir) in &z.steps {
        let step = match dir {
            Direction::Forward => l.map_mor(f)?,
            Direction::Backward => {
                if !w.contains(c, f)? {
                    return Err(Error::BackwardStepNotInW(c.mor_label(f)));
                }
                let lf = l.map_mor(f)?;
                d.is_isomorphism(&lf)?
                    .ok_or_else(|| Error::BackwardStepNotInW(format!("{} is not inverted by {}", c.mor_label(f), l.name)))?
            }
        };
        acc = d.compose(&step, &acc)?;
    }
    Ok(acc)
}

pub fn zigzag_normalize(z: &ZigZag, data: &ReflectiveData) -> Result<Mor> {
    zigzag_evaluate(z, data.left(), &data.w)
}
