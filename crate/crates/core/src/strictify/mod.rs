//! Strictification of theories with the homotopy time-slice property: the
//! double pullback along a reflective localization, the integer action of
//! the relative Cauchy evolution, and the truncated bar resolution used when
//! orthogonality is empty.

mod bar;

pub use bar::{bar_truncated, tot_normalized, BarResolution, ObjectBar, ObjectTot, Totalization, Tree};

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::aqft::{pullback_aqft, time_slice_verdict, AqftModel, TimeSlice, TimeSliceKind};
use crate::cat::functor::same_category;
use crate::cat::{Mor, Obj};
use crate::error::{Error, Result};
use crate::homalg::DgAlgebraMap;
use crate::linalg::Matrix;
use crate::localize::{certify_reflective, Direction, MorphismSet, ReflectiveData, ZigZag};
use crate::report::{Coverage, Report, SampleConfig, Verdict};

/// `η_{A,M} = A(η_M): A(M) -> A_st(M)`.
#[derive(Clone, Debug)]
pub struct UnitComponent {
    pub object: Obj,
    pub label: String,
    pub map: DgAlgebraMap,
    /// First degree where homology is not matched, if any.
    pub failing_degree: Option<i64>,
}

impl UnitComponent {
    pub fn is_quasi_iso(&self) -> bool {
        self.failing_degree.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct StrictificationResult {
    pub input: AqftModel,
    pub reflective: ReflectiveData,
    pub output: AqftModel,
    pub units: Vec<UnitComponent>,
    pub coverage: Coverage,
    pub input_slice: TimeSlice,
    pub output_slice: TimeSlice,
}

pub const CHECK_OUTPUT_STRICT: &str = "output satisfies strict time-slice";
pub const CHECK_UNITS: &str = "unit components are quasi-isomorphisms";
pub const CHECK_IDEMPOTENT: &str = "idempotent up to isomorphism";

impl StrictificationResult {
    pub fn certificate(&self) -> Report {
        let mut r = Report::new(format!("strictification of {}", self.input.name));
        let strict = Verdict::from_outcome(
            CHECK_OUTPUT_STRICT,
            self.output_slice.coverage,
            (self.output_slice.kind != TimeSliceKind::Strict).then(|| self.output_slice.witness.iter().cloned().collect()),
        );
        r.push(strict);
        let failing: Vec<String> = self.units.iter().filter(|u| !u.is_quasi_iso()).map(|u| u.label.clone()).collect();
        let units = Verdict::from_outcome(CHECK_UNITS, self.coverage, (!failing.is_empty()).then_some(failing))
            .with_note(format!("input time-slice: {}", self.input_slice.kind));
        r.push(units);
        r
    }

    pub fn unit(&self, x: &Obj) -> Option<&UnitComponent> {
        self.units.iter().find(|u| &u.object == x)
    }
}

/// `A_st = L*ι*(A)` with the unit components `A(η_M)`.
pub fn strictify_reflective(model: &AqftModel, data: &ReflectiveData, cfg: &SampleConfig) -> Result<StrictificationResult> {
    let cert = certify_reflective(data, cfg)?;
    if !cert.verified() {
        return Err(Error::UncertifiedReflectiveData(cert.summary()));
    }
    if !same_category(&model.base.cat, &data.base.cat) {
        return Err(Error::ShapeMismatch(format!("{} is not defined on the base of the reflection", model.name)));
    }
    let on_local = pullback_aqft(data.right(), &data.localized, model)?;
    let mut output = pullback_aqft(data.left(), &data.base, &on_local)?;
    output.name = format!("{}_st", model.name);

    let cat = &data.base.cat;
    let (objects, coverage) = cat.object_sample(cfg, 91);
    let mut units = Vec::new();
    for x in objects {
        let map = model.action(&data.unit_at(&x)?)?;
        let failing_degree = map.chain().quasi_iso_witness();
        units.push(UnitComponent { label: cat.obj_label(&x), object: x, map, failing_degree });
    }
    let input_slice = time_slice_verdict(model, &data.w, cfg)?;
    let output_slice = time_slice_verdict(&output, &data.w, cfg)?;
    Ok(StrictificationResult { input: model.clone(), reflective: data.clone(), output, units, coverage, input_slice, output_slice })
}

/// Strictifies the output again and checks that its unit components are
/// isomorphisms onto algebras equal to the first output.
pub fn check_idempotent(result: &StrictificationResult, cfg: &SampleConfig) -> Result<Verdict> {
    let again = strictify_reflective(&result.output, &result.reflective, cfg)?;
    for u in &again.units {
        if !u.map.is_iso() || again.output.algebra(&u.object)? != result.output.algebra(&u.object)? {
            return Ok(Verdict::fail(CHECK_IDEMPOTENT, again.coverage, vec![u.label.clone()]));
        }
    }
    Ok(Verdict::pass(CHECK_IDEMPOTENT, again.coverage))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RceMode {
    Strict,
    Homology,
}

/// The loop `M <- M_+ -> M_h <- M_- -> M` of Cauchy morphisms.
pub const RCE_LOOP: (&str, &str) = ("M", "<i_+ j_+ <j_- i_-");

pub fn rce_loop(model: &AqftModel) -> Result<ZigZag> {
    ZigZag::parse(&model.base.cat, RCE_LOOP.0, RCE_LOOP.1)
}

/// The integer action generated by the RCE automorphism of `A(M)`. In
/// strict mode the generator is a chain-level algebra automorphism; in
/// homology mode it is given per degree on the canonical homology bases.
#[derive(Clone, Debug)]
pub struct RceAction {
    pub mode: RceMode,
    pub generator: BTreeMap<i64, Matrix>,
    pub strict: Option<DgAlgebraMap>,
}

pub const CHECK_GROUP_LAW: &str = "group law";

impl RceAction {
    /// `g^n`, per degree.
    pub fn action(&self, n: i64) -> Result<BTreeMap<i64, Matrix>> {
        if let Some(g) = &self.strict {
            let p = g.power(n)?;
            return Ok(self.generator.keys().map(|d| (*d, p.component(*d))).collect());
        }
        self.generator
            .iter()
            .map(|(d, m)| {
                let base = if n < 0 { m.inverse().ok_or_else(|| Error::TimeSliceViolated(format!("generator not invertible in degree {d}")))? } else { m.clone() };
                Ok((*d, base.pow(n.unsigned_abs())))
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.values().all(|m| *m == Matrix::identity(m.rows()))
    }

    /// `action(m+n) = action(m) ∘ action(n)` and `action(0) = id` for all
    /// `m, n` in `range`.
    pub fn check_group_law(&self, range: RangeInclusive<i64>) -> Result<Verdict> {
        let zero = self.action(0)?;
        if zero.values().any(|m| *m != Matrix::identity(m.rows())) {
            return Ok(Verdict::fail(CHECK_GROUP_LAW, Coverage::Exhaustive, vec!["0".into()]));
        }
        let cache: BTreeMap<i64, BTreeMap<i64, Matrix>> =
            (2 * range.start()..=2 * range.end()).map(|n| Ok((n, self.action(n)?))).collect::<Result<_>>()?;
        for m in range.clone() {
            for n in range.clone() {
                for (d, sum) in &cache[&(m + n)] {
                    if *sum != &cache[&m][d] * &cache[&n][d] {
                        return Ok(Verdict::fail(CHECK_GROUP_LAW, Coverage::Exhaustive, vec![m.to_string(), n.to_string()]));
                    }
                }
            }
        }
        Ok(Verdict::pass(CHECK_GROUP_LAW, Coverage::Exhaustive).with_note(format!("n in [{}, {}]", range.start(), range.end())))
    }
}

pub fn rce_action(model: &AqftModel, mode: RceMode, cfg: &SampleConfig) -> Result<RceAction> {
    let slice = time_slice_verdict(model, &MorphismSet::All, cfg)?;
    let allowed = match mode {
        RceMode::Strict => slice.kind == TimeSliceKind::Strict,
        RceMode::Homology => slice.is_homotopy(),
    };
    if !allowed {
        return Err(Error::TimeSliceViolated(format!(
            "{} mode needs {} time-slice, got {} at {}",
            if mode == RceMode::Strict { "strict" } else { "homology" },
            if mode == RceMode::Strict { "strict" } else { "homotopy" },
            slice.kind,
            slice.witness.unwrap_or_default()
        )));
    }
    let z = rce_loop(model)?;
    match mode {
        RceMode::Strict => {
            let g = evaluate_strict(model, &z)?;
            let generator = g.source.complex().dims().keys().map(|d| (*d, g.component(*d))).collect();
            Ok(RceAction { mode, generator, strict: Some(g) })
        }
        RceMode::Homology => Ok(RceAction { mode, generator: evaluate_homology(model, &z)?, strict: None }),
    }
}

/// A zig-zag evaluated in the model with backward steps inverted.
pub fn evaluate_strict(model: &AqftModel, z: &ZigZag) -> Result<DgAlgebraMap> {
    let cat = &model.base.cat;
    let mut acc = DgAlgebraMap::identity(&model.algebra(&z.source)?);
    for (f, dir) in &z.steps {
        let a = model.action(f)?;
        let step = match dir {
            Direction::Forward => a,
            Direction::Backward => a.inverse().ok_or_else(|| Error::TimeSliceViolated(cat.mor_label(f)))?,
        };
        acc = step.after(&acc)?;
    }
    Ok(acc)
}

/// As [`evaluate_strict`], on homology. Backward steps only need to be
/// quasi-isomorphisms.
pub fn evaluate_homology(model: &AqftModel, z: &ZigZag) -> Result<BTreeMap<i64, Matrix>> {
    let cat = &model.base.cat;
    let start = model.algebra(&z.source)?;
    let degrees: Vec<i64> = start.complex().homology().keys().copied().collect();
    let mut acc: BTreeMap<i64, Matrix> = degrees.iter().map(|d| (*d, Matrix::identity(start.complex().homology_dim(*d)))).collect();
    for (f, dir) in &z.steps {
        let a = model.action(f)?;
        for (d, m) in acc.iter_mut() {
            let h = a.chain().on_homology(*d);
            let step = match dir {
                Direction::Forward => h,
                Direction::Backward => h.inverse().ok_or_else(|| Error::TimeSliceViolated(format!("{} in degree {d}", cat.mor_label(f))))?,
            };
            *m = &step * &*m;
        }
    }
    Ok(acc)
}

/// `H_d` of a strict action, on the canonical homology bases.
pub fn homology_of(map: &DgAlgebraMap) -> BTreeMap<i64, Matrix> {
    map.source.complex().homology().keys().map(|d| (*d, map.chain().on_homology(*d))).collect()
}

/// Looks up a morphism of the model's base by label.
pub fn morphism(model: &AqftModel, label: &str) -> Result<Mor> {
    model.base.cat.parse_mor(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aqft::ConstantRealization;
    use crate::cat::{AdjunctionData, Category, Components, FiniteCategory, Functor};
    use crate::homalg::{complex_from_i64, DgAlgebra};
    use crate::localize::derive_w;
    use crate::ortho::OrthoCat;
    use crate::rational::q;
    use std::sync::Arc;

    fn uv() -> (ReflectiveData, AqftModel, AqftModel) {
        let c = Category::enumerated(FiniteCategory::from_preorder("UV", vec!["U".into(), "V".into()], &[(0, 1)]).unwrap());
        let pt = Category::enumerated(FiniteCategory::from_preorder("pt", vec!["*".into()], &[]).unwrap());
        let l = Functor::constant("L", &c, &pt, Obj::Idx(0)).unwrap();
        let iota = Functor::from_labels("ι", &pt, &c, &[("*", "V")], &[]).unwrap();
        let unit: BTreeMap<Obj, Mor> = [(Obj::Idx(0), c.parse_mor("U->V").unwrap()), (Obj::Idx(1), c.parse_mor("id_V").unwrap())].into();
        let adj = AdjunctionData::new(l.clone(), iota, Components::Table(unit), Components::Identity).unwrap();
        let data = ReflectiveData::new(OrthoCat::empty(c.clone()), OrthoCat::empty(pt), adj, derive_w(&l).unwrap()).unwrap();
        let k = Arc::new(DgAlgebra::ground());
        let ideal = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        let e = Arc::new(DgAlgebra::square_zero_extension(&k, &[q(1)], &ideal, &[]).unwrap());
        let good = AqftModel::from_tables(
            "proj",
            OrthoCat::empty(c.clone()),
            &[("U", e), ("V", k.clone())],
            vec![("U->V", [(0, Matrix::from_i64(1, 2, &[1, 0]))].into())],
        )
        .unwrap();
        let ideal = crate::homalg::ChainComplex::concentrated(0, 1);
        let d = Arc::new(DgAlgebra::square_zero_extension(&k, &[q(1)], &ideal, &[]).unwrap());
        let bad = AqftModel::from_tables(
            "bad",
            OrthoCat::empty(c),
            &[("U", d), ("V", k)],
            vec![("U->V", [(0, Matrix::from_i64(1, 2, &[1, 0]))].into())],
        )
        .unwrap();
        (data, good, bad)
    }

    #[test]
    fn homotopy_theory_strictifies() {
        let (data, good, _) = uv();
        let cfg = SampleConfig::default();
        let r = strictify_reflective(&good, &data, &cfg).unwrap();
        assert!(r.certificate().passed(), "{}", r.certificate());
        assert_eq!(r.input_slice.kind, TimeSliceKind::HomotopyOnly);
        let u = r.unit(&Obj::Idx(0)).unwrap();
        assert_eq!(u.map.component(0), Matrix::from_i64(1, 2, &[1, 0]));
        assert_eq!(r.output.algebra(&Obj::Idx(0)).unwrap().complex().total_dim(), 1);
        assert!(check_idempotent(&r, &cfg).unwrap().passed);
    }

    #[test]
    fn failing_theory_reports_unit() {
        let (data, _, bad) = uv();
        let r = strictify_reflective(&bad, &data, &SampleConfig::default()).unwrap();
        assert_eq!(r.input_slice.kind, TimeSliceKind::Neither);
        let cert = r.certificate();
        assert!(cert.verdict(CHECK_OUTPUT_STRICT).unwrap().passed);
        assert_eq!(cert.verdict(CHECK_UNITS).unwrap().witness.as_deref(), Some(&["U".to_string()][..]));
    }

    #[test]
    fn constant_model_has_trivial_rce() {
        let s = |x: &str| x.to_string();
        let objs = ["M", "M_+", "M_-", "M_h"];
        let mut mors: Vec<_> = objs.iter().map(|o| (format!("id_{o}"), s(o), s(o))).collect();
        for (f, a, b) in [("i_+", "M_+", "M"), ("j_+", "M_+", "M_h"), ("j_-", "M_-", "M_h"), ("i_-", "M_-", "M")] {
            mors.push((s(f), s(a), s(b)));
        }
        let ids = objs.iter().map(|o| (s(o), format!("id_{o}"))).collect();
        let fc = FiniteCategory::new("rce", objs.iter().map(|o| s(o)).collect(), mors, &ids, &[]).unwrap();
        let c = Category::enumerated(fc);
        let model = AqftModel::new("k", OrthoCat::empty(c), Arc::new(ConstantRealization(Arc::new(DgAlgebra::dual_numbers()))));
        let cfg = SampleConfig::default();
        let strict = rce_action(&model, RceMode::Strict, &cfg).unwrap();
        assert!(strict.is_trivial());
        assert!(strict.check_group_law(-3..=3).unwrap().passed);
        let h = rce_action(&model, RceMode::Homology, &cfg).unwrap();
        assert_eq!(h.generator, homology_of(strict.strict.as_ref().unwrap()));
    }
}
