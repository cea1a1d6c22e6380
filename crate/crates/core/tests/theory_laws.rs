mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use aqft_core::aqft::{commutator_witness, pullback_aqft, time_slice_verdict, w_sample, AqftModel, TimeSliceKind};
use aqft_core::cat::{Functor, Obj};
use aqft_core::corpus;
use aqft_core::homalg::DgAlgebra;
use aqft_core::linalg::Matrix;
use aqft_core::localize::certify_reflective;
use aqft_core::ortho::OrthoCat;
use aqft_core::report::SampleConfig;
use aqft_core::strictify::{check_idempotent, homology_of, rce_action, strictify_reflective, RceMode};
use common::*;
use proptest::prelude::*;

fn cfg() -> SampleConfig {
    SampleConfig::new(5, 48)
}

/// Dual numbers on every object of a poset, with `x ↦ 2^{h(b) - h(a)} x`
/// along `a -> b`, where `h` is the length of the longest chain below.
fn scaling_model(base: &OrthoCat) -> AqftModel {
    let cat = &base.cat;
    let objs = cat.objects().unwrap();
    let mut height: BTreeMap<Obj, i64> = BTreeMap::new();
    for _ in 0..objs.len() {
        for y in &objs {
            let h = cat.morphisms_in(y).unwrap().iter().filter(|f| !cat.is_identity(f).unwrap()).map(|f| height.get(&cat.source(f).unwrap()).copied().unwrap_or(0) + 1).max().unwrap_or(0);
            height.insert(y.clone(), h);
        }
    }
    let b = Arc::new(DgAlgebra::dual_numbers());
    let labels: Vec<String> = objs.iter().map(|x| cat.obj_label(x)).collect();
    let algebras: Vec<(&str, _)> = labels.iter().map(|l| (l.as_str(), b.clone())).collect();
    let actions: Vec<(String, BTreeMap<i64, Matrix>)> = cat
        .morphisms()
        .unwrap()
        .into_iter()
        .filter(|f| !cat.is_identity(f).unwrap())
        .map(|f| {
            let e = height[&cat.target(&f).unwrap()] - height[&cat.source(&f).unwrap()];
            (cat.mor_label(&f), [(0, Matrix::from_i64(2, 2, &[1, 0, 0, 1 << e]))].into())
        })
        .collect();
    let actions: Vec<(&str, BTreeMap<i64, Matrix>)> = actions.iter().map(|(l, m)| (l.as_str(), m.clone())).collect();
    AqftModel::from_tables("scaling", base.clone(), &algebras, actions).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_category(&mut r, 6, 8);
        let mid = OrthoCat::empty(s.quotient.target.clone());
        let a = scaling_model(&mid);
        let g = Functor::identity(&mid.cat);
        let src = OrthoCat::empty(s.cat.clone());
        let direct = pullback_aqft(&s.quotient.then(&g).unwrap(), &src, &a).unwrap();
        let staged = pullback_aqft(&s.quotient, &src, &pullback_aqft(&g, &mid, &a).unwrap()).unwrap();
        for x in s.cat.objects().unwrap() {
            prop_assert_eq!(direct.algebra(&x).unwrap(), staged.algebra(&x).unwrap());
        }
        for f in s.cat.morphisms().unwrap() {
            prop_assert_eq!(direct.action(&f).unwrap(), staged.action(&f).unwrap());
        }
    }
}

#[test]
fn strict_implies_homotopy_on_every_model() {
    for e in corpus::all() {
        for m in &e.models {
            let ts = time_slice_verdict(m, &e.w, &cfg()).unwrap();
            let (ws, _) = w_sample(m, &e.w, &cfg(), 7).unwrap();
            let all_iso = ws.iter().all(|w| m.action(w).unwrap().is_iso());
            let all_qi = ws.iter().all(|w| m.action(w).unwrap().is_quasi_iso());
            match ts.kind {
                TimeSliceKind::Strict => assert!(all_iso && all_qi, "{}/{}", e.name, m.name),
                TimeSliceKind::HomotopyOnly => assert!(!all_iso && all_qi, "{}/{}", e.name, m.name),
                TimeSliceKind::Neither => assert!(!all_qi, "{}/{}", e.name, m.name),
            }
        }
    }
}

#[test]
fn strictification_invariants_on_corpus() {
    for e in corpus::all() {
        let Some(data) = &e.reflective else { continue };
        if !certify_reflective(data, &cfg()).unwrap().verified() {
            continue;
        }
        for m in &e.models {
            let res = strictify_reflective(m, data, &cfg()).unwrap();
            assert_eq!(res.output_slice.kind, TimeSliceKind::Strict, "{}/{}", e.name, m.name);
            if res.input_slice.is_homotopy() {
                assert!(res.units.iter().all(|u| u.is_quasi_iso()), "{}/{}", e.name, m.name);
            }
            assert!(check_idempotent(&res, &cfg()).unwrap().passed, "{}/{}", e.name, m.name);
        }
    }
}

#[test]
fn causality_is_symmetric() {
    for e in corpus::all() {
        for m in &e.models {
            let (pairs, _) = m.base.rel.pair_sample(&m.base.cat, &cfg(), 3).unwrap();
            for (a, b) in pairs.iter().take(40) {
                let ab = commutator_witness(m, a, b).unwrap().is_some();
                let ba = commutator_witness(m, b, a).unwrap().is_some();
                assert_eq!(ab, ba, "{}/{}", e.name, m.name);
            }
        }
    }
}

#[test]
fn rce_actions_agree_across_modes() {
    let e = corpus::build_toy_rce();
    let m = e.model("scale").unwrap();
    let strict = rce_action(m, RceMode::Strict, &cfg()).unwrap();
    let homology = rce_action(m, RceMode::Homology, &cfg()).unwrap();
    assert!(strict.check_group_law(-5..=5).unwrap().passed);
    assert!(homology.check_group_law(-5..=5).unwrap().passed);
    let map = strict.strict.as_ref().unwrap();
    for n in -5..=5 {
        let on_h = homology_of(&map.power(n).unwrap());
        assert_eq!(homology.action(n).unwrap(), on_h, "n = {n}");
        assert_eq!(strict.action(n).unwrap()[&0].get(1, 1), &aqft_core::rational::Q::new(2.into(), 1.into()).pow(n as i32));
    }
}
