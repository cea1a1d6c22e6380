mod common;

use aqft_core::cat::{Category, Mor, Obj};
use aqft_core::corpus::{self, rce_category, rce_localization};
use aqft_core::localize::{certify_reflective, derive_w, zigzag_evaluate, Direction, MorphismSet, ZigZag};
use aqft_core::report::SampleConfig;
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn step_options(cat: &Category, here: &Obj) -> Vec<(Mor, Direction)> {
    let mut out: Vec<_> = cat.morphisms_out(here).unwrap().into_iter().map(|f| (f, Direction::Forward)).collect();
    out.extend(cat.morphisms_in(here).unwrap().into_iter().map(|f| (f, Direction::Backward)));
    out
}

fn end_of(cat: &Category, (f, d): &(Mor, Direction)) -> Obj {
    match d {
        Direction::Forward => cat.target(f).unwrap(),
        Direction::Backward => cat.source(f).unwrap(),
    }
}

fn random_walk(r: &mut impl Rng, cat: &Category, len: usize) -> ZigZag {
    let objs = cat.objects().unwrap();
    let start = objs.choose(r).unwrap().clone();
    let mut here = start.clone();
    let mut steps = Vec::new();
    for _ in 0..len {
        let s = step_options(cat, &here).choose(r).unwrap().clone();
        here = end_of(cat, &s);
        steps.push(s);
    }
    ZigZag::new(cat, start, steps).unwrap()
}

/// Object reached after the first `k` steps.
fn object_at(cat: &Category, z: &ZigZag, k: usize) -> Obj {
    z.steps[..k].iter().fold(z.source.clone(), |_, s| end_of(cat, s))
}

/// One elementary move at a random place.
fn elementary_move(r: &mut impl Rng, cat: &Category, z: &ZigZag) -> ZigZag {
    let k = r.gen_range(0..=z.steps.len());
    let here = object_at(cat, z, k);
    let mut steps = z.steps.clone();
    match r.gen_range(0..3) {
        0 => {
            // Out and back along the same morphism, in either order.
            let s = step_options(cat, &here).choose(r).unwrap().clone();
            let back = (s.0.clone(), if s.1 == Direction::Forward { Direction::Backward } else { Direction::Forward });
            steps.splice(k..k, [s, back]);
        }
        1 => {
            // Merge two composable forward steps, if present.
            if let Some(i) = (0..steps.len().saturating_sub(1)).find(|&i| steps[i].1 == Direction::Forward && steps[i + 1].1 == Direction::Forward) {
                let g = cat.compose(&steps[i + 1].0, &steps[i].0).unwrap();
                steps.splice(i..i + 2, [(g, Direction::Forward)]);
            }
        }
        _ => {
            // Split a step off an identity.
            steps.insert(k, (cat.identity(&here).unwrap(), Direction::Forward));
        }
    }
    ZigZag::new(cat, z.source.clone(), steps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rce_values_survive_elementary_moves(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = rce_category();
        let l = rce_localization(&c);
        let len = r.gen_range(0..8);
        let z = random_walk(&mut r, &c, len);
        let value = zigzag_evaluate(&z, &l, &MorphismSet::All).unwrap();
        let mut moved = z.clone();
        for _ in 0..4 {
            moved = elementary_move(&mut r, &c, &moved);
            prop_assert_eq!(zigzag_evaluate(&moved, &l, &MorphismSet::All).unwrap(), value.clone());
        }
    }

    #[test]
    fn derived_w_is_saturated(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_category(&mut r, 6, 8);
        let w = derive_w(&s.quotient).unwrap();
        let members = w.members(&s.cat).unwrap();
        let isos: Vec<Mor> = s.cat.morphisms().unwrap().into_iter().filter(|f| s.cat.is_isomorphism(f).unwrap().is_some()).collect();
        for x in s.cat.objects().unwrap() {
            prop_assert!(members.contains(&s.cat.identity(&x).unwrap()));
        }
        for f in &isos {
            prop_assert!(members.contains(f));
        }
        for f in &members {
            for g in &isos {
                if let Ok(h) = s.cat.compose(g, f) {
                    prop_assert!(members.contains(&h));
                }
                if let Ok(h) = s.cat.compose(f, g) {
                    prop_assert!(members.contains(&h));
                }
            }
        }
    }

    #[test]
    fn random_categories_obey_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_category(&mut r, 6, 8);
        let cfg = SampleConfig::default();
        prop_assert!(s.cat.check_laws(&cfg).unwrap().passed());
        prop_assert!(s.quotient.check(&cfg).unwrap().passed());
    }
}

#[test]
fn certified_reflections_send_w_to_isos() {
    let cfg = SampleConfig::new(11, 64);
    for e in corpus::all() {
        let Some(data) = &e.reflective else { continue };
        let cert = certify_reflective(data, &cfg).unwrap();
        if !cert.verified() {
            continue;
        }
        let l = data.left();
        let (objs, _) = data.base.cat.object_sample(&cfg, 1);
        for x in objs {
            let eta = data.unit_at(&x).unwrap();
            assert!(data.w.contains(&data.base.cat, &eta).unwrap(), "{}: unit at {} outside W", e.name, data.base.cat.obj_label(&x));
        }
        let (mors, _) = data.base.cat.morphism_sample(&cfg, 2);
        for f in mors.iter().filter(|f| data.w.contains(&data.base.cat, f).unwrap()) {
            assert!(l.target.is_isomorphism(&l.map_mor(f).unwrap()).unwrap().is_some(), "{}", e.name);
        }
    }
}

#[test]
fn rce_loop_is_one() {
    let c = rce_category();
    let l = rce_localization(&c);
    let z = ZigZag::parse(&c, "M", "<i_+ j_+ <j_- i_-").unwrap();
    assert_eq!(zigzag_evaluate(&z, &l, &MorphismSet::All).unwrap(), Mor::Int(1.into()));
    let empty = ZigZag::new(&c, c.parse_obj("M").unwrap(), vec![]).unwrap();
    assert_eq!(zigzag_evaluate(&empty, &l, &MorphismSet::All).unwrap(), Mor::Int(0.into()));
}
