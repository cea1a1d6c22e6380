mod common;

use std::collections::BTreeMap;

use aqft_core::homalg::{ChainComplex, ChainMap};
use aqft_core::rational::q;
use aqft_core::Error;
use common::*;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn homology_matches_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_complex(&mut r, -3, 3, 6);
        for n in -4..=4 {
            let want = b.homology.get(&n).copied().unwrap_or(0);
            prop_assert_eq!(b.complex.homology_dim(n), want);
            prop_assert_eq!(homology_oracle(&b.complex, n), want);
        }
    }

    #[test]
    fn quasi_iso_matches_cone_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_map(&mut r, -3, 3, 6);
        prop_assert!(commutes(&m.components, &m.source, &m.target));
        let f = to_chain_map(&m.components, &m.source, &m.target).unwrap();
        let oracle = quasi_iso_oracle(&m.components, &m.source, &m.target);
        prop_assert_eq!(oracle, m.expected);
        prop_assert_eq!(f.is_quasi_iso(), oracle);
    }

    #[test]
    fn shift_preserves_homology(seed in any::<u64>(), shift in -3i64..=3) {
        let mut r = rng(seed);
        let b = random_complex(&mut r, -3, 3, 4);
        let s = b.complex.shift(shift);
        for n in -4..=4 {
            prop_assert_eq!(s.homology_dim(n + shift), b.complex.homology_dim(n));
        }
        let id = ChainMap::identity(&b.complex).shift(shift);
        prop_assert!(id.is_quasi_iso());
    }

    #[test]
    fn broken_squares_are_rejected(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_map(&mut r, -3, 3, 6);
        let mut comps = m.components.clone();
        let Some((&n, block)) = comps.iter_mut().find(|(_, b)| b.rows > 0 && b.cols > 0) else { return Ok(()) };
        let (i, j) = (r.gen_range(0..block.rows), r.gen_range(0..block.cols));
        block.e[i][j] += q(1);
        let _ = n;
        let ok = commutes(&comps, &m.source, &m.target);
        prop_assert_eq!(to_chain_map(&comps, &m.source, &m.target).is_ok(), ok);
    }

    #[test]
    fn nonzero_squares_are_rejected(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_complex(&mut r, -3, 3, 6);
        let mut d: BTreeMap<i64, Dense> = b.complex.differentials().iter().map(|(n, m)| (*n, Dense::from_matrix(m))).collect();
        let n = r.gen_range(-2..=3);
        let (rows, cols) = (b.complex.dim(n - 1), b.complex.dim(n));
        if rows == 0 || cols == 0 {
            return Ok(());
        }
        let block = d.entry(n).or_insert_with(|| Dense::zeros(rows, cols));
        block.e[r.gen_range(0..rows)][r.gen_range(0..cols)] += q(1);
        let square_zero = d.iter().all(|(k, m)| d.get(&(k - 1)).map_or(true, |p| p.mul(m).is_zero()));
        let built = ChainComplex::new(b.complex.dims().clone(), d.iter().map(|(k, m)| (*k, m.to_matrix())).collect());
        prop_assert_eq!(built.is_ok(), square_zero);
        if let Err(e) = built {
            prop_assert!(matches!(e, Error::InvalidComplex(_)));
        }
    }
}

/// A random chain isomorphism out of `y`: conjugate each differential.
fn random_iso_from(r: &mut impl Rng, y: &ChainComplex) -> ChainMap {
    let p: BTreeMap<i64, (Dense, Dense)> = y.dims().iter().map(|(&n, &k)| (n, random_invertible(r, k))).collect();
    let d = y.differentials().iter().map(|(&n, m)| (n, p[&(n - 1)].0.mul(&Dense::from_matrix(m)).mul(&p[&n].1).to_matrix())).collect();
    let y2 = ChainComplex::new(y.dims().clone(), d).unwrap();
    ChainMap::new(y.clone(), y2, p.iter().map(|(n, (a, _))| (*n, a.to_matrix())).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quasi_isos_are_stable_under_isos(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_map(&mut r, -3, 3, 5);
        let f = to_chain_map(&m.components, &m.source, &m.target).unwrap();
        let post = random_iso_from(&mut r, &m.target);
        let pre = random_iso_from(&mut r, &m.source);
        let pre_inv = ChainMap::new(pre.target.clone(), pre.source.clone(),
            pre.components().iter().map(|(n, a)| (*n, a.inverse().unwrap())).collect()).unwrap();
        prop_assert!(post.is_iso() && pre_inv.is_iso());
        prop_assert_eq!(post.after(&f).unwrap().is_quasi_iso(), f.is_quasi_iso());
        prop_assert_eq!(f.after(&pre_inv).unwrap().is_quasi_iso(), f.is_quasi_iso());
    }

    #[test]
    fn rank_is_order_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rows = r.gen_range(0..=6);
        let cols = r.gen_range(0..=6);
        let mut m = Dense::zeros(rows, cols);
        // Low rank products make dependent rows common.
        let k = r.gen_range(0..=3);
        let mut a = Dense::zeros(rows, k);
        let mut b = Dense::zeros(k, cols);
        for row in a.e.iter_mut().chain(b.e.iter_mut()) {
            for v in row.iter_mut() {
                *v = q(r.gen_range(-2..=2));
            }
        }
        m = m.add(&a.mul(&b));
        prop_assert_eq!(m.to_matrix().rank(), m.rank());
    }
}
