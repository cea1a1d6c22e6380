//! Linearized representable functors `C(M, -) ⊗ K` as degree-0 complexes.

use std::collections::BTreeMap;

use super::complex::{ChainComplex, ChainMap};
use crate::cat::{Category, Mor, Obj};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

fn enumerated(cat: &Category) -> Result<()> {
    if cat.is_enumerated() {
        Ok(())
    } else {
        Err(Error::BackendUnsupported(format!("Yoneda complexes over parametric {}", cat.name())))
    }
}

/// `y(M)(X)`: basis `C(M, X)` in degree 0.
pub fn yoneda_complex(cat: &Category, m: &Obj, x: &Obj) -> Result<ChainComplex> {
    enumerated(cat)?;
    Ok(ChainComplex::concentrated(0, cat.hom(m, x)?.len()))
}

pub fn hom_labels(cat: &Category, m: &Obj, x: &Obj) -> Result<Vec<String>> {
    Ok(cat.hom(m, x)?.iter().map(|f| cat.mor_label(f)).collect())
}

/// `y(M)(g)` for `g: X -> Y`: post-composition.
pub fn yoneda_post(cat: &Category, m: &Obj, g: &Mor) -> Result<ChainMap> {
    enumerated(cat)?;
    let (x, y) = (cat.source(g)?, cat.target(g)?);
    let src = cat.hom(m, &x)?;
    let tgt = cat.hom(m, &y)?;
    linear_map(&src, &tgt, |h| cat.compose(g, h))
}

/// `y(f)_X: y(N)(X) -> y(M)(X)` for `f: M -> N`: pre-composition.
pub fn yoneda_pre(cat: &Category, f: &Mor, x: &Obj) -> Result<ChainMap> {
    enumerated(cat)?;
    let (m, n) = (cat.source(f)?, cat.target(f)?);
    let src = cat.hom(&n, x)?;
    let tgt = cat.hom(&m, x)?;
    linear_map(&src, &tgt, |h| cat.compose(h, f))
}

fn linear_map(src: &[Mor], tgt: &[Mor], act: impl Fn(&Mor) -> Result<Mor>) -> Result<ChainMap> {
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, h) in src.iter().enumerate() {
        let img = act(h)?;
        let i = tgt.iter().position(|t| *t == img).expect("composite lies in the target hom-set");
        m.set(i, j, crate::rational::q(1));
    }
    let comps: BTreeMap<i64, Matrix> = [(0, m)].into();
    ChainMap::new(ChainComplex::concentrated(0, src.len()), ChainComplex::concentrated(0, tgt.len()), comps)
}
