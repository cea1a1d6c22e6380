//! Operations of the AQFT operad: tuples of morphisms into a common target
//! with a permutation, modulo swapping adjacent orthogonal entries.
//!
//! Conventions. Permutations are stored one-line and 0-based, `p[i] = σ(i)`,
//! and compose as functions: `(σσ')(i) = σ(σ'(i))`. The word of `[σ, f]` puts
//! position `i` at slot `σ(i)`, so slot `k` holds `f_{σ⁻¹(k)}`. The right
//! action is `[σ, f]·σ' = [σσ', fσ']` with `(fσ')_k = f_{σ'(k)}`; it does not
//! change the word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cat::{CatRef, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::ortho::OrthoCat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::ShapeMismatch(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm(images))
    }

    /// Swap of `i` and `i + 1`.
    pub fn transposition(n: usize, i: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.0.swap(i, i + 1);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "permutations of different length");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// `σ_1 ⊕ … ⊕ σ_n` acting blockwise on consecutive blocks.
    pub fn block_sum(parts: &[Perm]) -> Perm {
        let mut out = Vec::new();
        let mut offset = 0;
        for p in parts {
            out.extend(p.0.iter().map(|&i| i + offset));
            offset += p.len();
        }
        Perm(out)
    }

    /// Moves whole blocks. Block `p` has size `sizes[p]` in the new order and
    /// lands at block `τ(p)` of the old order, where the old order has block
    /// `i` of size `sizes[τ⁻¹(i)]`.
    pub fn block_permute(tau: &Perm, sizes: &[usize]) -> Perm {
        let inv = tau.inverse();
        let mut old_offset = vec![0; sizes.len()];
        let mut acc = 0;
        for i in 0..sizes.len() {
            old_offset[i] = acc;
            acc += sizes[inv.apply(i)];
        }
        let mut out = Vec::with_capacity(acc);
        for (p, &k) in sizes.iter().enumerate() {
            out.extend((0..k).map(|j| old_offset[tau.apply(p)] + j));
        }
        Perm(out)
    }

    /// Parses 1-based images separated by spaces or commas.
    pub fn parse(s: &str) -> Result<Perm> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse(format!("bad permutation entry `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::new(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperadOp {
    pub target: Obj,
    pub domain: Vec<Obj>,
    pub morphisms: Vec<Mor>,
    pub perm: Perm,
}

impl OperadOp {
    pub fn new(cat: &CatRef, target: Obj, morphisms: Vec<Mor>, perm: Perm) -> Result<OperadOp> {
        if perm.len() != morphisms.len() {
            return Err(Error::ShapeMismatch(format!("{} morphisms but permutation of {}", morphisms.len(), perm.len())));
        }
        cat.check_obj(&target)?;
        let mut domain = Vec::with_capacity(morphisms.len());
        for f in &morphisms {
            if cat.target(f)? != target {
                return Err(Error::ShapeMismatch(format!("{} does not end at {}", cat.mor_label(f), cat.obj_label(&target))));
            }
            domain.push(cat.source(f)?);
        }
        Ok(OperadOp { target, domain, morphisms, perm })
    }

    pub fn unit(cat: &CatRef, target: Obj) -> Result<OperadOp> {
        let id = cat.identity(&target)?;
        OperadOp::new(cat, target, vec![id], Perm::identity(1))
    }

    pub fn arity(&self) -> usize {
        self.morphisms.len()
    }

    /// Slot `k` holds position `σ⁻¹(k)`.
    pub fn arrangement(&self) -> Vec<usize> {
        self.perm.inverse().0
    }

    /// Parses `[perm=2 1; f1,f2 -> N]`. An omitted `perm=` means identity.
    pub fn parse(cat: &CatRef, s: &str) -> Result<OperadOp> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("operation `{s}` must be bracketed")))?;
        let (perm_part, rest) = match body.split_once(';') {
            Some((p, r)) => (Some(p.trim()), r),
            None => (None, body),
        };
        let (mors, target) = rest.rsplit_once("->").ok_or_else(|| Error::Parse(format!("operation `{s}` lacks `-> target`")))?;
        let morphisms = mors
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| cat.parse_mor(t))
            .collect::<Result<Vec<_>>>()?;
        let perm = match perm_part {
            Some(p) => {
                let p = p.strip_prefix("perm=").ok_or_else(|| Error::Parse(format!("expected `perm=` in `{s}`")))?;
                Perm::parse(p)?
            }
            None => Perm::identity(morphisms.len()),
        };
        OperadOp::new(cat, cat.parse_obj(target.trim())?, morphisms, perm)
    }

    pub fn render(&self, cat: &CatRef) -> String {
        let fs: Vec<String> = self.morphisms.iter().map(|f| cat.mor_label(f)).collect();
        format!("[perm={}; {} -> {}]", self.perm, fs.join(","), cat.obj_label(&self.target))
    }
}

fn same_shape(a: &OperadOp, b: &OperadOp) -> Result<()> {
    if a.arity() != b.arity() || a.target != b.target {
        return Err(Error::ShapeMismatch(format!(
            "arity {} into {:?} vs arity {} into {:?}",
            a.arity(),
            a.target,
            b.arity(),
            b.target
        )));
    }
    Ok(())
}

fn independent(oc: &OrthoCat, f: &[Mor], i: usize, j: usize) -> Result<bool> {
    oc.orthogonal(&f[i], &f[j])
}

/// Equality in the operad: same morphism tuple, and every pair of positions
/// whose morphisms are not orthogonal keeps its relative order.
pub fn op_equal(a: &OperadOp, b: &OperadOp, oc: &OrthoCat) -> Result<bool> {
    same_shape(a, b)?;
    if a.morphisms != b.morphisms {
        return Ok(false);
    }
    let n = a.arity();
    for i in 0..n {
        for j in i + 1..n {
            let flipped = (a.perm.apply(i) < a.perm.apply(j)) != (b.perm.apply(i) < b.perm.apply(j));
            if flipped && !independent(oc, &a.morphisms, i, j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The representative whose word is lexicographically least (as a sequence
/// of positions) among all words reachable by allowed swaps.
pub fn canonical(a: &OperadOp, oc: &OrthoCat) -> Result<OperadOp> {
    let n = a.arity();
    let arr = a.arrangement();
    // Position `p` must wait for every dependent position placed before it.
    let mut blockers = vec![Vec::new(); n];
    for (s, &p) in arr.iter().enumerate() {
        for &q in &arr[..s] {
            if !independent(oc, &a.morphisms, p, q)? {
                blockers[p].push(q);
            }
        }
    }
    let mut placed = vec![false; n];
    let mut images = vec![0; n];
    for slot in 0..n {
        let p = (0..n)
            .find(|&p| !placed[p] && blockers[p].iter().all(|&q| placed[q]))
            .expect("dependence order is acyclic");
        placed[p] = true;
        images[p] = slot;
    }
    Ok(OperadOp { perm: Perm(images), ..a.clone() })
}

/// Operadic composition: `inners[i]` is plugged into input `i` of `outer`.
pub fn op_compose(cat: &CatRef, outer: &OperadOp, inners: &[OperadOp]) -> Result<OperadOp> {
    if inners.len() != outer.arity() {
        return Err(Error::ShapeMismatch(format!("outer arity {} with {} inner operations", outer.arity(), inners.len())));
    }
    let mut offsets = Vec::with_capacity(inners.len());
    let mut morphisms = Vec::new();
    for (i, inner) in inners.iter().enumerate() {
        if inner.target != outer.domain[i] {
            return Err(Error::ShapeMismatch(format!("inner operation {} ends at {:?}, expected {:?}", i + 1, inner.target, outer.domain[i])));
        }
        offsets.push(morphisms.len());
        for g in &inner.morphisms {
            morphisms.push(cat.compose(&outer.morphisms[i], g)?);
        }
    }
    let mut arrangement = Vec::with_capacity(morphisms.len());
    for i in outer.arrangement() {
        arrangement.extend(inners[i].arrangement().into_iter().map(|l| offsets[i] + l));
    }
    let perm = Perm(arrangement).inverse();
    OperadOp::new(cat, outer.target.clone(), morphisms, perm)
}

/// `[σ, f]·σ' = [σσ', fσ']`.
pub fn op_permute(a: &OperadOp, sigma: &Perm) -> Result<OperadOp> {
    if sigma.len() != a.arity() {
        return Err(Error::ShapeMismatch(format!("permutation of {} acting on arity {}", sigma.len(), a.arity())));
    }
    Ok(OperadOp {
        target: a.target.clone(),
        domain: sigma.0.iter().map(|&k| a.domain[k].clone()).collect(),
        morphisms: sigma.0.iter().map(|&k| a.morphisms[k].clone()).collect(),
        perm: a.perm.then_after(sigma),
    })
}

/// Componentwise image under a functor.
pub fn op_image(f: &Functor, a: &OperadOp) -> Result<OperadOp> {
    let morphisms = a.morphisms.iter().map(|m| f.map_mor(m)).collect::<Result<Vec<_>>>()?;
    OperadOp::new(&f.target, f.map_obj(&a.target)?, morphisms, a.perm.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{Category, FiniteCategory};
    use crate::ortho::{closure, OrthoRel};

    fn cospan(orthogonal: bool) -> OrthoCat {
        let c = Category::enumerated(
            FiniteCategory::from_preorder("cospan", vec!["M1".into(), "M2".into(), "M3".into(), "N".into()], &[(0, 3), (1, 3), (2, 3)])
                .unwrap(),
        );
        let rel = if orthogonal {
            let f1 = c.parse_mor("M1->N").unwrap();
            let f2 = c.parse_mor("M2->N").unwrap();
            closure(&c, &[(f1, f2)]).unwrap()
        } else {
            OrthoRel::Empty
        };
        OrthoCat::new(c, rel)
    }

    #[test]
    fn permutation_algebra() {
        let s = Perm::new(vec![1, 2, 0]).unwrap();
        assert_eq!(s.then_after(&s.inverse()), Perm::identity(3));
        assert_eq!(Perm::parse("2 1").unwrap(), Perm::transposition(2, 0));
        assert_eq!(Perm::parse("2 1").unwrap().to_string(), "2 1");
        assert!(Perm::new(vec![0, 0]).is_err());
        assert_eq!(Perm::block_sum(&[Perm::transposition(2, 0), Perm::identity(1)]).images(), &[1, 0, 2]);
        // Blocks of sizes (1, 2) swapped: new block 0 sits after old block 0 of size 2.
        assert_eq!(Perm::block_permute(&Perm::transposition(2, 0), &[1, 2]).images(), &[2, 0, 1]);
    }

    #[test]
    fn swap_needs_orthogonality() {
        for orth in [false, true] {
            let oc = cospan(orth);
            let a = OperadOp::parse(&oc.cat, "[perm=1 2; M1->N,M2->N -> N]").unwrap();
            let b = OperadOp::parse(&oc.cat, "[perm=2 1; M1->N,M2->N -> N]").unwrap();
            assert_eq!(op_equal(&a, &b, &oc).unwrap(), orth);
        }
    }

    #[test]
    fn dependent_positions_keep_order() {
        let oc = cospan(true);
        let a = OperadOp::parse(&oc.cat, "[perm=1 2 3; M1->N,M2->N,M3->N -> N]").unwrap();
        let b = OperadOp::parse(&oc.cat, "[perm=3 2 1; M1->N,M2->N,M3->N -> N]").unwrap();
        assert!(!op_equal(&a, &b, &oc).unwrap());
        let c = OperadOp::parse(&oc.cat, "[perm=2 1 3; M1->N,M2->N,M3->N -> N]").unwrap();
        assert!(op_equal(&a, &c, &oc).unwrap());
        assert_eq!(canonical(&c, &oc).unwrap(), canonical(&a, &oc).unwrap());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let oc = cospan(false);
        let a = OperadOp::parse(&oc.cat, "[M1->N -> N]").unwrap();
        let b = OperadOp::parse(&oc.cat, "[perm=1 2; M1->N,M2->N -> N]").unwrap();
        assert!(matches!(op_equal(&a, &b, &oc), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn composition_with_units() {
        let oc = cospan(false);
        let c = &oc.cat;
        let a = OperadOp::parse(c, "[perm=2 1; M1->N,M2->N -> N]").unwrap();
        let units: Vec<_> = a.domain.iter().map(|x| OperadOp::unit(c, x.clone()).unwrap()).collect();
        assert_eq!(op_compose(c, &a, &units).unwrap(), a);
        let u = OperadOp::unit(c, a.target.clone()).unwrap();
        assert_eq!(op_compose(c, &u, std::slice::from_ref(&a)).unwrap(), a);
    }

    #[test]
    fn permuting_swaps_domain() {
        let oc = cospan(false);
        let a = OperadOp::parse(&oc.cat, "[M1->N,M2->N -> N]").unwrap();
        let t = Perm::transposition(2, 0);
        let b = op_permute(&a, &t).unwrap();
        assert_eq!(b, OperadOp::parse(&oc.cat, "[perm=2 1; M2->N,M1->N -> N]").unwrap());
        assert_eq!(op_permute(&b, &t).unwrap(), a);
    }
}
