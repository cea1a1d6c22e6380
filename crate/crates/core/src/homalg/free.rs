use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::complex::{ChainComplex, ChainMap};
use super::dga::{AlgRef, Basis, DgAlgebra, DgAlgebraMap, MultTable};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{sign, Q};

/// The tensor algebra on a complex, cut off above a maximal word length.
/// Products of total length beyond the cut-off are zero.
#[derive(Clone, Debug)]
pub struct FreeDga {
    pub algebra: AlgRef,
    pub generators: ChainComplex,
    pub max_weight: usize,
    words: BTreeMap<i64, Vec<Vec<Basis>>>,
    index: HashMap<Vec<Basis>, Basis>,
}

impl FreeDga {
    pub fn word(&self, b: Basis) -> &[Basis] {
        &self.words[&b.0][b.1]
    }

    pub fn index_of(&self, word: &[Basis]) -> Option<Basis> {
        self.index.get(word).copied()
    }

    pub fn words(&self) -> &BTreeMap<i64, Vec<Vec<Basis>>> {
        &self.words
    }
}

/// Words of length at most `max_weight` in the generators, ordered within
/// each degree by length and then lexicographically.
fn enumerate_words(v: &ChainComplex, max_weight: usize) -> BTreeMap<i64, Vec<Vec<Basis>>> {
    let gens: Vec<Basis> = v.dims().iter().flat_map(|(&n, &k)| (0..k).map(move |i| (n, i))).collect();
    let mut all: Vec<Vec<Basis>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Basis>> = vec![Vec::new()];
    for _ in 0..max_weight {
        let next: Vec<Vec<Basis>> = layer
            .iter()
            .flat_map(|w| {
                gens.iter().map(move |g| {
                    let mut w2 = w.clone();
                    w2.push(*g);
                    w2
                })
            })
            .collect();
        all.extend(next.iter().cloned());
        layer = next;
    }
    let mut by_degree: BTreeMap<i64, Vec<Vec<Basis>>> = BTreeMap::new();
    for w in all {
        by_degree.entry(w.iter().map(|g| g.0).sum()).or_default().push(w);
    }
    for ws in by_degree.values_mut() {
        ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }
    by_degree
}

pub fn free_dga(v: &ChainComplex, max_weight: usize) -> FreeDga {
    let labels: BTreeMap<i64, Vec<String>> =
        v.dims().iter().map(|(&n, &k)| (n, (0..k).map(|i| format!("v{n}.{i}")).collect())).collect();
    free_dga_labeled(v, max_weight, &labels).expect("default labels fit")
}

/// As [`free_dga`], naming words after the given generator labels.
pub fn free_dga_labeled(v: &ChainComplex, max_weight: usize, gen_labels: &BTreeMap<i64, Vec<String>>) -> Result<FreeDga> {
    let words = enumerate_words(v, max_weight);
    let mut index = HashMap::new();
    for (&n, ws) in &words {
        for (i, w) in ws.iter().enumerate() {
            index.insert(w.clone(), (n, i));
        }
    }
    let dims: BTreeMap<i64, usize> = words.iter().map(|(n, ws)| (*n, ws.len())).collect();
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);

    // d(x_1 … x_k) = Σ_i (-1)^{|x_1|+…+|x_{i-1}|} x_1 … d(x_i) … x_k
    let mut d = BTreeMap::new();
    for (&n, ws) in &words {
        let mut m = Matrix::zeros(dim(n - 1), ws.len());
        for (col, w) in ws.iter().enumerate() {
            let mut before = 0;
            for (i, g) in w.iter().enumerate() {
                let s = sign(before);
                let dg = v.d(g.0);
                for k in 0..dg.rows() {
                    let c = dg.get(k, g.1);
                    if c.is_zero() {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2[i] = (g.0 - 1, k);
                    let (_, row) = index[&w2];
                    m.add_to(row, col, &(&s * c));
                }
                before += g.0;
            }
        }
        d.insert(n, m);
    }
    let complex = ChainComplex::new(dims.clone(), d)?;

    let mut mult = MultTable::new();
    for (&p, us) in &words {
        for (i, u) in us.iter().enumerate() {
            for (&q, ws) in &words {
                for (j, w) in ws.iter().enumerate() {
                    if u.len() + w.len() > max_weight {
                        continue;
                    }
                    let mut uw = u.clone();
                    uw.extend_from_slice(w);
                    mult.insert(((p, i), (q, j)), vec![(index[&uw].1, Q::one())]);
                }
            }
        }
    }
    let mut unit = vec![Q::zero(); dim(0)];
    unit[index[&Vec::new()].1] = Q::one();

    let name = |g: &Basis| gen_labels.get(&g.0).and_then(|l| l.get(g.1)).cloned().unwrap_or_else(|| format!("v{}.{}", g.0, g.1));
    let labels = words
        .iter()
        .map(|(&n, ws)| {
            let ls = ws.iter().map(|w| if w.is_empty() { "1".to_string() } else { w.iter().map(name).collect::<Vec<_>>().join("⊗") }).collect();
            (n, ls)
        })
        .collect();
    let weights = words.iter().map(|(&n, ws)| (n, ws.iter().map(Vec::len).collect())).collect();
    let algebra = DgAlgebra::new(complex, unit, mult, Some(labels))?.with_weights(weights);
    Ok(FreeDga { algebra: Arc::new(algebra), generators: v.clone(), max_weight, words, index })
}

/// The algebra map induced by a chain map of generators: each word goes to
/// the product of the images of its letters.
pub fn free_map(f: &ChainMap, source: &FreeDga, target: &FreeDga) -> Result<DgAlgebraMap> {
    if f.source != source.generators || f.target != target.generators || source.max_weight > target.max_weight {
        return Err(Error::ShapeMismatch("chain map does not match the free algebras".into()));
    }
    let mut comps = BTreeMap::new();
    for (&n, ws) in &source.words {
        let mut m = Matrix::zeros(target.algebra.complex().dim(n), ws.len());
        for (col, w) in ws.iter().enumerate() {
            let mut terms: Vec<(Vec<Basis>, Q)> = vec![(Vec::new(), Q::one())];
            for g in w {
                let fg = f.component(g.0);
                let mut next = Vec::new();
                for (prefix, c) in &terms {
                    for k in 0..fg.rows() {
                        let e = fg.get(k, g.1);
                        if e.is_zero() {
                            continue;
                        }
                        let mut p2 = prefix.clone();
                        p2.push((g.0, k));
                        next.push((p2, c * e));
                    }
                }
                terms = next;
            }
            for (word, c) in terms {
                let (_, row) = target.index[&word];
                m.add_to(row, col, &c);
            }
        }
        comps.insert(n, m);
    }
    DgAlgebraMap::new(source.algebra.clone(), target.algebra.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::complex::complex_from_i64;

    #[test]
    fn ground_field_from_zero_generators() {
        let f = free_dga(&ChainComplex::zero(), 3);
        assert_eq!(f.algebra.complex().dims().clone(), [(0, 1)].into());
    }

    #[test]
    fn polynomial_truncation() {
        let f = free_dga(&ChainComplex::concentrated(0, 1), 2);
        assert_eq!(f.algebra.complex().dim(0), 3);
        let x = f.index_of(&[(0, 0)]).unwrap();
        let x2 = f.index_of(&[(0, 0), (0, 0)]).unwrap();
        assert_eq!(f.algebra.mul_basis(x, x)[x2.1], Q::one());
        assert!(f.algebra.mul_basis(x, x2).iter().all(Zero::is_zero));
    }

    #[test]
    fn differential_is_weight_homogeneous() {
        // V: x in degree 1, y in degree 0, dx = y.
        let v = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        let f = free_dga(&v, 3);
        let a = &f.algebra;
        let w = a.weights().unwrap();
        for (n, m) in a.complex().differentials() {
            for col in 0..m.cols() {
                for row in 0..m.rows() {
                    if !m.get(row, col).is_zero() {
                        assert_eq!(w[&(n - 1)][row], w[n][col]);
                    }
                }
            }
        }
        // V is acyclic, so the tensor algebra is quasi-isomorphic to K.
        assert_eq!(a.complex().homology(), [(0, 1)].into());
    }

    #[test]
    fn free_map_of_identity() {
        let v = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        let f = free_dga(&v, 2);
        let id = free_map(&ChainMap::identity(&v), &f, &f).unwrap();
        assert_eq!(id, DgAlgebraMap::identity(&f.algebra));
    }
}
