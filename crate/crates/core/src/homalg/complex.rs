use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{sign, Q};

/// A bounded chain complex of finite-dimensional rational vector spaces.
/// `d(n)` maps degree `n` to degree `n - 1` and is stored as a
/// `dim(n-1) × dim(n)` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainComplex {
    dims: BTreeMap<i64, usize>,
    d: BTreeMap<i64, Matrix>,
}

impl ChainComplex {
    /// Checks shapes and `d ∘ d = 0`. Zero-dimensional degrees and zero
    /// differentials are dropped.
    pub fn new(dims: BTreeMap<i64, usize>, d: BTreeMap<i64, Matrix>) -> Result<ChainComplex> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, k)| *k > 0).collect();
        let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
        let mut kept = BTreeMap::new();
        for (n, m) in d {
            if m.shape() != (dim(n - 1), dim(n)) {
                return Err(Error::InvalidComplex(format!(
                    "d_{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (dim(n - 1), dim(n))
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        for (n, m) in &kept {
            if let Some(prev) = kept.get(&(n - 1)) {
                if !(prev * m).is_zero() {
                    return Err(Error::InvalidComplex(format!("d_{} ∘ d_{n} is not zero", n - 1)));
                }
            }
        }
        Ok(ChainComplex { dims, d: kept })
    }

    pub fn zero() -> ChainComplex {
        ChainComplex::default()
    }

    /// `K^dim` in a single degree.
    pub fn concentrated(degree: i64, dim: usize) -> ChainComplex {
        ChainComplex::new([(degree, dim)].into_iter().collect(), BTreeMap::new()).expect("no differentials")
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Degrees of nonzero dimension, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    pub fn d(&self, n: i64) -> Matrix {
        self.d.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    pub fn differentials(&self) -> &BTreeMap<i64, Matrix> {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// `dim H_n = dim C_n - rank d_n - rank d_{n+1}`.
    pub fn homology_dim(&self, n: i64) -> usize {
        let rk = |k: i64| self.d.get(&k).map_or(0, Matrix::rank);
        self.dim(n) - rk(n) - rk(n + 1)
    }

    /// Nonzero homology dimensions.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        self.support().into_iter().map(|n| (n, self.homology_dim(n))).filter(|(_, h)| *h > 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().is_empty()
    }

    /// Cycle representatives of a basis of `H_n`, with the boundaries they
    /// are measured against.
    pub fn homology_basis(&self, n: i64) -> HomologyBasis {
        let dim = self.dim(n);
        let boundaries = self.d(n + 1).column_basis();
        let cycles = self.d(n).kernel();
        let (_, pivots) = boundaries.hstack(&cycles).rref();
        let chosen: Vec<usize> = pivots.iter().filter(|&&p| p >= boundaries.cols()).map(|p| p - boundaries.cols()).collect();
        let reps = cycles.select_columns(&chosen);
        HomologyBasis { solver: boundaries.hstack(&reps), boundary_rank: boundaries.cols(), reps, dim }
    }

    /// `X[r]_n = X_{n-r}` with differential `(-1)^r d`.
    pub fn shift(&self, r: i64) -> ChainComplex {
        let s = sign(r);
        ChainComplex {
            dims: self.dims.iter().map(|(n, k)| (n + r, *k)).collect(),
            d: self.d.iter().map(|(n, m)| (n + r, m.scale(&s))).collect(),
        }
    }

    /// Degreewise direct sum, `self` first.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let degrees: BTreeSet<i64> = self.dims.keys().chain(other.dims.keys()).copied().collect();
        let dims = degrees.iter().map(|&n| (n, self.dim(n) + other.dim(n))).collect();
        let d = degrees.iter().map(|&n| (n, block_diag(&self.d(n), &other.d(n)))).collect();
        ChainComplex::new(dims, d).expect("direct sum of complexes")
    }
}

pub(crate) fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Representatives of a homology basis in one degree.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    /// Columns are cycles whose classes form a basis.
    pub reps: Matrix,
    solver: Matrix,
    boundary_rank: usize,
    dim: usize,
}

impl HomologyBasis {
    pub fn len(&self) -> usize {
        self.reps.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of the class of a cycle `z`.
    pub fn coords(&self, z: &[Q]) -> Result<Vec<Q>> {
        if z.len() != self.dim {
            return Err(Error::ShapeMismatch(format!("vector of length {} in a space of dimension {}", z.len(), self.dim)));
        }
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let x = self.solver.solve(z).ok_or_else(|| Error::InvalidComplex("vector is not a cycle".into()))?;
        Ok(x[self.boundary_rank..].to_vec())
    }
}

/// A degreewise linear map commuting with the differentials. Missing
/// components are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: BTreeMap<i64, Matrix>) -> Result<ChainMap> {
        let mut kept = BTreeMap::new();
        for (n, m) in components {
            if m.shape() != (target.dim(n), source.dim(n)) {
                return Err(Error::NotChainMap(format!(
                    "component {n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(n), source.dim(n))
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        let f = ChainMap { source, target, components: kept };
        let degrees: BTreeSet<i64> = f.source.dims.keys().chain(f.target.dims.keys()).copied().collect();
        for &n in &degrees {
            let lhs = &f.target.d(n) * &f.component(n);
            let rhs = &f.component(n - 1) * &f.source.d(n);
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(f)
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        let components = x.dims.iter().map(|(n, k)| (*n, Matrix::identity(*k))).collect();
        ChainMap { source: x.clone(), target: x.clone(), components }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn component(&self, n: i64) -> Matrix {
        self.components.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    pub fn components(&self) -> &BTreeMap<i64, Matrix> {
        &self.components
    }

    /// Degrees where either side is nonzero.
    pub fn degrees(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.source.dims.keys().chain(self.target.dims.keys()).copied().collect();
        s.into_iter().collect()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::NonComposable("chain maps with mismatched complexes".into()));
        }
        let components = first.degrees().into_iter().map(|n| (n, &self.component(n) * &first.component(n))).collect();
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), components: prune(components) })
    }

    /// Every component square and invertible.
    pub fn is_iso(&self) -> bool {
        self.iso_witness().is_none()
    }

    pub fn iso_witness(&self) -> Option<i64> {
        self.degrees().into_iter().find(|&n| !self.component(n).is_invertible())
    }

    /// The induced map `H_n(source) -> H_n(target)` in the bases of
    /// [`ChainComplex::homology_basis`].
    pub fn on_homology(&self, n: i64) -> Matrix {
        let hs = self.source.homology_basis(n);
        let ht = self.target.homology_basis(n);
        let f = self.component(n);
        let cols: Vec<Vec<Q>> =
            (0..hs.len()).map(|j| ht.coords(&f.apply(&hs.reps.column(j))).expect("image of a cycle is a cycle")).collect();
        Matrix::from_columns(ht.len(), &cols)
    }

    /// The first degree where the induced map on homology is not invertible.
    pub fn quasi_iso_witness(&self) -> Option<i64> {
        self.degrees().into_iter().find(|&n| {
            let hs = self.source.homology_dim(n);
            let ht = self.target.homology_dim(n);
            hs != ht || (hs > 0 && !self.on_homology(n).is_invertible())
        })
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.quasi_iso_witness().is_none()
    }

    /// The same components between shifted complexes; no sign.
    pub fn shift(&self, r: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(r),
            target: self.target.shift(r),
            components: self.components.iter().map(|(n, m)| (n + r, m.clone())).collect(),
        }
    }
}

fn prune(components: BTreeMap<i64, Matrix>) -> BTreeMap<i64, Matrix> {
    components.into_iter().filter(|(_, m)| !m.is_zero()).collect()
}

/// Convenience for tests and fixtures: a complex from `(degree, dim)` pairs
/// and integer differential entries given row by row.
pub fn complex_from_i64(dims: &[(i64, usize)], d: &[(i64, &[i64])]) -> Result<ChainComplex> {
    let dims: BTreeMap<i64, usize> = dims.iter().copied().collect();
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
    let d = d
        .iter()
        .map(|(n, e)| {
            if e.len() != dim(n - 1) * dim(*n) {
                return Err(Error::InvalidComplex(format!("d_{n} needs {} entries", dim(n - 1) * dim(*n))));
            }
            Ok((*n, Matrix::from_i64(dim(n - 1), dim(*n), e)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    ChainComplex::new(dims, d)
}

pub(crate) fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn homology_vec(x: &ChainComplex) -> Vec<(i64, usize)> {
        x.homology().into_iter().collect()
    }

    #[test]
    fn listed_examples() {
        let zero_d = complex_from_i64(&[(1, 1), (0, 1)], &[]).unwrap();
        assert_eq!(homology_vec(&zero_d), vec![(0, 1), (1, 1)]);
        let acyclic = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        assert!(acyclic.is_acyclic());
        let sum = complex_from_i64(&[(1, 2), (0, 1)], &[(1, &[1, 1])]).unwrap();
        assert_eq!(homology_vec(&sum), vec![(1, 1)]);
    }

    #[test]
    fn d_squared_must_vanish() {
        let err = complex_from_i64(&[(2, 1), (1, 1), (0, 1)], &[(2, &[1]), (1, &[1])]).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex(_)));
    }

    #[test]
    fn quasi_isomorphisms() {
        let acyclic = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        let z = ChainComplex::zero();
        assert!(ChainMap::identity(&acyclic).is_quasi_iso());
        let to_zero = ChainMap::zero(&acyclic, &z);
        assert!(to_zero.is_quasi_iso());
        assert_eq!(to_zero.iso_witness(), Some(0));
        let k0 = ChainComplex::concentrated(0, 1);
        let from_zero = ChainMap::zero(&z, &k0);
        assert_eq!(from_zero.quasi_iso_witness(), Some(0));
        let two = ChainMap::new(k0.clone(), k0.clone(), [(0, Matrix::scalar(1, crate::rational::q(2)))].into()).unwrap();
        assert!(two.is_iso());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let acyclic = complex_from_i64(&[(1, 1), (0, 1)], &[(1, &[1])]).unwrap();
        let err = ChainMap::new(acyclic.clone(), acyclic, [(0, Matrix::identity(1))].into()).unwrap_err();
        assert!(matches!(err, Error::NotChainMap(_)));
    }

    #[test]
    fn shift_reindexes_with_sign() {
        let x = complex_from_i64(&[(1, 2), (0, 1)], &[(1, &[1, 1])]).unwrap();
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(3).shift(-3), x);
        assert_eq!(x.shift(1).d(2), Matrix::from_i64(1, 2, &[-1, -1]));
        for r in -2..=2 {
            for n in -3..=4 {
                assert_eq!(x.shift(r).homology_dim(n), x.homology_dim(n - r));
            }
        }
    }

    #[test]
    fn induced_map_on_homology() {
        // H_0 of Q --[1 1]^T--> Q^2 is one-dimensional.
        let x = complex_from_i64(&[(1, 1), (0, 2)], &[(1, &[1, 1])]).unwrap();
        let y = ChainComplex::concentrated(0, 1);
        let f = ChainMap::new(x.clone(), y, [(0, Matrix::from_i64(1, 2, &[1, -1]))].into()).unwrap();
        assert!(f.is_quasi_iso());
        let g = ChainMap::new(x, ChainComplex::concentrated(0, 1), [(0, Matrix::from_i64(1, 2, &[1, 1]))].into());
        assert!(g.is_err());
    }
}
