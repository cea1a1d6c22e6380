use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::complex::{is_zero_vec, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{format_q, sign, Q};

/// A basis element: degree and index within that degree.
pub type Basis = (i64, usize);

/// Sparse products on basis pairs; the result lives in the sum of degrees.
pub type MultTable = BTreeMap<(Basis, Basis), Vec<(usize, Q)>>;

/// An associative unital dg-algebra over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct DgAlgebra {
    complex: ChainComplex,
    unit: Vec<Q>,
    mult: MultTable,
    labels: BTreeMap<i64, Vec<String>>,
    weights: Option<BTreeMap<i64, Vec<usize>>>,
}

pub type AlgRef = Arc<DgAlgebra>;

impl fmt::Debug for DgAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DgAlgebra").field("dims", self.complex.dims()).field("products", &self.mult.len()).finish()
    }
}

impl DgAlgebra {
    /// Validates unitality, associativity and the graded Leibniz rule on
    /// basis elements.
    pub fn new(complex: ChainComplex, unit: Vec<Q>, mult: MultTable, labels: Option<BTreeMap<i64, Vec<String>>>) -> Result<DgAlgebra> {
        let a = DgAlgebra::unchecked(complex, unit, mult, labels)?;
        a.check_axioms()?;
        Ok(a)
    }

    pub(crate) fn unchecked(
        complex: ChainComplex,
        unit: Vec<Q>,
        mult: MultTable,
        labels: Option<BTreeMap<i64, Vec<String>>>,
    ) -> Result<DgAlgebra> {
        if unit.len() != complex.dim(0) {
            return Err(Error::InvalidAlgebra(format!("unit has length {}, degree 0 has dimension {}", unit.len(), complex.dim(0))));
        }
        for (((p, i), (q, j)), out) in &mult {
            if *i >= complex.dim(*p) || *j >= complex.dim(*q) || out.iter().any(|(k, _)| *k >= complex.dim(p + q)) {
                return Err(Error::InvalidAlgebra(format!("product entry ({p},{i})·({q},{j}) out of range")));
            }
        }
        let labels = match labels {
            Some(l) => {
                for (n, d) in complex.dims() {
                    if l.get(n).map_or(0, Vec::len) != *d {
                        return Err(Error::InvalidAlgebra(format!("labels in degree {n} do not match the dimension")));
                    }
                }
                l
            }
            None => complex.dims().iter().map(|(n, d)| (*n, (0..*d).map(|i| format!("e{n}.{i}")).collect())).collect(),
        };
        let mult = mult.into_iter().map(|(k, v)| (k, v.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>())).filter(|(_, v)| !v.is_empty()).collect();
        Ok(DgAlgebra { complex, unit, mult, labels, weights: None })
    }

    pub(crate) fn with_weights(mut self, weights: BTreeMap<i64, Vec<usize>>) -> Self {
        self.weights = Some(weights);
        self
    }

    fn check_axioms(&self) -> Result<()> {
        let basis = self.basis();
        for &b in &basis {
            let e = self.basis_vector(b);
            if self.mul(0, &self.unit, b.0, &e) != e || self.mul(b.0, &e, 0, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!("unit is not neutral on {}", self.label(b))));
            }
        }
        for &a in &basis {
            for &b in &basis {
                let ab = self.mul_basis(a, b);
                let n = a.0 + b.0;
                let lhs = self.complex.d(n).apply(&ab);
                let da = self.complex.d(a.0).column(a.1);
                let db = self.complex.d(b.0).column(b.1);
                let mut rhs = self.mul(a.0 - 1, &da, b.0, &self.basis_vector(b));
                let right = self.mul(a.0, &self.basis_vector(a), b.0 - 1, &db);
                let s = sign(a.0);
                for (x, y) in rhs.iter_mut().zip(right) {
                    *x += &s * y;
                }
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!("Leibniz rule fails on ({}, {})", self.label(a), self.label(b))));
                }
                if is_zero_vec(&ab) {
                    continue;
                }
                for &c in &basis {
                    let left = self.mul(n, &ab, c.0, &self.basis_vector(c));
                    let bc = self.mul_basis(b, c);
                    let right = self.mul(a.0, &self.basis_vector(a), b.0 + c.0, &bc);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
            // Triples with a·b = 0 still need (a·b)·c = a·(b·c) = 0.
            for &b in &basis {
                if !is_zero_vec(&self.mul_basis(a, b)) {
                    continue;
                }
                for &c in &basis {
                    let bc = self.mul_basis(b, c);
                    if !is_zero_vec(&self.mul(a.0, &self.basis_vector(a), b.0 + c.0, &bc)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The rationals in degree 0.
    pub fn ground() -> DgAlgebra {
        let mut mult = MultTable::new();
        mult.insert(((0, 0), (0, 0)), vec![(0, Q::one())]);
        let labels = [(0, vec!["1".to_string()])].into();
        DgAlgebra::new(ChainComplex::concentrated(0, 1), vec![Q::one()], mult, Some(labels)).expect("ground field")
    }

    /// `n × n` matrices in degree 0, basis `E_ij` in row-major order.
    pub fn matrices(n: usize) -> DgAlgebra {
        let idx = |i: usize, j: usize| i * n + j;
        let mut mult = MultTable::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    mult.insert(((0, idx(i, j)), (0, idx(j, k))), vec![(idx(i, k), Q::one())]);
                }
            }
        }
        let mut unit = vec![Q::zero(); n * n];
        for i in 0..n {
            unit[idx(i, i)] = Q::one();
        }
        let labels = [(0, (0..n * n).map(|t| format!("E{}{}", t / n + 1, t % n + 1)).collect())].into();
        DgAlgebra::new(ChainComplex::concentrated(0, n * n), unit, mult, Some(labels)).expect("matrix algebra")
    }

    /// `K[x]/(x²)` in degree 0, basis `1, x`.
    pub fn dual_numbers() -> DgAlgebra {
        let mut mult = MultTable::new();
        mult.insert(((0, 0), (0, 0)), vec![(0, Q::one())]);
        mult.insert(((0, 0), (0, 1)), vec![(1, Q::one())]);
        mult.insert(((0, 1), (0, 0)), vec![(1, Q::one())]);
        let labels = [(0, vec!["1".to_string(), "x".to_string()])].into();
        DgAlgebra::new(ChainComplex::concentrated(0, 2), vec![Q::one(), Q::zero()], mult, Some(labels)).expect("dual numbers")
    }

    /// `B ⊕ M` where `M` squares to zero and `B` acts on it through the
    /// augmentation `ε` (given on the degree-0 basis of `B`). In each degree
    /// the basis lists `B` first, then `M`.
    pub fn square_zero_extension(base: &DgAlgebra, augmentation: &[Q], ideal: &ChainComplex, ideal_labels: &[(i64, Vec<String>)]) -> Result<DgAlgebra> {
        if augmentation.len() != base.complex.dim(0) {
            return Err(Error::InvalidAlgebra("augmentation must be given on degree 0".into()));
        }
        let complex = base.complex.direct_sum(ideal);
        let mut mult = MultTable::new();
        for ((a, b), out) in &base.mult {
            mult.insert((*a, *b), out.clone());
        }
        for (i, e) in augmentation.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            for (&n, &k) in ideal.dims() {
                let off = base.complex.dim(n);
                for j in 0..k {
                    mult.insert(((0, i), (n, off + j)), vec![(off + j, e.clone())]);
                    mult.insert(((n, off + j), (0, i)), vec![(off + j, e.clone())]);
                }
            }
        }
        let mut labels = base.labels.clone();
        let named: BTreeMap<i64, Vec<String>> = ideal_labels.iter().cloned().collect();
        for (&n, &k) in ideal.dims() {
            let entry = labels.entry(n).or_default();
            match named.get(&n) {
                Some(v) if v.len() == k => entry.extend(v.iter().cloned()),
                _ => entry.extend((0..k).map(|j| format!("m{n}.{j}"))),
            }
        }
        let mut unit = base.unit.clone();
        unit.resize(complex.dim(0), Q::zero());
        DgAlgebra::new(complex, unit, mult, Some(labels))
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn products(&self) -> &MultTable {
        &self.mult
    }

    pub fn labels(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.labels
    }

    pub fn weights(&self) -> Option<&BTreeMap<i64, Vec<usize>>> {
        self.weights.as_ref()
    }

    pub fn label(&self, b: Basis) -> String {
        self.labels.get(&b.0).and_then(|v| v.get(b.1)).cloned().unwrap_or_else(|| format!("e{}.{}", b.0, b.1))
    }

    pub fn basis(&self) -> Vec<Basis> {
        self.complex.dims().iter().flat_map(|(&n, &k)| (0..k).map(move |i| (n, i))).collect()
    }

    pub fn basis_vector(&self, b: Basis) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.complex.dim(b.0)];
        v[b.1] = Q::one();
        v
    }

    pub fn mul_basis(&self, a: Basis, b: Basis) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.complex.dim(a.0 + b.0)];
        if let Some(terms) = self.mult.get(&(a, b)) {
            for (k, c) in terms {
                out[*k] += c;
            }
        }
        out
    }

    /// Product of homogeneous vectors of degrees `p` and `q`.
    pub fn mul(&self, p: i64, a: &[Q], q: i64, b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.complex.dim(p + q)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some(terms) = self.mult.get(&((p, i), (q, j))) {
                    let xy = x * y;
                    for (k, c) in terms {
                        out[*k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Human-readable form of a homogeneous vector.
    pub fn render(&self, degree: i64, v: &[Q]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let l = self.label((degree, i));
                if c.is_one() {
                    l
                } else {
                    format!("{}*{l}", format_q(c))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A chain map preserving unit and products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebraMap {
    pub source: AlgRef,
    pub target: AlgRef,
    chain: ChainMap,
}

impl DgAlgebraMap {
    pub fn new(source: AlgRef, target: AlgRef, components: BTreeMap<i64, Matrix>) -> Result<DgAlgebraMap> {
        let chain = ChainMap::new(source.complex.clone(), target.complex.clone(), components)
            .map_err(|e| Error::NotAlgebraMap(e.to_string()))?;
        let f = DgAlgebraMap { source, target, chain };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.chain.component(0).apply(&s.unit) != t.unit {
            return Err(Error::NotAlgebraMap("unit is not preserved".into()));
        }
        for a in s.basis() {
            let fa = self.chain.component(a.0).apply(&s.basis_vector(a));
            for b in s.basis() {
                let fb = self.chain.component(b.0).apply(&s.basis_vector(b));
                let lhs = self.chain.component(a.0 + b.0).apply(&s.mul_basis(a, b));
                if lhs != t.mul(a.0, &fa, b.0, &fb) {
                    return Err(Error::NotAlgebraMap(format!("product ({}, {}) is not preserved", s.label(a), s.label(b))));
                }
            }
        }
        Ok(())
    }

    pub fn identity(a: &AlgRef) -> DgAlgebraMap {
        DgAlgebraMap { source: a.clone(), target: a.clone(), chain: ChainMap::identity(&a.complex) }
    }

    pub fn chain(&self) -> &ChainMap {
        &self.chain
    }

    pub fn component(&self, n: i64) -> Matrix {
        self.chain.component(n)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &DgAlgebraMap) -> Result<DgAlgebraMap> {
        if first.target != self.source {
            return Err(Error::NonComposable("algebra maps with mismatched algebras".into()));
        }
        Ok(DgAlgebraMap { source: first.source.clone(), target: self.target.clone(), chain: self.chain.after(&first.chain)? })
    }

    pub fn is_iso(&self) -> bool {
        self.chain.is_iso()
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.chain.is_quasi_iso()
    }

    /// The inverse of an isomorphism, itself an algebra map.
    pub fn inverse(&self) -> Option<DgAlgebraMap> {
        let comps = self
            .chain
            .degrees()
            .into_iter()
            .map(|n| self.chain.component(n).inverse().map(|m| (n, m)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        let chain = ChainMap::new(self.target.complex.clone(), self.source.complex.clone(), comps).ok()?;
        Some(DgAlgebraMap { source: self.target.clone(), target: self.source.clone(), chain })
    }

    /// `self^n` for an endomorphism, with negative powers through the inverse.
    pub fn power(&self, n: i64) -> Result<DgAlgebraMap> {
        if self.source != self.target {
            return Err(Error::ShapeMismatch("power of a map that is not an endomorphism".into()));
        }
        let base = if n < 0 { self.inverse().ok_or_else(|| Error::NotAlgebraMap("negative power of a non-invertible map".into()))? } else { self.clone() };
        let comps = base.chain.degrees().into_iter().map(|d| (d, base.chain.component(d).pow(n.unsigned_abs()))).collect();
        let chain = ChainMap::new(self.source.complex.clone(), self.source.complex.clone(), comps)?;
        Ok(DgAlgebraMap { source: self.source.clone(), target: self.source.clone(), chain })
    }
}
