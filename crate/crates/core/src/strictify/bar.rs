//! The cotriple resolution `T^{k+1}(A)` for `T` the object-wise free
//! algebra, truncated in simplicial depth and in weight.
//!
//! A basis element of `T^{k+1}(A)` is a tree: the root is a word at depth 0,
//! word nodes sit at depths `0..=k` and leaves at depth `k+1` are basis
//! elements of `A`. Its weight is the number of terminal nodes (leaves and
//! empty words). Faces never raise the weight and degeneracies keep it, so
//! the trees of weight at most `w` span a simplicial sub-object that still
//! carries the extra degeneracy. Levels are therefore linear sub-spans, not
//! algebras.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::RangeInclusive;

use num_traits::{One, Zero};

use crate::aqft::AqftModel;
use crate::cat::Obj;
use crate::error::{Error, Result};
use crate::homalg::{AlgRef, Basis, ChainComplex, ChainMap, DgAlgebra};
use crate::linalg::Matrix;
use crate::rational::{sign, Q};
use crate::report::{Coverage, Report, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(Basis),
    Node(Vec<Tree>),
}

type Combo = BTreeMap<Tree, Q>;

fn single(t: Tree) -> Combo {
    [(t, Q::one())].into()
}

fn add_into(acc: &mut Combo, t: Tree, c: Q) {
    use std::collections::btree_map::Entry;
    match acc.entry(t) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Tree {
    pub fn terminals(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(c) if c.is_empty() => 1,
            Tree::Node(c) => c.iter().map(Tree::terminals).sum(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Tree::Leaf(b) => b.0,
            Tree::Node(c) => c.iter().map(Tree::degree).sum(),
        }
    }

    fn children(&self) -> &[Tree] {
        match self {
            Tree::Node(c) => c,
            Tree::Leaf(_) => &[],
        }
    }

    pub fn render(&self, a: &DgAlgebra) -> String {
        match self {
            Tree::Leaf(b) => a.label(*b),
            Tree::Node(c) => format!("[{}]", c.iter().map(|t| t.render(a)).collect::<Vec<_>>().join(" ")),
        }
    }

    fn nonunary_depths(&self, depth: usize, out: &mut BTreeSet<usize>) {
        if let Tree::Node(c) = self {
            if c.len() != 1 {
                out.insert(depth);
            }
            for t in c {
                t.nonunary_depths(depth + 1, out);
            }
        }
    }

    /// Whether this tree of `T^{k+1}(A)` lies in the image of a degeneracy,
    /// i.e. some depth in `1..=k` has only one-child word nodes.
    pub fn is_degenerate(&self, k: usize) -> bool {
        let mut seen = BTreeSet::new();
        self.nonunary_depths(0, &mut seen);
        (1..=k).any(|j| !seen.contains(&j))
    }

    /// Concatenates the words at depth `i + 1` into their parents at depth `i`.
    fn concat_at(&self, i: usize) -> Tree {
        match self {
            Tree::Leaf(_) => unreachable!("concatenation below the word levels"),
            Tree::Node(c) if i == 0 => Tree::Node(c.iter().flat_map(|w| w.children().iter().cloned()).collect()),
            Tree::Node(c) => Tree::Node(c.iter().map(|t| t.concat_at(i - 1)).collect()),
        }
    }

    /// Wraps every child of the depth-`i` nodes into a one-letter word.
    fn wrap_at(&self, i: usize) -> Tree {
        match self {
            Tree::Leaf(_) => unreachable!("degeneracy below the word levels"),
            Tree::Node(c) if i == 0 => Tree::Node(c.iter().map(|t| Tree::Node(vec![t.clone()])).collect()),
            Tree::Node(c) => Tree::Node(c.iter().map(|t| t.wrap_at(i - 1)).collect()),
        }
    }
}

/// The word `a_1 … a_m` multiplied out in `A`.
fn evaluate_word(a: &DgAlgebra, letters: &[Tree]) -> Combo {
    let mut deg = 0;
    let mut v = a.unit().to_vec();
    for l in letters {
        let Tree::Leaf(b) = l else { unreachable!("evaluation of a nested word") };
        v = a.mul(deg, &v, b.0, &a.basis_vector(*b));
        deg += b.0;
    }
    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Tree::Leaf((deg, i)), c)).collect()
}

/// Multiplies out the words at depth `depth` (whose children are leaves).
fn evaluate_at(a: &DgAlgebra, t: &Tree, depth: usize) -> Combo {
    match t {
        Tree::Leaf(_) => unreachable!("evaluation below the word levels"),
        Tree::Node(c) if depth == 0 => evaluate_word(a, c),
        Tree::Node(c) => {
            let mut acc: Vec<(Vec<Tree>, Q)> = vec![(Vec::new(), Q::one())];
            for child in c {
                let options = evaluate_at(a, child, depth - 1);
                let mut next = Vec::with_capacity(acc.len() * options.len());
                for (prefix, x) in &acc {
                    for (o, y) in &options {
                        let mut p = prefix.clone();
                        p.push(o.clone());
                        next.push((p, x * y));
                    }
                }
                acc = next;
            }
            acc.into_iter().map(|(c, x)| (Tree::Node(c), x)).collect()
        }
    }
}

/// The derivation extending the differential of `A` over the leaves, with
/// the sign of the degrees to the left.
fn internal_d(a: &DgAlgebra, t: &Tree, before: i64) -> Vec<(Tree, Q)> {
    match t {
        Tree::Leaf(b) => {
            let d = a.complex().d(b.0);
            let s = sign(before);
            (0..d.rows()).filter(|r| !d.get(*r, b.1).is_zero()).map(|r| (Tree::Leaf((b.0 - 1, r)), &s * d.get(r, b.1))).collect()
        }
        Tree::Node(c) => {
            let mut out = Vec::new();
            let mut deg = before;
            for (j, child) in c.iter().enumerate() {
                for (t2, x) in internal_d(a, child, deg) {
                    let mut c2 = c.clone();
                    c2[j] = t2;
                    out.push((Tree::Node(c2), x));
                }
                deg += child.degree();
            }
            out
        }
    }
}

/// All trees of height `h` (word levels `0..h`, leaves at depth `h`) with at
/// most `budget` terminals, over the given leaves.
struct TreeGen<'a> {
    leaves: &'a [Basis],
    memo: HashMap<(usize, usize), Vec<Tree>>,
}

impl<'a> TreeGen<'a> {
    fn new(leaves: &'a [Basis]) -> Self {
        TreeGen { leaves, memo: HashMap::new() }
    }

    fn trees(&mut self, h: usize, budget: usize) -> Vec<Tree> {
        if budget == 0 {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(&(h, budget)) {
            return v.clone();
        }
        let out = if h == 0 {
            self.leaves.iter().map(|b| Tree::Leaf(*b)).collect()
        } else {
            let below = self.trees(h - 1, budget);
            let mut out = vec![Tree::Node(Vec::new())];
            let mut seqs: Vec<(Vec<Tree>, usize)> = vec![(Vec::new(), 0)];
            while !seqs.is_empty() {
                let mut next = Vec::new();
                for (s, used) in &seqs {
                    for t in &below {
                        let c = t.terminals();
                        if used + c <= budget {
                            let mut s2 = s.clone();
                            s2.push(t.clone());
                            out.push(Tree::Node(s2.clone()));
                            next.push((s2, used + c));
                        }
                    }
                }
                seqs = next;
            }
            out
        };
        self.memo.insert((h, budget), out.clone());
        out
    }
}

/// The resolution at one object of the base.
#[derive(Clone, Debug)]
pub struct ObjectBar {
    pub object: Obj,
    pub label: String,
    pub algebra: AlgRef,
    /// `levels[k]` is the basis of `T^{k+1}(A)` within the weight bound.
    pub levels: Vec<Vec<Tree>>,
}

impl ObjectBar {
    fn build(object: Obj, label: String, algebra: AlgRef, depth: usize, weight: usize) -> ObjectBar {
        let basis = algebra.basis();
        let mut generator = TreeGen::new(&basis);
        let levels = (0..=depth).map(|k| generator.trees(k + 1, weight)).collect();
        ObjectBar { object, label, algebra, levels }
    }

    /// `d_i: T^{k+1}(A) -> T^k(A)`; `face(0, 0, _)` is the augmentation and
    /// lands on leaves, the basis of `A`.
    pub fn face(&self, k: usize, i: usize, t: &Tree) -> Combo {
        assert!(i <= k);
        if i < k {
            single(t.concat_at(i))
        } else {
            evaluate_at(&self.algebra, t, k)
        }
    }

    /// `s_i: T^{k+1}(A) -> T^{k+2}(A)`.
    pub fn degeneracy(&self, i: usize, t: &Tree) -> Tree {
        t.wrap_at(i)
    }

    /// The extra degeneracy, defined on the underlying complexes only.
    pub fn extra_degeneracy(&self, t: &Tree) -> Tree {
        Tree::Node(vec![t.clone()])
    }

    pub fn internal(&self, t: &Tree) -> Combo {
        let mut out = Combo::new();
        for (t2, x) in internal_d(&self.algebra, t, 0) {
            add_into(&mut out, t2, x);
        }
        out
    }

    fn faces_of(&self, k: usize, i: usize, c: &Combo) -> Combo {
        let mut out = Combo::new();
        for (t, x) in c {
            for (t2, y) in self.face(k, i, t) {
                add_into(&mut out, t2, x * &y);
            }
        }
        out
    }

    fn degeneracies_of(&self, i: usize, c: &Combo) -> Combo {
        c.iter().map(|(t, x)| (self.degeneracy(i, t), x.clone())).collect()
    }

    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// First simplicial identity that fails, as a witness.
    fn simplicial_witness(&self) -> Option<Vec<String>> {
        let depth = self.levels.len() - 1;
        let w = |name: String, t: &Tree| Some(vec![self.label.clone(), name, t.render(&self.algebra)]);
        for k in 0..=depth {
            for t in &self.levels[k] {
                let one = single(t.clone());
                // d_i d_j = d_{j-1} d_i for i < j, including the augmentation as d_0 on level 0.
                if k >= 1 {
                    for j in 1..=k {
                        for i in 0..j {
                            let lhs = self.faces_of(k - 1, i, &self.faces_of(k, j, &one));
                            let rhs = self.faces_of(k - 1, j - 1, &self.faces_of(k, i, &one));
                            if lhs != rhs {
                                return w(format!("d{i} d{j} = d{} d{i}", j - 1), t);
                            }
                        }
                    }
                }
                if k + 1 <= depth {
                    for j in 0..=k {
                        let sj = self.degeneracies_of(j, &one);
                        for i in 0..=k + 1 {
                            let lhs = self.faces_of(k + 1, i, &sj);
                            let rhs = if i < j {
                                self.degeneracies_of(j - 1, &self.faces_of(k, i, &one))
                            } else if i == j || i == j + 1 {
                                one.clone()
                            } else {
                                self.degeneracies_of(j, &self.faces_of(k, i - 1, &one))
                            };
                            if lhs != rhs {
                                return w(format!("d{i} s{j}"), t);
                            }
                        }
                    }
                }
                if k + 2 <= depth {
                    for j in 0..=k {
                        for i in 0..=j {
                            let lhs = self.degeneracies_of(i, &self.degeneracies_of(j, &one));
                            let rhs = self.degeneracies_of(j + 1, &self.degeneracies_of(i, &one));
                            if lhs != rhs {
                                return w(format!("s{i} s{j} = s{} s{i}", j + 1), t);
                            }
                        }
                    }
                }
                // Faces and degeneracies commute with the internal differential.
                let dt = self.internal(t);
                for i in 0..=k {
                    let lhs = self.faces_of(k, i, &dt);
                    let fi = self.faces_of(k, i, &one);
                    let mut rhs = Combo::new();
                    for (t2, x) in &fi {
                        for (t3, y) in self.internal(t2) {
                            add_into(&mut rhs, t3, x * &y);
                        }
                    }
                    if lhs != rhs {
                        return w(format!("d{i} commutes with d"), t);
                    }
                }
            }
        }
        None
    }

    /// `ε(uv) = ε(u)ε(v)` whenever `uv` fits in the weight bound, and
    /// `ε(1) = 1`.
    fn multiplicativity_witness(&self, weight: usize) -> Option<Vec<String>> {
        let a = &self.algebra;
        let unit = evaluate_word(a, &[]);
        let expected: Combo = a.unit().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Tree::Leaf((0, i)), c.clone())).collect();
        if unit != expected {
            return Some(vec![self.label.clone(), "unit".into()]);
        }
        let words = &self.levels[0];
        for u in words {
            for v in words {
                let (lu, lv) = (u.children().len(), v.children().len());
                if lu + lv > weight {
                    continue;
                }
                let uv: Vec<Tree> = u.children().iter().chain(v.children()).cloned().collect();
                let lhs = evaluate_word(a, &uv);
                let to_vec = |c: &Combo, deg: i64| {
                    let mut x = vec![Q::zero(); a.complex().dim(deg)];
                    for (t, y) in c {
                        if let Tree::Leaf(b) = t {
                            x[b.1] = y.clone();
                        }
                    }
                    x
                };
                let (du, dv) = (u.degree(), v.degree());
                let prod = a.mul(du, &to_vec(&self.face(0, 0, u), du), dv, &to_vec(&self.face(0, 0, v), dv));
                let rhs: Combo = prod.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Tree::Leaf((du + dv, i)), c)).collect();
                if lhs != rhs {
                    return Some(vec![self.label.clone(), u.render(a), v.render(a)]);
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct BarResolution {
    pub theory: AqftModel,
    pub depth: usize,
    pub weight: usize,
    pub objects: Vec<ObjectBar>,
}

pub const CHECK_SIMPLICIAL: &str = "simplicial identities";
pub const CHECK_AUGMENTATION: &str = "augmentation is an algebra map";

impl BarResolution {
    pub fn check(&self) -> Report {
        let mut r = Report::new(format!("bar resolution of {} (depth {}, weight {})", self.theory.name, self.depth, self.weight));
        let simplicial = self.objects.iter().find_map(ObjectBar::simplicial_witness);
        r.push(Verdict::from_outcome(CHECK_SIMPLICIAL, Coverage::Exhaustive, simplicial).with_note(format!("levels 0..={}", self.depth)));
        let mult = self.objects.iter().find_map(|o| o.multiplicativity_witness(self.weight));
        r.push(Verdict::from_outcome(CHECK_AUGMENTATION, Coverage::Exhaustive, mult).with_note(format!("products of weight <= {}", self.weight)));
        r
    }
}

pub fn bar_truncated(model: &AqftModel, depth: usize, weight: usize) -> Result<BarResolution> {
    if depth < 1 || weight < 1 {
        return Err(Error::TruncationTooSmall(format!("depth {depth} and weight {weight} must both be at least 1")));
    }
    if !model.base.rel.is_empty() {
        return Err(Error::BackendUnsupported("the bar resolution is only built for empty orthogonality".into()));
    }
    let cat = &model.base.cat;
    let objects = cat.objects().ok_or_else(|| Error::BackendUnsupported(format!("bar resolution over parametric {}", cat.name())))?;
    let objects = objects
        .into_iter()
        .map(|x| Ok(ObjectBar::build(x.clone(), cat.obj_label(&x), model.algebra(&x)?, depth, weight)))
        .collect::<Result<_>>()?;
    Ok(BarResolution { theory: model.clone(), depth, weight, objects })
}

/// The normalized total complex at one object, its augmentation onto `A`,
/// and the degrees in which the depth cut-off cannot change homology.
#[derive(Clone, Debug)]
pub struct ObjectTot {
    pub object: String,
    pub complex: ChainComplex,
    pub augmentation: ChainMap,
    pub trusted: Vec<i64>,
    /// First trusted degree where the augmentation fails to be a homology
    /// isomorphism.
    pub failing: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Totalization {
    pub window: (i64, i64),
    pub objects: Vec<ObjectTot>,
}

pub const CHECK_TOT_QUASI_ISO: &str = "augmentation is a quasi-isomorphism on the trusted window";

impl Totalization {
    pub fn verdict(&self) -> Verdict {
        let bad = self.objects.iter().find_map(|o| o.failing.map(|d| vec![o.object.clone(), d.to_string()]));
        let trusted: Vec<String> = self.objects.iter().map(|o| format!("{}: {:?}", o.object, o.trusted)).collect();
        Verdict::from_outcome(CHECK_TOT_QUASI_ISO, Coverage::Exhaustive, bad).with_note(format!("trusted degrees {}", trusted.join("; ")))
    }
}

/// Total degrees fed by normalized levels above the depth cut-off. The
/// normalized part of level `k` vanishes once `k >= 2w`, since each of the
/// depths `1..=k` needs a branching or an empty word.
fn overflow_degrees(algebra: &DgAlgebra, depth: usize, weight: usize) -> BTreeSet<i64> {
    let degrees: Vec<Basis> = algebra.complex().support().into_iter().map(|d| (d, 0)).collect();
    let mut generator = TreeGen::new(&degrees);
    let mut out = BTreeSet::new();
    for k in depth + 1..2 * weight {
        for t in generator.trees(k + 1, weight) {
            if !t.is_degenerate(k) {
                out.insert(k as i64 + t.degree());
            }
        }
    }
    out
}

pub fn tot_normalized(res: &BarResolution, window: RangeInclusive<i64>) -> Result<Totalization> {
    let mut objects = Vec::new();
    for ob in &res.objects {
        let a = &ob.algebra;
        let overflow = overflow_degrees(a, res.depth, res.weight);
        let trusted: Vec<i64> = window.clone().filter(|n| !overflow.contains(n) && !overflow.contains(&(n + 1))).collect();
        if trusted.is_empty() {
            return Err(Error::WindowExceedsTruncation(format!(
                "no degree in [{}, {}] is unaffected by depth {} at weight {}",
                window.start(),
                window.end(),
                res.depth,
                res.weight
            )));
        }

        let mut basis: BTreeMap<i64, Vec<(usize, Tree)>> = BTreeMap::new();
        for (k, level) in ob.levels.iter().enumerate() {
            for t in level {
                if !t.is_degenerate(k) {
                    basis.entry(k as i64 + t.degree()).or_default().push((k, t.clone()));
                }
            }
        }
        let index: HashMap<(usize, Tree), usize> =
            basis.values().flat_map(|v| v.iter().enumerate().map(|(i, e)| (e.clone(), i))).collect();
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(n, v)| (*n, v.len())).collect();
        let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);

        let mut d = BTreeMap::new();
        for (&n, cells) in &basis {
            let mut m = Matrix::zeros(dim(n - 1), cells.len());
            for (col, (k, t)) in cells.iter().enumerate() {
                let mut image = Combo::new();
                if *k >= 1 {
                    for i in 0..=*k {
                        for (t2, x) in ob.face(*k, i, t) {
                            add_into(&mut image, t2, sign(i as i64) * x);
                        }
                    }
                    // Degenerate faces vanish in the normalized quotient.
                    for (t2, x) in image {
                        match index.get(&(k - 1, t2.clone())) {
                            Some(row) => m.add_to(*row, col, &x),
                            None => debug_assert!(t2.is_degenerate(k - 1)),
                        }
                    }
                }
                let s = sign(*k as i64);
                for (t2, x) in ob.internal(t) {
                    m.add_to(index[&(*k, t2)], col, &(&s * x));
                }
            }
            d.insert(n, m);
        }
        let complex = ChainComplex::new(dims.clone(), d)?;

        let mut comps = BTreeMap::new();
        for (&n, cells) in &basis {
            let mut m = Matrix::zeros(a.complex().dim(n), cells.len());
            for (col, (k, t)) in cells.iter().enumerate() {
                if *k == 0 {
                    for (leaf, x) in ob.face(0, 0, t) {
                        if let Tree::Leaf(b) = leaf {
                            m.set(b.1, col, x);
                        }
                    }
                }
            }
            comps.insert(n, m);
        }
        let augmentation = ChainMap::new(complex.clone(), a.complex().clone(), comps)?;
        let failing = trusted.iter().copied().find(|n| {
            let h = augmentation.on_homology(*n);
            !(h.is_square() && (h.rows() == 0 || h.is_invertible()))
        });
        objects.push(ObjectTot { object: ob.label.clone(), complex, augmentation, trusted, failing });
    }
    Ok(Totalization { window: (*window.start(), *window.end()), objects })
}
