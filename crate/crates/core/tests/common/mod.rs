//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use aqft_core::cat::{CatRef, Category, FiniteCategory, Functor, Mor, Obj};
use aqft_core::corpus::finite_category;
use aqft_core::homalg::{ChainComplex, ChainMap};
use aqft_core::linalg::Matrix;
use aqft_core::operad::{OperadOp, Perm};
use aqft_core::ortho::{closure, OrthoCat, OrthoRel};
use aqft_core::rational::{q, Q};
use aqft_core::report::SampleConfig;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- categories ----

/// A random small category together with a functor onto a coarser one.
pub struct Sample {
    pub cat: CatRef,
    pub quotient: Functor,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn preorder(name: &str, objects: Vec<String>, leq: &[(usize, usize)]) -> CatRef {
    Category::enumerated(FiniteCategory::from_preorder(name, objects, leq).expect("preorder"))
}

pub fn non_identity_count(cat: &Category) -> usize {
    cat.morphisms().unwrap().iter().filter(|f| !cat.is_identity(f).unwrap()).count()
}

/// Objects `0..n` with random arrows `i -> j` for `i < j`, at most
/// `max_arrows` after transitive closure. The quotient sends each object to
/// its height in a chain.
fn random_preorder<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> Sample {
    loop {
        let n = rng.gen_range(2..=max_objects);
        let p = rng.gen_range(0.2..0.7);
        let leq: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)).collect();
        let cat = preorder("P", names("X", n), &leq);
        if non_identity_count(&cat) > max_arrows {
            continue;
        }
        let mut height = vec![0usize; n];
        for j in 0..n {
            for i in 0..j {
                if cat.hom(&Obj::Idx(i), &Obj::Idx(j)).unwrap().len() == 1 {
                    height[j] = height[j].max(height[i] + 1);
                }
            }
        }
        let levels = height.iter().max().unwrap() + 1;
        let chain = preorder("Chain", names("H", levels), &(1..levels).map(|i| (i - 1, i)).collect::<Vec<_>>());
        let objects: BTreeMap<Obj, Obj> = (0..n).map(|i| (Obj::Idx(i), chain.parse_obj(&format!("H{}", height[i])).unwrap())).collect();
        let morphisms = cat
            .morphisms()
            .unwrap()
            .into_iter()
            .map(|f| {
                let (a, b) = (&objects[&cat.source(&f).unwrap()], &objects[&cat.target(&f).unwrap()]);
                (f, chain.hom(a, b).unwrap()[0].clone())
            })
            .collect();
        let quotient = Functor::table("height", &cat, &chain, objects, morphisms).expect("monotone");
        return Sample { cat, quotient };
    }
}

/// Sources and targets with parallel arrows between them and no composites.
/// The quotient collapses it onto a single arrow `S -> T`.
fn random_quiver<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> Sample {
    let s = rng.gen_range(1..=(max_objects - 1).min(3));
    let t = rng.gen_range(1..=(max_objects - s).min(3));
    let k = rng.gen_range(1..=max_arrows);
    let mut objs: Vec<String> = names("S", s);
    objs.extend(names("T", t));
    let arrows: Vec<(String, String, String)> =
        (0..k).map(|i| (format!("a{i}"), format!("S{}", rng.gen_range(0..s)), format!("T{}", rng.gen_range(0..t)))).collect();
    let obj_refs: Vec<&str> = objs.iter().map(String::as_str).collect();
    let arrow_refs: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    let cat = finite_category("Q", &obj_refs, &arrow_refs, &[]).expect("quiver");
    let st = preorder("ST", vec!["S".into(), "T".into()], &[(0, 1)]);
    let objects: Vec<(&str, &str)> = obj_refs.iter().map(|o| (*o, if o.starts_with('S') { "S" } else { "T" })).collect();
    let morphisms: Vec<(&str, &str)> = arrows.iter().map(|(a, _, _)| (a.as_str(), "S->T")).collect();
    let quotient = Functor::from_labels("collapse", &cat, &st, &objects, &morphisms).expect("collapse");
    Sample { cat, quotient }
}

/// Arrows `f_i: M_i -> N` with an involution `s` of `N` and `g_i = s f_i`.
/// The quotient forgets the involution.
fn random_involution<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> Sample {
    let k = rng.gen_range(1..=((max_arrows - 1) / 2).min(max_objects - 1).max(1));
    let mut objs = names("M", k);
    objs.push("N".into());
    let mut arrows = vec![("s".to_string(), "N".to_string(), "N".to_string())];
    let mut compose = vec![("s".to_string(), "s".to_string(), "id_N".to_string())];
    for i in 0..k {
        arrows.push((format!("f{i}"), format!("M{i}"), "N".into()));
        arrows.push((format!("g{i}"), format!("M{i}"), "N".into()));
        compose.push(("s".into(), format!("f{i}"), format!("g{i}")));
        compose.push(("s".into(), format!("g{i}"), format!("f{i}")));
    }
    let o: Vec<&str> = objs.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str, &str)> = arrows.iter().map(|(x, y, z)| (x.as_str(), y.as_str(), z.as_str())).collect();
    let c: Vec<(&str, &str, &str)> = compose.iter().map(|(x, y, z)| (x.as_str(), y.as_str(), z.as_str())).collect();
    let cat = finite_category("Inv", &o, &a, &c).expect("involution");
    let target = preorder("Cospan", objs.clone(), &(0..k).map(|i| (i, k)).collect::<Vec<_>>());
    let objects: Vec<(&str, &str)> = o.iter().map(|x| (*x, *x)).collect();
    let labels: Vec<(String, String)> = std::iter::once(("s".to_string(), "id_N".to_string()))
        .chain((0..k).flat_map(|i| [(format!("f{i}"), format!("M{i}->N")), (format!("g{i}"), format!("M{i}->N"))]))
        .collect();
    let morphisms: Vec<(&str, &str)> = labels.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let quotient = Functor::from_labels("forget", &cat, &target, &objects, &morphisms).expect("forget");
    Sample { cat, quotient }
}

/// A random enumerated category with at most `max_objects` objects and
/// `max_arrows` non-identity morphisms.
pub fn random_category<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> Sample {
    match rng.gen_range(0..3) {
        0 => random_preorder(rng, max_objects, max_arrows),
        1 => random_quiver(rng, max_objects, max_arrows),
        _ => random_involution(rng, max_objects, max_arrows),
    }
}

/// Pairs of morphisms with a common target.
pub fn cospan_pairs(cat: &Category) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for y in cat.objects().unwrap() {
        let into = cat.morphisms_in(&y).unwrap();
        for a in &into {
            for b in &into {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

pub fn random_seed<R: Rng>(rng: &mut R, cat: &Category, max: usize) -> Vec<(Mor, Mor)> {
    let all = cospan_pairs(cat);
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| all.choose(rng).unwrap().clone()).collect()
}

pub fn random_ortho<R: Rng>(rng: &mut R, cat: &CatRef) -> OrthoCat {
    let seed = random_seed(rng, cat, 3);
    OrthoCat::new(cat.clone(), closure(cat, &seed).unwrap())
}

/// All ordered pairs of a relation on an enumerated category.
pub fn pairs_of(cat: &Category, rel: &OrthoRel) -> BTreeSet<(Mor, Mor)> {
    let (pairs, _) = rel.pair_sample(cat, &SampleConfig::default(), 0).unwrap();
    pairs.into_iter().collect()
}

/// The generated relation written out directly: every `(g a h1, g b h2)` and
/// its swap for a seed pair `(a, b)`. Such pairs are already symmetric and
/// stable under composition, so no iteration is needed.
pub fn generated_pairs(cat: &Category, seed: &[(Mor, Mor)]) -> BTreeSet<(Mor, Mor)> {
    let mut out = BTreeSet::new();
    for (a, b) in seed {
        for g in cat.morphisms_out(&cat.target(a).unwrap()).unwrap() {
            for h1 in cat.morphisms_in(&cat.source(a).unwrap()).unwrap() {
                for h2 in cat.morphisms_in(&cat.source(b).unwrap()).unwrap() {
                    let x = cat.compose_path(&[h1.clone(), a.clone(), g.clone()]).unwrap();
                    let y = cat.compose_path(&[h2.clone(), b.clone(), g.clone()]).unwrap();
                    out.insert((y.clone(), x.clone()));
                    out.insert((x, y));
                }
            }
        }
    }
    out
}

// ---- operations ----

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::new(v).unwrap()
}

pub fn random_op_into<R: Rng>(rng: &mut R, cat: &CatRef, target: &Obj, arity: usize) -> OperadOp {
    let into = cat.morphisms_in(target).unwrap();
    let morphisms = (0..arity).map(|_| into.choose(rng).unwrap().clone()).collect();
    OperadOp::new(cat, target.clone(), morphisms, random_perm(rng, arity)).unwrap()
}

pub fn random_op<R: Rng>(rng: &mut R, cat: &CatRef, max_arity: usize) -> OperadOp {
    let objs = cat.objects().unwrap();
    let t = objs.choose(rng).unwrap().clone();
    let n = rng.gen_range(0..=max_arity);
    random_op_into(rng, cat, &t, n)
}

fn swaps(word: &[usize], morphisms: &[Mor], oc: &OrthoCat) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in 0..word.len().saturating_sub(1) {
        if oc.orthogonal(&morphisms[word[s]], &morphisms[word[s + 1]]).unwrap() {
            let mut w = word.to_vec();
            w.swap(s, s + 1);
            out.push(w);
        }
    }
    out
}

/// Equality by breadth-first search over adjacent swaps of orthogonal
/// entries in the word of `a`.
pub fn bfs_equal(a: &OperadOp, b: &OperadOp, oc: &OrthoCat) -> bool {
    if a.target != b.target || a.morphisms != b.morphisms {
        return false;
    }
    let goal = b.arrangement();
    let start = a.arrangement();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        if w == goal {
            return true;
        }
        for n in swaps(&w, &a.morphisms, oc) {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    false
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for i in 0..=p.len() {
            let mut v = p.clone();
            v.insert(i, n - 1);
            out.push(v);
        }
    }
    out
}

/// Swap classes of all words over a fixed morphism tuple, by flood fill.
pub fn swap_classes(morphisms: &[Mor], oc: &OrthoCat) -> HashMap<Vec<usize>, usize> {
    let mut class = HashMap::new();
    let mut next = 0;
    for w in all_perms(morphisms.len()) {
        if class.contains_key(&w) {
            continue;
        }
        let mut queue = VecDeque::from([w.clone()]);
        class.insert(w, next);
        while let Some(x) = queue.pop_front() {
            for y in swaps(&x, morphisms, oc) {
                if !class.contains_key(&y) {
                    class.insert(y.clone(), next);
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    class
}

/// Applies one random allowed swap to the word, if any.
pub fn random_equal<R: Rng>(rng: &mut R, a: &OperadOp, oc: &OrthoCat) -> OperadOp {
    let options = swaps(&a.arrangement(), &a.morphisms, oc);
    match options.choose(rng) {
        Some(w) => OperadOp { perm: Perm::new(w.clone()).unwrap().inverse(), ..a.clone() },
        None => a.clone(),
    }
}

// ---- dense rational matrices, independent of the library's elimination ----

#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<Vec<Q>>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Dense {
        Dense { rows, cols, e: vec![vec![Q::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Dense {
        let mut m = Dense::zeros(n, n);
        for i in 0..n {
            m.e[i][i] = q(1);
        }
        m
    }

    pub fn from_matrix(m: &Matrix) -> Dense {
        Dense { rows: m.rows(), cols: m.cols(), e: m.to_rows() }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.rows, self.cols, self.e.clone()).unwrap()
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        assert_eq!(self.cols, o.rows);
        let mut m = Dense::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.e[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = &self.e[i][k] * &o.e[k][j];
                    m.e[i][j] += t;
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.e[i][j] += &o.e[i][j];
            }
        }
        m
    }

    pub fn scale(&self, s: &Q) -> Dense {
        Dense { e: self.e.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(), ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(Zero::is_zero)
    }

    /// Rank by elimination from the last column and last row backwards,
    /// the opposite order to the library.
    pub fn rank(&self) -> usize {
        let mut a = self.e.clone();
        let mut live: Vec<usize> = (0..self.rows).collect();
        let mut rank = 0;
        for c in (0..self.cols).rev() {
            let Some(pos) = live.iter().rposition(|&r| !a[r][c].is_zero()) else { continue };
            let p = live.remove(pos);
            rank += 1;
            for &r in &live {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[p][c];
                for k in 0..self.cols {
                    let t = &f * &a[p][k];
                    a[r][k] -= t;
                }
            }
        }
        rank
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Dense, b: &Dense, c: &Dense, d: &Dense) -> Dense {
        let mut m = Dense::zeros(a.rows + c.rows, a.cols + b.cols);
        for i in 0..a.rows {
            m.e[i][..a.cols].clone_from_slice(&a.e[i]);
            m.e[i][a.cols..].clone_from_slice(&b.e[i]);
        }
        for i in 0..c.rows {
            m.e[a.rows + i][..c.cols].clone_from_slice(&c.e[i]);
            m.e[a.rows + i][c.cols..].clone_from_slice(&d.e[i]);
        }
        m
    }
}

// ---- complexes with known homology ----

/// A complex built from spheres (`K` in one degree) and disks (`K -> K` by
/// the identity), then conjugated by random invertible matrices.
#[derive(Clone, Debug)]
pub struct Built {
    pub complex: ChainComplex,
    pub homology: BTreeMap<i64, usize>,
    /// Standard differentials and the change of basis `P`, `P⁻¹` per degree.
    pub standard: BTreeMap<i64, Dense>,
    pub basis: BTreeMap<i64, (Dense, Dense)>,
    pub dims: BTreeMap<i64, usize>,
    pub spheres: Vec<i64>,
    pub disks: Vec<i64>,
}

/// A random invertible matrix and its inverse, as products of elementary
/// operations and a signed permutation.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> (Dense, Dense) {
    let mut p = Dense::identity(n);
    let mut inv = Dense::identity(n);
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = q(rng.gen_range(-2..=2));
        // Row operation r_i += c r_j on P; its inverse applies r_i -= c r_j on the right.
        let mut e = Dense::identity(n);
        e.e[i][j] = c.clone();
        let mut einv = Dense::identity(n);
        einv.e[i][j] = -c;
        p = e.mul(&p);
        inv = inv.mul(&einv);
    }
    if n > 0 && rng.gen_bool(0.5) {
        let k = rng.gen_range(0..n);
        let s = q(if rng.gen_bool(0.5) { 2 } else { -1 });
        let mut e = Dense::identity(n);
        e.e[k][k] = s.clone();
        let mut einv = Dense::identity(n);
        einv.e[k][k] = q(1) / s;
        p = e.mul(&p);
        inv = inv.mul(&einv);
    }
    (p, inv)
}

fn assemble<R: Rng>(rng: &mut R, spheres: Vec<i64>, disks: Vec<i64>) -> Built {
    // Each piece gets consecutive basis indices per degree.
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let slot = |n: i64, dims: &mut BTreeMap<i64, usize>| {
        let e = dims.entry(n).or_insert(0);
        *e += 1;
        *e - 1
    };
    let mut edges = Vec::new();
    for &n in &spheres {
        slot(n, &mut dims);
    }
    for &n in &disks {
        let top = slot(n, &mut dims);
        let bottom = slot(n - 1, &mut dims);
        edges.push((n, bottom, top));
    }
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
    let mut standard: BTreeMap<i64, Dense> = BTreeMap::new();
    for &(n, r, c) in &edges {
        let m = standard.entry(n).or_insert_with(|| Dense::zeros(dim(n - 1), dim(n)));
        m.e[r][c] = q(1);
    }
    let basis: BTreeMap<i64, (Dense, Dense)> = dims.iter().map(|(&n, &k)| (n, random_invertible(rng, k))).collect();
    let mut d = BTreeMap::new();
    for (&n, m) in &standard {
        d.insert(n, basis[&(n - 1)].0.mul(m).mul(&basis[&n].1).to_matrix());
    }
    let complex = ChainComplex::new(dims.clone(), d).expect("d² = 0 by construction");
    let mut homology = BTreeMap::new();
    for &n in &spheres {
        *homology.entry(n).or_insert(0) += 1;
    }
    Built { complex, homology, standard, basis, dims, spheres, disks }
}

/// Degrees in `lo..=hi`, at most `max_dim` basis elements per degree.
pub fn random_complex<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_dim: usize) -> Built {
    random_complex_with(rng, lo, hi, max_dim, true)
}

pub fn random_complex_with<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_dim: usize, allow_spheres: bool) -> Built {
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    let (mut spheres, mut disks) = (Vec::new(), Vec::new());
    for _ in 0..rng.gen_range(0..=2 * max_dim) {
        let n = rng.gen_range(lo..=hi);
        if allow_spheres && rng.gen_bool(0.4) {
            if count.get(&n).copied().unwrap_or(0) < max_dim {
                *count.entry(n).or_insert(0) += 1;
                spheres.push(n);
            }
        } else if n > lo && count.get(&n).copied().unwrap_or(0) < max_dim && count.get(&(n - 1)).copied().unwrap_or(0) < max_dim {
            *count.entry(n).or_insert(0) += 1;
            *count.entry(n - 1).or_insert(0) += 1;
            disks.push(n);
        }
    }
    assemble(rng, spheres, disks)
}

/// The differential of `x` as a dense block, `dim(n-1) × dim(n)`.
pub fn d_of(x: &ChainComplex, n: i64) -> Dense {
    Dense::from_matrix(&x.d(n))
}

pub fn degrees(x: &ChainComplex, y: &ChainComplex) -> BTreeSet<i64> {
    x.dims().keys().chain(y.dims().keys()).flat_map(|&n| [n - 1, n, n + 1]).collect()
}

/// Homology dimension from ranks in the reversed elimination order.
pub fn homology_oracle(x: &ChainComplex, n: i64) -> usize {
    x.dim(n) - d_of(x, n).rank() - d_of(x, n + 1).rank()
}

/// A map is a quasi-isomorphism exactly when its mapping cone is acyclic.
/// `Cone_n = X_{n-1} ⊕ Y_n` with `d = [[-dX, 0], [f, dY]]`.
pub fn quasi_iso_oracle(f: &BTreeMap<i64, Dense>, x: &ChainComplex, y: &ChainComplex) -> bool {
    let comp = |n: i64| f.get(&n).cloned().unwrap_or_else(|| Dense::zeros(y.dim(n), x.dim(n)));
    let cone_d = |n: i64| {
        Dense::blocks(
            &d_of(x, n - 1).scale(&q(-1)),
            &Dense::zeros(x.dim(n - 2), y.dim(n)),
            &comp(n - 1),
            &d_of(y, n),
        )
    };
    degrees(x, y).into_iter().all(|n| {
        let dim = x.dim(n - 1) + y.dim(n);
        dim == cone_d(n).rank() + cone_d(n + 1).rank()
    })
}

/// Whether `f` commutes with the differentials, by direct multiplication.
pub fn commutes(f: &BTreeMap<i64, Dense>, x: &ChainComplex, y: &ChainComplex) -> bool {
    let comp = |n: i64| f.get(&n).cloned().unwrap_or_else(|| Dense::zeros(y.dim(n), x.dim(n)));
    degrees(x, y).into_iter().all(|n| d_of(y, n).mul(&comp(n)) == comp(n - 1).mul(&d_of(x, n)))
}

pub fn to_chain_map(f: &BTreeMap<i64, Dense>, x: &ChainComplex, y: &ChainComplex) -> aqft_core::Result<ChainMap> {
    ChainMap::new(x.clone(), y.clone(), f.iter().map(|(n, m)| (*n, m.to_matrix())).collect())
}

/// A random chain map together with the expected quasi-iso verdict from
/// its construction: `a·id + dh + hd`, an inclusion `X -> X ⊕ Z` or a
/// projection `X ⊕ Z -> X`.
pub struct RandomMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub components: BTreeMap<i64, Dense>,
    pub expected: bool,
}

pub fn random_map<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_dim: usize) -> RandomMap {
    match rng.gen_range(0..3) {
        0 => {
            let b = random_complex(rng, lo, hi, max_dim);
            let x = &b.complex;
            let a = q(rng.gen_range(0..=2));
            let h: BTreeMap<i64, Dense> = b
                .dims
                .keys()
                .map(|&n| {
                    let mut m = Dense::zeros(x.dim(n + 1), x.dim(n));
                    for row in m.e.iter_mut() {
                        for v in row.iter_mut() {
                            *v = q(rng.gen_range(-1..=1));
                        }
                    }
                    (n, m)
                })
                .collect();
            let hz = |n: i64| h.get(&n).cloned().unwrap_or_else(|| Dense::zeros(x.dim(n + 1), x.dim(n)));
            let comps = b
                .dims
                .iter()
                .map(|(&n, &k)| {
                    let m = Dense::identity(k).scale(&a).add(&d_of(x, n + 1).mul(&hz(n))).add(&hz(n - 1).mul(&d_of(x, n)));
                    (n, m)
                })
                .collect();
            let acyclic = b.homology.is_empty();
            RandomMap { source: x.clone(), target: x.clone(), components: comps, expected: !a.is_zero() || acyclic }
        }
        kind => {
            let half = (max_dim / 2).max(1);
            let xb = random_complex(rng, lo, hi, half);
            let spheres = rng.gen_bool(0.5);
            let zb = random_complex_with(rng, lo, hi, max_dim - half, spheres);
            // Rebuild X ⊕ Z with X's pieces first so the standard bases line up.
            let sum = assemble_ordered(rng, &xb, &zb);
            let acyclic = zb.homology.is_empty();
            let incl = inclusion(&xb, &sum);
            if kind == 1 {
                RandomMap { source: xb.complex.clone(), target: sum.complex.clone(), components: incl, expected: acyclic }
            } else {
                let proj = projection(&xb, &sum);
                RandomMap { source: sum.complex.clone(), target: xb.complex.clone(), components: proj, expected: acyclic }
            }
        }
    }
}

/// `X ⊕ Z` in standard form with `X`'s basis first in every degree, then a
/// fresh change of basis.
fn assemble_ordered<R: Rng>(rng: &mut R, x: &Built, z: &Built) -> Built {
    let dims: BTreeMap<i64, usize> =
        x.dims.keys().chain(z.dims.keys()).map(|&n| (n, x.dims.get(&n).copied().unwrap_or(0) + z.dims.get(&n).copied().unwrap_or(0))).collect();
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
    let xd = |n: i64| x.dims.get(&n).copied().unwrap_or(0);
    let mut standard = BTreeMap::new();
    for n in dims.keys().copied() {
        let mut m = Dense::zeros(dim(n - 1), dim(n));
        if let Some(s) = x.standard.get(&n) {
            for i in 0..s.rows {
                for j in 0..s.cols {
                    m.e[i][j] = s.e[i][j].clone();
                }
            }
        }
        if let Some(s) = z.standard.get(&n) {
            for i in 0..s.rows {
                for j in 0..s.cols {
                    m.e[xd(n - 1) + i][xd(n) + j] = s.e[i][j].clone();
                }
            }
        }
        if !m.is_zero() {
            standard.insert(n, m);
        }
    }
    let basis: BTreeMap<i64, (Dense, Dense)> = dims.iter().map(|(&n, &k)| (n, random_invertible(rng, k))).collect();
    let d = standard.iter().map(|(&n, m)| (n, basis[&(n - 1)].0.mul(m).mul(&basis[&n].1).to_matrix())).collect();
    let complex = ChainComplex::new(dims.clone(), d).expect("d² = 0 by construction");
    let mut homology = x.homology.clone();
    for (n, k) in &z.homology {
        *homology.entry(*n).or_insert(0) += k;
    }
    let mut spheres = x.spheres.clone();
    spheres.extend(&z.spheres);
    let mut disks = x.disks.clone();
    disks.extend(&z.disks);
    Built { complex, homology, standard, basis, dims, spheres, disks }
}

/// `P_sum · [I; 0] · P_x⁻¹` in every degree.
fn inclusion(x: &Built, sum: &Built) -> BTreeMap<i64, Dense> {
    x.dims
        .iter()
        .map(|(&n, &k)| {
            let mut e = Dense::zeros(sum.dims[&n], k);
            for i in 0..k {
                e.e[i][i] = q(1);
            }
            (n, sum.basis[&n].0.mul(&e).mul(&x.basis[&n].1))
        })
        .collect()
}

/// `P_x · [I 0] · P_sum⁻¹` in every degree.
fn projection(x: &Built, sum: &Built) -> BTreeMap<i64, Dense> {
    x.dims
        .iter()
        .map(|(&n, &k)| {
            let mut e = Dense::zeros(k, sum.dims[&n]);
            for i in 0..k {
                e.e[i][i] = q(1);
            }
            (n, x.basis[&n].0.mul(&e).mul(&sum.basis[&n].1))
        })
        .collect()
}
