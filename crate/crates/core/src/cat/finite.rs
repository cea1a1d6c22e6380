//! Enumerated small categories with an explicit composition table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorRecord {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<MorRecord>,
    identities: Vec<usize>,
    /// `table[g * n + f] = Some(g∘f)` whenever `tgt(f) = src(g)`.
    table: Vec<Option<usize>>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl FiniteCategory {
    /// Builds and validates a category. Composites with an identity are
    /// filled in automatically; every other composable pair must appear in
    /// `compose` as `(g, f, g∘f)`. Associativity and unitality are checked on
    /// all composable triples.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: &BTreeMap<String, String>,
        compose: &[(String, String, String)],
    ) -> Result<Self> {
        let name = name.into();
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate object `{o}`")));
            }
        }
        let mut records = Vec::with_capacity(morphisms.len());
        let mut mor_index = HashMap::new();
        for (id, s, t) in morphisms {
            let src = *obj_index.get(&s).ok_or_else(|| Error::UnknownObject(s.clone()))?;
            let tgt = *obj_index.get(&t).ok_or_else(|| Error::UnknownObject(t.clone()))?;
            if mor_index.insert(id.clone(), records.len()).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate morphism `{id}`")));
            }
            records.push(MorRecord { id, src, tgt });
        }
        let mut ids = Vec::with_capacity(objects.len());
        for o in &objects {
            let m = identities
                .get(o)
                .ok_or_else(|| Error::InvalidCategory(format!("object `{o}` has no identity")))?;
            let mi = *mor_index.get(m).ok_or_else(|| Error::UnknownMorphism(m.clone()))?;
            let oi = obj_index[o];
            if records[mi].src != oi || records[mi].tgt != oi {
                return Err(Error::InvalidCategory(format!("identity `{m}` is not an endomorphism of `{o}`")));
            }
            ids.push(mi);
        }
        let n = records.len();
        let mut table = vec![None; n * n];
        for (g, f, gf) in compose {
            let gi = *mor_index.get(g).ok_or_else(|| Error::UnknownMorphism(g.clone()))?;
            let fi = *mor_index.get(f).ok_or_else(|| Error::UnknownMorphism(f.clone()))?;
            let ci = *mor_index.get(gf).ok_or_else(|| Error::UnknownMorphism(gf.clone()))?;
            if records[fi].tgt != records[gi].src {
                return Err(Error::NonComposable(format!("{g} ∘ {f}")));
            }
            if records[ci].src != records[fi].src || records[ci].tgt != records[gi].tgt {
                return Err(Error::InvalidCategory(format!("{g} ∘ {f} = {gf} has wrong endpoints")));
            }
            if let Some(prev) = table[gi * n + fi] {
                if prev != ci {
                    return Err(Error::InvalidCategory(format!("{g} ∘ {f} given twice with different values")));
                }
            }
            table[gi * n + fi] = Some(ci);
        }
        for (fi, rec) in records.iter().enumerate() {
            let id_t = ids[rec.tgt];
            let id_s = ids[rec.src];
            fill_unit(&mut table, n, id_t, fi, fi, &records)?;
            fill_unit(&mut table, n, fi, id_s, fi, &records)?;
        }
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut incoming = vec![Vec::new(); objects.len()];
        for (i, r) in records.iter().enumerate() {
            outgoing[r.src].push(i);
            incoming[r.tgt].push(i);
        }
        let cat = FiniteCategory { name, objects, morphisms: records, identities: ids, table, obj_index, mor_index, outgoing, incoming };
        cat.validate()?;
        Ok(cat)
    }

    /// The thin category of a preorder. `leq` need not be reflexive or
    /// transitive; its closure is taken. Identities are named `id_X`, other
    /// arrows `X->Y`.
    pub fn from_preorder(name: impl Into<String>, objects: Vec<String>, leq: &[(usize, usize)]) -> Result<Self> {
        let k = objects.len();
        let mut reach = vec![vec![false; k]; k];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in leq {
            if a >= k || b >= k {
                return Err(Error::InvalidCategory(format!("preorder pair ({a},{b}) out of range")));
            }
            reach[a][b] = true;
        }
        for m in 0..k {
            for i in 0..k {
                if reach[i][m] {
                    for j in 0..k {
                        if reach[m][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let arrow = |i: usize, j: usize| {
            if i == j {
                format!("id_{}", objects[i])
            } else {
                format!("{}->{}", objects[i], objects[j])
            }
        };
        let mut morphisms = Vec::new();
        let mut identities = BTreeMap::new();
        for i in 0..k {
            identities.insert(objects[i].clone(), arrow(i, i));
            for j in 0..k {
                if reach[i][j] {
                    morphisms.push((arrow(i, j), objects[i].clone(), objects[j].clone()));
                }
            }
        }
        let mut compose = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    if reach[i][j] && reach[j][l] && i != j && j != l {
                        compose.push((arrow(j, l), arrow(i, j), arrow(i, l)));
                    }
                }
            }
        }
        FiniteCategory::new(name, objects, morphisms, &identities, &compose)
    }

    fn validate(&self) -> Result<()> {
        let n = self.morphisms.len();
        for g in 0..n {
            for f in &self.incoming[self.morphisms[g].src] {
                if self.table[g * n + f].is_none() {
                    return Err(Error::InvalidCategory(format!(
                        "composite {} ∘ {} is missing",
                        self.morphisms[g].id, self.morphisms[*f].id
                    )));
                }
            }
        }
        for f in 0..n {
            for &g in &self.outgoing[self.morphisms[f].tgt] {
                let gf = self.table[g * n + f].expect("checked above");
                for &h in &self.outgoing[self.morphisms[g].tgt] {
                    let hg = self.table[h * n + g].expect("checked above");
                    let left = self.table[h * n + gf].expect("checked above");
                    let right = self.table[hg * n + f].expect("checked above");
                    if left != right {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails on ({}, {}, {})",
                            self.morphisms[h].id, self.morphisms[g].id, self.morphisms[f].id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, i: usize) -> &MorRecord {
        &self.morphisms[i]
    }

    pub fn morphism_records(&self) -> &[MorRecord] {
        &self.morphisms
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<usize> {
        self.mor_index.get(name).copied()
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identities[obj]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.morphisms.len() + f]
    }

    pub fn outgoing(&self, obj: usize) -> &[usize] {
        &self.outgoing[obj]
    }

    pub fn incoming(&self, obj: usize) -> &[usize] {
        &self.incoming[obj]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.outgoing[a].iter().copied().filter(|&m| self.morphisms[m].tgt == b).collect()
    }

    /// Exhaustive search for a two-sided inverse.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let r = &self.morphisms[f];
        self.hom(r.tgt, r.src).into_iter().find(|&g| {
            self.compose(g, f) == Some(self.identities[r.src]) && self.compose(f, g) == Some(self.identities[r.tgt])
        })
    }

    /// Composition triples `(g, f, g∘f)` over non-identity pairs, for serialization.
    pub fn composition_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.morphisms.len();
        let mut out = BTreeSet::new();
        for f in 0..n {
            if self.is_identity(f) {
                continue;
            }
            for &g in &self.outgoing[self.morphisms[f].tgt] {
                if !self.is_identity(g) {
                    out.insert((g, f, self.table[g * n + f].expect("total on composable pairs")));
                }
            }
        }
        out.into_iter().collect()
    }
}

fn fill_unit(table: &mut [Option<usize>], n: usize, g: usize, f: usize, val: usize, records: &[MorRecord]) -> Result<()> {
    match table[g * n + f] {
        Some(v) if v != val => Err(Error::InvalidCategory(format!(
            "identity law fails: {} ∘ {} must equal {}",
            records[g].id, records[f].id, records[val].id
        ))),
        _ => {
            table[g * n + f] = Some(val);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn preorder_closure_composes() {
        let c = FiniteCategory::from_preorder("chain", vec![s("a"), s("b"), s("c")], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(c.morphism_count(), 6);
        let ab = c.morphism_id("a->b").unwrap();
        let bc = c.morphism_id("b->c").unwrap();
        assert_eq!(c.compose(bc, ab), c.morphism_id("a->c"));
        assert_eq!(c.compose(ab, bc), None);
    }

    #[test]
    fn missing_composite_rejected() {
        let ids: BTreeMap<String, String> = [("a", "1a"), ("b", "1b"), ("c", "1c")].iter().map(|(o, m)| (s(o), s(m))).collect();
        let err = FiniteCategory::new(
            "bad",
            vec![s("a"), s("b"), s("c")],
            vec![
                (s("1a"), s("a"), s("a")),
                (s("1b"), s("b"), s("b")),
                (s("1c"), s("c"), s("c")),
                (s("f"), s("a"), s("b")),
                (s("g"), s("b"), s("c")),
            ],
            &ids,
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidCategory(_)));
    }

    #[test]
    fn non_associative_table_rejected() {
        // One object, morphisms {1, x, y}: a table that is not associative.
        let ids: BTreeMap<String, String> = [(s("*"), s("1"))].into_iter().collect();
        let mors = vec![(s("1"), s("*"), s("*")), (s("x"), s("*"), s("*")), (s("y"), s("*"), s("*"))];
        let compose = vec![
            (s("x"), s("x"), s("y")),
            (s("x"), s("y"), s("x")),
            (s("y"), s("x"), s("y")),
            (s("y"), s("y"), s("y")),
        ];
        let err = FiniteCategory::new("m", vec![s("*")], mors, &ids, &compose).unwrap_err();
        assert!(matches!(err, Error::InvalidCategory(_)), "{err:?}");
    }
}
