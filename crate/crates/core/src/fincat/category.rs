//! Finite categories given by explicit composition tables.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Unvalidated category data, keyed by name.
///
/// Identities are added automatically as `id_<object>`; composites with an
/// identity may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(name, dom, cod)`
    #[serde(default)]
    pub morphisms: Vec<(String, String, String)>,
    /// `(g, f, g∘f)`
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `compose[g * m + f] = g∘f`
    compose: Vec<Option<MorId>>,
    into: Vec<Vec<MorId>>,
}

pub fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

/// Builds a category and checks the identity, closure and associativity laws.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory> {
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), i).is_some() {
            return Err(Error::DuplicateElement(o.clone()));
        }
    }
    let obj = |name: &str| {
        obj_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_owned()))
    };
    let mut morphisms: Vec<Morphism> = raw
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism { name: identity_name(o), dom: i, cod: i })
        .collect();
    for (name, d, c) in &raw.morphisms {
        morphisms.push(Morphism { name: name.clone(), dom: obj(d)?, cod: obj(c)? });
    }
    let mut mor_index = HashMap::new();
    for (i, m) in morphisms.iter().enumerate() {
        if mor_index.insert(m.name.as_str(), i).is_some() {
            return Err(Error::DuplicateElement(m.name.clone()));
        }
    }
    let mor = |name: &str| {
        mor_index.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.to_owned()))
    };
    let m = morphisms.len();
    let identities: Vec<MorId> = (0..raw.objects.len()).collect();
    let mut compose = vec![None; m * m];
    for (g, f, gf) in &raw.compose {
        let (g, f, gf) = (mor(g)?, mor(f)?, mor(gf)?);
        let (mg, mf, mgf) = (&morphisms[g], &morphisms[f], &morphisms[gf]);
        if mf.cod != mg.dom || mgf.dom != mf.dom || mgf.cod != mg.cod {
            return Err(Error::MissingComposite(format!(
                "`{} ∘ {} = {}` is ill-typed",
                mg.name, mf.name, mgf.name
            )));
        }
        match compose[g * m + f] {
            Some(old) if old != gf => {
                return Err(Error::MissingComposite(format!(
                    "`{} ∘ {}` given twice",
                    mg.name, mf.name
                )))
            }
            _ => compose[g * m + f] = Some(gf),
        }
    }
    for f in 0..m {
        let (d, c) = (morphisms[f].dom, morphisms[f].cod);
        for (slot, id) in [(f * m + identities[d], identities[d]), (identities[c] * m + f, identities[c])] {
            match compose[slot] {
                Some(x) if x != f => {
                    return Err(Error::Identity(format!(
                        "`{}` composed with `{}` is `{}`",
                        morphisms[f].name, morphisms[id].name, morphisms[x].name
                    )))
                }
                _ => compose[slot] = Some(f),
            }
        }
    }
    for g in 0..m {
        for f in 0..m {
            if morphisms[f].cod == morphisms[g].dom && compose[g * m + f].is_none() {
                return Err(Error::MissingComposite(format!(
                    "`{} ∘ {}` is undefined",
                    morphisms[g].name, morphisms[f].name
                )));
            }
        }
    }
    let mut into = vec![Vec::new(); raw.objects.len()];
    for (i, mm) in morphisms.iter().enumerate() {
        into[mm.cod].push(i);
    }
    for v in &mut into {
        v.sort_by(|&a, &b| morphisms[a].name.cmp(&morphisms[b].name));
    }
    let cat = FinCategory { objects: raw.objects.clone(), morphisms, identities, compose, into };
    cat.check_associativity()?;
    Ok(cat)
}

impl FinCategory {
    fn check_associativity(&self) -> Result<()> {
        for (h, g, f) in self.composable_triples() {
            let left = self.compose(h, self.compose(g, f).unwrap()).unwrap();
            let right = self.compose(self.compose(h, g).unwrap(), f).unwrap();
            if left != right {
                return Err(Error::Associativity(format!(
                    "`{}`, `{}`, `{}`",
                    self.mor_name(h),
                    self.mor_name(g),
                    self.mor_name(f)
                )));
            }
        }
        Ok(())
    }

    fn composable_triples(&self) -> impl Iterator<Item = (MorId, MorId, MorId)> + '_ {
        self.composable_pairs().flat_map(move |(g, f)| {
            self.out_of(self.morphisms[g].cod).map(move |h| (h, g, f))
        })
    }

    /// Pairs `(g, f)` with `cod f = dom g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        (0..self.morphisms.len())
            .flat_map(move |f| self.out_of(self.morphisms[f].cod).map(move |g| (g, f)))
    }

    fn out_of(&self, o: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).filter(move |&g| self.morphisms[g].dom == o)
    }

    pub fn raw(&self) -> RawCategory {
        let n = self.objects.len();
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms[n..]
                .iter()
                .map(|m| (m.name.clone(), self.objects[m.dom].clone(), self.objects[m.cod].clone()))
                .collect(),
            compose: self
                .composable_pairs()
                .filter(|&(g, f)| !self.is_identity(g) && !self.is_identity(f))
                .map(|(g, f)| {
                    let gf = self.compose(g, f).unwrap();
                    (self.mor_name(g).into(), self.mor_name(f).into(), self.mor_name(gf).into())
                })
                .collect(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn object_index(&self, name: &str) -> Result<ObjId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_owned()))
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.morphisms.len()
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn mor_name(&self, m: MorId) -> &str {
        &self.morphisms[m].name
    }

    pub fn mor_index(&self, name: &str) -> Result<MorId> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_owned()))
    }

    pub fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m].dom
    }

    pub fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m].cod
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.morphisms[m].dom] == m
    }

    /// `g ∘ f`, defined when `cod f = dom g`.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// Morphisms with codomain `a`, sorted by name.
    pub fn arrows_into(&self, a: ObjId) -> &[MorId] {
        &self.into[a]
    }

    /// Morphisms `b → a`.
    pub fn hom(&self, b: ObjId, a: ObjId) -> Vec<MorId> {
        self.into[a].iter().copied().filter(|&f| self.morphisms[f].dom == b).collect()
    }

    /// Same objects and morphism names, with arrows reversed.
    pub fn opposite(&self) -> FinCategory {
        let m = self.morphisms.len();
        let mut compose = vec![None; m * m];
        for (g, f) in self.composable_pairs() {
            compose[f * m + g] = self.compose(g, f);
        }
        let morphisms: Vec<Morphism> = self
            .morphisms
            .iter()
            .map(|mm| Morphism { name: mm.name.clone(), dom: mm.cod, cod: mm.dom })
            .collect();
        let mut into = vec![Vec::new(); self.objects.len()];
        for (i, mm) in morphisms.iter().enumerate() {
            into[mm.cod].push(i);
        }
        for v in &mut into {
            v.sort_by(|&a, &b| morphisms[a].name.cmp(&morphisms[b].name));
        }
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            compose,
            into,
        }
    }

    /// An object with exactly one morphism into every object.
    pub fn initial_object(&self) -> Option<ObjId> {
        self.objects().find(|&i| self.objects().all(|j| self.hom(i, j).len() == 1))
    }

    pub fn terminal_object(&self) -> Option<ObjId> {
        self.objects().find(|&i| self.objects().all(|j| self.hom(j, i).len() == 1))
    }

    /// One object, one identity.
    pub fn terminal() -> FinCategory {
        Self::discrete(1)
    }

    /// Objects `o0..o{n-1}` with identities only.
    pub fn discrete(n: usize) -> FinCategory {
        validate_category(&RawCategory {
            objects: (0..n).map(|i| format!("o{i}")).collect(),
            ..Default::default()
        })
        .expect("discrete category")
    }

    /// `o0 → o1` with a single arrow `h`.
    pub fn arrow() -> FinCategory {
        validate_category(&RawCategory {
            objects: vec!["o0".into(), "o1".into()],
            morphisms: vec![("h".into(), "o0".into(), "o1".into())],
            compose: vec![],
        })
        .expect("arrow category")
    }

    /// One object with an idempotent `e`.
    pub fn walking_idempotent() -> FinCategory {
        Self::monoid(&["e"], &[("e", "e", "e")]).expect("idempotent")
    }

    /// One-object category with the given non-identity elements.
    pub fn monoid(elements: &[&str], table: &[(&str, &str, &str)]) -> Result<FinCategory> {
        validate_category(&RawCategory {
            objects: vec!["o0".into()],
            morphisms: elements.iter().map(|e| (e.to_string(), "o0".into(), "o0".into())).collect(),
            compose: table.iter().map(|(g, f, gf)| (g.to_string(), f.to_string(), gf.to_string())).collect(),
        })
    }

    /// The preorder category of a poset: one arrow `i≤j` per comparable pair.
    pub fn thin(p: &crate::order::FinPoset) -> FinCategory {
        let name = |i: usize, j: usize| format!("{}≤{}", p.name(i), p.name(j));
        let pairs: Vec<(usize, usize)> = p.strict_pairs().collect();
        let mut compose = Vec::new();
        for &(i, j) in &pairs {
            for &(j2, k) in &pairs {
                if j == j2 {
                    compose.push((name(j, k), name(i, j), name(i, k)));
                }
            }
        }
        validate_category(&RawCategory {
            objects: p.names().to_vec(),
            morphisms: pairs
                .iter()
                .map(|&(i, j)| (name(i, j), p.name(i).to_owned(), p.name(j).to_owned()))
                .collect(),
            compose,
        })
        .expect("thin category")
    }

    /// The free category on a finite DAG; paths are named by their edges.
    pub fn free_on_dag(objects: &[&str], edges: &[(&str, &str, &str)]) -> Result<FinCategory> {
        let obj = |n: &str| {
            objects.iter().position(|o| *o == n).ok_or_else(|| Error::UnknownObject(n.to_owned()))
        };
        // paths as edge lists, head edge last applied first
        let mut paths: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        let mut frontier: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for (k, (_, d, c)) in edges.iter().enumerate() {
            frontier.push((vec![k], obj(d)?, obj(c)?));
        }
        let mut rounds = 0;
        while !frontier.is_empty() {
            rounds += 1;
            if rounds > objects.len() + 1 {
                return Err(Error::Cycle("free category".into(), "graph".into()));
            }
            let mut next = Vec::new();
            for (path, d, c) in &frontier {
                for (k, (_, d2, c2)) in edges.iter().enumerate() {
                    if obj(d2)? == *c {
                        let mut p = path.clone();
                        p.push(k);
                        next.push((p, *d, obj(c2)?));
                    }
                }
            }
            paths.append(&mut frontier);
            frontier = next;
        }
        let pname = |p: &[usize]| {
            p.iter().rev().map(|&k| edges[k].0).collect::<Vec<_>>().join(".")
        };
        let mut compose = Vec::new();
        for (f, _, fc) in &paths {
            for (g, gd, _) in &paths {
                if gd == fc {
                    let mut gf = f.clone();
                    gf.extend(g);
                    compose.push((pname(g), pname(f), pname(&gf)));
                }
            }
        }
        validate_category(&RawCategory {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: paths
                .iter()
                .map(|(p, d, c)| (pname(p), objects[*d].to_owned(), objects[*c].to_owned()))
                .collect(),
            compose,
        })
    }
}

/// `C/a` with its projection to `C`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub category: FinCategory,
    /// Slice object → the arrow of `C` it stands for.
    pub arrow: Vec<MorId>,
    /// Slice morphism → underlying morphism of `C`.
    pub underlying: Vec<MorId>,
}

impl Slice {
    /// Slice object → its domain in `C`.
    pub fn project_object(&self, base: &FinCategory, x: ObjId) -> ObjId {
        base.dom(self.arrow[x])
    }
}

pub fn slice(c: &FinCategory, a: ObjId) -> Slice {
    let objs: Vec<MorId> = c.arrows_into(a).to_vec();
    let mut morphisms = Vec::new();
    let mut under = Vec::new();
    let label = |g: MorId, f1: MorId, f2: MorId| {
        format!("{}:{}→{}", c.mor_name(g), c.mor_name(f1), c.mor_name(f2))
    };
    for &f1 in &objs {
        for &f2 in &objs {
            for g in c.hom(c.dom(f1), c.dom(f2)) {
                if c.compose(f2, g) == Some(f1) && !(c.is_identity(g) && f1 == f2) {
                    morphisms.push((label(g, f1, f2), c.mor_name(f1).to_owned(), c.mor_name(f2).to_owned()));
                    under.push((g, f1, f2));
                }
            }
        }
    }
    let mut compose = Vec::new();
    for &(g1, f1, f2) in &under {
        for &(g2, f2b, f3) in &under {
            if f2 == f2b {
                let g = c.compose(g2, g1).unwrap();
                let name = if c.is_identity(g) && f1 == f3 {
                    identity_name(c.mor_name(f1))
                } else {
                    label(g, f1, f3)
                };
                compose.push((label(g2, f2, f3), label(g1, f1, f2), name));
            }
        }
    }
    let category = validate_category(&RawCategory {
        objects: objs.iter().map(|&f| c.mor_name(f).to_owned()).collect(),
        morphisms,
        compose,
    })
    .expect("slice of a valid category");
    let mut underlying: Vec<MorId> = objs.iter().map(|&f| c.identity(c.dom(f))).collect();
    underlying.extend(under.iter().map(|&(g, _, _)| g));
    Slice { category, arrow: objs, underlying }
}
