//! TOML fixture documents and their canonical serializations.
//!
//! * `.lat`: `elements` and `leq` generator pairs. The same document is read
//!   as a poset from `.pos` files, and as a set from `.set` files, where
//!   `leq` must be empty.
//! * `.cat`: `objects`, `compose` triples `[g, f, g∘f]`, and `[[morphisms]]`
//!   tables with `name`, `dom`, `cod`. Identities are implicit.
//! * `.psh`: `kind`, the `category` file, one value file per object, and for
//!   each non-identity morphism `h: b → a` a table sending elements of the
//!   value at `a` to elements of the value at `b`.
//!
//! File references inside a `.psh` are resolved against its directory.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use laxframe::fincat::{validate_category, Carrier, FinCategory, FinSet, Presheaf, RawCategory};
use laxframe::order::{build_lattice, FinDistLattice, FinPoset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub morphisms: Vec<MorphismDoc>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    #[default]
    Lattice,
    Poset,
    Set,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Lattice => "lattice",
            ValueKind::Poset => "poset",
            ValueKind::Set => "set",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    #[serde(default)]
    pub kind: ValueKind,
    pub category: String,
    pub values: BTreeMap<String, String>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

/// Which document a path holds, by extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Lattice,
    Poset,
    Set,
    Category,
    Presheaf,
}

impl FixtureKind {
    pub fn of(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("lat") => Ok(FixtureKind::Lattice),
            Some("pos") => Ok(FixtureKind::Poset),
            Some("set") => Ok(FixtureKind::Set),
            Some("cat") => Ok(FixtureKind::Category),
            Some("psh") => Ok(FixtureKind::Presheaf),
            _ => bail!("{}: expected a .lat, .pos, .set, .cat or .psh file", path.display()),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_doc<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| anyhow!("{}: parse error: {}", path.display(), e.to_string().trim_end()))
}

pub fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse_doc(path, &read(path)?)
}

impl LatticeDoc {
    pub fn to_poset(&self) -> Result<FinPoset> {
        for (i, [lo, hi]) in self.leq.iter().enumerate() {
            for x in [lo, hi] {
                if !self.elements.contains(x) {
                    bail!("leq[{i}]: unknown element `{x}`");
                }
            }
        }
        let pairs: Vec<(&str, &str)> = self.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let elements: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        FinPoset::build(&elements, &pairs).map_err(|e| anyhow!("elements/leq: {e}"))
    }

    pub fn to_lattice(&self) -> Result<FinDistLattice> {
        build_lattice(self.to_poset()?).map_err(|e| anyhow!("elements/leq: {e}"))
    }

    pub fn to_set(&self) -> Result<FinSet> {
        if !self.leq.is_empty() {
            bail!("leq: a set value must have no order pairs");
        }
        FinSet::new(self.elements.clone()).map_err(|e| anyhow!("elements: {e}"))
    }

    /// Sorted elements and sorted covering pairs.
    pub fn of_poset(p: &FinPoset) -> Self {
        let mut elements = p.names().to_vec();
        elements.sort();
        let mut leq: Vec<[String; 2]> =
            p.covers().into_iter().map(|(a, b)| [p.name(a).to_owned(), p.name(b).to_owned()]).collect();
        leq.sort();
        LatticeDoc { elements, leq }
    }
}

impl CategoryDoc {
    pub fn to_category(&self) -> Result<FinCategory> {
        let raw = RawCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms.iter().map(|m| (m.name.clone(), m.dom.clone(), m.cod.clone())).collect(),
            compose: self.compose.iter().map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone())).collect(),
        };
        validate_category(&raw).map_err(|e| anyhow!("category: {e}"))
    }

    /// Sorted objects, morphisms and composites; identities left implicit.
    pub fn of_category(c: &FinCategory) -> Self {
        let raw = c.raw();
        let mut objects = raw.objects;
        objects.sort();
        let mut morphisms: Vec<MorphismDoc> =
            raw.morphisms.into_iter().map(|(name, dom, cod)| MorphismDoc { name, dom, cod }).collect();
        morphisms.sort_by(|a, b| a.name.cmp(&b.name));
        let mut compose: Vec<[String; 3]> = raw.compose.into_iter().map(|(g, f, gf)| [g, f, gf]).collect();
        compose.sort();
        CategoryDoc { objects, compose, morphisms }
    }
}

pub fn to_toml<T: Serialize>(doc: &T) -> String {
    toml::to_string(doc).expect("fixture documents serialize")
}

pub fn read_lattice(path: &Path) -> Result<FinDistLattice> {
    read_doc::<LatticeDoc>(path)?.to_lattice().with_context(|| path.display().to_string())
}

pub fn read_category(path: &Path) -> Result<FinCategory> {
    read_doc::<CategoryDoc>(path)?.to_category().with_context(|| path.display().to_string())
}

/// A presheaf file resolved into its base and value documents.
pub struct LoadedPresheaf {
    pub doc: PresheafDoc,
    pub base: Arc<FinCategory>,
    pub value_docs: Vec<LatticeDoc>,
}

pub enum AnyPresheaf {
    Lattice(Arc<Presheaf<FinDistLattice>>),
    Poset(Arc<Presheaf<FinPoset>>),
    Set(Arc<Presheaf<FinSet>>),
}

fn resolve(dir: &Path, file: &str) -> PathBuf {
    dir.join(file)
}

pub fn load_presheaf(path: &Path) -> Result<LoadedPresheaf> {
    let doc: PresheafDoc = read_doc(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let base = Arc::new(read_category(&resolve(dir, &doc.category)).context("category")?);
    for name in doc.values.keys() {
        base.object_index(name).map_err(|_| anyhow!("{}: values: unknown object `{name}`", path.display()))?;
    }
    let value_docs = base
        .object_names()
        .iter()
        .map(|o| {
            let file = doc.values.get(o).ok_or_else(|| anyhow!("{}: values: no entry for object `{o}`", path.display()))?;
            read_doc::<LatticeDoc>(&resolve(dir, file))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedPresheaf { doc, base, value_docs })
}

impl LoadedPresheaf {
    fn build<V: Carrier>(&self, values: Vec<Arc<V>>) -> Result<Arc<Presheaf<V>>> {
        let c = &self.base;
        for name in self.doc.maps.keys() {
            let m = c.mor_index(name).map_err(|_| anyhow!("maps: unknown morphism `{name}`"))?;
            if c.is_identity(m) {
                bail!("maps: `{name}` is an identity and must be left implicit");
            }
        }
        let lookup = |v: &V, x: &str| (0..v.size()).find(|&i| v.element_name(i) == x);
        let mut maps = vec![Vec::new(); c.num_morphisms()];
        for h in c.morphisms() {
            if c.is_identity(h) {
                continue;
            }
            let name = c.mor_name(h);
            let table = self.doc.maps.get(name).ok_or_else(|| anyhow!("maps: no table for `{name}`"))?;
            let (src, dst) = (&values[c.cod(h)], &values[c.dom(h)]);
            let mut out = Vec::with_capacity(src.size());
            for i in 0..src.size() {
                let x = src.element_name(i);
                let y = table.get(x).ok_or_else(|| anyhow!("maps.{name}: no image for `{x}`"))?;
                out.push(lookup(dst, y).ok_or_else(|| anyhow!("maps.{name}.{x}: unknown element `{y}`"))?);
            }
            if table.len() != src.size() {
                bail!("maps.{name}: entries for elements outside the value at `{}`", c.object_name(c.cod(h)));
            }
            maps[h] = out;
        }
        Presheaf::new(c.clone(), values, maps).map(Arc::new).map_err(|e| anyhow!("presheaf: {e}"))
    }

    pub fn resolve(&self) -> Result<AnyPresheaf> {
        let docs = &self.value_docs;
        Ok(match self.doc.kind {
            ValueKind::Lattice => AnyPresheaf::Lattice(
                self.build(docs.iter().map(|d| d.to_lattice().map(Arc::new)).collect::<Result<_>>()?)?,
            ),
            ValueKind::Poset => AnyPresheaf::Poset(
                self.build(docs.iter().map(|d| d.to_poset().map(Arc::new)).collect::<Result<_>>()?)?,
            ),
            ValueKind::Set => {
                AnyPresheaf::Set(self.build(docs.iter().map(|d| d.to_set().map(Arc::new)).collect::<Result<_>>()?)?)
            }
        })
    }

    pub fn lattice(&self) -> Result<Arc<Presheaf<FinDistLattice>>> {
        match self.resolve()? {
            AnyPresheaf::Lattice(p) => Ok(p),
            _ => bail!("expected a lattice presheaf, found kind `{}`", self.doc.kind),
        }
    }
}

/// A lattice presheaf as a document, with the given value file per object.
pub fn presheaf_doc(p: &Presheaf<FinDistLattice>, category: &str, files: &[&str]) -> PresheafDoc {
    let c = p.base();
    let values = c.objects().map(|o| (c.object_name(o).to_owned(), files[o].to_owned())).collect();
    let maps = c
        .morphisms()
        .filter(|&h| !c.is_identity(h))
        .map(|h| {
            let (src, dst) = (p.value(c.cod(h)), p.value(c.dom(h)));
            let table =
                src.elements().map(|x| (src.name(x).to_owned(), dst.name(p.map(h)[x]).to_owned())).collect();
            (c.mor_name(h).to_owned(), table)
        })
        .collect();
    PresheafDoc { kind: ValueKind::Lattice, category: category.to_owned(), values, maps }
}
