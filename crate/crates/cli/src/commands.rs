//! Subcommand implementations. Input problems surface as `Err`; failed
//! checks come back as a [`Report`] with `passed == false` and a witness.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::{json, Value};

use laxframe::equivalence::{jt_pointwise, psi_functor, verify_fixed, verify_theorem, KRFunctor};
use laxframe::fincat::{Carrier, FinCategory, Presheaf};
use laxframe::internal::{check_c_iso, check_idl_iso, check_powerset_iso, IsoReport};
use laxframe::lax::{check_psi_identity, check_tilde_vs_slice, check_unit_counit, tilde, FamilyCarrier};
use laxframe::ndl::{
    center, check_completion, complete_c, completion_onto_center, is_compact_regular, is_normal, NormalityCertificate,
    WellInside,
};
use laxframe::order::FinDistLattice;
use laxframe::search::{search, SearchConfig};
use laxframe::Error;

use crate::format::{
    load_presheaf, read_category, read_doc, read_lattice, to_toml, AnyPresheaf, CategoryDoc, FixtureKind, LatticeDoc,
    PresheafDoc,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub passed: bool,
    pub summary: Vec<String>,
    pub details: Value,
}

impl Report {
    fn new(command: &str, input: Option<&Path>, passed: bool, summary: Vec<String>, details: Value) -> Self {
        Report {
            command: command.to_owned(),
            input: input.map(|p| p.display().to_string()),
            passed,
            summary,
            details,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("reports serialize") + "\n";
        }
        let mut out = String::new();
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Normal,
    Regular,
    Complete,
    Tilde,
    PowersetIso,
    IdlIso,
    CIso,
    Theorem,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Normal => "normal",
            Check::Regular => "regular",
            Check::Complete => "complete",
            Check::Tilde => "tilde",
            Check::PowersetIso => "powerset-iso",
            Check::IdlIso => "idl-iso",
            Check::CIso => "c-iso",
            Check::Theorem => "theorem",
        }
    }
}

fn names(l: &FinDistLattice, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|x| l.name(x).to_owned()).collect()
}

fn set_name(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(","))
}

/// Metadata shown for a lattice: size, normality, regularity and center.
fn lattice_facts(l: &FinDistLattice) -> (Vec<String>, Value) {
    let normal = is_normal(l).is_normal();
    let regular = is_compact_regular(l);
    let mut centre = names(l, center(l).ones());
    centre.sort();
    let summary = vec![
        format!("elements: {}", l.len()),
        format!("normal: {normal}"),
        format!("regular: {regular}"),
        format!("center: {}", set_name(&centre)),
    ];
    (summary, json!({ "elements": l.len(), "normal": normal, "regular": regular, "center": centre }))
}

pub fn validate(path: &Path) -> Result<Report> {
    let (summary, details) = match FixtureKind::of(path)? {
        FixtureKind::Lattice => {
            let l = read_lattice(path)?;
            (format!("distributive lattice with {} elements", l.len()), json!({ "kind": "lattice", "elements": l.len() }))
        }
        FixtureKind::Poset => {
            let p = read_doc::<LatticeDoc>(path)?.to_poset()?;
            (format!("poset with {} elements", p.len()), json!({ "kind": "poset", "elements": p.len() }))
        }
        FixtureKind::Set => {
            let s = read_doc::<LatticeDoc>(path)?.to_set()?;
            (format!("set with {} elements", s.len()), json!({ "kind": "set", "elements": s.len() }))
        }
        FixtureKind::Category => {
            let c = read_category(path)?;
            (
                format!("category with {} objects and {} morphisms", c.num_objects(), c.num_morphisms()),
                json!({ "kind": "category", "objects": c.num_objects(), "morphisms": c.num_morphisms() }),
            )
        }
        FixtureKind::Presheaf => {
            let loaded = load_presheaf(path)?;
            let sizes: Vec<usize> = match loaded.resolve()? {
                AnyPresheaf::Lattice(p) => sizes(&p),
                AnyPresheaf::Poset(p) => sizes(&p),
                AnyPresheaf::Set(p) => sizes(&p),
            };
            (
                format!("{} presheaf, {} object(s), value sizes {sizes:?}", loaded.doc.kind, loaded.base.num_objects()),
                json!({ "kind": "presheaf", "values": loaded.doc.kind, "sizes": sizes }),
            )
        }
    };
    Ok(Report::new("validate", Some(path), true, vec![format!("valid: {summary}")], details))
}

fn sizes<V: Carrier>(p: &Presheaf<V>) -> Vec<usize> {
    p.values().iter().map(|v| v.size()).collect()
}

pub fn show(path: &Path) -> Result<Report> {
    let (text, mut summary, details) = match FixtureKind::of(path)? {
        FixtureKind::Lattice => {
            let l = read_lattice(path)?;
            let (summary, details) = lattice_facts(&l);
            (to_toml(&LatticeDoc::of_poset(l.poset())), summary, details)
        }
        kind @ (FixtureKind::Poset | FixtureKind::Set) => {
            let doc: LatticeDoc = read_doc(path)?;
            let p = doc.to_poset()?;
            if kind == FixtureKind::Set {
                doc.to_set()?;
            }
            let canonical = LatticeDoc::of_poset(&p);
            (to_toml(&canonical), vec![format!("elements: {}", p.len())], json!({ "elements": p.len() }))
        }
        FixtureKind::Category => {
            let c = read_category(path)?;
            let summary = vec![
                format!("objects: {}", c.num_objects()),
                format!("morphisms: {} (including identities)", c.num_morphisms()),
            ];
            let details = json!({
                "objects": c.num_objects(),
                "morphisms": c.num_morphisms(),
                "initial": c.initial_object().map(|o| c.object_name(o).to_owned()),
                "terminal": c.terminal_object().map(|o| c.object_name(o).to_owned()),
            });
            (to_toml(&CategoryDoc::of_category(&c)), summary, details)
        }
        FixtureKind::Presheaf => {
            let loaded = load_presheaf(path)?;
            let doc: PresheafDoc = read_doc(path)?;
            let mut summary = vec![format!("kind: {}", doc.kind), format!("objects: {}", loaded.base.num_objects())];
            let mut objects = Vec::new();
            if let AnyPresheaf::Lattice(p) = loaded.resolve()? {
                for o in p.base().objects() {
                    let (s, d) = lattice_facts(p.value(o));
                    summary.push(format!("{}: {}", p.base().object_name(o), s.join(", ")));
                    objects.push(json!({ "object": p.base().object_name(o), "value": d }));
                }
            } else {
                loaded.resolve()?;
            }
            (to_toml(&doc), summary, json!({ "kind": doc.kind, "objects": objects }))
        }
    };
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    lines.push("---".into());
    lines.append(&mut summary);
    Ok(Report::new("show", Some(path), true, lines, json!({ "canonical": text, "metadata": details })))
}

fn fail_report(check: Check, path: &Path, why: String, witness: Value) -> Report {
    Report::new(check.name(), Some(path), false, vec![why], json!({ "witness": witness }))
}

fn expect_kind(path: &Path, kind: FixtureKind) -> Result<()> {
    if FixtureKind::of(path)? != kind {
        bail!("{}: this check needs a {} file", path.display(), if kind == FixtureKind::Lattice { ".lat" } else { ".psh" });
    }
    Ok(())
}

pub fn check(path: &Path, which: Check) -> Result<Report> {
    let lattice_check = matches!(which, Check::Normal | Check::Regular | Check::Complete);
    expect_kind(path, if lattice_check { FixtureKind::Lattice } else { FixtureKind::Presheaf })?;
    match which {
        Check::Normal => check_normal(path),
        Check::Regular => check_regular(path),
        Check::Complete => check_complete(path),
        Check::Tilde => match load_presheaf(path)?.resolve()? {
            AnyPresheaf::Lattice(p) => check_tilde(path, &p),
            AnyPresheaf::Poset(p) => check_tilde(path, &p),
            AnyPresheaf::Set(_) => bail!("tilde needs a lattice or poset presheaf"),
        },
        Check::PowersetIso => match load_presheaf(path)?.resolve()? {
            AnyPresheaf::Set(p) => Ok(iso_report(which, path, check_powerset_iso(&p))),
            _ => bail!("powerset-iso needs a presheaf of kind `set`"),
        },
        Check::IdlIso => match load_presheaf(path)?.resolve()? {
            AnyPresheaf::Poset(p) => Ok(iso_report(which, path, check_idl_iso(&p))),
            _ => bail!("idl-iso needs a presheaf of kind `poset`"),
        },
        Check::CIso => {
            let p = load_presheaf(path)?.lattice()?;
            Ok(iso_report(which, path, check_c_iso(&p)))
        }
        Check::Theorem => check_theorem(path, load_presheaf(path)?.lattice()?),
    }
}

fn check_normal(path: &Path) -> Result<Report> {
    let l = read_lattice(path)?;
    let cert = is_normal(&l);
    cert.check(&l)?;
    Ok(match cert {
        NormalityCertificate::NotNormal { a, b } => {
            let (a, b) = (l.name(a), l.name(b));
            fail_report(
                Check::Normal,
                path,
                format!("not normal: the cover {a} ∨ {b} = 1 has no separating pair"),
                json!({ "cover": [a, b] }),
            )
        }
        NormalityCertificate::Normal { witnesses } => {
            let rows: Vec<Value> = witnesses
                .iter()
                .map(|w| json!({ "a": l.name(w.a), "b": l.name(w.b), "a_sep": l.name(w.a_sep), "b_sep": l.name(w.b_sep) }))
                .collect();
            Report::new(
                "normal",
                Some(path),
                true,
                vec![format!("normal: {} covering pairs separated", rows.len())],
                json!({ "witnesses": rows }),
            )
        }
    })
}

fn check_regular(path: &Path) -> Result<Report> {
    let l = read_lattice(path)?;
    if is_compact_regular(&l) {
        return Ok(Report::new("regular", Some(path), true, vec!["compact regular".into()], json!({})));
    }
    let wi = WellInside::new(&l);
    let b = l.elements().find(|&b| l.join_all(wi.below(b).ones()) != b).expect("some element fails");
    let j = l.join_all(wi.below(b).ones());
    Ok(fail_report(
        Check::Regular,
        path,
        format!("not regular: the join of elements well inside {} is {}", l.name(b), l.name(j)),
        json!({ "element": l.name(b), "join_of_well_inside": l.name(j) }),
    ))
}

fn check_complete(path: &Path) -> Result<Report> {
    let n = read_lattice(path)?;
    let c = match complete_c(&n) {
        Ok(c) => c,
        Err(Error::NotNormal(a, b)) => {
            return Ok(fail_report(
                Check::Complete,
                path,
                format!("not normal: cover {a} ∨ {b} admits no separating pair"),
                json!({ "cover": [a, b] }),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = check_completion(&n, &c).and_then(|_| completion_onto_center(&n, &c));
    let cl = c.lattice();
    let text = to_toml(&LatticeDoc::of_poset(cl.poset()));
    let doubledown: Vec<(String, String)> =
        n.elements().map(|x| (n.name(x).to_owned(), cl.name(c.doubledown(x)).to_owned())).collect();
    let mut summary = vec![format!("C has {} elements", cl.len())];
    summary.extend(text.lines().map(str::to_owned));
    if let Err(e) = &verdict {
        summary.push(format!("completion check failed: {e}"));
    }
    Ok(Report::new(
        "complete",
        Some(path),
        verdict.is_ok(),
        summary,
        json!({ "elements": cl.len(), "lattice": text, "doubledown": doubledown }),
    ))
}

fn check_tilde<V: FamilyCarrier>(path: &Path, p: &Arc<Presheaf<V>>) -> Result<Report> {
    let t = tilde(p)?;
    let c: &FinCategory = p.base();
    let verdict = check_tilde_vs_slice(&t).and_then(|_| check_unit_counit(&t)).and_then(|_| check_psi_identity(&t));
    let mut summary = Vec::new();
    let mut objects = Vec::new();
    for a in c.objects() {
        let coords: Vec<&str> = t.coordinates(a).iter().map(|&f| c.mor_name(f)).collect();
        let families: Vec<Value> = t
            .families(a)
            .iter()
            .map(|fam| {
                let entries: serde_json::Map<String, Value> = t
                    .coordinates(a)
                    .iter()
                    .zip(fam)
                    .map(|(&f, &x)| (c.mor_name(f).to_owned(), json!(p.value(c.dom(f)).element_name(x))))
                    .collect();
                Value::Object(entries)
            })
            .collect();
        summary.push(format!("{}: {} families over ({})", c.object_name(a), families.len(), coords.join(", ")));
        objects.push(json!({ "object": c.object_name(a), "coordinates": coords, "families": families }));
    }
    if let Err(e) = &verdict {
        summary.push(format!("tilde check failed: {e}"));
    }
    Ok(Report::new("tilde", Some(path), verdict.is_ok(), summary, json!({ "objects": objects })))
}

fn iso_report(which: Check, path: &Path, r: laxframe::Result<IsoReport>) -> Report {
    match r {
        Ok(r) => {
            let mut summary: Vec<String> =
                r.objects.iter().map(|o| format!("{}: {} families agree", o.object, o.size)).collect();
            summary.push(format!("{} restriction squares agree", r.restriction_squares));
            Report::new(which.name(), Some(path), true, summary, serde_json::to_value(&r).unwrap())
        }
        Err(e) => fail_report(which, path, e.to_string(), json!(e.to_string())),
    }
}

fn check_theorem(path: &Path, p: Arc<Presheaf<FinDistLattice>>) -> Result<Report> {
    let a = match KRFunctor::new(p.clone()) {
        Ok(a) => a,
        Err(e) => {
            let bad: Vec<&str> = p
                .base()
                .objects()
                .filter(|&o| !is_compact_regular(p.value(o)))
                .map(|o| p.base().object_name(o))
                .collect();
            return Ok(fail_report(Check::Theorem, path, e.to_string(), json!({ "not_regular_at": bad })));
        }
    };
    let run = || -> laxframe::Result<Value> {
        let theorem = verify_theorem(&a)?;
        let frame = psi_functor(&a)?;
        let fixed = verify_fixed(&frame)?;
        let jt = p.base().objects().map(|o| jt_pointwise(&frame, o)).collect::<laxframe::Result<Vec<_>>>()?;
        Ok(json!({ "theorem": theorem, "fixed": fixed, "pointwise": jt }))
    };
    Ok(match run() {
        Ok(details) => Report::new(
            "theorem",
            Some(path),
            true,
            vec![
                "Φ(Ψ(A)) ≅ A: counit and unit are inverse natural isomorphisms".into(),
                "Ψ(Φ(Ψ(A))) ≅ Ψ(A) through λ".into(),
                format!("C(A(a)) ≅ A(a) at all {} objects", p.base().num_objects()),
            ],
            details,
        ),
        Err(e) => fail_report(Check::Theorem, path, e.to_string(), json!(e.to_string())),
    })
}

pub fn run_search(cfg: &SearchConfig) -> Result<Report> {
    let r = search(cfg)?;
    let summary = r.to_string().lines().filter(|l| *l != "PASS").map(str::to_owned).collect();
    Ok(Report::new("search", None, r.passed, summary, serde_json::to_value(&r)?))
}
