//! Jobs and JSON reports shared by the command line and the browser demo.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::characters::{builtin_rational_table, detect_builtin_rational_table, dixon, ingest_table, CharacterTable, TableSpec};
use crate::classify::{classify, count_irreducibles, Classification};
use crate::cohomology::{cyclic_class, transgression};
use crate::error::{Error, Result};
use crate::field::{rat, Field};
use crate::groups::{Group, GroupSpec};
use crate::linalg::Matrix;
use crate::local_global::{negative_pell_squarefree_criterion, norm_equation};
use crate::schur::character_order;
use crate::semilinear::{extension_search_finite, finite_linear_irreps, SemilinearRep, Surjection};
use crate::surjection::GaloisSurjection;
use crate::tower::{AnyTower, FiniteTower, GaloisTower, TowerInfo, TowerSpec};

macro_rules! with_tower {
    ($tower:expr, $t:ident => $body:expr) => {
        match $tower {
            AnyTower::Quadratic($t) => $body,
            AnyTower::Cyclotomic($t) => $body,
            AnyTower::Finite($t) => $body,
            AnyTower::Archimedean($t) => $body,
        }
    };
}

/// Where the rational character table of `G` comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum RationalSource {
    Builtin(String),
    Spec(TableSpec),
    /// A builtin table is used when the group is recognised.
    Auto,
}

impl RationalSource {
    /// `builtin:S3`, `builtin:C4`, or table JSON.
    pub fn parse(arg: &str, contents: Option<&str>) -> Result<Self> {
        if let Some(name) = arg.strip_prefix("builtin:") {
            return Ok(RationalSource::Builtin(name.to_string()));
        }
        let text = contents.ok_or_else(|| Error::InvalidInput(format!("rational table {arg} is not readable")))?;
        Ok(RationalSource::Spec(TableSpec::from_json(text)?))
    }

    fn resolve(&self, g: &Group) -> Result<Option<CharacterTable>> {
        match self {
            RationalSource::Builtin(name) => builtin_rational_table(name, g).map(Some),
            RationalSource::Spec(spec) => ingest_table(spec, g).map(Some),
            RationalSource::Auto => Ok(detect_builtin_rational_table(g).map(|x| x.1)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    pub group: GroupSpec,
    pub tower: TowerSpec,
    pub conductor: Option<u64>,
    pub rational: RationalSource,
    pub budget: u64,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Job {
    pub fn new(group: GroupSpec, tower: TowerSpec) -> Self {
        Job { group, tower, conductor: None, rational: RationalSource::Auto, budget: DEFAULT_BUDGET }
    }
}

/// `σ` from `sigma_images`; these may be omitted only when `Γ` is trivial.
pub fn surjection<T: TowerInfo + ?Sized>(spec: &GroupSpec, tower: Arc<T>) -> Result<GaloisSurjection<T>> {
    let g = spec.build()?;
    let images = match &spec.sigma_images {
        Some(im) => im.clone(),
        None if tower.degree() == 1 => vec![0; g.generators().len()],
        None => return Err(Error::InvalidInput("group: sigma_images is required for a nontrivial Γ".into())),
    };
    GaloisSurjection::from_generator_images(g, tower, &images)
}

fn perm_of(g: &Group, x: usize) -> Value {
    match g.perm(x) {
        Some(p) => json!(p.iter().map(|i| i + 1).collect::<Vec<_>>()),
        None => json!(x),
    }
}

fn classification_json<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, c: &Classification) -> Value {
    let lk = s.tower.degree() as u64;
    let profile: Option<Vec<Value>> = c
        .descriptors
        .iter()
        .map(|d| match (d.dimension, d.endo_dimension) {
            (Some(dim), Some(e)) => Some(json!({ "n": lk * dim / e, "d": e })),
            _ => None,
        })
        .collect();
    let total: Option<u64> = profile.as_ref().map(|p| {
        p.iter().map(|f| f["n"].as_u64().unwrap().pow(2) * f["d"].as_u64().unwrap()).sum()
    });
    json!({
        "tower": s.tower.spec(),
        "group_order": s.group.order(),
        "kernel_order": s.kernel.order(),
        "gamma_order": lk,
        "kernel_table": c.orbits.table.to_report(&s.kernel.group),
        "l_rows": c.orbits.l_rows,
        "classical_schur_assumed": c.classical_schur_assumed,
        "descriptors": c.descriptors,
        "wedderburn": profile,
        "wedderburn_total": total,
        "algebra_dimension": lk * s.group.order() as u64,
    })
}

fn classify_generic<T: TowerInfo + ?Sized>(job: &Job, t: Arc<T>) -> Result<Value> {
    let s = surjection(&job.group, t)?;
    let rt = job.rational.resolve(&s.group)?;
    let c = classify(&s, rt.as_ref())?;
    Ok(classification_json(&s, &c))
}

pub fn classify_report(job: &Job) -> Result<Value> {
    match job.tower.build()? {
        AnyTower::Finite(t) => {
            let mut r = classify_generic(job, t.clone())?;
            let s = Arc::new(surjection(&job.group, t)?);
            r["extensions"] = finite_witnesses(&s, job.budget)?;
            Ok(r)
        }
        other => with_tower!(other, t => classify_generic(job, t)),
    }
}

/// Explicit extensions of every orbit sum over a finite field, found by exhaustive search.
fn finite_witnesses(s: &Surjection<FiniteTower>, budget: u64) -> Result<Value> {
    let irreps = match finite_linear_irreps(s) {
        Ok(r) => r,
        Err(Error::Unsupported(why)) => return Ok(json!({ "skipped": why })),
        Err(e) => return Err(e),
    };
    let gamma = s.tower.gamma();
    let gens: Vec<usize> = gamma.cyclic_generator().into_iter().collect();
    let mut seen = vec![false; irreps.len()];
    let mut out = Vec::new();
    for i in 0..irreps.len() {
        if seen[i] {
            continue;
        }
        // orbit of irreps[i] under twisting by the section of a generator of Γ
        let mut orbit = vec![i];
        seen[i] = true;
        let mut cur = irreps[i].clone();
        for _ in 1..gamma.order() {
            let Some(&g) = gens.first() else { break };
            cur = cur.twist(s.section(g));
            match (0..irreps.len()).find(|&j| !cur.intertwiners(&irreps[j]).is_empty()) {
                Some(j) if !orbit.contains(&j) => {
                    orbit.push(j);
                    seen[j] = true;
                }
                _ => break,
            }
        }
        let sum = orbit[1..].iter().fold(irreps[i].clone(), |acc, &j| acc.direct_sum(&irreps[j]));
        let r = extension_search_finite(&sum, budget)?;
        out.push(json!({
            "orbit_size": orbit.len(),
            "dimension": sum.dim(),
            "found": r.found().is_some(),
            "candidates": r.candidates().to_string(),
        }));
    }
    Ok(Value::Array(out))
}

fn schur_generic<T: TowerInfo + ?Sized>(job: &Job, t: Arc<T>) -> Result<Value> {
    let s = surjection(&job.group, t)?;
    let rt = job.rational.resolve(&s.group)?;
    let c = classify(&s, rt.as_ref())?;
    let f = &c.orbits.table.field;
    let cyclic = s.tower.gamma().cyclic_generator().is_some();
    let mut out = Vec::new();
    for d in &c.descriptors {
        let chi = c.orbits.l_character(d.orbit[0]);
        let mut entry = json!({ "orbit": d.orbit, "rows": d.rows, "schur": d.schur });
        if d.orbit.len() == 1 && d.w_norm == 1 && d.degree_w == 1 && s.tower.characteristic() == 0 {
            let cocycle = transgression(&s, f, &chi, None)?;
            entry["transgression"] = json!({ "cocycle": cocycle.formatted() });
            if cyclic {
                entry["transgression"]["class"] = json!(cyclic_class(&s, &cocycle, character_order(f, &chi))?);
            }
        }
        out.push(entry);
    }
    Ok(json!({ "tower": s.tower.spec(), "orbits": out }))
}

pub fn schur_report(job: &Job) -> Result<Value> {
    with_tower!(job.tower.build()?, t => schur_generic(job, t))
}

fn count_generic<T: TowerInfo + ?Sized>(job: &Job, t: Arc<T>) -> Result<Value> {
    let s = surjection(&job.group, t)?;
    let r = count_irreducibles(&s, job.conductor)?;
    let classes = s.kernel.group.conjugacy_classes();
    let reps: Vec<Value> = (0..classes.len()).map(|k| perm_of(&s.group, s.kernel.parent(classes.rep(k)))).collect();
    Ok(json!({ "tower": s.tower.spec(), "count": r.count, "conductor": r.conductor, "orbits": r.orbits, "class_representatives": reps }))
}

pub fn count_report(job: &Job) -> Result<Value> {
    with_tower!(job.tower.build()?, t => count_generic(job, t))
}

pub fn table_report(group: &GroupSpec) -> Result<Value> {
    let g = group.build()?;
    let t = dixon(&g)?;
    Ok(json!({ "field": format!("Q(zeta{})", t.field.conductor()), "table": t.to_report(&g) }))
}

pub fn pell_report(d: i64) -> Result<Value> {
    let r = norm_equation(d, &rat(-1))?;
    let criterion = negative_pell_squarefree_criterion(d)?;
    if criterion != r.solvable {
        return Err(Error::Internal("squarefree criterion disagrees with the Hilbert symbols".into()));
    }
    Ok(json!({
        "equation": format!("x^2 - ({d})*y^2 = -1"),
        "d": d,
        "solvable": r.solvable,
        "hilbert": r.hilbert,
        "obstruction": r.obstruction.map(|p| p.to_string()),
        "certificate": r.certificate,
        "squarefree_criterion": criterion,
        "schur_index": if r.solvable { 1 } else { 2 },
    }))
}

/// Rep file: matrices for `G`'s generators, keyed `gen0`, `gen1`, ...
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub group: GroupSpec,
    pub tower: TowerSpec,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

impl RepFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("rep file: {e}")))
    }

    fn parse_matrices<T: GaloisTower>(&self, t: &T, gens: usize) -> Result<(usize, Vec<Matrix<<T::L as Field>::Elem>>)> {
        let mut out = Vec::new();
        let mut dim = None;
        for i in 0..gens {
            let key = format!("gen{i}");
            let rows = self.matrices.get(&key).ok_or_else(|| Error::InvalidInput(format!("matrices: missing {key}")))?;
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) || dim.is_some_and(|d| d != n) {
                return Err(Error::InvalidInput(format!("matrices.{key}: expected a square matrix of the common size")));
            }
            dim = Some(n);
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c, x)| t.parse_element(x).map_err(|e| Error::Parse(format!("matrices.{key}[{r}][{c}]: {e}"))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Matrix::from_rows(parsed));
        }
        if self.matrices.len() != gens {
            return Err(Error::InvalidInput(format!("matrices: expected {gens} entries gen0..gen{}", gens - 1)));
        }
        Ok((dim.unwrap_or(0), out))
    }
}

fn verify_generic<T: GaloisTower>(file: &RepFile, t: Arc<T>, rational: &RationalSource) -> Result<Value> {
    let s = Arc::new(surjection(&file.group, t)?);
    let tower = &*s.tower;
    let (dim, gens) = file.parse_matrices(tower, s.group.generators().len())?;
    let rep = match SemilinearRep::from_generators(s.clone(), dim, &gens) {
        Ok(r) => r,
        Err(Error::CocycleFailure { g1, g2 }) => {
            return Ok(json!({
                "valid": false,
                "witness": [perm_of(&s.group, g1), perm_of(&s.group, g2)],
                "rep": file,
            }))
        }
        Err(e) => return Err(e),
    };
    let chi = rep.character();
    let formatted: Vec<String> = chi.iter().map(|x| tower.format_element(x)).collect();
    let rt = rational.resolve(&s.group)?;
    let c = classify(&*s, rt.as_ref())?;
    let matched = if tower.characteristic() == 0 {
        c.descriptors.iter().position(|d| {
            d.psi.as_ref().is_some_and(|psi| {
                psi.iter().zip(&chi).all(|(a, b)| tower.from_cyclotomic(a).as_ref() == Some(b))
            })
        })
    } else {
        None
    };
    Ok(json!({
        "valid": true,
        "dimension": dim,
        "restricted_character": formatted,
        "endomorphism_dimension": rep.endomorphism_dimension(),
        "matched_descriptor": matched,
        "descriptors": c.descriptors,
        "rep": file,
    }))
}

pub fn verify_report(file: &RepFile, rational: &RationalSource) -> Result<Value> {
    match file.tower.build()? {
        AnyTower::Quadratic(t) => verify_generic(file, t, rational),
        AnyTower::Cyclotomic(t) => verify_generic(file, t, rational),
        AnyTower::Finite(t) => verify_generic(file, t, rational),
        AnyTower::Archimedean(_) => Err(Error::Unsupported("explicit matrices over C are not supported".into())),
    }
}
