//! Irreducible semilinear representations from characters: `Q(ζ_e)`-rows of `H` fuse into
//! `L`-rows, `Γ` permutes the `L`-rows, and each `Γ`-orbit is one irreducible with
//! character `m · Σ_orbit χ`.

use num::{Signed, ToPrimitive};
use serde::Serialize;

use crate::characters::{dixon, restrict, CharacterTable};
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::field::{gcd, Field};
use crate::schur::{combine, OrbitData, SchurIndexReport};
use crate::surjection::{orbits_of, ClassAction, GaloisSurjection};
use crate::tower::{CharacterAction, TowerInfo, TowerKind};

/// `σ_t` on `Q(ζ_e)`, the identity when `e ≤ 2`.
fn act(f: &CyclotomicField, t: u64, x: &CyclotomicNumber) -> CyclotomicNumber {
    if f.conductor() <= 2 {
        x.clone()
    } else {
        f.apply_automorphism(t % f.conductor(), x)
    }
}

fn find_row(rows: &[Vec<CyclotomicNumber>], v: &[CyclotomicNumber]) -> Option<usize> {
    rows.iter().position(|r| r.as_slice() == v)
}

/// The `Γ`-action on `L`-irreducible characters of `H`.
#[derive(Clone, Debug)]
pub struct GaloisOrbits {
    pub table: CharacterTable,
    pub action: CharacterAction,
    /// Orbits of splitting-field rows under `Gal(L(ζ_e)/L)`; each is one `L`-row.
    pub l_rows: Vec<Vec<usize>>,
    /// `gamma_perms[γ][w]` is the `L`-row `γ * W`.
    pub gamma_perms: Vec<Vec<usize>>,
    /// `Γ`-orbits of `L`-rows.
    pub orbits: Vec<Vec<usize>>,
}

impl GaloisOrbits {
    /// Character of an `L`-row, `Σ` over its fused splitting-field rows.
    pub fn l_character(&self, w: usize) -> Vec<CyclotomicNumber> {
        let f = &self.table.field;
        let r = self.table.num_classes();
        self.l_rows[w].iter().fold(vec![f.zero(); r], |acc, &i| acc.iter().zip(&self.table.rows[i]).map(|(a, b)| f.add(a, b)).collect())
    }

    pub fn orbit_sum(&self, orbit: usize) -> Vec<CyclotomicNumber> {
        let f = &self.table.field;
        let r = self.table.num_classes();
        self.orbits[orbit].iter().fold(vec![f.zero(); r], |acc, &w| {
            acc.iter().zip(&self.l_character(w)).map(|(a, b)| f.add(a, b)).collect()
        })
    }
}

/// Computes the table of `H`, fuses rows into `L`-rows, and finds the `Γ`-orbits via
/// `(γ * χ)(h) = γ(χ(g_γ^{-1} h g_γ))`.
pub fn galois_orbits<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>) -> Result<GaloisOrbits> {
    let tower = &*s.tower;
    let h = &s.kernel.group;
    if tower.characteristic() != 0 && (h.order() as u64) % tower.characteristic() == 0 {
        return Err(Error::Precondition("the characteristic divides |H|".into()));
    }
    let table = dixon(h)?;
    let f = &table.field;
    let e = f.conductor();
    let action = tower.character_action(e)?;
    let n = table.rows.len();
    let cl = &s.kernel_classes;

    let fused_perms: Vec<Vec<usize>> = action
        .fused
        .iter()
        .map(|&t| {
            (0..n)
                .map(|i| {
                    let img: Vec<_> = table.rows[i].iter().map(|x| act(f, t, x)).collect();
                    find_row(&table.rows, &img).ok_or_else(|| Error::Internal("Galois image of a row is not a row".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let l_rows = orbits_of(n, &fused_perms);
    let mut l_row_of = vec![0; n];
    for (w, o) in l_rows.iter().enumerate() {
        for &i in o {
            l_row_of[i] = w;
        }
    }

    let gamma = tower.gamma();
    let grp = &s.group;
    let mut gamma_perms = Vec::with_capacity(gamma.order());
    for g in 0..gamma.order() {
        let y = s.section(g);
        let t = action.lifts[g];
        // column k of γ*χ reads χ at the class of y^{-1} h_k y
        let src: Vec<usize> = (0..cl.len())
            .map(|k| {
                let hk = s.kernel.parent(cl.rep(k));
                s.kernel_class_of(grp.conj(grp.inv(y), hk))
            })
            .collect();
        let mut perm = Vec::with_capacity(l_rows.len());
        for o in &l_rows {
            let i = o[0];
            let img: Vec<_> = src.iter().map(|&k| act(f, t, &table.rows[i][k])).collect();
            let j = find_row(&table.rows, &img).ok_or_else(|| Error::Internal("γ does not permute the rows".into()))?;
            perm.push(l_row_of[j]);
        }
        gamma_perms.push(perm);
    }
    // genuine action on L-rows
    for a in 0..gamma.order() {
        for b in 0..gamma.order() {
            let ab = gamma.mul(a, b);
            for w in 0..l_rows.len() {
                if gamma_perms[ab][w] != gamma_perms[a][gamma_perms[b][w]] {
                    return Err(Error::Internal("Γ-action on characters is not an action".into()));
                }
            }
        }
    }
    let orbits = orbits_of(l_rows.len(), &gamma_perms);
    Ok(GaloisOrbits { table, action, l_rows, gamma_perms, orbits })
}

/// One irreducible semilinear representation.
#[derive(Clone, Debug, Serialize)]
pub struct Descriptor {
    /// `L`-rows in the orbit.
    pub orbit: Vec<usize>,
    /// Splitting-field rows underlying the orbit.
    pub rows: Vec<usize>,
    pub stabilizer_order: usize,
    /// `⟨χ_W, χ_W⟩` for `W` in the orbit.
    pub w_norm: u64,
    pub degree_w: u64,
    #[serde(serialize_with = "ser_values")]
    pub orbit_sum: Vec<CyclotomicNumber>,
    pub schur: SchurIndexReport,
    /// `m · Σ_orbit χ`, when `m` is exact.
    #[serde(serialize_with = "ser_opt_values")]
    pub psi: Option<Vec<CyclotomicNumber>>,
    /// `m² · |orbit| · ⟨χ_W, χ_W⟩`, when `m` is exact.
    pub endo_dimension: Option<u64>,
    /// `dim_L V = m · |orbit| · deg χ_W`, when `m` is exact.
    pub dimension: Option<u64>,
}

fn fmt_values(v: &[CyclotomicNumber]) -> Vec<String> {
    match v.first() {
        Some(x) => {
            let f = CyclotomicField::new(x.conductor()).expect("conductor in range");
            v.iter().map(|y| f.format(y)).collect()
        }
        None => vec![],
    }
}

fn ser_values<S: serde::Serializer>(v: &[CyclotomicNumber], s: S) -> std::result::Result<S::Ok, S::Error> {
    fmt_values(v).serialize(s)
}

fn ser_opt_values<S: serde::Serializer>(v: &Option<Vec<CyclotomicNumber>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|x| fmt_values(x)).serialize(s)
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub orbits: GaloisOrbits,
    pub descriptors: Vec<Descriptor>,
    /// Set when `H` is nonabelian and `L` may not split it: `L`-rows are then taken to be
    /// orbit sums of splitting-field rows, i.e. classical Schur indices over `L` are assumed 1.
    pub classical_schur_assumed: bool,
}

/// `hcf_U a_{U,O}` per orbit, from `ψ_U|_H = Σ_O a_{U,O} χ_O`.
pub fn schur_bound_gcd<T: TowerInfo + ?Sized>(
    s: &GaloisSurjection<T>,
    go: &GaloisOrbits,
    rational: &CharacterTable,
) -> Result<Vec<u64>> {
    if rational.classes.len() != s.group.conjugacy_classes().len() || rational.group_order != s.group.order() {
        return Err(Error::InvalidInput("the rational table does not belong to G".into()));
    }
    let f = &go.table.field;
    let h_classes = &s.kernel_classes;
    let mut bounds = vec![0u64; go.orbits.len()];
    for (u, row) in rational.rows.iter().enumerate() {
        let lifted: Vec<CyclotomicNumber> = row
            .iter()
            .map(|x| {
                x.as_rational()
                    .and_then(|q| f.from_rational(&q))
                    .ok_or_else(|| Error::InvalidInput(format!("row {u} of the rational table is not rational")))
            })
            .collect::<Result<_>>()?;
        let res = restrict(&lifted, &rational.classes, &s.kernel, h_classes);
        let mut rebuilt = vec![f.zero(); res.len()];
        for (o, orbit) in go.orbits.iter().enumerate() {
            let w = go.l_character(orbit[0]);
            let num = go.table.inner_product(&res, &w).as_rational();
            let den = go.table.inner_product(&w, &w).as_rational();
            let a = match (num, den) {
                (Some(n), Some(d)) => n / d,
                _ => return Err(Error::InvalidInput(format!("row {u} does not restrict to orbit sums"))),
            };
            if !a.is_integer() || a.is_negative() {
                return Err(Error::InvalidInput(format!("row {u} does not restrict to orbit sums")));
            }
            let a = a.to_integer().to_u64().unwrap();
            bounds[o] = gcd(bounds[o], a);
            let sum = go.orbit_sum(o);
            let af = f.from_int(a as i64);
            rebuilt = rebuilt.iter().zip(&sum).map(|(x, y)| f.add(x, &f.mul(&af, y))).collect();
        }
        if rebuilt != res {
            return Err(Error::InvalidInput(format!("row {u} does not restrict to orbit sums")));
        }
    }
    if bounds.contains(&0) {
        return Err(Error::InvalidInput("some orbit occurs in no row of the rational table".into()));
    }
    Ok(bounds)
}

/// Classifies irreducible semilinear representations; the rational table (for `G`) only
/// sharpens Schur-index bounds.
pub fn classify<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, rational: Option<&CharacterTable>) -> Result<Classification> {
    let tower = &*s.tower;
    let go = galois_orbits(s)?;
    let f = go.table.field.clone();
    let bounds = match rational {
        Some(t) if tower.characteristic() == 0 => Some(schur_bound_gcd(s, &go, t)?),
        _ => None,
    };
    let h = &s.kernel.group;
    let classical_schur_assumed = !h.is_abelian()
        && tower.characteristic() == 0
        && tower.kind() != TowerKind::Archimedean
        && tower.roots_of_unity_action(h.exponent()).is_none();
    let gamma_order = tower.degree();
    let mut descriptors = Vec::new();
    for (o, orbit) in go.orbits.iter().enumerate() {
        let w = orbit[0];
        let chi = go.l_character(w);
        let w_norm = go.table.inner_product(&chi, &chi).as_rational().and_then(|q| q.to_integer().to_u64()).unwrap();
        let degree_w = chi[0].as_rational().and_then(|q| q.to_integer().to_u64()).unwrap();
        let stabilizer_order = gamma_order / orbit.len();
        let data = OrbitData {
            field: &f,
            chi: &chi,
            norm: w_norm,
            orbit_size: orbit.len(),
            stabilizer_order,
            gcd_bound: bounds.as_ref().map(|b| b[o]),
        };
        let schur = combine(s, &data)?;
        let sum = go.orbit_sum(o);
        let (psi, endo_dimension, dimension) = match schur.exact() {
            Some(m) => {
                let mf = f.from_int(m as i64);
                (
                    Some(sum.iter().map(|x| f.mul(&mf, x)).collect()),
                    Some(m * m * orbit.len() as u64 * w_norm),
                    Some(m * orbit.len() as u64 * degree_w),
                )
            }
            None => (None, None, None),
        };
        let mut rows: Vec<usize> = orbit.iter().flat_map(|&w| go.l_rows[w].iter().copied()).collect();
        rows.sort_unstable();
        descriptors.push(Descriptor {
            orbit: orbit.clone(),
            rows,
            stabilizer_order,
            w_norm,
            degree_w,
            orbit_sum: sum,
            schur,
            psi,
            endo_dimension,
            dimension,
        });
    }
    Ok(Classification { orbits: go, descriptors, classical_schur_assumed })
}

/// `|Cl(H)/Γ|` under the diagonal action.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub conductor: u64,
    pub count: usize,
    /// Orbits of `H`-classes, as class indices.
    pub orbits: Vec<Vec<usize>>,
    #[serde(skip)]
    pub action: Option<ClassAction>,
}

pub fn count_irreducibles<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, n: Option<u64>) -> Result<CountReport> {
    let a = s.two_sided_class_action(n)?;
    Ok(CountReport { conductor: a.conductor, count: a.orbits.len(), orbits: a.orbits.clone(), action: Some(a) })
}
