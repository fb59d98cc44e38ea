//! Semilinear Schur indices: exact values where a criterion decides them, otherwise a
//! divisor set that is guaranteed to contain the true value.

use num::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::field::{gcd, rat, Field, Rational};
use crate::local_global::{hilbert_symbol, negative_pell_squarefree_criterion, norm_equation, Place, DEFAULT_CERTIFICATE_HEIGHT};
use crate::surjection::GaloisSurjection;
use crate::tower::{TowerInfo, TowerKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub criterion: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl Evidence {
    fn new(criterion: &str, detail: impl Into<String>) -> Self {
        Evidence { criterion: criterion.into(), detail: detail.into(), certificate: None }
    }

    fn with(mut self, cert: serde_json::Value) -> Self {
        self.certificate = Some(cert);
        self
    }
}

/// `m` is exact when `candidates` is a singleton.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchurIndexReport {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    pub candidates: Vec<u64>,
    pub evidence: Vec<Evidence>,
}

impl SchurIndexReport {
    fn from_candidates(candidates: Vec<u64>, evidence: Vec<Evidence>) -> Self {
        let exact = candidates.len() == 1;
        SchurIndexReport {
            status: if exact { Status::Exact } else { Status::Bounded },
            value: if exact { Some(candidates[0]) } else { None },
            candidates,
            evidence,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        self.value
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Everything about one orbit that the criteria consume.
#[derive(Clone, Debug)]
pub struct OrbitData<'a> {
    pub field: &'a CyclotomicField,
    /// Values of one `L`-irreducible character `χ_W` of the orbit on `H`-classes.
    pub chi: &'a [CyclotomicNumber],
    /// `⟨χ_W, χ_W⟩`.
    pub norm: u64,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    /// `hcf` bound from a rational table, if supplied.
    pub gcd_bound: Option<u64>,
}

/// Order of a linear character as a class function (values are roots of unity).
pub fn character_order(f: &CyclotomicField, chi: &[CyclotomicNumber]) -> u64 {
    let e = f.conductor().max(1);
    (1..=e)
        .filter(|k| e % k == 0)
        .find(|&k| chi.iter().all(|x| f.is_one(&f.pow(x, k))))
        .unwrap_or(e)
}

fn is_linear(d: &OrbitData) -> bool {
    d.chi[0].as_rational() == Some(Rational::from_integer(1.into())) && d.norm == 1
}

/// `F̃(W) = (1/|H|) Σ_{g ∉ H} χ_W(g²)`.
pub fn fs_indicator<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, f: &CyclotomicField, chi: &[CyclotomicNumber]) -> Result<i64> {
    let g = &s.group;
    let mut acc = f.zero();
    for x in 0..g.order() {
        if s.sigma(x) != 0 {
            let sq = g.mul(x, x);
            acc = f.add(&acc, &chi[s.kernel_class_of(sq)]);
        }
    }
    let v = acc
        .as_rational()
        .map(|q| q / Rational::from_integer((s.kernel.order() as i64).into()))
        .ok_or_else(|| Error::Internal("indicator is not rational".into()))?;
    match v.to_i64() {
        Some(x) if (-1..=1).contains(&x) && v.is_integer() => Ok(x),
        _ => Err(Error::Internal(format!("indicator {v} lies outside {{-1, 0, 1}}"))),
    }
}

/// The norm target `χ(y^p)` for a Γ-fixed linear `χ` and `y = g_γ`, `γ` generating a cyclic Γ of order `p`.
pub fn norm_target<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, chi: &[CyclotomicNumber]) -> Option<CyclotomicNumber> {
    let gamma = s.tower.gamma();
    let gen = gamma.cyclic_generator()?;
    let y = s.section(gen);
    let yp = s.group.pow(y, gamma.order() as i64);
    Some(chi[s.kernel_class_of(yp)].clone())
}

/// Runs every applicable criterion and intersects the resulting constraints.
pub fn combine<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, d: &OrbitData) -> Result<SchurIndexReport> {
    let tower = &*s.tower;
    let degree = tower.degree() as u64;
    let mut ev = Vec::new();
    let mut cand = divisors(d.stabilizer_order as u64);
    ev.push(Evidence::new("stabilizer", format!("m divides |Γ_W| = {}", d.stabilizer_order)));
    let mut exact_hits: Vec<(u64, &'static str)> = Vec::new();

    match tower.kind() {
        TowerKind::Finite => {
            exact_hits.push((1, "finite field"));
            ev.push(Evidence::new("finite field", "every semilinear Schur index over a finite field is 1"));
        }
        TowerKind::Archimedean => {
            let fs = fs_indicator(s, d.field, d.chi)?;
            let detail = format!("F̃(W) = {fs}");
            ev.push(Evidence::new("indicator", detail).with(json!({ "indicator": fs })));
            match fs {
                -1 => exact_hits.push((2, "indicator")),
                1 => exact_hits.push((1, "indicator")),
                _ => {
                    if d.orbit_size == 1 {
                        return Err(Error::Internal("indicator vanishes on a Γ-fixed character".into()));
                    }
                }
            }
        }
        _ => {}
    }

    if let Some(b) = d.gcd_bound {
        cand.retain(|m| b % m == 0);
        ev.push(Evidence::new("gcd bound", format!("m divides hcf of multiplicities = {b}")).with(json!({ "bound": b })));
    }

    if is_linear(d) && d.orbit_size == 1 {
        let ord = character_order(d.field, d.chi);
        let support = prime_factors(ord);
        cand.retain(|m| degree % m == 0 && prime_factors(*m).iter().all(|p| support.contains(p)));
        ev.push(Evidence::new("prime support", format!("ord(χ) = {ord}, [L:K] = {degree}")));
        if gcd(ord, degree) == 1 {
            exact_hits.push((1, "prime support"));
        }
        if let (TowerKind::Quadratic, Some(dd)) = (tower.kind(), tower.quadratic_radicand()) {
            if let Some(target) = norm_target(s, d.chi) {
                let t = target
                    .as_rational()
                    .and_then(|q| if q.is_integer() { q.to_i64() } else { None })
                    .ok_or_else(|| Error::Internal("norm target is not a rational integer".into()))?;
                let (m, e) = quadratic_norm_evidence(dd, t)?;
                exact_hits.push((m, "norm equation"));
                ev.extend(e);
            }
        }
    }

    for (m, name) in &exact_hits {
        if !cand.contains(m) {
            return Err(Error::Internal(format!("{name} gives m = {m}, outside the admissible set {cand:?}")));
        }
    }
    if let Some((m, _)) = exact_hits.first() {
        if exact_hits.iter().any(|(x, _)| x != m) {
            return Err(Error::Internal("exact criteria disagree".into()));
        }
        cand = vec![*m];
    }
    Ok(SchurIndexReport::from_candidates(cand, ev))
}

/// Decides `x² - d y² = t` over `Q` and returns `m` (1 or 2) with evidence: a verified
/// certificate, or the obstructing place, plus the local indices and their lcm.
pub fn quadratic_norm_evidence(d: i64, t: i64) -> Result<(u64, Vec<Evidence>)> {
    let rep = norm_equation(d, &rat(t))?;
    let mut ev = Vec::new();
    let symbols: Vec<serde_json::Value> = rep
        .hilbert
        .symbols
        .iter()
        .map(|(p, s)| json!({ "place": p.to_string(), "symbol": s }))
        .collect();
    let local: Vec<(Place, u64)> = rep.hilbert.symbols.iter().map(|(p, s)| (*p, if *s == -1 { 2 } else { 1 })).collect();
    let lcm_local = local.iter().map(|x| x.1).max().unwrap_or(1);
    let m = if rep.solvable { 1 } else { 2 };
    if lcm_local != m {
        return Err(Error::Internal("local-global combination disagrees with the norm equation".into()));
    }
    if t == -1 && negative_pell_squarefree_criterion(d)? != rep.solvable {
        return Err(Error::Internal("squarefree criterion disagrees with the Hilbert symbols".into()));
    }
    let equation = format!("x^2 - ({d})*y^2 = {t}");
    if rep.solvable {
        let detail = match &rep.certificate {
            Some(c) => {
                if !c.verify() {
                    return Err(Error::Internal("norm certificate fails to verify".into()));
                }
                format!("{equation} has the rational solution x = {}, y = {}", c.x, c.y)
            }
            None => format!("{equation} is locally solvable everywhere; no point found below the search height {DEFAULT_CERTIFICATE_HEIGHT}"),
        };
        let cert = rep.certificate.as_ref().map(|c| json!({ "x": c.x.to_string(), "y": c.y.to_string() })).unwrap_or(json!("local"));
        ev.push(Evidence::new("norm equation", detail).with(cert));
    } else {
        let place = rep.hilbert.ramified().first().copied().ok_or_else(|| Error::Internal("no obstructing place".into()))?;
        ev.push(
            Evidence::new("norm equation", format!("{equation} has no solution over Q_{place}"))
                .with(json!({ "obstruction": place.to_string(), "symbol": hilbert_symbol(&rat(t), &rat(d), place)? })),
        );
    }
    ev.push(Evidence::new("local-global", format!("lcm of local indices = {lcm_local}")).with(json!({ "hilbert": symbols })));
    Ok((m, ev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pell_cases() {
        for d in [2, 5, 10, 13, 34] {
            assert_eq!(quadratic_norm_evidence(d, -1).unwrap().0, 1, "d = {d}");
        }
        for d in [3, 7, -1, -2, -5] {
            assert_eq!(quadratic_norm_evidence(d, -1).unwrap().0, 2, "d = {d}");
        }
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
    }
}
