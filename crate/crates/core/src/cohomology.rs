//! The transgression of a `Γ`-fixed linear character of `H` to a 2-cocycle
//! `Γ × Γ → μ(L)`, and its class for cyclic `Γ`.
//!
//! Roots of unity are stored as exponents of `ζ_e`, `e = exp(H)`; `γ` acts on them by the
//! lift exponents of the tower's character action.

use serde::Serialize;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::field::{gcd, rat, Field};
use crate::local_global::norm_equation;
use crate::schur::character_order;
use crate::surjection::GaloisSurjection;
use crate::tower::{TowerInfo, TowerKind};

/// `f(γ1, γ2) = ζ_e^{exponents[γ1·|Γ| + γ2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCocycle {
    pub modulus: u64,
    pub gamma_order: usize,
    pub exponents: Vec<u64>,
    /// `γ` acts on the values by `ζ ↦ ζ^{lifts[γ]}`.
    pub lifts: Vec<u64>,
}

fn format_root(e: u64, x: u64) -> String {
    let x = x % e;
    if x == 0 {
        "1".into()
    } else if 2 * x == e {
        "-1".into()
    } else {
        let g = gcd(x, e);
        format!("zeta{}^{}", e / g, x / g)
    }
}

impl TwoCocycle {
    pub fn value(&self, a: usize, b: usize) -> u64 {
        self.exponents[a * self.gamma_order + b]
    }

    pub fn is_identically_one(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }

    /// Normalisation and `γ1(f(γ2,γ3)) f(γ1,γ2γ3) = f(γ1γ2,γ3) f(γ1,γ2)`, given the table of `Γ`.
    pub fn verify(&self, mul: impl Fn(usize, usize) -> usize) -> bool {
        let m = self.gamma_order;
        let e = self.modulus;
        if (0..m).any(|g| self.value(0, g) != 0 || self.value(g, 0) != 0) {
            return false;
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let lhs = (self.lifts[a] * self.value(b, c) + self.value(a, mul(b, c))) % e;
                    let rhs = (self.value(mul(a, b), c) + self.value(a, b)) % e;
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn formatted(&self) -> Vec<Vec<String>> {
        let m = self.gamma_order;
        (0..m).map(|a| (0..m).map(|b| format_root(self.modulus, self.value(a, b))).collect()).collect()
    }
}

fn root_exponent(f: &CyclotomicField, x: &CyclotomicNumber) -> Option<u64> {
    let e = f.conductor().max(1);
    (0..e).find(|&j| f.zeta_power(j as i64) == *x)
}

/// Exponents `j(k)` with `χ(h_k) = ζ_e^{j(k)}` for a linear character.
fn linear_exponents(f: &CyclotomicField, chi: &[CyclotomicNumber]) -> Result<Vec<u64>> {
    if !f.is_one(&chi[0]) {
        return Err(Error::Precondition("the character is not linear".into()));
    }
    chi.iter()
        .map(|x| root_exponent(f, x).ok_or_else(|| Error::Precondition("character values are not roots of unity".into())))
        .collect()
}

/// A section `Γ → G` that is a homomorphism, when `Γ` is cyclic and the extension splits.
pub fn complement_section<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>) -> Option<Vec<usize>> {
    let gamma = s.tower.gamma();
    let m = gamma.order();
    let gen = gamma.cyclic_generator()?;
    let g = &s.group;
    let y = (0..g.order()).find(|&x| s.sigma(x) == gen && g.pow(x, m as i64) == 0)?;
    let mut section = vec![0; m];
    for i in 0..m {
        section[gamma.pow(gen, i)] = g.pow(y, i as i64);
    }
    Some(section)
}

/// `f_χ(γ1, γ2) = (γ1γ2)(χ(h_{γ1,γ2}))^{-1}` with `h_{γ1,γ2} = g_{γ1γ2}^{-1} g_{γ1} g_{γ2}`
/// for the given section (the least-element section when `None`).
pub fn transgression<T: TowerInfo + ?Sized>(
    s: &GaloisSurjection<T>,
    f: &CyclotomicField,
    chi: &[CyclotomicNumber],
    section: Option<&[usize]>,
) -> Result<TwoCocycle> {
    let tower = &*s.tower;
    let gamma = tower.gamma();
    let m = gamma.order();
    let e = f.conductor().max(1);
    let grp = &s.group;
    let sec: Vec<usize> = match section {
        Some(sec) => {
            if sec.len() != m || sec[0] != 0 || (0..m).any(|g| s.sigma(sec[g]) != g) {
                return Err(Error::InvalidInput("not a normalised section of σ".into()));
            }
            sec.to_vec()
        }
        None => (0..m).map(|g| s.section(g)).collect(),
    };
    let j = linear_exponents(f, chi)?;
    let lifts: Vec<u64> = tower.character_action(e)?.lifts.iter().map(|&t| t % e).collect();
    // Γ-fixed: γ(χ(g_γ^{-1} h g_γ)) = χ(h)
    let cl = &s.kernel_classes;
    for g in 0..m {
        for k in 0..cl.len() {
            let h = s.kernel.parent(cl.rep(k));
            let src = s.kernel_class_of(grp.conj(grp.inv(sec[g]), h));
            if (lifts[g] * j[src]) % e != j[k] % e {
                return Err(Error::Precondition("the character is not Γ-fixed".into()));
            }
        }
    }
    let mut exponents = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            let ab = gamma.mul(a, b);
            let h = grp.mul(grp.inv(sec[ab]), grp.mul(sec[a], sec[b]));
            if s.sigma(h) != 0 {
                return Err(Error::Internal("section cocycle leaves H".into()));
            }
            let v = (lifts[ab] * j[s.kernel_class_of(h)]) % e;
            exponents[a * m + b] = (e - v) % e;
        }
    }
    let f = TwoCocycle { modulus: e, gamma_order: m, exponents, lifts };
    if !f.verify(|a, b| gamma.mul(a, b)) {
        return Err(Error::Internal("transgression fails the cocycle identity".into()));
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassDecision {
    Trivial,
    Nontrivial,
    Undecided,
}

/// The class of a cocycle for cyclic `Γ = ⟨σ⟩`, represented by `Π_{i<n} f(σ^i, σ) ∈ K^×`
/// modulo norms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicClass {
    pub representative: String,
    /// Exponent of `ζ_e`.
    pub exponent: u64,
    pub decision: ClassDecision,
    pub reason: String,
}

pub fn cyclic_class<T: TowerInfo + ?Sized>(s: &GaloisSurjection<T>, f: &TwoCocycle, chi_order: u64) -> Result<CyclicClass> {
    let tower = &*s.tower;
    let gamma = tower.gamma();
    let gen = gamma.cyclic_generator().ok_or_else(|| Error::Unsupported("Γ is not cyclic".into()))?;
    let n = gamma.order();
    let e = f.modulus;
    let exponent = (0..n).map(|i| f.value(gamma.pow(gen, i), gen)).sum::<u64>() % e;
    let representative = format_root(e, exponent);
    let (decision, reason) = if exponent == 0 {
        (ClassDecision::Trivial, "the representative is 1".to_string())
    } else {
        match tower.kind() {
            TowerKind::Finite => (ClassDecision::Trivial, "norms are surjective for finite fields".into()),
            _ if gcd(chi_order, n as u64) == 1 => {
                (ClassDecision::Trivial, format!("ord(χ) = {chi_order} is coprime to [L:K] = {n}"))
            }
            TowerKind::Archimedean if 2 * exponent == e => {
                (ClassDecision::Nontrivial, "-1 is not a norm from C to R".into())
            }
            TowerKind::Quadratic if 2 * exponent == e => {
                let d = tower.quadratic_radicand().unwrap();
                let rep = norm_equation(d, &rat(-1))?;
                if rep.solvable {
                    (ClassDecision::Trivial, format!("-1 is a norm from Q(sqrt({d}))"))
                } else {
                    let place = rep.obstruction.map(|p| p.to_string()).unwrap_or_default();
                    (ClassDecision::Nontrivial, format!("-1 is not a norm locally at {place}"))
                }
            }
            _ => (ClassDecision::Undecided, "no norm decision procedure for this tower".into()),
        }
    };
    Ok(CyclicClass { representative, exponent, decision, reason })
}

/// Checks `T(χ1 χ2) = T(χ1) T(χ2)` on a product-closed list of Γ-fixed linear characters,
/// and that the class decisions are compatible with it.
pub fn homomorphism_check<T: TowerInfo + ?Sized>(
    s: &GaloisSurjection<T>,
    f: &CyclotomicField,
    chars: &[Vec<CyclotomicNumber>],
) -> Result<bool> {
    let cocycles: Vec<TwoCocycle> = chars.iter().map(|c| transgression(s, f, c, None)).collect::<Result<_>>()?;
    let classes: Vec<CyclicClass> = chars
        .iter()
        .zip(&cocycles)
        .map(|(c, t)| cyclic_class(s, t, character_order(f, c)))
        .collect::<Result<_>>()?;
    for (a, ca) in chars.iter().enumerate() {
        for (b, cb) in chars.iter().enumerate() {
            let prod: Vec<CyclotomicNumber> = ca.iter().zip(cb).map(|(x, y)| f.mul(x, y)).collect();
            let c = chars.iter().position(|x| *x == prod).ok_or_else(|| Error::Precondition("the list is not closed under products".into()))?;
            let e = cocycles[a].modulus;
            let additive = (0..cocycles[a].exponents.len())
                .all(|i| (cocycles[a].exponents[i] + cocycles[b].exponents[i]) % e == cocycles[c].exponents[i]);
            if !additive {
                return Ok(false);
            }
            let (da, db, dc) = (classes[a].decision, classes[b].decision, classes[c].decision);
            use ClassDecision::*;
            let consistent = match (da, db) {
                (Trivial, Trivial) => dc != Nontrivial,
                (Trivial, Nontrivial) | (Nontrivial, Trivial) => dc != Trivial,
                _ => true,
            };
            if !consistent {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::dixon;
    use crate::groups::{cyclic, Group};
    use crate::tower::QuadraticTower;
    use std::sync::Arc;

    #[test]
    fn c4_sign_character() {
        for (d, trivial) in [(2, true), (3, false), (-1, false), (5, true)] {
            let s = GaloisSurjection::from_generator_images(cyclic(4), Arc::new(QuadraticTower::new(d).unwrap()), &[1]).unwrap();
            let t = dixon(&s.kernel.group).unwrap();
            let chi = &t.rows[1];
            let f = transgression(&s, &t.field, chi, None).unwrap();
            assert_eq!(f.formatted()[1][1], "-1");
            let c = cyclic_class(&s, &f, 2).unwrap();
            assert_eq!(c.representative, "-1");
            assert_eq!(c.decision == ClassDecision::Trivial, trivial, "d = {d}");
            assert!(homomorphism_check(&s, &t.field, &t.rows).unwrap());
        }
    }

    #[test]
    fn split_extension_is_trivial() {
        let g = Group::direct_product(&cyclic(2), &cyclic(2)).unwrap();
        let s = GaloisSurjection::from_generator_images(g, Arc::new(QuadraticTower::new(3).unwrap()), &[0, 1]).unwrap();
        let sec = complement_section(&s).unwrap();
        let t = dixon(&s.kernel.group).unwrap();
        for row in &t.rows {
            assert!(transgression(&s, &t.field, row, Some(&sec)).unwrap().is_identically_one());
        }
    }
}
