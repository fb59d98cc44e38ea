//! Surjections `σ: G → Γ`, their kernels `H`, coset sections and the induced
//! action of `Γ × Γ` on conjugacy classes of `H`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{ConjugacyClasses, Group, Subgroup};
use crate::tower::TowerInfo;

#[derive(Clone, Debug)]
pub struct GaloisSurjection<T: ?Sized> {
    pub group: Group,
    pub tower: Arc<T>,
    sigma: Vec<usize>,
    pub kernel: Subgroup,
    /// Classes of `H` under `H`-conjugation, in local indices.
    pub kernel_classes: ConjugacyClasses,
    section: Vec<usize>,
    /// `h(γ1, γ2) = g_{γ1γ2}^{-1} g_{γ1} g_{γ2}` as parent indices.
    cocycle: Vec<usize>,
}

impl<T: TowerInfo + ?Sized> GaloisSurjection<T> {
    /// Extends images of the group's generators multiplicatively and validates the result.
    pub fn from_generator_images(group: Group, tower: Arc<T>, images: &[usize]) -> Result<Self> {
        let gens = group.generators().to_vec();
        if images.len() != gens.len() {
            return Err(Error::InvalidInput(format!(
                "{} sigma images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let gamma = tower.gamma();
        if let Some(&bad) = images.iter().find(|&&x| x >= gamma.order()) {
            return Err(Error::InvalidInput(format!("sigma image {bad} is not an element of Gal(L/K)")));
        }
        let mut sigma = vec![usize::MAX; group.order()];
        sigma[0] = 0;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (gi, &s) in gens.iter().enumerate() {
                let y = group.mul(x, s);
                let v = gamma.mul(sigma[x], images[gi]);
                if sigma[y] == usize::MAX {
                    sigma[y] = v;
                    queue.push(y);
                } else if sigma[y] != v {
                    return Err(Error::NotHomomorphism(format!("generator images are inconsistent at element {y}")));
                }
            }
            i += 1;
        }
        Self::from_element_map(group, tower, sigma)
    }

    pub fn from_element_map(group: Group, tower: Arc<T>, sigma: Vec<usize>) -> Result<Self> {
        let gamma = tower.gamma().clone();
        if sigma.len() != group.order() || sigma.iter().any(|&s| s >= gamma.order()) {
            return Err(Error::InvalidInput("sigma must map every element into Gal(L/K)".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if sigma[group.mul(a, b)] != gamma.mul(sigma[a], sigma[b]) {
                    return Err(Error::NotHomomorphism(format!("σ({a}·{b}) ≠ σ({a})σ({b})")));
                }
            }
        }
        let mut section = vec![usize::MAX; gamma.order()];
        for (g, &s) in sigma.iter().enumerate() {
            if section[s] == usize::MAX {
                section[s] = g;
            }
        }
        if section.contains(&usize::MAX) {
            return Err(Error::InvalidInput("sigma is not surjective".into()));
        }
        let kernel_elems: Vec<usize> = (0..group.order()).filter(|&g| sigma[g] == 0).collect();
        let kernel = group.subgroup(&kernel_elems)?;
        let kernel_classes = kernel.group.conjugacy_classes();
        let m = gamma.order();
        let mut cocycle = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                let ab = gamma.mul(a, b);
                cocycle[a * m + b] = group.mul(group.inv(section[ab]), group.mul(section[a], section[b]));
            }
        }
        Ok(GaloisSurjection { group, tower, sigma, kernel, kernel_classes, section, cocycle })
    }

    pub fn sigma(&self, g: usize) -> usize {
        self.sigma[g]
    }

    pub fn sigma_map(&self) -> &[usize] {
        &self.sigma
    }

    pub fn gamma_order(&self) -> usize {
        self.section.len()
    }

    /// The least element `g_γ` of the coset mapping to `γ`.
    pub fn section(&self, gamma: usize) -> usize {
        self.section[gamma]
    }

    /// `h(γ1, γ2)` as a parent index (an element of `H`).
    pub fn section_cocycle(&self, a: usize, b: usize) -> usize {
        self.cocycle[a * self.gamma_order() + b]
    }

    /// Verifies `h(γ1,γ2γ3) h(γ2,γ3) = h(γ1γ2,γ3) (g_{γ3}^{-1} h(γ1,γ2) g_{γ3})`.
    pub fn check_section_cocycle(&self) -> bool {
        let gamma = self.tower.gamma();
        let g = &self.group;
        let m = self.gamma_order();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let lhs = g.mul(self.section_cocycle(a, gamma.mul(b, c)), self.section_cocycle(b, c));
                    let twisted = g.conj(g.inv(self.section(c)), self.section_cocycle(a, b));
                    let rhs = g.mul(self.section_cocycle(gamma.mul(a, b), c), twisted);
                    if lhs != rhs || !self.kernel.contains(lhs) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `H`-class (local class index) of a parent element of `H`.
    pub fn kernel_class_of(&self, h: usize) -> usize {
        self.kernel_classes.class_of[self.kernel.local(h)]
    }

    /// The action of `Γ × Γ` on `H`-classes,
    /// `(γ1, γ2)·[h] = [g_{γ1} h^{ε(γ2^{-1})} g_{γ1}^{-1}]`, where `ε(γ)` is the exponent by
    /// which `γ` acts on `μ_n ⊆ L`. Requires `exp(H) | n` and `L = K(μ_n)`.
    pub fn two_sided_class_action(&self, n: Option<u64>) -> Result<ClassAction> {
        let tower = &*self.tower;
        let exp_h = self.kernel.group.exponent();
        let n = match n {
            Some(n) => n,
            None => default_conductor(tower, exp_h),
        };
        if n == 0 || n % exp_h != 0 {
            return Err(Error::Precondition(format!("exp(H) = {exp_h} does not divide the conductor {n}")));
        }
        let epsilon = tower
            .roots_of_unity_action(n)
            .ok_or_else(|| Error::Precondition(format!("L does not contain the {n}-th roots of unity")))?;
        let mut distinct = epsilon.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != epsilon.len() {
            return Err(Error::Precondition(format!("L is not generated over K by the {n}-th roots of unity")));
        }
        let gamma = tower.gamma();
        let m = gamma.order();
        let g = &self.group;
        let nc = self.kernel_classes.len();
        let mut perms = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let e = epsilon[gamma.inv(b)] as i64;
                let perm: Vec<usize> = (0..nc)
                    .map(|k| {
                        let h = self.kernel.parent(self.kernel_classes.rep(k));
                        let x = g.conj(self.section(a), g.pow(h, e));
                        self.kernel_class_of(x)
                    })
                    .collect();
                perms.push(perm);
            }
        }
        let diagonal: Vec<Vec<usize>> = (0..m).map(|a| perms[a * m + a].clone()).collect();
        let orbits = orbits_of(nc, &diagonal);
        let product_orbits = orbits_of(nc, &perms);
        Ok(ClassAction { conductor: n, epsilon, perms, orbits, product_orbits })
    }
}

/// The conductor used when none is given: the number of roots of unity in `L`
/// (or a multiple of `exp(H)` for the archimedean tower).
pub fn default_conductor<T: TowerInfo + ?Sized>(tower: &T, exp_h: u64) -> u64 {
    match tower.roots_of_unity_count() {
        Some(w) => w,
        None => {
            if exp_h <= 2 {
                4
            } else {
                exp_h
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassAction {
    pub conductor: u64,
    pub epsilon: Vec<u64>,
    /// `perms[γ1·|Γ| + γ2]` is the induced permutation of `H`-classes.
    pub perms: Vec<Vec<usize>>,
    /// Orbits of the diagonal copy of `Γ`.
    pub orbits: Vec<Vec<usize>>,
    /// Orbits of the full `Γ × Γ`.
    pub product_orbits: Vec<Vec<usize>>,
}

/// Orbits of the group generated by the given permutations, each sorted, ordered by least element.
pub fn orbits_of(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for p in perms {
                let y = p[orbit[i]];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}
