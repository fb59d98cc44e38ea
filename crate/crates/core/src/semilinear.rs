//! Semilinear representations as matrix families `g ↦ A_g` over `L` with
//! `A_{g1 g2} = A_{g1} · σ_{g1}(A_{g2})`, ordinary representations of the kernel `H`,
//! hom spaces, the standard constructions, and the finite-field extension search.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::finite::{poly, FiniteFieldElement};
use crate::groups::Group;
use crate::linalg::{self, Matrix};
use crate::surjection::GaloisSurjection;
use crate::tower::{FiniteTower, GaloisTower, TowerInfo};

pub type Elem<T> = <<T as GaloisTower>::L as Field>::Elem;
pub type PElem<T> = <<T as GaloisTower>::P as Field>::Elem;
pub type Surjection<T> = Arc<GaloisSurjection<T>>;

/// Applies `γ` entrywise.
pub fn galois_matrix<T: GaloisTower>(t: &T, gamma: usize, m: &Matrix<Elem<T>>) -> Matrix<Elem<T>> {
    if gamma == 0 {
        return m.clone();
    }
    m.map(|x| t.act(gamma, x))
}

/// Flattens a matrix over `L` into `P`-coordinates.
pub(crate) fn flatten<T: GaloisTower>(t: &T, m: &Matrix<Elem<T>>) -> Vec<PElem<T>> {
    m.entries().iter().flat_map(|x| t.to_coords(x)).collect()
}

fn unflatten<T: GaloisTower>(t: &T, rows: usize, cols: usize, v: &[PElem<T>]) -> Matrix<Elem<T>> {
    let l = t.l_dim();
    Matrix::from_vec(rows, cols, v.chunks(l).map(|c| t.from_coords(c)).collect())
}

/// P-basis of `L` as elements.
pub(crate) fn prime_basis<T: GaloisTower>(t: &T) -> Vec<Elem<T>> {
    let p = t.prime();
    let l = t.l_dim();
    (0..l)
        .map(|j| {
            let mut c = vec![p.zero(); l];
            c[j] = p.one();
            t.from_coords(&c)
        })
        .collect()
}

/// Nullspace of the `P`-linear map `M ↦ Σ_g images(g, M)` on `rows × cols` matrices over `L`.
pub(crate) fn solve_p_linear<T: GaloisTower>(
    t: &T,
    rows: usize,
    cols: usize,
    conditions: usize,
    image: impl Fn(usize, &Matrix<Elem<T>>) -> Matrix<Elem<T>>,
) -> Vec<Matrix<Elem<T>>> {
    let f = t.field();
    let p = t.prime();
    let basis = prime_basis(t);
    let l = basis.len();
    let unknowns = rows * cols * l;
    let mut columns: Vec<Vec<PElem<T>>> = Vec::with_capacity(unknowns);
    for i in 0..rows {
        for j in 0..cols {
            for b in &basis {
                let mut m = linalg::zeros(f, rows, cols);
                m.set(i, j, b.clone());
                let mut col = Vec::new();
                for c in 0..conditions {
                    col.extend(flatten(t, &image(c, &m)));
                }
                columns.push(col);
            }
        }
    }
    let height = columns.first().map_or(0, |c| c.len());
    if unknowns == 0 {
        return vec![];
    }
    let a = Matrix::from_vec(height, unknowns, (0..height).flat_map(|r| columns.iter().map(move |c| c[r].clone())).collect());
    linalg::nullspace(p, &a).into_iter().map(|v| unflatten(t, rows, cols, &v)).collect()
}

/// Extracts a `K`-basis from a `P`-basis of a `K`-subspace of matrices.
pub(crate) fn k_basis_of<T: GaloisTower>(t: &T, p_basis: &[Matrix<Elem<T>>]) -> Vec<Matrix<Elem<T>>> {
    let f = t.field();
    let p = t.prime();
    let kb = t.base_basis();
    let mut span: Vec<Vec<PElem<T>>> = Vec::new();
    let mut out = Vec::new();
    for m in p_basis {
        let v = flatten(t, m);
        let mut trial = span.clone();
        trial.push(v);
        if linalg::independent_subset(p, &trial).len() == trial.len() {
            for k in &kb {
                span.push(flatten(t, &linalg::scale(f, k, m)));
            }
            let keep = linalg::independent_subset(p, &span);
            span = keep.into_iter().map(|i| span[i].clone()).collect();
            out.push(m.clone());
        }
        if span.len() == p_basis.len() {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------- linear reps of H

/// An ordinary `L`-linear representation of the kernel `H`, indexed by local elements of `H`.
#[derive(Clone, Debug)]
pub struct LinearRep<T: GaloisTower> {
    surjection: Surjection<T>,
    dim: usize,
    matrices: Vec<Matrix<Elem<T>>>,
}

impl<T: GaloisTower> LinearRep<T> {
    /// Builds the representation from images of `H`'s own generators.
    pub fn from_generators(s: Surjection<T>, dim: usize, gens: &[Matrix<Elem<T>>]) -> Result<Self> {
        let h = &s.kernel.group;
        let f = s.tower.field();
        let hg = h.generators().to_vec();
        if gens.len() != hg.len() {
            return Err(Error::InvalidInput(format!("{} matrices for {} generators of H", gens.len(), hg.len())));
        }
        for m in gens {
            check_square(m, dim)?;
            if !linalg::is_invertible(f, m) {
                return Err(Error::Singular("generator image".into()));
            }
        }
        let mut family: Vec<Option<Matrix<Elem<T>>>> = vec![None; h.order()];
        family[0] = Some(linalg::identity(f, dim));
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (gi, &g) in hg.iter().enumerate() {
                let y = h.mul(x, g);
                let m = linalg::mul(f, family[x].as_ref().unwrap(), &gens[gi]);
                match &family[y] {
                    None => {
                        family[y] = Some(m);
                        queue.push(y);
                    }
                    Some(old) if *old != m => return Err(Error::NotHomomorphism(format!("relation fails at local element {y} of H"))),
                    _ => {}
                }
            }
            i += 1;
        }
        Self::from_family(s, dim, family.into_iter().map(|m| m.unwrap()).collect())
    }

    pub fn from_family(s: Surjection<T>, dim: usize, matrices: Vec<Matrix<Elem<T>>>) -> Result<Self> {
        let h = &s.kernel.group;
        let f = s.tower.field();
        if matrices.len() != h.order() {
            return Err(Error::InvalidInput("one matrix per element of H is required".into()));
        }
        for m in &matrices {
            check_square(m, dim)?;
            for x in m.entries() {
                s.tower.check(x)?;
            }
        }
        for a in 0..h.order() {
            for b in 0..h.order() {
                if linalg::mul(f, &matrices[a], &matrices[b]) != matrices[h.mul(a, b)] {
                    return Err(Error::NotHomomorphism(format!("A_{a} A_{b} ≠ A_{}", h.mul(a, b))));
                }
            }
        }
        Ok(LinearRep { surjection: s, dim, matrices })
    }

    pub fn surjection(&self) -> &Surjection<T> {
        &self.surjection
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix of a local element of `H`.
    pub fn matrix(&self, h: usize) -> &Matrix<Elem<T>> {
        &self.matrices[h]
    }

    pub fn matrices(&self) -> &[Matrix<Elem<T>>] {
        &self.matrices
    }

    /// Traces on `H`-classes.
    pub fn character(&self) -> Vec<Elem<T>> {
        let f = self.surjection.tower.field();
        let cl = &self.surjection.kernel_classes;
        (0..cl.len()).map(|k| linalg::trace(f, &self.matrices[cl.rep(k)])).collect()
    }

    /// `L`-basis of `Hom_{L[H]}(self, other)`, matrices of shape `other.dim × self.dim`.
    pub fn intertwiners(&self, other: &LinearRep<T>) -> Vec<Matrix<Elem<T>>> {
        let f = self.surjection.tower.field();
        let h = &self.surjection.kernel.group;
        let gens = h.generators().to_vec();
        let (r, c) = (other.dim, self.dim);
        if r == 0 || c == 0 {
            return vec![];
        }
        let mut columns = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let mut m = linalg::zeros(f, r, c);
                m.set(i, j, f.one());
                let mut col = Vec::new();
                for &g in &gens {
                    let d = linalg::sub(f, &linalg::mul(f, &other.matrices[g], &m), &linalg::mul(f, &m, &self.matrices[g]));
                    col.extend(d.entries().iter().cloned());
                }
                columns.push(col);
            }
        }
        let height = columns[0].len();
        if height == 0 {
            return (0..r * c)
                .map(|u| {
                    let mut m = linalg::zeros(f, r, c);
                    m.set(u / c, u % c, f.one());
                    m
                })
                .collect();
        }
        let a = Matrix::from_vec(height, r * c, (0..height).flat_map(|x| columns.iter().map(move |col| col[x].clone())).collect());
        linalg::nullspace(f, &a).into_iter().map(|v| Matrix::from_vec(r, c, v)).collect()
    }

    /// The twist `g*W`: `B_h = σ_g(A_{g^{-1} h g})`.
    pub fn twist(&self, g: usize) -> LinearRep<T> {
        let s = &self.surjection;
        let grp = &s.group;
        let gamma = s.sigma(g);
        let matrices = (0..s.kernel.order())
            .map(|h| {
                let ph = s.kernel.parent(h);
                let conj = grp.conj(grp.inv(g), ph);
                galois_matrix(&*s.tower, gamma, &self.matrices[s.kernel.local(conj)])
            })
            .collect();
        LinearRep { surjection: s.clone(), dim: self.dim, matrices }
    }

    pub fn direct_sum(&self, other: &LinearRep<T>) -> LinearRep<T> {
        let f = self.surjection.tower.field();
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::block_diag(f, a, b)).collect();
        LinearRep { surjection: self.surjection.clone(), dim: self.dim + other.dim, matrices }
    }

    /// `⟨χ_V, χ_W⟩ = (1/|H|) Σ_h χ_V(h) χ_W(h^{-1})` in `L`.
    pub fn inner_product(&self, other: &LinearRep<T>) -> Result<Elem<T>> {
        character_inner_product(&self.surjection, &self.character(), &other.character())
    }
}

/// `(1/|H|) Σ_h a(h) b(h^{-1})` for class functions valued in `L`.
pub fn character_inner_product<T: GaloisTower>(s: &GaloisSurjection<T>, a: &[Elem<T>], b: &[Elem<T>]) -> Result<Elem<T>> {
    let f = s.tower.field();
    let h = &s.kernel.group;
    let cl = &s.kernel_classes;
    let n = f.from_int(h.order() as i64);
    let n_inv = f.inv(&n).ok_or_else(|| Error::Precondition("|H| is not invertible in L".into()))?;
    let mut acc = f.zero();
    for k in 0..cl.len() {
        let inv_k = cl.class_of[h.inv(cl.rep(k))];
        acc = f.add(&acc, &f.mul(&f.from_int(cl.size(k) as i64), &f.mul(&a[k], &b[inv_k])));
    }
    Ok(f.mul(&acc, &n_inv))
}

fn check_square<E: Clone>(m: &Matrix<E>, dim: usize) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::InvalidInput(format!("expected a {dim}×{dim} matrix, got {}×{}", m.rows(), m.cols())));
    }
    Ok(())
}

// ---------------------------------------------------------------- semilinear reps

#[derive(Clone, Debug)]
pub struct SemilinearRep<T: GaloisTower> {
    surjection: Surjection<T>,
    dim: usize,
    matrices: Vec<Matrix<Elem<T>>>,
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub struct IsoVerdict<E> {
    pub isomorphic: bool,
    /// An invertible intertwiner, when one was found by search.
    pub witness: Option<Matrix<E>>,
    pub method: &'static str,
}

impl<T: GaloisTower> SemilinearRep<T> {
    /// Completes a family from images of `G`'s generators via the cocycle relation, then
    /// verifies it on all pairs.
    pub fn from_generators(s: Surjection<T>, dim: usize, gens: &[Matrix<Elem<T>>]) -> Result<Self> {
        let g = &s.group;
        let t = &*s.tower;
        let f = t.field();
        let gg = g.generators().to_vec();
        if gens.len() != gg.len() {
            return Err(Error::InvalidInput(format!("{} matrices for {} generators", gens.len(), gg.len())));
        }
        for m in gens {
            check_square(m, dim)?;
            for x in m.entries() {
                t.check(x)?;
            }
            if !linalg::is_invertible(f, m) {
                return Err(Error::Singular("generator image is not invertible".into()));
            }
        }
        let mut family: Vec<Option<Matrix<Elem<T>>>> = vec![None; g.order()];
        family[0] = Some(linalg::identity(f, dim));
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (gi, &gen) in gg.iter().enumerate() {
                let y = g.mul(x, gen);
                let m = linalg::mul(f, family[x].as_ref().unwrap(), &galois_matrix(t, s.sigma(x), &gens[gi]));
                match &family[y] {
                    None => {
                        family[y] = Some(m);
                        queue.push(y);
                    }
                    Some(old) if *old != m => return Err(Error::CocycleFailure { g1: x, g2: gen }),
                    _ => {}
                }
            }
            i += 1;
        }
        Self::from_family(s, dim, family.into_iter().map(|m| m.unwrap()).collect())
    }

    /// Accepts a complete family and verifies the cocycle relation on all pairs.
    pub fn from_family(s: Surjection<T>, dim: usize, matrices: Vec<Matrix<Elem<T>>>) -> Result<Self> {
        if matrices.len() != s.group.order() {
            return Err(Error::InvalidInput("one matrix per group element is required".into()));
        }
        let f = s.tower.field();
        for m in &matrices {
            check_square(m, dim)?;
            for x in m.entries() {
                s.tower.check(x)?;
            }
        }
        if !linalg::is_invertible(f, &matrices[0]) || matrices.iter().any(|m| !linalg::is_invertible(f, m)) {
            return Err(Error::Singular("some A_g is not invertible".into()));
        }
        let rep = SemilinearRep { surjection: s, dim, matrices };
        if let Some((g1, g2)) = rep.verify_cocycle() {
            return Err(Error::CocycleFailure { g1, g2 });
        }
        Ok(rep)
    }

    /// Wraps a family without checks; used by constructions that preserve the relation.
    fn unchecked(s: Surjection<T>, dim: usize, matrices: Vec<Matrix<Elem<T>>>) -> Self {
        let rep = SemilinearRep { surjection: s, dim, matrices };
        debug_assert!(rep.verify_cocycle().is_none());
        rep
    }

    pub fn trivial(s: Surjection<T>) -> Self {
        let f = s.tower.field();
        let matrices = vec![linalg::identity(f, 1); s.group.order()];
        SemilinearRep { surjection: s, dim: 1, matrices }
    }

    /// `L ⊗_K U` for a representation `G → GL_n(K)` given on generators.
    pub fn from_base_rep(s: Surjection<T>, dim: usize, gens: &[Matrix<Elem<T>>]) -> Result<Self> {
        if gens.iter().any(|m| m.entries().iter().any(|x| !s.tower.is_in_base(x))) {
            return Err(Error::InvalidInput("matrix entries must lie in K".into()));
        }
        Self::from_generators(s, dim, gens)
    }

    pub fn surjection(&self) -> &Surjection<T> {
        &self.surjection
    }

    pub fn tower(&self) -> &T {
        &self.surjection.tower
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix<Elem<T>> {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix<Elem<T>>] {
        &self.matrices
    }

    /// First pair `(g1, g2)` violating `A_{g1g2} = A_{g1} σ_{g1}(A_{g2})`, if any.
    pub fn verify_cocycle(&self) -> Option<(usize, usize)> {
        let s = &self.surjection;
        let g = &s.group;
        let t = &*s.tower;
        let f = t.field();
        if self.matrices[0] != linalg::identity(f, self.dim) {
            return Some((0, 0));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let rhs = linalg::mul(f, &self.matrices[a], &galois_matrix(t, s.sigma(a), &self.matrices[b]));
                if rhs != self.matrices[g.mul(a, b)] {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn restrict(&self) -> LinearRep<T> {
        let s = &self.surjection;
        let matrices = (0..s.kernel.order()).map(|h| self.matrices[s.kernel.parent(h)].clone()).collect();
        LinearRep { surjection: s.clone(), dim: self.dim, matrices }
    }

    /// `χ_V := χ_{V|_H}` on `H`-classes.
    pub fn character(&self) -> Vec<Elem<T>> {
        self.restrict().character()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let f = self.tower().field();
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::block_diag(f, a, b)).collect();
        Self::unchecked(self.surjection.clone(), self.dim + other.dim, matrices)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let f = self.tower().field();
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::kronecker(f, a, b)).collect();
        Self::unchecked(self.surjection.clone(), self.dim * other.dim, matrices)
    }

    /// `(A_g^{-1})^T`.
    pub fn dual(&self) -> Self {
        let f = self.tower().field();
        let matrices = self.matrices.iter().map(|a| linalg::inverse(f, a).unwrap().transpose()).collect();
        Self::unchecked(self.surjection.clone(), self.dim, matrices)
    }

    /// `B_g = P A_g σ_g(P^{-1})`.
    pub fn change_basis(&self, p: &Matrix<Elem<T>>) -> Result<Self> {
        let t = self.tower();
        let f = t.field();
        check_square(p, self.dim)?;
        let pinv = linalg::inverse(f, p).ok_or_else(|| Error::Singular("change of basis".into()))?;
        let matrices = (0..self.matrices.len())
            .map(|g| {
                let tw = galois_matrix(t, self.surjection.sigma(g), &pinv);
                linalg::mul(f, &linalg::mul(f, p, &self.matrices[g]), &tw)
            })
            .collect();
        Ok(Self::unchecked(self.surjection.clone(), self.dim, matrices))
    }

    /// `P`-basis of `Hom_{L⋊G}(self, other)`: matrices `M` with `B_g σ_g(M) = M A_g`.
    fn hom_p_basis(&self, other: &Self) -> Vec<Matrix<Elem<T>>> {
        let s = &self.surjection;
        let t = &*s.tower;
        let f = t.field();
        let gens = s.group.generators().to_vec();
        solve_p_linear(t, other.dim, self.dim, gens.len(), |c, m| {
            let g = gens[c];
            let lhs = linalg::mul(f, &other.matrices[g], &galois_matrix(t, s.sigma(g), m));
            linalg::sub(f, &lhs, &linalg::mul(f, m, &self.matrices[g]))
        })
    }

    /// A `K`-basis of `Hom_{L⋊G}(self, other)`.
    pub fn hom_space(&self, other: &Self) -> HomSpace<Elem<T>> {
        let p_basis = self.hom_p_basis(other);
        let basis = k_basis_of(self.tower(), &p_basis);
        HomSpace { rows: other.dim, cols: self.dim, basis }
    }

    /// Tries single basis elements, then small integer combinations, then a complete
    /// criterion: restricted characters in characteristic 0, hom dimensions otherwise.
    pub fn is_isomorphic(&self, other: &Self) -> Result<IsoVerdict<Elem<T>>> {
        if self.dim != other.dim {
            return Ok(IsoVerdict { isomorphic: false, witness: None, method: "dimension" });
        }
        let t = self.tower();
        let f = t.field();
        let hom = self.hom_space(other);
        for b in &hom.basis {
            if linalg::is_invertible(f, b) {
                return Ok(IsoVerdict { isomorphic: true, witness: Some(b.clone()), method: "basis element" });
            }
        }
        let k = hom.basis.len();
        if k > 1 {
            let coeffs: Vec<i64> = vec![1, -1, 2, -2, 3, -3, 0];
            let mut tried = 0usize;
            let mut idx = vec![0usize; k];
            'outer: loop {
                if tried >= 4096 {
                    break;
                }
                let mut m = linalg::zeros(f, other.dim, self.dim);
                for (j, b) in hom.basis.iter().enumerate() {
                    let c = coeffs[idx[j]];
                    if c != 0 {
                        m = linalg::add(f, &m, &linalg::scale(f, &f.from_int(c), b));
                    }
                }
                tried += 1;
                if linalg::is_invertible(f, &m) {
                    return Ok(IsoVerdict { isomorphic: true, witness: Some(m), method: "integer combination" });
                }
                for j in 0..k {
                    idx[j] += 1;
                    if idx[j] < coeffs.len() {
                        continue 'outer;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
        let order = self.surjection.group.order() as u64;
        let ch = t.characteristic();
        if ch == 0 {
            let iso = self.character() == other.character();
            return Ok(IsoVerdict { isomorphic: iso, witness: None, method: "character" });
        }
        if order % ch == 0 {
            return Err(Error::Precondition("characteristic divides |G|; isomorphism undecided".into()));
        }
        let a = self.hom_space(self).dim();
        let b = other.hom_space(other).dim();
        let iso = a == k && b == k;
        Ok(IsoVerdict { isomorphic: iso, witness: None, method: "hom dimensions" })
    }

    /// `Ind_H^G W`: block `(k, i)` of `A_g` is `σ_{g_k}(W_h)` where `g g_i = g_k h`.
    pub fn induce(w: &LinearRep<T>) -> Self {
        let s = w.surjection.clone();
        let t = &*s.tower;
        let f = t.field();
        let grp = &s.group;
        let gamma = t.gamma();
        let m = s.gamma_order();
        let d = w.dim;
        let n = m * d;
        let matrices = (0..grp.order())
            .map(|g| {
                let mut a = linalg::zeros(f, n, n);
                for i in 0..m {
                    let k = gamma.mul(s.sigma(g), i);
                    let gk = s.section(k);
                    let h = grp.mul(grp.inv(gk), grp.mul(g, s.section(i)));
                    let block = galois_matrix(t, k, &w.matrices[s.kernel.local(h)]);
                    for r in 0..d {
                        for c in 0..d {
                            a.set(k * d + r, i * d + c, block.get(r, c).clone());
                        }
                    }
                }
                a
            })
            .collect();
        Self::unchecked(s, n, matrices)
    }

    /// `dim_K End_{L⋊G}(V)`.
    pub fn endomorphism_dimension(&self) -> usize {
        self.hom_space(self).dim()
    }
}

/// A `K`-basis of intertwiners.
#[derive(Clone, Debug, Serialize)]
pub struct HomSpace<E> {
    pub rows: usize,
    pub cols: usize,
    pub basis: Vec<Matrix<E>>,
}

impl<E> HomSpace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

// ---------------------------------------------------------------- finite fields

/// Result of an exhaustive extension search.
#[derive(Clone, Debug)]
pub enum ExtensionSearch {
    Found { rep: SemilinearRep<FiniteTower>, candidates: u128 },
    Exhausted { candidates: u128 },
}

impl ExtensionSearch {
    pub fn found(&self) -> Option<&SemilinearRep<FiniteTower>> {
        match self {
            ExtensionSearch::Found { rep, .. } => Some(rep),
            ExtensionSearch::Exhausted { .. } => None,
        }
    }

    pub fn candidates(&self) -> u128 {
        match self {
            ExtensionSearch::Found { candidates, .. } | ExtensionSearch::Exhausted { candidates } => *candidates,
        }
    }
}

/// Completes `W` from `A_h` and `X = A_y`, where `σ(y)` generates `Γ`.
fn complete_from_generator(
    w: &LinearRep<FiniteTower>,
    y: usize,
    frob: usize,
    x: &Matrix<FiniteFieldElement>,
) -> Option<Vec<Matrix<FiniteFieldElement>>> {
    let s = &w.surjection;
    let t = &*s.tower;
    let f = t.field();
    let grp = &s.group;
    let gamma = t.gamma();
    let k = gamma.order();
    let mut powers = vec![linalg::identity(f, w.dim)];
    let mut yi = vec![0usize];
    for i in 1..=k {
        let prev = &powers[i - 1];
        powers.push(linalg::mul(f, prev, &galois_matrix(t, gamma.pow(frob, i - 1), x)));
        yi.push(grp.mul(yi[i - 1], y));
    }
    // y^k ∈ H
    if powers[k] != w.matrices[s.kernel.local(yi[k])] {
        return None;
    }
    let mut family = vec![None; grp.order()];
    for i in 0..k {
        let g_i = gamma.pow(frob, i);
        for h in 0..s.kernel.order() {
            let g = grp.mul(yi[i], s.kernel.parent(h));
            family[g] = Some(linalg::mul(f, &powers[i], &galois_matrix(t, g_i, &w.matrices[h])));
        }
    }
    family.into_iter().collect()
}

/// Searches for `X = A_y` extending `W` to `G`, lexicographically over entries in the field's
/// element order; switches to enumerating the `F_p`-solution space of the linear conjugation
/// condition when the naive space exceeds the budget.
pub fn extension_search_finite(w: &LinearRep<FiniteTower>, budget: u64) -> Result<ExtensionSearch> {
    let s = w.surjection.clone();
    let t = &*s.tower;
    let f = t.field();
    let p = t.prime();
    let grp = &s.group;
    let gamma = t.gamma();
    let n = w.dim;
    if gamma.order() == 1 {
        let rep = SemilinearRep::from_family(s.clone(), n, w.matrices.clone())?;
        return Ok(ExtensionSearch::Found { rep, candidates: 0 });
    }
    let frob = gamma.cyclic_generator().ok_or_else(|| Error::Internal("Frobenius does not generate Γ".into()))?;
    let y = s.section(frob);
    let hgens: Vec<usize> = s.kernel.group.generators().iter().map(|&h| s.kernel.parent(h)).collect();
    let conj_ok = |x: &Matrix<FiniteFieldElement>| {
        hgens.iter().all(|&h| {
            let lhs = linalg::mul(f, x, &galois_matrix(t, frob, &w.matrices[s.kernel.local(h)]));
            let rhs = linalg::mul(f, &w.matrices[s.kernel.local(grp.conj(y, h))], x);
            lhs == rhs
        })
    };
    let accept = |x: &Matrix<FiniteFieldElement>| -> Option<SemilinearRep<FiniteTower>> {
        if !linalg::is_invertible(f, x) {
            return None;
        }
        let fam = complete_from_generator(w, y, frob, x)?;
        SemilinearRep::from_family(s.clone(), n, fam).ok()
    };
    let q = f.order() as u128;
    let naive = q.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if naive <= budget as u128 {
        let mut tried = 0u128;
        for idx in 0..naive {
            tried += 1;
            let mut rest = idx;
            let mut entries = vec![f.zero(); n * n];
            for e in entries.iter_mut().rev() {
                *e = f.element_from_index((rest % q) as u64);
                rest /= q;
            }
            let x = Matrix::from_vec(n, n, entries);
            if conj_ok(&x) {
                if let Some(rep) = accept(&x) {
                    return Ok(ExtensionSearch::Found { rep, candidates: tried });
                }
            }
        }
        return Ok(ExtensionSearch::Exhausted { candidates: tried });
    }
    let solutions = solve_p_linear(t, n, n, hgens.len(), |c, x| {
        let h = hgens[c];
        let lhs = linalg::mul(f, x, &galois_matrix(t, frob, &w.matrices[s.kernel.local(h)]));
        linalg::sub(f, &lhs, &linalg::mul(f, &w.matrices[s.kernel.local(grp.conj(y, h))], x))
    });
    let dim = solutions.len() as u32;
    let pp = p.p() as u128;
    let space = pp.checked_pow(dim).unwrap_or(u128::MAX);
    if space > budget as u128 {
        return Err(Error::Budget { needed: space.min(naive), budget });
    }
    let mut tried = 0u128;
    for idx in 0..space {
        tried += 1;
        let mut rest = idx;
        let mut x = linalg::zeros(f, n, n);
        for b in solutions.iter().rev() {
            let c = (rest % pp) as u64;
            rest /= pp;
            if c != 0 {
                x = linalg::add(f, &x, &linalg::scale(f, &f.from_int(c as i64), b));
            }
        }
        if let Some(rep) = accept(&x) {
            return Ok(ExtensionSearch::Found { rep, candidates: tried });
        }
    }
    Ok(ExtensionSearch::Exhausted { candidates: tried })
}

/// Irreducible `L`-representations of an abelian kernel `H` over a finite field: companion
/// matrices of the irreducible factors of `X^c - 1` when `H` is cyclic of order `c`, and
/// characters into `L^×` when `H` splits over `L`.
pub fn finite_linear_irreps(s: &Surjection<FiniteTower>) -> Result<Vec<LinearRep<FiniteTower>>> {
    let t = &*s.tower;
    let f = t.field();
    let h: &Group = &s.kernel.group;
    let c = h.order();
    if c as u64 % t.p() == 0 {
        return Err(Error::Precondition("the characteristic divides |H|".into()));
    }
    if h.is_cyclic() {
        let gen = (0..c).find(|&x| h.element_order(x) == c).unwrap();
        let mut target = vec![f.zero(); c + 1];
        target[0] = f.neg(&f.one());
        target[c] = f.one();
        let mut factors: Vec<Vec<FiniteFieldElement>> = Vec::new();
        let mut covered = 0;
        let q = f.order();
        for d in 1..=c {
            if covered == c {
                break;
            }
            for idx in 0..q.pow(d as u32) {
                let mut poly_c: Vec<FiniteFieldElement> = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    poly_c.push(f.element_from_index(rest % q));
                    rest /= q;
                }
                poly_c.push(f.one());
                if !poly::is_zero(f, &poly::divmod(f, &target, &poly_c).1) {
                    continue;
                }
                if factors.iter().any(|g| g.len() < poly_c.len() && poly::is_zero(f, &poly::divmod(f, &poly_c, g).1)) {
                    continue;
                }
                covered += d;
                factors.push(poly_c);
            }
        }
        if covered != c {
            return Err(Error::Internal("factorisation of X^c - 1 is incomplete".into()));
        }
        let mut out = Vec::new();
        for fac in factors {
            let d = fac.len() - 1;
            let mut comp = linalg::zeros(f, d, d);
            for i in 1..d {
                comp.set(i, i - 1, f.one());
            }
            for i in 0..d {
                comp.set(i, d - 1, f.neg(&fac[i]));
            }
            let mut mats = vec![linalg::identity(f, d); c];
            let mut cur = linalg::identity(f, d);
            let mut x = 0;
            for _ in 0..c {
                mats[x] = cur.clone();
                cur = linalg::mul(f, &cur, &comp);
                x = h.mul(x, gen);
            }
            out.push(LinearRep::from_family(s.clone(), d, mats)?);
        }
        return Ok(out);
    }
    if !h.is_abelian() || (f.order() - 1) % h.exponent() != 0 {
        return Err(Error::Unsupported("only cyclic or split abelian kernels over finite fields".into()));
    }
    let gens = h.generators().to_vec();
    let roots = f.roots_of_unity(h.exponent());
    let mut out: Vec<LinearRep<FiniteTower>> = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let mats: Vec<Matrix<FiniteFieldElement>> = idx.iter().map(|&i| Matrix::from_vec(1, 1, vec![roots[i].clone()])).collect();
        if let Ok(rep) = LinearRep::from_generators(s.clone(), 1, &mats) {
            if !out.iter().any(|r| r.matrices == rep.matrices) {
                out.push(rep);
            }
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < roots.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}
