//! The skew group ring `L ⋊ G` with `g λ = σ_g(λ) g`, and its Wedderburn profile read
//! off from a list of simple modules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::semilinear::{flatten, k_basis_of, prime_basis, solve_p_linear, Elem, SemilinearRep, Surjection};
use crate::tower::GaloisTower;

/// Elements are coefficient vectors indexed by `G`: `x = Σ_g x_g g`.
pub struct SkewGroupRing<T: GaloisTower> {
    s: Surjection<T>,
}

impl<T: GaloisTower> SkewGroupRing<T> {
    pub fn new(s: Surjection<T>) -> Self {
        SkewGroupRing { s }
    }

    /// `dim_K (L ⋊ G) = [L:K]·|G|`.
    pub fn dim_k(&self) -> usize {
        self.s.tower.degree() * self.s.group.order()
    }

    pub fn zero(&self) -> Vec<Elem<T>> {
        vec![self.s.tower.field().zero(); self.s.group.order()]
    }

    /// `λ·g`.
    pub fn monomial(&self, lambda: Elem<T>, g: usize) -> Vec<Elem<T>> {
        let mut x = self.zero();
        x[g] = lambda;
        x
    }

    pub fn add(&self, x: &[Elem<T>], y: &[Elem<T>]) -> Vec<Elem<T>> {
        let f = self.s.tower.field();
        x.iter().zip(y).map(|(a, b)| f.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[Elem<T>], y: &[Elem<T>]) -> Vec<Elem<T>> {
        let f = self.s.tower.field();
        x.iter().zip(y).map(|(a, b)| f.sub(a, b)).collect()
    }

    /// `(λ g)(μ h) = λ σ_g(μ) gh`.
    pub fn multiply(&self, x: &[Elem<T>], y: &[Elem<T>]) -> Vec<Elem<T>> {
        let t = &*self.s.tower;
        let f = t.field();
        let grp = &self.s.group;
        let mut out = self.zero();
        for (g, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            let sg = self.s.sigma(g);
            for (h, b) in y.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let gh = grp.mul(g, h);
                out[gh] = f.add(&out[gh], &f.mul(a, &t.act(sg, b)));
            }
        }
        out
    }

    /// `λ_i g` over a `K`-basis `λ_i` of `L`.
    pub fn k_basis(&self) -> Vec<Vec<Elem<T>>> {
        let t = &*self.s.tower;
        let singles: Vec<Matrix<Elem<T>>> = prime_basis(t).into_iter().map(|b| Matrix::from_vec(1, 1, vec![b])).collect();
        let lk: Vec<Elem<T>> = k_basis_of(t, &singles).into_iter().map(|m| m.get(0, 0).clone()).collect();
        (0..self.s.group.order()).flat_map(|g| lk.iter().map(move |l| (l.clone(), g))).map(|(l, g)| self.monomial(l, g)).collect()
    }

    /// Checks `(xy)z = x(yz)` on all basis triples; refuses rings of `K`-dimension above 48.
    pub fn check_associativity(&self) -> Result<bool> {
        if self.dim_k() > 48 {
            return Err(Error::Budget { needed: (self.dim_k() as u128).pow(3), budget: 48u64.pow(3) });
        }
        let b = self.k_basis();
        for x in &b {
            for y in &b {
                let xy = self.multiply(x, y);
                for z in &b {
                    if self.multiply(&xy, z) != self.multiply(x, &self.multiply(y, z)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn as_row(&self, x: Vec<Elem<T>>) -> Matrix<Elem<T>> {
        Matrix::from_vec(1, x.len(), x)
    }

    /// `dim_K Z(L ⋊ G)`, from the `P`-linear conditions `[x, λ] = [x, g] = 0`.
    pub fn center_dimension(&self) -> usize {
        let t = &*self.s.tower;
        let one = t.field().one();
        let mut probes: Vec<Vec<Elem<T>>> = prime_basis(t).into_iter().map(|l| self.monomial(l, 0)).collect();
        probes.extend(self.s.group.generators().iter().map(|&g| self.monomial(one.clone(), g)));
        let n = self.s.group.order();
        let sol = solve_p_linear(t, 1, n, probes.len(), |c, m| {
            let x = m.entries();
            let b = &probes[c];
            self.as_row(self.sub(&self.multiply(x, b), &self.multiply(b, x)))
        });
        sol.len() / t.k_dim()
    }

    /// `dim_K` of the `K`-span of the given elements.
    pub fn span_dimension(&self, xs: &[Vec<Elem<T>>]) -> usize {
        let t = &*self.s.tower;
        let vs: Vec<Vec<_>> = xs.iter().map(|x| flatten(t, &self.as_row(x.clone()))).collect();
        linalg::independent_subset(t.prime(), &vs).len() / t.k_dim()
    }
}

/// For `H = 1`: `e = |G|^{-1} Σ_g g` is an idempotent with `e (L ⋊ G) e = K e`, the
/// computational form of Galois descent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentCheck {
    pub idempotent: bool,
    pub corner_dimension: usize,
    pub center_dimension: usize,
}

pub fn galois_descent<T: GaloisTower>(s: Surjection<T>) -> Result<DescentCheck> {
    if s.kernel.order() != 1 {
        return Err(Error::Precondition("descent check needs G = Γ".into()));
    }
    let f = s.tower.field();
    let n = s.group.order();
    let c = f.inv(&f.from_int(n as i64)).ok_or_else(|| Error::Precondition("|G| is zero in L".into()))?;
    let ring = SkewGroupRing::new(s);
    let e = vec![c; n];
    let idempotent = ring.multiply(&e, &e) == e;
    let corner: Vec<Vec<_>> = ring.k_basis().iter().map(|b| ring.multiply(&ring.multiply(&e, b), &e)).collect();
    Ok(DescentCheck { idempotent, corner_dimension: ring.span_dimension(&corner), center_dimension: ring.center_dimension() })
}

/// One simple factor `M_n(D)` with `d = dim_K D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedderburnFactor {
    pub n: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedderburnProfile {
    pub factors: Vec<WedderburnFactor>,
    /// `Σ n² d`.
    pub total: usize,
    /// `[L:K]·|G|`.
    pub expected: usize,
}

impl WedderburnProfile {
    pub fn is_complete(&self) -> bool {
        self.total == self.expected
    }
}

/// Reads the factors off pairwise non-isomorphic simple modules: `d = dim_K End(V)` and
/// `n d = dim_K V = [L:K] dim_L V`.
pub fn wedderburn_profile<T: GaloisTower>(reps: &[SemilinearRep<T>], expect_complete: bool) -> Result<WedderburnProfile> {
    let first = reps.first().ok_or_else(|| Error::InvalidInput("no modules given".into()))?;
    let s = first.surjection();
    let lk = s.tower.degree();
    let mut factors = Vec::new();
    for (i, v) in reps.iter().enumerate() {
        for w in &reps[..i] {
            if w.is_isomorphic(v)?.isomorphic {
                return Err(Error::InvalidInput(format!("module {i} repeats an earlier one")));
            }
        }
        let d = v.endomorphism_dimension();
        let kd = lk * v.dim();
        if d == 0 || kd % d != 0 {
            return Err(Error::Inconsistent(format!("dim_K End = {d} does not divide dim_K V = {kd}")));
        }
        factors.push(WedderburnFactor { n: kd / d, d });
    }
    let total = factors.iter().map(|f| f.n * f.n * f.d).sum();
    let profile = WedderburnProfile { factors, total, expected: lk * s.group.order() };
    if expect_complete && !profile.is_complete() {
        return Err(Error::Inconsistent(format!("Σ n²d = {} but dim_K (L ⋊ G) = {}", profile.total, profile.expected)));
    }
    Ok(profile)
}
