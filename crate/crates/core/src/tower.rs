//! Galois towers `L/K` with a finite Galois group `Γ = Gal(L/K)`.
//!
//! Every tower also fixes a prime field `P ⊆ K`; dimensions over `K` are computed
//! as `P`-dimensions divided by `[K:P]`.

use std::fmt::Debug;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{units_mod, CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::field::{gcd, lcm, pow_mod, Field, PrimeField, Rational, Rationals};
use crate::finite::{FiniteField, FiniteFieldElement};
use crate::linalg::{self, Matrix};
use crate::local_global::kronecker_symbol;
use crate::quadratic::{QuadraticField, QuadraticNumber};

/// A finite group given by its Cayley table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl GaloisGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        debug_assert!(table.iter().enumerate().all(|(i, r)| r[0] == i));
        GaloisGroup { labels, table }
    }

    pub fn trivial() -> Self {
        GaloisGroup::new(vec!["id".into()], vec![vec![0]])
    }

    pub fn cyclic(labels: Vec<String>) -> Self {
        let n = labels.len();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GaloisGroup::new(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group inverse")
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A generator if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let x = self.mul(elems[i], g);
                if !elems.contains(&x) {
                    elems.push(x);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerKind {
    Quadratic,
    Cyclotomic,
    Finite,
    Archimedean,
}

/// How `Γ` acts on characters with values in `Q(ζ_e)`.
///
/// `fused` is the image of `Gal(L(ζ_e)/L)` in `(Z/e)^×`: characters in one orbit of
/// `fused` combine into a single `L`-row. `lifts[γ]` is an exponent `t` such that some
/// extension of `γ` to `L(ζ_e)` acts as `ζ_e ↦ ζ_e^t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterAction {
    pub e: u64,
    pub fused: Vec<u64>,
    pub lifts: Vec<u64>,
}

/// The part of a tower that does not depend on the element types.
pub trait TowerInfo: Debug + Send + Sync {
    fn kind(&self) -> TowerKind;
    fn gamma(&self) -> &GaloisGroup;
    fn characteristic(&self) -> u64;
    fn character_action(&self, e: u64) -> Result<CharacterAction>;
    /// Exponents by which each `γ` acts on `μ_m`, when `μ_m ⊆ L`.
    fn roots_of_unity_action(&self, m: u64) -> Option<Vec<u64>>;
    /// Number of roots of unity in `L` (`None` when infinite).
    fn roots_of_unity_count(&self) -> Option<u64>;
    fn describe(&self) -> String;
    fn spec(&self) -> TowerSpec;

    /// `[L:K]`.
    fn degree(&self) -> usize {
        self.gamma().order()
    }
    fn quadratic_radicand(&self) -> Option<i64> {
        None
    }
    /// `|L|` for finite towers.
    fn finite_order(&self) -> Option<u64> {
        None
    }
    /// True when `K` is the prime field.
    fn base_is_prime(&self) -> bool;
}

/// A tower with concrete field arithmetic.
pub trait GaloisTower: TowerInfo {
    type P: Field;
    type L: Field;

    fn prime(&self) -> &Self::P;
    fn field(&self) -> &Self::L;
    /// `γ(x)` without membership checks.
    fn act(&self, g: usize, x: &<Self::L as Field>::Elem) -> <Self::L as Field>::Elem;
    /// `[L:P]`.
    fn l_dim(&self) -> usize;
    fn to_coords(&self, x: &<Self::L as Field>::Elem) -> Vec<<Self::P as Field>::Elem>;
    fn from_coords(&self, c: &[<Self::P as Field>::Elem]) -> <Self::L as Field>::Elem;
    fn embed_prime(&self, c: &<Self::P as Field>::Elem) -> <Self::L as Field>::Elem;
    fn check(&self, x: &<Self::L as Field>::Elem) -> Result<()>;
    fn parse_element(&self, s: &str) -> Result<<Self::L as Field>::Elem>;
    fn format_element(&self, x: &<Self::L as Field>::Elem) -> String;
    /// A primitive `m`-th root of unity in `L`.
    fn root_of_unity(&self, m: u64) -> Option<<Self::L as Field>::Elem>;
    /// Image of a cyclotomic number in `L`, if it lies there (characteristic 0 only).
    fn from_cyclotomic(&self, x: &CyclotomicNumber) -> Option<<Self::L as Field>::Elem>;
    /// Image of an element of `L` in `Q(ζ_N)` (characteristic 0 only).
    fn to_cyclotomic(&self, x: &<Self::L as Field>::Elem, big: &CyclotomicField) -> Option<CyclotomicNumber>;
    /// A conductor `N` with `L ⊆ Q(ζ_N)`, characteristic 0 only.
    fn embedding_conductor(&self) -> Option<u64>;

    /// `[K:P]`.
    fn k_dim(&self) -> usize {
        self.l_dim() / self.degree()
    }

    /// Checked application of `γ`.
    fn galois_apply(&self, g: usize, x: &<Self::L as Field>::Elem) -> Result<<Self::L as Field>::Elem> {
        if g >= self.degree() {
            return Err(Error::InvalidInput(format!("no Galois element with index {g}")));
        }
        self.check(x)?;
        Ok(self.act(g, x))
    }

    /// `N_{L/K}(x) = Π_γ γ(x)`, an element of `K` viewed in `L`.
    fn norm(&self, x: &<Self::L as Field>::Elem) -> <Self::L as Field>::Elem {
        let f = self.field();
        (0..self.degree()).fold(f.one(), |acc, g| f.mul(&acc, &self.act(g, x)))
    }

    fn trace(&self, x: &<Self::L as Field>::Elem) -> <Self::L as Field>::Elem {
        let f = self.field();
        (0..self.degree()).fold(f.zero(), |acc, g| f.add(&acc, &self.act(g, x)))
    }

    fn is_in_base(&self, x: &<Self::L as Field>::Elem) -> bool {
        (1..self.degree()).all(|g| self.act(g, x) == *x)
    }

    /// `P`-basis of the subfield fixed by the subgroup generated by `gens`.
    fn fixed_basis(&self, gens: &[usize]) -> Vec<<Self::L as Field>::Elem> {
        let p = self.prime();
        let n = self.l_dim();
        let mut rows: Vec<Vec<<Self::P as Field>::Elem>> = Vec::new();
        let mut unit_images = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = vec![p.zero(); n];
            c[j] = p.one();
            unit_images.push(self.from_coords(&c));
        }
        for &g in gens {
            // rows of (γ - 1) in coordinates
            let cols: Vec<Vec<_>> = unit_images
                .iter()
                .enumerate()
                .map(|(j, u)| {
                    let mut v = self.to_coords(&self.act(g, u));
                    v[j] = p.sub(&v[j], &p.one());
                    v
                })
                .collect();
            for i in 0..n {
                rows.push((0..n).map(|j| cols[j][i].clone()).collect());
            }
        }
        let m = if rows.is_empty() { linalg::zeros(p, 0, n) } else { Matrix::from_rows(rows) };
        linalg::nullspace(p, &m).into_iter().map(|v| self.from_coords(&v)).collect()
    }

    /// `P`-basis of `K`.
    fn base_basis(&self) -> Vec<<Self::L as Field>::Elem> {
        let gens: Vec<usize> = (1..self.degree()).collect();
        self.fixed_basis(&gens)
    }

    /// `[L^S : K]` for the subgroup `S` generated by `subset`.
    fn fixed_subfield_dimension(&self, subset: &[usize]) -> Result<usize> {
        if subset.iter().any(|&g| g >= self.degree()) {
            return Err(Error::InvalidInput("subset contains an unknown Galois element".into()));
        }
        Ok(self.fixed_basis(subset).len() / self.k_dim())
    }
}

fn find_root_exponent<F: Field>(f: &F, zeta: &F::Elem, image: &F::Elem, m: u64) -> Option<u64> {
    let mut cur = f.one();
    for t in 0..m {
        if cur == *image {
            return Some(t);
        }
        cur = f.mul(&cur, zeta);
    }
    None
}

fn generic_root_action<T: GaloisTower + ?Sized>(t: &T, m: u64) -> Option<Vec<u64>> {
    if m <= 1 {
        return Some(vec![1; t.degree()]);
    }
    let z = t.root_of_unity(m)?;
    (0..t.degree())
        .map(|g| find_root_exponent(t.field(), &z, &t.act(g, &z), m))
        .collect()
}

/// Solves for the coordinates of `x` in the span of `basis` (all in `Q(ζ_N)`).
fn rational_coordinates(x: &CyclotomicNumber, basis: &[CyclotomicNumber]) -> Option<Vec<Rational>> {
    let rows = x.coeffs().len();
    let mut m = linalg::zeros(&Rationals, rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..rows {
            m.set(i, j, b.coeffs()[i].clone());
        }
    }
    linalg::solve(&Rationals, &m, x.coeffs())
}

// ---------------------------------------------------------------- quadratic

#[derive(Clone, Debug)]
pub struct QuadraticTower {
    field: QuadraticField,
    gamma: GaloisGroup,
}

impl QuadraticTower {
    pub fn new(d: i64) -> Result<Self> {
        let field = QuadraticField::new(d)?;
        Ok(QuadraticTower { field, gamma: GaloisGroup::cyclic(vec!["id".into(), "conj".into()]) })
    }

    pub fn d(&self) -> i64 {
        self.field.radicand()
    }

    /// Discriminant of `Q(√d)`.
    pub fn discriminant(&self) -> i64 {
        let d = self.d();
        if d.rem_euclid(4) == 1 {
            d
        } else {
            4 * d
        }
    }
}

impl TowerInfo for QuadraticTower {
    fn kind(&self) -> TowerKind {
        TowerKind::Quadratic
    }
    fn gamma(&self) -> &GaloisGroup {
        &self.gamma
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn character_action(&self, e: u64) -> Result<CharacterAction> {
        if e == 0 {
            return Err(Error::InvalidInput("exponent must be positive".into()));
        }
        let disc = self.discriminant();
        let big = lcm(e, disc.unsigned_abs());
        // σ_t(√d) = (disc/t) √d
        let mut fused = Vec::new();
        let mut conj_lift = None;
        for t in units_mod(big) {
            let s = kronecker_symbol(disc, t as i64);
            let r = if e == 1 { 0 } else { t % e };
            if s == 1 {
                if !fused.contains(&r) {
                    fused.push(r);
                }
            } else if conj_lift.is_none() {
                conj_lift = Some(r);
            }
        }
        fused.sort_unstable();
        let one = if e == 1 { 0 } else { 1 };
        Ok(CharacterAction { e, fused, lifts: vec![one, conj_lift.expect("nontrivial Kronecker character")] })
    }
    fn roots_of_unity_action(&self, m: u64) -> Option<Vec<u64>> {
        generic_root_action(self, m)
    }
    fn roots_of_unity_count(&self) -> Option<u64> {
        Some(match self.d() {
            -1 => 4,
            -3 => 6,
            _ => 2,
        })
    }
    fn describe(&self) -> String {
        format!("Q(sqrt({}))/Q", self.d())
    }
    fn spec(&self) -> TowerSpec {
        TowerSpec::Quadratic { d: self.d() }
    }
    fn quadratic_radicand(&self) -> Option<i64> {
        Some(self.d())
    }
    fn base_is_prime(&self) -> bool {
        true
    }
}

impl GaloisTower for QuadraticTower {
    type P = Rationals;
    type L = QuadraticField;

    fn prime(&self) -> &Rationals {
        &Rationals
    }
    fn field(&self) -> &QuadraticField {
        &self.field
    }
    fn act(&self, g: usize, x: &QuadraticNumber) -> QuadraticNumber {
        if g == 0 {
            x.clone()
        } else {
            self.field.conjugate(x)
        }
    }
    fn l_dim(&self) -> usize {
        2
    }
    fn to_coords(&self, x: &QuadraticNumber) -> Vec<Rational> {
        vec![x.a.clone(), x.b.clone()]
    }
    fn from_coords(&self, c: &[Rational]) -> QuadraticNumber {
        self.field.element(c[0].clone(), c[1].clone())
    }
    fn embed_prime(&self, c: &Rational) -> QuadraticNumber {
        self.field.from_rational(c).unwrap()
    }
    fn check(&self, x: &QuadraticNumber) -> Result<()> {
        self.field.check(x)
    }
    fn parse_element(&self, s: &str) -> Result<QuadraticNumber> {
        self.field.parse(s)
    }
    fn format_element(&self, x: &QuadraticNumber) -> String {
        self.field.format(x)
    }
    fn root_of_unity(&self, m: u64) -> Option<QuadraticNumber> {
        let f = &self.field;
        match (m, self.d()) {
            (1, _) => Some(f.one()),
            (2, _) => Some(f.from_int(-1)),
            (4, -1) => Some(f.sqrt_d()),
            (3, -3) => f.parse("-1/2+1/2*sqrt(-3)").ok(),
            (6, -3) => f.parse("1/2+1/2*sqrt(-3)").ok(),
            _ => None,
        }
    }
    fn from_cyclotomic(&self, x: &CyclotomicNumber) -> Option<QuadraticNumber> {
        let big = CyclotomicField::new(lcm(x.conductor(), self.discriminant().unsigned_abs())).ok()?;
        let small = CyclotomicField::new(x.conductor()).ok()?;
        let xb = small.lift(x, &big).ok()?;
        let root = big.sqrt_integer(self.d())?;
        let c = rational_coordinates(&xb, &[big.one(), root])?;
        Some(self.field.element(c[0].clone(), c[1].clone()))
    }
    fn to_cyclotomic(&self, x: &QuadraticNumber, big: &CyclotomicField) -> Option<CyclotomicNumber> {
        let root = big.sqrt_integer(self.d())?;
        Some(big.add(&big.from_rational(&x.a).unwrap(), &big.mul(&big.from_rational(&x.b).unwrap(), &root)))
    }
    fn embedding_conductor(&self) -> Option<u64> {
        Some(self.discriminant().unsigned_abs())
    }
}

// ---------------------------------------------------------------- cyclotomic

/// `L = Q(ζ_n)^A` over `K = Q(ζ_n)^B` for subgroups `A ⊆ B ⊆ (Z/n)^×`.
#[derive(Clone, Debug)]
pub struct CyclotomicTower {
    field: CyclotomicField,
    /// `B`, sorted.
    big: Vec<u64>,
    /// `A`, sorted.
    fixing: Vec<u64>,
    /// Least representative of each coset of `A` in `B`.
    reps: Vec<u64>,
    gamma: GaloisGroup,
    /// RREF basis of `L` over `Q` in power-basis coordinates, with pivot columns.
    basis: Vec<CyclotomicNumber>,
    pivots: Vec<usize>,
    subgroup_gens: Vec<u64>,
    fixing_gens: Vec<u64>,
}

fn unit_closure(n: u64, gens: &[u64]) -> Vec<u64> {
    let one = 1 % n.max(2);
    let mut elems = vec![if n == 1 { 0 } else { one }];
    let mut i = 0;
    while i < elems.len() {
        for &g in gens {
            let x = if n == 1 { 0 } else { elems[i] * (g % n) % n };
            if !elems.contains(&x) {
                elems.push(x);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}

impl CyclotomicTower {
    pub fn new(n: u64, subgroup: &[u64], fixing: &[u64]) -> Result<Self> {
        let field = CyclotomicField::new(n)?;
        for &g in subgroup.iter().chain(fixing) {
            if n > 1 && gcd(g % n, n) != 1 {
                return Err(Error::InvalidInput(format!("{g} is not a unit modulo {n}")));
            }
        }
        let fixing_set = unit_closure(n, fixing);
        let gens: Vec<u64> = subgroup.iter().chain(fixing).copied().collect();
        let big = unit_closure(n, &gens);
        let mut reps: Vec<u64> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for &b in &big {
            if seen.contains(&b) {
                continue;
            }
            reps.push(b);
            for &a in &fixing_set {
                seen.insert(if n == 1 { 0 } else { b * a % n });
            }
        }
        let coset_of = |x: u64| -> usize {
            reps.iter()
                .position(|&r| fixing_set.iter().any(|&a| if n == 1 { true } else { r * a % n == x }))
                .expect("coset")
        };
        let table = reps
            .iter()
            .map(|&x| reps.iter().map(|&y| coset_of(if n == 1 { 0 } else { x * y % n })).collect())
            .collect();
        let labels = reps.iter().map(|r| format!("sigma_{r}")).collect();
        let gamma = GaloisGroup::new(labels, table);

        // L = fixed space of A
        let phi = field.degree();
        let mut rows = Vec::new();
        for &a in &fixing_set {
            if a == 1 || n == 1 {
                continue;
            }
            let cols: Vec<Vec<Rational>> = (0..phi)
                .map(|j| {
                    let mut v = field.apply_automorphism(a, &field.zeta_power(j as i64)).coeffs().to_vec();
                    v[j] -= Rational::from_integer(1.into());
                    v
                })
                .collect();
            for i in 0..phi {
                rows.push((0..phi).map(|j| cols[j][i].clone()).collect::<Vec<_>>());
            }
        }
        let ns = if rows.is_empty() {
            (0..phi)
                .map(|j| {
                    let mut v = vec![Rational::from_integer(0.into()); phi];
                    v[j] = Rational::from_integer(1.into());
                    v
                })
                .collect()
        } else {
            linalg::nullspace(&Rationals, &Matrix::from_rows(rows))
        };
        let (rref, pivots) = linalg::rref(&Rationals, &Matrix::from_rows(ns));
        let basis: Vec<CyclotomicNumber> =
            (0..pivots.len()).map(|i| field.from_coeffs(rref.row(i).to_vec()).unwrap()).collect();
        Ok(CyclotomicTower {
            field,
            big,
            fixing: fixing_set,
            reps,
            gamma,
            basis,
            pivots,
            subgroup_gens: subgroup.to_vec(),
            fixing_gens: fixing.to_vec(),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    pub fn representatives(&self) -> &[u64] {
        &self.reps
    }

    pub fn fixing_group(&self) -> &[u64] {
        &self.fixing
    }

    pub fn galois_subgroup(&self) -> &[u64] {
        &self.big
    }
}

impl TowerInfo for CyclotomicTower {
    fn kind(&self) -> TowerKind {
        TowerKind::Cyclotomic
    }
    fn gamma(&self) -> &GaloisGroup {
        &self.gamma
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn character_action(&self, e: u64) -> Result<CharacterAction> {
        if e == 0 {
            return Err(Error::InvalidInput("exponent must be positive".into()));
        }
        let n = self.conductor();
        let big_n = lcm(e, n);
        let red = |t: u64, m: u64| if m == 1 { 0 } else { t % m };
        let mut fused = Vec::new();
        let mut lifts = vec![None; self.reps.len()];
        for t in units_mod(big_n) {
            let tn = red(t, n);
            if self.fixing.contains(&tn) {
                let r = red(t, e);
                if !fused.contains(&r) {
                    fused.push(r);
                }
            }
            for (i, &b) in self.reps.iter().enumerate() {
                if lifts[i].is_none() && self.fixing.iter().any(|&a| red(b * a, n) == tn) {
                    lifts[i] = Some(red(t, e));
                }
            }
        }
        fused.sort_unstable();
        Ok(CharacterAction { e, fused, lifts: lifts.into_iter().map(|x| x.expect("lift")).collect() })
    }
    fn roots_of_unity_action(&self, m: u64) -> Option<Vec<u64>> {
        generic_root_action(self, m)
    }
    fn roots_of_unity_count(&self) -> Option<u64> {
        let n2 = 2 * self.conductor();
        (1..=n2).rev().find(|&m| n2 % m == 0 && self.root_of_unity(m).is_some())
    }
    fn describe(&self) -> String {
        if self.fixing.len() <= 1 {
            format!("Q(zeta{})/Q(zeta{})^<{:?}>", self.conductor(), self.conductor(), self.subgroup_gens)
        } else {
            format!(
                "Q(zeta{n})^<{:?}>/Q(zeta{n})^<{:?},{:?}>",
                self.fixing_gens,
                self.subgroup_gens,
                self.fixing_gens,
                n = self.conductor()
            )
        }
    }
    fn spec(&self) -> TowerSpec {
        TowerSpec::Cyclotomic { n: self.conductor(), subgroup: self.subgroup_gens.clone(), fixing: self.fixing_gens.clone() }
    }
    fn base_is_prime(&self) -> bool {
        self.big.len() == units_mod(self.conductor()).len()
    }
}

impl GaloisTower for CyclotomicTower {
    type P = Rationals;
    type L = CyclotomicField;

    fn prime(&self) -> &Rationals {
        &Rationals
    }
    fn field(&self) -> &CyclotomicField {
        &self.field
    }
    fn act(&self, g: usize, x: &CyclotomicNumber) -> CyclotomicNumber {
        if g == 0 || self.conductor() <= 2 {
            x.clone()
        } else {
            self.field.apply_automorphism(self.reps[g], x)
        }
    }
    fn l_dim(&self) -> usize {
        self.basis.len()
    }
    fn to_coords(&self, x: &CyclotomicNumber) -> Vec<Rational> {
        self.pivots.iter().map(|&c| x.coeffs()[c].clone()).collect()
    }
    fn from_coords(&self, c: &[Rational]) -> CyclotomicNumber {
        let f = &self.field;
        c.iter()
            .zip(&self.basis)
            .fold(f.zero(), |acc, (ci, b)| f.add(&acc, &f.mul(&f.from_rational(ci).unwrap(), b)))
    }
    fn embed_prime(&self, c: &Rational) -> CyclotomicNumber {
        self.field.from_rational(c).unwrap()
    }
    fn check(&self, x: &CyclotomicNumber) -> Result<()> {
        self.field.check(x)?;
        if self.fixing.iter().all(|&a| a <= 1 || self.field.apply_automorphism(a, x) == *x) {
            Ok(())
        } else {
            Err(Error::TowerMismatch(format!("{} is not in the fixed field L", self.field.format(x))))
        }
    }
    fn parse_element(&self, s: &str) -> Result<CyclotomicNumber> {
        let x = self.field.parse(s)?;
        self.check(&x)?;
        Ok(x)
    }
    fn format_element(&self, x: &CyclotomicNumber) -> String {
        self.field.format(x)
    }
    fn root_of_unity(&self, m: u64) -> Option<CyclotomicNumber> {
        let z = self.field.root_of_unity(m)?;
        self.check(&z).ok().map(|_| z)
    }
    fn from_cyclotomic(&self, x: &CyclotomicNumber) -> Option<CyclotomicNumber> {
        let n = self.conductor();
        let y = if x.conductor() == n {
            x.clone()
        } else {
            let big = CyclotomicField::new(lcm(n, x.conductor())).ok()?;
            let small = CyclotomicField::new(x.conductor()).ok()?;
            let xb = small.lift(x, &big).ok()?;
            let basis: Vec<_> =
                (0..self.field.degree()).map(|j| self.field.lift(&self.field.zeta_power(j as i64), &big).unwrap()).collect();
            self.field.from_coeffs(rational_coordinates(&xb, &basis)?).ok()?
        };
        self.check(&y).ok().map(|_| y)
    }
    fn to_cyclotomic(&self, x: &CyclotomicNumber, big: &CyclotomicField) -> Option<CyclotomicNumber> {
        self.field.lift(x, big).ok()
    }
    fn embedding_conductor(&self) -> Option<u64> {
        Some(self.conductor())
    }
}

// ---------------------------------------------------------------- finite

/// `GF(p^k)` over `GF(p)`, with `Γ` generated by Frobenius.
#[derive(Clone, Debug)]
pub struct FiniteTower {
    field: FiniteField,
    gamma: GaloisGroup,
}

impl FiniteTower {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let field = FiniteField::new(p, k)?;
        let labels = (0..k).map(|i| if i == 0 { "id".to_string() } else { format!("Frob^{i}") }).collect();
        Ok(FiniteTower { field, gamma: GaloisGroup::cyclic(labels) })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }
}

impl TowerInfo for FiniteTower {
    fn kind(&self) -> TowerKind {
        TowerKind::Finite
    }
    fn gamma(&self) -> &GaloisGroup {
        &self.gamma
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn character_action(&self, e: u64) -> Result<CharacterAction> {
        if e == 0 || e % self.p() == 0 {
            return Err(Error::Precondition(format!("exponent {e} is divisible by the characteristic")));
        }
        let red = |t: u64| if e == 1 { 0 } else { t % e };
        let q = self.field.order();
        let mut fused = vec![];
        let mut x = red(1);
        loop {
            if fused.contains(&x) {
                break;
            }
            fused.push(x);
            x = red(x * (q % e.max(1)));
        }
        fused.sort_unstable();
        let lifts = (0..self.degree()).map(|i| red(pow_mod(self.p(), i as u64, e.max(1)))).collect();
        Ok(CharacterAction { e, fused, lifts })
    }
    fn roots_of_unity_action(&self, m: u64) -> Option<Vec<u64>> {
        if m == 0 || (self.field.order() - 1) % m != 0 {
            return None;
        }
        Some((0..self.degree()).map(|i| pow_mod(self.p(), i as u64, m.max(1))).collect())
    }
    fn roots_of_unity_count(&self) -> Option<u64> {
        Some(self.field.order() - 1)
    }
    fn describe(&self) -> String {
        format!("GF({}^{})/GF({})", self.p(), self.field.degree(), self.p())
    }
    fn spec(&self) -> TowerSpec {
        TowerSpec::Finite { p: self.p(), k: self.field.degree() }
    }
    fn finite_order(&self) -> Option<u64> {
        Some(self.field.order())
    }
    fn base_is_prime(&self) -> bool {
        true
    }
}

impl GaloisTower for FiniteTower {
    type P = PrimeField;
    type L = FiniteField;

    fn prime(&self) -> &PrimeField {
        self.field.prime_field()
    }
    fn field(&self) -> &FiniteField {
        &self.field
    }
    fn act(&self, g: usize, x: &FiniteFieldElement) -> FiniteFieldElement {
        self.field.frobenius(g, x)
    }
    fn l_dim(&self) -> usize {
        self.field.degree()
    }
    fn to_coords(&self, x: &FiniteFieldElement) -> Vec<u64> {
        x.0.clone()
    }
    fn from_coords(&self, c: &[u64]) -> FiniteFieldElement {
        FiniteFieldElement(c.to_vec())
    }
    fn embed_prime(&self, c: &u64) -> FiniteFieldElement {
        self.field.from_int(*c as i64)
    }
    fn check(&self, x: &FiniteFieldElement) -> Result<()> {
        self.field.check(x)
    }
    fn parse_element(&self, s: &str) -> Result<FiniteFieldElement> {
        self.field.parse(s)
    }
    fn format_element(&self, x: &FiniteFieldElement) -> String {
        self.field.format(x)
    }
    fn root_of_unity(&self, m: u64) -> Option<FiniteFieldElement> {
        let f = &self.field;
        if m == 0 || (f.order() - 1) % m != 0 {
            return None;
        }
        f.elements().find(|x| {
            !f.is_zero(x) && f.is_one(&f.pow(x, m)) && (1..m).all(|d| m % d != 0 || !f.is_one(&f.pow(x, d)))
        })
    }
    fn from_cyclotomic(&self, _x: &CyclotomicNumber) -> Option<FiniteFieldElement> {
        None
    }
    fn to_cyclotomic(&self, _x: &FiniteFieldElement, _big: &CyclotomicField) -> Option<CyclotomicNumber> {
        None
    }
    fn embedding_conductor(&self) -> Option<u64> {
        None
    }
}

// ---------------------------------------------------------------- archimedean

/// The formal tower `C/R`, used for indicator computations only.
#[derive(Clone, Debug)]
pub struct ArchimedeanTower {
    gamma: GaloisGroup,
}

impl Default for ArchimedeanTower {
    fn default() -> Self {
        ArchimedeanTower { gamma: GaloisGroup::cyclic(vec!["id".into(), "conj".into()]) }
    }
}

impl TowerInfo for ArchimedeanTower {
    fn kind(&self) -> TowerKind {
        TowerKind::Archimedean
    }
    fn gamma(&self) -> &GaloisGroup {
        &self.gamma
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn character_action(&self, e: u64) -> Result<CharacterAction> {
        if e == 0 {
            return Err(Error::InvalidInput("exponent must be positive".into()));
        }
        let red = |t: u64| if e == 1 { 0 } else { t % e };
        Ok(CharacterAction { e, fused: vec![red(1)], lifts: vec![red(1), red(e - 1)] })
    }
    fn roots_of_unity_action(&self, m: u64) -> Option<Vec<u64>> {
        if m == 0 {
            return None;
        }
        Some(vec![1 % m.max(2), (m - 1) % m.max(2)])
    }
    fn roots_of_unity_count(&self) -> Option<u64> {
        None
    }
    fn describe(&self) -> String {
        "C/R".into()
    }
    fn spec(&self) -> TowerSpec {
        TowerSpec::Archimedean {}
    }
    fn base_is_prime(&self) -> bool {
        false
    }
}

// ---------------------------------------------------------------- specs

/// JSON description of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TowerSpec {
    Quadratic {
        d: i64,
    },
    Cyclotomic {
        n: u64,
        /// Generators of `Gal(L/K)`, lifted to `(Z/n)^×`.
        subgroup: Vec<u64>,
        /// Generators of `Gal(Q(ζ_n)/L)`; empty when `L = Q(ζ_n)`.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        fixing: Vec<u64>,
    },
    Finite {
        p: u64,
        k: usize,
    },
    Archimedean {},
}

/// A tower of any supported kind.
#[derive(Clone, Debug)]
pub enum AnyTower {
    Quadratic(Arc<QuadraticTower>),
    Cyclotomic(Arc<CyclotomicTower>),
    Finite(Arc<FiniteTower>),
    Archimedean(Arc<ArchimedeanTower>),
}

impl TowerSpec {
    pub fn build(&self) -> Result<AnyTower> {
        Ok(match self {
            TowerSpec::Quadratic { d } => AnyTower::Quadratic(Arc::new(QuadraticTower::new(*d)?)),
            TowerSpec::Cyclotomic { n, subgroup, fixing } => {
                AnyTower::Cyclotomic(Arc::new(CyclotomicTower::new(*n, subgroup, fixing)?))
            }
            TowerSpec::Finite { p, k } => AnyTower::Finite(Arc::new(FiniteTower::new(*p, *k)?)),
            TowerSpec::Archimedean {} => AnyTower::Archimedean(Arc::new(ArchimedeanTower::default())),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("tower: {e}")))
    }
}

impl AnyTower {
    pub fn info(&self) -> Arc<dyn TowerInfo> {
        match self {
            AnyTower::Quadratic(t) => t.clone(),
            AnyTower::Cyclotomic(t) => t.clone(),
            AnyTower::Finite(t) => t.clone(),
            AnyTower::Archimedean(t) => t.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn quadratic_character_action_matches_gauss_sums() {
        // oracle: apply σ_t to an explicit √d inside Q(ζ_N)
        for d in [2i64, 3, 5, -1, -2, -3, 6, -5, 10, 13] {
            let t = QuadraticTower::new(d).unwrap();
            let big_n = t.discriminant().unsigned_abs();
            let f = CyclotomicField::new(big_n).unwrap();
            let root = f.sqrt_integer(d).unwrap();
            for u in units_mod(big_n) {
                let moved = f.apply_automorphism(u, &root);
                let expected = if moved == root { 1 } else { -1 };
                assert_eq!(kronecker_symbol(t.discriminant(), u as i64), expected, "d={d}, t={u}");
            }
        }
    }

    #[test]
    fn relative_cyclotomic_tower() {
        // L = Q(ζ3, √2) over K = Q(ζ3)
        let t = CyclotomicTower::new(24, &[13], &[7]).unwrap();
        assert_eq!(t.degree(), 2);
        assert_eq!(t.l_dim(), 4);
        assert_eq!(t.k_dim(), 2);
        let w = t.parse_element("zeta3").unwrap();
        assert!(t.is_in_base(&w));
        let r2 = t.parse_element("sqrt(2)").unwrap();
        assert_eq!(t.act(1, &r2), t.field().neg(&r2));
        assert!(t.parse_element("zeta8").is_err());
        let x = t.field().add(&w, &r2);
        assert_eq!(t.from_coords(&t.to_coords(&x)), x);
        assert_eq!(t.fixed_subfield_dimension(&[]).unwrap(), 2);
        assert_eq!(t.fixed_subfield_dimension(&[1]).unwrap(), 1);
    }

    #[test]
    fn fixed_field_of_index_two_subgroup_of_q_zeta5() {
        let t = CyclotomicTower::new(5, &[2], &[]).unwrap();
        assert_eq!(t.degree(), 4);
        let quartic = t.gamma().closure(&[t.representatives().iter().position(|&r| r == 4).unwrap()]);
        assert_eq!(t.fixed_subfield_dimension(&quartic).unwrap(), 2);
    }

    #[test]
    fn norms_land_in_the_base() {
        let t = QuadraticTower::new(3).unwrap();
        let x = t.parse_element("2+sqrt(3)").unwrap();
        assert_eq!(t.norm(&x), t.field().from_int(1));
        let f = FiniteTower::new(3, 2).unwrap();
        for x in f.field().elements() {
            assert!(f.is_in_base(&f.norm(&x)));
        }
    }

    #[test]
    fn character_action_cyclotomic() {
        let t = CyclotomicTower::new(4, &[3], &[]).unwrap();
        let a = t.character_action(4).unwrap();
        assert_eq!(a.fused, vec![1]);
        assert_eq!(a.lifts, vec![1, 3]);
        let f = FiniteTower::new(2, 2).unwrap();
        let a = f.character_action(3).unwrap();
        assert_eq!(a.fused, vec![1]);
        assert_eq!(a.lifts, vec![1, 2]);
        let g = FiniteTower::new(3, 2).unwrap().character_action(5).unwrap();
        assert_eq!(g.fused, vec![1, 4]);
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let t = QuadraticTower::new(2).unwrap();
        let other = QuadraticField::new(3).unwrap();
        assert!(t.galois_apply(1, &other.element(rat(1), rat(1))).is_err());
        assert!(t.galois_apply(5, &t.field().one()).is_err());
    }

    #[test]
    fn tower_spec_json() {
        let s: TowerSpec = serde_json::from_str(r#"{"kind":"cyclotomic","n":12,"subgroup":[1,5]}"#).unwrap();
        assert_eq!(s, TowerSpec::Cyclotomic { n: 12, subgroup: vec![1, 5], fixing: vec![] });
        assert!(TowerSpec::from_json(r#"{"kind":"quadratic","d":0}"#).unwrap().build().is_err());
        assert!(TowerSpec::from_json(r#"{"kind":"weird"}"#).is_err());
    }
}
