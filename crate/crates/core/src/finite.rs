//! Finite fields `GF(p^k) = F_p[x]/(f)` for the least monic irreducible `f`.

use crate::error::{Error, Result};
use crate::expr;
use crate::field::{Field, PrimeField, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFieldElement(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    prime: PrimeField,
    k: usize,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u64>,
}

/// Polynomials over a field, coefficient vectors with the lowest degree first.
pub mod poly {
    use crate::field::Field;

    pub fn trim<F: Field>(f: &F, a: &mut Vec<F::Elem>) {
        while a.last().is_some_and(|c| f.is_zero(c)) {
            a.pop();
        }
    }

    pub fn degree<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
        a.iter().rposition(|c| !f.is_zero(c))
    }

    pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        trim(f, &mut out);
        out
    }

    /// Quotient and remainder of `a` by a nonzero `b`.
    pub fn divmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let db = degree(f, b).expect("division by zero polynomial");
        let lead_inv = f.inv(&b[db]).unwrap();
        let mut r: Vec<F::Elem> = a.to_vec();
        trim(f, &mut r);
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![f.zero(); r.len() - db];
        while let Some(dr) = degree(f, &r) {
            if dr < db {
                break;
            }
            let c = f.mul(&r[dr], &lead_inv);
            let shift = dr - db;
            for (j, bj) in b.iter().enumerate().take(db + 1) {
                r[shift + j] = f.sub(&r[shift + j], &f.mul(&c, bj));
            }
            q[shift] = c;
            trim(f, &mut r);
        }
        trim(f, &mut q);
        (q, r)
    }

    pub fn is_zero<F: Field>(f: &F, a: &[F::Elem]) -> bool {
        degree(f, a).is_none()
    }
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let prime = PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::InvalidInput("extension degree must be positive".into()));
        }
        let q = (p as u128).checked_pow(k as u32).filter(|&q| q <= 1 << 24);
        if q.is_none() {
            return Err(Error::InvalidInput(format!("GF({p}^{k}) is too large")));
        }
        let modulus = least_irreducible(&prime, k);
        Ok(FiniteField { prime, k, modulus })
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p().pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FiniteFieldElement {
        if self.k == 1 {
            // x ≡ -f_0 when the modulus is linear
            FiniteFieldElement(vec![self.prime.neg(&self.modulus[0])])
        } else {
            let mut v = vec![0; self.k];
            v[1] = 1;
            FiniteFieldElement(v)
        }
    }

    /// Frobenius `x ↦ x^{p^i}`.
    pub fn frobenius(&self, i: usize, x: &FiniteFieldElement) -> FiniteFieldElement {
        self.pow(x, self.p().pow((i % self.k) as u32))
    }

    /// Enumerates all elements in a fixed order: index `Σ c_j p^j` for coefficients `c_j`.
    pub fn element_from_index(&self, mut idx: u64) -> FiniteFieldElement {
        let p = self.p();
        let mut v = vec![0; self.k];
        for c in v.iter_mut() {
            *c = idx % p;
            idx /= p;
        }
        FiniteFieldElement(v)
    }

    pub fn index_of(&self, x: &FiniteFieldElement) -> u64 {
        x.0.iter().rev().fold(0, |acc, &c| acc * self.p() + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FiniteFieldElement> + '_ {
        (0..self.order()).map(|i| self.element_from_index(i))
    }

    pub fn check(&self, x: &FiniteFieldElement) -> Result<()> {
        if x.0.len() != self.k || x.0.iter().any(|&c| c >= self.p()) {
            return Err(Error::TowerMismatch(format!("{x:?} is not an element of GF({}^{})", self.p(), self.k)));
        }
        Ok(())
    }

    /// Elements of multiplicative order dividing `m`.
    pub fn roots_of_unity(&self, m: u64) -> Vec<FiniteFieldElement> {
        self.elements().filter(|x| !self.is_zero(x) && self.is_one(&self.pow(x, m))).collect()
    }

    pub fn parse(&self, s: &str) -> Result<FiniteFieldElement> {
        let e = expr::parse(s)?;
        e.eval(
            self,
            &|sym| match sym {
                "x" | "a" | "t" => Ok(self.generator()),
                _ => Err(Error::Parse(format!("unknown symbol {sym:?} (use x for the generator)"))),
            },
            &|_| Err(Error::Unsupported("sqrt is not available in finite fields".into())),
        )
    }

    /// Prints `c_0 + c_1*x + ...` in terms of the generator `x`.
    pub fn format(&self, x: &FiniteFieldElement) -> String {
        let mut terms = Vec::new();
        for (j, &c) in x.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Least monic irreducible of degree `k` over `F_p`, ordered by `Σ c_j p^j`.
fn least_irreducible(f: &PrimeField, k: usize) -> Vec<u64> {
    let p = f.p();
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut cand = vec![0u64; k + 1];
        let mut r = idx;
        for c in cand.iter_mut().take(k) {
            *c = r % p;
            r /= p;
        }
        cand[k] = 1;
        if is_irreducible(f, &cand) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by all monic polynomials of degree at most `deg/2`.
pub fn is_irreducible(f: &PrimeField, a: &[u64]) -> bool {
    let Some(d) = poly::degree(f, a) else { return false };
    if d == 0 {
        return false;
    }
    let p = f.p();
    for e in 1..=d / 2 {
        for idx in 0..p.pow(e as u32) {
            let mut b = vec![0u64; e + 1];
            let mut r = idx;
            for c in b.iter_mut().take(e) {
                *c = r % p;
                r /= p;
            }
            b[e] = 1;
            let (_, rem) = poly::divmod(f, a, &b);
            if poly::is_zero(f, &rem) {
                return false;
            }
        }
    }
    true
}

impl Field for FiniteField {
    type Elem = FiniteFieldElement;

    fn zero(&self) -> FiniteFieldElement {
        FiniteFieldElement(vec![0; self.k])
    }
    fn one(&self) -> FiniteFieldElement {
        let mut v = vec![0; self.k];
        v[0] = 1;
        FiniteFieldElement(v)
    }
    fn add(&self, a: &FiniteFieldElement, b: &FiniteFieldElement) -> FiniteFieldElement {
        FiniteFieldElement(a.0.iter().zip(&b.0).map(|(x, y)| self.prime.add(x, y)).collect())
    }
    fn neg(&self, a: &FiniteFieldElement) -> FiniteFieldElement {
        FiniteFieldElement(a.0.iter().map(|x| self.prime.neg(x)).collect())
    }
    fn mul(&self, a: &FiniteFieldElement, b: &FiniteFieldElement) -> FiniteFieldElement {
        let prod = poly::mul(&self.prime, &a.0, &b.0);
        let (_, mut r) = poly::divmod(&self.prime, &prod, &self.modulus);
        r.resize(self.k, 0);
        FiniteFieldElement(r)
    }
    fn inv(&self, a: &FiniteFieldElement) -> Option<FiniteFieldElement> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }
    fn is_zero(&self, a: &FiniteFieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn from_int(&self, n: i64) -> FiniteFieldElement {
        let mut v = vec![0; self.k];
        v[0] = self.prime.from_int(n);
        FiniteFieldElement(v)
    }
    fn from_rational(&self, q: &Rational) -> Option<FiniteFieldElement> {
        let c = self.prime.from_rational(q)?;
        let mut v = vec![0; self.k];
        v[0] = c;
        Some(FiniteFieldElement(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        for (p, k) in [(2, 2), (3, 2), (2, 3), (5, 1)] {
            let f = FiniteField::new(p, k).unwrap();
            let q = f.order();
            let nonzero: Vec<_> = f.elements().filter(|x| !f.is_zero(x)).collect();
            assert_eq!(nonzero.len() as u64, q - 1);
            assert!(nonzero.iter().all(|x| f.is_one(&f.pow(x, q - 1))));
            let has_generator = nonzero.iter().any(|x| (1..q - 1).all(|e| !f.is_one(&f.pow(x, e))));
            assert!(has_generator);
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_only() {
        let f = FiniteField::new(3, 2).unwrap();
        let fixed: Vec<_> = f.elements().filter(|x| f.frobenius(1, x) == *x).collect();
        assert_eq!(fixed.len(), 3);
    }

    #[test]
    fn parse_format_roundtrip() {
        let f = FiniteField::new(3, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse(&f.format(&x)).unwrap(), x);
        }
    }

    proptest! {
        #[test]
        fn frobenius_is_additive_and_multiplicative(i in 0u64..81, j in 0u64..81) {
            let f = FiniteField::new(3, 4).unwrap();
            let x = f.element_from_index(i);
            let y = f.element_from_index(j);
            prop_assert_eq!(f.frobenius(1, &f.add(&x, &y)), f.add(&f.frobenius(1, &x), &f.frobenius(1, &y)));
            prop_assert_eq!(f.frobenius(1, &f.mul(&x, &y)), f.mul(&f.frobenius(1, &x), &f.frobenius(1, &y)));
        }
    }
}
