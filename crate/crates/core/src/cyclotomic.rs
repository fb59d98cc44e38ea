//! The cyclotomic field `Q(ζ_n)` in the power basis `1, ζ, ..., ζ^{φ(n)-1}`.

use std::sync::Arc;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr;
use crate::field::{format_rational, gcd, is_prime, rat, Field, Rational, Rationals};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    n: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: u64,
    phi: usize,
    /// `powers[j]` holds the power-basis coordinates of `ζ^j`, `0 <= j < n`.
    powers: Arc<Vec<Vec<Rational>>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for CyclotomicField {}

/// Integer coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div(&num, &phi_d);
        }
    }
    num
}

fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db].clone();
        q[i] = c.clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&k| gcd(k, n) == 1).collect()
}

impl CyclotomicField {
    pub const MAX_CONDUCTOR: u64 = 1024;

    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX_CONDUCTOR {
            return Err(Error::InvalidInput(format!("conductor {n} outside 1..={}", Self::MAX_CONDUCTOR)));
        }
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(n as usize);
        let mut cur: Vec<BigInt> = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..n {
            powers.push(cur.iter().map(|c| Rational::from_integer(c.clone())).collect());
            // multiply by x and reduce by the monic Φ_n
            let lead = cur[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !lead.is_zero() {
                for i in 0..phi {
                    next[i] -= &lead * &phi_poly[i];
                }
            }
            cur = next;
        }
        Ok(CyclotomicField { n, phi, powers: Arc::new(powers) })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    fn reduce_exponent_vector(&self, acc: &[Rational]) -> CyclotomicNumber {
        let mut coeffs = vec![Rational::zero(); self.phi];
        for (j, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in self.powers[j].iter().enumerate() {
                if !p.is_zero() {
                    coeffs[i] += c * p;
                }
            }
        }
        CyclotomicNumber { n: self.n, coeffs }
    }

    /// `ζ_n^k`.
    pub fn zeta_power(&self, k: i64) -> CyclotomicNumber {
        let j = k.rem_euclid(self.n as i64) as usize;
        CyclotomicNumber { n: self.n, coeffs: self.powers[j].clone() }
    }

    /// A primitive `m`-th root of unity, when `m` divides the conductor (or `m = 2`).
    pub fn root_of_unity(&self, m: u64) -> Option<CyclotomicNumber> {
        if m == 0 {
            return None;
        }
        if self.n % m == 0 {
            Some(self.zeta_power((self.n / m) as i64))
        } else if m == 2 {
            Some(self.from_int(-1))
        } else if m % 2 == 0 && (m / 2) % 2 == 1 && self.n % (m / 2) == 0 {
            // -ζ_{m/2} is a primitive m-th root for odd m/2
            Some(self.neg(&self.zeta_power((self.n / (m / 2)) as i64)))
        } else {
            None
        }
    }

    /// The automorphism `ζ ↦ ζ^t`.
    pub fn apply_automorphism(&self, t: u64, x: &CyclotomicNumber) -> CyclotomicNumber {
        debug_assert_eq!(gcd(t, self.n), 1);
        let mut acc = vec![Rational::zero(); self.n as usize];
        for (i, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = ((i as u64 * t) % self.n) as usize;
                acc[j] += c;
            }
        }
        self.reduce_exponent_vector(&acc)
    }

    pub fn complex_conjugate(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        if self.n <= 2 {
            x.clone()
        } else {
            self.apply_automorphism(self.n - 1, x)
        }
    }

    /// Image in `Q(ζ_N)` for a multiple `N` of the conductor.
    pub fn lift(&self, x: &CyclotomicNumber, big: &CyclotomicField) -> Result<CyclotomicNumber> {
        if big.n % self.n != 0 {
            return Err(Error::TowerMismatch(format!("Q(ζ{}) is not contained in Q(ζ{})", self.n, big.n)));
        }
        let step = big.n / self.n;
        let mut acc = vec![Rational::zero(); big.n as usize];
        for (i, c) in x.coeffs.iter().enumerate() {
            acc[(i as u64 * step) as usize] += c;
        }
        Ok(big.reduce_exponent_vector(&acc))
    }

    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> Result<CyclotomicNumber> {
        if coeffs.len() != self.phi {
            return Err(Error::TowerMismatch(format!("expected {} coordinates, got {}", self.phi, coeffs.len())));
        }
        Ok(CyclotomicNumber { n: self.n, coeffs })
    }

    pub fn check(&self, x: &CyclotomicNumber) -> Result<()> {
        if x.n != self.n || x.coeffs.len() != self.phi {
            return Err(Error::TowerMismatch(format!("element of Q(ζ{}) used in Q(ζ{})", x.n, self.n)));
        }
        Ok(())
    }

    /// A square root of the integer `m`, when `Q(√m) ⊆ Q(ζ_n)`.
    pub fn sqrt_integer(&self, m: i64) -> Option<CyclotomicNumber> {
        if m == 0 {
            return Some(self.zero());
        }
        let (s, core) = squarefree_decomposition(m);
        let disc = if core.rem_euclid(4) == 1 { core.unsigned_abs() } else { 4 * core.unsigned_abs() };
        if disc != 1 && self.n % disc != 0 {
            return None;
        }
        let mut root = self.one();
        let mut rest = core;
        let mut p = 3u64;
        let mut odd_product: i64 = 1;
        let mut remaining = core.unsigned_abs();
        while remaining % 2 == 0 {
            remaining /= 2;
        }
        while remaining > 1 {
            if remaining % p == 0 && is_prime(p) {
                remaining /= p;
                let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
                odd_product *= pstar;
                root = self.mul(&root, &self.gauss_sum(p)?);
            }
            p += 2;
        }
        rest /= odd_product;
        // rest ∈ {±1, ±2}
        let extra = match rest {
            1 => self.one(),
            -1 => self.root_of_unity(4)?,
            2 => {
                let z = self.root_of_unity(8)?;
                self.add(&z, &self.pow(&z, 7))
            }
            -2 => {
                let z = self.root_of_unity(8)?;
                self.add(&z, &self.pow(&z, 3))
            }
            _ => unreachable!("squarefree remainder {rest}"),
        };
        root = self.mul(&root, &extra);
        root = self.mul(&root, &self.from_int(s));
        debug_assert_eq!(self.mul(&root, &root), self.from_int(m));
        Some(root)
    }

    /// The quadratic Gauss sum `Σ (a/p) ζ_p^a`, a square root of `p* = ±p`.
    fn gauss_sum(&self, p: u64) -> Option<CyclotomicNumber> {
        let z = self.root_of_unity(p)?;
        let mut acc = self.zero();
        for a in 1..p {
            let term = self.pow(&z, a);
            if crate::field::pow_mod(a, (p - 1) / 2, p) == 1 {
                acc = self.add(&acc, &term);
            } else {
                acc = self.sub(&acc, &term);
            }
        }
        Some(acc)
    }

    pub fn parse(&self, s: &str) -> Result<CyclotomicNumber> {
        let e = expr::parse(s)?;
        e.eval(
            self,
            &|sym| {
                let m = expr::root_of_unity_order(sym).ok_or_else(|| Error::Parse(format!("unknown symbol {sym:?}")))?;
                self.root_of_unity(m)
                    .ok_or_else(|| Error::TowerMismatch(format!("ζ{m} does not lie in Q(ζ{})", self.n)))
            },
            &|m| {
                self.sqrt_integer(m)
                    .ok_or_else(|| Error::TowerMismatch(format!("sqrt({m}) does not lie in Q(ζ{})", self.n)))
            },
        )
    }

    /// Prints `Σ c_j zetaN^j` with rational coefficients.
    pub fn format(&self, x: &CyclotomicNumber) -> String {
        let mut out = String::new();
        for (j, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = if j == 0 {
                format_rational(&a)
            } else {
                let z = if j == 1 { format!("zeta{}", self.n) } else { format!("zeta{}^{}", self.n, j) };
                if a.is_one() {
                    z
                } else {
                    format!("{}*{}", format_rational(&a), z)
                }
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Multiplication-by-`x` as a rational matrix on the power basis.
    fn multiplication_matrix(&self, x: &CyclotomicNumber) -> Matrix<Rational> {
        let mut m = linalg::zeros(&Rationals, self.phi, self.phi);
        for j in 0..self.phi {
            let col = self.mul(x, &self.zeta_power(j as i64));
            for i in 0..self.phi {
                m.set(i, j, col.coeffs[i].clone());
            }
        }
        m
    }
}

/// `m = s^2 * core` with `core` squarefree (sign kept in `core`).
pub fn squarefree_decomposition(m: i64) -> (i64, i64) {
    let mut s = 1i64;
    let mut core = m.signum();
    let mut rest = m.unsigned_abs();
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            s *= p as i64;
        }
        if rest % p == 0 {
            rest /= p;
            core *= p as i64;
        }
        p += 1;
    }
    core *= rest as i64;
    (s, core)
}

impl Field for CyclotomicField {
    type Elem = CyclotomicNumber;

    fn zero(&self) -> CyclotomicNumber {
        CyclotomicNumber { n: self.n, coeffs: vec![Rational::zero(); self.phi] }
    }
    fn one(&self) -> CyclotomicNumber {
        self.from_int(1)
    }
    fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { n: self.n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
    fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { n: self.n, coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }
    fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { n: self.n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }
    fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        let mut acc = vec![Rational::zero(); self.n as usize];
        let mut any = false;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                any = true;
                acc[(i + j) % self.n as usize] += x * y;
            }
        }
        if !any {
            return self.zero();
        }
        self.reduce_exponent_vector(&acc)
    }
    fn inv(&self, a: &CyclotomicNumber) -> Option<CyclotomicNumber> {
        if self.is_zero(a) {
            return None;
        }
        if let Some(q) = a.as_rational() {
            return Some(self.from_rational(&q.recip()).unwrap());
        }
        let m = self.multiplication_matrix(a);
        let mut e0 = vec![Rational::zero(); self.phi];
        e0[0] = Rational::one();
        let x = linalg::solve(&Rationals, &m, &e0)?;
        Some(CyclotomicNumber { n: self.n, coeffs: x })
    }
    fn is_zero(&self, a: &CyclotomicNumber) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_int(&self, n: i64) -> CyclotomicNumber {
        self.from_rational(&rat(n)).unwrap()
    }
    fn from_rational(&self, q: &Rational) -> Option<CyclotomicNumber> {
        let mut coeffs = vec![Rational::zero(); self.phi];
        coeffs[0] = q.clone();
        Some(CyclotomicNumber { n: self.n, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_have_the_right_order() {
        let f = CyclotomicField::new(24).unwrap();
        for m in [1u64, 2, 3, 4, 6, 8, 12, 24] {
            let z = f.root_of_unity(m).unwrap();
            assert!(f.is_one(&f.pow(&z, m)));
            for d in 1..m {
                if m % d == 0 {
                    assert!(!f.is_one(&f.pow(&z, d)), "order of ζ{m} divides {d}");
                }
            }
        }
    }

    #[test]
    fn square_roots_in_cyclotomic_fields() {
        let f = CyclotomicField::new(24).unwrap();
        for m in [-1i64, 2, -2, 3, -3, 6, -6, 12, 8] {
            let r = f.sqrt_integer(m).unwrap_or_else(|| panic!("sqrt({m})"));
            assert_eq!(f.mul(&r, &r), f.from_int(m));
        }
        assert!(f.sqrt_integer(5).is_none());
        let g = CyclotomicField::new(5).unwrap();
        let r = g.sqrt_integer(5).unwrap();
        assert_eq!(g.mul(&r, &r), g.from_int(5));
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let f = CyclotomicField::new(12).unwrap();
        let x = f.parse("zeta12^5 - 1/2*zeta12 + 3").unwrap();
        assert_eq!(f.parse(&f.format(&x)).unwrap(), x);
        assert_eq!(f.parse("ζ3^2+1").unwrap(), f.parse("-zeta3").unwrap());
        assert!(f.parse("zeta5").is_err());
    }

    #[test]
    fn lift_commutes_with_multiplication() {
        let small = CyclotomicField::new(3).unwrap();
        let big = CyclotomicField::new(12).unwrap();
        let w = small.root_of_unity(3).unwrap();
        let lw = small.lift(&w, &big).unwrap();
        assert_eq!(lw, big.root_of_unity(3).unwrap());
        assert_eq!(small.lift(&small.mul(&w, &w), &big).unwrap(), big.mul(&lw, &lw));
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(c in proptest::collection::vec(-5i64..5, 4)) {
            let f = CyclotomicField::new(12).unwrap();
            let x = f.from_coeffs(c.iter().map(|&v| rat(v)).collect()).unwrap();
            if !f.is_zero(&x) {
                let xi = f.inv(&x).unwrap();
                prop_assert!(f.is_one(&f.mul(&x, &xi)));
            }
        }

        #[test]
        fn automorphisms_are_multiplicative(a in proptest::collection::vec(-3i64..3, 4), b in proptest::collection::vec(-3i64..3, 4), t in prop::sample::select(vec![1u64, 5, 7, 11])) {
            let f = CyclotomicField::new(12).unwrap();
            let x = f.from_coeffs(a.iter().map(|&v| rat(v)).collect()).unwrap();
            let y = f.from_coeffs(b.iter().map(|&v| rat(v)).collect()).unwrap();
            prop_assert_eq!(f.apply_automorphism(t, &f.mul(&x, &y)), f.mul(&f.apply_automorphism(t, &x), &f.apply_automorphism(t, &y)));
        }
    }
}
