//! Quadratic fields `Q(√d)` with `d` squarefree.

use num::{One, Signed, Zero};

use crate::cyclotomic::squarefree_decomposition;
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{format_rational, rat, Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    d: i64,
    pub a: Rational,
    pub b: Rational,
}

impl QuadraticNumber {
    pub fn radicand(&self) -> i64 {
        self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    /// `Q(√d)`; `d` is replaced by its squarefree kernel and must not be a square.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("d = 0 does not define a quadratic field".into()));
        }
        let (_, core) = squarefree_decomposition(d);
        if core == 1 {
            return Err(Error::InvalidInput(format!("d = {d} is a perfect square")));
        }
        Ok(QuadraticField { d: core })
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn element(&self, a: Rational, b: Rational) -> QuadraticNumber {
        QuadraticNumber { d: self.d, a, b }
    }

    pub fn sqrt_d(&self) -> QuadraticNumber {
        self.element(Rational::zero(), Rational::one())
    }

    pub fn conjugate(&self, x: &QuadraticNumber) -> QuadraticNumber {
        self.element(x.a.clone(), -x.b.clone())
    }

    pub fn norm(&self, x: &QuadraticNumber) -> Rational {
        &x.a * &x.a - rat(self.d) * &x.b * &x.b
    }

    pub fn check(&self, x: &QuadraticNumber) -> Result<()> {
        if x.d != self.d {
            return Err(Error::TowerMismatch(format!("element of Q(√{}) used in Q(√{})", x.d, self.d)));
        }
        Ok(())
    }

    /// A square root of the integer `m` when `m / d` or `m` is a rational square.
    pub fn sqrt_integer(&self, m: i64) -> Option<QuadraticNumber> {
        if m == 0 {
            return Some(self.zero());
        }
        let (s, core) = squarefree_decomposition(m);
        if core == 1 {
            Some(self.from_int(s))
        } else if core == self.d {
            Some(self.element(Rational::zero(), rat(s)))
        } else {
            None
        }
    }

    pub fn parse(&self, s: &str) -> Result<QuadraticNumber> {
        let e = expr::parse(s)?;
        e.eval(
            self,
            &|sym| {
                let m = expr::root_of_unity_order(sym).ok_or_else(|| Error::Parse(format!("unknown symbol {sym:?}")))?;
                let r = match m {
                    1 => Some(self.one()),
                    2 => Some(self.from_int(-1)),
                    4 if self.d == -1 => Some(self.sqrt_d()),
                    3 if self.d == -3 => Some(self.element(crate::field::ratio(-1, 2), crate::field::ratio(1, 2))),
                    6 if self.d == -3 => Some(self.element(crate::field::ratio(1, 2), crate::field::ratio(1, 2))),
                    _ => None,
                };
                r.ok_or_else(|| Error::TowerMismatch(format!("ζ{m} does not lie in Q(√{})", self.d)))
            },
            &|m| self.sqrt_integer(m).ok_or_else(|| Error::TowerMismatch(format!("sqrt({m}) does not lie in Q(√{})", self.d))),
        )
    }

    /// Prints `a + b*sqrt(d)`.
    pub fn format(&self, x: &QuadraticNumber) -> String {
        let root = format!("sqrt({})", self.d);
        let b_part = |b: &Rational| {
            if b.abs().is_one() {
                root.clone()
            } else {
                format!("{}*{}", format_rational(&b.abs()), root)
            }
        };
        match (x.a.is_zero(), x.b.is_zero()) {
            (_, true) => format_rational(&x.a),
            (true, false) => format!("{}{}", if x.b.is_negative() { "-" } else { "" }, b_part(&x.b)),
            (false, false) => {
                format!("{}{}{}", format_rational(&x.a), if x.b.is_negative() { "-" } else { "+" }, b_part(&x.b))
            }
        }
    }
}

impl Field for QuadraticField {
    type Elem = QuadraticNumber;

    fn zero(&self) -> QuadraticNumber {
        self.element(Rational::zero(), Rational::zero())
    }
    fn one(&self) -> QuadraticNumber {
        self.element(Rational::one(), Rational::zero())
    }
    fn add(&self, x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
        self.element(&x.a + &y.a, &x.b + &y.b)
    }
    fn neg(&self, x: &QuadraticNumber) -> QuadraticNumber {
        self.element(-x.a.clone(), -x.b.clone())
    }
    fn sub(&self, x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
        self.element(&x.a - &y.a, &x.b - &y.b)
    }
    fn mul(&self, x: &QuadraticNumber, y: &QuadraticNumber) -> QuadraticNumber {
        let d = rat(self.d);
        self.element(&x.a * &y.a + d * &x.b * &y.b, &x.a * &y.b + &x.b * &y.a)
    }
    fn inv(&self, x: &QuadraticNumber) -> Option<QuadraticNumber> {
        let n = self.norm(x);
        if n.is_zero() {
            return None;
        }
        Some(self.element(&x.a / &n, -&x.b / &n))
    }
    fn is_zero(&self, x: &QuadraticNumber) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_int(&self, n: i64) -> QuadraticNumber {
        self.element(rat(n), Rational::zero())
    }
    fn from_rational(&self, q: &Rational) -> Option<QuadraticNumber> {
        Some(self.element(q.clone(), Rational::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;
    use proptest::prelude::*;

    #[test]
    fn kernel_normalisation() {
        assert_eq!(QuadraticField::new(12).unwrap().radicand(), 3);
        assert_eq!(QuadraticField::new(-4).unwrap().radicand(), -1);
        assert!(QuadraticField::new(9).is_err());
        assert!(QuadraticField::new(0).is_err());
    }

    #[test]
    fn parse_format() {
        let f = QuadraticField::new(-3).unwrap();
        let w = f.parse("-1/2 + 1/2*sqrt(-3)").unwrap();
        assert!(f.is_one(&f.pow(&w, 3)));
        assert_eq!(f.parse("omega").unwrap(), w);
        assert_eq!(f.parse(&f.format(&w)).unwrap(), w);
        assert_eq!(f.format(&f.sqrt_d()), "sqrt(-3)");
        assert_eq!(f.parse("sqrt(-12)").unwrap(), f.element(rat(0), rat(2)));
        assert!(f.parse("sqrt(2)").is_err());
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in -20i64..20, b in -20i64..20, c in -20i64..20, e in 1i64..7) {
            let f = QuadraticField::new(7).unwrap();
            let x = f.element(rat(a), ratio(b, e));
            let y = f.element(rat(c), rat(1));
            prop_assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
        }
    }
}
