//! Dense matrices over an arbitrary [`Field`] and exact Gaussian elimination.

use serde::Serialize;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Matrix { rows, cols, data: vec![e; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.data[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<F2, G: FnMut(&E) -> F2>(&self, f: G) -> Matrix<F2> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn scalar<F: Field>(f: &F, n: usize, c: &F::Elem) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, c.clone());
    }
    m
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if f.is_zero(bkj) {
                    continue;
                }
                let v = f.add(out.get(i, j), &f.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect() }
}

pub fn sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect() }
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(c, x))
}

pub fn is_zero<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn trace<F: Field>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    (0..a.rows.min(a.cols)).fold(f.zero(), |acc, i| f.add(&acc, a.get(i, i)))
}

pub fn kronecker<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let mut out = zeros(f, a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, f.mul(a.get(i, j), b.get(k, l)));
                }
            }
        }
    }
    out
}

pub fn block_diag<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let mut out = zeros(f, a.rows + b.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
        }
    }
    out
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// Basis of `{x : a x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, a);
    let n = a.cols;
    let mut is_pivot = vec![None; n];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![f.zero(); n];
        v[free] = f.one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows;
    if n == 0 {
        return Some(a.clone());
    }
    let mut aug = zeros(f, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n + i, f.one());
    }
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, r.get(i, n + j).clone());
        }
    }
    Some(out)
}

pub fn is_invertible<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.is_square() && rank(f, a) == a.rows
}

/// Solves `a x = b` for a single right-hand side, if consistent.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut aug = zeros(f, a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let (r, pivots) = rref(f, &aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![f.zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, n).clone();
    }
    Some(x)
}

/// Extracts a maximal linearly independent subfamily (greedy, order-preserving).
pub fn independent_subset<F: Field>(f: &F, vectors: &[Vec<F::Elem>]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut echelon: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (pc, row) in &echelon {
            if !f.is_zero(&w[*pc]) {
                let c = w[*pc].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi = f.sub(wi, &f.mul(&c, ri));
                }
            }
        }
        if let Some(pc) = w.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&w[pc]).unwrap();
            let w: Vec<_> = w.iter().map(|x| f.mul(x, &inv)).collect();
            for (_, row) in echelon.iter_mut() {
                if !f.is_zero(&row[pc]) {
                    let c = row[pc].clone();
                    for (ri, wi) in row.iter_mut().zip(&w) {
                        *ri = f.sub(ri, &f.mul(&c, wi));
                    }
                }
            }
            echelon.push((pc, w));
            chosen.push(idx);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, PrimeField, Rationals};
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Matrix<crate::field::Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn inverse_of_small_matrix() {
        let q = Rationals;
        let a = qm(&[&[2, 1], &[7, 4]]);
        let ai = inverse(&q, &a).unwrap();
        assert_eq!(mul(&q, &a, &ai), identity(&q, 2));
        assert!(inverse(&q, &qm(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let q = Rationals;
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&q, &a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::from_vec(3, 1, v);
            assert!(is_zero(&q, &mul(&q, &a, &col)));
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(0u64..5, 12)) {
            let f = PrimeField::new(5).unwrap();
            let a = Matrix::from_vec(3, 4, entries);
            prop_assert_eq!(rank(&f, &a) + nullspace(&f, &a).len(), 4);
        }

        #[test]
        fn inverse_roundtrip(entries in proptest::collection::vec(0u64..7, 9)) {
            let f = PrimeField::new(7).unwrap();
            let a = Matrix::from_vec(3, 3, entries);
            if let Some(ai) = inverse(&f, &a) {
                prop_assert_eq!(mul(&f, &ai, &a), identity(&f, 3));
            } else {
                prop_assert!(rank(&f, &a) < 3);
            }
        }
    }
}
