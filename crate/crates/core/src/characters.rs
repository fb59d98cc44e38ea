//! Character tables: Dixon's modular algorithm, exact lifting to `Q(ζ_e)`,
//! class functions, restriction, and ingestion of externally supplied tables.

use std::cmp::Ordering;

use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{is_prime, lcm, pow_mod, rat, Field, PrimeField, Rational};
use crate::groups::{ConjugacyClasses, Group, Subgroup};
use crate::linalg::{self, Matrix};

/// A character table with values in `Q(ζ_N)`; columns follow the group's class order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub field: CyclotomicField,
    pub group_order: usize,
    pub classes: ConjugacyClasses,
    /// `inverse_class[k]` is the class of `g^{-1}` for `g ∈ C_k`.
    pub inverse_class: Vec<usize>,
    pub rows: Vec<Vec<CyclotomicNumber>>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn degree(&self, row: usize) -> Rational {
        self.rows[row][0].as_rational().expect("degree is rational")
    }

    /// `⟨a, b⟩ = (1/|G|) Σ_k |C_k| a(g_k) \overline{b(g_k)}`.
    pub fn inner_product(&self, a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> CyclotomicNumber {
        let f = &self.field;
        let mut acc = f.zero();
        for k in 0..self.num_classes() {
            let term = f.mul(&a[k], &f.complex_conjugate(&b[k]));
            acc = f.add(&acc, &f.mul(&f.from_int(self.classes.size(k) as i64), &term));
        }
        f.mul(&acc, &f.from_rational(&Rational::new(1.into(), (self.group_order as i64).into())).unwrap())
    }

    /// Checks both orthogonality relations exactly.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let f = &self.field;
        let r = self.rows.len();
        if r != self.num_classes() {
            return Err(Error::Internal(format!("{} rows for {} classes", r, self.num_classes())));
        }
        for a in 0..r {
            for b in 0..r {
                let ip = self.inner_product(&self.rows[a], &self.rows[b]);
                let expected = if a == b { f.one() } else { f.zero() };
                if ip != expected {
                    return Err(Error::Internal(format!("row orthogonality fails for rows {a}, {b}")));
                }
            }
        }
        for k in 0..r {
            for l in 0..r {
                let mut acc = f.zero();
                for row in &self.rows {
                    acc = f.add(&acc, &f.mul(&row[k], &f.complex_conjugate(&row[l])));
                }
                let expected = if k == l {
                    f.from_rational(&Rational::new((self.group_order as i64).into(), (self.classes.size(k) as i64).into()))
                        .unwrap()
                } else {
                    f.zero()
                };
                if acc != expected {
                    return Err(Error::Internal(format!("column orthogonality fails for classes {k}, {l}")));
                }
            }
        }
        Ok(())
    }

    /// Rows formatted as strings.
    pub fn formatted_rows(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|x| self.field.format(x)).collect()).collect()
    }

    /// Re-expresses all values in `Q(ζ_M)` for a multiple `M` of the current conductor.
    pub fn lifted(&self, big: &CyclotomicField) -> Result<CharacterTable> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| self.field.lift(x, big)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CharacterTable { field: big.clone(), rows, ..self.clone() })
    }

    pub fn to_report(&self, group: &Group) -> TableReport {
        TableReport {
            group_order: self.group_order,
            classes: (0..self.num_classes())
                .map(|k| {
                    let rep = self.classes.rep(k);
                    ClassInfo {
                        representative: group.perm(rep).map(|p| p.iter().map(|x| x + 1).collect()),
                        element: rep,
                        size: self.classes.size(k),
                        order: group.element_order(rep),
                    }
                })
                .collect(),
            rows: self.formatted_rows(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub representative: Option<Vec<usize>>,
    pub element: usize,
    pub size: usize,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub group_order: usize,
    pub classes: Vec<ClassInfo>,
    pub rows: Vec<Vec<String>>,
}

pub fn inverse_classes(g: &Group, classes: &ConjugacyClasses) -> Vec<usize> {
    (0..classes.len()).map(|k| classes.class_of[g.inv(classes.rep(k))]).collect()
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√n`.
pub fn dixon_prime(e: u64, n: u64) -> u64 {
    let mut p = e + 1;
    loop {
        if is_prime(p) && (p * p) > 4 * n {
            return p;
        }
        p += e;
    }
}

fn primitive_root_of_unity_mod(p: u64, e: u64) -> u64 {
    let f = PrimeField::new(p).unwrap();
    for g in 2..p {
        let z = pow_mod(g, (p - 1) / e, p);
        if (1..e).all(|d| e % d != 0 || f.pow(&z, d) != 1) {
            return z;
        }
    }
    1
}

/// Class multiplication coefficients `a[i][j][k] = #{x ∈ C_i : x^{-1} z_k ∈ C_j}`.
fn class_coefficients(g: &Group, classes: &ConjugacyClasses) -> Vec<Vec<Vec<u64>>> {
    let r = classes.len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let z = classes.rep(k);
        for (i, ci) in classes.classes.iter().enumerate() {
            for &x in ci {
                let y = g.mul(g.inv(x), z);
                a[i][classes.class_of[y]][k] += 1;
            }
        }
    }
    a
}

/// Computes the irreducible characters of `g` by Dixon's method and verifies them.
pub fn dixon(g: &Group) -> Result<CharacterTable> {
    let n = g.order() as u64;
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let e = g.exponent();
    let p = dixon_prime(e, n);
    let fp = PrimeField::new(p)?;
    let coeffs = class_coefficients(g, &classes);

    // simultaneous eigenspaces of M_j, (M_j)_{ik} = a_{ijk}
    let mut spaces: Vec<Matrix<u64>> = vec![linalg::identity(&fp, r)];
    for j in 1..r {
        if spaces.iter().all(|s| s.cols() == 1) {
            break;
        }
        let mj = Matrix::from_vec(r, r, (0..r).flat_map(|i| (0..r).map(move |k| (i, k))).map(|(i, k)| coeffs[i][j][k] % p).collect());
        let mut next = Vec::new();
        for s in spaces {
            if s.cols() == 1 {
                next.push(s);
                continue;
            }
            let ms = linalg::mul(&fp, &mj, &s);
            let mut found = 0;
            for lambda in 0..p {
                let shifted = linalg::sub(&fp, &ms, &linalg::scale(&fp, &lambda, &s));
                let ns = linalg::nullspace(&fp, &shifted);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let cols = ns.len();
                let coeff = Matrix::from_vec(s.cols(), cols, (0..s.cols()).flat_map(|i| ns.iter().map(move |v| v[i])).collect());
                next.push(linalg::mul(&fp, &s, &coeff));
                if found == s.cols() {
                    break;
                }
            }
            if found != s.cols() {
                return Err(Error::Internal("class matrix is not diagonalisable modulo p".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.cols() != 1) {
        return Err(Error::Internal("eigenspaces did not separate the characters".into()));
    }

    let inv_class = inverse_classes(g, &classes);
    let z = primitive_root_of_unity_mod(p, e);
    let field = CyclotomicField::new(e)?;
    let max_degree = (n as f64).sqrt().floor() as u64;
    let mut rows = Vec::with_capacity(r);
    for s in spaces {
        let v0 = *s.get(0, 0);
        let v0i = fp.inv(&v0).ok_or_else(|| Error::Internal("central character vanishes at the identity".into()))?;
        let omega: Vec<u64> = (0..r).map(|k| fp.mul(s.get(k, 0), &v0i)).collect();
        let mut sum = 0u64;
        for k in 0..r {
            let t = fp.mul(&fp.mul(&omega[k], &omega[inv_class[k]]), &fp.inv(&(classes.size(k) as u64 % p)).unwrap());
            sum = fp.add(&sum, &t);
        }
        let d2 = fp.mul(&(n % p), &fp.inv(&sum).ok_or_else(|| Error::Internal("degree sum vanishes mod p".into()))?);
        let d = (1..=max_degree)
            .find(|&d| (d * d) % p == d2)
            .ok_or_else(|| Error::Internal("no admissible degree".into()))?;
        let chi_p: Vec<u64> = (0..r)
            .map(|k| fp.mul(&fp.mul(&omega[k], &d), &fp.inv(&(classes.size(k) as u64 % p)).unwrap()))
            .collect();
        // lift: multiplicities of each e-th root of unity as an eigenvalue
        let e_inv = fp.inv(&(e % p)).unwrap();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let rep = classes.rep(k);
            let mut value = field.zero();
            let mut total = 0u64;
            for jexp in 0..e {
                let mut m = 0u64;
                for l in 0..e {
                    let cls = classes.class_of[g.pow(rep, l as i64)];
                    let zpow = pow_mod(z, (e - (jexp * l) % e) % e, p);
                    m = fp.add(&m, &fp.mul(&chi_p[cls], &zpow));
                }
                let m = fp.mul(&m, &e_inv);
                if m > d {
                    return Err(Error::Internal(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                total += m;
                if m > 0 {
                    value = field.add(&value, &field.mul(&field.from_int(m as i64), &field.zeta_power(jexp as i64)));
                }
            }
            if total != d {
                return Err(Error::Internal("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(value);
        }
        rows.push(row);
    }
    let mut table = CharacterTable { field, group_order: g.order(), classes, inverse_class: inv_class, rows };
    sort_rows(&mut table);
    table.verify_orthogonality()?;
    Ok(table)
}

/// Degree ascending (trivial row first), then values descending lexicographically.
pub fn sort_rows(t: &mut CharacterTable) {
    let key_cmp = |a: &Vec<CyclotomicNumber>, b: &Vec<CyclotomicNumber>| -> Ordering {
        let da = a[0].as_rational().unwrap();
        let db = b[0].as_rational().unwrap();
        let triv = |r: &Vec<CyclotomicNumber>| !r.iter().all(|x| x.as_rational() == Some(rat(1)));
        da.cmp(&db)
            .then(triv(a).cmp(&triv(b)))
            .then_with(|| {
                for (x, y) in a.iter().zip(b) {
                    for (cx, cy) in x.coeffs().iter().zip(y.coeffs()) {
                        match cy.cmp(cx) {
                            Ordering::Equal => continue,
                            o => return o,
                        }
                    }
                }
                Ordering::Equal
            })
    };
    t.rows.sort_by(key_cmp);
}

/// Restricts a class function on `G` to the subgroup `H` (columns in `H`'s class order).
pub fn restrict(values: &[CyclotomicNumber], g_classes: &ConjugacyClasses, h: &Subgroup, h_classes: &ConjugacyClasses) -> Vec<CyclotomicNumber> {
    (0..h_classes.len())
        .map(|k| values[g_classes.class_of[h.parent(h_classes.rep(k))]].clone())
        .collect()
}

// ---------------------------------------------------------------- ingestion

/// JSON form of a character table: class representatives as 1-indexed one-line
/// permutations and rows of value strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub classes: Vec<Vec<usize>>,
    pub rows: Vec<Vec<String>>,
}

impl TableSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("table: {e}")))
    }
}

/// Parses a supplied table against `g`. Rows may be reducible; nothing beyond the shape is checked.
pub fn ingest_table(spec: &TableSpec, g: &Group) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes();
    let r = classes.len();
    if spec.classes.len() != r {
        return Err(Error::InvalidInput(format!("table lists {} classes, the group has {r}", spec.classes.len())));
    }
    let mut column_class = Vec::with_capacity(r);
    for rep in &spec.classes {
        let perm: Vec<usize> = rep
            .iter()
            .map(|&x| x.checked_sub(1).ok_or_else(|| Error::InvalidInput("permutations are 1-indexed".into())))
            .collect::<Result<_>>()?;
        let el = g
            .find_perm(&perm)
            .ok_or_else(|| Error::InvalidInput(format!("class representative {rep:?} is not in the group")))?;
        column_class.push(classes.class_of[el]);
    }
    let mut sorted = column_class.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != r {
        return Err(Error::InvalidInput("two columns name the same class".into()));
    }
    let mut parsed = Vec::new();
    let mut conductor = g.exponent();
    for row in &spec.rows {
        if row.len() != r {
            return Err(Error::InvalidInput(format!("row has {} entries, expected {r}", row.len())));
        }
        let mut exprs = Vec::new();
        for s in row {
            let e = expr::parse(s)?;
            let mut syms = vec![];
            let mut roots = vec![];
            e.atoms(&mut syms, &mut roots);
            for sym in syms {
                let m = expr::root_of_unity_order(&sym).ok_or_else(|| Error::Parse(format!("unknown symbol {sym:?}")))?;
                conductor = lcm(conductor, m);
            }
            for m in roots {
                let (_, core) = crate::cyclotomic::squarefree_decomposition(m);
                let disc = if core.rem_euclid(4) == 1 { core.unsigned_abs() } else { 4 * core.unsigned_abs() };
                conductor = lcm(conductor, disc.max(1));
            }
            exprs.push(s.clone());
        }
        parsed.push(exprs);
    }
    let field = CyclotomicField::new(conductor)?;
    let mut rows = Vec::new();
    for row in parsed {
        let mut values = vec![field.zero(); r];
        for (col, s) in row.iter().enumerate() {
            values[column_class[col]] = field.parse(s)?;
        }
        rows.push(values);
    }
    let inverse_class = inverse_classes(g, &classes);
    Ok(CharacterTable { field, group_order: g.order(), classes, inverse_class, rows })
}

/// Validates a table of characters of `K`-representations (rows may be reducible over `L`):
/// values rational, inner products integral and orthogonal, and the rows account for the
/// whole group algebra: `Σ ψ(1)^2 / ⟨ψ,ψ⟩ = |G|`.
pub fn validate_rational_table(t: &CharacterTable) -> Result<()> {
    let f = &t.field;
    let mut total = Rational::zero();
    for (i, a) in t.rows.iter().enumerate() {
        if a.iter().any(|x| x.as_rational().is_none()) {
            return Err(Error::InvalidInput(format!("row {i} has irrational values")));
        }
        for (j, b) in t.rows.iter().enumerate() {
            let ip = t.inner_product(a, b).as_rational().ok_or_else(|| Error::InvalidInput("irrational inner product".into()))?;
            if !ip.is_integer() || ip.is_negative() {
                return Err(Error::InvalidInput(format!("row {i}: ⟨ψ_{i}, ψ_{j}⟩ = {ip} is not a nonnegative integer")));
            }
            if i != j && !ip.is_zero() {
                return Err(Error::InvalidInput(format!("row {i} is not orthogonal to row {j}")));
            }
            if i == j {
                if ip.is_zero() {
                    return Err(Error::InvalidInput(format!("row {i} is zero")));
                }
                let d = a[0].as_rational().unwrap();
                if !d.is_integer() || !d.is_positive() {
                    return Err(Error::InvalidInput(format!("row {i} has degree {d}")));
                }
                total += &d * &d / ip;
            }
        }
    }
    let _ = f;
    if total != Rational::from_integer((t.group_order as i64).into()) {
        return Err(Error::InvalidInput(format!("rows account for {total} of |G| = {}", t.group_order)));
    }
    Ok(())
}

/// Built-in rational character tables, defined by element order so they apply to any
/// permutation presentation of the group.
pub fn builtin_rational_table(name: &str, g: &Group) -> Result<CharacterTable> {
    let by_order: &[(usize, [i64; 3])] = match name {
        "S3" => &[(1, [1, 1, 2]), (2, [1, -1, 0]), (3, [1, 1, -1])],
        "C4" => &[(1, [1, 1, 2]), (2, [1, 1, -2]), (4, [1, -1, 0])],
        _ => return Err(Error::InvalidInput(format!("no builtin rational table {name:?}"))),
    };
    let expected_order = if name == "S3" { 6 } else { 4 };
    if g.order() != expected_order || (name == "C4" && !g.is_cyclic()) || (name == "S3" && g.is_abelian()) {
        return Err(Error::InvalidInput(format!("builtin table {name} does not match a group of order {}", g.order())));
    }
    let classes = g.conjugacy_classes();
    let field = CyclotomicField::new(1)?;
    let rows = (0..3)
        .map(|i| {
            (0..classes.len())
                .map(|k| {
                    let o = g.element_order(classes.rep(k));
                    let v = by_order.iter().find(|(ord, _)| *ord == o).map(|(_, v)| v[i]).unwrap();
                    field.from_int(v)
                })
                .collect()
        })
        .collect();
    let inverse_class = inverse_classes(g, &classes);
    let t = CharacterTable { field, group_order: g.order(), classes, inverse_class, rows };
    validate_rational_table(&t)?;
    Ok(t)
}

/// Picks the builtin rational table matching `g`, if any.
pub fn detect_builtin_rational_table(g: &Group) -> Option<(&'static str, CharacterTable)> {
    for name in ["S3", "C4"] {
        if let Ok(t) = builtin_rational_table(name, g) {
            return Some((name, t));
        }
    }
    None
}

/// The rational integer value of a cyclotomic number, if it is one.
pub fn as_integer(x: &CyclotomicNumber) -> Option<i64> {
    let q = x.as_rational()?;
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{alternating4, builtin, cyclic, dihedral, quaternion, symmetric};

    fn ints(t: &CharacterTable) -> Vec<Vec<Option<i64>>> {
        t.rows.iter().map(|r| r.iter().map(as_integer).collect()).collect()
    }

    #[test]
    fn s3_table() {
        let t = dixon(&symmetric(3)).unwrap();
        let i = |v: &[i64]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
        assert_eq!(ints(&t), vec![i(&[1, 1, 1]), i(&[1, -1, 1]), i(&[2, 0, -1])]);
    }

    #[test]
    fn q8_and_d4_tables_differ_only_in_indicators() {
        let q = dixon(&quaternion()).unwrap();
        let d = dixon(&dihedral(4)).unwrap();
        assert_eq!(q.rows.len(), 5);
        assert_eq!(d.rows.len(), 5);
        let last = ints(&q).pop().unwrap();
        // classes are ordered by least element; the central involution is a distinct class
        assert_eq!(last.iter().filter(|x| **x == Some(0)).count(), 3);
        assert_eq!(last[0], Some(2));
        assert!(last.contains(&Some(-2)));
    }

    #[test]
    fn cyclic_tables_are_roots_of_unity() {
        for n in [1usize, 2, 3, 5, 8, 12] {
            let g = cyclic(n);
            let t = dixon(&g).unwrap();
            assert_eq!(t.rows.len(), n);
            for row in &t.rows {
                for x in row {
                    assert!(t.field.is_one(&t.field.pow(x, n as u64)));
                }
            }
        }
    }

    #[test]
    fn larger_groups_pass_orthogonality() {
        for name in ["A4", "S4", "SL(2,3)", "Dic3", "D6", "Q8xC2"] {
            let g = builtin(name).unwrap();
            let t = dixon(&g).unwrap();
            let degrees: Rational = t.rows.iter().map(|r| { let d = r[0].as_rational().unwrap(); &d * &d }).sum();
            assert_eq!(degrees, rat(g.order() as i64), "{name}");
        }
        assert_eq!(dixon(&alternating4()).unwrap().field.conductor(), 6);
    }

    #[test]
    fn rational_tables() {
        let g = symmetric(3);
        let t = builtin_rational_table("S3", &g).unwrap();
        validate_rational_table(&t).unwrap();
        assert!(builtin_rational_table("C4", &g).is_err());
        let c4 = cyclic(4);
        let t4 = builtin_rational_table("C4", &c4).unwrap();
        assert_eq!(t4.inner_product(&t4.rows[2], &t4.rows[2]), t4.field.from_int(2));
    }

    #[test]
    fn ingestion_reorders_columns_and_rejects_bad_tables() {
        let g = symmetric(3);
        let spec = TableSpec {
            classes: vec![vec![2, 3, 1], vec![1, 2, 3], vec![2, 1, 3]],
            rows: vec![
                vec!["1".into(), "1".into(), "1".into()],
                vec!["1".into(), "1".into(), "-1".into()],
                vec!["-1".into(), "2".into(), "0".into()],
            ],
        };
        let t = ingest_table(&spec, &g).unwrap();
        validate_rational_table(&t).unwrap();
        assert_eq!(as_integer(&t.rows[2][0]), Some(2));
        let mut bad = spec.clone();
        bad.rows[2] = vec!["-1".into(), "1".into(), "0".into()];
        let t = ingest_table(&bad, &g).unwrap();
        assert!(validate_rational_table(&t).is_err());
        let mut wrong = spec;
        wrong.classes[0] = vec![1, 2, 3];
        assert!(ingest_table(&wrong, &g).is_err());
    }
}
