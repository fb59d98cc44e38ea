//! Finite groups as multiplication tables, with the permutation data they came from.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::lcm;

pub const MAX_ORDER: usize = 128;
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    /// One-line images (0-indexed) of each element, for permutation groups.
    perms: Option<Vec<Vec<usize>>>,
}

/// Conjugacy classes ordered by least element; the least element is the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn rep(&self, k: usize) -> usize {
        self.classes[k][0]
    }

    pub fn size(&self, k: usize) -> usize {
        self.classes[k].len()
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (ab)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

impl Group {
    /// Closure of `gens` under `mul`, breadth first from `identity`.
    /// Returns the group and its elements in index order.
    pub fn from_closure<T, F>(gens: &[T], identity: T, mul: F) -> Result<(Group, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= MAX_ORDER {
                        return Err(Error::InvalidInput(format!("group order exceeds {MAX_ORDER}")));
                    }
                    index.insert(x.clone(), elems.len());
                    elems.push(x);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&elems[a], &elems[b])];
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let g = Group::from_table_unchecked(n, table, generators, None);
        Ok((g, elems))
    }

    fn from_table_unchecked(n: usize, table: Vec<usize>, generators: Vec<usize>, perms: Option<Vec<Vec<usize>>>) -> Group {
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("inverse")).collect();
        Group { n, table, inverses, generators, perms }
    }

    /// Permutation group generated by one-line images (0-indexed).
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Group> {
        let degree = gens.first().map_or(1, |g| g.len());
        if degree > MAX_DEGREE {
            return Err(Error::InvalidInput(format!("permutation degree {degree} exceeds {MAX_DEGREE}")));
        }
        for g in gens {
            if g.len() != degree {
                return Err(Error::InvalidInput("generators have different degrees".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidInput(format!("{:?} is not a permutation", g)));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let (mut g, elems) = Group::from_closure(gens, id, |a, b| compose(a, b))?;
        g.perms = Some(elems);
        Ok(g)
    }

    /// Validates a Cayley table whose element 0 is the identity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Group> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("malformed Cayley table".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidInput("element 0 is not the identity".into()));
            }
            let mut row = table[a].clone();
            row.sort_unstable();
            if row != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidInput("table rows are not permutations".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidInput("multiplication is not associative".into()));
                    }
                }
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let generators = (1..n).collect();
        let mut g = Group::from_table_unchecked(n, flat, generators, None);
        g.generators = g.minimal_generators();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g h g^{-1}`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
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

    pub fn exponent(&self) -> u64 {
        (0..self.n).fold(1, |acc, a| lcm(acc, self.element_order(a) as u64))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn perm(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p[0].len())
    }

    pub fn find_perm(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|a| self.element_order(a) == self.n)
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut elems = vec![0];
        let mut in_set = vec![false; self.n];
        in_set[0] = true;
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let x = self.mul(elems[i], g);
                if !in_set[x] {
                    in_set[x] = true;
                    elems.push(x);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// A small generating set, chosen greedily by index.
    pub fn minimal_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for a in 1..self.n {
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure(&gens);
            }
            if span.len() == self.n {
                break;
            }
        }
        gens
    }

    /// Classes ordered by (element order, size, least element), so the identity comes first.
    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let mut seen = vec![false; self.n];
        let mut classes = Vec::new();
        for a in 0..self.n {
            if seen[a] {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.n).map(|g| self.conj(g, a)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &x in &cls {
                seen[x] = true;
            }
            classes.push(cls);
        }
        classes.sort_by_key(|c| (self.element_order(c[0]), c.len(), c[0]));
        let mut class_of = vec![0; self.n];
        for (k, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = k;
            }
        }
        ConjugacyClasses { classes, class_of }
    }

    pub fn is_normal(&self, elements: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in elements {
            member[x] = true;
        }
        elements.iter().all(|&h| (0..self.n).all(|g| member[self.conj(g, h)]))
    }

    /// The subgroup on a set of elements closed under multiplication.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::InvalidInput("subgroup must contain the identity".into()));
        }
        let mut local_of = vec![None; self.n];
        for (i, &x) in elements.iter().enumerate() {
            local_of[x] = Some(i);
        }
        let m = elements.len();
        let mut table = vec![0; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                table[i * m + j] = local_of[self.mul(a, b)]
                    .ok_or_else(|| Error::InvalidInput("element set is not closed under multiplication".into()))?;
            }
        }
        let perms = self.perms.as_ref().map(|p| elements.iter().map(|&x| p[x].clone()).collect());
        let mut group = Group::from_table_unchecked(m, table, vec![], perms);
        group.generators = group.minimal_generators();
        Ok(Subgroup { elements, local_of, group })
    }

    /// All subgroups of index `k` that are normal, each as a sorted element list.
    pub fn normal_subgroups_of_index(&self, k: usize) -> Vec<Vec<usize>> {
        if k == 0 || self.n % k != 0 {
            return vec![];
        }
        let target = self.n / k;
        let mut found: Vec<Vec<usize>> = Vec::new();
        // every subgroup is generated by at most log2(n) elements; search pairs and triples
        let cands: Vec<Vec<usize>> = {
            let mut v = vec![vec![0]];
            for a in 1..self.n {
                v.push(self.closure(&[a]));
            }
            v
        };
        let mut frontier = cands.clone();
        for _ in 0..4 {
            let mut next = Vec::new();
            for s in &frontier {
                if s.len() == target && self.is_normal(s) && !found.contains(s) {
                    found.push(s.clone());
                }
                if s.len() < target {
                    for c in &cands {
                        let mut gens = s.clone();
                        gens.extend(c);
                        let t = self.closure(&gens);
                        if t.len() <= target && target % t.len() == 0 && !next.contains(&t) {
                            next.push(t);
                        }
                    }
                }
            }
            frontier = next;
        }
        found.sort();
        found
    }

    pub fn direct_product(a: &Group, b: &Group) -> Result<Group> {
        let gens: Vec<(usize, usize)> = a
            .generators
            .iter()
            .map(|&x| (x, 0))
            .chain(b.generators.iter().map(|&y| (0, y)))
            .collect();
        let (g, _) = Group::from_closure(&gens, (0, 0), |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1)))?;
        Ok(g)
    }
}

/// A subgroup with its own table and the index maps to the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    /// Parent indices, sorted; local index `i` is `elements[i]`.
    pub elements: Vec<usize>,
    pub local_of: Vec<Option<usize>>,
    pub group: Group,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.local_of[g].is_some()
    }

    pub fn local(&self, g: usize) -> usize {
        self.local_of[g].expect("element of the subgroup")
    }

    pub fn parent(&self, h: usize) -> usize {
        self.elements[h]
    }
}

// ---------------------------------------------------------------- constructors

fn perm_group(gens: Vec<Vec<usize>>) -> Group {
    Group::from_permutations(&gens).expect("standard group")
}

pub fn cyclic(n: usize) -> Group {
    let n = n.max(1);
    perm_group(vec![(0..n).map(|i| (i + 1) % n).collect()])
}

/// Dihedral group of order `2n` acting on `n` points (`n >= 3`), or the Klein group for `n = 2`.
pub fn dihedral(n: usize) -> Group {
    if n == 2 {
        return perm_group(vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
    }
    let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    perm_group(vec![s, r])
}

/// `S_n` generated by a transposition and an `n`-cycle, transposition first.
pub fn symmetric(n: usize) -> Group {
    if n <= 1 {
        return cyclic(1);
    }
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    perm_group(vec![t, c])
}

pub fn alternating4() -> Group {
    perm_group(vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

type M2 = [[u8; 2]; 2];

/// A matrix group over `F_3` as permutations of the eight nonzero vectors.
fn f3_matrix_group(gens: &[M2]) -> Group {
    let vecs: Vec<[u8; 2]> = (0..9).filter(|&i| i != 0).map(|i| [(i % 3) as u8, (i / 3) as u8]).collect();
    let idx = |v: [u8; 2]| vecs.iter().position(|&w| w == v).unwrap();
    let perms: Vec<Vec<usize>> = gens
        .iter()
        .map(|m| {
            vecs.iter()
                .map(|v| {
                    let w = [
                        ((m[0][0] as u32 * v[0] as u32 + m[0][1] as u32 * v[1] as u32) % 3) as u8,
                        ((m[1][0] as u32 * v[0] as u32 + m[1][1] as u32 * v[1] as u32) % 3) as u8,
                    ];
                    idx(w)
                })
                .collect()
        })
        .collect();
    perm_group(perms)
}

/// The quaternion group of order 8, generated by `i` and `j`.
pub fn quaternion() -> Group {
    f3_matrix_group(&[[[0, 2], [1, 0]], [[1, 1], [1, 2]]])
}

/// `SL(2, 3)`, of order 24.
pub fn sl2_3() -> Group {
    f3_matrix_group(&[[[0, 2], [1, 0]], [[1, 1], [1, 2]], [[1, 1], [0, 1]]])
}

/// The dicyclic group of order `4m` as the closure of `a` (order `2m`) and `x` with
/// `x^2 = a^m`, `x a x^{-1} = a^{-1}`.
pub fn dicyclic(m: usize) -> Group {
    let n2 = 2 * m;
    // elements (k, e) meaning a^k x^e
    let mul = |p: &(usize, usize), q: &(usize, usize)| -> (usize, usize) {
        let (k1, e1) = *p;
        let (k2, e2) = *q;
        let k2t = if e1 == 1 { (n2 - k2) % n2 } else { k2 };
        let mut k = (k1 + k2t) % n2;
        let e = e1 + e2;
        if e == 2 {
            k = (k + m) % n2;
        }
        (k, e % 2)
    };
    Group::from_closure(&[(1, 0), (0, 1)], (0, 0), mul).expect("dicyclic").0
}

/// A named group; generators are listed in [`builtin_generators`].
pub fn builtin(name: &str) -> Result<Group> {
    Ok(match name {
        "C1" => cyclic(1),
        "C2" => cyclic(2),
        "C3" => cyclic(3),
        "C4" => cyclic(4),
        "C5" => cyclic(5),
        "C6" => cyclic(6),
        "C8" => cyclic(8),
        "C2xC2" | "V4" => dihedral(2),
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "A4" => alternating4(),
        "D4" => dihedral(4),
        "D5" => dihedral(5),
        "D6" => dihedral(6),
        "Q8" => quaternion(),
        "Q8xC2" => Group::direct_product(&quaternion(), &cyclic(2))?,
        "Dic3" => dicyclic(3),
        "SL(2,3)" | "SL23" => sl2_3(),
        other => {
            if let Some(n) = other.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                if (1..=MAX_ORDER).contains(&n) {
                    return Ok(cyclic(n));
                }
            }
            return Err(Error::InvalidInput(format!("unknown builtin group {name:?}")));
        }
    })
}

/// JSON form of a group with an optional surjection onto `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// One-line images, 1-indexed.
    pub generators: Vec<Vec<usize>>,
    /// Index into the tower's `Γ` list for each generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_images: Option<Vec<usize>>,
}

impl GroupSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("group: {e}")))
    }

    pub fn build(&self) -> Result<Group> {
        if self.generators.is_empty() {
            return Err(Error::InvalidInput("at least one generator is required".into()));
        }
        let gens: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&x| x.checked_sub(1).ok_or_else(|| Error::InvalidInput("permutations are 1-indexed".into())))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Group::from_permutations(&gens)
    }

    /// Spec of a permutation group (generators as stored), without a surjection.
    pub fn of_group(g: &Group) -> Option<GroupSpec> {
        let generators = g.generators().iter().map(|&x| g.perm(x).map(|p| p.iter().map(|i| i + 1).collect())).collect::<Option<_>>()?;
        Some(GroupSpec { generators, sigma_images: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_sizes(g: &Group) -> Vec<usize> {
        let mut v: Vec<usize> = g.conjugacy_classes().classes.iter().map(|c| c.len()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn standard_groups() {
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(class_sizes(&symmetric(3)), vec![1, 2, 3]);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(class_sizes(&quaternion()), vec![1, 1, 2, 2, 2]);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(class_sizes(&dihedral(4)), vec![1, 1, 2, 2, 2]);
        assert_ne!(
            (0..8).filter(|&a| quaternion().element_order(a) == 2).count(),
            (0..8).filter(|&a| dihedral(4).element_order(a) == 2).count()
        );
        assert_eq!(sl2_3().order(), 24);
        assert_eq!(sl2_3().conjugacy_classes().len(), 7);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(dicyclic(3).conjugacy_classes().len(), 6);
        assert_eq!(alternating4().conjugacy_classes().len(), 4);
        assert_eq!(symmetric(4).conjugacy_classes().len(), 5);
        assert_eq!(builtin("Q8xC2").unwrap().conjugacy_classes().len(), 10);
    }

    #[test]
    fn identity_is_index_zero_and_tables_validate() {
        let g = symmetric(3);
        assert_eq!(g.perm(0).unwrap(), &[0, 1, 2]);
        let table: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| g.mul(a, b)).collect()).collect();
        let h = Group::from_table(table).unwrap();
        assert_eq!(h.conjugacy_classes(), g.conjugacy_classes());
        assert!(Group::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn subgroups() {
        let g = symmetric(3);
        let a3 = g.normal_subgroups_of_index(2);
        assert_eq!(a3.len(), 1);
        let h = g.subgroup(&a3[0]).unwrap();
        assert!(h.group.is_cyclic());
        assert_eq!(dihedral(4).normal_subgroups_of_index(2).len(), 3);
        assert!(g.subgroup(&[0, 1, 2]).is_err());
    }

    #[test]
    fn spec_parsing() {
        let s = GroupSpec::from_json(r#"{"generators":[[2,1,3],[2,3,1]], "sigma_images":[1,0]}"#).unwrap();
        let g = s.build().unwrap();
        assert_eq!(g.order(), 6);
        assert!(GroupSpec { generators: vec![vec![1, 1]], sigma_images: None }.build().is_err());
        assert!(GroupSpec { generators: vec![vec![0, 1]], sigma_images: None }.build().is_err());
    }
}
