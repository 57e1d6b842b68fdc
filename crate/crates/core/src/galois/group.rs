//! Signed permutation groups `W_{2g}` and their direct powers.
//!
//! Points of block `b` are `2gb .. 2g(b+1)`; within a block, `2i` and `2i+1`
//! form the `i`-th pair. An element is stored as the image of every point.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};

pub type Perm = Vec<u8>;

/// Largest genus for which the elements are enumerated.
pub const MAX_ELEMENT_GENUS: usize = 6;
/// Largest `g*k` for which the subgroup lattice is computed.
pub const MAX_LATTICE_RANK: usize = 4;

const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleSign {
    Pos,
    Neg,
}

/// Conjugacy invariant of a signed permutation: the cycles it induces on
/// pairs, each marked by whether its `d`-th power fixes or swaps the pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedCycleType {
    parts: Vec<(usize, CycleSign)>,
}

impl SignedCycleType {
    pub fn new(mut parts: Vec<(usize, CycleSign)>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&(d, _)| d == 0) {
            return Err(CoreError::InvalidInput("cycle lengths must be positive".into()));
        }
        parts.sort();
        Ok(Self { parts })
    }

    pub fn identity(g: usize) -> Self {
        Self { parts: vec![(1, CycleSign::Pos); g] }
    }

    pub fn parts(&self) -> &[(usize, CycleSign)] {
        &self.parts
    }

    pub fn g(&self) -> usize {
        self.parts.iter().map(|p| p.0).sum()
    }

    pub fn negative_count(&self) -> usize {
        self.parts.iter().filter(|p| p.1 == CycleSign::Neg).count()
    }

    pub fn positive_count(&self) -> usize {
        self.parts.len() - self.negative_count()
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == (1, CycleSign::Pos))
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(d, s) in &self.parts {
            write!(f, "{}{}", d, if s == CycleSign::Pos { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for SignedCycleType {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::InvalidInput(format!("bad cycle type {s:?}"));
        let mut parts = Vec::new();
        let mut num = String::new();
        for ch in s.chars() {
            match ch {
                '0'..='9' => num.push(ch),
                '+' | '-' => {
                    let d: usize = num.parse().map_err(|_| bad())?;
                    num.clear();
                    parts.push((d, if ch == '+' { CycleSign::Pos } else { CycleSign::Neg }));
                }
                _ => return Err(bad()),
            }
        }
        if !num.is_empty() {
            return Err(bad());
        }
        Self::new(parts)
    }
}

impl Serialize for SignedCycleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedCycleType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A conjugacy class of `W_{2g}^k`: one signed cycle type per block.
pub type ClassKey = Vec<SignedCycleType>;

pub fn class_key_string(key: &[SignedCycleType]) -> String {
    key.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("|")
}

pub fn parse_class_key(s: &str) -> Result<ClassKey> {
    s.split('|').map(str::parse).collect()
}

/// Signed cycle type of `perm` on the block of `g` pairs starting at `offset`.
pub fn block_cycle_type(perm: &[u8], offset: usize, g: usize) -> SignedCycleType {
    let mut seen = vec![false; g];
    let mut parts = Vec::new();
    for i in 0..g {
        if seen[i] {
            continue;
        }
        let mut x = 2 * i;
        let mut len = 0;
        loop {
            x = perm[offset + x] as usize - offset;
            len += 1;
            seen[x / 2] = true;
            if x / 2 == i {
                break;
            }
        }
        parts.push((len, if x == 2 * i { CycleSign::Pos } else { CycleSign::Neg }));
    }
    parts.sort();
    SignedCycleType { parts }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn signed_perms(g: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for sigma in permutations(g) {
        for signs in 0u32..(1 << g) {
            let mut p = vec![0u8; 2 * g];
            for i in 0..g {
                let s = ((signs >> i) & 1) as usize;
                p[2 * i] = (2 * sigma[i] + s) as u8;
                p[2 * i + 1] = (2 * sigma[i] + (1 - s)) as u8;
            }
            out.push(p);
        }
    }
    out
}

/// `W_{2g}^k` with all elements listed (identity first).
#[derive(Clone, Debug)]
pub struct W2gGroup {
    g: usize,
    k: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u16>>,
    inverse: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<ClassKey>,
}

/// Enumerate `W_{2g}`.
pub fn w2g_enumerate(g: usize) -> Result<W2gGroup> {
    W2gGroup::power(g, 1)
}

impl W2gGroup {
    /// The direct product of `k` copies of `W_{2g}`, acting block-diagonally.
    pub fn power(g: usize, k: usize) -> Result<Self> {
        if g == 0 || k == 0 {
            return Err(CoreError::InvalidInput("g and k must be positive".into()));
        }
        if g * k > MAX_ELEMENT_GENUS {
            return Err(CoreError::TooLarge(format!("W_{}^{} exceeds the enumeration limit", 2 * g, k)));
        }
        let block = signed_perms(g);
        let mut elements: Vec<Perm> = vec![vec![]];
        for b in 0..k {
            let off = (2 * g * b) as u8;
            let mut next = Vec::with_capacity(elements.len() * block.len());
            for e in &elements {
                for s in &block {
                    let mut p = e.clone();
                    p.extend(s.iter().map(|&x| x + off));
                    next.push(p);
                }
            }
            elements = next;
        }
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let inverse = elements
            .iter()
            .map(|p| {
                let mut inv = vec![0u8; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    inv[x as usize] = i as u8;
                }
                index[&inv]
            })
            .collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&compose(a, b)] as u16);
                }
            }
            t
        });
        let mut class_ids: HashMap<ClassKey, usize> = HashMap::new();
        let mut classes = Vec::new();
        let mut class_of = Vec::with_capacity(n);
        for p in &elements {
            let key: ClassKey = (0..k).map(|b| block_cycle_type(p, 2 * g * b, g)).collect();
            let id = *class_ids.entry(key.clone()).or_insert_with(|| {
                classes.push(key);
                classes.len() - 1
            });
            class_of.push(id);
        }
        Ok(Self { g, k, elements, index, table, inverse, class_of, classes })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &[u8]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `a * b` (apply `b` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&compose(&self.elements[a], &self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conj(&self, y: usize, x: usize) -> usize {
        self.mul(self.mul(y, x), self.inverse[y])
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn classes(&self) -> &[ClassKey] {
        &self.classes
    }

    pub fn class_id(&self, key: &[SignedCycleType]) -> Option<usize> {
        self.classes.iter().position(|c| c.as_slice() == key)
    }

    /// The kernel of the map to `S_g^k` forgetting signs.
    pub fn sign_kernel_order(&self) -> usize {
        self.elements.iter().filter(|p| p.iter().enumerate().all(|(i, &x)| x as usize / 2 == i / 2)).count()
    }

    /// Conjugacy classes by brute-force conjugation, as sorted lists of element indices.
    pub fn conjugacy_classes_brute(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if done[x] {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|y| self.conj(y, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                done[c] = true;
            }
            out.push(cls);
        }
        out
    }
}

fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Generators of `W_{2g}`: adjacent pair swaps and one sign flip.
fn generators(g: usize) -> Vec<Perm> {
    let id: Perm = (0..2 * g as u8).collect();
    let mut gens = Vec::new();
    for i in 0..g.saturating_sub(1) {
        let mut p = id.clone();
        p.swap(2 * i, 2 * i + 2);
        p.swap(2 * i + 1, 2 * i + 3);
        gens.push(p);
    }
    let mut t = id;
    t.swap(0, 1);
    gens.push(t);
    gens
}

/// Number of orbits of `W_{2g}` on `M x M`, by union-find over all pairs.
pub fn orbit_count(g: usize) -> usize {
    let m = 2 * g;
    let mut parent: Vec<usize> = (0..m * m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in generators(g) {
        for a in 0..m {
            for b in 0..m {
                let u = find(&mut parent, a * m + b);
                let v = find(&mut parent, s[a] as usize * m + s[b] as usize);
                parent[u] = v;
            }
        }
    }
    (0..m * m).filter(|&x| find(&mut parent, x) == x).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub g: usize,
    pub dims: (usize, usize, usize),
    pub invariant: bool,
    pub direct_sum: bool,
    /// `<chi, chi>` for the permutation character on `M`.
    pub inner_product: u64,
}

/// Check that `1`, `G(M)`, `H(M)` are invariant subspaces spanning `Q^M`,
/// and compute `<chi, chi>` from fixed-point counts.
pub fn decomposition_check(g: usize) -> Result<DecompositionReport> {
    if !(2..=4).contains(&g) {
        return Err(CoreError::InvalidInput(format!("decomposition check needs 2 <= g <= 4, got {g}")));
    }
    use frobrel_arith::IntMatrix;
    let m = 2 * g;
    let unit = |i: usize, v: i64| {
        let mut x = vec![BigInt::from(0); m];
        x[i] = BigInt::from(v);
        x
    };
    let add = |a: Vec<BigInt>, b: Vec<BigInt>| a.into_iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let one = vec![vec![BigInt::from(1); m]];
    let gm: Vec<Vec<BigInt>> = (0..g - 1)
        .map(|i| add(add(unit(2 * i, 1), unit(2 * i + 1, 1)), add(unit(2 * i + 2, -1), unit(2 * i + 3, -1))))
        .collect();
    let hm: Vec<Vec<BigInt>> = (0..g).map(|i| add(unit(2 * i, 1), unit(2 * i + 1, -1))).collect();

    let rank = |rows: &[Vec<BigInt>]| IntMatrix::new(rows.to_vec(), m).rank();
    let act = |p: &Perm, v: &[BigInt]| {
        let mut w = vec![BigInt::from(0); m];
        for (i, x) in v.iter().enumerate() {
            w[p[i] as usize] = x.clone();
        }
        w
    };
    let mut invariant = true;
    for sub in [&one, &gm, &hm] {
        let r = rank(sub);
        for s in generators(g) {
            for v in sub.iter() {
                let mut rows = sub.clone();
                rows.push(act(&s, v));
                invariant &= rank(&rows) == r;
            }
        }
    }
    let all: Vec<Vec<BigInt>> = one.iter().chain(&gm).chain(&hm).cloned().collect();
    let direct_sum = rank(&all) == m;

    let w = w2g_enumerate(g)?;
    let sum: u64 = w
        .elements()
        .iter()
        .map(|p| {
            let fix = p.iter().enumerate().filter(|&(i, &x)| i == x as usize).count() as u64;
            fix * fix
        })
        .sum();
    let order = w.order() as u64;
    if sum % order != 0 {
        return Err(CoreError::InvalidInput("character norm is not integral".into()));
    }
    Ok(DecompositionReport {
        g,
        dims: (rank(&one), rank(&gm), rank(&hm)),
        invariant,
        direct_sum,
        inner_product: sum / order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn orders_and_sign_kernel() {
        for g in 1..=4 {
            let w = w2g_enumerate(g).unwrap();
            assert_eq!(w.order(), (1 << g) * factorial(g));
            assert_eq!(w.sign_kernel_order(), 1 << g);
            assert_eq!(w.element(w.identity()), &(0..2 * g as u8).collect::<Vec<_>>());
        }
        assert!(matches!(w2g_enumerate(7), Err(CoreError::TooLarge(_))));
    }

    #[test]
    fn classes_match_brute_force() {
        for g in 1..=3 {
            let w = w2g_enumerate(g).unwrap();
            let brute = w.conjugacy_classes_brute();
            assert_eq!(brute.len(), w.classes().len());
            for cls in brute {
                let id = w.class_of(cls[0]);
                assert!(cls.iter().all(|&x| w.class_of(x) == id));
            }
        }
        // bipartitions of 3: 10 classes
        assert_eq!(w2g_enumerate(3).unwrap().classes().len(), 10);
    }

    #[test]
    fn multiplication_is_a_group_law() {
        let w = W2gGroup::power(1, 2).unwrap();
        assert_eq!(w.order(), 4);
        let w = w2g_enumerate(3).unwrap();
        for a in (0..w.order()).step_by(5) {
            assert_eq!(w.mul(a, w.inv(a)), w.identity());
            for b in (0..w.order()).step_by(7) {
                for c in (0..w.order()).step_by(11) {
                    assert_eq!(w.mul(w.mul(a, b), c), w.mul(a, w.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn cycle_type_text_round_trip() {
        let t = SignedCycleType::new(vec![(2, CycleSign::Neg), (1, CycleSign::Pos)]).unwrap();
        assert_eq!(t.to_string(), "1+2-");
        assert_eq!("1+2-".parse::<SignedCycleType>().unwrap(), t);
        assert_eq!(t.g(), 3);
        assert!("1*".parse::<SignedCycleType>().is_err());
        let key = vec![t.clone(), SignedCycleType::identity(1)];
        assert_eq!(parse_class_key(&class_key_string(&key)).unwrap(), key);
    }

    #[test]
    fn orbits_on_pairs() {
        assert_eq!(orbit_count(1), 2);
        for g in 2..=5 {
            assert_eq!(orbit_count(g), 3);
        }
    }

    #[test]
    fn decomposition() {
        for g in 2..=4 {
            let r = decomposition_check(g).unwrap();
            assert_eq!(r.dims, (1, g - 1, g));
            assert!(r.invariant && r.direct_sum);
            assert_eq!(r.inner_product, 3);
        }
    }
}
