//! Finite groups given by multiplication tables, identity at index 0.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed tables: {0}")]
    MalformedTables(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("unknown group fixture {0:?}")]
    UnknownFixture(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates the table exhaustively: closure, identity at 0,
    /// associativity and two-sided inverses.
    pub fn from_table(table: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTables("empty group".into()));
        }
        if names.len() != n {
            return Err(GroupError::MalformedTables(format!("{} names for {n} elements", names.len())));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::MalformedTables(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&c| c >= n) {
                return Err(GroupError::MalformedTables(format!("entry {bad} out of range in row {a}")));
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(GroupError::MalformedTables(format!("index 0 is not an identity for {a}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inv[a] = b,
                _ => return Err(GroupError::MalformedTables(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::MalformedTables(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inv, names })
    }

    /// Builds the table of a group given by explicit elements, the first
    /// of which must be the identity.
    pub fn from_elements<T, F>(elems: &[T], op: F, names: Vec<String>) -> Result<Self, GroupError>
    where
        T: Eq + Hash + Clone,
        F: Fn(&T, &T) -> T,
    {
        let pos: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if pos.len() != elems.len() {
            return Err(GroupError::MalformedTables("repeated element".into()));
        }
        let mut table = Vec::with_capacity(elems.len());
        for a in elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in elems {
                let c = op(a, b);
                row.push(*pos.get(&c).ok_or_else(|| GroupError::MalformedTables("not closed".into()))?);
            }
            table.push(row);
        }
        Self::from_table(table, names)
    }

    pub fn trivial() -> Self {
        FiniteGroup { table: vec![vec![0]], inv: vec![0], names: vec!["e".into()] }
    }

    /// `Z/n`, element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        let names = (0..n).map(|a| a.to_string()).collect();
        FiniteGroup { table, inv, names }
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order
    /// of their one-line notation; `(p q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        loop {
            let mut p = perms.last().unwrap().clone();
            if !next_permutation(&mut p) {
                break;
            }
            perms.push(p);
        }
        let names = perms.iter().map(|p| p.iter().map(|i| i.to_string()).collect::<String>()).collect();
        Self::from_elements(&perms, |p, q| q.iter().map(|&i| p[i]).collect(), names).expect("permutation group")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // (sign, unit) with unit 0..4 = 1, i, j, k
        let elems: Vec<(bool, u8)> = (0..4u8).flat_map(|u| [(false, u), (true, u)]).collect();
        let names = elems
            .iter()
            .map(|&(neg, u)| format!("{}{}", if neg { "-" } else { "" }, ["1", "i", "j", "k"][u as usize]))
            .collect();
        let unit_mul = |a: u8, b: u8| -> (bool, u8) {
            match (a, b) {
                (0, b) => (false, b),
                (a, 0) => (false, a),
                (a, b) if a == b => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let op = |x: &(bool, u8), y: &(bool, u8)| {
            let (s, u) = unit_mul(x.1, y.1);
            (x.0 ^ y.0 ^ s, u)
        };
        Self::from_elements(&elems, op, names).expect("quaternion group")
    }

    pub fn klein() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    /// `A × B`, pair `(a, b)` at index `a |B| + b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.size(), b.size());
        let idx = |x: usize, y: usize| x * nb + y;
        let mut table = vec![vec![0; na * nb]; na * nb];
        let mut inv = vec![0; na * nb];
        let mut names = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                inv[idx(x, y)] = idx(a.inv[x], b.inv[y]);
                names.push(format!("({},{})", a.names[x], b.names[y]));
                for x2 in 0..na {
                    for y2 in 0..nb {
                        table[idx(x, y)][idx(x2, y2)] = idx(a.table[x][x2], b.table[y][y2]);
                    }
                }
            }
        }
        FiniteGroup { table, inv, names }
    }

    /// Fixture names: `1`, `Z<n>`, `S<n>`, `Q8`, `V4`, and products joined
    /// by `x` such as `Z2xZ4`.
    pub fn by_name(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownFixture(name.to_string());
        let parts: Vec<&str> = name.split('x').collect();
        if parts.len() > 1 {
            let mut g = Self::by_name(parts[0])?;
            for p in &parts[1..] {
                g = Self::direct_product(&g, &Self::by_name(p)?);
            }
            return Ok(g);
        }
        match name {
            "1" => Ok(Self::trivial()),
            "Q8" => Ok(Self::quaternion()),
            "V4" => Ok(Self::klein()),
            _ => {
                let (kind, n) = name.split_at(1.min(name.len()));
                let n: usize = n.parse().map_err(|_| unknown())?;
                match kind {
                    "Z" if n >= 1 => Ok(Self::cyclic(n)),
                    "S" if (1..=5).contains(&n) => Ok(Self::symmetric(n)),
                    _ => Err(unknown()),
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a b a^{-1}`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.table[self.table[a][b]][self.inv[a]]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.table[a][b] == self.table[b][a]))
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    pub fn is_normal_subgroup(&self, sub: &[usize]) -> bool {
        let mut mark = vec![false; self.size()];
        for &s in sub {
            mark[s] = true;
        }
        mark[0]
            && sub.iter().all(|&a| mark[self.inv[a]] && sub.iter().all(|&b| mark[self.table[a][b]]))
            && self.elements().all(|g| sub.iter().all(|&s| mark[self.conj(g, s)]))
    }

    /// Subgroup on the given elements (identity first), with the embedding.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let mut embed: Vec<usize> = elems.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.first() != Some(&0) {
            return Err(GroupError::MalformedTables("subgroup must contain the identity".into()));
        }
        let names = embed.iter().map(|&e| self.names[e].clone()).collect();
        let g = Self::from_elements(&embed, |&a, &b| self.table[a][b], names)?;
        Ok((g, embed))
    }

    /// Quotient by a normal subgroup: the quotient group, the projection,
    /// and the least-index representative of each coset.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>, Vec<usize>), GroupError> {
        if !self.is_normal_subgroup(normal) {
            return Err(GroupError::MalformedTables("not a normal subgroup".into()));
        }
        let mut proj = vec![usize::MAX; self.size()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if proj[g] != usize::MAX {
                continue;
            }
            for &s in normal {
                proj[self.table[g][s]] = reps.len();
            }
            reps.push(g);
        }
        let table = reps.iter().map(|&a| reps.iter().map(|&b| proj[self.table[a][b]]).collect()).collect();
        let names = reps.iter().map(|&r| format!("[{}]", self.names[r])).collect();
        Ok((Self::from_table(table, names)?, proj, reps))
    }

    /// Whether `f` (indexed by the elements of `self`) is a homomorphism
    /// into `target`.
    pub fn is_homomorphism(&self, f: &[usize], target: &FiniteGroup) -> bool {
        f.len() == self.size()
            && f.iter().all(|&x| x < target.size())
            && self
                .elements()
                .all(|a| self.elements().all(|b| f[self.table[a][b]] == target.table[f[a]][f[b]]))
    }

    /// Invariant factors `d_1 | d_2 | ... ` of an abelian group; empty for
    /// the trivial group.
    pub fn abelian_invariants(&self) -> Result<Vec<usize>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        let orders: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        let mut primes: Vec<usize> = Vec::new();
        let mut m = self.size();
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                primes.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        // elementary divisors per prime: the number of cyclic factors of
        // order >= p^k is log_p(|G[p^k]| / |G[p^{k-1}]|)
        let mut per_prime: Vec<Vec<usize>> = Vec::new();
        for &p in &primes {
            let mut at_least: Vec<usize> = Vec::new();
            let mut prev = 1usize;
            let mut pk = p;
            loop {
                let count = orders.iter().filter(|&&o| pk % o == 0).count();
                if count == prev {
                    break;
                }
                let mut r = 0;
                let mut q = count / prev;
                while q > 1 {
                    q /= p;
                    r += 1;
                }
                at_least.push(r);
                prev = count;
                pk *= p;
            }
            // factor p^k appears at_least[k-1] - at_least[k] times
            let mut divs = Vec::new();
            for k in 0..at_least.len() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..at_least[k] - next {
                    divs.push(p.pow(k as u32 + 1));
                }
            }
            divs.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(divs);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut out: Vec<usize> = (0..len)
            .map(|i| per_prime.iter().map(|d| d.get(i).copied().unwrap_or(1)).product())
            .collect();
        out.reverse();
        Ok(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Wire form: `{"size": n, "table": [[...]], "names": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteGroupJson {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl From<&FiniteGroup> for FiniteGroupJson {
    fn from(g: &FiniteGroup) -> Self {
        FiniteGroupJson { size: g.size(), table: g.table.clone(), names: Some(g.names.clone()) }
    }
}

impl TryFrom<FiniteGroupJson> for FiniteGroup {
    type Error = GroupError;

    fn try_from(j: FiniteGroupJson) -> Result<Self, GroupError> {
        if j.table.len() != j.size {
            return Err(GroupError::MalformedTables(format!("size {} but {} rows", j.size, j.table.len())));
        }
        let names = j.names.unwrap_or_else(|| (0..j.size).map(|i| i.to_string()).collect());
        FiniteGroup::from_table(j.table, names)
    }
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiniteGroupJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FiniteGroup::try_from(FiniteGroupJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Counts of elements by order, handy for comparing small groups.
pub fn order_profile(g: &FiniteGroup) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for a in g.elements() {
        *m.entry(g.element_order(a)).or_insert(0) += 1;
    }
    m
}
