//! Concrete group families with a solvable word problem.
//!
//! Every family exposes a symmetric list of generator symbols (each symbol
//! carries its formal inverse), a multiplication on canonical elements and a
//! `normal_form` map from generator words to canonical elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Canonical form of a group element. The variant is fixed by the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Freely reduced word; letter `+(i+1)` is generator `i`, `-(i+1)` its inverse.
    Word(Vec<i32>),
    /// Coordinate vector in ℤ^d.
    Vector(Vec<i64>),
    /// Residue in ℤ/n.
    Residue(u64),
    /// Row index of a multiplication table.
    Index(usize),
    /// Componentwise element of a direct product.
    Tuple(Vec<Element>),
    /// Alternating syllables `(factor, non-identity element)` of a free product.
    Syllables(Vec<(usize, Element)>),
}

fn letter(i: usize, inverse: bool) -> String {
    if i < 26 {
        let c = (b'a' + i as u8) as char;
        if inverse {
            c.to_ascii_uppercase().to_string()
        } else {
            c.to_string()
        }
    } else if inverse {
        format!("x{}^-1", i + 1)
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Word(w) if w.is_empty() => f.write_str("1"),
            Element::Word(w) => {
                for &l in w {
                    f.write_str(&letter(l.unsigned_abs() as usize - 1, l < 0))?;
                }
                Ok(())
            }
            Element::Vector(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Element::Residue(r) => write!(f, "{r}"),
            Element::Index(i) => write!(f, "#{i}"),
            Element::Tuple(parts) => {
                f.write_str("<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(">")
            }
            Element::Syllables(s) if s.is_empty() => f.write_str("1"),
            Element::Syllables(s) => {
                for (factor, e) in s {
                    write!(f, "[{factor}:{e}]")?;
                }
                Ok(())
            }
        }
    }
}

/// A generator symbol together with the index of its formal inverse in the
/// same list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub symbol: String,
    pub inverse: usize,
    pub element: Element,
}

/// A finite group given by its multiplication table and a generating list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table by exhaustion: closure, associativity, identity
    /// and inverses. `generators` lists element indices; their inverses are
    /// added as formal inverse symbols.
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::validation("multiplication table is empty"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!("table row {i} has length {} (expected {n})", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::validation(format!("table row {i} contains out-of-range entry {bad}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::validation("multiplication table has no identity"))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::validation(format!("table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::validation(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::validation(format!("generator {g} is not an element")));
        }
        Ok(FiniteGroup { table, identity, inverses, generators })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generator_elements(&self) -> &[usize] {
        &self.generators
    }

    /// Replaces the generating list.
    pub fn with_generators(mut self, generators: Vec<usize>) -> Result<Self> {
        if let Some(&g) = generators.iter().find(|&&g| g >= self.order()) {
            return Err(Error::validation(format!("generator {g} is not an element")));
        }
        self.generators = generators;
        Ok(self)
    }

    /// ℤ/n as a table, generated by 1.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_trusted(table, vec![1 % n])
    }

    /// Dihedral group of order 2n; element `k` is rotation `k`, `n + k` is
    /// reflection composed with rotation `k`. Generated by rotation 1 and
    /// reflection 0.
    pub fn dihedral(n: usize) -> Self {
        let decode = |x: usize| (x / n, x % n);
        let encode = |s: usize, r: usize| s * n + r;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (sa, ra) = decode(a);
                let (sb, rb) = decode(b);
                // (s^sa r^ra)(s^sb r^rb) with r s = s r^-1
                let r = if sb == 0 { (ra + rb) % n } else { (n - ra % n + rb) % n };
                table[a][b] = encode((sa + sb) % 2, r);
            }
        }
        FiniteGroup::from_trusted(table, vec![1 % (2 * n), n])
    }

    /// Symmetric group on `n` points, elements in lexicographic order of the
    /// permutations. Generated by a transposition and an n-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a∘b)(x) = a(b(x))
                        let c: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                        index[&c]
                    })
                    .collect()
            })
            .collect();
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(index[&t]);
        }
        if n >= 3 {
            let c: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            gens.push(index[&c]);
        }
        FiniteGroup::from_trusted(table, gens)
    }

    /// Direct product table; element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let n = a.order() * nb;
        let table = (0..n)
            .map(|x| (0..n).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        let mut gens: Vec<usize> = a.generators.iter().map(|&g| g * nb + b.identity).collect();
        gens.extend(b.generators.iter().map(|&g| a.identity * nb + g));
        FiniteGroup::from_trusted(table, gens)
    }

    fn from_trusted(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Self {
        let n = table.len();
        let identity = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x)).unwrap_or(0);
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap_or(0)).collect();
        FiniteGroup { table, identity, inverses, generators }
    }

    /// Closure of a set of elements under multiplication (the generated subgroup),
    /// sorted by index.
    pub fn subgroup_generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !members[y] {
                        members[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.order()).filter(|&x| members[x]).collect()
    }

    /// True if `subset` is closed under products and inverses and contains 1.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in subset {
            if x >= self.order() {
                return false;
            }
            member[x] = true;
        }
        member[self.identity]
            && subset
                .iter()
                .all(|&a| member[self.inv(a)] && subset.iter().all(|&b| member[self.mul(a, b)]))
    }
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

/// A concrete group family with a symmetric generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupModel {
    /// Free group on `rank` generators.
    Free { rank: usize },
    /// ℤ^dim with the standard basis.
    Lattice { dim: usize },
    /// ℤ/order generated by 1.
    Cyclic { order: u64 },
    Finite(FiniteGroup),
    DirectProduct(Vec<GroupModel>),
    FreeProduct(Vec<GroupModel>),
}

impl GroupModel {
    /// Checks the family parameters and that no generator is the identity.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupModel::Free { rank: 0 } => return Err(Error::validation("free group rank must be at least 1")),
            GroupModel::Lattice { dim: 0 } => return Err(Error::validation("lattice dimension must be at least 1")),
            GroupModel::Cyclic { order } if *order < 2 => {
                return Err(Error::validation("cyclic order must be at least 2 (generator would be the identity)"))
            }
            GroupModel::DirectProduct(f) | GroupModel::FreeProduct(f) => {
                if f.is_empty() {
                    return Err(Error::validation("product of an empty list of groups"));
                }
                for m in f {
                    m.validate()?;
                }
            }
            _ => {}
        }
        let one = self.identity();
        for g in self.generators() {
            if g.element == one {
                return Err(Error::validation(format!("generator {} is the identity", g.symbol)));
            }
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupModel::Free { .. } => Element::Word(Vec::new()),
            GroupModel::Lattice { dim } => Element::Vector(vec![0; *dim]),
            GroupModel::Cyclic { .. } => Element::Residue(0),
            GroupModel::Finite(g) => Element::Index(g.identity),
            GroupModel::DirectProduct(f) => Element::Tuple(f.iter().map(GroupModel::identity).collect()),
            GroupModel::FreeProduct(_) => Element::Syllables(Vec::new()),
        }
    }

    /// Generator symbols in canonical order; each symbol is followed by (or
    /// paired with) its formal inverse.
    pub fn generators(&self) -> Vec<Generator> {
        match self {
            GroupModel::Free { rank } => (0..*rank)
                .flat_map(|i| {
                    let l = i as i32 + 1;
                    [
                        Generator { symbol: letter(i, false), inverse: 2 * i + 1, element: Element::Word(vec![l]) },
                        Generator { symbol: letter(i, true), inverse: 2 * i, element: Element::Word(vec![-l]) },
                    ]
                })
                .collect(),
            GroupModel::Lattice { dim } => (0..*dim)
                .flat_map(|i| {
                    let mut plus = vec![0; *dim];
                    plus[i] = 1;
                    let minus: Vec<i64> = plus.iter().map(|x| -x).collect();
                    [
                        Generator { symbol: format!("+e{}", i + 1), inverse: 2 * i + 1, element: Element::Vector(plus) },
                        Generator { symbol: format!("-e{}", i + 1), inverse: 2 * i, element: Element::Vector(minus) },
                    ]
                })
                .collect(),
            GroupModel::Cyclic { order } => vec![
                Generator { symbol: "+1".into(), inverse: 1, element: Element::Residue(1 % order) },
                Generator { symbol: "-1".into(), inverse: 0, element: Element::Residue((order - 1) % order) },
            ],
            GroupModel::Finite(g) => g
                .generators
                .iter()
                .enumerate()
                .flat_map(|(i, &x)| {
                    [
                        Generator { symbol: format!("s{}", i + 1), inverse: 2 * i + 1, element: Element::Index(x) },
                        Generator { symbol: format!("s{}^-1", i + 1), inverse: 2 * i, element: Element::Index(g.inv(x)) },
                    ]
                })
                .collect(),
            GroupModel::DirectProduct(factors) => {
                let ids: Vec<Element> = factors.iter().map(GroupModel::identity).collect();
                let mut out = Vec::new();
                for (k, f) in factors.iter().enumerate() {
                    let offset = out.len();
                    for g in f.generators() {
                        let mut parts = ids.clone();
                        parts[k] = g.element;
                        out.push(Generator {
                            symbol: format!("{}.{}", k, g.symbol),
                            inverse: offset + g.inverse,
                            element: Element::Tuple(parts),
                        });
                    }
                }
                out
            }
            GroupModel::FreeProduct(factors) => {
                let mut out = Vec::new();
                for (k, f) in factors.iter().enumerate() {
                    let offset = out.len();
                    for g in f.generators() {
                        out.push(Generator {
                            symbol: format!("{}.{}", k, g.symbol),
                            inverse: offset + g.inverse,
                            element: Element::Syllables(vec![(k, g.element)]),
                        });
                    }
                }
                out
            }
        }
    }

    /// The induced generating set S: distinct generator elements in
    /// first-occurrence order.
    pub fn generating_set(&self) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        for g in self.generators() {
            if !out.contains(&g.element) {
                out.push(g.element);
            }
        }
        out
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupModel::Free { .. }, Element::Word(x), Element::Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Element::Word(w)
            }
            (GroupModel::Lattice { .. }, Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupModel::Cyclic { order }, Element::Residue(x), Element::Residue(y)) => {
                Element::Residue(((*x as u128 + *y as u128) % *order as u128) as u64)
            }
            (GroupModel::Finite(g), Element::Index(x), Element::Index(y)) => Element::Index(g.mul(*x, *y)),
            (GroupModel::DirectProduct(f), Element::Tuple(x), Element::Tuple(y)) => {
                Element::Tuple(f.iter().zip(x.iter().zip(y)).map(|(m, (p, q))| m.multiply(p, q)).collect())
            }
            (GroupModel::FreeProduct(f), Element::Syllables(x), Element::Syllables(y)) => {
                let mut w = x.clone();
                for (k, e) in y {
                    match w.last() {
                        Some((last_k, last_e)) if last_k == k => {
                            let merged = f[*k].multiply(last_e, e);
                            w.pop();
                            if !f[*k].is_identity(&merged) {
                                w.push((*k, merged));
                            }
                        }
                        _ => w.push((*k, e.clone())),
                    }
                }
                Element::Syllables(w)
            }
            _ => panic!("element does not belong to this group family"),
        }
    }

    pub fn inverse(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupModel::Free { .. }, Element::Word(x)) => Element::Word(x.iter().rev().map(|l| -l).collect()),
            (GroupModel::Lattice { .. }, Element::Vector(x)) => Element::Vector(x.iter().map(|p| -p).collect()),
            (GroupModel::Cyclic { order }, Element::Residue(x)) => Element::Residue((order - x % order) % order),
            (GroupModel::Finite(g), Element::Index(x)) => Element::Index(g.inv(*x)),
            (GroupModel::DirectProduct(f), Element::Tuple(x)) => {
                Element::Tuple(f.iter().zip(x).map(|(m, p)| m.inverse(p)).collect())
            }
            (GroupModel::FreeProduct(f), Element::Syllables(x)) => {
                Element::Syllables(x.iter().rev().map(|(k, e)| (*k, f[*k].inverse(e))).collect())
            }
            _ => panic!("element does not belong to this group family"),
        }
    }

    /// Canonical element represented by a word in generator indices.
    pub fn normal_form(&self, word: &[usize]) -> Result<Element> {
        let gens = self.generators();
        let mut acc = self.identity();
        for &i in word {
            let g = gens
                .get(i)
                .ok_or_else(|| Error::validation(format!("generator index {i} out of range ({} generators)", gens.len())))?;
            acc = self.multiply(&acc, &g.element);
        }
        Ok(acc)
    }

    /// Canonical re-normalisation of an element (idempotent on canonical input).
    pub fn canonicalize(&self, x: &Element) -> Element {
        self.multiply(&self.identity(), x)
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupModel::Free { .. } | GroupModel::Lattice { .. } => None,
            GroupModel::Cyclic { order } => Some(*order as u128),
            GroupModel::Finite(g) => Some(g.order() as u128),
            GroupModel::DirectProduct(f) => f.iter().try_fold(1u128, |acc, m| m.order().map(|o| acc * o)),
            GroupModel::FreeProduct(f) => {
                // a free product of two or more non-trivial groups is infinite
                if f.len() == 1 {
                    f[0].order()
                } else {
                    None
                }
            }
        }
    }

    /// Whether the Cayley graph of this model (with its generating set) is a
    /// tree. Then the cycle space is zero and every free edge probability is 1.
    pub fn cayley_graph_is_tree(&self) -> bool {
        match self {
            GroupModel::Free { .. } => true,
            GroupModel::Lattice { dim } => *dim == 1,
            GroupModel::Cyclic { order } => *order == 2,
            GroupModel::Finite(g) => {
                let model = GroupModel::Finite(g.clone());
                match crate::cayley::build_cayley_ball(&model, g.order() as u32, usize::MAX) {
                    Ok(ball) => {
                        let gr = ball.graph();
                        gr.edge_count() + 1 == gr.vertex_count()
                    }
                    Err(_) => false,
                }
            }
            GroupModel::DirectProduct(f) => {
                let nontrivial: Vec<&GroupModel> = f.iter().filter(|m| !m.generating_set().is_empty()).collect();
                match nontrivial.len() {
                    0 => true,
                    1 => nontrivial[0].cayley_graph_is_tree(),
                    _ => false,
                }
            }
            GroupModel::FreeProduct(f) => f.iter().all(GroupModel::cayley_graph_is_tree),
        }
    }

    /// Short family name used in labels and reports.
    pub fn describe(&self) -> String {
        match self {
            GroupModel::Free { rank } => format!("free:{rank}"),
            GroupModel::Lattice { dim } => format!("lattice:{dim}"),
            GroupModel::Cyclic { order } => format!("cyclic:{order}"),
            GroupModel::Finite(g) => format!("finite:{}", g.order()),
            GroupModel::DirectProduct(f) => {
                let parts: Vec<String> = f.iter().map(GroupModel::describe).collect();
                format!("direct_product({})", parts.join(","))
            }
            GroupModel::FreeProduct(f) => {
                let parts: Vec<String> = f.iter().map(GroupModel::describe).collect();
                format!("free_product({})", parts.join(","))
            }
        }
    }
}
