//! Finite abelian groups presented by Cayley tables.
//!
//! An [`AbelianGroup`] carries its invariant factors together with an explicit
//! basis `b₁, …, b_k` of orders `d₁ | … | d_k`, so every element has unique
//! coordinates `x = a₁b₁ + … + a_kb_k`. The basis doubles as the certificate
//! that the canonical form is correct and as the generator set for
//! automorphism enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::tables::{Element, Mapping, Property, QuasigroupTable};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum GroupError {
    #[error("not associative: ({x}·{y})·{z} ≠ {x}·({y}·{z})")]
    NotAssociative { x: Element, y: Element, z: Element },
    #[error("not commutative: {x}·{y} ≠ {y}·{x}")]
    NotCommutative { x: Element, y: Element },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("group order {order} exceeds the enumeration cap {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("order mismatch: group has order {expected}, mapping has order {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("not a holomorphism: fails at x={x}, y={y}, z={z}")]
    NotHolomorphism { x: Element, y: Element, z: Element },
    #[error("not an automorphism: fails at x={x}, y={y}")]
    NotAutomorphism { x: Element, y: Element },
    #[error("no basis of type {factors:?} found")]
    NoBasis { factors: Vec<usize> },
}

/// An abelian group `(B; +)` on `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    table: QuasigroupTable,
    identity: Element,
    neg: Vec<Element>,
    canonical: Vec<usize>,
    basis: Vec<Element>,
    coords: Vec<Vec<usize>>,
}

/// Recognises `q` as an abelian group table.
///
/// Checks run in the order associativity, commutativity, identity; the
/// reported witness is the lexicographically first failing tuple.
pub fn as_abelian_group(q: &QuasigroupTable) -> Result<AbelianGroup, GroupError> {
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            let xy = q.get(x, y);
            for z in 0..n {
                if q.get(xy, z) != q.get(x, q.get(y, z)) {
                    return Err(GroupError::NotAssociative { x, y, z });
                }
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if q.get(x, y) != q.get(y, x) {
                return Err(GroupError::NotCommutative { x, y });
            }
        }
    }
    let identity = q.identity().ok_or(GroupError::NoIdentity)?;
    let neg = (0..n).map(|x| q.left_divide(x, identity)).collect();
    let mut g = AbelianGroup {
        table: q.clone(),
        identity,
        neg,
        canonical: Vec::new(),
        basis: Vec::new(),
        coords: Vec::new(),
    };
    g.canonical = invariant_factors_from_orders(&g);
    g.basis = find_basis(&g, &g.canonical).ok_or_else(|| GroupError::NoBasis {
        factors: g.canonical.clone(),
    })?;
    g.coords = coordinates(&g, &g.basis, &g.canonical);
    Ok(g)
}

/// Invariant factor lists `d₁ | d₂ | … | d_k` (all `dᵢ > 1`) with product `n`,
/// one per isomorphism class of abelian groups of order `n`.
pub fn invariant_factor_lists(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        // each factor is a multiple of the previous one
        for d in min.max(2)..=rest {
            if rest.is_multiple_of(d) && acc.last().is_none_or(|&p| d % p == 0) {
                acc.push(d);
                go(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl AbelianGroup {
    /// `Z_n` with the usual labelling.
    pub fn cyclic(n: usize) -> Self {
        Self::product(&[n])
    }

    /// `Z_{d₁} × … × Z_{d_k}`, element `(a₁, …, a_k)` encoded as the mixed-radix
    /// index `a₁ + d₁·a₂ + d₁d₂·a₃ + …`.
    ///
    /// For `Z₂×Z₂` this lists `(0,0), (1,0), (0,1), (1,1)` as `0, 1, 2, 3`.
    pub fn product(factors: &[usize]) -> Self {
        let n: usize = factors.iter().product();
        let decode = |mut i: usize| -> Vec<usize> {
            factors
                .iter()
                .map(|&d| {
                    let a = i % d;
                    i /= d;
                    a
                })
                .collect()
        };
        let encode = |v: &[usize]| -> usize {
            let mut i = 0;
            for (a, d) in v.iter().zip(factors).rev() {
                i = i * d + a;
            }
            i
        };
        let q = QuasigroupTable::from_fn(n, |x, y| {
            let (a, b) = (decode(x), decode(y));
            let s: Vec<usize> = a.iter().zip(&b).zip(factors).map(|((a, b), d)| (a + b) % d).collect();
            encode(&s)
        })
        .expect("direct product of cyclic groups is a Latin square");
        as_abelian_group(&q).expect("direct product of cyclic groups is abelian")
    }

    /// One representative per isomorphism class of abelian groups of order `n`.
    pub fn all_of_order(n: usize) -> Vec<Self> {
        if n == 1 {
            return vec![Self::cyclic(1)];
        }
        invariant_factor_lists(n).iter().map(|f| Self::product(f)).collect()
    }

    pub fn table(&self) -> &QuasigroupTable {
        &self.table
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.table.order()
    }

    #[inline]
    pub fn identity(&self) -> Element {
        self.identity
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        self.table.get(x, y)
    }

    #[inline]
    pub fn neg(&self, x: Element) -> Element {
        self.neg[x]
    }

    #[inline]
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg[y])
    }

    pub fn multiple(&self, k: usize, x: Element) -> Element {
        (0..k).fold(self.identity, |acc, _| self.add(acc, x))
    }

    pub fn element_order(&self, x: Element) -> usize {
        let mut k = 1;
        let mut acc = x;
        while acc != self.identity {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    /// Invariant factors `d₁ | … | d_k`, ascending; empty for the trivial group.
    pub fn canonical_form(&self) -> &[usize] {
        &self.canonical
    }

    /// Basis elements, `basis()[i]` of order `canonical_form()[i]`.
    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    /// Coordinates of `x` with respect to [`basis`](Self::basis).
    pub fn coordinates(&self, x: Element) -> &[usize] {
        &self.coords[x]
    }

    pub fn is_automorphism(&self, m: &Mapping) -> bool {
        self.automorphism_witness(m).is_none()
    }

    fn automorphism_witness(&self, m: &Mapping) -> Option<(Element, Element)> {
        let n = self.order();
        if m.order() != n {
            return Some((0, 0));
        }
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| m.apply(self.add(x, y)) != self.add(m.apply(x), m.apply(y)))
    }

    /// Checks `α(x − y + z) = α(x) − α(y) + α(z)` over all triples.
    pub fn is_holomorphism(&self, alpha: &Mapping) -> bool {
        alpha.order() == self.order() && self.holomorphism_witness(alpha).is_none()
    }

    fn holomorphism_witness(&self, alpha: &Mapping) -> Option<(Element, Element, Element)> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                let xy = self.sub(x, y);
                let axy = self.sub(alpha.apply(x), alpha.apply(y));
                for z in 0..n {
                    if alpha.apply(self.add(xy, z)) != self.add(axy, alpha.apply(z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Splits a holomorphism as `α(x) = φ(x) + k` with `k = α(0)`.
    pub fn decompose_holomorphism(&self, alpha: &Mapping) -> Result<HolomorphismDecomposition, GroupError> {
        if alpha.order() != self.order() {
            return Err(GroupError::OrderMismatch {
                expected: self.order(),
                found: alpha.order(),
            });
        }
        if let Some((x, y, z)) = self.holomorphism_witness(alpha) {
            return Err(GroupError::NotHolomorphism { x, y, z });
        }
        let k = alpha.apply(self.identity);
        let phi = Mapping::from_fn(self.order(), |x| self.sub(alpha.apply(x), k))
            .expect("translate of a bijection is a bijection");
        let phi = Automorphism::new(self, phi)?;
        let d = HolomorphismDecomposition { phi, k };
        debug_assert!((0..self.order()).all(|x| d.apply(self, x) == alpha.apply(x)));
        Ok(d)
    }

    /// True iff `a1(x + y) = a2(x) + a3(y)` for all pairs.
    pub fn split_affine_identity(&self, a1: &Mapping, a2: &Mapping, a3: &Mapping) -> bool {
        let n = self.order();
        if [a1, a2, a3].iter().any(|m| m.order() != n) {
            return false;
        }
        (0..n).all(|x| (0..n).all(|y| a1.apply(self.add(x, y)) == self.add(a2.apply(x), a3.apply(y))))
    }

    /// The affine map `x ↦ φ(x) + k`.
    pub fn affine(&self, phi: &Automorphism, k: Element) -> Mapping {
        Mapping::from_fn(self.order(), |x| self.add(phi.apply(x), k)).expect("affine maps are bijective")
    }

    /// Every automorphism, enumerated with the default limits and executor.
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>, GroupError> {
        self.automorphisms_with(&Limits::default(), Exec::default())
    }

    /// Enumerates `Aut(B; +)` by assigning basis images.
    ///
    /// A choice `b_i ↦ h_i` extends to an automorphism iff every `h_i` has
    /// order `d_i` and is independent of `h_1, …, h_{i-1}`; the search prunes on
    /// both conditions. Output order is lexicographic in `(h_1, …, h_k)`.
    pub fn automorphisms_with(&self, limits: &Limits, exec: Exec) -> Result<Vec<Automorphism>, GroupError> {
        let n = self.order();
        if n > limits.max_automorphism_order {
            return Err(GroupError::OrderTooLarge {
                order: n,
                max: limits.max_automorphism_order,
            });
        }
        if self.basis.is_empty() {
            return Ok(vec![Automorphism {
                map: Mapping::identity(n),
            }]);
        }
        let orders: Vec<usize> = (0..n).map(|x| self.element_order(x)).collect();
        let first: Vec<Element> = (0..n).filter(|&h| orders[h] == self.canonical[0]).collect();
        let chunks = exec.map(&first, |&h| {
            let mut sub = vec![false; n];
            sub[self.identity] = true;
            let mut out = Vec::new();
            let mut images = Vec::with_capacity(self.basis.len());
            if extend_subgroup(self, &mut sub, h, self.canonical[0]) {
                images.push(h);
                self.extend_images(&orders, &mut sub, &mut images, &mut out);
            }
            out
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    fn extend_images(
        &self,
        orders: &[usize],
        sub: &mut Vec<bool>,
        images: &mut Vec<Element>,
        out: &mut Vec<Automorphism>,
    ) {
        let i = images.len();
        if i == self.basis.len() {
            let map = Mapping::from_fn(self.order(), |x| {
                self.coords[x]
                    .iter()
                    .zip(images.iter())
                    .fold(self.identity, |acc, (&a, &h)| self.add(acc, self.multiple(a, h)))
            })
            .expect("independent basis images give a bijection");
            debug_assert!(self.is_automorphism(&map));
            out.push(Automorphism { map });
            return;
        }
        let d = self.canonical[i];
        for h in 0..self.order() {
            if orders[h] != d {
                continue;
            }
            let saved = sub.clone();
            if extend_subgroup(self, sub, h, d) {
                images.push(h);
                self.extend_images(orders, sub, images, out);
                images.pop();
            }
            *sub = saved;
        }
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianGroup")
            .field("order", &self.order())
            .field("identity", &self.identity)
            .field("canonical", &self.canonical)
            .finish()
    }
}

/// Isomorphism test via invariant factors.
pub fn groups_isomorphic(a: &AbelianGroup, b: &AbelianGroup) -> bool {
    a.canonical == b.canonical
}

/// Adds `⟨h⟩` to the subgroup `sub` if `⟨h⟩ ∩ sub = {0}` and `h` has order `d`.
fn extend_subgroup(g: &AbelianGroup, sub: &mut [bool], h: Element, d: usize) -> bool {
    let mut m = h;
    for _ in 1..d {
        if sub[m] {
            return false;
        }
        m = g.add(m, h);
    }
    if m != g.identity {
        return false;
    }
    let members: Vec<Element> = (0..g.order()).filter(|&s| sub[s]).collect();
    let mut m = h;
    for _ in 1..d {
        for &s in &members {
            sub[g.add(s, m)] = true;
        }
        m = g.add(m, h);
    }
    true
}

fn find_basis(g: &AbelianGroup, factors: &[usize]) -> Option<Vec<Element>> {
    fn go(
        g: &AbelianGroup,
        factors: &[usize],
        orders: &[usize],
        idx: usize,
        sub: &mut Vec<bool>,
        chosen: &mut Vec<Element>,
    ) -> bool {
        if idx == factors.len() {
            return true;
        }
        // largest factor first
        let d = factors[factors.len() - 1 - idx];
        for h in 0..g.order() {
            if orders[h] != d {
                continue;
            }
            let saved = sub.clone();
            if extend_subgroup(g, sub, h, d) {
                chosen.push(h);
                if go(g, factors, orders, idx + 1, sub, chosen) {
                    return true;
                }
                chosen.pop();
            }
            *sub = saved;
        }
        false
    }
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut sub = vec![false; g.order()];
    sub[g.identity] = true;
    let mut chosen = Vec::new();
    if go(g, factors, &orders, 0, &mut sub, &mut chosen) {
        chosen.reverse();
        Some(chosen)
    } else {
        None
    }
}

fn coordinates(g: &AbelianGroup, basis: &[Element], factors: &[usize]) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut coords = vec![Vec::new(); n];
    let total: usize = factors.iter().product();
    debug_assert_eq!(total, n);
    for idx in 0..total {
        let mut i = idx;
        let a: Vec<usize> = factors
            .iter()
            .map(|&d| {
                let r = i % d;
                i /= d;
                r
            })
            .collect();
        let x = a
            .iter()
            .zip(basis)
            .fold(g.identity, |acc, (&k, &b)| g.add(acc, g.multiple(k, b)));
        coords[x] = a;
    }
    coords
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Reads the invariant factors off the element-order statistics.
///
/// For each prime `p`, `|{x : p^k x = 0}| = p^{s_k}` with `s_k = Σ min(k, e_i)`
/// over the exponents `e_i` of the `p`-primary cyclic factors, so the number
/// of factors with `e_i ≥ k` is `s_k − s_{k−1}`.
fn invariant_factors_from_orders(g: &AbelianGroup) -> Vec<usize> {
    let n = g.order();
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    let mut per_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for (p, a) in prime_factors(n) {
        let mut s_prev = 0u32;
        let mut at_least = Vec::new();
        for k in 1..=a {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count();
            let mut s = 0;
            let mut c = count;
            while c > 1 {
                c /= p;
                s += 1;
            }
            at_least.push(s - s_prev);
            s_prev = s;
        }
        // exponents, descending
        let parts = at_least.first().copied().unwrap_or(0) as usize;
        let exps: Vec<u32> = (0..parts)
            .map(|j| at_least.iter().take_while(|&&m| m as usize > j).count() as u32)
            .collect();
        per_prime.push((p, exps));
    }
    let k = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..k)
        .map(|j| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(j).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    factors.sort_unstable();
    factors
}

/// An automorphism of a particular [`AbelianGroup`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Automorphism {
    map: Mapping,
}

impl Automorphism {
    pub fn new(group: &AbelianGroup, map: Mapping) -> Result<Self, GroupError> {
        if map.order() != group.order() {
            return Err(GroupError::OrderMismatch {
                expected: group.order(),
                found: map.order(),
            });
        }
        match group.automorphism_witness(&map) {
            Some((x, y)) => Err(GroupError::NotAutomorphism { x, y }),
            None => Ok(Automorphism { map }),
        }
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        Automorphism {
            map: Mapping::identity(group.order()),
        }
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.map.apply(x)
    }

    pub fn mapping(&self) -> &Mapping {
        &self.map
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: self.map.compose(&other.map),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            map: self.map.inverse(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut{:?}", self.map.images())
    }
}

/// `α(x) = φ(x) + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolomorphismDecomposition {
    pub phi: Automorphism,
    pub k: Element,
}

impl HolomorphismDecomposition {
    pub fn apply(&self, group: &AbelianGroup, x: Element) -> Element {
        group.add(self.phi.apply(x), self.k)
    }
}

/// Convenience: is the table an abelian group at all?
pub fn is_abelian_group(q: &QuasigroupTable) -> bool {
    q.check_property(Property::Associative) && q.check_property(Property::Commutative) && q.identity().is_some()
}
