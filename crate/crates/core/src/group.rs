//! Explicit finite groups on canonical byte keys, homomorphisms between them,
//! and exactness checking.
//!
//! Groups are extensional: the element set is a sorted list of keys produced
//! by the owning constructor (RREF bases for subbimodules, matrices for maps,
//! class certificates for coupling classes) and the operation is materialized
//! as a full table. Keys make equality O(1) and reports reproducible.

use crate::error::{Error, Result};
use std::collections::HashMap;

/// Exhaustive associativity check up to this order; sampled above it.
const ASSOC_EXHAUSTIVE_LIMIT: usize = 256;
const ASSOC_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    keys: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    table: Vec<u32>,
    neutral: usize,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from its element keys and operation, validating closure,
    /// associativity (exhaustive for order <= 256, sampled with a fixed seed
    /// above as a tripwire for canonical-key bugs), the neutral law and
    /// inverses. Keys are sorted, so identical element sets give identical
    /// groups regardless of discovery order.
    pub fn new<F>(mut keys: Vec<Vec<u8>>, mul: F) -> Result<FiniteGroup>
    where
        F: Fn(&[u8], &[u8]) -> Vec<u8>,
    {
        keys.sort();
        keys.dedup();
        if keys.is_empty() {
            return Err(Error::InvalidGroup("empty element set".into()));
        }
        let n = keys.len();
        let index: HashMap<Vec<u8>, usize> =
            keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = mul(&keys[i], &keys[j]);
                let Some(&k) = index.get(&prod) else {
                    return Err(Error::InvalidGroup(format!(
                        "not closed: product of elements {i} and {j} is outside the set"
                    )));
                };
                table[i * n + j] = k as u32;
            }
        }
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        let neutral = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no neutral element".into()))?;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| at(x, y) == neutral && at(y, x) == neutral)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
            inverse[x] = inv as u32;
        }
        let check_triple = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= ASSOC_EXHAUSTIVE_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check_triple(a, b, c) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails on ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state: u64 = 0x5EED_5EED_5EED_5EED;
            for _ in 0..ASSOC_SAMPLES {
                let mut draw = || {
                    state = splitmix64(state);
                    (state % n as u64) as usize
                };
                let (a, b, c) = (draw(), draw(), draw());
                if !check_triple(a, b, c) {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails on sampled triple ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup { keys, index, table, neutral, inverse })
    }

    pub fn trivial(neutral_key: Vec<u8>) -> FiniteGroup {
        FiniteGroup::new(vec![neutral_key], |a, _| a.to_vec()).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[Vec<u8>] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &[u8] {
        &self.keys[i]
    }

    pub fn neutral_key(&self) -> &[u8] {
        &self.keys[self.neutral]
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.index.contains_key(key)
    }

    pub fn index_of(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Option<&[u8]> {
        let (&i, &j) = (self.index.get(a)?, self.index.get(b)?);
        Some(&self.keys[self.table[i * self.keys.len() + j] as usize])
    }

    pub fn inverse_key(&self, a: &[u8]) -> Option<&[u8]> {
        let &i = self.index.get(a)?;
        Some(&self.keys[self.inverse[i] as usize])
    }

    /// The subgroup on a subset of keys (validated to be closed).
    pub fn subgroup(&self, keys: Vec<Vec<u8>>) -> Result<FiniteGroup> {
        for k in &keys {
            if !self.contains(k) {
                return Err(Error::InvalidGroup("subgroup key outside parent".into()));
            }
        }
        FiniteGroup::new(keys, |a, b| self.mul(a, b).expect("parent closure").to_vec())
    }

    pub fn center(&self) -> FiniteGroup {
        let central: Vec<Vec<u8>> = self
            .keys
            .iter()
            .filter(|a| {
                self.keys
                    .iter()
                    .all(|b| self.mul(a, b) == self.mul(b, a))
            })
            .cloned()
            .collect();
        self.subgroup(central).expect("center is a subgroup")
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct GroupHom {
    dom: FiniteGroup,
    cod: FiniteGroup,
    map: Vec<u32>,
}

impl GroupHom {
    /// Builds a homomorphism from a key-level function, validating that the
    /// neutral maps to the neutral and multiplicativity on all pairs.
    pub fn new<F>(dom: FiniteGroup, cod: FiniteGroup, f: F) -> Result<GroupHom>
    where
        F: Fn(&[u8]) -> Vec<u8>,
    {
        let mut map = Vec::with_capacity(dom.order());
        for k in dom.keys() {
            let img = f(k);
            let Some(idx) = cod.index_of(&img) else {
                return Err(Error::InvalidGroup(
                    "homomorphism image outside codomain".into(),
                ));
            };
            map.push(idx as u32);
        }
        let hom = GroupHom { dom, cod, map };
        if hom.apply(hom.dom.neutral_key()) != hom.cod.neutral_key() {
            return Err(Error::InvalidGroup("neutral not preserved".into()));
        }
        for a in hom.dom.keys() {
            for b in hom.dom.keys() {
                let ab = hom.dom.mul(a, b).expect("closure");
                let lhs = hom.apply(ab);
                let rhs = hom
                    .cod
                    .mul(hom.apply(a), hom.apply(b))
                    .expect("codomain closure");
                if lhs != rhs {
                    return Err(Error::InvalidGroup(format!(
                        "not multiplicative on pair ({a:?}, {b:?})"
                    )));
                }
            }
        }
        Ok(hom)
    }

    pub fn dom(&self) -> &FiniteGroup {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteGroup {
        &self.cod
    }

    pub fn apply(&self, key: &[u8]) -> &[u8] {
        let i = self.dom.index_of(key).expect("key in domain");
        self.cod.key(self.map[i] as usize)
    }

    pub fn kernel(&self) -> FiniteGroup {
        let neutral = self.cod.neutral_key();
        let keys = self
            .dom
            .keys()
            .iter()
            .filter(|k| self.apply(k) == neutral)
            .cloned()
            .collect();
        self.dom.subgroup(keys).expect("kernel is a subgroup")
    }

    pub fn image(&self) -> FiniteGroup {
        let mut keys: Vec<Vec<u8>> = self.dom.keys().iter().map(|k| self.apply(k).to_vec()).collect();
        keys.sort();
        keys.dedup();
        self.cod.subgroup(keys).expect("image is a subgroup")
    }
}

/// Exactness verdict at the middle node of `f: . -> G`, `g: G -> .`.
#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub pass: bool,
    /// `im(f) subset of ker(g)` alone (weak exactness), for finer diagnostics.
    pub weak: bool,
    pub image_not_in_kernel: Vec<Vec<u8>>,
    pub kernel_not_in_image: Vec<Vec<u8>>,
}

/// Checks `im(f) = ker(g)`; the symmetric differences are reported as witnesses.
pub fn exact_at(f: &GroupHom, g: &GroupHom) -> Result<ExactnessReport> {
    if f.cod() != g.dom() {
        return Err(Error::InvalidGroup(
            "exact_at: codomain of f differs from domain of g".into(),
        ));
    }
    let image = f.image();
    let kernel = g.kernel();
    let image_not_in_kernel: Vec<Vec<u8>> = image
        .keys()
        .iter()
        .filter(|k| !kernel.contains(k))
        .cloned()
        .collect();
    let kernel_not_in_image: Vec<Vec<u8>> = kernel
        .keys()
        .iter()
        .filter(|k| !image.contains(k))
        .cloned()
        .collect();
    Ok(ExactnessReport {
        pass: image_not_in_kernel.is_empty() && kernel_not_in_image.is_empty(),
        weak: image_not_in_kernel.is_empty(),
        image_not_in_kernel,
        kernel_not_in_image,
    })
}

/// True iff every element of `h` commutes with every element of `g`.
/// `h`'s keys must form a subset of `g`'s.
pub fn is_subgroup_of_center(h: &FiniteGroup, g: &FiniteGroup) -> Result<bool> {
    for k in h.keys() {
        if !g.contains(k) {
            return Err(Error::InvalidGroup("h is not a subset of g".into()));
        }
    }
    Ok(h.keys()
        .iter()
        .all(|a| g.keys().iter().all(|b| g.mul(a, b) == g.mul(b, a))))
}
