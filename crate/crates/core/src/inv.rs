//! The group of invertible unital `R`-subbimodules of `S`.
//!
//! A member is a unital `R`-subbimodule `X <= S` admitting a partner `Y` with
//! product spans `XY = YX = R`. Enumeration is exhaustive over echelon-form
//! subspaces of `S`, pruned early by `R`-stability; the partner is unique
//! among unital candidates and is stored as a witness.

use crate::algebra::Extension;
use crate::bimodule::sub_bimodule_of_s;
use crate::error::{Error, Result};
use crate::exec;
use crate::group::FiniteGroup;
use crate::linalg::{all_subspaces, Subspace};

/// An invertible unital subbimodule with its inverse witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleSub {
    pub sub: Subspace,
    pub inverse: Subspace,
}

impl InvertibleSub {
    /// Canonical key: the RREF basis of the subspace itself (the inverse is
    /// determined by it).
    pub fn key(&self) -> Vec<u8> {
        self.sub.key()
    }
}

pub fn is_r_stable(ext: &Extension, space: &Subspace) -> bool {
    ext.r_space().basis().iter().all(|r| {
        space.basis().iter().all(|v| {
            space.contains(&ext.s().mul_vec(r, v)) && space.contains(&ext.s().mul_vec(v, r))
        })
    })
}

/// Stable and unital on both sides as an `R`-bimodule.
pub fn is_unital_r_subbimodule(ext: &Extension, space: &Subspace) -> bool {
    is_r_stable(ext, space)
        && sub_bimodule_of_s(ext, space)
            .map(|sub| sub.module.check_unital())
            .unwrap_or(false)
}

/// All unital `R`-subbimodules of `S`, in canonical enumeration order.
pub fn unital_subbimodules(ext: &Extension) -> Vec<Subspace> {
    let candidates = all_subspaces(ext.p(), ext.s().dim());
    exec::filter_map_collect(&candidates, |space| {
        is_unital_r_subbimodule(ext, space).then(|| space.clone())
    })
}

/// Exhaustively enumerates the invertible members, pairing each with its
/// unique inverse among the unital candidates.
pub fn enumerate_invertible_subs(ext: &Extension) -> Result<Vec<InvertibleSub>> {
    let unital = unital_subbimodules(ext);
    let paired = exec::filter_map_collect(&unital, |x| {
        let partners: Vec<&Subspace> = unital
            .iter()
            .filter(|y| {
                &ext.product_span(x, y) == ext.r_space()
                    && &ext.product_span(y, x) == ext.r_space()
            })
            .collect();
        match partners.len() {
            0 => None,
            n => Some((x.clone(), partners[0].clone(), n)),
        }
    });
    let mut out = Vec::with_capacity(paired.len());
    for (sub, inverse, count) in paired {
        if count > 1 {
            return Err(Error::CoherenceFailure(format!(
                "subbimodule {} has {} unital inverses; it must have exactly one",
                sub.render(),
                count
            )));
        }
        out.push(InvertibleSub { sub, inverse });
    }
    Ok(out)
}

/// The inverse of an invertible subbimodule, computed directly:
/// `Y = R . { s : sV <= R and Vs <= R } . R`. Returns `None` when the result
/// fails `VY = YV = R`, i.e. when `v` is not invertible.
pub fn partner_of(ext: &Extension, v: &Subspace) -> Option<Subspace> {
    let s = ext.s();
    let p = ext.p();
    let n = s.dim();
    let (_, r_proj, _) = ext.r_space().quotient_with_section();
    // rows of the linear system: s must multiply every basis vector of v into R
    let mut rows: Vec<Vec<u16>> = Vec::new();
    for vb in v.basis() {
        let left = s.right_mult_mat(vb); // s -> s * vb
        let right = s.left_mult_mat(vb); // s -> vb * s
        for m in [left, right] {
            let reduced = r_proj.mul(&m);
            for i in 0..reduced.rows() {
                rows.push(reduced.row(i).to_vec());
            }
        }
    }
    let raw = if rows.is_empty() {
        Subspace::full(p, n)
    } else {
        crate::linalg::Mat::from_rows(p, rows).kernel()
    };
    let y = ext.product_span(ext.r_space(), &ext.product_span(&raw, ext.r_space()));
    (&ext.product_span(v, &y) == ext.r_space() && &ext.product_span(&y, v) == ext.r_space())
        .then_some(y)
}

/// The group `Inv(R <= S)` under product spans, neutral element `R`.
#[derive(Debug, Clone)]
pub struct InvGroup {
    pub group: FiniteGroup,
    /// Elements aligned with `group.keys()` order.
    pub elems: Vec<InvertibleSub>,
}

impl InvGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn by_key(&self, key: &[u8]) -> Option<&InvertibleSub> {
        self.group.index_of(key).map(|i| &self.elems[i])
    }
}

pub fn inv_group(ext: &Extension) -> Result<InvGroup> {
    let elems = enumerate_invertible_subs(ext)?;
    let keys: Vec<Vec<u8>> = elems.iter().map(InvertibleSub::key).collect();
    let lookup: std::collections::HashMap<Vec<u8>, &InvertibleSub> =
        keys.iter().cloned().zip(elems.iter()).collect();
    let group = FiniteGroup::new(keys, |a, b| {
        let x = &lookup[a];
        let y = &lookup[b];
        ext.product_span(&x.sub, &y.sub).key()
    })?;
    if group.neutral_key() != ext.r_space().key() {
        return Err(Error::CoherenceFailure(
            "neutral element of Inv is not R".into(),
        ));
    }
    let elems_sorted = group
        .keys()
        .iter()
        .map(|k| lookup[k].clone())
        .collect();
    Ok(InvGroup { group, elems: elems_sorted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn fix_a_has_one_nontrivial_invertible() {
        let ext = samples::fix_a().unwrap();
        let g = inv_group(&ext).unwrap();
        assert_eq!(g.order(), 2);
        let nontrivial = g
            .elems
            .iter()
            .find(|e| &e.sub != ext.r_space())
            .expect("nontrivial class");
        let off_diag = Subspace::from_rows(2, 4, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(nontrivial.sub, off_diag);
        assert_eq!(nontrivial.inverse, off_diag, "the class has order two");
    }

    #[test]
    fn fix_c_is_trivial() {
        let ext = samples::fix_c().unwrap();
        let g = inv_group(&ext).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(&g.elems[0].sub, ext.r_space());
    }

    #[test]
    fn trivial_extension_is_trivial() {
        let ext = samples::fix_d().unwrap();
        let g = inv_group(&ext).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn fix_b_matches_fix_a_shape() {
        let ext = samples::fix_b().unwrap();
        let g = inv_group(&ext).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn stability_filter_rejects_scalar_line() {
        // span{I} is not stable under multiplication by e11
        let ext = samples::fix_a().unwrap();
        let line = Subspace::from_rows(2, 4, vec![vec![1, 0, 0, 1]]);
        assert!(!is_r_stable(&ext, &line));
    }

    #[test]
    fn partner_matches_enumeration() {
        let ext = samples::fix_a().unwrap();
        for e in enumerate_invertible_subs(&ext).unwrap() {
            assert_eq!(partner_of(&ext, &e.sub), Some(e.inverse));
        }
        let line = Subspace::from_rows(2, 4, vec![vec![0, 1, 0, 0]]);
        assert_eq!(partner_of(&ext, &line), None);
    }
}
