//! Balanced tensor products of bimodules over a middle algebra, computed as
//! quotients of the field tensor product by the balancing relations
//! `(m.r) (x) n - m (x) (r.n)`, together with the structure maps of the
//! monoidal category: unitors, associators and the tensor of maps.
//!
//! Field tensor coordinates follow `vec(x (x) y)[i * dim_n + j] = x_i y_j`,
//! matching [`Mat::kron`].

use crate::algebra::Algebra;
use crate::bimodule::{same_algebra, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use std::sync::Arc;

/// A balanced tensor product `m (x)_mid n` with the projection from, and a
/// section into, the field tensor product of the factors.
///
/// Invariants: `proj . sect = id`, `kernel(proj)` is the balancing subspace,
/// and the module's actions are the induced outer actions.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub module: Bimodule,
    pub proj: Mat,
    pub sect: Mat,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl TensorProduct {
    /// Class of a pure tensor `x (x) y`.
    pub fn pure(&self, x: &[u16], y: &[u16]) -> Vec<u16> {
        assert_eq!(x.len(), self.left_dim);
        assert_eq!(y.len(), self.right_dim);
        let p = self.module.p();
        let mut flat = vec![0u16; self.left_dim * self.right_dim];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                flat[i * self.right_dim + j] = crate::linalg::scalar::mul(p, a, b);
            }
        }
        self.proj.apply(&flat)
    }
}

/// The balancing subspace of `m (x)_F n` for the middle algebra.
fn balancing_space(mid: &Algebra, m: &Bimodule, n: &Bimodule) -> Subspace {
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let mut rows = Vec::with_capacity(mid.dim() * dm * dn);
    for t in 0..mid.dim() {
        let right_on_m = &m.right_act()[t];
        let left_on_n = &n.left_act()[t];
        for i in 0..dm {
            for j in 0..dn {
                let mut row = vec![0u16; dm * dn];
                // (m_i . b_t) (x) n_j
                for (k, &c) in right_on_m.col(i).iter().enumerate() {
                    row[k * dn + j] = c;
                }
                // - m_i (x) (b_t . n_j)
                for (l, &c) in left_on_n.col(j).iter().enumerate() {
                    let idx = i * dn + l;
                    row[idx] = crate::linalg::scalar::sub(p, row[idx], c);
                }
                rows.push(row);
            }
        }
    }
    Subspace::from_rows(p, dm * dn, rows)
}

/// `m (x)_mid n` for an `(A, mid)`-bimodule and a `(mid, C)`-bimodule.
///
/// The result carries the outer `(A, C)`-actions; it is unital whenever `m`
/// is left unital over `A` and `n` is right unital over `C`.
pub fn tensor_over(mid: &Arc<Algebra>, m: &Bimodule, n: &Bimodule) -> Result<TensorProduct> {
    if !same_algebra(m.right(), mid) || !same_algebra(n.left(), mid) {
        return Err(Error::IncompatibleAlgebras(
            "tensor_over: middle algebra must act on the right of m and the left of n".into(),
        ));
    }
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let balancing = balancing_space(mid, m, n);
    let (qdim, proj, sect) = balancing.quotient_with_section();
    let id_n = Mat::identity(p, dn);
    let id_m = Mat::identity(p, dm);
    let left_act = m
        .left_act()
        .iter()
        .map(|l| proj.mul(&l.kron(&id_n)).mul(&sect))
        .collect();
    let right_act = n
        .right_act()
        .iter()
        .map(|r| proj.mul(&id_m.kron(r)).mul(&sect))
        .collect();
    let module = Bimodule::new(m.left().clone(), n.right().clone(), qdim, left_act, right_act)?;
    Ok(TensorProduct { module, proj, sect, left_dim: dm, right_dim: dn })
}

/// The induced map `f (x) g` between two balanced tensor products. `f` must be
/// right-linear and `g` left-linear over the middle algebra for the result to
/// be well defined.
pub fn tensor_map(src: &TensorProduct, dst: &TensorProduct, f: &Mat, g: &Mat) -> Mat {
    assert_eq!(f.cols(), src.left_dim);
    assert_eq!(g.cols(), src.right_dim);
    assert_eq!(f.rows(), dst.left_dim);
    assert_eq!(g.rows(), dst.right_dim);
    dst.proj.mul(&f.kron(g)).mul(&src.sect)
}

/// Left unitor `alg (x)_alg m -> m`, `r (x) x -> r.x`, with its tensor data.
/// Invertible exactly when `m` is left unital.
pub fn left_unitor(alg: &Arc<Algebra>, m: &Bimodule) -> Result<(TensorProduct, Mat)> {
    let reg = Bimodule::regular(alg);
    let t = tensor_over(alg, &reg, m)?;
    let mut cols = Vec::with_capacity(alg.dim() * m.dim());
    for ti in 0..alg.dim() {
        let act = &m.left_act()[ti];
        for j in 0..m.dim() {
            cols.push(act.col(j));
        }
    }
    let eval = Mat::from_cols(m.p(), cols, m.dim()).mul(&t.sect);
    Ok((t, eval))
}

/// Right unitor `m (x)_alg alg -> m`, `x (x) r -> x.r`.
pub fn right_unitor(alg: &Arc<Algebra>, m: &Bimodule) -> Result<(TensorProduct, Mat)> {
    let reg = Bimodule::regular(alg);
    let t = tensor_over(alg, m, &reg)?;
    let mut cols = Vec::with_capacity(m.dim() * alg.dim());
    for i in 0..m.dim() {
        for tj in 0..alg.dim() {
            cols.push(m.right_act()[tj].col(i));
        }
    }
    let eval = Mat::from_cols(m.p(), cols, m.dim()).mul(&t.sect);
    Ok((t, eval))
}

/// A left-associated iterated tensor `((a (x) b) (x) c) ...` over one middle
/// algebra, with the total projection from (and section into) the field tensor
/// product of all leaves.
#[derive(Debug, Clone)]
pub struct Tower {
    pub leaf_dims: Vec<usize>,
    pub module: Bimodule,
    pub proj: Mat,
    pub sect: Mat,
}

pub fn left_tower(mid: &Arc<Algebra>, leaves: &[&Bimodule]) -> Result<Tower> {
    assert!(!leaves.is_empty(), "tower needs at least one leaf");
    let p = leaves[0].p();
    let mut module = leaves[0].clone();
    let mut proj = Mat::identity(p, module.dim());
    let mut sect = Mat::identity(p, module.dim());
    let mut leaf_dims = vec![module.dim()];
    for leaf in &leaves[1..] {
        let t = tensor_over(mid, &module, leaf)?;
        let id_leaf = Mat::identity(p, leaf.dim());
        proj = t.proj.mul(&proj.kron(&id_leaf));
        sect = sect.kron(&id_leaf).mul(&t.sect);
        leaf_dims.push(leaf.dim());
        module = t.module;
    }
    Ok(Tower { leaf_dims, module, proj, sect })
}

impl Tower {
    /// Quotient-level matrix of an F-level map into another tower.
    pub fn push_through(&self, dst: &Tower, f_level: &Mat) -> Mat {
        dst.proj.mul(f_level).mul(&self.sect)
    }
}

/// The associator `(a (x) b) (x) c -> a (x) (b (x) c)` as an invertible matrix
/// between the two quotient parenthesizations.
pub struct Associator {
    pub left: Tower,
    pub right_inner: TensorProduct,
    pub right_outer: TensorProduct,
    pub mat: Mat,
}

pub fn associator(
    mid: &Arc<Algebra>,
    a: &Bimodule,
    b: &Bimodule,
    c: &Bimodule,
) -> Result<Associator> {
    let p = a.p();
    let left = left_tower(mid, &[a, b, c])?;
    let right_inner = tensor_over(mid, b, c)?;
    let right_outer = tensor_over(mid, a, &right_inner.module)?;
    let proj_right = right_outer
        .proj
        .mul(&Mat::identity(p, a.dim()).kron(&right_inner.proj));
    let mat = proj_right.mul(&left.sect);
    if mat
        .inverse()
        .is_none()
    {
        return Err(Error::CoherenceFailure(
            "associator between parenthesizations is singular".into(),
        ));
    }
    Ok(Associator { left, right_inner, right_outer, mat })
}

/// The canonical surjection `x (x)_R y -> x (x)_S y` when the balancing over
/// `R` refines the balancing over `S` (i.e. `R <= S`). Both products must be
/// built on the same pair of spaces.
pub fn change_of_rings(fine: &TensorProduct, coarse: &TensorProduct) -> Mat {
    assert_eq!(fine.left_dim, coarse.left_dim);
    assert_eq!(fine.right_dim, coarse.right_dim);
    coarse.proj.mul(&fine.sect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{iso_search, sub_bimodule_of_s, Side};
    use crate::samples;

    #[test]
    fn ring_tensor_ring_is_ring() {
        let ext = samples::fix_a().unwrap();
        let r = Bimodule::regular(ext.r());
        let t = tensor_over(ext.r(), &r, &r).unwrap();
        assert_eq!(t.module.dim(), r.dim());
        assert!(iso_search(&t.module, &r, Side::Both).unwrap().is_some());
    }

    #[test]
    fn unitors_are_invertible_for_unital_modules() {
        let ext = samples::fix_c().unwrap();
        let s_rr = crate::bimodule::s_as_r_r(&ext);
        let (_, lu) = left_unitor(ext.r(), &s_rr).unwrap();
        let (_, ru) = right_unitor(ext.r(), &s_rr).unwrap();
        assert!(lu.is_invertible());
        assert!(ru.is_invertible());
    }

    #[test]
    fn off_diagonal_square_is_the_base_ring() {
        // X = span{E12, E21} in M_2(F_2): X (x)_R X has dimension 2 and is
        // isomorphic to R as an R-bimodule.
        let ext = samples::fix_a().unwrap();
        let x = Subspace::from_rows(2, 4, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        let xm = sub_bimodule_of_s(&ext, &x).unwrap().module;
        let t = tensor_over(ext.r(), &xm, &xm).unwrap();
        assert_eq!(t.module.dim(), 2);
        let r = Bimodule::regular(ext.r());
        assert!(iso_search(&t.module, &r, Side::Both).unwrap().is_some());
    }

    #[test]
    fn tensor_with_zero_is_zero() {
        let ext = samples::fix_a().unwrap();
        let r = Bimodule::regular(ext.r());
        let z = Bimodule::zero(ext.r().clone(), ext.r().clone());
        let t = tensor_over(ext.r(), &r, &z).unwrap();
        assert_eq!(t.module.dim(), 0);
    }

    #[test]
    fn tensor_dimension_bound() {
        let ext = samples::fix_b().unwrap();
        let s_rr = crate::bimodule::s_as_r_r(&ext);
        let t = tensor_over(ext.r(), &s_rr, &s_rr).unwrap();
        assert!(t.module.dim() <= s_rr.dim() * s_rr.dim());
        // balancing is nontrivial here, so the bound is strict
        assert!(t.module.dim() < s_rr.dim() * s_rr.dim());
    }

    #[test]
    fn tensor_result_is_unital() {
        let ext = samples::fix_c().unwrap();
        let s_rr = crate::bimodule::s_as_r_r(&ext);
        let t = tensor_over(ext.r(), &s_rr, &s_rr).unwrap();
        assert!(t.module.check_unital());
    }

    #[test]
    fn associator_exists_and_intertwines() {
        let ext = samples::fix_a().unwrap();
        let x = Subspace::from_rows(2, 4, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        let xm = sub_bimodule_of_s(&ext, &x).unwrap().module;
        let r = Bimodule::regular(ext.r());
        let assoc = associator(ext.r(), &xm, &r, &xm).unwrap();
        // it must be an R-bimodule map between the two parenthesizations
        crate::bimodule::BimoduleMap::new(
            assoc.left.module.clone(),
            assoc.right_outer.module.clone(),
            assoc.mat.clone(),
            Side::Both,
        )
        .unwrap();
    }

    #[test]
    fn change_of_rings_is_surjective() {
        let ext = samples::fix_b().unwrap();
        let s_rr = crate::bimodule::s_as_r_r(&ext);
        let s_ss = Bimodule::regular(ext.s());
        let over_r = tensor_over(ext.r(), &s_rr, &s_rr).unwrap();
        let over_s = tensor_over(ext.s(), &s_ss, &s_ss).unwrap();
        let omega = change_of_rings(&over_r, &over_s);
        assert_eq!(omega.rank(), over_s.module.dim());
    }
}
