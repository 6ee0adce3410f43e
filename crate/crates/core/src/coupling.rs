//! Couplings: a unital `R`-bimodule `P` mapped `R`-bilinearly into a unital
//! `S`-bimodule `X` so that both induced balanced maps
//! `P (x)_R S -> X`, `p (x) s -> phi(p) s` and `S (x)_R P -> X`,
//! `s (x) p -> s phi(p)` are isomorphisms, with invertibility witnesses for
//! both components retained.
//!
//! Couplings multiply componentwise through the change-of-rings surjection,
//! invert through the dual construction driven by `Theta`, and compare by
//! searching for a commuting pair of bilinear isomorphisms. The group of
//! classes reachable from the two canonical families (inclusions of
//! invertible subbimodules and twists along `R`-fixing ring automorphisms)
//! is materialized as a [`ClassGroup`].

use crate::algebra::{unit_vec, Extension};
use crate::bimodule::{
    iso_search, restrict_left, restrict_right, s_as_r_s, s_as_s_r, same_algebra,
    sub_bimodule_of_s, twist, BimoduleMap, Bimodule, Side,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::inv::{partner_of, InvertibleSub};
use crate::linalg::{combo_count, index_to_coeffs, Mat, Subspace};
use crate::picard::{
    mult_maps, pair_from_inv, pair_from_twist, pair_product, pair_trivial, theta, PicardPair,
};
use crate::tensor::{change_of_rings, left_unitor, right_unitor, tensor_map, tensor_over,
    TensorProduct};
use std::collections::HashMap;

/// One of the two induced balanced maps, with its domain tensor product.
#[derive(Debug, Clone)]
pub struct BalancedMap {
    pub tensor: TensorProduct,
    pub mat: Mat,
}

/// A verified object `(P -> X)` with all invertibility witnesses.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub p: Bimodule,
    pub x: Bimodule,
    /// `x.dim x p.dim`, `R`-bilinear into the restriction of `X`.
    pub phi: Mat,
    /// `P (x)_R S -> X`
    pub bar_r: BalancedMap,
    /// `S (x)_R P -> X`
    pub bar_l: BalancedMap,
    pub pic_p: PicardPair,
    pub pic_x: PicardPair,
}

impl Coupling {
    pub fn render(&self) -> String {
        format!(
            "(P dim {} -> X dim {}, phi {})",
            self.p.dim(),
            self.x.dim(),
            self.phi.render()
        )
    }
}

/// Restriction of an `(S, S)`-bimodule to `(R, R)`.
fn restrict_both(ext: &Extension, m: &Bimodule) -> Bimodule {
    restrict_left(ext, &restrict_right(ext, m))
}

/// Builds the two balanced maps of a candidate `phi` without demanding
/// invertibility.
pub fn balanced_maps(
    ext: &Extension,
    p_mod: &Bimodule,
    x_mod: &Bimodule,
    phi: &Mat,
) -> Result<(BalancedMap, BalancedMap)> {
    let p = ext.p();
    let ds = ext.s().dim();
    let bar_r = {
        let tensor = tensor_over(ext.r(), p_mod, &s_as_r_s(ext))?;
        let mut cols = Vec::with_capacity(p_mod.dim() * ds);
        for i in 0..p_mod.dim() {
            let phi_p = phi.col(i);
            for j in 0..ds {
                cols.push(x_mod.right_act()[j].apply(&phi_p));
            }
        }
        let mat = Mat::from_cols(p, cols, x_mod.dim()).mul(&tensor.sect);
        BalancedMap { tensor, mat }
    };
    let bar_l = {
        let tensor = tensor_over(ext.r(), &s_as_s_r(ext), p_mod)?;
        let mut cols = Vec::with_capacity(ds * p_mod.dim());
        for i in 0..ds {
            for j in 0..p_mod.dim() {
                cols.push(x_mod.left_act()[i].apply(&phi.col(j)));
            }
        }
        let mat = Mat::from_cols(p, cols, x_mod.dim()).mul(&tensor.sect);
        BalancedMap { tensor, mat }
    };
    Ok((bar_r, bar_l))
}

/// Builds and fully verifies a coupling: the components are unital over the
/// correct algebras, `phi` is `R`-bilinear, the invertibility witnesses match
/// the components, and both balanced maps are isomorphisms (each is computed
/// and checked; with valid witnesses one forces the other, which is
/// cross-asserted). `phi` is injective whenever the maps are isomorphisms.
pub fn verify_coupling(
    ext: &Extension,
    p_mod: Bimodule,
    x_mod: Bimodule,
    phi: Mat,
    pic_p: PicardPair,
    pic_x: PicardPair,
) -> Result<Coupling> {
    if !same_algebra(p_mod.left(), ext.r()) || !same_algebra(p_mod.right(), ext.r()) {
        return Err(Error::IncompatibleAlgebras("P must be an R-bimodule".into()));
    }
    if !same_algebra(x_mod.left(), ext.s()) || !same_algebra(x_mod.right(), ext.s()) {
        return Err(Error::IncompatibleAlgebras("X must be an S-bimodule".into()));
    }
    if !p_mod.check_unital() || !x_mod.check_unital() {
        return Err(Error::InvalidBimodule("components must be unital".into()));
    }
    if pic_p.p != p_mod || pic_x.p != x_mod {
        return Err(Error::InvalidWitness(
            "invertibility witnesses do not match the components".into(),
        ));
    }
    BimoduleMap::new(p_mod.clone(), restrict_both(ext, &x_mod), phi.clone(), Side::Both)
        .map_err(|e| Error::NotIntertwining(format!("phi is not R-bilinear: {e}")))?;
    let (bar_r, bar_l) = balanced_maps(ext, &p_mod, &x_mod, &phi)?;
    let r_ok = bar_r.mat.rows() == bar_r.mat.cols() && bar_r.mat.is_invertible();
    let l_ok = bar_l.mat.rows() == bar_l.mat.cols() && bar_l.mat.is_invertible();
    if r_ok != l_ok {
        return Err(Error::CoherenceFailure(format!(
            "balanced maps disagree with valid witnesses: right {r_ok}, left {l_ok}"
        )));
    }
    if !r_ok {
        return Err(Error::NotInvertible(
            "balanced map P (x) S -> X (and its mirror) is not an isomorphism".into(),
        ));
    }
    if phi.rank() != p_mod.dim() {
        return Err(Error::CoherenceFailure(
            "balanced maps are isomorphisms but phi is not injective".into(),
        ));
    }
    // the balanced maps intertwine the outer actions by construction; tripwire
    BimoduleMap::new(
        bar_r.tensor.module.clone(),
        restrict_left(ext, &x_mod),
        bar_r.mat.clone(),
        Side::Both,
    )?;
    BimoduleMap::new(
        bar_l.tensor.module.clone(),
        restrict_right(ext, &x_mod),
        bar_l.mat.clone(),
        Side::Both,
    )?;
    Ok(Coupling { p: p_mod, x: x_mod, phi, bar_r, bar_l, pic_p, pic_x })
}

/// Report on the two balanced maps of a candidate, independent of witnesses:
/// the equivalence of the two invertibilities is only claimed when both
/// components carry valid invertibility witnesses.
#[derive(Debug, Clone)]
pub struct BalancedIsoReport {
    pub bar_r_invertible: bool,
    pub bar_l_invertible: bool,
    pub equivalent: bool,
    pub phi_injective: bool,
    pub preconditions_met: bool,
}

pub fn balanced_iso_report(
    ext: &Extension,
    p_mod: &Bimodule,
    x_mod: &Bimodule,
    phi: &Mat,
    pic_p: Option<&PicardPair>,
    pic_x: Option<&PicardPair>,
) -> Result<BalancedIsoReport> {
    let (bar_r, bar_l) = balanced_maps(ext, p_mod, x_mod, phi)?;
    let bar_r_invertible = bar_r.mat.rows() == bar_r.mat.cols() && bar_r.mat.is_invertible();
    let bar_l_invertible = bar_l.mat.rows() == bar_l.mat.cols() && bar_l.mat.is_invertible();
    let preconditions_met = match (pic_p, pic_x) {
        (Some(pp), Some(px)) => &pp.p == p_mod && &px.p == x_mod,
        _ => false,
    };
    Ok(BalancedIsoReport {
        bar_r_invertible,
        bar_l_invertible,
        equivalent: bar_r_invertible == bar_l_invertible,
        phi_injective: phi.rank() == p_mod.dim(),
        preconditions_met,
    })
}

/// The unit object `(R -> S)` along the inclusion.
pub fn neutral_coupling(ext: &Extension) -> Result<Coupling> {
    let p_mod = Bimodule::regular(ext.r());
    let x_mod = Bimodule::regular(ext.s());
    verify_coupling(
        ext,
        p_mod,
        x_mod,
        ext.embed().clone(),
        pair_trivial(ext.r())?,
        pair_trivial(ext.s())?,
    )
}

/// `X -> ([X] -> [S])`: an invertible subbimodule included into `S`.
pub fn inclusion_coupling(ext: &Extension, x: &InvertibleSub) -> Result<Coupling> {
    mult_maps(ext, x)?;
    let p_mod = sub_bimodule_of_s(ext, &x.sub)?.module;
    let x_mod = Bimodule::regular(ext.s());
    let phi = Mat::from_cols(ext.p(), x.sub.basis().to_vec(), ext.s().dim());
    verify_coupling(
        ext,
        p_mod,
        x_mod,
        phi,
        pair_from_inv(ext, x)?,
        pair_trivial(ext.s())?,
    )
}

/// `gamma -> ([R] -> [S_gamma])`: the twisted unit object. `gamma` must be a
/// ring automorphism of `S` fixing `R` pointwise.
pub fn twist_coupling(ext: &Extension, gamma: &Mat) -> Result<Coupling> {
    if !ext.r_space().basis().iter().all(|v| gamma.apply(v) == *v) {
        return Err(Error::InvalidWitness(
            "twisting automorphism does not fix R pointwise".into(),
        ));
    }
    let p_mod = Bimodule::regular(ext.r());
    let x_mod = twist(&Bimodule::regular(ext.s()), gamma)?;
    verify_coupling(
        ext,
        p_mod,
        x_mod,
        ext.embed().clone(),
        pair_trivial(ext.r())?,
        pair_from_twist(ext.s(), gamma)?,
    )
}

/// Product of two couplings: components tensored over `R` and `S`, the map
/// composed with the change-of-rings surjection, witnesses multiplied.
pub fn coupling_product(ext: &Extension, a: &Coupling, b: &Coupling) -> Result<Coupling> {
    let tp = tensor_over(ext.r(), &a.p, &b.p)?;
    let ax_r = restrict_right(ext, &a.x);
    let bx_l = restrict_left(ext, &b.x);
    let tx_r = tensor_over(ext.r(), &ax_r, &bx_l)?;
    let tx_s = tensor_over(ext.s(), &a.x, &b.x)?;
    let omega = change_of_rings(&tx_r, &tx_s);
    let phi = omega.mul(&tensor_map(&tp, &tx_r, &a.phi, &b.phi));
    verify_coupling(
        ext,
        tp.module,
        tx_s.module,
        phi,
        pair_product(ext.r(), &a.pic_p, &b.pic_p)?,
        pair_product(ext.s(), &a.pic_x, &b.pic_x)?,
    )
}

/// Inverse of a coupling, constructed (not searched): with `Q` and `Y` the
/// witnessed inverses of `P` and `X`, the connecting map is
///
/// `psi: Q = R (x) Q -> Hom(P, R).R -> Hom(X, S).S -> S (x) Y = Y`
///
/// where the middle step sends `sigma` to `(sigma (x) S) . bar_r^-1` and the
/// outer identifications are `Theta` over `R` and over `S`. The defining
/// commuting square `l_X . omega . (phi (x) psi) = embed . l_P` is asserted
/// exactly.
pub fn coupling_inverse(ext: &Extension, a: &Coupling) -> Result<Coupling> {
    let p = ext.p();
    let r_reg = Bimodule::regular(ext.r());
    let s_reg = Bimodule::regular(ext.s());
    let theta_r = theta(&a.pic_p, &r_reg)?;
    let gamma_s = theta(&a.pic_x, &s_reg)?;

    // left unitor evaluations matching the theta domains
    let lu_q = {
        let q = &a.pic_p.q;
        let mut cols = Vec::with_capacity(ext.r().dim() * q.dim());
        for t in 0..ext.r().dim() {
            for j in 0..q.dim() {
                cols.push(q.left_act()[t].col(j));
            }
        }
        Mat::from_cols(p, cols, q.dim()).mul(&theta_r.domain.sect)
    };
    let lu_y = {
        let y = &a.pic_x.q;
        let mut cols = Vec::with_capacity(ext.s().dim() * y.dim());
        for t in 0..ext.s().dim() {
            for j in 0..y.dim() {
                cols.push(y.left_act()[t].col(j));
            }
        }
        Mat::from_cols(p, cols, y.dim()).mul(&gamma_s.domain.sect)
    };
    let lu_q_inv = lu_q
        .inverse()
        .ok_or_else(|| Error::InvalidWitness("Q is not left unital".into()))?;

    // dualization sigma -> (sigma (x) S) . bar_r^-1 in unital-part coordinates
    let bar_r_inv = a
        .bar_r
        .mat
        .inverse()
        .expect("coupling was verified");
    let (t_rs, lu_s) = left_unitor(ext.r(), &s_as_r_s(ext))?;
    let phi_star = {
        let dim_in = theta_r.unital.module.dim();
        let mut cols = Vec::with_capacity(dim_in);
        for h in 0..dim_in {
            let sigma = theta_r.hom_mat_of_unital_coords(&unit_vec(p, dim_in, h));
            let sigma_tensor_s = tensor_map(&a.bar_r.tensor, &t_rs, &sigma, &Mat::identity(p, ext.s().dim()));
            let dual = lu_s.mul(&sigma_tensor_s).mul(&bar_r_inv);
            let coords = gamma_s.unital_coords_of_hom_mat(&dual).ok_or_else(|| {
                Error::CoherenceFailure(
                    "dualized map leaves the unital part of Hom(X, S)".into(),
                )
            })?;
            cols.push(coords);
        }
        Mat::from_cols(p, cols, gamma_s.unital.module.dim())
    };
    let gamma_s_inv = gamma_s
        .mat
        .inverse()
        .expect("Theta over S was verified bijective");
    let psi = lu_y
        .mul(&gamma_s_inv)
        .mul(&phi_star)
        .mul(&theta_r.mat)
        .mul(&lu_q_inv);

    let inverse = verify_coupling(
        ext,
        a.pic_p.q.clone(),
        a.pic_x.q.clone(),
        psi.clone(),
        a.pic_p.swap(),
        a.pic_x.swap(),
    )?;

    // the commuting square: l_X . omega_{X,Y} . (phi (x) psi) = embed . l_P
    let x_r = restrict_right(ext, &a.x);
    let y_l = restrict_left(ext, &a.pic_x.q);
    let txy_r = tensor_over(ext.r(), &x_r, &y_l)?;
    let omega = change_of_rings(&txy_r, &a.pic_x.pq);
    let lhs = a
        .pic_x
        .l
        .mul(&omega)
        .mul(&tensor_map(&a.pic_p.pq, &txy_r, &a.phi, &psi));
    let rhs = ext.embed().mul(&a.pic_p.l);
    if lhs != rhs {
        return Err(Error::CoherenceFailure(
            "inverse coupling square does not commute".into(),
        ));
    }
    Ok(inverse)
}

/// Class equality: searches for `R`-bilinear `alpha: P -> P'` and `S`-bilinear
/// `beta: X -> X'`, both invertible, with `phi' . alpha = beta . phi`. The
/// candidate space is the joint solution space of all three linear
/// constraints, scanned in coefficient-lexicographic order.
pub fn class_witness(ext: &Extension, a: &Coupling, b: &Coupling) -> Result<Option<(Mat, Mat)>> {
    if a.p.dim() != b.p.dim() || a.x.dim() != b.x.dim() {
        return Ok(None);
    }
    let p = ext.p();
    let (dpa, dpb) = (a.p.dim(), b.p.dim());
    let (dxa, dxb) = (a.x.dim(), b.x.dim());
    let n_alpha = dpb * dpa;
    let n_beta = dxb * dxa;
    let unknowns = n_alpha + n_beta;
    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut intertwine = |acts_a: &[Mat], acts_b: &[Mat], offset: usize, dm: usize, dn: usize| {
        for (act_a, act_b) in acts_a.iter().zip(acts_b) {
            for r in 0..dn {
                for c in 0..dm {
                    let mut row = vec![0u16; unknowns];
                    for k in 0..dm {
                        let idx = offset + r * dm + k;
                        row[idx] = crate::linalg::scalar::add(p, row[idx], act_a.get(k, c));
                    }
                    for k in 0..dn {
                        let idx = offset + k * dm + c;
                        row[idx] = crate::linalg::scalar::sub(p, row[idx], act_b.get(r, k));
                    }
                    rows.push(row);
                }
            }
        }
    };
    intertwine(a.p.left_act(), b.p.left_act(), 0, dpa, dpb);
    intertwine(a.p.right_act(), b.p.right_act(), 0, dpa, dpb);
    intertwine(a.x.left_act(), b.x.left_act(), n_alpha, dxa, dxb);
    intertwine(a.x.right_act(), b.x.right_act(), n_alpha, dxa, dxb);
    // phi' . alpha = beta . phi
    for r in 0..dxb {
        for c in 0..dpa {
            let mut row = vec![0u16; unknowns];
            for k in 0..dpb {
                let idx = k * dpa + c;
                row[idx] = crate::linalg::scalar::add(p, row[idx], b.phi.get(r, k));
            }
            for k in 0..dxa {
                let idx = n_alpha + r * dxa + k;
                row[idx] = crate::linalg::scalar::sub(p, row[idx], a.phi.get(k, c));
            }
            rows.push(row);
        }
    }
    let solution = Mat::from_rows(p, rows).kernel();
    let total = combo_count(p, solution.dim(), crate::bimodule::SCAN_BUDGET)?;
    if total == 0 {
        return Ok(None);
    }
    Ok(crate::exec::first_match(total - 1, |i| {
        let coeffs = index_to_coeffs(p, solution.dim(), i + 1);
        let mut flat = vec![0u16; unknowns];
        for (basis_vec, &c) in solution.basis().iter().zip(&coeffs) {
            if c != 0 {
                for (slot, &v) in flat.iter_mut().zip(basis_vec) {
                    *slot =
                        crate::linalg::scalar::add(p, *slot, crate::linalg::scalar::mul(p, c, v));
                }
            }
        }
        let alpha = Mat::from_flat(p, dpb, dpa, flat[..n_alpha].to_vec());
        let beta = Mat::from_flat(p, dxb, dxa, flat[n_alpha..].to_vec());
        (alpha.is_invertible() && beta.is_invertible()).then_some((alpha, beta))
    }))
}

/// Witness that `[X] = [S]`: the first invertible `S`-bilinear `X -> S`.
pub fn x_trivial_witness(ext: &Extension, a: &Coupling) -> Result<Option<Mat>> {
    iso_search(&a.x, &Bimodule::regular(ext.s()), Side::Both)
}

/// Witness that `[P] = [R]`: the first invertible `R`-bilinear `R -> P`.
pub fn p_trivial_witness(ext: &Extension, a: &Coupling) -> Result<Option<Mat>> {
    iso_search(&Bimodule::regular(ext.r()), &a.p, Side::Both)
}

/// Reduction along a trivial `X`-component: `V = beta(phi(P))` is an
/// invertible subbimodule of `S` whose inclusion coupling is class-equal to
/// the input.
pub fn coupling_to_invertible_sub(
    ext: &Extension,
    a: &Coupling,
    beta: &Mat,
) -> Result<InvertibleSub> {
    BimoduleMap::new(
        a.x.clone(),
        Bimodule::regular(ext.s()),
        beta.clone(),
        Side::Both,
    )
    .map_err(|e| Error::NotIntertwining(format!("beta is not S-bilinear: {e}")))?;
    if !beta.is_invertible() {
        return Err(Error::NotInvertible("beta is singular".into()));
    }
    let image = beta.mul(&a.phi);
    let v = Subspace::from_rows(
        ext.p(),
        ext.s().dim(),
        (0..image.cols()).map(|j| image.col(j)).collect(),
    );
    let inverse = partner_of(ext, &v).ok_or_else(|| {
        Error::CoherenceFailure(format!("copy {} of P in S is not invertible", v.render()))
    })?;
    let reduced = InvertibleSub { sub: v, inverse };
    let back = inclusion_coupling(ext, &reduced)?;
    if class_witness(ext, &back, a)?.is_none() {
        return Err(Error::CoherenceFailure(
            "reduction along beta is not class-equal to the input".into(),
        ));
    }
    Ok(reduced)
}

/// Reduction along a trivial `P`-component: from `f: R -> P`, the composite
/// `gamma = beta^-1 . alpha` of the two induced bilinear isomorphisms
/// `alpha = bar_r . (f (x) S)` and `beta = bar_l . (S (x) f)` is an `R`-fixing
/// ring automorphism with twist coupling class-equal to the input. The
/// defining exchange identity `gamma(s) . phi(f(e)) = phi(f(e)) . s` and the
/// bilinearity of `beta` out of the twist are asserted.
pub fn coupling_to_ring_aut(ext: &Extension, a: &Coupling, f: &Mat) -> Result<Mat> {
    let r_reg = Bimodule::regular(ext.r());
    BimoduleMap::new(r_reg, a.p.clone(), f.clone(), Side::Both)
        .map_err(|e| Error::NotIntertwining(format!("f is not R-bilinear: {e}")))?;
    if !f.is_invertible() {
        return Err(Error::NotInvertible("f is singular".into()));
    }
    let p = ext.p();
    let ds = ext.s().dim();
    let id_s = Mat::identity(p, ds);

    let (t_rs, lu_s) = left_unitor(ext.r(), &s_as_r_s(ext))?;
    let lu_s_inv = lu_s.inverse().expect("S is left unital over R");
    let alpha = a
        .bar_r
        .mat
        .mul(&tensor_map(&t_rs, &a.bar_r.tensor, f, &id_s))
        .mul(&lu_s_inv);

    let (t_sr, ru_s) = right_unitor(ext.r(), &s_as_s_r(ext))?;
    let ru_s_inv = ru_s.inverse().expect("S is right unital over R");
    let beta = a
        .bar_l
        .mat
        .mul(&tensor_map(&t_sr, &a.bar_l.tensor, &id_s, f))
        .mul(&ru_s_inv);

    let beta_inv = beta
        .inverse()
        .ok_or_else(|| Error::CoherenceFailure("induced beta is singular".into()))?;
    let gamma = beta_inv.mul(&alpha);

    // gamma is an R-fixing ring automorphism
    let multiplicative = (0..ds).all(|i| {
        (0..ds).all(|j| {
            gamma.apply(ext.s().basis_product(i, j))
                == ext.s().mul_vec(&gamma.col(i), &gamma.col(j))
        })
    });
    let fixes = ext.r_space().basis().iter().all(|v| gamma.apply(v) == *v);
    if !multiplicative || !fixes || !gamma.is_invertible() {
        return Err(Error::CoherenceFailure(
            "the reduced map is not an R-fixing ring automorphism".into(),
        ));
    }

    // exchange identity: gamma(s) . phi(f(e)) = phi(f(e)) . s, e a unit of s
    let phi_f = a.phi.mul(f); // X-coordinates of phi(f(-)), per R-basis element
    for j in 0..ds {
        let s_vec = unit_vec(p, ds, j);
        let e = ext.s().unit_for(&[&s_vec]).expect("validated algebra");
        let e_r = ext.r_coords(&e).expect("units lie in R");
        let anchor = phi_f.apply(&e_r);
        let lhs = a.x.left_mat(&gamma.col(j)).apply(&anchor);
        let rhs = a.x.right_mat(&s_vec).apply(&anchor);
        if lhs != rhs {
            return Err(Error::CoherenceFailure(
                "exchange identity for the reduced automorphism fails".into(),
            ));
        }
    }

    // beta is S-bilinear out of the twist by gamma
    let twisted = twist(&Bimodule::regular(ext.s()), &gamma)?;
    BimoduleMap::new(twisted, a.x.clone(), beta, Side::Both).map_err(|e| {
        Error::CoherenceFailure(format!("beta is not bilinear out of the twist: {e}"))
    })?;

    let back = twist_coupling(ext, &gamma)?;
    if class_witness(ext, &back, a)?.is_none() {
        return Err(Error::CoherenceFailure(
            "twist coupling of the reduced automorphism is not class-equal to the input".into(),
        ));
    }
    Ok(gamma)
}

// ---------------------------------------------------------------------------
// The group of reachable classes
// ---------------------------------------------------------------------------

/// The group of coupling classes generated by the two canonical families,
/// closed under products and inverses. Class keys are the echelon basis of
/// the invertible subbimodule the class reduces to when its `X`-component is
/// trivial, and a dimension-tagged discovery certificate otherwise; keys are
/// stable for a fixed extension.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    /// One verified representative per class, in discovery order.
    pub reps: Vec<Coupling>,
    /// Keys aligned with `reps`.
    pub rep_keys: Vec<Vec<u8>>,
    pub group: FiniteGroup,
    pub neutral_key: Vec<u8>,
}

impl ClassGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn rep_by_key(&self, key: &[u8]) -> Option<&Coupling> {
        self.rep_keys
            .iter()
            .position(|k| k == key)
            .map(|i| &self.reps[i])
    }

    /// Key of the class of an arbitrary verified coupling, if it is one of
    /// the reachable classes.
    pub fn identify(&self, ext: &Extension, c: &Coupling) -> Result<Option<Vec<u8>>> {
        for (rep, key) in self.reps.iter().zip(&self.rep_keys) {
            if class_witness(ext, c, rep)?.is_some() {
                return Ok(Some(key.clone()));
            }
        }
        Ok(None)
    }
}

/// Default cap on the number of generated classes.
pub const CLASS_CAP: usize = 64;

pub fn generate_class_group(
    ext: &Extension,
    generators: Vec<Coupling>,
    cap: usize,
) -> Result<ClassGroup> {
    let mut reps: Vec<Coupling> = Vec::new();
    let mut keys: Vec<Vec<u8>> = Vec::new();

    let class_key = |ext: &Extension, c: &Coupling, discovery: usize| -> Result<Vec<u8>> {
        let mut key = Vec::new();
        if let Some(beta) = x_trivial_witness(ext, c)? {
            let reduced = coupling_to_invertible_sub(ext, c, &beta)?;
            key.extend_from_slice(b"inv:");
            key.extend(reduced.key());
        } else {
            key.extend_from_slice(b"cls:");
            key.extend_from_slice(&(c.p.dim() as u16).to_le_bytes());
            key.extend_from_slice(&(c.x.dim() as u16).to_le_bytes());
            key.extend_from_slice(&(discovery as u16).to_le_bytes());
        }
        Ok(key)
    };

    let identify = |reps: &mut Vec<Coupling>,
                        keys: &mut Vec<Vec<u8>>,
                        c: Coupling|
     -> Result<usize> {
        for (i, rep) in reps.iter().enumerate() {
            if class_witness(ext, &c, rep)?.is_some() {
                return Ok(i);
            }
        }
        if reps.len() >= cap {
            return Err(Error::BudgetExceeded(format!(
                "class generation exceeded the cap of {cap} classes"
            )));
        }
        let key = class_key(ext, &c, reps.len())?;
        reps.push(c);
        keys.push(key);
        Ok(reps.len() - 1)
    };

    identify(&mut reps, &mut keys, neutral_coupling(ext)?)?;
    for g in generators {
        identify(&mut reps, &mut keys, g)?;
    }
    // close under products and inverses
    loop {
        let before = reps.len();
        for i in 0..reps.len() {
            let inv = coupling_inverse(ext, &reps[i])?;
            identify(&mut reps, &mut keys, inv)?;
            for j in 0..reps.len() {
                let prod = coupling_product(ext, &reps[i], &reps[j])?;
                identify(&mut reps, &mut keys, prod)?;
            }
        }
        if reps.len() == before {
            break;
        }
    }

    // multiplication table on class keys
    let mut table: HashMap<(Vec<u8>, Vec<u8>), Vec<u8>> = HashMap::new();
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let prod = coupling_product(ext, a, b)?;
            let mut target = None;
            for (k, rep) in reps.iter().enumerate() {
                if class_witness(ext, &prod, rep)?.is_some() {
                    target = Some(k);
                    break;
                }
            }
            let k = target.ok_or_else(|| {
                Error::CoherenceFailure("class set is not closed under products".into())
            })?;
            table.insert((keys[i].clone(), keys[j].clone()), keys[k].clone());
        }
    }
    let group = FiniteGroup::new(keys.clone(), |a, b| {
        table[&(a.to_vec(), b.to_vec())].clone()
    })?;
    let neutral_key = group.neutral_key().to_vec();
    Ok(ClassGroup { reps, rep_keys: keys, group, neutral_key })
}
