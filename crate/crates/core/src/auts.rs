//! The automorphism groups of an extension and the maps connecting them to
//! the subbimodule group: the group of `(S, R)`-bilinear automorphisms of
//! `S`, the group of ring automorphisms fixing `R` pointwise, the preimage
//! map `lambda -> lambda^-1(R)`, the induced ring automorphism
//! `s -> lambda^-1(e) s lambda(e)`, and the class of a twisted regular
//! bimodule.

use crate::algebra::{unit_vec, Extension};
use crate::bimodule::{
    hom_space, iso_search, s_as_s_r, twist, BimoduleMap, Bimodule, Side,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::{is_subgroup_of_center, FiniteGroup, GroupHom};
use crate::inv::{is_unital_r_subbimodule, InvGroup, InvertibleSub};
use crate::linalg::{combo_count, index_to_coeffs, Mat, Subspace};
use crate::picard::{pair_from_twist, PicardPair};
use std::collections::HashMap;

/// A finite automorphism group whose elements are matrices acting on `S`.
#[derive(Debug, Clone)]
pub struct AutGroup {
    pub group: FiniteGroup,
    /// Matrices aligned with `group.keys()` order.
    pub mats: Vec<Mat>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn by_key(&self, key: &[u8]) -> Option<&Mat> {
        self.group.index_of(key).map(|i| &self.mats[i])
    }

    pub fn identity_key(&self) -> &[u8] {
        self.group.neutral_key()
    }

    fn from_mats(mats: Vec<Mat>) -> Result<AutGroup> {
        let keys: Vec<Vec<u8>> = mats.iter().map(Mat::key).collect();
        let lookup: HashMap<Vec<u8>, &Mat> = keys.iter().cloned().zip(mats.iter()).collect();
        let group = FiniteGroup::new(keys, |a, b| lookup[a].mul(lookup[b]).key())?;
        let mats_sorted = group.keys().iter().map(|k| lookup[k].clone()).collect();
        Ok(AutGroup { group, mats: mats_sorted })
    }
}

/// The units group of the monoid of `(S, R)`-bilinear endomorphisms of `S`:
/// every invertible member of the hom-space, found by exhaustive scan.
pub fn aut_s_r(ext: &Extension) -> Result<AutGroup> {
    let m = s_as_s_r(ext);
    let basis = hom_space(&m, &m, Side::Both)?;
    let p = ext.p();
    let ds = ext.s().dim();
    if basis.is_empty() {
        return Err(Error::CoherenceFailure(
            "the identity endomorphism is missing from the hom space".into(),
        ));
    }
    let total = combo_count(p, basis.len(), crate::bimodule::SCAN_BUDGET)?;
    let mats = exec::range_filter_map(total - 1, |i| {
        let coeffs = index_to_coeffs(p, basis.len(), i + 1);
        let mut cand = Mat::zero(p, ds, ds);
        for (b, &c) in basis.iter().zip(&coeffs) {
            if c != 0 {
                cand = cand.add(&b.scale(c));
            }
        }
        cand.is_invertible().then_some(cand)
    });
    AutGroup::from_mats(mats)
}

fn is_multiplicative(ext: &Extension, t: &Mat) -> bool {
    let s = ext.s();
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            if t.apply(s.basis_product(i, j)) != s.mul_vec(&t.col(i), &t.col(j)) {
                return false;
            }
        }
    }
    true
}

fn fixes_r(ext: &Extension, t: &Mat) -> bool {
    ext.r_space().basis().iter().all(|v| t.apply(v) == *v)
}

/// The group of ring automorphisms of `S` acting as the identity on `R`.
/// Candidates are the affine space of `R`-bilinear endomorphisms fixing `R`
/// pointwise, filtered for multiplicativity and bijectivity.
pub fn aut_r_rings(ext: &Extension) -> Result<AutGroup> {
    let p = ext.p();
    let ds = ext.s().dim();
    let unknowns = ds * ds;
    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut rhs: Vec<u16> = Vec::new();
    // R-bilinearity: T commutes with left and right multiplication by R
    for rv in ext.r_space().basis() {
        for act in [ext.s().left_mult_mat(rv), ext.s().right_mult_mat(rv)] {
            for r in 0..ds {
                for c in 0..ds {
                    let mut row = vec![0u16; unknowns];
                    for k in 0..ds {
                        let idx = r * ds + k;
                        row[idx] = crate::linalg::scalar::add(p, row[idx], act.get(k, c));
                        let idx = k * ds + c;
                        row[idx] = crate::linalg::scalar::sub(p, row[idx], act.get(r, k));
                    }
                    rows.push(row);
                    rhs.push(0);
                }
            }
        }
    }
    // fixes R pointwise: T v = v for each R-basis vector
    for rv in ext.r_space().basis() {
        for r in 0..ds {
            let mut row = vec![0u16; unknowns];
            for c in 0..ds {
                row[r * ds + c] = rv[c];
            }
            rows.push(row);
            rhs.push(rv[r]);
        }
    }
    let system = Mat::from_rows(p, rows);
    let particular = system
        .solve(&rhs)?
        .ok_or_else(|| Error::CoherenceFailure("identity solves the system".into()))?;
    let kernel = system.kernel();
    let total = combo_count(p, kernel.dim(), crate::bimodule::SCAN_BUDGET)?;
    let mats = exec::range_filter_map(total, |i| {
        let coeffs = index_to_coeffs(p, kernel.dim(), i);
        let mut flat = particular.clone();
        for (k, &c) in kernel.basis().iter().zip(&coeffs) {
            if c != 0 {
                for (slot, &v) in flat.iter_mut().zip(k) {
                    *slot = crate::linalg::scalar::add(
                        p,
                        *slot,
                        crate::linalg::scalar::mul(p, c, v),
                    );
                }
            }
        }
        let cand = Mat::from_flat(p, ds, ds, flat);
        (cand.is_invertible() && is_multiplicative(ext, &cand)).then_some(cand)
    });
    AutGroup::from_mats(mats)
}

/// `lambda -> lambda^-1(R)` with inverse witness `lambda(R)`; lands in the
/// invertible subbimodules for every `(S, R)`-bilinear automorphism.
pub fn aut_to_inv(ext: &Extension, lam: &Mat) -> Result<InvertibleSub> {
    let lam_inv = lam
        .inverse()
        .ok_or_else(|| Error::NotInvertible("automorphism is singular".into()))?;
    let image = |m: &Mat| {
        Subspace::from_rows(
            ext.p(),
            ext.s().dim(),
            ext.r_space().basis().iter().map(|v| m.apply(v)).collect(),
        )
    };
    let sub = image(&lam_inv);
    let inverse = image(lam);
    for space in [&sub, &inverse] {
        if !is_unital_r_subbimodule(ext, space) {
            return Err(Error::CoherenceFailure(format!(
                "preimage {} of R is not a unital subbimodule",
                space.render()
            )));
        }
    }
    if &ext.product_span(&sub, &inverse) != ext.r_space()
        || &ext.product_span(&inverse, &sub) != ext.r_space()
    {
        return Err(Error::CoherenceFailure(
            "preimage of R is not invertible against the image of R".into(),
        ));
    }
    Ok(InvertibleSub { sub, inverse })
}

/// The induced ring automorphism `s -> lambda^-1(e) s lambda(e)` computed
/// basiswise with the first unit bi-fixing each basis element.
pub fn induced_ring_aut(ext: &Extension, lam: &Mat) -> Result<Mat> {
    let lam_inv = lam
        .inverse()
        .ok_or_else(|| Error::NotInvertible("automorphism is singular".into()))?;
    let s = ext.s();
    let cols = (0..s.dim())
        .map(|j| {
            let b = unit_vec(ext.p(), s.dim(), j);
            let e = s.unit_for(&[&b]).expect("validated algebra has units");
            induced_value(ext, lam, &lam_inv, &b, &e)
        })
        .collect();
    let out = Mat::from_cols(ext.p(), cols, s.dim());
    if !out.is_invertible() || !is_multiplicative(ext, &out) || !fixes_r(ext, &out) {
        return Err(Error::CoherenceFailure(
            "induced map is not an R-fixing ring automorphism".into(),
        ));
    }
    Ok(out)
}

/// `lambda^-1(e) s lambda(e)` for one chosen unit; exposed so independence of
/// the unit choice can be asserted.
pub fn induced_value(ext: &Extension, lam: &Mat, lam_inv: &Mat, s: &[u16], e: &[u16]) -> Vec<u16> {
    let alg = ext.s();
    alg.mul_vec(&alg.mul_vec(&lam_inv.apply(e), s), &lam.apply(e))
}

/// `lambda(e) lambda^-1(e) = e = lambda^-1(e) lambda(e)` for all local units.
pub fn unit_exchange_holds(ext: &Extension, lam: &Mat) -> bool {
    let Some(lam_inv) = lam.inverse() else {
        return false;
    };
    ext.s().local_units().iter().all(|e| {
        let a = ext.s().mul_vec(&lam.apply(e), &lam_inv.apply(e));
        let b = ext.s().mul_vec(&lam_inv.apply(e), &lam.apply(e));
        a == *e && b == *e
    })
}

pub fn d_hom(ext: &Extension, aut: &AutGroup, inv: &InvGroup) -> Result<GroupHom> {
    GroupHom::new(aut.group.clone(), inv.group.clone(), |k| {
        let lam = aut.by_key(k).expect("key in group");
        aut_to_inv(ext, lam).expect("image in Inv").key()
    })
}

pub fn hat_hom(ext: &Extension, aut: &AutGroup, rings: &AutGroup) -> Result<GroupHom> {
    GroupHom::new(aut.group.clone(), rings.group.clone(), |k| {
        let lam = aut.by_key(k).expect("key in group");
        induced_ring_aut(ext, lam).expect("lands in ring automorphisms").key()
    })
}

/// Kernel of the preimage map with its corner characterization and the
/// centrality statement.
#[derive(Debug, Clone)]
pub struct KerDReport {
    pub kernel: FiniteGroup,
    /// kernel = { lambda : lambda(e) in U(Z(eRe)) for every local unit e }
    pub characterization_holds: bool,
    pub central_in_aut: bool,
    pub unit_exchange_holds: bool,
    pub witnesses: Vec<String>,
}

pub fn ker_d_report(ext: &Extension, aut: &AutGroup, hom: &GroupHom) -> Result<KerDReport> {
    let kernel = hom.kernel();
    let mut witnesses = Vec::new();
    let mut characterized: Vec<Vec<u8>> = Vec::new();
    for (key, lam) in aut.group.keys().iter().zip(&aut.mats) {
        let mut in_set = true;
        for e in ext.s().local_units() {
            let img = lam.apply(e);
            let Some(r_img) = ext.r_coords(&img) else {
                in_set = false;
                break;
            };
            let e_r = ext.r_coords(e).expect("units lie in R");
            if !ext.r().corner_center_units(&e_r).contains(&r_img) {
                in_set = false;
                break;
            }
        }
        if in_set {
            characterized.push(key.clone());
        }
    }
    let mut kernel_keys: Vec<Vec<u8>> = kernel.keys().to_vec();
    kernel_keys.sort();
    characterized.sort();
    let characterization_holds = kernel_keys == characterized;
    if !characterization_holds {
        for k in kernel_keys.iter().filter(|k| !characterized.contains(k)) {
            witnesses.push(format!(
                "kernel element not in corner-unit set: {}",
                aut.by_key(k).expect("kernel key").render()
            ));
        }
        for k in characterized.iter().filter(|k| !kernel_keys.contains(k)) {
            witnesses.push(format!(
                "corner-unit element not in kernel: {}",
                aut.by_key(k).expect("aut key").render()
            ));
        }
    }
    let central_in_aut = is_subgroup_of_center(&kernel, &aut.group)?;
    let unit_exchange = aut.mats.iter().all(|lam| unit_exchange_holds(ext, lam));
    Ok(KerDReport {
        kernel,
        characterization_holds,
        central_in_aut,
        unit_exchange_holds: unit_exchange,
        witnesses,
    })
}

/// Kernel of the induced-automorphism map with both of its characterizations:
/// the corner units of `S` and the invertible `S`-bilinear endomorphisms.
#[derive(Debug, Clone)]
pub struct KerHatReport {
    pub kernel: FiniteGroup,
    pub corner_characterization_holds: bool,
    pub bilinear_characterization_holds: bool,
    pub witnesses: Vec<String>,
}

pub fn ker_hat_report(ext: &Extension, aut: &AutGroup, hom: &GroupHom) -> Result<KerHatReport> {
    let kernel = hom.kernel();
    let mut kernel_keys: Vec<Vec<u8>> = kernel.keys().to_vec();
    kernel_keys.sort();
    let mut witnesses = Vec::new();

    let mut corner_set: Vec<Vec<u8>> = Vec::new();
    for (key, lam) in aut.group.keys().iter().zip(&aut.mats) {
        let in_set = ext.s().local_units().iter().all(|e| {
            let img = lam.apply(e);
            ext.s().corner_center_units(e).contains(&img)
        });
        if in_set {
            corner_set.push(key.clone());
        }
    }
    corner_set.sort();
    let corner_characterization_holds = kernel_keys == corner_set;
    if !corner_characterization_holds {
        witnesses.push(format!(
            "corner characterization differs from kernel: {} vs {} elements",
            corner_set.len(),
            kernel_keys.len()
        ));
    }

    // invertible S-bilinear endomorphisms of S
    let s_reg = Bimodule::regular(ext.s());
    let basis = hom_space(&s_reg, &s_reg, Side::Both)?;
    let p = ext.p();
    let total = combo_count(p, basis.len(), crate::bimodule::SCAN_BUDGET)?;
    let mut bilinear: Vec<Vec<u8>> = exec::range_filter_map(total.saturating_sub(1), |i| {
        let coeffs = index_to_coeffs(p, basis.len(), i + 1);
        let mut cand = Mat::zero(p, ext.s().dim(), ext.s().dim());
        for (b, &c) in basis.iter().zip(&coeffs) {
            if c != 0 {
                cand = cand.add(&b.scale(c));
            }
        }
        cand.is_invertible().then(|| cand.key())
    });
    bilinear.sort();
    let bilinear_characterization_holds = kernel_keys == bilinear;
    if !bilinear_characterization_holds {
        witnesses.push(format!(
            "invertible S-bilinear endomorphisms differ from kernel: {} vs {} elements",
            bilinear.len(),
            kernel_keys.len()
        ));
    }
    Ok(KerHatReport {
        kernel,
        corner_characterization_holds,
        bilinear_characterization_holds,
        witnesses,
    })
}

/// The twisted regular bimodule `S_phi` together with its invertibility pair
/// and, when `[S_phi] = [S]`, an explicit bilinear isomorphism `S -> S_phi`.
#[derive(Debug, Clone)]
pub struct TwistClass {
    pub module: Bimodule,
    pub pair: PicardPair,
    pub trivial_witness: Option<Mat>,
}

pub fn twist_class(ext: &Extension, phi: &Mat) -> Result<TwistClass> {
    let s_reg = Bimodule::regular(ext.s());
    let module = twist(&s_reg, phi)?;
    let pair = pair_from_twist(ext.s(), phi)?;
    let trivial_witness = iso_search(&s_reg, &module, Side::Both)?;
    Ok(TwistClass { module, pair, trivial_witness })
}

/// Recovers a bilinear automorphism from a trivialization of a twist: given a
/// ring automorphism `phi` fixing `R` and an `S`-bilinear isomorphism
/// `omega: S -> S_phi`, the same matrix viewed as an `(S, R)`-bilinear
/// endomorphism of `S` induces `phi` back.
pub fn bilinear_aut_from_twist_iso(ext: &Extension, phi: &Mat, omega: &Mat) -> Result<Mat> {
    let s_reg = Bimodule::regular(ext.s());
    let twisted = twist(&s_reg, phi)?;
    let as_twist_map = BimoduleMap::new(s_reg, twisted, omega.clone(), Side::Both)?;
    if !as_twist_map.is_invertible() {
        return Err(Error::NotInvertible("witness is singular".into()));
    }
    let s_sr = s_as_s_r(ext);
    BimoduleMap::new(s_sr.clone(), s_sr, omega.clone(), Side::Both).map_err(|e| {
        Error::NotIntertwining(format!("witness is not (S, R)-bilinear: {e}"))
    })?;
    let induced = induced_ring_aut(ext, omega)?;
    if &induced != phi {
        return Err(Error::CoherenceFailure(
            "induced automorphism of the recovered witness differs from phi".into(),
        ));
    }
    Ok(omega.clone())
}
