//! Unital bimodules over the algebras of an extension, bilinear maps between
//! them, hom-spaces, twists, and isomorphism search.
//!
//! A bimodule is a vector space with one action matrix per basis element of
//! each acting algebra. Maps act on column vectors, so a bimodule map
//! `m -> n` is an `n.dim x m.dim` matrix.

use crate::algebra::{unit_vec, Algebra, Extension};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{combo_count, index_to_coeffs, linear_combination, Mat, Subspace};
use std::sync::Arc;

/// Candidate cap for exhaustive scans over a finite hom-space.
pub const SCAN_BUDGET: u64 = 4_000_000;

pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Which actions a map must intertwine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    dim: usize,
    left_act: Vec<Mat>,
    right_act: Vec<Mat>,
}

impl Bimodule {
    /// Validates the bimodule axioms: the left action is an algebra
    /// homomorphism on structure constants, the right action satisfies
    /// `(m.a).b = m.(ab)`, and the two actions commute.
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_act: Vec<Mat>,
        right_act: Vec<Mat>,
    ) -> Result<Bimodule> {
        if left.characteristic() != right.characteristic() {
            return Err(Error::IncompatibleAlgebras(
                "left and right algebras have different characteristics".into(),
            ));
        }
        if left_act.len() != left.dim() || right_act.len() != right.dim() {
            return Err(Error::DimensionMismatch(
                "one action matrix per acting basis element required".into(),
            ));
        }
        for m in left_act.iter().chain(&right_act) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(
                    "action matrices must be dim x dim".into(),
                ));
            }
        }
        let p = left.characteristic();
        let module = Bimodule { left, right, dim, left_act, right_act };
        for i in 0..module.left.dim() {
            for j in 0..module.left.dim() {
                let prod = module.left.basis_product(i, j).to_vec();
                let lhs = module.left_act[i].mul(&module.left_act[j]);
                let rhs = linear_combination(p, &module.left_act, &prod);
                if lhs != rhs {
                    return Err(Error::InvalidBimodule(format!(
                        "left action is not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        for i in 0..module.right.dim() {
            for j in 0..module.right.dim() {
                let prod = module.right.basis_product(i, j).to_vec();
                // (m . b_i) . b_j = m . (b_i b_j)
                let lhs = module.right_act[j].mul(&module.right_act[i]);
                let rhs = linear_combination(p, &module.right_act, &prod);
                if lhs != rhs {
                    return Err(Error::InvalidBimodule(format!(
                        "right action axiom fails on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        for (i, l) in module.left_act.iter().enumerate() {
            for (j, r) in module.right_act.iter().enumerate() {
                if l.mul(r) != r.mul(l) {
                    return Err(Error::InvalidBimodule(format!(
                        "left action of basis {i} does not commute with right action of basis {j}"
                    )));
                }
            }
        }
        Ok(module)
    }

    /// The algebra as a bimodule over itself by multiplication.
    pub fn regular(alg: &Arc<Algebra>) -> Bimodule {
        let left_act = (0..alg.dim())
            .map(|i| alg.left_mult_mat(&unit_vec(alg.characteristic(), alg.dim(), i)))
            .collect();
        let right_act = (0..alg.dim())
            .map(|j| alg.right_mult_mat(&unit_vec(alg.characteristic(), alg.dim(), j)))
            .collect();
        Bimodule::new(alg.clone(), alg.clone(), alg.dim(), left_act, right_act)
            .expect("regular bimodule satisfies the axioms")
    }

    pub fn zero(left: Arc<Algebra>, right: Arc<Algebra>) -> Bimodule {
        let p = left.characteristic();
        let left_act = (0..left.dim()).map(|_| Mat::zero(p, 0, 0)).collect();
        let right_act = (0..right.dim()).map(|_| Mat::zero(p, 0, 0)).collect();
        Bimodule { left, right, dim: 0, left_act, right_act }
    }

    pub fn p(&self) -> u16 {
        self.left.characteristic()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn left_act(&self) -> &[Mat] {
        &self.left_act
    }

    pub fn right_act(&self) -> &[Mat] {
        &self.right_act
    }

    /// Action matrix of an arbitrary left-algebra element.
    pub fn left_mat(&self, a: &[u16]) -> Mat {
        linear_combination(self.p(), &self.left_act, a)
    }

    pub fn right_mat(&self, a: &[u16]) -> Mat {
        linear_combination(self.p(), &self.right_act, a)
    }

    pub fn act_left(&self, a: &[u16], v: &[u16]) -> Vec<u16> {
        self.left_mat(a).apply(v)
    }

    pub fn act_right(&self, v: &[u16], a: &[u16]) -> Vec<u16> {
        self.right_mat(a).apply(v)
    }

    /// True iff both unitality spans are full: the spans of `u.m` and of `m.u`
    /// over local units `u` and basis `m` each exhaust the space. Because the
    /// unit set is directed this is equivalent to every element being bi-fixed
    /// by a single unit.
    pub fn check_unital(&self) -> bool {
        self.unital_span(Side::Left).dim() == self.dim
            && self.unital_span(Side::Right).dim() == self.dim
    }

    fn unital_span(&self, side: Side) -> Subspace {
        let mut rows = Vec::new();
        match side {
            Side::Left => {
                for u in self.left.local_units() {
                    let m = self.left_mat(u);
                    for i in 0..self.dim {
                        rows.push(m.col(i));
                    }
                }
            }
            Side::Right => {
                for u in self.right.local_units() {
                    let m = self.right_mat(u);
                    for i in 0..self.dim {
                        rows.push(m.col(i));
                    }
                }
            }
            Side::Both => unreachable!("unital_span is one-sided"),
        }
        Subspace::from_rows(self.p(), self.dim, rows)
    }

    /// The largest unital sub-bimodule: the span of `u . m . v` over local
    /// units `u, v` and basis elements `m`, with the restricted actions.
    /// Equals the whole module iff [`Bimodule::check_unital`].
    pub fn largest_unital(&self) -> SubBimodule {
        let mut rows = Vec::new();
        for u in self.left.local_units() {
            let lm = self.left_mat(u);
            for v in self.right.local_units() {
                let m = lm.mul(&self.right_mat(v));
                for i in 0..self.dim {
                    rows.push(m.col(i));
                }
            }
        }
        let space = Subspace::from_rows(self.p(), self.dim, rows);
        self.restrict_to(&space)
            .expect("unital span is action-stable")
    }

    /// The sub-bimodule on an action-stable subspace, in its canonical
    /// coordinates. Errors if the subspace is not stable.
    pub fn restrict_to(&self, space: &Subspace) -> Result<SubBimodule> {
        if space.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch(
                "restriction subspace lives in the wrong ambient space".into(),
            ));
        }
        let include = Mat::from_cols(self.p(), space.basis().to_vec(), space.ambient_dim());
        let restrict = |acts: &[Mat], which: &str| -> Result<Vec<Mat>> {
            acts.iter()
                .enumerate()
                .map(|(t, act)| {
                    let on_basis = act.mul(&include);
                    let mut cols = Vec::with_capacity(space.dim());
                    for j in 0..space.dim() {
                        let col = on_basis.col(j);
                        let coords = space.coordinates(&col).ok_or_else(|| {
                            Error::InvalidBimodule(format!(
                                "subspace is not stable under {which} action of basis {t}"
                            ))
                        })?;
                        cols.push(coords);
                    }
                    Ok(Mat::from_cols(self.p(), cols, space.dim()))
                })
                .collect()
        };
        let left_act = restrict(&self.left_act, "left")?;
        let right_act = restrict(&self.right_act, "right")?;
        let module = Bimodule::new(
            self.left.clone(),
            self.right.clone(),
            space.dim(),
            left_act,
            right_act,
        )?;
        Ok(SubBimodule { space: space.clone(), module })
    }
}

/// A stable subspace together with the restricted bimodule structure.
#[derive(Debug, Clone)]
pub struct SubBimodule {
    pub space: Subspace,
    pub module: Bimodule,
}

/// A linear map intertwining the declared actions of two bimodules.
#[derive(Debug, Clone)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub mat: Mat,
}

impl BimoduleMap {
    pub fn new(source: Bimodule, target: Bimodule, mat: Mat, side: Side) -> Result<BimoduleMap> {
        if mat.rows() != target.dim() || mat.cols() != source.dim() {
            return Err(Error::DimensionMismatch(
                "map matrix must be target.dim x source.dim".into(),
            ));
        }
        for (a, b) in intertwining_pairs(&source, &target, side)? {
            if mat.mul(&a) != b.mul(&mat) {
                return Err(Error::NotIntertwining(
                    "matrix fails an action constraint".into(),
                ));
            }
        }
        Ok(BimoduleMap { source, target, mat })
    }

    pub fn is_invertible(&self) -> bool {
        self.mat.is_invertible()
    }
}

/// The intertwining constraints `T . A_k = B_k . T` for the requested side(s).
fn intertwining_pairs(m: &Bimodule, n: &Bimodule, side: Side) -> Result<Vec<(Mat, Mat)>> {
    let mut pairs = Vec::new();
    if matches!(side, Side::Left | Side::Both) {
        if !same_algebra(m.left(), n.left()) {
            return Err(Error::IncompatibleAlgebras(
                "left algebras differ".into(),
            ));
        }
        for (a, b) in m.left_act.iter().zip(&n.left_act) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    if matches!(side, Side::Right | Side::Both) {
        if !same_algebra(m.right(), n.right()) {
            return Err(Error::IncompatibleAlgebras(
                "right algebras differ".into(),
            ));
        }
        for (a, b) in m.right_act.iter().zip(&n.right_act) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    Ok(pairs)
}

/// Solution space of `T A_k = B_k T` over all constraint pairs, as a canonical
/// subspace of flattened `dn x dm` matrices.
pub fn intertwiner_space(dm: usize, dn: usize, p: u16, pairs: &[(Mat, Mat)]) -> Subspace {
    let unknowns = dn * dm;
    if unknowns == 0 {
        return Subspace::zero(p, 0);
    }
    let mut rows = Vec::new();
    for (a, b) in pairs {
        // equation per output coordinate (r, c):
        //   sum_k T[r][k] A[k][c] - sum_k B[r][k] T[k][c] = 0
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u16; unknowns];
                for k in 0..dm {
                    let idx = r * dm + k;
                    row[idx] = crate::linalg::scalar::add(p, row[idx], a.get(k, c));
                }
                for k in 0..dn {
                    let idx = k * dm + c;
                    row[idx] =
                        crate::linalg::scalar::sub(p, row[idx], b.get(r, k));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(p, unknowns);
    }
    Mat::from_rows(p, rows).kernel()
}

/// Basis of the space of maps `m -> n` intertwining the declared actions.
/// The basis is the canonical (RREF) basis of the solution space, so it is
/// deterministic.
pub fn hom_space(m: &Bimodule, n: &Bimodule, side: Side) -> Result<Vec<Mat>> {
    let space = hom_subspace(m, n, side)?;
    Ok(space
        .basis()
        .iter()
        .map(|flat| Mat::from_flat(m.p(), n.dim(), m.dim(), flat.clone()))
        .collect())
}

/// Same as [`hom_space`] but returning the flattened subspace, which gives
/// coordinates with respect to the canonical basis.
pub fn hom_subspace(m: &Bimodule, n: &Bimodule, side: Side) -> Result<Subspace> {
    let pairs = intertwining_pairs(m, n, side)?;
    Ok(intertwiner_space(m.dim(), n.dim(), m.p(), &pairs))
}

/// Deterministic exhaustive search for an invertible intertwiner `m -> n`:
/// the hom-space is scanned in coefficient-lexicographic order over its
/// canonical basis and the first invertible member is returned.
pub fn iso_search(m: &Bimodule, n: &Bimodule, side: Side) -> Result<Option<Mat>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let basis = hom_space(m, n, side)?;
    scan_invertible(m.p(), n.dim(), m.dim(), &basis)
}

/// First invertible linear combination of the basis matrices, scanning
/// coefficient tuples in lexicographic order ((0,..,0,1) first).
pub fn scan_invertible(p: u16, rows: usize, cols: usize, basis: &[Mat]) -> Result<Option<Mat>> {
    if rows == 0 && cols == 0 {
        // the zero map is the identity of the zero module
        return Ok(Some(Mat::zero(p, 0, 0)));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    let total = combo_count(p, basis.len(), SCAN_BUDGET)?;
    Ok(exec::first_match(total - 1, |i| {
        let coeffs = index_to_coeffs(p, basis.len(), i + 1);
        let cand = combine(p, rows, cols, basis, &coeffs);
        cand.is_invertible().then_some(cand)
    }))
}

fn combine(p: u16, rows: usize, cols: usize, basis: &[Mat], coeffs: &[u16]) -> Mat {
    let mut acc = Mat::zero(p, rows, cols);
    for (m, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// Checks that `t` is a ring automorphism of `alg`: invertible, multiplicative
/// on all basis pairs.
pub fn validate_ring_auto(alg: &Algebra, t: &Mat) -> Result<()> {
    if t.rows() != alg.dim() || t.cols() != alg.dim() {
        return Err(Error::DimensionMismatch("automorphism matrix shape".into()));
    }
    if !t.is_invertible() {
        return Err(Error::NotInvertible("ring endomorphism is singular".into()));
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = t.apply(alg.basis_product(i, j));
            let rhs = alg.mul_vec(&t.col(i), &t.col(j));
            if lhs != rhs {
                return Err(Error::NotMultiplicative(format!(
                    "fails on basis pair ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// The twisted bimodule `m_phi`: same space and left action, right action
/// through the ring automorphism `phi` of the shared acting algebra.
pub fn twist(m: &Bimodule, phi: &Mat) -> Result<Bimodule> {
    if !same_algebra(m.left(), m.right()) {
        return Err(Error::IncompatibleAlgebras(
            "twisting requires a one-algebra bimodule".into(),
        ));
    }
    validate_ring_auto(m.left(), phi)?;
    let right_act = (0..m.right().dim())
        .map(|j| m.right_mat(&phi.col(j)))
        .collect();
    Bimodule::new(
        m.left().clone(),
        m.right().clone(),
        m.dim(),
        m.left_act().to_vec(),
        right_act,
    )
}

// ---------------------------------------------------------------------------
// Extension-aware module constructors
// ---------------------------------------------------------------------------

/// `S` as an `(S, R)`-bimodule: left multiplication, right multiplication
/// restricted along the embedding of `R`.
pub fn s_as_s_r(ext: &Extension) -> Bimodule {
    let reg = Bimodule::regular(ext.s());
    restrict_right(ext, &reg)
}

pub fn s_as_r_s(ext: &Extension) -> Bimodule {
    let reg = Bimodule::regular(ext.s());
    restrict_left(ext, &reg)
}

pub fn s_as_r_r(ext: &Extension) -> Bimodule {
    restrict_left(ext, &s_as_s_r(ext))
}

/// Restrict the right action of an `(A, S)`-bimodule to `R` along the embedding.
pub fn restrict_right(ext: &Extension, m: &Bimodule) -> Bimodule {
    assert!(same_algebra(m.right(), ext.s()), "right algebra must be S");
    let right_act = (0..ext.r().dim())
        .map(|j| m.right_mat(&ext.embed().col(j)))
        .collect();
    Bimodule::new(
        m.left().clone(),
        ext.r().clone(),
        m.dim(),
        m.left_act().to_vec(),
        right_act,
    )
    .expect("restriction preserves the axioms")
}

pub fn restrict_left(ext: &Extension, m: &Bimodule) -> Bimodule {
    assert!(same_algebra(m.left(), ext.s()), "left algebra must be S");
    let left_act = (0..ext.r().dim())
        .map(|i| m.left_mat(&ext.embed().col(i)))
        .collect();
    Bimodule::new(
        ext.r().clone(),
        m.right().clone(),
        m.dim(),
        left_act,
        m.right_act().to_vec(),
    )
    .expect("restriction preserves the axioms")
}

/// An `R`-stable subspace of `S` as an `(R, R)`-bimodule in its own coordinates.
pub fn sub_bimodule_of_s(ext: &Extension, space: &Subspace) -> Result<SubBimodule> {
    s_as_r_r(ext).restrict_to(space)
}
