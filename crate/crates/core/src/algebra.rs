//! Finite-dimensional associative `F_p`-algebras carrying a designated finite
//! set of local units, and extensions `R <= S` sharing that set.
//!
//! Elements are coefficient vectors over the declared basis. The local-unit
//! set `E` is a finite list of idempotents such that every basis element is
//! bi-fixed by some member and the set is directed: any two members have a
//! common upper bound inside `E`. Directedness pairwise suffices for all
//! finite subsets by induction.

use crate::error::{Error, Result};
use crate::linalg::{check_prime, index_to_coeffs, Mat, Subspace};
use std::fmt;
use std::sync::Arc;

/// Outcome of a structural validation; empty means valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, msg: String) {
        self.issues.push(msg);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid")
        } else {
            for issue in &self.issues {
                writeln!(f, "- {issue}")?;
            }
            Ok(())
        }
    }
}

/// A finite-dimensional associative algebra over `F_p` given by structure
/// constants, together with its local-unit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    p: u16,
    dim: usize,
    names: Vec<String>,
    /// `table[i][j]` = coefficient vector of `b_i * b_j`.
    table: Vec<Vec<Vec<u16>>>,
    local_units: Vec<Vec<u16>>,
}

impl Algebra {
    /// Builds and validates; see [`Algebra::validate`] for the checked conditions.
    pub fn new(
        p: u16,
        names: Vec<String>,
        table: Vec<Vec<Vec<u16>>>,
        local_units: Vec<Vec<u16>>,
    ) -> Result<Arc<Algebra>> {
        check_prime(p)?;
        let dim = names.len();
        if table.len() != dim
            || table.iter().any(|row| row.len() != dim)
            || table
                .iter()
                .any(|row| row.iter().any(|entry| entry.len() != dim))
        {
            return Err(Error::DimensionMismatch(
                "multiplication table shape must be dim x dim x dim".into(),
            ));
        }
        if table
            .iter()
            .any(|row| row.iter().any(|e| e.iter().any(|&c| c >= p)))
            || local_units.iter().any(|u| u.iter().any(|&c| c >= p))
        {
            return Err(Error::Parse(format!("coefficient out of range mod {p}")));
        }
        if local_units.iter().any(|u| u.len() != dim) {
            return Err(Error::DimensionMismatch("local unit length != dim".into()));
        }
        let a = Algebra { p, dim, names, table, local_units };
        let report = a.validate();
        if !report.is_valid() {
            return Err(Error::InvalidAlgebra(report.to_string()));
        }
        Ok(Arc::new(a))
    }

    /// Checks the four structural invariants:
    /// associativity on all basis triples, idempotency of every declared unit,
    /// a bi-fixing unit for every basis element, and pairwise directedness.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.mul_vec(&self.table[i][j], &unit_vec(self.p, self.dim, k));
                    let rhs = self.mul_vec(&unit_vec(self.p, self.dim, i), &self.table[j][k]);
                    if lhs != rhs {
                        report.push(format!(
                            "associativity fails on basis triple ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        ));
                    }
                }
            }
        }
        if self.local_units.is_empty() {
            report.push("local-unit set is empty".into());
        }
        for (idx, u) in self.local_units.iter().enumerate() {
            if self.mul_vec(u, u) != *u {
                report.push(format!("local unit #{idx} is not idempotent"));
            }
        }
        for k in 0..self.dim {
            let b = unit_vec(self.p, self.dim, k);
            if !self.local_units.iter().any(|u| self.bi_fixes(u, &b)) {
                report.push(format!(
                    "no local unit bi-fixes basis element {}",
                    self.names[k]
                ));
            }
        }
        for (i, u) in self.local_units.iter().enumerate() {
            for (j, v) in self.local_units.iter().enumerate().skip(i + 1) {
                let directed = self
                    .local_units
                    .iter()
                    .any(|w| self.bi_fixes(w, u) && self.bi_fixes(w, v));
                if !directed {
                    report.push(format!(
                        "local units #{i} and #{j} have no common upper bound in the set"
                    ));
                }
            }
        }
        report
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn local_units(&self) -> &[Vec<u16>] {
        &self.local_units
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[u16] {
        &self.table[i][j]
    }

    /// Product of two coefficient vectors.
    pub fn mul_vec(&self, x: &[u16], y: &[u16]) -> Vec<u16> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let p = self.p as u64;
        let mut acc = vec![0u64; self.dim];
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] as u64 * y[j] as u64 % p;
                for (a, &t) in acc.iter_mut().zip(&self.table[i][j]) {
                    *a = (*a + c * t as u64) % p;
                }
            }
        }
        acc.into_iter().map(|a| a as u16).collect()
    }

    /// Matrix of `y -> x * y`.
    pub fn left_mult_mat(&self, x: &[u16]) -> Mat {
        let cols = (0..self.dim)
            .map(|j| self.mul_vec(x, &unit_vec(self.p, self.dim, j)))
            .collect();
        Mat::from_cols(self.p, cols, self.dim)
    }

    /// Matrix of `x -> x * y`.
    pub fn right_mult_mat(&self, y: &[u16]) -> Mat {
        let cols = (0..self.dim)
            .map(|i| self.mul_vec(&unit_vec(self.p, self.dim, i), y))
            .collect();
        Mat::from_cols(self.p, cols, self.dim)
    }

    fn bi_fixes(&self, u: &[u16], x: &[u16]) -> bool {
        self.mul_vec(u, x) == *x && self.mul_vec(x, u) == *x
    }

    /// All members of `Unit{elems}`: local units bi-fixing every listed element.
    pub fn units_fixing(&self, elems: &[&[u16]]) -> Vec<Vec<u16>> {
        self.local_units
            .iter()
            .filter(|u| elems.iter().all(|x| self.bi_fixes(u, x)))
            .cloned()
            .collect()
    }

    /// First member of `Unit{elems}` in declared order. Existence is
    /// guaranteed for validated algebras and finite lists.
    pub fn unit_for(&self, elems: &[&[u16]]) -> Option<Vec<u16>> {
        self.local_units
            .iter()
            .find(|u| elems.iter().all(|x| self.bi_fixes(u, x)))
            .cloned()
    }

    /// The Peirce corner `e A e` as a subspace of the algebra.
    pub fn corner(&self, e: &[u16]) -> Subspace {
        let rows = (0..self.dim)
            .map(|i| {
                let b = unit_vec(self.p, self.dim, i);
                self.mul_vec(&self.mul_vec(e, &b), e)
            })
            .collect();
        Subspace::from_rows(self.p, self.dim, rows)
    }

    /// `U(Z(eAe))`: elements of the corner `eAe` commuting with the whole
    /// corner and invertible inside it (`z z' = z' z = e` for some corner `z'`).
    /// Deterministic enumeration order.
    pub fn corner_center_units(&self, e: &[u16]) -> Vec<Vec<u16>> {
        let corner = self.corner(e);
        let center: Vec<Vec<u16>> = corner
            .vectors()
            .into_iter()
            .filter(|z| corner.basis().iter().all(|w| self.mul_vec(z, w) == self.mul_vec(w, z)))
            .collect();
        center
            .into_iter()
            .filter(|z| {
                // solve z * z' = e with z' constrained to the corner
                let lm = self.left_mult_mat(z);
                let include = Mat::from_cols(self.p, corner.basis().to_vec(), self.dim);
                let restricted = lm.mul(&include);
                match restricted.solve(e).expect("corner solve dims") {
                    Some(coords) => {
                        let zp = include.apply(&coords);
                        self.mul_vec(z, &zp) == *e && self.mul_vec(&zp, z) == *e
                    }
                    None => false,
                }
            })
            .collect()
    }
}

pub fn unit_vec(p: u16, dim: usize, k: usize) -> Vec<u16> {
    let _ = p;
    let mut v = vec![0u16; dim];
    v[k] = 1;
    v
}

/// An extension `R <= S` sharing the local-unit set of `S`.
///
/// `r` is the subalgebra materialized on the canonical basis of `r_space`,
/// with the same local units rewritten in `R`-coordinates; `embed` maps
/// `R`-coordinates into `S`-coordinates.
#[derive(Debug, Clone)]
pub struct Extension {
    s: Arc<Algebra>,
    r: Arc<Algebra>,
    r_space: Subspace,
    embed: Mat,
}

impl Extension {
    pub fn new(s: Arc<Algebra>, r_rows: Vec<Vec<u16>>) -> Result<Extension> {
        let r_space = Subspace::from_rows(s.characteristic(), s.dim(), r_rows);
        let report = Self::validate(&s, &r_space);
        if !report.is_valid() {
            return Err(Error::InvalidExtension(report.to_string()));
        }
        let p = s.characteristic();
        let k = r_space.dim();
        let embed = Mat::from_rows(p, r_space.basis().to_vec()).transpose();
        let mut table = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let prod = s.mul_vec(&r_space.basis()[i], &r_space.basis()[j]);
                table[i][j] = r_space
                    .coordinates(&prod)
                    .expect("closure was validated");
            }
        }
        let units = s
            .local_units()
            .iter()
            .map(|u| r_space.coordinates(u).expect("unit membership was validated"))
            .collect();
        let names = (0..k).map(|i| format!("r{i}")).collect();
        let r = Algebra::new(p, names, table, units)?;
        Ok(Extension { s, r, r_space, embed })
    }

    /// Report-based validation of the extension invariants: `R` closed under
    /// multiplication, every local unit inside `R`, and the shared set still a
    /// local-unit set for `R`.
    pub fn validate(s: &Algebra, r_space: &Subspace) -> ValidationReport {
        let mut report = s.validate();
        if r_space.ambient_dim() != s.dim() {
            report.push("R basis vectors have wrong length".into());
            return report;
        }
        for (i, a) in r_space.basis().iter().enumerate() {
            for (j, b) in r_space.basis().iter().enumerate() {
                if !r_space.contains(&s.mul_vec(a, b)) {
                    report.push(format!(
                        "R is not closed under multiplication: product of R-basis {i} and {j} leaves R"
                    ));
                }
            }
        }
        for (idx, u) in s.local_units().iter().enumerate() {
            if !r_space.contains(u) {
                report.push(format!("local unit #{idx} does not lie in R"));
            }
        }
        for (i, b) in r_space.basis().iter().enumerate() {
            if s.unit_for(&[b]).is_none() {
                report.push(format!("no local unit bi-fixes R-basis element {i}"));
            }
        }
        report
    }

    pub fn s(&self) -> &Arc<Algebra> {
        &self.s
    }

    pub fn r(&self) -> &Arc<Algebra> {
        &self.r
    }

    pub fn r_space(&self) -> &Subspace {
        &self.r_space
    }

    /// `S.dim x R.dim` matrix taking `R`-coordinates to `S`-coordinates.
    pub fn embed(&self) -> &Mat {
        &self.embed
    }

    pub fn p(&self) -> u16 {
        self.s.characteristic()
    }

    /// `R`-coordinates of an `S`-element known to lie in `R`.
    pub fn r_coords(&self, v: &[u16]) -> Option<Vec<u16>> {
        self.r_space.coordinates(v)
    }

    /// Product span `A * B` of two subspaces of `S`.
    pub fn product_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut rows = Vec::with_capacity(a.dim() * b.dim());
        for x in a.basis() {
            for y in b.basis() {
                rows.push(self.s.mul_vec(x, y));
            }
        }
        Subspace::from_rows(self.p(), self.s.dim(), rows)
    }
}

/// Enumerate every element of the algebra (all `p^dim` coefficient vectors).
/// Deterministic order; intended for small test fixtures.
pub fn all_elements(a: &Algebra) -> Vec<Vec<u16>> {
    let total = (a.characteristic() as u64).pow(a.dim() as u32);
    (0..total)
        .map(|idx| index_to_coeffs(a.characteristic(), a.dim(), idx))
        .collect()
}
