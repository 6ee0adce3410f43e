//! Canonical subspaces of `F_p^n`.
//!
//! A subspace is stored as its reduced row-echelon basis, so structural
//! equality coincides with equality of subspaces and the byte key is a
//! canonical certificate.

use super::mat::Mat;
use super::scalar::{self, vec_ops};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u16,
    ambient: usize,
    basis: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u16, ambient: usize) -> Subspace {
        Subspace { p, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u16, ambient: usize) -> Subspace {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0u16; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { p, ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of the given rows, canonicalized.
    pub fn from_rows(p: u16, ambient: usize, rows: Vec<Vec<u16>>) -> Subspace {
        for r in &rows {
            assert_eq!(r.len(), ambient, "row length mismatch");
        }
        if rows.is_empty() {
            return Subspace::zero(p, ambient);
        }
        let (r, pivots) = Mat::from_rows(p, rows).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { p, ambient, basis, pivots }
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u16>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduce `v` against the basis: returns the coordinates along the basis
    /// rows and the residual (zero iff `v` lies in the subspace).
    fn reduce(&self, v: &[u16]) -> (Vec<u16>, Vec<u16>) {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            coords.push(c);
            if c != 0 {
                vec_ops::scaled_add_assign(self.p, &mut w, scalar::neg(self.p, c), b);
            }
        }
        (coords, w)
    }

    pub fn contains(&self, v: &[u16]) -> bool {
        vec_ops::is_zero(&self.reduce(v).1)
    }

    /// Coordinates of `v` with respect to the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &[u16]) -> Option<Vec<u16>> {
        let (coords, residual) = self.reduce(v);
        vec_ops::is_zero(&residual).then_some(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.p == other.p
            && self.ambient == other.ambient
            && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other, "sum")?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Subspace::from_rows(self.p, self.ambient, rows))
    }

    /// Zassenhaus intersection: row-reduce `[U | U; V | 0]` and read the
    /// intersection off the rows whose left block vanished.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other, "intersect")?;
        let n = self.ambient;
        let mut rows = Vec::new();
        for b in &self.basis {
            let mut row = b.clone();
            row.extend_from_slice(b);
            rows.push(row);
        }
        for b in &other.basis {
            let mut row = b.clone();
            row.extend(std::iter::repeat_n(0, n));
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(self.p, n));
        }
        let (r, pivots) = Mat::from_rows(self.p, rows).rref();
        let mut out = Vec::new();
        for i in 0..pivots.len() {
            let row = r.row(i);
            if vec_ops::is_zero(&row[..n]) {
                out.push(row[n..].to_vec());
            }
        }
        Ok(Subspace::from_rows(self.p, n, out))
    }

    /// Quotient of the ambient space by this subspace.
    ///
    /// Returns `(q, proj, sect)` with `proj: F^n -> F^q` surjective,
    /// `kernel(proj) = self`, and `proj . sect = id_q`. The section embeds the
    /// free (non-pivot) coordinates.
    pub fn quotient_with_section(&self) -> (usize, Mat, Mat) {
        let n = self.ambient;
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let q = free.len();
        // reduction matrix: v - sum_i v[pc_i] * b_i, restricted to free coordinates
        let mut proj = Mat::zero(self.p, q, n);
        for (out_row, &f) in free.iter().enumerate() {
            proj.set(out_row, f, 1);
            for (b, &pc) in self.basis.iter().zip(&self.pivots) {
                if b[f] != 0 {
                    // contribution of subtracting v[pc] * b at coordinate f
                    proj.set(out_row, pc, scalar::neg(self.p, b[f]));
                }
            }
        }
        let mut sect = Mat::zero(self.p, n, q);
        for (col, &f) in free.iter().enumerate() {
            sect.set(f, col, 1);
        }
        (q, proj, sect)
    }

    /// All `p^dim` member vectors, in coefficient-lexicographic order.
    pub fn vectors(&self) -> Vec<Vec<u16>> {
        let d = self.basis.len();
        let total = (self.p as u64).pow(d as u32);
        (0..total)
            .map(|idx| {
                let coeffs = index_to_coeffs(self.p, d, idx);
                let mut v = vec![0u16; self.ambient];
                for (c, b) in coeffs.iter().zip(&self.basis) {
                    if *c != 0 {
                        vec_ops::scaled_add_assign(self.p, &mut v, *c, b);
                    }
                }
                v
            })
            .collect()
    }

    /// Stable canonical byte key.
    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(4 + self.basis.len() * self.ambient);
        k.extend_from_slice(&(self.basis.len() as u16).to_le_bytes());
        k.extend_from_slice(&(self.ambient as u16).to_le_bytes());
        for b in &self.basis {
            k.extend(b.iter().map(|&x| x as u8));
        }
        k
    }

    pub fn render(&self) -> String {
        if self.basis.is_empty() {
            return "span{}".to_string();
        }
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|b| {
                let entries: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("({})", entries.join(","))
            })
            .collect();
        format!("span{{{}}}", rows.join(", "))
    }

    fn check_compatible(&self, other: &Subspace, op: &str) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "{op}: ambient F_{}^{} vs F_{}^{}",
                self.p, self.ambient, other.p, other.ambient
            )));
        }
        Ok(())
    }
}

/// Digits of `idx` in base `p`, most significant digit first; used as the
/// canonical enumeration order for coefficient tuples.
pub fn index_to_coeffs(p: u16, len: usize, idx: u64) -> Vec<u16> {
    let mut coeffs = vec![0u16; len];
    let mut rem = idx;
    for slot in (0..len).rev() {
        coeffs[slot] = (rem % p as u64) as u16;
        rem /= p as u64;
    }
    debug_assert_eq!(rem, 0, "index out of range");
    coeffs
}

/// `p^len` if it fits the search budget.
pub fn combo_count(p: u16, len: usize, budget: u64) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..len {
        total = total.saturating_mul(p as u64);
        if total > budget {
            return Err(Error::BudgetExceeded(format!(
                "{p}^{len} candidate combinations exceed budget {budget}"
            )));
        }
    }
    Ok(total)
}

/// All subspaces of `F_p^n` of dimension `k`, generated directly in reduced
/// row-echelon form (one representative per subspace, no duplicates).
pub fn subspaces_of_dim(p: u16, n: usize, k: usize) -> Vec<Subspace> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Subspace::zero(p, n)];
    }
    let mut out = Vec::new();
    let mut pivots = (0..k).collect::<Vec<usize>>();
    loop {
        // free entry positions: (row i, col j) with j > pivots[i], j not a pivot
        let mut free_pos = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for j in (pc + 1)..n {
                if !pivots.contains(&j) {
                    free_pos.push((i, j));
                }
            }
        }
        let total = (p as u64).pow(free_pos.len() as u32);
        for idx in 0..total {
            let digits = index_to_coeffs(p, free_pos.len(), idx);
            let mut basis = vec![vec![0u16; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                basis[i][pc] = 1;
            }
            for (&(i, j), &d) in free_pos.iter().zip(&digits) {
                basis[i][j] = d;
            }
            out.push(Subspace { p, ambient: n, basis, pivots: pivots.clone() });
        }
        // next pivot combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in (i + 1)..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subspaces of `F_p^n`, by increasing dimension.
pub fn all_subspaces(p: u16, n: usize) -> Vec<Subspace> {
    (0..=n).flat_map(|k| subspaces_of_dim(p, n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_with_zero_is_identity() {
        let v = Subspace::from_rows(2, 3, vec![vec![1, 0, 1]]);
        let z = Subspace::zero(2, 3);
        assert_eq!(v.sum(&z).unwrap(), v);
    }

    #[test]
    fn intersect_is_idempotent() {
        let v = Subspace::from_rows(3, 3, vec![vec![1, 2, 0], vec![0, 0, 1]]);
        assert_eq!(v.intersect(&v).unwrap(), v);
    }

    #[test]
    fn intersection_of_planes_in_f2_cubed() {
        let u = Subspace::from_rows(2, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Subspace::from_rows(2, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let w = u.intersect(&v).unwrap();
        assert_eq!(w, Subspace::from_rows(2, 3, vec![vec![0, 1, 0]]));
    }

    #[test]
    fn quotient_of_plane_by_line() {
        // F_2^2 / span{(1,0)} has dimension 1 and proj . sect = id
        let sub = Subspace::from_rows(2, 2, vec![vec![1, 0]]);
        let (q, proj, sect) = sub.quotient_with_section();
        assert_eq!(q, 1);
        assert_eq!(proj.mul(&sect), Mat::identity(2, 1));
        assert_eq!(proj.kernel(), sub);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // F_2^3: 1 + 7 + 7 + 1 = 16 subspaces
        assert_eq!(all_subspaces(2, 3).len(), 16);
        // F_3^4 dimension 2: gaussian binomial [4 choose 2]_3 = 130
        assert_eq!(subspaces_of_dim(3, 4, 2).len(), 130);
    }

    #[test]
    fn enumerated_subspaces_are_canonical_and_distinct() {
        let subs = all_subspaces(2, 4);
        let mut keys: Vec<Vec<u8>> = subs.iter().map(|s| s.key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), subs.len());
        for s in &subs {
            let recanon = Subspace::from_rows(2, 4, s.basis().to_vec());
            assert_eq!(&recanon, s, "generated basis must already be canonical");
        }
    }

    #[test]
    fn vectors_enumerates_all_members() {
        let v = Subspace::from_rows(3, 2, vec![vec![1, 2]]);
        let pts = v.vectors();
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&vec![0, 0]));
        assert!(pts.contains(&vec![1, 2]));
        assert!(pts.contains(&vec![2, 1]));
    }
}
