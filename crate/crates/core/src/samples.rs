//! Programmatic constructors for the bundled example extensions.
//!
//! The same data ships as JSON fixtures under `fixtures/`; a round-trip test
//! keeps the two in sync.

use crate::algebra::{Algebra, Extension};
use crate::error::Result;
use std::sync::Arc;

/// Full matrix algebra `M_n(F_p)` on the basis `E_ij` (index `i*n + j`),
/// with the identity as the single local unit.
pub fn matrix_algebra(p: u16, n: usize) -> Arc<Algebra> {
    let dim = n * n;
    let names = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("e{}{}", i + 1, j + 1)))
        .collect();
    let mut table = vec![vec![vec![0u16; dim]; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j == k {
                        table[i * n + j][k * n + l][i * n + l] = 1;
                    }
                }
            }
        }
    }
    let mut id = vec![0u16; dim];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    Algebra::new(p, names, table, vec![id]).expect("matrix algebra is associative and unital")
}

/// Upper-triangular `2x2` algebra over `F_p` on the basis `(e11, e12, e22)`,
/// with local units `{e11, e22, e11+e22}`.
pub fn upper_triangular_algebra(p: u16) -> Arc<Algebra> {
    let names = vec!["e11".into(), "e12".into(), "e22".into()];
    let mut table = vec![vec![vec![0u16; 3]; 3]; 3];
    table[0][0][0] = 1; // e11 e11 = e11
    table[0][1][1] = 1; // e11 e12 = e12
    table[1][2][1] = 1; // e12 e22 = e12
    table[2][2][2] = 1; // e22 e22 = e22
    let units = vec![vec![1, 0, 0], vec![0, 0, 1], vec![1, 0, 1]];
    Algebra::new(p, names, table, units).expect("triangular algebra is valid")
}

/// Diagonal matrices as rows of `M_2`.
fn diag_rows(n: usize) -> Vec<Vec<u16>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0u16; n * n];
            v[i * n + i] = 1;
            v
        })
        .collect()
}

/// `diag <= M_2(F_2)` with `E = {I}`.
pub fn fix_a() -> Result<Extension> {
    Extension::new(matrix_algebra(2, 2), diag_rows(2))
}

/// `diag <= M_2(F_3)` with `E = {I}`.
pub fn fix_b() -> Result<Extension> {
    Extension::new(matrix_algebra(3, 2), diag_rows(2))
}

/// `diag <= T_2(F_2)` with `E = {e11, e22, e11+e22}`.
pub fn fix_c() -> Result<Extension> {
    Extension::new(
        upper_triangular_algebra(2),
        vec![vec![1, 0, 0], vec![0, 0, 1]],
    )
}

/// The trivial extension `R = S = M_2(F_2)`.
pub fn fix_d() -> Result<Extension> {
    let s = matrix_algebra(2, 2);
    let rows = (0..4)
        .map(|i| {
            let mut v = vec![0u16; 4];
            v[i] = 1;
            v
        })
        .collect();
    Extension::new(s, rows)
}

/// All four bundled extensions with their conventional names.
pub fn all_fixtures() -> Vec<(&'static str, Extension)> {
    vec![
        ("fix-a", fix_a().expect("fix-a is valid")),
        ("fix-b", fix_b().expect("fix-b is valid")),
        ("fix-c", fix_c().expect("fix-c is valid")),
        ("fix-d", fix_d().expect("fix-d is valid")),
    ]
}
