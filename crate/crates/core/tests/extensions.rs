//! Sequence verification over extensions beyond the bundled fixtures,
//! chosen to exercise behavior the bundled ones do not: a nontrivial image
//! of the preimage map, coinciding classes from the two generator families,
//! and a non-semisimple commutative subalgebra.

use picseq_core::algebra::Extension;
use picseq_core::auts::{aut_r_rings, aut_s_r};
use picseq_core::coupling::{class_witness, inclusion_coupling, twist_coupling};
use picseq_core::inv::inv_group;
use picseq_core::samples;
use picseq_core::sequences::{diagram, verify_all, Tables};
use picseq_core::Subspace;

/// `R = F_2 . I` inside the upper-triangular algebra, with `E = {I}`.
/// Here `span{I + e12}` squares to `R`, so `Inv` is nontrivial and is hit
/// by the preimage map; the twist along conjugation by `I + e12` lands in
/// the same coupling class as the inclusion of that subbimodule.
fn scalar_line_in_triangular() -> Extension {
    let names = vec!["e11".into(), "e12".into(), "e22".into()];
    let mut table = vec![vec![vec![0u16; 3]; 3]; 3];
    table[0][0][0] = 1;
    table[0][1][1] = 1;
    table[1][2][1] = 1;
    table[2][2][2] = 1;
    let algebra =
        picseq_core::Algebra::new(2, names, table, vec![vec![1, 0, 1]]).expect("valid algebra");
    Extension::new(algebra, vec![vec![1, 0, 1]]).expect("valid extension")
}

/// `R = F_2[e12]` (a non-semisimple commutative subalgebra) inside `M_2(F_2)`.
fn jordan_line_in_m2() -> Extension {
    let s = samples::matrix_algebra(2, 2);
    Extension::new(s, vec![vec![1, 0, 0, 1], vec![0, 1, 0, 0]]).expect("valid extension")
}

fn diagonal_in_triangular_f3() -> Extension {
    let s = samples::upper_triangular_algebra(3);
    Extension::new(s, vec![vec![1, 0, 0], vec![0, 0, 1]]).expect("valid extension")
}

/// `R = F_3 . I` inside `T_2(F_3)`: automorphisms of order greater than two,
/// so `lambda` and `lambda^-1` act differently and the orientation of every
/// connecting map is observable.
fn scalar_line_in_triangular_f3() -> Extension {
    let s = samples::upper_triangular_algebra(3);
    let algebra = picseq_core::Algebra::new(
        3,
        s.names().to_vec(),
        (0..3)
            .map(|i| (0..3).map(|j| s.basis_product(i, j).to_vec()).collect())
            .collect(),
        vec![vec![1, 0, 1]],
    )
    .expect("valid algebra");
    Extension::new(algebra, vec![vec![1, 0, 1]]).expect("valid extension")
}

fn diagonal_in_m2_f5() -> Extension {
    let s = samples::matrix_algebra(5, 2);
    Extension::new(s, vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]]).expect("valid extension")
}

/// `R = F_5 . (1,1,1)` inside `S = F_5 x F_5 x F_5`. Every permutation of the
/// idempotents is an outer ring automorphism fixing `R`, so the twist map is
/// injective into the coupling classes and the reachable class group is the
/// full symmetric group on three letters: the first non-abelian case, with
/// order-three twists whose pairings are genuinely asymmetric.
fn scalar_line_in_f5_cubed() -> Extension {
    let names = vec!["e1".into(), "e2".into(), "e3".into()];
    let mut table = vec![vec![vec![0u16; 3]; 3]; 3];
    for i in 0..3 {
        table[i][i][i] = 1;
    }
    let algebra = picseq_core::Algebra::new(5, names, table, vec![vec![1, 1, 1]])
        .expect("valid algebra");
    Extension::new(algebra, vec![vec![1, 1, 1]]).expect("valid extension")
}

#[test]
fn scalar_line_has_nontrivial_preimage_image() {
    let ext = scalar_line_in_triangular();
    let inv = inv_group(&ext).unwrap();
    assert_eq!(inv.order(), 2, "R and span{{I + e12}}");
    let aut = aut_s_r(&ext).unwrap();
    assert_eq!(aut.order(), 2, "right multiplication by I and by I + e12");
    let d = picseq_core::auts::d_hom(&ext, &aut, &inv).unwrap();
    assert_eq!(d.image().order(), 2, "the preimage map is onto Inv here");
    assert_eq!(d.kernel().order(), 1);
}

#[test]
fn scalar_line_families_meet_in_one_class() {
    let ext = scalar_line_in_triangular();
    let inv = inv_group(&ext).unwrap();
    let nontrivial_sub = inv
        .elems
        .iter()
        .find(|e| &e.sub != ext.r_space())
        .expect("nontrivial member");
    let expected = Subspace::from_rows(2, 3, vec![vec![1, 1, 1]]);
    assert_eq!(nontrivial_sub.sub, expected);
    let rings = aut_r_rings(&ext).unwrap();
    assert_eq!(rings.order(), 2);
    let conj = rings
        .mats
        .iter()
        .find(|m| **m != picseq_core::Mat::identity(2, 3))
        .expect("nontrivial automorphism");
    let from_inclusion = inclusion_coupling(&ext, nontrivial_sub).unwrap();
    let from_twist = twist_coupling(&ext, conj).unwrap();
    assert!(
        class_witness(&ext, &from_inclusion, &from_twist)
            .unwrap()
            .is_some(),
        "the inclusion and twist generators land in the same class"
    );
}

#[test]
fn all_sequences_pass_on_scalar_line_extension() {
    let ext = scalar_line_in_triangular();
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
    let tables = Tables::new(&ext).unwrap();
    let classes = tables.classes.as_ref().unwrap();
    assert_eq!(classes.order(), 2, "one nontrivial reachable class");
}

#[test]
fn all_sequences_pass_on_jordan_line_extension() {
    let ext = jordan_line_in_m2();
    assert_eq!(ext.r().dim(), 2);
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
}

#[test]
fn all_sequences_pass_on_triangular_f3() {
    let ext = diagonal_in_triangular_f3();
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
}

#[test]
fn diagram_orders_reflect_the_scalar_line_groups() {
    let ext = scalar_line_in_triangular();
    let d = diagram(&ext).unwrap();
    let node = |name: &str| d.nodes.iter().find(|n| n.name == name).unwrap();
    assert_eq!(node("Aut_SR(S)").order, Some(2));
    assert_eq!(node("Inv(R<=S)").order, Some(2));
    assert_eq!(node("Ker(D)").order, Some(1));
}

#[test]
fn preimage_map_orientation_is_observable_over_f3() {
    // lambda = right multiplication by u = I + e12 has order > 2 here, and
    // lambda^-1(R) = span{u^-1} differs from span{u}
    let ext = scalar_line_in_triangular_f3();
    let u = vec![1u16, 1, 1]; // I + e12
    let u_inv = vec![1u16, 2, 1]; // I + 2 e12
    let lam = ext.s().right_mult_mat(&u);
    let x = picseq_core::auts::aut_to_inv(&ext, &lam).unwrap();
    assert_eq!(x.sub, Subspace::from_rows(3, 3, vec![u_inv.clone()]));
    assert_eq!(x.inverse, Subspace::from_rows(3, 3, vec![u.clone()]));
    assert_ne!(x.sub, x.inverse);
}

#[test]
fn induced_automorphism_orientation_is_observable_over_f3() {
    // the induced automorphism of right multiplication by u is conjugation
    // s -> u^-1 s u, which differs from s -> u s u^-1 when u has order > 2
    let ext = scalar_line_in_triangular_f3();
    let u = vec![1u16, 1, 1];
    let u_inv = vec![1u16, 2, 1];
    let lam = ext.s().right_mult_mat(&u);
    let got = picseq_core::auts::induced_ring_aut(&ext, &lam).unwrap();
    let conj_cols: Vec<Vec<u16>> = (0..3)
        .map(|j| {
            let mut e = vec![0u16; 3];
            e[j] = 1;
            ext.s().mul_vec(&ext.s().mul_vec(&u_inv, &e), &u)
        })
        .collect();
    let expected = picseq_core::Mat::from_cols(3, conj_cols, 3);
    assert_eq!(got, expected);
    let wrong_cols: Vec<Vec<u16>> = (0..3)
        .map(|j| {
            let mut e = vec![0u16; 3];
            e[j] = 1;
            ext.s().mul_vec(&ext.s().mul_vec(&u, &e), &u_inv)
        })
        .collect();
    assert_ne!(got, picseq_core::Mat::from_cols(3, wrong_cols, 3));
}

#[test]
fn all_sequences_pass_on_scalar_line_f3() {
    let ext = scalar_line_in_triangular_f3();
    let inv = inv_group(&ext).unwrap();
    // one class per invertible element of S up to scalars: 12 / 2 = 6
    assert_eq!(inv.order(), 6);
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
}

#[test]
fn m2_f5_group_orders_and_hat_matrix() {
    let ext = diagonal_in_m2_f5();
    let aut = aut_s_r(&ext).unwrap();
    assert_eq!(aut.order(), 16, "diagonal unit pairs over F_5");
    let rings = aut_r_rings(&ext).unwrap();
    assert_eq!(rings.order(), 4, "conjugations by diag(1, a)");
    // right multiplication by diag(1, 2) induces s -> diag(1,3) s diag(1,2),
    // which scales e12 by 2 and e21 by 3
    let lam = ext.s().right_mult_mat(&[1, 0, 0, 2]);
    let got = picseq_core::auts::induced_ring_aut(&ext, &lam).unwrap();
    let expected = picseq_core::Mat::from_rows(
        5,
        vec![
            vec![1, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 3, 0],
            vec![0, 0, 0, 1],
        ],
    );
    assert_eq!(got, expected);
}

#[test]
fn all_sequences_pass_on_m2_f5() {
    let ext = diagonal_in_m2_f5();
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
}

#[test]
fn split_torus_has_outer_twists_and_s3_class_group() {
    let ext = scalar_line_in_f5_cubed();
    let rings = aut_r_rings(&ext).unwrap();
    assert_eq!(rings.order(), 6, "permutations of three idempotents");
    assert_eq!(rings.group.center().order(), 1, "S_3 has trivial center");
    // every nontrivial permutation twist has a nontrivial class: the only
    // bilinear maps S -> S_gamma annihilate a coordinate, so none is invertible
    for gamma in &rings.mats {
        let tc = picseq_core::auts::twist_class(&ext, gamma).unwrap();
        let is_identity = *gamma == picseq_core::Mat::identity(5, 3);
        assert_eq!(tc.trivial_witness.is_some(), is_identity);
    }
    let tables = Tables::new(&ext).unwrap();
    let classes = tables.classes.as_ref().unwrap();
    assert_eq!(classes.order(), 6, "twists generate a faithful S_3 of classes");
    assert_eq!(classes.group.center().order(), 1);
}

#[test]
fn all_sequences_pass_on_split_torus() {
    let ext = scalar_line_in_f5_cubed();
    for report in verify_all(&ext).unwrap() {
        assert!(report.pass, "{}", report.render_text());
    }
}
