//! Exact linear algebra over prime fields: the substrate for everything else.

pub mod mat;
pub mod scalar;
pub mod subspace;

pub use mat::{linear_combination, Mat};
pub use scalar::{check_prime, Scalar};
pub use subspace::{all_subspaces, combo_count, index_to_coeffs, subspaces_of_dim, Subspace};

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_mat() -> impl Strategy<Value = Mat> {
        (prop::sample::select(vec![2u16, 3, 5, 7]), 1usize..5, 1usize..5).prop_flat_map(
            |(p, r, c)| {
                prop::collection::vec(0..p, r * c)
                    .prop_map(move |data| Mat::from_flat(p, r, c, data))
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_mat()) {
            let (r, pivots) = m.rref();
            prop_assert_eq!(pivots.len() + m.kernel().dim(), m.cols());
            // row space is preserved: every reduced row lies in the original row space
            let orig = Subspace::from_rows(
                m.characteristic(),
                m.cols(),
                (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
            );
            for i in 0..pivots.len() {
                prop_assert!(orig.contains(r.row(i)));
            }
        }

        #[test]
        fn kernel_vectors_annihilate(m in arb_mat()) {
            let k = m.kernel();
            for b in k.basis() {
                prop_assert!(m.apply(b).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn quotient_projection_properties(m in arb_mat()) {
            let sub = m.image();
            let (q, proj, sect) = sub.quotient_with_section();
            prop_assert_eq!(q, m.rows() - sub.dim());
            prop_assert_eq!(proj.mul(&sect), Mat::identity(m.characteristic(), q));
            prop_assert_eq!(proj.kernel(), sub);
            prop_assert_eq!(proj.rank(), q);
        }
    }
}
