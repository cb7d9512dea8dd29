use std::sync::Arc;

use proptest::prelude::*;
use torograd::brion::{make_g, phi, PiecewisePoly};
use torograd::exactnum::{frac, hadamard, rat, IntVector, RatMatrix, Rational};
use torograd::fixedpoints::{f_table, is_generic, Gamma};
use torograd::graded::{betti_from_morse, filtration_ranks};
use torograd::polytope::{builtin, Polytope};

fn small_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(prop::collection::vec((-5i64..=5, 1i64..=3), n), n).prop_map(|rows| {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|(a, b)| frac(a, b)).collect())
            .collect();
        RatMatrix::from_rows(rows).unwrap()
    })
}

fn surface() -> impl Strategy<Value = Polytope> {
    prop_oneof![
        Just(builtin("cp2", &[]).unwrap()),
        Just(builtin("cp1xcp1", &[]).unwrap()),
        (0i64..=3).prop_map(|k| builtin("hirzebruch", &[k]).unwrap()),
    ]
}

fn generic_pair() -> impl Strategy<Value = (Polytope, Gamma)> {
    (surface(), -20i64..=20, -20i64..=20)
        .prop_filter_map("gamma must be generic", |(p, a, b)| {
            let v = IntVector::from([a, b]);
            is_generic(&p, &v).generic.then(|| {
                let g = Gamma::new(&p, v).unwrap();
                (p, g)
            })
        })
}

proptest! {
    #[test]
    fn inverse_is_two_sided(m in small_matrix(3)) {
        if let Ok(inv) = m.inverse() {
            prop_assert!(m.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&m).unwrap().is_identity());
        } else {
            prop_assert!(m.rank() < 3);
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix(4)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_ignores_nonzero_row_scaling(m in small_matrix(3), row in 0usize..3, k in 1i64..7) {
        let mut scaled = m.clone();
        scaled.scale_row(row, &frac(-k, 2));
        prop_assert_eq!(m.rank(), scaled.rank());
    }

    #[test]
    fn primitive_is_idempotent(v in prop::collection::vec(-30i64..=30, 1..5)) {
        let v = IntVector::from(v);
        if let Ok(p) = v.primitive() {
            prop_assert!(p.is_primitive());
            prop_assert_eq!(p.primitive().unwrap(), p);
        } else {
            prop_assert!(v.is_zero());
        }
    }

    #[test]
    fn table_is_linear_in_gamma((p, g) in generic_pair(), k in 2i64..6) {
        let t = f_table(&p, &g).unwrap();
        let gk = Gamma::new(&p, g.vector().scale(&k.into())).unwrap();
        let tk = f_table(&p, &gk).unwrap();
        for r in 0..t.num_rays() {
            let scaled: Vec<Rational> = t.row(r).iter().map(|x| x * rat(k)).collect();
            prop_assert_eq!(tk.row(r), &scaled[..]);
        }
    }

    #[test]
    fn gr_dims_match_palindromic_morse_counts((p, g) in generic_pair()) {
        let t = f_table(&p, &g).unwrap();
        let counts = betti_from_morse(&t);
        let rev: Vec<usize> = counts.iter().rev().copied().collect();
        prop_assert_eq!(&counts, &rev);
        prop_assert_eq!(filtration_ranks(&t, None).unwrap().gr_dims, counts);
        prop_assert!(t.theta().is_injective());
    }

    #[test]
    fn phi_is_linear_and_multiplicative(
        (p, g) in generic_pair(),
        a in 0usize..3, b in 0usize..3, c in 0usize..3,
        s in -4i64..=4,
    ) {
        let fan = Arc::new(p.normal_fan());
        let gs: Vec<PiecewisePoly> = (0..fan.rays.len()).map(|r| make_g(&fan, r).unwrap()).collect();
        let (ga, gb, gc) = (&gs[a], &gs[b], &gs[c]);
        let sum = ga.mul(gb).add(&gc.mul(gc).scale(&rat(s)));
        let lhs = phi(&sum, &g).unwrap();
        let pa = phi(ga, &g).unwrap();
        let pb = phi(gb, &g).unwrap();
        let pc = phi(gc, &g).unwrap();
        let rhs: Vec<Rational> = hadamard(&pa, &pb)
            .iter()
            .zip(hadamard(&pc, &pc))
            .map(|(x, y)| x + y * rat(s))
            .collect();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(phi(&ga.mul(gb).mul(gc), &g).unwrap(), hadamard(&hadamard(&pa, &pb), &pc));
    }
}
