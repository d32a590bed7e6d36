use cellua::linalg::{ExactMatrix, Field, Scalar};
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(23))]
}

fn matrix() -> impl Strategy<Value = ExactMatrix> {
    (fields(), 0usize..6, 1usize..6).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
            let rows: Vec<Vec<Scalar>> = xs.chunks(c).map(|ch| ch.iter().map(|&x| f.from_i64(x)).collect()).collect();
            ExactMatrix::from_rows(f, c, rows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_plus_nullity(m in matrix()) {
        let ns = m.nullspace();
        prop_assert_eq!(m.rank() + ns.len(), m.cols());
        for v in ns {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_round_trips(m in matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
        let f = m.field();
        let x: Vec<Scalar> = (0..m.cols()).map(|i| f.from_i64(seed[i])).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = m.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn rref_rank_agrees_with_full_pivoting(m in matrix()) {
        prop_assert_eq!(m.rref().1.len(), m.rank());
    }
}
