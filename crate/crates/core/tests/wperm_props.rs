mod common;

use common::random_wperm;
use lsu_core::matrix::Arith;
use lsu_core::ring::{BigInt, Frac};
use lsu_core::{DMatrix, WPerm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type W = WPerm<Frac<BigInt>>;

fn dense(w: &W) -> DMatrix<Frac<BigInt>> {
    w.to_dense()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_dense_and_unit_map_is_homomorphic(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t) = (random_wperm(&mut rng, n, false), random_wperm(&mut rng, n, false));
        let st = s.mul(&t).unwrap();
        prop_assert_eq!(dense(&st), dense(&s).mul(&dense(&t)).unwrap());
        prop_assert_eq!(st.unit_map(), s.unit_map().mul(&t.unit_map()).unwrap());
        prop_assert_eq!(s.mul_dense(&Arith::default(), &dense(&t)).unwrap(), dense(&st));
        prop_assert_eq!(t.dense_mul(&Arith::default(), &dense(&s)).unwrap(), dense(&st));
        prop_assert_eq!(dense(&s).data().iter().filter(|v| !lsu_core::ring::Ring::is_zero(*v)).count(), s.rank());
    }

    #[test]
    fn complement_properties(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_wperm(&mut rng, n, true);
        let bar = p.complement_map();
        let twice = bar.complement_map();
        prop_assert_eq!(twice.row_idem(), p.row_idem());
        prop_assert_eq!(twice.col_idem(), p.col_idem());
        // exact involution on order-preserving patterns
        let mut cols: Vec<usize> = p.pivots().map(|(_, c, _)| c).collect();
        cols.sort_unstable();
        let rows: Vec<usize> = p.pivots().map(|(r, _, _)| r).collect();
        let mono = W::from_pivots(n, rows.into_iter().zip(cols).map(|(r, c)| (r, c, common::q(1, 1)))).unwrap();
        prop_assert_eq!(mono.complement_map().complement_map(), mono);
        let full = p.add_disjoint(&bar).unwrap();
        prop_assert!(full.is_permutation() && full.is_full_rank());
        prop_assert_eq!(p.extended_map(), full);
    }

    #[test]
    fn moore_penrose_identities(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_wperm(&mut rng, n, false);
        let sp = s.mp_inverse();
        let (ds, dp) = (dense(&s), dense(&sp));
        prop_assert_eq!(ds.mul(&dp).unwrap().mul(&ds).unwrap(), ds.clone());
        prop_assert_eq!(dp.mul(&ds).unwrap().mul(&dp).unwrap(), dp.clone());
        let ssp = ds.mul(&dp).unwrap();
        let sps = dp.mul(&ds).unwrap();
        prop_assert_eq!(ssp.transpose(), ssp);
        prop_assert_eq!(sps.transpose(), sps);
        prop_assert_eq!(sp.mp_inverse(), s);
    }

    #[test]
    fn idempotents_frame_s(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_wperm(&mut rng, n, false);
        let (i, j) = (s.row_idem(), s.col_idem());
        let (di, dj) = (i.to_dense::<Frac<BigInt>>(), j.to_dense::<Frac<BigInt>>());
        let (dib, djb) = (i.complement().to_dense(), j.complement().to_dense());
        let ds = dense(&s);
        prop_assert_eq!(di.mul(&ds).unwrap().mul(&dj).unwrap(), ds.clone());
        prop_assert!(dib.mul(&ds).unwrap().is_zero());
        prop_assert!(ds.mul(&djb).unwrap().is_zero());
        prop_assert_eq!(di.mul(&di).unwrap(), di.clone());
        prop_assert_eq!(di.add(&dib).unwrap(), DMatrix::identity(n));
        let e = s.unit_map();
        prop_assert_eq!(e.mul(&e.transpose()).unwrap().to_dense(), di);
        prop_assert_eq!(e.transpose().mul(&e).unwrap().to_dense(), dj);
    }
}

#[test]
fn printed_involution_example() {
    let s = W::from_pivots(3, [(2, 0, common::q(1, 1))]).unwrap();
    let bar = W::from_pivots(3, [(0, 1, common::q(1, 1)), (1, 2, common::q(1, 1))]).unwrap();
    assert_eq!(s.complement_map(), bar);
    assert_eq!(bar.complement_map(), s);
}
