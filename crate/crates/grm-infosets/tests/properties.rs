//! Randomized structural properties, driven by proptest.

use proptest::prelude::*;

use grm_infosets::cosets::{cyclotomic_coset, gcd, q_weight, CrtIso, DefiningSetZ};
use grm_infosets::infoset::GrmParams;

proptest! {
    /// T is a bijection: inv is a two-sided inverse on Z_n.
    #[test]
    fn crt_roundtrip(r1 in 2u64..80, r2 in 2u64..80, e in 0u64..6400) {
        prop_assume!(gcd(r1, r2) == 1);
        let iso = CrtIso::canonical(r1, r2).unwrap();
        let e = e % iso.n();
        prop_assert_eq!(iso.inv(iso.map(e)), e);
    }

    /// Multiplying an exponent by q permutes its base-q digits, so the
    /// q-weight is invariant on cosets mod q^m - 1.
    #[test]
    fn q_weight_constant_on_cosets(q in 2u64..10, m in 2u32..7, e in 1u64..3000) {
        prop_assume!(q.checked_pow(m).is_some());
        let n = q.pow(m) - 1;
        let e = 1 + e % (n - 1);
        for x in cyclotomic_coset(e, n, q).unwrap() {
            prop_assert_eq!(q_weight(x, q), q_weight(e, q));
        }
    }

    /// Cosets are closed orbits: every member generates the same coset.
    #[test]
    fn coset_well_defined(r in 2u64..500, a in 0u64..500, q in 2u64..8) {
        prop_assume!(gcd(q, r) == 1);
        let coset = cyclotomic_coset(a % r, r, q).unwrap();
        for &x in &coset {
            prop_assert_eq!(cyclotomic_coset(x, r, q).unwrap(), coset.clone());
        }
    }

    /// dim R_q(rho, m) + dim of the dual = q^m, and the defining-set count
    /// agrees with the dimension formula.
    #[test]
    fn duality_and_dimension(q in prop::sample::select(vec![3u64, 4, 5, 7]), m in 2u64..5, rho in 1u64..6) {
        let max = m * (q - 1);
        // keep the dual order m(q-1) - rho - 1 at least 1 as well
        prop_assume!(rho + 1 < max);
        let code = GrmParams { q, m, rho };
        let d = DefiningSetZ::grm(q, m, rho).unwrap();
        prop_assert_eq!(code.dimension().unwrap(), code.length() - d.len());
        prop_assert_eq!(
            code.dimension().unwrap() + code.dual().dimension().unwrap(),
            code.length()
        );
    }
}
