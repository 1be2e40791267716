use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qqw::coin::{random_coin, random_unit, CoinFamily};
use qqw::exact::{exact_distribution, xi_bruteforce_coin, xi_closed};
use qqw::limit::LimitDensity;
use qqw::spectral::{eigen_system, wrap_angle};
use qqw::sylvester::{solve_sylvester, sylvester_residual};
use qqw::walk::evolve_fourier;
use qqw::{distribution, evolve, u_theta, Coin, InitialState, Quaternion};

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from)
}

fn family() -> impl Strategy<Value = CoinFamily> {
    prop_oneof![
        Just(CoinFamily::General),
        Just(CoinFamily::Complex),
        Just(CoinFamily::Case1),
        Just(CoinFamily::Case2),
        Just(CoinFamily::Case3),
        Just(CoinFamily::Case4),
        Just(CoinFamily::Case5),
    ]
}

fn coin_and_init(family: CoinFamily, seed: u64) -> (Coin, InitialState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coin = random_coin(family, &mut rng);
    let alpha = random_unit(&mut rng, [true; 4]) * 0.6;
    let beta = random_unit(&mut rng, [true; 4]) * 0.8;
    (coin, InitialState::new(alpha, beta).unwrap())
}

proptest! {
    #[test]
    fn norm_is_multiplicative(x in quaternion(), y in quaternion()) {
        prop_assert!(((x * y).norm() - x.norm() * y.norm()).abs() <= 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn inverse_is_two_sided(x in quaternion()) {
        prop_assume!(x.norm() > 1e-3);
        prop_assert!((x * x.inv() - Quaternion::ONE).norm() < 1e-12);
        prop_assert!((x.inv() * x - Quaternion::ONE).norm() < 1e-12);
    }

    #[test]
    fn sylvester_unique_solution(a in quaternion(), b in quaternion(), c in quaternion()) {
        prop_assume!((a.re() - b.re()).abs() > 0.05 || (a.im().norm() - b.im().norm()).abs() > 0.05);
        let x = solve_sylvester(a, b, c, Quaternion::ZERO);
        prop_assert!(sylvester_residual(a, b, c, x) <= 1e-10 * (1.0 + c.norm()));
    }

    #[test]
    fn coin_json_round_trips(f in family(), seed in any::<u64>()) {
        let (coin, _) = coin_and_init(f, seed);
        let text = serde_json::to_string(&coin).unwrap();
        let back: Coin = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, coin);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_conserves_and_matches_complex_form(f in family(), seed in any::<u64>(), n in 0usize..80) {
        let (coin, init) = coin_and_init(f, seed);
        let d = distribution(&evolve(&coin, &init, n));
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
        prop_assert!(d.max_diff(&evolve_fourier(&coin, &init, n).distribution()) < 1e-12);
    }

    #[test]
    fn closed_path_sums_match_enumeration(
        f in prop_oneof![Just(CoinFamily::Complex), Just(CoinFamily::Case3), Just(CoinFamily::Case4)],
        seed in any::<u64>(),
        l in 0usize..7,
        m in 0usize..7,
    ) {
        let (coin, _) = coin_and_init(f, seed);
        let closed = xi_closed(&coin, l, m).unwrap();
        let brute = xi_bruteforce_coin(&coin, l, m).unwrap();
        prop_assert!(closed.matrix.max_diff(&brute.matrix) < 1e-11);
    }

    #[test]
    fn exact_distribution_matches_simulation(
        f in prop_oneof![Just(CoinFamily::Complex), Just(CoinFamily::Case3), Just(CoinFamily::Case4)],
        seed in any::<u64>(),
        n in 1usize..60,
    ) {
        let (coin, init) = coin_and_init(f, seed);
        let exact = exact_distribution(&coin, &init, n).unwrap();
        prop_assert!(exact.max_diff(&distribution(&evolve(&coin, &init, n))) < 1e-10);
    }

    #[test]
    fn eigenpairs_have_small_residuals(seed in any::<u64>(), theta in -PI..PI) {
        let (coin, _) = coin_and_init(CoinFamily::General, seed);
        let u = u_theta(&coin, theta).matrix;
        if let Ok(pairs) = eigen_system(&coin, theta) {
            for p in pairs {
                prop_assert!(p.residual(&u) < 1e-9);
                prop_assert!((p.eigenvalue.norm() - 1.0).abs() < 1e-12);
                prop_assert!((wrap_angle(p.eigenvalue.arg()) - p.lambda).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn case5_law_is_a_probability(seed in any::<u64>()) {
        let (coin, init) = coin_and_init(CoinFamily::Case5, seed);
        let law = LimitDensity::qqw_case5(&coin, &init).unwrap();
        prop_assert!((law.weighted_mass().unwrap() - 1.0).abs() < 1e-8);
        prop_assert!(law.r > 0.0 && law.r <= coin.a().norm() + 1e-12);
        prop_assert!((law.cdf(law.r).unwrap() - 1.0).abs() < 1e-8);
    }
}
