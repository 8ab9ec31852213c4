use antinef_core::corpus;
use antinef_core::random::{random_antinef, DEFAULT_MAX_COEFF};
use antinef_core::rational::{int, ratio};
use antinef_core::realize::{build_ample_negative, choose_epsilon, choose_mu};
use antinef_core::{discrepancies, realize, verify_certificate, Error, ResolutionModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(name: &str) -> antinef_core::GraphFile {
    corpus::bundled_file(name).unwrap()
}

#[test]
fn a1_maximal_ideal() {
    let file = model("a1");
    let f0 = file.divisor("maximal").unwrap();
    assert_eq!(choose_epsilon(&file.model, f0).unwrap(), ratio(1, 4));
    let cert = realize(&file.model, f0).unwrap();
    assert_eq!(cert.epsilon, ratio(1, 4));
    assert_eq!(cert.points, vec![2]);
    assert_eq!(cert.chain_lengths, vec![2]);
    assert_eq!(cert.blown_model().num_curves(), 5);
    assert!(cert.verification.passed(), "{}", cert.verification);
    assert_eq!(cert.f_prime, cert.f);
}

#[test]
fn minus_three_curve_epsilon() {
    let file = model("c3");
    let f0 = file.divisor("maximal").unwrap();
    assert_eq!(choose_epsilon(&file.model, f0).unwrap(), ratio(1, 6));
    let cert = realize(&file.model, f0).unwrap();
    assert!(cert.verification.passed(), "{}", cert.verification);
}

#[test]
fn unit_ideal_is_trivial() {
    let file = model("a3");
    let f0 = file.model.zero_divisor();
    let cert = realize(&file.model, &f0).unwrap();
    assert_eq!(cert.points, vec![0, 0, 0]);
    assert_eq!(cert.blown_model().num_curves(), 3);
    assert!(cert.f_prime.is_zero());
    assert!(cert.verification.passed(), "{}", cert.verification);
}

#[test]
fn a2_fundamental_cycle() {
    let file = model("a2");
    let f0 = file.divisor("fundamental").unwrap();
    let cert = realize(&file.model, f0).unwrap();
    assert_eq!(cert.points, vec![1, 1]);
    assert!(cert.verification.passed(), "{}", cert.verification);
    let again = verify_certificate(&cert);
    assert_eq!(again, cert.verification);
}

#[test]
fn non_log_terminal_is_rejected() {
    for name in ["elliptic1", "elliptic3", "star3_2222"] {
        let file = model(name);
        let f0 = file.divisor("G").or(file.divisor("fundamental")).unwrap();
        assert!(
            matches!(realize(&file.model, f0), Err(Error::NotLogTerminal { .. })),
            "{name}"
        );
        assert!(matches!(
            choose_epsilon(&file.model, f0),
            Err(Error::NotLogTerminal { .. })
        ));
    }
}

#[test]
fn ample_negative_examples() {
    let a1 = ResolutionModel::from_matrix(&[0], &[vec![-2]]).unwrap();
    let (a, d) = build_ample_negative(&a1).unwrap();
    assert_eq!(a.exc(), &[int(1)]);
    assert_eq!(d, 2.into());
    assert_eq!(a1.products(&a).unwrap(), vec![int(-2)]);

    let a2 = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
    let (a, d) = build_ample_negative(&a2).unwrap();
    assert_eq!(a.exc(), &[int(1), int(1)]);
    assert_eq!(d, 1.into());
    assert_eq!(a2.products(&a).unwrap(), vec![int(-1), int(-1)]);
}

#[test]
fn mu_with_integral_coefficients_uses_full_headroom() {
    let a1 = ResolutionModel::from_matrix(&[0], &[vec![-2]]).unwrap();
    let f = a1.exc_divisor(&[1]).unwrap();
    let zero = a1.zero_divisor();
    let a = a1.exc_divisor(&[1]).unwrap();
    // c = (1 + 0)(F + 0) - 0 = E, integral: mu = 1/2 * 1/(1 * 1).
    assert_eq!(choose_mu(&f, &zero, &zero, &int(0), &a).unwrap(), ratio(1, 2));
    // c = (5/4)E: headroom (1 - 1/4) / (5/4) = 3/5, halved.
    let mu = choose_mu(&f, &zero, &zero, &ratio(1, 4), &a).unwrap();
    assert_eq!(mu, ratio(3, 10));
}

#[test]
fn random_realizations_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, file) in corpus::bundled() {
        if !discrepancies(&file.model).unwrap().log_terminal {
            continue;
        }
        for _ in 0..3 {
            let f0 = random_antinef(&file.model, &mut rng, DEFAULT_MAX_COEFF).unwrap();
            let start = std::time::Instant::now();
            let cert = realize(&file.model, &f0).unwrap();
            eprintln!(
                "{name}: Z={} curves, {:?}",
                cert.blown_model().num_curves(),
                start.elapsed()
            );
            assert!(cert.verification.passed(), "{name}: {}", cert.verification);
        }
    }
}
