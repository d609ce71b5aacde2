//! Worked examples through the public API.

use discmax::corpus::{generate, GeneratorSpec, Kind};
use discmax::czdecomp::{cz_decompose, cz_nesting_check, CZParams};
use discmax::dyadic::DyadicInterval;
use discmax::maxops::{
    bmo_norm, centered_max, dyadic_max, median_oscillation, sharp_max, uncentered_max, CenteredDivisor, Operator,
    OperatorConfig,
};
use discmax::seq::{absolute_average, signed_average, FiniteSequence, IntInterval};
use discmax::verify::{lp_power_certified, run_check, superlevel_count, Corpus, VerifyConfig};
use discmax::Error;

fn seq(offset: i64, values: &[f64]) -> FiniteSequence {
    FiniteSequence::new(offset, values.to_vec()).unwrap()
}

fn iv(lo: i64, hi: i64) -> IntInterval {
    IntInterval::new(lo, hi).unwrap()
}

fn delta() -> FiniteSequence {
    FiniteSequence::delta(0, 1.0).unwrap()
}

fn close(x: f64, y: f64) {
    assert!((x - y).abs() <= 1e-14 * y.abs().max(1.0), "{x} != {y}");
}

#[test]
fn sequences() {
    let a = seq(0, &[1.0, 2.0, 3.0]);
    assert_eq!(a.at(1), 2.0);
    assert_eq!(a.at(-5), 0.0);
    assert_eq!(FiniteSequence::zero().at(7), 0.0);

    assert_eq!(signed_average(&a, &iv(0, 2)), 2.0);
    assert_eq!(absolute_average(&a, &iv(0, 2), 0.0).unwrap(), 2.0);
    assert_eq!(absolute_average(&a, &iv(1, 4), 0.0).unwrap(), 1.25);
    let spike = seq(1, &[4.0]);
    close(absolute_average(&spike, &iv(1, 8), 0.5).unwrap(), 2f64.sqrt());

    assert_eq!(a.restrict(&iv(1, 2)), seq(1, &[2.0, 3.0]));
    assert!(a.restrict(&iv(5, 9)).is_zero());
    assert_eq!(delta().restrict(&iv(-1, 0)), delta());

    assert_eq!(seq(0, &[3.0, 1.0]).lp_power(2.0).unwrap(), 10.0);
    assert_eq!(FiniteSequence::zero().lp_power(2.0).unwrap(), 0.0);
    assert_eq!(seq(-1, &[1.0, 2.0, 2.0]).lp_power(1.0).unwrap(), 5.0);

    assert_eq!(seq(0, &[3.0, 1.0]).layer_cake_power(2.0).unwrap(), 10.0);
    assert_eq!(FiniteSequence::zero().layer_cake_power(2.0).unwrap(), 0.0);
    assert_eq!(delta().layer_cake_power(3.0).unwrap(), 1.0);

    let b = seq(0, &[3.0, 1.0]);
    assert_eq!(b.distribution_count(0.5).unwrap(), 2);
    assert_eq!(b.distribution_count(1.0).unwrap(), 1);
    assert_eq!(b.distribution_count(3.0).unwrap(), 0);
}

#[test]
fn sequence_files() {
    assert_eq!(
        FiniteSequence::from_json(r#"{"offset":0,"values":[1,2,3]}"#).unwrap(),
        seq(0, &[1.0, 2.0, 3.0])
    );
    assert!(FiniteSequence::from_json(r#"{"offset":5,"values":[]}"#).unwrap().is_zero());
    match FiniteSequence::from_json("{\"offset\":0,\n \"values\":[1,}") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(
        FiniteSequence::from_json(r#"{"offset":0,"values":[NaN]}"#),
        Err(Error::Domain(_))
    ));
}

#[test]
fn dyadic_grid() {
    let cases = [(0, 1, 0, (-1, 0)), (1, 2, 1, (1, 4)), (-3, 2, 0, (-3, 0))];
    for (m, n, j, (lo, hi)) in cases {
        let d = DyadicInterval::locate(m, n).unwrap();
        assert_eq!((d.index(), d.lo(), d.hi()), (j, lo, hi));
    }
    let i11 = DyadicInterval::new(1, 1).unwrap();
    let i10 = DyadicInterval::new(1, 0).unwrap();
    assert_eq!(i11.parent().unwrap(), DyadicInterval::new(2, 1).unwrap());
    assert_eq!(i10.parent().unwrap(), DyadicInterval::new(2, 0).unwrap());
    let (l, r) = DyadicInterval::new(2, 1).unwrap().children().unwrap();
    assert_eq!((l.span(), r.span()), (iv(1, 2), iv(3, 4)));
    assert!(DyadicInterval::new(0, 3).unwrap().children().is_err());

    let e = DyadicInterval::new(2, 1).unwrap().expand();
    assert_eq!((e.two_left, e.two_right, e.three), (iv(-3, 4), iv(1, 8), iv(-3, 8)));
    assert_eq!(e.three.len(), 12);
    let e = i10.expand();
    assert_eq!((e.two_left, e.two_right, e.three), (iv(-3, 0), iv(-1, 2), iv(-3, 2)));
    assert!(DyadicInterval::new(61, 1 << 3).is_err());
}

#[test]
fn operators() {
    let c = OperatorConfig::default();
    let two_r = OperatorConfig {
        centered_divisor: CenteredDivisor::TwoR,
        ..c
    };
    let d = delta();
    close(centered_max(&d, 0, &c), 1.0 / 3.0);
    close(centered_max(&d, 3, &c), 1.0 / 7.0);
    close(centered_max(&d, 0, &two_r), 0.5);

    close(uncentered_max(&seq(0, &[1.0, 2.0, 3.0]), 1, &c), 2.5);
    close(uncentered_max(&d, 0, &c), 1.0);
    close(uncentered_max(&d, 3, &c), 0.25);

    close(dyadic_max(&d, 0, &c), 0.5);
    assert_eq!(dyadic_max(&d, 1, &c), 0.0);
    close(dyadic_max(&d, -2, &c), 0.25);

    close(sharp_max(&d, 0, &c), 0.5);
    let flat = seq(0, &[2.0; 6]);
    assert_eq!(median_oscillation(&flat, &iv(1, 4)).1, 0.0);
    for op in Operator::ALL {
        assert_eq!(op.eval(&FiniteSequence::zero(), 4, &c), 0.0);
    }

    let (b, v) = median_oscillation(&seq(0, &[1.0, 2.0, 9.0]), &iv(0, 2));
    assert_eq!(b, 2.0);
    close(v, 8.0 / 3.0);
    assert_eq!(median_oscillation(&seq(0, &[3.0; 3]), &iv(0, 2)).1, 0.0);
    assert_eq!(median_oscillation(&seq(0, &[0.0, 4.0]), &iv(0, 1)).1, 2.0);

    close(bmo_norm(&d, &c), 0.5);
    assert_eq!(bmo_norm(&FiniteSequence::zero(), &c), 0.0);
    close(bmo_norm(&d.scaled(2.0).unwrap(), &c), 1.0);
    for op in Operator::ALL {
        for m in -5..=5 {
            close(op.eval(&d.scaled(2.0).unwrap(), m, &c), 2.0 * op.eval(&d, m, &c));
        }
    }
}

#[test]
fn decompositions() {
    let spike = seq(1, &[4.0]);
    let r = cz_decompose(&spike, &CZParams::new(1.0, 0.0)).unwrap();
    let recs = r.records();
    assert_eq!(recs.len(), 1);
    let x = &recs[0];
    assert_eq!((x.lo, x.hi, x.avg), (1, 2, 2.0));
    assert_eq!((x.parent_lo, x.parent_hi, x.parent_avg), (1, 4, 1.0));

    let r = cz_decompose(&spike, &CZParams::new(1.0, 0.5)).unwrap();
    let recs = r.records();
    assert_eq!(recs.len(), 1);
    assert_eq!((recs[0].lo, recs[0].hi), (1, 8));
    close(recs[0].avg, 2f64.sqrt());
    close(recs[0].parent_avg, 1.0);
    assert_eq!((recs[0].parent_lo, recs[0].parent_hi), (1, 16));

    assert!(cz_decompose(&spike, &CZParams::new(5.0, 0.0)).unwrap().selected.is_empty());
    assert!(cz_decompose(&spike, &CZParams::new(0.0, 0.0)).is_err());

    let shared = CZParams::new(1.0, 0.0);
    assert!(cz_nesting_check(&spike, 1.5, 0.5, &shared).unwrap());
    assert!(cz_nesting_check(&FiniteSequence::zero(), 2.0, 1.0, &shared).unwrap());
    assert!(cz_nesting_check(&spike, 0.5, 1.5, &shared).is_err());
}

#[test]
fn superlevel_sets_and_sums() {
    let c = OperatorConfig::default();
    let d = delta();
    assert_eq!(superlevel_count(Operator::Centered, &d, 0.25, &c).unwrap(), 3);
    assert_eq!(superlevel_count(Operator::Dyadic, &d, 0.125, &c).unwrap(), 4);
    for op in Operator::ALL {
        assert_eq!(superlevel_count(op, &FiniteSequence::zero(), 0.3, &c).unwrap(), 0);
        assert!(matches!(superlevel_count(op, &d, 0.0, &c), Err(Error::Domain(_))));
        let s = lp_power_certified(op, &FiniteSequence::zero(), 2.0, 1e-6, &c).unwrap();
        assert_eq!((s.value, s.tail_bound), (0.0, 0.0));
        assert!(matches!(lp_power_certified(op, &d, 1.0, 1e-6, &c), Err(Error::Domain(_))));
    }
}

#[test]
fn harness() {
    let cfg = VerifyConfig::default();
    let zero = Corpus::new("zero", vec![FiniteSequence::zero()]);
    let r = run_check("good_lambda", &zero, &cfg).unwrap();
    assert!(r.pass && r.violations.is_empty());
    assert!(matches!(run_check("no_such_check", &zero, &cfg), Err(Error::Usage(_))));

    let one = Corpus::new("delta", vec![delta()]);
    let r = run_check("sandwich", &one, &cfg).unwrap();
    assert!(r.pass);
    assert_eq!(r.extremal_ratio, 3.0);
}

#[test]
fn generators() {
    for seed in [0, 7, u64::MAX] {
        assert_eq!(generate(&GeneratorSpec::new(Kind::Delta, 1, 1.0, seed)).unwrap(), delta());
    }
    assert_eq!(
        generate(&GeneratorSpec::new(Kind::Block, 4, 2.0, 3)).unwrap(),
        seq(0, &[2.0; 4])
    );
    let spec = GeneratorSpec {
        density: 0.125,
        ..GeneratorSpec::new(Kind::RandomSparse, 64, 1.0, 42)
    };
    let a = generate(&spec).unwrap();
    let nonzero: Vec<(i64, f64)> = a.iter().filter(|(_, v)| *v != 0.0).collect();
    assert_eq!(
        nonzero,
        [
            (0, 0.2285003662109375),
            (19, 0.86785888671875),
            (35, 0.6638641357421875),
            (51, 0.6373291015625),
            (60, 0.041229248046875),
        ]
    );
    assert!(matches!(
        generate(&GeneratorSpec::new(Kind::Block, 0, 1.0, 1)),
        Err(Error::Usage(_))
    ));
}
