use crate::error::EvalError;
use crate::util::mean;

/// Upper tail of the chi-squared distribution with one degree of freedom.
pub fn chi2_sf_1df(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    libm::erfc(libm::sqrt(x / 2.0))
}

/// Continuity-corrected McNemar statistic and p-value from discordant counts.
pub fn mcnemar_counts(b: usize, c: usize) -> (f64, f64) {
    if b + c == 0 {
        return (0.0, 1.0);
    }
    let diff = (b as f64 - c as f64).abs() - 1.0;
    let stat = diff * diff / (b + c) as f64;
    (stat, chi2_sf_1df(stat))
}

/// McNemar test on paired predictions: `b` counts rows only A gets right,
/// `c` rows only B gets right.
pub fn mcnemar(preds_a: &[usize], preds_b: &[usize], golds: &[usize]) -> Result<(f64, f64), EvalError> {
    if preds_a.len() != golds.len() {
        return Err(EvalError::Length(preds_a.len(), golds.len()));
    }
    if preds_b.len() != golds.len() {
        return Err(EvalError::Length(preds_b.len(), golds.len()));
    }
    let mut b = 0;
    let mut c = 0;
    for ((&pa, &pb), &g) in preds_a.iter().zip(preds_b).zip(golds) {
        match (pa == g, pb == g) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok(mcnemar_counts(b, c))
}

/// Regularised incomplete beta I_x(a, b), by Lentz's continued fraction.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b)
        + a * libm::log(x)
        + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    // The fraction converges fast only on this side of the mean.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_fraction(1.0 - x, b, a) / b
    }
}

fn beta_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut c = 1.0;
    let mut d = 1.0 - (a + b) * x / (a + 1.0);
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..500 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        for (num, last) in [
            (num, false),
            (-(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0)), true),
        ] {
            d = 1.0 + num * d;
            if d.abs() < TINY {
                d = TINY;
            }
            c = 1.0 + num / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if last && (delta - 1.0).abs() < 1e-15 {
                return h;
            }
        }
    }
    h
}

/// P(T > t) for Student's t with `df` degrees of freedom.
pub fn student_t_sf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
    if t >= 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

fn sample_var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}

/// Welch's two-sided t-test; returns (t, p).
pub fn t_test_two_sided(a: &[f64], b: &[f64]) -> Result<(f64, f64), EvalError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(EvalError::SampleSize);
    }
    let (va, vb) = (sample_var(a), sample_var(b));
    if va == 0.0 && vb == 0.0 {
        return Err(EvalError::ZeroVariance);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    let t = (mean(a) - mean(b)) / libm::sqrt(se2);
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = (2.0 * student_t_sf(t.abs(), df)).min(1.0);
    Ok((t, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mcnemar_ten_two() {
        let (s, p) = mcnemar_counts(10, 2);
        assert!((s - 49.0 / 12.0).abs() < 1e-12);
        assert!((p - 0.0433).abs() < 5e-4, "{p}");
        assert_eq!(mcnemar_counts(0, 0), (0.0, 1.0));
    }

    #[test]
    fn mcnemar_on_predictions() {
        let golds = [1, 1, 1, 0];
        assert_eq!(mcnemar(&golds, &golds, &golds).unwrap(), (0.0, 1.0));
        let (s, p) = mcnemar(&[1, 1, 0, 0], &[0, 0, 1, 0], &golds).unwrap();
        assert!(s <= 1.0 / 3.0 + 1e-12 && p > 0.5);
    }

    #[test]
    fn chi2_tail_known_points() {
        assert!((chi2_sf_1df(3.841_458_820_694_124) - 0.05).abs() < 1e-9);
        assert!((chi2_sf_1df(6.634_896_601_021_214) - 0.01).abs() < 1e-9);
    }

    #[test]
    fn beta_special_cases() {
        // I_x(1, 1) = x, I_x(a, 1) = x^a.
        for x in [0.1, 0.5, 0.93] {
            assert!((incomplete_beta(x, 1.0, 1.0) - x).abs() < 1e-12);
            assert!((incomplete_beta(x, 3.0, 1.0) - x * x * x).abs() < 1e-12);
        }
        // t with 1 df is Cauchy.
        for t in [0.3f64, 1.0, 4.0] {
            let cauchy = 0.5 - libm::atan(t) / core::f64::consts::PI;
            assert!((student_t_sf(t, 1.0) - cauchy).abs() < 1e-12);
        }
    }

    #[test]
    fn t_test_examples() {
        let a = [1.0, 2.0, 3.5];
        let (t, p) = t_test_two_sided(&a, &a).unwrap();
        assert_eq!(t, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        let zeros = [0.0, 1e-6, 0.0];
        let ones = [1.0, 1.0, 1.0 + 1e-6];
        assert!(t_test_two_sided(&zeros, &ones).unwrap().1 < 1e-6);
        assert_eq!(t_test_two_sided(&[0.0, 0.0], &[1.0, 1.0]).unwrap_err(), EvalError::ZeroVariance);
        assert_eq!(t_test_two_sided(&[0.0], &[1.0, 2.0]).unwrap_err(), EvalError::SampleSize);
    }

    proptest! {
        #[test]
        fn swapping_samples_flips_t(
            a in proptest::collection::vec(-5.0f64..5.0, 2..12),
            b in proptest::collection::vec(-5.0f64..5.0, 2..12),
        ) {
            prop_assume!(sample_var(&a) > 1e-9 || sample_var(&b) > 1e-9);
            let (t1, p1) = t_test_two_sided(&a, &b).unwrap();
            let (t2, p2) = t_test_two_sided(&b, &a).unwrap();
            prop_assert!((t1 + t2).abs() < 1e-9);
            prop_assert!((p1 - p2).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&p1));
        }

        #[test]
        fn beta_symmetry(x in 0.001f64..0.999, a in 0.2f64..20.0, b in 0.2f64..20.0) {
            let lhs = incomplete_beta(x, a, b);
            let rhs = 1.0 - incomplete_beta(1.0 - x, b, a);
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
