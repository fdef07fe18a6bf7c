//! Annuity helpers shared by the cost modules.

/// Capital recovery factor `r / (1 - (1 + r)^-n)`; `1/n` at a zero rate.
pub fn crf(rate: f64, years: u32) -> f64 {
    if rate == 0.0 {
        return 1.0 / years as f64;
    }
    rate / (1.0 - (1.0 + rate).powi(-(years as i32)))
}

/// Present value of one dollar per year for `years` years, paid at year end.
pub fn annuity_factor(rate: f64, years: u32) -> f64 {
    1.0 / crf(rate, years)
}

/// Present value of `flows[t]` paid at the end of year `t + 1`.
pub fn npv(rate: f64, flows: impl IntoIterator<Item = f64>) -> f64 {
    flows
        .into_iter()
        .enumerate()
        .map(|(t, f)| f / (1.0 + rate).powi(t as i32 + 1))
        .sum()
}

/// Root of a monotone function on `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < 1e-15 * (1.0 + mid.abs()) {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crf_matches_summed_annuity() {
        let direct: f64 = (1..=30).map(|t| 1.03f64.powi(-t)).sum();
        assert!((crf(0.03, 30) - 1.0 / direct).abs() < 1e-14);
        assert!((crf(0.03, 30) - 0.05102).abs() < 1e-5);
    }

    #[test]
    fn crf_tends_to_rate_for_long_lives() {
        assert!((crf(0.4, 200) - 0.4).abs() < 1e-12);
        assert_eq!(crf(0.0, 4), 0.25);
    }

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(0.0, 2.0, |x| x * x - 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        assert!(bisect(0.0, 1.0, |x| x + 1.0).is_none());
    }
}
