//! Special functions: Gamma, the modified Bessel function `K1`, Lah numbers
//! and the finite exponential-power series for `K1`.
//!
//! The truncated series is
//!
//! ```text
//! K_nu(bx) ~ exp(-bx) * sum_{n=0}^{M} sum_{i=0}^{n} Lambda(nu, n, i) (bx)^(i - nu)
//! ```
//!
//! with `Lambda(nu, n, i) = (-1)^i sqrt(pi) G(2nu) G(n - nu + 1/2) L(n, i)
//! / (2^(nu - i) G(1/2 - nu) G(n + nu + 1/2) n!)` and `L(n, i)` the Lah
//! numbers. For `n >= 1` only `i >= 1` contributes; the `n = i = 0` term is
//! `(bx)^-nu` times `sqrt(pi) G(2nu) / (2^nu G(nu + 1/2))`, which is 1 for
//! `nu = 1`.

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos sum and `t = x + g - 1/2` for `x >= 1/2` (argument already shifted by one).
fn lanczos_parts<T: Real>(x: T) -> (T, T) {
    let xm1 = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(*c) / (xm1 + T::from_count(k as u64));
    }
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    (acc, t)
}

/// Gamma function. Uses the reflection formula below 1/2; returns NaN at the
/// poles `0, -1, -2, ...`.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        if x == x.floor() {
            return T::nan();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let (acc, t) = lanczos_parts(x);
    let xm1 = x - T::one();
    (T::TAU().sqrt()) * acc * ((xm1 + T::lit(0.5)) * t.ln() - t).exp()
}

/// `ln |Gamma(x)|` together with the sign of `Gamma(x)`.
pub fn ln_gamma<T: Real>(x: T) -> (T, T) {
    if x < T::lit(0.5) {
        if x == x.floor() {
            return (T::infinity(), T::one());
        }
        let pi = T::PI();
        let s = (pi * x).sin();
        let (lg, sg) = ln_gamma(T::one() - x);
        let sign = if s < T::zero() { -sg } else { sg };
        return (pi.ln() - s.abs().ln() - lg, sign);
    }
    let (acc, t) = lanczos_parts(x);
    let xm1 = x - T::one();
    (
        T::lit(0.5) * T::TAU().ln() + acc.ln() + (xm1 + T::lit(0.5)) * t.ln() - t,
        T::one(),
    )
}

/// Truncation order of the `K1` series. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesOrder(u32);

impl SeriesOrder {
    pub const DEFAULT: SeriesOrder = SeriesOrder(40);
    /// Single-term order giving the closed-form approximation.
    pub const FIRST_TERM: SeriesOrder = SeriesOrder(1);

    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("series order must be at least 1".into()));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for SeriesOrder {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Binomial coefficient with overflow detection.
fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for j in 0..k {
        // c * (n - j) is divisible by (j + 1) at every step
        c = c.checked_mul(u128::from(n - j))? / u128::from(j + 1);
    }
    Some(c)
}

/// Lah number `L(n, i) = C(n-1, i-1) n! / i!`, exact.
pub fn lah(n: u64, i: u64) -> Result<u128> {
    if i < 1 || i > n {
        return Err(Error::Domain(format!(
            "Lah number needs 1 <= i <= n, got n = {n}, i = {i}"
        )));
    }
    let mut acc =
        binomial_u128(n - 1, i - 1).ok_or_else(|| Error::Overflow(format!("L({n}, {i})")))?;
    for j in (i + 1)..=n {
        acc = acc
            .checked_mul(u128::from(j))
            .ok_or_else(|| Error::Overflow(format!("L({n}, {i})")))?;
    }
    Ok(acc)
}

/// `C(n-1, i-1) * 2^i / i!` as a running product, which stays in range for
/// both `f32` and `f64` where the factorials alone would not.
fn binom_pow2_over_factorial<T: Real>(n: u64, i: u64) -> T {
    let mut acc = T::one();
    for j in 1..=i {
        let jt = T::from_count(j);
        acc = acc * T::lit(2.0) / jt;
        if j < i {
            acc = acc * T::from_count(n - j) / jt;
        }
    }
    acc
}

/// `Gamma(n - nu + 1/2) / (Gamma(1/2 - nu) Gamma(n + nu + 1/2))`, written as
/// a Pochhammer product over `Gamma(nu + 1/2)` so it is finite at the
/// Gamma poles and never overflows.
fn gamma_ratio<T: Real>(nu: T, n: u64) -> T {
    let half = T::lit(0.5);
    let mut prod = T::one() / gamma(nu + half);
    for k in 0..n {
        let kt = T::from_count(k);
        prod = prod * (kt + half - nu) / (kt + half + nu);
    }
    prod
}

fn check_lambda_args<T: Real>(nu: T, n: u64, i: u64) -> Result<()> {
    if !(nu > T::zero()) {
        return Err(Error::Domain(format!(
            "order nu must be positive, got {nu}"
        )));
    }
    if i < 1 || i > n {
        return Err(Error::Domain(format!(
            "series coefficient needs 1 <= i <= n, got n = {n}, i = {i}"
        )));
    }
    Ok(())
}

/// Series coefficient `Lambda(nu, n, i)` for `1 <= i <= n`.
pub fn lambda_coeff<T: Real>(nu: T, n: u64, i: u64) -> Result<T> {
    check_lambda_args(nu, n, i)?;
    let sign = if i.is_multiple_of(2) { T::one() } else { -T::one() };
    let front = T::PI().sqrt() * gamma(nu + nu) * gamma_ratio(nu, n);
    Ok(sign * front * binom_pow2_over_factorial::<T>(n, i) * T::lit(2.0).powf(-nu))
}

/// `Lambda(nu, n, i) * i!`, the combination that appears when the series is
/// integrated against `v^(i-1) exp(-a v)`.
pub(crate) fn lambda_times_factorial<T: Real>(nu: T, n: u64, i: u64) -> Result<T> {
    check_lambda_args(nu, n, i)?;
    let sign = if i.is_multiple_of(2) { T::one() } else { -T::one() };
    let front = T::PI().sqrt() * gamma(nu + nu) * gamma_ratio(nu, n);
    // C(n-1, i-1) * 2^i
    let mut binom = T::one();
    for j in 1..i {
        binom = binom * T::from_count(n - j) / T::from_count(j);
    }
    Ok(sign * front * binom * T::lit(2.0).powi(i as i32) * T::lit(2.0).powf(-nu))
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("K1 needs x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    if x <= T::lit(2.0) {
        Ok(k1_small(x))
    } else {
        Ok(k1_large(x))
    }
}

/// `x K1(x)`, extended continuously to 1 at `x = 0`.
pub fn x_bessel_k1<T: Real>(x: T) -> Result<T> {
    if x < T::zero() || x.is_nan() {
        return Err(Error::Domain(format!("x K1(x) needs x >= 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    Ok(x * bessel_k1(x)?)
}

/// Ascending series around the origin.
fn k1_small<T: Real>(x: T) -> T {
    let eps = T::epsilon();
    let y = x * x / T::lit(4.0);
    let mut term = T::one(); // (x^2/4)^k / (k! (k+1)!)
    let mut psi_k1 = -T::euler_gamma(); // psi(k + 1)
    let mut psi_k2 = T::one() - T::euler_gamma(); // psi(k + 2)
    let mut i1_sum = T::zero();
    let mut k1_sum = T::zero();
    let mut k = 0u64;
    loop {
        i1_sum = i1_sum + term;
        let contrib = (psi_k1 + psi_k2) * term;
        k1_sum = k1_sum + contrib;
        if term < eps * i1_sum && contrib.abs() < eps * k1_sum.abs() {
            break;
        }
        k += 1;
        let kt = T::from_count(k);
        term = term * y / (kt * (kt + T::one()));
        psi_k1 = psi_k1 + T::one() / kt;
        psi_k2 = psi_k2 + T::one() / (kt + T::one());
        if k > 500 {
            break;
        }
    }
    let i1 = x / T::lit(2.0) * i1_sum;
    T::one() / x + (x / T::lit(2.0)).ln() * i1 - x / T::lit(4.0) * k1_sum
}

/// Steed's continued fraction for `x > 2`, yielding `K0` and `K1` together.
fn k1_large<T: Real>(x: T) -> T {
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let a1 = T::lit(0.25);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 1..10_000u64 {
        let it = T::from_count(i);
        a = a - two * it;
        c = -a * c / (it + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < eps {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    k0 * (x + T::lit(0.5) - h) / x
}

fn check_series_arg<T: Real>(beta: T, x: T) -> Result<T> {
    let bx = beta * x;
    if !(bx > T::zero()) || !bx.is_finite() {
        return Err(Error::Domain(format!(
            "series argument beta*x must be positive, got {bx}"
        )));
    }
    Ok(bx)
}

/// The `n >= 1` part of the `K1` series, `exp(-bx) sum_{n=1}^{M} sum_{i=1}^{n}
/// Lambda(1, n, i) (bx)^(i-1)`. At `M = 1` this is `(2/3) exp(-bx)`.
pub fn k1_series_tail<T: Real>(beta: T, x: T, order: SeriesOrder) -> Result<T> {
    let bx = check_series_arg(beta, x)?;
    let mut total = T::zero();
    for n in 1..=u64::from(order.get()) {
        let mut row = T::zero();
        let mut pow = T::one();
        for i in 1..=n {
            row = row + lambda_coeff(T::one(), n, i)? * pow;
            pow = pow * bx;
        }
        total = total + row;
    }
    Ok((-bx).exp() * total)
}

/// Truncated exponential-power series for `K1(bx)` including the leading
/// `exp(-bx) / (bx)` term.
pub fn k1_series<T: Real>(beta: T, x: T, order: SeriesOrder) -> Result<T> {
    let bx = check_series_arg(beta, x)?;
    Ok((-bx).exp() / bx + k1_series_tail(beta, x, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        let cases: [(f64, f64); 7] = [
            (-0.5, -3.544_907_701_811_032_054_596),
            (0.5, 1.772_453_850_905_516_027_298),
            (1.5, 0.886_226_925_452_758_013_649_1),
            (3.3, 2.683_437_381_955_768_793_596),
            (10.5, 1_133_278.388_948_785_567_335),
            (25.25, 1.382_154_913_837_396_908_636e24),
            (60.0, 1.386_831_185_456_898_357_379e80),
        ];
        for (x, want) in cases {
            assert_relative_eq!(gamma(x), want, max_relative = 1e-12);
            let (lg, sign) = ln_gamma(x);
            assert_relative_eq!(sign * lg.exp(), want, max_relative = 1e-11);
        }
        for k in 1..20u32 {
            let fact: f64 = (1..k).map(f64::from).product();
            assert_relative_eq!(gamma(f64::from(k)), fact, max_relative = 1e-13);
        }
        assert!(gamma(-1.0f64).is_nan());
    }

    #[test]
    fn lah_small_values() {
        assert_eq!(lah(3, 3).unwrap(), 1);
        assert_eq!(lah(3, 1).unwrap(), 6);
        assert_eq!(lah(4, 2).unwrap(), 36);
        assert_eq!(lah(1, 1).unwrap(), 1);
    }

    #[test]
    fn lah_domain_and_overflow() {
        assert!(matches!(lah(3, 0), Err(Error::Domain(_))));
        assert!(matches!(lah(3, 4), Err(Error::Domain(_))));
        // 34! fits in u128, 35! does not
        assert!(lah(34, 1).is_ok());
        assert!(matches!(lah(35, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn lah_recurrence() {
        // L(n+1, i) = (n + i) L(n, i) + L(n, i-1)
        for n in 1..10u64 {
            for i in 1..=(n + 1) {
                let lhs = lah(n + 1, i).unwrap();
                let a = if i <= n { lah(n, i).unwrap() } else { 0 };
                let b = if i >= 2 { lah(n, i - 1).unwrap() } else { 0 };
                assert_eq!(lhs, u128::from(n + i) * a + b, "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn lambda_hand_values() {
        // Gamma(2) = 1, Gamma(1/2) = sqrt(pi), Gamma(-1/2) = -2 sqrt(pi), Gamma(5/2) = 3 sqrt(pi) / 4
        assert_relative_eq!(
            lambda_coeff(1.0, 1, 1).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-14
        );
        // Gamma(3/2) = sqrt(pi) / 2, Gamma(7/2) = 15 sqrt(pi) / 8, L(2, 1) = 2
        assert_relative_eq!(
            lambda_coeff(1.0, 2, 1).unwrap(),
            2.0 / 15.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lambda_coeff(1.0, 2, 2).unwrap(),
            -2.0 / 15.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn lambda_high_precision_values() {
        let cases = [
            (1.0, 5, 3, 0.080_808_080_808_080_808_081),
            (1.0, 10, 7, 0.005_346_700_083_542_188_805_3),
            (1.0, 40, 20, -4.642_255_345_378_230_058_1e-6),
            (0.7, 4, 2, -0.143_774_802_892_632_171_11),
            (2.3, 6, 6, 0.000_039_544_138_635_857_625_272),
        ];
        for (nu, n, i, want) in cases {
            assert_relative_eq!(lambda_coeff(nu, n, i).unwrap(), want, max_relative = 1e-11);
        }
    }

    #[test]
    fn lambda_sign_alternates() {
        for n in 1..30u64 {
            for i in 1..=n {
                let v: f64 = lambda_coeff(1.0, n, i).unwrap();
                if i > 1 {
                    let prev: f64 = lambda_coeff(1.0, n, i - 1).unwrap();
                    assert!(v * prev < 0.0, "n = {n}, i = {i}");
                }
            }
        }
    }

    #[test]
    fn lambda_factorial_combination() {
        for n in 1..15u64 {
            for i in 1..=n {
                let fact: f64 = (1..=i).map(|j| j as f64).product();
                assert_relative_eq!(
                    lambda_times_factorial(1.0, n, i).unwrap(),
                    lambda_coeff(1.0, n, i).unwrap() * fact,
                    max_relative = 1e-12
                );
            }
        }
        assert!(lambda_coeff(1.0, 2, 3).is_err());
        assert!(lambda_coeff(0.0, 2, 1).is_err());
    }

    #[test]
    fn k1_reference_values() {
        let cases = [
            (1e-6, 999_999.999_992_784_278_963_2),
            (0.01, 99.973_894_118_296_247_643_04),
            (0.5, 1.656_441_120_003_300_893_696),
            (1.0, 0.601_907_230_197_234_574_737_5),
            (2.0, 0.139_865_881_816_522_427_284_6),
            (2.000_000_1, 0.139_865_863_433_842_395_233_9),
            (3.7, 0.017_628_035_102_223_266_688),
            (10.0, 1.864_877_345_382_558_459_682e-5),
            (50.0, 3.444_102_226_717_555_612_592e-23),
        ];
        for (x, want) in cases {
            assert_relative_eq!(bessel_k1(x).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn k1_small_argument_limit() {
        let x: f64 = 1e-6;
        assert!((x * bessel_k1(x).unwrap() - 1.0).abs() < 1e-5);
        assert_eq!(x_bessel_k1(0.0f64).unwrap(), 1.0);
    }

    #[test]
    fn k1_domain() {
        assert!(bessel_k1(0.0f64).is_err());
        assert!(bessel_k1(-1.0f64).is_err());
        assert!(x_bessel_k1(-1.0f64).is_err());
    }

    #[test]
    fn k1_decreasing() {
        let mut prev = f64::INFINITY;
        let mut x = 1e-4;
        while x < 60.0 {
            let v = bessel_k1(x).unwrap();
            assert!(v < prev, "x = {x}");
            prev = v;
            x *= 1.07;
        }
    }

    #[test]
    fn k1_f32() {
        assert_relative_eq!(bessel_k1(1.0f32).unwrap(), 0.601_907_2, max_relative = 1e-5);
        assert_relative_eq!(
            bessel_k1(10.0f32).unwrap(),
            1.864_877e-5,
            max_relative = 1e-5
        );
    }

    #[test]
    fn series_first_term() {
        let order = SeriesOrder::FIRST_TERM;
        for x in [0.3f64, 1.0, 4.0] {
            assert_relative_eq!(
                k1_series_tail(1.0, x, order).unwrap(),
                2.0 / 3.0 * (-x).exp(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                k1_series(1.0, x, order).unwrap(),
                (-x).exp() * (1.0 / x + 2.0 / 3.0),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn series_converges_on_unit_band() {
        let order = SeriesOrder::DEFAULT;
        for k in 0..=45 {
            let x = 0.5 + 0.1 * f64::from(k);
            let exact = bessel_k1(x).unwrap();
            let approx = k1_series(1.0, x, order).unwrap();
            assert!(((approx - exact) / exact).abs() <= 1e-3, "x = {x}");
        }
        // beta only enters through the product
        assert_relative_eq!(
            k1_series(2.0, 0.75, order).unwrap(),
            k1_series(1.0, 1.5, order).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn series_order_validation() {
        assert!(SeriesOrder::new(0).is_err());
        assert_eq!(SeriesOrder::new(7).unwrap().get(), 7);
        assert_eq!(SeriesOrder::default().get(), 40);
        assert!(k1_series(1.0, 0.0, SeriesOrder::DEFAULT).is_err());
    }
}
