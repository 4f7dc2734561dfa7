//! Special functions used by the Gaussian-gamma closed forms.

use std::f64::consts::PI;

use crate::error::ModelError;

/// `ln(2π)`
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `ln(√(2π))`
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation with g = 607/128 and 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];

// ζ(k) for k = 2..=25, used by the Taylor series of ln Γ(1 + z).
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 24] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Width of the windows around the zeros of ln Γ at 1 and 2.
const ROOT_WINDOW: f64 = 0.2;

/// Natural log of the gamma function for `x > 0`.
///
/// Uses the reflection formula below `x = 0.5`, a Taylor series around the
/// zeros at 1 and 2, and the Lanczos series elsewhere.
/// Relative error stays below `1e-12` on `[1e-3, 1e6]`.
pub fn log_gamma(x: f64) -> Result<f64, ModelError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ModelError::Domain {
            what: "log_gamma",
            value: x,
        });
    }
    Ok(ln_gamma_unchecked(x))
}

/// `ln Γ(x)` without the domain check. Callers guarantee `x > 0`.
#[inline]
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if (x - 1.0).abs() < ROOT_WINDOW {
        return ln_gamma_1p(x - 1.0);
    }
    if (x - 2.0).abs() < ROOT_WINDOW {
        let z = x - 2.0;
        return ln_gamma_1p(z) + z.ln_1p();
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return PI.ln() - (PI * x).sin().ln() - lanczos(1.0 - x);
    }
    lanczos(x)
}

// ln Γ(1 + z) = −γz + Σ_{k≥2} ζ(k)(−z)^k / k, for |z| < ROOT_WINDOW.
fn ln_gamma_1p(z: f64) -> f64 {
    let mut acc = 0.0;
    for (i, zeta) in ZETA.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        acc = acc * -z + zeta / k;
    }
    z * (-EULER_GAMMA + z * acc)
}

#[inline]
fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + sum.ln() + (z + 0.5) * t.ln() - t
}

/// `ln Γ(a + ½) − ln Γ(a)` for `a > 0`.
///
/// For large `a` the direct difference loses digits to cancellation, so an
/// asymptotic series takes over once its truncation error is below 1e-16.
pub(crate) fn ln_gamma_half_ratio(a: f64) -> f64 {
    if a < 30.0 {
        return ln_gamma_unchecked(a + 0.5) - ln_gamma_unchecked(a);
    }
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    0.5 * a.ln() - inv / 8.0
        + inv * inv2 * (1.0 / 192.0 + inv2 * (-1.0 / 640.0 + inv2 * (17.0 / 14336.0)))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // Reference values computed with 40-digit arbitrary precision arithmetic.
    const REFERENCE: [(f64, f64); 20] = [
        (0.001, 6.907_178_885_383_853_7),
        (0.01, 4.599_479_878_042_021_7),
        (0.1, 2.252_712_651_734_205_9),
        (0.5, 0.572_364_942_924_700_09),
        (0.999, 0.000_578_038_532_891_380_24),
        (1.0, 0.0),
        (1.001, -0.000_576_393_598_283_306_15),
        (1.5, -0.120_782_237_635_245_22),
        (1.999, -0.000_422_461_800_692_107_28),
        (2.0, 0.0),
        (2.5, 0.284_682_870_472_919_16),
        (3.7, 1.428_072_326_665_388_1),
        (5.0, 3.178_053_830_347_945_6),
        (10.0, 12.801_827_480_081_47),
        (33.3, 82.603_723_581_654_94),
        (100.0, 359.134_205_369_575_4),
        (1234.5, 7_550.550_901_077_895),
        (1e4, 82_099.717_496_442_38),
        (98_765.432_1, 1_037_081.879_316_588_7),
        (1e6, 12_815_504.569_147_612),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, want) in &REFERENCE {
            let got = log_gamma(x).unwrap();
            let err = (got - want).abs();
            assert!(
                err <= 1e-12 * want.abs() || err == 0.0,
                "log_gamma({x}) = {got}, want {want}, rel err {}",
                err / want.abs()
            );
        }
    }

    const WINDOW_EDGES: [(f64, f64); 14] = [
        (0.75, 0.203_280_951_431_295_37),
        (0.800_000_1, 0.152_059_581_898_992_42),
        (0.85, 0.106_595_116_478_117_66),
        (1.1, -0.049_872_441_259_839_76),
        (1.199_999_9, -0.085_374_061_099_319_82),
        (1.25, -0.098_271_836_421_813_16),
        (1.75, -0.084_401_121_020_485_56),
        (1.800_000_1, -0.071_083_844_415_225_12),
        (1.95, -0.020_324_499_149_577_654),
        (2.05, 0.021_937_091_667_171_754),
        (2.199_999_9, 0.096_947_412_361_297_91),
        (2.25, 0.124_871_714_892_396_59),
        (0.4999, 0.572_561_318_604_118_4),
        (0.5001, 0.572_168_616_593_304_6),
    ];

    #[test]
    fn accurate_across_branch_boundaries() {
        for &(x, want) in &WINDOW_EDGES {
            let got = log_gamma(x).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "log_gamma({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn closed_form_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds() {
        let mut x = 0.013;
        while x < 500.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "x = {x}");
            x *= 1.37;
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn half_ratio_matches_reference() {
        let cases = [
            (1.0, -0.120_782_237_635_245_22),
            (1.5, 0.120_782_237_635_245_22),
            (10.0, 1.138_797_739_322_294),
            (1e3, 3.453_752_639_496_276_9),
            (1e4, 4.605_157_685_988_096_6),
            (5e7, 8.863_766_779_196_21),
        ];
        for (a, want) in cases {
            let got = ln_gamma_half_ratio(a);
            assert!((got - want).abs() < 1e-13, "a = {a}: {got} vs {want}");
        }
    }
}
