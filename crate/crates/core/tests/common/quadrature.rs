//! Brute-force marginal likelihood under a Gaussian-gamma prior, by nested
//! adaptive Gauss–Kronrod quadrature over `(μ, λ)`.
//!
//! Nothing here calls the library's closed forms or its gamma function, so it
//! serves as an independent oracle.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let s = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

/// Adaptive bisection until each piece's Kronrod–Gauss difference meets the
/// tolerance share of its width.
pub fn integrate(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn go(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, e) = gk15(f, a, b);
        if e <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        go(f, a, m, 0.5 * tol, depth - 1) + go(f, m, b, 0.5 * tol, depth - 1)
    }
    go(f, a, b, tol, 40)
}

/// `ln Γ(a)` for `a` a positive multiple of ½, by the recurrence from
/// `Γ(½) = √π` and `Γ(1) = 1`.
pub fn ln_gamma_half_integer(a: f64) -> f64 {
    let twice = (2.0 * a).round();
    assert!(
        twice >= 1.0 && (2.0 * a - twice).abs() < 1e-12,
        "{a} is not a multiple of 1/2"
    );
    let mut x = if (twice as u64).is_multiple_of(2) {
        1.0
    } else {
        0.5
    };
    let mut acc = if x == 0.5 { 0.5 * PI.ln() } else { 0.0 };
    while x < a - 0.25 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

#[derive(Debug, Clone, Copy)]
pub struct NormalGamma {
    pub mu: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NormalGamma {
    fn ln_density(&self, mu: f64, lambda: f64) -> f64 {
        self.alpha * self.beta.ln() - ln_gamma_half_integer(self.alpha)
            + 0.5 * (self.kappa.ln() - (2.0 * PI).ln())
            + (self.alpha - 0.5) * lambda.ln()
            - self.beta * lambda
            - 0.5 * self.kappa * lambda * (mu - self.mu).powi(2)
    }
}

fn ln_likelihood(data: &[f64], mu: f64, lambda: f64) -> f64 {
    data.iter()
        .map(|x| 0.5 * (lambda.ln() - (2.0 * PI).ln()) - 0.5 * lambda * (x - mu).powi(2))
        .sum()
}

/// `ln ∫∫ Π N(x | μ, 1/λ) · NG(μ, λ) dμ dλ`.
pub fn ln_marginal(prior: NormalGamma, data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let joint =
        |mu: f64, lambda: f64| ln_likelihood(data, mu, lambda) + prior.ln_density(mu, lambda);

    // For fixed λ the integrand is Gaussian in μ around this point with
    // precision (κ + n)λ.
    let centre = (prior.kappa * prior.mu + data.iter().sum::<f64>()) / (prior.kappa + n);

    // β only grows with data, so the λ mass sits below this bound.
    let shape = prior.alpha + 0.5 * n;
    let lambda_hi = (shape + 12.0 * shape.sqrt() + 60.0) / prior.beta;

    // Rescale by the peak so nothing under- or overflows.
    let shift = (1..=400)
        .map(|k| lambda_hi * (k as f64 / 400.0).powi(3))
        .map(|l| joint(centre, l))
        .fold(f64::NEG_INFINITY, f64::max);

    let mut outer = |lambda: f64| {
        if lambda <= 0.0 {
            return 0.0;
        }
        let half_width = 12.0 / ((prior.kappa + n) * lambda).sqrt();
        let mut inner = |mu: f64| (joint(mu, lambda) - shift).exp();
        integrate(&mut inner, centre - half_width, centre + half_width, 1e-13)
    };
    integrate(&mut outer, 0.0, lambda_hi, 1e-12).ln() + shift
}
