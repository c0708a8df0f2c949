//! Adaptive Gauss–Kronrod quadrature (7/15-point pair) for vector-valued
//! integrands, plus a plain composite trapezoid rule.

use alloc::vec::Vec;

use crate::{Error, Result};

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
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad<const N: usize> {
    pub value: [f64; N],
    /// Sum of per-panel |Kronrod − Gauss| estimates (max over components).
    pub error: f64,
    pub panels: usize,
}

fn gk15<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> ([f64; N], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let fc = f(c);
    for i in 0..N {
        k[i] = WGK[7] * fc[i];
        g[i] = WG[3] * fc[i];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for i in 0..N {
            let s = f1[i] + f2[i];
            k[i] += WGK[j] * s;
            if j % 2 == 1 {
                g[i] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for i in 0..N {
        k[i] *= h;
        g[i] *= h;
        err = err.max((k[i] - g[i]).abs());
    }
    (k, err)
}

/// Integrate `f` over `[a, b]` until the summed error estimate drops below
/// `max(atol, rtol·|I|)` (with `|I|` the largest component magnitude).
///
/// `breaks` are optional interior points where the integrand changes scale.
pub fn integrate<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Quad<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    const MAX_PANELS: usize = 20_000;
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    for &p in breaks {
        if (p - a) * (b - p) > 0.0 {
            pts.push(p);
        }
    }
    pts.push(b);
    if a > b {
        pts.sort_by(|x, y| y.partial_cmp(x).unwrap());
    } else {
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    }

    // (a, b, value, err)
    let mut panels: Vec<(f64, f64, [f64; N], f64)> = Vec::new();
    for w in pts.windows(2) {
        let (v, e) = gk15(&mut f, w[0], w[1]);
        panels.push((w[0], w[1], v, e));
    }
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        let mut worst = 0;
        for (j, p) in panels.iter().enumerate() {
            for i in 0..N {
                total[i] += p.2[i];
            }
            err += p.3;
            if p.3 > panels[worst].3 {
                worst = j;
            }
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= atol.max(rtol * scale) {
            return Ok(Quad { value: total, error: err, panels: panels.len() });
        }
        let (pa, pb, _, _) = panels[worst];
        let mid = 0.5 * (pa + pb);
        if panels.len() >= MAX_PANELS || mid == pa || mid == pb {
            return Err(Error::NonConvergence { what: "adaptive quadrature", spread: err });
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels[worst] = (pa, mid, v1, e1);
        panels.push((mid, pb, v2, e2));
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate1<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<(f64, f64)> {
    let q = integrate(|x| [f(x)], a, b, breaks, rtol, atol)?;
    Ok((q.value[0], q.error))
}

/// Composite trapezoid rule on equally spaced samples.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = samples[1..n - 1].iter().sum();
            h * (inner + 0.5 * (samples[0] + samples[n - 1]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let (v, _) = integrate1(|x| libm::exp(-x * x), -8.0, 8.0, &[], 1e-14, 0.0).unwrap();
        assert!((v - core::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn narrow_peak_with_breakpoint() {
        let s = 1e-4;
        let (v, _) = integrate1(|x| libm::exp(-x * x / (s * s)), 0.0, 1.0, &[10.0 * s], 1e-13, 0.0)
            .unwrap();
        let want = 0.5 * core::f64::consts::PI.sqrt() * s;
        assert!(((v - want) / want).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let (v, _) = integrate1(|x| x * x, 1.0, 0.0, &[], 1e-14, 0.0).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let s: Vec<f64> = (0..11).map(|i| 2.0 * i as f64 * 0.1 + 1.0).collect();
        assert!((trapezoid(&s, 0.1) - 2.0).abs() < 1e-14);
    }
}
