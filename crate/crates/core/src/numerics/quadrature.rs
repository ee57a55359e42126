use serde::{Deserialize, Serialize};

use crate::error::{domain, CfarError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Upper bound on the number of subintervals kept by the adaptive scheme.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-14,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0) || !(self.absolute_tolerance > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(CfarError::NonFinite {
            context: "quadrature integrand",
            value: y,
        })
    }
}

/// One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic.
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Ok(Segment { a, b, value, error })
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate_interval<F>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    settings.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(domain(format!("invalid integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 1,
        });
    }
    let mut segments = vec![gauss_kronrod(&f, a, b)?];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tolerance = settings
            .absolute_tolerance
            .max(settings.relative_tolerance * value.abs());
        if error <= tolerance {
            return Ok(Integral {
                value,
                error,
                subdivisions: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        let exhausted = segments.len() >= settings.max_subdivisions;
        let too_narrow = mid <= seg.a || mid >= seg.b;
        if exhausted || too_narrow {
            return Err(CfarError::Convergence {
                estimate: value,
                error,
                subdivisions: segments.len(),
            });
        }
        segments[worst] = gauss_kronrod(&f, seg.a, mid)?;
        segments.push(gauss_kronrod(&f, mid, seg.b)?);
    }
}

/// `int_lower^inf f(x) dx` through the map `x = lower + scale * u / (1 - u)`.
///
/// `scale` is the length over which `f` varies; the integrand mass near
/// `lower + scale` lands in the middle of the unit interval.
pub fn integrate_tail<F>(
    f: F,
    lower: f64,
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(domain(format!("tail scale must be positive, got {scale}")));
    }
    if !lower.is_finite() {
        return Err(domain(format!(
            "tail lower limit must be finite, got {lower}"
        )));
    }
    let mapped = |u: f64| {
        let v = 1.0 - u;
        let x = lower + scale * u / v;
        let y = f(x);
        // f decays to 0 at infinity; the jacobian must not turn 0 into NaN.
        if y == 0.0 {
            0.0
        } else {
            y * scale / (v * v)
        }
    };
    integrate_interval(mapped, 0.0, 1.0, settings)
}

/// `int_0^inf f(x) dx` with the map `x = scale * u / (1 - u)`.
pub fn integrate_semi_infinite_scaled<F>(
    f: F,
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    integrate_tail(f, 0.0, scale, settings)
}

/// `int_0^inf f(x) dx` with the map `x = u / (1 - u)`.
pub fn integrate_semi_infinite<F>(f: F, settings: &QuadratureSettings) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    integrate_semi_infinite_scaled(f, 1.0, settings)
}
