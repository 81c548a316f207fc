#![allow(dead_code)]

//! Test-only oracles, independent of the closed forms under test.

/// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]` to relative
/// tolerance `rtol`, splitting intervals recursively.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (whole, _) = gk15(&f, a, b);
    let scale = whole.abs().max(1e-300);
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 60 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol * 0.5, depth + 1) + rec(f, m, b, tol * 0.5, depth + 1)
    }
    rec(&f, a, b, rtol * scale, 0)
}

/// Integrate over `[a, b]` after splitting at the geometric midpoints, which
/// suits the power-law integrands used here.
pub fn integrate_power(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let pieces = 16;
    let ratio = (b / a).powf(1.0 / pieces as f64);
    let mut lo = a;
    let mut total = 0.0;
    for i in 0..pieces {
        let hi = if i == pieces - 1 { b } else { lo * ratio };
        total += integrate(&f, lo, hi, 1e-14);
        lo = hi;
    }
    total
}

/// Bounded Pareto density written out directly from its definition.
pub fn bp_density(alpha: f64, r: f64, x: f64) -> f64 {
    if x < 1.0 || x > r {
        return 0.0;
    }
    alpha * x.powf(-alpha - 1.0) / (1.0 - r.powf(-alpha))
}

/// `∫_a^b x^k f(x) dx` by quadrature.
pub fn quad_moment(alpha: f64, r: f64, k: f64, a: f64, b: f64) -> f64 {
    integrate_power(|x| x.powf(k) * bp_density(alpha, r, x), a, b)
}

/// PK mean wait assembled by hand.
pub fn pk(rate: f64, m1: f64, m2: f64) -> f64 {
    rate * m2 / (2.0 * (1.0 - rate * m1))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
