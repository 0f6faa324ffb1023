//! Independent one-dimensional oracles for the exponential family.
//!
//! For `f₊ = e^{-kl/2}/√(4πk/l)` and its translate by `a` along `z`, the angular
//! integral of `e^{ik·a}` is `4π sin(ka)/(ka)`, which reduces every overlap to a
//! radial integral. These are evaluated with adaptive Simpson quadrature,
//! sharing no code with the library.

#![allow(dead_code)]

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Radial integral on `[0, 80/l]`, split into unit panels of `k l`.
fn radial<F: Fn(f64) -> f64>(f: F, l: f64) -> f64 {
    (0..80)
        .map(|i| adaptive_simpson(&f, i as f64 / l, (i + 1) as f64 / l, 1e-15))
        .sum()
}

/// `⟨f|f_a⟩` under `d³k/k`: `∫ l e^{-kl} sinc(ka) dk`.
pub fn momentum_overlap(a: f64, l: f64) -> f64 {
    radial(|k| l * (-k * l).exp() * sinc(k * a), l)
}

/// `∫ d³k f* f_a`: `∫ l k e^{-kl} sinc(ka) dk`.
pub fn parseval_overlap(a: f64, l: f64) -> f64 {
    radial(|k| l * k * (-k * l).exp() * sinc(k * a), l)
}

pub fn fidelity_m(a: f64) -> f64 {
    momentum_overlap(a, 1.0).powi(2) / momentum_overlap(0.0, 1.0).powi(2)
}

pub fn fidelity_p(a: f64) -> f64 {
    parseval_overlap(a, 1.0).powi(2) / parseval_overlap(0.0, 1.0).powi(2)
}

/// Root of `(1/s) arctan s = 1 - ln(1/threshold)/(2N)` by bisection (units of `l`).
pub fn extension(mean_photons: f64, threshold: f64) -> f64 {
    let target = 1.0 - (1.0 / threshold).ln() / (2.0 * mean_photons);
    let g = |s: f64| s.atan() / s - target;
    let (mut lo, mut hi) = (1e-9, 1e6);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Frozen oracle values of `F_m` at `a/l`.
pub const FIDELITY_M: [(f64, f64); 6] = [
    (0.1, 0.993384028940402),
    (0.5, 0.8598764213286575),
    (1.0, 0.6168502750680849),
    (2.0, 0.3064445708282746),
    (5.0, 0.07544918666580633),
    (10.0, 0.02164216634102315),
];

/// Frozen extensions at threshold 0.15 for `⟨N⟩ = 1, 3, 10, 30`.
pub const EXTENSIONS: [(f64, f64); 4] = [
    (1.0, 29.886243570826835),
    (3.0, 1.3801863137966441),
    (10.0, 0.5837968405244292),
    (30.0, 0.3170395510414107),
];
