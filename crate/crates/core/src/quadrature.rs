//! Spherical-coordinate quadrature for `∫ d³k |k|^{-p} g(k)`, `p ∈ {0, 1, 2}`.
//!
//! The rule is a tensor product of
//!
//! * a composite Gauss–Legendre rule in `|k|` on `[0, k_max]`, with
//!   `k_max = (ln(1/rel_tol) + 12) / radial_scale` and the first panel graded
//!   geometrically toward `k = 0` to absorb the `k^{-1/2}` amplitudes,
//! * a Gauss–Legendre rule in `cos θ` for axially symmetric integrands, which
//!   are then typically polynomial or entire in `cos θ`, and in `θ` itself
//!   otherwise, since `k_x`, `k_y` and the polarization vector carry odd powers
//!   of `sin θ = √(1 - cos²θ)`; neither rule touches the poles, where the
//!   polarization vector is singular, and
//! * a uniform midpoint rule in the azimuth, collapsed to a single node when
//!   the integrand is axially symmetric.
//!
//! Integration refines by doubling every node count until two successive
//! passes agree to `rel_tol`. Node placement depends only on the spec, and
//! sums are taken pairwise in a fixed order, so results are bit-stable and
//! independent of the thread count.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Nodes per radial Gauss–Legendre panel.
const PANEL_ORDER: usize = 8;
/// Geometric sub-panels carved out of the first radial panel.
const GRADING_LEVELS: usize = 12;
/// Ceiling on evaluations per pass; a refinement above it ends the loop.
const MAX_NODES_PER_PASS: usize = 1 << 26;
/// Integrals smaller than this fraction of `∫|g|` are resolved absolutely.
const ABSOLUTE_FLOOR: f64 = 1e-6;

/// Node counts and tolerances of the spherical quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Radial nodes, split into panels of 8 (plus the graded first panel).
    pub radial_nodes: usize,
    /// Gauss–Legendre nodes in `cos θ`.
    pub polar_nodes: usize,
    /// Uniform azimuthal nodes (ignored for axially symmetric integrands).
    pub azimuth_nodes: usize,
    pub rel_tol: f64,
    pub max_refinements: usize,
    /// Decay length of the integrand in the sense of `e^{-k·radial_scale}`.
    pub radial_scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 32,
            polar_nodes: 16,
            azimuth_nodes: 16,
            rel_tol: 1e-8,
            max_refinements: 12,
            radial_scale: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.radial_nodes < 8 {
            return bad(format!("radial_nodes must be >= 8, got {}", self.radial_nodes));
        }
        if self.polar_nodes < 4 {
            return bad(format!("polar_nodes must be >= 4, got {}", self.polar_nodes));
        }
        if self.azimuth_nodes < 4 {
            return bad(format!("azimuth_nodes must be >= 4, got {}", self.azimuth_nodes));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return bad(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        if !(self.radial_scale.is_finite() && self.radial_scale > 0.0) {
            return bad(format!("radial_scale must be positive, got {}", self.radial_scale));
        }
        Ok(())
    }

    /// Same spec with every node count grown by half.
    pub fn refined(&self) -> Self {
        let grow = |n: usize| n + n.div_ceil(2);
        Self {
            radial_nodes: grow(self.radial_nodes),
            polar_nodes: grow(self.polar_nodes),
            azimuth_nodes: grow(self.azimuth_nodes),
            ..self.clone()
        }
    }

    /// Same spec with every node count multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        Self {
            radial_nodes: self.radial_nodes * factor,
            polar_nodes: self.polar_nodes * factor,
            azimuth_nodes: self.azimuth_nodes * factor,
            ..self.clone()
        }
    }

    /// Adapts the spec to an integrand decaying like `e^{-k·decay_length}`
    /// and oscillating like `e^{ik·Δr}` with `|Δr| ≤ extent`. `radial_scale`
    /// is read in units of `decay_length`, and node counts scale with
    /// `⌈extent / decay_length⌉` before refinement starts.
    pub fn tuned(&self, decay_length: f64, extent: f64) -> Self {
        let factor = (extent / decay_length).ceil().max(1.0) as usize;
        Self {
            radial_scale: self.radial_scale * decay_length,
            ..self.scaled(factor)
        }
    }

    pub(crate) fn radial_cutoff(&self) -> f64 {
        ((1.0 / self.rel_tol).ln() + 12.0) / self.radial_scale
    }
}

/// Whether the azimuthal integral may be collapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// The integrand depends on `k` only through `|k|` and `k_z`.
    Axial,
}

/// A converged integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    /// Difference between the last two refinement passes.
    pub error: f64,
    pub refinements: usize,
    /// Integrand evaluations in the final pass.
    pub evaluations: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence from the Tricomi
    /// initial guess. Nodes are accurate to a few ulp for any `n`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, z);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Maps the rule onto `[a, b]`, appending to the output vectors.
    fn push_mapped(&self, a: f64, b: f64, xs: &mut Vec<f64>, ws: &mut Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            xs.push(mid + half * x);
            ws.push(half * w);
        }
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// Integration variable of the polar Gauss–Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarVariable {
    /// Nodes in `cos θ ∈ [-1, 1]`: exact for polynomials in `cos θ`.
    CosTheta,
    /// Nodes in `θ ∈ [0, π]` with the `sin θ` Jacobian in the weights.
    Theta,
}

impl PolarVariable {
    /// `CosTheta` for axial integrands, `Theta` otherwise.
    pub fn for_symmetry(symmetry: Symmetry) -> Self {
        match symmetry {
            Symmetry::Axial => PolarVariable::CosTheta,
            Symmetry::None => PolarVariable::Theta,
        }
    }
}

/// Tensor-product spherical rule built from a [`QuadratureSpec`].
#[derive(Debug, Clone)]
pub struct SphericalRule {
    pub radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub cos_theta: Vec<f64>,
    pub sin_theta: Vec<f64>,
    pub polar_weights: Vec<f64>,
    pub cos_phi: Vec<f64>,
    pub sin_phi: Vec<f64>,
    pub azimuth_weights: Vec<f64>,
}

impl SphericalRule {
    pub fn new(spec: &QuadratureSpec, symmetry: Symmetry) -> Self {
        Self::with_polar(spec, symmetry, PolarVariable::for_symmetry(symmetry))
    }

    pub fn with_polar(spec: &QuadratureSpec, symmetry: Symmetry, polar: PolarVariable) -> Self {
        let (radii, radial_weights) = radial_rule(spec);

        let gl = GaussLegendre::new(spec.polar_nodes);
        let (cos_theta, sin_theta, polar_weights) = match polar {
            PolarVariable::CosTheta => {
                let sin = gl.nodes.iter().map(|c| (1.0 - c * c).sqrt()).collect();
                (gl.nodes, sin, gl.weights)
            }
            PolarVariable::Theta => {
                let half = 0.5 * PI;
                let thetas: Vec<f64> = gl.nodes.iter().map(|x| half * (1.0 + x)).collect();
                let weights = thetas
                    .iter()
                    .zip(&gl.weights)
                    .map(|(t, w)| half * w * t.sin())
                    .collect();
                (
                    thetas.iter().map(|t| t.cos()).collect(),
                    thetas.iter().map(|t| t.sin()).collect(),
                    weights,
                )
            }
        };

        let (cos_phi, sin_phi, azimuth_weights) = match symmetry {
            Symmetry::Axial => (vec![1.0], vec![0.0], vec![2.0 * PI]),
            Symmetry::None => {
                let m = spec.azimuth_nodes;
                let step = 2.0 * PI / m as f64;
                let phis: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) * step).collect();
                (
                    phis.iter().map(|p| p.cos()).collect(),
                    phis.iter().map(|p| p.sin()).collect(),
                    vec![step; m],
                )
            }
        };

        Self {
            radii,
            radial_weights,
            cos_theta,
            sin_theta,
            polar_weights,
            cos_phi,
            sin_phi,
            azimuth_weights,
        }
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.cos_theta.len() * self.cos_phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫ d³k |k|^{-power} g(k)` on this rule, together with `∫ d³k |k|^{-power} |g|`.
    pub fn integrate<G>(&self, g: &G, power: u8) -> (Complex64, f64)
    where
        G: Fn(Vector3<f64>) -> Complex64 + Sync,
    {
        let per_shell: Vec<(Complex64, f64)> = self
            .radii
            .par_iter()
            .zip(self.radial_weights.par_iter())
            .map(|(&k, &wk)| {
                let jac = wk * radial_jacobian(k, power);
                let mut buf = Vec::with_capacity(self.cos_theta.len() * self.cos_phi.len());
                let mut abs = Vec::with_capacity(buf.capacity());
                for ((&ct, &st), &wt) in self
                    .cos_theta
                    .iter()
                    .zip(&self.sin_theta)
                    .zip(&self.polar_weights)
                {
                    for ((&cp, &sp), &wp) in
                        self.cos_phi.iter().zip(&self.sin_phi).zip(&self.azimuth_weights)
                    {
                        let kv = Vector3::new(k * st * cp, k * st * sp, k * ct);
                        let v = g(kv) * (jac * wt * wp);
                        abs.push(v.norm());
                        buf.push(v);
                    }
                }
                (pairwise_sum(&buf), pairwise_sum_real(&abs))
            })
            .collect();
        let values: Vec<Complex64> = per_shell.iter().map(|p| p.0).collect();
        let abs: Vec<f64> = per_shell.iter().map(|p| p.1).collect();
        (pairwise_sum(&values), pairwise_sum_real(&abs))
    }
}

fn radial_jacobian(k: f64, power: u8) -> f64 {
    match power {
        0 => k * k,
        1 => k,
        _ => 1.0,
    }
}

fn radial_rule(spec: &QuadratureSpec) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(PANEL_ORDER);
    let panels = (spec.radial_nodes / PANEL_ORDER).max(1);
    let k_max = spec.radial_cutoff();
    let width = k_max / panels as f64;

    let mut xs = Vec::with_capacity((panels + GRADING_LEVELS) * PANEL_ORDER);
    let mut ws = Vec::with_capacity(xs.capacity());
    // First panel split as [0, w/2^G], [w/2^G, w/2^(G-1)], ..., [w/2, w].
    let mut lo = 0.0;
    for level in (0..=GRADING_LEVELS).rev() {
        let hi = width / (1u64 << level) as f64;
        gl.push_mapped(lo, hi, &mut xs, &mut ws);
        lo = hi;
    }
    for p in 1..panels {
        gl.push_mapped(p as f64 * width, (p + 1) as f64 * width, &mut xs, &mut ws);
    }
    (xs, ws)
}

/// Pairwise summation with an 8-term sequential base case.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_real(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_real(&xs[..mid]) + pairwise_sum_real(&xs[mid..])
}

/// Estimated node count of a pass without building the rule.
fn pass_size(spec: &QuadratureSpec, symmetry: Symmetry) -> usize {
    let radial = ((spec.radial_nodes / PANEL_ORDER).max(1) + GRADING_LEVELS) * PANEL_ORDER;
    let azimuth = match symmetry {
        Symmetry::Axial => 1,
        Symmetry::None => spec.azimuth_nodes,
    };
    radial.saturating_mul(spec.polar_nodes).saturating_mul(azimuth)
}

/// Adaptive `∫ d³k |k|^{-power} g(k)`.
///
/// Refines until two successive passes agree to `rel_tol` (relative to the
/// larger of `|I|` and `10⁻⁶ ∫|g|`). Runs out of refinements or node budget
/// with [`Error::ConvergenceFailure`] carrying the best value.
pub fn integrate_spherical<G>(
    g: G,
    power: u8,
    symmetry: Symmetry,
    spec: &QuadratureSpec,
) -> Result<Integral>
where
    G: Fn(Vector3<f64>) -> Complex64 + Sync,
{
    spec.validate()?;
    if power > 2 {
        return Err(Error::InvalidParameter(format!(
            "radial power must be 0, 1 or 2, got {power}"
        )));
    }

    let mut current = spec.clone();
    let rule = SphericalRule::new(&current, symmetry);
    let (mut prev, _) = rule.integrate(&g, power);
    let mut estimate = f64::INFINITY;

    for refinement in 1..=spec.max_refinements {
        let next = current.refined();
        if pass_size(&next, symmetry) > MAX_NODES_PER_PASS {
            break;
        }
        current = next;
        let rule = SphericalRule::new(&current, symmetry);
        let (value, abs) = rule.integrate(&g, power);
        estimate = (value - prev).norm();
        let scale = value.norm().max(ABSOLUTE_FLOOR * abs);
        if estimate <= spec.rel_tol * scale {
            return Ok(Integral {
                value,
                error: estimate,
                refinements: refinement,
                evaluations: rule.len(),
            });
        }
        prev = value;
    }

    Err(Error::ConvergenceFailure {
        value: prev,
        estimate,
        refinements: spec.max_refinements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_small_rules() {
        let r = GaussLegendre::new(2);
        assert_relative_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        let r = GaussLegendre::new(3);
        assert_eq!(r.nodes[1], 0.0);
        assert_relative_eq!(r.weights[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(r.nodes[2], (0.6f64).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn gauss_legendre_exact_to_degree() {
        for n in [4usize, 16, 63, 200] {
            let r = GaussLegendre::new(n);
            assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            let deg = 2 * n - 2;
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_relative_eq!(s, 2.0 / (deg as f64 + 1.0), max_relative = 1e-12);
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes.iter().all(|x| x.abs() < 1.0));
        }
    }

    #[test]
    fn radial_rule_integrates_exponentials() {
        let spec = QuadratureSpec::default();
        let (xs, ws) = radial_rule(&spec);
        let s: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x * x * (-x).exp()).sum();
        assert_relative_eq!(s, 2.0, max_relative = 1e-10);
        // Γ(5/2): the k^{3/2} endpoint behaviour of position-space integrands
        let s: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powf(1.5) * (-x).exp()).sum();
        assert_relative_eq!(s, 0.75 * PI.sqrt(), max_relative = 1e-10);
        assert!(xs.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn zero_integrand_is_exactly_zero() {
        let r = integrate_spherical(
            |_| Complex64::new(0.0, 0.0),
            1,
            Symmetry::None,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.error, 0.0);
    }

    #[test]
    fn gaussian_in_all_powers() {
        // ∫ d³k k^{-p} e^{-k} = 4π Γ(3-p)
        let expected = [8.0 * PI, 4.0 * PI, 4.0 * PI];
        for p in 0..=2u8 {
            let r = integrate_spherical(
                |k| Complex64::new((-k.norm()).exp(), 0.0),
                p,
                Symmetry::Axial,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert_relative_eq!(r.value.re, expected[p as usize], max_relative = 1e-9);
        }
    }

    #[test]
    fn cos_theta_polynomials_exact_on_sphere() {
        let spec = QuadratureSpec::default();
        let rule = SphericalRule::new(&spec, Symmetry::Axial);
        // radial part ∫ k² e^{-k} dk = 2 (exact to rule precision), angular ∫ cos^n θ dΩ
        for n in [0i32, 2, 4, 10, 2 * spec.polar_nodes as i32 - 2] {
            let (v, _) = rule.integrate(
                &|k: Vector3<f64>| {
                    let kn = k.norm();
                    Complex64::new((k.z / kn).powi(n) * (-kn).exp(), 0.0)
                },
                0,
            );
            let angular = 4.0 * PI / (n as f64 + 1.0);
            let (radial, _) = rule.integrate(
                &|k: Vector3<f64>| Complex64::new((-k.norm()).exp(), 0.0),
                0,
            );
            assert_relative_eq!(v.re, radial.re * angular / (4.0 * PI), max_relative = 1e-13);
        }
        let (v, _) = rule.integrate(
            &|k: Vector3<f64>| Complex64::new((k.z / k.norm()).powi(7) * (-k.norm()).exp(), 0.0),
            0,
        );
        assert!(v.re.abs() < 1e-14);
    }

    #[test]
    fn theta_rule_handles_odd_sine_powers() {
        let spec = QuadratureSpec::default();
        let rule = SphericalRule::new(&spec, Symmetry::None);
        // ∫ sin θ dΩ = π², smooth in θ but not in cos θ
        let (v, _) = rule.integrate(
            &|k: Vector3<f64>| Complex64::new(k.x.hypot(k.y) / k.norm() * (-k.norm()).exp(), 0.0),
            0,
        );
        let (radial, _) = rule.integrate(&|k: Vector3<f64>| Complex64::new((-k.norm()).exp(), 0.0), 0);
        assert_relative_eq!(v.re / radial.re * 4.0 * PI, PI * PI, max_relative = 1e-13);
        let (v, _) = rule.integrate(
            &|k: Vector3<f64>| Complex64::new((k.z / k.norm()).powi(2) * (-k.norm()).exp(), 0.0),
            0,
        );
        assert_relative_eq!(v.re / radial.re, 1.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn invalid_specs_rejected() {
        let base = QuadratureSpec::default();
        for spec in [
            QuadratureSpec { radial_nodes: 4, ..base.clone() },
            QuadratureSpec { polar_nodes: 2, ..base.clone() },
            QuadratureSpec { azimuth_nodes: 1, ..base.clone() },
            QuadratureSpec { rel_tol: 0.0, ..base.clone() },
            QuadratureSpec { rel_tol: 1.5, ..base.clone() },
            QuadratureSpec { radial_scale: -1.0, ..base.clone() },
        ] {
            assert!(spec.validate().is_err());
        }
        assert!(integrate_spherical(|_| Complex64::new(1.0, 0.0), 3, Symmetry::Axial, &base).is_err());
    }

    #[test]
    fn non_convergence_reports_best_value() {
        let spec = QuadratureSpec {
            max_refinements: 1,
            rel_tol: 1e-14,
            ..QuadratureSpec::default()
        };
        // Oscillates far faster than the base rule resolves.
        let err = integrate_spherical(
            |k| Complex64::new((-k.norm()).exp(), 0.0) * Complex64::cis(200.0 * k.z),
            1,
            Symmetry::Axial,
            &spec,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConvergenceFailure { refinements: 1, .. }));
    }

    #[test]
    fn tuned_scales_node_counts() {
        let s = QuadratureSpec::default().tuned(0.5, 2.2);
        assert_eq!(s.radial_nodes, 32 * 5);
        assert_eq!(s.polar_nodes, 16 * 5);
        assert_eq!(s.radial_scale, 0.5);
        let s = QuadratureSpec::default().tuned(1.0, 0.0);
        assert_eq!(s.radial_nodes, 32);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let xs: Vec<Complex64> = (0..37).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let s = pairwise_sum(&xs);
        assert_eq!(s, Complex64::new(666.0, -666.0));
    }
}
