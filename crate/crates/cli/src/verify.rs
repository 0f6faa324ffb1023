//! Self-check suites run by `photon-fidelity verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use photon_fidelity::poincare::{direction, wrap_angle};
use photon_fidelity::position::{
    maxwell_residual, nonlocal_inner_product, photon_number, polarization_vector, rs_field,
    rs_time_derivative, synthesize_state, whittaker_field, PlaneWave, SpatialGrid,
};
use photon_fidelity::{
    apply_transform, example_state, Complex64, fidelity_m, fidelity_p, inner_product_m, norm_m,
    parseval_inner_product, theta_closed_form, theta_general, time_shift, translate, Error,
    Helicity, HelicityDoublet, PhysicalConstants, PoincareTransform, QuadratureSpec, Result,
    TransformKind, Vector3,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Norms,
    Parseval,
    Maxwell,
    Invariance,
    Nonlocal,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "norms" => Ok(Suite::Norms),
            "parseval" => Ok(Suite::Parseval),
            "maxwell" => Ok(Suite::Maxwell),
            "invariance" => Ok(Suite::Invariance),
            "nonlocal" => Ok(Suite::Nonlocal),
            other => Err(format!(
                "unknown suite {other:?} (expected norms, parseval, maxwell, invariance or nonlocal)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn close(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Self {
        let err = (got - want).abs();
        Self::new(name, err <= tol, format!("{got:.12} vs {want:.12} (|diff| {err:.1e}, tol {tol:.0e})"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn pair(a: f64) -> Result<(HelicityDoublet, HelicityDoublet)> {
    let f = example_state(1.0)?;
    let g = translate(&f, Vector3::new(0.0, 0.0, a));
    Ok((f, g))
}

pub fn run(suite: Suite, spec: &QuadratureSpec, constants: &PhysicalConstants) -> Result<Vec<Check>> {
    match suite {
        Suite::Norms => norms(spec, constants),
        Suite::Parseval => parseval(spec, constants),
        Suite::Maxwell => maxwell(spec, constants),
        Suite::Invariance => invariance(spec),
        Suite::Nonlocal => nonlocal(spec, constants),
    }
}

fn norms(spec: &QuadratureSpec, constants: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for l in [0.5, 1.0, 2.0, 5.0] {
        let f = example_state(l)?;
        checks.push(Check::close(format!("norm l={l}"), norm_m(&f, spec)?, 1.0, 1e-8));
    }
    let f = example_state(1.0)?;
    let moved = time_shift(&translate(&f, Vector3::new(0.3, -1.0, 2.0)), 1.5, constants);
    checks.push(Check::close("norm after translation and time shift", norm_m(&moved, spec)?, 1.0, 1e-8));
    Ok(checks)
}

fn parseval(spec: &QuadratureSpec, constants: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for l in [1.0, 2.0] {
        for a in [0.5, 1.0, 2.0] {
            let f = example_state(l)?;
            let g = translate(&f, Vector3::new(0.0, 0.0, a));
            let got = parseval_inner_product(&f, &g, spec, constants)?.value.re;
            let want = constants.hbar_c * l / (l * l + a * a);
            checks.push(Check::close(format!("position overlap l={l} a={a}"), got, want, 1e-8 * want));
        }
    }
    for a in [0.5, 1.0, 2.0] {
        let (f, g) = pair(a)?;
        let got = fidelity_p(&f, &g, spec, constants)?.value;
        checks.push(Check::close(format!("F_p a/l={a}"), got, (1.0 + a * a).powi(-2), 1e-8));
    }
    Ok(checks)
}

fn maxwell(spec: &QuadratureSpec, constants: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let grid = SpatialGrid::cube(1.0, 9, 0.3)?;
    let mut worst: f64 = 0.0;
    for k in [Vector3::new(0.4, -1.1, 0.7), Vector3::new(2.0, 0.5, -1.5)] {
        let chi = PlaneWave {
            k,
            amplitude: Complex64::new(0.8, -0.3),
            c: constants.c,
        };
        let field = whittaker_field(&chi, &grid, constants)?;
        let e = polarization_vector(k, Helicity::Plus)?;
        for v in &field.values {
            let coeff: Complex64 = e
                .iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            worst = worst.max((v - e * coeff).norm() / v.norm());
        }
    }
    checks.push(Check::new(
        "plane-wave field along e(k)",
        worst <= 1e-10,
        format!("max relative departure {worst:.1e}"),
    ));

    let f = example_state(1.0)?;
    let tight = QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-7),
        ..spec.clone()
    };
    let mut residuals = Vec::new();
    for points in [17, 33] {
        let g = SpatialGrid::cube(0.4, points, 0.0)?;
        let field = rs_field(&f, &g, &tight, constants)?;
        let dt = rs_time_derivative(&f, &g, &tight, constants)?;
        residuals.push(maxwell_residual(&field, &dt, constants)?);
    }
    let curl = residuals[0].curl / residuals[1].curl;
    let div = residuals[0].divergence / residuals[1].divergence;
    checks.push(Check::new(
        "curl residual ratio on halving h",
        curl >= 3.5,
        format!("{:.3e} -> {:.3e}, ratio {curl:.2}", residuals[0].curl, residuals[1].curl),
    ));
    checks.push(Check::new(
        "divergence ratio on halving h",
        div >= 3.5,
        format!("{:.3e} -> {:.3e}, ratio {div:.2}", residuals[0].divergence, residuals[1].divergence),
    ));
    Ok(checks)
}

fn invariance(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for (kind, param) in [(TransformKind::RotationY, 0.7), (TransformKind::BoostY, 0.9)] {
        let t = PoincareTransform::from_kind(kind, param)?;
        for i in 0..10 {
            for j in 0..10 {
                let theta = 0.1 + 2.9 * i as f64 / 9.0;
                let phi = -PI + 2.0 * PI * (j as f64 + 0.5) / 10.0;
                let k = direction(theta, phi);
                let general = match theta_general(&t, k) {
                    Err(Error::AxisSingularity { .. }) => continue,
                    other => other?,
                };
                let closed = theta_closed_form(kind, param, theta, phi)?;
                worst = worst.max(wrap_angle(general - closed).abs());
            }
        }
    }
    checks.push(Check::new(
        "Wigner phase closed forms",
        worst <= 1e-9,
        format!("max mismatch {worst:.1e} over 200 directions"),
    ));

    let loose = QuadratureSpec {
        rel_tol: spec.rel_tol.max(1e-7),
        ..spec.clone()
    };
    let (f, g) = pair(1.0)?;
    let base = fidelity_m(&f, &g, &loose)?.value;
    for (name, t) in [
        ("F_m under rotation-y 0.7", PoincareTransform::rotation_y(0.7)?),
        ("F_m under boost-y 0.5c", PoincareTransform::boost_y(0.5)?),
    ] {
        let moved = fidelity_m(&apply_transform(&f, &t), &apply_transform(&g, &t), &loose)?.value;
        checks.push(Check::close(name, moved, base, 1e-6));
    }
    Ok(checks)
}

fn nonlocal(spec: &QuadratureSpec, constants: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let grid = SpatialGrid::cube(6.0, 16, 0.0)?;
    let quad = QuadratureSpec {
        rel_tol: spec.rel_tol.max(1e-6),
        ..spec.clone()
    };
    let (f, g) = pair(1.0)?;
    let s1 = synthesize_state(&f, &grid, &quad, constants)?;
    let s2 = synthesize_state(&g, &grid, &quad, constants)?;
    let forward = nonlocal_inner_product(&s1, &s2)?;
    let backward = nonlocal_inner_product(&s2, &s1)?;
    let skew = (forward - backward.conj()).norm() / forward.norm();
    checks.push(Check::new("kernel hermiticity", skew <= 1e-10, format!("relative skew {skew:.1e}")));
    let exact = inner_product_m(&f, &g, spec)?.value.re * constants.hbar_c;
    checks.push(Check::close("kernel overlap vs momentum overlap (10%)", forward.re, exact, 0.1 * exact));
    let n = photon_number(&s1, constants)?;
    checks.push(Check::close("photon number (10%)", n, 1.0, 0.1));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("maxwell".parse::<Suite>().unwrap(), Suite::Maxwell);
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn norms_suite_passes() {
        let checks = run(Suite::Norms, &QuadratureSpec::default(), &PhysicalConstants::default()).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(checks[0].to_string().starts_with("PASS norm l=0.5"));
    }
}
