//! Regular spatial grids and complex vector fields sampled on them.

use std::io::Write;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::format_g9;

/// Minimum number of points per axis.
pub const MIN_POINTS: usize = 8;

/// A uniform box grid at a fixed time. Index order is z fastest, then y, then x.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub points: [usize; 3],
    pub time: f64,
}

impl SpatialGrid {
    pub fn new(min: [f64; 3], max: [f64; 3], points: [usize; 3], time: f64) -> Result<Self> {
        for axis in 0..3 {
            if points[axis] < MIN_POINTS {
                return Err(Error::InvalidParameter(format!(
                    "grid needs at least {MIN_POINTS} points per axis, got {}",
                    points[axis]
                )));
            }
            if !(min[axis].is_finite() && max[axis].is_finite() && max[axis] > min[axis]) {
                return Err(Error::InvalidParameter(format!(
                    "grid axis {axis} has invalid bounds [{}, {}]",
                    min[axis], max[axis]
                )));
            }
        }
        if !time.is_finite() {
            return Err(Error::InvalidParameter(format!("grid time must be finite, got {time}")));
        }
        Ok(Self {
            min,
            max,
            points,
            time,
        })
    }

    /// Cube `[-half_width, half_width]³` with `points` per axis.
    pub fn cube(half_width: f64, points: usize, time: f64) -> Result<Self> {
        Self::new([-half_width; 3], [half_width; 3], [points; 3], time)
    }

    pub fn with_time(&self, time: f64) -> Self {
        Self {
            time,
            ..self.clone()
        }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max[axis] - self.min[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.extent(axis) / (self.points[axis] - 1) as f64
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        if i + 1 == self.points[axis] {
            self.max[axis]
        } else {
            self.min[axis] + i as f64 * self.spacing(axis)
        }
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|i| self.coord(axis, i)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points[1] + j) * self.points[2] + k
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.points[2];
        let j = (idx / self.points[2]) % self.points[1];
        let i = idx / (self.points[1] * self.points[2]);
        [i, j, k]
    }

    pub fn point(&self, idx: usize) -> Vector3<f64> {
        let [i, j, k] = self.unravel(idx);
        Vector3::new(self.coord(0, i), self.coord(1, j), self.coord(2, k))
    }

    /// Composite trapezoid weight of a grid point (cell volume, halved per boundary axis).
    pub fn weight(&self, idx: usize) -> f64 {
        let ijk = self.unravel(idx);
        (0..3)
            .map(|a| {
                let h = self.spacing(a);
                if ijk[a] == 0 || ijk[a] + 1 == self.points[a] {
                    0.5 * h
                } else {
                    h
                }
            })
            .product()
    }

    /// Whether another grid samples the same points at the same time.
    pub fn compatible(&self, other: &SpatialGrid) -> bool {
        self == other
    }
}

/// What a [`PositionField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Plus,
    Minus,
    /// Riemann–Silberstein vector `F = Ψ₊ + Ψ₋*`.
    RiemannSilberstein,
}

/// A complex 3-vector field on a [`SpatialGrid`].
#[derive(Debug, Clone)]
pub struct PositionField {
    pub grid: SpatialGrid,
    pub values: Vec<Vector3<Complex64>>,
    pub kind: FieldKind,
    /// Largest quadrature error estimate of the synthesis probes.
    pub error: f64,
}

impl PositionField {
    pub fn zeros(grid: &SpatialGrid, kind: FieldKind) -> Self {
        Self {
            values: vec![Vector3::zeros(); grid.len()],
            grid: grid.clone(),
            kind,
            error: 0.0,
        }
    }

    /// Samples `field(r)` at every grid point.
    pub fn from_fn<F>(grid: &SpatialGrid, kind: FieldKind, field: F) -> Self
    where
        F: Fn(Vector3<f64>) -> Vector3<Complex64>,
    {
        Self {
            values: (0..grid.len()).map(|i| field(grid.point(i))).collect(),
            grid: grid.clone(),
            kind,
            error: 0.0,
        }
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> Vector3<Complex64> {
        self.values[self.grid.index(i, j, k)]
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.map(|c| c.conj())).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            error: self.error * factor.norm(),
            ..self.clone()
        }
    }

    /// Pointwise sum; the grids must match.
    pub fn add(&self, other: &PositionField, kind: FieldKind) -> Result<Self> {
        if !self.grid.compatible(&other.grid) {
            return Err(Error::IncompatibleGrid);
        }
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            grid: self.grid.clone(),
            kind,
            error: self.error + other.error,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Writes `x,y,z,re_x,im_x,re_y,im_y,re_z,im_z` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<usize> {
        writeln!(out, "x,y,z,re_x,im_x,re_y,im_y,re_z,im_z")?;
        for (idx, v) in self.values.iter().enumerate() {
            let r = self.grid.point(idx);
            let cols = [
                r.x, r.y, r.z, v.x.re, v.x.im, v.y.re, v.y.im, v.z.re, v.z.im,
            ];
            let line = cols.iter().map(|&c| format_g9(c)).collect::<Vec<_>>().join(",");
            if let Err(source) = writeln!(out, "{line}") {
                return Err(Error::PartialOutput {
                    rows_written: idx,
                    source,
                });
            }
        }
        Ok(self.values.len())
    }
}

/// Position wave functions of both helicities; `None` is identically zero.
#[derive(Debug, Clone)]
pub struct PositionState {
    pub grid: SpatialGrid,
    pub plus: Option<PositionField>,
    pub minus: Option<PositionField>,
}

impl PositionState {
    pub fn components(&self) -> [Option<&PositionField>; 2] {
        [self.plus.as_ref(), self.minus.as_ref()]
    }
}
