use crate::error::{Error, Result};

use super::rational::Rational;

/// The finite arithmetic grid `{base, base+1, ..., base+length-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    base: Rational,
    length: usize,
}

impl Grid {
    pub fn new(base: Rational, length: usize) -> Self {
        Grid { base, length }
    }

    pub fn base(&self) -> Rational {
        self.base
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn point(&self, k: usize) -> Rational {
        self.base + k as i64
    }

    /// Index of `t` on this grid, if `t` is one of its points.
    pub fn index_of(&self, t: Rational) -> Option<usize> {
        let k = t.integer_offset_from(self.base)?;
        (k >= 0 && (k as usize) < self.length).then_some(k as usize)
    }

    pub fn last(&self) -> Option<Rational> {
        self.length.checked_sub(1).map(|k| self.point(k))
    }

    pub fn points(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.length).map(|k| self.point(k))
    }
}

/// Finite real values attached to the points of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(base: Rational, values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonfiniteValue(format!(
                "value {} at t = {}",
                values[k],
                base + k as i64
            )));
        }
        Ok(GridFunction {
            grid: Grid::new(base, values.len()),
            values,
        })
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(Rational) -> f64) -> Result<Self> {
        let values = grid.points().map(&mut f).collect();
        GridFunction::new(grid.base(), values)
    }

    pub fn try_from_fn(grid: Grid, mut f: impl FnMut(Rational) -> Result<f64>) -> Result<Self> {
        let values = grid.points().map(&mut f).collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid.base(), values)
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        GridFunction::new(grid.base(), vec![c; grid.len()])
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn base(&self) -> Rational {
        self.grid.base()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, t: Rational) -> Option<f64> {
        self.grid.index_of(t).map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        GridFunction::new(self.base(), self.values.iter().map(|x| c * x).collect())
    }
}
