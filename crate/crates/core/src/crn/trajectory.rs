use std::io::{self, Write};

use super::{CrnError, NetworkSpec, Observer, SpeciesId};

/// Fixed-stride sampling of a subset (or all) of the species.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampling {
    pub stride: f64,
    /// `None` records every species.
    pub species: Option<Vec<SpeciesId>>,
}

impl Sampling {
    pub const DEFAULT_STRIDE: f64 = 1e-3;

    pub fn every(stride: f64) -> Self {
        Self {
            stride,
            species: None,
        }
    }

    pub fn only(stride: f64, species: Vec<SpeciesId>) -> Self {
        Self {
            stride,
            species: Some(species),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), CrnError> {
        if self.stride.is_finite() && self.stride > 0.0 {
            Ok(())
        } else {
            Err(CrnError::InvalidStride(self.stride))
        }
    }

    fn columns(&self, network: &NetworkSpec) -> Vec<SpeciesId> {
        match &self.species {
            Some(s) => s.clone(),
            None => network.species().iter().map(|s| s.id).collect(),
        }
    }
}

impl Default for Sampling {
    fn default() -> Self {
        Self::every(Self::DEFAULT_STRIDE)
    }
}

/// Time series sampled at `k * stride`, one row per sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    names: Vec<String>,
    columns: Vec<SpeciesId>,
    times: Vec<f64>,
    values: Vec<f64>,
    stride: f64,
    discrete: bool,
}

impl Trajectory {
    pub(crate) fn new(network: &NetworkSpec, sampling: &Sampling, discrete: bool) -> Self {
        let columns = sampling.columns(network);
        Self {
            names: columns.iter().map(|&s| network.name(s).to_string()).collect(),
            columns,
            times: Vec::new(),
            values: Vec::new(),
            stride: sampling.stride,
            discrete,
        }
    }

    pub(crate) fn push_row(&mut self, time: f64, row: impl Iterator<Item = f64>) {
        self.times.push(time);
        self.values.extend(row);
        debug_assert_eq!(self.values.len(), self.times.len() * self.columns.len());
    }

    pub(crate) fn columns(&self) -> &[SpeciesId] {
        &self.columns
    }

    pub fn stride(&self) -> f64 {
        self.stride
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Whether values are integer molecule counts (SSA) or real amounts (ODE).
    pub fn is_discrete(&self) -> bool {
        self.discrete
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.columns.len();
        &self.values[i * w..(i + 1) * w]
    }

    /// Column position of `species`, if it was recorded.
    pub fn column_of(&self, species: SpeciesId) -> Option<usize> {
        self.columns.iter().position(|&s| s == species)
    }

    pub fn column_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Samples of one column.
    pub fn series(&self, column: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.row(i)[column]).collect()
    }

    /// Named series; `None` if the species was not recorded.
    pub fn series_by_name(&self, name: &str) -> Option<Vec<f64>> {
        self.column_by_name(name).map(|c| self.series(c))
    }

    /// Last row at or before `t`.
    pub fn value_at(&self, column: usize, t: f64) -> Option<f64> {
        let idx = self.times.partition_point(|&s| s <= t);
        idx.checked_sub(1).map(|i| self.row(i)[column])
    }

    pub fn last_row(&self) -> Option<&[f64]> {
        (!self.is_empty()).then(|| self.row(self.len() - 1))
    }

    /// CSV with header `time,<species...>`; time to 9 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "time")?;
        for n in &self.names {
            write!(out, ",{n}")?;
        }
        writeln!(out)?;
        for i in 0..self.len() {
            write!(out, "{}", format_time(self.times[i]))?;
            for &v in self.row(i) {
                if self.discrete {
                    write!(out, ",{}", v as u64)?;
                } else {
                    write!(out, ",{v}")?;
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Formats `t` with 9 significant digits in positional notation.
pub fn format_time(t: f64) -> String {
    if t == 0.0 || !t.is_finite() {
        return format!("{t}");
    }
    let magnitude = t.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let s = format!("{t:.decimals$}");
    // Rounding may carry into a new digit (9.999999999 -> 10.00000000).
    if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 9 && decimals > 0 {
        let d = decimals - 1;
        format!("{t:.d$}")
    } else {
        s
    }
}

/// [`Observer`] that records a [`Trajectory`] at a fixed stride.
#[derive(Clone, Debug)]
pub struct TrajectoryRecorder {
    trajectory: Trajectory,
    next: u64,
}

impl TrajectoryRecorder {
    pub fn new(network: &NetworkSpec, sampling: &Sampling) -> Result<Self, CrnError> {
        sampling.validate()?;
        if let Some(cols) = &sampling.species {
            if let Some(bad) = cols.iter().find(|s| s.0 >= network.num_species()) {
                return Err(CrnError::UndeclaredSpecies(*bad));
            }
        }
        Ok(Self {
            trajectory: Trajectory::new(network, sampling, true),
            next: 0,
        })
    }

    fn sample_time(&self) -> f64 {
        self.next as f64 * self.trajectory.stride
    }

    fn push(&mut self, counts: &[u64]) {
        let t = self.sample_time();
        let row: Vec<f64> = self
            .trajectory
            .columns()
            .iter()
            .map(|s| counts[s.0] as f64)
            .collect();
        self.trajectory.push_row(t, row.into_iter());
        self.next += 1;
    }

    pub fn into_trajectory(self) -> Trajectory {
        self.trajectory
    }
}

impl Observer for TrajectoryRecorder {
    #[inline]
    fn hold(&mut self, _from: f64, to: f64, counts: &[u64]) {
        while self.sample_time() < to {
            self.push(counts);
        }
    }

    fn finish(&mut self, end: f64, counts: &[u64]) {
        let limit = end * (1.0 + 1e-12);
        while self.sample_time() <= limit {
            self.push(counts);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_time(0.0), "0");
        assert_eq!(format_time(0.015), "0.0150000000");
        assert_eq!(format_time(1000.0), "1000.00000");
        assert_eq!(format_time(1.0), "1.00000000");
        assert_eq!(format_time(123.456789012), "123.456789");
        assert_eq!(format_time(9.9999999999), "10.0000000");
    }
}
