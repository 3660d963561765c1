//! Filter spectra sampled on a frequency grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::partition::Partition;
use crate::spectral::FrequencyGrid;

use super::{Family, FilterError, FilterSet};

/// The scaling factor `a_n` a filter was built with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleFactor {
    /// `a_n`, the width of the mother after dilation.
    Width(f64),
    /// Built directly from the partition (Littlewood-Paley, Meyer).
    PiecewiseDirect,
    /// Unit-modulus ray filter with no dilation (Shannon rays).
    Unscaled,
}

/// The partition and family a bank was sampled from.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub partition: Partition,
    pub family: Family,
}

/// One complex spectrum per support, sampled in natural DFT bin order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    grid: FrequencyGrid,
    indices: Vec<i64>,
    spectra: Vec<Vec<Complex64>>,
    scale_factors: Vec<ScaleFactor>,
    design: Option<Design>,
}

impl FilterBank {
    /// A bank from arbitrary spectra, with no partition attached.
    pub fn from_spectra(
        grid: FrequencyGrid,
        indices: Vec<i64>,
        spectra: Vec<Vec<Complex64>>,
    ) -> Result<Self, FilterError> {
        if indices.len() != spectra.len() {
            return Err(FilterError::ShapeMismatch(format!(
                "{} indices for {} spectra",
                indices.len(),
                spectra.len()
            )));
        }
        if let Some(bad) = spectra.iter().find(|s| s.len() != grid.len()) {
            return Err(FilterError::ShapeMismatch(format!(
                "spectrum of length {} on a {}-point grid",
                bad.len(),
                grid.len()
            )));
        }
        let scale_factors = vec![ScaleFactor::Unscaled; spectra.len()];
        Ok(Self {
            grid,
            indices,
            spectra,
            scale_factors,
            design: None,
        })
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    /// Support index of each filter, in bank order.
    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn spectra(&self) -> &[Vec<Complex64>] {
        &self.spectra
    }

    /// Spectrum of the filter for support `n`.
    pub fn spectrum(&self, n: i64) -> Option<&[Complex64]> {
        let pos = self.indices.iter().position(|&i| i == n)?;
        Some(&self.spectra[pos])
    }

    pub fn scale_factors(&self) -> &[ScaleFactor] {
        &self.scale_factors
    }

    pub fn design(&self) -> Option<&Design> {
        self.design.as_ref()
    }

    /// Number of filters.
    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    /// Same filters and metadata with new spectra; used for derived banks.
    pub(crate) fn with_spectra(&self, spectra: Vec<Vec<Complex64>>) -> Self {
        debug_assert_eq!(spectra.len(), self.spectra.len());
        Self {
            spectra,
            ..self.clone()
        }
    }
}

fn scale_factors(partition: &Partition, family: Family) -> Vec<ScaleFactor> {
    let supports = partition.supports();
    supports
        .iter()
        .enumerate()
        .map(|(pos, s)| match family {
            Family::LittlewoodPaley { .. } | Family::Meyer => ScaleFactor::PiecewiseDirect,
            Family::Shannon if s.is_ray() => ScaleFactor::Unscaled,
            Family::Shannon => ScaleFactor::Width(s.length()),
            Family::Gabor { .. } if s.is_left_ray() => {
                ScaleFactor::Width(supports[pos + 1].length())
            }
            Family::Gabor { .. } if s.is_right_ray() => {
                ScaleFactor::Width(supports[pos - 1].length())
            }
            Family::Gabor { .. } => ScaleFactor::Width(s.length()),
        })
        .collect()
}

/// Evaluates every filter of `family` on every bin of `grid`.
///
/// Finite boundaries must lie strictly inside `(-π, π)`; rays extend to the
/// edge of the grid.
pub fn sample_bank(
    partition: &Partition,
    family: Family,
    grid: FrequencyGrid,
) -> Result<FilterBank, FilterError> {
    if let Some(&b) = partition
        .boundaries()
        .iter()
        .find(|b| b.is_finite() && !(-PI < **b && **b < PI))
    {
        return Err(FilterError::BoundaryOutsideGrid(b));
    }
    let set = FilterSet::new(partition, family)?;
    let xi = grid.frequencies();
    let spectra = set
        .shapes()
        .iter()
        .map(|shape| xi.iter().map(|&x| shape.eval(x)).collect())
        .collect();
    Ok(FilterBank {
        grid,
        indices: partition.indices(),
        spectra,
        scale_factors: scale_factors(partition, family),
        design: Some(Design {
            partition: partition.clone(),
            family,
        }),
    })
}
