//! Akima spline fitting and dense resampling of per-resolution curves.
//!
//! Each (sequence, resolution) group gets three independent splines over the
//! CRF axis — bitrate, quality, decode energy — evaluated on a configurable
//! grid. No extrapolation: requests outside the measured CRF range fail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::ingest::Corpus;

/// Floor applied to interpolated bitrate/energy samples; the spline can
/// undershoot near steep segments even though all knots are positive.
pub const POSITIVITY_FLOOR: f64 = 1e-6;

/// Default CRF sampling step.
pub const DEFAULT_STEP: f64 = 0.1;

/// Piecewise-cubic Akima interpolant.
///
/// Knot derivatives follow the classic construction: two virtual slopes on
/// each side obtained by linear extrapolation of the slope sequence
/// (equivalently, quadratic extrapolation of the data), then the weighted
/// slope blend with weights `|m4 - m3|` and `|m2 - m1|`. When both weights
/// vanish the derivative falls back to the average of the adjacent slopes,
/// which reproduces constant and collinear data exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AkimaSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    derivs: Vec<f64>,
}

impl AkimaSpline {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        let n = xs.len();
        if n < 5 {
            return Err(Error::TooFewKnots { got: n });
        }
        for i in 1..n {
            if xs[i].is_nan() || xs[i - 1].is_nan() || xs[i] <= xs[i - 1] {
                return Err(Error::NonIncreasingX { index: i });
            }
        }

        // Slopes with two virtual entries on each side: m[2..n+1) are the
        // measured slopes, m[0..2) and m[n+1..n+3) the extrapolated ones.
        let mut m = vec![0.0; n + 3];
        for i in 0..n - 1 {
            m[i + 2] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        m[1] = 2.0 * m[2] - m[3];
        m[0] = 2.0 * m[1] - m[2];
        m[n + 1] = 2.0 * m[n] - m[n - 1];
        m[n + 2] = 2.0 * m[n + 1] - m[n];

        let mut derivs = vec![0.0; n];
        for (i, d) in derivs.iter_mut().enumerate() {
            let (m_ll, m_l, m_r, m_rr) = (m[i], m[i + 1], m[i + 2], m[i + 3]);
            let w_left = (m_rr - m_r).abs();
            let w_right = (m_l - m_ll).abs();
            *d = if w_left + w_right == 0.0 {
                0.5 * (m_l + m_r)
            } else {
                (w_left * m_l + w_right * m_r) / (w_left + w_right)
            };
        }

        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            derivs,
        })
    }

    pub fn min_x(&self) -> f64 {
        self.xs[0]
    }

    pub fn max_x(&self) -> f64 {
        *self.xs.last().expect("non-empty")
    }

    /// Evaluate at `x`; errors outside `[min_x, max_x]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < self.min_x() || x > self.max_x() {
            return Err(Error::OutOfRange {
                x,
                min: self.min_x(),
                max: self.max_x(),
            });
        }
        let i = self
            .xs
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(self.xs.len() - 2);
        // Exact knot hits return the measured value bit-for-bit.
        if x == self.xs[i] {
            return Ok(self.ys[i]);
        }
        if x == self.xs[i + 1] {
            return Ok(self.ys[i + 1]);
        }
        let dx = self.xs[i + 1] - self.xs[i];
        let slope = (self.ys[i + 1] - self.ys[i]) / dx;
        let (d0, d1) = (self.derivs[i], self.derivs[i + 1]);
        let c2 = (3.0 * slope - 2.0 * d0 - d1) / dx;
        let c3 = (d0 + d1 - 2.0 * slope) / (dx * dx);
        let h = x - self.xs[i];
        Ok(self.ys[i] + h * (d0 + h * (c2 + h * c3)))
    }
}

/// Space the bitrate and energy splines are fitted in. Quality is always
/// fitted linearly; it is bounded and not log-scaled in any view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CurveSpace {
    /// Fit R(crf) and E(crf) directly.
    #[default]
    Linear,
    /// Fit log10(R) and log10(E), exponentiating after evaluation. Keeps
    /// samples positive by construction; knots still reproduce measured
    /// values within 1e-9 relative.
    Log10,
}

/// One densely sampled operating point of a (sequence, resolution) curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPoint {
    pub resolution_height: u32,
    pub crf: f64,
    pub bitrate_kbps: f64,
    pub vmaf: f64,
    pub decode_energy_j: f64,
    /// True when this sample sits on a measured CRF knot. Carried for curve
    /// dumps only; not part of any JSON interface.
    #[serde(skip)]
    pub is_knot: bool,
}

/// Akima-resampled curve for one (sequence, resolution) group.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionCurve {
    pub sequence_id: String,
    pub resolution_height: u32,
    pub samples: Vec<SampledPoint>,
}

/// Resample every (sequence, resolution) group of `corpus` on the grid
/// `{crf_min, crf_min+step, ...} ∪ knots`. Quality is clamped to [0, 100];
/// bitrate and energy are clamped to [`POSITIVITY_FLOOR`] with a warning.
pub fn sample_curves(
    corpus: &Corpus,
    step: f64,
) -> Result<(Vec<ResolutionCurve>, Vec<Warning>)> {
    sample_curves_in(corpus, step, CurveSpace::Linear)
}

/// [`sample_curves`] with an explicit fitting space for the cost axes.
pub fn sample_curves_in(
    corpus: &Corpus,
    step: f64,
    space: CurveSpace,
) -> Result<(Vec<ResolutionCurve>, Vec<Warning>)> {
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for sequence_id in corpus.sequence_ids() {
        let (seq_curves, mut w) = sample_sequence_curves(corpus, sequence_id, step, space)?;
        curves.extend(seq_curves);
        warnings.append(&mut w);
    }
    Ok((curves, warnings))
}

/// Per-sequence variant of [`sample_curves_in`].
pub fn sample_sequence_curves(
    corpus: &Corpus,
    sequence_id: &str,
    step: f64,
    space: CurveSpace,
) -> Result<(Vec<ResolutionCurve>, Vec<Warning>)> {
    let grid = corpus.crf_grid();
    let span = grid.last().copied().unwrap_or(0.0) - grid.first().copied().unwrap_or(0.0);
    if step.is_nan() || step <= 0.0 || step > span {
        return Err(Error::InvalidStep { step, max: span });
    }

    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for &resolution in corpus.resolutions() {
        let points: Vec<_> = corpus.group(sequence_id, resolution).collect();
        if points.is_empty() {
            continue;
        }
        let xs: Vec<f64> = points.iter().map(|p| p.crf).collect();
        let cost = |v: f64| match space {
            CurveSpace::Linear => v,
            CurveSpace::Log10 => v.log10(),
        };
        let uncost = |v: f64| match space {
            CurveSpace::Linear => v,
            CurveSpace::Log10 => 10f64.powf(v),
        };
        let rates: Vec<f64> = points.iter().map(|p| cost(p.bitrate_kbps)).collect();
        let quals: Vec<f64> = points.iter().map(|p| p.vmaf).collect();
        let energies: Vec<f64> = points.iter().map(|p| cost(p.decode_energy_j)).collect();

        let rate_spline = AkimaSpline::fit(&xs, &rates)?;
        let qual_spline = AkimaSpline::fit(&xs, &quals)?;
        let energy_spline = AkimaSpline::fit(&xs, &energies)?;

        let mut samples = Vec::new();
        for (crf, is_knot) in sample_grid(&xs, step) {
            let mut bitrate = uncost(rate_spline.eval(crf)?);
            let vmaf = qual_spline.eval(crf)?.clamp(0.0, 100.0);
            let mut energy = uncost(energy_spline.eval(crf)?);
            if bitrate < POSITIVITY_FLOOR {
                bitrate = POSITIVITY_FLOOR;
                warnings.push(Warning::ClampedValue {
                    sequence_id: sequence_id.to_string(),
                    resolution_height: resolution,
                    crf,
                    field: "bitrate_kbps",
                });
            }
            if energy < POSITIVITY_FLOOR {
                energy = POSITIVITY_FLOOR;
                warnings.push(Warning::ClampedValue {
                    sequence_id: sequence_id.to_string(),
                    resolution_height: resolution,
                    crf,
                    field: "decode_energy_j",
                });
            }
            samples.push(SampledPoint {
                resolution_height: resolution,
                crf,
                bitrate_kbps: bitrate,
                vmaf,
                decode_energy_j: energy,
                is_knot,
            });
        }
        curves.push(ResolutionCurve {
            sequence_id: sequence_id.to_string(),
            resolution_height: resolution,
            samples,
        });
    }
    Ok((curves, warnings))
}

/// Uniform grid over the knot span, merged with the knots themselves.
/// Grid points within `1e-9` (relative) of a knot collapse onto the exact
/// knot abscissa so knot samples reproduce measured values bit-for-bit.
fn sample_grid(knots: &[f64], step: f64) -> Vec<(f64, bool)> {
    let min = knots[0];
    let max = *knots.last().expect("non-empty");
    let count = ((max - min) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|k| min + k as f64 * step).collect();
    grid.retain(|&g| g <= max);

    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(grid.len() + knots.len());
    let (mut gi, mut ki) = (0, 0);
    while gi < grid.len() || ki < knots.len() {
        if ki < knots.len() && (gi >= grid.len() || knots[ki] <= grid[gi] || close(knots[ki], grid[gi])) {
            merged.push((knots[ki], true));
            if gi < grid.len() && close(knots[ki], grid[gi]) {
                gi += 1;
            }
            ki += 1;
        } else {
            merged.push((grid[gi], false));
            gi += 1;
        }
    }
    merged
}
