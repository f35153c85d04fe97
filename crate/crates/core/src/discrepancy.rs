//! Absolute differences between the rational approximation and the quadrature
//! reference, `delta_re = |K_ref - K|` and `delta_im = |L_ref - L|`, over grids
//! of `(x, y)`; plus the kernel profile data behind the expansion plots.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::KernelExpansion;
use crate::oracle::{k_reference, l_reference, QuadratureConfig};
use crate::pseudo_voigt::{
    faddeeva_approx, voigt_k_approx, voigt_l_approx, ComplexArgument, Component, PseudoVoigtParams,
};

/// The four `y` levels compared in the discrepancy plots.
pub const DEFAULT_Y_VALUES: [f64; 4] = [0.0, 0.1, 0.5, 1.0];

/// Point `i` of `n` uniformly spaced values from `lo` to `hi`, both included.
///
/// Symmetric ranges produce exactly negated pairs and an exact zero at the centre.
pub(crate) fn lerp_node(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let last = (n - 1) as f64;
    let i = i as f64;
    (lo * (last - i) + hi * i) / last
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    x_min: f64,
    x_max: f64,
    x_steps: usize,
    y_values: Vec<f64>,
}

impl ScanGrid {
    pub fn new(x_min: f64, x_max: f64, x_steps: usize, y_values: Vec<f64>) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
            return Err(Error::domain(format!(
                "x range must be finite with x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if x_steps < 2 {
            return Err(Error::domain(format!(
                "x_steps must be at least 2, got {x_steps}"
            )));
        }
        if y_values.is_empty() {
            return Err(Error::domain("y_values must not be empty"));
        }
        if let Some(y) = y_values.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
            return Err(Error::domain(format!(
                "every y must be finite and non-negative, got {y}"
            )));
        }
        if y_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("y_values must be strictly increasing"));
        }
        Ok(ScanGrid {
            x_min,
            x_max,
            x_steps,
            y_values,
        })
    }

    /// `x` in `[0, 10]` with 1001 points at `y = 0, 0.1, 0.5, 1`.
    pub fn standard() -> Self {
        ScanGrid {
            x_min: 0.0,
            x_max: 10.0,
            x_steps: 1001,
            y_values: DEFAULT_Y_VALUES.to_vec(),
        }
    }

    pub fn x_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.x_steps).map(|i| lerp_node(self.x_min, self.x_max, i, self.x_steps))
    }

    pub fn y_values(&self) -> &[f64] {
        &self.y_values
    }

    pub fn len(&self) -> usize {
        self.x_steps * self.y_values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyRow {
    pub x: f64,
    pub y: f64,
    pub k_approx: f64,
    pub l_approx: f64,
    pub k_ref: f64,
    pub l_ref: f64,
    pub delta_re: f64,
    pub delta_im: f64,
}

impl DiscrepancyRow {
    pub fn delta(&self, c: Component) -> f64 {
        match c {
            Component::Re => self.delta_re,
            Component::Im => self.delta_im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxLocation {
    pub value: f64,
    pub x: f64,
    pub y: f64,
}

/// Largest delta over `rows`; the first row wins ties.
fn max_of<'a>(rows: impl IntoIterator<Item = &'a DiscrepancyRow>, c: Component) -> MaxLocation {
    let mut best = MaxLocation {
        value: f64::NEG_INFINITY,
        x: f64::NAN,
        y: f64::NAN,
    };
    for row in rows {
        let d = row.delta(c);
        if d > best.value {
            best = MaxLocation {
                value: d,
                x: row.x,
                y: row.y,
            };
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    /// y-major, then x ascending.
    pub rows: Vec<DiscrepancyRow>,
    pub max_re: MaxLocation,
    pub max_im: MaxLocation,
}

impl DiscrepancyReport {
    pub fn from_rows(rows: Vec<DiscrepancyRow>) -> Self {
        let max_re = max_of(&rows, Component::Re);
        let max_im = max_of(&rows, Component::Im);
        DiscrepancyReport {
            rows,
            max_re,
            max_im,
        }
    }

    pub fn max(&self, c: Component) -> MaxLocation {
        match c {
            Component::Re => self.max_re,
            Component::Im => self.max_im,
        }
    }

    /// Maximum delta at each distinct `y`, in row order.
    pub fn per_y_max(&self, c: Component) -> Vec<MaxLocation> {
        self.rows
            .chunk_by(|a, b| a.y == b.y)
            .map(|chunk| max_of(chunk, c))
            .collect()
    }
}

fn evaluate_row(
    x: f64,
    y: f64,
    p: PseudoVoigtParams,
    cfg: &QuadratureConfig,
) -> Result<DiscrepancyRow> {
    let arg = ComplexArgument::new(x, y)?;
    let approx = faddeeva_approx(arg, p);
    let k_ref = k_reference(arg, cfg)?;
    let l_ref = l_reference(arg, cfg)?;
    Ok(DiscrepancyRow {
        x,
        y,
        k_approx: approx.re,
        l_approx: approx.im,
        k_ref,
        l_ref,
        delta_re: (k_ref - approx.re).abs(),
        delta_im: (l_ref - approx.im).abs(),
    })
}

/// Evaluates approximation and reference at every grid point.
///
/// Points are computed in parallel; rows come back y-major, x ascending.
pub fn scan(
    grid: &ScanGrid,
    p: PseudoVoigtParams,
    cfg: &QuadratureConfig,
) -> Result<DiscrepancyReport> {
    cfg.validate()?;
    let xs: Vec<f64> = grid.x_values().collect();
    let points: Vec<(f64, f64)> = grid
        .y_values
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(x, y)| evaluate_row(x, y, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscrepancyReport::from_rows(rows))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub t: f64,
    /// `e^(-5.5|t|)`
    pub f0: f64,
    /// `5.5|t| e^(-2.75|t|)`
    pub f1: f64,
    pub sum: f64,
    /// `e^(-t^2)`
    pub exact: f64,
    /// `exact - sum`
    pub epsilon: f64,
}

/// Per-term values of the standard two-term expansion on a uniform `t` grid.
pub fn kernel_profile(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<KernelRow>> {
    if !t_min.is_finite() || !t_max.is_finite() || t_min >= t_max {
        return Err(Error::domain(format!(
            "t range must be finite with t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::domain(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let standard = KernelExpansion::standard();
    let [first, second] = standard.terms() else {
        unreachable!("standard expansion has two terms")
    };
    Ok((0..steps)
        .map(|i| {
            let t = lerp_node(t_min, t_max, i, steps);
            let a = t.abs();
            let f0 = first.alpha * (-first.beta * a).exp();
            let f1 = second.alpha * a * (-second.beta * a).exp();
            let sum = f0 + f1;
            let exact = (-t * t).exp();
            KernelRow {
                t,
                f0,
                f1,
                sum,
                exact,
                epsilon: exact - sum,
            }
        })
        .collect())
}

fn delta_at(
    x: f64,
    y: f64,
    c: Component,
    p: PseudoVoigtParams,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let arg = ComplexArgument::new(x, y)?;
    Ok(match c {
        Component::Re => (k_reference(arg, cfg)? - voigt_k_approx(arg, p)).abs(),
        Component::Im => (l_reference(arg, cfg)? - voigt_l_approx(arg, p)).abs(),
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const REFINE_X_TOL: f64 = 1e-9;

/// Largest `delta` of one component over `x` in `[0, x_max]` at fixed `y`.
///
/// A coarse scan of `coarse_steps` points picks the best node; golden-section
/// search over its two neighbouring cells then refines the location. The
/// returned value is never below the coarse maximum.
pub fn find_max_discrepancy(
    p: PseudoVoigtParams,
    cfg: &QuadratureConfig,
    y: f64,
    x_max: f64,
    coarse_steps: usize,
    c: Component,
) -> Result<MaxLocation> {
    cfg.validate()?;
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::domain(format!(
            "y must be finite and non-negative, got {y}"
        )));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::domain(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    if coarse_steps < 2 {
        return Err(Error::domain(format!(
            "coarse_steps must be at least 2, got {coarse_steps}"
        )));
    }

    let xs: Vec<f64> = (0..coarse_steps)
        .map(|i| lerp_node(0.0, x_max, i, coarse_steps))
        .collect();
    let deltas = xs
        .par_iter()
        .map(|&x| delta_at(x, y, c, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &d) in deltas.iter().enumerate() {
        if d > deltas[best] {
            best = i;
        }
    }
    let coarse = MaxLocation {
        value: deltas[best],
        x: xs[best],
        y,
    };

    let mut lo = xs[best.saturating_sub(1)];
    let mut hi = xs[(best + 1).min(coarse_steps - 1)];
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = delta_at(x1, y, c, p, cfg)?;
    let mut f2 = delta_at(x2, y, c, p, cfg)?;
    while hi - lo > REFINE_X_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = delta_at(x1, y, c, p, cfg)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = delta_at(x2, y, c, p, cfg)?;
        }
    }
    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    Ok(if value >= coarse.value {
        MaxLocation { value, x, y }
    } else {
        coarse
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lerp_is_symmetric_and_inclusive() {
        let n = 100_001;
        assert_eq!(lerp_node(-5.0, 5.0, 0, n), -5.0);
        assert_eq!(lerp_node(-5.0, 5.0, n - 1, n), 5.0);
        assert_eq!(lerp_node(-5.0, 5.0, n / 2, n), 0.0);
        for i in [1, 17, 4321, 49_999] {
            assert_eq!(
                lerp_node(-5.0, 5.0, i, n),
                -lerp_node(-5.0, 5.0, n - 1 - i, n)
            );
        }
    }

    #[test]
    fn grid_validation() {
        assert!(ScanGrid::new(1.0, 1.0, 10, vec![0.0]).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 1, vec![0.0]).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 2, vec![]).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 2, vec![-0.5]).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 2, vec![0.5, 0.5]).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 2, vec![0.5, 0.1]).is_err());
        let g = ScanGrid::standard();
        assert_eq!(g.len(), 4004);
        let xs: Vec<f64> = g.x_values().collect();
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[1000], 10.0);
        assert_eq!(xs[500], 5.0);
    }

    #[test]
    fn small_scan_layout() {
        let grid = ScanGrid::new(0.0, 2.0, 3, vec![0.0, 1.0]).unwrap();
        let report = scan(
            &grid,
            PseudoVoigtParams::default(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        let coords: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.x, r.y)).collect();
        assert_eq!(
            coords,
            vec![
                (0.0, 0.0),
                (1.0, 0.0),
                (2.0, 0.0),
                (0.0, 1.0),
                (1.0, 1.0),
                (2.0, 1.0)
            ]
        );
        for row in &report.rows {
            assert_eq!(row.delta_re, (row.k_ref - row.k_approx).abs());
            assert_eq!(row.delta_im, (row.l_ref - row.l_approx).abs());
        }
        assert_eq!(report.per_y_max(Component::Re).len(), 2);
        assert_eq!(report, DiscrepancyReport::from_rows(report.rows.clone()));
    }

    #[test]
    fn kernel_profile_origin_row() {
        let rows = kernel_profile(-5.0, 5.0, 11).unwrap();
        let origin = rows[5];
        assert_eq!(
            (
                origin.t,
                origin.f0,
                origin.f1,
                origin.sum,
                origin.exact,
                origin.epsilon
            ),
            (0.0, 1.0, 0.0, 1.0, 1.0, 0.0)
        );
        for (a, b) in rows.iter().zip(rows.iter().rev()) {
            assert_eq!(a.t, -b.t);
            assert_eq!((a.f0, a.f1, a.sum, a.exact), (b.f0, b.f1, b.sum, b.exact));
        }
        assert!(kernel_profile(1.0, 0.0, 10).is_err());
        assert!(kernel_profile(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn max_search_argument_checks() {
        let p = PseudoVoigtParams::default();
        let cfg = QuadratureConfig::default();
        assert!(find_max_discrepancy(p, &cfg, -1.0, 10.0, 11, Component::Re).is_err());
        assert!(find_max_discrepancy(p, &cfg, 0.0, 0.0, 11, Component::Re).is_err());
        assert!(find_max_discrepancy(p, &cfg, 0.0, 10.0, 1, Component::Re).is_err());
    }
}
