use crate::{ExperimentError, ScanRecord, C64};

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64], min_points: usize) -> Result<Fit, ExperimentError> {
    if xs.len() != ys.len() {
        return Err(ExperimentError::Domain(format!("{} abscissae for {} ordinates", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < min_points.max(2) {
        return Err(ExperimentError::TooFewPoints { needed: min_points.max(2), got: n });
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Domain("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(Fit { slope, intercept, r2, points: n })
}

pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
    Any,
}

impl Parity {
    pub fn admits(self, length: usize) -> bool {
        match self {
            Parity::Odd => length % 2 == 1,
            Parity::Even => length % 2 == 0,
            Parity::Any => true,
        }
    }
}

/// `median(S) − min(S)` over the successful records of one parity, with the argmin.
pub fn dip_depth(records: &[ScanRecord], parity: Parity) -> Option<(f64, usize)> {
    let pts: Vec<(usize, f64)> =
        records.iter().filter(|r| parity.admits(r.length)).filter_map(|r| r.s.map(|s| (r.length, s))).collect();
    let med = median(&pts.iter().map(|p| p.1).collect::<Vec<_>>())?;
    let (l, s) = pts.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1))?;
    Some((med - s, l))
}

/// Symmetric Hausdorff distance between two finite point sets in the complex plane.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let directed = |from: &[C64], to: &[C64]| {
        from.iter().map(|x| to.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0_f64, f64::max)
    };
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    directed(a, b).max(directed(b, a))
}

/// First abscissa after the largest jump `|y_{i+1} − y_i|` of a sampled sequence.
pub fn jump_kink(points: &[(usize, f64)]) -> Option<usize> {
    points.windows(2).map(|w| ((w[1].1 - w[0].1).abs(), w[1].0)).max_by(|a, b| a.0.total_cmp(&b.0)).map(|(_, l)| l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0], 4).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r2 - 1.0).abs() < 1e-14);
        assert!(matches!(linear_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 4), Err(ExperimentError::TooFewPoints { .. })));
    }

    #[test]
    fn medians_and_kinks() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[f64::NAN]), None);
        assert_eq!(jump_kink(&[(1, 0.0), (3, 0.1), (5, 0.9), (7, 1.0)]), Some(5));
    }

    #[test]
    fn hausdorff_is_symmetric() {
        let a = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let b = [C64::new(0.0, 0.0)];
        assert_eq!(hausdorff(&a, &b), 1.0);
        assert_eq!(hausdorff(&b, &a), 1.0);
    }
}
