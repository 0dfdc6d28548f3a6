use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    /// Sample index of the extreme value.
    pub index: usize,
    /// Location, refined by a parabola through the three nearest samples
    /// for interior extrema.
    pub t: f64,
    pub value: f64,
    pub boundary: bool,
}

/// Local extrema of `ys` sampled at increasing `ts`, end points included.
/// Differences below `1e-9` of the total range count as ties.
pub fn find_extrema(ts: &[f64], ys: &[f64]) -> Vec<Extremum> {
    let n = ts.len().min(ys.len());
    if n < 2 {
        return Vec::new();
    }
    let (lo, hi) = ys[..n].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(*y), b.max(*y)));
    let tol = 1e-9 * (hi - lo);
    if !(hi - lo > 0.0) {
        return Vec::new();
    }
    let above = |a: f64, b: f64| a > b + tol;
    let mut out = Vec::new();
    let mut push = |kind, index: usize, t, boundary| out.push(Extremum { kind, index, t, value: ys[index], boundary });

    if above(ys[0], ys[1]) {
        push(ExtremumKind::Max, 0, ts[0], true);
    } else if above(ys[1], ys[0]) {
        push(ExtremumKind::Min, 0, ts[0], true);
    }
    for i in 1..n - 1 {
        let (l, c, r) = (ys[i - 1], ys[i], ys[i + 1]);
        let kind = if c >= l && c >= r && (above(c, l) || above(c, r)) {
            ExtremumKind::Max
        } else if c <= l && c <= r && (above(l, c) || above(r, c)) {
            ExtremumKind::Min
        } else {
            continue;
        };
        // keep only the first sample of a flat-topped run
        if i >= 2 && !above(c, l) && !above(l, c) {
            continue;
        }
        let curvature = l - 2.0 * c + r;
        let shift = if curvature != 0.0 { 0.5 * (l - r) / curvature } else { 0.0 };
        let (h_left, h_right) = (ts[i] - ts[i - 1], ts[i + 1] - ts[i]);
        let t = if shift < 0.0 { ts[i] + shift * h_left } else { ts[i] + shift * h_right };
        push(kind, i, t, false);
    }
    let last = n - 1;
    if above(ys[last], ys[last - 1]) {
        push(ExtremumKind::Max, last, ts[last], true);
    } else if above(ys[last - 1], ys[last]) {
        push(ExtremumKind::Min, last, ts[last], true);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_extrema() {
        let ts: Vec<f64> = (0..65).map(|j| j as f64 / 64.0).collect();
        let ys: Vec<f64> = ts.iter().map(|t| (4.0 * std::f64::consts::PI * t).cos()).collect();
        let ex = find_extrema(&ts, &ys);
        let kinds: Vec<_> = ex.iter().map(|e| (e.kind, e.t)).collect();
        assert_eq!(ex.len(), 5, "{kinds:?}");
        assert_eq!(ex[0].kind, ExtremumKind::Max);
        assert!(ex[0].boundary && ex[4].boundary);
        assert_eq!(ex[1].kind, ExtremumKind::Min);
        assert!((ex[1].t - 0.25).abs() < 1e-3);
        assert!((ex[3].t - 0.75).abs() < 1e-3);
    }

    #[test]
    fn off_grid_peak_is_refined() {
        let ts: Vec<f64> = (0..33).map(|j| j as f64 / 32.0).collect();
        let ys: Vec<f64> = ts.iter().map(|t| -(t - 0.3).powi(2)).collect();
        let ex = find_extrema(&ts, &ys);
        let peak = ex.iter().find(|e| !e.boundary).unwrap();
        assert!((peak.t - 0.3).abs() < 1e-12);
    }

    #[test]
    fn flat_and_short_series() {
        assert!(find_extrema(&[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]).is_empty());
        assert!(find_extrema(&[0.0], &[1.0]).is_empty());
    }
}
