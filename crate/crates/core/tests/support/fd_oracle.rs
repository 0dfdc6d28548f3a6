//! Independent eigenvalue oracle for the double well: second-order finite
//! differences on a uniform grid with Dirichlet ends, the potential averaged
//! over each cell, and eigenvalues located by Sturm-sequence bisection.

/// Exact mean of the double-well potential (eV) over `[a, b]` (Å).
pub fn cell_average(v0: f64, v1: f64, l0: f64, l1: f64, a: f64, b: f64) -> f64 {
    let overlap = |lo: f64, hi: f64| (b.min(hi) - a.max(lo)).max(0.0);
    let inner = overlap(-l1, l1);
    let wells = overlap(-l0, l0) - inner;
    -(v0 * wells + v1 * inner) / (b - a)
}

pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
}

impl Tridiagonal {
    /// `H = -c d²/dx² + V` on `n` interior points of `[lo, hi]`, with
    /// `c = ħ²/2m` in eV Å².
    pub fn double_well(hbar2_2m: f64, params: [f64; 4], lo: f64, hi: f64, n: usize) -> Self {
        let [v0, v1, l0, l1] = params;
        let h = (hi - lo) / (n + 1) as f64;
        let t = hbar2_2m / (h * h);
        let diag = (1..=n)
            .map(|i| {
                let x = lo + i as f64 * h;
                2.0 * t + cell_average(v0, v1, l0, l1, x - 0.5 * h, x + 0.5 * h)
            })
            .collect();
        Tridiagonal { diag, off: -t }
    }

    /// Number of eigenvalues below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let mut q = 1.0;
        let mut count = 0;
        for (i, d) in self.diag.iter().enumerate() {
            q = d - lambda - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + self.off.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th eigenvalue (0-based) inside `[lo, hi]`, to `tol`.
    pub fn eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        assert!(self.count_below(lo) <= k && self.count_below(hi) > k, "eigenvalue {k} not bracketed");
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Lowest `count` levels (eV) of the double well on `[-half_width, half_width]` Å.
pub fn fd_levels(hbar2_2m: f64, params: [f64; 4], half_width: f64, n: usize, count: usize) -> Vec<f64> {
    let m = Tridiagonal::double_well(hbar2_2m, params, -half_width, half_width, n);
    let floor = -params[0] - 1.0;
    (0..count).map(|k| m.eigenvalue(k, floor, 0.0, 1e-13)).collect()
}
