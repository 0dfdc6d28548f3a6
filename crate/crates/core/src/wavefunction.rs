//! Piecewise sums of complex exponentials.
//!
//! Every eigenfunction in this crate is, on each region of constant
//! potential, a finite sum `Σ c e^{s x}` with complex rate `s` (oscillating,
//! growing or decaying). Storing them in that form gives exact derivatives
//! and exact Fourier transforms: each term integrates against `e^{-ikx}` in
//! closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coef: Complex64,
    pub rate: Complex64,
}

impl ExpTerm {
    pub fn new(coef: Complex64, rate: Complex64) -> Self {
        ExpTerm { coef, rate }
    }
}

/// One region `[lo, hi]`; either end may be infinite when the terms decay.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<ExpTerm>,
}

impl Segment {
    fn value(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.coef * (t.rate * x).exp()).sum()
    }

    fn derivative(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.coef * t.rate * (t.rate * x).exp()).sum()
    }

    fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A function that is zero outside its segments. Segments are ordered and
/// share end points.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseExp {
    segments: Vec<Segment>,
    // c·e^{s·lo} and c·e^{s·hi} per term, in segment order; zero at infinite ends
    edges: Vec<[Complex64; 2]>,
}

impl PiecewiseExp {
    pub fn new(segments: Vec<Segment>) -> Self {
        debug_assert!(segments.windows(2).all(|w| w[0].hi == w[1].lo));
        let edge = |t: &ExpTerm, x: f64| {
            if x.is_finite() {
                t.coef * (t.rate * x).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let edges = segments
            .iter()
            .flat_map(|s| s.terms.iter().map(move |t| [edge(t, s.lo), edge(t, s.hi)]))
            .collect();
        PiecewiseExp { segments, edges }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn segment_at(&self, x: f64) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(x))
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.segment_at(x).map_or(Complex64::new(0.0, 0.0), |s| s.value(x))
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        self.segment_at(x).map_or(Complex64::new(0.0, 0.0), |s| s.derivative(x))
    }

    /// Value and derivative at `x` using the formula of segment `index`,
    /// regardless of whether `x` lies inside it. Used to compare one-sided
    /// limits at region boundaries.
    pub fn one_sided(&self, index: usize, x: f64) -> (Complex64, Complex64) {
        let s = &self.segments[index];
        (s.value(x), s.derivative(x))
    }

    /// Finite region boundaries, including the ends of a bounded support.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .segments
            .iter()
            .flat_map(|s| [s.lo, s.hi])
            .filter(|x| x.is_finite())
            .collect();
        out.dedup();
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                lo: s.lo,
                hi: s.hi,
                terms: s.terms.iter().map(|t| ExpTerm::new(t.coef * factor, t.rate)).collect(),
            })
            .collect();
        PiecewiseExp::new(segments)
    }

    /// `(2π)^{-1/2} ∫ u(x) e^{-ikx} dx`, evaluated segment by segment.
    pub fn fourier(&self, k: f64) -> Complex64 {
        self.transform(k, false).0
    }

    /// Fourier transform and its `k`-derivative, `(2π)^{-1/2} ∫ (-ix) u e^{-ikx} dx`.
    pub fn fourier_with_derivative(&self, k: f64) -> (Complex64, Complex64) {
        self.transform(k, true)
    }

    fn transform(&self, k: f64, with_derivative: bool) -> (Complex64, Complex64) {
        let shift = Complex64::new(0.0, -k);
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        let mut edges = self.edges.iter();
        // e^{-ikx} at the shared end point carries over to the next segment
        let mut phase_lo = phase(k, self.segments.first().map_or(0.0, |s| s.lo));
        for s in &self.segments {
            let phase_hi = phase(k, s.hi);
            let h = 0.5 * (s.hi - s.lo);
            for t in &s.terms {
                let [c_lo, c_hi] = *edges.next().unwrap();
                let z = t.rate + shift;
                if s.lo.is_finite() && s.hi.is_finite() && (z * h).norm() < 1.0 {
                    // short panel: the difference form would cancel
                    let (e0, e1) = exp_integral(z, s.lo, s.hi);
                    f += t.coef * e0;
                    df += t.coef * e1;
                    continue;
                }
                let e_lo = c_lo * phase_lo;
                let e_hi = c_hi * phase_hi;
                let i0 = (e_hi - e_lo) / z;
                f += i0;
                if with_derivative {
                    let x_lo = if s.lo.is_finite() { e_lo * s.lo } else { e_lo };
                    let x_hi = if s.hi.is_finite() { e_hi * s.hi } else { e_hi };
                    df += (x_hi - x_lo - i0) / z;
                }
            }
            phase_lo = phase_hi;
        }
        let norm = (2.0 * PI).sqrt();
        (f / norm, Complex64::new(0.0, -1.0) * df / norm)
    }
}

fn phase(k: f64, x: f64) -> Complex64 {
    if x.is_finite() {
        let (s, c) = (-k * x).sin_cos();
        Complex64::new(c, s)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// `(∫ e^{zx} dx, ∫ x e^{zx} dx)` over `[a, b]`; infinite ends require the
/// integrand to decay there.
fn exp_integral(z: Complex64, a: f64, b: f64) -> (Complex64, Complex64) {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let m = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            let w = z * h;
            let pre = (z * m).exp() * (2.0 * h);
            (pre * shc(w), pre * (shc(w) * m + shc_prime(w) * h))
        }
        (false, true) => {
            debug_assert!(z.re > 0.0);
            let e = (z * b).exp();
            (e / z, e * (b / z - 1.0 / (z * z)))
        }
        (true, false) => {
            debug_assert!(z.re < 0.0);
            let e = (z * a).exp();
            (-e / z, -e * (a / z - 1.0 / (z * z)))
        }
        (false, false) => panic!("segment cannot be infinite at both ends"),
    }
}

/// `sinh(w) / w`.
fn shc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        let w2 = w * w;
        1.0 + w2 / 6.0 * (1.0 + w2 / 20.0 * (1.0 + w2 / 42.0))
    } else {
        w.sinh() / w
    }
}

/// `d/dw [sinh(w) / w] = (w cosh w - sinh w) / w²`.
fn shc_prime(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        // Σ_{n≥1} 2n w^{2n-1} / (2n+1)!
        let w2 = w * w;
        let mut term = w / 3.0;
        let mut acc = term;
        for n in 2..=7 {
            let n = n as f64;
            // ratio of consecutive terms: [2n / (2n+1)!] / [(2n-2) / (2n-1)!]
            term = term * w2 * (2.0 * n) / ((2.0 * n - 2.0) * (2.0 * n) * (2.0 * n + 1.0));
            acc += term;
        }
        acc
    } else {
        (w * w.cosh() - w.sinh()) / (w * w)
    }
}
