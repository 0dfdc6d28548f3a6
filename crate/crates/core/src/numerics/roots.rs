use super::{NumericsError, Result};

/// Hard iteration cap for [`find_root`].
pub const MAX_ROOT_ITERATIONS: usize = 200;

/// An interval `[lo, hi]` on which a function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and validates the sign change.
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let bracket = Bracket { lo, hi, f_lo: f(lo), f_hi: f(hi) };
        bracket.validate()?;
        Ok(bracket)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.lo < self.hi
            && self.f_lo.is_finite()
            && self.f_hi.is_finite()
            && self.f_lo * self.f_hi <= 0.0;
        if ok {
            Ok(())
        } else {
            Err(NumericsError::NoSignChange {
                lo: self.lo,
                hi: self.hi,
                f_lo: self.f_lo,
                f_hi: self.f_hi,
            })
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Brent's method: inverse quadratic / secant steps safeguarded by bisection.
///
/// Terminates once the enclosing interval is narrower than `tol` (floored at a
/// few ulps of the current iterate). A forced bisection is inserted whenever
/// two consecutive interpolation steps fail to halve the bracket, which keeps
/// the iteration count within that of plain bisection plus a small constant.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    bracket.validate()?;
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if bracket.f_lo == 0.0 {
        return Ok(bracket.lo);
    }
    if bracket.f_hi == 0.0 {
        return Ok(bracket.hi);
    }

    let (mut a, mut fa) = (bracket.lo, bracket.f_lo);
    let (mut b, mut fb) = (bracket.hi, bracket.f_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let mut widths = [f64::INFINITY; 2];

    for iter in 0..MAX_ROOT_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        let tol_eff = tol.max(4.0 * f64::EPSILON * b.abs());
        if width <= tol_eff || fb == 0.0 {
            return Ok(b);
        }
        let xm = 0.5 * (c - b);
        let tol1 = 0.5 * tol_eff;
        let stalled = iter >= 2 && width > 0.5 * widths[0];
        widths = [widths[1], width];

        if !stalled && e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(NumericsError::InvalidArgument(format!("function is not finite at {b}")));
        }
    }
    Err(NumericsError::MaxIterations(MAX_ROOT_ITERATIONS))
}
