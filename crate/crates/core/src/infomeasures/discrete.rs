use super::{MeasureError, Result};

/// Logarithm base for discrete entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    E,
    Two,
}

impl Base {
    fn ln_factor(self) -> f64 {
        match self {
            Base::E => 1.0,
            Base::Two => std::f64::consts::LN_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    p: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(MeasureError::InvalidDistribution("empty".into()));
        }
        if p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(MeasureError::InvalidDistribution("probabilities must be finite and non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(MeasureError::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(DiscreteDist { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MeasureError::InvalidDistribution("empty".into()));
        }
        Ok(DiscreteDist { p: vec![1.0 / n as f64; n] })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// `-Σ p log p` with `0 log 0 = 0`.
pub fn shannon_discrete(d: &DiscreteDist, base: Base) -> f64 {
    let s: f64 = d.p.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln()).sum();
    s / base.ln_factor()
}

/// `Σ_{i=1}^{N-1} (p_{i+1} - p_i)² / p_i`.
pub fn fisher_discrete(d: &DiscreteDist) -> Result<f64> {
    let mut acc = 0.0;
    for (i, w) in d.p.windows(2).enumerate() {
        let diff = w[1] - w[0];
        if w[0] == 0.0 {
            if diff != 0.0 {
                return Err(MeasureError::ZeroProbabilityTerm { index: i });
            }
            continue;
        }
        acc += diff * diff / w[0];
    }
    Ok(acc)
}

/// `Σ (p_i - 1/N)²`.
pub fn disequilibrium_discrete(d: &DiscreteDist) -> f64 {
    let u = 1.0 / d.len() as f64;
    d.p.iter().map(|p| (p - u).powi(2)).sum()
}

/// `ln(Σ p^a) / (1 - a)` in nats.
pub fn renyi_discrete(d: &DiscreteDist, a: f64) -> Result<f64> {
    if !(a > 0.0) || a == 1.0 || !a.is_finite() {
        return Err(MeasureError::InvalidOrder(a));
    }
    let sum: f64 = d.p.iter().filter(|p| **p > 0.0).map(|p| p.powf(a)).sum();
    Ok(sum.ln() / (1.0 - a))
}

/// `C = S·D` with `S` in nats.
pub fn lmc_discrete(d: &DiscreteDist) -> f64 {
    shannon_discrete(d, Base::E) * disequilibrium_discrete(d)
}

/// Second-order form `C ≈ (2/N) S (S_max - S)`, valid near equiprobability.
pub fn lmc_near_equilibrium(d: &DiscreteDist) -> f64 {
    let n = d.len() as f64;
    let s = shannon_discrete(d, Base::E);
    2.0 / n * s * (n.ln() - s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(p: &[f64]) -> DiscreteDist {
        DiscreteDist::new(p.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_discrete(&DiscreteDist::uniform(8).unwrap(), Base::Two) - 3.0).abs() < 1e-14);
        assert_eq!(shannon_discrete(&dist(&[0.0, 1.0, 0.0]), Base::E), 0.0);
        assert!((shannon_discrete(&dist(&[0.5, 0.25, 0.25]), Base::Two) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn fisher_examples() {
        assert_eq!(fisher_discrete(&DiscreteDist::uniform(5).unwrap()).unwrap(), 0.0);
        assert_eq!(fisher_discrete(&dist(&[0.5, 0.5])).unwrap(), 0.0);
        assert!((fisher_discrete(&dist(&[0.25, 0.75])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fisher_discrete(&dist(&[0.0, 1.0])), Err(MeasureError::ZeroProbabilityTerm { index: 0 }));
        assert_eq!(fisher_discrete(&dist(&[1.0, 0.0, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn renyi_and_lmc() {
        let u = DiscreteDist::uniform(6).unwrap();
        for a in [0.5, 2.0, 3.0] {
            assert!((renyi_discrete(&u, a).unwrap() - 6f64.ln()).abs() < 1e-14);
        }
        let p = 0.3;
        let two = dist(&[p, 1.0 - p]);
        assert!((renyi_discrete(&two, 2.0).unwrap() + (p * p + (1.0 - p) * (1.0 - p)).ln()).abs() < 1e-15);
        assert!(matches!(renyi_discrete(&two, 1.0), Err(MeasureError::InvalidOrder(_))));
        assert_eq!(disequilibrium_discrete(&u), 0.0);
        assert_eq!(lmc_discrete(&u), 0.0);
        assert_eq!(lmc_discrete(&dist(&[1.0, 0.0])), 0.0);
        // C = H1 (e^{-H2} - 1/N)
        let q = dist(&[0.1, 0.2, 0.3, 0.4]);
        let h2 = renyi_discrete(&q, 2.0).unwrap();
        let c = shannon_discrete(&q, Base::E) * ((-h2).exp() - 0.25);
        assert!((lmc_discrete(&q) - c).abs() < 1e-15);
    }

    #[test]
    fn near_equilibrium_expansion() {
        let n = 10;
        let eps = 1e-3;
        let p: Vec<f64> = (0..n).map(|i| 0.1 + if i % 2 == 0 { eps } else { -eps }).collect();
        let d = dist(&p);
        let exact = lmc_discrete(&d);
        let approx = lmc_near_equilibrium(&d);
        assert!((exact - approx).abs() < 1e-3 * exact, "{exact} vs {approx}");
    }

    #[test]
    fn invalid_distributions() {
        assert!(DiscreteDist::new(vec![]).is_err());
        assert!(DiscreteDist::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDist::new(vec![-0.1, 1.1]).is_err());
    }

    proptest! {
        #[test]
        fn shannon_bounded_by_log_n(raw in proptest::collection::vec(0.0f64..1.0, 2..40)) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let mut p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let drift: f64 = 1.0 - p.iter().sum::<f64>();
            p[0] += drift;
            prop_assume!(p[0] >= 0.0);
            let d = DiscreteDist::new(p).unwrap();
            let s = shannon_discrete(&d, Base::E);
            prop_assert!(s >= -1e-15 && s <= (d.len() as f64).ln() + 1e-12);
            prop_assert!(renyi_discrete(&d, 2.0).unwrap() <= s + 1e-12);
        }
    }
}
