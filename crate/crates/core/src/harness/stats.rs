use crate::{Error, Result};

/// Misclassified fraction.
pub fn error_rate(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgument("no predictions".into()));
    }
    let wrong = predictions.iter().zip(labels).filter(|(p, l)| p != l).count();
    Ok(wrong as f64 / labels.len() as f64)
}

/// Two-tailed sign test: `2 * P(X >= max(wins, losses))` for
/// `X ~ Binomial(wins + losses, 1/2)`, capped at 1.
pub fn sign_test(wins: u64, losses: u64) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    let k = wins.max(losses);
    let ln2 = std::f64::consts::LN_2;
    // ln C(n, i) for i = k..=n, built downward from C(n, n) = 1.
    let mut ln_c = 0.0;
    let mut tail = 0.0;
    for i in (k..=n).rev() {
        tail += (ln_c - n as f64 * ln2).exp();
        ln_c += (i as f64).ln() - ((n - i + 1) as f64).ln();
    }
    (2.0 * tail).min(1.0)
}

/// Wins, losses and ties of `method` against `baseline` (lower is better).
pub fn sign_counts(method: &[f64], baseline: &[f64]) -> (u64, u64, u64) {
    let mut out = (0, 0, 0);
    for (m, b) in method.iter().zip(baseline) {
        if m < b {
            out.0 += 1;
        } else if m > b {
            out.1 += 1;
        } else {
            out.2 += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }
}

/// Pearson correlation between every pair of named series.
pub fn correlation_matrix(series: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix> {
    let Some((_, first)) = series.first() else {
        return Err(Error::InvalidArgument("no series".into()));
    };
    let n = first.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 observations, got {n}")));
    }
    let mut centred = Vec::with_capacity(series.len());
    for (name, xs) in series {
        if xs.len() != n {
            return Err(Error::Dimension(format!("'{name}' has {} values, expected {n}", xs.len())));
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let c: Vec<f64> = xs.iter().map(|x| x - mean).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm.is_nan() || norm == 0.0 {
            return Err(Error::InvalidArgument(format!("'{name}' has zero variance")));
        }
        centred.push((c, norm));
    }
    let k = series.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in i + 1..k {
            let (a, na) = &centred[i];
            let (b, nb) = &centred[j];
            let r = (a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb)).clamp(-1.0, 1.0);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: series.iter().map(|s| s.0.clone()).collect(),
        values,
    })
}

/// Mean and population standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
