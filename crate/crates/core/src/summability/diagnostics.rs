use super::SummabilityRow;

/// Per-row scalars entering the hypotheses on the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostics {
    pub n: usize,
    /// `(n+1) a_{n,0}`
    pub head_weight: f64,
    /// `(n+1) a_{n,n}`
    pub tail_weight: f64,
    /// `(n+1) max{a_{n,0}, a_{n,r}}` with `r = floor(n/2)`
    pub mid_weight: f64,
    /// `Σ_{k=0}^{n-1} |a_{n,k} − a_{n,k+1}|`
    pub var_rows: f64,
    /// `Σ_{k=0}^{n-1} |A_{n,k} − A_{n,k+1}|`
    pub var_means: f64,
    means: Vec<f64>,
}

impl RowDiagnostics {
    /// Running mean `A_{n,m} = (1/(m+1)) Σ_{k≤m} a_{n,k}`.
    pub fn mean_row(&self, m: usize) -> f64 {
        self.means[m]
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }
}

pub(crate) fn running_means(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            acc += v;
            acc / (m + 1) as f64
        })
        .collect()
}

fn adjacent_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[0] - w[1]).abs()).sum()
}

pub fn row_diagnostics(row: &SummabilityRow) -> RowDiagnostics {
    let n = row.n();
    let scale = (n + 1) as f64;
    let a = row.weights();
    let means = running_means(a);
    RowDiagnostics {
        n,
        head_weight: scale * a[0],
        tail_weight: scale * a[n],
        mid_weight: scale * a[0].max(a[n / 2]),
        var_rows: adjacent_variation(a),
        var_means: adjacent_variation(&means),
        means,
    }
}
