/// Expected mutual information of two labelings with the given class sizes
/// under the hypergeometric (fixed-marginals permutation) model.
pub fn expected_mutual_information(row_sums: &[u64], col_sums: &[u64]) -> f64 {
    let n: u64 = row_sums.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let ln_fact = log_factorials(n as usize);
    let lf = |x: u64| ln_fact[x as usize];
    let nf = n as f64;
    let mut emi = 0.0;
    for &a in row_sums.iter().filter(|&&a| a > 0) {
        for &b in col_sums.iter().filter(|&&b| b > 0) {
            let fixed = lf(a) + lf(b) + lf(n - a) + lf(n - b) - lf(n);
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            for nij in lo..=hi {
                let x = nij as f64;
                let log_p = fixed - lf(nij) - lf(a - nij) - lf(b - nij) - lf(n + nij - a - b);
                emi += x / nf * (nf * x / (a as f64 * b as f64)).ln() * log_p.exp();
            }
        }
    }
    emi
}

fn log_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_class_has_no_information() {
        assert_eq!(expected_mutual_information(&[10], &[4, 6]), 0.0);
    }

    #[test]
    fn forced_table_equals_observed_information() {
        // all singletons: every permutation gives MI = ln n
        let emi = expected_mutual_information(&[1; 6], &[1; 6]);
        assert!((emi - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_by_enumeration() {
        // a = b = [2, 2], n = 4: n11 is 0, 1 or 2 with probabilities 1/6, 4/6, 1/6
        let mi = |n11: f64| {
            let cells = [n11, 2.0 - n11, 2.0 - n11, n11];
            cells
                .iter()
                .filter(|&&c| c > 0.0)
                .map(|&c| c / 4.0 * (4.0 * c / 4.0).ln())
                .sum::<f64>()
        };
        let expected = (mi(0.0) + 4.0 * mi(1.0) + mi(2.0)) / 6.0;
        let emi = expected_mutual_information(&[2, 2], &[2, 2]);
        assert!((emi - expected).abs() < 1e-14, "{emi} vs {expected}");
    }
}
