use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::{ConfigSpace, CountTable, PriorSpec, ScoringError};

/// `ln Σ exp(v)`, shifted by the maximum. Empty input or all `-inf` gives
/// `-inf`.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Log supervised marginal likelihood `ln P(y^N | x^N, M)` of the diagnostic
/// model whose relevant predictors are the table's subset:
///
/// ```text
/// Σ_j [ lnΓ(N'_j) − lnΓ(N'_j + N_j) + Σ_k ( lnΓ(N'_jk + N_jk) − lnΓ(N'_jk) ) ]
/// ```
///
/// Only stored configurations are visited; an unobserved configuration
/// contributes exactly zero.
pub fn log_sml(table: &CountTable, prior: &PriorSpec) -> Result<f64, ScoringError> {
    log_sml_counts(table.iter().map(|(_, c)| c), &table.space(), table.class_arity(), prior)
}

/// [`log_sml`] over bare per-configuration count rows. Each row holds
/// `class_arity` counts; `space` is the full configuration space the rows
/// were drawn from.
pub fn log_sml_counts<'a, I>(
    rows: I,
    space: &ConfigSpace,
    class_arity: u32,
    prior: &PriorSpec,
) -> Result<f64, ScoringError>
where
    I: IntoIterator<Item = &'a [u64]>,
{
    let cell = prior.cell(space, class_arity)?;
    let config_prior = cell * f64::from(class_arity);
    let ln_gamma_cell = ln_gamma(cell);
    let ln_gamma_config = ln_gamma(config_prior);
    let mut total = 0.0;
    for counts in rows {
        if counts.len() != class_arity as usize {
            return Err(ScoringError::InvalidTable(format!(
                "count row has {} cells, expected {class_arity}",
                counts.len()
            )));
        }
        let n_j: u64 = counts.iter().sum();
        let mut term = ln_gamma_config - ln_gamma(config_prior + n_j as f64);
        for &n_jk in counts {
            if n_jk > 0 {
                term += ln_gamma(cell + n_jk as f64) - ln_gamma_cell;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Family meta-score: the log of the average member likelihood, i.e. the
/// family's supervised marginal likelihood under a uniform model prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyScore {
    #[serde(with = "crate::float_str")]
    pub log_value: f64,
    #[serde(with = "crate::float_str::vec")]
    pub member_log_scores: Vec<f64>,
}

pub fn log_family_score(member_scores: &[f64]) -> Result<FamilyScore, ScoringError> {
    if member_scores.is_empty() {
        return Err(ScoringError::EmptyFamily);
    }
    let log_value = logsumexp(member_scores) - (member_scores.len() as f64).ln();
    Ok(FamilyScore {
        log_value,
        member_log_scores: member_scores.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Schema};
    use crate::scoring::{build_count_table, RelevantSubset};
    use proptest::prelude::*;

    const UNIFORM: PriorSpec = PriorSpec::UniformCell { alpha: 1.0 };

    fn dataset(arities: Vec<u32>, r: u32, rows: Vec<Vec<u32>>, labels: Vec<u32>) -> Dataset {
        Dataset::new(Schema::anonymous(arities, r).unwrap(), rows, labels).unwrap()
    }

    /// Product of one-step posterior predictives, in row order.
    fn sequential_oracle(data: &Dataset, subset: &[usize], prior: &PriorSpec) -> f64 {
        let r = data.class_arity() as usize;
        let arities: Vec<u32> = subset.iter().map(|&i| data.schema().predictor_arities[i]).collect();
        let q: f64 = arities.iter().map(|&a| a as f64).product();
        let a = match *prior {
            PriorSpec::UniformCell { alpha } => alpha,
            PriorSpec::EquivalentSampleSize { ess } => ess / (q * r as f64),
        };
        let mut seen: Vec<(Vec<u32>, u32)> = Vec::new();
        let mut log_p = 0.0;
        for (row, &y) in data.rows().iter().zip(data.labels()) {
            let config: Vec<u32> = subset.iter().map(|&i| row[i]).collect();
            let n_j = seen.iter().filter(|(c, _)| *c == config).count() as f64;
            let n_jk = seen.iter().filter(|(c, l)| *c == config && *l == y).count() as f64;
            log_p += ((n_jk + a) / (n_j + r as f64 * a)).ln();
            seen.push((config, y));
        }
        log_p
    }

    #[test]
    fn empty_table_scores_zero() {
        let d = dataset(vec![2], 2, vec![], vec![]);
        let t = build_count_table(&d, &RelevantSubset::new(vec![0]).unwrap()).unwrap();
        assert_eq!(log_sml(&t, &UNIFORM).unwrap(), 0.0);
    }

    #[test]
    fn single_config_two_zero() {
        let d = dataset(vec![], 2, vec![vec![], vec![]], vec![0, 0]);
        let t = build_count_table(&d, &RelevantSubset::empty()).unwrap();
        let got = log_sml(&t, &UNIFORM).unwrap();
        assert!((got - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((got - -1.098_612).abs() < 1e-6);
    }

    #[test]
    fn two_configs() {
        let d = dataset(vec![2], 2, vec![vec![0], vec![0], vec![1]], vec![0, 1, 0]);
        let t = build_count_table(&d, &RelevantSubset::new(vec![0]).unwrap()).unwrap();
        let got = log_sml(&t, &UNIFORM).unwrap();
        assert!((got - (1.0f64 / 12.0).ln()).abs() < 1e-12);
        assert!((got - -2.484_907).abs() < 1e-6);
    }

    #[test]
    fn family_score_examples() {
        let l = -3.25;
        assert_eq!(log_family_score(&[l]).unwrap().log_value, l);
        assert!((log_family_score(&[l, l]).unwrap().log_value - l).abs() < 1e-15);
        let f = log_family_score(&[0.5f64.ln(), 0.25f64.ln()]).unwrap();
        assert!((f.log_value - 0.375f64.ln()).abs() < 1e-15);
        assert!((f.log_value - -0.980_829).abs() < 1e-6);
        assert_eq!(log_family_score(&[]), Err(ScoringError::EmptyFamily));
    }

    #[test]
    fn family_score_extreme_values() {
        let f = log_family_score(&[-1e6, -1e6 - 1.0]).unwrap();
        let want = -1e6 + ((1.0 + (-1.0f64).exp()) / 2.0).ln();
        assert!((f.log_value - want).abs() < 1e-9);
        assert!(f.log_value.is_finite());
    }

    #[test]
    fn family_score_json_uses_strings() {
        let f = log_family_score(&[-0.5]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"log_value":"-5.0000000000000000e-1","member_log_scores":["-5.0000000000000000e-1"]}"#
        );
        assert_eq!(serde_json::from_str::<FamilyScore>(&json).unwrap(), f);
    }

    fn random_data() -> impl Strategy<Value = (Vec<u32>, Dataset)> {
        (1usize..4, 2u32..4)
            .prop_flat_map(|(n, r)| {
                let arities = prop::collection::vec(1u32..4, n);
                (arities, Just(r)).prop_flat_map(|(arities, r)| {
                    let row = arities.iter().map(|&a| 0..a).collect::<Vec<_>>();
                    let rows = prop::collection::vec((row, 0..r), 0..25);
                    (Just(arities), Just(r), rows)
                })
            })
            .prop_map(|(arities, r, rows)| {
                let (xs, ys): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
                (arities.clone(), dataset(arities, r, xs, ys))
            })
    }

    proptest! {
        #[test]
        fn matches_sequential_oracle((arities, d) in random_data(), ess in 0.5f64..4.0) {
            let n = arities.len();
            for mask in 0u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let t = build_count_table(&d, &RelevantSubset::new(subset.clone()).unwrap()).unwrap();
                for prior in [UNIFORM, PriorSpec::EquivalentSampleSize { ess }] {
                    let got = log_sml(&t, &prior).unwrap();
                    let want = sequential_oracle(&d, &subset, &prior);
                    prop_assert!((got - want).abs() < 1e-9, "{got} vs {want}");
                    prop_assert!(got <= 1e-12);
                }
            }
        }

        #[test]
        fn family_score_bounded(scores in prop::collection::vec(-1e6f64..0.0, 1..20)) {
            let f = log_family_score(&scores).unwrap();
            let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(f.log_value >= lo - 1e-9 && f.log_value <= hi + 1e-9);
        }
    }

    #[test]
    fn empty_subset_is_class_evidence() {
        // Dirichlet-multinomial evidence of the label sequence alone
        let labels = vec![0, 2, 2, 1, 2, 0, 2];
        let d = dataset(
            vec![3],
            3,
            labels.iter().map(|&y| vec![y % 3]).collect(),
            labels.clone(),
        );
        let t = build_count_table(&d, &RelevantSubset::empty()).unwrap();
        let alpha = 0.7;
        let got = log_sml(&t, &PriorSpec::UniformCell { alpha }).unwrap();
        let counts = [2.0, 1.0, 4.0];
        let mut want = 0.0;
        for c in counts {
            for i in 0..c as usize {
                want += (alpha + i as f64).ln();
            }
        }
        for i in 0..labels.len() {
            want -= (3.0 * alpha + i as f64).ln();
        }
        assert!((got - want).abs() < 1e-12);
    }
}
