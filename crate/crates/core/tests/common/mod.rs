//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smlc::data::{Dataset, Schema};
use smlc::partition::Partition;
use smlc::scoring::{log_gamma, PriorSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n_rows` rows; `y = x1 xor x2`, plus `noise_predictors` independent
/// uniform bits, with each label flipped with probability `label_noise`.
pub fn xor_dataset(n_rows: usize, noise_predictors: usize, label_noise: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let n = 2 + noise_predictors;
    let mut rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<u32> = (0..n).map(|_| r.random_range(0..2)).collect();
        let mut y = row[0] ^ row[1];
        if r.random_bool(label_noise) {
            y ^= 1;
        }
        rows.push(row);
        labels.push(y);
    }
    Dataset::new(Schema::anonymous(vec![2; n], 2).unwrap(), rows, labels).unwrap()
}

/// Uniformly random categorical data.
pub fn random_dataset(r: &mut ChaCha8Rng, arities: &[u32], class_arity: u32, n_rows: usize) -> Dataset {
    let rows = (0..n_rows)
        .map(|_| arities.iter().map(|&a| r.random_range(0..a)).collect())
        .collect();
    let labels = (0..n_rows).map(|_| r.random_range(0..class_arity)).collect();
    Dataset::new(Schema::anonymous(arities.to_vec(), class_arity).unwrap(), rows, labels).unwrap()
}

/// Data whose labels depend on a random subset of predictors through a
/// random conditional table, with some label noise.
pub fn structured_dataset(r: &mut ChaCha8Rng, arities: &[u32], class_arity: u32, n_rows: usize) -> Dataset {
    let n = arities.len();
    let parents: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
    let q: usize = parents.iter().map(|&i| arities[i] as usize).product();
    let table: Vec<u32> = (0..q).map(|_| r.random_range(0..class_arity)).collect();
    let mut rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<u32> = arities.iter().map(|&a| r.random_range(0..a)).collect();
        let mut j = 0usize;
        for &p in &parents {
            j = j * arities[p] as usize + row[p] as usize;
        }
        let y = if r.random_bool(0.2) {
            r.random_range(0..class_arity)
        } else {
            table[j]
        };
        rows.push(row);
        labels.push(y);
    }
    Dataset::new(Schema::anonymous(arities.to_vec(), class_arity).unwrap(), rows, labels).unwrap()
}

/// Dirichlet pseudo-count of a single (configuration, class) cell.
pub fn cell_prior(prior: &PriorSpec, q: f64, r: u32) -> f64 {
    match *prior {
        PriorSpec::UniformCell { alpha } => alpha,
        PriorSpec::EquivalentSampleSize { ess } => ess / (q * r as f64),
    }
}

/// Chain rule: product over rows, in order, of the one-step Dirichlet
/// posterior predictive of each label given all earlier rows.
pub fn sequential_likelihood(data: &Dataset, subset: &[usize], prior: &PriorSpec) -> f64 {
    let r = data.class_arity();
    let q: f64 = subset
        .iter()
        .map(|&i| data.schema().predictor_arities[i] as f64)
        .product();
    let a = cell_prior(prior, q, r);
    let mut seen: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut p = 1.0;
    for (row, &y) in data.rows().iter().zip(data.labels()) {
        let config: Vec<u32> = subset.iter().map(|&i| row[i]).collect();
        let n_j = seen.iter().filter(|(c, _)| *c == config).count() as f64;
        let n_jk = seen.iter().filter(|(c, l)| *c == config && *l == y).count() as f64;
        p *= (n_jk + a) / (n_j + r as f64 * a);
        seen.push((config, y));
    }
    p
}

/// The closed form summed over every one of the `q` configurations, empty
/// or not, with counts found by scanning the rows per configuration.
pub fn dense_log_sml(data: &Dataset, subset: &[usize], prior: &PriorSpec) -> f64 {
    let arities: Vec<u32> = subset.iter().map(|&i| data.schema().predictor_arities[i]).collect();
    let q: usize = arities.iter().map(|&a| a as usize).product();
    let r = data.class_arity();
    let a = cell_prior(prior, q as f64, r);
    let lg = |x: f64| log_gamma(x).unwrap();
    let mut total = 0.0;
    for j in 0..q {
        let mut config = vec![0u32; subset.len()];
        let mut rest = j;
        for (c, &ar) in config.iter_mut().zip(&arities).rev() {
            *c = (rest % ar as usize) as u32;
            rest /= ar as usize;
        }
        let mut counts = vec![0u64; r as usize];
        for (row, &y) in data.rows().iter().zip(data.labels()) {
            if subset.iter().zip(&config).all(|(&i, &v)| row[i] == v) {
                counts[y as usize] += 1;
            }
        }
        let n_j: u64 = counts.iter().sum();
        total += lg(r as f64 * a) - lg(r as f64 * a + n_j as f64);
        for &c in &counts {
            total += lg(a + c as f64) - lg(a);
        }
    }
    total
}

/// Every partition of `0..n`, via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(labels: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if labels.len() == n {
            out.push(Partition::from_labels(labels));
            return;
        }
        let next = labels.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            labels.push(l);
            grow(labels, n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

/// Log of the average of exp(scores), computed with the max shift.
pub fn log_mean_exp(scores: &[f64]) -> f64 {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + (scores.iter().map(|s| (s - m).exp()).sum::<f64>() / scores.len() as f64).ln()
}
