//! Seeded train/validation/test partitioning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl SplitSizes {
    pub fn total(&self) -> usize {
        self.train + self.validation + self.test
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitSpec {
    /// Validation and test get `floor(n * ratio)`; train takes the rest.
    Ratios {
        train: f64,
        validation: f64,
        test: f64,
        seed: u64,
    },
    /// Exact partition sizes, which must add up to the record count.
    Sizes { sizes: SplitSizes, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplitError {
    #[error("split ratios must each lie in [0, 1] and sum to 1 (got {0}, {1}, {2})")]
    BadRatios(f64, f64, f64),
    #[error("split sizes add up to {sizes} but there are {records} records")]
    SizeMismatch { sizes: usize, records: usize },
}

impl SplitSpec {
    pub fn ratios(train: f64, validation: f64, test: f64, seed: u64) -> Result<Self, SplitError> {
        let ok = [train, validation, test].iter().all(|r| (0.0..=1.0).contains(r))
            && (train + validation + test - 1.0).abs() <= 1e-9;
        if !ok {
            return Err(SplitError::BadRatios(train, validation, test));
        }
        Ok(SplitSpec::Ratios {
            train,
            validation,
            test,
            seed,
        })
    }

    pub fn sizes(train: usize, validation: usize, test: usize, seed: u64) -> Self {
        SplitSpec::Sizes {
            sizes: SplitSizes {
                train,
                validation,
                test,
            },
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            SplitSpec::Ratios { seed, .. } | SplitSpec::Sizes { seed, .. } => seed,
        }
    }

    pub fn sizes_for(&self, n: usize) -> Result<SplitSizes, SplitError> {
        match *self {
            SplitSpec::Ratios {
                train,
                validation,
                test,
                ..
            } => {
                Self::ratios(train, validation, test, 0)?;
                // tolerance so that e.g. 2000 * 0.1 is not floored to 199
                let part = |r: f64| ((n as f64 * r + 1e-9).floor() as usize).min(n);
                let validation = part(validation);
                let test = part(test).min(n - validation);
                Ok(SplitSizes {
                    train: n - validation - test,
                    validation,
                    test,
                })
            }
            SplitSpec::Sizes { sizes, .. } => {
                if sizes.total() != n {
                    return Err(SplitError::SizeMismatch {
                        sizes: sizes.total(),
                        records: n,
                    });
                }
                Ok(sizes)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub validation: Vec<T>,
    pub test: Vec<T>,
}

/// Fisher-Yates shuffle driven by ChaCha8 seeded from `seed`.
fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        idx.swap(i, j);
    }
    idx
}

/// Partitions `0..n`. Each part lists indices in ascending order.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<Split<usize>, SplitError> {
    let sizes = spec.sizes_for(n)?;
    let order = shuffled(n, spec.seed());
    let (train, rest) = order.split_at(sizes.train);
    let (validation, test) = rest.split_at(sizes.validation);
    let sorted = |part: &[usize]| {
        let mut v = part.to_vec();
        v.sort_unstable();
        v
    };
    Ok(Split {
        train: sorted(train),
        validation: sorted(validation),
        test: sorted(test),
    })
}

/// Partitions records; relative input order is kept within each part.
pub fn split<T>(records: Vec<T>, spec: &SplitSpec) -> Result<Split<T>, SplitError> {
    let n = records.len();
    let parts = split_indices(n, spec)?;
    let mut label = vec![0u8; n];
    for &i in &parts.validation {
        label[i] = 1;
    }
    for &i in &parts.test {
        label[i] = 2;
    }
    let mut out = Split {
        train: Vec::with_capacity(parts.train.len()),
        validation: Vec::with_capacity(parts.validation.len()),
        test: Vec::with_capacity(parts.test.len()),
    };
    for (record, l) in records.into_iter().zip(label) {
        match l {
            0 => out.train.push(record),
            1 => out.validation.push(record),
            _ => out.test.push(record),
        }
    }
    Ok(out)
}
