//! Dense tensors over a four-dimensional tangent space.

use num_complex::Complex64;
use serde::Serialize;

pub const DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Up,
    Down,
}

/// Dense `4^rank` array stored row-major (last slot fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    variance: Vec<Variance>,
    data: Vec<T>,
}

/// Numeric tensor at a point.
pub type TensorValue = Tensor<f64>;

pub fn flat_index(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * DIM + i)
}

pub fn unflatten(mut flat: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in (0..rank).rev() {
        idx[slot] = flat % DIM;
        flat /= DIM;
    }
    idx
}

impl<T> Tensor<T> {
    pub fn from_fn(variance: Vec<Variance>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let rank = variance.len();
        let data = (0..DIM.pow(rank as u32))
            .map(|k| f(&unflatten(k, rank)))
            .collect();
        Tensor { variance, data }
    }

    pub fn from_data(variance: Vec<Variance>, data: Vec<T>) -> Self {
        assert_eq!(data.len(), DIM.pow(variance.len() as u32));
        Tensor { variance, data }
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        debug_assert_eq!(idx.len(), self.rank());
        &self.data[flat_index(idx)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Tensor<U> {
        Tensor {
            variance: self.variance.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (Vec<usize>, &T)> + '_ {
        let rank = self.rank();
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (unflatten(k, rank), v))
    }
}

pub fn all_down(rank: usize) -> Vec<Variance> {
    vec![Variance::Down; rank]
}

impl Tensor<f64> {
    pub fn zeros(variance: Vec<Variance>) -> Self {
        let n = DIM.pow(variance.len() as u32);
        Tensor {
            variance,
            data: vec![0.0; n],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest absolute component of `self - other`.
    pub fn max_abs_diff(&self, other: &Tensor<f64>) -> f64 {
        assert_eq!(self.variance, other.variance, "variance mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest absolute component of `self - P(self)` where `P` permutes slots:
    /// the result at `idx` is compared with `self` at `perm(idx)`.
    pub fn max_abs_antisym_defect(&self, perm: impl Fn(&[usize]) -> Vec<usize>, sign: f64) -> f64 {
        self.iter_indexed()
            .map(|(idx, v)| (v - sign * self.get(&perm(&idx))).abs())
            .fold(0.0, f64::max)
    }

    /// Lowers or raises every slot to match `target`, using `g` (down) and `ginv` (up).
    pub fn with_variance(
        &self,
        target: &[Variance],
        g: &Tensor<f64>,
        ginv: &Tensor<f64>,
    ) -> Tensor<f64> {
        assert_eq!(target.len(), self.rank());
        let mut current = self.clone();
        for (slot, &want) in target.iter().enumerate() {
            if current.variance[slot] == want {
                continue;
            }
            let m = if want == Variance::Down { g } else { ginv };
            let mut variance = current.variance.clone();
            variance[slot] = want;
            current = Tensor::from_fn(variance, |idx| {
                let mut j = idx.to_vec();
                (0..DIM)
                    .map(|e| {
                        j[slot] = e;
                        m.get(&[idx[slot], e]) * current.get(&j)
                    })
                    .sum()
            });
        }
        current
    }

    pub fn to_complex(&self) -> Tensor<Complex64> {
        self.map(|&x| Complex64::new(x, 0.0))
    }
}
