//! Power series in `t` with integer coefficients, truncated at a fixed order.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<i64>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![0; order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, 1)
    }

    /// `c t^k`, zero if `k` exceeds the order.
    pub fn monomial(order: usize, k: usize, c: i64) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(order: usize, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(order);
        for (k, &c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    /// `1 / (1 - t^k)` for `k >= 1`.
    pub fn geometric(order: usize, k: usize) -> Self {
        assert!(k >= 1, "geometric series needs a positive step");
        let mut s = Self::zero(order);
        for j in (0..=order).step_by(k) {
            s.coeffs[j] = 1;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Self { order, coeffs }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.order = self.order.min(other.order);
        self.coeffs.truncate(self.order + 1);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut coeffs = vec![0; order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self { order, coeffs }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order);
        for j in k..=self.order {
            s.coeffs[j] = self.coeffs[j - k];
        }
        s
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = match (first, c < 0) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let mag = c.abs();
            match (k, mag) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (1, 1) => write!(f, "{sign}t")?,
                (1, _) => write!(f, "{sign}{mag}t")?,
                (_, 1) => write!(f, "{sign}t^{k}")?,
                _ => write!(f, "{sign}{mag}t^{k}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let g = TruncSeries::geometric(6, 2);
        assert_eq!(g.coeffs(), &[1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(g.mul(&g).coeffs(), &[1, 0, 2, 0, 3, 0, 4]);
        let h = TruncSeries::geometric(6, 4);
        assert_eq!(g.mul(&h).coeffs(), &[1, 0, 1, 0, 2, 0, 2]);
        let one_minus = TruncSeries::from_coeffs(6, &[1, 0, -1]);
        assert_eq!(one_minus.mul(&g), TruncSeries::one(6));
        assert_eq!(TruncSeries::one(3).shift(2).coeffs(), &[0, 0, 1, 0]);
        assert_eq!(g.add(&TruncSeries::one(4)).order(), 4);
        assert_eq!(g.to_string(), "1 + t^2 + t^4 + t^6 + O(t^7)");
    }
}
