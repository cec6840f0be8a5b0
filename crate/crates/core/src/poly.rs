//! Dense polynomials in the step size `h`.
//!
//! Scheme coefficients are low-degree polynomials with dyadic-rational
//! coefficients, so evaluation at a dyadic `h` is exact in `f64`.

/// Polynomial in `h`, coefficients stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoly {
    coeffs: Vec<f64>,
}

impl HPoly {
    pub fn new(coeffs: &[f64]) -> Self {
        let mut coeffs = coeffs.to_vec();
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(&[0.0])
    }

    pub fn one() -> Self {
        Self::new(&[1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.coeffs.iter().map(|c| -c).collect::<Vec<_>>())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0.0);
            let b = other.coeffs.get(i).copied().unwrap_or(0.0);
            *slot = a - b;
        }
        Self::new(&out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(&out)
    }

    /// Drop all terms of degree greater than `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> Self {
        let end = (max_degree + 1).min(self.coeffs.len());
        Self::new(&self.coeffs[..end])
    }
}
