//! Fixed-parity polynomials in the scaled coordinate x.
//!
//! Every object in the order-by-order recursion is either odd or even in
//! x; storing only the live parity halves the arithmetic and makes the
//! "wrong-parity coefficients are structurally absent" invariant hold by
//! construction.

/// Parity of a polynomial in x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Dense polynomial holding only one parity of powers.
///
/// For `Odd`, `coeffs[m]` multiplies x^(2m+1); for `Even`, x^(2m).
/// An empty coefficient vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityPolynomial {
    parity: Parity,
    coeffs: Vec<f64>,
}

impl ParityPolynomial {
    pub fn zero(parity: Parity) -> Self {
        Self {
            parity,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(parity: Parity, coeffs: Vec<f64>) -> Self {
        let mut p = Self { parity, coeffs };
        p.trim();
        p
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Slot coefficients (slot m is the x^(2m+offset) coefficient).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of x^power, zero when absent (including wrong parity).
    pub fn coeff_of_power(&self, power: usize) -> f64 {
        if power % 2 != self.parity.offset() {
            return 0.0;
        }
        let m = (power - self.parity.offset()) / 2;
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Polynomial degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = self.coeffs.iter().rposition(|&c| c != 0.0)?;
        Some(2 * top + self.parity.offset())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x2 + c;
        }
        match self.parity {
            Parity::Even => acc,
            Parity::Odd => acc * x,
        }
    }

    /// Accumulate s * other into self; parities must match.
    pub fn axpy(&mut self, s: f64, other: &ParityPolynomial) {
        assert_eq!(self.parity, other.parity, "parity mismatch in axpy");
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (dst, &src) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *dst += s * src;
        }
    }

    /// Product; the result parity follows the usual parity algebra.
    pub fn mul(&self, other: &ParityPolynomial) -> ParityPolynomial {
        if self.is_zero() || other.is_zero() {
            let parity = match (self.parity, other.parity) {
                (Parity::Odd, Parity::Odd) | (Parity::Even, Parity::Even) => Parity::Even,
                _ => Parity::Odd,
            };
            return ParityPolynomial::zero(parity);
        }
        let (parity, shift) = match (self.parity, other.parity) {
            (Parity::Odd, Parity::Odd) => (Parity::Even, 1),
            (Parity::Even, Parity::Even) => (Parity::Even, 0),
            _ => (Parity::Odd, 0),
        };
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1 + shift];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j + shift] += a * b;
            }
        }
        ParityPolynomial::from_coeffs(parity, coeffs)
    }

    /// d/dx; parity flips.
    pub fn derivative(&self) -> ParityPolynomial {
        match self.parity {
            Parity::Odd => {
                // x^(2m+1) -> (2m+1) x^(2m)
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, &c)| (2 * m + 1) as f64 * c)
                    .collect();
                ParityPolynomial::from_coeffs(Parity::Even, coeffs)
            }
            Parity::Even => {
                // x^(2m) -> 2m x^(2m-1)
                let mut coeffs = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
                for (m, &c) in self.coeffs.iter().enumerate().skip(1) {
                    coeffs.push((2 * m) as f64 * c);
                }
                ParityPolynomial::from_coeffs(Parity::Odd, coeffs)
            }
        }
    }

    /// Antiderivative vanishing at x = 0; parity flips.
    pub fn antiderivative(&self) -> ParityPolynomial {
        match self.parity {
            Parity::Odd => {
                // x^(2m+1) -> x^(2m+2)/(2m+2)
                let mut coeffs = vec![0.0; self.coeffs.len() + 1];
                for (m, &c) in self.coeffs.iter().enumerate() {
                    coeffs[m + 1] = c / (2 * m + 2) as f64;
                }
                ParityPolynomial::from_coeffs(Parity::Even, coeffs)
            }
            Parity::Even => {
                // x^(2m) -> x^(2m+1)/(2m+1)
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, &c)| c / (2 * m + 1) as f64)
                    .collect();
                ParityPolynomial::from_coeffs(Parity::Odd, coeffs)
            }
        }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }
}
