use std::fmt;

/// Coefficient ring for complexes and sheaves: `Z`, `Q`, or `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Coefficients {
    /// `F_p`, validating primality of `p`.
    pub fn prime_field(p: u64) -> Result<Self, CoeffError> {
        if is_prime(p) {
            Ok(Coefficients::PrimeField(p))
        } else {
            Err(CoeffError::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Coefficients::PrimeField(p) => *p,
            _ => 0,
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(Coefficients::prime_field(2).is_ok());
        assert!(Coefficients::prime_field(97).is_ok());
        assert!(Coefficients::prime_field(1).is_err());
        assert!(Coefficients::prime_field(91).is_err());
    }
}
