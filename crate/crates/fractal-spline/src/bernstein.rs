//! Cubic coefficient bundles in the basis (1-u)^3, u(1-u)^2, u^2(1-u), u^3.
//!
//! The basis carries no binomial weights, so the constant 1 elevates to
//! (1, 3, 3, 1). Nonnegativity of all four coefficients implies
//! nonnegativity of the cubic on [0, 1], which is what the constrained
//! parameter selection relies on.

/// Cubic coefficients `c` against the unweighted Bernstein-type basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicBernstein {
    pub c: [f64; 4],
}

impl CubicBernstein {
    pub fn new(c: [f64; 4]) -> Self {
        Self { c }
    }

    /// Evaluates the cubic at `u` in [0, 1]. Ends return `c[0]` and `c[3]`
    /// exactly.
    pub fn eval(&self, u: f64) -> f64 {
        let v = 1.0 - u;
        self.c[0] * v * v * v + self.c[1] * u * v * v + self.c[2] * u * u * v + self.c[3] * u * u * u
    }

    pub fn is_nonnegative(&self) -> bool {
        self.c.iter().all(|&ci| ci >= 0.0)
    }
}
