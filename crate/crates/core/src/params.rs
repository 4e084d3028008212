use serde::{Deserialize, Serialize};

/// Tolerances, caps and continuation schedules shared by all solver stages.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolverParams {
    /// Collision truncation parameter of the target system.
    pub k: f64,
    /// Damping of the Step-I map (zeroth-order absorption).
    pub alpha: f64,
    /// Support radius of the mollifier applied to frozen fields.
    pub moll_radius: f64,
    /// L¹ stopping threshold of the monotone inner iteration.
    pub tol_inner: f64,
    /// L¹ stopping threshold of outer loops (Picard, pair alternation).
    pub tol_outer: f64,
    /// L¹ width at which the alternating bracket is declared closed.
    pub tol_bracket: f64,
    pub max_inner: usize,
    pub max_outer: usize,
    pub max_bracket: usize,
    /// Increasing truncation levels for continuation.
    pub k_schedule: Vec<f64>,
    /// Decreasing damping levels, ending near zero.
    pub alpha_schedule: Vec<f64>,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            k: 8.0,
            alpha: 0.5,
            moll_radius: 0.0,
            tol_inner: 1e-13,
            tol_outer: 1e-12,
            tol_bracket: 1e-13,
            max_inner: 2000,
            max_outer: 5000,
            max_bracket: 2000,
            k_schedule: vec![4.0, 16.0, 64.0],
            alpha_schedule: vec![0.5, 0.25, 0.125],
        }
    }
}

impl SolverParams {
    /// Checks the structural invariants: positive tolerances, strictly
    /// increasing k schedule, strictly decreasing alpha schedule.
    pub fn validate(&self) -> Result<(), String> {
        if self.k <= 0.0 {
            return Err("k must be positive".into());
        }
        if self.alpha < 0.0 || self.moll_radius < 0.0 {
            return Err("alpha and moll_radius must be nonnegative".into());
        }
        for (name, tol) in [
            ("tol_inner", self.tol_inner),
            ("tol_outer", self.tol_outer),
            ("tol_bracket", self.tol_bracket),
        ] {
            if !(tol > 0.0) {
                return Err(format!("{name} must be positive"));
            }
        }
        if self.max_inner == 0 || self.max_outer == 0 || self.max_bracket == 0 {
            return Err("iteration caps must be positive".into());
        }
        if self.k_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err("k_schedule must be strictly increasing".into());
        }
        if self.k_schedule.iter().any(|&k| k <= 0.0) {
            return Err("k_schedule entries must be positive".into());
        }
        if self.alpha_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err("alpha_schedule must be strictly decreasing".into());
        }
        Ok(())
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_tolerances(mut self, inner: f64, outer: f64, bracket: f64) -> Self {
        self.tol_inner = inner;
        self.tol_outer = outer;
        self.tol_bracket = bracket;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_validate() {
        assert!(SolverParams::default().validate().is_ok());
    }

    #[test]
    fn rejects_nonincreasing_k_schedule() {
        let mut p = SolverParams::default();
        p.k_schedule = vec![4.0, 4.0];
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_nondecreasing_alpha_schedule() {
        let mut p = SolverParams::default();
        p.alpha_schedule = vec![0.25, 0.5];
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_zero_tolerance() {
        let p = SolverParams::default().with_tolerances(0.0, 1e-9, 1e-9);
        assert!(p.validate().is_err());
    }
}
