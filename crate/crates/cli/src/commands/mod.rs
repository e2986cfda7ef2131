pub mod example1;
pub mod example3;
pub mod fuzz;
pub mod oracle;
pub mod sweep;

/// Oracle and closed form agree when they differ by at most this much.
pub const AGREEMENT_TOL: f64 = 5e-3;

/// What a successful command found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    /// Points or samples where a bound failed although its conditions held.
    pub violations: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.violations == 0 {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::default().exit_code(), 0);
        assert_eq!(Outcome { violations: 3 }.exit_code(), 1);
    }
}
