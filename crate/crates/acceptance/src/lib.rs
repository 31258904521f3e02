// SPDX-License-Identifier: Apache-2.0

//! Reporting for the acceptance runner.

use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub number: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  {}",
            self.number,
            self.title,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

/// Largest entry, NaN if any entry is not finite.
pub fn worst(values: &[f64]) -> f64 {
    if values.iter().all(|v| v.is_finite()) {
        values.iter().copied().fold(0.0, f64::max)
    } else {
        f64::NAN
    }
}

/// Runs `criterion`, prints its line and returns the verdict.
pub fn run(number: u32, title: &'static str, criterion: impl FnOnce() -> (bool, String)) -> Verdict {
    let start = Instant::now();
    let (pass, detail) = criterion();
    let v = Verdict {
        number,
        title,
        pass,
        detail: format!("{detail} [{:.2} s]", start.elapsed().as_secs_f64()),
    };
    println!("{}", v.line());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_flags_non_finite() {
        assert_eq!(worst(&[1.0, 3.0, 2.0]), 3.0);
        assert!(worst(&[1.0, f64::NAN]).is_nan());
        assert_eq!(worst(&[]), 0.0);
    }
}
