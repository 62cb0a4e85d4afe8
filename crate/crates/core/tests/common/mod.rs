//! Quadratic-time reference implementations shared by the integration tests.
//!
//! Accumulation order matches the fast paths term for term, so results are
//! expected to agree bit for bit.
#![allow(dead_code)]

use trig_approx::classes::{Direction, FiniteSequence, Semantics, Side};

/// Minimal almost-monotone constant by checking every pair `m ≤ n`.
pub fn almost_monotone_brute(c: &FiniteSequence, direction: Direction) -> f64 {
    let v = c.values();
    let mut k = 1.0_f64;
    for n in 0..v.len() {
        for m in 0..=n {
            // decreasing: c_n ≤ K c_m; increasing: c_m ≤ K c_n
            let (lhs, rhs) = match direction {
                Direction::Decreasing => (v[n], v[m]),
                Direction::Increasing => (v[m], v[n]),
            };
            if rhs == 0.0 {
                if lhs > 0.0 {
                    return f64::INFINITY;
                }
            } else {
                k = k.max(lhs / rhs);
            }
        }
    }
    k
}

fn steps(c: &FiniteSequence) -> Vec<f64> {
    let v = c.values();
    let mut d = Vec::new();
    for k in 0..v.len() - 1 {
        d.push((v[k] - v[k + 1]).abs());
    }
    if c.semantics() == Semantics::Row {
        d.push(v[v.len() - 1]);
    }
    d
}

/// Minimal bounded-variation constant, re-summing each tail or head from scratch.
pub fn bounded_variation_brute(c: &FiniteSequence, side: Side) -> f64 {
    let v = c.values();
    let d = steps(c);
    let mut k = 0.0_f64;
    let last_m = match side {
        Side::Rest => v.len() - 1,
        Side::Head => match v.iter().rposition(|&x| x > 0.0) {
            Some(i) => i,
            None => return 0.0,
        },
    };
    for m in 0..=last_m {
        let acc = match side {
            Side::Rest => d[m..].iter().rev().fold(0.0, |a, x| a + x),
            Side::Head => d[..m].iter().fold(0.0, |a, x| a + x),
        };
        if v[m] == 0.0 {
            if acc > 0.0 {
                return f64::INFINITY;
            }
        } else {
            k = k.max(acc / v[m]);
        }
    }
    k
}

/// `C_m = (1/(m+1)) Σ_{k≤m} c_k` by direct summation.
pub fn running_means_brute(v: &[f64]) -> Vec<f64> {
    (0..v.len())
        .map(|m| v[..=m].iter().sum::<f64>() / (m + 1) as f64)
        .collect()
}
