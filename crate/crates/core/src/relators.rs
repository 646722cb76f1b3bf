//! Relator families of the presentations and their machine verification.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::plmap::PLMap;
use crate::presentation::compile_word;
use crate::ring::{Scalar, ZTau};
use crate::word::{GeneratorSymbol as G, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorInstance {
    pub family: String,
    pub lhs: Word,
    pub rhs: Word,
    pub indices: Vec<(&'static str, u32)>,
}

impl RelatorInstance {
    pub fn new(family: &str, lhs: Vec<G>, rhs: Vec<G>, indices: Vec<(&'static str, u32)>) -> Self {
        RelatorInstance { family: family.into(), lhs: Word(lhs), rhs: Word(rhs), indices }
    }
}

impl fmt::Display for RelatorInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let side = |w: &Word| if w.is_empty() { "1".to_string() } else { w.to_string() };
        write!(f, "({}) {} = {}  [{}]", self.family, side(&self.lhs), side(&self.rhs), idx.join(", "))
    }
}

fn prod(parts: impl IntoIterator<Item = G>) -> Vec<G> {
    parts.into_iter().collect()
}

/// Every instance of the golden-ratio families whose instantiation indices
/// (`i, j, k, n`) are all at most `max`.
pub fn relator_instances(max: u32) -> Vec<RelatorInstance> {
    let mut out = Vec::new();
    let (x, y, c, p) = (G::x, G::y, G::c, G::p);
    // (1) x and y
    for j in 0..=max {
        for i in 0..j {
            let ij = vec![("i", i), ("j", j)];
            out.push(RelatorInstance::new("1.1", vec![x(j), x(i)], vec![x(i), x(j + 1)], ij.clone()));
            out.push(RelatorInstance::new("1.2", vec![x(j), y(i)], vec![y(i), x(j + 1)], ij.clone()));
            out.push(RelatorInstance::new("1.3", vec![y(j), x(i)], vec![x(i), y(j + 1)], ij.clone()));
            out.push(RelatorInstance::new("1.4", vec![y(j), y(i)], vec![y(i), y(j + 1)], ij));
        }
    }
    for n in 0..=max {
        out.push(RelatorInstance::new("1.5", vec![y(n).pow(2)], vec![x(n), x(n + 1)], vec![("n", n)]));
    }
    // (2) x and c, (3) y and c
    for n in 1..=max {
        for k in 0..n {
            let kn = vec![("k", k), ("n", n)];
            out.push(RelatorInstance::new("2.1", vec![x(k), c(n + 1)], vec![c(n), x(k + 1)], kn.clone()));
            out.push(RelatorInstance::new("3.1", vec![y(k), c(n + 1)], vec![c(n), y(k + 1)], kn));
        }
        out.push(RelatorInstance::new("2.2", vec![c(n), x(0)], vec![c(n + 1).pow(2)], vec![("n", n)]));
        out.push(RelatorInstance::new("2.3", vec![c(n)], vec![x(n), c(n + 1)], vec![("n", n)]));
        out.push(RelatorInstance::new(
            "3.2",
            vec![c(n), y(0)],
            vec![y(n + 1).inverse(), c(n + 1).pow(2)],
            vec![("n", n)],
        ));
    }
    for n in 1..=max {
        out.push(RelatorInstance::new("2.4", vec![c(n).pow(n as i64 + 2)], vec![], vec![("n", n)]));
    }
    // (4) x and π, (6) y and π
    for i in 0..=max {
        for j in 0..=max {
            let ij = vec![("i", i), ("j", j)];
            if j >= i + 2 {
                out.push(RelatorInstance::new("4.1", vec![p(i), x(j)], vec![x(j), p(i)], ij.clone()));
                out.push(RelatorInstance::new("6.1", vec![p(i), y(j)], vec![y(j), p(i)], ij.clone()));
                out.push(RelatorInstance::new("4.7", vec![p(i), p(j)], vec![p(j), p(i)], ij.clone()));
            }
            if j < i {
                out.push(RelatorInstance::new("4.4", vec![p(i), x(j)], vec![x(j), p(i + 1)], ij.clone()));
                out.push(RelatorInstance::new("6.4", vec![p(i), y(j)], vec![y(j), p(i + 1)], ij));
            }
        }
        let ii = vec![("i", i)];
        out.push(RelatorInstance::new("4.2", vec![p(i), x(i + 1)], vec![x(i), p(i + 1), p(i)], ii.clone()));
        out.push(RelatorInstance::new("4.3", vec![p(i), x(i)], vec![x(i + 1), p(i), p(i + 1)], ii.clone()));
        out.push(RelatorInstance::new("6.2", vec![p(i), y(i + 1)], vec![y(i), p(i + 1), p(i)], ii.clone()));
        out.push(RelatorInstance::new("6.3", vec![p(i), y(i)], vec![y(i + 1), p(i), p(i + 1)], ii.clone()));
        out.push(RelatorInstance::new("4.5", vec![p(i).pow(2)], vec![], ii.clone()));
        out.push(RelatorInstance::new("4.6", [p(i + 1), p(i)].repeat(3), vec![], ii));
    }
    // (5) c and π
    for n in 1..=max {
        for k in 1..n {
            out.push(RelatorInstance::new("5.1", vec![c(n), p(k)], vec![p(k - 1), c(n)], vec![("k", k), ("n", n)]));
        }
        let nn = vec![("n", n)];
        let up = prod((0..n).map(p).chain([c(n).pow(2)]));
        let down = prod((0..n).rev().map(p).chain([c(n)]));
        out.push(RelatorInstance::new("5.2", vec![c(n), p(0)], up, nn.clone()));
        out.push(RelatorInstance::new("5.3", vec![c(n).pow(2), p(0)], down, nn.clone()));
        out.push(RelatorInstance::new("5.4", vec![c(n).pow(3), p(0)], vec![p(n - 1), c(n).pow(3)], nn));
    }
    out
}

/// Index-raising identities for cycle powers:
/// `c_n^m = x_{n+1-m} c_{n+1}^m` and `c_n^m = c_{n+1}^{m+1} x_{m-1}^{-1}`
/// for `1 ≤ m ≤ n+1 ≤ bound`.
pub fn cycle_raising_instances(bound: u32) -> Vec<RelatorInstance> {
    let mut out = Vec::new();
    for n in 1..bound {
        for m in 1..=n + 1 {
            let idx = vec![("m", m), ("n", n)];
            let cm = G::c(n).pow(m as i64);
            out.push(RelatorInstance::new(
                "raise-i",
                vec![cm],
                vec![G::x(n + 1 - m), G::c(n + 1).pow(m as i64)],
                idx.clone(),
            ));
            out.push(RelatorInstance::new(
                "raise-ii",
                vec![cm],
                vec![G::c(n + 1).pow(m as i64 + 1), G::x(m - 1).inverse()],
                idx,
            ));
        }
    }
    out
}

/// A deliberately false identity used to check that the verifier can fail.
pub fn negative_control() -> RelatorInstance {
    RelatorInstance::new("control", vec![G::x(1), G::x(0)], vec![G::x(0), G::x(1)], vec![])
}

#[derive(Clone, Debug)]
pub struct RelatorFailure {
    pub instance: RelatorInstance,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct RelatorReport {
    /// family → (passed, failed)
    pub tally: BTreeMap<String, (usize, usize)>,
    pub failures: Vec<RelatorFailure>,
}

impl RelatorReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> usize {
        self.tally.values().map(|(p, f)| p + f).sum()
    }

    pub fn summary_table(&self) -> String {
        let mut s = format!("{:<10} {:>7} {:>7}\n", "family", "passed", "failed");
        for (fam, (p, f)) in &self.tally {
            s.push_str(&format!("{fam:<10} {p:>7} {f:>7}\n"));
        }
        s
    }
}

/// Checks every instance with `map_of` (word → exact map), in parallel.
pub fn verify_with<S, F>(instances: &[RelatorInstance], map_of: F) -> RelatorReport
where
    S: Scalar,
    F: Fn(&Word) -> Result<PLMap<S>> + Sync,
{
    let results: Vec<(usize, Option<String>)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let outcome = match (map_of(&inst.lhs), map_of(&inst.rhs)) {
                (Ok(l), Ok(r)) if l == r => None,
                (Ok(l), Ok(r)) => Some(format!("lhs map:\n{l}rhs map:\n{r}")),
                (Err(e), _) | (_, Err(e)) => Some(format!("compilation failed: {e}")),
            };
            (i, outcome)
        })
        .collect();
    let mut report = RelatorReport::default();
    for (i, outcome) in results {
        let inst = &instances[i];
        let entry = report.tally.entry(inst.family.clone()).or_default();
        match outcome {
            None => entry.0 += 1,
            Some(detail) => {
                entry.1 += 1;
                report.failures.push(RelatorFailure { instance: inst.clone(), detail });
            }
        }
    }
    report
}

pub fn verify_instances(instances: &[RelatorInstance]) -> RelatorReport {
    verify_with::<ZTau, _>(instances, |w| Ok(compile_word(w)?.to_plmap()))
}

/// Verifies all golden-ratio families with indices at most `max`.
pub fn verify_relators(max: u32) -> RelatorReport {
    verify_instances(&relator_instances(max))
}
