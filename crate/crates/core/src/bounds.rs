//! Closed-form lower bounds on `Pr[W contains an edge of H]`.
//!
//! Each bound is returned with its hypothesis check, the random-set size it
//! refers to, and whether it had to be clamped into `[0, 1]`. Bounds that
//! depend on an unspecified absolute constant `K_0` are produced only when
//! the caller supplies one, and are marked conditional. All arithmetic here
//! is floating point.
//!
//! | source | lower bound | hypotheses | set size |
//! |---|---|---|---|
//! | `multi_round` | `1 - 6l^2 (C/4)^(-r_l/2) - 40/(Cl)` | `C >= 8` | `2Clqn` |
//! | `multi_round_level` (per `i`) | `1 - 6l^2 (C/4)^(-r_i/2) - 2e^(-Cl/(4r_i))` | `C >= 8`, `4r_i <= Cl` | `2Clqn` |
//! | `small_edges` | `1 - 2e^(-a/(2rq))` | `0 < a < 1`, `a >= 2rq` | `an` |
//! | `second_moment` | `1 - 4q/a - 2e^(-an/4)` | `0 < a < 1`, `a >= 4q` | `an` |
//! | `k0_single` | `1 - K_0/(Cl)` | `K_0` given | `Clqn` |
//! | `k0_multilevel` | `1 - K_0 log(l+1)/(CL)` | `K_0`, `q_i` given | `C (sum q_i) n` |
//!
//! Here `l` is the length of `(r_1, ..., r_l)` (the trailing 1 is implicit),
//! `r` is `r_1`, and `L = sum q_i / max q_i`.

use serde::Serialize;

use crate::error::{input, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundParams {
    #[serde(rename = "C")]
    pub c: f64,
    pub q: f64,
    pub r_sequence: Vec<usize>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "K0", skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    /// Per-level spread parameters, one per entry of `r_sequence`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_values: Option<Vec<f64>>,
}

impl BoundParams {
    pub fn levels(&self) -> usize {
        self.r_sequence.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub source: &'static str,
    /// Level index `i` (1-based) for per-level bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub applicable: bool,
    /// Clamped bound; absent when not applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unclamped: Option<f64>,
    pub clamped: bool,
    /// Depends on a caller-supplied `K_0`.
    pub conditional: bool,
    /// Size of the random set the bound is about.
    pub set_size: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl BoundEntry {
    fn new(source: &'static str, level: Option<usize>, set_size: f64, conditional: bool, raw: std::result::Result<f64, String>) -> Self {
        match raw {
            Ok(v) => {
                let c = v.clamp(0.0, 1.0);
                BoundEntry {
                    source,
                    level,
                    applicable: true,
                    value: Some(c),
                    unclamped: Some(v),
                    clamped: c != v,
                    conditional,
                    set_size,
                    reason: None,
                }
            }
            Err(why) => BoundEntry {
                source,
                level,
                applicable: false,
                value: None,
                unclamped: None,
                clamped: false,
                conditional,
                set_size,
                reason: Some(why),
            },
        }
    }

    /// Column name for tabular output.
    pub fn label(&self) -> String {
        match self.level {
            Some(i) => format!("{}_{i}", self.source),
            None => self.source.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSet {
    pub params: BoundParams,
    pub entries: Vec<BoundEntry>,
}

impl BoundSet {
    pub fn get(&self, source: &str, level: Option<usize>) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.source == source && e.level == level)
    }
}

fn need(cond: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Evaluates every bound the parameters allow.
pub fn evaluate_bounds(params: &BoundParams) -> Result<BoundSet> {
    let BoundParams { c, q, n, .. } = *params;
    let r = &params.r_sequence;
    if r.is_empty() || r.windows(2).any(|w| w[0] <= w[1]) || r.contains(&0) {
        return input(format!("r-sequence {r:?} is not strictly decreasing and positive"));
    }
    if !(c > 0.0 && c.is_finite()) || !(q > 0.0 && q <= 1.0) {
        return input(format!("need C > 0 and 0 < q <= 1, got C = {c}, q = {q}"));
    }
    let l = params.levels() as f64;
    let nf = n as f64;
    let r1 = r[0] as f64;
    let mut entries = Vec::new();

    let big_c = || need(c >= 8.0, || format!("C = {c} is below 8"));
    let failure = |ri: usize| 6.0 * l * l * (c / 4.0).powf(-(ri as f64) / 2.0);

    entries.push(BoundEntry::new(
        "multi_round",
        None,
        2.0 * c * l * q * nf,
        false,
        big_c().map(|_| 1.0 - failure(*r.last().unwrap()) - 40.0 / (c * l)),
    ));
    for (i, &ri) in r.iter().enumerate() {
        let raw = big_c()
            .and_then(|_| need(4.0 * ri as f64 <= c * l, || format!("4 r_{} = {} exceeds Cl = {}", i + 1, 4 * ri, c * l)))
            .map(|_| 1.0 - failure(ri) - 2.0 * (-(c * l) / (4.0 * ri as f64)).exp());
        entries.push(BoundEntry::new("multi_round_level", Some(i + 1), 2.0 * c * l * q * nf, false, raw));
    }

    let alpha_ok = |a: Option<f64>| match a {
        Some(a) if a > 0.0 && a < 1.0 => Ok(a),
        Some(a) => Err(format!("alpha = {a} is outside (0, 1)")),
        None => Err("alpha not given".to_string()),
    };
    let a = params.alpha;
    let set_a = a.map_or(0.0, |a| a * nf);
    entries.push(BoundEntry::new(
        "small_edges",
        None,
        set_a,
        false,
        alpha_ok(a).and_then(|a| {
            need(a >= 2.0 * r1 * q, || format!("alpha = {a} is below 2rq = {}", 2.0 * r1 * q))?;
            Ok(1.0 - 2.0 * (-a / (2.0 * r1 * q)).exp())
        }),
    ));
    entries.push(BoundEntry::new(
        "second_moment",
        None,
        set_a,
        false,
        alpha_ok(a).and_then(|a| {
            need(a >= 4.0 * q, || format!("alpha = {a} is below 4q = {}", 4.0 * q))?;
            Ok(1.0 - (4.0 * q / a + 2.0 * (-a * nf / 4.0).exp()))
        }),
    ));

    let k0 = params.k0.ok_or_else(|| "K0 not given".to_string());
    entries.push(BoundEntry::new(
        "k0_single",
        None,
        c * l * q * nf,
        true,
        k0.clone().map(|k0| 1.0 - k0 / (c * l)),
    ));
    let multilevel = k0.and_then(|k0| {
        let qs = params.q_values.as_ref().ok_or_else(|| "q_values not given".to_string())?;
        need(qs.len() == r.len(), || format!("{} q values for {} levels", qs.len(), r.len()))?;
        let max = qs.iter().cloned().fold(0.0, f64::max);
        need(max > 0.0, || "q values must be positive".to_string())?;
        let big_l = qs.iter().sum::<f64>() / max;
        Ok(1.0 - k0 * (l + 1.0).ln() / (c * big_l))
    });
    let sum_q: f64 = params.q_values.as_ref().map_or(0.0, |qs| qs.iter().sum());
    entries.push(BoundEntry::new("k0_multilevel", None, c * sum_q * nf, true, multilevel));

    Ok(BoundSet {
        params: params.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> BoundParams {
        BoundParams {
            c: 64.0,
            q: 0.01,
            r_sequence: vec![3, 2],
            n: 100,
            ..Default::default()
        }
    }

    #[test]
    fn multi_round_formula_and_limit() {
        let b = evaluate_bounds(&base()).unwrap();
        let e = b.get("multi_round", None).unwrap();
        let expected = 1.0 - 6.0 * 4.0 * 16f64.powf(-1.0) - 40.0 / 128.0;
        assert!((e.unclamped.unwrap() - expected).abs() < 1e-12);
        let mut last = f64::NEG_INFINITY;
        for c in [8.0, 16.0, 64.0, 1e4, 1e8] {
            let v = evaluate_bounds(&BoundParams { c, ..base() }).unwrap();
            let u = v.get("multi_round", None).unwrap().unclamped.unwrap();
            assert!(u > last && u < 1.0);
            last = u;
        }
        assert!(last > 0.99);
    }

    #[test]
    fn small_c_not_applicable() {
        let b = evaluate_bounds(&BoundParams { c: 4.0, ..base() }).unwrap();
        let e = b.get("multi_round", None).unwrap();
        assert!(!e.applicable && e.value.is_none());
    }

    #[test]
    fn level_gate() {
        // Cl = 16: 4 r_1 = 12 fits, and so does 4 r_2 = 8
        let b = evaluate_bounds(&BoundParams { c: 8.0, ..base() }).unwrap();
        assert!(b.get("multi_round_level", Some(1)).unwrap().applicable);
        let b = evaluate_bounds(&BoundParams { c: 8.0, r_sequence: vec![5, 2], ..base() }).unwrap();
        assert!(!b.get("multi_round_level", Some(1)).unwrap().applicable);
        assert!(b.get("multi_round_level", Some(2)).unwrap().applicable);
    }

    #[test]
    fn second_moment_clamps() {
        let p = BoundParams { alpha: Some(0.04), ..base() };
        let b = evaluate_bounds(&p).unwrap();
        let e = b.get("second_moment", None).unwrap();
        // 4q/alpha = 1, so the failure bound exceeds 1
        assert!(e.applicable && e.clamped && e.value == Some(0.0));
        assert!((e.unclamped.unwrap() + 2.0 * (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn small_edges_formula() {
        let p = BoundParams { alpha: Some(0.6), ..base() };
        let e = evaluate_bounds(&p).unwrap().get("small_edges", None).unwrap().clone();
        assert!((e.unclamped.unwrap() - (1.0 - 2.0 * (-10.0f64).exp())).abs() < 1e-12);
        let p = BoundParams { alpha: Some(0.05), ..base() };
        assert!(!evaluate_bounds(&p).unwrap().get("small_edges", None).unwrap().applicable);
    }

    #[test]
    fn conditional_bounds_need_k0() {
        let b = evaluate_bounds(&base()).unwrap();
        assert!(!b.get("k0_single", None).unwrap().applicable);
        let p = BoundParams {
            k0: Some(10.0),
            q_values: Some(vec![0.01, 0.005]),
            ..base()
        };
        let b = evaluate_bounds(&p).unwrap();
        let e = b.get("k0_single", None).unwrap();
        assert!(e.conditional && (e.value.unwrap() - (1.0 - 10.0 / 128.0)).abs() < 1e-12);
        let m = b.get("k0_multilevel", None).unwrap();
        assert!((m.value.unwrap() - (1.0 - 10.0 * 3f64.ln() / (64.0 * 1.5))).abs() < 1e-12);
    }
}
