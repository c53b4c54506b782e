//! Rank-based comparison: Kruskal–Wallis, Mann–Whitney U, Holm step-down
//! adjustment and significance symbols.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SampleGroup {
    pub label: String,
    pub values: Vec<f64>,
}

impl SampleGroup {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::Stats(format!("group {label} is empty")));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Stats(format!("group {label} contains non-finite value {v}")));
        }
        Ok(Self { label, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    pub fn median(&self) -> f64 {
        median(&self.values)
    }

    pub fn std_dev(&self) -> f64 {
        std_dev(&self.values)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Linear-interpolation quantile (the "type 7" definition).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// Sample standard deviation (n − 1 denominator); 0 for a single value.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub adjusted_p: Option<f64>,
}

/// Ranks 1..N; tied values share the mean of the ranks they span.
pub fn rank_with_ties(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let r = (i + 1 + j) as f64 / 2.0;
        for &o in &order[i..j] {
            ranks[o] = r;
        }
        i = j;
    }
    ranks
}

/// Σ (t³ − t) over tie groups of `values`.
fn tie_term(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        total += t * t * t - t;
        i = j;
    }
    total
}

/// Kruskal–Wallis H with tie correction, referred to χ² with `groups − 1` df.
pub fn kruskal_wallis(groups: &[SampleGroup]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::Stats(format!("need at least 2 groups, got {}", groups.len())));
    }
    if let Some(g) = groups.iter().find(|g| g.is_empty()) {
        return Err(Error::Stats(format!("group {} is empty", g.label)));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.values.iter().copied()).collect();
    let n = pooled.len() as f64;
    let correction = 1.0 - tie_term(&pooled) / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            adjusted_p: None,
        });
    }
    let ranks = rank_with_ties(&pooled);
    let center = (n + 1.0) / 2.0;
    let mut offset = 0;
    let mut h = 0.0;
    for g in groups {
        let nj = g.len();
        let mean_rank = ranks[offset..offset + nj].iter().sum::<f64>() / nj as f64;
        h += nj as f64 * (mean_rank - center).powi(2);
        offset += nj;
    }
    let h = 12.0 / (n * (n + 1.0)) * h / correction;
    let chi = ChiSquared::new((groups.len() - 1) as f64).map_err(|e| Error::Stats(e.to_string()))?;
    Ok(TestResult {
        statistic: h,
        p_value: chi.sf(h).clamp(0.0, 1.0),
        adjusted_p: None,
    })
}

/// Mann–Whitney U of `a` against `b`: `U = R_a − n_a(n_a + 1)/2`, so 0 means
/// every value of `a` is below every value of `b`. Two-sided p from the
/// tie-corrected normal approximation with continuity correction.
pub fn mann_whitney_u(a: &SampleGroup, b: &SampleGroup) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Stats("Mann-Whitney U needs two non-empty groups".into()));
    }
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let pooled: Vec<f64> = a.values.iter().chain(&b.values).copied().collect();
    let ranks = rank_with_ties(&pooled);
    let ra: f64 = ranks[..a.len()].iter().sum();
    let u = ra - na * (na + 1.0) / 2.0;

    let n = na + nb;
    let mu = na * nb / 2.0;
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term(&pooled) / (n * (n - 1.0)));
    if !(var > 0.0) {
        return Ok(TestResult {
            statistic: u,
            p_value: 1.0,
            adjusted_p: None,
        });
    }
    let z = ((u - mu).abs() - 0.5).max(0.0) / var.sqrt();
    Ok(TestResult {
        statistic: u,
        p_value: erfc(z / std::f64::consts::SQRT_2).min(1.0),
        adjusted_p: None,
    })
}

/// Holm step-down adjustment, returned in the input order.
pub fn holm_adjust(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running: f64 = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        let scaled = ((m - rank) as f64 * p_values[i]).min(1.0);
        running = running.max(scaled);
        adjusted[i] = running;
    }
    adjusted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    /// Adjusted p below 0.01.
    MuchBetter,
    /// Adjusted p in [0.01, 0.05).
    Better,
    /// No significant difference.
    Similar,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::MuchBetter, Symbol::Better, Symbol::Similar];

    pub fn from_p(adjusted_p: f64) -> Self {
        if adjusted_p < 0.01 {
            Symbol::MuchBetter
        } else if adjusted_p < 0.05 {
            Symbol::Better
        } else {
            Symbol::Similar
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::MuchBetter => "≫",
            Symbol::Better => ">",
            Symbol::Similar => "≈",
        }
    }

    /// Plain-ASCII spelling used in CSV output.
    pub fn as_ascii(self) -> &'static str {
        match self {
            Symbol::MuchBetter => ">>",
            Symbol::Better => ">",
            Symbol::Similar => "~",
        }
    }

    /// Accepts either spelling.
    pub fn parse(s: &str) -> Result<Self> {
        Symbol::ALL
            .into_iter()
            .find(|sym| sym.as_str() == s || sym.as_ascii() == s)
            .ok_or_else(|| Error::Parse(format!("unknown significance symbol {s:?}")))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Significance {
    pub symbol: Symbol,
    /// Label of the group with the lower median (mean on equal medians);
    /// `None` when both agree.
    pub better: Option<String>,
}

pub fn render_significance(adjusted_p: f64, better: Option<&str>) -> Significance {
    Significance {
        symbol: Symbol::from_p(adjusted_p),
        better: better.map(str::to_string),
    }
}

/// The better (lower) of two groups by median, then by mean.
pub fn better_group<'a>(a: &'a SampleGroup, b: &'a SampleGroup) -> Option<&'a SampleGroup> {
    let (ma, mb) = (a.median(), b.median());
    if ma < mb {
        return Some(a);
    }
    if mb < ma {
        return Some(b);
    }
    let (ea, eb) = (a.mean(), b.mean());
    if ea < eb {
        Some(a)
    } else if eb < ea {
        Some(b)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(label: &str, v: &[f64]) -> SampleGroup {
        SampleGroup::new(label, v.to_vec()).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_with_ties(&[10.0, 20.0, 30.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_with_ties(&[5.0, 5.0]), vec![1.5, 1.5]);
        assert_eq!(rank_with_ties(&[1.0, 2.0, 2.0, 3.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(rank_with_ties(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn kruskal_identical_groups() {
        let v = [1.0, 4.0, 2.0, 9.0];
        let r = kruskal_wallis(&[g("a", &v), g("b", &v), g("c", &v)]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = kruskal_wallis(&[g("a", &[2.0, 2.0]), g("b", &[2.0])]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(kruskal_wallis(&[g("a", &v)]).is_err());
    }

    #[test]
    fn kruskal_separated_groups() {
        let r = kruskal_wallis(&[g("a", &[1.0, 2.0, 3.0]), g("b", &[4.0, 5.0, 6.0]), g("c", &[7.0, 8.0, 9.0])]).unwrap();
        assert!((r.statistic - 7.2).abs() < 1e-12);
    }

    #[test]
    fn mwu_examples() {
        let r = mann_whitney_u(&g("a", &[1.0, 2.0, 3.0]), &g("b", &[4.0, 5.0, 6.0])).unwrap();
        assert_eq!(r.statistic, 0.0);
        let r = mann_whitney_u(&g("b", &[4.0, 5.0, 6.0]), &g("a", &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(r.statistic, 9.0);
        let v = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let r = mann_whitney_u(&g("a", &v), &g("b", &v)).unwrap();
        assert_eq!(r.statistic, 32.0);
        assert!(r.p_value > 0.99);
        let r = mann_whitney_u(&g("a", &[7.0; 5]), &g("b", &[7.0; 4])).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mwu_extreme_separation() {
        let a: Vec<f64> = (0..30).map(f64::from).collect();
        let b: Vec<f64> = (100..130).map(f64::from).collect();
        assert!(mann_whitney_u(&g("a", &a), &g("b", &b)).unwrap().p_value < 1e-6);
    }

    #[test]
    fn holm_examples() {
        assert_eq!(holm_adjust(&[0.2]), vec![0.2]);
        let adj = holm_adjust(&[0.01, 0.04, 0.03]);
        let expected = [0.03, 0.06, 0.06];
        for (a, e) in adj.iter().zip(expected) {
            assert!((a - e).abs() < 1e-15, "{adj:?}");
        }
        assert_eq!(holm_adjust(&[1.0, 1.0, 1.0]), vec![1.0; 3]);
        assert!(holm_adjust(&[]).is_empty());
    }

    #[test]
    fn symbols() {
        assert_eq!(Symbol::from_p(0.005), Symbol::MuchBetter);
        assert_eq!(Symbol::from_p(0.01), Symbol::Better);
        assert_eq!(Symbol::from_p(0.03), Symbol::Better);
        assert_eq!(Symbol::from_p(0.05), Symbol::Similar);
        assert_eq!(Symbol::from_p(0.5).as_str(), "≈");
        for s in Symbol::ALL {
            assert_eq!(Symbol::parse(s.as_str()).unwrap(), s);
            assert_eq!(Symbol::parse(s.as_ascii()).unwrap(), s);
        }
        let sig = render_significance(0.03, Some("P1"));
        assert_eq!(sig.symbol.as_str(), ">");
        assert_eq!(sig.better.as_deref(), Some("P1"));
    }

    #[test]
    fn better_by_median_then_mean() {
        let a = g("a", &[1.0, 2.0, 100.0]);
        let b = g("b", &[0.0, 3.0, 4.0]);
        assert_eq!(better_group(&a, &b).unwrap().label, "a");
        let c = g("c", &[0.0, 2.0, 3.0]);
        assert_eq!(better_group(&a, &c).unwrap().label, "c");
        assert!(better_group(&a, &a.clone()).is_none());
    }

    #[test]
    fn summary_helpers() {
        assert_eq!(median(&[3.0, 1.0, 2.0, 10.0]), 2.5);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), 2.0);
        assert!((std_dev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]) - 2.138089935299395).abs() < 1e-12);
        assert_eq!(std_dev(&[5.0]), 0.0);
        assert!(SampleGroup::new("x", vec![]).is_err());
        assert!(SampleGroup::new("x", vec![f64::NAN]).is_err());
    }
}
