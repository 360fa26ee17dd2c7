//! Rational tuples `y/x` inside a box where `|P(y/x)| <= kC·W^(-μ-1)`.
//!
//! For each denominator tuple and each choice of the first `k-1` numerators,
//! `G(t) = S·P(y_1/x_1, ..., t/x_k)` is an integer polynomial in the last
//! numerator (`S` clears all denominators). Integer ranges of `t` are bisected
//! and discarded when the i128 interval value of `G` misses the threshold, so
//! every qualifying tuple is found without visiting the whole box.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{denominator_bound_check, MultiPolynomial, RatBox, RationalPointSet};
use crate::arith::{ceil_rat, floor_rat, rat_int, to_f64, Int, Rat};
use crate::error::{invalid, Error, Result};
use crate::partition::Executor;

/// Largest estimated number of numerator prefixes a scan may visit.
pub const SCAN_LIMIT: u128 = 2_000_000_000;

const LEAF: i64 = 8;
const CHUNKS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// One denominator `x` shared by all coordinates; `S = x^r`.
    Shared,
    /// Independent denominators `x_j`; `S = Π x_j^(r_j)`, `W = max x_j`.
    PerCoordinate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub x_max: u64,
    pub mu: Rat,
    pub mode: ScanMode,
    /// Hits within this sup-distance of a known rational point count as near it.
    pub near_radius: Rat,
}

impl ScanConfig {
    pub fn new(x_max: u64, mu: Rat) -> Self {
        Self {
            x_max,
            mu,
            mode: ScanMode::Shared,
            near_radius: Rat::new(1.into(), 16.into()),
        }
    }

    pub fn per_coordinate(mut self) -> Self {
        self.mode = ScanMode::PerCoordinate;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HitClass {
    NearRationalPoint { point: usize, distance: Rat },
    Outlier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanHit {
    pub denominators: Vec<u64>,
    pub numerators: Vec<i64>,
    pub value: Rat,
    pub class: HitClass,
}

impl ScanHit {
    /// `max x_j`.
    pub fn window(&self) -> u64 {
        self.denominators.iter().copied().max().unwrap_or(0)
    }

    pub fn point(&self) -> Vec<Rat> {
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(&y, &x)| Rat::new(Int::from(y), Int::from(x)))
            .collect()
    }

    pub fn is_outlier(&self) -> bool {
        self.class == HitClass::Outlier
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub mode: ScanMode,
    pub mu: Rat,
    pub x_max: u64,
    pub derivative_bound: Rat,
    /// From this window on, a nonzero value is provably above the threshold,
    /// so every hit is an exact zero of `P`.
    pub cutoff: Option<u64>,
    pub hits: Vec<ScanHit>,
    pub denominator_tuples: u64,
    pub prefixes: u64,
    /// Candidates that passed the integer filter and were evaluated exactly.
    pub bound_checks: u64,
    pub bound_violations: u64,
}

impl ScanReport {
    pub fn outliers(&self) -> impl Iterator<Item = &ScanHit> {
        self.hits.iter().filter(|h| h.is_outlier())
    }

    pub fn hits_from(&self, window: u64) -> impl Iterator<Item = &ScanHit> {
        self.hits.iter().filter(move |h| h.window() >= window)
    }
}

#[derive(Default)]
struct Partial {
    hits: Vec<ScanHit>,
    tuples: u64,
    prefixes: u64,
    checks: u64,
    violations: u64,
}

struct Scanner<'a> {
    p: &'a MultiPolynomial,
    cleared: MultiPolynomial,
    terms: Vec<(Vec<u32>, i128)>,
    region: &'a RatBox,
    points: &'a RationalPointSet,
    cfg: &'a ScanConfig,
    absolute: u32,
    per_variable: Vec<u32>,
    /// `kC` for `P` and for the cleared polynomial.
    kc: Rat,
    kc_cleared_f: f64,
    mu_f: f64,
}

pub fn variety_approx_scan<E: Executor>(
    p: &MultiPolynomial,
    region: &RatBox,
    points: &RationalPointSet,
    cfg: &ScanConfig,
    exec: &E,
) -> Result<ScanReport> {
    let deg = p.degrees()?;
    let k = p.k();
    if region.k() != k {
        return Err(Error::DimensionMismatch { expected: k, got: region.k() });
    }
    if !cfg.mu.is_positive() {
        return Err(invalid("scan exponent must be positive"));
    }
    if cfg.x_max == 0 {
        return Err(invalid("x_max must be positive"));
    }
    if points.points.iter().any(|v| v.len() != k) {
        return Err(invalid("rational point set has the wrong dimension"));
    }
    let cost = estimate_cost(region, cfg, k)?;
    if cost > SCAN_LIMIT {
        return Err(Error::CostGuard {
            what: "variety scan".into(),
            cost,
            limit: SCAN_LIMIT,
        });
    }
    let (cleared, _) = p.cleared();
    let terms = cleared
        .terms()
        .map(|(e, c)| {
            let c = c.to_integer().to_i128().ok_or_else(|| Error::Overflow("coefficient exceeds i128".into()))?;
            Ok((e.clone(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    let kf = rat_int(Int::from(k));
    let c = p.derivative_bound(&region.sides)?;
    let kc = &kf * &c;
    let kc_cleared = &kf * cleared.derivative_bound(&region.sides)?;
    let lower = match cfg.mode {
        ScanMode::Shared => deg.absolute,
        ScanMode::PerCoordinate => deg.refined,
    };
    let scanner = Scanner {
        p,
        terms,
        region,
        points,
        cfg,
        absolute: deg.absolute,
        per_variable: deg.per_variable.clone(),
        kc_cleared_f: to_f64(&kc_cleared),
        mu_f: to_f64(&cfg.mu),
        cleared,
        kc: kc.clone(),
    };
    let parts = exec.map(CHUNKS, |i| scanner.chunk(i));
    let mut total = Partial::default();
    for part in parts {
        let part = part?;
        total.hits.extend(part.hits);
        total.tuples += part.tuples;
        total.prefixes += part.prefixes;
        total.checks += part.checks;
        total.violations += part.violations;
    }
    total
        .hits
        .sort_by(|a, b| (a.window(), &a.denominators, &a.numerators).cmp(&(b.window(), &b.denominators, &b.numerators)));
    Ok(ScanReport {
        mode: cfg.mode,
        mu: cfg.mu.clone(),
        x_max: cfg.x_max,
        derivative_bound: c,
        cutoff: cutoff(&kc, &cfg.mu, lower),
        hits: total.hits,
        denominator_tuples: total.tuples,
        prefixes: total.prefixes,
        bound_checks: total.checks,
        bound_violations: total.violations,
    })
}

/// Upper estimate of the number of numerator prefixes.
fn estimate_cost(region: &RatBox, cfg: &ScanConfig, k: usize) -> Result<u128> {
    let x = cfg.x_max as u128;
    let mut cost: u128 = match cfg.mode {
        ScanMode::Shared => x,
        ScanMode::PerCoordinate => x.saturating_pow(k as u32),
    };
    for side in &region.sides[..k - 1] {
        let w = ceil_rat(&(side.width() * rat_int(Int::from(cfg.x_max))))
            .to_u128()
            .ok_or_else(|| Error::Overflow("box too wide".into()))?;
        cost = cost.saturating_mul(w + 1);
    }
    Ok(cost)
}

/// Least `W0` with `W^(μ+1-L) > kC` for all `W >= W0`, when `μ+1 > L`.
fn cutoff(kc: &Rat, mu: &Rat, lower: u32) -> Option<u64> {
    let e = mu + Rat::from_integer(1.into()) - Rat::from_integer(lower.into());
    if !e.is_positive() {
        return None;
    }
    // W^(a/b) > kC  <=>  W^a > kC^b
    let a = e.numer().to_u32()?;
    let b = e.denom().to_u32()?;
    let rhs = num_traits::pow(kc.clone(), b as usize);
    let above = |w: u64| rat_int(num_traits::pow(Int::from(w), a as usize)) > rhs;
    let guess = libm::pow(to_f64(kc).max(1.0), 1.0 / to_f64(&e)).floor() as u64;
    let mut w = guess.saturating_sub(2).max(1);
    while !above(w) {
        w += 1;
    }
    while w > 1 && above(w - 1) {
        w -= 1;
    }
    Some(w)
}

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("{what} exceeds i128"))
}

fn int_range(side: &super::Interval, x: u64) -> Result<Option<(i64, i64)>> {
    let xr = rat_int(Int::from(x));
    let lo = ceil_rat(&(&side.lo * &xr)).to_i64().ok_or_else(|| overflow("numerator"))?;
    let hi = floor_rat(&(&side.hi * &xr)).to_i64().ok_or_else(|| overflow("numerator"))?;
    Ok((lo <= hi).then_some((lo, hi)))
}

impl Scanner<'_> {
    fn k(&self) -> usize {
        self.p.k()
    }

    fn chunk(&self, i: usize) -> Result<Partial> {
        let mut out = Partial::default();
        let k = self.k();
        let firsts = (1..=self.cfg.x_max).filter(|x| (*x as usize) % CHUNKS == i);
        for x1 in firsts {
            match self.cfg.mode {
                ScanMode::Shared => self.tuple(&alloc::vec![x1; k], &mut out)?,
                ScanMode::PerCoordinate => {
                    let mut xs = alloc::vec![1u64; k];
                    xs[0] = x1;
                    loop {
                        self.tuple(&xs, &mut out)?;
                        if !odometer_u64(&mut xs[1..], self.cfg.x_max) {
                            break;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `S` and the per-term multipliers `M_e` with `S·Π (y_j/x_j)^(e_j) = M_e·Π y_j^(e_j)`.
    fn scaling(&self, xs: &[u64]) -> Result<(i128, Vec<i128>)> {
        let pw = |x: u64, e: u32| (x as i128).checked_pow(e).ok_or_else(|| overflow("scale"));
        match self.cfg.mode {
            ScanMode::Shared => {
                let s = pw(xs[0], self.absolute)?;
                let m = self
                    .terms
                    .iter()
                    .map(|(e, _)| pw(xs[0], self.absolute - e.iter().sum::<u32>()))
                    .collect::<Result<_>>()?;
                Ok((s, m))
            }
            ScanMode::PerCoordinate => {
                let mut s = 1i128;
                for (&x, &r) in xs.iter().zip(&self.per_variable) {
                    s = s.checked_mul(pw(x, r)?).ok_or_else(|| overflow("scale"))?;
                }
                let m = self
                    .terms
                    .iter()
                    .map(|(e, _)| {
                        let mut v = 1i128;
                        for ((&x, &r), &d) in xs.iter().zip(&self.per_variable).zip(e) {
                            v = v.checked_mul(pw(x, r - d)?).ok_or_else(|| overflow("scale"))?;
                        }
                        Ok(v)
                    })
                    .collect::<Result<_>>()?;
                Ok((s, m))
            }
        }
    }

    fn tuple(&self, xs: &[u64], out: &mut Partial) -> Result<()> {
        let k = self.k();
        let mut ranges = Vec::with_capacity(k);
        for (side, &x) in self.region.sides.iter().zip(xs) {
            match int_range(side, x)? {
                Some(r) => ranges.push(r),
                None => return Ok(()),
            }
        }
        out.tuples += 1;
        let w = *xs.iter().max().expect("k >= 1");
        let (s, mult) = self.scaling(xs)?;
        let threshold = (s as f64) * self.kc_cleared_f * libm::pow(w as f64, -self.mu_f - 1.0) * (1.0 + 1e-6);
        let top = self.per_variable[k - 1] as usize;
        let mut ys: Vec<i64> = ranges[..k - 1].iter().map(|r| r.0).collect();
        let mut found = Vec::new();
        loop {
            out.prefixes += 1;
            let mut g = alloc::vec![0i128; top + 1];
            for ((e, c), m) in self.terms.iter().zip(&mult) {
                let mut v = c.checked_mul(*m).ok_or_else(|| overflow("coefficient"))?;
                for (&y, &d) in ys.iter().zip(e) {
                    let yp = (y as i128).checked_pow(d).ok_or_else(|| overflow("numerator power"))?;
                    v = v.checked_mul(yp).ok_or_else(|| overflow("coefficient"))?;
                }
                let slot = &mut g[e[k - 1] as usize];
                *slot = slot.checked_add(v).ok_or_else(|| overflow("coefficient"))?;
            }
            found.clear();
            search(&g, ranges[k - 1], threshold, &mut found)?;
            for &t in &found {
                let mut numerators = ys.clone();
                numerators.push(t);
                self.candidate(xs, w, numerators, out)?;
            }
            if !odometer_i64(&mut ys, &ranges[..k - 1]) {
                break;
            }
        }
        Ok(())
    }

    fn candidate(&self, xs: &[u64], w: u64, numerators: Vec<i64>, out: &mut Partial) -> Result<()> {
        let point: Vec<Rat> = numerators
            .iter()
            .zip(xs)
            .map(|(&y, &x)| Rat::new(Int::from(y), Int::from(x)))
            .collect();
        out.checks += 1;
        match denominator_bound_check(&self.cleared, &point) {
            Err(Error::BoundViolation(_)) => out.violations += 1,
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        let value = self.p.eval(&point)?;
        if !within_threshold(&value, &self.kc, w, &self.cfg.mu) {
            return Ok(());
        }
        let class = match self.points.nearest(&point) {
            Some((i, d)) if d <= self.cfg.near_radius => HitClass::NearRationalPoint { point: i, distance: d },
            _ => HitClass::Outlier,
        };
        out.hits.push(ScanHit {
            denominators: xs.to_vec(),
            numerators,
            value,
            class,
        });
        Ok(())
    }
}

/// `|v| <= kC·W^(-μ-1)`, decided exactly as `|v|^b·W^(a+b) <= kC^b` for `μ = a/b`.
pub fn within_threshold(v: &Rat, kc: &Rat, w: u64, mu: &Rat) -> bool {
    if v.is_zero() {
        return true;
    }
    let a = mu.numer().to_usize().expect("exponent numerator fits");
    let b = mu.denom().to_usize().expect("exponent denominator fits");
    let lhs = num_traits::pow(v.abs(), b) * rat_int(num_traits::pow(Int::from(w), a + b));
    lhs <= num_traits::pow(kc.clone(), b)
}

fn odometer_i64(ys: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for i in (0..ys.len()).rev() {
        if ys[i] < ranges[i].1 {
            ys[i] += 1;
            return true;
        }
        ys[i] = ranges[i].0;
    }
    false
}

fn odometer_u64(xs: &mut [u64], max: u64) -> bool {
    for i in (0..xs.len()).rev() {
        if xs[i] < max {
            xs[i] += 1;
            return true;
        }
        xs[i] = 1;
    }
    false
}

fn eval_i128(g: &[i128], t: i64) -> Result<i128> {
    let t = t as i128;
    let mut acc = 0i128;
    for c in g.iter().rev() {
        acc = acc
            .checked_mul(t)
            .and_then(|v| v.checked_add(*c))
            .ok_or_else(|| overflow("value"))?;
    }
    Ok(acc)
}

/// Exact range of `G` over the integers in `[a, b]`, term by term.
fn range_i128(g: &[i128], a: i64, b: i64) -> Result<(i128, i128)> {
    let (a, b) = (a as i128, b as i128);
    let (mut lo, mut hi) = (0i128, 0i128);
    for (d, &c) in g.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let d = d as u32;
        let pa = a.checked_pow(d).ok_or_else(|| overflow("power"))?;
        let pb = b.checked_pow(d).ok_or_else(|| overflow("power"))?;
        let (mut plo, phi) = if d % 2 == 1 { (pa, pb) } else { (pa.min(pb), pa.max(pb)) };
        if d.is_multiple_of(2) && d > 0 && a <= 0 && b >= 0 {
            plo = 0;
        }
        let (x, y) = (c.checked_mul(plo).ok_or_else(|| overflow("term"))?, c.checked_mul(phi).ok_or_else(|| overflow("term"))?);
        lo = lo.checked_add(x.min(y)).ok_or_else(|| overflow("sum"))?;
        hi = hi.checked_add(x.max(y)).ok_or_else(|| overflow("sum"))?;
    }
    Ok((lo, hi))
}

/// Integers `t` in `range` with `|G(t)| <= threshold`, ascending.
fn search(g: &[i128], range: (i64, i64), threshold: f64, out: &mut Vec<i64>) -> Result<()> {
    let mut stack = alloc::vec![range];
    while let Some((a, b)) = stack.pop() {
        if b - a < LEAF {
            for t in a..=b {
                if (eval_i128(g, t)?.unsigned_abs() as f64) <= threshold {
                    out.push(t);
                }
            }
            continue;
        }
        let (lo, hi) = range_i128(g, a, b)?;
        if lo as f64 > threshold || (hi as f64) < -threshold {
            continue;
        }
        let m = a + (b - a) / 2;
        stack.push((m + 1, b));
        stack.push((a, m));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::partition::Sequential;
    use crate::variety::{rational_point_search, Interval};

    fn circle(r: i64) -> MultiPolynomial {
        MultiPolynomial::new(2, [(alloc::vec![2, 0], rat(1, 1)), (alloc::vec![0, 2], rat(1, 1)), (alloc::vec![0, 0], rat(-r, 1))]).unwrap()
    }

    /// Every box tuple, evaluated exactly.
    fn brute(p: &MultiPolynomial, region: &RatBox, cfg: &ScanConfig) -> Vec<(Vec<u64>, Vec<i64>)> {
        let k = p.k();
        let c = p.derivative_bound(&region.sides).unwrap();
        let kc = rat_int(Int::from(k)) * c;
        let mut out = Vec::new();
        for x in 1..=cfg.x_max {
            let ranges: Vec<_> = region.sides.iter().map(|s| int_range(s, x).unwrap().unwrap()).collect();
            let mut ys: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let pt: Vec<Rat> = ys.iter().map(|&y| Rat::new(Int::from(y), Int::from(x))).collect();
                if within_threshold(&p.eval(&pt).unwrap(), &kc, x, &cfg.mu) {
                    out.push((alloc::vec![x; k], ys.clone()));
                }
                if !odometer_i64(&mut ys, &ranges) {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        let region = RatBox::cube(2, rat(3, 2));
        for (p, mu) in [(MultiPolynomial::fermat(2, 3), rat(1, 1)), (circle(1), rat(1, 2)), (circle(3), rat(3, 2))] {
            let cfg = ScanConfig::new(40, mu);
            let pts = rational_point_search(&p, 10).unwrap();
            let rep = variety_approx_scan(&p, &region, &pts, &cfg, &Sequential).unwrap();
            let mut got: Vec<_> = rep.hits.iter().map(|h| (h.denominators.clone(), h.numerators.clone())).collect();
            got.sort();
            let mut want = brute(&p, &region, &cfg);
            want.sort();
            assert_eq!(got, want, "{p}");
            assert_eq!(rep.bound_violations, 0);
        }
    }

    #[test]
    fn fermat_cutoff_and_clusters() {
        let p = MultiPolynomial::fermat(2, 3);
        let region = RatBox::cube(2, rat(3, 2));
        let pts = rational_point_search(&p, 20).unwrap();
        let rep = variety_approx_scan(&p, &region, &pts, &ScanConfig::new(400, rat(5, 2)), &Sequential).unwrap();
        // kC = 2·27/4, cutoff is the first W with W^(1/2) > 27/2.
        assert_eq!(rep.cutoff, Some(183));
        let late: Vec<_> = rep.hits_from(183).collect();
        assert_eq!(late.len(), 2 * (400 - 182));
        for h in late {
            assert!(h.value.is_zero());
            assert!(matches!(h.class, HitClass::NearRationalPoint { distance: ref d, .. } if d.is_zero()));
        }
        // 6^3 + 8^3 = 9^3 - 1 is an early near miss far from both points.
        assert!(rep.outliers().any(|h| h.denominators[0] == 9 && h.numerators == [6, 8]));
    }

    #[test]
    fn unit_circle_below_dirichlet_has_irrational_hits() {
        let p = circle(1);
        let pts = rational_point_search(&p, 20).unwrap();
        let rep = variety_approx_scan(&p, &RatBox::cube(2, rat(3, 2)), &pts, &ScanConfig::new(200, rat(2, 5)), &Sequential).unwrap();
        assert_eq!(rep.cutoff, None);
        assert!(rep.hits_from(150).any(|h| !h.value.is_zero()));
    }

    #[test]
    fn per_coordinate_matches_shared_on_diagonal() {
        let p = circle(3);
        let region = RatBox::new(alloc::vec![Interval::new(rat(0, 1), rat(2, 1)); 2]);
        let pts = RationalPointSet::default();
        let cfg = ScanConfig::new(30, rat(3, 2));
        let shared = variety_approx_scan(&p, &region, &pts, &cfg, &Sequential).unwrap();
        let per = variety_approx_scan(&p, &region, &pts, &cfg.clone().per_coordinate(), &Sequential).unwrap();
        // x^2 = x·x clears both, and only the threshold exponent base differs.
        let diag: Vec<_> = per.hits.iter().filter(|h| h.denominators[0] == h.denominators[1]).map(|h| &h.numerators).collect();
        let shared: Vec<_> = shared.hits.iter().map(|h| &h.numerators).collect();
        assert_eq!(diag.len(), shared.len());
        assert_eq!(per.cutoff, None);
        assert!(per.hits.len() > shared.len());
    }

    #[test]
    fn cost_guard() {
        let p = MultiPolynomial::fermat(3, 3);
        let cfg = ScanConfig::new(100_000, rat(3, 1));
        let err = variety_approx_scan(&p, &RatBox::cube(3, rat(2, 1)), &RationalPointSet::default(), &cfg, &Sequential).unwrap_err();
        assert!(matches!(err, Error::CostGuard { .. }));
    }
}
