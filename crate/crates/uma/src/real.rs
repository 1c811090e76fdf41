//! Real-valued snapshots: 2-weights, discounted integrator updates,
//! thresholded derived PCRs, minsets and the concentration bound.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::pcr::{disjoint_pairs, Pcr};
use crate::pcs::{complement, Lit, LitSet, Sigma, FALSE, TRUE};

/// Discount schedule `q(t)` for `w(t+1) = q(t)·w(t) + (1−q(t))·x(t+1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schedule<F> {
    /// `q(t) = (t+1)/(t+2)`: the running average of all observations.
    Empirical,
    /// A constant `q ∈ (0, 1]`.
    Fixed(F),
}

impl<F: Float> Schedule<F> {
    /// `q(t)`.
    pub fn q(&self, t: u64) -> F {
        match *self {
            Schedule::Empirical => {
                let t = F::from(t).expect("step fits the scalar type");
                (t + F::one()) / (t + F::one() + F::one())
            }
            Schedule::Fixed(q) => q,
        }
    }
}

/// Violations found by [`RealSnapshot::validate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidityReport {
    /// `(condition number, worst residual)` for each violated condition.
    pub violations: Vec<(u8, f64)>,
    /// Worst residual per condition 1..=5, whether violated or not.
    pub residuals: [f64; 5],
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A real-valued 2-weight with thresholds and a discount schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSnapshot<F> {
    sigma: Sigma,
    w: Vec<F>,
    tau: Vec<F>,
    schedule: Schedule<F>,
    /// Number of observations absorbed.
    count: u64,
}

impl<F: Float> RealSnapshot<F> {
    /// An uninitialized snapshot with uniform threshold `tau`.
    pub fn new(sigma: Sigma, schedule: Schedule<F>, tau: F) -> Result<Self> {
        if let Schedule::Fixed(q) = schedule {
            if !(q > F::zero() && q <= F::one()) {
                return Err(Error::BadParameter("discount must lie in (0, 1]".into()));
            }
        }
        if !(tau > F::zero() && tau < F::one()) {
            return Err(Error::BadParameter("threshold must lie in (0, 1)".into()));
        }
        let n = sigma.len();
        Ok(RealSnapshot { sigma, w: vec![F::zero(); n * n], tau: vec![tau; n * n], schedule, count: 0 })
    }

    /// Wraps an explicit weight matrix, counted as one observation.
    pub fn from_matrix(sigma: Sigma, w: Vec<F>, schedule: Schedule<F>, tau: F) -> Result<Self> {
        let mut s = RealSnapshot::new(sigma, schedule, tau)?;
        if w.len() != s.w.len() {
            return Err(Error::BadParameter("matrix size does not match alphabet".into()));
        }
        s.count = u64::from(w.iter().any(|x| *x != F::zero()));
        s.w = w;
        Ok(s)
    }

    /// `w_ab = r·[a, b ∈ u]`.
    pub fn point_mass(sigma: &Sigma, u: &LitSet, r: F, schedule: Schedule<F>, tau: F) -> Result<Self> {
        let mut s = RealSnapshot::new(sigma.clone(), schedule, tau)?;
        s.update(u, r)?;
        Ok(s)
    }

    /// Sets `τ_ab` together with its mirrored entries `τ_ba`, `τ_a*b`, `τ_ba*`
    /// and `τ_a*b*`, `τ_b*a*`, `τ_ab*`, `τ_b*a`.
    pub fn set_tau(&mut self, a: Lit, b: Lit, tau: F) {
        let n = self.sigma.len();
        for (x, y) in [(a, b), (complement(a), b), (a, complement(b)), (complement(a), complement(b))] {
            self.tau[x * n + y] = tau;
            self.tau[y * n + x] = tau;
        }
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn schedule(&self) -> Schedule<F> {
        self.schedule
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn matrix(&self) -> &[F] {
        &self.w
    }

    #[inline]
    pub fn get(&self, a: Lit, b: Lit) -> F {
        self.w[a * self.sigma.len() + b]
    }

    #[inline]
    pub fn tau(&self, a: Lit, b: Lit) -> F {
        self.tau[a * self.sigma.len() + b]
    }

    /// `w_a = w_aa`.
    #[inline]
    pub fn w_a(&self, a: Lit) -> F {
        self.get(a, a)
    }

    /// `w_∅ = w_a + w_a*`, read off the pair `{0, 1}`.
    pub fn w_empty(&self) -> F {
        self.w_a(TRUE) + self.w_a(FALSE)
    }

    /// True when every weight is zero.
    pub fn is_trivial(&self) -> bool {
        self.w.iter().all(|x| *x == F::zero())
    }

    /// Absorbs observation `u` with value `v ≥ 1`. The first observation
    /// installs the point mass; later ones apply the discount schedule.
    pub fn update(&mut self, u: &LitSet, v: F) -> Result<()> {
        if !(v >= F::one()) {
            return Err(Error::BadValue("real value must be at least 1".into()));
        }
        if !self.sigma.is_complete(u) {
            return Err(Error::BadParameter("observation must be a complete selection".into()));
        }
        let (q, add) = if self.count == 0 {
            (F::zero(), v)
        } else {
            let q = self.schedule.q(self.count - 1);
            (q, (F::one() - q) * v)
        };
        self.apply(u, q, add);
        self.count += 1;
        Ok(())
    }

    /// Discounted update with an explicit `q ∈ (0, 1]`, ignoring the schedule.
    pub fn update_with_q(&mut self, u: &LitSet, v: F, q: F) -> Result<()> {
        if !(q > F::zero() && q <= F::one()) {
            return Err(Error::BadParameter("discount must lie in (0, 1]".into()));
        }
        if !(v >= F::one()) {
            return Err(Error::BadValue("real value must be at least 1".into()));
        }
        if self.count == 0 {
            return self.update(u, v);
        }
        self.apply(u, q, (F::one() - q) * v);
        self.count += 1;
        Ok(())
    }

    fn apply(&mut self, u: &LitSet, q: F, add: F) {
        let n = self.sigma.len();
        if q != F::one() {
            self.w.iter_mut().for_each(|x| *x = *x * q);
        }
        let lits: Vec<Lit> = u.iter().collect();
        for &a in &lits {
            let row = &mut self.w[a * n..(a + 1) * n];
            for &b in &lits {
                row[b] = row[b] + add;
            }
        }
    }

    /// Checks the 2-weight conditions with tolerance `eps_rel·w_∅`.
    pub fn validate(&self, eps_rel: f64) -> ValidityReport {
        let s = &self.sigma;
        let n = s.len();
        let g = |a: Lit, b: Lit| self.get(a, b).to_f64().unwrap_or(f64::NAN);
        let c = complement;
        let we = g(TRUE, TRUE) + g(FALSE, FALSE);
        let tol = eps_rel * we.abs();
        let mut res = [0.0f64; 5];
        for a in 0..n {
            for b in 0..n {
                // Symmetry and nonnegativity fold into condition 1.
                res[0] = res[0].max((g(a, b) - g(b, a)).abs()).max(-g(a, b));
            }
            res[0] = res[0].max(g(FALSE, a).abs()).max(g(a, c(a)).abs());
            res[1] = res[1].max((g(a, a) + g(c(a), c(a)) - we).abs());
            for b in 0..n {
                res[2] = res[2].max((g(a, a) - g(a, b) - g(a, c(b))).abs());
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = g(a, c(b));
                let ba = g(c(a), b);
                for cc in 0..n {
                    let lhs = ab + g(b, c(cc)) + g(cc, c(a));
                    let rhs = ba + g(c(b), cc) + g(c(cc), a);
                    res[3] = res[3].max((lhs - rhs).abs());
                    let quad = g(a, c(cc)) + g(c(a), cc) - (ab + ba + g(b, c(cc)) + g(c(b), cc));
                    res[4] = res[4].max(quad);
                }
            }
        }
        let violations = res
            .iter()
            .enumerate()
            .filter(|(_, r)| !(**r <= tol))
            .map(|(i, r)| (i as u8 + 1, *r))
            .collect();
        ValidityReport { violations, residuals: res }
    }

    /// The thresholded derived PCR: `ab` iff the pairs of `a, b` differ and
    /// `w_ab* < min(τ_ab·w_∅, w_ab, w_a*b*, w_a*b)` or `w_ab* = w_a*b = 0`.
    pub fn derived_pcr(&self) -> Result<Pcr> {
        if self.is_trivial() {
            return Err(Error::TrivialSnapshot);
        }
        let we = self.w_empty();
        let mut p = Pcr::new_orthogonal(self.sigma.clone());
        for a in self.sigma.lits() {
            for b in self.sigma.lits() {
                if !disjoint_pairs(a, b) {
                    continue;
                }
                let x = self.get(a, complement(b));
                let y = self.get(complement(a), b);
                let m = (self.tau(a, b) * we)
                    .min(self.get(a, b))
                    .min(self.get(complement(a), complement(b)))
                    .min(y);
                if x < m || (x == F::zero() && y == F::zero()) {
                    p.insert(a, b);
                }
            }
        }
        Ok(p)
    }

    /// `M(w) = {a : w_a > w_a*}`.
    pub fn minset(&self) -> LitSet {
        self.sigma.set(self.sigma.lits().filter(|&a| self.w_a(a) > self.w_a(complement(a))))
    }
}

/// `KL(q‖p)` for Bernoulli distributions, with `0·ln 0 = 0`.
pub fn kl_bernoulli(q: f64, p: f64) -> f64 {
    let term = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    term(q, p) + term(1.0 - q, 1.0 - p)
}

/// Upper bound on `P(|Y − E[X]| ≥ δ)` for the running average `Y` of `t+1`
/// i.i.d. samples in `[0, A]` with normalized mean `α = E[X]/A`, clamped to 1.
pub fn chernoff_bound(t: u64, delta: f64, alpha: f64, cap: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0) || !(cap > 0.0) {
        return Err(Error::BadParameter("need 0 < alpha < 1, delta > 0, A > 0".into()));
    }
    let beta = alpha + delta / cap;
    let gamma = alpha - delta / cap;
    let n = (t + 1) as f64;
    // A deviation beyond [0, A] is impossible on that side.
    let upper = if beta >= 1.0 { 0.0 } else { (-n * kl_bernoulli(beta, alpha)).exp() };
    let lower = if gamma <= 0.0 { 0.0 } else { (-n * kl_bernoulli(1.0 - gamma, 1.0 - alpha)).exp() };
    Ok((upper + lower).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    fn sigma2() -> (Sigma, Lit, Lit) {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        (s, a, b)
    }

    #[test]
    fn point_mass_weights() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let w = RealSnapshot::point_mass(&s, &u, 3.0f64, Schedule::Empirical, 0.1).unwrap();
        assert_eq!(w.w_empty(), 3.0);
        assert_eq!(w.get(complement(a), b), 0.0);
        assert!(w.validate(0.0).is_valid());
        assert_eq!(w.minset(), u);
    }

    #[test]
    fn empirical_unrolls_to_average() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let v = s.set([TRUE, a, complement(b)]);
        let mut w = RealSnapshot::new(s.clone(), Schedule::Empirical, 0.1f64).unwrap();
        w.update(&u, 1.0).unwrap();
        w.update(&v, 1.0).unwrap();
        w.update(&u, 1.0).unwrap();
        assert!(close(w.get(b, b), 2.0 / 3.0));
        assert!(close(w.get(a, a), 1.0));
        assert!(close(w.get(a, b), 2.0 / 3.0));
    }

    #[test]
    fn fixed_q_one_freezes() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let mut w = RealSnapshot::new(s.clone(), Schedule::Fixed(1.0f64), 0.1).unwrap();
        w.update(&u, 2.0).unwrap();
        let before = w.matrix().to_vec();
        w.update(&s.set([TRUE, complement(a), b]), 5.0).unwrap();
        assert_eq!(w.matrix(), &before[..]);
    }

    #[test]
    fn rejects_small_values_and_trivial() {
        let (s, a, b) = sigma2();
        let mut w = RealSnapshot::new(s.clone(), Schedule::Empirical, 0.1f64).unwrap();
        assert_eq!(w.derived_pcr(), Err(Error::TrivialSnapshot));
        assert!(w.update(&s.set([TRUE, a, b]), 0.5).is_err());
    }

    #[test]
    fn equivalent_queries_are_mutually_related() {
        let (s, a, b) = sigma2();
        let mut w = RealSnapshot::new(s.clone(), Schedule::Empirical, 0.25f64).unwrap();
        w.update(&s.set([TRUE, a, b]), 1.0).unwrap();
        w.update(&s.set([TRUE, complement(a), complement(b)]), 1.0).unwrap();
        let g = w.derived_pcr().unwrap();
        assert!(g.contains(a, b) && g.contains(b, a));
        assert!(!g.is_degenerate());
        assert_eq!(w.minset(), s.set([TRUE]));
    }

    #[test]
    fn corrupted_entry_flags_condition_three() {
        let (s, a, b) = sigma2();
        let mut w = RealSnapshot::point_mass(&s, &s.set([TRUE, a, b]), 1.0f64, Schedule::Empirical, 0.1).unwrap();
        let n = s.len();
        let mut m = w.matrix().to_vec();
        m[a * n + b] = 0.5;
        m[b * n + a] = 0.5;
        w = RealSnapshot::from_matrix(s, m, Schedule::Empirical, 0.1).unwrap();
        let r = w.validate(1e-9);
        assert!(r.violations.iter().any(|(c, _)| *c == 3));
    }

    #[test]
    fn f32_instantiation() {
        let (s, a, b) = sigma2();
        let mut w = RealSnapshot::<f32>::new(s.clone(), Schedule::Fixed(0.9), 0.1).unwrap();
        w.update(&s.set([TRUE, a, b]), 1.0).unwrap();
        w.update(&s.set([TRUE, complement(a), b]), 2.0).unwrap();
        assert!(w.validate(1e-6).is_valid());
        assert!(w.derived_pcr().is_ok());
    }

    #[test]
    fn chernoff_values() {
        let b = chernoff_bound(99, 0.1, 0.5, 1.0).unwrap();
        assert!(close(b, 2.0 * (-100.0 * kl_bernoulli(0.6, 0.5)).exp()));
        assert_eq!(chernoff_bound(0, 1e-9, 0.5, 1.0).unwrap(), 1.0);
        assert!(chernoff_bound(5, 0.1, 1.5, 1.0).is_err());
    }
}
