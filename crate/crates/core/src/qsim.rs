//! Dense state-vector simulation of the primitives Grover search needs:
//! uniform preparation, the phase oracle, the diffusion reflection and
//! projective measurement in the computational basis.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported register. A 24-qubit dense vector holds 16M amplitudes.
pub const MAX_QUBITS: u32 = 24;

/// Tolerance on Σ|a|² used when validating externally supplied amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-12;

fn check_qubits(n: u32) -> Result<usize> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(1usize << n)
    } else {
        Err(Error::Size(n))
    }
}

/// An unstructured search instance over `[0, 2^n)`.
///
/// The membership predicate `f` is held as a dense bitmap alongside the
/// sorted solution list, so `is_solution` is O(1) and the solution list can be
/// iterated in O(M).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct SearchProblem {
    n: u32,
    solutions: Vec<usize>,
    membership: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    n: u32,
    solutions: Vec<usize>,
}

impl TryFrom<ProblemRepr> for SearchProblem {
    type Error = Error;

    fn try_from(repr: ProblemRepr) -> Result<Self> {
        SearchProblem::new(repr.n, repr.solutions)
    }
}

impl From<SearchProblem> for ProblemRepr {
    fn from(problem: SearchProblem) -> Self {
        ProblemRepr { n: problem.n, solutions: problem.solutions }
    }
}

impl SearchProblem {
    /// Builds a problem from an explicit solution set. Duplicates are merged.
    pub fn new(n: u32, solutions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let size = check_qubits(n)?;
        let set: BTreeSet<usize> = solutions.into_iter().collect();
        if let Some(&index) = set.iter().next_back() {
            if index >= size {
                return Err(Error::IndexOutOfRange { index, size });
            }
        }
        let mut membership = vec![false; size];
        for &x in &set {
            membership[x] = true;
        }
        Ok(Self { n, solutions: set.into_iter().collect(), membership })
    }

    /// Builds a problem by evaluating `f` once on every index.
    pub fn from_predicate(n: u32, f: impl Fn(usize) -> bool) -> Result<Self> {
        let size = check_qubits(n)?;
        Self::new(n, (0..size).filter(|&x| f(x)))
    }

    /// Draws `m` distinct solutions uniformly from `[0, 2^n)`.
    pub fn random<R: Rng + ?Sized>(n: u32, m: usize, rng: &mut R) -> Result<Self> {
        let size = check_qubits(n)?;
        if m > size {
            return Err(Error::Domain(format!("cannot draw {m} solutions from {size} indices")));
        }
        let picked = rand::seq::index::sample(rng, size, m);
        Self::new(n, picked)
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    /// Search-space size N = 2^n.
    pub fn size(&self) -> usize {
        self.membership.len()
    }

    /// Number of solutions M.
    pub fn solution_count(&self) -> usize {
        self.solutions.len()
    }

    /// Ascending solution indices.
    pub fn solutions(&self) -> &[usize] {
        &self.solutions
    }

    /// The predicate f: true iff `x` solves the search problem.
    pub fn is_solution(&self, x: usize) -> bool {
        self.membership.get(x).copied().unwrap_or(false)
    }
}

/// A register of `n` qubits stored as 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QState {
    n: u32,
    amplitudes: Vec<Complex64>,
}

impl QState {
    /// Equal superposition over all 2^n basis states, i.e. H^⊗n |0…0⟩.
    pub fn uniform(n: u32) -> Result<Self> {
        let size = check_qubits(n)?;
        let a = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
        Ok(Self { n, amplitudes: vec![a; size] })
    }

    /// Computational basis state |index⟩.
    pub fn basis(n: u32, index: usize) -> Result<Self> {
        let size = check_qubits(n)?;
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    /// Wraps amplitudes that are already normalized to within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = Self::qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { n, amplitudes })
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = Self::qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amplitudes })
    }

    fn qubits_for_len(len: usize) -> Result<u32> {
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::InvalidState(format!("{len} amplitudes is not 2^n with n >= 1")));
        }
        let n = len.trailing_zeros();
        check_qubits(n)?;
        Ok(n)
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    fn check_problem(&self, problem: &SearchProblem) -> Result<()> {
        if self.n != problem.qubits() {
            return Err(Error::Shape { state: self.n, problem: problem.qubits() });
        }
        Ok(())
    }

    /// Negates the amplitude of every solution index (phase-kickback oracle).
    pub fn apply_oracle_phase(&mut self, problem: &SearchProblem) -> Result<()> {
        self.check_problem(problem)?;
        for &x in problem.solutions() {
            self.amplitudes[x] = -self.amplitudes[x];
        }
        Ok(())
    }

    /// Reflection about the uniform state, 2|u⟩⟨u| − I.
    ///
    /// Equal to H^⊗n (2|0⟩⟨0| − I) H^⊗n; evaluated as `a ← 2·mean − a`.
    pub fn apply_diffusion(&mut self) {
        let sum: Complex64 = self.amplitudes.iter().sum();
        let twice_mean = sum * (2.0 / self.amplitudes.len() as f64);
        for a in &mut self.amplitudes {
            *a = twice_mean - *a;
        }
    }

    /// One Grover iteration: oracle followed by diffusion.
    pub fn grover_iteration(&mut self, problem: &SearchProblem) -> Result<()> {
        self.apply_oracle_phase(problem)?;
        self.apply_diffusion();
        Ok(())
    }

    /// Total probability mass on solution states.
    pub fn success_probability(&self, problem: &SearchProblem) -> Result<f64> {
        self.check_problem(problem)?;
        let p: f64 = problem.solutions().iter().map(|&x| self.amplitudes[x].norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Samples a basis index with probability |amplitude|².
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen::<f64>() * self.norm_sqr();
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = x;
            }
            cumulative += p;
            if u < cumulative {
                return x;
            }
        }
        // rounding left u just above the final partial sum
        last_nonzero
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(Complex64::norm_sqr).sum()
}

/// Free-function form of [`QState::uniform`].
pub fn uniform_superposition(n: u32) -> Result<QState> {
    QState::uniform(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, re: f64) -> bool {
        (a.re - re).abs() < 1e-12 && a.im.abs() < 1e-12
    }

    #[test]
    fn uniform_amplitudes() {
        let s = QState::uniform(1).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, std::f64::consts::FRAC_1_SQRT_2)));
        let s = QState::uniform(2).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, 0.5)));
        let s = QState::uniform(10).unwrap();
        assert_eq!(s.len(), 1024);
        assert!(s.amplitudes().iter().all(|&a| a.re == 0.03125 && a.im == 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_range_enforced() {
        assert_eq!(QState::uniform(0), Err(Error::Size(0)));
        assert_eq!(QState::uniform(25), Err(Error::Size(25)));
        assert_eq!(SearchProblem::new(0, []).unwrap_err(), Error::Size(0));
    }

    #[test]
    fn oracle_flips_solutions() {
        let problem = SearchProblem::new(2, [3]).unwrap();
        let mut s = QState::uniform(2).unwrap();
        s.apply_oracle_phase(&problem).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.5, 0.5, 0.5, -0.5]);

        let empty = SearchProblem::new(2, []).unwrap();
        let before = s.clone();
        s.apply_oracle_phase(&empty).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn oracle_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let amps = (0..16).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let original = QState::normalized(amps).unwrap();
        let problem = SearchProblem::new(4, [1, 7, 12]).unwrap();
        let mut s = original.clone();
        s.apply_oracle_phase(&problem).unwrap();
        s.apply_oracle_phase(&problem).unwrap();
        for (a, b) in s.amplitudes().iter().zip(original.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn shape_mismatch() {
        let problem = SearchProblem::new(3, [1]).unwrap();
        let mut s = QState::uniform(2).unwrap();
        assert_eq!(s.apply_oracle_phase(&problem), Err(Error::Shape { state: 2, problem: 3 }));
        assert!(s.success_probability(&problem).is_err());
        assert!(s.grover_iteration(&problem).is_err());
    }

    #[test]
    fn diffusion_fixes_uniform_and_swaps_single_qubit_basis() {
        for n in 1..6 {
            let mut s = QState::uniform(n).unwrap();
            let before = s.clone();
            s.apply_diffusion();
            for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
        let mut s = QState::basis(1, 0).unwrap();
        s.apply_diffusion();
        assert!(close(s.amplitudes()[0], 0.0));
        assert!(close(s.amplitudes()[1], 1.0));
    }

    #[test]
    fn one_iteration_solves_n4_m1() {
        let problem = SearchProblem::new(2, [2]).unwrap();
        let mut s = QState::uniform(2).unwrap();
        s.grover_iteration(&problem).unwrap();
        for (x, a) in s.amplitudes().iter().enumerate() {
            assert!(close(*a, if x == 2 { 1.0 } else { 0.0 }), "{x}: {a}");
        }
        assert!((s.success_probability(&problem).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_problem_iteration_is_diffusion() {
        let problem = SearchProblem::new(3, []).unwrap();
        let mut s = QState::uniform(3).unwrap();
        s.grover_iteration(&problem).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.re - 8f64.sqrt().recip()).abs() < 1e-12));
    }

    #[test]
    fn uniform_success_is_m_over_n() {
        let problem = SearchProblem::new(5, [0, 9, 31]).unwrap();
        let s = QState::uniform(5).unwrap();
        assert!((s.success_probability(&problem).unwrap() - 3.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn n8_m1_two_iterations() {
        let problem = SearchProblem::new(3, [6]).unwrap();
        let mut s = QState::uniform(3).unwrap();
        s.grover_iteration(&problem).unwrap();
        s.grover_iteration(&problem).unwrap();
        let expected = (5.0 * (1.0 / 8f64.sqrt()).asin()).sin().powi(2);
        let p = s.success_probability(&problem).unwrap();
        assert!((p - expected).abs() < 1e-12);
        assert!((p - 0.9453125).abs() < 1e-12);
    }

    #[test]
    fn measuring_a_basis_state_is_deterministic() {
        let s = QState::basis(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        assert!((0..1000).all(|_| s.measure(&mut rng) == 3));
    }

    #[test]
    fn measurement_frequencies_match_uniform() {
        let s = QState::uniform(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0usize; 4];
        let samples = 100_000;
        for _ in 0..samples {
            counts[s.measure(&mut rng)] += 1;
        }
        for c in counts {
            let f = c as f64 / samples as f64;
            assert!((f - 0.25).abs() <= 0.01, "frequency {f}");
        }
    }

    #[test]
    fn measurement_replays_with_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let amps = (0..64).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let s = QState::normalized(amps).unwrap();
        let a = s.measure(&mut ChaCha8Rng::seed_from_u64(42));
        let b = s.measure(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn problem_construction() {
        let p = SearchProblem::new(3, [5, 3, 5]).unwrap();
        assert_eq!(p.solutions(), &[3, 5]);
        assert_eq!(p.solution_count(), 2);
        assert!(p.is_solution(3) && !p.is_solution(4) && !p.is_solution(100));
        assert_eq!(
            SearchProblem::new(3, [8]).unwrap_err(),
            Error::IndexOutOfRange { index: 8, size: 8 }
        );
        let q = SearchProblem::from_predicate(4, |x| x % 5 == 0).unwrap();
        assert_eq!(q.solutions(), &[0, 5, 10, 15]);
        let r = SearchProblem::random(6, 10, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.solution_count(), 10);
        assert!(SearchProblem::random(2, 5, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(QState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(QState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        assert!(QState::normalized(vec![Complex64::new(0.0, 0.0); 2]).is_err());
        let s = QState::from_amplitudes(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(s.unwrap().qubits(), 1);
    }
}
