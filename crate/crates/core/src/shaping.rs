//! ASK constellations, Maxwell-Boltzmann amplitude shaping, and the
//! fixed-to-fixed constant-composition distribution matcher (DM).
//!
//! The DM maps k uniform input bits to n amplitudes with a fixed composition
//! (per-amplitude counts). It is an exact arithmetic-coding matcher: the k-bit
//! input word, read MSB first as an integer, selects the sequence at that
//! index in lexicographic order, with amplitudes ordered 1 < 3 < 5 < ...
//! Interval subdivision runs on exact big integers, so encode/decode are
//! mutually inverse by construction and k = floor(log2 multinomial) input
//! bits are always addressable.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapingError {
    #[error("bits per symbol must be at least 1, got {0}")]
    BadModulationOrder(usize),
    #[error("matcher rate {rate} infeasible at output length {n}")]
    InfeasibleRate { rate: String, n: usize },
    #[error("input word has {got} bits, codebook expects {expected}")]
    InputLengthMismatch { expected: usize, got: usize },
    #[error("sequence length {got} does not match codebook output length {expected}")]
    OutputLengthMismatch { expected: usize, got: usize },
    #[error("sequence composition does not match the codebook composition")]
    CompositionMismatch,
    #[error("amplitude {0} is not in the codebook amplitude set")]
    UnknownAmplitude(u32),
    #[error("requested {requested} input bits but the codebook only supports {capacity}")]
    InputBitsExceedCapacity { requested: usize, capacity: usize },
}

/// Gray code of an index: adjacent indices differ in exactly one bit.
#[inline]
pub fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// An M = 2^m point ASK constellation {±1, ±3, ..., ±(M-1)} with its
/// amplitude set {1, 3, ..., M-1} and BRGC labeling. Points are unscaled;
/// see [`rescale`] / [`InputDistribution`] for the power normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AskConstellation {
    m: usize,
    points: Vec<i32>,
    amplitudes: Vec<u32>,
    labels: Vec<u32>,
}

impl AskConstellation {
    pub fn new(m: usize) -> Result<AskConstellation, ShapingError> {
        if m == 0 || m > 16 {
            return Err(ShapingError::BadModulationOrder(m));
        }
        let big_m = 1usize << m;
        let points: Vec<i32> = (0..big_m).map(|i| 2 * i as i32 - (big_m as i32 - 1)).collect();
        let amplitudes: Vec<u32> = (0..big_m / 2).map(|i| 2 * i as u32 + 1).collect();
        let labels: Vec<u32> = (0..big_m).map(|i| gray(i) as u32).collect();
        Ok(AskConstellation { m, points, amplitudes, labels })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Points in ascending order, -(M-1) .. M-1.
    pub fn points(&self) -> &[i32] {
        &self.points
    }

    /// Amplitudes 1, 3, ..., M-1.
    pub fn amplitudes(&self) -> &[u32] {
        &self.amplitudes
    }

    /// BRGC label of the point at index `i` (ascending point order).
    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    /// Index of the amplitude `a` in the amplitude set, i.e. (a-1)/2.
    pub fn amplitude_index(&self, a: u32) -> Option<usize> {
        if a % 2 == 1 && ((a - 1) / 2) < self.amplitudes.len() as u32 {
            Some(((a - 1) / 2) as usize)
        } else {
            None
        }
    }
}

/// Maxwell-Boltzmann distribution over an amplitude set: P(a) proportional
/// to exp(-nu a^2).
#[derive(Debug, Clone, PartialEq)]
pub struct MbDistribution {
    nu: f64,
    probs: Vec<f64>,
}

impl MbDistribution {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Probabilities in amplitude order (ascending).
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Entropy H(P_A) in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Normalized Maxwell-Boltzmann distribution with parameter `nu >= 0` over
/// the given amplitudes.
pub fn mb_distribution(nu: f64, amplitudes: &[u32]) -> MbDistribution {
    assert!(nu >= 0.0 && !amplitudes.is_empty());
    let weights: Vec<f64> = amplitudes.iter().map(|&a| (-nu * (a as f64) * (a as f64)).exp()).collect();
    let sum: f64 = weights.iter().sum();
    MbDistribution { nu, probs: weights.iter().map(|w| w / sum).collect() }
}

/// Scaling delta with E[(delta X)^2] = 1 for a distribution over the
/// constellation points.
pub fn rescale(constellation: &AskConstellation, px: &[f64]) -> f64 {
    assert_eq!(px.len(), constellation.points.len());
    let second_moment: f64 = constellation
        .points
        .iter()
        .zip(px)
        .map(|(&x, &p)| p * (x as f64) * (x as f64))
        .sum();
    1.0 / second_moment.sqrt()
}

/// A channel input ensemble: scaled constellation points with probabilities
/// and BRGC labels, normalized to unit average power.
#[derive(Debug, Clone)]
pub struct InputDistribution {
    pub points: Vec<f64>,
    pub probs: Vec<f64>,
    pub labels: Vec<u32>,
    pub bits_per_symbol: usize,
    pub delta: f64,
}

impl InputDistribution {
    /// Amplitude-shaped input: P(x) = P_A(|x|) / 2 (uniform signs).
    pub fn shaped(constellation: &AskConstellation, pa: &MbDistribution) -> InputDistribution {
        let probs: Vec<f64> = constellation
            .points
            .iter()
            .map(|&x| pa.probs[constellation.amplitude_index(x.unsigned_abs()).unwrap()] / 2.0)
            .collect();
        Self::from_probs(constellation, probs)
    }

    pub fn uniform(constellation: &AskConstellation) -> InputDistribution {
        let n = constellation.points.len();
        Self::from_probs(constellation, vec![1.0 / n as f64; n])
    }

    fn from_probs(constellation: &AskConstellation, probs: Vec<f64>) -> InputDistribution {
        let delta = rescale(constellation, &probs);
        InputDistribution {
            points: constellation.points.iter().map(|&x| delta * x as f64).collect(),
            probs,
            labels: constellation.labels.clone(),
            bits_per_symbol: constellation.m,
            delta,
        }
    }

    /// Entropy H(X) in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

/// Integer composition (counts per amplitude, ascending amplitude order)
/// closest to n * P_A by largest-remainder rounding. Ties go to the smaller
/// amplitude.
pub fn composition_from(probs: &[f64], n: usize) -> Vec<u32> {
    let exact: Vec<f64> = probs.iter().map(|&p| p * n as f64).collect();
    let mut counts: Vec<u32> = exact.iter().map(|&e| e.floor() as u32).collect();
    let assigned: u32 = counts.iter().sum();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    // sort by descending fractional part, index ascending on ties
    order.sort_by(|&i, &j| {
        let fi = exact[i] - exact[i].floor();
        let fj = exact[j] - exact[j].floor();
        fj.partial_cmp(&fi).unwrap().then(i.cmp(&j))
    });
    for k in 0..(n as u32 - assigned) as usize {
        counts[order[k]] += 1;
    }
    counts
}

/// Number of distinct sequences with the given composition,
/// n! / prod(counts!).
pub fn multinomial(composition: &[u32]) -> BigUint {
    let mut result = BigUint::one();
    let mut total = 0u64;
    for &c in composition {
        // multiply by binomial(total + c, c) incrementally
        for j in 1..=c as u64 {
            total += 1;
            result = result * BigUint::from(total) / BigUint::from(j);
        }
    }
    result
}

/// Fixed-to-fixed DM codebook: all length-n sequences with a fixed
/// per-amplitude composition, addressed by k-bit indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmCodebook {
    amplitudes: Vec<u32>,
    composition: Vec<u32>,
    n: usize,
    k: usize,
    sequences: BigUint,
}

impl DmCodebook {
    /// Codebook with the maximum addressable input length
    /// k = floor(log2 multinomial(composition)).
    pub fn new(amplitudes: &[u32], composition: &[u32]) -> DmCodebook {
        assert_eq!(amplitudes.len(), composition.len());
        let sequences = multinomial(composition);
        let k = if sequences.is_one() { 0 } else { (sequences.bits() - 1) as usize };
        DmCodebook {
            amplitudes: amplitudes.to_vec(),
            composition: composition.to_vec(),
            n: composition.iter().sum::<u32>() as usize,
            k,
            sequences,
        }
    }

    /// Same codebook with the input truncated to `k` bits (k at most the
    /// addressable maximum).
    pub fn with_input_bits(mut self, k: usize) -> Result<DmCodebook, ShapingError> {
        if k > self.k {
            return Err(ShapingError::InputBitsExceedCapacity { requested: k, capacity: self.k });
        }
        self.k = k;
        Ok(self)
    }

    /// Output length in amplitudes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Input length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Matcher rate k/n in bits per amplitude.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn composition(&self) -> &[u32] {
        &self.composition
    }

    pub fn amplitudes(&self) -> &[u32] {
        &self.amplitudes
    }

    /// Total number of constant-composition sequences (may exceed 2^k).
    pub fn sequence_count(&self) -> &BigUint {
        &self.sequences
    }

    /// Empirical distribution of the composition.
    pub fn empirical_probs(&self) -> Vec<f64> {
        self.composition.iter().map(|&c| c as f64 / self.n as f64).collect()
    }
}

/// Map a k-bit word (MSB first) to the constant-composition sequence at that
/// lexicographic index.
pub fn dm_encode(bits: &[u8], codebook: &DmCodebook) -> Result<Vec<u32>, ShapingError> {
    if bits.len() != codebook.k {
        return Err(ShapingError::InputLengthMismatch { expected: codebook.k, got: bits.len() });
    }
    let mut index = bits_to_biguint(bits);
    let mut remaining = codebook.composition.clone();
    let mut left = codebook.n as u64;
    // count = number of sequences over the remaining multiset
    let mut count = codebook.sequences.clone();
    let mut out = Vec::with_capacity(codebook.n);
    for _ in 0..codebook.n {
        for (idx, &a) in codebook.amplitudes.iter().enumerate() {
            if remaining[idx] == 0 {
                continue;
            }
            // sequences starting with amplitude `a`
            let sub = &count * BigUint::from(remaining[idx]) / BigUint::from(left);
            if index < sub {
                out.push(a);
                count = sub;
                remaining[idx] -= 1;
                left -= 1;
                break;
            }
            index -= sub;
        }
    }
    debug_assert!(left == 0);
    Ok(out)
}

/// Inverse of [`dm_encode`]: rank the sequence and return its k-bit index.
/// Rejects sequences whose composition differs from the codebook.
pub fn dm_decode(amplitudes: &[u32], codebook: &DmCodebook) -> Result<Vec<u8>, ShapingError> {
    if amplitudes.len() != codebook.n {
        return Err(ShapingError::OutputLengthMismatch {
            expected: codebook.n,
            got: amplitudes.len(),
        });
    }
    let mut observed = vec![0u32; codebook.amplitudes.len()];
    for &a in amplitudes {
        let idx = codebook
            .amplitudes
            .iter()
            .position(|&b| b == a)
            .ok_or(ShapingError::UnknownAmplitude(a))?;
        observed[idx] += 1;
    }
    if observed != codebook.composition {
        return Err(ShapingError::CompositionMismatch);
    }

    let mut index = BigUint::zero();
    let mut remaining = codebook.composition.clone();
    let mut left = codebook.n as u64;
    let mut count = codebook.sequences.clone();
    for &a in amplitudes {
        let chosen = codebook.amplitudes.iter().position(|&b| b == a).unwrap();
        for idx in 0..chosen {
            if remaining[idx] == 0 {
                continue;
            }
            index += &count * BigUint::from(remaining[idx]) / BigUint::from(left);
        }
        count = &count * BigUint::from(remaining[chosen]) / BigUint::from(left);
        remaining[chosen] -= 1;
        left -= 1;
    }
    Ok(biguint_to_bits(&index, codebook.k))
}

fn bits_to_biguint(bits: &[u8]) -> BigUint {
    let mut v = BigUint::zero();
    for &b in bits {
        debug_assert!(b <= 1);
        v = (v << 1u8) | BigUint::from(b);
    }
    v
}

fn biguint_to_bits(v: &BigUint, k: usize) -> Vec<u8> {
    let mut bits = vec![0u8; k];
    for j in 0..k {
        if v.bit(j as u64) {
            bits[k - 1 - j] = 1;
        }
    }
    bits
}

/// Smallest-entropy Maxwell-Boltzmann distribution whose quantized length-n
/// composition supports at least `k_target` input bits, found by bisection
/// on nu over [0, 10]. The returned codebook is truncated to exactly
/// `k_target` bits.
pub fn tune_for_input_bits(
    k_target: usize,
    n: usize,
    amplitudes: &[u32],
) -> Result<(f64, DmCodebook), ShapingError> {
    let bits_at = |nu: f64| -> usize {
        let pa = mb_distribution(nu, amplitudes);
        DmCodebook::new(amplitudes, &composition_from(pa.probs(), n)).k()
    };
    if bits_at(0.0) < k_target {
        return Err(ShapingError::InfeasibleRate {
            rate: format!("{k_target}/{n}"),
            n,
        });
    }
    let (mut lo, hi) = (0.0f64, 10.0f64);
    if bits_at(hi) >= k_target {
        lo = hi;
    } else {
        let mut hi = hi;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if bits_at(mid) >= k_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let pa = mb_distribution(lo, amplitudes);
    let codebook = DmCodebook::new(amplitudes, &composition_from(pa.probs(), n))
        .with_input_bits(k_target)?;
    Ok((lo, codebook))
}

/// Tune nu for a target matcher rate in bits per amplitude. The input length
/// is k = ceil(n * target_rdm), computed with a small guard against floating
/// point targets that sit exactly on an integer boundary.
pub fn tune_nu(
    target_rdm: f64,
    n: usize,
    amplitudes: &[u32],
) -> Result<(f64, DmCodebook), ShapingError> {
    let max_rate = (amplitudes.len() as f64).log2();
    if target_rdm <= 0.0 || target_rdm >= max_rate {
        return Err(ShapingError::InfeasibleRate { rate: format!("{target_rdm}"), n });
    }
    let k_target = (n as f64 * target_rdm - 1e-9).ceil() as usize;
    tune_for_input_bits(k_target, n, amplitudes)
}

/// Finite-length matcher penalty H(P_A) - k/n.
pub fn rate_loss(pa: &MbDistribution, k: usize, n: usize) -> f64 {
    pa.entropy() - k as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn brgc_adjacent_points_differ_in_one_bit() {
        for m in 1..=4 {
            let c = AskConstellation::new(m).unwrap();
            for i in 1..c.points().len() {
                let diff = c.label(i) ^ c.label(i - 1);
                assert_eq!(diff.count_ones(), 1);
            }
        }
    }

    #[test]
    fn mb_zero_nu_is_uniform() {
        let d = mb_distribution(0.0, &[1, 3, 5, 7]);
        for &p in d.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn mb_large_nu_concentrates_on_smallest() {
        let d = mb_distribution(5.0, &[1, 3, 5, 7]);
        assert!(d.probs()[0] > 0.9999999);
    }

    #[test]
    fn mb_normalized_and_monotone() {
        for nu in [0.0, 0.01, 0.1, 0.5, 2.0] {
            let d = mb_distribution(nu, &[1, 3, 5, 7, 9, 11, 13, 15]);
            let sum: f64 = d.probs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for w in d.probs().windows(2) {
                assert!(w[1] <= w[0] + 1e-15);
            }
        }
    }

    #[test]
    fn rescale_uniform() {
        let c2 = AskConstellation::new(1).unwrap();
        assert!((rescale(&c2, &[0.5, 0.5]) - 1.0).abs() < 1e-15);
        let c4 = AskConstellation::new(2).unwrap();
        let d = rescale(&c4, &[0.25; 4]);
        assert!((d - 1.0 / 5.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shaped_input_unit_power() {
        let c = AskConstellation::new(3).unwrap();
        let pa = mb_distribution(0.0895, c.amplitudes());
        let input = InputDistribution::shaped(&c, &pa);
        let power: f64 = input.points.iter().zip(&input.probs).map(|(&x, &p)| p * x * x).sum();
        assert!((power - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composition_uniform_exact() {
        let comp = composition_from(&[0.25; 4], 12);
        assert_eq!(comp, vec![3, 3, 3, 3]);
    }

    #[test]
    fn composition_single_output() {
        let comp = composition_from(&[0.2, 0.5, 0.3], 1);
        assert_eq!(comp, vec![0, 1, 0]);
    }

    #[test]
    fn composition_matches_independent_rounding_oracle() {
        // brute force: among all integer vectors within +-1 of the floor
        // allocation, largest-remainder minimizes the max deviation and our
        // choice agrees with re-deriving it directly
        let pa = mb_distribution(0.0895, &[1, 3, 5, 7]);
        let n = 192;
        let comp = composition_from(pa.probs(), n);
        assert_eq!(comp.iter().sum::<u32>(), n as u32);
        // oracle: sort fractional parts descending, hand out the remainder
        let exact: Vec<f64> = pa.probs().iter().map(|p| p * n as f64).collect();
        let floor: Vec<u32> = exact.iter().map(|e| e.floor() as u32).collect();
        let give = n as u32 - floor.iter().sum::<u32>();
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&i, &j| {
            (exact[j] - exact[j].floor()).partial_cmp(&(exact[i] - exact[i].floor())).unwrap()
        });
        let mut oracle = floor;
        for &i in idx.iter().take(give as usize) {
            oracle[i] += 1;
        }
        assert_eq!(comp, oracle);
    }

    #[test]
    fn multinomial_small_cases() {
        assert_eq!(multinomial(&[2, 1]), BigUint::from(3u32));
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[3, 0]), BigUint::from(1u32));
    }

    #[test]
    fn codebook_k_matches_arbitrary_precision_oracle() {
        // factorial-based oracle for moderate n
        fn fact(n: u64) -> BigUint {
            (1..=n).map(BigUint::from).product::<BigUint>().max(BigUint::one())
        }
        for comp in [vec![118u32, 58, 14, 2], vec![107, 81, 47, 21], vec![128, 128, 128, 128]] {
            let n: u32 = comp.iter().sum();
            let mut oracle = fact(n as u64);
            for &c in &comp {
                oracle /= fact(c as u64);
            }
            let cb = DmCodebook::new(&[1, 3, 5, 7], &comp);
            assert_eq!(cb.sequence_count(), &oracle);
            assert_eq!(cb.k() as u64, oracle.bits() - 1);
        }
    }

    #[test]
    fn single_sequence_codebook() {
        let cb = DmCodebook::new(&[1, 3], &[4, 0]);
        assert_eq!(cb.k(), 0);
        assert_eq!(dm_encode(&[], &cb).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(dm_decode(&[1, 1, 1, 1], &cb).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn encode_matches_lexicographic_enumeration() {
        // enumerate all constant-composition sequences in lexicographic
        // order and compare against the arithmetic matcher
        fn enumerate(remaining: &mut [u32], amps: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if remaining.iter().all(|&c| c == 0) {
                out.push(prefix.clone());
                return;
            }
            for i in 0..amps.len() {
                if remaining[i] > 0 {
                    remaining[i] -= 1;
                    prefix.push(amps[i]);
                    enumerate(remaining, amps, prefix, out);
                    prefix.pop();
                    remaining[i] += 1;
                }
            }
        }
        let amps = [1u32, 3, 5];
        for comp in [vec![3u32, 2, 1], vec![2, 2, 2], vec![5, 1, 0]] {
            let cb = DmCodebook::new(&amps, &comp);
            let mut all = Vec::new();
            enumerate(&mut comp.clone(), &amps, &mut Vec::new(), &mut all);
            for index in 0..(1usize << cb.k()) {
                let bits: Vec<u8> =
                    (0..cb.k()).map(|j| ((index >> (cb.k() - 1 - j)) & 1) as u8).collect();
                let seq = dm_encode(&bits, &cb).unwrap();
                assert_eq!(seq, all[index], "index {index}");
                assert_eq!(dm_decode(&seq, &cb).unwrap(), bits);
            }
        }
    }

    #[test]
    fn round_trip_mode1_codebook() {
        let (_, cb) = tune_for_input_bits(240, 192, &[1, 3, 5, 7]).unwrap();
        assert_eq!(cb.k(), 240);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let bits: Vec<u8> = (0..cb.k()).map(|_| rng.gen_range(0..2u8)).collect();
            let seq = dm_encode(&bits, &cb).unwrap();
            let mut counts = vec![0u32; 4];
            for &a in &seq {
                counts[((a - 1) / 2) as usize] += 1;
            }
            assert_eq!(counts, cb.composition());
            assert_eq!(dm_decode(&seq, &cb).unwrap(), bits);
        }
    }

    #[test]
    fn decode_rejects_wrong_composition() {
        let cb = DmCodebook::new(&[1, 3], &[2, 2]);
        assert_eq!(
            dm_decode(&[1, 1, 1, 3], &cb).unwrap_err(),
            ShapingError::CompositionMismatch
        );
        assert_eq!(dm_decode(&[1, 3], &cb).unwrap_err(), ShapingError::OutputLengthMismatch { expected: 4, got: 2 });
        assert_eq!(dm_decode(&[1, 1, 5, 3], &cb).unwrap_err(), ShapingError::UnknownAmplitude(5));
    }

    #[test]
    fn tune_nu_mode_presets() {
        // Input lengths for the three built-in modes.
        let (nu1, cb1) = tune_nu(1.25, 192, &[1, 3, 5, 7]).unwrap();
        assert_eq!(cb1.k(), 240);
        assert!(nu1 > 0.0);
        let (_, cb2) = tune_nu(1.75, 256, &[1, 3, 5, 7]).unwrap();
        assert_eq!(cb2.k(), 448);
        let (_, cb3) = tune_nu(2.75 - 1.0 / 3.0, 252, &[1, 3, 5, 7, 9, 11, 13, 15]).unwrap();
        assert_eq!(cb3.k(), 609);
    }

    #[test]
    fn tune_nu_rate_band() {
        // k/n lands in [target, target + 1/n)
        for (target, n) in [(1.25, 192), (1.75, 256), (1.1, 100), (0.8, 37)] {
            let (_, cb) = tune_nu(target, n, &[1, 3, 5, 7]).unwrap();
            let rate = cb.rate();
            assert!(rate >= target - 1e-12 && rate < target + 1.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn tune_nu_entropy_above_target() {
        // fixed-length DM cannot exceed the entropy of its distribution
        let (nu, cb) = tune_nu(1.25, 192, &[1, 3, 5, 7]).unwrap();
        let pa = mb_distribution(nu, &[1, 3, 5, 7]);
        assert!(pa.entropy() > 1.25);
        assert!(rate_loss(&pa, cb.k(), cb.n()) >= 0.0);
    }

    #[test]
    fn tune_nu_infeasible() {
        assert!(matches!(
            tune_nu(1.99, 4, &[1, 3, 5, 7]),
            Err(ShapingError::InfeasibleRate { .. })
        ));
        assert!(tune_nu(2.0, 100, &[1, 3, 5, 7]).is_err());
    }

    #[test]
    fn rate_loss_zero_when_k_equals_entropy() {
        let pa = mb_distribution(0.0, &[1, 3, 5, 7]);
        // H = 2 bits exactly; k/n = 2
        assert!(rate_loss(&pa, 200, 100).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn dm_round_trip_random(seed in 0u64..500) {
            let mut rng = StdRng::seed_from_u64(seed);
            let comp: Vec<u32> = (0..4).map(|_| rng.gen_range(0..8u32)).collect();
            prop_assume!(comp.iter().sum::<u32>() > 0);
            let cb = DmCodebook::new(&[1, 3, 5, 7], &comp);
            let bits: Vec<u8> = (0..cb.k()).map(|_| rng.gen_range(0..2u8)).collect();
            let seq = dm_encode(&bits, &cb).unwrap();
            prop_assert_eq!(dm_decode(&seq, &cb).unwrap(), bits);
        }

        #[test]
        fn mb_sums_to_one(nu in 0.0f64..5.0) {
            let d = mb_distribution(nu, &[1, 3, 5, 7, 9, 11, 13, 15]);
            let sum: f64 = d.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
