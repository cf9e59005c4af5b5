//! The probabilistic amplitude shaping transmitter and receiver chain for
//! non-binary codes: amplitude-sign factorization, packing of amplitudes and
//! signs into field symbols, the gamma extension for code rates above
//! (m-1)/m, the AWGN channel, and the symbol-level demappers that produce
//! decoder priors.
//!
//! Frame layout: the first k_dm data bits drive the distribution matcher,
//! producing one shaped amplitude per channel use. Amplitudes are packed
//! `ell` at a time into the first n/ell codeword symbols. The remaining
//! gamma*n data bits become sign symbols for the first gamma*n channel uses;
//! systematic parity symbols supply the signs of the rest. The receiver
//! mirrors this layout exactly: amplitude windows of length ell, then sign
//! windows of length p, over the same received samples.

use crate::code::SystematicEncoder;
use crate::gf::{Field, FieldElement, GfError};
use crate::shaping::{
    dm_decode, dm_encode, mb_distribution, tune_for_input_bits, AskConstellation, DmCodebook,
    InputDistribution, MbDistribution, ShapingError,
};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PasError {
    #[error("modulation must have m >= 2 bits per symbol for shaping, got {0}")]
    BadModulationOrder(usize),
    #[error("field order {0} is not 2^p with p in 1..=8")]
    UnsupportedField(usize),
    #[error("relation p = ell*(m-1) violated: p = {p} is not a multiple of m-1 = {0}", m - 1)]
    EllNotInteger { p: usize, m: usize },
    #[error("channel uses n = {n} must be divisible by {what} = {div}")]
    ChannelUsesNotDivisible { n: usize, what: &'static str, div: usize },
    #[error("information symbols R_c * n_c = {rc}*{n_c} is not an integer")]
    InfoSymbolsNotInteger { rc: String, n_c: usize },
    #[error("gamma = 1 - (1-R_c)m = {0} outside [0, 1)")]
    GammaOutOfRange(String),
    #[error("information sign bits gamma*n = {0} must be an integer multiple of p = {1}")]
    SignBitsNotInteger(String, usize),
    #[error("matcher rate R_dm = R_t - gamma = {0} outside (0, m-1)")]
    RateDmOutOfRange(String),
    #[error("data word has {got} bits, frame expects {expected}")]
    DataLengthMismatch { expected: usize, got: usize },
    #[error("received word has {got} samples, frame expects {expected}")]
    ReceivedLengthMismatch { expected: usize, got: usize },
    #[error("window has {got} samples, expected {expected}")]
    WindowLengthMismatch { expected: usize, got: usize },
    #[error("amplitude {0} outside the constellation amplitude set")]
    AmplitudeOutOfRange(u32),
    #[error("encoder/code incompatible with config: {0}")]
    CodeMismatch(String),
    #[error("codeword has {got} symbols, expected {expected}")]
    CodewordLengthMismatch { expected: usize, got: usize },
    #[error("probability vector invalid: {0}")]
    BadProbVector(String),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Code(#[from] crate::code::CodeError),
}

/// A normalized probability vector over the q field element values in
/// integer-value order: entry i is the probability of the element with
/// value i.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Normalize a nonnegative vector. Entries above -1e-12 are clamped to
    /// zero; anything lower, a non-finite entry, or an all-zero vector is an
    /// error.
    pub fn from_unnormalized(mut v: Vec<f64>) -> Result<ProbVector, PasError> {
        let mut sum = 0.0;
        for x in v.iter_mut() {
            if !x.is_finite() || *x < -1e-12 {
                return Err(PasError::BadProbVector(format!("entry {x}")));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
            sum += *x;
        }
        if sum <= 0.0 {
            return Err(PasError::BadProbVector("all entries zero".into()));
        }
        for x in v.iter_mut() {
            *x /= sum;
        }
        Ok(ProbVector(v))
    }

    pub fn point_mass(q: usize, value: usize) -> ProbVector {
        let mut v = vec![0.0; q];
        v[value] = 1.0;
        ProbVector(v)
    }

    pub fn uniform(q: usize) -> ProbVector {
        ProbVector(vec![1.0 / q as f64; q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Index of the largest entry, smallest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &x) in self.0.iter().enumerate() {
            if x > self.0[best] {
                best = i;
            }
        }
        best
    }
}

/// All derived bookkeeping of a shaped transmission mode. Rates are exact
/// rationals so the integer frame layout is never subject to rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PasConfig {
    pub m: usize,
    pub q: usize,
    pub p: usize,
    pub ell: usize,
    pub d_c: usize,
    pub rate_c: Ratio<u64>,
    pub n: usize,
    pub n_c: usize,
    pub n_amp_syms: usize,
    pub n_sign_syms: usize,
    pub info_syms: usize,
    pub info_sign_syms: usize,
    pub lifting_n: usize,
    pub gamma: Ratio<u64>,
    pub rate_t: Ratio<u64>,
    pub rate_dm: Ratio<u64>,
    pub k_dm: usize,
    pub info_sign_bits: usize,
}

impl PasConfig {
    /// Data bits consumed per frame: k_dm matcher bits plus gamma*n sign
    /// bits.
    pub fn data_bits_per_frame(&self) -> usize {
        self.k_dm + self.info_sign_bits
    }

    /// Binary blocklength n_c * p.
    pub fn binary_blocklength(&self) -> usize {
        self.n_c * self.p
    }
}

/// Check degree for a design code rate 1 - 2/d_c, when one exists.
pub fn code_rate_to_dc(rate_c: Ratio<u64>) -> Option<usize> {
    let one = Ratio::from_integer(1u64);
    if rate_c >= one {
        return None;
    }
    let dc = Ratio::from_integer(2u64) / (one - rate_c);
    if dc.is_integer() {
        dc.to_integer().to_usize()
    } else {
        None
    }
}

/// Validate the divisibility constraints of a shaped mode and derive every
/// frame-layout quantity.
pub fn make_config(
    m: usize,
    q: usize,
    d_c: usize,
    n: usize,
    rate_t: Ratio<u64>,
) -> Result<PasConfig, PasError> {
    if m < 2 {
        return Err(PasError::BadModulationOrder(m));
    }
    let p = (q as f64).log2() as usize;
    if q != 1usize << p || !(1..=crate::gf::MAX_P).contains(&p) {
        return Err(PasError::UnsupportedField(q));
    }
    if p % (m - 1) != 0 {
        return Err(PasError::EllNotInteger { p, m });
    }
    let ell = p / (m - 1);
    if n % ell != 0 {
        return Err(PasError::ChannelUsesNotDivisible { n, what: "ell", div: ell });
    }
    if n % p != 0 {
        return Err(PasError::ChannelUsesNotDivisible { n, what: "p", div: p });
    }
    let n_amp_syms = n / ell;
    let n_sign_syms = n / p;
    let n_c = n_amp_syms + n_sign_syms; // equals n*m/p
    debug_assert_eq!(n_c, n * m / p);

    if d_c < 4 || d_c % 2 != 0 {
        return Err(PasError::Code(crate::code::CodeError::BadCheckDegree(d_c)));
    }
    let rate_c = Ratio::new((d_c - 2) as u64, d_c as u64);
    let info_syms_exact = rate_c * Ratio::from_integer(n_c as u64);
    if !info_syms_exact.is_integer() {
        return Err(PasError::InfoSymbolsNotInteger { rc: rate_c.to_string(), n_c });
    }
    let info_syms = info_syms_exact.to_integer() as usize;
    let m_c = n_c - info_syms;
    let lifting_n = m_c; // n_c = lifting_n * d_c/2 for the [2 2 .. 2] protograph
    if lifting_n * d_c / 2 != n_c {
        return Err(PasError::CodeMismatch(format!(
            "blocklength n_c = {n_c} is not divisible into d_c/2 = {} circulant blocks",
            d_c / 2
        )));
    }

    // gamma = 1 - (1 - R_c) m, computed signed so negative values diagnose
    let one = Ratio::from_integer(1i64);
    let rc_signed = Ratio::new((d_c - 2) as i64, d_c as i64);
    let gamma_signed = one - (one - rc_signed) * Ratio::from_integer(m as i64);
    if gamma_signed < Ratio::from_integer(0) || gamma_signed >= one {
        return Err(PasError::GammaOutOfRange(gamma_signed.to_string()));
    }
    let gamma = Ratio::new(*gamma_signed.numer() as u64, *gamma_signed.denom() as u64);

    let sign_bits_exact = gamma * Ratio::from_integer(n as u64);
    if !sign_bits_exact.is_integer() || sign_bits_exact.to_integer() as usize % p != 0 {
        return Err(PasError::SignBitsNotInteger(sign_bits_exact.to_string(), p));
    }
    let info_sign_bits = sign_bits_exact.to_integer() as usize;
    let info_sign_syms = info_sign_bits / p;
    debug_assert_eq!(info_syms, n_amp_syms + info_sign_syms);

    if rate_t <= gamma {
        return Err(PasError::RateDmOutOfRange(format!("{}", rate_t)));
    }
    let rate_dm = rate_t - gamma;
    if rate_dm >= Ratio::from_integer((m - 1) as u64) {
        return Err(PasError::RateDmOutOfRange(rate_dm.to_string()));
    }
    // k_dm = ceil(n * R_dm), exactly
    let k_exact = rate_dm * Ratio::from_integer(n as u64);
    let k_dm = k_exact.ceil().to_integer() as usize;

    Ok(PasConfig {
        m,
        q,
        p,
        ell,
        d_c,
        rate_c,
        n,
        n_c,
        n_amp_syms,
        n_sign_syms,
        info_syms,
        info_sign_syms,
        lifting_n,
        gamma,
        rate_t,
        rate_dm,
        k_dm,
        info_sign_bits,
    })
}

/// Pack `ell` amplitudes into a field symbol: each amplitude's natural
/// binary index (a-1)/2 on m-1 bits, concatenated MSB first.
pub fn beta_a(amplitudes: &[u32], m: usize, field: &Field) -> Result<FieldElement, PasError> {
    let idx_bits = m - 1;
    if amplitudes.len() * idx_bits != field.p() {
        return Err(PasError::WindowLengthMismatch {
            expected: field.p() / idx_bits,
            got: amplitudes.len(),
        });
    }
    let mut bits = Vec::with_capacity(field.p());
    for &a in amplitudes {
        if a % 2 == 0 || ((a - 1) / 2) as usize >= (1 << idx_bits) {
            return Err(PasError::AmplitudeOutOfRange(a));
        }
        let idx = (a - 1) / 2;
        for j in (0..idx_bits).rev() {
            bits.push(((idx >> j) & 1) as u8);
        }
    }
    Ok(field.bits_to_element(&bits)?)
}

/// Inverse of [`beta_a`]: unpack a field symbol into `ell` amplitudes.
pub fn beta_a_inv(e: FieldElement, ell: usize, m: usize, field: &Field) -> Vec<u32> {
    let idx_bits = m - 1;
    debug_assert_eq!(ell * idx_bits, field.p());
    let bits = field.element_to_bits(e);
    bits.chunks(idx_bits)
        .map(|chunk| {
            let mut idx = 0u32;
            for &b in chunk {
                idx = (idx << 1) | b as u32;
            }
            2 * idx + 1
        })
        .collect()
}

/// Pack p signs into a field symbol: bit 0 for +1, bit 1 for -1, MSB first.
pub fn beta_s(signs: &[i8], field: &Field) -> Result<FieldElement, PasError> {
    if signs.len() != field.p() {
        return Err(PasError::WindowLengthMismatch { expected: field.p(), got: signs.len() });
    }
    let bits: Vec<u8> = signs.iter().map(|&s| if s > 0 { 0 } else { 1 }).collect();
    Ok(field.bits_to_element(&bits)?)
}

/// Inverse of [`beta_s`]: unpack a field symbol into p signs.
pub fn beta_s_inv(e: FieldElement, field: &Field) -> Vec<i8> {
    field.element_to_bits(e).iter().map(|&b| if b == 0 { 1 } else { -1 }).collect()
}

/// Add white Gaussian noise with variance 1/snr (snr linear).
pub fn awgn<R: Rng>(x: &[f64], snr: f64, rng: &mut R) -> Vec<f64> {
    assert!(snr > 0.0);
    let sigma = (1.0 / snr).sqrt();
    x.iter().map(|&xi| xi + sigma * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// One transmitted frame of the shaped chain.
#[derive(Debug, Clone)]
pub struct TxFrame {
    pub data_bits: Vec<u8>,
    pub amplitudes: Vec<u32>,
    pub signs: Vec<i8>,
    pub info_symbols: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
    pub x: Vec<f64>,
}

/// Immutable context of one shaped transmission mode: config, field,
/// constellation, tuned Maxwell-Boltzmann distribution, scaling, and DM
/// codebook. Frame processing is pure given an RNG, so one system is safely
/// shared across worker threads.
#[derive(Debug, Clone)]
pub struct ShapedSystem {
    config: PasConfig,
    field: Field,
    constellation: AskConstellation,
    pa: MbDistribution,
    nu: f64,
    delta: f64,
    codebook: DmCodebook,
}

impl ShapedSystem {
    pub fn new(config: PasConfig) -> Result<ShapedSystem, PasError> {
        let field = Field::new(config.p)?;
        let constellation =
            AskConstellation::new(config.m).map_err(PasError::Shaping)?;
        let (nu, codebook) =
            tune_for_input_bits(config.k_dm, config.n, constellation.amplitudes())?;
        let pa = mb_distribution(nu, constellation.amplitudes());
        let input = InputDistribution::shaped(&constellation, &pa);
        let delta = input.delta;
        Ok(ShapedSystem { config, field, constellation, pa, nu, delta, codebook })
    }

    pub fn config(&self) -> &PasConfig {
        &self.config
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn constellation(&self) -> &AskConstellation {
        &self.constellation
    }

    /// The tuned Maxwell-Boltzmann amplitude distribution.
    pub fn pa(&self) -> &MbDistribution {
        &self.pa
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn codebook(&self) -> &DmCodebook {
        &self.codebook
    }

    pub fn input_distribution(&self) -> InputDistribution {
        InputDistribution::shaped(&self.constellation, &self.pa)
    }

    fn check_encoder(&self, encoder: &SystematicEncoder) -> Result<(), PasError> {
        if encoder.n_c() != self.config.n_c || encoder.k() != self.config.info_syms {
            return Err(PasError::CodeMismatch(format!(
                "encoder is ({}, {}), config needs ({}, {})",
                encoder.n_c(),
                encoder.k(),
                self.config.n_c,
                self.config.info_syms
            )));
        }
        if !encoder.is_prefix_layout() {
            return Err(PasError::CodeMismatch(
                "encoder does not place information symbols at the codeword prefix".into(),
            ));
        }
        Ok(())
    }

    /// Map data bits to a channel frame: DM amplitudes, beta_A packing, sign
    /// bits for the gamma extension, systematic encoding, and parity signs.
    pub fn transmit(
        &self,
        data_bits: &[u8],
        encoder: &SystematicEncoder,
    ) -> Result<TxFrame, PasError> {
        let cfg = &self.config;
        self.check_encoder(encoder)?;
        if data_bits.len() != cfg.data_bits_per_frame() {
            return Err(PasError::DataLengthMismatch {
                expected: cfg.data_bits_per_frame(),
                got: data_bits.len(),
            });
        }
        let (dm_bits, sign_bits) = data_bits.split_at(cfg.k_dm);

        let amplitudes = dm_encode(dm_bits, &self.codebook)?;
        let mut info_symbols = Vec::with_capacity(cfg.info_syms);
        for window in amplitudes.chunks(cfg.ell) {
            info_symbols.push(beta_a(window, cfg.m, &self.field)?);
        }
        for chunk in sign_bits.chunks(cfg.p) {
            info_symbols.push(self.field.bits_to_element(chunk)?);
        }
        debug_assert_eq!(info_symbols.len(), cfg.info_syms);

        let codeword = encoder.encode(&info_symbols)?;

        // signs: information sign bits cover the first gamma*n channel uses,
        // parity symbols cover the rest
        let mut signs: Vec<i8> =
            sign_bits.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect();
        for &sym in &codeword[cfg.info_syms..] {
            signs.extend(beta_s_inv(sym, &self.field));
        }
        debug_assert_eq!(signs.len(), cfg.n);

        let x: Vec<f64> = amplitudes
            .iter()
            .zip(&signs)
            .map(|(&a, &s)| self.delta * a as f64 * s as f64)
            .collect();

        Ok(TxFrame { data_bits: data_bits.to_vec(), amplitudes, signs, info_symbols, codeword, x })
    }

    /// Symbol prior for an amplitude-mapped symbol from its ell received
    /// samples, assuming uniform signs.
    pub fn demap_amplitude(&self, window: &[f64], snr: f64) -> Result<ProbVector, PasError> {
        let cfg = &self.config;
        if window.len() != cfg.ell {
            return Err(PasError::WindowLengthMismatch { expected: cfg.ell, got: window.len() });
        }
        let half = 1usize << (cfg.m - 1);
        let inv_two_var = snr / 2.0;
        let pa = self.pa.probs();
        // per-position amplitude weights, max-normalized against underflow
        let mut w = vec![0.0f64; cfg.ell * half];
        for (j, &y) in window.iter().enumerate() {
            let row = &mut w[j * half..(j + 1) * half];
            let mut max = 0.0f64;
            for (t, slot) in row.iter_mut().enumerate() {
                let xa = self.delta * (2 * t + 1) as f64;
                let dplus = y - xa;
                let dminus = y + xa;
                *slot = pa[t]
                    * ((-dplus * dplus * inv_two_var).exp()
                        + (-dminus * dminus * inv_two_var).exp());
                max = max.max(*slot);
            }
            for slot in row.iter_mut() {
                *slot /= max;
            }
        }
        let idx_bits = cfg.m - 1;
        let mask = half - 1;
        let mut probs = vec![1.0f64; cfg.q];
        for (c, slot) in probs.iter_mut().enumerate() {
            for j in 0..cfg.ell {
                let t = (c >> ((cfg.ell - 1 - j) * idx_bits)) & mask;
                *slot *= w[j * half + t];
            }
        }
        ProbVector::from_unnormalized(probs)
    }

    /// Symbol prior for a sign-mapped symbol from its p received samples,
    /// marginalizing the amplitudes.
    pub fn demap_sign(&self, window: &[f64], snr: f64) -> Result<ProbVector, PasError> {
        let cfg = &self.config;
        if window.len() != cfg.p {
            return Err(PasError::WindowLengthMismatch { expected: cfg.p, got: window.len() });
        }
        let inv_two_var = snr / 2.0;
        let pa = self.pa.probs();
        let mut v = vec![0.0f64; cfg.p * 2];
        for (j, &y) in window.iter().enumerate() {
            let mut plus = 0.0;
            let mut minus = 0.0;
            for (t, &pt) in pa.iter().enumerate() {
                let xa = self.delta * (2 * t + 1) as f64;
                let dplus = y - xa;
                let dminus = y + xa;
                plus += pt * (-dplus * dplus * inv_two_var).exp();
                minus += pt * (-dminus * dminus * inv_two_var).exp();
            }
            let max = plus.max(minus);
            v[2 * j] = plus / max;
            v[2 * j + 1] = minus / max;
        }
        let mut probs = vec![1.0f64; cfg.q];
        for (c, slot) in probs.iter_mut().enumerate() {
            for (j, pair) in v.chunks(2).enumerate() {
                let bit = (c >> (cfg.p - 1 - j)) & 1;
                *slot *= pair[bit];
            }
        }
        ProbVector::from_unnormalized(probs)
    }

    /// Decoder priors for a whole frame: amplitude windows first, then sign
    /// windows, both consecutive over the same received samples and aligned
    /// with the transmit symbol order.
    pub fn build_priors(&self, y: &[f64], snr: f64) -> Result<Vec<ProbVector>, PasError> {
        let cfg = &self.config;
        if y.len() != cfg.n {
            return Err(PasError::ReceivedLengthMismatch { expected: cfg.n, got: y.len() });
        }
        let mut priors = Vec::with_capacity(cfg.n_c);
        for window in y.chunks(cfg.ell).take(cfg.n_amp_syms) {
            priors.push(self.demap_amplitude(window, snr)?);
        }
        for window in y.chunks(cfg.p).take(cfg.n_sign_syms) {
            priors.push(self.demap_sign(window, snr)?);
        }
        Ok(priors)
    }

    /// Invert the mappings on a decoded codeword and recover the data bits:
    /// amplitude symbols feed the DM decoder, information sign symbols
    /// unpack directly. Fails when the amplitude sequence does not match the
    /// codebook composition (a decoder error).
    pub fn recover_data(&self, codeword: &[FieldElement]) -> Result<Vec<u8>, PasError> {
        let cfg = &self.config;
        if codeword.len() != cfg.n_c {
            return Err(PasError::CodewordLengthMismatch {
                expected: cfg.n_c,
                got: codeword.len(),
            });
        }
        let mut amplitudes = Vec::with_capacity(cfg.n);
        for &sym in &codeword[..cfg.n_amp_syms] {
            amplitudes.extend(beta_a_inv(sym, cfg.ell, cfg.m, &self.field));
        }
        let mut bits = dm_decode(&amplitudes, &self.codebook)?;
        for &sym in &codeword[cfg.n_amp_syms..cfg.info_syms] {
            bits.extend(self.field.element_to_bits(sym));
        }
        Ok(bits)
    }
}

/// Uniform-signaling baseline: the codeword symbols map directly to
/// constellation points (BRGC labels, m bits per channel use, p/m uses per
/// symbol), with no distribution matcher.
#[derive(Debug, Clone)]
pub struct UniformSystem {
    field: Field,
    constellation: AskConstellation,
    m: usize,
    p: usize,
    uses_per_sym: usize,
    n: usize,
    n_c: usize,
    info_syms: usize,
    delta: f64,
    /// label value -> point index
    label_to_point: Vec<usize>,
}

/// A transmitted frame of the uniform baseline.
#[derive(Debug, Clone)]
pub struct UniformTxFrame {
    pub data_bits: Vec<u8>,
    pub info_symbols: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
    pub x: Vec<f64>,
}

impl UniformSystem {
    pub fn new(m: usize, q: usize, d_c: usize, n: usize) -> Result<UniformSystem, PasError> {
        let p = (q as f64).log2() as usize;
        if q != 1usize << p || !(1..=crate::gf::MAX_P).contains(&p) {
            return Err(PasError::UnsupportedField(q));
        }
        if p % m != 0 {
            return Err(PasError::ChannelUsesNotDivisible { n: p, what: "m", div: m });
        }
        let uses_per_sym = p / m;
        if n % uses_per_sym != 0 {
            return Err(PasError::ChannelUsesNotDivisible { n, what: "p/m", div: uses_per_sym });
        }
        let n_c = n / uses_per_sym;
        if d_c < 4 || d_c % 2 != 0 {
            return Err(PasError::Code(crate::code::CodeError::BadCheckDegree(d_c)));
        }
        let rate_c = Ratio::new((d_c - 2) as u64, d_c as u64);
        let info_exact = rate_c * Ratio::from_integer(n_c as u64);
        if !info_exact.is_integer() {
            return Err(PasError::InfoSymbolsNotInteger { rc: rate_c.to_string(), n_c });
        }
        let field = Field::new(p)?;
        let constellation = AskConstellation::new(m).map_err(PasError::Shaping)?;
        let input = InputDistribution::uniform(&constellation);
        let mut label_to_point = vec![0usize; 1 << m];
        for i in 0..(1usize << m) {
            label_to_point[constellation.label(i) as usize] = i;
        }
        Ok(UniformSystem {
            field,
            constellation,
            m,
            p,
            uses_per_sym,
            n,
            n_c,
            info_syms: info_exact.to_integer() as usize,
            delta: input.delta,
            label_to_point,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn info_syms(&self) -> usize {
        self.info_syms
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn data_bits_per_frame(&self) -> usize {
        self.info_syms * self.p
    }

    pub fn input_distribution(&self) -> InputDistribution {
        InputDistribution::uniform(&self.constellation)
    }

    fn point_of_label(&self, label: usize) -> f64 {
        self.delta * self.constellation.points()[self.label_to_point[label]] as f64
    }

    pub fn transmit(
        &self,
        data_bits: &[u8],
        encoder: &SystematicEncoder,
    ) -> Result<UniformTxFrame, PasError> {
        if encoder.n_c() != self.n_c || encoder.k() != self.info_syms {
            return Err(PasError::CodeMismatch(format!(
                "encoder is ({}, {}), uniform chain needs ({}, {})",
                encoder.n_c(),
                encoder.k(),
                self.n_c,
                self.info_syms
            )));
        }
        if data_bits.len() != self.data_bits_per_frame() {
            return Err(PasError::DataLengthMismatch {
                expected: self.data_bits_per_frame(),
                got: data_bits.len(),
            });
        }
        let info_symbols: Vec<FieldElement> = data_bits
            .chunks(self.p)
            .map(|chunk| self.field.bits_to_element(chunk))
            .collect::<Result<_, _>>()?;
        let codeword = encoder.encode(&info_symbols)?;
        let mask = (1usize << self.m) - 1;
        let mut x = Vec::with_capacity(self.n);
        for &sym in &codeword {
            for j in 0..self.uses_per_sym {
                let label = (sym.value() >> ((self.uses_per_sym - 1 - j) * self.m)) & mask;
                x.push(self.point_of_label(label));
            }
        }
        Ok(UniformTxFrame { data_bits: data_bits.to_vec(), info_symbols, codeword, x })
    }

    /// Symbol prior from the p/m received samples of one codeword symbol.
    pub fn demap_symbol(&self, window: &[f64], snr: f64) -> Result<ProbVector, PasError> {
        if window.len() != self.uses_per_sym {
            return Err(PasError::WindowLengthMismatch {
                expected: self.uses_per_sym,
                got: window.len(),
            });
        }
        let inv_two_var = snr / 2.0;
        let points = 1usize << self.m;
        let mut w = vec![0.0f64; self.uses_per_sym * points];
        for (j, &y) in window.iter().enumerate() {
            let row = &mut w[j * points..(j + 1) * points];
            let mut max = 0.0f64;
            for (label, slot) in row.iter_mut().enumerate() {
                let d = y - self.point_of_label(label);
                *slot = (-d * d * inv_two_var).exp();
                max = max.max(*slot);
            }
            for slot in row.iter_mut() {
                *slot /= max;
            }
        }
        let mask = points - 1;
        let q = 1usize << self.p;
        let mut probs = vec![1.0f64; q];
        for (c, slot) in probs.iter_mut().enumerate() {
            for j in 0..self.uses_per_sym {
                let label = (c >> ((self.uses_per_sym - 1 - j) * self.m)) & mask;
                *slot *= w[j * points + label];
            }
        }
        ProbVector::from_unnormalized(probs)
    }

    pub fn build_priors(&self, y: &[f64], snr: f64) -> Result<Vec<ProbVector>, PasError> {
        if y.len() != self.n {
            return Err(PasError::ReceivedLengthMismatch { expected: self.n, got: y.len() });
        }
        y.chunks(self.uses_per_sym).map(|w| self.demap_symbol(w, snr)).collect()
    }

    pub fn recover_data(&self, codeword: &[FieldElement]) -> Result<Vec<u8>, PasError> {
        if codeword.len() != self.n_c {
            return Err(PasError::CodewordLengthMismatch {
                expected: self.n_c,
                got: codeword.len(),
            });
        }
        let mut bits = Vec::with_capacity(self.data_bits_per_frame());
        for &sym in &codeword[..self.info_syms] {
            bits.extend(self.field.element_to_bits(sym));
        }
        Ok(bits)
    }
}
