//! Achievable rates and finite-length bounds for ASK signaling on the
//! real AWGN channel: channel capacity, symbol-metric and bit-metric
//! decoding rates, Shannon-limit SNR solving, and Gallager's random coding
//! bound.
//!
//! All conditional-density integrals use 128-node Gauss-Hermite quadrature;
//! the SNR convention is SNR = 1/sigma^2 with unit input power, reported in
//! dB as 10 log10(SNR).

use crate::shaping::InputDistribution;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RatesError {
    #[error("target rate {target} not bracketed by {metric} over [{lo_db}, {hi_db}] dB")]
    BracketFailure { target: f64, metric: &'static str, lo_db: f64, hi_db: f64 },
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Gauss-Hermite nodes and weights for integrals of f(t) exp(-t^2).
/// Newton iteration on the normalized Hermite recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const EPS: f64 = 3e-14;
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = (n + 1) / 2;
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= EPS {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

const GH_POINTS: usize = 128;

fn gh128() -> &'static (Vec<f64>, Vec<f64>) {
    static GH: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GH.get_or_init(|| gauss_hermite(GH_POINTS))
}

/// AWGN capacity 1/2 log2(1 + SNR) in bits per (real) channel use.
pub fn cap_awgn(snr: f64) -> f64 {
    assert!(snr > 0.0);
    0.5 * (1.0 + snr).log2()
}

/// Symbol-metric decoding rate: the mutual information I(X;Y) of the scaled
/// constellation under Gaussian noise with variance 1/snr.
pub fn r_smd(snr: f64, input: &InputDistribution) -> f64 {
    assert!(snr > 0.0);
    let sigma = (1.0 / snr).sqrt();
    let (nodes, weights) = gh128();
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let scale = sigma * std::f64::consts::SQRT_2;
    let mut total = 0.0;
    for (&x, &px) in input.points.iter().zip(&input.probs) {
        if px == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (&t, &w) in nodes.iter().zip(weights) {
            let y = x + scale * t;
            let mut den = 0.0;
            for (&xo, &po) in input.points.iter().zip(&input.probs) {
                let d = y - xo;
                den += po * (-d * d * inv_two_var).exp();
            }
            acc += w * ((-t * t).exp() / den).log2();
        }
        total += px * acc;
    }
    (total / std::f64::consts::PI.sqrt()).max(0.0)
}

/// Bit-metric decoding rate [H(B) - sum_i H(B_i|Y)]^+ under the
/// constellation's labeling.
pub fn r_bmd(snr: f64, input: &InputDistribution) -> f64 {
    assert!(snr > 0.0);
    let sigma = (1.0 / snr).sqrt();
    let (nodes, weights) = gh128();
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let scale = sigma * std::f64::consts::SQRT_2;
    let m = input.bits_per_symbol;
    let sqrt_pi = std::f64::consts::PI.sqrt();

    let mut cond = 0.0;
    for bit in 0..m {
        let mask = 1u32 << (m - 1 - bit);
        let mut h_bit = 0.0;
        for (&x, &px) in input.points.iter().zip(&input.probs) {
            if px == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for (&t, &w) in nodes.iter().zip(weights) {
                let y = x + scale * t;
                let mut den = 0.0;
                let mut num = 0.0;
                for ((&xo, &po), &label) in
                    input.points.iter().zip(&input.probs).zip(&input.labels)
                {
                    let d = y - xo;
                    let term = po * (-d * d * inv_two_var).exp();
                    den += term;
                    if label & mask != 0 {
                        num += term;
                    }
                }
                let p1 = (num / den).clamp(1e-300, 1.0);
                let p0 = (1.0 - p1).max(1e-300);
                acc += w * -(p1 * p1.log2() + p0 * p0.log2());
            }
            h_bit += px * acc / sqrt_pi;
        }
        cond += h_bit;
    }
    (input.entropy() - cond).max(0.0)
}

/// Rate function selector for [`shannon_limit_snr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMetric {
    Cap,
    Smd,
    Bmd,
}

impl RateMetric {
    fn eval(self, snr: f64, input: &InputDistribution) -> f64 {
        match self {
            RateMetric::Cap => cap_awgn(snr),
            RateMetric::Smd => r_smd(snr, input),
            RateMetric::Bmd => r_bmd(snr, input),
        }
    }

    fn name(self) -> &'static str {
        match self {
            RateMetric::Cap => "cap",
            RateMetric::Smd => "smd",
            RateMetric::Bmd => "bmd",
        }
    }
}

/// SNR in dB at which the chosen rate function equals `target_rate`, by
/// bisection to |rate - target| < 1e-6.
pub fn shannon_limit_snr(
    target_rate: f64,
    metric: RateMetric,
    input: &InputDistribution,
) -> Result<f64, RatesError> {
    let (mut lo, mut hi) = (-35.0f64, 45.0f64);
    let f = |db: f64| metric.eval(db_to_linear(db), input);
    if f(lo) > target_rate || f(hi) < target_rate {
        return Err(RatesError::BracketFailure {
            target: target_rate,
            metric: metric.name(),
            lo_db: lo,
            hi_db: hi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = f(mid);
        if (r - target_rate).abs() < 1e-6 {
            return Ok(mid);
        }
        if r < target_rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gallager E_0(rho) for the discrete-input AWGN channel:
/// -log2 integral (sum_x P(x) p(y|x)^(1/(1+rho)))^(1+rho) dy.
pub fn gallager_e0(rho: f64, snr: f64, input: &InputDistribution) -> f64 {
    let sigma = (1.0 / snr).sqrt();
    let s = sigma * (1.0 + rho).sqrt();
    let inv_two_s2 = 1.0 / (2.0 * s * s);
    let scale = s * std::f64::consts::SQRT_2;
    let (nodes, weights) = gh128();
    // integral = sqrt((1+rho)/pi) * sum_x P(x) sum_i w_i G(x + scale t_i)^rho
    // with G(y) = sum_x' P(x') exp(-(y-x')^2 / (2 s^2))
    let mut outer = 0.0;
    for (&x, &px) in input.points.iter().zip(&input.probs) {
        if px == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (&t, &w) in nodes.iter().zip(weights) {
            let y = x + scale * t;
            let mut g = 0.0;
            for (&xo, &po) in input.points.iter().zip(&input.probs) {
                let d = y - xo;
                g += po * (-d * d * inv_two_s2).exp();
            }
            acc += w * g.powf(rho);
        }
        outer += px * acc;
    }
    let integral = ((1.0 + rho) / std::f64::consts::PI).sqrt() * outer;
    -integral.log2()
}

/// Gallager exponent max over rho in [0,1] of E_0(rho) - rho R, by
/// golden-section search to 1e-6 in rho. Returns (exponent, rho_star).
pub fn gallager_exponent(rate_t: f64, snr: f64, input: &InputDistribution) -> (f64, f64) {
    let f = |rho: f64| gallager_e0(rho, snr, input) - rho * rate_t;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-6 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let rho = 0.5 * (a + b);
    // the exponent is never negative: rho = 0 gives E_0(0) = 0
    (f(rho).max(0.0), rho)
}

/// Parameters for the random coding bound: n channel uses at transmission
/// rate `rate_t` bits per channel use.
#[derive(Debug, Clone, Copy)]
pub struct GallagerQuery {
    pub n: usize,
    pub rate_t: f64,
    pub snr: f64,
}

/// Gallager random coding upper bound on average frame error rate,
/// 2^(-n E_G), clamped to [0, 1].
pub fn gallager_rcb(query: &GallagerQuery, input: &InputDistribution) -> f64 {
    assert!(query.n >= 1 && query.rate_t > 0.0 && query.snr > 0.0);
    let (e_g, _) = gallager_exponent(query.rate_t, query.snr, input);
    (2.0f64).powf(-(query.n as f64) * e_g).clamp(0.0, 1.0)
}
