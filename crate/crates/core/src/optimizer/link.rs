//! Transmit power needed for a given spectral efficiency.

use core::f64::consts::LN_2;

/// Relation between spectral efficiency `x` (bit/s/Hz over the allotted
/// share) and the transmit power needed to reach it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Link {
    /// Single stream: `p(x) = noise_over_gain * (2^x - 1)`.
    SingleStream {
        /// Noise power divided by the channel power gain (W).
        noise_over_gain: f64,
    },
    /// Two streams with equal power over eigenmodes `first >= second`:
    /// `p(x) = noise * (-(e1 + e2) + sqrt((e1 + e2)^2 + 4 e1 e2 (2^x - 1))) / (e1 e2)`.
    DualStream {
        /// Noise power (W).
        noise_w: f64,
        /// Stronger eigenvalue.
        first: f64,
        /// Weaker eigenvalue.
        second: f64,
    },
}

impl Link {
    /// Single stream over a channel with power gain `gain`.
    pub fn single(noise_w: f64, gain: f64) -> Self {
        Link::SingleStream {
            noise_over_gain: noise_w / gain,
        }
    }

    /// Two equal-power streams over eigenmodes `first` and `second`.
    pub fn dual(noise_w: f64, first: f64, second: f64) -> Self {
        Link::DualStream {
            noise_w,
            first,
            second,
        }
    }

    /// Required transmit power at spectral efficiency `x`.
    pub fn power(&self, x: f64) -> f64 {
        let growth = libm::expm1(x * LN_2);
        match *self {
            Link::SingleStream { noise_over_gain } => noise_over_gain * growth,
            Link::DualStream {
                noise_w,
                first,
                second,
            } => {
                // Rationalized form; stable when one eigenvalue vanishes.
                let sum = first + second;
                let product = first * second;
                let q = sum * sum + 4.0 * product * growth;
                4.0 * noise_w * growth / (sum + libm::sqrt(q))
            }
        }
    }

    /// First derivative of [`Link::power`] with respect to `x`.
    pub fn power_derivative(&self, x: f64) -> f64 {
        let u = libm::exp2(x);
        match *self {
            Link::SingleStream { noise_over_gain } => noise_over_gain * LN_2 * u,
            Link::DualStream {
                noise_w,
                first,
                second,
            } => {
                let sum = first + second;
                let q = sum * sum + 4.0 * first * second * (u - 1.0);
                2.0 * noise_w * LN_2 * u / libm::sqrt(q)
            }
        }
    }

    /// Second derivative of [`Link::power`] with respect to `x`.
    pub fn power_second_derivative(&self, x: f64) -> f64 {
        let u = libm::exp2(x);
        match *self {
            Link::SingleStream { noise_over_gain } => noise_over_gain * LN_2 * LN_2 * u,
            Link::DualStream {
                noise_w,
                first,
                second,
            } => {
                let sum = first + second;
                let product = first * second;
                let q = sum * sum + 4.0 * product * (u - 1.0);
                let numerator = sum * sum + 2.0 * product * (u - 2.0);
                2.0 * noise_w * LN_2 * LN_2 * u * numerator / (q * libm::sqrt(q))
            }
        }
    }

    /// Largest spectral efficiency reachable with `power_w`.
    pub fn spectral_efficiency(&self, power_w: f64) -> f64 {
        match *self {
            Link::SingleStream { noise_over_gain } => libm::log1p(power_w / noise_over_gain) / LN_2,
            Link::DualStream {
                noise_w,
                first,
                second,
            } => {
                let snr = power_w / noise_w;
                let inner = snr * (snr * first * second + 2.0 * (first + second)) / 4.0;
                libm::log1p(inner) / LN_2
            }
        }
    }

    /// True when the channel carries no power.
    pub fn is_degenerate(&self) -> bool {
        match *self {
            Link::SingleStream { noise_over_gain } => !noise_over_gain.is_finite(),
            Link::DualStream { first, second, .. } => !(first + second > 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_reduces_to_two_power_split_streams() {
        // p equal-power streams: rate = log2(1 + p e1/2N) + log2(1 + p e2/2N).
        let link = Link::dual(1e-3, 2.0, 0.5);
        for &x in &[0.1, 1.0, 4.0, 9.0] {
            let p = link.power(x);
            let rate = libm::log2(1.0 + p * 2.0 / 2e-3) + libm::log2(1.0 + p * 0.5 / 2e-3);
            assert!((rate - x).abs() < 1e-10, "{x}: {rate}");
            assert!((link.spectral_efficiency(p) - x).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_one_dual_is_finite() {
        let link = Link::dual(1.0, 3.0, 0.0);
        let p = link.power(2.0);
        assert!((p - 2.0 * 3.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_inverse() {
        let link = Link::single(2.0, 0.5);
        assert!((link.spectral_efficiency(link.power(3.3)) - 3.3).abs() < 1e-12);
    }
}
