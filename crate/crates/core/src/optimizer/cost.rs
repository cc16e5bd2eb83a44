//! Per-user power cost as a function of the allotted resource share.

use super::link::Link;

/// Cost `c(mu) = mu * (idle_w + slope * p(rate / (bandwidth * mu)))` of
/// serving one user during a share `mu` of the frame.
///
/// The cost is convex in `mu` because it is the perspective of a convex
/// increasing power function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UserCost {
    /// Target rate (bit/s).
    pub rate_bps: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Active power at zero transmit power (W).
    pub idle_w: f64,
    /// Load-dependent slope of the supply model.
    pub slope: f64,
    /// Link model.
    pub link: Link,
    /// Transmit power limit (W).
    pub max_tx_power_w: f64,
}

impl UserCost {
    /// Spectral efficiency needed when transmitting during share `share`.
    pub fn spectral_efficiency(&self, share: f64) -> f64 {
        self.rate_bps / (self.bandwidth_hz * share)
    }

    /// Transmit power needed during share `share`.
    pub fn tx_power(&self, share: f64) -> f64 {
        if self.rate_bps == 0.0 {
            return 0.0;
        }
        self.link.power(self.spectral_efficiency(share))
    }

    /// `c(mu)`.
    pub fn value(&self, share: f64) -> f64 {
        if self.rate_bps == 0.0 {
            return share * self.idle_w;
        }
        share * (self.idle_w + self.slope * self.tx_power(share))
    }

    /// `c'(mu) = idle + slope * (p(x) - x p'(x))`.
    pub fn derivative(&self, share: f64) -> f64 {
        if self.rate_bps == 0.0 {
            return self.idle_w;
        }
        let x = self.spectral_efficiency(share);
        self.idle_w + self.slope * (self.link.power(x) - x * self.link.power_derivative(x))
    }

    /// `c''(mu) = slope * x^2 p''(x) / mu`.
    pub fn second_derivative(&self, share: f64) -> f64 {
        if self.rate_bps == 0.0 {
            return 0.0;
        }
        let x = self.spectral_efficiency(share);
        self.slope * x * x * self.link.power_second_derivative(x) / share
    }

    /// Smallest share meeting the rate within the transmit power limit.
    pub fn min_share(&self) -> f64 {
        if self.rate_bps == 0.0 {
            return 0.0;
        }
        let x_max = self.link.spectral_efficiency(self.max_tx_power_w);
        if !(x_max > 0.0) {
            return f64::INFINITY;
        }
        self.rate_bps / (self.bandwidth_hz * x_max)
    }

    /// Supremum of `c'` as `mu` grows without bound.
    pub fn derivative_limit(&self) -> f64 {
        self.idle_w
    }
}

/// Curvature of the single-stream cost in closed form:
/// `slope * noise_over_gain * (R/W)^2 * ln^2(2) * 2^(R/(W mu)) / mu^3`.
pub fn single_stream_curvature(cost: &UserCost, share: f64) -> f64 {
    let Link::SingleStream { noise_over_gain } = cost.link else {
        panic!("single-stream curvature needs a single-stream link");
    };
    let r = cost.rate_bps / cost.bandwidth_hz;
    let ln2 = core::f64::consts::LN_2;
    cost.slope * noise_over_gain * r * r * ln2 * ln2 * libm::exp2(r / share)
        / (share * share * share)
}

/// Curvature of the two-stream cost in closed form:
/// `2 slope N (R/W)^2 ln^2(2) 2^x ((e1+e2)^2 + 2 e1 e2 (2^x - 2)) / (mu^3 ((e1+e2)^2 + 4 e1 e2 (2^x - 1))^(3/2))`.
pub fn dual_stream_curvature(cost: &UserCost, share: f64) -> f64 {
    let Link::DualStream {
        noise_w,
        first,
        second,
    } = cost.link
    else {
        panic!("dual-stream curvature needs a dual-stream link");
    };
    let r = cost.rate_bps / cost.bandwidth_hz;
    let ln2 = core::f64::consts::LN_2;
    let u = libm::exp2(r / share);
    let sum = first + second;
    let product = first * second;
    let q = sum * sum + 4.0 * product * (u - 1.0);
    let numerator = sum * sum + 2.0 * product * (u - 2.0);
    2.0 * cost.slope * noise_w * r * r * ln2 * ln2 * u * numerator
        / (share * share * share * q * libm::sqrt(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn siso() -> UserCost {
        UserCost {
            rate_bps: 2e6,
            bandwidth_hz: 10e6,
            idle_w: 186.0,
            slope: 4.2,
            link: Link::single(4e-14, 1e-10),
            max_tx_power_w: 40.0,
        }
    }

    #[test]
    fn min_share_hits_power_limit() {
        let c = siso();
        let mu = c.min_share();
        assert!((c.tx_power(mu) - 40.0).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_agree_with_generic_curvature() {
        let c = siso();
        for &mu in &[0.05, 0.2, 0.7] {
            let a = c.second_derivative(mu);
            let b = single_stream_curvature(&c, mu);
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
        let d = UserCost {
            link: Link::dual(4e-14, 3e-10, 1e-11),
            ..c
        };
        for &mu in &[0.05, 0.2, 0.7] {
            let a = d.second_derivative(mu);
            let b = dual_stream_curvature(&d, mu);
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn derivative_tends_to_idle() {
        let c = siso();
        assert!((c.derivative(1e6) - 186.0).abs() < 1e-3);
        assert!(c.derivative(0.1) < c.derivative(0.5));
    }
}
