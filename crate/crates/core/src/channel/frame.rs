//! Small-scale MIMO channels over the time/frequency grid of one frame.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Fading, Scenario};

/// Nonzero eigenvalues of `H H^H` for one block, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenmodes {
    values: [f64; 2],
    len: usize,
}

impl Eigenmodes {
    /// Eigenvalues as a slice of length `min(D, receive antennas)`.
    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len]
    }

    /// Eigenvalue `i`, or zero beyond the channel rank.
    pub fn get(&self, i: usize) -> f64 {
        if i < self.len {
            self.values[i]
        } else {
            0.0
        }
    }

    /// Number of eigenmodes.
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when there are no eigenmodes.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Channel matrices of every user on every block of a frame.
///
/// Each block holds an `receive_antennas x max_transmit_antennas` matrix; the
/// `D`-antenna channel is formed by its first `D` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChannels {
    users: usize,
    subcarriers: usize,
    slots: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl FrameChannels {
    /// Draws `CN(0, gain[k])` entries for every user, block and antenna pair.
    pub fn sample<R: Rng + ?Sized>(scenario: &Scenario, gain: &[f64], rng: &mut R) -> Self {
        let rows = scenario.receive_antennas;
        let cols = scenario.max_transmit_antennas;
        let per_block = rows * cols;
        let blocks = scenario.blocks();
        let mut entries = Vec::with_capacity(gain.len() * blocks * per_block);
        for &g in gain {
            let scale = libm::sqrt(g / 2.0);
            let draw = |rng: &mut R| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(scale * re, scale * im)
            };
            match scenario.fading {
                Fading::Iid => {
                    for _ in 0..blocks * per_block {
                        entries.push(draw(rng));
                    }
                }
                Fading::Block => {
                    let first = entries.len();
                    for _ in 0..per_block {
                        entries.push(draw(rng));
                    }
                    for _ in 1..blocks {
                        entries.extend_from_within(first..first + per_block);
                    }
                }
            }
        }
        Self {
            users: gain.len(),
            subcarriers: scenario.subcarriers,
            slots: scenario.slots,
            rows,
            cols,
            entries,
        }
    }

    /// Builds a frame from explicit entries laid out as
    /// `[user][slot][subcarrier][row][col]`.
    pub fn from_entries(
        users: usize,
        subcarriers: usize,
        slots: usize,
        rows: usize,
        cols: usize,
        entries: Vec<Complex64>,
    ) -> Self {
        assert_eq!(entries.len(), users * subcarriers * slots * rows * cols);
        assert!(cols <= 2, "at most two transmit antennas");
        Self {
            users,
            subcarriers,
            slots,
            rows,
            cols,
            entries,
        }
    }

    /// Number of users.
    pub fn users(&self) -> usize {
        self.users
    }

    /// Number of subcarriers.
    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    /// Number of slots.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Receive antennas.
    pub fn receive_antennas(&self) -> usize {
        self.rows
    }

    /// Transmit antennas available.
    pub fn transmit_antennas(&self) -> usize {
        self.cols
    }

    /// Full `rows x cols` matrix of user `k` on block `(n, t)`, row major.
    pub fn matrix(&self, user: usize, subcarrier: usize, slot: usize) -> &[Complex64] {
        let per_block = self.rows * self.cols;
        let block = (user * self.slots + slot) * self.subcarriers + subcarrier;
        &self.entries[block * per_block..(block + 1) * per_block]
    }

    /// Eigenvalues of `H H^H` for the first `antennas` transmit antennas.
    pub fn eigenmodes(
        &self,
        user: usize,
        subcarrier: usize,
        slot: usize,
        antennas: usize,
    ) -> Eigenmodes {
        assert!(
            (1..=self.cols).contains(&antennas),
            "antenna count out of range"
        );
        let h = self.matrix(user, subcarrier, slot);
        gram_eigenvalues(h, self.rows, self.cols, antennas)
    }

    /// Scalar channel quality `|mean of the used entries|^2` for subcarrier
    /// ranking.
    pub fn quality(&self, user: usize, subcarrier: usize, slot: usize, antennas: usize) -> f64 {
        let h = self.matrix(user, subcarrier, slot);
        let mut sum = Complex64::new(0.0, 0.0);
        for r in 0..self.rows {
            for c in 0..antennas {
                sum += h[r * self.cols + c];
            }
        }
        (sum / (self.rows * antennas) as f64).norm_sqr()
    }
}

/// Eigenvalues of `H H^H` where `H` is the first `antennas` columns of a
/// row-major `rows x cols` matrix. Uses whichever Gram matrix is smaller.
fn gram_eigenvalues(h: &[Complex64], rows: usize, cols: usize, antennas: usize) -> Eigenmodes {
    let rank = antennas.min(rows);
    let entry = |r: usize, c: usize| h[r * cols + c];
    let values = if rank == 1 {
        let total: f64 = (0..rows)
            .flat_map(|r| (0..antennas).map(move |c| (r, c)))
            .map(|(r, c)| entry(r, c).norm_sqr())
            .sum();
        [total, 0.0]
    } else {
        // rank 2: antennas == 2 and rows >= 2, so H^H H is 2x2.
        let mut a = 0.0;
        let mut d = 0.0;
        let mut b = Complex64::new(0.0, 0.0);
        for r in 0..rows {
            let x = entry(r, 0);
            let y = entry(r, 1);
            a += x.norm_sqr();
            d += y.norm_sqr();
            b += x.conj() * y;
        }
        let mean = 0.5 * (a + d);
        let half_diff = 0.5 * (a - d);
        let radius = libm::sqrt(half_diff * half_diff + b.norm_sqr());
        [mean + radius, (mean - radius).max(0.0)]
    };
    Eigenmodes { values, len: rank }
}
