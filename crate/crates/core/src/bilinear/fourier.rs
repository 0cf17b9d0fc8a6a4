use super::dispersion::DispersionSequence;
use super::sequence::{e, frac_product, WindowedSequence};
use crate::error::{domain, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

/// Default exponent in the spike radius H^{ε−1}.
pub const SPIKE_EPS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Concentration {
    pub radius: f64,
    /// Σ|â|²/G over grid points inside the spike set.
    pub inside: f64,
    pub outside: f64,
    pub outside_fraction: f64,
}

/// â sampled at ξ = k/G for k = 0..G.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierProfile {
    pub grid_size: usize,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    pub l1_norm: f64,
    pub l2_norm: f64,
    pub concentration: Option<Concentration>,
}

impl FourierProfile {
    pub fn xi(&self, k: usize) -> f64 {
        k as f64 / self.grid_size as f64
    }

    /// Grid point with the largest |â|.
    pub fn peak(&self) -> (f64, f64) {
        let (k, v) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("grid is nonempty");
        (self.xi(k), v.norm())
    }
}

/// Smallest admissible grid: a power of two at least twice the support.
pub fn grid_for(len: usize) -> usize {
    (2 * len.max(1)).next_power_of_two()
}

/// Samples â on a uniform grid with one FFT.
///
/// Riemann sums of |â| and |â|² give the L¹ and L² norms. With at least as
/// many grid points as coefficients the L² sum equals Σ|a_n|² exactly.
pub fn fourier_profile(seq: &WindowedSequence, grid_size: usize) -> Result<FourierProfile> {
    if !grid_size.is_power_of_two() || grid_size < 2 * seq.len() {
        return domain(format!(
            "grid size {grid_size} must be a power of two at least 2·{}",
            seq.len()
        ));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
    buf[..seq.len()].copy_from_slice(&seq.values);
    FftPlanner::new().plan_fft_forward(grid_size).process(&mut buf);
    // Shift from index j to n = start + j.
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= e(-frac_product(seq.start, k as f64 / grid_size as f64));
    }
    let g = grid_size as f64;
    let l1_norm = buf.iter().map(|v| v.norm()).sum::<f64>() / g;
    let l2_norm = (buf.iter().map(|v| v.norm_sqr()).sum::<f64>() / g).sqrt();
    Ok(FourierProfile {
        grid_size,
        values: buf,
        l1_norm,
        l2_norm,
        concentration: None,
    })
}

/// Same grid evaluated term by term; the reference for the FFT path.
pub fn fourier_profile_direct(seq: &WindowedSequence, grid_size: usize) -> Vec<Complex64> {
    crate::par::map_range(0..grid_size, |k| seq.transform_at(k as f64 / grid_size as f64))
}

/// Profile of a dispersion sequence with its mass split at the spike set.
pub fn dispersion_profile(d: &DispersionSequence, grid_size: Option<usize>, eps: f64) -> Result<FourierProfile> {
    let seq = d.values(None);
    let grid = grid_size.unwrap_or_else(|| grid_for(seq.len()));
    let mut p = fourier_profile(&seq, grid)?;
    let radius = d.spike_radius(eps);
    let (mut inside, mut outside) = (0.0, 0.0);
    for (k, v) in p.values.iter().enumerate() {
        if d.in_spike(p.xi(k), radius) {
            inside += v.norm_sqr();
        } else {
            outside += v.norm_sqr();
        }
    }
    let g = grid as f64;
    let total = inside + outside;
    p.concentration = Some(Concentration {
        radius,
        inside: inside / g,
        outside: outside / g,
        outside_fraction: if total > 0.0 { outside / total } else { 0.0 },
    });
    Ok(p)
}

/// Constants K in ‖â‖₁ ≤ K·log H·(1 + H/L) and ‖â‖₂ ≤ K·log H·(H + H^{3/2}/L^{1/2}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormConstants {
    pub h: f64,
    pub l: f64,
    pub k_l1: f64,
    pub k_l2: f64,
    pub outside_fraction: f64,
}

pub fn norm_constants(d: &DispersionSequence, eps: f64) -> Result<NormConstants> {
    let p = dispersion_profile(d, None, eps)?;
    let (h, l) = (d.h, d.l);
    let log_h = h.ln().max(1.0);
    Ok(NormConstants {
        h,
        l,
        k_l1: p.l1_norm / (log_h * (1.0 + h / l)),
        k_l2: p.l2_norm / (log_h * (h + h.powf(1.5) / l.sqrt())),
        outside_fraction: p.concentration.map_or(0.0, |c| c.outside_fraction),
    })
}
