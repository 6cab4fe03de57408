//! Spectrum of the angular Hill operator
//! `-h^2 d^2/deta^2 + Z- cos(eta) + E cos^2(eta)` with periodic boundary
//! conditions on `[-pi, pi]`, for real and complex `E`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::numerics::band::BandMatrix;

const LADDER_START: usize = 64;
const LADDER_CAP: usize = 4096;
const LADDER_RTOL: f64 = 1e-10;
const MIN_PATH_STEP: f64 = 1e-7;

/// Symmetry class of an eigenfunction: even/odd in `eta`, then
/// symmetric/antisymmetric about `eta = pi/2`. The declaration order is the
/// tie-break order for degenerate levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    EvenSym,
    EvenAntisym,
    OddSym,
    OddAntisym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Matrix,
    Shooting,
    Quasimode,
    HighEnergy,
}

/// Trigonometric basis family spanning an invariant subspace.
///
/// `Cos`/`Sin` are invariant for every `Z-`; the four half-families are
/// invariant only when `Z- = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Cos,
    Sin,
    CosEven,
    CosOdd,
    SinOdd,
    SinEven,
}

impl Block {
    pub fn is_cos(self) -> bool {
        matches!(self, Block::Cos | Block::CosEven | Block::CosOdd)
    }

    /// Frequency `j` of the `i`-th basis function.
    pub fn mode(self, i: usize) -> usize {
        match self {
            Block::Cos => i,
            Block::Sin => i + 1,
            Block::CosEven => 2 * i,
            Block::CosOdd | Block::SinOdd => 2 * i + 1,
            Block::SinEven => 2 * i + 2,
        }
    }

    fn bandwidth(self) -> usize {
        match self {
            Block::Cos | Block::Sin => 2,
            _ => 1,
        }
    }

    /// Blocks that together span the periodic problem for this `Z-`.
    pub fn decomposition(z_minus: f64) -> &'static [Block] {
        if z_minus == 0.0 {
            &[Block::CosEven, Block::CosOdd, Block::SinOdd, Block::SinEven]
        } else {
            &[Block::Cos, Block::Sin]
        }
    }

    fn parity_of(self, coeffs: &[Complex64]) -> Parity {
        match self {
            Block::CosEven => Parity::EvenSym,
            Block::CosOdd => Parity::EvenAntisym,
            Block::SinOdd => Parity::OddSym,
            Block::SinEven => Parity::OddAntisym,
            Block::Cos | Block::Sin => {
                let (mut even, mut odd) = (0.0, 0.0);
                for (i, c) in coeffs.iter().enumerate() {
                    if self.mode(i) % 2 == 0 {
                        even += c.norm_sqr();
                    } else {
                        odd += c.norm_sqr();
                    }
                }
                match (self, even >= odd) {
                    (Block::Cos, true) => Parity::EvenSym,
                    (Block::Cos, false) => Parity::EvenAntisym,
                    (_, true) => Parity::OddAntisym,
                    (_, false) => Parity::OddSym,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularLevel {
    pub index: usize,
    pub mu: Complex64,
    pub parity: Parity,
    pub method: Method,
    pub err_estimate: f64,
    /// Basis family of `coefficients`; present for the matrix method.
    pub block: Option<Block>,
    /// Position inside `block`, counted upward at real energy.
    pub block_index: Option<usize>,
    /// Coefficients in the orthonormal basis of `block`.
    pub coefficients: Option<Vec<Complex64>>,
    /// `Re E > 2|Z-|`: the region where analytic continuation in `E` is
    /// known to be controlled.
    pub continuation_guaranteed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuParams {
    pub lambda: Complex64,
    pub gamma1: f64,
    pub gamma2: Complex64,
    pub delta: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellBranch {
    DoubleWell,
    PiWell,
}

/// Harmonic model of the angular potential around its minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasimodeModel {
    pub eta_star: f64,
    pub a_offset: f64,
    pub b_freq: f64,
    pub branch: WellBranch,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Matrix element between basis functions of frequencies `a` and `b` of the
/// same trigonometric type, in the orthonormal basis
/// `1/sqrt(2 pi), cos(j eta)/sqrt(pi), sin(j eta)/sqrt(pi)`.
fn element(cos_type: bool, a: usize, b: usize, z_minus: f64, e: Complex64, h: f64) -> Complex64 {
    let d = a.abs_diff(b);
    let s = if cos_type && a.min(b) == 0 { std::f64::consts::SQRT_2 } else { 1.0 };
    match d {
        0 => {
            let mut v = c(h * h * (a * a) as f64) + e * 0.5;
            if a == 1 {
                v += if cos_type { e * 0.25 } else { -e * 0.25 };
            }
            v
        }
        1 => c(0.5 * z_minus * s),
        2 => e * (0.25 * s),
        _ => c(0.0),
    }
}

/// Galerkin matrix of the angular operator on the first `truncation`
/// functions of `block`.
pub fn hill_matrix(
    params: &ProblemParams,
    e: Complex64,
    truncation: usize,
    block: Block,
) -> Result<DMatrix<Complex64>> {
    if truncation < 8 {
        return Err(Error::Precondition(format!("truncation {truncation} < 8")));
    }
    check_block(params, block)?;
    let cos_type = block.is_cos();
    Ok(DMatrix::from_fn(truncation, truncation, |i, j| {
        element(cos_type, block.mode(i), block.mode(j), params.z_minus, e, params.h)
    }))
}

fn check_block(params: &ProblemParams, block: Block) -> Result<()> {
    if params.z_minus != 0.0 && !matches!(block, Block::Cos | Block::Sin) {
        return Err(Error::Precondition(
            "half-period parity blocks are invariant only for Z- = 0".into(),
        ));
    }
    Ok(())
}

fn band_matrix(params: &ProblemParams, e: Complex64, n: usize, block: Block) -> BandMatrix {
    let b = block.bandwidth();
    let mut m = BandMatrix::zeros(n, b, b);
    let cos_type = block.is_cos();
    for i in 0..n {
        for j in i.saturating_sub(b)..=(i + b).min(n - 1) {
            m.set(i, j, element(cos_type, block.mode(i), block.mode(j), params.z_minus, e, params.h));
        }
    }
    m
}

/// Matrix of `cos^2(eta)`, the derivative of the operator with respect to `E`.
fn d_de_matvec(block: Block, x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let b = block.bandwidth();
    let cos_type = block.is_cos();
    (0..n)
        .map(|i| {
            let mut s = c(0.0);
            for j in i.saturating_sub(b)..=(i + b).min(n - 1) {
                s += element(cos_type, block.mode(i), block.mode(j), 0.0, c(1.0), 0.0) * x[j];
            }
            s
        })
        .collect()
}

struct RealBlock {
    block: Block,
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn real_block(params: &ProblemParams, e: f64, n: usize, block: Block) -> RealBlock {
    let cos_type = block.is_cos();
    let m = DMatrix::from_fn(n, n, |i, j| {
        element(cos_type, block.mode(i), block.mode(j), params.z_minus, c(e), params.h).re
    });
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    RealBlock { block, values, vectors }
}

struct Candidate {
    mu: f64,
    parity: Parity,
    block: Block,
    block_index: usize,
}

fn fix_sign(v: &mut [Complex64]) {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.norm()));
    if let Some(first) = v.iter().find(|x| x.norm() > 1e-8 * scale).copied() {
        let flip = if first.re.abs() >= first.im.abs() { first.re < 0.0 } else { first.im < 0.0 };
        if flip {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn merged(params: &ProblemParams, blocks: &[RealBlock]) -> Vec<Candidate> {
    let mut all = Vec::new();
    for rb in blocks {
        for (i, (&mu, vec)) in rb.values.iter().zip(&rb.vectors).enumerate() {
            let coeffs: Vec<Complex64> = vec.iter().map(|&x| c(x)).collect();
            all.push(Candidate { mu, parity: rb.block.parity_of(&coeffs), block: rb.block, block_index: i });
        }
    }
    let _ = params;
    all.sort_by(|a, b| {
        let tol = 1e-12 * a.mu.abs().max(b.mu.abs()).max(1.0);
        if (a.mu - b.mu).abs() <= tol {
            a.parity.cmp(&b.parity).then(a.mu.total_cmp(&b.mu))
        } else {
            a.mu.total_cmp(&b.mu)
        }
    });
    all
}

/// Real-energy spectrum with the truncation ladder; returns the converged
/// blocks, the merged candidate list and the truncation used.
fn real_spectrum(
    params: &ProblemParams,
    e: f64,
    count: usize,
) -> Result<(Vec<RealBlock>, Vec<Candidate>, usize)> {
    let blocks = Block::decomposition(params.z_minus);
    // each block must hold comfortably more than its share of levels
    let mut n = LADDER_START;
    while n * blocks.len() < 2 * count + 16 {
        n *= 2;
    }
    let compute = |n: usize| -> Vec<RealBlock> {
        blocks.iter().map(|&b| real_block(params, e, n, b)).collect()
    };
    let mut prev = compute(n);
    let mut prev_list = merged(params, &prev);
    let mut last_change = f64::INFINITY;
    while n * 2 <= LADDER_CAP {
        let n2 = n * 2;
        let cur = compute(n2);
        let cur_list = merged(params, &cur);
        last_change = 0.0;
        for i in 0..count {
            let d = (cur_list[i].mu - prev_list[i].mu).abs() / cur_list[i].mu.abs().max(1.0);
            last_change = last_change.max(d);
        }
        if last_change < LADDER_RTOL {
            return Ok((cur, cur_list, n2));
        }
        n = n2;
        prev = cur;
        prev_list = cur_list;
    }
    let _ = prev;
    Err(Error::TruncationNotConverged { size: n, last_change })
}

fn bilinear(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn euclid_normalize(x: &mut [Complex64]) {
    let n = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Rayleigh quotient iteration for a complex symmetric band matrix.
fn rqi(a: &BandMatrix, x0: &[Complex64], sigma0: Complex64) -> Option<(Complex64, Vec<Complex64>)> {
    let mut x = x0.to_vec();
    euclid_normalize(&mut x);
    let mut sigma = sigma0;
    let scale = sigma0.norm().max(1.0);
    for _ in 0..40 {
        let ax = a.matvec(&x);
        let xx = bilinear(&x, &x);
        if xx.norm() < 1e-12 {
            return None;
        }
        let rq = bilinear(&x, &ax) / xx;
        let res: f64 = ax.iter().zip(&x).map(|(p, q)| (p - rq * q).norm_sqr()).sum::<f64>().sqrt();
        sigma = rq;
        if res <= 1e-13 * scale {
            return Some((sigma, x));
        }
        let lu = a.lu_shifted(sigma);
        let mut y = lu.solve(&x);
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Some((sigma, x));
        }
        euclid_normalize(&mut y);
        x = y;
    }
    let ax = a.matvec(&x);
    let res: f64 = ax.iter().zip(&x).map(|(p, q)| (p - sigma * q).norm_sqr()).sum::<f64>().sqrt();
    (res <= 1e-9 * scale).then_some((sigma, x))
}

struct Tracked {
    global: usize,
    mu: Complex64,
    x: Vec<Complex64>,
}

/// Continues the eigenpairs of one block along `Re E + i t Im E`, `t: 0 -> 1`.
fn track_block(
    params: &ProblemParams,
    block: Block,
    e: Complex64,
    n: usize,
    mut tracked: Vec<Tracked>,
) -> Result<Vec<Tracked>> {
    let mut t = 0.0f64;
    let mut dt = 1.0f64;
    while t < 1.0 {
        let t_new = (t + dt).min(1.0);
        let e_new = Complex64::new(e.re, e.im * t_new);
        let de = Complex64::new(0.0, e.im * (t_new - t));
        let a = band_matrix(params, e_new, n, block);
        let preds: Vec<Complex64> = tracked
            .iter()
            .map(|tr| {
                let cx = d_de_matvec(block, &tr.x);
                tr.mu + bilinear(&tr.x, &cx) / bilinear(&tr.x, &tr.x) * de
            })
            .collect();
        let mut ok = true;
        let mut new_states = Vec::with_capacity(tracked.len());
        for (i, tr) in tracked.iter().enumerate() {
            let nearest_other = preds
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| (p - preds[i]).norm())
                .fold(f64::INFINITY, f64::min);
            match rqi(&a, &tr.x, preds[i]) {
                Some((mu, x)) if (mu - preds[i]).norm() <= 0.2 * nearest_other + 1e-12 * mu.norm().max(1.0) => {
                    new_states.push((mu, x));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let mut collision = None;
        if ok {
            let motion = tracked
                .iter()
                .zip(&new_states)
                .map(|(tr, (mu, _))| (mu - tr.mu).norm())
                .fold(0.0, f64::max);
            'outer: for i in 0..new_states.len() {
                for j in i + 1..new_states.len() {
                    if (new_states[i].0 - new_states[j].0).norm() < 10.0 * motion {
                        collision = Some((tracked[i].global, tracked[j].global));
                        break 'outer;
                    }
                }
            }
            if collision.is_some() {
                ok = false;
            }
        }
        if ok {
            for (tr, (mu, x)) in tracked.iter_mut().zip(new_states) {
                tr.mu = mu;
                tr.x = x;
            }
            t = t_new;
            dt = (dt * 2.0).min(1.0);
        } else {
            dt *= 0.5;
            if dt < MIN_PATH_STEP {
                let (a, b) = collision.unwrap_or_else(|| {
                    let g = tracked.first().map_or(0, |t| t.global);
                    (g, g)
                });
                return Err(Error::TrackingAmbiguous { a, b, at: format!("{e_new}") });
            }
        }
    }
    Ok(tracked)
}

fn padded(x: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut v = x.to_vec();
    v.resize(n, c(0.0));
    v
}

fn finish_level(
    params: &ProblemParams,
    e: Complex64,
    index: usize,
    block: Block,
    block_index: usize,
    mu: Complex64,
    mut x: Vec<Complex64>,
    err: f64,
) -> AngularLevel {
    // bilinear normalisation: the analytic continuation of the real one
    let xx = bilinear(&x, &x).sqrt();
    if xx.norm() > 0.0 {
        x.iter_mut().for_each(|v| *v /= xx);
    }
    fix_sign(&mut x);
    let mu = if e.im == 0.0 { c(mu.re) } else { mu };
    AngularLevel {
        index,
        mu,
        parity: block.parity_of(&x),
        method: Method::Matrix,
        err_estimate: err,
        block: Some(block),
        block_index: Some(block_index),
        coefficients: Some(x),
        continuation_guaranteed: e.re > 2.0 * params.z_minus.abs(),
    }
}

/// The first `count` eigenvalues `mu_0(E) <= mu_1(E) <= ...`.
///
/// For complex `E` each level is continued from `Re E` along a straight
/// path; the labels are those of the real endpoint.
pub fn angular_eigenvalues(
    params: &ProblemParams,
    e: Complex64,
    count: usize,
) -> Result<Vec<AngularLevel>> {
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    if !e.re.is_finite() || !e.im.is_finite() {
        return Err(Error::Precondition("energy must be finite".into()));
    }
    let (blocks, list, n) = real_spectrum(params, e.re, count)?;
    if e.im == 0.0 {
        return Ok(list
            .iter()
            .take(count)
            .enumerate()
            .map(|(idx, cand)| {
                let rb = blocks.iter().find(|b| b.block == cand.block).unwrap();
                let x = rb.vectors[cand.block_index].iter().map(|&v| c(v)).collect();
                finish_level(params, e, idx, cand.block, cand.block_index, c(cand.mu), x, LADDER_RTOL * cand.mu.abs().max(1.0))
            })
            .collect());
    }
    let mut out: Vec<Option<AngularLevel>> = vec![None; count];
    for rb in &blocks {
        let mut wanted: Vec<(usize, usize)> = list
            .iter()
            .take(count)
            .enumerate()
            .filter(|(_, cand)| cand.block == rb.block)
            .map(|(g, cand)| (g, cand.block_index))
            .collect();
        if wanted.is_empty() {
            continue;
        }
        wanted.sort_by_key(|w| w.1);
        // one extra level above guards the top tracked level against collisions
        let top = wanted.last().unwrap().1 + 1;
        let mut idxs: Vec<(usize, usize)> = wanted.clone();
        if top < rb.values.len() {
            idxs.push((usize::MAX, top));
        }
        let levels = track_with_ladder(params, rb, e, n, &idxs)?;
        for ((g, bi), (mu, x, err)) in idxs.into_iter().zip(levels) {
            if g != usize::MAX {
                out[g] = Some(finish_level(params, e, g, rb.block, bi, mu, x, err));
            }
        }
    }
    Ok(out.into_iter().map(|l| l.expect("every requested level tracked")).collect())
}

fn track_with_ladder(
    params: &ProblemParams,
    rb: &RealBlock,
    e: Complex64,
    n0: usize,
    idxs: &[(usize, usize)],
) -> Result<Vec<(Complex64, Vec<Complex64>, f64)>> {
    let mut n = n0;
    let mut start: Vec<Tracked> = idxs
        .iter()
        .map(|&(g, bi)| Tracked {
            global: g,
            mu: c(rb.values[bi]),
            x: rb.vectors[bi].iter().map(|&v| c(v)).collect(),
        })
        .collect();
    loop {
        let res = track_block(params, rb.block, e, n, start)?;
        let n2 = n * 2;
        let a2 = band_matrix(params, e, n2, rb.block);
        let mut worst = 0.0f64;
        let mut refined = Vec::with_capacity(res.len());
        for tr in &res {
            let (mu2, x2) = rqi(&a2, &padded(&tr.x, n2), tr.mu)
                .ok_or_else(|| Error::Numerical("refinement at doubled truncation failed".into()))?;
            let d = (mu2 - tr.mu).norm() / mu2.norm().max(1.0);
            worst = worst.max(d);
            refined.push((mu2, x2, (mu2 - tr.mu).norm()));
        }
        if worst < LADDER_RTOL || n2 >= LADDER_CAP {
            if worst >= LADDER_RTOL {
                return Err(Error::TruncationNotConverged { size: n2, last_change: worst });
            }
            return Ok(refined);
        }
        n = n2;
        start = res
            .into_iter()
            .map(|tr| {
                let x = padded(&tr.x, n);
                Tracked { global: tr.global, mu: tr.mu, x }
            })
            .collect();
        // the doubled problem is re-tracked from the real endpoint
        let rb2 = real_block(params, e.re, n, rb.block);
        for (tr, &(_, bi)) in start.iter_mut().zip(idxs) {
            tr.mu = c(rb2.values[bi]);
            tr.x = rb2.vectors[bi].iter().map(|&v| c(v)).collect();
        }
    }
}

/// Single level `index` at (possibly complex) `E`, tracked together with
/// its neighbours inside the same block.
pub fn angular_level(params: &ProblemParams, e: Complex64, index: usize) -> Result<AngularLevel> {
    let (blocks, list, n) = real_spectrum(params, e.re, index + 1)?;
    let cand = &list[index];
    let rb = blocks.iter().find(|b| b.block == cand.block).unwrap();
    if e.im == 0.0 {
        let x = rb.vectors[cand.block_index].iter().map(|&v| c(v)).collect();
        return Ok(finish_level(params, e, index, cand.block, cand.block_index, c(cand.mu), x, LADDER_RTOL * cand.mu.abs().max(1.0)));
    }
    let bi = cand.block_index;
    let mut idxs = vec![(index, bi)];
    if bi > 0 {
        idxs.push((usize::MAX - 1, bi - 1));
    }
    if bi + 1 < rb.values.len() {
        idxs.push((usize::MAX, bi + 1));
    }
    let levels = track_with_ladder(params, rb, e, n, &idxs)?;
    let (mu, x, err) = levels.into_iter().next().unwrap();
    Ok(finish_level(params, e, index, cand.block, bi, mu, x, err))
}

fn basis_value(block: Block, i: usize, eta: f64) -> f64 {
    let j = block.mode(i);
    if block.is_cos() {
        if j == 0 {
            1.0 / (2.0 * PI).sqrt()
        } else {
            (j as f64 * eta).cos() / PI.sqrt()
        }
    } else {
        (j as f64 * eta).sin() / PI.sqrt()
    }
}

/// Value at `eta` of the normalised eigenfunction of a matrix-method level.
pub fn angular_eigenfunction(level: &AngularLevel, eta: f64) -> Result<Complex64> {
    let (Some(block), Some(coeffs)) = (level.block, level.coefficients.as_ref()) else {
        return Err(Error::Precondition(format!(
            "level {} ({:?}) carries no Fourier coefficients",
            level.index, level.method
        )));
    };
    Ok(coeffs.iter().enumerate().map(|(i, &cf)| cf * basis_value(block, i, eta)).sum())
}

pub fn quasimode_model(params: &ProblemParams, e: f64) -> Result<QuasimodeModel> {
    let zm = params.z_minus;
    if !(e > 0.0) {
        return Err(Error::Precondition(format!("quasimode needs E > 0, got {e}")));
    }
    if e == 0.5 * zm {
        return Err(Error::Precondition("E = Z-/2 is the boundary between the two well shapes".into()));
    }
    Ok(if e > 0.5 * zm {
        QuasimodeModel {
            eta_star: (-zm / (2.0 * e)).acos(),
            a_offset: -zm * zm / (4.0 * e),
            b_freq: (e * (1.0 - zm * zm / (4.0 * e * e))).sqrt(),
            branch: WellBranch::DoubleWell,
        }
    } else {
        QuasimodeModel {
            eta_star: PI,
            a_offset: e - zm,
            b_freq: (0.5 * zm - e).sqrt(),
            branch: WellBranch::PiWell,
        }
    })
}

/// Harmonic approximation `A + B (2n+1) h` of the `n`-th well level.
pub fn quasimode_mu(params: &ProblemParams, e: f64, n: usize) -> Result<AngularLevel> {
    let q = quasimode_model(params, e)?;
    let mu = q.a_offset + q.b_freq * (2 * n + 1) as f64 * params.h;
    let parity = if n % 2 == 0 { Parity::EvenSym } else { Parity::OddSym };
    Ok(AngularLevel {
        index: n,
        mu: c(mu),
        parity,
        method: Method::Quasimode,
        err_estimate: params.h.powf(1.5),
        block: None,
        block_index: None,
        coefficients: None,
        continuation_guaranteed: e > 2.0 * params.z_minus.abs(),
    })
}

pub fn mathieu_parameters(mu: Complex64, e: Complex64, z_minus: f64, h: f64) -> MathieuParams {
    let h2 = h * h;
    MathieuParams {
        lambda: (2.0 * mu - e) / (2.0 * h2),
        gamma1: z_minus / h2,
        gamma2: e / (2.0 * h2),
        delta: e / (4.0 * h2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_params;

    fn params(zp: f64, zm: f64, h: f64) -> ProblemParams {
        ProblemParams::from_sum_difference(zp, zm, h).unwrap()
    }

    #[test]
    fn free_matrix_is_diagonal() {
        let p = params(2.0, 0.0, 0.3);
        let m = hill_matrix(&p, c(0.0), 8, Block::Cos).unwrap();
        let h2 = 0.09;
        assert_eq!(m[(0, 0)], c(0.0));
        assert!((m[(1, 1)] - c(h2)).norm() < 1e-15);
        assert!((m[(2, 2)] - c(4.0 * h2)).norm() < 1e-15);
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(m[(i, j)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn first_harmonic_coupling() {
        let p = params(3.0, 2.0, 0.1);
        let m = hill_matrix(&p, c(0.0), 8, Block::Cos).unwrap();
        assert!((m[(1, 2)] - c(1.0)).norm() < 1e-15);
        assert!((m[(0, 1)] - c(std::f64::consts::SQRT_2)).norm() < 1e-15);
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        let s = hill_matrix(&p, c(0.0), 8, Block::Sin).unwrap();
        assert!((s[(0, 1)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn second_harmonic_coupling() {
        let p = params(2.0, 0.0, 0.1);
        let m = hill_matrix(&p, c(4.0), 8, Block::Cos).unwrap();
        assert!((m[(3, 3)] - c(2.0 + 0.09)).norm() < 1e-14);
        assert!((m[(2, 4)] - c(1.0)).norm() < 1e-15);
        assert!((m[(1, 2)]).norm() == 0.0);
        assert!(hill_matrix(&p, c(4.0), 7, Block::Cos).is_err());
        assert!(hill_matrix(&params(3.0, 1.0, 0.1), c(4.0), 8, Block::CosEven).is_err());
    }

    #[test]
    fn free_circle_levels() {
        let p = params(2.0, 0.0, 1.0);
        let l = angular_eigenvalues(&p, c(0.0), 3).unwrap();
        let mus: Vec<f64> = l.iter().map(|x| x.mu.re).collect();
        assert!(mus[0].abs() < 1e-14 && (mus[1] - 1.0).abs() < 1e-14 && (mus[2] - 1.0).abs() < 1e-14);
        assert_eq!(l[0].parity, Parity::EvenSym);
        assert_eq!(l[1].parity, Parity::EvenAntisym);
        assert_eq!(l[2].parity, Parity::OddSym);
    }

    #[test]
    fn mathieu_limit_ground_state() {
        let p = params(2.0, 0.0, 0.01);
        let l = angular_eigenvalues(&p, c(1.0), 1).unwrap();
        // defect is O(h^2)
        assert!((l[0].mu.re - 0.01).abs() < 1e-4, "{}", l[0].mu);
    }

    #[test]
    fn double_well_ground_state() {
        let p = params(3.0, 2.0, 0.01);
        let l = angular_eigenvalues(&p, c(4.0), 2).unwrap();
        let q = quasimode_mu(&p, 4.0, 0).unwrap().mu.re;
        assert!((q - (-0.25 + 3.75f64.sqrt() * 0.01)).abs() < 1e-15);
        assert!((l[0].mu.re - q).abs() < 4.0 * 0.01f64.powf(1.5));
        assert!((l[1].mu.re - q).abs() < 4.0 * 0.01f64.powf(1.5));
    }

    #[test]
    fn quasimode_branches() {
        let p = params(5.0, 4.0, 0.01);
        let l = quasimode_mu(&p, 1.0, 1).unwrap();
        assert!((l.mu.re + 2.97).abs() < 1e-14);
        assert_eq!(quasimode_model(&p, 1.0).unwrap().branch, WellBranch::PiWell);
        assert!(quasimode_mu(&p, 2.0, 0).is_err());
        let m = quasimode_model(&p, 8.0).unwrap();
        assert_eq!(m.branch, WellBranch::DoubleWell);
        assert!(m.eta_star >= PI / 2.0 && m.eta_star <= PI && m.b_freq > 0.0);
        let z = params(2.0, 0.0, 0.01);
        assert!((quasimode_mu(&z, 1.0, 0).unwrap().mu.re - 0.01).abs() < 1e-15);
        assert!(quasimode_mu(&z, 1.0, 0).unwrap().coefficients.is_none());
    }

    #[test]
    fn mathieu_params() {
        let mp = mathieu_parameters(c(1.5), c(3.0), 0.0, 0.2);
        assert_eq!(mp.lambda, c(0.0));
        let mp = mathieu_parameters(c(1.0), c(0.0), 0.0, 0.1);
        assert!((mp.lambda - c(100.0)).norm() < 1e-12 && mp.gamma2 == c(0.0));
        let mp = mathieu_parameters(c(0.0), c(2.0), 1.0, 1.0);
        assert_eq!(mp.lambda, c(-1.0));
        assert_eq!(mp.delta, c(0.5));
        assert_eq!(mp.gamma1, 1.0);
    }

    #[test]
    fn eigenfunction_normalisation() {
        let p = params(2.0, 0.0, 0.5);
        let l = angular_eigenvalues(&p, c(0.0), 1).unwrap();
        for eta in [-2.0, 0.0, 1.3] {
            let v = angular_eigenfunction(&l[0], eta).unwrap();
            assert!((v - c(1.0 / (2.0 * PI).sqrt())).norm() < 1e-14);
        }
        let q = quasimode_mu(&p, 1.0, 0).unwrap();
        assert!(angular_eigenfunction(&q, 0.3).is_err());
        let _ = validate_params(1.0, 2.0, 0.1).unwrap();
    }

    #[test]
    fn complex_tracking_round_trip() {
        let p = params(3.0, 2.0, 0.1);
        let e = c(4.0);
        let base = angular_eigenvalues(&p, e, 6).unwrap();
        let shifted = angular_eigenvalues(&p, Complex64::new(4.0, 0.4), 6).unwrap();
        for (a, b) in base.iter().zip(&shifted) {
            assert!(b.mu.im.abs() > 0.0);
            assert!((a.mu - b.mu).norm() < 1.0);
        }
    }
}
