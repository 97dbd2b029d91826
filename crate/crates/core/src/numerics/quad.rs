use super::{Bracket, Tolerance};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn finite_at<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            what: "integrand not finite",
            value: t,
        })
    }
}

/// 15-point Kronrod rule with the QUADPACK error heuristic.
fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = finite_at(f, c)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = finite_at(f, c - dx)?;
        let f2 = finite_at(f, c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let ah = h.abs();
    resasc *= ah;
    resabs *= ah;
    let mut error = ((resk - resg) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel {
        lo,
        hi,
        value: resk * h,
        error,
    })
}

/// Initial partition: geometric toward a positive lower endpoint when the
/// interval spans several decades, so that `1/t`-type singularities start
/// out resolved.
fn initial_cuts(b: Bracket) -> Vec<f64> {
    if b.lo > 0.0 && b.hi / b.lo > 1e3 {
        let decades = (b.hi / b.lo).log10();
        let pieces = decades.ceil().min(64.0) as usize;
        let ratio = (b.hi / b.lo).powf(1.0 / pieces as f64);
        let mut cuts: Vec<f64> = (0..pieces).map(|i| b.lo * ratio.powi(i as i32)).collect();
        cuts.push(b.hi);
        cuts
    } else {
        vec![b.lo, b.hi]
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `bracket`.
///
/// Panels with the largest error estimate are bisected until the total
/// estimate drops below `abs_tol + rel_tol * |result|`; `max_iter` bounds the
/// number of bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: Tolerance) -> Result<f64> {
    let cuts = initial_cuts(bracket);
    let mut panels = Vec::with_capacity(cuts.len() + tol.max_iter);
    for w in cuts.windows(2) {
        panels.push(kronrod(&f, w[0], w[1])?);
    }
    let mut splits = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= tol.bound(value) {
            return Ok(value);
        }
        // worst panel that can still be split
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let mid = 0.5 * (p.lo + p.hi);
                mid > p.lo && mid < p.hi && (p.hi - p.lo) > 4.0 * f64::EPSILON * mid.abs()
            })
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| splits < tol.max_iter) else {
            return Err(Error::Accuracy {
                what: "adaptive quadrature",
                estimate: value,
                error,
            });
        };
        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(kronrod(&f, p.lo, mid)?);
        panels.push(kronrod(&f, mid, p.hi)?);
        splits += 1;
    }
}
