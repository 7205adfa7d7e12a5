//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_intervals: 2000,
        }
    }
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
    abs: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn gk15<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> Segment<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs = 0.0;
    let mut acc = |x: f64, wk: f64, wg: f64| {
        let v = f(x);
        for i in 0..N {
            kron[i] += wk * v[i];
            gauss[i] += wg * v[i];
        }
        abs += wk * norm(&v);
    };
    acc(c, WGK[7], WG[3]);
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        let dx = h * XGK[j];
        acc(c - dx, WGK[j], wg);
        acc(c + dx, WGK[j], wg);
    }
    let mut diff = [0.0; N];
    for i in 0..N {
        kron[i] *= h;
        gauss[i] *= h;
        diff[i] = kron[i] - gauss[i];
    }
    Segment {
        a,
        b,
        value: kron,
        error: norm(&diff),
        abs: abs * h.abs(),
    }
}

/// Integrates `f` over `[a, b]`, starting from the subdivision given by the
/// interior `breaks` (points outside the interval are ignored). Converges
/// when the summed Kronrod–Gauss difference drops below `rel_tol` times the
/// norm of the result.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        heap.push(gk15(&f, w[0], w[1]));
    }
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        let mut abs = 0.0;
        for s in heap.iter() {
            for i in 0..N {
                total[i] += s.value[i];
            }
            err += s.error;
            abs += s.abs;
        }
        let target = (opts.rel_tol * norm(&total)).max(50.0 * f64::EPSILON * abs);
        if err <= target || abs == 0.0 {
            return Ok(total);
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                intervals: heap.len(),
                estimate: err,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split any further in floating point
            return Err(Error::QuadratureNonConvergence {
                intervals: heap.len() + 1,
                estimate: err,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<f64> {
    integrate(|x| [f(x)], a, b, breaks, opts).map(|v| v[0])
}
