//! Embedded cubature rules: Gauss-Kronrod 7/15 in one dimension and the
//! Genz-Malik degree 7/5 rule for two and three dimensions.

/// Estimate of one box: high-order value, embedded error, preferred split axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RuleEstimate {
    pub value: f64,
    pub error: f64,
    pub split: usize,
}

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

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub(crate) const KRONROD_POINTS: usize = 15;

/// Gauss-Kronrod 15-point estimate on `[c - h, c + h]`.
pub(crate) fn kronrod15<G, E>(g: &mut G, c: f64, h: f64) -> Result<RuleEstimate, E>
where
    G: FnMut(&[f64]) -> Result<f64, E>,
{
    let f0 = g(&[c])?;
    let mut kronrod = WGK[7] * f0;
    let mut gauss = WG[3] * f0;
    for (j, &x) in XGK[..7].iter().enumerate() {
        let pair = g(&[c - h * x])? + g(&[c + h * x])?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(RuleEstimate {
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        split: 0,
    })
}

/// Number of points used by the Genz-Malik rule in `n` dimensions.
pub(crate) fn genz_malik_points(n: usize) -> usize {
    1 + 4 * n + 2 * n * (n - 1) + (1 << n)
}

/// Genz-Malik degree-7 rule with embedded degree-5 error estimate on the box
/// with centre `c` and half-widths `h` (`n = c.len()`, 2 or 3).
pub(crate) fn genz_malik<G, E>(g: &mut G, c: &[f64], h: &[f64]) -> Result<RuleEstimate, E>
where
    G: FnMut(&[f64]) -> Result<f64, E>,
{
    let n = c.len();
    debug_assert!((2..=3).contains(&n) && h.len() == n);
    let nf = n as f64;

    let l2 = (9.0f64 / 70.0).sqrt();
    let l4 = (9.0f64 / 10.0).sqrt();
    let l5 = (9.0f64 / 19.0).sqrt();
    let ratio = (l2 * l2) / (l4 * l4);

    let w1 = (12824.0 - 9120.0 * nf + 400.0 * nf * nf) / 19683.0;
    let w2 = 980.0 / 6561.0;
    let w3 = (1820.0 - 400.0 * nf) / 19683.0;
    let w4 = 200.0 / 19683.0;
    let w5 = 6859.0 / 19683.0 / (1u32 << n) as f64;
    let we1 = (729.0 - 950.0 * nf + 50.0 * nf * nf) / 729.0;
    let we2 = 245.0 / 486.0;
    let we3 = (265.0 - 100.0 * nf) / 1458.0;
    let we4 = 25.0 / 729.0;

    let mut p = [0.0f64; 3];
    p[..n].copy_from_slice(c);

    let f0 = g(&p[..n])?;
    let mut sum2 = 0.0;
    let mut sum3 = 0.0;
    let mut max_diff = -1.0;
    let mut split = 0;
    let mut diffs = [0.0f64; 3];
    for i in 0..n {
        p[i] = c[i] - l2 * h[i];
        let a = g(&p[..n])?;
        p[i] = c[i] + l2 * h[i];
        let b = g(&p[..n])?;
        p[i] = c[i] - l4 * h[i];
        let d = g(&p[..n])?;
        p[i] = c[i] + l4 * h[i];
        let e = g(&p[..n])?;
        p[i] = c[i];
        sum2 += a + b;
        sum3 += d + e;
        diffs[i] = ((a + b - 2.0 * f0) - ratio * (d + e - 2.0 * f0)).abs();
        if diffs[i] > max_diff {
            max_diff = diffs[i];
            split = i;
        }
    }
    // Near-equal fourth differences: split the widest side instead.
    let close = |d: f64| d >= max_diff * (1.0 - 1e-10) - 1e-300;
    if (0..n).filter(|&i| close(diffs[i])).count() > 1 {
        split =
            (0..n)
                .filter(|&i| close(diffs[i]))
                .fold(split, |best, i| if h[i] > h[best] { i } else { best });
    }

    let mut sum4 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
                p[i] = c[i] + si * l4 * h[i];
                p[j] = c[j] + sj * l4 * h[j];
                sum4 += g(&p[..n])?;
            }
            p[i] = c[i];
            p[j] = c[j];
        }
    }

    let mut sum5 = 0.0;
    for corner in 0..(1u32 << n) {
        for (i, pi) in p.iter_mut().enumerate().take(n) {
            let s = if corner & (1 << i) != 0 { 1.0 } else { -1.0 };
            *pi = c[i] + s * l5 * h[i];
        }
        sum5 += g(&p[..n])?;
    }

    let volume: f64 = h.iter().map(|w| 2.0 * w).product();
    let value = volume * (w1 * f0 + w2 * sum2 + w3 * sum3 + w4 * sum4 + w5 * sum5);
    let lower = volume * (we1 * f0 + we2 * sum2 + we3 * sum3 + we4 * sum4);
    Ok(RuleEstimate {
        value,
        error: (value - lower).abs(),
        split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn monomial_integral(powers: &[u32], lo: f64, hi: f64) -> f64 {
        powers
            .iter()
            .map(|&k| (hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .product()
    }

    #[test]
    fn kronrod_exact_through_degree_21() {
        for k in 0..=21u32 {
            let mut g = |x: &[f64]| Ok::<_, Infallible>(x[0].powi(k as i32));
            let r = kronrod15(&mut g, 0.25, 0.75).unwrap();
            let exact = monomial_integral(&[k], -0.5, 1.0);
            assert!((r.value - exact).abs() < 1e-13, "degree {k}");
        }
    }

    #[test]
    fn gauss_part_exact_through_degree_13() {
        // error estimate vanishes when both rules are exact
        let mut g = |x: &[f64]| Ok::<_, Infallible>(x[0].powi(13) - 2.0 * x[0].powi(4));
        let r = kronrod15(&mut g, 0.0, 1.0).unwrap();
        assert!(r.error < 1e-14);
    }

    #[test]
    fn genz_malik_exact_through_degree_7() {
        let cases: &[&[u32]] = &[
            &[0, 0, 0],
            &[7, 0, 0],
            &[0, 6, 1],
            &[2, 2, 2],
            &[3, 3, 1],
            &[4, 0, 3],
            &[1, 5, 0],
        ];
        for powers in cases {
            let mut g = |x: &[f64]| {
                Ok::<_, Infallible>(
                    x.iter()
                        .zip(powers.iter())
                        .map(|(v, &k)| v.powi(k as i32))
                        .product::<f64>(),
                )
            };
            let r = genz_malik(&mut g, &[0.1, 0.1, 0.1], &[0.6, 0.6, 0.6]).unwrap();
            let exact = monomial_integral(powers, -0.5, 0.7);
            assert!(
                (r.value - exact).abs() < 1e-13,
                "{powers:?}: {} vs {exact}",
                r.value
            );
        }
        for powers in [[7u32, 0], [3, 4], [2, 5], [0, 0]] {
            let mut g = |x: &[f64]| {
                Ok::<_, Infallible>(x[0].powi(powers[0] as i32) * x[1].powi(powers[1] as i32))
            };
            let r = genz_malik(&mut g, &[0.0, 0.5], &[1.0, 0.5]).unwrap();
            let exact = monomial_integral(&powers[..1], -1.0, 1.0)
                * monomial_integral(&powers[1..], 0.0, 1.0);
            assert!((r.value - exact).abs() < 1e-13, "{powers:?}");
        }
    }

    #[test]
    fn genz_malik_estimate_vanishes_for_quintics() {
        let mut g = |x: &[f64]| Ok::<_, Infallible>(x[0].powi(5) + x[1] * x[1] * x[2].powi(3));
        let r = genz_malik(&mut g, &[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!(r.error < 1e-13);
    }

    #[test]
    fn point_counts() {
        assert_eq!(genz_malik_points(2), 17);
        assert_eq!(genz_malik_points(3), 33);
        let mut count = 0;
        let mut g = |_: &[f64]| {
            count += 1;
            Ok::<_, Infallible>(1.0)
        };
        genz_malik(&mut g, &[0.0; 3], &[1.0; 3]).unwrap();
        assert_eq!(count, 33);
    }

    #[test]
    fn splits_along_varying_axis() {
        let mut g = |x: &[f64]| Ok::<_, Infallible>((4.0 * x[1]).exp());
        let r = genz_malik(&mut g, &[0.0; 3], &[1.0; 3]).unwrap();
        assert_eq!(r.split, 1);
    }
}
