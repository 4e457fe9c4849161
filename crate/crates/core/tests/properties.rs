use mabody::ellipse::bstar;
use mabody::extremal::joukowski;
use mabody::{Config, ConvexBody};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn triangle_area(p: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs()
}

fn body(points: &[[f64; 2]]) -> ConvexBody {
    let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    ConvexBody::from_points(&refs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// An affine map T z = M z + c carries inscribed ellipses to inscribed
    /// ellipses, so sup{s : velocity s·y at x} is unchanged when K, x and y
    /// are replaced by T K, T x and M y. The value is also even in y.
    #[test]
    fn bstar_is_affine_invariant_and_even(
        verts in prop::array::uniform3(prop::array::uniform2(-2.0..2.0f64)),
        weights in prop::array::uniform3(0.1..1.0f64),
        y in prop::array::uniform2(-1.0..1.0f64),
        m in prop::array::uniform4(-2.0..2.0f64),
        c in prop::array::uniform2(-3.0..3.0f64),
    ) {
        prop_assume!(triangle_area(&verts) > 0.2);
        prop_assume!(y[0].hypot(y[1]) > 0.1);
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det.abs() > 0.3);
        let cfg = Config::default();

        let total: f64 = weights.iter().sum();
        let x = DVector::from_fn(2, |j, _| (0..3).map(|i| weights[i] * verts[i][j]).sum::<f64>() / total);
        let y = DVector::from_row_slice(&y);
        let k = body(&verts);
        let b = bstar(&k, &x, &y, &cfg).unwrap().bstar;

        let mm = DMatrix::from_row_slice(2, 2, &m);
        let cc = DVector::from_row_slice(&c);
        let moved: Vec<[f64; 2]> = verts.iter().map(|p| {
            let q = &mm * DVector::from_row_slice(p) + &cc;
            [q[0], q[1]]
        }).collect();
        let bt = bstar(&body(&moved), &(&mm * &x + &cc), &(&mm * &y), &cfg).unwrap().bstar;
        prop_assert!((bt - b).abs() / b < 1e-6, "affine image {} vs {}", bt, b);

        let bm = bstar(&k, &x, &(-&y), &cfg).unwrap().bstar;
        prop_assert!((bm - b).abs() / b < 1e-9);
    }

    #[test]
    fn joukowski_inverts_the_mean(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let w = Complex64::new(re, im);
        let h = joukowski(w);
        prop_assert!(h.norm() >= 1.0 - 1e-12);
        prop_assert!((h + 1.0 / h - 2.0 * w).norm() <= 1e-12 * (1.0 + w.norm()));
    }
}
