//! Brute-force vertex and facet enumeration for n <= 3.
//!
//! Both directions enumerate n-subsets (of facets or of points) and filter by
//! feasibility. With a few dozen facets this is cheaper than setting up a
//! double-description pass and needs no degeneracy bookkeeping.

use nalgebra::{DMatrix, DVector};

use super::Halfspace;

const FEAS_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-9;

/// Calls `visit` with every k-subset of `0..m` in lexicographic order.
pub(crate) fn for_each_subset(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn push_unique(points: &mut Vec<DVector<f64>>, p: DVector<f64>) {
    if !points.iter().any(|q| (q - &p).amax() < DEDUP_TOL) {
        points.push(p);
    }
}

/// Vertices of `{x : normal_i · x <= offset_i}`.
pub fn vertices_from_halfspaces(facets: &[Halfspace], n: usize) -> Vec<DVector<f64>> {
    let mut out = Vec::new();
    for_each_subset(facets.len(), n, |sel| {
        let a = DMatrix::from_fn(n, n, |i, j| facets[sel[i]].normal[j]);
        let b = DVector::from_fn(n, |i, _| facets[sel[i]].offset);
        let lu = a.lu();
        if lu.determinant().abs() < 1e-12 {
            return;
        }
        let Some(p) = lu.solve(&b) else { return };
        let feasible = facets
            .iter()
            .all(|h| h.normal.dot(&p) <= h.offset + FEAS_TOL * (1.0 + h.offset.abs()));
        if feasible {
            push_unique(&mut out, p);
        }
    });
    out
}

fn plane_through(points: &[&DVector<f64>], n: usize) -> Option<DVector<f64>> {
    match n {
        1 => Some(DVector::from_element(1, 1.0)),
        2 => {
            let d = points[1] - points[0];
            let normal = DVector::from_vec(vec![d[1], -d[0]]);
            let len = normal.norm();
            (len > 1e-12).then(|| normal / len)
        }
        _ => {
            let u = points[1] - points[0];
            let v = points[2] - points[0];
            let c = DVector::from_vec(vec![
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]);
            let len = c.norm();
            (len > 1e-12).then(|| c / len)
        }
    }
}

/// Facets of the convex hull of `points` (assumed full-dimensional), with
/// outward unit normals.
pub fn facets_from_points(points: &[DVector<f64>], n: usize) -> Vec<Halfspace> {
    let scale = points.iter().map(|p| p.amax()).fold(1.0, f64::max);
    let tol = FEAS_TOL * scale;
    let mut out: Vec<Halfspace> = Vec::new();
    for_each_subset(points.len(), n, |sel| {
        let pts: Vec<&DVector<f64>> = sel.iter().map(|&i| &points[i]).collect();
        let Some(normal) = plane_through(&pts, n) else { return };
        let offset = normal.dot(pts[0]);
        let (mut below, mut above) = (true, true);
        for p in points {
            let s = normal.dot(p) - offset;
            below &= s <= tol;
            above &= s >= -tol;
        }
        let candidates = [(below, 1.0), (above, -1.0)];
        for (ok, sign) in candidates {
            if !ok {
                continue;
            }
            let h = Halfspace { normal: &normal * sign, offset: offset * sign };
            let dup = out
                .iter()
                .any(|g| g.normal.dot(&h.normal) > 1.0 - 1e-9 && (g.offset - h.offset).abs() < tol);
            if !dup {
                out.push(h);
            }
        }
    });
    out
}

/// Rank of the affine hull of `points`.
pub fn affine_rank(points: &[DVector<f64>], n: usize) -> usize {
    if points.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(points.len() - 1, n, |i, j| points[i + 1][j] - points[0][j]);
    if m.nrows() == 0 {
        return 0;
    }
    m.rank(1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(c)
    }

    #[test]
    fn subsets_count() {
        let mut count = 0;
        for_each_subset(6, 3, |_| count += 1);
        assert_eq!(count, 20);
        let mut seen = Vec::new();
        for_each_subset(3, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let mut count = 0;
        for_each_subset(4, 4, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn square_vertices() {
        let facets: Vec<Halfspace> = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
            .iter()
            .map(|n| Halfspace { normal: v(n), offset: 1.0 })
            .collect();
        let verts = vertices_from_halfspaces(&facets, 2);
        assert_eq!(verts.len(), 4);
        for p in verts {
            assert!((p[0].abs() - 1.0).abs() < 1e-12 && (p[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[0.2, 0.2]), v(&[0.5, 0.0])];
        let facets = facets_from_points(&pts, 2);
        assert_eq!(facets.len(), 3);
    }

    #[test]
    fn cube_hull() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(v(&[
                if i & 1 == 0 { -1.0 } else { 1.0 },
                if i & 2 == 0 { -1.0 } else { 1.0 },
                if i & 4 == 0 { -1.0 } else { 1.0 },
            ]));
        }
        let facets = facets_from_points(&pts, 3);
        assert_eq!(facets.len(), 6);
        assert_eq!(vertices_from_halfspaces(&facets, 3).len(), 8);
        assert_eq!(affine_rank(&pts, 3), 3);
    }
}
