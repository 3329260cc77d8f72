//! Loops in the lambda-line based at a real point left of every critical
//! value: a spoke to a small circle, once round counterclockwise, and back.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::track::Segment;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Arc angle normalized to a sweep with the given sign.
fn sweep_between(theta_in: f64, theta_out: f64, positive: bool) -> f64 {
    let mut s = (theta_out - theta_in).rem_euclid(2.0 * PI);
    if !positive {
        s -= 2.0 * PI;
    }
    s
}

/// The straight path from a to b with each disk (center, radius) it crosses
/// replaced by an arc of its boundary. The arc keeps the center on the same
/// side as the straight line did; a center exactly on the line is passed
/// with the detour to the left.
pub(crate) fn spoke(a: Complex64, b: Complex64, disks: &[(Complex64, f64)]) -> Vec<Segment> {
    let d = b - a;
    let len = d.norm();
    let dir = d / len;
    let mut hits: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    for &(c, r) in disks {
        let rel = c - a;
        let s = (rel * dir.conj()).re;
        let perp = cross(dir, rel);
        if perp.abs() >= r || s <= 0.0 || s >= len + r {
            continue;
        }
        let half = (r * r - perp * perp).sqrt();
        let (s_in, s_out) = ((s - half).max(0.0), (s + half).min(len));
        if s_out <= s_in {
            continue;
        }
        hits.push((s_in, s_out, c, perp));
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    let mut cur = a;
    for (s_in, s_out, c, perp) in hits {
        let p_in = a + dir * s_in;
        let p_out = if s_out >= len { b } else { a + dir * s_out };
        if (p_in - cur).norm() > 0.0 {
            out.push(Segment::Line { a: cur, b: p_in });
        }
        let radius = (p_in - c).norm();
        let t_in = (p_in - c).arg();
        let t_out = (p_out - c).arg();
        // center to the left of travel: pass on its right, counterclockwise
        let positive = perp > 0.0;
        out.push(Segment::Arc { center: c, radius, theta0: t_in, sweep: sweep_between(t_in, t_out, positive) });
        cur = p_out;
    }
    if (b - cur).norm() > 0.0 {
        out.push(Segment::Line { a: cur, b });
    }
    out
}

/// Spoke from `base` to the circle about disks[k], once round
/// counterclockwise, and back the same way.
pub(crate) fn loop_around(base: Complex64, disks: &[(Complex64, f64)], k: usize) -> Vec<Segment> {
    let (c, r) = disks[k];
    let towards = (base - c) / (base - c).norm();
    let entry = c + towards * r;
    let others: Vec<(Complex64, f64)> = disks.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &d)| d).collect();
    let mut path = spoke(base, entry, &others);
    let back: Vec<Segment> = path.iter().rev().map(Segment::reversed).collect();
    path.push(Segment::Arc { center: c, radius: r, theta0: towards.arg(), sweep: 2.0 * PI });
    path.extend(back);
    path
}

/// Once counterclockwise round a circle about `base` of the given radius,
/// entered from the left.
pub(crate) fn loop_around_all(base: Complex64, radius: f64) -> Vec<Segment> {
    let west = base - Complex64::new(radius, 0.0);
    vec![
        Segment::Line { a: base, b: west },
        Segment::Arc { center: base, radius, theta0: PI, sweep: 2.0 * PI },
        Segment::Line { a: west, b: base },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn continuous(path: &[Segment]) -> bool {
        path.windows(2).all(|w| close(w[0].at(1.0), w[1].at(0.0)))
    }

    #[test]
    fn straight_when_nothing_in_the_way() {
        let p = spoke(c(0.0, 0.0), c(5.0, 0.0), &[(c(2.0, 3.0), 1.0)]);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn collinear_disk_is_passed_on_the_left() {
        let p = spoke(c(0.0, 0.0), c(5.0, 0.0), &[(c(2.0, 0.0), 1.0)]);
        assert_eq!(p.len(), 3);
        assert!(continuous(&p));
        assert!(close(p[1].at(0.5), c(2.0, 1.0)));
        assert!(close(p[2].at(1.0), c(5.0, 0.0)));
    }

    #[test]
    fn detour_keeps_the_center_on_its_side() {
        // center below the line: the arc goes over the top
        let p = spoke(c(0.0, 0.0), c(5.0, 0.0), &[(c(2.0, -0.5), 1.0)]);
        assert!(continuous(&p));
        assert!(p[1].at(0.5).im > 0.0);
        let q = spoke(c(0.0, 0.0), c(5.0, 0.0), &[(c(2.0, 0.5), 1.0)]);
        assert!(q[1].at(0.5).im < 0.0);
    }

    #[test]
    fn loops_close_up() {
        let disks = [(c(2.0, 0.0), 0.5), (c(4.0, 0.0), 0.5), (c(3.0, 2.0), 0.5)];
        for k in 0..3 {
            let p = loop_around(c(0.0, 0.0), &disks, k);
            assert!(continuous(&p));
            assert_eq!(p[0].at(0.0), c(0.0, 0.0));
            assert_eq!(p.last().unwrap().at(1.0), c(0.0, 0.0));
            for seg in &p {
                for (j, &(z, r)) in disks.iter().enumerate() {
                    assert!(seg.clearance(z) >= r - 1e-9, "{k} {j} {seg:?}");
                }
            }
        }
        assert!(continuous(&loop_around_all(c(0.0, 0.0), 10.0)));
    }
}
