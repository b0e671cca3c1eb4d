//! Canonical pictures of diagrams and their exact crossing data.
//!
//! Every strand of a diagram is drawn as a rational polyline in the unit
//! band: verticals are straight segments, caps are flat triangles hugging the
//! bottom line, cups hug the top line. Apex positions carry small injective
//! jitters so that all intersections are transversal and pairwise distinct.
//! Which picture is drawn does not matter for correctness (any generic
//! picture of a matching represents the same morphism); what matters is that
//! the crossing/turn events along each strand are extracted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Reduced integer direction vector of a strand germ. Never horizontal in
/// canonical pictures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct V2 {
    pub x: i64,
    pub y: i64,
}

impl V2 {
    pub fn neg(self) -> V2 {
        V2 { x: -self.x, y: -self.y }
    }

    pub fn cross(self, other: V2) -> i128 {
        self.x as i128 * other.y as i128 - self.y as i128 * other.x as i128
    }

    /// The representative of {v, -v} with positive y.
    pub fn upward(self) -> V2 {
        if self.y > 0 {
            self
        } else {
            self.neg()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TurnKind {
    Min,
    Max,
}

/// One event along a strand's traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeoEv {
    Cross {
        /// index of the other strand in the diagram
        other: usize,
        /// serial number distinguishing multiple crossings of the same pair
        serial: u32,
        /// travel direction of this strand at the crossing (home traversal)
        my_dir: V2,
        /// travel direction of the other strand at the crossing (its home traversal)
        other_dir: V2,
    },
    Turn { kind: TurnKind, chir: i8 },
}

/// Strand shapes: x-coordinates are the boundary point positions.
#[derive(Clone, Copy, Debug)]
pub enum ArcSpec {
    /// bottom x -> top x, traversed bottom to top
    Vert { xb: i64, xt: i64 },
    /// bottom-bottom arc, xl < xr, traversed left to right
    Cap { xl: i64, xr: i64 },
    /// top-top arc, xl < xr, traversed left to right
    Cup { xl: i64, xr: i64 },
}

type Pt = (BigRational, BigRational);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

struct Seg {
    a: Pt,
    b: Pt,
}

impl Seg {
    fn dir(&self) -> V2 {
        let dx = &self.b.0 - &self.a.0;
        let dy = &self.b.1 - &self.a.1;
        reduce_dir(dx, dy)
    }
}

fn reduce_dir(dx: BigRational, dy: BigRational) -> V2 {
    // scale to integers and reduce
    let den = dx.denom() * dy.denom();
    let nx: BigInt = dx.numer() * (&den / dx.denom());
    let ny: BigInt = dy.numer() * (&den / dy.denom());
    let g = gcd_big(nx.abs(), ny.abs());
    let (nx, ny) = if g.is_zero() { (nx, ny) } else { (nx / &g, ny / &g) };
    V2 {
        x: i64::try_from(&nx).expect("direction overflow"),
        y: i64::try_from(&ny).expect("direction overflow"),
    }
}

fn gcd_big(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn polyline(spec: &ArcSpec, w: i64, salt: i64) -> Vec<Pt> {
    // Apex heights grow with the square of the width so that nested arcs
    // stay strictly inside wider ones; the jitter keeps pictures generic.
    match *spec {
        ArcSpec::Vert { xb, xt } => vec![(rint(xb), rint(0)), (rint(xt), rint(1))],
        ArcSpec::Cap { xl, xr } => {
            let jx = rat(xl * w + xr + 1 + salt, 101 * w.pow(4));
            let jh = rat(xl * w + xr + 1 + salt, 10007 * w.pow(6));
            let ax = rat(xl + xr, 2) + jx;
            let h = rat((xr - xl).pow(2), 4 * w * w) + jh;
            vec![(rint(xl), rint(0)), (ax, h), (rint(xr), rint(0))]
        }
        ArcSpec::Cup { xl, xr } => {
            let jx = rat(xl * w + xr + 1 + salt, 103 * w.pow(4));
            let jh = rat(xl * w + xr + 1 + salt, 10009 * w.pow(6));
            let ax = rat(xl + xr, 2) + jx;
            let h = rat((xr - xl).pow(2), 4 * w * w) + jh;
            vec![(rint(xl), rint(1)), (ax, rint(1) - h), (rint(xr), rint(1))]
        }
    }
}

/// Intersection of two segments, strictly interior to both; returns the
/// parameter along the first segment.
fn seg_intersect(s: &Seg, t: &Seg) -> Option<BigRational> {
    let d1x = &s.b.0 - &s.a.0;
    let d1y = &s.b.1 - &s.a.1;
    let d2x = &t.b.0 - &t.a.0;
    let d2y = &t.b.1 - &t.a.1;
    let den = &d1x * &d2y - &d1y * &d2x;
    if den.is_zero() {
        // parallel; overlapping collinear segments would break event
        // extraction, so rule them out
        let ex = &t.a.0 - &s.a.0;
        let ey = &t.a.1 - &s.a.1;
        let colin = (&d1x * &ey - &d1y * &ex).is_zero();
        assert!(!colin, "degenerate picture: collinear strand segments");
        return None;
    }
    let ex = &t.a.0 - &s.a.0;
    let ey = &t.a.1 - &s.a.1;
    let u = (&ex * &d2y - &ey * &d2x) / den.clone();
    let v = (&ex * &d1y - &ey * &d1x) / den;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    if u > zero && u < one && v > zero && v < one {
        Some(u)
    } else {
        assert!(
            !(u == zero || u == one || v == zero || v == one)
                || !(u >= zero && u <= one && v >= zero && v <= one),
            "degenerate picture: intersection at a segment endpoint"
        );
        None
    }
}

/// Events of every strand, ordered along its home traversal.
///
/// `width_hint` must bound all boundary x coordinates; `salt` perturbs the
/// picture (distinct salts for stacked layers avoid coincidences after
/// gluing, though events of distinct layers never interact anyway).
pub fn strand_events(specs: &[ArcSpec], width_hint: i64, salt: i64) -> Vec<Vec<GeoEv>> {
    let w = width_hint.max(2) + 2;
    let polys: Vec<Vec<Pt>> = specs.iter().map(|s| polyline(s, w, salt)).collect();
    let segs: Vec<Vec<Seg>> = polys
        .iter()
        .map(|p| {
            p.windows(2)
                .map(|ab| Seg { a: ab[0].clone(), b: ab[1].clone() })
                .collect()
        })
        .collect();

    // (strand, seg idx, param, event)
    let mut raw: Vec<Vec<(usize, BigRational, GeoEv)>> = vec![Vec::new(); specs.len()];
    for i in 0..specs.len() {
        for j in i + 1..specs.len() {
            let mut serial = 0u32;
            for (si, s) in segs[i].iter().enumerate() {
                for (tj, t) in segs[j].iter().enumerate() {
                    if let Some(u) = seg_intersect(s, t) {
                        // parameter along t for the mirrored record
                        let v = seg_intersect(t, s).expect("asymmetric intersection");
                        let di = s.dir();
                        let dj = t.dir();
                        assert!(di.y != 0 && dj.y != 0, "horizontal germ at crossing");
                        raw[i].push((
                            si,
                            u,
                            GeoEv::Cross { other: j, serial, my_dir: di, other_dir: dj },
                        ));
                        raw[j].push((
                            tj,
                            v,
                            GeoEv::Cross { other: i, serial, my_dir: dj, other_dir: di },
                        ));
                        serial += 1;
                    }
                }
            }
        }
    }

    let mut out = Vec::with_capacity(specs.len());
    for (idx, spec) in specs.iter().enumerate() {
        let mut evs = std::mem::take(&mut raw[idx]);
        evs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        for w2 in evs.windows(2) {
            assert!(
                (w2[0].0, &w2[0].1) != (w2[1].0, &w2[1].1),
                "degenerate picture: coincident crossings on one strand"
            );
        }
        let mut list: Vec<GeoEv> = Vec::new();
        let turn = |sgs: &Vec<Seg>| -> GeoEv {
            let din = sgs[0].dir();
            let dout = sgs[1].dir();
            let kind = if din.y < 0 && dout.y > 0 { TurnKind::Min } else { TurnKind::Max };
            let chir = if din.cross(dout) > 0 { 1 } else { -1 };
            GeoEv::Turn { kind, chir }
        };
        match spec {
            ArcSpec::Vert { .. } => {
                for (_, _, e) in evs {
                    list.push(e);
                }
            }
            ArcSpec::Cap { .. } | ArcSpec::Cup { .. } => {
                let mut emitted = false;
                for (si, _, e) in evs {
                    if si == 1 && !emitted {
                        list.push(turn(&segs[idx]));
                        emitted = true;
                    }
                    list.push(e);
                }
                if !emitted {
                    list.push(turn(&segs[idx]));
                }
            }
        }
        out.push(list);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_verticals_cross_once() {
        let evs = strand_events(
            &[ArcSpec::Vert { xb: 0, xt: 1 }, ArcSpec::Vert { xb: 1, xt: 0 }],
            2,
            0,
        );
        assert_eq!(evs[0].len(), 1);
        assert_eq!(evs[1].len(), 1);
        match &evs[0][0] {
            GeoEv::Cross { other, my_dir, .. } => {
                assert_eq!(*other, 1);
                assert!(my_dir.y > 0);
            }
            _ => panic!("expected crossing"),
        }
    }

    #[test]
    fn parallel_verticals_do_not_cross() {
        let evs = strand_events(
            &[ArcSpec::Vert { xb: 0, xt: 0 }, ArcSpec::Vert { xb: 1, xt: 1 }],
            2,
            0,
        );
        assert!(evs[0].is_empty() && evs[1].is_empty());
    }

    #[test]
    fn cap_has_one_max_turn() {
        let evs = strand_events(&[ArcSpec::Cap { xl: 0, xr: 1 }], 2, 0);
        assert_eq!(evs[0], vec![GeoEv::Turn { kind: TurnKind::Max, chir: -1 }]);
        let evs = strand_events(&[ArcSpec::Cup { xl: 0, xr: 1 }], 2, 0);
        assert_eq!(evs[0], vec![GeoEv::Turn { kind: TurnKind::Min, chir: 1 }]);
    }

    #[test]
    fn vertical_escapes_cap() {
        // vertical starting inside the cap's base must cross it exactly once
        let evs = strand_events(
            &[ArcSpec::Cap { xl: 0, xr: 2 }, ArcSpec::Vert { xb: 1, xt: 0 }],
            3,
            0,
        );
        let crossings = evs[1]
            .iter()
            .filter(|e| matches!(e, GeoEv::Cross { .. }))
            .count();
        assert_eq!(crossings, 1);
    }

    #[test]
    fn nested_caps_do_not_cross_interleaved_do() {
        let evs = strand_events(
            &[ArcSpec::Cap { xl: 0, xr: 3 }, ArcSpec::Cap { xl: 1, xr: 2 }],
            4,
            0,
        );
        assert!(evs[0].iter().all(|e| !matches!(e, GeoEv::Cross { .. })));
        let evs = strand_events(
            &[ArcSpec::Cap { xl: 0, xr: 2 }, ArcSpec::Cap { xl: 1, xr: 3 }],
            4,
            0,
        );
        let crossings = evs[0]
            .iter()
            .filter(|e| matches!(e, GeoEv::Cross { .. }))
            .count();
        assert_eq!(crossings, 1);
    }

    #[test]
    fn caps_and_cups_never_meet() {
        let evs = strand_events(
            &[ArcSpec::Cap { xl: 0, xr: 3 }, ArcSpec::Cup { xl: 1, xr: 2 }],
            4,
            0,
        );
        assert!(evs[0].iter().all(|e| !matches!(e, GeoEv::Cross { .. })));
    }
}
