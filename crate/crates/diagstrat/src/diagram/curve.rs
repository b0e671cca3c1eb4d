//! Abstract curve diagrams and the normal-order rewriting driver.
//!
//! A [`Curve`] is a morphism picture in mid-rewrite: a set of components
//! (open strands and closed loops), each carrying an ordered list of events —
//! crossings with other components, turns (extrema), and dot piles.
//! Composition glues two pictures; normalization transports every dot to its
//! parked position, emitting the correction terms dictated by the category's
//! relations, evaluates closed loops into bubble scalars, and reduces full
//! dot piles through the cyclotomic relation. What remains reads off as a
//! basis diagram.
//!
//! The relation content (turn signs, crossing corrections, loop values, pile
//! reduction, parking convention) comes from a [`FlavorOps`] implementation,
//! one per diagram flavor.

use crate::error::{Error, Result};
use crate::field::FieldElement;

pub use super::geom::{TurnKind, V2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ev {
    Cross { id: u32, dir: V2 },
    Turn { kind: TurnKind, chir: i8 },
    Dots { n: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EndPt {
    Bot(u32),
    Top(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Start,
    End,
}

#[derive(Clone, Debug)]
pub struct Component {
    /// `None` for a closed loop; otherwise the boundary points the traversal
    /// runs between.
    pub ends: Option<(EndPt, EndPt)>,
    pub evs: Vec<Ev>,
    /// Oriented flavor: whether the traversal direction agrees with the
    /// strand's orientation; `None` for the unoriented flavor.
    pub flow_fwd: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Curve {
    pub bottom: usize,
    pub top: usize,
    pub comps: Vec<Component>,
    pub next_id: u32,
}

pub fn reverse_evs(evs: &[Ev]) -> Vec<Ev> {
    evs.iter()
        .rev()
        .map(|e| match e {
            Ev::Cross { id, dir } => Ev::Cross { id: *id, dir: dir.neg() },
            Ev::Turn { kind, chir } => Ev::Turn { kind: *kind, chir: -chir },
            Ev::Dots { n } => Ev::Dots { n: *n },
        })
        .collect()
}

pub(super) fn merge_adjacent_dots(evs: &mut Vec<Ev>, cyclic: bool) {
    evs.retain(|e| !matches!(e, Ev::Dots { n: 0 }));
    let mut i = 0;
    while i < evs.len() {
        let j = i + 1;
        if j < evs.len() {
            if let (Ev::Dots { n: a }, Ev::Dots { n: b }) = (&evs[i], &evs[j]) {
                evs[i] = Ev::Dots { n: a + b };
                evs.remove(j);
                continue;
            }
        }
        i += 1;
    }
    if cyclic && evs.len() > 1 {
        if let (Ev::Dots { n: a }, Ev::Dots { n: b }) =
            (evs[0].clone(), evs[evs.len() - 1].clone())
        {
            evs[0] = Ev::Dots { n: a + b };
            evs.pop();
        }
    }
}

/// Stack `upper` on top of `lower` (lower.top == upper.bottom), tracing
/// composite strands and loops.
pub fn glue(lower: &Curve, upper: &Curve) -> Curve {
    assert_eq!(lower.top, upper.bottom, "gluing interface mismatch");
    let shift = lower.next_id;

    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    enum Node {
        LBot(u32),
        Mid(u32),
        UTop(u32),
    }
    fn node_of(layer: usize, e: EndPt) -> Node {
        match (layer, e) {
            (0, EndPt::Bot(p)) => Node::LBot(p),
            (0, EndPt::Top(t)) => Node::Mid(t),
            (1, EndPt::Bot(p)) => Node::Mid(p),
            (1, EndPt::Top(t)) => Node::UTop(t),
            _ => unreachable!(),
        }
    }

    let layers = [lower, upper];
    let mut used = [
        vec![false; lower.comps.len()],
        vec![false; upper.comps.len()],
    ];
    let mut out: Vec<Component> = Vec::new();

    for (li, layer) in layers.iter().enumerate() {
        for (ci, c) in layer.comps.iter().enumerate() {
            if c.ends.is_none() {
                used[li][ci] = true;
                let mut evs = c.evs.clone();
                if li == 1 {
                    remap_ids(&mut evs, shift);
                }
                out.push(Component { ends: None, evs, flow_fwd: c.flow_fwd });
            }
        }
    }

    // arc ends indexed by node
    let mut ends_at: Vec<(Node, usize, usize, Side)> = Vec::new();
    for (li, layer) in layers.iter().enumerate() {
        for (ci, c) in layer.comps.iter().enumerate() {
            if let Some((a, b)) = c.ends {
                ends_at.push((node_of(li, a), li, ci, Side::Start));
                ends_at.push((node_of(li, b), li, ci, Side::End));
            }
        }
    }
    let find_at = |node: Node,
                   exclude: Option<(usize, usize, Side)>,
                   _used: &[Vec<bool>]|
     -> Option<(usize, usize, Side)> {
        ends_at
            .iter()
            .filter(|(n, li, ci, s)| *n == node && exclude != Some((*li, *ci, *s)))
            .map(|(_, li, ci, s)| (*li, *ci, *s))
            .next()
    };

    // traverse one constituent arc from the given side
    let seg_of = |li: usize, ci: usize, side: Side| -> (Vec<Ev>, EndPt, Option<bool>) {
        let c = &layers[li].comps[ci];
        let (a, b) = c.ends.unwrap();
        let (mut seg, exit, flow) = if side == Side::Start {
            (c.evs.clone(), b, c.flow_fwd)
        } else {
            (reverse_evs(&c.evs), a, c.flow_fwd.map(|f| !f))
        };
        if li == 1 {
            remap_ids(&mut seg, shift);
        }
        (seg, exit, flow)
    };

    // open composites: start at each boundary node, ordered for determinism
    let mut starts: Vec<(EndPt, usize, usize, Side)> = Vec::new();
    for (n, li, ci, s) in &ends_at {
        match n {
            Node::LBot(p) => starts.push((EndPt::Bot(*p), *li, *ci, *s)),
            Node::UTop(t) => starts.push((EndPt::Top(*t), *li, *ci, *s)),
            Node::Mid(_) => {}
        }
    }
    starts.sort_by_key(|(e, ..)| *e);
    for (start_pt, li0, ci0, s0) in starts {
        if used[li0][ci0] {
            continue;
        }
        let mut evs: Vec<Ev> = Vec::new();
        let mut flow: Option<bool> = None;
        let (mut li, mut ci, mut side) = (li0, ci0, s0);
        let end_pt = loop {
            used[li][ci] = true;
            let (seg, exit, seg_flow) = seg_of(li, ci, side);
            match (flow, seg_flow) {
                (None, f) => flow = f,
                (Some(f), Some(g)) => assert!(f == g, "orientation mismatch while gluing"),
                (Some(_), None) => {}
            }
            evs.extend(seg);
            match node_of(li, exit) {
                Node::Mid(_) => {
                    let here = (li, ci, opposite(side));
                    let (nli, nci, ns) = find_at(node_of(li, exit), Some(here), &used)
                        .expect("dangling interface point");
                    li = nli;
                    ci = nci;
                    side = ns;
                }
                Node::LBot(p) => break EndPt::Bot(p),
                Node::UTop(t) => break EndPt::Top(t),
            }
        };
        merge_adjacent_dots(&mut evs, false);
        out.push(Component { ends: Some((start_pt, end_pt)), evs, flow_fwd: flow });
    }

    // leftovers close into loops
    for li0 in 0..2usize {
        for ci0 in 0..layers[li0].comps.len() {
            if used[li0][ci0] {
                continue;
            }
            let mut evs: Vec<Ev> = Vec::new();
            let mut flow: Option<bool> = None;
            let (mut li, mut ci, mut side) = (li0, ci0, Side::Start);
            loop {
                used[li][ci] = true;
                let (seg, exit, seg_flow) = seg_of(li, ci, side);
                match (flow, seg_flow) {
                    (None, f) => flow = f,
                    (Some(f), Some(g)) => assert!(f == g, "orientation mismatch while gluing loop"),
                    (Some(_), None) => {}
                }
                evs.extend(seg);
                let here = (li, ci, opposite(side));
                let (nli, nci, ns) = find_at(node_of(li, exit), Some(here), &used)
                    .expect("dangling interface point in loop");
                if (nli, nci, ns) == (li0, ci0, Side::Start) {
                    break;
                }
                li = nli;
                ci = nci;
                side = ns;
            }
            merge_adjacent_dots(&mut evs, true);
            out.push(Component { ends: None, evs, flow_fwd: flow });
        }
    }

    Curve {
        bottom: lower.bottom,
        top: upper.top,
        comps: out,
        next_id: lower.next_id + upper.next_id,
    }
}

fn opposite(s: Side) -> Side {
    match s {
        Side::Start => Side::End,
        Side::End => Side::Start,
    }
}

fn remap_ids(evs: &mut [Ev], shift: u32) {
    for e in evs {
        if let Ev::Cross { id, .. } = e {
            *id += shift;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResKind {
    /// e-type resolution: join the two upper germs with a Min turn, the two
    /// lower germs with a Max.
    Turnback,
    /// identity-type resolution: join up-germs to down-germs straight.
    Straight,
}

#[derive(Clone, Debug)]
enum PEnd {
    Bnd(EndPt),
    /// occ: which occurrence of the crossing; germ points away from the
    /// crossing along the piece.
    Stub { occ: usize, germ: V2 },
}

#[derive(Clone, Debug)]
struct Piece {
    a: PEnd,
    b: PEnd,
    evs: Vec<Ev>,
    flow: Option<bool>,
}

/// Replace crossing `id` by a resolution, resewing the affected strands.
pub fn surgery(cd: &Curve, id: u32, res: ResKind) -> Curve {
    let mut pieces: Vec<Piece> = Vec::new();
    let mut out: Vec<Component> = Vec::new();
    let mut occ_dirs: Vec<V2> = Vec::new();

    for comp in &cd.comps {
        let hits: Vec<usize> = comp
            .evs
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Ev::Cross { id: x, .. } if *x == id => Some(i),
                _ => None,
            })
            .collect();
        if hits.is_empty() {
            out.push(comp.clone());
            continue;
        }
        let dir_at = |i: usize| -> V2 {
            match comp.evs[i] {
                Ev::Cross { dir, .. } => dir,
                _ => unreachable!(),
            }
        };
        match (comp.ends, hits.len()) {
            (Some((a, b)), 1) => {
                let p = hits[0];
                let occ = occ_dirs.len();
                occ_dirs.push(dir_at(p));
                pieces.push(Piece {
                    a: PEnd::Bnd(a),
                    b: PEnd::Stub { occ, germ: dir_at(p).neg() },
                    evs: comp.evs[..p].to_vec(),
                    flow: comp.flow_fwd,
                });
                pieces.push(Piece {
                    a: PEnd::Stub { occ, germ: dir_at(p) },
                    b: PEnd::Bnd(b),
                    evs: comp.evs[p + 1..].to_vec(),
                    flow: comp.flow_fwd,
                });
            }
            (Some((a, b)), 2) => {
                let (p1, p2) = (hits[0], hits[1]);
                let o1 = occ_dirs.len();
                occ_dirs.push(dir_at(p1));
                let o2 = occ_dirs.len();
                occ_dirs.push(dir_at(p2));
                pieces.push(Piece {
                    a: PEnd::Bnd(a),
                    b: PEnd::Stub { occ: o1, germ: dir_at(p1).neg() },
                    evs: comp.evs[..p1].to_vec(),
                    flow: comp.flow_fwd,
                });
                pieces.push(Piece {
                    a: PEnd::Stub { occ: o1, germ: dir_at(p1) },
                    b: PEnd::Stub { occ: o2, germ: dir_at(p2).neg() },
                    evs: comp.evs[p1 + 1..p2].to_vec(),
                    flow: comp.flow_fwd,
                });
                pieces.push(Piece {
                    a: PEnd::Stub { occ: o2, germ: dir_at(p2) },
                    b: PEnd::Bnd(b),
                    evs: comp.evs[p2 + 1..].to_vec(),
                    flow: comp.flow_fwd,
                });
            }
            (None, 1) => {
                let p = hits[0];
                let occ = occ_dirs.len();
                occ_dirs.push(dir_at(p));
                let mut evs = comp.evs[p + 1..].to_vec();
                evs.extend_from_slice(&comp.evs[..p]);
                pieces.push(Piece {
                    a: PEnd::Stub { occ, germ: dir_at(p) },
                    b: PEnd::Stub { occ, germ: dir_at(p).neg() },
                    evs,
                    flow: comp.flow_fwd,
                });
            }
            (None, 2) => {
                let (p1, p2) = (hits[0], hits[1]);
                let o1 = occ_dirs.len();
                occ_dirs.push(dir_at(p1));
                let o2 = occ_dirs.len();
                occ_dirs.push(dir_at(p2));
                pieces.push(Piece {
                    a: PEnd::Stub { occ: o1, germ: dir_at(p1) },
                    b: PEnd::Stub { occ: o2, germ: dir_at(p2).neg() },
                    evs: comp.evs[p1 + 1..p2].to_vec(),
                    flow: comp.flow_fwd,
                });
                let mut evs = comp.evs[p2 + 1..].to_vec();
                evs.extend_from_slice(&comp.evs[..p1]);
                pieces.push(Piece {
                    a: PEnd::Stub { occ: o2, germ: dir_at(p2) },
                    b: PEnd::Stub { occ: o1, germ: dir_at(p1).neg() },
                    evs,
                    flow: comp.flow_fwd,
                });
            }
            _ => panic!("crossing occurs more than twice"),
        }
    }
    assert_eq!(occ_dirs.len(), 2, "crossing id {id} does not occur exactly twice");

    // stub identity: (occ, points-forward?) where forward means germ == dir
    let germ_of = |occ: usize, fwd: bool| -> V2 {
        if fwd {
            occ_dirs[occ]
        } else {
            occ_dirs[occ].neg()
        }
    };
    let partner = |occ: usize, fwd: bool| -> (usize, bool) {
        let other = 1 - occ;
        let me_up = germ_of(occ, fwd).y > 0;
        let want_up = match res {
            ResKind::Turnback => me_up,
            ResKind::Straight => !me_up,
        };
        for f in [false, true] {
            if (germ_of(other, f).y > 0) == want_up {
                return (other, f);
            }
        }
        unreachable!()
    };
    let stub_key = |p: &PEnd| -> Option<(usize, bool)> {
        match p {
            PEnd::Bnd(_) => None,
            PEnd::Stub { occ, germ } => Some((*occ, *germ == occ_dirs[*occ])),
        }
    };
    let turn_event = |g_in: V2, g_out: V2| -> Ev {
        let kind = if g_in.y > 0 && g_out.y > 0 { TurnKind::Min } else { TurnKind::Max };
        let chir = if g_in.neg().cross(g_out) > 0 { 1 } else { -1 };
        Ev::Turn { kind, chir }
    };

    let mut used = vec![false; pieces.len()];
    let find_piece = |key: (usize, bool), used: &[bool]| -> Option<(usize, Side)> {
        for (i, p) in pieces.iter().enumerate() {
            if used[i] {
                continue;
            }
            if stub_key(&p.a) == Some(key) {
                return Some((i, Side::Start));
            }
            if stub_key(&p.b) == Some(key) {
                return Some((i, Side::End));
            }
        }
        None
    };

    // open walks from boundary ends
    for i in 0..pieces.len() {
        if used[i] {
            continue;
        }
        let s0 = if matches!(pieces[i].a, PEnd::Bnd(_)) {
            Side::Start
        } else if matches!(pieces[i].b, PEnd::Bnd(_)) {
            Side::End
        } else {
            continue;
        };
        let start_pt = match (s0, &pieces[i].a, &pieces[i].b) {
            (Side::Start, PEnd::Bnd(e), _) => *e,
            (Side::End, _, PEnd::Bnd(e)) => *e,
            _ => unreachable!(),
        };
        let mut evs: Vec<Ev> = Vec::new();
        let mut flow: Option<bool> = None;
        let (mut j, mut side) = (i, s0);
        let end_pt = loop {
            used[j] = true;
            let p = &pieces[j];
            let (seg, exit, seg_flow) = if side == Side::Start {
                (p.evs.clone(), p.b.clone(), p.flow)
            } else {
                (reverse_evs(&p.evs), p.a.clone(), p.flow.map(|f| !f))
            };
            match (flow, seg_flow) {
                (None, f) => flow = f,
                (Some(f), Some(g)) => assert!(f == g, "orientation mismatch in surgery"),
                (Some(_), None) => {}
            }
            evs.extend(seg);
            match exit {
                PEnd::Bnd(e) => break e,
                PEnd::Stub { occ, germ } => {
                    let fwd = germ == occ_dirs[occ];
                    let (no, nf) = partner(occ, fwd);
                    if res == ResKind::Turnback {
                        evs.push(turn_event(germ, germ_of(no, nf)));
                    }
                    let (nj, ns) = find_piece((no, nf), &used).expect("missing partner piece");
                    j = nj;
                    side = ns;
                }
            }
        };
        merge_adjacent_dots(&mut evs, false);
        out.push(Component { ends: Some((start_pt, end_pt)), evs, flow_fwd: flow });
    }

    // remaining pieces close into loops
    for i in 0..pieces.len() {
        if used[i] {
            continue;
        }
        let entry_key = stub_key(&pieces[i].a).expect("loop piece without stub");
        let mut evs: Vec<Ev> = Vec::new();
        let mut flow: Option<bool> = None;
        let (mut j, mut side) = (i, Side::Start);
        loop {
            used[j] = true;
            let p = &pieces[j];
            let (seg, exit, seg_flow) = if side == Side::Start {
                (p.evs.clone(), p.b.clone(), p.flow)
            } else {
                (reverse_evs(&p.evs), p.a.clone(), p.flow.map(|f| !f))
            };
            match (flow, seg_flow) {
                (None, f) => flow = f,
                (Some(f), Some(g)) => assert!(f == g, "orientation mismatch in surgery loop"),
                (Some(_), None) => {}
            }
            evs.extend(seg);
            let PEnd::Stub { occ, germ } = exit else { panic!("loop reached boundary") };
            let fwd = germ == occ_dirs[occ];
            let (no, nf) = partner(occ, fwd);
            if res == ResKind::Turnback {
                evs.push(turn_event(germ, germ_of(no, nf)));
            }
            if (no, nf) == entry_key {
                break;
            }
            let (nj, ns) = find_piece((no, nf), &used).expect("missing loop partner piece");
            j = nj;
            side = ns;
        }
        merge_adjacent_dots(&mut evs, true);
        out.push(Component { ends: None, evs, flow_fwd: flow });
    }

    Curve { bottom: cd.bottom, top: cd.top, comps: out, next_id: cd.next_id }
}

/// Flavor-specific relation content consumed by the normalization driver.
pub trait FlavorOps {
    /// dot bound: a parked pile of exactly m dots triggers reduction
    fn m(&self) -> u32;
    /// coefficient factor for one dot passing one extremum
    fn turn_factor(&self) -> FieldElement;
    /// corrections emitted when one dot hops one crossing;
    /// `same_flow` is only meaningful for the oriented flavor
    fn hop_corrections(&self, same_flow: bool, dest_right: bool) -> Vec<(i64, ResKind)>;
    /// scalar of a closed loop with k dots; `pile_left`: pile sits on the
    /// left half; `winding`: +1 counterclockwise; `flow_pos`: traversal
    /// agrees with orientation (oriented flavor)
    fn loop_value(&self, k: u32, pile_left: bool, winding: i8, flow_pos: bool) -> Result<FieldElement>;
    /// which end of an open component its dots park at
    fn park_side(&self, comp: &Component) -> Side;
    /// replace a full parked pile (m dots at the given end of an open,
    /// otherwise pile-free component) by its cyclotomic reduction; receives
    /// the curve with the m dots already removed and must return the glued
    /// replacement curves
    fn reduce_full_pile(&self, stripped: &Curve, comp_idx: usize, side: Side)
        -> Result<Vec<(FieldElement, Curve)>>;
    fn one(&self) -> FieldElement;
    fn int(&self, n: i64) -> FieldElement;
}

const WORK_BUDGET: u64 = 200_000_000;

/// Rewrites the given weighted curves to terminal form: no closed components,
/// every dot parked, every pile below m. Terminal curves are returned for the
/// flavor layer to read off as basis diagrams.
pub fn normalize_curves(
    items: Vec<(FieldElement, Curve)>,
    ops: &dyn FlavorOps,
) -> Result<Vec<(FieldElement, Curve)>> {
    let mut stack = items;
    let mut done: Vec<(FieldElement, Curve)> = Vec::new();
    let mut budget = WORK_BUDGET;
    while let Some((mut coeff, mut cd)) = stack.pop() {
        loop {
            if budget == 0 {
                return Err(Error::RewriteDivergence);
            }
            budget -= 1;
            if coeff.is_zero() {
                break;
            }
            match step(&mut coeff, &mut cd, ops, &mut stack)? {
                StepOut::Progress => continue,
                StepOut::Replaced(items) => {
                    stack.extend(items);
                    break;
                }
                StepOut::Terminal => {
                    done.push((coeff, cd));
                    break;
                }
            }
        }
    }
    Ok(done)
}

enum StepOut {
    Progress,
    Replaced(Vec<(FieldElement, Curve)>),
    Terminal,
}

fn step(
    coeff: &mut FieldElement,
    cd: &mut Curve,
    ops: &dyn FlavorOps,
    spawn: &mut Vec<(FieldElement, Curve)>,
) -> Result<StepOut> {
    // 1. closed components first
    if let Some(li) = cd.comps.iter().position(|c| c.ends.is_none()) {
        return loop_step(coeff, cd, li, ops, spawn);
    }
    // 2. full parked piles reduce before any further dot may arrive
    for ci in 0..cd.comps.len() {
        let side = ops.park_side(&cd.comps[ci]);
        if let Some(k) = parked_count(&cd.comps[ci], side) {
            if k >= ops.m() {
                assert_eq!(k, ops.m(), "parked pile overshot the dot bound");
                let mut stripped = cd.clone();
                strip_parked(&mut stripped.comps[ci], side, ops.m());
                let repl = ops.reduce_full_pile(&stripped, ci, side)?;
                let out = repl
                    .into_iter()
                    .map(|(c, k)| (coeff.clone() * c, k))
                    .collect();
                return Ok(StepOut::Replaced(out));
            }
        }
    }
    // 3. transport open-strand dots toward their park slots
    for ci in 0..cd.comps.len() {
        let side = ops.park_side(&cd.comps[ci]);
        if let Some(pos) = unparked_pile(&cd.comps[ci], side) {
            return transport_step(coeff, cd, ci, pos, side, ops, spawn);
        }
    }
    Ok(StepOut::Terminal)
}

fn parked_pos(comp: &Component, side: Side) -> Option<usize> {
    match side {
        Side::Start => match comp.evs.first() {
            Some(Ev::Dots { .. }) => Some(0),
            _ => None,
        },
        Side::End => match comp.evs.last() {
            Some(Ev::Dots { .. }) => Some(comp.evs.len() - 1),
            _ => None,
        },
    }
}

fn parked_count(comp: &Component, side: Side) -> Option<u32> {
    parked_pos(comp, side).map(|p| match comp.evs[p] {
        Ev::Dots { n } => n,
        _ => unreachable!(),
    })
}

fn strip_parked(comp: &mut Component, side: Side, m: u32) {
    let p = parked_pos(comp, side).expect("no parked pile to strip");
    match &mut comp.evs[p] {
        Ev::Dots { n } => {
            assert!(*n >= m);
            *n -= m;
            if *n == 0 {
                comp.evs.remove(p);
            }
        }
        _ => unreachable!(),
    }
}

/// Position of a Dots event that still has to move (anything besides a single
/// parked pile). Returns the one closest to the park side.
fn unparked_pile(comp: &Component, side: Side) -> Option<usize> {
    let ppos = parked_pos(comp, side);
    let dots: Vec<usize> = comp
        .evs
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, Ev::Dots { .. }))
        .map(|(i, _)| i)
        .collect();
    let mut cands: Vec<usize> = dots.into_iter().filter(|p| Some(*p) != ppos).collect();
    if cands.is_empty() {
        return None;
    }
    match side {
        Side::Start => {
            cands.sort();
            Some(cands[0])
        }
        Side::End => {
            cands.sort();
            Some(*cands.last().unwrap())
        }
    }
}

/// Move one dot from the pile at `pos` one event toward the park side.
fn transport_step(
    coeff: &mut FieldElement,
    cd: &mut Curve,
    ci: usize,
    pos: usize,
    side: Side,
    ops: &dyn FlavorOps,
    spawn: &mut Vec<(FieldElement, Curve)>,
) -> Result<StepOut> {
    let toward_start = side == Side::Start;
    let n_here = match cd.comps[ci].evs[pos] {
        Ev::Dots { n } => n,
        _ => unreachable!(),
    };
    debug_assert!(
        !(toward_start && pos == 0) && !(!toward_start && pos == cd.comps[ci].evs.len() - 1),
        "parked pile selected for transport"
    );
    let nb = if toward_start { pos - 1 } else { pos + 1 };
    match cd.comps[ci].evs[nb].clone() {
        Ev::Dots { n: other } => {
            let comp = &mut cd.comps[ci];
            if parked_pos(comp, side) == Some(nb) {
                // feed the parked pile one dot at a time so that fullness is
                // caught exactly at m
                set_dots(&mut comp.evs[pos], n_here - 1);
                set_dots(&mut comp.evs[nb], other + 1);
            } else {
                set_dots(&mut comp.evs[pos], 0);
                set_dots(&mut comp.evs[nb], other + n_here);
            }
            comp.evs.retain(|e| !matches!(e, Ev::Dots { n: 0 }));
            Ok(StepOut::Progress)
        }
        Ev::Turn { .. } => {
            // the whole pile slides past, one factor per dot
            let f = ops.turn_factor();
            let mut fac = ops.one();
            for _ in 0..n_here {
                fac = fac * f.clone();
            }
            *coeff = coeff.clone() * fac;
            cd.comps[ci].evs.swap(pos, nb);
            Ok(StepOut::Progress)
        }
        Ev::Cross { .. } => {
            force_hop(coeff, cd, ci, pos, toward_start, ops, spawn)?;
            Ok(StepOut::Progress)
        }
    }
}

/// Move one dot of the pile at `pos` across the adjacent crossing (which
/// must be the neighboring event in the hop direction), spawning the
/// flavor's correction terms. Shared by ordinary transports and the
/// cyclotomic-table peels.
pub fn force_hop(
    coeff: &FieldElement,
    cd: &mut Curve,
    ci: usize,
    pos: usize,
    toward_start: bool,
    ops: &dyn FlavorOps,
    spawn: &mut Vec<(FieldElement, Curve)>,
) -> Result<()> {
    let n_here = match cd.comps[ci].evs[pos] {
        Ev::Dots { n } => n,
        _ => panic!("force_hop expects a pile"),
    };
    let nb = if toward_start { pos - 1 } else { pos + 1 };
    let (id, dir) = match cd.comps[ci].evs[nb] {
        Ev::Cross { id, dir } => (id, dir),
        _ => panic!("force_hop expects a crossing next to the pile"),
    };
    let travel = if toward_start { dir.neg() } else { dir };
    let (other_dir, other_flow) = partner_info(cd, ci, id, nb)?;
    let dest_right = other_dir.upward().cross(travel) < 0;
    let same_flow = match (cd.comps[ci].flow_fwd, other_flow) {
        (Some(f), Some(g)) => ((dir.y > 0) == f) == g,
        _ => true,
    };

    // corrections: the hopping dot is consumed
    for (sgn, res) in ops.hop_corrections(same_flow, dest_right) {
        let mut base = cd.clone();
        set_dots(&mut base.comps[ci].evs[pos], n_here - 1);
        base.comps[ci].evs.retain(|e| !matches!(e, Ev::Dots { n: 0 }));
        let cut = surgery(&base, id, res);
        spawn.push((coeff.clone() * ops.int(sgn), cut));
    }
    // main term: the dot lands on the other side of the crossing
    let comp = &mut cd.comps[ci];
    set_dots(&mut comp.evs[pos], n_here - 1);
    let insert_at = if toward_start { nb } else { nb + 1 };
    comp.evs.insert(insert_at, Ev::Dots { n: 1 });
    comp.evs.retain(|e| !matches!(e, Ev::Dots { n: 0 }));
    Ok(())
}

fn set_dots(e: &mut Ev, n: u32) {
    *e = Ev::Dots { n };
}

/// Direction and flow of the partner occurrence of crossing `id` (the
/// occurrence other than (comp ci, event pos)).
fn partner_info(cd: &Curve, ci: usize, id: u32, pos: usize) -> Result<(V2, Option<bool>)> {
    for (cj, comp) in cd.comps.iter().enumerate() {
        for (ei, e) in comp.evs.iter().enumerate() {
            if let Ev::Cross { id: x, dir } = e {
                if *x == id && (cj, ei) != (ci, pos) {
                    let up = comp.flow_fwd.map(|f| (dir.y > 0) == f);
                    return Ok((*dir, up));
                }
            }
        }
    }
    panic!("missing partner occurrence of crossing {id}");
}

fn loop_step(
    coeff: &mut FieldElement,
    cd: &mut Curve,
    li: usize,
    ops: &dyn FlavorOps,
    spawn: &mut Vec<(FieldElement, Curve)>,
) -> Result<StepOut> {
    merge_adjacent_dots(&mut cd.comps[li].evs, true);
    let dots_pos: Vec<usize> = cd.comps[li]
        .evs
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, Ev::Dots { .. }))
        .map(|(i, _)| i)
        .collect();

    if dots_pos.len() >= 2 {
        // move one dot of the second pile backward toward the first
        let target = dots_pos[0];
        let src = dots_pos[1];
        assert!(src > target);
        let nb = src - 1;
        let n_here = match cd.comps[li].evs[src] {
            Ev::Dots { n } => n,
            _ => unreachable!(),
        };
        match cd.comps[li].evs[nb].clone() {
            Ev::Dots { .. } => unreachable!("adjacent piles were merged"),
            Ev::Turn { .. } => {
                let f = ops.turn_factor();
                let mut fac = ops.one();
                for _ in 0..n_here {
                    fac = fac * f.clone();
                }
                *coeff = coeff.clone() * fac;
                cd.comps[li].evs.swap(src, nb);
                return Ok(StepOut::Progress);
            }
            Ev::Cross { .. } => {
                force_hop(coeff, cd, li, src, true, ops, spawn)?;
                merge_adjacent_dots(&mut cd.comps[li].evs, true);
                return Ok(StepOut::Progress);
            }
        }
    }

    // dots collected (or none): remove every crossing touching this loop
    let cross_ids: Vec<u32> = cd.comps[li]
        .evs
        .iter()
        .filter_map(|e| match e {
            Ev::Cross { id, .. } => Some(*id),
            _ => None,
        })
        .collect();
    if !cross_ids.is_empty() {
        for id in cross_ids {
            for comp in cd.comps.iter_mut() {
                comp.evs.retain(|e| !matches!(e, Ev::Cross { id: x, .. } if *x == id));
            }
        }
        return Ok(StepOut::Progress);
    }

    // cancel turn pairs not separated by the pile
    let evs = &cd.comps[li].evs;
    let n = evs.len();
    let turns: Vec<usize> = (0..n)
        .filter(|&i| matches!(evs[i], Ev::Turn { .. }))
        .collect();
    if turns.len() > 2 {
        for w in 0..turns.len() {
            let i = turns[w];
            let j = turns[(w + 1) % turns.len()];
            // adjacent in the cyclic list (nothing between)
            let adjacent = if j > i { j == i + 1 } else { i == n - 1 && j == 0 };
            if adjacent {
                let (ki, kj) = match (&evs[i], &evs[j]) {
                    (Ev::Turn { kind: a, .. }, Ev::Turn { kind: b, .. }) => (*a, *b),
                    _ => unreachable!(),
                };
                assert!(ki != kj, "turn kinds must alternate along a strand");
                let comp = &mut cd.comps[li];
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                comp.evs.remove(hi);
                comp.evs.remove(lo);
                return Ok(StepOut::Progress);
            }
        }
        panic!("no cancellable turn pair on a loop with >2 turns");
    }

    // evaluate: exactly two turns remain
    let evs = &cd.comps[li].evs;
    let turns: Vec<(usize, TurnKind, i8)> = evs
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e {
            Ev::Turn { kind, chir } => Some((i, *kind, *chir)),
            _ => None,
        })
        .collect();
    assert_eq!(turns.len(), 2, "closed loop must end with two turns");
    assert!(turns[0].1 != turns[1].1, "loop extrema must differ");
    assert_eq!(turns[0].2, turns[1].2, "loop winding must be ±1");
    let winding = turns[0].2;
    let (min_i, max_i) = if turns[0].1 == TurnKind::Min {
        (turns[0].0, turns[1].0)
    } else {
        (turns[1].0, turns[0].0)
    };
    let k = evs
        .iter()
        .filter_map(|e| match e {
            Ev::Dots { n } => Some(*n),
            _ => None,
        })
        .sum::<u32>();
    // pile position relative to the Min→Max arc of the traversal
    let pile_in_min_to_max = match evs.iter().position(|e| matches!(e, Ev::Dots { .. })) {
        None => true, // irrelevant when k = 0
        Some(p) => {
            if min_i < max_i {
                p > min_i && p < max_i
            } else {
                p > min_i || p < max_i
            }
        }
    };
    // counterclockwise: the Min→Max arc is the right half
    let pile_left = if winding == 1 { !pile_in_min_to_max } else { pile_in_min_to_max };
    let flow_pos = cd.comps[li].flow_fwd.unwrap_or(true);
    let value = ops.loop_value(k, pile_left, winding, flow_pos)?;
    *coeff = coeff.clone() * value;
    cd.comps.remove(li);
    let _ = spawn;
    Ok(StepOut::Progress)
}

/// Reads a terminal curve off as (endpoint pairs, parked dot count per
/// component, flow flags). The flavor layer converts this into its basis
/// diagram type.
pub fn read_off(cd: &Curve, ops: &dyn FlavorOps) -> Vec<((EndPt, EndPt), u32, Option<bool>)> {
    let mut out = Vec::new();
    for comp in &cd.comps {
        let ends = comp.ends.expect("terminal curve has a closed component");
        let side = ops.park_side(comp);
        let k = parked_count(comp, side).unwrap_or(0);
        // everything except the parked pile must be turns/crossings
        let extra: u32 = comp
            .evs
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Ev::Dots { n } if Some(i) != parked_pos(comp, side) => Some(*n),
                _ => None,
            })
            .sum();
        assert_eq!(extra, 0, "terminal curve has unparked dots");
        out.push((ends, k, comp.flow_fwd));
    }
    out
}
