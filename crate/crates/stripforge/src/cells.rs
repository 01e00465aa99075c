//! Cell structures on a convex cocompact surface, the developing walk that
//! lists arc crossings of a path in the universal cover, and the strip
//! deformation calculus built on it.
//!
//! # Data model
//!
//! A *cell structure* is a system of pairwise disjoint complete geodesic
//! arcs cutting the surface into cells.  In the universal cover it is
//! stored by finite data:
//!
//! * one chosen lift (an oriented geodesic) per arc — the *edges*;
//! * one *tile* per cell, whose chosen lift is the region bounded by its
//!   *sides*; side `s` of tile `t` lies on the geodesic
//!   `s.place * lift(s.edge)`, and `anchor` is a point strictly inside the
//!   region;
//! * a *base* tile, whose copy at the identity seats the basepoint.
//!
//! Each edge is referenced by exactly two sides; the corresponding
//! *claims* `(tile, place^{-1})` are the two tile copies adjacent to the
//! representative lift, one on each side of it.
//!
//! # The exactness contract
//!
//! Every claim placement must be *exactly* the holonomy image of a deck
//! transformation (not merely an isometry mapping the lift correctly —
//! elements of the lift's stabilizer would corrupt transported strip
//! fields).  Constructors arrange this by building places from explicit
//! holonomy words; it is then an induction along the walk that every
//! crossing's placement `g` is exactly the holonomy element carrying the
//! stored lift to the crossed geodesic, which is what makes the integrated
//! cocycle values exact.  `validate` checks the structural half of the
//! contract numerically and confirms the global half by developing every
//! generator and demanding that the walk end at the correct deck
//! placement.

use crate::error::{Error, Result};
use crate::lorentz::{orthogonal_translation, HPoint, Isometry, MinkVec, OrientedGeodesic};
use crate::schottky::{Cocycle, Holonomy, SchottkyWitness};
use crate::words::FreeWord;
use nalgebra::{Matrix3, Vector3};

/// Index of an arc of the cell structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// Index of a cell of the cell structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileId(pub usize);

/// An arc, stored by one chosen lift.
#[derive(Debug, Clone)]
pub struct EdgeData {
    pub lift: OrientedGeodesic,
}

/// One side of a tile: the tile's region is bounded by
/// `place * lift(edge)`.
#[derive(Debug, Clone)]
pub struct Side {
    pub edge: EdgeId,
    pub place: Isometry,
}

/// One cell, as the region bounded by its sides, with an interior anchor
/// point.
#[derive(Debug, Clone)]
pub struct Tile {
    pub sides: Vec<Side>,
    pub anchor: HPoint,
}

/// A tile copy adjacent to an edge's representative lift.
#[derive(Debug, Clone, Copy)]
pub struct Claim {
    pub tile: TileId,
    pub place: Isometry,
}

/// One transversal crossing of a developed arc lift by a walked path.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub edge: EdgeId,
    /// The exact deck placement `g`: the crossed geodesic is
    /// `g * lift(edge)`.
    pub place: Isometry,
    /// `+1.0` when the path crosses from the negative to the positive side
    /// of the developed oriented lift, `-1.0` otherwise.
    pub sign: f64,
}

/// A cell structure (see module docs).
#[derive(Debug, Clone)]
pub struct CellStructure {
    edges: Vec<EdgeData>,
    tiles: Vec<Tile>,
    base: TileId,
}

/// Klein-chart coordinates of a point on the hyperboloid.
fn klein(p: &HPoint) -> (f64, f64) {
    let v = p.vec();
    (v.x1 / v.x3, v.x2 / v.x3)
}

/// A geodesic as a linear functional on the Klein disk: `f(k) = a.k - b`
/// has the sign of `<p, unit normal>` at the point over `k`.
#[derive(Debug, Clone, Copy)]
struct KleinLine {
    a1: f64,
    a2: f64,
    b: f64,
}

impl KleinLine {
    fn of(g: &OrientedGeodesic) -> KleinLine {
        let n = g.unit_normal();
        KleinLine {
            a1: n.x1,
            a2: n.x2,
            b: n.x3,
        }
    }

    fn eval(&self, k: (f64, f64)) -> f64 {
        self.a1 * k.0 + self.a2 * k.1 - self.b
    }
}

/// Walk failure that a retry with a perturbed basepoint may fix.
#[derive(Debug)]
enum WalkEnd {
    Done {
        tile: TileId,
        place: Isometry,
        crossings: Vec<Crossing>,
    },
    Degenerate(String),
}

impl CellStructure {
    pub fn new(edges: Vec<EdgeData>, tiles: Vec<Tile>, base: TileId) -> CellStructure {
        CellStructure { edges, tiles, base }
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn base(&self) -> TileId {
        self.base
    }

    pub fn lift(&self, e: EdgeId) -> &OrientedGeodesic {
        &self.edges[e.0].lift
    }

    /// The two tile copies adjacent to the representative lift of `e`.
    pub fn claims(&self, e: EdgeId) -> Result<[Claim; 2]> {
        let mut found = Vec::new();
        for (ti, tile) in self.tiles.iter().enumerate() {
            for side in &tile.sides {
                if side.edge == e {
                    found.push(Claim {
                        tile: TileId(ti),
                        place: side.place.inverse(),
                    });
                }
            }
        }
        match <[Claim; 2]>::try_from(found.as_slice()) {
            Ok(pair) => Ok(pair),
            Err(_) => Err(Error::InvalidInput(format!(
                "edge {} is referenced by {} sides, expected exactly 2",
                e.0,
                self.tiles
                    .iter()
                    .flat_map(|t| &t.sides)
                    .filter(|s| s.edge == e)
                    .count()
            ))),
        }
    }

    /// Structural and global validation (see the exactness contract in the
    /// module docs).
    pub fn validate(&self, hol: &Holonomy) -> Result<()> {
        if self.tiles.is_empty() || self.edges.is_empty() {
            return Err(Error::InvalidInput("cell structure is empty".into()));
        }
        if self.base.0 >= self.tiles.len() {
            return Err(Error::InvalidInput("base tile out of range".into()));
        }
        // Chosen lifts of distinct arcs are disjoint (arcs are disjoint on
        // the surface, so all lifts are pairwise disjoint).
        for i in 0..self.edges.len() {
            for j in (i + 1)..self.edges.len() {
                let c = self.edges[i]
                    .lift
                    .unit_normal()
                    .inner(&self.edges[j].lift.unit_normal());
                if c.abs() <= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "lifts of edges {i} and {j} are not disjoint"
                    )));
                }
            }
        }
        for (ti, tile) in self.tiles.iter().enumerate() {
            if tile.sides.is_empty() {
                return Err(Error::InvalidInput(format!("tile {ti} has no sides")));
            }
            for (si, side) in tile.sides.iter().enumerate() {
                if side.edge.0 >= self.edges.len() {
                    return Err(Error::InvalidInput(format!(
                        "tile {ti} side {si} references edge {} out of range",
                        side.edge.0
                    )));
                }
                if side.place.det_sign() < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "tile {ti} side {si} has an orientation-reversing placement"
                    )));
                }
                let geo = self.lift(side.edge).transform(&side.place);
                if geo.side_of(&tile.anchor).abs() < 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "tile {ti} anchor lies on its side {si}"
                    )));
                }
            }
        }
        // Every edge: exactly two claims, on opposite sides of the lift.
        for e in 0..self.edges.len() {
            let [c1, c2] = self.claims(EdgeId(e))?;
            let lift = &self.edges[e].lift;
            let s1 = lift.side_of(&c1.place.act(&self.tiles[c1.tile.0].anchor));
            let s2 = lift.side_of(&c2.place.act(&self.tiles[c2.tile.0].anchor));
            if s1.abs() < 1e-9 || s2.abs() < 1e-9 || s1 * s2 >= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "claims of edge {e} do not sit on opposite sides of its lift \
                     (side values {s1:.3e}, {s2:.3e})"
                )));
            }
            if c1.tile == c2.tile && c1.place.approx_eq(&c2.place) {
                return Err(Error::InvalidInput(format!(
                    "claims of edge {e} are indistinguishable"
                )));
            }
        }
        // Global check: developing each generator's path must end at its
        // exact deck placement.
        for i in 1..=hol.rank() {
            let g = hol.letter_image(i as i32);
            self.develop_element(&g).map_err(|err| {
                Error::InvalidInput(format!(
                    "developing generator {i} failed the exactness contract: {err}"
                ))
            })?;
        }
        Ok(())
    }

    /// One walk attempt from the copy `(start_tile, start_place)` (which
    /// must contain the point over `from`) along the segment toward the
    /// point over `to` (both raw future-timelike vectors).
    ///
    /// Every step works in the *local frame* of the current tile: the
    /// segment endpoints are pulled back through the inverse placement, so
    /// all geodesic data stays moderate no matter how far the walk has
    /// travelled.  (Developing the tile forward instead would wash out the
    /// crossing parameters exponentially.)  The affine chord parameter is
    /// not preserved between frames, but its order is, so each step only
    /// compares roots computed within one frame, using the entered side as
    /// the lower bound.
    fn walk(
        &self,
        start_tile: TileId,
        start_place: Isometry,
        from: &MinkVec,
        to: &MinkVec,
    ) -> Result<WalkEnd> {
        let mut tile = start_tile;
        let mut place = start_place;
        let mut entered: Option<usize> = None;
        let mut crossings = Vec::new();
        // Segment endpoints pulled back to the current local frame.  These
        // are updated *incrementally* with one moderate structural step per
        // crossing: pulling the far endpoint back through the whole
        // accumulated placement in one go would cancel catastrophically
        // (huge intermediates, moderate result), while stepwise pullback
        // only ever cancels by a bounded per-tile factor.
        let start_inv = start_place.inverse();
        let mut v0 = start_inv.adjoint(from);
        let mut v1 = start_inv.adjoint(to);
        const MAX_STEPS: usize = 100_000;
        for _ in 0..MAX_STEPS {
            let t = &self.tiles[tile.0];
            if v0.x3 <= 0.0 || v1.x3 <= 0.0 {
                return Err(Error::Numerical(
                    "walk lost the future sheet while pulling back".into(),
                ));
            }
            let q0 = (v0.x1 / v0.x3, v0.x2 / v0.x3);
            let q1 = (v1.x1 / v1.x3, v1.x2 / v1.x3);
            let anchor_k = klein(&t.anchor);
            // Side functionals in the local frame.
            let lines: Vec<(KleinLine, f64)> = t
                .sides
                .iter()
                .map(|side| {
                    let geo = self.lift(side.edge).transform(&side.place);
                    let line = KleinLine::of(&geo);
                    let sigma = line.eval(anchor_k).signum();
                    (line, sigma)
                })
                .collect();
            let floor = match entered {
                Some(si) => {
                    let (line, _) = lines[si];
                    let f0 = line.eval(q0);
                    let f1 = line.eval(q1);
                    f0 / (f0 - f1)
                }
                None => 0.0,
            };
            let mut best: Option<(f64, usize)> = None;
            let mut second: f64 = f64::INFINITY;
            let mut end_clearance = f64::INFINITY;
            for si in 0..t.sides.len() {
                let (line, sigma) = lines[si];
                let f0 = line.eval(q0);
                let f1 = line.eval(q1);
                end_clearance = end_clearance.min(sigma * f1);
                if entered == Some(si) {
                    continue; // just came through here
                }
                let df = f1 - f0;
                if sigma * df >= 0.0 {
                    continue; // not heading out through this side
                }
                let root = -f0 / df;
                if root <= floor + 1e-13 {
                    continue;
                }
                match best {
                    None => best = Some((root, si)),
                    Some((r, _)) if root < r => {
                        second = r;
                        best = Some((root, si));
                    }
                    Some(_) => second = second.min(root),
                }
            }
            match best {
                Some((root, si)) if root < 1.0 => {
                    if (second - root).abs() < 1e-11 {
                        return Ok(WalkEnd::Degenerate(format!(
                            "two side crossings at nearly equal parameter {root}"
                        )));
                    }
                    let side = &t.sides[si];
                    let sigma = lines[si].1;
                    let cross_place = place.compose(&side.place);
                    crossings.push(Crossing {
                        edge: side.edge,
                        place: cross_place,
                        sign: -sigma,
                    });
                    // Move into the claim on the other side of the edge.
                    let [c1, c2] = self.claims(side.edge)?;
                    let this_place = side.place.inverse();
                    let c1_is_this = c1.tile == tile && c1.place.approx_eq(&this_place);
                    let c2_is_this = c2.tile == tile && c2.place.approx_eq(&this_place);
                    let other = match (c1_is_this, c2_is_this) {
                        (true, false) => c2,
                        (false, true) => c1,
                        _ => {
                            return Err(Error::InvalidInput(format!(
                                "cannot identify the crossed side among the claims of edge {}",
                                side.edge.0
                            )))
                        }
                    };
                    place = cross_place.compose(&other.place);
                    tile = other.tile;
                    let step_inv = side.place.compose(&other.place).inverse();
                    v0 = step_inv.adjoint(&v0);
                    v1 = step_inv.adjoint(&v1);
                    // The side of the new tile we entered through: the one
                    // whose placement inverts the claim we moved into.
                    let want = other.place.inverse();
                    entered = self.tiles[tile.0]
                        .sides
                        .iter()
                        .position(|s| s.edge == side.edge && s.place.approx_eq(&want));
                    if entered.is_none() {
                        return Err(Error::InvalidInput(format!(
                            "claim of edge {} does not correspond to a side of tile {}",
                            side.edge.0, tile.0
                        )));
                    }
                }
                _ => {
                    // No exit before the endpoint: the endpoint is in this
                    // copy.  Demand strict interiority so the final copy is
                    // unambiguous.
                    if end_clearance < 1e-13 {
                        return Ok(WalkEnd::Degenerate(format!(
                            "endpoint clearance {end_clearance:.3e} too small"
                        )));
                    }
                    return Ok(WalkEnd::Done {
                        tile,
                        place,
                        crossings,
                    });
                }
            }
        }
        Err(Error::Numerical(format!(
            "developing walk exceeded {MAX_STEPS} steps"
        )))
    }

    /// Interior points of the base tile used as walk basepoints: the anchor
    /// first, then a fixed sequence of small perturbations.
    fn basepoints(&self) -> Vec<HPoint> {
        let anchor = self.tiles[self.base.0].anchor;
        let mut pts = vec![anchor];
        let golden = 2.399963229728653_f64;
        for k in 1..10 {
            let eps = 2e-4 * k as f64;
            let ang = golden * k as f64;
            let v = anchor.vec()
                + MinkVec::new(eps * ang.cos(), eps * ang.sin(), 0.0);
            if let Ok(p) = HPoint::from_timelike(&v) {
                if self.contains_in_tile(self.base, &p) {
                    pts.push(p);
                }
            }
        }
        pts
    }

    fn contains_in_tile(&self, t: TileId, p: &HPoint) -> bool {
        let tile = &self.tiles[t.0];
        tile.sides.iter().all(|side| {
            let geo = self.lift(side.edge).transform(&side.place);
            let sa = geo.side_of(&tile.anchor);
            let sp = geo.side_of(p);
            sa * sp > 0.0 && sp.abs() > 1e-12
        })
    }

    /// Crossings of a path from the basepoint to `g * basepoint`, where the
    /// basepoint sits in the base tile's identity copy.  Errors unless the
    /// walk ends in the base tile with placement exactly `g` (projectively)
    /// — the global exactness check.
    pub fn develop_element(&self, g: &Isometry) -> Result<Vec<Crossing>> {
        let mut last = String::from("no attempt");
        for x in self.basepoints() {
            let y = g.adjoint(&x.vec());
            match self.walk(self.base, Isometry::identity(), &x.vec(), &y)? {
                WalkEnd::Done {
                    tile,
                    place,
                    crossings,
                } => {
                    let scale = 1.0
                        + place.matrix().abs().max().max(g.matrix().abs().max());
                    if tile != self.base || place.proj_dist(g) > 1e-9 * scale {
                        return Err(Error::InvalidInput(format!(
                            "walk for a deck element ended at tile {} with relative \
                             placement error {:.3e}",
                            tile.0,
                            place.proj_dist(g) / scale
                        )));
                    }
                    return Ok(crossings);
                }
                WalkEnd::Degenerate(msg) => last = msg,
            }
        }
        Err(Error::Numerical(format!(
            "developing walk stayed degenerate under all basepoint perturbations: {last}"
        )))
    }

    /// Crossings of the broken path from the basepoint through the partial
    /// images `w[..k] * basepoint`.  Each leg is the (geometrically walked)
    /// single-letter crossing list transported by the exact prefix product,
    /// so the result is built entirely from well-conditioned short walks and
    /// stable matrix products — a single long geodesic walk would have to
    /// resolve doubly-exponentially thin data and loses the endpoint to
    /// rounding noise.  Signed sums and ordered motion products over this
    /// list agree with those over the straight segment's list because the
    /// two paths are homotopic with endpoints clear of the arcs.
    pub fn develop_word(&self, hol: &Holonomy, w: &FreeWord) -> Result<Vec<Crossing>> {
        let mut cache: Vec<Option<Vec<Crossing>>> = vec![None; 2 * hol.rank()];
        let mut out = Vec::new();
        let mut prefix = Isometry::identity();
        for &letter in w.letters() {
            let slot = if letter > 0 {
                2 * (letter as usize - 1)
            } else {
                2 * ((-letter) as usize - 1) + 1
            };
            if cache[slot].is_none() {
                let g = hol.eval(&FreeWord::generator(letter));
                cache[slot] = Some(self.develop_element(&g)?);
            }
            for c in cache[slot].as_ref().unwrap() {
                out.push(Crossing {
                    edge: c.edge,
                    place: prefix.compose(&c.place),
                    sign: c.sign,
                });
            }
            prefix = prefix.compose(&hol.eval(&FreeWord::generator(letter)));
        }
        Ok(out)
    }

    /// Locate the copy containing `q`: returns `(tile, place, crossings)`
    /// for a walk from the basepoint to `q`.
    pub fn develop_to_point(&self, q: &HPoint) -> Result<(TileId, Isometry, Vec<Crossing>)> {
        let mut last = String::from("no attempt");
        for x in self.basepoints() {
            match self.walk(self.base, Isometry::identity(), &x.vec(), &q.vec())? {
                WalkEnd::Done {
                    tile,
                    place,
                    crossings,
                } => return Ok((tile, place, crossings)),
                WalkEnd::Degenerate(msg) => last = msg,
            }
        }
        Err(Error::Numerical(format!(
            "locating walk stayed degenerate under all basepoint perturbations: {last}"
        )))
    }

    /// Crossings of the geodesic segment `[p, q]` (which must have
    /// endpoints clear of all developed arcs).
    pub fn develop_between(&self, p: &HPoint, q: &HPoint) -> Result<Vec<Crossing>> {
        let (tile, place, _) = self.develop_to_point(p)?;
        match self.walk(tile, place, &p.vec(), &q.vec())? {
            WalkEnd::Done { crossings, .. } => Ok(crossings),
            WalkEnd::Degenerate(msg) => Err(Error::Numerical(format!(
                "segment walk degenerate: {msg}"
            ))),
        }
    }

    /// The standard one-cell structure of a ping-pong witness: one tile (the
    /// common fundamental region) whose `2r` sides are the source walls and
    /// their generator images; arc `i` is the source wall of generator `i`,
    /// oriented away from the region.
    pub fn schottky_standard(witness: &SchottkyWitness, hol: &Holonomy) -> Result<CellStructure> {
        if witness.pairs.len() != hol.rank() {
            return Err(Error::InvalidInput(
                "witness rank does not match holonomy rank".into(),
            ));
        }
        witness.validate(hol)?;
        let edges: Vec<EdgeData> = witness
            .pairs
            .iter()
            .map(|p| EdgeData { lift: p.source })
            .collect();
        let mut sides = Vec::new();
        let mut constraints = Vec::new();
        for (i, pair) in witness.pairs.iter().enumerate() {
            sides.push(Side {
                edge: EdgeId(i),
                place: Isometry::identity(),
            });
            sides.push(Side {
                edge: EdgeId(i),
                place: hol.generators()[i],
            });
            constraints.push((pair.source, -1.0));
            constraints.push((pair.target, -1.0));
        }
        let anchor = interior_point(&constraints)?;
        let cells = CellStructure::new(
            edges,
            vec![Tile { sides, anchor }],
            TileId(0),
        );
        cells.validate(hol)?;
        Ok(cells)
    }
}

/// A point strictly inside the intersection of half-planes
/// `{ sign * <p, unit normal> > 0 }`, computed as the Chebyshev center in
/// the Klein chart (the point of maximal linear margin), found exactly by
/// enumerating active constraint triples of the tiny linear program.
pub fn interior_point(constraints: &[(OrientedGeodesic, f64)]) -> Result<HPoint> {
    // Rows alpha . k + c * s <= beta.
    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
    for (g, sign) in constraints {
        let n = g.unit_normal();
        let c = (n.x1 * n.x1 + n.x2 * n.x2).sqrt();
        rows.push((-sign * n.x1, -sign * n.x2, c, -sign * n.x3));
    }
    // Octagon cage keeping the candidate well inside the Klein disk.
    const R: f64 = 0.985;
    for j in 0..8 {
        let a = std::f64::consts::FRAC_PI_4 * j as f64;
        rows.push((a.cos(), a.sin(), 1.0, R));
    }
    let mut best: Option<(f64, f64, f64)> = None; // (s, k1, k2)
    let n = rows.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for l in (j + 1)..n {
                let m = Matrix3::new(
                    rows[i].0, rows[i].1, rows[i].2, rows[j].0, rows[j].1, rows[j].2,
                    rows[l].0, rows[l].1, rows[l].2,
                );
                let rhs = Vector3::new(rows[i].3, rows[j].3, rows[l].3);
                let Some(sol) = m.lu().solve(&rhs) else {
                    continue;
                };
                let (k1, k2, s) = (sol[0], sol[1], sol[2]);
                if !s.is_finite() || s <= 0.0 {
                    continue;
                }
                let feasible = rows
                    .iter()
                    .all(|r| r.0 * k1 + r.1 * k2 + r.2 * s <= r.3 + 1e-9);
                if feasible && best.map_or(true, |b| s > b.0) {
                    best = Some((s, k1, k2));
                }
            }
        }
    }
    let (s, k1, k2) = best.ok_or_else(|| {
        Error::Numerical("interior_point: no feasible point with positive margin".into())
    })?;
    if s < 1e-6 {
        return Err(Error::Numerical(format!(
            "interior_point: margin {s:.3e} too small"
        )));
    }
    HPoint::from_timelike(&MinkVec::new(k1, k2, 1.0))
}

/// The strip datum of one arc: the waist point (on the representative
/// lift) where the strip is thinnest, and the width there.
#[derive(Debug, Clone, Copy)]
pub struct Strip {
    pub waist: HPoint,
    pub width: f64,
}

/// One strip per arc of a cell structure.  The generating Killing field of
/// edge `e` is the orthogonal translation of the lift at the waist, with
/// speed `width`, toward the lift's positive side.
#[derive(Debug, Clone)]
pub struct StripSystem {
    strips: Vec<Strip>,
    psi: Vec<MinkVec>,
}

impl StripSystem {
    pub fn new(cells: &CellStructure, strips: Vec<Strip>) -> Result<StripSystem> {
        if strips.len() != cells.edges().len() {
            return Err(Error::InvalidInput(format!(
                "{} strips for {} edges",
                strips.len(),
                cells.edges().len()
            )));
        }
        let mut psi = Vec::with_capacity(strips.len());
        for (i, strip) in strips.iter().enumerate() {
            let lift = cells.lift(EdgeId(i));
            let v = orthogonal_translation(lift, &strip.waist, strip.width).map_err(|_| {
                Error::InvalidInput(format!("waist of strip {i} is not on its arc's lift"))
            })?;
            psi.push(v);
        }
        Ok(StripSystem { strips, psi })
    }

    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    pub fn strip(&self, e: EdgeId) -> &Strip {
        &self.strips[e.0]
    }

    pub fn psi(&self, e: EdgeId) -> MinkVec {
        self.psi[e.0]
    }

    /// Same waists, widths scaled by `s`.
    pub fn scaled(&self, cells: &CellStructure, s: f64) -> StripSystem {
        let strips = self
            .strips
            .iter()
            .map(|st| Strip {
                waist: st.waist,
                width: st.width * s,
            })
            .collect();
        StripSystem::new(cells, strips).expect("scaling preserves validity")
    }
}

/// Sum of transported strip fields over a crossing list:
/// `sum sign * Ad(place) psi(edge)` — the integrated cocycle value of the
/// walked path.
pub fn integrate_crossings(crossings: &[Crossing], strips: &StripSystem) -> MinkVec {
    crossings.iter().fold(MinkVec::ZERO, |acc, c| {
        acc + c.place.adjoint(&strips.psi(c.edge)) * c.sign
    })
}

/// Ordered product of strip motions over a crossing list (first crossing
/// leftmost): `prod exp(sign * t * Ad(place) psi(edge))`.  Each factor is
/// evaluated as the conjugate `place exp(sign t psi) place^{-1}` — the
/// same isometry, but the exponential acts on the structural strip field,
/// so nothing depends on the fragile norm of a transported field.
pub fn crossing_motion(crossings: &[Crossing], strips: &StripSystem, t: f64) -> Isometry {
    crossings.iter().fold(Isometry::identity(), |acc, c| {
        let local = Isometry::exp_killing(&(strips.psi(c.edge) * (c.sign * t)));
        acc.compose(&c.place.compose(&local).compose(&c.place.inverse()))
    })
}

/// The infinitesimal strip deformation as a cocycle on the holonomy group,
/// determined by integrating the generators' paths.
pub fn strip_cocycle(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
) -> Result<Cocycle> {
    let mut values = Vec::with_capacity(hol.rank());
    for i in 1..=hol.rank() {
        let crossings = cells.develop_element(&hol.letter_image(i as i32))?;
        values.push(integrate_crossings(&crossings, strips));
    }
    Ok(Cocycle::new(values))
}

/// The macroscopic strip deformation at time `t` of a single element: the
/// ordered product of strip motions along its path, times the original
/// image.  At `t = 0` this is the original holonomy; its `t`-derivative at
/// `0` is the strip cocycle times the holonomy.
pub fn macroscopic_deform(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
    t: f64,
    w: &crate::words::FreeWord,
) -> Result<Isometry> {
    // Alternating product `m_1 rho(l_1) m_2 rho(l_2) ... m_n rho(l_n)`,
    // where `m_j` is the motion of the j-th letter's own leg in that
    // letter's frame.  Conjugating each leg by its global prefix gives the
    // same element on paper, but a conjugate `P E P^{-1}` loses everything
    // to cancellation once `P` is a long product; here every factor stays
    // moderate, and cancellation under word reduction telescopes exactly.
    let mut cache: Vec<Option<Isometry>> = vec![None; 2 * hol.rank()];
    let mut f = Isometry::identity();
    for &letter in w.letters() {
        let slot = if letter > 0 {
            2 * (letter as usize - 1)
        } else {
            2 * ((-letter) as usize - 1) + 1
        };
        if cache[slot].is_none() {
            let leg = cells.develop_element(&hol.letter_image(letter))?;
            cache[slot] = Some(crossing_motion(&leg, strips, t));
        }
        f = f
            .compose(cache[slot].as_ref().unwrap())
            .compose(&hol.letter_image(letter));
    }
    Ok(f)
}

/// The deformed holonomy at time `t`: generator images under
/// [`macroscopic_deform`].
pub fn deformed_holonomy(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
    t: f64,
) -> Result<Holonomy> {
    let mut gens = Vec::with_capacity(hol.rank());
    for i in 1..=hol.rank() {
        let g = hol.letter_image(i as i32);
        let crossings = cells.develop_element(&g)?;
        gens.push(crossing_motion(&crossings, strips, t).compose(&g));
    }
    Ok(Holonomy::new(gens))
}

/// Independent evaluation of the length derivative by the crossing sum: the
/// closed geodesic of `w` crosses finitely many strips per period, and each
/// transversal crossing at angle `theta`, at distance `d` along the arc
/// from the strip's waist, contributes `width * cosh(d) * sin(theta)` —
/// all terms positive.
pub fn dlength_crossing_sum(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
    w: &crate::words::FreeWord,
) -> Result<f64> {
    let g = hol.eval(w);
    if !g.is_hyperbolic() {
        return Err(Error::CausalType(
            "crossing sum needs a hyperbolic element".into(),
        ));
    }
    let axis = g.axis()?;
    let mut last = Error::Numerical("no attempt".into());
    for k in 0..10 {
        let s0 = 0.37 + 0.11 * k as f64;
        let p = axis.point_param(s0);
        let q = g.act(&p);
        match cells.develop_between(&p, &q) {
            Ok(crossings) => {
                let mut total = 0.0;
                for c in &crossings {
                    // Work in the crossing's local frame: pull the axis back
                    // to the representative lift instead of pushing the lift
                    // out to the axis.  Only the normal direction is pulled
                    // back — it is spacelike and renormalizable, while
                    // transported boundary data of a distant axis loses its
                    // lightlike normalization to rounding.
                    let n_raw = c.place.inverse().adjoint(&axis.unit_normal());
                    let local_axis = OrientedGeodesic::from_normal(&n_raw)?;
                    let lift = cells.lift(c.edge);
                    let Some(x) = lift.intersection(&local_axis) else {
                        return Err(Error::Numerical(
                            "crossed arc does not meet the axis transversally".into(),
                        ));
                    };
                    let cosang = lift.unit_normal().inner(&local_axis.unit_normal());
                    let sin_theta = (1.0 - cosang * cosang).max(0.0).sqrt();
                    let waist = strips.strip(c.edge).waist;
                    total += strips.strip(c.edge).width * x.dist(&waist).cosh() * sin_theta;
                }
                return Ok(total);
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Whether a subset of arcs fills the surface: cutting along the selected
/// arcs must leave simply connected pieces.  Pieces are components of the
/// multigraph with tiles as nodes and *unselected* edges as links; a piece
/// is a disk exactly when its component is a tree (self-loops and repeated
/// links count as cycles).  An empty selection never fills.
pub fn fills_surface(cells: &CellStructure, selected: &[EdgeId]) -> Result<bool> {
    let mut is_selected = vec![false; cells.edges().len()];
    for e in selected {
        if e.0 >= cells.edges().len() {
            return Err(Error::InvalidInput(format!("edge {} out of range", e.0)));
        }
        is_selected[e.0] = true;
    }
    if selected.is_empty() {
        return Ok(false);
    }
    // Union-find; any link joining an already-connected pair is a cycle.
    let mut parent: Vec<usize> = (0..cells.tiles().len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in 0..cells.edges().len() {
        if is_selected[e] {
            continue;
        }
        let [c1, c2] = cells.claims(EdgeId(e))?;
        let a = find(&mut parent, c1.tile.0);
        let b = find(&mut parent, c2.tile.0);
        if a == b {
            return Ok(false);
        }
        parent[a] = b;
    }
    Ok(true)
}
