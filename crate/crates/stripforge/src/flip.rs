//! Diagonal exchanges on triangulated cell structures and the linear
//! relation they induce between strip cocycles.
//!
//! Two triangulations that differ by exchanging the diagonal of a
//! quadrilateral carry strip deformations satisfying exactly one linear
//! relation.  This module implements the move itself ([`flip`]), extracts
//! the relation numerically from the kernel of a stacked period matrix
//! ([`flip_relation`]), and provides the quadrilateral machinery around
//! it: a normalized corner configuration ([`QuadConfig`]), the
//! distinguished strips for which the relation has unit coefficients
//! ([`special_config`]), the three-parameter family of deformations
//! attached to vectors of the ambient space ([`phi_w`]), the center point
//! whose family reproduces the distinguished motions ([`locate_w0`]), and
//! the negativity check for the coefficient sum when every waist is the
//! projection of one common point ([`salience_check`]).

use crate::cells::{
    interior_point, strip_cocycle, CellStructure, EdgeData, EdgeId, Side, Strip, StripSystem,
    Tile,
};
use crate::error::{Error, Result};
use crate::lorentz::{
    classify_killing, HPoint, Isometry, KillingClass, MinkVec, OrientedGeodesic,
};
use crate::schottky::{Cocycle, Holonomy};
use crate::tol;
use nalgebra::{DMatrix, DVector};

/// Foot of the perpendicular dropped from `p` onto `g` — the point of the
/// geodesic closest to `p`.
pub fn foot(g: &OrientedGeodesic, p: &HPoint) -> HPoint {
    let n = g.unit_normal();
    let v = p.vec() - n * p.vec().inner(&n);
    HPoint::from_timelike(&v).expect("removing a spacelike component keeps a point timelike")
}

/// One developed outer side of the quadrilateral formed by the two tiles
/// adjacent to a flipped edge.
struct OuterSide {
    edge: EdgeId,
    place: Isometry,
    geo: OrientedGeodesic,
    /// Which of the two claims (0 or 1) this side came from.
    from: usize,
}

/// Exchange the diagonal `e` of the quadrilateral formed by its two
/// adjacent cells.
///
/// Both cells adjacent to `e` must be distinct triangles.  They are
/// developed side by side across the representative lift of `e`; the far
/// corner of each developed triangle is the common perpendicular of its
/// two outer sides, and the new arc is the common perpendicular of the
/// two corners.  The result reuses the same edge and tile indices (only
/// edge `e`'s lift and the two adjacent tiles change) and is re-validated
/// against `hol` before being returned, so a configuration whose exchange
/// does not produce an embedded arc system fails loudly rather than
/// silently.
pub fn flip(cells: &CellStructure, e: EdgeId, hol: &Holonomy) -> Result<CellStructure> {
    if e.0 >= cells.edges().len() {
        return Err(Error::InvalidInput(format!("edge {} out of range", e.0)));
    }
    let claims = cells.claims(e)?;
    if claims[0].tile == claims[1].tile {
        return Err(Error::InvalidInput(
            "flipped arc must bound two distinct cells".into(),
        ));
    }
    let mut outer: Vec<OuterSide> = Vec::with_capacity(4);
    let mut dev_anchors: Vec<HPoint> = Vec::with_capacity(2);
    for (k, c) in claims.iter().enumerate() {
        let tile = &cells.tiles()[c.tile.0];
        if tile.sides.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "flip requires triangular cells, tile {} has {} sides",
                c.tile.0,
                tile.sides.len()
            )));
        }
        dev_anchors.push(c.place.act(&tile.anchor));
        for s in &tile.sides {
            if s.edge == e {
                continue;
            }
            let place = c.place.compose(&s.place);
            outer.push(OuterSide {
                edge: s.edge,
                place,
                geo: cells.lift(s.edge).transform(&place),
                from: k,
            });
        }
    }
    if outer.len() != 4 {
        return Err(Error::InvalidInput(
            "flipped arc occurs more than once on one cell".into(),
        ));
    }

    // Far corner of each developed triangle, then the new arc joining the
    // two corners.
    let corner0 = outer[0].geo.common_perpendicular(&outer[1].geo)?;
    let corner1 = outer[2].geo.common_perpendicular(&outer[3].geo)?;
    let new_lift = corner0.common_perpendicular(&corner1)?;

    // The new arc must separate the four outer sides two against two, one
    // from each old cell.
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, o) in outer.iter().enumerate() {
        if new_lift.side_of(&o.geo.point_param(0.0)) > 0.0 {
            plus.push(i);
        } else {
            minus.push(i);
        }
    }
    if plus.len() != 2 || outer[plus[0]].from == outer[plus[1]].from {
        return Err(Error::Numerical(
            "exchanged arc does not separate the outer sides pairwise".into(),
        ));
    }

    let mut edges = cells.edges().to_vec();
    edges[e.0] = EdgeData { lift: new_lift };
    let mut tiles = cells.tiles().to_vec();
    for (slot, group, lift_sign) in [
        (claims[0].tile, &plus, 1.0),
        (claims[1].tile, &minus, -1.0),
    ] {
        let mut sides = vec![Side {
            edge: e,
            place: Isometry::identity(),
        }];
        let mut constraints = vec![(new_lift, lift_sign)];
        for &i in group {
            let o = &outer[i];
            sides.push(Side {
                edge: o.edge,
                place: o.place,
            });
            // The new cell sits on the same side of this outer geodesic as
            // the old cell it came from.
            constraints.push((o.geo, o.geo.side_of(&dev_anchors[o.from]).signum()));
        }
        let anchor = interior_point(&constraints)?;
        tiles[slot.0] = Tile { sides, anchor };
    }
    // If the base cell was one of the two exchanged, reseat it on the new
    // cell covering the old base anchor's side of the new arc.
    let mut base = cells.base();
    if base == claims[0].tile || base == claims[1].tile {
        let k = usize::from(base == claims[1].tile);
        base = if new_lift.side_of(&dev_anchors[k]) > 0.0 {
            claims[0].tile
        } else {
            claims[1].tile
        };
    }
    let out = CellStructure::new(edges, tiles, base);
    out.validate(hol)?;
    Ok(out)
}

/// The cocycle of a single arc's strip: all other widths are zeroed, so
/// the result is the deformation contributed by `e` alone.
pub fn arc_cocycle(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
    e: EdgeId,
) -> Result<Cocycle> {
    let only: Vec<Strip> = strips
        .strips()
        .iter()
        .enumerate()
        .map(|(i, s)| Strip {
            waist: s.waist,
            width: if i == e.0 { s.width } else { 0.0 },
        })
        .collect();
    strip_cocycle(cells, hol, &StripSystem::new(cells, only)?)
}

/// Stack the generator values of a cocycle into a column vector.
fn stack(u: &Cocycle) -> DVector<f64> {
    let vals = u.generator_values();
    let mut col = DVector::zeros(3 * vals.len());
    for (i, v) in vals.iter().enumerate() {
        col[3 * i] = v.x1;
        col[3 * i + 1] = v.x2;
        col[3 * i + 2] = v.x3;
    }
    col
}

/// Period matrix of a strip system: column `j` holds the stacked
/// generator values of the cocycle of arc `j` alone.
pub fn period_matrix(
    cells: &CellStructure,
    hol: &Holonomy,
    strips: &StripSystem,
) -> Result<DMatrix<f64>> {
    let r = hol.rank();
    let ne = cells.edges().len();
    let mut m = DMatrix::zeros(3 * r, ne);
    for j in 0..ne {
        let col = stack(&arc_cocycle(cells, hol, strips, EdgeId(j))?);
        m.set_column(j, &col);
    }
    Ok(m)
}

/// Ratio of the smallest to the largest singular value of `m`.
pub fn sigma_ratio(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

/// Singular values and the full set of right singular vectors of `m`.
/// Rectangular inputs with fewer rows than columns are padded with zero
/// rows first, because the thin decomposition would drop exactly the
/// kernel directions we are after.
fn full_vt(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let (r, c) = m.shape();
    let padded = if r < c {
        m.clone().insert_rows(r, c - r, 0.0)
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let sv = DVector::from_iterator(c, svd.singular_values.iter().cloned());
    (sv, svd.v_t.expect("v_t requested"))
}

/// The one-dimensional kernel of `m`.  Errors unless exactly one singular
/// value falls below the kernel threshold relative to the largest.
fn kernel_vector(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    let (sv, vt) = full_vt(m);
    let n = sv.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let max = sv[order[n - 1]];
    if max == 0.0 {
        return Err(Error::Numerical("period matrix is identically zero".into()));
    }
    if sv[order[0]] > tol::KERNEL_SVD * max {
        return Err(Error::Numerical(format!(
            "no kernel: smallest singular value ratio {:.3e}",
            sv[order[0]] / max
        )));
    }
    if n > 1 && sv[order[1]] <= tol::KERNEL_SVD * max {
        return Err(Error::Numerical(format!(
            "kernel dimension exceeds 1 (ratios {:.3e}, {:.3e})",
            sv[order[0]] / max,
            sv[order[1]] / max
        )));
    }
    Ok(DVector::from_iterator(
        n,
        vt.row(order[0]).iter().cloned(),
    ))
}

/// The unique linear relation between the strip cocycles of two
/// triangulations differing by one diagonal exchange, normalized so the
/// old diagonal's coefficient is 1.
#[derive(Debug, Clone)]
pub struct FlipRelation {
    /// Coefficient of the old diagonal's strip (always 1 by
    /// normalization).
    pub c_alpha: f64,
    /// Coefficient of the new diagonal's strip.
    pub c_alpha_prime: f64,
    /// Coefficient of every shared arc's strip, indexed by edge id.  The
    /// entry at the exchanged edge is 0: its two diagonals are reported
    /// separately above.
    pub c_other: Vec<f64>,
    /// Relative residual of the relation against the stacked period
    /// matrix.
    pub residual: f64,
}

/// Extract the relation between the strip cocycles of `cells` and of
/// `flipped` (same arcs except the diagonal exchanged at `e`).
///
/// `strips` carries a waist and a nonzero width for every arc of `cells`
/// (the entry at `e` is the old diagonal's strip); `new_strip` is the
/// strip of the new diagonal, with its waist on `flipped.lift(e)`.  When
/// a quadrilateral side wraps around and meets the diagonal twice on the
/// surface, its two contributions are integrated into the same cocycle
/// column, so the merged arc appears with a single composed coefficient.
///
/// The relation lives in the tangent space of the space of holonomies up
/// to conjugation: concretely, the strip columns are stacked together
/// with the three derivative columns of conjugation (`v − Ad_g v` on each
/// generator), and the combined matrix must have a one-dimensional
/// kernel.  The conjugation part of the kernel is discarded; it absorbs
/// the dependence of the raw integrated cocycles on the choice of base
/// cell.
pub fn flip_relation(
    cells: &CellStructure,
    flipped: &CellStructure,
    e: EdgeId,
    hol: &Holonomy,
    strips: &StripSystem,
    new_strip: &Strip,
) -> Result<FlipRelation> {
    let ne = cells.edges().len();
    if flipped.edges().len() != ne {
        return Err(Error::InvalidInput(
            "the two cell structures do not share their arc set".into(),
        ));
    }
    let flipped_strips = {
        let mut v = strips.strips().to_vec();
        v[e.0] = *new_strip;
        StripSystem::new(flipped, v)?
    };
    let r = hol.rank();
    let mut m = DMatrix::zeros(3 * r, ne + 4);
    m.set_column(0, &stack(&arc_cocycle(cells, hol, strips, e)?));
    m.set_column(1, &stack(&arc_cocycle(flipped, hol, &flipped_strips, e)?));
    let mut shared = Vec::with_capacity(ne - 1);
    for j in 0..ne {
        if j == e.0 {
            continue;
        }
        shared.push(j);
        let col = stack(&arc_cocycle(cells, hol, strips, EdgeId(j))?);
        m.set_column(1 + shared.len(), &col);
    }
    // Trivial directions: the derivative of conjugating the holonomy is
    // the cocycle g -> v - Ad_g v.
    let basis = [
        MinkVec::new(1.0, 0.0, 0.0),
        MinkVec::new(0.0, 1.0, 0.0),
        MinkVec::new(0.0, 0.0, 1.0),
    ];
    for (b, v) in basis.iter().enumerate() {
        let vals: Vec<MinkVec> = (1..=r)
            .map(|i| *v - hol.letter_image(i as i32).adjoint(v))
            .collect();
        m.set_column(ne + 1 + b, &stack(&Cocycle::new(vals)));
    }
    let k = kernel_vector(&m)?;
    let scale = k.iter().cloned().fold(0.0f64, |a, x| a.max(x.abs()));
    if k[0].abs() < 1e-6 * scale {
        return Err(Error::Numerical(
            "relation does not involve the exchanged diagonal".into(),
        ));
    }
    let k = &k / k[0];
    let sv_max = m.clone().svd(false, false).singular_values.max();
    let residual = (&m * &k).norm() / (sv_max * k.norm());
    let mut c_other = vec![0.0; ne];
    for (pos, &j) in shared.iter().enumerate() {
        c_other[j] = k[2 + pos];
    }
    Ok(FlipRelation {
        c_alpha: 1.0,
        c_alpha_prime: k[1],
        c_other,
        residual,
    })
}

/// A hyperideal quadrilateral recorded by four spacelike corner vectors
/// in cyclic order.  Side `i` is the geodesic of `span(v[i], v[i+1])`;
/// the diagonals span `(v[0], v[2])` and `(v[1], v[3])`.  After
/// [`QuadConfig::normalize`], the corners satisfy `v0 + v2 = v1 + v3`,
/// which pins each corner's scale up to one global factor (fixed by
/// making `v0` a unit vector).
#[derive(Debug, Clone)]
pub struct QuadConfig {
    v: [MinkVec; 4],
}

impl QuadConfig {
    /// Rescale the four corners by positive scalars so that
    /// `v0 + v2 = v1 + v3`, then scale globally so `v0` is unit.
    ///
    /// Errors when the corners admit no positive rescaling (the cyclic
    /// order is not convex) or some required span is not timelike.
    pub fn normalize(raw: &[MinkVec; 4]) -> Result<QuadConfig> {
        let mut m = DMatrix::zeros(3, 4);
        for (j, v) in raw.iter().enumerate() {
            let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
            m[(0, j)] = sgn * v.x1;
            m[(1, j)] = sgn * v.x2;
            m[(2, j)] = sgn * v.x3;
        }
        let k = kernel_vector(&m).map_err(|e| {
            Error::InvalidInput(format!("degenerate corner configuration: {e}"))
        })?;
        let smallest = k.iter().cloned().fold(f64::INFINITY, |a, x| a.min(x.abs()));
        if smallest < 1e-9 * k.norm() {
            return Err(Error::InvalidInput(
                "corner configuration has a vanishing rescaling factor".into(),
            ));
        }
        let flip_sign = if k[0] < 0.0 { -1.0 } else { 1.0 };
        if k.iter().any(|x| x * flip_sign <= 0.0) {
            return Err(Error::InvalidInput(
                "corners admit no positive rescaling (cyclic order is not convex)".into(),
            ));
        }
        let mut v = [MinkVec::ZERO; 4];
        for i in 0..4 {
            v[i] = raw[i] * (k[i] * flip_sign);
        }
        let ns = v[0].norm_sq();
        if ns <= 0.0 {
            return Err(Error::CausalType("corner vectors must be spacelike".into()));
        }
        let global = 1.0 / ns.sqrt();
        for vi in &mut v {
            *vi = *vi * global;
        }
        let q = QuadConfig { v };
        // Construction sanity: the two diagonal sums agree to machine
        // accuracy after the rescaling.
        let resid = (q.v[0] + q.v[2] - q.v[1] - q.v[3]).euclid_norm_sq().sqrt();
        let scale = q.v.iter().map(|v| v.euclid_norm_sq().sqrt()).fold(0.0, f64::max);
        if resid > 1e-12 * scale {
            return Err(Error::Numerical(format!(
                "corner rescaling residual {resid:.3e} exceeds tolerance"
            )));
        }
        // All sides and diagonals must exist as geodesics.
        for i in 0..4 {
            q.side_lift(i)?;
        }
        q.diagonal_lift()?;
        q.cross_diagonal_lift()?;
        Ok(q)
    }

    /// The normalized corner vectors.
    pub fn corners(&self) -> &[MinkVec; 4] {
        &self.v
    }

    /// Geodesic of side `i` (through the corner directions `v[i]` and
    /// `v[i+1]`).
    pub fn side_lift(&self, i: usize) -> Result<OrientedGeodesic> {
        OrientedGeodesic::from_normal(&self.v[i % 4].wedge(&self.v[(i + 1) % 4]))
    }

    /// Geodesic of the diagonal through `v[0]` and `v[2]`.
    pub fn diagonal_lift(&self) -> Result<OrientedGeodesic> {
        OrientedGeodesic::from_normal(&self.v[0].wedge(&self.v[2]))
    }

    /// Geodesic of the opposite diagonal, through `v[1]` and `v[3]`.
    pub fn cross_diagonal_lift(&self) -> Result<OrientedGeodesic> {
        OrientedGeodesic::from_normal(&self.v[1].wedge(&self.v[3]))
    }

    /// The distinguished motion of tile `i` (the region of the
    /// quadrilateral between side `i` and the diagonals): `v[i+1] - v[i]`.
    pub fn tile_motion(&self, i: usize) -> MinkVec {
        self.v[(i + 1) % 4] - self.v[i % 4]
    }
}

/// Strip data realizing the zero deformation on a normalized
/// quadrilateral: each side's strip translates by `v[i+1] - v[i]`, each
/// diagonal's by `v[i+2] - v[i]`; waists sit where each translation axis
/// crosses its arc, and widths are the translation speeds.
#[derive(Debug, Clone)]
pub struct SpecialStrips {
    /// Strip for the diagonal through `v[0]`, `v[2]`.
    pub alpha: Strip,
    /// Strip for the diagonal through `v[1]`, `v[3]`.
    pub alpha_prime: Strip,
    /// Strips for the four sides.
    pub beta: [Strip; 4],
    /// The tile motions `v[i+1] - v[i]`.
    pub phi: [MinkVec; 4],
}

/// Waist and width of the translation `psi` on the arc `lift`: the waist
/// is the intersection of the translation axis with the arc, the width is
/// the translation speed.
fn strip_of_translation(lift: &OrientedGeodesic, psi: &MinkVec) -> Result<Strip> {
    if !matches!(classify_killing(psi), KillingClass::Hyperbolic { .. }) {
        return Err(Error::CausalType(
            "strip value is not a spacelike translation (corners out of order?)".into(),
        ));
    }
    let axis = OrientedGeodesic::from_normal(psi)?;
    let waist = lift.intersection(&axis).ok_or_else(|| {
        Error::Numerical("translation axis misses its arc".into())
    })?;
    Ok(Strip {
        waist,
        width: psi.norm_sq().sqrt(),
    })
}

/// The distinguished strips of a normalized quadrilateral, whose
/// alternating sum of cocycles vanishes identically: diagonals enter with
/// coefficient +1 and sides with coefficient −1.
pub fn special_config(q: &QuadConfig) -> Result<SpecialStrips> {
    let phi = [
        q.tile_motion(0),
        q.tile_motion(1),
        q.tile_motion(2),
        q.tile_motion(3),
    ];
    let mut beta_vec = Vec::with_capacity(4);
    for i in 0..4 {
        beta_vec.push(strip_of_translation(&q.side_lift(i)?, &phi[i])?);
    }
    let beta: [Strip; 4] = [beta_vec[0], beta_vec[1], beta_vec[2], beta_vec[3]];
    let alpha = strip_of_translation(&q.diagonal_lift()?, &(q.v[2] - q.v[0]))?;
    let alpha_prime = strip_of_translation(&q.cross_diagonal_lift()?, &(q.v[3] - q.v[1]))?;
    Ok(SpecialStrips {
        alpha,
        alpha_prime,
        beta,
        phi,
    })
}

/// The three-parameter family of tile motions attached to a vector `w`:
/// tile `i` moves by `w ∧ (v[i] ∧ v[i+1])`.  Linear and injective in `w`;
/// the induced edge values all lie in their edges' planes, and for
/// timelike `w` they are spacelike with waists at the orthogonal
/// projections of the point of the hyperboloid over `w`.
pub fn phi_w(q: &QuadConfig, w: &MinkVec) -> [MinkVec; 4] {
    std::array::from_fn(|i| w.wedge(&q.v[i].wedge(&q.v[(i + 1) % 4])))
}

/// The center of a normalized quadrilateral: the intersection of the
/// common perpendicular of sides 0 and 2 with that of sides 1 and 3.
/// The pointwise family of this center reproduces the distinguished tile
/// motions `v[i+1] - v[i]` up to one common scale.
pub fn locate_w0(q: &QuadConfig) -> Result<HPoint> {
    let p02 = q.side_lift(0)?.common_perpendicular(&q.side_lift(2)?)?;
    let p13 = q.side_lift(1)?.common_perpendicular(&q.side_lift(3)?)?;
    p02.intersection(&p13).ok_or_else(|| {
        Error::Numerical("side perpendiculars of the quadrilateral do not meet".into())
    })
}

/// Salience data of a flip at a common projection point: the relation
/// coefficients for unit widths and waists projected from `p`, their sum,
/// and the parallelogram geometry predicting it.
#[derive(Debug, Clone)]
pub struct Salience {
    /// Relation coefficient of the old diagonal (normalized to 1).
    pub c_alpha: f64,
    /// Relation coefficient of the new diagonal.
    pub c_alpha_prime: f64,
    /// Relation coefficients of the four quadrilateral sides.
    pub c_beta: [f64; 4],
    /// `c_alpha + c_alpha_prime + sum of all shared-arc coefficients`.
    pub sum: f64,
    /// Whether the sum is negative (the deformation cone is salient along
    /// this face).
    pub holds: bool,
    /// `‖x0 − x1 + x2 − x3‖` for the pointwise tile motions `x_i` at `p`;
    /// vanishing is forced by the corner normalization.
    pub parallelogram_residual: f64,
    /// The sum predicted from the parallelogram: with `c_alpha`
    /// normalized to 1, `(‖x1−x2‖ + ‖x0−x1‖ − Σ‖x_i‖) / ‖x1−x2‖`.
    pub predicted_sum: f64,
}

/// Compute the relation coefficients for the flip of `e` with all widths
/// equal to 1 and every waist the orthogonal projection of `p`, and
/// report whether their sum is negative.
///
/// `q` must describe the quadrilateral of the flip (diagonal lift equal
/// to `cells.lift(e)`, side `i` equal to `cells.lift(side_edges[i])`, all
/// projectively) so that the parallelogram prediction refers to the same
/// configuration.  For waists that are not projections of a common point
/// the sign of the sum is not guaranteed; this function only reports what
/// it finds.
pub fn salience_check(
    q: &QuadConfig,
    p: &HPoint,
    cells: &CellStructure,
    flipped: &CellStructure,
    e: EdgeId,
    hol: &Holonomy,
    side_edges: &[EdgeId; 4],
) -> Result<Salience> {
    let projected: Vec<Strip> = cells
        .edges()
        .iter()
        .map(|ed| Strip {
            waist: foot(&ed.lift, p),
            width: 1.0,
        })
        .collect();
    let strips = StripSystem::new(cells, projected)?;
    let new_strip = Strip {
        waist: foot(flipped.lift(e), p),
        width: 1.0,
    };
    let rel = flip_relation(cells, flipped, e, hol, &strips, &new_strip)?;
    let sum = rel.c_alpha + rel.c_alpha_prime + rel.c_other.iter().sum::<f64>();
    let mut c_beta = [0.0; 4];
    for (i, se) in side_edges.iter().enumerate() {
        c_beta[i] = rel.c_other[se.0];
    }

    let x = phi_w(q, &p.vec());
    let spacelike_norm = |v: &MinkVec| -> Result<f64> {
        let ns = v.norm_sq();
        if ns <= 0.0 {
            return Err(Error::CausalType(
                "pointwise tile motion is not spacelike".into(),
            ));
        }
        Ok(ns.sqrt())
    };
    let parallelogram_residual = (x[0] - x[1] + x[2] - x[3]).euclid_norm_sq().sqrt();
    let c_alpha_pred = spacelike_norm(&(x[1] - x[2]))?;
    let c_alpha_prime_pred = spacelike_norm(&(x[0] - x[1]))?;
    let mut side_norms = 0.0;
    for xi in &x {
        side_norms += spacelike_norm(xi)?;
    }
    let predicted_sum = (c_alpha_pred + c_alpha_prime_pred - side_norms) / c_alpha_pred;

    Ok(Salience {
        c_alpha: rel.c_alpha,
        c_alpha_prime: rel.c_alpha_prime,
        c_beta,
        sum,
        holds: sum < 0.0,
        parallelogram_residual,
        predicted_sum,
    })
}
