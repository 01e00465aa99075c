//! Crooked planes in Minkowski 3-space.
//!
//! Points of `R^{2,1}` are identified with Killing vectors of the hyperbolic
//! plane.  The crooked plane of an oriented geodesic is the set of Killing
//! vectors whose nonrepelling fixed point lies on the closed geodesic: a
//! stem (the causal vectors of the geodesic's span, generating rotations
//! about its points and parabolics about its endpoints) glued to two
//! lightlike wing half-planes (the hyperbolic vectors attracted to one of
//! the two ideal endpoints).  Translated copies of these piecewise linear
//! surfaces separate `R^{2,1}`, and an open cone of translations decides
//! exactly when two of them are disjoint.
//!
//! The module provides side classification, the stem quadrant of outward
//! orthogonal translations, the exact disjointness cone with its margin,
//! sampled half-space nesting certificates, surface meshing, and a
//! fundamental-domain builder driven by a filling strip system: each wall of
//! a ping-pong region is translated by the blend of the adjacent tile
//! potentials of the strip cocycle, producing pairwise disjoint crooked
//! planes paired by the deformed group action.

use crate::cells::{
    fills_surface, integrate_crossings, strip_cocycle, CellStructure, Crossing, EdgeId,
    StripSystem,
};
use crate::error::{Error, Result};
use crate::lorentz::{classify_killing, HPoint, Isometry, KillingClass, MinkVec, OrientedGeodesic};
use crate::schottky::{Holonomy, SchottkyWitness};
use crate::tol;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Which side of a crooked plane a Killing vector lies on.
///
/// `Plus` is the side whose Killing vectors have their nonrepelling fixed
/// point strictly on the positive side of the plane's geodesic, `Minus` the
/// other; `On` means the vector belongs to the plane itself (fixed point on
/// the closed geodesic, within tolerance).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
    On,
}

/// The crooked plane of `line`, translated by `pos`.
#[derive(Debug, Clone, Copy)]
pub struct CrookedPlane {
    pub line: OrientedGeodesic,
    pub pos: MinkVec,
}

impl CrookedPlane {
    pub fn new(line: OrientedGeodesic, pos: MinkVec) -> CrookedPlane {
        CrookedPlane { line, pos }
    }

    /// The crooked plane through the origin.
    pub fn centered(line: OrientedGeodesic) -> CrookedPlane {
        CrookedPlane {
            line,
            pos: MinkVec::ZERO,
        }
    }

    /// Image under the affine map `V -> Ad(g) V + w`.
    ///
    /// The image is again a crooked plane, of the transported geodesic.  For
    /// orientation-preserving `g` side classification is equivariant; for
    /// orientation-reversing `g` the image geodesic's sides are swapped, so
    /// `Plus` and `Minus` exchange.
    pub fn transform(&self, g: &Isometry, w: &MinkVec) -> CrookedPlane {
        CrookedPlane {
            line: self.line.transform(g),
            pos: g.adjoint(&self.pos) + *w,
        }
    }
}

/// Classify a Killing vector against a crooked plane by the location of the
/// nonrepelling fixed point of `V - pos` relative to the plane's geodesic:
/// the rotation center for elliptic vectors, the ideal fixed point for
/// parabolic ones, the attracting endpoint for hyperbolic ones.  Fixed
/// points within distance `tol::ON_TOL` of the closed geodesic (and the zero
/// vector) classify `On`.
pub fn classify_side(cp: &CrookedPlane, v: &MinkVec) -> Side {
    let y = *v - cp.pos;
    let n = cp.line.unit_normal();
    let of_sign = |s: f64| {
        if s > tol::ON_TOL {
            Side::Plus
        } else if s < -tol::ON_TOL {
            Side::Minus
        } else {
            Side::On
        }
    };
    match classify_killing(&y) {
        KillingClass::Zero => Side::On,
        KillingClass::Elliptic { center, .. } => of_sign(cp.line.side_of(&center)),
        KillingClass::Parabolic { fixed } => of_sign(fixed.inner(&n)),
        KillingClass::Hyperbolic { attract, .. } => of_sign(attract.inner(&n)),
    }
}

/// Side classification against the *right* crooked plane of the same data:
/// the image of the plane under the global sign flip `V -> -V`.  This is the
/// single point where right planes enter the API; everything else works with
/// left planes.
pub fn classify_side_right(cp: &CrookedPlane, v: &MinkVec) -> Side {
    let flipped = CrookedPlane {
        line: cp.line,
        pos: MinkVec::ZERO,
    };
    classify_side(&flipped, &-(*v - cp.pos))
}

/// The open cone of translations moving a geodesic's crooked plane off
/// itself toward the positive side: positive combinations of `vplus` minus
/// positive combinations of `vminus`.
#[derive(Debug, Clone, Copy)]
pub struct StemQuadrant {
    pub vplus: MinkVec,
    pub vminus: MinkVec,
}

impl StemQuadrant {
    /// `a * vplus - b * vminus`.
    pub fn element(&self, a: f64, b: f64) -> MinkVec {
        self.vplus * a - self.vminus * b
    }

    /// Coefficients `(a, b, off)` with `u = a*vplus - b*vminus + off-plane
    /// part of size |off|` (the off-plane size is measured against the span's
    /// unit normal).
    pub fn coefficients(&self, u: &MinkVec) -> (f64, f64, f64) {
        let denom = self.vplus.inner(&self.vminus);
        let a = u.inner(&self.vminus) / denom;
        let b = -u.inner(&self.vplus) / denom;
        let n = self
            .vplus
            .wedge(&self.vminus)
            .unit_spacelike()
            .expect("distinct lightlike rays span a timelike plane");
        (a, b, u.inner(&n))
    }

    /// Strict open-cone membership: `u` lies in the span of the two rays
    /// (off-plane part below tolerance relative to its size) with both
    /// coefficients strictly positive — strictness measured relative to the
    /// coefficient sizes, so boundary rays stay excluded under rounding.
    pub fn contains(&self, u: &MinkVec) -> bool {
        let (a, b, off) = self.coefficients(u);
        let scale = u.euclid_norm_sq().sqrt();
        let floor = 1e-12 * (a.abs() + b.abs());
        a > floor && b > floor && off.abs() <= tol::ON_TOL * scale.max(1e-12)
    }
}

/// The stem quadrant of an oriented geodesic: `vplus` is the left endpoint
/// and `vminus` the right one, so that the elements are exactly the Killing
/// vectors of orthogonal translations pushing the geodesic toward its
/// positive side.
pub fn stem_quadrant(line: &OrientedGeodesic) -> StemQuadrant {
    StemQuadrant {
        vplus: line.left(),
        vminus: line.right(),
    }
}

/// Require that two geodesics are disjoint in the closed disk and
/// transversely oriented away from each other (each one's points on the
/// other's negative side).  Disjointness is `|<n, n'>| > 1` for the unit
/// normals; the sign of the product separates parallel from antiparallel
/// orientations but cannot tell "both away" from "both toward" — that needs
/// the side test.
pub(crate) fn require_separated_away(l: &OrientedGeodesic, lp: &OrientedGeodesic) -> Result<()> {
    let c = l.unit_normal().inner(&lp.unit_normal());
    if c.abs() <= 1.0 {
        return Err(Error::InvalidInput(format!(
            "geodesics are not disjoint in the closed disk (normal product {c:.6})"
        )));
    }
    if c > 0.0 || l.side_of(&lp.point_param(0.0)) >= 0.0 || lp.side_of(&l.point_param(0.0)) >= 0.0
    {
        return Err(Error::InvalidInput(format!(
            "geodesics are not oriented away from each other (normal product {c:.6})"
        )));
    }
    Ok(())
}

/// Inward unit (Euclidean) normals of the facets of the cone positively
/// spanned by the four generators.  A pair spans a facet when the remaining
/// generators sit strictly on a common side of its plane.
fn cone_facets(gens: &[MinkVec; 4]) -> Result<Vec<MinkVec>> {
    let mut facets = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let n = gens[i].wedge(&gens[j]);
            let len = n.euclid_norm_sq().sqrt();
            if len < 1e-14 {
                continue;
            }
            let n = n / len;
            let others: Vec<f64> = (0..4)
                .filter(|&k| k != i && k != j)
                .map(|k| n.inner(&gens[k]))
                .collect();
            let floor = 1e-12
                * others
                    .iter()
                    .fold(1.0f64, |m, s| m.max(s.abs()));
            if others.iter().all(|&s| s > floor) {
                facets.push(n);
            } else if others.iter().all(|&s| s < -floor) {
                facets.push(-n);
            }
        }
    }
    if facets.len() < 3 {
        return Err(Error::Numerical(format!(
            "disjointness cone degenerated to {} facets",
            facets.len()
        )));
    }
    Ok(facets)
}

/// Signed margin of `w` against the open translation cone that makes the
/// crooked plane of `lp`, translated by `w`, disjoint from the crooked plane
/// of `l`: the minimum over the cone's facets of the pairing of `w` with the
/// inward facet normal (normals Euclid-normalized, so the margin is in units
/// of `w`).  Positive means disjoint, zero or negative means the planes
/// meet.
///
/// The cone is positively spanned by `lp.left(), -lp.right(), -l.left(),
/// l.right()` — differences of an outward translation of `lp` and an outward
/// translation of `l`.
pub fn disjointness_margin(
    l: &OrientedGeodesic,
    lp: &OrientedGeodesic,
    w: &MinkVec,
) -> Result<f64> {
    require_separated_away(l, lp)?;
    let gens = [lp.left(), -lp.right(), -l.left(), l.right()];
    let facets = cone_facets(&gens)?;
    Ok(facets
        .iter()
        .map(|n| n.inner(w))
        .fold(f64::INFINITY, f64::min))
}

/// Exact disjointness of the crooked plane of `l` and the crooked plane of
/// `lp` translated by `w`, for geodesics disjoint in the closed disk and
/// oriented away from each other: true exactly when `w` lies in the open
/// cone of [`disjointness_margin`].  `w = 0` is never disjoint (a crooked
/// plane meets every translate of itself by a span vector, and shares the
/// cone apex here).
pub fn crooked_disjoint_exact(
    l: &OrientedGeodesic,
    lp: &OrientedGeodesic,
    w: &MinkVec,
) -> Result<bool> {
    Ok(disjointness_margin(l, lp, w)? > 0.0)
}

/// A rectangular grid of points on one linear piece of a crooked plane,
/// stored row-major.
#[derive(Debug, Clone)]
pub struct MeshPatch {
    pub rows: usize,
    pub cols: usize,
    pub vertices: Vec<MinkVec>,
}

/// A sampled crooked plane: two stem quadrant patches (future and past) and
/// one patch per wing, each a grid fine enough to cover the surface inside
/// the requested box at its resolution.
#[derive(Debug, Clone)]
pub struct CrookedMesh {
    pub patches: Vec<(String, MeshPatch)>,
}

impl CrookedMesh {
    pub fn vertices(&self) -> impl Iterator<Item = &MinkVec> {
        self.patches.iter().flat_map(|(_, p)| p.vertices.iter())
    }

    pub fn vertex_count(&self) -> usize {
        self.patches.iter().map(|(_, p)| p.vertices.len()).sum()
    }
}

/// Sample a crooked plane as four grid patches covering its intersection
/// with the cube of half-side `radius` centered at the origin (vertices may
/// extend beyond the box; every point of the surface inside the box is
/// within one grid step of a vertex).  Stem vertices are the plane's
/// translation plus a causal vector of the geodesic's span; wing vertices
/// are spacelike vectors orthogonal to the respective endpoint.  Requires
/// `n >= 2` grid points per patch direction.
pub fn sample_surface(cp: &CrookedPlane, radius: f64, n: usize) -> Result<CrookedMesh> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "sample_surface: resolution {n} is below 2"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "sample_surface: box radius {radius} must be positive"
        )));
    }
    let l = cp.line.left();
    let r = cp.line.right();
    let nh = cp.line.unit_normal();
    let reach = radius + cp.pos.euclid_norm_sq().sqrt() + 1.0;
    // Stem coefficients (a, b) in `a*l + b*r` have the same sign, and the
    // third coordinate of the offset is a + b, so |a|, |b| <= reach covers
    // the box.
    let a_stem = reach;
    // Wing coefficients recover linearly: c = <w, other endpoint> / <l, r>
    // and s = <w, unit normal>, bounded through Cauchy-Schwarz on the
    // Euclidean norms (Minkowski pairings flip one sign, so the same bound
    // holds).
    let lr = l.inner(&r).abs();
    let sqrt3 = 3.0f64.sqrt();
    let c_left = sqrt3 * reach * r.euclid_norm_sq().sqrt() / lr + 1.0;
    let c_right = sqrt3 * reach * l.euclid_norm_sq().sqrt() / lr + 1.0;
    let s_max = sqrt3 * reach * nh.euclid_norm_sq().sqrt() + 1.0;

    let grid = |lo: f64, hi: f64, k: usize| -> Vec<f64> {
        (0..k)
            .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
            .collect()
    };
    let mut patches = Vec::new();

    for (name, sign) in [("stem-future", 1.0), ("stem-past", -1.0)] {
        let ticks = grid(0.0, sign * a_stem, n);
        let mut vertices = Vec::with_capacity(n * n);
        for &a in &ticks {
            for &b in &ticks {
                vertices.push(cp.pos + l * a + r * b);
            }
        }
        patches.push((
            name.to_string(),
            MeshPatch {
                rows: n,
                cols: n,
                vertices,
            },
        ));
    }
    // Left wing: vectors c*l + s*nh with s < 0 are the hyperbolic Killing
    // vectors attracted to the left endpoint; right wing mirrors with s > 0.
    for (name, along, s_sign, c_max) in [
        ("wing-left", l, -1.0, c_left),
        ("wing-right", r, 1.0, c_right),
    ] {
        let c_ticks = grid(-c_max, c_max, n);
        let s_ticks: Vec<f64> = (1..=n)
            .map(|j| s_sign * s_max * j as f64 / n as f64)
            .collect();
        let mut vertices = Vec::with_capacity(n * n);
        for &c in &c_ticks {
            for &s in &s_ticks {
                vertices.push(cp.pos + along * c + nh * s);
            }
        }
        patches.push((
            name.to_string(),
            MeshPatch {
                rows: n,
                cols: n,
                vertices,
            },
        ));
    }
    Ok(CrookedMesh { patches })
}

/// Wavefront OBJ text for a list of named crooked-plane meshes: one `o`
/// object per mesh, grid quads triangulated, vertex indices global across
/// objects as the format requires.
pub fn meshes_obj(objects: &[(String, CrookedMesh)]) -> String {
    let mut out = String::new();
    let mut base = 1usize;
    for (name, mesh) in objects {
        out.push_str(&format!("o {name}\n"));
        for (_, patch) in &mesh.patches {
            for v in &patch.vertices {
                out.push_str(&format!("v {:.9} {:.9} {:.9}\n", v.x1, v.x2, v.x3));
            }
        }
        let mut patch_base = base;
        for (_, patch) in &mesh.patches {
            let at = |i: usize, j: usize| patch_base + i * patch.cols + j;
            for i in 0..patch.rows - 1 {
                for j in 0..patch.cols - 1 {
                    let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
                    out.push_str(&format!("f {a} {b} {c}\n"));
                    out.push_str(&format!("f {a} {c} {d}\n"));
                }
            }
            patch_base += patch.vertices.len();
        }
        base = patch_base;
    }
    out
}

/// Brute-force disjointness verdict at mesh resolution: every sampled vertex
/// of each surface lies strictly on one common side of the other plane.
/// Disjoint translated crooked planes put each other entirely in one open
/// half-space, so a mixed or boundary classification witnesses an
/// intersection at this resolution.
pub fn mesh_disjoint_oracle(
    plane_a: &CrookedPlane,
    mesh_a: &CrookedMesh,
    plane_b: &CrookedPlane,
    mesh_b: &CrookedMesh,
) -> bool {
    let one_side = |plane: &CrookedPlane, mesh: &CrookedMesh| -> bool {
        let mut verts = mesh.vertices();
        let first = match verts.next() {
            Some(v) => classify_side(plane, v),
            None => return false,
        };
        first != Side::On && verts.all(|v| classify_side(plane, v) == first)
    };
    one_side(plane_b, mesh_a) && one_side(plane_a, mesh_b)
}

/// Minimum Euclidean vertex-to-vertex distance between two meshes.
pub fn mesh_euclid_gap(a: &CrookedMesh, b: &CrookedMesh) -> f64 {
    let bv: Vec<MinkVec> = b.vertices().copied().collect();
    let av: Vec<MinkVec> = a.vertices().copied().collect();
    av.par_iter()
        .map(|va| {
            bv.iter()
                .map(|vb| (*va - *vb).euclid_norm_sq())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}

/// Whether the closed positive half-plane of `outer` contains that of
/// `inner`: the same oriented geodesic, or disjoint geodesics with `inner`
/// strictly inside `outer`'s positive side and oriented away from it.
fn half_plane_contains(outer: &OrientedGeodesic, inner: &OrientedGeodesic) -> bool {
    let same = (outer.left() - inner.left()).euclid_norm_sq() < 1e-18
        && (outer.right() - inner.right()).euclid_norm_sq() < 1e-18;
    if same {
        return true;
    }
    if outer.unit_normal().inner(&inner.unit_normal()).abs() <= 1.0 {
        return false;
    }
    outer.side_of(&inner.point_param(0.0)) > 0.0 && inner.side_of(&outer.point_param(0.0)) < 0.0
}

/// Sampled certificate that the closed positive half-space of `inner` is
/// contained in the open positive half-space of `outer`.
///
/// Requires the positive half-plane of `outer.line` to contain that of
/// `inner.line` (returns false otherwise).  The sample set is the center of
/// `inner` — a boundary point of the closed half-space, which rules out
/// equality of the two planes — together with `samples` rejection-sampled
/// points of the open half-space, drawn from a cube of half-side
/// `8 + 2(|pos| + |pos'|)` around `inner.pos` with the seeded generator;
/// every sample must classify strictly `Plus` for `outer`.  The certificate
/// is sampled, not exact: surface points other than the center (where the
/// two boundaries may touch along stem rays) are deliberately not drawn.
pub fn nesting_check(
    outer: &CrookedPlane,
    inner: &CrookedPlane,
    samples: usize,
    seed: u64,
) -> bool {
    if !half_plane_contains(&outer.line, &inner.line) {
        return false;
    }
    if classify_side(outer, &inner.pos) != Side::Plus {
        return false;
    }
    let radius = 8.0
        + 2.0 * (outer.pos.euclid_norm_sq().sqrt() + inner.pos.euclid_norm_sq().sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0usize;
    let mut tries = 0usize;
    while accepted < samples && tries < 400 * samples.max(1) {
        tries += 1;
        let v = inner.pos
            + MinkVec::new(
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
            );
        if classify_side(inner, &v) != Side::Plus {
            continue;
        }
        accepted += 1;
        if classify_side(outer, &v) != Side::Plus {
            return false;
        }
    }
    accepted == samples
}

/// An affine isometry of Minkowski space, `V -> Ad(linear) V + translation`.
#[derive(Debug, Clone, Copy)]
pub struct AffineIsometry {
    pub linear: Isometry,
    pub translation: MinkVec,
}

impl AffineIsometry {
    pub fn new(linear: Isometry, translation: MinkVec) -> AffineIsometry {
        AffineIsometry {
            linear,
            translation,
        }
    }

    pub fn identity() -> AffineIsometry {
        AffineIsometry {
            linear: Isometry::identity(),
            translation: MinkVec::ZERO,
        }
    }

    pub fn apply(&self, v: &MinkVec) -> MinkVec {
        self.linear.adjoint(v) + self.translation
    }

    pub fn apply_plane(&self, cp: &CrookedPlane) -> CrookedPlane {
        cp.transform(&self.linear, &self.translation)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        AffineIsometry {
            linear: self.linear.compose(&other.linear),
            translation: self.linear.adjoint(&other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> AffineIsometry {
        let li = self.linear.inverse();
        AffineIsometry {
            linear: li,
            translation: -li.adjoint(&self.translation),
        }
    }
}

/// One wall of a crooked fundamental domain.
#[derive(Debug, Clone)]
pub struct CrookedFacet {
    /// Index of the generator whose wall pair this facet belongs to.
    pub pair: usize,
    /// False for the arc's own lift, true for its image under the generator.
    pub is_image: bool,
    /// The arc of the cell structure whose developed lift this wall is.
    pub edge: EdgeId,
    /// The translated crooked plane, geodesic oriented away from the region.
    pub plane: CrookedPlane,
    /// The scaled transverse motion across the wall (far-side tile potential
    /// minus region-side tile potential); always in the wall's stem quadrant.
    pub motion: MinkVec,
}

/// A crooked fundamental domain: `2r` pairwise disjoint translated crooked
/// planes bounding the region that classifies `Minus` or `On` for every
/// facet, together with the `r` affine pairings carrying each source facet
/// onto its image facet.
#[derive(Debug, Clone)]
pub struct CrookedDomain {
    /// Facets ordered `[source_0, image_0, source_1, image_1, ...]`.
    pub facets: Vec<CrookedFacet>,
    /// Pairing `i` is the affine map of generator `i` under the deformed
    /// action: linear part the holonomy image, translation the scaled
    /// cocycle value.
    pub pairings: Vec<AffineIsometry>,
    /// Strip-width scale of the construction.
    pub scale: f64,
    /// Blend parameter placing each wall between its two tile potentials.
    pub blend: f64,
    /// Disjointness margins of all facet pairs `(a, b, margin)`, `a < b`.
    pub pair_margins: Vec<(usize, usize, f64)>,
    /// Smallest pairwise margin (positive for a certified domain).
    pub min_margin: f64,
}

impl CrookedDomain {
    /// First facet whose open far half-space contains `v`, if any.
    pub fn violated_facet(&self, v: &MinkVec) -> Option<usize> {
        self.facets
            .iter()
            .position(|f| classify_side(&f.plane, v) == Side::Plus)
    }

    /// Whether `v` lies in the closed region bounded by the facets.
    pub fn contains(&self, v: &MinkVec) -> bool {
        self.violated_facet(v).is_none()
    }

    /// The affine map carrying the neighbor copy across facet `f` back
    /// toward the region: the pairing for a source wall, its inverse for an
    /// image wall.
    pub fn return_map(&self, facet: usize) -> AffineIsometry {
        let f = &self.facets[facet];
        if f.is_image {
            self.pairings[f.pair].inverse()
        } else {
            self.pairings[f.pair]
        }
    }
}

/// Developing probe for a wall of the cell structure: crossing lists from
/// the base tile to the two tiles adjacent to `wall` (the wall's negative
/// side first), the arc whose developed lift the wall is, and the crossing
/// sign (`+1` when the wall's orientation agrees with the developed lift's,
/// `-1` when it is the reverse), found by developing probe points pushed off
/// the wall to either side.
pub(crate) fn wall_probe(
    cells: &CellStructure,
    wall: &OrientedGeodesic,
) -> Result<(Vec<Crossing>, Vec<Crossing>, EdgeId, f64)> {
    let n = wall.unit_normal();
    for s_param in [0.0, 0.45, -0.45, 0.9, -0.9, 1.4, -1.4] {
        let p = wall.point_param(s_param).vec();
        for eps in [0.05f64, 0.02, 0.008] {
            let off = n * eps.sinh();
            let at = p * eps.cosh();
            let (Ok(q_minus), Ok(q_plus)) = (
                HPoint::from_timelike(&(at - off)),
                HPoint::from_timelike(&(at + off)),
            ) else {
                continue;
            };
            let Ok((_, _, cr_minus)) = cells.develop_to_point(&q_minus) else {
                continue;
            };
            let Ok((_, _, cr_plus)) = cells.develop_to_point(&q_plus) else {
                continue;
            };
            let Ok(between) = cells.develop_between(&q_minus, &q_plus) else {
                continue;
            };
            if between.len() != 1 {
                continue;
            }
            let c = &between[0];
            let copy = cells.lift(c.edge).transform(&c.place).unit_normal();
            let matches = (copy - n).euclid_norm_sq() < 1e-18
                || (copy + n).euclid_norm_sq() < 1e-18;
            if !matches {
                continue;
            }
            return Ok((cr_minus, cr_plus, c.edge, c.sign));
        }
    }
    Err(Error::Numerical(
        "wall probing failed: no probe point developed cleanly to both sides".into(),
    ))
}

/// Tile potentials of the two tiles adjacent to `wall` (the wall's negative
/// side first), integrated from the [`wall_probe`] crossing lists.
fn wall_potentials(
    cells: &CellStructure,
    strips: &StripSystem,
    wall: &OrientedGeodesic,
) -> Result<(MinkVec, MinkVec, EdgeId, f64)> {
    let (cr_minus, cr_plus, edge, sign) = wall_probe(cells, wall)?;
    Ok((
        integrate_crossings(&cr_minus, strips),
        integrate_crossings(&cr_plus, strips),
        edge,
        sign,
    ))
}

/// Build a crooked fundamental domain from a filling strip system.
///
/// The walls are the `2r` sides of the ping-pong region of `witness` (each
/// one a developed lift of an arc of `cells`, oriented away from the
/// region).  Writing `phi` for the tile potential of the strip cocycle
/// normalized to zero on the base tile, each wall is translated by
/// `scale * ((1 - blend) * phi(lift-negative tile) + blend *
/// phi(lift-positive tile))` — the weights follow the orientation of the
/// arc's developed lift, not the wall's away-orientation, which is what
/// makes the pairings carry source facets onto image facets exactly for
/// every blend (at `blend = 1/2` this is the symmetric midpoint of the two
/// potentials).  The motion `phi(far) - phi(region)` across every wall must
/// land in the wall's stem quadrant, and all translated planes must be
/// pairwise disjoint by the exact cone test, else the construction fails
/// with a disjointness error.  Facet `i` is carried onto its image facet by
/// the affine pairing `(holonomy generator i, scale * cocycle value i)`, and
/// this transport identity is verified exactly.
pub fn build_fundamental_domain(
    cells: &CellStructure,
    hol: &Holonomy,
    witness: &SchottkyWitness,
    strips: &StripSystem,
    scale: f64,
    blend: f64,
) -> Result<CrookedDomain> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "domain scale {scale} must be positive"
        )));
    }
    if !(blend > 0.0 && blend < 1.0) {
        return Err(Error::InvalidInput(format!(
            "blend {blend} must lie strictly between 0 and 1"
        )));
    }
    witness.validate(hol)?;
    if witness.pairs.len() != hol.rank() {
        return Err(Error::InvalidInput(
            "witness rank does not match holonomy rank".into(),
        ));
    }
    if let Some(i) = strips.strips().iter().position(|s| s.width <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "strip {i} has nonpositive width"
        )));
    }
    let all_edges: Vec<EdgeId> = (0..cells.edges().len()).map(EdgeId).collect();
    if !fills_surface(cells, &all_edges)? {
        return Err(Error::InvalidInput(
            "the arc system does not fill: cutting along every arc must leave disks".into(),
        ));
    }
    let u = strip_cocycle(cells, hol, strips)?;

    let mut facets = Vec::with_capacity(2 * witness.pairs.len());
    for (i, pair) in witness.pairs.iter().enumerate() {
        for (wall, is_image) in [(&pair.source, false), (&pair.target, true)] {
            let (phi_region, phi_far, edge, sign) = wall_potentials(cells, strips, wall)?;
            let motion = (phi_far - phi_region) * scale;
            if !stem_quadrant(wall).contains(&motion) {
                return Err(Error::Disjointness(format!(
                    "transverse motion across wall {i} ({}) leaves its stem quadrant",
                    if is_image { "image" } else { "source" }
                )));
            }
            // Weight `blend` on the developed lift's positive side.
            let toward_far = if sign > 0.0 { blend } else { 1.0 - blend };
            let pos = (phi_region * (1.0 - toward_far) + phi_far * toward_far) * scale;
            facets.push(CrookedFacet {
                pair: i,
                is_image,
                edge,
                plane: CrookedPlane::new(*wall, pos),
                motion,
            });
        }
    }

    let pairings: Vec<AffineIsometry> = (0..hol.rank())
        .map(|i| AffineIsometry::new(hol.generators()[i], u.generator_values()[i] * scale))
        .collect();

    // Exact transport: the pairing carries the source facet onto the image
    // facet (same geodesic, orientation reversed since the region switches
    // sides; same translation).
    for i in 0..hol.rank() {
        let img = pairings[i].apply_plane(&facets[2 * i].plane);
        let tgt = &facets[2 * i + 1].plane;
        let flip = (img.line.unit_normal() + tgt.line.unit_normal())
            .euclid_norm_sq()
            .sqrt();
        let pos_err = (img.pos - tgt.pos).euclid_norm_sq().sqrt();
        let reference = 1.0 + tgt.pos.euclid_norm_sq().sqrt();
        if flip > 1e-9 || pos_err > 1e-9 * reference {
            return Err(Error::Numerical(format!(
                "pairing {i} does not carry its source facet onto its image facet \
                 (line defect {flip:.3e}, translation defect {pos_err:.3e})"
            )));
        }
    }

    let mut pair_margins = Vec::new();
    let mut min_margin = f64::INFINITY;
    for a in 0..facets.len() {
        for b in (a + 1)..facets.len() {
            let w = facets[b].plane.pos - facets[a].plane.pos;
            let margin = disjointness_margin(&facets[a].plane.line, &facets[b].plane.line, &w)?;
            min_margin = min_margin.min(margin);
            pair_margins.push((a, b, margin));
        }
    }
    if min_margin <= 0.0 {
        let (a, b, m) = *pair_margins
            .iter()
            .min_by(|x, y| x.2.total_cmp(&y.2))
            .expect("at least one facet pair");
        return Err(Error::Disjointness(format!(
            "facets {a} and {b} are not disjoint (cone margin {m:.3e})"
        )));
    }

    Ok(CrookedDomain {
        facets,
        pairings,
        scale,
        blend,
        pair_margins,
        min_margin,
    })
}

/// OBJ text for the sampled facets of a domain, one object per facet named
/// by its arc (`edge-<id>-source` / `edge-<id>-image`).
pub fn domain_obj(domain: &CrookedDomain, radius: f64, n: usize) -> Result<String> {
    let mut objects = Vec::with_capacity(domain.facets.len());
    for f in &domain.facets {
        let name = format!(
            "edge-{}-{}",
            f.edge.0,
            if f.is_image { "image" } else { "source" }
        );
        objects.push((name, sample_surface(&f.plane, radius, n)?));
    }
    Ok(meshes_obj(&objects))
}

/// Outcome of a sampled coverage probe of a crooked domain.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub samples: usize,
    pub successes: usize,
    pub success_fraction: f64,
    /// Longest pairing word used by any successful walk.
    pub max_word_length: usize,
    /// Samples that already lay in the region (word length 0).
    pub already_inside: usize,
}

/// Greedy coverage probe: for each pseudo-random point of the cube of
/// half-side `radius`, repeatedly apply the return map of the (unique,
/// because facet far half-spaces are pairwise disjoint) violated facet until
/// the point lies in the region or `maxlen` pairings have been used.
/// Deterministic per-point seeds derived from `seed`; points run in
/// parallel.
pub fn coverage_probe(
    domain: &CrookedDomain,
    radius: f64,
    samples: usize,
    maxlen: usize,
    seed: u64,
) -> CoverageReport {
    let walks: Vec<Option<usize>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let mut v = MinkVec::new(
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
            );
            let mut steps = 0usize;
            loop {
                match domain.violated_facet(&v) {
                    None => return Some(steps),
                    Some(_) if steps == maxlen => return None,
                    Some(f) => {
                        v = domain.return_map(f).apply(&v);
                        steps += 1;
                    }
                }
            }
        })
        .collect();
    let successes = walks.iter().filter(|w| w.is_some()).count();
    CoverageReport {
        samples,
        successes,
        success_fraction: successes as f64 / samples.max(1) as f64,
        max_word_length: walks.iter().flatten().copied().max().unwrap_or(0),
        already_inside: walks.iter().flatten().filter(|&&s| s == 0).count(),
    }
}

/// Norm of the tangent vector at `p` of the flow of the Killing vector `v`
/// (points of Minkowski space act on the hyperbolic plane as Killing
/// fields; tangent vectors at a point are spacelike).
pub fn killing_speed_at(v: &MinkVec, p: &HPoint) -> f64 {
    v.wedge(&p.vec()).norm_sq().max(0.0).sqrt()
}

/// Divergence witness along an escaping facet sequence: the image facet of
/// pair `i` is sampled once, the sample vertices are pushed forward through
/// `pairing_i` repeatedly, and each generation records the minimum of
/// [`killing_speed_at`] over the pushed vertices.  For a valid domain the
/// sequence grows without bound — no Killing vector of the escaping planes
/// stays at bounded speed, which is what makes the region a fundamental
/// domain for a properly discontinuous action.  (The vertices are pushed
/// rather than the planes re-sampled: the transported geodesics degenerate
/// numerically as their endpoints converge, while the affine vertex orbit
/// stays exact.)
pub fn divergence_profile(
    domain: &CrookedDomain,
    pair: usize,
    depth: usize,
    radius: f64,
    n: usize,
    p: &HPoint,
) -> Result<Vec<f64>> {
    let map = domain.pairings[pair];
    let mesh = sample_surface(&domain.facets[2 * pair + 1].plane, radius, n)?;
    let mut verts: Vec<MinkVec> = mesh.vertices().copied().collect();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        for v in &mut verts {
            *v = map.apply(v);
        }
        out.push(
            verts
                .iter()
                .map(|v| killing_speed_at(v, p))
                .fold(f64::INFINITY, f64::min),
        );
    }
    Ok(out)
}
