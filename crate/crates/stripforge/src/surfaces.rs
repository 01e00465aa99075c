//! A concrete family of convex cocompact surfaces: doubles of hyperideal
//! polygons, with their natural cell structures.
//!
//! A *hyperideal polygon* is the region cut out by `k >= 3` pairwise
//! disjoint geodesics ("sides"), given by outward unit spacelike normals
//! with pairwise inner products `< -1`.  Reflecting in the sides generates
//! a discrete group; its orientation-preserving index-two subgroup is free
//! of rank `k - 1` and the quotient of its domain of discontinuity's convex
//! hull is the *double* of the polygon: a `k`-holed sphere, one funnel per
//! gap between consecutive sides.
//!
//! The `k` sides become a filling system of disjoint arcs of the double
//! (the *seams*), cutting it into the polygon and its mirror image — the
//! seam cell structure.  For `k > 3` a fan of polygon diagonals refines it
//! into triangle cells — the fan cell structure, used to test that strip
//! deformation data does not depend on the refinement.

use crate::cells::{interior_point, CellStructure, EdgeData, EdgeId, Side, Strip, StripSystem, Tile, TileId};
use crate::error::{Error, Result};
use crate::lorentz::{HPoint, Isometry, MinkVec, OrientedGeodesic};
use crate::schottky::{Holonomy, SchottkyPair, SchottkyWitness};
use crate::words::FreeWord;

/// Outward unit normals of a hyperideal polygon with side `i` at direction
/// `thetas[i]` and (signed) distance parameter `ds[i]` from the origin:
/// `(cosh d cos t, cosh d sin t, sinh d)`.
pub fn hyperideal_normals(ds: &[f64], thetas: &[f64]) -> Result<Vec<MinkVec>> {
    if ds.len() != thetas.len() {
        return Err(Error::InvalidInput(
            "distance and direction lists differ in length".into(),
        ));
    }
    Ok(ds
        .iter()
        .zip(thetas)
        .map(|(&d, &t)| MinkVec::new(d.cosh() * t.cos(), d.cosh() * t.sin(), d.sinh()))
        .collect())
}

/// The double of a hyperideal polygon (see module docs).
#[derive(Debug, Clone)]
pub struct DoubledPolygon {
    normals: Vec<MinkVec>,
    reflections: Vec<Isometry>,
    hol: Holonomy,
    witness: SchottkyWitness,
}

impl DoubledPolygon {
    /// Build from outward side normals (unit spacelike, pairwise inner
    /// products `< -1`).
    pub fn new(normals: Vec<MinkVec>) -> Result<DoubledPolygon> {
        let k = normals.len();
        if k < 3 {
            return Err(Error::InvalidInput(format!(
                "a hyperideal polygon needs at least 3 sides, got {k}"
            )));
        }
        for (i, n) in normals.iter().enumerate() {
            if (n.norm_sq() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "normal {i} is not unit spacelike"
                )));
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let c = normals[i].inner(&normals[j]);
                if c >= -1.0 {
                    return Err(Error::NotPingPong(format!(
                        "sides {i} and {j} are not disjoint: <n_i, n_j> = {c}"
                    )));
                }
            }
        }
        let reflections: Vec<Isometry> = normals
            .iter()
            .map(|n| Isometry::reflection(n).expect("unit spacelike normal"))
            .collect();
        // Orientation-preserving generators: reflect in side 0, then side
        // i + 1.
        let gens: Vec<Isometry> = (1..k)
            .map(|i| reflections[0].compose(&reflections[i]))
            .collect();
        let hol = Holonomy::new(gens.clone());
        let pairs: Vec<SchottkyPair> = (1..k)
            .map(|i| {
                let source = OrientedGeodesic::from_normal(&normals[i])
                    .expect("unit spacelike normal");
                let target = source.transform(&gens[i - 1]).reverse();
                SchottkyPair { source, target }
            })
            .collect();
        let witness = SchottkyWitness { pairs };
        witness.validate(&hol)?;
        Ok(DoubledPolygon {
            normals,
            reflections,
            hol,
            witness,
        })
    }

    /// The regular double: `k` sides at equal angles, all at distance
    /// parameter `d`.  Adjacent sides are disjoint exactly when
    /// `cosh^2 d > 2 / (1 - cos(2 pi / k))`.
    pub fn symmetric(k: usize, d: f64) -> Result<DoubledPolygon> {
        let thetas: Vec<f64> = (0..k)
            .map(|i| 2.0 * std::f64::consts::PI * i as f64 / k as f64)
            .collect();
        DoubledPolygon::new(hyperideal_normals(&vec![d; k], &thetas)?)
    }

    pub fn k(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[MinkVec] {
        &self.normals
    }

    pub fn reflections(&self) -> &[Isometry] {
        &self.reflections
    }

    pub fn holonomy(&self) -> &Holonomy {
        &self.hol
    }

    pub fn witness(&self) -> &SchottkyWitness {
        &self.witness
    }

    /// Side `j` as an oriented geodesic, polygon on the negative side.
    pub fn side(&self, j: usize) -> OrientedGeodesic {
        OrientedGeodesic::from_normal(&self.normals[j]).expect("unit spacelike normal")
    }

    /// Words of the `k` funnel boundaries.  The cuff in the gap between
    /// sides `j` and `j + 1` is the image of the product of those two
    /// reflections.
    pub fn cuff_words(&self) -> Vec<FreeWord> {
        let k = self.k();
        (0..k)
            .map(|j| {
                if j == 0 {
                    FreeWord::generator(1)
                } else if j == k - 1 {
                    FreeWord::generator(-(k as i32 - 1))
                } else {
                    FreeWord::new([-(j as i32), j as i32 + 1])
                }
            })
            .collect()
    }

    /// The geodesic in gap `j` (between sides `j` and `j + 1`): the common
    /// perpendicular of the two sides, which is the axis of cuff `j`.
    pub fn cuff_axis(&self, j: usize) -> Result<OrientedGeodesic> {
        let k = self.k();
        self.side(j).common_perpendicular(&self.side((j + 1) % k))
    }

    /// The seam cell structure: two tiles (the polygon and its mirror
    /// image, placed across side 0), with the `k` sides as arcs.
    pub fn seam_cells(&self) -> Result<CellStructure> {
        let k = self.k();
        let edges: Vec<EdgeData> = (0..k)
            .map(|j| EdgeData { lift: self.side(j) })
            .collect();
        let constraints: Vec<(OrientedGeodesic, f64)> =
            (0..k).map(|j| (self.side(j), -1.0)).collect();
        let anchor = interior_point(&constraints)?;
        let front = Tile {
            sides: (0..k)
                .map(|j| Side {
                    edge: EdgeId(j),
                    place: Isometry::identity(),
                })
                .collect(),
            anchor,
        };
        // The mirror tile's chosen copy is the reflection of the polygon in
        // side 0; its side on arc j lies on R_0 R_j * (side j), an exact
        // deck placement.
        let back = Tile {
            sides: (0..k)
                .map(|j| Side {
                    edge: EdgeId(j),
                    place: self.mirror_place(j),
                })
                .collect(),
            anchor: self.reflections[0].act(&anchor),
        };
        let cells = CellStructure::new(edges, vec![front, back], TileId(0));
        cells.validate(&self.hol)?;
        Ok(cells)
    }

    /// The deck element `R_0 R_j` placing the mirror tile's side on arc
    /// `j`: the identity for `j = 0`, generator `j` otherwise (bit-exact
    /// with the holonomy's own images).
    fn mirror_place(&self, j: usize) -> Isometry {
        if j == 0 {
            Isometry::identity()
        } else {
            self.hol.generators()[j - 1]
        }
    }

    /// The fan cell structure: the polygon is cut into `k - 2` triangles by
    /// the diagonals through gap `k - 1` and gap `j` (`j = 1 .. k - 3`),
    /// and the mirror side is cut by the mirrored diagonals.  For `k = 3`
    /// this is the seam structure.  Arc indices: seams `0 .. k-1`, then
    /// diagonal `j` at `k - 1 + j`, then its mirror at `2k - 4 + j`.
    pub fn fan_cells(&self) -> Result<CellStructure> {
        let k = self.k();
        if k == 3 {
            return self.seam_cells();
        }
        let apex = self.cuff_axis(k - 1)?;
        let mut edges: Vec<EdgeData> = (0..k)
            .map(|j| EdgeData { lift: self.side(j) })
            .collect();
        let mut diagonals = Vec::new();
        for j in 1..=(k - 3) {
            let d = apex.common_perpendicular(&self.cuff_axis(j)?)?;
            diagonals.push(d);
        }
        for d in &diagonals {
            edges.push(EdgeData { lift: *d });
        }
        for d in &diagonals {
            edges.push(EdgeData {
                lift: d.transform(&self.reflections[0]),
            });
        }
        let diag_edge = |j: usize| EdgeId(k - 1 + j); // j in 1..=k-3
        let mirror_diag_edge = |j: usize| EdgeId(2 * k - 4 + j);

        // Front triangle m (m = 0 .. k-3) is bounded by:
        //   m = 0:      sides 0, 1         and diagonal 1
        //   0 < m < k-3: diagonals m, m+1  and side m+1
        //   m = k-3:    diagonal k-3       and sides k-2, k-1
        let bounds = |m: usize| -> Vec<(EdgeId, OrientedGeodesic)> {
            let mut b = Vec::new();
            if m == 0 {
                b.push((EdgeId(0), self.side(0)));
                b.push((EdgeId(1), self.side(1)));
                b.push((diag_edge(1), diagonals[0]));
            } else if m == k - 3 {
                b.push((diag_edge(k - 3), diagonals[k - 4]));
                b.push((EdgeId(k - 2), self.side(k - 2)));
                b.push((EdgeId(k - 1), self.side(k - 1)));
            } else {
                b.push((diag_edge(m), diagonals[m - 1]));
                b.push((EdgeId(m + 1), self.side(m + 1)));
                b.push((diag_edge(m + 1), diagonals[m]));
            }
            b
        };

        let mut tiles = Vec::new();
        // Front triangles: everything at the identity.  A triangle lies on
        // the negative side of its polygon sides; for a bounding diagonal,
        // it lies on the same side as (any of) its own polygon sides.
        for m in 0..=(k - 3) {
            let b = bounds(m);
            let probe = b
                .iter()
                .find(|(e, _)| e.0 < k)
                .map(|(e, _)| self.side(e.0).point_param(0.0))
                .expect("every fan triangle has a polygon side");
            let constraints: Vec<(OrientedGeodesic, f64)> = b
                .iter()
                .map(|(e, g)| {
                    let sign = if e.0 < k {
                        -1.0
                    } else {
                        g.side_of(&probe).signum()
                    };
                    (*g, sign)
                })
                .collect();
            let anchor = interior_point(&constraints)?;
            tiles.push(Tile {
                sides: b
                    .iter()
                    .map(|(e, _)| Side {
                        edge: *e,
                        place: Isometry::identity(),
                    })
                    .collect(),
                anchor,
            });
        }
        // Mirror triangles: bounded by R_0 * (front bounds); a mirrored
        // polygon side j lies on (R_0 R_j) * (side j), a mirrored diagonal
        // is its own arc's representative lift.
        for m in 0..=(k - 3) {
            let b = bounds(m);
            let sides = b
                .iter()
                .map(|(e, _)| {
                    if e.0 < k {
                        Side {
                            edge: *e,
                            place: self.mirror_place(e.0),
                        }
                    } else {
                        Side {
                            edge: mirror_diag_edge(e.0 - (k - 1)),
                            place: Isometry::identity(),
                        }
                    }
                })
                .collect();
            let anchor = self.reflections[0].act(&tiles[m].anchor);
            tiles.push(Tile { sides, anchor });
        }
        let cells = CellStructure::new(edges, tiles, TileId(0));
        cells.validate(&self.hol)?;
        Ok(cells)
    }

    /// Canonical strips for a cell structure over this surface: the waist
    /// of a seam is the midpoint between its two cuff-axis feet (both cuff
    /// axes in the adjacent gaps meet the seam perpendicularly), and the
    /// waist of a diagonal arc is the midpoint between its feet on the two
    /// gap axes it runs through.  `widths` must list one width per arc of
    /// `cells`.
    pub fn strips(&self, cells: &CellStructure, widths: &[f64]) -> Result<StripSystem> {
        let k = self.k();
        if widths.len() != cells.edges().len() {
            return Err(Error::InvalidInput(format!(
                "{} widths for {} arcs",
                widths.len(),
                cells.edges().len()
            )));
        }
        let mut strips = Vec::new();
        for (idx, w) in widths.iter().enumerate() {
            let lift = cells.lift(EdgeId(idx));
            let waist = if idx < k {
                // Seam j: feet of gap axes j-1 and j.
                let a = self.cuff_axis((idx + k - 1) % k)?;
                let b = self.cuff_axis(idx)?;
                midpoint(
                    &lift.intersection(&a).ok_or_else(|| {
                        Error::Numerical("cuff axis misses its seam".into())
                    })?,
                    &lift.intersection(&b).ok_or_else(|| {
                        Error::Numerical("cuff axis misses its seam".into())
                    })?,
                )?
            } else if idx < 2 * k - 3 {
                // Diagonal j runs through gaps k-1 and j.
                let j = idx - (k - 1);
                let a = self.cuff_axis(k - 1)?;
                let b = self.cuff_axis(j)?;
                midpoint(
                    &lift.intersection(&a).ok_or_else(|| {
                        Error::Numerical("gap axis misses its diagonal".into())
                    })?,
                    &lift.intersection(&b).ok_or_else(|| {
                        Error::Numerical("gap axis misses its diagonal".into())
                    })?,
                )?
            } else {
                // Mirrored diagonal: mirror the un-mirrored waist.
                let j = idx - (2 * k - 4);
                let a = self.cuff_axis(k - 1)?;
                let b = self.cuff_axis(j)?;
                let base_lift = cells.lift(EdgeId(k - 1 + j));
                let p = midpoint(
                    &base_lift.intersection(&a).ok_or_else(|| {
                        Error::Numerical("gap axis misses its diagonal".into())
                    })?,
                    &base_lift.intersection(&b).ok_or_else(|| {
                        Error::Numerical("gap axis misses its diagonal".into())
                    })?,
                )?;
                self.reflections[0].act(&p)
            };
            strips.push(Strip {
                waist,
                width: *w,
            });
        }
        StripSystem::new(cells, strips)
    }
}

/// Midpoint of two points of the hyperbolic plane.
pub fn midpoint(a: &HPoint, b: &HPoint) -> Result<HPoint> {
    HPoint::from_timelike(&(a.vec() + b.vec()))
}
