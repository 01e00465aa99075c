//! Holonomy representations of a free group into the isometry group of the
//! hyperbolic plane, infinitesimal deformations (cocycles), first variation
//! of translation lengths, and the sampled margin scans behind the two
//! properness criteria:
//!
//! * flat (Minkowski) deformations: the infimum over closed geodesics of
//!   `dlength(u) / length` must be positive;
//! * anti-de Sitter pairs: the infimum over closed geodesics of
//!   `length(second) / length(first)` must exceed 1.
//!
//! Also defines ping-pong witnesses: pairs of disjoint geodesics certifying
//! that a holonomy is a Schottky (free, convex cocompact) representation.

use crate::error::{Error, Result};
use crate::lorentz::{Isometry, MinkVec, OrientedGeodesic};
use crate::words::{conjugacy_classes, FreeWord};
use rayon::prelude::*;

/// A representation of the free group of rank `r`, given by the images of
/// the `r` generators.
#[derive(Debug, Clone)]
pub struct Holonomy {
    gens: Vec<Isometry>,
}

impl Holonomy {
    pub fn new(gens: Vec<Isometry>) -> Holonomy {
        Holonomy { gens }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.gens
    }

    /// Image of a single letter (negative letters map to inverses).
    pub fn letter_image(&self, letter: i32) -> Isometry {
        let idx = letter.unsigned_abs() as usize - 1;
        assert!(idx < self.gens.len(), "letter {letter} out of rank");
        if letter > 0 {
            self.gens[idx]
        } else {
            self.gens[idx].inverse()
        }
    }

    pub fn eval(&self, w: &FreeWord) -> Isometry {
        w.letters()
            .iter()
            .fold(Isometry::identity(), |acc, &l| acc.compose(&self.letter_image(l)))
    }
}

/// An infinitesimal deformation of a holonomy: the map
/// `gamma -> d/dt rho_t(gamma) rho(gamma)^{-1}` valued in Killing vectors,
/// determined by its values on the generators through the rule
/// `u(ab) = u(a) + Ad(rho(a)) u(b)`.
#[derive(Debug, Clone)]
pub struct Cocycle {
    values: Vec<MinkVec>,
}

impl Cocycle {
    pub fn new(values: Vec<MinkVec>) -> Cocycle {
        Cocycle { values }
    }

    pub fn zero(rank: usize) -> Cocycle {
        Cocycle {
            values: vec![MinkVec::ZERO; rank],
        }
    }

    /// The coboundary of a single Killing vector:
    /// `u(gamma) = V - Ad(rho(gamma)) V`.  These are the trivial
    /// deformations (conjugation paths).
    pub fn coboundary(hol: &Holonomy, v: &MinkVec) -> Cocycle {
        Cocycle {
            values: hol
                .generators()
                .iter()
                .map(|g| *v - g.adjoint(v))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn generator_values(&self) -> &[MinkVec] {
        &self.values
    }

    pub fn scale(&self, s: f64) -> Cocycle {
        Cocycle {
            values: self.values.iter().map(|v| *v * s).collect(),
        }
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        assert_eq!(self.values.len(), other.values.len());
        Cocycle {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    /// Value on an arbitrary word via the cocycle rule.
    pub fn eval(&self, hol: &Holonomy, w: &FreeWord) -> MinkVec {
        let mut acc = MinkVec::ZERO;
        let mut place = Isometry::identity();
        for &l in w.letters() {
            let ul = if l > 0 {
                self.values[l as usize - 1]
            } else {
                // u(g^{-1}) = -Ad(rho(g)^{-1}) u(g)
                let ginv = hol.letter_image(l);
                -ginv.adjoint(&self.values[(-l) as usize - 1])
            };
            acc = acc + place.adjoint(&ul);
            place = place.compose(&hol.letter_image(l));
        }
        acc
    }
}

/// First variation of the translation length of `rho(w)` along the
/// deformation `u`, divided by the translation length itself.  This is the
/// properness margin of the flat (Minkowski) deformation at `w`.
pub fn flat_margin_of(hol: &Holonomy, u: &Cocycle, w: &FreeWord) -> Result<f64> {
    let g = hol.eval(w);
    let lam = g.translation_length();
    if lam <= 0.0 {
        return Err(Error::CausalType(format!(
            "flat_margin_of: word {:?} has zero translation length",
            w.letters()
        )));
    }
    Ok(g.dlength(&u.eval(hol, w))? / lam)
}

/// Ratio of translation lengths `length(second(w)) / length(first(w))`,
/// the properness margin of an anti-de Sitter pair at `w` (the pair is
/// proper when the infimum of this ratio exceeds 1).
pub fn ads_margin_of(first: &Holonomy, second: &Holonomy, w: &FreeWord) -> Result<f64> {
    let lam = first.eval(w).translation_length();
    if lam <= 0.0 {
        return Err(Error::CausalType(format!(
            "ads_margin_of: word {:?} has zero translation length",
            w.letters()
        )));
    }
    Ok(second.eval(w).translation_length() / lam)
}

/// Result of a margin scan over conjugacy classes.
#[derive(Debug, Clone)]
pub struct MarginScan {
    /// Number of conjugacy classes scanned.
    pub classes: usize,
    /// Smallest margin found.
    pub min: f64,
    /// A class attaining it (canonical representative).
    pub argmin: FreeWord,
}

fn scan_words<F>(words: Vec<FreeWord>, margin: F) -> Result<MarginScan>
where
    F: Fn(&FreeWord) -> Result<f64> + Sync,
{
    if words.is_empty() {
        return Err(Error::InvalidInput(
            "margin scan over an empty set of classes".into(),
        ));
    }
    let margins: Result<Vec<f64>> = words.par_iter().map(&margin).collect();
    let margins = margins?;
    let (idx, min) = margins
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| words[a.0].cmp(&words[b.0])))
        .expect("nonempty");
    Ok(MarginScan {
        classes: words.len(),
        min,
        argmin: words[idx].clone(),
    })
}

/// Scan `dlength(u)/length` over all conjugacy classes with cyclically
/// reduced representatives of length at most `maxlen`.
pub fn scan_flat_margins(hol: &Holonomy, u: &Cocycle, maxlen: usize) -> Result<MarginScan> {
    if u.rank() != hol.rank() {
        return Err(Error::InvalidInput(format!(
            "cocycle rank {} does not match holonomy rank {}",
            u.rank(),
            hol.rank()
        )));
    }
    scan_words(conjugacy_classes(hol.rank(), maxlen), |w| {
        flat_margin_of(hol, u, w)
    })
}

/// Scan `length(second)/length(first)` over all conjugacy classes with
/// cyclically reduced representatives of length at most `maxlen`.
pub fn scan_ads_margins(
    first: &Holonomy,
    second: &Holonomy,
    maxlen: usize,
) -> Result<MarginScan> {
    if first.rank() != second.rank() {
        return Err(Error::InvalidInput(format!(
            "holonomy ranks differ: {} vs {}",
            first.rank(),
            second.rank()
        )));
    }
    scan_words(conjugacy_classes(first.rank(), maxlen), |w| {
        ads_margin_of(first, second, w)
    })
}

/// One ping-pong pair: `source` and `target` are disjoint geodesics, both
/// oriented with their positive side away from the common fundamental
/// region, such that the generator maps `source` onto `target` carrying the
/// negative (region) side of `source` onto the positive (far) side of
/// `target`.
#[derive(Debug, Clone, Copy)]
pub struct SchottkyPair {
    pub source: OrientedGeodesic,
    pub target: OrientedGeodesic,
}

/// A ping-pong certificate for a holonomy: one [`SchottkyPair`] per
/// generator, all `2r` geodesics pairwise disjoint with disjoint far sides.
#[derive(Debug, Clone)]
pub struct SchottkyWitness {
    pub pairs: Vec<SchottkyPair>,
}

impl SchottkyWitness {
    /// All `2r` geodesics, sources first within each pair.
    pub fn all_walls(&self) -> Vec<OrientedGeodesic> {
        self.pairs
            .iter()
            .flat_map(|p| [p.source, p.target])
            .collect()
    }

    /// Check the ping-pong conditions against a holonomy.
    ///
    /// 1. Every two of the `2r` walls are disjoint with each lying on the
    ///    negative side of the other (`<n1, n2> < -1` for unit normals).
    /// 2. For each generator `g_i`, the image of `source_i` is `target_i`
    ///    with reversed orientation (endpoints swap roles), so `g_i` throws
    ///    the region side of the source beyond the target.
    pub fn validate(&self, hol: &Holonomy) -> Result<()> {
        if self.pairs.len() != hol.rank() {
            return Err(Error::InvalidInput(format!(
                "witness has {} pairs but holonomy has rank {}",
                self.pairs.len(),
                hol.rank()
            )));
        }
        let walls = self.all_walls();
        for i in 0..walls.len() {
            for j in (i + 1)..walls.len() {
                let c = walls[i].unit_normal().inner(&walls[j].unit_normal());
                if c >= -1.0 {
                    return Err(Error::NotPingPong(format!(
                        "walls {i} and {j} are not separated with far sides disjoint \
                         (normal product {c} >= -1)"
                    )));
                }
            }
        }
        for (i, pair) in self.pairs.iter().enumerate() {
            let g = hol.generators()[i];
            let image = pair.source.transform(&g);
            let want = pair.target.reverse();
            let dl = (image.left() - want.left()).euclid_norm_sq();
            let dr = (image.right() - want.right()).euclid_norm_sq();
            if dl > 1e-18 || dr > 1e-18 {
                return Err(Error::NotPingPong(format!(
                    "generator {} does not map its source wall onto its target wall \
                     (endpoint residuals {:.3e}, {:.3e})",
                    i + 1,
                    dl.sqrt(),
                    dr.sqrt()
                )));
            }
        }
        Ok(())
    }
}

/// The ping-pong pair and group element of a translation along `axis` by
/// `length`: walls are the perpendiculars at parameters `-length/2` and
/// `+length/2`, oriented away from the axis midpoint.
pub fn translation_witness(axis: &OrientedGeodesic, length: f64) -> (SchottkyPair, Isometry) {
    let n = axis.unit_normal();
    let tangent_toward_right = |s: f64| n.wedge(&axis.point_param(s).vec());
    let source = OrientedGeodesic::from_normal(&-tangent_toward_right(-length / 2.0))
        .expect("tangent is unit spacelike");
    let target = OrientedGeodesic::from_normal(&tangent_toward_right(length / 2.0))
        .expect("tangent is unit spacelike");
    let g = Isometry::exp_killing(&(n * length));
    (SchottkyPair { source, target }, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{classify_killing, HPoint, KillingClass};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const E1: MinkVec = MinkVec::new(1.0, 0.0, 0.0);
    const E2: MinkVec = MinkVec::new(0.0, 1.0, 0.0);

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn rand_vec(r: &mut ChaCha8Rng, scale: f64) -> MinkVec {
        MinkVec::new(
            r.gen_range(-scale..scale),
            r.gen_range(-scale..scale),
            r.gen_range(-scale..scale),
        )
    }

    fn rand_word(r: &mut ChaCha8Rng, rank: i32, len: usize) -> FreeWord {
        FreeWord::new((0..len).map(|_| {
            let i = r.gen_range(1..=rank);
            if r.gen_bool(0.5) {
                i
            } else {
                -i
            }
        }))
    }

    /// Two hyperbolic translations along the two coordinate axes, far
    /// enough to play ping-pong.
    fn standard_group(length: f64) -> (Holonomy, SchottkyWitness) {
        let axis1 = OrientedGeodesic::from_normal(&E2).unwrap();
        let axis2 = OrientedGeodesic::from_normal(&E1).unwrap();
        let (p1, g1) = translation_witness(&axis1, length);
        let (p2, g2) = translation_witness(&axis2, length);
        (Holonomy::new(vec![g1, g2]), SchottkyWitness { pairs: vec![p1, p2] })
    }

    fn rand_cocycle(r: &mut ChaCha8Rng, rank: usize) -> Cocycle {
        Cocycle::new((0..rank).map(|_| rand_vec(r, 1.0)).collect())
    }

    #[test]
    fn eval_is_a_homomorphism() {
        let (hol, _) = standard_group(2.5);
        let mut r = rng(1);
        for _ in 0..100 {
            let w1 = rand_word(&mut r, 2, 8);
            let w2 = rand_word(&mut r, 2, 8);
            let lhs = hol.eval(&w1.concat(&w2));
            let rhs = hol.eval(&w1).compose(&hol.eval(&w2));
            assert!(lhs.proj_dist(&rhs) < 1e-8 * (1.0 + rhs.matrix().abs().max()));
        }
    }

    #[test]
    fn cocycle_rule_on_products_and_inverses() {
        let (hol, _) = standard_group(2.5);
        let mut r = rng(2);
        for _ in 0..100 {
            let u = rand_cocycle(&mut r, 2);
            let w1 = rand_word(&mut r, 2, 6);
            let w2 = rand_word(&mut r, 2, 6);
            let lhs = u.eval(&hol, &w1.concat(&w2));
            let rhs = u.eval(&hol, &w1) + hol.eval(&w1).adjoint(&u.eval(&hol, &w2));
            let scale = 1.0 + rhs.euclid_norm_sq().sqrt();
            assert!((lhs - rhs).euclid_norm_sq().sqrt() < 1e-8 * scale);

            let winv = w1.inverse();
            let lhs_inv = u.eval(&hol, &winv);
            let rhs_inv = -hol.eval(&winv).adjoint(&u.eval(&hol, &w1));
            assert!((lhs_inv - rhs_inv).euclid_norm_sq().sqrt() < 1e-8 * scale);
        }
    }

    #[test]
    fn coboundary_has_closed_form_and_zero_margin() {
        let (hol, _) = standard_group(2.5);
        let mut r = rng(3);
        for _ in 0..50 {
            let v = rand_vec(&mut r, 1.5);
            let u = Cocycle::coboundary(&hol, &v);
            let w = rand_word(&mut r, 2, 8);
            if w.is_empty() {
                continue;
            }
            // Closed form u(w) = V - Ad(rho(w)) V.  The letterwise
            // evaluation passes through intermediate vectors as large as
            // the conjugation stretch factor, so tolerate rounding
            // proportional to the squared magnitude of the result.
            let expect = v - hol.eval(&w).adjoint(&v);
            let got = u.eval(&hol, &w);
            let cond = 1.0 + expect.euclid_norm_sq();
            assert!((got - expect).euclid_norm_sq().sqrt() < 1e-11 * cond);
            // Trivial deformations do not change any length to first order.
            let m = flat_margin_of(&hol, &u, &w).unwrap();
            assert!(m.abs() < 1e-7, "coboundary margin {m} should vanish");
        }
    }

    /// The margin is a class function; the scan relies on this through its
    /// use of one canonical representative per conjugacy class.  The
    /// numerically meaningful form of the statement is invariance under
    /// *rotations* of a cyclically reduced word (single-letter
    /// conjugators): long conjugators amplify rounding by the square of
    /// the conjugation stretch factor, drowning the comparison — exactly
    /// why the scan never evaluates non-cyclically-reduced words.
    #[test]
    fn margins_are_rotation_invariant() {
        let (hol, _) = standard_group(2.5);
        let mut r = rng(4);
        let mut checked = 0;
        for _ in 0..80 {
            let u = rand_cocycle(&mut r, 2);
            let (core, _) = rand_word(&mut r, 2, 5).cyclic_reduce();
            if core.is_empty() {
                continue;
            }
            let letters = core.letters().to_vec();
            let margins: Vec<f64> = (0..letters.len())
                .map(|k| {
                    let rot = FreeWord::new(
                        letters[k..].iter().chain(letters[..k].iter()).copied(),
                    );
                    flat_margin_of(&hol, &u, &rot).unwrap()
                })
                .collect();
            let spread = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - margins.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                spread < 1e-7 * (1.0 + margins[0].abs()),
                "margin not rotation invariant: {margins:?}"
            );
            checked += 1;
        }
        assert!(checked > 40);
    }

    #[test]
    fn stretch_deformation_has_unit_margin_on_generators() {
        let (hol, _) = standard_group(6.0);
        // u(g_i) = log(g_i): differentiates rho_t(g_i) = exp((1+t) log g_i).
        let u = Cocycle::new(
            hol.generators()
                .iter()
                .map(|g| g.log_killing().unwrap())
                .collect(),
        );
        for i in 1..=2 {
            let m = flat_margin_of(&hol, &u, &FreeWord::generator(i)).unwrap();
            assert!((m - 1.0).abs() < 1e-9);
        }
        // Scan runs and is deterministic.
        let s1 = scan_flat_margins(&hol, &u, 4).unwrap();
        let s2 = scan_flat_margins(&hol, &u, 4).unwrap();
        assert_eq!(s1.min.to_bits(), s2.min.to_bits());
        assert_eq!(s1.argmin, s2.argmin);
        assert_eq!(s1.classes, conjugacy_classes(2, 4).len());
    }

    #[test]
    fn ads_margin_of_stretched_copy() {
        let (rho, _) = standard_group(6.0);
        let second = Holonomy::new(
            rho.generators()
                .iter()
                .map(|g| g.pow_hyperbolic(1.25).unwrap())
                .collect(),
        );
        for i in 1..=2 {
            let m = ads_margin_of(&rho, &second, &FreeWord::generator(i)).unwrap();
            assert!((m - 1.25).abs() < 1e-9);
        }
        let scan = scan_ads_margins(&rho, &second, 4).unwrap();
        assert!(scan.classes > 0);
        assert!(scan.min > 0.0);
    }

    #[test]
    fn margin_errors_on_identity_word() {
        let (hol, _) = standard_group(6.0);
        let u = Cocycle::zero(2);
        assert!(flat_margin_of(&hol, &u, &FreeWord::identity()).is_err());
    }

    #[test]
    fn translation_witness_validates() {
        let (hol, witness) = standard_group(6.0);
        witness.validate(&hol).unwrap();
        // Geometry of the walls: perpendicular to the axis, at half-length,
        // oriented away from the midpoint.
        let axis = OrientedGeodesic::from_normal(&E2).unwrap();
        let (pair, g) = translation_witness(&axis, 6.0);
        assert!(g.is_hyperbolic());
        assert!((g.translation_length() - 6.0).abs() < 1e-12);
        match classify_killing(&g.log_killing().unwrap()) {
            KillingClass::Hyperbolic { attract, .. } => {
                // The attracting endpoint of the generator is past the
                // target wall: on its positive side.
                assert!(attract.inner(&pair.target.unit_normal()) > 0.0);
            }
            _ => panic!("translation is hyperbolic"),
        }
        for wall in [pair.source, pair.target] {
            let foot = wall.intersection(&axis).unwrap();
            assert!((foot.dist(&HPoint::ORIGIN) - 3.0).abs() < 1e-9);
            assert!(
                (wall.crossing_angle(&axis).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9
            );
            // Midpoint of the axis is on the negative side of each wall.
            assert!(wall.side_of(&HPoint::ORIGIN) < 0.0);
        }
    }

    #[test]
    fn overlapping_walls_fail_validation() {
        // Length 1 puts the four perpendicular walls close to the origin
        // where they cross each other.
        let (hol, witness) = standard_group(1.0);
        match witness.validate(&hol) {
            Err(Error::NotPingPong(_)) => {}
            other => panic!("expected ping-pong failure, got {other:?}"),
        }
        // Wrong holonomy order also fails (walls don't match generators).
        let (hol6, witness6) = standard_group(6.0);
        let swapped = Holonomy::new(vec![hol6.generators()[1], hol6.generators()[0]]);
        assert!(witness6.validate(&swapped).is_err());
    }
}
