//! Ray geometry for corridors and open areas.
//!
//! Reflected rays are built with the image method: the transmitter is
//! mirrored across each reflecting plane and the ray length is the straight
//! distance from the image to the receiver. Images are kept in an exact
//! lattice form (sign and integer shift per axis), so mirroring twice across
//! the same plane recovers the parent position bit for bit.

mod scenario;

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

pub use scenario::{
    Environment, LinkPolarization, Scenario, SurfaceMaterials, DEFAULT_RESOLUTION_M,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Surface {
    Ground,
    Ceiling,
    LeftWall,
    RightWall,
}

impl Surface {
    pub const ALL: [Surface; 4] = [
        Surface::Ground,
        Surface::Ceiling,
        Surface::LeftWall,
        Surface::RightWall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Surface::Ground => "ground",
            Surface::Ceiling => "ceiling",
            Surface::LeftWall => "left_wall",
            Surface::RightWall => "right_wall",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Surface::ALL.into_iter().find(|s| s.name() == name)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    fn axis(self) -> Axis {
        match self {
            Surface::Ground | Surface::Ceiling => Axis::Vertical,
            Surface::LeftWall | Surface::RightWall => Axis::Lateral,
        }
    }

    /// Plane position in units of the corridor extent along its axis.
    fn plane_index(self) -> i32 {
        match self {
            Surface::Ground | Surface::LeftWall => 0,
            Surface::Ceiling | Surface::RightWall => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Lateral,
    Vertical,
}

/// Ray direction in an antenna's frame: polar angle from zenith and azimuth
/// from boresight, radians. `theta = pi/2, phi = 0` is boresight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub const BORESIGHT: Direction = Direction {
        theta: FRAC_PI_2,
        phi: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounce {
    pub surface: Surface,
    /// Angle between the incoming ray and the surface, radians.
    pub grazing_angle: f64,
}

/// One specular propagation path from transmitter to receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    /// Reflections in the order the wave meets them; empty for LoS.
    pub bounces: Vec<Bounce>,
    pub length: f64,
    /// Direction of departure in the transmitter frame (boresight `+x`).
    pub departure: Direction,
    /// Direction the ray arrives from, in the receiver frame (boresight `-x`).
    pub arrival: Direction,
}

impl Ray {
    pub fn order(&self) -> usize {
        self.bounces.len()
    }

    pub fn is_los(&self) -> bool {
        self.bounces.is_empty()
    }

    /// Reflecting surface of a single-bounce ray.
    pub fn surface(&self) -> Option<Surface> {
        match self.bounces.as_slice() {
            [b] => Some(b.surface),
            _ => None,
        }
    }

    /// Grazing angle of a single-bounce ray.
    pub fn grazing_angle(&self) -> Option<f64> {
        match self.bounces.as_slice() {
            [b] => Some(b.grazing_angle),
            _ => None,
        }
    }

    pub fn delay(&self) -> f64 {
        self.length / crate::units::SPEED_OF_LIGHT
    }
}

/// Image coordinate along one axis: `sign * base + 2 * shift * extent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisImage {
    sign: i8,
    shift: i32,
}

impl AxisImage {
    pub const IDENTITY: AxisImage = AxisImage { sign: 1, shift: 0 };

    /// Mirror across the plane at `plane_index * extent`.
    fn mirrored(self, plane_index: i32) -> AxisImage {
        AxisImage {
            sign: -self.sign,
            shift: plane_index - self.shift,
        }
    }

    fn coordinate(self, base: f64, extent: f64) -> f64 {
        f64::from(self.sign) * base + 2.0 * f64::from(self.shift) * extent
    }
}

/// Transmitter image in exact lattice form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ImagePoint {
    lateral: AxisImage,
    vertical: AxisImage,
}

impl ImagePoint {
    pub const SOURCE: ImagePoint = ImagePoint {
        lateral: AxisImage::IDENTITY,
        vertical: AxisImage::IDENTITY,
    };

    pub fn mirrored(self, surface: Surface) -> ImagePoint {
        let plane = surface.plane_index();
        match surface.axis() {
            Axis::Lateral => ImagePoint {
                lateral: self.lateral.mirrored(plane),
                ..self
            },
            Axis::Vertical => ImagePoint {
                vertical: self.vertical.mirrored(plane),
                ..self
            },
        }
    }

    /// Cartesian position `[x, y, z]` of the image for a scenario.
    pub fn position(self, scenario: &Scenario) -> [f64; 3] {
        let (width, height) = extents(scenario);
        [
            0.0,
            self.lateral.coordinate(scenario.lateral_position(), width),
            self.vertical.coordinate(scenario.tx_height, height),
        ]
    }
}

fn extents(scenario: &Scenario) -> (f64, f64) {
    match scenario.environment {
        Environment::Corridor { width, height, .. } => (width, height),
        // Only the ground plane (index 0) exists, so extents never enter.
        Environment::OpenArea => (0.0, 0.0),
    }
}

/// Receiver position for link distance `d`.
pub fn receiver_position(scenario: &Scenario, d: f64) -> [f64; 3] {
    [d, scenario.lateral_position(), scenario.rx_height]
}

/// Traces the path from an image to the receiver at distance `d`.
///
/// The bounce sequence is recovered by walking the unfolded straight line
/// from the image to the receiver and listing the lattice planes it crosses;
/// the crossing nearest the image is the first reflection.
pub(crate) fn trace_image(scenario: &Scenario, image: ImagePoint, d: f64) -> Ray {
    let source = image.position(scenario);
    let rx = receiver_position(scenario, d);
    let delta = [rx[0] - source[0], rx[1] - source[1], rx[2] - source[2]];
    let length = libm::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);

    let (width, height) = extents(scenario);
    let mut crossings: Vec<(f64, Surface)> = Vec::new();
    collect_crossings(
        source[2],
        rx[2],
        height,
        Surface::Ground,
        Surface::Ceiling,
        &mut crossings,
    );
    if scenario.environment.is_corridor() {
        collect_crossings(
            source[1],
            rx[1],
            width,
            Surface::LeftWall,
            Surface::RightWall,
            &mut crossings,
        );
    }
    // Stable sort keeps vertical crossings first on exact ties (edges).
    crossings.sort_by(|a, b| a.0.total_cmp(&b.0));

    let vertical_angle = libm::atan2(libm::fabs(delta[2]), libm::hypot(delta[0], delta[1]));
    let lateral_angle = libm::atan2(libm::fabs(delta[1]), libm::hypot(delta[0], delta[2]));
    let bounces: Vec<Bounce> = crossings
        .iter()
        .map(|&(_, surface)| Bounce {
            surface,
            grazing_angle: match surface.axis() {
                Axis::Vertical => vertical_angle,
                Axis::Lateral => lateral_angle,
            },
        })
        .collect();

    // Every reflection flips the direction component normal to its plane.
    let flips = |axis| bounces.iter().filter(|b| b.surface.axis() == axis).count() % 2 == 1;
    let dep_y = if flips(Axis::Lateral) {
        -delta[1]
    } else {
        delta[1]
    };
    let dep_z = if flips(Axis::Vertical) {
        -delta[2]
    } else {
        delta[2]
    };
    let departure = Direction {
        theta: libm::atan2(libm::hypot(delta[0], dep_y), dep_z),
        phi: libm::atan2(dep_y, delta[0]),
    };
    // Receiver frame is the global frame turned by pi about z; the arrival
    // vector points back along the last segment (-delta).
    let arrival = Direction {
        theta: libm::atan2(libm::hypot(delta[0], delta[1]), -delta[2]),
        phi: libm::atan2(delta[1], delta[0]),
    };

    Ray {
        bounces,
        length,
        departure,
        arrival,
    }
}

/// Lattice planes `m * extent` strictly between `from` and `to`, keyed by
/// the line parameter `t` in `(0, 1)`. Even planes are images of the lower
/// surface, odd planes of the upper one.
fn collect_crossings(
    from: f64,
    to: f64,
    extent: f64,
    lower: Surface,
    upper: Surface,
    out: &mut Vec<(f64, Surface)>,
) {
    if from == to {
        return;
    }
    if extent == 0.0 {
        // Single plane at 0 (open area ground).
        if (from < 0.0) != (to < 0.0) {
            out.push(((0.0 - from) / (to - from), lower));
        }
        return;
    }
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let first = libm::floor(lo / extent) as i64 + 1;
    let last = libm::ceil(hi / extent) as i64 - 1;
    for m in first..=last {
        let plane = m as f64 * extent;
        if plane <= lo || plane >= hi {
            continue;
        }
        let surface = if m.rem_euclid(2) == 0 { lower } else { upper };
        out.push(((plane - from) / (to - from), surface));
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("link distance must be positive and finite"))
    }
}

/// LoS ray plus one single-bounce ray per surface of the environment, in
/// the order LoS, ground, ceiling, left wall, right wall.
pub fn trace_first_order(scenario: &Scenario, d: f64) -> Result<Vec<Ray>> {
    check_distance(d)?;
    scenario.validate()?;
    let mut rays = Vec::with_capacity(1 + scenario.environment.surfaces().len());
    rays.push(trace_image(scenario, ImagePoint::SOURCE, d));
    for &surface in scenario.environment.surfaces() {
        rays.push(trace_image(
            scenario,
            ImagePoint::SOURCE.mirrored(surface),
            d,
        ));
    }
    Ok(rays)
}

/// Extra distance a ray travels compared with the link distance `d`.
pub fn excess_path(ray: &Ray, d: f64) -> f64 {
    ray.length - d
}

/// Outcome of the resolvability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolvability {
    /// The ray separates from LoS by more than the resolution only for link
    /// distances below this value.
    Until(f64),
    /// The path difference never exceeds the resolution.
    Never,
}

impl Resolvability {
    /// Limit distance, zero when the ray is never resolvable.
    pub fn distance(self) -> f64 {
        match self {
            Resolvability::Until(d) => d,
            Resolvability::Never => 0.0,
        }
    }
}

/// Link distance beyond which a reflected ray with mirror separation
/// `height_sum` merges with LoS for a sounder resolving `d_res` metres.
///
/// Solves `sqrt(height_sum^2 + d^2) - d = d_res`, giving
/// `d = (height_sum^2 - d_res^2) / (2 d_res)`.
pub fn resolvability_limit(height_sum: f64, d_res: f64) -> Result<Resolvability> {
    if !(d_res > 0.0 && d_res.is_finite()) || !(height_sum > 0.0 && height_sum.is_finite()) {
        return Err(Error::invalid("separation and resolution must be positive"));
    }
    if height_sum <= d_res {
        return Ok(Resolvability::Never);
    }
    Ok(Resolvability::Until(
        (height_sum * height_sum - d_res * d_res) / (2.0 * d_res),
    ))
}

/// Resolvability limit of every single-bounce ray of a scenario.
pub fn resolvability_table(scenario: &Scenario) -> Result<Vec<(Surface, Resolvability)>> {
    scenario
        .environment
        .surfaces()
        .iter()
        .map(|&s| {
            Ok((
                s,
                resolvability_limit(scenario.mirror_separation(s)?, scenario.resolution_m)?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Shortest path via a point on an axis-aligned plane, found by nested
    /// golden-section search (Fermat's principle). Returns (length, point).
    fn fermat_reflection(tx: [f64; 3], rx: [f64; 3], axis: usize, plane: f64) -> (f64, [f64; 3]) {
        let free: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
        let dist = |p: [f64; 3], q: [f64; 3]| {
            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
        };
        let point = |u: f64, v: f64| {
            let mut p = [0.0; 3];
            p[axis] = plane;
            p[free[0]] = u;
            p[free[1]] = v;
            p
        };
        let golden = |f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64| {
            let r = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..200 {
                let c = b - r * (b - a);
                let d = a + r * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            0.5 * (a + b)
        };
        let span = |i: usize| {
            let lo = tx[i].min(rx[i]) - 1.0;
            let hi = tx[i].max(rx[i]) + 1.0;
            (lo, hi)
        };
        let (u0, u1) = span(free[0]);
        let (v0, v1) = span(free[1]);
        let best_v = |u: f64| golden(&|v| dist(tx, point(u, v)) + dist(point(u, v), rx), v0, v1);
        let u = golden(
            &|u| {
                let v = best_v(u);
                dist(tx, point(u, v)) + dist(point(u, v), rx)
            },
            u0,
            u1,
        );
        let v = best_v(u);
        let p = point(u, v);
        (dist(tx, p) + dist(p, rx), p)
    }

    fn surface_plane(s: &Scenario, surface: Surface) -> (usize, f64) {
        let (w, h) = extents(s);
        match surface {
            Surface::Ground => (2, 0.0),
            Surface::Ceiling => (2, h),
            Surface::LeftWall => (1, 0.0),
            Surface::RightWall => (1, w),
        }
    }

    #[test]
    fn ground_ray_example() {
        let s = Scenario::indoor_reference();
        let rays = trace_first_order(&s, 10.0).unwrap();
        assert_eq!(rays.len(), 5);
        let ground = &rays[1];
        assert_eq!(ground.surface(), Some(Surface::Ground));
        assert!((ground.length - (100.0f64 + 2.88 * 2.88).sqrt()).abs() < 1e-12);
        assert!((ground.length - 10.4065).abs() < 5e-5);
        let psi = ground.grazing_angle().unwrap();
        assert!((psi - (2.88f64 / 10.0).atan()).abs() < 1e-12);
        assert!((psi.to_degrees() - 16.07).abs() < 5e-3);
        assert!((excess_path(ground, 10.0) - 0.4065).abs() < 5e-5);
    }

    #[test]
    fn first_order_ordering_and_los() {
        let s = Scenario::indoor_reference();
        let rays = trace_first_order(&s, 7.3).unwrap();
        let surfaces: Vec<_> = rays.iter().map(|r| r.surface()).collect();
        assert_eq!(
            surfaces,
            [
                None,
                Some(Surface::Ground),
                Some(Surface::Ceiling),
                Some(Surface::LeftWall),
                Some(Surface::RightWall)
            ]
        );
        let los = &rays[0];
        assert!(los.is_los());
        assert_eq!(los.order(), 0);
        assert_eq!(los.grazing_angle(), None);
        assert_eq!(los.length, 7.3);
        assert_eq!(excess_path(los, 7.3), 0.0);
        assert_eq!(los.departure, Direction::BORESIGHT);
        assert_eq!(los.arrival, Direction::BORESIGHT);
    }

    #[test]
    fn open_area_has_two_rays() {
        let s = Scenario::outdoor_reference();
        let rays = trace_first_order(&s, 100.0).unwrap();
        assert_eq!(rays.len(), 2);
        assert!(rays[0].is_los());
        assert_eq!(rays[1].surface(), Some(Surface::Ground));
        assert!((rays[1].length - (100.0f64.powi(2) + 2.18f64.powi(2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_errors() {
        let s = Scenario::indoor_reference();
        assert!(matches!(
            trace_first_order(&s, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(trace_first_order(&s, -1.0).is_err());
        let mut s = Scenario::indoor_reference();
        s.materials = SurfaceMaterials::default().with(
            Surface::Ground,
            crate::reflection::material_db()
                .get("concrete")
                .unwrap()
                .clone(),
        );
        assert!(matches!(trace_first_order(&s, 5.0), Err(Error::Config(_))));
    }

    #[test]
    fn angles_of_reflected_rays() {
        let s = Scenario::indoor_reference();
        let rays = trace_first_order(&s, 10.0).unwrap();
        let ground = &rays[1];
        // Departs downwards, arrives from below, both on the link plane.
        assert!(ground.departure.theta > FRAC_PI_2);
        assert!(ground.arrival.theta > FRAC_PI_2);
        assert!(
            (ground.departure.theta - FRAC_PI_2 - ground.grazing_angle().unwrap()).abs() < 1e-12
        );
        assert_eq!(ground.departure.phi, 0.0);
        let ceiling = &rays[2];
        assert!(ceiling.departure.theta < FRAC_PI_2);
        assert!(ceiling.arrival.theta < FRAC_PI_2);
        let left = &rays[3];
        let right = &rays[4];
        // Left wall: leaves towards -y, arrives from -y; right wall mirrored.
        assert!(left.departure.phi < 0.0);
        assert!(right.departure.phi > 0.0);
        assert!((left.departure.phi + right.departure.phi).abs() < 1e-12);
        assert!((left.departure.phi.abs() - left.grazing_angle().unwrap()).abs() < 1e-12);
        // In the receiver frame the left-wall ray arrives from the receiver's right.
        assert!(left.arrival.phi > 0.0);
        for r in &rays {
            for dir in [r.departure, r.arrival] {
                assert!((0.0..=core::f64::consts::PI).contains(&dir.theta));
                assert!((-core::f64::consts::PI..=core::f64::consts::PI).contains(&dir.phi));
            }
        }
    }

    #[test]
    fn first_order_matches_fermat_search() {
        let s = Scenario::indoor_reference();
        for d in [1.9, 5.0, 10.0, 39.7] {
            let rays = trace_first_order(&s, d).unwrap();
            let tx = ImagePoint::SOURCE.position(&s);
            let rx = receiver_position(&s, d);
            for ray in &rays[1..] {
                let surface = ray.surface().unwrap();
                let (axis, plane) = surface_plane(&s, surface);
                let (len, p) = fermat_reflection(tx, rx, axis, plane);
                assert!((ray.length - len).abs() <= 1e-9 * len, "{surface:?} {d}");
                // Grazing angle from the numerically found reflection point.
                let seg = [rx[0] - p[0], rx[1] - p[1], rx[2] - p[2]];
                let norm = (seg[0].powi(2) + seg[1].powi(2) + seg[2].powi(2)).sqrt();
                let psi = (seg[axis].abs() / norm).asin();
                assert!((ray.grazing_angle().unwrap() - psi).abs() < 1e-6);
                // Closed form: length^2 = d^2 + separation^2.
                let sep = s.mirror_separation(surface).unwrap();
                assert!(
                    (ray.length.powi(2) - (d * d + sep * sep)).abs() <= 1e-12 * ray.length.powi(2)
                );
            }
        }
    }

    #[test]
    fn resolvability_examples() {
        let ground = resolvability_limit(2.88, 0.585).unwrap().distance();
        assert!((ground - (2.88f64.powi(2) - 0.585f64.powi(2)) / 1.17).abs() < 1e-12);
        assert!((ground - 6.80).abs() < 5e-3);
        let walls = resolvability_limit(2.48, 0.585).unwrap().distance();
        assert!((walls - 4.96).abs() < 5e-3);
        assert_eq!(
            resolvability_limit(0.585, 0.585).unwrap(),
            Resolvability::Never
        );
        assert_eq!(resolvability_limit(0.585, 0.585).unwrap().distance(), 0.0);
        assert!(resolvability_limit(1.0, 0.0).is_err());
    }

    #[test]
    fn ceiling_resolvability_from_geometry() {
        let table = resolvability_table(&Scenario::indoor_reference()).unwrap();
        let ceiling = table
            .iter()
            .find(|(s, _)| *s == Surface::Ceiling)
            .unwrap()
            .1;
        assert!((ceiling.distance() - 2.4767).abs() < 1e-4);
    }

    #[test]
    fn mirrored_twice_is_identity() {
        for s in Surface::ALL {
            let p = ImagePoint::SOURCE.mirrored(Surface::Ground).mirrored(s);
            assert_eq!(p.mirrored(s), ImagePoint::SOURCE.mirrored(Surface::Ground));
        }
    }

    proptest! {
        #[test]
        fn excess_path_decreasing(sep in 0.1f64..5.0, d1 in 0.1f64..200.0, gap in 1e-3f64..50.0) {
            let f = |d: f64| (sep * sep + d * d).sqrt() - d;
            prop_assert!(f(d1 + gap) < f(d1));
        }

        #[test]
        fn excess_path_decreasing_on_traced_rays(d1 in 0.5f64..100.0, gap in 1e-2f64..20.0) {
            let s = Scenario::indoor_reference();
            let a = trace_first_order(&s, d1).unwrap();
            let b = trace_first_order(&s, d1 + gap).unwrap();
            for (ra, rb) in a.iter().zip(&b).skip(1) {
                prop_assert!(excess_path(rb, d1 + gap) < excess_path(ra, d1));
                prop_assert!(ra.length > d1);
                let psi = ra.grazing_angle().unwrap();
                prop_assert!(psi > 0.0 && psi < FRAC_PI_2);
            }
        }

        #[test]
        fn resolvability_round_trip(d_res in 0.01f64..2.0, extra in 0.01f64..5.0) {
            let sep = d_res + extra;
            let d = resolvability_limit(sep, d_res).unwrap().distance();
            let back = (sep * sep + d * d).sqrt() - d;
            prop_assert!((back - d_res).abs() < 1e-9);
        }
    }
}
