//! Validated covers of Hamiltonian ovals.
//!
//! For a level value `h`, the oval `Γ_h` (a compact component of `H = h`) is
//! first enclosed in a trapping box, which is then split adaptively: boxes
//! certified below the level are `inside`, boxes certified above are dropped,
//! and boxes straddling the level are either resolved by the
//! change-of-variables tube construction (`on`) or, once smaller than
//! `minsize`, kept as `fail` with their full uncertainty.
//!
//! An `on` box is cut into five pieces: two axis-aligned boxes, two right
//! triangles, and a thin parallelepiped that provably contains the oval
//! segment crossing the box. The parallelepiped is validated by three checks:
//! the four displaced corner points straddle the oval (corner signs), the two
//! chords bounding it avoid the oval (no crossing), and the oval stays off
//! the remaining two box sides (no turning back). The chord separation starts
//! at `minsize/10` and is halved as long as all three checks keep passing.
//!
//! Side convention: sides are Left, Right, Bottom, Top, each parametrized
//! from its lexicographically smaller corner (Left/Right run with y,
//! Bottom/Top run with x).

use crate::interval::{Interval, SignClass};
use crate::newton::{self, NewtonError};
use crate::poly::{BivarPoly, Point2, Segment, Var};

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Box2 {
    pub x: Interval,
    pub y: Interval,
}

impl Box2 {
    pub fn new(x: Interval, y: Interval) -> Box2 {
        Box2 { x, y }
    }

    /// Largest side length (non-rigorous, drives recursion control).
    pub fn size(&self) -> f64 {
        self.x.width().max(self.y.width())
    }

    pub fn midpoint(&self) -> Point2 {
        Point2::new(self.x.midpoint(), self.y.midpoint())
    }

    pub fn contains_point(&self, p: Point2) -> bool {
        self.x.contains(p.x) && self.y.contains(p.y)
    }

    pub fn touches(&self, other: &Box2) -> bool {
        self.x.intersect(&other.x).is_some() && self.y.intersect(&other.y).is_some()
    }

    pub fn area_interval(&self) -> Interval {
        let w = Interval::point(self.x.hi()).sub(&Interval::point(self.x.lo()));
        let h = Interval::point(self.y.hi()).sub(&Interval::point(self.y.lo()));
        w.mul(&h)
    }

    /// Four congruent quadrants, in SW, SE, NW, NE order.
    pub fn quadrants(&self) -> [Box2; 4] {
        let mx = self.x.midpoint();
        let my = self.y.midpoint();
        let (xl, xr) = (
            Interval::new(self.x.lo(), mx),
            Interval::new(mx, self.x.hi()),
        );
        let (yb, yt) = (
            Interval::new(self.y.lo(), my),
            Interval::new(my, self.y.hi()),
        );
        [
            Box2::new(xl, yb),
            Box2::new(xr, yb),
            Box2::new(xl, yt),
            Box2::new(xr, yt),
        ]
    }

    fn sort_key(&self) -> [f64; 4] {
        [self.x.lo(), self.y.lo(), self.x.hi(), self.y.hi()]
    }
}

/// Classification outcome of a subdivision box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxLabel {
    Inside,
    Outside,
    On,
    Fail,
}

/// Triangle; may be degenerate (collinear), in which case its area interval
/// contains zero and it contributes nothing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub v: [Point2; 3],
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Triangle {
        Triangle { v: [a, b, c] }
    }

    /// Enclosure of the area via the cross-product formula.
    pub fn area_interval(&self) -> Interval {
        let ax = Interval::point(self.v[0].x);
        let ay = Interval::point(self.v[0].y);
        let ux = Interval::point(self.v[1].x).sub(&ax);
        let uy = Interval::point(self.v[1].y).sub(&ay);
        let wx = Interval::point(self.v[2].x).sub(&ax);
        let wy = Interval::point(self.v[2].y).sub(&ay);
        let cross = ux.mul(&wy).sub(&wx.mul(&uy));
        cross.abs().scale(0.5)
    }

    /// Axis-aligned bounding box.
    pub fn hull_box(&self) -> Box2 {
        let xs = [self.v[0].x, self.v[1].x, self.v[2].x];
        let ys = [self.v[0].y, self.v[1].y, self.v[2].y];
        Box2::new(
            Interval::new(min3(xs), max3(xs)),
            Interval::new(min3(ys), max3(ys)),
        )
    }

    pub fn centroid(&self) -> Point2 {
        Point2::new(
            (self.v[0].x + self.v[1].x + self.v[2].x) / 3.0,
            (self.v[0].y + self.v[1].y + self.v[2].y) / 3.0,
        )
    }
}

fn min3(v: [f64; 3]) -> f64 {
    v[0].min(v[1]).min(v[2])
}

fn max3(v: [f64; 3]) -> f64 {
    v[0].max(v[1]).max(v[2])
}

/// The tube piece: a simple quadrilateral, vertices in perimeter order,
/// certified to contain the oval segment crossing its parent box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parallelepiped {
    pub v: [Point2; 4],
}

impl Parallelepiped {
    /// Enclosure of the area via the shoelace formula; vertices must be in
    /// perimeter order of a simple polygon, which the tube construction
    /// guarantees.
    pub fn area_interval(&self) -> Interval {
        let mut acc = Interval::ZERO;
        for k in 0..4 {
            let (p, q) = (self.v[k], self.v[(k + 1) % 4]);
            let term = Interval::point(p.x)
                .mul(&Interval::point(q.y))
                .sub(&Interval::point(q.x).mul(&Interval::point(p.y)));
            acc = acc.add(&term);
        }
        acc.abs().scale(0.5)
    }

    pub fn hull_box(&self) -> Box2 {
        let xs: Vec<f64> = self.v.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = self.v.iter().map(|p| p.y).collect();
        let fold = |vals: &[f64]| {
            (
                vals.iter().copied().fold(f64::INFINITY, f64::min),
                vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let (xlo, xhi) = fold(&xs);
        let (ylo, yhi) = fold(&ys);
        Box2::new(Interval::new(xlo, xhi), Interval::new(ylo, yhi))
    }

    /// Contains test with tolerance, for oracle-style checks. The quad is
    /// convex in practice but the test only assumes a simple polygon.
    pub fn contains_point_eps(&self, p: Point2, eps: f64) -> bool {
        // Winding-free test: p is inside iff it is on the inner side of every
        // edge for one of the two orientations.
        let mut pos = true;
        let mut neg = true;
        for k in 0..4 {
            let a = self.v[k];
            let b = self.v[(k + 1) % 4];
            let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
            let scale = ((b.x - a.x).abs() + (b.y - a.y).abs()).max(1e-300);
            if cross < -eps * scale {
                pos = false;
            }
            if cross > eps * scale {
                neg = false;
            }
        }
        pos || neg
    }
}

/// A decomposition sub-piece with its certified side of the oval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledPiece<T> {
    pub shape: T,
    pub inside: bool,
}

/// Five-way split of an `on` box: two axis-aligned boxes, two triangles, and
/// the tube. For opposite-side crossings the boxes sit on opposite sides of
/// the tube; for adjacent-side crossings both boxes are on the far side of
/// the cut-off corner.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub parent: Box2,
    pub box_l: LabeledPiece<Box2>,
    pub box_u: LabeledPiece<Box2>,
    pub tri_l: LabeledPiece<Triangle>,
    pub tri_u: LabeledPiece<Triangle>,
    pub tube: Parallelepiped,
}

impl Decomposition {
    pub fn boxes(&self) -> [&LabeledPiece<Box2>; 2] {
        [&self.box_l, &self.box_u]
    }

    pub fn triangles(&self) -> [&LabeledPiece<Triangle>; 2] {
        [&self.tri_l, &self.tri_u]
    }
}

/// Why a straddling box could not be resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TubeFail {
    /// Gradient at the midpoint too small relative to the box.
    NearCritical,
    /// The transversal ray hit a corner or side identification failed.
    Geometry,
    /// Root certification on a crossed side failed.
    Newton,
    /// Conditions failed at the initial chord separation.
    Conditions,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CoverStats {
    pub inside_boxes: usize,
    pub inside_triangles: usize,
    pub on_pieces: usize,
    pub fail_boxes: usize,
    pub outside_dropped: usize,
    pub fail_near_critical: usize,
    pub fail_geometry: usize,
    pub fail_newton: usize,
    pub fail_conditions: usize,
    /// Certified-inside pieces discarded because they were not connected to
    /// the seed component (normally zero).
    pub pruned_pieces: usize,
    /// Set when the seed could not be located in any inside piece while
    /// several inside components exist; no pruning is done in that case.
    pub pruning_ambiguous: bool,
}

/// Validated cover of one oval: the five-part collections plus statistics.
/// Inside boxes and triangles include the certified-inside pieces of `on`
/// decompositions; `on_pieces` retains the full decompositions (their tube is
/// the only part integrated from them).
#[derive(Clone, Debug)]
pub struct OvalCover {
    pub h: f64,
    pub inside_boxes: Vec<Box2>,
    pub inside_triangles: Vec<Triangle>,
    pub fail_boxes: Vec<Box2>,
    pub on_pieces: Vec<Decomposition>,
    pub stats: CoverStats,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum CoverError {
    #[error("no trapping enclosure found within the growth limits")]
    NoEnclosure,
    #[error("the level lies below the Hamiltonian value at the seed point")]
    EmptyInterior,
}

/// A Hamiltonian with its symbolic partials, precomputed once per run.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub poly: BivarPoly,
    hx: BivarPoly,
    hy: BivarPoly,
}

impl Hamiltonian {
    pub fn new(poly: BivarPoly) -> Hamiltonian {
        let hx = poly.partial(Var::X);
        let hy = poly.partial(Var::Y);
        Hamiltonian { poly, hx, hy }
    }

    pub fn grad_x(&self) -> &BivarPoly {
        &self.hx
    }

    pub fn grad_y(&self) -> &BivarPoly {
        &self.hy
    }

    fn range(&self, b: &Box2) -> Interval {
        self.poly.range_on_box(&b.x, &b.y)
    }
}

/// Trapping-box construction parameters. Defaults match the built-in
/// problems; they only affect how fast a certificate is found, never its
/// validity.
#[derive(Clone, Copy, Debug)]
pub struct TrapParams {
    /// Initial half-width of the candidate box around the seed.
    pub initial_radius: f64,
    /// Outward push applied to a side whose frame strip fails to certify.
    pub growth_step: f64,
    /// Thickness of the certification frame.
    pub frame_thickness: f64,
    /// Maximum number of side pushes before giving up.
    pub max_pushes: usize,
    /// Bisection depth limit when certifying a frame strip.
    pub max_depth: usize,
}

impl Default for TrapParams {
    fn default() -> TrapParams {
        TrapParams {
            initial_radius: 0.25,
            growth_step: 0.125,
            frame_thickness: 0.0625,
            max_pushes: 200,
            max_depth: 18,
        }
    }
}

/// Finds a box whose interior provably contains the connected component of
/// `{H <= h_max}` holding `seed`. The certificate is a closed frame of boxes
/// around the candidate's boundary on which `H > h_max` everywhere: the
/// component cannot cross the frame, so it stays inside.
pub fn trapping_box(ham: &Hamiltonian, h_max: f64, seed: Point2) -> Result<Box2, CoverError> {
    trapping_box_with(ham, h_max, seed, &TrapParams::default())
}

pub fn trapping_box_with(
    ham: &Hamiltonian,
    h_max: f64,
    seed: Point2,
    params: &TrapParams,
) -> Result<Box2, CoverError> {
    let at_seed = ham.poly.eval_point(seed);
    if at_seed.lo() > h_max {
        return Err(CoverError::EmptyInterior);
    }

    let r = params.initial_radius;
    let m = params.frame_thickness;
    let mut xl = seed.x - r;
    let mut xr = seed.x + r;
    let mut yb = seed.y - r;
    let mut yt = seed.y + r;
    let mut pushes = 0;

    loop {
        let strips = [
            // left, right, bottom, top
            Box2::new(
                Interval::new(xl - m, xl),
                Interval::new(yb - m, yt + m),
            ),
            Box2::new(
                Interval::new(xr, xr + m),
                Interval::new(yb - m, yt + m),
            ),
            Box2::new(
                Interval::new(xl - m, xr + m),
                Interval::new(yb - m, yb),
            ),
            Box2::new(
                Interval::new(xl - m, xr + m),
                Interval::new(yt, yt + m),
            ),
        ];
        let mut all_ok = true;
        let mut failed = [false; 4];
        for (k, strip) in strips.iter().enumerate() {
            if !certify_above(ham, h_max, strip, params.max_depth) {
                failed[k] = true;
                all_ok = false;
            }
        }
        if all_ok {
            return Ok(Box2::new(Interval::new(xl, xr), Interval::new(yb, yt)));
        }
        for (k, f) in failed.iter().enumerate() {
            if *f {
                pushes += 1;
                match k {
                    0 => xl -= params.growth_step,
                    1 => xr += params.growth_step,
                    2 => yb -= params.growth_step,
                    _ => yt += params.growth_step,
                }
            }
        }
        if pushes > params.max_pushes {
            return Err(CoverError::NoEnclosure);
        }
    }
}

/// Certifies `H > h` on the whole box by adaptive bisection of the longest
/// axis.
fn certify_above(ham: &Hamiltonian, h: f64, b: &Box2, depth: usize) -> bool {
    let r = ham.range(b);
    if r.lo() > h {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let (b1, b2) = if b.x.width() >= b.y.width() {
        let mx = b.x.midpoint();
        (
            Box2::new(Interval::new(b.x.lo(), mx), b.y),
            Box2::new(Interval::new(mx, b.x.hi()), b.y),
        )
    } else {
        let my = b.y.midpoint();
        (
            Box2::new(b.x, Interval::new(b.y.lo(), my)),
            Box2::new(b.x, Interval::new(my, b.y.hi())),
        )
    };
    certify_above(ham, h, &b1, depth - 1) && certify_above(ham, h, &b2, depth - 1)
}

/// If the gradient norm at the box midpoint falls below this factor times
/// the box size, the tube attempt is skipped (Newton cannot contract near a
/// critical point) and the box is split instead.
const NEAR_CRITICAL_FACTOR: f64 = 1e-3;
/// Chord separation shrinks by halving at most this many times.
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    fn is_vertical(self) -> bool {
        matches!(self, Side::Left | Side::Right)
    }

    fn segment(self, b: &Box2) -> Segment {
        let (xl, xr) = (b.x.lo(), b.x.hi());
        let (yb, yt) = (b.y.lo(), b.y.hi());
        match self {
            Side::Left => Segment::new(Point2::new(xl, yb), Point2::new(xl, yt)),
            Side::Right => Segment::new(Point2::new(xr, yb), Point2::new(xr, yt)),
            Side::Bottom => Segment::new(Point2::new(xl, yb), Point2::new(xr, yb)),
            Side::Top => Segment::new(Point2::new(xl, yt), Point2::new(xr, yt)),
        }
    }

    /// Endpoint corners in segment-parameter order (param 0, param 1).
    fn corner_indices(self) -> (usize, usize) {
        // Corner order: 0 = SW, 1 = SE, 2 = NW, 3 = NE.
        match self {
            Side::Left => (0, 2),
            Side::Right => (1, 3),
            Side::Bottom => (0, 1),
            Side::Top => (2, 3),
        }
    }

    fn opposite(self, other: Side) -> bool {
        matches!(
            (self, other),
            (Side::Left, Side::Right)
                | (Side::Right, Side::Left)
                | (Side::Bottom, Side::Top)
                | (Side::Top, Side::Bottom)
        )
    }
}

const SIDES: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

/// Identifies the two box sides crossed by the oval from the strict signs of
/// `H - h` at the four corners. A single arc cuts either a corner (one
/// isolated sign) or runs between opposite sides (two adjacent corners per
/// sign); in both cases exactly two sides have endpoints of opposite sign.
/// Mixed patterns, ambiguous corner values, or all-equal signs reject the
/// box, and the caller splits. Along with the Newton uniqueness proof on each
/// crossed side this pins the crossing topology, which the centre-ray
/// heuristic cannot do when the arc clips a corner away from the midline.
fn crossed_sides(ham: &Hamiltonian, h: f64, b: &Box2) -> Option<([Side; 2], [f64; 2], [f64; 4])> {
    let corners = [
        Point2::new(b.x.lo(), b.y.lo()),
        Point2::new(b.x.hi(), b.y.lo()),
        Point2::new(b.x.lo(), b.y.hi()),
        Point2::new(b.x.hi(), b.y.hi()),
    ];
    let mut vals = [0.0f64; 4];
    let mut pos = [false; 4];
    for (k, c) in corners.iter().enumerate() {
        let v = ham.poly.eval_point(*c).sub(&Interval::point(h));
        match v.sign() {
            SignClass::ContainsZero => return None,
            SignClass::StrictlyPositive => pos[k] = true,
            SignClass::StrictlyNegative => pos[k] = false,
        }
        vals[k] = v.midpoint();
    }
    let mut crossed = Vec::with_capacity(2);
    let mut hints = Vec::with_capacity(2);
    for side in SIDES {
        let (a, b) = side.corner_indices();
        if pos[a] != pos[b] {
            crossed.push(side);
            // Linear-interpolation hint for the Newton start.
            let (fa, fb) = (vals[a], vals[b]);
            hints.push((fa / (fa - fb)).clamp(0.0, 1.0));
        }
    }
    if crossed.len() != 2 {
        return None;
    }
    Some(([crossed[0], crossed[1]], [hints[0], hints[1]], vals))
}

struct SideCrossing {
    side: Side,
    /// Crossing point, committed to f64 coordinates.
    point: Point2,
}

impl SideCrossing {
    /// Distance from the crossing point to the nearest end of its side.
    fn corner_headroom(&self, b: &Box2) -> f64 {
        if self.side.is_vertical() {
            (self.point.y - b.y.lo()).min(b.y.hi() - self.point.y)
        } else {
            (self.point.x - b.x.lo()).min(b.x.hi() - self.point.x)
        }
    }
}

/// Everything needed to evaluate the three tube conditions at one chord
/// separation.
struct TubePoints {
    near: [Point2; 2],
    far: [Point2; 2],
}

/// Attempts the change-of-variables construction on a straddling box.
pub fn try_change_of_variables(
    ham: &Hamiltonian,
    h: f64,
    b: &Box2,
    minsize: f64,
) -> Result<Decomposition, TubeFail> {
    let m = b.midpoint();
    let ux = ham.hx.eval_point(m).midpoint();
    let uy = ham.hy.eval_point(m).midpoint();
    let grad_norm = (ux * ux + uy * uy).sqrt();
    if !grad_norm.is_finite() || grad_norm < NEAR_CRITICAL_FACTOR * b.size() {
        return Err(TubeFail::NearCritical);
    }

    let (sides, hints, _) = crossed_sides(ham, h, b).ok_or(TubeFail::Geometry)?;

    let tol = minsize / 1000.0;
    let cross_right = locate_crossing(ham, h, b, sides[0], hints[0], tol)?;
    let cross_left = locate_crossing(ham, h, b, sides[1], hints[1], tol)?;

    // Displacement direction along each crossed side: the axis direction with
    // positive component along the gradient ("up" is the H-increasing side).
    let dir = |side: Side| -> Result<(f64, f64), TubeFail> {
        if side.is_vertical() {
            if uy == 0.0 {
                return Err(TubeFail::Geometry);
            }
            Ok((0.0, uy.signum()))
        } else {
            if ux == 0.0 {
                return Err(TubeFail::Geometry);
            }
            Ok((ux.signum(), 0.0))
        }
    };
    let dir_right = dir(cross_right.side)?;
    let dir_left = dir(cross_left.side)?;

    // Initial chord separation: minsize/10, reduced when a crossing sits
    // closer than that to a side end so the displaced points still fit.
    let headroom = cross_right
        .corner_headroom(b)
        .min(cross_left.corner_headroom(b));
    let mut acc = (minsize / 10.0).min(0.9 * headroom);
    if acc <= 0.0 {
        return Err(TubeFail::Geometry);
    }

    // First pass must succeed at the initial separation; afterwards halve
    // while all three conditions keep holding and keep the last passing tube.
    let mut last_pass: Option<TubePoints> = None;
    for _ in 0..=MAX_HALVINGS {
        match tube_at(
            ham,
            h,
            b,
            (&cross_right, dir_right),
            (&cross_left, dir_left),
            acc,
        ) {
            Some(points) => {
                last_pass = Some(points);
                acc *= 0.5;
            }
            None => break,
        }
    }
    let points = last_pass.ok_or(TubeFail::Conditions)?;
    build_decomposition(ham, h, b, &cross_right, &cross_left, &points).ok_or(TubeFail::Conditions)
}

/// Certifies the unique oval crossing on one box side.
fn locate_crossing(
    ham: &Hamiltonian,
    h: f64,
    b: &Box2,
    side: Side,
    t0: f64,
    tol: f64,
) -> Result<SideCrossing, TubeFail> {
    let seg = side.segment(b);
    let f = ham.poly.restrict_to_segment(&seg).sub_const(Interval::point(h));
    let root = newton::certify_root(&f, t0, &Interval::new(0.0, 1.0), tol).map_err(|e| match e {
        NewtonError::DerivativeContainsZero => TubeFail::Newton,
        NewtonError::NoContraction => TubeFail::Newton,
    })?;
    Ok(SideCrossing {
        side,
        point: seg.point_at(root.t.midpoint()),
    })
}

/// Builds the four displaced corner points at separation `acc` and checks
/// Conditions 1-3. Returns the points when all three hold.
fn tube_at(
    ham: &Hamiltonian,
    h: f64,
    b: &Box2,
    right: (&SideCrossing, (f64, f64)),
    left: (&SideCrossing, (f64, f64)),
    acc: f64,
) -> Option<TubePoints> {
    let displace = |c: &SideCrossing, d: (f64, f64), s: f64| -> Option<Point2> {
        let p = Point2::new(c.point.x + s * acc * d.0, c.point.y + s * acc * d.1);
        // The displaced point must stay strictly inside its side.
        let ok = if c.side.is_vertical() {
            p.y > b.y.lo() && p.y < b.y.hi()
        } else {
            p.x > b.x.lo() && p.x < b.x.hi()
        };
        if ok {
            Some(p)
        } else {
            None
        }
    };
    let p_up = displace(right.0, right.1, 1.0)?;
    let p_down = displace(right.0, right.1, -1.0)?;
    let q_up = displace(left.0, left.1, 1.0)?;
    let q_down = displace(left.0, left.1, -1.0)?;

    // Condition 1: corner signs. The two "up" values share a strict sign,
    // opposite to the two "down" values.
    let sgn = |p: Point2| ham.poly.eval_point(p).sub(&Interval::point(h)).sign();
    let s_up = sgn(p_up);
    if s_up == SignClass::ContainsZero {
        return None;
    }
    if sgn(q_up) != s_up {
        return None;
    }
    let s_down = match s_up {
        SignClass::StrictlyPositive => SignClass::StrictlyNegative,
        SignClass::StrictlyNegative => SignClass::StrictlyPositive,
        SignClass::ContainsZero => unreachable!(),
    };
    if sgn(p_down) != s_down || sgn(q_down) != s_down {
        return None;
    }

    // Condition 2: the chords avoid the oval.
    if !chord_avoids_level(ham, h, p_up, q_up) || !chord_avoids_level(ham, h, p_down, q_down) {
        return None;
    }

    // Condition 3: the oval misses the two remaining sides.
    let crossed = [right.0.side, left.0.side];
    for side in [Side::Left, Side::Right, Side::Bottom, Side::Top] {
        if crossed.contains(&side) {
            continue;
        }
        let f = ham
            .poly
            .restrict_to_segment(&side.segment(b))
            .sub_const(Interval::point(h));
        if f.range_on(&Interval::new(0.0, 1.0)).contains(0.0) {
            return None;
        }
    }

    Some(TubePoints {
        near: [p_up, q_up],
        far: [p_down, q_down],
    })
}

/// Condition 2 for one chord: either the value range excludes the level, or
/// the restriction is strictly monotone with both endpoint values on the
/// same strict side.
fn chord_avoids_level(ham: &Hamiltonian, h: f64, a: Point2, b: Point2) -> bool {
    if a == b {
        return false;
    }
    let seg = Segment::new(a, b);
    let g = ham
        .poly
        .restrict_to_segment(&seg)
        .sub_const(Interval::point(h));
    let unit = Interval::new(0.0, 1.0);
    if !g.range_on(&unit).contains(0.0) {
        return true;
    }
    let d = g.derivative().eval(&unit);
    if d.sign() == SignClass::ContainsZero {
        return false;
    }
    let s0 = g.eval(&Interval::point(0.0)).sign();
    let s1 = g.eval(&Interval::point(1.0)).sign();
    s0 != SignClass::ContainsZero && s0 == s1
}

/// Assembles the five-piece decomposition from the passing tube points.
fn build_decomposition(
    ham: &Hamiltonian,
    h: f64,
    b: &Box2,
    right: &SideCrossing,
    left: &SideCrossing,
    points: &TubePoints,
) -> Option<Decomposition> {
    let pieces = if right.side.opposite(left.side) {
        split_opposite(b, right, points)?
    } else {
        split_adjacent(b, right, left, points)?
    };
    label_pieces(ham, h, b, pieces)
}

struct RawPieces {
    boxes: [Box2; 2],
    triangles: [Triangle; 2],
    tube: Parallelepiped,
}

/// Opposite-side crossing. For Left/Right crossings the tube runs
/// horizontally and the complement splits into a box and a triangle above
/// the upper chord, and the same below the lower chord. Top/Bottom crossings
/// are handled by swapping coordinates (exact in f64).
fn split_opposite(b: &Box2, right: &SideCrossing, points: &TubePoints) -> Option<RawPieces> {
    if right.side.is_vertical() {
        let (p_up, q_up) = (points.near[0], points.near[1]);
        let (p_down, q_down) = (points.far[0], points.far[1]);
        split_left_right(b, p_up, q_up, p_down, q_down)
    } else {
        let swap_p = |p: Point2| Point2::new(p.y, p.x);
        let sb = Box2::new(b.y, b.x);
        let raw = split_left_right(
            &sb,
            swap_p(points.near[0]),
            swap_p(points.near[1]),
            swap_p(points.far[0]),
            swap_p(points.far[1]),
        )?;
        let swap_box = |bx: &Box2| Box2::new(bx.y, bx.x);
        let swap_tri = |t: &Triangle| Triangle::new(swap_p(t.v[0]), swap_p(t.v[1]), swap_p(t.v[2]));
        Some(RawPieces {
            boxes: [swap_box(&raw.boxes[0]), swap_box(&raw.boxes[1])],
            triangles: [swap_tri(&raw.triangles[0]), swap_tri(&raw.triangles[1])],
            tube: Parallelepiped {
                v: [
                    swap_p(raw.tube.v[0]),
                    swap_p(raw.tube.v[1]),
                    swap_p(raw.tube.v[2]),
                    swap_p(raw.tube.v[3]),
                ],
            },
        })
    }
}

/// Core opposite-side geometry with the two crossings on the vertical sides.
/// The two chords never cross (their endpoints are displaced by the same
/// amount in the same direction on each side), so the split works for any
/// chord slope: a box and a triangle above the geometrically upper chord,
/// the tube band, and a box and a triangle below the lower chord.
fn split_left_right(
    b: &Box2,
    p_a: Point2,
    q_a: Point2,
    p_b: Point2,
    q_b: Point2,
) -> Option<RawPieces> {
    // Orient by geometric height; both sides are displaced the same way, so
    // one endpoint comparison decides for the whole chord.
    if p_a.y == p_b.y || (p_a.y > p_b.y) != (q_a.y > q_b.y) {
        return None;
    }
    let (up_p, up_q, dn_p, dn_q) = if p_a.y > p_b.y {
        (p_a, q_a, p_b, q_b)
    } else {
        (p_b, q_b, p_a, q_a)
    };

    let y_up = up_p.y.max(up_q.y);
    let y_dn = dn_p.y.min(dn_q.y);
    if y_up >= b.y.hi() || y_dn <= b.y.lo() {
        return None;
    }
    let box_u = Box2::new(b.x, Interval::new(y_up, b.y.hi()));
    let box_l = Box2::new(b.x, Interval::new(b.y.lo(), y_dn));
    // Triangle filling between the upper chord and the horizontal at y_up.
    let tri_u = if up_p.y >= up_q.y {
        Triangle::new(up_q, up_p, Point2::new(up_q.x, up_p.y))
    } else {
        Triangle::new(up_q, up_p, Point2::new(up_p.x, up_q.y))
    };
    let tri_l = if dn_p.y <= dn_q.y {
        Triangle::new(dn_q, dn_p, Point2::new(dn_q.x, dn_p.y))
    } else {
        Triangle::new(dn_q, dn_p, Point2::new(dn_p.x, dn_q.y))
    };
    let tube = Parallelepiped {
        v: [up_p, up_q, dn_q, dn_p],
    };
    Some(RawPieces {
        boxes: [box_l, box_u],
        triangles: [tri_l, tri_u],
        tube,
    })
}

/// Adjacent-side crossing: the tube cuts off the corner shared by the two
/// crossed sides. The corner side of the tube is a single triangle; the far
/// side splits into a full-width box, a second box, and a triangle.
fn split_adjacent(
    b: &Box2,
    right: &SideCrossing,
    left: &SideCrossing,
    points: &TubePoints,
) -> Option<RawPieces> {
    // Identify the vertical and horizontal crossings.
    let (vert_idx, horiz_idx) = if right.side.is_vertical() {
        (0usize, 1usize)
    } else {
        (1usize, 0usize)
    };
    let (vert, horiz) = if right.side.is_vertical() {
        (right, left)
    } else {
        (left, right)
    };
    let kx = match vert.side {
        Side::Left => b.x.lo(),
        Side::Right => b.x.hi(),
        _ => unreachable!(),
    };
    let ky = match horiz.side {
        Side::Bottom => b.y.lo(),
        Side::Top => b.y.hi(),
        _ => unreachable!(),
    };
    let dx: f64 = if kx == b.x.hi() { 1.0 } else { -1.0 };
    let dy: f64 = if ky == b.y.hi() { 1.0 } else { -1.0 };
    let corner = Point2::new(kx, ky);

    // Near pair = the displaced points toward the corner; they must form one
    // chord (both from `near` or both from `far`), otherwise the gradient
    // direction is inconsistent with the crossing geometry.
    let a_near_is_up = points.near[vert_idx].y * dy > points.far[vert_idx].y * dy;
    let b_near_is_up = points.near[horiz_idx].x * dx > points.far[horiz_idx].x * dx;
    if a_near_is_up != b_near_is_up {
        return None;
    }
    let (a_near, a_far, b_near, b_far) = if a_near_is_up {
        (
            points.near[vert_idx],
            points.far[vert_idx],
            points.near[horiz_idx],
            points.far[horiz_idx],
        )
    } else {
        (
            points.far[vert_idx],
            points.near[vert_idx],
            points.far[horiz_idx],
            points.near[horiz_idx],
        )
    };

    // Full-width box on the far side of a_far.
    let box_l = if dy > 0.0 {
        Box2::new(b.x, Interval::new(b.y.lo(), a_far.y))
    } else {
        Box2::new(b.x, Interval::new(a_far.y, b.y.hi()))
    };
    // Second box between a_far.y and the corner row, on the far side of b_far.
    let xr = if dx > 0.0 {
        Interval::new(b.x.lo(), b_far.x)
    } else {
        Interval::new(b_far.x, b.x.hi())
    };
    let yr = if dy > 0.0 {
        Interval::new(a_far.y, b.y.hi())
    } else {
        Interval::new(b.y.lo(), a_far.y)
    };
    let box_u = Box2::new(xr, yr);

    let tri_corner = Triangle::new(a_near, corner, b_near);
    let tri_far = Triangle::new(b_far, Point2::new(b_far.x, a_far.y), a_far);
    let tube = Parallelepiped {
        v: [a_near, b_near, b_far, a_far],
    };
    Some(RawPieces {
        boxes: [box_l, box_u],
        triangles: [tri_far, tri_corner],
        tube,
    })
}

/// Classifies each non-tube piece by one strict point evaluation, as the
/// construction guarantees none of them meets the oval.
fn label_pieces(ham: &Hamiltonian, h: f64, b: &Box2, raw: RawPieces) -> Option<Decomposition> {
    let classify_pt = |p: Point2| -> Option<bool> {
        match ham.poly.eval_point(p).sub(&Interval::point(h)).sign() {
            SignClass::StrictlyNegative => Some(true),
            SignClass::StrictlyPositive => Some(false),
            SignClass::ContainsZero => None,
        }
    };
    let label_box = |bx: &Box2| -> Option<LabeledPiece<Box2>> {
        Some(LabeledPiece {
            shape: *bx,
            inside: classify_pt(bx.midpoint())?,
        })
    };
    let label_tri = |t: &Triangle| -> Option<LabeledPiece<Triangle>> {
        Some(LabeledPiece {
            shape: *t,
            inside: classify_pt(t.centroid())?,
        })
    };
    Some(Decomposition {
        parent: *b,
        box_l: label_box(&raw.boxes[0])?,
        box_u: label_box(&raw.boxes[1])?,
        tri_l: label_tri(&raw.triangles[0])?,
        tri_u: label_tri(&raw.triangles[1])?,
        tube: raw.tube,
    })
}

struct CoverBuilder {
    h: f64,
    minsize: f64,
    inside_boxes: Vec<Box2>,
    inside_triangles: Vec<Triangle>,
    fail_boxes: Vec<Box2>,
    on_pieces: Vec<Decomposition>,
    stats: CoverStats,
}

impl CoverBuilder {
    fn classify(&mut self, ham: &Hamiltonian, b: Box2) {
        let r = ham.range(&b);
        if r.hi() < self.h {
            self.inside_boxes.push(b);
            return;
        }
        if r.lo() > self.h {
            self.stats.outside_dropped += 1;
            return;
        }
        match try_change_of_variables(ham, self.h, &b, self.minsize) {
            Ok(dec) => {
                for piece in dec.boxes() {
                    if piece.inside {
                        self.inside_boxes.push(piece.shape);
                    } else {
                        self.stats.outside_dropped += 1;
                    }
                }
                for piece in dec.triangles() {
                    if piece.inside {
                        self.inside_triangles.push(piece.shape);
                    } else {
                        self.stats.outside_dropped += 1;
                    }
                }
                self.on_pieces.push(dec);
            }
            Err(reason) => {
                if b.size() >= self.minsize {
                    for q in b.quadrants() {
                        self.classify(ham, q);
                    }
                } else {
                    match reason {
                        TubeFail::NearCritical => self.stats.fail_near_critical += 1,
                        TubeFail::Geometry => self.stats.fail_geometry += 1,
                        TubeFail::Newton => self.stats.fail_newton += 1,
                        TubeFail::Conditions => self.stats.fail_conditions += 1,
                    }
                    self.fail_boxes.push(b);
                }
            }
        }
    }
}

/// Builds the validated cover of the oval at level `h` inside `domain`
/// (normally a trapping box). The seed identifies which connected component
/// of the certified-inside region is the oval interior; inside pieces not
/// connected to it are pruned.
pub fn build_cover(
    ham: &Hamiltonian,
    h: f64,
    domain: &Box2,
    minsize: f64,
    seed: Point2,
) -> OvalCover {
    assert!(minsize > 0.0, "minsize must be positive");
    let mut builder = CoverBuilder {
        h,
        minsize,
        inside_boxes: Vec::new(),
        inside_triangles: Vec::new(),
        fail_boxes: Vec::new(),
        on_pieces: Vec::new(),
        stats: CoverStats::default(),
    };
    builder.classify(ham, *domain);

    let mut cover = OvalCover {
        h,
        inside_boxes: builder.inside_boxes,
        inside_triangles: builder.inside_triangles,
        fail_boxes: builder.fail_boxes,
        on_pieces: builder.on_pieces,
        stats: builder.stats,
    };
    prune_to_seed_component(&mut cover, seed);

    // Deterministic ordering regardless of construction schedule.
    cover
        .inside_boxes
        .sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
    cover.inside_triangles.sort_by(|a, b| {
        a.hull_box()
            .sort_key()
            .partial_cmp(&b.hull_box().sort_key())
            .unwrap()
    });
    cover
        .fail_boxes
        .sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
    cover.on_pieces.sort_by(|a, b| {
        a.parent
            .sort_key()
            .partial_cmp(&b.parent.sort_key())
            .unwrap()
    });

    cover.stats.inside_boxes = cover.inside_boxes.len();
    cover.stats.inside_triangles = cover.inside_triangles.len();
    cover.stats.on_pieces = cover.on_pieces.len();
    cover.stats.fail_boxes = cover.fail_boxes.len();
    cover
}

/// Keeps only the certified-inside pieces connected (by touching bounding
/// boxes) to the piece containing the seed. Two certified-inside pieces that
/// share a point lie in the same component of `{H < h}`, so the retained set
/// covers exactly the seed's component; fail boxes and tubes are kept
/// unconditionally because their hull-with-zero contribution is sound for
/// any sub-region.
fn prune_to_seed_component(cover: &mut OvalCover, seed: Point2) {
    let n_boxes = cover.inside_boxes.len();
    let n = n_boxes + cover.inside_triangles.len();
    if n == 0 {
        return;
    }
    let bboxes: Vec<Box2> = cover
        .inside_boxes
        .iter()
        .copied()
        .chain(cover.inside_triangles.iter().map(|t| t.hull_box()))
        .collect();

    // Union-find over pieces, sweep by x to limit contact tests.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| bboxes[a].x.lo().partial_cmp(&bboxes[b].x.lo()).unwrap());
    let mut active: Vec<usize> = Vec::new();
    for &k in &order {
        let bk = bboxes[k];
        active.retain(|&j| bboxes[j].x.hi() >= bk.x.lo());
        for &j in &active {
            if bk.touches(&bboxes[j]) {
                let (ra, rb) = (find(&mut parent, k), find(&mut parent, j));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        active.push(k);
    }

    let seed_piece = (0..n).find(|&k| bboxes[k].contains_point(seed));
    let roots: std::collections::BTreeSet<usize> = (0..n)
        .map(|k| find(&mut parent, k))
        .collect();
    let seed_root = match seed_piece {
        Some(k) => find(&mut parent, k),
        None => {
            if roots.len() > 1 {
                cover.stats.pruning_ambiguous = true;
            }
            return;
        }
    };
    if roots.len() == 1 {
        return;
    }
    let mut keep_box = vec![false; n];
    for (k, keep) in keep_box.iter_mut().enumerate() {
        *keep = find(&mut parent, k) == seed_root;
    }
    let mut k = 0;
    cover.inside_boxes.retain(|_| {
        let keep = keep_box[k];
        k += 1;
        keep
    });
    let mut t = 0;
    cover.inside_triangles.retain(|_| {
        let keep = keep_box[n_boxes + t];
        t += 1;
        keep
    });
    cover.stats.pruned_pieces = keep_box.iter().filter(|&&x| !x).count();
}
