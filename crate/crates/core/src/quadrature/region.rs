//! Integration regions and the variable maps that take infinite axes onto
//! finite parameter intervals.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// One end of an integration axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    NegInfinity,
    PosInfinity,
}

#[derive(Debug, Clone, PartialEq)]
enum Span {
    Interval {
        lower: Bound,
        upper: Bound,
    },
    /// Collapsed axis: the integrand is evaluated at this coordinate and the
    /// axis contributes no measure.
    Point(f64),
}

/// One axis of an [`IntegrationRegion`].
///
/// `scale` sets the length at which infinite axes are compressed, `center` is
/// the origin of the map on a doubly infinite axis, and `breaks` are interior
/// coordinates where the initial subdivision is cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    span: Span,
    scale: f64,
    center: f64,
    breaks: Vec<f64>,
}

impl Axis {
    pub fn new(lower: Bound, upper: Bound) -> Self {
        Self {
            span: Span::Interval { lower, upper },
            scale: 1.0,
            center: 0.0,
            breaks: Vec::new(),
        }
    }

    pub fn finite(lower: f64, upper: f64) -> Self {
        Self::new(Bound::Finite(lower), Bound::Finite(upper))
    }

    pub fn from(lower: f64) -> Self {
        Self::new(Bound::Finite(lower), Bound::PosInfinity)
    }

    pub fn up_to(upper: f64) -> Self {
        Self::new(Bound::NegInfinity, Bound::Finite(upper))
    }

    pub fn whole_line() -> Self {
        Self::new(Bound::NegInfinity, Bound::PosInfinity)
    }

    pub fn point(at: f64) -> Self {
        Self {
            span: Span::Point(at),
            scale: 1.0,
            center: 0.0,
            breaks: Vec::new(),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn centered(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_breaks<I: IntoIterator<Item = f64>>(mut self, breaks: I) -> Self {
        self.breaks.extend(breaks);
        self
    }

    pub fn is_collapsed(&self) -> bool {
        matches!(self.span, Span::Point(_))
    }

    fn validate(&self, axis: usize) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("axis {axis}: {msg}")));
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return bad("map scale must be positive and finite");
        }
        if !self.center.is_finite() || self.breaks.iter().any(|b| !b.is_finite()) {
            return bad("center and breaks must be finite");
        }
        match self.span {
            Span::Point(v) if !v.is_finite() => bad("collapsed coordinate must be finite"),
            Span::Point(_) => Ok(()),
            Span::Interval { lower, upper } => match (lower, upper) {
                (Bound::Finite(a), Bound::Finite(b)) if !(a.is_finite() && b.is_finite()) => {
                    bad("finite bounds must be finite numbers")
                }
                (Bound::Finite(a), Bound::Finite(b)) if a >= b => {
                    bad("lower bound must be below upper")
                }
                (Bound::Finite(a), _) | (_, Bound::Finite(a)) if !a.is_finite() => {
                    bad("finite bounds must be finite numbers")
                }
                (Bound::PosInfinity, _) | (_, Bound::NegInfinity) => bad("bounds are reversed"),
                _ => Ok(()),
            },
        }
    }

    pub(crate) fn map(&self) -> AxisMap {
        match self.span {
            Span::Point(v) => AxisMap::Point(v),
            Span::Interval { lower, upper } => match (lower, upper) {
                (Bound::Finite(a), Bound::Finite(b)) => AxisMap::Finite { lower: a, upper: b },
                (Bound::Finite(a), Bound::PosInfinity) => AxisMap::Upper {
                    origin: a,
                    scale: self.scale,
                },
                (Bound::NegInfinity, Bound::Finite(b)) => AxisMap::Lower {
                    origin: b,
                    scale: self.scale,
                },
                _ => AxisMap::Whole {
                    center: self.center,
                    scale: self.scale,
                },
            },
        }
    }

    /// Cut points of the initial subdivision in parameter space, including
    /// both ends.
    pub(crate) fn parameter_cuts(&self) -> Vec<f64> {
        let map = self.map();
        let (t0, t1) = map.parameter_range();
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .map(|&x| map.to_parameter(x))
            .filter(|&t| t > t0 && t < t1)
            .collect();
        if let AxisMap::Whole { .. } = map {
            cuts.push(0.0);
        }
        cuts.push(t0);
        cuts.push(t1);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }
}

/// Map from the parameter `t` of a (possibly infinite) axis to its coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum AxisMap {
    Point(f64),
    Finite {
        lower: f64,
        upper: f64,
    },
    /// `[origin, inf)`: x = origin + s t / (1 - t), t in [0, 1)
    Upper {
        origin: f64,
        scale: f64,
    },
    /// `(-inf, origin]`: x = origin - s t / (1 - t), t in [0, 1)
    Lower {
        origin: f64,
        scale: f64,
    },
    /// `(-inf, inf)`: x = c + s t / (1 - t^2), t in (-1, 1)
    Whole {
        center: f64,
        scale: f64,
    },
}

impl AxisMap {
    pub(crate) fn parameter_range(&self) -> (f64, f64) {
        match *self {
            AxisMap::Point(v) => (v, v),
            AxisMap::Finite { lower, upper } => (lower, upper),
            AxisMap::Upper { .. } | AxisMap::Lower { .. } => (0.0, 1.0),
            AxisMap::Whole { .. } => (-1.0, 1.0),
        }
    }

    /// Coordinate and absolute Jacobian `|dx/dt|` at parameter `t`.
    #[inline]
    pub(crate) fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            AxisMap::Point(v) => (v, 1.0),
            AxisMap::Finite { .. } => (t, 1.0),
            AxisMap::Upper { origin, scale } => {
                let u = 1.0 - t;
                (origin + scale * t / u, scale / (u * u))
            }
            AxisMap::Lower { origin, scale } => {
                let u = 1.0 - t;
                (origin - scale * t / u, scale / (u * u))
            }
            AxisMap::Whole { center, scale } => {
                let u = 1.0 - t * t;
                (center + scale * t / u, scale * (1.0 + t * t) / (u * u))
            }
        }
    }

    pub(crate) fn to_parameter(self, x: f64) -> f64 {
        match self {
            AxisMap::Point(v) => v,
            AxisMap::Finite { .. } => x,
            AxisMap::Upper { origin, scale } => {
                let u = (x - origin) / scale;
                u / (1.0 + u)
            }
            AxisMap::Lower { origin, scale } => {
                let u = (origin - x) / scale;
                u / (1.0 + u)
            }
            AxisMap::Whole { center, scale } => {
                let u = (x - center) / scale;
                2.0 * u / (1.0 + (1.0 + 4.0 * u * u).sqrt())
            }
        }
    }
}

/// Product region in three dimensions. Any axis may be collapsed to a point,
/// which lowers the dimension of the integral.
///
/// An optional box-shaped hole can be cut out; its faces must coincide with
/// axis breaks so that the hole is exactly one cell of the initial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationRegion {
    axes: [Axis; 3],
    hole: Option<(Vec3, Vec3)>,
}

impl IntegrationRegion {
    pub fn new(x: Axis, y: Axis, z: Axis) -> Result<Self> {
        let axes = [x, y, z];
        for (i, a) in axes.iter().enumerate() {
            a.validate(i)?;
        }
        Ok(Self { axes, hole: None })
    }

    /// Removes the box `[lower, upper]` from the region, adding its faces as
    /// breaks on every active axis.
    pub fn excluding(mut self, lower: Vec3, upper: Vec3) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite())
            || (0..3).any(|i| lower.component(i) >= upper.component(i))
        {
            return Err(Error::InvalidInput(
                "hole must be a non-empty finite box".into(),
            ));
        }
        for (i, axis) in self.axes.iter_mut().enumerate() {
            if !axis.is_collapsed() {
                axis.breaks.push(lower.component(i));
                axis.breaks.push(upper.component(i));
            }
        }
        self.hole = Some((lower, upper));
        Ok(self)
    }

    pub(crate) fn hole(&self) -> Option<(Vec3, Vec3)> {
        self.hole
    }

    pub fn unit_cube() -> Self {
        Self::cube(0.0, 1.0)
    }

    pub fn cube(lower: f64, upper: f64) -> Self {
        Self::new(
            Axis::finite(lower, upper),
            Axis::finite(lower, upper),
            Axis::finite(lower, upper),
        )
        .expect("valid cube")
    }

    pub fn whole_space() -> Self {
        Self::new(Axis::whole_line(), Axis::whole_line(), Axis::whole_line()).expect("valid region")
    }

    pub fn axes(&self) -> &[Axis; 3] {
        &self.axes
    }

    /// Number of axes that carry measure.
    pub fn dimension(&self) -> usize {
        self.axes.iter().filter(|a| !a.is_collapsed()).count()
    }
}
