//! Wide and shaped beam synthesis.
//!
//! A beam covering a direction band is built in two steps. First a
//! continuous *steering law* `f: [0, 1] -> [band start, band end]` assigns
//! every normalized element position a local steering direction; for a flat
//! beam the law is linear, and for a shaped beam with target magnitude
//! profile `h` the law spends element budget proportionally to `h`, i.e.
//!
//! ```text
//! f(mu) = Hinv((H(b) - H(a)) * mu + H(a)),   H' = h
//! ```
//!
//! Second, the law is discretized onto `n` elements by accumulating it at
//! the sample points `tau/n`:
//!
//! ```text
//! g(0) = 0,   g(m) = -sum_{tau=1..m} f(tau/n)
//! ```
//!
//! The accumulation is compensated (Kahan) so closed-form and discretized
//! constructions agree to near machine precision even for long arrays.

use std::fmt;
use std::sync::Arc;

use crate::afm::PhaseProfile;
use crate::error::SynthesisError;
use crate::BETA_LIMIT;

/// Target magnitude over the band.
#[derive(Clone)]
pub enum BeamShape {
    /// Uniform coverage of the band.
    Flat,
    /// Coverage weighted by a strictly positive function of direction.
    Shaped(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for BeamShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeamShape::Flat => f.write_str("Flat"),
            BeamShape::Shaped(_) => f.write_str("Shaped(..)"),
        }
    }
}

/// A validated beam request: a direction band plus a target shape.
#[derive(Debug, Clone)]
pub struct BeamSpec {
    psi_a: f64,
    psi_b: f64,
    shape: BeamShape,
}

impl BeamSpec {
    /// Flat beam over `[psi_a, psi_b]`. A zero-width band denotes a narrow
    /// beam at that single direction.
    pub fn flat(psi_a: f64, psi_b: f64) -> Result<Self, SynthesisError> {
        validate_band(psi_a, psi_b)?;
        Ok(Self {
            psi_a,
            psi_b,
            shape: BeamShape::Flat,
        })
    }

    /// Shaped beam over `[psi_a, psi_b]` with target magnitude `h`.
    ///
    /// `h` must be finite and nonnegative on the closed band and strictly
    /// positive on its interior; violations are reported when the steering
    /// law is built. A zero-width band collapses to a narrow beam and
    /// ignores `h`.
    pub fn shaped<F>(psi_a: f64, psi_b: f64, h: F) -> Result<Self, SynthesisError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        validate_band(psi_a, psi_b)?;
        Ok(Self {
            psi_a,
            psi_b,
            shape: BeamShape::Shaped(Arc::new(h)),
        })
    }

    pub fn psi_a(&self) -> f64 {
        self.psi_a
    }

    pub fn psi_b(&self) -> f64 {
        self.psi_b
    }

    pub fn shape(&self) -> &BeamShape {
        &self.shape
    }

    pub fn width(&self) -> f64 {
        self.psi_b - self.psi_a
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.psi_a + self.psi_b)
    }
}

pub(crate) fn validate_band(psi_a: f64, psi_b: f64) -> Result<(), SynthesisError> {
    if !(psi_a.is_finite() && psi_b.is_finite()) || psi_a > psi_b {
        return Err(SynthesisError::EmptyBand {
            start: psi_a,
            end: psi_b,
        });
    }
    if psi_a < -BETA_LIMIT || psi_b > BETA_LIMIT {
        return Err(SynthesisError::BandOutOfRange {
            start: psi_a,
            end: psi_b,
        });
    }
    Ok(())
}

/// Panels in the cumulative integral table backing shaped-law inversion.
const INTEGRAL_PANELS: usize = 4096;

/// A concrete steering law, ready to evaluate at normalized positions.
#[derive(Clone)]
pub enum SteeringLaw {
    /// `f(mu) = (b - a) * mu + a`; the flat-beam law.
    Linear { a: f64, b: f64 },
    /// Numeric inverse of the cumulative shape integral.
    Inverted(InvertedLaw),
}

/// Shaped-beam law: a cumulative table of `H(psi) = integral of h from the
/// band start`, inverted by bisection.
#[derive(Clone)]
pub struct InvertedLaw {
    a: f64,
    b: f64,
    h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `cum[i] = H(a + i * panel_width)`, `i = 0..=INTEGRAL_PANELS`.
    cum: Vec<f64>,
}

impl fmt::Debug for SteeringLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteeringLaw::Linear { a, b } => write!(f, "Linear {{ a: {a}, b: {b} }}"),
            SteeringLaw::Inverted(law) => {
                write!(f, "Inverted {{ a: {}, b: {}, .. }}", law.a, law.b)
            }
        }
    }
}

impl SteeringLaw {
    /// Build the law realizing a beam spec.
    pub fn for_spec(spec: &BeamSpec) -> Result<Self, SynthesisError> {
        // A zero-width band is a narrow beam: constant law, shape ignored.
        if spec.width() == 0.0 {
            return Ok(SteeringLaw::Linear {
                a: spec.psi_a(),
                b: spec.psi_b(),
            });
        }
        match spec.shape() {
            BeamShape::Flat => Ok(SteeringLaw::Linear {
                a: spec.psi_a(),
                b: spec.psi_b(),
            }),
            BeamShape::Shaped(h) => Ok(SteeringLaw::Inverted(InvertedLaw::build(
                spec.psi_a(),
                spec.psi_b(),
                Arc::clone(h),
            )?)),
        }
    }

    /// Local steering direction at normalized position `mu`, clamped to
    /// `[0, 1]`.
    pub fn value(&self, mu: f64) -> f64 {
        let mu = mu.clamp(0.0, 1.0);
        match self {
            SteeringLaw::Linear { a, b } => (b - a) * mu + a,
            SteeringLaw::Inverted(law) => law.invert(mu),
        }
    }

    /// Band covered by the law.
    pub fn band(&self) -> (f64, f64) {
        match self {
            SteeringLaw::Linear { a, b } => (*a, *b),
            SteeringLaw::Inverted(law) => (law.a, law.b),
        }
    }
}

impl InvertedLaw {
    fn build(
        a: f64,
        b: f64,
        h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<Self, SynthesisError> {
        let width = (b - a) / INTEGRAL_PANELS as f64;
        // Validate h at every node touched by the quadrature: finite and
        // nonnegative everywhere, strictly positive away from the endpoints.
        let check = |x: f64, interior: bool| -> Result<f64, SynthesisError> {
            let v = h(x);
            if !v.is_finite() {
                return Err(SynthesisError::NonFiniteShape(x));
            }
            if v < 0.0 || (interior && v == 0.0) {
                return Err(SynthesisError::NonPositiveShape { beta: x, value: v });
            }
            Ok(v)
        };
        let mut cum = Vec::with_capacity(INTEGRAL_PANELS + 1);
        cum.push(0.0);
        let mut acc = KahanSum::default();
        let mut left_val = check(a, false)?;
        for i in 0..INTEGRAL_PANELS {
            let x0 = a + width * i as f64;
            let x1 = if i + 1 == INTEGRAL_PANELS {
                b
            } else {
                a + width * (i + 1) as f64
            };
            let mid = check(0.5 * (x0 + x1), true)?;
            let right_val = check(x1, i + 2 <= INTEGRAL_PANELS)?;
            // Per-panel Simpson rule; error O(width^5) per panel.
            acc.add((x1 - x0) / 6.0 * (left_val + 4.0 * mid + right_val));
            cum.push(acc.value());
            left_val = right_val;
        }
        Ok(Self { a, b, h, cum })
    }

    fn total(&self) -> f64 {
        *self.cum.last().expect("table is non-empty")
    }

    /// Solve `H(psi) = total * mu` for `psi` by table lookup plus bisection.
    fn invert(&self, mu: f64) -> f64 {
        let target = self.total() * mu;
        // partition_point returns the first index with cum > target; the
        // bracketing panel starts one before it.
        let idx = self.cum.partition_point(|&c| c <= target);
        if idx == 0 {
            return self.a;
        }
        if idx > INTEGRAL_PANELS {
            return self.b;
        }
        let panel = idx - 1;
        let width = (self.b - self.a) / INTEGRAL_PANELS as f64;
        let mut lo = self.a + width * panel as f64;
        let mut hi = if idx == INTEGRAL_PANELS {
            self.b
        } else {
            self.a + width * idx as f64
        };
        let base = self.cum[panel];
        let x0 = lo;
        let f0 = (self.h)(x0);
        // Bisection on base + simpson(x0, psi) - target; ~55 halvings take
        // the bracket to machine width.
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let half = 0.5 * (x0 + mid);
            let partial = (mid - x0) / 6.0 * (f0 + 4.0 * (self.h)(half) + (self.h)(mid));
            if base + partial <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Compensated accumulator; keeps long running sums accurate to ~1 ulp.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Discretize a steering law onto `n` elements.
pub fn discretize(law: &SteeringLaw, n: usize) -> Result<PhaseProfile, SynthesisError> {
    if n == 0 {
        return Err(SynthesisError::ZeroElements);
    }
    let mut values = Vec::with_capacity(n);
    values.push(0.0);
    let mut acc = KahanSum::default();
    for tau in 1..n {
        acc.add(law.value(tau as f64 / n as f64));
        values.push(-acc.value());
    }
    PhaseProfile::new(values)
}

/// Build the phase profile realizing a beam spec on `n` elements.
pub fn synthesize(spec: &BeamSpec, n: usize) -> Result<PhaseProfile, SynthesisError> {
    discretize(&SteeringLaw::for_spec(spec)?, n)
}

/// Flat wide beam over `[psi_a, psi_b]` in closed form:
/// `g(m) = -(m*(m+1)/(2n) * (psi_b - psi_a) + m * psi_a)`.
pub fn ncpd_flat(psi_a: f64, psi_b: f64, n: usize) -> Result<PhaseProfile, SynthesisError> {
    validate_band(psi_a, psi_b)?;
    if n == 0 {
        return Err(SynthesisError::ZeroElements);
    }
    let delta = psi_b - psi_a;
    let nf = n as f64;
    let values = (0..n)
        .map(|m| {
            let mf = m as f64;
            -(mf * (mf + 1.0) / (2.0 * nf) * delta + mf * psi_a)
        })
        .collect();
    PhaseProfile::new(values)
}

/// Narrow beam steered at `psi0`: `g(m) = -psi0 * m`.
pub fn narrow_profile(psi0: f64, n: usize) -> Result<PhaseProfile, SynthesisError> {
    if !psi0.is_finite() || psi0.abs() > BETA_LIMIT {
        return Err(SynthesisError::DirectionOutOfRange(psi0));
    }
    if n == 0 {
        return Err(SynthesisError::ZeroElements);
    }
    let values = (0..n).map(|m| -(psi0 * m as f64)).collect();
    PhaseProfile::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afm::afm_1d;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn flat_law_is_linear_with_exact_endpoints() {
        let spec = BeamSpec::flat(-0.5, 1.25).unwrap();
        let law = SteeringLaw::for_spec(&spec).unwrap();
        assert_eq!(law.value(0.0), -0.5);
        assert_eq!(law.value(1.0), 1.25);
        assert_eq!(law.value(0.5), 0.375);
        // Out-of-range positions clamp.
        assert_eq!(law.value(-3.0), -0.5);
        assert_eq!(law.value(7.0), 1.25);
    }

    #[test]
    fn band_validation_rejects_reversed_and_escaping_bands() {
        assert!(matches!(
            BeamSpec::flat(1.0, 0.0).unwrap_err(),
            SynthesisError::EmptyBand { .. }
        ));
        assert!(matches!(
            BeamSpec::flat(-3.0, 0.0).unwrap_err(),
            SynthesisError::BandOutOfRange { .. }
        ));
        assert!(matches!(
            BeamSpec::flat(0.0, 2.5).unwrap_err(),
            SynthesisError::BandOutOfRange { .. }
        ));
        assert!(BeamSpec::flat(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn zero_width_bands_collapse_to_narrow_beams() {
        let spec = BeamSpec::flat(0.75, 0.75).unwrap();
        let profile = synthesize(&spec, 6).unwrap();
        let narrow = narrow_profile(0.75, 6).unwrap();
        assert_eq!(profile, narrow);
        // The shape function is irrelevant on a widthless band.
        let spec = BeamSpec::shaped(0.75, 0.75, |_| -1.0).unwrap();
        assert_eq!(synthesize(&spec, 6).unwrap(), narrow);
        // The width-zero collapse of the flat closed form is the same ramp.
        assert_eq!(ncpd_flat(0.75, 0.75, 6).unwrap(), narrow);
    }

    #[test]
    fn whole_range_flat_beam_on_four_elements_is_0110() {
        let p = ncpd_flat(-2.0, 2.0, 4).unwrap();
        assert_eq!(p.values(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn closed_form_matches_discretized_flat_law() {
        for n in [1usize, 2, 7, 64] {
            let spec = BeamSpec::flat(-1.3, 0.9).unwrap();
            let direct = synthesize(&spec, n).unwrap();
            let closed = ncpd_flat(-1.3, 0.9, n).unwrap();
            for (d, c) in direct.values().iter().zip(closed.values()) {
                assert!((d - c).abs() < 1e-13, "n={n}: {d} vs {c}");
            }
        }
    }

    #[test]
    fn narrow_profile_attains_the_element_count_exactly() {
        let n = 37;
        let psi0 = 0.775;
        let p = narrow_profile(psi0, n).unwrap();
        assert_eq!(afm_1d(&p, FRAC_PI_2, psi0), n as f64);
    }

    #[test]
    fn narrow_profile_validates_inputs() {
        assert!(matches!(
            narrow_profile(2.5, 8).unwrap_err(),
            SynthesisError::DirectionOutOfRange(_)
        ));
        assert_eq!(
            narrow_profile(0.5, 0).unwrap_err(),
            SynthesisError::ZeroElements
        );
    }

    #[test]
    fn linear_shape_law_matches_its_closed_form() {
        // h(beta) = beta on (0.5, 1): H(psi) = (psi^2 - 0.25) / 2, so
        // f(mu) = sqrt(0.75 * mu + 0.25).
        let spec = BeamSpec::shaped(0.5, 1.0, |beta| beta).unwrap();
        let law = SteeringLaw::for_spec(&spec).unwrap();
        for i in 0..=20 {
            let mu = i as f64 / 20.0;
            let expected = (0.75 * mu + 0.25).sqrt();
            assert!(
                (law.value(mu) - expected).abs() < 1e-10,
                "mu={mu}: {} vs {expected}",
                law.value(mu)
            );
        }
    }

    #[test]
    fn shape_functions_must_stay_positive_inside_the_band() {
        let spec = BeamSpec::shaped(0.5, 1.0, |beta| beta - 0.6).unwrap();
        assert!(matches!(
            SteeringLaw::for_spec(&spec).unwrap_err(),
            SynthesisError::NonPositiveShape { .. }
        ));
        // Zero exactly at an endpoint is allowed.
        let spec = BeamSpec::shaped(0.0, 1.0, |beta| beta).unwrap();
        assert!(SteeringLaw::for_spec(&spec).is_ok());
    }

    #[test]
    fn non_finite_shapes_are_reported() {
        let spec = BeamSpec::shaped(0.5, 1.0, |beta| (beta - 0.7).ln()).unwrap();
        let err = SteeringLaw::for_spec(&spec).unwrap_err();
        assert!(
            matches!(
                err,
                SynthesisError::NonFiniteShape(_) | SynthesisError::NonPositiveShape { .. }
            ),
            "{err:?}"
        );
        let spec = BeamSpec::shaped(0.5, 1.0, |_| f64::NAN).unwrap();
        assert!(matches!(
            SteeringLaw::for_spec(&spec).unwrap_err(),
            SynthesisError::NonFiniteShape(_)
        ));
    }

    #[test]
    fn discretize_needs_at_least_one_element() {
        let law = SteeringLaw::Linear { a: -1.0, b: 1.0 };
        assert_eq!(
            discretize(&law, 0).unwrap_err(),
            SynthesisError::ZeroElements
        );
        // A single element carries only the canonical zero.
        assert_eq!(discretize(&law, 1).unwrap().values(), &[0.0]);
    }

    #[test]
    fn shaped_law_is_monotone_onto_the_band() {
        let spec = BeamSpec::shaped(-1.0, 0.5, |beta| 1.0 + beta * beta).unwrap();
        let law = SteeringLaw::for_spec(&spec).unwrap();
        let mut prev = law.value(0.0);
        assert!((prev - (-1.0)).abs() < 1e-9);
        for i in 1..=50 {
            let v = law.value(i as f64 / 50.0);
            assert!(v >= prev, "law not monotone at step {i}");
            prev = v;
        }
        assert!((prev - 0.5).abs() < 1e-9);
    }
}
