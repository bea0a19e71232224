use std::f64::consts::SQRT_2;

use super::{HomodyneConfig, InputSpec, MeasurementRecord};
use crate::error::{Error, Result};
use crate::gaussian::{
    beamsplitter, coherent, direct_sum, identity, QuadratureVector, SymplecticTransform,
};

/// `S_h2 · S_h1` on the ordering `(LO_x, in, resource, LO_p)`, with
/// `S_h1 = 𝕀₂ ⊕ B_S(½) ⊕ 𝕀₂` and `S_h2 = B_S(½) ⊕ B_S(½)`.
pub fn homodyne_network() -> SymplecticTransform {
    let bs = beamsplitter(0.5).expect("balanced splitter");
    let first = direct_sum(&[identity(1), bs.clone(), identity(1)]).expect("nonempty");
    let second = direct_sum(&[bs.clone(), bs]).expect("nonempty");
    first.then(&second).expect("same dimension")
}

/// Detector-plane first moments `(x_u', p_u', x_u'', p_u'', x_v', p_v', x_v'', p_v'')`.
pub fn double_homodyne_propagate(moments_in: &QuadratureVector) -> Result<QuadratureVector> {
    if moments_in.len() != 8 {
        return Err(Error::Dimension {
            expected: 8,
            actual: moments_in.len(),
        });
    }
    homodyne_network().map(moments_in)
}

/// Builds `(x_LOx, p_LOx, x_in, p_in, e^r x₁, e^{−r} p₁, x_LOp, p_LOp)`.
/// A local oscillator `|α|e^{iθ}` has quadratures `√2|α|(cos θ, sin θ)`.
pub fn homodyne_input_moments(
    x_in: f64,
    p_in: f64,
    resource_mode1: (f64, f64),
    r: f64,
    cfg: &HomodyneConfig,
) -> QuadratureVector {
    let (x1, p1) = resource_mode1;
    let lo = SQRT_2 * cfg.lo_amplitude;
    QuadratureVector::new(vec![
        lo * cfg.theta_x.cos(),
        lo * cfg.theta_x.sin(),
        x_in,
        p_in,
        r.exp() * x1,
        (-r).exp() * p1,
        lo * cfg.theta_p.cos(),
        lo * cfg.theta_p.sin(),
    ])
    .expect("finite moments")
}

/// Mean photon number of an ideal detector, `½(x² + p²) − ½`.
pub fn detector_current(x: f64, p: f64) -> f64 {
    0.5 * (x * x + p * p) - 0.5
}

/// Double-homodyne measurement of the input together with resource mode 1.
///
/// `i₁` is the `u' − u''` difference; `i₂` is taken as `v'' − v'` so that
/// at `θ_p = π/2` it reads `|α|(p_in − e^{−r}p₁)`.
pub fn alice_measure(
    input: &InputSpec,
    resource_mode1: (f64, f64),
    r: f64,
    cfg: &HomodyneConfig,
) -> Result<MeasurementRecord> {
    if !(cfg.lo_amplitude > 0.0) {
        return Err(Error::OutOfRange {
            name: "lo_amplitude",
            value: cfg.lo_amplitude,
            expected: "> 0",
        });
    }
    let moments = homodyne_input_moments(input.x_in, input.p_in, resource_mode1, r, cfg);
    let out = double_homodyne_propagate(&moments)?;
    let d = out.as_slice();
    let i1 = detector_current(d[0], d[1]) - detector_current(d[2], d[3]);
    let i2 = detector_current(d[6], d[7]) - detector_current(d[4], d[5]);
    Ok(MeasurementRecord::new(
        i1 / cfg.lo_amplitude,
        i2 / cfg.lo_amplitude,
        (i1, i2),
    ))
}

/// Bob's mode `(e^r x₂, e^{−r} p₂)` displaced by `Δ = (X_u, P_v)`.
pub fn bob_reconstruct(bob_mode: (f64, f64), r: f64, record: &MeasurementRecord) -> QuadratureVector {
    let (x2, p2) = bob_mode;
    let bob = coherent(QuadratureVector::pair(r.exp() * x2, (-r).exp() * p2));
    bob.displace(&QuadratureVector::pair(record.x_u, record.p_v), 0)
        .expect("single mode")
        .mean()
        .clone()
}
