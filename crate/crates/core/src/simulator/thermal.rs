use crate::constitutive::{ElasticThermalParams, MPA};

use super::SimulationError;

/// Specific heat at constant strain, `c_θ = c_θ0/ρ − α² k θ / ρ`, J/(kg K).
pub fn heat_capacity(theta: f64, p: &ElasticThermalParams) -> f64 {
    p.c_theta0_over_rho - p.alpha * p.alpha * p.k * MPA * theta / p.rho
}

/// Advances θ over `dt` for
/// `c_θ θ̇ = −(α k θ / ρ) tr ε̇ + δ_i − ω (θ − θ₀)`
/// with `tr ε̇` (1/s) and `δ_i` (W/kg) held constant over the step and `c_θ`
/// frozen at the current temperature. The linear ODE is integrated exactly.
pub fn temperature_step(
    theta: f64,
    trace_strain_rate: f64,
    dissipation: f64,
    p: &ElasticThermalParams,
    dt: f64,
) -> Result<f64, SimulationError> {
    if !(theta > 0.0) {
        return Err(SimulationError::Thermal(format!("non-positive temperature {theta} K")));
    }
    let c = heat_capacity(theta, p);
    if !(c > 0.0) {
        return Err(SimulationError::Thermal(format!("non-positive heat capacity {c} J/(kg K) at {theta} K")));
    }
    if dt <= 0.0 {
        return Ok(theta);
    }
    // θ̇ = (A − B θ) / c with A = δ_i + ω θ₀, B = α k tr ε̇ / ρ + ω
    let a = dissipation + p.omega * p.theta0;
    let b = p.alpha * p.k * MPA * trace_strain_rate / p.rho + p.omega;
    let next = if b.abs() * dt / c < 1e-12 {
        theta + (a - b * theta) * dt / c
    } else {
        let eq = a / b;
        eq + (theta - eq) * (-b * dt / c).exp()
    };
    if !(next > 0.0) || !next.is_finite() {
        return Err(SimulationError::Thermal(format!("temperature update produced {next} K")));
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_is_stationary() {
        let p = ElasticThermalParams::vt6();
        assert_eq!(temperature_step(p.theta0, 0.0, 0.0, &p, 10.0).unwrap(), p.theta0);
    }

    #[test]
    fn adiabatic_extension_cools() {
        let mut p = ElasticThermalParams::vt6();
        p.omega = 0.0;
        let next = temperature_step(p.theta0, 1e-4, 0.0, &p, 1.0).unwrap();
        assert!(next < p.theta0);
        let next = temperature_step(p.theta0, -1e-4, 0.0, &p, 1.0).unwrap();
        assert!(next > p.theta0);
    }

    #[test]
    fn dissipation_heats() {
        let p = ElasticThermalParams::vt6();
        assert!(temperature_step(p.theta0, 0.0, 100.0, &p, 1.0).unwrap() > p.theta0);
    }

    #[test]
    fn free_cooling_matches_implicit_solution() {
        // c(θ) = a − bθ: (a − bθ₀) ln((θ − θ₀)/(θᵢ − θ₀)) − b (θ − θᵢ) = −ω t
        let p = ElasticThermalParams::vt6();
        let a = p.c_theta0_over_rho;
        let b = p.alpha * p.alpha * p.k * MPA / p.rho;
        let theta_i = p.theta0 + 5.0;
        let dt = 0.5;
        let mut theta = theta_i;
        for step in 1..=20_000 {
            theta = temperature_step(theta, 0.0, 0.0, &p, dt).unwrap();
            if step % 5000 == 0 {
                let t = step as f64 * dt;
                let lhs = (a - b * p.theta0) * ((theta - p.theta0) / (theta_i - p.theta0)).ln() - b * (theta - theta_i);
                assert!((lhs + p.omega * t).abs() < 1e-4 * p.omega * t, "t = {t}: {lhs} vs {}", -p.omega * t);
            }
        }
        assert!(theta > p.theta0 && theta < theta_i);
    }

    #[test]
    fn rejects_negative_heat_capacity() {
        let mut p = ElasticThermalParams::vt6();
        p.c_theta0_over_rho = 1.2058;
        assert!(temperature_step(p.theta0, 0.0, 0.0, &p, 1.0).is_err());
    }
}
