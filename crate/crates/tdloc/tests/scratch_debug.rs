use nalgebra::DVector;
use tdloc::forward::simulate_measurements;
use tdloc::scenario::{builtin, NoiseSpec};

#[test]
fn debug_trace() {
    let scn = builtin("sim10")
        .unwrap()
        .into_scenario(
            DVector::from_column_slice(&[200.0, -400.0]),
            DVector::from_column_slice(&[-1.0, 1.0]),
            350.0,
            NoiseSpec::Scalar(1e-4),
        )
        .unwrap()
        .with_sensor_prefix(8)
        .unwrap();
    let meas = simulate_measurements(&scn, 3).unwrap();

    use tdloc::linearize::*;
    let scaling = Scaling::for_sensors(&scn.sensors, scn.signal_speed);
    let sensors_s = scaling.scale_sensors(&scn.sensors);
    let speed = scaling.scale_speed(scn.signal_speed);
    let t_s = scaling.scale_delays(&meas.delays);
    let qn_s = scaling.scale_noise_cov(&scn.noise_cov());
    let g = build_g(&t_s, &sensors_s, speed).unwrap();
    let w = build_weight(&qn_s).unwrap();
    let sys = assemble(g, w, t_s);
    let cons = build_constraints(&sensors_s, 2);
    let problem = tdloc::sdp::SdpProblem::new(sys.c.clone(), cons);
    let sol = tdloc::sdp::solve(&problem);
    println!("status {:?} iters {}", sol.status, sol.iterations);
    for r in &sol.trace {
        println!(
            "it {:3} mu {:10.3e} gap {:10.3e} rp {:10.3e} rd {:10.3e} primal {:12.5e}",
            r.iteration, r.mu, r.gap, r.primal_residual, r.dual_residual, r.primal
        );
    }
}
