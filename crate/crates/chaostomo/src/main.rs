use chaostomo::basis::{bloch_from_density, OperatorBasis};
use chaostomo::estimator::{constrained_estimate, relative_eps, top_normal_eigenvalue, SolverOptions};
use chaostomo::linalg::pure_density;
use chaostomo::measurement::{design_matrix, simulate_record, Record};
use chaostomo::random::{haar_pure_state, SeededRng};
use chaostomo::spin::{build_floquet, build_jz, heisenberg_series, TopParams};
use std::time::Instant;

fn main() {
    let steps = 100usize;
    for lambda in [0.5, 2.0, 7.0] {
        let p = TopParams::new(10.0, 1.4, lambda).unwrap();
        let d = p.spin.dim();
        let basis = OperatorBasis::gell_mann(d).unwrap();
        let u = build_floquet(&p);
        let series = heisenberg_series(&u, &build_jz(p.spin), steps).unwrap();
        let design = design_matrix(&series, &basis).unwrap();
        let prefixes: Vec<_> = (1..=steps).map(|n| design.rows(0, n).into_owned()).collect();
        let lips: Vec<f64> = prefixes.iter().map(|p| 2.0 * top_normal_eigenvalue(p)).collect();

        let mut rng = SeededRng::new(1, 0);
        let psi = haar_pure_state(d, &mut rng).unwrap();
        let rho0 = pure_density(&psi);
        let _r0 = bloch_from_density(&rho0, &basis).unwrap();
        let record = simulate_record(&rho0, &series, 0.1, &mut rng).unwrap();

        let t0 = Instant::now();
        let mut total_iters = 0usize;
        let mut unconv = 0usize;
        let mut init: Option<chaostomo::linalg::BlochVector> = None;
        let mut fid_probe = Vec::new();
        for n in 1..=steps {
            let rec = Record { values: record.values.rows(0, n).into_owned(), noise_spread: 0.1 };
            let opts = SolverOptions {
                eps: relative_eps(&prefixes[n - 1], 1e-6),
                init: init.clone(),
                lipschitz: Some(lips[n - 1]),
                max_iters: 1200,
                rel_obj_tol: 1e-8,
                ..Default::default()
            };
            let est = constrained_estimate(&prefixes[n - 1], &rec, &basis, &opts).unwrap();
            total_iters += est.iterations;
            if !est.converged { unconv += 1; }
            if n == 50 || n == 100 {
                fid_probe.push((n, (psi.adjoint() * &est.rho * &psi)[(0, 0)].re));
            }
            init = Some(est.bloch);
        }
        let dt = t0.elapsed().as_secs_f64();
        println!(
            "lambda={lambda}: member sweep {:.1} s, iters total {total_iters}, unconverged {unconv}, fid {:?}",
            dt, fid_probe
        );
    }
}
