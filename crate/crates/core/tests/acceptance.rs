//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use siegel_jacobi::domains::{fc, fc_inv, partial_cayley, EtaBallPoint, SiegelBallPoint};
use siegel_jacobi::dynamics::{
    build_ball_system, build_upper_system, critical_points, integrate_oracle, monodromy, propagate_coupled_ball,
    riccati_rhs, riccati_solve_const, EtaSystem, Field, FnSystem,
    LinearHamiltonian, PeriodicLift,
};
use siegel_jacobi::group::{act_ball, act_eta, act_upper, theta};
use siegel_jacobi::kahler::{
    berry_phase, coordinate_dim, energy, energy_gradient, energy_zw, fc_pushforward, flow_relation_residual,
    kernel_diag, kernel_eta, metric, norm_const_j, norm_const_lambda, pushforward_action, two_form,
    two_form_product_eta, DEFAULT_METRIC_STEP,
};
use siegel_jacobi::linalg::{
    c, complexify, conj, is_hamiltonian_real, mat_exp, max_abs, max_abs_vec, real_part, sp_complex_algebra_residual,
    sp_complex_residual, symplectic_residual_real, CMatrix, CVector,
};
use siegel_jacobi::random::{
    complex_matrix, complex_vector, element_c_with, element_r_with, eta_ball_point_with, hamiltonian_with,
    jacobi_ball_point_with, jacobi_upper_point_with, rng,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn scalar(v: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, v)
}

fn scalar_hamiltonian(eps: Complex64, eps0: f64, epsm: Complex64, k: f64) -> LinearHamiltonian {
    LinearHamiltonian::new(CVector::from_element(1, eps), scalar(c(eps0, 0.0)), scalar(epsm), scalar(epsm.conj()), k)
        .expect("hermitian fixture")
}

fn tanh_fixture() -> Outcome {
    let h = scalar_hamiltonian(c(0.0, 0.0), 0.0, c(1.0, 0.0), 2.0);
    let (sys, _) = build_ball_system(&h);
    let w0 = CMatrix::zeros(1, 1);
    let mut closed_err = 0f64;
    for i in 0..=200 {
        let t = 2.0 * i as f64 / 200.0;
        let w = riccati_solve_const(&w0, &sys, t).map_err(|e| e.to_string())?;
        closed_err = closed_err.max((w[(0, 0)] - c(0.0, -t.tanh())).norm());
    }
    let ode = FnSystem { dim: 1, f: |_t: f64, y: &CVector| CVector::from_element(1, riccati_rhs(&scalar(y[0]), &sys)[(0, 0)]) };
    let tr = integrate_oracle(&ode, &CVector::zeros(1), 2.0, 1e-3).map_err(|e| e.to_string())?;
    let mut oracle_err = 0f64;
    for (t, y) in tr.times.iter().zip(&tr.states) {
        oracle_err = oracle_err.max((y[0] - c(0.0, -t.tanh())).norm());
    }
    ensure(
        closed_err <= 1e-10 && oracle_err <= 1e-8,
        format!("closed form err {closed_err:.2e} (<= 1e-10), oracle err {oracle_err:.2e} (<= 1e-8)"),
    )
}

fn circular_fixture() -> Outcome {
    let omega = 1.3;
    let h = scalar_hamiltonian(c(0.0, 0.0), 2.0 * omega, c(0.0, 0.0), 3.0);
    let (sys, _) = build_ball_system(&h);
    let w0 = scalar(c(0.4, 0.2));
    let mut err = 0f64;
    for i in 0..=50 {
        let t = i as f64 * 0.1;
        let w = riccati_solve_const(&w0, &sys, t).map_err(|e| e.to_string())?;
        err = err.max((w[(0, 0)] - (c(0.0, -2.0 * omega * t)).exp() * w0[(0, 0)]).norm());
    }
    let period = PI / omega;
    let closure = (riccati_solve_const(&w0, &sys, period).map_err(|e| e.to_string())? - &w0)[(0, 0)].norm();
    let lift = PeriodicLift::constant(sys.lift().h, Field::Complex);
    let rep = monodromy(&lift, period, 1).map_err(|e| e.to_string())?;
    let circle = rep.multipliers.iter().fold(0f64, |a, l| a.max((l.norm() - 1.0).abs()));
    ensure(
        err <= 1e-8 && closure <= 1e-8 && circle <= 1e-8,
        format!("closed form err {err:.2e}, closure after pi/omega {closure:.2e}, |multiplier| - 1 {circle:.2e} (all <= 1e-8)"),
    )
}

fn symplectic_lift_suite() -> Outcome {
    let mut r = rng(301);
    let mut worst = [0f64; 4];
    let mut bad = 0;
    for i in 0..200 {
        let n = 1 + i % 3;
        let h = hamiltonian_with(&mut r, n, 4.0, 0.5);
        let hr = real_part(&build_upper_system(&h).0.lift().h);
        let hc = build_ball_system(&h).0.lift().h;
        if !is_hamiltonian_real(&hr, 1e-11).map_err(|e| e.to_string())? {
            bad += 1;
        }
        worst[0] = worst[0].max(sp_complex_algebra_residual(&hc).map_err(|e| e.to_string())?);
        worst[1] = worst[1].max(max_abs(&(complexify(&hr).map_err(|e| e.to_string())? - &hc)));
        for t in [0.5, 2.0] {
            let er = real_part(&mat_exp(&siegel_jacobi::linalg::to_complex(&hr), t).map_err(|e| e.to_string())?);
            worst[2] = worst[2].max(symplectic_residual_real(&er).map_err(|e| e.to_string())?);
            worst[3] = worst[3].max(sp_complex_residual(&mat_exp(&hc, t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
        }
    }
    ensure(
        bad == 0 && worst[0] <= 1e-11 && worst[1] <= 1e-11 && worst[2] <= 1e-9 && worst[3] <= 1e-9,
        format!(
            "200 Hamiltonians: non-Hamiltonian h_r {bad}, h_c block residual {:.2e}, complexify(h_r) - h_c {:.2e} (<= 1e-11), exp symplectic real {:.2e} / complex {:.2e} (<= 1e-9)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn decoupling() -> Outcome {
    let mut r = rng(401);
    let mut worst = 0f64;
    for i in 0..50 {
        let n = 1 + i % 3;
        let h = hamiltonian_with(&mut r, n, 4.0, 0.5);
        let x0 = jacobi_ball_point_with(&mut r, n, 0.2);
        let coupled = propagate_coupled_ball(&x0, &h, 2.0, 1e-3).map_err(|e| e.to_string())?;
        let eta0 = fc_inv(&x0).map_err(|e| e.to_string())?.eta;
        let eta_tr = integrate_oracle(&EtaSystem { hamiltonian: &h }, &eta0, 2.0, 1e-3).map_err(|e| e.to_string())?;
        for ((t, x), (s, eta)) in coupled.iter().zip(eta_tr.times.iter().zip(&eta_tr.states)) {
            if (t - s).abs() > 1e-12 {
                return Err(format!("time grids differ ({t} vs {s})"));
            }
            let split = fc_inv(x).map_err(|e| e.to_string())?.eta;
            worst = worst.max(max_abs_vec(&(split - eta)));
        }
    }
    ensure(worst <= 1e-7, format!("50 trajectories on [0, 2]: max |fc_inv(z, W) - eta| = {worst:.2e} (<= 1e-7)"))
}

fn equivariance() -> Outcome {
    let mut r = rng(501);
    let (mut theta_res, mut fc_res) = (0f64, 0f64);
    for i in 0..200 {
        let n = 1 + i % 3;
        let h = element_r_with(&mut r, n);
        let x = jacobi_upper_point_with(&mut r, n);
        let lhs = partial_cayley(&act_upper(&h, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = act_ball(&theta(&h).map_err(|e| e.to_string())?, &partial_cayley(&x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let scale = 1f64.max(max_abs_vec(&lhs.z));
        theta_res = theta_res.max(max_abs_vec(&(&lhs.z - &rhs.z)) / scale).max(max_abs(&(lhs.w.matrix() - rhs.w.matrix())));

        let g = element_c_with(&mut r, n);
        let p = eta_ball_point_with(&mut r, n, 0.05);
        let a = fc(&act_eta(&g, &p).map_err(|e| e.to_string())?);
        let b = act_ball(&g, &fc(&p)).map_err(|e| e.to_string())?;
        let scale = 1f64.max(max_abs_vec(&a.z));
        fc_res = fc_res.max(max_abs_vec(&(&a.z - &b.z)) / scale).max(max_abs(&(a.w.matrix() - b.w.matrix())));
    }
    ensure(
        theta_res <= 1e-9 && fc_res <= 1e-9,
        format!("200 pairs: partial Cayley square {theta_res:.2e}, fc square {fc_res:.2e} (<= 1e-9)"),
    )
}

fn kahler_suite() -> Outcome {
    let mut r = rng(601);
    let k = 4.5;
    let mut kernel_rel = 0f64;
    for i in 0..200 {
        let p = eta_ball_point_with(&mut r, 1 + i % 3, 0.05);
        let a = kernel_eta(&p, k).map_err(|e| e.to_string())?;
        let b = kernel_diag(&fc(&p), k).map_err(|e| e.to_string())?;
        kernel_rel = kernel_rel.max((a - b).abs() / a);
    }
    let mut not_hpd = 0;
    let mut herm = 0f64;
    for i in 0..100 {
        let x = jacobi_ball_point_with(&mut r, 1 + i % 3, 0.05);
        let g = metric(&x, k, DEFAULT_METRIC_STEP).map_err(|e| e.to_string())?;
        herm = herm.max(g.hermitian_residual());
        if !g.is_positive_definite() {
            not_hpd += 1;
        }
    }
    let (mut inv, mut pull) = (0f64, 0f64);
    for i in 0..60 {
        let n = 1 + i % 3;
        let dim = coordinate_dim(n);
        let (t1, t2) = (complex_vector(&mut r, dim, 1.0), complex_vector(&mut r, dim, 1.0));
        let x = jacobi_ball_point_with(&mut r, n, 0.1);
        let g = element_c_with(&mut r, n);
        let before = two_form(&x, k, &t1, &t2).map_err(|e| e.to_string())?;
        let gx = act_ball(&g, &x).map_err(|e| e.to_string())?;
        let after = two_form(
            &gx,
            k,
            &pushforward_action(&g, &x, &t1).map_err(|e| e.to_string())?,
            &pushforward_action(&g, &x, &t2).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        inv = inv.max((after - before).abs() / before.abs().max(1.0));

        let p = eta_ball_point_with(&mut r, n, 0.1);
        let prod = two_form_product_eta(&p, k, &t1, &t2).map_err(|e| e.to_string())?;
        let pulled = two_form(
            &fc(&p),
            k,
            &fc_pushforward(&p, &t1).map_err(|e| e.to_string())?,
            &fc_pushforward(&p, &t2).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        pull = pull.max((prod - pulled).abs() / prod.abs().max(1.0));
    }
    ensure(
        kernel_rel <= 1e-11 && not_hpd == 0 && herm <= 1e-6 && inv <= 1e-6 && pull <= 1e-6,
        format!(
            "kernel_eta vs kernel_diag o fc {kernel_rel:.2e} (<= 1e-11); metric not HPD at {not_hpd}/100 points (hermitian residual {herm:.2e}); two-form invariance {inv:.2e}, FC pullback {pull:.2e} (<= 1e-6)"
        ),
    )
}

/// `∫_{|w|<1} (1 − |w|²)^p d²w` in polar form by composite Simpson.
fn disk_quadrature(p: f64) -> f64 {
    let m = 4000;
    let h = 1.0 / m as f64;
    let f = |r: f64| 2.0 * PI * r * (1.0 - r * r).powf(p);
    let mut s = f(0.0) + f(1.0);
    for i in 1..m {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Importance-sampled `∫ (1 − |w|²)^{k/2 − 3} e^{−F(z, w)} d²z d²w` at n = 1:
/// `w` uniform on the disk (stratified in `|w|²`), `z` standard complex normal.
fn monte_carlo_measure(k: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let p = k / 2.0 - 3.0;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..samples {
        let r2 = (i as f64 + r.random::<f64>()) / samples as f64;
        let phi = 2.0 * PI * r.random::<f64>();
        let w = Complex64::from_polar(r2.sqrt(), phi);
        let z = Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal));
        let m = 1.0 / (1.0 - r2);
        let f = m * (z.norm_sqr() + (z * z * w.conj()).re);
        let proposal = (-0.5 * z.norm_sqr()).exp() / (2.0 * PI) / PI;
        let v = (1.0 - r2).powf(p) * (-f).exp() / proposal;
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / samples as f64;
    let stderr = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    (mean, stderr)
}

fn normalization() -> Outcome {
    let mut worst = 0f64;
    for p in [0.0, 1.0, 2.0] {
        let j = norm_const_j(1, p).map_err(|e| e.to_string())?;
        worst = worst.max((j - disk_quadrature(p)).abs()).max((j - PI / (p + 1.0)).abs());
    }
    let lambda = norm_const_lambda(1, 5.0).map_err(|e| e.to_string())?;
    let (mc, se) = monte_carlo_measure(5.0, 10_000_000, 701);
    let rel = (mc * lambda - 1.0).abs();
    ensure(
        worst <= 1e-6 && rel <= 0.01 && (lambda - 1.0 / (PI * PI)).abs() <= 1e-15,
        format!(
            "J_1(p) vs disk quadrature {worst:.2e} (<= 1e-6); Lambda_1(5) = {lambda:.6e}, MC 1/Lambda = {mc:.5} +- {se:.1e}, rel err {rel:.2e} (<= 1e-2)"
        ),
    )
}

/// Hamiltonian whose lift is elliptic, so that the ball flow has a fixed point.
fn elliptic_hamiltonian<R: Rng>(r: &mut R, n: usize, k: f64) -> LinearHamiltonian {
    let a = complex_matrix(r, n, 0.2);
    let mut eps0 = (&a + a.adjoint()) * c(0.5, 0.0);
    for i in 0..n {
        eps0[(i, i)] += c(2.0 + i as f64, 0.0);
    }
    let m = complex_matrix(r, n, 0.3);
    let epsm = (&m + m.transpose()) * c(0.5, 0.0);
    LinearHamiltonian::new(complex_vector(r, n, 0.5), eps0, epsm.clone(), conj(&epsm), k).expect("hermitian")
}

fn energy_phase_suite() -> Outcome {
    let mut r = rng(801);
    let mut forms = 0f64;
    for i in 0..100 {
        let n = 1 + i % 3;
        let h = hamiltonian_with(&mut r, n, 5.0, 1.0);
        let x = jacobi_ball_point_with(&mut r, n, 0.05);
        let a = energy(&fc_inv(&x).map_err(|e| e.to_string())?, &h).map_err(|e| e.to_string())?;
        let b = energy_zw(&x, &h).map_err(|e| e.to_string())?;
        forms = forms.max((a - b).abs() / a.abs().max(1.0));
    }

    let mut drift = 0f64;
    for i in 0..6 {
        let n = 1 + i % 3;
        let h = hamiltonian_with(&mut r, n, 5.0, 0.5);
        let x0 = jacobi_ball_point_with(&mut r, n, 0.3);
        let e0 = energy_zw(&x0, &h).map_err(|e| e.to_string())?;
        for (_, x) in propagate_coupled_ball(&x0, &h, 5.0, 2e-3).map_err(|e| e.to_string())?.iter().step_by(50) {
            drift = drift.max((energy_zw(x, &h).map_err(|e| e.to_string())? - e0).abs());
        }
    }

    let mut grad = 0f64;
    for i in 0..30 {
        let n = 1 + i % 3;
        let h = hamiltonian_with(&mut r, n, 5.0, 1.0);
        let p = eta_ball_point_with(&mut r, n, 0.2);
        let (ge, gw) = energy_gradient(&p, &h).map_err(|e| e.to_string())?;
        let f = |eta: &CVector, w: &CMatrix| -> f64 {
            let q = EtaBallPoint::new(eta.clone(), SiegelBallPoint::with_margin(w.clone(), 0.0).unwrap()).unwrap();
            energy(&q, &h).unwrap()
        };
        let hs = 1e-6;
        let wirtinger_bar = |plus_re: f64, minus_re: f64, plus_im: f64, minus_im: f64| {
            c((plus_re - minus_re) / (2.0 * hs), (plus_im - minus_im) / (2.0 * hs)) * 0.5
        };
        for a in 0..n {
            let mut e = CVector::zeros(n);
            e[a] = c(hs, 0.0);
            let (pr, mr) = (f(&(&p.eta + &e), p.w.matrix()), f(&(&p.eta - &e), p.w.matrix()));
            e[a] = c(0.0, hs);
            let (pi, mi) = (f(&(&p.eta + &e), p.w.matrix()), f(&(&p.eta - &e), p.w.matrix()));
            let fd = wirtinger_bar(pr, mr, pi, mi);
            grad = grad.max((fd - ge[a]).norm() / ge[a].norm().max(1.0));
        }
        for i in 0..n {
            for j in i..n {
                let mut d = CMatrix::zeros(n, n);
                d[(i, j)] = c(hs, 0.0);
                d[(j, i)] = c(hs, 0.0);
                let (pr, mr) = (f(&p.eta, &(p.w.matrix() + &d)), f(&p.eta, &(p.w.matrix() - &d)));
                let d = &d * c(0.0, 1.0);
                let (pi, mi) = (f(&p.eta, &(p.w.matrix() + &d)), f(&p.eta, &(p.w.matrix() - &d)));
                let fd = wirtinger_bar(pr, mr, pi, mi);
                let exact = if i == j { gw[(i, j)] } else { gw[(i, j)] * 2.0 };
                grad = grad.max((fd - exact).norm() / exact.norm().max(1.0));
            }
        }
    }

    let (mut crit, mut found) = (0f64, 0usize);
    for i in 0..20 {
        let n = 1 + i % 3;
        let h = elliptic_hamiltonian(&mut r, n, 2.0 * n as f64 + 3.0);
        let (sys, _) = build_ball_system(&h);
        let cp = critical_points(&h).map_err(|e| e.to_string())?;
        for w in &cp.points {
            found += 1;
            let p = EtaBallPoint::new(complex_vector(&mut r, n, 1.0), w.clone()).map_err(|e| e.to_string())?;
            let (_, gw) = energy_gradient(&p, &h).map_err(|e| e.to_string())?;
            crit = crit.max(max_abs(&riccati_rhs(w.matrix(), &sys))).max(max_abs(&gw));
        }
    }

    let fixed = jacobi_ball_point_with(&mut r, 2, 0.2);
    let constant: Vec<_> = (0..10).map(|i| (i as f64, fixed.clone())).collect();
    let berry_const = berry_phase(&constant, 4.0).map_err(|e| e.to_string())?;
    let h = hamiltonian_with(&mut r, 2, 5.0, 0.5);
    let x0 = jacobi_ball_point_with(&mut r, 2, 0.3);
    let fine = propagate_coupled_ball(&x0, &h, 1.0, 1.0 / 256.0).map_err(|e| e.to_string())?;
    let phases: Vec<f64> = [16usize, 8, 4]
        .iter()
        .map(|&stride| {
            let path: Vec<_> = fine.iter().step_by(stride).cloned().collect();
            berry_phase(&path, 5.0).unwrap()
        })
        .collect();
    let ratio = (phases[0] - phases[1]) / (phases[1] - phases[2]);

    ensure(
        forms <= 1e-10 && drift <= 1e-8 && grad <= 1e-6 && found > 0 && crit <= 1e-9 && berry_const == 0.0
            && (ratio - 4.0).abs() <= 0.2,
        format!(
            "(eta,W) vs (z,W) {forms:.2e} (<= 1e-10); drift on [0,5] {drift:.2e} (<= 1e-8); gradient vs FD {grad:.2e} (<= 1e-6); {found} critical points, residual {crit:.2e} (<= 1e-9); constant-path Berry {berry_const:.1e}; refinement ratio {ratio:.3} (~4)"
        ),
    )
}

fn flow_consistency() -> Outcome {
    let mut r = rng(901);
    let mut worst = 0f64;
    for n in 1..=2 {
        for _ in 0..20 {
            let h = hamiltonian_with(&mut r, n, 5.0, 0.5);
            let x = jacobi_ball_point_with(&mut r, n, 0.2);
            worst = worst.max(flow_relation_residual(&x, &h, DEFAULT_METRIC_STEP).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst <= 1e-5, format!("40 points: max |i conj(G) xdot - dH/dconj(x)| = {worst:.2e} (<= 1e-5)"))
}

fn matched(values: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> f64 {
    let mut used = vec![false; values.len()];
    let mut worst = 0f64;
    for v in values {
        let t = f(*v);
        let (j, d) = (0..values.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (values[j] - t).norm() / (1.0 + t.norm())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("unmatched value");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn floquet_suite() -> Outcome {
    let mut r = rng(1001);
    let (mut sympl, mut recip, mut conj_res) = (0f64, 0f64, 0f64);
    for i in 0..12 {
        let n = 1 + i % 2;
        let period = 1.0 + 0.25 * i as f64;
        let (field, h0, h1) = if i % 3 == 0 {
            let a = build_upper_system(&hamiltonian_with(&mut r, n, 4.0, 0.6)).0.lift().h;
            let b = build_upper_system(&hamiltonian_with(&mut r, n, 4.0, 0.6)).0.lift().h;
            (Field::Real, a, b)
        } else {
            let a = build_ball_system(&hamiltonian_with(&mut r, n, 4.0, 0.6)).0.lift().h;
            let b = build_ball_system(&hamiltonian_with(&mut r, n, 4.0, 0.6)).0.lift().h;
            (Field::Complex, a, b)
        };
        let lift = PeriodicLift::periodic(period, field, |t| &h0 + &h1 * c((2.0 * PI * t / period).cos(), 0.0));
        let rep = monodromy(&lift, period, 400).map_err(|e| e.to_string())?;
        sympl = sympl.max(rep.symplectic_residual);
        recip = recip.max(matched(&rep.multipliers, |l| 1.0 / l));
        conj_res = conj_res.max(matched(&rep.multipliers, |l| l.conj()));
    }
    ensure(
        sympl <= 1e-8 && recip <= 1e-6 && conj_res <= 1e-6,
        format!("12 periodic systems: monodromy symplectic residual {sympl:.2e} (<= 1e-8); 1/lambda pairing {recip:.2e}, conjugate pairing {conj_res:.2e} (<= 1e-6)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("tanh fixture", tanh_fixture, Duration::from_secs(1)),
        ("circular fixture", circular_fixture, Duration::from_secs(10)),
        ("symplectic-lift suite", symplectic_lift_suite, Duration::from_secs(10)),
        ("decoupling", decoupling, Duration::from_secs(30)),
        ("equivariance suite", equivariance, Duration::from_secs(30)),
        ("Kahler suite", kahler_suite, Duration::from_secs(60)),
        ("normalization oracle", normalization, Duration::from_secs(60)),
        ("energy/phase suite", energy_phase_suite, Duration::from_secs(60)),
        ("Hamiltonian-flow consistency", flow_consistency, Duration::from_secs(60)),
        ("Floquet suite", floquet_suite, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; exceeded runtime budget {:.0} s", budget.as_secs_f64())),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.2} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
