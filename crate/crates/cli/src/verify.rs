//! Built-in invariant suite behind `massjump verify`.

use massjump::medium::MediumParams;
use massjump::momentum_entropy::parseval_defect;
use massjump::position_entropy::{
    entropy_position, position_density, sandwich_check, sx_lower_bound, WindowSpec,
};
use massjump::quadrature::gaussian_calibration;
use massjump::scattering::{matching_matrix, solve_amplitudes};
use massjump::QuadSpec;
use num_complex::Complex64;

pub struct GroupResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const GROUP_NAMES: [&str; 6] =
    ["determinant", "residual", "parseval", "gaussian", "sandwich", "sx_bound"];

/// Deterministic 64-bit mixer; enough for canned verification grids.
struct Lcg(u64);

impl Lcg {
    fn next_unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }
}

fn canned_params(rng: &mut Lcg) -> MediumParams {
    let m_l = rng.in_range(0.0, 3.0);
    let m_r = rng.in_range(0.0, 3.0);
    let v = rng.in_range(0.7, 1.8);
    let a = rng.in_range(-1.5, 1.5);
    let e = m_l.max(m_r) * v * v + rng.in_range(0.1, 5.0);
    MediumParams::new(m_l, m_r, v, a, e).expect("canned draw is valid")
}

pub fn run_group(name: &str, spec: &QuadSpec) -> GroupResult {
    match name {
        "determinant" => {
            let mut rng = Lcg(0x1234_5678);
            let mut worst: f64 = 0.0;
            for _ in 0..500 {
                let p = canned_params(&mut rng);
                let m = matching_matrix(&p).expect("valid params");
                worst = worst.max((m.det() - Complex64::ONE).norm());
            }
            GroupResult {
                name: "determinant",
                passed: worst < 1e-12,
                detail: format!("max |det M - 1| = {worst:.3e} over 500 draws"),
            }
        }
        "residual" => {
            let mut rng = Lcg(0x9e37_79b9);
            let mut worst: f64 = 0.0;
            for _ in 0..500 {
                let p = canned_params(&mut rng);
                let sol = solve_amplitudes(&p).expect("valid params");
                worst = worst.max(sol.residual);
            }
            GroupResult {
                name: "residual",
                passed: worst < 1e-12,
                detail: format!("max matching residual = {worst:.3e} over 500 draws"),
            }
        }
        "parseval" => {
            let mut rng = Lcg(0xdead_beef);
            let mut worst: f64 = 0.0;
            let mut checked = 0;
            let mut failure = None;
            while checked < 6 {
                let p = canned_params(&mut rng);
                if p.regime() != massjump::Regime::Propagating {
                    continue;
                }
                let sol = solve_amplitudes(&p).expect("valid params");
                for n in [4u32, 8] {
                    let w = WindowSpec::new(n, 64).expect("static window");
                    match parseval_defect(&sol, &w, spec) {
                        Ok(d) => worst = worst.max(d),
                        Err(e) => failure = Some(e.to_string()),
                    }
                }
                checked += 1;
            }
            match failure {
                Some(msg) => GroupResult {
                    name: "parseval",
                    passed: false,
                    detail: format!("integration failed: {msg}"),
                },
                None => GroupResult {
                    name: "parseval",
                    passed: worst < 1e-8,
                    detail: format!("max relative defect = {worst:.3e} over {checked} points x 2 windows"),
                },
            }
        }
        "gaussian" => {
            let bbm = 1.0 + std::f64::consts::PI.ln();
            let mut worst: f64 = 0.0;
            let mut failure = None;
            for sigma in [0.3, 1.0, 10.0] {
                match gaussian_calibration(sigma, spec) {
                    Ok(cal) => worst = worst.max((cal.sum - bbm).abs()),
                    Err(e) => failure = Some(e.to_string()),
                }
            }
            match failure {
                Some(msg) => GroupResult {
                    name: "gaussian",
                    passed: false,
                    detail: format!("integration failed: {msg}"),
                },
                None => GroupResult {
                    name: "gaussian",
                    passed: worst < 1e-6,
                    detail: format!("max |S_x + S_p - (1 + ln pi)| = {worst:.3e}"),
                },
            }
        }
        "sandwich" => {
            let cases = [(2.0, 1.0), (1.5, 0.4), (3.0, 2.2), (1.2, 0.0)];
            let mut all_ok = true;
            let mut detail = String::new();
            for (alpha, beta) in cases {
                match sandwich_check(alpha, beta, spec) {
                    Ok(rep) => {
                        if !rep.within.iter().all(|&w| w) {
                            all_ok = false;
                            detail = format!(
                                "bracket violated at alpha={alpha}, beta={beta}: {:?}",
                                rep.margins
                            );
                        }
                    }
                    Err(e) => {
                        all_ok = false;
                        detail = format!("integration failed: {e}");
                    }
                }
            }
            if detail.is_empty() {
                detail = format!("{} (alpha, beta) cases inside their brackets", cases.len());
            }
            GroupResult { name: "sandwich", passed: all_ok, detail }
        }
        "sx_bound" => {
            let mut rng = Lcg(0x0bad_cafe);
            let mut worst = f64::INFINITY;
            let mut checked = 0;
            let mut failure = None;
            while checked < 200 {
                let p = canned_params(&mut rng);
                if p.regime() != massjump::Regime::Propagating {
                    continue;
                }
                checked += 1;
                let sol = solve_amplitudes(&p).expect("valid params");
                let dens = position_density(&sol).expect("propagating density");
                let w = WindowSpec::new(1, 64).expect("static window");
                match entropy_position(&dens, &w, spec) {
                    Ok(s) => worst = worst.min(s - sx_lower_bound(&dens)),
                    Err(e) => failure = Some(e.to_string()),
                }
            }
            match failure {
                Some(msg) => GroupResult {
                    name: "sx_bound",
                    passed: false,
                    detail: format!("integration failed: {msg}"),
                },
                None => GroupResult {
                    name: "sx_bound",
                    passed: worst >= -1e-9,
                    detail: format!("min (S_x - bound) = {worst:.6e} over 200 points"),
                },
            }
        }
        _ => unreachable!("unknown group filtered by caller"),
    }
}
