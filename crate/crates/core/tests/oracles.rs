//! Cross-checks against constructions that share no code with the library.

mod common;

use approx::assert_relative_eq;
use common::{binom, binom_u128, cd_vacuum, max_abs_diff, random_state, rng};
use twomode::analysis::{fit_power_law, run_sweep, SweepConfig};
use twomode::dynamics::{evolve_dephasing, evolve_hamiltonian, generator_matrix, EvolutionParams, GeneratorKind};
use twomode::entanglement::{cd_entanglement_generation, cd_vacuum_by_quadrature, negativity, partial_transpose};
use twomode::fock::{basis_change_matrix, cd_vacuum_state, BasisTag, BosonSector, ChangeBasis, DensityMatrix};
use twomode::metrology::{
    dissipative_qfi, dissipative_qfi_dephasing_closed_form, gamma_derivative, moment_sums, pure_state_qfi, qcrb_error,
    qfi_bounds, small_time_qfi, vectorize, LambdaMaxMode,
};
use twomode::{CMatrix, Complex64};

/// Creation operators of two modes truncated at `n` quanta each, on the
/// space `|p⟩⊗|q⟩` with index `p·(n+1) + q`.
fn creation_ops(n: usize) -> (CMatrix, CMatrix) {
    let d = n + 1;
    let mut a = CMatrix::zeros(d * d, d * d);
    let mut b = CMatrix::zeros(d * d, d * d);
    for p in 0..d {
        for q in 0..d {
            if p + 1 < d {
                a[((p + 1) * d + q, p * d + q)] = Complex64::new(((p + 1) as f64).sqrt(), 0.0);
            }
            if q + 1 < d {
                b[(p * d + q + 1, p * d + q)] = Complex64::new(((q + 1) as f64).sqrt(), 0.0);
            }
        }
    }
    (a, b)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `U[m][k] = ⟨m, N−m|_CD |k, N−k⟩_AB` from `c† = (a†+b†)/√2`,
/// `d† = (b†−a†)/√2` acting on the vacuum.
fn basis_change_from_modes(n: usize) -> CMatrix {
    let d = n + 1;
    let (a, b) = creation_ops(n);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let c = (&a + &b) * h;
    let dd = (&b - &a) * h;
    let mut u = CMatrix::zeros(d, d);
    for m in 0..=n {
        let mut v = nalgebra::DVector::<Complex64>::zeros(d * d);
        v[0] = Complex64::new(1.0, 0.0);
        for _ in 0..m {
            v = &c * v;
        }
        for _ in 0..n - m {
            v = &dd * v;
        }
        let norm = (factorial(m) * factorial(n - m)).sqrt();
        for k in 0..=n {
            u[(m, k)] = (v[k * d + (n - k)] / norm).conj();
        }
    }
    u
}

#[test]
fn basis_change_matches_mode_operators() {
    for n in 0..=10 {
        let oracle = basis_change_from_modes(n);
        let u = basis_change_matrix(BosonSector::new(n));
        assert!(max_abs_diff(&u, &oracle) < 1e-13, "N = {n}");
    }
}

#[test]
fn cd_vacuum_amplitudes_are_binomial() {
    // c†^N/√N! |0⟩ = 2^{−N/2} Σ_k √C(N,k) |k, N−k⟩_AB
    for n in [1usize, 5, 17, 40] {
        let psi = cd_vacuum_state(BosonSector::new(n), BasisTag::AB);
        for k in 0..=n {
            let expected = (binom(n as u64, k as u64) / 2f64.powi(n as i32)).sqrt();
            assert_relative_eq!(psi.amplitudes()[k].re, expected, max_relative = 1e-12);
            assert!(psi.amplitudes()[k].im.abs() < 1e-14);
        }
    }
}

/// Embeds a sector matrix in the two-mode space and transposes mode A
/// by index swapping: `⟨p q|ρ^{T_A}|p' q'⟩ = ⟨p' q|ρ|p q'⟩`.
fn dense_partial_transpose(rho: &DensityMatrix) -> CMatrix {
    let n = rho.sector().n_particles();
    let d = n + 1;
    let mut full = CMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            full[(k * d + (n - k), l * d + (n - l))] = rho.get(k, l);
        }
    }
    let mut pt = CMatrix::zeros(d * d, d * d);
    for p in 0..d {
        for q in 0..d {
            for p2 in 0..d {
                for q2 in 0..d {
                    pt[(p * d + q, p2 * d + q2)] = full[(p2 * d + q, p * d + q2)];
                }
            }
        }
    }
    pt
}

#[test]
fn negativity_matches_dense_partial_transpose() {
    let mut r = rng(1);
    for n in [1usize, 2, 4, 7] {
        for rank in [1, 2, n + 1] {
            let rho = random_state(&mut r, n, rank, BasisTag::AB);
            let pt = dense_partial_transpose(&rho);
            assert!(max_abs_diff(&pt, &partial_transpose(&rho).to_dense()) == 0.0);
            let trace_norm: f64 = pt.singular_values().iter().sum();
            assert_relative_eq!(
                negativity(&rho, BasisTag::AB).value(),
                0.5 * (trace_norm - 1.0),
                max_relative = 1e-10
            );
            // negative eigenvalues of the Hermitian partial transpose give the same number
            let neg_eigs: f64 = pt
                .symmetric_eigenvalues()
                .iter()
                .filter(|&&x| x < 0.0)
                .map(|x| -x)
                .sum();
            assert_relative_eq!(negativity(&rho, BasisTag::AB).value(), neg_eigs, max_relative = 1e-10);
        }
    }
}

#[test]
fn single_boson_cd_vacuum_negativity() {
    let rho = DensityMatrix::from_pure(&cd_vacuum_state(BosonSector::new(1), BasisTag::CD));
    assert!(negativity(&rho, BasisTag::CD).value() < 1e-15);
    assert_relative_eq!(negativity(&rho, BasisTag::AB).value(), 0.5, max_relative = 1e-14);
}

#[test]
fn moment_sums_match_explicit_convolution() {
    for n in [1u64, 3, 10, 25] {
        // c_d = Σ_k C(N,k) C(N,k+d), built term by term
        let c: Vec<f64> = (0..=n)
            .map(|d| (0..=n - d).map(|k| binom(n, k) * binom(n, k + d)).sum())
            .collect();
        for mu in [0.0, 0.05, 0.7, 3.0] {
            let (mut i0, mut i1, mut i2) = (0.0, 0.0, 0.0);
            for (d, &cd) in c.iter().enumerate() {
                let w = if d == 0 { 1.0 } else { 2.0 } * cd * (-mu * (d * d) as f64).exp();
                let d2 = (d * d) as f64;
                i0 += w;
                i1 += w * d2;
                i2 += w * d2 * d2;
            }
            let s = moment_sums(n as usize, mu).unwrap();
            let scale = 4f64.powi(n as i32);
            assert_relative_eq!(s.i(), i0 / scale, max_relative = 1e-13);
            assert_relative_eq!(s.i1(), i1, max_relative = 1e-12);
            assert_relative_eq!(s.i2(), i2, max_relative = 1e-12);
        }
    }
}

#[test]
fn fourth_moment_at_zero_in_integers() {
    // Σ C(N,k)C(N,ℓ)(k−ℓ)⁴ = 4^N N(3N−1)/4, exactly
    for n in 1u64..=30 {
        let mut total: i128 = 0;
        for k in 0..=n {
            for l in 0..=n {
                let d = k as i128 - l as i128;
                total += (binom_u128(n, k) * binom_u128(n, l)) as i128 * d.pow(4);
            }
        }
        let four_n = 1i128 << (2 * n);
        assert_eq!(4 * total, four_n * (n * (3 * n - 1)) as i128, "N = {n}");
        // the other commonly quoted form 3N(2N−1)/8 never matches
        assert_ne!(8 * total, four_n * (3 * n * (2 * n - 1)) as i128);
        let s = moment_sums(n as usize, 0.0).unwrap();
        assert_relative_eq!(s.i2(), total as f64, max_relative = 1e-12);
    }
}

#[test]
fn closed_form_matches_explicit_double_sum() {
    // N=8, γ=1, t=1e-6 and a few more points, straight from the (k, ℓ) sums
    for (n, t) in [(8u64, 1e-6), (8, 0.3), (13, 2.0)] {
        let (mut p, mut s2, mut s4) = (0.0, 0.0, 0.0);
        for k in 0..=n {
            for l in 0..=n {
                let d = k as f64 - l as f64;
                let w = binom(n, k) * binom(n, l) * (-t * d * d).exp();
                p += w;
                s2 += w * d * d / 2.0;
                s4 += w * d.powi(4) / 4.0;
            }
        }
        let expected = 4.0 * t * t * (s4 / p - (s2 / p).powi(2));
        let closed = dissipative_qfi_dephasing_closed_form(n as usize, 1.0, t).unwrap();
        assert_relative_eq!(closed, expected, max_relative = 1e-10);
    }
}

#[test]
fn small_time_leading_coefficient() {
    // Var over two binomials: F/t² → N(3N−1)/4 − N²/4 = N²/2 · (1 − 1/(2N))
    for n in [1usize, 8, 50, 100, 200, 1000] {
        let t = 1e-12;
        let nf = n as f64;
        let closed = dissipative_qfi_dephasing_closed_form(n, 1.0, t).unwrap();
        let leading = 0.5 * t * t * nf * nf * (1.0 - 0.5 / nf);
        assert_relative_eq!(closed, leading, max_relative = 1e-6);
        // against the 1 − 3/(8N) form the gap tends to −1/(8N), independent of t
        let gap = (closed - small_time_qfi(n, t)) / small_time_qfi(n, t);
        // corrections are first order in γtN
        assert!((gap + 1.0 / (8.0 * nf - 3.0)).abs() <= 10.0 * t * nf, "N = {n}: {gap}");
    }
}

#[test]
fn hamiltonian_dissipative_qfi_is_twice_variance() {
    // 4t² Σ (k−ℓ)² p_k p_ℓ = 4t² · 2 Var(k) = 2t²N for the binomial populations
    for n in [1usize, 4, 33, 64] {
        let sector = BosonSector::new(n);
        let gen = generator_matrix(sector, GeneratorKind::Hamiltonian);
        for t in [0.1, 1.0, 2.0] {
            let rho = evolve_hamiltonian(&cd_vacuum(n), EvolutionParams::new(1.0, t).unwrap()).unwrap();
            let f = dissipative_qfi(&vectorize(&rho).unwrap(), &gen, t).unwrap();
            assert_relative_eq!(f, 2.0 * t * t * n as f64, max_relative = 1e-12);
        }
    }
}

#[test]
fn bounds_reduce_to_trace_identities() {
    // λ_max·lower = Tr(∂ρ)² − (Tr ρ∂ρ)²/Trρ², λ_min·upper = Tr(∂ρ)²
    let mut r = rng(2);
    for n in [2usize, 5, 9] {
        let sector = BosonSector::new(n);
        let gen = generator_matrix(sector, GeneratorKind::Dephasing);
        let rho0 = random_state(&mut r, n, n + 1, BasisTag::AB);
        let t = 0.4;
        let rho = evolve_dephasing(&rho0, EvolutionParams::new(1.0, t).unwrap()).unwrap();
        let d = gamma_derivative(&rho, &gen, t).unwrap();
        let tr_dd = (&d * &d).trace().re;
        let tr_rd = (rho.entries() * &d).trace().re;
        let p = (rho.entries() * rho.entries()).trace().re;
        let b = qfi_bounds(&rho, &gen, t, LambdaMaxMode::Exact).unwrap();
        assert_relative_eq!(b.lower * b.lambda_max, tr_dd - tr_rd * tr_rd / p, max_relative = 1e-9);
        assert_relative_eq!(b.upper.unwrap() * b.lambda_min, tr_dd, max_relative = 1e-9);
        assert_relative_eq!(b.purity, p, max_relative = 1e-12);
    }
}

#[test]
fn sld_qfi_of_exponential_family() {
    // commuting family p_k ∝ e^{−γk}: the QFI is the classical Fisher information Var(k)
    let n = 3;
    let pops = |g: f64| {
        let w: Vec<f64> = (0..=n).map(|k| (-(g * k as f64)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect::<Vec<_>>()
    };
    let g = 0.7;
    let p = pops(g);
    let mean: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
    let var: f64 = p.iter().enumerate().map(|(k, x)| (k as f64 - mean).powi(2) * x).sum();
    let rho = DensityMatrix::diagonal(BosonSector::new(n), BasisTag::AB, &p).unwrap();
    let d = CMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j {
            Complex64::new(-(i as f64 - mean) * p[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let f = twomode::metrology::sld_qfi_exact(&rho, &d).unwrap();
    assert_relative_eq!(f, var, max_relative = 1e-12);
}

#[test]
fn pure_state_reference_values() {
    for n in [1usize, 6, 20] {
        let psi = cd_vacuum_state(BosonSector::new(n), BasisTag::CD);
        assert_relative_eq!(pure_state_qfi(&psi, 0.3), 0.09 * n as f64, max_relative = 1e-10);
    }
    let n = 16.0f64;
    assert_relative_eq!(qcrb_error(n).unwrap(), 1.0 / n.sqrt(), max_relative = 1e-15);
    let t = 0.5;
    assert_relative_eq!(
        qcrb_error(t * t * n / 2.0).unwrap(),
        2f64.sqrt() / (t * n.sqrt()),
        max_relative = 1e-14
    );
}

#[test]
fn rotated_vacuum_mixture_gives_cd_negativity() {
    for n in [2usize, 4, 8] {
        for mu in [0.1, 1.0] {
            let p = EvolutionParams::new(1.0, mu).unwrap();
            let mixture = cd_vacuum_by_quadrature(n, p, 80).unwrap();
            let direct = evolve_dephasing(&cd_vacuum(n), p).unwrap().change_basis(BasisTag::CD);
            assert!(
                max_abs_diff(mixture.entries(), direct.entries()) < 1e-11,
                "N = {n}, γt = {mu}"
            );
            assert_relative_eq!(
                negativity(&mixture, BasisTag::CD).value(),
                cd_entanglement_generation(n, p).unwrap().value(),
                max_relative = 1e-9
            );
        }
    }
}

#[test]
fn long_time_cd_negativity_limit() {
    // fully dephased N = 2 state is diag(1/4, 1/2, 1/4) in AB
    let u = basis_change_from_modes(2);
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(0.25, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.25, 0.0),
    ]));
    let cd = &u * diag * u.adjoint();
    let mut expected = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            if k != l {
                expected += 0.5 * cd[(k, l)].norm();
            }
        }
    }
    let late = cd_entanglement_generation(2, EvolutionParams::new(1.0, 200.0).unwrap()).unwrap();
    assert_relative_eq!(late.value(), expected, max_relative = 1e-12);
    assert!(expected > 0.0);
}

#[test]
fn purity_double_sum() {
    let n = 4u64;
    let mu = 1.0;
    let mut direct = 0.0;
    for k in 0..=n {
        for l in 0..=n {
            let d = k as f64 - l as f64;
            direct += binom(n, k) * binom(n, l) * (-mu * d * d).exp();
        }
    }
    direct /= 4f64.powi(n as i32);
    let rho = evolve_dephasing(&cd_vacuum(n as usize), EvolutionParams::new(1.0, mu).unwrap()).unwrap();
    assert_relative_eq!(rho.purity(), direct, max_relative = 1e-13);
    assert!((twomode::metrology::purity_by_quadrature(n as usize, mu).unwrap() - direct).abs() < 1e-10);
    assert_relative_eq!(binom(4, 2) / 16.0, 0.375);
}

#[test]
fn sweep_point_matches_closed_form() {
    let recs = run_sweep(&SweepConfig::new(vec![10], 1.0, vec![1e-3])).unwrap();
    let closed = dissipative_qfi_dephasing_closed_form(10, 1.0, 1e-3).unwrap();
    assert_relative_eq!(recs[0].qfi_diss, closed, max_relative = 1e-10);
}

#[test]
fn wide_grid_dissipative_slopes() {
    // on N = 10..1000 the t = 0.01 slope comes out near 0.74
    let grid: Vec<usize> = (10..=1000).step_by(10).collect();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| (n as f64, dissipative_qfi_dephasing_closed_form(n, 1.0, 0.01).unwrap()))
        .collect();
    let fit = fit_power_law(&pts).unwrap();
    assert!((fit.beta - 0.739).abs() < 0.02, "{}", fit.beta);
}
