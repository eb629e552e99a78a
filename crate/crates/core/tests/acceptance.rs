// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, plus NOTE lines for
//! outcomes that are recorded rather than asserted. Exits nonzero on failure.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;

use ucc_lcu::cost::{
    cascade_count, comparison, crossover_rank, prepare_cnot_count, synth_cascade, total_lcu_count,
    RhoPolicy,
};
use ucc_lcu::fermion::{excitation_pauli_sum, projector_pauli_sum};
use ucc_lcu::lcu::{
    amplification_norm, apply_postselected, build_postselect, pad_and_synth_oaa,
    verify_end_to_end_with, zero_block, LcuOptions, VerifyMode, DEFAULT_GRID,
};
use ucc_lcu::prepare::{
    prepared_deviation, synth_prepare, synth_prepare_with, PrepareMode, RotationConvention,
};
use ucc_lcu::select::{derive_select_plan, paper_fixture_plan, synth_select, verify_select};
use ucc_lcu::{
    exact_unitary, ucc_factor_expand, unitary_of, DenseOperator, Execution, PauliString,
    Statevector, UccFactor,
};

type Check = Result<String, String>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn factor(occ: &[usize], virt: &[usize], theta: f64, n: usize) -> UccFactor {
    UccFactor::new(occ.to_vec(), virt.to_vec(), theta, n).expect("valid factor")
}

fn frob(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.sub(b).frobenius_norm()
}

/// Factors exercised for ranks 1..=3: adjacent orbitals, plus a gapped case
/// for ranks 1 and 2.
fn factors(rank: usize, theta: f64) -> Vec<UccFactor> {
    let mut v = vec![UccFactor::adjacent(rank, theta).unwrap()];
    match rank {
        1 => v.push(factor(&[0], &[2], theta, 3)),
        2 => v.push(factor(&[0, 1], &[4, 6], theta, 7)),
        _ => {}
    }
    v
}

// Dense Jordan–Wigner annihilator built from basis-state action: qubit 0 is
// the most significant bit and the parity string runs over higher indices.
fn dense_annihilator(k: usize, n: usize) -> Array2<Complex64> {
    let dim = 1usize << n;
    let mut m = Array2::zeros((dim, dim));
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    for x in 0..dim {
        if bit(x, k) == 1 {
            let parity: usize = (k + 1..n).map(|q| bit(x, q)).sum();
            let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
            m[[x ^ (1 << (n - 1 - k)), x]] = c(sign);
        }
    }
    m
}

fn dense_excitation(f: &UccFactor) -> Array2<Complex64> {
    let n = f.num_qubits();
    let dim = 1usize << n;
    let mut a = Array2::<Complex64>::eye(dim);
    for &v in f.virtuals().iter().rev() {
        let ad = dense_annihilator(v, n).t().mapv(|z| z.conj());
        a = a.dot(&ad);
    }
    for &o in f.occupied() {
        a = a.dot(&dense_annihilator(o, n));
    }
    a
}

fn ac1() -> Check {
    let start = Instant::now();
    let thetas = [0.3, -0.3, FRAC_PI_4, 1.0, FRAC_PI_2, 2.5];
    let mut worst = 0.0f64;
    for rank in 1..=3 {
        for &t in &thetas {
            for f in factors(rank, t) {
                let got = ucc_factor_expand(&f)
                    .to_dense(f.num_qubits())
                    .map_err(|e| e.to_string())?;
                worst = worst.max(frob(&got, &exact_unitary(&f).unwrap()));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if worst <= 1e-10 && secs < 30.0 {
        Ok(format!(
            "max ‖expand − exp(θK)‖_F = {worst:.2e}, {secs:.2}s"
        ))
    } else {
        Err(format!("max deviation {worst:.2e}, {secs:.2}s"))
    }
}

fn ac2() -> Check {
    let (mut square, mut cube_as_stated, mut cube_negated) = (0.0f64, 0.0f64, 0.0f64);
    let dev = |m: Array2<Complex64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for rank in 1..=3 {
        for f in factors(rank, 0.0) {
            let n = f.num_qubits();
            let a = dense_excitation(&f);
            let ad = a.t().mapv(|z| z.conj());
            let k = &a - &ad;
            let k_lib = excitation_pauli_sum(&f).to_dense(n).unwrap().into_matrix();
            let p = projector_pauli_sum(&f).to_dense(n).unwrap().into_matrix();
            let k2 = k.dot(&k);
            let k3 = k2.dot(&k);
            square = square
                .max(dev(&k_lib - &k))
                .max(dev(&k2 + &p))
                .max(dev(&p - &(a.dot(&ad) + ad.dot(&a))));
            cube_as_stated = cube_as_stated.max(dev(&k3 - &k));
            cube_negated = cube_negated.max(dev(&k3 + &k));
        }
    }
    let detail = format!(
        "K² = −P to {square:.1e}; ‖K³ − K‖_max = {cube_as_stated:.1e}, ‖K³ + K‖_max = {cube_negated:.1e}"
    );
    if square <= 1e-12 && cube_as_stated <= 1e-12 {
        Ok(detail)
    } else if square <= 1e-12 && cube_negated <= 1e-12 {
        Err(format!(
            "{detail}; with A² = 0 the cube is −(AA†A − A†AA†) = −K, so K³ = K cannot hold"
        ))
    } else {
        Err(detail)
    }
}

const PRINTED_XY: [(&str, f64); 8] = [
    ("XXYX", 1.0),
    ("YXYY", 1.0),
    ("XYYY", 1.0),
    ("XXXY", 1.0),
    ("YXXX", -1.0),
    ("XYXX", -1.0),
    ("YYYX", -1.0),
    ("YYXY", -1.0),
];

const PRINTED_IZ: [(&str, f64); 8] = [
    ("IIII", 1.0),
    ("IIZZ", 1.0),
    ("ZZII", 1.0),
    ("ZIZI", -1.0),
    ("IZZI", -1.0),
    ("ZIIZ", -1.0),
    ("IZIZ", -1.0),
    ("ZZZZ", 1.0),
];

fn ac3() -> (Check, String) {
    // Orbitals l, k, j, i are qubits 0..3 with l, k occupied.
    let thetas = [0.3, -0.3, FRAC_PI_4, 1.0, FRAC_PI_2, 2.0, 2.5];
    let mut relations = BTreeSet::new();
    let mut problems = Vec::new();
    for &t in &thetas {
        let f = UccFactor::adjacent(2, t).unwrap();
        let sum = ucc_factor_expand(&f);
        let (s, co) = t.sin_cos();
        let got: BTreeSet<String> = sum.iter().map(|(p, _)| p.letter_string()).collect();
        let want: BTreeSet<String> = PRINTED_XY
            .iter()
            .chain(&PRINTED_IZ)
            .map(|(p, _)| p.to_string())
            .collect();
        if got != want {
            problems.push(format!("θ={t}: string set differs"));
            continue;
        }
        for (label, sign) in PRINTED_XY {
            let z = sum.coefficient(&label.parse::<PauliString>().unwrap());
            if (z.norm() - s.abs() / 8.0).abs() > 1e-14 || z.re.abs() > 1e-14 {
                problems.push(format!("θ={t}: {label} = {z}"));
            }
            let printed = sign * s / 8.0;
            relations.insert(if (z.im - printed).abs() < 1e-14 {
                "agree"
            } else if (z.im + printed).abs() < 1e-14 {
                "flipped"
            } else {
                "mixed"
            });
        }
        for (label, sign) in PRINTED_IZ {
            let z = sum.coefficient(&label.parse::<PauliString>().unwrap());
            let want = if label == "IIII" {
                1.0 + (co - 1.0) / 8.0
            } else {
                sign * (co - 1.0) / 8.0
            };
            if (z - c(want)).norm() > 1e-14 {
                problems.push(format!("θ={t}: {label} = {z}, printed {want}"));
            }
        }
    }
    let note = match relations.iter().copied().collect::<Vec<_>>().as_slice() {
        ["agree"] => "all 8 XY signs agree with the printed rank-2 expansion".to_string(),
        ["flipped"] => "all 8 XY signs are opposite to the printed rank-2 expansion (θ → −θ); \
                        IZ signs agree"
            .to_string(),
        other => format!("XY sign relation {other:?}"),
    };
    if relations.len() > 1 || relations.contains("mixed") {
        problems.push(note.clone());
    }
    let check = if problems.is_empty() {
        Ok("16 strings, magnitudes sinθ/8, (cosθ−1)/8, 1+(cosθ−1)/8 over 7 angles".into())
    } else {
        Err(problems.join("; "))
    };
    (check, note)
}

fn ac4() -> Check {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for rank in 1..=2 {
        for f in factors(rank, 0.9) {
            let mut plans = vec![derive_select_plan(&f).unwrap()];
            if rank == 2 && f.num_qubits() == 4 {
                plans.push(paper_fixture_plan(&f).unwrap());
            }
            let expansion = ucc_factor_expand(&f);
            for plan in plans {
                // Every expansion string is induced by exactly one code.
                let strings: BTreeSet<String> = plan
                    .code_table
                    .iter()
                    .map(|e| e.string.without_phase().letter_string())
                    .collect();
                let want: BTreeSet<String> =
                    expansion.iter().map(|(p, _)| p.letter_string()).collect();
                if strings != want || plan.code_table.len() != 1 << (2 * rank) {
                    return Err(format!("code table does not cover the expansion for {f:?}"));
                }
                let circ = synth_select(&f, &plan).unwrap();
                let report = verify_select(&f, &plan, &circ, 1e-10).unwrap();
                worst = worst.max(report.worst_deviation);
                checked += plan.code_table.len();
                if !report.pass {
                    return Err(format!("codes {:?} fail", report.failing_codes));
                }
            }
        }
    }
    Ok(format!("{checked} codes, worst deviation {worst:.1e}"))
}

fn ac5() -> Check {
    let mut worst = 0.0f64;
    let mut worst_prob = 0.0f64;
    for rank in 1..=2 {
        for &t in &DEFAULT_GRID {
            for f in factors(rank, t) {
                let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
                let (block, _) =
                    zero_block(&asm.w_circuit, asm.num_ancilla, Execution::default()).unwrap();
                let s = asm.s_one_norm;
                let (dev, _) = block
                    .scale(c(s))
                    .phase_aligned_distance(&exact_unitary(&f).unwrap());
                worst = worst.max(dev);
                let dim = 1usize << f.num_qubits();
                let amps: Vec<Complex64> = (0..dim)
                    .map(|j| Complex64::new(1.0 + j as f64, 0.5 - j as f64))
                    .collect();
                let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let psi =
                    Statevector::from_amplitudes(amps.iter().map(|z| z / norm).collect()).unwrap();
                let (_, prob) = apply_postselected(&asm.w_circuit, asm.num_ancilla, &psi).unwrap();
                worst_prob = worst_prob.max((prob - 1.0 / (s * s)).abs());
            }
        }
    }
    let f = UccFactor::adjacent(2, FRAC_PI_2).unwrap();
    let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
    let psi = Statevector::basis(4, 0b0011);
    let (_, prob) = apply_postselected(&asm.w_circuit, asm.num_ancilla, &psi).unwrap();
    let spot = (asm.s_one_norm - 11.0 / 4.0).abs() < 1e-12 && (prob - 16.0 / 121.0).abs() < 1e-9;
    if worst <= 1e-8 && worst_prob <= 1e-9 && spot {
        Ok(format!(
            "deviation {worst:.1e}, |p − 1/s²| ≤ {worst_prob:.1e}, s(2, π/2) = 11/4, p = 16/121"
        ))
    } else {
        Err(format!(
            "deviation {worst:.2e}, prob error {worst_prob:.2e}, spot {spot}"
        ))
    }
}

fn ac6() -> Check {
    let s1 = amplification_norm(1);
    let s2 = amplification_norm(2);
    if (s2 - 1.0 / (PI / 10.0).sin()).abs() > 1e-12 {
        return Err("s_2 is not 1/sin(π/10)".into());
    }
    let (mut worst_dev, mut worst_leak) = (0.0f64, 0.0f64);
    let mut runs = Vec::new();
    for rank in 1..=2 {
        for &t in &DEFAULT_GRID {
            for f in factors(rank, t) {
                runs.push((f, LcuOptions::default()));
            }
        }
    }
    // s = 1 needs no amplification; also force one padded round there.
    runs.push((
        UccFactor::adjacent(2, 0.0).unwrap(),
        LcuOptions {
            min_rounds: Some(1),
            ..LcuOptions::default()
        },
    ));
    for (f, opts) in &runs {
        let asm = pad_and_synth_oaa(f, opts).unwrap();
        let s = asm.s_one_norm;
        let expected = if s <= 1.0 + 1e-12 {
            opts.min_rounds.unwrap_or(0)
        } else if s <= s1 {
            1
        } else if s <= s2 {
            2
        } else {
            return Err(format!("s = {s} exceeds 1/sin(π/10)"));
        };
        if asm.oaa_rounds != expected {
            return Err(format!(
                "s = {s}: {} rounds, expected {expected}",
                asm.oaa_rounds
            ));
        }
        let (block, leak) =
            zero_block(&asm.oaa_circuit, asm.num_ancilla, Execution::default()).unwrap();
        let (dev, _) = block.phase_aligned_distance(&exact_unitary(f).unwrap());
        worst_dev = worst_dev.max(dev);
        worst_leak = worst_leak.max(leak);
    }
    if worst_dev <= 1e-8 && worst_leak <= 1e-8 {
        Ok(format!(
            "{} runs, deviation {worst_dev:.1e}, leakage {worst_leak:.1e}",
            runs.len()
        ))
    } else {
        Err(format!(
            "deviation {worst_dev:.2e}, leakage {worst_leak:.2e}"
        ))
    }
}

fn ac7() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut width = 0;
    for t in [0.4, 1.2] {
        let f = UccFactor::adjacent(3, t).unwrap();
        let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
        width = asm.width();
        let (block, _) = zero_block(&asm.w_circuit, asm.num_ancilla, Execution::default()).unwrap();
        let (dev, _) = block
            .scale(c(asm.s_one_norm))
            .phase_aligned_distance(&exact_unitary(&f).unwrap());
        worst = worst.max(dev);
    }
    let secs = start.elapsed().as_secs_f64();
    if worst <= 1e-8 && secs <= 300.0 && (12..=13).contains(&width) {
        Ok(format!("{width} qubits, deviation {worst:.1e}, {secs:.1}s"))
    } else {
        Err(format!("{width} qubits, deviation {worst:.2e}, {secs:.1}s"))
    }
}

fn ac8() -> Check {
    for n in 1..=20i128 {
        let sum: i128 = 2 * n
            + 2 * (2..2 * n)
                .map(|k| (8 * k - 12) * (2 * n + 1 - k))
                .sum::<i128>();
        let closed_num = 64 * n.pow(3) - 48 * n.pow(2) - 82 * n + 72;
        if closed_num % 3 != 0 || sum != closed_num / 3 {
            return Err(format!("prepare sum/closed differ at n = {n}"));
        }
        let lib = prepare_cnot_count(n as usize).unwrap() as i128;
        if lib != sum {
            return Err(format!("prepare({n}) = {lib}, sum form {sum}"));
        }
        let total_sum = 6 * sum + 3 * (8 * n - 2);
        let total_closed = 128 * n.pow(3) - 96 * n.pow(2) - 140 * n + 138;
        let lib_total = total_lcu_count(n as usize, &vec![0; 2 * n as usize - 2]).unwrap() as i128;
        if total_sum != total_closed || lib_total != total_sum {
            return Err(format!("total differs at n = {n}"));
        }
    }
    let spots = (
        prepare_cnot_count(2).unwrap(),
        total_lcu_count(2, &[0, 0]).unwrap(),
        total_lcu_count(3, &[0; 4]).unwrap(),
    );
    if spots == (76, 498, 2310) {
        Ok("n = 1..20 exact; prepare(2) = 76, total(2) = 498, total(3) = 2310".into())
    } else {
        Err(format!("spot values {spots:?}"))
    }
}

fn ac9() -> (Check, String) {
    let mut worst = 0.0f64;
    for rank in 1..=3 {
        for &t in &[0.3, -1.1, 2.5] {
            for f in factors(rank, t) {
                let u = unitary_of(&synth_cascade(&f).unwrap()).unwrap();
                worst = worst.max(frob(&u, &exact_unitary(&f).unwrap()));
            }
        }
    }
    let rows = comparison(20, &RhoPolicy::default()).unwrap();
    let cross = crossover_rank(&rows);
    let note = format!(
        "first rank with lcu_total < cascade is {cross:?} (ρ = 0), against a claimed \
         reduction from rank five, where n = 5 gives lcu {} vs cascade {}; the n ≥ 9 \
         comparison against FEB needs an external formula and is not reproduced",
        rows[4].total_cnots, rows[4].cascade_cnots
    );
    let mut problems = Vec::new();
    if worst > 1e-8 {
        problems.push(format!("cascade deviation {worst:.2e}"));
    }
    if cross != Some(6) {
        problems.push(format!("crossover {cross:?}"));
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.total_cnots <= a.total_cnots || b.cascade_cnots <= a.cascade_cnots {
            problems.push(format!("not increasing at n = {}", b.rank));
        }
        let n = a.rank as f64;
        if a.rank >= 2 {
            let lcu_ratio = b.total_cnots as f64 / a.total_cnots as f64;
            let prev = a.total_cnots as f64 / rows[a.rank - 2].total_cnots as f64;
            if lcu_ratio >= prev {
                problems.push(format!("lcu growth ratio not shrinking at n = {}", b.rank));
            }
        }
        let per_cube = a.total_cnots as f64 / n.powi(3);
        if !(30.0..=30.0 + 128.0 + 138.0).contains(&per_cube) {
            problems.push(format!("lcu_total / n³ = {per_cube} at n = {}", a.rank));
        }
        if b.cascade_cnots < 4 * a.cascade_cnots {
            problems.push(format!("cascade growth below 4× at n = {}", a.rank));
        }
    }
    if rows
        .iter()
        .filter(|r| r.rank >= 6)
        .any(|r| r.total_cnots >= r.cascade_cnots)
    {
        problems.push("lcu_total not below cascade for all n ≥ 6".into());
    }
    // Gaps raise both columns.
    let gapped = (
        total_lcu_count(3, &[1, 0, 2, 0]).unwrap(),
        cascade_count(3, &[1, 0, 2, 0]).unwrap(),
    );
    if gapped.0 <= total_lcu_count(3, &[0; 4]).unwrap()
        || gapped.1 <= cascade_count(3, &[0; 4]).unwrap()
    {
        problems.push("gaps do not raise counts".into());
    }
    let check = if problems.is_empty() {
        Ok(format!("cascade deviation {worst:.1e}; crossover at n = 6; lcu_total/n³ bounded and cascade ≥ 4× per rank, n = 1..20"))
    } else {
        Err(problems.join("; "))
    };
    (check, note)
}

/// `√(|α|/s)` in bank order, read off the Pauli expansion.
fn expansion_targets(f: &UccFactor) -> Vec<f64> {
    let sum = ucc_factor_expand(f);
    let n = f.num_qubits();
    let id = PauliString::identity(n);
    let s = sum.one_norm();
    let mut iz = 0.0f64;
    let mut xy = 0.0f64;
    for (p, z) in sum.iter() {
        if p == id {
            continue;
        }
        if p.is_diagonal() {
            iz = iz.max(z.norm());
        } else {
            xy = xy.max(z.norm());
        }
    }
    let m = 1usize << (2 * f.rank() - 1);
    let mut out = vec![(sum.coefficient(&id).norm() / s).sqrt()];
    out.extend(std::iter::repeat_n((iz / s).sqrt(), m - 1));
    out.extend(std::iter::repeat_n((xy / s).sqrt(), m));
    out
}

fn ac10() -> (Check, Vec<String>) {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for rank in 1..=3 {
        let mut literal = [0.0f64; 2];
        for &t in &DEFAULT_GRID {
            let f = UccFactor::adjacent(rank, t).unwrap();
            let targets = expansion_targets(&f);
            worst =
                worst.max(prepared_deviation(&synth_prepare(rank, t).unwrap(), &targets).unwrap());
            for (slot, conv) in [RotationConvention::HalfAngle, RotationConvention::FullAngle]
                .into_iter()
                .enumerate()
            {
                let circ = synth_prepare_with(rank, t, PrepareMode::PaperLiteral, conv).unwrap();
                literal[slot] = literal[slot].max(prepared_deviation(&circ, &targets).unwrap());
            }
        }
        notes.push(format!(
            "paper-literal PREPARE, rank {rank}: max |amplitude| deviation from √(|α|/s) is \
             {:.3} (half-angle) and {:.3} (full-angle; this circuit loads α itself)",
            literal[0], literal[1]
        ));
    }
    let f = UccFactor::adjacent(2, FRAC_PI_2).unwrap();
    for conv in [RotationConvention::HalfAngle, RotationConvention::FullAngle] {
        let opts = LcuOptions {
            prepare: PrepareMode::PaperLiteral,
            convention: conv,
            min_rounds: None,
        };
        let r = verify_end_to_end_with(
            &f,
            VerifyMode::Postselect,
            &opts,
            1e-8,
            Execution::default(),
        )
        .unwrap();
        notes.push(format!(
            "paper-literal end to end, rank 2, θ = π/2, {conv:?}: deviation {:.3}, {}",
            r.deviation,
            if r.pass { "passes" } else { "fails" }
        ));
    }
    let check = if worst <= 1e-9 {
        Ok(format!(
            "verified mode, ranks 1..3, max deviation {worst:.1e}"
        ))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    };
    (check, notes)
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut notes = Vec::new();
    let mut report = |id: &str, name: &str, check: Check| match &check {
        Ok(detail) => println!("PASS AC{id} {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL AC{id} {name}: {detail}")
        }
    };
    report("1", "SU(2) identity", ac1());
    report("2", "cube and square identities", ac2());
    let (check, note) = ac3();
    report("3", "rank-2 Pauli expansion", check);
    notes.push(note);
    report("4", "SELECT contract", ac4());
    report("5", "block encoding and postselection", ac5());
    report("6", "OAA with padding", ac6());
    report("7", "rank-3 postselect", ac7());
    report("8", "count formulas", ac8());
    let (check, note) = ac9();
    report("9", "cascade baseline and crossover", check);
    notes.push(note);
    let (check, more) = ac10();
    report("10", "PREPARE amplitudes", check);
    notes.extend(more);
    for n in notes {
        println!("NOTE {n}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
