#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use ksep_core::fcs::FcsSpec;
use ksep_core::io::write_json;
use ksep_core::{ComplexMatrix, DensityMatrix, ProductState, C64};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn ksep(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ksep")).args(args).output().expect("spawn ksep");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn write_state(dir: &Path, name: &str, rho: &DensityMatrix) -> PathBuf {
    let path = dir.join(name);
    write_json(&path, rho).unwrap();
    path
}

pub fn write_phi(dir: &Path, name: &str, phi: &ProductState) -> PathBuf {
    let path = dir.join(name);
    write_json(&path, phi).unwrap();
    path
}

pub fn write_computational_pair(dir: &Path, dims: &[usize]) -> (PathBuf, PathBuf) {
    let (p1, p2) = ProductState::computational_pair(dims).unwrap();
    (write_phi(dir, "phi1.json", &p1), write_phi(dir, "phi2.json", &p2))
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect()).unwrap()
}

/// Transfer operators of an automaton over bond states S, A₁…A_{n−1},
/// B₁…B_{n−1}, E: n zeros lead S → A₁ → … → E, n ones lead S → B₁ → … → E,
/// anything else is annihilated. With ρ_B = |S⟩⟨S| the chain is the GHZ
/// projector on n qubits.
pub fn ghz_automaton(n: usize) -> FcsSpec {
    let b = 2 * n;
    let one = C64::new(1.0, 0.0);
    let mut v0 = ComplexMatrix::zeros(b, b);
    let mut v1 = ComplexMatrix::zeros(b, b);
    let a = |i: usize| i;
    let bb = |i: usize| n - 1 + i;
    v0[(0, a(1))] = one;
    v1[(0, bb(1))] = one;
    for i in 1..n - 1 {
        v0[(a(i), a(i + 1))] = one;
        v1[(bb(i), bb(i + 1))] = one;
    }
    v0[(a(n - 1), b - 1)] = one;
    v1[(bb(n - 1), b - 1)] = one;
    let mut rho_b = ComplexMatrix::zeros(b, b);
    rho_b[(0, 0)] = one;
    FcsSpec::new(v0, v1, rho_b, n).unwrap()
}

/// Parse the `alpha,beta,k,value,violated` CSV emitted by `sweep`.
pub fn parse_sweep(csv: &str) -> Vec<(f64, f64, usize, f64, bool)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,beta,k,value,violated"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 5, "row {l}");
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect()
}

/// Zero crossing of value(α) by linear interpolation between adjacent rows.
pub fn crossing_along_alpha(rows: &[(f64, f64, usize, f64, bool)], k: usize) -> Option<f64> {
    let line: Vec<(f64, f64)> = rows.iter().filter(|r| r.1 == 0.0 && r.2 == k).map(|r| (r.0, r.3)).collect();
    line.windows(2).find_map(|w| {
        let ((a0, v0), (a1, v1)) = (w[0], w[1]);
        (v0 <= 0.0 && v1 > 0.0).then(|| a0 + (a1 - a0) * (-v0) / (v1 - v0))
    })
}
