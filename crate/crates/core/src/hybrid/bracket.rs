use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::observable::HybridObservable;
use super::rival;
use crate::classical::{Coefficient, Polynomial};
use crate::error::Result;

/// Which hybrid bracket to apply.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BracketKind {
    Canonical,
    Standard,
    Anderson,
    Ansatz { alpha: f64, beta: f64, gamma: f64 },
}

impl BracketKind {
    pub fn name(&self) -> String {
        match self {
            Self::Canonical => "canonical".into(),
            Self::Standard => "standard".into(),
            Self::Anderson => "anderson".into(),
            Self::Ansatz { alpha, beta, gamma } => format!("ansatz({alpha},{beta},{gamma})"),
        }
    }
}

/// Canonical bracket:
/// `{A₀,B₀} + ({A₀,Bₖ} + {Aₖ,B₀} + f_ijk AᵢBⱼ) qₖ`.
pub fn heisenberg_bracket<T: Coefficient>(
    a: &HybridObservable<T>,
    b: &HybridObservable<T>,
) -> Result<HybridObservable<T>> {
    a.check_compatible(b)?;
    let basis = a.basis().clone();
    let sc = basis.constants();
    let dim = basis.dim();
    let (a0, av) = (a.classical_part(), a.components());
    let (b0, bv) = (b.classical_part(), b.components());
    let out0 = a0.poisson(b0);
    let mut out = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut ck = &a0.poisson(&bv[k]) + &av[k].poisson(b0);
        for i in 0..dim {
            for j in 0..dim {
                let f = sc.f(i, j, k);
                if f != 0.0 {
                    ck = ck.add_scaled(&(&av[i] * &bv[j]), T::from_real(f));
                }
            }
        }
        out.push(ck);
    }
    HybridObservable::new(basis, out0, out)
}

/// Three-parameter family: `(Cqᵢ, C′qⱼ) = α{C,C′}δᵢⱼ + βCC′f_ijk qₖ + γ{C,C′}d_ijk qₖ`,
/// with the classical-sector terms fixed as in the canonical bracket.
pub fn ansatz_bracket<T: Coefficient>(
    a: &HybridObservable<T>,
    b: &HybridObservable<T>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<HybridObservable<T>> {
    a.check_compatible(b)?;
    let basis = a.basis().clone();
    let sc = basis.constants();
    let dim = basis.dim();
    let (a0, av) = (a.classical_part(), a.components());
    let (b0, bv) = (b.classical_part(), b.components());

    let mut out0 = a0.poisson(b0);
    let mut out: Vec<Polynomial<T>> = (0..dim)
        .map(|k| &a0.poisson(&bv[k]) + &av[k].poisson(b0))
        .collect();

    for i in 0..dim {
        if av[i].is_zero() {
            continue;
        }
        for j in 0..dim {
            if bv[j].is_zero() {
                continue;
            }
            let fs = sc.f_pair(i, j);
            if beta != 0.0 && !fs.is_empty() {
                let prod = &av[i] * &bv[j];
                for &(k, f) in fs {
                    out[k] = out[k].add_scaled(&prod, T::from_real(beta * f));
                }
            }
            let ds = sc.d_pair(i, j);
            let need_pb = (alpha != 0.0 && i == j) || (gamma != 0.0 && !ds.is_empty());
            if need_pb {
                let pb = av[i].poisson(&bv[j]);
                if alpha != 0.0 && i == j {
                    out0 = out0.add_scaled(&pb, T::from_real(alpha));
                }
                if gamma != 0.0 {
                    for &(k, d) in ds {
                        out[k] = out[k].add_scaled(&pb, T::from_real(gamma * d));
                    }
                }
            }
        }
    }
    HybridObservable::new(basis, out0, out)
}

/// Applies any bracket kind; rival brackets need complex coefficients in general.
pub fn apply_bracket(
    kind: BracketKind,
    a: &HybridObservable<Complex64>,
    b: &HybridObservable<Complex64>,
) -> Result<HybridObservable<Complex64>> {
    match kind {
        BracketKind::Canonical => heisenberg_bracket(a, b),
        BracketKind::Ansatz { alpha, beta, gamma } => ansatz_bracket(a, b, alpha, beta, gamma),
        BracketKind::Standard => rival::standard_bracket(a, b),
        BracketKind::Anderson => rival::anderson_bracket(a, b),
    }
}
