// SPDX-License-Identifier: Apache-2.0

use crate::operator::{HilbertSpace, DEFAULT_N_MAX};
use crate::{Error, Result, C64};

/// Number of classical drives.
pub const DRIVE_COUNT: usize = 4;

/// Smallest `|R̃ₙ,ₖ|` accepted before the excited-manifold inversion is
/// considered singular.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Physical inputs, all in units of the atom-cavity coupling `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub g: f64,
    pub kappa: f64,
    /// Total spontaneous emission rate out of `|2⟩`.
    pub gamma: f64,
    /// Rabi frequencies Ω₁..Ω₄.
    pub omegas: [f64; DRIVE_COUNT],
    /// Detunings Δ₁..Δ₄.
    pub deltas: [f64; DRIVE_COUNT],
    pub n_max: usize,
    /// Fraction of `gamma` that decays to `|0⟩`; the rest goes to `|1⟩`.
    pub branching_to_zero: f64,
}

/// Which atomic transition a drive addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    /// `|0⟩ ↔ |2⟩`, drives 1 and 2.
    ZeroToTwo,
    /// `|1⟩ ↔ |2⟩`, drives 3 and 4.
    OneToTwo,
}

impl Transition {
    pub fn for_drive(k: usize) -> Result<Self> {
        check_drive(k)?;
        Ok(if k <= 2 {
            Transition::ZeroToTwo
        } else {
            Transition::OneToTwo
        })
    }

    /// Ground level the drive pumps out of.
    pub fn source_level(self) -> usize {
        match self {
            Transition::ZeroToTwo => 0,
            Transition::OneToTwo => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub k: usize,
    pub transition: Transition,
    pub omega: f64,
    pub delta: f64,
}

pub(crate) fn check_drive(k: usize) -> Result<()> {
    if (1..=DRIVE_COUNT).contains(&k) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            what: "drive",
            value: k,
            min: 1,
            max: DRIVE_COUNT,
        })
    }
}

/// Operating-point detunings `(0, g, √3 g, √2 g)`.
pub fn fig2_deltas() -> [f64; DRIVE_COUNT] {
    [0.0, 1.0, 3f64.sqrt(), 2f64.sqrt()]
}

/// Operating-point drive pattern `Ω₁ = Ω₃ = Ω`, `Ω₄ = 2Ω₂ = 1.2Ω`.
pub fn fig2_omegas(omega: f64) -> [f64; DRIVE_COUNT] {
    [omega, 0.6 * omega, omega, 1.2 * omega]
}

/// Names accepted by [`SystemParams::preset`].
pub const PRESET_NAMES: [&str; 3] = ["fig2", "fig2b", "experimental"];

impl SystemParams {
    /// `C = 80`, `γ = 1.5κ`, default detunings and drive pattern with amplitude `omega`.
    pub fn fig2(omega: f64) -> Self {
        Self::from_cooperativity(80.0, 1.5, omega).expect("valid operating point")
    }

    /// Builds `κ, γ` from the cooperativity `C = g²/(κγ)` and the ratio `γ/κ`,
    /// with the default detunings and drive pattern.
    pub fn from_cooperativity(
        cooperativity: f64,
        gamma_over_kappa: f64,
        omega: f64,
    ) -> Result<Self> {
        if !(cooperativity > 0.0 && cooperativity.is_finite()) {
            return Err(Error::invalid(format!(
                "cooperativity must be positive, got {cooperativity}"
            )));
        }
        if !(gamma_over_kappa > 0.0 && gamma_over_kappa.is_finite()) {
            return Err(Error::invalid(format!(
                "gamma/kappa must be positive, got {gamma_over_kappa}"
            )));
        }
        let kappa = (1.0 / (cooperativity * gamma_over_kappa)).sqrt();
        Ok(Self {
            g: 1.0,
            kappa,
            gamma: gamma_over_kappa * kappa,
            omegas: fig2_omegas(omega),
            deltas: fig2_deltas(),
            n_max: DEFAULT_N_MAX,
            branching_to_zero: 0.5,
        })
    }

    /// `(g, γ/2, κ/2)/2π = (34, 2.5, 4.1) MHz`, `C ≈ 28`, with the default
    /// drive pattern at `Ω = 0.04 g`.
    pub fn experimental() -> Self {
        let g_mhz = 34.0;
        Self {
            g: 1.0,
            kappa: 2.0 * 4.1 / g_mhz,
            gamma: 2.0 * 2.5 / g_mhz,
            omegas: fig2_omegas(0.04),
            deltas: fig2_deltas(),
            n_max: DEFAULT_N_MAX,
            branching_to_zero: 0.5,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "fig2" => Ok(Self::fig2(0.04)),
            "fig2b" => Ok(Self::fig2(0.08)),
            "experimental" => Ok(Self::experimental()),
            other => Err(Error::invalid(format!(
                "unknown preset {other:?} (known: {})",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    /// `C = g²/(κγ)`, always recomputed.
    pub fn cooperativity(&self) -> f64 {
        self.g * self.g / (self.kappa * self.gamma)
    }

    pub fn gamma_over_kappa(&self) -> f64 {
        self.gamma / self.kappa
    }

    /// Decay rate `|2⟩ → |0⟩` per atom.
    pub fn gamma_to_zero(&self) -> f64 {
        self.gamma * self.branching_to_zero
    }

    /// Decay rate `|2⟩ → |1⟩` per atom.
    pub fn gamma_to_one(&self) -> f64 {
        self.gamma * (1.0 - self.branching_to_zero)
    }

    /// Same loss ratio, new cooperativity.
    pub fn with_cooperativity(&self, cooperativity: f64) -> Result<Self> {
        self.with_losses(cooperativity, self.gamma_over_kappa())
    }

    /// Same cooperativity, new `γ/κ`.
    pub fn with_gamma_over_kappa(&self, ratio: f64) -> Result<Self> {
        self.with_losses(self.cooperativity(), ratio)
    }

    fn with_losses(&self, cooperativity: f64, ratio: f64) -> Result<Self> {
        let base = Self::from_cooperativity(cooperativity, ratio, 1.0)?;
        Ok(Self {
            kappa: base.kappa * self.g,
            gamma: base.gamma * self.g,
            ..self.clone()
        })
    }

    /// Rescales every Rabi frequency so that `Ω₁` becomes `omega`, keeping the
    /// relative pattern.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::invalid(format!(
                "omega must be nonnegative, got {omega}"
            )));
        }
        let mut out = self.clone();
        if self.omegas[0] > 0.0 {
            let s = omega / self.omegas[0];
            out.omegas.iter_mut().for_each(|o| *o *= s);
        } else {
            out.omegas = fig2_omegas(omega);
        }
        Ok(out)
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::with_n_max(self.n_max)
    }

    pub fn drive(&self, k: usize) -> Result<DriveSpec> {
        Ok(DriveSpec {
            k,
            transition: Transition::for_drive(k)?,
            omega: self.omegas[k - 1],
            delta: self.deltas[k - 1],
        })
    }

    pub fn drives(&self) -> impl Iterator<Item = DriveSpec> + '_ {
        (1..=DRIVE_COUNT).map(move |k| self.drive(k).expect("drive index in range"))
    }

    /// Checks the physical invariants (positive losses, nonnegative drives,
    /// a cavity with at least one photon).
    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.kappa, self.gamma, self.branching_to_zero]
            .iter()
            .chain(self.omegas.iter())
            .chain(self.deltas.iter())
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::invalid("parameters must be finite"));
        }
        if self.g <= 0.0 {
            return Err(Error::invalid("g must be positive"));
        }
        if self.kappa <= 0.0 {
            return Err(Error::invalid(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if self.gamma <= 0.0 {
            return Err(Error::invalid(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.omegas.iter().any(|&o| o < 0.0) {
            return Err(Error::invalid("Rabi frequencies must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.branching_to_zero) {
            return Err(Error::invalid("branching fraction must lie in [0, 1]"));
        }
        if self.n_max < 1 {
            return Err(Error::invalid("n_max must be at least 1"));
        }
        Ok(())
    }
}

/// Complex detunings `Δ̃ₖ = Δₖ − iγ/2`, `δ̃ₖ = Δₖ − iκ/2` and
/// `R̃ₙ,ₖ = Δ̃ₖ δ̃ₖ − n g²` for `n = 1, 2, 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedQuantities {
    pub delta_tilde: [C64; DRIVE_COUNT],
    pub delta_small_tilde: [C64; DRIVE_COUNT],
    r_tilde: [[C64; DRIVE_COUNT]; 3],
}

impl DerivedQuantities {
    /// `R̃ₙ,ₖ` with `n ∈ 1..=3`, `k ∈ 1..=4`.
    pub fn r(&self, n: usize, k: usize) -> C64 {
        assert!((1..=3).contains(&n) && (1..=DRIVE_COUNT).contains(&k));
        self.r_tilde[n - 1][k - 1]
    }

    /// `Δ̃ₖ`, 1-based.
    pub fn big(&self, k: usize) -> C64 {
        self.delta_tilde[k - 1]
    }

    /// `δ̃ₖ`, 1-based.
    pub fn small(&self, k: usize) -> C64 {
        self.delta_small_tilde[k - 1]
    }
}

pub fn derived_quantities(params: &SystemParams) -> Result<DerivedQuantities> {
    let g2 = params.g * params.g;
    let delta_tilde = params.deltas.map(|d| C64::new(d, -params.gamma / 2.0));
    let delta_small_tilde = params.deltas.map(|d| C64::new(d, -params.kappa / 2.0));
    let mut r_tilde = [[C64::new(0.0, 0.0); DRIVE_COUNT]; 3];
    for (n, row) in r_tilde.iter_mut().enumerate() {
        for k in 0..DRIVE_COUNT {
            let r = delta_tilde[k] * delta_small_tilde[k] - (n + 1) as f64 * g2;
            if r.norm() < DEGENERACY_THRESHOLD {
                return Err(Error::Degenerate(format!(
                    "|R̃({}, {})| = {:e} is below {DEGENERACY_THRESHOLD:e}",
                    n + 1,
                    k + 1,
                    r.norm()
                )));
            }
            row[k] = r;
        }
    }
    Ok(DerivedQuantities {
        delta_tilde,
        delta_small_tilde,
        r_tilde,
    })
}
