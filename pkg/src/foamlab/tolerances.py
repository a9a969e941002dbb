"""Central tolerance policy.

Every finite-difference step, SVD rank cut, and residual threshold in the
library is taken from one of these policy objects so that tests and the CLI
can tighten or loosen everything coherently.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TolerancePolicy:
    # central-difference step, relative to the cluster diameter
    fd_step_rel: float = 1e-6
    # singular values below rank_rel * sigma_max count as zero
    rank_rel: float = 1e-6
    # required ratio between smallest kept and largest cut singular value;
    # spectra with a smaller gap are flagged ambiguous, never silently resolved
    rank_gap_factor: float = 100.0
    # sup-norm threshold on residual blocks for equilibrium verdicts
    residual_tol: float = 1e-9
    # pressure path-independence defect threshold (relative to curvature scale)
    pressure_defect_rel: float = 1e-6
    # pairwise-intersection agreement for second_intersection
    concurrency_tol: float = 1e-6
    # zero-mode cutoff on scale-invariant Hessian eigenvalues (lambda * diam^2);
    # measured spectra put spurious zeros below ~0.3 and true modes above ~5
    hessian_zero_scaled: float = 1.0

    def fd_step(self, scale: float) -> float:
        return self.fd_step_rel * max(scale, 1e-300)


DEFAULT = TolerancePolicy()
STRICT = TolerancePolicy(residual_tol=1e-11, rank_rel=1e-8, concurrency_tol=1e-8)
LOOSE = TolerancePolicy(residual_tol=1e-6, rank_rel=1e-4, concurrency_tol=1e-4)

PROFILES = {"default": DEFAULT, "strict": STRICT, "loose": LOOSE}
