"""Floating-point verification of the exact constructions.

Membership in a type-I matrix domain is measured by a signed margin, the
smallest eigenvalue of ``I - Z Z*``; positive means interior, zero boundary.
Everything here works with margins rather than booleans so that boundary
trends can be asserted.  Samplers build interior points from singular values
drawn in (0, 1), which guarantees membership without rejection; Shilov
samples are orthonormalized Gaussian matrices (square case only).

Randomness is reproducible: every trial derives its own generator from
``(seed, trial index)``, so reports are independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ballmap import MonomialBallMap
from .exactnum import DomainError
from .induce import BallPoint, SymbolicMatrixMap, ball_fiber

INTERIOR_TOLERANCE = 1e-9
FIBER_TOLERANCE = 1e-10
BOUNDARY_FINAL_MARGIN = 1e-2


class SamplingExhaustedError(RuntimeError):
    """Rejection sampling failed to find an interior fiber point."""


@dataclass(frozen=True)
class DomainSample:
    Z: np.ndarray
    margin: float


@dataclass
class VerificationReport:
    kind: str
    trials: int
    seed: int
    verdict: str
    min_margin_interior: Optional[float] = None
    boundary_margins: list = field(default_factory=list)
    fiber_residual_max: Optional[float] = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "Pass"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "trials": self.trials,
            "seed": self.seed,
            "verdict": self.verdict,
            "min_margin_interior": self.min_margin_interior,
            "boundary_margins": self.boundary_margins,
            "fiber_residual_max": self.fiber_residual_max,
            "detail": self.detail,
        }


# -- margins ------------------------------------------------------------------


def omega_margin(Z: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitized ``I - Z Z*``."""
    Z = np.asarray(Z, dtype=complex)
    gram = np.eye(Z.shape[0]) - Z @ Z.conj().T
    gram = (gram + gram.conj().T) / 2
    return float(np.linalg.eigvalsh(gram)[0])


def ball_margin(x: Sequence[complex], r: int, s: int) -> float:
    """Scale-invariant generalized-ball margin of a homogeneous vector."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (r + s,):
        raise DomainError(f"expected a vector of length {r + s}")
    norms = np.abs(x) ** 2
    total = norms.sum()
    if total == 0:
        raise DomainError("projective points cannot be identically zero")
    return float((norms[:r].sum() - norms[r:].sum()) / total)


# -- samplers ------------------------------------------------------------------


def _rng(seed, trial: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed if trial is None else [seed, trial])


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    gaussian = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, upper = np.linalg.qr(gaussian)
    phases = np.diagonal(upper).copy()
    phases /= np.abs(phases)
    return q * phases


def sample_omega(r: int, s: int, seed: int, count: int) -> list[DomainSample]:
    """Interior samples built as ``U diag(sigma) V*`` with ``sigma`` in (0, 1)."""
    if count < 1:
        raise DomainError("count must be >= 1")
    samples = []
    for trial in range(count):
        rng = _rng(seed, trial)
        u = _haar_unitary(rng, r)
        v = _haar_unitary(rng, s)
        k = min(r, s)
        sigma = rng.uniform(0.0, 1.0, size=k)
        core = np.zeros((r, s), dtype=complex)
        core[:k, :k] = np.diag(sigma)
        Z = u @ core @ v.conj().T
        samples.append(DomainSample(Z, omega_margin(Z)))
    return samples


def sample_shilov(r: int, seed: int, count: int) -> list[np.ndarray]:
    """Unitary matrices: the distinguished boundary of the square domain."""
    if count < 1:
        raise DomainError("count must be >= 1")
    return [_haar_unitary(_rng(seed, trial), r) for trial in range(count)]


def shilov_sampler_requires_square(r: int, s: int) -> None:
    if r != s:
        raise DomainError("the Shilov sampler needs a square domain (r = s)")


# -- compiled evaluation ----------------------------------------------------------


class CompiledMatrixMap:
    """Vectorized numeric evaluator for a symbolic matrix map."""

    def __init__(self, f: SymbolicMatrixMap):
        self.rp = f.rp
        self.sp = f.sp
        self.arity = f.arity
        self._entries = []
        for row in f.entries:
            compiled_row = []
            for entry in row:
                exponents = []
                coefficients = []
                for e, c in entry.terms():
                    exponents.append(e)
                    coefficients.append(complex(float(c)))
                compiled_row.append((np.array(exponents, dtype=np.int64)
                                     if exponents else None,
                                     np.array(coefficients)))
            self._entries.append(compiled_row)

    def __call__(self, z_flat: np.ndarray) -> np.ndarray:
        """Evaluate on a batch: z_flat has shape (n, arity)."""
        z_flat = np.asarray(z_flat, dtype=complex)
        single = z_flat.ndim == 1
        if single:
            z_flat = z_flat[None, :]
        n = z_flat.shape[0]
        out = np.zeros((n, self.rp, self.sp), dtype=complex)
        for i, row in enumerate(self._entries):
            for j, (exponents, coefficients) in enumerate(row):
                if exponents is None:
                    continue
                powers = np.prod(
                    z_flat[:, None, :] ** exponents[None, :, :], axis=2)
                out[:, i, j] = powers @ coefficients
        return out[0] if single else out


def _batch_margins(images: np.ndarray) -> np.ndarray:
    rp = images.shape[1]
    gram = np.eye(rp)[None, :, :] - images @ images.conj().transpose(0, 2, 1)
    gram = (gram + gram.conj().transpose(0, 2, 1)) / 2
    return np.linalg.eigvalsh(gram)[:, 0]


# -- verifiers -----------------------------------------------------------------------


def verify_map_into_domain(f: SymbolicMatrixMap, r: int, s: int,
                           trials: int = 1000, seed: int = 0
                           ) -> VerificationReport:
    """Check that the matrix map sends interior samples strictly inside."""
    if f.arity != r * s:
        raise DomainError("entry arity must equal r*s")
    compiled = CompiledMatrixMap(f)
    samples = sample_omega(r, s, seed, trials)
    z_batch = np.stack([sample.Z.reshape(-1) for sample in samples])
    margins = _batch_margins(compiled(z_batch))
    worst = float(margins.min())
    verdict = "Pass" if worst > INTERIOR_TOLERANCE else "Fail(NotIntoDomain)"
    report = VerificationReport(
        kind="map_into_domain", trials=trials, seed=seed, verdict=verdict,
        min_margin_interior=worst)
    if verdict != "Pass":
        report.detail["witness_index"] = int(margins.argmin())
    return report


def verify_boundary_behavior(f: SymbolicMatrixMap, r: int, s: int,
                             seed: int = 0, steps: int = 4,
                             directions: int = 5) -> VerificationReport:
    """Drive samples toward the boundary and require image margins to shrink.

    For each random direction the top singular value is rescaled to
    ``1 - 1/k`` for ``k = 10, 100, ..., 10^steps``; the image margins must
    stay positive, decrease overall, and end below ``1e-2``.
    """
    if steps < 2:
        raise DomainError("steps must be >= 2")
    compiled = CompiledMatrixMap(f)
    all_margins: list[list[float]] = []
    verdict = "Pass"
    for trial in range(directions):
        rng = _rng(seed, trial)
        u = _haar_unitary(rng, r)
        v = _haar_unitary(rng, s)
        k = min(r, s)
        sigma = np.sort(rng.uniform(0.3, 1.0, size=k))[::-1]
        row = []
        for exponent in range(1, steps + 1):
            top = 1.0 - 10.0 ** (-exponent)
            scaled = sigma * (top / sigma[0])
            core = np.zeros((r, s), dtype=complex)
            core[:k, :k] = np.diag(scaled)
            Z = u @ core @ v.conj().T
            image = compiled(Z.reshape(-1))
            gram = np.eye(f.rp) - image @ image.conj().T
            gram = (gram + gram.conj().T) / 2
            row.append(float(np.linalg.eigvalsh(gram)[0]))
        all_margins.append(row)
        if any(m <= 0 for m in row):
            verdict = "Fail(LeftDomain)"
        elif row[-1] >= BOUNDARY_FINAL_MARGIN:
            verdict = "Fail(NotProper)"
        elif row[-1] >= row[0]:
            verdict = "Fail(NotDecreasing)"
    return VerificationReport(
        kind="boundary_behavior", trials=directions, seed=seed,
        verdict=verdict, boundary_margins=all_margins)


def _fiber_point(rng: np.random.Generator, constraint, r: int, s: int,
                 attempts: int = 10_000) -> np.ndarray:
    a = np.asarray(constraint.a, dtype=complex).reshape(1, r)
    b = np.asarray(constraint.b, dtype=complex).reshape(1, s)
    norm_sq = (a @ a.conj().T).real.item()
    z_particular = a.conj().T @ b / norm_sq
    projector = np.eye(r) - a.conj().T @ a / norm_sq
    for _ in range(attempts):
        w = rng.normal(size=(r, s)) + 1j * rng.normal(size=(r, s))
        w *= rng.uniform(0.05, 0.6) / max(np.linalg.norm(w), 1e-12)
        Z = z_particular + projector @ w
        if omega_margin(Z) > 0:
            return Z
    raise SamplingExhaustedError(
        "no interior fiber point found within the attempt budget")


def verify_fiber_preservation(f: SymbolicMatrixMap, g: MonomialBallMap,
                              trials: int = 1000, seed: int = 0
                              ) -> VerificationReport:
    """Check ``g1(X) . f(Z) = g2(X)`` numerically on sampled fiber pairs.

    Samples interior ball points ``X = [A, B]`` away from the indeterminacy
    of ``g``, draws ``Z`` with ``A Z = B`` inside the matrix domain, and
    compares both sides relative to their scale.
    """
    sig = g.signature
    r, s = sig.r, sig.s
    compiled = CompiledMatrixMap(f)
    worst = 0.0
    for trial in range(trials):
        rng = _rng(seed, trial)
        a = rng.normal(size=r) + 1j * rng.normal(size=r)
        a /= np.linalg.norm(a)
        b = rng.normal(size=s) + 1j * rng.normal(size=s)
        b *= rng.uniform(0.1, 0.9) / np.linalg.norm(b)
        point = BallPoint(tuple(a), tuple(b))
        constraint = ball_fiber(point)
        Z = _fiber_point(rng, constraint, r, s)
        values = g.numeric_eval(list(a) + list(b))
        g1 = np.array(values[:sig.rp])
        g2 = np.array(values[sig.rp:])
        image = compiled(Z.reshape(-1))
        residual = g1 @ image - g2
        scale = max(np.linalg.norm(g1) * np.linalg.norm(image),
                    np.linalg.norm(g2), 1e-30)
        worst = max(worst, float(np.linalg.norm(residual) / scale))
    verdict = "Pass" if worst < FIBER_TOLERANCE else "Fail(FiberResidual)"
    return VerificationReport(
        kind="fiber_preservation", trials=trials, seed=seed, verdict=verdict,
        fiber_residual_max=worst)


def shilov_obstruction_demo(free_row_values: Sequence[complex],
                            samples: int = 1000, seed: int = 0
                            ) -> VerificationReport:
    """Probe the block candidate ``f = [[Z, 0], [k1, k2, h]]`` on the Shilov boundary.

    Evaluates ``V (I - f f*) V^*`` for ``V = (v w, 1)`` over Shilov samples
    and growing ``|v|``.  On unitary ``Z`` the quadratic term cancels, so a
    nonzero ``(k1, k2)`` leaves a linear term that must go negative; with
    ``k = 0`` the value is ``1 - |h|^2`` independent of ``v``.
    """
    k1, k2, h = (complex(v) for v in free_row_values)
    bottom = np.array([k1, k2, h])
    unitaries = sample_shilov(2, seed, samples)
    magnitudes = [1.0, 10.0, 100.0, 1000.0]
    minimum = np.inf
    witness = None
    for index, Z in enumerate(unitaries):
        rng = _rng(seed, samples + index)
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        w /= np.linalg.norm(w)
        f = np.zeros((3, 3), dtype=complex)
        f[:2, :2] = Z
        f[2, :] = bottom
        gram = np.eye(3) - f @ f.conj().T
        for magnitude in magnitudes:
            for phase in (1, -1, 1j, -1j):
                v = phase * magnitude
                V = np.array([v * w[0], v * w[1], 1.0])
                value = float((V @ gram @ V.conj()).real)
                if value < minimum:
                    minimum = value
                    witness = {"sample": index, "v": str(v),
                               "value": value}
    found = minimum < -1e-9
    return VerificationReport(
        kind="shilov_obstruction", trials=samples, seed=seed,
        verdict="ObstructionFound" if found else "NoObstruction",
        detail={"min_value": minimum, "witness": witness,
                "free_row": [str(v) for v in free_row_values]})
