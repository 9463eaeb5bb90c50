"""Harmonic-oscillator-basis numerics for resonances.

Operators are assembled from ladder operators in a basis of frequency
``omega`` (``q = (a + a^+)/sqrt(2 omega)``) and stored by bands.  Complex
scaling ``q -> q e^(i theta)`` turns resonances into isolated eigenvalues of
a complex-symmetric matrix.  Two numeric tiers exist: ``"double"`` (numpy)
and ``"extended"`` (mpmath refinement of double-precision eigenvalues by
Rayleigh-quotient iteration on the banded matrix).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .riccati import OscillatorSpec

Band = Dict[Tuple[int, int], object]


class ConvergenceError(ArithmeticError):
    """Eigenvalue iteration or basis-size convergence failed."""

    def __init__(self, message: str, estimate=None):
        super().__init__(message if estimate is None else f"{message} (achieved estimate {estimate})")
        self.estimate = estimate


class TrackingError(ArithmeticError):
    """Two eigenvalues are equally plausible continuations of the tracked level."""

    def __init__(self, message: str, candidates):
        super().__init__(f"{message}: candidates {candidates}")
        self.candidates = candidates


def default_tier() -> str:
    tier = os.environ.get("ANHARMONIC_PRECISION", "double")
    if tier not in ("double", "extended"):
        raise ValueError(f"ANHARMONIC_PRECISION must be 'double' or 'extended', not {tier!r}")
    return tier


# -- banded operators ------------------------------------------------------


def _band_mul(A: Band, B: Band, P: int) -> Band:
    rows: Dict[int, Dict[int, object]] = {}
    for (i, k), v in A.items():
        rows.setdefault(k, {})
    Bcols: Dict[int, List[Tuple[int, object]]] = {}
    for (k, j), v in B.items():
        Bcols.setdefault(k, []).append((j, v))
    out: Band = {}
    for (i, k), v in A.items():
        for j, w in Bcols.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + v * w
    return out


def _ladder_sum(P: int, sqrt, sign: int = 1) -> Band:
    """``a + sign * a^+`` in dimension P."""
    out: Band = {}
    for i in range(P - 1):
        s = sqrt(i + 1)
        out[(i, i + 1)] = s
        out[(i + 1, i)] = sign * s
    return out


def _power(op: Band, k: int, P: int) -> Band:
    out: Band = {(i, i): 1 for i in range(P)}
    for _ in range(k):
        out = _band_mul(out, op, P)
    return out


@dataclass
class BasisMatrix:
    """Band-stored D x D matrix in the harmonic basis."""

    dimension: int
    entries: Band
    tier: str = "double"
    complex_symmetric: bool = True

    def to_numpy(self) -> np.ndarray:
        M = np.zeros((self.dimension, self.dimension), dtype=complex)
        for (i, j), v in self.entries.items():
            M[i, j] = complex(v)
        return M

    def bandwidth(self) -> int:
        return max((abs(i - j) for i, j in self.entries), default=0)

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)


def _truncate(op: Band, D: int) -> Band:
    return {(i, j): v for (i, j), v in op.items() if i < D and j < D and v != 0}


def ho_matrix(power: int, D: int, omega=1, tier: str = "double", dps: int = 40) -> BasisMatrix:
    """Matrix of ``q^power`` in the first D oscillator states.

    Built as ``((a + a^+)/sqrt(2 omega))^power`` in dimension ``D + power`` and
    truncated, so every retained entry is exact up to rounding.
    """
    if power < 1 or D < power + 2:
        raise ValueError("need power >= 1 and D >= power + 2")
    P = D + power
    if tier == "extended":
        with mpmath.workdps(dps):
            op = _ladder_sum(P, mpmath.sqrt)
            scale = (2 * mpmath.mpf(omega)) ** (-mpmath.mpf(power) / 2)
            M = {k: v * scale for k, v in _power(op, power, P).items()}
    else:
        op = _ladder_sum(P, math.sqrt)
        scale = (2.0 * float(omega)) ** (-power / 2)
        M = {k: v * scale for k, v in _power(op, power, P).items()}
    return BasisMatrix(D, _truncate(M, D), tier, True)


def _p_squared(D: int, omega, tier: str, dps: int) -> Band:
    """``p^2 = -(omega/2) (a - a^+)^2``."""
    P = D + 2
    if tier == "extended":
        with mpmath.workdps(dps):
            op = _ladder_sum(P, mpmath.sqrt, -1)
            w = -mpmath.mpf(omega) / 2
            return _truncate({k: v * w for k, v in _power(op, 2, P).items()}, D)
    op = _ladder_sum(P, math.sqrt, -1)
    return _truncate({k: -v * float(omega) / 2 for k, v in _power(op, 2, P).items()}, D)


def _combine(D: int, parts: Sequence[Tuple[object, Band]], tier: str) -> BasisMatrix:
    out: Band = {}
    for c, band in parts:
        for k, v in band.items():
            out[k] = out.get(k, 0) + c * v
    return BasisMatrix(D, out, tier, True)


def rotated_hamiltonian(m: int, coupling, theta, D: int, omega=1, harmonic: bool = True,
                        tier: str = "double", dps: int = 40) -> BasisMatrix:
    """``e^(-2 i theta) p^2/2 + [e^(2 i theta) q^2/2] + coupling e^(i m theta) q^m``."""
    if tier == "extended":
        with mpmath.workdps(dps):
            th = mpmath.mpf(theta)
            c = mpmath.mpmathify(coupling)
            parts = [(mpmath.expj(-2 * th) / 2, _p_squared(D, omega, tier, dps)),
                     (c * mpmath.expj(m * th), ho_matrix(m, D, omega, tier, dps).entries)]
            if harmonic:
                parts.append((mpmath.expj(2 * th) / 2, ho_matrix(2, D, omega, tier, dps).entries))
            return _combine(D, parts, tier)
    th = float(theta)
    c = complex(coupling)
    parts = [(np.exp(-2j * th) / 2, _p_squared(D, omega, tier, dps)),
             (c * np.exp(1j * m * th), ho_matrix(m, D, omega).entries)]
    if harmonic:
        parts.append((np.exp(2j * th) / 2, ho_matrix(2, D, omega).entries))
    return _combine(D, parts, tier)


# -- dense complex eigensolver ----------------------------------------------


def _balance(A: np.ndarray) -> np.ndarray:
    """Diagonal similarity by powers of two equalizing row and column norms."""
    A = A.copy()
    n = A.shape[0]
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(A[:, i])) - abs(A[i, i])
            r = np.sum(np.abs(A[i, :])) - abs(A[i, i])
            if c == 0 or r == 0:
                continue
            f, s = 1.0, c + r
            while c < r / 2:
                c, r, f = c * 2, r / 2, f * 2
            while c >= r * 2:
                c, r, f = c / 2, r * 2, f / 2
            if c + r < 0.95 * s:
                converged = False
                A[i, :] /= f
                A[:, i] *= f
    return A


def _hessenberg(A: np.ndarray) -> np.ndarray:
    H = A.astype(complex).copy()
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        nx = np.linalg.norm(x)
        if nx == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0
    return H


def _givens(a: complex, b: complex) -> Tuple[float, complex]:
    """``c, s`` with ``[[c, s], [-conj(s), c]] @ [a, b] = [r, 0]``."""
    if b == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    na, nb = abs(a), abs(b)
    nr = math.hypot(na, nb)
    c = na / nr
    s = (a / na) * np.conj(b) / nr
    return c, s


def _hqr(H: np.ndarray, max_sweeps_per_eig: int = 30) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR with deflation."""
    H = H.copy()
    n = H.shape[0]
    eps = np.finfo(float).eps
    eig = np.zeros(n, dtype=complex)
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = H[0, 0]
            break
        lo = 0
        for l in range(hi, 0, -1):
            if abs(H[l, l - 1]) <= eps * (abs(H[l, l]) + abs(H[l - 1, l - 1])):
                H[l, l - 1] = 0
                lo = l
                break
        if lo == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        its += 1
        total += 1
        if its > max_sweeps_per_eig:
            raise ConvergenceError(f"QR iteration did not converge for eigenvalue {hi}")
        a, b, c, d = H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
        if its % 11 == 0:
            mu = d + abs(H[hi, hi - 1]) * (1 + 1j)  # exceptional shift
        else:
            tr, det = a + d, a * d - b * c
            disc = np.sqrt(tr * tr / 4 - det)
            mu1, mu2 = tr / 2 + disc, tr / 2 - disc
            mu = mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2
        idx = np.arange(lo, hi + 1)
        H[idx, idx] -= mu
        rots = []
        for k in range(lo, hi):
            cc, ss = _givens(H[k, k], H[k + 1, k])
            rk = H[k, k:hi + 1].copy()
            rk1 = H[k + 1, k:hi + 1].copy()
            H[k, k:hi + 1] = cc * rk + ss * rk1
            H[k + 1, k:hi + 1] = -np.conj(ss) * rk + cc * rk1
            rots.append((cc, ss))
        for k, (cc, ss) in zip(range(lo, hi), rots):
            top = min(k + 2, hi)
            ck = H[lo:top + 1, k].copy()
            ck1 = H[lo:top + 1, k + 1].copy()
            H[lo:top + 1, k] = cc * ck + np.conj(ss) * ck1
            H[lo:top + 1, k + 1] = -ss * ck + cc * ck1
        H[idx, idx] += mu
    return eig


def eigen_complex(matrix, method: str = "qr") -> np.ndarray:
    """All eigenvalues of a dense complex matrix.

    ``method="qr"``: balancing, Householder reduction to Hessenberg form and
    single-shift QR.  ``method="lapack"`` delegates to numpy for cross-checks.
    """
    A = matrix.to_numpy() if isinstance(matrix, BasisMatrix) else np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    if method == "lapack":
        return np.linalg.eigvals(A)
    if method != "qr":
        raise ValueError(f"unknown method {method!r}")
    return _hqr(_hessenberg(_balance(A)))


def backward_errors(matrix, eigenvalues: Sequence[complex]) -> List[float]:
    """``||A v - lambda v|| / ||A||`` with v from two steps of inverse iteration."""
    A = matrix.to_numpy() if isinstance(matrix, BasisMatrix) else np.asarray(matrix, dtype=complex)
    n = A.shape[0]
    normA = np.linalg.norm(A, 2)
    rng = np.random.default_rng(0)
    out = []
    for lam in eigenvalues:
        shift = lam + 1e-14 * max(1.0, abs(lam))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for _ in range(2):
            v = np.linalg.solve(A - shift * np.eye(n), v)
            v /= np.linalg.norm(v)
        out.append(float(np.linalg.norm(A @ v - lam * v) / normA))
    return out


# -- extended-precision refinement ------------------------------------------


def _band_solve(entries: Band, D: int, shift, rhs: List, kl: int, ku: int) -> List:
    """Solve ``(M - shift) x = rhs`` for a banded M with partial pivoting."""
    width = ku + kl
    rows: List[Dict[int, object]] = [dict() for _ in range(D)]
    for (i, j), v in entries.items():
        rows[i][j] = v
    for i in range(D):
        rows[i][i] = rows[i].get(i, 0) - shift
    b = list(rhs)
    for k in range(D):
        last = min(D - 1, k + kl)
        p = max(range(k, last + 1), key=lambda r: abs(rows[r].get(k, 0)))
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            b[k], b[p] = b[p], b[k]
        piv = rows[k].get(k, 0)
        if piv == 0:
            piv = mpmath.mpf(10) ** (-mpmath.mp.dps)
            rows[k][k] = piv
        for r in range(k + 1, last + 1):
            f = rows[r].get(k, 0)
            if f == 0:
                continue
            f = f / piv
            for j, v in rows[k].items():
                if j >= k and j <= k + width:
                    rows[r][j] = rows[r].get(j, 0) - f * v
            rows[r].pop(k, None)
            b[r] -= f * b[k]
    x = [0] * D
    for k in range(D - 1, -1, -1):
        s = b[k]
        for j, v in rows[k].items():
            if j > k:
                s -= v * x[j]
        x[k] = s / rows[k][k]
    return x


def refine_eigenvalue(matrix: BasisMatrix, guess, dps: int = 40, tol=None, max_iter: int = 30):
    """Rayleigh-quotient iteration (unconjugated, for complex-symmetric M)."""
    if matrix.tier != "extended":
        raise ValueError("refinement needs an extended-tier matrix")
    D = matrix.dimension
    bw = matrix.bandwidth()
    with mpmath.workdps(dps + 10):
        tol = mpmath.mpf(10) ** (-dps) if tol is None else mpmath.mpf(tol)
        lam = mpmath.mpc(guess)
        x = [mpmath.mpf(1) / (1 + k) for k in range(D)]
        rows: Dict[int, List[Tuple[int, object]]] = {}
        for (i, j), v in matrix.entries.items():
            rows.setdefault(i, []).append((j, v))
        for _ in range(max_iter):
            y = _band_solve(matrix.entries, D, lam, x, bw, bw)
            nrm = mpmath.sqrt(sum(abs(v) ** 2 for v in y))
            x = [v / nrm for v in y]
            Mx = [sum(v * x[j] for j, v in rows.get(i, ())) for i in range(D)]
            new = sum(a * b for a, b in zip(x, Mx)) / sum(a * a for a in x)
            if abs(new - lam) <= tol * max(1, abs(new)):
                lam = new
                break
            lam = new
        else:
            raise ConvergenceError("Rayleigh-quotient iteration did not converge", abs(new - lam))
    return +lam


# -- strong coupling ----------------------------------------------------------


def strong_coupling_angle(m: int) -> mpmath.mpf:
    """Rotation that makes the leading operator PT-symmetric (odd) or Hermitian (even)."""
    return mpmath.pi / (2 * (m + 2)) if m % 2 else mpmath.pi / (m + 2)


def strong_coupling_phase(m: int) -> mpmath.mpf:
    return -mpmath.pi / (m + 2) if m % 2 else -2 * mpmath.pi / (m + 2)


@dataclass
class StrongCouplingResult:
    degree: int
    levels: List[complex]
    dimension: int
    convergence: List[float] = field(default_factory=list)


def _strong_levels_double(m: int, count: int, D: int, omega) -> List[complex]:
    theta = float(strong_coupling_angle(m))
    sigma = 1 if m % 2 else -1
    H = rotated_hamiltonian(m, sigma, theta, D, omega, harmonic=False)
    ev = eigen_complex(H)
    phase = float(strong_coupling_phase(m))
    good = [e for e in ev if abs(np.angle(e) - phase) < 1e-6]
    good.sort(key=abs)
    if len(good) < count:
        raise ConvergenceError(f"only {len(good)} eigenvalues on the expected ray")
    return good[:count]


def rotated_strong_coupling_levels(m: int, count: int = 3, D: int = 160, tier: Optional[str] = None,
                                   dps: int = 30, tol: float = 1e-9, omega=None) -> StrongCouplingResult:
    """Leading strong-coupling resonances ``|E_l| e^(i phase)`` sorted by modulus.

    The operator ``e^(-2 i theta)(p^2/2 + sigma q^m e^(i (m+2) theta))``
    (``sigma = +1`` odd, ``-1`` even) is diagonalized at D and D/2; the
    difference is the convergence estimate.
    """
    tier = tier or default_tier()
    if D > 400:
        raise ValueError("basis dimension is capped at 400")
    omega = m + 2 if omega is None else omega
    levels = _strong_levels_double(m, count, D, omega)
    coarse = _strong_levels_double(m, count, D // 2, omega)
    if tier == "extended":
        theta = strong_coupling_angle(m)
        sigma = 1 if m % 2 else -1
        H = rotated_hamiltonian(m, sigma, theta, D, omega, harmonic=False, tier="extended", dps=dps + 10)
        Hc = rotated_hamiltonian(m, sigma, theta, D // 2, omega, harmonic=False, tier="extended", dps=dps + 10)
        levels = [refine_eigenvalue(H, e, dps) for e in levels]
        coarse = [refine_eigenvalue(Hc, e, dps) for e in coarse]
    est = [float(abs(a - b)) for a, b in zip(levels, coarse)]
    if max(est) > tol:
        raise ConvergenceError(f"strong-coupling levels not converged at D={D}", max(est))
    return StrongCouplingResult(m, levels, D, est)


# -- finite-coupling resonances ---------------------------------------------


@dataclass
class ResonanceResult:
    degree: int
    level: int
    coupling: float
    side: str
    energy: complex
    dimension: int
    convergence: float
    theta: float


def _coupling_factor(m: int, g: float) -> float:
    """Coefficient of q^m: sqrt(g) for odd degree, g for even."""
    return math.sqrt(g) if m % 2 else g


def resonance_angle(m: int) -> float:
    return math.pi / (2 * (m + 2)) if m % 2 else math.pi / (m + 2)


def _basis_frequency(m: int, c: float) -> float:
    return max(1.0, abs(c) ** (2.0 / (m + 2)))


def _check_side(m: int, g: float):
    if (m % 2 and g <= 0) or (m % 2 == 0 and g >= 0):
        raise ValueError("coupling is not on the unstable side")


def _hamiltonian_dense(m: int, g: float, theta: float, D: int) -> np.ndarray:
    c = _coupling_factor(m, g)
    return rotated_hamiltonian(m, c, theta, D, _basis_frequency(m, c)).to_numpy()


def _rqi_dense(A: np.ndarray, lam: complex, iters: int = 8) -> complex:
    n = A.shape[0]
    x = np.ones(n, dtype=complex)
    x /= np.linalg.norm(x)
    I = np.eye(n)
    for _ in range(iters):
        try:
            y = np.linalg.solve(A - lam * I, x)
        except np.linalg.LinAlgError:
            return lam
        x = y / np.linalg.norm(y)
        new = (x @ (A @ x)) / (x @ x)
        if abs(new - lam) < 1e-15 * max(1, abs(new)):
            return complex(new)
        lam = new
    return complex(lam)


def _select(ev: np.ndarray, target: complex, what: str) -> complex:
    d = np.abs(ev - target)
    order = np.argsort(d)
    best, second = ev[order[0]], ev[order[1]]
    if d[order[1]] < 2 * d[order[0]] and d[order[0]] > 1e-6:
        raise TrackingError(f"ambiguous continuation of {what}", [complex(best), complex(second)])
    return complex(best)


def resonance(m: int, n: int, g: float, D: Optional[int] = None, tol: float = 1e-10,
              theta: Optional[float] = None, side: str = "+", steps: int = 12,
              start: float = 1e-3, max_dim: int = 400, method: str = "qr",
              tier: str = "double", dps: int = 30) -> ResonanceResult:
    """Resonance of level n at coupling g by continuation from ``|g| = start``.

    ``side="+"`` gives the resonance (Im E < 0); ``side="-"`` rotates the
    other way and returns the conjugate antiresonance.  With
    ``tier="extended"`` the converged double-precision energy is refined to
    ``dps`` digits (an ``mpc``) on the final basis.
    """
    _check_side(m, g)
    th = resonance_angle(m) if theta is None else theta
    if side == "-":
        th = -th
    sgn = 1 if g > 0 else -1
    path = [sgn * v for v in np.geomspace(start, abs(g), steps + 1)] if abs(g) > start else [g]
    D = D or 48
    prev_E = None
    dim = D
    while True:
        E = complex(n + 0.5)
        for i, gi in enumerate(path):
            ev = eigen_complex(_hamiltonian_dense(m, gi, th, dim), method)
            E = _select(ev, E, f"level {n} at g={gi}")
        if prev_E is not None:
            est = abs(E - prev_E)
            if est < tol:
                if tier == "extended":
                    c = _coupling_factor(m, g)
                    H = rotated_hamiltonian(m, c, th, dim, _basis_frequency(m, c), tier="extended", dps=dps + 10)
                    E = refine_eigenvalue(H, E, dps)
                return ResonanceResult(m, n, g, side, E, dim, est, th)
        if 2 * dim > max_dim:
            raise ConvergenceError(f"resonance not converged up to D={dim}", abs(E - prev_E) if prev_E else None)
        prev_E = E
        dim *= 2


def resonance_path(m: int, n: int, couplings: Sequence[float], D: int = 96, theta: Optional[float] = None) -> List[complex]:
    """Level n along an ordered grid of couplings (increasing modulus).

    The first point is reached by continuation from weak coupling; later
    points refine the previous energy by Rayleigh-quotient iteration.
    """
    th = resonance_angle(m) if theta is None else theta
    out: List[complex] = []
    E = complex(n + 0.5)
    for i, g in enumerate(couplings):
        _check_side(m, g)
        A = _hamiltonian_dense(m, g, th, D)
        if i == 0:
            sign = 1.0 if g > 0 else -1.0
            for h in np.geomspace(1e-3, abs(g), 12)[:-1] if abs(g) > 1e-3 else ():
                E = _select(eigen_complex(_hamiltonian_dense(m, sign * h, th, D)), E, f"level {n} at g={sign * h}")
            E = _select(eigen_complex(A), E, f"level {n}")
        new = _rqi_dense(A, E)
        if out and abs(new - E) > 0.5 * (abs(E - out[-2]) if len(out) > 1 else 1.0) + 0.1:
            E = _select(eigen_complex(A), E, f"level {n} at g={g}")
        else:
            E = new
        out.append(E)
    return out


# -- dispersion relation ----------------------------------------------------


def dispersion_quadrature(m: int, n: int, K: int, grid: Optional[Sequence[float]] = None,
                          D: int = 96, tol: float = 1e-3, tail_threshold: float = 1e-13) -> float:
    """Perturbative coefficient of g^K from the imaginary part along the cut.

    Numeric Im E is used on the grid where it exceeds ``tail_threshold``
    times |Re E|; below that the one-instanton width series stands in.
    Beyond the large-|g| end the strong-coupling power law closes the
    integral.  The result is compared with the same rule on every other grid
    point; a larger discrepancy than ``tol`` (relative) raises.
    """
    from .quantization import width_series
    if K == 0:
        return n + 0.5
    spec = OscillatorSpec(m)
    s = np.geomspace(1e-3, 1e2, 200) if grid is None else np.asarray(sorted(grid), dtype=float)
    sgn = 1 if m % 2 else -1
    w = width_series(m, n, 6 if m in (3, 4) else 1, gt_order=None if m in (3, 4) else spec.g_period)
    analytic = np.array([float(w.evalf(sgn * v)) for v in s])
    energies = resonance_path(m, n, [sgn * v for v in s], D)
    im = np.array([e.imag for e in energies])
    use_numeric = np.abs(analytic) > tail_threshold
    vals = np.where(use_numeric, im, analytic)
    # integrand in ln s: Im E(s) s^(-K)
    f = vals * s ** (-float(K))
    x = np.log(s)
    parity = 1.0 if m % 2 else (-1.0) ** K

    def simpson(xx, ff):
        if len(xx) % 2 == 0:
            xx, ff = xx[1:], ff[1:]
        h = xx[1] - xx[0]
        return float(h / 3 * (ff[0] + ff[-1] + 4 * ff[1:-1:2].sum() + 2 * ff[2:-1:2].sum()))

    kappa = 1.0 / (m + 2) if m % 2 else 2.0 / (m + 2)
    tail = vals[-1] * s[-1] ** (-float(K)) / (K - kappa)
    fine = simpson(x, f) + tail
    coarse = simpson(x[::2], f[::2]) + tail
    value = float(parity * fine / math.pi)
    if abs(fine - coarse) > tol * abs(fine):
        from .wkb import PrecisionError
        raise PrecisionError(f"dispersion grid too coarse: fine {fine}, coarse {coarse}")
    return value


# -- Fig. 2 data --------------------------------------------------------------


def fig2_data(couplings: Optional[Sequence[float]] = None, D: int = 96) -> List[Tuple[float, float, float, float]]:
    """Rows ``(g, Im numeric, Im leading, Im four-term series)`` for the first cubic excited state."""
    from .quantization import width_series
    gs = list(np.geomspace(0.004, 0.05, 16)) if couplings is None else list(couplings)
    w = width_series(3, 1, 3)
    lead = width_series(3, 1, 0)
    energies = resonance_path(3, 1, sorted(gs), D)
    by_g = dict(zip(sorted(gs), energies))
    return [(float(g), by_g[g].imag, float(lead.evalf(g)), float(w.evalf(g))) for g in gs]
