"""Dense 2**n-dimensional checks: joint eigenspaces, GHZ form, the Bell operator.

Basis convention: computational basis, site 1 is the most significant bit.
Every eigenpair reported here is re-verified by its residual, so the
eigensolver itself is not trusted.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .experiment import ExperimentLike, _strings
from .pauli import GeneralObservable, PauliString, parse_string

RANK_TOL = 1e-9
CONSTRUCTION_TOL = 1e-12

PAULI = {
    0: np.array([[0, 1], [1, 0]], dtype=complex),
    1: np.array([[0, -1j], [1j, 0]], dtype=complex),
    2: np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_VECTOR = np.stack([PAULI[0], PAULI[1], PAULI[2]])


class NumericalError(RuntimeError):
    """A computed eigenpair failed its residual check."""


class RankAmbiguityError(NumericalError):
    """A spectrum value fell too close to the rank decision threshold."""


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return functools.reduce(np.kron, mats)


@functools.lru_cache(maxsize=4096)
def _operator_cached(word: str) -> np.ndarray:
    op = _kron_all([PAULI["xyz".index(c)] for c in word])
    op.setflags(write=False)
    return op


def to_operator(p: PauliString) -> np.ndarray:
    """Tensor product of Pauli matrices in site order."""
    return _operator_cached(str(p))


def general_operator(o: GeneralObservable) -> np.ndarray:
    return _kron_all([np.einsum("k,kij->ij", v, PAULI_VECTOR) for v in o.vectors])


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def basis_state(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def ghz_state(n: int = 4) -> np.ndarray:
    """(|0...0> - |1...1>)/sqrt(2)."""
    return (basis_state("0" * n) - basis_state("1" * n)) / np.sqrt(2)


# --------------------------------------------------------------------------
# Joint eigenspaces

@dataclass(frozen=True)
class EigenvalueVector:
    values: Tuple[int, ...]
    eigenspace_dim: int


def _rank(projector: np.ndarray, tol: float) -> int:
    w = np.linalg.eigvalsh(projector)
    close = np.abs(w) > tol
    close &= np.abs(w - 1) > tol
    if np.any(close):
        raise RankAmbiguityError(f"projector eigenvalues not within {tol} of 0 or 1: {w[close]}")
    return int(np.sum(w > 0.5))


def _projector(ops: Sequence[np.ndarray], eps: Sequence[int]) -> np.ndarray:
    dim = ops[0].shape[0]
    p = np.eye(dim, dtype=complex)
    for op, e in zip(ops, eps):
        p = p @ (np.eye(dim) + e * op) / 2
    return p


def achievable_vectors(e: ExperimentLike, tol: float = RANK_TOL) -> List[EigenvalueVector]:
    """All eps tuples with a nonzero joint eigenspace, with dimensions (lexicographic, +1 first)."""
    strings = _strings(e)
    ops = [to_operator(p) for p in strings]
    dim = ops[0].shape[0]
    out: List[EigenvalueVector] = []

    def branch(i: int, proj: np.ndarray, eps: Tuple[int, ...]):
        if i == len(ops):
            r = _rank(proj, tol)
            if r:
                out.append(EigenvalueVector(eps, r))
            return
        for sgn in (1, -1):
            nxt = proj @ (np.eye(dim) + sgn * ops[i]) / 2
            if np.real(np.trace(nxt)) > 0.5:
                branch(i + 1, nxt, eps + (sgn,))

    branch(0, np.eye(dim, dtype=complex), ())
    total = sum(v.eigenspace_dim for v in out)
    if total != dim:
        raise NumericalError(f"eigenspace dimensions sum to {total}, expected {dim}")
    return out


def joint_eigenspace(e: ExperimentLike, eps: Sequence[int], tol: float = RANK_TOL) -> List[np.ndarray]:
    """Orthonormal basis of the common eigenspace; empty when ``eps`` is not achievable."""
    strings = _strings(e)
    if len(eps) != len(strings):
        raise ValueError(f"need {len(strings)} eigenvalues, got {len(eps)}")
    if any(v not in (1, -1) for v in eps):
        raise ValueError("eigenvalues must be +1 or -1")
    ops = [to_operator(p) for p in strings]
    proj = _projector(ops, eps)
    proj = (proj + proj.conj().T) / 2
    w, v = np.linalg.eigh(proj)
    bad = (np.abs(w) > tol) & (np.abs(w - 1) > tol)
    if np.any(bad):
        raise RankAmbiguityError(f"projector eigenvalues {w[bad]} are neither 0 nor 1")
    basis = [v[:, k] for k in range(len(w)) if w[k] > 0.5]
    for b in basis:
        for op, ev in zip(ops, eps):
            res = np.linalg.norm(op @ b - ev * b)
            if res >= tol:
                raise NumericalError(f"eigen-residual {res:.3g} exceeds {tol}")
    return basis


def violated_subset(e: ExperimentLike, eps: Sequence[int]):
    """A subset with operator product +-I whose sign contradicts ``eps``, or None."""
    from .lhv import operator_identity_subsets

    for s in operator_identity_subsets(e):
        if int(np.prod([eps[i] for i in s.indices])) != s.sign:
            return s
    return None


# --------------------------------------------------------------------------
# GHZ form

@dataclass
class GhzDecomposition:
    """``(e^{i theta} |u_1...u_n> + e^{i phi} |v_1...v_n>) / sqrt(2)`` with ``<u_j|v_j> = 0``."""

    u: List[np.ndarray]
    v: List[np.ndarray]
    theta: float
    phi: float

    def state(self) -> np.ndarray:
        a = _kron_all(self.u)
        b = _kron_all(self.v)
        return (np.exp(1j * self.theta) * a + np.exp(1j * self.phi) * b) / np.sqrt(2)

    def to_json(self) -> dict:
        def enc(vs):
            return [[[float(z.real), float(z.imag)] for z in vec] for vec in vs]

        return {"u": enc(self.u), "v": enc(self.v), "theta": self.theta, "phi": self.phi}


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first largest entry is real positive."""
    k = int(np.argmax(np.round(np.abs(v), 10)))
    return v * (abs(v[k]) / v[k])


def _reduced_range(psi: np.ndarray, keep: Tuple[int, int], tol: float):
    """Range of the two-site marginal; None unless it is two-dimensional with weights 1/2."""
    t = psi.reshape((2,) * 4)
    rest = [k for k in range(4) if k not in keep]
    m = np.transpose(t, list(keep) + rest).reshape(4, 4)
    rho = m @ m.conj().T
    w, vec = np.linalg.eigh(rho)
    # ascending: two zeros then two halves for a GHZ-form state
    for x in w[:2]:
        if tol < abs(x) < 10 * tol:
            raise RankAmbiguityError(f"marginal eigenvalue {x:.3g} at the rank threshold")
    if np.any(np.abs(w[:2]) > tol) or np.any(np.abs(w[2:] - 0.5) > tol):
        return None
    return vec[:, 2], vec[:, 3]


def _product_pair(r1: np.ndarray, r2: np.ndarray, tol: float):
    """The two product vectors in span{r1, r2}, as site factors; None if not exactly two."""
    a = r1.reshape(2, 2)
    b = r2.reshape(2, 2)
    # det(alpha a + beta b) = qa alpha^2 + qb alpha beta + qc beta^2
    qa = np.linalg.det(a)
    qc = np.linalg.det(b)
    qb = a[0, 0] * b[1, 1] + a[1, 1] * b[0, 0] - a[0, 1] * b[1, 0] - a[1, 0] * b[0, 1]
    if max(abs(qa), abs(qb), abs(qc)) < tol:
        return None
    # homogeneous roots (alpha : beta), stable form that survives qa == 0
    disc = np.sqrt(complex(qb * qb - 4 * qa * qc))
    if (np.conj(qb) * disc).real < 0:
        disc = -disc
    q = -(qb + disc) / 2
    if abs(q) < tol:
        return None
    coeffs = []
    for al, be in ((q, qa), (qc, q)):
        norm = np.hypot(abs(al), abs(be))
        coeffs.append((al / norm, be / norm))
    (a1, b1), (a2, b2) = coeffs
    if abs(a1 * b2 - a2 * b1) < np.sqrt(tol):
        return None
    pairs = []
    for al, be in coeffs:
        w = (al * a + be * b)
        u, s, vh = np.linalg.svd(w)
        if s[1] > np.sqrt(tol) * s[0]:
            return None
        pairs.append((u[:, 0], vh[0, :]))
    return pairs


def is_ghz_form(s: np.ndarray, tol: float = 1e-8) -> Optional[GhzDecomposition]:
    """Decompose a four-qubit state as a balanced sum of two site-wise orthogonal products.

    The two-site marginals on sites {1,2} and {3,4} must each have weights
    (1/2, 1/2); inside each two-dimensional range the product vectors are
    the roots of the determinant quadratic, and the state is rebuilt from
    the matching pairing.  Returns None when ``s`` is not of that form.
    """
    psi = np.asarray(s, dtype=complex)
    if psi.shape != (16,):
        raise ValueError("is_ghz_form expects a four-qubit state vector")
    if abs(np.linalg.norm(psi) - 1) > tol:
        raise ValueError("state must have unit norm")
    left = _reduced_range(psi, (0, 1), tol)
    right = _reduced_range(psi, (2, 3), tol)
    if left is None or right is None:
        return None
    lp = _product_pair(*left, tol)
    rp = _product_pair(*right, tol)
    if lp is None or rp is None:
        return None
    (u1, u2), (v1, v2) = lp
    for x, y in ((u1, v1), (u2, v2)):
        if abs(np.vdot(x, y)) > np.sqrt(tol):
            return None
    for (u3, u4), (v3, v4) in (rp, rp[::-1]):
        if abs(np.vdot(u3, v3)) > np.sqrt(tol) or abs(np.vdot(u4, v4)) > np.sqrt(tol):
            continue
        us = [fix_phase(x) for x in (u1, u2, u3, u4)]
        vs = [fix_phase(x) for x in (v1, v2, v3, v4)]
        cu = np.vdot(_kron_all(us), psi)
        cv = np.vdot(_kron_all(vs), psi)
        if abs(abs(cu) - 1 / np.sqrt(2)) > np.sqrt(tol) or abs(abs(cv) - 1 / np.sqrt(2)) > np.sqrt(tol):
            continue
        dec = GhzDecomposition(
            us, vs, float(np.angle(cu) % (2 * np.pi)), float(np.angle(cv) % (2 * np.pi))
        )
        if np.linalg.norm(dec.state() - psi) < tol:
            return dec
    return None


def random_local_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    mats = []
    for _ in range(n):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        mats.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return _kron_all(mats)


# --------------------------------------------------------------------------
# Bell operator

BELL_TERMS: Tuple[Tuple[int, str], ...] = (
    (-1, "xxxx"),
    (1, "yyxx"),
    (1, "yxyx"),
    (1, "xxyy"),
    (1, "yxxy"),
    (1, "xyyx"),
    (1, "xyxy"),
    (-1, "yyyy"),
    (1, "zzzz"),
)
PRINTED_BELL_BOUND = 9


def bell_operator() -> np.ndarray:
    return sum(c * to_operator(parse_string(w)) for c, w in BELL_TERMS)


def classical_bell_max(terms: Sequence[Tuple[int, str]] = BELL_TERMS) -> int:
    """Maximum of the signed sum over all +-1 assignments to the local observables."""
    n = len(terms[0][1])
    k = 3 * n
    values = 1 - 2 * ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1)
    total = np.zeros(1 << k, dtype=np.int64)
    for c, w in terms:
        prod = np.ones(1 << k, dtype=np.int64)
        for j, ch in enumerate(w):
            prod *= values[:, 3 * j + "xyz".index(ch)]
        total += c * prod
    return int(total.max())


@dataclass
class BellReport:
    quantum_max: float
    maximizer: np.ndarray
    degenerate: bool
    classical_max: int
    ghz: bool
    ghz_overlap: float
    printed_bound: int = PRINTED_BELL_BOUND

    @property
    def discrepancy(self) -> bool:
        """The printed bound equals the quantum maximum, not the local one."""
        return self.classical_max != self.printed_bound


def bell_analysis(tol: float = RANK_TOL) -> BellReport:
    b = bell_operator()
    w, v = np.linalg.eigh(b)
    top = w[-1]
    vec = v[:, -1]
    if np.linalg.norm(b @ vec - top * vec) >= tol:
        raise NumericalError("Bell eigen-residual too large")
    degenerate = bool(np.sum(np.abs(w - top) < tol) > 1)
    return BellReport(
        quantum_max=float(top),
        maximizer=vec,
        degenerate=degenerate,
        classical_max=classical_bell_max(),
        ghz=is_ghz_form(vec, max(tol, 1e-8)) is not None,
        ghz_overlap=float(abs(np.vdot(ghz_state(4), vec))),
    )


def _triad_ops(triad: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tuple(np.einsum("k,kij->ij", t, PAULI_VECTOR) for t in triad)


def verify_bsquared_identity(tol: float = CONSTRUCTION_TOL, triads=None) -> bool:
    """Check B^2 = 4 + 4 (A''_1 A''_2 + A''_1 A''_3 + A''_2 A''_3) for the four-term operator.

    ``triads`` is one (3, 3) array of directions (A, A', A'') used at every
    site, or a (4, 3, 3) array with one per site; default is (x, y, z).
    """
    t = np.eye(3) if triads is None else np.asarray(triads, dtype=float)
    if t.ndim == 2:
        t = np.broadcast_to(t, (4, 3, 3))
    a, ap, app = zip(*(_triad_ops(t[j]) for j in range(4)))

    def prod(*mats):
        return _kron_all(mats)

    b = (
        -prod(a[0], a[1], a[2], a[3])
        + prod(ap[0], ap[1], a[2], a[3])
        + prod(ap[0], a[1], ap[2], a[3])
        + prod(a[0], ap[1], ap[2], a[3])
    )
    i2 = np.eye(2)
    rhs = 4 * np.eye(16) + 4 * (
        prod(app[0], app[1], i2, i2) + prod(app[0], i2, app[2], i2) + prod(i2, app[1], app[2], i2)
    )
    return bool(np.max(np.abs(b @ b - rhs)) < tol)
