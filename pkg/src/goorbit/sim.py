"""Numeric geodesics: Euler-Arnold integration against one-parameter orbits.

Body velocities satisfy ``v' = ad*_v v`` where ``<ad*_v w, u> = <w, [v, u]>``.
Positions are integrated alongside: exponential coordinates on a group of
step at most two (``x' = v + [x, v] / 2``), or a matrix ``g`` with ``g' = g V(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from . import linalg as la
from .lie import LieAlgebra, PreconditionError, series
from .space import HomogeneousSpaceSpec

FD_STEP = 1e-6


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: np.ndarray  # (N, p)
    velocities: np.ndarray  # (N, d) body-frame velocities

    def __post_init__(self):
        if not (np.all(np.isfinite(self.points)) and np.all(np.isfinite(self.velocities))):
            raise SimulationError("non-finite trajectory entries")

    def columns(self) -> list[str]:
        p, d = self.points.shape[1], self.velocities.shape[1]
        return ["t"] + [f"x{i + 1}" for i in range(p)] + [f"v{i + 1}" for i in range(d)]


@dataclass(frozen=True)
class MetricAlgebra:
    """Structure constants ``c[i, j, k]`` and Gram matrix of a left-invariant metric."""

    c: np.ndarray
    gram: np.ndarray
    labels: tuple[str, ...] = ()

    @classmethod
    def from_exact(cls, alg: LieAlgebra, ip: Sequence[Sequence[Fraction]]) -> "MetricAlgebra":
        c = np.array(alg.c, dtype=float).reshape(alg.dim, alg.dim, alg.dim)
        g = np.array(ip, dtype=float)
        if not la.is_positive_definite(ip):
            raise PreconditionError("metric is not positive definite")
        return cls(c, g, alg.labels)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.c)

    def ad(self, x: np.ndarray) -> np.ndarray:
        # column j is [x, e_j]
        return np.einsum("i,ijk->kj", x, self.c)

    def coadjoint_rhs(self, v: np.ndarray) -> np.ndarray:
        """``ad*_v v = G^{-1} ad(v)^T G v``."""
        return np.linalg.solve(self.gram, self.ad(v).T @ (self.gram @ v))

    def speed(self, v: np.ndarray) -> float:
        return float(np.sqrt(v @ self.gram @ v))


def _rk4(f, y0: np.ndarray, t_end: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    h = t_end / steps
    ys = np.empty((steps + 1, y0.size))
    ys[0] = y = y0.astype(float)
    for n in range(steps):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise SimulationError(f"non-finite state at step {n + 1}")
        ys[n + 1] = y
    return np.linspace(0.0, t_end, steps + 1), ys


def integrate(ma: MetricAlgebra, v0: Sequence[float], t_end: float, steps: int,
              matrices: Sequence[np.ndarray] | None = None) -> Trajectory:
    """RK4 for the body velocity and the position.

    Without ``matrices`` the group is taken in exponential coordinates with the
    truncated product of step at most two; with ``matrices`` (images of the basis
    in a faithful representation) the position is the matrix ``g(t)``.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    d = ma.dim
    v0 = np.asarray(v0, dtype=float)
    if matrices is None:
        def f(y):
            x, v = y[:d], y[d:]
            return np.concatenate([v + 0.5 * ma.bracket(x, v), ma.coadjoint_rhs(v)])

        y0 = np.concatenate([np.zeros(d), v0])
        times, ys = _rk4(f, y0, t_end, steps)
        return Trajectory(times, ys[:, :d], ys[:, d:])
    mats = np.array(matrices, dtype=float)
    size = mats.shape[1]

    def fm(y):
        g = y[: size * size].reshape(size, size)
        v = y[size * size:]
        vm = np.tensordot(v, mats, axes=1)
        return np.concatenate([(g @ vm).ravel(), ma.coadjoint_rhs(v)])

    y0 = np.concatenate([np.eye(size).ravel(), v0])
    times, ys = _rk4(fm, y0, t_end, steps)
    return Trajectory(times, ys[:, : size * size], ys[:, size * size:])


# ---------------------------------------------------------------------------
# One-parameter orbits
# ---------------------------------------------------------------------------


def orbit_two_step(ma: MetricAlgebra, D: np.ndarray, X: Sequence[float], times: np.ndarray) -> Trajectory:
    """Projection to ``N`` of ``exp(t(X + Z))`` in ``N x| K`` where ``D = ad(Z)|n``.

    The body velocity is ``w = e^{tD} X``.  The position ``x = y + c`` solves
    ``y' = w`` and ``c' = [y, w] / 2`` (c is central); with ``q = y (x) w`` and
    ``p = w (x) w`` the whole system is linear and is advanced by one matrix
    exponential per grid step.
    """
    d = ma.dim
    X = np.asarray(X, dtype=float)
    I = np.eye(d)
    nq = d * d
    size = d + d + nq + nq + d
    A = np.zeros((size, size))
    w_, y_, q_, p_, c_ = 0, d, 2 * d, 2 * d + nq, 2 * d + 2 * nq
    A[w_:w_ + d, w_:w_ + d] = D
    A[y_:y_ + d, w_:w_ + d] = I
    A[q_:q_ + nq, p_:p_ + nq] = np.eye(nq)
    A[q_:q_ + nq, q_:q_ + nq] = np.kron(I, D)
    A[p_:p_ + nq, p_:p_ + nq] = np.kron(D, I) + np.kron(I, D)
    # c' = 1/2 sum_{ij} q_ij [e_i, e_j]
    A[c_:c_ + d, q_:q_ + nq] = 0.5 * ma.c.reshape(nq, d).T
    state = np.zeros(size)
    state[w_:w_ + d] = X
    state[p_:p_ + nq] = np.outer(X, X).ravel()
    times = np.asarray(times, dtype=float)
    if not np.allclose(np.diff(times), times[1] - times[0]):
        raise ValueError("orbit grid must be uniform")
    step = scipy.linalg.expm(A * (times[1] - times[0]))
    pts = np.empty((len(times), d))
    vel = np.empty((len(times), d))
    for n in range(len(times)):
        if n:
            state = step @ state
        vel[n] = state[w_:w_ + d]
        pts[n] = state[y_:y_ + d] + state[c_:c_ + d]
    return Trajectory(times, pts, vel)


SL2_MATRICES = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [0.0, 0.0]]),
    np.array([[0.0, 0.0], [1.0, 0.0]]),
)

SOL_MATRICES = (
    np.diag([1.0, -1.0, 0.0]),
    np.array([[0.0, 0, 1], [0, 0, 0], [0, 0, 0]]),
    np.array([[0.0, 0, 0], [0, 0, 1], [0, 0, 0]]),
)


def _iwasawa_s(g: np.ndarray) -> np.ndarray:
    """Upper triangular factor with positive diagonal of ``g = s k``, k orthogonal."""
    r, q = scipy.linalg.rq(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return r * signs  # scales columns of r; q absorbs the signs


def _body_velocity_fd(path, t: float, basis_solve) -> np.ndarray:
    s = path(t)
    sinv = np.linalg.inv(s)
    deriv = (sinv @ path(t + FD_STEP) - sinv @ path(t - FD_STEP)) / (2 * FD_STEP)
    return basis_solve(deriv)


def orbit_matrix(model: str, algebra_elem: np.ndarray, times: np.ndarray) -> Trajectory:
    """One-parameter orbit ``exp(t A)`` projected to the simply transitive subgroup.

    ``hyperbolic``: A in sl(2,R), projection to upper triangular S = exp(span{H, E}),
    velocities in the (H, E) basis.  ``sol``: A in the Sol algebra (h = 0), no
    projection, velocities in (e1, e2, e3).  Body velocities use central
    differences.
    """
    if model == "hyperbolic":
        def path(t):
            return _iwasawa_s(scipy.linalg.expm(t * algebra_elem))

        def solve(m):
            return np.array([m[0, 0], m[0, 1]])
    elif model == "sol":
        def path(t):
            return scipy.linalg.expm(t * algebra_elem)

        def solve(m):
            return np.array([m[0, 0], m[0, 2], m[1, 2]])
    else:
        raise PreconditionError(f"unsupported group model {model!r}")
    times = np.asarray(times, dtype=float)
    pts = np.array([path(t).ravel() for t in times])
    vel = np.array([_body_velocity_fd(path, t, solve) for t in times])
    return Trajectory(times, pts, vel)


# ---------------------------------------------------------------------------
# Comparison and I/O
# ---------------------------------------------------------------------------


def compare(t1: Trajectory, t2: Trajectory) -> float:
    """Sup-norm deviation over points and velocities on a shared grid."""
    if t1.times.shape != t2.times.shape or not np.allclose(t1.times, t2.times, rtol=0, atol=1e-12):
        raise ValueError("trajectories are on different time grids")
    if t1.points.shape != t2.points.shape or t1.velocities.shape != t2.velocities.shape:
        raise ValueError("trajectories have different coordinate shapes")
    return float(max(np.abs(t1.points - t2.points).max(initial=0.0),
                     np.abs(t1.velocities - t2.velocities).max(initial=0.0)))


def speed_drift(ma: MetricAlgebra, traj: Trajectory) -> float:
    speeds = np.array([ma.speed(v) for v in traj.velocities])
    return float(np.abs(speeds - speeds[0]).max())


def convergence_order(reference: Trajectory, ma: MetricAlgebra, v0, t_end: float,
                      steps: Sequence[int] = (20, 40, 80), matrices=None) -> list[float]:
    """Observed orders ``log2(e_N / e_2N)`` of the final-state error against ``reference``.

    ``reference`` must hold the exact state at ``t_end`` as its last row.
    """
    errs = []
    for n in steps:
        tr = integrate(ma, v0, t_end, n, matrices)
        e = max(np.abs(tr.points[-1] - reference.points[-1]).max(),
                np.abs(tr.velocities[-1] - reference.velocities[-1]).max())
        errs.append(e)
    return [float(np.log2(a / b)) for a, b in zip(errs, errs[1:])]


def write_trajectory(traj: Trajectory, path: str, delimiter: str = ",") -> None:
    """Columns: ``t, x1..xp, v1..vd`` with a single header line."""
    data = np.column_stack([traj.times, traj.points, traj.velocities])
    np.savetxt(path, data, delimiter=delimiter, header=delimiter.join(traj.columns()),
               comments="", fmt="%.17g")


def read_trajectory(path: str, delimiter: str = ",") -> Trajectory:
    with open(path) as fh:
        header = fh.readline().strip().split(delimiter)
    data = np.loadtxt(path, delimiter=delimiter, skiprows=1, ndmin=2)
    p = sum(1 for h in header if h.startswith("x"))
    return Trajectory(data[:, 0], data[:, 1:1 + p], data[:, 1 + p:])


# ---------------------------------------------------------------------------
# Models attached to homogeneous spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupModel:
    """Simply transitive metric algebra for a spec, with a way to build orbits.

    ``kind`` is ``two-step`` (m is a nilpotent ideal of step <= 2 and g = n + h),
    ``hyperbolic`` or ``sol`` (matrix models).
    """

    kind: str
    metric: MetricAlgebra
    spec: HomogeneousSpaceSpec
    matrices: tuple | None = None

    def initial_velocity(self, X: Sequence[Fraction]) -> np.ndarray:
        spec = self.spec
        if self.kind in ("two-step", "sol"):
            return np.array([float(c) for c in spec.m_coords(X)])
        # hyperbolic: body velocity v in s = span{H, E} with v_m = X
        x = np.array([float(c) for c in X])
        # v = a H + b E, (aH + bE)_m = a H + (b/2)(E + F)
        return np.array([x[0], 2 * x[1]])

    def orbit(self, X: Sequence[Fraction], Z: Sequence[Fraction], times: np.ndarray) -> Trajectory:
        spec = self.spec
        if self.kind == "two-step":
            ad_z = [spec.m_coords(spec.g.bracket(Z, y)) for y in spec.m.basis]
            D = np.array(la.transpose(ad_z), dtype=float)
            return orbit_two_step(self.metric, D, [float(c) for c in spec.m_coords(X)], times)
        xz = [float(a + b) for a, b in zip(X, Z)]
        mats = SL2_MATRICES if self.kind == "hyperbolic" else SOL_MATRICES
        elem = sum(c * m for c, m in zip(xz, mats))
        return orbit_matrix(self.kind, elem, times)

    def geodesic(self, X: Sequence[Fraction], t_end: float, steps: int) -> Trajectory:
        return integrate(self.metric, self.initial_velocity(X), t_end, steps, self.matrices)


def group_model(spec: HomogeneousSpaceSpec, kind: str | None = None) -> GroupModel:
    """Detect (or force) the group model of a spec."""
    g = spec.g
    if kind in (None, "two-step") and g.is_ideal(spec.m) and g.is_subalgebra(spec.m):
        ser = series(g, spec.m)
        if ser.is_nilpotent and ser.step <= 2:
            alg = g.restrict(spec.m)
            return GroupModel("two-step", MetricAlgebra.from_exact(alg, spec.ip), spec)
    if kind == "hyperbolic" or (kind is None and spec.name == "hyperbolic_plane"):
        s = la.Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
        alg = g.restrict(s, ("H", "E"))
        ev = [spec.proj_m(x) for x in s.basis]
        ip = tuple(tuple(spec.inner(a, b) for b in ev) for a in ev)
        mats = (SL2_MATRICES[0], SL2_MATRICES[1])
        return GroupModel("hyperbolic", MetricAlgebra.from_exact(alg, ip), spec, mats)
    if kind == "sol" or (kind is None and spec.name == "e11_sol"):
        return GroupModel("sol", MetricAlgebra.from_exact(g, spec.ip), spec, SOL_MATRICES)
    raise PreconditionError("no group model available for this space")
