"""Bernoulli interaction graphs and the matrix functionals built on A_N = theta / N.

The scaled matrix is never stored: every routine works on the 0/1 matrix
``theta`` and applies the 1/N factor on the fly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .rng import philox


class GraphError(ValueError):
    pass


class ResolventError(RuntimeError):
    """Fixed-point resolvent iteration failed to converge."""


@dataclass(frozen=True, eq=False)
class Graph:
    N: int
    theta: np.ndarray  # (N, N) bool, theta[i, j] = 1 when j excites i
    seed: int | None = None
    p: float | None = None

    def __post_init__(self):
        th = np.asarray(self.theta)
        if th.ndim != 2 or th.shape != (self.N, self.N):
            raise GraphError(f"theta must be {self.N}x{self.N}, got {th.shape}")
        if th.dtype != np.bool_:
            if not np.all((th == 0) | (th == 1)):
                raise GraphError("theta entries must be 0 or 1")
            th = th.astype(bool)
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    @classmethod
    def from_theta(cls, theta, seed=None, p=None) -> "Graph":
        theta = np.asarray(theta)
        return cls(theta.shape[0], theta, seed, p)

    def scaled_dense(self) -> np.ndarray:
        """Materialise A_N; only meant for small oracles and tests."""
        return self.theta / float(self.N)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """A_N @ x."""
        return (self._float_theta() @ x) / self.N

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        """A_N^T @ x."""
        return (x @ self._float_theta()) / self.N

    def _float_theta(self) -> np.ndarray:
        cached = self.__dict__.get("_theta_f")
        if cached is None:
            cached = self.theta.astype(np.float64)
            cached.setflags(write=False)
            object.__setattr__(self, "_theta_f", cached)
        return cached

    def row_sums(self) -> np.ndarray:
        return self.theta.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.theta.sum(axis=0)


def sample_graph(N: int, p: float, seed: int) -> Graph:
    """Draw theta_ij i.i.d. Bernoulli(p), self-loops included."""
    if N < 1:
        raise GraphError(f"N must be >= 1, got {N}")
    if not 0 < p <= 1:
        raise GraphError(f"p must lie in (0, 1], got {p}")
    rng = philox(seed)
    theta = rng.random((N, N)) < p
    return Graph(N, theta, seed, p)


def operator_norm(graph: Graph, r, restricted_to_first_K: int | None = None,
                  restrict: str = "rows") -> float:
    """|||A_N|||_r for r in {1, inf}.

    With ``restricted_to_first_K`` the matrix is I_K A_N (``restrict="rows"``,
    rows beyond K zeroed) or A_N I_K (``restrict="cols"``).
    """
    th = graph.theta
    if restricted_to_first_K is not None:
        K = int(restricted_to_first_K)
        if not 1 <= K <= graph.N:
            raise GraphError(f"K must lie in [1, {graph.N}], got {K}")
        if restrict == "rows":
            th = th[:K, :]
        elif restrict == "cols":
            th = th[:, :K]
        else:
            raise GraphError(f"restrict must be 'rows' or 'cols', got {restrict!r}")
    if r == 1:
        sums = th.sum(axis=0)
    elif r == np.inf or r == "inf":
        sums = th.sum(axis=1)
    else:
        raise GraphError(f"only r in {{1, inf}} supported, got {r}")
    return float(sums.max()) / graph.N if sums.size else 0.0


@dataclass
class ResolventVectors:
    ell: np.ndarray
    ell_bar_K: float
    c_K: np.ndarray
    residual_ell: float
    residual_c: float
    iterations: int


def _fixed_point(apply, rhs, Lambda, tol, max_iter, measured_norm):
    # x <- rhs + Lambda * A x, geometric convergence when rho(Lambda A) < 1
    x = rhs.copy()
    for it in range(1, max_iter + 1):
        x_new = rhs + Lambda * apply(x)
        step = np.max(np.abs(x_new - x))
        x = x_new
        if not np.all(np.isfinite(x)):
            break
        if step <= tol * max(1.0, np.max(np.abs(x))):
            return x, it
    raise ResolventError(
        f"resolvent iteration did not converge after {max_iter} sweeps "
        f"(Lambda * |||A_N|||_inf = {measured_norm:.6g})"
    )


def resolvent_vectors(graph: Graph, Lambda: float, K: int, tol: float = 1e-14,
                      max_iter: int = 100_000) -> ResolventVectors:
    """ell_N = Q_N 1_N and c_N^K = Q_N^T 1_K with Q_N = (I - Lambda A_N)^{-1}.

    Both come from matrix-vector fixed-point sweeps; no dense inverse is formed.
    """
    N = graph.N
    if not 1 <= K <= N:
        raise GraphError(f"K must lie in [1, {N}], got {K}")
    norm_inf = Lambda * operator_norm(graph, np.inf)
    ones = np.ones(N)
    ones_K = np.zeros(N)
    ones_K[:K] = 1.0
    ell, it1 = _fixed_point(graph.matvec, ones, Lambda, tol, max_iter, norm_inf)
    c, it2 = _fixed_point(graph.rmatvec, ones_K, Lambda, tol, max_iter, norm_inf)
    res_ell = float(np.max(np.abs(ell - Lambda * graph.matvec(ell) - ones)))
    res_c = float(np.max(np.abs(c - Lambda * graph.rmatvec(c) - ones_K)))
    return ResolventVectors(ell, float(ell[:K].mean()), c, res_ell, res_c, max(it1, it2))


@dataclass
class PerronResult:
    rho: float
    V: np.ndarray
    converged: bool
    iterations: int
    irreducible: bool
    residual: float


def perron(graph: Graph, tol: float = 1e-12, max_iter: int = 10_000) -> PerronResult:
    """Top eigenpair of A_N by power iteration from 1_N, V scaled to ||V||_2 = sqrt(N)."""
    N = graph.N
    if not graph.theta.any():
        raise GraphError("perron eigenpair undefined for the zero matrix")
    scale = np.sqrt(N)
    v = np.ones(N)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        w = graph.matvec(v)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            break
        w *= scale / nrm
        step = np.max(np.abs(w - v))
        v = w
        if step < tol:
            converged = True
            break
    Av = graph.matvec(v)
    rho = float(v @ Av / (v @ v))
    residual = float(np.linalg.norm(Av - rho * v) / np.linalg.norm(v))
    n_comp, _ = connected_components(csr_matrix(graph.theta), directed=True, connection="strong")
    return PerronResult(rho, v, converged, it, n_comp == 1, residual)


def check_omega_subcritical(graph: Graph, Lambda: float, p: float, K: int) -> bool:
    """Norm event Omega_{N,K}, checked at r = 1 and r = inf only."""
    if Lambda * p >= 1:
        raise GraphError(f"Omega_(N,K) is a subcritical event, got Lambda * p = {Lambda * p}")
    a = (1 + Lambda * p) / 2
    N = graph.N
    return bool(
        Lambda * operator_norm(graph, 1) <= a
        and Lambda * operator_norm(graph, np.inf) <= a
        and Lambda * (N / K) * operator_norm(graph, 1, K, "rows") <= a
        and Lambda * (N / K) * operator_norm(graph, np.inf, K, "cols") <= a
    )


def check_omega_supercritical(graph: Graph, p: float, K: int) -> bool:
    """Degree and two-step concentration event Omega_N^{K,2}."""
    N = graph.N
    th = graph._float_theta()
    if th.sum() / N / N <= p / 2:
        return False
    if th[:K].sum() / N / K <= p / 2:
        return False
    two_step = (th @ th) / N  # N * A_N^2
    return bool(np.all(np.abs(two_step - p * p) < p * p / (2 * N ** 0.375)))


@dataclass
class GraphDiagnostics:
    N: int
    K: int
    p: float | None
    Lambda: float
    mu: float
    seed: int | None
    norm_1: float
    norm_inf: float
    norm_1_first_K: float
    resolvent_residual: float
    rho_N: float
    perron_converged: bool
    perron_irreducible: bool
    ell_bar_K: float
    x_norm: float
    X_inf: float
    omega_subcritical: bool | None
    omega_supercritical: bool | None
    V_N: np.ndarray | None = None
    ell_N: np.ndarray | None = None
    c_K: np.ndarray | None = None

    def to_dict(self, vectors: bool = False) -> dict:
        d = asdict(self)
        for key in ("V_N", "ell_N", "c_K"):
            val = d.pop(key)
            if vectors and val is not None:
                d[key] = np.asarray(val).tolist()
        return d


def limit_diagnostics(graph: Graph, Lambda: float, mu: float, K: int,
                      resolvent: ResolventVectors | None = None) -> dict:
    """ell_bar_K, the spread (N/K)||x_N^K||^2 and the deterministic limit X_inf of the X statistic."""
    N = graph.N
    res = resolvent if resolvent is not None else resolvent_vectors(graph, Lambda, K)
    ell, c = res.ell, res.c_K
    ell_bar = res.ell_bar_K
    x_norm = (N / K) * float(np.sum((ell[:K] - ell_bar) ** 2))
    X_inf = mu * N / K**2 * float(np.sum(c * c * ell)) - mu * (N - K) / K * ell_bar
    return {"ell_bar_K": ell_bar, "x_norm": x_norm, "X_inf": X_inf}


def graph_diagnostics(graph: Graph, Lambda: float, mu: float, K: int,
                      p: float | None = None) -> GraphDiagnostics:
    """Every graph functional in one record; events that do not apply are None."""
    p = graph.p if p is None else p
    res = resolvent_vectors(graph, Lambda, K)
    lim = limit_diagnostics(graph, Lambda, mu, K, res)
    if graph.theta.any():
        pr = perron(graph)
        rho, V, conv, irred = pr.rho, pr.V, pr.converged, pr.irreducible
    else:
        rho, V, conv, irred = 0.0, None, False, False
    omega_sub = omega_sup = None
    if p is not None:
        omega_sub = check_omega_subcritical(graph, Lambda, p, K) if Lambda * p < 1 else None
        omega_sup = check_omega_supercritical(graph, p, K)
    return GraphDiagnostics(
        N=graph.N, K=K, p=p, Lambda=Lambda, mu=mu, seed=graph.seed,
        norm_1=operator_norm(graph, 1),
        norm_inf=operator_norm(graph, np.inf),
        norm_1_first_K=operator_norm(graph, 1, K),
        resolvent_residual=max(res.residual_ell, res.residual_c),
        rho_N=rho, perron_converged=conv, perron_irreducible=irred,
        ell_bar_K=lim["ell_bar_K"], x_norm=lim["x_norm"], X_inf=lim["X_inf"],
        omega_subcritical=omega_sub, omega_supercritical=omega_sup,
        V_N=V, ell_N=res.ell, c_K=res.c_K,
    )
