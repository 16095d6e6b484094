"""Induced metric and curvature of embedded product-state manifolds.

All metric derivatives come from the exact derivative tensors of the
embedding, so no finite differences enter the curvature pipeline. Index
conventions::

    dg[k, m, n]        = d g_{mn} / du^k
    ddg[l, k, m, n]    = d^2 g_{mn} / du^l du^k
    christoffel[l, m, n] = Gamma^l_{mn}
    riemann[k, l, m, n]  = R^k_{lmn}
      = d_m Gamma^k_{nl} - d_n Gamma^k_{ml}
        + Gamma^e_{nl} Gamma^k_{me} - Gamma^e_{ml} Gamma^k_{ne}
    ricci[m, n] = R^l_{mln},   scalar = g^{mn} R_{mn}
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .embedding import named_case


class SingularMetricError(ArithmeticError):
    """Metric is not positive definite at the requested point."""


class SingularExpressionError(ArithmeticError):
    """A closed-form curvature expression has a vanishing denominator."""


@dataclass
class MetricTensor:
    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray = None
    _chol: tuple = field(default=None, repr=False)

    @property
    def factor(self):
        if self._chol is None:
            try:
                self._chol = cho_factor(self.g, lower=True)
            except LinAlgError as exc:
                raise SingularMetricError(
                    f"metric is not positive definite at u={self.point.tolist()}"
                ) from exc
        return self._chol

    def solve(self, rhs):
        """Apply ``g^{-1}`` along the first axis of ``rhs``."""
        rhs = np.asarray(rhs)
        flat = rhs.reshape(rhs.shape[0], -1)
        return cho_solve(self.factor, flat).reshape(rhs.shape)

    @property
    def g_inv(self):
        return self.solve(np.eye(self.g.shape[0]))

    @property
    def condition_number(self):
        return float(np.linalg.cond(self.g))


@dataclass
class CurvatureReport:
    point: np.ndarray
    metric: MetricTensor
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float

    @property
    def condition_number(self):
        return self.metric.condition_number

    def lowered_riemann(self):
        return np.einsum("ke,elmn->klmn", self.metric.g, self.riemann)

    def symmetry_residuals(self):
        """Max absolute violation of each index symmetry / Bianchi identity."""
        g = self.christoffel
        r = self.riemann
        low = self.lowered_riemann()
        bianchi = low + np.einsum("klmn->kmnl", low) + np.einsum("klmn->knlm", low)
        return {
            "christoffel_symmetry": float(np.max(np.abs(g - g.transpose(0, 2, 1)))),
            "riemann_last_pair": float(np.max(np.abs(r + r.transpose(0, 1, 3, 2)))),
            "riemann_first_pair": float(np.max(np.abs(low + low.transpose(1, 0, 2, 3)))),
            "riemann_pair_exchange": float(np.max(np.abs(low - low.transpose(2, 3, 0, 1)))),
            "first_bianchi": float(np.max(np.abs(bianchi))),
            "ricci_symmetry": float(np.max(np.abs(self.ricci - self.ricci.T))),
        }


def _check_point(emap, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (emap.m,):
        raise ValueError(f"expected a point of length {emap.m}, got shape {u.shape}")
    return u


def induced_metric(emap, u, second=False):
    """Pullback ``g = J^T J`` of the Euclidean metric, with exact ``dg``.

    With ``second=True`` the second derivatives ``ddg`` are filled as well.
    """
    u = _check_point(emap, u)
    m = emap.m
    jac = emap.derivative_tensor(u, 1)
    hess = emap.derivative_tensor(u, 2).reshape(emap.n, m * m)
    g = jac.T @ jac
    t = (hess.T @ jac).reshape(m, m, m)
    dg = t + t.transpose(0, 2, 1)
    ddg = None
    if second:
        # b[l, k, m, n] = sum_a H[a, k, m] H[a, l, n]
        b = (hess.T @ hess).reshape(m, m, m, m).transpose(2, 0, 1, 3)
        ddg = b + b.transpose(1, 0, 2, 3)
        if emap.degree >= 3:
            third = emap.derivative_tensor(u, 3).reshape(emap.n, m**3)
            a = (third.T @ jac).reshape(m, m, m, m)
            ddg += a + a.transpose(0, 1, 3, 2)
    return MetricTensor(point=u, g=g, dg=dg, ddg=ddg)


def christoffel_first_kind(dg):
    """``Gamma_{k,mn} = (d_m g_{nk} + d_n g_{mk} - d_k g_{mn}) / 2``."""
    return 0.5 * (
        np.einsum("mnk->kmn", dg) + np.einsum("nmk->kmn", dg) - dg
    )


def christoffel_from_metric(metric):
    return metric.solve(christoffel_first_kind(metric.dg))


def christoffel(emap, u):
    return christoffel_from_metric(induced_metric(emap, u))


def christoffel_derivative(metric, gamma):
    """``d_r Gamma^l_{mn}`` as ``[r, l, m, n]`` from exact ``ddg``.

    Uses ``d g^{-1} = -g^{-1} (d g) g^{-1}``.
    """
    ddg = metric.ddg
    d_first = 0.5 * (
        np.einsum("rmnk->rkmn", ddg) + np.einsum("rnmk->rkmn", ddg) - ddg
    )
    inner = d_first - np.einsum("rke,emn->rkmn", metric.dg, gamma)
    # move k to the front so the solve acts on it
    solved = metric.solve(np.moveaxis(inner, 1, 0))
    return np.moveaxis(solved, 0, 1)


def riemann_from_christoffel(gamma, dgamma):
    """Assemble ``R^k_{lmn}`` from ``Gamma`` and ``dGamma[r, l, m, n]``."""
    deriv = np.einsum("mknl->klmn", dgamma)
    quad = np.einsum("enl,kme->klmn", gamma, gamma)
    return deriv - deriv.transpose(0, 1, 3, 2) + quad - quad.transpose(0, 1, 3, 2)


def ricci(riemann):
    return np.einsum("lmln->mn", riemann)


def scalar_from(metric, ricci_tensor):
    return float(np.trace(metric.solve(ricci_tensor)))


def curvature(emap, u):
    """Full curvature report at ``u``."""
    metric = induced_metric(emap, u, second=True)
    gamma = christoffel_from_metric(metric)
    dgamma = christoffel_derivative(metric, gamma)
    riem = riemann_from_christoffel(gamma, dgamma)
    ric = ricci(riem)
    return CurvatureReport(
        point=metric.point,
        metric=metric,
        christoffel=gamma,
        riemann=riem,
        ricci=ric,
        scalar=scalar_from(metric, ric),
    )


def riemann(emap, u):
    return curvature(emap, u).riemann


def scalar_curvature(emap, u):
    return curvature(emap, u).scalar


def pullback_length_check(emap, u, direction, step):
    """Compare the embedded squared chord with ``step^2 g(v, v)``."""
    u = _check_point(emap, u)
    v = np.asarray(direction, dtype=float)
    if step <= 0:
        raise ValueError("step must be positive")
    chord = emap.evaluate(u + step * v) - emap.evaluate(u)
    g = induced_metric(emap, u).g
    return {
        "embedded_sq_dist": float(chord @ chord),
        "metric_sq_form": float(step**2 * (v @ g @ v)),
    }


# Closed forms for the three frozen cases. Each reads the point into a
# dictionary of Fano coefficients keyed by multi-index, with d[0...0] = 1,
# and then follows the published index arithmetic literally.

CLOSED_FORM_CASES = ("two-qubit-product", "three-qubit-biproduct", "three-qubit-product")
CURVATURE_CLOSED_FORM_CASES = ("two-qubit-product", "three-qubit-biproduct")


def _coefficients(case_name, u):
    case = named_case(case_name)
    u = np.asarray(u, dtype=float)
    if u.shape != (case.m,):
        raise ValueError(f"expected a point of length {case.m}, got shape {u.shape}")
    d = {idx: float(x) for idx, x in zip(case.coordinate_order, u)}
    d[(0,) * case.qudits] = 1.0
    return d, case.m


def _two_qubit_metric(d, m):
    g = np.zeros((m, m))
    for mu in (0, 1, 2):
        g[mu, mu] = sum(d[(i, 0)] ** 2 for i in range(4))
    for mu in (3, 4, 5):
        g[mu, mu] = sum(d[(0, i)] ** 2 for i in range(4))
    for mu in (3, 4, 5):
        for nu in (0, 1, 2):
            g[mu, nu] = g[nu, mu] = d[(0, nu + 1)] * d[(mu - 2, 0)]
    return g


def _biproduct_metric(d, m):
    g = np.zeros((m, m))
    mvec = [d[(i, j, 0)] for i in range(4) for j in range(4)]
    for mu in (0, 1, 2):
        g[mu, mu] = sum(d[(i, j, 0)] ** 2 for i in range(4) for j in range(4))
    for mu in range(3, 18):
        g[mu, mu] = sum(d[(0, 0, i)] ** 2 for i in range(4))
    for mu in range(3, 18):
        for nu in (0, 1, 2):
            g[mu, nu] = g[nu, mu] = d[(0, 0, nu + 1)] * mvec[mu - 2]
    return g


def _three_qubit_metric(d, m):
    r1 = sum(d[(0, 0, i)] ** 2 for i in range(4))
    r2 = sum(d[(0, i, 0)] ** 2 for i in range(4))
    r3 = sum(d[(i, 0, 0)] ** 2 for i in range(4))
    g = np.zeros((m, m))
    for mu in (0, 1, 2):
        g[mu, mu] = r1 * r2
    for mu in (3, 4, 5):
        g[mu, mu] = r1 * r3
    for mu in (6, 7, 8):
        g[mu, mu] = r2 * r3
    for mu in (3, 4, 5):
        for nu in (0, 1, 2):
            g[mu, nu] = g[nu, mu] = r1 * d[(0, mu - 2, 0)] * d[(nu + 1, 0, 0)]
    for mu in (6, 7, 8):
        for nu in (0, 1, 2):
            g[mu, nu] = g[nu, mu] = r2 * d[(0, 0, mu - 5)] * d[(nu + 1, 0, 0)]
    for mu in (6, 7, 8):
        for nu in (3, 4, 5):
            g[mu, nu] = g[nu, mu] = r3 * d[(0, 0, mu - 5)] * d[(0, nu - 2, 0)]
    return g


_METRICS = {
    "two-qubit-product": _two_qubit_metric,
    "three-qubit-biproduct": _biproduct_metric,
    "three-qubit-product": _three_qubit_metric,
}


def metric_closed_form(case_name, u):
    """Closed-form induced metric matrix for a named case."""
    key = case_name.replace("_", "-")
    if key not in _METRICS:
        raise KeyError(f"no closed-form metric for case {case_name!r}")
    d, m = _coefficients(key, u)
    return _METRICS[key](d, m)


def scalar_curvature_closed_form(case_name, u, corrected=False):
    """Closed-form scalar curvature for the two-qubit product and
    three-qubit biproduct manifolds.

    By default the published rational expressions are evaluated as printed.
    The printed two-qubit expression disagrees with the intrinsic curvature
    away from the origin; ``corrected=True`` squares its ``(1 + q1 + q2)``
    denominator factor, which reproduces the exact pipeline. The biproduct
    expression is unaffected by the flag.
    """
    key = case_name.replace("_", "-")
    if key not in CURVATURE_CLOSED_FORM_CASES:
        raise KeyError(f"no closed-form scalar curvature for case {case_name!r}")
    d, _ = _coefficients(key, u)
    if key == "two-qubit-product":
        q1 = sum(d[(0, i)] ** 2 for i in (1, 2, 3))
        q2 = sum(d[(i, 0)] ** 2 for i in (1, 2, 3))
        num = -2.0 * (3 + 3 * q1 + 2 * q2) * (3 + 2 * q1 + 3 * q2)
        den = (1 + q1) * (1 + q2) * (1 + q1 + q2) ** (2 if corrected else 1)
    else:
        q1 = sum(d[(0, 0, i)] ** 2 for i in (1, 2, 3))
        q2 = (
            1
            + q1
            + sum(d[(0, i, 0)] ** 2 for i in (1, 2, 3))
            + sum(d[(i, j, 0)] ** 2 for i in (1, 2, 3) for j in range(4))
        )
        num = -2.0 * (q1 - 3 * q2) * (1 + q1 + 14 * q2)
        den = (1 + q1) * (q1 - q2) * q2**2
    if abs(den) < 1e-14:
        raise SingularExpressionError(f"denominator {den!r} vanishes at u={list(u)}")
    return num / den
