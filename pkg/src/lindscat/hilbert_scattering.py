"""Hilbert-space wave operators for a dissipative H and a free H0.

Sign convention: W_plus(A, B) = s-lim_{t -> -inf} exp(itA) exp(-itB) and
W_minus(A, B) = s-lim_{t -> +inf} exp(itA) exp(-itB).  Internally both are
evaluated at s = |t| >= 0 on the schedule's checkpoints.
"""
from __future__ import annotations

import numpy as np

from .limits import LimitResult, Schedule, hilbert_metric, plateau_limit, same_sign_exponentials
from .lindblad import absorption_operator
from .operator_core import (
    SubspaceBasis, as_operator, dagger, min_singular, op_exp, op_norm,
)


def _metric_name(schedule: Schedule) -> str:
    return "operator" if schedule.probes is None else "probe"


def wave_operator(a, b, time_sign: str, pre_projection=None, schedule: Schedule | None = None,
                  label: str = "") -> LimitResult:
    """Plateau estimate of W_{time_sign}(A, B), optionally composed with a
    projection on the right."""
    if schedule is None:
        raise ValueError("a schedule is required")
    a = as_operator(a, "A")
    b = as_operator(b, "B")
    if a.shape != b.shape:
        raise ValueError("A and B differ in dimension")
    pi = np.eye(a.shape[0], dtype=complex) if pre_projection is None else as_operator(pre_projection, "Pi")
    sa, sb = same_sign_exponentials(time_sign)

    def evaluate(s: float) -> np.ndarray:
        return op_exp(a, sa * s) @ op_exp(b, sb * s) @ pi

    return plateau_limit(evaluate, schedule, hilbert_metric(schedule.probes), label, _metric_name(schedule))


def four_wave_operators(h, h0, schedule: Schedule) -> dict[str, LimitResult]:
    return {
        "W+(H,H0)": wave_operator(h, h0, "plus", schedule=schedule, label="W+(H,H0)"),
        "W-(H0,H)": wave_operator(h0, h, "minus", schedule=schedule, label="W-(H0,H)"),
        "W-(H,H0)": wave_operator(h, h0, "minus", schedule=schedule, label="W-(H,H0)"),
        "W+(H0,H)": wave_operator(h0, h, "plus", schedule=schedule, label="W+(H0,H)"),
    }


def intertwining_residual(w, a, b) -> float:
    """||A W - W B|| / (1 + ||A|| ||W||)."""
    w, a, b = (np.asarray(x, dtype=complex) for x in (w, a, b))
    return op_norm(a @ w - w @ b) / (1.0 + op_norm(a) * op_norm(w))


def group_intertwining_residual(w, a, b, times, probes=None) -> float:
    """max over times s of the size of exp(-isA) W - W exp(-isB), in operator
    norm or on the probe frame."""
    metric = hilbert_metric(probes)
    w = np.asarray(w, dtype=complex)
    return max(metric(op_exp(a, s) @ w - w @ op_exp(b, s)) for s in times)


def energy_balance_residual(h, c, u, t: float, dt: float, adjoint: bool = False) -> float:
    """|trapezoid integral of ||C U(s) u||^2 over [0, t] - (||u||^2 - ||U(t) u||^2)|
    with U(s) = exp(-isH), or exp(isH*) when ``adjoint`` is set."""
    h = as_operator(h, "H")
    q = absorption_operator(c, h.shape[0])
    gen = dagger(h) if adjoint else h
    sign = -1.0 if adjoint else 1.0
    steps = max(1, int(np.ceil(t / dt - 1e-9)))
    step = op_exp(gen, sign * t / steps)
    v = np.asarray(u, dtype=complex)
    vals = np.empty(steps + 1)
    for k in range(steps + 1):
        vals[k] = float(np.real(np.vdot(v, q @ v)))
        if k < steps:
            v = step @ v
    integral = (t / steps) * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    loss = float(np.vdot(u, u).real - np.vdot(v, v).real)
    return abs(integral - loss)


def cook_integrand(h0, h, c, which: str):
    """Return (A, B, multiplier, sign) describing W = I + int_0^inf M(s) ds with
    M(s) = sign/2 * exp(-i m s A) C*C exp(i m s B)."""
    table = {
        "W+(H0,H)": ("h0", "h", 1, +1),
        "W-(H0,H)": ("h0", "h", -1, -1),
        "W+(H,H0)": ("h", "h0", 1, -1),
        "W-(H,H0)": ("h", "h0", -1, +1),
    }
    which = {"plus": "W+(H,H0)", "minus": "W-(H0,H)"}.get(which, which)
    if which not in table:
        raise ValueError(f"which must be one of {sorted(table)}")
    first, second, mult, sign = table[which]
    ops = {"h0": h0, "h": h}
    return ops[first], ops[second], mult, sign


def integral_representation(h0, h, c, which: str, T: float, dt: float) -> tuple[np.ndarray, bool]:
    """I + int_0^T M(s) ds by the composite trapezoid rule, with the integrand
    obtained by differentiating exp(-i m s A) exp(i m s B).  Also returns
    whether the integrand has decayed below 1e-3 of its peak at s = T."""
    h0 = as_operator(h0, "H0")
    h = as_operator(h, "H")
    a, b, m, sign = cook_integrand(h0, h, c, which)
    q = absorption_operator(c, h0.shape[0])
    steps = max(1, int(np.ceil(T / dt - 1e-9)))
    step = T / steps
    ea, eb = op_exp(a, m * step), op_exp(b, -m * step)
    left = np.eye(h0.shape[0], dtype=complex)
    right = np.eye(h0.shape[0], dtype=complex)
    acc = 0.5 * q.copy()
    peak = op_norm(q)
    last = peak
    for k in range(1, steps + 1):
        left = ea @ left
        right = right @ eb
        term = left @ q @ right
        if k == steps:
            acc += 0.5 * term
            last = op_norm(term)
        else:
            acc += term
    total = np.eye(h0.shape[0], dtype=complex) + 0.5 * sign * step * acc
    decayed = last <= 1e-3 * peak if peak > 0 else True
    return total, bool(decayed)


def integral_representation_residual(h0, h, c, w, which: str, T: float, dt: float,
                                     probes=None) -> dict:
    """max over probe pairs |<v, (W - R) u>| with R the integral representation."""
    rep, decayed = integral_representation(h0, h, c, which, T, dt)
    diff = np.asarray(w, dtype=complex) - rep
    if probes is None:
        value = float(np.abs(diff).max())
    else:
        value = float(np.abs(dagger(probes) @ diff @ probes).max())
    return {"residual": value, "quadrature_decayed": decayed}


def scattering_operator(h, h0, schedule: Schedule, w_minus: LimitResult | None = None,
                        w_plus: LimitResult | None = None) -> LimitResult:
    """S(H, H0) = s-lim_{t -> inf} exp(itH0) exp(-2itH) exp(itH0), with the
    composed route W-(H0,H) W+(H,H0) recorded in ``extra``."""
    h = as_operator(h, "H")
    h0 = as_operator(h0, "H0")

    def evaluate(s: float) -> np.ndarray:
        u0 = op_exp(h0, -s)
        return u0 @ op_exp(h, 2 * s) @ u0

    metric = hilbert_metric(schedule.probes)
    res = plateau_limit(evaluate, schedule, metric, "S(H,H0)", _metric_name(schedule))
    if w_minus is None:
        w_minus = wave_operator(h0, h, "minus", schedule=schedule, label="W-(H0,H)")
    if w_plus is None:
        w_plus = wave_operator(h, h0, "plus", schedule=schedule, label="W+(H,H0)")
    composed = w_minus.value @ w_plus.value
    res.extra["composition_residual"] = metric(res.value - composed)
    res.extra["min_singular"] = min_singular(res.value)
    return res


def closed_range_diagnostic(w, h, t_grid, rank_rtol: float = 1e-8) -> dict:
    """Compare min_singular(W) with the sup over t of the norm of exp(-itH)
    restricted to Ran(W).  For a closed range the product of the two is 1
    in the limit; the verdict uses a 0.9-1.1 band."""
    w = as_operator(w, "W")
    h = as_operator(h, "H")
    m = min_singular(w)
    rng = SubspaceBasis.span(w, rank_rtol).vectors
    bound = 0.0
    for t in t_grid:
        bound = max(bound, op_norm(op_exp(h, float(t)) @ rng))
    product = m * bound
    return {
        "min_singular": m,
        "restricted_bound": bound,
        "product": product,
        "consistent": bool(0.9 <= product <= 1.1),
    }


def adjoint_wave_operator(h, h0, which: str, schedule: Schedule) -> dict:
    """W_which(H*, H0) and W_which(H0, H*), with the identities
    W(H0, H*) = W(H, H0)* and W(H*, H0) = W(H0, H)* checked."""
    h = as_operator(h, "H")
    h0 = as_operator(h0, "H0")
    hs = dagger(h)
    tag = "+" if which == "plus" else "-"
    w_hs_h0 = wave_operator(hs, h0, which, schedule=schedule, label=f"W{tag}(H*,H0)")
    w_h0_hs = wave_operator(h0, hs, which, schedule=schedule, label=f"W{tag}(H0,H*)")
    w_h_h0 = wave_operator(h, h0, which, schedule=schedule)
    w_h0_h = wave_operator(h0, h, which, schedule=schedule)
    metric = hilbert_metric(schedule.probes)
    return {
        "W(H*,H0)": w_hs_h0,
        "W(H0,H*)": w_h0_hs,
        "residual_h0_hstar": metric(w_h0_hs.value - dagger(w_h_h0.value)),
        "residual_hstar_h0": metric(w_hs_h0.value - dagger(w_h0_h.value)),
    }
