"""Capture theory on a finite lattice: spectral classification of the
dissipative Hamiltonian, the compression projection, the modified wave
operator and escape probabilities.

A finite matrix has no continuous spectrum, so two proxies are used when
building the compression projection ``pi``:

* trapped states: real-eigenvalue eigenvectors of H that are localized
  (participation ratio below ``pr_fraction * sites``) or lie outside the
  free band.  Delocalized in-band eigenvectors play the scattering role.
* decaying states: when a time ``window`` is given, eigenvalues with
  exp(Im(lambda) * window) <= floor, i.e. states that are gone by the end
  of the window.  Without a window every Im(lambda) < -tol counts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert_scattering import wave_operator
from .lattice import LatticeModel, bracket, participation_ratio, wave_packet
from .limits import LimitResult, Schedule, plateau_limit, superop_metric
from .lindblad import Propagator, build_lindbladian, dissipative_hamiltonian, _coupling_list
from .lindblad_scattering import as_propagator
from .operator_core import (
    ClusteringError, SubspaceBasis, as_operator, dagger, invariant_subspace, min_eig_hermitian,
    min_singular, op_exp, op_norm, principal_angles, stack, subspace_gap, unstack,
)
from .smoothness import estimate_c_V

DEFAULT_FLOOR = 1e-8


@dataclass
class SpectralClassification:
    bound: SubspaceBasis
    decaying: SubspaceBasis
    decaying_adjoint: SubspaceBasis
    pi: np.ndarray
    trapped: SubspaceBasis
    pp_kernel: SubspaceBasis
    bound_adjoint: SubspaceBasis
    eigenvalues: np.ndarray
    decay_threshold: float
    details: dict = field(default_factory=dict)

    def identity_angles(self) -> dict:
        """Largest principal angles for H_b(H) = H_pp(H_V) & Ker C = H_b(H*)."""
        def cmp(a, b):
            angles = principal_angles(a, b)
            return {"ranks": [a.rank, b.rank], "max_angle": max(angles) if angles else 0.0,
                    "gap": subspace_gap(a, b)}
        return {"pp_kernel": cmp(self.bound, self.pp_kernel),
                "adjoint": cmp(self.bound, self.bound_adjoint)}


def _eigen_clusters(w: np.ndarray, gap: float) -> list[np.ndarray]:
    groups, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > gap:
            groups.append(np.arange(start, k))
            start = k
    return groups


def pp_kernel_intersection(h_v, c, rtol: float = 1e-8) -> SubspaceBasis:
    """Span of eigenvectors of H_V annihilated by every coupling, computed
    eigenspace by eigenspace with an SVD kernel."""
    h_v = as_operator(h_v, "H_V")
    cs = _coupling_list(c)
    w, u = np.linalg.eigh(h_v)
    scale = max(1.0, float(np.abs(w).max()))
    cscale = max([1.0] + [op_norm(cj) for cj in cs])
    cols = []
    for idx in _eigen_clusters(w, 1e-8 * scale):
        block = u[:, idx]
        if not cs:
            cols.append(block)
            continue
        m = np.vstack([cj @ block for cj in cs])
        _, s, vh = np.linalg.svd(m)
        s = np.concatenate([s, np.zeros(len(idx) - len(s))]) if len(s) < len(idx) else s
        null = vh[s <= rtol * cscale].conj().T
        if null.size:
            cols.append(block @ null)
    if not cols:
        return SubspaceBasis.empty(h_v.shape[0])
    return SubspaceBasis.span(np.hstack(cols), rtol)


def _trapped(h: np.ndarray, bound: SubspaceBasis, sites: int | None, band, pr_fraction: float) -> SubspaceBasis:
    if bound.rank == 0:
        return bound
    q = bound.vectors
    w, v = np.linalg.eigh(0.5 * (dagger(q) @ h @ q + dagger(dagger(q) @ h @ q)))
    vecs = q @ v
    dim = h.shape[0]
    sites = dim if sites is None else sites
    internal = dim // sites
    keep = []
    for j in range(vecs.shape[1]):
        p = np.sum(np.abs(vecs[:, j].reshape(sites, internal)) ** 2, axis=1)
        pr = 1.0 / np.sum((p / p.sum()) ** 2)
        outside = band is not None and (w[j] < band[0] - 1e-9 or w[j] > band[1] + 1e-9)
        if pr < pr_fraction * sites or outside:
            keep.append(j)
    if not keep:
        return SubspaceBasis.empty(dim)
    return SubspaceBasis.span(vecs[:, keep])


def classify_spectrum(h, h_v, c, tol: float = 1e-9, *, h0=None, sites: int | None = None,
                      window: float | None = None, floor: float = DEFAULT_FLOOR,
                      pr_fraction: float = 0.15) -> SpectralClassification:
    """Split the space of H = H_V - (i/2) C*C into bound, decaying and
    remaining directions; see the module docstring for the proxies."""
    h = as_operator(h, "H")
    h_v = as_operator(h_v, "H_V")
    if op_norm(h - dissipative_hamiltonian(h_v, c)) > 1e-9 * max(1.0, op_norm(h)):
        raise ValueError("H is not H_V - (i/2) C*C")
    eig = np.linalg.eigvals(h)
    if window is None:
        thr = -tol
    else:
        thr = np.log(floor) / window
        between = [lam for lam in eig if thr < lam.imag < 0.5 * thr]
        if between:
            raise ClusteringError(
                f"{len(between)} eigenvalue(s) decay only partially inside the window "
                f"(Im between {thr:.3e} and {0.5 * thr:.3e}); no spectral gap at the decay threshold")
    bound = invariant_subspace(h, lambda lam: abs(lam.imag) <= tol, tol)
    bound_adj = invariant_subspace(dagger(h), lambda lam: abs(lam.imag) <= tol, tol)
    if window is None:
        decaying = invariant_subspace(h, lambda lam: lam.imag < -tol, tol)
        decaying_adj = invariant_subspace(dagger(h), lambda lam: lam.imag > tol, tol)
    else:
        decaying = invariant_subspace(h, lambda lam: lam.imag <= thr, tol)
        decaying_adj = invariant_subspace(dagger(h), lambda lam: lam.imag >= -thr, tol)
    band = None
    if h0 is not None:
        w0 = np.linalg.eigvalsh(as_operator(h0, "H0"))
        band = (float(w0[0]), float(w0[-1]))
    trapped = _trapped(h, bound, sites, band, pr_fraction)
    removed = trapped.direct_sum(decaying)
    pi = removed.complement().projector()
    return SpectralClassification(
        bound=bound, decaying=decaying, decaying_adjoint=decaying_adj, pi=pi, trapped=trapped,
        pp_kernel=pp_kernel_intersection(h_v, c), bound_adjoint=bound_adj, eigenvalues=eig,
        decay_threshold=float(thr),
        details={"window": window, "floor": floor, "band": band,
                 "ranks": {"bound": bound.rank, "trapped": trapped.rank, "decaying": decaying.rank,
                           "decaying_adjoint": decaying_adj.rank}},
    )


def decay_check(h, basis: SubspaceBasis, t: float) -> float:
    """Largest ||exp(-itH) u|| over the orthonormal basis columns."""
    if basis.rank == 0:
        return 0.0
    return float(np.linalg.norm(op_exp(h, t) @ basis.vectors, axis=0).max())


def compression_superop(pi) -> np.ndarray:
    """Matrix of X -> Pi X Pi for a Hermitian projection Pi."""
    pi = np.asarray(pi, dtype=complex)
    return np.kron(pi, pi.T)


def modified_omega_minus(free_generator, generator, pi, schedule: Schedule,
                         label: str = "Omega~-(L0,L)") -> LimitResult:
    """Plateau limit of exp(itL0) (Pi exp(-itL)(.) Pi)."""
    p0, p = as_propagator(free_generator), as_propagator(generator)
    comp = compression_superop(pi)

    def evaluate(t: float) -> np.ndarray:
        return p0(-t) @ comp @ p(t)

    name = "matrix_units" if schedule.probes is None else "probe"
    return plateau_limit(evaluate, schedule, superop_metric(schedule.probes, p.hilbert_dim), label, name)


def escape_probability(omega_tilde, rho, check_state: bool = True) -> float:
    """tr(Omega~ rho); the capture probability is one minus this value."""
    rho = np.asarray(rho, dtype=complex)
    if check_state:
        if abs(np.trace(rho) - 1.0) > 1e-10:
            raise ValueError("rho must have unit trace")
        if min_eig_hermitian(0.5 * (rho + dagger(rho))) < -1e-10:
            raise ValueError("rho must be positive semidefinite")
    value = omega_tilde.value if isinstance(omega_tilde, LimitResult) else np.asarray(omega_tilde)
    return float(np.trace(unstack(value @ stack(rho), rho.shape[0])).real)


def compressed_trace_series(generator, pi, rho, times) -> np.ndarray:
    """tr(Pi exp(-itL) rho Pi) along ``times``, a reported diagnostic."""
    p = as_propagator(generator)
    pi = np.asarray(pi, dtype=complex)
    d = pi.shape[0]
    return np.array([np.trace(pi @ unstack(p(t) @ stack(rho), d) @ pi).real for t in times])


def ac_projection_proxy(h_v, h0, sites: int | None = None, pr_fraction: float = 0.15) -> dict:
    """Eigenvectors of H_V outside the free band or localized, and the
    projection onto their orthogonal complement."""
    h_v = as_operator(h_v, "H_V")
    w0 = np.linalg.eigvalsh(as_operator(h0, "H0"))
    lo, hi = float(w0[0]), float(w0[-1])
    w, u = np.linalg.eigh(h_v)
    dim = h_v.shape[0]
    sites = dim if sites is None else sites
    internal = dim // sites
    out_of_band, localized = [], []
    for j in range(dim):
        p = np.sum(np.abs(u[:, j].reshape(sites, internal)) ** 2, axis=1)
        pr = 1.0 / np.sum(p**2)
        if w[j] < lo - 1e-9 or w[j] > hi + 1e-9:
            out_of_band.append(j)
        elif pr < pr_fraction * sites:
            localized.append(j)
    point = out_of_band + localized
    pp = u[:, point]
    pi_ac = np.eye(dim, dtype=complex) - pp @ dagger(pp)
    return {"out_of_band": [float(w[j]) for j in out_of_band],
            "localized": [float(w[j]) for j in localized],
            "pi_ac": pi_ac, "point_vectors": pp}


def assumption_V0_report(h0, v, model: LatticeModel | None = None, schedule: Schedule | None = None,
                         pr_fraction: float = 0.15) -> dict:
    """Proxy report for the purely-continuous-spectrum assumption on H_V."""
    h0 = as_operator(h0, "H0")
    v = np.zeros_like(h0) if v is None else as_operator(v, "V")
    h_v = h0 + v
    sites = None if model is None else model.sites
    proxy = ac_projection_proxy(h_v, h0, sites, pr_fraction)
    report = {"out_of_band_count": len(proxy["out_of_band"]), "out_of_band": proxy["out_of_band"],
              "localized_count": len(proxy["localized"]), "localized": proxy["localized"],
              "pi_ac": proxy["pi_ac"]}
    if schedule is not None:
        w_plus = wave_operator(h_v, h0, "plus", schedule=schedule, label="W+(H_V,H0)")
        w_minus = wave_operator(h_v, h0, "minus", schedule=schedule, label="W-(H_V,H0)")
        frame = np.eye(h0.shape[0]) if schedule.probes is None else schedule.probes
        w = w_plus.value
        iso = float(np.abs(dagger(w @ frame) @ (w @ frame) - dagger(frame) @ frame).max())
        into = float(np.linalg.norm((proxy["pi_ac"] @ w - w) @ frame, axis=0).max())
        report.update(w_plus=w_plus.summary(), w_minus=w_minus.summary(),
                      converged=bool(w_plus.converged and w_minus.converged),
                      isometry_residual=iso, range_residual=into)
    return report


def range_formula_check(h, h0, c, v, schedule: Schedule, tol: float = 1e-9, *, sites: int | None = None,
                        c_v: float | None = None, rank_rtol: float = 1e-8, floor: float = DEFAULT_FLOOR,
                        w_plus: LimitResult | None = None) -> dict:
    """Compare Ran W+(H, H0) with the orthocomplement of trapped(H) + H_d(H*).

    The decay window is the start of the W+ plateau (or its best window),
    so that the directions counted as decaying are those suppressed inside
    the plateau average.  The injectivity margin min_singular(W+) is
    compared with 1 - c_V/2 - 0.05.
    """
    h = as_operator(h, "H")
    h0 = as_operator(h0, "H0")
    v = np.zeros_like(h0) if v is None else as_operator(v, "V")
    h_v = h0 + v
    if w_plus is None:
        w_plus = wave_operator(h, h0, "plus", schedule=schedule, label="W+(H,H0)")
    start = (w_plus.plateau or w_plus.window)[0]
    window = start if start > 0 else None
    cls = classify_spectrum(h, h_v, c, tol, h0=h0, sites=sites, window=window, floor=floor)
    ran = SubspaceBasis.span(w_plus.value, rank_rtol)
    target = cls.trapped.direct_sum(cls.decaying_adjoint).complement()
    angles = principal_angles(ran, target)
    margin = min_singular(w_plus.value)
    if c_v is None:
        pi_ac = ac_projection_proxy(h_v, h0, sites)["pi_ac"]
        c_v = estimate_c_V(h_v, c, pi_ac, schedule.t_max, None).value
    claimed = 1.0 - c_v / 2.0 - 0.05
    return {
        "converged": bool(w_plus.converged),
        "range_rank": ran.rank,
        "target_rank": target.rank,
        "max_angle": max(angles) if angles else 0.0,
        "gap": subspace_gap(ran, target),
        "injectivity_margin": margin,
        "c_V": float(c_v),
        "claimed_margin": claimed,
        "injectivity_ok": bool(margin >= claimed) if c_v < 2 else None,
        "decay_window": window,
        "classification_ranks": cls.details["ranks"],
    }


def default_packets(model: LatticeModel, momenta=(-np.pi / 2, np.pi / 2), width: float = 1.5,
                    offset: float | None = None) -> list[np.ndarray]:
    """Packets started on one side and moving toward the centre, one per
    internal basis state."""
    offset = -model.sites * model.spacing / 4.0 if offset is None else offset
    out = []
    for k in momenta:
        x0 = offset if k > 0 else -offset
        for j in range(model.internal_dim):
            e = np.zeros(model.internal_dim)
            e[j] = 1.0
            out.append(wave_packet(model, x0, k, width, e))
    return out


def capture_amplitude_sweep(model: LatticeModel, amplitudes, schedule: Schedule, epsilon: float = 0.5,
                         packets=None, tol: float = 1e-9) -> dict:
    """End-to-end capture sweep for L = ad(-Delta + V + H_int) plus a
    dissipator with C = amplitude * model.couplings[0].

    For each amplitude: the weighted constant c1 (H_V smoothness with weight
    <X>^(-1-eps) on the continuous-part proxy), the hypothesis
    ||C <X>^(1+eps)|| < 2/c1, and escape probabilities of the packets.
    """
    if not model.couplings:
        raise ValueError("model needs a unit-amplitude coupling shape")
    h0 = model.h0
    h_v = model.h_v
    shape = model.couplings[0]
    x = model.coordinates
    weight_down = model.lift(np.diag(bracket(x, -1.0 - epsilon)).astype(complex))
    weight_up = model.lift(np.diag(bracket(x, 1.0 + epsilon)).astype(complex))
    pi_ac = ac_projection_proxy(h_v, h0, model.sites)["pi_ac"]
    c1 = estimate_c_V(h_v, weight_down, pi_ac, schedule.t_max, None)
    packets = default_packets(model) if packets is None else packets
    free = Propagator(hamiltonian=h0)
    rows = []
    for amp in amplitudes:
        c = amp * shape
        h = dissipative_hamiltonian(h_v, [c])
        gen = build_lindbladian(h_v, [c])
        cls = classify_spectrum(h, h_v, [c], tol, h0=h0, sites=model.sites, window=schedule.t_max)
        om = modified_omega_minus(free, gen, cls.pi, schedule)
        probs = [escape_probability(om, np.outer(p, p.conj())) for p in packets]
        hyp = op_norm(c @ weight_up)
        c_v = estimate_c_V(h_v, c, pi_ac, schedule.t_max, None).value if amp else 0.0
        rows.append({
            "amplitude": float(amp),
            "c_V": float(c_v),
            "c1": float(c1.value),
            "hypothesis_norm": float(hyp),
            "hypothesis_holds": bool(hyp < 2.0 / c1.value) if c1.value > 0 else True,
            "escape_mean": float(np.mean(probs)),
            "escape_min": float(np.min(probs)),
            "converged": bool(om.converged),
            "min_residual": om.summary()["min_residual"],
        })
    escapes = [r["escape_mean"] for r in rows]
    return {"c1": c1.as_dict(), "rows": rows,
            "monotone_decreasing": bool(all(b <= a + 1e-12 for a, b in zip(escapes, escapes[1:])))}
