"""Spectral kernel descriptors and the node embeddings built on them.

The descriptor of node ``i`` at scale ``t`` is

    psi(i, t) = sum_l c_t * exp(-(log t - log lam_l)^2 / (2 sigma^2)) * u_l(i)^2

over the retained spectral pairs ``(lam_l, u_l)``. GSE feeds it the SVD of
the Stein solution ``X`` with ``A = W^BE``, ``B = L^BE``, ``C = I``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .centrality import CentralityGraph, PathMetric, build_centrality_graph
from .errors import AllValuesBelowFloor, ZeroSignal
from .graph import Graph, as_symmetric
from .linalg import EigenSystem, SvdSystem, svd, sym_eig
from .sylvester import SylvesterProblem, solve_analytical

DEFAULT_SCALES = 800
DEFAULT_SIGMA_FACTOR = 7.0
MIN_LOG_SPACING = 1e-3


@dataclass(frozen=True)
class DescriptorConfig:
    """Descriptor parameters.

    ``m=None`` keeps every pair above the floor. ``sigma=None`` derives the
    bandwidth from the log-scale spacing times ``sigma_factor``. Explicit
    ``scales`` override the automatic placement.
    """

    m: Optional[int] = None
    num_scales: int = DEFAULT_SCALES
    sigma: Optional[float] = None
    sigma_factor: float = DEFAULT_SIGMA_FACTOR
    c_ts: Optional[Sequence[float]] = None
    eps_rel: float = 1e-10
    spacing: Literal["linear", "log"] = "linear"
    scales: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")
        if self.scales is not None:
            s = np.asarray(self.scales, dtype=float)
            if s.ndim != 1 or s.size < 1 or np.any(s <= 0) or np.any(np.diff(s) <= 0):
                raise ValueError("scales must be positive and strictly increasing")
            object.__setattr__(self, "num_scales", s.size)
        if self.num_scales < 1:
            raise ValueError("num_scales must be >= 1")
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.sigma_factor > 0:
            raise ValueError("sigma_factor must be positive")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be 'linear' or 'log'")
        if self.c_ts is not None and np.size(self.c_ts) not in (1, self.num_scales):
            raise ValueError("c_ts must be a scalar or have one entry per scale")

    def as_dict(self) -> dict:
        out = {
            "m": self.m,
            "num_scales": self.num_scales,
            "sigma": self.sigma,
            "sigma_factor": self.sigma_factor,
            "eps_rel": self.eps_rel,
            "spacing": self.spacing,
        }
        if self.c_ts is not None:
            out["c_ts"] = np.atleast_1d(self.c_ts).tolist()
        if self.scales is not None:
            out["scales"] = list(map(float, self.scales))
        return out


@dataclass(frozen=True)
class Embedding:
    values: np.ndarray  # (N, K), row i is node i
    labels: tuple[str, ...]
    scales: Optional[np.ndarray] = None
    sigma: Optional[float] = None

    @property
    def shape(self):
        return self.values.shape


def _spectrum(system) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(system, SvdSystem):
        return np.asarray(system.singular_values), np.asarray(system.left_vectors)
    if isinstance(system, EigenSystem):
        return np.abs(system.values), np.asarray(system.vectors)
    values, vectors = system
    return np.abs(np.asarray(values, dtype=float)), np.asarray(vectors, dtype=float)


def select_pairs(system, m: Optional[int] = None, eps_rel: float = 1e-10, which: str = "largest"):
    """Pick the spectral pairs that enter the descriptor.

    Magnitudes at or below ``eps_rel * max`` are dropped (their log is
    unusable), then the ``m`` largest (or smallest) survivors are kept.
    Returns ``(magnitudes, vectors)`` with vectors as columns.
    """
    lam, vecs = _spectrum(system)
    top = lam.max(initial=0.0)
    if not top > 0:
        raise AllValuesBelowFloor("all spectral values are zero")
    keep = np.flatnonzero(lam > eps_rel * top)
    if which == "largest":
        keep = keep[np.argsort(-lam[keep], kind="stable")]
    elif which == "smallest":
        keep = keep[np.argsort(lam[keep], kind="stable")]
    else:
        raise ValueError(f"which must be 'largest' or 'smallest', got {which!r}")
    if m is not None:
        keep = keep[:m]
    if keep.size == 0:
        raise AllValuesBelowFloor("no spectral value above the floor")
    return lam[keep], vecs[:, keep]


def descriptor_scales(lam: np.ndarray, cfg: DescriptorConfig) -> tuple[np.ndarray, float]:
    """Scales ``t_s`` and bandwidth ``sigma`` for retained magnitudes ``lam``."""
    lo, hi = float(lam.min()), float(lam.max())
    if cfg.scales is not None:
        scales = np.asarray(cfg.scales, dtype=float)
    elif cfg.spacing == "log":
        scales = np.geomspace(lo, hi, cfg.num_scales)
    else:
        scales = np.linspace(lo, hi, cfg.num_scales)
    if cfg.sigma is not None:
        sigma = float(cfg.sigma)
    else:
        step = (np.log(hi) - np.log(lo)) / cfg.num_scales
        sigma = cfg.sigma_factor * max(step, MIN_LOG_SPACING)
    return scales, sigma


def spectral_kernel_descriptor(system, cfg: DescriptorConfig = DescriptorConfig(), which: str = "largest"):
    """Evaluate the descriptor for every node.

    Parameters
    ----------
    system : SvdSystem, EigenSystem or (values, vectors)
        Eigen-systems contribute ``|lambda|``, i.e. the singular values of
        a symmetric matrix.
    cfg : DescriptorConfig
    which : {"largest", "smallest"}
        Which end of the spectrum supplies the ``m`` pairs.

    Returns
    -------
    psi : ndarray, shape (N, num_scales)
    scales : ndarray
    sigma : float
    """
    lam, vecs = select_pairs(system, cfg.m, cfg.eps_rel, which)
    scales, sigma = descriptor_scales(lam, cfg)
    logdiff = np.log(scales)[None, :] - np.log(lam)[:, None]
    kernel = np.exp(-(logdiff**2) / (2.0 * sigma**2))
    psi = np.square(vecs) @ kernel
    if cfg.c_ts is not None:
        psi = psi * np.asarray(cfg.c_ts, dtype=float)
    return psi, scales, sigma


@dataclass(frozen=True)
class GSEResult:
    centrality: CentralityGraph
    problem: SylvesterProblem
    x: np.ndarray
    svd: SvdSystem
    embedding: Embedding


def gse(g: Graph, cfg: DescriptorConfig = DescriptorConfig(), mode: PathMetric = "hops") -> GSEResult:
    """Run the full pipeline and keep the intermediates."""
    cg = build_centrality_graph(g, mode)
    problem = SylvesterProblem(cg.w_be, cg.l_be)
    x = solve_analytical(problem)
    sv = svd(x)
    psi, scales, sigma = spectral_kernel_descriptor(sv, cfg)
    return GSEResult(cg, problem, x, sv, Embedding(psi, g.node_labels, scales, sigma))


def gse_embed(g: Graph, cfg: DescriptorConfig = DescriptorConfig(), mode: PathMetric = "hops") -> Embedding:
    return gse(g, cfg, mode).embedding


def pencil(cg: CentralityGraph, beta: float) -> np.ndarray:
    """``W^BE - beta * L^BE``."""
    return cg.w_be - beta * cg.l_be


def shifted_pencil(cg: CentralityGraph, beta: float) -> tuple[np.ndarray, float]:
    """Pencil shifted by ``mu = -lambda_min`` so its spectrum starts at zero."""
    lt = pencil(cg, beta)
    mu = -float(sym_eig(lt).values[0])
    return lt + mu * np.eye(len(lt)), mu


def gsse_embed(
    g: Graph,
    beta: float,
    m: Optional[int] = None,
    cfg: DescriptorConfig = DescriptorConfig(),
    mode: PathMetric = "hops",
    raw: bool = False,
    cg: Optional[CentralityGraph] = None,
) -> Embedding:
    """Embedding from the smallest eigenpairs of the shifted pencil.

    With ``raw=True`` the eigenvectors themselves (columns ordered by
    ascending eigenvalue) are returned instead of descriptors.
    """
    cg = cg if cg is not None else build_centrality_graph(g, mode)
    l_delta, _ = shifted_pencil(cg, beta)
    es = sym_eig(l_delta)
    if raw:
        k = es.values.size if m is None else min(m, es.values.size)
        return Embedding(es.vectors[:, :k].copy(), g.node_labels)
    psi, scales, sigma = spectral_kernel_descriptor(es, replace(cfg, m=m), which="smallest")
    return Embedding(psi, g.node_labels, scales, sigma)


def stacked_baseline_embed(
    g: Graph,
    cfg: DescriptorConfig = DescriptorConfig(),
    mode: PathMetric = "hops",
    cg: Optional[CentralityGraph] = None,
) -> Embedding:
    """Side-by-side descriptors of ``W^BE`` (top pairs) and ``L^BE`` (low pairs)."""
    cg = cg if cg is not None else build_centrality_graph(g, mode)
    psi_w, scales_w, sigma_w = spectral_kernel_descriptor(sym_eig(cg.w_be), cfg, which="largest")
    psi_l, scales_l, _ = spectral_kernel_descriptor(sym_eig(cg.l_be), cfg, which="smallest")
    return Embedding(
        np.hstack([psi_w, psi_l]), g.node_labels, np.concatenate([scales_w, scales_l]), sigma_w
    )


def edge_embed(node_emb: Union[Embedding, np.ndarray], g: Graph, symmetric: bool = False) -> np.ndarray:
    """One row per edge of ``g``: lower-index endpoint first, then the other.

    ``symmetric=True`` returns the sum of the two endpoint rows instead.
    """
    values = node_emb.values if isinstance(node_emb, Embedding) else np.asarray(node_emb)
    if values.shape[0] != g.n_nodes:
        raise ValueError(f"embedding has {values.shape[0]} rows for {g.n_nodes} nodes")
    pairs = np.array(g.edge_pairs())
    lo, hi = pairs.min(axis=1), pairs.max(axis=1)
    if symmetric:
        return values[lo] + values[hi]
    return np.hstack([values[lo], values[hi]])


def _check_signal(x) -> tuple[np.ndarray, float]:
    x = np.asarray(x, dtype=float)
    nrm2 = float(x @ x)
    if nrm2 == 0.0:
        raise ZeroSignal("signal must be nonzero")
    return x, nrm2


def vertex_spread(w, x) -> float:
    """``x^T W x / ||x||^2``."""
    x, nrm2 = _check_signal(x)
    return float(x @ np.asarray(w) @ x) / nrm2


def spectral_spread(lap, x) -> float:
    """``x^T L x / ||x||^2``."""
    x, nrm2 = _check_signal(x)
    return float(x @ np.asarray(lap) @ x) / nrm2


def spectral_spread_parseval(lap, x, eig: Optional[EigenSystem] = None) -> float:
    """Spectral spread as ``sum_l lambda_l |xhat(l)|^2 / ||x||^2`` via the graph Fourier transform."""
    x, nrm2 = _check_signal(x)
    eig = eig if eig is not None else sym_eig(lap)
    xhat = eig.vectors.T @ x
    return float(eig.values @ np.square(xhat)) / nrm2


def pencil_stationarity(cg: CentralityGraph, beta: float) -> float:
    """Lagrangian stationarity residual ``||(W - beta L) x - gamma x||`` at the
    smallest eigenvector of ``beta L - W``, with ``gamma`` its Rayleigh quotient."""
    lt = pencil(cg, beta)
    x = sym_eig(-lt).vectors[:, 0]
    gamma = float(x @ lt @ x) / float(x @ x)
    return float(np.linalg.norm(lt @ x - gamma * x))


def pencil_subspace_angle(cg: CentralityGraph, beta: float, k: int) -> float:
    """Largest principal angle between the ``k`` lowest eigenvectors of the
    pencil and the ``k`` lowest eigenvectors of ``L^BE``."""
    low_pencil = sym_eig(pencil(cg, beta)).vectors[:, :k]
    low_lap = sym_eig(as_symmetric(cg.l_be)).vectors[:, :k]
    return float(scipy.linalg.subspace_angles(low_pencil, low_lap).max())
