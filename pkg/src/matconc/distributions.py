"""Random-matrix distributions with a certified almost-sure operator-norm
bound and an analytically known mean, plus deterministic per-trial streams.

Kinds
-----
two_point_scalar(L)
    1x1 matrices taking the values 0 and 2L with equal probability.
    Mean L, certified norm bound 2L.
hermitian_bounded(d, L, center=None)
    center + (L - ||center||) * U diag(D) U* with D uniform on [-1,1]^d and
    U Haar unitary; center must be Hermitian with ||center|| <= L.
    Mean center, certified bound L.
diagonal_rademacher(d, L)
    Diagonal with independent +-L entries. Mean 0, certified bound L.
ginibre_clipped(d, L, entry_std=1.0)
    I.i.d. complex Gaussian entries (E|z|^2 = entry_std^2), rescaled by
    min(1, L/op_norm) so the bound is exact. Mean 0 (the rescaling factor is
    symmetric under negation), certified bound L.

The certified bound (``norm_bound()``) is what the concentration hypotheses
consume; for two_point_scalar it is 2L, for every other kind it equals L.
L = 0 is accepted as the degenerate always-zero distribution.

Config schema (JSON): {"kind": str, "d": int, "L": float, "params": {...}}
with per-kind params: hermitian_bounded takes {"center": matrix-object} or a
sibling "mean_file" path to a matrix JSON file; ginibre_clipped takes
{"entry_std": float}; the other kinds take no params.
"""

import itertools
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EnumerationSizeError, UnsupportedDistributionError
from .linalg import as_matrix, hermitian_defect, matrix_from_json, matrix_to_json, op_norm

KINDS = (
    "two_point_scalar",
    "hermitian_bounded",
    "diagonal_rademacher",
    "ginibre_clipped",
)

ENUMERATION_CAP = 2**20
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomStream:
    """Counter-based random stream keyed by (master_seed, trial_index).

    The underlying generator is Philox with key (master_seed, trial_index);
    the Philox counter is the draw counter, so the stream for a given key is
    fully determined regardless of evaluation order or worker count. The
    generator is created lazily and held, so repeated draws through one
    stream advance it; a fresh RandomStream with the same key replays the
    sequence from the start.
    """

    master_seed: int
    trial_index: int
    _generator: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.trial_index < 0:
            raise ConfigError("trial_index must be nonnegative")

    def generator(self):
        if self._generator is None:
            key = [self.master_seed & _MASK64, self.trial_index & _MASK64]
            gen = np.random.Generator(np.random.Philox(key=key))
            object.__setattr__(self, "_generator", gen)
        return self._generator


@dataclass(frozen=True)
class MatrixDistribution:
    kind: str
    d: int
    L: float
    center: np.ndarray | None = None
    entry_std: float = 1.0
    _center_norm: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown distribution kind {self.kind!r}")
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ConfigError(f"dimension must be a positive integer, got {self.d!r}")
        if not (math.isfinite(self.L) and self.L >= 0.0):
            raise ConfigError(f"L must be a finite nonnegative real, got {self.L!r}")
        if self.kind == "two_point_scalar" and self.d != 1:
            raise ConfigError("two_point_scalar is a scalar (d=1) distribution")
        if self.kind == "ginibre_clipped" and not (
            math.isfinite(self.entry_std) and self.entry_std > 0
        ):
            raise ConfigError(f"entry_std must be positive, got {self.entry_std!r}")
        if self.kind == "hermitian_bounded":
            c = (
                np.zeros((self.d, self.d), dtype=np.complex128)
                if self.center is None
                else as_matrix(self.center).copy()
            )
            if c.shape[0] != self.d:
                raise ConfigError("center dimension does not match d")
            if hermitian_defect(c) > 1e-12:
                raise ConfigError("hermitian_bounded center must be Hermitian")
            cn = op_norm(c)
            if cn > self.L + 1e-12:
                raise ConfigError(
                    f"center norm {cn:.6g} exceeds the bound L={self.L:.6g}"
                )
            c.flags.writeable = False
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "_center_norm", cn)
        elif self.center is not None:
            raise ConfigError(f"kind {self.kind!r} takes no center matrix")

    def norm_bound(self):
        """Certified almost-sure operator-norm bound of one sample."""
        return 2.0 * self.L if self.kind == "two_point_scalar" else self.L

    def mean(self):
        """The exact analytic mean."""
        if self.kind == "two_point_scalar":
            return np.array([[self.L]], dtype=np.complex128)
        if self.kind == "hermitian_bounded":
            return np.array(self.center, dtype=np.complex128)
        return np.zeros((self.d, self.d), dtype=np.complex128)

    def is_finitely_supported(self):
        return self.kind == "two_point_scalar" or (
            self.kind == "diagonal_rademacher" and self.d == 1
        )

    def support(self):
        """List of (probability, matrix) pairs for finitely supported kinds."""
        if self.kind == "two_point_scalar":
            return [
                (0.5, np.array([[0.0]], dtype=np.complex128)),
                (0.5, np.array([[2.0 * self.L]], dtype=np.complex128)),
            ]
        if self.kind == "diagonal_rademacher" and self.d == 1:
            return [
                (0.5, np.array([[-self.L]], dtype=np.complex128)),
                (0.5, np.array([[self.L]], dtype=np.complex128)),
            ]
        raise UnsupportedDistributionError(
            f"{self.kind} (d={self.d}) has no tractable finite support"
        )


def two_point_scalar(L):
    return MatrixDistribution(kind="two_point_scalar", d=1, L=float(L))


def hermitian_bounded(d, L, center=None):
    return MatrixDistribution(kind="hermitian_bounded", d=int(d), L=float(L), center=center)


def diagonal_rademacher(d, L):
    return MatrixDistribution(kind="diagonal_rademacher", d=int(d), L=float(L))


def ginibre_clipped(d, L, entry_std=1.0):
    return MatrixDistribution(
        kind="ginibre_clipped", d=int(d), L=float(L), entry_std=float(entry_std)
    )


def _complex_normals(gen, shape):
    # One block draw; real/imag interleaved in memory, each N(0,1).
    return gen.standard_normal(shape + (2,)).view(np.complex128)[..., 0]


def _haar_unitary_stack(gen, count, d):
    # QR of a complex Ginibre stack with the R-diagonal phase fix, which
    # makes the factorization unique and the result Haar.
    z = _complex_normals(gen, (count, d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1).copy()
    mod = np.abs(diag)
    phase = np.where(mod > 0, diag / np.where(mod > 0, mod, 1.0), 1.0)
    return q * phase[:, None, :]


def sample_stack(dist, stream, count):
    """Draw `count` i.i.d. samples as a (count,d,d) complex stack.

    Draws are consumed from the stream in fixed per-call blocks, so the
    result is a deterministic function of (stream state, count). Repeated
    calls on one stream advance it.
    """
    if count < 1:
        raise ConfigError("count must be >= 1")
    gen = stream.generator() if isinstance(stream, RandomStream) else stream
    d, L = dist.d, dist.L

    if dist.kind == "two_point_scalar":
        bits = gen.integers(0, 2, size=count)
        return (2.0 * L * bits).astype(np.complex128).reshape(count, 1, 1)

    if dist.kind == "diagonal_rademacher":
        bits = gen.integers(0, 2, size=(count, d))
        out = np.zeros((count, d, d), dtype=np.complex128)
        idx = np.arange(d)
        out[:, idx, idx] = L * (2.0 * bits - 1.0)
        return out

    if dist.kind == "hermitian_bounded":
        u = _haar_unitary_stack(gen, count, d)
        dvals = gen.uniform(-1.0, 1.0, size=(count, d))
        core = np.einsum("nij,nj,nkj->nik", u, dvals.astype(np.complex128), u.conj())
        core = 0.5 * (core + np.conj(np.swapaxes(core, -1, -2)))
        return dist.center + (L - dist._center_norm) * core

    # ginibre_clipped
    z = _complex_normals(gen, (count, d, d)) * (dist.entry_std / math.sqrt(2.0))
    sigma1 = np.linalg.svd(z, compute_uv=False)[..., 0]
    factor = np.where(sigma1 > 0, np.minimum(1.0, L / np.where(sigma1 > 0, sigma1, 1.0)), 1.0)
    return z * factor[:, None, None]


def sample(dist, stream):
    """One draw; equivalent to sample_stack(dist, stream, 1)[0]."""
    return sample_stack(dist, stream, 1)[0]


def enumerate_outcomes(dist, n):
    """All length-n outcome sequences of a finitely supported distribution.

    Returns a list of (probability, (n,d,d) stack) pairs whose probabilities
    sum to 1 exactly (they are dyadic).
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    if not dist.is_finitely_supported():
        raise UnsupportedDistributionError(
            f"cannot enumerate a continuous distribution ({dist.kind}, d={dist.d})"
        )
    support = dist.support()
    total = len(support) ** n
    if total > ENUMERATION_CAP:
        raise EnumerationSizeError(
            f"{total} outcome sequences exceed the cap {ENUMERATION_CAP}"
        )
    out = []
    for combo in itertools.product(support, repeat=n):
        prob = math.prod(p for p, _ in combo)
        stack = np.stack([m for _, m in combo])
        out.append((prob, stack))
    return out


def distribution_to_config(dist):
    """JSON-serializable config dict for `dist`."""
    params = {}
    if dist.kind == "hermitian_bounded":
        params["center"] = matrix_to_json(dist.center)
    elif dist.kind == "ginibre_clipped":
        params["entry_std"] = float(dist.entry_std)
    return {"kind": dist.kind, "d": int(dist.d), "L": float(dist.L), "params": params}


def distribution_from_config(cfg, base_dir="."):
    """Build a distribution from a config dict (see module docstring).

    A "mean_file" entry (path to a matrix JSON file, relative to base_dir)
    supplies the hermitian_bounded center when params lacks one.
    """
    try:
        kind = cfg["kind"]
        d = int(cfg["d"])
        L = float(cfg["L"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed distribution config: {exc}") from exc
    params = cfg.get("params") or {}
    if kind == "hermitian_bounded":
        center = None
        if "center" in params:
            center = matrix_from_json(params["center"])
        elif cfg.get("mean_file"):
            path = os.path.join(base_dir, cfg["mean_file"])
            with open(path, encoding="utf-8") as fh:
                center = matrix_from_json(json.load(fh))
        return hermitian_bounded(d, L, center)
    if kind == "ginibre_clipped":
        return ginibre_clipped(d, L, entry_std=float(params.get("entry_std", 1.0)))
    if kind == "two_point_scalar":
        if d != 1:
            raise ConfigError("two_point_scalar is a scalar (d=1) distribution")
        return two_point_scalar(L)
    if kind == "diagonal_rademacher":
        return diagonal_rademacher(d, L)
    raise ConfigError(f"unknown distribution kind {kind!r}")
