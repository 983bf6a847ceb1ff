"""Generalized Gell-Mann generators of SU(d).

Indices are 1-based, as in the Bloch expansion, and split into three blocks:

* ``OMEGA1`` (i = 1 .. d-1): diagonal generators, ``lambda_i = omega_{i-1}``;
* ``OMEGA2`` (i = d .. (d-1)(d+2)/2): symmetric ``|l><k| + |k><l|``;
* ``OMEGA3`` (i = d(d+1)/2 .. d^2-1): antisymmetric ``-i(|l><k| - |k><l|)``.

Inside the off-diagonal blocks the pairs ``(l, k)`` run lexicographically:
(0,1), (0,2), ..., (0,d-1), (1,2), ..., (d-2,d-1).
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionError, IndexRangeError


class Block(str, Enum):
    OMEGA1 = "Omega1"
    OMEGA2 = "Omega2"
    OMEGA3 = "Omega3"


@dataclass(frozen=True)
class IndexClass:
    block: Block
    pair: Optional[Tuple[int, int]] = None
    omega_index: Optional[int] = None


def _check_dim(d):
    if int(d) != d or d < 2:
        raise DimensionError(f"local dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _pairs(d):
    return [(l, k) for l in range(d) for k in range(l + 1, d)]


def omega(m, d):
    """Diagonal generator ``omega_m`` for ``0 <= m <= d-2``."""
    diag = np.zeros(d)
    diag[: m + 1] = 1.0
    diag[m + 1] = -(m + 1)
    return np.sqrt(2.0 / ((m + 1) * (m + 2))) * np.diag(diag).astype(complex)


def index_class(d, i):
    d = _check_dim(d)
    n = d * d - 1
    if int(i) != i or not 1 <= i <= n:
        raise IndexRangeError(f"generator index must lie in 1..{n}, got {i!r}")
    i = int(i)
    if i <= d - 1:
        return IndexClass(Block.OMEGA1, omega_index=i - 1)
    npairs = d * (d - 1) // 2
    pos = i - d
    if pos < npairs:
        return IndexClass(Block.OMEGA2, pair=_pairs(d)[pos])
    return IndexClass(Block.OMEGA3, pair=_pairs(d)[pos - npairs])


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    """Ordered generator set for dimension ``dim``.

    ``generators`` is a read-only array of shape ``(d^2-1, d, d)``; position
    ``i-1`` holds ``lambda_i``.
    """

    dim: int
    generators: np.ndarray = field(repr=False)
    index_map: Tuple[IndexClass, ...] = field(repr=False)

    def __len__(self):
        return len(self.index_map)

    def __getitem__(self, i):
        """Generator ``lambda_i`` (1-based)."""
        index_class(self.dim, i)
        return self.generators[i - 1]

    def block_of(self, i):
        return self.index_map[i - 1].block

    @property
    def omega1(self):
        return np.arange(1, self.dim)

    @property
    def omega2(self):
        d = self.dim
        return np.arange(d, (d - 1) * (d + 2) // 2 + 1)

    @property
    def omega3(self):
        d = self.dim
        return np.arange(d * (d + 1) // 2, d * d)

    @property
    def signs(self):
        """+1 on Omega1 and Omega2, -1 on Omega3, as a length d^2-1 vector."""
        s = np.ones(len(self))
        s[self.omega3 - 1] = -1.0
        return s


@lru_cache(maxsize=None)
def basis(d):
    d = _check_dim(d)
    gens = []
    index_map = []
    for m in range(d - 1):
        gens.append(omega(m, d))
        index_map.append(IndexClass(Block.OMEGA1, omega_index=m))
    for l, k in _pairs(d):
        u = np.zeros((d, d), dtype=complex)
        u[l, k] = u[k, l] = 1.0
        gens.append(u)
        index_map.append(IndexClass(Block.OMEGA2, pair=(l, k)))
    for l, k in _pairs(d):
        v = np.zeros((d, d), dtype=complex)
        v[l, k] = -1j
        v[k, l] = 1j
        gens.append(v)
        index_map.append(IndexClass(Block.OMEGA3, pair=(l, k)))
    arr = np.array(gens)
    arr.setflags(write=False)
    return GellMannBasis(d, arr, tuple(index_map))


def generator_spectrum(d, i):
    """Closed-form eigenvalues of ``lambda_i``, sorted descending."""
    cls = index_class(d, i)
    if cls.block is Block.OMEGA1:
        a = np.sqrt(2.0 / (i * (i + 1)))
        vals = [a] * i + [0.0] * (d - 1 - i) + [-i * a]
    else:
        vals = [1.0] + [0.0] * (d - 2) + [-1.0]
    return np.array(vals)
