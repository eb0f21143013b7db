"""The formal principal series ``eta: H -> End(H0)[gamma^{+-1}]``.

``eta(h)`` acts on ``H0 = span{T_v : v in W0}`` with coefficients that
are Laurent polynomials in the spectral variable gamma.  Column v of
``eta(h)`` is the Bernstein form of ``h T_v`` with ``Y`` replaced by
``gamma``.  The basis is ordered by (length, reduced word).
"""

from __future__ import annotations

from collections.abc import Sequence

from gmpy2 import mpq

from .hecke import BernsteinElem, HeckeAlgebra, HeckeElem
from .laurent import Laurent
from .linalg import identity, mat_mul
from .rootdata import FiniteWeylElem


class GammaMatrix:
    """Square matrix of Laurent polynomials, ``rows[u][v]``."""

    __slots__ = ("rows",)

    def __init__(self, rows: list[list[Laurent]]):
        self.rows = rows

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, idx):
        u, v = idx
        return self.rows[u][v]

    def __eq__(self, other) -> bool:
        return isinstance(other, GammaMatrix) and self.rows == other.rows

    def __mul__(self, other: GammaMatrix) -> GammaMatrix:
        n = self.size
        out = [[Laurent() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for k in range(n):
                a = self.rows[i][k]
                if not a:
                    continue
                for j in range(n):
                    b = other.rows[k][j]
                    if b:
                        out[i][j].iadd(a * b)
        return GammaMatrix(out)

    def evaluate(self, point: Sequence, field=None) -> list[list]:
        """Pointwise value; ``point[i]`` is the coordinate gamma^{varpi_i}."""
        zero = 0 if field is None else field.coerce(0)
        return [[f.evaluate(point, field) if f else zero for f in row] for row in self.rows]

    def is_constant(self) -> bool:
        return all(all(not any(k) for k in f.terms) for row in self.rows for f in row)

    def exponents(self) -> set:
        return {k for row in self.rows for f in row for k in f.terms}


class PrincipalSeries:
    """eta and the eigenbasis xi_w for a Hecke algebra."""

    def __init__(self, H: HeckeAlgebra):
        self.H = H
        self.rs = H.rs
        self.basis: list[FiniteWeylElem] = self.rs.weyl_group()
        self.index = {w: n for n, w in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._eta: dict = {}

    def column(self, b: BernsteinElem) -> list[Laurent]:
        out = [Laurent() for _ in range(self.dim)]
        for u, f in b.terms.items():
            out[self.index[u]] = f
        return out

    def eta(self, h) -> GammaMatrix:
        """eta(h) for a HeckeElem or BernsteinElem."""
        H = self.H
        b = H.to_bernstein(h) if isinstance(h, HeckeElem) else h
        cols = []
        for v in self.basis:
            prod = H.bern_mul(b, H.bern_fin({v: mpq(1)}))
            cols.append(self.column(prod))
        rows = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return GammaMatrix(rows)

    def eta_generator(self, key) -> GammaMatrix:
        """Cached eta of ``T_i`` (int key) or of an Omega element (AffElem key)."""
        hit = self._eta.get(key)
        if hit is None:
            H = self.H
            if isinstance(key, int):
                hit = self.eta(H.Ti(key))
            else:
                hit = self.eta(H.T(key))
            self._eta[key] = hit
        return hit

    def eta_at(self, h, point: Sequence, field=None) -> list[list]:
        return self.eta(h).evaluate(point, field)

    def etaAt(self, h, point, field=None):
        return self.eta_at(h, point, field)

    def xi(self, w: FiniteWeylElem, word: Sequence[int] | None = None) -> list[Laurent]:
        """``xi_w``: the eta image of the dual intertwiner applied to ``T_e``."""
        return self.column(self.H.intertwiner_dual(w, word))

    def xi_basis(self) -> list[list[Laurent]]:
        return [self.xi(w) for w in self.basis]

    def xiBasis(self):
        return self.xi_basis()

    def xi_matrix_at(self, point: Sequence, field=None) -> list[list]:
        """Matrix whose column w is ``xi_w(gamma)``."""
        cols = [[f.evaluate(point, field) for f in col] for col in self.xi_basis()]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def identity(self):
        return identity(self.dim)

    def mat_mul(self, a, b):
        return mat_mul(a, b)
