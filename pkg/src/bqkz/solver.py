"""Graded recursion for the asymptotically free solution ``Psi``.

``Psi(t, gamma) = sum K[(alpha, beta)] t^{-alpha} gamma^{beta}`` over
``alpha, beta`` in ``Q_+^vee`` solves the gauged equations

    A_i(t, gamma) Psi(q^{-varpi_i} t, gamma) = Psi(t, gamma)
    B_j(t, gamma) Psi(t, q^{varpi_j} gamma) = Psi(t, gamma)

with ``K[(0, 0)] = T_{w0}``.  Comparing the ``t^{-alpha} gamma^{beta}``
coefficient of one equation gives

    (I - c A^{(0,0)}) K[a, b] = sum_{(a', b') < (a, b)} A[a - a', b - b'] q^{...} K[a', b']

with ``c = q^{<varpi_i, alpha>}``.  The constant term is idempotent, so the
left side is inverted in closed form.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field as dc_field

from gmpy2 import mpq

from .cocycle import Cocycle
from .linalg import mat_mul
from .scalars import BqkzError, format_rational
from .series import Grading, MatrixSeries, SeriesExpander

Vec = tuple
Key = tuple


class ResonantParameters(BqkzError):
    """A divisor ``1 - q^n`` of the recursion vanished."""


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _vec_add(a: list, b: list, c=1) -> list:
    return [x + c * y for x, y in zip(a, b)]


def _mat_vec(m, v) -> list:
    return [sum((x * y for x, y in zip(row, v) if x != 0 and y != 0), mpq(0)) for row in m]


@dataclass
class PsiSolution:
    """Coefficients ``K[(alpha, beta)]`` as vectors in the ``T_v`` basis."""

    degree: int
    K: dict
    provenance: dict = dc_field(default_factory=dict)
    basis: list = dc_field(default_factory=list)

    def get(self, alpha: Vec, beta: Vec):
        return self.K.get((alpha, beta))

    def keys_by_grade(self, grading: Grading) -> list:
        return sorted(self.K, key=lambda k: (grading.grade(k), k))

    def truncate(self, degree: int, grading: Grading) -> PsiSolution:
        keep = {k: v for k, v in self.K.items() if grading.grade(k) <= degree}
        prov = {k: v for k, v in self.provenance.items() if k in keep}
        return PsiSolution(degree, keep, prov, self.basis)

    def to_json(self, rs) -> dict:
        entries = []
        for (a, b) in sorted(self.K):
            entries.append({
                "alpha": [format_rational(x) for x in rs.coroot_coords(a)],
                "beta": [format_rational(x) for x in rs.coroot_coords(b)],
                "vector": [format_rational(x) for x in self.K[(a, b)]],
                "equation": self.provenance.get((a, b), "init"),
            })
        return {"degree": self.degree, "basis": [list(rs.word(v)) for v in self.basis], "K": entries}

    def dumps(self, rs) -> str:
        return json.dumps(self.to_json(rs), sort_keys=True)


class PsiSolver:
    """Solve for ``Psi`` to a given total grade."""

    def __init__(self, co: Cocycle, expander: SeriesExpander | None = None):
        self.co = co
        self.rs = co.rs
        self.ps = co.ps
        self.field = co.field
        self.dim = co.dim
        self.expander = expander or SeriesExpander(co)
        self.grading = self.expander.grading
        rs = self.rs
        self.w0 = rs.longest_element
        self.w0_index = self.ps.index[self.w0]
        self._cor = [rs.simple_coroots[r] for r in range(rs.rank)]

    # ------------------------------------------------------------------
    def keys(self, degree: int) -> list[Key]:
        """All ``(alpha, beta)`` in ``Q_+ x Q_+`` of grade <= degree, by grade."""
        rs = self.rs
        n = rs.rank
        out = []
        for g in range(degree + 1):
            for comp in itertools.product(range(g + 1), repeat=2 * n):
                if sum(comp) != g:
                    continue
                a = self._from_coroot(comp[:n])
                b = self._from_coroot(comp[n:])
                out.append((a, b))
        return out

    def _from_coroot(self, coeffs: Sequence[int]) -> Vec:
        rs = self.rs
        v = [0] * rs.rank
        for c, cor in zip(coeffs, self._cor):
            if c:
                v = [x + c * y for x, y in zip(v, cor)]
        return tuple(int(x) for x in v)

    def _multiplier(self, idx: int, vec: Vec):
        """``q^{<varpi_idx, vec>}``."""
        rs = self.rs
        return self.field.qpow(rs.inner(rs.fundamental_coweight(idx), vec))

    def equation(self, which: str, idx: int, degree: int) -> MatrixSeries:
        return self.expander.gauged_series(which, idx, degree)

    def _choose(self, key: Key, rule: str) -> tuple[str, int]:
        a, b = key
        side, vec = ("A", a) if any(a) else ("B", b)
        cc = self.grading.coroot_coords(vec)
        cands = [r for r, c in enumerate(cc) if c > 0]
        return side, (cands[0] if rule == "smallest" else cands[-1])

    def solve(self, degree: int, rule: str = "smallest") -> PsiSolution:
        if rule not in ("smallest", "largest"):
            raise ValueError("rule must be 'smallest' or 'largest'")
        rs = self.rs
        n = self.dim
        z = rs.zero()
        start = [mpq(0)] * n
        start[self.w0_index] = mpq(1)
        K: dict = {(z, z): start}
        prov: dict = {(z, z): "init"}
        eqs = {}
        for side in ("A", "B"):
            for i in range(rs.rank):
                s = self.equation(side, i, degree)
                eqs[(side, i)] = (s, s.constant_term())
        for key in self.keys(degree)[1:]:
            side, i = self._choose(key, rule)
            series, P = eqs[(side, i)]
            rhs = self._rhs(key, side, i, series, K)
            a, b = key
            c = self._multiplier(i, a if side == "A" else b)
            if c == 1:
                raise ResonantParameters(f"1 - q^0 at {key}")
            # (I - cP)^{-1} = I + c/(1-c) P for idempotent P
            corr = _mat_vec(P, rhs)
            K[key] = _vec_add(rhs, corr, c / (1 - c))
            prov[key] = f"{side}{i + 1}"
        K = {k: v for k, v in K.items() if any(x != 0 for x in v)}
        prov = {k: v for k, v in prov.items() if k in K}
        return PsiSolution(degree, K, prov, list(self.ps.basis))

    def solvePsi(self, degree: int, rule: str = "smallest") -> PsiSolution:
        return self.solve(degree, rule)

    def _rhs(self, key: Key, side: str, i: int, series: MatrixSeries, K: dict) -> list:
        a, b = key
        acc = [mpq(0)] * self.dim
        for (da, db), m in series.coeffs.items():
            if not any(da) and not any(db):
                continue
            src = (_sub(a, da), _sub(b, db))
            v = K.get(src)
            if v is None:
                continue
            shift = src[0] if side == "A" else src[1]
            acc = _vec_add(acc, _mat_vec(m, v), self._multiplier(i, shift))
        return acc

    # ------------------------------------------------------------------
    # verification
    def residual(self, sol: PsiSolution, side: str, i: int) -> dict:
        """Nonzero coefficients of ``A_i Psi(shifted) - Psi`` (or the B analogue)."""
        series = self.equation(side, i, sol.degree)
        g = self.grading
        out: dict = {}
        for (da, db), m in series.coeffs.items():
            for (a, b), v in sol.K.items():
                key = (tuple(x + y for x, y in zip(da, a)), tuple(x + y for x, y in zip(db, b)))
                if g.grade(key) > sol.degree:
                    continue
                c = self._multiplier(i, a if side == "A" else b)
                cur = out.get(key, [mpq(0)] * self.dim)
                out[key] = _vec_add(cur, _mat_vec(m, v), c)
        for key, v in sol.K.items():
            cur = out.get(key, [mpq(0)] * self.dim)
            out[key] = _vec_add(cur, v, -1)
        return {k: v for k, v in out.items() if any(x != 0 for x in v)}

    def verify_holonomy(self, sol: PsiSolution) -> dict:
        report = {}
        worst = None
        for side in ("A", "B"):
            for i in range(self.rs.rank):
                res = self.residual(sol, side, i)
                grades = sorted(self.grading.grade(k) for k in res)
                report[f"{side}{i + 1}"] = {"nonzero": len(res),
                                            "max_grade": format_rational(grades[-1]) if grades else None}
                if grades and (worst is None or grades[-1] > worst):
                    worst = grades[-1]
        return {"ok": worst is None, "equations": report,
                "max_nonzero_grade": None if worst is None else format_rational(worst)}

    def verifyHolonomy(self, sol):
        return self.verify_holonomy(sol)

    def iota(self, v: Sequence) -> list:
        perm = self.co.iota_perm
        return [v[perm[j]] for j in range(len(v))]

    def verify_duality(self, sol: PsiSolution) -> dict:
        bad = []
        for (a, b), v in sol.K.items():
            other = sol.K.get((b, a), [mpq(0)] * self.dim)
            if self.iota(v) != other:
                bad.append((a, b))
        return {"ok": not bad, "checked": len(sol.K), "failures": [str(k) for k in bad]}

    def verifyDuality(self, sol):
        return self.verify_duality(sol)

    def gamma_structure(self, sol: PsiSolution) -> dict:
        """``Gamma_alpha = sum_beta K[alpha, beta] gamma^beta`` grouped by alpha."""
        out: dict = {}
        for (a, b), v in sol.K.items():
            out.setdefault(a, {})[b] = v
        return out

    def gammaStructure(self, sol):
        return self.gamma_structure(sol)

    def gamma0_scalar(self, sol: PsiSolution) -> dict:
        """``{beta: c}`` with ``K[0, beta] = c T_{w0}``; raises if not proportional."""
        z = self.rs.zero()
        out = {}
        for b, v in self.gamma_structure(sol).get(z, {}).items():
            if any(x != 0 for j, x in enumerate(v) if j != self.w0_index):
                raise AssertionError(f"Gamma_0 coefficient at {b} is not a multiple of T_w0")
            out[b] = v[self.w0_index]
        return out

    def verify_gamma0(self, sol: PsiSolution) -> dict:
        try:
            coeffs = self.gamma0_scalar(sol)
        except AssertionError as exc:
            return {"ok": False, "error": str(exc)}
        return {"ok": True, "terms": len(coeffs)}

    def apply_matrix(self, m, sol: PsiSolution) -> dict:
        return {k: _mat_vec(m, v) for k, v in sol.K.items()}

    def tail_norms(self, sol: PsiSolution) -> list[float]:
        """Max absolute coefficient per grade (a decay diagnostic)."""
        norms: dict = {}
        for k, v in sol.K.items():
            g = self.grading.grade(k)
            norms[g] = max(norms.get(g, 0.0), max(abs(float(x)) for x in v))
        return [norms.get(g, 0.0) for g in range(sol.degree + 1)]


def evaluate_psi(sol: PsiSolution, t: Sequence, gamma: Sequence, field=None) -> list:
    """Truncated sum of ``Psi`` at a point (exact or numeric field)."""
    one = 1 if field is None else field.coerce(1)
    n = len(next(iter(sol.K.values())))
    out = [one * 0] * n
    for (a, b), v in sol.K.items():
        val = one
        for c, x in zip(a, t):
            if c:
                val = val * x ** (-c)
        for c, x in zip(b, gamma):
            if c:
                val = val * x**c
        out = [o + (val * (y if field is None else field.coerce(y))) for o, y in zip(out, v)]
    return out


__all__ = ["PsiSolution", "PsiSolver", "ResonantParameters", "evaluate_psi", "mat_mul"]
