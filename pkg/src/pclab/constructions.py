"""Hand-built refutations for the generated families, plus the small
fitting helpers used to measure how their sizes scale.

The resolution refutations follow one elimination scheme: repeatedly
derive, for the largest remaining vertex m, that no smaller vertex loses
to m, shrinking every vee-clause by one vertex until the empty clause
appears.  The lifted variant runs the same scheme once per gadget copy.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import Var, edge, plain, pointer
from .formulas import (
    CNF,
    Clause,
    gen_bop,
    gen_bop_lifted,
    gen_cycle_tseitin,
    gen_lop,
    pointer_bits,
)
from .proofs import PCProof, ResolutionProof, Step, check_resolution, resolution_lines
from .transforms import res_to_pcr


def _clause_index(cnf: CNF) -> Dict[Clause, int]:
    out = {c: i for i, c in enumerate(cnf.clauses)}
    if len(out) != len(cnf.clauses):
        raise ValueError("clause list contains duplicates; cannot index axioms")
    return out


class _Builder:
    def __init__(self, cnf: CNF):
        self.cnf = cnf
        self.lookup = _clause_index(cnf)
        self.steps: List[Tuple] = []

    def axiom(self, clause: Clause) -> int:
        self.steps.append(("in", self.lookup[clause]))
        return len(self.steps) - 1

    def resolve(self, i: int, j: int, pivot: Var) -> int:
        self.steps.append(("res", i, j, pivot))
        return len(self.steps) - 1

    def proof(self) -> ResolutionProof:
        return ResolutionProof(self.cnf, tuple(self.steps))


# ---------------------------------------------------------------------------
# linear ordering principle


def lop_resolution_refutation(n: int) -> ResolutionProof:
    """Refutation of the ordering principle on n vertices in about n^3/3
    resolution steps; every derived clause carries at most one negative
    literal."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    cnf = gen_lop(n)
    b = _Builder(cnf)
    # cur[j] holds the clause saying "some vertex of 1..m beats j"
    cur = {j: b.axiom(cnf.clauses[cnf.groups[f"BV({j})"][0]]) for j in range(1, n + 1)}
    for m in range(n, 1, -1):
        for j in range(1, m):
            d = cur[m]
            for i in range(1, m):
                if i == j:
                    ax = b.axiom(frozenset({edge(j, m).twin, edge(m, j).twin}))
                else:
                    ax = b.axiom(
                        frozenset({edge(i, m).twin, edge(m, j).twin, edge(i, j)})
                    )
                d = b.resolve(d, ax, edge(i, m))
            cur[j] = b.resolve(d, cur[j], edge(m, j))
    return b.proof()


# ---------------------------------------------------------------------------
# pointer trees


def _pointer_value(clause: Clause, j: int, bits: int) -> int:
    v = 0
    for a in range(1, bits + 1):
        y = pointer(j, a)
        if y.twin in clause:
            v |= 1 << (a - 1)
        elif y not in clause:
            raise ValueError(f"clause misses pointer bit {a} of vertex {j}")
    return v


def _pointer_tree(b: _Builder, j: int, bits: int) -> int:
    """Resolve vertex j's pointer clauses over all code values down to the
    single vee-clause, pairing codes bit by bit."""
    cnf = b.cnf
    rows = {}
    for idx in cnf.groups[f"BV({j})"]:
        clause = cnf.clauses[idx]
        rows[_pointer_value(clause, j, bits)] = b.axiom(clause)
    if sorted(rows) != list(range(1 << bits)):
        raise ValueError(f"vertex {j} does not carry one clause per code value")
    for a in range(1, bits + 1):
        step = 1 << (a - 1)
        rows = {
            v: b.resolve(rows[v], rows[v | step], pointer(j, a))
            for v in rows
            if not v & step
        }
    (line,) = rows.values()
    return line


def bop_to_lop_derivation(n: int) -> ResolutionProof:
    """From the pointer formulation, derive every vertex's vee-clause
    ("someone beats j") by resolving out the pointer bits."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    cnf = gen_bop(n)
    b = _Builder(cnf)
    bits = pointer_bits(n)
    for j in range(1, n + 1):
        _pointer_tree(b, j, bits)
    return b.proof()


# ---------------------------------------------------------------------------
# lifted refutation


def lifted_refutation(n: int, ell: int) -> ResolutionProof:
    """Refutation of the gadget-lifted pointer formula.

    Pointer trees first give each vertex's lifted vee-clause; the vertex
    elimination scheme then removes the top vertex copy by copy, costing
    about ell^2 resolutions per ordering axiom used.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if ell < 1:
        raise ValueError(f"need ell >= 1, got {ell}")
    cnf = gen_bop_lifted(n, ell)
    b = _Builder(cnf)
    bits = pointer_bits(n)
    copies = range(1, ell + 1)
    cur = {j: _pointer_tree(b, j, bits) for j in range(1, n + 1)}
    for m in range(n, 1, -1):
        for j in range(1, m):
            # one helper clause per copy of the edge from m to j
            helpers = []
            for sigma in copies:
                d = cur[m]
                for i in range(1, m):
                    for l in copies:
                        if i == j:
                            ax = b.axiom(
                                frozenset(
                                    {edge(j, m, l).twin, edge(m, j, sigma).twin}
                                )
                            )
                        else:
                            block = {edge(i, j, l2) for l2 in copies}
                            ax = b.axiom(
                                frozenset(
                                    {edge(i, m, l).twin, edge(m, j, sigma).twin}
                                )
                                | block
                            )
                        d = b.resolve(d, ax, edge(i, m, l))
                helpers.append(d)
            e = cur[j]
            for t, d in zip(copies, helpers):
                e = b.resolve(e, d, edge(m, j, t))
            cur[j] = e
    return b.proof()


def pcr_upper_bound(n: int, ell: int) -> PCProof:
    """The lifted refutation replayed in the Boolean polynomial system
    with twin variables; size stays polynomial in n and ell."""
    return res_to_pcr(lifted_refutation(n, ell))


# ---------------------------------------------------------------------------
# parity cycle


def tseitin_fourier_refutation(n: int) -> PCProof:
    """Refutation of the odd cycle parity system in the {+1,-1} encoding:
    walk the cycle keeping one binomial per vertex, then collide with the
    flipped last axiom.  About 4n lines of at most two monomials."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    ax = gen_cycle_tseitin(n)
    p = ax.field.p
    half = (p + 1) // 2  # inverse of 2
    x = {k: plain(f"x{k}") for k in range(1, n + 1)}
    steps: List[Step] = []

    def emit(step: Step) -> int:
        steps.append(step)
        return len(steps) - 1

    walk = emit(("ax", 0))  # x1*x2 - 1
    for k in range(2, n):
        a = emit(("ax", k - 1))  # xk*x(k+1) - 1
        q = emit(("mul", x[k], walk))  # x1 - xk
        q = emit(("mul", x[k + 1], q))  # x1*x(k+1) - xk*x(k+1)
        walk = emit(("lin", 1, q, 1, a))  # x1*x(k+1) - 1
    last = emit(("ax", n - 1))  # xn*x1 + 1
    emit(("lin", half, last, p - half, walk))  # 1
    return PCProof(ax, tuple(steps))


# ---------------------------------------------------------------------------
# scaling fits


def loglog_fit(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Least-squares slope and intercept of log y against log x."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need at least two matching points")
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def fit_through_origin(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Best constant C for y ~ C*x and the relative root-mean-square
    residual of that fit."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size or x.size == 0:
        raise ValueError("need matching nonempty points")
    c = float(np.dot(x, y) / np.dot(x, x))
    resid = float(np.linalg.norm(y - c * x))
    scale = float(np.linalg.norm(y))
    return c, (resid / scale if scale else 0.0)
