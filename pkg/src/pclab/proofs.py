"""Proof objects for resolution and polynomial calculus, the line-by-line
checkers, and the proof metrics: size, degree, quadratic degree, touched
vertices, special degree.

A polynomial-calculus proof is a sequence of lines, each produced by one
step:

    ("ax", i)           the i-th axiom polynomial of the system
    ("sq", v)           square axiom for v -- identically zero in the
                        multilinear representation, kept as an explicit
                        zero line
    ("tw", v)           twin axiom for v: x + ~x - 1 (boolean) or
                        x*~x + 1 (fourier)
    ("lin", a, i, b, j) a*L_i + b*L_j
    ("mul", v, i)       v * L_i, squares folded per the basis

Line references are 0-based positions of earlier lines.  The checker
recomputes every polynomial from its step; nothing is trusted.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .algebra import (
    BOOLEAN,
    FOURIER,
    BasisMismatch,
    Field,
    Poly,
    Term,
    Var,
    format_var,
    grlex_key,
    parse_var,
    term_mul,
)
from .formulas import CNF, AxiomSystem, Clause, read_axioms, read_dimacs

Step = tuple


def twin_axiom_poly(v: Var, field: Field, basis: str) -> Poly:
    b = v.base
    if basis == BOOLEAN:
        return Poly(field, basis, {(b,): 1, (b.twin,): 1, (): field.p - 1})
    if basis == FOURIER:
        return Poly(field, basis, {(b, b.twin): 1, (): 1})
    raise BasisMismatch(f"unknown basis {basis!r}")


@dataclass(frozen=True)
class PCProof:
    axioms: AxiomSystem
    steps: Tuple[Step, ...]

    @property
    def basis(self) -> str:
        return self.axioms.basis

    @property
    def field(self) -> Field:
        return self.axioms.field

    def __len__(self) -> int:
        return len(self.steps)


class StepError(ValueError):
    pass


_STEP_ARITY = {"ax": 2, "sq": 2, "tw": 2, "lin": 5, "mul": 3}


def _step_poly(step: Step, k: int, lines: Dict[int, Poly], proof: PCProof, uni: Set[Var]) -> Poly:
    ax = proof.axioms
    kind = step[0] if step else None
    if kind not in _STEP_ARITY or len(step) != _STEP_ARITY[kind]:
        raise StepError(f"malformed step {step!r}")

    def line(i: int) -> Poly:
        if not isinstance(i, int) or not (0 <= i < k):
            raise StepError(f"reference to line {i} not before line {k}")
        return lines[i]

    if kind == "ax":
        i = step[1]
        if not isinstance(i, int) or not (0 <= i < len(ax.polys)):
            raise StepError(f"no axiom with index {i}")
        return ax.polys[i]
    if kind in ("sq", "tw"):
        v = step[1]
        if not isinstance(v, Var) or v.base not in uni:
            raise StepError(f"variable {v} outside the system universe")
        if kind == "sq":
            return Poly.zero(ax.field, ax.basis)
        return twin_axiom_poly(v, ax.field, ax.basis)
    if kind == "lin":
        _, a, i, b, j = step
        if not isinstance(a, int) or not isinstance(b, int):
            raise StepError(f"non-scalar coefficients in {step!r}")
        return line(i).scale(a).add(line(j).scale(b))
    _, v, i = step
    if not isinstance(v, Var) or v.base not in uni:
        raise StepError(f"variable {v} outside the system universe")
    return line(i).mul_var(v)


def proof_lines(proof: PCProof) -> List[Poly]:
    """Materialize every line; raises StepError on a malformed step."""
    lines: Dict[int, Poly] = {}
    uni = set(proof.axioms.universe)
    out = []
    for k, step in enumerate(proof.steps):
        p = _step_poly(step, k, lines, proof, uni)
        lines[k] = p
        out.append(p)
    return out


@dataclass(frozen=True)
class PCReport:
    valid: bool
    is_refutation: bool
    size: int
    degree: int
    num_lines: int
    first_bad_line: Optional[int] = None
    message: str = ""


def check_pc(proof: PCProof) -> PCReport:
    """Recompute every line from its step and report the proof metrics.

    ``size`` is the total monomial count over all lines and ``degree``
    the maximum line degree.  Lines no longer referenced later are
    released as checking proceeds, so memory stays proportional to the
    live frontier, not the proof length.
    """
    last_use: Dict[int, int] = {}
    for k, step in enumerate(proof.steps):
        if step[0] == "lin" and len(step) == 5:
            for i in (step[2], step[4]):
                if isinstance(i, int):
                    last_use[i] = k
        elif step[0] == "mul" and len(step) == 3 and isinstance(step[2], int):
            last_use[step[2]] = k

    lines: Dict[int, Poly] = {}
    uni = set(proof.axioms.universe)
    size = 0
    degree = 0
    final: Optional[Poly] = None
    for k, step in enumerate(proof.steps):
        try:
            p = _step_poly(step, k, lines, proof, uni)
        except (StepError, TypeError, KeyError) as e:
            return PCReport(False, False, size, degree, len(proof.steps), k, str(e))
        lines[k] = p
        size += p.monomial_count
        degree = max(degree, p.degree)
        final = p
        for i in (step[2], step[4]) if step[0] == "lin" else ():
            if isinstance(i, int) and last_use.get(i) == k and i != k:
                lines.pop(i, None)
        if step[0] == "mul" and isinstance(step[2], int) and last_use.get(step[2]) == k:
            lines.pop(step[2], None)
    one = Poly.constant(proof.field, proof.basis, 1)
    is_refutation = final is not None and final == one
    return PCReport(True, is_refutation, size, degree, len(proof.steps))


# ---------------------------------------------------------------------------
# resolution


@dataclass(frozen=True)
class ResolutionProof:
    cnf: CNF
    steps: Tuple[Step, ...]  # ("in", clause_index) | ("res", i, j, pivot Var)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ResReport:
    valid: bool
    is_refutation: bool
    num_lines: int
    max_width: int
    first_bad_line: Optional[int] = None
    message: str = ""


def resolve_clauses(c1: Clause, c2: Clause, pivot: Var) -> Clause:
    """Resolvent of two clauses on a pivot variable (given as its base)."""
    pivot = pivot.base
    if pivot in c1 and pivot.twin in c2:
        pos, neg = c1, c2
    elif pivot in c2 and pivot.twin in c1:
        pos, neg = c2, c1
    else:
        raise StepError(f"pivot {format_var(pivot)} is not complementary in the parents")
    return frozenset(v for v in (pos | neg) if v.base != pivot)


def resolution_lines(proof: ResolutionProof) -> List[Clause]:
    lines: List[Clause] = []
    for k, step in enumerate(proof.steps):
        if step[0] == "in":
            i = step[1]
            if not (0 <= i < len(proof.cnf.clauses)):
                raise StepError(f"no input clause with index {i}")
            lines.append(proof.cnf.clauses[i])
        elif step[0] == "res":
            _, i, j, pivot = step
            if not (0 <= i < k and 0 <= j < k):
                raise StepError(f"reference not before line {k}")
            lines.append(resolve_clauses(lines[i], lines[j], pivot))
        else:
            raise StepError(f"unknown step kind {step[0]!r}")
    return lines


def check_resolution(proof: ResolutionProof) -> ResReport:
    lines: List[Clause] = []
    width = 0
    for k, step in enumerate(proof.steps):
        try:
            if step[0] == "in":
                i = step[1]
                if not (0 <= i < len(proof.cnf.clauses)):
                    raise StepError(f"no input clause with index {i}")
                c = proof.cnf.clauses[i]
            elif step[0] == "res":
                _, i, j, pivot = step
                if not (0 <= i < k and 0 <= j < k):
                    raise StepError(f"reference not before line {k}")
                c = resolve_clauses(lines[i], lines[j], pivot)
            else:
                raise StepError(f"unknown step kind {step[0]!r}")
        except StepError as e:
            return ResReport(False, False, len(proof.steps), width, k, str(e))
        lines.append(c)
        width = max(width, len(c))
    is_refutation = bool(lines) and not lines[-1]
    return ResReport(True, is_refutation, len(proof.steps), width)


# ---------------------------------------------------------------------------
# quadratic metrics


@dataclass(frozen=True)
class QuadraticSet:
    """Unordered pairs of cohabiting terms and their folded products."""

    pairs: FrozenSet[Tuple[Term, Term]]
    products: FrozenSet[Term]
    qdeg: int
    d0: int


def _line_is_axiom(step: Step) -> bool:
    return step[0] in ("ax", "sq", "tw")


def quadratic_set(proof: PCProof) -> QuadraticSet:
    """All unordered pairs (including self-pairs) of terms sharing a
    line, and their products folded modulo v*v = 1.  Defined for the
    {+1,-1} encoding only."""
    if proof.basis != FOURIER:
        raise BasisMismatch("quadratic machinery is specific to the {+1,-1} encoding")
    lines = proof_lines(proof)
    pairs: Set[Tuple[Term, Term]] = set()
    products: Set[Term] = set()
    d0 = 0
    for step, p in zip(proof.steps, lines):
        if _line_is_axiom(step):
            d0 = max(d0, p.degree)
        ts = sorted(p.terms, key=grlex_key)
        for a in range(len(ts)):
            for b in range(a, len(ts)):
                pairs.add((ts[a], ts[b]))
                products.add(term_mul(ts[a], ts[b], FOURIER))
    qdeg = max((len(t) for t in products), default=0)
    return QuadraticSet(frozenset(pairs), frozenset(products), qdeg, d0)


def quadratic_degree(proof: PCProof) -> int:
    return quadratic_set(proof).qdeg


# ---------------------------------------------------------------------------
# touched vertices


@dataclass(frozen=True)
class TouchReport:
    strong: FrozenSet[int]
    light: FrozenSet[int]

    @property
    def tau(self) -> FrozenSet[int]:
        return self.strong | self.light


def touched(t: Term, n: int, ell: int) -> TouchReport:
    """Vertices a term speaks about: j is strongly touched by any gadget
    variable pointing at j or any pointer bit of j; i is lightly touched
    when the term holds every gadget copy of some edge out of i.

    Clustered gadget variables count with multiplicity two, so a full
    set of ell/2 pair variables lights the tail vertex just as the full
    ell original copies would.
    """
    strong: Set[int] = set()
    gadget: Dict[Tuple[str, int, int], Set[int]] = {}
    for v in t:
        if v.negated:
            raise ValueError(f"touch analysis is over positive terms, got {v}")
        if v.kind == "y":
            j, _ = v.index
            if not (1 <= j <= n):
                raise ValueError(f"vertex {j} outside 1..{n}")
            strong.add(j)
        elif v.kind in ("x", "z"):
            i, j, l = v.index
            need = ell if v.kind == "x" else ell // 2
            if not (1 <= i <= n and 1 <= j <= n and 1 <= l <= need):
                raise ValueError(f"variable {v} outside the (n={n}, ell={ell}) family")
            strong.add(j)
            gadget.setdefault((v.kind, i, j), set()).add(l)
        else:
            raise ValueError(f"foreign variable {v}")
    light: Set[int] = set()
    for (kind, i, j), ls in gadget.items():
        need = ell if kind == "x" else ell // 2
        if len(ls) == need:
            light.add(i)
    return TouchReport(frozenset(strong), frozenset(light))


def special_degree(proof: PCProof, n: Optional[int] = None, ell: Optional[int] = None) -> int:
    n = n if n is not None else proof.axioms.n
    ell = ell if ell is not None else proof.axioms.ell
    if n is None or ell is None:
        raise ValueError("touch context (n, ell) unknown")
    best = 0
    for p in proof_lines(proof):
        for t in p.terms:
            best = max(best, len(touched(t, n, ell).tau))
    return best


# ---------------------------------------------------------------------------
# random derivations

_SIZE_CAP = 4096


def random_derivation(axioms: AxiomSystem, steps: int, seed: int) -> PCProof:
    """Seeded random application of the derivation rules; every output is
    checker-valid.  All axioms are introduced first, then ``steps``
    random rule applications follow."""
    rng = random.Random(seed)
    out: List[Step] = [("ax", i) for i in range(len(axioms.polys))]
    polys: List[Poly] = list(axioms.polys)
    universe = list(axioms.universe)
    for _ in range(steps):
        choices = []
        if polys:
            choices += ["lin"] * 5 + (["mul"] * 4 if universe else [])
        if universe:
            choices += ["tw", "sq"]
        if not choices:
            break
        kind = rng.choice(choices)
        if kind == "lin":
            i, j = rng.randrange(len(polys)), rng.randrange(len(polys))
            if polys[i].monomial_count + polys[j].monomial_count > _SIZE_CAP:
                kind = "mul" if universe else "tw"
            else:
                a, b = rng.randrange(axioms.field.p), rng.randrange(axioms.field.p)
                out.append(("lin", a, i, b, j))
                polys.append(polys[i].scale(a).add(polys[j].scale(b)))
                continue
        if kind == "mul":
            i = rng.randrange(len(polys))
            v = rng.choice(universe)
            if rng.random() < 0.5:
                v = v.twin
            out.append(("mul", v, i))
            polys.append(polys[i].mul_var(v))
        elif kind == "tw":
            v = rng.choice(universe)
            out.append(("tw", v))
            polys.append(twin_axiom_poly(v, axioms.field, axioms.basis))
        else:
            v = rng.choice(universe)
            out.append(("sq", v))
            polys.append(Poly.zero(axioms.field, axioms.basis))
    return PCProof(axioms, tuple(out))


# ---------------------------------------------------------------------------
# file formats


def write_pcproof(proof: PCProof, path, axioms_path: str) -> None:
    """Line-oriented text format; labels and axiom indices are 1-based
    in the file."""
    with open(str(path), "w") as fh:
        fh.write(
            f"pcproof v1 basis={proof.basis} field={proof.field.p} axioms={axioms_path}\n"
        )
        for k, step in enumerate(proof.steps):
            fh.write(f"L{k + 1} {format_step(step)}\n")


def format_step(step: Step) -> str:
    kind = step[0]
    if kind == "ax":
        return f"AX {step[1] + 1}"
    if kind == "sq":
        return f"SQ {format_var(step[1])}"
    if kind == "tw":
        return f"TW {format_var(step[1])}"
    if kind == "lin":
        _, a, i, b, j = step
        return f"LIN {a} L{i + 1} {b} L{j + 1}"
    if kind == "mul":
        _, v, i = step
        return f"MUL {format_var(v)} L{i + 1}"
    raise ValueError(f"unknown step kind {kind!r}")


def _parse_label(tok: str, upto: int) -> int:
    if not tok.startswith("L"):
        raise ValueError(f"expected line label, got {tok!r}")
    i = int(tok[1:]) - 1
    if not (0 <= i < upto):
        raise ValueError(f"label {tok} out of range")
    return i


def parse_step(text: str, k: int, field: Field) -> Step:
    toks = text.split()
    kind = toks[0]
    if kind == "AX" and len(toks) == 2:
        return ("ax", int(toks[1]) - 1)
    if kind == "SQ" and len(toks) == 2:
        return ("sq", parse_var(toks[1]))
    if kind == "TW" and len(toks) == 2:
        return ("tw", parse_var(toks[1]))
    if kind == "LIN" and len(toks) == 5:
        a = int(toks[1]) % field.p
        b = int(toks[3]) % field.p
        return ("lin", a, _parse_label(toks[2], k), b, _parse_label(toks[4], k))
    if kind == "MUL" and len(toks) == 3:
        return ("mul", parse_var(toks[1]), _parse_label(toks[2], k))
    raise ValueError(f"malformed step {text!r}")


def read_pcproof(path, axioms: Optional[AxiomSystem] = None) -> PCProof:
    with open(str(path)) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["pcproof", "v1"]:
        raise ValueError(f"bad proof header: {lines[0]!r}")
    kv = dict(x.split("=", 1) for x in head[2:])
    if axioms is None:
        ax_path = kv["axioms"]
        if not os.path.isabs(ax_path):
            ax_path = os.path.join(os.path.dirname(os.path.abspath(str(path))), ax_path)
        axioms = read_axioms(ax_path)
    if axioms.basis != kv["basis"] or axioms.field.p != int(kv["field"]):
        raise ValueError("proof header disagrees with the axiom system")
    steps = []
    for k, line in enumerate(lines[1:]):
        label, rest = line.split(None, 1)
        if label != f"L{k + 1}":
            raise ValueError(f"expected label L{k + 1}, got {label!r}")
        steps.append(parse_step(rest, k, axioms.field))
    return PCProof(axioms, tuple(steps))


def write_resproof(proof: ResolutionProof, path, cnf_path: str) -> None:
    with open(str(path), "w") as fh:
        fh.write(f"resproof v1 cnf={cnf_path}\n")
        for k, step in enumerate(proof.steps):
            if step[0] == "in":
                fh.write(f"L{k + 1} IN {step[1] + 1}\n")
            else:
                _, i, j, pivot = step
                fh.write(f"L{k + 1} RES L{i + 1} L{j + 1} {format_var(pivot)}\n")


def read_resproof(path, cnf: Optional[CNF] = None) -> ResolutionProof:
    with open(str(path)) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["resproof", "v1"]:
        raise ValueError(f"bad proof header: {lines[0]!r}")
    kv = dict(x.split("=", 1) for x in head[2:])
    if cnf is None:
        cnf_path = kv["cnf"]
        if not os.path.isabs(cnf_path):
            cnf_path = os.path.join(os.path.dirname(os.path.abspath(str(path))), cnf_path)
        cnf = read_dimacs(cnf_path)
    steps: List[Step] = []
    for k, line in enumerate(lines[1:]):
        toks = line.split()
        if toks[0] != f"L{k + 1}":
            raise ValueError(f"expected label L{k + 1}, got {toks[0]!r}")
        if toks[1] == "IN" and len(toks) == 3:
            steps.append(("in", int(toks[2]) - 1))
        elif toks[1] == "RES" and len(toks) == 5:
            steps.append(("res", _parse_label(toks[2], k), _parse_label(toks[3], k), parse_var(toks[4])))
        else:
            raise ValueError(f"malformed step {line!r}")
    return ResolutionProof(cnf, tuple(steps))
