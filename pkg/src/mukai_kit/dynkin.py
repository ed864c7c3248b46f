"""Simple systems, ADE and affine ADE classification, marks and singularity reports.

Vectors are integer coordinate tuples; pairings come from an explicit Gram
matrix. The Cartan matrix of a list of roots is ``-<v_i, v_j>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cohlat import CohClass, NSClass, SurfaceData
from .errors import (
    HypothesisViolation,
    KernelNotOneDimensional,
    NotADE,
    NotDefinite,
    NotIntegral,
)
from .roots import (
    RootSet,
    SubLattice,
    enumerate_roots,
    ns_perp,
    perp_sublattice,
    quotient_mod,
)

Vector = tuple[int, ...]


# -- templates -------------------------------------------------------------

def _from_edges(n: int, edges: Sequence[tuple[int, int]], weight: int = 1) -> list[list[int]]:
    c = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    for a, b in edges:
        c[a][b] -= weight
        c[b][a] -= weight
    return c


def _path(n: int, start: int = 0) -> list[tuple[int, int]]:
    return [(start + i, start + i + 1) for i in range(n - 1)]


def _star(arms: Sequence[int]) -> tuple[int, list[tuple[int, int]]]:
    edges = []
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return nxt, edges


def _parse(label: str) -> tuple[str, int, bool]:
    affine = label.endswith("~") or "~" in label
    core = label.replace("~", "")
    letter, n = core[0], int(core[1:])
    return letter, n, affine


def cartan_matrix(label: str) -> list[list[int]]:
    """Cartan matrix of ``A3``, ``D5``, ``E8``, ``A~2``, ``D~4``, ``E~6``, ..."""
    letter, n, affine = _parse(label)
    if not affine:
        if letter == "A" and n >= 1:
            return _from_edges(n, _path(n))
        if letter == "D" and n >= 4:
            return _from_edges(n, _path(n - 1) + [(n - 3, n - 1)])
        if letter == "E" and n in (6, 7, 8):
            return _from_edges(n, _path(n - 1) + [(2, n - 1)])
    else:
        if letter == "A" and n == 1:
            return _from_edges(2, [(0, 1)], weight=2)
        if letter == "A" and n >= 2:
            return _from_edges(n + 1, _path(n + 1) + [(n, 0)])
        if letter == "D" and n == 4:
            size, edges = _star((1, 1, 1, 1))
            return _from_edges(size, edges)
        if letter == "D" and n >= 5:
            return _from_edges(n + 1, _path(n - 1) + [(1, n - 1), (n - 3, n)])
        if letter == "E" and n in (6, 7, 8):
            size, edges = _star({6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}[n])
            return _from_edges(size, edges)
    raise NotADE(f"unknown Dynkin label {label!r}")


def affine_label(finite: str) -> str:
    return finite[0] + "~" + finite[1:]


def root_count(label: str) -> int:
    """Number of roots of a finite ADE system."""
    letter, n, _ = _parse(label)
    if letter == "A":
        return n * (n + 1)
    if letter == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


# -- simple systems --------------------------------------------------------

def _is_positive(x: Sequence[int], f: Sequence | None) -> bool:
    if f is not None:
        val = linalg.dot(f, x)
        if val:
            return val > 0
    # Deterministic infinitesimal perturbation: lexicographic sign.
    for c in x:
        if c:
            return c > 0
    raise ValueError("zero vector is not a root")


def positive_roots(roots: RootSet | Sequence[Vector], functional: Sequence | None = None) -> list[Vector]:
    return [tuple(r) for r in roots if _is_positive(r, functional)]


def simple_system(roots: RootSet | Sequence[Vector], functional: Sequence | None = None) -> list[Vector]:
    """Positive roots that are not a sum of two positive roots, sorted.

    Positivity is ``functional . x > 0``, with ties broken by the sign of the
    first nonzero coordinate (a fixed infinitesimal perturbation).
    """
    pos = sorted(positive_roots(roots, functional))
    posset = set(pos)
    sums = set()
    for i, p in enumerate(pos):
        for q in pos[i + 1:]:
            s = tuple(a + b for a, b in zip(p, q))
            if s in posset:
                sums.add(s)
    return [p for p in pos if p not in sums]


def pairing_matrix(vectors: Sequence[Sequence[int]], gram: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[linalg.bilinear(a, gram, b) for b in vectors] for a in vectors]


def cartan_of(vectors: Sequence[Sequence[int]], gram: Sequence[Sequence]) -> list[list[int]]:
    p = pairing_matrix(vectors, gram)
    out = []
    for row in p:
        if not linalg.is_integral_vector(row):
            raise NotIntegral("pairings between roots must be integers")
        out.append([-int(x) for x in row])
    return out


def connected_components(cartan: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(cartan)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j != i and cartan[i][j] and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _sub(c: Sequence[Sequence[int]], idx: Sequence[int]) -> list[list[int]]:
    return [[c[i][j] for j in idx] for i in idx]


def _graph(c: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    n = len(c)
    adj = [[j for j in range(n) if j != i and c[i][j]] for i in range(n)]
    edges = sum(len(a) for a in adj) // 2
    return adj, edges


def _arms(adj: list[list[int]], center: int) -> list[int]:
    """Lengths of the simple paths leaving ``center`` in a tree."""
    lengths = []
    for start in adj[center]:
        prev, cur, length = center, start, 1
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if len(nxt) != 1:
                if len(nxt) > 1:
                    return []  # another branch point on this arm
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    return sorted(lengths)


def _label_tree_finite(c: list[list[int]]) -> str:
    n = len(c)
    adj, edges = _graph(c)
    if edges != n - 1:
        raise NotADE("diagram is not a tree")
    branch = [i for i in range(n) if len(adj[i]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(adj[branch[0]]) != 3:
        raise NotADE("diagram is not of finite ADE type")
    arms = _arms(adj, branch[0])
    if arms[:2] == [1, 1]:
        return f"D{n}"
    if arms == [1, 2, 2]:
        return "E6"
    if arms == [1, 2, 3]:
        return "E7"
    if arms == [1, 2, 4]:
        return "E8"
    raise NotADE(f"tree with arms {arms} is not of finite ADE type")


def classify_cartan_finite(c: Sequence[Sequence[int]]) -> list[tuple[list[int], str]]:
    """Split a Cartan matrix into components and label each one."""
    n = len(c)
    for i in range(n):
        if c[i][i] != 2:
            raise HypothesisViolation("roots must have norm -2")
        for j in range(n):
            if i != j and c[i][j] not in (0, -1):
                raise NotADE(f"off-diagonal pairing {-c[i][j]} is not in {{0, 1}}")
    if n and not linalg.is_positive_definite(c):
        raise NotDefinite("Cartan matrix is not positive definite")
    out = []
    for comp in connected_components(c):
        out.append((comp, _label_tree_finite(_sub(c, comp))))
    return out


def classify_finite(simples: Sequence[Sequence[int]], gram: Sequence[Sequence]) -> list[tuple[list[int], str]]:
    """Components (as index lists into ``simples``) with their ADE labels."""
    return classify_cartan_finite(cartan_of(simples, gram))


def _label_affine(c: list[list[int]]) -> str:
    n = len(c)
    if n == 2 and c[0][1] == -2:
        return "A~1"
    if any(c[i][j] < -1 for i in range(n) for j in range(n) if i != j):
        raise NotADE("multiple bonds occur only in A~1")
    adj, edges = _graph(c)
    if edges == n:
        if all(len(a) == 2 for a in adj):
            return f"A~{n - 1}"
        raise NotADE("cyclic diagram that is not a cycle")
    if edges != n - 1:
        raise NotADE("diagram is neither a tree nor a cycle")
    branch = [i for i in range(n) if len(adj[i]) >= 3]
    if len(branch) == 1 and len(adj[branch[0]]) == 4 and n == 5:
        return "D~4"
    if len(branch) == 2 and all(len(adj[b]) == 3 for b in branch):
        leaves = sum(1 for i in range(n) if len(adj[i]) == 1)
        if leaves == 4 and all(sum(1 for j in adj[b] if len(adj[j]) == 1) == 2 for b in branch):
            return f"D~{n - 1}"
    if len(branch) == 1 and len(adj[branch[0]]) == 3:
        arms = _arms(adj, branch[0])
        table = {(2, 2, 2): "E~6", (1, 3, 3): "E~7", (1, 2, 5): "E~8"}
        if tuple(arms) in table:
            return table[tuple(arms)]
    raise NotADE("diagram is not of affine ADE type")


@dataclass(frozen=True)
class AffineResult:
    label: str
    marks: tuple[int, ...]
    multiple: int | None = None  # sum marks_i v_i = multiple * isotropic, when supplied


def affine_marks(c: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Primitive positive integer generator of the kernel of ``c``."""
    ker = linalg.rational_kernel(c)
    if len(ker) != 1:
        raise KernelNotOneDimensional(f"Cartan kernel has dimension {len(ker)}")
    m = linalg.primitive_integer(ker[0])
    if all(x < 0 for x in m):
        m = [-x for x in m]
    if not all(x > 0 for x in m):
        raise HypothesisViolation("kernel vector is not positive")
    return tuple(m)


def classify_affine_cartan(c: Sequence[Sequence[int]]) -> AffineResult:
    c = [list(row) for row in c]
    n = len(c)
    for i in range(n):
        if c[i][i] != 2:
            raise HypothesisViolation("roots must have norm -2")
        for j in range(n):
            if i != j and c[i][j] > 0:
                raise HypothesisViolation("distinct roots must pair nonnegatively")
    if len(connected_components(c)) != 1:
        raise HypothesisViolation("diagram is not connected")
    marks = affine_marks(c)
    if linalg.signature(c) != (n - 1, 0, 1):
        raise NotDefinite("Cartan matrix is not positive semidefinite of corank 1")
    return AffineResult(_label_affine(c), marks)


def classify_affine(vectors: Sequence[Sequence[int]], gram: Sequence[Sequence],
                    isotropic: Sequence[int] | None = None) -> AffineResult:
    """Affine label and marks of roots whose Cartan matrix is of affine type.

    When ``isotropic`` is given, sum marks_i v_i must be a positive multiple of it.
    """
    res = classify_affine_cartan(cartan_of(vectors, gram))
    if isotropic is None:
        return res
    total = [sum(m * v[k] for m, v in zip(res.marks, vectors)) for k in range(len(isotropic))]
    ratio = None
    for t, w in zip(total, isotropic):
        if w:
            ratio = Fraction(t, w)
            break
    if ratio is None or ratio <= 0 or ratio.denominator != 1 or \
            any(t != ratio * w for t, w in zip(total, isotropic)):
        raise HypothesisViolation("marks do not reproduce the isotropic vector")
    return AffineResult(res.label, res.marks, int(ratio))


# -- the two-decomposition lemma ------------------------------------------

Decomposition = Sequence[tuple[int, Sequence[int]]]


def _check_decomposition(dec: Decomposition, gram, v: Sequence[int]) -> None:
    if not dec:
        raise HypothesisViolation("empty decomposition")
    total = [0] * len(v)
    for a, w in dec:
        if int(a) != a or a <= 0:
            raise HypothesisViolation("coefficients must be positive integers")
        if linalg.bilinear(w, gram, w) != -2:
            raise HypothesisViolation("decomposition vectors must have norm -2")
        if linalg.bilinear(w, gram, v) != 0 or linalg.bilinear(v, gram, w) != 0:
            raise HypothesisViolation("decomposition vectors must be orthogonal to v")
        total = [t + a * x for t, x in zip(total, w)]
    if total != list(v):
        raise HypothesisViolation("decomposition does not sum to v")


def disjointness_check(V1: Decomposition, V2: Decomposition, gram: Sequence[Sequence]) -> str:
    """Return ``"equal"`` or ``"orthogonal"`` for two decompositions of one isotropic v.

    Hypotheses are checked first and raise HypothesisViolation; the value
    ``"violation"`` is returned only if they hold and neither alternative does.
    """
    v = [sum(a * w[k] for a, w in V1) for k in range(len(V1[0][1]))] if V1 else []
    if not v or not any(v):
        raise HypothesisViolation("decompositions must sum to a nonzero vector")
    if linalg.bilinear(v, gram, v) != 0:
        raise HypothesisViolation("v is not isotropic")
    if linalg.content(v) != 1:
        raise HypothesisViolation("v is not primitive")
    _check_decomposition(V1, gram, v)
    _check_decomposition(V2, gram, v)
    s1 = {tuple(w) for _, w in V1}
    s2 = {tuple(w) for _, w in V2}
    if len(s1) != len(V1) or len(s2) != len(V2):
        raise HypothesisViolation("repeated vector inside a decomposition")
    union = sorted(s1 | s2)
    for i, a in enumerate(union):
        for b in union[i + 1:]:
            if linalg.bilinear(a, gram, b) < 0:
                raise HypothesisViolation("two distinct vectors pair negatively")
            if linalg.bilinear(a, gram, b) != linalg.bilinear(b, gram, a):
                raise HypothesisViolation("form is not symmetric on the vectors")
    # Span modulo v must be negative definite.
    span = [r for r in linalg.hnf_rows([list(w) for w in union]) if any(r)]
    pos, neg, zero = linalg.signature(pairing_matrix(span, gram))
    if pos or zero > 1:
        raise HypothesisViolation("span of the vectors is not negative semidefinite with radical Zv")
    if s1 == s2:
        return "equal"
    if all(linalg.bilinear(a, gram, b) == 0 for a in s1 for b in s2):
        return "orthogonal"
    return "violation"


# -- singularity reports ---------------------------------------------------

@dataclass(frozen=True)
class Component:
    label: str
    simple_roots: tuple[Vector, ...]
    affine_label: str | None = None
    affine_nodes: tuple[CohClass, ...] = ()
    marks: tuple[int, ...] = ()
    flags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DynkinReport:
    components: tuple[Component, ...]
    lattice: SubLattice | None = None
    quotient: SubLattice | None = None

    @property
    def labels(self) -> list[str]:
        return sorted(c.label for c in self.components)

    @property
    def smooth(self) -> bool:
        return not self.components


def delta_class(D: NSClass, v0: CohClass, S: SurfaceData) -> CohClass:
    """(0, D, (D, xi0)/r0)."""
    return CohClass(0, D, S.pair(D, v0.c1) / v0.r)


def kuranishi_lattice(v0: CohClass, H: NSClass, S: SurfaceData) -> SubLattice:
    """L = v0^perp and delta(H)^perp in the integral Mukai lattice."""
    return perp_sublattice([v0, delta_class(H, v0, S)], S)


def _affine_simples(comp_roots: list[Vector], M, v0: Vector, func) -> list[Vector]:
    """Simple roots of the affine system spanned by lifts of one component.

    A real affine root is a lift x + k v0 of a root x of M. It is positive
    when its rank is positive, or when its rank is zero and x is positive.
    Simple roots have rank in [0, rk v0], so only those lifts are searched.
    """
    r0 = v0[0]
    cands = set()
    for x in comp_roots:
        base = M.vector(x)
        lo = -((base[0]) // r0) - 1
        for k in range(lo, lo + 4):
            w = tuple(a + k * b for a, b in zip(base, v0))
            if 0 < w[0] <= r0 or (w[0] == 0 and _is_positive(x, func)):
                cands.add(w)
    cands = sorted(cands)
    cset = set(cands)
    sums = set()
    for i, p in enumerate(cands):
        # p + v0 adds the imaginary root
        s = tuple(a + b for a, b in zip(p, v0))
        if s in cset:
            sums.add(s)
        for q in cands[i:]:
            s = tuple(a + b for a, b in zip(p, q))
            if s in cset:
                sums.add(s)
    return [c for c in cands if c not in sums]


def singularity_report(v0: CohClass, H: NSClass, S: SurfaceData,
                       functional: Sequence | None = None, limit: int | None = None) -> DynkinReport:
    """Lattice prediction of the rational double points of the moduli of v0.

    L = v0^perp and delta(H)^perp, M = L / Z v0. Each finite component of the
    root system of M is one singular point; its affine extension consists of
    the simple positive lifts to L (rank in [0, rk v0]) and carries marks with
    sum marks_i u_i = v0.
    """
    if not v0.is_integral() or not v0.is_primitive():
        raise HypothesisViolation("v0 must be primitive and integral")
    if S.pair(v0.c1, v0.c1) - 2 * v0.r * v0.s != 0:
        raise HypothesisViolation("v0 must be isotropic")
    if v0.r <= 0:
        raise HypothesisViolation("v0 must have positive rank")
    if S.pair(H, H) <= 0:
        raise HypothesisViolation("H must have positive square")
    L = kuranishi_lattice(v0, H, S)
    M = quotient_mod(L, v0)
    if M.rank == 0:
        return DynkinReport((), L, M)
    rs = enumerate_roots(M, -2, limit=limit)
    simples = simple_system(rs, functional)
    if not simples:
        return DynkinReport((), L, M)
    v0c = tuple(int(x) for x in v0.coords)
    r0 = v0c[0]
    comps = []
    for idx, label in classify_finite(simples, M.gram):
        csimples = [simples[i] for i in idx]
        # roots of M in the span of this component
        span_roots = [x for x in rs if _in_span(x, csimples)]
        nodes = _affine_simples(span_roots, M, v0c, functional)
        flags = {"rank_zero_lifts": any(M.vector(x)[0] % r0 == 0 for x in span_roots)}
        aff = None
        marks: tuple[int, ...] = ()
        try:
            res = classify_affine(nodes, M.ambient, v0c)
            aff, marks = res.label, res.marks
            flags["relation_exact"] = res.multiple == 1
        except (HypothesisViolation, NotADE, NotDefinite, KernelNotOneDimensional) as exc:
            flags["affine_error"] = str(exc)
        flags["all_nodes_in_window"] = all(0 < n[0] < r0 for n in nodes)
        flags["mark_one_nodes"] = [i for i, m in enumerate(marks) if m == 1]
        flags["affine_matches_finite"] = aff == affine_label(label)
        comps.append(Component(label, tuple(csimples), aff,
                               tuple(CohClass.from_coords(n) for n in nodes), marks, flags))
    comps.sort(key=lambda c: (c.label, c.simple_roots))
    return DynkinReport(tuple(comps), L, M)


def _in_span(x: Sequence[int], basis: list[Vector]) -> bool:
    return linalg.solve(linalg.transpose(basis), list(x)) is not None


def tilting_witnesses(r: int, xi: NSClass, H: NSClass, S: SurfaceData) -> list[Vector]:
    """(-2)-classes D in H^perp with r | (xi, D), as NS coordinates."""
    if r <= 0:
        raise HypothesisViolation("r must be positive")
    if S.pair(H, H) <= 0:
        raise HypothesisViolation("H must have positive square")
    P = ns_perp(H, S)
    if P.rank == 0:
        return []
    out = []
    for x in enumerate_roots(P, -2):
        D = P.vector(x)
        val = S.pair(xi, NSClass(D))
        if val.denominator != 1:
            raise NotIntegral("(xi, D) is not an integer")
        if int(val) % r == 0:
            out.append(D)
    return out


def tilting_check(r: int, xi: NSClass, H: NSClass, S: SurfaceData) -> bool:
    """True iff r does not divide (xi, D) for every (-2)-class D in H^perp."""
    return not tilting_witnesses(r, xi, H, S)
