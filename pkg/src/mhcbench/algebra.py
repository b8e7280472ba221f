"""Finite Heyting and Boolean algebras with a box operator.

Elements are the integers ``0 .. size-1``; operations are lookup tables.
Heyting algebras are built from finite posets as algebras of downsets,
which yields every finite Heyting algebra.  Box operators satisfying
``□1 = 1`` and ``□(x∧y) = □x∧□y`` are enumerated through their values on
meet-irreducible elements, then filtered by :func:`classify`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .syntax import And, Box, Circle, Formula, Imp, Not, Or, Var, variable_names

MODAL_HEYTING = "modalHeyting"
KUZ = "Kuz"
E_ALGEBRA = "E"
K4GRZ = "K4Grz"
FLAGS = (MODAL_HEYTING, KUZ, E_ALGEBRA, K4GRZ)


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class Poset:
    """A finite poset on ``0 .. size-1``; ``below`` holds the strict pairs
    ``(i, j)`` with ``i < j`` in the order."""

    size: int
    below: frozenset

    def le(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.below

    def reversed(self) -> Poset:
        return Poset(self.size, frozenset((j, i) for i, j in self.below))


def closure(size: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    """Strict part of the reflexive-transitive closure; error on a cycle."""
    reach = [[False] * size for _ in range(size)]
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise AlgebraError(f"element out of range in pair ({i}, {j})")
        reach[i][j] = True
    for k in range(size):
        for i in range(size):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(size):
                    if row_k[j]:
                        row_i[j] = True
    out = set()
    for i in range(size):
        for j in range(size):
            if i != j and reach[i][j]:
                if reach[j][i]:
                    raise AlgebraError(f"order pairs form a cycle through {i} and {j}")
                out.add((i, j))
    return frozenset(out)


def make_poset(size: int, pairs: Iterable[tuple[int, int]] = ()) -> Poset:
    return Poset(size, closure(size, pairs))


def _canonical(size: int, below: frozenset) -> tuple:
    return min(tuple(sorted((perm[i], perm[j]) for i, j in below))
               for perm in itertools.permutations(range(size)))


@lru_cache(maxsize=None)
def posets(size: int) -> tuple[Poset, ...]:
    """All posets with ``size`` elements up to isomorphism, in a fixed order.

    Candidates are naturally labelled (``i`` below ``j`` implies ``i < j``)
    transitively closed relations, scanned in bitmask order; the first
    member of each isomorphism class is kept.
    """
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        below = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        if any((i, k) not in below for i, j in below for j2, k in below if j == j2):
            continue
        key = _canonical(size, below)
        if key not in seen:
            seen.add(key)
            out.append(Poset(size, below))
    return tuple(out)


# ---------------------------------------------------------------------------
# Heyting algebras


def _labels(size: int, bottom: int, top: int) -> tuple[str, ...]:
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    out = []
    for x in range(size):
        if x == bottom:
            out.append("0")
        elif x == top:
            out.append("1")
        else:
            name = next(letters, None)
            out.append(name if name is not None else f"e{x}")
    return tuple(out)


@dataclass(frozen=True)
class HeytingAlgebra:
    size: int
    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    imp: tuple[tuple[int, ...], ...]
    bottom: int
    top: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", _labels(self.size, self.bottom, self.top))

    @property
    def elements(self) -> range:
        return range(self.size)

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def neg(self, x: int) -> int:
        return self.imp[x][self.bottom]

    def label(self, x: int) -> str:
        return self.labels[x]

    def element(self, label: str) -> int:
        if label in self.labels:
            return self.labels.index(label)
        if label.isdigit() and int(label) < self.size:
            return int(label)
        raise AlgebraError(f"no element {label!r}")

    @cached_property
    def is_boolean(self) -> bool:
        return all(self.join[x][self.neg(x)] == self.top for x in self.elements)

    @cached_property
    def meet_irreducibles(self) -> tuple[int, ...]:
        """Elements other than 1 with exactly one upper cover."""
        out = []
        for x in self.elements:
            if x == self.top:
                continue
            above = [y for y in self.elements if y != x and self.leq[x][y]]
            covers = [y for y in above if not any(z != y and self.leq[z][y] for z in above)]
            if len(covers) == 1:
                out.append(x)
        return tuple(out)

    def check_laws(self) -> None:
        """Raise unless the tables form a Heyting algebra (exhaustive)."""
        E = self.elements
        for x in E:
            if not self.leq[self.bottom][x] or not self.leq[x][self.top]:
                raise AlgebraError("bottom/top are not extremal")
            for y in E:
                m, j = self.meet[x][y], self.join[x][y]
                if not (self.leq[m][x] and self.leq[m][y] and self.leq[x][j] and self.leq[y][j]):
                    raise AlgebraError("meet/join are not bounds")
                for z in E:
                    if self.leq[z][x] and self.leq[z][y] and not self.leq[z][m]:
                        raise AlgebraError("meet is not greatest")
                    if self.leq[x][z] and self.leq[y][z] and not self.leq[j][z]:
                        raise AlgebraError("join is not least")
                    if self.leq[self.meet[x][z]][y] != self.leq[z][self.imp[x][y]]:
                        raise AlgebraError("residuation fails")


def _principal_downs(poset: Poset) -> list[int]:
    down = [1 << i for i in range(poset.size)]
    for i, j in poset.below:
        down[j] |= 1 << i
    return down


def downset_masks(poset: Poset) -> list[int]:
    """Downsets as bitmasks, in the element order of :func:`heyting_from_poset`."""
    n = poset.size
    down = _principal_downs(poset)
    sets = [s for s in range(1 << n)
            if all(not (s >> j & 1) or (down[j] & s) == down[j] for j in range(n))]
    sets.sort(key=lambda s: (bin(s).count("1"), s))
    return sets


def heyting_from_poset(poset: Poset) -> HeytingAlgebra:
    """The algebra of downsets of ``poset`` ordered by inclusion."""
    n = poset.size
    down = _principal_downs(poset)
    sets = downset_masks(poset)
    index = {s: k for k, s in enumerate(sets)}
    size = len(sets)
    leq = tuple(tuple((a & ~b) == 0 for b in sets) for a in sets)
    meet = tuple(tuple(index[a & b] for b in sets) for a in sets)
    join = tuple(tuple(index[a | b] for b in sets) for a in sets)

    def implies(a, b):
        return sum(1 << x for x in range(n)
                   if all(not (a >> y & 1) or (b >> y & 1) for y in range(n) if down[x] >> y & 1))

    imp = tuple(tuple(index[implies(a, b)] for b in sets) for a in sets)
    return HeytingAlgebra(size, leq, meet, join, imp, index[0], index[(1 << n) - 1])


def from_order(size: int, pairs: Iterable[tuple[int, int]]) -> HeytingAlgebra:
    """The Heyting algebra on ``0..size-1`` with the order generated by
    ``pairs`` (``i ≤ j``); error unless it is a distributive lattice."""
    below = closure(size, pairs)
    leq = tuple(tuple(i == j or (i, j) in below for j in range(size)) for i in range(size))
    E = range(size)

    def extreme(cands, smaller):
        best = [c for c in cands if all(smaller(c, d) for d in cands)]
        return best[0] if best else None

    meet, join = [], []
    for x in E:
        mrow, jrow = [], []
        for y in E:
            lower = [z for z in E if leq[z][x] and leq[z][y]]
            upper = [z for z in E if leq[x][z] and leq[y][z]]
            m = extreme(lower, lambda c, d: leq[d][c])
            j = extreme(upper, lambda c, d: leq[c][d])
            if m is None or j is None:
                raise AlgebraError(f"elements {x} and {y} have no meet or join")
            mrow.append(m)
            jrow.append(j)
        meet.append(tuple(mrow))
        join.append(tuple(jrow))
    for x in E:
        for y in E:
            for z in E:
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    raise AlgebraError("the lattice is not distributive")
    imp = []
    for x in E:
        row = []
        for y in E:
            cands = [z for z in E if leq[meet[x][z]][y]]
            row.append(extreme(cands, lambda c, d: leq[d][c]))
        imp.append(tuple(row))
    bottom = extreme(list(E), lambda c, d: leq[c][d])
    top = extreme(list(E), lambda c, d: leq[d][c])
    return HeytingAlgebra(size, leq, tuple(meet), tuple(join), tuple(imp), bottom, top)


def chain(size: int) -> HeytingAlgebra:
    """The ``size``-element chain ``0 < a < ... < 1``."""
    if size < 2:
        raise AlgebraError("a chain needs at least two elements")
    return heyting_from_poset(make_poset(size - 1, [(i, i + 1) for i in range(size - 2)]))


def powerset(atoms: int) -> HeytingAlgebra:
    """The Boolean algebra with ``2**atoms`` elements."""
    return heyting_from_poset(Poset(atoms, frozenset()))


def heyting_algebras(max_size: Optional[int] = None, max_poset: Optional[int] = None
                     ) -> Iterator[tuple[Poset, HeytingAlgebra]]:
    """Nontrivial finite Heyting algebras, one per isomorphism class.

    Bounded by the number of elements (``max_size``) and/or by the size of
    the generating poset (``max_poset``).  Ordered by algebra size, then
    poset enumeration order.
    """
    if max_size is None and max_poset is None:
        raise AlgebraError("give max_size or max_poset")
    limit = max_poset if max_poset is not None else max_size - 1
    if max_size is not None:
        limit = min(limit, max_size - 1)
    found = []
    for n in range(1, limit + 1):
        for p in posets(n):
            a = heyting_from_poset(p)
            if max_size is None or a.size <= max_size:
                found.append((a.size, n, len(found), p, a))
    found.sort(key=lambda t: t[:3])
    for _, _, _, p, a in found:
        yield p, a


# ---------------------------------------------------------------------------
# modal algebras


@dataclass(frozen=True)
class ModalAlgebra:
    """A Heyting algebra with a box table (``box`` may be None for a plain
    Heyting algebra, in which case box formulas cannot be evaluated)."""

    base: HeytingAlgebra
    box: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.box is not None:
            box = tuple(self.box)
            if len(box) != self.base.size or not all(0 <= v < self.base.size for v in box):
                raise AlgebraError("box table does not match the carrier")
            object.__setattr__(self, "box", box)

    @property
    def size(self) -> int:
        return self.base.size

    @cached_property
    def classes(self) -> frozenset:
        return classify(self)


def classify(m: ModalAlgebra) -> frozenset:
    """The class flags whose defining identities hold in ``m``."""
    if m.box is None:
        return frozenset()
    A, bx = m.base, m.box
    E = A.elements
    leq, meet, join, imp = A.leq, A.meet, A.join, A.imp
    flags = set()
    if bx[A.top] != A.top:
        return frozenset()
    if not all(bx[meet[x][y]] == meet[bx[x]][bx[y]] for x in E for y in E):
        return frozenset()
    flags.add(MODAL_HEYTING)
    if all(leq[bx[x]][join[y][imp[y][x]]] for x in E for y in E):
        flags.add(KUZ)
        if all(leq[x][bx[x]] for x in E):
            flags.add(E_ALGEBRA)
    if A.is_boolean:
        def arrow(x, y):
            return join[A.neg(x)][y]

        if all(leq[bx[x]][bx[bx[x]]] and leq[bx[arrow(bx[arrow(x, bx[x])], x)]][bx[x]] for x in E):
            flags.add(K4GRZ)
    return frozenset(flags)


def boxes(A: HeytingAlgebra, inflationary: bool = False) -> list[tuple[int, ...]]:
    """Every box table with ``□1 = 1`` and ``□(x∧y) = □x∧□y``.

    Such a box is fixed by its values on the meet-irreducible elements,
    which may be any monotone assignment; ``inflationary`` additionally
    asks ``x ≤ □x``.  Tables come sorted lexicographically.
    """
    M = A.meet_irreducibles
    leq, meet = A.leq, A.meet
    choices = []
    for m in M:
        choices.append([v for v in A.elements if not inflationary or leq[m][v]])
    above = [[k for k, m in enumerate(M) if leq[x][m]] for x in A.elements]
    tables = []

    def extend(k, f):
        if k == len(M):
            table = []
            for x in A.elements:
                v = A.top
                for i in above[x]:
                    v = meet[v][f[i]]
                table.append(v)
            tables.append(tuple(table))
            return
        m = M[k]
        for v in choices[k]:
            ok = True
            for i in range(k):
                if leq[M[i]][m] and not leq[f[i]][v]:
                    ok = False
                    break
                if leq[m][M[i]] and not leq[v][f[i]]:
                    ok = False
                    break
            if ok:
                f.append(v)
                extend(k + 1, f)
                f.pop()

    extend(0, [])
    tables.sort()
    return tables


def all_box_tables(A: HeytingAlgebra) -> Iterator[tuple[int, ...]]:
    """Every map from the carrier to itself (brute force, small sizes only)."""
    return itertools.product(A.elements, repeat=A.size)


def modal_algebras(cls: Iterable[str] = (MODAL_HEYTING,), max_size: Optional[int] = None,
                   max_poset: Optional[int] = None, inflationary: bool = False
                   ) -> Iterator[ModalAlgebra]:
    """Modal algebras carrying every flag of ``cls``, in deterministic order.

    With ``K4Grz`` among the flags only powerset Boolean bases are used;
    ``inflationary`` keeps only boxes with ``x ≤ □x``.
    """
    cls = frozenset(cls)
    unknown = cls - set(FLAGS)
    if unknown:
        raise AlgebraError(f"unknown class flag {sorted(unknown)[0]!r}")
    inflationary = inflationary or E_ALGEBRA in cls
    if K4GRZ in cls:
        bases = []
        for atoms in range(0, 5):
            if max_size is not None and 2 ** atoms > max_size:
                break
            if max_poset is not None and atoms > max_poset:
                break
            if atoms:
                bases.append(powerset(atoms))
    else:
        bases = [a for _, a in heyting_algebras(max_size, max_poset)]
    for A in bases:
        for table in boxes(A, inflationary):
            m = ModalAlgebra(A, table)
            if cls <= m.classes:
                yield m


# ---------------------------------------------------------------------------
# evaluation


Valuation = Mapping[str, int]


def _compile(f: Formula, m: ModalAlgebra, names: Sequence[str]) -> Callable[[tuple], int]:
    A = m.base
    pos = {n: k for k, n in enumerate(names)}
    meet, join, imp, box = A.meet, A.join, A.imp, m.box
    bottom = A.bottom
    cache: dict[Formula, Callable] = {}

    def go(g):
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            if g.name not in pos:
                raise AlgebraError(f"valuation misses variable {g.name}")
            k = pos[g.name]
            fn = lambda v: v[k]
        elif isinstance(g, Circle):
            raise AlgebraError("circle formulas have no algebraic value here")
        elif isinstance(g, Box):
            if box is None:
                raise AlgebraError("algebra has no box table")
            a = go(g.arg)
            fn = lambda v: box[a(v)]
        elif isinstance(g, Not):
            a = go(g.arg)
            fn = lambda v: imp[a(v)][bottom]
        else:
            a, b = go(g.left), go(g.right)
            table = meet if isinstance(g, And) else join if isinstance(g, Or) else imp
            fn = lambda v: table[a(v)][b(v)]
        cache[g] = fn
        return fn

    return go(f)


def evaluate(f: Formula, m, v: Valuation) -> int:
    """Value of ``f`` under valuation ``v`` (variable name to element)."""
    if isinstance(m, HeytingAlgebra):
        m = ModalAlgebra(m)
    names = sorted({k.name if isinstance(k, Var) else k for k in v})
    vals = {k.name if isinstance(k, Var) else k: e for k, e in v.items()}
    fn = _compile(f, m, names)
    return fn(tuple(vals[n] for n in names))


def valuations(names: Sequence[str], size: int) -> Iterator[dict[str, int]]:
    for vals in itertools.product(range(size), repeat=len(names)):
        yield dict(zip(names, vals))


def refute(f: Formula, m) -> Optional[dict[str, int]]:
    """The first valuation (lexicographic over sorted variable names) giving
    ``f`` a value other than 1, or None."""
    if isinstance(m, HeytingAlgebra):
        m = ModalAlgebra(m)
    names = variable_names(f)
    fn = _compile(f, m, names)
    top = m.base.top
    for vals in itertools.product(range(m.size), repeat=len(names)):
        if fn(vals) != top:
            return dict(zip(names, vals))
    return None


def valid(f: Formula, m) -> bool:
    return refute(f, m) is None


def refutations(f: Formula, m) -> Iterator[dict[str, int]]:
    if isinstance(m, HeytingAlgebra):
        m = ModalAlgebra(m)
    names = variable_names(f)
    fn = _compile(f, m, names)
    top = m.base.top
    for vals in itertools.product(range(m.size), repeat=len(names)):
        if fn(vals) != top:
            yield dict(zip(names, vals))


def find_countermodel(f: Formula, cls: Iterable[str] = (MODAL_HEYTING,), max_base_size: int = 4,
                      require_valid: Iterable[Formula] = (), max_poset: Optional[int] = None
                      ) -> Optional[tuple[ModalAlgebra, dict[str, int]]]:
    """First algebra of class ``cls`` (at most ``max_base_size`` elements)
    validating every formula of ``require_valid`` and refuting ``f``.

    Enumeration order: algebra size, poset order, box table, valuation.
    None means no countermodel within the bound.
    """
    require = tuple(require_valid)
    uses_box = any(isinstance(g, Box) for h in (f,) + require for g in _nodes(h))
    last_base = None
    for m in modal_algebras(cls, max_base_size, max_poset):
        if not uses_box and m.base is last_base:
            continue
        last_base = m.base
        if not all(valid(h, m) for h in require):
            continue
        v = refute(f, m)
        if v is not None:
            return m, v
    return None


def _nodes(f: Formula):
    from .syntax import subformulas

    return subformulas(f)


# ---------------------------------------------------------------------------
# doubling, weakening, Löb chains


def double(m: ModalAlgebra) -> ModalAlgebra:
    """The doubleton: the product with the 2-element Boolean algebra and
    ``□(x, y) = (□x, z)`` where ``z = 1`` iff ``x = 1``.

    The pair ``(x, y)`` is element ``2*x + y``.
    """
    A = m.base
    if not A.is_boolean:
        raise AlgebraError("doubling needs a Boolean base")
    if m.box is None:
        raise AlgebraError("doubling needs a box")
    n = A.size * 2

    def pair(k):
        return divmod(k, 2)

    def idx(x, y):
        return 2 * x + y

    leq, meet, join, imp = [], [], [], []
    for k in range(n):
        x1, y1 = pair(k)
        leq.append(tuple(A.leq[x1][pair(l)[0]] and y1 <= pair(l)[1] for l in range(n)))
        meet.append(tuple(idx(A.meet[x1][pair(l)[0]], min(y1, pair(l)[1])) for l in range(n)))
        join.append(tuple(idx(A.join[x1][pair(l)[0]], max(y1, pair(l)[1])) for l in range(n)))
        imp.append(tuple(idx(A.imp[x1][pair(l)[0]], int(y1 <= pair(l)[1])) for l in range(n)))
    labels = tuple(f"({A.labels[x]},{y})" for x, y in map(pair, range(n)))
    B = HeytingAlgebra(n, tuple(leq), tuple(meet), tuple(join), tuple(imp),
                       idx(A.bottom, 0), idx(A.top, 1), labels)
    box = tuple(idx(m.box[x], int(x == A.top)) for x, _ in map(pair, range(n)))
    return ModalAlgebra(B, box)


def lift(v: Valuation) -> dict[str, int]:
    """Map each variable ``x ↦ a`` to ``x ↦ (a, 1)`` in the doubleton."""
    return {k: 2 * e + 1 for k, e in v.items()}


def weakening_witness(m: ModalAlgebra, a: Formula, v: Valuation):
    """Given ``v`` refuting ``a`` in ``m``, lift it to the doubleton.

    Returns ``(doubleton, lifted valuation, verdict)`` where the verdict
    says whether ``□a`` is refuted there.
    """
    if evaluate(a, m, v) == m.base.top:
        raise AlgebraError("the valuation does not refute the formula")
    B = double(m)
    lv = lift(v)
    return B, lv, evaluate(Box(a), B, lv) != B.base.top


def lob_chains_hold(m: ModalAlgebra) -> tuple[bool, bool]:
    """Both element-wise inequalities of the Löb-rule argument."""
    A, bx = m.base, m.box
    leq, meet, imp = A.leq, A.meet, A.imp
    first = second = True
    for x in A.elements:
        bxx = imp[bx[x]][x]
        lhs1 = meet[bx[imp[bxx][x]]][bxx]
        if not leq[lhs1][x]:
            first = False
        lhs2 = meet[bx[imp[bx[bxx]][bx[x]]]][bx[bxx]]
        if not leq[lhs2][bx[x]]:
            second = False
    return first, second


def check_lob_chains(m: ModalAlgebra) -> bool:
    """Whether ``□((□x→x)→x) ∧ (□x→x) ≤ x`` and
    ``□(□(□x→x)→□x) ∧ □(□x→x) ≤ □x`` hold for every element.

    Requires ``□1 = 1``, meet preservation and ``x ≤ □x``.
    """
    if m.box is None or MODAL_HEYTING not in m.classes:
        raise AlgebraError("check_lob_chains needs a modal Heyting algebra")
    if not all(m.base.leq[x][m.box[x]] for x in m.base.elements):
        raise AlgebraError("check_lob_chains needs x ≤ □x")
    return all(lob_chains_hold(m))


# ---------------------------------------------------------------------------
# text format


def dumps(m: ModalAlgebra, valuation: Optional[Valuation] = None) -> str:
    """``size n``, covering ``order i j`` pairs, ``box i v`` lines and an
    optional ``val x:=e`` witness block."""
    A = m.base
    out = ["# labels " + " ".join(f"{x}:{A.labels[x]}" for x in A.elements), f"size {A.size}"]
    for x in A.elements:
        for y in A.elements:
            if x != y and A.leq[x][y] and not any(
                    z not in (x, y) and A.leq[x][z] and A.leq[z][y] for z in A.elements):
                out.append(f"order {x} {y}")
    if m.box is not None:
        out.extend(f"box {x} {v}" for x, v in enumerate(m.box))
    if valuation:
        for k in sorted(valuation):
            e = valuation[k]
            out.append(f"val {k}:={e}  # {A.labels[e]}")
    return "\n".join(out) + "\n"


def loads(text: str) -> tuple[ModalAlgebra, dict[str, int]]:
    size = None
    pairs, box, val = [], {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "size" and len(words) == 2:
                size = int(words[1])
            elif words[0] == "order" and len(words) == 3:
                pairs.append((int(words[1]), int(words[2])))
            elif words[0] == "box" and len(words) == 3:
                box[int(words[1])] = int(words[2])
            elif words[0] == "val" and len(words) == 2 and ":=" in words[1]:
                k, e = words[1].split(":=")
                val[k] = int(e)
            else:
                raise AlgebraError(f"line {lineno}: cannot read {line!r}")
        except ValueError as e:
            if isinstance(e, AlgebraError):
                raise
            raise AlgebraError(f"line {lineno}: {e}") from None
    if size is None or size < 1:
        raise AlgebraError("missing or bad size line")
    A = from_order(size, pairs)
    table = None
    if box:
        if sorted(box) != list(range(size)):
            raise AlgebraError("box table must list every element exactly once")
        table = tuple(box[x] for x in range(size))
    for k, e in val.items():
        if not 0 <= e < size:
            raise AlgebraError(f"valuation of {k} out of range")
    return ModalAlgebra(A, table), val
