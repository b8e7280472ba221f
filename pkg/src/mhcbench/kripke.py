"""Finite intuitionistic Kripke models for assertoric formulas.

Worlds are ``0 .. size-1``; truth sets are bitmasks.  Valuations assign
up-closed sets, so forcing is persistent by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .algebra import (
    HeytingAlgebra,
    Poset,
    downset_masks,
    heyting_from_poset,
    make_poset,
    posets,
)
from .syntax import And, Formula, Imp, Not, Or, Var, variable_names


class KripkeError(ValueError):
    pass


def _ups(poset: Poset) -> list[int]:
    up = [1 << i for i in range(poset.size)]
    for i, j in poset.below:
        up[i] |= 1 << j
    return up


def upsets(poset: Poset) -> list[int]:
    """All up-closed sets of worlds as bitmasks (sorted by size, then value)."""
    return downset_masks(poset.reversed())


@dataclass(frozen=True)
class KripkeModel:
    """Worlds ``0..size-1`` ordered by ``order``; ``val`` maps variable
    names to up-closed sets of worlds (as frozensets)."""

    order: Poset
    val: Mapping[str, frozenset]

    def __post_init__(self):
        up = _ups(self.order)
        clean = {}
        for k, ws in self.val.items():
            name = k.name if isinstance(k, Var) else k
            ws = frozenset(ws)
            if any(not 0 <= w < self.size for w in ws):
                raise KripkeError(f"valuation of {name} names an unknown world")
            for w in ws:
                if any((up[w] >> u & 1) and u not in ws for u in range(self.size)):
                    raise KripkeError(f"valuation of {name} is not up-closed")
            clean[name] = ws
        object.__setattr__(self, "val", clean)

    @property
    def size(self) -> int:
        return self.order.size

    @property
    def worlds(self) -> range:
        return range(self.size)

    def le(self, v: int, w: int) -> bool:
        return self.order.le(v, w)

    def truth_set(self, f: Formula) -> frozenset:
        mask = _truth(self, f, _ups(self.order), {})
        return frozenset(w for w in self.worlds if mask >> w & 1)


def model(size: int, le_pairs=(), val: Optional[Mapping] = None) -> KripkeModel:
    return KripkeModel(make_poset(size, le_pairs), dict(val or {}))


def _truth(m: KripkeModel, f: Formula, up: list[int], memo: dict) -> int:
    hit = memo.get(f)
    if hit is not None:
        return hit
    n = m.size
    if isinstance(f, Var):
        if f.name not in m.val:
            raise KripkeError(f"no valuation for variable {f.name}")
        out = sum(1 << w for w in m.val[f.name])
    elif isinstance(f, And):
        out = _truth(m, f.left, up, memo) & _truth(m, f.right, up, memo)
    elif isinstance(f, Or):
        out = _truth(m, f.left, up, memo) | _truth(m, f.right, up, memo)
    elif isinstance(f, Imp):
        a = _truth(m, f.left, up, memo)
        b = _truth(m, f.right, up, memo)
        out = sum(1 << w for w in range(n) if up[w] & a & ~b == 0)
    elif isinstance(f, Not):
        a = _truth(m, f.arg, up, memo)
        out = sum(1 << w for w in range(n) if up[w] & a == 0)
    else:
        raise KripkeError("Kripke models evaluate assertoric formulas only")
    memo[f] = out
    return out


def forces(m: KripkeModel, w: int, f: Formula) -> bool:
    if not 0 <= w < m.size:
        raise KripkeError(f"no world {w}")
    return bool(_truth(m, f, _ups(m.order), {}) >> w & 1)


def countermodels(f: Formula, max_worlds: int) -> Iterator[tuple[KripkeModel, int]]:
    """All refutations ``(model, world)`` in enumeration order: number of
    worlds, poset order, valuation (lexicographic over sorted variable
    names and up-sets), world."""
    names = variable_names(f)
    for n in range(1, max_worlds + 1):
        for p in posets(n):
            ups = upsets(p)
            up = _ups(p)
            for choice in itertools.product(ups, repeat=len(names)):
                val = {k: frozenset(w for w in range(n) if s >> w & 1) for k, s in zip(names, choice)}
                m = KripkeModel(p, val)
                mask = _truth(m, f, up, {})
                for w in range(n):
                    if not mask >> w & 1:
                        yield m, w


def kripke_valid(f: Formula, max_worlds: int) -> Optional[tuple[KripkeModel, int]]:
    """The first countermodel with at most ``max_worlds`` worlds, or None."""
    return next(countermodels(f, max_worlds), None)


def upset_algebra(m: KripkeModel) -> tuple[HeytingAlgebra, list[int]]:
    """The Heyting algebra of up-sets of ``m`` and the bitmask of each of its
    elements."""
    rev = m.order.reversed()
    return heyting_from_poset(rev), downset_masks(rev)


def valuation_in_upset_algebra(m: KripkeModel) -> dict[str, int]:
    """The algebra valuation matching ``m``'s valuation."""
    _, masks = upset_algebra(m)
    return {k: masks.index(sum(1 << w for w in ws)) for k, ws in m.val.items()}


def dumps(m: KripkeModel, world: Optional[int] = None) -> str:
    """``worlds n``, covering ``le i j`` pairs and ``true x i`` lines
    (``var x`` for a variable true nowhere)."""
    out = [f"worlds {m.size}"]
    for i, j in sorted(m.order.below):
        if not any((i, k) in m.order.below and (k, j) in m.order.below for k in m.worlds):
            out.append(f"le {i} {j}")
    for k in sorted(m.val):
        if not m.val[k]:
            out.append(f"var {k}")
        for w in sorted(m.val[k]):
            out.append(f"true {k} {w}")
    if world is not None:
        out.append(f"# refuted at world {world}")
    return "\n".join(out) + "\n"


def loads(text: str) -> KripkeModel:
    size = None
    pairs, val = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "worlds" and len(words) == 2:
                size = int(words[1])
            elif words[0] == "le" and len(words) == 3:
                pairs.append((int(words[1]), int(words[2])))
            elif words[0] == "true" and len(words) == 3:
                val.setdefault(words[1], set()).add(int(words[2]))
            elif words[0] == "var" and len(words) == 2:
                val.setdefault(words[1], set())
            else:
                raise KripkeError(f"line {lineno}: cannot read {line!r}")
        except ValueError as e:
            if isinstance(e, KripkeError):
                raise
            raise KripkeError(f"line {lineno}: {e}") from None
    if not size or size < 1:
        raise KripkeError("missing or bad worlds line")
    return model(size, pairs, val)
