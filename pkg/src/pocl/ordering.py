"""Strict partial order over step ids, kept transitively closed.

Step ids are small non-negative ints.  ``succ[i]`` is a bitmask of every step
that must come after ``i``.  The structure is persistent like
:class:`pocl.bindings.Bindings`.
"""

from __future__ import annotations

START, END = 0, 1


class Ordering:
    __slots__ = ("succ", "pred", "steps")

    def __init__(self, succ=(), pred=(), steps=0):
        self.succ: tuple = succ
        self.pred: tuple = pred
        self.steps: int = steps  # bitmask of known step ids

    @classmethod
    def initial(cls) -> "Ordering":
        """Just start < end."""
        return cls((1 << END, 0), (0, 1 << START), (1 << START) | (1 << END))

    def __contains__(self, sid: int) -> bool:
        return bool(self.steps >> sid & 1)

    def before(self, a: int, b: int) -> bool:
        """``a`` is necessarily before ``b``."""
        return a < len(self.succ) and bool(self.succ[a] >> b & 1)

    def consistent(self, a: int, b: int) -> bool:
        """``a < b`` could be added without a cycle."""
        return a != b and not self.before(b, a)

    def possibly_between(self, c: int, a: int, b: int) -> bool:
        """``c`` may fall strictly between ``a`` and ``b`` in some linearization."""
        if c == a or c == b:
            return False
        return not self.before(c, a) and not self.before(b, c)

    def add_step(self, sid: int) -> "Ordering":
        """Register ``sid`` between start and end."""
        o = self
        if sid not in (START, END):
            o = o.constrain(START, sid)
            o = o.constrain(sid, END)
        return o

    def constrain(self, a: int, b: int) -> "Ordering | None":
        """Add ``a < b``; ``None`` when it would create a cycle."""
        if a == b or self.before(b, a):
            return None
        if self.before(a, b):
            return self
        n = max(len(self.succ), a + 1, b + 1)
        succ = list(self.succ) + [0] * (n - len(self.succ))
        pred = list(self.pred) + [0] * (n - len(self.pred))
        down = succ[b] | (1 << b)  # b and everything after it
        up = pred[a] | (1 << a)  # a and everything before it
        i, m = 0, up
        while m:
            if m & 1:
                succ[i] |= down
            m >>= 1
            i += 1
        i, m = 0, down
        while m:
            if m & 1:
                pred[i] |= up
            m >>= 1
            i += 1
        return Ordering(tuple(succ), tuple(pred), self.steps | (1 << a) | (1 << b))

    def pairs(self) -> list[tuple[int, int]]:
        out = []
        for a, m in enumerate(self.succ):
            b = 0
            while m:
                if m & 1:
                    out.append((a, b))
                m >>= 1
                b += 1
        return out

    def linearization(self, ids) -> list[int]:
        """One topological order of ``ids`` (smallest id first on ties)."""
        ids = sorted(ids)
        done: list[int] = []
        left = set(ids)
        while left:
            for s in ids:
                if s in left and not any(self.before(t, s) for t in left if t != s):
                    done.append(s)
                    left.discard(s)
                    break
        return done

    def __repr__(self) -> str:
        return "Ordering(" + ", ".join(f"{a}<{b}" for a, b in self.pairs()) + ")"


def constrain_order(ordering: Ordering, a: int, b: int) -> Ordering | None:
    return ordering.constrain(a, b)


def possibly_between(ordering: Ordering, s: int, link) -> bool:
    """Whether step ``s`` may fall inside the interval protected by ``link``."""
    return ordering.possibly_between(s, link.producer, link.consumer)
