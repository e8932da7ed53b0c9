"""Exact finite-window cellular automata.

A rule is a total lookup table over a finite neighborhood; a window is a
finite configuration with either periodic or absent boundary.  Everything
here is exact, deterministic, and built from plain tuples and dicts so the
higher layers can enumerate, compare and certify without numerical noise.

Conventions: 1-dimensional neighborhoods are tuples of integer offsets,
2-dimensional ones are tuples of (dx, dy) pairs with y growing downwards.
2-dimensional window cells are stored row-major, ``cells[y][x]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from operator import itemgetter

ONE_SIDED = "one"
TWO_SIDED = "two"
PERIODIC = "periodic"
ABSENT = "absent"

DEFAULT_BUDGET = 10_000_000


class BudgetError(RuntimeError):
    """An enumeration would exceed its work budget; carries the required count."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration needs {required} units but the budget is {budget}")
        self.required = required
        self.budget = budget


def _offset_norm(off) -> int:
    if isinstance(off, tuple):
        return max(abs(off[0]), abs(off[1]))
    return abs(off)


@dataclass(frozen=True)
class RuleTable:
    """A cellular automaton given by its complete local lookup table.

    ``table`` maps every length-``len(neighborhood)`` state tuple to a state.
    ``sidedness`` is ``"one"`` when the rule is a map on right-infinite
    configurations (all offsets >= 0) and ``"two"`` otherwise; it is purely
    1-dimensional bookkeeping and must be ``"two"`` in dimension 2.
    """

    dimension: int
    alphabet_size: int
    neighborhood: tuple
    table: dict
    sidedness: str = TWO_SIDED

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        if self.sidedness not in (ONE_SIDED, TWO_SIDED):
            raise ValueError(f"unknown sidedness {self.sidedness!r}")
        nbhd = tuple(self.neighborhood)
        object.__setattr__(self, "neighborhood", nbhd)
        if not nbhd:
            raise ValueError("neighborhood must be nonempty")
        if len(set(nbhd)) != len(nbhd):
            raise ValueError("neighborhood offsets must be distinct")
        for off in nbhd:
            if self.dimension == 1:
                if not isinstance(off, int):
                    raise ValueError(f"1d offsets must be ints, got {off!r}")
            else:
                if not (isinstance(off, tuple) and len(off) == 2
                        and all(isinstance(c, int) for c in off)):
                    raise ValueError(f"2d offsets must be (dx, dy) pairs, got {off!r}")
        if self.dimension == 2 and self.sidedness != TWO_SIDED:
            raise ValueError("2-dimensional rules are always two-sided")
        if self.sidedness == ONE_SIDED and min(nbhd) < 0:
            raise ValueError("one-sided rules need all offsets >= 0")
        size = self.alphabet_size ** len(nbhd)
        if len(self.table) != size:
            raise ValueError(
                f"rule table must be total: expected {size} entries, "
                f"got {len(self.table)}")
        for pattern, value in self.table.items():
            if len(pattern) != len(nbhd):
                raise ValueError(f"pattern {pattern!r} does not match neighborhood")
            if not all(isinstance(s, int) and 0 <= s < self.alphabet_size
                       for s in pattern):
                raise ValueError(f"pattern {pattern!r} leaves the alphabet")
            if not (isinstance(value, int) and 0 <= value < self.alphabet_size):
                raise ValueError(f"value {value!r} leaves the alphabet")

    @property
    def radius(self) -> int:
        return max(_offset_norm(off) for off in self.neighborhood)


@dataclass(frozen=True)
class WindowConfig:
    """A finite window of cells; ``None`` marks an undetermined cell.

    1-dimensional: ``shape == (width,)`` and ``cells`` is a flat tuple.
    2-dimensional: ``shape == (width, height)`` and ``cells`` is a tuple of
    row tuples.
    """

    dimension: int
    shape: tuple
    boundary: str
    cells: tuple

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.boundary not in (PERIODIC, ABSENT):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.dimension == 1:
            if len(self.shape) != 1 or self.shape[0] < 1:
                raise ValueError(f"bad 1d shape {self.shape!r}")
            if len(self.cells) != self.shape[0]:
                raise ValueError("cells do not match shape")
        else:
            if len(self.shape) != 2 or min(self.shape) < 1:
                raise ValueError(f"bad 2d shape {self.shape!r}")
            w, h = self.shape
            if len(self.cells) != h or any(len(row) != w for row in self.cells):
                raise ValueError("cells do not match shape")


def window1d(word, boundary: str = PERIODIC) -> WindowConfig:
    """Build a 1-dimensional window from a digit string or an int sequence.

    In strings, ``.`` marks an undetermined cell.
    """
    if isinstance(word, str):
        cells = tuple(None if ch == "." else int(ch) for ch in word)
    else:
        cells = tuple(word)
    return WindowConfig(1, (len(cells),), boundary, cells)


def window2d(rows, boundary: str = PERIODIC) -> WindowConfig:
    """Build a 2-dimensional window from row strings or int-row sequences."""
    grid = []
    for row in rows:
        if isinstance(row, str):
            grid.append(tuple(None if ch == "." else int(ch) for ch in row))
        else:
            grid.append(tuple(row))
    cells = tuple(grid)
    return WindowConfig(2, (len(cells[0]), len(cells)), boundary, cells)


def word_string(cfg: WindowConfig) -> str:
    """Render a 1-dimensional window as digits (``.`` for undetermined)."""
    if cfg.dimension != 1:
        raise ValueError("word_string needs a 1-dimensional window")
    return "".join("." if c is None else str(c) for c in cfg.cells)


@dataclass(frozen=True)
class SpaceTimeDiagram:
    """Successive windows of an orbit, row 0 first, plus determined extents.

    ``valid_region[i]`` is ``(lo, hi)`` (half open) in dimension 1 and
    ``((xlo, xhi), (ylo, yhi))`` in dimension 2, covering the determined
    cells of row ``i``.
    """

    rows: tuple
    valid_region: tuple
    alphabet_size: int


def _check_window_alphabet(rule: RuleTable, cfg: WindowConfig) -> None:
    if rule.dimension != cfg.dimension:
        raise ValueError(
            f"dimension mismatch: rule is {rule.dimension}d, window is "
            f"{cfg.dimension}d")
    cells = cfg.cells if cfg.dimension == 1 else [c for row in cfg.cells for c in row]
    for c in cells:
        if c is not None and not (0 <= c < rule.alphabet_size):
            raise ValueError(
                f"cell state {c} outside alphabet of size {rule.alphabet_size}")


def apply(rule: RuleTable, cfg: WindowConfig) -> WindowConfig:
    """One synchronous step of ``rule`` on ``cfg``.

    Periodic windows wrap offsets; absent-boundary windows mark any cell
    whose neighborhood escapes the window (or hits an undetermined cell) as
    undetermined.  A step whose output has no determined cell at all raises.
    """
    _check_window_alphabet(rule, cfg)
    if cfg.dimension == 1:
        (w,) = cfg.shape
        cells = cfg.cells
        out = []
        for i in range(w):
            pattern = []
            for off in rule.neighborhood:
                j = i + off
                if cfg.boundary == PERIODIC:
                    pattern.append(cells[j % w])
                elif 0 <= j < w:
                    pattern.append(cells[j])
                else:
                    pattern = None
                    break
            if pattern is None or any(p is None for p in pattern):
                out.append(None)
            else:
                out.append(rule.table[tuple(pattern)])
        new = tuple(out)
    else:
        w, h = cfg.shape
        cells = cfg.cells
        rows = []
        for y in range(h):
            row = []
            for x in range(w):
                pattern = []
                for dx, dy in rule.neighborhood:
                    px, py = x + dx, y + dy
                    if cfg.boundary == PERIODIC:
                        pattern.append(cells[py % h][px % w])
                    elif 0 <= px < w and 0 <= py < h:
                        pattern.append(cells[py][px])
                    else:
                        pattern = None
                        break
                if pattern is None or any(p is None for p in pattern):
                    row.append(None)
                else:
                    row.append(rule.table[tuple(pattern)])
            rows.append(tuple(row))
        new = tuple(rows)
    result = WindowConfig(cfg.dimension, cfg.shape, cfg.boundary, new)
    if _extent(result) is None:
        raise ValueError("window fully undetermined after one step")
    return result


def _extent(cfg: WindowConfig):
    """Bounding extent of the determined cells, or ``None`` if there are none."""
    if cfg.dimension == 1:
        idx = [i for i, c in enumerate(cfg.cells) if c is not None]
        if not idx:
            return None
        return (min(idx), max(idx) + 1)
    pts = [(x, y) for y, row in enumerate(cfg.cells)
           for x, c in enumerate(row) if c is not None]
    if not pts:
        return None
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return ((min(xs), max(xs) + 1), (min(ys), max(ys) + 1))


def iterate(rule: RuleTable, cfg: WindowConfig, t: int) -> SpaceTimeDiagram:
    """Run ``t`` steps and collect the ``t + 1`` windows, initial row first."""
    if t < 0:
        raise ValueError("t must be >= 0")
    _check_window_alphabet(rule, cfg)
    rows = [cfg]
    for _ in range(t):
        rows.append(apply(rule, rows[-1]))
    region = tuple(_extent(row) for row in rows)
    if any(r is None for r in region):
        raise ValueError("window fully undetermined")
    return SpaceTimeDiagram(tuple(rows), region, rule.alphabet_size)


def _add_offsets(a, b):
    if isinstance(a, tuple):
        return (a[0] + b[0], a[1] + b[1])
    return a + b


def _sorted_offsets(offs):
    return tuple(sorted(offs))


def _projector(big: tuple, small: tuple):
    """Map patterns over offsets ``big`` to patterns over ``small``."""
    pos = {off: i for i, off in enumerate(big)}
    idxs = [pos[off] for off in small]
    if len(idxs) == 1:
        i = idxs[0]
        return lambda p: (p[i],)
    return itemgetter(*idxs)


def extend_rule(rule: RuleTable, offsets) -> RuleTable:
    """Rewrite ``rule`` over a superset neighborhood (same behaviour)."""
    offsets = _sorted_offsets(offsets)
    if not set(rule.neighborhood) <= set(offsets):
        raise ValueError("offsets must contain the rule's neighborhood")
    if offsets == rule.neighborhood:
        return rule
    proj = _projector(offsets, rule.neighborhood)
    table = {}
    for pattern in itertools.product(range(rule.alphabet_size), repeat=len(offsets)):
        table[pattern] = rule.table[proj(pattern)]
    sided = rule.sidedness
    if sided == ONE_SIDED and min(offsets) < 0:
        raise ValueError("cannot extend a one-sided rule to negative offsets")
    return RuleTable(rule.dimension, rule.alphabet_size, offsets, table, sided)


def _check_composable(a: RuleTable, b: RuleTable) -> None:
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    if a.alphabet_size != b.alphabet_size:
        raise ValueError("alphabet mismatch")
    if a.sidedness != b.sidedness:
        raise ValueError("sidedness mismatch")


def compose(outer: RuleTable, inner: RuleTable) -> RuleTable:
    """The rule acting as ``outer`` after ``inner`` (``outer`` reads last).

    The composed neighborhood is the Minkowski sum of the two neighborhoods.
    """
    _check_composable(outer, inner)
    offs = {_add_offsets(o1, o2)
            for o1 in outer.neighborhood for o2 in inner.neighborhood}
    offsets = _sorted_offsets(offs)
    pos = {off: i for i, off in enumerate(offsets)}
    getters = []
    for o1 in outer.neighborhood:
        idxs = [pos[_add_offsets(o1, o2)] for o2 in inner.neighborhood]
        if len(idxs) == 1:
            i = idxs[0]
            getters.append(lambda p, i=i: (p[i],))
        else:
            getters.append(itemgetter(*idxs))
    k = outer.alphabet_size
    inner_table = inner.table
    outer_table = outer.table
    table = {}
    for pattern in itertools.product(range(k), repeat=len(offsets)):
        mid = tuple(inner_table[g(pattern)] for g in getters)
        table[pattern] = outer_table[mid]
    return RuleTable(outer.dimension, k, offsets, table, outer.sidedness)


def product(first: RuleTable, second: RuleTable) -> RuleTable:
    """Run two rules side by side on the product alphabet.

    A product state encodes the pair ``(s1, s2)`` as ``s1 * k2 + s2``.  The
    neighborhood is the union of the two neighborhoods.
    """
    if first.dimension != second.dimension:
        raise ValueError("dimension mismatch")
    if first.sidedness != second.sidedness:
        raise ValueError("sidedness mismatch")
    offsets = _sorted_offsets(set(first.neighborhood) | set(second.neighborhood))
    k1, k2 = first.alphabet_size, second.alphabet_size
    proj1 = _projector(offsets, first.neighborhood)
    proj2 = _projector(offsets, second.neighborhood)
    table = {}
    for pattern in itertools.product(range(k1 * k2), repeat=len(offsets)):
        firsts = tuple(s // k2 for s in pattern)
        seconds = tuple(s % k2 for s in pattern)
        v1 = first.table[proj1(firsts)]
        v2 = second.table[proj2(seconds)]
        table[pattern] = v1 * k2 + v2
    return RuleTable(first.dimension, k1 * k2, offsets, table, first.sidedness)


def pair_state(s1: int, s2: int, k2: int) -> int:
    """Encode the product-alphabet state ``(s1, s2)`` with second size ``k2``."""
    return s1 * k2 + s2


def split_state(s: int, k2: int) -> tuple:
    """Decode a product-alphabet state into its ``(s1, s2)`` pair."""
    return (s // k2, s % k2)


def equal_ca(a: RuleTable, b: RuleTable) -> bool:
    """Whether two rules define the same global map (table-level check)."""
    _check_composable(a, b)
    offsets = _sorted_offsets(set(a.neighborhood) | set(b.neighborhood))
    ea = extend_rule(a, offsets)
    eb = extend_rule(b, offsets)
    return ea.table == eb.table


def identity_rule(alphabet_size: int, dimension: int = 1,
                  sidedness: str = ONE_SIDED) -> RuleTable:
    if dimension == 2:
        sidedness = TWO_SIDED
    off = (0, 0) if dimension == 2 else 0
    table = {(s,): s for s in range(alphabet_size)}
    return RuleTable(dimension, alphabet_size, (off,), table, sidedness)


def constant_rule(alphabet_size: int, value: int, neighborhood=(0, 1),
                  sidedness: str = ONE_SIDED) -> RuleTable:
    table = {p: value
             for p in itertools.product(range(alphabet_size),
                                        repeat=len(neighborhood))}
    return RuleTable(1, alphabet_size, tuple(neighborhood), table, sidedness)


def rotate(cfg: WindowConfig, by) -> WindowConfig:
    """Cyclically shift a periodic window: cell ``i`` moves to ``i - by``.

    ``by`` is an int in dimension 1 and a ``(dx, dy)`` pair in dimension 2.
    """
    if cfg.boundary != PERIODIC:
        raise ValueError("rotate is only defined for periodic windows")
    if cfg.dimension == 1:
        (w,) = cfg.shape
        cells = tuple(cfg.cells[(i + by) % w] for i in range(w))
    else:
        w, h = cfg.shape
        dx, dy = by
        cells = tuple(tuple(cfg.cells[(y + dy) % h][(x + dx) % w]
                            for x in range(w))
                      for y in range(h))
    return WindowConfig(cfg.dimension, cfg.shape, cfg.boundary, cells)
