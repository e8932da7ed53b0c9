"""Oriented two-dimensional windows and the conveyor dynamics along paths.

A first layer of states orients the window: every state points one step
up, down, left or right, and a set of valid square patterns marks where the
orientation is trusted.  Cells chain into simple paths (or cycles) wherever
arrows neither branch nor collide; a second layer of data then rides along
those paths.

The riding data is a quadruple per cell, read as two tapes: a forward tape
``(a, b)`` and a return tape ``(x, y)`` running the other way, so a path of
length k carries a loop of 2k two-track letters.  The path automata below
rotate that loop; the plain variant closes the loop directly, the twisted
variant flips the two tracks where the tape folds back at the end of the
path.  The folded-tape map re-blocks the same loop so that one twist-squared
step matches one plain step, and a three-state variant rides single states
instead of quadruples, advancing them by the reversible permutation family.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import ABSENT, PERIODIC
from .onesided import family_021

ROLE_INVALID = "invalid"
ROLE_BEGIN = "begin"
ROLE_MIDDLE = "middle"
ROLE_END = "end"
ROLE_BEGIN_END = "begin-and-end"

_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1))

BRANCH_ALL = "all"
BRANCH_PATTERN_VALID = "pattern-valid"

VARIANT_SHIFT = "shift"
VARIANT_MOBIUS = "mobius"
VARIANT_ZOT = "zot"


@dataclass(frozen=True)
class Orientation:
    """Per-state arrows plus the square patterns the arrows are trusted on.

    ``direction[s]`` is the ``(dx, dy)`` step of state ``s`` (y grows
    downwards); ``valid_patterns`` holds ``pattern_size`` x ``pattern_size``
    tuples of rows.
    """

    alphabet_size: int
    pattern_size: int
    direction: tuple
    valid_patterns: frozenset

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(tuple(d) for d in self.direction))
        object.__setattr__(self, "valid_patterns",
                           frozenset(tuple(tuple(row) for row in p)
                                     for p in self.valid_patterns))
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        if self.pattern_size < 1:
            raise ValueError("pattern_size must be positive")
        if len(self.direction) != self.alphabet_size:
            raise ValueError("need one direction per state")
        for d in self.direction:
            if d not in _DIRECTIONS:
                raise ValueError(f"direction {d!r} is not a unit step")
        n = self.pattern_size
        for p in self.valid_patterns:
            if len(p) != n or any(len(row) != n for row in p):
                raise ValueError(f"pattern {p!r} is not {n}x{n}")
            if any(not 0 <= c < self.alphabet_size for row in p for c in row):
                raise ValueError(f"pattern {p!r} leaves the alphabet")


def _grid_shape(grid):
    h = len(grid)
    if h == 0:
        raise ValueError("empty grid")
    w = len(grid[0])
    if any(len(row) != w for row in grid):
        raise ValueError("ragged grid")
    return w, h


class _Analysis:
    """Shared per-window facts: arrow targets, validity, ok cells."""

    def __init__(self, o: Orientation, grid, boundary: str, branching: str):
        if boundary not in (ABSENT, PERIODIC):
            raise ValueError(f"unknown boundary {boundary!r}")
        if branching not in (BRANCH_ALL, BRANCH_PATTERN_VALID):
            raise ValueError(f"unknown branching mode {branching!r}")
        grid = tuple(tuple(row) for row in grid)
        w, h = _grid_shape(grid)
        for row in grid:
            for c in row:
                if not 0 <= c < o.alphabet_size:
                    raise ValueError(f"cell state {c} outside the alphabet")
        self.grid = grid
        self.w, self.h = w, h
        self.boundary = boundary
        coords = [(x, y) for y in range(h) for x in range(w)]
        self.coords = coords

        n = o.pattern_size
        self.pattern_ok = {}
        for x, y in coords:
            if boundary == ABSENT and (x + n > w or y + n > h):
                self.pattern_ok[(x, y)] = False
                continue
            pat = tuple(tuple(grid[(y + dy) % h][(x + dx) % w]
                              for dx in range(n))
                        for dy in range(n))
            self.pattern_ok[(x, y)] = pat in o.valid_patterns

        # Arrow targets; under absent boundary a target may fall outside the
        # window, which still counts for collision purposes.
        self.target = {}
        for x, y in coords:
            dx, dy = o.direction[grid[y][x]]
            tx, ty = x + dx, y + dy
            if boundary == PERIODIC:
                tx, ty = tx % w, ty % h
            self.target[(x, y)] = (tx, ty)

        # Collision counts: how many (relevant) cells aim at each target.
        hits = {}
        for p in coords:
            if branching == BRANCH_PATTERN_VALID and not self.pattern_ok[p]:
                continue
            hits.setdefault(self.target[p], 0)
            hits[self.target[p]] += 1
        self.ok = {}
        for p in coords:
            self.ok[p] = self.pattern_ok[p] and hits[self.target[p]] == 1

        self.inside = lambda q: 0 <= q[0] < w and 0 <= q[1] < h

    def successor(self, p):
        """The ok successor of an ok cell, or None."""
        q = self.target[p]
        if not self.inside(q):
            return None
        return q if self.ok[q] else None

    def predecessor_exists(self, p):
        return any(self.ok[q] and self.target[q] == p
                   for q in self.coords if q != p)


def classify_cells(o: Orientation, grid, boundary: str = ABSENT,
                   branching: str = BRANCH_ALL) -> dict:
    """Role of every cell: invalid, begin, middle, end, or begin-and-end.

    A cell is on a path (not invalid) when its pattern is valid and no other
    cell's arrow collides with its own target; ``branching`` controls
    whether invalid cells' arrows can collide (``"all"``, the default) or
    only trusted ones (``"pattern-valid"``).
    """
    a = _Analysis(o, grid, boundary, branching)
    roles = {}
    for p in a.coords:
        if not a.ok[p]:
            roles[p] = ROLE_INVALID
            continue
        has_succ = a.successor(p) is not None
        has_pred = a.predecessor_exists(p)
        if has_pred and has_succ:
            roles[p] = ROLE_MIDDLE
        elif has_pred:
            roles[p] = ROLE_END
        elif has_succ:
            roles[p] = ROLE_BEGIN
        else:
            roles[p] = ROLE_BEGIN_END
    return roles


@dataclass(frozen=True)
class PathDecomposition:
    """Roles plus the maximal simple paths and cycles of the ok cells."""

    roles: dict
    paths: tuple
    cycles: tuple
    acyclic: bool


def extract_paths(o: Orientation, grid, boundary: str = ABSENT,
                  branching: str = BRANCH_ALL) -> PathDecomposition:
    """Chase arrows from every begin cell; leftover ok cells form cycles.

    Paths are listed by their begin cell in row-major order, cycles by
    their smallest cell (row-major), starting at that cell.
    """
    a = _Analysis(o, grid, boundary, branching)
    roles = classify_cells(o, grid, boundary, branching)
    paths = []
    seen = set()
    for p in a.coords:
        if roles[p] not in (ROLE_BEGIN, ROLE_BEGIN_END):
            continue
        path = [p]
        seen.add(p)
        q = a.successor(p)
        while q is not None:
            if q in path:
                raise AssertionError("path revisited a cell")
            path.append(q)
            seen.add(q)
            q = a.successor(q)
        paths.append(tuple(path))
    cycles = []
    for p in a.coords:
        if not a.ok[p] or p in seen:
            continue
        cyc = [p]
        seen.add(p)
        q = a.successor(p)
        while q != p:
            cyc.append(q)
            seen.add(q)
            q = a.successor(q)
        start = min(range(len(cyc)), key=lambda i: (cyc[i][1], cyc[i][0]))
        cycles.append(tuple(cyc[start:] + cyc[:start]))
    key = lambda cells: (cells[0][1], cells[0][0])
    return PathDecomposition(roles, tuple(sorted(paths, key=key)),
                             tuple(sorted(cycles, key=key)),
                             not cycles)


def word_shift(word) -> tuple:
    """Rotate a loop of two-track letters one step: the head pair wraps."""
    word = tuple(tuple(p) for p in word)
    if not word:
        raise ValueError("word must be nonempty")
    return word[1:] + (word[0],)


def word_mobius(word) -> tuple:
    """Rotate like :func:`word_shift` but swap the tracks of the wrapped pair."""
    word = tuple(tuple(p) for p in word)
    if not word:
        raise ValueError("word must be nonempty")
    u, v = word[0]
    return word[1:] + ((v, u),)


def word_phi(word) -> tuple:
    """Re-block an even-length loop: track-of-halves to interleaving.

    Position ``2i`` of the result pairs the first-track letters ``i`` and
    ``n + i`` of the input, position ``2i + 1`` the second-track ones, where
    ``2n`` is the length.  Two twisted rotations of the output correspond to
    one plain rotation of the input.
    """
    word = tuple(tuple(p) for p in word)
    if len(word) % 2 != 0:
        raise ValueError("word length must be even")
    n = len(word) // 2
    out = []
    for i in range(n):
        out.append((word[i][0], word[n + i][0]))
        out.append((word[i][1], word[n + i][1]))
    return tuple(out)


def word_phi_inverse(word) -> tuple:
    """Invert :func:`word_phi`."""
    word = tuple(tuple(p) for p in word)
    if len(word) % 2 != 0:
        raise ValueError("word length must be even")
    n = len(word) // 2
    first = [None] * (2 * n)
    second = [None] * (2 * n)
    for i in range(n):
        first[i], first[n + i] = word[2 * i]
        second[i], second[n + i] = word[2 * i + 1]
    return tuple(zip(first, second))


@dataclass(frozen=True)
class PathLayerConfig:
    """An orientation layer plus the data layer riding on it.

    Quadruple form: every b cell is ``(a, b, x, y)`` over ``range(b2_size)``
    with ``b2_size >= 2``.  Single form (``b2_size is None``): every b cell
    is one state in {0, 1, 2} for the reversible-family variant.
    """

    shape: tuple
    a_layer: tuple
    b_layer: tuple
    b2_size: int | None = None

    def __post_init__(self):
        a = tuple(tuple(row) for row in self.a_layer)
        b = tuple(tuple(tuple(c) if isinstance(c, (tuple, list)) else c
                        for c in row)
                  for row in self.b_layer)
        object.__setattr__(self, "a_layer", a)
        object.__setattr__(self, "b_layer", b)
        object.__setattr__(self, "shape", tuple(self.shape))
        w, h = self.shape
        if _grid_shape(a) != (w, h) or _grid_shape(b) != (w, h):
            raise ValueError("layer shapes do not match")
        if self.b2_size is not None:
            if self.b2_size < 2:
                raise ValueError("b2_size must be >= 2")
            for row in b:
                for c in row:
                    if not (isinstance(c, tuple) and len(c) == 4
                            and all(0 <= v < self.b2_size for v in c)):
                        raise ValueError(
                            f"b cell {c!r} is not a quadruple over "
                            f"range({self.b2_size})")
        else:
            for row in b:
                for c in row:
                    if c not in (0, 1, 2):
                        raise ValueError(
                            f"b cell {c!r} is not a state in {{0, 1, 2}}")


def loop_word(cfg: PathLayerConfig, path) -> tuple:
    """The 2k-letter loop carried by a path: return tape reversed, then
    forward tape."""
    cells = [cfg.b_layer[y][x] for x, y in path]
    back = [(x, y) for _, _, x, y in reversed(cells)]
    fore = [(a, b) for a, b, _, _ in cells]
    return tuple(back + fore)


def _split_loop(word, path):
    """Write a loop back into per-cell quadruples along ``path``."""
    k = len(path)
    out = {}
    for i, p in enumerate(path):
        x, y = word[k - 1 - i]
        a, b = word[k + i]
        out[p] = (a, b, x, y)
    return out


def apply_path_ca(o: Orientation, cfg: PathLayerConfig, variant: str,
                  boundary: str = ABSENT,
                  branching: str = BRANCH_ALL) -> PathLayerConfig:
    """One step of a path automaton on the data layer.

    ``"shift"`` and ``"mobius"`` act on quadruple cells, conveying the
    forward tape towards the end of each path and the return tape back;
    ``"mobius"`` swaps the two tapes where the path folds back.  ``"zot"``
    acts on single three-state cells, permuting each by the permutation its
    successor selects, with the fixed full-cycle permutation at path ends.
    Cells off the paths (and the whole a layer) are left untouched; cycles
    are fine, their cells all count as middles.
    """
    if variant not in (VARIANT_SHIFT, VARIANT_MOBIUS, VARIANT_ZOT):
        raise ValueError(f"unknown variant {variant!r}")
    quad = cfg.b2_size is not None
    if variant == VARIANT_ZOT and quad:
        raise ValueError("the zot variant rides single states, not quadruples")
    if variant != VARIANT_ZOT and not quad:
        raise ValueError(f"the {variant} variant rides quadruples")
    a = _Analysis(o, cfg.a_layer, boundary, branching)
    roles = classify_cells(o, cfg.a_layer, boundary, branching)
    b = [list(row) for row in cfg.b_layer]

    def cell(p):
        return cfg.b_layer[p[1]][p[0]]

    perms = family_021().perms
    updates = {}
    for p in a.coords:
        role = roles[p]
        if role == ROLE_INVALID:
            continue
        e = cell(p)
        succ = a.successor(p)
        if variant == VARIANT_ZOT:
            selector = cell(succ) if succ is not None else 1
            updates[p] = perms[selector][e]
            continue
        if role == ROLE_BEGIN_END:
            if variant == VARIANT_SHIFT:
                updates[p] = (e[2], e[3], e[0], e[1])
            else:
                updates[p] = (e[3], e[2], e[0], e[1])
        elif role == ROLE_BEGIN:
            s = cell(succ)
            updates[p] = (s[0], s[1], e[0], e[1])
        elif role == ROLE_MIDDLE:
            s = cell(succ)
            d = cell(_predecessor(a, p))
            updates[p] = (s[0], s[1], d[2], d[3])
        else:  # end
            d = cell(_predecessor(a, p))
            if variant == VARIANT_SHIFT:
                updates[p] = (e[2], e[3], d[2], d[3])
            else:
                updates[p] = (e[3], e[2], d[2], d[3])
    for (x, y), value in updates.items():
        b[y][x] = value
    return PathLayerConfig(cfg.shape, cfg.a_layer,
                           tuple(tuple(row) for row in b), cfg.b2_size)


def _predecessor(a: _Analysis, p):
    for q in a.coords:
        if q != p and a.ok[q] and a.target[q] == p:
            return q
    raise AssertionError(f"cell {p} has no predecessor")


def apply_hphi(o: Orientation, cfg: PathLayerConfig,
               boundary: str = ABSENT,
               branching: str = BRANCH_ALL) -> PathLayerConfig:
    """Re-block every path's loop with :func:`word_phi` in place.

    After this map, one plain rotation of the original loop corresponds to
    two twisted rotations, so it intertwines the shift variant with the
    squared mobius variant.  Cycles have no fold point and therefore no
    unambiguous loop; windows containing one are rejected.
    """
    if cfg.b2_size is None:
        raise ValueError("the folded-tape map rides quadruples")
    deco = extract_paths(o, cfg.a_layer, boundary, branching)
    if not deco.acyclic:
        raise ValueError("cyclic component: folded-tape extent is ambiguous")
    b = [list(row) for row in cfg.b_layer]
    for path in deco.paths:
        new = _split_loop(word_phi(loop_word(cfg, path)), path)
        for (x, y), value in new.items():
            b[y][x] = value
    return PathLayerConfig(cfg.shape, cfg.a_layer,
                           tuple(tuple(row) for row in b), cfg.b2_size)
