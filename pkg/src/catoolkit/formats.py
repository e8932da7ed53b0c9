"""Plain-text document formats and space-time rendering.

Every document is UTF-8 text where ``#`` starts a comment running to the
end of the line.  Each kind of object has a ``parse_*`` / ``serialize_*``
pair, and serializers emit a canonical form that parses back to an equal
object.  Documents start with a ``kind:`` entry (``ca1d``, ``ca2d``,
``permfam``, ``orientation``, ``pathconfig``); trace dumps instead start
with their ``trace n=... t=... count=...`` header.
"""

from __future__ import annotations

import itertools
import re

from .core import ONE_SIDED, TWO_SIDED, RuleTable, SpaceTimeDiagram
from .onesided import PermutationFamily
from .oriented import Orientation, PathLayerConfig
from .trace import TraceSet


class ParseError(ValueError):
    """A document does not match its declared format."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _lines(text: str):
    """Comment-stripped ``(line_number, content)`` pairs, blanks kept."""
    return [(no, raw.split("#", 1)[0].strip())
            for no, raw in enumerate(text.splitlines(), start=1)]


def _header(no: int, line: str):
    key, sep, value = line.partition(":")
    if not sep:
        raise ParseError(f"expected 'key: value', got {line!r}", no)
    return key.strip(), value.strip()


def _int(token: str, no: int, what: str = "integer") -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", no) from None


def _read_headers(entries, terminator: str):
    """Read ``key: value`` lines up to ``terminator:``; return (dict, index)."""
    head = {}
    for idx, (no, ln) in enumerate(entries):
        key, value = _header(no, ln)
        if key == terminator:
            if value:
                raise ParseError(f"'{terminator}:' must end its line", no)
            return head, idx + 1
        if key in head:
            raise ParseError(f"duplicate {key!r} entry", no)
        head[key] = (no, value)
    raise ParseError(f"missing '{terminator}:' section")


def _need(head: dict, key: str):
    if key not in head:
        raise ParseError(f"missing '{key}:' entry")
    return head.pop(key)


def _reject_extras(head: dict) -> None:
    for key, (no, _value) in head.items():
        raise ParseError(f"unexpected entry {key!r}", no)


def _parse_row(line: str, no: int, width: int, alphabet: int | None):
    """A grid row: contiguous digits, or whitespace-separated states."""
    tokens = line.split() if " " in line else list(line)
    if len(tokens) != width:
        raise ParseError(f"expected {width} states, got {len(tokens)}", no)
    row = tuple(_int(tok, no, "state") for tok in tokens)
    if alphabet is not None:
        for c in row:
            if not 0 <= c < alphabet:
                raise ParseError(
                    f"state {c} outside alphabet of size {alphabet}", no)
    return row


def _row_text(row, wide: bool) -> str:
    return " ".join(map(str, row)) if wide else "".join(map(str, row))


def document_kind(text: str) -> str:
    """The ``kind:`` value of a document (its first non-blank entry)."""
    for no, line in _lines(text):
        if not line:
            continue
        key, value = _header(no, line)
        if key != "kind":
            raise ParseError(f"first entry must be 'kind:', got {key!r}", no)
        if not value:
            raise ParseError("empty kind", no)
        return value
    raise ParseError("empty document")


# ---------------------------------------------------------------------------
# rule tables


_PAIR = re.compile(r"^\((-?\d+),(-?\d+)\)$")


def _parse_offsets1(value: str, no: int) -> tuple:
    offsets = tuple(_int(tok, no, "offset") for tok in value.split())
    if not offsets:
        raise ParseError("empty neighborhood", no)
    if len(set(offsets)) != len(offsets):
        raise ParseError("repeated neighborhood offset", no)
    return offsets


def _parse_offsets2(value: str, no: int) -> tuple:
    offsets = []
    for tok in value.split():
        m = _PAIR.match(tok)
        if not m:
            raise ParseError(f"expected '(x,y)' offset, got {tok!r}", no)
        offsets.append((int(m.group(1)), int(m.group(2))))
    if not offsets:
        raise ParseError("empty neighborhood", no)
    if len(set(offsets)) != len(offsets):
        raise ParseError("repeated neighborhood offset", no)
    return tuple(offsets)


def parse_rule(text: str) -> RuleTable:
    """Parse a ``ca1d`` / ``ca2d`` document into a :class:`RuleTable`."""
    entries = [e for e in _lines(text) if e[1]]
    head, body_at = _read_headers(entries, "rule")
    no_k, kind = _need(head, "kind")
    if kind not in ("ca1d", "ca2d"):
        raise ParseError(f"kind {kind!r} is not a rule table", no_k)
    dimension = 1 if kind == "ca1d" else 2
    no_a, alpha = _need(head, "alphabet")
    alphabet = _int(alpha, no_a, "alphabet size")
    if alphabet < 1:
        raise ParseError("alphabet size must be positive", no_a)
    if dimension == 1:
        no_s, sided = _need(head, "sided")
        if sided not in (ONE_SIDED, TWO_SIDED):
            raise ParseError(f"sided must be 'one' or 'two', got {sided!r}",
                             no_s)
        sidedness = sided
    else:
        if "sided" in head:
            no_s, _ = head.pop("sided")
            raise ParseError("'sided:' applies to ca1d only", no_s)
        sidedness = TWO_SIDED
    no_n, nb = _need(head, "neighborhood")
    neighborhood = (_parse_offsets1(nb, no_n) if dimension == 1
                    else _parse_offsets2(nb, no_n))
    _reject_extras(head)

    m = len(neighborhood)
    table = {}
    for no, ln in entries[body_at:]:
        parts = ln.split()
        if len(parts) != m + 2 or parts[-2] != "->":
            raise ParseError(
                f"expected '{m} states -> state', got {ln!r}", no)
        pattern = tuple(_int(tok, no, "state") for tok in parts[:m])
        for c in pattern + (_int(parts[-1], no, "state"),):
            if not 0 <= c < alphabet:
                raise ParseError(
                    f"state {c} outside alphabet of size {alphabet}", no)
        if pattern in table:
            raise ParseError(
                "duplicate pattern " + " ".join(parts[:m]), no)
        table[pattern] = int(parts[-1])
    if len(table) != alphabet ** m:
        missing = next(p for p in
                       itertools.product(range(alphabet), repeat=m)
                       if p not in table)
        raise ParseError("missing pattern " + " ".join(map(str, missing)))
    try:
        return RuleTable(dimension, alphabet, neighborhood, table, sidedness)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_rule(rule: RuleTable) -> str:
    lines = [f"kind: ca{rule.dimension}d", f"alphabet: {rule.alphabet_size}"]
    if rule.dimension == 1:
        lines.append(f"sided: {rule.sidedness}")
        lines.append("neighborhood: "
                     + " ".join(str(off) for off in rule.neighborhood))
    else:
        lines.append("neighborhood: "
                     + " ".join(f"({x},{y})" for x, y in rule.neighborhood))
    lines.append("rule:")
    for pattern in sorted(rule.table):
        lines.append(" ".join(map(str, pattern))
                     + f" -> {rule.table[pattern]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# permutation families


def parse_permutation_family(text: str) -> PermutationFamily:
    head = {}
    perms = {}
    for no, ln in _lines(text):
        if not ln:
            continue
        key, value = _header(no, ln)
        if key.startswith("perm"):
            parts = key.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'perm <state>:', got {key!r}", no)
            a = _int(parts[1], no, "state")
            if a in perms:
                raise ParseError(f"duplicate 'perm {a}:' entry", no)
            perms[a] = (no, tuple(_int(tok, no, "image")
                                  for tok in value.split()))
        elif key in head:
            raise ParseError(f"duplicate {key!r} entry", no)
        else:
            head[key] = (no, value)
    no_k, kind = _need(head, "kind")
    if kind != "permfam":
        raise ParseError(f"kind {kind!r} is not a permutation family", no_k)
    no_a, alpha = _need(head, "alphabet")
    k = _int(alpha, no_a, "alphabet size")
    _reject_extras(head)
    for a in range(k):
        if a not in perms:
            raise ParseError(f"missing 'perm {a}:' entry")
    for a, (no, _images) in perms.items():
        if not 0 <= a < k:
            raise ParseError(f"perm state {a} outside alphabet", no)
    try:
        return PermutationFamily(k, tuple(perms[a][1] for a in range(k)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_permutation_family(family: PermutationFamily) -> str:
    lines = ["kind: permfam", f"alphabet: {family.alphabet_size}"]
    for a, perm in enumerate(family.perms):
        lines.append(f"perm {a}: " + " ".join(map(str, perm)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# orientations


def parse_orientation(text: str) -> Orientation:
    all_lines = _lines(text)
    head = {}
    dirs = {}
    valid_at = None
    for i, (no, ln) in enumerate(all_lines):
        if not ln:
            continue
        key, value = _header(no, ln)
        if key == "valid":
            if value:
                raise ParseError("'valid:' must end its line", no)
            valid_at = i + 1
            break
        if key.startswith("dir"):
            parts = key.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'dir <state>:', got {key!r}", no)
            a = _int(parts[1], no, "state")
            if a in dirs:
                raise ParseError(f"duplicate 'dir {a}:' entry", no)
            step = value.split()
            if len(step) != 2:
                raise ParseError("direction needs exactly '<dx> <dy>'", no)
            dirs[a] = (no, (_int(step[0], no, "step"),
                            _int(step[1], no, "step")))
        elif key in head:
            raise ParseError(f"duplicate {key!r} entry", no)
        else:
            head[key] = (no, value)
    if valid_at is None:
        raise ParseError("missing 'valid:' section")
    no_k, kind = _need(head, "kind")
    if kind != "orientation":
        raise ParseError(f"kind {kind!r} is not an orientation", no_k)
    no_a, alpha = _need(head, "alphabet")
    k = _int(alpha, no_a, "alphabet size")
    no_p, psize = _need(head, "pattern_size")
    n = _int(psize, no_p, "pattern size")
    _reject_extras(head)
    for a in range(k):
        if a not in dirs:
            raise ParseError(f"missing 'dir {a}:' entry")
    for a, (no, _step) in dirs.items():
        if not 0 <= a < k:
            raise ParseError(f"dir state {a} outside alphabet", no)

    blocks = []
    current = []
    for no, ln in all_lines[valid_at:]:
        if not ln:
            if current:
                blocks.append(current)
                current = []
        else:
            current.append((no, ln))
    if current:
        blocks.append(current)
    patterns = set()
    for block in blocks:
        if len(block) != n:
            raise ParseError(f"pattern block must have {n} rows",
                             block[0][0])
        patterns.add(tuple(_parse_row(ln, no, n, k) for no, ln in block))
    try:
        return Orientation(k, n, tuple(dirs[a][1] for a in range(k)),
                           frozenset(patterns))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_orientation(o: Orientation) -> str:
    wide = o.alphabet_size > 10
    lines = ["kind: orientation", f"alphabet: {o.alphabet_size}",
             f"pattern_size: {o.pattern_size}"]
    for a, (dx, dy) in enumerate(o.direction):
        lines.append(f"dir {a}: {dx} {dy}")
    lines.append("valid:")
    for pattern in sorted(o.valid_patterns):
        lines.extend(_row_text(row, wide) for row in pattern)
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


# ---------------------------------------------------------------------------
# path-layer configurations


_QUAD = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def _parse_b_row(line: str, no: int, width: int, b2_size: int | None):
    if b2_size is not None:
        quads = _QUAD.findall(line)
        if len(quads) != width:
            raise ParseError(
                f"expected {width} quadruples, got {len(quads)}", no)
        leftover = _QUAD.sub("", line).replace(",", "").strip()
        if leftover:
            raise ParseError(f"stray text {leftover!r} in b_layer row", no)
        return tuple(tuple(int(v) for v in q) for q in quads)
    tokens = [tok.strip() for tok in line.split(",")]
    if len(tokens) != width:
        raise ParseError(
            f"expected {width} comma-separated states, got {len(tokens)}",
            no)
    return tuple(_int(tok, no, "state") for tok in tokens)


def parse_path_config(text: str) -> PathLayerConfig:
    entries = [e for e in _lines(text) if e[1]]
    head, a_at = _read_headers(entries, "a_layer")
    no_k, kind = _need(head, "kind")
    if kind != "pathconfig":
        raise ParseError(f"kind {kind!r} is not a path configuration", no_k)
    no_s, shape = _need(head, "shape")
    parts = shape.split()
    if len(parts) != 2:
        raise ParseError("shape needs exactly '<width> <height>'", no_s)
    w = _int(parts[0], no_s, "width")
    h = _int(parts[1], no_s, "height")
    if w < 1 or h < 1:
        raise ParseError("shape must be positive", no_s)
    b2_size = None
    if "b2" in head:
        no_b, b2 = head.pop("b2")
        b2_size = _int(b2, no_b, "track size")
    _reject_extras(head)

    rest = entries[a_at:]
    if len(rest) != 2 * h + 1:
        raise ParseError(
            f"expected {h} a_layer rows, 'b_layer:', {h} b_layer rows")
    a_rows = tuple(_parse_row(ln, no, w, None) for no, ln in rest[:h])
    no_m, marker = rest[h]
    if _header(no_m, marker) != ("b_layer", ""):
        raise ParseError(f"expected 'b_layer:', got {marker!r}", no_m)
    b_rows = tuple(_parse_b_row(ln, no, w, b2_size)
                   for no, ln in rest[h + 1:])
    try:
        return PathLayerConfig((w, h), a_rows, b_rows, b2_size)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_path_config(cfg: PathLayerConfig) -> str:
    w, h = cfg.shape
    lines = ["kind: pathconfig", f"shape: {w} {h}"]
    if cfg.b2_size is not None:
        lines.append(f"b2: {cfg.b2_size}")
    lines.append("a_layer:")
    wide = any(c > 9 for row in cfg.a_layer for c in row)
    lines.extend(_row_text(row, wide) for row in cfg.a_layer)
    lines.append("b_layer:")
    if cfg.b2_size is not None:
        for row in cfg.b_layer:
            lines.append(",".join("(%d,%d,%d,%d)" % c for c in row))
    else:
        for row in cfg.b_layer:
            lines.append(",".join(map(str, row)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# trace dumps


_TRACE_HEAD = re.compile(r"^trace n=(\d+) t=(\d+) count=(\d+)$")


def parse_trace(text: str) -> TraceSet:
    rule_id = None
    header = None
    patterns = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("rule:") and rule_id is None:
                rule_id = body[len("rule:"):].strip()
            continue
        if header is None:
            m = _TRACE_HEAD.match(line)
            if not m:
                raise ParseError(
                    "expected 'trace n=<n> t=<t> count=<p>' header", no)
            header = tuple(int(g) for g in m.groups())
            continue
        n, t, _count = header
        cells = ([_int(tok, no, "state") for tok in line.split()]
                 if " " in line else
                 [_int(ch, no, "state") for ch in line])
        if len(cells) != n * t:
            raise ParseError(
                f"pattern needs {n * t} cells, got {len(cells)}", no)
        patterns.append(tuple(tuple(cells[i * n:(i + 1) * n])
                              for i in range(t)))
    if header is None:
        raise ParseError("missing trace header")
    if len(set(patterns)) != len(patterns):
        raise ParseError("duplicate pattern in trace dump")
    n, t, count = header
    if len(patterns) != count:
        raise ParseError(
            f"header says count={count}, found {len(patterns)} patterns")
    return TraceSet(n, t, tuple(patterns), rule_id)


def serialize_trace(trace: TraceSet) -> str:
    lines = []
    if trace.rule_id is not None:
        lines.append(f"# rule: {trace.rule_id}")
    lines.append(f"trace n={trace.n} t={trace.t} count={len(trace)}")
    wide = any(c > 9 for p in trace.patterns for row in p for c in row)
    for pattern in trace.patterns:
        flat = [c for row in pattern for c in row]
        lines.append(_row_text(flat, wide))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# dispatch and rendering


def parse_rule_file(text: str):
    """Parse a kind-tagged document describing a local rule.

    Returns a :class:`RuleTable`, :class:`PermutationFamily`, or
    :class:`Orientation` according to the ``kind:`` entry.
    """
    kind = document_kind(text)
    if kind in ("ca1d", "ca2d"):
        return parse_rule(text)
    if kind == "permfam":
        return parse_permutation_family(text)
    if kind == "orientation":
        return parse_orientation(text)
    raise ParseError(f"unknown kind {kind!r}")


def render_spacetime(diagram: SpaceTimeDiagram, format: str = "text") -> bytes:
    """Render a diagram, time advancing downwards.

    ``text``: one line per step for 1-dimensional diagrams (digits, ``.``
    for undetermined cells; whitespace-separated states when the alphabet
    does not fit in single digits), or each step's rows followed by a blank
    line for 2-dimensional ones.  ``pgm``: P2 grayscale, one image row per
    step (1-dimensional only), level ``floor(255 * s / (|A| - 1))``,
    undetermined cells black.
    """
    if format == "text":
        return _render_text(diagram).encode("ascii")
    if format == "pgm":
        return _render_pgm(diagram).encode("ascii")
    raise ValueError(f"unknown render format {format!r}")


def _cell_texts(cells) -> list:
    return ["." if c is None else str(c) for c in cells]


def _render_text(diagram: SpaceTimeDiagram) -> str:
    wide = diagram.alphabet_size > 10
    join = " ".join if wide else "".join
    out = []
    for window in diagram.rows:
        if window.dimension == 1:
            out.append(join(_cell_texts(window.cells)))
        else:
            out.extend(join(_cell_texts(row)) for row in window.cells)
            out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


def _render_pgm(diagram: SpaceTimeDiagram) -> str:
    if diagram.rows[0].dimension != 1:
        raise ValueError("pgm rendering needs a 1-dimensional diagram")
    if diagram.alphabet_size > 256:
        raise ValueError("alphabet too large for pgm (more than 256 states)")
    span = max(1, diagram.alphabet_size - 1)
    width = diagram.rows[0].shape[0]
    height = len(diagram.rows)
    out = ["P2", f"{width} {height}", "255"]
    for window in diagram.rows:
        out.append(" ".join(
            "0" if c is None else str(255 * c // span)
            for c in window.cells))
    return "\n".join(out) + "\n"
