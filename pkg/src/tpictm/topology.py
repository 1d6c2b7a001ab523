"""2-D digital topology: geodesic neighborhoods, topology numbers, simple points.

Foreground and background use complementary adjacencies, (4, 8) or (8, 4).
A pixel is *simple* when flipping it changes neither the number of foreground
components nor the number of background components; this is decided from its
3x3 neighborhood alone, so the test reduces to a 256-entry lookup table.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

# Neighbor order used for 8-bit neighborhood codes: bit i <-> NEIGHBOR_OFFSETS[i].
NEIGHBOR_OFFSETS = (
    (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1),
)
_AXIAL = ((-1, 0), (1, 0), (0, -1), (0, 1))
_PUNCTURED = tuple((dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0))


@dataclass(frozen=True)
class ConnectivityPair:
    foreground: int = 4
    background: int = 8

    def __post_init__(self):
        if {self.foreground, self.background} != {4, 8}:
            raise ValueError(
                "foreground and background connectivities must be 4 and 8 in some "
                f"order, got ({self.foreground}, {self.background})"
            )

    @classmethod
    def parse(cls, text):
        """Parse ``"4-8"`` or ``"8-4"``."""
        try:
            fg, bg = (int(t) for t in text.split("-"))
        except ValueError:
            raise ValueError(f"connectivity must look like '4-8' or '8-4', got {text!r}")
        return cls(fg, bg)

    def __str__(self):
        return f"{self.foreground}-{self.background}"


FG4_BG8 = ConnectivityPair(4, 8)
FG8_BG4 = ConnectivityPair(8, 4)


def _offsets(conn):
    if conn == 4:
        return _AXIAL
    if conn == 8:
        return _PUNCTURED
    raise ValueError(f"connectivity must be 4 or 8, got {conn}")


def neighborhood(x, conn, shape):
    """N_conn(x) on a periodic grid, including ``x`` itself.

    Drop ``x`` from the result to get the punctured neighborhood.
    """
    rows, cols = shape
    r, c = x
    out = {(r % rows, c % cols)}
    for dr, dc in _offsets(conn):
        out.add(((r + dr) % rows, (c + dc) % cols))
    return out


def _patch(mask, x):
    """3x3 periodic window of ``mask`` centered on ``x``, as a dict offset -> bit."""
    rows, cols = mask.shape
    r, c = x
    return {
        (dr, dc): int(mask[(r + dr) % rows, (c + dc) % cols])
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
    }


def _geodesic_offsets(members, conn):
    """Geodesic neighborhood of the center within the punctured 3x3 window.

    ``members`` is the set of punctured offsets belonging to the set under study.
    For 8-adjacency this is N_8^1 = N_8^*(x) & X. For 4-adjacency it is N_4^2:
    the axial members plus every member 4-adjacent to one of them.
    """
    if conn == 8:
        return set(members)
    first = {o for o in _AXIAL if o in members}
    second = set(first)
    for yr, yc in first:
        for dr, dc in _AXIAL:
            o = (yr + dr, yc + dc)
            if o in members:
                second.add(o)
    return second


def _count_local_components(offsets, conn):
    """Components of a set of window offsets, with no wrap-around."""
    steps = _offsets(conn)
    todo = set(offsets)
    count = 0
    while todo:
        count += 1
        stack = [todo.pop()]
        while stack:
            r, c = stack.pop()
            for dr, dc in steps:
                o = (r + dr, c + dc)
                if o in todo:
                    todo.remove(o)
                    stack.append(o)
    return count


def _absolute(x, offsets, shape):
    rows, cols = shape
    return {((x[0] + dr) % rows, (x[1] + dc) % cols) for dr, dc in offsets}


def geodesic_neighborhoods(x, mask, pair=FG4_BG8):
    """Foreground and background geodesic neighborhoods of ``x``.

    Returns ``(fg, bg)`` as sets of pixel coordinates. For the (4, 8) pair these
    are N_4^2(x, X) and N_8^1(x, X-bar). The membership of ``x`` itself is never
    consulted.
    """
    mask = np.asarray(mask)
    win = _patch(mask, x)
    fg_members = {o for o in _PUNCTURED if win[o] == 1}
    bg_members = {o for o in _PUNCTURED if win[o] == 0}
    fg = _geodesic_offsets(fg_members, pair.foreground)
    bg = _geodesic_offsets(bg_members, pair.background)
    return _absolute(x, fg, mask.shape), _absolute(x, bg, mask.shape)


def _topology_numbers_from_window(win, pair):
    fg_members = {o for o in _PUNCTURED if win[o] == 1}
    bg_members = {o for o in _PUNCTURED if win[o] == 0}
    t_fg = _count_local_components(_geodesic_offsets(fg_members, pair.foreground), pair.foreground)
    t_bg = _count_local_components(_geodesic_offsets(bg_members, pair.background), pair.background)
    return t_fg, t_bg


def topology_numbers(x, mask, pair=FG4_BG8):
    """(T_fg, T_bg): component counts of the two geodesic neighborhoods of ``x``."""
    return _topology_numbers_from_window(_patch(np.asarray(mask), x), pair)


def is_simple(x, mask, pair=FG4_BG8):
    """True iff flipping ``x`` preserves foreground and background component counts.

    Only the eight neighbors matter, so the same answer applies whether ``x``
    is currently foreground (removal) or background (addition).
    """
    return topology_numbers(x, mask, pair) == (1, 1)


def neighbor_code(mask, x):
    """8-bit code of the neighbors of ``x`` (bit i set iff NEIGHBOR_OFFSETS[i] is foreground)."""
    rows, cols = mask.shape
    r, c = x
    code = 0
    for i, (dr, dc) in enumerate(NEIGHBOR_OFFSETS):
        if mask[(r + dr) % rows, (c + dc) % cols]:
            code |= 1 << i
    return code


@lru_cache(maxsize=None)
def _lut(pair):
    table = np.zeros((256, 2), dtype=np.int8)
    for code in range(256):
        win = {(0, 0): 0}
        for i, o in enumerate(NEIGHBOR_OFFSETS):
            win[o] = (code >> i) & 1
        table[code] = _topology_numbers_from_window(win, pair)
    table.setflags(write=False)
    return table


def topology_number_table(pair=FG4_BG8):
    """(256, 2) table of (T_fg, T_bg) indexed by :func:`neighbor_code`."""
    return _lut(pair)


def simple_point_table(pair=FG4_BG8):
    """Boolean table of length 256: simplicity indexed by :func:`neighbor_code`."""
    t = _lut(pair)
    return (t[:, 0] == 1) & (t[:, 1] == 1)


@dataclass(frozen=True)
class ComponentLabeling:
    labels: np.ndarray
    count: int


def _structure(conn):
    if conn == 4:
        return ndimage.generate_binary_structure(2, 1)
    if conn == 8:
        return ndimage.generate_binary_structure(2, 2)
    raise ValueError(f"connectivity must be 4 or 8, got {conn}")


def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def label_components(mask, conn, periodic=True):
    """Label the ``conn``-connected components of the set pixels of ``mask``.

    With ``periodic=True`` adjacency wraps across opposite borders. Labels are
    ``1..count`` in order of first appearance (row-major); 0 marks unset pixels.
    """
    m = np.asarray(mask).astype(bool)
    labels, n = ndimage.label(m, structure=_structure(conn))
    if periodic and n > 1:
        parent = list(range(n + 1))
        rows, cols = m.shape
        steps = [(0, 1), (1, 0)] if conn == 4 else [(0, 1), (1, 0), (1, 1), (1, -1)]
        # Only pairs straddling a border can join labels that ndimage kept apart.
        border = set()
        for r in (0, rows - 1):
            border.update((r, c) for c in range(cols))
        for c in (0, cols - 1):
            border.update((r, c) for r in range(rows))
        for r, c in border:
            a = labels[r, c]
            if not a:
                continue
            for dr, dc in steps + [(-s[0], -s[1]) for s in steps]:
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    continue
                b = labels[rr % rows, cc % cols]
                if b:
                    ra, rb = _find(parent, a), _find(parent, b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        roots = np.array([_find(parent, i) for i in range(n + 1)])
        labels = roots[labels]
    uniq, inverse = np.unique(labels.ravel(), return_inverse=True)
    if uniq.size and uniq[0] == 0:
        relabel = inverse.reshape(m.shape)
    else:
        relabel = inverse.reshape(m.shape) + 1
    # np.unique sorts by root label; roots are minimal labels, which follow row-major first appearance.
    count = int(relabel.max()) if m.any() else 0
    return ComponentLabeling(relabel.astype(np.int32), count)


def count_components(mask, conn, periodic=True):
    return label_components(mask, conn, periodic).count


def component_counts(mask, pair=FG4_BG8, periodic=True):
    """(foreground count, background count) under the pair's adjacencies."""
    m = np.asarray(mask).astype(bool)
    return (
        count_components(m, pair.foreground, periodic),
        count_components(~m, pair.background, periodic),
    )


def hole_count(mask, pair=FG4_BG8):
    """Holes of the foreground: background components minus one, counted without wrap-around."""
    m = np.asarray(mask).astype(bool)
    return max(count_components(~m, pair.background, periodic=False) - 1, 0)
