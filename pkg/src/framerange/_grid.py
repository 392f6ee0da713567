"""Canonical rectilinear grids of valued cells.

A grid is a tuple of sorted cut coordinates per axis together with a dict
mapping cell index tuples to values. Cell ``i`` on an axis spans
``[cuts[i], cuts[i + 1])``. Missing cells carry the background value
(``0`` / ``False``). Both band sets and torus step functions are built on
this representation; canonicalization drops every cut across which the
function does not change, so two grids describing the same function reduce
to identical objects.
"""

from bisect import bisect_left, bisect_right
from itertools import product


def collect_cuts(boxes, dim, extra=()):
    cuts = [set() for _ in range(dim)]
    for lo, hi in boxes:
        for i in range(dim):
            cuts[i].add(lo[i])
            cuts[i].add(hi[i])
    for i, extra_axis in enumerate(extra):
        cuts[i].update(extra_axis)
    return tuple(tuple(sorted(c)) for c in cuts)


def index_ranges(cuts, lo, hi):
    """Cell index ranges covered by the box ``[lo, hi)`` (cuts must contain its faces)."""
    return [range(bisect_left(c, l), bisect_left(c, h)) for c, l, h in zip(cuts, lo, hi)]


def accumulate(cuts, weighted_boxes):
    """Sum box weights into grid cells."""
    values = {}
    for (lo, hi), w in weighted_boxes:
        for idx in product(*index_ranges(cuts, lo, hi)):
            values[idx] = values.get(idx, 0) + w
    return {k: v for k, v in values.items() if v}


def locate(cuts, point):
    """Cell index containing ``point`` or ``None`` if outside the grid."""
    idx = []
    for c, x in zip(cuts, point):
        j = bisect_right(c, x) - 1
        if j < 0 or j >= len(c) - 1:
            return None
        idx.append(j)
    return tuple(idx)


def restrict(cuts, values, new_cuts):
    """Re-express ``values`` on a refinement ``new_cuts`` of ``cuts``."""
    maps = []
    for old, new in zip(cuts, new_cuts):
        maps.append([bisect_right(old, x) - 1 for x in new[:-1]])
    out = {}
    limits = [len(c) - 1 for c in cuts]
    for idx in product(*(range(len(c) - 1) for c in new_cuts)):
        old_idx = tuple(m[j] for m, j in zip(maps, idx))
        if any(o < 0 or o >= n for o, n in zip(old_idx, limits)):
            continue
        v = values.get(old_idx)
        if v:
            out[idx] = v
    return out


def restrict_sparse(cuts, values, new_cuts):
    """Like :func:`restrict` but iterates only over occupied cells."""
    out = {}
    for idx, v in values.items():
        ranges = []
        for axis, j in enumerate(idx):
            lo, hi = cuts[axis][j], cuts[axis][j + 1]
            nc = new_cuts[axis]
            ranges.append(range(bisect_left(nc, lo), bisect_left(nc, hi)))
        for new_idx in product(*ranges):
            out[new_idx] = v
    return out


def merge_cuts(a, b):
    return tuple(tuple(sorted(set(x) | set(y))) for x, y in zip(a, b))


def canonicalize(cuts, values, keep=None):
    """Drop cuts across which the cell values never change.

    ``keep`` optionally names coordinates per axis that must survive (used to
    pin the ``0`` and ``1`` faces of the unit torus).
    """
    dim = len(cuts)
    essential = [set() for _ in range(dim)]
    for idx, v in values.items():
        for axis in range(dim):
            t = idx[axis]
            for nb, cut in ((t - 1, t), (t + 1, t + 1)):
                other = idx[:axis] + (nb,) + idx[axis + 1:]
                if values.get(other) != v:
                    essential[axis].add(cut)
    if keep is not None:
        for axis in range(dim):
            for x in keep[axis]:
                j = bisect_left(cuts[axis], x)
                if j < len(cuts[axis]) and cuts[axis][j] == x:
                    essential[axis].add(j)
    if not values:
        if keep is None:
            return tuple(() for _ in range(dim)), {}
    order = [sorted(e) for e in essential]
    pos = [{old: new for new, old in enumerate(o)} for o in order]
    new_cuts = tuple(tuple(cuts[axis][j] for j in order[axis]) for axis in range(dim))
    new_values = {}
    for idx, v in values.items():
        try:
            new_idx = tuple(pos[axis][idx[axis]] for axis in range(dim))
        except KeyError:
            continue
        new_values[new_idx] = v
    return new_cuts, new_values


def merge_cells(cuts, values):
    """Greedy axis-ordered merge of equal-valued cells into boxes.

    Returns ``[(lo, hi, value)]`` with coordinates, sorted lexicographically
    by ``lo``. Merging runs from the last axis to the first, so in one
    dimension the output is the sorted list of maximal intervals.
    """
    dim = len(cuts)
    boxes = {(idx, tuple(j + 1 for j in idx)): v for idx, v in values.items()}
    for axis in reversed(range(dim)):
        groups = {}
        for (lo, hi), v in boxes.items():
            key = (lo[:axis] + lo[axis + 1:], hi[:axis] + hi[axis + 1:], v)
            groups.setdefault(key, []).append((lo, hi))
        merged = {}
        for (_, _, v), members in groups.items():
            members.sort(key=lambda b: b[0][axis])
            cur_lo, cur_hi = members[0]
            for lo, hi in members[1:]:
                if lo[axis] == cur_hi[axis]:
                    cur_hi = cur_hi[:axis] + (hi[axis],) + cur_hi[axis + 1:]
                else:
                    merged[(cur_lo, cur_hi)] = v
                    cur_lo, cur_hi = lo, hi
            merged[(cur_lo, cur_hi)] = v
        boxes = merged
    out = []
    for (lo, hi), v in boxes.items():
        out.append((
            tuple(cuts[a][lo[a]] for a in range(dim)),
            tuple(cuts[a][hi[a]] for a in range(dim)),
            v,
        ))
    out.sort(key=lambda b: (b[0], b[1]))
    return out
