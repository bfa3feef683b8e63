"""Filtered cell complexes over a field and their persistence barcodes.

A :class:`FilteredComplex` is an immutable list of cells, each entering the
filtration at a real value.  Barcodes come from the standard column reduction
of the boundary matrix (with clearing); :func:`rank_invariant` is an
independent route to the same information through direct linear algebra on
sublevel complexes and exists mainly to check the reduction.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadInterval,
    FiltrationOrderViolation,
    InvalidComplex,
    MissingFace,
    NotAComplex,
)
from .fields import Field, kernel, rank

INF = math.inf


@dataclass(frozen=True)
class Cell:
    id: int
    dim: int
    boundary: tuple  # ((face_id, coeff), ...)
    filtration: object  # int, float or Fraction; compared exactly

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple((int(f), c) for f, c in self.boundary))


class FilteredComplex:
    """Validated filtered complex.  Build through :func:`build_filtered_complex`."""

    def __init__(self, cells, field_char, _validated=False):
        if not _validated:
            raise TypeError("use build_filtered_complex()")
        self.field = Field(field_char)
        self._cells = cells  # indexed by id
        self.order = tuple(sorted(range(len(cells)), key=lambda i: _sort_key(cells[i])))
        self.position = {cid: k for k, cid in enumerate(self.order)}
        self._pairs = None

    @property
    def field_char(self):
        return self.field.char

    @property
    def cells(self):
        """Cells in filtration order."""
        return [self._cells[i] for i in self.order]

    def cell(self, cid):
        return self._cells[cid]

    def __len__(self):
        return len(self._cells)

    @property
    def max_dim(self):
        return max((c.dim for c in self._cells), default=-1)

    def filtration_values(self):
        return sorted({c.filtration for c in self._cells})

    def sublevel(self, t):
        return [c for c in self._cells if c.filtration <= t]

    def euler_characteristic(self, t=INF):
        return sum((-1) ** c.dim for c in self._cells if c.filtration <= t)

    def persistence_pairs(self):
        """All (birth_cell_id, death_cell_id or None) pairs, zero-length ones included."""
        if self._pairs is None:
            self._pairs = _reduce(self)
        return self._pairs

    def __repr__(self):
        return f"FilteredComplex({len(self)} cells, {self.field})"


def _sort_key(cell):
    return (cell.filtration, cell.dim, cell.id)


def build_filtered_complex(cells, field_char=2, check_boundary=True):
    """Validate ``cells`` and return a :class:`FilteredComplex`.

    Cell ids must be exactly ``0..n-1``.  Coefficients are reduced into the
    field and repeated faces are merged.  ``check_boundary=False`` skips the
    d∘d = 0 test, which builders that construct simplicial boundaries by
    construction may use on large inputs.
    """
    field = Field(field_char)
    cells = list(cells)
    by_id = {}
    for c in cells:
        if c.id in by_id:
            raise InvalidComplex(f"duplicate cell id {c.id}")
        if c.dim < 0:
            raise InvalidComplex(f"cell {c.id} has negative dimension")
        by_id[c.id] = c
    if set(by_id) != set(range(len(cells))):
        raise InvalidComplex("cell ids must be dense 0..n-1")

    clean = [None] * len(cells)
    for cid in range(len(cells)):
        c = by_id[cid]
        if isinstance(c.filtration, float) and math.isnan(c.filtration):
            raise InvalidComplex(f"cell {cid} has NaN filtration")
        merged = {}
        for f, coeff in c.boundary:
            if f not in by_id:
                raise MissingFace(f"cell {cid} has missing face {f}")
            face = by_id[f]
            if face.dim != c.dim - 1:
                raise NotAComplex(f"face {f} of cell {cid} has dimension {face.dim}, expected {c.dim - 1}")
            if face.filtration > c.filtration:
                raise FiltrationOrderViolation(
                    f"face {f} enters at {face.filtration} after cell {cid} at {c.filtration}"
                )
            merged[f] = field.norm(merged.get(f, 0) + field.norm(coeff))
        boundary = tuple(sorted((f, v) for f, v in merged.items() if v))
        if c.dim == 0 and boundary:
            raise NotAComplex(f"vertex {cid} has a nonempty boundary")
        clean[cid] = Cell(cid, c.dim, boundary, c.filtration)

    if check_boundary:
        for c in clean:
            dd = {}
            for f, coeff in c.boundary:
                dd = field.axpy(coeff, dict(clean[f].boundary), dd)
            if dd:
                raise NotAComplex(f"boundary of boundary of cell {c.id} is nonzero")
    return FilteredComplex(clean, field_char, _validated=True)


def _reduce(cx):
    """Column reduction in filtration order, top dimension first, with clearing."""
    field = cx.field
    pos = cx.position
    order = cx.order
    by_dim = {}
    for k, cid in enumerate(order):
        by_dim.setdefault(cx.cell(cid).dim, []).append(k)

    pivot_of = {}  # low row -> column
    reduced = {}
    cleared = set()
    mod2 = field.char == 2
    for d in sorted(by_dim, reverse=True):
        if d == 0:
            break
        for j in by_dim[d]:
            if j in cleared:
                continue
            bd = cx.cell(order[j]).boundary
            if mod2:
                col = {pos[f] for f, _ in bd}
                while col:
                    low = max(col)
                    k = pivot_of.get(low)
                    if k is None:
                        break
                    col ^= reduced[k]
            else:
                col = {pos[f]: c for f, c in bd}
                while col:
                    low = max(col)
                    k = pivot_of.get(low)
                    if k is None:
                        break
                    other = reduced[k]
                    col = field.axpy(-col[low] * field.inv(other[low]), other, col)
            if col:
                low = max(col)
                pivot_of[low] = j
                reduced[j] = col
                cleared.add(low)

    pairs = []
    negative = set(pivot_of.values())
    for k, cid in enumerate(order):
        if k in pivot_of:
            pairs.append((cid, order[pivot_of[k]]))
        elif k not in negative:
            pairs.append((cid, None))
    return pairs


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars (birth, death) in one degree; death may be ``math.inf``."""

    degree: int
    bars: tuple

    def __post_init__(self):
        bars = tuple(sorted(((b, d) for b, d in self.bars), key=lambda x: (x[0], x[1])))
        for b, d in bars:
            if not b < d:
                raise ValueError(f"bar ({b}, {d}) has birth >= death")
        object.__setattr__(self, "bars", bars)

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    @property
    def finite(self):
        return tuple(bar for bar in self.bars if bar[1] != INF)

    @property
    def infinite(self):
        return tuple(bar for bar in self.bars if bar[1] == INF)

    def alive(self, t, s=None):
        """Number of bars containing [t, s] (the rank of the map t -> s)."""
        s = t if s is None else s
        return sum(1 for b, d in self.bars if b <= t and d > s)

    def to_json(self):
        return {
            "degree": self.degree,
            "bars": [[_num_out(b), None if d == INF else _num_out(d)] for b, d in self.bars],
        }

    @classmethod
    def from_json(cls, obj):
        bars = [(_num_in(b), INF if d is None else _num_in(d)) for b, d in obj["bars"]]
        return cls(int(obj["degree"]), tuple(bars))


def _num_out(x):
    """Exact JSON value: ints stay ints, other rationals become "p/q" strings."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _num_in(x):
    return Fraction(x) if isinstance(x, str) else x


def compute_barcode(complex, degree):
    """Barcode of ``PH_degree``; zero-length pairs are dropped."""
    bars = []
    for birth_id, death_id in complex.persistence_pairs():
        born = complex.cell(birth_id)
        if born.dim != degree:
            continue
        if death_id is None:
            bars.append((born.filtration, INF))
        else:
            died = complex.cell(death_id).filtration
            if born.filtration < died:
                bars.append((born.filtration, died))
    return Barcode(degree, tuple(bars))


def rank_invariant(complex, degree, t, s):
    """Rank of H_n(A_t) -> H_n(A_s), by Gaussian elimination on sublevel sets.

    Computed as dim(Z_n(A_t) + B_n(A_s)) - dim B_n(A_s); shares no code with
    the reduction in :func:`compute_barcode`.
    """
    if t > s:
        raise BadInterval(f"t={t} > s={s}")
    field = complex.field
    n_cells = [c for c in complex.sublevel(t) if c.dim == degree]
    if not n_cells:
        return 0
    columns = [dict(c.boundary) for c in n_cells]
    cycles = []
    for combo in kernel(field, columns):
        cycles.append({n_cells[j].id: coeff for j, coeff in combo.items()})
    boundaries = [dict(c.boundary) for c in complex.sublevel(s) if c.dim == degree + 1]
    return rank(field, cycles + boundaries) - rank(field, boundaries)


def betti(complex, degree, t=INF):
    return rank_invariant(complex, degree, t, t)


def complex_to_json(complex):
    return {
        "field": complex.field_char,
        "cells": [
            {
                "id": c.id,
                "dim": c.dim,
                "filtration": _num_out(c.filtration),
                "boundary": [[f, v if not isinstance(v, Fraction) else str(v)] for f, v in c.boundary],
            }
            for c in (complex.cell(i) for i in range(len(complex)))
        ],
    }


def complex_from_json(obj):
    cells = []
    for c in obj["cells"]:
        bd = [(int(f), Fraction(v) if isinstance(v, str) else v) for f, v in c.get("boundary", [])]
        cells.append(Cell(int(c["id"]), int(c["dim"]), tuple(bd), _num_in(c["filtration"])))
    return build_filtered_complex(cells, int(obj.get("field", 2)))
