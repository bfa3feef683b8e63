"""Prime-field (or rational) scalar arithmetic and small sparse linear algebra.

Vectors are dicts ``{index: nonzero coefficient}``.  The linear algebra here is
deliberately naive; it backs the rank-invariant oracle, which must stay
independent of the persistence reduction.
"""

from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """GF(p) for a prime p, or the rationals when ``char == 0``."""

    def __init__(self, char=2):
        if char != 0 and not _is_prime(char):
            raise ValueError(f"field characteristic must be prime or 0, got {char}")
        self.char = char

    def __repr__(self):
        return "Field(Q)" if self.char == 0 else f"Field(GF({self.char}))"

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(self.char)

    def norm(self, x):
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return int(x) % self.char

    def inv(self, x):
        if self.char == 0:
            return 1 / Fraction(x)
        return pow(x, -1, self.char)

    def axpy(self, a, x, y):
        """Return ``y + a*x`` as a new sparse vector."""
        out = dict(y)
        for k, v in x.items():
            c = out.get(k, 0) + a * v
            if self.char:
                c %= self.char
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return out


def echelon(field, vectors):
    """Reduce ``vectors`` to a basis of their span keyed by pivot index.

    The pivot of a vector is its largest index.  Returns ``{pivot: vector}``.
    """
    basis = {}
    for v in vectors:
        v = {k: field.norm(c) for k, c in v.items()}
        v = {k: c for k, c in v.items() if c}
        while v:
            low = max(v)
            if low not in basis:
                basis[low] = v
                break
            other = basis[low]
            v = field.axpy(-v[low] * field.inv(other[low]), other, v)
    return basis


def rank(field, vectors):
    return len(echelon(field, vectors))


def kernel(field, columns):
    """Basis of the kernel of the matrix whose j-th column is ``columns[j]``.

    Kernel vectors are sparse dicts keyed by column index.
    """
    pivots = {}
    basis = []
    for j, col in enumerate(columns):
        col = {k: field.norm(c) for k, c in col.items()}
        col = {k: c for k, c in col.items() if c}
        combo = {j: field.norm(1)}
        while col:
            low = max(col)
            if low not in pivots:
                pivots[low] = (col, combo)
                break
            other, other_combo = pivots[low]
            a = -col[low] * field.inv(other[low])
            col = field.axpy(a, other, col)
            combo = field.axpy(a, other_combo, combo)
        if not col:
            basis.append(combo)
    return basis
