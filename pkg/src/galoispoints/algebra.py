"""Multivariate polynomials, truncated series, exact linear algebra.

The series type is the workhorse oracle: coordinates of a curve branch are
expanded as (possibly Laurent) truncated series in a local parameter, and
derivatives, limits and vanishing orders are read off leading coefficients.
Precision is tracked explicitly; every operation knows up to which exponent
its result is exact.

Linear algebra is exact Gaussian elimination over a finite field.  A
numpy-vectorised path (discrete-log/Zech tables turned into array kernels)
covers the larger interpolation systems; a plain scalar path is kept as the
reference implementation and for fields without tables.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldError, SeriesError
from .ff import Field, embed

# ---------------------------------------------------------------------------
# multivariate polynomials
# ---------------------------------------------------------------------------


class MultiPoly:
    """Polynomial in named variables with coefficients in a finite field.

    Terms map exponent tuples (aligned with the variable list) to nonzero
    coefficient codes.  Instances are treated as immutable.
    """

    __slots__ = ("field", "variables", "terms")

    def __init__(self, field: Field, variables, terms=None):
        self.field = field
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field, variables):
        return cls(field, variables, {})

    @classmethod
    def const(cls, field, variables, code):
        v = tuple(variables)
        return cls(field, v, {(0,) * len(v): code} if code else {})

    @classmethod
    def var(cls, field, variables, name, exp: int = 1):
        v = tuple(variables)
        e = [0] * len(v)
        e[v.index(name)] = exp
        return cls(field, v, {tuple(e): 1})

    @classmethod
    def monomial(cls, field, variables, coeff, exps):
        return cls(field, tuple(variables), {tuple(exps): coeff})

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.field != other.field or self.variables != other.variables:
            raise FieldError("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.field, self.variables, other % self.field.p)
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(f, self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return MultiPoly(f, self.variables, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.field, self.variables, other % self.field.p)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.field, self.variables, other % self.field.p)
        self._check(other)
        f = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = f.add(out.get(e, 0), f.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(f, self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        r = MultiPoly.const(self.field, self.variables, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def derivative(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        f = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            k = e[i] % f.p
            if k == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            s = f.add(out.get(ne, 0), f.mul(c, k))
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return MultiPoly(f, self.variables, out)

    # -- evaluation ----------------------------------------------------------

    def _coeff_map(self, field: Field):
        if field == self.field:
            return None
        emb = embed(self.field, field)
        return emb

    def eval(self, assignment: dict, field: Field | None = None) -> int:
        """Exact value at a point; assignment maps every variable to a code.

        When `field` is an extension of the owner field, coefficients are
        carried through the canonical embedding.
        """
        f = field or self.field
        emb = self._coeff_map(f)
        for v in self.variables:
            if v not in assignment:
                raise FieldError(f"missing variable {v!r} in assignment")
        powcache = [dict() for _ in self.variables]
        vals = [assignment[v] for v in self.variables]

        def vpow(i, e):
            if e == 0:
                return 1
            c = powcache[i].get(e)
            if c is None:
                c = f.pow(vals[i], e)
                powcache[i][e] = c
            return c

        acc = 0
        for e, c in self.terms.items():
            t = c if emb is None else emb(c)
            for i, ei in enumerate(e):
                if ei:
                    t = f.mul(t, vpow(i, ei))
                    if t == 0:
                        break
            acc = f.add(acc, t)
        return acc

    def eval_series(self, assignment: dict) -> "TruncSeries":
        """Evaluate at truncated series (series field must extend the owner's)."""
        series = [assignment[v] for v in self.variables]
        f = series[0].field if series else self.field
        emb = self._coeff_map(f)
        caches = {v: {} for v in self.variables}
        # constants are exact to any precision; give them enough headroom
        # that the min-precision rule is driven by the inputs alone
        maxhi = max((s.prec_hi() for s in series), default=1)
        minlo = min((s.lo for s in series), default=0)
        big = maxhi + max(0, -minlo) * max(self.total_degree(), 1) + 1

        def spow(v, e):
            if e == 0:
                return None
            c = caches[v].get(e)
            if c is None:
                c = assignment[v].pow(e)
                caches[v][e] = c
            return c

        acc = TruncSeries.zero_to(f, big)
        for e, c in self.terms.items():
            t = TruncSeries.const(f, c if emb is None else emb(c), big)
            for v, ei in zip(self.variables, e):
                pw = spow(v, ei)
                if pw is not None:
                    t = t * pw
            acc = acc + t
        return acc

    def support_sorted(self):
        """Terms in graded-lexicographic order (degree, then exponents desc)."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.support_sorted():
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.variables, e)
                if k
            )
            cs = str(self.field.coeffs(c)[0]) if self.field.n == 1 else str(self.field.coeffs(c))
            bits.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# truncated (Laurent) series
# ---------------------------------------------------------------------------


class TruncSeries:
    """Truncated series c_lo*u^lo + ... with explicit precision.

    `lo` is the valuation offset (negative for Laurent expansions of ratios),
    `coeffs[i]` is the coefficient of u^(lo+i), and the series is exact
    modulo u^(lo+len(coeffs)).  A series whose stored coefficients are all
    zero is "zero to precision": its true order, if finite, is at least the
    precision bound.
    """

    __slots__ = ("field", "lo", "coeffs")

    def __init__(self, field: Field, lo: int, coeffs):
        self.field = field
        coeffs = list(coeffs)
        # normalise: drop leading zeros into the offset, keep precision
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        self.lo = lo + k
        self.coeffs = coeffs[k:]

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, field, code, prec: int | None = None):
        n = prec if prec is not None else DEFAULT_PREC
        c = [0] * n
        if n:
            c[0] = code
        return cls(field, 0, c)

    @classmethod
    def param(cls, field, prec: int | None = None):
        """The local parameter u itself."""
        n = prec if prec is not None else DEFAULT_PREC
        c = [0] * n
        if n:
            c[0] = 1
        return cls(field, 1, c)

    @classmethod
    def zero_to(cls, field, hi: int):
        """The zero series known to be exact modulo u^hi."""
        return cls(field, hi, [])

    def prec_hi(self) -> int:
        return self.lo + len(self.coeffs)

    # -- inspection -------------------------------------------------------

    def is_zero_to_prec(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        """Vanishing order (valuation).  Raises if zero to precision."""
        if not self.coeffs:
            raise SeriesError(
                f"series is zero to precision u^{self.prec_hi()}; order unresolved"
            )
        return self.lo

    def leading(self):
        return self.order(), self.coeffs[0]

    def coeff_at(self, k: int) -> int:
        """Coefficient of u^k (must be below the precision bound)."""
        if k >= self.prec_hi():
            raise SeriesError(f"coefficient u^{k} beyond precision u^{self.prec_hi()}")
        if k < self.lo:
            return 0
        return self.coeffs[k - self.lo]

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other):
        if self.field != other.field:
            raise FieldError("series over different fields")
        lo = min(self.lo, other.lo)
        hi = min(self.prec_hi(), other.prec_hi())
        return lo, hi

    def __add__(self, other):
        lo, hi = self._align(other)
        n = max(hi - lo, 0)
        f = self.field
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            k = self.lo + i - lo
            if 0 <= k < n:
                out[k] = c
        for i, c in enumerate(other.coeffs):
            k = other.lo + i - lo
            if 0 <= k < n:
                out[k] = f.add(out[k], c)
        return TruncSeries(f, lo, out)

    def __neg__(self):
        f = self.field
        return TruncSeries(f, self.lo, [f.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if isinstance(other, int):
            return TruncSeries(f, self.lo, [f.mul(c, other) for c in self.coeffs])
        if self.field != other.field:
            raise FieldError("series over different fields")
        if not self.coeffs or not other.coeffs:
            # zero to precision; product is zero to the best provable bound
            hi = min(self.prec_hi() + other.lo, other.prec_hi() + self.lo)
            return TruncSeries.zero_to(f, hi)
        lo = self.lo + other.lo
        hi = min(self.prec_hi() + other.lo, other.prec_hi() + self.lo)
        n = hi - lo
        out = [0] * n
        a, b = self.coeffs, other.coeffs
        for i, ai in enumerate(a):
            if ai == 0 or i >= n:
                continue
            jmax = min(len(b), n - i)
            for j in range(jmax):
                bj = b[j]
                if bj:
                    out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return TruncSeries(f, lo, out)

    __rmul__ = __mul__

    def scale(self, code: int):
        return self * code

    def shift(self, k: int):
        """Multiply by u^k."""
        return TruncSeries(self.field, self.lo + k, list(self.coeffs))

    def truncate(self, hi: int):
        if hi >= self.prec_hi():
            return self
        n = max(hi - self.lo, 0)
        return TruncSeries(self.field, self.lo, self.coeffs[:n])

    def inverse(self):
        """Multiplicative inverse (leading coefficient must be nonzero)."""
        if not self.coeffs:
            raise SeriesError("cannot invert a series that is zero to precision")
        f = self.field
        n = len(self.coeffs)
        a = self.coeffs
        inv0 = f.inv(a[0])
        out = [0] * n
        out[0] = inv0
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                if j < len(a) and a[j] and out[k - j]:
                    s = f.add(s, f.mul(a[j], out[k - j]))
            out[k] = f.neg(f.mul(inv0, s))
        return TruncSeries(f, -self.lo, out)

    def __truediv__(self, other):
        return self * other.inverse()

    def frobenius_pow(self, k: int):
        """Apply x -> x^(p^k): coefficients twist, exponents scale by p^k."""
        f = self.field
        pk = f.p**k
        if not self.coeffs:
            return TruncSeries.zero_to(f, self.prec_hi() * pk)
        n = (len(self.coeffs) - 1) * pk + 1
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * pk] = f.pow(c, pk)
        # exact mod u^(prec*pk)
        res = TruncSeries(f, self.lo * pk, out)
        return res

    def pow(self, e: int):
        """e-th power via base-p decomposition (Frobenius powers are cheap)."""
        if e < 0:
            return self.inverse().pow(-e)
        if e == 0:
            return TruncSeries.const(self.field, 1, max(self.prec_hi() - self.lo, 1))
        f = self.field
        digits = []
        t = e
        while t:
            digits.append(t % f.p)
            t //= f.p
        result = None
        for k, d in enumerate(digits):
            if d == 0:
                continue
            blk = self.frobenius_pow(k) if k else self
            piece = blk
            for _ in range(d - 1):
                piece = piece * blk
            result = piece if result is None else result * piece
        return result

    def __repr__(self):
        bits = [f"{self.field.coeffs(c)}*u^{self.lo + i}" for i, c in enumerate(self.coeffs) if c]
        inner = " + ".join(bits) if bits else "0"
        return f"<{inner} + O(u^{self.prec_hi()})>"


DEFAULT_PREC = 8


class ProjectiveValue:
    """Outcome of a series ratio: a finite value, zero, or infinity."""

    __slots__ = ("tag", "value")

    def __init__(self, tag: str, value: int | None = None):
        assert tag in ("finite", "zero", "infinity")
        self.tag = tag
        self.value = value

    @property
    def is_zero(self):
        return self.tag == "zero"

    @property
    def is_infinity(self):
        return self.tag == "infinity"

    @property
    def is_finite(self):
        return self.tag == "finite"

    def __eq__(self, other):
        if isinstance(other, ProjectiveValue):
            return self.tag == other.tag and self.value == other.value
        return self.tag == "finite" and self.value == other

    def __repr__(self):
        return f"ProjectiveValue({self.tag}{'' if self.value is None else ', ' + str(self.value)})"


def ratio_limit(num: TruncSeries, den: TruncSeries):
    """Limit of num/den at the expansion point.

    Equal vanishing orders give the quotient of leading coefficients; a
    mismatch is reported as a tagged zero/infinity outcome rather than an
    error.
    """
    on, cn = num.leading()
    od, cd = den.leading()
    if on == od:
        return ProjectiveValue("finite", num.field.div(cn, cd))
    if on > od:
        return ProjectiveValue("zero")
    return ProjectiveValue("infinity")


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


class FieldArrays:
    """Vectorised field kernels over numpy arrays of element codes."""

    def __init__(self, field: Field):
        if field._log is None:
            raise FieldError("field too large for table-driven array kernels")
        self.field = field
        self.q = field.q
        self.m = field.q - 1
        self.log = np.array(field._log, dtype=np.int64)  # log[0] == -1
        self.exp = np.array(field._exp, dtype=np.int64)
        self.zech = np.array(field._zech, dtype=np.int64)  # -1 -> sum is zero
        self.neg_shift = 0 if field.p == 2 else field._log[field.neg(1)]

    def mul(self, a, b):
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % self.m]
        return np.where((a == 0) | (b == 0), 0, out)

    def neg(self, a):
        if self.field.p == 2:
            return a
        la = self.log[a]
        out = self.exp[(la + self.neg_shift) % self.m]
        return np.where(a == 0, 0, out)

    def add(self, a, b):
        la, lb = self.log[a], self.log[b]
        d = (lb - la) % self.m
        z = self.zech[d]
        out = self.exp[(la + z) % self.m]
        out = np.where(z < 0, 0, out)
        out = np.where(a == 0, b, np.where(b == 0, a, out))
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv_vec(self, a):
        la = self.log[a]
        return np.where(a == 0, 0, self.exp[(self.m - la) % self.m])


class LinearSystem:
    """Rectangular matrix over a finite field (rows = constraints)."""

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise FieldError("ragged linear system")

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)


def _rref_scalar(field: Field, rows):
    """In-place reduced row echelon form; returns pivot column list."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    piv_cols = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(ri, rr)]
        piv_cols.append(c)
        r += 1
        if r == nr:
            break
    return piv_cols


def _rref_numpy(field: Field, rows):
    fa = FieldArrays(field)
    m = np.array(rows, dtype=np.int64)
    nr, nc = m.shape
    piv_cols = []
    r = 0
    for c in range(nc):
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.inv(int(m[r, c]))
        m[r] = fa.mul(m[r], np.int64(inv))
        factors = m[:, c].copy()
        factors[r] = 0
        mask = factors != 0
        if mask.any():
            prod = fa.mul(factors[mask][:, None], m[r][None, :])
            m[mask] = fa.sub(m[mask], prod)
        piv_cols.append(c)
        r += 1
        if r == nr:
            break
    return m.tolist(), piv_cols


def nullspace(system: LinearSystem, engine: str = "auto"):
    """Exact nullspace basis of the system's matrix.

    Returns a list of coefficient vectors (codes), each normalised so that
    its first nonzero entry is 1.  The basis is the standard one obtained
    from the reduced row echelon form (one vector per free column).
    """
    field = system.field
    nr, nc = system.shape
    if nc == 0:
        return []
    if engine == "auto":
        engine = "numpy" if (field._log is not None and nr * nc > 4096) else "scalar"
    if engine == "numpy":
        rows, piv_cols = _rref_numpy(field, system.rows if system.rows else [[0] * nc])
    elif engine == "scalar":
        rows = [list(r) for r in system.rows] or [[0] * nc]
        piv_cols = _rref_scalar(field, rows)
    else:
        raise FieldError(f"unknown elimination engine {engine!r}")
    piv_set = set(piv_cols)
    basis = []
    for fc in range(nc):
        if fc in piv_set:
            continue
        v = [0] * nc
        v[fc] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = field.neg(rows[i][fc])
        basis.append(v)
    return basis


def matvec(field: Field, rows, v):
    out = []
    for r in rows:
        acc = 0
        for a, b in zip(r, v):
            if a and b:
                acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# implicitization by interpolation
# ---------------------------------------------------------------------------

IMPLICITIZE_MARGIN = 32


def bivariate_monomials(degree: int):
    """Exponent pairs (i, j), i+j <= degree, in graded-lex order."""
    out = []
    for d in range(degree + 1):
        for i in range(d, -1, -1):
            out.append((i, d - i))
    return out


def implicitize(field: Field, samples, degree: int, margin: int = IMPLICITIZE_MARGIN):
    """Minimal-degree style interpolation: find a nonzero bivariate polynomial
    of total degree <= degree vanishing at all samples, or None.

    `samples` is a sequence of (s, t) codes.  The number of samples must be at
    least the monomial count plus a safety margin, so that a found relation is
    overdetermined rather than an artifact of too few constraints.
    """
    monos = bivariate_monomials(degree)
    need = len(monos) + margin
    samples = list(samples)
    if len(samples) < need:
        raise FieldError(
            f"insufficient samples for degree {degree}: need {need}, got {len(samples)}"
        )
    rows = []
    for s, t in samples:
        spow = [1]
        tpow = [1]
        for _ in range(degree):
            spow.append(field.mul(spow[-1], s))
            tpow.append(field.mul(tpow[-1], t))
        rows.append([field.mul(spow[i], tpow[j]) for i, j in monos])
    basis = nullspace(LinearSystem(field, rows))
    if not basis:
        return None
    v = basis[0]
    # normalise: first nonzero coefficient in graded-lex order is 1
    lead = next(i for i, c in enumerate(v) if c)
    inv = field.inv(v[lead])
    v = [field.mul(inv, c) for c in v]
    terms = {(i, j): c for (i, j), c in zip(monos, v) if c}
    return MultiPoly(field, ("s", "t"), terms)
