"""Exact arithmetic in finite fields F_{p^n}.

Elements are stored as integer codes.  The code of the element
c0 + c1*g + ... + c_{n-1}*g^(n-1)  (g = class of x modulo the field modulus)
is c0 + c1*p + ... + c_{n-1}*p^(n-1).  The *canonical order* of elements is
lexicographic on the coefficient sequence (c0, c1, ..., c_{n-1}); it is
materialised once per field as a permutation of codes.

The modulus is the lexicographically smallest monic irreducible of degree n
over F_p, comparing coefficient sequences in ascending order (constant term
first).  This makes field construction reproducible with no external tables.

Multiplication, inversion and powering go through discrete-log tables when the
field is small enough to afford them (the desk-scale fields used here always
are); a plain polynomial-arithmetic path covers the rest.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import FieldError, SizeBoundError

SIZE_BOUND = 2**24  # largest supported field cardinality
TABLE_LIMIT = 2**20  # build exp/log/Zech tables up to this cardinality
DENSE_TABLE_LIMIT = 256  # full q*q add/mul tables for very small fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- small polynomial helpers over F_p (coefficient tuples, ascending) --


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = list(_poly_trim(a))
        if not a or len(a) - 1 < dm:
            break
        k = len(a) - 1 - dm
        f = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[i + k] = (a[i + k] - f * mi) % p
        a = a[:-1]
    return _poly_trim(a)


def _poly_powmod(a, e, m, p):
    r = (1,)
    b = _poly_mod(a, m, p)
    while e:
        if e & 1:
            r = _poly_mod(_poly_mul(r, b, p), m, p)
        b = _poly_mod(_poly_mul(b, b, p), m, p)
        e >>= 1
    return r


def _poly_gcd(a, b, p):
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        db, da = len(b) - 1, len(r) - 1
        while r and len(r) - 1 >= db:
            k = len(r) - 1 - db
            f = (r[-1] * inv_lead) % p
            for i, bi in enumerate(b):
                r[i + k] = (r[i + k] - f * bi) % p
            r = list(_poly_trim(r))
        a, b = b, _poly_trim(r)
    return a


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(m, p):
    """Rabin irreducibility test for a monic polynomial m over F_p."""
    n = len(m) - 1
    if n <= 0:
        return False
    x = (0, 1)
    # x^(p^n) == x mod m
    t = x
    for _ in range(n):
        t = _poly_powmod(t, p, m, p)
    if _poly_trim(t) != _poly_mod(x, m, p):
        return False
    for ell in _prime_divisors(n):
        t = x
        for _ in range(n // ell):
            t = _poly_powmod(t, p, m, p)
        diff = list(t) + [0] * max(0, 2 - len(t))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(m, _poly_trim(diff), p)
        if len(g) - 1 > 0:
            return False
    return True


def _smallest_irreducible(p: int, n: int):
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates x^n + c_{n-1}x^(n-1) + ... + c0 are ordered by the ascending
    coefficient sequence (c0, ..., c_{n-1}).
    """
    if n == 1:
        return (0, 1)  # the polynomial x
    # iterate (c0, ..., c_{n-1}) in lexicographic order
    coeffs = [0] * n
    while True:
        m = tuple(coeffs) + (1,)
        if _is_irreducible(m, p):
            return m
        i = n - 1
        while i >= 0 and coeffs[i] == p - 1:
            coeffs[i] = 0
            i -= 1
        if i < 0:
            raise FieldError(f"no irreducible of degree {n} over F_{p} found")
        coeffs[i] += 1


class Field:
    """A finite field F_{p^n} with canonical modulus and element order.

    Operations take and return integer element codes.  Use :meth:`felt` for
    the wrapped element type.
    """

    def __init__(self, p: int, n: int):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**n
        if q > SIZE_BOUND:
            raise SizeBoundError(f"field size {q} exceeds bound {SIZE_BOUND}")
        self.p = p
        self.n = n
        self.q = q
        self.modulus = _smallest_irreducible(p, n)
        self.zero = 0
        self.one = 1
        self._pow_p = [p**i for i in range(n + 1)]
        self._canon = None
        self._canon_rank = None
        self._exp = None
        self._log = None
        self._zech = None
        self._inv_table = None
        self._neg_table = None
        self._dense_mul = None
        self._dense_add = None
        if q <= TABLE_LIMIT:
            self._build_log_tables()
        if q <= DENSE_TABLE_LIMIT:
            self._build_dense_tables()

    # -- representation ------------------------------------------------

    def coeffs(self, code: int):
        """Coefficient tuple (c0, ..., c_{n-1}) of an element code."""
        p = self.p
        out = []
        for _ in range(self.n):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def code(self, coeffs) -> int:
        c = 0
        for i, ci in enumerate(coeffs):
            c += (ci % self.p) * self._pow_p[i]
        return c

    def elements(self):
        """All element codes in canonical (coefficient-lexicographic) order."""
        if self._canon is None:
            self._canon = sorted(range(self.q), key=self.coeffs)
            self._canon_rank = [0] * self.q
            for r, c in enumerate(self._canon):
                self._canon_rank[c] = r
        return self._canon

    def canon_rank(self, code: int) -> int:
        self.elements()
        return self._canon_rank[code]

    def describe(self) -> dict:
        """Stable serialisation: characteristic, degree, ascending modulus."""
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n})"

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.n == other.n
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    # -- table construction ---------------------------------------------

    def _poly_mul_code(self, a: int, b: int) -> int:
        pa, pb = self.coeffs(a), self.coeffs(b)
        prod = _poly_mul(_poly_trim(pa), _poly_trim(pb), self.p)
        red = _poly_mod(prod, self.modulus, self.p)
        return self.code(red + (0,) * (self.n - len(red)))

    def _build_log_tables(self):
        q = self.q
        # find a multiplicative generator by order testing
        fac = _prime_divisors(q - 1)
        g = None
        for cand in range(1, q):
            if all(self._pow_nolog(cand, (q - 1) // f) != 1 for f in fac):
                g = cand
                break
        exp = [0] * (q - 1)
        log = [-1] * q
        acc = 1
        for k in range(q - 1):
            exp[k] = acc
            log[acc] = k
            acc = self._poly_mul_code(acc, g)
        self._exp = exp
        self._log = log
        # Zech logarithms: zech[k] = log(1 + g^k), -1 when 1 + g^k == 0
        one = 1
        zech = [-1] * (q - 1)
        for k in range(q - 1):
            s = self._add_digits(one, exp[k])
            zech[k] = log[s] if s else -1
        self._zech = zech
        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(q - 1 - log[a]) % (q - 1)]
        self._inv_table = inv
        self._neg_table = [self._neg_digits(a) for a in range(q)]

    def _build_dense_tables(self):
        q = self.q
        self._dense_add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        self._dense_mul = [[self._mul_log(a, b) for b in range(q)] for a in range(q)]

    def _pow_nolog(self, a: int, e: int) -> int:
        r = 1
        b = a
        while e:
            if e & 1:
                r = self._poly_mul_code(r, b)
            b = self._poly_mul_code(b, b)
            e >>= 1
        return r

    # -- digit-level kernels ----------------------------------------------

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out = 0
        shift = 1
        for _ in range(self.n):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def _neg_digits(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out = 0
        shift = 1
        for _ in range(self.n):
            out += ((p - a % p) % p) * shift
            a //= p
            shift *= p
        return out

    def _mul_log(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    # -- public arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._dense_add is not None:
            return self._dense_add[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self._neg_table is not None:
            return self._neg_table[a]
        return self._neg_digits(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._dense_mul is not None:
            return self._dense_mul[a][b]
        if self._log is not None:
            return self._mul_log(a, b)
        return self._poly_mul_code(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._pow_nolog(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        if e < 0:
            return self._pow_nolog(self.inv(a), -e)
        return self._pow_nolog(a, e)

    def frobenius(self, a: int, k: int = 1) -> int:
        """k-fold Frobenius a -> a^(p^k)."""
        if k < 0:
            raise FieldError("frobenius exponent must be >= 0")
        if a == 0:
            return 0
        return self.pow(a, self.p ** (k % self.n))

    def felt(self, value) -> "Felt":
        if isinstance(value, Felt):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        return Felt(self, int(value))

    def from_int(self, c: int) -> int:
        """Code of the prime-subfield constant c (mod p)."""
        return c % self.p

    # -- convenience -------------------------------------------------------

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1


@dataclass(frozen=True)
class Felt:
    """A field element: owner field plus coefficient code."""

    field: Field
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise FieldError(f"code {self.code} out of range for {self.field}")

    @property
    def coeffs(self):
        return self.field.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, Felt):
            if other.field != self.field:
                raise FieldError("operands belong to different fields")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        return Felt(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Felt(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return Felt(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return Felt(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Felt(self.field, self.field.div(self.code, self._other(other)))

    def __rtruediv__(self, other):
        return Felt(self.field, self.field.div(self._other(other), self.code))

    def __neg__(self):
        return Felt(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return Felt(self.field, self.field.pow(self.code, e))

    def frobenius(self, k: int = 1) -> "Felt":
        return Felt(self.field, self.field.frobenius(self.code, k))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"Felt{self.coeffs}@F{self.field.q}"


@functools.lru_cache(maxsize=None)
def make_field(p: int, n: int) -> Field:
    """Construct (and cache) the canonical F_{p^n}.

    Rebuilding with the same arguments returns the identical descriptor.
    """
    return Field(p, n)


class FieldEmbedding:
    """Injective homomorphism F_{p^m} -> F_{p^n} fixing F_p.

    The image of the source polynomial-basis generator is the smallest root
    (in canonical element order) of the source modulus in the target field.
    """

    def __init__(self, src: Field, dst: Field):
        if src.p != dst.p:
            raise FieldError("embedding requires equal characteristic")
        if dst.n % src.n != 0:
            raise FieldError(
                f"degree {src.n} does not divide {dst.n}: no embedding exists"
            )
        self.src = src
        self.dst = dst
        self.gen_image = self._find_gen_image()
        self._map = self._build_map()

    def _find_gen_image(self) -> int:
        m = self.src.modulus
        dst = self.dst
        for cand in dst.elements():
            acc = 0
            power = 1
            for c in m:
                if c:
                    acc = dst.add(acc, dst.mul(c % dst.p, power))
                power = dst.mul(power, cand)
            if acc == 0:
                return cand
        raise FieldError("source modulus has no root in target field")

    def _build_map(self):
        src, dst = self.src, self.dst
        out = [0] * src.q
        powers = [1]
        for _ in range(src.n - 1):
            powers.append(dst.mul(powers[-1], self.gen_image))
        for a in range(src.q):
            acc = 0
            for ci, pw in zip(src.coeffs(a), powers):
                if ci:
                    acc = dst.add(acc, dst.mul(ci, pw))
            out[a] = acc
        return out

    def __call__(self, code: int) -> int:
        return self._map[code]

    def apply(self, code: int) -> int:
        return self._map[code]


@functools.lru_cache(maxsize=None)
def embed(src: Field, dst: Field) -> FieldEmbedding:
    """Canonical embedding of src into dst (deterministic)."""
    return FieldEmbedding(src, dst)


def _frobenius_power_matrix(field: Field, qexp: int, sign: int):
    """Columns of the F_p-linear map b -> b^qexp + sign*b on the basis g^i."""
    cols = []
    for i in range(field.n):
        e = field.p**i  # code of the basis element g^i
        img = field.pow(e, qexp)
        img = field.add(img, e if sign > 0 else field.neg(e))
        cols.append(field.coeffs(img))
    return cols


def _solve_fp_linear(field: Field, cols, rhs):
    """All solutions of sum_i v_i * cols[i] = rhs over F_p, as codes."""
    p, n = field.p, field.n
    # build augmented matrix rows: n equations (digit positions), n unknowns
    a = [[cols[j][i] for j in range(n)] + [rhs[i]] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if a[i][n]:
            return []
    free = [c for c in range(n) if c not in piv_cols]
    part = [0] * n
    for i, c in enumerate(piv_cols):
        part[c] = a[i][n]
    kernel = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, c in enumerate(piv_cols):
            v[c] = (-a[i][fc]) % p
        kernel.append(v)
    sols = []
    count = p ** len(kernel)
    for t in range(count):
        v = list(part)
        tt = t
        for k in kernel:
            m = tt % p
            tt //= p
            if m:
                v = [(x + m * y) % p for x, y in zip(v, k)]
        sols.append(field.code(v))
    return sols


def solve_artin_schreier(
    field: Field, qexp: int, sign: str, rhs: int, method: str = "linear"
):
    """Full solution set of b^qexp + b = rhs (sign '+') or b^qexp - b = rhs.

    qexp must be a power of the field characteristic.  Returns codes sorted in
    canonical element order; the set may be empty.  Two independent methods
    are provided (exhaustive scan and linearized-polynomial solve) so tests
    can cross-check them.
    """
    p = field.p
    e = qexp
    while e > 1 and e % p == 0:
        e //= p
    if e != 1:
        raise FieldError(f"qexp {qexp} is not a power of the characteristic {p}")
    if sign not in ("+", "-"):
        raise FieldError("sign must be '+' or '-'")
    s = 1 if sign == "+" else -1
    if method == "scan":
        sols = [
            b
            for b in range(field.q)
            if field.add(field.pow(b, qexp), b if s > 0 else field.neg(b)) == rhs
        ]
    elif method == "linear":
        cols = _frobenius_power_matrix(field, qexp, s)
        sols = _solve_fp_linear(field, cols, field.coeffs(rhs))
    else:
        raise FieldError(f"unknown method {method!r}")
    return sorted(sols, key=field.canon_rank)


def is_square(field: Field, a: int) -> bool:
    """True iff a is a square in the field (0 counts as a square)."""
    return field.is_square(a)
