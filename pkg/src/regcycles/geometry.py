"""Finite fields, classical forms, and the permutation actions built on them.

The module provides:

  * GF(p^e) arithmetic with elements encoded as plain ints (base-p
    coefficient vectors, constant term least significant);
  * non-degenerate symplectic, hermitian and quadratic spaces over such
    fields, with a fixed hyperbolic-basis convention;
  * constructors for the point/subspace/form domains that classical groups
    act on (singular points, non-degenerate 1- and 2-subspaces, anisotropic
    2-subspaces, maximal totally singular subspaces, polarizing quadratic
    forms in characteristic 2, flag and complement pairs);
  * conversion of matrix/semilinear generators into `perm.PermGroup`
    instances acting on those domains, with a strict domain-preservation
    check;
  * a plain text file format for matrix generators.

All domains are sorted lists of canonical labels, so repeated runs build
identical permutation groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .numtheory import is_prime
from .perm import PermGroup, Permutation

# Largest field order we will build tables for.
FIELD_CAP = 512

# Guard for exhaustive vector enumerations (q**n).
VECTOR_ENUM_CAP = 10**6

_field_cache: dict = {}


class DomainNotPreservedError(ValueError):
    """A generator mapped a domain label outside the domain."""


class MatrixFileError(ValueError):
    """Malformed matrix-generator file."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(p), for building field tables

def _poly_trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mulmod(a, b, mod, p):
    """(a * b) mod `mod` over GF(p); coefficient lists, low degree first."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_modred(prod, mod, p)


def _poly_modred(a, mod, p):
    a = list(a)
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(d):
                a[i - d + j] = (a[i - d + j] - c * mod[j]) % p
    return _poly_trim(tuple(a))


def _poly_powmod(a, k, mod, p):
    result = (1,)
    base = _poly_modred(a, mod, p)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        k >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(tuple(a)), _poly_trim(tuple(b))
    while b:
        # a mod b with b made monic
        inv = pow(b[-1], p - 2, p)
        b_monic = tuple(c * inv % p for c in b)
        a = _poly_modred(a, b_monic, p)
        a, b = b, a
    return a


def _is_irreducible(mod, p):
    """mod: monic coefficient list (c0..ce), degree e >= 1, over GF(p)."""
    e = len(mod) - 1
    if e == 1:
        return True
    x = (0, 1)
    # x**(p**e) == x (mod f) and gcd(x**(p**(e/r)) - x, f) = 1 for r | e
    xe = _poly_powmod(x, p**e, mod, p)
    if xe != x:
        return False
    for r in range(2, e + 1):
        if e % r or not is_prime(r):
            continue
        xr = _poly_powmod(x, p**(e // r), mod, p)
        diff = _poly_trim(tuple((a - b) % p for a, b in
                                itertools.zip_longest(xr, x, fillvalue=0)))
        g = _poly_gcd(diff, mod, p)
        if len(g) != 1:
            return False
    return True


def _least_irreducible(p, e):
    """Lexicographically least monic irreducible of degree e over GF(p),
    coefficients compared constant-term first."""
    for tail in itertools.product(range(p), repeat=e):
        mod = tuple(tail) + (1,)
        if mod[0] == 0:
            continue  # divisible by x
        if _is_irreducible(mod, p):
            return mod
    raise ArithmeticError(f"no irreducible of degree {e} over GF({p})")


# ---------------------------------------------------------------------------
# fields

class Fq:
    """GF(p^e).  Elements are ints in range(q) encoding base-p coefficient
    vectors (constant term least significant).  Addition/multiplication are
    table lookups; the tables are built once per (p, e, modulus)."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("need e >= 1")
        q = p**e
        if q > FIELD_CAP:
            raise OverflowError(f"field order {q} exceeds cap {FIELD_CAP}")
        if modulus is None:
            modulus = _least_irreducible(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus[:-1]) + (1,)
            if len(modulus) != e + 1:
                raise ValueError("modulus must be monic of degree e")
            if not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.e, self.q = p, e, q
        self.modulus = modulus
        self._add = [[self._add_raw(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        self._neg = [next(b for b in range(q) if self._add[a][b] == 0)
                     for a in range(q)]
        if q % 2:
            self._squares = {self._mul[a][a] for a in range(1, q)}
        # sanity: the multiplicative group has order q - 1
        g = self.generator()
        assert self.elt_pow(g, q - 1) == 1

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds):
        n = 0
        for c in reversed(ds):
            n = n * self.p + c
        return n

    def _add_raw(self, a, b):
        return self._from_digits([(x + y) % self.p for x, y in
                                  zip(self._digits(a), self._digits(b))])

    def _mul_raw(self, a, b):
        prod = _poly_mulmod(_poly_trim(tuple(self._digits(a))),
                            _poly_trim(tuple(self._digits(b))),
                            self.modulus, self.p)
        return self._from_digits(list(prod) + [0] * (self.e - len(prod)))

    def add(self, a, b):
        return self._add[a][b]

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def div(self, a, b):
        return self._mul[a][self.inv(b)]

    def elt_pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        while k:
            if k & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            k >>= 1
        return r

    def frobenius(self, a, t=1):
        """a ** (p**t)."""
        return self.elt_pow(a, self.p**(t % self.e) if self.e > 1 else self.p)

    def is_square(self, a):
        if self.q % 2 == 0:
            return True  # squaring is a bijection in characteristic 2
        return a == 0 or a in self._squares

    def generator(self):
        """Least generator of the multiplicative group."""
        for g in range(2, self.q):
            seen, x = 1, g
            while x != 1:
                x = self._mul[x][g]
                seen += 1
            if seen == self.q - 1:
                return g
        return 1  # q = 2

    def __repr__(self):
        return f"Fq({self.p}, {self.e})"


def field_build(p: int, e: int, modulus=None) -> Fq:
    """Build (and cache) GF(p^e) with the default or an explicit modulus."""
    key = (p, e, tuple(modulus) if modulus is not None else None)
    if key not in _field_cache:
        _field_cache[key] = Fq(p, e, modulus)
    return _field_cache[key]


# ---------------------------------------------------------------------------
# vectors, matrices, subspaces

def vec_add(K, u, v):
    return tuple(K.add(a, b) for a, b in zip(u, v))


def vec_scale(K, c, v):
    return tuple(K.mul(c, a) for a in v)


def vec_mat(K, v, M):
    """Row vector times matrix."""
    n = len(M[0])
    out = [0] * n
    for i, vi in enumerate(v):
        if vi:
            row = M[i]
            for j in range(n):
                if row[j]:
                    out[j] = K.add(out[j], K.mul(vi, row[j]))
    return tuple(out)


def mat_mul(K, A, B):
    return tuple(vec_mat(K, row, B) for row in A)


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_transpose(M):
    return tuple(zip(*M))


def mat_map(K, M, f):
    return tuple(tuple(f(x) for x in row) for row in M)


def rref(K, rows):
    """Reduced row-echelon form; returns (rows without zeros, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = K.inv(rows[r][c])
        rows[r] = [K.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [K.sub(x, K.mul(f, y))
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def mat_rank(K, M):
    return len(rref(K, M)[0])


def mat_inv(K, M):
    n = len(M)
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(n)]
           for i in range(n)]
    reduced, pivots = rref(K, aug)
    if pivots[:n] != tuple(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def nullspace(K, M):
    """Canonical basis of the left null space {v : v M = 0}."""
    reduced, pivots = rref(K, mat_transpose(M))
    n = len(M)
    basis = []
    pivot_set = set(pivots)
    for f in range(n):
        if f in pivot_set:
            continue
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = K.neg(reduced[i][f])
        basis.append(tuple(v))
    return rref(K, basis)[0]


@dataclass(frozen=True, order=True)
class Subspace:
    """Subspace given by its unique reduced row-echelon basis."""

    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, K, v):
        v = list(v)
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x)
            if v[lead]:
                c = v[lead]
                v = [K.sub(x, K.mul(c, y)) for x, y in zip(v, row)]
        return not any(v)

    def vectors(self, K):
        """All vectors of the subspace (q**dim of them)."""
        n = len(self.basis[0]) if self.basis else 0
        for coeffs in itertools.product(range(K.q), repeat=self.dim):
            v = tuple([0] * n) if n else ()
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = vec_add(K, v, vec_scale(K, c, row))
            yield v


def span(K, vectors) -> Subspace:
    return Subspace(rref(K, list(vectors))[0])


def subspace_intersection_dim(K, a: Subspace, b: Subspace) -> int:
    return a.dim + b.dim - mat_rank(K, list(a.basis) + list(b.basis))


# ---------------------------------------------------------------------------
# classical form spaces

_QUAD_KINDS = {"+", "-", "o"}


class FormSpace:
    """A vector space over GF(q0) with a fixed non-degenerate classical form.

    kind is one of "trivial", "symplectic", "hermitian", "quadratic".  For
    quadratic spaces epsilon is "+", "-" or "o".  For hermitian spaces the
    field is GF(q**2) and `conj` is the involutory field automorphism
    x -> x**q; the Gram matrix is the identity.  Quadratic forms are stored
    as an upper-triangular coefficient matrix `upper` with
    Q(v) = sum_{i<=j} upper[i][j] v_i v_j; the polar form is derived.

    Basis convention: hyperbolic pairs are interleaved, so basis vectors
    2i, 2i+1 form the i-th hyperbolic pair, followed by the anisotropic
    tail (if any).
    """

    def __init__(self, kind, n, field: Fq, epsilon=None, upper=None,
                 gram=None, check_witt=True):
        if kind not in ("trivial", "symplectic", "hermitian", "quadratic"):
            raise ValueError(f"unknown form kind {kind!r}")
        if kind == "quadratic" and epsilon not in _QUAD_KINDS:
            raise ValueError("quadratic form needs epsilon in {+, -, o}")
        self.kind = kind
        self.n = n
        self.field = field
        self.epsilon = epsilon if kind == "quadratic" else None
        if kind == "hermitian":
            if field.e % 2:
                raise ValueError("hermitian form needs a field GF(q**2)")
            self.q = field.p**(field.e // 2)
            self._conj_t = field.e // 2
        else:
            self.q = field.q
            self._conj_t = 0
        self.upper = upper
        self.gram = gram if gram is not None else self._derive_gram()
        self.witt_index = self._expected_witt()
        if check_witt and self.kind != "trivial" \
                and field.q**n <= VECTOR_ENUM_CAP:
            found = len(self._greedy_totally_singular())
            if found != self.witt_index:
                raise AssertionError(
                    f"Witt index mismatch: expected {self.witt_index}, "
                    f"greedy chain reached {found}")

    # -- form values -------------------------------------------------------

    def conj(self, a):
        return self.field.frobenius(a, self._conj_t) if self._conj_t else a

    def quad_value(self, v):
        if self.kind != "quadratic":
            raise ValueError("not a quadratic space")
        K = self.field
        total = 0
        for i in range(self.n):
            if v[i]:
                row = self.upper[i]
                for j in range(i, self.n):
                    if row[j] and v[j]:
                        total = K.add(total, K.mul(row[j], K.mul(v[i], v[j])))
        return total

    def bilinear(self, u, v):
        """Bilinear (or sesquilinear) form value; for quadratic spaces this
        is the polar form Q(u+v) - Q(u) - Q(v); for trivial spaces, the
        plain dot product (used for perps and duality)."""
        K = self.field
        total = 0
        for i in range(self.n):
            if u[i]:
                row = self.gram[i]
                for j in range(self.n):
                    if row[j] and v[j]:
                        w = self.conj(v[j])
                        total = K.add(total, K.mul(row[j], K.mul(u[i], w)))
        return total

    def is_singular_vector(self, v):
        if self.kind == "trivial" or self.kind == "symplectic":
            return True
        if self.kind == "quadratic":
            return self.quad_value(v) == 0
        return self.bilinear(v, v) == 0  # hermitian

    def is_nondegenerate_point(self, v):
        """1-subspace <v> with <v> intersecting its perp trivially (for odd
        characteristic quadratic and hermitian spaces) or, in characteristic
        2 quadratic spaces, a non-singular point."""
        if self.kind == "quadratic":
            return self.quad_value(v) != 0
        if self.kind == "hermitian":
            return self.bilinear(v, v) != 0
        raise ValueError("non-degenerate points need a quadratic or "
                         "hermitian space")

    # -- construction helpers ----------------------------------------------

    def _derive_gram(self):
        K = self.field
        n = self.n
        if self.kind == "trivial":
            return mat_identity(n)  # used only for perps/duality
        if self.kind == "hermitian":
            return mat_identity(n)
        if self.kind == "symplectic":
            g = [[0] * n for _ in range(n)]
            for i in range(0, n, 2):
                g[i][i + 1] = 1
                g[i + 1][i] = K.neg(1)
            return tuple(tuple(r) for r in g)
        # quadratic: polar form B(u, v) = Q(u+v) - Q(u) - Q(v)
        u = self.upper
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    g[i][j] = K.add(u[i][i], u[i][i])
                else:
                    a, b = min(i, j), max(i, j)
                    g[i][j] = u[a][b]
        return tuple(tuple(r) for r in g)

    def _expected_witt(self):
        n = self.n
        if self.kind == "trivial":
            return n
        if self.kind in ("symplectic",):
            return n // 2
        if self.kind == "hermitian":
            return n // 2
        return {"+": n // 2, "-": n // 2 - 1, "o": (n - 1) // 2}[self.epsilon]

    def _greedy_totally_singular(self):
        """Greedily extend a totally singular subspace to a maximal one.
        All maximal totally singular subspaces of a non-degenerate form
        share the Witt index as dimension, so the chain length is exact."""
        K = self.field
        chain: list[tuple[int, ...]] = []
        while True:
            current = span(K, chain) if chain else None
            candidates = self.perp(current) if current else None
            vectors = (candidates.vectors(K) if candidates
                       else itertools.product(range(K.q), repeat=self.n))
            ext = None
            for v in vectors:
                v = tuple(v)
                if not any(v) or not self.is_singular_vector(v):
                    continue
                if current is not None and current.contains(K, v):
                    continue
                if current is not None and self.kind == "hermitian" and any(
                        self.bilinear(b, v) for b in chain):
                    continue
                ext = v
                break
            if ext is None:
                return chain
            chain.append(ext)

    def perp(self, sub: Subspace) -> Subspace:
        """Orthogonal complement with respect to the (polar) form."""
        K = self.field
        if not sub.basis:
            return span(K, [tuple(1 if j == i else 0 for j in range(self.n))
                            for i in range(self.n)])
        # v in perp iff for each basis row b: sum_j (b G)_j conj'(v_j) = 0;
        # applying conj to the equation turns it into a linear system in v.
        rows = []
        for b in sub.basis:
            w = vec_mat(K, b, self.gram)
            rows.append(tuple(self.conj(x) for x in w)
                        if self._conj_t else w)
        return Subspace(nullspace(K, mat_transpose(rows)))


def standard_form(kind, n, q, epsilon=None, modulus=None) -> FormSpace:
    """Build the standard non-degenerate form space of the given kind.

    `q` is the defining parameter: hermitian spaces live over GF(q**2),
    everything else over GF(q).  Conventions: interleaved hyperbolic pairs
    with Q(sum x_i e_i + y_i f_i) = sum x_i y_i plus an anisotropic tail;
    hermitian Gram matrix is the identity.
    """
    fact = _prime_power(q)
    if fact is None:
        raise ValueError(f"{q} is not a prime power")
    p, e = fact
    if kind == "hermitian":
        field = field_build(p, 2 * e, modulus)
    else:
        field = field_build(p, e, modulus)
    K = field
    if kind in ("trivial", "hermitian"):
        return FormSpace(kind, n, field)
    if kind == "symplectic":
        if n % 2:
            raise ValueError("symplectic spaces have even dimension")
        return FormSpace(kind, n, field)
    if kind != "quadratic":
        raise ValueError(f"unknown form kind {kind!r}")
    if epsilon not in _QUAD_KINDS:
        raise ValueError("quadratic form needs epsilon in {+, -, o}")
    if epsilon == "o" and n % 2 == 0:
        raise ValueError("epsilon 'o' needs odd dimension")
    if epsilon != "o" and n % 2:
        raise ValueError(f"epsilon {epsilon!r} needs even dimension")
    if epsilon == "o" and p == 2:
        raise ValueError("odd-dimensional quadratic spaces need odd q")
    upper = [[0] * n for _ in range(n)]
    pairs = n // 2 if epsilon == "+" else (n - 1) // 2 if epsilon == "o" \
        else n // 2 - 1
    for i in range(pairs):
        upper[2 * i][2 * i + 1] = 1
    if epsilon == "o":
        upper[n - 1][n - 1] = 1
    elif epsilon == "-":
        # anisotropic plane: z1**2 + z1 z2 + a z2**2 with t**2 + t + a
        # irreducible; pick the least such a
        a = next(a for a in range(1, K.q)
                 if all(K.add(K.add(K.mul(t, t), t), a) for t in range(K.q)))
        upper[n - 2][n - 2] = 1
        upper[n - 2][n - 1] = 1
        upper[n - 1][n - 1] = a
    return FormSpace("quadratic", n, field, epsilon,
                     upper=tuple(tuple(r) for r in upper))


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            return (p, e) if q == 1 else None
    return None


# ---------------------------------------------------------------------------
# semilinear maps

@dataclass(frozen=True)
class SemilinearMap:
    """v -> frobenius^twist(v) * matrix, optionally composed with the
    duality W -> W^perp (subspace domains only)."""

    matrix: tuple[tuple[int, ...], ...]
    twist: int = 0
    duality: bool = False

    def apply_vector(self, space: FormSpace, v):
        K = space.field
        if self.twist:
            v = tuple(K.frobenius(x, self.twist) for x in v)
        return vec_mat(K, v, self.matrix)

    def apply_subspace(self, space: FormSpace, sub: Subspace) -> Subspace:
        mapped = span(space.field,
                      [self.apply_vector(space, b) for b in sub.basis])
        return space.perp(mapped) if self.duality else mapped


def duality_map(space: FormSpace) -> SemilinearMap:
    """The involution W -> W^perp (with respect to space.gram)."""
    return SemilinearMap(mat_identity(space.n), duality=True)


def map_order(space: FormSpace, g: SemilinearMap, cap: int = 10**6) -> int:
    """Order of a twist-free, duality-free map, by repeated multiplication."""
    if g.twist or g.duality:
        raise ValueError("order is only computed for plain matrices")
    K = space.field
    ident = mat_identity(space.n)
    m = g.matrix
    for k in range(1, cap + 1):
        if m == ident:
            return k
        m = mat_mul(K, m, g.matrix)
    raise ArithmeticError("order exceeds cap")


def semisimple_decomposition(x: SemilinearMap, space: FormSpace):
    """(C_V(x), [V, x], l') for a semisimple matrix x.

    C_V(x) is the kernel of x - 1, [V, x] its image, and l' = dim [V, x] is
    the rank of x - 1.  Requires the order of x to be coprime to the field
    characteristic (otherwise V need not split as the direct sum).
    """
    if x.twist or x.duality:
        raise ValueError("decomposition needs a plain matrix")
    K = space.field
    order = map_order(space, x)
    if order % K.p == 0:
        raise ValueError(f"order {order} divisible by the characteristic "
                         f"{K.p}: element is not semisimple")
    n = space.n
    diff = tuple(tuple(K.sub(x.matrix[i][j], 1 if i == j else 0)
                       for j in range(n)) for i in range(n))
    image = Subspace(rref(K, diff)[0])
    kernel = Subspace(nullspace(K, diff))
    assert kernel.dim + image.dim == n
    return kernel, image, image.dim


# ---------------------------------------------------------------------------
# action domains

def _canonical_point(K, v):
    lead = next(x for x in v if x)
    if lead == 1:
        return tuple(v)
    c = K.inv(lead)
    return vec_scale(K, c, v)


def _projective_points(space: FormSpace):
    K, n = space.field, space.n
    if K.q ** n > VECTOR_ENUM_CAP:
        raise OverflowError("projective point enumeration exceeds cap")
    for lead in range(n):
        prefix = (0,) * lead + (1,)
        for rest in itertools.product(range(K.q), repeat=n - lead - 1):
            yield prefix + rest


class ActionDomain:
    """A sorted, indexed list of canonical labels with a uniform action of
    semilinear maps.  kind is one of "point", "subspace", "pair", "form"."""

    def __init__(self, name, kind, space: FormSpace, labels):
        self.name = name
        self.kind = kind
        self.space = space
        self.labels = tuple(sorted(labels))
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate labels")

    @property
    def degree(self):
        return len(self.labels)

    def _apply(self, g: SemilinearMap, label, minv):
        space, K = self.space, self.space.field
        if self.kind == "point":
            if g.duality:
                raise DomainNotPreservedError(
                    f"duality does not act on the point domain {self.name}")
            return _canonical_point(K, g.apply_vector(space, label))
        if self.kind == "subspace":
            return g.apply_subspace(space, label)
        if self.kind == "pair":
            a, b = (g.apply_subspace(space, s) for s in label)
            return (a, b) if (a.dim, a.basis) <= (b.dim, b.basis) else (b, a)
        if self.kind == "form":
            if g.twist or g.duality:
                raise DomainNotPreservedError(
                    "form domains only support plain matrix generators")
            # Q -> Q o g^{-1}; the polar form is preserved, so the image is
            # again determined by its values on the basis vectors.
            return tuple(_polarized_quad_value(space, label,
                                               minv[i])
                         for i in range(space.n))
        raise ValueError(f"unknown domain kind {self.kind!r}")

    def permutation(self, g: SemilinearMap) -> Permutation:
        minv = None
        if self.kind == "form":
            minv = mat_inv(self.space.field, g.matrix)
        images = [0] * self.degree
        for i, lab in enumerate(self.labels):
            out = self._apply(g, lab, minv)
            j = self.index.get(out)
            if j is None:
                raise DomainNotPreservedError(
                    f"generator maps label {lab!r} of domain {self.name} "
                    f"outside the domain")
            images[i] = j
        return Permutation(images)

    def label_lines(self):
        """One canonical textual label per line, for cross-tool diffing."""
        return [_label_text(lab) for lab in self.labels]


def _label_text(lab):
    if isinstance(lab, Subspace):
        return ";".join(" ".join(str(x) for x in row) for row in lab.basis)
    if isinstance(lab, tuple) and lab and isinstance(lab[0], Subspace):
        return " | ".join(_label_text(s) for s in lab)
    return " ".join(str(x) for x in lab)


def _polarized_quad_value(space: FormSpace, diag, v):
    """Value at v of the quadratic form with polarization space.gram and
    the given values on the basis vectors (characteristic 2)."""
    K = space.field
    total = 0
    n = space.n
    for i in range(n):
        if v[i]:
            total = K.add(total, K.mul(diag[i], K.mul(v[i], v[i])))
            for j in range(i + 1, n):
                if v[j] and space.gram[i][j]:
                    total = K.add(total, K.mul(space.gram[i][j],
                                               K.mul(v[i], v[j])))
    return total


def perm_image(generators, domain: ActionDomain) -> PermGroup:
    """Permutation group induced by the generators on the domain.

    Raises DomainNotPreservedError if any generator moves a label outside
    the domain (e.g. a similarity swapping the two orbits on non-degenerate
    points)."""
    perms = [domain.permutation(g) for g in generators]
    return PermGroup(domain.degree, perms)


# -- the individual domains --------------------------------------------------

def singular_points(space: FormSpace) -> ActionDomain:
    """Totally singular 1-subspaces (all projective points for trivial and
    symplectic forms)."""
    labels = [v for v in _projective_points(space)
              if space.is_singular_vector(v)]
    return ActionDomain(f"singular-points[{space.kind},{space.n},{space.q}]",
                        "point", space, labels)


def nondegenerate_points(space: FormSpace):
    """Non-degenerate 1-subspaces.

    For quadratic spaces over odd q the group has two orbits, split by
    whether Q(v) is a square; returns (NS1+, NS1-).  For quadratic spaces
    over even q (non-singular points) and hermitian spaces there is a
    single orbit; returns one domain.
    """
    K = space.field
    labels = [v for v in _projective_points(space)
              if space.is_nondegenerate_point(v)]
    base = f"{space.kind},{space.n},{space.q}"
    if space.kind == "quadratic" and K.q % 2:
        plus = [v for v in labels if K.is_square(space.quad_value(v))]
        minus = [v for v in labels if not K.is_square(space.quad_value(v))]
        return (ActionDomain(f"ns1+[{base}]", "point", space, plus),
                ActionDomain(f"ns1-[{base}]", "point", space, minus))
    return ActionDomain(f"ns1[{base}]", "point", space, labels)


def _two_subspaces_with(space: FormSpace, point_ok, subspace_ok):
    """2-subspaces spanned by admissible points and passing a predicate."""
    K = space.field
    points = [v for v in _projective_points(space) if point_ok(v)]
    seen = set()
    for i, u in enumerate(points):
        for v in points[i + 1:]:
            sub = span(K, [u, v])
            if sub.dim != 2 or sub in seen:
                continue
            if subspace_ok(sub):
                seen.add(sub)
    return seen


def anisotropic_2_subspaces(space: FormSpace) -> ActionDomain:
    """2-subspaces containing no nonzero singular vector (quadratic only)."""
    if space.kind != "quadratic":
        raise ValueError("anisotropic 2-subspaces need a quadratic space")
    K = space.field

    def aniso(sub):
        return all(not any(v) or space.quad_value(v) != 0
                   for v in sub.vectors(K))

    labels = _two_subspaces_with(space, space.is_nondegenerate_point, aniso)
    return ActionDomain(f"aniso2[{space.epsilon},{space.n},{space.q}]",
                        "subspace", space, labels)


def nondegenerate_2_subspaces(space: FormSpace) -> ActionDomain:
    """Non-degenerate 2-subspaces (the form restricts non-degenerately)."""
    K = space.field

    def nondeg(sub):
        rows = [[space.bilinear(a, b) for b in sub.basis] for a in sub.basis]
        return mat_rank(K, rows) == 2

    labels = _two_subspaces_with(space, lambda v: True, nondeg)
    return ActionDomain(f"nondeg2[{space.kind},{space.n},{space.q}]",
                        "subspace", space, labels)


def totally_singular_subspaces(space: FormSpace, k: int):
    """All totally singular k-subspaces, by breadth-first extension."""
    K = space.field
    level = {Subspace(())}
    for _ in range(k):
        nxt = set()
        for sub in level:
            candidates = space.perp(sub) if sub.basis else None
            vectors = (candidates.vectors(K) if candidates
                       else _projective_points(space))
            for v in vectors:
                v = tuple(v)
                if not any(v) or not _extends_totally_singular(space, sub, v):
                    continue
                nxt.add(span(K, list(sub.basis) + [v]))
        level = nxt
    return level


def _extends_totally_singular(space: FormSpace, sub: Subspace, v) -> bool:
    """Can the totally singular subspace `sub` be extended by v?  Candidates
    already lie in the perp of sub, so only singularity of v itself and
    novelty need checking."""
    if not space.is_singular_vector(v):
        return False
    if sub.basis and sub.contains(space.field, v):
        return False
    return True


def maximal_totally_singular(space: FormSpace) -> ActionDomain:
    """Totally singular subspaces of dimension equal to the Witt index."""
    if space.kind == "trivial":
        raise ValueError("need a non-trivial form")
    labels = totally_singular_subspaces(space, space.witt_index)
    return ActionDomain(f"maxts[{space.kind},{space.epsilon},"
                        f"{space.n},{space.q}]", "subspace", space, labels)


def quadratic_forms_polarizing(space: FormSpace, epsilon: str) -> ActionDomain:
    """All quadratic forms of type epsilon whose polarization is the given
    symplectic form (characteristic 2 only).

    A form is labeled by its values on the basis vectors; the symplectic
    group acts by Q -> Q o g^{-1}.  The two types together exhaust the
    q**n polarizing forms.
    """
    K = space.field
    if space.kind != "symplectic" or K.p != 2:
        raise ValueError("polarizing forms need a symplectic space in "
                         "characteristic 2")
    if epsilon not in ("+", "-"):
        raise ValueError("epsilon must be '+' or '-'")
    n, q = space.n, K.q
    m = n // 2
    # singular-vector counts (including 0) for the two types
    count_plus = q**(n - 1) + q**m - q**(m - 1)
    count_minus = q**(n - 1) - q**m + q**(m - 1)
    labels = []
    for diag in itertools.product(range(q), repeat=n):
        zeros = sum(1 for v in itertools.product(range(q), repeat=n)
                    if _polarized_quad_value(space, diag, v) == 0)
        if zeros == count_plus:
            etype = "+"
        elif zeros == count_minus:
            etype = "-"
        else:  # pragma: no cover - would indicate a degenerate form
            raise AssertionError("polarizing form of unexpected type")
        if etype == epsilon:
            labels.append(diag)
    return ActionDomain(f"forms{epsilon}[{space.n},{space.q}]",
                        "form", space, labels)


def pair_domains(space: FormSpace, k: int):
    """(Omega_{k,<=}, Omega_{k,perp}): unordered pairs {W, U} with
    dim W = k, dim U = n - k, and W <= U resp. W + U = V."""
    n = space.n
    if not 1 <= k < n / 2:
        raise ValueError("need 1 <= k < n/2")
    K = space.field
    small = all_subspaces(space, k)
    big = all_subspaces(space, n - k)
    leq, direct = [], []
    for w in small:
        wrows = list(w.basis)
        for u in big:
            r = mat_rank(K, wrows + list(u.basis))
            if r == u.dim:
                leq.append((w, u))
            elif r == n and w.dim + u.dim == n:
                direct.append((w, u))
    base = f"{n},{k},{space.q}"
    return (ActionDomain(f"pairs-le[{base}]", "pair", space, leq),
            ActionDomain(f"pairs-perp[{base}]", "pair", space, direct))


def all_subspaces(space: FormSpace, k: int):
    """All k-subspaces of the underlying vector space."""
    K = space.field
    level = {Subspace(())}
    for _ in range(k):
        nxt = set()
        for sub in level:
            for v in _projective_points(space):
                if not sub.basis or not sub.contains(K, v):
                    nxt.add(span(K, list(sub.basis) + [v]))
        level = nxt
    return level


# ---------------------------------------------------------------------------
# combinatorial actions

def k_set_action(m: int, k: int) -> PermGroup:
    """Sym(m) acting on k-subsets, generated by an m-cycle and (1 2)."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    subsets = sorted(itertools.combinations(range(m), k))
    index = {s: i for i, s in enumerate(subsets)}
    cycle = [(i + 1) % m for i in range(m)]
    swap = list(range(m))
    if m >= 2:
        swap[0], swap[1] = 1, 0
    perms = []
    for base in (cycle, swap):
        images = [index[tuple(sorted(base[x] for x in s))] for s in subsets]
        perms.append(Permutation(images))
    return PermGroup(len(subsets), perms)


def k_set_labels(m: int, k: int):
    return [" ".join(str(x + 1) for x in s)
            for s in sorted(itertools.combinations(range(m), k))]


def product_action(base: PermGroup, r: int,
                   cap: int = 10**6) -> PermGroup:
    """Wreath product of the base group with Sym(r) in product action.

    Degree is (base degree)**r.  Generators: each base generator acting on
    the first coordinate, plus the coordinate r-cycle (and a coordinate
    transposition when r >= 3), which together generate base wr Sym(r).
    """
    if r < 1:
        raise ValueError("need r >= 1")
    d = base.degree
    if d**r > cap:
        raise OverflowError("product action degree exceeds cap")
    if r == 1:
        return base

    def idx(t):
        n = 0
        for x in t:
            n = n * d + x
        return n

    tuples = list(itertools.product(range(d), repeat=r))
    perms = []
    for g in base.generators:
        perms.append(Permutation([idx((g.images[t[0]],) + t[1:])
                                  for t in tuples]))
    perms.append(Permutation([idx(t[1:] + t[:1]) for t in tuples]))
    if r >= 3:
        perms.append(Permutation([idx((t[1], t[0]) + t[2:]) for t in tuples]))
    return PermGroup(d**r, perms)


def product_labels(base_labels, r: int):
    return [" | ".join(t)
            for t in itertools.product([str(x) for x in base_labels],
                                       repeat=r)]


def sl_generators(n: int, field: Fq):
    """Generators of SL_n(q): the transvections I + z**k * E_{12} for a
    field generator z (one per coefficient of an additive basis) and the
    signed permutation matrix of the n-cycle."""
    if n < 2:
        raise ValueError("need n >= 2")
    K = field
    gens = []
    z = K.generator()
    coeff = 1
    for _ in range(K.e):
        rows = [list(row) for row in mat_identity(n)]
        rows[0][1] = coeff
        gens.append(SemilinearMap(tuple(tuple(r) for r in rows)))
        coeff = K.mul(coeff, z)
    cyc = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        cyc[i][i + 1] = 1
    cyc[n - 1][0] = K.neg(1) if n % 2 == 0 else 1
    gens.append(SemilinearMap(tuple(tuple(r) for r in cyc)))
    return gens


# ---------------------------------------------------------------------------
# matrix generator files

def parse_matrix_file(text: str):
    """Parse a matrix-generator file; returns (FormSpace, [SemilinearMap]).

    Format: `GF p e [c0 c1 ... ce]`, `dim n`, `form kind [epsilon]`, then
    per generator a `gen` line followed by n rows of n field elements,
    optionally followed by `twist t` and/or `duality` lines.  `#` starts a
    comment.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    pos = 0

    def take(expect=None):
        nonlocal pos
        if pos >= len(lines):
            raise MatrixFileError(len(text.splitlines()) + 1,
                                  f"unexpected end of file"
                                  + (f" (wanted {expect})" if expect else ""))
        item = lines[pos]
        pos += 1
        return item

    lineno, header = take("GF header")
    parts = header.split()
    if parts[0] != "GF" or len(parts) < 3:
        raise MatrixFileError(lineno, "expected 'GF p e [modulus...]'")
    try:
        p, e = int(parts[1]), int(parts[2])
        modulus = tuple(int(x) for x in parts[3:]) or None
    except ValueError as exc:
        raise MatrixFileError(lineno, str(exc)) from None
    try:
        field = field_build(p, e, modulus)
    except (ValueError, OverflowError) as exc:
        raise MatrixFileError(lineno, str(exc)) from None

    lineno, dim_line = take("dim")
    parts = dim_line.split()
    if parts[0] != "dim" or len(parts) != 2 or not parts[1].isdigit():
        raise MatrixFileError(lineno, "expected 'dim n'")
    n = int(parts[1])

    lineno, form_line = take("form")
    parts = form_line.split()
    if parts[0] != "form" or len(parts) not in (2, 3):
        raise MatrixFileError(lineno, "expected 'form kind [epsilon]'")
    kind = parts[1]
    epsilon = parts[2] if len(parts) == 3 else None
    try:
        if kind == "quadratic":
            q = field.q
            space = standard_form(kind, n, q, epsilon,
                                  modulus=modulus)
        elif kind == "hermitian":
            if field.e % 2:
                raise ValueError("hermitian form needs GF(q**2)")
            space = FormSpace(kind, n, field)
        else:
            space = FormSpace(kind, n, field)
    except (ValueError, AssertionError) as exc:
        raise MatrixFileError(lineno, str(exc)) from None

    gens = []
    while pos < len(lines):
        lineno, line = take()
        if line != "gen":
            raise MatrixFileError(lineno, f"expected 'gen', got {line!r}")
        rows = []
        for _ in range(n):
            lineno, row_line = take("matrix row")
            entries = row_line.split()
            if len(entries) != n:
                raise MatrixFileError(lineno, f"expected {n} entries")
            try:
                row = tuple(int(x) for x in entries)
            except ValueError:
                raise MatrixFileError(lineno, "non-integer entry") from None
            if any(not 0 <= x < field.q for x in row):
                raise MatrixFileError(lineno,
                                      f"entry out of range 0..{field.q - 1}")
            rows.append(row)
        twist = 0
        duality = False
        while pos < len(lines) and lines[pos][1].split()[0] in ("twist",
                                                                "duality"):
            lineno, extra = take()
            parts = extra.split()
            if parts[0] == "twist":
                if len(parts) != 2 or not parts[1].isdigit():
                    raise MatrixFileError(lineno, "expected 'twist t'")
                twist = int(parts[1])
            else:
                duality = True
        g = SemilinearMap(tuple(rows), twist, duality)
        try:
            mat_inv(field, g.matrix)
        except ValueError:
            raise MatrixFileError(lineno, "generator matrix is singular") \
                from None
        gens.append(g)
    if not gens:
        raise MatrixFileError(len(text.splitlines()) + 1, "no generators")
    return space, gens


def builtin_matrix_group(name: str):
    """Load one of the shipped generator files (sp6_2, o8p_2, o7_3, su5_2);
    returns (FormSpace, [SemilinearMap])."""
    from importlib import resources

    ref = resources.files("regcycles").joinpath("data", f"{name}.mat")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"no builtin matrix group named {name!r}") from None
    return parse_matrix_file(text)


def emit_matrix_file(space: FormSpace, gens) -> str:
    field = space.field
    out = [f"GF {field.p} {field.e} " + " ".join(str(c)
                                                 for c in field.modulus)]
    out.append(f"dim {space.n}")
    out.append(f"form {space.kind}"
               + (f" {space.epsilon}" if space.epsilon else ""))
    for g in gens:
        out.append("gen")
        for row in g.matrix:
            out.append(" ".join(str(x) for x in row))
        if g.twist:
            out.append(f"twist {g.twist}")
        if g.duality:
            out.append("duality")
    return "\n".join(out) + "\n"
