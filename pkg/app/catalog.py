"""
Built-in example algebras with known invariants
"""

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Callable, Dict, List, Optional, Tuple

from app.algebra import Algebra, subalgebra_closure
from app.config import (
    DEFAULT_SEED_SPEC,
    FUZZ_INNER_EVERY,
    FUZZ_MAX_DIM,
    MAX_MATRIX_ALGEBRA_SIZE,
    MAX_RANDOM_DIM,
    MAX_TRIANGULAR_SIZE,
    MAX_TRUNCATED_DEGREE,
    RANDOM_ENTRY_RANGE,
    RANDOM_MAX_ATTEMPTS,
    RANDOM_MAX_MATRIX_SIZE,
)
from app.errors import CatalogError
from app.linalg import Matrix, Subspace, determinant, inverse, unit_vector
from app.logger import log_debug


def _empty_table(n: int) -> List[List[List[int]]]:
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def _matrix_units(n: int) -> Algebra:
    names = [f"E{p + 1}{q + 1}" for p in range(n) for q in range(n)]
    table = _empty_table(n * n)
    for p in range(n):
        for q in range(n):
            for s in range(n):
                table[p * n + q][q * n + s][p * n + s] = 1
    unit = [1 if p == q else 0 for p in range(n) for q in range(n)]
    return Algebra.from_table(names, table, unit)


def matrix_algebra(n: int) -> Algebra:
    """M_n(Q) on the matrix units E_pq (index p*n + q)"""
    if not 1 <= n <= MAX_MATRIX_ALGEBRA_SIZE:
        raise CatalogError(f"matrix algebra size must be between 1 and {MAX_MATRIX_ALGEBRA_SIZE}, got {n}")
    return _matrix_units(n)


def truncated_poly(k: int) -> Algebra:
    """Q[x]/(x^k)"""
    if not 1 <= k <= MAX_TRUNCATED_DEGREE:
        raise CatalogError(f"truncation degree must be between 1 and {MAX_TRUNCATED_DEGREE}, got {k}")
    names = ["1"] + ["x" if a == 1 else f"x^{a}" for a in range(1, k)]
    table = _empty_table(k)
    for a in range(k):
        for b in range(k - a):
            table[a][b][a + b] = 1
    return Algebra.from_table(names, table, unit_vector(k, 0))


def dual_numbers() -> Algebra:
    base = truncated_poly(2)
    return Algebra(2, ("1", "eps"), base.structure_constants, base.unit)


def upper_triangular(n: int) -> Algebra:
    if not 1 <= n <= MAX_TRIANGULAR_SIZE:
        raise CatalogError(f"triangular size must be between 1 and {MAX_TRIANGULAR_SIZE}, got {n}")
    pairs = [(p, q) for p in range(n) for q in range(p, n)]
    index = {pq: i for i, pq in enumerate(pairs)}
    table = _empty_table(len(pairs))
    for (p, q), i in index.items():
        for s in range(q, n):
            table[i][index[(q, s)]][index[(p, s)]] = 1
    unit = [1 if p == q else 0 for p, q in pairs]
    return Algebra.from_table([f"E{p + 1}{q + 1}" for p, q in pairs], table, unit)


def quaternion_algebra() -> Algebra:
    """(-1,-1 / Q) on 1, i, j, k"""
    # products of basis units as (sign, index)
    rules = {
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 1): (-1, 3),
        (2, 3): (1, 1), (3, 2): (-1, 1),
        (3, 1): (1, 2), (1, 3): (-1, 2),
    }
    table = _empty_table(4)
    for a in range(4):
        for b in range(4):
            if a == 0:
                table[a][b][b] = 1
            elif b == 0:
                table[a][b][a] = 1
            else:
                sign, c = rules[(a, b)]
                table[a][b][c] = sign
    return Algebra.from_table(["1", "i", "j", "k"], table, unit_vector(4, 0))


def _cyclic_elements(order: int) -> Tuple[List[str], Callable[[int, int], int]]:
    names = ["1", "g"] + [f"g^{a}" for a in range(2, order)]
    return names[:order], lambda a, b: (a + b) % order


def _s3_elements() -> Tuple[List[str], Callable[[int, int], int]]:
    perms = sorted(permutations(range(3)))
    names = []
    for perm in perms:
        moved = [i for i in range(3) if perm[i] != i]
        if not moved:
            names.append("e")
        elif len(moved) == 2:
            names.append(f"({moved[0] + 1}{moved[1] + 1})")
        else:
            names.append(f"(1{perm[0] + 1}{perm[perm[0]] + 1})")
    index = {p: i for i, p in enumerate(perms)}

    def compose(a: int, b: int) -> int:
        # (ab)(x) = a(b(x))
        pa, pb = perms[a], perms[b]
        return index[tuple(pa[pb[x]] for x in range(3))]

    return names, compose


GROUPS = {
    "C2": lambda: _cyclic_elements(2),
    "C3": lambda: _cyclic_elements(3),
    "S3": _s3_elements,
}


def group_algebra(group: str) -> Algebra:
    """Q[G] for G in C2, C3, S3; identity element first"""
    if group not in GROUPS:
        raise CatalogError(f"unknown group {group!r}; choose from {', '.join(GROUPS)}")
    names, op = GROUPS[group]()
    n = len(names)
    table = _empty_table(n)
    for a in range(n):
        for b in range(n):
            table[a][b][op(a, b)] = 1
    return Algebra.from_table(names, table, unit_vector(n, 0))


def direct_product(a: Algebra, b: Algebra, prefixes: Tuple[str, str] = ("a", "b")) -> Algebra:
    n, m = a.dim, b.dim
    names = [f"{prefixes[0]}.{x}" for x in a.basis_names] + [f"{prefixes[1]}.{x}" for x in b.basis_names]
    table = _empty_table(n + m)
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(a.structure_constants[i][j]):
                table[i][j][k] = c
    for i in range(m):
        for j in range(m):
            for k, c in enumerate(b.structure_constants[i][j]):
                table[n + i][n + j][n + k] = c
    return Algebra.from_table(names, table, list(a.unit) + list(b.unit))


def _restrict(ambient: Algebra, space: Subspace) -> Algebra:
    """The subalgebra `space` of `ambient` on its canonical basis"""
    basis = space.vectors()
    table = []
    for x in basis:
        row = []
        for y in basis:
            coords = space.coordinates(ambient.product(x, y))
            if coords is None:
                raise CatalogError("subspace is not closed under multiplication")
            row.append(coords)
        table.append(row)
    unit = space.coordinates(ambient.unit)
    if unit is None:
        raise CatalogError("subspace does not contain the unit")
    return Algebra.from_table([f"b{i}" for i in range(len(basis))], table, unit)


def _change_basis(alg: Algebra, rng: random.Random) -> Algebra:
    """Rewrite alg on f_i = sum_j T[j][i] e_j for a random invertible integer T"""
    n = alg.dim
    while True:
        t = Matrix.from_rows(
            [[rng.randint(-RANDOM_ENTRY_RANGE, RANDOM_ENTRY_RANGE) for _ in range(n)] for _ in range(n)],
            cols=n,
        )
        if determinant(t) != 0:
            break
    t_inv = inverse(t)
    columns = [t.column(i) for i in range(n)]
    table = [
        [t_inv.apply(alg.product(columns[a], columns[b])) for b in range(n)]
        for a in range(n)
    ]
    return Algebra.from_table([f"f{i}" for i in range(n)], table, t_inv.apply(alg.unit))


def random_algebra(seed: int, dim: int) -> Algebra:
    """
    A pseudo-random algebra of the given dimension, reproducible from seed

    Built as the unital subalgebra of M_k(Q) generated by the diagonal units and
    a random set of off-diagonal units (the incidence algebra of a random
    preorder), then put on a random integer basis.
    """
    if not 1 <= dim <= MAX_RANDOM_DIM:
        raise CatalogError(f"random algebra dimension must be between 1 and {MAX_RANDOM_DIM}, got {dim}")
    rng = random.Random(seed)
    found: Optional[Algebra] = None
    for attempt in range(RANDOM_MAX_ATTEMPTS):
        k = rng.randint(1, RANDOM_MAX_MATRIX_SIZE)
        if not k <= dim <= k * k:
            continue
        ambient = _matrix_units(k)
        off_diagonal = [(p, q) for p in range(k) for q in range(k) if p != q]
        chosen = rng.sample(off_diagonal, rng.randint(0, min(len(off_diagonal), dim - k)))
        gens = [ambient.basis_vector(p * k + p) for p in range(k)]
        gens.extend(ambient.basis_vector(p * k + q) for p, q in chosen)
        space = subalgebra_closure(ambient, gens)
        if space.dim == dim:
            found = _restrict(ambient, space)
            log_debug("Random algebra found", {"seed": seed, "dim": dim, "matrix_size": k, "attempt": attempt})
            break
    if found is None:
        ambient = _matrix_units(dim)
        diagonal = [ambient.basis_vector(p * dim + p) for p in range(dim)]
        found = _restrict(ambient, subalgebra_closure(ambient, diagonal))
        log_debug("Random algebra fell back to the diagonal", {"seed": seed, "dim": dim})
    return _change_basis(found, rng)


def fuzz_target(seed: int) -> Tuple[str, Algebra, str]:
    """(label, algebra, seed spec) for one fuzz seed; some seeds use an inner derivation for V"""
    alg = random_algebra(seed, seed % FUZZ_MAX_DIM + 1)
    seed_spec = DEFAULT_SEED_SPEC
    if seed % FUZZ_INNER_EVERY == 0:
        seed_spec = f"inner:{alg.basis_names[seed % alg.dim]}"
    return f"random:{seed}", alg, seed_spec


@dataclass(frozen=True)
class Expected:
    """Known invariants with V = Der A"""
    der_dim: int
    center_dim: int
    radical_dim: int
    reflexive: bool


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: Algebra
    expected: Optional[Expected] = None


_REGISTRY: Dict[str, Tuple[Callable[[], Algebra], Expected]] = {
    "m1": (lambda: matrix_algebra(1), Expected(0, 1, 0, True)),
    "m2": (lambda: matrix_algebra(2), Expected(3, 1, 0, True)),
    "m3": (lambda: matrix_algebra(3), Expected(8, 1, 0, True)),
    "dual-numbers": (dual_numbers, Expected(1, 2, 1, True)),
    "trunc3": (lambda: truncated_poly(3), Expected(2, 3, 2, True)),
    "upper2": (lambda: upper_triangular(2), Expected(2, 1, 1, True)),
    "upper3": (lambda: upper_triangular(3), Expected(5, 1, 3, True)),
    "quaternions": (quaternion_algebra, Expected(3, 1, 0, True)),
    "group-c2": (lambda: group_algebra("C2"), Expected(0, 2, 0, True)),
    "group-c3": (lambda: group_algebra("C3"), Expected(0, 3, 0, True)),
    "group-s3": (lambda: group_algebra("S3"), Expected(3, 3, 0, True)),
    "m2xdual": (lambda: direct_product(matrix_algebra(2), dual_numbers(), ("m", "d")), Expected(4, 3, 1, True)),
}


def catalog_names() -> List[str]:
    return list(_REGISTRY)


@lru_cache(maxsize=None)
def get_entry(name: str) -> CatalogEntry:
    if name not in _REGISTRY:
        raise CatalogError(f"unknown catalog algebra {name!r}")
    builder, expected = _REGISTRY[name]
    return CatalogEntry(name, builder(), expected)


def all_entries() -> List[CatalogEntry]:
    return [get_entry(name) for name in _REGISTRY]
