"""Numerical checks of the character-sum identities behind the alpha-representation.

Each check brute-forces a complex exponential sum at tiny scale and compares
it with the closed form, returning a :class:`CheckReport`. The suites in
:data:`SUITES` also wrap exact oracle cross-checks (matrix-tree, forest
minors) so the CLI can run everything through one interface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import TooLarge
from .ffield import FieldParams, gauss_direct, gauss_formula
from .flowref import flow_poly
from .graph import Multigraph, contract, contract_edges_kept, named_graph
from .lapmat import laplacian, max_nonsingular_principal, principal_minor, SymmetricFqMatrix
from .treesum import forest_sum, s_alpha_bruteforce, s_alpha_det

TOL = 1e-6
DEFAULT_SEED = 20240917
SMALL_Q = 49


@dataclass(frozen=True)
class CheckReport:
    name: str
    instances: int
    max_deviation: float
    tolerance: float = TOL

    def __post_init__(self):
        object.__setattr__(self, "max_deviation", float(self.max_deviation))

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "instances": self.instances,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _chi_table(fp: FieldParams) -> np.ndarray:
    t = fp.tables()
    return np.exp(2j * np.pi * t.trace.astype(np.float64) / fp.p)


def _grid(q: int, n: int) -> np.ndarray:
    """All vectors of F_q^n as rows of element codes."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)


def _need_small(fp: FieldParams, limit: int = SMALL_Q) -> None:
    if fp.q > limit:
        raise TooLarge(f"q={fp.q} exceeds {limit} for this brute-force check")


def delta_sum(fp: FieldParams, t: int) -> complex:
    """sum over k in F_q of chi1(k t)."""
    tab = fp.tables()
    return _chi_table(fp)[tab.mul[np.arange(fp.q), t]].sum()


def onedim_sum(fp: FieldParams, t: int) -> complex:
    """sum over k in F_q of chi1(k^2 t)."""
    tab = fp.tables()
    ks = np.arange(fp.q)
    return _chi_table(fp)[tab.mul[tab.mul[ks, ks], t]].sum()


def verify_delta_identity(fp: FieldParams, tol: float = TOL) -> CheckReport:
    """sum_k chi1(k t) == q * delta(t) for every t."""
    _need_small(fp)
    worst = max(abs(delta_sum(fp, t) - (fp.q if t == 0 else 0)) for t in range(fp.q))
    return CheckReport("delta_identity", fp.q, worst, tol)


def verify_gauss_onedim(fp: FieldParams, tol: float = TOL) -> CheckReport:
    """sum_k chi1(k^2 t) is q at t = 0 and eta(t) g(q) otherwise."""
    _need_small(fp)
    g = gauss_formula(fp)
    worst = max(abs(onedim_sum(fp, t) - (fp.q if t == 0 else fp.eta(t) * g))
                for t in range(fp.q))
    return CheckReport("gauss_onedim", fp.q, worst, tol)


def verify_gauss_sum(fp: FieldParams, tol: float = TOL) -> CheckReport:
    return CheckReport("gauss_sum", 1, abs(gauss_direct(fp) - gauss_formula(fp)), tol)


def _lemma1_evaluator(g: Multigraph, fp: FieldParams) -> Callable[[Sequence[int]], tuple[complex, int]]:
    n, m, q = g.n_vertices, g.n_edges, fp.q
    t = fp.tables()
    chi = _chi_table(fp)
    xs = _grid(q, n)
    diffs = [t.sub[xs[:, u], xs[:, v]] for u, v in g.edges]

    def sides(k: Sequence[int]) -> tuple[complex, int]:
        prod = np.ones(len(xs), dtype=np.complex128)
        for e in range(m):
            prod *= chi[t.mul[diffs[e], k[e]]]
        net = [0] * n
        for e, (u, v) in enumerate(g.edges):
            net[u] = fp.sub(net[u], k[e])
            net[v] = fp.add(net[v], k[e])
        return prod.sum(), (q**n if all(x == 0 for x in net) else 0)

    return sides


def lemma1_sides(g: Multigraph, fp: FieldParams, k: Sequence[int]) -> tuple[complex, int]:
    """(sum_x prod_e chi1((x_i - x_j) k_e), q^|V| prod_v delta(net flow of k at v))."""
    return _lemma1_evaluator(g, fp)(k)


def verify_lemma1(g: Multigraph, fp: FieldParams, tol: float = TOL) -> CheckReport:
    """Character product over vertex assignments equals q^|V| times the flow delta."""
    if fp.q ** (g.n_vertices + g.n_edges) > 10**8:
        raise TooLarge("q^|V| * q^|E| exceeds 10^8")
    sides = _lemma1_evaluator(g, fp)
    worst = 0.0
    count = 0
    for k in itertools.product(range(fp.q), repeat=g.n_edges):
        lhs, rhs = sides(k)
        worst = max(worst, abs(lhs - rhs))
        count += 1
    return CheckReport(f"lemma1[{g.n_edges}e]", count, worst, tol)


def key_lemma_value(g: Multigraph, fp: FieldParams) -> complex:
    """q^-|V| sum_alpha sum_x chi1(sum_e (x_i - x_j)^2 alpha_e), alpha nonzero."""
    n, m, q = g.n_vertices, g.n_edges, fp.q
    if (q - 1) ** m * q**n > 10**8:
        raise TooLarge("(q-1)^|E| * q^|V| exceeds 10^8")
    t = fp.tables()
    chi = _chi_table(fp)
    xs = _grid(q, n)
    sq = []
    for u, v in g.edges:
        d = t.sub[xs[:, u], xs[:, v]]
        sq.append(t.mul[d, d])
    total = 0j
    for alpha in itertools.product(range(1, q), repeat=m):
        arg = np.zeros(len(xs), dtype=np.int64)
        for e in range(m):
            arg = t.add[arg, t.mul[sq[e], alpha[e]]]
        total += chi[arg].sum()
    return total / q**n


def verify_key_lemma(g: Multigraph, fp: FieldParams, tol: float = TOL) -> CheckReport:
    value = key_lemma_value(g, fp)
    expected = flow_poly(g)(fp.q)
    return CheckReport(f"key_lemma[{g.n_vertices}v{g.n_edges}e]",
                       (fp.q - 1) ** g.n_edges, abs(value - expected), tol)


def quadratic_gauss_sum(b: SymmetricFqMatrix) -> complex:
    """Brute-force sum over x in F_q^n of chi1(x^T B x)."""
    fp, n = b.field, b.n
    if fp.q**n > 10**7:
        raise TooLarge("q^n exceeds 10^7")
    t = fp.tables()
    chi = _chi_table(fp)
    xs = _grid(fp.q, n)
    form = np.zeros(len(xs), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c = b.codes[i][j]
            if c:
                form = t.add[form, t.mul[c, t.mul[xs[:, i], xs[:, j]]]]
    return chi[form].sum()


def quadratic_gauss_formula(b: SymmetricFqMatrix) -> complex:
    """q^n eta(det B_r) (g(q)/q)^r from the rank certificate."""
    cert = max_nonsingular_principal(b)
    fp = b.field
    return fp.q**b.n * cert.eta_minor * (gauss_formula(fp) / fp.q) ** cert.rank


def random_symmetric(fp: FieldParams, n: int, rng: np.random.Generator) -> SymmetricFqMatrix:
    upper = rng.integers(0, fp.q, size=(n, n))
    rows = [[int(upper[min(i, j), max(i, j)]) for j in range(n)] for i in range(n)]
    return SymmetricFqMatrix(fp, tuple(tuple(r) for r in rows))


def random_low_rank_symmetric(fp: FieldParams, n: int, rng: np.random.Generator) -> SymmetricFqMatrix:
    """P^T D P with a random diagonal D of random rank; exercises rank-deficient cases."""
    r = int(rng.integers(0, n + 1))
    diag = [int(rng.integers(1, fp.q)) for _ in range(r)] + [0] * (n - r)
    p = rng.integers(0, fp.q, size=(n, n))
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = 0
            for k in range(n):
                if diag[k]:
                    acc = fp.add(acc, fp.mul(diag[k], fp.mul(int(p[k, i]), int(p[k, j]))))
            out[i][j] = out[j][i] = acc
    return SymmetricFqMatrix(fp, tuple(tuple(r) for r in out))


def verify_multidim_gauss(n: int, fp: FieldParams, trials: int = 100,
                          seed: int = DEFAULT_SEED, tol: float = TOL) -> CheckReport:
    rng = np.random.default_rng([seed, n, fp.q])
    worst = 0.0
    for k in range(trials):
        make = random_symmetric if k % 2 == 0 else random_low_rank_symmetric
        b = make(fp, n, rng)
        worst = max(worst, abs(quadratic_gauss_sum(b) - quadratic_gauss_formula(b)))
    return CheckReport(f"multidim_gauss[n={n}]", trials, worst, tol)


def verify_k3_identity(fp: FieldParams, tol: float = TOL) -> CheckReport:
    """q - 1 == sum over nonzero (a, b, c) of eta(ab + ac + bc) (g/q)^2."""
    if fp.q > 13:
        raise TooLarge("the K3 identity check is limited to q <= 13")
    factor = (gauss_formula(fp) / fp.q) ** 2
    total = 0
    for a, b, c in itertools.product(range(1, fp.q), repeat=3):
        s = fp.add(fp.add(fp.mul(a, b), fp.mul(a, c)), fp.mul(b, c))
        total += fp.eta(s)
    return CheckReport("k3_identity", (fp.q - 1) ** 3, abs(total * factor - (fp.q - 1)), tol)


def k3_eta_sum(fp: FieldParams) -> int:
    """Exact integer sum of eta(ab + ac + bc) over nonzero a, b, c."""
    total = 0
    for a, b, c in itertools.product(range(1, fp.q), repeat=3):
        total += fp.eta(fp.add(fp.add(fp.mul(a, b), fp.mul(a, c)), fp.mul(b, c)))
    return total


# -- exact oracle cross-checks, reported in the same shape --

PARALLEL3 = Multigraph(2, ((0, 1), (0, 1), (0, 1)))


def _assignments(fp: FieldParams, m: int, rng: np.random.Generator, cap: int, nonzero: bool):
    lo = 1 if nonzero else 0
    if (fp.q - lo) ** m <= cap:
        yield from itertools.product(range(lo, fp.q), repeat=m)
    else:
        for _ in range(cap):
            yield tuple(int(x) for x in rng.integers(lo, fp.q, size=m))


def check_matrix_tree(fp: FieldParams, graphs: dict[str, Multigraph] | None = None,
                      cap: int = 20_000, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    graphs = graphs or {"k3": named_graph("k3"), "k4": named_graph("k4"), "parallel3": PARALLEL3}
    rng = np.random.default_rng([seed, fp.q])
    reports = []
    for name, g in graphs.items():
        bad = count = 0
        for codes in _assignments(fp, g.n_edges, rng, cap, nonzero=False):
            a = [fp.from_code(c) for c in codes]
            bad += s_alpha_det(g, a) != s_alpha_bruteforce(g, a)
            count += 1
        reports.append(CheckReport(f"matrix_tree[{name}]", count, float(bad), 0.0))
    return reports


def check_forest_minors(fp: FieldParams, graphs: dict[str, Multigraph] | None = None,
                        cases: int = 200, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    graphs = graphs or {"k3": named_graph("k3"), "k4": named_graph("k4"), "parallel3": PARALLEL3}
    rng = np.random.default_rng([seed, fp.q, 4])
    reports = []
    for name, g in graphs.items():
        bad = 0
        for _ in range(cases):
            a = [fp.from_code(int(c)) for c in rng.integers(0, fp.q, size=g.n_edges)]
            k = int(rng.integers(1, g.n_vertices + 1))
            roots = frozenset(int(v) for v in rng.choice(g.n_vertices, size=k, replace=False))
            keep = [v for v in range(g.n_vertices) if v not in roots]
            minor = principal_minor(laplacian(g, a), keep)
            bad += forest_sum(g, a, roots) != minor
        reports.append(CheckReport(f"forest_minor[{name}]", cases, float(bad), 0.0))
    return reports


def check_wstar_consistency(fp: FieldParams, graphs: dict[str, Multigraph] | None = None,
                            cases: int = 200, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    """The certificate's minor equals the tree sum of G/W*, and |W*| = |V| - rank."""
    from .lapmat import wstar

    graphs = graphs or {"k3": named_graph("k3"), "k4": named_graph("k4"),
                        "parallel3": PARALLEL3, "k33": named_graph("k33")}
    rng = np.random.default_rng([seed, fp.q, 3])
    reports = []
    for name, g in graphs.items():
        bad = 0
        for _ in range(cases):
            a = [fp.from_code(int(c)) for c in rng.integers(1, fp.q, size=g.n_edges)]
            cert = wstar(g, a)
            h = contract(g, cert.wstar)
            kept = [a[i] for i in contract_edges_kept(g, cert.wstar)]
            s = s_alpha_bruteforce(h, kept, fp)
            bad += (s != cert.det_minor) or (cert.rank != g.n_vertices - len(cert.wstar))
        reports.append(CheckReport(f"wstar[{name}]", cases, float(bad), 0.0))
    return reports


def _suite_gauss(fp: FieldParams) -> list[CheckReport]:
    out = [verify_gauss_sum(fp), verify_delta_identity(fp), verify_gauss_onedim(fp)]
    out += [verify_multidim_gauss(n, fp, 100) for n in (2, 3) if fp.q**n <= 10**5]
    return out


def _suite_k3(fp: FieldParams) -> list[CheckReport]:
    return [verify_k3_identity(fp)]


def _suite_lemma1(fp: FieldParams) -> list[CheckReport]:
    return [verify_lemma1(named_graph("k3"), fp)]


def _suite_keylemma(fp: FieldParams) -> list[CheckReport]:
    out = [verify_key_lemma(named_graph("k3"), fp)]
    bridge = named_graph("two_triangles_bridge")
    if (fp.q - 1) ** bridge.n_edges * fp.q**bridge.n_vertices <= 10**7:
        out.append(verify_key_lemma(bridge, fp))
    return out


def _suite_matrixtree(fp: FieldParams) -> list[CheckReport]:
    return check_matrix_tree(fp)


def _suite_minors(fp: FieldParams) -> list[CheckReport]:
    return check_forest_minors(fp) + check_wstar_consistency(fp)


SUITES: dict[str, Callable[[FieldParams], list[CheckReport]]] = {
    "gauss": _suite_gauss,
    "k3": _suite_k3,
    "lemma1": _suite_lemma1,
    "keylemma": _suite_keylemma,
    "matrixtree": _suite_matrixtree,
    "minors": _suite_minors,
}


def run_suite(name: str, fp: FieldParams) -> list[CheckReport]:
    if name == "all":
        return [r for fn in SUITES.values() for r in fn(fp)]
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}") from None
    return fn(fp)

