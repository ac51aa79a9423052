"""Parity-cover minimization.

A cover is a set of cubes whose XOR is the target function; each cube
becomes one L (or R) gate, plus a CNOT pair when it carries a parity factor.
Because gate products are XORs, not ORs, merging two cubes consumes both and
a cell may be covered by several cubes as long as the count has the right
parity (odd on 1-cells, even on 0-cells).
"""
from __future__ import annotations

import enum
import itertools
import time
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import kernels
from .logic import (
    ArityError,
    Cube,
    ParityCover,
    ParityFactor,
    Phase,
    Polarity,
    TruthTable,
    all_cubes,
    minterm_cover,
)

CostFn = Callable[[Cube], float]

EXACT_GUARANTEED_ARITY = 4
EXACT_MAX_ARITY = 8


class Mode(enum.Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


class Rule(enum.Enum):
    RULE_I = "RULE_I"
    RULE_II = "RULE_II"
    RULE_III_INSERT = "RULE_III_INSERT"
    RULE_III_CANCEL = "RULE_III_CANCEL"
    REORDER = "REORDER"


class NonOptimalWarning(UserWarning):
    pass


def cube_count_cost(cube: Cube) -> float:
    """One per cube, plus the two sandwich CNOTs of a parity cube."""
    return 3.0 if cube.parity is not None else 1.0


def unit_cost(cube: Cube) -> float:
    return 1.0


@dataclass(frozen=True)
class SearchConfig:
    mode: Mode = Mode.EXACT
    max_cubes: int = 8
    allow_parity_cubes: bool = True
    cost: CostFn | None = None
    time_budget: float = 10.0
    node_limit: int = 0
    heuristic_moves: int = 20000

    def __post_init__(self):
        if self.max_cubes < 1:
            raise ValueError("max_cubes must be at least 1")

    @property
    def cost_fn(self) -> CostFn:
        return self.cost or cube_count_cost


def cover_cost(cov: ParityCover, cost: CostFn = cube_count_cost) -> float:
    return sum(cost(c) for c in cov.cubes)


# rewrite rules


def _differing(c1: Cube, c2: Cube) -> list[int] | None:
    if c1.n != c2.n:
        raise ArityError("cubes of different arity")
    if c1.parity is not None or c2.parity is not None:
        return None
    if c1.variables() != c2.variables():
        return None
    return [v for v in c1.variables() if c1.polarity(v) is not c2.polarity(v)]


def rule1_merge(c1: Cube, c2: Cube) -> Cube | None:
    """Two cubes equal except one literal's polarity merge into one without it."""
    diff = _differing(c1, c2)
    if diff is None or len(diff) != 1:
        return None
    return c1.with_literal(diff[0], Polarity.ABSENT)


def rule2_merge(c1: Cube, c2: Cube) -> Cube | None:
    """Two cubes differing in exactly two literals merge into a parity cube.

    Opposite polarities on the pair in ``c1`` give (x_a XOR x_b); equal ones
    give its negation.
    """
    diff = _differing(c1, c2)
    if diff is None or len(diff) != 2:
        return None
    a, b = diff
    phase = Phase.ODD if c1.polarity(a) is not c1.polarity(b) else Phase.EVEN
    base = c1.with_literal(a, Polarity.ABSENT).with_literal(b, Polarity.ABSENT)
    return Cube(c1.n, base.literals, ParityFactor(a, b, phase))


def _xor_cover(n: int, cubes: Iterable[Cube]) -> ParityCover:
    return ParityCover.xor_of(n, cubes)


def _regroup(cubes: Iterable[Cube], n: int) -> set[Cube]:
    work = _Work(n, cube_count_cost)
    for c in cubes:
        work.insert(_encode(c))
    return {_decode(n, t) for t in work.cubes}


def rule3_expand(cov: ParityCover, c: Cube, cost: CostFn = cube_count_cost) -> ParityCover:
    """Multiply the cover by the pair c*c and regroup.

    Each copy of ``c`` merges (Rule I) with a different cover cube; the
    result is then regrouped greedily. All partner pairs are tried and the
    cheapest result is returned (canonical order breaks ties). With fewer
    than two partners the cover is returned unchanged.
    """
    if not c.is_minterm:
        raise ValueError(f"{c!r} is not a minterm")
    if c.n != cov.n:
        raise ArityError("cube and cover arity differ")
    partners = [p for p in cov.ordered() if rule1_merge(p, c) is not None]
    best = None
    for p1, p2 in itertools.combinations(partners, 2):
        rest = [q for q in cov.cubes if q not in (p1, p2)]
        merged = _regroup(rest + [rule1_merge(p1, c), rule1_merge(p2, c)], cov.n)
        cand = ParityCover(cov.n, frozenset(merged))
        rank = (cover_cost(cand, cost), cand.key)
        if best is None or rank < best[0]:
            best = (rank, cand)
    return cov if best is None else best[1]


# internal cube encoding used by the heuristic: (pos, neg, parity) where
# parity is None or (bit_a, bit_b, odd) with bit positions of the index.


def _encode(c: Cube) -> tuple:
    par = None
    if c.parity is not None:
        p = c.parity
        par = (c.n - p.var_a, c.n - p.var_b, p.phase is Phase.ODD)
    return (c.pos_mask, c.neg_mask, par)


def _decode(n: int, t: tuple) -> Cube:
    pos, neg, par = t
    cube = Cube.from_masks(n, pos, neg)
    if par is None:
        return cube
    return Cube(n, cube.literals, ParityFactor(n - par[0], n - par[1], Phase.ODD if par[2] else Phase.EVEN))


class _Work:
    """Mutable XOR cube set with greedy merging on insert and an undo log."""

    def __init__(self, n: int, cost: CostFn):
        self.n = n
        self.cubes: set[tuple] = set()
        self._cost = cost
        self._cache: dict[tuple, float] = {}
        self.total = 0.0
        self.log: list[tuple[str, tuple]] = []

    def cost(self, t: tuple) -> float:
        v = self._cache.get(t)
        if v is None:
            v = self._cache[t] = self._cost(_decode(self.n, t))
        return v

    def _add(self, t):
        self.cubes.add(t)
        self.total += self.cost(t)
        self.log.append(("add", t))

    def remove(self, t):
        self.cubes.remove(t)
        self.total -= self.cost(t)
        self.log.append(("rm", t))

    def undo(self, mark: int):
        while len(self.log) > mark:
            op, t = self.log.pop()
            if op == "add":
                self.cubes.remove(t)
                self.total -= self.cost(t)
            else:
                self.cubes.add(t)
                self.total += self.cost(t)

    def insert(self, t: tuple):
        """XOR ``t`` into the set, merging greedily with a partner if one exists."""
        while True:
            if t in self.cubes:
                self.remove(t)
                return
            merged = self._partner(t)
            if merged is None:
                self._add(t)
                return
            t = merged

    def _partner(self, t: tuple):
        pos, neg, par = t
        lits = pos | neg
        for bit in range(self.n):
            b = 1 << bit
            if lits & b:
                flipped = (pos ^ b, neg ^ b, par)
                if flipped in self.cubes:
                    # P x + P ~x = P
                    self.remove(flipped)
                    return (pos & ~b, neg & ~b, par)
                dropped = (pos & ~b, neg & ~b, par)
                if dropped in self.cubes:
                    # P + P x = P ~x
                    self.remove(dropped)
                    return flipped
            elif not (par and b in (1 << par[0], 1 << par[1])):
                for with_b, other in (((pos | b, neg, par), (pos, neg | b, par)),
                                      ((pos, neg | b, par), (pos | b, neg, par))):
                    if with_b in self.cubes:
                        self.remove(with_b)
                        return other
        return None


def _rule2_pass(work: _Work):
    """Replace same-support pairs differing in two literals by a parity cube when cheaper."""
    n = work.n
    for a, b in itertools.combinations(range(n), 2):
        ab = (1 << a) | (1 << b)
        groups: dict[tuple, list[tuple]] = {}
        for t in work.cubes:
            pos, neg, par = t
            if par is None and (pos | neg) & ab == ab:
                groups.setdefault((pos & ~ab, neg & ~ab), []).append(t)
        for key, members in groups.items():
            members = [m for m in members if m in work.cubes]
            for t1, t2 in itertools.combinations(members, 2):
                if t1 not in work.cubes or t2 not in work.cubes:
                    continue
                if (t1[0] ^ t2[0]) & ab != ab:
                    continue
                odd = bool(t1[0] & (1 << a)) != bool(t1[0] & (1 << b))
                # parity bits are stored as (higher bit, lower bit) = (var_a, var_b)
                merged = (key[0], key[1], (b, a, odd))
                if work.cost(merged) < work.cost(t1) + work.cost(t2) - 1e-9:
                    work.remove(t1)
                    work.remove(t2)
                    work.insert(merged)


def _local_search(work: _Work, budget: int) -> None:
    """Exorlink-style moves: split a distance-2 pair through a bridge minterm.

    For same-support cubes c1, c2 differing in literals a and b, the bridge
    c = c1 with a flipped equals c2 with b flipped. Inserting c twice and
    merging each copy gives {c1 without a, c2 without b}. Moves are kept only
    when greedy re-merging lowers the total cost.
    """
    evaluated = 0
    improved = True
    while improved and evaluated < budget:
        improved = False
        for a, b in itertools.combinations(range(work.n), 2):
            ab = (1 << a) | (1 << b)
            groups: dict[tuple, list[tuple]] = {}
            for t in work.cubes:
                pos, neg, par = t
                if (pos | neg) & ab == ab:
                    groups.setdefault((pos & ~ab, neg & ~ab, par), []).append(t)
            for members in groups.values():
                if len(members) < 2:
                    continue
                for t1, t2 in itertools.combinations(sorted(members), 2):
                    if evaluated >= budget:
                        return
                    if t1 not in work.cubes or t2 not in work.cubes:
                        continue
                    if (t1[0] ^ t2[0]) & ab != ab:
                        continue
                    for drop1, drop2 in ((1 << a, 1 << b), (1 << b, 1 << a)):
                        evaluated += 1
                        mark = len(work.log)
                        before = work.total
                        work.remove(t1)
                        work.remove(t2)
                        work.insert((t1[0] & ~drop1, t1[1] & ~drop1, t1[2]))
                        work.insert((t2[0] & ~drop2, t2[1] & ~drop2, t2[2]))
                        if work.total < before - 1e-9:
                            improved = True
                            del work.log[mark:]
                            break
                        work.undo(mark)


def minimize_heuristic(f: TruthTable, cfg: SearchConfig = SearchConfig(mode=Mode.HEURISTIC)) -> ParityCover:
    """Greedy XOR merging of the minterms, a parity-cube pass, then local search.

    Always returns a cover that validates against ``f``.
    """
    work = _Work(f.n, cfg.cost_fn)
    n = f.n
    for idx in f.ones():
        work.insert((idx, ((1 << n) - 1) & ~idx, None))
    if cfg.allow_parity_cubes:
        _rule2_pass(work)
    _local_search(work, cfg.heuristic_moves)
    work.log.clear()
    cover = ParityCover(n, frozenset(_decode(n, t) for t in work.cubes))
    naive = minterm_cover(f)
    if cover_cost(naive, cfg.cost_fn) < cover_cost(cover, cfg.cost_fn):
        return naive
    return cover


@dataclass(frozen=True)
class ExactResult:
    cover: ParityCover
    cost: float
    optimal: bool
    nodes: int
    elapsed: float


_CUBE_CACHE: dict[tuple[int, bool], tuple[list[Cube], list[int]]] = {}


def _cube_table(n: int, parity: bool) -> tuple[list[Cube], list[int]]:
    key = (n, parity)
    if key not in _CUBE_CACHE:
        cubes = all_cubes(n, parity)
        _CUBE_CACHE[key] = (cubes, [c.table_mask for c in cubes])
    return _CUBE_CACHE[key]


def search_exact(f: TruthTable, cfg: SearchConfig = SearchConfig(), backend: str | None = None) -> ExactResult:
    """Minimum-cost parity cover by iterative deepening on the cube count.

    The heuristic result seeds the cost bound. After depth ``k`` the search
    stops once no cover with more cubes can match the best cost.
    """
    if f.n > EXACT_MAX_ARITY:
        raise ArityError(f"exact minimization supports at most {EXACT_MAX_ARITY} variables")
    start = time.monotonic()
    deadline = start + cfg.time_budget if cfg.time_budget else 0.0
    cost = cfg.cost_fn
    cubes, masks = _cube_table(f.n, cfg.allow_parity_cubes)
    costs = [cost(c) for c in cubes]
    if min(costs) <= 0:
        raise ValueError("cube costs must be positive")
    mincost = min(costs)

    seed = minimize_heuristic(f, SearchConfig(mode=Mode.HEURISTIC, allow_parity_cubes=cfg.allow_parity_cubes,
                                              cost=cfg.cost, heuristic_moves=2000))
    best = (cover_cost(seed, cost), seed.key, seed)
    nodes = 0
    optimal = False
    for k in range(0, cfg.max_cubes + 1):
        sols, sol_costs, visited, complete = kernels.cover_search(
            masks, costs, f.mask, 1 << f.n, k, best[0],
            node_limit=cfg.node_limit, deadline=deadline, backend=backend)
        nodes += visited
        for sel, c in zip(sols, sol_costs):
            cov = ParityCover(f.n, frozenset(cubes[i] for i in sel))
            cand = (c, cov.key, cov)
            if cand[:2] < best[:2]:
                best = cand
        if not complete:
            break
        if best[0] < (k + 1) * mincost - 1e-9:
            optimal = True
            break
    else:
        # covers larger than max_cubes were never examined
        optimal = best[0] < (cfg.max_cubes + 1) * mincost - 1e-9
    return ExactResult(best[2], best[0], optimal, nodes, time.monotonic() - start)


def minimize_exact(f: TruthTable, cfg: SearchConfig = SearchConfig()) -> ParityCover:
    result = search_exact(f, cfg)
    if not result.optimal:
        warnings.warn(f"exact search stopped early after {result.nodes} nodes; cover may be suboptimal",
                      NonOptimalWarning, stacklevel=2)
    return result.cover


def minimize(f: TruthTable, cfg: SearchConfig = SearchConfig()) -> ParityCover:
    if cfg.mode is Mode.EXACT:
        return minimize_exact(f, cfg)
    return minimize_heuristic(f, cfg)


def enumerate_covers(f: TruthTable, costs: CostFn, max_cubes: int, bound: float,
                     allow_parity_cubes: bool = True, node_limit: int = 0,
                     deadline: float = 0.0) -> tuple[list[tuple[ParityCover, float]], bool]:
    """Every valid cover with at most ``max_cubes`` cubes and cost <= ``bound``."""
    cubes, masks = _cube_table(f.n, allow_parity_cubes)
    cost_list = [costs(c) for c in cubes]
    sols, sol_costs, _, complete = kernels.cover_search(
        masks, cost_list, f.mask, 1 << f.n, max_cubes, bound, collect=True,
        node_limit=node_limit, deadline=deadline)
    out = [(ParityCover(f.n, frozenset(cubes[i] for i in sel)), c) for sel, c in zip(sols, sol_costs)]
    return out, complete


# rewrite traces


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    before: tuple[Cube, ...]
    after: tuple[Cube, ...]
    note: str = ""

    def __str__(self) -> str:
        return f"{self.rule.value}: {self.note}"


def _product_table(n: int, cubes: Iterable[Cube]) -> int:
    acc = 0
    for c in cubes:
        acc ^= c.table_mask
    return acc


def _sorted(cubes: Counter) -> tuple[Cube, ...]:
    return tuple(sorted(cubes.elements(), key=lambda c: c.key))


def _expand(c: Cube) -> list[int]:
    return [i for i in range(1 << c.n) if c.matches_index(i)]


@dataclass
class _Merge:
    height: int
    order: int
    rule: Rule
    left: Cube
    right: Cube
    result: Cube


def _plan(target: Cube, order: int, out: list[_Merge]) -> int:
    """Record the merges building ``target`` from minterms; returns tree height."""
    if target.is_minterm:
        return 0
    if target.parity is not None:
        p = target.parity
        base = target.without_parity()
        if p.phase is Phase.ODD:
            left = base.with_literal(p.var_a, Polarity.POSITIVE).with_literal(p.var_b, Polarity.NEGATIVE)
            right = base.with_literal(p.var_a, Polarity.NEGATIVE).with_literal(p.var_b, Polarity.POSITIVE)
        else:
            left = base.with_literal(p.var_a, Polarity.POSITIVE).with_literal(p.var_b, Polarity.POSITIVE)
            right = base.with_literal(p.var_a, Polarity.NEGATIVE).with_literal(p.var_b, Polarity.NEGATIVE)
        rule = Rule.RULE_II
    else:
        # split on the lowest-indexed free variable so the first merges drop the highest
        var = next(v for v in range(1, target.n + 1) if target.polarity(v) is Polarity.ABSENT)
        left = target.with_literal(var, Polarity.NEGATIVE)
        right = target.with_literal(var, Polarity.POSITIVE)
        rule = Rule.RULE_I
    h = 1 + max(_plan(left, order, out), _plan(right, order, out))
    out.append(_Merge(h, order, rule, left, right, target))
    return h


def _fmt(cubes: Iterable[Cube]) -> str:
    return " . ".join(str(c) for c in cubes)


def explain(cov_naive: ParityCover, cov_min: ParityCover) -> list[RewriteStep]:
    """Replayable rewrite trace from a minterm cover to ``cov_min``.

    Missing minterms are first inserted in pairs (Rule III); every target
    cube is then assembled bottom-up by Rule I / Rule II merges, level by
    level. Each step is checked to preserve the computed function. If the
    trace cannot be built, a single REORDER step marked "resynthesized" is
    returned instead.
    """
    if cov_naive.n != cov_min.n:
        raise ArityError("covers have different arity")
    n = cov_naive.n
    if _product_table(n, cov_naive.cubes) != _product_table(n, cov_min.cubes):
        raise ValueError("covers compute different functions")
    if cov_naive.cubes == cov_min.cubes:
        return []
    try:
        return _trace(cov_naive, cov_min)
    except (ValueError, KeyError):
        return [RewriteStep(Rule.REORDER, tuple(cov_naive.ordered()), tuple(cov_min.ordered()), "resynthesized")]


def _trace(cov_naive: ParityCover, cov_min: ParityCover) -> list[RewriteStep]:
    n = cov_naive.n
    if n > 12 or not all(c.is_minterm for c in cov_naive.cubes):
        raise ValueError("trace construction needs a minterm cover of at most 12 variables")
    product = Counter(cov_naive.cubes)
    need = Counter()
    for c in cov_min.ordered():
        need.update(_expand(c))
    steps: list[RewriteStep] = []
    for idx in sorted(need):
        m = Cube.minterm(n, idx)
        extra = need[idx] - product[m]
        if extra < 0 or extra % 2:
            raise ValueError("cover parity mismatch")
        for _ in range(extra // 2):
            before = _sorted(product)
            product[m] += 2
            steps.append(RewriteStep(Rule.RULE_III_INSERT, before, _sorted(product), f"insert ({m})^2"))

    merges: list[_Merge] = []
    for order, c in enumerate(cov_min.ordered()):
        _plan(c, order, merges)
    merges.sort(key=lambda m: (m.height, m.order))
    for m in merges:
        fn = rule1_merge if m.rule is Rule.RULE_I else rule2_merge
        if fn(m.left, m.right) != m.result:
            raise ValueError("planned merge does not reproduce its cube")
        if product[m.left] < 1 or product[m.right] < 1:
            raise KeyError("merge operand missing from product")
        before = _sorted(product)
        product[m.left] -= 1
        product[m.right] -= 1
        product[m.result] += 1
        product = +product
        after = _sorted(product)
        steps.append(RewriteStep(m.rule, before, after, f"{m.left} . {m.right} -> {m.result}"))

    if set(product.elements()) != set(cov_min.cubes) or sum(product.values()) != len(cov_min):
        raise ValueError("trace did not reach the target cover")
    for s in steps:
        if _product_table(n, s.before) != _product_table(n, s.after):
            raise ValueError(f"step {s} changes the function")
    return steps
