"""Exhaustive finite-alphabet oracles.

Everything here is ground truth by enumeration: interpretations are counted
through the canonical table encoding (first symbol's table most significant,
within a table the all-zero argument row most significant), so the stream is
lexicographic, deterministic, and splittable into contiguous index ranges.
Budgets are enforced up front from the closed-form space size
prod_f n^(n^arity(f)) * n^|V|; a search either fits or is refused whole.

Two evaluation routes coexist on purpose.  The scalar route
(`count_solutions`, `image_of`, `count_winning`) walks terms with
`eval_term` and is the reference semantics.  The engine route vectorizes
the interpretation axis with numpy for the big scans; tests pin the two
against each other, and every reported witness can be replayed through the
scalar route to reproduce its value.

Results are independent of chunking and of the `jobs` worker count: ranges
merge by (max value, then least interpretation index), and early-exit
searches report the sequential-equivalent work (witness index + 1).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .depgraph import DependencyGraph, GuessingStrategy, dependency_graph
from .errors import BudgetError, PreconditionError, ValidationError
from .normalize import NormalSystem, classify, diversify, embed_dispersion
from .terms import (App, DispersionSpec, Ident, Interpretation, Signature,
                    Term, TermSystem, Var, assignments, eval_term,
                    table_index)

_INDEX_BITS = 62  # interpretation indices must stay int64-safe


@dataclass(frozen=True)
class SearchBudget:
    """Hard ceilings for exhaustive scans, checked before any work starts."""

    max_evaluations: int = 1 << 26
    max_interpretations: int = 1 << 24

    def __post_init__(self):
        if self.max_evaluations < 1 or self.max_interpretations < 1:
            raise ValidationError("budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class OracleResult:
    """value, the lexicographically least witness attaining it, the rate
    log value / log n (None when n < 2), and the sequential-equivalent
    number of (interpretation, assignment) evaluations."""

    value: int
    witness: object  # Interpretation, or GuessingStrategy for game searches
    rate: float | None
    evaluations: int


@dataclass(frozen=True)
class PerfectDecision:
    perfect: bool
    target: int
    max_image: int
    witness: Interpretation  # first perfect witness, or the best refutation
    interpretations: int
    evaluations: int


@dataclass(frozen=True)
class GuessingEquality:
    equal: bool
    solutions: OracleResult
    winning: OracleResult


@dataclass(frozen=True)
class EmbeddingCheck:
    equal: bool
    dispersion: OracleResult
    embedded: OracleResult


@dataclass(frozen=True)
class CountPreservation:
    equal: bool
    interpretations: int
    first_mismatch: int | None


@dataclass(frozen=True)
class BlockEncoding:
    """Partition of [n] into v blocks of size m = n // v with the canonical
    in-order bijections (block i holds i*m .. (i+1)*m - 1)."""

    n: int
    v: int
    m: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.v < 1 or self.n < self.v:
            raise ValidationError("block encoding needs 1 <= v <= n")
        if self.m != self.n // self.v:
            raise ValidationError("block size must be floor(n / v)")
        if len(self.blocks) != self.v:
            raise ValidationError("one block per variable required")
        seen = set()
        for block in self.blocks:
            if len(block) != self.m:
                raise ValidationError("blocks must all have size m")
            for a in block:
                if not 0 <= a < self.n or a in seen:
                    raise ValidationError("blocks must be disjoint within [0,n)")
                seen.add(a)

    @classmethod
    def canonical(cls, n: int, v: int) -> "BlockEncoding":
        m = n // v
        blocks = tuple(tuple(range(i * m, (i + 1) * m)) for i in range(v))
        return cls(n, v, m, blocks)


@dataclass(frozen=True)
class SandwichReport:
    n: int
    v: int
    m: int
    original: OracleResult          # S_n of the system itself
    diversified_same_n: OracleResult
    diversified_small: OracleResult  # at m = floor(n / v)
    lifted_count: int               # solutions of the lifted witness, re-counted
    upper_ok: bool                  # S_n <= S_n(diversified)
    lower_ok: bool                  # S_n >= S_m(diversified)
    lift_ok: bool                   # lifted interpretation re-count >= S_m(div)

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok and self.lift_ok


# ---- interpretation space ---------------------------------------------------


def table_space(n: int, arity: int) -> int:
    """Number of tables for one symbol: n^(n^arity)."""
    return n ** (n ** arity)


def interpretation_count(signature: Signature, n: int) -> int:
    total = 1
    for _, arity in signature.symbols:
        total *= table_space(n, arity)
    return total


def _space_log2(symbols, n: int) -> float:
    if n == 1:
        return 0.0
    l2n = math.log2(n)
    bits = 0.0
    for _, arity in symbols:
        if arity * l2n > _INDEX_BITS:
            return float("inf")
        bits += (n ** arity) * l2n
    return bits


def _admit(signature: Signature, n: int, assign_vars: int,
           budget: SearchBudget, *, per_interp: int | None = None) -> int:
    """Closed-form budget check; returns the exact interpretation count.

    per_interp overrides the assignments-per-interpretation factor (the
    default is n^assign_vars)."""
    if n < 1:
        raise PreconditionError(f"alphabet size must be >= 1, got {n}")
    bits = _space_log2(signature.symbols, n)
    abits = assign_vars * (math.log2(n) if n > 1 else 0.0)
    if bits > _INDEX_BITS or bits + abits > 2 * _INDEX_BITS:
        raise BudgetError(
            f"interpretation space ~2^{bits:.0f} exceeds the engine's index "
            "range; refusing")
    total = interpretation_count(signature, n)
    factor = per_interp if per_interp is not None else n ** assign_vars
    evals = total * factor
    if total > budget.max_interpretations:
        raise BudgetError(
            f"{total} interpretations exceed the budget of "
            f"{budget.max_interpretations}; refusing before enumeration",
            interpretations=total, evaluations=evals)
    if evals > budget.max_evaluations:
        raise BudgetError(
            f"{evals} evaluations exceed the budget of "
            f"{budget.max_evaluations}; refusing before enumeration",
            interpretations=total, evaluations=evals)
    return total


def _tables_at(symbols, n: int, index: int) -> dict[Ident, tuple[int, ...]]:
    tables = {}
    rem = index
    for name, arity in reversed(symbols):
        size = n ** arity
        count = n ** size
        sub = rem % count
        rem //= count
        entries = [0] * size
        for j in range(size - 1, -1, -1):
            entries[j] = sub % n
            sub //= n
        tables[name] = tuple(entries)
    if rem:
        raise ValidationError("interpretation index out of range")
    return tables


def interpretation_at(signature: Signature, n: int, index: int) -> Interpretation:
    """The index-th interpretation in canonical order."""
    return Interpretation(n, _tables_at(signature.symbols, n, index))


def enumerate_interpretations(signature: Signature, n: int,
                              budget: SearchBudget = DEFAULT_BUDGET, *,
                              start: int = 0, stop: int | None = None):
    """Lexicographic stream over canonical table encodings.

    Any contiguous [start, stop) slice may be taken independently; the
    concatenation of a partition equals the full stream."""
    if _space_log2(signature.symbols, n) > _INDEX_BITS:
        raise BudgetError("interpretation space exceeds the engine's index range")
    total = interpretation_count(signature, n)
    if total > budget.max_interpretations:
        raise BudgetError(
            f"{total} interpretations exceed the budget of "
            f"{budget.max_interpretations}", interpretations=total)
    stop = total if stop is None else min(stop, total)
    for index in range(start, stop):
        yield interpretation_at(signature, n, index)


# ---- scalar reference route ------------------------------------------------


def _system_view(system) -> tuple[tuple[Ident, ...], Signature,
                                  tuple[tuple[Term, Term], ...]]:
    if isinstance(system, TermSystem):
        pairs = tuple((eq.lhs, eq.rhs) for eq in system.equations)
        return system.variables, system.signature, pairs
    if isinstance(system, NormalSystem):
        pairs = tuple((App(eq.symbol, tuple(Var(u) for u in eq.args)),
                       Var(eq.defined)) for eq in system.equations)
        pairs += tuple((Var(a), Var(b)) for a, b in system.var_equalities)
        return system.variables, system.signature, pairs
    raise PreconditionError(f"not a term system: {type(system).__name__}")


def count_solutions(system, interp: Interpretation) -> int:
    """Reference count of satisfying assignments for one interpretation."""
    variables, signature, pairs = _system_view(system)
    interp.validate_against(signature)
    total = 0
    for assign in assignments(variables, interp.n):
        if all(eval_term(lhs, interp, assign) == eval_term(rhs, interp, assign)
               for lhs, rhs in pairs):
            total += 1
    return total


def image_of(spec: DispersionSpec, interp: Interpretation) -> set[tuple[int, ...]]:
    """Reference image of the dispersion map under one interpretation."""
    interp.validate_against(spec.signature)
    out = set()
    for assign in assignments(spec.inputs, interp.n):
        out.add(tuple(eval_term(t, interp, assign) for t in spec.outputs))
    return out


def count_winning(graph: DependencyGraph, strategy: GuessingStrategy) -> int:
    """Reference count of configurations a strategy wins."""
    strategy.validate_against(graph)
    players = [v for v in graph.vertices if v not in graph.sources]
    nbrs = {v: graph.in_neighbors(v) for v in players}
    n = strategy.n
    total = 0
    for assign in assignments(graph.vertices, n):
        if all(strategy.tables[v][table_index(n, tuple(assign[u] for u in nbrs[v]))]
               == assign[v] for v in players):
            total += 1
    return total


# ---- vectorized engine -------------------------------------------------------


def _used_symbols(signature: Signature, terms) -> tuple[tuple[Ident, int], ...]:
    used = set()

    def walk(t: Term):
        if isinstance(t, App):
            used.add(t.symbol)
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return tuple((s, a) for s, a in signature.symbols if s in used)


def _decode_tables(symbols, n: int, lo: int, hi: int) -> dict[str, np.ndarray]:
    """Tables for interpretation indices [lo, hi) as (hi-lo, size) arrays."""
    rem = np.arange(lo, hi, dtype=np.int64)
    out = {}
    for name, arity in reversed(symbols):
        size = n ** arity
        count = n ** size
        sub = rem % count
        rem = rem // count
        tbl = np.empty((hi - lo, size), dtype=np.int64)
        for j in range(size - 1, -1, -1):
            tbl[:, j] = sub % n
            sub //= n
        out[name] = tbl
    return out


def _eval_vec(term: Term, tables, assign, n: int, c: int):
    """Evaluate under a fixed assignment for all chunk interpretations at
    once; returns a plain int when no symbol is involved."""
    if isinstance(term, Var):
        return assign[term.name]
    vals = [_eval_vec(a, tables, assign, n, c) for a in term.args]
    idx = 0
    for v in vals:
        idx = idx * n + v
    tbl = tables[term.symbol]
    if isinstance(idx, int):
        return tbl[:, idx]
    return tbl[np.arange(c), idx]


def _solution_counts(pairs, tables, assigns, c: int, n: int) -> np.ndarray:
    counts = np.zeros(c, dtype=np.int64)
    for assign in assigns:
        sat = None
        dead = False
        for lhs, rhs in pairs:
            lv = _eval_vec(lhs, tables, assign, n, c)
            rv = _eval_vec(rhs, tables, assign, n, c)
            if isinstance(lv, int) and isinstance(rv, int):
                if lv != rv:
                    dead = True
                    break
                continue
            m = lv == rv
            sat = m if sat is None else sat & m
        if dead:
            continue
        if sat is None:
            counts += 1
        else:
            counts += sat
    return counts


def _image_sizes(outputs, tables, assigns, c: int, n: int) -> np.ndarray:
    codes = np.empty((c, len(assigns)), dtype=np.int64)
    for col, assign in enumerate(assigns):
        code = 0
        for t in outputs:
            code = code * n + _eval_vec(t, tables, assign, n, c)
        codes[:, col] = code
    codes.sort(axis=1)
    if codes.shape[1] == 1:
        return np.ones(c, dtype=np.int64)
    return 1 + (np.diff(codes, axis=1) != 0).sum(axis=1)


def _payload_fn(kind: str, payload, n: int):
    """Chunk evaluator plus a chunk size keeping working memory modest."""
    if kind == "count":
        variables, symbols, pairs = payload
        assigns = list(assignments(variables, n))
        width = sum(n ** ar for _, ar in symbols) + 1

        def fn(lo, hi):
            tables = _decode_tables(symbols, n, lo, hi)
            return _solution_counts(pairs, tables, assigns, hi - lo, n)
    elif kind == "image":
        inputs, symbols, outputs = payload
        assigns = list(assignments(inputs, n))
        width = sum(n ** ar for _, ar in symbols) + len(assigns) + 1

        def fn(lo, hi):
            tables = _decode_tables(symbols, n, lo, hi)
            return _image_sizes(outputs, tables, assigns, hi - lo, n)
    else:  # pragma: no cover - internal misuse
        raise ValueError(kind)
    chunk = max(1, min(1 << 14, (1 << 21) // width))
    return fn, chunk


def _scan_range(task) -> tuple[int, int, int | None]:
    """Scan one contiguous index range; returns (best value, least index of
    it, least index reaching `target` or None)."""
    kind, payload, n, lo, hi, target = task
    fn, chunk = _payload_fn(kind, payload, n)
    best_v, best_i, hit = -1, -1, None
    pos = lo
    while pos < hi:
        end = min(pos + chunk, hi)
        vals = fn(pos, end)
        mx = int(vals.max())
        if mx > best_v:
            best_v = mx
            best_i = pos + int(vals.argmax())
        if target is not None and mx >= target:
            hit = pos + int(np.argmax(vals >= target))
            break
        pos = end
    return best_v, best_i, hit


def _split(total: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, min(jobs, total))
    base, extra = divmod(total, jobs)
    ranges = []
    lo = 0
    for j in range(jobs):
        hi = lo + base + (1 if j < extra else 0)
        if hi > lo:
            ranges.append((lo, hi))
        lo = hi
    return ranges


def _scan(kind, payload, n: int, total: int, jobs: int,
          target: int | None = None) -> tuple[int, int, int | None]:
    """Full scan of [0, total), optionally across processes; the merge is
    order-deterministic so results do not depend on the job count."""
    if jobs <= 1 or total < 4096:
        results = [_scan_range((kind, payload, n, 0, total, target))]
    else:
        tasks = [(kind, payload, n, lo, hi, target)
                 for lo, hi in _split(total, jobs)]
        with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
            results = list(pool.map(_scan_range, tasks))
    best_v, best_i, first_hit = -1, -1, None
    for v, i, h in results:  # ranges are in ascending index order
        if v > best_v:
            best_v, best_i = v, i
        if first_hit is None and h is not None:
            first_hit = h
    return best_v, best_i, first_hit


def _witness(signature: Signature, used, n: int, index: int) -> Interpretation:
    tables = _tables_at(used, n, index)
    for name, arity in signature.symbols:
        if name not in tables:
            tables[name] = (0,) * (n ** arity)
    return Interpretation(n, tables)


def _rate(value: int, n: int) -> float | None:
    if n < 2:
        return None
    return math.log(value) / math.log(n)


def _used_space(used, n: int) -> int:
    total = 1
    for _, arity in used:
        total *= table_space(n, arity)
    return total


# ---- search operations -------------------------------------------------------


def brute_max_solutions(system, n: int, budget: SearchBudget = DEFAULT_BUDGET,
                        *, jobs: int = 1) -> OracleResult:
    """Maximum solution count over every interpretation, with the least
    witness attaining it."""
    variables, signature, pairs = _system_view(system)
    _admit(signature, n, len(variables), budget)
    used = _used_symbols(signature, [t for pair in pairs for t in pair])
    total = _used_space(used, n)
    value, index, _ = _scan("count", (variables, used, pairs), n, total, jobs)
    return OracleResult(value, _witness(signature, used, n, index),
                        _rate(value, n), total * n ** len(variables))


def brute_dispersion(spec: DispersionSpec, n: int,
                     budget: SearchBudget = DEFAULT_BUDGET, *,
                     jobs: int = 1) -> OracleResult:
    """Maximum image size of the dispersion map over every interpretation."""
    _admit(spec.signature, n, spec.k, budget)
    if n > 1 and spec.r * math.log2(n) > _INDEX_BITS:
        raise BudgetError("output tuple codes exceed the engine's index range")
    used = _used_symbols(spec.signature, spec.outputs)
    total = _used_space(used, n)
    value, index, _ = _scan("image", (spec.inputs, used, spec.outputs), n,
                            total, jobs)
    return OracleResult(value, _witness(spec.signature, used, n, index),
                        _rate(value, n), total * n ** spec.k)


def check_perfect_fixed(spec: DispersionSpec, n: int,
                        budget: SearchBudget = DEFAULT_BUDGET, *,
                        jobs: int = 1) -> PerfectDecision:
    """Does some interpretation make the map surjective onto [n]^r?

    Early-exits on the first witness; otherwise the refutation carries the
    best image found over the full scan."""
    _admit(spec.signature, n, spec.k, budget)
    if n > 1 and spec.r * math.log2(n) > _INDEX_BITS:
        raise BudgetError("output tuple codes exceed the engine's index range")
    target = n ** spec.r
    used = _used_symbols(spec.signature, spec.outputs)
    total = _used_space(used, n)
    value, index, hit = _scan("image", (spec.inputs, used, spec.outputs), n,
                              total, jobs, target=target)
    if hit is not None:
        return PerfectDecision(True, target, target,
                               _witness(spec.signature, used, n, hit),
                               hit + 1, (hit + 1) * n ** spec.k)
    return PerfectDecision(False, target, value,
                           _witness(spec.signature, used, n, index),
                           total, total * n ** spec.k)


def _graph_view(graph: DependencyGraph):
    players = [v for v in graph.vertices if v not in graph.sources]
    pseudo = Signature(tuple((v, len(graph.in_neighbors(v))) for v in players))
    pairs = tuple((App(v, tuple(Var(u) for u in graph.in_neighbors(v))), Var(v))
                  for v in players)
    return pseudo, pairs


def brute_guessing(graph: DependencyGraph, n: int,
                   budget: SearchBudget = DEFAULT_BUDGET, *,
                   jobs: int = 1) -> OracleResult:
    """Maximum number of winning configurations over every strategy.

    The rate field is the guessing value log_n W.  Sources are free; each
    non-source vertex guesses from its ordered in-neighborhood (which may
    include itself if a loop is present)."""
    pseudo, pairs = _graph_view(graph)
    _admit(pseudo, n, len(graph.vertices), budget)
    total = _used_space(pseudo.symbols, n)
    value, index, _ = _scan("count", (graph.vertices, pseudo.symbols, pairs),
                            n, total, jobs)
    strategy = GuessingStrategy(n, _tables_at(pseudo.symbols, n, index))
    return OracleResult(value, strategy, _rate(value, n),
                        total * n ** len(graph.vertices))


def check_solutions_equal_winning(system: NormalSystem, n: int,
                                  budget: SearchBudget = DEFAULT_BUDGET, *,
                                  jobs: int = 1) -> GuessingEquality:
    """Max solutions of a diversified FNF system vs. the game value of its
    dependency graph; the two coincide, and both witnesses are returned."""
    cls = classify(system)
    if not cls.is_fnf:
        raise PreconditionError("solutions-vs-winning needs an FNF system")
    if len({eq.symbol for eq in system.equations}) != len(system.equations):
        raise PreconditionError(
            "solutions-vs-winning needs a diversified system "
            "(one fresh symbol per equation)")
    solutions = brute_max_solutions(system, n, budget, jobs=jobs)
    winning = brute_guessing(dependency_graph(system), n, budget, jobs=jobs)
    return GuessingEquality(solutions.value == winning.value, solutions, winning)


def check_counts_preserved(before, after, n: int,
                           budget: SearchBudget = DEFAULT_BUDGET
                           ) -> CountPreservation:
    """Exhaustively compare per-interpretation solution counts of two
    systems over the same signature (the normalization-preservation
    oracle)."""
    vars_a, sig_a, pairs_a = _system_view(before)
    vars_b, sig_b, pairs_b = _system_view(after)
    if sig_a != sig_b:
        raise PreconditionError("count comparison needs a shared signature")
    per = n ** len(vars_a) + n ** len(vars_b)
    _admit(sig_a, n, 0, budget, per_interp=per)
    terms = [t for pair in pairs_a + pairs_b for t in pair]
    used = _used_symbols(sig_a, terms)
    total = _used_space(used, n)
    fa, chunk_a = _payload_fn("count", (vars_a, used, pairs_a), n)
    fb, chunk_b = _payload_fn("count", (vars_b, used, pairs_b), n)
    chunk = min(chunk_a, chunk_b)
    pos = 0
    while pos < total:
        end = min(pos + chunk, total)
        ca, cb = fa(pos, end), fb(pos, end)
        if not np.array_equal(ca, cb):
            first = pos + int(np.argmax(ca != cb))
            return CountPreservation(False, total, first)
        pos = end
    return CountPreservation(True, total, None)


# ---- constructions verified by re-counting ------------------------------------


def lift_interpretation(system: NormalSystem, small: Interpretation,
                        encoding: BlockEncoding) -> Interpretation:
    """Blow a small-alphabet interpretation of the diversified system up to
    the big alphabet, block-piecewise.

    Each equation e: f(x_i1,...,x_id) = x_j installs, on argument blocks
    B_i1 x ... x B_id, the e-th diversified table conjugated by the block
    bijections, writing into block B_j; everything else is 0.  Collision
    freedom makes the pieces disjoint, which is why CFNF is required."""
    cls = classify(system)
    if not cls.is_cfnf:
        raise PreconditionError("lift needs a collision-free FNF system")
    if encoding.v != len(system.variables):
        raise PreconditionError("encoding must have one block per variable")
    if small.n != encoding.m:
        raise PreconditionError(
            f"small interpretation is over [{small.n}], blocks have size "
            f"{encoding.m}")
    vidx = {v: i for i, v in enumerate(system.variables)}
    n, m = encoding.n, encoding.m
    by_symbol: dict[Ident, list] = {}
    for e_idx, eq in enumerate(system.equations):
        by_symbol.setdefault(eq.symbol, []).append((e_idx, eq))
    tables = {}
    for name, arity in system.signature.symbols:
        entries = [0] * (n ** arity)
        for e_idx, eq in by_symbol.get(name, ()):
            div_name = f"{name}@{e_idx}"
            if div_name not in small.tables:
                raise PreconditionError(
                    f"small interpretation lacks a table for {div_name!r}")
            sub = small.tables[div_name]
            arg_blocks = [encoding.blocks[vidx[u]] for u in eq.args]
            out_block = encoding.blocks[vidx[eq.defined]]
            for small_args in itertools.product(range(m), repeat=arity):
                big_args = tuple(arg_blocks[t][small_args[t]]
                                 for t in range(arity))
                value = sub[table_index(m, small_args)]
                entries[table_index(n, big_args)] = out_block[value]
        tables[name] = tuple(entries)
    return Interpretation(n, tables)


def sandwich_check(system: NormalSystem, n: int,
                   budget: SearchBudget = DEFAULT_BUDGET, *,
                   jobs: int = 1) -> SandwichReport:
    """Check S_n <= S_n(diversified) and S_n >= S_m(diversified) for
    m = floor(n / v), and verify the lower bound constructively by lifting
    the small witness and re-counting its solutions at n."""
    cls = classify(system)
    if not cls.is_cfnf:
        raise PreconditionError("sandwich check needs a collision-free FNF system")
    v = len(system.variables)
    if v < 1:
        raise PreconditionError("sandwich check needs at least one variable")
    if n < v:
        raise PreconditionError(f"sandwich check needs n >= v; got n={n}, v={v}")
    div = diversify(system)
    original = brute_max_solutions(system, n, budget, jobs=jobs)
    div_same = brute_max_solutions(div, n, budget, jobs=jobs)
    m = n // v
    div_small = brute_max_solutions(div, m, budget, jobs=jobs)
    encoding = BlockEncoding.canonical(n, v)
    lifted = lift_interpretation(system, div_small.witness, encoding)
    lifted_count = count_solutions(system, lifted)
    return SandwichReport(
        n=n, v=v, m=m, original=original, diversified_same_n=div_same,
        diversified_small=div_small, lifted_count=lifted_count,
        upper_ok=original.value <= div_same.value,
        lower_ok=original.value >= div_small.value,
        lift_ok=lifted_count >= div_small.value)


def check_embedding(spec: DispersionSpec, n: int,
                    budget: SearchBudget = DEFAULT_BUDGET) -> EmbeddingCheck:
    """Dispersion of the input map vs. max solutions of its decoder embedding.

    Decoder tables are synthesized, not enumerated: for each interpretation
    of the original symbols, every image point gets its lexicographically
    least preimage written into the decoders (zeros elsewhere), and the
    resulting solution count is re-counted by the reference route.  The
    maximum over interpretations is the embedded side's value."""
    embedded = embed_dispersion(spec)
    k, r = spec.k, spec.r
    per = n ** k + n ** (k + r)
    _admit(spec.signature, n, 0, budget, per_interp=per)
    dispersion = brute_dispersion(spec, n, budget)

    decoder_names = embedded.signature.names[len(spec.signature.names):]
    used = _used_symbols(spec.signature, spec.outputs)
    total = _used_space(used, n)
    best_value, best_witness = -1, None
    for index in range(total):
        interp = _witness(spec.signature, used, n, index)
        chosen: dict[tuple[int, ...], tuple[int, ...]] = {}
        for assign in assignments(spec.inputs, n):
            outs = tuple(eval_term(t, interp, assign) for t in spec.outputs)
            if outs not in chosen:
                chosen[outs] = tuple(assign[x] for x in spec.inputs)
        tables = dict(interp.tables)
        for j, h in enumerate(decoder_names):
            entries = [0] * (n ** r)
            for outs, preimage in chosen.items():
                entries[table_index(n, outs)] = preimage[j]
            tables[h] = tuple(entries)
        full = Interpretation(n, tables)
        value = count_solutions(embedded, full)
        if value > best_value:
            best_value, best_witness = value, full
    result = OracleResult(best_value, best_witness, _rate(best_value, n),
                          total * per)
    return EmbeddingCheck(dispersion.value == best_value, dispersion, result)
