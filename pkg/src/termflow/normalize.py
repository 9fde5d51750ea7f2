"""Normalization pipeline for term systems.

Flattening rewrites every equation into depth-1 shape `f(u1,...,uk) = v` by
minting auxiliary variables ("_z0", "_z1", ... in post-order, left-to-right,
equations in order) for application subterms, recording leftover `u = v`
facts as variable equalities.  Quotienting merges equality classes onto a
deterministic representative, and collision quotienting merges the defined
variables of equations that share a (symbol, argument-tuple) key until a
fixpoint.  Every stage preserves the solution count of the original system
for every interpretation (the exhaustive oracle checks this in tests).

The terminal shapes:

  * functional normal form (FNF): every defined variable has exactly one
    defining equation;
  * collision-free FNF (CFNF): FNF and no two equations share a
    (symbol, argument-tuple) key.

Systems that do not land in FNF are classified and reported, never
transformed further.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .terms import (App, DispersionSpec, Equation, Ident, Signature, Term,
                    TermSystem, Var, render_term)


@dataclass(frozen=True)
class NormalEquation:
    """Depth-1 equation `symbol(args) = defined`; args are variable names."""

    symbol: Ident
    args: tuple[Ident, ...]
    defined: Ident

    @property
    def key(self) -> tuple[Ident, tuple[Ident, ...]]:
        return (self.symbol, self.args)


@dataclass(frozen=True)
class NormalSystem:
    """A flattened system plus any still-unresolved variable equalities.

    origin_map records, for every live auxiliary variable, the application
    subterm it stands for (rendered text), for reporting.
    """

    variables: tuple[Ident, ...]
    signature: Signature
    equations: tuple[NormalEquation, ...]
    var_equalities: tuple[tuple[Ident, Ident], ...] = ()
    origin_map: tuple[tuple[Ident, str], ...] = ()

    def __post_init__(self):
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise ValidationError("duplicate variable in normal system")
        for eq in self.equations:
            if eq.defined not in declared:
                raise ValidationError(f"undeclared defined variable {eq.defined!r}")
            for u in eq.args:
                if u not in declared:
                    raise ValidationError(f"undeclared argument {u!r}")
            if self.signature.arity(eq.symbol) != len(eq.args):
                raise ValidationError(f"arity mismatch on {eq.symbol!r}")
        for a, b in self.var_equalities:
            if a not in declared or b not in declared:
                raise ValidationError("undeclared variable in equality")

    @property
    def auxiliaries(self) -> tuple[Ident, ...]:
        return tuple(name for name, _ in self.origin_map)

    def to_term_system(self) -> TermSystem:
        eqs = [Equation(App(e.symbol, tuple(Var(u) for u in e.args)),
                        Var(e.defined))
               for e in self.equations]
        eqs += [Equation(Var(a), Var(b)) for a, b in self.var_equalities]
        return TermSystem(self.variables, self.signature, tuple(eqs))


class UnionFind:
    """Union-find whose class representative is the minimum under
    (original-variable-before-auxiliary, then lexicographic name)."""

    def __init__(self, names, auxiliaries):
        self.parent = {v: v for v in names}
        self.aux = frozenset(auxiliaries)

    def _rank(self, v: Ident) -> tuple[bool, Ident]:
        return (v in self.aux, v)

    def find(self, v: Ident) -> Ident:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:  # path compression
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: Ident, b: Ident) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        keep, drop = sorted((ra, rb), key=self._rank)
        self.parent[drop] = keep
        return True


@dataclass(frozen=True)
class Merge:
    kept: Ident
    removed: Ident
    stage: str


@dataclass(frozen=True)
class Classification:
    defined: tuple[Ident, ...]
    sources: tuple[Ident, ...]
    is_fnf: bool
    is_collision_free: bool

    @property
    def is_cfnf(self) -> bool:
        return self.is_fnf and self.is_collision_free


@dataclass(frozen=True)
class PipelineReport:
    stages: tuple[str, ...]
    auxiliaries: tuple[Ident, ...]
    merges: tuple[Merge, ...]
    defined: tuple[Ident, ...]
    sources: tuple[Ident, ...]
    is_normal: bool
    is_collision_free: bool
    is_fnf: bool
    is_cfnf: bool


def _is_flat_app(t: Term) -> bool:
    return isinstance(t, App) and all(isinstance(a, Var) for a in t.args)


def flatten(system: TermSystem) -> NormalSystem:
    """Rewrite to depth-1 equations over the original variables plus
    auxiliaries.

    Equations already of shape `f(vars) = v` (either orientation) pass
    through untouched.  `x = y` becomes a variable equality.  Anything else
    gets one auxiliary per distinct application subterm, shared across the
    whole system, with a variable equality tying the two sides' handles.
    """
    aux_of: dict[App, Ident] = {}
    origin: list[tuple[Ident, str]] = []
    equations: list[NormalEquation] = []
    equalities: list[tuple[Ident, Ident]] = []

    def handle(t: Term) -> Ident:
        if isinstance(t, Var):
            return t.name
        if t in aux_of:
            return aux_of[t]
        arg_handles = tuple(handle(a) for a in t.args)
        name = f"_z{len(aux_of)}"
        aux_of[t] = name
        origin.append((name, render_term(t)))
        equations.append(NormalEquation(t.symbol, arg_handles, name))
        return name

    for eq in system.equations:
        lhs, rhs = eq.lhs, eq.rhs
        if _is_flat_app(lhs) and isinstance(rhs, Var):
            equations.append(NormalEquation(
                lhs.symbol, tuple(a.name for a in lhs.args), rhs.name))
        elif _is_flat_app(rhs) and isinstance(lhs, Var):
            equations.append(NormalEquation(
                rhs.symbol, tuple(a.name for a in rhs.args), lhs.name))
        elif isinstance(lhs, Var) and isinstance(rhs, Var):
            equalities.append((lhs.name, rhs.name))
        else:
            equalities.append((handle(lhs), handle(rhs)))

    variables = system.variables + tuple(name for name, _ in origin)
    return NormalSystem(variables, system.signature, tuple(equations),
                        tuple(equalities), tuple(origin))


def _substitute(system: NormalSystem, uf: UnionFind, stage: str,
                merges: list[Merge]) -> NormalSystem:
    """Collapse every union-find class onto its representative."""
    rep = {v: uf.find(v) for v in system.variables}
    for v, r in rep.items():
        if v != r:
            merges.append(Merge(kept=r, removed=v, stage=stage))
    variables = tuple(v for v in system.variables if rep[v] == v)
    seen = set()
    equations = []
    for eq in system.equations:
        new = NormalEquation(eq.symbol, tuple(rep[u] for u in eq.args),
                             rep[eq.defined])
        if new not in seen:  # duplicates collapse
            seen.add(new)
            equations.append(new)
    equalities = tuple((rep[a], rep[b]) for a, b in system.var_equalities
                       if rep[a] != rep[b])
    origin = tuple((name, text) for name, text in system.origin_map
                   if rep[name] == name)
    return NormalSystem(variables, system.signature, tuple(equations),
                        equalities, origin)


def _quotient_vars(system: NormalSystem, merges: list[Merge]) -> NormalSystem:
    if not system.var_equalities:
        return system
    uf = UnionFind(system.variables, system.auxiliaries)
    for a, b in system.var_equalities:
        uf.union(a, b)
    out = _substitute(system, uf, "quotient_vars", merges)
    assert not out.var_equalities
    return out


def quotient_vars(system: NormalSystem) -> NormalSystem:
    """Eliminate variable equalities by merging each class onto its
    representative (originals beat auxiliaries, then lexicographic)."""
    return _quotient_vars(system, [])


def _collision_quotient(system: NormalSystem, merges: list[Merge]) -> NormalSystem:
    if system.var_equalities:
        raise PreconditionError("collision quotient expects a quotiented system")
    while True:
        uf = UnionFind(system.variables, system.auxiliaries)
        first: dict[tuple, Ident] = {}
        changed = False
        for eq in system.equations:
            prev = first.get(eq.key)
            if prev is None:
                first[eq.key] = eq.defined
            elif uf.find(prev) != uf.find(eq.defined):
                uf.union(prev, eq.defined)
                changed = True
        if not changed:
            return system
        system = _substitute(system, uf, "collision_quotient", merges)


def collision_quotient(system: NormalSystem) -> NormalSystem:
    """Merge defined variables of equations sharing a (symbol, args) key,
    re-substituting until no collision remains."""
    return _collision_quotient(system, [])


def classify(system: NormalSystem) -> Classification:
    """Split variables into defined and source, and test FNF/CFNF."""
    if system.var_equalities:
        raise PreconditionError("classify expects a quotiented system")
    defining: dict[Ident, int] = {}
    keys: dict[tuple, set[Ident]] = {}
    for eq in system.equations:
        defining[eq.defined] = defining.get(eq.defined, 0) + 1
        keys.setdefault(eq.key, set()).add(eq.defined)
    defined = tuple(v for v in system.variables if v in defining)
    sources = tuple(v for v in system.variables if v not in defining)
    is_fnf = all(c == 1 for c in defining.values())
    is_collision_free = all(len(ds) == 1 for ds in keys.values())
    return Classification(defined, sources, is_fnf, is_collision_free)


def pipeline(system: TermSystem) -> tuple[NormalSystem, PipelineReport]:
    """flatten -> quotient_vars -> collision_quotient (to fixpoint) ->
    classify, with a report of merges, auxiliaries, and final flags."""
    merges: list[Merge] = []
    flat = flatten(system)
    quot = _quotient_vars(flat, merges)
    out = _collision_quotient(quot, merges)
    cls = classify(out)
    report = PipelineReport(
        stages=("flatten", "quotient_vars", "collision_quotient", "classify"),
        auxiliaries=flat.auxiliaries,
        merges=tuple(merges),
        defined=cls.defined,
        sources=cls.sources,
        is_normal=not out.var_equalities,
        is_collision_free=cls.is_collision_free,
        is_fnf=cls.is_fnf,
        is_cfnf=cls.is_cfnf,
    )
    return out, report


def diversify(system: NormalSystem) -> NormalSystem:
    """Give the i-th equation its own fresh symbol "<f>@<i>" of the same
    arity.

    The new signature holds exactly the fresh symbols: the originals occur
    in no equation afterwards, so interpreting them cannot change any
    solution set, and dropping them keeps the oracle's interpretation space
    to the symbols that matter.
    """
    symbols = []
    equations = []
    for i, eq in enumerate(system.equations):
        name = f"{eq.symbol}@{i}"
        symbols.append((name, len(eq.args)))
        equations.append(NormalEquation(name, eq.args, eq.defined))
    return NormalSystem(system.variables, Signature(tuple(symbols)),
                        tuple(equations), system.var_equalities,
                        system.origin_map)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def embed_dispersion(spec: DispersionSpec) -> TermSystem:
    """Term system whose max solution count equals the input map's dispersion.

    Adds one output variable per output term (`yi = ti`) and one fresh r-ary
    decoder symbol per input (`xj = hj(y1,...,yr)`).
    """
    taken = set(spec.inputs) | set(spec.signature.names)
    y_names = [_fresh(f"y{i}", taken) for i in range(1, spec.r + 1)]
    h_names = [_fresh(f"h{j}", taken) for j in range(1, spec.k + 1)]
    signature = Signature(spec.signature.symbols
                          + tuple((h, spec.r) for h in h_names))
    y_tuple = tuple(Var(y) for y in y_names)
    equations = [Equation(Var(y_names[i]), spec.outputs[i])
                 for i in range(spec.r)]
    equations += [Equation(Var(spec.inputs[j]), App(h_names[j], y_tuple))
                  for j in range(spec.k)]
    return TermSystem(spec.inputs + tuple(y_names), signature, tuple(equations))


def pad_dispersion(spec: DispersionSpec, r2: int, k2: int) -> DispersionSpec:
    """Pad to r2 outputs and k2 inputs.

    Requires r2 >= r and k2 >= max(k, r2).  The original outputs are kept;
    output i for r < i <= r2 is the input variable at position i of the
    extended input list (new inputs are named "x<position>").  Padding with
    a position beyond every coordinate the original outputs consume raises
    the dispersion exponent by exactly one per projection and keeps
    perfect dispersion equivalent to the original's.
    """
    if r2 < spec.r or k2 < max(spec.k, r2):
        raise PreconditionError(
            f"padding needs r' >= r and k' >= max(k, r'); "
            f"got r'={r2}, k'={k2} for r={spec.r}, k={spec.k}")
    taken = set(spec.inputs) | set(spec.signature.names)
    inputs = list(spec.inputs)
    for pos in range(spec.k + 1, k2 + 1):
        inputs.append(_fresh(f"x{pos}", taken))
    outputs = list(spec.outputs)
    for pos in range(spec.r + 1, r2 + 1):
        outputs.append(Var(inputs[pos - 1]))
    return DispersionSpec(tuple(inputs), spec.signature, tuple(outputs))
