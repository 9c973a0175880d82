"""Exact DFA learning as 0-1 assignment over the prefix tree.

The optimization instance assigns one DFA state to every prefix-tree
node subject to: the root sits at state 0; the assignment is realizable
by a deterministic transition function; the two absorbing states only
self-transition.  The objective charges

  * per node, its misclassification cost -- the node's negative weight
    if its state accepts, its positive weight otherwise,
  * ``lam_edge`` per non-self transition in the transition table, and
  * ``lam_absorb`` per node assigned outside the absorbing states.

The embedded solver is a depth-first branch-and-bound over node
assignments in BFS order, branching on states, propagating transition
implications, and bounding with the incurred cost plus each unassigned
node's cheaper side of the misclassification cost.  It is anytime (the
all-nodes-to-absorbing-reject assignment is always feasible), certifies
optimality when the search space is exhausted, and resolves
equal-objective optima to the lexicographically smallest assignment
vector in BFS node order so outputs are canonical.  The search is
deterministic; ``threads`` and ``seed`` are accepted for interface
stability and do not change results.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dfa import DfaModel
from .errors import DataError, InternalError
from .prefix_tree import PrefixTree, balanced_lambda_pos, build_prefix_tree
from .traces import LabeledDataset, binarize

OBJECTIVE_TOL = 1e-9
_PRUNE_TOL = 1e-12

# 11 approximately evenly spaced values on a log scale, 1e-4 .. 10
LAMBDA_EDGE_GRID = tuple(10.0 ** (-4 + 0.5 * k) for k in range(11))


@dataclass(frozen=True)
class StateLayout:
    """Fixed role assignment for the ``q_max`` available DFA states.

    State 0 is initial (never accepting); the two highest states are the
    accepting and rejecting absorbing states.  By default, odd states
    among the remaining free states 1..q_max-3 are accepting; pass
    ``accepting`` to override.
    """

    q_max: int
    accepting: frozenset

    @classmethod
    def default(cls, q_max: int, accepting=None) -> "StateLayout":
        if q_max < 3:
            raise DataError(f"q_max must be at least 3, got {q_max}")
        absorb_accept = q_max - 2
        if accepting is None:
            accepting = frozenset({absorb_accept} | {q for q in range(1, q_max - 2) if q % 2 == 1})
        else:
            accepting = frozenset(accepting)
        layout = cls(q_max=q_max, accepting=accepting)
        layout._validate()
        return layout

    def _validate(self):
        if self.q_max < 3:
            raise DataError(f"q_max must be at least 3, got {self.q_max}")
        if 0 in self.accepting:
            raise DataError("the initial state cannot be accepting")
        if self.absorb_accept not in self.accepting:
            raise DataError(f"state {self.absorb_accept} (absorbing accept) must be accepting")
        if self.absorb_reject in self.accepting:
            raise DataError(f"state {self.absorb_reject} (absorbing reject) cannot be accepting")
        if not all(0 <= q < self.q_max for q in self.accepting):
            raise DataError("accepting states out of range")

    @property
    def initial(self) -> int:
        return 0

    @property
    def absorb_accept(self) -> int:
        return self.q_max - 2

    @property
    def absorb_reject(self) -> int:
        return self.q_max - 1

    @property
    def absorbing(self) -> frozenset:
        return frozenset({self.absorb_accept, self.absorb_reject})


@dataclass(frozen=True)
class AssignmentProgram:
    """A 0-1 optimization instance built from an annotated prefix tree."""

    tree: PrefixTree
    layout: StateLayout
    lam_edge: float
    lam_absorb: float
    lam_pos: float
    lam_neg: float

    @property
    def n_x_variables(self) -> int:
        return len(self.tree) * self.layout.q_max

    @property
    def n_delta_variables(self) -> int:
        return self.layout.q_max ** 2 * len(self.tree.alphabet)

    def node_state_cost(self, node_id: int, q: int) -> float:
        """Misclassification plus occupancy cost of putting a node at q."""
        node = self.tree.nodes[node_id]
        if q in self.layout.accepting:
            cost = self.lam_neg * node.w_neg
        else:
            cost = self.lam_pos * node.w_pos
        if q not in self.layout.absorbing:
            cost += self.lam_absorb
        return cost


@dataclass(frozen=True)
class SolveStats:
    nodes_explored: int
    wall_time: float


@dataclass(frozen=True)
class SolveResult:
    assignment: tuple  # node id (BFS order) -> state id
    objective: float
    bound: float
    status: str  # optimal | feasible_timeout | infeasible
    stats: SolveStats = field(compare=False, default=SolveStats(0, 0.0))


def build_program(tree: PrefixTree, layout: StateLayout, lam_edge: float,
                  lam_absorb: float, lam_pos: float = 1.0, lam_neg: float = 1.0) -> AssignmentProgram:
    if min(lam_edge, lam_absorb, lam_pos, lam_neg) < 0:
        raise DataError("cost coefficients must be nonnegative")
    if len(tree) == 0:
        raise DataError("cannot build a program from an empty tree")
    layout._validate()
    return AssignmentProgram(tree, layout, lam_edge, lam_absorb, lam_pos, lam_neg)


def evaluate_assignment(program: AssignmentProgram, assignment) -> float:
    """Objective of a complete assignment, recomputed from scratch.

    Raises InternalError if the assignment is not realizable by any
    deterministic transition function.
    """
    tree, layout = program.tree, program.layout
    if len(assignment) != len(tree):
        raise InternalError("assignment length does not match tree size")
    if assignment[0] != 0:
        raise InternalError("root must be assigned the initial state")
    forced = {}
    for t in layout.absorbing:
        for s in range(len(tree.alphabet)):
            forced[(t, s)] = t
    objective = program.node_state_cost(0, 0)
    for node in tree.nodes[1:]:
        q = assignment[node.id]
        key = (assignment[node.parent], node.incoming_symbol)
        prev = forced.get(key)
        if prev is None:
            forced[key] = q
            if q != key[0]:
                objective += program.lam_edge
        elif prev != q:
            raise InternalError(f"assignment is infeasible at node {node.id}")
        objective += program.node_state_cost(node.id, q)
    return objective


def fallback_assignment(program: AssignmentProgram) -> tuple:
    """Always-feasible incumbent: everything after the root is absorbed rejecting."""
    m = len(program.tree)
    return (0,) + (program.layout.absorb_reject,) * (m - 1)


def solve(program: AssignmentProgram, time_limit: float = 900.0,
          threads: int = 1, seed: int = 0) -> SolveResult:
    """Exact anytime search for a minimum-cost feasible assignment."""
    del threads, seed  # search is deterministic; kept for interface stability
    if time_limit <= 0:
        raise DataError("time_limit must be positive")
    t0 = time.monotonic()
    tree, layout = program.tree, program.layout
    nodes = tree.nodes
    m = len(nodes)
    q_max = layout.q_max

    cost = [[program.node_state_cost(n, q) for q in range(q_max)] for n in range(m)]
    suffix_min = [0.0] * (m + 1)
    for n in range(m - 1, -1, -1):
        node = nodes[n]
        suffix_min[n] = suffix_min[n + 1] + min(
            program.lam_neg * node.w_neg, program.lam_pos * node.w_pos)

    parent = [node.parent for node in nodes]
    sym = [node.incoming_symbol for node in nodes]

    # interchangeable free states may only be introduced in group order
    free_acc = sorted(q for q in layout.accepting if q not in layout.absorbing)
    free_rej = sorted(q for q in range(1, q_max)
                      if q not in layout.accepting and q not in layout.absorbing)
    group_of = {}
    for gi, group in enumerate((free_acc, free_rej)):
        for pos, q in enumerate(group):
            group_of[q] = (gi, pos)
    used = [0, 0]

    delta = {}
    n_symbols = len(tree.alphabet)
    for t in layout.absorbing:
        for s in range(n_symbols):
            delta[(t, s)] = t

    best_obj = float("inf")
    best_assign = None
    assign = [0] + [-1] * (m - 1)
    incurred = cost[0][0]
    nodes_explored = 0
    timed_out = False

    if m == 1:
        best_obj, best_assign = incurred, (0,)
    else:
        cand = [None] * m
        next_idx = [0] * m
        undo = [None] * m

        def candidates(i):
            qp = assign[parent[i]]
            forced = delta.get((qp, sym[i]))
            if forced is not None:
                return (forced,)
            allowed = []
            for q in range(q_max):
                g = group_of.get(q)
                if g is None or g[1] <= used[g[0]]:
                    allowed.append(q)
            return tuple(allowed)

        def revert(i):
            nonlocal incurred
            added_key, inc_group, added_cost = undo[i]
            incurred -= added_cost
            if added_key is not None:
                del delta[added_key]
            if inc_group is not None:
                used[inc_group] -= 1
            assign[i] = -1

        depth = 1
        cand[1] = candidates(1)
        next_idx[1] = 0
        while depth >= 1:
            if nodes_explored % 4096 == 0 and time.monotonic() - t0 > time_limit:
                timed_out = True
                break
            if next_idx[depth] >= len(cand[depth]):
                depth -= 1
                if depth >= 1:
                    revert(depth)
                continue
            q = cand[depth][next_idx[depth]]
            next_idx[depth] += 1
            nodes_explored += 1

            qp = assign[parent[depth]]
            key = (qp, sym[depth])
            added_cost = cost[depth][q]
            added_key = None
            if key not in delta:
                delta[key] = q
                added_key = key
                if q != qp:
                    added_cost += program.lam_edge
            g = group_of.get(q)
            inc_group = None
            if g is not None and g[1] == used[g[0]]:
                used[g[0]] += 1
                inc_group = g[0]
            assign[depth] = q
            incurred += added_cost
            undo[depth] = (added_key, inc_group, added_cost)

            if incurred + suffix_min[depth + 1] >= best_obj - _PRUNE_TOL:
                revert(depth)
                continue
            if depth == m - 1:
                best_obj = incurred
                best_assign = tuple(assign)
                revert(depth)
                continue
            depth += 1
            cand[depth] = candidates(depth)
            next_idx[depth] = 0

    if best_assign is None:
        best_assign = fallback_assignment(program)
        best_obj = evaluate_assignment(program, best_assign)

    wall = time.monotonic() - t0
    if timed_out:
        status = "feasible_timeout"
        bound = min(suffix_min[0], best_obj)
    else:
        status = "optimal"
        bound = best_obj

    objective = evaluate_assignment(program, best_assign)
    if abs(objective - best_obj) > OBJECTIVE_TOL:
        raise InternalError(
            f"incremental objective {best_obj} disagrees with re-evaluation {objective}")
    return SolveResult(
        assignment=best_assign,
        objective=objective,
        bound=bound,
        status=status,
        stats=SolveStats(nodes_explored=nodes_explored, wall_time=wall),
    )


def decode(program: AssignmentProgram, result: SolveResult) -> DfaModel:
    """Turn a solved assignment into a DFA.

    Transitions not forced by any tree edge are completed canonically as
    self-loops.  The decoded DFA replayed over every training prefix
    visits exactly the solved assignment.
    """
    if result.status == "infeasible":
        raise DataError("cannot decode an infeasible result")
    tree, layout = program.tree, program.layout
    assignment = result.assignment
    n_symbols = len(tree.alphabet)
    forced = {}
    for t in layout.absorbing:
        for s in range(n_symbols):
            forced[(t, s)] = t
    for node in tree.nodes[1:]:
        key = (assignment[node.parent], node.incoming_symbol)
        q = assignment[node.id]
        prev = forced.get(key)
        if prev is not None and prev != q:
            raise InternalError("assignment violates linking constraints")
        forced[key] = q
    delta = tuple(
        tuple(forced.get((q, s), q) for s in range(n_symbols))
        for q in range(layout.q_max)
    )
    model = DfaModel(
        n_states=layout.q_max,
        initial=0,
        accepting=layout.accepting,
        absorbing=layout.absorbing,
        delta=delta,
        alphabet=tree.alphabet,
    )
    for node in tree.nodes[1:]:
        reached = model.delta[assignment[node.parent]][node.incoming_symbol]
        if reached != assignment[node.id]:
            raise InternalError("decoded DFA does not replay the assignment")
    return model


def _format_coef(value: float) -> str:
    return repr(value)


def export_lp(program: AssignmentProgram) -> str:
    """Write the instance in CPLEX LP format for external solvers."""
    tree, layout = program.tree, program.layout
    q_max = layout.q_max
    n_symbols = len(tree.alphabet)

    x = lambda n, q: f"x_n{n}_q{q}"
    d = lambda q, s, q2: f"d_q{q}_s{s}_q{q2}"

    terms = []
    for n in range(len(tree)):
        for q in range(q_max):
            coef = program.node_state_cost(n, q)
            if coef != 0.0:
                terms.append((coef, x(n, q)))
    if program.lam_edge != 0.0:
        for q in range(q_max):
            for s in range(n_symbols):
                for q2 in range(q_max):
                    if q2 != q:
                        terms.append((program.lam_edge, d(q, s, q2)))
    if not terms:
        terms.append((0.0, x(0, 0)))

    lines = ["Minimize"]
    obj_parts = [f"{_format_coef(coef)} {name}" for coef, name in terms]
    for i in range(0, len(obj_parts), 8):
        chunk = " + ".join(obj_parts[i:i + 8])
        prefix = " obj: " if i == 0 else "      + "
        lines.append(prefix + chunk)

    lines.append("Subject To")
    for n in range(len(tree)):
        expr = " + ".join(x(n, q) for q in range(q_max))
        lines.append(f" assign_n{n}: {expr} = 1")
    lines.append(f" root: {x(0, 0)} = 1")
    for q in range(q_max):
        for s in range(n_symbols):
            expr = " + ".join(d(q, s, q2) for q2 in range(q_max))
            lines.append(f" det_q{q}_s{s}: {expr} = 1")
    for t in sorted(layout.absorbing):
        for s in range(n_symbols):
            lines.append(f" term_q{t}_s{s}: {d(t, s, t)} = 1")
    for node in tree.nodes[1:]:
        n, p, s = node.id, node.parent, node.incoming_symbol
        for q in range(q_max):
            for q2 in range(q_max):
                lines.append(
                    f" link_n{n}_q{q}_q{q2}: {x(p, q)} + {x(n, q2)} - {d(q, s, q2)} <= 1")

    lines.append("Binary")
    for n in range(len(tree)):
        for q in range(q_max):
            lines.append(f" {x(n, q)}")
    for q in range(q_max):
        for s in range(n_symbols):
            for q2 in range(q_max):
                lines.append(f" {d(q, s, q2)}")
    lines.append("End")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HyperParams:
    q_max: int = 5
    lam_edge: float = 0.0
    lam_absorb: float = 0.001
    lam_pos: float = 1.0
    lam_neg: float = 1.0
    balanced: bool = False  # lam_pos := total negative weight / total positive weight
    weighting: str = "length_normalized"
    time_limit: float = 900.0
    threads: int = 1
    seed: int = 0
    accepting_states: tuple | None = None


def _class_weights(hp: HyperParams, tree: PrefixTree):
    if hp.balanced:
        return balanced_lambda_pos(tree), hp.lam_neg
    return hp.lam_pos, hp.lam_neg


def train_class_dfa(dataset: LabeledDataset, target: int, hp: HyperParams) -> DfaModel:
    """Binarize, build the tree and program, solve and decode, for one class."""
    binarized = binarize(dataset, target)
    if not any(positive for _, positive in binarized):
        raise DataError(f"target class empty: {dataset.classes[target]!r}")
    tree = build_prefix_tree(binarized, dataset.alphabet, weighting=hp.weighting)
    layout = StateLayout.default(hp.q_max, hp.accepting_states)
    lam_pos, lam_neg = _class_weights(hp, tree)
    program = build_program(tree, layout, hp.lam_edge, hp.lam_absorb, lam_pos, lam_neg)
    result = solve(program, time_limit=hp.time_limit, threads=hp.threads, seed=hp.seed)
    return decode(program, result)


def f1_score(model: DfaModel, binarized) -> float:
    """F1 of accept-as-positive; 0 by convention when precision+recall is 0."""
    tp = fp = fn = 0
    for trace, positive in binarized:
        predicted = model.accepts(trace)
        if predicted and positive:
            tp += 1
        elif predicted and not positive:
            fp += 1
        elif positive:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def validate_select(candidates, val_binarized) -> DfaModel:
    """Pick the candidate maximizing validation F1.

    ``candidates`` is a list of (lam_edge, model) pairs.  Ties prefer the
    smaller lam_edge, then the model with fewer non-self transitions.
    """
    if not candidates:
        raise DataError("no candidate models to select from")
    ranked = sorted(
        candidates,
        key=lambda pair: (-f1_score(pair[1], val_binarized),
                          pair[0],
                          pair[1].nonself_transition_count()),
    )
    return ranked[0][1]


@dataclass(frozen=True)
class TrainedClassifier:
    model: DfaModel
    lam_edge: float
    status: str
    validation_f1: float


def train_class_with_grid(train_ds: LabeledDataset, val_ds: LabeledDataset,
                          target: int, hp: HyperParams,
                          grid=LAMBDA_EDGE_GRID) -> TrainedClassifier:
    """Train one class over a lam_edge grid and select by validation F1.

    Falls back to training F1 when the validation set is empty.
    """
    binarized = binarize(train_ds, target)
    if not any(positive for _, positive in binarized):
        raise DataError(f"target class empty: {train_ds.classes[target]!r}")
    tree = build_prefix_tree(binarized, train_ds.alphabet, weighting=hp.weighting)
    layout = StateLayout.default(hp.q_max, hp.accepting_states)
    lam_pos, lam_neg = _class_weights(hp, tree)

    candidates = []
    statuses = {}
    for lam_edge in grid:
        program = build_program(tree, layout, lam_edge, hp.lam_absorb, lam_pos, lam_neg)
        result = solve(program, time_limit=hp.time_limit, threads=hp.threads, seed=hp.seed)
        model = decode(program, result)
        candidates.append((lam_edge, model))
        statuses[lam_edge] = result.status

    selection_set = binarize(val_ds, target) if len(val_ds) else binarized
    best = validate_select(candidates, selection_set)
    best_lam = next(lam for lam, model in candidates if model is best)
    return TrainedClassifier(
        model=best,
        lam_edge=best_lam,
        status=statuses[best_lam],
        validation_f1=f1_score(best, selection_set),
    )
