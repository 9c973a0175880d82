"""Independent oracles used to check the library's algorithms.

Everything here is deliberately written from first principles --
exhaustive enumeration, BFS, or an external solver -- and never calls
the code paths it is used to verify.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque

from seqdfa.dfa import DfaModel
from seqdfa.traces import Alphabet


def brute_force_optimum(tree, layout, lam_edge, lam_absorb, lam_pos, lam_neg):
    """Minimum objective over all feasible node->state assignments.

    Feasibility means a deterministic transition function exists that
    produces the assignment, with the absorbing states self-looping.
    Returns (objective, lexicographically smallest optimal assignment).
    """
    nodes = tree.nodes
    m = len(nodes)
    q_max = layout.q_max
    absorbing = layout.absorbing
    accepting = layout.accepting

    best = math.inf
    best_assign = None
    for tail in itertools.product(range(q_max), repeat=m - 1):
        assign = (0,) + tail
        forced = {}
        feasible = True
        for node in nodes[1:]:
            qp = assign[node.parent]
            q = assign[node.id]
            if qp in absorbing and q != qp:
                feasible = False
                break
            key = (qp, node.incoming_symbol)
            if forced.setdefault(key, q) != q:
                feasible = False
                break
        if not feasible:
            continue
        cost = 0.0
        for node in nodes:
            if assign[node.id] in accepting:
                cost += lam_neg * node.w_neg
            else:
                cost += lam_pos * node.w_pos
            if assign[node.id] not in absorbing:
                cost += lam_absorb
        cost += lam_edge * sum(1 for (q, _), q2 in forced.items() if q2 != q)
        if cost < best - 1e-12:
            best = cost
            best_assign = assign
    return best, best_assign


def bfs_edit_distance(dfa: DfaModel, trace, max_depth):
    """Edit distance to the accepted language by breadth-first search
    over single-symbol replace/insert/delete edits."""
    n_symbols = len(dfa.alphabet)
    frontier = {tuple(trace)}
    seen = set(frontier)
    for depth in range(max_depth + 1):
        for candidate in frontier:
            if dfa.accepts(candidate):
                return depth
        nxt = set()
        for candidate in frontier:
            for i in range(len(candidate)):
                for s in range(n_symbols):
                    if s != candidate[i]:
                        edited = candidate[:i] + (s,) + candidate[i + 1:]
                        if edited not in seen:
                            seen.add(edited)
                            nxt.add(edited)
                edited = candidate[:i] + candidate[i + 1:]
                if edited not in seen:
                    seen.add(edited)
                    nxt.add(edited)
            for i in range(len(candidate) + 1):
                for s in range(n_symbols):
                    edited = candidate[:i] + (s,) + candidate[i:]
                    if edited not in seen:
                        seen.add(edited)
                        nxt.add(edited)
        frontier = nxt
    return None


def all_strings(n_symbols, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(range(n_symbols), repeat=length)


def random_dfa(rng, n_states, n_symbols) -> DfaModel:
    alphabet = Alphabet.build(f"s{i}" for i in range(n_symbols))
    delta = tuple(
        tuple(rng.randrange(n_states) for _ in range(n_symbols))
        for _ in range(n_states)
    )
    accepting = frozenset(q for q in range(n_states) if rng.random() < 0.4)
    return DfaModel(
        n_states=n_states,
        initial=0,
        accepting=accepting,
        absorbing=frozenset(),
        delta=delta,
        alphabet=alphabet,
    )


def random_binarized(rng, n_traces, n_symbols, max_len):
    """Random labeled traces for solver stress tests."""
    out = []
    for _ in range(n_traces):
        length = rng.randint(1, max_len)
        trace = tuple(rng.randrange(n_symbols) for _ in range(length))
        out.append((trace, rng.random() < 0.5))
    return out


# --- LP-format parsing for the external-solver cross-check ----------------

_TERM_RE = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_expression(text):
    """Linear expression -> {variable: coefficient}."""
    coefs = {}
    for match in _TERM_RE.finditer(text):
        sign_txt, coef_txt, name = match.group(1), match.group(2), match.group(3)
        coef = float(coef_txt) if coef_txt else 1.0
        if sign_txt == "-":
            coef = -coef
        coefs[name] = coefs.get(name, 0.0) + coef
    return coefs


def parse_lp(text):
    """Parse the subset of CPLEX LP format the exporter emits.

    Returns (objective coefs, constraints, binary variable names) where
    each constraint is (coefs, sense, rhs) with sense in {'=', '<=', '>='}.
    """
    lines = [ln.rstrip() for ln in text.splitlines()]
    section = None
    objective_text = []
    constraint_texts = []
    binaries = []
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        lowered = stripped.lower()
        if lowered in ("minimize", "maximize"):
            section = "objective"
            continue
        if lowered == "subject to":
            section = "constraints"
            continue
        if lowered in ("binary", "binaries", "bin"):
            section = "binary"
            continue
        if lowered == "end":
            break
        if section == "objective":
            objective_text.append(stripped)
        elif section == "constraints":
            if ":" in stripped and not stripped.startswith("+"):
                constraint_texts.append(stripped)
            else:
                constraint_texts[-1] += " " + stripped
        elif section == "binary":
            binaries.extend(stripped.split())

    obj_joined = " ".join(objective_text)
    if ":" in obj_joined:
        obj_joined = obj_joined.split(":", 1)[1]
    objective = _parse_expression(obj_joined)

    constraints = []
    for text_c in constraint_texts:
        body = text_c.split(":", 1)[1] if ":" in text_c else text_c
        for sense in ("<=", ">=", "="):
            if sense in body:
                lhs, rhs = body.split(sense, 1)
                constraints.append((_parse_expression(lhs), sense, float(rhs)))
                break
        else:
            raise ValueError(f"constraint without sense: {text_c!r}")
    return objective, constraints, binaries


def solve_lp_external(text):
    """Solve an exported LP file with scipy's HiGHS-backed MILP solver."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    objective, constraints, binaries = parse_lp(text)
    variables = sorted(set(binaries) | set(objective))
    index = {name: i for i, name in enumerate(variables)}
    c = np.zeros(len(variables))
    for name, coef in objective.items():
        c[index[name]] = coef

    rows = []
    lbs = []
    ubs = []
    for coefs, sense, rhs in constraints:
        row = np.zeros(len(variables))
        for name, coef in coefs.items():
            row[index[name]] = coef
        rows.append(row)
        if sense == "=":
            lbs.append(rhs)
            ubs.append(rhs)
        elif sense == "<=":
            lbs.append(-np.inf)
            ubs.append(rhs)
        else:
            lbs.append(rhs)
            ubs.append(np.inf)

    result = milp(
        c,
        constraints=[LinearConstraint(np.array(rows), np.array(lbs), np.array(ubs))],
        integrality=np.ones(len(variables)),
        bounds=Bounds(0, 1),
    )
    if not result.success:
        raise RuntimeError(f"external MILP solve failed: {result.message}")
    return result.fun


def shortest_accepted_by_enumeration(dfa: DfaModel, max_len):
    """First accepted string in length-then-lexicographic order, or None."""
    for s in all_strings(len(dfa.alphabet), max_len):
        if dfa.accepts(s):
            return s
    return None


def language_up_to(dfa: DfaModel, max_len):
    return {s for s in all_strings(len(dfa.alphabet), max_len) if dfa.accepts(s)}


def bfs_reachable(dfa: DfaModel):
    seen = {dfa.initial}
    queue = deque([dfa.initial])
    while queue:
        q = queue.popleft()
        for target in dfa.delta[q]:
            if target not in seen:
                seen.add(target)
                queue.append(target)
    return seen
