"""Prefix tree of training traces with misclassification cost counters.

Every prefix of every training trace gets exactly one node.  A node
accumulates the weight of each positive/negative trace whose prefix
reaches it -- including the root, which every trace reaches before its
first symbol.  With length-normalized weighting a trace contributes
1/len(trace) per node on its path so long traces are not
overrepresented; raw counts are kept alongside either way.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DataError
from .traces import Alphabet


@dataclass
class PtNode:
    id: int
    parent: int | None
    incoming_symbol: int | None
    children: dict = field(default_factory=dict)  # symbol id -> node id
    w_pos: float = 0.0
    w_neg: float = 0.0
    raw_pos: int = 0
    raw_neg: int = 0


@dataclass
class PrefixTree:
    nodes: list  # PtNode arena indexed by id, BFS order
    root: int
    alphabet: Alphabet

    def __len__(self):
        return len(self.nodes)

    def node(self, node_id: int) -> PtNode:
        return self.nodes[node_id]

    def total_positive_weight(self) -> float:
        return self.nodes[self.root].w_pos

    def total_negative_weight(self) -> float:
        return self.nodes[self.root].w_neg


def build_prefix_tree(binarized, alphabet: Alphabet, weighting: str = "length_normalized") -> PrefixTree:
    """Build the annotated prefix tree for a binarized training set.

    ``binarized`` is a list of (trace, is_positive) pairs.  Node ids are
    assigned in breadth-first order (children visited in symbol-id
    order), which is the canonical order used for solver symmetry
    breaking and tie-breaking downstream.
    """
    if weighting not in ("length_normalized", "raw"):
        raise DataError(f"unknown weighting: {weighting!r}")
    if not binarized:
        raise DataError("cannot build a prefix tree from an empty trace list")

    nodes = [PtNode(id=0, parent=None, incoming_symbol=None)]
    for trace, positive in binarized:
        if not trace:
            raise DataError("empty trace in training data")
        weight = 1.0 / len(trace) if weighting == "length_normalized" else 1.0
        current = nodes[0]
        _add_cost(current, positive, weight)
        for symbol in trace:
            child_id = current.children.get(symbol)
            if child_id is None:
                child_id = len(nodes)
                nodes.append(PtNode(id=child_id, parent=current.id, incoming_symbol=symbol))
                current.children[symbol] = child_id
            current = nodes[child_id]
            _add_cost(current, positive, weight)

    return PrefixTree(_renumber_bfs(nodes), root=0, alphabet=alphabet)


def _add_cost(node: PtNode, positive: bool, weight: float):
    if positive:
        node.w_pos += weight
        node.raw_pos += 1
    else:
        node.w_neg += weight
        node.raw_neg += 1


def _renumber_bfs(nodes):
    order = []
    queue = [0]
    while queue:
        nid = queue.pop(0)
        order.append(nid)
        node = nodes[nid]
        queue.extend(node.children[s] for s in sorted(node.children))
    remap = {old: new for new, old in enumerate(order)}
    renumbered = []
    for old in order:
        node = nodes[old]
        renumbered.append(PtNode(
            id=remap[old],
            parent=None if node.parent is None else remap[node.parent],
            incoming_symbol=node.incoming_symbol,
            children={s: remap[c] for s, c in sorted(node.children.items())},
            w_pos=node.w_pos,
            w_neg=node.w_neg,
            raw_pos=node.raw_pos,
            raw_neg=node.raw_neg,
        ))
    return renumbered


def cost_accept(node: PtNode, lam_neg: float) -> float:
    """Cost of classifying this node as positive: its negative weight."""
    if lam_neg < 0:
        raise DataError("lam_neg must be nonnegative")
    return lam_neg * node.w_neg


def cost_reject(node: PtNode, lam_pos: float) -> float:
    """Cost of classifying this node as negative: its positive weight."""
    if lam_pos < 0:
        raise DataError("lam_pos must be nonnegative")
    return lam_pos * node.w_pos


def balanced_lambda_pos(tree: PrefixTree) -> float:
    """Positive-misclassification weight equalizing total class weights."""
    total_pos = tree.total_positive_weight()
    total_neg = tree.total_negative_weight()
    if total_pos == 0:
        raise DataError("no positive traces; balanced weighting undefined")
    return total_neg / total_pos


def tree_to_dot(tree: PrefixTree) -> str:
    """Debug dump: nodes labeled `id [w+|w-]`, edges labeled with symbols."""
    lines = ["digraph prefix_tree {"]
    for node in tree.nodes:
        lines.append(f'  n{node.id} [label="{node.id} [{node.w_pos:g}|{node.w_neg:g}]"];')
    for node in tree.nodes:
        for symbol, child in node.children.items():
            name = tree.alphabet.symbols[symbol]
            lines.append(f'  n{node.id} -> n{child} [label="{name}"];')
    lines.append("}")
    return "\n".join(lines)
