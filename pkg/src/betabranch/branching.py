"""Branching trees of a point and the cardinality of its set of expansions.

The classifier works on the *branching graph*: one node per distinct
switch-region point reached (values are compared exactly), with an edge per
digit choice.  Each edge ends in a unique-expansion leaf, another node, or an
unresolved stub.  Counting infinite paths in that graph gives the cardinality
exactly:

* a strongly connected component that is not a simple cycle contains a node
  with two ways back into itself, hence continuum many paths;
* a simple cycle with exits gives countably many paths, unless an exit
  already carries continuum many (or is unresolved);
* an acyclic node adds the counts of its two children.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from betabranch.constants import base
from betabranch.errors import DomainError, MapNotApplicable
from betabranch.exactnum import AlgebraicReal, ExactMemo, Ordering, QFieldElement, compare
from betabranch.expansions import (
    PointSpec,
    _apply,
    endpoints,
    format_word,
    lemma_c_range_check,
    region_of,
    special_form,
    uq_form,
)

DEFAULT_DEPTH = 64
DEFAULT_MAX_NODES = 4096


def default_depth() -> int:
    raw = os.environ.get("BETA_BRANCH_DEPTH")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_DEPTH


def _fmt(v: QFieldElement) -> dict:
    return {"decimal": v.decimal(5), "exact": v.to_rf_text()}


# ---------------------------------------------------------------------------
# forced runs
# ---------------------------------------------------------------------------

@dataclass
class SwitchResult:
    """Outcome of following forced maps: 'switch', 'resolved' or 'limit'."""

    status: str
    word: tuple
    point: Optional[PointSpec] = None
    form: Optional[str] = None

    def __str__(self):
        if self.status == "switch":
            return f"switch after {format_word(self.word)} at {self.point.value.decimal(5)}"
        if self.status == "resolved":
            return f"resolved after {format_word(self.word)} ({self.form})"
        return f"limit exceeded after {len(self.word)} steps"


def minimal_to_switch(x: PointSpec, q: AlgebraicReal, step_limit: int = DEFAULT_DEPTH, use_uq: bool = True) -> SwitchResult:
    """Follow forced maps from x until the switch region or a unique tail.

    With use_uq the unique-expansion closed forms stop the run early; without
    it only the two fixed points 0 and 1/(q-1) do.
    """
    ends = endpoints(q)
    v = x.value
    word: list[int] = []
    for step in range(step_limit + 1):
        if ends["inv_q"] <= v <= ends["s_hi"]:
            return SwitchResult("switch", tuple(word), PointSpec(v, _prov(x, word)))
        if use_uq:
            form = uq_form(PointSpec(v), q)
        else:
            form = "0" if v.is_zero() else ("1/(q-1)" if v == ends["top"] else None)
        if form is not None:
            return SwitchResult("resolved", tuple(word), PointSpec(v, _prov(x, word)), form)
        if step == step_limit:
            break
        d = 0 if v < ends["inv_q"] else 1
        v = _apply(v, d, q)
        word.append(d)
    return SwitchResult("limit", tuple(word))


def _prov(x: PointSpec, word) -> str:
    return str(x) if not word else f"{format_word(word)}({x})"


def is_unique(x: PointSpec, q: AlgebraicReal, step_limit: int = DEFAULT_DEPTH) -> Optional[bool]:
    """True/False when decided within step_limit forced steps, else None."""
    r = minimal_to_switch(x, q, step_limit)
    if r.status == "limit":
        return None
    return r.status == "resolved"


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass
class CardinalityVerdict:
    """cls is one of Unique, Finite, CountablyInfinite, Continuum, DepthExceeded."""

    cls: str
    count: Optional[int] = None
    depth: Optional[int] = None
    certificate: dict = field(default_factory=dict)
    cycle: Optional[tuple] = None  # (w, b) for CountablyInfinite

    def __str__(self):
        if self.cls == "Finite":
            return f"Finite({self.count})"
        if self.cls == "DepthExceeded":
            return f"DepthExceeded({self.depth})"
        return self.cls

    def to_json(self) -> dict:
        return {"class": self.cls, "count": self.count, "depth": self.depth, "certificate": self.certificate}


# ---------------------------------------------------------------------------
# branching graph
# ---------------------------------------------------------------------------

@dataclass
class _Edge:
    kind: str  # leaf, node, limit, open
    word: tuple  # digits applied from the parent, branch digit first
    target: Optional[int] = None
    form: Optional[str] = None


@dataclass
class _Node:
    id: int
    value: QFieldElement
    provenance: str
    level: int
    parent: Optional[tuple[int, int]] = None  # (parent id, digit)
    edges: dict = field(default_factory=dict)


class BranchGraph:
    """Exploration of the distinct branching points reachable from a start point."""

    def __init__(self, q: AlgebraicReal, depth_limit: int, max_nodes: int = DEFAULT_MAX_NODES):
        self.q = q
        self.depth_limit = depth_limit
        self.max_nodes = max_nodes
        self.nodes: list[_Node] = []
        self.memo = ExactMemo(q.field)
        self.truncated = False

    def _add(self, p: PointSpec, level: int, parent) -> tuple[int, bool]:
        i = self.memo.get(p.value)
        if i is not None:
            return i, False
        i = len(self.nodes)
        self.nodes.append(_Node(i, p.value, p.provenance, level, parent))
        self.memo[p.value] = i
        return i, True

    def explore(self, start: PointSpec) -> int:
        root, _ = self._add(start, 0, None)
        queue = [root]
        head = 0
        while head < len(queue):
            n = self.nodes[queue[head]]
            head += 1
            if n.level >= self.depth_limit or len(self.nodes) >= self.max_nodes:
                self.truncated = True
                for d in (0, 1):
                    n.edges[d] = _Edge("open", (d,))
                continue
            for d in (0, 1):
                child = PointSpec(_apply(n.value, d, self.q), f"T{d}({n.provenance})")
                r = minimal_to_switch(child, self.q, self.depth_limit)
                word = (d,) + r.word
                if r.status == "resolved":
                    n.edges[d] = _Edge("leaf", word, form=r.form)
                elif r.status == "limit":
                    n.edges[d] = _Edge("limit", word)
                else:
                    j, new = self._add(r.point, n.level + 1, (n.id, d))
                    n.edges[d] = _Edge("node", word, target=j)
                    if new:
                        queue.append(j)
        return root

    # strongly connected components (iterative Tarjan) ---------------------
    def sccs(self) -> list[list[int]]:
        index: dict[int, int] = {}
        low: dict[int, int] = {}
        on_stack: set[int] = set()
        stack: list[int] = []
        out: list[list[int]] = []
        counter = 0
        for s in range(len(self.nodes)):
            if s in index:
                continue
            work = [(s, iter(self._succ(s)))]
            index[s] = low[s] = counter
            counter += 1
            stack.append(s)
            on_stack.add(s)
            while work:
                v, it = work[-1]
                advanced = False
                for w in it:
                    if w not in index:
                        index[w] = low[w] = counter
                        counter += 1
                        stack.append(w)
                        on_stack.add(w)
                        work.append((w, iter(self._succ(w))))
                        advanced = True
                        break
                    if w in on_stack:
                        low[v] = min(low[v], index[w])
                if advanced:
                    continue
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
        return out  # reverse topological order

    def _succ(self, i: int) -> list[int]:
        return [e.target for e in self.nodes[i].edges.values() if e.kind == "node"]

    def evaluate(self) -> tuple[dict, dict]:
        """Per-node value ('finite', n) / ('aleph0',) / ('continuum', witness) / ('unknown',)."""
        value: dict[int, tuple] = {}
        comp_of: dict[int, int] = {}
        comps = self.sccs()
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        for ci, comp in enumerate(comps):
            members = set(comp)
            cyclic = len(comp) > 1 or any(
                e.kind == "node" and e.target == comp[0] for e in self.nodes[comp[0]].edges.values()
            )
            if not cyclic:
                v = comp[0]
                value[v] = _combine([self._edge_value(e, value) for e in self.nodes[v].edges.values()])
                continue
            witness = None
            exits = []
            for v in comp:
                internal = [e for e in self.nodes[v].edges.values() if e.kind == "node" and e.target in members]
                if len(internal) >= 2:
                    witness = v
                    break
                exits.extend(
                    self._edge_value(e, value)
                    for e in self.nodes[v].edges.values()
                    if not (e.kind == "node" and e.target in members)
                )
            if witness is not None:
                val = ("continuum", witness)
            else:
                cont = [x for x in exits if x[0] == "continuum"]
                if cont:
                    val = cont[0]
                elif any(x[0] == "unknown" for x in exits):
                    val = ("unknown",)
                else:
                    val = ("aleph0", ci)
            for v in comp:
                value[v] = val
        return value, {"components": comps, "comp_of": comp_of}

    @staticmethod
    def _edge_value(e: _Edge, value: dict) -> tuple:
        if e.kind == "leaf":
            return ("finite", 1)
        if e.kind == "node":
            return value[e.target]
        return ("unknown",)

    # certificates ------------------------------------------------------------
    def path_to(self, i: int) -> tuple:
        """Digit word from the root node to node i along BFS parents."""
        word: list[int] = []
        while self.nodes[i].parent is not None:
            p, d = self.nodes[i].parent
            word[:0] = self.nodes[p].edges[d].word
            i = p
        return tuple(word)

    def cycle_from(self, comp: list[int]) -> tuple[int, tuple, list[int]]:
        """Start node, full map word and node sequence of a simple-cycle component."""
        members = set(comp)
        ends = endpoints(self.q)
        start = comp[0]
        for v in sorted(comp):
            val = self.nodes[v].value
            if ends["j_lo"] <= val <= ends["j_hi"]:
                start = v
                break
        word: list[int] = []
        seq = [start]
        v = start
        while True:
            e = next(e for e in self.nodes[v].edges.values() if e.kind == "node" and e.target in members)
            word.extend(e.word)
            v = e.target
            if v == start:
                break
            seq.append(v)
        return start, tuple(word), seq


def _combine(vals: list[tuple]) -> tuple:
    cont = [v for v in vals if v[0] == "continuum"]
    if cont:
        return cont[0]
    if any(v[0] == "unknown" for v in vals):
        return ("unknown",)
    aleph = [v for v in vals if v[0] == "aleph0"]
    if aleph:
        return aleph[0]
    return ("finite", sum(v[1] for v in vals))


def _check_range(q: AlgebraicReal) -> None:
    lemma_c_range_check(q)


def classify_sigma(
    x: PointSpec,
    q: AlgebraicReal,
    depth_limit: Optional[int] = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> CardinalityVerdict:
    """Cardinality of the set of q-expansions of x, with a certificate."""
    _check_range(q)
    depth = default_depth() if depth_limit is None else depth_limit
    region_of(x, q)  # raises outside I_q
    first = minimal_to_switch(x, q, depth)
    if first.status == "resolved":
        return CardinalityVerdict("Unique", 1, certificate={"forced_word": _digits(first.word), "tail": first.form})
    if first.status == "limit":
        return CardinalityVerdict("DepthExceeded", depth=depth, certificate={"reason": "no switch or unique tail within limit"})
    g = BranchGraph(q, depth, max_nodes)
    root = g.explore(first.point)
    value, info = g.evaluate()
    v = value[root]
    prefix = first.word
    if v[0] == "finite":
        return CardinalityVerdict("Finite", v[1], certificate=_tree_summary(g, prefix))
    if v[0] == "unknown":
        return CardinalityVerdict(
            "DepthExceeded",
            depth=depth,
            certificate={"nodes_explored": len(g.nodes), "truncated": g.truncated},
        )
    if v[0] == "continuum":
        w = v[1]
        node = g.nodes[w]
        return CardinalityVerdict(
            "Continuum",
            certificate={
                "branching_point": _fmt(node.value),
                "provenance": node.provenance,
                "reach_word": _digits(prefix + g.path_to(w)),
                "children": {
                    str(d): {"word": _digits(e.word), "target": _fmt(g.nodes[e.target].value)}
                    for d, e in node.edges.items()
                },
                "reason": "both children lead back into the same strongly connected part of the branching graph",
            },
        )
    comp = info["components"][v[1]]
    start, b, seq = g.cycle_from(comp)
    node = g.nodes[start]
    return CardinalityVerdict(
        "CountablyInfinite",
        certificate={
            "w": _fmt(node.value),
            "w_form": special_form(node.value, q),
            "reach_word": _digits(prefix + g.path_to(start)),
            "b": _digits(b),
            "b_maps": format_word(b),
            "switch_hits": [
                {"value": _fmt(g.nodes[i].value), "form": special_form(g.nodes[i].value, q)} for i in seq
            ],
            "finite_side": {
                str(i): [d for d, e in g.nodes[i].edges.items() if e.kind == "leaf"] for i in seq
            },
        },
        cycle=(PointSpec(node.value, node.provenance), b),
    )


def _digits(word) -> str:
    return "".join(str(d) for d in word)


def _tree_summary(g: BranchGraph, prefix) -> dict:
    return {
        "forced_prefix": _digits(prefix),
        "nodes": [
            {
                "value": _fmt(n.value),
                "edges": {str(d): {"kind": e.kind, "word": _digits(e.word), "target": e.target} for d, e in n.edges.items()},
            }
            for n in g.nodes
        ],
    }


# ---------------------------------------------------------------------------
# null infinite points
# ---------------------------------------------------------------------------

@dataclass
class NullInfiniteResult:
    answer: str  # Yes, No, DepthExceeded
    certificate: dict = field(default_factory=dict)
    cycle: Optional[tuple] = None  # (w, b) when Yes

    def __bool__(self):
        return self.answer == "Yes"

    def __str__(self):
        return self.answer


def is_null_infinite(x: PointSpec, q: AlgebraicReal, depth_limit: Optional[int] = None) -> NullInfiniteResult:
    """Decide whether x is a q null infinite point.

    At each branching point exactly one child may have infinitely many
    expansions; the walk follows it.  Revisiting a branching point closes a
    cycle and answers Yes.  Two unique children (finitely many expansions) or
    two non-unique children answer No; for golden < q < q_f with q != qcheck
    a non-unique point has infinitely many expansions, so the latter is a
    genuine two-infinite-branches witness.
    """
    _check_range(q)
    if compare(q, base("qcheck")) == Ordering.EQUAL:
        raise DomainError("q = qcheck is excluded: a point may have exactly two expansions there")
    depth = default_depth() if depth_limit is None else depth_limit
    first = minimal_to_switch(x, q, depth)
    if first.status == "resolved":
        return NullInfiniteResult("No", {"reason": "unique expansion", "tail": first.form})
    if first.status == "limit":
        return NullInfiniteResult("DepthExceeded", {"depth": depth})
    memo = ExactMemo(q.field)
    path: list[tuple[PointSpec, tuple]] = []  # (node, word to next node)
    cur = first.point
    reach = first.word
    for _ in range(depth):
        i = memo.get(cur.value)
        if i is not None:
            cyc = path[i:]
            # rotate so the cycle starts at a point of J when possible
            ends = endpoints(q)
            r = next((k for k, (p, _) in enumerate(cyc) if ends["j_lo"] <= p.value <= ends["j_hi"]), 0)
            cyc = cyc[r:] + cyc[:r]
            b: list[int] = []
            for _, w in cyc:
                b.extend(w)
            w0 = cyc[0][0]
            lead = reach
            for _, w in path[: i + r]:
                lead = lead + w
            return NullInfiniteResult(
                "Yes",
                {
                    "w": _fmt(w0.value),
                    "w_form": special_form(w0.value, q),
                    "reach_word": _digits(lead),
                    "b": _digits(b),
                    "b_maps": format_word(b),
                    "switch_hits": [{"value": _fmt(p.value), "form": special_form(p.value, q)} for p, _ in cyc],
                },
                cycle=(w0, tuple(b)),
            )
        memo[cur.value] = len(path)
        res = {}
        for d in (0, 1):
            child = PointSpec(_apply(cur.value, d, q), f"T{d}({cur.provenance})")
            res[d] = minimal_to_switch(child, q, depth)
        unique = {d for d in (0, 1) if res[d].status == "resolved"}
        if any(res[d].status == "limit" for d in (0, 1)):
            return NullInfiniteResult("DepthExceeded", {"depth": depth, "at": _fmt(cur.value)})
        if len(unique) == 2:
            return NullInfiniteResult(
                "No", {"reason": "both branches unique: finitely many expansions", "branching_point": _fmt(cur.value)}
            )
        if not unique:
            return NullInfiniteResult(
                "No",
                {
                    "reason": "both branches infinite",
                    "branching_point": _fmt(cur.value),
                    "branching_form": special_form(cur.value, q),
                    "reach_word": _digits(reach + tuple(d for _, w in path for d in w)),
                },
            )
        d = 1 - unique.pop()
        path.append((cur, (d,) + res[d].word))
        cur = res[d].point
    return NullInfiniteResult("DepthExceeded", {"depth": depth})


# ---------------------------------------------------------------------------
# cycle certificates
# ---------------------------------------------------------------------------

@dataclass
class CertificateCheck:
    ok: bool
    reason: str
    hits: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def cycle_certificate_check(w: PointSpec, b, q: AlgebraicReal) -> CertificateCheck:
    """Re-verify a cycle certificate (w, b) from scratch.

    Requires b(w) = w, w one of y_j, z_j, 1/q, 1/(q^2-q) lying in J_q, and
    every switch-region point met along b to be of one of those closed forms.
    A word that leaves a map's domain is rejected with a reason.
    """
    b = tuple(int(d) for d in b)
    if not b:
        return CertificateCheck(False, "empty map word")
    ends = endpoints(q)
    v = w.value
    if not (ends["inv_q"] <= v <= ends["s_hi"]):
        return CertificateCheck(False, "w is not in the switch region S_q")
    form = special_form(v, q)
    if form is None:
        return CertificateCheck(False, "w is not a preimage of a unique-expansion point")
    if not (ends["j_lo"] <= v <= ends["j_hi"]):
        return CertificateCheck(False, f"w = {form} is not in J_q")
    hits = []
    cur = v
    for i, d in enumerate(b, 1):
        try:
            cur = _apply(cur, d, q)
        except MapNotApplicable as exc:
            return CertificateCheck(False, f"step {i}: {exc}", hits)
        if ends["inv_q"] <= cur <= ends["s_hi"]:
            f = special_form(cur, q)
            if f is None:
                return CertificateCheck(False, f"prefix of length {i} lands in S_q outside the allowed closed forms", hits)
            hits.append((i, f))
    if cur != v:
        return CertificateCheck(False, "b(w) != w", hits)
    return CertificateCheck(True, f"b(w) = w with w = {form}; switch hits {hits}", hits)


# ---------------------------------------------------------------------------
# brute-force prefix oracle
# ---------------------------------------------------------------------------

def _remainder_layers(x: PointSpec, q: AlgebraicReal, n: int, keep_words: bool):
    """Remainder q^k x - sum d_i q^(k-i) for every feasible prefix, layer by layer."""
    F = q.field
    g = F.gen
    top = 1 / (g - 1)
    layer = ExactMemo(F)
    layer[x.value] = [""] if keep_words else 1
    yield 0, layer
    for k in range(1, n + 1):
        nxt = ExactMemo(F)
        for r, payload in layer.items():
            for d in (0, 1):
                s = r * g - d
                if s.sign() < 0 or s > top:
                    continue
                add = [w + str(d) for w in payload] if keep_words else payload
                old = nxt.get(s)
                if old is None:
                    nxt[s] = add
                else:
                    nxt[s] = old + add
        layer = nxt
        yield k, layer


def prefix_count_oracle(x: PointSpec, q: AlgebraicReal, n: int) -> int:
    """Number of length-n digit prefixes that extend to a q-expansion of x."""
    for k, layer in _remainder_layers(x, q, n, False):
        if k == n:
            return sum(c for _, c in layer.items())
    return 0


def prefix_counts(x: PointSpec, q: AlgebraicReal, n: int) -> list[int]:
    """Counts for every length 0..n in one pass."""
    return [sum(c for _, c in layer.items()) for _, layer in _remainder_layers(x, q, n, False)]


def feasible_prefixes(x: PointSpec, q: AlgebraicReal, n: int) -> set[str]:
    for k, layer in _remainder_layers(x, q, n, True):
        if k == n:
            return {w for _, ws in layer.items() for w in ws}
    return set()


# ---------------------------------------------------------------------------
# explicit trees
# ---------------------------------------------------------------------------

@dataclass
class BranchNode:
    point: PointSpec
    path: str
    kind: str  # Forced or Branching
    region: str
    children: dict = field(default_factory=dict)  # digit -> BranchNode


def build_tree(x: PointSpec, q: AlgebraicReal, depth: int) -> BranchNode:
    """The digit tree of x to the given depth (one level per digit)."""
    ends = endpoints(q)

    def grow(v: QFieldElement, prov: str, path: str, level: int) -> BranchNode:
        reg = region_of(PointSpec(v), q)
        kind = "Branching" if reg.in_switch else "Forced"
        node = BranchNode(PointSpec(v, prov), path, kind, reg.tag)
        if level == depth:
            return node
        if kind == "Branching":
            digits = (0, 1)
        else:
            digits = (0,) if v < ends["inv_q"] else (1,)
        for d in digits:
            node.children[d] = grow(_apply(v, d, q), f"T{d}({prov})" if level < 3 else "", path + str(d), level + 1)
        return node

    return grow(x.value, str(x), "", 0)


def tree_paths(node: BranchNode) -> set[str]:
    if not node.children:
        return {node.path}
    out: set[str] = set()
    for c in node.children.values():
        out |= tree_paths(c)
    return out


def tree_to_json(node: BranchNode) -> dict:
    return {
        "path": node.path,
        "value_decimal": node.point.value.decimal(5),
        "value_exact": node.point.value.to_rf_text(),
        "region": node.region,
        "kind": node.kind,
        "children": [dict(tree_to_json(c), digit=d) for d, c in sorted(node.children.items())],
    }


def tree_to_ascii(node: BranchNode, indent: str = "") -> str:
    label = node.path[-1] if node.path else "x"
    lines = [f"{indent}{label} {node.point.value.decimal(5)} [{node.region}] {node.kind}"]
    for _, c in sorted(node.children.items()):
        lines.append(tree_to_ascii(c, indent + "  "))
    return "\n".join(lines)
