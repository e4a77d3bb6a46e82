"""Exact online-learning dimensions of finite verifier classes.

Four memoized minimax games over bitmask version spaces:

- ldim: classic mistake-tree depth.
- sc_ldim: depth with a budget k of "straight" (reject-side) edges; a
  straight branch burns budget, a curvy (accept-side) branch keeps it.
- wsc_ldim: weighted variant, straight edges cost gamma_s and curvy
  edges gamma_c; value is the guaranteed cumulative weight.
- scl_ldim: sequence-level game over full traces where the adversary
  commits either to two distinct fault locations (two l-edges) or to one
  fault location plus the all-correct answer (s-edge + c-edge).

All values are exact: integers for ldim/sc_ldim, rationals for the
weighted games.  Rational costs are scaled to integers before hitting
the kernels and scaled back on the way out.  A witness mistake tree can
be extracted for any positive value and independently re-verified.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import kernels
from .core import (
    ALL_CORRECT,
    CostVector,
    CotInstance,
    Label,
    MalformedTree,
    NoWitness,
    PrefixInstance,
    PrefixLabel,
    VerifierClass,
    VersionSpace,
    cot_instances,
    is_fault,
)

KINDS = ("plain", "SC", "WSC", "SCL")


@dataclass(frozen=True)
class TreeEdge:
    """One labeled edge of a mistake tree; child None means leaf."""

    label: object  # PrefixLabel for prefix-level kinds, Label for SCL
    kind: str  # "s", "c", or "l"
    weight: Fraction
    child: Optional["TreeNode"]


@dataclass(frozen=True)
class TreeNode:
    instance: object  # PrefixInstance or CotInstance
    edges: tuple[TreeEdge, ...]


@dataclass(frozen=True)
class MistakeTree:
    kind: str  # one of KINDS
    root: Optional[TreeNode]
    budget: Optional[int] = None  # straight-edge budget, SC kind only


@dataclass(frozen=True)
class DimResult:
    value: Union[int, Fraction]
    witness: Optional[MistakeTree]
    stats: dict


# Per-class engine cache so repeated queries (and online learners that
# consult dimension values every round) share one memo table.
_engine_caches: "weakref.WeakKeyDictionary[VerifierClass, dict]" = (
    weakref.WeakKeyDictionary()
)


def _cache(vclass: VerifierClass) -> dict:
    d = _engine_caches.get(vclass)
    if d is None:
        d = {}
        _engine_caches[vclass] = d
    return d


def _ldim_engine(vclass: VerifierClass):
    cache = _cache(vclass)
    eng = cache.get("ldim")
    if eng is None:
        eng = kernels.ldim_engine(vclass.yes_masks, len(vclass))
        cache["ldim"] = eng
    return eng


def _sc_engine(vclass: VerifierClass):
    cache = _cache(vclass)
    eng = cache.get("sc")
    if eng is None:
        eng = kernels.sc_engine(vclass.yes_masks, len(vclass))
        cache["sc"] = eng
    return eng


def _scale_two(a: Fraction, b: Fraction) -> tuple[int, int, int]:
    scale = math.lcm(a.denominator, b.denominator)
    return int(a * scale), int(b * scale), scale


def _scale_three(a: Fraction, b: Fraction, c: Fraction) -> tuple[int, int, int, int]:
    scale = math.lcm(a.denominator, b.denominator, c.denominator)
    return int(a * scale), int(b * scale), int(c * scale), scale


def _wsc_engine(vclass: VerifierClass, ws: int, wc: int):
    cache = _cache(vclass)
    key = ("wsc", ws, wc)
    eng = cache.get(key)
    if eng is None:
        eng = kernels.wsc_engine(vclass.yes_masks, len(vclass), ws, wc)
        cache[key] = eng
    return eng


def _label_code(label: Label) -> int:
    return kernels.INF_LABEL if label == ALL_CORRECT else int(label)


def _code_label(code: int) -> Label:
    return ALL_CORRECT if code == kernels.INF_LABEL else float(code)


def _scl_label_masks(vclass: VerifierClass) -> list[list[tuple[int, int]]]:
    """Per full trace, the partition of verifier ids by derived label."""
    out = []
    for z in cot_instances(vclass):
        groups: dict[int, int] = {}
        for i in range(len(vclass)):
            code = _label_code(vclass.cot_label_of(i, z))
            groups[code] = groups.get(code, 0) | (1 << i)
        out.append(sorted(groups.items()))
    return out


def _scl_engine(vclass: VerifierClass, ws: int, wc: int, wl: int):
    cache = _cache(vclass)
    key = ("scl", ws, wc, wl)
    eng = cache.get(key)
    if eng is None:
        eng = kernels.scl_engine(
            _scl_label_masks(vclass), len(vclass), ws, wc, wl
        )
        cache[key] = eng
    return eng


def _stats(engine) -> dict:
    nodes, hits = engine.stats()
    return {
        "nodes_expanded": nodes,
        "memo_hits": hits,
        "backend": type(engine).__module__.rsplit(".", 1)[-1].lstrip("_"),
    }


# Raw value helpers, shared by learners that query dimensions per round.

def ldim_value(vs: VersionSpace) -> int:
    return _ldim_engine(vs.vclass).value(vs.alive)


def sc_value(vs: VersionSpace, k: int) -> int:
    if k < 0:
        raise ValueError("budget k must be >= 0")
    return _sc_engine(vs.vclass).value(vs.alive, k)


def wsc_value(vs: VersionSpace, costs: CostVector) -> Fraction:
    ws, wc, scale = _scale_two(costs.gamma_s, costs.gamma_c)
    raw = _wsc_engine(vs.vclass, ws, wc).value(vs.alive)
    return Fraction(raw, scale)


def scl_value(vs: VersionSpace, costs: CostVector) -> Fraction:
    costs.require_ordered()
    ws, wc, wl, scale = _scale_three(
        costs.gamma_s, costs.gamma_c, costs.gamma_l
    )
    raw = _scl_engine(vs.vclass, ws, wc, wl).value(vs.alive)
    return Fraction(raw, scale)


def ldim(vs: VersionSpace, witness: bool = True) -> DimResult:
    value = ldim_value(vs)
    tree = _extract_plain(vs) if witness and value > 0 else None
    return DimResult(value, tree, _stats(_ldim_engine(vs.vclass)))


def sc_ldim(vs: VersionSpace, k: int, witness: bool = True) -> DimResult:
    value = sc_value(vs, k)
    tree = _extract_sc(vs, k) if witness and value > 0 else None
    return DimResult(value, tree, _stats(_sc_engine(vs.vclass)))


def wsc_ldim(vs: VersionSpace, costs: CostVector, witness: bool = True) -> DimResult:
    value = wsc_value(vs, costs)
    tree = _extract_wsc(vs, costs) if witness and value > 0 else None
    ws, wc, _ = _scale_two(costs.gamma_s, costs.gamma_c)
    return DimResult(value, tree, _stats(_wsc_engine(vs.vclass, ws, wc)))


def scl_ldim(vs: VersionSpace, costs: CostVector, witness: bool = True) -> DimResult:
    value = scl_value(vs, costs)
    tree = _extract_scl(vs, costs) if witness and value > 0 else None
    ws, wc, wl, _ = _scale_three(costs.gamma_s, costs.gamma_c, costs.gamma_l)
    return DimResult(value, tree, _stats(_scl_engine(vs.vclass, ws, wc, wl)))


# Witness extraction walks the memoized game again, always following
# branches whose exact values realize the parent's value, so the minimal
# path of the returned tree meets the dimension with equality.

def _splits(vclass: VerifierClass, alive: int):
    for z in vclass.universe:
        y = vclass.yes_masks[vclass.index_of(z)] & alive
        if y == 0 or y == alive:
            continue
        yield z, y, alive & ~vclass.yes_masks[vclass.index_of(z)]


def _extract_plain(vs: VersionSpace) -> MistakeTree:
    eng = _ldim_engine(vs.vclass)
    one = Fraction(1)

    def build(alive: int) -> Optional[TreeNode]:
        v = eng.value(alive)
        if v == 0:
            return None
        for z, y, n in _splits(vs.vclass, alive):
            if 1 + min(eng.value(y), eng.value(n)) == v:
                return TreeNode(z, (
                    TreeEdge(True, "c", one, build(y)),
                    TreeEdge(False, "s", one, build(n)),
                ))
        raise AssertionError("memoized value has no realizing split")

    if eng.value(vs.alive) == 0:
        raise NoWitness("dimension is 0")
    return MistakeTree("plain", build(vs.alive))


def _extract_sc(vs: VersionSpace, k: int) -> MistakeTree:
    eng = _sc_engine(vs.vclass)
    one = Fraction(1)

    def build(alive: int, k: int) -> Optional[TreeNode]:
        v = eng.value(alive, k)
        if v == 0:
            return None
        for z, y, n in _splits(vs.vclass, alive):
            curvy = 1 + eng.value(y, k)
            if k > 0:
                cand = min(curvy, 1 + eng.value(n, k - 1))
            else:
                cand = curvy
            if cand != v:
                continue
            # At budget 0 the straight subtree is unconstrained, so a
            # bare leaf keeps the tree shattered without adding depth.
            straight_child = build(n, k - 1) if k > 0 else None
            return TreeNode(z, (
                TreeEdge(True, "c", one, build(y, k)),
                TreeEdge(False, "s", one, straight_child),
            ))
        raise AssertionError("memoized value has no realizing split")

    if eng.value(vs.alive, k) == 0:
        raise NoWitness("dimension is 0")
    return MistakeTree("SC", build(vs.alive, k), budget=k)


def _extract_wsc(vs: VersionSpace, costs: CostVector) -> MistakeTree:
    ws, wc, scale = _scale_two(costs.gamma_s, costs.gamma_c)
    eng = _wsc_engine(vs.vclass, ws, wc)

    def build(alive: int) -> Optional[TreeNode]:
        v = eng.value(alive)
        if v == 0:
            return None
        for z, y, n in _splits(vs.vclass, alive):
            if min(ws + eng.value(n), wc + eng.value(y)) == v:
                return TreeNode(z, (
                    TreeEdge(True, "c", costs.gamma_c, build(y)),
                    TreeEdge(False, "s", costs.gamma_s, build(n)),
                ))
        raise AssertionError("memoized value has no realizing split")

    if eng.value(vs.alive) == 0:
        raise NoWitness("dimension is 0")
    return MistakeTree("WSC", build(vs.alive))


def _extract_scl(vs: VersionSpace, costs: CostVector) -> MistakeTree:
    costs.require_ordered()
    ws, wc, wl, scale = _scale_three(
        costs.gamma_s, costs.gamma_c, costs.gamma_l
    )
    eng = _scl_engine(vs.vclass, ws, wc, wl)
    traces = cot_instances(vs.vclass)

    def groups_for(z: CotInstance, alive: int) -> dict[int, int]:
        groups: dict[int, int] = {}
        for i in range(len(vs.vclass)):
            if not alive >> i & 1:
                continue
            code = _label_code(vs.vclass.cot_label_of(i, z))
            groups[code] = groups.get(code, 0) | (1 << i)
        return groups

    def build(alive: int) -> Optional[TreeNode]:
        v = eng.value(alive)
        if v == 0:
            return None
        for z in traces:
            groups = groups_for(z, alive)
            if len(groups) < 2:
                continue
            inf_mask = groups.get(kernels.INF_LABEL, 0)
            fault_codes = sorted(c for c in groups if c != kernels.INF_LABEL)
            if inf_mask:
                for code in fault_codes:
                    sub = groups[code]
                    if min(ws + eng.value(sub), wc + eng.value(inf_mask)) == v:
                        return TreeNode(z, (
                            TreeEdge(_code_label(code), "s",
                                     costs.gamma_s, build(sub)),
                            TreeEdge(ALL_CORRECT, "c",
                                     costs.gamma_c, build(inf_mask)),
                        ))
            for a_i, ca in enumerate(fault_codes):
                for cb in fault_codes[a_i + 1:]:
                    va = eng.value(groups[ca])
                    vb = eng.value(groups[cb])
                    if wl + min(va, vb) == v:
                        return TreeNode(z, (
                            TreeEdge(_code_label(ca), "l",
                                     costs.gamma_l, build(groups[ca])),
                            TreeEdge(_code_label(cb), "l",
                                     costs.gamma_l, build(groups[cb])),
                        ))
        raise AssertionError("memoized value has no realizing branch")

    if eng.value(vs.alive) == 0:
        raise NoWitness("dimension is 0")
    return MistakeTree("SCL", build(vs.alive))


def extract_witness(
    vs: VersionSpace,
    kind: str,
    k: Optional[int] = None,
    costs: Optional[CostVector] = None,
) -> MistakeTree:
    """Mistake tree certifying the dimension of the given kind.

    Raises NoWitness when the dimension is 0.
    """
    if kind == "plain":
        return _extract_plain(vs)
    if kind == "SC":
        if k is None:
            raise ValueError("SC witness needs a budget k")
        return _extract_sc(vs, k)
    if kind == "WSC":
        if costs is None:
            raise ValueError("WSC witness needs a cost vector")
        return _extract_wsc(vs, costs)
    if kind == "SCL":
        if costs is None:
            raise ValueError("SCL witness needs a cost vector")
        return _extract_scl(vs, costs)
    raise ValueError(f"unknown tree kind: {kind}")


def _check_node(node: TreeNode, kind: str) -> None:
    if len(node.edges) != 2:
        raise MalformedTree(f"node must have exactly 2 edges, got {len(node.edges)}")
    for e in node.edges:
        if e.weight < 0:
            raise MalformedTree("negative edge weight")
    if kind == "SCL":
        if not isinstance(node.instance, CotInstance):
            raise MalformedTree("SCL node must carry a full trace")
        a, b = node.edges
        kinds = {a.kind, b.kind}
        if kinds == {"l"}:
            if not (is_fault(a.label) and is_fault(b.label)):
                raise MalformedTree("l-edges must carry fault labels")
            if a.label == b.label:
                raise MalformedTree("l-edges must carry distinct labels")
        elif kinds == {"s", "c"}:
            s_edge = a if a.kind == "s" else b
            c_edge = a if a.kind == "c" else b
            if not is_fault(s_edge.label):
                raise MalformedTree("s-edge must carry a fault label")
            if c_edge.label != ALL_CORRECT:
                raise MalformedTree("c-edge must carry the all-correct label")
        else:
            raise MalformedTree(f"invalid SCL edge kinds: {kinds}")
    else:
        if not isinstance(node.instance, PrefixInstance):
            raise MalformedTree(f"{kind} node must carry a prefix instance")
        by_kind = {e.kind: e for e in node.edges}
        if set(by_kind) != {"s", "c"}:
            raise MalformedTree("need one straight and one curvy edge")
        if by_kind["c"].label is not True or by_kind["s"].label is not False:
            raise MalformedTree("curvy edge must be YES, straight edge NO")


def verify_shattered(tree: MistakeTree, vs: VersionSpace) -> bool:
    """Every root-to-leaf path is consistent with some alive verifier."""
    if tree.kind not in KINDS:
        raise MalformedTree(f"unknown tree kind: {tree.kind}")
    if tree.root is None:
        return True

    def walk(node: Optional[TreeNode], space: VersionSpace) -> bool:
        if node is None:
            return space.alive != 0
        _check_node(node, tree.kind)
        for e in node.edges:
            if tree.kind == "SCL":
                sub = space.restrict_cot(node.instance, e.label)
            else:
                sub = space.restrict(node.instance, e.label)
            if not walk(e.child, sub):
                return False
        return True

    return walk(tree.root, vs)


def certified_value(tree: MistakeTree) -> Union[int, Fraction]:
    """Lower bound the tree certifies: minimum path depth or weight.

    For SC trees, paths using more straight edges than the budget are
    unconstrained and excluded from the minimum.
    """
    if tree.root is None:
        return 0 if tree.kind in ("plain", "SC") else Fraction(0)

    if tree.kind == "SC":
        budget = tree.budget if tree.budget is not None else 0

        def depth(node: Optional[TreeNode], k: int) -> Optional[int]:
            if node is None:
                return 0
            best = None
            for e in node.edges:
                if e.kind == "s":
                    if k == 0:
                        continue  # over budget, path unconstrained
                    d = depth(e.child, k - 1)
                else:
                    d = depth(e.child, k)
                if d is not None and (best is None or 1 + d < best):
                    best = 1 + d
            return best

        v = depth(tree.root, budget)
        return 0 if v is None else v

    def weight(node: Optional[TreeNode]) -> Fraction:
        if node is None:
            return Fraction(0)
        return min(e.weight + weight(e.child) for e in node.edges)

    w = weight(tree.root)
    return int(w) if tree.kind == "plain" else w


def min_leaf_recurrence(w: int, d: int) -> int:
    """L(w) = L(w-1) + L(w-d) with L(w) = 1 for w <= 0.

    Minimum leaf count of a weight-w tree whose straight edges cost d and
    curvy edges cost 1.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if w <= 0:
        return 1
    vals = [1] * d  # vals[i] holds L(w - d + i) for the sliding window
    for _ in range(w):
        vals.append(vals[-1] + vals[0])
        vals.pop(0)
    return vals[-1]


def max_weight_for_leaves(n_leaves: int, d: int) -> int:
    """Largest w with min_leaf_recurrence(w, d) <= n_leaves."""
    if n_leaves < 1:
        raise ValueError("need at least one leaf")
    w = 0
    while min_leaf_recurrence(w + 1, d) <= n_leaves:
        w += 1
    return w
