"""Online learners over finite verifier classes.

Every learner exposes the same step interface: ``predict(z)`` returns a
label, ``update(z, truth)`` folds in the revealed truth, ``snapshot()``
freezes the current state into a standalone predictor.  Chain-of-thought
learners consume CotInstances and emit fault labels; prefix learners
consume PrefixInstances and emit accept/reject verdicts.

All learners assume realizable runs: the oracle's target verifier stays
in the version space forever, and an empty version space is a harness
bug, not a recoverable condition.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import dimensions
from .core import (
    ALL_CORRECT,
    ClassMismatch,
    CostVector,
    CotInstance,
    EmptyVersionSpace,
    Label,
    MistakeKind,
    Oracle,
    PrefixInstance,
    PrefixLabel,
    Transcript,
    VerifierClass,
    VersionSpace,
    classify_mistake,
    classify_prefix_mistake,
    fault_at,
)

_UNIT_COSTS = CostVector(Fraction(1), Fraction(1), Fraction(0))


class MajorityVote:
    """Accept each step while a strict majority of alive verifiers does.

    Halving learner: every mistake removes at least half of the alive
    verifiers, so a realizable run has at most log2|H| mistakes.
    """

    mode = "cot"
    mistake_mode = "prefix-level"

    def __init__(self, vclass: VerifierClass, costs: CostVector = _UNIT_COSTS):
        self.vs = VersionSpace.full(vclass)
        self.costs = costs

    def predict(self, z: CotInstance) -> Label:
        if self.vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        half = self.vs.size / 2
        for ell in range(1, len(z.steps) + 1):
            accepters = self.vs.yes_mask(z.prefix(ell)).bit_count()
            if accepters <= half:
                return fault_at(ell)
        return ALL_CORRECT

    def update(self, z: CotInstance, truth: Label) -> None:
        if self.predict(z) != truth:
            self.vs = self.vs.restrict_cot(z, truth)

    def snapshot(self) -> Callable[[CotInstance], Label]:
        frozen = MajorityVote(self.vs.vclass, self.costs)
        frozen.vs = self.vs
        return frozen.predict


class SoundConservative:
    """Accept a step only when every alive verifier does.

    Never makes a soundness mistake: the target is alive, so any step it
    would fault is faulted here no later.
    """

    mode = "cot"
    mistake_mode = "prefix-level"

    def __init__(self, vclass: VerifierClass, costs: CostVector = _UNIT_COSTS):
        self.vs = VersionSpace.full(vclass)
        self.costs = costs

    def predict(self, z: CotInstance) -> Label:
        if self.vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        for ell in range(1, len(z.steps) + 1):
            if self.vs.yes_mask(z.prefix(ell)) != self.vs.alive:
                return fault_at(ell)
        return ALL_CORRECT

    def update(self, z: CotInstance, truth: Label) -> None:
        if self.predict(z) != truth:
            self.vs = self.vs.restrict_cot(z, truth)

    def snapshot(self) -> Callable[[CotInstance], Label]:
        frozen = SoundConservative(self.vs.vclass, self.costs)
        frozen.vs = self.vs
        return frozen.predict


class RiverCrossingSound:
    """Sound learner for the river-crossing move graph.

    Accepts a trace prefix while every move lies in the revealed edges
    plus the accumulated learned set; each completeness mistake reveals
    one hidden edge, so total mistakes never exceed the hidden-edge count.
    """

    mode = "cot"
    mistake_mode = "prefix-level"

    def __init__(
        self,
        vclass: VerifierClass,
        revealed_edges: Sequence[tuple[tuple, tuple]],
        costs: CostVector = _UNIT_COSTS,
    ):
        self.vclass = vclass
        self.costs = costs
        try:
            self.states = [
                tuple(int(c) for c in t.name) for t in vclass.sigma
            ]
            if any(len(s) != 4 for s in self.states):
                raise ValueError
        except ValueError:
            raise ClassMismatch(
                "class tokens do not encode 4-bit bank states"
            ) from None
        from .families import RIVER_GOAL, RIVER_START

        self.start = RIVER_START
        self.goal = RIVER_GOAL
        self.revealed = frozenset(revealed_edges)
        self.learned: set[tuple[tuple, tuple]] = set()

    def _first_fault(self, z: CotInstance) -> Label:
        path = [self.states[s] for s in z.steps]
        allowed = self.revealed | self.learned
        if path[0] != self.start:
            return fault_at(1)
        for i in range(1, len(path)):
            if (path[i - 1], path[i]) not in allowed:
                return fault_at(i + 1)
        if len(path) == self.vclass.L and path[-1] != self.goal:
            return fault_at(len(path))
        return ALL_CORRECT

    def predict(self, z: CotInstance) -> Label:
        return self._first_fault(z)

    def update(self, z: CotInstance, truth: Label) -> None:
        pred = self._first_fault(z)
        if pred == truth or pred == ALL_CORRECT:
            return
        # Completeness mistake: the move we faulted is actually legal.
        if truth > pred:
            path = [self.states[s] for s in z.steps]
            ell = int(pred)
            if ell >= 2:
                self.learned.add((path[ell - 2], path[ell - 1]))

    def snapshot(self) -> Callable[[CotInstance], Label]:
        frozen = RiverCrossingSound(self.vclass, self.revealed, self.costs)
        frozen.learned = set(self.learned)
        return frozen.predict


class ScSoa:
    """Budgeted standard optimal algorithm for prefix verification.

    Spends at most k soundness mistakes (accepting a bad step) and at
    most the k-budgeted dimension of the class in mistakes overall.
    """

    mode = "prefix"
    mistake_mode = "prefix-level"

    def __init__(self, vclass: VerifierClass, k: int, costs: CostVector = _UNIT_COSTS):
        if k < 0:
            raise ValueError("budget k must be >= 0")
        self.vs = VersionSpace.full(vclass)
        self.k = k
        self.costs = costs

    @staticmethod
    def _predict(vs: VersionSpace, k: int, z: PrefixInstance) -> PrefixLabel:
        if vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        ym = vs.yes_mask(z)
        if ym == vs.alive:
            return True
        if k == 0 or ym == 0:
            return False
        m_c = dimensions.sc_value(vs.restrict(z, True), k)
        m_s = dimensions.sc_value(vs.restrict(z, False), k - 1)
        return not (m_c <= m_s)

    def predict(self, z: PrefixInstance) -> PrefixLabel:
        return self._predict(self.vs, self.k, z)

    def update(self, z: PrefixInstance, truth: PrefixLabel) -> None:
        pred = self.predict(z)
        if pred and not truth:
            self.k -= 1
        self.vs = self.vs.restrict(z, truth)

    def snapshot(self) -> Callable[[PrefixInstance], PrefixLabel]:
        vs, k = self.vs, self.k
        return lambda z: ScSoa._predict(vs, k, z)


class WscSoa:
    """Cost-weighted standard optimal algorithm for prefix verification.

    Guarantees cumulative cost at most the weighted dimension of the
    class, with rejects costing gamma_c and accepts costing gamma_s when
    wrong.
    """

    mode = "prefix"
    mistake_mode = "prefix-level"

    def __init__(self, vclass: VerifierClass, costs: CostVector):
        self.vs = VersionSpace.full(vclass)
        self.costs = costs

    @staticmethod
    def _predict(vs: VersionSpace, costs: CostVector, z: PrefixInstance) -> PrefixLabel:
        if vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        ym = vs.yes_mask(z)
        if ym == vs.alive:
            return True
        if ym == 0:
            return False
        m_c = costs.gamma_c + dimensions.wsc_value(vs.restrict(z, True), costs)
        m_s = costs.gamma_s + dimensions.wsc_value(vs.restrict(z, False), costs)
        return not (m_c <= m_s)

    def predict(self, z: PrefixInstance) -> PrefixLabel:
        return self._predict(self.vs, self.costs, z)

    def update(self, z: PrefixInstance, truth: PrefixLabel) -> None:
        self.vs = self.vs.restrict(z, truth)

    def snapshot(self) -> Callable[[PrefixInstance], PrefixLabel]:
        vs, costs = self.vs, self.costs
        return lambda z: WscSoa._predict(vs, costs, z)


def _scl_loss(costs: CostVector, pred: Label, truth: Label) -> Fraction:
    if pred == truth:
        return Fraction(0)
    if pred == ALL_CORRECT:
        return costs.gamma_s
    if truth == ALL_CORRECT:
        return costs.gamma_c
    return costs.gamma_l


class SclSoa:
    """Sequence-level optimal algorithm over full reasoning traces.

    Predicts the fault label minimizing the worst-case loss plus the
    residual dimension of the matching restriction; ties go to the
    smallest label.
    """

    mode = "cot"
    mistake_mode = "sequence-level"

    def __init__(self, vclass: VerifierClass, costs: CostVector):
        costs.require_ordered()
        self.vs = VersionSpace.full(vclass)
        self.costs = costs

    @staticmethod
    def _predict(vs: VersionSpace, costs: CostVector, z: CotInstance) -> Label:
        if vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        labels = sorted(vs.cot_labels(z))
        if len(labels) == 1:
            return labels[0]
        residual = {
            y: dimensions.scl_value(vs.restrict_cot(z, y), costs)
            for y in labels
        }
        best, best_worst = None, None
        for i in labels:
            worst = max(_scl_loss(costs, i, j) + residual[j] for j in labels)
            if best_worst is None or worst < best_worst:
                best, best_worst = i, worst
        return best

    def predict(self, z: CotInstance) -> Label:
        return self._predict(self.vs, self.costs, z)

    def update(self, z: CotInstance, truth: Label) -> None:
        self.vs = self.vs.restrict_cot(z, truth)

    def snapshot(self) -> Callable[[CotInstance], Label]:
        vs, costs = self.vs, self.costs
        return lambda z: SclSoa._predict(vs, costs, z)


class RejectAll:
    """Reject every disputed trace as faulty from step one.

    With zero location cost this pays only for completeness mistakes,
    each of which restricts the version space to the verifiers calling
    the trace fully correct; once the alive set agrees it switches to
    the unanimous label.
    """

    mode = "cot"
    mistake_mode = "sequence-level"

    def __init__(self, vclass: VerifierClass, costs: CostVector = _UNIT_COSTS):
        self.vs = VersionSpace.full(vclass)
        self.costs = costs

    def predict(self, z: CotInstance) -> Label:
        if self.vs.alive == 0:
            raise EmptyVersionSpace("no verifier consistent with history")
        labels = self.vs.cot_labels(z)
        if len(labels) == 1:
            return labels.pop()
        return fault_at(1)

    def update(self, z: CotInstance, truth: Label) -> None:
        self.vs = self.vs.restrict_cot(z, truth)

    def snapshot(self) -> Callable[[CotInstance], Label]:
        frozen = RejectAll(self.vs.vclass, self.costs)
        frozen.vs = self.vs
        return frozen.predict


class ConservativeWrapper:
    """Update the inner learner only on mistake rounds.

    Keeps a snapshot of the hypothesis after every update, so the number
    of distinct hypotheses is at most one plus the mistake count.
    """

    def __init__(self, learner):
        self.learner = learner
        self.mode = learner.mode
        self.mistake_mode = learner.mistake_mode
        self.costs = learner.costs
        self.snapshots = [learner.snapshot()]

    def predict(self, z):
        return self.learner.predict(z)

    def update(self, z, truth) -> None:
        if self.learner.predict(z) != truth:
            self.learner.update(z, truth)
            self.snapshots.append(self.learner.snapshot())

    def snapshot(self):
        return self.snapshots[-1]


def run_online(
    learner,
    oracle: Oracle,
    sequence: Sequence,
    costs: Optional[CostVector] = None,
) -> Transcript:
    """Drive one online session and return the per-round transcript."""
    if costs is None:
        costs = getattr(learner, "costs", _UNIT_COSTS)
    transcript = Transcript()
    for z in sequence:
        pred = learner.predict(z)
        if isinstance(z, CotInstance):
            truth = oracle.cot_label(z)
            kind = classify_mistake(pred, truth, learner.mistake_mode)
        else:
            truth = oracle.prefix_label(z)
            kind = classify_prefix_mistake(pred, truth)
        transcript.record(z, pred, truth, kind, costs.of(kind))
        learner.update(z, truth)
    return transcript
