"""Constructive adapters between chain-of-thought and prefix verification.

``CotFromPrefix`` turns a prefix learner into a fault-location learner:
the predicted first fault is the shortest prefix the inner learner
rejects.  ``PrefixFromCot`` goes the other way by padding the queried
prefix to full length with a designated fail token that every verifier
rejects after a correct prefix.

Both wrappers update the inner learner only on mistake rounds, and both
preserve soundness/completeness mistake budgets: each outer mistake
coincides with exactly one inner mistake of the same kind.
"""

from __future__ import annotations

from typing import Callable

from .core import (
    ALL_CORRECT,
    CotInstance,
    Label,
    PrefixInstance,
    PrefixLabel,
    VerifierClass,
    fault_at,
    validate_fail_token,
)


class CotFromPrefix:
    """Fault-location learner built from a prefix accept/reject learner."""

    mode = "cot"
    mistake_mode = "prefix-level"

    def __init__(self, prefix_learner):
        self.inner = prefix_learner
        self.costs = prefix_learner.costs

    def predict(self, z: CotInstance) -> Label:
        for ell in range(1, len(z.steps) + 1):
            if not self.inner.predict(z.prefix(ell)):
                return fault_at(ell)
        return ALL_CORRECT

    def update(self, z: CotInstance, truth: Label) -> None:
        pred = self.predict(z)
        if pred == truth:
            return
        if pred < truth:
            # Completeness mistake: the step we faulted is actually fine.
            self.inner.update(z.prefix(int(pred)), True)
        else:
            # Soundness mistake: we accepted through the true fault.
            self.inner.update(z.prefix(int(truth)), False)

    def snapshot(self) -> Callable[[CotInstance], Label]:
        inner_predict = self.inner.snapshot()

        def predict(z: CotInstance) -> Label:
            for ell in range(1, len(z.steps) + 1):
                if not inner_predict(z.prefix(ell)):
                    return fault_at(ell)
            return ALL_CORRECT

        return predict


class PrefixFromCot:
    """Prefix accept/reject learner built from a fault-location learner.

    Requires the class to declare a fail token: padding any prefix with
    it yields a trace whose first fault, if the prefix itself is clean,
    sits exactly at the first padded position.
    """

    mode = "prefix"
    mistake_mode = "prefix-level"

    def __init__(self, cot_learner, vclass: VerifierClass):
        validate_fail_token(vclass)
        self.inner = cot_learner
        self.vclass = vclass
        self.costs = cot_learner.costs

    def _padded(self, z: PrefixInstance) -> CotInstance:
        pad = (self.vclass.fail_token,) * (self.vclass.L - len(z.steps))
        return CotInstance(z.problem, z.steps + pad)

    def predict(self, z: PrefixInstance) -> PrefixLabel:
        return not self.inner.predict(self._padded(z)) <= len(z.steps)

    def update(self, z: PrefixInstance, truth: PrefixLabel) -> None:
        if self.predict(z) == truth:
            return
        ell = len(z.steps)
        padded = self._padded(z)
        if not truth:
            self.inner.update(padded, fault_at(ell))
        elif ell < self.vclass.L:
            self.inner.update(padded, fault_at(ell + 1))
        else:
            self.inner.update(padded, ALL_CORRECT)

    def snapshot(self) -> Callable[[PrefixInstance], PrefixLabel]:
        inner_predict = self.inner.snapshot()
        padded = self._padded
        return lambda z: not inner_predict(padded(z)) <= len(z.steps)


def cot_from_prefix(prefix_learner) -> CotFromPrefix:
    return CotFromPrefix(prefix_learner)


def prefix_from_cot(cot_learner, vclass: VerifierClass) -> PrefixFromCot:
    return PrefixFromCot(cot_learner, vclass)
