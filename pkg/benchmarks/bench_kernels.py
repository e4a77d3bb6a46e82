"""Compare the compiled and pure-Python minimax kernels.

Runs the four dimension games on moderately sized classes with each
backend and reports wall time and speedup.  The compiled backend only
covers classes with at most 64 verifiers; larger ones always use the
pure kernel.

Usage: python benchmarks/bench_kernels.py
"""

import time

from cotverify import families
from cotverify.core import VersionSpace
from cotverify.dimensions import _scl_label_masks
from cotverify.kernels import pure

try:
    from cotverify.kernels import _fast
except ImportError:
    _fast = None


def bench(label, make_engine, call):
    results = {}
    backends = {"pure": pure}
    if _fast is not None:
        backends["fast"] = _fast
    for name, mod in backends.items():
        eng = make_engine(mod)
        t0 = time.perf_counter()
        value = call(eng)
        results[name] = (value, time.perf_counter() - t0)
    line = f"{label:42s}"
    for name in ("pure", "fast"):
        if name in results:
            value, dt = results[name]
            line += f"  {name}: {dt * 1000:9.2f} ms (value {value})"
    if "fast" in results and results["fast"][1] > 0:
        line += f"  speedup {results['pure'][1] / results['fast'][1]:6.1f}x"
    print(line)
    if len(results) == 2:
        assert results["pure"][0] == results["fast"][0], "backends disagree"


def main():
    if _fast is None:
        print("compiled kernel unavailable; benchmarking pure only")

    for L in (5, 6):
        vc = families.singleton_bitstring_class(L)
        full = VersionSpace.full(vc).alive
        masks = list(vc.yes_masks)
        bench(
            f"ldim singleton(L={L}), |H|={len(vc)}",
            lambda mod, m=masks: mod.LdimEngine(m),
            lambda eng, f=full: eng.value(f),
        )
        bench(
            f"sc_ldim singleton(L={L}), k=2",
            lambda mod, m=masks: mod.ScEngine(m),
            lambda eng, f=full: eng.value(f, 2),
        )
        bench(
            f"wsc_ldim singleton(L={L}), ws=3 wc=1",
            lambda mod, m=masks: mod.WscEngine(m, 3, 1),
            lambda eng, f=full: eng.value(f),
        )
        lms = _scl_label_masks(vc)
        bench(
            f"scl_ldim singleton(L={L}), 3/2/1",
            lambda mod, p=lms: mod.SclEngine([list(x) for x in p], 3, 2, 1),
            lambda eng, f=full: eng.value(f),
        )

    vc = families.indicator_class(10)
    full = VersionSpace.full(vc).alive
    masks = list(vc.yes_masks)
    bench(
        f"sc_ldim indicator(10), |universe|={len(vc.universe)}, k=1",
        lambda mod, m=masks: mod.ScEngine(m),
        lambda eng, f=full: eng.value(f, 1),
    )


if __name__ == "__main__":
    main()
