#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Times the two hot paths: the variational-circuit block evaluation with all
48 shifted chains (one gradient's worth of work) and the postselected
Trotter stepping loop. Run from the repo root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from nonherm._kernels import reference

try:
    from nonherm._kernels import _fast
except ImportError:
    _fast = None


def _time(fn, *args, repeat: int = 5, min_seconds: float = 0.2) -> float:
    """Best per-call time over ``repeat`` rounds of an auto-sized batch."""
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn(*args)
        dt = time.perf_counter() - t0
        if dt >= min_seconds / repeat:
            break
        n *= 4
    best = dt / n
    for _ in range(repeat - 1):
        t0 = time.perf_counter()
        for _ in range(n):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / n)
    return best


def main() -> None:
    rng = np.random.default_rng(0)
    r = rng.uniform(0.0, 2.0 * np.pi, 24)
    amp0 = np.array([1.0, 0.0], dtype=np.complex128)
    shift = 0.5 * np.pi

    cases = [
        ("ansatz_block", lambda mod: (mod.ansatz_block, (r,))),
        ("ansatz_block_shifts (48 chains)", lambda mod: (mod.ansatz_block_shifts, (r, shift))),
        ("trotter_run (1000 steps)", lambda mod: (mod.trotter_run, (amp0, 0.01, 0.3, 1000, False, 1e-14))),
    ]

    backends = [("python", reference)] + ([("compiled", _fast)] if _fast is not None else [])
    if _fast is None:
        print("compiled kernels not importable; timing the reference only")

    print(f"{'kernel':34s}" + "".join(f"{name:>14s}" for name, _ in backends) + f"{'speedup':>10s}")
    for label, case in cases:
        times = []
        for _, mod in backends:
            fn, args = case(mod)
            times.append(_time(fn, *args))
        speedup = f"{times[0] / times[-1]:8.1f}x" if len(times) == 2 else "       -"
        cols = "".join(f"{t * 1e6:12.2f}us" for t in times)
        print(f"{label:34s}{cols}{speedup:>10s}")

    # agreement spot check while both backends are loaded
    if _fast is not None:
        b_py, p_py, m_py = reference.ansatz_block_shifts(r, shift)
        b_c, p_c, m_c = _fast.ansatz_block_shifts(r, shift)
        worst = max(
            np.max(np.abs(b_py - b_c)), np.max(np.abs(p_py - p_c)), np.max(np.abs(m_py - m_c))
        )
        print(f"\nmax cross-backend deviation: {worst:.3e}")


if __name__ == "__main__":
    main()
