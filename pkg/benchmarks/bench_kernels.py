"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--grid 512] [--repeat 5] [--pipeline]

``--pipeline`` also runs ``trace_level_set`` on the scaled second example
end to end in two subprocesses, with and without MULTIPLICITY_NO_NUMBA=1.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from multiplicity import kernels
from multiplicity._accel import NUMBA_INSTALLED
from multiplicity.examples import example2_scaled
from multiplicity.fields import f_values
from multiplicity.sphere import ChartId


def best_of(fn, repeat):
    fn()  # warm-up (jit compile for numba)
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return min(ts)


def kernel_inputs(grid):
    spec = example2_scaled()
    n = grid + 1
    xs = np.linspace(-1.25, 1.25, n)
    h = xs[1] - xs[0]
    g = xs[None, :] + 1j * xs[:, None]
    pos = f_values(spec, ChartId.Chart1, g) > 0
    cpos = f_values(spec, ChartId.Chart1, g[:-1, :-1] + 0.5 * h * (1 + 1j)) > 0
    active = np.ones((n - 1, n - 1), dtype=bool)
    segs, _ = kernels.cell_segments_np(pos, cpos, active)
    qd, q1d, _, pd, p1d, _ = spec.polys(ChartId.Chart1)
    s = np.linspace(-1.2, 1.2, 24)
    seeds = (s[None, :] + 1j * s[:, None]).ravel().astype(np.complex128)
    return pos, cpos, active, segs, 2 * n * (n - 1), (qd, q1d, pd, p1d, seeds)


def run_kernels(grid, repeat):
    pos, cpos, active, segs, n_edges, (qd, q1d, pd, p1d, seeds) = kernel_inputs(grid)
    cases = [
        ("cell_segments", lambda f: f(pos, cpos, active),
         kernels.cell_segments_nb, kernels.cell_segments_np),
        ("link_segments", lambda f: f(segs, n_edges),
         kernels.link_segments_nb, kernels.link_segments_np),
        ("streamlines", lambda f: f(qd, q1d, pd, p1d, seeds, 0.005, 400, 1.0, 1.25, 1e-6),
         kernels.streamlines_nb, kernels.streamlines_np),
    ]
    print(f"grid {grid}x{grid}, {segs.shape[0]} segments, {seeds.size} streamline seeds; "
          f"numba {'on' if NUMBA_INSTALLED else 'NOT INSTALLED'}")
    print(f"{'kernel':15s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, call, nb, np_ in cases:
        t_nb = best_of(lambda: call(nb), repeat)
        t_np = best_of(lambda: call(np_), repeat)
        print(f"{name:15s} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.1f}x")


_PIPE = ("import time; from multiplicity.examples import example2_scaled; "
         "from multiplicity.tracer import trace_level_set; s = example2_scaled(); "
         "trace_level_set(s, {g}); t = time.perf_counter(); trace_level_set(s, {g}); "
         "print(time.perf_counter() - t)")


def run_pipeline(grid):
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, MULTIPLICITY_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", _PIPE.format(g=grid)], env=env,
                             capture_output=True, text=True, check=True)
        print(f"trace_level_set grid_n={grid} [{label}]: {float(out.stdout):.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--pipeline", action="store_true")
    args = ap.parse_args()
    run_kernels(args.grid, args.repeat)
    if args.pipeline:
        run_pipeline(args.grid)


if __name__ == "__main__":
    main()
