"""Compare the compiled kernels against the numpy fallback.

Times each kernel entry point in-process on both backends, then runs the
CLI end to end under BUFFONLAB_BACKEND to measure whole-command wall time
and confirm the outputs are byte-identical.

Usage: python3 benchmarks/bench_backends.py [--repeat 5] [--quick]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from buffonlab import _pykernels


def load_compiled():
    try:
        from buffonlab import _kernels
        return _kernels
    except ImportError:
        return None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(scale):
    # one argument tuple per kernel; sizes scaled down under --quick
    rng = np.random.default_rng(99)
    n_draw = scale * (1 << 20)
    n_chunk = 1 << 17
    draws = rng.random(scale * (1 << 20))
    crossed = (rng.random(scale * (1 << 20)) < 0.6366).astype(np.uint8)

    k = 400
    mx, my = rng.random(k), rng.random(k)
    theta = rng.random(k) * np.pi
    hx, hy = 0.05 * np.cos(theta), 0.05 * np.sin(theta)
    # second set drawn fresh: the kernels require C-contiguous arrays
    nx, ny = rng.random(k), rng.random(k)
    phi = rng.random(k) * np.pi
    gx, gy = 0.05 * np.cos(phi), 0.05 * np.sin(phi)

    return [
        ("uniforms", (7, 0, 0, n_draw), f"{n_draw} draws"),
        ("needle_chunk", (7, 0, 0, n_chunk, 1.0, 1.0), f"{n_chunk} throws"),
        ("run_lengths", (draws, 1.0, 0.0, 0), f"{draws.size} draws"),
        ("window_scan", (crossed, 2.0, 1.0, 0, 0, np.pi, 1e-12, 10**9),
         f"{crossed.size} flags"),
        ("cross_count", (mx, my, hx, hy, nx, ny, gx, gy, 0.1, 1.0),
         f"{k}x{k} pairs"),
    ]


def bench_kernels(compiled, repeat, scale):
    print(f"{'kernel':<14} {'case':<16} {'fallback':>10} {'compiled':>10} {'speedup':>8}")
    for name, args, label in kernel_cases(scale):
        py_fn = getattr(_pykernels, name)
        t_py = best_of(lambda: py_fn(*args), repeat)
        if compiled is None:
            print(f"{name:<14} {label:<16} {t_py * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        c_fn = getattr(compiled, name)
        t_c = best_of(lambda: c_fn(*args), repeat)
        print(f"{name:<14} {label:<16} {t_py * 1e3:>8.2f}ms "
              f"{t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")


def bench_cli(repeat, scale):
    throws = scale * 2_000_000
    commands = [
        ("needle", ["needle", "--throws", str(throws), "--seed", "1",
                    "--workers", "1"]),
        ("joint", ["joint", "--throws", str(throws), "--seed", "1",
                   "--workers", "1"]),
    ]
    for name, tail in commands:
        argv = [sys.executable, "-m", "buffonlab", *tail]
        outputs = {}
        print(f"\nend to end: {name}, {throws} throws, workers 1")
        for backend in ("fallback", "compiled"):
            env = dict(os.environ, BUFFONLAB_BACKEND=backend)
            probe = subprocess.run(argv, capture_output=True, env=env)
            if probe.returncode != 0:
                print(f"  {backend:<10} unavailable "
                      f"({probe.stderr.decode(errors='replace').strip()})")
                continue
            outputs[backend] = probe.stdout
            t = best_of(lambda: subprocess.run(argv, capture_output=True,
                                               env=env, check=True), repeat)
            print(f"  {backend:<10} {t:>6.2f}s")
        if len(outputs) == 2:
            same = outputs["fallback"] == outputs["compiled"]
            print(f"  outputs byte-identical: {same}")
            if not same:
                raise SystemExit("backend outputs differ")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best is reported")
    parser.add_argument("--quick", action="store_true",
                        help="quarter-size cases for a fast smoke run")
    args = parser.parse_args()

    scale = 1 if args.quick else 4
    compiled = load_compiled()
    if compiled is None:
        print("compiled extension not importable; timing fallback only\n")
    bench_kernels(compiled, args.repeat, scale)
    bench_cli(max(2, args.repeat // 2), scale)


if __name__ == "__main__":
    main()
