"""Compare the compiled kernel against the pure-Python fallback.

Each workload runs in a fresh subprocess with VARSMOOTH_KERNEL forcing one
backend, so the two implementations never share a process. Reported times
are the best of --repeats runs.

Usage:
    python3 benchmarks/kernel_benchmark.py [--repeats N] [--json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER_FLAG = "--worker"


def _workload_reduction():
    import time

    from varsmooth.groebner import buchberger, normal_form
    from varsmooth.parser import parse_ideal_file
    from varsmooth.poly import Polynomial

    ring, gens = parse_ideal_file(
        "ring QQ [x,y,z]\nx+y+z\nx*y+y*z+z*x\nx*y*z-1\n"
    )
    basis = buchberger(gens, use_cache=False)
    x = Polynomial.variable(ring, 0)
    y = Polynomial.variable(ring, 1)
    z = Polynomial.variable(ring, 2)
    big = (x + y + z + Polynomial.constant(ring, 1)) ** 16
    start = time.perf_counter()
    for _ in range(200):
        normal_form(big, basis)
    return time.perf_counter() - start


def _workload_jacobian_rnc5():
    import time

    from varsmooth.bench import rational_normal_curve
    from varsmooth.driver import Config, projective_smoothness
    from varsmooth.groebner import clear_caches

    clear_caches()
    start = time.perf_counter()
    verdict = projective_smoothness(
        rational_normal_curve(5).ideal, Config(mode="jacobian")
    )
    elapsed = time.perf_counter() - start
    assert verdict.status == "smooth"
    return elapsed


def _workload_hironaka_rnc7():
    import time

    from varsmooth.bench import rational_normal_curve
    from varsmooth.driver import Config, projective_smoothness
    from varsmooth.groebner import clear_caches

    clear_caches()
    start = time.perf_counter()
    verdict = projective_smoothness(
        rational_normal_curve(7).ideal, Config(mode="hironaka")
    )
    elapsed = time.perf_counter() - start
    assert verdict.status == "smooth"
    return elapsed


WORKLOADS = [
    ("reduction loop", _workload_reduction),
    ("verdict I1-5 jacobian", _workload_jacobian_rnc5),
    ("verdict I1-7 hironaka", _workload_hironaka_rnc7),
]


def _run_worker(repeats):
    from varsmooth.kernel import backend_name

    times = {}
    for name, fn in WORKLOADS:
        best = min(fn() for _ in range(repeats))
        times[name] = best
    print(json.dumps({"backend": backend_name(), "times": times}))


def _spawn(backend, repeats):
    env = dict(os.environ)
    env["VARSMOOTH_KERNEL"] = backend
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), WORKER_FLAG, str(repeats)],
        env=env,
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        return None, proc.stderr.strip()
    payload = json.loads(proc.stdout.strip().splitlines()[-1])
    return payload, None


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="benchmark the compiled kernel against the Python fallback"
    )
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--json", action="store_true", dest="as_json")
    args = parser.parse_args(argv)

    compiled, compiled_err = _spawn("compiled", args.repeats)
    python, python_err = _spawn("python", args.repeats)
    if python is None:
        print(f"python backend failed: {python_err}", file=sys.stderr)
        return 1
    if compiled is None:
        print(
            "compiled backend unavailable, showing python fallback only",
            file=sys.stderr,
        )
        if compiled_err:
            print(compiled_err, file=sys.stderr)

    if args.as_json:
        out = {"python": python["times"]}
        if compiled is not None:
            out["compiled"] = compiled["times"]
        print(json.dumps(out, sort_keys=True))
        return 0

    width = max(len(name) for name, _ in WORKLOADS)
    header = f"{'workload':<{width}}  {'compiled':>9}  {'python':>9}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, _ in WORKLOADS:
        py_t = python["times"][name]
        if compiled is None:
            print(f"{name:<{width}}  {'n/a':>9}  {py_t:>8.3f}s  {'n/a':>8}")
            continue
        c_t = compiled["times"][name]
        ratio = py_t / c_t if c_t > 0 else float("inf")
        print(f"{name:<{width}}  {c_t:>8.3f}s  {py_t:>8.3f}s  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    if len(sys.argv) > 1 and sys.argv[1] == WORKER_FLAG:
        _run_worker(int(sys.argv[2]))
    else:
        sys.exit(main())
