"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on representative inputs, then an end-to-end run of the
exact pipeline with each backend swapped in.
"""

import argparse
import random
import timeit
from fractions import Fraction

import numpy as np

from usurycap import _pykernels, clear_cache, in_cap_plus, kernels, normalize
from usurycap import polyz


def kernel_cases(rng):
    coeffs = [rng.randint(-(10**12), 10**12) for _ in range(367)]
    chain = polyz.sturm_chain([rng.randint(-100, 100) for _ in range(40)] + [1])
    times = np.array(sorted(rng.uniform(0, 12) for _ in range(8)))
    amounts = np.array([rng.uniform(-1e4, 1e4) for _ in range(8)])
    grid = np.linspace(0, 10, 10_000)
    return {
        "homog_eval (deg 366)": ("homog_eval", (coeffs, 12345, 67891)),
        "sign_variations (367)": ("sign_variations", (coeffs,)),
        "chain_variations (deg 40)": ("chain_variations", (chain, 3, 7)),
        "npv_grid (8 x 10^4)": ("npv_grid", (times, amounts, grid)),
    }


def use_backend(mod):
    # callers look kernels up on the module at call time
    for name in ("homog_eval", "sign_variations", "chain_variations", "npv_grid"):
        setattr(kernels, name, getattr(mod, name))


def pipeline():
    fee = normalize([(0, 1), (Fraction(1, 365), -100), (Fraction(366, 365), 170)])
    clear_cache()
    for cap in ("0.1", "0.6", "10"):
        in_cap_plus(fee, cap)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"python": _pykernels}
    if "cython" in kernels.BACKENDS:
        backends["cython"] = kernels.BACKENDS["cython"]
    else:
        print("compiled kernels are not built; timing the fallback only")

    rng = random.Random(1)
    cases = kernel_cases(rng)
    print(f"{'kernel':28}" + "".join(f"{b:>14}" for b in backends) + ("       speedup" if len(backends) == 2 else ""))
    for label, (name, argv) in cases.items():
        times = [best(lambda f=getattr(m, name): f(*argv), args.repeat) for m in backends.values()]
        row = f"{label:28}" + "".join(f"{t * 1e3:11.3f} ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:13.1f}x"
        print(row)

    original = kernels.BACKENDS[kernels.BACKEND]
    times = []
    for mod in backends.values():
        use_backend(mod)
        times.append(best(pipeline, max(1, args.repeat // 2)))
    use_backend(original)
    row = f"{'fee loan, 3 caps (exact)':28}" + "".join(f"{t * 1e3:11.3f} ms" for t in times)
    if len(times) == 2:
        row += f"{times[0] / times[1]:13.1f}x"
    print(row)


if __name__ == "__main__":
    main()
