"""Compare the compiled and pure-Python kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--people 50] [--frames 300] [--dim 128]

Each kernel is timed on identical inputs under every importable backend and
the outputs are checked for agreement. The end-to-end frame rate (tracking
plus proximity) runs in a subprocess per backend because the backend is
chosen once at import time.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from socialtrack._backend import available_backends

END_TO_END = r"""
import json, sys, time
from socialtrack import BACKEND
from socialtrack.evaluation import ScenarioConfig, generate_scenario
from socialtrack.proximity import build_groups, feature_of, pairwise_l2, violation_stats
from socialtrack.tracking import Detection, Tracker

people, n_frames, repeat = map(int, sys.argv[1:4])
sc = generate_scenario(ScenarioConfig(n_people=people, n_frames=n_frames, frame_width=1920,
                                      frame_height=1080, noise_std=1.0, seed=9))
frames = [[Detection(r.box, r.confidence, r.descriptor) for r in dets] for dets in sc.detections]
best = 0.0
for _ in range(repeat):
    tracker = Tracker()
    t0 = time.perf_counter()
    for dets in frames:
        tracks, _ = tracker.step(dets)
        live = [t for t in tracks if t.frames_since_update == 0 and t.is_confirmed]
        feats = [feature_of(t.last_box, t.id) for t in live]
        violation_stats(build_groups(pairwise_l2(feats), feats, 1080.0))
    best = max(best, len(frames) / (time.perf_counter() - t0))
print(json.dumps({"backend": BACKEND, "fps": best}))
"""


def kernel_cases(rng, people, dim):
    n = m = people
    cost = rng.uniform(0, 100, size=(n, m))

    a = rng.normal(size=(n, 4, 4))
    covs = a @ a.transpose(0, 2, 1) + 4 * np.eye(4)
    means = rng.uniform(0, 500, size=(n, 4))
    meas = rng.uniform(0, 500, size=(m, 4))

    pts = rng.uniform(0, 1000, size=(4 * people, 2))
    adjacency = np.linalg.norm(pts[:, None] - pts[None], axis=-1) < 60

    galleries = [rng.normal(size=(100, dim)) for _ in range(n)]
    galleries = [g / np.linalg.norm(g, axis=1, keepdims=True) for g in galleries]
    desc = rng.normal(size=(m, dim))
    desc /= np.linalg.norm(desc, axis=1, keepdims=True)
    mask = rng.random((n, m)) < 0.3

    return {
        "linear_assignment": lambda k: k.linear_assignment(cost),
        "mahalanobis_matrix": lambda k: k.mahalanobis_matrix(means, covs, meas),
        "connected_components": lambda k: k.connected_components(adjacency),
        "gated_cosine_distance": lambda k: k.gated_cosine_distance(galleries, desc, mask),
    }


def same(x, y):
    if isinstance(x, tuple):
        return all(same(a, b) for a, b in zip(x, y))
    return np.allclose(x, y, rtol=1e-12, atol=1e-9)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--people", type=int, default=50)
    ap.add_argument("--frames", type=int, default=300)
    ap.add_argument("--dim", type=int, default=128, help="descriptor dimension for the cosine kernel")
    args = ap.parse_args(argv)

    backends = available_backends()
    cases = kernel_cases(np.random.default_rng(0), args.people, args.dim)
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<24}" + "".join(f"{name + ' (us)':>16}" for name in backends) + f"{'agree':>8}")
    for label, fn in cases.items():
        times, outs = [], []
        for mod in backends.values():
            outs.append(fn(mod))
            n_calls = 20
            times.append(min(timeit.repeat(lambda: fn(mod), number=n_calls, repeat=args.repeat)) / n_calls * 1e6)
        agree = all(same(outs[0], o) for o in outs[1:])
        print(f"{label:<24}" + "".join(f"{t:>16.1f}" for t in times) + f"{str(agree):>8}")

    print(f"\nend-to-end, {args.people} people, {args.frames} frames, best of {args.repeat}:")
    for name in backends:
        env = dict(os.environ)
        if name == "python":
            env["SOCIALTRACK_PURE_PYTHON"] = "1"
        else:
            env.pop("SOCIALTRACK_PURE_PYTHON", None)
        out = subprocess.run([sys.executable, "-c", END_TO_END, str(args.people), str(args.frames), str(args.repeat)],
                             env=env, check=True, capture_output=True, text=True).stdout
        result = json.loads(out)
        print(f"  {result['backend']:<8} {result['fps']:8.0f} frames/s")


if __name__ == "__main__":
    main()
