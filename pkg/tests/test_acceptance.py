"""Acceptance criteria 1-11, each at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from pssk.diagram import PersistenceDiagram, format_real, multiset_union, write_diagram_file
from pssk.filtration import build_cubical_filtration, build_path_filtration
from pssk.gram import gram_matrix
from pssk.indefiniteness import indefiniteness_search
from pssk.kernel import pssk_distance, pssk_eval, stability_constant
from pssk.landscape import landscape_distance, landscape_stability_rhs
from pssk.linalg import definiteness_check
from pssk.matching import wasserstein_distance
from pssk.persistence import compute_persistence

from oracles import l2_inner_by_quadrature
from test_indefiniteness import load as load_witnesses
from test_matching import oracle as matching_oracle
from test_persistence import brute_dim0

pytestmark = pytest.mark.acceptance
ARTIFACTS = Path(__file__).resolve().parent.parent / "build" / "acceptance"


def rand_diagram(rng, max_points, lo=0.0, hi=1.0, min_points=0):
    k = int(rng.integers(min_points, max_points + 1))
    return PersistenceDiagram(np.sort(rng.uniform(lo, hi, (k, 2)), axis=1))


def test_c01_closed_form_vs_integration(record):
    rng = np.random.Generator(np.random.Philox(101))
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(30):
        F, G = rand_diagram(rng, 8, min_points=1), rand_diagram(rng, 8, min_points=1)
        for sigma in (0.05, 0.5, 2.0):
            exact = pssk_eval(F, G, sigma)
            quad = l2_inner_by_quadrature(F.points, G.points, sigma)
            worst = max(worst, abs(exact - quad) / abs(quad))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 60
    record(1, ok, f"max relative error {worst:.2e} (tol 1e-6), {dt:.1f}s (limit 60s)")
    assert ok


def test_c02_stability(record):
    rng = np.random.Generator(np.random.Philox(102))
    t0 = time.perf_counter()
    worst, ratio = -math.inf, 0.0
    for sigma in (0.1, 1.0):
        for _ in range(200):
            F, G = rand_diagram(rng, 8), rand_diagram(rng, 8)
            lhs = pssk_distance(F, G, sigma)
            rhs = stability_constant(sigma) * wasserstein_distance(F, G, 1)
            worst = max(worst, lhs - rhs)
            if rhs > 0:
                ratio = max(ratio, lhs / rhs)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 30
    record(2, ok, f"max d_k - C*d_W1 = {worst:.3e} (must be <= 1e-9), tightest ratio {ratio:.3f}, "
                  f"{dt:.1f}s (limit 30s)")
    assert ok


def test_c03_additivity_and_growth(record):
    rng = np.random.Generator(np.random.Philox(103))
    add_err = 0.0
    for _ in range(100):
        F1, F2, G = (rand_diagram(rng, 6) for _ in range(3))
        sigma = float(rng.choice([0.05, 0.5, 2.0]))
        lhs = pssk_eval(multiset_union(F1, F2), G, sigma)
        rhs = pssk_eval(F1, G, sigma) + pssk_eval(F2, G, sigma)
        add_err = max(add_err, abs(lhs - rhs) / max(1.0, abs(rhs)))
    grow_err = 0.0
    empty = PersistenceDiagram()
    for _ in range(20):
        F = rand_diagram(rng, 5, min_points=1)
        U = F
        for n in range(1, 6):
            if n > 1:
                U = multiset_union(U, F)
            want = n * math.sqrt(pssk_eval(F, F, 0.3))
            grow_err = max(grow_err, abs(pssk_distance(U, empty, 0.3) - want) / want)
            for p in (1.0, 2.0):
                want = n ** (1 / p) * wasserstein_distance(F, empty, p)
                grow_err = max(grow_err, abs(wasserstein_distance(U, empty, p) - want) / want)
    ok = add_err <= 1e-12 and grow_err <= 1e-9
    record(3, ok, f"additivity error {add_err:.1e} (tol 1e-12), growth relative error {grow_err:.1e} (tol 1e-9)")
    assert ok


def test_c04_matching_vs_bruteforce(record):
    rng = np.random.Generator(np.random.Philox(104))
    worst = 0.0
    for _ in range(500):
        F, G = rand_diagram(rng, 4), rand_diagram(rng, 4)
        for p in (1.0, 2.0, math.inf):
            worst = max(worst, abs(wasserstein_distance(F, G, p) - matching_oracle(F.points, G.points, p)))
    ok = worst <= 1e-10
    record(4, ok, f"max |solver - brute force| = {worst:.1e} over 500 pairs x 3 exponents (tol 1e-10)")
    assert ok


def test_c05_gram_psd(record):
    rng = np.random.Generator(np.random.Philox(105))
    worst = -math.inf
    for _ in range(50):
        ds = [rand_diagram(rng, 6) for _ in range(int(rng.integers(5, 16)))]
        sigma = float(rng.choice([0.01, 0.1, 1.0]))
        for kind in ("pssk", "landscape"):
            e = np.linalg.eigvalsh(gram_matrix(ds, kind, sigma).entries)
            if e[-1] > 0:
                worst = max(worst, -e[0] / e[-1])
    ok = worst <= 1e-8
    record(5, ok, f"worst -min/max eigenvalue {worst:.1e} (tol 1e-8)")
    assert ok


def test_c06_indefiniteness_witness(record):
    fixture = load_witnesses()
    details, ok = [], True
    for key, p in (("1", 1.0), ("2", 2.0), ("inf", math.inf)):
        w = indefiniteness_search(p, seed=fixture[key]["seed"])
        rep = definiteness_check(w.distances, 1e-6)
        E = np.linalg.eigvalsh(np.exp(-w.xi * w.distances))
        good = (rep.n_positive >= 2 and rep.n_negative >= 2 and E[0] < -1e-8 * np.max(np.abs(E))
                and [d.points.tolist() for d in w.diagrams] == fixture[key]["diagrams"])
        ok &= good
        details.append(f"p={key}: +{rep.n_positive}/-{rep.n_negative}, xi={w.xi:.3g}, "
                       f"min eig exp(-xi d)={E[0]:.2e}")
    record(6, ok, "; ".join(details))
    assert ok


def test_c07_thought_experiment_growth(record):
    lams = (1, 2, 5, 10, 50, 100)
    dk = {}
    dl = {}
    for lam in lams:
        F, G = PersistenceDiagram([(-lam, lam)]), PersistenceDiagram([(-lam + 1, lam + 1)])
        dk[lam] = pssk_distance(F, G, 1.0)
        dl[lam] = landscape_distance(F, G) / math.sqrt(lam)
    bounded = abs(dk[100] - dk[50]) < 1e-6
    conv = abs(dl[100] - dl[50]) / dl[100] <= 0.02 and dl[100] > 0
    ok = bounded and conv
    record(7, ok, f"|d_k(100)-d_k(50)|={abs(dk[100] - dk[50]):.1e} (<1e-6); "
                  f"d_L/sqrt(lam): {dl[50]:.5f} -> {dl[100]:.5f} ({abs(dl[100] - dl[50]) / dl[100]:.2%}, <2%)")
    assert ok


def test_c08_landscape_bound(record):
    rng = np.random.Generator(np.random.Philox(108))
    violations, worst = 0, -math.inf
    for _ in range(200):
        F, G = rand_diagram(rng, 5), rand_diagram(rng, 5)
        gap = landscape_distance(F, G) - landscape_stability_rhs(F, G)
        worst = max(worst, gap)
        violations += gap > 1e-9
    ok = violations == 0
    record(8, ok, f"{violations} violations in 200 pairs; max lhs - rhs = {worst:.3e}")
    assert ok


def test_c09_persistence_engine(record):
    rng = np.random.Generator(np.random.Philox(109))
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(1, 17))
        f = rng.permutation(n) + rng.uniform(0, 0.5)
        mismatches += compute_persistence(build_path_filtration(f))[0] != brute_dim0(f)
    ring = 1.0 - np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], float)
    d1 = compute_persistence(build_cubical_filtration(ring))[1]
    ok = mismatches == 0 and d1.points.tolist() == [[0.0, 1.0]]
    record(9, ok, f"{mismatches}/500 dim-0 mismatches; ring dim-1 = {d1.points.tolist()}")
    assert ok


# --- end-to-end experiment and determinism, both through the command line ---

def shape_image(rng, ring: bool, size: int = 24) -> np.ndarray:
    """Low values on a filled disc or a thin annulus, background 1, Gaussian noise."""
    yy, xx = np.mgrid[0:size, 0:size]
    cx, cy = rng.uniform(size * 0.4, size * 0.6, 2)
    R = rng.uniform(size * 0.25, size * 0.35)
    r = np.hypot(xx - cx, yy - cy)
    shape = (np.abs(r - R) < 1.6) if ring else (r < R)
    return np.where(shape, 0.0, 1.0) + rng.normal(0, 0.15, (size, size))


def pssk_cli(*args, cwd):
    res = subprocess.run([sys.executable, "-m", "pssk.cli", *map(str, args)], cwd=cwd,
                         capture_output=True, text=True)
    return res


def desk_experiment(root: Path, seed: int = 0) -> tuple[str, float]:
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.Philox(seed))
    lines = []
    for cls in ("blob", "ring"):
        for i in range(30):
            name = f"{cls}{i:02d}"
            img = shape_image(rng, cls == "ring")
            (root / f"{name}.csv").write_text(
                "".join(",".join(format_real(v) for v in row) + "\n" for row in img))
            r = pssk_cli("diagram", "--input", f"{name}.csv", "--kind", "image", "--out", f"{name}_h{{dim}}.dgm",
                         cwd=root)
            assert r.returncode == 0, r.stderr
            lines.append(f"{name}_h1.dgm {cls}\n")
    (root / "manifest.txt").write_text("".join(lines))
    t0 = time.perf_counter()
    r = pssk_cli("classify", "cv", "--manifest", "manifest.txt", "--folds", "10",
                 "--c-grid", "0.1,1,10,100", "--sigma-grid", "0.001,0.01,0.1,1", "--seed", str(seed),
                 "--curve", "sigma_curve.csv", "--threads", "1", cwd=root)
    assert r.returncode == 0, r.stderr
    return r.stdout, time.perf_counter() - t0


def test_c10_desk_experiment(record, tmp_path):
    t0 = time.perf_counter()
    out, cv_time = desk_experiment(tmp_path / "e2e")
    total = time.perf_counter() - t0
    acc = float(next(ln.split()[1] for ln in out.splitlines() if ln.startswith("accuracy ")))
    ARTIFACTS.mkdir(parents=True, exist_ok=True)
    curve = (tmp_path / "e2e" / "sigma_curve.csv").read_text()
    (ARTIFACTS / "sigma_curve.csv").write_text(curve)
    ok = acc >= 0.90 and total < 300
    record(10, ok, f"10-fold CV accuracy {acc:.1%} (>= 90%), {total:.1f}s total (limit 300s); "
                   f"curve at build/acceptance/sigma_curve.csv")
    assert ok


def cli_suite(root: Path) -> dict[str, bytes]:
    """Run every subcommand once; return stdout of each command and every file written."""
    root.mkdir(parents=True)
    (root / "f.txt").write_text("2\n0\n3\n1\n4\n")
    (root / "img.csv").write_text("0,0,0\n0,1,0\n0,0,0\n")
    (root / "t.off").write_text("OFF\n4 2 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n3 0 1 2\n3 1 3 2\n")
    (root / "v.txt").write_text("0\n2\n1\n3\n")
    (root / "a.dgm").write_text("0 1\n")
    (root / "b.dgm").write_text("0 10\n0.5 2\n")
    rng = np.random.Generator(np.random.Philox(11))
    lines = []
    for i in range(12):
        b = rng.random(3)
        pts = np.column_stack([b, b + (3.0 if i % 2 else 0.3) * (1 + rng.random(3))])
        write_diagram_file(root / f"d{i}.dgm", PersistenceDiagram(pts))
        lines.append(f"d{i}.dgm {'xy'[i % 2]}\n")
    (root / "m.txt").write_text("".join(lines))
    (root / "labels.txt").write_text("".join(ln.split()[1] + "\n" for ln in lines))
    commands = [
        ["diagram", "--input", "f.txt", "--kind", "signal1d", "--out", "sig.dgm"],
        ["diagram", "--input", "img.csv", "--kind", "image", "--out", "img.dgm"],
        ["diagram", "--input", "t.off", "--kind", "mesh", "--values", "v.txt", "--out", "mesh_{dim}.dgm"],
        ["kernel", "--a", "a.dgm", "--b", "b.dgm", "--sigma", "0.5"],
        ["kernel", "--a", "a.dgm", "--b", "b.dgm", "--kind", "landscape"],
        ["gram", "--manifest", "m.txt", "--sigma", "0.5", "--out", "g.csv", "--export", "g.txt"],
        ["gram", "--manifest", "m.txt", "--kernel", "landscape", "--out", "gl.csv"],
        ["distance", "--a", "a.dgm", "--b", "b.dgm", "--p", "1"],
        ["distance", "--a", "a.dgm", "--b", "b.dgm", "--p", "inf"],
        ["distance", "--a", "a.dgm", "--b", "b.dgm", "--metric", "pssk", "--sigma", "1"],
        ["distance", "--manifest", "m.txt", "--p", "2", "--out", "w2.csv"],
        ["distance", "--manifest", "m.txt", "--metric", "landscape", "--out", "dl.csv", "--threads", "3"],
        ["landscape", "--input", "b.dgm", "--out", "l.csv"],
        ["feature-map", "--input", "b.dgm", "--sigma", "0.5", "--grid=-1,11,-1,11,24,24", "--out", "fm.pgm"],
        ["feature-map", "--input", "b.dgm", "--sigma", "0.5", "--grid=-1,11,-1,11,24,24", "--out", "fm.csv"],
        ["definiteness", "--matrix", "g.csv"],
        ["definiteness", "--matrix", "w2.csv", "--negate"],
        ["definiteness", "--search", "--p", "1", "--seed", "0", "--out", "witness"],
        ["classify", "cv", "--manifest", "m.txt", "--folds", "4", "--c-grid", "1,10", "--sigma-grid", "0.1,1",
         "--seed", "5", "--curve", "curve.csv"],
        ["classify", "train", "--manifest", "m.txt", "--sigma", "1", "--c", "10", "--model", "model.json"],
        ["classify", "predict", "--model", "model.json", "--manifest", "m.txt"],
        ["retrieval", "--matrix", "w2.csv", "--labels", "labels.txt"],
    ]
    outputs = {}
    for k, cmd in enumerate(commands):
        r = pssk_cli(*cmd, cwd=root)
        assert r.returncode == 0, (cmd, r.stderr)
        outputs[f"stdout[{k}] {cmd[0]}"] = r.stdout.encode()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            outputs[str(path.relative_to(root))] = path.read_bytes()
    return outputs


def test_c11_determinism(record, tmp_path):
    a = cli_suite(tmp_path / "run1")
    b = cli_suite(tmp_path / "run2")
    ea, _ = desk_experiment(tmp_path / "e2e1")
    eb, _ = desk_experiment(tmp_path / "e2e2")
    a["e2e stdout"], b["e2e stdout"] = ea.encode(), eb.encode()
    for d, tag in ((a, "e2e1"), (b, "e2e2")):
        for path in sorted((tmp_path / tag).rglob("*")):
            d[f"e2e/{path.name}"] = path.read_bytes()
    differing = [k for k in a if a[k] != b.get(k)]
    ok = a.keys() == b.keys() and not differing
    record(11, ok, f"{len(a)} outputs compared across two runs, {len(differing)} differ"
                   + (f": {differing[:5]}" if differing else ""))
    assert ok
