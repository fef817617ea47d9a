"""Command-line interface: ``pssk <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.  Results go to files or
standard output, diagnostics to standard error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from .diagram import PersistenceDiagram, format_real, read_diagram_file, write_diagram_file
from .errors import PsskError
from .filtration import build_cubical_filtration, build_lower_star_filtration, build_path_filtration
from .gram import distance_matrix, export_gram, gram_matrix
from .indefiniteness import SEARCH_ITEMS, SEARCH_POINTS, indefiniteness_search
from .kernel import feature_map_raster, pssk_distance, pssk_eval
from .landscape import build_landscape, landscape_distance, landscape_kernel
from .linalg import definiteness_check
from .matching import parse_exponent, wasserstein_distance
from .persistence import compute_persistence
from .readers import (
    matrix_to_csv,
    raster_to_csv,
    raster_to_pgm,
    read_image,
    read_labels,
    read_manifest,
    read_matrix_csv,
    read_off,
    read_signal,
    write_text,
)
from .retrieval import RETRIEVAL_MEASURES, retrieval_eval
from .svm import BinarySvm, SvmModel, cross_validate, svm_predict, svm_train

__all__ = ["main", "run", "build_parser", "UsageError"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _real_list(s: str) -> list[float]:
    try:
        vals = [float(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _grid(s: str) -> tuple:
    parts = s.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("grid is xmin,xmax,ymin,ymax,nx,ny")
    try:
        return (*(float(t) for t in parts[:4]), int(parts[4]), int(parts[5]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {s!r}") from None


def _exponent(s: str) -> float:
    try:
        return parse_exponent(s)
    except PsskError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_precision(p):
    p.add_argument("--precision", type=_positive_int, default=17, help="significant digits (default 17)")


def _add_threads(p):
    p.add_argument("--threads", type=_positive_int, default=1, help="worker threads (default 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pssk", description="Persistence scale-space kernels and diagram tools.")
    sub = ap.add_subparsers(dest="command", metavar="<command>")
    sub.required = True

    p = sub.add_parser("diagram", help="persistence diagrams of a sublevel filtration")
    p.add_argument("--input", required=True, help="signal (one value per line), image (PGM P2/CSV) or OFF mesh")
    p.add_argument("--kind", required=True, choices=["signal1d", "image", "mesh"])
    p.add_argument("--values", help="per-vertex values for --kind mesh")
    p.add_argument("--out", required=True,
                   help="dimension-0 file; '{dim}' in the name is replaced per dimension, "
                        "otherwise higher dimensions go to <stem>.h<k><suffix>")
    _add_precision(p)

    p = sub.add_parser("kernel", help="kernel value between two diagrams")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kind", choices=["pssk", "landscape"], default="pssk")
    p.add_argument("--sigma", type=float, help="scale (pssk)")
    _add_precision(p)

    p = sub.add_parser("gram", help="Gram matrix over a manifest of diagrams")
    p.add_argument("--manifest", required=True, help="lines '<diagram path> [<label>]'")
    p.add_argument("--kernel", choices=["pssk", "landscape"], default="pssk")
    p.add_argument("--sigma", type=float)
    p.add_argument("--out", required=True, help="CSV output")
    p.add_argument("--export", help="also write the precomputed-kernel text format")
    _add_precision(p)
    _add_threads(p)

    p = sub.add_parser("distance", help="distance between two diagrams or over a manifest")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--a", help="first diagram (pair mode, with --b)")
    src.add_argument("--manifest", help="matrix mode")
    p.add_argument("--b")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--p", type=_exponent, help="Wasserstein exponent, 1..inf (inf = bottleneck)")
    how.add_argument("--metric", choices=["pssk", "landscape"])
    p.add_argument("--sigma", type=float)
    p.add_argument("--out", help="CSV output (matrix mode)")
    _add_precision(p)
    _add_threads(p)

    p = sub.add_parser("landscape", help="persistence landscape layers as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    _add_precision(p)

    p = sub.add_parser("feature-map", help="rasterise the kernel feature map")
    p.add_argument("--input", required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--grid", type=_grid, required=True, help="xmin,xmax,ymin,ymax,nx,ny (write --grid=... when xmin is negative)")
    p.add_argument("--out", required=True, help=".pgm or .csv")
    _add_precision(p)

    p = sub.add_parser("definiteness", help="eigen-analysis of a matrix, or witness search")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--matrix", help="CSV matrix (as written by gram/distance)")
    mode.add_argument("--search", action="store_true", help="search for a non-c.n.d. Wasserstein Gram")
    p.add_argument("--negate", action="store_true", help="analyse -M")
    p.add_argument("--exp", type=float, metavar="XI", help="analyse exp(-XI * M)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--p", type=_exponent, default=1.0)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--items", type=_positive_int, default=SEARCH_ITEMS)
    p.add_argument("--max-points", type=_positive_int, default=SEARCH_POINTS)
    p.add_argument("--max-trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for the witness diagrams and distance matrix")
    _add_precision(p)

    p = sub.add_parser("classify", help="SVM cross-validation, training and prediction")
    csub = p.add_subparsers(dest="mode", metavar="<mode>")
    csub.required = True
    q = csub.add_parser("cv", help="grid search by stratified k-fold accuracy")
    q.add_argument("--manifest", required=True)
    q.add_argument("--kernel", choices=["pssk", "landscape"], default="pssk")
    q.add_argument("--folds", type=_positive_int, default=10)
    q.add_argument("--c-grid", type=_real_list, default=[1.0])
    q.add_argument("--sigma-grid", type=_real_list, default=[1.0])
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--curve", help="write the sigma-accuracy curve CSV here")
    _add_precision(q)
    _add_threads(q)
    q = csub.add_parser("train", help="train on a labelled manifest")
    q.add_argument("--manifest", required=True)
    q.add_argument("--kernel", choices=["pssk", "landscape"], default="pssk")
    q.add_argument("--sigma", type=float)
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--model", required=True, help="JSON model output")
    _add_threads(q)
    q = csub.add_parser("predict", help="predict labels for a manifest")
    q.add_argument("--model", required=True)
    q.add_argument("--manifest", required=True)
    _add_threads(q)

    p = sub.add_parser("retrieval", help="NN/T1/T2/EM/DCG from a distance matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--labels", required=True, help="one label per line, in matrix order")
    _add_precision(p)
    return ap


def _need_sigma(args) -> float:
    if args.sigma is None:
        raise UsageError("--sigma is required for the pssk kernel")
    return args.sigma


def _dim_path(out: str, k: int) -> Path:
    if "{dim}" in out:
        return Path(out.replace("{dim}", str(k)))
    p = Path(out)
    return p if k == 0 else p.with_name(f"{p.stem}.h{k}{p.suffix}")


def _load_manifest(path):
    ids, paths, labels = read_manifest(path)
    return ids, [read_diagram_file(p) for p in paths], labels


def _require_labels(labels, path) -> list[str]:
    if any(lab is None for lab in labels):
        raise PsskError(f"{path}: every manifest line needs a label")
    return list(labels)


def _cmd_diagram(args) -> None:
    if args.kind == "signal1d":
        c = build_path_filtration(read_signal(args.input))
    elif args.kind == "image":
        c = build_cubical_filtration(read_image(args.input))
    else:
        if not args.values:
            raise UsageError("--values is required for --kind mesh")
        nv, tris = read_off(args.input)
        c = build_lower_star_filtration(nv, tris, read_signal(args.values))
    for k, D in enumerate(compute_persistence(c)):
        write_diagram_file(_dim_path(args.out, k), D, args.precision)


def _cmd_kernel(args) -> None:
    F, G = read_diagram_file(args.a), read_diagram_file(args.b)
    v = pssk_eval(F, G, _need_sigma(args)) if args.kind == "pssk" else landscape_kernel(F, G)
    print(format_real(v, args.precision))


def _cmd_gram(args) -> None:
    ids, diagrams, labels = _load_manifest(args.manifest)
    sigma = _need_sigma(args) if args.kernel == "pssk" else None
    G = gram_matrix(diagrams, args.kernel, sigma, ids, args.threads)
    write_text(args.out, matrix_to_csv(G.entries, ids, args.precision))
    if args.export:
        write_text(args.export, export_gram(G, _require_labels(labels, args.manifest), args.precision))


def _cmd_distance(args) -> None:
    metric = "wasserstein" if args.p is not None else args.metric
    sigma = _need_sigma(args) if metric == "pssk" else None
    if args.a is not None:
        if args.b is None:
            raise UsageError("--b is required with --a")
        F, G = read_diagram_file(args.a), read_diagram_file(args.b)
        if metric == "wasserstein":
            v = wasserstein_distance(F, G, args.p)
        elif metric == "pssk":
            v = pssk_distance(F, G, sigma)
        else:
            v = landscape_distance(F, G)
        print(format_real(v, args.precision))
        return
    if args.out is None:
        raise UsageError("--out is required with --manifest")
    ids, diagrams, _ = _load_manifest(args.manifest)
    D = distance_matrix(diagrams, metric, args.p, sigma, args.threads)
    write_text(args.out, matrix_to_csv(D, ids, args.precision))


def _cmd_landscape(args) -> None:
    write_text(args.out, build_landscape(read_diagram_file(args.input)).to_csv(args.precision))


def _cmd_feature_map(args) -> None:
    D = read_diagram_file(args.input)
    R = feature_map_raster(D, args.sigma, *args.grid)
    suffix = Path(args.out).suffix.lower()
    if suffix == ".pgm":
        write_text(args.out, raster_to_pgm(R))
    elif suffix == ".csv":
        write_text(args.out, raster_to_csv(R, args.precision))
    else:
        raise UsageError("--out must end in .pgm or .csv")


def _cmd_definiteness(args) -> None:
    if args.matrix:
        M, _ = read_matrix_csv(args.matrix)
        if args.negate:
            M = -M
        if args.exp is not None:
            M = np.exp(-args.exp * M)
        sys.stdout.write(definiteness_check(M, args.tol).to_text(args.precision))
        return
    w = indefiniteness_search(args.p, args.xi, args.items, args.seed, args.max_trials, args.max_points)
    fr = lambda x: format_real(x, args.precision)  # noqa: E731
    out = [f"p {fr(w.p)}", f"trial {w.trial}", f"items {len(w.diagrams)}", f"xi {fr(w.xi)}",
           "# -d", w.report_minus_d.to_text(args.precision).rstrip("\n"),
           "# exp(-xi d)", w.report_exp.to_text(args.precision).rstrip("\n")]
    sys.stdout.write("\n".join(out) + "\n")
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        ids = [f"d{i}.dgm" for i in range(len(w.diagrams))]
        for name, D in zip(ids, w.diagrams):
            write_diagram_file(d / name, D, args.precision)
        write_text(d / "distances.csv", matrix_to_csv(w.distances, ids, args.precision))
        write_text(d / "manifest.txt", "".join(f"{name}\n" for name in ids))


def _model_to_json(model: SvmModel, kernel: str, sigma, diagrams, labels) -> str:
    doc = {
        "kernel": kernel,
        "sigma": sigma,
        "C": model.C,
        "shift": model.shift,
        "classes": model.classes,
        "machines": [{"positive": m.positive, "negative": m.negative, "indices": m.indices.tolist(),
                      "coef": m.coef.tolist(), "bias": m.bias, "iterations": m.iterations}
                     for m in model.machines],
        "train": [{"dim": D.dim, "points": D.points.tolist(), "label": lab} for D, lab in zip(diagrams, labels)],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _model_from_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        machines = [BinarySvm(m["positive"], m["negative"], np.array(m["indices"], dtype=np.intp),
                              np.array(m["coef"], dtype=np.float64), float(m["bias"]), int(m["iterations"]))
                    for m in doc["machines"]]
        train = [PersistenceDiagram(np.array(t["points"], dtype=np.float64).reshape(-1, 2), t["dim"])
                 for t in doc["train"]]
        model = SvmModel(list(doc["classes"]), machines, float(doc["C"]), float(doc["shift"]), len(train))
        return model, doc["kernel"], doc["sigma"], train
    except (KeyError, TypeError, json.JSONDecodeError) as e:
        raise PsskError(f"{path}: not a model file ({e})") from None


def _cross_kernel(A, B, kernel: str, sigma) -> np.ndarray:
    if kernel == "pssk":
        return np.array([[pssk_eval(a, b, sigma) for b in B] for a in A])
    LA = [build_landscape(a) for a in A]
    LB = [build_landscape(b) for b in B]
    return np.array([[landscape_kernel(a, b) for b in LB] for a in LA])


def _cmd_classify(args) -> None:
    if args.mode == "cv":
        ids, diagrams, labels = _load_manifest(args.manifest)
        labels = _require_labels(labels, args.manifest)
        res = cross_validate(diagrams, labels, args.kernel, args.c_grid, args.sigma_grid,
                             args.folds, args.seed, args.threads)
        fr = lambda x: format_real(x, args.precision)  # noqa: E731
        lines = [f"best_C {fr(res.best_C)}",
                 f"best_sigma {'none' if res.best_sigma is None else fr(res.best_sigma)}",
                 f"accuracy {fr(res.best_accuracy)}"]
        lines += [f"fold {i} {fr(a)}" for i, a in enumerate(res.fold_accuracies)]
        lines.append("sigma,C,accuracy")
        lines += [f"{'none' if s is None else fr(s)},{fr(c)},{fr(a)}" for s, c, a in res.table]
        sys.stdout.write("\n".join(lines) + "\n")
        if args.curve:
            write_text(args.curve, res.curve_csv())
    elif args.mode == "train":
        ids, diagrams, labels = _load_manifest(args.manifest)
        labels = _require_labels(labels, args.manifest)
        sigma = _need_sigma(args) if args.kernel == "pssk" else None
        G = gram_matrix(diagrams, args.kernel, sigma, ids, args.threads)
        model = svm_train(G, labels, args.c)
        write_text(args.model, _model_to_json(model, args.kernel, sigma, diagrams, labels))
    else:
        model, kernel, sigma, train = _model_from_json(args.model)
        ids, diagrams, _ = _load_manifest(args.manifest)
        pred = svm_predict(model, _cross_kernel(diagrams, train, kernel, sigma))
        sys.stdout.write("".join(f"{i} {lab}\n" for i, lab in zip(ids, pred)))


def _cmd_retrieval(args) -> None:
    M, _ = read_matrix_csv(args.matrix)
    labels = read_labels(args.labels)
    res = retrieval_eval(M, labels)
    sys.stdout.write(",".join(RETRIEVAL_MEASURES) + "\n")
    sys.stdout.write(",".join(format_real(res[k], args.precision) for k in RETRIEVAL_MEASURES) + "\n")


COMMANDS = {
    "diagram": _cmd_diagram,
    "kernel": _cmd_kernel,
    "gram": _cmd_gram,
    "distance": _cmd_distance,
    "landscape": _cmd_landscape,
    "feature-map": _cmd_feature_map,
    "definiteness": _cmd_definiteness,
    "classify": _cmd_classify,
    "retrieval": _cmd_retrieval,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda m, c, f, l, file=None, line=None: print(
                f"warning: {m}", file=sys.stderr)
            COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (PsskError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
