"""Command line interface.

Subcommands:

* ``compute``: dissimilarity of two images, optionally writing witness
  heatmaps.
* ``warp``: write a randomly warped copy of an image.
* ``experiment warping|rotation|regularization``: the invariance
  experiments, emitting one CSV row per evaluation.

All commands are deterministic for a fixed ``--seed``.
"""

import argparse
import csv
import pathlib
import sys
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .core import DidConfig, did, did_sweep
from .errors import PowerIterationError, SingularKernelMatrixError
from .kernels import GAUSSIAN, LAPLACE, KernelSpec
from .signal import extract_patch, load_image, save_image
from .warp import apply_warp, random_warp_field, rmse, rotate

CSV_HEADER = [
    "experiment",
    "image_id",
    "parameter",
    "metric",
    "value",
    "seed",
    "n",
    "m_x",
    "m_y",
    "lambda",
]

DEFAULT_T_GRID = [10.0**k for k in range(-4, 3)]
DEFAULT_LAMBDA_GRID = [1e-4, 1e-3, 1e-2, 1e-1]
DEFAULT_ANGLES = [0.0, 45.0, 90.0, 135.0, 180.0]
ROTATION_LAMBDA = 1e-6


@dataclass
class ExperimentRow:
    """One CSV record of an experiment cell."""

    experiment: str
    image_id: str
    parameter: float
    metric: str
    value: float
    seed: int
    n: int
    m_x: int
    m_y: int
    lam: float

    def as_list(self):
        return [
            self.experiment,
            self.image_id,
            repr(float(self.parameter)),
            self.metric,
            repr(float(self.value)),
            str(int(self.seed)),
            str(int(self.n)),
            str(int(self.m_x)),
            str(int(self.m_y)),
            repr(float(self.lam)),
        ]


def write_rows(path, rows):
    """Write rows sorted into a stable order, so reruns are byte-identical."""
    rows = sorted(
        rows, key=lambda r: (r.experiment, r.image_id, r.parameter, r.metric, r.seed)
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_list())


def add_config_flags(parser, default_lambda=1e-2):
    parser.add_argument("--lambda", dest="lam", type=float, default=default_lambda,
                        help="regularization strength")
    parser.add_argument("--mx", type=int, default=100, help="input landmarks")
    parser.add_argument("--my", type=int, default=16**3, help="output landmarks")
    parser.add_argument("--sigma-x", type=float, default=1.0 / 6.0,
                        help="Gaussian bandwidth on coordinates")
    parser.add_argument("--a-y", type=float, default=5.0,
                        help="Laplace decay on values")
    parser.add_argument("--mask", choices=["blackman", "uniform"], default="blackman")
    parser.add_argument("--landmarks-x", choices=["grid", "random", "full"],
                        default="grid")
    parser.add_argument("--landmarks-y", choices=["cube", "random", "observed", "full"],
                        default="cube")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--normalize", action="store_true",
                        help="apply ImageNet channel normalization to inputs")


def config_from_args(args):
    return DidConfig(
        lam=args.lam,
        kernel_x=KernelSpec(GAUSSIAN, args.sigma_x),
        kernel_y=KernelSpec(LAPLACE, args.a_y),
        m_x=args.mx,
        m_y=args.my,
        landmarks_x=args.landmarks_x,
        landmarks_y=args.landmarks_y,
        mask=args.mask,
        seed=args.seed,
    )


def image_id(path):
    name = str(path).replace("\\", "/").rsplit("/", 1)[-1]
    return name.rsplit(".", 1)[0]


def save_heatmap(values, shape, path, threshold=None):
    """Min-max normalized grayscale heatmap of a sampled witness."""
    grid = np.asarray(values, dtype=np.float64).reshape(shape)
    span = grid.max() - grid.min()
    norm = (grid - grid.min()) / (span if span > 0 else 1.0)
    if threshold is not None:
        norm = np.where(norm >= threshold, norm, 0.0)
    Image.fromarray(np.rint(norm * 255.0).astype(np.uint8), mode="L").save(path)


def float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def cmd_compute(args):
    f = load_image(args.image_f, normalize=args.normalize)
    g = load_image(args.image_g, normalize=args.normalize)
    result = did(f, g, config_from_args(args))
    print(f"{result.value:.6g}")
    if args.witness:
        out = pathlib.Path(args.witness)
        out.mkdir(parents=True, exist_ok=True)
        save_heatmap(result.h_sampled, f.shape, out / "h.png", args.witness_threshold)
        save_heatmap(result.q_sampled, g.shape, out / "q.png", args.witness_threshold)
    return 0


def cmd_warp(args):
    signal = load_image(args.image, normalize=False)
    field = random_warp_field(*signal.shape, temperature=args.t, cutoff=args.c,
                              seed=args.seed)
    save_image(apply_warp(signal, field), args.out)
    return 0


def cmd_experiment_warping(args):
    signal = load_image(args.image, normalize=args.normalize)
    config = config_from_args(args)
    name = image_id(args.image)
    rows = []
    for t_index, temperature in enumerate(args.t_list):
        for rep in range(args.repeats):
            cell_seed = args.seed + 1000 * t_index + rep
            field = random_warp_field(*signal.shape, temperature=temperature,
                                      cutoff=args.c, seed=cell_seed)
            warped = apply_warp(signal, field)
            common = dict(
                experiment="warping", image_id=name, parameter=temperature,
                seed=cell_seed, n=signal.n, m_x=config.m_x, m_y=config.m_y,
                lam=config.lam,
            )
            rows.append(ExperimentRow(metric="did",
                                      value=did(signal, warped, config).value,
                                      **common))
            rows.append(ExperimentRow(metric="rmse", value=rmse(signal, warped),
                                      **common))
    write_rows(args.out, rows)
    return 0


def rotated_crop(signal, top, left, outer, inner, angle):
    """Rotate an outer patch, then crop its center to dodge edge artifacts."""
    patch = extract_patch(signal, top, left, outer)
    rotated = rotate(patch, angle) if angle != 0.0 else patch
    margin = (outer - inner) // 2
    return extract_patch(rotated, margin, margin, inner)


def most_textured_patch_outer(signal, outer, inner, rng, candidates=16):
    """Pick the outer-patch corner whose central crop is most textured."""
    h, w = signal.shape
    best, best_std = None, -1.0
    margin = (outer - inner) // 2
    for _ in range(candidates):
        top = int(rng.integers(0, h - outer + 1))
        left = int(rng.integers(0, w - outer + 1))
        crop = extract_patch(signal, top + margin, left + margin, inner)
        spread = float(crop.values.std())
        if spread > best_std:
            best, best_std = (top, left), spread
    return best


def sample_disjoint_pairs(signal, size, count, rng):
    """Pairs of patches with non-overlapping supports (unrelated content)."""
    h, w = signal.shape
    pairs = []
    while len(pairs) < count:
        t1, l1, t2, l2 = (
            int(rng.integers(0, h - size + 1)),
            int(rng.integers(0, w - size + 1)),
            int(rng.integers(0, h - size + 1)),
            int(rng.integers(0, w - size + 1)),
        )
        if abs(t1 - t2) < size and abs(l1 - l2) < size:
            continue
        pairs.append(
            (extract_patch(signal, t1, l1, size), extract_patch(signal, t2, l2, size))
        )
    return pairs


def cmd_experiment_rotation(args):
    signal = load_image(args.image, normalize=args.normalize)
    config = config_from_args(args)
    name = image_id(args.image)
    size = args.patch_size
    outer = int(np.ceil(size * np.sqrt(2))) + 2
    h, w = signal.shape
    if outer > min(h, w):
        raise ValueError(
            f"image {h}x{w} too small for a rotated {size}-patch (needs {outer})"
        )
    rng = np.random.default_rng(args.seed)
    top, left = most_textured_patch_outer(signal, outer, size, rng)
    reference = rotated_crop(signal, top, left, outer, size, 0.0)
    rows = []
    meta = dict(image_id=name, n=reference.n, m_x=config.m_x, m_y=config.m_y,
                lam=config.lam, seed=args.seed)
    for angle in args.angles:
        probe = rotated_crop(signal, top, left, outer, size, angle)
        rows.append(ExperimentRow(experiment="rotation", parameter=angle,
                                  metric="did",
                                  value=did(reference, probe, config).value, **meta))
        rows.append(ExperimentRow(experiment="rotation", parameter=angle,
                                  metric="rmse", value=rmse(reference, probe), **meta))
    for index, (p1, p2) in enumerate(
        sample_disjoint_pairs(signal, size, args.random_pairs, rng)
    ):
        rows.append(ExperimentRow(experiment="rotation_random", parameter=index,
                                  metric="did", value=did(p1, p2, config).value,
                                  **meta))
        rows.append(ExperimentRow(experiment="rotation_random", parameter=index,
                                  metric="rmse", value=rmse(p1, p2), **meta))
    write_rows(args.out, rows)
    return 0


def cmd_experiment_regularization(args):
    signal = load_image(args.image, normalize=args.normalize)
    config = config_from_args(args)
    name = image_id(args.image)
    lambdas = args.lambda_list
    rows = []
    for t_index, temperature in enumerate(args.t_list):
        for rep in range(args.repeats):
            cell_seed = args.seed + 1000 * t_index + rep
            field = random_warp_field(*signal.shape, temperature=temperature,
                                      cutoff=args.c, seed=cell_seed)
            warped = apply_warp(signal, field)
            values = did_sweep(signal, warped, lambdas, config)
            for lam, value in zip(lambdas, values):
                rows.append(ExperimentRow(
                    experiment="regularization", image_id=name,
                    parameter=temperature, metric="did", value=value,
                    seed=cell_seed, n=signal.n, m_x=config.m_x, m_y=config.m_y,
                    lam=lam,
                ))
    write_rows(args.out, rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="did",
        description="Diffeomorphism-invariant dissimilarity between images",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="dissimilarity of two images")
    p_compute.add_argument("image_f")
    p_compute.add_argument("image_g")
    p_compute.add_argument("--witness", default=None,
                           help="directory for h/q heatmap PNGs")
    p_compute.add_argument("--witness-threshold", type=float, default=None,
                           help="zero out normalized heatmap values below this")
    add_config_flags(p_compute)
    p_compute.set_defaults(func=cmd_compute)

    p_warp = sub.add_parser("warp", help="write a randomly warped copy")
    p_warp.add_argument("image")
    p_warp.add_argument("--t", type=float, required=True, help="warp temperature")
    p_warp.add_argument("--c", type=int, default=2, help="frequency cutoff")
    p_warp.add_argument("--seed", type=int, default=0)
    p_warp.add_argument("--out", required=True)
    p_warp.set_defaults(func=cmd_warp)

    p_exp = sub.add_parser("experiment", help="invariance experiments (CSV out)")
    exp_sub = p_exp.add_subparsers(dest="experiment", required=True)

    p_warping = exp_sub.add_parser("warping", help="dissimilarity vs warp strength")
    p_warping.add_argument("image")
    p_warping.add_argument("--t-list", type=float_list, default=DEFAULT_T_GRID)
    p_warping.add_argument("--repeats", type=int, default=50)
    p_warping.add_argument("--c", type=int, default=2)
    p_warping.add_argument("--out", required=True)
    add_config_flags(p_warping)
    p_warping.set_defaults(func=cmd_experiment_warping)

    p_rot = exp_sub.add_parser("rotation", help="rotated patch vs random patches")
    p_rot.add_argument("image")
    p_rot.add_argument("--patch-size", type=int, default=64)
    p_rot.add_argument("--angles", type=float_list, default=DEFAULT_ANGLES)
    p_rot.add_argument("--random-pairs", type=int, default=20)
    p_rot.add_argument("--out", required=True)
    add_config_flags(p_rot, default_lambda=ROTATION_LAMBDA)
    p_rot.set_defaults(func=cmd_experiment_rotation)

    p_reg = exp_sub.add_parser("regularization",
                               help="dissimilarity vs warp strength and lambda")
    p_reg.add_argument("image")
    p_reg.add_argument("--t-list", type=float_list, default=[1e-3, 1e-1, 10.0])
    p_reg.add_argument("--lambda-list", type=float_list, default=DEFAULT_LAMBDA_GRID)
    p_reg.add_argument("--repeats", type=int, default=10)
    p_reg.add_argument("--c", type=int, default=2)
    p_reg.add_argument("--out", required=True)
    add_config_flags(p_reg)
    p_reg.set_defaults(func=cmd_experiment_regularization)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, SingularKernelMatrixError,
            PowerIterationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
