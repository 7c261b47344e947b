"""Command-line entry point: ``poseformat {info,convert,normalize,augment,render,bench}``.

Exit status is 2 for usage errors and 1 for data errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import codec
from .bench import DEFAULT_FRAMES, DEFAULT_REPS, bench_run
from .errors import PoseError
from .openpose import load_openpose_json, parse_openpose, parse_openpose_directory
from .ops import AugmentationSpec, NormalizationInfo, augment, normalize
from .render import RenderOptions, render_gif, save_png_frames

log = logging.getLogger("poseformat")


class UsageError(Exception):
    pass


def _point_name(text: str) -> tuple[str, str]:
    component, sep, point = text.partition(":")
    if not sep or not component or not point:
        raise argparse.ArgumentTypeError(f"expected COMPONENT:POINT, got {text!r}")
    return component, point


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_info(args) -> int:
    pose = codec.load(args.file)
    h, b = pose.header, pose.body
    print(f"version: {h.version:.4g}")
    print(f"dimensions: {h.width}x{h.height}x{h.depth}")
    print(f"dims: {h.dims}")
    print(f"components: {len(h.components)}")
    for c in h.components:
        print(f"  {c.name} ({c.format}): {len(c.points)} points, "
              f"{len(c.limbs)} limbs, {len(c.colors)} colors")
    print(f"points: {h.total_points}")
    print(f"frames: {b.frames}")
    print(f"people: {b.people}")
    print(f"fps: {b.fps}")
    return 0


def cmd_convert(args) -> int:
    src = Path(args.input)
    if src.is_dir():
        pose = parse_openpose_directory(src, args.fps, args.width, args.height, args.max_people)
    else:
        pose = parse_openpose(load_openpose_json(src), args.fps, args.width, args.height,
                              args.max_people)
    codec.save(pose, args.out)
    log.info("wrote %s (%d frames)", args.out, pose.body.frames)
    return 0


def cmd_normalize(args) -> int:
    pose = codec.load(args.input)
    codec.save(normalize(pose, NormalizationInfo(args.left, args.right)), args.out)
    return 0


def cmd_augment(args) -> int:
    try:
        spec = AugmentationSpec.from_dict(json.loads(Path(args.spec).read_text()))
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise PoseError(f"{args.spec}: bad augmentation spec ({e})") from e
    codec.save(augment(codec.load(args.input), spec), args.out)
    return 0


def cmd_render(args) -> int:
    pose = codec.load(args.input)
    opts = RenderOptions(scale=args.scale, point_radius=args.radius,
                         offset=tuple(args.offset), person=args.person)
    if args.gif:
        render_gif(pose, args.gif, opts)
    else:
        save_png_frames(pose, args.frames, opts)
    return 0


def cmd_bench(args) -> int:
    report = bench_run(args.frames_list, args.reps)
    print(report.to_table())
    if args.out:
        Path(args.out).write_text(report.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poseformat", description="Read, write, transform and render .pose files.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="describe a .pose file")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("convert", help="convert OpenPose JSON to .pose")
    p.add_argument("--from", dest="source", choices=["openpose"], required=True)
    p.add_argument("--input", required=True, help="directory of per-frame files or one JSON file")
    p.add_argument("--fps", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--max-people", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("normalize", help="scale/shift by two reference points")
    p.add_argument("--left", type=_point_name, required=True, metavar="COMPONENT:POINT")
    p.add_argument("--right", type=_point_name, required=True, metavar="COMPONENT:POINT")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("augment", help="apply an augmentation pipeline from JSON")
    p.add_argument("--spec", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("render", help="draw frames as PNGs or an animated GIF")
    p.add_argument("--in", dest="input", required=True)
    out = p.add_mutually_exclusive_group(required=True)
    out.add_argument("--gif")
    out.add_argument("--frames", metavar="OUTDIR")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--offset", type=float, nargs=2, default=(0.0, 0.0), metavar=("X", "Y"))
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--person", type=int, default=None)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="compare .pose and OpenPose JSON size and read speed")
    p.add_argument("--frames-list", type=_int_list, default=list(DEFAULT_FRAMES))
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (PoseError, ValueError, IndexError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
