"""Write SVG snapshots of the bundled families.

Usage: python scripts/render_gallery.py [--out gallery] [--res 120]
"""

import argparse
import pathlib

from spectracon.families import disk_pair
from spectracon.pencil import elliptope_pencil
from spectracon.render import render_projection, render_slice


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="gallery")
    ap.add_argument("--res", type=int, default=120)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for nu in (0.7, 1.0):
        inner, _ = disk_pair(nu)
        path = out / f"disk_{nu:.1f}.svg"
        render_slice(inner, path, box=(-1.2, 1.2), res=args.res)
        print("wrote", path)

    path = out / "elliptope_slice.svg"
    render_slice(elliptope_pencil(3), path, axes=(0, 1), res=args.res)
    print("wrote", path)

    path = out / "elliptope_shadow.svg"
    render_projection(elliptope_pencil(3), path, axes=(0, 1),
                      res=min(args.res, 48))
    print("wrote", path)


if __name__ == "__main__":
    main()
