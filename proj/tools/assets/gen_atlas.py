#!/usr/bin/env python3
"""Render the monospaced glyph atlas (assets/glyphs.pgm + assets/glyphs.txt).

Each glyph is rasterized from DejaVu Sans Mono Bold, thresholded to a binary
bitmap (0 = ink, 255 = paper) and shifted so its ink box is horizontally
centred in the cell. All glyphs share one baseline row.
"""
import argparse
import string

from PIL import Image, ImageDraw, ImageFont

CHARSET = string.ascii_uppercase + string.ascii_lowercase + string.digits


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--font", default="/usr/share/fonts/truetype/dejavu/DejaVuSansMono-Bold.ttf")
    ap.add_argument("--size", type=int, default=20)
    ap.add_argument("--cell-w", type=int, default=16)
    ap.add_argument("--cell-h", type=int, default=24)
    ap.add_argument("--baseline", type=int, default=18)
    ap.add_argument("--out", default="assets/glyphs")
    args = ap.parse_args()

    font = ImageFont.truetype(args.font, args.size)
    cw, ch = args.cell_w, args.cell_h
    strip = Image.new("L", (cw * len(CHARSET), ch), 255)
    lines = [f"cell {cw} {ch} baseline {args.baseline}"]
    for i, c in enumerate(CHARSET):
        canvas = Image.new("L", (cw * 3, ch * 2), 255)
        ImageDraw.Draw(canvas).text((cw, args.baseline + ch // 2), c, font=font, fill=0, anchor="ls")
        bw = canvas.point(lambda v: 0 if v < 128 else 255)
        left, top, right, bottom = bw.point(lambda v: 255 - v).getbbox()
        ink_w = right - left
        if ink_w > cw or bottom - (ch // 2) > ch or top < ch // 2:
            raise SystemExit(f"glyph {c!r} does not fit the cell")
        dst_left = (cw - ink_w) // 2
        glyph = bw.crop((left, ch // 2, right, ch // 2 + ch))
        strip.paste(glyph, (i * cw + dst_left, 0))
        lines.append(f"{c} {i * cw} {cw}")
    strip.save(args.out + ".pgm")
    with open(args.out + ".txt", "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
