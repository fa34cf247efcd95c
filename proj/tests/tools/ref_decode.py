#!/usr/bin/env python3
"""Decode an image with Pillow and print 'W H' then the gray bytes as hex."""
import sys

from PIL import Image

img = Image.open(sys.argv[1])
if img.mode not in ("L", "RGB"):
    img = img.convert("RGB")
if img.mode == "RGB":
    img = img.convert("L")
sys.stdout.write(f"{img.width} {img.height}\n{img.tobytes().hex()}\n")
