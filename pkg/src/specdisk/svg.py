"""Static SVG figures: Gershgorin disks in blue, eigenvalues in red."""
from __future__ import annotations

import numpy as np

WIDTH = 480
HEIGHT = 640
PAD = 40
MIN_RADIUS_PX = 2.5
POINT_RADIUS_PX = 2.0
DISK_STYLE = 'fill="#1f5fbf" fill-opacity="0.18" stroke="#1f5fbf" stroke-width="1"'
POINT_STYLE = 'fill="#d62020" stroke="none"'


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _extent(centers, radii, ev):
    im_lo = [c - r for c, r in zip(centers, radii)] + [z.imag for z in ev]
    im_hi = [c + r for c, r in zip(centers, radii)] + [z.imag for z in ev]
    re_hi = [r for r in radii] + [abs(z.real) for z in ev]
    y0, y1 = (min(im_lo), max(im_hi)) if im_lo else (-1.0, 1.0)
    x1 = max(re_hi) if re_hi else 0.0
    if y1 - y0 <= 0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    if x1 <= 0:
        x1 = 0.05 * (y1 - y0)
    return -x1, x1, y0, y1


def figure(centers, radii, eigenvalues=(), title: str = "") -> str:
    """SVG of disks (i*center, radius) and eigenvalues in the complex plane.

    Axes share one scale, so disks stay circular; disks of zero (or
    sub-pixel) radius are drawn at a small visible size.
    """
    centers = [float(c) for c in np.asarray(centers, dtype=float)]
    radii = [float(r) for r in np.asarray(radii, dtype=float)]
    ev = [complex(z) for z in np.asarray(eigenvalues, dtype=complex).ravel()]
    x0, x1, y0, y1 = _extent(centers, radii, ev)

    w, h = WIDTH - 2 * PAD, HEIGHT - 2 * PAD
    scale = min(w / (x1 - x0), h / (y1 - y0))
    cx = 0.5 * (x0 + x1)
    cy = 0.5 * (y0 + y1)

    def px(re, im):
        return WIDTH / 2 + (re - cx) * scale, HEIGHT / 2 - (im - cy) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{PAD}" y="{PAD / 2}" font-family="sans-serif" font-size="13">{_escape(title)}</text>')

    # axes through the origin when it is in view, else along the frame
    ax_x, ax_y = px(0.0, 0.0)
    ax_x = min(max(ax_x, PAD), WIDTH - PAD)
    ax_y = min(max(ax_y, PAD), HEIGHT - PAD)
    out.append(f'<line x1="{PAD}" y1="{_fmt(ax_y)}" x2="{WIDTH - PAD}" y2="{_fmt(ax_y)}" stroke="black" stroke-width="0.8"/>')
    out.append(f'<line x1="{_fmt(ax_x)}" y1="{PAD}" x2="{_fmt(ax_x)}" y2="{HEIGHT - PAD}" stroke="black" stroke-width="0.8"/>')
    out.append(f'<text x="{WIDTH - PAD + 4}" y="{_fmt(ax_y + 4)}" font-family="sans-serif" font-size="11">Re</text>')
    out.append(f'<text x="{_fmt(ax_x - 6)}" y="{PAD - 6}" font-family="sans-serif" font-size="11">Im</text>')
    for val, label in ((y0, f"{y0:.3g}"), (y1, f"{y1:.3g}")):
        _, yy = px(0.0, val)
        out.append(f'<text x="{_fmt(ax_x + 4)}" y="{_fmt(yy)}" font-family="sans-serif" font-size="10">{label}</text>')

    out.append('<g id="disks">')
    for c, r in zip(centers, radii):
        x, y = px(0.0, c)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(max(r * scale, MIN_RADIUS_PX))}" {DISK_STYLE}/>')
    out.append("</g>")
    out.append('<g id="eigenvalues">')
    for z in ev:
        x, y = px(z.real, z.imag)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{POINT_RADIUS_PX}" {POINT_STYLE}/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
