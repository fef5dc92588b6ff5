"""Minimal SVG rendering of rate regions (diagnostic only)."""

from xml.sax.saxutils import escape

import numpy as np

__all__ = ['regions_svg']

_STYLE = {
    'suspicious_raw': ('none', '#1f77b4'),
    'suspicious_nullspace': ('none', '#1f77b4'),
    'suspicious_hulled': ('none', '#17becf'),
    'eaves_mmse': ('none', '#d62728'),
    'eaves_sic': ('none', '#ff7f0e'),
    'eaves_sic_hulled': ('none', '#ff7f0e'),
    'eaves_si_lowerbound': ('none', '#9467bd'),
    'intersection': ('#2ca02c', '#2ca02c'),
}


def _nice_ticks(hi, n=5):
    if hi <= 0:
        return [0.0]
    raw = hi / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    return list(np.arange(0.0, hi + 0.5 * step, step))


def regions_svg(regions, width=520, height=400, title=''):
    """
    Render `regions` (a mapping ``name -> RateRegion``) to an SVG string.

    Outlines are drawn as closed polylines; the intersection is filled.
    """
    pad_l, pad_r, pad_t, pad_b = 56, 140, 28, 44
    pts = [r.outline() for r in regions.values() if not r.is_empty]
    allp = np.vstack(pts) if pts else np.zeros((1, 2))
    xmax = max(float(allp[:, 0].max()), 1e-9) * 1.05
    ymax = max(float(allp[:, 1].max()), 1e-9) * 1.05
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def sx(x):
        return pad_l + pw * x / xmax

    def sy(y):
        return pad_t + ph * (1 - y / ymax)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
           f'height="{height}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{pad_l}" y="16">{escape(title)}</text>')
    x0, y0 = sx(0), sy(0)
    out.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{sx(xmax):.1f}" '
               f'y2="{y0:.1f}" stroke="black"/>')
    out.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" '
               f'y2="{sy(ymax):.1f}" stroke="black"/>')
    for t in _nice_ticks(xmax / 1.05):
        out.append(f'<line x1="{sx(t):.1f}" y1="{y0:.1f}" x2="{sx(t):.1f}" '
                   f'y2="{y0 + 4:.1f}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.1f}" y="{y0 + 16:.1f}" '
                   f'text-anchor="middle">{t:.3g}</text>')
    for t in _nice_ticks(ymax / 1.05):
        out.append(f'<line x1="{x0 - 4:.1f}" y1="{sy(t):.1f}" x2="{x0:.1f}" '
                   f'y2="{sy(t):.1f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 7:.1f}" y="{sy(t) + 4:.1f}" '
                   f'text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{pad_l + pw / 2:.1f}" y="{height - 8}" '
               'text-anchor="middle">R1 (bits/s/Hz)</text>')
    out.append(f'<text x="14" y="{pad_t + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 14 {pad_t + ph / 2:.1f})">'
               'R2 (bits/s/Hz)</text>')

    for i, (name, r) in enumerate(regions.items()):
        fill, stroke = _STYLE.get(r.kind.value, ('none', 'gray'))
        if not r.is_empty:
            poly = ' '.join(f'{sx(x):.2f},{sy(y):.2f}' for x, y in r.outline())
            opacity = ' fill-opacity="0.35"' if fill != 'none' else ''
            out.append(f'<polygon points="{poly}" fill="{fill}"{opacity} '
                       f'stroke="{stroke}" stroke-width="1.5"/>')
        ly = pad_t + 14 * i + 8
        lx = width - pad_r + 12
        label = escape(name + (' (empty)' if r.is_empty else ''))
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 16}" y2="{ly - 4}" '
                   f'stroke="{stroke}" stroke-width="3"/>')
        out.append(f'<text x="{lx + 22}" y="{ly}">{label}</text>')
    out.append('</svg>')
    return '\n'.join(out) + '\n'
