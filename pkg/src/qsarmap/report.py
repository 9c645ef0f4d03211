"""On-disk artifacts: scatter SVGs, embedding CSVs and the JSON report.

Embedding CSV
    Header ``id,c1[,c2],label``; coordinates in shortest round-trip decimal
    form; ``label`` is the class name.

Scatter SVG
    Positive class as red crosses (``<g class="marker cross">``), negative
    class as blue asterisks (``<g class="marker asterisk">``), one group per
    compound. 1-D embeddings are plotted against the 1-based compound index.

Report JSON
    See ``REPORT_SCHEMA_VERSION`` and README.md for the key layout. Keys are
    sorted and no timestamps are written, so identical runs give identical
    bytes.
"""

import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

REPORT_SCHEMA_VERSION = 1

POSITIVE_COLOR = "#d62728"
NEGATIVE_COLOR = "#1f5fbf"
MARKER_SIZE = 4.0
WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=70, right=150, top=40, bottom=55)

METHOD_TITLES = {"pca": "PCA", "nlpca": "Nonlinear PCA", "sammon": "Sammon mapping"}


def artifact_stem(method, k):
    return f"{method}_{k}d"


def write_embedding_csv(embedding, compound_ids, labels, path):
    coords = embedding.coords
    y = labels.labels
    names = labels.class_names
    header = ["id"] + [f"c{j + 1}" for j in range(coords.shape[1])] + ["label"]
    lines = [",".join(header)]
    for cid, row, positive in zip(compound_ids, coords, y):
        cells = [cid, *(repr(float(v)) for v in row), names[0] if positive else names[1]]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_embedding_csv(path):
    """Inverse of :func:`write_embedding_csv`.

    Returns
    -------
    ids : list of str
    coords : ndarray, shape (N, k)
    labels : list of str
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    ids, coords, labels = [], [], []
    for line in lines[1:]:
        cells = line.split(",")
        ids.append(cells[0])
        coords.append([float(c) for c in cells[1:-1]])
        labels.append(cells[-1])
    return ids, np.array(coords), labels


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def _limits(v):
    lo, hi = float(np.min(v)), float(np.max(v))
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _cross(x, y, r):
    return (f'<line x1="{x - r:.2f}" y1="{y - r:.2f}" x2="{x + r:.2f}" y2="{y + r:.2f}"/>'
            f'<line x1="{x - r:.2f}" y1="{y + r:.2f}" x2="{x + r:.2f}" y2="{y - r:.2f}"/>')


def _asterisk(x, y, r):
    return (_cross(x, y, r * 0.75)
            + f'<line x1="{x - r:.2f}" y1="{y:.2f}" x2="{x + r:.2f}" y2="{y:.2f}"/>'
            + f'<line x1="{x:.2f}" y1="{y - r:.2f}" x2="{x:.2f}" y2="{y + r:.2f}"/>')


def emit_scatter_svg(embedding, labels, path, method=None):
    """Write a standalone SVG scatter plot of a 1-D or 2-D embedding."""
    coords = embedding.coords
    k = coords.shape[1]
    if k not in (1, 2):
        raise ValueError(f"can only plot 1-D or 2-D embeddings, got k={k}")
    method = method or embedding.method
    title = METHOD_TITLES.get(method, method)
    n = coords.shape[0]
    if k == 1:
        xs, ys = np.arange(1, n + 1, dtype=float), coords[:, 0]
        xlabel, ylabel = "compound index", f"{title} component 1"
    else:
        xs, ys = coords[:, 0], coords[:, 1]
        xlabel, ylabel = f"{title} component 1", f"{title} component 2"

    x0, x1 = _limits(xs)
    y0, y1 = _limits(ys)
    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    pos_name, neg_name = (escape(s) for s in labels.class_names)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{left + pw / 2:.2f}" y="24" text-anchor="middle" font-size="14">'
        f'{escape(title)} ({k}-dimensional output)</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{left - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle">'
               f'{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.2f})">{escape(ylabel)}</text>')

    for xv, yv, positive in zip(xs, ys, labels.labels):
        if positive:
            out.append(f'<g class="marker cross" stroke="{POSITIVE_COLOR}" stroke-width="1.5">'
                       f'{_cross(sx(xv), sy(yv), MARKER_SIZE)}</g>')
        else:
            out.append(f'<g class="marker asterisk" stroke="{NEGATIVE_COLOR}" stroke-width="1.2">'
                       f'{_asterisk(sx(xv), sy(yv), MARKER_SIZE)}</g>')

    lx, ly = left + pw + 20, top + 14
    out.append(f'<g class="legend-cross" stroke="{POSITIVE_COLOR}" stroke-width="1.5">'
               f'{_cross(lx, ly, MARKER_SIZE)}</g>')
    out.append(f'<text x="{lx + 10}" y="{ly + 4}">{pos_name}</text>')
    out.append(f'<g class="legend-asterisk" stroke="{NEGATIVE_COLOR}" stroke-width="1.2">'
               f'{_asterisk(lx, ly + 20, MARKER_SIZE)}</g>')
    out.append(f'<text x="{lx + 10}" y="{ly + 24}">{neg_name}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def _clean(obj):
    """Make a structure JSON-safe: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else None
    return obj


def build_report(report, metadata):
    """Assemble the JSON document for a :class:`SeparabilityReport`.

    ``metadata`` supplies ``config``, ``dataset``, ``labeling``, ``traces``,
    ``warnings`` and ``files``; missing sections are written empty.
    """
    verdicts = {artifact_stem(m.method, m.k): m.verdict for m in report.metrics}
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": metadata.get("config", {}),
        "dataset": metadata.get("dataset", {}),
        "labeling": metadata.get("labeling", {}),
        "metrics": [m.as_dict() for m in report.metrics],
        "ranking": {str(k): v for k, v in report.ranking.items()},
        "verdicts": verdicts,
        "traces": metadata.get("traces", {}),
        "warnings": list(metadata.get("warnings", [])),
        "files": metadata.get("files", {}),
    }
    return _clean(doc)


def emit_report_json(report, metadata, path):
    doc = build_report(report, metadata)
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")
    return doc
