"""Readers and writers for the on-disk formats.

* model JSON: ``{"m", "n", "coeffs": [{"to": [i, t], "from": [j, s], "value"}], "noise_vars"}``
* samples CSV: one row per draw, columns ``p<i>_t<t>`` in time-major order
* weights CSV: square matrix with label row/column and a ``# units=nats; kind=...`` footer
* tree JSON: ``{"directed", "root", "edges", "score_nats", "labels"}``
* DOT export of trees
* ROC CSV: ``scorer,threshold,fpr,tpr`` rows plus ``# auc_<scorer>=<value>`` trailers

Lines starting with ``#`` are comments (manifest and footers) and are
ignored by every CSV reader here. All writers go through a temporary file
and an atomic rename.
"""

import csv
import hashlib
import io
import json
import os
import tempfile
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .info import WeightMatrix
from .model import GenerativeModel, ProcessLayout
from .trees import ProcessTree


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def file_digest(path):
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


# -- models -----------------------------------------------------------------

def model_from_dict(d):
    """Parse a model dictionary; errors name the offending field."""
    if not isinstance(d, dict):
        raise ValidationError("model: top level must be a JSON object")
    for key in ("m", "n"):
        if key not in d:
            raise ValidationError(f"model: missing field {key!r}")
        if not isinstance(d[key], int) or isinstance(d[key], bool) or d[key] < 1:
            raise ValidationError(f"model: field {key!r} must be a positive integer")
    m, n = d["m"], d["n"]
    layout = ProcessLayout(m, n)
    coeffs = d.get("coeffs", [])
    if not isinstance(coeffs, list):
        raise ValidationError("model: field 'coeffs' must be a list")
    A = np.zeros((layout.size, layout.size))
    for k, c in enumerate(coeffs):
        where = f"model: coeffs[{k}]"
        if not isinstance(c, dict):
            raise ValidationError(f"{where} must be an object")
        try:
            (i, t), (j, s) = c["to"], c["from"]
            value = float(c["value"])
        except KeyError as exc:
            raise ValidationError(f"{where} missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise ValidationError(f"{where} needs 'to'/'from' pairs and a numeric 'value'") from None
        if not all(isinstance(x, int) for x in (i, t, j, s)):
            raise ValidationError(f"{where}: coordinates must be integers")
        try:
            A[layout.flat(i, t), layout.flat(j, s)] += value
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from None
    noise = d.get("noise_vars", 1.0)
    if isinstance(noise, list):
        if len(noise) != layout.size:
            raise ValidationError(
                f"model: field 'noise_vars' has {len(noise)} entries, expected {layout.size}")
    elif not isinstance(noise, (int, float)) or isinstance(noise, bool):
        raise ValidationError("model: field 'noise_vars' must be a number or a list")
    try:
        noise = np.asarray(noise, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("model: field 'noise_vars' must hold numbers") from None
    return GenerativeModel(layout, A, noise)


def model_to_dict(model):
    lay = model.layout
    coeffs = [
        {"to": list(lay.coords(u)), "from": list(lay.coords(v)), "value": float(model.coeffs[u, v])}
        for u, v in zip(*np.nonzero(model.coeffs))
    ]
    noise = model.noise_vars
    noise = float(noise[0]) if np.all(noise == noise[0]) else noise.tolist()
    return {"m": lay.m, "n": lay.n, "coeffs": coeffs, "noise_vars": noise}


def read_model(path):
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"model: {path} is not valid JSON ({exc})") from None
    return model_from_dict(d)


def model_to_json(model, note=None):
    """Model JSON with one coefficient per line; ``note`` adds a free-text field readers ignore."""
    d = model_to_dict(model)
    head = [f'  "note": {json.dumps(note)},'] if note else []
    coeffs = ",\n".join("    " + json.dumps(c) for c in d["coeffs"])
    return "\n".join(["{", *head,
                      f'  "m": {d["m"]},', f'  "n": {d["n"]},',
                      '  "coeffs": [', coeffs, "  ],",
                      f'  "noise_vars": {json.dumps(d["noise_vars"])}', "}"]) + "\n"


def write_model(model, path, note=None):
    atomic_write(path, model_to_json(model, note))


def reference_model(name):
    """Load one of the bundled six-process reference networks, ``"h0"`` or ``"h1"``."""
    text = resources.files("causaltree").joinpath(f"data/reference_{name}.json").read_text()
    return model_from_dict(json.loads(text))


# -- samples ----------------------------------------------------------------

def _comments(manifest):
    return "".join(f"# {line}\n" for line in (manifest or []))


def samples_to_csv(samples, layout, manifest=None):
    buf = io.StringIO()
    buf.write(_comments(manifest))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(layout.labels())
    for row in np.asarray(samples):
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def _data_lines(text):
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def read_samples(path):
    lines = _data_lines(Path(path).read_text())
    rows = list(csv.reader(lines))
    return rows[0], np.array(rows[1:], dtype=float).reshape(len(rows) - 1, len(rows[0]))


# -- weights ----------------------------------------------------------------

def weights_to_csv(W, manifest=None):
    labels = W.labels()
    buf = io.StringIO()
    buf.write(_comments(manifest))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + labels)
    for lab, row in zip(labels, W.weights):
        w.writerow([lab] + [repr(float(x)) for x in row])
    buf.write(f"# units=nats; kind={W.kind}\n")
    return buf.getvalue()


def read_weights(path):
    text = Path(path).read_text()
    kind = None
    for ln in text.splitlines():
        if ln.startswith("#") and "kind=" in ln:
            kind = ln.split("kind=", 1)[1].split(";")[0].strip()
    if kind is None:
        raise ValidationError(f"weights: {path} has no '# units=nats; kind=...' footer")
    rows = list(csv.reader(_data_lines(text)))
    labels = rows[0][1:]
    if [r[0] for r in rows[1:]] != labels:
        raise ValidationError("weights: row labels do not match column labels")
    try:
        values = np.array([r[1:] for r in rows[1:]], dtype=float)
    except ValueError:
        raise ValidationError("weights: non-numeric entry") from None
    return WeightMatrix(kind, values), labels


# -- trees ------------------------------------------------------------------

def tree_to_dict(tree, labels=None, manifest=None):
    d = {
        "directed": tree.directed,
        "root": tree.root,
        "edges": [list(e) for e in tree.edges],
        "score_nats": tree.score,
        "labels": list(labels) if labels is not None else [str(k) for k in range(tree.node_count)],
    }
    if manifest:
        d["manifest"] = list(manifest)
    return d


def tree_from_dict(d):
    try:
        labels = d["labels"]
        return ProcessTree(len(labels), tuple(tuple(e) for e in d["edges"]), bool(d["directed"]),
                           d.get("root"), float(d.get("score_nats", 0.0)))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"tree: malformed tree JSON ({exc})") from None


def read_tree(path):
    try:
        return tree_from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"tree: {path} is not valid JSON ({exc})") from None


def tree_to_dot(tree, labels=None):
    labels = labels or [str(k) for k in range(tree.node_count)]
    kind, arrow = ("digraph", "->") if tree.directed else ("graph", "--")
    lines = [f"{kind} tree {{"]
    lines += [f'  n{k} [label="{lab}"];' for k, lab in enumerate(labels)]
    lines += [f"  n{a} {arrow} n{b};" for a, b in tree.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- ROC --------------------------------------------------------------------

def roc_to_csv(curves, manifest=None):
    buf = io.StringIO()
    buf.write(_comments(manifest))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scorer", "threshold", "fpr", "tpr"])
    for name, c in curves.items():
        for tau, f, t in zip(c.thresholds, c.fpr, c.tpr):
            w.writerow([name, repr(float(tau)), repr(float(f)), repr(float(t))])
    for name, c in curves.items():
        buf.write(f"# auc_{name}={c.auc!r}\n")
    return buf.getvalue()


def read_roc(path):
    """Return ``({scorer: array of (threshold, fpr, tpr)}, {scorer: auc})``."""
    text = Path(path).read_text()
    aucs = {}
    for ln in text.splitlines():
        if ln.startswith("# auc_"):
            key, val = ln[len("# auc_"):].split("=", 1)
            aucs[key] = float(val)
    rows = list(csv.DictReader(_data_lines(text)))
    curves = {}
    for r in rows:
        curves.setdefault(r["scorer"], []).append(
            (float(r["threshold"]), float(r["fpr"]), float(r["tpr"])))
    return {k: np.array(v) for k, v in curves.items()}, aucs
