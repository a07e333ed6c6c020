"""Versioned text serialization of trained classifiers.

Every float is written with float.hex(), so a model written and read
back predicts bit-for-bit identically.  The format is line oriented:
a header line, then "key value..." records, with matrix records
carrying their row and column counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baselines import LdaModel, SvmModel, lda_predict, lda_score, \
    svm_predict, svm_score
from .data import Normalizer, normalize_features
from .discriminators import Discriminator, discriminate, discriminator_score
from .kernel import KernelLccModel, KernelSpec, kpredict, kscore, ktransform
from .lcc import FqccModel, LccModel, fqcc_predict, fqcc_score, predict, \
    score, transform

FORMAT_HEADER = "lcckit-model"
FORMAT_VERSION = 1

KIND_NAMES = ("lcc", "fqcc", "klcc", "lda", "svm")


class ModelIoError(ValueError):
    """Unreadable, unsupported, or inconsistent model file."""


@dataclass(frozen=True)
class SavedClassifier:
    """A trained model plus everything predict needs on raw input rows."""

    kind: str
    model: object
    discriminator: Discriminator | None = None
    normalizer: Normalizer | None = None
    kept_columns: np.ndarray | None = None
    original_n: int | None = None


def _hex(x: float) -> str:
    return float(x).hex()


def _hex_vec(v) -> str:
    return " ".join(_hex(x) for x in np.asarray(v, dtype=np.float64))


def _parse_floats(tokens) -> np.ndarray:
    try:
        return np.array([float.fromhex(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ModelIoError(f"bad float field: {exc}") from None


def _emit_model(kind: str, model, out: list[str]) -> None:
    if kind == "lcc":
        out.append(f"beta {_hex_vec(model.beta)}")
        out.append(f"c_neg_hat {_hex(model.c_neg_hat)}")
        out.append(f"c_pos_hat {_hex(model.c_pos_hat)}")
        out.append(f"l_hat {_hex(model.l_hat)}")
        out.append(f"lam {_hex(model.lam)}")
        out.append(f"sigma {_hex(model.sigma)}")
        out.append(f"epsilons {_hex_vec(model.epsilons)}")
    elif kind == "fqcc":
        out.append(f"beta {_hex_vec(model.beta)}")
        out.append(f"c_neg_hat {_hex(model.c_neg_hat)}")
        out.append(f"c_pos_hat {_hex(model.c_pos_hat)}")
        out.append(f"lam {_hex(model.lam)}")
        out.append(f"sigma {_hex(model.sigma)}")
        out.append(f"objective {_hex(model.objective)}")
    elif kind == "klcc":
        rows, cols = model.train_features.shape
        out.append(f"kernel {model.spec.kind}")
        if model.spec.rbf_width is not None:
            out.append(f"rbf_width {_hex(model.spec.rbf_width)}")
        out.append(f"alphas {_hex_vec(model.alphas)}")
        out.append(f"train_features {rows} {cols}")
        for row in model.train_features:
            out.append(_hex_vec(row))
        out.append(f"c_neg_hat {_hex(model.c_neg_hat)}")
        out.append(f"c_pos_hat {_hex(model.c_pos_hat)}")
        out.append(f"l_hat {_hex(model.l_hat)}")
        out.append(f"lam {_hex(model.lam)}")
        out.append(f"sigma {_hex(model.sigma)}")
        out.append(f"epsilons {_hex_vec(model.epsilons)}")
    elif kind == "lda":
        out.append(f"weight {_hex_vec(model.weight)}")
        out.append(f"k {_hex(model.k)}")
        out.append(f"lambda_reg {_hex(model.lambda_reg)}")
    elif kind == "svm":
        out.append(f"weight {_hex_vec(model.weight)}")
        out.append(f"intercept {_hex(model.intercept)}")
        out.append(f"lam {_hex(model.lam)}")
    else:
        raise ModelIoError(f"unknown model kind {kind!r}")


def save_classifier(path: str, saved: SavedClassifier) -> None:
    if saved.kind not in KIND_NAMES:
        raise ModelIoError(f"unknown model kind {saved.kind!r}")
    out = [f"{FORMAT_HEADER} {FORMAT_VERSION}", f"kind {saved.kind}"]
    if saved.original_n is not None:
        out.append(f"original_n {saved.original_n}")
    if saved.kept_columns is not None:
        cols = " ".join(str(int(c)) for c in saved.kept_columns)
        out.append(f"kept_columns {cols}")
    if saved.normalizer is not None:
        out.append(f"normalizer_means {_hex_vec(saved.normalizer.means)}")
        out.append(f"normalizer_stds {_hex_vec(saved.normalizer.stds)}")
    _emit_model(saved.kind, saved.model, out)
    d = saved.discriminator
    if d is not None:
        out.append(f"discriminator {d.kind}")
        if d.kind == "dist":
            out.append(f"d_threshold {_hex(d.threshold)}")
        elif d.kind == "one_nn":
            out.append(f"d_values {_hex_vec(d.values)}")
            labs = " ".join(str(int(v)) for v in d.labels)
            out.append(f"d_labels {labs}")
        else:
            out.append(f"d_scale {_hex(d.scale)}")
            out.append(f"d_weight {_hex(d.weight)}")
            out.append(f"d_intercept {_hex(d.intercept)}")
            out.append(f"d_h {_hex(d.h)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


class _Records:
    """Sequential access to the parsed "key tokens..." lines."""

    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def peek_key(self) -> str | None:
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos].split(None, 1)[0]

    def take(self, key: str) -> list[str]:
        if self.peek_key() != key:
            raise ModelIoError(
                f"expected field {key!r}, found "
                f"{self.peek_key()!r} (line {self.pos + 1})")
        tokens = self.lines[self.pos].split()[1:]
        self.pos += 1
        return tokens

    def take_raw(self) -> list[str]:
        tokens = self.lines[self.pos].split()
        self.pos += 1
        return tokens

    def maybe(self, key: str) -> list[str] | None:
        if self.peek_key() == key:
            return self.take(key)
        return None


def _scalar(records: _Records, key: str) -> float:
    tokens = records.take(key)
    if len(tokens) != 1:
        raise ModelIoError(f"field {key!r} must hold one value")
    return float(_parse_floats(tokens)[0])


def _read_model(kind: str, records: _Records):
    if kind == "lcc":
        beta = _parse_floats(records.take("beta"))
        return LccModel(beta, _scalar(records, "c_neg_hat"),
                        _scalar(records, "c_pos_hat"),
                        _scalar(records, "l_hat"),
                        _scalar(records, "lam"), _scalar(records, "sigma"),
                        _parse_floats(records.take("epsilons")))
    if kind == "fqcc":
        beta = _parse_floats(records.take("beta"))
        return FqccModel(beta, _scalar(records, "c_neg_hat"),
                         _scalar(records, "c_pos_hat"),
                         _scalar(records, "lam"), _scalar(records, "sigma"),
                         _scalar(records, "objective"))
    if kind == "klcc":
        kernel = records.take("kernel")
        if len(kernel) != 1:
            raise ModelIoError("field 'kernel' must hold one value")
        width_tokens = records.maybe("rbf_width")
        width = float(_parse_floats(width_tokens)[0]) if width_tokens else None
        spec = KernelSpec(kernel[0], width)
        alphas = _parse_floats(records.take("alphas"))
        shape = records.take("train_features")
        if len(shape) != 2:
            raise ModelIoError("field 'train_features' needs rows and cols")
        rows, cols = int(shape[0]), int(shape[1])
        feats = np.empty((rows, cols))
        for i in range(rows):
            row = _parse_floats(records.take_raw())
            if row.size != cols:
                raise ModelIoError(
                    f"train_features row {i + 1} has {row.size} values, "
                    f"expected {cols}")
            feats[i] = row
        return KernelLccModel(alphas, feats, spec,
                              _scalar(records, "c_neg_hat"),
                              _scalar(records, "c_pos_hat"),
                              _scalar(records, "l_hat"),
                              _scalar(records, "lam"),
                              _scalar(records, "sigma"),
                              _parse_floats(records.take("epsilons")))
    if kind == "lda":
        weight = _parse_floats(records.take("weight"))
        return LdaModel(weight, _scalar(records, "k"),
                        _scalar(records, "lambda_reg"))
    weight = _parse_floats(records.take("weight"))
    return SvmModel(weight, _scalar(records, "intercept"),
                    _scalar(records, "lam"))


def _read_discriminator(records: _Records) -> Discriminator | None:
    tokens = records.maybe("discriminator")
    if tokens is None:
        return None
    if len(tokens) != 1:
        raise ModelIoError("field 'discriminator' must hold one value")
    kind = tokens[0]
    if kind == "dist":
        return Discriminator(kind="dist",
                             threshold=_scalar(records, "d_threshold"))
    if kind == "one_nn":
        values = _parse_floats(records.take("d_values"))
        labels = np.array([int(t) for t in records.take("d_labels")],
                          dtype=np.int64)
        return Discriminator(kind="one_nn", values=values, labels=labels)
    if kind == "one_sv":
        return Discriminator(kind="one_sv",
                             scale=_scalar(records, "d_scale"),
                             weight=_scalar(records, "d_weight"),
                             intercept=_scalar(records, "d_intercept"),
                             h=_scalar(records, "d_h"))
    raise ModelIoError(f"unknown discriminator kind {kind!r}")


def load_classifier(path: str) -> SavedClassifier:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ModelIoError("empty model file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != FORMAT_HEADER:
        raise ModelIoError("not a model file (bad header line)")
    if header[1] != str(FORMAT_VERSION):
        raise ModelIoError(f"unsupported model file version {header[1]!r}; "
                           f"this build reads version {FORMAT_VERSION}")
    records = _Records(lines[1:])
    kind_tokens = records.take("kind")
    if len(kind_tokens) != 1 or kind_tokens[0] not in KIND_NAMES:
        raise ModelIoError(f"unknown model kind {kind_tokens!r}")
    kind = kind_tokens[0]
    original = records.maybe("original_n")
    original_n = int(original[0]) if original else None
    kept_tokens = records.maybe("kept_columns")
    kept = (np.array([int(t) for t in kept_tokens], dtype=np.int64)
            if kept_tokens is not None else None)
    norm = None
    means_tokens = records.maybe("normalizer_means")
    if means_tokens is not None:
        means = _parse_floats(means_tokens)
        stds = _parse_floats(records.take("normalizer_stds"))
        norm = Normalizer(means, stds)
    model = _read_model(kind, records)
    rule = _read_discriminator(records)
    if records.peek_key() is not None:
        raise ModelIoError(
            f"unexpected trailing field {records.peek_key()!r}")
    return SavedClassifier(kind, model, rule, norm, kept, original_n)


def _project(saved: SavedClassifier, feats: np.ndarray) -> np.ndarray:
    if saved.kind == "lcc":
        return transform(saved.model, feats)
    return ktransform(saved.model, feats)


def predict_saved(saved: SavedClassifier,
                  raw_features) -> tuple[np.ndarray, np.ndarray]:
    """Labels and continuous scores for raw (unnormalized) input rows."""
    feats = np.asarray(raw_features, dtype=np.float64)
    if feats.ndim != 2:
        raise ModelIoError("prediction input must be a 2-D array")
    if saved.original_n is not None and feats.shape[1] != saved.original_n:
        raise ModelIoError(
            f"input has {feats.shape[1]} columns, model expects "
            f"{saved.original_n}")
    if saved.kept_columns is not None:
        feats = feats[:, saved.kept_columns]
    if saved.normalizer is not None:
        feats = normalize_features(saved.normalizer, feats)
    if feats.size == 0:
        return (np.zeros(feats.shape[0], dtype=np.int64),
                np.zeros(feats.shape[0]))
    if saved.discriminator is not None:
        projected = _project(saved, feats)
        return (discriminate(saved.discriminator, projected),
                discriminator_score(saved.discriminator, projected))
    if saved.kind == "lcc":
        return predict(saved.model, feats), score(saved.model, feats)
    if saved.kind == "fqcc":
        return fqcc_predict(saved.model, feats), fqcc_score(saved.model, feats)
    if saved.kind == "klcc":
        return kpredict(saved.model, feats), kscore(saved.model, feats)
    if saved.kind == "lda":
        return lda_predict(saved.model, feats), lda_score(saved.model, feats)
    return svm_predict(saved.model, feats), svm_score(saved.model, feats)
