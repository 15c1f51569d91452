"""Plain-text readers and writers for observations, models, alignments and
training reports.

Both grammars are line oriented.  '#' starts a comment, blank lines are
skipped, '.' is the only decimal separator, and floats are written with
their shortest round-trip representation so that rewritten files are byte
stable.  Parse errors always carry a 1-based line number.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .errors import DataFormatError, ModelValidationError
from .model import DEFAULT_VARIANCE_FLOOR, GaussianState, HmmModel, validate
from .training import TrainingReport
from .viterbi import AlignmentResult


@contextmanager
def _reading(source):
    if hasattr(source, "read"):
        yield source
    else:
        with open(source, "r", encoding="utf-8") as handle:
            yield handle


@contextmanager
def _writing(sink):
    if hasattr(sink, "write"):
        yield sink
    else:
        with open(sink, "w", encoding="utf-8") as handle:
            yield handle


def _content_lines(handle):
    """Yield (line_number, text) for lines that carry content."""
    for number, raw in enumerate(handle, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield number, text


def _floats(tokens, expected: int, number: int) -> list[float]:
    if len(tokens) != expected:
        raise DataFormatError(f"expected {expected} numbers, got {len(tokens)}", line=number)
    values = []
    for token in tokens:
        try:
            values.append(float(token))
        except ValueError:
            raise DataFormatError(f"not a number: {token!r}", line=number) from None
    return values


def read_observations(source) -> np.ndarray:
    """Parse an observation file into a T x D float matrix.

    One observation per line, whitespace-separated decimal floats; every
    data line must have the same field count.
    """
    rows = []
    width = None
    with _reading(source) as handle:
        for number, text in _content_lines(handle):
            tokens = text.split()
            if width is None:
                width = len(tokens)
            row = _floats(tokens, width, number)
            for d, value in enumerate(row):
                if not np.isfinite(value):
                    raise DataFormatError(f"non-finite value in field {d + 1}", line=number)
            rows.append(row)
    if not rows:
        raise DataFormatError("no observation data lines found")
    return np.asarray(rows, dtype=np.float64)


def write_observations(obs, sink) -> None:
    obs = np.asarray(obs, dtype=np.float64)
    with _writing(sink) as handle:
        for row in obs:
            handle.write(" ".join(repr(float(v)) for v in row) + "\n")


def read_model(source, variance_floor: float = DEFAULT_VARIANCE_FLOOR) -> HmmModel:
    """Parse a model file and validate the result.

    Grammar: ``NUMSTATES <N>``, ``DIM <D>``, then for each emitting state
    ``STATE <j>`` with ``MEAN`` and ``VAR`` lines, then ``TRANSP`` followed
    by N rows of N linear probabilities.
    """
    with _reading(source) as handle:
        lines = list(_content_lines(handle))
    pos = 0

    def next_line(expect: str):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise DataFormatError(f"unexpected end of file, expected {expect}", line=last)
        number, text = lines[pos]
        pos += 1
        return number, text.split()

    number, tokens = next_line("NUMSTATES")
    if tokens[0] != "NUMSTATES" or len(tokens) != 2:
        raise DataFormatError(f"expected 'NUMSTATES <N>', got {' '.join(tokens)!r}", line=number)
    try:
        num_states = int(tokens[1])
    except ValueError:
        raise DataFormatError(f"not an integer: {tokens[1]!r}", line=number) from None
    if num_states < 3:
        raise DataFormatError(f"NUMSTATES must be >= 3, got {num_states}", line=number)

    number, tokens = next_line("DIM")
    if tokens[0] != "DIM" or len(tokens) != 2:
        raise DataFormatError(f"expected 'DIM <D>', got {' '.join(tokens)!r}", line=number)
    try:
        dim = int(tokens[1])
    except ValueError:
        raise DataFormatError(f"not an integer: {tokens[1]!r}", line=number) from None
    if dim < 1:
        raise DataFormatError(f"DIM must be >= 1, got {dim}", line=number)

    states = []
    for j in range(2, num_states):
        number, tokens = next_line(f"STATE {j}")
        if tokens[0] != "STATE":
            raise DataFormatError(f"expected 'STATE {j}', got {' '.join(tokens)!r}", line=number)
        if len(tokens) != 2 or tokens[1] != str(j):
            raise DataFormatError(f"expected 'STATE {j}' (states are listed in order), got {' '.join(tokens)!r}", line=number)
        number, tokens = next_line("MEAN")
        if tokens[0] != "MEAN":
            raise DataFormatError(f"expected 'MEAN', got {tokens[0]!r}", line=number)
        mean = _floats(tokens[1:], dim, number)
        number, tokens = next_line("VAR")
        if tokens[0] != "VAR":
            raise DataFormatError(f"expected 'VAR', got {tokens[0]!r}", line=number)
        var = _floats(tokens[1:], dim, number)
        states.append(GaussianState(mean=mean, variance=var))

    number, tokens = next_line("TRANSP")
    if tokens != ["TRANSP"]:
        raise DataFormatError(f"expected 'TRANSP', got {' '.join(tokens)!r}", line=number)
    rows = []
    for _ in range(num_states):
        number, tokens = next_line("transition row")
        rows.append(_floats(tokens, num_states, number))
    if pos < len(lines):
        number, text = lines[pos]
        raise DataFormatError(f"unexpected trailing content: {text!r}", line=number)

    model = HmmModel(trans=rows, states=tuple(states), variance_floor=variance_floor)
    violations = validate(model)
    if violations:
        raise ModelValidationError(violations)
    return model


def write_model(model: HmmModel, sink) -> None:
    """Write a model in the canonical layout accepted by :func:`read_model`."""
    with _writing(sink) as handle:
        handle.write(f"NUMSTATES {model.num_states}\n")
        handle.write(f"DIM {model.dim}\n")
        for j in model.emitting_range:
            state = model.state(j)
            handle.write(f"STATE {j}\n")
            handle.write("MEAN " + " ".join(repr(float(v)) for v in state.mean) + "\n")
            handle.write("VAR " + " ".join(repr(float(v)) for v in state.variance) + "\n")
        handle.write("TRANSP\n")
        for row in model.trans:
            handle.write(" ".join(repr(float(v)) for v in row) + "\n")


def write_alignment(result: AlignmentResult, sink) -> None:
    """Write LOGPROB and PATH header lines, then one ``t state`` line per frame."""
    with _writing(sink) as handle:
        handle.write(f"LOGPROB {result.log_score!r}\n")
        handle.write("PATH " + " ".join(str(s) for s in result.path) + "\n")
        for t, state in enumerate(result.path[1:-1], start=1):
            handle.write(f"{t} {state}\n")


def format_report_lines(report: TrainingReport) -> list[str]:
    lines = []
    for k, score in enumerate(report.scores, start=1):
        delta = "-" if k == 1 else repr(report.deltas[k - 2])
        lines.append(f"ITER {k} LOGPROB {score!r} DELTA {delta}")
    lines.append("CONVERGED " + ("yes" if report.converged else "no"))
    return lines


def write_report(report: TrainingReport, sink) -> None:
    """One ``ITER k LOGPROB p DELTA d`` line per iteration, then the verdict."""
    with _writing(sink) as handle:
        for line in format_report_lines(report):
            handle.write(line + "\n")
