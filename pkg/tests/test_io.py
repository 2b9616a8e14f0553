import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightproj import (
    FrameSpec,
    InvalidInputError,
    MultOpSpec,
    SpectrumModel,
    classify,
    io,
    symmetric_dyadic_partition,
    tighten,
    tighten_multop,
)

floats = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def frames(draw):
    d = draw(st.integers(1, 6))
    m = draw(st.integers(1, 8))
    rows = draw(st.lists(st.lists(floats, min_size=d, max_size=d), min_size=m, max_size=m))
    return FrameSpec(d, rows)


@settings(max_examples=50)
@given(frames())
def test_frame_round_trip(frame):
    back = io.frame_from_dict(json.loads(io.dumps(io.frame_to_dict(frame))))
    assert back.dim == frame.dim and np.array_equal(back.vectors, frame.vectors)


def test_tighten_outputs_round_trip(rng):
    p, _, cert = tighten(rng.standard_normal((9, 5)))
    back = io.projection_from_dict(json.loads(io.dumps(io.projection_to_dict(p))))
    assert np.array_equal(back.basis, p.basis)
    cert_back = io.certificate_from_dict(json.loads(io.dumps(io.certificate_to_dict(cert))))
    assert cert_back == cert


@pytest.mark.parametrize(
    "model",
    [
        SpectrumModel.harmonic_shift(2.0, 1.0, 1.0),
        SpectrumModel.two_cluster(1.0, 2.0),
        SpectrumModel.alternating(1.0, 0.5, 1.0),
        SpectrumModel.compact_decay(1.0, 0.5),
        SpectrumModel.explicit_tail([1.0, 2.0], 5.0),
    ],
)
def test_model_and_classification_round_trip(model):
    back = io.model_from_dict(json.loads(io.dumps(io.model_to_dict(model))))
    assert back.family == model.family and back.params == model.params
    assert back.limit_points == model.limit_points
    c = classify(model)
    assert io.classification_from_dict(json.loads(io.dumps(io.classification_to_dict(c)))) == c


def test_multop_round_trip():
    spec = MultOpSpec((0.0, 2.0), ((1.0, (0.0, 1.0)), (2.0, (0.0, 0.0, 0.5))))
    parts = symmetric_dyadic_partition(4)
    s2, p2 = io.multop_from_dict(json.loads(io.dumps(io.multop_to_dict(spec, parts))))
    assert s2.pieces == spec.pieces and p2.sets == parts.sets
    res = tighten_multop(spec, 4)
    assert io.plan_from_dict(json.loads(io.dumps(io.plan_to_dict(res.plan)))) == res.plan
    bs = io.block_system_from_dict(json.loads(io.dumps(io.block_system_to_dict(res.stage1))))
    assert bs.eigenvalues == res.stage1.eigenvalues
    cert = io.multop_certificate_from_dict(json.loads(io.dumps(io.multop_certificate_to_dict(res.certificate))))
    assert cert == res.certificate


def test_deterministic_output(rng):
    vecs = rng.standard_normal((6, 4))
    docs = {io.dumps(io.certificate_to_dict(tighten(vecs, seed=3).certificate)) for _ in range(3)}
    assert len(docs) == 1


@pytest.mark.parametrize(
    "doc",
    [{}, {"dim": 2}, {"dim": "2", "vectors": [[1, 0]]}, {"dim": 2, "vectors": [[1, 0, 0]]}, {"dim": 2, "vectors": [[1, None]]}],
)
def test_malformed_frame(doc):
    with pytest.raises(InvalidInputError):
        io.frame_from_dict(doc)


def test_malformed_model():
    with pytest.raises(InvalidInputError):
        io.model_from_dict({"family": "HarmonicShift", "params": {"beta": 2}})


def test_nan_is_not_serialized():
    with pytest.raises(ValueError):
        io.dumps({"x": float("nan")})
