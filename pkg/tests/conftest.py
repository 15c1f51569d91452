import pathlib

import pytest

from viterbihmm import read_model, read_observations

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def obs():
    return read_observations(DATA_DIR / "mfcc_sample.obs")


@pytest.fixture
def proto():
    return read_model(DATA_DIR / "proto_2emit.hmm")
