import pytest

from ironymarkers.corpus import Platform, make_utterance
from ironymarkers.lexicons import default_resources


@pytest.fixture(scope="session")
def res():
    return default_resources()


@pytest.fixture(scope="session")
def utt(res):
    def make(text, platform=Platform.TWITTER, id="u"):
        return make_utterance(text, res, id=id, platform=platform)
    return make
