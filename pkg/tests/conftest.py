import pytest

from phonofeat.frontend import bundled_lexicon, bundled_mapping
from phonofeat.ipa import tokenize
from phonofeat.zeroshot import PhonemeInventory

# Loosely an RP English inventory, as IPA.
RP_IPA = (
    "p b t d k ɡ t͡ʃ d͡ʒ f v θ ð s z ʃ ʒ h m n ŋ l ɹ j w "
    "i ɪ e æ ɑ ɒ ɔ ʊ u ʌ ə ɜ"
)

ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def rp_inventory():
    return PhonemeInventory.from_segments("rp", tokenize(RP_IPA))


@pytest.fixture(scope="session")
def de_lexicon():
    return bundled_lexicon("de")


@pytest.fixture(scope="session")
def de_mapping():
    return bundled_mapping("de")


@pytest.fixture(scope="session")
def en_lexicon():
    return bundled_lexicon("en")


@pytest.fixture(scope="session")
def en_mapping():
    return bundled_mapping("en")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
