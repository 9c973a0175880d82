import pytest

from seqdfa.office import default_office_fixture, gen_office
from seqdfa.traces import load_dataset


@pytest.fixture(scope="session")
def office_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "office.jsonl"
    gen_office(default_office_fixture(), path)
    return str(path)


@pytest.fixture(scope="session")
def office_dataset(office_path):
    return load_dataset(office_path)
