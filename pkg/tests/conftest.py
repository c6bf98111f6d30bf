import random
from pathlib import Path

import httpx
import pytest
from fastapi.testclient import TestClient

from chemserve.client import Transport, resource
from chemserve.formats import parse_smiles
from chemserve.molgraph import MolBuilder
from chemserve.search import build_index
from chemserve.service import create_app
from chemserve.store import RecordStore

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus_smiles() -> list[str]:
    return [line.strip() for line in (DATA / "corpus.smi").read_text().splitlines() if line.strip()]


@pytest.fixture(scope="session")
def corpus_mols(corpus_smiles):
    return [parse_smiles(s) for s in corpus_smiles]


@pytest.fixture(scope="session")
def fixture_store() -> RecordStore:
    store = RecordStore()
    report = store.ingest_sdf((DATA / "compounds.sdf").read_text())
    assert report.ingested == 50 and not report.errors
    for resource_name, filename in (
        ("target", "targets.tsv"),
        ("activity", "activities.tsv"),
        ("mechanism", "mechanisms.tsv"),
    ):
        report = store.ingest_tsv(resource_name, (DATA / filename).read_text())
        assert not report.errors
    return store


@pytest.fixture(scope="session")
def fixture_index(fixture_store):
    return build_index(fixture_store.compounds())


@pytest.fixture(scope="session")
def app(fixture_store, fixture_index):
    return create_app(fixture_store, fixture_index)


@pytest.fixture()
def http(app):
    with TestClient(app) as client:
        yield client


def permute_molecule(mol, rng: random.Random):
    """Rebuild with shuffled atom indices and bond order; same abstract graph."""
    perm = list(range(len(mol.atoms)))
    rng.shuffle(perm)
    new_of = {old: new for new, old in enumerate(perm)}
    builder = MolBuilder()
    for old in perm:
        atom = mol.atoms[old]
        builder.add_atom(atom.symbol, atom.formal_charge, atom.aromatic, atom.explicit_h)
    bonds = list(mol.bonds)
    rng.shuffle(bonds)
    for bond in bonds:
        builder.add_bond(new_of[bond.a], new_of[bond.b], bond.order)
    return builder.finalize()


_CHAIN_ATOMS = "CCCCCCNNOOS"  # valence-safe when glued into scaffolds at both ends
_SCAFFOLDS = (
    "{a}",
    "{a}.{b}",
    "{a}c1ccccc1",
    "{a}c1ccc({b})cc1",
    "{a}c1ccncc1",
    "{a}C1CCCCC1",
    "{a}C1CCC({b})CC1",
    "{a}OC(=O){b}",
    "{a}N({b})C",
    "{a}C(=O)N{b}",
    "{a}c1ccc2ccccc2c1",
)


def random_chain(rng: random.Random, length: int) -> str:
    out = []
    for _ in range(length):
        sym = rng.choice(_CHAIN_ATOMS)
        out.append(sym)
        # a branch adds a third bond; only C and N can always take one
        if sym in "CN" and rng.random() < 0.25:
            out.append("(C)")
    return "".join(out) or "C"


def synthetic_smiles(rng: random.Random) -> str:
    scaffold = rng.choice(_SCAFFOLDS)
    return scaffold.format(
        a=random_chain(rng, rng.randint(1, 5)), b=random_chain(rng, rng.randint(1, 4))
    )


@pytest.fixture(scope="session")
def synthetic_1000():
    """Deterministic pool of 1000 (id, molecule) pairs for search tests."""
    rng = random.Random(20150827)
    out = []
    for i in range(1000):
        out.append((f"SYN{i:04d}", parse_smiles(synthetic_smiles(rng))))
    return out


class CountingTransport(Transport):
    """Client transport over the in-process app; counts real requests."""

    def __init__(self, app):
        super().__init__(
            httpx.Client(transport=httpx.ASGITransport(app=app), base_url="http://testserver")
        )
        self.requests = 0

    def get(self, url: str) -> bytes:
        self.requests += 1
        return super().get(url)


@pytest.fixture()
def client_factory(app, tmp_path):
    """(resource_name) -> (LazyQuery, CountingTransport) with a fresh cache dir."""

    def make(resource_name: str, **kwargs):
        transport = CountingTransport(app)
        query = resource(
            "http://testserver",
            resource_name,
            transport=transport,
            cache_directory=tmp_path / "cache",
            **kwargs,
        )
        return query, transport

    return make
