"""Regenerate compounds.sdf from corpus.smi plus the property table below.

Run from the repository root:  python tests/data/make_fixtures.py
Committed output keeps the test fixtures stable; rerun only when the
corpus or the property table changes.
"""

from pathlib import Path

from chemserve.formats import parse_smiles, write_sdf
from chemserve.formats.sdf import SdfEntry

HERE = Path(__file__).parent

# chembl id offset -> (max_phase, pref_name); ids run CHEMBL1000..CHEMBL1049
PHASES = {0: 4, 1: 4, 2: 4, 3: 2, 4: 2}
NAMES = {
    0: "CRESOLIN",
    1: "ETHYLPHENOL",
    2: "PROPYLPHENOL",
    3: "ASPIRIN",
    4: "NICOTINE",
    5: "ETHANOL",
    8: "NAPHTHALENE",
    12: "ACETIC ACID",
    16: "TRIETHYLAMINE",
    43: "TOLUENE",
}


def main() -> None:
    smiles = [line.strip() for line in (HERE / "corpus.smi").read_text().splitlines() if line.strip()]
    entries = []
    for i, smi in enumerate(smiles):
        props = {
            "chembl_id": f"CHEMBL{1000 + i}",
            "max_phase": str(PHASES.get(i, 0)),
        }
        if i in NAMES:
            props["pref_name"] = NAMES[i]
        entries.append(SdfEntry(parse_smiles(smi), props))
    (HERE / "compounds.sdf").write_text(write_sdf(entries), encoding="utf-8")
    print(f"wrote {len(entries)} entries to compounds.sdf")


if __name__ == "__main__":
    main()
