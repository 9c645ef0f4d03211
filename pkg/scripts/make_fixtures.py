"""Regenerate the CSV fixtures shipped in src/qsarmap/data/."""

from pathlib import Path

from qsarmap.synthetic import hept_like_dataset, carcinogenicity_dataset, write_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "qsarmap" / "data"

if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    write_csv(carcinogenicity_dataset(), DATA / "carcinogenicity.csv")
    write_csv(hept_like_dataset(), DATA / "hept_like.csv")
    print("wrote fixtures to", DATA)
