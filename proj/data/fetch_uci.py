#!/usr/bin/env python3
"""Download the remaining UCI datasets and normalize them to the repo layout.

iris.csv and wine.csv ship with the repository. The files below cannot be
redistributed from here, so fetch them straight from the UCI archive:

    python3 data/fetch_uci.py [--dest data/]

Produces diabetes.csv (Pima Indians Diabetes, 768x8), zoo.csv (101x16,
animal-name column dropped) and glass.csv (214x9, Id column dropped),
each with a header row and the class label in the last column.
"""

import argparse
import csv
import io
import sys
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu/static/public"

DIABETES_COLUMNS = [
    "pregnancies", "glucose", "blood_pressure", "skin_thickness",
    "insulin", "bmi", "diabetes_pedigree", "age", "outcome",
]

ZOO_COLUMNS = [
    "hair", "feathers", "eggs", "milk", "airborne", "aquatic", "predator",
    "toothed", "backbone", "breathes", "venomous", "fins", "legs", "tail",
    "domestic", "catsize", "type",
]

GLASS_COLUMNS = ["ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe", "type"]


def fetch_zip_member(url, suffix):
    with urllib.request.urlopen(url, timeout=60) as resp:
        archive = zipfile.ZipFile(io.BytesIO(resp.read()))
    for name in archive.namelist():
        if name.endswith(suffix):
            return archive.read(name).decode("utf-8")
    raise RuntimeError(f"no member ending in {suffix} inside {url}")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dest", default="data")
    args = parser.parse_args()

    # Pima Indians Diabetes: 768 rows, 8 numeric features, binary outcome.
    # The UCI entry was withdrawn at some point; the same file is mirrored in
    # the "pima-indians-diabetes" folder of several archives. Try UCI first.
    try:
        text = fetch_zip_member(f"{UCI}/228/pima+indians+diabetes.zip", ".data")
    except Exception as err:  # noqa: BLE001
        print(f"diabetes via UCI failed ({err}); trying raw mirror", file=sys.stderr)
        raw = ("https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
               "pima-indians-diabetes.csv")
        with urllib.request.urlopen(raw, timeout=60) as resp:
            text = resp.read().decode("utf-8")
    rows = [line.split(",") for line in text.strip().splitlines() if line.strip()]
    assert len(rows) == 768 and len(rows[0]) == 9, "unexpected diabetes layout"
    write_csv(f"{args.dest}/diabetes.csv", DIABETES_COLUMNS, rows)

    # Zoo: drop the leading animal-name column, keep type (1..7) as label.
    text = fetch_zip_member(f"{UCI}/111/zoo.zip", "zoo.data")
    rows = [line.split(",")[1:] for line in text.strip().splitlines() if line.strip()]
    assert len(rows[0]) == 17, "unexpected zoo layout"
    write_csv(f"{args.dest}/zoo.csv", ZOO_COLUMNS, rows)

    # Glass: drop the leading Id column to avoid the index-to-class mapping.
    text = fetch_zip_member(f"{UCI}/42/glass+identification.zip", "glass.data")
    rows = [line.split(",")[1:] for line in text.strip().splitlines() if line.strip()]
    assert len(rows[0]) == 10, "unexpected glass layout"
    write_csv(f"{args.dest}/glass.csv", GLASS_COLUMNS, rows)


if __name__ == "__main__":
    main()
