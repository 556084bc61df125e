#!/usr/bin/env python3
"""Convert bundled UCI datasets into the ensbench CSV + schema format.

The raw files come from PyPI packages that ship copies of the UCI
repository data, so no network access beyond a package index is needed:

    pip download --no-deps --no-binary=:all: Orange3==3.4.0
    pip download --no-deps keel-ds==0.2.5 imbalanced-databases==0.1.1 pydataset==0.2.0

Usage: convert_datasets.py <download-dir> <out-dir>
"""

import csv
import io
import re
import sys
import tarfile
import zipfile
from pathlib import Path

MISSING = "?"


def clean_token(tok):
    tok = tok.strip().strip('"')
    if tok in ("", "?", "NA", "nan"):
        return MISSING
    return re.sub(r"[\s,|]+", "_", tok)


def clean_name(name):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name.strip()).strip("_") or "f"


class Table:
    def __init__(self, names, kinds, rows, label_col):
        self.names = names
        self.kinds = kinds  # "c" or "d" per column (label excluded)
        self.rows = rows
        self.label_col = label_col

    def write(self, out_dir, name, class_order=None):
        feats = [i for i in range(len(self.names)) if i != self.label_col]
        labels = [r[self.label_col] for r in self.rows]
        assert MISSING not in labels, name
        classes = class_order or sorted(set(labels), key=natural_key)
        schema = []
        used = set()
        keep = []
        for i in feats:
            col = [r[i] for r in self.rows]
            fname = clean_name(self.names[i])
            while fname in used:
                fname += "_"
            if self.kinds[i] == "c":
                for v in col:
                    if v != MISSING:
                        float(v)
                schema.append(f"feature {fname} continuous")
            else:
                values = sorted({v for v in col if v != MISSING}, key=natural_key)
                if len(values) < 2:
                    print(f"  {name}: dropping constant feature {fname}")
                    continue
                schema.append(f"feature {fname} discrete {'|'.join(values)}")
            used.add(fname)
            keep.append(i)
        schema.append(f"class {'|'.join(classes)}")
        (out_dir / f"{name}.schema").write_text("\n".join(schema) + "\n")
        with open(out_dir / f"{name}.csv", "w", newline="") as fh:
            for r in self.rows:
                fh.write(",".join([r[i] for i in keep] + [r[self.label_col]]) + "\n")
        print(f"{name}: {len(self.rows)} rows, {len(keep)} features, {len(classes)} classes")


def natural_key(s):
    try:
        return (0, float(s), s)
    except ValueError:
        return (1, 0.0, s)


def orange_tab(tar, member, keep_ignored=False):
    text = tar.extractfile(member).read().decode("utf-8")
    lines = text.rstrip("\n").split("\n")
    names = lines[0].split("\t")
    types = lines[1].split("\t")
    flags = lines[2].split("\t") + [""] * len(names)
    label_col = next(i for i, f in enumerate(flags) if "class" in f)
    skip = {i for i, f in enumerate(flags[: len(names)]) if f.strip() in ("i", "ignore", "meta")}
    if keep_ignored:
        skip = set()
    rows = []
    for line in lines[3:]:
        cells = line.split("\t")
        cells += [""] * (len(names) - len(cells))
        rows.append([clean_token(c) for c in cells])
    kinds = []
    for t in types:
        t = t.strip()
        kinds.append("c" if t in ("c", "continuous") else "d")
    keep = [i for i in range(len(names)) if i not in skip]
    return Table(
        [names[i] for i in keep],
        [kinds[i] for i in keep],
        [[r[i] for i in keep] for r in rows],
        keep.index(label_col),
    )


def keel_dat(text, kinds=None):
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        rows.append([clean_token(c) for c in line.split(",")])
    width = len(rows[0])
    names = [f"a{i + 1}" for i in range(width - 1)] + ["class"]
    if kinds is None:
        kinds = ["c"] * (width - 1)
    return Table(names, kinds + ["d"], rows, width - 1)


def plain_rows(text, sep=","):
    out = []
    for line in text.splitlines():
        if line.strip():
            cells = line.split() if sep is None else line.split(sep)
            out.append([clean_token(c) for c in cells])
    return out


def main():
    src = Path(sys.argv[1])
    out = Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)

    orange = tarfile.open(src / "Orange3-3.4.0.tar.gz")
    base = "Orange3-3.4.0/Orange/datasets/"
    orange_tab(orange, base + "voting.tab").write(out, "house-votes-84")
    orange_tab(orange, base + "glass.tab").write(out, "glass")
    orange_tab(orange, base + "iris.tab").write(out, "iris")
    orange_tab(orange, base + "crx.tab").write(out, "credit-a")
    orange_tab(orange, base + "heart_disease.tab").write(out, "heart-cleveland")
    orange_tab(orange, base + "vehicle.tab").write(out, "vehicle")
    iono = orange_tab(orange, base + "ionosphere.tab", keep_ignored=True)
    iono.kinds = ["c" if i != iono.label_col else "d" for i in range(len(iono.names))]
    iono.write(out, "ionosphere")

    # Original 699-row Wisconsin data with its 16 missing Bare_Nuclei cells.
    pyd = tarfile.open(src / "pydataset-0.2.0.tar.gz")
    res = tarfile.open(fileobj=pyd.extractfile("pydataset-0.2.0/pydataset/resources.tar.gz"))
    biopsy = res.extractfile("resources/rdata/csv/MASS/biopsy.csv").read().decode()
    recs = list(csv.reader(io.StringIO(biopsy)))
    header, body = recs[0], recs[1:]
    names = ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size",
             "bare_nuclei", "chromatin", "nucleoli", "mitoses", "class"]
    rows = [[clean_token(c) for c in r[2:]] for r in body]
    Table(names, ["c"] * 9 + ["d"], rows, 9).write(out, "breast-cancer-w")

    keel = zipfile.ZipFile(src / "keel_ds-0.2.5-py3-none-any.whl")
    raw = "keel_ds/data/balanced/raw/"
    read = lambda n: keel.read(raw + n).decode("utf-8", "replace")
    keel_dat(read("pima.dat")).write(out, "diabetes")
    keel_dat(read("sonar.dat")).write(out, "sonar")
    keel_dat(read("segment.dat")).write(out, "segmentation")
    keel_dat(read("satimage.dat")).write(out, "satellite")
    keel_dat(read("letter.dat")).write(out, "letter")
    keel_dat(read("splice.dat"), ["d"] * 60).write(out, "splice")
    keel_dat(read("chess.dat"), ["d"] * 36).write(out, "kr-vs-kp")

    imb = zipfile.ZipFile(src / "imbalanced_databases-0.1.1-py3-none-any.whl")
    data = "imbalanced_databases/data/"
    hep = plain_rows(imb.read(data + "hepatitis/hepatitis.data.txt").decode())
    hep_names = ["class", "age", "sex", "steroid", "antivirals", "fatigue", "malaise",
                 "anorexia", "liver_big", "liver_firm", "spleen_palpable", "spiders",
                 "ascites", "varices", "bilirubin", "alk_phosphate", "sgot", "albumin",
                 "protime", "histology"]
    hep_kinds = ["d", "c"] + ["d"] * 12 + ["c"] * 5 + ["d"]
    Table(hep_names, hep_kinds, hep, 0).write(out, "hepatitis")

    ger = plain_rows(imb.read(data + "german/german.data.txt").decode(), sep=None)
    ger_names = ["checking", "duration", "history", "purpose", "amount", "savings",
                 "employment", "installment_rate", "personal", "debtors", "residence",
                 "property", "age", "other_plans", "housing", "existing_credits", "job",
                 "liable", "telephone", "foreign", "class"]
    cont = {1, 4, 7, 10, 12, 15, 17}
    ger_kinds = ["c" if i in cont else "d" for i in range(20)] + ["d"]
    Table(ger_names, ger_kinds, ger, 20).write(out, "credit-g")


if __name__ == "__main__":
    main()
