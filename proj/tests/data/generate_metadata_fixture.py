#!/usr/bin/env python3
"""Writes metadata_sample.csv: 200 synthetic rows in the NIH metadata layout.

Prints the label-stage tallies the tests expect. Rerunning reproduces the
file byte for byte.
"""
import random

LABELS = ["Atelectasis", "Cardiomegaly", "Effusion", "Infiltration", "Mass",
          "Nodule", "Pneumothorax", "Consolidation", "Edema", "Emphysema",
          "Fibrosis", "Pleural_Thickening", "Hernia", "No Finding"]
HEADER = ("Image Index,Finding Labels,Follow-up #,Patient ID,Patient Age,"
          "Patient Gender,View Position,OriginalImage[Width,Height],"
          "OriginalImagePixelSpacing[x,y],")


def main():
    rng = random.Random(20260101)
    rows, tally = [], {"parse_error": 0, "pneumonia_only": 0, "multi_factor": 0}
    single = {}
    for i in range(200):
        image_id = f"{i // 3 + 1:08d}_{i % 3:03d}.png"
        kind = i % 20
        if kind == 0:
            labels = "Pneumonia"
            tally["pneumonia_only"] += 1
        elif kind in (1, 2):
            labels = "|".join(sorted(rng.sample(LABELS[:13], 2)))
            tally["multi_factor"] += 1
        elif kind == 3:
            keep = rng.choice(LABELS[:13])
            labels = "|".join(sorted(["Pneumonia", keep]))
            single[keep] = single.get(keep, 0) + 1
        else:
            keep = LABELS[i % 14] if i < 40 else (
                "No Finding" if rng.random() < 0.5 else rng.choice(LABELS[:13]))
            labels = keep
            single[keep] = single.get(keep, 0) + 1
        age = str(max(1, min(95, int(rng.gauss(47, 16)))))
        if i == 57:
            age = "412"   # implausible but numeric: left to the detectors
        if i == 58:
            age = "063Y"  # older export format, leading integer is the age
        if i == 99:
            age = "unknown"
        gender = "M" if rng.random() < 0.56 else "F"
        row = [image_id, labels, str(i % 7), str(i // 3 + 1), age, gender,
               rng.choice(["PA", "AP"]), "2500", "2048", "0.143", "0.143", ""]
        if "," in labels or i % 50 == 5:
            row[1] = '"' + labels + '"'
        rows.append(row)
    # Row 99 becomes a parse error; undo its label tally.
    r99 = rows[99][1].strip('"')
    names = [n for n in r99.split("|") if n != "Pneumonia"]
    if len(names) == 1:
        single[names[0]] -= 1
    elif not names:
        tally["pneumonia_only"] -= 1
    else:
        tally["multi_factor"] -= 1
    tally["parse_error"] += 1

    with open("metadata_sample.csv", "w", newline="") as f:
        f.write(HEADER + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    print("rows", len(rows))
    print(tally)
    print("single_factor", sum(single.values()))
    print({k: single[k] for k in LABELS if k in single})


if __name__ == "__main__":
    main()
