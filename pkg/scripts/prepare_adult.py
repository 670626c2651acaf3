"""Convert the raw UCI Adult file (``adult.data``, no header) to a headered CSV.

    python scripts/prepare_adult.py path/to/adult.data data/adult.csv
"""

import csv
import sys

COLUMNS = ["age", "workclass", "fnlwgt", "education", "educationnum",
           "maritalstatus", "occupation", "relationship", "race", "sex",
           "capitalgain", "capitalloss", "hoursperweek", "nativecountry", "salary"]


def main(src, dst):
    n = 0
    with open(src) as fin, open(dst, "w", newline="") as fout:
        w = csv.writer(fout)
        w.writerow(COLUMNS)
        for line in fin:
            cells = [c.strip() for c in line.strip().split(",")]
            if len(cells) != len(COLUMNS):
                continue
            cells[-1] = cells[-1].rstrip(".")
            w.writerow(cells)
            n += 1
    print(f"wrote {n} rows to {dst}", file=sys.stderr)


if __name__ == "__main__":
    main(*sys.argv[1:3])
