"""
Dataset diversity report
========================

Run the whole pipeline over the bundled 12-face corpus and print the
diversity table. The same steps are available from the shell::

    facediversity extract --manifest <manifest.jsonl> --out out/
    facediversity report --features out/features.json --out out/
"""
import csv
import tempfile
from pathlib import Path

from facediversity.pipeline import run_extract, run_report
from facediversity.synthetic import bundled_corpus

out = Path(tempfile.mkdtemp(prefix="facediversity-"))
result = run_extract(bundled_corpus(), out, workers=2)
print(f"{len(result.rows)} faces measured, {len(result.rejections)} rejected")
run_report(out / "features.json", out)

with open(out / "report.csv") as fh:
    for row in csv.DictReader(fh):
        print(f"{row['Coding Scheme']:22s} {row['Measurement']:20s} "
              f"D={row['Simpson D']:>8s} E={row['Simpson E']:>8s} "
              f"H={row['Shannon H']:>8s} E={row['Shannon E']:>8s} mean={row['Mean']:>10s}")
print("outputs in", out)
