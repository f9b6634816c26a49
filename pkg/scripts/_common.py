"""Shared plumbing for the reproduction scripts: output paths and serialisation."""

import argparse
import logging
import os
import time

from mlrabi.cli import write_atomic
from mlrabi.records import records_to_csv


def parser(description, stochastic=False, systems=None):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--threads", type=int, default=1)
    if stochastic:
        p.add_argument("--seed", type=int, default=42)
    if systems is not None:
        p.add_argument("--systems", type=int, default=systems)
    return p


def save(records, out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    write_atomic(path, records_to_csv(records))
    print(f"{len(records)} records -> {path}")
    return path


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        print(f"elapsed {time.perf_counter() - self.t0:.1f} s")


logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
